//! Numerical semigroups: membership sieve, minimal generators, Frobenius
//! number, genus, and Apéry sets.
//!
//! A numerical semigroup is a subset of the nonnegative integers that
//! contains 0, is closed under addition, and has finite complement. The
//! construction here sieves membership up to a proven bound, extracts the
//! minimal generators (atoms), and caches the Apéry set
//! `Ap(S) = { x in S : x - m not in S }` with respect to the multiplicity
//! `m` (the smallest nonzero element).

use num_integer::gcd;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on sieve length; turns runaway allocations into errors.
const MAX_SIEVE_LEN: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    minimal_generators: Vec<u64>,
    multiplicity: u64,
    /// membership[n] == (n is an element), for 0 <= n <= frobenius + 2m.
    membership: Vec<bool>,
    /// Largest integer not in the semigroup; -1 when the semigroup is all
    /// of the nonnegative integers.
    frobenius: i64,
    genus: u64,
    /// Ascending, cached at construction; exactly `multiplicity` values.
    apery: Vec<u64>,
}

impl NumericalSemigroup {
    /// Builds the semigroup generated by `gens`. Duplicate and redundant
    /// generators are dropped; the stored generators are exactly the atoms.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::invalid("at least one generator is required"));
        }
        if gens.contains(&0) {
            return Err(Error::invalid("generators must be positive"));
        }
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();

        let g = sorted.iter().copied().fold(0, gcd);
        if g != 1 {
            return Err(Error::InfiniteComplement { gcd: g });
        }

        let max_gen = *sorted.last().expect("nonempty");
        let mut bound = max_gen
            .checked_mul(max_gen)
            .and_then(|b| b.checked_add(1))
            .ok_or(Error::Overflow {
                context: "sizing the membership sieve",
            })?;

        // The square of the largest generator bounds the Frobenius number at
        // desk scale; the doubling loop certifies it by requiring m
        // consecutive members at the top of the sieve.
        let m = sorted[0];
        loop {
            if bound > MAX_SIEVE_LEN {
                return Err(Error::invalid(format!(
                    "generators too large: membership sieve would need {bound} entries"
                )));
            }
            let sieve = sieve_membership(&sorted, bound as usize);
            match sieve.iter().rposition(|&member| !member) {
                None => {
                    // No gaps at all: the semigroup is all of Z>=0.
                    return Ok(Self::finish(sieve, -1));
                }
                Some(f) if (f as u64) + m < bound => {
                    return Ok(Self::finish(sieve, f as i64));
                }
                Some(_) => bound = bound.checked_mul(2).ok_or(Error::Overflow {
                    context: "growing the membership sieve",
                })?,
            }
        }
    }

    /// Builds the semigroup whose Apéry set with respect to `m` is
    /// `{0} ∪ values`, where `values[i-1]` is the least element congruent to
    /// `i` mod `m`. The candidate is validated by the pairwise closure test
    /// and by recomputing the Apéry set of the constructed semigroup.
    pub fn from_apery_candidate(m: u64, values: &[u64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("multiplicity must be positive"));
        }
        if values.len() + 1 != m as usize {
            return Err(Error::invalid(format!(
                "expected {} values (one per nonzero residue class mod {m}), got {}",
                m - 1,
                values.len()
            )));
        }
        for (idx, &v) in values.iter().enumerate() {
            let r = (idx + 1) as u64;
            if v % m != r {
                return Err(Error::invalid(format!(
                    "values[{idx}] = {v} is not congruent to {r} mod {m}"
                )));
            }
        }

        // Closure: w_i + w_j >= w_{(i+j) mod m}, with w_0 = 0.
        let w = |i: usize| -> u64 {
            if i == 0 {
                0
            } else {
                values[i - 1]
            }
        };
        let mu = m as usize;
        for i in 0..mu {
            for j in i..mu {
                let k = (i + j) % mu;
                let sum = w(i).checked_add(w(j)).ok_or(Error::Overflow {
                    context: "Apéry candidate closure test",
                })?;
                if sum < w(k) {
                    return Err(Error::InvalidAperySet {
                        reason: format!(
                            "closure fails at (i, j) = ({i}, {j}): {} + {} < {}",
                            w(i),
                            w(j),
                            w(k)
                        ),
                    });
                }
            }
        }

        if m == 1 {
            return Self::from_generators(&[1]);
        }

        // Membership of {0} ∪ {w_i + km} ∪ mZ, sieved far enough to cover
        // the true Frobenius number plus two multiplicities.
        let max_value = values.iter().copied().max().unwrap_or(0).max(m);
        let len = max_value
            .checked_add(2 * m + 2)
            .ok_or(Error::Overflow {
                context: "sizing the Apéry candidate sieve",
            })?;
        if len > MAX_SIEVE_LEN {
            return Err(Error::invalid(format!(
                "Apéry values too large: membership sieve would need {len} entries"
            )));
        }
        let len = len as usize;
        let mut membership = vec![false; len];
        for i in 0..mu {
            let mut x = w(i) as usize;
            while x < len {
                membership[x] = true;
                x += mu;
            }
        }

        let frobenius = membership
            .iter()
            .rposition(|&member| !member)
            .map(|f| f as i64)
            .unwrap_or(-1);
        let s = Self::finish(membership, frobenius);

        let mut expected: Vec<u64> = Vec::with_capacity(mu);
        expected.push(0);
        expected.extend_from_slice(values);
        expected.sort_unstable();
        if s.apery != expected {
            return Err(Error::InvalidAperySet {
                reason: format!(
                    "recomputed Apéry set {:?} (multiplicity {}) differs from the candidate {:?}",
                    s.apery, s.multiplicity, expected
                ),
            });
        }
        Ok(s)
    }

    /// Finishes construction from a complete membership sieve. The sieve
    /// must be exact on `[0, len)` with `len > frobenius + multiplicity`.
    fn finish(membership: Vec<bool>, frobenius: i64) -> Self {
        debug_assert!(membership[0]);
        let multiplicity = membership
            .iter()
            .skip(1)
            .position(|&member| member)
            .map(|i| (i + 1) as u64)
            .unwrap_or(1);

        let member = |n: u64| -> bool {
            if (n as usize) < membership.len() {
                membership[n as usize]
            } else {
                n as i64 > frobenius
            }
        };

        // Atoms: nonzero elements with no decomposition into two nonzero
        // elements. Every atom is at most frobenius + multiplicity.
        let atom_upper = if frobenius < 0 {
            multiplicity
        } else {
            frobenius as u64 + multiplicity
        };
        let mut atoms = Vec::new();
        for n in 1..=atom_upper {
            if !member(n) {
                continue;
            }
            let decomposable =
                (multiplicity..=n / 2).any(|s| member(s) && member(n - s));
            if !decomposable {
                atoms.push(n);
            }
        }

        let genus = if frobenius < 0 {
            0
        } else {
            (1..=frobenius as u64).filter(|&n| !member(n)).count() as u64
        };

        // Apéry set: least member of each residue class mod m.
        let mut apery = Vec::with_capacity(multiplicity as usize);
        let mut seen = vec![false; multiplicity as usize];
        let mut found = 0usize;
        let mut n = 0u64;
        while found < multiplicity as usize {
            let r = (n % multiplicity) as usize;
            if !seen[r] && member(n) {
                seen[r] = true;
                apery.push(n);
                found += 1;
            }
            n += 1;
        }
        apery.sort_unstable();

        // Normalize the stored sieve to exactly frobenius + 2m + 1 entries
        // so equal semigroups compare equal regardless of construction path.
        let target = (frobenius + 2 * multiplicity as i64 + 1) as usize;
        let mut membership = membership;
        membership.resize(target, true);
        membership.truncate(target);

        let s = NumericalSemigroup {
            minimal_generators: atoms,
            multiplicity,
            membership,
            frobenius,
            genus,
            apery,
        };
        debug_assert_eq!(s.genus, s.apery_genus_checksum());
        s
    }

    /// Assembles a semigroup from parts the caller already knows to be
    /// consistent (used by the genus-tree enumerator, which maintains them
    /// incrementally). `membership` must have exactly frobenius + 2m + 1
    /// entries.
    pub(crate) fn from_raw_parts_unchecked(
        minimal_generators: Vec<u64>,
        multiplicity: u64,
        membership: Vec<bool>,
        frobenius: i64,
        genus: u64,
    ) -> Self {
        debug_assert_eq!(
            membership.len() as i64,
            frobenius + 2 * multiplicity as i64 + 1
        );
        let mut apery = Vec::with_capacity(multiplicity as usize);
        let mut seen = vec![false; multiplicity as usize];
        let mut found = 0usize;
        let mut n = 0usize;
        while found < multiplicity as usize {
            let r = n % multiplicity as usize;
            if !seen[r] && membership[n] {
                seen[r] = true;
                apery.push(n as u64);
                found += 1;
            }
            n += 1;
        }
        apery.sort_unstable();
        let s = NumericalSemigroup {
            minimal_generators,
            multiplicity,
            membership,
            frobenius,
            genus,
            apery,
        };
        debug_assert_eq!(s.genus, s.apery_genus_checksum());
        debug_assert_eq!(s.minimal_generators[0], s.multiplicity);
        s
    }

    /// Membership test. Values beyond the cached sieve are members exactly
    /// when they exceed the Frobenius number.
    pub fn contains(&self, n: u64) -> bool {
        if (n as usize) < self.membership.len() {
            self.membership[n as usize]
        } else {
            n as i64 > self.frobenius
        }
    }

    /// Signed membership test; negative integers are never elements.
    pub fn contains_int(&self, n: i64) -> bool {
        n >= 0 && self.contains(n as u64)
    }

    /// The atoms, ascending. The smallest is the multiplicity.
    pub fn minimal_generators(&self) -> &[u64] {
        &self.minimal_generators
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn embedding_dimension(&self) -> usize {
        self.minimal_generators.len()
    }

    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn frobenius_and_genus(&self) -> (i64, u64) {
        (self.frobenius, self.genus)
    }

    /// The Apéry set with respect to the multiplicity, ascending. Contains
    /// 0 and has exactly `multiplicity` elements.
    pub fn apery_set(&self) -> &[u64] {
        &self.apery
    }

    /// Genus recomputed as `Σ floor(w / m)` over the Apéry set. Equals
    /// `genus()`; kept as an independent checksum.
    pub fn apery_genus_checksum(&self) -> u64 {
        self.apery.iter().map(|w| w / self.multiplicity).sum()
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.minimal_generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl Serialize for NumericalSemigroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("NumericalSemigroup", 5)?;
        s.serialize_field("generators", &self.minimal_generators)?;
        s.serialize_field("multiplicity", &self.multiplicity)?;
        s.serialize_field("frobenius", &self.frobenius)?;
        s.serialize_field("genus", &self.genus)?;
        s.serialize_field("apery_set", &self.apery)?;
        s.end()
    }
}

fn sieve_membership(gens: &[u64], len: usize) -> Vec<bool> {
    let mut membership = vec![false; len];
    membership[0] = true;
    for n in 1..len {
        for &g in gens {
            let g = g as usize;
            if g <= n && membership[n - g] {
                membership[n] = true;
                break;
            }
        }
    }
    membership
}

/// Parses a generator list in the text format: positive integers separated
/// by commas and/or whitespace, e.g. "5,6,9" or "5 6 9".
pub fn parse_generators(text: &str) -> Result<Vec<u64>> {
    let mut gens = Vec::new();
    for token in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if token.is_empty() {
            continue;
        }
        let n: u64 = token
            .parse()
            .map_err(|_| Error::invalid(format!("`{token}` is not a positive integer")))?;
        gens.push(n);
    }
    if gens.is_empty() {
        return Err(Error::invalid("no generators given"));
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(gens).unwrap()
    }

    #[test]
    fn five_six_nine() {
        let sg = s(&[5, 6, 9]);
        assert_eq!(sg.minimal_generators(), &[5, 6, 9]);
        assert_eq!(sg.multiplicity(), 5);
        assert_eq!(sg.frobenius_and_genus(), (13, 7));
        assert_eq!(sg.apery_set(), &[0, 6, 9, 12, 18]);
        assert!(!sg.contains(13));
        assert!(sg.contains(0));
        assert!(sg.contains(18));
        assert!(!sg.contains_int(-4));
        assert!(sg.contains(1_000_003)); // beyond the sieve
    }

    #[test]
    fn two_three() {
        let sg = s(&[2, 3]);
        assert_eq!(sg.minimal_generators(), &[2, 3]);
        assert_eq!(sg.frobenius_and_genus(), (1, 1));
        assert_eq!(sg.apery_set(), &[0, 3]);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let sg = s(&[6, 9, 10, 15]);
        assert_eq!(sg.minimal_generators(), &[6, 9, 10]);
        let dup = s(&[2, 2, 3, 3, 3]);
        assert_eq!(dup.minimal_generators(), &[2, 3]);
    }

    #[test]
    fn whole_numbers() {
        let sg = s(&[1]);
        assert_eq!(sg.minimal_generators(), &[1]);
        assert_eq!(sg.multiplicity(), 1);
        assert_eq!(sg.frobenius_and_genus(), (-1, 0));
        assert_eq!(sg.apery_set(), &[0]);
        let via_larger = s(&[1, 7]);
        assert_eq!(via_larger, sg);
    }

    #[test]
    fn grid_example_frobenius_genus() {
        let sg = s(&[9, 12, 19]);
        assert_eq!(sg.frobenius_and_genus(), (53, 27));
        assert_eq!(
            sg.apery_set(),
            &[0, 12, 19, 24, 31, 38, 43, 50, 62]
        );
    }

    #[test]
    fn small_ahff_apery() {
        let sg = s(&[10, 14, 21]);
        assert_eq!(
            sg.apery_set(),
            &[0, 14, 21, 28, 35, 42, 49, 56, 63, 77]
        );
    }

    #[test]
    fn gcd_failure_is_reported() {
        let err = NumericalSemigroup::from_generators(&[4, 6]).unwrap_err();
        assert_eq!(err, Error::InfiniteComplement { gcd: 2 });
        assert!(err.to_string().contains("not a numerical semigroup"));
    }

    #[test]
    fn empty_and_zero_inputs_are_invalid() {
        assert!(matches!(
            NumericalSemigroup::from_generators(&[]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            NumericalSemigroup::from_generators(&[0, 3]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn apery_candidate_roundtrip() {
        let sg = NumericalSemigroup::from_apery_candidate(5, &[6, 7, 8, 14]).unwrap();
        assert_eq!(sg.minimal_generators(), &[5, 6, 7, 8]);
        assert_eq!(sg.genus(), 5);
        assert_eq!(sg.apery_set(), &[0, 6, 7, 8, 14]);

        let two_three = NumericalSemigroup::from_apery_candidate(2, &[3]).unwrap();
        assert_eq!(two_three, s(&[2, 3]));
    }

    #[test]
    fn apery_candidate_rejects_small_values() {
        // 2 < 3 cannot lie in a semigroup of multiplicity 3; caught by the
        // post-construction Apéry recomputation.
        let err = NumericalSemigroup::from_apery_candidate(3, &[4, 2]).unwrap_err();
        assert!(matches!(err, Error::InvalidAperySet { .. }));
        assert!(err.to_string().contains("not a valid Apéry set"));
    }

    #[test]
    fn apery_candidate_rejects_bad_residue() {
        let err = NumericalSemigroup::from_apery_candidate(3, &[5, 4]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn apery_candidate_reports_closure_violation() {
        let err = NumericalSemigroup::from_apery_candidate(4, &[5, 6, 15]).unwrap_err();
        match err {
            Error::InvalidAperySet { reason } => {
                assert!(reason.contains("(1, 2)"), "reason: {reason}");
            }
            other => panic!("expected InvalidAperySet, got {other:?}"),
        }
    }

    #[test]
    fn atoms_besides_multiplicity_lie_in_apery() {
        for gens in [&[5, 6, 9][..], &[9, 12, 19], &[10, 14, 21], &[7, 10, 25]] {
            let sg = s(gens);
            for &a in &sg.minimal_generators()[1..] {
                assert!(sg.apery_set().contains(&a), "{a} missing from Ap({sg})");
            }
        }
    }

    #[test]
    fn parse_generators_accepts_commas_and_spaces() {
        assert_eq!(parse_generators("5,6,9").unwrap(), vec![5, 6, 9]);
        assert_eq!(parse_generators("5 6 9").unwrap(), vec![5, 6, 9]);
        assert_eq!(parse_generators("5, 6,  9").unwrap(), vec![5, 6, 9]);
        assert!(parse_generators("5,x").is_err());
        assert!(parse_generators("  ").is_err());
    }

    #[test]
    fn display_matches_text_format() {
        assert_eq!(s(&[5, 6, 9]).to_string(), "<5,6,9>");
    }

    #[test]
    fn json_record_shape() {
        let j = serde_json::to_value(s(&[2, 3])).unwrap();
        assert_eq!(
            j,
            serde_json::json!({
                "generators": [2, 3],
                "multiplicity": 2,
                "frobenius": 1,
                "genus": 1,
                "apery_set": [0, 3],
            })
        );
    }

    proptest! {
        #[test]
        fn from_generators_is_idempotent(gens in proptest::collection::vec(1u64..60, 1..5)) {
            prop_assume!(gens.iter().copied().fold(0, num_integer::gcd) == 1);
            let first = NumericalSemigroup::from_generators(&gens).unwrap();
            let second = NumericalSemigroup::from_generators(first.minimal_generators()).unwrap();
            prop_assert_eq!(first, second);
        }

        #[test]
        fn sieve_is_self_consistent(gens in proptest::collection::vec(1u64..40, 1..4)) {
            prop_assume!(gens.iter().copied().fold(0, num_integer::gcd) == 1);
            let sg = NumericalSemigroup::from_generators(&gens).unwrap();
            let bound = (sg.frobenius() + 2 * sg.multiplicity() as i64) as u64;
            for n in 1..=bound {
                let derived = sg
                    .minimal_generators()
                    .iter()
                    .any(|&a| a <= n && sg.contains(n - a));
                prop_assert_eq!(sg.contains(n), derived, "at n = {}", n);
            }
        }

        #[test]
        fn apery_has_one_element_per_class(gens in proptest::collection::vec(1u64..50, 1..4)) {
            prop_assume!(gens.iter().copied().fold(0, num_integer::gcd) == 1);
            let sg = NumericalSemigroup::from_generators(&gens).unwrap();
            let m = sg.multiplicity();
            prop_assert_eq!(sg.apery_set().len() as u64, m);
            let mut classes: Vec<u64> = sg.apery_set().iter().map(|w| w % m).collect();
            classes.sort_unstable();
            prop_assert_eq!(classes, (0..m).collect::<Vec<_>>());
            for &w in sg.apery_set() {
                prop_assert!(sg.contains(w));
                prop_assert!(w < m || !sg.contains(w - m));
            }
        }
    }
}
