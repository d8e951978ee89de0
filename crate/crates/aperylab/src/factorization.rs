//! Factorization length sets, elasticity, and the Apéry-set invariants
//! (AHF, AHFF, MAE).
//!
//! Lengths are computed by dynamic programming over the membership sieve;
//! `factorizations` is an exhaustive enumerator kept as the independent
//! cross-check for the DP path.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::semigroup::NumericalSemigroup;

/// Size guard for the exhaustive enumerator.
pub const DEFAULT_FACTORIZATION_CAP: usize = 1_000_000;

/// Guard for DP table sizes (entries).
const MAX_DP_LEN: u64 = 1 << 26;

/// One factorization of an element: exponents parallel to the atoms in
/// ascending order. The length is the total number of atoms used.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FactorizationVector {
    exponents: Vec<u64>,
}

impl FactorizationVector {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn length(&self) -> u64 {
        self.exponents.iter().sum()
    }

    /// The element this vector factors, given the semigroup's atoms.
    pub fn evaluate(&self, s: &NumericalSemigroup) -> u64 {
        self.exponents
            .iter()
            .zip(s.minimal_generators())
            .map(|(e, a)| e * a)
            .sum()
    }
}

/// All factorizations of `n` over the atoms, with the default size guard.
pub fn factorizations(
    s: &NumericalSemigroup,
    n: u64,
) -> Result<Vec<FactorizationVector>> {
    factorizations_with_cap(s, n, DEFAULT_FACTORIZATION_CAP)
}

/// All factorizations of `n`, erroring out once more than `cap` solutions
/// have been found. Enumeration recurses over atoms in descending order and
/// prunes remainders that leave the semigroup.
pub fn factorizations_with_cap(
    s: &NumericalSemigroup,
    n: u64,
    cap: usize,
) -> Result<Vec<FactorizationVector>> {
    if !s.contains(n) {
        return Err(Error::NotAnElement { n });
    }
    let atoms = s.minimal_generators();
    let mut current = vec![0u64; atoms.len()];
    let mut out = Vec::new();
    recurse(s, atoms, atoms.len() - 1, n, &mut current, &mut out, cap)?;
    out.sort_unstable();
    Ok(out)
}

fn recurse(
    s: &NumericalSemigroup,
    atoms: &[u64],
    idx: usize,
    remaining: u64,
    current: &mut Vec<u64>,
    out: &mut Vec<FactorizationVector>,
    cap: usize,
) -> Result<()> {
    if idx == 0 {
        if remaining.is_multiple_of(atoms[0]) {
            current[0] = remaining / atoms[0];
            if out.len() >= cap {
                return Err(Error::TooManyFactorizations { cap });
            }
            out.push(FactorizationVector {
                exponents: current.clone(),
            });
            current[0] = 0;
        }
        return Ok(());
    }
    let a = atoms[idx];
    for e in 0..=remaining / a {
        let rest = remaining - e * a;
        // A remainder expressible by the smaller atoms is in particular an
        // element, so membership is a sound prune.
        if !s.contains(rest) {
            continue;
        }
        current[idx] = e;
        recurse(s, atoms, idx - 1, rest, current, out, cap)?;
    }
    current[idx] = 0;
    Ok(())
}

/// The set of factorization lengths of `n`, via the full boolean DP table
/// of achievable lengths.
pub fn length_set(s: &NumericalSemigroup, n: u64) -> Result<BTreeSet<u64>> {
    if !s.contains(n) {
        return Err(Error::NotAnElement { n });
    }
    if n == 0 {
        return Ok(BTreeSet::from([0]));
    }
    let max_len = n / s.multiplicity();
    let words = (max_len / 64 + 1) as usize;
    let len = n
        .checked_add(1)
        .filter(|&l| l.checked_mul(words as u64).is_some_and(|t| t <= MAX_DP_LEN))
        .ok_or_else(|| Error::invalid(format!("element {n} too large for the length table")))?
        as usize;

    // rows[k] is the bitset of achievable lengths for k, present iff k is
    // an element.
    let mut rows: Vec<Option<Vec<u64>>> = vec![None; len];
    rows[0] = Some({
        let mut row = vec![0u64; words];
        row[0] = 1; // length 0
        row
    });
    for k in 1..len {
        let ku = k as u64;
        if !s.contains(ku) {
            continue;
        }
        let mut row = vec![0u64; words];
        for &a in s.minimal_generators() {
            if a > ku {
                break;
            }
            if let Some(prev) = &rows[(ku - a) as usize] {
                or_shifted(&mut row, prev);
            }
        }
        rows[k] = Some(row);
    }

    let row = rows[n as usize]
        .as_ref()
        .expect("n is an element, so its row is populated");
    let mut set = BTreeSet::new();
    for (w, &word) in row.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let b = bits.trailing_zeros() as u64;
            set.insert(w as u64 * 64 + b);
            bits &= bits - 1;
        }
    }
    Ok(set)
}

/// dst |= src << 1 (bitwise, across words).
fn or_shifted(dst: &mut [u64], src: &[u64]) {
    let mut carry = 0u64;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d |= (s << 1) | carry;
        carry = s >> 63;
    }
}

/// Minimum and maximum factorization lengths of `n`, by two DP passes that
/// never enumerate factorizations.
pub fn length_extremes(s: &NumericalSemigroup, n: u64) -> Result<(u64, u64)> {
    if !s.contains(n) {
        return Err(Error::NotAnElement { n });
    }
    let table = extremes_table(s, n)?;
    Ok(table[n as usize].expect("n is an element"))
}

/// (min, max) length for every element up to `upper`, inclusive.
fn extremes_table(s: &NumericalSemigroup, upper: u64) -> Result<Vec<Option<(u64, u64)>>> {
    if upper >= MAX_DP_LEN {
        return Err(Error::invalid(format!(
            "element {upper} too large for the length table"
        )));
    }
    let len = upper as usize + 1;
    let mut table: Vec<Option<(u64, u64)>> = vec![None; len];
    table[0] = Some((0, 0));
    for k in 1..len {
        let ku = k as u64;
        if !s.contains(ku) {
            continue;
        }
        let mut best: Option<(u64, u64)> = None;
        for &a in s.minimal_generators() {
            if a > ku {
                break;
            }
            if let Some((lo, hi)) = table[(ku - a) as usize] {
                let (lo, hi) = (lo + 1, hi + 1);
                best = Some(match best {
                    None => (lo, hi),
                    Some((blo, bhi)) => (blo.min(lo), bhi.max(hi)),
                });
            }
        }
        debug_assert!(best.is_some(), "element {ku} has no factorization");
        table[k] = best;
    }
    Ok(table)
}

/// (element, min length, max length) for every Apéry set element, from one
/// DP pass sized to the largest Apéry value.
fn apery_extremes(s: &NumericalSemigroup) -> Vec<(u64, u64, u64)> {
    let apery = s.apery_set();
    let max_w = *apery.last().expect("Apéry set is never empty");
    let table = extremes_table(s, max_w)
        .expect("Apéry elements are bounded by frobenius + multiplicity");
    apery
        .iter()
        .map(|&w| {
            let (lo, hi) = table[w as usize].expect("Apéry elements are elements");
            (w, lo, hi)
        })
        .collect()
}

/// Elasticity of `n`: max length over min length, reduced. By convention
/// the unit 0 has elasticity 1.
pub fn elasticity(s: &NumericalSemigroup, n: u64) -> Result<Rational> {
    if n == 0 {
        if !s.contains(0) {
            return Err(Error::NotAnElement { n });
        }
        return Ok(Rational::one());
    }
    let (lo, hi) = length_extremes(s, n)?;
    Ok(Rational::new(hi, lo))
}

/// The set of elasticities `R(T) = { rho(n) : n in T }`, deduplicated.
pub fn elasticity_set(s: &NumericalSemigroup, t: &[u64]) -> Result<BTreeSet<Rational>> {
    t.iter().map(|&n| elasticity(s, n)).collect()
}

/// `R(Ap(S))`: elasticities over the Apéry set.
pub fn apery_elasticity_set(s: &NumericalSemigroup) -> BTreeSet<Rational> {
    apery_extremes(s)
        .into_iter()
        .map(|(_, lo, hi)| ratio_or_one(hi, lo))
        .collect()
}

fn ratio_or_one(hi: u64, lo: u64) -> Rational {
    if lo == 0 {
        Rational::one() // the unit 0
    } else {
        Rational::new(hi, lo)
    }
}

/// Apéry half-factorial: every Apéry element has a singleton length set.
/// Decided by the min/max DP only, so it is cheap enough for the census
/// hot loop.
pub fn is_ahf(s: &NumericalSemigroup) -> bool {
    apery_extremes(s).iter().all(|&(_, lo, hi)| lo == hi)
}

/// Apéry half-factorial fraction: the fraction of Apéry elements that are
/// half-factorial, exact in (0, 1].
pub fn ahff(s: &NumericalSemigroup) -> Rational {
    let extremes = apery_extremes(s);
    let half_factorial = extremes.iter().filter(|&&(_, lo, hi)| lo == hi).count();
    Rational::new(half_factorial as u64, s.multiplicity())
}

/// The Apéry elements whose length set is a singleton, ascending.
pub fn half_factorial_apery_elements(s: &NumericalSemigroup) -> Vec<u64> {
    apery_extremes(s)
        .into_iter()
        .filter(|&(_, lo, hi)| lo == hi)
        .map(|(w, _, _)| w)
        .collect()
}

/// Mean Apéry elasticity: exact mean of the elasticities over the Apéry
/// set (the unit contributes 1).
pub fn mae(s: &NumericalSemigroup) -> Rational {
    let sum: Rational = apery_extremes(s)
        .into_iter()
        .map(|(_, lo, hi)| ratio_or_one(hi, lo))
        .sum();
    sum / Rational::integer(s.multiplicity())
}

/// Per-element record for JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    pub n: u64,
    pub length_set: Vec<u64>,
    pub elasticity: Rational,
}

pub fn element_report(s: &NumericalSemigroup, n: u64) -> Result<ElementReport> {
    let lengths = length_set(s, n)?;
    let (lo, hi) = (*lengths.first().unwrap(), *lengths.last().unwrap());
    Ok(ElementReport {
        n,
        length_set: lengths.into_iter().collect(),
        elasticity: ratio_or_one(hi, lo),
    })
}

/// Whole-Apéry-set record for JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct SemigroupReport {
    pub ahf: bool,
    pub ahff: Rational,
    pub mae: Rational,
    pub apery_elasticities: Vec<ElementReport>,
}

pub fn semigroup_report(s: &NumericalSemigroup) -> SemigroupReport {
    let apery_elasticities = s
        .apery_set()
        .iter()
        .map(|&w| element_report(s, w).expect("Apéry elements are elements"))
        .collect();
    SemigroupReport {
        ahf: is_ahf(s),
        ahff: ahff(s),
        mae: mae(s),
        apery_elasticities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(gens).unwrap()
    }

    fn vecs(fs: &[FactorizationVector]) -> Vec<Vec<u64>> {
        fs.iter().map(|f| f.exponents().to_vec()).collect()
    }

    #[test]
    fn factorizations_of_eighteen() {
        let sg = s(&[5, 6, 9]);
        let fs = factorizations(&sg, 18).unwrap();
        assert_eq!(vecs(&fs), vec![vec![0, 0, 2], vec![0, 3, 0]]);
        for f in &fs {
            assert_eq!(f.evaluate(&sg), 18);
        }
    }

    #[test]
    fn factorizations_of_zero_and_unique() {
        let sg = s(&[10, 14, 21]);
        assert_eq!(vecs(&factorizations(&sg, 0).unwrap()), vec![vec![0, 0, 0]]);
        assert_eq!(vecs(&factorizations(&sg, 49).unwrap()), vec![vec![0, 2, 1]]);
    }

    #[test]
    fn non_elements_are_rejected() {
        let sg = s(&[5, 6, 9]);
        assert_eq!(
            factorizations(&sg, 13).unwrap_err(),
            Error::NotAnElement { n: 13 }
        );
        assert_eq!(length_set(&sg, 7).unwrap_err(), Error::NotAnElement { n: 7 });
        assert_eq!(elasticity(&sg, 4).unwrap_err(), Error::NotAnElement { n: 4 });
    }

    #[test]
    fn cap_aborts_enumeration() {
        let sg = s(&[5, 6, 9]);
        assert_eq!(
            factorizations_with_cap(&sg, 18, 1).unwrap_err(),
            Error::TooManyFactorizations { cap: 1 }
        );
    }

    #[test]
    fn length_sets() {
        let sg = s(&[5, 6, 9]);
        assert_eq!(length_set(&sg, 18).unwrap(), BTreeSet::from([2, 3]));
        assert_eq!(length_set(&sg, 0).unwrap(), BTreeSet::from([0]));
        let t = s(&[10, 14, 21]);
        assert_eq!(length_set(&t, 77).unwrap(), BTreeSet::from([4, 5]));
    }

    #[test]
    fn elasticities() {
        let sg = s(&[5, 6, 9]);
        assert_eq!(elasticity(&sg, 18).unwrap(), Rational::new(3, 2));
        assert_eq!(elasticity(&sg, 6).unwrap(), Rational::one());
        let t = s(&[7, 10, 25]);
        assert_eq!(elasticity(&t, 50).unwrap(), Rational::new(5, 2));
    }

    #[test]
    fn apery_elasticity_sets() {
        assert_eq!(
            apery_elasticity_set(&s(&[5, 6, 9])),
            BTreeSet::from([Rational::one(), Rational::new(3, 2)])
        );
        assert_eq!(
            apery_elasticity_set(&s(&[2, 3])),
            BTreeSet::from([Rational::one()])
        );
        assert_eq!(
            apery_elasticity_set(&s(&[7, 10, 25])),
            BTreeSet::from([Rational::one(), Rational::new(5, 2)])
        );
    }

    #[test]
    fn ahf_checks() {
        assert!(is_ahf(&s(&[9, 12, 19])));
        assert!(!is_ahf(&s(&[5, 6, 9])));
        assert!(is_ahf(&s(&[2, 3])));
        assert!(is_ahf(&s(&[1])));
    }

    #[test]
    fn ahff_values() {
        assert_eq!(ahff(&s(&[10, 14, 21])), Rational::new(6, 10));
        assert_eq!(ahff(&s(&[9, 12, 19])), Rational::one());
        assert_eq!(ahff(&s(&[5, 6, 9])), Rational::new(4, 5));
    }

    #[test]
    fn half_factorial_elements_of_small_ahff_family() {
        // p = 7: exactly 0, 2p, 3p, 4p, 5p, 7p.
        assert_eq!(
            half_factorial_apery_elements(&s(&[10, 14, 21])),
            vec![0, 14, 21, 28, 35, 49]
        );
    }

    #[test]
    fn mae_values() {
        assert_eq!(mae(&s(&[5, 6, 9])), Rational::new(11, 10));
        assert_eq!(mae(&s(&[7, 10, 25])), Rational::new(17, 14));
        assert_eq!(mae(&s(&[2, 3])), Rational::one());
    }

    #[test]
    fn reports_serialize_with_exact_fractions() {
        let sg = s(&[5, 6, 9]);
        let report = semigroup_report(&sg);
        let j = serde_json::to_value(&report).unwrap();
        assert_eq!(j["ahf"], serde_json::json!(false));
        assert_eq!(j["ahff"], serde_json::json!({"num": 4, "den": 5}));
        assert_eq!(j["mae"], serde_json::json!({"num": 11, "den": 10}));
        let last = j["apery_elasticities"].as_array().unwrap().last().cloned().unwrap();
        assert_eq!(last["n"], serde_json::json!(18));
        assert_eq!(last["length_set"], serde_json::json!([2, 3]));
        assert_eq!(last["elasticity"], serde_json::json!({"num": 3, "den": 2}));
    }

    proptest! {
        // The DP extremes must agree with exhaustive enumeration, and every
        // enumerated vector must evaluate back to its element.
        #[test]
        fn dp_matches_enumeration(
            gens in proptest::collection::vec(2u64..30, 2..4),
            picks in proptest::collection::vec(0usize..4, 1..4),
        ) {
            prop_assume!(gens.iter().copied().fold(0, num_integer::gcd) == 1);
            let sg = NumericalSemigroup::from_generators(&gens).unwrap();
            let atoms = sg.minimal_generators();
            let n: u64 = picks.iter().map(|&i| atoms[i % atoms.len()]).sum();
            let fs = factorizations(&sg, n).unwrap();
            let lengths: BTreeSet<u64> = fs.iter().map(|f| f.length()).collect();
            prop_assert_eq!(length_set(&sg, n).unwrap(), lengths.clone());
            let (lo, hi) = length_extremes(&sg, n).unwrap();
            prop_assert_eq!(lo, *lengths.first().unwrap());
            prop_assert_eq!(hi, *lengths.last().unwrap());
            for f in &fs {
                prop_assert_eq!(f.evaluate(&sg), n);
            }
        }

        // Apéry purity: factorizations of Apéry elements never use the
        // multiplicity atom.
        #[test]
        fn apery_factorizations_avoid_multiplicity(
            gens in proptest::collection::vec(2u64..25, 2..4),
        ) {
            prop_assume!(gens.iter().copied().fold(0, num_integer::gcd) == 1);
            let sg = NumericalSemigroup::from_generators(&gens).unwrap();
            for &w in sg.apery_set() {
                for f in factorizations(&sg, w).unwrap() {
                    prop_assert_eq!(f.exponents()[0], 0);
                }
            }
        }
    }
}
