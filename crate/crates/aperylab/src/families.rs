//! Parametric families of numerical semigroups, each instance carrying the
//! invariant values the construction predicts. Predictions are evaluated by
//! the same public operations users call, so `verify` doubles as an
//! end-to-end check of the factorization and poset modules.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::factorization;
use crate::poset::AperyPoset;
use crate::rational::Rational;
use crate::semigroup::NumericalSemigroup;

/// A constructed family member plus its predicted invariants.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub name: &'static str,
    pub semigroup: NumericalSemigroup,
    /// Ordered (name, value) parameter list, display-ready.
    pub parameters: Vec<(String, String)>,
    pub predictions: Vec<Prediction>,
    /// Documented caveats attached to the verification report.
    pub notes: Vec<String>,
}

/// A predicted invariant value, checkable against the public operations.
#[derive(Debug, Clone)]
pub enum Prediction {
    MinimalGenerators(Vec<u64>),
    Multiplicity(u64),
    Genus(u64),
    AperySet(Vec<u64>),
    IsAhf(bool),
    Ahff(Rational),
    Mae(Rational),
    MaeAtLeast(Rational),
    AperyElasticitySet(BTreeSet<Rational>),
    /// Exactly one Apéry element attains this elasticity, and it is this one.
    UniqueMaxElasticity { element: u64, elasticity: Rational },
    ElementElasticity { element: u64, elasticity: Rational },
    HalfFactorialAperyElements(Vec<u64>),
    LengthSetContains { element: u64, lengths: Vec<u64> },
    PosetWidthAtLeast(usize),
}

/// Outcome of checking one prediction.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PredictionOutcome {
    pub name: &'static str,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

impl Prediction {
    pub fn name(&self) -> &'static str {
        match self {
            Prediction::MinimalGenerators(_) => "minimal_generators",
            Prediction::Multiplicity(_) => "multiplicity",
            Prediction::Genus(_) => "genus",
            Prediction::AperySet(_) => "apery_set",
            Prediction::IsAhf(_) => "is_ahf",
            Prediction::Ahff(_) => "ahff",
            Prediction::Mae(_) => "mae",
            Prediction::MaeAtLeast(_) => "mae_at_least",
            Prediction::AperyElasticitySet(_) => "apery_elasticity_set",
            Prediction::UniqueMaxElasticity { .. } => "unique_max_elasticity",
            Prediction::ElementElasticity { .. } => "element_elasticity",
            Prediction::HalfFactorialAperyElements(_) => "half_factorial_apery_elements",
            Prediction::LengthSetContains { .. } => "length_set_contains",
            Prediction::PosetWidthAtLeast(_) => "poset_width_at_least",
        }
    }

    pub fn check(&self, s: &NumericalSemigroup) -> PredictionOutcome {
        let (expected, computed, passed) = match self {
            Prediction::MinimalGenerators(want) => {
                let got = s.minimal_generators().to_vec();
                (format!("{want:?}"), format!("{got:?}"), got == *want)
            }
            Prediction::Multiplicity(want) => {
                let got = s.multiplicity();
                (want.to_string(), got.to_string(), got == *want)
            }
            Prediction::Genus(want) => {
                let got = s.genus();
                (want.to_string(), got.to_string(), got == *want)
            }
            Prediction::AperySet(want) => {
                let got = s.apery_set().to_vec();
                (format!("{want:?}"), format!("{got:?}"), got == *want)
            }
            Prediction::IsAhf(want) => {
                let got = factorization::is_ahf(s);
                (want.to_string(), got.to_string(), got == *want)
            }
            Prediction::Ahff(want) => {
                let got = factorization::ahff(s);
                (want.to_string(), got.to_string(), got == *want)
            }
            Prediction::Mae(want) => {
                let got = factorization::mae(s);
                (want.to_string(), got.to_string(), got == *want)
            }
            Prediction::MaeAtLeast(bound) => {
                let got = factorization::mae(s);
                (format!(">= {bound}"), got.to_string(), got >= *bound)
            }
            Prediction::AperyElasticitySet(want) => {
                let got = factorization::apery_elasticity_set(s);
                (render_set(want), render_set(&got), got == *want)
            }
            Prediction::UniqueMaxElasticity { element, elasticity } => {
                let attaining: Vec<u64> = s
                    .apery_set()
                    .iter()
                    .copied()
                    .filter(|&w| {
                        factorization::elasticity(s, w).expect("Apéry element") == *elasticity
                    })
                    .collect();
                (
                    format!("only {element} has elasticity {elasticity}"),
                    format!("{attaining:?} attain {elasticity}"),
                    attaining == vec![*element],
                )
            }
            Prediction::ElementElasticity { element, elasticity } => {
                match factorization::elasticity(s, *element) {
                    Ok(got) => (
                        format!("rho({element}) = {elasticity}"),
                        format!("rho({element}) = {got}"),
                        got == *elasticity,
                    ),
                    Err(e) => (
                        format!("rho({element}) = {elasticity}"),
                        format!("error: {e}"),
                        false,
                    ),
                }
            }
            Prediction::HalfFactorialAperyElements(want) => {
                let got = factorization::half_factorial_apery_elements(s);
                (format!("{want:?}"), format!("{got:?}"), got == *want)
            }
            Prediction::LengthSetContains { element, lengths } => {
                match factorization::length_set(s, *element) {
                    Ok(got) => {
                        let ok = lengths.iter().all(|l| got.contains(l));
                        (
                            format!("lengths({element}) ⊇ {lengths:?}"),
                            format!("lengths({element}) = {got:?}"),
                            ok,
                        )
                    }
                    Err(e) => (
                        format!("lengths({element}) ⊇ {lengths:?}"),
                        format!("error: {e}"),
                        false,
                    ),
                }
            }
            Prediction::PosetWidthAtLeast(bound) => {
                let got = AperyPoset::build(s).width();
                (format!(">= {bound}"), got.to_string(), got >= *bound)
            }
        };
        PredictionOutcome {
            name: self.name(),
            expected,
            computed,
            passed,
        }
    }
}

fn render_set(set: &BTreeSet<Rational>) -> String {
    let items: Vec<String> = set.iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

impl FamilyInstance {
    /// Evaluates every prediction against the public operations.
    pub fn verify(&self) -> Vec<PredictionOutcome> {
        self.predictions
            .iter()
            .map(|p| p.check(&self.semigroup))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.verify().iter().all(|o| o.passed)
    }
}

/// `S = <a+b, pa, pb>` for coprime `a > b >= 2` and a prime `p` with
/// `p ∤ (a+b)` and `a+b < pb`: the Apéry set has exactly one element of
/// elasticity a/b (namely pab) and all others half-factorial, so
/// `R(Ap(S)) = {1, a/b}` and the mean Apéry elasticity is
/// `1 + 1/b − 2/(a+b)`. If `p` is omitted the smallest valid prime is used.
pub fn master_example(a: u64, b: u64, p: Option<u64>) -> Result<FamilyInstance> {
    const NAME: &str = "master";
    let fail = |reason: String| Error::InvalidParameters {
        family: NAME,
        reason,
    };
    if b < 2 {
        return Err(fail(format!(
            "b = {b} < 2: with b = 1 the generator p*a equals a*(p*b) and is not an atom, \
             the semigroup degenerates, and the elasticity prediction fails; require b >= 2"
        )));
    }
    if a <= b {
        return Err(fail(format!("need a > b, got a = {a}, b = {b}")));
    }
    if num_integer::gcd(a, b) != 1 {
        return Err(fail(format!("gcd({a}, {b}) != 1")));
    }
    let valid = |q: u64| !(a + b).is_multiple_of(q) && a + b < q * b;
    let p = match p {
        Some(p) => {
            if !is_prime(p) {
                return Err(fail(format!("p = {p} is not prime")));
            }
            if (a + b).is_multiple_of(p) {
                return Err(fail(format!("p = {p} divides a + b = {}", a + b)));
            }
            if a + b >= p * b {
                return Err(fail(format!("need a + b < p*b, got {} >= {}", a + b, p * b)));
            }
            p
        }
        None => smallest_prime(valid),
    };

    let semigroup = NumericalSemigroup::from_generators(&[a + b, p * a, p * b])?;

    let mut apery = vec![0];
    apery.extend((1..a).map(|k| k * p * b));
    apery.extend((1..b).map(|k| k * p * a));
    apery.push(p * a * b);
    apery.sort_unstable();

    let mut gens = vec![a + b, p * a, p * b];
    gens.sort_unstable();

    // 1 + 1/b − 2/(a+b) over the common denominator b(a+b).
    let mae = Rational::new(a * b + b * b + a - b, b * (a + b));

    Ok(FamilyInstance {
        name: NAME,
        semigroup,
        parameters: vec![
            ("a".into(), a.to_string()),
            ("b".into(), b.to_string()),
            ("p".into(), p.to_string()),
        ],
        predictions: vec![
            Prediction::MinimalGenerators(gens),
            Prediction::Multiplicity(a + b),
            Prediction::AperySet(apery),
            Prediction::AperyElasticitySet(BTreeSet::from([
                Rational::one(),
                Rational::new(a, b),
            ])),
            Prediction::UniqueMaxElasticity {
                element: p * a * b,
                elasticity: Rational::new(a, b),
            },
            Prediction::Mae(mae),
        ],
        notes: Vec::new(),
    })
}

/// `S = <5n, 2p, 3p>` with `p` prime, `p != 5`, `2p > 5n > 5`: only the six
/// Apéry elements 0, 2p, 3p, 4p, 5p, 7p are half-factorial, so the
/// half-factorial fraction is 6/(5n) — arbitrarily small as n grows.
pub fn small_ahff(n: u64, p: u64) -> Result<FamilyInstance> {
    const NAME: &str = "small-ahff";
    let fail = |reason: String| Error::InvalidParameters {
        family: NAME,
        reason,
    };
    if !is_prime(p) {
        return Err(fail(format!("p = {p} is not prime")));
    }
    if p == 5 {
        return Err(fail("p must differ from 5".into()));
    }
    if 5 * n <= 5 {
        return Err(fail(format!("need 5n > 5, got n = {n}")));
    }
    if 2 * p <= 5 * n {
        return Err(fail(format!("need 2p > 5n, got 2*{p} <= 5*{n}")));
    }
    let m = 5 * n;
    let semigroup = NumericalSemigroup::from_generators(&[m, 2 * p, 3 * p])?;

    let mut apery = vec![0];
    apery.extend((2..m).map(|k| k * p));
    apery.push((m + 1) * p);

    let mut gens = vec![m, 2 * p, 3 * p];
    gens.sort_unstable();

    Ok(FamilyInstance {
        name: NAME,
        semigroup,
        parameters: vec![
            ("n".into(), n.to_string()),
            ("p".into(), p.to_string()),
        ],
        predictions: vec![
            Prediction::MinimalGenerators(gens),
            Prediction::Multiplicity(m),
            Prediction::AperySet(apery),
            Prediction::Ahff(Rational::new(6, m)),
            Prediction::HalfFactorialAperyElements(vec![
                0,
                2 * p,
                3 * p,
                4 * p,
                5 * p,
                7 * p,
            ]),
            Prediction::IsAhf(false),
        ],
        notes: Vec::new(),
    })
}

/// `S = <n², n²+n, 2n²+1>` for `n >= 2`: Apéry half-factorial with the
/// Apéry set forming an n×n grid, so the Apéry poset has width at least n
/// even though the embedding dimension stays 3.
pub fn ahf_grid(n: u64) -> Result<FamilyInstance> {
    const NAME: &str = "ahf-grid";
    if n < 2 {
        return Err(Error::InvalidParameters {
            family: NAME,
            reason: format!("need n >= 2, got {n}"),
        });
    }
    let gens = [n * n, n * n + n, 2 * n * n + 1];
    let semigroup = NumericalSemigroup::from_generators(&gens)?;

    let mut apery: Vec<u64> = (0..n)
        .flat_map(|a| (0..n).map(move |b| a * (n * n + n) + b * (2 * n * n + 1)))
        .collect();
    apery.sort_unstable();

    Ok(FamilyInstance {
        name: NAME,
        semigroup,
        parameters: vec![("n".into(), n.to_string())],
        predictions: vec![
            Prediction::MinimalGenerators(gens.to_vec()),
            Prediction::Multiplicity(n * n),
            Prediction::AperySet(apery),
            Prediction::IsAhf(true),
            Prediction::PosetWidthAtLeast(n as usize),
        ],
        notes: Vec::new(),
    })
}

/// `S = <4q+8, 2p, qp>` for odd primes `p > 2q+4`: the Apéry elements
/// `(2q+2i)p` have elasticity `(q+i)/(2+i)`, which drives the mean Apéry
/// elasticity above `(3q+8)/m + (q/m) Σ 1/(2+i)` — unbounded in q.
pub fn large_mae(q: u64, p: u64) -> Result<FamilyInstance> {
    const NAME: &str = "large-mae";
    let fail = |reason: String| Error::InvalidParameters {
        family: NAME,
        reason,
    };
    if !is_prime(q) || q == 2 {
        return Err(fail(format!("q = {q} is not an odd prime")));
    }
    if !is_prime(p) || p == 2 {
        return Err(fail(format!("p = {p} is not an odd prime")));
    }
    if p <= 2 * q + 4 {
        return Err(fail(format!("need p > 2q + 4 = {}, got p = {p}", 2 * q + 4)));
    }
    let m = 4 * q + 8;
    let semigroup = NumericalSemigroup::from_generators(&[m, 2 * p, q * p])?;

    let mut predictions = vec![Prediction::Multiplicity(m)];
    for i in 0..q {
        predictions.push(Prediction::ElementElasticity {
            element: (2 * q + 2 * i) * p,
            elasticity: Rational::new(q + i, 2 + i),
        });
    }
    let harmonic: Rational = (0..q).map(|i| Rational::new(1, 2 + i)).sum();
    let bound = Rational::new(3 * q + 8, m) + Rational::new(q, m) * harmonic;
    predictions.push(Prediction::MaeAtLeast(bound));

    Ok(FamilyInstance {
        name: NAME,
        semigroup,
        parameters: vec![
            ("q".into(), q.to_string()),
            ("p".into(), p.to_string()),
        ],
        predictions,
        notes: vec![
            "the Apéry set is recomputed from the membership sieve; only the per-element \
             elasticities and the mean lower bound are asserted"
                .into(),
        ],
    })
}

/// Builds the semigroup whose Apéry set is `{0, a_1, …, a_{m−1}}` with
/// `a_i = 2m+i` for `i ∈ T` and `m+i` otherwise. Every Apéry element
/// factors with a single length, so the result is always AHF; these
/// constructions pack `2^{m−1}` AHF semigroups below each multiplicity.
pub fn apery_choice(m: u64, t: &BTreeSet<u64>) -> Result<FamilyInstance> {
    const NAME: &str = "apery-choice";
    let fail = |reason: String| Error::InvalidParameters {
        family: NAME,
        reason,
    };
    if m < 2 {
        return Err(fail(format!("need m >= 2, got {m}")));
    }
    if let Some(&bad) = t.iter().find(|&&i| i == 0 || i >= m) {
        return Err(fail(format!("T must be a subset of 1..{m}, contains {bad}")));
    }
    let values: Vec<u64> = (1..m)
        .map(|i| if t.contains(&i) { 2 * m + i } else { m + i })
        .collect();
    let semigroup = NumericalSemigroup::from_apery_candidate(m, &values)?;

    let mut apery = vec![0];
    apery.extend_from_slice(&values);
    apery.sort_unstable();

    Ok(FamilyInstance {
        name: NAME,
        semigroup,
        parameters: vec![("m".into(), m.to_string()), ("T".into(), render_subset(t))],
        predictions: vec![
            Prediction::Multiplicity(m),
            Prediction::AperySet(apery),
            Prediction::IsAhf(true),
            Prediction::Genus(m - 1 + t.len() as u64),
        ],
        notes: vec![
            "genus is computed from the gap sieve and equals (m-1)+|T|; the binomial \
             count C(m-1, g-(m-1)) over multiplicities is consistent with this value"
                .into(),
        ],
    })
}

/// Like `apery_choice`, but with `a_1 = m+1`, `a_2 = 2m+2`, `a_3 = 3m+3`,
/// `a_4 = m+4`, `a_{m−1} = 2m−1` pinned so that `a_3 = 3a_1 = a_4 +
/// a_{m−1}` has factorization lengths 2 and 3 — the result is never AHF.
/// `T` selects doubled values among the remaining indices `5..m−2`.
pub fn non_ahf_choice(m: u64, t: &BTreeSet<u64>) -> Result<FamilyInstance> {
    const NAME: &str = "non-ahf-choice";
    let fail = |reason: String| Error::InvalidParameters {
        family: NAME,
        reason,
    };
    if m < 6 {
        return Err(fail(format!(
            "need m >= 6 so indices 1, 2, 3, 4, m-1 are distinct, got {m}"
        )));
    }
    if let Some(&bad) = t.iter().find(|&&i| i < 5 || i > m - 2) {
        return Err(fail(format!(
            "T must be a subset of 5..={}, contains {bad}",
            m - 2
        )));
    }
    let values: Vec<u64> = (1..m)
        .map(|i| match i {
            1 => m + 1,
            2 => 2 * m + 2,
            3 => 3 * m + 3,
            4 => m + 4,
            i if i == m - 1 => m + (m - 1),
            i if t.contains(&i) => 2 * m + i,
            i => m + i,
        })
        .collect();
    let semigroup = NumericalSemigroup::from_apery_candidate(m, &values)?;

    Ok(FamilyInstance {
        name: NAME,
        semigroup,
        parameters: vec![("m".into(), m.to_string()), ("T".into(), render_subset(t))],
        predictions: vec![
            Prediction::Multiplicity(m),
            Prediction::IsAhf(false),
            Prediction::LengthSetContains {
                element: 3 * m + 3,
                lengths: vec![2, 3],
            },
        ],
        notes: Vec::new(),
    })
}

fn render_subset(t: &BTreeSet<u64>) -> String {
    let items: Vec<String> = t.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Fibonacci numbers with f_1 = f_2 = 1.
pub fn fibonacci(k: u64) -> Result<u64> {
    if k < 1 {
        return Err(Error::invalid("Fibonacci index must be >= 1"));
    }
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 2..k {
        let next = a.checked_add(b).ok_or(Error::Overflow {
            context: "computing a Fibonacci number",
        })?;
        a = b;
        b = next;
    }
    Ok(if k == 1 { 1 } else { b })
}

/// Binomial coefficient; 0 when k > n.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits u64 at this scale")
}

/// Trial-division primality; fine at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime satisfying `valid`.
fn smallest_prime(valid: impl Fn(u64) -> bool) -> u64 {
    (2..).filter(|&q| is_prime(q)).find(|&q| valid(q)).unwrap()
}

/// The `count` smallest primes satisfying `valid`.
pub fn smallest_valid_primes(count: usize, valid: impl Fn(u64) -> bool) -> Vec<u64> {
    (2..)
        .filter(|&q| is_prime(q))
        .filter(|&q| valid(q))
        .take(count)
        .collect()
}
