//! Threshold normalization for weighted local specs.
//!
//! Rescales a rational-weight spec so the threshold becomes 1, certifies a
//! gap `ε > 0` with every attainable weight sum either below `1−ε` or above
//! `1+ε`, and rounds each weight up to the nearest value of the form
//! `k − log(n+1)` with `n ∈ [2^k]` — making every per-window probability
//! `2^{−α(m)}` an exact dyadic. The rounding margin is kept below half the
//! pre-rounding gap, so membership is preserved and the certified gap is at
//! least half of it.
//!
//! The attainable sums `Σ c_m·α(m)` are scanned over count vectors: only
//! finitely many lie at or below any bound because every positive weight
//! contributes at least the minimum positive weight. Count vectors are a
//! superset of the sums realized by actual words, so the bounds derived here
//! are conservative and safe.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::name::Name;
use crate::ratio::{integer_root, Ratio};

use super::llin::{LlinSpec, Weights};
use super::{LangError, Word};

/// Result of normalization: the rescaled log-form spec, the certified gap,
/// and the parameters that produced it.
#[derive(Clone, Debug)]
pub struct NormalizedLlin {
    pub spec: LlinSpec,
    /// Certified gap: every attainable rescaled sum is `< 1−ε` or `> 1+ε`.
    pub epsilon: Ratio,
    /// Gap before weight rounding.
    pub pre_rounding_gap: Ratio,
    /// The midpoint the original weights were divided by (1 when the spec was
    /// already trivial or in log form).
    pub scale: Ratio,
}

/// All attainable sums `Σ c·w` over the given positive weights, up to `bound`.
fn attainable_sums(
    weights: &[Ratio],
    bound: &Ratio,
    max_values: usize,
) -> Result<BTreeSet<Ratio>, LangError> {
    let mut out: BTreeSet<Ratio> = BTreeSet::new();
    let mut stack: Vec<Ratio> = alloc::vec![Ratio::zero()];
    while let Some(acc) = stack.pop() {
        if out.contains(&acc) {
            continue;
        }
        if out.len() >= max_values {
            return Err(LangError::BudgetExceeded {
                what: "attainable weight sums",
            });
        }
        out.insert(acc.clone());
        for w in weights {
            let next = &acc + w;
            if next <= *bound && !out.contains(&next) {
                stack.push(next);
            }
        }
    }
    Ok(out)
}

fn trivial_logform(spec: &LlinSpec) -> LlinSpec {
    LlinSpec::new(
        spec.alphabet.clone(),
        spec.ell,
        spec.prefixes.clone(),
        spec.suffixes.clone(),
        Weights::LogForm {
            k: 0,
            table: BTreeMap::new(),
        },
        Ratio::one(),
    )
    .expect("trivial spec is well-formed")
}

/// Normalizes a spec to threshold 1 with log-form weights and a certified gap.
///
/// Specs whose weighted sum can never exceed the threshold (all weights zero,
/// or the threshold unreachable) normalize to the trivial all-zero spec with
/// gap 1. Specs already in log form with threshold 1 are returned unchanged
/// apart from gap recertification.
pub fn normalize_llin(spec: &LlinSpec, max_values: usize) -> Result<NormalizedLlin, LangError> {
    let table = match &spec.weights {
        Weights::LogForm { .. } => {
            if spec.theta != Ratio::one() {
                return Err(LangError::BadSpec(
                    "log-form weights are reserved for normalized specs (threshold 1)".into(),
                ));
            }
            let epsilon = certify_logform_gap(spec, max_values)?;
            return Ok(NormalizedLlin {
                spec: spec.clone(),
                epsilon: epsilon.clone(),
                pre_rounding_gap: epsilon,
                scale: Ratio::one(),
            });
        }
        Weights::Rational(t) => t,
    };

    let positives: Vec<Ratio> = {
        let mut set: BTreeSet<Ratio> = BTreeSet::new();
        for a in table.values() {
            if !a.is_zero() {
                set.insert(a.clone());
            }
        }
        set.into_iter().collect()
    };
    if positives.is_empty() {
        return Ok(NormalizedLlin {
            spec: trivial_logform(spec),
            epsilon: Ratio::one(),
            pre_rounding_gap: Ratio::one(),
            scale: Ratio::one(),
        });
    }

    let alpha_max = positives.last().expect("nonempty").clone();
    let bound = &spec.theta + &alpha_max;
    let sums = attainable_sums(&positives, &bound, max_values)?;
    let below_max = sums
        .iter()
        .filter(|v| **v <= spec.theta)
        .max()
        .cloned()
        .expect("zero is always attainable");
    let above_min = sums.iter().find(|v| **v > spec.theta).cloned();
    let above_min = match above_min {
        // Threshold unreachable: the weighted condition is vacuous.
        None => {
            return Ok(NormalizedLlin {
                spec: trivial_logform(spec),
                epsilon: Ratio::one(),
                pre_rounding_gap: Ratio::one(),
                scale: Ratio::one(),
            });
        }
        Some(v) => v,
    };

    // Midpoint rescale: attainable sums land at distance ≥ ε₀ from 1.
    let scale = &(&below_max + &above_min) / &Ratio::from_u64(2);
    let gap = &(&above_min - &below_max) / &(&above_min + &below_max);

    // Pick an even k: all rescaled weights below k/2, and the rounding margin
    // log(2^{k/2}+1) − k/2 at most  a·ε₀ / (2|Σ|^ℓ)  for the minimum positive
    // rescaled weight a.
    let a_min = &positives[0] / &scale;
    let alpha_max_scaled = &alpha_max / &scale;
    let sigma_ell = BigUint::from(spec.alphabet.len() as u64).pow(spec.ell as u32);
    let margin = &(&a_min * &gap) / &(&Ratio::from_u64(2) * &Ratio::new(sigma_ell, BigUint::one()));
    let mut k: u32 = 2;
    loop {
        if k > 512 {
            return Err(LangError::BadSpec(
                "no reasonable rounding precision satisfies the margin".into(),
            ));
        }
        let half_k = Ratio::from_u64(k as u64 / 2);
        if alpha_max_scaled < half_k && rounding_margin_ok(k, &margin) {
            break;
        }
        k += 2;
    }

    // Round each weight up: n+1 = ⌊2^{k − α″(m)}⌋ (componentwise q-th root).
    let mut log_table: BTreeMap<Word, BigUint> = BTreeMap::new();
    for (m, a) in table {
        if a.is_zero() {
            continue; // default n = 2^k − 1, weight exactly zero
        }
        let scaled = a / &scale;
        let p = scaled.numerator();
        let q = u32::try_from(scaled.denominator()).map_err(|_| LangError::Overflow)?;
        let kq = BigUint::from(k as u64) * scaled.denominator();
        let e = u64::try_from(&(&kq - p)).map_err(|_| LangError::Overflow)?;
        let pow = BigUint::one() << e as usize;
        let n_plus_one = integer_root(&pow, q);
        log_table.insert(m.clone(), n_plus_one - BigUint::one());
    }
    let normalized = LlinSpec::new(
        spec.alphabet.clone(),
        spec.ell,
        spec.prefixes.clone(),
        spec.suffixes.clone(),
        Weights::LogForm { k, table: log_table },
        Ratio::one(),
    )?;
    let epsilon = &gap / &Ratio::from_u64(2);
    Ok(NormalizedLlin {
        spec: normalized,
        epsilon,
        pre_rounding_gap: gap,
        scale,
    })
}

/// `log(2^{k/2}+1) − k/2 ≤ margin`, decided exactly:
/// `(2^{k/2}+1)^q ≤ 2^{kq/2 + p}` for `margin = p/q`.
fn rounding_margin_ok(k: u32, margin: &Ratio) -> bool {
    let q = match u32::try_from(margin.denominator()) {
        Ok(q) => q,
        Err(_) => return false,
    };
    let base = (BigUint::one() << (k / 2) as usize) + BigUint::one();
    let lhs = base.pow(q);
    let e = BigUint::from(k as u64 / 2) * margin.denominator() + margin.numerator();
    let e = match u64::try_from(&e) {
        Ok(e) => e,
        Err(_) => return true,
    };
    // lhs is odd, so equality with a power of two is impossible.
    lhs.bits() <= e
}

/// Attainable log-form sums in product representation: a sum
/// `Σ c_m (k − log(n_m+1))` is carried as `(N, P) = (Σ c_m, Π (n_m+1)^{c_m})`
/// over the positive-weight infixes; its value is `kN − log P`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct LogVal {
    n: u64,
    p: BigUint,
}

fn logval_cmp_ratio(k: u32, v: &LogVal, c: &Ratio) -> core::cmp::Ordering {
    // kN − log P  vs  a/b   ⇔   2^{bkN} vs 2^a · P^b
    let b = u32::try_from(c.denominator()).expect("threshold denominator fits");
    let a = u64::try_from(c.numerator()).expect("threshold numerator fits");
    let lhs = BigUint::one() << (b as u64 * k as u64 * v.n) as usize;
    let rhs = (BigUint::one() << a as usize) * v.p.pow(b);
    lhs.cmp(&rhs)
}

/// Certifies a gap for a log-form spec with threshold 1: the largest
/// `ε = 1/2^i` with every attainable sum `< 1−ε` or `> 1+ε`.
fn certify_logform_gap(spec: &LlinSpec, max_values: usize) -> Result<Ratio, LangError> {
    let (k, table) = match &spec.weights {
        Weights::LogForm { k, table } => (*k, table),
        Weights::Rational(_) => unreachable!("caller checked the weight form"),
    };
    let cap_minus_one = (BigUint::one() << k) - BigUint::one();
    let mut factors: BTreeSet<BigUint> = BTreeSet::new();
    for n in table.values() {
        if *n != cap_minus_one {
            factors.insert(n + BigUint::one());
        }
    }
    if factors.is_empty() {
        return Ok(Ratio::one());
    }

    // Enumerate attainable (N, P) with value ≤ 1 + k (one extra copy of any
    // window past the threshold at most adds k).
    let bound = Ratio::from_u64(1 + k as u64);
    let mut seen: BTreeSet<LogVal> = BTreeSet::new();
    let mut stack: Vec<LogVal> = alloc::vec![LogVal {
        n: 0,
        p: BigUint::one(),
    }];
    while let Some(v) = stack.pop() {
        if seen.contains(&v) {
            continue;
        }
        if seen.len() >= max_values {
            return Err(LangError::BudgetExceeded {
                what: "attainable log-form sums",
            });
        }
        for f in &factors {
            let next = LogVal {
                n: v.n + 1,
                p: &v.p * f,
            };
            if logval_cmp_ratio(k, &next, &bound) != core::cmp::Ordering::Greater
                && !seen.contains(&next)
            {
                stack.push(next);
            }
        }
        seen.insert(v);
    }

    let one = Ratio::one();
    let mut below: Option<&LogVal> = None;
    let mut above: Option<&LogVal> = None;
    for v in &seen {
        match logval_cmp_ratio(k, v, &one) {
            core::cmp::Ordering::Greater => {
                let better = match above {
                    None => true,
                    Some(b) => logval_less(k, v, b),
                };
                if better {
                    above = Some(v);
                }
            }
            _ => {
                let better = match below {
                    None => true,
                    Some(b) => logval_less(k, b, v),
                };
                if better {
                    below = Some(v);
                }
            }
        }
    }
    let below = below.expect("zero is attainable");
    if above.is_none() {
        return Ok(Ratio::one());
    }
    let above = above.expect("checked");

    // Small denominators keep the exact power comparisons cheap; any valid
    // certified gap works, maximality is not required.
    for den in [2u64, 3, 4, 5, 6, 8, 10, 12, 16, 24, 32, 48, 64, 96, 128] {
        let eps = Ratio::from_u64s(1, den);
        let low = &one - &eps;
        let high = &one + &eps;
        if logval_cmp_ratio(k, below, &low) == core::cmp::Ordering::Less
            && logval_cmp_ratio(k, above, &high) == core::cmp::Ordering::Greater
        {
            return Ok(eps);
        }
    }
    Err(LangError::BadSpec(
        "gap around the threshold too small to certify".into(),
    ))
}

/// `value(a) < value(b)` for log-form sums:
/// `kN_a − log P_a < kN_b − log P_b  ⇔  P_b · 2^{kN_a} < P_a · 2^{kN_b}`.
fn logval_less(k: u32, a: &LogVal, b: &LogVal) -> bool {
    let lhs = &b.p << (k as u64 * a.n) as usize;
    let rhs = &a.p << (k as u64 * b.n) as usize;
    lhs < rhs
}

/// Does the certified gap hold for this word? Exactly one of
/// `f(w) < 1−ε` / `f(w) > 1+ε` must be true for normalized specs.
pub fn gap_holds(spec: &LlinSpec, epsilon: &Ratio, w: &[Name]) -> Result<bool, LangError> {
    let (k, table) = match &spec.weights {
        Weights::LogForm { k, table } => (*k, table),
        Weights::Rational(_) => {
            return Err(LangError::BadSpec("gap checks expect a normalized spec".into()))
        }
    };
    let counts = super::llin::infix_counts(w, spec.ell);
    let cap_minus_one = (BigUint::one() << k) - BigUint::one();
    let mut val = LogVal {
        n: 0,
        p: BigUint::one(),
    };
    for (m, &c) in &counts {
        let n = table.get(m).unwrap_or(&cap_minus_one);
        if *n == cap_minus_one {
            continue; // weight zero contributes nothing
        }
        val.n += c;
        val.p *= (n + BigUint::one()).pow(c as u32);
    }
    let low = &Ratio::one() - epsilon;
    let high = &Ratio::one() + epsilon;
    Ok(logval_cmp_ratio(k, &val, &low) == core::cmp::Ordering::Less
        || logval_cmp_ratio(k, &val, &high) == core::cmp::Ordering::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::{llin_membership, word, words_of_length};

    fn th11() -> LlinSpec {
        LlinSpec::new(
            word("01"),
            1,
            None,
            None,
            Weights::rational(alloc::vec![
                (word("0"), Ratio::zero()),
                (word("1"), Ratio::one()),
            ]),
            Ratio::one(),
        )
        .unwrap()
    }

    #[test]
    fn threshold_one_spec_normalizes_with_third_gap() {
        let norm = normalize_llin(&th11(), 100_000).unwrap();
        // Attainable sums 0,1,2,…: midpoint 3/2, rescaled gap 1/3, halved.
        assert_eq!(norm.scale, Ratio::from_u64s(3, 2));
        assert_eq!(norm.pre_rounding_gap, Ratio::from_u64s(1, 3));
        assert_eq!(norm.epsilon, Ratio::from_u64s(1, 6));
        match &norm.spec.weights {
            Weights::LogForm { k, table } => {
                assert_eq!(table.len(), 1);
                assert!(*k >= 2);
            }
            _ => panic!("expected log form"),
        }
    }

    #[test]
    fn normalization_preserves_membership() {
        let spec = th11();
        let norm = normalize_llin(&spec, 100_000).unwrap();
        for n in 1..=10 {
            for w in words_of_length(&word("01"), n) {
                assert_eq!(
                    llin_membership(&spec, &w).unwrap(),
                    llin_membership(&norm.spec, &w).unwrap(),
                    "{w:?}"
                );
            }
        }
    }

    #[test]
    fn certified_gap_holds_on_words() {
        let norm = normalize_llin(&th11(), 100_000).unwrap();
        for n in 1..=10 {
            for w in words_of_length(&word("01"), n) {
                assert!(gap_holds(&norm.spec, &norm.epsilon, &w).unwrap(), "{w:?}");
            }
        }
    }

    #[test]
    fn all_zero_weights_are_trivial() {
        let spec = LlinSpec::new(
            word("01"),
            1,
            None,
            None,
            Weights::rational(alloc::vec![]),
            Ratio::zero(),
        )
        .unwrap();
        let norm = normalize_llin(&spec, 1000).unwrap();
        assert_eq!(norm.epsilon, Ratio::one());
        for w in ["0", "11", "0101"] {
            assert!(llin_membership(&norm.spec, &word(w)).unwrap());
        }
    }

    #[test]
    fn unreachable_threshold_is_trivial() {
        // One weighted window but a threshold no attainable sum exceeds is
        // impossible with positive weights; use weight 1, huge threshold: the
        // bound scan tops out at θ+α and always finds a value above θ only if
        // counts can push past it — they can, so pick weights where they
        // cannot: all zero except an unused... the reachable case: zero
        // weights handled above; here an integer-weight spec with θ large
        // still has sums above it, so normalization must rescale, not
        // trivialize.
        let spec = LlinSpec::new(
            word("01"),
            1,
            None,
            None,
            Weights::rational(alloc::vec![(word("1"), Ratio::one())]),
            Ratio::from_u64(3),
        )
        .unwrap();
        let norm = normalize_llin(&spec, 100_000).unwrap();
        assert_eq!(norm.scale, Ratio::from_u64s(7, 2));
        for n in 1..=8 {
            for w in words_of_length(&word("01"), n) {
                assert_eq!(
                    llin_membership(&spec, &w).unwrap(),
                    llin_membership(&norm.spec, &w).unwrap()
                );
            }
        }
    }

    #[test]
    fn slt_style_embedding_has_unit_gap() {
        let spec = LlinSpec::new(
            word("01"),
            1,
            None,
            None,
            Weights::rational(alloc::vec![(word("1"), Ratio::one())]),
            Ratio::from_u64s(1, 2),
        )
        .unwrap();
        let norm = normalize_llin(&spec, 100_000).unwrap();
        assert_eq!(norm.pre_rounding_gap, Ratio::one());
        assert_eq!(norm.epsilon, Ratio::from_u64s(1, 2));
    }
}
