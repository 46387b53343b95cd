//! Weighted local specs: a single linear threshold over infix counts.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::name::Name;
use crate::ratio::Ratio;

use super::{check_word, prefix_window, suffix_window, LangError, Word};

/// Weight assignment on length-`ℓ` infixes, total via a default:
/// unlisted infixes weigh zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    /// Arbitrary nonnegative rational weights (user-facing form).
    Rational(BTreeMap<Word, Ratio>),
    /// Normalized form: `α(m) = k − log(n_m + 1)` with `n_m ∈ [2^k]`, so each
    /// `2^{−α(m)}` equals the dyadic `(n_m+1)/2^k`. Unlisted infixes have
    /// `n_m = 2^k − 1`, i.e. weight zero.
    LogForm { k: u32, table: BTreeMap<Word, BigUint> },
}

impl Weights {
    pub fn rational(entries: Vec<(Word, Ratio)>) -> Weights {
        Weights::Rational(entries.into_iter().collect())
    }
}

/// A weighted local language spec `(ℓ, π, σ, α, θ)`: words whose length-`ℓ−1`
/// prefix and suffix are allowed and whose weighted count of length-`ℓ`
/// infixes stays at or below the threshold. `None` for a prefix/suffix set
/// means every window is allowed.
#[derive(Clone, Debug)]
pub struct LlinSpec {
    pub alphabet: Vec<Name>,
    pub ell: usize,
    pub prefixes: Option<BTreeSet<Word>>,
    pub suffixes: Option<BTreeSet<Word>>,
    pub weights: Weights,
    pub theta: Ratio,
}

impl LlinSpec {
    pub fn new(
        alphabet: Vec<Name>,
        ell: usize,
        prefixes: Option<BTreeSet<Word>>,
        suffixes: Option<BTreeSet<Word>>,
        weights: Weights,
        theta: Ratio,
    ) -> Result<LlinSpec, LangError> {
        if ell == 0 {
            return Err(LangError::BadSpec("window length must be positive".into()));
        }
        if alphabet.is_empty() {
            return Err(LangError::BadSpec("empty alphabet".into()));
        }
        for set in [&prefixes, &suffixes].into_iter().flatten() {
            for w in set.iter() {
                if w.len() >= ell {
                    return Err(LangError::BadSpec(
                        "prefix/suffix sets live below the window length".into(),
                    ));
                }
                for s in w {
                    if !alphabet.contains(s) {
                        return Err(LangError::SymbolOutsideAlphabet(*s));
                    }
                }
            }
        }
        match &weights {
            Weights::Rational(table) => {
                for m in table.keys() {
                    if m.len() != ell {
                        return Err(LangError::BadSpec("weight on a wrong-length infix".into()));
                    }
                }
            }
            Weights::LogForm { k, table } => {
                let cap = BigUint::one() << *k;
                for (m, n) in table {
                    if m.len() != ell {
                        return Err(LangError::BadSpec("weight on a wrong-length infix".into()));
                    }
                    if *n >= cap {
                        return Err(LangError::BadSpec("log-form index out of range".into()));
                    }
                }
            }
        }
        Ok(LlinSpec {
            alphabet,
            ell,
            prefixes,
            suffixes,
            weights,
            theta,
        })
    }

    pub fn prefix_ok(&self, w: &[Name]) -> bool {
        match &self.prefixes {
            None => true,
            Some(set) => set.contains(&prefix_window(w, self.ell - 1)),
        }
    }

    pub fn suffix_ok(&self, w: &[Name]) -> bool {
        match &self.suffixes {
            None => true,
            Some(set) => set.contains(&suffix_window(w, self.ell - 1)),
        }
    }

    /// The dyadic per-window acceptance probability `2^{−α(m)}` of a
    /// log-form spec, as `(n_m + 1, 2^k)` numerator and exponent.
    pub fn log_form_prob(&self, m: &[Name]) -> Option<(BigUint, u32)> {
        match &self.weights {
            Weights::LogForm { k, table } => {
                let n = table
                    .get(m)
                    .cloned()
                    .unwrap_or_else(|| (BigUint::one() << *k) - BigUint::one());
                Some((n + BigUint::one(), *k))
            }
            Weights::Rational(_) => None,
        }
    }
}

/// Overlapping occurrence count of `m` in `w` (e.g. `11` occurs twice in
/// `111`).
pub fn count_occurrences(w: &[Name], m: &[Name]) -> u64 {
    if m.is_empty() || m.len() > w.len() {
        return 0;
    }
    let mut count = 0;
    for start in 0..=(w.len() - m.len()) {
        if &w[start..start + m.len()] == m {
            count += 1;
        }
    }
    count
}

/// Counts of all length-`ell` infixes of `w`, overlapping.
pub fn infix_counts(w: &[Name], ell: usize) -> BTreeMap<Word, u64> {
    let mut counts = BTreeMap::new();
    if ell == 0 || ell > w.len() {
        return counts;
    }
    for start in 0..=(w.len() - ell) {
        *counts.entry(w[start..start + ell].to_vec()).or_insert(0) += 1;
    }
    counts
}

/// Checks the weighted-sum condition `Σ α(m)·|w|_m ≤ θ` exactly.
pub(crate) fn weight_sum_within(
    weights: &Weights,
    theta: &Ratio,
    counts: &BTreeMap<Word, u64>,
) -> bool {
    match weights {
        Weights::Rational(table) => {
            let mut sum = Ratio::zero();
            for (m, &c) in counts {
                if let Some(a) = table.get(m) {
                    if !a.is_zero() {
                        sum = &sum + &(a * &Ratio::from_u64(c));
                    }
                }
            }
            sum <= *theta
        }
        Weights::LogForm { k, table } => {
            // Σ c_m (k − log(n_m+1)) ≤ a/b  ⇔  P^b ≥ 2^{b·k·N − a}
            // where N = Σ c_m and P = Π (n_m+1)^{c_m}.
            let cap_minus_one = (BigUint::one() << *k) - BigUint::one();
            let mut product = BigUint::one();
            let mut total: u64 = 0;
            for (m, &c) in counts {
                total += c;
                let n = table.get(m).unwrap_or(&cap_minus_one);
                product *= (n + BigUint::one()).pow(c as u32);
            }
            let b = theta.denominator();
            let a = theta.numerator();
            let b_u32 = u32::try_from(b).expect("threshold denominator fits");
            let lhs = product.pow(b_u32);
            let exp = BigUint::from(*k as u64) * BigUint::from(total) * b;
            if exp <= *a {
                return true;
            }
            // lhs ≥ 2^e ⇔ bit length of lhs exceeds e.
            let e = u64::try_from(&(&exp - a)).expect("exponent fits");
            lhs.bits() > e
        }
    }
}

/// Membership in a weighted local language: allowed prefix and suffix windows
/// plus the exact weighted-count threshold.
pub fn llin_membership(spec: &LlinSpec, w: &[Name]) -> Result<bool, LangError> {
    check_word(&spec.alphabet, w)?;
    if !spec.prefix_ok(w) || !spec.suffix_ok(w) {
        return Ok(false);
    }
    let counts = infix_counts(w, spec.ell);
    Ok(weight_sum_within(&spec.weights, &spec.theta, &counts))
}

/// Streaming recognizer: a sliding window plus a single counter.
///
/// Feeds one symbol at a time and answers at the end of the input; agrees
/// with [`llin_membership`] on every word.
pub struct LlinScanner {
    spec: LlinSpec,
    window: Vec<Name>,
    first: Vec<Name>,
    len: usize,
    // Counter: rational sum, or (window count, index product) in log form.
    sum: Ratio,
    product: BigUint,
    windows_seen: u64,
}

impl LlinScanner {
    pub fn new(spec: &LlinSpec) -> LlinScanner {
        LlinScanner {
            spec: spec.clone(),
            window: Vec::new(),
            first: Vec::new(),
            len: 0,
            sum: Ratio::zero(),
            product: BigUint::one(),
            windows_seen: 0,
        }
    }

    pub fn push(&mut self, s: Name) -> Result<(), LangError> {
        if !self.spec.alphabet.contains(&s) {
            return Err(LangError::SymbolOutsideAlphabet(s));
        }
        self.len += 1;
        if self.first.len() < self.spec.ell.saturating_sub(1) {
            self.first.push(s);
        }
        self.window.push(s);
        if self.window.len() > self.spec.ell {
            self.window.remove(0);
        }
        if self.window.len() == self.spec.ell {
            self.windows_seen += 1;
            match &self.spec.weights {
                Weights::Rational(table) => {
                    if let Some(a) = table.get(&self.window) {
                        self.sum = &self.sum + a;
                    }
                }
                Weights::LogForm { k, table } => {
                    let n = table
                        .get(&self.window)
                        .cloned()
                        .unwrap_or_else(|| (BigUint::one() << *k) - BigUint::one());
                    self.product *= n + BigUint::one();
                }
            }
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<bool, LangError> {
        if self.len == 0 {
            return Err(LangError::EmptyWord);
        }
        let keep = self.spec.ell - 1;
        let suffix: Vec<Name> = if self.len <= keep {
            self.window.clone()
        } else {
            self.window[self.window.len() - keep..].to_vec()
        };
        let prefix_ok = match &self.spec.prefixes {
            None => true,
            Some(set) => set.contains(&self.first),
        };
        let suffix_ok = match &self.spec.suffixes {
            None => true,
            Some(set) => set.contains(&suffix),
        };
        if !prefix_ok || !suffix_ok {
            return Ok(false);
        }
        Ok(match &self.spec.weights {
            Weights::Rational(_) => self.sum <= self.spec.theta,
            Weights::LogForm { k, .. } => {
                let b = self.spec.theta.denominator();
                let a = self.spec.theta.numerator();
                let b_u32 = u32::try_from(b).expect("threshold denominator fits");
                let lhs = self.product.pow(b_u32);
                let exp = BigUint::from(*k as u64) * BigUint::from(self.windows_seen) * b;
                if exp <= *a {
                    true
                } else {
                    let e = u64::try_from(&(&exp - a)).expect("exponent fits");
                    lhs.bits() > e
                }
            }
        })
    }
}
