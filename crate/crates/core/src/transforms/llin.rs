//! Compiling weighted local language specs into coin-flipping acceptors.
//!
//! Every cell gathers the window it is responsible for, then draws one coin
//! per weight bit and compares the resulting integer against the window's
//! index `n_m`, accepting in a single decision step with probability exactly
//! `(n_m+1)/2^k = 2^{−α(m)}`. Cells whose window sticks out past a border
//! accept unconditionally (only full-length windows are counted by the
//! weighted sum), and the cells that can see a border check the prefix/suffix
//! sets. The acceptance probability of a word passing those checks is
//! exactly `2^{−Σ α(m)·|w|_m}`.
//!
//! Weights must be dyadic-representable. Integer weights are compiled as
//! given, keeping the one-shot probabilities in terms of the original
//! weights; anything else goes through [`normalize_llin`] first, which
//! rescales the threshold to 1 and rounds the weights into dyadic form with
//! a certified gap. Either way the attainable weighted sums on each side of
//! the threshold give exact dyadic acceptance bounds `(A, B)` for members
//! and non-members, and a threshold amplifier lifts those to the two-sided
//! (1/3)-error bands.
//!
//! The comparator consumes its coins most significant bit first through a
//! three-way state (less / equal / greater), so a cell's live randomness is
//! constant-size no matter how many coin bits the weights need.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::automaton::{Accepting, LocalRule, Paca, StateSet, StateVal};
use crate::dyadic::Dyadic;
use crate::langs::{normalize_llin, LlinSpec, NormalizedLlin, Weights, Word};
use crate::name::Name;
use crate::prob::Budget;
use crate::ratio::Ratio;

use super::recorder::amplify_threshold;
use super::{tag, TransformError, TransformReport};

/// Everything the compiler produced: the one-shot automaton, its exact
/// acceptance bounds, the amplifier parameters, and the amplified output.
#[derive(Clone, Debug)]
pub struct LlinCompilation {
    /// The pre-amplification acceptor (accepts members with probability
    /// `2^{−f(w)}` at one fixed step).
    pub pre: Paca,
    pub pre_horizon: u32,
    /// Members are accepted with probability at least this.
    pub accept_bound: Dyadic,
    /// Non-members with probability at most this; `None` when the weighted
    /// condition can never fail.
    pub reject_bound: Option<Dyadic>,
    /// Amplifier copy count and threshold; `(1, 1)` means no amplification
    /// was needed.
    pub copies: u32,
    pub threshold: u32,
    /// Set when the spec was rescaled rather than compiled verbatim.
    pub normalized: Option<NormalizedLlin>,
    pub report: TransformReport,
}

struct CompiledWeights {
    k: u32,
    /// `n_m + 1` per window; unlisted windows get `2^k` (weight zero).
    index_plus_one: BTreeMap<Word, BigUint>,
}

impl CompiledWeights {
    fn prob_of(&self, window: &[Name]) -> BigUint {
        self.index_plus_one
            .get(window)
            .cloned()
            .unwrap_or_else(|| BigUint::one() << self.k)
    }
}

/// Attainable-sum bounds around the threshold in dyadic probability form:
/// `A = 2^{−max{f ≤ θ}}`, `B = 2^{−min{f > θ}}` (absent when no attainable
/// sum exceeds the threshold).
fn integer_bounds(
    table: &BTreeMap<Word, Ratio>,
    theta: &Ratio,
    max_values: usize,
) -> Result<(Dyadic, Option<Dyadic>), TransformError> {
    let mut weights: Vec<u64> = Vec::new();
    for a in table.values() {
        if !a.is_zero() {
            let w = u64::try_from(a.numerator())
                .map_err(|_| TransformError::InvalidParameter("weight too large".into()))?;
            if !weights.contains(&w) {
                weights.push(w);
            }
        }
    }
    if weights.is_empty() {
        return Ok((Dyadic::one(), None));
    }
    let theta_floor = {
        // Largest integer at or below θ.
        let q = theta.numerator() / theta.denominator();
        u64::try_from(&q).map_err(|_| TransformError::InvalidParameter("threshold too large".into()))?
    };
    let bound = theta_floor + *weights.iter().max().expect("nonempty");
    if bound as usize > 8 * max_values {
        return Err(TransformError::SizeBudget {
            what: "attainable weight sums",
            needed: bound,
            budget: 8 * max_values as u64,
        });
    }
    // Attainable subset sums of the weights up to the bound.
    let mut attainable = alloc::vec![false; bound as usize + 1];
    attainable[0] = true;
    let mut count = 0usize;
    for v in 0..=bound as usize {
        if !attainable[v] {
            continue;
        }
        count += 1;
        if count > max_values {
            return Err(TransformError::SizeBudget {
                what: "attainable weight sums",
                needed: count as u64,
                budget: max_values as u64,
            });
        }
        for &w in &weights {
            let next = v as u64 + w;
            if next <= bound {
                attainable[next as usize] = true;
            }
        }
    }
    let within = |v: u64| Ratio::from_u64(v) <= *theta;
    let below_max = (0..=bound).filter(|&v| attainable[v as usize] && within(v)).max();
    let above_min = (0..=bound).find(|&v| attainable[v as usize] && !within(v));
    let below_max = below_max.expect("zero is attainable");
    let a = Dyadic::new(BigUint::one(), below_max as u32);
    let b = above_min.map(|v| Dyadic::new(BigUint::one(), v as u32));
    Ok((a, b))
}

/// Bounds for a normalized log-form spec (threshold 1): attainable sums are
/// carried as `(N, P)` with value `kN − log P` and probability `P / 2^{kN}`.
fn logform_bounds(
    k: u32,
    table: &BTreeMap<Word, BigUint>,
    max_values: usize,
) -> Result<(Dyadic, Option<Dyadic>), TransformError> {
    let cap_minus_one = (BigUint::one() << k) - BigUint::one();
    let mut factors: Vec<BigUint> = Vec::new();
    for n in table.values() {
        if *n != cap_minus_one && !factors.contains(&(n + BigUint::one())) {
            factors.push(n + BigUint::one());
        }
    }
    if factors.is_empty() {
        return Ok((Dyadic::one(), None));
    }
    // f ≤ bound = 1 + k (one extra window past the threshold at most adds k).
    let cmp_bound = |n: u64, p: &BigUint, num: u64, den: u64| -> core::cmp::Ordering {
        // kN − log P  vs  num/den  ⇔  2^{den·k·N}  vs  2^{num} · P^{den}
        let lhs = BigUint::one() << (den * k as u64 * n) as usize;
        let rhs = (BigUint::one() << num as usize) * p.pow(den as u32);
        lhs.cmp(&rhs)
    };
    let bound = (1 + k as u64, 1u64);
    let mut seen: alloc::collections::BTreeSet<(u64, BigUint)> = alloc::collections::BTreeSet::new();
    let mut stack: Vec<(u64, BigUint)> = alloc::vec![(0, BigUint::one())];
    while let Some((n, p)) = stack.pop() {
        if seen.contains(&(n, p.clone())) {
            continue;
        }
        if seen.len() >= max_values {
            return Err(TransformError::SizeBudget {
                what: "attainable weight sums",
                needed: seen.len() as u64 + 1,
                budget: max_values as u64,
            });
        }
        for f in &factors {
            let cand = (n + 1, &p * f);
            if cmp_bound(cand.0, &cand.1, bound.0, bound.1) != core::cmp::Ordering::Greater
                && !seen.contains(&cand)
            {
                stack.push(cand);
            }
        }
        seen.insert((n, p));
    }
    // Probability of a value (N, P) is P / 2^{kN}; larger value = smaller
    // probability, so A is the max probability at or below... A bounds the
    // members: max f ≤ 1 ⇒ min member probability = 2^{−max f≤1}.
    let mut best_below: Option<Dyadic> = None; // min probability among f ≤ 1
    let mut best_above: Option<Dyadic> = None; // max probability among f > 1
    for (n, p) in &seen {
        let prob = Dyadic::new(p.clone(), k * *n as u32);
        match cmp_bound(*n, p, 1, 1) {
            core::cmp::Ordering::Greater => {
                if best_above.as_ref().map(|b| prob > *b).unwrap_or(true) {
                    best_above = Some(prob);
                }
            }
            _ => {
                if best_below.as_ref().map(|b| prob < *b).unwrap_or(true) {
                    best_below = Some(prob);
                }
            }
        }
    }
    Ok((best_below.expect("zero sum attainable"), best_above))
}

/// Compiles a weighted local spec into a two-sided (1/3)-error acceptor.
pub fn paca_from_llin(spec: &LlinSpec, budget: &Budget) -> Result<LlinCompilation, TransformError> {
    let (compiled, bounds, normalized, verbatim) = match &spec.weights {
        Weights::Rational(table) if table.values().all(|a| a.is_integer()) => {
            let k = table
                .values()
                .map(|a| u64::try_from(a.numerator()).unwrap_or(u64::MAX))
                .max()
                .unwrap_or(0);
            let k = u32::try_from(k)
                .ok()
                .filter(|k| *k <= 64)
                .ok_or_else(|| TransformError::InvalidParameter("weight too large".into()))?;
            let mut index = BTreeMap::new();
            for (m, a) in table {
                let alpha = u64::try_from(a.numerator()).expect("checked above");
                index.insert(m.clone(), BigUint::one() << (k as u64 - alpha) as usize);
            }
            let bounds = integer_bounds(table, &spec.theta, budget.value_enum)?;
            (CompiledWeights { k, index_plus_one: index }, bounds, None, true)
        }
        Weights::LogForm { k, table } => {
            if spec.theta != Ratio::one() {
                return Err(TransformError::InvalidParameter(
                    "log-form specs must carry threshold 1".into(),
                ));
            }
            let mut index = BTreeMap::new();
            for (m, n) in table {
                index.insert(m.clone(), n + BigUint::one());
            }
            let bounds = logform_bounds(*k, table, budget.value_enum)?;
            (CompiledWeights { k: *k, index_plus_one: index }, bounds, None, true)
        }
        Weights::Rational(_) => {
            let norm = normalize_llin(spec, budget.value_enum)
                .map_err(|e| TransformError::InvalidParameter(format!("{e}")))?;
            let (k, table) = match &norm.spec.weights {
                Weights::LogForm { k, table } => (*k, table.clone()),
                Weights::Rational(_) => unreachable!("normalization yields log form"),
            };
            let mut index = BTreeMap::new();
            for (m, n) in &table {
                index.insert(m.clone(), n + BigUint::one());
            }
            let bounds = logform_bounds(k, &table, budget.value_enum)?;
            (
                CompiledWeights { k, index_plus_one: index },
                bounds,
                Some(norm),
                false,
            )
        }
    };

    let active_spec = normalized.as_ref().map(|n| &n.spec).unwrap_or(spec);
    let (pre, pre_horizon) = build_window_acceptor(active_spec, compiled)?;
    let (accept_bound, reject_bound) = bounds;

    let (report, copies, threshold) = match &reject_bound {
        None => {
            let report = TransformReport::new(pre.clone(), pre_horizon as u64)
                .param("copies", 1)
                .note("threshold unreachable: members are accepted with probability 1");
            (report, 1, 1)
        }
        Some(b) => {
            let (report, m, j) = amplify_threshold(&pre, pre_horizon, &accept_bound, b, budget)?;
            (report.param("pre_horizon", pre_horizon), m, j)
        }
    };
    let mut report = report.note(if verbatim {
        "weights compiled verbatim (already dyadic)"
    } else {
        "weights rescaled to threshold 1 and rounded into dyadic form"
    });
    report = report.note(
        "cells with truncated border windows accept unconditionally; only full-length windows are counted",
    );
    Ok(LlinCompilation {
        pre,
        pre_horizon,
        accept_bound,
        reject_bound,
        copies,
        threshold,
        normalized,
        report,
    })
}

mod cmp_state {
    pub const EQ: i64 = 0;
    pub const LT: i64 = 1;
    pub const GT: i64 = 2;
}

struct WindowSpec {
    alphabet: Vec<Name>,
    ell: usize,
    offs: usize,
    s_w: u32,
    k: u32,
    compiled: CompiledWeights,
    prefixes: Option<alloc::collections::BTreeSet<Word>>,
    suffixes: Option<alloc::collections::BTreeSet<Word>>,
    boundary: StateVal,
}

/// Builds the one-shot window acceptor for a dyadic-weight spec.
fn build_window_acceptor(
    spec: &LlinSpec,
    compiled: CompiledWeights,
) -> Result<(Paca, u32), TransformError> {
    let ell = spec.ell;
    let offs = (ell - 1) / 2;
    let s_w = (ell - 1).div_ceil(2) as u32;
    let k = compiled.k;
    let verdict_step = (s_w + k).max(1);
    let wspec = Arc::new(WindowSpec {
        alphabet: spec.alphabet.clone(),
        ell,
        offs,
        s_w,
        k,
        compiled,
        prefixes: spec.prefixes.clone(),
        suffixes: spec.suffixes.clone(),
        boundary: StateVal::sym("$"),
    });
    if wspec.alphabet.iter().any(|n| n.as_str() == "$") {
        return Err(TransformError::Incompatible(
            "alphabet may not contain the boundary symbol".into(),
        ));
    }
    let rule = |coin: u64| -> LocalRule {
        let wspec = wspec.clone();
        LocalRule::proc(
            if coin == 0 { "window-acceptor-0" } else { "window-acceptor-1" },
            move |l, c, r| window_step(&wspec, coin, l, c, r),
        )
    };
    let pre_horizon = verdict_step + 1;
    let paca = Paca {
        label: "window_acceptor".into(),
        states: StateSet::lazy(wspec.boundary.clone()),
        input_alphabet: wspec.alphabet.iter().map(|n| StateVal::Sym(*n)).collect(),
        accepting: Accepting::pred("window-verdict", |s| {
            matches!(s, StateVal::Packed { tag: t, lo: 1, .. } if *t == tag::LLIN_VERDICT)
        }),
        rule0: rule(0),
        rule1: rule(1),
        deterministic: false,
        horizon: Some(pre_horizon as u64),
    };
    Ok((paca, pre_horizon))
}

fn window_step(spec: &WindowSpec, coin: u64, l: &StateVal, c: &StateVal, r: &StateVal) -> StateVal {
    match c {
        StateVal::Sym(_) => {
            if spec.s_w == 0 {
                // No gathering needed: the window is the cell itself.
                let window = alloc::vec![c.clone()];
                comparator_entry(spec, coin, &window)
            } else {
                let window = alloc::vec![l.clone(), c.clone(), r.clone()];
                if spec.s_w == 1 {
                    gather_done(spec, window)
                } else {
                    let mut parts = alloc::vec![StateVal::Int(1)];
                    parts.extend(window);
                    StateVal::comp(tag::LLIN_GATHER, parts)
                }
            }
        }
        StateVal::Comp { tag: t, parts } if *t == tag::LLIN_GATHER => {
            let s = match &parts[0] {
                StateVal::Int(s) => *s as u32,
                _ => 0,
            };
            let left_edge = match l {
                StateVal::Comp { tag: t2, parts: lp } if *t2 == tag::LLIN_GATHER => lp[1].clone(),
                _ => spec.boundary.clone(),
            };
            let right_edge = match r {
                StateVal::Comp { tag: t2, parts: rp } if *t2 == tag::LLIN_GATHER => {
                    rp[rp.len() - 1].clone()
                }
                _ => spec.boundary.clone(),
            };
            let mut window = Vec::with_capacity(parts.len() + 1);
            window.push(left_edge);
            window.extend(parts[1..].iter().cloned());
            window.push(right_edge);
            if s + 1 == spec.s_w {
                gather_done(spec, window)
            } else {
                let mut out = alloc::vec![StateVal::Int(s as i64 + 1)];
                out.extend(window);
                StateVal::comp(tag::LLIN_GATHER, out)
            }
        }
        StateVal::Comp { tag: t, parts } if *t == tag::LLIN_CMP => {
            let (j, cmp, statics_ok) = match (&parts[0], &parts[1], &parts[2]) {
                (StateVal::Int(j), StateVal::Int(cmp), StateVal::Int(ok)) => {
                    (*j as u32, *cmp, *ok == 1)
                }
                _ => return StateVal::packed(tag::LLIN_DEAD, 0),
            };
            let window: Vec<StateVal> = parts[3..].to_vec();
            let cmp = comparator_advance(spec, cmp, j, coin, &window);
            if j + 1 == spec.k {
                verdict(statics_ok, cmp)
            } else {
                let mut out = alloc::vec![
                    StateVal::Int(j as i64 + 1),
                    StateVal::Int(cmp),
                    StateVal::Int(statics_ok as i64),
                ];
                out.extend(window);
                StateVal::comp(tag::LLIN_CMP, out)
            }
        }
        _ => StateVal::packed(tag::LLIN_DEAD, 0),
    }
}

/// The gathered window is complete: run the static checks and enter the
/// comparator (or go straight to the verdict when there are no coins).
fn gather_done(spec: &WindowSpec, window: Vec<StateVal>) -> StateVal {
    let statics_ok = static_checks(spec, &window);
    if spec.k == 0 {
        return verdict(statics_ok, cmp_state::LT);
    }
    let cmp = comparator_init(spec, &window);
    let mut out = alloc::vec![
        StateVal::Int(0),
        StateVal::Int(cmp),
        StateVal::Int(statics_ok as i64),
    ];
    out.extend(window);
    StateVal::comp(tag::LLIN_CMP, out)
}

/// Entry point when gathering is skipped entirely (`s_w == 0`): the first
/// transition already consumes a coin.
fn comparator_entry(spec: &WindowSpec, coin: u64, window: &[StateVal]) -> StateVal {
    let statics_ok = static_checks(spec, window);
    if spec.k == 0 {
        return verdict(statics_ok, cmp_state::LT);
    }
    let cmp = comparator_advance(spec, comparator_init(spec, window), 0, coin, window);
    if spec.k == 1 {
        verdict(statics_ok, cmp)
    } else {
        let mut out = alloc::vec![
            StateVal::Int(1),
            StateVal::Int(cmp),
            StateVal::Int(statics_ok as i64),
        ];
        out.extend(window.iter().cloned());
        StateVal::comp(tag::LLIN_CMP, out)
    }
}

fn verdict(statics_ok: bool, cmp: i64) -> StateVal {
    let accept = statics_ok && cmp != cmp_state::GT;
    StateVal::packed(tag::LLIN_VERDICT, accept as u64)
}

/// The cell's own window slice, if fully inside the word.
fn responsibility<'a>(spec: &WindowSpec, window: &'a [StateVal]) -> Option<Vec<&'a StateVal>> {
    let center = spec.s_w as usize;
    let start = center - spec.offs;
    let slice = &window[start..start + spec.ell];
    if slice.iter().any(|s| *s == spec.boundary) {
        return None;
    }
    Some(slice.iter().collect())
}

fn comparator_init(spec: &WindowSpec, window: &[StateVal]) -> i64 {
    match responsibility(spec, window) {
        // Truncated window: accept unconditionally.
        None => cmp_state::LT,
        Some(slice) => {
            let word: Word = slice
                .iter()
                .map(|s| match s {
                    StateVal::Sym(n) => *n,
                    _ => Name::from_char('?'),
                })
                .collect();
            let n_plus_one = spec.compiled.prob_of(&word);
            if n_plus_one == (BigUint::one() << spec.k) {
                cmp_state::LT // weight zero: every coin value passes
            } else {
                cmp_state::EQ
            }
        }
    }
}

/// One comparator step: compare the next coin against bit `k−1−j` of `n_m`
/// (most significant first). The coin integer is at most `n_m` exactly when
/// the comparison ends below or equal.
fn comparator_advance(spec: &WindowSpec, cmp: i64, j: u32, coin: u64, window: &[StateVal]) -> i64 {
    if cmp != cmp_state::EQ {
        return cmp;
    }
    let slice = match responsibility(spec, window) {
        None => return cmp_state::LT,
        Some(s) => s,
    };
    let word: Word = slice
        .iter()
        .map(|s| match s {
            StateVal::Sym(n) => *n,
            _ => Name::from_char('?'),
        })
        .collect();
    let n_m = spec.compiled.prob_of(&word) - BigUint::one();
    let bit_pos = (spec.k - 1 - j) as u64;
    let n_bit = n_m.bit(bit_pos) as u64;
    if coin < n_bit {
        cmp_state::LT
    } else if coin > n_bit {
        cmp_state::GT
    } else {
        cmp_state::EQ
    }
}

/// Prefix/suffix checks by the cells that can decide them. A cell can check
/// the prefix when it sees the left border and either `ℓ−1` real symbols
/// after it or the right border first; symmetrically for the suffix.
fn static_checks(spec: &WindowSpec, window: &[StateVal]) -> bool {
    let is_b = |s: &StateVal| *s == spec.boundary;
    let width = window.len();
    let keep = spec.ell - 1;
    if keep == 0 {
        // Zero-length windows: both checks reduce to "is the empty word in
        // the set", a constant every cell can apply.
        let empty: Word = Vec::new();
        let pre_ok = spec.prefixes.as_ref().map(|s| s.contains(&empty)).unwrap_or(true);
        let suf_ok = spec.suffixes.as_ref().map(|s| s.contains(&empty)).unwrap_or(true);
        return pre_ok && suf_ok;
    }
    if let Some(set) = &spec.prefixes {
        // Leftmost real position after the rightmost left-border mark.
        let left_border = window[..width.min(spec.s_w as usize)]
            .iter()
            .rposition(is_b);
        if let Some(b) = left_border {
            let mut prefix: Word = Vec::new();
            let mut complete = false;
            for s in &window[b + 1..] {
                if is_b(s) {
                    complete = true; // whole word visible
                    break;
                }
                if prefix.len() == keep {
                    complete = true;
                    break;
                }
                if let StateVal::Sym(n) = s {
                    prefix.push(*n);
                }
            }
            if complete && !set.contains(&prefix) {
                return false;
            }
        }
    }
    if let Some(set) = &spec.suffixes {
        let right_border = window[width - (spec.s_w as usize).min(width)..]
            .iter()
            .position(is_b)
            .map(|p| p + width - (spec.s_w as usize).min(width));
        if let Some(b) = right_border {
            let mut suffix_rev: Word = Vec::new();
            let mut complete = false;
            for s in window[..b].iter().rev() {
                if is_b(s) {
                    complete = true;
                    break;
                }
                if suffix_rev.len() == keep {
                    complete = true;
                    break;
                }
                if let StateVal::Sym(n) = s {
                    suffix_rev.push(*n);
                }
            }
            if complete {
                let suffix: Word = suffix_rev.into_iter().rev().collect();
                if !set.contains(&suffix) {
                    return false;
                }
            }
        }
    }
    true
}
