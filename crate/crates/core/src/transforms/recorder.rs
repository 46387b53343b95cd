//! Indicator-recorder product: run each slot once, record when it accepted,
//! then sweep all step combinations (and optionally all subsets).
//!
//! Every cell runs the `m` slot automata round-robin for their full horizons,
//! using live coins (so slots see independent randomness, exactly as if each
//! had drawn its own coin matrix up front). While a slot advances, the cell
//! records one indicator bit per simulated step: "my component was accepting
//! at that step". The slot component is dropped as soon as its run ends, so
//! only the indicator bits persist.
//!
//! The second phase is deterministic: a synchronized counter decodes into a
//! per-slot step vector `(t_0, …, t_{m−1})` (and, in subset mode, a subset
//! index), and a cell is accepting exactly when each selected slot's recorded
//! bit at its step is set. The product therefore accepts exactly when some
//! subset and step vector have every selected slot all-accepting at its step
//! — threshold acceptance over independent runs, with per-input acceptance
//! probability given by the exact binomial laws in [`super::laws`].

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::automaton::{Accepting, LocalRule, Paca, StateSet, StateVal};
use crate::dyadic::Dyadic;
use crate::prob::Budget;
use crate::ratio::{binomial_coeff, binomial_tail, binomial_tail_dyadic, Ratio};

use super::{check_same_interface, tag, TransformError, TransformReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum AcceptMode {
    /// Accept when every slot accepts (step-vector sweep only).
    All,
    /// Accept when all slots of some listed subset accept; subsets are given
    /// as bitmasks over the slots.
    Subsets(Vec<u64>),
}

pub(crate) struct RecorderSpec {
    slots: Vec<Paca>,
    horizons: Vec<u32>,
    bit_offset: Vec<u32>,
    mode: AcceptMode,
    /// Advancing phase length: `m · (max horizon − 1)` transitions.
    advance_steps: u64,
    /// Length of the deterministic sweep.
    sweep_len: u64,
}

impl RecorderSpec {
    fn sweep_decode(&self, q: u64) -> (u64, Vec<u32>) {
        let mut rest = q;
        let mut steps = Vec::with_capacity(self.slots.len());
        for &h in &self.horizons {
            steps.push((rest % h as u64) as u32);
            rest /= h as u64;
        }
        (rest, steps)
    }
}

fn get_bit(lo: u64, hi: u64, idx: u32) -> bool {
    if idx < 64 {
        lo >> idx & 1 == 1
    } else {
        hi >> (idx - 64) & 1 == 1
    }
}

fn set_bit(lo: &mut u64, hi: &mut u64, idx: u32) {
    if idx < 64 {
        *lo |= 1 << idx;
    } else {
        *hi |= 1 << (idx - 64);
    }
}

/// Builds the recorder product. `horizons[k]` is slot `k`'s time bound: its
/// run is simulated for steps `0..horizons[k]`, one indicator bit per step.
pub(crate) fn recorder_product(
    slots: &[&Paca],
    horizons: &[u32],
    mode: AcceptMode,
    label: &str,
    budget: &Budget,
) -> Result<(Paca, u64), TransformError> {
    check_same_interface(slots)?;
    let m = slots.len();
    if m == 0 || m > 32 {
        return Err(TransformError::InvalidParameter(format!(
            "slot count {m} out of range"
        )));
    }
    if horizons.len() != m || horizons.iter().any(|&h| h == 0) {
        return Err(TransformError::InvalidParameter(
            "each slot needs a positive horizon".into(),
        ));
    }
    let mut bit_offset = Vec::with_capacity(m);
    let mut total_bits: u32 = 0;
    for &h in horizons {
        bit_offset.push(total_bits);
        total_bits += h;
    }
    if total_bits > 128 {
        return Err(TransformError::SizeBudget {
            what: "recorded indicator bits",
            needed: total_bits as u64,
            budget: 128,
        });
    }
    let t_max = *horizons.iter().max().expect("nonempty") as u64;
    let advance_steps = m as u64 * (t_max - 1);
    let mut sweep_len: u64 = 1;
    for &h in horizons {
        sweep_len = sweep_len
            .checked_mul(h as u64)
            .filter(|v| *v <= budget.horizon_steps)
            .ok_or(TransformError::SizeBudget {
                what: "sweep length",
                needed: u64::MAX,
                budget: budget.horizon_steps,
            })?;
    }
    if let AcceptMode::Subsets(subsets) = &mode {
        sweep_len = sweep_len
            .checked_mul(subsets.len() as u64)
            .filter(|v| *v <= budget.horizon_steps)
            .ok_or(TransformError::SizeBudget {
                what: "sweep length",
                needed: u64::MAX,
                budget: budget.horizon_steps,
            })?;
    }
    let derived_horizon = 1 + advance_steps + sweep_len;
    if derived_horizon > budget.horizon_steps {
        return Err(TransformError::SizeBudget {
            what: "derived horizon",
            needed: derived_horizon,
            budget: budget.horizon_steps,
        });
    }

    let spec = Arc::new(RecorderSpec {
        slots: slots.iter().map(|p| (*p).clone()).collect(),
        horizons: horizons.to_vec(),
        bit_offset,
        mode,
        advance_steps,
        sweep_len,
    });
    let boundary = spec.slots[0].states.boundary.clone();
    let alphabet = spec.slots[0].input_alphabet.clone();

    let rule = |coin: usize| -> LocalRule {
        let spec = spec.clone();
        LocalRule::proc(
            if coin == 0 { "recorder-0" } else { "recorder-1" },
            move |l, c, r| recorder_step(&spec, coin, l, c, r),
        )
    };

    let accept_spec = spec.clone();
    let deterministic = spec.slots.iter().all(|p| p.deterministic);
    let paca = Paca {
        label: label.into(),
        states: StateSet::lazy(boundary),
        input_alphabet: alphabet,
        accepting: Accepting::pred("recorded-bits-at-counter", move |s| {
            let parts = match s {
                StateVal::Comp { tag: t, parts } if *t == tag::REC => parts,
                _ => return false,
            };
            let (step, lo, hi) = match (&parts[0], &parts[1]) {
                (StateVal::Int(step), StateVal::Packed { tag: t, lo, hi })
                    if *t == tag::REC_BITS =>
                {
                    (*step as u64, *lo, *hi)
                }
                _ => return false,
            };
            let start = 1 + accept_spec.advance_steps;
            if step < start || step >= start + accept_spec.sweep_len {
                return false;
            }
            let (subset_idx, steps) = accept_spec.sweep_decode(step - start);
            let mask: u64 = match &accept_spec.mode {
                AcceptMode::All => (1u64 << accept_spec.slots.len()) - 1,
                AcceptMode::Subsets(subsets) => subsets[subset_idx as usize],
            };
            for k in 0..accept_spec.slots.len() {
                if mask >> k & 1 == 1 && !get_bit(lo, hi, accept_spec.bit_offset[k] + steps[k]) {
                    return false;
                }
            }
            true
        }),
        rule0: rule(0),
        rule1: rule(1),
        deterministic,
        horizon: Some(derived_horizon),
    };
    Ok((paca, derived_horizon))
}

fn slot_component<'a>(neighbor: &'a StateVal, k: usize) -> &'a StateVal {
    match neighbor {
        StateVal::Comp { tag: t, parts } if *t == tag::REC => &parts[2 + k],
        _ => neighbor,
    }
}

fn recorder_step(
    spec: &RecorderSpec,
    coin: usize,
    l: &StateVal,
    c: &StateVal,
    r: &StateVal,
) -> StateVal {
    let m = spec.slots.len();
    match c {
        StateVal::Comp { tag: t, parts } if *t == tag::REC => {
            let step = match &parts[0] {
                StateVal::Int(s) => *s as u64,
                _ => 0,
            };
            let (mut lo, mut hi) = match &parts[1] {
                StateVal::Packed { tag: t2, lo, hi } if *t2 == tag::REC_BITS => (*lo, *hi),
                _ => (0, 0),
            };
            let freeze = 1 + spec.advance_steps + spec.sweep_len;
            if step >= freeze {
                return c.clone(); // terminal fixpoint
            }
            let mut next_parts: Vec<StateVal> = parts.to_vec();
            if step <= spec.advance_steps {
                // Slot k = (step−1) mod m takes its ((step−1) div m)-th
                // transition, if its run is still going.
                let k = ((step - 1) % m as u64) as usize;
                let sim = ((step - 1) / m as u64) as u32 + 1;
                if sim < spec.horizons[k] {
                    let lc = slot_component(l, k);
                    let rc = slot_component(r, k);
                    let next = spec.slots[k]
                        .apply_rule(coin, lc, &parts[2 + k], rc)
                        .expect("slot rules are total");
                    if spec.slots[k].is_accepting_state(&next) {
                        set_bit(&mut lo, &mut hi, spec.bit_offset[k] + sim);
                    }
                    next_parts[2 + k] = if sim + 1 == spec.horizons[k] {
                        StateVal::Int(-1) // run complete; drop the component
                    } else {
                        next
                    };
                }
            }
            next_parts[0] = StateVal::Int((step + 1) as i64);
            next_parts[1] = StateVal::Packed {
                tag: tag::REC_BITS,
                lo,
                hi,
            };
            StateVal::comp(tag::REC, next_parts)
        }
        // Input symbol: record each slot's step-0 indicator and fan out.
        _ => {
            let mut lo = 0u64;
            let mut hi = 0u64;
            let mut parts: Vec<StateVal> = Vec::with_capacity(m + 2);
            parts.push(StateVal::Int(1));
            parts.push(StateVal::Int(0)); // placeholder for the bits
            for k in 0..m {
                if spec.slots[k].is_accepting_state(c) {
                    set_bit(&mut lo, &mut hi, spec.bit_offset[k]);
                }
                parts.push(if spec.horizons[k] == 1 {
                    StateVal::Int(-1)
                } else {
                    c.clone()
                });
            }
            parts[1] = StateVal::Packed {
                tag: tag::REC_BITS,
                lo,
                hi,
            };
            StateVal::comp(tag::REC, parts)
        }
    }
}

/// All size-`j` subsets of `[m]` as bitmasks, in ascending order.
pub(crate) fn subsets_of_size(m: u32, j: u32) -> Vec<u64> {
    assert!(m < 64 && j >= 1 && j <= m);
    let mut out = Vec::new();
    let mut mask: u64 = (1u64 << j) - 1;
    loop {
        out.push(mask);
        // Next bitmask with the same popcount (Gosper's hack).
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
        if mask >= 1u64 << m {
            return out;
        }
    }
}

/// The least odd copy count whose exact majority tail `Pr[Bin(m, p) ≥ ⌈m/2⌉]`
/// is at most `p_target`, with the achieved tail.
pub fn majority_copies(p: &Ratio, p_target: &Ratio) -> Result<(u32, Ratio), TransformError> {
    let half = Ratio::from_u64s(1, 2);
    if p.is_zero() || *p >= half {
        return Err(TransformError::InvalidParameter(
            "two-sided error must lie in (0,1/2)".into(),
        ));
    }
    if p_target.is_zero() || p_target > p {
        return Err(TransformError::InvalidParameter(
            "target error must lie in (0, p]".into(),
        ));
    }
    let mut m: u32 = 1;
    loop {
        let tail = binomial_tail(m, m / 2 + 1, p);
        if tail <= *p_target {
            return Ok((m, tail));
        }
        m += 2;
        if m > 31 {
            return Err(TransformError::SizeBudget {
                what: "majority copies",
                needed: m as u64,
                budget: 31,
            });
        }
    }
}

/// Two-sided error reduction by majority over `m` independent copies, `m`
/// the least odd count whose exact binomial tail `Pr[Bin(m, p) ≥ ⌈m/2⌉]`
/// drops to `p_target`. `m = 1` is a pass-through.
pub fn reduce_error_two_sided(
    inner: &Paca,
    p: &Ratio,
    p_target: &Ratio,
    t_in: u32,
    budget: &Budget,
) -> Result<TransformReport, TransformError> {
    let (m, tail) = majority_copies(p, p_target)?;
    if m == 1 {
        return Ok(TransformReport::new(inner.clone(), t_in as u64)
            .param("copies", 1)
            .note("input error already within target; pass-through"));
    }
    let subset_count = binomial_coeff(m, m / 2 + 1);
    guard_sweep(&subset_count, t_in, m, budget)?;
    let subsets = subsets_of_size(m, m / 2 + 1);
    let slots: Vec<&Paca> = (0..m).map(|_| inner).collect();
    let horizons: Vec<u32> = (0..m).map(|_| t_in).collect();
    let (output, derived_horizon) = recorder_product(
        &slots,
        &horizons,
        AcceptMode::Subsets(subsets),
        &format!("{}_majority_of_{m}", inner.label),
        budget,
    )?;
    Ok(TransformReport::new(output, derived_horizon)
        .param("copies", m)
        .param("p", p)
        .param("p_target", p_target)
        .param("t_in", t_in)
        .param("achieved_tail", tail)
        .note("copy count from the exact binomial majority tail")
        .note("per-cell indicator bits recorded once per copy run, then a deterministic sweep over all majority subsets and step vectors"))
}

fn guard_sweep(
    subset_count: &num_bigint::BigUint,
    t_in: u32,
    m: u32,
    budget: &Budget,
) -> Result<(), TransformError> {
    let count = u64::try_from(subset_count).unwrap_or(u64::MAX);
    let steps = (t_in as u64)
        .checked_pow(m)
        .and_then(|v| v.checked_mul(count))
        .unwrap_or(u64::MAX);
    if steps > budget.horizon_steps {
        return Err(TransformError::SizeBudget {
            what: "derived horizon",
            needed: steps,
            budget: budget.horizon_steps,
        });
    }
    Ok(())
}

/// Generalized threshold amplifier for asymmetric bounds: accepts when at
/// least `j` of `m` copies accept, with `(m, j)` minimal (smallest `m`, then
/// `j`) such that the exact binomial tails move `(accept_bound, reject_bound)`
/// to `(≥ 2/3, ≤ 1/3)`. Returns the chosen `(m, j)` alongside the report;
/// `(1, 1)` means the input already fits and is passed through.
pub fn amplify_threshold(
    inner: &Paca,
    t_in: u32,
    accept_bound: &Dyadic,
    reject_bound: &Dyadic,
    budget: &Budget,
) -> Result<(TransformReport, u32, u32), TransformError> {
    if accept_bound <= reject_bound {
        return Err(TransformError::InvalidParameter(
            "acceptance bound must exceed rejection bound".into(),
        ));
    }
    let lo = Ratio::from_u64s(1, 3);
    let hi = Ratio::from_u64s(2, 3);
    let fits = |m: u32, j: u32| -> bool {
        let acc = binomial_tail_dyadic(m, j, accept_bound);
        let rej = binomial_tail_dyadic(m, j, reject_bound);
        hi.cmp_dyadic(&acc) != core::cmp::Ordering::Greater
            && lo.cmp_dyadic(&rej) != core::cmp::Ordering::Less
    };
    let mut choice: Option<(u32, u32)> = None;
    'outer: for m in 1..=32u32 {
        for j in 1..=m {
            if fits(m, j) {
                choice = Some((m, j));
                break 'outer;
            }
        }
    }
    let (m, j) = choice.ok_or(TransformError::SizeBudget {
        what: "amplifier copies",
        needed: 33,
        budget: 32,
    })?;
    if m == 1 {
        let report = TransformReport::new(inner.clone(), t_in as u64)
            .param("copies", 1)
            .param("threshold", 1)
            .note("bounds already within the target bands; pass-through");
        return Ok((report, 1, 1));
    }
    guard_sweep(&binomial_coeff(m, j), t_in, m, budget)?;
    let subsets = subsets_of_size(m, j);
    let slots: Vec<&Paca> = (0..m).map(|_| inner).collect();
    let horizons: Vec<u32> = (0..m).map(|_| t_in).collect();
    let (output, derived_horizon) = recorder_product(
        &slots,
        &horizons,
        AcceptMode::Subsets(subsets),
        &format!("{}_threshold_{j}_of_{m}", inner.label),
        budget,
    )?;
    let report = TransformReport::new(output, derived_horizon)
        .param("copies", m)
        .param("threshold", j)
        .param("accept_bound", accept_bound)
        .param("reject_bound", reject_bound)
        .note("threshold amplifier over independent copies, exact binomial tails");
    Ok((report, m, j))
}

/// Intersection of two acceptors: both operands are brought to two-sided
/// error at most 1/10, then run side by side with a full step-vector sweep
/// (no subset component); a cell accepts only when both recorded bits are
/// set. The acceptance probability of the product is exactly the product of
/// the operands' acceptance probabilities.
pub fn intersect_paca(
    c1: &Paca,
    p1: &Ratio,
    t1: u32,
    c2: &Paca,
    p2: &Ratio,
    t2: u32,
    budget: &Budget,
) -> Result<TransformReport, TransformError> {
    let tenth = Ratio::from_u64s(1, 10);
    let (r1, h1) = reduce_to_at_most(c1, p1, t1, &tenth, budget)?;
    let (r2, h2) = reduce_to_at_most(c2, p2, t2, &tenth, budget)?;
    let h1_u32 = u32::try_from(h1).map_err(|_| TransformError::SizeBudget {
        what: "operand horizon",
        needed: h1,
        budget: u32::MAX as u64,
    })?;
    let h2_u32 = u32::try_from(h2).map_err(|_| TransformError::SizeBudget {
        what: "operand horizon",
        needed: h2,
        budget: u32::MAX as u64,
    })?;
    let (output, derived_horizon) = recorder_product(
        &[&r1, &r2],
        &[h1_u32, h2_u32],
        AcceptMode::All,
        &format!("{}_and_{}", c1.label, c2.label),
        budget,
    )?;
    Ok(TransformReport::new(output, derived_horizon)
        .param("t1", h1)
        .param("t2", h2)
        .param("p_out", "1/3")
        .note("operands at error <= 1/10 so the squared acceptance stays above 2/3")
        .note("acceptance probability is exactly the product of the operands'"))
}

fn reduce_to_at_most(
    inner: &Paca,
    p: &Ratio,
    t_in: u32,
    bound: &Ratio,
    budget: &Budget,
) -> Result<(Paca, u64), TransformError> {
    if p <= bound {
        return Ok((inner.clone(), t_in as u64));
    }
    let report = reduce_error_two_sided(inner, p, bound, t_in, budget)?;
    let h = report.derived_horizon;
    Ok((report.output, h))
}
