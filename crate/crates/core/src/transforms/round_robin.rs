//! Round-robin product: several acceptors simulated in one, one slot
//! advancing per step.
//!
//! The product's state is a tuple of slot states plus a counter. When the
//! counter holds `j`, slot `j`'s component advances one step of its own
//! automaton (using the cell's current coin, so distinct slots consume
//! disjoint coins) and the counter moves on cyclically. A cell is accepting
//! exactly when the component the counter points at is accepting for its
//! slot, which makes the product accept at step `m·t + j + 1` precisely when
//! slot `j` accepts at step `t`. Acceptance at step 0 is impossible: input
//! symbols are not accepting states of the product.
//!
//! With `m` copies of one automaton this is one-sided error reduction (any
//! copy accepting suffices); with two different automata it recognizes the
//! union of their languages.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::automaton::{Accepting, LocalRule, Paca, StateSet, StateVal};
use crate::prob::Budget;
use crate::ratio::{binomial_tail, Ratio};

use super::{check_same_interface, tag, TransformError, TransformReport};

/// Builds the round-robin product of the given slot automata.
pub fn round_robin_product(slots: &[&Paca], label: &str) -> Result<Paca, TransformError> {
    check_same_interface(slots)?;
    let m = slots.len();
    if m == 0 || m > 64 {
        return Err(TransformError::InvalidParameter(format!(
            "slot count {m} out of range"
        )));
    }
    let owned: Arc<[Paca]> = slots.iter().map(|p| (*p).clone()).collect();
    let boundary = owned[0].states.boundary.clone();
    let alphabet = owned[0].input_alphabet.clone();

    let rule = |coin: usize| -> LocalRule {
        let slots = owned.clone();
        LocalRule::proc(
            if coin == 0 { "round-robin-0" } else { "round-robin-1" },
            move |l, c, r| {
                let m = slots.len();
                match c {
                    StateVal::Comp { tag: t, parts } if *t == tag::RR => {
                        let counter = match &parts[m] {
                            StateVal::Int(j) => *j as usize,
                            _ => 0,
                        };
                        let mut next: Vec<StateVal> = parts[..m].to_vec();
                        let lc = slot_component(l, counter);
                        let rc = slot_component(r, counter);
                        next[counter] = slots[counter]
                            .apply_rule(coin, lc, &parts[counter], rc)
                            .expect("slot rules are total");
                        next.push(StateVal::Int(((counter + 1) % m) as i64));
                        StateVal::comp(tag::RR, next)
                    }
                    // Input symbol: fan out into one component per slot.
                    _ => {
                        let mut parts: Vec<StateVal> = (0..m).map(|_| c.clone()).collect();
                        parts.push(StateVal::Int(0));
                        StateVal::comp(tag::RR, parts)
                    }
                }
            },
        )
    };

    let accept_slots = owned.clone();
    Ok(Paca {
        label: label.into(),
        states: StateSet::lazy(boundary),
        input_alphabet: alphabet,
        accepting: Accepting::pred("slot-at-counter", move |s| match s {
            StateVal::Comp { tag: t, parts } if *t == tag::RR => {
                let m = accept_slots.len();
                let counter = match &parts[m] {
                    StateVal::Int(j) => *j as usize,
                    _ => return false,
                };
                accept_slots[counter].is_accepting_state(&parts[counter])
            }
            _ => false,
        }),
        rule0: rule(0),
        rule1: rule(1),
        deterministic: owned.iter().all(|p| p.deterministic),
        horizon: None,
    })
}

/// The slot-`k` component of a neighbor state: boundary and raw input
/// symbols stand for themselves in every slot.
fn slot_component(neighbor: &StateVal, k: usize) -> &StateVal {
    match neighbor {
        StateVal::Comp { tag: t, parts } if *t == tag::RR => &parts[k],
        _ => neighbor,
    }
}

impl Paca {
    pub(crate) fn apply_rule(
        &self,
        coin: usize,
        l: &StateVal,
        c: &StateVal,
        r: &StateVal,
    ) -> Result<StateVal, crate::automaton::CaError> {
        match coin {
            0 => self.rule0.eval(l, c, r),
            _ => self.rule1.eval(l, c, r),
        }
    }

    pub(crate) fn is_accepting_state(&self, s: &StateVal) -> bool {
        self.accepting.accepts(s)
    }
}

/// One-sided error reduction: `m` independent copies in round-robin, where
/// `m` is minimal with `p^m ≤ p_target`. Soundness is preserved exactly —
/// a word no copy can accept is never accepted — and members fail all copies
/// with probability below `p^m`.
pub fn reduce_error_one_sided(
    inner: &Paca,
    p: &Ratio,
    p_target: &Ratio,
    t_in: u32,
) -> Result<TransformReport, TransformError> {
    let one = Ratio::one();
    if p.is_zero() || *p >= one || p_target.is_zero() || *p_target >= one {
        return Err(TransformError::InvalidParameter(
            "error parameters must lie in (0,1)".into(),
        ));
    }
    if p_target > p {
        return Err(TransformError::InvalidParameter(
            "target error above the input error".into(),
        ));
    }
    let mut m: u32 = 1;
    let mut power = p.clone();
    while power > *p_target {
        m += 1;
        if m > 64 {
            return Err(TransformError::SizeBudget {
                what: "copy count",
                needed: m as u64,
                budget: 64,
            });
        }
        power = &power * p;
    }
    let slots: Vec<&Paca> = (0..m).map(|_| inner).collect();
    let mut output = round_robin_product(&slots, &format!("{}_any_of_{m}", inner.label))?;
    let derived_horizon = (m as u64) * (t_in as u64) + m as u64;
    output.horizon = Some(derived_horizon);
    Ok(TransformReport::new(output, derived_horizon)
        .param("copies", m)
        .param("p", p)
        .param("p_target", p_target)
        .param("t_in", t_in)
        .note(format!(
            "copies chosen as the least m with p^m <= p_target; p^m = {power}"
        ))
        .note("accepts at step m*t+j+1 exactly when copy j accepts at step t"))
}

/// Union of two acceptors: both operands are brought strictly below
/// two-sided error 1/6, then simulated side by side in a two-slot
/// round-robin; the product accepts when either slot does. The result is a
/// valid two-sided (1/3)-error acceptor for the union of the languages.
pub fn union_paca(
    c1: &Paca,
    p1: &Ratio,
    t1: u32,
    c2: &Paca,
    p2: &Ratio,
    t2: u32,
    budget: &Budget,
) -> Result<TransformReport, TransformError> {
    let sixth = Ratio::from_u64s(1, 6);
    let (r1, h1) = reduce_strictly_below(c1, p1, t1, &sixth, budget)?;
    let (r2, h2) = reduce_strictly_below(c2, p2, t2, &sixth, budget)?;
    let mut output = round_robin_product(&[&r1, &r2], &format!("{}_or_{}", c1.label, c2.label))?;
    let derived_horizon = 2 * h1.max(h2) + 2;
    output.horizon = Some(derived_horizon);
    Ok(TransformReport::new(output, derived_horizon)
        .param("t1", h1)
        .param("t2", h2)
        .param("p_out", "1/3")
        .note("operands reduced strictly below error 1/6, then a two-slot round-robin"))
}

/// Reduces a two-sided error operand strictly below `bound` (no-op when it
/// already is), returning the automaton and its horizon.
fn reduce_strictly_below(
    inner: &Paca,
    p: &Ratio,
    t_in: u32,
    bound: &Ratio,
    budget: &Budget,
) -> Result<(Paca, u64), TransformError> {
    if p < bound {
        return Ok((inner.clone(), t_in as u64));
    }
    // The least odd copy count whose exact majority tail is strictly below
    // the bound; handing that tail to the reducer reproduces the same count.
    let mut m: u32 = 1;
    let target = loop {
        if m > 31 {
            return Err(TransformError::SizeBudget {
                what: "majority copies",
                needed: m as u64,
                budget: 31,
            });
        }
        let tail = binomial_tail(m, m / 2 + 1, p);
        if tail < *bound {
            break tail;
        }
        m += 2;
    };
    let report = super::recorder::reduce_error_two_sided(inner, p, &target, t_in, budget)?;
    let h = report.derived_horizon;
    Ok((report.output, h))
}
