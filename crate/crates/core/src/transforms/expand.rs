//! Rule-set expansion: realizing `2^k` local rules with two.
//!
//! Each simulated step of the `2^k`-rule acceptor costs `k` steps of the
//! output: a cell buffers `k` coins (most significant first) and applies the
//! selected rule together with the last coin. Components are only read by
//! neighbors at apply boundaries, where they hold plain simulated states, so
//! the simulation stays aligned. Acceptance is checked exactly at the apply
//! boundaries (buffer empty), making the output accept at step `k·t` exactly
//! when the virtual acceptor accepts at step `t`; acceptance probabilities
//! are preserved bit for bit.

use alloc::format;
use alloc::sync::Arc;

use crate::automaton::{Accepting, Automaton, LocalRule, Paca, StateSet, StateVal, VirtualPaca};

use super::{tag, TransformError, TransformReport};

/// Compiles a `2^k`-rule acceptor into an ordinary two-rule acceptor.
pub fn expand_rules(inner: &VirtualPaca) -> Result<TransformReport, TransformError> {
    let rules = inner.rules.len();
    if !rules.is_power_of_two() || rules < 2 {
        return Err(TransformError::InvalidParameter(format!(
            "rule count {rules} is not a power of two at least 2"
        )));
    }
    let k = rules.trailing_zeros();
    let inner = Arc::new(inner.clone());

    let rule = |coin: u64| -> LocalRule {
        let inner = inner.clone();
        LocalRule::proc(
            if coin == 0 { "expand-0" } else { "expand-1" },
            move |l, c, r| {
                let k = inner.rules.len().trailing_zeros() as u64;
                let (state, bits, seen) = match c {
                    StateVal::Comp { tag: t, parts } if *t == tag::EXPAND => {
                        let bits = match &parts[1] {
                            StateVal::Int(b) => *b,
                            _ => 0,
                        };
                        let seen = match &parts[2] {
                            StateVal::Int(s) => *s as u64,
                            _ => 0,
                        };
                        (parts[0].clone(), bits, seen)
                    }
                    _ => (c.clone(), 0, 0),
                };
                let lc = expand_component(l);
                let rc = expand_component(r);
                // Coins only matter to cells whose pending application is
                // rule-sensitive; everyone else keeps an empty buffer, which
                // keeps the configuration space tight.
                let bits = if seen == 0 && !rule_sensitive(&inner, lc, &state, rc) {
                    -1
                } else if bits >= 0 {
                    bits << 1 | coin as i64
                } else {
                    -1
                };
                let seen = seen + 1;
                if seen == k {
                    let pick = if bits >= 0 { bits as usize } else { 0 };
                    let next = inner
                        .apply(pick, lc, &state, rc)
                        .expect("virtual rules are total");
                    StateVal::comp(
                        tag::EXPAND,
                        alloc::vec![next, StateVal::Int(0), StateVal::Int(0)],
                    )
                } else {
                    StateVal::comp(
                        tag::EXPAND,
                        alloc::vec![state, StateVal::Int(bits), StateVal::Int(seen as i64)],
                    )
                }
            },
        )
    };

    let accept_inner = inner.clone();
    let output = Paca {
        label: format!("{}_expanded", inner.label),
        states: StateSet::lazy(inner.states.boundary.clone()),
        input_alphabet: inner.input_alphabet.clone(),
        accepting: Accepting::pred("inner-at-apply-boundary", move |s| match s {
            StateVal::Comp { tag: t, parts } if *t == tag::EXPAND => {
                matches!(&parts[2], StateVal::Int(0)) && accept_inner.is_accepting(&parts[0])
            }
            // Step 0: raw input symbols count as simulated step 0.
            _ => accept_inner.is_accepting(s),
        }),
        rule0: rule(0),
        rule1: rule(1),
        deterministic: false,
        horizon: inner
            .horizon
            .map(|t| k as u64 * t + k as u64),
    };
    let derived_horizon = output.horizon.unwrap_or(0);
    Ok(TransformReport::new(output, derived_horizon)
        .param("k", k)
        .param("rules", rules)
        .note("one simulated step per k collected coins, most significant bit first"))
}

/// The simulated component of a neighbor: boundary and raw input symbols
/// stand for themselves.
fn expand_component(neighbor: &StateVal) -> &StateVal {
    match neighbor {
        StateVal::Comp { tag: t, parts } if *t == tag::EXPAND => &parts[0],
        _ => neighbor,
    }
}

/// Do any two virtual rules disagree on this local configuration?
fn rule_sensitive(inner: &VirtualPaca, l: &StateVal, c: &StateVal, r: &StateVal) -> bool {
    let first = inner.apply(0, l, c, r).expect("virtual rules are total");
    (1..inner.rules.len()).any(|i| {
        inner.apply(i, l, c, r).expect("virtual rules are total") != first
    })
}
