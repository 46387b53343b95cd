//! Declared-horizon validation via first-hit sets.
//!
//! `S_0 = {x}` and `S_{t+1}` collects every coin-successor of the
//! non-accepting part of `S_t`, so `S_t ∩ Aⁿ` is exactly the set of
//! configurations first reached all-accepting at step `t`. A declared bound
//! `T` is violated as soon as such a first hit exists at a step `≥ T`. The
//! sequence of sets over a finite state space eventually cycles; once a set
//! repeats, the verdict is settled: first hits inside the cycle recur
//! forever, so any of them eventually lands at or past `T`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::automaton::{Automaton, Configuration};

use super::engine::Engine;
use super::{Budget, ProbError};

/// Verdict of [`validate_horizon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorizonCheck {
    Ok,
    /// Some accepting computation first reaches the all-accepting
    /// configuration at this step, contradicting the claimed bound.
    ViolatedAt(u32),
}

pub fn validate_horizon(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    claimed: u32,
    budget: &Budget,
) -> Result<HorizonCheck, ProbError> {
    aut.check_input(input)?;
    let mut engine = Engine::new(aut);
    let start = engine.intern_config(input);

    // Sets of interned configurations, canonically sorted for memoization.
    let mut intern_sets: HashMap<Vec<Box<[u32]>>, u32> = HashMap::new();
    let mut current: Vec<Box<[u32]>> = alloc::vec![start];
    let mut step: u32 = 0;
    // (step, had accepting first-hits) per visited set, to resolve cycles.
    let mut hit_steps: Vec<(u32, bool)> = Vec::new();

    loop {
        let hits = current.iter().any(|cfg| engine.config_accepting(cfg));
        if hits && step >= claimed {
            return Ok(HorizonCheck::ViolatedAt(step));
        }
        if let Some(&prev_step) = intern_sets.get(&current) {
            // Cycle closed. First hits at steps inside [prev_step, step)
            // recur with period (step − prev_step); project the earliest one
            // to its first recurrence at or past the claimed bound.
            let period = step - prev_step;
            let mut earliest: Option<u32> = None;
            for &(s, had_hits) in &hit_steps {
                if s < prev_step || !had_hits {
                    continue;
                }
                let mut t = s;
                while t < claimed {
                    t += period;
                }
                earliest = Some(match earliest {
                    None => t,
                    Some(e) => e.min(t),
                });
            }
            return Ok(match earliest {
                Some(t) => HorizonCheck::ViolatedAt(t),
                None => HorizonCheck::Ok,
            });
        }
        intern_sets.insert(current.clone(), step);
        hit_steps.push((step, hits));

        // Successors of the non-accepting part.
        let mut next: Vec<Box<[u32]>> = Vec::new();
        let mut seen: HashMap<Box<[u32]>, ()> = HashMap::new();
        for cfg in &current {
            if engine.config_accepting(cfg) {
                continue;
            }
            push_successors(&mut engine, cfg, &mut next, &mut seen, budget)?;
        }
        next.sort();
        current = next;
        step += 1;
        if current.is_empty() {
            // No live computation remains; the empty set is a fixpoint.
            return Ok(HorizonCheck::Ok);
        }
    }
}

/// All coin-successors of one configuration: the cartesian product of the
/// per-cell image sets (each cell's coin is independent).
fn push_successors<A: Automaton + ?Sized>(
    engine: &mut Engine<'_, A>,
    cfg: &[u32],
    out: &mut Vec<Box<[u32]>>,
    seen: &mut HashMap<Box<[u32]>, ()>,
    budget: &Budget,
) -> Result<(), ProbError> {
    let n = cfg.len();
    let mut base: Vec<u32> = Vec::with_capacity(n);
    let mut branches: Vec<(usize, Vec<(u32, u32)>)> = Vec::new();
    for i in 0..n {
        let images = engine.cell_images(cfg, i)?;
        base.push(images[0].0);
        if images.len() > 1 {
            branches.push((i, images));
        }
    }
    let mut idx = alloc::vec![0usize; branches.len()];
    loop {
        let mut succ = base.clone();
        for (bi, (cell, images)) in branches.iter().enumerate() {
            succ[*cell] = images[idx[bi]].0;
        }
        let key: Box<[u32]> = succ.into();
        if !seen.contains_key(&key) {
            if seen.len() >= budget.set_support {
                return Err(ProbError::BudgetExceeded {
                    what: "first-hit set",
                    needed: seen.len() as u64 + 1,
                    budget: budget.set_support as u64,
                });
            }
            seen.insert(key.clone(), ());
            out.push(key);
        }
        let mut carry = true;
        for bi in 0..branches.len() {
            idx[bi] += 1;
            if idx[bi] < branches[bi].1.len() {
                carry = false;
                break;
            }
            idx[bi] = 0;
        }
        if carry {
            return Ok(());
        }
    }
}
