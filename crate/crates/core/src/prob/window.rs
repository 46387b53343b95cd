//! Windowed evolution: exact local views of a run.
//!
//! A cell's state at step `t` is a function of the input on `[i−t, i+t]` and
//! the coins in its lightcone. Evolving just that window — narrowing one
//! position per side per step, with per-cell coin choices enumerated as a
//! product — therefore reproduces the cell's exact reachable-state set and
//! exact marginal distribution without touching the rest of the
//! configuration. Positions beyond the word hold the boundary symbol and
//! never change.
//!
//! These primitives back criticality analysis, the independence checker, and
//! the existential coin-assignment tests inside derandomized rules; at tiny
//! sizes the test suite cross-checks them against literal full-tape
//! enumeration.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;

use crate::automaton::{Automaton, CaError, Configuration, StateVal};
use crate::dyadic::Dyadic;

use super::engine::Engine;
use super::{Budget, ProbError};

/// Criticality report at one step: a cell is critical when its reachable
/// state set at the step meets both the accepting and the non-accepting
/// states.
#[derive(Clone, Debug)]
pub struct CriticalReport {
    pub step: u32,
    pub critical: Vec<usize>,
    pub reachable_states: Vec<BTreeSet<StateVal>>,
}

/// Outcome of an exact joint-versus-product independence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceOutcome {
    Independent {
        p_i: Dyadic,
        p_j: Dyadic,
        p_joint: Dyadic,
    },
    Dependent {
        p_i: Dyadic,
        p_j: Dyadic,
        p_joint: Dyadic,
    },
}

/// Evolves the set of reachable windows for `t` steps.
///
/// `row0` holds the initial states of `width` consecutive positions; entries
/// equal to the boundary symbol mark positions beyond the word. The result
/// windows cover the central `width − 2t` positions.
pub(crate) fn evolve_window_sets(
    aut: &(impl Automaton + ?Sized),
    row0: &[StateVal],
    t: u32,
    budget: &Budget,
) -> Result<BTreeSet<Vec<StateVal>>, ProbError> {
    let width = row0.len();
    assert!(width > 2 * t as usize, "window too narrow for the horizon");
    let mut engine = Engine::new(aut);
    let bnd = engine.interner.id(aut, aut.boundary());
    let virt: Vec<bool> = row0.iter().map(|s| *s == *aut.boundary()).collect();
    let start: Vec<u32> = row0.iter().map(|s| engine.interner.id(aut, s)).collect();

    let mut current: BTreeSet<Vec<u32>> = BTreeSet::new();
    current.insert(start);
    for step in 0..t {
        let offset = step as usize + 1; // next window starts here in row0 coords
        let next_width = width - 2 * offset;
        let mut next: BTreeSet<Vec<u32>> = BTreeSet::new();
        for win in &current {
            // Per-position image sets; virtual positions stay boundary.
            let mut images: Vec<Vec<u32>> = Vec::with_capacity(next_width);
            for k in 0..next_width {
                let p = k + 1; // index inside the current window
                if virt[offset + k] {
                    images.push(alloc::vec![bnd]);
                    continue;
                }
                let mut set: Vec<u32> = Vec::with_capacity(2);
                for rule in 0..aut.rule_count() {
                    let id = engine.apply(rule as u8, win[p - 1], win[p], win[p + 1])?;
                    if !set.contains(&id) {
                        set.push(id);
                    }
                }
                images.push(set);
            }
            cross_product_into(&images, &mut next, budget)?;
        }
        current = next;
    }
    Ok(current
        .into_iter()
        .map(|win| {
            win.into_iter()
                .map(|id| engine.interner.val(id).clone())
                .collect()
        })
        .collect())
}

fn cross_product_into(
    images: &[Vec<u32>],
    out: &mut BTreeSet<Vec<u32>>,
    budget: &Budget,
) -> Result<(), ProbError> {
    let mut idx = alloc::vec![0usize; images.len()];
    loop {
        let succ: Vec<u32> = images.iter().zip(&idx).map(|(set, &i)| set[i]).collect();
        if !out.contains(&succ) {
            if out.len() >= budget.set_support {
                return Err(ProbError::BudgetExceeded {
                    what: "window set",
                    needed: out.len() as u64 + 1,
                    budget: budget.set_support as u64,
                });
            }
            out.insert(succ);
        }
        let mut carry = true;
        for k in 0..images.len() {
            idx[k] += 1;
            if idx[k] < images[k].len() {
                carry = false;
                break;
            }
            idx[k] = 0;
        }
        if carry {
            return Ok(());
        }
    }
}

/// Evolves the exact marginal distribution of a window for `t` steps.
/// Same geometry as [`evolve_window_sets`], with dyadic masses.
pub(crate) fn evolve_window_dist(
    aut: &(impl Automaton + ?Sized),
    row0: &[StateVal],
    t: u32,
    budget: &Budget,
) -> Result<Vec<(Vec<StateVal>, Dyadic)>, ProbError> {
    let width = row0.len();
    assert!(width > 2 * t as usize, "window too narrow for the horizon");
    let mut engine = Engine::new(aut);
    let bnd = engine.interner.id(aut, aut.boundary());
    let virt: Vec<bool> = row0.iter().map(|s| *s == *aut.boundary()).collect();
    let start: Vec<u32> = row0.iter().map(|s| engine.interner.id(aut, s)).collect();
    let coin_bits = engine.coin_bits();

    let mut current: HashMap<Vec<u32>, Dyadic> = HashMap::new();
    current.insert(start, Dyadic::one());
    for step in 0..t {
        let offset = step as usize + 1;
        let next_width = width - 2 * offset;
        let mut next: HashMap<Vec<u32>, Dyadic> = HashMap::new();
        for (win, mass) in &current {
            let mut base: Vec<u32> = Vec::with_capacity(next_width);
            let mut branches: Vec<(usize, Vec<(u32, u32)>)> = Vec::new();
            for k in 0..next_width {
                let p = k + 1;
                if virt[offset + k] {
                    base.push(bnd);
                    continue;
                }
                let mut images: Vec<(u32, u32)> = Vec::with_capacity(2);
                for rule in 0..aut.rule_count() {
                    let id = engine.apply(rule as u8, win[p - 1], win[p], win[p + 1])?;
                    match images.iter_mut().find(|(s, _)| *s == id) {
                        Some((_, count)) => *count += 1,
                        None => images.push((id, 1)),
                    }
                }
                base.push(images[0].0);
                if images.len() > 1 {
                    branches.push((k, images));
                }
            }
            let branch_bits = branches.len() as u32 * coin_bits;
            let mut idx = alloc::vec![0usize; branches.len()];
            loop {
                let mut succ = base.clone();
                let mut coeff: u64 = 1;
                for (bi, (pos, images)) in branches.iter().enumerate() {
                    let (id, count) = images[idx[bi]];
                    succ[*pos] = id;
                    coeff *= count as u64;
                }
                let share = mass * &Dyadic::from_count(BigUint::from(coeff), branch_bits);
                match next.get_mut(&succ) {
                    Some(existing) => *existing = &*existing + &share,
                    None => {
                        if next.len() >= budget.set_support {
                            return Err(ProbError::BudgetExceeded {
                                what: "window distribution",
                                needed: next.len() as u64 + 1,
                                budget: budget.set_support as u64,
                            });
                        }
                        next.insert(succ, share);
                    }
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
                    break;
                }
            }
        }
        current = next;
    }
    Ok(current
        .into_iter()
        .map(|(win, mass)| {
            (
                win.into_iter()
                    .map(|id| engine.interner.val(id).clone())
                    .collect(),
                mass,
            )
        })
        .collect())
}

/// Reachable states of the center of a `2t+1`-wide initial window.
pub(crate) fn reachable_window_states(
    aut: &(impl Automaton + ?Sized),
    row0: &[StateVal],
    t: u32,
    budget: &Budget,
) -> Result<BTreeSet<StateVal>, ProbError> {
    debug_assert_eq!(row0.len(), 2 * t as usize + 1);
    let sets = evolve_window_sets(aut, row0, t, budget)?;
    Ok(sets.into_iter().map(|mut w| w.remove(0)).collect())
}

fn input_window(aut: &(impl Automaton + ?Sized), input: &Configuration, lo: isize, hi: isize) -> Vec<StateVal> {
    let n = input.len() as isize;
    (lo..=hi)
        .map(|p| {
            if p < 0 || p >= n {
                aut.boundary().clone()
            } else {
                input.cells()[p as usize].clone()
            }
        })
        .collect()
}

/// Exact set of states cell `cell` can attain at step `t`.
pub fn reachable_cell_states(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    cell: usize,
    t: u32,
    budget: &Budget,
) -> Result<BTreeSet<StateVal>, ProbError> {
    if cell >= input.len() {
        return Err(CaError::CellOutOfRange {
            cell,
            len: input.len(),
        }
        .into());
    }
    let row0 = input_window(aut, input, cell as isize - t as isize, cell as isize + t as isize);
    let sets = evolve_window_sets(aut, &row0, t, budget)?;
    Ok(sets.into_iter().map(|mut w| w.remove(0)).collect())
}

/// Per-cell criticality at step `t`, with the attainable state sets.
pub fn critical_cells(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    t: u32,
    budget: &Budget,
) -> Result<CriticalReport, ProbError> {
    aut.check_input(input)?;
    let mut critical = Vec::new();
    let mut reachable = Vec::with_capacity(input.len());
    for cell in 0..input.len() {
        let states = reachable_cell_states(aut, input, cell, t, budget)?;
        let any_accepting = states.iter().any(|s| aut.is_accepting(s));
        let any_rejecting = states.iter().any(|s| !aut.is_accepting(s));
        if any_accepting && any_rejecting {
            critical.push(cell);
        }
        reachable.push(states);
    }
    Ok(CriticalReport {
        step: t,
        critical,
        reachable_states: reachable,
    })
}

/// Is there a coin assignment making every listed cell accepting at step `t`?
pub fn exists_assignment_all_accepting(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    cells: &[usize],
    t: u32,
    budget: &Budget,
) -> Result<bool, ProbError> {
    assert!(!cells.is_empty());
    let lo = *cells.iter().min().expect("nonempty") as isize - t as isize;
    let hi = *cells.iter().max().expect("nonempty") as isize + t as isize;
    let row0 = input_window(aut, input, lo, hi);
    let sets = evolve_window_sets(aut, &row0, t, budget)?;
    let base = *cells.iter().min().expect("nonempty");
    Ok(sets.iter().any(|win| {
        cells
            .iter()
            .all(|&c| aut.is_accepting(&win[c - base]))
    }))
}

/// Exact marginal distribution of the cells `[lo, hi]` at step `t`.
pub fn window_distribution(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    lo: usize,
    hi: usize,
    t: u32,
    budget: &Budget,
) -> Result<Vec<(Vec<StateVal>, Dyadic)>, ProbError> {
    assert!(lo <= hi && hi < input.len());
    let row0 = input_window(aut, input, lo as isize - t as isize, hi as isize + t as isize);
    evolve_window_dist(aut, &row0, t, budget)
}

/// Fast decision sweeper for "is the acceptance probability positive?"
///
/// Soundness screen first: a cell whose step-`t` view can reach no accepting
/// state for any `t` below the horizon blocks every all-accepting
/// configuration, so the word's probability is exactly zero. The verdict per
/// view is memoized, which makes exhaustive one-sided soundness sweeps cheap.
/// Words passing the screen fall through to exact set-forwarding.
pub struct PositivitySweeper<'a, A: Automaton + ?Sized> {
    aut: &'a A,
    horizon: u32,
    cache: hashbrown::HashMap<Vec<StateVal>, bool>,
    exact: super::engine::ReachSweeper<'a, A>,
}

impl<'a, A: Automaton + ?Sized> PositivitySweeper<'a, A> {
    pub fn new(aut: &'a A, horizon: u32) -> PositivitySweeper<'a, A> {
        PositivitySweeper {
            aut,
            horizon,
            cache: hashbrown::HashMap::new(),
            exact: super::engine::ReachSweeper::new(aut),
        }
    }

    /// Exact answer to `acceptance probability > 0` within the horizon.
    pub fn accepts_with_positive_probability(
        &mut self,
        input: &Configuration,
        budget: &Budget,
    ) -> Result<bool, ProbError> {
        if self.horizon == 0 {
            return Ok(false);
        }
        let radius = (self.horizon - 1) as isize;
        for cell in 0..input.len() {
            let view = input_window(
                self.aut,
                input,
                cell as isize - radius,
                cell as isize + radius,
            );
            let can_accept = match self.cache.get(&view) {
                Some(&hit) => hit,
                None => {
                    let mut found = false;
                    for t in 0..self.horizon {
                        let center = radius as usize;
                        let sub = &view[center - t as usize..=center + t as usize];
                        let states = reachable_window_states(self.aut, sub, t, budget)?;
                        if states.iter().any(|s| self.aut.is_accepting(s)) {
                            found = true;
                            break;
                        }
                    }
                    self.cache.insert(view, found);
                    found
                }
            };
            if !can_accept {
                return Ok(false);
            }
        }
        self.exact
            .accepts_with_positive_probability(input, self.horizon, budget)
    }
}

/// Exact product-law check for the events "cell i accepts at step `t`" and
/// "cell j accepts at step `t`".
///
/// For cells further apart than `2(horizon−1)` the events are conditioned on
/// disjoint coins and independence is guaranteed; the check itself is exact
/// either way.
pub fn independence_check(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    i: usize,
    j: usize,
    t: u32,
    budget: &Budget,
) -> Result<IndependenceOutcome, ProbError> {
    aut.check_input(input)?;
    if i >= input.len() || j >= input.len() {
        return Err(CaError::CellOutOfRange {
            cell: i.max(j),
            len: input.len(),
        }
        .into());
    }
    let lo = i.min(j);
    let hi = i.max(j);
    let dist = window_distribution(aut, input, lo, hi, t, budget)?;
    let mut p_i = Dyadic::zero();
    let mut p_j = Dyadic::zero();
    let mut p_joint = Dyadic::zero();
    for (win, mass) in &dist {
        let acc_i = aut.is_accepting(&win[i - lo]);
        let acc_j = aut.is_accepting(&win[j - lo]);
        if acc_i {
            p_i = &p_i + mass;
        }
        if acc_j {
            p_j = &p_j + mass;
        }
        if acc_i && acc_j {
            p_joint = &p_joint + mass;
        }
    }
    let product = &p_i * &p_j;
    if product == p_joint {
        Ok(IndependenceOutcome::Independent { p_i, p_j, p_joint })
    } else {
        Ok(IndependenceOutcome::Dependent { p_i, p_j, p_joint })
    }
}
