//! The two acceptance-probability oracles and the distribution forwarder.
//!
//! States and configurations are interned to dense ids so the hot loops hash
//! small integer slices instead of structured state values. Nothing here is
//! approximate: masses are dyadic, tape counts are big integers.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::automaton::{Automaton, Configuration, StateVal};
use crate::dyadic::Dyadic;

use super::{Budget, Distribution, ProbError};

pub(crate) struct Interner {
    vals: Vec<StateVal>,
    accepting: Vec<bool>,
    ids: HashMap<StateVal, u32>,
}

impl Interner {
    pub(crate) fn new() -> Interner {
        Interner {
            vals: Vec::new(),
            accepting: Vec::new(),
            ids: HashMap::new(),
        }
    }

    pub(crate) fn id(&mut self, aut: &(impl Automaton + ?Sized), s: &StateVal) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.vals.len() as u32;
        self.vals.push(s.clone());
        self.accepting.push(aut.is_accepting(s));
        self.ids.insert(s.clone(), id);
        id
    }

    pub(crate) fn val(&self, id: u32) -> &StateVal {
        &self.vals[id as usize]
    }

    pub(crate) fn is_accepting(&self, id: u32) -> bool {
        self.accepting[id as usize]
    }
}

/// Interned transition context shared by the oracles.
pub(crate) struct Engine<'a, A: Automaton + ?Sized> {
    pub(crate) aut: &'a A,
    pub(crate) interner: Interner,
    boundary: u32,
    rules: usize,
    trans: HashMap<(u32, u32, u32, u8), u32>,
}

impl<'a, A: Automaton + ?Sized> Engine<'a, A> {
    pub(crate) fn new(aut: &'a A) -> Engine<'a, A> {
        let mut interner = Interner::new();
        let boundary = interner.id(aut, aut.boundary());
        let rules = aut.rule_count();
        assert!(rules.is_power_of_two(), "rule count must be a power of two");
        Engine {
            aut,
            interner,
            boundary,
            rules,
            trans: HashMap::new(),
        }
    }

    /// Step-counting states never repeat, so the intern table and transition
    /// memo grow with every step of a long-horizon run. Once either dwarfs
    /// the live distribution, re-intern just the live configurations.
    pub(crate) fn maybe_gc(&mut self, dist: HashMap<Box<[u32]>, Dyadic>) -> HashMap<Box<[u32]>, Dyadic> {
        let live_cells: usize = dist.keys().map(|cfg| cfg.len()).sum();
        let stale_interner = self.interner.vals.len() >= 65_536
            && self.interner.vals.len() >= 16 * live_cells.max(1);
        let stale_memo = self.trans.len() >= 2_000_000;
        if !stale_interner && !stale_memo {
            return dist;
        }
        let staged: Vec<(Vec<StateVal>, Dyadic)> = dist
            .into_iter()
            .map(|(cfg, mass)| {
                (
                    cfg.iter().map(|&id| self.interner.val(id).clone()).collect(),
                    mass,
                )
            })
            .collect();
        self.interner = Interner::new();
        self.trans = HashMap::new();
        self.boundary = self.interner.id(self.aut, self.aut.boundary());
        staged
            .into_iter()
            .map(|(cells, mass)| {
                let key: Box<[u32]> = cells
                    .iter()
                    .map(|s| self.interner.id(self.aut, s))
                    .collect();
                (key, mass)
            })
            .collect()
    }

    pub(crate) fn coin_bits(&self) -> u32 {
        self.rules.trailing_zeros()
    }

    pub(crate) fn intern_config(&mut self, cfg: &Configuration) -> Box<[u32]> {
        cfg.cells()
            .iter()
            .map(|s| self.interner.id(self.aut, s))
            .collect()
    }

    pub(crate) fn apply(&mut self, rule: u8, l: u32, c: u32, r: u32) -> Result<u32, ProbError> {
        if let Some(&id) = self.trans.get(&(l, c, r, rule)) {
            return Ok(id);
        }
        let next = self.aut.apply(
            rule as usize,
            self.interner.val(l),
            self.interner.val(c),
            self.interner.val(r),
        )?;
        let id = self.interner.id(self.aut, &next);
        self.trans.insert((l, c, r, rule), id);
        Ok(id)
    }

    /// Distinct successor states of cell `i` with rule multiplicities.
    pub(crate) fn cell_images(
        &mut self,
        cfg: &[u32],
        i: usize,
    ) -> Result<Vec<(u32, u32)>, ProbError> {
        let l = if i == 0 { self.boundary } else { cfg[i - 1] };
        let r = if i + 1 == cfg.len() {
            self.boundary
        } else {
            cfg[i + 1]
        };
        let mut images: Vec<(u32, u32)> = Vec::with_capacity(2);
        for rule in 0..self.rules {
            let id = self.apply(rule as u8, l, cfg[i], r)?;
            match images.iter_mut().find(|(s, _)| *s == id) {
                Some((_, count)) => *count += 1,
                None => images.push((id, 1)),
            }
        }
        Ok(images)
    }

    pub(crate) fn config_accepting(&self, cfg: &[u32]) -> bool {
        cfg.iter().all(|&id| self.interner.is_accepting(id))
    }

    /// Applies one full coin row (encoded as mixed-radix digits) to a config.
    fn apply_row(&mut self, cfg: &[u32], row: u64) -> Result<Box<[u32]>, ProbError> {
        let n = cfg.len();
        let mut next = Vec::with_capacity(n);
        let mut digits = row;
        let radix = self.rules as u64;
        for i in 0..n {
            let rule = (digits % radix) as u8;
            digits /= radix;
            let l = if i == 0 { self.boundary } else { cfg[i - 1] };
            let r = if i + 1 == n { self.boundary } else { cfg[i + 1] };
            next.push(self.apply(rule, l, cfg[i], r)?);
        }
        Ok(next.into())
    }
}

/// One distribution step: the successor of each configuration is a product
/// measure, cell `i` moving to each distinct rule image with mass
/// `multiplicity / rules`.
fn dist_step<A: Automaton + ?Sized>(
    engine: &mut Engine<'_, A>,
    dist: &HashMap<Box<[u32]>, Dyadic>,
    budget: &Budget,
) -> Result<HashMap<Box<[u32]>, Dyadic>, ProbError> {
    let coin_bits = engine.coin_bits();
    let mut next: HashMap<Box<[u32]>, Dyadic> = HashMap::new();
    for (cfg, mass) in dist {
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
        let branch_bits: u32 = branches.len() as u32 * coin_bits;
        let mut idx = alloc::vec![0usize; branches.len()];
        loop {
            let mut succ = base.clone();
            let mut coeff: u64 = 1;
            for (bi, (cell, images)) in branches.iter().enumerate() {
                let (id, count) = images[idx[bi]];
                succ[*cell] = id;
                coeff *= count as u64;
            }
            let share = mass * &Dyadic::from_count(BigUint::from(coeff), branch_bits);
            let key: Box<[u32]> = succ.into();
            match next.get_mut(&key) {
                Some(existing) => *existing = &*existing + &share,
                None => {
                    if next.len() >= budget.dp_support {
                        return Err(ProbError::BudgetExceeded {
                            what: "distribution support",
                            needed: next.len() as u64 + 1,
                            budget: budget.dp_support as u64,
                        });
                    }
                    next.insert(key, share);
                }
            }
            // Odometer over the branching cells.
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
    Ok(next)
}

/// Forward oracle: exact probability of first acceptance strictly before
/// `horizon` steps. Accepting configurations are absorbed after every step,
/// including the input row itself.
pub fn acceptance_prob_dp(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    horizon: u32,
    budget: &Budget,
) -> Result<Dyadic, ProbError> {
    DpSweeper::new(aut).probability(input, horizon, budget)
}

/// A forward oracle that keeps its interned states and transition memo warm
/// across queries — the per-word cost of scanning millions of inputs of one
/// automaton drops to the distribution work itself.
pub struct DpSweeper<'a, A: Automaton + ?Sized> {
    engine: Engine<'a, A>,
}

impl<'a, A: Automaton + ?Sized> DpSweeper<'a, A> {
    pub fn new(aut: &'a A) -> DpSweeper<'a, A> {
        DpSweeper {
            engine: Engine::new(aut),
        }
    }

    pub fn probability(
        &mut self,
        input: &Configuration,
        horizon: u32,
        budget: &Budget,
    ) -> Result<Dyadic, ProbError> {
        let engine = &mut self.engine;
        engine.aut.check_input(input)?;
        if horizon == 0 {
            return Ok(Dyadic::zero());
        }
        let start = engine.intern_config(input);
        let mut dist: HashMap<Box<[u32]>, Dyadic> = HashMap::new();
        dist.insert(start, Dyadic::one());
        let mut accepted = Dyadic::zero();
        absorb(engine, &mut dist, &mut accepted);
        for _ in 1..horizon {
            if dist.is_empty() {
                break;
            }
            dist = engine.maybe_gc(dist);
            dist = dist_step(engine, &dist, budget)?;
            absorb(engine, &mut dist, &mut accepted);
        }
        Ok(accepted)
    }
}

fn absorb<A: Automaton + ?Sized>(
    engine: &Engine<'_, A>,
    dist: &mut HashMap<Box<[u32]>, Dyadic>,
    accepted: &mut Dyadic,
) {
    let mut hits: Vec<Box<[u32]>> = Vec::new();
    for cfg in dist.keys() {
        if engine.config_accepting(cfg) {
            hits.push(cfg.clone());
        }
    }
    for cfg in hits {
        if let Some(mass) = dist.remove(&cfg) {
            *accepted = &*accepted + &mass;
        }
    }
}

/// Set-forwarding decision oracle: is the acceptance probability within the
/// horizon positive at all? Forwards reachable-configuration sets (no
/// masses), so it is considerably cheaper than the exact oracles and is the
/// workhorse for exhaustive one-sided soundness sweeps.
pub struct ReachSweeper<'a, A: Automaton + ?Sized> {
    engine: Engine<'a, A>,
}

impl<'a, A: Automaton + ?Sized> ReachSweeper<'a, A> {
    pub fn new(aut: &'a A) -> ReachSweeper<'a, A> {
        ReachSweeper {
            engine: Engine::new(aut),
        }
    }

    pub fn accepts_with_positive_probability(
        &mut self,
        input: &Configuration,
        horizon: u32,
        budget: &Budget,
    ) -> Result<bool, ProbError> {
        let engine = &mut self.engine;
        engine.aut.check_input(input)?;
        if horizon == 0 {
            return Ok(false);
        }
        let start = engine.intern_config(input);
        if engine.config_accepting(&start) {
            return Ok(true);
        }
        let mut current: Vec<Box<[u32]>> = alloc::vec![start];
        let mut seen: HashMap<Box<[u32]>, ()> = HashMap::new();
        for _ in 1..horizon {
            let mut next: Vec<Box<[u32]>> = Vec::new();
            seen.clear();
            for cfg in &current {
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
                        if engine.config_accepting(&key) {
                            return Ok(true);
                        }
                        if seen.len() >= budget.set_support {
                            return Err(ProbError::BudgetExceeded {
                                what: "reachable set",
                                needed: seen.len() as u64 + 1,
                                budget: budget.set_support as u64,
                            });
                        }
                        seen.insert(key.clone(), ());
                        next.push(key);
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
            if next.is_empty() {
                return Ok(false);
            }
            current = next;
        }
        Ok(false)
    }
}

/// Tape-enumeration oracle: counts, over all coin tapes with `horizon−1`
/// rows, those whose run first reaches an all-accepting configuration
/// (rows after acceptance are ignored — all their completions count).
pub fn acceptance_prob_enum(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    horizon: u32,
    budget: &Budget,
) -> Result<Dyadic, ProbError> {
    aut.check_input(input)?;
    if horizon == 0 {
        return Ok(Dyadic::zero());
    }
    let mut engine = Engine::new(aut);
    let n = input.len();
    let rows = horizon - 1;
    let coin_bits = engine.coin_bits();
    let bits_per_row = coin_bits as u64 * n as u64;
    let total_bits = bits_per_row * rows as u64;
    if total_bits > budget.enum_bits as u64 {
        return Err(ProbError::BudgetExceeded {
            what: "tape enumeration bits",
            needed: total_bits,
            budget: budget.enum_bits as u64,
        });
    }
    let start = engine.intern_config(input);
    let row_count: u64 = 1u64 << bits_per_row;

    // Accepting-tape counts, memoized over (configuration, depth). A
    // configuration that is already all-accepting at depth d accepts under
    // every completion of the remaining rows.
    let mut memo: HashMap<(Box<[u32]>, u32), BigUint> = HashMap::new();
    let mut stack: Vec<(Box<[u32]>, u32)> = alloc::vec![(start.clone(), 0)];
    // Iterative post-order: compute children before parents.
    while let Some((cfg, depth)) = stack.pop() {
        if memo.contains_key(&(cfg.clone(), depth)) {
            continue;
        }
        if engine.config_accepting(&cfg) {
            let remaining = bits_per_row * (rows - depth) as u64;
            memo.insert((cfg, depth), one_shl(remaining));
            continue;
        }
        if depth == rows {
            memo.insert((cfg, depth), BigUint::zero());
            continue;
        }
        let mut pending = Vec::new();
        let mut sum = BigUint::zero();
        let mut all_known = true;
        for row in 0..row_count {
            let child = engine.apply_row(&cfg, row)?;
            match memo.get(&(child.clone(), depth + 1)) {
                Some(count) => sum += count,
                None => {
                    all_known = false;
                    pending.push(child);
                }
            }
        }
        if all_known {
            memo.insert((cfg, depth), sum);
        } else {
            stack.push((cfg, depth));
            for child in pending {
                stack.push((child, depth + 1));
            }
        }
    }
    let count = memo
        .get(&(start, 0))
        .cloned()
        .expect("root count computed");
    Ok(Dyadic::from_count(count, total_bits as u32))
}

fn one_shl(bits: u64) -> BigUint {
    let mut v = BigUint::from(1u8);
    v <<= bits as usize;
    v
}

/// Forwards the configuration distribution for `steps` transitions.
///
/// With `absorb_accepting` the all-accepting mass is moved into the returned
/// accumulator after every step (first-hit semantics); without it the full
/// distribution is kept (the extended-diagram view used for per-step
/// acceptance profiles).
pub fn forward_distribution(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    steps: u32,
    absorb_accepting: bool,
    budget: &Budget,
) -> Result<(Distribution, Dyadic), ProbError> {
    aut.check_input(input)?;
    let mut engine = Engine::new(aut);
    let start = engine.intern_config(input);
    let mut dist: HashMap<Box<[u32]>, Dyadic> = HashMap::new();
    dist.insert(start, Dyadic::one());
    let mut accepted = Dyadic::zero();
    if absorb_accepting {
        absorb(&engine, &mut dist, &mut accepted);
    }
    for _ in 0..steps {
        if dist.is_empty() {
            break;
        }
        dist = engine.maybe_gc(dist);
        dist = dist_step(&mut engine, &dist, budget)?;
        if absorb_accepting {
            absorb(&engine, &mut dist, &mut accepted);
        }
    }
    let mut support = BTreeMap::new();
    for (cfg, mass) in dist {
        let cells: Vec<StateVal> = cfg.iter().map(|&id| engine.interner.val(id).clone()).collect();
        support.insert(Configuration::new(cells)?, mass);
    }
    Ok((Distribution { support }, accepted))
}

/// `Pr[configuration at step t is all-accepting]` for `t = 0..=t_max`,
/// without absorption (the run is extended past acceptance by simply
/// applying the transition).
pub fn acceptance_step_profile(
    aut: &(impl Automaton + ?Sized),
    input: &Configuration,
    t_max: u32,
    budget: &Budget,
) -> Result<Vec<Dyadic>, ProbError> {
    aut.check_input(input)?;
    let mut engine = Engine::new(aut);
    let start = engine.intern_config(input);
    let mut dist: HashMap<Box<[u32]>, Dyadic> = HashMap::new();
    dist.insert(start, Dyadic::one());
    let mut profile = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let mut mass = Dyadic::zero();
        for (cfg, m) in &dist {
            if engine.config_accepting(cfg) {
                mass = &mass + m;
            }
        }
        profile.push(mass);
        if t < t_max {
            dist = engine.maybe_gc(dist);
            dist = dist_step(&mut engine, &dist, budget)?;
        }
    }
    Ok(profile)
}
