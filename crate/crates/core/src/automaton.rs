//! Automata, configurations, coin tapes, and exact step semantics.
//!
//! The model is a bounded one-dimensional cellular automaton: `n` cells hold
//! states from a finite set `Q`, a distinguished boundary symbol `$ ∉ Q` is
//! seen beyond both ends, and every cell updates simultaneously from its
//! `(left, self, right)` view. An acceptor additionally fixes an input
//! alphabet `Σ ⊆ Q` and a set `A ⊆ Q` of accepting states; a word is accepted
//! as soon as some step has every cell in an accepting state (step 0 counts).
//!
//! A probabilistic acceptor carries two local rules; each cell independently
//! tosses a fair coin per step and applies the rule the coin selects. With the
//! coin tosses fixed up front as a `T×n` bit matrix (a [`RandomTape`]) a run
//! is fully deterministic, which is what every exact oracle in [`crate::prob`]
//! is built on.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::name::Name;

/// A state value.
///
/// Table-backed automata use only [`StateVal::Sym`]. The constructions in
/// [`crate::transforms`] and the fixtures in [`crate::corpus`] derive state
/// sets that are far too large to tabulate, so they build states structurally:
/// `Comp` nests component states (e.g. one per simulated copy) and `Packed`
/// holds a construction-private compact encoding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateVal {
    /// A named atomic state (also used for alphabet symbols and the boundary).
    Sym(Name),
    /// A small integer payload (counters, phase indices).
    Int(i64),
    /// A compact construction-private encoding.
    Packed { tag: u8, lo: u64, hi: u64 },
    /// A tagged composite of component states.
    Comp { tag: u8, parts: Arc<[StateVal]> },
}

impl StateVal {
    pub fn sym(s: &str) -> StateVal {
        StateVal::Sym(Name::new(s).expect("symbol name fits"))
    }

    pub fn comp(tag: u8, parts: Vec<StateVal>) -> StateVal {
        StateVal::Comp {
            tag,
            parts: parts.into(),
        }
    }

    pub fn packed(tag: u8, lo: u64) -> StateVal {
        StateVal::Packed { tag, lo, hi: 0 }
    }
}

impl fmt::Display for StateVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateVal::Sym(n) => write!(f, "{n}"),
            StateVal::Int(i) => write!(f, "{i}"),
            StateVal::Packed { tag, lo, hi } => {
                if *hi == 0 {
                    write!(f, "#{tag}:{lo:x}")
                } else {
                    write!(f, "#{tag}:{lo:x}:{hi:x}")
                }
            }
            StateVal::Comp { tag, parts } => {
                write!(f, "{tag}(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for StateVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        <Self as fmt::Display>::fmt(self, f)
    }
}

/// Errors raised by construction and simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaError {
    /// The boundary symbol appears in the state set, or states are malformed.
    InvalidStateSet(String),
    /// A configuration cell holds a state outside the declared state set.
    StateOutsideSet(StateVal),
    /// An input symbol is not in the input alphabet.
    InputNotInAlphabet(StateVal),
    /// A deterministic operation was applied to an automaton whose rules differ.
    NonDeterministic,
    /// Coin row length differs from the configuration length.
    LengthMismatch { expected: usize, got: usize },
    /// A coin value reaches or exceeds the rule count.
    CoinOutOfRange { coin: u8, rules: usize },
    /// A table rule has no entry for an encountered local configuration.
    MissingRuleEntry(String),
    /// Empty word or empty tape where one is required.
    Empty(&'static str),
    /// Cell index out of range.
    CellOutOfRange { cell: usize, len: usize },
}

impl fmt::Display for CaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaError::InvalidStateSet(why) => write!(f, "invalid state set: {why}"),
            CaError::StateOutsideSet(s) => write!(f, "state {s} outside the state set"),
            CaError::InputNotInAlphabet(s) => write!(f, "symbol {s} not in the input alphabet"),
            CaError::NonDeterministic => write!(f, "automaton is not deterministic"),
            CaError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            CaError::CoinOutOfRange { coin, rules } => {
                write!(f, "coin value {coin} out of range for {rules} rules")
            }
            CaError::MissingRuleEntry(lc) => write!(f, "rule table has no entry for ({lc})"),
            CaError::Empty(what) => write!(f, "{what} must be nonempty"),
            CaError::CellOutOfRange { cell, len } => {
                write!(f, "cell {cell} out of range for length {len}")
            }
        }
    }
}

/// The declared state universe of an automaton.
///
/// Constructions whose reachable state sets are defined only implicitly (as
/// the closure of the rules over the input alphabet) declare themselves
/// [`StateUniverse::Lazy`]; membership checks then apply only to inputs.
#[derive(Clone, Debug)]
pub enum StateUniverse {
    Explicit(Arc<BTreeSet<StateVal>>),
    Lazy,
}

/// State set plus the distinguished boundary symbol.
#[derive(Clone, Debug)]
pub struct StateSet {
    pub universe: StateUniverse,
    pub boundary: StateVal,
}

impl StateSet {
    /// An explicit state set. The boundary must not be listed among the states.
    pub fn explicit(states: Vec<StateVal>, boundary: StateVal) -> Result<StateSet, CaError> {
        if states.is_empty() {
            return Err(CaError::InvalidStateSet("at least one state".to_owned()));
        }
        let set: BTreeSet<StateVal> = states.iter().cloned().collect();
        if set.len() != states.len() {
            return Err(CaError::InvalidStateSet("duplicate state names".to_owned()));
        }
        if set.contains(&boundary) {
            return Err(CaError::InvalidStateSet(format!(
                "boundary {boundary} listed among the states"
            )));
        }
        Ok(StateSet {
            universe: StateUniverse::Explicit(Arc::new(set)),
            boundary,
        })
    }

    /// A lazily defined state set (closure of the rules over the alphabet).
    pub fn lazy(boundary: StateVal) -> StateSet {
        StateSet {
            universe: StateUniverse::Lazy,
            boundary,
        }
    }

    pub fn contains(&self, s: &StateVal) -> bool {
        match &self.universe {
            StateUniverse::Explicit(set) => set.contains(s),
            StateUniverse::Lazy => true,
        }
    }
}

/// A local transition function on `(left, self, right)` views.
///
/// Either an explicit total table or a named pure procedure. Procedure-backed
/// rules must be deterministic functions of the triple with no hidden state;
/// everything downstream (probability oracles, derandomization) relies on it.
#[derive(Clone)]
pub enum LocalRule {
    Table(Arc<BTreeMap<(StateVal, StateVal, StateVal), StateVal>>),
    Proc {
        label: String,
        f: Arc<dyn Fn(&StateVal, &StateVal, &StateVal) -> StateVal + Send + Sync>,
    },
}

impl LocalRule {
    pub fn table(entries: BTreeMap<(StateVal, StateVal, StateVal), StateVal>) -> LocalRule {
        LocalRule::Table(Arc::new(entries))
    }

    pub fn proc(
        label: &str,
        f: impl Fn(&StateVal, &StateVal, &StateVal) -> StateVal + Send + Sync + 'static,
    ) -> LocalRule {
        LocalRule::Proc {
            label: label.to_owned(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, l: &StateVal, c: &StateVal, r: &StateVal) -> Result<StateVal, CaError> {
        match self {
            LocalRule::Table(map) => map
                .get(&(l.clone(), c.clone(), r.clone()))
                .cloned()
                .ok_or_else(|| CaError::MissingRuleEntry(format!("{l},{c},{r}"))),
            LocalRule::Proc { f, .. } => Ok(f(l, c, r)),
        }
    }
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalRule::Table(map) => write!(f, "Table({} entries)", map.len()),
            LocalRule::Proc { label, .. } => write!(f, "Proc({label})"),
        }
    }
}

/// Accepting-state membership: an explicit set or a predicate over states.
#[derive(Clone)]
pub enum Accepting {
    Set(Arc<BTreeSet<StateVal>>),
    Pred {
        label: String,
        f: Arc<dyn Fn(&StateVal) -> bool + Send + Sync>,
    },
}

impl Accepting {
    pub fn set(states: Vec<StateVal>) -> Accepting {
        Accepting::Set(Arc::new(states.into_iter().collect()))
    }

    pub fn pred(label: &str, f: impl Fn(&StateVal) -> bool + Send + Sync + 'static) -> Accepting {
        Accepting::Pred {
            label: label.to_owned(),
            f: Arc::new(f),
        }
    }

    pub fn accepts(&self, s: &StateVal) -> bool {
        match self {
            Accepting::Set(set) => set.contains(s),
            Accepting::Pred { f, .. } => f(s),
        }
    }
}

impl fmt::Debug for Accepting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Accepting::Set(set) => write!(f, "Set({} states)", set.len()),
            Accepting::Pred { label, .. } => write!(f, "Pred({label})"),
        }
    }
}

/// A probabilistic cellular automaton acceptor.
///
/// `rule0`/`rule1` are the two coin-selected local rules; an automaton whose
/// rules agree everywhere is semantically deterministic (a DACA) and carries
/// `deterministic: true`. The optional `horizon` is the declared time bound
/// `T`: every accepting run must first reach the all-accepting configuration
/// strictly before step `T`. It is a claim, not a trusted fact —
/// [`crate::prob::validate_horizon`] checks it.
#[derive(Clone, Debug)]
pub struct Paca {
    pub label: String,
    pub states: StateSet,
    pub input_alphabet: Vec<StateVal>,
    pub accepting: Accepting,
    pub rule0: LocalRule,
    pub rule1: LocalRule,
    pub deterministic: bool,
    pub horizon: Option<u64>,
}

impl Paca {
    /// Validates alphabet/accepting membership in explicit state sets.
    pub fn validate(&self) -> Result<(), CaError> {
        for s in &self.input_alphabet {
            if !self.states.contains(s) {
                return Err(CaError::StateOutsideSet(s.clone()));
            }
        }
        if let (Accepting::Set(acc), StateUniverse::Explicit(states)) =
            (&self.accepting, &self.states.universe)
        {
            for s in acc.iter() {
                if !states.contains(s) {
                    return Err(CaError::StateOutsideSet(s.clone()));
                }
            }
        }
        Ok(())
    }

    /// A deterministic acceptor: one rule used for both coin outcomes.
    pub fn daca(
        label: &str,
        states: StateSet,
        input_alphabet: Vec<StateVal>,
        accepting: Accepting,
        rule: LocalRule,
        horizon: Option<u64>,
    ) -> Paca {
        Paca {
            label: label.to_owned(),
            states,
            input_alphabet,
            accepting,
            rule0: rule.clone(),
            rule1: rule,
            deterministic: true,
            horizon,
        }
    }
}

/// A generalization used as input to rule-set expansion: an acceptor with
/// `2^k` local rules, one selected per cell per step by `k` fair coins.
#[derive(Clone, Debug)]
pub struct VirtualPaca {
    pub label: String,
    pub states: StateSet,
    pub input_alphabet: Vec<StateVal>,
    pub accepting: Accepting,
    pub rules: Vec<LocalRule>,
    pub horizon: Option<u64>,
}

/// Common interface of [`Paca`] and [`VirtualPaca`] used by the oracles.
pub trait Automaton: Sync {
    /// Number of coin-selectable rules; always a power of two.
    fn rule_count(&self) -> usize;
    fn apply(&self, rule: usize, l: &StateVal, c: &StateVal, r: &StateVal)
        -> Result<StateVal, CaError>;
    fn is_accepting(&self, s: &StateVal) -> bool;
    fn boundary(&self) -> &StateVal;
    fn input_alphabet(&self) -> &[StateVal];
    fn declared_horizon(&self) -> Option<u64>;
    fn state_in_set(&self, s: &StateVal) -> bool;

    fn check_input(&self, input: &Configuration) -> Result<(), CaError> {
        for s in input.cells() {
            if !self.input_alphabet().contains(s) {
                return Err(CaError::InputNotInAlphabet(s.clone()));
            }
        }
        Ok(())
    }

    fn all_accepting(&self, cfg: &Configuration) -> bool {
        cfg.cells().iter().all(|s| self.is_accepting(s))
    }
}

impl Automaton for Paca {
    fn rule_count(&self) -> usize {
        2
    }

    fn apply(
        &self,
        rule: usize,
        l: &StateVal,
        c: &StateVal,
        r: &StateVal,
    ) -> Result<StateVal, CaError> {
        match rule {
            0 => self.rule0.eval(l, c, r),
            1 => self.rule1.eval(l, c, r),
            _ => Err(CaError::CoinOutOfRange {
                coin: rule as u8,
                rules: 2,
            }),
        }
    }

    fn is_accepting(&self, s: &StateVal) -> bool {
        self.accepting.accepts(s)
    }

    fn boundary(&self) -> &StateVal {
        &self.states.boundary
    }

    fn input_alphabet(&self) -> &[StateVal] {
        &self.input_alphabet
    }

    fn declared_horizon(&self) -> Option<u64> {
        self.horizon
    }

    fn state_in_set(&self, s: &StateVal) -> bool {
        self.states.contains(s)
    }
}

impl Automaton for VirtualPaca {
    fn rule_count(&self) -> usize {
        self.rules.len()
    }

    fn apply(
        &self,
        rule: usize,
        l: &StateVal,
        c: &StateVal,
        r: &StateVal,
    ) -> Result<StateVal, CaError> {
        self.rules
            .get(rule)
            .ok_or(CaError::CoinOutOfRange {
                coin: rule as u8,
                rules: self.rules.len(),
            })?
            .eval(l, c, r)
    }

    fn is_accepting(&self, s: &StateVal) -> bool {
        self.accepting.accepts(s)
    }

    fn boundary(&self) -> &StateVal {
        &self.states.boundary
    }

    fn input_alphabet(&self) -> &[StateVal] {
        &self.input_alphabet
    }

    fn declared_horizon(&self) -> Option<u64> {
        self.horizon
    }

    fn state_in_set(&self, s: &StateVal) -> bool {
        self.states.contains(s)
    }
}

/// A nonempty row of cell states. The empty word is excluded from every
/// language considered here, so zero-length configurations are rejected.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Configuration {
    cells: Vec<StateVal>,
}

impl Configuration {
    pub fn new(cells: Vec<StateVal>) -> Result<Configuration, CaError> {
        if cells.is_empty() {
            return Err(CaError::Empty("configuration"));
        }
        Ok(Configuration { cells })
    }

    /// Builds a configuration from single-character symbols.
    pub fn from_symbols(word: &str) -> Result<Configuration, CaError> {
        let cells: Vec<StateVal> = word
            .chars()
            .map(|c| StateVal::Sym(Name::from_char(c)))
            .collect();
        Configuration::new(cells)
    }

    pub fn cells(&self) -> &[StateVal] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A `T×n` matrix of per-cell coin values; row `t` drives the step from
/// configuration `t` to configuration `t+1`. Entries are `< rule_count`
/// (bits for a two-rule automaton).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RandomTape {
    rows: Vec<Vec<u8>>,
}

impl RandomTape {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<RandomTape, CaError> {
        if rows.is_empty() {
            return Err(CaError::Empty("random tape"));
        }
        let width = rows[0].len();
        for row in &rows {
            if row.len() != width {
                return Err(CaError::LengthMismatch {
                    expected: width,
                    got: row.len(),
                });
            }
        }
        Ok(RandomTape { rows })
    }

    /// An all-zero tape of the given dimensions.
    pub fn zeros(rows: usize, width: usize) -> RandomTape {
        RandomTape {
            rows: vec![vec![0u8; width]; rows.max(1)],
        }
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }
}

/// Outcome of a run against a fixed tape.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RunOutcome {
    /// First step at which all cells were accepting (step 0 allowed).
    Accepted { step: u32 },
    /// No all-accepting configuration within the simulated steps.
    RejectedWithinHorizon,
}

/// Rows of a run written line for line, with the first all-accepting row.
#[derive(Clone, Debug)]
pub struct SpaceTimeDiagram {
    pub rows: Vec<Configuration>,
    pub accept_step: Option<u32>,
}

/// One deterministic step: boundary symbols are seen beyond both ends.
pub fn step_det(aut: &Paca, cfg: &Configuration) -> Result<Configuration, CaError> {
    if !aut.deterministic {
        return Err(CaError::NonDeterministic);
    }
    for s in cfg.cells() {
        if !aut.states.contains(s) {
            return Err(CaError::StateOutsideSet(s.clone()));
        }
    }
    step_with(aut, cfg, |_| 0)
}

/// One coin-driven step: cell `i` applies the rule selected by `coins[i]`.
pub fn step_rand(aut: &impl Automaton, cfg: &Configuration, coins: &[u8]) -> Result<Configuration, CaError> {
    if coins.len() != cfg.len() {
        return Err(CaError::LengthMismatch {
            expected: cfg.len(),
            got: coins.len(),
        });
    }
    let rules = aut.rule_count();
    for &c in coins {
        if (c as usize) >= rules {
            return Err(CaError::CoinOutOfRange { coin: c, rules });
        }
    }
    step_with(aut, cfg, |i| coins[i] as usize)
}

fn step_with(
    aut: &impl Automaton,
    cfg: &Configuration,
    rule_of: impl Fn(usize) -> usize,
) -> Result<Configuration, CaError> {
    let cells = cfg.cells();
    let n = cells.len();
    let bnd = aut.boundary().clone();
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let l = if i == 0 { &bnd } else { &cells[i - 1] };
        let r = if i + 1 == n { &bnd } else { &cells[i + 1] };
        next.push(aut.apply(rule_of(i), l, &cells[i], r)?);
    }
    Configuration::new(next)
}

/// Runs an input against a fixed tape, reporting the first all-accepting step.
///
/// Rows after acceptance are ignored. Steps `0..=rows` are examined, so a tape
/// with `T` rows covers every acceptance step strictly below `T+1`.
pub fn run(
    aut: &impl Automaton,
    input: &Configuration,
    tape: &RandomTape,
) -> Result<RunOutcome, CaError> {
    aut.check_input(input)?;
    if tape.width() != input.len() {
        return Err(CaError::LengthMismatch {
            expected: input.len(),
            got: tape.width(),
        });
    }
    let mut cfg = input.clone();
    if aut.all_accepting(&cfg) {
        return Ok(RunOutcome::Accepted { step: 0 });
    }
    for (t, row) in tape.rows().iter().enumerate() {
        cfg = step_rand(aut, &cfg, row)?;
        if aut.all_accepting(&cfg) {
            return Ok(RunOutcome::Accepted { step: t as u32 + 1 });
        }
    }
    Ok(RunOutcome::RejectedWithinHorizon)
}

/// Writes the orbit line for line.
///
/// With `tape: None` the automaton must be deterministic; otherwise the tape
/// must supply at least `steps` rows. Row 0 is the input; `accept_step` is
/// the least computed step whose row is all-accepting.
pub fn space_time(
    aut: &Paca,
    input: &Configuration,
    tape: Option<&RandomTape>,
    steps: u32,
) -> Result<SpaceTimeDiagram, CaError> {
    aut.check_input(input)?;
    let mut rows = Vec::with_capacity(steps as usize + 1);
    let mut accept_step = None;
    let mut cfg = input.clone();
    if aut.all_accepting(&cfg) {
        accept_step = Some(0);
    }
    rows.push(cfg.clone());
    for t in 0..steps {
        cfg = match tape {
            None => {
                if !aut.deterministic {
                    return Err(CaError::NonDeterministic);
                }
                step_with(aut, &cfg, |_| 0)?
            }
            Some(tape) => {
                let row = tape
                    .rows()
                    .get(t as usize)
                    .ok_or(CaError::Empty("tape row"))?;
                step_rand(aut, &cfg, row)?
            }
        };
        if accept_step.is_none() && aut.all_accepting(&cfg) {
            accept_step = Some(t + 1);
        }
        rows.push(cfg.clone());
    }
    Ok(SpaceTimeDiagram { rows, accept_step })
}

/// Coin positions that can influence a cell's state at step `t`.
///
/// Row `s` (driving the step `s → s+1`) contributes columns
/// `[cell−(t−1−s), cell+(t−1−s)]`, clipped to `[0, n)`. Away from the borders
/// the positions form a triangle of `t²` coins.
pub fn lightcone_coords(cell: usize, t: u32, n: usize) -> Result<Vec<(u32, usize)>, CaError> {
    if cell >= n {
        return Err(CaError::CellOutOfRange { cell, len: n });
    }
    let mut coords = Vec::new();
    for s in 0..t {
        let reach = (t - 1 - s) as usize;
        let lo = cell.saturating_sub(reach);
        let hi = (cell + reach).min(n - 1);
        for col in lo..=hi {
            coords.push((s, col));
        }
    }
    Ok(coords)
}
