//! Exact acceptance-probability computation and analysis.
//!
//! Two independent oracles compute the probability that an automaton accepts
//! an input within a horizon `T` (i.e. first reaches an all-accepting
//! configuration at some step strictly below `T`):
//!
//! * [`acceptance_prob_enum`] walks the tree of coin tapes row by row,
//!   counting accepting tapes exactly (rows after acceptance are ignored);
//! * [`acceptance_prob_dp`] forwards a probability distribution over
//!   configurations, absorbing all-accepting configurations after every step
//!   (including step 0).
//!
//! Both return exact [`Dyadic`] values and must agree bit for bit. On top of
//! them sit [`classify`] (the one- and two-sided error contracts),
//! [`validate_horizon`] (checks a declared time bound via first-hit sets),
//! [`critical_cells`] (which cells' acceptance at a step depends on the
//! coins), and [`independence_check`] (exact joint-versus-product tests for
//! cell-local events).
//!
//! Everything is budget-guarded: enumeration and support sizes are explicit
//! parameters with conservative defaults so that oversized queries fail
//! predictably instead of running away.

mod engine;
mod horizon;
pub(crate) mod window;

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use crate::automaton::{Automaton, CaError, Configuration};
use crate::dyadic::Dyadic;
use crate::ratio::Ratio;

pub use engine::{
    acceptance_prob_dp, acceptance_prob_enum, acceptance_step_profile, forward_distribution,
    DpSweeper, ReachSweeper,
};
pub use horizon::{validate_horizon, HorizonCheck};
pub use window::{
    critical_cells, exists_assignment_all_accepting, independence_check, reachable_cell_states,
    window_distribution, CriticalReport, IndependenceOutcome, PositivitySweeper,
};

/// Enumeration and state-space budgets.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Maximum total coin bits for tape enumeration (`log2(rules)·n·(T−1)`).
    pub enum_bits: u32,
    /// Maximum distribution support for the forward oracle.
    pub dp_support: usize,
    /// Maximum set size in windowed evolutions and first-hit sets.
    pub set_support: usize,
    /// Maximum values enumerated when scanning attainable weight sums.
    pub value_enum: usize,
    /// Maximum derived horizon a construction may declare.
    pub horizon_steps: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            enum_bits: 24,
            dp_support: 2_000_000,
            set_support: 200_000,
            value_enum: 200_000,
            horizon_steps: 10_000_000,
        }
    }
}

impl Budget {
    /// A generous budget for tests that deliberately push past the defaults.
    pub fn large() -> Budget {
        Budget {
            enum_bits: 30,
            dp_support: 8_000_000,
            set_support: 2_000_000,
            value_enum: 2_000_000,
            horizon_steps: 100_000_000_000,
        }
    }
}

/// Errors raised by the probability oracles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbError {
    Ca(CaError),
    /// A budget would be exceeded; the query is refused, not approximated.
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    InvalidParameter(String),
}

impl fmt::Display for ProbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbError::Ca(e) => write!(f, "{e}"),
            ProbError::BudgetExceeded {
                what,
                needed,
                budget,
            } => write!(f, "budget exceeded for {what}: needs {needed}, budget {budget}"),
            ProbError::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
        }
    }
}

impl From<CaError> for ProbError {
    fn from(e: CaError) -> ProbError {
        ProbError::Ca(e)
    }
}

/// A sub-probability distribution over configurations of one fixed length.
/// Mass absorbed into acceptance has been removed from the support.
#[derive(Clone, Debug)]
pub struct Distribution {
    pub support: BTreeMap<Configuration, Dyadic>,
}

impl Distribution {
    pub fn total_mass(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for mass in self.support.values() {
            acc = &acc + mass;
        }
        acc
    }
}

/// Error contract under which [`classify`] interprets a probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErrorMode {
    /// Accept side `≥ 1−p`, reject side exactly `0`; `p ∈ (0,1)`.
    OneSided(Ratio),
    /// Accept side `≥ 1−p`, reject side `≤ p`; `p ∈ (0,1/2)`.
    TwoSided(Ratio),
}

/// Outcome of classifying an input under an error contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    InLanguage,
    NotInLanguage,
    /// The probability falls outside both bands: the automaton does not meet
    /// the claimed contract on this input.
    ContractViolation,
}

/// Classifies an input by its exact acceptance probability within `horizon`.
pub fn classify(
    aut: &impl Automaton,
    input: &Configuration,
    horizon: u32,
    mode: &ErrorMode,
    budget: &Budget,
) -> Result<Classification, ProbError> {
    let prob = acceptance_prob_dp(aut, input, horizon, budget)?;
    classify_probability(&prob, mode)
}

/// Applies an error contract to an already-computed probability.
///
/// One-sided: probability at least `1−p` means the word is in the language,
/// exactly zero means it is not, and anything strictly between witnesses
/// that the automaton does not meet the claimed contract on this input.
/// Two-sided: the bands are `≥ 1−p` and `≤ p`.
pub fn classify_probability(
    prob: &Dyadic,
    mode: &ErrorMode,
) -> Result<Classification, ProbError> {
    match mode {
        ErrorMode::OneSided(p) => {
            if p.is_zero() || *p >= Ratio::one() {
                return Err(ProbError::InvalidParameter(String::from(
                    "one-sided error must lie in (0,1)",
                )));
            }
            let accept_band = p.complement(); // 1−p
            if accept_band.cmp_dyadic(prob) != core::cmp::Ordering::Greater {
                Ok(Classification::InLanguage)
            } else if prob.is_zero() {
                Ok(Classification::NotInLanguage)
            } else {
                Ok(Classification::ContractViolation)
            }
        }
        ErrorMode::TwoSided(p) => {
            if p.is_zero() || *p >= Ratio::from_u64s(1, 2) {
                return Err(ProbError::InvalidParameter(String::from(
                    "two-sided error must lie in (0,1/2)",
                )));
            }
            let accept_band = p.complement();
            if accept_band.cmp_dyadic(prob) != core::cmp::Ordering::Greater {
                Ok(Classification::InLanguage)
            } else if p.cmp_dyadic(prob) != core::cmp::Ordering::Less {
                Ok(Classification::NotInLanguage)
            } else {
                Ok(Classification::ContractViolation)
            }
        }
    }
}
