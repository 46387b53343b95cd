//! Automaton-to-automaton constructions.
//!
//! Everything here consumes acceptors and produces acceptors, each output a
//! rule-backed [`Paca`] whose state set is defined lazily by its rules:
//!
//! * [`reduce_error_one_sided`] — round-robin simulation of `m` independent
//!   copies, accepting when any copy does;
//! * [`reduce_error_two_sided`] — `m` independent copies run once while each
//!   cell records its per-step acceptance indicators, then a deterministic
//!   sweep over all majority subsets and per-copy step combinations;
//! * [`union_paca`] / [`intersect_paca`] — products of two acceptors built on
//!   the same two pieces of machinery;
//! * [`derandomize_one_sided`] — compiles a constant-time one-sided-error
//!   acceptor into a deterministic one via local criticality analysis;
//! * [`paca_from_llin`] — compiles a weighted local language spec into a
//!   coin-flipping acceptor and amplifies it to two-sided error 1/3;
//! * [`expand_rules`] — realizes a `2^k`-rule acceptor with two rules by
//!   collecting `k` coins per simulated step.
//!
//! Each operation returns a [`TransformReport`] recording the derived horizon
//! and every parameter choice. The module [`laws`] states the exact
//! acceptance probabilities of the product constructions in terms of their
//! components; the test suite validates those laws against the generic
//! oracles on small instances.

pub mod laws;

mod derandomize;
mod expand;
mod llin;
mod recorder;
mod round_robin;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::{CaError, Paca};
use crate::prob::ProbError;

pub use derandomize::{calibrate_critical_budget, derandomize_one_sided, DerandomizeParams};
pub use expand::expand_rules;
pub use llin::{paca_from_llin, LlinCompilation};
pub use recorder::{amplify_threshold, intersect_paca, majority_copies, reduce_error_two_sided};
pub use round_robin::{reduce_error_one_sided, round_robin_product, union_paca};

/// A construction output plus the provenance of every parameter choice.
#[derive(Clone, Debug)]
pub struct TransformReport {
    pub output: Paca,
    pub derived_horizon: u64,
    pub parameters: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl TransformReport {
    pub(crate) fn new(output: Paca, derived_horizon: u64) -> TransformReport {
        TransformReport {
            output,
            derived_horizon,
            parameters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl fmt::Display) -> TransformReport {
        self.parameters.insert(String::from(key), alloc::format!("{value}"));
        self
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> TransformReport {
        self.notes.push(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformError {
    InvalidParameter(String),
    /// Construction sizes (copy counts, recorded bits, derived horizons)
    /// outgrew their budgets.
    SizeBudget {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    /// Operands are structurally incompatible (alphabets, boundaries).
    Incompatible(String),
    Ca(CaError),
    Prob(ProbError),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            TransformError::SizeBudget {
                what,
                needed,
                budget,
            } => write!(f, "size budget exceeded for {what}: needs {needed}, budget {budget}"),
            TransformError::Incompatible(why) => write!(f, "incompatible operands: {why}"),
            TransformError::Ca(e) => write!(f, "{e}"),
            TransformError::Prob(e) => write!(f, "{e}"),
        }
    }
}

impl From<CaError> for TransformError {
    fn from(e: CaError) -> TransformError {
        TransformError::Ca(e)
    }
}

impl From<ProbError> for TransformError {
    fn from(e: ProbError) -> TransformError {
        TransformError::Prob(e)
    }
}

/// State-encoding tags used by the construction wrappers.
pub(crate) mod tag {
    /// Round-robin product states.
    pub const RR: u8 = 32;
    /// Indicator-recorder product states.
    pub const REC: u8 = 33;
    /// Recorded indicator bits (packed).
    pub const REC_BITS: u8 = 34;
    /// Rule-set expansion states.
    pub const EXPAND: u8 = 35;
    /// Derandomizer gather phase.
    pub const DER_GATHER: u8 = 36;
    /// Derandomizer decision phase.
    pub const DER_RUN: u8 = 37;
    /// Derandomizer dead state.
    pub const DER_DEAD: u8 = 38;
    /// Window-spec compiler gather phase.
    pub const LLIN_GATHER: u8 = 39;
    /// Window-spec compiler comparator phase.
    pub const LLIN_CMP: u8 = 40;
    /// Window-spec compiler verdict.
    pub const LLIN_VERDICT: u8 = 41;
    /// Window-spec compiler dead state.
    pub const LLIN_DEAD: u8 = 42;
}

pub(crate) fn check_same_interface(slots: &[&Paca]) -> Result<(), TransformError> {
    let first = slots
        .first()
        .ok_or_else(|| TransformError::InvalidParameter("no operands".into()))?;
    for p in slots.iter().skip(1) {
        if p.states.boundary != first.states.boundary {
            return Err(TransformError::Incompatible("boundary symbols differ".into()));
        }
        if p.input_alphabet != first.input_alphabet {
            return Err(TransformError::Incompatible("input alphabets differ".into()));
        }
    }
    Ok(())
}
