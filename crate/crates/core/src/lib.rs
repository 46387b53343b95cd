//! Exact laboratory for bounded one-dimensional cellular automaton acceptors
//! (ACAs) with per-cell coin tosses.
//!
//! An ACA accepts a word when all of its cells are simultaneously in accepting
//! states. The probabilistic variant implemented here ("PACA") gives every cell
//! a fair coin per step and two local rules to choose between. This crate
//! provides:
//!
//! * exact step semantics for deterministic and coin-driven runs
//!   ([`automaton`]),
//! * exact acceptance-probability oracles over all coin tapes, with all
//!   probabilities kept as dyadic rationals ([`prob`], [`dyadic`]),
//! * automaton-to-automaton constructions: error reduction, union and
//!   intersection products, derandomization of constant-time one-sided-error
//!   automata, and a compiler from weighted local language specs
//!   ([`transforms`]),
//! * a subregular-language toolkit covering strictly locally testable,
//!   locally threshold testable, and linearly weighted local languages
//!   ([`langs`]),
//! * a registry of concrete example automata with recorded exact values
//!   ([`corpus`]).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line front end live in the companion `paca-cli` crate.
//!
//! ```
//! use paca_core::automaton::Configuration;
//! use paca_core::corpus;
//! use paca_core::dyadic::Dyadic;
//! use paca_core::prob::{acceptance_prob_dp, acceptance_prob_enum, Budget};
//!
//! // Two cells with countdown gadgets accept exactly when their four-way
//! // coin targets agree: probability 1/4, reported exactly by both oracles.
//! let acceptor = corpus::at_most_one_one();
//! let input = Configuration::from_symbols("11").unwrap();
//! let budget = Budget::default();
//! let forwarded = acceptance_prob_dp(&acceptor, &input, 7, &budget).unwrap();
//! let enumerated = acceptance_prob_enum(&acceptor, &input, 7, &budget).unwrap();
//! assert_eq!(forwarded, enumerated);
//! assert_eq!(forwarded, Dyadic::new(1u8.into(), 2));
//! ```

#![no_std]

extern crate alloc;

pub mod automaton;
pub mod corpus;
pub mod dyadic;
pub mod langs;
pub mod name;
pub mod prob;
pub mod ratio;
pub(crate) mod sync;
pub mod transforms;

pub use automaton::{
    Accepting, Automaton, CaError, Configuration, LocalRule, Paca, RandomTape, RunOutcome,
    SpaceTimeDiagram, StateSet, StateUniverse, StateVal, VirtualPaca,
};
pub use dyadic::Dyadic;
pub use name::Name;
pub use ratio::Ratio;
