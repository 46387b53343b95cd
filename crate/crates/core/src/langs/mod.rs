//! Subregular language toolkit.
//!
//! Words here are plain symbol sequences, independent of any automaton. The
//! toolkit covers:
//!
//! * strictly local specs (allowed prefixes, infixes, suffixes) — [`SltSpec`],
//! * weighted local specs: a single linear threshold over length-`ℓ` infix
//!   counts with prefix/suffix sets — [`LlinSpec`], plus a streaming
//!   single-counter scanner,
//! * Boolean expressions over recognizer atoms (threshold counts, prefix and
//!   suffix sets, the two spec kinds) — [`LangExpr`],
//! * threshold normalization: rescaling a weighted spec to threshold 1 with a
//!   certified gap and weights of the form `k − log(n+1)` so every per-infix
//!   acceptance probability `2^{−α(m)}` is dyadic — [`normalize_llin`],
//! * exhaustive bounded-length equivalence of membership oracles —
//!   [`bounded_equivalence`].
//!
//! All arithmetic is exact: rational weights are compared as big rationals,
//! and log-form weight sums are compared through integer product form
//! (`Σ c_m · (k − log(n_m+1)) ≤ θ  ⇔  Π (n_m+1)^{c_m} ≥ 2^{kN−θ}`, suitably
//! cleared of denominators). The empty word is excluded from every language.

mod equivalence;
mod expr;
mod llin;
mod normalize;
mod slt;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::name::Name;

pub use equivalence::{bounded_equivalence, words_of_length, EquivalenceResult};
pub use expr::{eval_expr, ltt_decomposition, LangExpr};
pub use llin::{count_occurrences, infix_counts, llin_membership, LlinScanner, LlinSpec, Weights};
pub use normalize::{gap_holds, normalize_llin, NormalizedLlin};
pub use slt::{slt_membership, slt_to_llin, SltSpec};

/// A word: a nonempty sequence of symbols (emptiness is checked where the
/// definitions require it, not at the type level, since prefix/suffix sets
/// legitimately contain the empty word).
pub type Word = Vec<Name>;

/// Builds a word from single-character symbols.
pub fn word(s: &str) -> Word {
    s.chars().map(Name::from_char).collect()
}

/// Renders a word as the concatenation of its symbol names.
pub fn word_to_string(w: &[Name]) -> String {
    let mut s = String::new();
    for n in w {
        s.push_str(n.as_str());
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LangError {
    EmptyWord,
    SymbolOutsideAlphabet(Name),
    /// Atoms of one expression must share a single alphabet.
    AlphabetMismatch,
    BadSpec(String),
    /// Attainable-value enumeration exceeded its budget.
    BudgetExceeded { what: &'static str },
    Overflow,
}

impl fmt::Display for LangError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LangError::EmptyWord => write!(f, "the empty word is not in any language"),
            LangError::SymbolOutsideAlphabet(n) => write!(f, "symbol {n} outside the alphabet"),
            LangError::AlphabetMismatch => write!(f, "expression atoms use different alphabets"),
            LangError::BadSpec(why) => write!(f, "bad language spec: {why}"),
            LangError::BudgetExceeded { what } => write!(f, "budget exceeded for {what}"),
            LangError::Overflow => write!(f, "arithmetic overflow in language spec"),
        }
    }
}

pub(crate) fn check_word(alphabet: &[Name], w: &[Name]) -> Result<(), LangError> {
    if w.is_empty() {
        return Err(LangError::EmptyWord);
    }
    for s in w {
        if !alphabet.contains(s) {
            return Err(LangError::SymbolOutsideAlphabet(*s));
        }
    }
    Ok(())
}

/// Prefix of length `ell`, or the word itself if shorter.
pub fn prefix_window(w: &[Name], ell: usize) -> Vec<Name> {
    w[..w.len().min(ell)].to_vec()
}

/// Suffix of length `ell`, or the word itself if shorter.
pub fn suffix_window(w: &[Name], ell: usize) -> Vec<Name> {
    w[w.len().saturating_sub(ell)..].to_vec()
}
