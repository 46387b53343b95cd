//! Exact acceptance probabilities of construction outputs, in terms of their
//! components.
//!
//! Every product in this module runs its slots on disjoint coins, so slot
//! acceptances are independent events and the output's acceptance probability
//! is an exact function of the slot probabilities:
//!
//! * round-robin over copies accepts when any copy does;
//! * the recorder sweep with a threshold accepts when at least `j` copies do;
//! * the two-slot recorder sweep without subsets accepts when both slots do.
//!
//! The test suite validates each law against the generic oracles on small
//! instances before the laws are used at sizes where forwarding the full
//! product distribution would be hopeless.

use crate::dyadic::Dyadic;
use crate::ratio::binomial_tail_dyadic;

/// `Pr[any of m independent copies accepts] = 1 − (1−q)^m`.
pub fn any_of_copies(q: &Dyadic, m: u32) -> Dyadic {
    q.complement().pow(m).complement()
}

/// `Pr[at least j of m independent copies accept]`, the exact binomial tail.
pub fn threshold_of_copies(q: &Dyadic, m: u32, j: u32) -> Dyadic {
    binomial_tail_dyadic(m, j, q)
}

/// `Pr[both independent slots accept] = a·b`.
pub fn and_independent(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a * b
}

/// `Pr[either independent slot accepts] = 1 − (1−a)(1−b)`.
pub fn or_independent(a: &Dyadic, b: &Dyadic) -> Dyadic {
    (&a.complement() * &b.complement()).complement()
}
