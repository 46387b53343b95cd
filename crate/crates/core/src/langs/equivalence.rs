//! Exhaustive bounded-length equivalence of membership oracles.

use alloc::vec::Vec;

use crate::name::Name;

use super::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceResult {
    Equal,
    /// First disagreement in length-lexicographic order.
    Counterexample(Word),
}

/// All words of the given length over the alphabet, in lexicographic order
/// (by the order symbols appear in `alphabet`).
pub fn words_of_length(alphabet: &[Name], len: usize) -> Vec<Word> {
    assert!(len >= 1, "languages contain no empty word");
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; len];
    loop {
        out.push(idx.iter().map(|&i| alphabet[i]).collect());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < alphabet.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Compares two membership oracles on every word of length `1..=n_max`,
/// returning the first counterexample in length-lexicographic order.
pub fn bounded_equivalence<E>(
    mut a: impl FnMut(&[Name]) -> Result<bool, E>,
    mut b: impl FnMut(&[Name]) -> Result<bool, E>,
    alphabet: &[Name],
    n_max: usize,
) -> Result<EquivalenceResult, E> {
    for len in 1..=n_max {
        for w in words_of_length(alphabet, len) {
            if a(&w)? != b(&w)? {
                return Ok(EquivalenceResult::Counterexample(w));
            }
        }
    }
    Ok(EquivalenceResult::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::{count_occurrences, word};

    #[test]
    fn oracle_equals_itself() {
        let th1 = |w: &[Name]| -> Result<bool, ()> { Ok(count_occurrences(w, &word("1")) <= 1) };
        assert_eq!(
            bounded_equivalence(th1, th1, &word("01"), 6).unwrap(),
            EquivalenceResult::Equal
        );
    }

    #[test]
    fn first_counterexample_is_minimal() {
        let th1 = |w: &[Name]| -> Result<bool, ()> { Ok(count_occurrences(w, &word("1")) <= 1) };
        let th2 = |w: &[Name]| -> Result<bool, ()> { Ok(count_occurrences(w, &word("1")) <= 2) };
        assert_eq!(
            bounded_equivalence(th1, th2, &word("01"), 6).unwrap(),
            EquivalenceResult::Counterexample(word("11"))
        );
    }
}
