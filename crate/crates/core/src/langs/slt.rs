//! Strictly local specs: allowed prefixes, infixes, and suffixes.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::name::Name;
use crate::ratio::Ratio;

use super::llin::{LlinSpec, Weights};
use super::{check_word, infix_counts, prefix_window, suffix_window, LangError, Word};

/// A strictly local spec: `w` is a member when its length-`ℓ−1` prefix and
/// suffix are allowed and every length-`ℓ` infix lies in `allowed`.
#[derive(Clone, Debug)]
pub struct SltSpec {
    pub alphabet: Vec<Name>,
    pub ell: usize,
    pub prefixes: Option<BTreeSet<Word>>,
    pub suffixes: Option<BTreeSet<Word>>,
    pub allowed: BTreeSet<Word>,
}

impl SltSpec {
    pub fn new(
        alphabet: Vec<Name>,
        ell: usize,
        prefixes: Option<BTreeSet<Word>>,
        suffixes: Option<BTreeSet<Word>>,
        allowed: BTreeSet<Word>,
    ) -> Result<SltSpec, LangError> {
        if ell == 0 {
            return Err(LangError::BadSpec("window length must be positive".into()));
        }
        for set in [&prefixes, &suffixes].into_iter().flatten() {
            for w in set.iter() {
                if w.len() >= ell {
                    return Err(LangError::BadSpec(
                        "prefix/suffix sets live below the window length".into(),
                    ));
                }
            }
        }
        for m in &allowed {
            if m.len() != ell {
                return Err(LangError::BadSpec("allowed infix of a wrong length".into()));
            }
        }
        Ok(SltSpec {
            alphabet,
            ell,
            prefixes,
            suffixes,
            allowed,
        })
    }
}

pub fn slt_membership(spec: &SltSpec, w: &[Name]) -> Result<bool, LangError> {
    check_word(&spec.alphabet, w)?;
    let prefix_ok = match &spec.prefixes {
        None => true,
        Some(set) => set.contains(&prefix_window(w, spec.ell - 1)),
    };
    let suffix_ok = match &spec.suffixes {
        None => true,
        Some(set) => set.contains(&suffix_window(w, spec.ell - 1)),
    };
    if !prefix_ok || !suffix_ok {
        return Ok(false);
    }
    Ok(infix_counts(w, spec.ell)
        .keys()
        .all(|m| spec.allowed.contains(m)))
}

/// Embeds a strictly local spec as a weighted spec: disallowed infixes weigh
/// one, allowed infixes weigh zero, threshold one half. A single disallowed
/// occurrence already exceeds the threshold.
pub fn slt_to_llin(spec: &SltSpec) -> Result<LlinSpec, LangError> {
    let mut table = alloc::vec::Vec::new();
    for m in all_windows(&spec.alphabet, spec.ell) {
        let weight = if spec.allowed.contains(&m) {
            Ratio::zero()
        } else {
            Ratio::one()
        };
        table.push((m, weight));
    }
    LlinSpec::new(
        spec.alphabet.clone(),
        spec.ell,
        spec.prefixes.clone(),
        spec.suffixes.clone(),
        Weights::rational(table),
        Ratio::from_u64s(1, 2),
    )
}

/// All words of length `len` over the alphabet, in lexicographic order.
pub(crate) fn all_windows(alphabet: &[Name], len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; len];
    if len == 0 {
        out.push(Vec::new());
        return out;
    }
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
