//! Boolean expressions over recognizer atoms.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::name::Name;
use crate::ratio::Ratio;

use super::llin::{llin_membership, LlinSpec, Weights};
use super::slt::{slt_membership, SltSpec};
use super::{check_word, count_occurrences, LangError, Word};

/// An expression tree over recognizer atoms. Complement is always taken with
/// respect to `Σ⁺` of the (shared) alphabet.
#[derive(Clone, Debug)]
pub enum LangExpr {
    Slt(SltSpec),
    Llin(LlinSpec),
    /// `Th(m, θ) = {w : |w|_m ≤ θ}` for an arbitrary infix `m`.
    Threshold {
        alphabet: Vec<Name>,
        infix: Word,
        theta: u64,
    },
    /// `π Σ*`: words with an allowed prefix.
    PrefixSet {
        alphabet: Vec<Name>,
        words: BTreeSet<Word>,
    },
    /// `Σ* σ`: words with an allowed suffix.
    SuffixSet {
        alphabet: Vec<Name>,
        words: BTreeSet<Word>,
    },
    Union(Vec<LangExpr>),
    Inter(Vec<LangExpr>),
    Not(Box<LangExpr>, Vec<Name>),
}

impl LangExpr {
    /// The shared alphabet; errors when atoms disagree.
    pub fn alphabet(&self) -> Result<Vec<Name>, LangError> {
        match self {
            LangExpr::Slt(s) => Ok(s.alphabet.clone()),
            LangExpr::Llin(s) => Ok(s.alphabet.clone()),
            LangExpr::Threshold { alphabet, .. }
            | LangExpr::PrefixSet { alphabet, .. }
            | LangExpr::SuffixSet { alphabet, .. } => Ok(alphabet.clone()),
            LangExpr::Union(args) | LangExpr::Inter(args) => {
                let mut iter = args.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| LangError::BadSpec("empty Boolean combination".into()))?
                    .alphabet()?;
                for arg in iter {
                    if arg.alphabet()? != first {
                        return Err(LangError::AlphabetMismatch);
                    }
                }
                Ok(first)
            }
            LangExpr::Not(inner, alphabet) => {
                if inner.alphabet()? != *alphabet {
                    return Err(LangError::AlphabetMismatch);
                }
                Ok(alphabet.clone())
            }
        }
    }
}

/// Structural evaluation of an expression on a word.
pub fn eval_expr(expr: &LangExpr, w: &[Name]) -> Result<bool, LangError> {
    check_word(&expr.alphabet()?, w)?;
    eval_unchecked(expr, w)
}

fn eval_unchecked(expr: &LangExpr, w: &[Name]) -> Result<bool, LangError> {
    Ok(match expr {
        LangExpr::Slt(s) => slt_membership(s, w)?,
        LangExpr::Llin(s) => llin_membership(s, w)?,
        LangExpr::Threshold { infix, theta, .. } => count_occurrences(w, infix) <= *theta,
        LangExpr::PrefixSet { words, .. } => {
            words.iter().any(|p| w.len() >= p.len() && w[..p.len()] == **p)
        }
        LangExpr::SuffixSet { words, .. } => words
            .iter()
            .any(|s| w.len() >= s.len() && w[w.len() - s.len()..] == **s),
        LangExpr::Union(args) => {
            let mut any = false;
            for arg in args {
                if eval_unchecked(arg, w)? {
                    any = true;
                    break;
                }
            }
            any
        }
        LangExpr::Inter(args) => {
            let mut all = true;
            for arg in args {
                if !eval_unchecked(arg, w)? {
                    all = false;
                    break;
                }
            }
            all
        }
        LangExpr::Not(inner, _) => !eval_unchecked(inner, w)?,
    })
}

/// Rewrites an integer-weight spec as a Boolean combination of threshold
/// atoms and a zero-weight remainder:
/// `L = ⋃_{i=0}^{r} (Th(µ, i) ∩ L_i) ∖ Th(µ, i−1)`, each `L_i` the spec with
/// `µ`'s weight removed and the threshold reduced by `i·α(µ)`, recursively.
pub fn ltt_decomposition(spec: &LlinSpec) -> Result<LangExpr, LangError> {
    let table = match &spec.weights {
        Weights::Rational(t) => t.clone(),
        Weights::LogForm { .. } => {
            return Err(LangError::BadSpec(
                "decomposition expects plain integer weights".into(),
            ))
        }
    };
    if !spec.theta.is_integer() {
        return Err(LangError::BadSpec("decomposition expects an integer threshold".into()));
    }
    for a in table.values() {
        if !a.is_integer() {
            return Err(LangError::BadSpec("decomposition expects integer weights".into()));
        }
    }
    decompose(spec, &table)
}

fn ratio_to_u64(r: &Ratio) -> Result<u64, LangError> {
    u64::try_from(r.numerator()).map_err(|_| LangError::Overflow)
}

fn decompose(
    spec: &LlinSpec,
    table: &alloc::collections::BTreeMap<Word, Ratio>,
) -> Result<LangExpr, LangError> {
    let positive: Option<(&Word, &Ratio)> = table.iter().find(|(_, a)| !a.is_zero());
    let (mu, alpha_mu) = match positive {
        None => return Ok(LangExpr::Llin(spec.clone())),
        Some(p) => p,
    };
    let alpha = ratio_to_u64(alpha_mu)?;
    let theta = ratio_to_u64(&spec.theta)?;
    let r = theta / alpha;
    let mut terms = Vec::new();
    for i in 0..=r {
        let mut reduced = table.clone();
        reduced.insert(mu.clone(), Ratio::zero());
        let inner_spec = LlinSpec::new(
            spec.alphabet.clone(),
            spec.ell,
            spec.prefixes.clone(),
            spec.suffixes.clone(),
            Weights::Rational(reduced.clone()),
            Ratio::from_u64(theta - i * alpha),
        )?;
        let inner = decompose(&inner_spec, &reduced)?;
        let mut factors = alloc::vec![
            LangExpr::Threshold {
                alphabet: spec.alphabet.clone(),
                infix: mu.clone(),
                theta: i,
            },
            inner,
        ];
        if i > 0 {
            factors.push(LangExpr::Not(
                Box::new(LangExpr::Threshold {
                    alphabet: spec.alphabet.clone(),
                    infix: mu.clone(),
                    theta: i - 1,
                }),
                spec.alphabet.clone(),
            ));
        }
        terms.push(LangExpr::Inter(factors));
    }
    Ok(LangExpr::Union(terms))
}
