//! JSON file formats for automata, language specs, and probabilities.
//!
//! Automaton files carry either explicit rule tables (keys `"l,c,r"`, values
//! the successor state name; the loader rejects incomplete tables) or a
//! builtin reference `{"builtin": name, "params": {…}}` naming a fixture or
//! construction output, with the construction's operands nested inside the
//! parameters. Transform outputs additionally embed their report under a
//! `"provenance"` key.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use paca_core::automaton::{Accepting, LocalRule, Paca, StateSet, StateVal};
use paca_core::dyadic::Dyadic;
use paca_core::langs::{LangExpr, LlinSpec, SltSpec, Weights, Word};
use paca_core::name::Name;
use paca_core::ratio::Ratio;
use paca_core::transforms::TransformReport;

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomatonFile {
    #[serde(default)]
    pub states: Vec<String>,
    pub boundary: String,
    #[serde(default)]
    pub input_alphabet: Vec<String>,
    #[serde(default)]
    pub accepting: Vec<String>,
    pub rule0: RuleSpec,
    pub rule1: RuleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<HorizonSpec>,
    /// Extension: a `2^k` rule list for rule-set expansion inputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleSpec {
    Builtin {
        builtin: String,
        #[serde(default)]
        params: Value,
    },
    Table(BTreeMap<String, String>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HorizonSpec {
    pub kind: String,
    pub value: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub transform: String,
    pub parameters: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub derived_horizon: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbJson {
    pub num: String,
    pub exp: u32,
}

impl ProbJson {
    pub fn from_dyadic(d: &Dyadic) -> ProbJson {
        ProbJson {
            num: d.numerator().to_string(),
            exp: d.exponent(),
        }
    }
}

fn name_of(s: &str) -> Result<Name, CliError> {
    Name::new(s).ok_or_else(|| CliError::Format(format!("bad symbol name: {s:?}")))
}

fn sym(s: &str) -> Result<StateVal, CliError> {
    Ok(StateVal::Sym(name_of(s)?))
}

/// Parses a word given as concatenated single-character symbols.
pub fn parse_word(s: &str) -> Result<Word, CliError> {
    if s.is_empty() {
        return Err(CliError::Format("empty word".into()));
    }
    Ok(s.chars().map(Name::from_char).collect())
}

/// Builds a table-backed automaton from its file form.
pub fn automaton_from_file(file: &AutomatonFile) -> Result<Paca, CliError> {
    if let RuleSpec::Builtin { builtin, params } = &file.rule0 {
        return crate::registry::resolve(builtin, params);
    }
    let states: Vec<StateVal> = file
        .states
        .iter()
        .map(|s| sym(s))
        .collect::<Result<_, _>>()?;
    let boundary = sym(&file.boundary)?;
    let alphabet: Vec<StateVal> = file
        .input_alphabet
        .iter()
        .map(|s| sym(s))
        .collect::<Result<_, _>>()?;
    let accepting: Vec<StateVal> = file
        .accepting
        .iter()
        .map(|s| sym(s))
        .collect::<Result<_, _>>()?;
    let table0 = parse_table(&file.rule0, &states, &boundary)?;
    let table1 = parse_table(&file.rule1, &states, &boundary)?;
    let deterministic = table0 == table1;
    let paca = Paca {
        label: "file".into(),
        states: StateSet::explicit(states, boundary).map_err(|e| CliError::Format(e.to_string()))?,
        input_alphabet: alphabet,
        accepting: Accepting::set(accepting),
        rule0: LocalRule::table(table0),
        rule1: LocalRule::table(table1),
        deterministic,
        horizon: file.horizon.as_ref().map(|h| h.value),
    };
    paca.validate().map_err(|e| CliError::Format(e.to_string()))?;
    Ok(paca)
}

type Table = BTreeMap<(StateVal, StateVal, StateVal), StateVal>;

fn parse_table(
    spec: &RuleSpec,
    states: &[StateVal],
    boundary: &StateVal,
) -> Result<Table, CliError> {
    let entries = match spec {
        RuleSpec::Table(map) => map,
        RuleSpec::Builtin { .. } => {
            return Err(CliError::Format(
                "mixed builtin and table rules in one file".into(),
            ))
        }
    };
    let mut table: Table = BTreeMap::new();
    for (key, value) in entries {
        let parts: Vec<&str> = key.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::Format(format!("bad rule key: {key:?}")));
        }
        let triple = (sym(parts[0])?, sym(parts[1])?, sym(parts[2])?);
        table.insert(triple, sym(value)?);
    }
    // Totality over (Q ∪ {$}) × Q × (Q ∪ {$}).
    let mut domain = states.to_vec();
    domain.push(boundary.clone());
    for l in &domain {
        for c in states {
            for r in &domain {
                let key = (l.clone(), c.clone(), r.clone());
                if !table.contains_key(&key) {
                    return Err(CliError::Format(format!(
                        "rule table misses ({l},{c},{r})"
                    )));
                }
                let image = &table[&key];
                if !states.contains(image) {
                    return Err(CliError::Format(format!(
                        "rule image {image} outside the state set"
                    )));
                }
            }
        }
    }
    Ok(table)
}

/// Builds a multi-rule acceptor from the extended file form (a `"rules"`
/// list of tables), the input to rule-set expansion.
pub fn virtual_from_file(file: &AutomatonFile) -> Result<paca_core::automaton::VirtualPaca, CliError> {
    let rules_spec = file
        .rules
        .as_ref()
        .filter(|r| !r.is_empty())
        .ok_or_else(|| CliError::Format("expansion needs a nonempty \"rules\" list".into()))?;
    let mut rules = Vec::new();
    let mut base: Option<Paca> = None;
    for spec in rules_spec {
        if matches!(spec, RuleSpec::Builtin { .. }) {
            return Err(CliError::Format("expansion rules must be tables".into()));
        }
        let fake = AutomatonFile {
            rule0: spec.clone(),
            rule1: spec.clone(),
            rules: None,
            ..file.clone()
        };
        let parsed = automaton_from_file(&fake)?;
        rules.push(parsed.rule0.clone());
        base.get_or_insert(parsed);
    }
    let base = base.expect("at least one rule");
    Ok(paca_core::automaton::VirtualPaca {
        label: "expansion-input".into(),
        states: base.states,
        input_alphabet: base.input_alphabet,
        accepting: base.accepting,
        rules,
        horizon: base.horizon,
    })
}

/// File form of a builtin-backed automaton (fixtures, construction outputs).
pub fn builtin_file(
    builtin: &str,
    params: Value,
    alphabet: &[StateVal],
    boundary: &StateVal,
    horizon: Option<u64>,
    report: Option<&TransformReport>,
) -> AutomatonFile {
    AutomatonFile {
        states: Vec::new(),
        boundary: boundary.to_string(),
        input_alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
        accepting: Vec::new(),
        rule0: RuleSpec::Builtin {
            builtin: builtin.to_string(),
            params: params.clone(),
        },
        rule1: RuleSpec::Builtin {
            builtin: builtin.to_string(),
            params,
        },
        horizon: horizon.map(|value| HorizonSpec {
            kind: "const".into(),
            value,
        }),
        rules: None,
        provenance: report.map(|r| Provenance {
            transform: builtin.to_string(),
            parameters: r.parameters.clone(),
            notes: r.notes.clone(),
            derived_horizon: r.derived_horizon,
        }),
    }
}

// ---------------------------------------------------------------------------
// Language spec files.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LangFile {
    Llin {
        alphabet: Vec<String>,
        ell: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prefixes: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        suffixes: Option<Vec<String>>,
        weights: Vec<WeightEntry>,
        theta: RatioJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        log_form_k: Option<u32>,
    },
    Slt {
        alphabet: Vec<String>,
        ell: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prefixes: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        suffixes: Option<Vec<String>>,
        allowed: Vec<String>,
    },
    Th {
        alphabet: Vec<String>,
        infix: String,
        theta: u64,
    },
    Prefix {
        alphabet: Vec<String>,
        words: Vec<String>,
    },
    Suffix {
        alphabet: Vec<String>,
        words: Vec<String>,
    },
    Expr {
        op: String,
        args: Vec<LangFile>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightEntry {
    pub m: String,
    pub num: u64,
    pub den: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioJson {
    pub num: u64,
    pub den: u64,
}

fn parse_alphabet(names: &[String]) -> Result<Vec<Name>, CliError> {
    names.iter().map(|s| name_of(s)).collect()
}

fn parse_words(words: &[String]) -> Result<Vec<Word>, CliError> {
    words
        .iter()
        .map(|w| {
            if w.is_empty() {
                Ok(Vec::new())
            } else {
                parse_word(w)
            }
        })
        .collect()
}

/// Warn-and-drop filter for prefix/suffix windows at or above the window
/// length (the membership conditions can never consult them).
fn window_sets(
    words: Option<&Vec<String>>,
    ell: usize,
    warnings: &mut Vec<String>,
) -> Result<Option<std::collections::BTreeSet<Word>>, CliError> {
    let Some(words) = words else { return Ok(None) };
    let mut set = std::collections::BTreeSet::new();
    for w in parse_words(words)? {
        if w.len() >= ell {
            warnings.push(format!(
                "dropping prefix/suffix entry of length {} (window length {ell})",
                w.len()
            ));
            continue;
        }
        set.insert(w);
    }
    Ok(Some(set))
}

pub fn lang_from_file(file: &LangFile, warnings: &mut Vec<String>) -> Result<LangExpr, CliError> {
    Ok(match file {
        LangFile::Llin {
            alphabet,
            ell,
            prefixes,
            suffixes,
            weights,
            theta,
            log_form_k,
        } => {
            let alpha = parse_alphabet(alphabet)?;
            let prefixes = window_sets(prefixes.as_ref(), *ell, warnings)?;
            let suffixes = window_sets(suffixes.as_ref(), *ell, warnings)?;
            let spec_weights = match log_form_k {
                Some(k) => {
                    let mut table = BTreeMap::new();
                    for e in weights {
                        if e.den != 1 {
                            return Err(CliError::Format(
                                "log-form weights take integer indices".into(),
                            ));
                        }
                        table.insert(parse_word(&e.m)?, num_bigint::BigUint::from(e.num));
                    }
                    Weights::LogForm { k: *k, table }
                }
                None => {
                    let mut entries = Vec::new();
                    for e in weights {
                        entries.push((parse_word(&e.m)?, Ratio::from_u64s(e.num, e.den)));
                    }
                    Weights::rational(entries)
                }
            };
            let spec = LlinSpec::new(
                alpha,
                *ell,
                prefixes,
                suffixes,
                spec_weights,
                Ratio::from_u64s(theta.num, theta.den),
            )
            .map_err(|e| CliError::Format(e.to_string()))?;
            LangExpr::Llin(spec)
        }
        LangFile::Slt {
            alphabet,
            ell,
            prefixes,
            suffixes,
            allowed,
        } => {
            let alpha = parse_alphabet(alphabet)?;
            let prefixes = window_sets(prefixes.as_ref(), *ell, warnings)?;
            let suffixes = window_sets(suffixes.as_ref(), *ell, warnings)?;
            let allowed = parse_words(allowed)?.into_iter().collect();
            let spec = SltSpec::new(alpha, *ell, prefixes, suffixes, allowed)
                .map_err(|e| CliError::Format(e.to_string()))?;
            LangExpr::Slt(spec)
        }
        LangFile::Th {
            alphabet,
            infix,
            theta,
        } => LangExpr::Threshold {
            alphabet: parse_alphabet(alphabet)?,
            infix: parse_word(infix)?,
            theta: *theta,
        },
        LangFile::Prefix { alphabet, words } => LangExpr::PrefixSet {
            alphabet: parse_alphabet(alphabet)?,
            words: parse_words(words)?.into_iter().collect(),
        },
        LangFile::Suffix { alphabet, words } => LangExpr::SuffixSet {
            alphabet: parse_alphabet(alphabet)?,
            words: parse_words(words)?.into_iter().collect(),
        },
        LangFile::Expr { op, args } => {
            let parsed: Vec<LangExpr> = args
                .iter()
                .map(|a| lang_from_file(a, warnings))
                .collect::<Result<_, _>>()?;
            match op.as_str() {
                "union" => LangExpr::Union(parsed),
                "inter" => LangExpr::Inter(parsed),
                "not" => {
                    if parsed.len() != 1 {
                        return Err(CliError::Format("not takes exactly one argument".into()));
                    }
                    let inner = parsed.into_iter().next().expect("checked");
                    let alphabet = inner
                        .alphabet()
                        .map_err(|e| CliError::Format(e.to_string()))?;
                    LangExpr::Not(Box::new(inner), alphabet)
                }
                other => return Err(CliError::Format(format!("unknown operator {other:?}"))),
            }
        }
    })
}

/// Serializes a language expression back to its file form.
pub fn lang_to_file(expr: &LangExpr) -> Result<LangFile, CliError> {
    let words_out = |set: &std::collections::BTreeSet<Word>| -> Vec<String> {
        set.iter().map(|w| word_string(w)).collect()
    };
    Ok(match expr {
        LangExpr::Llin(spec) => {
            let (weights, log_form_k) = match &spec.weights {
                Weights::Rational(table) => (
                    table
                        .iter()
                        .map(|(m, a)| WeightEntry {
                            m: word_string(m),
                            num: u64::try_from(a.numerator()).unwrap_or(u64::MAX),
                            den: u64::try_from(a.denominator()).unwrap_or(u64::MAX),
                        })
                        .collect(),
                    None,
                ),
                Weights::LogForm { k, table } => (
                    table
                        .iter()
                        .map(|(m, n)| WeightEntry {
                            m: word_string(m),
                            num: u64::try_from(n).unwrap_or(u64::MAX),
                            den: 1,
                        })
                        .collect(),
                    Some(*k),
                ),
            };
            LangFile::Llin {
                alphabet: spec.alphabet.iter().map(|n| n.as_str().to_string()).collect(),
                ell: spec.ell,
                prefixes: spec.prefixes.as_ref().map(|s| words_out(s)),
                suffixes: spec.suffixes.as_ref().map(|s| words_out(s)),
                weights,
                theta: RatioJson {
                    num: u64::try_from(spec.theta.numerator()).unwrap_or(u64::MAX),
                    den: u64::try_from(spec.theta.denominator()).unwrap_or(u64::MAX),
                },
                log_form_k,
            }
        }
        LangExpr::Slt(spec) => LangFile::Slt {
            alphabet: spec.alphabet.iter().map(|n| n.as_str().to_string()).collect(),
            ell: spec.ell,
            prefixes: spec.prefixes.as_ref().map(|s| words_out(s)),
            suffixes: spec.suffixes.as_ref().map(|s| words_out(s)),
            allowed: words_out(&spec.allowed),
        },
        LangExpr::Threshold {
            alphabet,
            infix,
            theta,
        } => LangFile::Th {
            alphabet: alphabet.iter().map(|n| n.as_str().to_string()).collect(),
            infix: word_string(infix),
            theta: *theta,
        },
        LangExpr::PrefixSet { alphabet, words } => LangFile::Prefix {
            alphabet: alphabet.iter().map(|n| n.as_str().to_string()).collect(),
            words: words_out(words),
        },
        LangExpr::SuffixSet { alphabet, words } => LangFile::Suffix {
            alphabet: alphabet.iter().map(|n| n.as_str().to_string()).collect(),
            words: words_out(words),
        },
        LangExpr::Union(args) => LangFile::Expr {
            op: "union".into(),
            args: args.iter().map(lang_to_file).collect::<Result<_, _>>()?,
        },
        LangExpr::Inter(args) => LangFile::Expr {
            op: "inter".into(),
            args: args.iter().map(lang_to_file).collect::<Result<_, _>>()?,
        },
        LangExpr::Not(inner, _) => LangFile::Expr {
            op: "not".into(),
            args: vec![lang_to_file(inner)?],
        },
    })
}

pub fn word_string(w: &[Name]) -> String {
    w.iter().map(|n| n.as_str()).collect()
}
