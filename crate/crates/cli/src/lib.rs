//! Command-line front end for the automaton laboratory: simulation, exact
//! probabilities, classification, constructions, language queries,
//! equivalence checks, and space-time diagrams.
//!
//! Exit codes: 0 success/true, 1 false/counterexample, 2 contract violation,
//! 3 usage or format error, 4 budget exceeded.

pub mod error;
pub mod formats;
pub mod registry;
pub mod render;
pub mod tape;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use paca_core::automaton::{run, space_time, Configuration, Paca, RunOutcome};
use paca_core::corpus::{self, FixtureArtifact};
use paca_core::dyadic::Dyadic;
use paca_core::langs::{bounded_equivalence, eval_expr, EquivalenceResult, LangExpr};
use paca_core::name::Name;
use paca_core::prob::{
    acceptance_prob_dp, acceptance_prob_enum, classify_probability, critical_cells,
    independence_check, validate_horizon, Budget, Classification, ErrorMode, HorizonCheck,
    IndependenceOutcome,
};
use paca_core::ratio::Ratio;
use paca_core::transforms::{
    derandomize_one_sided, expand_rules, intersect_paca, paca_from_llin, reduce_error_one_sided,
    reduce_error_two_sided, union_paca, DerandomizeParams, TransformReport,
};

use error::CliError;
use formats::{
    automaton_from_file, builtin_file, lang_from_file, parse_word, virtual_from_file,
    word_string, AutomatonFile, LangFile, ProbJson,
};

const USAGE: &str = "paca <verb> [flags]

verbs:
  run           --automaton F --input W (--tape R0;R1;.. | --seed N) [--steps K] [--json]
  prob          --automaton F --input W --horizon T [--method dp|enum] [--json]
  classify      --automaton F --input W --horizon T --mode one_sided:P|two_sided:P [--json]
  critical      --automaton F --input W --step T [--json]
  independence  --automaton F --input W --i I --j J --step T [--json]
  validate      --automaton F --input W --horizon T [--json]
  transform     NAME --in F [--in2 G] --out H [--p R] [--p2 R] [--p-target R]
                [--t-in N] [--t-in2 N] [--budget M] [--calibrate-len N] [--stage pre]
                (NAME: reduce-one-sided | reduce-two-sided | union | intersect |
                       derandomize | compile-llin | expand)
  lang          --spec F --word W [--json]
  equiv         --a F --b G --max-len N [--mode daca|classify:P|classify:two_sided:P]
                [--horizon-a T] [--horizon-b T]
  diagram       --automaton F --input W --steps N [--tape ..|--seed N] [--format text|svg] [--out F]
  fixtures      [--export DIR] [--json]

environment: PACA_BUDGET=<n|large> scales the enumeration budgets.";

struct Args {
    verb: String,
    positional: Vec<String>,
    flags: BTreeMap<String, String>,
    json: bool,
}

fn parse_args(argv: &[String]) -> Result<Args, CliError> {
    let mut iter = argv.iter();
    let verb = iter
        .next()
        .cloned()
        .ok_or_else(|| CliError::Usage(USAGE.into()))?;
    let mut flags = BTreeMap::new();
    let mut positional = Vec::new();
    let mut json = false;
    while let Some(arg) = iter.next() {
        if let Some(name) = arg.strip_prefix("--") {
            if name == "json" {
                json = true;
                continue;
            }
            let value = iter
                .next()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("flag --{name} needs a value")))?;
            flags.insert(name.to_string(), value);
        } else {
            positional.push(arg.clone());
        }
    }
    Ok(Args {
        verb,
        positional,
        flags,
        json,
    })
}

impl Args {
    fn need(&self, key: &str) -> Result<&str, CliError> {
        self.flags
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Usage(format!("missing --{key}")))
    }

    fn opt(&self, key: &str) -> Option<&str> {
        self.flags.get(key).map(String::as_str)
    }

    fn need_u64(&self, key: &str) -> Result<u64, CliError> {
        self.need(key)?
            .parse()
            .map_err(|_| CliError::Usage(format!("--{key} takes a number")))
    }

    fn need_ratio(&self, key: &str) -> Result<Ratio, CliError> {
        Ratio::parse(self.need(key)?)
            .ok_or_else(|| CliError::Usage(format!("--{key} takes a ratio like 7/8")))
    }
}

fn budget_from_env() -> Budget {
    match std::env::var("PACA_BUDGET") {
        Ok(v) if v == "large" => Budget::large(),
        Ok(v) => match v.parse::<u64>() {
            Ok(n) => Budget {
                dp_support: n as usize,
                set_support: n as usize,
                value_enum: n as usize,
                horizon_steps: n.max(Budget::default().horizon_steps),
                ..Budget::default()
            },
            Err(_) => Budget::default(),
        },
        Err(_) => Budget::default(),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{path}: {e}")))
}

fn load_automaton(path: &str) -> Result<(Paca, AutomatonFile), CliError> {
    // Fixtures load by name as well as by file path.
    if let Some(name) = path.strip_prefix("fixture:") {
        let paca = registry::resolve("fixture", &json!({ "name": name }))?;
        let file = builtin_file(
            "fixture",
            json!({ "name": name }),
            &paca.input_alphabet,
            &paca.states.boundary,
            paca.horizon,
            None,
        );
        return Ok((paca, file));
    }
    let file: AutomatonFile = load_json(path)?;
    let paca = automaton_from_file(&file)?;
    Ok((paca, file))
}

fn input_config(word: &str) -> Result<Configuration, CliError> {
    Configuration::from_symbols(word).map_err(|e| CliError::Format(e.to_string()))
}

fn mode_from(text: &str) -> Result<ErrorMode, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["one_sided", p] => Ok(ErrorMode::OneSided(
            Ratio::parse(p).ok_or_else(|| CliError::Usage("bad error ratio".into()))?,
        )),
        ["two_sided", p] => Ok(ErrorMode::TwoSided(
            Ratio::parse(p).ok_or_else(|| CliError::Usage("bad error ratio".into()))?,
        )),
        _ => Err(CliError::Usage(
            "mode is one_sided:<p> or two_sided:<p>".into(),
        )),
    }
}

fn prob_lines(p: &Dyadic) -> String {
    format!(
        "exact: {p}\napprox: {} (approximate)\n",
        p.decimal_approx(12)
    )
}

/// Runs one invocation; returns (exit code, stdout text).
pub fn dispatch(argv: &[String]) -> Result<(i32, String), CliError> {
    let args = parse_args(argv)?;
    let budget = budget_from_env();
    match args.verb.as_str() {
        "run" => cmd_run(&args),
        "prob" => cmd_prob(&args, &budget),
        "classify" => cmd_classify(&args, &budget),
        "critical" => cmd_critical(&args, &budget),
        "independence" => cmd_independence(&args, &budget),
        "validate" => cmd_validate(&args, &budget),
        "transform" => cmd_transform(&args, &budget),
        "lang" => cmd_lang(&args),
        "equiv" => cmd_equiv(&args, &budget),
        "diagram" => cmd_diagram(&args),
        "fixtures" => cmd_fixtures(&args),
        other => Err(CliError::Usage(format!("unknown verb {other:?}\n{USAGE}"))),
    }
}

fn tape_for(args: &Args, width: usize, steps: usize) -> Result<paca_core::automaton::RandomTape, CliError> {
    if let Some(text) = args.opt("tape") {
        return tape::parse_tape(text);
    }
    if let Some(seed) = args.opt("seed") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::Usage("--seed takes a number".into()))?;
        return Ok(tape::seeded_tape(seed, steps, width));
    }
    Err(CliError::Usage("need --tape or --seed".into()))
}

fn cmd_run(args: &Args) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let steps = match args.opt("steps") {
        Some(s) => s
            .parse::<usize>()
            .map_err(|_| CliError::Usage("--steps takes a number".into()))?,
        None => aut
            .horizon
            .map(|h| h as usize)
            .ok_or_else(|| CliError::Usage("automaton declares no horizon; pass --steps".into()))?,
    };
    let tape = if aut.deterministic && args.opt("tape").is_none() && args.opt("seed").is_none() {
        paca_core::automaton::RandomTape::zeros(steps.max(1), input.len())
    } else {
        tape_for(args, input.len(), steps)?
    };
    let outcome = run(&aut, &input, &tape)?;
    let (code, text, accepted_at) = match outcome {
        RunOutcome::Accepted { step } => (0, format!("accepted at step {step}\n"), Some(step)),
        RunOutcome::RejectedWithinHorizon => (1, "rejected within the simulated steps\n".into(), None),
    };
    if args.json {
        let value = json!({"accepted": code == 0, "accepted_at": accepted_at});
        return Ok((code, format!("{value}\n")));
    }
    Ok((code, text))
}

fn cmd_prob(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let horizon = args.need_u64("horizon")? as u32;
    let p = match args.opt("method").unwrap_or("dp") {
        "dp" => acceptance_prob_dp(&aut, &input, horizon, budget)?,
        "enum" => acceptance_prob_enum(&aut, &input, horizon, budget)?,
        other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
    };
    if args.json {
        let value = json!({
            "probability": ProbJson::from_dyadic(&p),
            "approx": p.decimal_approx(12),
        });
        return Ok((0, format!("{value}\n")));
    }
    Ok((0, prob_lines(&p)))
}

fn cmd_classify(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let horizon = args.need_u64("horizon")? as u32;
    let mode = mode_from(args.need("mode")?)?;
    let p = acceptance_prob_dp(&aut, &input, horizon, budget)?;
    let verdict = classify_probability(&p, &mode)?;
    let (code, name) = match verdict {
        Classification::InLanguage => (0, "in_language"),
        Classification::NotInLanguage => (1, "not_in_language"),
        Classification::ContractViolation => (2, "contract_violation"),
    };
    if args.json {
        let value = json!({
            "classification": name,
            "probability": ProbJson::from_dyadic(&p),
        });
        return Ok((code, format!("{value}\n")));
    }
    Ok((code, format!("{name}\n{}", prob_lines(&p))))
}

fn cmd_critical(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let step = args.need_u64("step")? as u32;
    let report = critical_cells(&aut, &input, step, budget)?;
    if args.json {
        let reachable: Vec<usize> = report.reachable_states.iter().map(|s| s.len()).collect();
        let value = json!({
            "step": report.step,
            "critical": report.critical,
            "reachable_state_counts": reachable,
        });
        return Ok((0, format!("{value}\n")));
    }
    let mut out = format!("critical cells at step {step}: {:?}\n", report.critical);
    for (cell, states) in report.reachable_states.iter().enumerate() {
        let _ = writeln!(out, "  cell {cell}: {} reachable state(s)", states.len());
    }
    Ok((0, out))
}

fn cmd_independence(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let i = args.need_u64("i")? as usize;
    let j = args.need_u64("j")? as usize;
    let step = args.need_u64("step")? as u32;
    let outcome = independence_check(&aut, &input, i, j, step, budget)?;
    let (code, label, p_i, p_j, p_joint) = match &outcome {
        IndependenceOutcome::Independent { p_i, p_j, p_joint } => (0, "independent", p_i, p_j, p_joint),
        IndependenceOutcome::Dependent { p_i, p_j, p_joint } => (1, "dependent", p_i, p_j, p_joint),
    };
    if args.json {
        let value = json!({
            "outcome": label,
            "p_i": ProbJson::from_dyadic(p_i),
            "p_j": ProbJson::from_dyadic(p_j),
            "p_joint": ProbJson::from_dyadic(p_joint),
        });
        return Ok((code, format!("{value}\n")));
    }
    Ok((
        code,
        format!("{label}\np_i = {p_i}\np_j = {p_j}\np_joint = {p_joint}\n"),
    ))
}

fn cmd_validate(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let horizon = args.need_u64("horizon")?;
    let check = validate_horizon(&aut, &input, horizon as u32, budget)?;
    match check {
        HorizonCheck::Ok => Ok((0, "ok\n".into())),
        HorizonCheck::ViolatedAt(step) => Ok((1, format!("violated_at {step}\n"))),
    }
}

fn transform_params(args: &Args, keys: &[(&str, &str)]) -> Result<Value, CliError> {
    let mut map = serde_json::Map::new();
    for (flag, key) in keys {
        let value = args.need(flag)?;
        map.insert((*key).to_string(), Value::String(value.to_string()));
    }
    Ok(Value::Object(map))
}

fn write_output(path: &str, file: &AutomatonFile) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(file).map_err(|e| CliError::Format(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn embed(params: &mut Value, key: &str, inner: Value) {
    if let Value::Object(map) = params {
        map.insert(key.to_string(), inner);
    }
}

fn cmd_transform(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let name = args
        .positional
        .first()
        .cloned()
        .ok_or_else(|| CliError::Usage("transform needs a name".into()))?;
    let out_path = args.need("out")?;
    let in_path = args.need("in")?;
    let in_value: Value = load_json(in_path)?;

    let (report, builtin, params): (TransformReport, &str, Value) = match name.as_str() {
        "reduce-one-sided" => {
            let (inner, _) = load_automaton(in_path)?;
            let p = args.need_ratio("p")?;
            let p_target = args.need_ratio("p-target")?;
            let t_in = args.need_u64("t-in")? as u32;
            let report = reduce_error_one_sided(&inner, &p, &p_target, t_in)?;
            let mut params = transform_params(
                args,
                &[("p", "p"), ("p-target", "p_target"), ("t-in", "t_in")],
            )?;
            embed(&mut params, "inner", in_value);
            fixup_u64(&mut params, "t_in");
            (report, "reduce_error_one_sided", params)
        }
        "reduce-two-sided" => {
            let (inner, _) = load_automaton(in_path)?;
            let p = args.need_ratio("p")?;
            let p_target = args.need_ratio("p-target")?;
            let t_in = args.need_u64("t-in")? as u32;
            let report = reduce_error_two_sided(&inner, &p, &p_target, t_in, budget)?;
            let mut params = transform_params(
                args,
                &[("p", "p"), ("p-target", "p_target"), ("t-in", "t_in")],
            )?;
            embed(&mut params, "inner", in_value);
            fixup_u64(&mut params, "t_in");
            (report, "reduce_error_two_sided", params)
        }
        "union" | "intersect" => {
            let (a, _) = load_automaton(in_path)?;
            let in2_path = args.need("in2")?;
            let (b, _) = load_automaton(in2_path)?;
            let in2_value: Value = load_json(in2_path)?;
            let p = args.need_ratio("p")?;
            let p2 = args.need_ratio("p2")?;
            let t1 = args.need_u64("t-in")? as u32;
            let t2 = args.need_u64("t-in2")? as u32;
            let report = if name == "union" {
                union_paca(&a, &p, t1, &b, &p2, t2, budget)?
            } else {
                intersect_paca(&a, &p, t1, &b, &p2, t2, budget)?
            };
            let mut params = transform_params(
                args,
                &[
                    ("p", "p"),
                    ("p2", "p2"),
                    ("t-in", "t_in"),
                    ("t-in2", "t_in2"),
                ],
            )?;
            embed(&mut params, "inner", in_value);
            embed(&mut params, "inner2", in2_value);
            fixup_u64(&mut params, "t_in");
            fixup_u64(&mut params, "t_in2");
            let builtin = if name == "union" { "union" } else { "intersect" };
            (report, builtin, params)
        }
        "derandomize" => {
            let (inner, _) = load_automaton(in_path)?;
            let p = args.need_ratio("p")?;
            let t_in = args.need_u64("t-in")? as u32;
            let budget_m = args
                .opt("budget")
                .map(|s| s.parse::<u32>().map_err(|_| CliError::Usage("--budget takes a number".into())))
                .transpose()?;
            let calibration_len = args
                .opt("calibrate-len")
                .map(|s| s.parse::<usize>().map_err(|_| CliError::Usage("--calibrate-len takes a number".into())))
                .transpose()?
                .unwrap_or(10);
            let report = derandomize_one_sided(
                &inner,
                &DerandomizeParams {
                    t_in,
                    error: p.clone(),
                    budget_m,
                    calibration_len,
                },
                budget,
            )?;
            // Files record the resolved budget so reloads skip calibration.
            let resolved_m: u64 = report.parameters["critical_budget"]
                .parse()
                .expect("recorded budget is numeric");
            let mut params = json!({
                "p": p.to_string(),
                "t_in": t_in,
                "budget_m": resolved_m,
                "calibration_len": calibration_len,
            });
            embed(&mut params, "inner", in_value);
            (report, "derandomize", params)
        }
        "compile-llin" => {
            let file: LangFile = load_json(in_path)?;
            let mut warnings = Vec::new();
            let expr = lang_from_file(&file, &mut warnings)?;
            let spec = match expr {
                LangExpr::Llin(spec) => spec,
                _ => {
                    return Err(CliError::Format(
                        "compile-llin expects a weighted local spec".into(),
                    ))
                }
            };
            let compiled = paca_from_llin(&spec, budget)?;
            let stage = args.opt("stage").unwrap_or("amplified");
            let mut params = json!({"stage": stage});
            embed(&mut params, "spec", in_value);
            let report = if stage == "pre" {
                TransformReport {
                    output: compiled.pre.clone(),
                    ..compiled.report.clone()
                }
            } else {
                compiled.report.clone()
            };
            (report, "compile_llin", params)
        }
        "expand" => {
            let file: AutomatonFile = load_json(in_path)?;
            let virtual_aut = virtual_from_file(&file)?;
            let report = expand_rules(&virtual_aut)?;
            (report, "expand", in_value)
        }
        other => return Err(CliError::Usage(format!("unknown transform {other:?}"))),
    };

    let output_file = match name.as_str() {
        // Expanded automata reconstruct poorly through the registry (their
        // input is the extended rule-list form), so the provenance records
        // the original file inline instead.
        "expand" => {
            let mut f = builtin_file(
                builtin,
                params,
                &report.output.input_alphabet,
                &report.output.states.boundary,
                report.output.horizon,
                Some(&report),
            );
            f.rules = None;
            f
        }
        _ => builtin_file(
            builtin,
            params,
            &report.output.input_alphabet,
            &report.output.states.boundary,
            report.output.horizon,
            Some(&report),
        ),
    };
    write_output(out_path, &output_file)?;
    let mut text = format!(
        "wrote {out_path}\nderived horizon: {}\n",
        report.derived_horizon
    );
    for (k, v) in &report.parameters {
        let _ = writeln!(text, "  {k} = {v}");
    }
    for note in &report.notes {
        let _ = writeln!(text, "  note: {note}");
    }
    Ok((0, text))
}

fn fixup_u64(params: &mut Value, key: &str) {
    if let Value::Object(map) = params {
        if let Some(Value::String(s)) = map.get(key) {
            if let Ok(n) = s.parse::<u64>() {
                map.insert(key.to_string(), Value::from(n));
            }
        }
    }
}

fn cmd_lang(args: &Args) -> Result<(i32, String), CliError> {
    let file: LangFile = load_json(args.need("spec")?)?;
    let mut warnings = Vec::new();
    let expr = lang_from_file(&file, &mut warnings)?;
    let word = parse_word(args.need("word")?)?;
    let member = eval_expr(&expr, &word)?;
    let mut out = String::new();
    for w in &warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if args.json {
        let value = json!({"member": member});
        let _ = writeln!(out, "{value}");
    } else {
        let _ = writeln!(out, "{}", if member { "member" } else { "not_a_member" });
    }
    Ok((if member { 0 } else { 1 }, out))
}

enum Side {
    Lang(LangExpr),
    Automaton {
        paca: Paca,
        horizon: u32,
        mode: ErrorMode,
    },
    Daca {
        paca: Paca,
        horizon: u32,
    },
}

impl Side {
    fn member(&self, word: &[Name], budget: &Budget) -> Result<bool, CliError> {
        match self {
            Side::Lang(expr) => Ok(eval_expr(expr, word)?),
            Side::Automaton {
                paca,
                horizon,
                mode,
            } => {
                let input = input_config(&word_string(word))?;
                let p = acceptance_prob_dp(paca, &input, *horizon, budget)?;
                match classify_probability(&p, mode)? {
                    Classification::InLanguage => Ok(true),
                    Classification::NotInLanguage => Ok(false),
                    Classification::ContractViolation => Err(CliError::Format(format!(
                        "contract violation on {:?} (probability {p})",
                        word_string(word)
                    ))),
                }
            }
            Side::Daca { paca, horizon } => {
                let input = input_config(&word_string(word))?;
                let tape =
                    paca_core::automaton::RandomTape::zeros(*horizon as usize + 1, input.len());
                Ok(matches!(
                    run(paca, &input, &tape)?,
                    RunOutcome::Accepted { step } if step < *horizon
                ))
            }
        }
    }

    fn alphabet(&self) -> Result<Vec<Name>, CliError> {
        match self {
            Side::Lang(expr) => expr.alphabet().map_err(|e| CliError::Format(e.to_string())),
            Side::Automaton { paca, .. } | Side::Daca { paca, .. } => paca
                .input_alphabet
                .iter()
                .map(|s| match s {
                    paca_core::automaton::StateVal::Sym(n) => Ok(*n),
                    other => Err(CliError::Format(format!("non-symbolic alphabet {other}"))),
                })
                .collect(),
        }
    }
}

fn load_side(args: &Args, path: &str, horizon_flag: &str, budget: &Budget) -> Result<Side, CliError> {
    let _ = budget;
    let value: Value = load_json(path)?;
    if value.get("kind").is_some() {
        let file: LangFile =
            serde_json::from_value(value).map_err(|e| CliError::Format(e.to_string()))?;
        let mut warnings = Vec::new();
        return Ok(Side::Lang(lang_from_file(&file, &mut warnings)?));
    }
    let (paca, file) = load_automaton(path)?;
    let horizon = match args.opt(horizon_flag) {
        Some(h) => h
            .parse::<u32>()
            .map_err(|_| CliError::Usage(format!("--{horizon_flag} takes a number")))?,
        None => paca
            .horizon
            .or(file.horizon.map(|h| h.value))
            .and_then(|h| u32::try_from(h).ok())
            .ok_or_else(|| {
                CliError::Usage(format!("no horizon in {path}; pass --{horizon_flag}"))
            })?,
    };
    let mode_text = args.opt("mode").unwrap_or("daca");
    if mode_text == "daca" || paca.deterministic {
        return Ok(Side::Daca { paca, horizon });
    }
    let mode = match mode_text.strip_prefix("classify:") {
        Some(rest) => {
            if rest.contains(':') {
                mode_from(rest)?
            } else {
                ErrorMode::OneSided(
                    Ratio::parse(rest).ok_or_else(|| CliError::Usage("bad mode ratio".into()))?,
                )
            }
        }
        None => mode_from(mode_text)?,
    };
    Ok(Side::Automaton {
        paca,
        horizon,
        mode,
    })
}

fn cmd_equiv(args: &Args, budget: &Budget) -> Result<(i32, String), CliError> {
    let a = load_side(args, args.need("a")?, "horizon-a", budget)?;
    let b = load_side(args, args.need("b")?, "horizon-b", budget)?;
    let max_len = args.need_u64("max-len")? as usize;
    let alphabet = a.alphabet()?;
    if alphabet != b.alphabet()? {
        return Err(CliError::Format("alphabets differ".into()));
    }
    let result = bounded_equivalence(
        |w| a.member(w, budget),
        |w| b.member(w, budget),
        &alphabet,
        max_len,
    );
    match result {
        Err(e) => Err(e),
        Ok(EquivalenceResult::Equal) => Ok((0, format!("equal up to length {max_len}\n"))),
        Ok(EquivalenceResult::Counterexample(w)) => {
            Ok((1, format!("counterexample: {}\n", word_string(&w))))
        }
    }
}

fn cmd_diagram(args: &Args) -> Result<(i32, String), CliError> {
    let (aut, _) = load_automaton(args.need("automaton")?)?;
    let input = input_config(args.need("input")?)?;
    let steps = args.need_u64("steps")? as u32;
    let tape = if args.opt("tape").is_some() || args.opt("seed").is_some() {
        Some(tape_for(args, input.len(), steps as usize)?)
    } else if aut.deterministic {
        None
    } else {
        return Err(CliError::Usage(
            "coin-driven automata need --tape or --seed".into(),
        ));
    };
    let diagram = space_time(&aut, &input, tape.as_ref(), steps)?;
    let rendered = match args.opt("format").unwrap_or("text") {
        "text" => render::render_text(&aut, &diagram),
        "svg" => render::render_svg(&aut, &diagram),
        other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
    };
    if let Some(path) = args.opt("out") {
        std::fs::write(path, &rendered)?;
        return Ok((0, format!("wrote {path}\n")));
    }
    Ok((0, rendered))
}

fn cmd_fixtures(args: &Args) -> Result<(i32, String), CliError> {
    if let Some(dir) = args.opt("export") {
        std::fs::create_dir_all(dir)?;
        let mut out = String::new();
        for name in corpus::fixture_names() {
            let fixture = corpus::fixture(name).expect("registered");
            match &fixture.artifact {
                FixtureArtifact::Automaton(aut) => {
                    let file = builtin_file(
                        "fixture",
                        json!({"name": name}),
                        &aut.input_alphabet,
                        &aut.states.boundary,
                        aut.horizon,
                        None,
                    );
                    let path = format!("{dir}/{name}.json");
                    write_output(&path, &file)?;
                    let _ = writeln!(out, "wrote {path}");
                }
                FixtureArtifact::Lang(expr) => {
                    let file = formats::lang_to_file(expr)?;
                    let path = format!("{dir}/{name}.json");
                    let text = serde_json::to_string_pretty(&file)
                        .map_err(|e| CliError::Format(e.to_string()))?;
                    std::fs::write(&path, text + "\n")?;
                    let _ = writeln!(out, "wrote {path}");
                }
                FixtureArtifact::Words(words) => {
                    let path = format!("{dir}/{name}.json");
                    let text = serde_json::to_string_pretty(&json!({"words": words}))
                        .map_err(|e| CliError::Format(e.to_string()))?;
                    std::fs::write(&path, text + "\n")?;
                    let _ = writeln!(out, "wrote {path}");
                }
            }
        }
        return Ok((0, out));
    }
    if args.json {
        let list: Vec<Value> = corpus::fixture_names()
            .into_iter()
            .map(|name| {
                let fixture = corpus::fixture(name).expect("registered");
                let kind = match fixture.artifact {
                    FixtureArtifact::Automaton(_) => "automaton",
                    FixtureArtifact::Lang(_) => "language",
                    FixtureArtifact::Words(_) => "words",
                };
                json!({"name": name, "kind": kind, "notes": fixture.notes})
            })
            .collect();
        return Ok((0, format!("{}\n", Value::Array(list))));
    }
    let mut out = String::new();
    for name in corpus::fixture_names() {
        let fixture = corpus::fixture(name).expect("registered");
        let kind = match fixture.artifact {
            FixtureArtifact::Automaton(_) => "automaton",
            FixtureArtifact::Lang(_) => "language ",
            FixtureArtifact::Words(_) => "words    ",
        };
        let _ = writeln!(out, "{kind}  {name:24} {}", fixture.notes);
    }
    Ok((0, out))
}
