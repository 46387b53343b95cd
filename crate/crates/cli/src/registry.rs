//! Builtin-automaton resolution: fixtures by name, construction outputs by
//! reconstruction from their recorded parameters.

use serde_json::Value;

use paca_core::automaton::Paca;
use paca_core::corpus;
use paca_core::langs::LangExpr;
use paca_core::prob::Budget;
use paca_core::ratio::Ratio;
use paca_core::transforms::{
    derandomize_one_sided, expand_rules, intersect_paca, paca_from_llin,
    reduce_error_one_sided, reduce_error_two_sided, union_paca, DerandomizeParams,
};

use crate::error::CliError;
use crate::formats::{automaton_from_file, lang_from_file, AutomatonFile, LangFile};

fn get_str<'a>(params: &'a Value, key: &str) -> Result<&'a str, CliError> {
    params
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Format(format!("builtin params missing {key:?}")))
}

fn get_u64(params: &Value, key: &str) -> Result<u64, CliError> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Format(format!("builtin params missing {key:?}")))
}

fn get_ratio(params: &Value, key: &str) -> Result<Ratio, CliError> {
    Ratio::parse(get_str(params, key)?)
        .ok_or_else(|| CliError::Format(format!("bad ratio in {key:?}")))
}

fn inner_automaton(params: &Value, key: &str) -> Result<Paca, CliError> {
    let value = params
        .get(key)
        .ok_or_else(|| CliError::Format(format!("builtin params missing {key:?}")))?;
    let file: AutomatonFile = serde_json::from_value(value.clone())
        .map_err(|e| CliError::Format(format!("bad nested automaton: {e}")))?;
    automaton_from_file(&file)
}

/// Resolves a builtin automaton reference. The reconstruction budget is
/// generous: files written by this tool always record parameters that were
/// accepted once already.
pub fn resolve(builtin: &str, params: &Value) -> Result<Paca, CliError> {
    let budget = Budget::large();
    match builtin {
        "fixture" => {
            let name = get_str(params, "name")?;
            let fixture = corpus::fixture(name)
                .ok_or_else(|| CliError::Format(format!("unknown fixture {name:?}")))?;
            fixture
                .artifact
                .automaton()
                .cloned()
                .ok_or_else(|| CliError::Format(format!("fixture {name:?} is not an automaton")))
        }
        "reduce_error_one_sided" => {
            let inner = inner_automaton(params, "inner")?;
            let report = reduce_error_one_sided(
                &inner,
                &get_ratio(params, "p")?,
                &get_ratio(params, "p_target")?,
                get_u64(params, "t_in")? as u32,
            )?;
            Ok(report.output)
        }
        "reduce_error_two_sided" => {
            let inner = inner_automaton(params, "inner")?;
            let report = reduce_error_two_sided(
                &inner,
                &get_ratio(params, "p")?,
                &get_ratio(params, "p_target")?,
                get_u64(params, "t_in")? as u32,
                &budget,
            )?;
            Ok(report.output)
        }
        "union" => {
            let a = inner_automaton(params, "inner")?;
            let b = inner_automaton(params, "inner2")?;
            let report = union_paca(
                &a,
                &get_ratio(params, "p")?,
                get_u64(params, "t_in")? as u32,
                &b,
                &get_ratio(params, "p2")?,
                get_u64(params, "t_in2")? as u32,
                &budget,
            )?;
            Ok(report.output)
        }
        "intersect" => {
            let a = inner_automaton(params, "inner")?;
            let b = inner_automaton(params, "inner2")?;
            let report = intersect_paca(
                &a,
                &get_ratio(params, "p")?,
                get_u64(params, "t_in")? as u32,
                &b,
                &get_ratio(params, "p2")?,
                get_u64(params, "t_in2")? as u32,
                &budget,
            )?;
            Ok(report.output)
        }
        "derandomize" => {
            let inner = inner_automaton(params, "inner")?;
            let report = derandomize_one_sided(
                &inner,
                &DerandomizeParams {
                    t_in: get_u64(params, "t_in")? as u32,
                    error: get_ratio(params, "p")?,
                    budget_m: Some(get_u64(params, "budget_m")? as u32),
                    calibration_len: get_u64(params, "calibration_len").unwrap_or(10) as usize,
                },
                &budget,
            )?;
            Ok(report.output)
        }
        "compile_llin" => {
            let value = params
                .get("spec")
                .ok_or_else(|| CliError::Format("builtin params missing \"spec\"".into()))?;
            let file: LangFile = serde_json::from_value(value.clone())
                .map_err(|e| CliError::Format(format!("bad nested spec: {e}")))?;
            let mut warnings = Vec::new();
            let expr = lang_from_file(&file, &mut warnings)?;
            let spec = match expr {
                LangExpr::Llin(spec) => spec,
                _ => return Err(CliError::Format("compile_llin expects a weighted spec".into())),
            };
            let compiled = paca_from_llin(&spec, &budget)?;
            let stage = params.get("stage").and_then(Value::as_str).unwrap_or("amplified");
            Ok(match stage {
                "pre" => compiled.pre,
                _ => compiled.report.output,
            })
        }
        "expand" => {
            let file: crate::formats::AutomatonFile = serde_json::from_value(params.clone())
                .map_err(|e| CliError::Format(format!("bad expansion input: {e}")))?;
            let virtual_aut = crate::formats::virtual_from_file(&file)?;
            Ok(expand_rules(&virtual_aut)?.output)
        }
        other => Err(CliError::Format(format!("unknown builtin {other:?}"))),
    }
}
