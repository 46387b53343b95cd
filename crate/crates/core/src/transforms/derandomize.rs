//! Derandomization of constant-time one-sided-error acceptors.
//!
//! The output is a deterministic acceptor over the same alphabet. Writing `T`
//! for the input's horizon and `M` for a bound on how many cells of a member
//! word can be critical at an accepting step, each cell first gathers its
//! radius-`r` input neighborhood, `r = (2M−1)(T−1)`, in `r` steps. It then
//! runs `T` decision steps; at decision step `t` a cell is accepting exactly
//! when:
//!
//! 1. at most `M` cells in its neighborhood are critical at step `t`
//!    (cells whose step-`t` view it cannot fully see are ignored), and
//! 2. if the cell itself is not critical: its own (coin-independent) state at
//!    step `t` is accepting, and
//! 3. if it is critical: collecting critical neighbors closer than `2(T−1)`
//!    to the developing group, starting from itself, yields a group `B` such
//!    that some coin assignment makes every cell of `B` accepting at step `t`.
//!
//! Afterwards every cell goes permanently non-accepting. Criticality and the
//! existential coin check are decided by exact windowed evolution of the
//! input automaton (coins outside the group's lightcones cannot change the
//! verdict, so the narrow windows are equivalent to scanning the full
//! radius-`r` cone).
//!
//! The bound `M` may be supplied or calibrated: the calibration scans every
//! member up to a given length and records the largest critical-cell count
//! at any step where acceptance has positive probability.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::automaton::{Accepting, LocalRule, Paca, StateSet, StateVal};
use crate::langs::words_of_length;
use crate::name::Name;
use crate::prob::{
    acceptance_prob_dp, acceptance_step_profile, classify_probability, critical_cells, Budget,
    Classification, ErrorMode,
};
use crate::ratio::Ratio;

use super::{tag, TransformError, TransformReport};

#[derive(Clone, Debug)]
pub struct DerandomizeParams {
    /// The input's time bound.
    pub t_in: u32,
    /// The input's one-sided error.
    pub error: Ratio,
    /// Critical-cell budget; calibrated when absent.
    pub budget_m: Option<u32>,
    /// Calibration scans members up to this length.
    pub calibration_len: usize,
}

/// Scans all members up to `calibration_len` and returns the largest
/// critical-cell count at any step with positive acceptance probability.
pub fn calibrate_critical_budget(
    inner: &Paca,
    params: &DerandomizeParams,
    budget: &Budget,
) -> Result<u32, TransformError> {
    let alphabet: Vec<Name> = inner
        .input_alphabet
        .iter()
        .map(|s| match s {
            StateVal::Sym(n) => Ok(*n),
            other => Err(TransformError::Incompatible(format!(
                "calibration needs symbolic alphabets, got {other}"
            ))),
        })
        .collect::<Result<_, _>>()?;
    let mode = ErrorMode::OneSided(params.error.clone());
    let mut max_critical: u32 = 0;
    for len in 1..=params.calibration_len {
        for word in words_of_length(&alphabet, len) {
            let cells: Vec<StateVal> = word.iter().map(|n| StateVal::Sym(*n)).collect();
            let input = crate::automaton::Configuration::new(cells)?;
            let prob = acceptance_prob_dp(inner, &input, params.t_in, budget)?;
            if classify_probability(&prob, &mode)? != Classification::InLanguage {
                continue;
            }
            let profile = acceptance_step_profile(inner, &input, params.t_in - 1, budget)?;
            for (t, mass) in profile.iter().enumerate() {
                if mass.is_zero() {
                    continue;
                }
                let report = critical_cells(inner, &input, t as u32, budget)?;
                max_critical = max_critical.max(report.critical.len() as u32);
            }
        }
    }
    Ok(max_critical)
}

/// Compiles a constant-time one-sided-error acceptor into an equivalent
/// deterministic acceptor.
pub fn derandomize_one_sided(
    inner: &Paca,
    params: &DerandomizeParams,
    budget: &Budget,
) -> Result<TransformReport, TransformError> {
    if params.t_in == 0 {
        return Err(TransformError::InvalidParameter("horizon must be positive".into()));
    }
    let calibrated = params.budget_m.is_none();
    let m = match params.budget_m {
        Some(m) => m,
        None => calibrate_critical_budget(inner, params, budget)?,
    };
    let t = params.t_in;
    let r = (2 * m.max(1) - 1) * (t - 1);
    if r > 64 {
        return Err(TransformError::SizeBudget {
            what: "gather radius",
            needed: r as u64,
            budget: 64,
        });
    }

    let spec = Arc::new(DerandSpec {
        inner: inner.clone(),
        t,
        m,
        r,
        budget: budget.clone(),
        crit_cache: crate::sync::SpinLock::new(hashbrown::HashMap::new()),
        exists_cache: crate::sync::SpinLock::new(hashbrown::HashMap::new()),
    });
    let rule = {
        let spec = spec.clone();
        LocalRule::proc("derandomized", move |l, c, r| derand_step(&spec, l, c, r))
    };
    let derived_horizon = r as u64 + t as u64 + 1;
    let output = Paca::daca(
        &format!("{}_derandomized", inner.label),
        StateSet::lazy(inner.states.boundary.clone()),
        inner.input_alphabet.clone(),
        Accepting::pred("decision-flag", |s| {
            matches!(s, StateVal::Comp { tag: t, parts } if *t == tag::DER_RUN
                && matches!(&parts[1], StateVal::Int(1)))
        }),
        rule,
        Some(derived_horizon),
    );
    let mut report = TransformReport::new(output, derived_horizon)
        .param("critical_budget", m)
        .param("radius", r)
        .param("t_in", t)
        .note("deterministic output: both rules identical");
    if calibrated {
        report = report
            .param("calibration_len", params.calibration_len)
            .note(format!(
                "critical budget calibrated over members up to length {}; soundness beyond that rests on the constant critical-cell bound",
                params.calibration_len
            ));
    }
    Ok(report)
}

struct DerandSpec {
    inner: Paca,
    t: u32,
    m: u32,
    r: u32,
    budget: Budget,
    /// Memoized criticality per `(step, step-neighborhood view)`:
    /// whether the center is critical and, when it is not, its fixed verdict.
    crit_cache: crate::sync::SpinLock<hashbrown::HashMap<(u32, Vec<StateVal>), (bool, bool)>>,
    /// Memoized existential coin checks per
    /// `(step, group window view, relative group positions)`.
    exists_cache:
        crate::sync::SpinLock<hashbrown::HashMap<(u32, Vec<StateVal>, Vec<u16>), bool>>,
}

/// Deterministic transition: gather, then decide, then die.
fn derand_step(spec: &DerandSpec, l: &StateVal, c: &StateVal, r: &StateVal) -> StateVal {
    let bnd = &spec.inner.states.boundary;
    match c {
        // Input symbol: start the window at radius 1 (or decide immediately
        // when the radius is 0 or 1).
        StateVal::Sym(_) => {
            let window = alloc::vec![l.clone(), c.clone(), r.clone()];
            if spec.r <= 1 {
                let window = if spec.r == 0 { alloc::vec![c.clone()] } else { window };
                decide_state(spec, &window, 0)
            } else {
                let mut parts = alloc::vec![StateVal::Int(1)];
                parts.extend(window);
                StateVal::comp(tag::DER_GATHER, parts)
            }
        }
        StateVal::Comp { tag: tg, parts } if *tg == tag::DER_GATHER => {
            let s = match &parts[0] {
                StateVal::Int(s) => *s as u32,
                _ => 0,
            };
            let left_edge = gather_edge(l, bnd, true);
            let right_edge = gather_edge(r, bnd, false);
            let mut window = Vec::with_capacity(parts.len() + 1);
            window.push(left_edge);
            window.extend(parts[1..].iter().cloned());
            window.push(right_edge);
            if s + 1 == spec.r {
                decide_state(spec, &window, 0)
            } else {
                let mut out = alloc::vec![StateVal::Int(s as i64 + 1)];
                out.extend(window);
                StateVal::comp(tag::DER_GATHER, out)
            }
        }
        StateVal::Comp { tag: tg, parts } if *tg == tag::DER_RUN => {
            let step = match &parts[0] {
                StateVal::Int(s) => *s as u32,
                _ => 0,
            };
            if step + 1 >= spec.t {
                return StateVal::packed(tag::DER_DEAD, 0);
            }
            decide_state(spec, &parts[2..].to_vec(), step + 1)
        }
        _ => StateVal::packed(tag::DER_DEAD, 0),
    }
}

fn gather_edge(neighbor: &StateVal, bnd: &StateVal, left: bool) -> StateVal {
    match neighbor {
        StateVal::Comp { tag: t, parts } if *t == tag::DER_GATHER => {
            if left {
                parts[1].clone()
            } else {
                parts[parts.len() - 1].clone()
            }
        }
        // The neighbor is the boundary: everything beyond it is boundary too.
        _ => bnd.clone(),
    }
}

fn decide_state(spec: &DerandSpec, window: &[StateVal], t: u32) -> StateVal {
    let flag = decide(spec, window, t);
    let mut parts = alloc::vec![StateVal::Int(t as i64), StateVal::Int(flag as i64)];
    parts.extend(window.iter().cloned());
    StateVal::comp(tag::DER_RUN, parts)
}

/// Criticality and deterministic verdict of a cell from its step-`t` view,
/// memoized: the view determines both exactly.
fn criticality(spec: &DerandSpec, sub: &[StateVal], t: u32) -> (bool, bool) {
    let key = (t, sub.to_vec());
    if let Some(&hit) = spec.crit_cache.lock().get(&key) {
        return hit;
    }
    let states = crate::prob::window::reachable_window_states(&spec.inner, sub, t, &spec.budget)
        .expect("window evolution within budget");
    let any_acc = states.iter().any(|s| spec.inner.is_accepting_state(s));
    let any_rej = states.iter().any(|s| !spec.inner.is_accepting_state(s));
    let result = (any_acc && any_rej, any_acc && !any_rej);
    spec.crit_cache.lock().insert(key, result);
    result
}

/// The three-condition decision process for the cell at the window center.
fn decide(spec: &DerandSpec, window: &[StateVal], t: u32) -> bool {
    let bnd = &spec.inner.states.boundary;
    let center = spec.r as usize;
    debug_assert_eq!(window.len(), 2 * center + 1);

    // Criticality of every determinable position: those whose step-t view
    // lies inside the gathered window.
    let reach = (spec.r - t) as usize;
    let lo = center - reach;
    let hi = center + reach;
    let mut criticals: Vec<usize> = Vec::new();
    let mut center_verdict = None;
    for pos in lo..=hi {
        if window[pos] == *bnd {
            continue;
        }
        let sub = &window[pos - t as usize..=pos + t as usize];
        let (critical, accepts) = criticality(spec, sub, t);
        if critical {
            criticals.push(pos);
        }
        if pos == center {
            center_verdict = Some((critical, accepts));
        }
    }
    // Condition 1: too many critical cells in view.
    if criticals.len() as u32 > spec.m {
        return false;
    }
    let (center_critical, center_accepts) = center_verdict.expect("center always determinable");
    // Condition 2: non-critical cells copy their deterministic verdict.
    if !center_critical {
        return center_accepts;
    }
    // Condition 3: grow the dependence group from the cell itself.
    let mut group: Vec<usize> = alloc::vec![center];
    loop {
        let mut grew = false;
        for &k in &criticals {
            if group.contains(&k) {
                continue;
            }
            if group
                .iter()
                .any(|&j| k.abs_diff(j) <= 2 * (spec.t as usize - 1))
            {
                group.push(k);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    group.sort_unstable();
    let g_lo = group[0] - t as usize;
    let g_hi = group[group.len() - 1] + t as usize;
    let sub = &window[g_lo..=g_hi];
    let relative: Vec<u16> = group.iter().map(|&pos| (pos - group[0]) as u16).collect();
    let key = (t, sub.to_vec(), relative.clone());
    if let Some(&hit) = spec.exists_cache.lock().get(&key) {
        return hit;
    }
    let windows = crate::prob::window::evolve_window_sets(&spec.inner, sub, t, &spec.budget)
        .expect("window evolution within budget");
    let exists = windows.iter().any(|w| {
        relative
            .iter()
            .all(|&pos| spec.inner.is_accepting_state(&w[pos as usize]))
    });
    spec.exists_cache.lock().insert(key, exists);
    exists
}
