//! Family construction: a scheduler-driven loop servicing one (function,
//! base) pair per step, maintaining every previously accepted image
//! constraint while accepting a fresh, strictly deeper target for the
//! scheduled pair. The point drifts by less than `2^-(m+2)` per step.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::digits;
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::oracle::{self, FunctionSpec};
use crate::rational::{self, Rational};
use crate::Result;

use super::single::normalize_domain;
use super::solve::{
    bits_for_tolerance, derivative_bound, separated_pair, snap_dyadic,
    solve_preimage_certified, window_within,
};
use super::target::pick_target;
use super::{
    common_fraction_prefix, sigma, Approximant, ConstructionResult, Mode, RunParams, StepKind,
    StepRecord, Transcript, ZigzagState,
};

pub(crate) fn init_family(
    functions: &[FunctionSpec],
    interval: &RationalInterval,
    bases: &[u32],
    params: RunParams,
) -> Result<ZigzagState> {
    if functions.is_empty() {
        return Err(Error::domain("family must contain at least one function"));
    }
    if bases.is_empty() || bases.iter().any(|&b| b < 2) {
        return Err(Error::domain("every base must be an integer at least 2"));
    }
    let (domain, shift, conjugated) = normalize_domain(functions, interval)?;
    let mut pairs = Vec::new();
    for (fi, _) in conjugated.iter().enumerate() {
        for &b in bases {
            let key = if bases.len() == 1 {
                format!("f{}", fi + 1)
            } else {
                format!("f{}.b{}", fi + 1, b)
            };
            pairs.push((fi, b, key));
        }
    }
    let x_current = domain.midpoint();
    Ok(ZigzagState {
        mode: Mode::Family,
        functions: conjugated,
        bases: bases.to_vec(),
        pairs,
        m: 0,
        x_interval: domain.clone(),
        domain,
        shift,
        x_current,
        approximants: BTreeMap::new(),
        visited: BTreeSet::new(),
        x_stem: None,
        x_certified: 0,
        x_checkpoints: Vec::new(),
        steps: Vec::new(),
        params,
    })
}

/// The pair the scheduler assigns to the next step.
fn scheduled_pair(state: &ZigzagState) -> (usize, u32, String) {
    let raw = sigma(state.m + 1);
    let idx = ((raw - 1) as usize) % state.pairs.len();
    state.pairs[idx].clone()
}

/// Fully algorithmic family step for the scheduled function: shrink a
/// verified window around the point on which every standing constraint
/// holds, certify two separated image values inside it, accept a target
/// between them with isolated-one position strictly past the step index,
/// and land the point on its preimage by bracketed bisection.
pub fn step_algorithmic(state: &mut ZigzagState, f: &FunctionSpec) -> Result<()> {
    if state.mode != Mode::Family {
        return Err(Error::domain("step_algorithmic requires a family-mode state"));
    }
    let (fi, _, _) = scheduled_pair(state);
    if state.functions[fi].source() != f.source() {
        return Err(Error::domain(format!(
            "scheduled function is {:?}, got {:?}",
            state.functions[fi].source(),
            f.source()
        )));
    }
    service(state)
}

fn service(state: &mut ZigzagState) -> Result<()> {
    let t_all = std::time::Instant::now();
    let calls0 = crate::elementary::KERNEL_CALLS.load(std::sync::atomic::Ordering::Relaxed);
    let (fi, pair_base, key) = scheduled_pair(state);
    let f = state.functions[fi].clone();
    let m_cur = state.m;
    let x = state.x_current.clone();

    // Window radius: strictly below the step-size budget, inside the
    // domain margins, and within every standing constraint's slack.
    let scale = {
        let w = state.domain.width();
        if w < rational::int(1) {
            w
        } else {
            rational::int(1)
        }
    };
    let mut delta = &scale * rational::base_pow(2, -(m_cur as i64) - 3);
    let gap_lo = &x - state.domain.lo();
    let gap_hi = state.domain.hi() - &x;
    for gap in [gap_lo, gap_hi] {
        let half = &gap / rational::int(2);
        if half < delta {
            delta = half;
        }
    }
    let mut slack_info: std::collections::BTreeMap<String, (Rational, Rational)> =
        std::collections::BTreeMap::new();
    for (k2, app) in &state.approximants {
        let g = &state.functions[key_index(state, k2)];
        let bits = bits_for_tolerance(&app.radius) + 8;
        let e = oracle::eval_point_bits(g, &x, bits)?;
        let d_lo = (e.lo() - &app.value).abs();
        let d_hi = (e.hi() - &app.value).abs();
        let dist = if d_lo >= d_hi { d_lo } else { d_hi };
        let slack = &app.radius - &dist;
        if !slack.is_positive() {
            return Err(Error::invariant(format!(
                "standing constraint for {k2} lost its slack"
            )));
        }
        let window0 = RationalInterval::ball(&x, &delta);
        let dbound = derivative_bound(g, &window0)?;
        let cand = &slack / (rational::int(4) * &dbound);
        if cand < delta {
            delta = cand;
        }
        slack_info.insert(k2.clone(), (dist, dbound));
    }

    let t_delta = t_all.elapsed();
    // snap the radius onto a dyadic grid so window arithmetic stays small
    if delta.is_positive() {
        let grid = bits_for_tolerance(&delta) + 32;
        let snapped = snap_dyadic(&delta, grid);
        if snapped.is_positive() {
            delta = snapped;
        }
    }

    // verify the window, halving on failure
    let shrink_factor =
        rational::int(2 * pair_base as i64 - 1) / rational::int(2 * pair_base as i64);
    let mut window = RationalInterval::ball(&x, &delta);
    let mut verified = false;
    for _ in 0..64 {
        window = RationalInterval::ball(&x, &delta);
        let mut ok = true;
        for (k2, app) in &state.approximants {
            let g = &state.functions[key_index(state, k2)];
            let required = if k2 == &key {
                &app.radius * &shrink_factor
            } else {
                app.radius.clone()
            };
            // image of the window stays within dist + 2 |f'| delta of the
            // target; when that already clears the requirement the interval
            // evaluation is redundant
            if let Some((dist, dbound)) = slack_info.get(k2) {
                let reach = dist + rational::int(2) * dbound * &delta;
                if reach < required {
                    continue;
                }
            }
            let ball = RationalInterval::ball(&app.value, &required);
            if !window_within(g, &window, &ball)? {
                ok = false;
                break;
            }
        }
        if ok {
            verified = true;
            break;
        }
        delta /= rational::int(2);
    }
    if !verified {
        return Err(Error::budget(
            "window verification failed within the halving budget",
        ));
    }

    let t_verify = t_all.elapsed();
    // distinct certified values and the zone between them
    let old = state.approximants.get(&key).cloned();
    let start_bits = bits_for_tolerance(&window.width()) + 48;
    let (z1, z2, e_lo, e_hi, _eps) = separated_pair(&f, &window, start_bits)?;
    let mut zone = RationalInterval::new(e_lo.hi().clone(), e_hi.lo().clone())?;
    if let Some(app) = &old {
        let shrunk = RationalInterval::ball(&app.value, &(&app.radius * &shrink_factor));
        zone = zone.intersect(&shrunk).ok_or_else(|| {
            Error::invariant("image zone fell outside the standing constraint ball")
        })?;
    }

    let min_k = (m_cur + 1).max(old.as_ref().map(|a| a.tau_prime + 1).unwrap_or(0));
    let cp_start = old.as_ref().map(|a| a.checkpoints.len()).unwrap_or(0);
    let last = old
        .as_ref()
        .and_then(|a| a.checkpoints.last().copied())
        .unwrap_or(0);
    let mut target = pick_target(
        &zone,
        pair_base,
        min_k,
        cp_start,
        last,
        state.params.literal_cap,
        Mode::Family,
    )?;
    if let Some(app) = &old {
        for _ in 0..4 {
            let new_ball = RationalInterval::ball(&target.value, &target.radius);
            let old_ball = RationalInterval::ball(&app.value, &app.radius);
            if new_ball.strictly_inside(&old_ball) {
                break;
            }
            target.tau_prime += 2;
            target.radius = rational::base_pow(pair_base, -(target.tau_prime as i64) - 1);
        }
    }

    let t_witness = t_all.elapsed();
    let tol = &target.radius / rational::int(2 * pair_base as i64);
    let x_new = solve_preimage_certified(&f, z1, z2, &target.value, &tol)?;
    let t_solve = t_all.elapsed();
    if std::env::var("ZH_TRACE").is_ok() {
        let calls = crate::elementary::KERNEL_CALLS.load(std::sync::atomic::Ordering::Relaxed) - calls0;
        eprintln!(
            "step {}: delta {:?} verify {:?} witness {:?} solve {:?} kernel_calls {}",
            m_cur + 1,
            t_delta,
            t_verify - t_delta,
            t_witness - t_verify,
            t_solve - t_witness,
            calls
        );
    }
    let drift = (&x_new - &x).abs();
    let drift_cap = rational::base_pow(2, -(m_cur as i64) - 2);
    if drift >= drift_cap {
        return Err(Error::invariant("step-size bound violated"));
    }

    let mut checkpoints = old
        .as_ref()
        .map(|a| a.checkpoints.clone())
        .unwrap_or_default();
    checkpoints.extend(target.checkpoints.iter().copied());
    let visits = old.as_ref().map(|a| a.visits + 1).unwrap_or(1);
    state.approximants.insert(
        key.clone(),
        Approximant {
            value: target.value.clone(),
            tau_prime: target.tau_prime,
            stem_nonzeros: target.stem_nonzeros,
            radius: target.radius.clone(),
            base: pair_base,
            visits,
            checkpoints,
        },
    );
    state.visited.insert(key.clone());
    state.x_current = x_new;
    state.x_interval = window.clone();
    state.m += 1;
    let rec = StepRecord {
        m: state.m,
        key,
        base: pair_base,
        kind: StepKind::TargetY,
        tau_prime: Some(target.tau_prime),
        x: state.x_current.clone(),
        y: Some(target.value),
        radius: Some(target.radius),
        x_width: window.width(),
        checkpoints_added: target.checkpoints,
    };
    state.record(rec);
    Ok(())
}

fn key_index(state: &ZigzagState, key: &str) -> usize {
    state
        .pairs
        .iter()
        .find(|(_, _, k)| k == key)
        .map(|(fi, _, _)| *fi)
        .expect("approximant key always comes from pairs")
}

/// Produce a point whose images under every function carry certified
/// zero-run checkpoints in the given base.
pub fn run_family(
    functions: &[FunctionSpec],
    interval: &RationalInterval,
    base: u32,
    max_steps: u64,
) -> Result<ConstructionResult> {
    run_family_multibase(functions, interval, &[base], max_steps)
}

/// The multi-base variant: the scheduler cycles over (function, base)
/// pairs and every pair receives its own certificates on the one common
/// point.
pub fn run_family_multibase(
    functions: &[FunctionSpec],
    interval: &RationalInterval,
    bases: &[u32],
    max_steps: u64,
) -> Result<ConstructionResult> {
    let params = RunParams::for_family(max_steps);
    let mut state = init_family(functions, interval, bases, params)?;
    let mut complete = true;
    for _ in 0..max_steps {
        match service(&mut state) {
            Ok(()) => {}
            Err(Error::Budget(_)) | Err(Error::WitnessNotFound(_)) => {
                complete = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    emit_family(state, complete)
}

fn emit_family(state: ZigzagState, complete: bool) -> Result<ConstructionResult> {
    // final verified window for the emission enclosures
    let window = state.x_interval.clone();
    let mut image_prefixes = BTreeMap::new();
    let mut certificates = BTreeMap::new();
    for (key, app) in &state.approximants {
        let fi = key_index(&state, key);
        let f = &state.functions[fi];
        let bits = bits_for_tolerance(&app.radius) + 16;
        let image = oracle::eval_interval_bits(f, &window, bits)?;
        let ball = RationalInterval::ball(&app.value, &app.radius);
        let clipped = image
            .intersect(&ball)
            .ok_or_else(|| Error::invariant("final image enclosure missed its ball"))?;
        let prefix = common_fraction_prefix(&clipped, app.base, app.tau_prime + 8)?;
        let cert = digits::zero_run_certificate(&prefix, &app.checkpoints)?;
        cert.validate(&prefix)
            .map_err(|e| Error::invariant(format!("{key} certificate failed validation: {e}")))?;
        image_prefixes.insert(key.clone(), prefix);
        certificates.insert(key.clone(), cert);
    }
    // the point's own digits, as far as the final window pins them
    let x_prefix = common_fraction_prefix(&window, state.bases[0], 256)
        .unwrap_or_else(|_| digits::DigitPrefix::new(state.bases[0], Vec::new(), false).unwrap());
    let meta = serde_json::json!({
        "mode": if state.bases.len() == 1 { "family" } else { "family-multibase" },
        "functions": state.functions.iter().map(|f| f.source()).collect::<Vec<_>>(),
        "bases": state.bases,
        "shift": state.shift.to_string(),
        "domain": [
            rational::format_rational(state.domain.lo()),
            rational::format_rational(state.domain.hi()),
        ],
        "max_steps": state.params.max_steps,
    });
    let iterations = state.m;
    Ok(ConstructionResult {
        x_prefix,
        image_prefixes,
        certificates,
        iterations,
        transcript: Transcript {
            meta,
            steps: state.steps,
        },
        complete,
    })
}
