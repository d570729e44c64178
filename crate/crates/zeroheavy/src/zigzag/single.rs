//! Single-function construction: alternately narrow the point's own
//! interval onto terminating-expansion anchors (pinning zero runs into its
//! digits) and steer the image onto isolated-one targets (pinning zero
//! runs into the image digits).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::digits::{self, DigitPrefix, FiniteExpansionNumber};
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::oracle::{self, Expr, FunctionSpec};
use crate::rational::{self, Rational};
use crate::Result;

use super::solve::{
    bits_for_tolerance, derivative_bound, separated_pair, solve_preimage_certified,
    window_within,
};
use super::target::{extend_checkpoints, pick_target};
use super::{
    common_fraction_prefix, Approximant, ConstructionResult, Mode, RunParams, StepKind,
    StepRecord, Transcript, ZigzagState,
};

/// Translate the interval into the unit cell (an integer shift keeps the
/// digit structure intact) and conjugate the functions accordingly,
/// shaving an eighth off each end for interior safety.
pub(crate) fn normalize_domain(
    functions: &[FunctionSpec],
    interval: &RationalInterval,
) -> Result<(RationalInterval, BigInt, Vec<FunctionSpec>)> {
    if !interval.width().is_positive() {
        return Err(Error::domain("domain interval must be non-degenerate"));
    }
    let zero = Rational::from_integer(BigInt::from(0));
    let one = rational::int(1);
    // pick the widest piece of the interval inside a single unit cell
    let n_lo = rational::floor_int(interval.lo());
    let n_hi = rational::floor_int(interval.hi());
    let mut best: Option<(BigInt, Rational, Rational)> = None;
    let mut n = n_lo;
    while n <= n_hi {
        let cell_lo = Rational::from_integer(n.clone());
        let cell_hi = &cell_lo + &one;
        let lo = if interval.lo() > &cell_lo {
            interval.lo().clone()
        } else {
            cell_lo.clone()
        };
        let hi = if interval.hi() < &cell_hi {
            interval.hi().clone()
        } else {
            cell_hi.clone()
        };
        let w = &hi - &lo;
        if w.is_positive() {
            let better = match &best {
                Some((_, blo, bhi)) => &w > &(bhi - blo),
                None => true,
            };
            if better {
                best = Some((n.clone(), lo, hi));
            }
        }
        n += BigInt::from(1);
    }
    let (shift, lo, hi) = best.ok_or_else(|| Error::domain("interval has no unit-cell piece"))?;
    let lo = lo - Rational::from_integer(shift.clone());
    let hi = hi - Rational::from_integer(shift.clone());
    let w = &hi - &lo;
    let margin = &w / rational::int(8);
    let domain = RationalInterval::new(&lo + &margin, &hi - &margin)?;
    debug_assert!(domain.lo() > &zero && domain.hi() < &one);
    let conjugated = if shift == BigInt::from(0) {
        functions.to_vec()
    } else {
        functions
            .iter()
            .map(|f| {
                let shifted_var = Expr::Add(
                    Box::new(Expr::Var),
                    Box::new(Expr::Const(Rational::from_integer(shift.clone()))),
                );
                let expr = substitute(f.expr(), &shifted_var);
                FunctionSpec::from_expr(expr, format!("{} @ x+{}", f.source(), shift))
            })
            .collect()
    };
    Ok((domain, shift, conjugated))
}

fn substitute(expr: &Expr, with: &Expr) -> Expr {
    match expr {
        Expr::Const(c) => Expr::Const(c.clone()),
        Expr::Var => with.clone(),
        Expr::Add(a, b) => Expr::Add(
            Box::new(substitute(a, with)),
            Box::new(substitute(b, with)),
        ),
        Expr::Sub(a, b) => Expr::Sub(
            Box::new(substitute(a, with)),
            Box::new(substitute(b, with)),
        ),
        Expr::Mul(a, b) => Expr::Mul(
            Box::new(substitute(a, with)),
            Box::new(substitute(b, with)),
        ),
        Expr::Div(a, b) => Expr::Div(
            Box::new(substitute(a, with)),
            Box::new(substitute(b, with)),
        ),
        Expr::Pow(a, n) => Expr::Pow(Box::new(substitute(a, with)), *n),
        Expr::Exp(a) => Expr::Exp(Box::new(substitute(a, with))),
        Expr::Ln(a) => Expr::Ln(Box::new(substitute(a, with))),
        Expr::Sin(a) => Expr::Sin(Box::new(substitute(a, with))),
        Expr::Cos(a) => Expr::Cos(Box::new(substitute(a, with))),
    }
}

/// Shallowest terminating-expansion anchor near the midpoint of the open
/// interval, strictly interior.
fn seed_stem(domain: &RationalInterval, base: u32) -> Result<FiniteExpansionNumber> {
    let w = domain.width();
    let lo = domain.lo() + &w / rational::int(8);
    let hi = domain.hi() - &w / rational::int(8);
    let mid = domain.midpoint();
    let mut d = 1u64;
    loop {
        let scale = rational::base_pow(base, d as i64);
        let floor = Rational::from_integer(rational::floor_int(&(&mid * &scale))) / &scale;
        for cand in [floor.clone(), &floor + rational::base_pow(base, -(d as i64))] {
            if cand > lo && cand < hi && cand.is_positive() {
                return FiniteExpansionNumber::new(cand, base);
            }
        }
        d += 1;
        if d > 1 << 20 {
            return Err(Error::budget("no seed anchor found"));
        }
    }
}

/// Prepare the state and run the opening step: seed anchor, first
/// interval, and the first image target.
pub fn init_single(
    f: &FunctionSpec,
    interval: &RationalInterval,
    base: u32,
) -> Result<ZigzagState> {
    init_with_params(f, interval, base, RunParams::for_single(256, 64))
}

pub(crate) fn init_with_params(
    f: &FunctionSpec,
    interval: &RationalInterval,
    base: u32,
    params: RunParams,
) -> Result<ZigzagState> {
    if base < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    let (domain, shift, conjugated) = normalize_domain(std::slice::from_ref(f), interval)?;
    let t1 = seed_stem(&domain, base)?;
    let l1 = t1.tau();
    // exponent L^2 + f with minimal f >= 1 keeping the closure interior
    let mut fexp = 1u64;
    let e1 = loop {
        let e = l1 * l1 + fexp;
        if t1.value() + rational::base_pow(base, -(e as i64)) < *domain.hi() {
            break e;
        }
        fexp += 1;
        if fexp > 1 << 20 {
            return Err(Error::budget("no admissible opening exponent"));
        }
    };
    let x_interval = RationalInterval::new(
        t1.value().clone(),
        t1.value() + rational::base_pow(base, -(e1 as i64)),
    )?;
    let x_current = x_interval.midpoint();
    let x_checkpoints = extend_checkpoints(0, t1.nonzero_digits(), e1, 0, 6);
    let mut state = ZigzagState {
        mode: Mode::Single,
        functions: conjugated,
        bases: vec![base],
        pairs: vec![(0, base, "y".to_string())],
        m: 1,
        domain,
        shift,
        x_interval,
        x_current,
        approximants: BTreeMap::new(),
        visited: BTreeSet::new(),
        x_stem: Some(t1),
        x_certified: e1,
        x_checkpoints,
        steps: Vec::new(),
        params,
    };
    state.record(StepRecord {
        m: 1,
        key: "x".into(),
        base,
        kind: StepKind::Seed,
        tau_prime: None,
        x: state.x_current.clone(),
        y: None,
        radius: None,
        x_width: state.x_interval.width(),
        checkpoints_added: state.x_checkpoints.clone(),
    });
    service_image(&mut state)?;
    Ok(state)
}

/// One full round: narrow the point's interval onto a fresh anchor inside
/// the image constraint, then accept a deeper image target.
pub fn step_single(state: &mut ZigzagState) -> Result<()> {
    if state.mode != Mode::Single {
        return Err(Error::domain("step_single requires a single-mode state"));
    }
    narrow_x(state)?;
    service_image(state)
}

/// Narrowing: pick a terminating anchor close to the current point whose
/// image stays inside the current constraint ball, then shrink the
/// interval onto it.
fn narrow_x(state: &mut ZigzagState) -> Result<()> {
    let f = state.functions[0].clone();
    let base = state.base_single();
    let app = state
        .approximants
        .get("y")
        .ok_or_else(|| Error::invariant("narrowing before any image target"))?
        .clone();
    let half_ball = RationalInterval::ball(
        &app.value,
        &(&app.radius / rational::int(2)),
    );
    let d_hi = derivative_bound(&f, &state.x_interval)?;
    let quarter = &app.radius / rational::int(4);
    let rho = &quarter / &d_hi;
    let x = state.x_current.clone();
    let gap_lo = &x - state.x_interval.lo();
    let gap_hi = state.x_interval.hi() - &x;
    let mut d = 1u64;
    let two = rational::int(2);
    while rational::base_pow(base, -(d as i64)) > rho
        || rational::base_pow(base, -(d as i64)) > &gap_lo / &two
        || rational::base_pow(base, -(d as i64)) > &gap_hi / &two
    {
        d += 1;
        if d > 1 << 26 {
            return Err(Error::budget("anchor depth out of range"));
        }
    }
    let bits = bits_for_tolerance(&app.radius) + 8;
    let mut stem = None;
    for attempt in 0..12 {
        let depth = d + 8 * attempt;
        let scale = rational::base_pow(base, depth as i64);
        let cand = Rational::from_integer(rational::floor_int(&(&x * &scale))) / &scale;
        if &cand <= state.x_interval.lo() || &cand >= state.x_interval.hi() {
            continue;
        }
        let image = oracle::eval_point_bits(&f, &cand, bits)?;
        if image.strictly_inside(&half_ball) {
            stem = Some(FiniteExpansionNumber::new(cand, base)?);
            break;
        }
    }
    let stem = stem.ok_or_else(|| Error::budget("no admissible anchor for narrowing"))?;
    let l_new = stem.tau();

    // interval exponent: the quadratic run, capped so emitted prefixes
    // stay linear in the digit target, floored by the checkpoint needs
    let cp_next = state.x_checkpoints.len() as u64 + 1;
    let nz = stem.nonzero_digits();
    let need = (state.x_certified + 2)
        .max(cp_next * nz + 1)
        .max(l_new + 2);
    let desired = l_new.saturating_mul(l_new).saturating_add(1);
    let e_new = if desired <= state.params.x_exp_cap {
        desired.max(need)
    } else {
        state.params.x_exp_cap.max(need)
    };
    let right = stem.value() + rational::base_pow(base, -(e_new as i64));
    let right = if &right < state.x_interval.hi() {
        right
    } else {
        state.x_interval.hi().clone()
    };
    let new_iv = RationalInterval::new(stem.value().clone(), right)?;
    // the whole narrowed interval must keep its image inside the ball
    let three_quarter = RationalInterval::ball(
        &app.value,
        &(&app.radius * rational::ratio(3, 4)),
    );
    if !window_within(&f, &new_iv, &three_quarter)? {
        return Err(Error::invariant(
            "narrowed interval escaped the image constraint",
        ));
    }
    let added = extend_checkpoints(
        state.x_checkpoints.len(),
        nz,
        e_new,
        state.x_checkpoints.last().copied().unwrap_or(0),
        6,
    );
    state.x_checkpoints.extend(added.iter().copied());
    state.x_interval = new_iv;
    state.x_current = state.x_interval.midpoint();
    state.x_stem = Some(stem);
    state.x_certified = e_new;
    state.m += 1;
    let rec = StepRecord {
        m: state.m,
        key: "x".into(),
        base,
        kind: StepKind::NarrowX,
        tau_prime: None,
        x: state.x_current.clone(),
        y: Some(app.value.clone()),
        radius: Some(app.radius.clone()),
        x_width: state.x_interval.width(),
        checkpoints_added: added,
    };
    state.record(rec);
    Ok(())
}

/// Accept a fresh image target inside the current interval's image zone,
/// nested strictly inside the previous constraint ball.
fn service_image(state: &mut ZigzagState) -> Result<()> {
    let f = state.functions[0].clone();
    let base = state.base_single();
    let w = state.x_interval.width();
    let window = RationalInterval::new(
        state.x_interval.lo() + &w / rational::int(8),
        state.x_interval.hi() - &w / rational::int(8),
    )?;
    let old = state.approximants.get("y").cloned();
    let start_bits = bits_for_tolerance(&window.width()) + 48;
    let (z1, z2, e_lo, e_hi, _eps) = separated_pair(&f, &window, start_bits)?;
    let mut zone = RationalInterval::new(e_lo.hi().clone(), e_hi.lo().clone())?;
    if let Some(app) = &old {
        let factor = rational::int(2 * base as i64 - 1) / rational::int(2 * base as i64);
        let shrunk = RationalInterval::ball(&app.value, &(&app.radius * factor));
        zone = zone.intersect(&shrunk).ok_or_else(|| {
            Error::invariant("image zone fell outside the previous constraint ball")
        })?;
    }
    let min_k = state
        .m
        .max(old.as_ref().map(|a| a.tau_prime + 1).unwrap_or(0));
    let cp_start = old.as_ref().map(|a| a.checkpoints.len()).unwrap_or(0);
    let last = old
        .as_ref()
        .and_then(|a| a.checkpoints.last().copied())
        .unwrap_or(0);
    let mut target = pick_target(
        &zone,
        base,
        min_k,
        cp_start,
        last,
        state.params.literal_cap,
        Mode::Single,
    )?;
    // strict nesting of the new constraint ball inside the old one
    if let Some(app) = &old {
        for _ in 0..4 {
            let new_ball = RationalInterval::ball(&target.value, &target.radius);
            let old_ball = RationalInterval::ball(&app.value, &app.radius);
            if new_ball.strictly_inside(&old_ball) {
                break;
            }
            target.tau_prime += 2;
            target.radius = rational::base_pow(base, -(target.tau_prime as i64) - 1);
        }
    }
    let tol = &target.radius / rational::int(2 * base as i64);
    let x_new = solve_preimage_certified(&f, z1, z2, &target.value, &tol)?;
    state.x_current = x_new;
    let mut checkpoints = old.as_ref().map(|a| a.checkpoints.clone()).unwrap_or_default();
    checkpoints.extend(target.checkpoints.iter().copied());
    let visits = old.as_ref().map(|a| a.visits + 1).unwrap_or(1);
    state.approximants.insert(
        "y".into(),
        Approximant {
            value: target.value.clone(),
            tau_prime: target.tau_prime,
            stem_nonzeros: target.stem_nonzeros,
            radius: target.radius.clone(),
            base,
            visits,
            checkpoints,
        },
    );
    state.visited.insert("y".into());
    state.m += 1;
    let rec = StepRecord {
        m: state.m,
        key: "y".into(),
        base,
        kind: StepKind::TargetY,
        tau_prime: Some(target.tau_prime),
        x: state.x_current.clone(),
        y: Some(target.value),
        radius: Some(target.radius),
        x_width: state.x_interval.width(),
        checkpoints_added: target.checkpoints,
    };
    state.record(rec);
    Ok(())
}

/// Run the construction until every digit of the point up to the target
/// is certified (interval width below `base^-target_digits`) or the step
/// budget runs out; emit prefixes, certificates and the transcript.
pub fn run_single(
    f: &FunctionSpec,
    interval: &RationalInterval,
    base: u32,
    target_digits: u64,
    max_steps: u64,
) -> Result<ConstructionResult> {
    let params = RunParams::for_single(target_digits, max_steps);
    let mut state = init_with_params(f, interval, base, params)?;
    let width_target = rational::base_pow(base, -(target_digits as i64));
    let mut complete = state.x_interval.width() < width_target;
    while !complete {
        if state.m >= max_steps {
            break;
        }
        match narrow_x(&mut state) {
            Ok(()) => {}
            Err(Error::Budget(_)) => break,
            Err(e) => return Err(e),
        }
        if state.x_interval.width() < width_target {
            complete = true;
            break;
        }
        if state.m >= max_steps {
            break;
        }
        match service_image(&mut state) {
            Ok(()) => {}
            Err(Error::Budget(_)) => break,
            Err(e) => return Err(e),
        }
    }
    emit_single(state, complete)
}

fn emit_single(state: ZigzagState, complete: bool) -> Result<ConstructionResult> {
    let base = state.base_single();
    let f = &state.functions[0];
    let stem = state
        .x_stem
        .as_ref()
        .ok_or_else(|| Error::invariant("no anchor to emit"))?;
    let raw = digits::expand(stem.value(), base, state.x_certified as usize)?;
    let x_prefix = DigitPrefix::new(base, raw.digits().to_vec(), false)?;
    let x_cert = digits::zero_run_certificate(&x_prefix, &state.x_checkpoints)?;
    x_cert
        .validate(&x_prefix)
        .map_err(|e| Error::invariant(format!("x certificate failed validation: {e}")))?;

    let mut image_prefixes = BTreeMap::new();
    let mut certificates = BTreeMap::new();
    certificates.insert("x".to_string(), x_cert);
    if let Some(app) = state.approximants.get("y") {
        let bits = bits_for_tolerance(&app.radius) + 16;
        let image = oracle::eval_interval_bits(f, &state.x_interval, bits)?;
        let ball = RationalInterval::ball(&app.value, &app.radius);
        let clipped = image
            .intersect(&ball)
            .ok_or_else(|| Error::invariant("final image enclosure missed its ball"))?;
        let y_prefix = common_fraction_prefix(&clipped, base, app.tau_prime + 8)?;
        let y_cert = digits::zero_run_certificate(&y_prefix, &app.checkpoints)?;
        y_cert
            .validate(&y_prefix)
            .map_err(|e| Error::invariant(format!("image certificate failed validation: {e}")))?;
        image_prefixes.insert("y".to_string(), y_prefix);
        certificates.insert("y".to_string(), y_cert);
    }
    let meta = serde_json::json!({
        "mode": "single",
        "function": f.source(),
        "base": base,
        "shift": state.shift.to_string(),
        "domain": [
            rational::format_rational(state.domain.lo()),
            rational::format_rational(state.domain.hi()),
        ],
        "target_digits": state.params.target_digits,
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
