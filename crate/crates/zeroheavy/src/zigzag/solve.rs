//! Certified solving machinery shared by the constructions: directed
//! preimage search by safeguarded bisection with interval-Newton
//! acceleration, and window/constraint verification helpers.

use num_traits::Signed;

use crate::error::Error;
use crate::interval::RationalInterval;
use crate::oracle::{self, FunctionSpec};
use crate::rational::{self, Rational};
use crate::Result;

/// Binary precision needed to resolve quantities at scale `tol`.
pub(crate) fn bits_for_tolerance(tol: &Rational) -> u64 {
    let num_bits = tol.numer().magnitude().bits();
    let den_bits = tol.denom().magnitude().bits();
    den_bits.saturating_sub(num_bits) + 16
}

/// Round down onto the dyadic grid `2^-bits`; keeps every intermediate
/// rational in the solver at a bounded representation size, which matters
/// because each exact-arithmetic step would otherwise compound.
pub(crate) fn snap_dyadic(q: &Rational, bits: u64) -> Rational {
    let scaled = (q.numer() << bits) / q.denom();
    Rational::new(scaled, num_bigint::BigInt::from(1) << bits)
}

/// Where a point's image sits relative to a target ball.
enum Placement {
    Inside,
    Below,
    Above,
}

/// Precomputed comparison bounds for classifying images against a target
/// ball; keeps the solver loop free of mixed-denominator arithmetic.
struct TargetBall {
    target: Rational,
    lo_bound: Rational,
    hi_bound: Rational,
}

impl TargetBall {
    fn new(target: &Rational, tol: &Rational) -> Self {
        TargetBall {
            target: target.clone(),
            lo_bound: target - tol,
            hi_bound: target + tol,
        }
    }
}

/// Classify `f(x)` against the ball, escalating precision until the
/// enclosure decides.
fn classify(
    f: &FunctionSpec,
    x: &Rational,
    ball: &TargetBall,
    start_bits: u64,
) -> Result<Placement> {
    let mut bits = start_bits;
    for _ in 0..40 {
        let e = oracle::eval_point_bits(f, x, bits)?;
        if e.lo() > &ball.lo_bound && e.hi() < &ball.hi_bound {
            return Ok(Placement::Inside);
        }
        if e.hi() < &ball.target {
            return Ok(Placement::Below);
        }
        if e.lo() > &ball.target {
            return Ok(Placement::Above);
        }
        bits *= 2;
    }
    Err(Error::budget(
        "could not classify an image against the target ball",
    ))
}

/// Find `x` in the bracket with `|f(x) - target| < tol`, given certified
/// opposite placements at the bracket ends. Bisection guarantees progress;
/// a Newton candidate runs whenever the derivative has certified sign over
/// the bracket, with a forced bisection whenever two rounds fail to halve
/// the width.
pub(crate) fn solve_preimage(
    f: &FunctionSpec,
    bracket: (Rational, Rational),
    target: &Rational,
    tol: &Rational,
) -> Result<Rational> {
    let bits = bits_for_tolerance(tol);
    let ball = TargetBall::new(target, tol);
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let lo_place = classify(f, &lo, &ball, bits)?;
    match lo_place {
        Placement::Inside => return Ok(lo),
        _ => {}
    }
    let hi_place = classify(f, &hi, &ball, bits)?;
    match hi_place {
        Placement::Inside => return Ok(hi),
        _ => {}
    }
    let lo_below = match (lo_place, hi_place) {
        (Placement::Below, Placement::Above) => true,
        (Placement::Above, Placement::Below) => false,
        _ => {
            return Err(Error::invariant(
                "solver bracket does not straddle the target",
            ))
        }
    };
    solve_bracketed(f, lo, hi, lo_below, &ball, bits)
}

/// Variant taking bracket points with already-certified placements (the
/// point whose image lies below the target, and the one above), skipping
/// the endpoint classification round.
pub(crate) fn solve_preimage_certified(
    f: &FunctionSpec,
    below: Rational,
    above: Rational,
    target: &Rational,
    tol: &Rational,
) -> Result<Rational> {
    let bits = bits_for_tolerance(tol);
    let ball = TargetBall::new(target, tol);
    let lo_below = below < above;
    let (lo, hi) = if lo_below {
        (below, above)
    } else {
        (above, below)
    };
    solve_bracketed(f, lo, hi, lo_below, &ball, bits)
}

fn solve_bracketed(
    f: &FunctionSpec,
    mut lo: Rational,
    mut hi: Rational,
    lo_below: bool,
    ball: &TargetBall,
    bits: u64,
) -> Result<Rational> {
    let max_iters = 4 * bits + 256;
    let grid = bits + 32;
    let deriv = f.derivative_spec();
    let two = rational::int(2);
    // derivative sign over the initial bracket decides whether Newton is
    // trustworthy throughout (the bracket only shrinks)
    let newton_ok = {
        let seg = RationalInterval::new(lo.clone(), hi.clone())?;
        matches!(oracle::eval_interval_bits(&deriv, &seg, 64), Ok(d) if !d.contains_zero())
    };
    let mut since_halving = 0u32;
    let mut last_width = &hi - &lo;
    for _ in 0..max_iters {
        let width = &hi - &lo;
        if &width * &two <= last_width {
            last_width = width.clone();
            since_halving = 0;
        } else {
            since_halving += 1;
        }
        let exact_mid = (&lo + &hi) / &two;
        let snapped = snap_dyadic(&exact_mid, grid);
        let mid = if snapped > lo && snapped < hi {
            snapped
        } else {
            exact_mid
        };
        // far from the tolerance scale a coarse evaluation decides the
        // sign; full precision only matters once the bracket is tight
        let coarse = bits_for_tolerance(&width).min(bits) + 64;
        let candidate = if newton_ok && since_halving < 2 {
            let seg = RationalInterval::new(lo.clone(), hi.clone())?;
            match oracle::eval_interval_bits(&deriv, &seg, 64) {
                Ok(d) if !d.contains_zero() => {
                    let fm = oracle::eval_point_bits(f, &mid, coarse)?;
                    let step = (fm.midpoint() - &ball.target) / d.midpoint();
                    let c = snap_dyadic(&(&mid - step), grid);
                    // keep strictly inside the bracket
                    let pad = &width / rational::int(16);
                    if c > &lo + &pad && c < &hi - &pad {
                        c
                    } else {
                        mid
                    }
                }
                _ => mid,
            }
        } else {
            since_halving = 0;
            mid
        };
        match classify(f, &candidate, ball, coarse)? {
            Placement::Inside => return Ok(candidate),
            Placement::Below => {
                if lo_below {
                    lo = candidate;
                } else {
                    hi = candidate;
                }
            }
            Placement::Above => {
                if lo_below {
                    hi = candidate;
                } else {
                    lo = candidate;
                }
            }
        }
    }
    Err(Error::budget(format!(
        "preimage solve did not converge within {max_iters} iterations"
    )))
}

/// Certified pair of disjoint image enclosures in a window, refined until
/// their gap exceeds four times the enclosure precision; returns the
/// sample points, enclosures, and that precision.
pub(crate) fn separated_pair(
    f: &FunctionSpec,
    window: &RationalInterval,
    start_bits: u64,
) -> Result<(Rational, Rational, RationalInterval, RationalInterval, Rational)> {
    let w = window.width();
    if !w.is_positive() {
        return Err(Error::WitnessNotFound("empty search window".into()));
    }
    for (a, b) in [(1i64, 7i64), (1, 5), (3, 7), (1, 4), (2, 7)] {
        let z1 = window.lo() + &w * rational::ratio(a, 8);
        let z2 = window.lo() + &w * rational::ratio(b, 8);
        let mut bits = start_bits.max(24);
        for _ in 0..40 {
            let e1 = oracle::eval_point_bits(f, &z1, bits)?;
            let e2 = oracle::eval_point_bits(f, &z2, bits)?;
            let eps = {
                let w1 = e1.width();
                let w2 = e2.width();
                let m = if w1 >= w2 { w1 } else { w2 };
                if m.is_positive() {
                    m
                } else {
                    // exact evaluations: scale eps to the observed gap
                    let gap = (e1.midpoint() - e2.midpoint()).abs();
                    if gap.is_positive() {
                        gap / rational::int(8)
                    } else {
                        break; // equal exact values; next pair
                    }
                }
            };
            let (lo_e, hi_e) = if e1.hi() < e2.lo() {
                (&e1, &e2)
            } else if e2.hi() < e1.lo() {
                (&e2, &e1)
            } else {
                bits *= 2;
                continue;
            };
            let gap = lo_e.lo() - hi_e.hi();
            if gap.abs() > rational::int(4) * &eps {
                let (z_lo, z_hi, el, eh) = if e1.hi() < e2.lo() {
                    (z1.clone(), z2.clone(), e1.clone(), e2.clone())
                } else {
                    (z2.clone(), z1.clone(), e2.clone(), e1.clone())
                };
                return Ok((z_lo, z_hi, el, eh, eps));
            }
            bits *= 2;
        }
    }
    Err(Error::WitnessNotFound(format!(
        "no certified value separation inside [{}, {}]",
        rational::format_rational(window.lo()),
        rational::format_rational(window.hi())
    )))
}

/// Check that the image of `window` under `f` stays strictly inside
/// `ball`; evaluation precision follows the ball radius.
pub(crate) fn window_within(
    f: &FunctionSpec,
    window: &RationalInterval,
    ball: &RationalInterval,
) -> Result<bool> {
    let bits = bits_for_tolerance(&ball.width()) + 8;
    let image = oracle::eval_interval_bits(f, window, bits)?;
    Ok(image.strictly_inside(ball))
}

/// Upper bound for |f'| over a window, floored away from zero so it can
/// serve as a denominator.
pub(crate) fn derivative_bound(f: &FunctionSpec, window: &RationalInterval) -> Result<Rational> {
    let d = oracle::eval_interval_bits(&f.derivative_spec(), window, 64)?;
    let m = {
        let a = d.lo().abs();
        let b = d.hi().abs();
        if a >= b {
            a
        } else {
            b
        }
    };
    let floor = rational::base_pow(2, -24);
    Ok(if m > floor { m } else { floor })
}
