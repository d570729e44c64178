//! Selection of image targets with an isolated trailing one inside a
//! certified reachable zone, together with the checkpoint positions their
//! zero runs support.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::digits::FiniteExpansionNumber;
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::rational::{self, Rational};
use crate::Result;

use super::Mode;

/// A chosen target `sign (cell + stem + base^-K)` and its bookkeeping.
#[derive(Debug, Clone)]
pub(crate) struct TargetSpec {
    pub value: Rational,
    /// Isolated-one position K in the fractional expansion of |value|.
    pub tau_prime: u64,
    /// Constraint radius `base^-(K+1)`.
    pub radius: Rational,
    /// Non-zero digits of the pinned prefix (all inside the stem).
    pub stem_nonzeros: u64,
    /// New checkpoint positions supported by the pinned prefix, continuing
    /// the caller's ordinal count.
    pub checkpoints: Vec<u64>,
}

/// Pick a target inside the open zone. `min_k` forces `K > min_k`; the
/// literal quadratic placement `K > tau(stem)^2 + 1` is honored whenever
/// it stays at or below `literal_cap` (deeper stems would make the run
/// super-exponential in the step count, so past the cap only the
/// structural lower bounds apply). Checkpoint positions for ordinals
/// `cp_start+1, ...` are emitted as far as the pinned prefix supports
/// them within the mode's growth allowance.
pub(crate) fn pick_target(
    zone: &RationalInterval,
    base: u32,
    min_k: u64,
    cp_start: usize,
    last_checkpoint: u64,
    literal_cap: u64,
    mode: Mode,
) -> Result<TargetSpec> {
    if !zone.width().is_positive() {
        return Err(Error::invariant("target zone is degenerate"));
    }
    // Reduce to a positive sub-zone away from zero and inside one unit
    // cell; a few rounds suffice since each keeps at least a third.
    let (mut a, mut b, negative) = orient(zone);
    // cell of the upper end, right-open: an integer endpoint belongs to
    // the cell below it
    let hi_cell = |v: &Rational| {
        if v.is_integer() {
            rational::floor_int(v) - BigInt::from(1)
        } else {
            rational::floor_int(v)
        }
    };
    for _ in 0..64 {
        let cell_a = rational::floor_int(&a);
        let cell_b = hi_cell(&b);
        if cell_a == cell_b {
            break;
        }
        let split = Rational::from_integer(cell_a + BigInt::from(1));
        let left = &split - &a;
        let right = &b - &split;
        if left >= right {
            b = split;
        } else {
            a = split;
        }
    }
    let cell = rational::floor_int(&a);
    if cell != hi_cell(&b) {
        return Err(Error::invariant("zone spans too many unit cells"));
    }
    let width = &b - &a;
    let margin = &width / rational::int(8);
    let fa = &a - Rational::from_integer(cell.clone()) + &margin;
    let fb = &b - Rational::from_integer(cell.clone()) - &margin;
    let inner = &fb - &fa;
    if !inner.is_positive() {
        return Err(Error::invariant("zone too thin after margins"));
    }

    // stem: the truncation of the zone midpoint at the shallowest depth
    // that keeps it strictly interior
    let quarter = &inner / rational::int(4);
    let mut d = 1u64;
    while rational::base_pow(base, -(d as i64)) > quarter {
        d += 1;
        if d > 1 << 24 {
            return Err(Error::budget("target stem depth out of range"));
        }
    }
    let mid = (&fa + &fb) / rational::int(2);
    let scale = rational::base_pow(base, d as i64);
    let scaled = rational::floor_int(&(&mid * &scale));
    let (stem, stem_digits) = FiniteExpansionNumber::from_scaled_integer(scaled, d, base)?;
    let stem_value = stem.value().clone();
    let stem_tau = stem.tau();
    let nz = stem_digits.iter().filter(|&&x| x != 0).count() as u64;

    // Growth allowance for checkpoint stretching: family runs keep it at
    // two prefix-lengths so the cross-constraint cascade stays linear;
    // single runs may stretch with the round count.
    let allowance = match mode {
        Mode::Family => (2 * nz + 2).max(256),
        Mode::Single => ((cp_start as u64 + 2) * nz + 2).max(256),
    };
    let max_total_cp = cp_start + 6;
    let mut j_star = cp_start as u64;
    for j in (cp_start as u64 + 1)..=(max_total_cp as u64) {
        if nz == 0 || j * nz + 1 <= allowance {
            j_star = j;
        } else {
            break;
        }
    }

    let mut k = (min_k + 1).max(d + 2).max(stem_tau + 2);
    let literal = stem_tau * stem_tau + 2;
    if literal <= literal_cap && literal > k {
        k = literal;
    }
    if j_star > cp_start as u64 && nz > 0 {
        k = k.max(j_star * nz + 1);
    }

    let mut checkpoints = Vec::new();
    let mut prev = last_checkpoint;
    for c in (cp_start as u64 + 1)..=j_star {
        let pos = (c * nz).max(prev + 1);
        if pos > k - 1 {
            break;
        }
        checkpoints.push(pos);
        prev = pos;
    }

    let y_frac = &stem_value + rational::base_pow(base, -(k as i64));
    let y_abs = Rational::from_integer(cell) + y_frac;
    let value = if negative { -y_abs } else { y_abs };
    if !(zone.lo() < &value && &value < zone.hi()) {
        return Err(Error::invariant("selected target escaped its zone"));
    }
    Ok(TargetSpec {
        value,
        tau_prime: k,
        radius: rational::base_pow(base, -(k as i64) - 1),
        stem_nonzeros: nz,
        checkpoints,
    })
}

/// Map a zone to positive coordinates, stepping off zero if it straddles.
fn orient(zone: &RationalInterval) -> (Rational, Rational, bool) {
    if zone.lo().is_positive() {
        (zone.lo().clone(), zone.hi().clone(), false)
    } else if zone.hi().is_negative() {
        (-zone.hi().clone(), -zone.lo().clone(), true)
    } else {
        let pos = zone.hi().clone();
        let neg = -zone.lo().clone();
        if pos >= neg {
            // keep the upper third, safely above zero
            let third = &pos / rational::int(3);
            (pos - &third, zone.hi().clone(), false)
        } else {
            let third = &neg / rational::int(3);
            (neg - &third, -zone.lo().clone(), true)
        }
    }
}

/// Append checkpoint positions for a terminating-stem prefix certified to
/// depth `max_pos`: ordinal `c` needs its position at or past `c * nz`.
pub(crate) fn extend_checkpoints(
    cp_start: usize,
    nz: u64,
    max_pos: u64,
    last_checkpoint: u64,
    max_new: usize,
) -> Vec<u64> {
    let mut out = Vec::new();
    let mut prev = last_checkpoint;
    for c in (cp_start as u64 + 1)..=(cp_start as u64 + max_new as u64) {
        let pos = (c * nz).max(prev + 1);
        if pos > max_pos {
            break;
        }
        out.push(pos);
        prev = pos;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits;
    use crate::rational::ratio;

    #[test]
    fn target_lands_inside_zone_with_isolated_one() {
        let zone = RationalInterval::new(ratio(3, 10), ratio(4, 10)).unwrap();
        let t = pick_target(&zone, 10, 5, 0, 0, 1024, Mode::Single).unwrap();
        assert!(zone.contains(&t.value));
        assert!(t.tau_prime > 5);
        // decompose: the fractional part must carry an isolated final one
        let dec = digits::decompose_tprime(&t.value, 10).unwrap();
        // the literal quadratic placement applies for this shallow stem
        let dec = dec.expect("literal placement expected below the cap");
        assert_eq!(dec.k(), t.tau_prime);
    }

    #[test]
    fn target_checkpoints_respect_ordinals() {
        let zone = RationalInterval::new(ratio(123456, 1000000), ratio(123466, 1000000)).unwrap();
        let t = pick_target(&zone, 10, 3, 0, 0, 1024, Mode::Family).unwrap();
        let mut prev = 0u64;
        for (i, &pos) in t.checkpoints.iter().enumerate() {
            let c = i as u64 + 1;
            assert!(pos >= c * t.stem_nonzeros);
            assert!(pos > prev);
            assert!(pos <= t.tau_prime - 1);
            prev = pos;
        }
        assert!(t.checkpoints.len() >= 2);
    }

    #[test]
    fn negative_zone_reflects() {
        let zone = RationalInterval::new(ratio(-4, 10), ratio(-3, 10)).unwrap();
        let t = pick_target(&zone, 10, 2, 0, 0, 1024, Mode::Single).unwrap();
        assert!(zone.contains(&t.value));
        assert!(t.value.is_negative());
    }

    #[test]
    fn straddling_zone_steps_off_zero() {
        let zone = RationalInterval::new(ratio(-1, 100), ratio(3, 100)).unwrap();
        let t = pick_target(&zone, 2, 2, 0, 0, 1024, Mode::Single).unwrap();
        assert!(zone.contains(&t.value));
        assert!(t.value.is_positive());
    }

    #[test]
    fn deep_stems_skip_literal_placement() {
        // zone of width 10^-40: stem depth ~ 41, literal K would be ~1700
        let lo = ratio(1, 3);
        let hi = &lo + rational::base_pow(10, -40);
        let zone = RationalInterval::new(lo, hi).unwrap();
        let t = pick_target(&zone, 10, 7, 0, 0, 256, Mode::Family).unwrap();
        assert!(t.tau_prime < 1000);
        assert!(t.tau_prime > 40);
        // two checkpoints guaranteed on first service
        assert!(t.checkpoints.len() >= 2);
    }
}
