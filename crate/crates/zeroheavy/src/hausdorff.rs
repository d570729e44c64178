//! Exact enumeration and certified bounds for zero-heavy words, and the
//! cover-cost sums that witness the vanishing s-dimensional pre-measure of
//! the zero-accumulating set at desk scale.
//!
//! Conventions: a word of length `M` over base `b` is zero-heavy at level
//! `eps` when its zero count is at least `(1 - eps) M`. The certified
//! counting chain used throughout, with `J = floor(eps M)`:
//!
//! ```text
//! count(b, M, eps) = sum_{j=0..J} binom(M, j) (b-1)^j        (exact)
//!                 <= (J+1) binom(M, J) (b-1)^J               (monotone terms)
//!                 <= exp((2 gamma(eps) + eps ln(b-1)) M)      for M >= m0
//! ```
//!
//! using the entropy bound `binom(M, J) <= exp(gamma(J/M) M)` and
//! `J + 1 <= eps M + 1 <= exp(gamma(eps) M)` beyond the reported
//! threshold. An `eps` accepted by [`epsilon_for_s`] makes the right side
//! at most `b^(s M / 2)`, which drives the geometric cover-cost tail.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::elementary;
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::rational::{self, Rational};
use crate::Result;

fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || eps >= &rational::ratio(1, 2) {
        return Err(Error::domain(format!(
            "eps must lie in (0, 1/2), got {}",
            rational::format_rational(eps)
        )));
    }
    Ok(())
}

/// Exact count of words of length `m` over base `b` whose zero frequency
/// is at least `1 - eps`, via the binomial sum.
pub fn count_omega(b: u32, m: u64, eps: &Rational) -> Result<BigUint> {
    if b < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    if m == 0 {
        return Err(Error::domain("word length must be at least 1"));
    }
    check_eps(eps)?;
    let j_max = rational::floor_int(&(eps * rational::int(m as i64)));
    let j_max = j_max.to_u64().expect("floor(eps m) fits u64");
    let bm1 = BigUint::from(b - 1);
    let mut binom = BigUint::one(); // binom(m, 0)
    let mut power = BigUint::one(); // (b-1)^0
    let mut total = BigUint::one();
    for j in 1..=j_max {
        binom = binom * BigUint::from(m - j + 1) / BigUint::from(j);
        power *= &bm1;
        total += &binom * &power;
    }
    Ok(total)
}

/// The closed-form bound `eps M binom(M, ceil((1-eps) M)) (b-1)^ceil(eps M)`;
/// it dominates the exact count for every `M` at or beyond
/// [`omega_bound_threshold`], and may undershoot below it.
pub fn omega_upper_bound(b: u32, m: u64, eps: &Rational) -> Result<Rational> {
    if b < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    if m == 0 {
        return Err(Error::domain("word length must be at least 1"));
    }
    check_eps(eps)?;
    let em = eps * rational::int(m as i64);
    let j = rational::floor_int(&em).to_u64().expect("fits");
    let e_ceil = rational::floor_int(&(-&em)).magnitude().to_u64().expect("fits");
    let mut binom = BigUint::one();
    for i in 1..=j {
        binom = binom * BigUint::from(m - i + 1) / BigUint::from(i);
    }
    let power = BigUint::from(b - 1).pow(e_ceil as u32);
    Ok(em * Rational::from_integer(BigInt::from(binom * power)))
}

/// Smallest `M0` from which [`omega_upper_bound`] provably dominates the
/// exact count for every `M >= M0`: the terms of the binomial sum decay by
/// at least `r = eps / ((1-eps)(b-1))` each, so the sum is below
/// `binom(M, J) (b-1)^J / (1 - r)`, and `eps M >= 1 / (1 - r)` suffices.
pub fn omega_bound_threshold(b: u32, eps: &Rational) -> Result<u64> {
    if b < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    check_eps(eps)?;
    let one = rational::int(1);
    let r = eps / ((&one - eps) * rational::int((b - 1) as i64));
    if r >= one {
        return Err(Error::invariant("term ratio not contracting"));
    }
    let bound = &one / (eps * (&one - &r));
    let m0 = rational::floor_int(&bound).to_u64().expect("fits") + 1;
    Ok(m0.max(1))
}

/// Certified enclosure of the binary entropy
/// `gamma(x) = -x ln x - (1-x) ln(1-x)` with width at most `2^-p`;
/// the endpoint values are exactly zero by the continuity convention.
pub fn binary_entropy(x: &Rational, p: u64) -> Result<RationalInterval> {
    let one = rational::int(1);
    if x.is_negative() || x > &one {
        return Err(Error::domain(format!(
            "entropy argument must lie in [0, 1], got {}",
            rational::format_rational(x)
        )));
    }
    if x.is_zero() || x == &one {
        return Ok(RationalInterval::point(Rational::zero()));
    }
    let mut bits = p + 8;
    for _ in 0..8 {
        let ln_x = elementary::ln_enclosure(x, bits)?;
        let comp = &one - x;
        let ln_c = elementary::ln_enclosure(&comp, bits)?;
        let xs = RationalInterval::point(x.clone());
        let cs = RationalInterval::point(comp);
        let out = xs.mul(&ln_x).add(&cs.mul(&ln_c)).neg();
        if out.width() <= rational::base_pow(2, -(p as i64)) {
            return Ok(out);
        }
        bits *= 2;
    }
    Err(Error::budget("entropy enclosure failed to converge"))
}

/// An accepted zero-heaviness level for exponent `s`: `eps` satisfies
/// `2 gamma(eps) + eps ln(b-1) < s ln(b) / 2` with certified margin, and
/// `m0` is the threshold from which both the closed-form word bound and
/// the exponential bound are certified.
#[derive(Debug, Clone)]
pub struct EpsilonSelection {
    pub epsilon: Rational,
    pub m0: u64,
}

/// Select `eps` by halving from `1/4` until the entropy inequality holds
/// with certified enclosures, and compute its certification threshold.
pub fn epsilon_for_s(s: &Rational, b: u32) -> Result<EpsilonSelection> {
    if !s.is_positive() {
        return Err(Error::domain("exponent s must be positive"));
    }
    if b < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    let mut eps = rational::ratio(1, 4);
    for _ in 0..64 {
        match epsilon_condition_holds(&eps, s, b)? {
            Some(true) => {
                let m0 = certification_threshold(&eps, b)?;
                return Ok(EpsilonSelection { epsilon: eps, m0 });
            }
            _ => eps /= rational::int(2),
        }
    }
    Err(Error::budget(
        "no eps accepted within 64 halvings; the entropy term should vanish as eps -> 0",
    ))
}

/// Certified three-way check of `2 gamma(eps) + eps ln(b-1) < s ln(b)/2`;
/// `Some(true)` holds, `Some(false)` provably fails, `None` undecided.
pub fn epsilon_condition_holds(eps: &Rational, s: &Rational, b: u32) -> Result<Option<bool>> {
    let mut bits = 48u64;
    for _ in 0..4 {
        let gamma = binary_entropy(eps, bits)?;
        let two = rational::int(2);
        let lhs = if b == 2 {
            gamma.mul(&RationalInterval::point(two.clone()))
        } else {
            let lnb1 = elementary::ln_enclosure(&rational::int((b - 1) as i64), bits)?;
            gamma
                .mul(&RationalInterval::point(two.clone()))
                .add(&lnb1.mul(&RationalInterval::point(eps.clone())))
        };
        let lnb = elementary::ln_enclosure(&rational::int(b as i64), bits)?;
        let rhs = lnb.mul(&RationalInterval::point(s / two));
        if lhs.hi() < rhs.lo() {
            return Ok(Some(true));
        }
        if lhs.lo() >= rhs.hi() {
            return Ok(Some(false));
        }
        bits *= 2;
    }
    Ok(None)
}

/// Threshold `m0` such that for all `M >= m0`:
/// the closed-form word bound dominates the count, and
/// `eps M + 1 <= exp(gamma(eps) M)` (so the exponential bound holds).
fn certification_threshold(eps: &Rational, b: u32) -> Result<u64> {
    let m_a = omega_bound_threshold(b, eps)?;
    // smallest M with ln(eps M + 1) <= gamma_lo M and slope condition
    // eps / (eps M + 1) <= gamma_lo; concavity then settles all larger M.
    let gamma_lo = binary_entropy(eps, 64)?.lo().clone();
    if !gamma_lo.is_positive() {
        return Err(Error::invariant("entropy lower bound not positive"));
    }
    let mut m = 1u64;
    loop {
        let v = eps * rational::int(m as i64) + rational::int(1);
        let ln_hi = elementary::ln_enclosure(&v, 64)?.hi().clone();
        let slope_ok = eps / &v <= gamma_lo;
        if ln_hi <= &gamma_lo * rational::int(m as i64) && slope_ok {
            return Ok(m.max(m_a));
        }
        m += 1;
        if m > 1_000_000 {
            return Err(Error::budget("certification threshold scan exhausted"));
        }
    }
}

/// One row of a cover-cost report: the exact word count at length `m` and
/// a rational upper bound of the cost term `2^s count b^(-s m)`.
#[derive(Debug, Clone)]
pub struct CoverRow {
    pub m: u64,
    pub count: BigUint,
    pub cost_upper: Rational,
}

/// Certified upper bound on the delta-restricted s-dimensional cover cost
/// of the zero-accumulating set in the unit interval: exact rows from
/// `k_start` to `m_cap` plus a certified geometric tail beyond.
#[derive(Debug, Clone)]
pub struct CoverBoundReport {
    pub base: u32,
    pub s: Rational,
    pub epsilon: Rational,
    pub m0: u64,
    pub k_start: u64,
    pub m_cap: u64,
    pub rows: Vec<CoverRow>,
    /// Upper bound of the tail `sum_{M > m_cap} 2^s count b^(-s M)`.
    pub tail_upper: Rational,
    /// Rows plus tail: a certified upper bound of the whole sum from
    /// `k_start` on.
    pub total_upper: Rational,
    /// Enclosure of the closed-form full-tail value
    /// `2^s b^(-K s/2) / (1 - b^(-s/2))`, against which the total is
    /// compared; the geometric sum is taken with the decaying ratio
    /// `b^(-s/2)` so every quantity is positive.
    pub formula: RationalInterval,
}

impl CoverBoundReport {
    /// CSV: one row per word length plus a trailing tail row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("M,count,cost_upper\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.m,
                row.count,
                rational::format_rational(&row.cost_upper)
            ));
        }
        out.push_str(&format!(
            "tail,,{}\n",
            rational::format_rational(&self.tail_upper)
        ));
        out
    }

    /// JSON summary with exact rational totals.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.base,
            "s": rational::format_rational(&self.s),
            "epsilon": rational::format_rational(&self.epsilon),
            "m0": self.m0,
            "k_start": self.k_start,
            "m_cap": self.m_cap,
            "rows": self.rows.len(),
            "tail_upper": rational::format_rational(&self.tail_upper),
            "total_upper": rational::format_rational(&self.total_upper),
            "formula_lo": rational::format_rational(self.formula.lo()),
            "formula_hi": rational::format_rational(self.formula.hi()),
        })
    }
}

/// Rational enclosure of `base^exponent` for positive rational exponent.
fn pow_rational(base: u32, exponent: &Rational, bits: u64) -> Result<RationalInterval> {
    if !exponent.is_positive() {
        return Err(Error::domain("exponent must be positive here"));
    }
    let p = exponent.numer().to_u64().ok_or_else(|| {
        Error::budget("exponent numerator too large for certified powering")
    })?;
    let q = exponent.denom().to_u32().ok_or_else(|| {
        Error::budget("exponent denominator too large for certified powering")
    })?;
    let powered = Rational::from_integer(BigInt::from(base).pow(p as u32));
    elementary::root_enclosure(&powered, q, bits)
}

fn reciprocal(iv: &RationalInterval) -> Result<RationalInterval> {
    if !iv.lo().is_positive() {
        return Err(Error::invariant("reciprocal of a non-positive enclosure"));
    }
    let one = rational::int(1);
    RationalInterval::new(&one / iv.hi(), &one / iv.lo())
}

/// Build the cover-cost report. Requires `eps` (with its threshold `m0`)
/// accepted by [`epsilon_for_s`] for this `s` and `b`, `k_start >= m0`
/// so the per-term geometric bound applies throughout, and
/// `m_cap >= k_start`.
pub fn cover_cost(
    b: u32,
    s: &Rational,
    selection: &EpsilonSelection,
    k_start: u64,
    m_cap: u64,
) -> Result<CoverBoundReport> {
    let eps = &selection.epsilon;
    match epsilon_condition_holds(eps, s, b)? {
        Some(true) => {}
        _ => {
            return Err(Error::domain(
                "eps does not certify the entropy inequality for this s and b",
            ))
        }
    }
    if k_start < 1 || m_cap < k_start {
        return Err(Error::domain("need 1 <= k_start <= m_cap"));
    }
    if k_start < selection.m0 {
        return Err(Error::domain(format!(
            "k_start {} below certification threshold m0 = {}",
            k_start, selection.m0
        )));
    }
    let bits = 96u64;
    // 2^s upper bound
    let two_s = pow_rational(2, s, bits)?;
    let mut rows = Vec::new();
    let mut rows_total = Rational::zero();
    for m in k_start..=m_cap {
        let count = count_omega(b, m, eps)?;
        // b^(-s m) upper = reciprocal of lower bound of b^(s m)
        let bsm = pow_rational(b, &(s * rational::int(m as i64)), bits)?;
        let inv = reciprocal(&bsm)?;
        let cost_upper =
            two_s.hi() * Rational::from_integer(BigInt::from(count.clone())) * inv.hi();
        rows_total += &cost_upper;
        rows.push(CoverRow {
            m,
            count,
            cost_upper,
        });
    }
    // tail: sum_{M > m_cap} 2^s b^(-s M / 2) = 2^s b^(-s (m_cap+1)/2) / (1 - b^(-s/2))
    let tail_upper = geometric_tail_upper(b, s, m_cap + 1, &two_s, bits)?;
    let total_upper = &rows_total + &tail_upper;
    // closed-form comparison value: full geometric tail from k_start
    let formula = geometric_tail_enclosure(b, s, k_start, &two_s, bits)?;
    Ok(CoverBoundReport {
        base: b,
        s: s.clone(),
        epsilon: eps.clone(),
        m0: selection.m0,
        k_start,
        m_cap,
        rows,
        tail_upper,
        total_upper,
        formula,
    })
}

/// Upper bound of `2^s sum_{M >= from} b^(-s M / 2)`.
fn geometric_tail_upper(
    b: u32,
    s: &Rational,
    from: u64,
    two_s: &RationalInterval,
    bits: u64,
) -> Result<Rational> {
    Ok(geometric_tail_enclosure(b, s, from, two_s, bits)?.hi().clone())
}

/// Enclosure of `2^s b^(-s K / 2) / (1 - b^(-s/2))`.
fn geometric_tail_enclosure(
    b: u32,
    s: &Rational,
    k: u64,
    two_s: &RationalInterval,
    bits: u64,
) -> Result<RationalInterval> {
    let half_s = s / rational::int(2);
    // ratio = b^(-s/2) in (0, 1)
    let ratio = reciprocal(&pow_rational(b, &half_s, bits)?)?;
    if ratio.hi() >= &rational::int(1) {
        return Err(Error::invariant("geometric ratio not contracting"));
    }
    let lead = reciprocal(&pow_rational(b, &(half_s * rational::int(k as i64)), bits)?)?;
    let one = RationalInterval::point(rational::int(1));
    let denom = one.sub(&ratio);
    two_s.mul(&lead).div(&denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    /// Brute-force oracle: enumerate every word and count zeros directly.
    fn brute_force_count(b: u32, m: u64, eps: &Rational) -> BigUint {
        let total = (b as u64).pow(m as u32);
        let mut count = 0u64;
        for code in 0..total {
            let mut c = code;
            let mut zeros = 0u64;
            for _ in 0..m {
                if c % b as u64 == 0 {
                    zeros += 1;
                }
                c /= b as u64;
            }
            // zero frequency >= 1 - eps <=> zeros >= (1 - eps) m
            if Rational::new(BigInt::from(zeros), BigInt::from(m)) >= int(1) - eps {
                count += 1;
            }
        }
        BigUint::from(count)
    }

    #[test]
    fn count_examples_from_binomial_sums() {
        assert_eq!(count_omega(2, 4, &ratio(1, 4)).unwrap(), BigUint::from(5u32));
        assert_eq!(
            count_omega(2, 1, &ratio(49, 100)).unwrap(),
            BigUint::from(1u32)
        );
        // b=3, M=3, eps=1/3: words with >= 2 zeros: 1 + 3*2 = 7
        assert_eq!(count_omega(3, 3, &ratio(1, 3)).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn count_matches_brute_force() {
        for b in 2u32..=4 {
            for m in 1u64..=8 {
                for eps in [ratio(1, 8), ratio(1, 4), ratio(1, 3)] {
                    assert_eq!(
                        count_omega(b, m, &eps).unwrap(),
                        brute_force_count(b, m, &eps),
                        "mismatch at b={b} m={m} eps={eps}"
                    );
                }
            }
        }
    }

    #[test]
    fn count_monotone_in_eps() {
        for m in 1u64..=10 {
            let a = count_omega(2, m, &ratio(1, 8)).unwrap();
            let b = count_omega(2, m, &ratio(1, 4)).unwrap();
            let c = count_omega(2, m, &ratio(1, 3)).unwrap();
            assert!(a <= b && b <= c);
        }
    }

    #[test]
    fn upper_bound_is_asymptotic() {
        // the b=2, M=4, eps=1/4 bound undershoots the exact count of 5
        let bound = omega_upper_bound(2, 4, &ratio(1, 4)).unwrap();
        assert_eq!(bound, int(4));
        let m0 = omega_bound_threshold(2, &ratio(1, 4)).unwrap();
        assert!(m0 > 4);
        for m in m0..=m0 + 24 {
            let bound = omega_upper_bound(2, m, &ratio(1, 4)).unwrap();
            let count = count_omega(2, m, &ratio(1, 4)).unwrap();
            assert!(
                bound >= Rational::from_integer(BigInt::from(count)),
                "bound below count at m = {m}"
            );
        }
        // unit factor in base 2
        let b12 = omega_upper_bound(2, 12, &ratio(1, 4)).unwrap();
        let em = ratio(12, 4);
        let binom = Rational::from_integer(BigInt::from(220u32)); // C(12, 9)
        assert_eq!(b12, em * binom);
    }

    #[test]
    fn upper_bound_dominates_beyond_threshold_base3() {
        let eps = ratio(1, 4);
        let m0 = omega_bound_threshold(3, &eps).unwrap();
        for m in m0..=m0 + 12 {
            let bound = omega_upper_bound(3, m, &eps).unwrap();
            let count = count_omega(3, m, &eps).unwrap();
            assert!(bound >= Rational::from_integer(BigInt::from(count)));
        }
    }

    #[test]
    fn entropy_enclosure_values() {
        // gamma(1/2) = ln 2
        let g = binary_entropy(&ratio(1, 2), 60).unwrap();
        let ln2 = elementary::ln_enclosure(&int(2), 70).unwrap();
        assert!(g.intersect(&ln2).is_some());
        // endpoints exactly zero
        assert!(binary_entropy(&int(0), 10).unwrap().is_point());
        assert_eq!(binary_entropy(&int(1), 10).unwrap().lo(), &int(0));
        // gamma(1/4) = (1/4) ln 4 + (3/4) ln(4/3), via the ln oracle
        let g4 = binary_entropy(&ratio(1, 4), 60).unwrap();
        let ln4 = elementary::ln_enclosure(&int(4), 70).unwrap();
        let ln43 = elementary::ln_enclosure(&ratio(4, 3), 70).unwrap();
        let expect = ln4
            .mul(&RationalInterval::point(ratio(1, 4)))
            .add(&ln43.mul(&RationalInterval::point(ratio(3, 4))));
        assert!(g4.intersect(&expect).is_some());
        assert!(g4.width() <= rational::base_pow(2, -60));
    }

    #[test]
    fn entropy_width_shrinks_with_precision() {
        for p in [20u64, 30, 40, 50] {
            let g = binary_entropy(&ratio(2, 7), p).unwrap();
            assert!(g.width() <= rational::base_pow(2, -(p as i64)));
        }
    }

    #[test]
    fn epsilon_selection_certifies() {
        let sel = epsilon_for_s(&int(1), 2).unwrap();
        // base 2 condition is 2 gamma(eps) < ln(2)/2; halving from 1/4
        // first succeeds at 1/32
        assert_eq!(sel.epsilon, ratio(1, 32));
        assert_eq!(
            epsilon_condition_holds(&sel.epsilon, &int(1), 2).unwrap(),
            Some(true)
        );
        // re-validate under an independent higher-precision enclosure
        let g = binary_entropy(&sel.epsilon, 128).unwrap();
        let ln2 = elementary::ln_enclosure(&int(2), 128).unwrap();
        assert!(g.hi() * int(2) < ln2.lo() / int(2));
        assert!(sel.m0 >= 1);

        let sel10 = epsilon_for_s(&ratio(1, 10), 10).unwrap();
        assert_eq!(
            epsilon_condition_holds(&sel10.epsilon, &ratio(1, 10), 10).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn cover_cost_report_shape() {
        let s = int(1);
        let sel = epsilon_for_s(&s, 2).unwrap();
        let k = sel.m0.max(40);
        let report = cover_cost(2, &s, &sel, k, k + 20).unwrap();
        assert_eq!(report.rows.len(), 21);
        assert!(report.total_upper.is_positive());
        // every row cost positive and the total below the closed form
        for row in &report.rows {
            assert!(row.cost_upper.is_positive());
        }
        assert!(&report.total_upper <= report.formula.hi());
        // monotone in k: larger start strictly shrinks the total
        let report2 = cover_cost(2, &s, &sel, k + 10, k + 30).unwrap();
        assert!(report2.total_upper < report.total_upper);
        // rejects k below threshold and bad eps
        assert!(cover_cost(2, &s, &sel, 1, 10).is_err());
        let bad = EpsilonSelection {
            epsilon: ratio(1, 4),
            m0: 6,
        };
        assert!(cover_cost(2, &s, &bad, 40, 60).is_err());
    }

    #[test]
    fn csv_and_json_render() {
        let s = int(1);
        let sel = epsilon_for_s(&s, 2).unwrap();
        let report = cover_cost(2, &s, &sel, 40, 44).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("M,count,cost_upper\n"));
        assert!(csv.lines().count() == 1 + 5 + 1);
        let json = report.to_json();
        assert_eq!(json["base"], 2);
        assert_eq!(json["m0"], serde_json::json!(sel.m0));
    }
}
