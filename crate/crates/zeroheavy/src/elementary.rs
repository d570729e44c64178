//! Certified enclosures of elementary functions at rational arguments.
//!
//! Everything is evaluated in scaled-integer arithmetic (`m * 2^-w`) with
//! directed rounding and explicit series remainder bounds, then returned as
//! a [`RationalInterval`] guaranteed to contain the true value with width
//! at most `2^-bits`. No floating point is involved.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::interval::RationalInterval;
use crate::rational::{self, Rational};
use crate::Result;

/// Working bits needed so that `2^-bits <= base^-p`.
pub fn bits_for_base_precision(base: u32, p: u64) -> u64 {
    let log2b = 32 - (base - 1).leading_zeros(); // ceil(log2 base)
    p * log2b as u64 + 8
}

fn shr_floor(v: &BigInt, k: u64) -> BigInt {
    // num-bigint shifts BigInt arithmetically (floor semantics).
    v >> k
}

fn shr_ceil(v: &BigInt, k: u64) -> BigInt {
    -(&(-v) >> k)
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    Integer::div_floor(a, b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    Integer::div_ceil(a, b)
}

/// Exact lowest-terms rational `m * 2^-w` built by stripping trailing
/// zero bits; avoids the general gcd that `Ratio::new` would run.
pub(crate) fn dyadic(m: BigInt, w: u64) -> Rational {
    if m.is_zero() {
        return Rational::zero();
    }
    let tz = m.trailing_zeros().unwrap_or(0).min(w);
    Rational::new_raw(m >> tz, BigInt::one() << (w - tz))
}

/// Directed fixed-point enclosure of a rational at scale `2^-w`.
fn fx_of(q: &Rational, w: u64) -> Fx {
    let scaled_num = q.numer() << w;
    let lo = div_floor(&scaled_num, q.denom());
    let hi = div_ceil(&scaled_num, q.denom());
    Fx { lo, hi }
}

/// Scaled-integer interval `[lo, hi] * 2^-w`; the scale is carried by the
/// surrounding computation.
#[derive(Debug, Clone)]
struct Fx {
    lo: BigInt,
    hi: BigInt,
}

impl Fx {
    fn exact(v: BigInt) -> Self {
        Fx { lo: v.clone(), hi: v }
    }

    fn add(&self, other: &Fx) -> Fx {
        Fx {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    fn sub(&self, other: &Fx) -> Fx {
        Fx {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    fn neg(&self) -> Fx {
        Fx {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    fn mul_shift(&self, other: &Fx, w: u64) -> Fx {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if p < &lo {
                lo = p.clone();
            }
            if p > &hi {
                hi = p.clone();
            }
        }
        Fx {
            lo: shr_floor(&lo, w),
            hi: shr_ceil(&hi, w),
        }
    }

    /// Square of a non-negative interval: two big multiplications.
    fn square_shift(&self, w: u64) -> Fx {
        debug_assert!(!self.lo.is_negative());
        Fx {
            lo: shr_floor(&(&self.lo * &self.lo), w),
            hi: shr_ceil(&(&self.hi * &self.hi), w),
        }
    }

    fn div_int(&self, n: u64) -> Fx {
        let d = BigInt::from(n);
        Fx {
            lo: div_floor(&self.lo, &d),
            hi: div_ceil(&self.hi, &d),
        }
    }

    fn widen_ulps(&self, ulps: u64) -> Fx {
        let u = BigInt::from(ulps);
        Fx {
            lo: &self.lo - &u,
            hi: &self.hi + &u,
        }
    }

    fn mag(&self) -> BigInt {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    fn rescale(&self, from_w: u64, to_w: u64) -> Fx {
        if from_w == to_w {
            return self.clone();
        }
        assert!(from_w > to_w);
        let k = from_w - to_w;
        Fx {
            lo: shr_floor(&self.lo, k),
            hi: shr_ceil(&self.hi, k),
        }
    }

    fn to_interval(&self, w: u64) -> RationalInterval {
        RationalInterval::new(dyadic(self.lo.clone(), w), dyadic(self.hi.clone(), w))
            .expect("lo <= hi by construction")
    }
}

fn width_ok(iv: &RationalInterval, bits: u64) -> bool {
    iv.width() <= Rational::new(BigInt::one(), BigInt::one() << bits)
}

/// Width check in the scaled-integer domain: `(hi - lo) 2^-w <= 2^-bits`.
fn fx_width_ok(acc: &Fx, w: u64, bits: u64) -> bool {
    w >= bits && (&acc.hi - &acc.lo) <= (BigInt::one() << (w - bits))
}

const MAX_ATTEMPTS: u32 = 8;

/// Instrumentation: total elementary-kernel invocations (test builds read
/// this to sanity-check evaluation counts).
pub static KERNEL_CALLS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Enclosure of `exp(x)` with width at most `2^-bits`.
pub fn exp_enclosure(x: &Rational, bits: u64) -> Result<RationalInterval> {
    KERNEL_CALLS.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let mag = x.abs();
    if mag > rational::int(1 << 20) {
        return Err(Error::budget(format!(
            "exp argument magnitude {} exceeds supported range",
            rational::format_rational(&mag)
        )));
    }
    // halve until the series argument is at most 2^-26; the squaring
    // ladder costs one multiplication per level while every spared series
    // term costs one, so a deep reduction wins at high precision
    let mut s = 0u64;
    let mut bound = rational::base_pow(2, -26);
    while mag > bound {
        bound *= rational::int(2);
        s += 1;
    }
    // integer bits of the result, for the absolute-width target
    let out_bits: u64 = if x.is_positive() {
        let f = rational::floor_int(x);
        3 * u64::try_from(f.max(BigInt::zero())).unwrap_or(0) + 4
    } else {
        4
    };
    let mut w = bits + out_bits + 2 * s + 64;
    for _ in 0..MAX_ATTEMPTS {
        let arg = x / rational::base_pow(2, s as i64);
        let mut acc = exp_series_centered(&arg, w)?;
        for _ in 0..s {
            if acc.lo.is_negative() {
                acc.lo = BigInt::zero();
            }
            let sq = acc.square_shift(w).widen_ulps(1);
            acc = sq;
        }
        if fx_width_ok(&acc, w, bits) {
            return Ok(acc.to_interval(w));
        }
        w *= 2;
    }
    Err(Error::budget("exp enclosure failed to reach target width"))
}

/// Taylor series for exp on arguments of magnitude at most 2^-26,
/// tracking one center value and an error bound instead of full interval
/// products: one big multiplication per term.
fn exp_series_centered(arg: &Rational, w: u64) -> Result<Fx> {
    let scaled = (arg.numer() << w) / arg.denom();
    let xc = scaled; // |xc - arg 2^w| <= 1
    let xmag = xc.abs();
    let mut term_v = BigInt::one() << w;
    let mut term_e = BigInt::zero();
    let mut sum_v = term_v.clone();
    let mut sum_e = BigInt::zero();
    let mut n = 1u64;
    let cap = 4 * w + 64;
    loop {
        // term' = term * x / n with directed error accounting:
        // |err'| <= (e |xc| + |v| * 1) / 2^w / n + 2
        let prod_err = (&term_e * &xmag + term_v.abs()) >> w;
        term_v = (&term_v * &xc) >> w;
        term_v /= n;
        term_e = prod_err / n + 2u32;
        sum_v += &term_v;
        sum_e += &term_e;
        let m = term_v.abs() + &term_e;
        if m <= BigInt::from(16) {
            // ratio of consecutive terms is below 2^-25; tail under 1 ulp
            sum_e += BigInt::from(32);
            return Ok(Fx {
                lo: &sum_v - &sum_e,
                hi: sum_v + sum_e,
            });
        }
        n += 1;
        if n > cap {
            return Err(Error::invariant("exp series failed to converge"));
        }
    }
}

/// Enclosure of `ln(x)` for `x > 0` with width at most `2^-bits`.
pub fn ln_enclosure(x: &Rational, bits: u64) -> Result<RationalInterval> {
    if !x.is_positive() {
        return Err(Error::domain(format!(
            "ln requires a positive argument, got {}",
            rational::format_rational(x)
        )));
    }
    let mut w = bits + 64;
    for _ in 0..MAX_ATTEMPTS {
        // normalize x = 2^e * m with m in [1, 2)
        let mut e: i64 =
            x.numer().magnitude().bits() as i64 - x.denom().magnitude().bits() as i64;
        let two = rational::int(2);
        let one = rational::int(1);
        let mut m = x / rational::base_pow(2, e);
        while m >= two {
            m /= &two;
            e += 1;
        }
        while m < one {
            m *= &two;
            e -= 1;
        }
        let u = (&m - &one) / (&m + &one);
        let ln_m = atanh_fx(&fx_of(&u, w), w)?;
        let ln2 = cached_ln2(w)?;
        let a = &ln2.lo * e;
        let b = &ln2.hi * e;
        let scaled = Fx {
            lo: a.clone().min(b.clone()),
            hi: a.max(b),
        };
        let total = ln_m.add(&scaled);
        if fx_width_ok(&total, w, bits) {
            return Ok(total.to_interval(w));
        }
        w *= 2;
    }
    Err(Error::budget("ln enclosure failed to reach target width"))
}

/// atanh series `2 * sum u^(2k+1) / (2k+1)` valid for `0 <= u <= 1/3`.
fn atanh_fx(u: &Fx, w: u64) -> Result<Fx> {
    let u2 = u.mul_shift(u, w).widen_ulps(1);
    let mut power = u.clone();
    let mut sum = power.div_int(1);
    let mut k = 1u64;
    let cap = 4 * w + 64;
    loop {
        power = power.mul_shift(&u2, w).widen_ulps(1);
        let term = power.div_int(2 * k + 1).widen_ulps(1);
        sum = sum.add(&term);
        if power.mag() <= BigInt::from(16) {
            // geometric tail with ratio <= 1/9
            sum = sum.widen_ulps(32);
            return Ok(Fx {
                lo: sum.lo << 1,
                hi: sum.hi << 1,
            });
        }
        k += 1;
        if k > cap {
            return Err(Error::invariant("atanh series failed to converge"));
        }
    }
}

static LN2_CACHE: Mutex<Option<(u64, BigInt, BigInt)>> = Mutex::new(None);
static PI_CACHE: Mutex<Option<(u64, BigInt, BigInt)>> = Mutex::new(None);

fn cached_ln2(w: u64) -> Result<Fx> {
    let mut guard = LN2_CACHE.lock().expect("ln2 cache poisoned");
    if let Some((cw, lo, hi)) = guard.as_ref() {
        if *cw >= w {
            return Ok(Fx {
                lo: lo.clone(),
                hi: hi.clone(),
            }
            .rescale(*cw, w));
        }
    }
    let u = rational::ratio(1, 3);
    let v = atanh_fx(&fx_of(&u, w), w)?;
    *guard = Some((w, v.lo.clone(), v.hi.clone()));
    Ok(v)
}

/// Enclosure of pi with width at most `2^-bits`.
pub fn pi_enclosure(bits: u64) -> Result<RationalInterval> {
    let w = bits + 32;
    Ok(cached_pi(w)?.to_interval(w))
}

fn cached_pi(w: u64) -> Result<Fx> {
    let mut guard = PI_CACHE.lock().expect("pi cache poisoned");
    if let Some((cw, lo, hi)) = guard.as_ref() {
        if *cw >= w {
            return Ok(Fx {
                lo: lo.clone(),
                hi: hi.clone(),
            }
            .rescale(*cw, w));
        }
    }
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let a5 = atan_inv_fx(5, w)?;
    let a239 = atan_inv_fx(239, w)?;
    let pi = Fx {
        lo: &a5.lo << 4,
        hi: &a5.hi << 4,
    }
    .sub(&Fx {
        lo: &a239.lo << 2,
        hi: &a239.hi << 2,
    });
    *guard = Some((w, pi.lo.clone(), pi.hi.clone()));
    Ok(pi)
}

/// Alternating series for atan(1/c) with integer c >= 2.
fn atan_inv_fx(c: u64, w: u64) -> Result<Fx> {
    let c2 = BigInt::from(c * c);
    let mut power = Fx {
        lo: div_floor(&(BigInt::one() << w), &BigInt::from(c)),
        hi: div_ceil(&(BigInt::one() << w), &BigInt::from(c)),
    };
    let mut sum = power.clone();
    let mut k = 1u64;
    let cap = 4 * w + 64;
    loop {
        power = Fx {
            lo: div_floor(&power.lo, &c2),
            hi: div_ceil(&power.hi, &c2),
        };
        let term = power.div_int(2 * k + 1).widen_ulps(1);
        sum = if k % 2 == 1 {
            sum.sub(&term)
        } else {
            sum.add(&term)
        };
        if power.mag() <= BigInt::from(16) {
            return Ok(sum.widen_ulps(32));
        }
        k += 1;
        if k > cap {
            return Err(Error::invariant("atan series failed to converge"));
        }
    }
}

/// Enclosure of `sin(x)` at a rational point with width at most `2^-bits`.
pub fn sin_enclosure(x: &Rational, bits: u64) -> Result<RationalInterval> {
    sin_cos_point(x, bits, false)
}

/// Enclosure of `cos(x)` at a rational point with width at most `2^-bits`.
pub fn cos_enclosure(x: &Rational, bits: u64) -> Result<RationalInterval> {
    sin_cos_point(x, bits, true)
}

fn sin_cos_point(x: &Rational, bits: u64, cosine: bool) -> Result<RationalInterval> {
    let mut w = bits + 64 + x.abs().ceil().to_integer().magnitude().bits();
    for _ in 0..MAX_ATTEMPTS {
        let arg = reduce_mod_2pi(x, w)?;
        let val = sin_cos_series(&arg, w, cosine)?;
        if fx_width_ok(&val, w, bits) {
            return Ok(val.to_interval(w));
        }
        w *= 2;
    }
    Err(Error::budget("sin/cos enclosure failed to reach target width"))
}

/// Reduce `x` modulo 2*pi into an Fx interval within roughly [-pi, pi].
fn reduce_mod_2pi(x: &Rational, w: u64) -> Result<Fx> {
    let pi = cached_pi(w)?;
    let two_pi = Fx {
        lo: &pi.lo << 1,
        hi: &pi.hi << 1,
    };
    // n = round(x / 2pi) from midpoints; any nearby integer is sound since
    // the shift below is an interval subtraction.
    let two_pi_mid = Rational::new(&two_pi.lo + &two_pi.hi, BigInt::from(2) << w);
    let n = rational::floor_int(&(x / two_pi_mid + rational::ratio(1, 2)));
    let xfx = fx_of(x, w);
    let a = &two_pi.lo * &n;
    let b = &two_pi.hi * &n;
    let shift = Fx {
        lo: a.clone().min(b.clone()),
        hi: a.max(b),
    };
    Ok(xfx.sub(&shift))
}

/// Taylor series for sin or cos on arguments of magnitude at most ~3.5.
fn sin_cos_series(x: &Fx, w: u64, cosine: bool) -> Result<Fx> {
    let x2 = x.mul_shift(x, w).widen_ulps(1);
    let mut term = if cosine {
        Fx::exact(BigInt::one() << w)
    } else {
        x.clone()
    };
    let mut sum = term.clone();
    let mut n = 1u64;
    let cap = 4 * w + 64;
    loop {
        let (d1, d2) = if cosine {
            (2 * n - 1, 2 * n)
        } else {
            (2 * n, 2 * n + 1)
        };
        term = term
            .mul_shift(&x2, w)
            .div_int(d1)
            .div_int(d2)
            .widen_ulps(2)
            .neg();
        sum = sum.add(&term);
        // once the term ratio falls below 1/2 the tail is bounded by twice
        // the next term magnitude
        if term.mag() <= BigInt::from(16) && (d2 + 1) * (d2 + 2) > 32 {
            return Ok(sum.widen_ulps(48));
        }
        n += 1;
        if n > cap {
            return Err(Error::invariant("sin/cos series failed to converge"));
        }
    }
}

/// Enclosure of the image of `[a, b]` under sin.
pub fn sin_interval(a: &Rational, b: &Rational, bits: u64) -> Result<RationalInterval> {
    trig_interval(a, b, bits, false)
}

/// Enclosure of the image of `[a, b]` under cos.
pub fn cos_interval(a: &Rational, b: &Rational, bits: u64) -> Result<RationalInterval> {
    trig_interval(a, b, bits, true)
}

fn trig_interval(a: &Rational, b: &Rational, bits: u64, cosine: bool) -> Result<RationalInterval> {
    let one = rational::int(1);
    let full = RationalInterval::new(-one.clone(), one.clone()).expect("ordered");
    let width = b - a;
    let pi_iv = pi_enclosure(64)?;
    if width >= rational::int(2) * pi_iv.lo().clone() {
        return Ok(full);
    }
    let fa = sin_cos_point(a, bits, cosine)?;
    let fb = sin_cos_point(b, bits, cosine)?;
    let mut out = fa.hull(&fb);
    // Extrema of sin sit at (k + 1/2) pi, extrema of cos at k pi. Widen to
    // the extreme value whenever a candidate may intersect [a, b].
    let half = rational::ratio(1, 2);
    let lo_scaled = a / pi_iv.hi().clone();
    let hi_scaled = b / pi_iv.lo().clone();
    let mut k: BigInt = rational::floor_int(&lo_scaled) - 1;
    let k_hi = rational::floor_int(&hi_scaled) + 1;
    while k <= k_hi {
        let offset = if cosine {
            Rational::from_integer(k.clone())
        } else {
            Rational::from_integer(k.clone()) + &half
        };
        let c1 = pi_iv.lo().clone() * &offset;
        let c2 = pi_iv.hi().clone() * &offset;
        let (c_min, c_max) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        if &c_max >= a && &c_min <= b {
            // sin((k + 1/2) pi) = (-1)^k, cos(k pi) = (-1)^k
            let even = (&k % BigInt::from(2)).is_zero();
            let extreme = if even { one.clone() } else { -one.clone() };
            out = out.hull(&RationalInterval::point(extreme));
        }
        k += BigInt::one();
    }
    Ok(out.intersect(&full).unwrap_or(full))
}

/// Enclosure of `x^(1/n)` for `x >= 0`, width at most `2^-bits`.
pub fn root_enclosure(x: &Rational, n: u32, bits: u64) -> Result<RationalInterval> {
    if x.is_negative() {
        return Err(Error::domain("root of a negative value"));
    }
    if n == 0 {
        return Err(Error::domain("zeroth root undefined"));
    }
    let w = bits + 2;
    let shifted: BigInt = (x.numer() << (n as u64 * w)) / x.denom();
    let lo_root = shifted.magnitude().nth_root(n);
    let hi_root = (shifted.magnitude() + 1u32).nth_root(n) + 1u32;
    let den = BigInt::one() << w;
    RationalInterval::new(
        Rational::new(BigInt::from(lo_root), den.clone()),
        Rational::new(BigInt::from(hi_root), den),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    /// Independent oracle: exact rational Taylor partial sum for exp with
    /// an explicit remainder bound, no fixed-point arithmetic involved.
    fn exp_taylor_oracle(x: &Rational, terms: u32) -> (Rational, Rational) {
        let mut term = rational::int(1);
        let mut sum = rational::int(1);
        for n in 1..=terms {
            term = term * x / rational::int(n as i64);
            sum += &term;
        }
        let next = term.abs() * x.abs() / rational::int(terms as i64 + 1);
        (sum, next * rational::int(2))
    }

    #[test]
    fn exp_matches_rational_taylor_oracle() {
        for (num, den) in [(0i64, 1i64), (1, 1), (1, 3), (-2, 5), (5, 2), (-3, 1)] {
            let x = ratio(num, den);
            let iv = exp_enclosure(&x, 80).unwrap();
            let (approx, rem) = exp_taylor_oracle(&x, 60);
            assert!(iv.lo() <= &(&approx + &rem), "lo too high for {num}/{den}");
            assert!(iv.hi() >= &(&approx - &rem), "hi too low for {num}/{den}");
            assert!(iv.width() <= rational::base_pow(2, -80));
        }
    }

    #[test]
    fn exp_of_zero_and_one() {
        let iv = exp_enclosure(&rational::int(0), 60).unwrap();
        assert!(iv.contains(&rational::int(1)));
        // e in [2.718281, 2.718283] at 6 decimal digits of precision
        let iv = exp_enclosure(&rational::int(1), bits_for_base_precision(10, 6)).unwrap();
        assert!(iv.lo() >= &ratio(2_718_281, 1_000_000));
        assert!(iv.hi() <= &ratio(2_718_283, 1_000_000));
    }

    #[test]
    fn ln_inverts_exp() {
        for (num, den) in [(1i64, 2i64), (2, 1), (10, 1), (7, 3)] {
            let x = ratio(num, den);
            let lx = ln_enclosure(&x, 100).unwrap();
            // exp(lo) <= x <= exp(hi)
            let back_lo = exp_enclosure(lx.lo(), 110).unwrap();
            let back_hi = exp_enclosure(lx.hi(), 110).unwrap();
            assert!(back_lo.lo() <= &x && &x <= back_hi.hi());
        }
        assert!(ln_enclosure(&rational::int(0), 20).is_err());
        assert!(ln_enclosure(&ratio(-1, 2), 20).is_err());
    }

    #[test]
    fn pi_matches_reference_digits() {
        let iv = pi_enclosure(120).unwrap();
        let approx =
            rational::parse_rational("3.14159265358979323846264338327950288").unwrap();
        let err = (iv.midpoint() - approx).abs();
        assert!(err < rational::parse_rational("1/1000000000000000000000000000000").unwrap());
        assert!(iv.width() <= rational::base_pow(2, -120));
    }

    #[test]
    fn sin_cos_special_points() {
        let s0 = sin_enclosure(&rational::int(0), 60).unwrap();
        assert!(s0.contains(&rational::int(0)));
        let c0 = cos_enclosure(&rational::int(0), 60).unwrap();
        assert!(c0.contains(&rational::int(1)));
        // sin(pi_mid) is within the pi enclosure width of zero
        let pi_mid = pi_enclosure(200).unwrap().midpoint();
        let sp = sin_enclosure(&pi_mid, 100).unwrap();
        assert!(sp.lo().abs() < rational::base_pow(2, -90));
        // Pythagorean identity at x = 1 within combined widths
        let s1 = sin_enclosure(&rational::int(1), 80).unwrap();
        let c1 = cos_enclosure(&rational::int(1), 80).unwrap();
        let sum = s1.pow(2).unwrap().add(&c1.pow(2).unwrap());
        assert!(sum.contains(&rational::int(1)));
    }

    #[test]
    fn sin_interval_covers_extremum() {
        // [1, 2.4] contains pi/2 where sin attains 1
        let iv = sin_interval(&rational::int(1), &ratio(12, 5), 40).unwrap();
        assert!(iv.hi() >= &rational::int(1));
        assert!(iv.lo() <= &ratio(85, 100));
    }

    #[test]
    fn root_encloses_integer_roots() {
        let iv = root_enclosure(&rational::int(4), 2, 60).unwrap();
        assert!(iv.contains(&rational::int(2)));
        let iv = root_enclosure(&rational::int(2), 2, 60).unwrap();
        let sq = iv.pow(2).unwrap();
        assert!(sq.contains(&rational::int(2)));
        assert!(iv.width() <= rational::base_pow(2, -60));
        let iv = root_enclosure(&ratio(27, 8), 3, 50).unwrap();
        assert!(iv.contains(&ratio(3, 2)));
    }

    #[test]
    fn enclosures_nest_under_refinement() {
        for bits in [40u64, 60, 90] {
            let coarse = exp_enclosure(&ratio(7, 5), bits).unwrap();
            let fine = exp_enclosure(&ratio(7, 5), bits + 20).unwrap();
            assert!(coarse.contains_interval(&fine));
        }
    }
}
