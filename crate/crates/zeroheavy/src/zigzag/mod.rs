//! Iterative zig-zag constructions emitting certified digit prefixes of a
//! point whose expansion, and the expansions of its images under the given
//! functions, accumulate zeros at certified checkpoints.
//!
//! Three entry points share the machinery:
//!
//! * [`run_single`] — one function: interleaves pinning zeros into the
//!   point's own expansion (through nested intervals anchored at numbers
//!   with terminating expansions) with steering the image onto targets
//!   carrying an isolated trailing one.
//! * [`run_family`] — a finite family standing in for a countable one,
//!   serviced by the square-block scheduler [`sigma`]; only the images are
//!   certified, the point itself converges inside the seed interval.
//! * [`run_family_multibase`] — the same loop over (function, base) pairs.
//!
//! Each accepted image target constrains every later point of the
//! construction to a shrinking ball around it, which pins the target's
//! stem digits followed by a zero run into the image expansion; the
//! recorded checkpoints are re-derivable from the emitted prefixes alone.

mod family;
mod single;
mod solve;
mod target;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::digits::{DigitPrefix, FiniteExpansionNumber, ZeroRunCertificate};
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::oracle::FunctionSpec;
use crate::rational::{self, Rational};
use crate::Result;

pub use family::{run_family, run_family_multibase, step_algorithmic};
pub use single::{init_single, run_single, step_single};

/// The square-block scheduler: `sigma(N^2 + m) = m + 1` for `0 <= m <= 2N`.
/// Every positive integer is hit infinitely often.
pub fn sigma(m: u64) -> u64 {
    assert!(m >= 1, "scheduler is defined for m >= 1");
    let n = m.isqrt();
    m - n * n + 1
}

/// How a construction run advanced in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// Initial seed placement.
    Seed,
    /// The point's own interval was narrowed onto a fresh stem.
    NarrowX,
    /// An image target with an isolated trailing one was accepted.
    TargetY,
}

impl StepKind {
    fn as_str(self) -> &'static str {
        match self {
            StepKind::Seed => "seed",
            StepKind::NarrowX => "x-narrow",
            StepKind::TargetY => "y-target",
        }
    }
}

/// One transcript line; rationals serialize in `p/q` form.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub m: u64,
    pub key: String,
    pub base: u32,
    pub kind: StepKind,
    /// Isolated-one position of the accepted target, if any.
    pub tau_prime: Option<u64>,
    /// Point after the step.
    pub x: Rational,
    /// Accepted target value, if any.
    pub y: Option<Rational>,
    /// Constraint radius attached to the target.
    pub radius: Option<Rational>,
    /// Width of the current x-interval or search window.
    pub x_width: Rational,
    /// Checkpoint positions recorded by this step.
    pub checkpoints_added: Vec<u64>,
}

impl StepRecord {
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "k": self.key,
            "base": self.base,
            "kind": self.kind.as_str(),
            "tau_prime": self.tau_prime,
            "x": rational::format_rational(&self.x),
            "y": self.y.as_ref().map(rational::format_rational),
            "radius": self.radius.as_ref().map(rational::format_rational),
            "x_width": rational::format_rational(&self.x_width),
            "checkpoints": self.checkpoints_added,
        })
    }
}

/// Ordered log of a run: a metadata record followed by one line per step.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub meta: serde_json::Value,
    pub steps: Vec<StepRecord>,
}

impl Transcript {
    /// Line-oriented JSON, one step per line after the metadata line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        out.push_str(&serde_json::json!({ "meta": self.meta }).to_string());
        out.push('\n');
        for step in &self.steps {
            out.push_str(&step.to_json().to_string());
            out.push('\n');
        }
        out
    }
}

/// An accepted image target and the bookkeeping that keeps it pinned.
#[derive(Debug, Clone)]
pub struct Approximant {
    /// Target value; its fractional part in |.| carries the stem digits
    /// followed by zeros and the isolated one at `tau_prime`.
    pub value: Rational,
    /// Position of the isolated trailing one.
    pub tau_prime: u64,
    /// Non-zero digits among the pinned prefix (positions 1..tau_prime-1).
    pub stem_nonzeros: u64,
    /// Constraint radius `base^-(tau_prime+1)`; every later point keeps
    /// the image within this ball.
    pub radius: Rational,
    pub base: u32,
    pub visits: u64,
    /// Recorded checkpoint positions in the image expansion.
    pub checkpoints: Vec<u64>,
}

/// Construction mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Family,
}

/// Tunable limits; defaults fit desk-scale runs.
#[derive(Debug, Clone)]
pub struct RunParams {
    pub target_digits: u64,
    pub max_steps: u64,
    /// Honor the literal quadratic isolated-one placement `K > tau^2 + 1`
    /// only while it stays at or below this; beyond it the placement keeps
    /// `K` past every structural lower bound instead, so runs stay
    /// polynomial in the step count.
    pub literal_cap: u64,
    /// Cap on the x-interval exponent per narrowing, keeping emitted
    /// prefixes linear in the digit target.
    pub x_exp_cap: u64,
}

impl RunParams {
    pub fn for_single(target_digits: u64, max_steps: u64) -> Self {
        RunParams {
            target_digits,
            max_steps,
            literal_cap: 4 * target_digits + 256,
            x_exp_cap: 4 * target_digits + 64,
        }
    }

    pub fn for_family(max_steps: u64) -> Self {
        RunParams {
            target_digits: 0,
            max_steps,
            literal_cap: 256,
            x_exp_cap: 0,
        }
    }
}

/// Full state of an iterative construction.
#[derive(Debug)]
pub struct ZigzagState {
    pub(crate) mode: Mode,
    pub(crate) functions: Vec<FunctionSpec>,
    pub(crate) bases: Vec<u32>,
    /// Scheduler-order (function, base) pairs with their transcript keys.
    pub(crate) pairs: Vec<(usize, u32, String)>,
    /// Completed step count.
    pub(crate) m: u64,
    /// Normalized domain with safety margins; the construction never
    /// leaves it.
    pub(crate) domain: RationalInterval,
    /// Integer shift applied to normalize the original interval into the
    /// unit cell.
    pub(crate) shift: num_bigint::BigInt,
    /// Current nested x-interval (single mode) or last verified window.
    pub(crate) x_interval: RationalInterval,
    pub(crate) x_current: Rational,
    pub(crate) approximants: BTreeMap<String, Approximant>,
    pub(crate) visited: BTreeSet<String>,
    /// Single mode: left anchor of the current interval.
    pub(crate) x_stem: Option<FiniteExpansionNumber>,
    /// Single mode: digits of the point certified so far.
    pub(crate) x_certified: u64,
    pub(crate) x_checkpoints: Vec<u64>,
    pub(crate) steps: Vec<StepRecord>,
    pub(crate) params: RunParams,
}

impl ZigzagState {
    pub fn step_index(&self) -> u64 {
        self.m
    }

    pub fn x_current(&self) -> &Rational {
        &self.x_current
    }

    pub fn x_interval(&self) -> &RationalInterval {
        &self.x_interval
    }

    pub fn approximants(&self) -> &BTreeMap<String, Approximant> {
        &self.approximants
    }

    pub fn visited(&self) -> &BTreeSet<String> {
        &self.visited
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub(crate) fn base_single(&self) -> u32 {
        self.bases[0]
    }

    pub(crate) fn record(&mut self, record: StepRecord) {
        self.steps.push(record);
    }
}

/// Output of a construction run: certified digit prefixes, zero-run
/// certificates re-derivable from them, and the full transcript.
#[derive(Debug)]
pub struct ConstructionResult {
    pub x_prefix: DigitPrefix,
    pub image_prefixes: BTreeMap<String, DigitPrefix>,
    pub certificates: BTreeMap<String, ZeroRunCertificate>,
    pub iterations: u64,
    pub transcript: Transcript,
    /// False when the step budget ran out before the digit target;
    /// emitted data remains certified as far as it goes.
    pub complete: bool,
}

impl ConstructionResult {
    /// Re-validate every certificate against its emitted prefix.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (key, cert) in &self.certificates {
            let prefix = if key == "x" {
                &self.x_prefix
            } else {
                self.image_prefixes
                    .get(key)
                    .ok_or_else(|| format!("certificate {key} has no prefix"))?
            };
            cert.validate(prefix).map_err(|e| format!("{key}: {e}"))?;
        }
        Ok(())
    }

    /// The certificates block as JSON (prefixes are serialized separately
    /// in the digit text format).
    pub fn certificates_json(&self) -> serde_json::Value {
        let mut certs = serde_json::Map::new();
        for (key, cert) in &self.certificates {
            let cps: Vec<serde_json::Value> = cert
                .checkpoints
                .iter()
                .map(|cp| {
                    serde_json::json!({
                        "position": cp.position,
                        "frequency": rational::format_rational(&cp.frequency),
                    })
                })
                .collect();
            certs.insert(
                key.clone(),
                serde_json::json!({ "base": cert.base, "checkpoints": cps }),
            );
        }
        serde_json::json!({
            "status": if self.complete { "COMPLETE" } else { "PARTIAL" },
            "iterations": self.iterations,
            "certificates": serde_json::Value::Object(certs),
        })
    }
}

/// Longest digit prefix (in `base`) shared by every point of `iv`, read on
/// the fractional part of |.|; requires the interval to stay inside one
/// sign and one unit cell, clipping to `max_len` digits.
pub(crate) fn common_fraction_prefix(
    iv: &RationalInterval,
    base: u32,
    max_len: u64,
) -> Result<DigitPrefix> {
    let (a_lo, a_hi) = if iv.lo().is_positive() {
        (iv.lo().clone(), iv.hi().clone())
    } else if iv.hi().is_negative() {
        (-iv.hi().clone(), -iv.lo().clone())
    } else {
        return Err(Error::invariant(
            "image enclosure straddles zero; no common digits",
        ));
    };
    let cell_lo = rational::floor_int(&a_lo);
    let cell_hi = rational::floor_int(&a_hi);
    if cell_lo != cell_hi {
        return Err(Error::invariant(
            "image enclosure straddles a unit cell boundary",
        ));
    }
    let f_lo = &a_lo - Rational::from_integer(cell_lo.clone());
    let f_hi = &a_hi - Rational::from_integer(cell_lo);
    // Largest depth at which both endpoints share a digit cell; sharing is
    // downward-closed in the depth, so binary search applies.
    let shares = |d: u64| -> bool {
        let scale = rational::base_pow(base, d as i64);
        rational::floor_int(&(&f_lo * &scale)) == rational::floor_int(&(&f_hi * &scale))
    };
    if !shares(1) {
        return DigitPrefix::new(base, Vec::new(), false);
    }
    let (mut lo_d, mut hi_d) = (1u64, max_len.max(1));
    if shares(hi_d) {
        lo_d = hi_d;
    } else {
        while hi_d - lo_d > 1 {
            let mid = lo_d + (hi_d - lo_d) / 2;
            if shares(mid) {
                lo_d = mid;
            } else {
                hi_d = mid;
            }
        }
    }
    crate::digits::expand(&f_lo, base, lo_d as usize).map(|p| {
        // the prefix digits of f_lo at this depth are shared by the whole
        // interval; exactness does not transfer
        DigitPrefix::new(base, p.digits().to_vec(), false).expect("digits valid")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn sigma_square_blocks() {
        assert_eq!(sigma(1), 1);
        assert_eq!(sigma(2), 2);
        assert_eq!(sigma(3), 3);
        assert_eq!(sigma(4), 1);
        assert_eq!(sigma(8), 5);
        assert_eq!(sigma(9), 1);
        assert_eq!(sigma(15), 7);
    }

    #[test]
    fn sigma_hits_every_index_infinitely_often() {
        // direct enumeration: k appears within (n, n + (n+k)^2] for every
        // small k and window start n
        for k in 1u64..=8 {
            for n in 0u64..=1000 {
                let limit = n + (n + k) * (n + k);
                let hit = (n + 1..=limit).any(|s| sigma(s) == k);
                assert!(hit, "k={k} missing in window ({n}, {limit}]");
            }
        }
    }

    #[test]
    fn common_prefix_respects_cells() {
        // [0.1234, 0.1236] in base 10 shares "123"
        let iv = RationalInterval::new(ratio(1234, 10000), ratio(1236, 10000)).unwrap();
        let p = common_fraction_prefix(&iv, 10, 10).unwrap();
        assert_eq!(p.digits(), &[1, 2, 3]);

        // negative interval reads on |.|
        let iv = RationalInterval::new(ratio(-1236, 10000), ratio(-1234, 10000)).unwrap();
        let p = common_fraction_prefix(&iv, 10, 10).unwrap();
        assert_eq!(p.digits(), &[1, 2, 3]);

        // integer part beyond one: digits of the fractional part
        let iv = RationalInterval::new(
            int(2) + ratio(1234, 10000),
            int(2) + ratio(1236, 10000),
        )
        .unwrap();
        let p = common_fraction_prefix(&iv, 10, 10).unwrap();
        assert_eq!(p.digits(), &[1, 2, 3]);

        // straddling zero has no common digits
        let iv = RationalInterval::new(ratio(-1, 10), ratio(1, 10)).unwrap();
        assert!(common_fraction_prefix(&iv, 10, 10).is_err());
    }

    #[test]
    fn common_prefix_of_isolated_one_ball() {
        // ball around stem + b^-k of radius b^-(k+1) pins k-1 digits
        let stem = ratio(7, 10);
        let y = &stem + rational::base_pow(10, -9);
        let ball = RationalInterval::ball(&y, &rational::base_pow(10, -10));
        let p = common_fraction_prefix(&ball, 10, 64).unwrap();
        assert!(p.len() >= 8);
        assert_eq!(&p.digits()[..2], &[7, 0]);
    }
}

#[cfg(test)]
mod driver_tests {
    use super::*;
    use crate::oracle::parse;
    use crate::rational::ratio;

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> RationalInterval {
        RationalInterval::new(ratio(lo.0, lo.1), ratio(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn single_identity_certificates_coincide() {
        let f = parse("x").unwrap();
        let res = run_single(&f, &iv((1, 4), (3, 4)), 10, 60, 64).unwrap();
        assert!(res.complete);
        res.validate().expect("certificates must validate");
        assert!(res.x_prefix.len() >= 60);
        // identity: the image prefix is a prefix of the x prefix
        let y = &res.image_prefixes["y"];
        let n = y.len().min(res.x_prefix.len());
        assert!(n > 0);
        assert_eq!(&y.digits()[..n], &res.x_prefix.digits()[..n]);
    }

    #[test]
    fn single_affine_run_validates() {
        let f = parse("2*x+1/3").unwrap();
        let res = run_single(&f, &iv((1, 4), (3, 4)), 10, 50, 64).unwrap();
        assert!(res.complete);
        res.validate().expect("certificates must validate");
        // interval widths strictly decrease along the transcript
        let mut widths: Vec<Rational> = res
            .transcript
            .steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Seed | StepKind::NarrowX))
            .map(|s| s.x_width.clone())
            .collect();
        let sorted = {
            let mut w = widths.clone();
            w.sort_by(|a, b| b.cmp(a));
            w
        };
        assert_eq!(widths, sorted);
        widths.dedup();
        assert_eq!(widths.len(), sorted.len(), "widths strictly decrease");
    }

    #[test]
    fn single_exp_base2_run_validates() {
        let f = parse("exp(x)").unwrap();
        let res = run_single(&f, &iv((1, 8), (7, 8)), 2, 64, 64).unwrap();
        assert!(res.complete);
        res.validate().expect("certificates must validate");
        assert!(res.x_prefix.len() >= 64);
    }

    #[test]
    fn family_two_functions_validates() {
        let fs = vec![parse("x").unwrap(), parse("2*x").unwrap()];
        let res = run_family(&fs, &iv((0, 1), (1, 1)), 10, 12).unwrap();
        assert!(res.complete);
        res.validate().expect("certificates must validate");
        assert_eq!(res.certificates.len(), 2);
        // tau' strictly exceeds the step index at assignment
        for s in &res.transcript.steps {
            if let Some(tp) = s.tau_prime {
                assert!(tp > s.m);
            }
        }
    }

    #[test]
    fn family_multibase_identity_validates() {
        let fs = vec![parse("x").unwrap()];
        let res = run_family_multibase(&fs, &iv((0, 1), (1, 1)), &[2, 3], 10).unwrap();
        assert!(res.complete);
        res.validate().expect("certificates must validate");
        assert!(res.certificates.contains_key("f1.b2"));
        assert!(res.certificates.contains_key("f1.b3"));
    }
}

#[cfg(test)]
mod scale_probe {
    use super::*;
    use crate::oracle::parse;
    use crate::rational::ratio;

    #[test]
    #[ignore]
    fn probe_criterion_scale() {
        let iv = RationalInterval::new(ratio(1, 4), ratio(3, 4)).unwrap();
        for (src, lo, hi) in [
            ("x", (1i64, 4i64), (3i64, 4i64)),
            ("2*x+1/3", (1, 4), (3, 4)),
            ("x^2", (7, 16), (15, 16)),
            ("exp(x)", (1, 8), (7, 8)),
        ] {
            let f = parse(src).unwrap();
            let dom = RationalInterval::new(ratio(lo.0, lo.1), ratio(hi.0, hi.1)).unwrap();
            let t0 = std::time::Instant::now();
            let res = run_single(&f, &dom, 10, 200, 64).unwrap();
            let dt = t0.elapsed();
            res.validate().unwrap();
            println!(
                "{src}: {} steps, x:{} digits, y:{} digits, {:?}",
                res.iterations,
                res.x_prefix.len(),
                res.image_prefixes["y"].len(),
                dt
            );
        }
        let _ = iv;
        // family probe
        let fs: Vec<_> = ["exp(x)", "exp(2*x)", "exp(3*x)", "exp(1/2*x)", "exp(5*x)"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        let dom = RationalInterval::new(ratio(0, 1), ratio(1, 1)).unwrap();
        let t0 = std::time::Instant::now();
        let res = run_family(&fs, &dom, 10, 60).unwrap();
        println!("family 60 steps: {:?}, complete={}", t0.elapsed(), res.complete);
        res.validate().unwrap();
        for (k, c) in &res.certificates {
            println!("  {k}: {} checkpoints", c.checkpoints.len());
        }
        let mut taus: Vec<(u64, u64)> = res
            .transcript
            .steps
            .iter()
            .filter_map(|s| s.tau_prime.map(|t| (s.m, t)))
            .collect();
        taus.sort();
        println!("  tau' progression: {:?}", taus);
        // multibase probe
        let fs = vec![parse("x").unwrap()];
        let t0 = std::time::Instant::now();
        let res = run_family_multibase(&fs, &dom, &[2, 3], 40).unwrap();
        println!("multibase 40 steps: {:?} complete={}", t0.elapsed(), res.complete);
        res.validate().unwrap();
    }
}
