//! The classical Cantor digit map `C`, its symmetrisation `C_s`, the
//! one-stripped word decomposition, and the enriched function built from
//! self-similar copies of `C_s`, with exact truncation-level approximants
//! and zero-heaviness witnesses for the binary expansion of its values.
//!
//! Rational inputs are handled exactly through their eventually-periodic
//! ternary expansions; nothing on this path is approximate unless a cycle
//! search is explicitly capped.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::digits::{self, DigitPrefix, PeriodicExpansion, ZeroRunCertificate};
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::rational::{self, Rational};
use crate::Result;

/// Cap on the remainder states explored when expanding a rational; cycles
/// of rationals used here are far below this.
const CYCLE_CAP: usize = 1 << 20;

/// A finite word over the ternary alphabet {0, 1, 2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryWord(Vec<u8>);

impl TernaryWord {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::domain(format!("digit {d} outside the ternary alphabet")));
        }
        Ok(TernaryWord(digits))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let digits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1),
                '2' => Ok(2),
                other => Err(Error::domain(format!("bad ternary digit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        TernaryWord::new(digits)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The rational `0.w` represented by the word.
    pub fn value(&self) -> Rational {
        let three = BigInt::from(3);
        let mut num = BigInt::zero();
        for &d in &self.0 {
            num = num * &three + BigInt::from(d);
        }
        Rational::new(num, three.pow(self.0.len() as u32))
    }

    pub fn to_string_digits(&self) -> String {
        self.0.iter().map(|d| char::from(b'0' + d)).collect()
    }
}

/// The Cantor digit map on a finite word read as the full expansion `0.w`:
/// binary digits `min(d_i, 1)` up to and including the first `1`, zeros
/// afterwards. Always a dyadic rational.
pub fn cantor_c_word(word: &TernaryWord) -> Rational {
    let mut num = BigInt::zero();
    let mut len = 0u32;
    for &d in word.digits() {
        num = (num << 1) + BigInt::from(d.min(1));
        len += 1;
        if d == 1 {
            break;
        }
    }
    if len == 0 {
        return Rational::zero();
    }
    Rational::new(num, BigInt::one() << len)
}

/// `C_s(0.w) = min(C, 1 - C)` on a finite word.
pub fn cantor_cs_word(word: &TernaryWord) -> Rational {
    let c = cantor_c_word(word);
    let flip = rational::int(1) - &c;
    if c <= flip {
        c
    } else {
        flip
    }
}

/// Exact or enclosed value of the Cantor map at a rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CantorValue {
    Exact(Rational),
    Enclosure(RationalInterval),
}

impl CantorValue {
    pub fn as_interval(&self) -> RationalInterval {
        match self {
            CantorValue::Exact(v) => RationalInterval::point(v.clone()),
            CantorValue::Enclosure(iv) => iv.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            CantorValue::Exact(v) => Some(v),
            CantorValue::Enclosure(_) => None,
        }
    }
}

/// The Cantor map at a rational in `[0, 1]`.
///
/// Exact whenever the eventually-periodic ternary expansion is computable
/// within the cycle cap (always, for reasonable denominators); with the
/// cap exceeded and no `1` within `depth` digits, a sound enclosure of
/// width `2^-depth` is returned instead of a possibly wrong exact value.
pub fn cantor_c(x: &Rational, depth: usize) -> Result<CantorValue> {
    if x == &rational::int(1) {
        // boundary value fixed by the reflection symmetry C(1-x) = 1-C(x)
        return Ok(CantorValue::Exact(rational::int(1)));
    }
    match digits::expand_periodic(x, 3, CYCLE_CAP) {
        Ok(exp) => Ok(CantorValue::Exact(cantor_c_periodic(&exp))),
        Err(Error::Budget(_)) => {
            let prefix = digits::expand(x, 3, depth)?;
            let word = TernaryWord::new(prefix.digits().iter().map(|&d| d as u8).collect())?;
            if prefix.exact() || word.digits().contains(&1) {
                return Ok(CantorValue::Exact(cantor_c_word(&word)));
            }
            // No '1' seen: the min-map of the prefix is a lower bound and a
            // tail of ones raises it by at most 2^-depth.
            let lo = cantor_c_word(&word);
            let hi = &lo + rational::base_pow(2, -(depth as i64));
            Ok(CantorValue::Enclosure(RationalInterval::new(lo, hi)?))
        }
        Err(e) => Err(e),
    }
}

/// Exact Cantor value from a full eventually-periodic ternary expansion.
fn cantor_c_periodic(exp: &PeriodicExpansion) -> Rational {
    // first '1', if any, in prefix or cycle
    let prefix_one = exp.prefix.iter().position(|&d| d == 1);
    let cycle_one = exp.cycle.iter().position(|&d| d == 1);
    let first_one = match (prefix_one, cycle_one) {
        (Some(i), _) => Some(i as u64 + 1),
        (None, Some(j)) => Some(exp.prefix.len() as u64 + j as u64 + 1),
        (None, None) => None,
    };
    match first_one {
        Some(m) => {
            let digits: Vec<u8> = (1..=m).map(|i| exp.digit(i) as u8).collect();
            cantor_c_word(&TernaryWord(digits))
        }
        None => {
            // no '1' anywhere: C flips 2 -> 1 over the whole expansion,
            // summed exactly via the geometric cycle
            let p = exp.prefix.len() as u32;
            let mut num = BigInt::zero();
            for &d in &exp.prefix {
                num = (num << 1) + BigInt::from(d.min(1));
            }
            let prefix_val = if p == 0 {
                Rational::zero()
            } else {
                Rational::new(num, BigInt::one() << p)
            };
            if exp.cycle.is_empty() {
                return prefix_val;
            }
            let c = exp.cycle.len() as u32;
            let mut cnum = BigInt::zero();
            for &d in &exp.cycle {
                cnum = (cnum << 1) + BigInt::from(d.min(1));
            }
            let cycle_val = Rational::new(cnum, (BigInt::one() << c) - BigInt::one());
            prefix_val + cycle_val / Rational::from_integer(BigInt::one() << p)
        }
    }
}

/// `C_s(x) = min(C(x), 1 - C(x))` at a rational in `[0, 1]`.
pub fn cantor_cs(x: &Rational, depth: usize) -> Result<CantorValue> {
    match cantor_c(x, depth)? {
        CantorValue::Exact(c) => {
            let flip = rational::int(1) - &c;
            Ok(CantorValue::Exact(if c <= flip { c } else { flip }))
        }
        CantorValue::Enclosure(iv) => {
            // image of [lo, hi] under t -> min(t, 1-t)
            let half = rational::ratio(1, 2);
            let one = rational::int(1);
            let out = if iv.hi() <= &half {
                iv
            } else if iv.lo() >= &half {
                RationalInterval::new(&one - iv.hi(), &one - iv.lo())?
            } else {
                let a = iv.lo().clone();
                let b = &one - iv.hi();
                RationalInterval::new(if a <= b { a } else { b }, half)?
            };
            Ok(CantorValue::Enclosure(out))
        }
    }
}

/// Count of ones in the full ternary expansion of a rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnesCount {
    Finite(u64),
    Infinite,
}

/// Tail of a one-stripped decomposition: the `1`-free part after the last
/// block (exact as a word or rational), or a truncation marker when only
/// finitely many blocks of an infinite decomposition were materialized.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    Word(TernaryWord),
    Rational(Rational),
    Truncated,
}

/// Decomposition of an expansion into one-stripped blocks (each containing
/// exactly one `1`, as its last digit) followed by a `1`-free tail.
#[derive(Debug, Clone, PartialEq)]
pub struct OneStrippedDecomposition {
    pub words: Vec<TernaryWord>,
    pub tail: Tail,
    pub ones: OnesCount,
}

impl OneStrippedDecomposition {
    /// Lengths partial sums `P_r = |w_1| + ... + |w_r|`.
    pub fn length_prefix_sums(&self) -> Vec<u64> {
        let mut acc = 0u64;
        self.words
            .iter()
            .map(|w| {
                acc += w.len() as u64;
                acc
            })
            .collect()
    }
}

/// Split a finite word after each `1`.
pub fn one_stripped_word(word: &TernaryWord) -> OneStrippedDecomposition {
    let mut words = Vec::new();
    let mut current = Vec::new();
    for &d in word.digits() {
        current.push(d);
        if d == 1 {
            words.push(TernaryWord(std::mem::take(&mut current)));
        }
    }
    let ones = OnesCount::Finite(words.len() as u64);
    OneStrippedDecomposition {
        words,
        tail: Tail::Word(TernaryWord(current)),
        ones,
    }
}

/// One-stripped decomposition of a rational's full ternary expansion,
/// materializing at most `max_blocks` blocks when there are infinitely
/// many ones.
pub fn one_stripped(x: &Rational, max_blocks: usize) -> Result<OneStrippedDecomposition> {
    let exp = digits::expand_periodic(x, 3, CYCLE_CAP)?;
    let prefix_ones = exp.prefix.iter().filter(|&&d| d == 1).count() as u64;
    let cycle_has_one = exp.cycle.contains(&1);
    if !cycle_has_one {
        // finitely many ones, all inside the prefix
        let word = TernaryWord(exp.prefix.iter().map(|&d| d as u8).collect());
        let mut dec = one_stripped_word(&word);
        debug_assert_eq!(dec.ones, OnesCount::Finite(prefix_ones));
        // replace the word tail by the exact rational tail including the cycle
        let consumed: u64 = dec.words.iter().map(|w| w.len() as u64).sum();
        let mut shifted = x.clone();
        for _ in 0..consumed {
            shifted *= rational::int(3);
        }
        let tail_value = rational::frac_part(&shifted);
        dec.tail = Tail::Rational(tail_value);
        return Ok(dec);
    }
    // infinitely many ones: walk digits block by block
    let mut words = Vec::new();
    let mut current = Vec::new();
    let mut i = 1u64;
    let horizon = exp.prefix.len() as u64 + exp.cycle.len() as u64;
    while words.len() < max_blocks {
        let d = exp.digit(i) as u8;
        current.push(d);
        if d == 1 {
            words.push(TernaryWord(std::mem::take(&mut current)));
        }
        i += 1;
        if i > horizon * (max_blocks as u64 + 2) + 64 {
            return Err(Error::invariant(
                "block scan exceeded the periodicity horizon",
            ));
        }
    }
    Ok(OneStrippedDecomposition {
        words,
        tail: Tail::Truncated,
        ones: OnesCount::Infinite,
    })
}

/// Number of ones in the full expansion of a rational.
pub fn ones_count(x: &Rational) -> Result<OnesCount> {
    let exp = digits::expand_periodic(x, 3, CYCLE_CAP)?;
    if exp.cycle.contains(&1) {
        Ok(OnesCount::Infinite)
    } else {
        Ok(OnesCount::Finite(
            exp.prefix.iter().filter(|&&d| d == 1).count() as u64,
        ))
    }
}

/// The enriched value on a complete finite decomposition:
/// `sum_r 2^(-r P_(r-1)) C_s(w_r) + 2^(-(m+1) P_m) C_s(tail)`,
/// with `P_r` the block-length partial sums and the empty sum zero.
pub fn c_hat_finite(dec: &OneStrippedDecomposition) -> Result<Rational> {
    let OnesCount::Finite(m) = dec.ones else {
        return Err(Error::domain(
            "c_hat_finite requires finitely many ones",
        ));
    };
    if dec.words.len() as u64 != m {
        return Err(Error::domain(
            "decomposition does not carry all of its blocks",
        ));
    }
    let mut total = Rational::zero();
    let mut p_prev = 0u64; // P_(r-1)
    for (idx, w) in dec.words.iter().enumerate() {
        let r = idx as u64 + 1;
        let weight = rational::base_pow(2, -((r * p_prev) as i64));
        total += weight * cantor_cs_word(w);
        p_prev += w.len() as u64;
    }
    let tail_cs = match &dec.tail {
        Tail::Word(w) => cantor_cs_word(w),
        Tail::Rational(q) => {
            let v = cantor_cs(q, 64)?;
            v.exact()
                .cloned()
                .ok_or_else(|| Error::InsufficientDepth("tail value not exact".into()))?
        }
        Tail::Truncated => {
            return Err(Error::domain(
                "c_hat_finite requires a complete tail",
            ))
        }
    };
    let tail_weight = rational::base_pow(2, -(((m + 1) * p_prev) as i64));
    Ok(total + tail_weight * tail_cs)
}

/// Truncation-level value: exact dyadic `hat(C)_k(x)` together with a
/// certified enclosure of the full value of width at most `2^(-k^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryValue {
    /// Exact value of the k-th approximant.
    pub value: Rational,
    /// Interval certified to contain the untruncated value and every
    /// higher approximant.
    pub enclosure: RationalInterval,
    /// True when the truncation fixed the input, so `value` is the full
    /// enriched value exactly.
    pub exact: bool,
}

/// The k-th approximant at a rational in `[0, 1]`: apply the truncation
/// after the k-th `1`, evaluate exactly, and attach the `2^(-k^2)` band.
pub fn c_hat(x: &Rational, k: u32) -> Result<BinaryValue> {
    if k == 0 {
        return Err(Error::domain("approximation level k must be at least 1"));
    }
    if x.is_negative() || x > &rational::int(1) {
        return Err(Error::domain(format!(
            "c_hat requires x in [0, 1], got {}",
            rational::format_rational(x)
        )));
    }
    if x.is_zero() || x == &rational::int(1) {
        return Ok(BinaryValue {
            value: Rational::zero(),
            enclosure: RationalInterval::point(Rational::zero()),
            exact: true,
        });
    }
    let ones = ones_count(x)?;
    let truncates = match ones {
        OnesCount::Finite(m) => m < k as u64,
        OnesCount::Infinite => false,
    };
    if truncates {
        let dec = one_stripped(x, k as usize)?;
        let value = c_hat_finite(&dec)?;
        return Ok(BinaryValue {
            value: value.clone(),
            enclosure: RationalInterval::point(value),
            exact: true,
        });
    }
    // truncated input 0.w_1 ... w_k: blocks only, empty tail
    let dec = one_stripped(x, k as usize)?;
    let mut value = Rational::zero();
    let mut p_prev = 0u64;
    for (idx, w) in dec.words.iter().take(k as usize).enumerate() {
        let r = idx as u64 + 1;
        let weight = rational::base_pow(2, -((r * p_prev) as i64));
        value += weight * cantor_cs_word(w);
        p_prev += w.len() as u64;
    }
    // the dropped blocks and tail only ever add mass, at most 2^(-k^2)
    let band = rational::base_pow(2, -((k as i64) * (k as i64)));
    let enclosure = RationalInterval::new(value.clone(), &value + band)?;
    Ok(BinaryValue {
        value,
        enclosure,
        exact: false,
    })
}

/// Periodic extension to the whole real line: evaluates at `x mod 1`;
/// well-defined at the integers where the value is zero.
pub fn c_hat_periodic(x: &Rational, k: u32) -> Result<BinaryValue> {
    let frac = rational::frac_part(x);
    c_hat(&frac, k)
}

/// Structural binary prefix of the enriched value of `x` through the end
/// of the m-th zero block: the blocks' `C_s` bit strings separated by the
/// zero runs the weights create.
pub fn c_hat_bit_prefix(x: &Rational, m: u32) -> Result<DigitPrefix> {
    let dec = one_stripped(x, m as usize)?;
    if (dec.words.len() as u64) < m as u64 {
        return Err(Error::InsufficientDepth(format!(
            "only {} one-stripped blocks available, need {m}",
            dec.words.len()
        )));
    }
    let sums = dec.length_prefix_sums();
    let p_m = sums[m as usize - 1];
    let total_len = (m as u64 + 1) * p_m;
    let mut bits = vec![0u32; total_len as usize];
    let mut p_prev = 0u64;
    for (idx, w) in dec.words.iter().take(m as usize).enumerate() {
        let r = idx as u64 + 1;
        let start = r * p_prev; // bits occupy positions start+1 ..= start+|w|
        let cs = cantor_cs_word(w);
        let word_bits = digits::expand(&cs, 2, w.len())?;
        for (j, &b) in word_bits.digits().iter().enumerate() {
            bits[(start as usize) + j] = b;
        }
        p_prev += w.len() as u64;
    }
    DigitPrefix::new(2, bits, false)
}

/// Zero-heaviness witness for inputs with at least `m_max` ones: binary
/// checkpoints at `L_m = (m+1) P_m` where the zero frequency provably
/// reaches `1 - 1/(m+1)`.
pub fn zero_heaviness_witness(x: &Rational, m_max: u32) -> Result<ZeroRunCertificate> {
    if m_max == 0 {
        return Err(Error::domain("witness depth must be at least 1"));
    }
    let dec = one_stripped(x, m_max as usize)?;
    if (dec.words.len() as u64) < m_max as u64 {
        return Err(Error::InsufficientDepth(format!(
            "expansion carries only {} ones, need {m_max}",
            dec.words.len()
        )));
    }
    let prefix = c_hat_bit_prefix(x, m_max)?;
    let sums = dec.length_prefix_sums();
    let checkpoints: Vec<u64> = (1..=m_max as u64)
        .map(|m| (m + 1) * sums[m as usize - 1])
        .collect();
    digits::zero_run_certificate(&prefix, &checkpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn word(s: &str) -> TernaryWord {
        TernaryWord::parse(s).unwrap()
    }

    #[test]
    fn cantor_c_on_basic_points() {
        // 0.1 (ternary) -> 0.1 (binary)
        assert_eq!(cantor_c(&ratio(1, 3), 8).unwrap().exact().unwrap(), &ratio(1, 2));
        // 1/4 = 0.020202... -> 0.010101... = 1/3
        assert_eq!(cantor_c(&ratio(1, 4), 8).unwrap().exact().unwrap(), &ratio(1, 3));
        assert_eq!(cantor_c(&int(0), 8).unwrap().exact().unwrap(), &int(0));
        assert_eq!(cantor_c(&int(1), 8).unwrap().exact().unwrap(), &int(1));
    }

    /// Independent oracle: evaluate the digit map over materialized digit
    /// lists, no cycle arithmetic.
    fn cantor_digit_map_oracle(x: &Rational, depth: usize) -> Rational {
        let p = digits::expand(x, 3, depth).unwrap();
        let mut num = BigInt::zero();
        let mut len = 0u32;
        for &d in p.digits() {
            num = (num << 1) + BigInt::from(d.min(1));
            len += 1;
            if d == 1 {
                break;
            }
        }
        Rational::new(num, BigInt::one() << len)
    }

    #[test]
    fn cantor_c_matches_digit_map_oracle() {
        for den in [5u32, 7, 9, 11, 13, 27] {
            for num in 1..den {
                let x = Rational::new(BigInt::from(num), BigInt::from(den));
                let got = cantor_c(&x, 200).unwrap();
                let oracle = cantor_digit_map_oracle(&x, 400);
                match got {
                    CantorValue::Exact(v) => {
                        // oracle truncated at 400 digits; difference under 2^-399
                        assert!((v - oracle).abs() <= rational::base_pow(2, -399));
                    }
                    CantorValue::Enclosure(_) => panic!("rational input must be exact"),
                }
            }
        }
    }

    #[test]
    fn cantor_cs_symmetry_and_examples() {
        // C_s(1/2): ternary 0.111..., C = 1/2
        assert_eq!(cantor_cs(&ratio(1, 2), 8).unwrap().exact().unwrap(), &ratio(1, 2));
        // 3/4 = 0.2020... -> C = 2/3, C_s = 1/3
        assert_eq!(cantor_cs(&ratio(3, 4), 8).unwrap().exact().unwrap(), &ratio(1, 3));
        assert_eq!(
            cantor_cs(&ratio(1, 4), 8).unwrap().exact(),
            cantor_cs(&ratio(3, 4), 8).unwrap().exact()
        );
    }

    #[test]
    fn reflection_symmetry_exhaustive_small() {
        // C(1-x) = 1 - C(x) for all ternary words of length <= 6
        for len in 0..=6u32 {
            for code in 0..3u64.pow(len) {
                let mut digs = Vec::new();
                let mut c = code;
                for _ in 0..len {
                    digs.push((c % 3) as u8);
                    c /= 3;
                }
                digs.reverse();
                let w = TernaryWord::new(digs).unwrap();
                let x = w.value();
                let cx = cantor_c(&x, 64).unwrap().exact().unwrap().clone();
                let refl = cantor_c(&(int(1) - &x), 64).unwrap().exact().unwrap().clone();
                assert_eq!(refl, int(1) - cx);
            }
        }
    }

    #[test]
    fn monotone_on_words_small() {
        let mut last = Rational::zero() - int(1);
        for code in 0..3u64.pow(7) {
            let mut digs = Vec::new();
            let mut c = code;
            for _ in 0..7 {
                digs.push((c % 3) as u8);
                c /= 3;
            }
            digs.reverse();
            let w = TernaryWord::new(digs).unwrap();
            let v = cantor_c_word(&w);
            assert!(v >= last, "C not monotone at word {}", w.to_string_digits());
            last = v;
        }
    }

    #[test]
    fn one_stripped_examples() {
        let d = one_stripped_word(&word("102"));
        assert_eq!(d.words, vec![word("1")]);
        assert_eq!(d.tail, Tail::Word(word("02")));
        assert_eq!(d.ones, OnesCount::Finite(1));

        let d = one_stripped_word(&word("21011"));
        assert_eq!(d.words, vec![word("21"), word("01"), word("1")]);
        assert_eq!(d.tail, Tail::Word(word("")));
        assert_eq!(d.ones, OnesCount::Finite(3));

        let d = one_stripped_word(&word("2022"));
        assert!(d.words.is_empty());
        assert_eq!(d.tail, Tail::Word(word("2022")));
        assert_eq!(d.ones, OnesCount::Finite(0));
    }

    #[test]
    fn c_hat_examples_from_formula() {
        // x = 0.1 ternary: single block, empty tail -> 1/2
        let v = c_hat(&ratio(1, 3), 4).unwrap();
        assert!(v.exact);
        assert_eq!(v.value, ratio(1, 2));

        // boundary values
        assert_eq!(c_hat(&int(0), 3).unwrap().value, int(0));
        assert_eq!(c_hat(&int(1), 3).unwrap().value, int(0));

        // x = 2/3 = 0.2: no blocks, tail-only term C_s(2/3) = 1/2
        let v = c_hat(&ratio(2, 3), 2).unwrap();
        assert!(v.exact);
        assert_eq!(v.value, ratio(1, 2));
    }

    #[test]
    fn c_hat_level_one_equals_cs_without_ones() {
        // k = 1 on inputs with no '1' reduces to the symmetrized map
        for x in [ratio(1, 4), ratio(3, 4), ratio(1, 13)] {
            if ones_count(&x).unwrap() == OnesCount::Finite(0) {
                let v = c_hat(&x, 1).unwrap();
                assert_eq!(&v.value, cantor_cs(&x, 64).unwrap().exact().unwrap());
            }
        }
    }

    #[test]
    fn c_hat_nesting_band() {
        // x = 1/2 = 0.111... has infinitely many ones; approximants nest
        // within the 2^(-k^2) band
        let x = ratio(1, 2);
        for k in 1..=4u32 {
            let a = c_hat(&x, k).unwrap();
            let b = c_hat(&x, k + 1).unwrap();
            let gap = (&b.value - &a.value).abs();
            assert!(gap <= rational::base_pow(2, -((k * k) as i64)));
            assert!(a.enclosure.contains(&b.value));
        }
    }

    #[test]
    fn c_hat_periodic_wraps() {
        let direct = c_hat(&ratio(1, 2), 3).unwrap();
        let wrapped = c_hat_periodic(&ratio(5, 2), 3).unwrap();
        assert_eq!(direct.value, wrapped.value);
        let neg = c_hat_periodic(&ratio(-1, 4), 3).unwrap();
        let expect = c_hat(&ratio(3, 4), 3).unwrap();
        assert_eq!(neg.value, expect.value);
        assert_eq!(c_hat_periodic(&int(7), 3).unwrap().value, int(0));
    }

    #[test]
    fn bit_prefix_matches_expanded_value() {
        // structural bits of the approximant agree with the binary
        // expansion of its exact dyadic value
        let x = ratio(1, 2); // blocks all "1"
        for m in 1..=4u32 {
            let structural = c_hat_bit_prefix(&x, m).unwrap();
            let v = c_hat(&x, m).unwrap().value;
            let expanded = digits::expand(&v, 2, structural.len()).unwrap();
            assert_eq!(structural.digits(), expanded.digits());
        }
    }

    #[test]
    fn witness_validates_against_bits() {
        for x in [ratio(1, 2), ratio(5, 13), ratio(7, 15)] {
            if ones_count(&x).unwrap() != OnesCount::Infinite {
                continue;
            }
            let cert = zero_heaviness_witness(&x, 3).unwrap();
            let prefix = c_hat_bit_prefix(&x, 3).unwrap();
            cert.validate(&prefix).expect("witness must validate");
        }
    }

    #[test]
    fn witness_requires_enough_ones() {
        // 1/3 = 0.1 exactly: one block only
        assert!(matches!(
            zero_heaviness_witness(&ratio(1, 3), 2),
            Err(Error::InsufficientDepth(_))
        ));
    }

    #[test]
    fn image_of_words_with_one_is_dyadic() {
        // any word containing a '1' maps to a dyadic rational
        for code in 0..3u64.pow(6) {
            let mut digs = Vec::new();
            let mut c = code;
            for _ in 0..6 {
                digs.push((c % 3) as u8);
                c /= 3;
            }
            let w = TernaryWord::new(digs).unwrap();
            if w.digits().contains(&1) {
                let v = cantor_c_word(&w);
                assert!(rational::terminating_depth(&v, 2).is_some());
            }
        }
    }
}
