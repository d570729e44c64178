//! Exact b-ary digit expansions, digit-frequency statistics, numbers with
//! finite expansions and their isolated-trailing-one variants, and zero-run
//! certificates.
//!
//! Every number here lives in `[0, 1)` and expansions follow the finite
//! convention: whenever a number has a terminating expansion, that is the
//! expansion used.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{self, Rational};
use crate::Result;

/// The first `M` digits of a real in base `b`, with an exactness flag.
///
/// `exact` is true when the represented number's full expansion terminates
/// within this prefix, so the prefix padded with zeros is the whole number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitPrefix {
    base: u32,
    digits: Vec<u32>,
    exact: bool,
}

impl DigitPrefix {
    pub fn new(base: u32, digits: Vec<u32>, exact: bool) -> Result<Self> {
        check_base(base)?;
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::domain(format!("digit {d} out of range for base {base}")));
        }
        Ok(DigitPrefix { base, digits, exact })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    /// The rational value of the prefix itself, `sum d_i b^-i`.
    pub fn value(&self) -> Rational {
        let b = BigInt::from(self.base);
        let mut num = BigInt::zero();
        for &d in &self.digits {
            num = num * &b + BigInt::from(d);
        }
        Rational::new(num, b.pow(self.digits.len() as u32))
    }

    /// Serialize to the plain-text digit format: a header line
    /// `base=<b> length=<M> exact=<0|1>` followed by the digits, contiguous
    /// `0-9a-z` characters for bases up to 36 and space-separated decimal
    /// integers above that.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "base={} length={} exact={}\n",
            self.base,
            self.digits.len(),
            u8::from(self.exact)
        );
        if self.base <= 36 {
            for &d in &self.digits {
                out.push(char::from_digit(d, 36).expect("digit < 36"));
            }
        } else {
            let body: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            out.push_str(&body.join(" "));
        }
        out.push('\n');
        out
    }

    /// Parse the plain-text digit format produced by [`DigitPrefix::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty digit file".into()))?;
        let mut base = None;
        let mut length = None;
        let mut exact = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad header field {field:?}")))?;
            match key {
                "base" => base = Some(value.parse::<u32>().map_err(bad_header)?),
                "length" => length = Some(value.parse::<usize>().map_err(bad_header)?),
                "exact" => exact = Some(value.parse::<u8>().map_err(bad_header)? != 0),
                _ => return Err(Error::Format(format!("unknown header field {key:?}"))),
            }
        }
        let base = base.ok_or_else(|| Error::Format("missing base".into()))?;
        let length = length.ok_or_else(|| Error::Format("missing length".into()))?;
        let exact = exact.ok_or_else(|| Error::Format("missing exact flag".into()))?;
        let body: String = lines.collect::<Vec<_>>().join(" ");
        let digits: Vec<u32> = if base <= 36 {
            body.split_whitespace()
                .flat_map(|chunk| chunk.chars())
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::Format(format!("bad digit char {c:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            body.split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>()
                        .map_err(|_| Error::Format(format!("bad digit token {tok:?}")))
                })
                .collect::<Result<_>>()?
        };
        if digits.len() != length {
            return Err(Error::Format(format!(
                "digit count {} does not match declared length {length}",
                digits.len()
            )));
        }
        DigitPrefix::new(base, digits, exact)
    }
}

fn bad_header<E: std::fmt::Display>(e: E) -> Error {
    Error::Format(format!("bad header value: {e}"))
}

fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        Err(Error::domain(format!("base must be at least 2, got {base}")))
    } else {
        Ok(())
    }
}

/// First `m` digits of `q` in `base` under the finite-expansion convention.
pub fn expand(q: &Rational, base: u32, m: usize) -> Result<DigitPrefix> {
    check_base(base)?;
    if q.is_negative() || q >= &rational::int(1) {
        return Err(Error::domain(format!(
            "expand requires 0 <= q < 1, got {}",
            rational::format_rational(q)
        )));
    }
    let b = BigInt::from(base);
    let den = q.denom().clone();
    let mut rem = q.numer().clone();
    let mut digits = Vec::with_capacity(m);
    let mut exact = rem.is_zero();
    for _ in 0..m {
        if rem.is_zero() {
            exact = true;
            digits.push(0);
            continue;
        }
        rem *= &b;
        let (digit, next) = num_integer::Integer::div_rem(&rem, &den);
        digits.push(u32::try_from(digit).expect("digit below base fits u32"));
        rem = next;
        if rem.is_zero() {
            exact = true;
        }
    }
    DigitPrefix::new(base, digits, exact)
}

/// Full eventually-periodic expansion of a rational: digit prefix plus a
/// repeating cycle (empty cycle means the expansion terminates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicExpansion {
    pub base: u32,
    pub prefix: Vec<u32>,
    pub cycle: Vec<u32>,
}

impl PeriodicExpansion {
    /// Digit at 1-indexed position `i`.
    pub fn digit(&self, i: u64) -> u32 {
        let i = i - 1;
        if (i as usize) < self.prefix.len() {
            self.prefix[i as usize]
        } else if self.cycle.is_empty() {
            0
        } else {
            let off = (i - self.prefix.len() as u64) % self.cycle.len() as u64;
            self.cycle[off as usize]
        }
    }

    pub fn is_terminating(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Materialize the first `m` digits.
    pub fn take(&self, m: usize) -> Vec<u32> {
        (1..=m as u64).map(|i| self.digit(i)).collect()
    }
}

/// Exact eventually-periodic expansion by long division with remainder
/// tracking. The cycle length divides the multiplicative order of `base`
/// modulo the reduced denominator, so it is at most `denom - 1`; callers
/// with huge denominators should cap via `max_states`.
pub fn expand_periodic(q: &Rational, base: u32, max_states: usize) -> Result<PeriodicExpansion> {
    check_base(base)?;
    if q.is_negative() || q >= &rational::int(1) {
        return Err(Error::domain(format!(
            "expand_periodic requires 0 <= q < 1, got {}",
            rational::format_rational(q)
        )));
    }
    let b = BigInt::from(base);
    let den = q.denom().clone();
    let mut rem = q.numer().clone();
    let mut seen: std::collections::HashMap<BigInt, usize> = std::collections::HashMap::new();
    let mut digits: Vec<u32> = Vec::new();
    loop {
        if rem.is_zero() {
            return Ok(PeriodicExpansion {
                base,
                prefix: digits,
                cycle: Vec::new(),
            });
        }
        if let Some(&start) = seen.get(&rem) {
            let cycle = digits.split_off(start);
            return Ok(PeriodicExpansion {
                base,
                prefix: digits,
                cycle,
            });
        }
        if seen.len() >= max_states {
            return Err(Error::budget(format!(
                "cycle detection exceeded {max_states} states for denominator {den}"
            )));
        }
        seen.insert(rem.clone(), digits.len());
        rem *= &b;
        let (digit, next) = num_integer::Integer::div_rem(&rem, &den);
        digits.push(u32::try_from(digit).expect("digit below base"));
        rem = next;
    }
}

/// Relative frequency of digit `d` among the first `m` digits of `prefix`.
pub fn lambda_freq(prefix: &DigitPrefix, d: u32, m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("lambda_freq requires M >= 1"));
    }
    if m > prefix.len() {
        return Err(Error::domain(format!(
            "lambda_freq window {m} exceeds available {} digits",
            prefix.len()
        )));
    }
    if d >= prefix.base() {
        return Err(Error::domain(format!(
            "digit {d} out of range for base {}",
            prefix.base()
        )));
    }
    let count = prefix.digits()[..m].iter().filter(|&&x| x == d).count();
    Ok(Rational::new(BigInt::from(count), BigInt::from(m)))
}

/// A number in `[0, 1)` whose base-`b` expansion terminates, together with
/// the position of its last non-zero digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteExpansionNumber {
    value: Rational,
    base: u32,
    length: u64,
}

impl FiniteExpansionNumber {
    /// Construct from a rational, verifying the expansion terminates.
    /// `tau(0)` is defined as 0 so the zero stem is admissible.
    pub fn new(value: Rational, base: u32) -> Result<Self> {
        check_base(base)?;
        if value.is_negative() || value >= rational::int(1) {
            return Err(Error::domain(format!(
                "finite-expansion number must lie in [0,1), got {}",
                rational::format_rational(&value)
            )));
        }
        let length = rational::terminating_depth(&value, base).ok_or_else(|| {
            Error::domain(format!(
                "{} has no terminating base-{base} expansion",
                rational::format_rational(&value)
            ))
        })?;
        Ok(FiniteExpansionNumber { value, base, length })
    }

    pub fn zero(base: u32) -> Self {
        FiniteExpansionNumber {
            value: Rational::zero(),
            base,
            length: 0,
        }
    }

    /// Construct `a * base^-d` from the scaled integer `a`, reading the
    /// digit structure off `a` directly instead of rescanning the value;
    /// returns the number together with its digit vector (length `d`,
    /// most significant first).
    pub(crate) fn from_scaled_integer(
        a: BigInt,
        d: u64,
        base: u32,
    ) -> Result<(Self, Vec<u32>)> {
        if a.is_negative() {
            return Err(Error::domain("scaled integer must be non-negative"));
        }
        let mut digits = vec![0u32; d as usize];
        let mut rest = a.clone();
        let b = BigInt::from(base);
        let mut i = d as usize;
        while !rest.is_zero() {
            if i == 0 {
                return Err(Error::domain("scaled integer exceeds one"));
            }
            i -= 1;
            let (q, r) = num_integer::Integer::div_rem(&rest, &b);
            digits[i] = u32::try_from(r).expect("digit below base");
            rest = q;
        }
        let tz = digits.iter().rev().take_while(|&&x| x == 0).count() as u64;
        let length = d - tz.min(d);
        let value = Rational::new(a, b.pow(d as u32));
        Ok((
            FiniteExpansionNumber {
                value,
                base,
                length,
            },
            digits,
        ))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Position of the last non-zero digit; 0 for the number zero.
    pub fn tau(&self) -> u64 {
        self.length
    }

    /// The terminating expansion as a digit prefix of its full length.
    pub fn digits(&self) -> DigitPrefix {
        expand(&self.value, self.base, self.length as usize).expect("value in range")
    }

    /// Count of non-zero digits in the terminating expansion.
    pub fn nonzero_digits(&self) -> u64 {
        self.digits().digits().iter().filter(|&&d| d != 0).count() as u64
    }
}

/// Position of the last non-zero digit of a terminating expansion.
pub fn tau(x: &FiniteExpansionNumber) -> u64 {
    x.tau()
}

/// A finite-expansion stem plus an isolated trailing `1` at position `k`,
/// subject to `k > tau(stem)^2 + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPrimeNumber {
    stem: FiniteExpansionNumber,
    k: u64,
}

impl TPrimeNumber {
    pub fn stem(&self) -> &FiniteExpansionNumber {
        &self.stem
    }

    pub fn base(&self) -> u32 {
        self.stem.base()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn value(&self) -> Rational {
        self.stem.value() + rational::base_pow(self.stem.base(), -(self.k as i64))
    }
}

/// Attach an isolated trailing one at position `k` to `stem`.
pub fn make_tprime(stem: FiniteExpansionNumber, k: u64) -> Result<TPrimeNumber> {
    let t = stem.tau();
    if k <= t * t + 1 {
        return Err(Error::domain(format!(
            "isolated-one position {k} must exceed tau^2 + 1 = {}",
            t * t + 1
        )));
    }
    Ok(TPrimeNumber { stem, k })
}

/// Position of the isolated trailing one; round-trips with [`make_tprime`].
pub fn tau_prime(y: &TPrimeNumber) -> u64 {
    y.k()
}

/// Decompose `q` as stem + base^-k with an isolated final `1`, if possible.
/// Returns `Ok(None)` when `q` is simply not of that shape; that is a
/// normal outcome, not an error.
pub fn decompose_tprime(q: &Rational, base: u32) -> Result<Option<TPrimeNumber>> {
    check_base(base)?;
    if !q.is_positive() || q >= &rational::int(1) {
        return Err(Error::domain(format!(
            "decompose_tprime requires 0 < q < 1, got {}",
            rational::format_rational(q)
        )));
    }
    let Some(k) = rational::terminating_depth(q, base) else {
        return Ok(None);
    };
    // Last digit sits at position k; it must be exactly 1.
    let prefix = expand(q, base, k as usize)?;
    if *prefix.digits().last().expect("k >= 1 for positive q") != 1 {
        return Ok(None);
    }
    let stem_value = q - rational::base_pow(base, -(k as i64));
    let stem = FiniteExpansionNumber::new(stem_value, base)?;
    if k <= stem.tau() * stem.tau() + 1 {
        return Ok(None);
    }
    Ok(Some(TPrimeNumber { stem, k }))
}

/// One checkpoint of a zero-run certificate: the zero-digit frequency of
/// the certified prefix at depth `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    /// Depth L at which the frequency is taken.
    pub position: u64,
    /// Exact value of the zero frequency among the first L digits.
    pub frequency: Rational,
}

/// Finite-depth witness that an emitted prefix accumulates zeros: the m-th
/// checkpoint must carry zero frequency at least `1 - 1/m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroRunCertificate {
    pub base: u32,
    pub checkpoints: Vec<Checkpoint>,
}

impl ZeroRunCertificate {
    /// Re-derive every checkpoint from `prefix` and check the `1 - 1/m`
    /// bound; returns a reason string on the first failure.
    pub fn validate(&self, prefix: &DigitPrefix) -> std::result::Result<(), String> {
        if prefix.base() != self.base {
            return Err(format!(
                "certificate base {} does not match prefix base {}",
                self.base,
                prefix.base()
            ));
        }
        for (i, cp) in self.checkpoints.iter().enumerate() {
            let m = i as u64 + 1;
            if cp.position as usize > prefix.len() {
                return Err(format!(
                    "checkpoint {m} at depth {} exceeds prefix length {}",
                    cp.position,
                    prefix.len()
                ));
            }
            let freq = lambda_freq(prefix, 0, cp.position as usize)
                .map_err(|e| format!("checkpoint {m}: {e}"))?;
            if freq != cp.frequency {
                return Err(format!(
                    "checkpoint {m} frequency mismatch: recorded {}, recomputed {}",
                    rational::format_rational(&cp.frequency),
                    rational::format_rational(&freq)
                ));
            }
            let required = rational::int(1) - Rational::new(BigInt::one(), BigInt::from(m));
            if freq < required {
                return Err(format!(
                    "checkpoint {m} frequency {} below 1 - 1/{m}",
                    rational::format_rational(&freq)
                ));
            }
        }
        Ok(())
    }
}

/// Compute the zero-digit frequency of `prefix` at each requested depth.
/// Checking the `1 - 1/m` validity is the caller's concern (via
/// [`ZeroRunCertificate::validate`]).
pub fn zero_run_certificate(prefix: &DigitPrefix, checkpoints: &[u64]) -> Result<ZeroRunCertificate> {
    let mut out = Vec::with_capacity(checkpoints.len());
    for &l in checkpoints {
        if l == 0 || l as usize > prefix.len() {
            return Err(Error::domain(format!(
                "checkpoint depth {l} out of range for prefix of length {}",
                prefix.len()
            )));
        }
        out.push(Checkpoint {
            position: l,
            frequency: lambda_freq(prefix, 0, l as usize)?,
        });
    }
    Ok(ZeroRunCertificate {
        base: prefix.base(),
        checkpoints: out,
    })
}
