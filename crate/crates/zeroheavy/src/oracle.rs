//! Textual function specifications turned into evaluable computable C¹
//! functions: a small expression grammar with symbolic derivatives,
//! certified rational-interval evaluation, critical-point isolation by
//! sign-change bisection, and distinct-value witnesses.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := number | 'x' | '(' expr ')' | func '(' expr ')'
//! func   := 'exp' | 'ln' | 'sin' | 'cos'
//! number := decimal or p/q rational literal
//! ```

use std::fmt;

use num_traits::{Signed, Zero};

use crate::elementary;
use crate::error::Error;
use crate::interval::RationalInterval;
use crate::rational::{self, Rational};
use crate::Result;

/// Expression tree over one variable with rational constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", rational::format_rational(c)),
            Expr::Var => write!(f, "x"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "{a}^{n}"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

impl Expr {
    fn constant(&self) -> Option<&Rational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Symbolic derivative, lightly simplified.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(Rational::zero()),
            Expr::Var => Expr::Const(rational::int(1)),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => {
                let num = sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                );
                div(num, Expr::Pow(b.clone(), 2))
            }
            Expr::Pow(a, n) => {
                if *n == 0 {
                    return Expr::Const(Rational::zero());
                }
                let coeff = Expr::Const(rational::int(*n as i64));
                mul(mul(coeff, Expr::Pow(a.clone(), n - 1)), a.derivative())
            }
            Expr::Exp(a) => mul(Expr::Exp(a.clone()), a.derivative()),
            Expr::Ln(a) => div(a.derivative(), (**a).clone()),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.derivative()),
            Expr::Cos(a) => sub(
                Expr::Const(Rational::zero()),
                mul(Expr::Sin(a.clone()), a.derivative()),
            ),
        }
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.constant(), b.constant()) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(x), None) if x.is_zero() => b,
        (None, Some(y)) if y.is_zero() => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.constant(), b.constant()) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (None, Some(y)) if y.is_zero() => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.constant(), b.constant()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), None) => {
            if x.is_zero() {
                Expr::Const(Rational::zero())
            } else if x == &rational::int(1) {
                b
            } else {
                Expr::Mul(Box::new(a), Box::new(b))
            }
        }
        (None, Some(y)) => {
            if y.is_zero() {
                Expr::Const(Rational::zero())
            } else if y == &rational::int(1) {
                a
            } else {
                Expr::Mul(Box::new(a), Box::new(b))
            }
        }
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if let (Some(x), Some(y)) = (a.constant(), b.constant()) {
        if !y.is_zero() {
            return Expr::Const(x / y);
        }
    }
    if let Some(y) = b.constant() {
        if y == &rational::int(1) {
            return a;
        }
    }
    Expr::Div(Box::new(a), Box::new(b))
}

/// A parsed computable C¹ function with its symbolic derivative.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    expr: Expr,
    derivative: Expr,
    source: String,
}

impl FunctionSpec {
    pub fn from_expr(expr: Expr, source: impl Into<String>) -> Self {
        let derivative = expr.derivative();
        FunctionSpec {
            expr,
            derivative,
            source: source.into(),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.derivative
    }

    /// The derivative as a function spec of its own.
    pub fn derivative_spec(&self) -> FunctionSpec {
        FunctionSpec::from_expr(self.derivative.clone(), format!("d/dx {}", self.source))
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Parse a function specification; see the module docs for the grammar.
pub fn parse(spec: &str) -> Result<FunctionSpec> {
    let expr = Parser::new(spec).parse()?;
    Ok(FunctionSpec::from_expr(expr, spec.trim()))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse(&mut self) -> Result<Expr> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = if self.peek() == Some(b'-') {
            self.bump();
            sub(Expr::Const(Rational::zero()), self.term()?)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = add(acc, self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = mul(acc, self.factor()?);
                }
                Some(b'/') => {
                    self.bump();
                    let rhs = self.factor()?;
                    if let Some(y) = rhs.constant() {
                        if y.is_zero() {
                            return Err(self.error("division by zero in constant expression"));
                        }
                    }
                    acc = div(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let neg = if self.peek() == Some(b'-') {
                self.bump();
                true
            } else {
                false
            };
            self.skip_ws();
            let start = self.pos;
            let mut value: i64 = 0;
            while let Some(c) = self.bytes.get(self.pos).copied() {
                if c.is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((c - b'0') as i64))
                        .ok_or_else(|| self.error("exponent too large"))?;
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.pos == start {
                return Err(self.error("expected integer exponent after '^'"));
            }
            let n = i32::try_from(if neg { -value } else { value })
                .map_err(|_| self.error("exponent out of range"))?;
            if let Some(c) = base.constant() {
                if n >= 0 {
                    let mut acc = rational::int(1);
                    for _ in 0..n {
                        acc *= c;
                    }
                    return Ok(Expr::Const(acc));
                } else if !c.is_zero() {
                    let mut acc = rational::int(1);
                    for _ in 0..n.unsigned_abs() {
                        acc *= c;
                    }
                    return Ok(Expr::Const(rational::int(1) / acc));
                } else {
                    return Err(self.error("zero raised to a negative power"));
                }
            }
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphabetic())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                match name {
                    "x" => Ok(Expr::Var),
                    "exp" | "ln" | "sin" | "cos" => {
                        if self.peek() != Some(b'(') {
                            return Err(self.error(format!("expected '(' after {name}")));
                        }
                        self.bump();
                        let inner = self.expr()?;
                        if self.peek() != Some(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        self.bump();
                        let boxed = Box::new(inner);
                        Ok(match name {
                            "exp" => Expr::Exp(boxed),
                            "ln" => Expr::Ln(boxed),
                            "sin" => Expr::Sin(boxed),
                            _ => Expr::Cos(boxed),
                        })
                    }
                    other => Err(self.error(format!("unsupported identifier {other:?}"))),
                }
            }
            Some(c) => Err(self.error(format!("unexpected character {:?}", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let mut seen_dot = false;
        while let Some(c) = self.bytes.get(self.pos).copied() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.error("expected number"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        let value = rational::parse_rational(text).map_err(|e| self.error(e.to_string()))?;
        Ok(Expr::Const(value))
    }
}

/// Interval evaluation of an expression tree. Arithmetic is exact; each
/// transcendental node contributes width at most `2^-bits`.
fn eval_expr(expr: &Expr, x: &RationalInterval, bits: u64) -> Result<RationalInterval> {
    match expr {
        Expr::Const(c) => Ok(RationalInterval::point(c.clone())),
        Expr::Var => Ok(x.clone()),
        Expr::Add(a, b) => Ok(eval_expr(a, x, bits)?.add(&eval_expr(b, x, bits)?)),
        Expr::Sub(a, b) => Ok(eval_expr(a, x, bits)?.sub(&eval_expr(b, x, bits)?)),
        Expr::Mul(a, b) => Ok(eval_expr(a, x, bits)?.mul(&eval_expr(b, x, bits)?)),
        Expr::Div(a, b) => eval_expr(a, x, bits)?.div(&eval_expr(b, x, bits)?),
        Expr::Pow(a, n) => eval_expr(a, x, bits)?.pow(*n),
        Expr::Exp(a) => {
            let inner = eval_expr(a, x, bits)?;
            if inner.is_point() {
                return elementary::exp_enclosure(inner.lo(), bits);
            }
            let lo = elementary::exp_enclosure(inner.lo(), bits)?;
            let hi = elementary::exp_enclosure(inner.hi(), bits)?;
            Ok(lo.hull(&hi))
        }
        Expr::Ln(a) => {
            let inner = eval_expr(a, x, bits)?;
            if !inner.lo().is_positive() {
                return Err(Error::domain(
                    "ln of an enclosure touching the non-positive axis",
                ));
            }
            if inner.is_point() {
                return elementary::ln_enclosure(inner.lo(), bits);
            }
            let lo = elementary::ln_enclosure(inner.lo(), bits)?;
            let hi = elementary::ln_enclosure(inner.hi(), bits)?;
            Ok(lo.hull(&hi))
        }
        Expr::Sin(a) => {
            let inner = eval_expr(a, x, bits)?;
            if inner.is_point() {
                elementary::sin_enclosure(inner.lo(), bits)
            } else {
                elementary::sin_interval(inner.lo(), inner.hi(), bits)
            }
        }
        Expr::Cos(a) => {
            let inner = eval_expr(a, x, bits)?;
            if inner.is_point() {
                elementary::cos_enclosure(inner.lo(), bits)
            } else {
                elementary::cos_interval(inner.lo(), inner.hi(), bits)
            }
        }
    }
}

/// Evaluate `f` at a rational point, refining the working precision until
/// the enclosure width is at most `2^-bits`.
pub fn eval_point_bits(f: &FunctionSpec, x: &Rational, bits: u64) -> Result<RationalInterval> {
    eval_expr_refined(f.expr(), &RationalInterval::point(x.clone()), bits)
}

/// Evaluate `f` over a rational interval at working precision `bits`.
pub fn eval_interval_bits(
    f: &FunctionSpec,
    iv: &RationalInterval,
    bits: u64,
) -> Result<RationalInterval> {
    eval_expr(f.expr(), iv, bits + 16)
}

fn eval_expr_refined(expr: &Expr, x: &RationalInterval, bits: u64) -> Result<RationalInterval> {
    let target = rational::base_pow(2, -(bits as i64));
    let mut working = bits + 16;
    for _ in 0..64 {
        let out = eval_expr(expr, x, working)?;
        if out.width() <= target {
            return Ok(out);
        }
        working *= 2;
    }
    Err(Error::budget(
        "point evaluation failed to reach requested width within 64 refinements",
    ))
}

/// Enclosure of `f(x)` of width at most `base^-p`; degenerate (width zero)
/// for arithmetic-only trees on rational inputs.
pub fn eval_enclosure(
    f: &FunctionSpec,
    x: &Rational,
    p: u64,
    base: u32,
) -> Result<RationalInterval> {
    if p == 0 {
        return Err(Error::domain("precision must be at least 1"));
    }
    let bits = elementary::bits_for_base_precision(base, p);
    eval_point_bits(f, x, bits)
}

/// Enclosure of the image `f(I)`: contains `f(z)` for every `z` in `I`,
/// inclusion-isotonic, with slack at most `base^-p` plus the true image
/// width as `I` shrinks.
pub fn eval_interval(
    f: &FunctionSpec,
    iv: &RationalInterval,
    p: u64,
    base: u32,
) -> Result<RationalInterval> {
    let bits = elementary::bits_for_base_precision(base, p);
    eval_interval_bits(f, iv, bits)
}

/// Certified enclosures of the zeros of `f'` on `I`.
#[derive(Debug, Clone)]
pub struct CriticalPointSet {
    /// Pairwise disjoint enclosures, each containing exactly one zero of f'.
    pub enclosures: Vec<RationalInterval>,
    /// True when, on the queried domain minus the enclosures, f' has
    /// certified constant sign.
    pub certified_complete: bool,
}

/// Isolate the zeros of `f'` on `I` to width `2^-p` by sign-change
/// bisection on certified enclosures of `f'`.
///
/// The critical set must be finite (caller-asserted, matching the
/// admissibility assumptions); failure to separate sign changes at the
/// requested precision surfaces as [`Error::NonIsolation`].
pub fn critical_points(
    f: &FunctionSpec,
    iv: &RationalInterval,
    p: u64,
) -> Result<CriticalPointSet> {
    let deriv = f.derivative_spec();
    let second = deriv.derivative_spec();
    let width_target = rational::base_pow(2, -(p as i64));
    let eval_bits = p + 32;

    let mut pending = vec![iv.clone()];
    let mut roots: Vec<RationalInterval> = Vec::new();
    let mut work = 0u64;
    let work_cap = 4096 + 64 * p;

    while let Some(seg) = pending.pop() {
        work += 1;
        if work > work_cap {
            return Err(Error::NonIsolation(format!(
                "bisection budget exhausted after {work_cap} segments"
            )));
        }
        let image = eval_interval_bits(&deriv, &seg, eval_bits)?;
        if !image.contains_zero() {
            continue; // certified sign on this segment
        }
        if seg.width() <= width_target {
            // Certify exactly one zero: strict sign change across the
            // segment plus strict monotonicity of f' inside it.
            let at_lo = eval_point_bits(&deriv, seg.lo(), eval_bits)?;
            let at_hi = eval_point_bits(&deriv, seg.hi(), eval_bits)?;
            let lo_neg = at_lo.hi().is_negative();
            let lo_pos = at_lo.lo().is_positive();
            let hi_neg = at_hi.hi().is_negative();
            let hi_pos = at_hi.lo().is_positive();
            let sign_change = (lo_neg && hi_pos) || (lo_pos && hi_neg);
            let curvature = eval_interval_bits(&second, &seg, eval_bits)?;
            if !(sign_change && !curvature.contains_zero()) {
                return Err(Error::NonIsolation(format!(
                    "cannot certify an isolated zero of the derivative near [{}, {}]",
                    rational::format_rational(seg.lo()),
                    rational::format_rational(seg.hi())
                )));
            }
            roots.push(seg);
            continue;
        }
        let mid = pick_split_point(&deriv, &seg, eval_bits)?;
        pending.push(RationalInterval::new(seg.lo().clone(), mid.clone())?);
        pending.push(RationalInterval::new(mid, seg.hi().clone())?);
    }

    roots.sort_by(|a, b| a.lo().cmp(b.lo()));
    for pair in roots.windows(2) {
        if pair[0].hi() > pair[1].lo() {
            return Err(Error::NonIsolation(
                "overlapping root enclosures; zeros not separated at this precision".into(),
            ));
        }
    }
    Ok(CriticalPointSet {
        enclosures: roots,
        certified_complete: true,
    })
}

fn pick_split_point(
    deriv: &FunctionSpec,
    seg: &RationalInterval,
    bits: u64,
) -> Result<Rational> {
    let mid = seg.midpoint();
    let at_mid = eval_point_bits(deriv, &mid, bits)?;
    if !at_mid.contains(&Rational::zero()) {
        return Ok(mid);
    }
    // f'(mid) may be exactly zero (rational root); shift the split point
    // by a sixteenth of the segment width, deterministically.
    Ok(&mid + seg.width() / rational::int(16))
}

/// Two points of `I` together with a precision `eps` such that the
/// `eps`-approximations of their images are separated by more than `4 eps`.
///
/// Points are sampled away from wherever the derivative may vanish and the
/// precision is refined until the separation certifies; a configured
/// budget converts a (near-)constant input into a reportable error.
pub fn distinct_value_witness(
    f: &FunctionSpec,
    iv: &RationalInterval,
    base: u32,
) -> Result<(Rational, Rational, Rational)> {
    if iv.is_point() {
        return Err(Error::WitnessNotFound(
            "degenerate interval cannot carry distinct values".into(),
        ));
    }
    let w = iv.width();
    let mut candidates = Vec::new();
    for denom in [8i64, 16, 32, 64, 128] {
        for (a, b) in [(1i64, denom - 1), (3, denom - 3), (1, denom / 2)] {
            if a < b && b < denom {
                let z1 = iv.lo() + &w * rational::ratio(a, denom);
                let z2 = iv.lo() + &w * rational::ratio(b, denom);
                candidates.push((z1, z2));
            }
        }
    }
    let base_bits = elementary::bits_for_base_precision(base, 2);
    for (z1, z2) in candidates {
        let mut bits = base_bits;
        for _ in 0..24 {
            let e1 = eval_point_bits(f, &z1, bits)?;
            let e2 = eval_point_bits(f, &z2, bits)?;
            let eps = if e1.width() >= e2.width() {
                e1.width()
            } else {
                e2.width()
            };
            let gap = if e1.hi() < e2.lo() {
                e2.lo() - e1.hi()
            } else if e2.hi() < e1.lo() {
                e1.lo() - e2.hi()
            } else {
                Rational::zero()
            };
            if !gap.is_zero() {
                let eps = if eps.is_zero() {
                    &gap / rational::int(8)
                } else {
                    eps
                };
                if gap > rational::int(4) * &eps {
                    return Ok((z1, z2, eps));
                }
            }
            if e1 == e2 && e1.is_point() {
                break; // certified equal values; try another pair
            }
            bits *= 2;
        }
    }
    Err(Error::WitnessNotFound(format!(
        "no pair with certified distinct values in [{}, {}] within the refinement budget",
        rational::format_rational(iv.lo()),
        rational::format_rational(iv.hi())
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn rt(lo: (i64, i64), hi: (i64, i64)) -> RationalInterval {
        RationalInterval::new(ratio(lo.0, lo.1), ratio(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn parses_identity_and_derivative() {
        let f = parse("x").unwrap();
        assert_eq!(f.expr(), &Expr::Var);
        assert_eq!(f.derivative_expr(), &Expr::Const(int(1)));
    }

    #[test]
    fn parses_exp_chain_rule() {
        let f = parse("exp(2*x)").unwrap();
        let at_zero = eval_point_bits(&f.derivative_spec(), &int(0), 40).unwrap();
        assert!(at_zero.contains(&int(2)));
    }

    #[test]
    fn parses_polynomial_derivative() {
        let f = parse("x^2 - x").unwrap();
        let d = f.derivative_spec();
        // 2x - 1 at x = 3 gives 5, exactly
        let v = eval_point_bits(&d, &int(3), 20).unwrap();
        assert!(v.is_point());
        assert_eq!(v.lo(), &int(5));
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("1/0") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse("foo(x)").is_err());
        assert!(parse("x^").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("x + ").is_err());
    }

    #[test]
    fn rational_literals_fold() {
        let f = parse("2*x+1/3").unwrap();
        let v = eval_point_bits(&f, &ratio(1, 3), 30).unwrap();
        assert!(v.is_point());
        assert_eq!(v.lo(), &int(1));
    }

    #[test]
    fn eval_enclosure_exact_for_arithmetic() {
        let f = parse("2*x+1").unwrap();
        let v = eval_enclosure(&f, &ratio(1, 3), 12, 10).unwrap();
        assert!(v.is_point());
        assert_eq!(v.lo(), &ratio(5, 3));
    }

    #[test]
    fn eval_enclosure_exp_against_taylor_oracle() {
        let f = parse("exp(x)").unwrap();
        let v = eval_enclosure(&f, &int(1), 6, 10).unwrap();
        assert!(v.lo() >= &ratio(2_718_281, 1_000_000));
        assert!(v.hi() <= &ratio(2_718_283, 1_000_000));
        let v0 = eval_enclosure(&f, &int(0), 10, 10).unwrap();
        assert!(v0.contains(&int(1)));
    }

    #[test]
    fn eval_interval_identity_and_monotone() {
        let f = parse("x").unwrap();
        let iv = rt((1, 4), (1, 2));
        let out = eval_interval(&f, &iv, 10, 10).unwrap();
        assert_eq!(&out, &iv);

        let g = parse("2*x").unwrap();
        let out = eval_interval(&g, &iv, 10, 10).unwrap();
        assert_eq!(out.lo(), &ratio(1, 2));
        assert_eq!(out.hi(), &int(1));

        let sq = parse("x^2").unwrap();
        let out = eval_interval(&sq, &rt((-1, 1), (1, 1)), 6, 10).unwrap();
        assert!(out.contains_interval(&rt((0, 1), (1, 1))));
    }

    #[test]
    fn division_by_zero_interval_is_domain_error() {
        let f = parse("1/x").unwrap();
        assert!(matches!(
            eval_interval(&f, &rt((-1, 1), (1, 1)), 6, 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_enclosure(&parse("ln(x)").unwrap(), &ratio(-1, 1), 6, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn critical_points_found_by_bisection() {
        // exp has no critical points
        let f = parse("exp(x)").unwrap();
        let cps = critical_points(&f, &rt((0, 1), (1, 1)), 20).unwrap();
        assert!(cps.enclosures.is_empty());
        assert!(cps.certified_complete);

        // x^2 - x has the single critical point 1/2
        let g = parse("x^2 - x").unwrap();
        let cps = critical_points(&g, &rt((0, 1), (1, 1)), 20).unwrap();
        assert_eq!(cps.enclosures.len(), 1);
        assert!(cps.enclosures[0].contains(&ratio(1, 2)));

        // x^3 - x has critical points at +-1/sqrt(3); a bisection oracle on
        // 3z^2 - 1 = 0 pins them inside +-[0.577350, 0.577351].
        let h = parse("x^3 - x").unwrap();
        let cps = critical_points(&h, &rt((-2, 1), (2, 1)), 24).unwrap();
        assert_eq!(cps.enclosures.len(), 2);
        let lo_root = &cps.enclosures[0];
        let hi_root = &cps.enclosures[1];
        assert!(lo_root.lo() > &ratio(-577_351, 1_000_000));
        assert!(lo_root.hi() < &ratio(-577_350, 1_000_000));
        assert!(hi_root.lo() > &ratio(577_350, 1_000_000));
        assert!(hi_root.hi() < &ratio(577_351, 1_000_000));
    }

    #[test]
    fn witness_separates_values() {
        let f = parse("x").unwrap();
        let (z1, z2, eps) = distinct_value_witness(&f, &rt((0, 1), (1, 1)), 10).unwrap();
        let gap = (&z2 - &z1).abs();
        assert!(gap > rational::int(4) * &eps);

        // x^2 on [-1,1]: valid output must avoid symmetric pairs; check the
        // separation post-hoc on exact squares
        let g = parse("x^2").unwrap();
        let (z1, z2, eps) = distinct_value_witness(&g, &rt((-1, 1), (1, 1)), 10).unwrap();
        let v1 = &z1 * &z1;
        let v2 = &z2 * &z2;
        assert!((v1 - v2).abs() > rational::int(4) * eps);

        let h = parse("exp(x)").unwrap();
        let (_, _, eps) = distinct_value_witness(&h, &rt((0, 1), (1, 10)), 10).unwrap();
        assert!(eps.is_positive());
    }

    #[test]
    fn witness_fails_on_constants() {
        let f = parse("1/2").unwrap();
        assert!(matches!(
            distinct_value_witness(&f, &rt((0, 1), (1, 1)), 10),
            Err(Error::WitnessNotFound(_))
        ));
    }

    #[test]
    fn enclosure_soundness_nested_refinement() {
        let f = parse("exp(x) * sin(x) + x^3").unwrap();
        for num in [-3i64, -1, 0, 2, 5] {
            let x = ratio(num, 7);
            let coarse = eval_enclosure(&f, &x, 8, 10).unwrap();
            let fine = eval_enclosure(&f, &x, 18, 10).unwrap();
            assert!(
                coarse.contains_interval(&fine),
                "refinement escaped at x = {num}/7"
            );
        }
    }

    #[test]
    fn inclusion_isotonicity() {
        let f = parse("exp(x) - x^2").unwrap();
        let inner = rt((1, 4), (1, 2));
        let outer = rt((0, 1), (3, 4));
        let ei = eval_interval(&f, &inner, 10, 10).unwrap();
        let eo = eval_interval(&f, &outer, 10, 10).unwrap();
        assert!(eo.contains_interval(&ei));
    }

    #[test]
    fn derivative_consistency_finite_differences() {
        // central difference vs symbolic derivative, with the explicit
        // O(h^2) constant sup|f'''|/6 over the stencil interval
        let f = parse("exp(x)").unwrap();
        let d = f.derivative_spec();
        let third = d.derivative_spec().derivative_spec();
        let x = ratio(1, 3);
        let h = ratio(1, 1024);
        let fp = eval_enclosure(&f, &(&x + &h), 30, 10).unwrap();
        let fm = eval_enclosure(&f, &(&x - &h), 30, 10).unwrap();
        let scale = RationalInterval::point(rational::int(1) / (rational::int(2) * &h));
        let diff = fp.sub(&fm).mul(&scale);
        let dv = eval_enclosure(&d, &x, 30, 10).unwrap();
        let stencil = RationalInterval::new(&x - &h, &x + &h).unwrap();
        let m3 = eval_interval(&third, &stencil, 10, 10).unwrap();
        let m3_bound = if m3.lo().abs() >= m3.hi().abs() {
            m3.lo().abs()
        } else {
            m3.hi().abs()
        };
        let tol = m3_bound * &h * &h / rational::int(6) + diff.width() + dv.width();
        let gap = (diff.midpoint() - dv.midpoint()).abs();
        assert!(gap <= tol, "finite difference gap {gap} exceeds {tol}");
    }
}
