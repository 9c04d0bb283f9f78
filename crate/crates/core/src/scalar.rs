//! Scalars with an exact rational backend and a 64-bit float backend, plus
//! closed/open intervals over them.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Absolute tolerance used by float classification predicates.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    F64,
}

impl Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::F64 => f.write_str("f64"),
        }
    }
}

impl FromStr for Backend {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "rational" => Ok(Backend::Exact),
            "f64" | "float" | "float64" => Ok(Backend::F64),
            _ => Err(ScalarError::UnknownBackend(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("cannot parse {input:?} as a number (column {column})")]
    Parse { input: String, column: usize },
    #[error("division by zero in {0:?}")]
    ZeroDenominator(String),
    #[error("unknown backend {0:?} (expected exact or f64)")]
    UnknownBackend(String),
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Inverted { lo: String, hi: String },
    #[error("overlap detected between {0} and {1}")]
    OverlapDetected(String, String),
}

/// Numeric backend. Implemented for [`BigRational`] (exact) and `f64`.
///
/// Mixing backends inside one computation is impossible by construction:
/// every generic routine is instantiated at a single `S`.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn ratio(p: i64, q: i64) -> Self {
        Self::from_i64(p) / Self::from_i64(q)
    }
    /// Exact binary value for the rational backend; `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn parse_literal(s: &str) -> Result<Self, ScalarError>;
    /// `p/q` for exact values, 17 significant digits for floats.
    fn to_literal(&self) -> String;
    /// Absolute tolerance for predicates: zero on the exact backend.
    fn tol() -> f64;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
    fn pow_int(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
    /// Sum of many values.
    fn sum_all(v: Vec<Self>) -> Self {
        v.into_iter().fold(Self::zero(), |a, b| a + b)
    }
    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

/// `a < b` with float slack: on f64 requires `a < b - tol * scale`.
pub fn lt_tol<S: Scalar>(a: &S, b: &S, scale: &S) -> bool {
    if S::tol() == 0.0 {
        a < b
    } else {
        a.to_f64() < b.to_f64() - S::tol() * scale.to_f64().abs().max(1.0)
    }
}

/// `a == b` up to the backend tolerance times `scale`.
pub fn eq_tol<S: Scalar>(a: &S, b: &S, scale: &S) -> bool {
    if S::tol() == 0.0 {
        a == b
    } else {
        (a.to_f64() - b.to_f64()).abs() <= S::tol() * scale.to_f64().abs().max(1.0)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::F64;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        let r = parse_rational(s)?;
        match &r {
            Literal::Ratio(q) => Ok(ToPrimitive::to_f64(q).unwrap_or(f64::NAN)),
            Literal::Decimal(text) => text.parse::<f64>().map_err(|_| ScalarError::Parse {
                input: s.to_string(),
                column: 1,
            }),
        }
    }
    fn to_literal(&self) -> String {
        format_f64(*self)
    }
    fn tol() -> f64 {
        FLOAT_TOL
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Exact;

    /// Pairwise sum on unreduced fractions with a single reduction at the
    /// end; running totals with many unrelated denominators spend nearly
    /// all their time in gcds.
    fn sum_all(v: Vec<Self>) -> Self {
        let mut parts: Vec<(BigInt, BigInt)> = v.into_iter().map(|r| r.into()).collect();
        while parts.len() > 1 {
            let mut next = Vec::with_capacity(parts.len() / 2 + 1);
            let mut it = parts.into_iter();
            while let Some((n1, d1)) = it.next() {
                match it.next() {
                    Some((n2, d2)) => {
                        if d1 == d2 {
                            next.push((n1 + n2, d1));
                        } else {
                            next.push((n1 * &d2 + n2 * &d1, d1 * d2));
                        }
                    }
                    None => next.push((n1, d1)),
                }
            }
            parts = next;
        }
        match parts.pop() {
            Some((n, d)) => BigRational::new(n, d),
            None => Zero::zero(),
        }
    }

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn ratio(p: i64, q: i64) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        match parse_rational(s)? {
            Literal::Ratio(q) => Ok(q),
            Literal::Decimal(text) => decimal_to_rational(&text).ok_or(ScalarError::Parse {
                input: s.to_string(),
                column: 1,
            }),
        }
    }
    fn to_literal(&self) -> String {
        self.to_string()
    }
    fn tol() -> f64 {
        0.0
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn recip(&self) -> Self {
        BigRational::recip(self)
    }
}

enum Literal {
    Ratio(BigRational),
    Decimal(String),
}

/// True when `s` is a `p/q` or integer literal (no decimal point or exponent).
pub fn is_rational_literal(s: &str) -> bool {
    matches!(parse_rational(s), Ok(Literal::Ratio(_)))
}

fn parse_rational(s: &str) -> Result<Literal, ScalarError> {
    let t = s.trim();
    let bad = |col: usize| ScalarError::Parse {
        input: s.to_string(),
        column: col,
    };
    if t.is_empty() {
        return Err(bad(1));
    }
    let lead = s.len() - s.trim_start().len();
    if let Some((p, q)) = t.split_once('/') {
        let num = parse_int(p).map_err(|c| bad(lead + c + 1))?;
        let den = parse_int(q).map_err(|c| bad(lead + p.len() + 1 + c + 1))?;
        if Zero::is_zero(&den) {
            return Err(ScalarError::ZeroDenominator(s.to_string()));
        }
        return Ok(Literal::Ratio(BigRational::new(num, den)));
    }
    if let Ok(n) = parse_int(t) {
        return Ok(Literal::Ratio(BigRational::from_integer(n)));
    }
    for (i, ch) in t.char_indices() {
        if !(ch.is_ascii_digit() || matches!(ch, '+' | '-' | '.' | 'e' | 'E')) {
            return Err(bad(lead + i + 1));
        }
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Literal::Decimal(t.to_string())),
        _ => Err(bad(lead + 1)),
    }
}

fn parse_int(s: &str) -> Result<BigInt, usize> {
    let t = s.trim();
    let body = t.strip_prefix(['+', '-']).unwrap_or(t);
    if body.is_empty() {
        return Err(0);
    }
    if let Some(i) = body.find(|c: char| !c.is_ascii_digit()) {
        return Err(i + (t.len() - body.len()));
    }
    BigInt::from_str(t).map_err(|_| 0)
}

/// Exact value of a decimal string such as `-0.125` or `2.5e-3`.
fn decimal_to_rational(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let neg = mantissa.starts_with('-');
    let m = mantissa.trim_start_matches(['+', '-']);
    let (int, frac) = m.split_once('.').unwrap_or((m, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut n = BigInt::from_str(&digits).ok()?;
    if neg {
        n = -n;
    }
    let scale = exp - frac.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    Some(BigRational::from_integer(n) * ten.pow_int(scale))
}

/// 17 significant digits, fixed notation for moderate magnitudes.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        let decimals = (16 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

/// Interval with independent endpoint openness.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S, lo_open: bool, hi_open: bool) -> Result<Self, ScalarError> {
        if lo > hi {
            return Err(ScalarError::Inverted {
                lo: lo.to_literal(),
                hi: hi.to_literal(),
            });
        }
        Ok(Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    /// Closed interval; panics if `lo > hi`.
    pub fn closed(lo: S, hi: S) -> Self {
        Self::new(lo, hi, false, false).expect("closed interval with lo > hi")
    }

    /// Open interval; panics if `lo > hi`.
    pub fn open(lo: S, hi: S) -> Self {
        Self::new(lo, hi, true, true).expect("open interval with lo > hi")
    }

    pub fn length(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && (self.lo_open || self.hi_open)
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = if self.lo_open {
            *x > self.lo
        } else {
            *x >= self.lo
        };
        let below = if self.hi_open {
            *x < self.hi
        } else {
            *x <= self.hi
        };
        above && below
    }

    /// Interior contains `x` (endpoints excluded regardless of flags).
    pub fn interior_contains(&self, x: &S) -> bool {
        *x > self.lo && *x < self.hi
    }

    /// Closure of `self` lies inside the closure of `other`.
    pub fn within(&self, other: &Self) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    pub fn midpoint(&self) -> S {
        (self.lo.clone() + self.hi.clone()) / S::from_i64(2)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Interval<T> {
        Interval {
            lo: f(&self.lo),
            hi: f(&self.hi),
            lo_open: self.lo_open,
            hi_open: self.hi_open,
        }
    }

    pub fn to_f64(&self) -> Interval<f64> {
        self.map(|v| v.to_f64())
    }
}

impl<S: Scalar> Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo.to_literal(),
            self.hi.to_literal(),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

pub fn length<S: Scalar>(iv: &Interval<S>) -> S {
    iv.length()
}

/// Sum of lengths of intervals whose interiors must be pairwise disjoint.
pub fn disjoint_union_measure<S: Scalar>(ivs: &[Interval<S>]) -> Result<S, ScalarError> {
    let mut sorted: Vec<&Interval<S>> = ivs.iter().filter(|iv| iv.lo < iv.hi).collect();
    sorted.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
    for w in sorted.windows(2) {
        let overlap = w[0].hi.clone() - w[1].lo.clone();
        let slack = if S::tol() == 0.0 { 0.0 } else { S::tol() };
        if overlap.to_f64() > slack || (S::tol() == 0.0 && overlap > S::zero()) {
            return Err(ScalarError::OverlapDetected(
                w[0].to_string(),
                w[1].to_string(),
            ));
        }
    }
    Ok(sorted
        .into_iter()
        .fold(S::zero(), |acc, iv| acc + iv.length()))
}
