//! Rates (weights / indicial roots) and the small number tower they live in.
//!
//! A [`Rate`] is an exact rational, an exact quadratic surd `a + b*sqrt(d)`, or
//! a plain float. Arithmetic stays exact while both operands share a field and
//! falls back to `f64` otherwise. Comparisons between inexact values use the
//! global tolerance [`RATE_TOL`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Comparison tolerance for algebraic-float rates.
pub const RATE_TOL: f64 = 1e-9;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge numerators/denominators before dividing.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// `a + b*sqrt(d)` with `d >= 2` squarefree and `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    rational: BigRational,
    coeff: BigRational,
    radicand: u64,
}

impl QuadSurd {
    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational)
            + rational_to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }

    fn conj(&self) -> QuadSurd {
        QuadSurd {
            coeff: -self.coeff.clone(),
            ..self.clone()
        }
    }

    /// Exact sign of `a + b*sqrt(d)`.
    fn signum(&self) -> Ordering {
        let a = &self.rational;
        let b = &self.coeff;
        let sa = a.cmp(&BigRational::zero());
        let sb = b.cmp(&BigRational::zero());
        if sa == sb || sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let a2 = a * a;
        let b2d = b * b * BigRational::from_integer(BigInt::from(self.radicand));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

/// Splits `n = s^2 * d` with `d` squarefree. Trial division; a cofactor left
/// past the search bound is treated as squarefree unless it is a perfect square.
fn squarefree_split(n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut core = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest && p < 1_000_000 {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    let r = rest.sqrt();
    if r * r == rest {
        square *= r;
    } else {
        core *= rest;
    }
    (square, core)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rate {
    Exact(BigRational),
    Surd(QuadSurd),
    Float(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateKind {
    ExactRational,
    AlgebraicFloat,
}

impl From<i64> for Rate {
    fn from(v: i64) -> Self {
        Rate::Exact(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigRational> for Rate {
    fn from(q: BigRational) -> Self {
        Rate::Exact(q)
    }
}

impl Rate {
    pub fn int(v: i64) -> Rate {
        Rate::from(v)
    }

    pub fn ratio(n: i64, d: i64) -> Rate {
        Rate::Exact(rational(n, d))
    }

    pub fn float(x: f64) -> Rate {
        Rate::Float(x)
    }

    pub fn zero() -> Rate {
        Rate::int(0)
    }

    /// `a + b*sqrt(d)` for a nonnegative integer `d`, normalized.
    pub fn surd(a: BigRational, b: BigRational, d: u64) -> Rate {
        if b.is_zero() || d == 0 {
            return Rate::Exact(a);
        }
        let (s, core) = squarefree_split(d);
        let b = b * BigRational::from_integer(BigInt::from(s));
        if core == 1 {
            Rate::Exact(a + b)
        } else {
            Rate::Surd(QuadSurd {
                rational: a,
                coeff: b,
                radicand: core,
            })
        }
    }

    /// Principal square root of a nonnegative rational, exact as a surd.
    pub fn sqrt_rational(q: &BigRational) -> Result<Rate> {
        if q.is_negative() {
            return Err(Error::Domain(format!("square root of negative value {q}")));
        }
        // sqrt(p/r) = sqrt(p*r)/r
        let n = q.numer() * q.denom();
        match n.to_u64() {
            Some(n) => Ok(Rate::surd(
                BigRational::zero(),
                BigRational::new(BigInt::one(), q.denom().clone()),
                n,
            )),
            None => {
                let root = n.sqrt();
                if &root * &root == n {
                    Ok(Rate::Exact(BigRational::new(root, q.denom().clone())))
                } else {
                    Ok(Rate::Float(rational_to_f64(q).sqrt()))
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rate::Exact(q) => rational_to_f64(q),
            Rate::Surd(s) => s.to_f64(),
            Rate::Float(x) => *x,
        }
    }

    pub fn kind(&self) -> RateKind {
        match self {
            Rate::Exact(_) => RateKind::ExactRational,
            _ => RateKind::AlgebraicFloat,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Rate::Float(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Rate::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// Integer value, if this rate is an exact integer.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Rate::Exact(q) if q.is_integer() => q.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn neg(&self) -> Rate {
        match self {
            Rate::Exact(q) => Rate::Exact(-q.clone()),
            Rate::Surd(s) => Rate::Surd(QuadSurd {
                rational: -s.rational.clone(),
                coeff: -s.coeff.clone(),
                radicand: s.radicand,
            }),
            Rate::Float(x) => Rate::Float(-x),
        }
    }

    /// Splits an exact value into `(a, b, d)`; rationals report `d = 1`, `b = 0`.
    fn parts(&self) -> Option<(BigRational, BigRational, u64)> {
        match self {
            Rate::Exact(q) => Some((q.clone(), BigRational::zero(), 1)),
            Rate::Surd(s) => Some((s.rational.clone(), s.coeff.clone(), s.radicand)),
            Rate::Float(_) => None,
        }
    }

    /// Common radicand of two exact values, if they live in the same field.
    fn common_field(
        &self,
        other: &Rate,
    ) -> Option<(BigRational, BigRational, BigRational, BigRational, u64)> {
        let (a, b, d1) = self.parts()?;
        let (c, e, d2) = other.parts()?;
        let d = match (d1, d2) {
            (1, d) | (d, 1) => d,
            (x, y) if x == y => x,
            _ => return None,
        };
        Some((a, b, c, e, d))
    }

    pub fn add(&self, other: &Rate) -> Rate {
        match self.common_field(other) {
            Some((a, b, c, e, d)) => Rate::surd(a + c, b + e, d),
            None => Rate::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Rate) -> Rate {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rate) -> Rate {
        match self.common_field(other) {
            Some((a, b, c, e, d)) => {
                let dd = BigRational::from_integer(BigInt::from(d));
                Rate::surd(&a * &c + &b * &e * dd, a * e + b * c, d)
            }
            None => Rate::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn div(&self, other: &Rate) -> Result<Rate> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        match (self, other) {
            (_, Rate::Exact(q)) if self.is_exact() => {
                let inv = Rate::Exact(q.recip());
                Ok(self.mul(&inv))
            }
            (_, Rate::Surd(s)) if self.common_field(other).is_some() => {
                let conj = Rate::Surd(s.conj());
                let norm = other.mul(&conj);
                let num = self.mul(&conj);
                num.div(&norm)
            }
            _ => Ok(Rate::Float(self.to_f64() / other.to_f64())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rate::Exact(q) => q.is_zero(),
            Rate::Surd(_) => false,
            Rate::Float(x) => *x == 0.0,
        }
    }

    /// Zero test: exact for exact values, `|x| < tol` for floats.
    pub fn is_zero_tol(&self, tol: f64) -> bool {
        match self {
            Rate::Float(x) => x.abs() < tol,
            _ => self.is_zero(),
        }
    }

    /// Ordering that treats floats within [`RATE_TOL`] as equal.
    pub fn cmp_tol(&self, other: &Rate) -> Ordering {
        self.cmp_with(other, RATE_TOL)
    }

    pub fn cmp_with(&self, other: &Rate, tol: f64) -> Ordering {
        match self.sub(other) {
            Rate::Exact(q) => q.cmp(&BigRational::zero()),
            Rate::Surd(s) => s.signum(),
            Rate::Float(x) => {
                if x.abs() < tol {
                    Ordering::Equal
                } else if x > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &Rate) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }

    /// The duality map `λ ↦ −5 − λ` on rates of the six-dimensional cone.
    pub fn dual(&self) -> Rate {
        Rate::int(-5).sub(self)
    }

    /// Human-readable label; surds print as `2*sqrt(2)-3`.
    pub fn label(&self) -> String {
        match self {
            Rate::Exact(q) => q.to_string(),
            Rate::Surd(s) => {
                let mut out = String::new();
                let b = &s.coeff;
                if b.is_one() {
                } else if *b == -BigRational::one() {
                    out.push('-');
                } else {
                    out.push_str(&format!("{b}*"));
                }
                out.push_str(&format!("sqrt({})", s.radicand));
                if s.rational.is_positive() {
                    out.push_str(&format!("+{}", s.rational));
                } else if s.rational.is_negative() {
                    out.push_str(&format!("{}", s.rational));
                }
                out
            }
            Rate::Float(x) => format!("{x}"),
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn parse_integer(s: &str) -> Result<BigInt> {
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    s.parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("invalid integer `{s}`")))
}

/// Exact value of a decimal literal such as `-0.5`, `1e-3`, `2.50E2`.
fn parse_decimal(s: &str) -> Result<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("invalid exponent in `{s}`")))?,
        ),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("invalid number `{s}`")));
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("invalid number `{s}`")));
    }
    let all = format!("{int_part}{frac_part}");
    let mut value =
        BigRational::from_integer(parse_integer(if all.is_empty() { "0" } else { &all })?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if neg { -value } else { value })
}

/// Parses `p/q`, integers or decimals into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_decimal(n.trim())?;
            let d = parse_decimal(d.trim())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(n / d)
        }
        None => parse_decimal(s),
    }
}

fn parse_term(term: &str) -> Result<Rate> {
    let (neg, body) = match term.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, term.strip_prefix('+').unwrap_or(term)),
    };
    let value = match body.find("sqrt(") {
        Some(i) => {
            let coeff_str = body[..i].trim_end_matches('*');
            let coeff = if coeff_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coeff_str)?
            };
            let inner = body[i + 5..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced sqrt in `{term}`")))?;
            let root = Rate::sqrt_rational(&parse_rational(inner)?)?;
            Rate::Exact(coeff).mul(&root)
        }
        None => Rate::Exact(parse_rational(body)?),
    };
    Ok(if neg { value.neg() } else { value })
}

impl FromStr for Rate {
    type Err = Error;

    /// Accepts `-3`, `-1/2`, `-0.5`, `1e-3`, `2*sqrt(2)-3`, `-2+sqrt(6)`.
    fn from_str(s: &str) -> Result<Rate> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty rate".into()));
        }
        let bytes: Vec<char> = compact.chars().collect();
        let mut terms = Vec::new();
        let mut start = 0;
        let mut depth = 0i32;
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    let prev = bytes[i - 1];
                    if !matches!(prev, 'e' | 'E' | '*' | '/') {
                        terms.push(bytes[start..i].iter().collect::<String>());
                        start = i;
                    }
                }
                _ => {}
            }
        }
        terms.push(bytes[start..].iter().collect::<String>());
        let mut total = Rate::zero();
        for t in &terms {
            total = total.add(&parse_term(t)?);
        }
        Ok(total)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RateRepr {
    Text(String),
    Number(f64),
    Labeled { float: f64, label: Option<String> },
}

impl TryFrom<RateRepr> for Rate {
    type Error = Error;

    fn try_from(repr: RateRepr) -> Result<Rate> {
        match repr {
            RateRepr::Text(s) => s.parse(),
            RateRepr::Number(x) => {
                if !x.is_finite() {
                    return Err(Error::Parse(format!("non-finite rate {x}")));
                }
                // shortest round-trip decimal, read back exactly
                Ok(Rate::Exact(parse_decimal(&format!("{x}"))?))
            }
            RateRepr::Labeled { float, label } => match label {
                Some(l) => {
                    let parsed: Rate = l.parse()?;
                    if (parsed.to_f64() - float).abs() > RATE_TOL * (1.0 + float.abs()) {
                        return Err(Error::Parse(format!(
                            "label `{l}` does not match value {float}"
                        )));
                    }
                    Ok(parsed)
                }
                None => Ok(Rate::Float(float)),
            },
        }
    }
}

impl Serialize for Rate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Rate::Exact(q) => serializer.serialize_str(&q.to_string()),
            Rate::Surd(_) => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("float", &self.to_f64())?;
                map.serialize_entry("label", &self.label())?;
                map.end()
            }
            Rate::Float(x) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("float", x)?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RateRepr::deserialize(deserializer)?;
        Rate::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a rate as a bare string (`"3-2*sqrt(2)"`).
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(
        rate: &Rate,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&rate.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Rate, D::Error> {
        Rate::deserialize(deserializer)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            rates: &[Rate],
            serializer: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = serializer.serialize_seq(Some(rates.len()))?;
            for r in rates {
                seq.serialize_element(&r.label())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            deserializer: D,
        ) -> std::result::Result<Vec<Rate>, D::Error> {
            Vec::<Rate>::deserialize(deserializer)
        }
    }
}

/// A real interval of rates with independently open or closed ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Rate,
    pub hi: Rate,
    #[serde(default)]
    pub lo_closed: bool,
    #[serde(default)]
    pub hi_closed: bool,
}

impl Window {
    pub fn new(lo: Rate, hi: Rate, lo_closed: bool, hi_closed: bool) -> Result<Window> {
        if lo.cmp_tol(&hi) != Ordering::Less {
            return Err(Error::InvalidWindow(format!(
                "lower bound {lo} must be below upper bound {hi}"
            )));
        }
        if !lo.to_f64().is_finite() || !hi.to_f64().is_finite() {
            return Err(Error::InvalidWindow("bounds must be finite".into()));
        }
        Ok(Window {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn open(lo: Rate, hi: Rate) -> Result<Window> {
        Window::new(lo, hi, false, false)
    }

    pub fn closed(lo: Rate, hi: Rate) -> Result<Window> {
        Window::new(lo, hi, true, true)
    }

    pub fn validate(&self) -> Result<()> {
        Window::new(
            self.lo.clone(),
            self.hi.clone(),
            self.lo_closed,
            self.hi_closed,
        )
        .map(|_| ())
    }

    pub fn contains(&self, rate: &Rate) -> bool {
        let above = match rate.cmp_tol(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match rate.cmp_tol(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// The closed endpoint that `rate` coincides with, if any.
    pub fn closed_endpoint_hit(&self, rate: &Rate) -> Option<&Rate> {
        if self.lo_closed && rate.approx_eq(&self.lo) {
            Some(&self.lo)
        } else if self.hi_closed && rate.approx_eq(&self.hi) {
            Some(&self.hi)
        } else {
            None
        }
    }

    /// Whether every point of `inner` lies in `self`.
    pub fn covers(&self, inner: &Window) -> bool {
        let lo_ok = match self.lo.cmp_tol(&inner.lo) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed || !inner.lo_closed,
            Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp_tol(&inner.hi) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed || !inner.hi_closed,
            Ordering::Less => false,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Exact binomial coefficient for small arguments; zero outside `0 <= k <= n`.
pub(crate) fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
