//! Exact rational scalars and univariate polynomials.
//!
//! Polynomials come in two shapes: [`Polynomial`] stores dense monomial
//! coefficients, [`FactoredPolynomial`] stores a leading constant together
//! with rational roots and their multiplicities. The factored form is what
//! makes exact sign analysis possible: between two consecutive roots a
//! product of linear factors cannot change sign, so a finite set of sample
//! points decides the sign on any union of intervals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("cannot parse interval region from {0:?}")]
    ParseRegion(String),
    #[error("invalid interval: lower end {lo} exceeds upper end {hi}")]
    InvalidInterval { lo: String, hi: String },
    #[error("root {0} listed more than once")]
    DuplicateRoot(String),
    #[error("factor multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("sign condition is vacuous: region is empty")]
    EmptyRegion,
    #[error("malformed polynomial document: {0}")]
    Document(String),
}

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, with optional sign and surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let trimmed = s.trim().replace('\u{2212}', "-");
    let err = || ExactError::ParseRational(s.to_string());
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed.as_str(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod ratstr {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let raw = Option::<String>::deserialize(d)?;
            raw.map(|s| parse_rational(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}

/// Dense polynomial with rational coefficients; `coeffs[i]` multiplies `t^i`.
///
/// The trailing coefficient is nonzero unless the polynomial is zero, in
/// which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "ratstr::vec")]
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        Polynomial { coeffs }
    }

    /// `t - root`.
    pub fn linear(root: &Rational) -> Self {
        Polynomial::new(vec![-root.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Polynomial::constant(Rational::one()), |acc, _| &acc * self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `leading * Π (t - root)^mult` with pairwise distinct roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPolynomial {
    leading: Rational,
    factors: Vec<(Rational, u32)>,
}

impl FactoredPolynomial {
    pub fn new(leading: Rational, factors: Vec<(Rational, u32)>) -> Result<Self, ExactError> {
        for (i, (root, mult)) in factors.iter().enumerate() {
            if *mult == 0 {
                return Err(ExactError::ZeroMultiplicity);
            }
            if factors[..i].iter().any(|(r, _)| r == root) {
                return Err(ExactError::DuplicateRoot(format_rational(root)));
            }
        }
        Ok(FactoredPolynomial { leading, factors })
    }

    /// Monic product over the given roots; repeated roots are merged.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        let mut factors: Vec<(Rational, u32)> = Vec::new();
        for r in roots {
            match factors.iter_mut().find(|(x, _)| x == r) {
                Some((_, m)) => *m += 1,
                None => factors.push((r.clone(), 1)),
            }
        }
        FactoredPolynomial {
            leading: Rational::one(),
            factors,
        }
    }

    pub fn leading(&self) -> &Rational {
        &self.leading
    }

    pub fn factors(&self) -> &[(Rational, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        if self.leading.is_zero() {
            0
        } else {
            self.factors.iter().map(|(_, m)| *m as usize).sum()
        }
    }

    /// Evaluates factor by factor, without expanding.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.factors
            .iter()
            .fold(self.leading.clone(), |acc, (r, m)| {
                let base = t - r;
                (0..*m).fold(acc, |acc, _| acc * &base)
            })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FactoredPolynomial {
            leading: &self.leading * c,
            factors: self.factors.clone(),
        }
    }

    /// Monomial-basis expansion.
    pub fn expand(&self) -> Polynomial {
        self.factors.iter().fold(
            Polynomial::constant(self.leading.clone()),
            |acc, (root, mult)| &acc * &Polynomial::linear(root).pow(*mult),
        )
    }
}

impl fmt::Display for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.leading.is_one() || self.factors.is_empty() {
            write!(f, "{}", self.leading)?;
        }
        for (root, mult) in &self.factors {
            let lin = if root.is_zero() {
                "t".to_string()
            } else if root.is_negative() {
                format!("(t + {})", -root)
            } else {
                format!("(t - {root})")
            };
            if *mult == 1 {
                write!(f, "{lin}")?;
            } else {
                write!(f, "{lin}^{mult}")?;
            }
        }
        Ok(())
    }
}

/// Expands a factored polynomial into the monomial basis.
pub fn expand_factored(fp: &FactoredPolynomial) -> Polynomial {
    fp.expand()
}

pub fn poly_eval(p: &Polynomial, t: &Rational) -> Rational {
    p.eval(t)
}

/// Solves the square system `a·x = b` by exact Gaussian elimination;
/// `None` when the matrix is singular.
pub fn solve_linear_system(
    mut a: Vec<Vec<Rational>>,
    mut b: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let n = b.len();
    assert!(
        a.len() == n && a.iter().all(|row| row.len() == n),
        "square system expected"
    );
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// A polynomial as read from or written to a polynomial document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolynomialForm {
    Factored(FactoredPolynomial),
    Dense(Polynomial),
}

impl PolynomialForm {
    pub fn expand(&self) -> Polynomial {
        match self {
            PolynomialForm::Factored(fp) => fp.expand(),
            PolynomialForm::Dense(p) => p.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            PolynomialForm::Factored(fp) => json!({
                "factored": {
                    "leading": format_rational(&fp.leading),
                    "factors": fp.factors.iter()
                        .map(|(r, m)| json!([format_rational(r), m.to_string()]))
                        .collect::<Vec<_>>(),
                }
            }),
            PolynomialForm::Dense(p) => json!({
                "dense": p.coeffs.iter().map(format_rational).collect::<Vec<_>>()
            }),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ExactError> {
        let bad = |m: &str| ExactError::Document(m.to_string());
        let as_rational = |v: &serde_json::Value| -> Result<Rational, ExactError> {
            match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(bad("expected a rational string")),
            }
        };
        if let Some(f) = v.get("factored") {
            let leading = as_rational(f.get("leading").ok_or_else(|| bad("missing leading"))?)?;
            let raw = f
                .get("factors")
                .and_then(|x| x.as_array())
                .ok_or_else(|| bad("missing factors array"))?;
            let mut factors = Vec::with_capacity(raw.len());
            for entry in raw {
                let pair = entry
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("factor must be [root, multiplicity]"))?;
                let root = as_rational(&pair[0])?;
                let mult = as_rational(&pair[1])?;
                if !mult.is_integer() || mult.is_negative() {
                    return Err(bad("multiplicity must be a nonnegative integer"));
                }
                let mult = u32::try_from(mult.to_integer())
                    .map_err(|_| bad("multiplicity out of range"))?;
                factors.push((root, mult));
            }
            return Ok(PolynomialForm::Factored(FactoredPolynomial::new(
                leading, factors,
            )?));
        }
        if let Some(d) = v.get("dense") {
            let coeffs = d
                .as_array()
                .ok_or_else(|| bad("dense must be an array"))?
                .iter()
                .map(as_rational)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(PolynomialForm::Dense(Polynomial::new(coeffs)));
        }
        Err(bad("expected a \"factored\" or \"dense\" key"))
    }
}

/// One interval with rational endpoints; each end may be open or closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "ratstr")]
    pub lo: Rational,
    #[serde(with = "ratstr")]
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, hi, false, false)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = if self.lo_closed {
            t >= &self.lo
        } else {
            t > &self.lo
        };
        let below = if self.hi_closed {
            t <= &self.hi
        } else {
            t < &self.hi
        };
        above && below
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// `self \ other` as at most two pieces.
    fn minus(&self, other: &Interval) -> Vec<Interval> {
        if other.is_empty() || self.intersect(other).is_empty() {
            return vec![self.clone()];
        }
        let left = self.intersect(&Interval::new(
            self.lo.clone(),
            other.lo.clone(),
            true,
            !other.lo_closed,
        ));
        let right = self.intersect(&Interval::new(
            other.hi.clone(),
            self.hi.clone(),
            !other.hi_closed,
            true,
        ));
        [left, right]
            .into_iter()
            .filter(|i| !i.is_empty())
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi && self.lo_closed && self.hi_closed {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Finite union of pairwise disjoint intervals, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntervalRegion {
    intervals: Vec<Interval>,
}

impl IntervalRegion {
    pub fn empty() -> Self {
        IntervalRegion::default()
    }

    pub fn from_interval(i: Interval) -> Result<Self, ExactError> {
        IntervalRegion::from_intervals(vec![i])
    }

    /// Rejects inverted intervals; drops empty ones; merges overlaps.
    pub fn from_intervals(intervals: Vec<Interval>) -> Result<Self, ExactError> {
        for i in &intervals {
            if i.lo > i.hi {
                return Err(ExactError::InvalidInterval {
                    lo: format_rational(&i.lo),
                    hi: format_rational(&i.hi),
                });
            }
        }
        let mut region = IntervalRegion::empty();
        for i in intervals {
            region = region.union(&IntervalRegion::normalized(vec![i]));
        }
        Ok(region)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        IntervalRegion::normalized(vec![Interval::closed(lo, hi)])
    }

    fn normalized(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|i| !i.is_empty());
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for i in intervals {
            if let Some(last) = merged.last_mut() {
                let touches =
                    i.lo < last.hi || (i.lo == last.hi && (i.lo_closed || last.hi_closed));
                if touches {
                    match i.hi.cmp(&last.hi) {
                        std::cmp::Ordering::Greater => {
                            last.hi = i.hi;
                            last.hi_closed = i.hi_closed;
                        }
                        std::cmp::Ordering::Equal => last.hi_closed |= i.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            merged.push(i);
        }
        IntervalRegion { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(t))
    }

    pub fn union(&self, other: &IntervalRegion) -> IntervalRegion {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        IntervalRegion::normalized(all)
    }

    pub fn difference(&self, other: &IntervalRegion) -> IntervalRegion {
        let mut pieces = self.intervals.clone();
        for cut in &other.intervals {
            pieces = pieces.iter().flat_map(|p| p.minus(cut)).collect();
        }
        IntervalRegion::normalized(pieces)
    }

    /// Parses `"(0,1/4)"`, `"[-1,1/2]"`, points `"{1/8}"`, unions joined by `U`, `u` or `∪`,
    /// and `"empty"`/`"∅"`/`""` for the empty set.
    pub fn parse(s: &str) -> Result<Self, ExactError> {
        let err = || ExactError::ParseRegion(s.to_string());
        let cleaned: String = s
            .replace('\u{2212}', "-")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if cleaned.is_empty() || cleaned == "empty" || cleaned == "\u{2205}" || cleaned == "{}" {
            return Ok(IntervalRegion::empty());
        }
        let mut intervals = Vec::new();
        let mut rest = cleaned.as_str();
        loop {
            let lo_closed = match rest.chars().next() {
                Some('[') => true,
                Some('(') => false,
                Some('{') => {
                    let end = rest.find('}').ok_or_else(err)?;
                    let point = parse_rational(&rest[1..end])?;
                    intervals.push(Interval::closed(point.clone(), point));
                    rest = &rest[end + 1..];
                    if rest.is_empty() {
                        break;
                    }
                    rest = strip_union(rest).ok_or_else(err)?;
                    continue;
                }
                _ => return Err(err()),
            };
            let end = rest.find([')', ']']).ok_or_else(err)?;
            let hi_closed = rest[end..].starts_with(']');
            let (lo, hi) = rest[1..end].split_once(',').ok_or_else(err)?;
            intervals.push(Interval::new(
                parse_rational(lo)?,
                parse_rational(hi)?,
                lo_closed,
                hi_closed,
            ));
            rest = &rest[end + 1..];
            if rest.is_empty() {
                break;
            }
            rest = strip_union(rest).ok_or_else(err)?;
        }
        IntervalRegion::from_intervals(intervals)
    }
}

fn strip_union(s: &str) -> Option<&str> {
    s.strip_prefix('U')
        .or_else(|| s.strip_prefix('u'))
        .or_else(|| s.strip_prefix('\u{222a}'))
}

impl fmt::Display for IntervalRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.intervals.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" U "))
    }
}

/// Outcome of an exact sign analysis on a region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SignReport {
    /// Identically zero at every sample point (a zero polynomial).
    Zero,
    Nonnegative,
    Nonpositive,
    /// Both signs occur; every sample point of each sign is listed.
    Mixed {
        #[serde(with = "ratstr::vec")]
        positive_at: Vec<Rational>,
        #[serde(with = "ratstr::vec")]
        negative_at: Vec<Rational>,
    },
}

impl SignReport {
    pub fn is_nonnegative(&self) -> bool {
        matches!(self, SignReport::Zero | SignReport::Nonnegative)
    }

    pub fn is_nonpositive(&self) -> bool {
        matches!(self, SignReport::Zero | SignReport::Nonpositive)
    }
}

/// Decides the sign of `fp` on `region` exactly.
///
/// Samples every closed endpoint, every root inside the region, and the
/// midpoint of each gap between consecutive roots and endpoints.
pub fn sign_on_region(
    fp: &FactoredPolynomial,
    region: &IntervalRegion,
) -> Result<SignReport, ExactError> {
    if region.is_empty() {
        return Err(ExactError::EmptyRegion);
    }
    let two = int(2);
    let mut samples: Vec<Rational> = Vec::new();
    for iv in region.intervals() {
        if iv.lo == iv.hi {
            samples.push(iv.lo.clone());
            continue;
        }
        let mut marks: Vec<Rational> = fp
            .factors()
            .iter()
            .map(|(r, _)| r.clone())
            .filter(|r| r > &iv.lo && r < &iv.hi)
            .collect();
        marks.sort();
        marks.insert(0, iv.lo.clone());
        marks.push(iv.hi.clone());
        if iv.lo_closed {
            samples.push(iv.lo.clone());
        }
        for w in marks.windows(2) {
            samples.push((&w[0] + &w[1]) / &two);
        }
        samples.extend(marks[1..marks.len() - 1].iter().cloned());
        if iv.hi_closed {
            samples.push(iv.hi.clone());
        }
    }
    samples.sort();
    samples.dedup();

    let mut positive_at = Vec::new();
    let mut negative_at = Vec::new();
    for t in samples {
        let v = fp.eval(&t);
        if v.is_positive() {
            positive_at.push(t);
        } else if v.is_negative() {
            negative_at.push(t);
        }
    }
    Ok(match (positive_at.is_empty(), negative_at.is_empty()) {
        (true, true) => SignReport::Zero,
        (false, true) => SignReport::Nonnegative,
        (true, false) => SignReport::Nonpositive,
        (false, false) => SignReport::Mixed {
            positive_at,
            negative_at,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_code() -> FactoredPolynomial {
        FactoredPolynomial::new(
            int(1),
            vec![
                (int(-1), 1),
                (rat(-1, 2), 2),
                (rat(-1, 4), 2),
                (int(0), 1),
                (rat(1, 4), 1),
                (rat(1, 2), 3),
            ],
        )
        .unwrap()
    }

    fn min_design() -> FactoredPolynomial {
        FactoredPolynomial::new(
            int(1),
            vec![
                (int(0), 1),
                (int(-1), 1),
                (rat(-1, 2), 2),
                (rat(-1, 4), 1),
                (rat(1, 4), 1),
                (rat(1, 2), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("5/1114112").unwrap(), rat(5, 1114112));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("4/-8").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
    }

    #[test]
    fn evaluation_of_bound_polynomials() {
        let f = max_code().expand();
        assert_eq!(f.degree(), Some(10));
        assert_eq!(f.eval(&int(1)), rat(675, 1024));
        assert_eq!(f.eval(&rat(1, 2)), int(0));
        let g = expand_factored(&min_design());
        assert_eq!(g.degree(), Some(7));
        assert_eq!(poly_eval(&g, &int(1)), rat(135, 64));
    }

    #[test]
    fn expand_simple_product() {
        let fp = FactoredPolynomial::new(int(1), vec![(int(-1), 1), (int(1), 1)]).unwrap();
        assert_eq!(fp.expand(), Polynomial::new(vec![int(-1), int(0), int(1)]));
    }

    #[test]
    fn factored_rejects_bad_factors() {
        assert_eq!(
            FactoredPolynomial::new(int(1), vec![(int(1), 1), (int(1), 2)]),
            Err(ExactError::DuplicateRoot("1".into()))
        );
        assert_eq!(
            FactoredPolynomial::new(int(1), vec![(int(1), 0)]),
            Err(ExactError::ZeroMultiplicity)
        );
    }

    #[test]
    fn max_code_sign_analysis() {
        let t = IntervalRegion::parse("(0,1/4)").unwrap();
        let region = IntervalRegion::closed(int(-1), rat(1, 2)).difference(&t);
        assert_eq!(region.intervals().len(), 2);
        assert_eq!(
            sign_on_region(&max_code(), &region).unwrap(),
            SignReport::Nonpositive
        );
        assert!(max_code().eval(&rat(1, 8)) > int(0));
    }

    #[test]
    fn min_design_sign_analysis() {
        let t = IntervalRegion::parse("(-1/4,0) U (1/4,1/2)").unwrap();
        let region = IntervalRegion::closed(int(-1), int(1)).difference(&t);
        assert_eq!(
            sign_on_region(&min_design(), &region).unwrap(),
            SignReport::Nonnegative
        );
    }

    #[test]
    fn mixed_sign_carries_witnesses() {
        let region = IntervalRegion::closed(int(-1), int(1));
        match sign_on_region(&max_code(), &region).unwrap() {
            SignReport::Mixed {
                positive_at,
                negative_at,
            } => {
                assert!(positive_at.contains(&rat(1, 8)));
                for t in &positive_at {
                    assert!(max_code().eval(t) > int(0));
                }
                for t in &negative_at {
                    assert!(max_code().eval(t) < int(0));
                }
            }
            other => panic!("expected mixed, got {other:?}"),
        }
    }

    #[test]
    fn empty_region_is_an_error() {
        assert_eq!(
            sign_on_region(&max_code(), &IntervalRegion::empty()),
            Err(ExactError::EmptyRegion)
        );
        let everything = IntervalRegion::closed(int(-1), int(1));
        assert!(everything.difference(&everything).is_empty());
    }

    #[test]
    fn region_algebra() {
        let r = IntervalRegion::closed(int(-1), int(1))
            .difference(&IntervalRegion::parse("(-1/2,-1/4)∪(1/4,1/2)").unwrap());
        assert_eq!(r.to_string(), "[-1,-1/2] U [-1/4,1/4] U [1/2,1]");
        assert!(r.contains(&rat(-1, 4)));
        assert!(!r.contains(&rat(3, 8)));
        let half_open = IntervalRegion::parse("[0,1)").unwrap();
        let point = IntervalRegion::closed(int(1), int(1));
        assert_eq!(
            half_open.union(&point),
            IntervalRegion::closed(int(0), int(1))
        );
        assert!(IntervalRegion::parse("(1,0)").is_err());
        assert!(IntervalRegion::parse("(0,1").is_err());
        assert!(IntervalRegion::parse("empty").unwrap().is_empty());
    }

    #[test]
    fn polynomial_documents() {
        let doc =
            serde_json::json!({"factored": {"leading": "2", "factors": [["-1/2", "2"], ["1", 1]]}});
        let form = PolynomialForm::from_json(&doc).unwrap();
        let expected = FactoredPolynomial::new(int(2), vec![(rat(-1, 2), 2), (int(1), 1)]).unwrap();
        assert_eq!(form, PolynomialForm::Factored(expected));
        assert_eq!(PolynomialForm::from_json(&form.to_json()).unwrap(), form);

        let dense = serde_json::json!({"dense": ["1", "0", "-3/2"]});
        let form = PolynomialForm::from_json(&dense).unwrap();
        assert_eq!(
            form.expand(),
            Polynomial::new(vec![int(1), int(0), rat(-3, 2)])
        );
        assert!(PolynomialForm::from_json(&serde_json::json!({"sparse": []})).is_err());
    }

    #[test]
    fn linear_solve() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve_linear_system(a, vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve_linear_system(singular, vec![int(1), int(1)]).is_none());
    }

    #[test]
    fn display_forms() {
        let p = Polynomial::new(vec![int(-1), int(0), rat(32, 31)]);
        assert_eq!(p.to_string(), "(32/31)t^2 - 1");
        assert_eq!(
            min_design().to_string(),
            "t(t + 1)(t + 1/2)^2(t + 1/4)(t - 1/4)(t - 1/2)"
        );
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    fn factored_strategy() -> impl Strategy<Value = FactoredPolynomial> {
        (
            small_rational().prop_filter("nonzero", |r| !r.is_zero()),
            proptest::collection::btree_map((-8i64..=8, 1i64..=4), 1u32..=3, 0..5),
        )
            .prop_map(|(lead, roots)| {
                let mut factors: Vec<(Rational, u32)> = Vec::new();
                for ((n, d), m) in roots {
                    let r = rat(n, d);
                    if !factors.iter().any(|(x, _)| *x == r) {
                        factors.push((r, m));
                    }
                }
                FactoredPolynomial::new(lead, factors).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn expansion_agrees_with_factorwise_evaluation(
            fp in factored_strategy(),
            points in proptest::collection::vec(small_rational(), 100),
        ) {
            let dense = fp.expand();
            for t in &points {
                prop_assert_eq!(dense.eval(t), fp.eval(t));
            }
        }

        #[test]
        fn sign_verdict_survives_refinement(
            fp in factored_strategy(),
            cuts in proptest::collection::btree_set((-7i64..=7).prop_map(|k| rat(k, 8)), 0..5),
        ) {
            let whole = IntervalRegion::closed(int(-1), int(1));
            let mut pieces = Vec::new();
            let mut lo = int(-1);
            for c in &cuts {
                pieces.push(Interval::closed(lo.clone(), c.clone()));
                lo = c.clone();
            }
            pieces.push(Interval::closed(lo, int(1)));
            let verdict_of = |r: &IntervalRegion| {
                let rep = sign_on_region(&fp, r).unwrap();
                (rep.is_nonnegative(), rep.is_nonpositive())
            };
            let refined: Vec<(bool, bool)> = pieces
                .into_iter()
                .map(|p| verdict_of(&IntervalRegion::from_interval(p).unwrap()))
                .collect();
            let combined = (
                refined.iter().all(|v| v.0),
                refined.iter().all(|v| v.1),
            );
            prop_assert_eq!(verdict_of(&whole), combined);
        }
    }
}
