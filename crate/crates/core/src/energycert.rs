//! Energy lower bounds via Hermite interpolation at a node multiset.
//!
//! For a potential `h` with nonnegative divided differences on the nodes
//! `t_1..t_8`, the Newton-form interpolant `H(t) = Σ h[t_1..t_{i+1}] P_i(t)`
//! is positive definite once every partial product `P_i` is, and
//! `h - H ≥ 0` off `T` by the Hermite error formula. Any T-avoiding code of
//! size `N` then has `E_h ≥ N²·H_0 − N·H(1)`, which equals the quadrature
//! form `N·Σ_t A_t h(t)` over the design's inner products.
//!
//! Transcendental potentials are evaluated as rational approximations with
//! a configurable number of decimal digits; everything downstream is exact.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Roots;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactmath::{
    format_rational, int, parse_rational, rat, sign_on_region, ExactError, FactoredPolynomial,
    IntervalRegion, Polynomial, Rational, SignReport,
};
use crate::gegenbauer::{
    gegenbauer_expand, is_positive_definite, Definiteness, GegExpansion, GegenbauerError,
};
use crate::sphercode::{DistanceDistribution, InnerProductHistogram};

pub const DEFAULT_PRECISION: u32 = 60;
/// Relative tolerance exponent for inexact comparisons: `10^-20`.
pub const DEFAULT_TOLERANCE_DIGITS: u32 = 20;
const GUARD_DIGITS: u32 = 20;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error("node {node} has multiplicity {count}; at most 2 is supported")]
    MultiplicityTooHigh { node: String, count: usize },
    #[error("repeated node {0} must occupy adjacent positions")]
    NonAdjacentRepeat(String),
    #[error("node multiset is empty")]
    NoNodes,
    #[error("potential {potential} is singular at t = {t}")]
    Singular { potential: String, t: String },
    #[error(
        "unknown potential {0:?}; expected invlin, riesz(s), expt, gauss(a) or poly(c0,c1,...)"
    )]
    UnknownPotential(String),
    #[error("bad potential parameter in {0:?}")]
    BadParameter(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Gegenbauer(#[from] GegenbauerError),
}

/// A pair potential `h(t)` of the inner product `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Potential {
    /// `1/(2-2t)`, the Newtonian potential in squared distance.
    InvLin,
    /// `(2-2t)^{-s/2}`.
    Riesz(u32),
    /// `e^t`.
    Exp,
    /// `e^{-a(2-2t)}`.
    Gauss(Rational),
    Polynomial(Polynomial),
}

impl Potential {
    pub fn name(&self) -> String {
        match self {
            Potential::InvLin => "invlin".into(),
            Potential::Riesz(s) => format!("riesz({s})"),
            Potential::Exp => "expt".into(),
            Potential::Gauss(a) => format!("gauss({})", format_rational(a)),
            Potential::Polynomial(p) => {
                let cs: Vec<String> = p.coeffs().iter().map(format_rational).collect();
                format!("poly({})", cs.join(","))
            }
        }
    }

    /// Accepts `invlin`, `riesz(s)`, `expt`, `gauss(a)` and `poly(c0,c1,...)`;
    /// `name:arg` is accepted in place of `name(arg)`.
    pub fn parse(spec: &str) -> Result<Self, EnergyError> {
        let spec = spec.trim();
        let (name, arg) = match spec.find(['(', ':']) {
            Some(i) => {
                let rest = &spec[i + 1..];
                let rest = if spec.as_bytes()[i] == b'(' {
                    rest.strip_suffix(')')
                        .ok_or_else(|| EnergyError::BadParameter(spec.into()))?
                } else {
                    rest
                };
                (spec[..i].trim(), Some(rest.trim()))
            }
            None => (spec, None),
        };
        let bad = || EnergyError::BadParameter(spec.to_string());
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("invlin", None) => Ok(Potential::InvLin),
            ("expt" | "exp", None) => Ok(Potential::Exp),
            ("riesz", Some(a)) => a.parse().map(Potential::Riesz).map_err(|_| bad()),
            ("gauss", Some(a)) => {
                let alpha = parse_rational(a).map_err(|_| bad())?;
                if alpha.is_negative() {
                    return Err(bad());
                }
                Ok(Potential::Gauss(alpha))
            }
            ("poly", Some(a)) => {
                let coeffs = a
                    .split(',')
                    .map(|c| parse_rational(c.trim()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                Ok(Potential::Polynomial(Polynomial::new(coeffs)))
            }
            _ => Err(EnergyError::UnknownPotential(spec.to_string())),
        }
    }

    /// Whether `value` and `derivative` are exact for rational input.
    pub fn exact_on_rationals(&self) -> bool {
        match self {
            Potential::InvLin | Potential::Polynomial(_) => true,
            Potential::Riesz(s) => s % 2 == 0,
            Potential::Exp => false,
            Potential::Gauss(a) => a.is_zero(),
        }
    }

    /// Input assertion recorded on certificates; not verified.
    pub fn claimed_absolutely_monotone(&self) -> bool {
        match self {
            Potential::InvLin | Potential::Riesz(_) | Potential::Exp | Potential::Gauss(_) => true,
            Potential::Polynomial(p) => p.coeffs().iter().all(|c| !c.is_negative()),
        }
    }

    fn singular(&self, t: &Rational) -> EnergyError {
        EnergyError::Singular {
            potential: self.name(),
            t: format_rational(t),
        }
    }

    /// `2 - 2t`, which must be positive for the distance-based potentials.
    fn gap(&self, t: &Rational) -> Result<Rational, EnergyError> {
        let g = int(2) - int(2) * t;
        if g.is_positive() {
            Ok(g)
        } else {
            Err(self.singular(t))
        }
    }

    /// `h(t)`, within `10^-digits` relative error when inexact.
    pub fn value(&self, t: &Rational, digits: u32) -> Result<Rational, EnergyError> {
        match self {
            Potential::InvLin => Ok(self.gap(t)?.recip()),
            Potential::Riesz(s) => Ok(riesz(&self.gap(t)?, *s, digits)),
            Potential::Exp => Ok(exp(t, digits)),
            Potential::Gauss(a) => Ok(exp(&-(a * (int(2) - int(2) * t)), digits)),
            Potential::Polynomial(p) => Ok(p.eval(t)),
        }
    }

    /// `h'(t)`, within `10^-digits` relative error when inexact.
    pub fn derivative(&self, t: &Rational, digits: u32) -> Result<Rational, EnergyError> {
        match self {
            Potential::InvLin => {
                let g = self.gap(t)?;
                Ok(int(2) / (&g * &g))
            }
            Potential::Riesz(s) => {
                let g = self.gap(t)?;
                Ok(int(*s as i64) * riesz(&g, *s, digits) / g)
            }
            Potential::Exp => Ok(exp(t, digits)),
            Potential::Gauss(a) => Ok(int(2) * a * self.value(t, digits)?),
            Potential::Polynomial(p) => Ok(p.derivative().eval(t)),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Nearest `m / scale`.
fn round_to_scale(x: &Rational, scale: &BigInt) -> BigInt {
    let scaled = x * Rational::from_integer(scale.clone());
    scaled.round().to_integer()
}

/// `e^x` in fixed point with `10^(digits + guard)` resolution.
pub fn exp(x: &Rational, digits: u32) -> Rational {
    if x.is_zero() {
        return Rational::one();
    }
    // halve until |y| ≤ 1/2, then square back
    let mut k = 0u32;
    let mut y = x.clone();
    let half = rat(1, 2);
    while y.abs() > half {
        y /= int(2);
        k += 1;
    }
    let work = digits + GUARD_DIGITS + k;
    let scale = pow10(work);
    let (p, q) = (y.numer().clone(), y.denom().clone());
    let mut term = scale.clone();
    let mut sum = scale.clone();
    let mut j = 1u32;
    loop {
        let num = &term * &p;
        let den = &q * BigInt::from(j);
        term = Rational::new(num, den).round().to_integer();
        if term.is_zero() {
            break;
        }
        sum += &term;
        j += 1;
    }
    for _ in 0..k {
        sum = Rational::new(&sum * &sum, scale.clone())
            .round()
            .to_integer();
    }
    Rational::new(sum, scale)
}

/// `sqrt(x)` for `x ≥ 0`, truncated to `10^-(digits + guard)`.
pub fn sqrt(x: &Rational, digits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative number");
    let scale = pow10(digits + GUARD_DIGITS);
    let radicand = round_to_scale(&(x * Rational::from_integer(scale.clone())), &scale);
    Rational::new(Roots::sqrt(&radicand), scale)
}

/// `g^{-s/2}` for `g > 0`.
fn riesz(g: &Rational, s: u32, digits: u32) -> Rational {
    let whole = g.pow(-((s / 2) as i32));
    if s.is_multiple_of(2) {
        whole
    } else {
        // keep relative precision even when g is tiny
        let root = sqrt(&g.recip(), digits + 10);
        whole * root
    }
}

/// `|a - b| ≤ 10^-tol_digits · max(|a|, |b|)`.
pub fn rel_close(a: &Rational, b: &Rational, tol_digits: u32) -> bool {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return true;
    }
    let size = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    diff * Rational::from_integer(pow10(tol_digits)) <= size
}

/// Decimal rendering with `digits` significant fractional digits.
pub fn format_decimal(x: &Rational, digits: u32) -> String {
    let scaled = round_to_scale(x, &pow10(digits));
    let negative = scaled.sign() == Sign::Minus;
    let s = scaled.abs().to_string();
    let width = digits as usize + 1;
    let s = format!("{s:0>width$}");
    let (ip, fp) = s.split_at(s.len() - digits as usize);
    let fp = fp.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if fp.is_empty() {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Interpolation nodes; repeated nodes carry a derivative condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMultiset {
    nodes: Vec<Rational>,
}

impl NodeMultiset {
    pub fn new(nodes: Vec<Rational>) -> Result<Self, EnergyError> {
        if nodes.is_empty() {
            return Err(EnergyError::NoNodes);
        }
        for (i, t) in nodes.iter().enumerate() {
            let count = nodes.iter().filter(|u| *u == t).count();
            if count > 2 {
                return Err(EnergyError::MultiplicityTooHigh {
                    node: format_rational(t),
                    count,
                });
            }
            let first = nodes.iter().position(|u| u == t).expect("present");
            if count == 2 && first == i && nodes.get(i + 1) != Some(t) {
                return Err(EnergyError::NonAdjacentRepeat(format_rational(t)));
            }
        }
        Ok(NodeMultiset { nodes })
    }

    /// `{-1,-1,-1/2,-1/4,0,0,1/4,1/2}`.
    pub fn extremal32() -> Self {
        NodeMultiset::new(vec![
            int(-1),
            int(-1),
            rat(-1, 2),
            rat(-1, 4),
            int(0),
            int(0),
            rat(1, 4),
            rat(1, 2),
        ])
        .expect("valid multiset")
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Π (t - t_i)` over all nodes.
    pub fn node_polynomial(&self) -> FactoredPolynomial {
        FactoredPolynomial::from_roots(&self.nodes)
    }

    /// `P_i = (t - t_1)…(t - t_i)` for `i = 0..len`.
    fn newton_basis(&self) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::constant(Rational::one())];
        for t in &self.nodes[..self.nodes.len() - 1] {
            let next = out.last().expect("nonempty") * &Polynomial::linear(t);
            out.push(next);
        }
        out
    }
}

impl Default for NodeMultiset {
    fn default() -> Self {
        NodeMultiset::extremal32()
    }
}

/// Top diagonal `h[t_1..t_{i+1}]`, `i = 0..len-1`, of the Hermite table.
pub fn divided_differences(
    h: &Potential,
    m: &NodeMultiset,
    digits: u32,
) -> Result<Vec<Rational>, EnergyError> {
    let z = m.nodes();
    let mut column: Vec<Rational> = z
        .iter()
        .map(|t| h.value(t, digits))
        .collect::<Result<_, _>>()?;
    let mut top = vec![column[0].clone()];
    for k in 1..z.len() {
        let mut next = Vec::with_capacity(column.len() - 1);
        for i in 0..column.len() - 1 {
            let span = &z[i + k] - &z[i];
            if span.is_zero() {
                // only reachable for k = 1 since repeats are adjacent pairs
                next.push(h.derivative(&z[i], digits)?);
            } else {
                next.push((&column[i + 1] - &column[i]) / span);
            }
        }
        top.push(next[0].clone());
        column = next;
    }
    Ok(top)
}

/// Newton-form Hermite interpolant of `h` at the nodes.
pub fn hermite_interpolant(
    h: &Potential,
    m: &NodeMultiset,
    digits: u32,
) -> Result<Polynomial, EnergyError> {
    let dd = divided_differences(h, m, digits)?;
    Ok(newton_sum(&dd, &m.newton_basis()))
}

fn newton_sum(dd: &[Rational], basis: &[Polynomial]) -> Polynomial {
    dd.iter()
        .zip(basis)
        .fold(Polynomial::zero(), |acc, (c, p)| &acc + &p.scale(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialProduct {
    pub index: usize,
    pub polynomial: Polynomial,
    pub expansion: GegExpansion,
    pub definiteness: Definiteness,
}

/// `P_1..P_{len-1}` with their expansions in dimension `n`.
pub fn partial_products(m: &NodeMultiset, n: u32) -> Result<Vec<PartialProduct>, EnergyError> {
    m.newton_basis()
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(index, polynomial)| {
            let expansion = gegenbauer_expand(n, &polynomial)?;
            let definiteness = is_positive_definite(&expansion);
            Ok(PartialProduct {
                index,
                polynomial,
                expansion,
                definiteness,
            })
        })
        .collect()
}

/// Sign of the node polynomial on `[-1, 1] \ T`; validity needs nonnegative.
pub fn error_sign_check(
    m: &NodeMultiset,
    avoided: &IntervalRegion,
) -> Result<SignReport, EnergyError> {
    let region = IntervalRegion::closed(-Rational::one(), Rational::one()).difference(avoided);
    Ok(sign_on_region(&m.node_polynomial(), &region)?)
}

/// The code class a bound is certified for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergySetup {
    pub dimension: u32,
    pub size: u64,
    /// Distance distribution of an attaining design, including `A_1 = 1`.
    pub distribution: DistanceDistribution,
    pub nodes: NodeMultiset,
    pub avoided: IntervalRegion,
}

impl EnergySetup {
    /// 146880-point codes in dimension 32 avoiding `(-1/2,-1/4) ∪ (1/4,1/2)`.
    pub fn extremal32() -> Self {
        EnergySetup {
            dimension: 32,
            size: 146880,
            distribution: DistanceDistribution::from_pairs([
                (int(-1), 1),
                (rat(-1, 2), 1240),
                (rat(-1, 4), 31744),
                (int(0), 80910),
                (rat(1, 4), 31744),
                (rat(1, 2), 1240),
                (int(1), 1),
            ]),
            nodes: NodeMultiset::extremal32(),
            avoided: IntervalRegion::parse("(-1/2,-1/4) U (1/4,1/2)").expect("literal region"),
        }
    }
}

impl Default for EnergySetup {
    fn default() -> Self {
        EnergySetup::extremal32()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyCertificate {
    pub potential: String,
    pub exact: bool,
    pub claimed_absolutely_monotone: bool,
    pub dimension: u32,
    pub size: u64,
    pub nodes: NodeMultiset,
    pub avoided: IntervalRegion,
    pub divided_differences: Vec<Rational>,
    /// Indices `i` with `h[t_1..t_{i+1}] < 0`.
    pub negative_differences: Vec<usize>,
    pub interpolant: Polynomial,
    pub interpolant_expansion: GegExpansion,
    pub partial_products: Vec<PartialProduct>,
    pub sign_report: SignReport,
    /// `N · Σ_{t≠1} A_t h(t)`.
    pub lower_bound: Rational,
    /// `N²·H_0 − N·H(1)`.
    pub dual_bound: Rational,
    pub forms_agree: bool,
    pub code_energy: Option<Rational>,
    pub gap: Option<Rational>,
    pub precision_digits: u32,
    pub valid: bool,
}

impl EnergyCertificate {
    /// Records a measured energy and the gap to the bound.
    pub fn with_code_energy(mut self, energy: Rational) -> Self {
        self.gap = Some(&energy - &self.lower_bound);
        self.code_energy = Some(energy);
        self
    }

    /// Whether the recorded energy meets the bound: exactly when the
    /// potential is exact, else within the default relative tolerance.
    pub fn attained(&self) -> Option<bool> {
        let e = self.code_energy.as_ref()?;
        Some(if self.exact {
            *e == self.lower_bound
        } else {
            rel_close(e, &self.lower_bound, DEFAULT_TOLERANCE_DIGITS)
        })
    }

    fn number(&self, x: &Rational) -> String {
        if self.exact {
            format_rational(x)
        } else {
            format_decimal(x, self.precision_digits)
        }
    }

    pub fn to_json(&self) -> Value {
        let partials: Vec<Value> = self
            .partial_products
            .iter()
            .map(|p| {
                json!({
                    "index": p.index,
                    "coefficients": p.expansion.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
                    "positive_definite": p.definiteness.holds(),
                })
            })
            .collect();
        json!({
            "kind": "energy",
            "potential": self.potential,
            "exact": self.exact,
            "claimed_absolutely_monotone": self.claimed_absolutely_monotone,
            "dimension": self.dimension,
            "N": self.size,
            "T": self.avoided.to_string(),
            "nodes": self.nodes.nodes().iter().map(format_rational).collect::<Vec<_>>(),
            "divided_differences": self.divided_differences.iter().map(|x| self.number(x)).collect::<Vec<_>>(),
            "negative_differences": self.negative_differences,
            "coefficients": self.interpolant_expansion.coeffs.iter().map(|x| self.number(x)).collect::<Vec<_>>(),
            "partial_products": partials,
            "sign_report": serde_json::to_value(&self.sign_report).expect("sign report serializes"),
            "lower_bound": self.number(&self.lower_bound),
            "dual_bound": self.number(&self.dual_bound),
            "forms_agree": self.forms_agree,
            "code_energy": self.code_energy.as_ref().map(|x| self.number(x)),
            "gap": self.gap.as_ref().map(|x| self.number(x)),
            "attained": self.attained(),
            "precision_digits": self.precision_digits,
            "valid": self.valid,
        })
    }
}

/// Certifies `E_h ≥ lower_bound` for every code in the setup's class.
pub fn energy_lower_bound(
    h: &Potential,
    setup: &EnergySetup,
    digits: u32,
) -> Result<EnergyCertificate, EnergyError> {
    let m = &setup.nodes;
    let dd = divided_differences(h, m, digits)?;
    let negative_differences: Vec<usize> = dd
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_negative())
        .map(|(i, _)| i)
        .collect();
    let interpolant = newton_sum(&dd, &m.newton_basis());
    let interpolant_expansion = gegenbauer_expand(setup.dimension, &interpolant)?;
    let partial_products = partial_products(m, setup.dimension)?;
    let sign_report = error_sign_check(m, &setup.avoided)?;

    let n = int(setup.size as i64);
    let mut quadrature = Rational::zero();
    for (t, a) in &setup.distribution.a {
        if !t.is_one() {
            quadrature += h.value(t, digits)? * int(*a as i64);
        }
    }
    let lower_bound = &n * quadrature;
    let dual_bound =
        &n * &n * interpolant_expansion.constant_term() - &n * interpolant.eval(&Rational::one());
    let exact = h.exact_on_rationals();
    let forms_agree = if exact {
        lower_bound == dual_bound
    } else {
        rel_close(&lower_bound, &dual_bound, DEFAULT_TOLERANCE_DIGITS)
    };
    let valid = negative_differences.is_empty()
        && partial_products.iter().all(|p| p.definiteness.holds())
        && sign_report.is_nonnegative()
        && forms_agree;
    Ok(EnergyCertificate {
        potential: h.name(),
        exact,
        claimed_absolutely_monotone: h.claimed_absolutely_monotone(),
        dimension: setup.dimension,
        size: setup.size,
        nodes: m.clone(),
        avoided: setup.avoided.clone(),
        divided_differences: dd,
        negative_differences,
        interpolant,
        interpolant_expansion,
        partial_products,
        sign_report,
        lower_bound,
        dual_bound,
        forms_agree,
        code_energy: None,
        gap: None,
        precision_digits: digits,
        valid,
    })
}

/// `E_h = Σ_{x≠y} h(x·y)` from a histogram of ordered pairs.
pub fn code_energy(
    hist: &InnerProductHistogram,
    h: &Potential,
    digits: u32,
) -> Result<Rational, EnergyError> {
    let mut total = Rational::zero();
    for (t, count) in &hist.counts {
        total += h.value(t, digits)? * int(*count as i64);
    }
    Ok(total)
}
