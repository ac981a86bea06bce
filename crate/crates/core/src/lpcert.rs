//! Linear-programming certificates for spherical codes and designs.
//!
//! Both bounds come from the double-counting identity
//! `f(1)·N + Σ_{x≠y} f(x·y) = f_0·N² + Σ_{i≥1} f_i·M_i`:
//!
//! - an upper bound `N ≤ f(1)/f_0` on T-avoiding `s`-codes, when `f ≤ 0` on
//!   `[-1, s] \ T` and `f_i ≥ 0` above the assumed design strength;
//! - a lower bound `N ≥ f(1)/f_0` on T-avoiding `τ`-designs, when
//!   `deg f ≤ τ` and `f ≥ 0` on `[-1, 1] \ T`.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactmath::{
    format_rational, int, rat, sign_on_region, ExactError, FactoredPolynomial, IntervalRegion,
    PolynomialForm, Rational, SignReport,
};
use crate::gegenbauer::{gegenbauer_expand, GegExpansion, GegenbauerError};

#[derive(Debug, Error)]
pub enum LpError {
    #[error("f_0 = {0} is not positive; no bound can be derived")]
    NonPositiveConstant(String),
    #[error(
        "degree {degree} exceeds the design strength {tau}; the design identity does not apply"
    )]
    DegreeAboveStrength { degree: usize, tau: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Gegenbauer(#[from] GegenbauerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    MaxCode,
    MinDesign,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::MaxCode => "max_code",
            BoundKind::MinDesign => "min_design",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    pub polynomial: FactoredPolynomial,
    pub dimension: u32,
    pub avoided: IntervalRegion,
    /// Largest admissible inner product (code bounds only).
    pub s_max: Option<Rational>,
    /// Assumed design strength (code bounds) or declared strength (design bounds).
    pub assumed_strength: usize,
    pub expansion: GegExpansion,
    /// Region on which the sign condition was tested.
    pub region: IntervalRegion,
    pub sign_report: SignReport,
    /// Coefficient indices above the assumed strength that are negative.
    pub negative_coefficients: Vec<usize>,
    pub f_at_one: Rational,
    pub bound: Rational,
    pub valid: bool,
}

impl BoundCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "polynomial": PolynomialForm::Factored(self.polynomial.clone()).to_json(),
            "dimension": self.dimension,
            "T": self.avoided.to_string(),
            "s": self.s_max.as_ref().map(format_rational),
            "assumed_strength": self.assumed_strength,
            "coefficients": self.expansion.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
            "sign_region": self.region.to_string(),
            "sign_report": serde_json::to_value(&self.sign_report).expect("sign report serializes"),
            "negative_coefficients": self.negative_coefficients,
            "f_at_one": format_rational(&self.f_at_one),
            "bound": format_rational(&self.bound),
            "valid": self.valid,
        })
    }
}

fn expansion_with_positive_constant(
    p: &FactoredPolynomial,
    n: u32,
) -> Result<GegExpansion, LpError> {
    let expansion = gegenbauer_expand(n, &p.expand())?;
    let f0 = expansion.constant_term();
    if !f0.is_positive() {
        return Err(LpError::NonPositiveConstant(format_rational(&f0)));
    }
    Ok(expansion)
}

/// Upper bound on the size of a T-avoiding `s`-code of the given strength.
pub fn certify_max_code(
    p: &FactoredPolynomial,
    n: u32,
    avoided: &IntervalRegion,
    s: &Rational,
    strength: usize,
) -> Result<BoundCertificate, LpError> {
    let expansion = expansion_with_positive_constant(p, n)?;
    let region = IntervalRegion::closed(-Rational::one(), s.clone()).difference(avoided);
    let sign_report = sign_on_region(p, &region)?;
    let negative_coefficients: Vec<usize> = expansion
        .negative_indices()
        .into_iter()
        .filter(|i| *i > strength)
        .collect();
    let f_at_one = p.eval(&Rational::one());
    let bound = &f_at_one / expansion.constant_term();
    Ok(BoundCertificate {
        kind: BoundKind::MaxCode,
        polynomial: p.clone(),
        dimension: n,
        avoided: avoided.clone(),
        s_max: Some(s.clone()),
        assumed_strength: strength,
        valid: sign_report.is_nonpositive() && negative_coefficients.is_empty(),
        expansion,
        region,
        sign_report,
        negative_coefficients,
        f_at_one,
        bound,
    })
}

/// Lower bound on the size of a T-avoiding spherical `tau`-design.
pub fn certify_min_design(
    p: &FactoredPolynomial,
    n: u32,
    avoided: &IntervalRegion,
    tau: usize,
) -> Result<BoundCertificate, LpError> {
    if p.degree() > tau {
        return Err(LpError::DegreeAboveStrength {
            degree: p.degree(),
            tau,
        });
    }
    let expansion = expansion_with_positive_constant(p, n)?;
    let region = IntervalRegion::closed(-Rational::one(), Rational::one()).difference(avoided);
    let sign_report = sign_on_region(p, &region)?;
    let f_at_one = p.eval(&Rational::one());
    let bound = &f_at_one / expansion.constant_term();
    Ok(BoundCertificate {
        kind: BoundKind::MinDesign,
        polynomial: p.clone(),
        dimension: n,
        avoided: avoided.clone(),
        s_max: None,
        assumed_strength: tau,
        valid: sign_report.is_nonnegative(),
        expansion,
        region,
        sign_report,
        negative_coefficients: Vec::new(),
        f_at_one,
        bound,
    })
}

/// A bound polynomial shipped with its known dimension-32 expansion.
#[derive(Debug, Clone)]
pub struct BuiltinPolynomial {
    pub name: &'static str,
    /// Alternative lookup names accepted by [`builtin`].
    pub aliases: &'static [&'static str],
    pub polynomial: FactoredPolynomial,
    pub expected: GegExpansion,
}

fn factored(roots: &[(Rational, u32)]) -> FactoredPolynomial {
    FactoredPolynomial::new(int(1), roots.to_vec()).expect("distinct roots")
}

fn expansion32(coeffs: Vec<Rational>) -> GegExpansion {
    GegExpansion {
        dimension: 32,
        coeffs,
    }
}

/// Degree-10 polynomial bounding `(0,1/4)`-avoiding `1/2`-codes that are
/// 3-designs: `(t+1)(t+1/2)²(t+1/4)²t(t-1/4)(t-1/2)³`.
pub fn max_code_polynomial() -> FactoredPolynomial {
    factored(&[
        (int(-1), 1),
        (rat(-1, 2), 2),
        (rat(-1, 4), 2),
        (int(0), 1),
        (rat(1, 4), 1),
        (rat(1, 2), 3),
    ])
}

/// Degree-7 polynomial bounding `(-1/4,0)∪(1/4,1/2)`-avoiding 7-designs:
/// `t(t+1)(t+1/2)²(t+1/4)(t-1/4)(t-1/2)`.
pub fn min_design_polynomial() -> FactoredPolynomial {
    factored(&[
        (int(0), 1),
        (int(-1), 1),
        (rat(-1, 2), 2),
        (rat(-1, 4), 1),
        (rat(1, 4), 1),
        (rat(1, 2), 1),
    ])
}

/// Last partial product of the energy node multiset:
/// `(t+1)²(t+1/2)(t+1/4)t²(t-1/4)`.
pub fn energy_partial_product() -> FactoredPolynomial {
    factored(&[
        (int(-1), 2),
        (rat(-1, 2), 1),
        (rat(-1, 4), 1),
        (int(0), 2),
        (rat(1, 4), 1),
    ])
}

pub fn max_code_avoided() -> IntervalRegion {
    IntervalRegion::parse("(0,1/4)").expect("literal region")
}

pub fn min_design_avoided() -> IntervalRegion {
    IntervalRegion::parse("(-1/4,0) U (1/4,1/2)").expect("literal region")
}

pub fn builtin_polynomials() -> Vec<BuiltinPolynomial> {
    vec![
        BuiltinPolynomial {
            name: "max-code-32",
            aliases: &[],
            polynomial: max_code_polynomial(),
            expected: expansion32(vec![
                rat(5, 1114112),
                rat(65, 992256),
                rat(-31, 196608),
                rat(-93, 165376),
                rat(217, 417792),
                rat(899, 58368),
                rat(2387, 188416),
                rat(20119, 894976),
                Rational::zero(),
                rat(3441, 11776),
                rat(14911, 47104),
            ]),
        },
        BuiltinPolynomial {
            name: "min-design-32",
            aliases: &[],
            polynomial: min_design_polynomial(),
            // only f_0 is tabulated; the rest is filled by expansion
            expected: expansion32(vec![rat(1, 69632)]),
        },
        BuiltinPolynomial {
            name: "energy-p7",
            aliases: &["p7"],
            polynomial: energy_partial_product(),
            expected: expansion32(vec![
                rat(97, 104448),
                rat(619, 41344),
                rat(12245, 116736),
                rat(2139, 5168),
                rat(13981, 13056),
                rat(4433, 2432),
                rat(11935, 7296),
                rat(341, 608),
            ]),
        },
    ]
}

/// Looks up a built-in by name or alias.
pub fn builtin(name: &str) -> Option<BuiltinPolynomial> {
    builtin_polynomials()
        .into_iter()
        .find(|b| b.name == name || b.aliases.contains(&name))
}
