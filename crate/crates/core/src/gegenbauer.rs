//! Gegenbauer polynomials normalized to one at `t = 1`, and exact change of
//! basis between monomials and the Gegenbauer basis of a fixed dimension.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{int, ratstr, Polynomial, Rational};

pub const DEFAULT_MAX_DEGREE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GegenbauerError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(u32),
    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
}

/// `P_0 .. P_max` for one dimension.
#[derive(Debug, Clone)]
pub struct GegenbauerBasis {
    dimension: u32,
    polys: Vec<Polynomial>,
}

impl GegenbauerBasis {
    /// Runs the recurrence
    /// `(i+n-2) P_{i+1} = (2i+n-2) t P_i - i P_{i-1}`, `P_0 = 1`, `P_1 = t`.
    pub fn new(dimension: u32, max_degree: usize) -> Result<Self, GegenbauerError> {
        if dimension < 2 {
            return Err(GegenbauerError::InvalidDimension(dimension));
        }
        let n = i64::from(dimension);
        let t = Polynomial::monomial(1);
        let mut polys = vec![Polynomial::constant(int(1))];
        if max_degree >= 1 {
            polys.push(t.clone());
        }
        for i in 1..max_degree {
            let i64_ = i as i64;
            let next =
                &(&t * &polys[i]).scale(&int(2 * i64_ + n - 2)) - &polys[i - 1].scale(&int(i64_));
            polys.push(next.scale(&(int(1) / int(i64_ + n - 2))));
        }
        Ok(GegenbauerBasis { dimension, polys })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, i: usize) -> Result<&Polynomial, GegenbauerError> {
        self.polys.get(i).ok_or(GegenbauerError::DegreeTooLarge {
            degree: i,
            max: self.max_degree(),
        })
    }

    /// Triangular solve from the top degree down.
    pub fn expand(&self, p: &Polynomial) -> Result<GegExpansion, GegenbauerError> {
        let Some(deg) = p.degree() else {
            return Ok(GegExpansion {
                dimension: self.dimension,
                coeffs: Vec::new(),
            });
        };
        if deg > self.max_degree() {
            return Err(GegenbauerError::DegreeTooLarge {
                degree: deg,
                max: self.max_degree(),
            });
        }
        let mut rest = p.clone();
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for d in (0..=deg).rev() {
            let c = rest.coeff(d) / self.polys[d].leading();
            if !c.is_zero() {
                rest = &rest - &self.polys[d].scale(&c);
            }
            coeffs[d] = c;
        }
        debug_assert!(rest.is_zero());
        Ok(GegExpansion {
            dimension: self.dimension,
            coeffs,
        })
    }

    /// `Σ f_i P_i` back in the monomial basis.
    pub fn reconstruct(&self, e: &GegExpansion) -> Result<Polynomial, GegenbauerError> {
        let mut acc = Polynomial::zero();
        for (i, c) in e.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.poly(i)?.scale(c);
            }
        }
        Ok(acc)
    }
}

fn cache() -> &'static RwLock<HashMap<u32, Arc<GegenbauerBasis>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<GegenbauerBasis>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared basis of [`DEFAULT_MAX_DEGREE`] for `dimension`.
pub fn basis(dimension: u32) -> Result<Arc<GegenbauerBasis>, GegenbauerError> {
    if let Some(b) = cache()
        .read()
        .expect("basis cache poisoned")
        .get(&dimension)
    {
        return Ok(Arc::clone(b));
    }
    let built = Arc::new(GegenbauerBasis::new(dimension, DEFAULT_MAX_DEGREE)?);
    let mut guard = cache().write().expect("basis cache poisoned");
    Ok(Arc::clone(guard.entry(dimension).or_insert(built)))
}

pub fn gegenbauer_poly(n: u32, i: usize) -> Result<Polynomial, GegenbauerError> {
    basis(n)?.poly(i).cloned()
}

pub fn gegenbauer_expand(n: u32, p: &Polynomial) -> Result<GegExpansion, GegenbauerError> {
    basis(n)?.expand(p)
}

/// Coefficients `f_0 .. f_d` of a polynomial in the dimension-`n` basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GegExpansion {
    pub dimension: u32,
    #[serde(with = "ratstr::vec")]
    pub coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    NegativeAt { indices: Vec<usize> },
}

impl Definiteness {
    pub fn holds(&self) -> bool {
        matches!(self, Definiteness::PositiveDefinite)
    }
}

impl GegExpansion {
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `f_0`, the sphere average of the polynomial.
    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    /// Σ f_i, which equals the polynomial's value at 1.
    pub fn value_at_one(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    pub fn negative_indices(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_negative())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_polynomial(&self) -> Result<Polynomial, GegenbauerError> {
        basis(self.dimension)?.reconstruct(self)
    }
}

/// Nonnegativity of every Gegenbauer coefficient.
pub fn is_positive_definite(e: &GegExpansion) -> Definiteness {
    let indices = e.negative_indices();
    if indices.is_empty() {
        Definiteness::PositiveDefinite
    } else {
        Definiteness::NegativeAt { indices }
    }
}
