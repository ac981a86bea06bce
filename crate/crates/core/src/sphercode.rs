//! Spherical-code analytics over integer point sets of common norm.
//!
//! A code is a list of integer vectors with one shared squared norm `ν`;
//! the unit inner product of two points is `(x·y)/ν`, always rational.
//! Every quantity here (histograms, distance distributions, Gegenbauer
//! moments) is derived from exact integer pair counts.
//!
//! The pair passes dominate the cost. When every point has a single
//! magnitude on its support (true of the norm-4 shells) the points are
//! packed into support/sign bitmasks and a dot product becomes two
//! popcounts; otherwise a dense `i8` kernel is used.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exactmath::{format_rational, int, ratstr, solve_linear_system, Polynomial, Rational};
use crate::gegenbauer::{basis, gegenbauer_expand, GegenbauerError};
use crate::lattice32::Shell;

/// Default size of the sampled invariance check.
pub const DEFAULT_SAMPLE: usize = 1000;
/// Default cap on the moment scan of [`design_strength`].
pub const DEFAULT_STRENGTH_CAP: usize = 12;

#[derive(Debug, Error)]
pub enum SpherError {
    #[error("empty code")]
    Empty,
    #[error("point {index} has squared norm {found}, expected {expected}")]
    UnequalNorms {
        index: usize,
        found: i64,
        expected: i64,
    },
    #[error("point {index} has {found} coordinates, expected {expected}")]
    WrongDimension {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("zero vector at index {0}")]
    ZeroPoint(usize),
    #[error("point is not in the code")]
    NotInCode,
    #[error("quadrature nodes are not distinct")]
    SingularSystem,
    #[error("distance distribution entry A({t}) = {value} is {problem}")]
    BadDistribution {
        t: String,
        value: String,
        problem: &'static str,
    },
    #[error(transparent)]
    Gegenbauer(#[from] GegenbauerError),
}

/// Points with integer coordinates and a common squared norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerCode {
    dim: usize,
    norm: i64,
    coords: Vec<i8>,
}

impl IntegerCode {
    pub fn new(dim: usize, points: &[Vec<i8>]) -> Result<Self, SpherError> {
        let mut coords = Vec::with_capacity(dim * points.len());
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SpherError::WrongDimension {
                    index,
                    found: p.len(),
                    expected: dim,
                });
            }
            coords.extend_from_slice(p);
        }
        IntegerCode::from_flat(dim, coords)
    }

    fn from_flat(dim: usize, coords: Vec<i8>) -> Result<Self, SpherError> {
        if dim == 0 || coords.is_empty() {
            return Err(SpherError::Empty);
        }
        let norm_of = |p: &[i8]| p.iter().map(|c| i64::from(*c).pow(2)).sum::<i64>();
        let norm = norm_of(&coords[..dim]);
        for (index, p) in coords.chunks_exact(dim).enumerate() {
            let found = norm_of(p);
            if found == 0 {
                return Err(SpherError::ZeroPoint(index));
            }
            if found != norm {
                return Err(SpherError::UnequalNorms {
                    index,
                    found,
                    expected: norm,
                });
            }
        }
        Ok(IntegerCode { dim, norm, coords })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Common squared norm `ν`.
    pub fn norm(&self) -> i64 {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i8] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn position(&self, p: &[i8]) -> Option<usize> {
        self.coords.chunks_exact(self.dim).position(|q| q == p)
    }

    fn inner_product(&self, dot: i64) -> Rational {
        Rational::new(BigInt::from(dot), BigInt::from(self.norm))
    }
}

impl From<&Shell> for IntegerCode {
    fn from(shell: &Shell) -> Self {
        let coords = shell.vectors().iter().flat_map(|v| v.0).collect();
        IntegerCode::from_flat(crate::lattice32::DIM, coords).expect("shell vectors share norm 32")
    }
}

#[derive(Clone, Copy)]
struct Packed {
    support: u64,
    negative: u64,
    magnitude: i32,
}

enum Kernel<'a> {
    Packed(Vec<Packed>),
    Dense(&'a IntegerCode),
}

impl<'a> Kernel<'a> {
    fn for_code(code: &'a IntegerCode) -> Kernel<'a> {
        if code.dim > 64 {
            return Kernel::Dense(code);
        }
        let mut packed = Vec::with_capacity(code.len());
        for p in code.coords.chunks_exact(code.dim) {
            let mut support = 0u64;
            let mut negative = 0u64;
            let mut magnitude = 0i32;
            for (j, &c) in p.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let m = i32::from(c).abs();
                if magnitude != 0 && m != magnitude {
                    return Kernel::Dense(code);
                }
                magnitude = m;
                support |= 1 << j;
                if c < 0 {
                    negative |= 1 << j;
                }
            }
            packed.push(Packed {
                support,
                negative,
                magnitude,
            });
        }
        Kernel::Packed(packed)
    }

    fn len(&self) -> usize {
        match self {
            Kernel::Packed(p) => p.len(),
            Kernel::Dense(c) => c.len(),
        }
    }

    /// Adds the dot products of point `i` against points `range` into
    /// `counts[dot + offset]`.
    fn accumulate(&self, i: usize, range: std::ops::Range<usize>, offset: i64, counts: &mut [u64]) {
        match self {
            Kernel::Packed(p) => accumulate_packed(p, i, range, offset, counts),
            Kernel::Dense(code) => {
                let x = code.point(i);
                for j in range {
                    let y = code.point(j);
                    let dot: i64 = x
                        .iter()
                        .zip(y)
                        .map(|(a, b)| i64::from(*a) * i64::from(*b))
                        .sum();
                    counts[(dot + offset) as usize] += 1;
                }
            }
        }
    }
}

fn accumulate_packed(
    p: &[Packed],
    i: usize,
    range: std::ops::Range<usize>,
    offset: i64,
    counts: &mut [u64],
) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("popcnt") {
            // SAFETY: the CPU supports popcnt, checked just above.
            unsafe { accumulate_packed_popcnt(p, i, range, offset, counts) };
            return;
        }
    }
    accumulate_packed_generic(p, i, range, offset, counts);
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn accumulate_packed_popcnt(
    p: &[Packed],
    i: usize,
    range: std::ops::Range<usize>,
    offset: i64,
    counts: &mut [u64],
) {
    accumulate_packed_generic(p, i, range, offset, counts);
}

const SMALL_BINS: usize = 128;

#[inline(always)]
fn accumulate_packed_generic(
    p: &[Packed],
    i: usize,
    range: std::ops::Range<usize>,
    offset: i64,
    counts: &mut [u64],
) {
    let x = p[i];
    let offset = offset as i32;
    let ys = &p[range];
    let bin = |y: &Packed| {
        let s = x.support & y.support;
        let n = (x.negative ^ y.negative) & s;
        let raw = s.count_ones() as i32 - 2 * n.count_ones() as i32;
        (x.magnitude * y.magnitude * raw + offset) as usize
    };
    if counts.len() <= SMALL_BINS {
        // four interleaved sub-histograms break store-to-load chains on hot
        // bins; the power-of-two mask lets the indexing skip bounds checks
        let mut lanes = [[0u32; SMALL_BINS]; 4];
        let mut chunks = ys.chunks_exact(4);
        for c in &mut chunks {
            lanes[0][bin(&c[0]) & (SMALL_BINS - 1)] += 1;
            lanes[1][bin(&c[1]) & (SMALL_BINS - 1)] += 1;
            lanes[2][bin(&c[2]) & (SMALL_BINS - 1)] += 1;
            lanes[3][bin(&c[3]) & (SMALL_BINS - 1)] += 1;
        }
        for y in chunks.remainder() {
            lanes[0][bin(y) & (SMALL_BINS - 1)] += 1;
        }
        for (k, c) in counts.iter_mut().enumerate() {
            *c += lanes.iter().map(|l| u64::from(l[k])).sum::<u64>();
        }
    } else {
        for y in ys {
            counts[bin(y)] += 1;
        }
    }
}

/// Map from inner product to a count, serialized as a JSON object with
/// `"p/q"` keys in ascending order.
fn serialize_rational_map<S: Serializer>(
    m: &BTreeMap<Rational, u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&format_rational(k), v)?;
    }
    map.end()
}

fn deserialize_rational_map<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> Result<BTreeMap<Rational, u64>, D::Error> {
    let raw = BTreeMap::<String, u64>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            crate::exactmath::parse_rational(&k)
                .map(|r| (r, v))
                .map_err(serde::de::Error::custom)
        })
        .collect()
}

/// Ordered-pair counts `(x, y)`, `x ≠ y` (as list positions), by inner product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerProductHistogram {
    pub dimension: u32,
    pub points: u64,
    #[serde(
        serialize_with = "serialize_rational_map",
        deserialize_with = "deserialize_rational_map"
    )]
    pub counts: BTreeMap<Rational, u64>,
}

impl InnerProductHistogram {
    pub fn support(&self) -> Vec<Rational> {
        self.counts.keys().cloned().collect()
    }

    pub fn count(&self, t: &Rational) -> u64 {
        self.counts.get(t).copied().unwrap_or(0)
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ_{x≠y} p(x·y)`.
    pub fn pair_sum(&self, p: &Polynomial) -> Rational {
        self.counts
            .iter()
            .map(|(t, n)| p.eval(t) * int(*n as i64))
            .sum()
    }
}

/// `A_t` for one point (or a distance-invariant code), including `A_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistanceDistribution {
    #[serde(
        serialize_with = "serialize_rational_map",
        deserialize_with = "deserialize_rational_map"
    )]
    pub a: BTreeMap<Rational, u64>,
}

impl DistanceDistribution {
    pub fn get(&self, t: &Rational) -> u64 {
        self.a.get(t).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.a.values().sum()
    }

    /// Counts in ascending order of inner product.
    pub fn values(&self) -> Vec<u64> {
        self.a.values().copied().collect()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational, u64)>) -> Self {
        DistanceDistribution {
            a: pairs.into_iter().filter(|(_, n)| *n > 0).collect(),
        }
    }
}

fn counts_to_map(code: &IntegerCode, counts: &[u64]) -> BTreeMap<Rational, u64> {
    let offset = code.norm;
    counts
        .iter()
        .enumerate()
        .filter(|(_, n)| **n > 0)
        .map(|(k, n)| (code.inner_product(k as i64 - offset), *n))
        .collect()
}

fn bins(code: &IntegerCode) -> usize {
    (2 * code.norm + 1) as usize
}

fn dim_u32(code: &IntegerCode) -> u32 {
    u32::try_from(code.dim).expect("dimension fits in u32")
}

/// Full histogram from the `i < j` half of the pair matrix, doubled.
pub fn histogram(code: &IntegerCode) -> InnerProductHistogram {
    let kernel = Kernel::for_code(code);
    let n = kernel.len();
    let width = bins(code);
    let counts = (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; width],
            |mut acc, i| {
                kernel.accumulate(i, i + 1..n, code.norm, &mut acc);
                acc
            },
        )
        .reduce(|| vec![0u64; width], add_counts);
    let doubled: Vec<u64> = counts.iter().map(|c| 2 * c).collect();
    InnerProductHistogram {
        dimension: dim_u32(code),
        points: n as u64,
        counts: counts_to_map(code, &doubled),
    }
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

fn row_distribution(code: &IntegerCode, kernel: &Kernel<'_>, i: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins(code)];
    kernel.accumulate(i, 0..kernel.len(), code.norm, &mut counts);
    counts
}

/// Distance distribution with respect to the given point.
pub fn distance_distribution_at(
    code: &IntegerCode,
    point: &[i8],
) -> Result<DistanceDistribution, SpherError> {
    let i = code.position(point).ok_or(SpherError::NotInCode)?;
    Ok(distance_distribution_of(code, i))
}

pub fn distance_distribution_of(code: &IntegerCode, index: usize) -> DistanceDistribution {
    let kernel = Kernel::for_code(code);
    DistanceDistribution {
        a: counts_to_map(code, &row_distribution(code, &kernel, index)),
    }
}

/// Which points the invariance check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceScope {
    All,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub checked: usize,
    /// Distribution of the first checked point.
    pub distribution: DistanceDistribution,
    /// A point index whose distribution differs from the first checked one.
    pub counterexample: Option<(usize, usize)>,
    /// Present when every point was visited: the full histogram, as a
    /// by-product of the row sums.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<InnerProductHistogram>,
}

/// Compares per-point distance distributions over the chosen scope.
///
/// `progress`, if given, receives the number of rows finished so far
/// (called roughly every 1% of the work).
pub fn check_distance_invariance(
    code: &IntegerCode,
    scope: InvarianceScope,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> InvarianceReport {
    let kernel = Kernel::for_code(code);
    let n = kernel.len();
    let indices: Vec<usize> = match scope {
        InvarianceScope::All => (0..n).collect(),
        InvarianceScope::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = rand::seq::index::sample(&mut rng, n, count.min(n)).into_vec();
            picked.sort_unstable();
            picked
        }
    };
    let reference_index = indices[0];
    let reference = row_distribution(code, &kernel, reference_index);
    let total = indices.len();
    let done = AtomicUsize::new(0);
    let tick = (total / 100).max(1);

    let (sum, mismatch) = indices
        .par_iter()
        .fold(
            || (vec![0u64; reference.len()], None::<usize>),
            |(mut sum, mut mismatch), &i| {
                let row = row_distribution(code, &kernel, i);
                if row != reference {
                    mismatch = Some(mismatch.map_or(i, |m: usize| m.min(i)));
                }
                sum.iter_mut().zip(&row).for_each(|(s, r)| *s += r);
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(report) = progress {
                    if finished.is_multiple_of(tick) || finished == total {
                        report(finished, total);
                    }
                }
                (sum, mismatch)
            },
        )
        .reduce(
            || (vec![0u64; reference.len()], None),
            |(a, ma), (b, mb)| {
                let m = match (ma, mb) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (add_counts(a, b), m)
            },
        );

    let histogram = matches!(scope, InvarianceScope::All).then(|| {
        // row sums include each point against itself
        let mut off_diagonal = sum.clone();
        off_diagonal[(2 * code.norm) as usize] -= n as u64;
        InnerProductHistogram {
            dimension: dim_u32(code),
            points: n as u64,
            counts: counts_to_map(code, &off_diagonal),
        }
    });
    InvarianceReport {
        invariant: mismatch.is_none(),
        checked: total,
        distribution: DistanceDistribution {
            a: counts_to_map(code, &reference),
        },
        counterexample: mismatch.map(|m| (reference_index, m)),
        histogram,
    }
}

/// `M_1 .. M_k` of a code, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentVector {
    pub dimension: u32,
    #[serde(with = "ratstr::vec")]
    pub values: Vec<Rational>,
}

impl MomentVector {
    /// `M_i` for `i ≥ 1`.
    pub fn get(&self, i: usize) -> Option<&Rational> {
        i.checked_sub(1).and_then(|k| self.values.get(k))
    }
}

/// `M_i = N·P_i(1) + Σ_t counts[t]·P_i(t)` for `i = 1..=upto`.
pub fn moments(hist: &InnerProductHistogram, upto: usize) -> Result<MomentVector, SpherError> {
    let b = basis(hist.dimension)?;
    let diagonal = int(hist.points as i64);
    let values = (1..=upto)
        .map(|i| Ok(&diagonal + hist.pair_sum(b.poly(i)?)))
        .collect::<Result<Vec<_>, SpherError>>()?;
    Ok(MomentVector {
        dimension: hist.dimension,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignStrength {
    pub tau: usize,
    /// Indices above `tau + 1` with vanishing moment, up to the scan cap.
    pub extra_vanishing: Vec<usize>,
}

pub fn design_strength_from_moments(m: &MomentVector) -> DesignStrength {
    let tau = m.values.iter().take_while(|v| v.is_zero()).count();
    let extra_vanishing = (tau + 2..=m.values.len())
        .filter(|i| m.values[i - 1].is_zero())
        .collect();
    DesignStrength {
        tau,
        extra_vanishing,
    }
}

/// Strength from moments up to `cap`.
pub fn design_strength(
    hist: &InnerProductHistogram,
    cap: usize,
) -> Result<DesignStrength, SpherError> {
    Ok(design_strength_from_moments(&moments(hist, cap)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureVerdict {
    pub holds: bool,
    /// Whether the design strength covers the degree; when false the
    /// identity is merely tested, not implied.
    pub guaranteed: bool,
    #[serde(with = "ratstr")]
    pub lhs: Rational,
    #[serde(with = "ratstr")]
    pub rhs: Rational,
}

/// Checks `N·f_0 = Σ_t A_t p(t)` for a code of `points` points in
/// dimension `n` with the given distribution and design strength.
pub fn quadrature_check(
    dist: &DistanceDistribution,
    p: &Polynomial,
    n: u32,
    points: u64,
    strength: usize,
) -> Result<QuadratureVerdict, SpherError> {
    let f0 = gegenbauer_expand(n, p)?.constant_term();
    let lhs = int(points as i64) * f0;
    let rhs: Rational = dist.a.iter().map(|(t, a)| p.eval(t) * int(*a as i64)).sum();
    Ok(QuadratureVerdict {
        holds: lhs == rhs,
        guaranteed: p.degree().unwrap_or(0) <= strength,
        lhs,
        rhs,
    })
}

/// Recovers `A_t` on `inner ∪ {1}` from the quadrature equations for
/// `f = 1, t, …, t^d`, `d = |inner|`.
///
/// Requires `d ≤ tau` so that every equation is implied by the design
/// property. Negative or non-integral entries are rejected, as is a
/// solution with `A_1 ≠ 1`.
pub fn distribution_from_design(
    inner: &[Rational],
    points: u64,
    n: u32,
    tau: usize,
) -> Result<DistanceDistribution, SpherError> {
    let mut nodes: Vec<Rational> = inner.to_vec();
    nodes.push(Rational::one());
    let d = inner.len();
    if d > tau {
        return Err(SpherError::BadDistribution {
            t: "-".into(),
            value: format!("{d} nodes"),
            problem: "more than the design strength supports",
        });
    }
    let mut sorted = nodes.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != nodes.len() {
        return Err(SpherError::SingularSystem);
    }
    let b = basis(n)?;
    let mut matrix = Vec::with_capacity(d + 1);
    let mut rhs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let monomial = Polynomial::monomial(k);
        matrix.push(nodes.iter().map(|t| monomial.eval(t)).collect());
        rhs.push(int(points as i64) * b.expand(&monomial)?.constant_term());
    }
    let solution = solve_linear_system(matrix, rhs).ok_or(SpherError::SingularSystem)?;
    let mut a = BTreeMap::new();
    for (t, v) in nodes.into_iter().zip(solution) {
        let bad = |problem| SpherError::BadDistribution {
            t: format_rational(&t),
            value: format_rational(&v),
            problem,
        };
        if v.is_negative() {
            return Err(bad("negative"));
        }
        if !v.is_integer() {
            return Err(bad("not an integer"));
        }
        if t.is_one() && !v.is_one() {
            return Err(bad("inconsistent with a single point at t = 1"));
        }
        let count = u64::try_from(v.to_integer()).map_err(|_| bad("too large"))?;
        a.insert(t, count);
    }
    Ok(DistanceDistribution { a })
}

/// Everything `verify` reports about a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub count: u64,
    #[serde(with = "ratstr::vec")]
    pub inner_products: Vec<Rational>,
    pub distance_distribution: DistanceDistribution,
    pub invariant: bool,
    pub invariance_checked: usize,
    /// First pair of point indices with differing distributions.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<(usize, usize)>,
    pub moments: MomentVector,
    pub design_strength: DesignStrength,
}

/// Histogram, invariance (sampled or full), moments up to `cap`, strength.
pub fn verify_code(
    code: &IntegerCode,
    scope: InvarianceScope,
    cap: usize,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<(VerificationReport, InnerProductHistogram), SpherError> {
    let invariance = check_distance_invariance(code, scope, progress);
    let hist = match invariance.histogram.clone() {
        Some(h) => h,
        None => histogram(code),
    };
    let m = moments(&hist, cap)?;
    let report = VerificationReport {
        count: hist.points,
        inner_products: hist.support(),
        distance_distribution: invariance.distribution,
        invariant: invariance.invariant,
        invariance_checked: invariance.checked,
        counterexample: invariance.counterexample,
        design_strength: design_strength_from_moments(&m),
        moments: m,
    };
    Ok((report, hist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn unit(dim: usize, k: usize, sign: i8) -> Vec<i8> {
        let mut v = vec![0i8; dim];
        v[k] = sign;
        v
    }

    fn antipodal_pair(dim: usize) -> IntegerCode {
        IntegerCode::new(dim, &[unit(dim, 0, 1), unit(dim, 0, -1)]).unwrap()
    }

    /// Cross-polytope ±e_i in dimension `dim`: a tight spherical 3-design.
    fn cross_polytope(dim: usize) -> IntegerCode {
        let pts: Vec<Vec<i8>> = (0..dim)
            .flat_map(|k| [unit(dim, k, 1), unit(dim, k, -1)])
            .collect();
        IntegerCode::new(dim, &pts).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            IntegerCode::new(2, &[vec![1, 0], vec![1, 1]]),
            Err(SpherError::UnequalNorms { index: 1, .. })
        ));
        assert!(matches!(
            IntegerCode::new(2, &[vec![1, 0], vec![1]]),
            Err(SpherError::WrongDimension { index: 1, .. })
        ));
        assert!(matches!(IntegerCode::new(2, &[]), Err(SpherError::Empty)));
        assert!(matches!(
            IntegerCode::new(2, &[vec![0, 0]]),
            Err(SpherError::ZeroPoint(0))
        ));
    }

    #[test]
    fn antipodal_pair_histogram_and_strength() {
        for dim in [2usize, 5, 32] {
            let code = antipodal_pair(dim);
            let h = histogram(&code);
            assert_eq!(h.counts, BTreeMap::from([(int(-1), 2)]));
            let s = design_strength(&h, 6).unwrap();
            assert_eq!(s.tau, 1);
            let m = moments(&h, 2).unwrap();
            assert_eq!(m.get(2), Some(&int(4)));
        }
    }

    #[test]
    fn packed_and_dense_kernels_agree() {
        // mixed magnitudes force the dense kernel
        let mixed = IntegerCode::new(
            3,
            &[vec![2, 0, 0], vec![0, 2, 0], vec![1, 1, 1], vec![-2, 0, 0]],
        );
        assert!(mixed.is_err());
        let pts: Vec<Vec<i8>> = vec![
            vec![2, 0, 0, 0],
            vec![1, 1, 1, 1],
            vec![1, -1, 1, -1],
            vec![0, -2, 0, 0],
            vec![-1, -1, 1, 1],
        ];
        let code = IntegerCode::new(4, &pts).unwrap();
        let packed = histogram(&code);
        let dense = Kernel::Dense(&code);
        let mut counts = vec![0u64; bins(&code)];
        for i in 0..code.len() {
            for j in 0..code.len() {
                if i != j {
                    dense.accumulate(i, j..j + 1, code.norm, &mut counts);
                }
            }
        }
        assert!(matches!(Kernel::for_code(&code), Kernel::Packed(_)));
        assert_eq!(packed.counts, counts_to_map(&code, &counts));
        assert_eq!(packed.total_pairs(), 20);
    }

    #[test]
    fn dense_fallback_for_nonuniform_magnitudes() {
        let pts = vec![vec![2i8, 1, 0, 0], vec![1, -2, 0, 0], vec![0, 0, 2, 1]];
        let code = IntegerCode::new(4, &pts).unwrap();
        assert!(matches!(Kernel::for_code(&code), Kernel::Dense(_)));
        let h = histogram(&code);
        assert_eq!(h.count(&int(0)), 6);
    }

    #[test]
    fn invariance_on_small_codes() {
        let code = antipodal_pair(3);
        let rep = check_distance_invariance(&code, InvarianceScope::All, None);
        assert!(rep.invariant);
        assert_eq!(rep.histogram.unwrap(), histogram(&code));

        let skew = IntegerCode::new(3, &[unit(3, 0, 1), unit(3, 1, 1), unit(3, 0, -1)]).unwrap();
        let rep = check_distance_invariance(&skew, InvarianceScope::All, None);
        assert!(!rep.invariant);
        assert_eq!(rep.counterexample, Some((0, 1)));
        assert_eq!(rep.histogram.unwrap(), histogram(&skew));
    }

    #[test]
    fn distribution_at_a_point() {
        let code = cross_polytope(4);
        let d = distance_distribution_at(&code, &unit(4, 2, -1)).unwrap();
        assert_eq!(
            d.a,
            BTreeMap::from([(int(-1), 1), (int(0), 6), (int(1), 1)])
        );
        assert_eq!(d.total(), 8);
        assert!(matches!(
            distance_distribution_at(&code, &[1, 1, 0, 0]),
            Err(SpherError::NotInCode)
        ));
    }

    #[test]
    fn cross_polytope_is_a_three_design() {
        let h = histogram(&cross_polytope(6));
        let s = design_strength(&h, 8).unwrap();
        assert_eq!(s.tau, 3);
        assert_eq!(s.extra_vanishing, vec![5, 7]);
        let m = moments(&h, 8).unwrap();
        assert!(m.values.iter().all(|v| !v.is_negative()));
    }

    #[test]
    fn recovered_distribution_of_cross_polytope() {
        let d = distribution_from_design(&[int(-1), int(0)], 12, 6, 3).unwrap();
        assert_eq!(d.values(), vec![1, 10, 1]);
        let pair = distribution_from_design(&[int(-1)], 2, 7, 1).unwrap();
        assert_eq!(pair.get(&int(-1)), 1);
        assert!(matches!(
            distribution_from_design(&[int(0), int(0)], 12, 6, 3),
            Err(SpherError::SingularSystem)
        ));
        assert!(distribution_from_design(&[int(-1), int(0)], 13, 6, 3).is_err());
    }

    #[test]
    fn quadrature_reports_degree_guarantee() {
        let d = DistanceDistribution::from_pairs([(int(-1), 1), (int(0), 10), (int(1), 1)]);
        let t2 = Polynomial::monomial(2);
        let v = quadrature_check(&d, &t2, 6, 12, 3).unwrap();
        assert!(v.holds && v.guaranteed);
        assert_eq!(v.lhs, int(2));
        let t4 = Polynomial::monomial(4);
        let v = quadrature_check(&d, &t4, 6, 12, 3).unwrap();
        assert!(!v.guaranteed);
        assert!(!v.holds);
        assert_eq!(v.rhs, int(2));
        assert_eq!(v.lhs, rat(12 * 3, 6 * 8));
    }

    #[test]
    fn json_maps_use_rational_keys() {
        let d = DistanceDistribution::from_pairs([(rat(-1, 2), 3), (int(1), 1)]);
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"-1/2":3,"1":1}"#);
        let back: DistanceDistribution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }
}
