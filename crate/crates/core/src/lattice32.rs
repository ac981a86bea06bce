//! Construction B with doubling in dimension 32, and the norm-4 shell.
//!
//! For a binary code `C` of length 32 let `G(C)` be the integer vectors `x`
//! with `x mod 2 ∈ C` and coordinate sum divisible by 4. The lattice is
//! `L(C) = G(C)/√2 ∪ ((½,…,½) + G(C))/√2`. Vectors are stored in the
//! integer coordinates `s = 2√2·v`, so `v·w = (s_v·s_w)/8` and norm-4
//! vectors have `s·s = 32`. Integer-coset vectors have all coordinates of
//! `s` even, half-integer-coset vectors all odd.
//!
//! Given minimum distance 8 the norm-4 vectors come in exactly three shapes:
//! `(±4,±4,0,…)` on any coordinate pair, `±2` on the support of a weight-8
//! codeword with an even number of minus signs, and all-`±1` vectors whose
//! minus positions form a codeword.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{rat, Rational};
use crate::gf2codes::{code_report, BinaryCode, CodeError};

pub const DIM: usize = 32;
/// `s·s` of a norm-4 lattice vector.
pub const SHELL_NORM: i32 = 32;
/// `s_x·s_y` for lattice inner product 2.
const INNER_TWO: i32 = 16;
pub const EXPECTED_SHELL_SIZE: usize = 146_880;
const SHELL_HEADER_PREFIX: &str = "latcert-shell v1 n=32";

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("code does not meet the construction preconditions: {0}")]
    Precondition(String),
    #[error("vector is not in the shell: {0}")]
    NotInShell(ShellVector),
    #[error("not a Venkov pair: x·z = {0}, expected 0")]
    NotOrthogonal(Rational),
    #[error("no orthogonal partner found for shell index {0} within the sampling budget")]
    SamplingBudget(usize),
    #[error("shell file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A lattice vector `v` stored as `s = 2√2·v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShellVector(pub [i8; DIM]);

impl ShellVector {
    pub fn coords(&self) -> &[i8; DIM] {
        &self.0
    }

    pub fn dot(&self, other: &ShellVector) -> i32 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| i32::from(*a) * i32::from(*b))
            .sum()
    }

    pub fn norm(&self) -> i32 {
        self.dot(self)
    }

    /// Inner product of the underlying lattice vectors.
    pub fn lattice_inner(&self, other: &ShellVector) -> Rational {
        rat(i64::from(self.dot(other)), 8)
    }

    pub fn neg(&self) -> ShellVector {
        ShellVector(self.0.map(|c| -c))
    }

    pub fn is_integer_coset(&self) -> bool {
        self.0.iter().all(|c| c % 2 == 0)
    }

    pub fn is_half_coset(&self) -> bool {
        self.0.iter().all(|c| c % 2 != 0)
    }

    pub fn from_slice(s: &[i8]) -> Option<ShellVector> {
        <[i8; DIM]>::try_from(s).ok().map(ShellVector)
    }
}

impl fmt::Debug for ShellVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShellVector({self})")
    }
}

impl fmt::Display for ShellVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Whether `s/(2√2)` lies in `L(C)`.
pub fn lattice_contains(code: &BinaryCode, s: &[i8; DIM]) -> bool {
    let x: Vec<i32> = if s.iter().all(|c| c % 2 == 0) {
        s.iter().map(|c| i32::from(*c) / 2).collect()
    } else if s.iter().all(|c| c % 2 != 0) {
        s.iter().map(|c| (i32::from(*c) - 1) / 2).collect()
    } else {
        return false;
    };
    let sum: i32 = x.iter().sum();
    let residue = x.iter().enumerate().fold(0u64, |acc, (j, v)| {
        acc | (u64::from(v.rem_euclid(2) as u8) << j)
    });
    sum.rem_euclid(4) == 0 && code.contains(residue)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCounts {
    /// `(±4, ±4)` on a coordinate pair.
    pub pairs: usize,
    /// `±2` on weight-8 codeword supports.
    pub octads: usize,
    /// All `±1`, the half-integer coset.
    pub half: usize,
}

impl FamilyCounts {
    pub fn total(&self) -> usize {
        self.pairs + self.octads + self.half
    }
}

/// The norm-4 layer, sorted lexicographically and free of duplicates.
#[derive(Debug, Clone)]
pub struct Shell {
    vectors: Vec<ShellVector>,
    source: Option<BinaryCode>,
}

impl Shell {
    /// Sorts and deduplicates.
    pub fn from_vectors(mut vectors: Vec<ShellVector>, source: Option<BinaryCode>) -> Shell {
        vectors.sort_unstable();
        vectors.dedup();
        Shell { vectors, source }
    }

    pub fn vectors(&self) -> &[ShellVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn source_code(&self) -> Option<&BinaryCode> {
        self.source.as_ref()
    }

    pub fn index_of(&self, v: &ShellVector) -> Option<usize> {
        self.vectors.binary_search(v).ok()
    }

    pub fn contains(&self, v: &ShellVector) -> bool {
        self.index_of(v).is_some()
    }

    pub fn is_antipodal(&self) -> bool {
        self.vectors.iter().all(|v| self.contains(&v.neg()))
    }

    pub fn family_counts(&self) -> FamilyCounts {
        let mut counts = FamilyCounts {
            pairs: 0,
            octads: 0,
            half: 0,
        };
        for v in &self.vectors {
            match v.0.iter().filter(|c| **c != 0).count() {
                2 => counts.pairs += 1,
                8 => counts.octads += 1,
                DIM => counts.half += 1,
                _ => {}
            }
        }
        counts
    }

    /// Writes the versioned text format.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SHELL_HEADER_PREFIX} count={} scale=2sqrt2", self.len())?;
        for v in &self.vectors {
            writeln!(w, "{v}")?;
        }
        w.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LatticeError> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))?;
        Ok(())
    }

    /// Reads the text format, checking the header count, every norm, and
    /// every coset parity pattern.
    pub fn read_from<R: BufRead>(r: R) -> Result<Shell, LatticeError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| LatticeError::Format("missing header".into()))??;
        let rest = header
            .strip_prefix(SHELL_HEADER_PREFIX)
            .ok_or_else(|| LatticeError::Format(format!("unrecognized header {header:?}")))?;
        let mut count = None;
        let mut scale_ok = false;
        for field in rest.split_whitespace() {
            if let Some(n) = field.strip_prefix("count=") {
                count = n.parse::<usize>().ok();
            } else if field == "scale=2sqrt2" {
                scale_ok = true;
            }
        }
        let count = count.ok_or_else(|| LatticeError::Format("header lacks count".into()))?;
        if !scale_ok {
            return Err(LatticeError::Format("header lacks scale=2sqrt2".into()));
        }
        let mut vectors = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let coords = line
                .split_whitespace()
                .map(|t| t.parse::<i8>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| LatticeError::Format(format!("line {}: {e}", i + 2)))?;
            let v = ShellVector::from_slice(&coords).ok_or_else(|| {
                LatticeError::Format(format!("line {}: expected {DIM} coordinates", i + 2))
            })?;
            if v.norm() != SHELL_NORM || !(v.is_integer_coset() || v.is_half_coset()) {
                return Err(LatticeError::Format(format!(
                    "line {}: not a norm-4 shell vector",
                    i + 2
                )));
            }
            vectors.push(v);
        }
        if vectors.len() != count {
            return Err(LatticeError::Format(format!(
                "header promises {count} vectors, found {}",
                vectors.len()
            )));
        }
        let shell = Shell::from_vectors(vectors, None);
        if shell.len() != count {
            return Err(LatticeError::Format("duplicate vectors".into()));
        }
        Ok(shell)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Shell, LatticeError> {
        let file = std::fs::File::open(path)?;
        Shell::read_from(std::io::BufReader::new(file))
    }
}

fn require_self_dual_doubly_even(
    c: &BinaryCode,
) -> Result<crate::gf2codes::CodeReport, LatticeError> {
    if c.length() != DIM {
        return Err(LatticeError::Precondition(format!(
            "length {} is not {DIM}",
            c.length()
        )));
    }
    let report = code_report(c)?;
    if !report.self_dual {
        return Err(LatticeError::Precondition("code is not self-dual".into()));
    }
    if !report.doubly_even {
        return Err(LatticeError::Precondition("code is not doubly-even".into()));
    }
    Ok(report)
}

/// Enumerates the norm-4 layer of `L(C)` from its three shape families.
pub fn build_shell(c: &BinaryCode) -> Result<Shell, LatticeError> {
    let report = require_self_dual_doubly_even(c)?;
    if report.min_distance != Some(8) {
        return Err(LatticeError::Precondition(format!(
            "minimum distance {:?} is not 8",
            report.min_distance
        )));
    }
    let words = c.codewords()?;

    let mut vectors = Vec::with_capacity(EXPECTED_SHELL_SIZE);
    for a in 0..DIM {
        for b in a + 1..DIM {
            for (sa, sb) in [(4, 4), (4, -4), (-4, 4), (-4, -4)] {
                let mut s = [0i8; DIM];
                s[a] = sa;
                s[b] = sb;
                vectors.push(ShellVector(s));
            }
        }
    }

    let octads: Vec<ShellVector> = words
        .par_iter()
        .filter(|w| w.count_ones() == 8)
        .flat_map_iter(|w| {
            let support: Vec<usize> = (0..DIM).filter(|j| w >> j & 1 == 1).collect();
            (0u32..256)
                .filter(|m| m.count_ones() % 2 == 0)
                .map(move |m| {
                    let mut s = [0i8; DIM];
                    for (bit, &j) in support.iter().enumerate() {
                        s[j] = if m >> bit & 1 == 1 { -2 } else { 2 };
                    }
                    ShellVector(s)
                })
        })
        .collect();
    vectors.extend(octads);

    vectors.extend(words.iter().map(|w| {
        let mut s = [1i8; DIM];
        for (j, c) in s.iter_mut().enumerate() {
            if w >> j & 1 == 1 {
                *c = -1;
            }
        }
        ShellVector(s)
    }));

    vectors.par_sort_unstable();
    vectors.dedup();
    Ok(Shell {
        vectors,
        source: Some(c.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalReport {
    /// Number of norm-2 lattice vectors.
    pub norm2_count: u64,
    pub extremal: bool,
}

/// Counts the norm-2 layer by testing every integer shape with `x·x = 4`
/// (one `±2`, or four `±1`) for membership; the half-integer coset has
/// norm at least 4 and contributes nothing.
pub fn check_extremal(c: &BinaryCode) -> Result<ExtremalReport, LatticeError> {
    require_self_dual_doubly_even(c)?;
    let mut count = 0u64;
    for j in 0..DIM {
        for sign in [4i8, -4] {
            let mut s = [0i8; DIM];
            s[j] = sign;
            count += u64::from(lattice_contains(c, &s));
        }
    }
    let words: HashSet<u64> = c
        .codewords()?
        .into_iter()
        .filter(|w| w.count_ones() == 4)
        .collect();
    for a in 0..DIM {
        for b in a + 1..DIM {
            for d in b + 1..DIM {
                for e in d + 1..DIM {
                    let support = [a, b, d, e];
                    let mask = support.iter().fold(0u64, |acc, j| acc | 1 << j);
                    if !words.contains(&mask) {
                        continue;
                    }
                    for signs in 0..16u32 {
                        let mut s = [0i8; DIM];
                        for (bit, &j) in support.iter().enumerate() {
                            s[j] = if signs >> bit & 1 == 1 { -2 } else { 2 };
                        }
                        count += u64::from(lattice_contains(c, &s));
                    }
                }
            }
        }
    }
    Ok(ExtremalReport {
        norm2_count: count,
        extremal: count == 0,
    })
}

/// The orthogonal pair `(0,…,0,2,2)/√2`, `(0,…,0,-2,2)/√2` in s-coordinates.
pub fn venkov_witness() -> (ShellVector, ShellVector) {
    let mut x = [0i8; DIM];
    let mut z = [0i8; DIM];
    x[DIM - 2] = 4;
    x[DIM - 1] = 4;
    z[DIM - 2] = -4;
    z[DIM - 1] = 4;
    (ShellVector(x), ShellVector(z))
}

/// `e₂,₂(x, z)`: shell vectors with lattice inner product 2 against both.
pub fn venkov_e22(shell: &Shell, x: &ShellVector, z: &ShellVector) -> Result<u32, LatticeError> {
    for v in [x, z] {
        if !shell.contains(v) {
            return Err(LatticeError::NotInShell(*v));
        }
    }
    let xz = x.lattice_inner(z);
    if !xz.is_zero() {
        return Err(LatticeError::NotOrthogonal(xz));
    }
    Ok(count_e22(shell.vectors(), x, z))
}

fn count_e22(vectors: &[ShellVector], x: &ShellVector, z: &ShellVector) -> u32 {
    vectors
        .par_chunks(4096)
        .map(|chunk| {
            chunk
                .iter()
                .filter(|y| x.dot(y) == INNER_TWO && z.dot(y) == INNER_TWO)
                .count() as u32
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VenkovSample {
    pub x: ShellVector,
    pub z: ShellVector,
    pub e22: u32,
}

impl Serialize for ShellVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ShellVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i8>::deserialize(d)?;
        ShellVector::from_slice(&v)
            .ok_or_else(|| serde::de::Error::custom(format!("expected {DIM} coordinates")))
    }
}

/// Attempts per sample to find an orthogonal partner.
const PARTNER_BUDGET: usize = 10_000;

/// Seeded sample of orthogonal pairs with their `e₂,₂` values. Pairs are
/// drawn sequentially from a ChaCha8 stream, so a seed fixes the result.
pub fn venkov_sample(
    shell: &Shell,
    count: usize,
    seed: u64,
) -> Result<Vec<VenkovSample>, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = shell.vectors();
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        let xi = rng.gen_range(0..vs.len());
        let x = vs[xi];
        let z = (0..PARTNER_BUDGET)
            .map(|_| vs[rng.gen_range(0..vs.len())])
            .find(|z| x.dot(z) == 0)
            .ok_or(LatticeError::SamplingBudget(xi))?;
        pairs.push((x, z));
    }
    Ok(pairs
        .into_iter()
        .map(|(x, z)| VenkovSample {
            x,
            z,
            e22: count_e22(vs, &x, &z),
        })
        .collect())
}
