//! Binary linear codes of length at most 64, stored as generator rows packed
//! into `u64` (bit `j` is coordinate `j`).
//!
//! Two extremal doubly-even self-dual `[32,16,8]` codes are built in: the
//! second-order Reed–Muller code `RM(2,5)` and the extended quadratic
//! residue code of length 32. Other codes load from a plain `0`/`1` matrix.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest dimension `code_report` will enumerate.
pub const MAX_ENUMERABLE_DIMENSION: usize = 28;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("cannot read generator matrix: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: unexpected character {found:?} (expected 0 or 1)")]
    Parse { line: usize, found: char },
    #[error("bad generator shape: {0}")]
    Shape(String),
    #[error("generator rows are linearly dependent: rows {rows:?} sum to zero")]
    RankDeficient { rows: Vec<usize> },
    #[error("dimension {0} is too large to enumerate (limit {MAX_ENUMERABLE_DIMENSION})")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    rows: Vec<u64>,
}

/// Properties established by enumerating every codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub length: usize,
    pub dimension: usize,
    pub self_dual: bool,
    pub doubly_even: bool,
    /// `None` only for the zero code.
    pub min_distance: Option<u32>,
    pub weight_enumerator: BTreeMap<u32, u64>,
}

impl CodeReport {
    pub fn count(&self, weight: u32) -> u64 {
        self.weight_enumerator.get(&weight).copied().unwrap_or(0)
    }
}

impl BinaryCode {
    /// Checks that `rows` fit in `length` bits and are linearly independent.
    pub fn new(length: usize, rows: Vec<u64>) -> Result<Self, CodeError> {
        if length == 0 || length > 64 {
            return Err(CodeError::Shape(format!("length {length} outside 1..=64")));
        }
        if rows.len() > 64 {
            return Err(CodeError::Shape(format!("{} rows exceed 64", rows.len())));
        }
        let mask = if length == 64 {
            u64::MAX
        } else {
            (1u64 << length) - 1
        };
        if let Some(i) = rows.iter().position(|r| r & !mask != 0) {
            return Err(CodeError::Shape(format!(
                "row {i} has bits beyond length {length}"
            )));
        }
        if let Some(rows) = find_dependency(&rows) {
            return Err(CodeError::RankDeficient { rows });
        }
        Ok(BinaryCode { length, rows })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn generator(&self) -> &[u64] {
        &self.rows
    }

    /// Every pair of generator rows (and each row with itself) has even overlap.
    pub fn is_self_orthogonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, a)| self.rows[i..].iter().all(|b| (a & b).count_ones() % 2 == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dimension() == self.length && self.is_self_orthogonal()
    }

    /// All `2^k` codewords in Gray-code order.
    pub fn codewords(&self) -> Result<Vec<u64>, CodeError> {
        let k = self.dimension();
        if k > MAX_ENUMERABLE_DIMENSION {
            return Err(CodeError::TooLarge(k));
        }
        let mut out = Vec::with_capacity(1 << k);
        let mut word = 0u64;
        out.push(word);
        for i in 1u64..(1 << k) {
            word ^= self.rows[i.trailing_zeros() as usize];
            out.push(word);
        }
        Ok(out)
    }

    /// Membership test by reduction against an echelon form.
    pub fn contains(&self, word: u64) -> bool {
        let echelon = echelon(&self.rows);
        let mut w = word;
        for r in echelon {
            let pivot = 63 - r.leading_zeros();
            if w >> pivot & 1 == 1 {
                w ^= r;
            }
        }
        w == 0
    }

    /// Same codeword set, regardless of generator choice.
    pub fn same_code(&self, other: &BinaryCode) -> bool {
        self.length == other.length
            && self.dimension() == other.dimension()
            && other.rows.iter().all(|r| self.contains(*r))
    }

    /// One row per line, `0`/`1` characters, coordinate 0 first.
    pub fn to_matrix_string(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            for j in 0..self.length {
                out.push(if r >> j & 1 == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Weight enumerator via parallel Gray-code walks over index ranges.
    pub fn weight_enumerator(&self) -> Result<Vec<u64>, CodeError> {
        let k = self.dimension();
        if k > MAX_ENUMERABLE_DIMENSION {
            return Err(CodeError::TooLarge(k));
        }
        let total: u64 = 1 << k;
        let chunk: u64 = 1 << k.min(14);
        let rows = &self.rows;
        let length = self.length;
        let hist = (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                let start = c * chunk;
                let mut h = vec![0u64; length + 1];
                let gray = start ^ (start >> 1);
                let mut word = rows
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| gray >> b & 1 == 1)
                    .fold(0u64, |acc, (_, r)| acc ^ r);
                h[word.count_ones() as usize] += 1;
                for i in start + 1..start + chunk {
                    word ^= rows[i.trailing_zeros() as usize];
                    h[word.count_ones() as usize] += 1;
                }
                h
            })
            .reduce(
                || vec![0u64; length + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(hist)
    }
}

/// Row indices of some combination summing to zero, if any.
fn find_dependency(rows: &[u64]) -> Option<Vec<usize>> {
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let mut w = r;
        let mut combo = 1u64 << i;
        for &(b, bc) in &basis {
            let pivot = 63 - b.leading_zeros();
            if w >> pivot & 1 == 1 {
                w ^= b;
                combo ^= bc;
            }
        }
        if w == 0 {
            return Some((0..rows.len()).filter(|j| combo >> j & 1 == 1).collect());
        }
        // keep basis fully reduced so pivots stay unique
        let pivot = 63 - w.leading_zeros();
        for (b, bc) in basis.iter_mut() {
            if *b >> pivot & 1 == 1 {
                *b ^= w;
                *bc ^= combo;
            }
        }
        basis.push((w, combo));
    }
    None
}

fn echelon(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut w = r;
        for &b in &basis {
            if w >> (63 - b.leading_zeros()) & 1 == 1 {
                w ^= b;
            }
        }
        if w != 0 {
            let pivot = 63 - w.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> pivot & 1 == 1 {
                    *b ^= w;
                }
            }
            basis.push(w);
        }
    }
    basis
}

/// Full enumeration report. Refuses dimensions above the guard.
pub fn code_report(c: &BinaryCode) -> Result<CodeReport, CodeError> {
    let hist = c.weight_enumerator()?;
    let weight_enumerator: BTreeMap<u32, u64> = hist
        .iter()
        .enumerate()
        .filter(|(_, n)| **n > 0)
        .map(|(w, n)| (w as u32, *n))
        .collect();
    Ok(CodeReport {
        length: c.length(),
        dimension: c.dimension(),
        self_dual: c.is_self_dual(),
        doubly_even: weight_enumerator.keys().all(|w| w % 4 == 0),
        min_distance: weight_enumerator.keys().copied().find(|w| *w > 0),
        weight_enumerator,
    })
}

/// `RM(2,5)`: evaluations of all monomials of degree ≤ 2 in five Boolean
/// variables at the 32 points of GF(2)^5 (point `j` has variable `v` equal
/// to bit `v` of `j`).
pub fn reed_muller_2_5() -> BinaryCode {
    let eval = |vars: &[usize]| -> u64 {
        (0..32u64)
            .filter(|j| vars.iter().all(|v| j >> v & 1 == 1))
            .fold(0u64, |acc, j| acc | 1 << j)
    };
    let mut rows = vec![eval(&[])];
    rows.extend((0..5).map(|v| eval(&[v])));
    for a in 0..5 {
        for b in a + 1..5 {
            rows.push(eval(&[a, b]));
        }
    }
    BinaryCode::new(32, rows).expect("RM(2,5) generator has full rank")
}

/// Arithmetic in GF(32) = GF(2)[x]/(x^5 + x^2 + 1).
fn gf32_mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0u8;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x20 != 0 {
            a ^= 0x25;
        }
    }
    acc
}

/// Extended quadratic residue code of length 32.
///
/// The cyclic QR code of length 31 has generator polynomial
/// `Π_{r ∈ Q} (x - β^r)` over the quadratic residues `Q` mod 31, `β` a
/// primitive 31st root of unity; 2 is a residue mod 31, so the product has
/// binary coefficients. Shifts of it span the code; a parity bit in
/// coordinate 31 extends it.
pub fn extended_quadratic_residue_32() -> BinaryCode {
    let residues: Vec<u32> = {
        let mut q: Vec<u32> = (1..31u32).map(|x| x * x % 31).collect();
        q.sort_unstable();
        q.dedup();
        q
    };
    // α = x has order 31 in GF(32)*, since 31 is prime.
    let alpha_pow = |e: u32| (0..e).fold(1u8, |acc, _| gf32_mul(acc, 2));
    let mut g: Vec<u8> = vec![1];
    for r in &residues {
        let root = alpha_pow(*r);
        let mut next = vec![0u8; g.len() + 1];
        for (i, c) in g.iter().enumerate() {
            next[i + 1] ^= c;
            next[i] ^= gf32_mul(*c, root);
        }
        g = next;
    }
    assert!(g.iter().all(|c| *c <= 1), "QR generator must be binary");
    let gbits = g
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, c)| acc | (u64::from(*c) << i));
    let k = 31 - (g.len() - 1);
    let rows = (0..k)
        .map(|s| {
            let w = gbits << s;
            w | (u64::from(w.count_ones() % 2) << 31)
        })
        .collect();
    BinaryCode::new(32, rows).expect("QR shifts are independent")
}

/// Parses one row per line of `0`/`1` characters; whitespace is ignored,
/// blank lines are skipped.
pub fn parse_generator_matrix(text: &str) -> Result<BinaryCode, CodeError> {
    let mut rows = Vec::new();
    let mut length = None;
    for (lineno, line) in text.lines().enumerate() {
        let mut row = 0u64;
        let mut len = 0usize;
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(CodeError::Parse {
                        line: lineno + 1,
                        found: other,
                    })
                }
            };
            if len >= 64 {
                return Err(CodeError::Shape(format!(
                    "line {} longer than 64",
                    lineno + 1
                )));
            }
            row |= bit << len;
            len += 1;
        }
        if len == 0 {
            continue;
        }
        match length {
            None => length = Some(len),
            Some(l) if l != len => {
                return Err(CodeError::Shape(format!(
                    "line {} has {len} bits, expected {l}",
                    lineno + 1
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    let length = length.ok_or_else(|| CodeError::Shape("no rows".into()))?;
    if 2 * rows.len() > length {
        return Err(CodeError::Shape(format!(
            "{} rows exceed half the length {length}; a self-orthogonal code has at most {}",
            rows.len(),
            length / 2
        )));
    }
    BinaryCode::new(length, rows)
}

pub fn load_generator_matrix(path: impl AsRef<Path>) -> Result<BinaryCode, CodeError> {
    parse_generator_matrix(&std::fs::read_to_string(path)?)
}

/// Human-readable summary of a report.
pub fn describe(report: &CodeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "[{}, {}, {}] self-dual={} doubly-even={}",
        report.length,
        report.dimension,
        report
            .min_distance
            .map_or_else(|| "-".to_string(), |d| d.to_string()),
        report.self_dual,
        report.doubly_even
    );
    for (w, n) in &report.weight_enumerator {
        let _ = writeln!(s, "  A_{w} = {n}");
    }
    s
}
