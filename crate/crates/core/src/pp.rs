//! Plane partitions on staircase and shifted-staircase supports, the five
//! classes built on them, and their set-valued statistics.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signed::{Sign, Signed};

/// Largest size accepted by the exhaustive enumerators.
pub const MAX_ENUM_N: usize = 6;
/// Largest bound accepted by the exhaustive enumerators.
pub const MAX_ENUM_BOUND: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Plane,
    Shifted,
}

/// A (shifted) plane partition. For `Kind::Shifted`, row `i` (1-based)
/// covers columns `i..i+shape[i-1]-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePartition {
    pub kind: Kind,
    pub shape: Vec<usize>,
    pub rows: Vec<Vec<u32>>,
}

impl Signed for PlanePartition {
    fn sign(&self) -> Sign {
        Sign::Pos
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PpError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("parameters out of range: {0}")]
    Guard(String),
    #[error("statistic {stat} is not defined for class {class}")]
    Stat { stat: &'static str, class: Class },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

impl PlanePartition {
    /// Staircase `(n, n−1, …, 1)` from explicit rows.
    pub fn staircase(rows: Vec<Vec<u32>>) -> Self {
        let shape = rows.iter().map(Vec::len).collect();
        PlanePartition {
            kind: Kind::Plane,
            shape,
            rows,
        }
    }

    /// Shifted staircase from explicit rows.
    pub fn shifted(rows: Vec<Vec<u32>>) -> Self {
        let shape = rows.iter().map(Vec::len).collect();
        PlanePartition {
            kind: Kind::Shifted,
            shape,
            rows,
        }
    }

    pub fn zero(kind: Kind, n: usize) -> Self {
        let rows = (0..n).map(|i| vec![0; n - i]).collect();
        PlanePartition {
            kind,
            shape: (1..=n).rev().collect(),
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Entry `π_{i,j}` with 1-based indices in the partition's own frame.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        if i == 0 || j == 0 {
            return None;
        }
        let row = self.rows.get(i - 1)?;
        let col = match self.kind {
            Kind::Plane => j - 1,
            Kind::Shifted => j.checked_sub(i)?,
        };
        row.get(col).copied()
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        let col = match self.kind {
            Kind::Plane => j - 1,
            Kind::Shifted => j - i,
        };
        self.rows[i - 1][col] = v;
    }

    pub fn is_staircase_shape(&self) -> bool {
        let n = self.rows.len();
        n >= 1
            && self.shape.len() == n
            && self.shape.iter().enumerate().all(|(i, &l)| l == n - i)
            && self.rows.iter().zip(&self.shape).all(|(r, &l)| r.len() == l)
    }

    /// Weak decrease along rows and columns on the support.
    pub fn is_monotone(&self) -> bool {
        let n = self.n();
        for i in 1..=n {
            let (lo, hi) = self.col_range(i);
            for j in lo..=hi {
                let v = self.get(i, j).unwrap_or(0);
                if let Some(r) = self.get(i, j + 1) {
                    if r > v {
                        return false;
                    }
                }
                if let Some(d) = self.get(i + 1, j) {
                    if d > v {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Column range of row `i` (1-based, inclusive).
    pub fn col_range(&self, i: usize) -> (usize, usize) {
        let len = self.rows[i - 1].len();
        match self.kind {
            Kind::Plane => (1, len),
            Kind::Shifted => (i, i + len - 1),
        }
    }

    /// Row-major entry sequence (the canonical ordering key).
    pub fn entries(&self) -> Vec<u32> {
        self.rows.iter().flatten().copied().collect()
    }
}

impl fmt::Display for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if self.kind == Kind::Shifted {
                write!(f, "{}", "  ".repeat(i))?;
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "{}", cells.join(""))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "SPP")]
    Spp,
    #[serde(rename = "eSPP")]
    Espp,
    #[serde(rename = "stairPP")]
    Stair,
    #[serde(rename = "pstairPP")]
    Pstair,
    #[serde(rename = "QTCPP")]
    Qtcpp,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Spp => "SPP",
            Class::Espp => "eSPP",
            Class::Stair => "stairPP",
            Class::Pstair => "pstairPP",
            Class::Qtcpp => "QTCPP",
        })
    }
}

impl FromStr for Class {
    type Err = PpError;
    fn from_str(s: &str) -> Result<Self, PpError> {
        match s.to_ascii_lowercase().as_str() {
            "spp" => Ok(Class::Spp),
            "espp" => Ok(Class::Espp),
            "stairpp" | "stair" => Ok(Class::Stair),
            "pstairpp" | "pstair" => Ok(Class::Pstair),
            "qtcpp" => Ok(Class::Qtcpp),
            _ => Err(PpError::UnknownClass(s.to_string())),
        }
    }
}

impl Class {
    pub fn kind(self) -> Kind {
        match self {
            Class::Spp | Class::Espp => Kind::Shifted,
            _ => Kind::Plane,
        }
    }
}

/// A class with its parameters. `bound` is `M` for SPP, pstairPP and QTCPP
/// and `m` for eSPP (entries ≤ 2m) and stairPP (entries ≤ m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTag {
    pub class: Class,
    pub n: usize,
    pub bound: u32,
}

impl ClassTag {
    pub fn new(class: Class, n: usize, bound: u32) -> Self {
        ClassTag { class, n, bound }
    }

    /// Largest admissible entry.
    pub fn max_entry(&self) -> u32 {
        match self.class {
            Class::Espp => 2 * self.bound,
            _ => self.bound,
        }
    }

    fn check_shape(&self, pi: &PlanePartition) -> Result<(), PpError> {
        let ok = pi.kind == self.class.kind() && pi.n() == self.n && pi.is_staircase_shape();
        if ok {
            Ok(())
        } else {
            Err(PpError::Shape {
                expected: format!("{:?} staircase of size {}", self.class.kind(), self.n),
                got: format!("{:?} with shape {:?}", pi.kind, pi.shape),
            })
        }
    }

    /// Per-cell constraints that do not involve neighbours.
    fn cell_ok(&self, i: usize, j: usize, v: u32) -> bool {
        let n = self.n;
        match self.class {
            Class::Espp => i != j || v.is_multiple_of(2),
            Class::Pstair => i + j > n || v % 2 == self.bound % 2,
            _ => true,
        }
    }

    /// Anti-diagonal lower bound of QTCPP given the neighbours above and left.
    fn qtc_lower(&self, i: usize, j: usize, up: Option<u32>, left: Option<u32>) -> u32 {
        if self.class != Class::Qtcpp || i + j != self.n + 1 {
            return 0;
        }
        let m = self.bound;
        let a = up.map_or(0, |u| m.saturating_sub(u));
        let b = left.map_or(0, |l| m.saturating_sub(l));
        a.max(b)
    }
}

/// Class membership. Shape mismatches are errors, not `false`.
pub fn validate(tag: &ClassTag, pi: &PlanePartition) -> Result<bool, PpError> {
    if tag.n == 0 {
        return Err(PpError::Guard("n must be at least 1".into()));
    }
    tag.check_shape(pi)?;
    if !pi.is_monotone() {
        return Ok(false);
    }
    let n = tag.n;
    let top = tag.max_entry();
    for i in 1..=n {
        let (lo, hi) = pi.col_range(i);
        for j in lo..=hi {
            let v = pi.get(i, j).unwrap_or(0);
            if v > top || !tag.cell_ok(i, j, v) {
                return Ok(false);
            }
            let up = if i > 1 { pi.get(i - 1, j) } else { None };
            let left = if j > 1 { pi.get(i, j - 1) } else { None };
            if v < tag.qtc_lower(i, j, up, left) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn guard(tag: &ClassTag) -> Result<(), PpError> {
    if tag.n == 0 || tag.n > MAX_ENUM_N || tag.bound > MAX_ENUM_BOUND {
        return Err(PpError::Guard(format!(
            "enumeration needs 1 ≤ n ≤ {MAX_ENUM_N} and bound ≤ {MAX_ENUM_BOUND}, got n={} bound={}",
            tag.n, tag.bound
        )));
    }
    Ok(())
}

/// All members of a class, ordered lexicographically by row-major entries.
pub fn enumerate(tag: &ClassTag) -> Result<Vec<PlanePartition>, PpError> {
    guard(tag)?;
    let mut out = Vec::new();
    let mut pi = PlanePartition::zero(tag.class.kind(), tag.n);
    let cells: Vec<(usize, usize)> = (1..=tag.n)
        .flat_map(|i| (pi.col_range(i).0..=pi.col_range(i).1).map(move |j| (i, j)))
        .collect();
    fill(tag, &cells, 0, &mut pi, &mut out);
    Ok(out)
}

fn fill(tag: &ClassTag, cells: &[(usize, usize)], k: usize, pi: &mut PlanePartition, out: &mut Vec<PlanePartition>) {
    if k == cells.len() {
        out.push(pi.clone());
        return;
    }
    let (i, j) = cells[k];
    let up = if i > 1 { pi.get(i - 1, j) } else { None };
    let left = if j > 1 { pi.get(i, j - 1) } else { None };
    let hi = [Some(tag.max_entry()), up, left]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(0);
    let lo = tag.qtc_lower(i, j, up, left);
    for v in lo..=hi {
        if tag.cell_ok(i, j, v) {
            pi.set(i, j, v);
            fill(tag, cells, k + 1, pi, out);
        }
    }
    pi.set(i, j, 0);
}

/// Which set-valued statistic to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stat {
    /// Anti-diagonal support for stairPP; first-row entries below `2m` for eSPP.
    S,
    /// First-row entries different from `m` (stairPP only).
    STilde,
}

/// The statistic `S` (or `S̃`) as a set of 1-based indices.
pub fn stat(tag: &ClassTag, pi: &PlanePartition, which: Stat) -> Result<BTreeSet<usize>, PpError> {
    let n = tag.n;
    match (tag.class, which) {
        (Class::Stair, Stat::S) => Ok((1..=n).filter(|&i| pi.get(i, n + 1 - i) != Some(0)).collect()),
        (Class::Stair, Stat::STilde) => Ok((1..=n).filter(|&j| pi.get(1, j) != Some(tag.bound)).collect()),
        (Class::Espp, Stat::S) => Ok((1..=n).filter(|&j| pi.get(1, j) != Some(2 * tag.bound)).collect()),
        (class, Stat::S) => Err(PpError::Stat { stat: "S", class }),
        (class, Stat::STilde) => Err(PpError::Stat { stat: "S̃", class }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(class: Class, n: usize, bound: u32) -> ClassTag {
        ClassTag::new(class, n, bound)
    }

    #[test]
    fn worked_members() {
        let p = PlanePartition::staircase(vec![vec![8, 6, 6, 3], vec![4, 4, 0], vec![4, 2], vec![1]]);
        assert_eq!(validate(&tag(Class::Pstair, 4, 8), &p), Ok(true));
        let q = PlanePartition::staircase(vec![vec![8, 7, 7, 4], vec![6, 6, 2], vec![6, 4], vec![3]]);
        assert_eq!(validate(&tag(Class::Qtcpp, 4, 8), &q), Ok(true));
        assert_eq!(
            validate(&tag(Class::Qtcpp, 3, 0), &PlanePartition::zero(Kind::Plane, 3)),
            Ok(true)
        );
        let z = PlanePartition::staircase(vec![vec![0, 0], vec![0]]);
        assert_eq!(validate(&tag(Class::Qtcpp, 2, 1), &z), Ok(false));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let p = PlanePartition::staircase(vec![vec![1, 0], vec![0]]);
        assert!(validate(&tag(Class::Spp, 2, 1), &p).is_err());
        assert!(validate(&tag(Class::Stair, 3, 1), &p).is_err());
    }

    #[test]
    fn small_enumerations() {
        let spp = enumerate(&tag(Class::Spp, 1, 3)).unwrap();
        assert_eq!(spp.iter().map(|p| p.rows[0][0]).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(enumerate(&tag(Class::Spp, 2, 1)).unwrap().len(), 4);
        let q = enumerate(&tag(Class::Qtcpp, 2, 1)).unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.iter().all(|p| p.rows[0][0] == 1));
        assert_eq!(enumerate(&tag(Class::Stair, 1, 2)).unwrap().len(), 3);
        assert!(enumerate(&tag(Class::Spp, 7, 1)).is_err());
    }

    #[test]
    fn statistics() {
        let p = PlanePartition::staircase(vec![vec![4, 3, 1, 1], vec![2, 2, 0], vec![2, 2], vec![1]]);
        let s = stat(&tag(Class::Stair, 4, 4), &p, Stat::S).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        let e = PlanePartition::shifted(vec![vec![4, 3, 3, 2], vec![2, 2, 2], vec![2, 1], vec![0]]);
        let s = stat(&tag(Class::Espp, 4, 2), &e, Stat::S).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![2, 3, 4]);
        let z = PlanePartition::zero(Kind::Plane, 3);
        assert_eq!(stat(&tag(Class::Stair, 3, 2), &z, Stat::STilde).unwrap().len(), 3);
        assert!(stat(&tag(Class::Spp, 3, 2), &z, Stat::STilde).is_err());
    }

    #[test]
    fn qtcpp_half_bound_and_espp_filter() {
        for n in 1..=3 {
            for big_m in 0..=4u32 {
                for p in enumerate(&tag(Class::Qtcpp, n, big_m)).unwrap() {
                    for i in 1..=n {
                        for j in 1..=n - i {
                            assert!(2 * p.get(i, j).unwrap() >= big_m);
                        }
                    }
                }
            }
            for m in 0..=2u32 {
                let e = enumerate(&tag(Class::Espp, n, m)).unwrap();
                let filtered: Vec<_> = enumerate(&tag(Class::Spp, n, 2 * m))
                    .unwrap()
                    .into_iter()
                    .filter(|p| (1..=n).all(|i| p.get(i, i).unwrap() % 2 == 0))
                    .collect();
                assert_eq!(e, filtered);
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_deterministic() {
        let t = tag(Class::Spp, 3, 3);
        let a = enumerate(&t).unwrap();
        assert_eq!(a, enumerate(&t).unwrap());
        assert!(a.windows(2).all(|w| w[0].entries() < w[1].entries()));
    }
}
