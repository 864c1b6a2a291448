//! Explicit correspondences between QTCPP(n,M) and staircase plane
//! partitions: the parity-staircase bijection and the two 1:2^#S splits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pp::{stat, Class, ClassTag, PlanePartition, Stat};
use crate::tableaux::Marks;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrError {
    #[error("marks domain {got:?} differs from S = {expected:?}")]
    MarksDomain { expected: Vec<usize>, got: Vec<usize> },
    #[error("marks must have one entry per anti-diagonal cell")]
    MarksLength,
}

/// A staircase plane partition with marks on (a subset of) its anti-diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedStair {
    pub base: PlanePartition,
    pub marks: Marks,
}

fn cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n + 1 - i).map(move |j| (i, j)))
}

/// The smaller of the neighbours above and to the left (whichever exist).
fn min_neighbour(pi: &PlanePartition, i: usize, j: usize) -> u32 {
    let up = if i > 1 { pi.get(i - 1, j) } else { None };
    let left = if j > 1 { pi.get(i, j - 1) } else { None };
    up.into_iter()
        .chain(left)
        .min()
        .expect("anti-diagonal cell of size ≥ 2 has a neighbour")
}

/// pstairPP(n,M) → QTCPP(n,M).
pub fn pstair_to_qtcpp(pi: &PlanePartition, big_m: u32) -> PlanePartition {
    let n = pi.n();
    if n == 1 {
        return pi.clone();
    }
    let mut out = pi.clone();
    for (i, j) in cells(n) {
        let v = pi.get(i, j).unwrap();
        let w = if i + j < n + 1 {
            debug_assert_eq!((v + big_m) % 2, 0);
            (v + big_m) / 2
        } else {
            let mij = min_neighbour(pi, i, j);
            debug_assert_eq!((big_m - mij) % 2, 0);
            v + (big_m - mij) / 2
        };
        out.set(i, j, w);
    }
    out
}

/// QTCPP(n,M) → pstairPP(n,M).
pub fn qtcpp_to_pstair(pi: &PlanePartition, big_m: u32) -> PlanePartition {
    let n = pi.n();
    if n == 1 {
        return pi.clone();
    }
    let mut out = pi.clone();
    for (i, j) in cells(n) {
        let v = pi.get(i, j).unwrap();
        let w = if i + j < n + 1 {
            2 * v - big_m
        } else {
            v + min_neighbour(pi, i, j) - big_m
        };
        out.set(i, j, w);
    }
    out
}

/// QTCPP(n,2m+1) → stairPP(n,m) × {0,1}^n.
pub fn qtcpp_to_stair_odd(pi: &PlanePartition, m: u32) -> (PlanePartition, Vec<u8>) {
    let n = pi.n();
    let mut out = pi.clone();
    let mut t = vec![0u8; n];
    for (i, j) in cells(n) {
        let v = pi.get(i, j).unwrap();
        if i + j < n + 1 || v > m {
            out.set(i, j, v - m - 1);
        } else {
            out.set(i, j, m - v);
            t[i - 1] = 1;
        }
    }
    (out, t)
}

/// Inverse of [`qtcpp_to_stair_odd`].
pub fn stair_to_qtcpp_odd(pi: &PlanePartition, t: &[u8], m: u32) -> Result<PlanePartition, CorrError> {
    let n = pi.n();
    if t.len() != n {
        return Err(CorrError::MarksLength);
    }
    let mut out = pi.clone();
    for (i, j) in cells(n) {
        let v = pi.get(i, j).unwrap();
        let w = if i + j < n + 1 || t[i - 1] == 0 {
            v + m + 1
        } else {
            m - v
        };
        out.set(i, j, w);
    }
    Ok(out)
}

/// QTCPP(n,2m) → stairPP(n,m) with marks on `S`.
pub fn qtcpp_to_stair_even(pi: &PlanePartition, m: u32) -> MarkedStair {
    let n = pi.n();
    let mut out = pi.clone();
    let mut domain = Vec::new();
    let mut values = Vec::new();
    for (i, j) in cells(n) {
        let v = pi.get(i, j).unwrap();
        if i + j < n + 1 {
            out.set(i, j, v - m);
        } else {
            out.set(i, j, v.abs_diff(m));
            if v != m {
                domain.push(i);
                values.push(u8::from(v < m));
            }
        }
    }
    MarkedStair {
        base: out,
        marks: Marks { domain, values },
    }
}

/// Inverse of [`qtcpp_to_stair_even`].
pub fn stair_to_qtcpp_even(ms: &MarkedStair, m: u32) -> Result<PlanePartition, CorrError> {
    let pi = &ms.base;
    let n = pi.n();
    let s: Vec<usize> = stat(&ClassTag::new(Class::Stair, n, m), pi, Stat::S)
        .expect("stairPP")
        .into_iter()
        .collect();
    if s != ms.marks.domain {
        return Err(CorrError::MarksDomain {
            expected: s,
            got: ms.marks.domain.clone(),
        });
    }
    let mut out = pi.clone();
    for (i, j) in cells(n) {
        let v = pi.get(i, j).unwrap();
        let w = if i + j < n + 1 {
            v + m
        } else {
            match ms.marks.get(i) {
                Some(1) => m - v,
                Some(_) => m + v,
                None => m,
            }
        };
        out.set(i, j, w);
    }
    Ok(out)
}
