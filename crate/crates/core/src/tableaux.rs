//! Semistandard tableaux in the decreasing convention (rows weakly
//! decreasing, columns strictly decreasing), row insertion, and the passage
//! from shifted plane partitions with arbitrary diagonal to even ones.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pp::{Kind, PlanePartition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    /// Row lengths, always `n` of them (trailing zeros kept).
    pub shape: Vec<usize>,
    pub rows: Vec<Vec<u32>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("not a tableau: {0}")]
    Malformed(String),
    #[error("row {0} does not end in a removable corner")]
    NotCorner(usize),
    #[error("skew shape {outer:?} / {inner:?} is not a horizontal strip with one box per row")]
    Skew { outer: Vec<usize>, inner: Vec<usize> },
    #[error("marks {0:?} are not a subset of the statistic set")]
    Marks(Vec<usize>),
}

/// A tableau with the increasing letters that were row-inserted into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionRecord {
    pub base: Tableau,
    pub letters: Vec<u32>,
}

/// One bump during row insertion: `(row, value displaced)`, 1-based rows.
pub type Bump = (usize, u32);

impl Tableau {
    pub fn empty(n: usize) -> Self {
        Tableau {
            shape: vec![0; n],
            rows: vec![Vec::new(); n],
        }
    }

    pub fn from_rows(n: usize, mut rows: Vec<Vec<u32>>) -> Self {
        rows.resize(n, Vec::new());
        let shape = rows.iter().map(Vec::len).collect();
        Tableau { shape, rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn size(&self) -> usize {
        self.shape.iter().sum()
    }

    /// `T_{i,j}` with 1-based indices, `None` outside the shape.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.rows.get(i.checked_sub(1)?)?.get(j.checked_sub(1)?).copied()
    }

    pub fn check(&self) -> Result<(), TableauError> {
        let n = self.n();
        if self.shape.len() != n || self.rows.iter().zip(&self.shape).any(|(r, &l)| r.len() != l) {
            return Err(TableauError::Malformed("rows disagree with shape".into()));
        }
        if self.shape.windows(2).any(|w| w[0] < w[1]) {
            return Err(TableauError::Malformed("shape is not a partition".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.iter().any(|&v| v == 0 || v as usize > n) {
                return Err(TableauError::Malformed(format!(
                    "row {} has an entry outside 1..{n}",
                    i + 1
                )));
            }
            if row.windows(2).any(|w| w[0] < w[1]) {
                return Err(TableauError::Malformed(format!("row {} increases", i + 1)));
            }
            if i > 0 && row.iter().zip(&self.rows[i - 1]).any(|(&b, &a)| b >= a) {
                return Err(TableauError::Malformed(format!(
                    "column strictness fails at row {}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Conjugates each row of a shifted staircase plane partition:
/// `T_{i,j} = #{k ≥ i : π_{i,k} ≥ j}`, with shape the diagonal of `π`.
pub fn conj(pi: &PlanePartition) -> Tableau {
    let n = pi.n();
    let rows: Vec<Vec<u32>> = (1..=n)
        .map(|i| {
            let diag = pi.get(i, i).unwrap_or(0);
            (1..=diag)
                .map(|j| (i..=n).filter(|&k| pi.get(i, k).unwrap_or(0) >= j).count() as u32)
                .collect()
        })
        .collect();
    Tableau::from_rows(n, rows)
}

/// Inverse of [`conj`]: `π_{i,j} = #{k ≤ λ_i : T_{i,k} ≥ j−i+1}`.
pub fn conj_inv(t: &Tableau) -> Result<PlanePartition, TableauError> {
    t.check()?;
    let n = t.n();
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        if t.rows[i - 1].iter().any(|&v| v as usize > n + 1 - i) {
            return Err(TableauError::Malformed(format!(
                "row {i} has an entry above {}",
                n + 1 - i
            )));
        }
        rows.push(
            (i..=n)
                .map(|j| t.rows[i - 1].iter().filter(|&&v| v as usize > j - i).count() as u32)
                .collect(),
        );
    }
    Ok(PlanePartition::shifted(rows))
}

/// Row insertion: in each row bump the leftmost entry strictly less than the
/// incoming letter, or append at the end. Returns the new tableau, the
/// 1-based position of the new box and the bump trace.
pub fn row_insert(t: &Tableau, x: u32) -> (Tableau, (usize, usize), Vec<Bump>) {
    let mut out = t.clone();
    let mut x = x;
    let mut trace = Vec::new();
    for r in 0..out.n() {
        let row = &mut out.rows[r];
        match row.iter().position(|&y| y < x) {
            Some(c) => {
                let y = row[c];
                row[c] = x;
                trace.push((r + 1, y));
                x = y;
            }
            None => {
                row.push(x);
                let col = row.len();
                out.shape[r] += 1;
                return (out, (r + 1, col), trace);
            }
        }
    }
    // A column-strict tableau with entries ≤ n never needs row n+1.
    out.rows.push(vec![x]);
    out.shape.push(1);
    let pos = (out.n(), 1);
    (out, pos, trace)
}

/// Reverses [`row_insert`] from the last box of row `row` (1-based).
pub fn row_extract(t: &Tableau, row: usize) -> Result<(Tableau, u32), TableauError> {
    let r = row.checked_sub(1).ok_or(TableauError::NotCorner(row))?;
    let len = *t.shape.get(r).ok_or(TableauError::NotCorner(row))?;
    if len == 0 || t.shape.get(r + 1).is_some_and(|&l| l >= len) {
        return Err(TableauError::NotCorner(row));
    }
    let mut out = t.clone();
    let mut y = out.rows[r].pop().expect("nonempty row");
    out.shape[r] -= 1;
    for rr in (0..r).rev() {
        let row = &mut out.rows[rr];
        let c = row
            .iter()
            .rposition(|&v| v > y)
            .ok_or_else(|| TableauError::Malformed(format!("no entry above {y} in row {}", rr + 1)))?;
        std::mem::swap(&mut row[c], &mut y);
    }
    Ok((out, y))
}

/// Extracts the boxes of `sh(U) ∖ λ` from bottom to top. The skew shape must
/// have at most one box per row.
pub fn multi_extract(u: &Tableau, lambda: &[usize]) -> Result<InsertionRecord, TableauError> {
    let skew_err = || TableauError::Skew {
        outer: u.shape.clone(),
        inner: lambda.to_vec(),
    };
    if lambda.len() != u.n() {
        return Err(skew_err());
    }
    for (&mu, &la) in u.shape.iter().zip(lambda) {
        if la > mu || mu - la > 1 {
            return Err(skew_err());
        }
    }
    let mut t = u.clone();
    let mut letters = Vec::new();
    for r in (1..=u.n()).rev() {
        if u.shape[r - 1] > lambda[r - 1] {
            let (t2, x) = row_extract(&t, r)?;
            t = t2;
            letters.push(x);
        }
    }
    letters.reverse();
    if letters.windows(2).any(|w| w[0] >= w[1]) {
        return Err(skew_err());
    }
    Ok(InsertionRecord { base: t, letters })
}

/// Re-inserts the letters of a record in increasing order.
pub fn insert_all(rec: &InsertionRecord) -> Tableau {
    rec.letters.iter().fold(rec.base.clone(), |t, &x| row_insert(&t, x).0)
}

/// Splits a tableau of shape `μ ≤ (2m+1)^n` into one of even shape
/// `λ_i = 2⌊μ_i/2⌋` and the indicator `t` of the extracted letters.
pub fn ssyt_odd_split(u: &Tableau) -> Result<(Tableau, Vec<u8>), TableauError> {
    let lambda: Vec<usize> = u.shape.iter().map(|&mu| mu - mu % 2).collect();
    let rec = multi_extract(u, &lambda)?;
    let mut t = vec![0u8; u.n()];
    for &x in &rec.letters {
        t[x as usize - 1] = 1;
    }
    Ok((rec.base, t))
}

/// Inverse of [`ssyt_odd_split`].
pub fn ssyt_odd_join(t: &Tableau, marks: &[u8]) -> Tableau {
    let letters = (1..=marks.len() as u32)
        .filter(|&i| marks[i as usize - 1] == 1)
        .collect();
    insert_all(&InsertionRecord {
        base: t.clone(),
        letters,
    })
}

/// `{T_{1,2m}+1, …, n}`, with `T_{1,2m} = 0` when the first row is shorter.
pub fn stat_s_tableau(t: &Tableau, m: u32, n: usize) -> BTreeSet<usize> {
    let start = if m == 0 {
        n
    } else {
        t.get(1, 2 * m as usize).unwrap_or(0) as usize
    };
    (start + 1..=n).collect()
}

/// Marks attached to a base object: `values[k]` is the mark of `domain[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Marks {
    pub domain: Vec<usize>,
    pub values: Vec<u8>,
}

impl Marks {
    pub fn total(values: Vec<u8>) -> Self {
        Marks {
            domain: (1..=values.len()).collect(),
            values,
        }
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.domain.iter().position(|&d| d == i).map(|k| self.values[k])
    }

    /// Extends to a total map on `1..=n` with zeros off the domain.
    pub fn to_total(&self, n: usize) -> Vec<u8> {
        (1..=n).map(|i| self.get(i).unwrap_or(0)).collect()
    }
}

/// `SPP(n,M) → eSPP(n,⌊M/2⌋)` with marks: conjugate, split off one box per
/// odd row, conjugate back. For even `M` the marks are restricted to `S(π′)`.
pub fn spp_split(pi: &PlanePartition, big_m: u32) -> Result<(PlanePartition, Marks), TableauError> {
    if pi.kind != Kind::Shifted {
        return Err(TableauError::Malformed("expected a shifted plane partition".into()));
    }
    let n = pi.n();
    let u = conj(pi);
    let (t, marks) = ssyt_odd_split(&u)?;
    let base = conj_inv(&t)?;
    if big_m % 2 == 1 {
        return Ok((base, Marks::total(marks)));
    }
    let s = stat_s_tableau(&t, big_m / 2, n);
    let stray: Vec<usize> = (1..=n).filter(|&i| marks[i - 1] == 1 && !s.contains(&i)).collect();
    if !stray.is_empty() {
        return Err(TableauError::Marks(stray));
    }
    let domain: Vec<usize> = s.into_iter().collect();
    let values = domain.iter().map(|&i| marks[i - 1]).collect();
    Ok((base, Marks { domain, values }))
}

/// Inverse of [`spp_split`].
pub fn spp_join(base: &PlanePartition, marks: &Marks) -> Result<PlanePartition, TableauError> {
    let n = base.n();
    let t = conj(base);
    conj_inv(&ssyt_odd_join(&t, &marks.to_total(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(n: usize, rows: Vec<Vec<u32>>) -> Tableau {
        Tableau::from_rows(n, rows)
    }

    #[test]
    fn conjugation_example() {
        let pi = PlanePartition::shifted(vec![vec![4, 4, 3, 3], vec![3, 3, 3], vec![3, 1], vec![0]]);
        let t = conj(&pi);
        assert_eq!(t, tab(4, vec![vec![4, 4, 4, 2], vec![3, 3, 3], vec![2, 1, 1]]));
        assert_eq!(t.shape, vec![4, 3, 3, 0]);
        assert_eq!(conj_inv(&t).unwrap(), pi);
        assert_eq!(conj(&PlanePartition::zero(Kind::Shifted, 3)), Tableau::empty(3));
    }

    #[test]
    fn insertion_examples() {
        let t = tab(4, vec![vec![4, 4, 3, 2], vec![3, 3, 1], vec![2, 1]]);
        let (u, pos, _) = row_insert(&t, 4);
        assert_eq!(u, tab(4, vec![vec![4, 4, 4, 2], vec![3, 3, 3], vec![2, 1, 1]]));
        assert_eq!(pos, (3, 3));
        let t = tab(4, vec![vec![4, 4, 3, 1], vec![3, 3], vec![2, 1]]);
        let (u, pos, _) = row_insert(&t, 2);
        assert_eq!(u, tab(4, vec![vec![4, 4, 3, 2], vec![3, 3, 1], vec![2, 1]]));
        assert_eq!(pos, (2, 3));
        let (u, pos, trace) = row_insert(&Tableau::empty(3), 2);
        assert_eq!((u.rows[0].clone(), pos, trace.len()), (vec![2], (1, 1), 0));
    }

    #[test]
    fn double_extraction_example() {
        let u = tab(4, vec![vec![4, 4, 4, 2], vec![3, 3, 3], vec![2, 1, 1]]);
        let rec = multi_extract(&u, &[4, 2, 2, 0]).unwrap();
        assert_eq!(rec.base, tab(4, vec![vec![4, 4, 3, 1], vec![3, 3], vec![2, 1]]));
        assert_eq!(rec.letters, vec![2, 4]);
        assert_eq!(insert_all(&rec), u);
        let (t, marks) = ssyt_odd_split(&u).unwrap();
        assert_eq!(t, rec.base);
        assert_eq!(marks, vec![0, 1, 0, 1]);
        assert_eq!(multi_extract(&u, &u.shape).unwrap().letters, Vec::<u32>::new());
    }

    #[test]
    fn extract_rejects_non_corner() {
        let u = tab(3, vec![vec![3, 2], vec![2, 1]]);
        assert_eq!(row_extract(&u, 1), Err(TableauError::NotCorner(1)));
        assert!(row_extract(&u, 2).is_ok());
    }

    #[test]
    fn statistic_on_tableau() {
        let t = tab(4, vec![vec![4, 4, 3, 1], vec![3, 3], vec![2, 1]]);
        assert_eq!(stat_s_tableau(&t, 2, 4).into_iter().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(stat_s_tableau(&t, 3, 4).len(), 4);
    }

    #[test]
    fn spp_split_example() {
        let pi = PlanePartition::shifted(vec![vec![4, 4, 3, 3], vec![3, 3, 3], vec![3, 1], vec![0]]);
        let (base, marks) = spp_split(&pi, 4).unwrap();
        assert_eq!(
            base,
            PlanePartition::shifted(vec![vec![4, 3, 3, 2], vec![2, 2, 2], vec![2, 1], vec![0]])
        );
        assert_eq!(
            marks,
            Marks {
                domain: vec![2, 3, 4],
                values: vec![1, 0, 1]
            }
        );
        assert_eq!(spp_join(&base, &marks).unwrap(), pi);
    }
}
