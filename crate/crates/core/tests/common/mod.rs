//! Counting oracles written directly from the class definitions, sharing no
//! code with the library enumerators.

#![allow(dead_code)]

use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Spp,
    Espp,
    Stair,
    Pstair,
    Qtcpp,
}

fn decreasing_rows(len: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(len: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=cap {
            cur.push(v);
            rec(len, v, cur, out);
            cur.pop();
        }
    }
    rec(len, top, &mut Vec::new(), &mut out);
    out
}

/// Number of members of `family` with size `n` and bound `bound` (`M`, or
/// `m` for eSPP and stairPP), by a transfer over rows.
pub fn count_by_rows(family: Family, n: usize, bound: u32) -> u64 {
    let shifted = matches!(family, Family::Spp | Family::Espp);
    let top = match family {
        Family::Espp => 2 * bound,
        _ => bound,
    };
    // Row r (1-based) as a vector; its k-th entry sits in column r+k when
    // shifted and k+1 otherwise.
    let row_ok = |r: usize, row: &[u32], above: Option<&[u32]>| -> bool {
        for (k, &v) in row.iter().enumerate() {
            let col = if shifted { r + k } else { k + 1 };
            let up = above.map(|a| if shifted { a[k + 1] } else { a[k] });
            if up.is_some_and(|u| v > u) {
                return false;
            }
            match family {
                Family::Espp if col == r && v % 2 == 1 => return false,
                Family::Pstair if r + col < n + 1 && v % 2 != bound % 2 => return false,
                Family::Qtcpp if r + col == n + 1 => {
                    let left = if k > 0 { Some(row[k - 1]) } else { None };
                    let lower = up
                        .into_iter()
                        .chain(left)
                        .map(|x| bound.saturating_sub(x))
                        .max()
                        .unwrap_or(0);
                    if v < lower {
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    };
    let mut layer: HashMap<Vec<u32>, u64> = HashMap::new();
    for row in decreasing_rows(n, top) {
        if row_ok(1, &row, None) {
            layer.insert(row, 1);
        }
    }
    for r in 2..=n {
        let cands = decreasing_rows(n + 1 - r, top);
        let mut next: HashMap<Vec<u32>, u64> = HashMap::new();
        for (prev, &c) in &layer {
            for row in &cands {
                if row_ok(r, row, Some(prev)) {
                    *next.entry(row.clone()).or_insert(0) += c;
                }
            }
        }
        layer = next;
    }
    layer.values().sum()
}
