//! Monotone lattice paths, path tuples with a permutation label, the LGV
//! tail swap, the 180° rotation and the mirror reflection.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signed::{perm_sign, Sign, Signed};

pub type Point = (i64, i64);

/// The two steps of a monotone path. On the up-graph `H = (1,0)` and
/// `V = (0,1)`; on the down-graph `H = (−1,0)` and `V = (0,−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    H,
    V,
}

impl Step {
    pub fn flip(self) -> Step {
        match self {
            Step::H => Step::V,
            Step::V => Step::H,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Graph {
    Up,
    Down,
}

impl Graph {
    pub fn delta(self, s: Step) -> Point {
        match (self, s) {
            (Graph::Up, Step::H) => (1, 0),
            (Graph::Up, Step::V) => (0, 1),
            (Graph::Down, Step::H) => (-1, 0),
            (Graph::Down, Step::V) => (0, -1),
        }
    }

    pub fn letter(self, s: Step) -> char {
        match (self, s) {
            (Graph::Up, Step::H) => 'E',
            (Graph::Up, Step::V) => 'N',
            (Graph::Down, Step::H) => 'W',
            (Graph::Down, Step::V) => 'S',
        }
    }
}

/// A step word read from the origin on the up-graph; the elements of
/// `C(u,v)` are the words of length `u` with `v` letters `V`.
pub type Word = Vec<Step>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("configuration is non-intersecting")]
    NonIntersecting,
    #[error("path does not meet the reflection line")]
    NoCrossing,
    #[error("bad step word `{0}`")]
    BadWord(String),
}

pub fn word_string(w: &[Step], g: Graph) -> String {
    w.iter().map(|&s| g.letter(s)).collect()
}

/// Parses a word over `E/N` (or `H/V`).
pub fn parse_word(s: &str) -> Result<Word, PathError> {
    s.chars()
        .map(|c| match c {
            'E' | 'H' | 'W' => Ok(Step::H),
            'N' | 'V' | 'S' => Ok(Step::V),
            _ => Err(PathError::BadWord(s.to_string())),
        })
        .collect()
}

pub fn north_count(w: &[Step]) -> usize {
    w.iter().filter(|&&s| s == Step::V).count()
}

/// Reflection of a word across the anti-diagonal: reverse and swap letters.
pub fn reverse_complement(w: &[Step]) -> Word {
    w.iter().rev().map(|s| s.flip()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePath {
    pub graph: Graph,
    pub start: Point,
    pub steps: Word,
}

impl LatticePath {
    pub fn new(graph: Graph, start: Point, steps: Word) -> Self {
        LatticePath { graph, start, steps }
    }

    pub fn vertices(&self) -> Vec<Point> {
        let mut p = self.start;
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(p);
        for &s in &self.steps {
            let d = self.graph.delta(s);
            p = (p.0 + d.0, p.1 + d.1);
            out.push(p);
        }
        out
    }

    pub fn end(&self) -> Point {
        *self.vertices().last().unwrap()
    }

    /// Edges as `(from, to)` pairs.
    pub fn edges(&self) -> Vec<(Point, Point)> {
        self.vertices().windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn word(&self) -> String {
        word_string(&self.steps, self.graph)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}", self.start, self.word())
    }
}

/// `#C(u,v) = binom(u,v)`, zero outside `0 ≤ v ≤ u`.
pub fn count_c(u: i64, v: i64) -> u64 {
    if u < 0 || v < 0 || v > u {
        return 0;
    }
    let v = v.min(u - v) as u64;
    let u = u as u64;
    (0..v).fold(1u64, |acc, k| acc * (u - k) / (k + 1))
}

/// All words of length `u` with `v` letters `V`, in lexicographic order
/// (`H < V`).
pub fn enumerate_c(u: usize, v: i64) -> Vec<Word> {
    let mut out = Vec::new();
    if v < 0 || v as usize > u {
        return out;
    }
    fn rec(u: usize, v: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == u {
            out.push(cur.clone());
            return;
        }
        let left = u - cur.len();
        let used = north_count(cur);
        if left > v - used {
            cur.push(Step::H);
            rec(u, v, cur, out);
            cur.pop();
        }
        if used < v {
            cur.push(Step::V);
            rec(u, v, cur, out);
            cur.pop();
        }
    }
    rec(u, v as usize, &mut Vec::with_capacity(u), &mut out);
    out
}

/// All up- or down-graph paths between two points.
pub fn paths_between(graph: Graph, a: Point, b: Point) -> Vec<LatticePath> {
    let (dx, dy) = match graph {
        Graph::Up => (b.0 - a.0, b.1 - a.1),
        Graph::Down => (a.0 - b.0, a.1 - b.1),
    };
    if dx < 0 || dy < 0 {
        return Vec::new();
    }
    enumerate_c((dx + dy) as usize, dy)
        .into_iter()
        .map(|w| LatticePath::new(graph, a, w))
        .collect()
}

/// A tuple of paths; path `k` runs from source `k+1` to sink `perm[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathConfig {
    pub paths: Vec<LatticePath>,
    pub perm: Vec<usize>,
}

impl Signed for PathConfig {
    fn sign(&self) -> Sign {
        perm_sign(&self.perm)
    }
}

/// A shared vertex chosen by the LGV rule, with the two path indices and the
/// positions of the vertex along each of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub vertex: Point,
    pub p: usize,
    pub q: usize,
    pub at_p: usize,
    pub at_q: usize,
}

impl PathConfig {
    /// The LGV crossing: the shared vertex maximal by `(x+y, x)`, and the two
    /// smallest path indices through it.
    pub fn crossing(&self) -> Option<Crossing> {
        let mut seen: HashMap<Point, Vec<(usize, usize)>> = HashMap::new();
        for (k, path) in self.paths.iter().enumerate() {
            for (pos, v) in path.vertices().into_iter().enumerate() {
                seen.entry(v).or_default().push((k, pos));
            }
        }
        let (vertex, users) = seen
            .into_iter()
            .filter(|(_, users)| users.len() >= 2)
            .max_by_key(|(v, _)| (v.0 + v.1, v.0))?;
        let mut users = users;
        users.sort();
        let (p, at_p) = users[0];
        let (q, at_q) = users[1];
        Some(Crossing {
            vertex,
            p,
            q,
            at_p,
            at_q,
        })
    }

    pub fn is_non_intersecting(&self) -> bool {
        self.crossing().is_none()
    }

    /// Multiset of all edges, sorted.
    pub fn edge_multiset(&self) -> Vec<(Point, Point)> {
        let mut e: Vec<_> = self.paths.iter().flat_map(LatticePath::edges).collect();
        e.sort();
        e
    }
}

/// The LGV tail swap at the selected crossing. Sign-reversing involution on
/// intersecting configurations.
pub fn lgv_step(cfg: &PathConfig) -> Result<PathConfig, PathError> {
    let c = cfg.crossing().ok_or(PathError::NonIntersecting)?;
    let mut out = cfg.clone();
    let (pp, qq) = (&cfg.paths[c.p].steps, &cfg.paths[c.q].steps);
    let mut new_p = pp[..c.at_p].to_vec();
    new_p.extend_from_slice(&qq[c.at_q..]);
    let mut new_q = qq[..c.at_q].to_vec();
    new_q.extend_from_slice(&pp[c.at_p..]);
    out.paths[c.p].steps = new_p;
    out.paths[c.q].steps = new_q;
    out.perm.swap(c.p, c.q);
    Ok(out)
}

/// The LGV tail swap for configurations indexed by sink: path `k` ends at
/// sink `k+1` and `perm[k]` is its source. The two paths exchange their
/// initial segments up to the crossing, and with them their sources.
pub fn lgv_step_by_sink(cfg: &PathConfig) -> Result<PathConfig, PathError> {
    let c = cfg.crossing().ok_or(PathError::NonIntersecting)?;
    let mut out = lgv_step(cfg)?;
    out.paths.swap(c.p, c.q);
    Ok(out)
}

/// Rotation by 180° about the midpoint of the endpoints: the reversed word.
pub fn rotate180(path: &LatticePath) -> LatticePath {
    let mut steps = path.steps.clone();
    steps.reverse();
    LatticePath { steps, ..path.clone() }
}

/// Reflection of a point across `x − y = 2m+2`.
pub fn mirror_point(p: Point, m: i64) -> Point {
    (p.1 + 2 * m + 2, p.0 - 2 * m - 2)
}

/// Reflects the part of an up-graph path before its last vertex on the line
/// `x − y = 2m+2` (the one with maximal `x+y`).
pub fn mirror_reflect(path: &LatticePath, m: i64) -> Result<LatticePath, PathError> {
    let verts = path.vertices();
    let k = verts
        .iter()
        .rposition(|v| v.0 - v.1 == 2 * m + 2)
        .ok_or(PathError::NoCrossing)?;
    let mut steps: Word = path.steps[..k].iter().map(|s| s.flip()).collect();
    steps.extend_from_slice(&path.steps[k..]);
    Ok(LatticePath::new(path.graph, mirror_point(path.start, m), steps))
}

/// Whether every vertex satisfies `x − y ≤ 2m+1`.
pub fn in_gamma_prime(path: &LatticePath, m: i64) -> bool {
    path.vertices().iter().all(|v| v.0 - v.1 <= 2 * m + 1)
}

/// Options for [`render_svg`].
#[derive(Clone, Debug, Default)]
pub struct SvgOptions {
    /// Lines `x − y = c` to draw as barriers.
    pub barriers: Vec<i64>,
    pub sources: Vec<Point>,
    pub sinks: Vec<Point>,
}

/// Draws a path configuration on its bounding grid.
pub fn render_svg(paths: &[LatticePath], opts: &SvgOptions) -> String {
    const CELL: i64 = 28;
    const PAD: i64 = 1;
    const COLORS: [&str; 8] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    ];
    let pts: Vec<Point> = paths
        .iter()
        .flat_map(LatticePath::vertices)
        .chain(opts.sources.iter().copied())
        .chain(opts.sinks.iter().copied())
        .collect();
    let (x0, x1) = (
        pts.iter().map(|p| p.0).min().unwrap_or(0) - PAD,
        pts.iter().map(|p| p.0).max().unwrap_or(0) + PAD,
    );
    let (y0, y1) = (
        pts.iter().map(|p| p.1).min().unwrap_or(0) - PAD,
        pts.iter().map(|p| p.1).max().unwrap_or(0) + PAD,
    );
    let sx = |x: i64| (x - x0) * CELL;
    let sy = |y: i64| (y1 - y) * CELL;
    let (w, h) = ((x1 - x0) * CELL, (y1 - y0) * CELL);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for x in x0..=x1 {
        let _ = writeln!(s, r##"<line x1="{0}" y1="0" x2="{0}" y2="{h}" stroke="#ddd"/>"##, sx(x));
    }
    for y in y0..=y1 {
        let _ = writeln!(s, r##"<line x1="0" y1="{0}" x2="{w}" y2="{0}" stroke="#ddd"/>"##, sy(y));
    }
    for &c in &opts.barriers {
        // x − y = c between the horizontal extremes of the grid.
        let (a, b) = ((x0, x0 - c), (x1, x1 - c));
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#f80" stroke-dasharray="6,4"/>"##,
            sx(a.0),
            sy(a.1),
            sx(b.0),
            sy(b.1)
        );
    }
    for (k, p) in paths.iter().enumerate() {
        let pts: Vec<String> = p
            .vertices()
            .iter()
            .map(|v| format!("{},{}", sx(v.0), sy(v.1)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="3"/>"#,
            pts.join(" "),
            COLORS[k % COLORS.len()]
        );
    }
    for (pts, color) in [(&opts.sources, "#c00"), (&opts.sinks, "#060")] {
        for v in pts.iter() {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="4" fill="{color}"/>"#, sx(v.0), sy(v.1));
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(count_c(4, 2), 6);
        assert_eq!(enumerate_c(4, 2).len(), 6);
        assert_eq!(count_c(3, 5), 0);
        assert_eq!(count_c(5, 0), 1);
        assert!(enumerate_c(3, 5).is_empty());
        for u in 0..8usize {
            for v in 0..=u as i64 {
                assert_eq!(enumerate_c(u, v).len() as u64, count_c(u as i64, v));
            }
        }
    }

    #[test]
    fn mirror_figure() {
        let p = LatticePath::new(Graph::Up, (6, -6), w("EEENNNEN"));
        assert_eq!(p.end(), (10, -2));
        let r = mirror_reflect(&p, 6).unwrap();
        assert_eq!(r.start, (8, -8));
        assert_eq!(r.word(), "NNNENNEN");
        assert_eq!(r.end(), (10, -2));
        assert_eq!(mirror_reflect(&r, 6).unwrap(), p);
    }

    #[test]
    fn mirror_needs_a_crossing() {
        let p = LatticePath::new(Graph::Up, (1, -1), w("NNEE"));
        assert_eq!(mirror_reflect(&p, 2), Err(PathError::NoCrossing));
    }

    #[test]
    fn single_shared_vertex_swap() {
        let cfg = PathConfig {
            paths: vec![
                LatticePath::new(Graph::Up, (0, 1), w("EN")),
                LatticePath::new(Graph::Up, (1, 0), w("NE")),
            ],
            perm: vec![1, 2],
        };
        let c = cfg.crossing().unwrap();
        assert_eq!(c.vertex, (1, 1));
        let s = lgv_step(&cfg).unwrap();
        assert_eq!(s.perm, vec![2, 1]);
        assert_eq!(s.sign(), Sign::Neg);
        assert_eq!(s.edge_multiset(), cfg.edge_multiset());
        assert_eq!(lgv_step(&s).unwrap(), cfg);
    }

    #[test]
    fn sink_indexed_swap_keeps_sinks() {
        let cfg = PathConfig {
            paths: vec![
                LatticePath::new(Graph::Up, (0, 1), w("EN")),
                LatticePath::new(Graph::Up, (1, 0), w("NE")),
            ],
            perm: vec![1, 2],
        };
        let s = lgv_step_by_sink(&cfg).unwrap();
        assert_eq!(s.perm, vec![2, 1]);
        assert_eq!(s.paths[0].end(), cfg.paths[0].end());
        assert_eq!(s.paths[0].start, (1, 0));
        assert_eq!(lgv_step_by_sink(&s).unwrap(), cfg);
    }

    #[test]
    fn nested_pair_has_no_crossing() {
        let cfg = PathConfig {
            paths: vec![
                LatticePath::new(Graph::Up, (0, 1), w("NE")),
                LatticePath::new(Graph::Up, (1, 0), w("EN")),
            ],
            perm: vec![1, 2],
        };
        assert_eq!(lgv_step(&cfg), Err(PathError::NonIntersecting));
    }

    #[test]
    fn rotation_is_an_involution() {
        let p = LatticePath::new(Graph::Down, (2, -2), w("SWWS"));
        assert_eq!(rotate180(&p).end(), p.end());
        assert_eq!(rotate180(&rotate180(&p)), p);
        let straight = LatticePath::new(Graph::Down, (0, 0), w("WWW"));
        assert_eq!(rotate180(&straight), straight);
    }

    #[test]
    fn reflected_counts_match_region_counts() {
        let (n, m) = (3i64, 2i64);
        for i in 1..=m {
            for j in 1..=m {
                let a = (i, -i);
                let b = (j + n, n - j);
                let all = paths_between(Graph::Up, a, b);
                let inside = all.iter().filter(|p| in_gamma_prime(p, m)).count();
                let reflected = paths_between(Graph::Up, mirror_point(a, m), b).len();
                assert_eq!(inside, all.len() - reflected);
            }
        }
    }
}
