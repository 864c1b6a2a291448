//! Path models of staircase plane partitions.
//!
//! Two encodings are used. On the down-graph each column becomes a path, and
//! rotating every path turns `(stairPP, S)` into `(stairPP, S̃)`. On the
//! up-graph each level set becomes a path confined to `x − y ≤ 2m+1`;
//! reflecting across `x − y = 2m+2` and recoding the factors yields the
//! `I_m[m..1; m..1]`-indexed product of path sets.

use serde::{Deserialize, Serialize};

use crate::imjm::{eta_i, stair_params, Factors, IElem};
use crate::paths::{
    in_gamma_prime, lgv_step, lgv_step_by_sink, mirror_point, mirror_reflect, paths_between, reverse_complement,
    rotate180, Graph, LatticePath, PathConfig, Point, Step, Word,
};
use crate::pp::{Class, ClassTag, PlanePartition};
use crate::signed::{compose, Compose, Hop, HopCtx, Indexed, Inverse, Side, Sign, Signed, SijError, Sijection};

/// An element of the `I_m`-indexed product: factor `i` lies in
/// `C(2n, n+|η_i|)`.
pub type StairFactored = Indexed<Factors<Word>, IElem>;

fn out_of_stage<T: std::fmt::Debug>(stage: &'static str, x: &T) -> SijError {
    SijError::OutOfStage {
        stage,
        detail: format!("{x:?}"),
    }
}

fn stair_tag(n: usize, m: usize) -> ClassTag {
    ClassTag::new(Class::Stair, n, m as u32)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    crate::imjm::permutations(k)
}

/// Every tuple choosing one path from each list.
fn tuples(lists: &[Vec<LatticePath>]) -> Vec<Vec<LatticePath>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.into_iter()
            .flat_map(|t| {
                list.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Column paths on the down-graph

/// Sources `(i, −i)` and sinks `(2j−n−1, −m−j)` of the column encoding.
pub fn down_source(i: usize) -> Point {
    (i as i64, -(i as i64))
}

pub fn down_sink(n: usize, m: usize, j: usize) -> Point {
    (2 * j as i64 - n as i64 - 1, -(m as i64) - j as i64)
}

/// Column `j` (entries `π_{1,j}, …, π_{n+1−j,j}`) as the word of a path from
/// `(j, −j)`: each entry `e` is a `W` step taken at depth `m − e`.
pub fn encode_column(col: &[u32], m: usize) -> Word {
    let mut w = Word::new();
    let mut depth = 0;
    for &e in col {
        let target = m - e as usize;
        w.extend(std::iter::repeat_n(Step::V, target - depth));
        depth = target;
        w.push(Step::H);
    }
    w.extend(std::iter::repeat_n(Step::V, m - depth));
    w
}

pub fn decode_column(w: &[Step], m: usize) -> Vec<u32> {
    let mut depth = 0;
    let mut col = Vec::new();
    for s in w {
        match s {
            Step::V => depth += 1,
            Step::H => col.push((m - depth) as u32),
        }
    }
    col
}

pub fn down_encode(pi: &PlanePartition, m: usize) -> PathConfig {
    let n = pi.n();
    let paths = (1..=n)
        .map(|j| {
            let col: Vec<u32> = (1..=n + 1 - j).map(|i| pi.get(i, j).expect("staircase cell")).collect();
            LatticePath::new(Graph::Down, down_source(j), encode_column(&col, m))
        })
        .collect();
    PathConfig {
        paths,
        perm: (1..=n).collect(),
    }
}

pub fn down_decode(cfg: &PathConfig, m: usize) -> PlanePartition {
    let n = cfg.paths.len();
    let mut pi = PlanePartition::zero(crate::pp::Kind::Plane, n);
    for (jj, p) in cfg.paths.iter().enumerate() {
        for (ii, v) in decode_column(&p.steps, m).into_iter().enumerate() {
            pi.set(ii + 1, jj + 1, v);
        }
    }
    pi
}

/// All configurations of the column encoding, any permutation.
pub fn down_support(n: usize, m: usize) -> Vec<PathConfig> {
    let mut out = Vec::new();
    for perm in permutations(n) {
        let lists: Vec<Vec<LatticePath>> = (0..n)
            .map(|i| paths_between(Graph::Down, down_source(i + 1), down_sink(n, m, perm[i])))
            .collect();
        out.extend(tuples(&lists).into_iter().map(|paths| PathConfig {
            paths,
            perm: perm.clone(),
        }));
    }
    out
}

/// Number of paths whose last step is vertical (`#S` on the partition side).
pub fn last_vertical(cfg: &PathConfig) -> usize {
    cfg.paths.iter().filter(|p| p.steps.last() == Some(&Step::V)).count()
}

/// Number of paths whose first step is vertical (`#S̃` on the partition side).
pub fn first_vertical(cfg: &PathConfig) -> usize {
    cfg.paths.iter().filter(|p| p.steps.first() == Some(&Step::V)).count()
}

/// `stairPP(n,m) ⇒` signed set of column configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DownLgv {
    pub n: usize,
    pub m: usize,
}

impl Sijection for DownLgv {
    type Dom = PlanePartition;
    type Cod = PathConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("stairPP", "column-paths")
    }

    fn hop(
        &self,
        x: Side<PlanePartition, PathConfig>,
        _ctx: &mut HopCtx,
    ) -> Result<Hop<PlanePartition, PathConfig>, SijError> {
        let to = match x {
            Side::Dom(pi) => Side::Cod(down_encode(&pi, self.m)),
            Side::Cod(cfg) => match lgv_step(&cfg) {
                Ok(next) => Side::Cod(next),
                Err(_) if cfg.sign() == Sign::Pos => Side::Dom(down_decode(&cfg, self.m)),
                Err(_) => return Err(out_of_stage("column-paths", &cfg)),
            },
        };
        Ok(Hop::plain(to))
    }
}

/// Reverses every path of a column configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rotate;

impl Sijection for Rotate {
    type Dom = PathConfig;
    type Cod = PathConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("column-paths", "rotated-column-paths")
    }

    fn hop(&self, x: Side<PathConfig, PathConfig>, _ctx: &mut HopCtx) -> Result<Hop<PathConfig, PathConfig>, SijError> {
        let rot = |c: PathConfig| PathConfig {
            paths: c.paths.iter().map(rotate180).collect(),
            perm: c.perm,
        };
        Ok(Hop::plain(match x {
            Side::Dom(c) => Side::Cod(rot(c)),
            Side::Cod(c) => Side::Dom(rot(c)),
        }))
    }
}

pub type StairRotation = Compose<DownLgv, Compose<Rotate, Inverse<DownLgv>>>;

/// `(stairPP(n,m), S) ⇒ (stairPP(n,m), S̃)`.
pub fn stair_rotation(n: usize, m: usize) -> StairRotation {
    let lgv = DownLgv { n, m };
    compose(lgv, compose(Rotate, Inverse(lgv)))
}

// ---------------------------------------------------------------------------
// Level paths on the up-graph

pub fn up_source(i: usize) -> Point {
    (i as i64, -(i as i64))
}

pub fn up_sink(n: usize, i: usize) -> Point {
    ((i + n) as i64, n as i64 - i as i64)
}

/// Reflected source `a′_j` across `x − y = 2m+2`.
pub fn up_source_mirrored(m: usize, j: usize) -> Point {
    mirror_point(up_source(j), m as i64)
}

/// Which level the `i`-th path encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelOrder {
    /// Path `i` carries the level set `{π ≥ m+1−i}`.
    Descending,
    /// Path `i` carries the level set `{π ≥ i}`.
    Ascending,
}

impl LevelOrder {
    pub fn level(self, m: usize, i: usize) -> u32 {
        match self {
            LevelOrder::Descending => (m + 1 - i) as u32,
            LevelOrder::Ascending => i as u32,
        }
    }
}

/// Row lengths `λ_r = #{c : π_{r,c} ≥ θ}` as a path from `(·,·)` reading rows
/// bottom to top: `H` up to `λ_r`, then `V`; finally `H` up to `n`.
pub fn encode_level(pi: &PlanePartition, theta: u32) -> Word {
    let n = pi.n();
    let mut w = Word::with_capacity(2 * n);
    let mut x = 0;
    for r in (1..=n).rev() {
        let lam = (1..=n + 1 - r).filter(|&c| pi.get(r, c).unwrap() >= theta).count();
        w.extend(std::iter::repeat_n(Step::H, lam.saturating_sub(x)));
        x = x.max(lam);
        w.push(Step::V);
    }
    w.extend(std::iter::repeat_n(Step::H, n - x));
    w
}

/// Row lengths read back from a level word (`λ_1` first).
pub fn decode_level(w: &[Step], n: usize) -> Vec<usize> {
    let mut x = 0;
    let mut lam = Vec::with_capacity(n);
    for s in w {
        match s {
            Step::H => x += 1,
            Step::V => lam.push(x),
        }
    }
    lam.reverse();
    lam
}

pub fn up_encode_with(pi: &PlanePartition, m: usize, order: LevelOrder) -> PathConfig {
    let paths = (1..=m)
        .map(|i| {
            let theta = order.level(m, i);
            LatticePath::new(Graph::Up, up_source(i), encode_level(pi, theta))
        })
        .collect();
    PathConfig {
        paths,
        perm: (1..=m).collect(),
    }
}

pub fn up_encode(pi: &PlanePartition, m: usize) -> PathConfig {
    up_encode_with(pi, m, LevelOrder::Descending)
}

/// Inverse of [`up_encode_with`]; the entry at `(r,c)` counts the levels
/// whose row `r` reaches column `c`.
pub fn up_decode_with(cfg: &PathConfig, n: usize, m: usize, order: LevelOrder) -> PlanePartition {
    let mut pi = PlanePartition::zero(crate::pp::Kind::Plane, n);
    let lams: Vec<(u32, Vec<usize>)> = cfg
        .paths
        .iter()
        .enumerate()
        .map(|(k, p)| (order.level(m, k + 1), decode_level(&p.steps, n)))
        .collect();
    for r in 1..=n {
        for c in 1..=n + 1 - r {
            let v = lams
                .iter()
                .filter(|(_, lam)| lam[r - 1] >= c)
                .map(|(th, _)| *th)
                .max()
                .unwrap_or(0);
            pi.set(r, c, v);
        }
    }
    pi
}

pub fn up_decode(cfg: &PathConfig, n: usize, m: usize) -> PlanePartition {
    up_decode_with(cfg, n, m, LevelOrder::Descending)
}

/// Sink-indexed configurations inside `x − y ≤ 2m+1`, any permutation:
/// path `i` ends at `b_i` and starts at `a_{perm[i]}`.
pub fn up_support(n: usize, m: usize) -> Vec<PathConfig> {
    let mut out = Vec::new();
    for perm in permutations(m) {
        let lists: Vec<Vec<LatticePath>> = (0..m)
            .map(|i| {
                paths_between(Graph::Up, up_source(perm[i]), up_sink(n, i + 1))
                    .into_iter()
                    .filter(|p| in_gamma_prime(p, m as i64))
                    .collect()
            })
            .collect();
        out.extend(tuples(&lists).into_iter().map(|paths| PathConfig {
            paths,
            perm: perm.clone(),
        }));
    }
    out
}

/// Length of the final horizontal run of a word.
pub fn trailing_h(w: &[Step]) -> usize {
    w.iter().rev().take_while(|&&s| s == Step::H).count()
}

/// Number of edges on the line `y = n−1`: the final horizontal run of the
/// path ending at `b_1`.
pub fn up_stat(cfg: &PathConfig) -> usize {
    cfg.paths.first().map_or(0, |p| trailing_h(&p.steps))
}

/// `stairPP(n,m) ⇒` signed set of level configurations in `x − y ≤ 2m+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpLgv {
    pub n: usize,
    pub m: usize,
    pub order: LevelOrder,
}

impl UpLgv {
    pub fn new(n: usize, m: usize) -> Self {
        UpLgv {
            n,
            m,
            order: LevelOrder::Descending,
        }
    }
}

impl Sijection for UpLgv {
    type Dom = PlanePartition;
    type Cod = PathConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("stairPP", "level-paths")
    }

    fn hop(
        &self,
        x: Side<PlanePartition, PathConfig>,
        _ctx: &mut HopCtx,
    ) -> Result<Hop<PlanePartition, PathConfig>, SijError> {
        let to = match x {
            Side::Dom(pi) => Side::Cod(up_encode_with(&pi, self.m, self.order)),
            Side::Cod(cfg) => match lgv_step_by_sink(&cfg) {
                Ok(next) => Side::Cod(next),
                Err(_) if cfg.sign() == Sign::Pos => Side::Dom(up_decode_with(&cfg, self.n, self.m, self.order)),
                Err(_) => return Err(out_of_stage("level-paths", &cfg)),
            },
        };
        Ok(Hop::plain(to))
    }
}

// ---------------------------------------------------------------------------
// Reflection

/// A sink-indexed configuration where path `i` starts at `a_{perm[i]}` when
/// `e_i = 0` and at the reflected source `a′_{perm[i]}` when `e_i = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MirrorConfig {
    pub e: Vec<u8>,
    pub cfg: PathConfig,
}

impl Signed for MirrorConfig {
    fn sign(&self) -> Sign {
        self.cfg.sign() * Sign::from_parity(self.e.iter().filter(|&&x| x == 1).count() % 2 == 1)
    }
}

/// All mirror configurations, unrestricted paths.
pub fn mirror_support(n: usize, m: usize) -> Vec<MirrorConfig> {
    let mut out = Vec::new();
    for perm in permutations(m) {
        for bits in 0..1u32 << m {
            let e: Vec<u8> = (0..m).map(|i| ((bits >> i) & 1) as u8).collect();
            let lists: Vec<Vec<LatticePath>> = (0..m)
                .map(|i| {
                    let a = if e[i] == 0 {
                        up_source(perm[i])
                    } else {
                        up_source_mirrored(m, perm[i])
                    };
                    paths_between(Graph::Up, a, up_sink(n, i + 1))
                })
                .collect();
            out.extend(tuples(&lists).into_iter().map(|paths| MirrorConfig {
                e: e.clone(),
                cfg: PathConfig {
                    paths,
                    perm: perm.clone(),
                },
            }));
        }
    }
    out
}

/// Confined configurations `⇒ ∏_i (C(a_{σ_i} → b_i) − C(a′_{σ_i} → b_i))`:
/// the first path that starts at a reflected source or leaves the region is
/// reflected across `x − y = 2m+2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MirrorProduct {
    pub n: usize,
    pub m: usize,
}

impl Sijection for MirrorProduct {
    type Dom = PathConfig;
    type Cod = MirrorConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("level-paths", "mirrored-paths")
    }

    fn hop(
        &self,
        x: Side<PathConfig, MirrorConfig>,
        _ctx: &mut HopCtx,
    ) -> Result<Hop<PathConfig, MirrorConfig>, SijError> {
        let m = self.m as i64;
        let to = match x {
            Side::Dom(cfg) => Side::Cod(MirrorConfig {
                e: vec![0; cfg.paths.len()],
                cfg,
            }),
            Side::Cod(mc) => {
                let k = (0..mc.e.len()).find(|&k| mc.e[k] == 1 || !in_gamma_prime(&mc.cfg.paths[k], m));
                match k {
                    None => Side::Dom(mc.cfg),
                    Some(k) => {
                        let mut next = mc.clone();
                        next.cfg.paths[k] =
                            mirror_reflect(&mc.cfg.paths[k], m).map_err(|_| out_of_stage("mirrored-paths", &mc))?;
                        next.e[k] ^= 1;
                        Side::Cod(next)
                    }
                }
            }
        };
        Ok(Hop::plain(to))
    }
}

// ---------------------------------------------------------------------------
// Recoding as an I-indexed product

/// `η_i` of a mirror configuration read from its index.
pub fn stair_eta(ie: &IElem) -> Vec<i64> {
    let a = stair_params(ie.sigma.len());
    eta_i(ie, &a, &a)
}

/// Mirror configurations `⇒ ⨆_{α ∈ I_m[m..1; m..1]} ∏_i C(2n, n+|η_i|(α))`.
/// A factor with `η_i < 0` is stored reversed and complemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recode {
    pub n: usize,
    pub m: usize,
}

impl Recode {
    pub fn to_factored(&self, mc: &MirrorConfig) -> StairFactored {
        let index = IElem {
            sigma: mc.cfg.perm.clone(),
            t: mc.e.clone(),
        };
        let eta = stair_eta(&index);
        let words = mc
            .cfg
            .paths
            .iter()
            .zip(&eta)
            .map(|(p, &h)| {
                if h < 0 {
                    reverse_complement(&p.steps)
                } else {
                    p.steps.clone()
                }
            })
            .collect();
        Indexed {
            elem: Factors(words),
            index,
        }
    }

    pub fn from_factored(&self, f: &StairFactored) -> MirrorConfig {
        let eta = stair_eta(&f.index);
        let paths = f
            .elem
            .0
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let j = f.index.sigma[i];
                let a = if f.index.t[i] == 0 {
                    up_source(j)
                } else {
                    up_source_mirrored(self.m, j)
                };
                let steps = if eta[i] < 0 { reverse_complement(w) } else { w.clone() };
                LatticePath::new(Graph::Up, a, steps)
            })
            .collect();
        MirrorConfig {
            e: f.index.t.clone(),
            cfg: PathConfig {
                paths,
                perm: f.index.sigma.clone(),
            },
        }
    }
}

impl Sijection for Recode {
    type Dom = MirrorConfig;
    type Cod = StairFactored;

    fn stages(&self) -> (&'static str, &'static str) {
        ("mirrored-paths", "I-factored")
    }

    fn hop(
        &self,
        x: Side<MirrorConfig, StairFactored>,
        _ctx: &mut HopCtx,
    ) -> Result<Hop<MirrorConfig, StairFactored>, SijError> {
        Ok(Hop::plain(match x {
            Side::Dom(mc) => Side::Cod(self.to_factored(&mc)),
            Side::Cod(f) => Side::Dom(self.from_factored(&f)),
        }))
    }
}

/// All factored elements: every index with every factor tuple.
pub fn factored_support(n: usize, m: usize) -> Vec<StairFactored> {
    let mut out = Vec::new();
    for index in crate::imjm::i_support(m) {
        let lists: Vec<Vec<Word>> = stair_eta(&index)
            .iter()
            .map(|h| crate::paths::enumerate_c(2 * n, n as i64 + h.abs()))
            .collect();
        let tuples = lists.iter().fold(vec![Vec::new()], |acc: Vec<Vec<Word>>, l| {
            acc.into_iter()
                .flat_map(|t| {
                    l.iter().map(move |w| {
                        let mut t = t.clone();
                        t.push(w.clone());
                        t
                    })
                })
                .collect()
        });
        out.extend(tuples.into_iter().map(|ws| Indexed {
            elem: Factors(ws),
            index: index.clone(),
        }));
    }
    out
}

/// The statistic carried by a factored element: the final horizontal run of
/// the first factor.
pub fn factored_stat(f: &Indexed<Factors<Word>, impl Sized>) -> usize {
    f.elem.0.first().map_or(0, |w| trailing_h(w))
}

pub type StairChain = Compose<UpLgv, Compose<MirrorProduct, Recode>>;

/// `(stairPP(n,m), S̃) ⇒ ⨆_{α ∈ I_m[m..1; m..1]} ∏_i C(2n, n+|η_i|(α))`.
pub fn stair_chain(n: usize, m: usize) -> StairChain {
    compose(UpLgv::new(n, m), compose(MirrorProduct { n, m }, Recode { n, m }))
}

/// Number of first-row entries different from `m`.
pub fn s_tilde_count(pi: &PlanePartition, m: usize) -> usize {
    crate::pp::stat(&stair_tag(pi.n(), m), pi, crate::pp::Stat::STilde).map_or(0, |s| s.len())
}

/// Number of non-zero anti-diagonal entries.
pub fn s_count(pi: &PlanePartition, m: usize) -> usize {
    crate::pp::stat(&stair_tag(pi.n(), m), pi, crate::pp::Stat::S).map_or(0, |s| s.len())
}
