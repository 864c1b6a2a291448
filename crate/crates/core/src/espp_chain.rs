//! Path model of even shifted plane partitions and its reduction to the
//! `J_m⟨1..2m⟩`-indexed product of path sets.
//!
//! Each threshold `θ` of an eSPP becomes a path whose vertical letters mark
//! the non-zero row lengths of `{π ≥ θ}`. Evenness of the diagonal pairs the
//! `2m` paths into blocks whose sources are adjacent; the blocks are sorted,
//! configurations with a repeated block source cancel, and each block is
//! glued into a single path.

use serde::{Deserialize, Serialize};

use crate::imjm::{canonicalize, espp_params, eta_j, permutations, s_prime, Factors, JElem};
use crate::paths::{
    enumerate_c, lgv_step, north_count, paths_between, reverse_complement, Graph, LatticePath, PathConfig, Point, Step,
    Word,
};
use crate::pp::{Kind, PlanePartition};
use crate::signed::{compose, perm_sign, Compose, Hop, HopCtx, Indexed, Side, Sign, Signed, SijError, Sijection};

/// An element of the `J_m`-indexed product: factor `i` lies in
/// `C(2n, n+|η_i|)`.
pub type EsppFactored = Indexed<Factors<Word>, JElem>;

fn out_of_stage<T: std::fmt::Debug>(stage: &'static str, x: &T) -> SijError {
    SijError::OutOfStage {
        stage,
        detail: format!("{x:?}"),
    }
}

pub fn source(n: usize, i: usize) -> Point {
    (i as i64, n as i64 - i as i64)
}

pub fn sink(n: usize, k: usize) -> Point {
    ((k + n) as i64, n as i64 - k as i64)
}

/// Which threshold the `k`-th path encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdOrder {
    /// Path `k` carries `{π ≥ 2m+1−k}`.
    Descending,
    /// Path `k` carries `{π ≥ k}`.
    Ascending,
}

impl ThresholdOrder {
    pub fn threshold(self, m: usize, k: usize) -> u32 {
        match self {
            ThresholdOrder::Descending => (2 * m + 1 - k) as u32,
            ThresholdOrder::Ascending => k as u32,
        }
    }
}

/// Paths `k = 1..2m`; path `k` runs from `a_{τ_k}` to `b_{σ_k}` where
/// `τ_{2i−1} = τ̃_i` and `τ_{2i} = τ̃_i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TauConfig {
    pub tau: Vec<usize>,
    pub sigma: Vec<usize>,
    pub paths: Vec<Word>,
}

impl Signed for TauConfig {
    fn sign(&self) -> Sign {
        perm_sign(&self.sigma)
    }
}

impl TauConfig {
    pub fn full_tau(&self) -> Vec<usize> {
        self.tau.iter().flat_map(|&t| [t, t + 1]).collect()
    }

    pub fn to_paths(&self, n: usize) -> PathConfig {
        let paths = self
            .full_tau()
            .into_iter()
            .zip(&self.paths)
            .map(|(t, w)| LatticePath::new(Graph::Up, source(n, t), w.clone()))
            .collect();
        PathConfig {
            paths,
            perm: self.sigma.clone(),
        }
    }

    fn from_paths(tau: Vec<usize>, cfg: PathConfig) -> Self {
        TauConfig {
            tau,
            sigma: cfg.perm,
            paths: cfg.paths.into_iter().map(|p| p.steps).collect(),
        }
    }
}

/// Non-zero row lengths of `{π ≥ θ}`.
pub fn parts(pi: &PlanePartition, theta: u32) -> Vec<usize> {
    let n = pi.n();
    (1..=n)
        .map(|r| (r..=n).filter(|&c| pi.get(r, c).unwrap() >= theta).count())
        .filter(|&l| l > 0)
        .collect()
}

/// Letter `s` is `V` exactly when `s` is a part.
pub fn encode_threshold(pi: &PlanePartition, theta: u32) -> Word {
    let p = parts(pi, theta);
    (1..=pi.n())
        .map(|s| if p.contains(&s) { Step::V } else { Step::H })
        .collect()
}

pub fn encode_with(pi: &PlanePartition, m: usize, order: ThresholdOrder) -> (Vec<usize>, Vec<Word>) {
    let mut tau = Vec::with_capacity(2 * m);
    let mut words = Vec::with_capacity(2 * m);
    for k in 1..=2 * m {
        let w = encode_threshold(pi, order.threshold(m, k));
        tau.push(k + north_count(&w));
        words.push(w);
    }
    (tau, words)
}

/// `τ` and words back to the partition: `π_{r,c}` is the largest threshold
/// whose `r`-th part reaches column `c`.
pub fn decode_with(words: &[Word], n: usize, m: usize, order: ThresholdOrder) -> PlanePartition {
    let mut pi = PlanePartition::zero(Kind::Shifted, n);
    let lens: Vec<(u32, Vec<usize>)> = words
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let mut p: Vec<usize> = (1..=n).filter(|&s| w[s - 1] == Step::V).collect();
            p.reverse();
            (order.threshold(m, k + 1), p)
        })
        .collect();
    for r in 1..=n {
        for c in r..=n {
            let v = lens
                .iter()
                .filter(|(_, p)| p.get(r - 1).is_some_and(|&l| l > c - r))
                .map(|(th, _)| *th)
                .max()
                .unwrap_or(0);
            pi.set(r, c, v);
        }
    }
    pi
}

/// `eSPP(n,m) ⇒` configurations with strictly increasing `τ̃` and any `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EsppLgv {
    pub n: usize,
    pub m: usize,
    pub order: ThresholdOrder,
}

impl EsppLgv {
    pub fn new(n: usize, m: usize) -> Self {
        EsppLgv {
            n,
            m,
            order: ThresholdOrder::Descending,
        }
    }

    pub fn encode(&self, pi: &PlanePartition) -> Option<TauConfig> {
        let (tau, paths) = encode_with(pi, self.m, self.order);
        let paired = tau.chunks(2).all(|c| c[1] == c[0] + 1);
        paired.then(|| TauConfig {
            tau: tau.iter().step_by(2).copied().collect(),
            sigma: (1..=2 * self.m).collect(),
            paths,
        })
    }
}

impl Sijection for EsppLgv {
    type Dom = PlanePartition;
    type Cod = TauConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("eSPP", "threshold-paths")
    }

    fn hop(
        &self,
        x: Side<PlanePartition, TauConfig>,
        _ctx: &mut HopCtx,
    ) -> Result<Hop<PlanePartition, TauConfig>, SijError> {
        let to = match x {
            Side::Dom(pi) => Side::Cod(self.encode(&pi).ok_or_else(|| out_of_stage("eSPP", &pi))?),
            Side::Cod(tc) => match lgv_step(&tc.to_paths(self.n)) {
                Ok(next) => Side::Cod(TauConfig::from_paths(tc.tau, next)),
                Err(_) if tc.sign() == Sign::Pos => Side::Dom(decode_with(&tc.paths, self.n, self.m, self.order)),
                Err(_) => return Err(out_of_stage("threshold-paths", &tc)),
            },
        };
        Ok(Hop::plain(to))
    }
}

/// Sorting blocks by the smaller sink: increasing `τ̃` with `σ ∈ S_{2m}` on
/// one side, distinct `τ̃` with `σ ∈ S′_{2m}` on the other.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Reindex;

fn permute_blocks(tc: &TauConfig, order: &[usize]) -> TauConfig {
    TauConfig {
        tau: order.iter().map(|&b| tc.tau[b]).collect(),
        sigma: order
            .iter()
            .flat_map(|&b| [tc.sigma[2 * b], tc.sigma[2 * b + 1]])
            .collect(),
        paths: order
            .iter()
            .flat_map(|&b| [tc.paths[2 * b].clone(), tc.paths[2 * b + 1].clone()])
            .collect(),
    }
}

fn sort_blocks_by<K: Ord>(tc: &TauConfig, key: impl Fn(usize) -> K) -> TauConfig {
    let mut order: Vec<usize> = (0..tc.tau.len()).collect();
    order.sort_by_key(|&b| key(b));
    permute_blocks(tc, &order)
}

fn block_min(tc: &TauConfig, b: usize) -> usize {
    tc.sigma[2 * b].min(tc.sigma[2 * b + 1])
}

impl Sijection for Reindex {
    type Dom = TauConfig;
    type Cod = TauConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("threshold-paths", "sorted-blocks")
    }

    fn hop(&self, x: Side<TauConfig, TauConfig>, _ctx: &mut HopCtx) -> Result<Hop<TauConfig, TauConfig>, SijError> {
        Ok(Hop::plain(match x {
            Side::Dom(tc) => Side::Cod(sort_blocks_by(&tc, |b| block_min(&tc, b))),
            Side::Cod(tc) => Side::Dom(sort_blocks_by(&tc, |b| tc.tau[b])),
        }))
    }
}

/// Configurations with distinct `τ̃` inside those with arbitrary `τ̃`: when
/// two blocks share `τ̃`, their second paths (which share a source) trade
/// sinks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DupCancel;

/// The pair of blocks `(j, k)` with `τ̃_j = τ̃_k` and `σ_{2j−1} < σ_{2k−1}`
/// minimising `(τ̃, σ_{2j−1}, σ_{2k−1})`.
pub fn duplicate_pair(tc: &TauConfig) -> Option<(usize, usize)> {
    let m = tc.tau.len();
    type Key = (usize, usize, usize);
    let mut best: Option<(Key, (usize, usize))> = None;
    for j in 0..m {
        for k in 0..m {
            if j != k && tc.tau[j] == tc.tau[k] && tc.sigma[2 * j] < tc.sigma[2 * k] {
                let key = (tc.tau[j], tc.sigma[2 * j], tc.sigma[2 * k]);
                if best.as_ref().is_none_or(|(b, _)| key < *b) {
                    best = Some((key, (j, k)));
                }
            }
        }
    }
    best.map(|(_, p)| p)
}

impl Sijection for DupCancel {
    type Dom = TauConfig;
    type Cod = TauConfig;

    fn stages(&self) -> (&'static str, &'static str) {
        ("sorted-blocks", "free-blocks")
    }

    fn hop(&self, x: Side<TauConfig, TauConfig>, _ctx: &mut HopCtx) -> Result<Hop<TauConfig, TauConfig>, SijError> {
        Ok(Hop::plain(match x {
            Side::Dom(tc) => Side::Cod(tc),
            Side::Cod(tc) => match duplicate_pair(&tc) {
                None => Side::Dom(tc),
                Some((j, k)) => {
                    let mut next = tc.clone();
                    next.sigma.swap(2 * j + 1, 2 * k + 1);
                    next.paths.swap(2 * j + 1, 2 * k + 1);
                    let (canon, _) = canonicalize(&next.sigma);
                    let out = sort_blocks_by(&next, |b| block_min(&next, b));
                    debug_assert_eq!(out.sigma, canon);
                    Side::Cod(out)
                }
            },
        }))
    }
}

/// `η_i = σ_{2i} − σ_{2i−1} − 1`.
pub fn espp_eta(sigma: &[usize]) -> Vec<i64> {
    eta_j(sigma, &espp_params(sigma.len() / 2))
}

/// Glues each block into one path of `C(2n, n+|η_i|)`: the second path,
/// reversed and with letters exchanged, followed by the first path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Concat {
    pub n: usize,
}

impl Concat {
    pub fn glue(&self, tc: &TauConfig) -> EsppFactored {
        let eta = espp_eta(&tc.sigma);
        let words = (0..tc.tau.len())
            .map(|i| {
                let mut w: Word = tc.paths[2 * i + 1].iter().rev().map(|s| s.flip()).collect();
                w.extend_from_slice(&tc.paths[2 * i]);
                if eta[i] < 0 {
                    reverse_complement(&w)
                } else {
                    w
                }
            })
            .collect();
        Indexed {
            elem: Factors(words),
            index: JElem {
                sigma: tc.sigma.clone(),
            },
        }
    }

    pub fn cut(&self, f: &EsppFactored) -> TauConfig {
        let n = self.n;
        let sigma = f.index.sigma.clone();
        let eta = espp_eta(&sigma);
        let mut tau = Vec::new();
        let mut paths = Vec::new();
        for (i, w) in f.elem.0.iter().enumerate() {
            let w = if eta[i] < 0 { reverse_complement(w) } else { w.clone() };
            let (head, tail) = w.split_at(n);
            let second: Word = head.iter().rev().map(|s| s.flip()).collect();
            let h = head.iter().filter(|&&s| s == Step::H).count();
            tau.push(sigma[2 * i + 1] - 1 + h);
            paths.push(tail.to_vec());
            paths.push(second);
        }
        TauConfig { tau, sigma, paths }
    }
}

impl Sijection for Concat {
    type Dom = TauConfig;
    type Cod = EsppFactored;

    fn stages(&self) -> (&'static str, &'static str) {
        ("free-blocks", "J-factored")
    }

    fn hop(
        &self,
        x: Side<TauConfig, EsppFactored>,
        _ctx: &mut HopCtx,
    ) -> Result<Hop<TauConfig, EsppFactored>, SijError> {
        Ok(Hop::plain(match x {
            Side::Dom(tc) => Side::Cod(self.glue(&tc)),
            Side::Cod(f) => Side::Dom(self.cut(&f)),
        }))
    }
}

pub type EsppChain = Compose<EsppLgv, Compose<Reindex, Compose<DupCancel, Concat>>>;

/// `(eSPP(n,m), S) ⇒ ⨆_{σ ∈ J_m⟨1..2m⟩} ∏_i C(2n, n+|η_i|(σ))`.
pub fn espp_chain(n: usize, m: usize) -> EsppChain {
    compose(EsppLgv::new(n, m), compose(Reindex, compose(DupCancel, Concat { n })))
}

// ---------------------------------------------------------------------------
// Supports

/// Largest admissible `τ̃`.
pub fn tau_max(n: usize, m: usize) -> usize {
    n + 2 * m - 1
}

fn configs_for(n: usize, tau: &[usize], sigma: &[usize]) -> Vec<TauConfig> {
    let full: Vec<usize> = tau.iter().flat_map(|&t| [t, t + 1]).collect();
    let lists: Vec<Vec<Word>> = full
        .iter()
        .zip(sigma)
        .map(|(&t, &s)| {
            paths_between(Graph::Up, source(n, t), sink(n, s))
                .into_iter()
                .map(|p| p.steps)
                .collect()
        })
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
    tuples
        .into_iter()
        .map(|paths| TauConfig {
            tau: tau.to_vec(),
            sigma: sigma.to_vec(),
            paths,
        })
        .collect()
}

fn tau_vectors(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t: Vec<usize>| {
                (1..=tau_max(n, m)).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect()
    })
}

/// Strictly increasing `τ̃`, any `σ ∈ S_{2m}`.
pub fn lgv_support(n: usize, m: usize) -> Vec<TauConfig> {
    let taus: Vec<Vec<usize>> = tau_vectors(n, m)
        .into_iter()
        .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
        .collect();
    let sigmas = permutations(2 * m);
    taus.iter()
        .flat_map(|t| sigmas.iter().flat_map(move |s| configs_for(n, t, s)))
        .collect()
}

/// Distinct `τ̃`, `σ ∈ S′_{2m}`.
pub fn sorted_support(n: usize, m: usize) -> Vec<TauConfig> {
    let sigmas = s_prime(m);
    tau_vectors(n, m)
        .into_iter()
        .filter(|t| (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i] != t[j])))
        .flat_map(|t| {
            sigmas
                .iter()
                .flat_map(move |s| configs_for(n, &t, s))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Any `τ̃`, `σ ∈ S′_{2m}`.
pub fn free_support(n: usize, m: usize) -> Vec<TauConfig> {
    let sigmas = s_prime(m);
    tau_vectors(n, m)
        .into_iter()
        .flat_map(|t| {
            sigmas
                .iter()
                .flat_map(move |s| configs_for(n, &t, s))
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn factored_support(n: usize, m: usize) -> Vec<EsppFactored> {
    let mut out = Vec::new();
    for sigma in s_prime(m) {
        let lists: Vec<Vec<Word>> = espp_eta(&sigma)
            .iter()
            .map(|h| enumerate_c(2 * n, n as i64 + h.abs()))
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
            index: JElem { sigma: sigma.clone() },
        }));
    }
    out
}

/// Number of first-row entries below `2m`.
pub fn s_count(pi: &PlanePartition, m: usize) -> usize {
    (1..=pi.n()).filter(|&j| pi.get(1, j) != Some(2 * m as u32)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::parse_word;
    use crate::pp::{enumerate, Class, ClassTag};
    use crate::signed::check_validity;
    use crate::stair_chain::factored_stat;

    fn espp(n: usize, m: usize) -> Vec<PlanePartition> {
        enumerate(&ClassTag::new(Class::Espp, n, m as u32)).unwrap()
    }

    #[test]
    fn threshold_words() {
        let pi = PlanePartition::shifted(vec![vec![2, 1], vec![0]]);
        assert_eq!(encode_threshold(&pi, 2), parse_word("VH").unwrap());
        assert_eq!(encode_threshold(&pi, 1), parse_word("HV").unwrap());
        let (tau, _) = encode_with(&pi, 1, ThresholdOrder::Descending);
        assert_eq!(tau, vec![2, 3]);
    }

    #[test]
    fn encoding_round_trips() {
        for (n, m) in [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2)] {
            let lgv = EsppLgv::new(n, m);
            for pi in espp(n, m) {
                let tc = lgv.encode(&pi).expect("blocks pair up");
                assert!(tc.to_paths(n).is_non_intersecting(), "{pi:?}");
                assert_eq!(decode_with(&tc.paths, n, m, lgv.order), pi);
            }
        }
    }

    #[test]
    fn lgv_is_valid() {
        for (n, m) in [(1, 1), (2, 1), (3, 1), (2, 2)] {
            check_validity(&EsppLgv::new(n, m), &espp(n, m), &lgv_support(n, m)).unwrap();
        }
    }

    #[test]
    fn reindex_is_a_bijection() {
        for (n, m) in [(2, 1), (2, 2)] {
            let dom = lgv_support(n, m);
            let cod = sorted_support(n, m);
            assert_eq!(dom.len(), cod.len());
            check_validity(&Reindex, &dom, &cod).unwrap();
        }
    }

    #[test]
    fn duplicate_cancellation_is_valid() {
        for (n, m) in [(1, 1), (2, 2), (1, 2)] {
            check_validity(&DupCancel, &sorted_support(n, m), &free_support(n, m)).unwrap();
        }
    }

    #[test]
    fn glue_is_a_bijection() {
        for (n, m) in [(1, 1), (2, 1), (2, 2)] {
            let dom = free_support(n, m);
            let cod = factored_support(n, m);
            assert_eq!(dom.len(), cod.len());
            check_validity(&Concat { n }, &dom, &cod).unwrap();
        }
    }

    #[test]
    fn chain_small() {
        // eSPP(1,1) = {(0), (2)} lands on σ = id with |η_1| = 0.
        let ch = espp_chain(1, 1);
        for v in [0, 2] {
            let pi = PlanePartition::shifted(vec![vec![v]]);
            let f = ch.apply(Side::Dom(pi.clone())).unwrap().cod().unwrap();
            assert_eq!(f.index, JElem { sigma: vec![1, 2] });
            assert_eq!(factored_stat(&f), s_count(&pi, 1));
        }
    }

    #[test]
    fn chain_valid_and_compatible() {
        for (n, m) in [(2, 1), (3, 1), (2, 2)] {
            let dom = espp(n, m);
            let ch = espp_chain(n, m);
            check_validity(&ch, &dom, &factored_support(n, m)).unwrap();
            for pi in &dom {
                let f = ch.apply(Side::Dom(pi.clone())).unwrap().cod().unwrap();
                assert_eq!(factored_stat(&f), s_count(pi, m), "{pi:?}");
            }
        }
    }

    #[test]
    fn thresholds_must_descend() {
        for (n, m) in [(2, 1), (3, 2)] {
            let lgv = EsppLgv {
                n,
                m,
                order: ThresholdOrder::Ascending,
            };
            let bad = espp(n, m).iter().any(|pi| match lgv.encode(pi) {
                None => true,
                Some(tc) => !tc.to_paths(n).is_non_intersecting(),
            });
            assert!(bad);
        }
    }
}
