//! The signed index sets `I_m[a; b]` and `J_m⟨x⟩`, their `η` statistics, and
//! the sijections assembling `I_m[m..1; m..1] ⇒ J_m⟨1..2m⟩` together with the
//! per-element slot permutations.
//!
//! Elements carry only their combinatorial data (`σ`, `t`, `u`); parameter
//! arrays live on the sijection that interprets them.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::signed::{
    compose, perm_sign, Compose, Hop, HopCtx, IndexFamily, Indexed, Inverse, Product, Side, Sign, Signed,
    SignedInterval, SijError, Sijection, SlotPerm,
};

// ---------------------------------------------------------------------------
// Elements

/// `(σ, t) ∈ S_m × {0,1}^m`, sign `sgn σ · ∏ (−1)^{t_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IElem {
    pub sigma: Vec<usize>,
    pub t: Vec<u8>,
}

impl Signed for IElem {
    fn sign(&self) -> Sign {
        perm_sign(&self.sigma) * Sign::from_parity(self.t.iter().filter(|&&x| x == 1).count() % 2 == 1)
    }
}

/// `σ ∈ S′_{2m}`, sign `sgn σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JElem {
    pub sigma: Vec<usize>,
}

impl Signed for JElem {
    fn sign(&self) -> Sign {
        perm_sign(&self.sigma)
    }
}

/// An element `(u, σ)` of `⨆_{u_1=1}^{b_1} ⋯ ⨆_{u_k=1}^{b_k} J⟨…⟩`; `u[l-1]`
/// is `u_l`. Sign `sgn σ · ∏ ε(u_l)` with `ε(u) = −` when `u ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RElem {
    pub u: Vec<i64>,
    pub sigma: Vec<usize>,
}

fn eps(u: i64) -> Sign {
    if u >= 1 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

impl Signed for RElem {
    fn sign(&self) -> Sign {
        self.u.iter().fold(perm_sign(&self.sigma), |s, &u| s * eps(u))
    }
}

/// `η_i(σ, t) = a_i − (−1)^{t_i} b_{σ_i}`.
pub fn eta_i(e: &IElem, a: &[i64], b: &[i64]) -> Vec<i64> {
    (0..e.sigma.len())
        .map(|i| {
            let bs = b[e.sigma[i] - 1];
            if e.t[i] == 0 {
                a[i] - bs
            } else {
                a[i] + bs
            }
        })
        .collect()
}

/// `η_i(σ) = x_{σ_{2i}} − x_{σ_{2i−1}} − 1`.
pub fn eta_j(sigma: &[usize], x: &[i64]) -> Vec<i64> {
    sigma.chunks(2).map(|c| x[c[1] - 1] - x[c[0] - 1] - 1).collect()
}

pub fn abs_all(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| x.abs()).collect()
}

/// Parameters `(1, 1+a_1−a_2, …, 1+a_1−a_m, a_1−b_m+2u_m, …, a_1−b_1+2u_1)`.
pub fn r_params(a: &[i64], b: &[i64], u: &[i64]) -> Vec<i64> {
    let m = a.len();
    let mut x: Vec<i64> = (0..m).map(|i| 1 + a[0] - a[i]).collect();
    x.extend((0..m).rev().map(|l| a[0] - b[l] + 2 * u[l]));
    x
}

/// Translation `J_m⟨x⟩ = J_m⟨x + d⟩`: the identity on `S′_{2m}`.
pub fn translate(x: &[i64], d: i64) -> Vec<i64> {
    x.iter().map(|v| v + d).collect()
}

// ---------------------------------------------------------------------------
// Permutations

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v + 1);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

pub fn is_s_prime(sigma: &[usize]) -> bool {
    let mins: Vec<usize> = sigma.chunks(2).map(|c| c[0].min(c[1])).collect();
    mins.windows(2).all(|w| w[0] < w[1])
}

/// `S′_{2m}` in lexicographic order.
pub fn s_prime(m: usize) -> Vec<Vec<usize>> {
    permutations(2 * m).into_iter().filter(|s| is_s_prime(s)).collect()
}

/// Sorts the blocks `(σ_{2i−1}, σ_{2i})` by their minima. Returns the
/// representative and the slot permutation (old block index ↦ new index).
pub fn canonicalize(sigma: &[usize]) -> (Vec<usize>, SlotPerm) {
    let mut order: Vec<usize> = (0..sigma.len() / 2).collect();
    order.sort_by_key(|&k| sigma[2 * k].min(sigma[2 * k + 1]));
    let mut out = Vec::with_capacity(sigma.len());
    let mut images = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        out.extend_from_slice(&sigma[2 * old..2 * old + 2]);
        images[old] = new;
    }
    (out, SlotPerm::from_images(images))
}

/// Splitting `σ ∈ S′_{2m}` along its first block: `i` is the partner of the
/// value 1, `swapped` records `σ_2 = 1`, and `rest ∈ S′_{2m−2}` is the
/// renumbered remainder. `sgn σ = (−1)^i · sgn ρ · sgn rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub partner: usize,
    pub swapped: bool,
    pub rest: Vec<usize>,
}

pub fn split_first_block(sigma: &[usize]) -> Split {
    let swapped = sigma[1] == 1;
    debug_assert!(swapped || sigma[0] == 1);
    let partner = if swapped { sigma[0] } else { sigma[1] };
    let rest = sigma[2..]
        .iter()
        .map(|&v| if v < partner { v - 1 } else { v - 2 })
        .collect();
    Split { partner, swapped, rest }
}

pub fn join_first_block(s: &Split) -> Vec<usize> {
    let mut out = if s.swapped {
        vec![s.partner, 1]
    } else {
        vec![1, s.partner]
    };
    out.extend(s.rest.iter().map(|&v| if v + 1 < s.partner { v + 1 } else { v + 2 }));
    out
}

fn remove_value(sigma: &[usize], j: usize) -> Vec<usize> {
    sigma
        .iter()
        .filter(|&&v| v != j)
        .map(|&v| if v > j { v - 1 } else { v })
        .collect()
}

fn insert_front(j: usize, rest: &[usize]) -> Vec<usize> {
    let mut out = vec![j];
    out.extend(rest.iter().map(|&v| if v >= j { v + 1 } else { v }));
    out
}

fn without(v: &[i64], idx: usize) -> Vec<i64> {
    let mut w = v.to_vec();
    w.remove(idx);
    w
}

fn with_inserted(v: &[i64], idx: usize, x: i64) -> Vec<i64> {
    let mut w = v.to_vec();
    w.insert(idx, x);
    w
}

fn out_of_stage<T: Debug>(stage: &'static str, x: &T) -> SijError {
    SijError::OutOfStage {
        stage,
        detail: format!("{x:?}"),
    }
}

// ---------------------------------------------------------------------------
// Telescoping

/// `(u, ρ) ∈ ⨆_u J_1⟨1, x+2u⟩`; sign `ε(u) · sgn ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TeleElem {
    pub u: i64,
    pub swapped: bool,
}

impl Signed for TeleElem {
    fn sign(&self) -> Sign {
        eps(self.u) * Sign::from_parity(self.swapped)
    }
}

/// The two elements of `({|x|}, {|x+2b|})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Surv {
    Pos,
    Neg,
}

impl Signed for Surv {
    fn sign(&self) -> Sign {
        match self {
            Surv::Pos => Sign::Pos,
            Surv::Neg => Sign::Neg,
        }
    }
}

/// `⨆_{u=1}^{b} J_1⟨1, x+2u⟩ ⇒ ({|x|}, {|x+2b|})`, compatible with `|η_1|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Telescope {
    pub x: i64,
    pub b: i64,
}

impl Telescope {
    pub fn range(&self) -> SignedInterval {
        SignedInterval::union_range(1, self.b)
    }

    pub fn eta_dom(&self, e: &TeleElem) -> i64 {
        if e.swapped {
            -(self.x + 2 * e.u)
        } else {
            self.x + 2 * e.u - 2
        }
    }

    pub fn abs_eta_cod(&self, s: Surv) -> i64 {
        match s {
            Surv::Pos => self.x.abs(),
            Surv::Neg => (self.x + 2 * self.b).abs(),
        }
    }

    pub fn support(&self) -> Vec<TeleElem> {
        self.range()
            .members()
            .into_iter()
            .flat_map(|u| [false, true].map(|swapped| TeleElem { u, swapped }))
            .collect()
    }
}

impl Sijection for Telescope {
    type Dom = TeleElem;
    type Cod = Surv;

    fn stages(&self) -> (&'static str, &'static str) {
        ("telescope-union", "telescope-ends")
    }

    fn hop(&self, x: Side<TeleElem, Surv>, _ctx: &mut HopCtx) -> Result<Hop<TeleElem, Surv>, SijError> {
        let b = self.b;
        let dom = |u: i64, swapped: bool| Side::Dom(TeleElem { u, swapped });
        let to = match x {
            Side::Dom(ref e) if self.range().sign_of(e.u).is_none() => return Err(out_of_stage("telescope-union", e)),
            Side::Dom(TeleElem { u, swapped }) if b >= 1 => match (u, swapped) {
                (1, false) => Side::Cod(Surv::Pos),
                (u, true) if u == b => Side::Cod(Surv::Neg),
                (u, true) => dom(u + 1, false),
                (u, false) => dom(u - 1, true),
            },
            Side::Dom(TeleElem { u, swapped }) => match (u, swapped) {
                (0, true) => Side::Cod(Surv::Pos),
                (u, false) if u == b + 1 => Side::Cod(Surv::Neg),
                (u, false) => dom(u - 1, true),
                (u, true) => dom(u + 1, false),
            },
            Side::Cod(s) => match (b.signum(), s) {
                (0, Surv::Pos) => Side::Cod(Surv::Neg),
                (0, Surv::Neg) => Side::Cod(Surv::Pos),
                (1, Surv::Pos) => dom(1, false),
                (1, Surv::Neg) => dom(b, true),
                (_, Surv::Pos) => dom(0, true),
                (_, Surv::Neg) => dom(b + 1, false),
            },
        };
        Ok(Hop::plain(to))
    }
}

// ---------------------------------------------------------------------------
// Double union cancellation

/// `(u_1, u_2, ρ)` in `⨆_{u_1}^{b_1} ⨆_{u_2}^{b_2} J_1⟨y−b_1+2u_1, y−b_2+2u_2⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairElem {
    pub u1: i64,
    pub u2: i64,
    pub swapped: bool,
}

impl Signed for PairElem {
    fn sign(&self) -> Sign {
        eps(self.u1) * eps(self.u2) * Sign::from_parity(self.swapped)
    }
}

/// `(u_1, end)` in `⨆_{u_1}^{b_1} ({|b_1−2u_1−b_2+1|}, {|b_1−2u_1+b_2+1|})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairEnd {
    pub u1: i64,
    pub end: Surv,
}

impl Signed for PairEnd {
    fn sign(&self) -> Sign {
        eps(self.u1) * self.end.sign()
    }
}

/// Telescopes the inner union for each fixed `u_1`.
pub struct TelescopeInner {
    pub b1: i64,
    pub b2: i64,
}

impl TelescopeInner {
    fn tele(&self, u1: i64) -> Telescope {
        Telescope {
            x: self.b1 - 2 * u1 - self.b2 + 1,
            b: self.b2,
        }
    }
}

impl Sijection for TelescopeInner {
    type Dom = PairElem;
    type Cod = PairEnd;

    fn stages(&self) -> (&'static str, &'static str) {
        ("pair-union", "pair-ends")
    }

    fn hop(&self, x: Side<PairElem, PairEnd>, ctx: &mut HopCtx) -> Result<Hop<PairElem, PairEnd>, SijError> {
        let (u1, inner) = match x {
            Side::Dom(e) => (
                e.u1,
                Side::Dom(TeleElem {
                    u: e.u2,
                    swapped: e.swapped,
                }),
            ),
            Side::Cod(e) => (e.u1, Side::Cod(e.end)),
        };
        if SignedInterval::union_range(1, self.b1).sign_of(u1).is_none() {
            return Err(out_of_stage("pair-union", &u1));
        }
        let to = match self.tele(u1).hop(inner, ctx)?.to {
            Side::Dom(t) => Side::Dom(PairElem {
                u1,
                u2: t.u,
                swapped: t.swapped,
            }),
            Side::Cod(end) => Side::Cod(PairEnd { u1, end }),
        };
        Ok(Hop::plain(to))
    }
}

/// Pairs `(u_1, +)` with `(b_1+1−u_1, −)`: equal `|η_1|`, opposite signs.
pub struct EndCancel {
    pub b1: i64,
}

impl Sijection for EndCancel {
    type Dom = PairEnd;
    type Cod = crate::signed::Empty;

    fn stages(&self) -> (&'static str, &'static str) {
        ("pair-ends", "empty")
    }

    fn hop(&self, x: Side<PairEnd, Self::Cod>, _ctx: &mut HopCtx) -> Result<Hop<PairEnd, Self::Cod>, SijError> {
        match x {
            Side::Dom(PairEnd { u1, end }) => {
                let end = match end {
                    Surv::Pos => Surv::Neg,
                    Surv::Neg => Surv::Pos,
                };
                Ok(Hop::plain(Side::Dom(PairEnd {
                    u1: self.b1 + 1 - u1,
                    end,
                })))
            }
            Side::Cod(e) => match e {},
        }
    }
}

pub type PairCancel = Compose<TelescopeInner, EndCancel>;

/// `⨆_{u_1}^{b_1} ⨆_{u_2}^{b_2} J_1⟨y−b_1+2u_1, y−b_2+2u_2⟩ ⇒ (∅, ∅)`.
pub fn pair_cancel(b1: i64, b2: i64) -> PairCancel {
    compose(TelescopeInner { b1, b2 }, EndCancel { b1 })
}

// ---------------------------------------------------------------------------
// Multiple union cancellation

/// `⨆_{u_1}^{b_1} ⋯ ⨆_{u_k}^{b_k} J_{(k+f)/2}⟨x_1, …, x_f, y−b_k+2u_k, …,
/// y−b_1+2u_1⟩ ⇒ (∅, ∅)` for `k ≥ 2`, `f < k`, `f ≡ k (mod 2)`. The rule
/// does not depend on the values `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCancel {
    pub b: Vec<i64>,
    pub fixed: usize,
}

impl MultiCancel {
    pub fn new(b: Vec<i64>, fixed: usize) -> Self {
        assert!(
            b.len() >= 2 && fixed < b.len() && (b.len() - fixed).is_multiple_of(2),
            "bad cancellation shape"
        );
        MultiCancel { b, fixed }
    }

    pub fn params(&self, xs: &[i64], y: i64, u: &[i64]) -> Vec<i64> {
        let mut p = xs.to_vec();
        p.extend((0..self.b.len()).rev().map(|l| y - self.b[l] + 2 * u[l]));
        p
    }

    fn step(&self, e: &RElem, ctx: &mut HopCtx) -> Result<RElem, SijError> {
        let k = self.b.len();
        let f = self.fixed;
        if k == 2 {
            // Parameters are (z_2, z_1): the double union with the roles of
            // the two indices exchanged.
            let pe = PairElem {
                u1: e.u[1],
                u2: e.u[0],
                swapped: e.sigma[0] == 2,
            };
            let h = pair_cancel(self.b[1], self.b[0]).hop(Side::Dom(pe), ctx)?;
            let pe = h.to.dom().expect("cancellation stays in its domain");
            let sigma = if pe.swapped { vec![2, 1] } else { vec![1, 2] };
            return Ok(RElem {
                u: vec![pe.u2, pe.u1],
                sigma,
            });
        }
        let sp = split_first_block(&e.sigma);
        let i = sp.partner;
        let rebuild = |u: Vec<i64>, rest: Vec<usize>| RElem {
            u,
            sigma: join_first_block(&Split { rest, ..sp.clone() }),
        };
        if f >= 1 && i <= f {
            let sub = MultiCancel::new(self.b.clone(), f - 2);
            let r = sub.step(
                &RElem {
                    u: e.u.clone(),
                    sigma: sp.rest.clone(),
                },
                ctx,
            )?;
            Ok(rebuild(r.u, r.sigma))
        } else if f >= 1 {
            let l = k + f + 1 - i;
            let sub = MultiCancel::new(without(&self.b, l - 1), f - 1);
            let r = sub.step(
                &RElem {
                    u: without(&e.u, l - 1),
                    sigma: sp.rest.clone(),
                },
                ctx,
            )?;
            Ok(rebuild(with_inserted(&r.u, l - 1, e.u[l - 1]), r.sigma))
        } else {
            let l = k + 1 - i;
            let b = without(&without(&self.b, k - 1), l - 1);
            let u = without(&without(&e.u, k - 1), l - 1);
            let r = MultiCancel::new(b, 0).step(
                &RElem {
                    u,
                    sigma: sp.rest.clone(),
                },
                ctx,
            )?;
            let u = with_inserted(&with_inserted(&r.u, l - 1, e.u[l - 1]), k - 1, e.u[k - 1]);
            Ok(rebuild(u, r.sigma))
        }
    }

    /// The whole (materialized) union.
    pub fn support(&self) -> Vec<RElem> {
        let order = (self.b.len() + self.fixed) / 2;
        let us = u_vectors(&self.b);
        let sigmas = s_prime(order);
        us.iter()
            .flat_map(|u| {
                sigmas.iter().map(move |s| RElem {
                    u: u.clone(),
                    sigma: s.clone(),
                })
            })
            .collect()
    }
}

impl Sijection for MultiCancel {
    type Dom = RElem;
    type Cod = crate::signed::Empty;

    fn stages(&self) -> (&'static str, &'static str) {
        ("multi-union", "empty")
    }

    fn hop(&self, x: Side<RElem, Self::Cod>, ctx: &mut HopCtx) -> Result<Hop<RElem, Self::Cod>, SijError> {
        match x {
            Side::Dom(e) => Ok(Hop::plain(Side::Dom(self.step(&e, ctx)?))),
            Side::Cod(e) => match e {},
        }
    }
}

/// All `u` with `u_l ∈ ⟦1, b_l+1⟧`.
pub fn u_vectors(b: &[i64]) -> Vec<Vec<i64>> {
    b.iter().fold(vec![Vec::new()], |acc, &bl| {
        let r = SignedInterval::union_range(1, bl).members();
        acc.into_iter()
            .flat_map(|v| {
                r.iter().map(move |&u| {
                    let mut w = v.clone();
                    w.push(u);
                    w
                })
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// I_m[a; b] ⇒ ⨆_u J_m⟨…⟩

/// `I_m[a; b] ⇒ ⨆_{u_1}^{b_1} ⋯ ⨆_{u_m}^{b_m} J_m⟨1, 1+a_1−a_2, …, 1+a_1−a_m,
/// a_1−b_m+2u_m, …, a_1−b_1+2u_1⟩`, compatible slot by slot with `|η_i|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expand {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

type Peel = Product<Telescope, Inverse<Expand>>;

impl Expand {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Self {
        assert_eq!(a.len(), b.len());
        assert!(!a.is_empty());
        Expand { a, b }
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Peeling off the factor `⨆_{u_j} J_1⟨1, a_1−b_j+2u_j⟩` (1-based `j`).
    fn peel(&self, j: usize) -> Peel {
        Product {
            left: Telescope {
                x: self.a[0] - self.b[j - 1],
                b: self.b[j - 1],
            },
            right: Inverse(Expand::new(self.a[1..].to_vec(), without(&self.b, j - 1))),
            left_slots: 1,
        }
    }

    pub fn i_support(&self) -> Vec<IElem> {
        i_support(self.m())
    }

    pub fn r_support(&self) -> Vec<RElem> {
        let sigmas = s_prime(self.m());
        u_vectors(&self.b)
            .into_iter()
            .flat_map(|u| {
                sigmas.iter().map(move |s| RElem {
                    u: u.clone(),
                    sigma: s.clone(),
                })
            })
            .collect()
    }

    pub fn params(&self, u: &[i64]) -> Vec<i64> {
        r_params(&self.a, &self.b, u)
    }

    fn peel_dom_to_r(&self, j: usize, sp: &Split, te: TeleElem, r: RElem) -> RElem {
        let sigma = join_first_block(&Split {
            partner: sp.partner,
            swapped: te.swapped,
            rest: r.sigma,
        });
        RElem {
            u: with_inserted(&r.u, j - 1, te.u),
            sigma,
        }
    }

    fn from_peel_cod(j: usize, end: Surv, ie: IElem) -> IElem {
        let mut t = vec![u8::from(end == Surv::Neg)];
        t.extend(ie.t);
        IElem {
            sigma: insert_front(j, &ie.sigma),
            t,
        }
    }
}

impl Sijection for Expand {
    type Dom = IElem;
    type Cod = RElem;

    fn stages(&self) -> (&'static str, &'static str) {
        ("I", "J-union")
    }

    fn hop(&self, x: Side<IElem, RElem>, ctx: &mut HopCtx) -> Result<Hop<IElem, RElem>, SijError> {
        let m = self.m();
        if m == 1 {
            let tele = Telescope {
                x: self.a[0] - self.b[0],
                b: self.b[0],
            };
            let inner = match x {
                Side::Dom(ie) => Side::Cod(if ie.t[0] == 0 { Surv::Pos } else { Surv::Neg }),
                Side::Cod(r) => Side::Dom(TeleElem {
                    u: r.u[0],
                    swapped: r.sigma[0] == 2,
                }),
            };
            let to = match tele.hop(inner, ctx)?.to {
                Side::Dom(te) => Side::Cod(RElem {
                    u: vec![te.u],
                    sigma: if te.swapped { vec![2, 1] } else { vec![1, 2] },
                }),
                Side::Cod(end) => Side::Dom(IElem {
                    sigma: vec![1],
                    t: vec![u8::from(end == Surv::Neg)],
                }),
            };
            return Ok(Hop::plain(to));
        }
        match x {
            Side::Cod(r) => {
                let sp = split_first_block(&r.sigma);
                let i = sp.partner;
                if i <= m {
                    let cancel = MultiCancel::new(self.b.clone(), m - 2);
                    let h = cancel.hop(
                        Side::Dom(RElem {
                            u: r.u.clone(),
                            sigma: sp.rest.clone(),
                        }),
                        ctx,
                    )?;
                    let back = h.to.dom().expect("cancellation stays in its domain");
                    let sigma = join_first_block(&Split { rest: back.sigma, ..sp });
                    return Ok(Hop {
                        to: Side::Cod(RElem { u: back.u, sigma }),
                        slots: h.slots,
                    });
                }
                let j = 2 * m + 1 - i;
                let peel = self.peel(j);
                let elem = (
                    TeleElem {
                        u: r.u[j - 1],
                        swapped: sp.swapped,
                    },
                    RElem {
                        u: without(&r.u, j - 1),
                        sigma: sp.rest.clone(),
                    },
                );
                let h = peel.hop(Side::Dom(elem), ctx)?;
                let to = match h.to {
                    Side::Dom((te, rr)) => Side::Cod(self.peel_dom_to_r(j, &sp, te, rr)),
                    Side::Cod((end, ie)) => Side::Dom(Self::from_peel_cod(j, end, ie)),
                };
                Ok(Hop { to, slots: h.slots })
            }
            Side::Dom(ie) => {
                let j = ie.sigma[0];
                let peel = self.peel(j);
                let end = if ie.t[0] == 0 { Surv::Pos } else { Surv::Neg };
                let rest = IElem {
                    sigma: remove_value(&ie.sigma, j),
                    t: ie.t[1..].to_vec(),
                };
                let h = peel.hop(Side::Cod((end, rest)), ctx)?;
                let to = match h.to {
                    Side::Cod((end, ie)) => Side::Dom(Self::from_peel_cod(j, end, ie)),
                    Side::Dom((te, rr)) => {
                        let sp = Split {
                            partner: 2 * m + 1 - j,
                            swapped: te.swapped,
                            rest: Vec::new(),
                        };
                        Side::Cod(self.peel_dom_to_r(j, &sp, te, rr))
                    }
                };
                Ok(Hop { to, slots: h.slots })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Equal parameters and the final assembly

/// Sends `σ` to the representative of `(i j) ∘ σ` (values `i`, `j` swapped,
/// blocks re-sorted). Returns the slot permutation of the block sort.
pub fn equal_param_cancel(sigma: &[usize], i: usize, j: usize) -> (Vec<usize>, SlotPerm) {
    let swapped: Vec<usize> = sigma
        .iter()
        .map(|&v| {
            if v == i {
                j
            } else if v == j {
                i
            } else {
                v
            }
        })
        .collect();
    canonicalize(&swapped)
}

/// The lexicographically smallest pair `i < j` (1-based) with `x_i = x_j`.
pub fn first_equal_pair(x: &[i64]) -> Option<(usize, usize)> {
    (0..x.len()).find_map(|i| (i + 1..x.len()).find(|&j| x[i] == x[j]).map(|j| (i + 1, j + 1)))
}

/// `⨆_u J_m⟨1, …, m, c_1, …, c_m⟩ ⇒ J_m⟨1, …, 2m⟩` for `a = b = (m, …, 1)`:
/// every stratum with a repeated parameter cancels, the stratum `c_i = m+i`
/// is carried over identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataCancel {
    pub m: usize,
}

impl StrataCancel {
    pub fn a(&self) -> Vec<i64> {
        (1..=self.m as i64).rev().collect()
    }

    /// `u_l = m+1−l` for every `l`.
    pub fn surviving_u(&self) -> Vec<i64> {
        (1..=self.m as i64).map(|l| self.m as i64 + 1 - l).collect()
    }
}

impl Sijection for StrataCancel {
    type Dom = RElem;
    type Cod = JElem;

    fn stages(&self) -> (&'static str, &'static str) {
        ("J-union", "J")
    }

    fn hop(&self, x: Side<RElem, JElem>, _ctx: &mut HopCtx) -> Result<Hop<RElem, JElem>, SijError> {
        match x {
            Side::Cod(je) => Ok(Hop::plain(Side::Dom(RElem {
                u: self.surviving_u(),
                sigma: je.sigma,
            }))),
            Side::Dom(r) if r.u == self.surviving_u() => Ok(Hop::plain(Side::Cod(JElem { sigma: r.sigma }))),
            Side::Dom(r) => {
                let a = self.a();
                let x = r_params(&a, &a, &r.u);
                let (i, j) = first_equal_pair(&x).ok_or_else(|| out_of_stage("J-union", &r))?;
                let (sigma, slots) = equal_param_cancel(&r.sigma, i, j);
                Ok(Hop {
                    to: Side::Dom(RElem { u: r.u, sigma }),
                    slots,
                })
            }
        }
    }
}

pub type Assemble = Compose<Expand, StrataCancel>;

/// `I_m[m..1; m..1] ⇒ J_m⟨1..2m⟩` with slot permutations.
pub fn assemble(m: usize) -> Assemble {
    let a: Vec<i64> = (1..=m as i64).rev().collect();
    compose(Expand::new(a.clone(), a), StrataCancel { m })
}

pub fn stair_params(m: usize) -> Vec<i64> {
    (1..=m as i64).rev().collect()
}

pub fn espp_params(m: usize) -> Vec<i64> {
    (1..=2 * m as i64).collect()
}

pub fn i_support(m: usize) -> Vec<IElem> {
    let ts: Vec<Vec<u8>> = (0..1u32 << m)
        .map(|bits| (0..m).map(|i| ((bits >> i) & 1) as u8).collect())
        .collect();
    permutations(m)
        .into_iter()
        .flat_map(|s| {
            ts.iter().map(move |t| IElem {
                sigma: s.clone(),
                t: t.clone(),
            })
        })
        .collect()
}

pub fn j_support(m: usize) -> Vec<JElem> {
    s_prime(m).into_iter().map(|sigma| JElem { sigma }).collect()
}

/// `|η|`-fibre key: `|η_1|` and the sorted remaining `|η_i|`.
pub fn fibre_key(abs_eta: &[i64]) -> (i64, Vec<i64>) {
    let mut rest = abs_eta[1..].to_vec();
    rest.sort();
    (abs_eta[0], rest)
}

/// Signed counts of `I_m[m..1; m..1]` per `|η|`-fibre.
pub fn i_fibres(m: usize) -> BTreeMap<(i64, Vec<i64>), i64> {
    let a = stair_params(m);
    let mut out = BTreeMap::new();
    for e in i_support(m) {
        *out.entry(fibre_key(&abs_all(&eta_i(&e, &a, &a)))).or_insert(0) += e.sign().value();
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Signed counts of `J_m⟨1..2m⟩` per `|η|`-fibre.
pub fn j_fibres(m: usize) -> BTreeMap<(i64, Vec<i64>), i64> {
    let x = espp_params(m);
    let mut out = BTreeMap::new();
    for e in j_support(m) {
        *out.entry(fibre_key(&abs_all(&eta_j(&e.sigma, &x)))).or_insert(0) += e.sign().value();
    }
    out.retain(|_, v| *v != 0);
    out
}

// ---------------------------------------------------------------------------
// Lifting to factor tuples

/// A tuple of factors attached to an index element; always positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factors<W>(pub Vec<W>);

impl<W> Signed for Factors<W> {
    fn sign(&self) -> Sign {
        Sign::Pos
    }
}

/// Moves factor `i` to slot `p(i)` along every index hop.
pub struct PermuteFactors<W>(std::marker::PhantomData<W>);

impl<W> Default for PermuteFactors<W> {
    fn default() -> Self {
        PermuteFactors(std::marker::PhantomData)
    }
}

impl<W: Clone + Debug + PartialEq, TI, TT> IndexFamily<TI, TT> for PermuteFactors<W> {
    type Elem = Factors<W>;

    fn hop(
        &self,
        _t: &Side<TI, TT>,
        _image: &Side<TI, TT>,
        slots: &SlotPerm,
        x: Side<Factors<W>, Factors<W>>,
    ) -> Side<Factors<W>, Factors<W>> {
        match x {
            Side::Dom(Factors(p)) => {
                let mut q = p.clone();
                for (i, w) in p.into_iter().enumerate() {
                    q[slots.image(i)] = w;
                }
                Side::Cod(Factors(q))
            }
            Side::Cod(Factors(q)) => Side::Dom(Factors((0..q.len()).map(|i| q[slots.image(i)].clone()).collect())),
        }
    }
}

pub type Lift<W> = crate::signed::DisjointUnion<Assemble, PermuteFactors<W>>;

/// `⨆_{α∈I_m} ∏ F(|η_i|(α)) ⇒ ⨆_{σ∈J_m} ∏ F(|η_i|(σ))` for any factor family.
pub fn lift<W>(m: usize) -> Lift<W> {
    crate::signed::DisjointUnion {
        index: assemble(m),
        family: PermuteFactors::default(),
    }
}

pub type IFactored<W> = Indexed<Factors<W>, IElem>;
pub type JFactored<W> = Indexed<Factors<W>, JElem>;

/// `|η_i|` of an element of either end of [`assemble`].
pub fn assembly_abs_eta(m: usize, x: &Side<IElem, JElem>) -> Vec<i64> {
    match x {
        Side::Dom(e) => abs_all(&eta_i(e, &stair_params(m), &stair_params(m))),
        Side::Cod(e) => abs_all(&eta_j(&e.sigma, &espp_params(m))),
    }
}

/// Exhaustively checks the assembly at order `m`: a valid sijection whose
/// per-element slot permutations fix slot 1, invert each other along every
/// pair, and match `|η_i|(s) = |η_{σ_s(i)}|(φ(s))`. Returns the number of
/// elements checked.
pub fn check_assembly(m: usize) -> Result<usize, String> {
    let sij = assemble(m);
    let dom = i_support(m);
    let cod = j_support(m);
    crate::signed::check_validity(&sij, &dom, &cod)?;
    let all: Vec<Side<IElem, JElem>> = dom
        .into_iter()
        .map(Side::Dom)
        .chain(cod.into_iter().map(Side::Cod))
        .collect();
    for x in &all {
        let h = sij.hop(x.clone(), &mut HopCtx::default()).map_err(|e| e.to_string())?;
        let back = sij
            .hop(h.to.clone(), &mut HopCtx::default())
            .map_err(|e| e.to_string())?;
        let p = h.slots.to_vec(m);
        if p[0] != 0 {
            return Err(format!("slot 1 moved at {x:?}"));
        }
        if !h.slots.then(&back.slots).is_identity() {
            return Err(format!("slot permutations not inverse at {x:?}"));
        }
        let (ex, ey) = (assembly_abs_eta(m, x), assembly_abs_eta(m, &h.to));
        if (0..m).any(|i| ex[i] != ey[p[i]]) {
            return Err(format!("|eta| {ex:?} -> {ey:?} with slots {p:?} at {x:?}"));
        }
    }
    Ok(all.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::check_validity;

    #[test]
    fn s_prime_sizes() {
        assert_eq!(s_prime(1).len(), 2);
        assert_eq!(s_prime(2).len(), 12);
        assert_eq!(s_prime(3).len(), 120);
    }

    #[test]
    fn split_examples() {
        let sp = split_first_block(&[1, 2, 3, 4]);
        assert_eq!(
            sp,
            Split {
                partner: 2,
                swapped: false,
                rest: vec![1, 2]
            }
        );
        let sp = split_first_block(&[2, 1, 3, 4]);
        assert_eq!(
            sp,
            Split {
                partner: 2,
                swapped: true,
                rest: vec![1, 2]
            }
        );
        let x = [10, 4, 7, 1];
        assert_eq!(eta_j(&[2, 1, 3, 4], &x)[0], eta_j(&[2, 1], &[x[0], x[1]])[0]);
    }

    #[test]
    fn split_is_a_signed_bijection() {
        for m in 2..=3 {
            for s in s_prime(m) {
                let sp = split_first_block(&s);
                assert!(is_s_prime(&sp.rest));
                assert_eq!(join_first_block(&sp), s);
                let rho = Sign::from_parity(sp.swapped);
                assert_eq!(
                    perm_sign(&s),
                    Sign::from_parity(sp.partner % 2 == 1) * rho * perm_sign(&sp.rest)
                );
            }
        }
    }

    #[test]
    fn translation_keeps_eta() {
        let x = [1, 3, 2, 7];
        for s in s_prime(2) {
            for d in -3..=3 {
                assert_eq!(eta_j(&s, &x), eta_j(&s, &translate(&x, d)));
            }
        }
    }

    #[test]
    fn telescope_small_cases() {
        let t = Telescope { x: 0, b: 1 };
        assert_eq!(
            t.apply(Side::Dom(TeleElem { u: 1, swapped: false })),
            Ok(Side::Cod(Surv::Pos))
        );
        assert_eq!(
            t.apply(Side::Dom(TeleElem { u: 1, swapped: true })),
            Ok(Side::Cod(Surv::Neg))
        );
        assert_eq!(t.abs_eta_cod(Surv::Neg), 2);
        let t = Telescope { x: 2, b: 2 };
        let inner = t.apply(Side::Dom(TeleElem { u: 1, swapped: true })).unwrap();
        assert_eq!(inner, Side::Dom(TeleElem { u: 2, swapped: false }));
        assert_eq!(t.eta_dom(&TeleElem { u: 1, swapped: true }).abs(), 4);
        assert_eq!((t.abs_eta_cod(Surv::Pos), t.abs_eta_cod(Surv::Neg)), (2, 6));
        let t = Telescope { x: 3, b: 0 };
        assert!(t.support().is_empty());
        assert_eq!(t.apply(Side::Cod(Surv::Pos)), Ok(Side::Cod(Surv::Neg)));
    }

    #[test]
    fn telescope_valid_everywhere() {
        for x in -4..=4 {
            for b in -4..=4 {
                let t = Telescope { x, b };
                check_validity(&t, &t.support(), &[Surv::Pos, Surv::Neg]).unwrap();
                for e in t.support() {
                    let v = t.eta_dom(&e).abs();
                    match t.apply(Side::Dom(e.clone())).unwrap() {
                        Side::Dom(f) => assert_eq!(v, t.eta_dom(&f).abs()),
                        Side::Cod(s) => assert_eq!(v, t.abs_eta_cod(s)),
                    }
                }
            }
        }
    }

    #[test]
    fn pair_cancel_smallest() {
        let c = pair_cancel(1, 1);
        let id = PairElem {
            u1: 1,
            u2: 1,
            swapped: false,
        };
        let sw = PairElem {
            u1: 1,
            u2: 1,
            swapped: true,
        };
        assert_eq!(c.apply(Side::Dom(id.clone())), Ok(Side::Dom(sw)));
        let all: Vec<PairElem> = u_vectors(&[2, 1])
            .into_iter()
            .flat_map(|u| {
                [false, true].map(|s| PairElem {
                    u1: u[0],
                    u2: u[1],
                    swapped: s,
                })
            })
            .collect();
        assert_eq!(all.len(), 4);
        check_validity(&pair_cancel(2, 1), &all, &[]).unwrap();
    }

    #[test]
    fn multi_cancel_examples() {
        for (b, f) in [(vec![1, 1, 1], 1usize), (vec![1, 1, 1, 1], 0), (vec![2, 1, 3], 1)] {
            let c = MultiCancel::new(b, f);
            let sup = c.support();
            assert_eq!(sup.iter().map(|e| e.sign().value()).sum::<i64>(), 0);
            check_validity(&c, &sup, &[]).unwrap();
        }
    }

    #[test]
    fn expand_base_case() {
        let e = Expand::new(vec![1], vec![1]);
        let zero = IElem {
            sigma: vec![1],
            t: vec![0],
        };
        let r = e.apply(Side::Dom(zero)).unwrap();
        assert_eq!(
            r,
            Side::Cod(RElem {
                u: vec![1],
                sigma: vec![1, 2]
            })
        );
    }

    #[test]
    fn assemble_m1() {
        let a = assemble(1);
        let zero = IElem {
            sigma: vec![1],
            t: vec![0],
        };
        let two = IElem {
            sigma: vec![1],
            t: vec![1],
        };
        assert_eq!(a.apply(Side::Dom(zero)), Ok(Side::Cod(JElem { sigma: vec![1, 2] })));
        assert_eq!(a.apply(Side::Dom(two)), Ok(Side::Cod(JElem { sigma: vec![2, 1] })));
    }

    #[test]
    fn equal_param_cancel_pairs_off() {
        let x = [1, 2, 1, 4];
        let (i, j) = first_equal_pair(&x).unwrap();
        assert_eq!((i, j), (1, 3));
        let sup = s_prime(2);
        let mut total = 0;
        for s in &sup {
            let (t, _) = equal_param_cancel(s, i, j);
            assert_ne!(&t, s);
            assert_eq!(equal_param_cancel(&t, i, j).0, *s);
            assert_ne!(perm_sign(&t), perm_sign(s));
            total += perm_sign(s).value();
        }
        assert_eq!(total, 0);
    }

    #[test]
    fn fibres_agree_small() {
        for m in 1..=3 {
            assert_eq!(i_fibres(m), j_fibres(m), "m = {m}");
        }
    }

    #[test]
    fn expand_compatible_slotwise() {
        let cases = [
            (vec![2, 1], vec![2, 1]),
            (vec![3, 1], vec![1, 2]),
            (vec![2, 2], vec![0, 3]),
            (vec![3, 2, 1], vec![3, 2, 1]),
            (vec![1, 0, 2], vec![2, 1, 1]),
        ];
        for (a, b) in cases {
            let e = Expand::new(a.clone(), b.clone());
            let dom = e.i_support();
            let cod = e.r_support();
            check_validity(&e, &dom, &cod).unwrap();
            let m = a.len();
            let eta = |x: &Side<IElem, RElem>| match x {
                Side::Dom(i) => abs_all(&eta_i(i, &a, &b)),
                Side::Cod(r) => abs_all(&eta_j(&r.sigma, &e.params(&r.u))),
            };
            let all = dom.into_iter().map(Side::Dom).chain(cod.into_iter().map(Side::Cod));
            for x in all {
                let h = e.hop(x.clone(), &mut HopCtx::default()).unwrap();
                let p = h.slots.to_vec(m);
                let (ex, ey) = (eta(&x), eta(&h.to));
                assert!((0..m).all(|i| ex[i] == ey[p[i]]), "{x:?} -> {:?}", h.to);
            }
        }
    }

    #[test]
    fn assembly_small() {
        assert_eq!(check_assembly(1), Ok(4));
        assert_eq!(check_assembly(2), Ok(8 + 12));
        check_assembly(3).unwrap();
    }
}
