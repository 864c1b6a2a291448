//! Signed sets and sijections.
//!
//! A sijection `S ⇒ T` is stored as a rule on `supp(S) ⊔ supp(T)`: every
//! element is sent to a partner, elements of `S⁺ ⊔ T⁻` land in `S⁻ ⊔ T⁺` and
//! vice versa, and applying the rule twice gives back the input. Composition
//! is the usual zig-zag through the shared middle stage.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Global cap on zig-zag hops when no tighter bound is known.
pub const DEFAULT_HOP_BOUND: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn is_pos(self) -> bool {
        self == Sign::Pos
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// Sign of a permutation given in one-line notation with values `1..=len`.
pub fn perm_sign(perm: &[usize]) -> Sign {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] - 1;
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    Sign::from_parity(odd)
}

/// Anything that lives in the support of a signed set.
pub trait Signed {
    fn sign(&self) -> Sign;
}

impl<A: Signed, B: Signed> Signed for (A, B) {
    fn sign(&self) -> Sign {
        self.0.sign() * self.1.sign()
    }
}

/// The uninhabited stage, i.e. the empty signed set `(∅, ∅)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Empty {}

impl Signed for Empty {
    fn sign(&self) -> Sign {
        match *self {}
    }
}

/// An element of `S ⊔ T`, tagged with the side it lives on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side<D, C> {
    Dom(D),
    Cod(C),
}

impl<D: Signed, C: Signed> Side<D, C> {
    pub fn sign(&self) -> Sign {
        match self {
            Side::Dom(d) => d.sign(),
            Side::Cod(c) => c.sign(),
        }
    }

    /// Sign in the involution picture on `S ⊔ −T`.
    pub fn involution_sign(&self) -> Sign {
        match self {
            Side::Dom(d) => d.sign(),
            Side::Cod(c) => -c.sign(),
        }
    }
}

impl<D, C> Side<D, C> {
    pub fn is_dom(&self) -> bool {
        matches!(self, Side::Dom(_))
    }

    pub fn swap(self) -> Side<C, D> {
        match self {
            Side::Dom(d) => Side::Cod(d),
            Side::Cod(c) => Side::Dom(c),
        }
    }

    pub fn dom(self) -> Option<D> {
        match self {
            Side::Dom(d) => Some(d),
            Side::Cod(_) => None,
        }
    }

    pub fn cod(self) -> Option<C> {
        match self {
            Side::Dom(_) => None,
            Side::Cod(c) => Some(c),
        }
    }
}

/// Permutation of statistic slots attached to a hop `x → y`:
/// `|η_i|(x) = |η_{p(i)}|(y)`. Slots are 0-based; indices past the stored
/// vector are fixed, so `SlotPerm::identity()` works at every size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SlotPerm(Vec<usize>);

impl SlotPerm {
    pub fn identity() -> Self {
        SlotPerm(Vec::new())
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        SlotPerm(images)
    }

    pub fn image(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(i)
    }

    pub fn len_hint(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &SlotPerm) -> SlotPerm {
        if next.is_identity() {
            return self.clone();
        }
        if self.is_identity() {
            return next.clone();
        }
        let len = self.0.len().max(next.0.len());
        SlotPerm((0..len).map(|i| next.image(self.image(i))).collect())
    }

    pub fn inverse(&self) -> SlotPerm {
        let mut inv: Vec<usize> = (0..self.0.len()).collect();
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        SlotPerm(inv)
    }

    /// `self` on slots `0..left_len`, `right` shifted onto the slots after it.
    pub fn direct_sum(&self, left_len: usize, right: &SlotPerm) -> SlotPerm {
        if self.is_identity() && right.is_identity() {
            return SlotPerm::identity();
        }
        let mut v: Vec<usize> = (0..left_len).map(|i| self.image(i)).collect();
        v.extend(right.0.iter().map(|&p| p + left_len));
        SlotPerm(v)
    }

    pub fn to_vec(&self, len: usize) -> Vec<usize> {
        (0..len.max(self.0.len())).map(|i| self.image(i)).collect()
    }
}

/// Result of one application of a sijection's rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Hop<D, C> {
    pub to: Side<D, C>,
    pub slots: SlotPerm,
}

impl<D, C> Hop<D, C> {
    pub fn plain(to: Side<D, C>) -> Self {
        Hop {
            to,
            slots: SlotPerm::identity(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceHop {
    pub stage: &'static str,
    pub sign: Sign,
    pub payload: String,
}

/// Per-application bookkeeping: an optional trace of the intermediate stages
/// visited by zig-zag composition.
#[derive(Debug, Default)]
pub struct HopCtx {
    pub trace: Option<Vec<TraceHop>>,
    pub middle_visits: u64,
}

impl HopCtx {
    pub fn tracing() -> Self {
        HopCtx {
            trace: Some(Vec::new()),
            middle_visits: 0,
        }
    }

    fn record<T: Debug + Signed>(&mut self, stage: &'static str, value: &T) {
        self.middle_visits += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceHop {
                stage,
                sign: value.sign(),
                payload: format!("{value:?}"),
            });
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SijError {
    #[error("zig-zag through stage `{stage}` exceeded the hop bound {bound}")]
    HopBound { stage: &'static str, bound: u64 },
    #[error("element is not in the support of stage `{stage}`: {detail}")]
    OutOfStage { stage: &'static str, detail: String },
}

pub trait Sijection {
    type Dom: Clone + Debug + PartialEq + Signed;
    type Cod: Clone + Debug + PartialEq + Signed;

    /// Names of the domain and codomain stages.
    fn stages(&self) -> (&'static str, &'static str);

    fn hop(&self, x: Side<Self::Dom, Self::Cod>, ctx: &mut HopCtx) -> Result<Hop<Self::Dom, Self::Cod>, SijError>;

    fn apply(&self, x: Side<Self::Dom, Self::Cod>) -> Result<Side<Self::Dom, Self::Cod>, SijError> {
        Ok(self.hop(x, &mut HopCtx::default())?.to)
    }
}

impl<S: Sijection + ?Sized> Sijection for &S {
    type Dom = S::Dom;
    type Cod = S::Cod;
    fn stages(&self) -> (&'static str, &'static str) {
        (**self).stages()
    }
    fn hop(&self, x: Side<S::Dom, S::Cod>, ctx: &mut HopCtx) -> Result<Hop<S::Dom, S::Cod>, SijError> {
        (**self).hop(x, ctx)
    }
}

impl<S: Sijection + ?Sized> Sijection for Box<S> {
    type Dom = S::Dom;
    type Cod = S::Cod;
    fn stages(&self) -> (&'static str, &'static str) {
        (**self).stages()
    }
    fn hop(&self, x: Side<S::Dom, S::Cod>, ctx: &mut HopCtx) -> Result<Hop<S::Dom, S::Cod>, SijError> {
        (**self).hop(x, ctx)
    }
}

/// Zig-zag composition `second ∘ first`.
pub struct Compose<F, G> {
    pub first: F,
    pub second: G,
    pub bound: u64,
}

pub fn compose<F, G>(first: F, second: G) -> Compose<F, G>
where
    F: Sijection,
    G: Sijection<Dom = F::Cod>,
{
    Compose {
        first,
        second,
        bound: DEFAULT_HOP_BOUND,
    }
}

impl<F, G> Compose<F, G> {
    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }
}

impl<F, G> Sijection for Compose<F, G>
where
    F: Sijection,
    G: Sijection<Dom = F::Cod>,
{
    type Dom = F::Dom;
    type Cod = G::Cod;

    fn stages(&self) -> (&'static str, &'static str) {
        (self.first.stages().0, self.second.stages().1)
    }

    fn hop(&self, x: Side<F::Dom, G::Cod>, ctx: &mut HopCtx) -> Result<Hop<F::Dom, G::Cod>, SijError> {
        let middle = self.first.stages().1;
        // `to_second` is true when the middle element must be fed to `second`
        // as a domain element, false when it goes back into `first`.
        let (mut t, mut to_second, mut slots) = match x {
            Side::Dom(s) => {
                let h = self.first.hop(Side::Dom(s), ctx)?;
                match h.to {
                    Side::Dom(s2) => {
                        return Ok(Hop {
                            to: Side::Dom(s2),
                            slots: h.slots,
                        })
                    }
                    Side::Cod(t) => (t, true, h.slots),
                }
            }
            Side::Cod(u) => {
                let h = self.second.hop(Side::Cod(u), ctx)?;
                match h.to {
                    Side::Cod(u2) => {
                        return Ok(Hop {
                            to: Side::Cod(u2),
                            slots: h.slots,
                        })
                    }
                    Side::Dom(t) => (t, false, h.slots),
                }
            }
        };
        let mut hops = 0u64;
        loop {
            hops += 1;
            if hops > self.bound {
                return Err(SijError::HopBound {
                    stage: middle,
                    bound: self.bound,
                });
            }
            ctx.record(middle, &t);
            if to_second {
                let h = self.second.hop(Side::Dom(t), ctx)?;
                slots = slots.then(&h.slots);
                match h.to {
                    Side::Cod(u) => {
                        return Ok(Hop {
                            to: Side::Cod(u),
                            slots,
                        })
                    }
                    Side::Dom(t2) => {
                        t = t2;
                        to_second = false;
                    }
                }
            } else {
                let h = self.first.hop(Side::Cod(t), ctx)?;
                slots = slots.then(&h.slots);
                match h.to {
                    Side::Dom(s) => {
                        return Ok(Hop {
                            to: Side::Dom(s),
                            slots,
                        })
                    }
                    Side::Cod(t2) => {
                        t = t2;
                        to_second = true;
                    }
                }
            }
        }
    }
}

/// The same rule read as `T ⇒ S`.
pub struct Inverse<F>(pub F);

impl<F: Sijection> Sijection for Inverse<F> {
    type Dom = F::Cod;
    type Cod = F::Dom;

    fn stages(&self) -> (&'static str, &'static str) {
        let (a, b) = self.0.stages();
        (b, a)
    }

    fn hop(&self, x: Side<F::Cod, F::Dom>, ctx: &mut HopCtx) -> Result<Hop<F::Cod, F::Dom>, SijError> {
        let h = self.0.hop(x.swap(), ctx)?;
        Ok(Hop {
            to: h.to.swap(),
            slots: h.slots,
        })
    }
}

/// Product sijection `S × S′ ⇒ T × T′`: flip the first factor if it stays on
/// its own side, otherwise try the second, otherwise move both across.
pub struct Product<F, G> {
    pub left: F,
    pub right: G,
    /// Number of statistic slots carried by the left factor.
    pub left_slots: usize,
}

impl<F: Sijection, G: Sijection> Sijection for Product<F, G> {
    type Dom = (F::Dom, G::Dom);
    type Cod = (F::Cod, G::Cod);

    fn stages(&self) -> (&'static str, &'static str) {
        ("product-domain", "product-codomain")
    }

    fn hop(&self, x: Side<Self::Dom, Self::Cod>, ctx: &mut HopCtx) -> Result<Hop<Self::Dom, Self::Cod>, SijError> {
        let n = self.left_slots;
        match x {
            Side::Dom((a, b)) => {
                let ha = self.left.hop(Side::Dom(a.clone()), ctx)?;
                let fa = match ha.to {
                    Side::Dom(a2) => {
                        return Ok(Hop {
                            to: Side::Dom((a2, b)),
                            slots: ha.slots.direct_sum(n, &SlotPerm::identity()),
                        })
                    }
                    Side::Cod(c) => c,
                };
                let hb = self.right.hop(Side::Dom(b), ctx)?;
                match hb.to {
                    Side::Dom(b2) => Ok(Hop {
                        to: Side::Dom((a, b2)),
                        slots: SlotPerm::identity().direct_sum(n, &hb.slots),
                    }),
                    Side::Cod(d) => Ok(Hop {
                        to: Side::Cod((fa, d)),
                        slots: ha.slots.direct_sum(n, &hb.slots),
                    }),
                }
            }
            Side::Cod((c, d)) => {
                let hc = self.left.hop(Side::Cod(c.clone()), ctx)?;
                let fc = match hc.to {
                    Side::Cod(c2) => {
                        return Ok(Hop {
                            to: Side::Cod((c2, d)),
                            slots: hc.slots.direct_sum(n, &SlotPerm::identity()),
                        })
                    }
                    Side::Dom(a) => a,
                };
                let hd = self.right.hop(Side::Cod(d), ctx)?;
                match hd.to {
                    Side::Cod(d2) => Ok(Hop {
                        to: Side::Cod((c, d2)),
                        slots: SlotPerm::identity().direct_sum(n, &hd.slots),
                    }),
                    Side::Dom(b) => Ok(Hop {
                        to: Side::Dom((fc, b)),
                        slots: hc.slots.direct_sum(n, &hd.slots),
                    }),
                }
            }
        }
    }
}

/// An element `(s, t)` of a disjoint union `⨆_t S_t` indexed by a signed set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Indexed<E, T> {
    pub elem: E,
    pub index: T,
}

impl<E: Signed, T: Signed> Signed for Indexed<E, T> {
    fn sign(&self) -> Sign {
        self.elem.sign() * self.index.sign()
    }
}

/// The fibre sijections `φ_t : S_t ⇒ S_{ψ(t)}` of a disjoint union with
/// signed index. Only called with a forward index `t ∈ T⁺ ⊔ T̃⁻`; `slots` is
/// the slot permutation of the index hop `t → ψ(t)`.
pub trait IndexFamily<TI, TT> {
    type Elem: Clone + Debug + PartialEq + Signed;
    fn hop(
        &self,
        t: &Side<TI, TT>,
        image: &Side<TI, TT>,
        slots: &SlotPerm,
        x: Side<Self::Elem, Self::Elem>,
    ) -> Side<Self::Elem, Self::Elem>;
}

/// Disjoint union with signed index:
/// `⨆_{t∈T} S_t ⇒ ⨆_{t∈T̃} S_t` built from `ψ : T ⇒ T̃` and a fibre family.
pub struct DisjointUnion<P, Fam> {
    pub index: P,
    pub family: Fam,
}

fn indexed<E, TI, TT>(elem: E, at: Side<TI, TT>) -> Side<Indexed<E, TI>, Indexed<E, TT>> {
    match at {
        Side::Dom(t) => Side::Dom(Indexed { elem, index: t }),
        Side::Cod(t) => Side::Cod(Indexed { elem, index: t }),
    }
}

impl<P, Fam> Sijection for DisjointUnion<P, Fam>
where
    P: Sijection,
    Fam: IndexFamily<P::Dom, P::Cod>,
{
    type Dom = Indexed<Fam::Elem, P::Dom>;
    type Cod = Indexed<Fam::Elem, P::Cod>;

    fn stages(&self) -> (&'static str, &'static str) {
        self.index.stages()
    }

    fn hop(&self, x: Side<Self::Dom, Self::Cod>, ctx: &mut HopCtx) -> Result<Hop<Self::Dom, Self::Cod>, SijError> {
        let (elem, t) = match x {
            Side::Dom(Indexed { elem, index }) => (elem, Side::Dom(index)),
            Side::Cod(Indexed { elem, index }) => (elem, Side::Cod(index)),
        };
        let h = self.index.hop(t.clone(), ctx)?;
        let forward = t.involution_sign().is_pos();
        let slots = h.slots;
        if forward {
            match self.family.hop(&t, &h.to, &slots, Side::Dom(elem)) {
                Side::Dom(e) => Ok(Hop::plain(indexed(e, t))),
                Side::Cod(e) => Ok(Hop {
                    to: indexed(e, h.to),
                    slots,
                }),
            }
        } else {
            let back = slots.inverse();
            match self.family.hop(&h.to, &t, &back, Side::Cod(elem)) {
                Side::Cod(e) => Ok(Hop::plain(indexed(e, t))),
                Side::Dom(e) => Ok(Hop {
                    to: indexed(e, h.to),
                    slots,
                }),
            }
        }
    }
}

/// Identity sijection on a plain (or signed) set.
pub struct Identity<E>(std::marker::PhantomData<E>);

impl<E> Default for Identity<E> {
    fn default() -> Self {
        Identity(std::marker::PhantomData)
    }
}

impl<E: Clone + Debug + PartialEq + Signed> Sijection for Identity<E> {
    type Dom = E;
    type Cod = E;
    fn stages(&self) -> (&'static str, &'static str) {
        ("identity", "identity")
    }
    fn hop(&self, x: Side<E, E>, _ctx: &mut HopCtx) -> Result<Hop<E, E>, SijError> {
        Ok(Hop::plain(x.swap()))
    }
}

/// The signed interval `⟦a, b⟧`: `({a..b−1}, ∅)` when `a < b`, `(∅, {b..a−1})`
/// when `a > b`, empty when `a = b`. The union `⨆_{u=a}^{b}` ranges over
/// `⟦a, b+1⟧`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedInterval {
    pub a: i64,
    pub b: i64,
}

impl SignedInterval {
    /// The index range of `⨆_{u=lo}^{hi}`.
    pub fn union_range(lo: i64, hi: i64) -> Self {
        SignedInterval { a: lo, b: hi + 1 }
    }

    pub fn sign_of(&self, u: i64) -> Option<Sign> {
        if self.a <= u && u < self.b {
            Some(Sign::Pos)
        } else if self.b <= u && u < self.a {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    pub fn members(&self) -> Vec<i64> {
        if self.a <= self.b {
            (self.a..self.b).collect()
        } else {
            (self.b..self.a).collect()
        }
    }

    pub fn signed_len(&self) -> i64 {
        self.b - self.a
    }
}

/// Outcome of an exhaustive validity check on materialized supports.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct ValidityReport {
    pub checked: usize,
    pub to_other_side: usize,
}

/// Checks that the rule is a fixed-point-free, sign-reversing involution on
/// `S ⊔ −T` that stays inside the given supports.
pub fn check_validity<F>(sij: &F, dom: &[F::Dom], cod: &[F::Cod]) -> Result<ValidityReport, String>
where
    F: Sijection,
    F::Dom: Hash + Eq,
    F::Cod: Hash + Eq,
{
    let dom_set: HashSet<&F::Dom> = dom.iter().collect();
    let cod_set: HashSet<&F::Cod> = cod.iter().collect();
    if dom_set.len() != dom.len() || cod_set.len() != cod.len() {
        return Err("supports contain duplicates".into());
    }
    let mut report = ValidityReport::default();
    let all = dom
        .iter()
        .cloned()
        .map(Side::Dom)
        .chain(cod.iter().cloned().map(Side::Cod));
    for x in all {
        let y = sij.apply(x.clone()).map_err(|e| format!("{e} at {x:?}"))?;
        let inside = match &y {
            Side::Dom(d) => dom_set.contains(d),
            Side::Cod(c) => cod_set.contains(c),
        };
        if !inside {
            return Err(format!("image of {x:?} leaves the supports: {y:?}"));
        }
        if y == x {
            return Err(format!("fixed point {x:?}"));
        }
        if y.involution_sign() == x.involution_sign() {
            return Err(format!("sign not reversed: {x:?} -> {y:?}"));
        }
        let back = sij.apply(y.clone()).map_err(|e| format!("{e} at {y:?}"))?;
        if back != x {
            return Err(format!("not an involution: {x:?} -> {y:?} -> {back:?}"));
        }
        report.checked += 1;
        if x.is_dom() != y.is_dom() {
            report.to_other_side += 1;
        }
    }
    Ok(report)
}

/// Checks `η(φ(x)) = η(x)` over the given elements; returns the first
/// counterexample.
pub fn check_compatibility<F, V, A, B>(
    sij: &F,
    elems: impl IntoIterator<Item = Side<F::Dom, F::Cod>>,
    eta_dom: A,
    eta_cod: B,
) -> Result<usize, String>
where
    F: Sijection,
    V: PartialEq + Debug,
    A: Fn(&F::Dom) -> V,
    B: Fn(&F::Cod) -> V,
{
    let eta = |x: &Side<F::Dom, F::Cod>| match x {
        Side::Dom(d) => eta_dom(d),
        Side::Cod(c) => eta_cod(c),
    };
    let mut n = 0;
    for x in elems {
        let y = sij.apply(x.clone()).map_err(|e| e.to_string())?;
        let (ex, ey) = (eta(&x), eta(&y));
        if ex != ey {
            return Err(format!("statistic {ex:?} -> {ey:?} along {x:?} -> {y:?}"));
        }
        n += 1;
    }
    Ok(n)
}

/// Materialized sijection on small labelled supports, used to exercise the
/// combinators on random instances.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub id: u32,
    pub sign: Sign,
}

impl Signed for Atom {
    fn sign(&self) -> Sign {
        self.sign
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableSijection {
    pub rule: std::collections::HashMap<Side<Atom, Atom>, Side<Atom, Atom>>,
}

impl Sijection for TableSijection {
    type Dom = Atom;
    type Cod = Atom;
    fn stages(&self) -> (&'static str, &'static str) {
        ("table-domain", "table-codomain")
    }
    fn hop(&self, x: Side<Atom, Atom>, _ctx: &mut HopCtx) -> Result<Hop<Atom, Atom>, SijError> {
        self.rule
            .get(&x)
            .cloned()
            .map(Hop::plain)
            .ok_or_else(|| SijError::OutOfStage {
                stage: "table",
                detail: format!("{x:?}"),
            })
    }
}

impl TableSijection {
    /// A uniformly random sijection between the given supports, which must
    /// satisfy `|S⁺| + |T⁻| = |S⁻| + |T⁺|`.
    pub fn random<R: rand::Rng>(dom: &[Atom], cod: &[Atom], rng: &mut R) -> Option<Self> {
        use rand::seq::SliceRandom;
        let mut plus: Vec<Side<Atom, Atom>> = Vec::new();
        let mut minus: Vec<Side<Atom, Atom>> = Vec::new();
        for x in dom
            .iter()
            .cloned()
            .map(Side::Dom)
            .chain(cod.iter().cloned().map(Side::Cod))
        {
            if x.involution_sign().is_pos() {
                plus.push(x);
            } else {
                minus.push(x);
            }
        }
        if plus.len() != minus.len() {
            return None;
        }
        minus.shuffle(rng);
        let mut rule = std::collections::HashMap::new();
        for (p, q) in plus.into_iter().zip(minus) {
            rule.insert(p.clone(), q.clone());
            rule.insert(q, p);
        }
        Some(TableSijection { rule })
    }
}
