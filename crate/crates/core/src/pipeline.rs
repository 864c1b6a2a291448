//! The bijection `f : eSPP(n,m) → stairPP(n,m)` preserving `#S`, the
//! order-preserving refinements `g_π : S(π) → S(f(π))`, and the end-to-end
//! bijection `SPP(n,M) ↔ QTCPP(n,M)` for both parities of `M`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corr::{
    qtcpp_to_stair_even, qtcpp_to_stair_odd, stair_to_qtcpp_even, stair_to_qtcpp_odd, CorrError, MarkedStair,
};
use crate::espp_chain::{espp_chain, EsppChain};
use crate::imjm::{lift, Lift};
use crate::paths::Word;
use crate::pp::{enumerate, stat, validate, Class, ClassTag, Kind, PlanePartition, PpError, Stat};
use crate::signed::{compose, Compose, HopCtx, Inverse, Side, SijError, Sijection, TraceHop};
use crate::stair_chain::{stair_chain, stair_rotation, StairChain, StairRotation};
use crate::tableaux::{spp_join, spp_split, Marks, TableauError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Class(#[from] PpError),
    #[error("{0} is not a member of {1}")]
    NotMember(String, String),
    #[error(transparent)]
    Chain(#[from] SijError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error("statistic sets differ in size: {0:?} vs {1:?}")]
    Cardinality(BTreeSet<usize>, BTreeSet<usize>),
    #[error("chain ended on the wrong side")]
    WrongSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

pub type FullChain =
    Compose<EsppChain, Compose<Inverse<Lift<Word>>, Compose<Inverse<StairChain>, Inverse<StairRotation>>>>;

/// `(eSPP(n,m), S) ⇒ (stairPP(n,m), S)` for `m ≥ 1`.
pub fn full_chain(n: usize, m: usize) -> FullChain {
    compose(
        espp_chain(n, m),
        compose(
            Inverse(lift(m)),
            compose(Inverse(stair_chain(n, m)), Inverse(stair_rotation(n, m))),
        ),
    )
}

fn member(tag: &ClassTag, pi: &PlanePartition) -> Result<(), PipelineError> {
    if validate(tag, pi)? {
        Ok(())
    } else {
        Err(PipelineError::NotMember(
            format!("{:?}", pi.rows),
            format!("{}({}, {})", tag.class, tag.n, tag.bound),
        ))
    }
}

/// `f` on one element, with an optional trace of the intermediate stages.
pub fn f_apply(
    pi: &PlanePartition,
    m: usize,
    dir: Direction,
    ctx: &mut HopCtx,
) -> Result<PlanePartition, PipelineError> {
    let n = pi.n();
    let (from, to) = match dir {
        Direction::Forward => (Class::Espp, Class::Stair),
        Direction::Backward => (Class::Stair, Class::Espp),
    };
    member(&ClassTag::new(from, n, m as u32), pi)?;
    if m == 0 {
        return Ok(PlanePartition::zero(to.kind(), n));
    }
    let chain = full_chain(n, m);
    let out = match dir {
        Direction::Forward => chain.hop(Side::Dom(pi.clone()), ctx)?.to.cod(),
        Direction::Backward => chain.hop(Side::Cod(pi.clone()), ctx)?.to.dom(),
    };
    out.ok_or(PipelineError::WrongSide)
}

/// `f` in either direction.
pub fn f_espp_stair(pi: &PlanePartition, m: usize, dir: Direction) -> Result<PlanePartition, PipelineError> {
    f_apply(pi, m, dir, &mut HopCtx::default())
}

/// `f` with the list of visited intermediate stages.
pub fn f_traced(
    pi: &PlanePartition,
    m: usize,
    dir: Direction,
) -> Result<(PlanePartition, Vec<TraceHop>), PipelineError> {
    let mut ctx = HopCtx::tracing();
    let out = f_apply(pi, m, dir, &mut ctx)?;
    Ok((out, ctx.trace.unwrap_or_default()))
}

/// `S` on eSPP (first-row entries below `2m`) or stairPP (non-zero
/// anti-diagonal entries).
pub fn s_set(pi: &PlanePartition, m: usize) -> Result<BTreeSet<usize>, PipelineError> {
    let class = if pi.kind == Kind::Shifted {
        Class::Espp
    } else {
        Class::Stair
    };
    Ok(stat(&ClassTag::new(class, pi.n(), m as u32), pi, Stat::S)?)
}

/// The order-preserving bijection between two sets of equal size.
pub fn g_refine(from: &BTreeSet<usize>, to: &BTreeSet<usize>) -> Result<BTreeMap<usize, usize>, PipelineError> {
    if from.len() != to.len() {
        return Err(PipelineError::Cardinality(from.clone(), to.clone()));
    }
    Ok(from.iter().copied().zip(to.iter().copied()).collect())
}

/// Moves marks along a bijection of their domains.
pub fn transport(marks: &Marks, g: &BTreeMap<usize, usize>) -> Marks {
    let mut pairs: Vec<(usize, u8)> = marks
        .domain
        .iter()
        .zip(&marks.values)
        .map(|(d, &v)| (g[d], v))
        .collect();
    pairs.sort();
    Marks {
        domain: pairs.iter().map(|p| p.0).collect(),
        values: pairs.iter().map(|p| p.1).collect(),
    }
}

/// `f` tabulated for one `(n, m)`.
#[derive(Clone, Debug, Default)]
pub struct FTable {
    pub forward: HashMap<PlanePartition, PlanePartition>,
    pub backward: HashMap<PlanePartition, PlanePartition>,
}

impl FTable {
    pub fn build(n: usize, m: usize) -> Result<Self, PipelineError> {
        let mut t = FTable::default();
        for pi in enumerate(&ClassTag::new(Class::Espp, n, m as u32))? {
            let img = f_espp_stair(&pi, m, Direction::Forward)?;
            t.backward.insert(img.clone(), pi.clone());
            t.forward.insert(pi, img);
        }
        Ok(t)
    }
}

/// The bijection `SPP(n,M) ↔ QTCPP(n,M)`, optionally backed by a table of `f`.
#[derive(Clone, Debug)]
pub struct SppQtcpp {
    pub n: usize,
    pub big_m: u32,
    table: Option<FTable>,
}

impl SppQtcpp {
    /// Element-wise evaluation of `f`.
    pub fn lazy(n: usize, big_m: u32) -> Self {
        SppQtcpp { n, big_m, table: None }
    }

    /// Tabulates `f` first; suited to sweeps over a whole class.
    pub fn tabulated(n: usize, big_m: u32) -> Result<Self, PipelineError> {
        Ok(SppQtcpp {
            n,
            big_m,
            table: Some(FTable::build(n, (big_m / 2) as usize)?),
        })
    }

    pub fn with_table(n: usize, big_m: u32, table: FTable) -> Self {
        SppQtcpp {
            n,
            big_m,
            table: Some(table),
        }
    }

    fn m(&self) -> usize {
        (self.big_m / 2) as usize
    }

    fn f(&self, pi: &PlanePartition, dir: Direction) -> Result<PlanePartition, PipelineError> {
        if let Some(t) = &self.table {
            let map = match dir {
                Direction::Forward => &t.forward,
                Direction::Backward => &t.backward,
            };
            if let Some(v) = map.get(pi) {
                return Ok(v.clone());
            }
        }
        f_espp_stair(pi, self.m(), dir)
    }

    pub fn apply(&self, pi: &PlanePartition, dir: Direction) -> Result<PlanePartition, PipelineError> {
        match dir {
            Direction::Forward => self.forward(pi),
            Direction::Backward => self.backward(pi),
        }
    }

    pub fn forward(&self, pi: &PlanePartition) -> Result<PlanePartition, PipelineError> {
        member(&ClassTag::new(Class::Spp, self.n, self.big_m), pi)?;
        let m = self.m();
        let (base, marks) = spp_split(pi, self.big_m)?;
        let image = self.f(&base, Direction::Forward)?;
        if self.big_m % 2 == 1 {
            return Ok(stair_to_qtcpp_odd(&image, &marks.values, m as u32)?);
        }
        let g = g_refine(&s_set(&base, m)?, &s_set(&image, m)?)?;
        let ms = MarkedStair {
            base: image,
            marks: transport(&marks, &g),
        };
        Ok(stair_to_qtcpp_even(&ms, m as u32)?)
    }

    pub fn backward(&self, q: &PlanePartition) -> Result<PlanePartition, PipelineError> {
        member(&ClassTag::new(Class::Qtcpp, self.n, self.big_m), q)?;
        let m = self.m();
        if self.big_m % 2 == 1 {
            let (image, t) = qtcpp_to_stair_odd(q, m as u32);
            let base = self.f(&image, Direction::Backward)?;
            return Ok(spp_join(&base, &Marks::total(t))?);
        }
        let ms = qtcpp_to_stair_even(q, m as u32);
        let base = self.f(&ms.base, Direction::Backward)?;
        let g = g_refine(&s_set(&ms.base, m)?, &s_set(&base, m)?)?;
        Ok(spp_join(&base, &transport(&ms.marks, &g))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(rows: Vec<Vec<u32>>) -> PlanePartition {
        PlanePartition::shifted(rows)
    }

    #[test]
    fn smallest_f_is_forced() {
        let f = |v| f_espp_stair(&sh(vec![vec![v]]), 1, Direction::Forward).unwrap();
        assert_eq!(f(2), PlanePartition::staircase(vec![vec![0]]));
        assert_eq!(f(0), PlanePartition::staircase(vec![vec![1]]));
    }

    #[test]
    fn refinement_is_order_preserving() {
        let a: BTreeSet<usize> = [2, 3, 4].into();
        let b: BTreeSet<usize> = [1, 2, 4].into();
        let g = g_refine(&a, &b).unwrap();
        assert_eq!(g, BTreeMap::from([(2, 1), (3, 2), (4, 4)]));
        assert!(g_refine(&a, &BTreeSet::new()).is_err());
        assert!(g_refine(&BTreeSet::new(), &BTreeSet::new()).unwrap().is_empty());
    }

    #[test]
    fn f_is_a_compatible_bijection_small() {
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)] {
            let t = FTable::build(n, m).unwrap();
            let stair = enumerate(&ClassTag::new(Class::Stair, n, m as u32)).unwrap();
            assert_eq!(t.backward.len(), stair.len());
            for (pi, img) in &t.forward {
                assert_eq!(s_set(pi, m).unwrap().len(), s_set(img, m).unwrap().len());
                assert_eq!(&f_espp_stair(img, m, Direction::Backward).unwrap(), pi);
            }
        }
    }

    #[test]
    fn worked_spp_round_trips() {
        let pi = sh(vec![vec![4, 4, 3, 3], vec![3, 3, 3], vec![3, 1], vec![0]]);
        let b = SppQtcpp::lazy(4, 4);
        let q = b.forward(&pi).unwrap();
        assert_eq!(validate(&ClassTag::new(Class::Qtcpp, 4, 4), &q), Ok(true));
        assert_eq!(b.backward(&q).unwrap(), pi);
    }

    #[test]
    fn end_to_end_small() {
        for n in 1..=3 {
            for big_m in 0..=4u32 {
                let b = SppQtcpp::tabulated(n, big_m).unwrap();
                let spp = enumerate(&ClassTag::new(Class::Spp, n, big_m)).unwrap();
                let mut images = BTreeSet::new();
                for pi in &spp {
                    let q = b.forward(pi).unwrap();
                    assert_eq!(&b.backward(&q).unwrap(), pi);
                    images.insert(q);
                }
                assert_eq!(images.len(), spp.len());
            }
        }
    }
}
