//! Exhaustive verification suites over desk-scale parameter grids. Each
//! suite returns a report listing every failure it found.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corr::{pstair_to_qtcpp, qtcpp_to_pstair, qtcpp_to_stair_even, qtcpp_to_stair_odd};
use crate::espp_chain::{self, EsppLgv, ThresholdOrder};
use crate::imjm::{self, check_assembly, i_fibres, j_fibres, pair_cancel, u_vectors, MultiCancel, PairElem, Telescope};
use crate::paths::{lgv_step, lgv_step_by_sink, PathConfig};
use crate::pipeline::{s_set, FTable, SppQtcpp};
use crate::pp::{enumerate, validate, Class, ClassTag, PlanePartition};
use crate::signed::{check_validity, compose, Atom, Side, Sign, Signed, Sijection, TableSijection};
use crate::stair_chain::{self, down_support, up_support, LevelOrder, UpLgv};
use crate::tableaux::{conj, multi_extract, spp_split, Marks, Tableau};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    fn result<T, E: std::fmt::Display>(&mut self, r: Result<T, E>, what: &str) -> Option<T> {
        self.checked += 1;
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn tag(class: Class, n: usize, bound: u32) -> ClassTag {
    ClassTag::new(class, n, bound)
}

fn all(class: Class, n: usize, bound: u32) -> Vec<PlanePartition> {
    enumerate(&tag(class, n, bound)).expect("grid within enumeration guard")
}

// ---------------------------------------------------------------------------

/// The worked examples: the parity-staircase map, both splits of QTCPP,
/// conjugation, double extraction and the composite SPP split.
pub fn examples() -> SuiteReport {
    let mut r = SuiteReport::new("examples");
    let st = PlanePartition::staircase;
    let p = st(vec![vec![8, 6, 6, 3], vec![4, 4, 0], vec![4, 2], vec![1]]);
    let q = st(vec![vec![8, 7, 7, 4], vec![6, 6, 2], vec![6, 4], vec![3]]);
    r.check(pstair_to_qtcpp(&p, 8) == q, || "pstairPP → QTCPP".into());
    r.check(qtcpp_to_pstair(&q, 8) == p, || "QTCPP → pstairPP".into());

    let q = st(vec![vec![7, 6, 4, 3], vec![5, 5, 3], vec![5, 2], vec![4]]);
    let (b, t) = qtcpp_to_stair_odd(&q, 3);
    r.check(
        b == st(vec![vec![3, 2, 0, 0], vec![1, 1, 0], vec![1, 1], vec![0]]) && t == vec![1, 1, 1, 0],
        || format!("odd split gave {:?} {:?}", b.rows, t),
    );

    let q = st(vec![vec![8, 7, 5, 3], vec![6, 6, 4], vec![6, 2], vec![5]]);
    let ms = qtcpp_to_stair_even(&q, 4);
    r.check(
        ms.base == st(vec![vec![4, 3, 1, 1], vec![2, 2, 0], vec![2, 2], vec![1]]) && ms.marks.domain == vec![1, 3, 4],
        || format!("even split gave {:?} on {:?}", ms.base.rows, ms.marks.domain),
    );

    let spp = PlanePartition::shifted(vec![vec![4, 4, 3, 3], vec![3, 3, 3], vec![3, 1], vec![0]]);
    let u = conj(&spp);
    let expect_u = Tableau::from_rows(4, vec![vec![4, 4, 4, 2], vec![3, 3, 3], vec![2, 1, 1]]);
    r.check(u == expect_u, || format!("conjugate gave {:?}", u.rows));

    match multi_extract(&expect_u, &[4, 2, 2, 0]) {
        Ok(rec) => r.check(
            rec.base == Tableau::from_rows(4, vec![vec![4, 4, 3, 1], vec![3, 3], vec![2, 1]])
                && rec.letters == vec![2, 4],
            || format!("double extraction gave {:?} {:?}", rec.base.rows, rec.letters),
        ),
        Err(e) => r.check(false, || format!("double extraction failed: {e}")),
    }

    match spp_split(&spp, 4) {
        Ok((base, marks)) => r.check(
            base == PlanePartition::shifted(vec![vec![4, 3, 3, 2], vec![2, 2, 2], vec![2, 1], vec![0]])
                && marks
                    == Marks {
                        domain: vec![2, 3, 4],
                        values: vec![1, 0, 1],
                    },
            || format!("composite split gave {:?} {:?}", base.rows, marks),
        ),
        Err(e) => r.check(false, || format!("composite split failed: {e}")),
    }
    r
}

/// Class counts across the grid: `#SPP = #QTCPP = #pstairPP` for each
/// `(n, M)` and `#eSPP = #stairPP` for each `(n, m)`.
pub fn equinumerosity(max_n: usize, max_big_m: u32) -> SuiteReport {
    let mut r = SuiteReport::new("equinumerosity");
    for n in 1..=max_n {
        for big_m in 0..=max_big_m {
            let spp = all(Class::Spp, n, big_m).len();
            let q = all(Class::Qtcpp, n, big_m).len();
            let p = all(Class::Pstair, n, big_m).len();
            r.check(spp == q && q == p, || {
                format!("n={n} M={big_m}: SPP {spp}, QTCPP {q}, pstairPP {p}")
            });
        }
        for m in 0..=max_big_m / 2 {
            let e = all(Class::Espp, n, m).len();
            let s = all(Class::Stair, n, m).len();
            r.check(e == s, || format!("n={n} m={m}: eSPP {e}, stairPP {s}"));
        }
    }
    r
}

/// Both directions of the end-to-end bijection on every member, with the
/// images checked for class membership and distinctness. Parameter pairs
/// are processed on `jobs` workers.
pub fn roundtrip(max_n: usize, max_big_m: u32, jobs: usize) -> SuiteReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let grid: Vec<(usize, usize)> = (1..=max_n)
        .flat_map(|n| (0..=max_big_m as usize / 2).map(move |m| (n, m)))
        .collect();
    let tables: Vec<(usize, usize, Result<FTable, String>)> = pool.install(|| {
        grid.par_iter()
            .map(|&(n, m)| (n, m, FTable::build(n, m).map_err(|e| e.to_string())))
            .collect()
    });
    let tables: HashMap<(usize, usize), Result<FTable, String>> =
        tables.into_iter().map(|(n, m, t)| ((n, m), t)).collect();
    let tasks: Vec<(usize, u32)> = (1..=max_n)
        .flat_map(|n| (0..=max_big_m).map(move |mm| (n, mm)))
        .collect();
    let reports: Vec<SuiteReport> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(n, big_m)| {
                let mut r = SuiteReport::new("roundtrip");
                let table = match &tables[&(n, (big_m / 2) as usize)] {
                    Ok(t) => t.clone(),
                    Err(e) => {
                        r.check(false, || format!("n={n} M={big_m}: f table: {e}"));
                        return r;
                    }
                };
                let b = SppQtcpp::with_table(n, big_m, table);
                let qt = tag(Class::Qtcpp, n, big_m);
                let mut images = BTreeSet::new();
                for pi in all(Class::Spp, n, big_m) {
                    let Some(q) = r.result(b.forward(&pi), &format!("n={n} M={big_m} forward {:?}", pi.rows)) else {
                        continue;
                    };
                    r.check(validate(&qt, &q) == Ok(true), || {
                        format!("n={n} M={big_m}: {:?} not a QTCPP", q.rows)
                    });
                    let back = b.backward(&q);
                    r.check(back.as_ref() == Ok(&pi), || {
                        format!("n={n} M={big_m}: {:?} came back as {back:?}", pi.rows)
                    });
                    images.insert(q);
                }
                let total = all(Class::Qtcpp, n, big_m).len();
                r.check(images.len() == total, || {
                    format!("n={n} M={big_m}: {} images of {total}", images.len())
                });
                r
            })
            .collect()
    });
    let mut r = SuiteReport::new("roundtrip");
    for x in reports {
        r.absorb(x);
    }
    r
}

/// `#S(π) = #S(f(π))` on every eSPP, and involutivity of the refinements.
pub fn compat(max_n: usize, max_m: usize) -> SuiteReport {
    let mut r = SuiteReport::new("compat");
    for n in 1..=max_n {
        for m in 0..=max_m {
            let Some(t) = r.result(FTable::build(n, m), &format!("n={n} m={m} f table")) else {
                continue;
            };
            for (pi, img) in &t.forward {
                let (a, b) = (s_set(pi, m).unwrap_or_default(), s_set(img, m).unwrap_or_default());
                r.check(a.len() == b.len(), || {
                    format!("n={n} m={m}: S{a:?} vs S{b:?} at {:?}", pi.rows)
                });
                if let (Ok(g), Ok(h)) = (crate::pipeline::g_refine(&a, &b), crate::pipeline::g_refine(&b, &a)) {
                    r.check(g.iter().all(|(x, y)| h.get(y) == Some(x)), || {
                        format!("refinement not involutive at {:?}", pi.rows)
                    });
                }
                r.check(t.backward.get(img) == Some(pi), || {
                    format!("f not injective at {:?}", pi.rows)
                });
            }
        }
    }
    r
}

fn lgv_checks<S>(r: &mut SuiteReport, label: &str, support: &[PathConfig], step: S, ni_expected: usize)
where
    S: Fn(&PathConfig) -> Result<PathConfig, crate::paths::PathError>,
{
    let signed: i64 = support.iter().map(|c| c.sign().value()).sum();
    let ni = support.iter().filter(|c| c.is_non_intersecting()).count();
    r.check(signed == ni as i64 && ni == ni_expected, || {
        format!("{label}: signed sum {signed}, non-intersecting {ni}, expected {ni_expected}")
    });
    for c in support.iter().filter(|c| !c.is_non_intersecting()) {
        match step(c) {
            Ok(d) => {
                let ok = d != *c
                    && d.sign() == -c.sign()
                    && d.edge_multiset() == c.edge_multiset()
                    && step(&d).as_ref() == Ok(c);
                r.check(ok, || format!("{label}: bad LGV orbit at {c:?}"));
            }
            Err(e) => r.check(false, || format!("{label}: {e}")),
        }
    }
}

/// The LGV identity on the column, level and threshold configurations.
pub fn lgv_counts(max_n: usize, max_m: usize) -> SuiteReport {
    let mut r = SuiteReport::new("lgv-counts");
    for n in 1..=max_n {
        for m in 1..=max_m {
            let stairs = all(Class::Stair, n, m as u32).len();
            lgv_checks(
                &mut r,
                &format!("columns n={n} m={m}"),
                &down_support(n, m),
                lgv_step,
                stairs,
            );
            lgv_checks(
                &mut r,
                &format!("levels n={n} m={m}"),
                &up_support(n, m),
                lgv_step_by_sink,
                stairs,
            );
            let espp = all(Class::Espp, n, m as u32).len();
            let cfgs: Vec<PathConfig> = espp_chain::lgv_support(n, m).iter().map(|t| t.to_paths(n)).collect();
            lgv_checks(&mut r, &format!("thresholds n={n} m={m}"), &cfgs, lgv_step, espp);
        }
    }
    r
}

/// Telescoping, the union cancellations, the assembly with its slot
/// permutations, and the `|η|`-fibre counts.
pub fn imjm_fibres(max_assembly: usize, max_fibre: usize) -> SuiteReport {
    let mut r = SuiteReport::new("imjm-fibers");
    for x in -4..=4 {
        for b in -4..=4 {
            let t = Telescope { x, b };
            r.result(
                check_validity(&t, &t.support(), &[imjm::Surv::Pos, imjm::Surv::Neg]),
                &format!("telescope x={x} b={b}"),
            );
            let total: i64 = t.support().iter().map(|e| e.sign().value()).sum::<i64>();
            r.check(total == 0, || format!("telescope x={x} b={b}: interior sum {total}"));
        }
    }
    for b1 in 1..=3 {
        for b2 in 1..=3 {
            let sup: Vec<PairElem> = u_vectors(&[b1, b2])
                .into_iter()
                .flat_map(|u| {
                    [false, true].map(|s| PairElem {
                        u1: u[0],
                        u2: u[1],
                        swapped: s,
                    })
                })
                .collect();
            r.result(
                check_validity(&pair_cancel(b1, b2), &sup, &[]),
                &format!("pair cancellation b=({b1},{b2})"),
            );
        }
    }
    let shapes: Vec<(Vec<i64>, usize)> = vec![
        (vec![1, 2, 3], 1),
        (vec![3, 1, 2], 1),
        (vec![2, 2, 2], 1),
        (vec![1, 2, 1, 3], 0),
        (vec![3, 3, 1, 2], 0),
        (vec![1, 2, 3, 1], 2),
    ];
    for (b, f) in shapes {
        let c = MultiCancel::new(b.clone(), f);
        let sup = c.support();
        let total: i64 = sup.iter().map(|e| e.sign().value()).sum();
        r.check(total == 0, || format!("union b={b:?} f={f}: signed count {total}"));
        r.result(check_validity(&c, &sup, &[]), &format!("union b={b:?} f={f}"));
    }
    for m in 1..=max_assembly {
        r.result(check_assembly(m), &format!("assembly m={m}"));
    }
    for m in 1..=max_fibre {
        let (i, j) = (i_fibres(m), j_fibres(m));
        r.check(i == j, || format!("m={m}: fibres differ"));
    }
    r
}

/// Random sijections composed by zig-zag: validity, termination within the
/// hop bound and preservation of a statistic both factors preserve.
pub fn sij_kernel(seed: u64, instances: usize) -> SuiteReport {
    let mut r = SuiteReport::new("sij-kernel");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut made = 0;
    while made < instances {
        let stats = rng.gen_range(1..=3u32);
        let mut sets: Vec<Vec<Atom>> = vec![Vec::new(); 3];
        let mut stat_of: HashMap<(usize, u32), u32> = HashMap::new();
        let mut id = 0;
        for v in 0..stats {
            // The three sets share one signed count per statistic value.
            let pos = rng.gen_range(0..4usize);
            let neg = rng.gen_range(0..3usize);
            for (k, set) in sets.iter_mut().enumerate() {
                let shift = if k == 0 { 0 } else { rng.gen_range(0..3usize) };
                for _ in 0..pos + shift {
                    set.push(Atom { id, sign: Sign::Pos });
                    stat_of.insert((k, id), v);
                    id += 1;
                }
                for _ in 0..neg + shift {
                    set.push(Atom { id, sign: Sign::Neg });
                    stat_of.insert((k, id), v);
                    id += 1;
                }
            }
        }
        let by_stat =
            |k: usize, v: u32| -> Vec<Atom> { sets[k].iter().filter(|a| stat_of[&(k, a.id)] == v).cloned().collect() };
        let mut first = TableSijection::default();
        let mut second = TableSijection::default();
        let mut ok = true;
        for v in 0..stats {
            match (
                TableSijection::random(&by_stat(0, v), &by_stat(1, v), &mut rng),
                TableSijection::random(&by_stat(1, v), &by_stat(2, v), &mut rng),
            ) {
                (Some(a), Some(b)) => {
                    first.rule.extend(a.rule);
                    second.rule.extend(b.rule);
                }
                _ => ok = false,
            }
        }
        if !ok {
            continue;
        }
        made += 1;
        let comp = compose(&first, &second).with_bound(10_000);
        if let Err(e) = check_validity(&comp, &sets[0], &sets[2]) {
            r.check(false, || format!("instance {made}: {e}"));
            continue;
        }
        let stat = |k: usize, a: &Atom| stat_of[&(k, a.id)];
        let res = crate::signed::check_compatibility(
            &comp,
            sets[0]
                .iter()
                .cloned()
                .map(Side::Dom)
                .chain(sets[2].iter().cloned().map(Side::Cod)),
            |a| stat(0, a),
            |a| stat(2, a),
        );
        r.result(res, &format!("instance {made} compatibility"));
    }
    r
}

/// Exactly one level orientation encodes staircase partitions as confined
/// non-intersecting paths that decode back, and exactly one threshold
/// orientation pairs up the eSPP paths.
pub fn calibration() -> SuiteReport {
    let mut r = SuiteReport::new("calibration");
    let grid = [(2, 1), (2, 2), (3, 2)];
    let stair_ok = |order: LevelOrder| {
        grid.iter().all(|&(n, m)| {
            all(Class::Stair, n, m as u32).iter().all(|pi| {
                let lgv = UpLgv { n, m, order };
                let cfg = stair_chain::up_encode_with(pi, m, order);
                cfg.is_non_intersecting()
                    && cfg.paths.iter().all(|p| crate::paths::in_gamma_prime(p, m as i64))
                    && lgv.apply(Side::Cod(cfg)) == Ok(Side::Dom(pi.clone()))
            })
        })
    };
    let passing: Vec<LevelOrder> = [LevelOrder::Descending, LevelOrder::Ascending]
        .into_iter()
        .filter(|&o| stair_ok(o))
        .collect();
    r.check(passing == vec![LevelOrder::Descending], || {
        format!("level orientations passing: {passing:?}")
    });

    let espp_ok = |order: ThresholdOrder| {
        grid.iter().all(|&(n, m)| {
            all(Class::Espp, n, m as u32).iter().all(|pi| {
                let lgv = EsppLgv { n, m, order };
                match lgv.encode(pi) {
                    Some(tc) => {
                        tc.to_paths(n).is_non_intersecting() && lgv.apply(Side::Cod(tc)) == Ok(Side::Dom(pi.clone()))
                    }
                    None => false,
                }
            })
        })
    };
    let passing: Vec<ThresholdOrder> = [ThresholdOrder::Descending, ThresholdOrder::Ascending]
        .into_iter()
        .filter(|&o| espp_ok(o))
        .collect();
    r.check(passing == vec![ThresholdOrder::Descending], || {
        format!("threshold orientations passing: {passing:?}")
    });
    r
}

pub const SUITES: [&str; 8] = [
    "examples",
    "equinumerosity",
    "roundtrip",
    "compat",
    "lgv-counts",
    "imjm-fibers",
    "sij-kernel",
    "calibration",
];

/// Runs a named suite with its default grid.
pub fn run_suite(name: &str, seed: u64, jobs: usize) -> Option<SuiteReport> {
    Some(match name {
        "examples" => examples(),
        "equinumerosity" => equinumerosity(4, 5),
        "roundtrip" => roundtrip(4, 5, jobs),
        "compat" => compat(4, 2),
        "lgv-counts" => lgv_counts(3, 2),
        "imjm-fibers" => imjm_fibres(3, 4),
        "sij-kernel" => sij_kernel(seed, 10_000),
        "calibration" => calibration(),
        _ => return None,
    })
}
