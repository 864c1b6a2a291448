//! One line per acceptance criterion. Every criterion runs to completion and
//! prints its verdict before the test asserts on the whole set.

mod common;

use std::time::{Duration, Instant};

use common::{count_by_rows, Family};
use sppq::imjm::{assemble, i_support, j_support};
use sppq::pp::{enumerate, Class, ClassTag};
use sppq::signed::check_validity;
use sppq::verify::{self, SuiteReport};
use sppq::{espp_chain, stair_chain};

const KERNEL_SEED: u64 = 0x5eed_2024;
const KERNEL_INSTANCES: usize = 10_000;
const EQUI_LIMIT: Duration = Duration::from_secs(60);
const ROUNDTRIP_LIMIT: Duration = Duration::from_secs(180);
const ROUNDTRIP_JOBS: usize = 4;

struct Verdict {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn from_report(id: usize, name: &'static str, r: &SuiteReport, elapsed: Duration, limit: Option<Duration>) -> Verdict {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let mut detail = format!("{} checks, {} failures, {:.2?}", r.checked, r.failures.len(), elapsed);
    if let Some(l) = limit {
        detail.push_str(&format!(" (limit {l:?})"));
    }
    if let Some(first) = r.failures.first() {
        detail.push_str(&format!("; first failure: {first}"));
    }
    Verdict {
        id,
        name,
        pass: r.passed() && in_time,
        detail,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn library_count(class: Class, n: usize, bound: u32) -> u64 {
    enumerate(&ClassTag::new(class, n, bound)).unwrap().len() as u64
}

/// Both enumerators on every class, then the equalities between classes.
fn equinumerosity() -> SuiteReport {
    let mut r = SuiteReport {
        suite: "equinumerosity".into(),
        ..Default::default()
    };
    let pairs = [
        (Class::Spp, Family::Spp),
        (Class::Qtcpp, Family::Qtcpp),
        (Class::Pstair, Family::Pstair),
    ];
    for n in 1..=4 {
        for big_m in 0..=5u32 {
            let mut counts = Vec::new();
            for (class, family) in pairs {
                let (a, b) = (library_count(class, n, big_m), count_by_rows(family, n, big_m));
                r.checked += 1;
                if a != b {
                    r.failures
                        .push(format!("{class}({n},{big_m}): enumerator {a}, transfer {b}"));
                }
                counts.push(a);
            }
            r.checked += 1;
            if counts.iter().any(|&c| c != counts[0]) {
                r.failures
                    .push(format!("n={n} M={big_m}: SPP, QTCPP, pstairPP counts {counts:?}"));
            }
        }
        for m in 0..=2u32 {
            let e = library_count(Class::Espp, n, m);
            let s = library_count(Class::Stair, n, m);
            r.checked += 3;
            if e != count_by_rows(Family::Espp, n, m) || s != count_by_rows(Family::Stair, n, m) || e != s {
                r.failures.push(format!("n={n} m={m}: eSPP {e}, stairPP {s}"));
            }
        }
    }
    r.checked += 1;
    if library_count(Class::Spp, 2, 1) != 4 || library_count(Class::Qtcpp, 2, 1) != 4 {
        r.failures.push("spot value #SPP(2,1) = #QTCPP(2,1) = 4".into());
    }
    r
}

/// The randomized kernel plus the validity checker on each path and index
/// sijection at a small size.
fn kernel() -> SuiteReport {
    let mut r = verify::sij_kernel(KERNEL_SEED, KERNEL_INSTANCES);
    let stair = enumerate(&ClassTag::new(Class::Stair, 3, 2)).unwrap();
    let espp = enumerate(&ClassTag::new(Class::Espp, 2, 2)).unwrap();
    let stair22 = enumerate(&ClassTag::new(Class::Stair, 2, 2)).unwrap();
    let checks = [
        (
            "rotation",
            check_validity(&stair_chain::stair_rotation(3, 2), &stair, &stair).map(|_| ()),
        ),
        (
            "stair chain",
            check_validity(
                &stair_chain::stair_chain(2, 2),
                &stair22,
                &stair_chain::factored_support(2, 2),
            )
            .map(|_| ()),
        ),
        (
            "espp chain",
            check_validity(
                &espp_chain::espp_chain(2, 2),
                &espp,
                &espp_chain::factored_support(2, 2),
            )
            .map(|_| ()),
        ),
        (
            "assembly",
            check_validity(&assemble(3), &i_support(3), &j_support(3)).map(|_| ()),
        ),
    ];
    for (name, res) in checks {
        r.checked += 1;
        if let Err(e) = res {
            r.failures.push(format!("{name}: {e}"));
        }
    }
    r
}

#[test]
fn acceptance() {
    let mut verdicts = Vec::new();

    let (r, t) = timed(verify::examples);
    verdicts.push(from_report(1, "golden examples", &r, t, Some(Duration::from_secs(1))));

    let (r, t) = timed(equinumerosity);
    verdicts.push(from_report(2, "equinumerosity", &r, t, Some(EQUI_LIMIT)));

    let (r, t) = timed(|| verify::roundtrip(4, 5, ROUNDTRIP_JOBS));
    verdicts.push(from_report(3, "end-to-end bijection", &r, t, Some(ROUNDTRIP_LIMIT)));

    let (r, t) = timed(|| verify::compat(4, 2));
    verdicts.push(from_report(4, "compatibility ledger", &r, t, None));

    let (r, t) = timed(|| verify::lgv_counts(3, 2));
    verdicts.push(from_report(5, "LGV suite", &r, t, None));

    let (r, t) = timed(|| verify::imjm_fibres(3, 4));
    verdicts.push(from_report(6, "I/J suite", &r, t, None));

    let (r, t) = timed(kernel);
    verdicts.push(from_report(7, "kernel suite", &r, t, None));

    let (r, t) = timed(verify::calibration);
    verdicts.push(from_report(8, "calibration gates", &r, t, None));

    for v in &verdicts {
        println!(
            "criterion {} ({}): {}: {}",
            v.id,
            v.name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let failed: Vec<usize> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
