//! Exhaustive identity suites over small grids.
//!
//! Each suite enumerates its instances up front, evaluates them through
//! [`Exec::map`] and reports counts plus the first failing instances.

use std::collections::BTreeMap;
use std::fmt;

use crate::completed::{coefficient_cgg, completed_volume_with, graph_form_cgg, sunflower_gvec};
use crate::error::Result;
use crate::exact::{fmt_rational, parse_rational, Rational};
use crate::exec::Exec;
use crate::graphs::{enumerate_sunflowers_with, partitions};
use crate::reference::{Example, EXAMPLES};
use crate::ribbon::{alpha_brute, alpha_closed, f_count, g_closed, g_count, s_sum, vandermonde_sides, StarData};
use crate::signature::Signature;
use crate::volumes::VolumeTable;

/// How many failing instances a report keeps verbatim.
pub const MAX_LISTED_FAILURES: usize = 25;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// Instances where one side is undefined.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn collect(name: &str, outcomes: Vec<Outcome>) -> Self {
        let mut r = SuiteReport { name: name.to_string(), ..Default::default() };
        for o in outcomes {
            match o {
                Outcome::Pass => r.passed += 1,
                Outcome::Skip => r.skipped += 1,
                Outcome::Fail(msg) => {
                    r.failed += 1;
                    if r.failures.len() < MAX_LISTED_FAILURES {
                        r.failures.push(msg);
                    }
                }
            }
        }
        r
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} passed, {} failed, {} skipped",
            if self.ok() { "PASS" } else { "FAIL" },
            self.name,
            self.passed,
            self.failed,
            self.skipped
        )
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

fn compare(lhs: Result<Rational>, rhs: Result<Rational>, what: impl FnOnce() -> String) -> Outcome {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) if a == b => Outcome::Pass,
        (Ok(a), Ok(b)) => Outcome::Fail(format!("{}: {} vs {}", what(), fmt_rational(&a), fmt_rational(&b))),
        _ => Outcome::Skip,
    }
}

/// Nonincreasing lists of positive integers with sum at most `max_total`
/// (the empty list included).
pub fn genus_lists(max_total: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for t in 1..=max_total {
        out.extend(partitions(t));
    }
    out
}

/// Grid bounds shared by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_genus: Option<i64>,
    pub max_h: Option<usize>,
}

impl Bounds {
    pub const DEFAULT: Bounds = Bounds { max_genus: None, max_h: None };
}

/// `alpha_closed = alpha_brute` over `ε ∈ {0,1}`, `u ∈ [-4,4]`,
/// `m2 ∈ {3,5,7,9}`, `L'` of total genus `≤ 3` and `|H| ≤ 3`.
pub fn alpha_suite(bounds: Bounds, exec: Exec) -> SuiteReport {
    let lists = genus_lists(bounds.max_genus.unwrap_or(3));
    let max_h = bounds.max_h.unwrap_or(3) as i64;
    let mut grid = Vec::new();
    for eps in 0..=1 {
        for u in -4..=4 {
            for m2 in [3, 5, 7, 9] {
                for l in &lists {
                    for hs in 0..=max_h {
                        grid.push((eps, u, m2, l.clone(), hs));
                    }
                }
            }
        }
    }
    let out = exec.map(&grid, |(eps, u, m2, l, hs)| {
        compare(alpha_closed(*eps, *u, *m2, l, *hs), alpha_brute(*eps, *u, *m2, l, *hs), || {
            format!("alpha eps={eps} u={u} m2={m2} L'={l:?} |H|={hs}")
        })
    });
    SuiteReport::collect("alpha", out)
}

/// `S_{L'} = 0` for `m1, m2 ∈ {3,5,7,9}` and every split of every genus list
/// of total `≤ 4` into `L'` and `U`.
pub fn s_sum_suite(bounds: Bounds, exec: Exec) -> SuiteReport {
    let mut grid = Vec::new();
    for m1 in [3, 5, 7, 9] {
        for m2 in [3, 5, 7, 9] {
            for gs in genus_lists(bounds.max_genus.unwrap_or(4)) {
                for mask in 0u32..(1 << gs.len()) {
                    let (l, u): (Vec<_>, Vec<_>) = gs.iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
                    let l: Vec<i64> = l.into_iter().map(|(_, g)| *g).collect();
                    let u: Vec<i64> = u.into_iter().map(|(_, g)| *g).collect();
                    grid.push((m1, m2, l, u));
                }
            }
        }
    }
    let out = exec.map(&grid, |(m1, m2, l, u)| match s_sum(*m1, *m2, l, u) {
        Ok(v) if v == Rational::default() => Outcome::Pass,
        Ok(v) => Outcome::Fail(format!("s_sum m1={m1} m2={m2} L'={l:?} U={u:?}: {}", fmt_rational(&v))),
        Err(_) => Outcome::Skip,
    });
    SuiteReport::collect("s-sum", out)
}

/// All genus-zero `StarData` with `h ≤ 4` and total genus `≤ 5`.
pub fn star_grid(max_genus: i64, max_h: usize) -> Vec<StarData> {
    let mut out = Vec::new();
    for total in 1..=max_genus {
        for gs in partitions(total).into_iter().filter(|p| p.len() <= max_h) {
            for m1 in (1..4 * total).step_by(2) {
                let m2 = 4 * total - 4 - m1;
                if m2 >= 1 {
                    out.push(StarData { m1, m2, genera: gs.clone() });
                }
            }
        }
    }
    out
}

/// Three reports over the star grid: `g_count = vol·∏κ/2`,
/// `f_count = g_count`, and independence of `g_count` from which component
/// carries the maximal index.
pub fn gf_suites(bounds: Bounds, exec: Exec) -> Vec<SuiteReport> {
    let grid = star_grid(bounds.max_genus.unwrap_or(5), bounds.max_h.unwrap_or(4));
    let rows = exec.map(&grid, |d| {
        let name = format!("m1={} m2={} genera={:?}", d.m1, d.m2, d.genera);
        let g = g_count(d);
        let closed = compare(g.clone(), g_closed(d), || format!("g_count vs closed form {name}"));
        let fg = compare(f_count(d), g.clone(), || format!("f_count vs g_count {name}"));
        let mut relabel = Outcome::Pass;
        for last in 0..d.genera.len() {
            let mut gs = d.genera.clone();
            let x = gs.remove(last);
            gs.push(x);
            let other = StarData { m1: d.m1, m2: d.m2, genera: gs.clone() };
            if let Outcome::Fail(msg) =
                compare(g_count(&other), g.clone(), || format!("g_count relabeled {gs:?} vs {name}"))
            {
                relabel = Outcome::Fail(msg);
                break;
            }
        }
        (closed, fg, relabel)
    });
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for (x, y, z) in rows {
        a.push(x);
        b.push(y);
        c.push(z);
    }
    vec![
        SuiteReport::collect("gf:g=closed", a),
        SuiteReport::collect("gf:f=g", b),
        SuiteReport::collect("gf:relabel", c),
    ]
}

/// The 2-step Vandermonde convolution for `m2 ∈ {1,...,11}` odd, nonempty `L'`
/// of total genus `≤ 4` and `u ∈ [-4,4]`.
pub fn vandermonde_suite(bounds: Bounds, exec: Exec) -> SuiteReport {
    let mut grid = Vec::new();
    for m2 in [1, 3, 5, 7, 9, 11] {
        for l in genus_lists(bounds.max_genus.unwrap_or(4)).into_iter().filter(|l| !l.is_empty()) {
            for u in -4..=4 {
                grid.push((m2, l.clone(), u));
            }
        }
    }
    let out = exec.map(&grid, |(m2, l, u)| match vandermonde_sides(*m2, l, *u) {
        Ok((a, b)) if a == b => Outcome::Pass,
        Ok((a, b)) => Outcome::Fail(format!(
            "vandermonde m2={m2} L'={l:?} u={u}: {} vs {}",
            fmt_rational(&a),
            fmt_rational(&b)
        )),
        Err(_) => Outcome::Skip,
    });
    SuiteReport::collect("vandermonde", out)
}

/// Closed coefficient against the graph form for every sunflower of every
/// quadratic `(m1, m2)` with odd `1 ≤ m1, m2 ≤ max_order`.
pub fn cgg_suite(max_order: i64, exec: Exec) -> SuiteReport {
    let mut sigs = Vec::new();
    for m1 in (1..=max_order).step_by(2) {
        for m2 in (1..=max_order).step_by(2) {
            if let Ok(s) = Signature::new(2, vec![m1, m2]) {
                sigs.push(s);
            }
        }
    }
    let graphs: Vec<_> = sigs.iter().flat_map(|s| enumerate_sunflowers_with(s, exec).graphs).collect();
    let empty = VolumeTable::new();
    let out = exec.map(&graphs, |g| {
        compare(coefficient_cgg(g.mu.orders(), &sunflower_gvec(g)), graph_form_cgg(g, &empty), || {
            format!("cgg {}", g.canonical())
        })
    });
    SuiteReport::collect("cgg", out)
}

/// Compares a computed report against an example, cell by cell.
pub fn example_mismatches(ex: &Example, exec: Exec) -> Vec<String> {
    let mut bad = Vec::new();
    let table = match ex.volumes() {
        Ok(t) => t,
        Err(e) => return vec![format!("{}: {e}", ex.name)],
    };
    let sig = match Signature::new(ex.k, ex.mu.to_vec()) {
        Ok(s) => s,
        Err(e) => return vec![format!("{}: {e}", ex.name)],
    };
    let report = match completed_volume_with(&sig, &table, exec) {
        Ok(r) => r,
        Err(e) => return vec![format!("{}: {e}", ex.name)],
    };
    let computed: BTreeMap<String, [String; 4]> = report
        .contributions
        .iter()
        .map(|c| {
            (
                c.graph.canonical(),
                [
                    fmt_rational(&c.prefactor),
                    c.kappa_prod.to_string(),
                    fmt_rational(&c.vol_prod),
                    fmt_rational(&c.total),
                ],
            )
        })
        .collect();
    let expected_graphs = ex.rows.iter().filter(|r| r.graph.is_some()).count();
    if computed.len() != expected_graphs {
        bad.push(format!("{}: {} graphs, expected {expected_graphs}", ex.name, computed.len()));
    }
    let same = |a: &str, b: &str| parse_rational(a).ok() == parse_rational(b).ok();
    for r in ex.rows {
        let want = [r.prefactor, r.kappa_prod, r.vol_prod, r.total];
        let got = match r.graph {
            None => {
                let m = fmt_rational(&report.main_vol);
                ["1".to_string(), "1".to_string(), m.clone(), m]
            }
            Some(g) => match computed.get(g) {
                Some(cells) => cells.clone(),
                None => {
                    bad.push(format!("{} row {}: graph {g} not enumerated", ex.name, r.label));
                    continue;
                }
            },
        };
        for (col, (w, g)) in ["prefactor", "kappa", "vol", "total"].iter().zip(want.iter().zip(&got)) {
            if !same(w, g) {
                bad.push(format!("{} row {} {col}: got {g}, expected {w}", ex.name, r.label));
            }
        }
    }
    if report.completed_vol != ex.completed_value() {
        bad.push(format!(
            "{} completed: got {}, expected {}",
            ex.name,
            fmt_rational(&report.completed_vol),
            ex.completed
        ));
    }
    bad
}

/// Every cell of both worked examples.
pub fn tables_suite(exec: Exec) -> SuiteReport {
    let out = EXAMPLES
        .iter()
        .map(|ex| {
            let bad = example_mismatches(ex, exec);
            if bad.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(bad.join("; "))
            }
        })
        .collect();
    SuiteReport::collect("tables", out)
}

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 6] = ["alpha", "s-sum", "gf", "vandermonde", "cgg", "tables"];

/// Runs a suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, bounds: Bounds, exec: Exec) -> Option<Vec<SuiteReport>> {
    Some(match name {
        "alpha" => vec![alpha_suite(bounds, exec)],
        "s-sum" => vec![s_sum_suite(bounds, exec)],
        "gf" => gf_suites(bounds, exec),
        "vandermonde" => vec![vandermonde_suite(bounds, exec)],
        "cgg" => vec![cgg_suite(9, exec)],
        "tables" => vec![tables_suite(exec)],
        _ => return None,
    })
}
