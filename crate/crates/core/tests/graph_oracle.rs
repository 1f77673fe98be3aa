//! Brute-force oracle for the graph enumeration.
//!
//! Candidates are generated by counting flowers per `(marking, genus)` pair
//! rather than by multisets per marking, and every admissibility condition is
//! restated here from the definitions. Prefactors and κ-products are
//! recomputed from the flower data alone.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use stratavol::graphs::{all_graphs_with, TwoLevelGraph};
use stratavol::{Exec, GraphKind, Rational, Signature};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Expected {
    canonical: String,
    prefactor: Rational,
    kappa: BigInt,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn flower_weights(k: i64, flowers: &[i64]) -> (BigInt, BigInt) {
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for &g in flowers {
        *mult.entry(g).or_default() += 1;
    }
    let aut: BigInt = mult.values().map(|&m| factorial(m)).product();
    let kappa: BigInt = flowers.iter().map(|&g| BigInt::from(k * (2 * g - 1))).product();
    (aut, kappa)
}

fn stars(sig: &Signature) -> Vec<Expected> {
    let (k, n, g) = (sig.k(), sig.n(), sig.genus());
    let allowed = n == 2 || (n == 1 && k == 1);
    if !allowed || g < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Every nonincreasing sequence of positive integers summing to g.
    let mut stack: Vec<Vec<i64>> = vec![vec![]];
    while let Some(p) = stack.pop() {
        let s: i64 = p.iter().sum();
        if s == g {
            if n == 1 && p.len() < 2 {
                continue;
            }
            let top_dim: i64 = p.iter().map(|&x| 2 * x).sum::<i64>() - 1;
            if top_dim != sig.proj_dim() {
                continue;
            }
            let (aut, kappa) = flower_weights(k, &p);
            let den = aut * BigInt::from(k).pow(p.len() as u32);
            out.push(Expected {
                canonical: format!("ST{{k={k};center=[{}];parts=[{}]}}", join(sig.orders()), join(&p)),
                prefactor: Rational::new(1.into(), den),
                kappa,
            });
            continue;
        }
        let max = p.last().copied().unwrap_or(g);
        for x in 1..=max.min(g - s) {
            let mut q = p.clone();
            q.push(x);
            stack.push(q);
        }
    }
    out
}

fn sunflowers(sig: &Signature) -> Vec<Expected> {
    let (n, g) = (sig.n(), sig.genus());
    let slots: Vec<(usize, i64)> = (0..n).flat_map(|i| (1..=g).map(move |gen| (i, gen))).collect();
    let mut out = Vec::new();
    let mut counts = vec![0i64; slots.len()];
    'outer: loop {
        let total: i64 = counts.iter().zip(&slots).map(|(c, (_, gen))| c * gen).sum();
        if total <= g && counts.iter().any(|&c| c > 0) {
            if let Some(e) = sunflower_candidate(sig, &slots, &counts) {
                out.push(e);
            }
        }
        for i in 0..counts.len() {
            counts[i] += 1;
            let t: i64 = counts.iter().zip(&slots).map(|(c, (_, gen))| c * gen).sum();
            if t <= g {
                continue 'outer;
            }
            counts[i] = 0;
        }
        break;
    }
    out
}

fn sunflower_candidate(sig: &Signature, slots: &[(usize, i64)], counts: &[i64]) -> Option<Expected> {
    let (k, n, g) = (sig.k(), sig.n(), sig.genus());
    let mut petals: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for (&(i, gen), &c) in slots.iter().zip(counts) {
        for _ in 0..c {
            petals.entry(i).or_default().push(gen);
        }
    }
    let flower_total: i64 = petals.values().flatten().sum();
    let sun_genus = g - flower_total;
    let mut sun_orders = Vec::new();
    let mut kappa = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..n {
        let m = sig.orders()[i];
        match petals.get_mut(&i) {
            Some(fl) => {
                fl.sort_unstable_by(|a, b| b.cmp(a));
                let m_top = m - 2 * k * fl.iter().sum::<i64>();
                if m_top + k < 1 {
                    return None;
                }
                sun_orders.push(m_top);
                let (aut, kp) = flower_weights(k, fl);
                kappa *= kp * (m_top + k);
                den *= aut * BigInt::from(k).pow(fl.len() as u32);
            }
            None => sun_orders.push(m),
        }
    }
    if 2 * sun_genus - 2 + n as i64 <= 0 {
        return None;
    }
    if sun_orders.iter().all(|&m| m >= 0 && m % k == 0) {
        return None;
    }
    let sun_dim = 2 * sun_genus - 2 + n as i64;
    let flower_dim: i64 = petals.values().flatten().map(|&x| 2 * x).sum();
    if sun_dim + flower_dim - 1 != sig.proj_dim() {
        return None;
    }
    let legs: Vec<i64> = (0..n).filter(|i| !petals.contains_key(i)).map(|i| i as i64).collect();
    let petal_text: Vec<String> =
        petals.iter().map(|(leg, fl)| format!("{{leg={leg},flowers=[{}]}}", join(fl))).collect();
    Some(Expected {
        canonical: format!("SF{{k={k};sun={{g={sun_genus},legs=[{}]}};petals=[{}]}}", join(&legs), petal_text.join(",")),
        prefactor: Rational::new(1.into(), den),
        kappa,
    })
}

fn actual(graphs: &[TwoLevelGraph]) -> BTreeSet<Expected> {
    graphs
        .iter()
        .map(|g| Expected { canonical: g.canonical(), prefactor: g.prefactor(), kappa: g.kappa_product() })
        .collect()
}

const SIGNATURES: &[(i64, &[i64])] = &[
    (1, &[4, 2, -2]),
    (1, &[2]),
    (1, &[4]),
    (1, &[1, 1]),
    (1, &[2, 2]),
    (1, &[3, 1, -2]),
    (1, &[6]),
    (1, &[2, 1, 1]),
    (1, &[3, 3, -2, -2]),
    (2, &[5, 3]),
    (2, &[1, 1, 1, 1]),
    (2, &[7, 1]),
    (2, &[3, 3, 2]),
    (2, &[8]),
    (2, &[5, -1]),
    (2, &[4, 4]),
    (2, &[9, -1]),
    (2, &[9, 3]),
    (2, &[7, 3, -2]),
    (3, &[3, 3]),
    (3, &[6, 0]),
    (3, &[4, 2]),
    (3, &[7, -1]),
];

#[test]
fn enumeration_matches_brute_force() {
    for &(k, mu) in SIGNATURES {
        let sig = Signature::new(k, mu.to_vec()).unwrap();
        let mut expected: BTreeSet<Expected> = stars(&sig).into_iter().collect();
        expected.extend(sunflowers(&sig));
        let e = all_graphs_with(&sig, Exec::default());
        assert_eq!(actual(&e.graphs), expected, "k={k} mu={mu:?}");
        assert_eq!(e.graphs.len(), expected.len(), "duplicates for k={k} mu={mu:?}");
    }
}

#[test]
fn stars_come_before_sunflowers() {
    for &(k, mu) in SIGNATURES {
        let sig = Signature::new(k, mu.to_vec()).unwrap();
        let kinds: Vec<GraphKind> = all_graphs_with(&sig, Exec::default()).graphs.iter().map(|g| g.kind).collect();
        let first_sf = kinds.iter().position(|&x| x == GraphKind::Sunflower).unwrap_or(kinds.len());
        assert!(kinds[first_sf..].iter().all(|&x| x == GraphKind::Sunflower), "k={k} mu={mu:?}");
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for &(k, mu) in SIGNATURES {
        let sig = Signature::new(k, mu.to_vec()).unwrap();
        assert_eq!(all_graphs_with(&sig, Exec::Sequential), all_graphs_with(&sig, Exec::default()));
    }
}

#[test]
fn frozen_counts() {
    let counts: Vec<usize> = SIGNATURES
        .iter()
        .map(|&(k, mu)| all_graphs_with(&Signature::new(k, mu.to_vec()).unwrap(), Exec::default()).graphs.len())
        .collect();
    assert_eq!(counts, vec![7, 1, 2, 0, 0, 1, 4, 0, 3, 6, 0, 6, 3, 0, 3, 3, 6, 12, 7, 2, 2, 3, 3]);
}
