//! Two-level graphs: sunflowers and special simple stars.
//!
//! A sunflower has one non-abelian top vertex (the sun) joined to a genus-0
//! bottom vertex for each marking in a chosen subset `S`; every bottom also
//! carries one or more holomorphic abelian flowers. A special star has a
//! genus-0 center carrying all markings, with abelian flowers above it.
//!
//! Edges carry the order `m_top` on the upper branch and `m_bot = -2k - m_top`
//! on the lower one. The enhancement is `κ = m_top + k`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{factorial, Rational};
use crate::exec::Exec;
use crate::signature::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    Sunflower,
    SpecialStar,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TopVertex {
    pub genus: i64,
    pub legs: Vec<usize>,
    pub is_sun: bool,
    pub is_abelian_flower: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BottomVertex {
    pub genus: i64,
    pub legs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub top: usize,
    pub bottom: usize,
    pub m_top: i64,
    pub m_bot: i64,
    pub kappa: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoLevelGraph {
    pub k: i64,
    pub mu: Signature,
    pub kind: GraphKind,
    pub tops: Vec<TopVertex>,
    pub bottoms: Vec<BottomVertex>,
    pub edges: Vec<Edge>,
}

fn flower(genus: i64) -> TopVertex {
    TopVertex { genus, legs: Vec::new(), is_sun: false, is_abelian_flower: true }
}

fn flower_edge(k: i64, top: usize, bottom: usize, genus: i64) -> Edge {
    let m_top = k * (2 * genus - 2);
    Edge { top, bottom, m_top, m_bot: -2 * k - m_top, kappa: m_top + k }
}

impl TwoLevelGraph {
    /// Builds a sunflower without checking any admissibility condition.
    ///
    /// `petals` pairs a marking index with the genera of its flowers; petals
    /// are sorted by marking and flower genera descending before building.
    pub fn sunflower(mu: &Signature, petals: &[(usize, Vec<i64>)]) -> TwoLevelGraph {
        let k = mu.k();
        let mut petals = petals.to_vec();
        petals.sort_by_key(|p| p.0);
        for p in &mut petals {
            p.1.sort_unstable_by(|a, b| b.cmp(a));
        }
        let flower_total: i64 = petals.iter().flat_map(|p| p.1.iter()).sum();
        let sun_legs: Vec<usize> =
            (0..mu.n()).filter(|i| !petals.iter().any(|p| p.0 == *i)).collect();
        let mut tops = vec![TopVertex {
            genus: mu.genus() - flower_total,
            legs: sun_legs,
            is_sun: true,
            is_abelian_flower: false,
        }];
        let mut bottoms = Vec::new();
        let mut edges = Vec::new();
        for (b, (leg, genera)) in petals.iter().enumerate() {
            bottoms.push(BottomVertex { genus: 0, legs: vec![*leg] });
            let m_top = mu.orders()[*leg] - 2 * k * genera.iter().sum::<i64>();
            edges.push(Edge { top: 0, bottom: b, m_top, m_bot: -2 * k - m_top, kappa: m_top + k });
            for &g in genera {
                tops.push(flower(g));
                edges.push(flower_edge(k, tops.len() - 1, b, g));
            }
        }
        TwoLevelGraph { k, mu: mu.clone(), kind: GraphKind::Sunflower, tops, bottoms, edges }
    }

    /// Builds a special star with one flower per part (parts sorted descending).
    pub fn special_star(mu: &Signature, parts: &[i64]) -> TwoLevelGraph {
        let k = mu.k();
        let mut parts = parts.to_vec();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let bottoms = vec![BottomVertex { genus: 0, legs: (0..mu.n()).collect() }];
        let tops: Vec<TopVertex> = parts.iter().map(|&g| flower(g)).collect();
        let edges = parts.iter().enumerate().map(|(t, &g)| flower_edge(k, t, 0, g)).collect();
        TwoLevelGraph { k, mu: mu.clone(), kind: GraphKind::SpecialStar, tops, bottoms, edges }
    }

    fn sun(&self) -> Option<usize> {
        self.tops.iter().position(|t| t.is_sun)
    }

    fn edges_at_top(&self, t: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.top == t)
    }

    fn edges_at_bottom(&self, b: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.bottom == b)
    }

    /// Flower genera attached to bottom `b`, descending.
    fn flower_genera(&self, b: usize) -> Vec<i64> {
        let mut gs: Vec<i64> = self
            .edges_at_bottom(b)
            .filter(|e| self.tops[e.top].is_abelian_flower)
            .map(|e| self.tops[e.top].genus)
            .collect();
        gs.sort_unstable_by(|a, b| b.cmp(a));
        gs
    }

    /// One-line canonical serialization, used as the graph identity.
    pub fn canonical(&self) -> String {
        let list = |xs: &[i64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self.kind {
            GraphKind::SpecialStar => {
                let center: Vec<i64> = self.mu.orders().to_vec();
                format!(
                    "ST{{k={};center=[{}];parts=[{}]}}",
                    self.k,
                    list(&center),
                    list(&self.flower_genera(0))
                )
            }
            GraphKind::Sunflower => {
                let (sg, sl) = match self.sun() {
                    Some(s) => (self.tops[s].genus, self.tops[s].legs.clone()),
                    None => (0, Vec::new()),
                };
                let legs: Vec<i64> = sl.iter().map(|&l| l as i64).collect();
                let mut petals: Vec<(usize, usize)> = self
                    .bottoms
                    .iter()
                    .enumerate()
                    .map(|(b, v)| (v.legs.first().copied().unwrap_or(usize::MAX), b))
                    .collect();
                petals.sort_unstable();
                let mut out = format!("SF{{k={};sun={{g={},legs=[{}]}};petals=[", self.k, sg, list(&legs));
                for (i, (leg, b)) in petals.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{{leg={},flowers=[{}]}}", leg, list(&self.flower_genera(*b)));
                }
                out.push_str("]}");
                out
            }
        }
    }

    /// `(m_top, m_bot, κ)` per edge, in the stored canonical edge order:
    /// bottoms by leg index, the sun edge first, then flowers by descending genus.
    pub fn edge_data(&self) -> Vec<(i64, i64, i64)> {
        self.edges.iter().map(|e| (e.m_top, e.m_bot, e.kappa)).collect()
    }

    /// Number of holomorphic abelian top vertices.
    pub fn h_ab(&self) -> usize {
        self.tops.iter().filter(|t| t.is_abelian_flower).count()
    }

    /// Automorphisms permute flowers of equal genus hanging from the same bottom.
    pub fn aut_order(&self) -> BigInt {
        let mut acc = BigInt::one();
        for b in 0..self.bottoms.len() {
            let mut mult: BTreeMap<i64, u64> = BTreeMap::new();
            for g in self.flower_genera(b) {
                *mult.entry(g).or_default() += 1;
            }
            for m in mult.values() {
                acc *= factorial(*m);
            }
        }
        acc
    }

    /// `1 / (|Aut| · k^{h_ab})`.
    pub fn prefactor(&self) -> Rational {
        let den = self.aut_order() * BigInt::from(self.k).pow(self.h_ab() as u32);
        Rational::new(BigInt::one(), den)
    }

    pub fn kappa_product(&self) -> BigInt {
        self.edges.iter().fold(BigInt::one(), |acc, e| acc * e.kappa)
    }

    /// Signature of each vertex: tops first (in stored order), then bottoms.
    ///
    /// Marking orders come first (by marking index), then edge orders in edge
    /// order. Abelian flowers are reported as `k = 1` signatures.
    pub fn vertex_signatures(&self) -> Result<Vec<Signature>> {
        let mut out = Vec::with_capacity(self.tops.len() + self.bottoms.len());
        for (t, v) in self.tops.iter().enumerate() {
            if v.is_abelian_flower {
                let orders = self.edges_at_top(t).map(|e| e.m_top / self.k).collect();
                out.push(Signature::new(1, orders)?);
            } else {
                let mut orders: Vec<i64> = v.legs.iter().map(|&l| self.mu.orders()[l]).collect();
                orders.extend(self.edges_at_top(t).map(|e| e.m_top));
                out.push(Signature::new(self.k, orders)?);
            }
        }
        for (b, v) in self.bottoms.iter().enumerate() {
            let mut orders: Vec<i64> = v.legs.iter().map(|&l| self.mu.orders()[l]).collect();
            orders.extend(self.edges_at_bottom(b).map(|e| e.m_bot));
            out.push(Signature::new(self.k, orders)?);
        }
        Ok(out)
    }

    fn top_n(&self, t: usize) -> i64 {
        (self.tops[t].legs.len() + self.edges_at_top(t).count()) as i64
    }

    fn bottom_n(&self, b: usize) -> i64 {
        (self.bottoms[b].legs.len() + self.edges_at_bottom(b).count()) as i64
    }

    /// Unprojectivized dimension of a top vertex: `2g-1+n` if abelian, else `2g-2+n`.
    fn top_unproj_dim(&self, t: usize) -> i64 {
        let v = &self.tops[t];
        let ab = if v.is_abelian_flower { 1 } else { 0 };
        2 * v.genus - 2 + ab + self.top_n(t)
    }

    /// The projectivized top level has the dimension of the stratum.
    pub fn top_dim_check(&self) -> bool {
        let total: i64 = (0..self.tops.len()).map(|t| self.top_unproj_dim(t)).sum();
        total - 1 == self.mu.proj_dim()
    }

    /// Level-wise dimension count: the projectivized level dimensions add up
    /// to `(2g-3+n) - 1 + h_ab`.
    pub fn level_dim_check(&self) -> bool {
        let top: i64 = (0..self.tops.len()).map(|t| self.top_unproj_dim(t)).sum::<i64>() - 1;
        let bottom: i64 = (0..self.bottoms.len())
            .map(|b| 2 * self.bottoms[b].genus - 2 + self.bottom_n(b))
            .sum::<i64>()
            - 1;
        top + bottom == self.mu.generic_proj_dim() - 1 + self.h_ab() as i64
    }

    /// Every violated structural invariant, in a fixed order.
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let k = self.k;
        let (nt, nb) = (self.tops.len(), self.bottoms.len());

        if k != self.mu.k() {
            bad.push(format!("graph k = {k} differs from signature k = {}", self.mu.k()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.top >= nt || e.bottom >= nb {
                bad.push(format!("edge {i} references a missing vertex"));
                return bad;
            }
            if e.m_top + e.m_bot != -2 * k {
                bad.push(format!("m_top + m_bot ≠ -2k on edge {i}"));
            }
            if e.kappa != e.m_top + k {
                bad.push(format!("kappa ≠ m_top + k on edge {i}"));
            }
            if e.kappa < 1 {
                bad.push(format!("kappa < 1 on edge {i}"));
            }
        }

        // Tree: connected with |E| = |V| - 1.
        if self.edges.len() + 1 != nt + nb {
            bad.push(format!("not a tree: {} edges on {} vertices", self.edges.len(), nt + nb));
        } else {
            let mut seen_top = vec![false; nt];
            let mut seen_bot = vec![false; nb];
            let mut stack: Vec<(bool, usize)> = vec![(nt == 0, 0)];
            while let Some((is_bot, v)) = stack.pop() {
                let seen = if is_bot { &mut seen_bot } else { &mut seen_top };
                if v >= seen.len() || seen[v] {
                    continue;
                }
                seen[v] = true;
                for e in &self.edges {
                    if !is_bot && e.top == v {
                        stack.push((true, e.bottom));
                    } else if is_bot && e.bottom == v {
                        stack.push((false, e.top));
                    }
                }
            }
            if !(seen_top.iter().all(|s| *s) && seen_bot.iter().all(|s| *s)) {
                bad.push("graph is disconnected".into());
            }
        }

        let mut leg_count = vec![0usize; self.mu.n()];
        for l in self.tops.iter().flat_map(|t| &t.legs).chain(self.bottoms.iter().flat_map(|b| &b.legs)) {
            if *l < leg_count.len() {
                leg_count[*l] += 1;
            } else {
                bad.push(format!("leg {l} is not a marking"));
            }
        }
        for (i, c) in leg_count.iter().enumerate() {
            if *c != 1 {
                bad.push(format!("marking {i} appears {c} times"));
            }
        }

        let orders = self.mu.orders();
        let leg_sum = |legs: &[usize]| legs.iter().filter(|&&l| l < orders.len()).map(|&l| orders[l]).sum::<i64>();
        for (t, v) in self.tops.iter().enumerate() {
            let s = leg_sum(&v.legs) + self.edges_at_top(t).map(|e| e.m_top).sum::<i64>();
            if s != k * (2 * v.genus - 2) {
                bad.push(format!("order sum {s} ≠ k(2g-2) at top vertex {t}"));
            }
        }
        for (b, v) in self.bottoms.iter().enumerate() {
            let s = leg_sum(&v.legs) + self.edges_at_bottom(b).map(|e| e.m_bot).sum::<i64>();
            if s != k * (2 * v.genus - 2) {
                bad.push(format!("order sum {s} ≠ k(2g-2) at bottom vertex {b}"));
            }
            if v.genus != 0 {
                bad.push(format!("bottom vertex {b} has genus {}", v.genus));
            }
        }

        for (t, v) in self.tops.iter().enumerate() {
            if v.is_abelian_flower {
                if v.is_sun {
                    bad.push(format!("top vertex {t} is both sun and flower"));
                }
                if v.genus < 1 || !v.legs.is_empty() {
                    bad.push(format!("abelian flower {t} must have genus >= 1 and no legs"));
                }
                let es: Vec<&Edge> = self.edges_at_top(t).collect();
                if es.len() != 1 {
                    bad.push(format!("abelian flower {t} has {} edges", es.len()));
                } else if es[0].m_top != k * (2 * v.genus - 2) {
                    bad.push(format!("abelian flower {t} has m_top ≠ k(2g-2)"));
                }
            } else if !v.is_sun {
                bad.push(format!("top vertex {t} is neither sun nor flower"));
            }
        }
        let suns: Vec<usize> = (0..nt).filter(|&t| self.tops[t].is_sun).collect();
        if suns.len() > 1 {
            bad.push(format!("{} suns", suns.len()));
        }

        match self.kind {
            GraphKind::Sunflower => {
                if let Some(&s) = suns.first() {
                    for b in 0..nb {
                        if !self.edges_at_bottom(b).any(|e| e.top == s) {
                            bad.push(format!("sun not joined to bottom vertex {b}"));
                        }
                    }
                    let sun_orders: Vec<i64> = self.tops[s]
                        .legs
                        .iter()
                        .filter(|&&l| l < orders.len())
                        .map(|&l| orders[l])
                        .chain(self.edges_at_top(s).map(|e| e.m_top))
                        .collect();
                    if sun_orders.iter().all(|&m| m >= 0 && m % k == 0) {
                        bad.push("sun is of holomorphic abelian type".into());
                    }
                } else {
                    bad.push("sunflower without a sun".into());
                }
                if nb == 0 {
                    bad.push("sunflower without bottom vertices".into());
                }
                for (b, v) in self.bottoms.iter().enumerate() {
                    if v.legs.len() != 1 {
                        bad.push(format!("bottom vertex {b} carries {} legs", v.legs.len()));
                    }
                    if self.flower_genera(b).is_empty() {
                        bad.push(format!("bottom vertex {b} unstable"));
                    }
                }
            }
            GraphKind::SpecialStar => {
                if !suns.is_empty() {
                    bad.push("special star with a sun".into());
                }
                if nb != 1 {
                    bad.push(format!("special star with {nb} centers"));
                }
                let total: i64 = self.tops.iter().map(|t| t.genus).sum();
                if total != self.mu.genus() {
                    bad.push(format!("flower genera sum to {total}, not g = {}", self.mu.genus()));
                }
                let n = self.mu.n();
                if !(n == 2 || (n == 1 && k == 1)) {
                    bad.push(format!("special star needs n = 2 (or n = 1, k = 1); got n = {n}"));
                }
                if n == 1 && nt < 2 {
                    bad.push("bottom vertex 0 unstable".into());
                }
            }
        }
        bad
    }
}

/// Outcome of an enumeration, with counts of candidates dropped by filters
/// that can silently remove graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub graphs: Vec<TwoLevelGraph>,
    /// Sunflowers rejected because the sun would have too few special points.
    pub unstable_sun_rejections: usize,
    /// Candidates rejected by the top-level dimension condition.
    pub top_dim_rejections: usize,
}

impl Enumeration {
    fn absorb(&mut self, other: Enumeration) {
        self.graphs.extend(other.graphs);
        self.unstable_sun_rejections += other.unstable_sun_rejections;
        self.top_dim_rejections += other.top_dim_rejections;
    }
}

/// Partitions of `n` into positive parts, in reverse-lexicographic order:
/// `(3), (2,1), (1,1,1)`.
pub fn partitions(n: i64) -> Vec<Vec<i64>> {
    fn rec(rem: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Nonempty multisets of positive integers with sum at most `bound`,
/// descending as sequences: `(2), (1,1), (1)`.
fn genus_multisets(bound: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = (1..=bound).flat_map(partitions).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Nonempty subsets of `0..n`, by size and then lexicographically.
fn marking_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_unstable_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn sunflowers_for_subset(sig: &Signature, subset: &[usize]) -> Enumeration {
    let k = sig.k();
    let g = sig.genus();
    let n = sig.n();
    // κ ≥ 1 on the sun edge bounds the flower genus carried by each marking.
    let choices: Vec<Vec<Vec<i64>>> = subset
        .iter()
        .map(|&i| {
            let m = sig.orders()[i];
            let bound = (m + k - 1).div_euclid(2 * k).min(g);
            genus_multisets(bound)
        })
        .collect();

    let mut out = Enumeration::default();
    let mut pick = vec![0usize; subset.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        let total: i64 = pick.iter().zip(&choices).map(|(&p, c)| c[p].iter().sum::<i64>()).sum();
        if total <= g {
            let sun_genus = g - total;
            let sun_orders: Vec<i64> = (0..n)
                .map(|i| match subset.iter().position(|&s| s == i) {
                    Some(j) => sig.orders()[i] - 2 * k * choices[j][pick[j]].iter().sum::<i64>(),
                    None => sig.orders()[i],
                })
                .collect();
            let holo = sun_orders.iter().all(|&m| m >= 0 && m % k == 0);
            // The sun carries n special points: its own legs plus one edge per petal.
            let unstable = sun_genus == 0 && n < 3;
            if unstable {
                out.unstable_sun_rejections += 1;
            } else if !holo {
                let petals: Vec<(usize, Vec<i64>)> =
                    subset.iter().zip(&pick).zip(&choices).map(|((&i, &p), c)| (i, c[p].clone())).collect();
                let graph = TwoLevelGraph::sunflower(sig, &petals);
                if graph.top_dim_check() {
                    out.graphs.push(graph);
                } else {
                    out.top_dim_rejections += 1;
                }
            }
        }
        // Odometer with the last position varying fastest.
        let mut pos = pick.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// Sunflowers of `sig` in canonical order.
pub fn enumerate_sunflowers_with(sig: &Signature, exec: Exec) -> Enumeration {
    let subsets = marking_subsets(sig.n());
    let mut out = Enumeration::default();
    for part in exec.map(&subsets, |s| sunflowers_for_subset(sig, s)) {
        out.absorb(part);
    }
    if out.unstable_sun_rejections > 0 {
        log::warn!(
            "{sig}: sun stability rejected {} sunflower candidate(s)",
            out.unstable_sun_rejections
        );
    }
    out
}

/// Special stars of `sig` in canonical order.
pub fn enumerate_special_stars_with(sig: &Signature) -> Enumeration {
    let mut out = Enumeration::default();
    let n = sig.n();
    if !(n == 2 || (n == 1 && sig.k() == 1)) {
        return out;
    }
    for parts in partitions(sig.genus()) {
        if n == 1 && parts.len() < 2 {
            continue;
        }
        let graph = TwoLevelGraph::special_star(sig, &parts);
        if graph.top_dim_check() {
            out.graphs.push(graph);
        } else {
            out.top_dim_rejections += 1;
        }
    }
    out
}

/// Stars then sunflowers, each in canonical order.
pub fn all_graphs_with(sig: &Signature, exec: Exec) -> Enumeration {
    let mut out = enumerate_special_stars_with(sig);
    out.absorb(enumerate_sunflowers_with(sig, exec));
    if out.top_dim_rejections > 0 {
        log::debug!("{sig}: top-level dimension filter removed {} candidate(s)", out.top_dim_rejections);
    }
    out
}

pub fn enumerate_sunflowers(k: i64, mu: &[i64]) -> Result<Vec<TwoLevelGraph>> {
    let sig = Signature::new(k, mu.to_vec())?;
    Ok(enumerate_sunflowers_with(&sig, Exec::default()).graphs)
}

pub fn enumerate_special_stars(k: i64, mu: &[i64]) -> Result<Vec<TwoLevelGraph>> {
    let sig = Signature::new(k, mu.to_vec())?;
    Ok(enumerate_special_stars_with(&sig).graphs)
}

pub fn all_graphs(k: i64, mu: &[i64]) -> Result<Vec<TwoLevelGraph>> {
    let sig = Signature::new(k, mu.to_vec())?;
    Ok(all_graphs_with(&sig, Exec::default()).graphs)
}
