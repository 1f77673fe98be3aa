//! The completed-volume graph sum, per-graph contributions and report rendering.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dfact2, factorial, fmt_rational, parse_rational, PiValue, Rational};
use crate::exec::Exec;
use crate::graphs::{all_graphs_with, GraphKind, TwoLevelGraph};
use crate::signature::{mv_convert, Signature, VolumeKind};
use crate::volumes::{lookup, Role, VolumeQuery, VolumeTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub graph: TwoLevelGraph,
    pub prefactor: Rational,
    pub kappa_prod: BigInt,
    pub vol_prod: Rational,
    pub total: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub sig: Signature,
    pub main_vol: Rational,
    pub contributions: Vec<Contribution>,
    pub completed_vol: Rational,
    pub mv_value: Option<PiValue>,
}

fn roles(graph: &TwoLevelGraph) -> Vec<Role> {
    graph
        .tops
        .iter()
        .map(|t| if t.is_abelian_flower { Role::Flower } else { Role::Sun })
        .chain(graph.bottoms.iter().map(|_| Role::Bottom))
        .collect()
}

/// Evaluates one graph, gathering every unresolved vertex volume.
fn contribution_collect(graph: &TwoLevelGraph, table: &VolumeTable) -> std::result::Result<Contribution, Vec<String>> {
    let sigs = graph.vertex_signatures().map_err(|e| vec![e.to_string()])?;
    let mut vol_prod = Rational::one();
    let mut missing = Vec::new();
    for (sig, role) in sigs.into_iter().zip(roles(graph)) {
        match lookup(&VolumeQuery { sig, role }, table) {
            Ok(v) => vol_prod *= v,
            Err(Error::MissingVolume { keys, .. }) => missing.extend(keys),
            Err(e) => missing.push(e.to_string()),
        }
    }
    if !missing.is_empty() {
        return Err(missing);
    }
    let prefactor = graph.prefactor();
    let kappa_prod = graph.kappa_product();
    let total = &prefactor * Rational::from_integer(kappa_prod.clone()) * &vol_prod;
    Ok(Contribution { graph: graph.clone(), prefactor, kappa_prod, vol_prod, total })
}

/// `(1/(|Aut| k^{h_ab})) · ∏κ_e · ∏ vol(μ_v)` for a single graph.
pub fn contribution(graph: &TwoLevelGraph, table: &VolumeTable) -> Result<Contribution> {
    contribution_collect(graph, table).map_err(|keys| Error::MissingVolume {
        keys: dedup(keys),
        context: vec![graph.canonical()],
    })
}

fn dedup(keys: Vec<String>) -> Vec<String> {
    keys.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn completed_volume(k: i64, mu: &[i64], table: &VolumeTable) -> Result<Report> {
    completed_volume_with(&Signature::new(k, mu.to_vec())?, table, Exec::default())
}

/// Main volume plus the sum over all stars and sunflowers.
///
/// Missing volumes are collected across the whole computation and reported
/// together.
pub fn completed_volume_with(sig: &Signature, table: &VolumeTable, exec: Exec) -> Result<Report> {
    let graphs = all_graphs_with(sig, exec).graphs;
    let mut missing = Vec::new();
    let mut context = Vec::new();
    let main_vol = match lookup(&VolumeQuery { sig: sig.clone(), role: Role::Main }, table) {
        Ok(v) => Some(v),
        Err(Error::MissingVolume { keys, .. }) => {
            missing.extend(keys);
            context.push("main stratum".to_string());
            None
        }
        Err(e) => return Err(e),
    };
    let evaluated = exec.map(&graphs, |g| contribution_collect(g, table));
    let mut contributions = Vec::with_capacity(graphs.len());
    for (g, r) in graphs.iter().zip(evaluated) {
        match r {
            Ok(c) => contributions.push(c),
            Err(keys) => {
                missing.extend(keys);
                context.push(g.canonical());
            }
        }
    }
    let main_vol = match main_vol {
        Some(v) if missing.is_empty() => v,
        _ => return Err(Error::MissingVolume { keys: dedup(missing), context }),
    };
    let completed_vol = contributions.iter().fold(main_vol.clone(), |acc, c| acc + &c.total);
    let mv_value = mv_convert(sig, &completed_vol, VolumeKind::CompletedVolume).ok();
    Ok(Report { sig: sig.clone(), main_vol, contributions, completed_vol, mv_value })
}

/// Closed coefficient of a quadratic sunflower.
///
/// `mvec` are the odd marking orders and `gvec[i]` the flower genera on
/// marking `i` (empty when marking `i` stays on the sun). Each marking with
/// flowers contributes
/// `m!!/(m-2(r-1))!! · (m-4G+2)/(r! 2^r) · r!/|Aut(𝐠)| · ∏(2g_j - 1)`
/// with `r = |𝐠|` and `G = Σ 𝐠`.
pub fn coefficient_cgg(mvec: &[i64], gvec: &[Vec<i64>]) -> Result<Rational> {
    if mvec.len() != gvec.len() {
        return Err(Error::Precondition("mvec and gvec differ in length".into()));
    }
    let mut acc = Rational::one();
    for (&m, gs) in mvec.iter().zip(gvec) {
        if gs.is_empty() {
            continue;
        }
        let r = gs.len() as i64;
        let big_g: i64 = gs.iter().sum();
        let ratio = Rational::new(dfact2(m)?, dfact2(m - 2 * (r - 1))?);
        let mut mult: BTreeMap<i64, u64> = BTreeMap::new();
        for &g in gs {
            *mult.entry(g).or_default() += 1;
        }
        let aut = mult.values().fold(BigInt::one(), |a, &c| a * factorial(c));
        let r_fact = factorial(r as u64);
        let linear = Rational::new(BigInt::from(m - 4 * big_g + 2), &r_fact * BigInt::from(2).pow(r as u32));
        let perms = Rational::new(r_fact, aut);
        let odd: BigInt = gs.iter().fold(BigInt::one(), |a, &g| a * (2 * g - 1));
        acc *= ratio * linear * perms * Rational::from_integer(odd);
    }
    Ok(acc)
}

/// The graph-side form of [`coefficient_cgg`] for a quadratic sunflower:
/// `1/(2^{2h_ab}|Aut|) · ∏κ_e · ∏_{bottoms} vol(μ_v)`.
pub fn graph_form_cgg(graph: &TwoLevelGraph, table: &VolumeTable) -> Result<Rational> {
    if graph.kind != GraphKind::Sunflower {
        return Err(Error::Precondition("graph_form_cgg needs a sunflower".into()));
    }
    let sigs = graph.vertex_signatures()?;
    let mut vol = Rational::one();
    for sig in sigs.into_iter().skip(graph.tops.len()) {
        vol *= lookup(&VolumeQuery { sig, role: Role::Bottom }, table)?;
    }
    let den = graph.aut_order() * BigInt::from(2).pow(2 * graph.h_ab() as u32);
    Ok(Rational::new(graph.kappa_product(), den) * vol)
}

/// The per-marking flower genera of a sunflower, in the layout of [`coefficient_cgg`].
pub fn sunflower_gvec(graph: &TwoLevelGraph) -> Vec<Vec<i64>> {
    let mut gvec = vec![Vec::new(); graph.mu.n()];
    for (b, v) in graph.bottoms.iter().enumerate() {
        let mut gs: Vec<i64> = graph
            .edges
            .iter()
            .filter(|e| e.bottom == b && graph.tops[e.top].is_abelian_flower)
            .map(|e| graph.tops[e.top].genus)
            .collect();
        gs.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(&leg) = v.legs.first() {
            gvec[leg] = gs;
        }
    }
    gvec
}

/// Output formats for [`render`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub graph: String,
    pub prefactor: String,
    pub kappa_prod: String,
    pub vol_prod: String,
    pub total: String,
}

/// The JSON report schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub signature: Vec<i64>,
    pub k: i64,
    pub main_vol: String,
    pub rows: Vec<RowJson>,
    pub completed_vol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mv_value: Option<PiValue>,
}

impl ReportJson {
    pub fn from_report(r: &Report) -> Self {
        ReportJson {
            signature: r.sig.orders().to_vec(),
            k: r.sig.k(),
            main_vol: fmt_rational(&r.main_vol),
            rows: r
                .contributions
                .iter()
                .map(|c| RowJson {
                    graph: c.graph.canonical(),
                    prefactor: fmt_rational(&c.prefactor),
                    kappa_prod: c.kappa_prod.to_string(),
                    vol_prod: fmt_rational(&c.vol_prod),
                    total: fmt_rational(&c.total),
                })
                .collect(),
            completed_vol: fmt_rational(&r.completed_vol),
            mv_value: r.mv_value.clone(),
        }
    }

    /// Checks that the stored totals are consistent and returns the completed volume.
    pub fn verify(&self) -> std::result::Result<Rational, String> {
        let mut acc = parse_rational(&self.main_vol)?;
        for row in &self.rows {
            let p = parse_rational(&row.prefactor)?;
            let kp = parse_rational(&row.kappa_prod)?;
            let v = parse_rational(&row.vol_prod)?;
            let t = parse_rational(&row.total)?;
            if p * kp * v != t {
                return Err(format!("row {} is inconsistent", row.graph));
            }
            acc += t;
        }
        if acc != parse_rational(&self.completed_vol)? {
            return Err("completed_vol differs from main_vol plus row totals".into());
        }
        Ok(acc)
    }
}

/// Row label `•` for the main stratum, then `D1, D2, ...` in canonical order.
pub fn row_labels(report: &Report) -> Vec<String> {
    std::iter::once("•".to_string())
        .chain((1..=report.contributions.len()).map(|i| format!("D{i}")))
        .collect()
}

fn cells(report: &Report) -> Vec<[String; 5]> {
    let labels = row_labels(report);
    let mut rows = vec![[
        labels[0].clone(),
        "1".to_string(),
        "1".to_string(),
        fmt_rational(&report.main_vol),
        fmt_rational(&report.main_vol),
    ]];
    for (c, l) in report.contributions.iter().zip(labels.iter().skip(1)) {
        rows.push([
            l.clone(),
            fmt_rational(&c.prefactor),
            c.kappa_prod.to_string(),
            fmt_rational(&c.vol_prod),
            fmt_rational(&c.total),
        ]);
    }
    rows
}

fn render_table(report: &Report) -> String {
    let header = ["Γ", "prefactor", "∏κ_e", "∏vol", "vol(Γ)"].map(String::from);
    let body = cells(report);
    let mut widths = [0usize; 5];
    for row in std::iter::once(&header).chain(body.iter()) {
        for (w, c) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String; 5]| {
        let padded: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join(" | ").trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&line(&header));
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&rule.join("-+-"));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row));
        out.push('\n');
    }
    for (l, c) in row_labels(report).iter().skip(1).zip(&report.contributions) {
        out.push_str(&format!("{l} = {}\n", c.graph.canonical()));
    }
    out.push_str(&format!("completed = {}\n", fmt_rational(&report.completed_vol)));
    out
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let labels = row_labels(report);
    let graphs: Vec<String> =
        std::iter::once(String::new()).chain(report.contributions.iter().map(|c| c.graph.canonical())).collect();
    let _ = w.write_record(["label", "graph", "prefactor", "kappa_prod", "vol_prod", "total"]);
    for ((row, _), g) in cells(report).iter().zip(&labels).zip(&graphs) {
        let _ = w.write_record([&row[0], g, &row[1], &row[2], &row[3], &row[4]]);
    }
    let _ = w.write_record(["completed", "", "", "", "", &fmt_rational(&report.completed_vol)]);
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn render_text(report: &Report) -> String {
    let mut out = format!("signature {}\n", report.sig);
    out.push_str(&format!("main {}\n", fmt_rational(&report.main_vol)));
    for (l, c) in row_labels(report).iter().skip(1).zip(&report.contributions) {
        out.push_str(&format!(
            "{l} {} prefactor={} kappa={} vol={} total={}\n",
            c.graph.canonical(),
            fmt_rational(&c.prefactor),
            c.kappa_prod,
            fmt_rational(&c.vol_prod),
            fmt_rational(&c.total)
        ));
    }
    out.push_str(&format!("completed = {}\n", fmt_rational(&report.completed_vol)));
    match &report.mv_value {
        Some(v) => out.push_str(&format!("masur-veech = {v}\n")),
        None => out.push_str("masur-veech = n/a (signature outside the conversion range)\n"),
    }
    out
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Table => render_table(report),
        Format::Csv => render_csv(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&ReportJson::from_report(report)).unwrap_or_default();
            s.push('\n');
            s
        }
    }
}

/// `Σ totals == completed - main`, exactly.
pub fn is_consistent(report: &Report) -> bool {
    let sum = report.contributions.iter().fold(Rational::zero(), |a, c| a + &c.total);
    let rows_ok = report
        .contributions
        .iter()
        .all(|c| &c.prefactor * Rational::from_integer(c.kappa_prod.clone()) * &c.vol_prod == c.total);
    rows_ok && sum == &report.completed_vol - &report.main_vol
}
