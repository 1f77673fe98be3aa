//! Stratum volumes: closed forms, a short list of empty strata, and a
//! user-supplied table, combined into one lookup chain.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{f2, fmt_rational, int, parse_rational, Rational};
use crate::signature::Signature;

/// Canonical table key: `k` and the orders sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VolumeKey {
    pub k: i64,
    pub orders: Vec<i64>,
}

impl VolumeKey {
    pub fn new(k: i64, orders: &[i64]) -> Self {
        let mut orders = orders.to_vec();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        VolumeKey { k, orders }
    }

    pub fn of(sig: &Signature) -> Self {
        Self::new(sig.k(), sig.orders())
    }
}

impl fmt::Display for VolumeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.orders.iter().map(|m| m.to_string()).collect();
        write!(f, "k={}; mu={}", self.k, mu.join(","))
    }
}

/// Where a vertex sits in a graph; carried into error messages only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Main,
    Sun,
    Flower,
    Bottom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeQuery {
    pub sig: Signature,
    pub role: Role,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VolumeTable {
    entries: BTreeMap<VolumeKey, Rational>,
    sources: Vec<String>,
}

impl VolumeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &VolumeKey) -> Option<&Rational> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&VolumeKey, &Rational)> {
        self.entries.iter()
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    /// Inserts a value; an existing key is a [`Error::DuplicateKey`].
    pub fn insert(&mut self, key: VolumeKey, value: Rational) -> Result<()> {
        self.insert_at(key, value, 0)
    }

    fn insert_at(&mut self, key: VolumeKey, value: Rational, line: usize) -> Result<()> {
        if self.entries.contains_key(&key) {
            return Err(Error::DuplicateKey { key: key.to_string(), line });
        }
        self.entries.insert(key, value);
        Ok(())
    }

    /// Adds every entry of `other`; keys already present are rejected.
    pub fn merge(&mut self, other: VolumeTable) -> Result<()> {
        for (k, v) in other.entries {
            self.insert(k, v)?;
        }
        self.sources.extend(other.sources);
        Ok(())
    }

    /// Reads and merges the files in order.
    pub fn load_files<P: AsRef<Path>>(paths: &[P]) -> Result<VolumeTable> {
        let mut table = VolumeTable::new();
        for p in paths {
            let p = p.as_ref();
            let text = std::fs::read_to_string(p).map_err(|e| Error::Parse {
                line: 0,
                msg: format!("{}: {e}", p.display()),
            })?;
            let mut t = parse_table(&text)?;
            t.sources = vec![p.display().to_string()];
            table.merge(t)?;
        }
        Ok(table)
    }
}

/// Parses the volume file format.
///
/// ```text
/// # comment
/// k=2; mu=5,3; vol=-35/648
/// ```
pub fn parse_table(text: &str) -> Result<VolumeTable> {
    let mut table = VolumeTable { entries: BTreeMap::new(), sources: vec!["inline".into()] };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut k = None;
        let mut mu = None;
        let mut vol = None;
        for field in line.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (name, value) =
                field.split_once('=').ok_or_else(|| err(format!("expected name=value, got `{field}`")))?;
            let value = value.trim();
            match name.trim() {
                "k" => k = Some(value.parse::<i64>().map_err(|_| err(format!("bad k `{value}`")))?),
                "mu" => {
                    let orders = value
                        .split(',')
                        .map(|m| m.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| err(format!("bad mu `{value}`")))?;
                    mu = Some(orders);
                }
                "vol" => vol = Some(parse_rational(value).map_err(err)?),
                other => return Err(err(format!("unknown field `{other}`"))),
            }
        }
        let (k, mu, vol) = match (k, mu, vol) {
            (Some(k), Some(mu), Some(vol)) => (k, mu, vol),
            _ => return Err(err("each line needs k, mu and vol".into())),
        };
        if k < 1 || mu.is_empty() {
            return Err(err("k must be positive and mu nonempty".into()));
        }
        table.insert_at(VolumeKey::new(k, &mu), vol, line_no)?;
    }
    Ok(table)
}

/// Genus-zero quadratic volume of `(m1, m2, -4g_1, ..., -4g_h)`:
/// the sum over subsets `I` with `c_{1,I} = m1 + 2 - Σ_I 4g_i > 0` of
/// `c_{1,I} f₂(m1,|I|+1) f₂(m2,|I^c|+1)`.
pub fn vol_q0_two_poles(m1: i64, m2: i64, genera: &[i64]) -> Result<Rational> {
    if m1 < 1 || m2 < 1 || m1 % 2 == 0 || m2 % 2 == 0 || genera.iter().any(|&g| g < 1) {
        return Err(Error::InvalidSignature(format!(
            "vol_q0_two_poles needs odd m1, m2 >= 1 and genera >= 1; got ({m1}, {m2}, {genera:?})"
        )));
    }
    let total: i64 = genera.iter().sum();
    if m1 + m2 + 4 != 4 * total {
        return Err(Error::InvalidSignature(format!(
            "({m1}, {m2}) with genera {genera:?} is not of genus zero"
        )));
    }
    let h = genera.len();
    let mut acc = Rational::zero();
    for mask in 0u64..(1u64 << h) {
        let inside = mask.count_ones() as i64;
        let g_in: i64 = (0..h).filter(|i| mask >> i & 1 == 1).map(|i| genera[i]).sum();
        let c = m1 + 2 - 4 * g_in;
        if c > 0 {
            acc += int(c) * f2(m1, inside + 1)? * f2(m2, h as i64 - inside + 1)?;
        }
    }
    Ok(acc)
}

/// Volume of a quadratic sunflower bottom: `m!!/(m-2(r-1))!!`.
pub fn vol_sf_bottom(m: i64, r: i64) -> Result<Rational> {
    if m < 1 || m % 2 == 0 || r < 1 || m - 2 * (r - 1) < -1 {
        return Err(Error::domain("vol_sf_bottom", format!("({m}, {r}) out of domain")));
    }
    f2(m, r + 1)
}

/// Which provider resolved a volume.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    KnownEmpty,
    ClosedFormTwoPoles,
    ClosedFormBottom,
    Table,
}

fn known_empty(key: &VolumeKey) -> bool {
    key.k == 2 && (key.orders == [3, 1] || key.orders == [1, -1])
}

/// Closed form for quadratic genus-zero signatures of the two supported shapes.
fn closed_form(key: &VolumeKey) -> Option<(Rational, Provenance)> {
    if key.k != 2 {
        return None;
    }
    let total: i64 = key.orders.iter().sum();
    if total != -4 {
        return None;
    }
    let odd_pos: Vec<i64> = key.orders.iter().copied().filter(|&m| m > 0 && m % 2 != 0).collect();
    let odd_neg: Vec<i64> = key.orders.iter().copied().filter(|&m| m < 0 && m % 2 != 0).collect();
    let fours: Vec<i64> = key.orders.iter().copied().filter(|&m| m < 0 && m % 4 == 0).collect();
    if odd_pos.len() + odd_neg.len() + fours.len() != key.orders.len() || fours.is_empty() {
        return None;
    }
    let genera: Vec<i64> = fours.iter().map(|m| -m / 4).collect();
    match (odd_pos.as_slice(), odd_neg.as_slice()) {
        ([m1, m2], []) => vol_q0_two_poles(*m1, *m2, &genera).ok().map(|v| (v, Provenance::ClosedFormTwoPoles)),
        ([m], [p]) if *p <= -3 => {
            vol_sf_bottom(*m, genera.len() as i64).ok().map(|v| (v, Provenance::ClosedFormBottom))
        }
        _ => None,
    }
}

/// Resolves a volume through the provider chain: known-empty strata, the
/// quadratic genus-zero closed forms, then the table.
///
/// A table entry that disagrees with a closed form is reported through
/// `log::warn!`; the closed form wins.
pub fn lookup_with_provenance(q: &VolumeQuery, table: &VolumeTable) -> Result<(Rational, Provenance)> {
    let key = VolumeKey::of(&q.sig);
    if known_empty(&key) {
        return Ok((Rational::zero(), Provenance::KnownEmpty));
    }
    if let Some((v, prov)) = closed_form(&key) {
        if let Some(t) = table.get(&key) {
            if *t != v {
                log::warn!(
                    "table value {} for `{key}` disagrees with closed form {}; using the closed form",
                    fmt_rational(t),
                    fmt_rational(&v)
                );
            }
        }
        return Ok((v, prov));
    }
    match table.get(&key) {
        Some(v) => Ok((v.clone(), Provenance::Table)),
        None => Err(Error::MissingVolume {
            keys: vec![key.to_string()],
            context: vec![format!("{:?} vertex {}", q.role, q.sig)],
        }),
    }
}

pub fn lookup(q: &VolumeQuery, table: &VolumeTable) -> Result<Rational> {
    lookup_with_provenance(q, table).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q(k: i64, mu: &[i64]) -> VolumeQuery {
        VolumeQuery { sig: Signature::new(k, mu.to_vec()).unwrap(), role: Role::Bottom }
    }

    #[test]
    fn parse_examples() {
        let t = parse_table("k=2; mu=5,3; vol=-35/648").unwrap();
        assert_eq!(t.get(&VolumeKey::new(2, &[3, 5])), Some(&rat(-35, 648)));
        let t = parse_table("# header\n\nk=1; mu=0; vol=-1/12  # trailing\n").unwrap();
        assert_eq!(t.len(), 1);
        let dup = parse_table("k=2; mu=3,5; vol=1\nk=2; mu=5,3; vol=1\n");
        assert_eq!(dup, Err(Error::DuplicateKey { key: "k=2; mu=5,3".into(), line: 2 }));
        assert!(matches!(parse_table("k=2; mu=5,x; vol=1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_table("\nk=2; vol=1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_table("k=2; mu=1; vol=1/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn zero_entries_differ_from_missing() {
        let t = parse_table("k=1; mu=6,-2; vol=0").unwrap();
        assert_eq!(lookup(&q(1, &[6, -2]), &t).unwrap(), int(0));
        assert!(lookup(&q(1, &[4, -2, 0]), &t).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(vol_q0_two_poles(5, 3, &[3]).unwrap(), int(1));
        assert_eq!(vol_q0_two_poles(5, 3, &[2, 1]).unwrap(), int(6));
        assert_eq!(vol_q0_two_poles(5, 3, &[1, 1, 1]).unwrap(), int(30));
        assert!(vol_q0_two_poles(5, 3, &[1, 1]).is_err());
        assert_eq!(vol_sf_bottom(3, 1).unwrap(), int(1));
        assert_eq!(vol_sf_bottom(5, 2).unwrap(), int(5));
        assert_eq!(vol_sf_bottom(7, 2).unwrap(), int(7));
        assert!(vol_sf_bottom(1, 3).is_err());
    }

    #[test]
    fn provider_chain() {
        let empty = VolumeTable::new();
        assert_eq!(lookup(&q(2, &[1, -1]), &empty).unwrap(), int(0));
        assert_eq!(lookup(&q(2, &[3, 1]), &empty).unwrap(), int(0));
        assert_eq!(lookup(&q(2, &[3, -3, -4]), &empty).unwrap(), int(1));
        assert_eq!(lookup(&q(2, &[5, 3, -12]), &empty).unwrap(), int(1));
        let err = lookup(&q(1, &[4, -2, -4]), &empty).unwrap_err();
        assert_eq!(err.missing_table_lines(), vec!["k=1; mu=4,-2,-4; vol=".to_string()]);
    }

    #[test]
    fn closed_form_beats_table() {
        let t = parse_table("k=2; mu=3,-3,-4; vol=5").unwrap();
        let (v, p) = lookup_with_provenance(&q(2, &[3, -3, -4]), &t).unwrap();
        assert_eq!((v, p), (int(1), Provenance::ClosedFormBottom));
    }

    #[test]
    fn merge_rejects_redefinition() {
        let mut a = parse_table("k=1; mu=0; vol=-1/12").unwrap();
        let b = parse_table("k=1; mu=0; vol=-1/12").unwrap();
        assert!(matches!(a.merge(b), Err(Error::DuplicateKey { .. })));
    }
}
