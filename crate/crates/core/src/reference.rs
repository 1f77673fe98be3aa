//! The two worked examples: bundled volume tables and their expected rows.
//!
//! Rows are keyed by canonical graph serialization, not by position, since
//! the printed labels of the examples do not follow one ordering rule.

use crate::error::Result;
use crate::exact::{parse_rational, Rational};
use crate::volumes::{parse_table, VolumeTable};

pub const MU53_VOL: &str = include_str!("../../../fixtures/mu53.vol");
pub const MU422_VOL: &str = include_str!("../../../fixtures/mu422.vol");

/// One expected row: graph serialization (`None` for the main stratum),
/// prefactor, κ-product, volume product, total.
#[derive(Clone, Copy, Debug)]
pub struct ExpectedRow {
    pub label: &'static str,
    pub graph: Option<&'static str>,
    pub prefactor: &'static str,
    pub kappa_prod: &'static str,
    pub vol_prod: &'static str,
    pub total: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub name: &'static str,
    pub k: i64,
    pub mu: &'static [i64],
    pub table: &'static str,
    pub rows: &'static [ExpectedRow],
    pub completed: &'static str,
}

impl Example {
    pub fn volumes(&self) -> Result<VolumeTable> {
        parse_table(self.table)
    }

    pub fn completed_value(&self) -> Rational {
        parse_rational(self.completed).expect("well-formed constant")
    }
}

const fn row(
    label: &'static str,
    graph: Option<&'static str>,
    prefactor: &'static str,
    kappa_prod: &'static str,
    vol_prod: &'static str,
    total: &'static str,
) -> ExpectedRow {
    ExpectedRow { label, graph, prefactor, kappa_prod, vol_prod, total }
}

pub const MU53: Example = Example {
    name: "k=2 mu=(5,3)",
    k: 2,
    mu: &[5, 3],
    table: MU53_VOL,
    completed: "-73/448",
    rows: &[
        row("•", None, "1", "1", "-35/648", "-35/648"),
        row("D1", Some("ST{k=2;center=[5,3];parts=[3]}"), "1/2", "10", "-305/18144", "-1525/18144"),
        row("D2", Some("ST{k=2;center=[5,3];parts=[2,1]}"), "1/4", "12", "-1/160", "-3/160"),
        row("D3", Some("ST{k=2;center=[5,3];parts=[1,1,1]}"), "1/48", "8", "-5/288", "-5/1728"),
        row("D4", Some("SF{k=2;sun={g=2,legs=[0]};petals=[{leg=1,flowers=[1]}]}"), "1/2", "2", "-7/2160", "-7/2160"),
        row("D5", Some("SF{k=2;sun={g=2,legs=[1]};petals=[{leg=0,flowers=[1]}]}"), "1/2", "6", "0", "0"),
        row(
            "D6",
            Some("SF{k=2;sun={g=1,legs=[]};petals=[{leg=0,flowers=[1]},{leg=1,flowers=[1]}]}"),
            "1/4",
            "12",
            "0",
            "0",
        ),
    ],
};

pub const MU422: Example = Example {
    name: "k=1 mu=(4,2,-2)",
    k: 1,
    mu: &[4, 2, -2],
    table: MU422_VOL,
    completed: "1/960",
    rows: &[
        row("•", None, "1", "1", "23/9216", "23/9216"),
        row("D1", Some("SF{k=1;sun={g=1,legs=[1,2]};petals=[{leg=0,flowers=[2]}]}"), "1", "3", "1/5120", "3/5120"),
        row("D2", Some("SF{k=1;sun={g=1,legs=[1,2]};petals=[{leg=0,flowers=[1,1]}]}"), "1/2", "1", "1/1152", "1/2304"),
        row("D3", Some("SF{k=1;sun={g=2,legs=[1,2]};petals=[{leg=0,flowers=[1]}]}"), "1", "3", "-1/1536", "-1/512"),
        row("D4", Some("SF{k=1;sun={g=2,legs=[0,2]};petals=[{leg=1,flowers=[1]}]}"), "1", "1", "-23/27648", "-23/27648"),
        row(
            "D5",
            Some("SF{k=1;sun={g=0,legs=[2]};petals=[{leg=0,flowers=[2]},{leg=1,flowers=[1]}]}"),
            "1",
            "3",
            "-1/15360",
            "-1/5120",
        ),
        row(
            "D6",
            Some("SF{k=1;sun={g=0,legs=[2]};petals=[{leg=0,flowers=[1,1]},{leg=1,flowers=[1]}]}"),
            "1/2",
            "1",
            "-1/3456",
            "-1/6912",
        ),
        row(
            "D7",
            Some("SF{k=1;sun={g=1,legs=[2]};petals=[{leg=0,flowers=[1]},{leg=1,flowers=[1]}]}"),
            "1",
            "3",
            "1/4608",
            "1/1536",
        ),
    ],
};

pub const EXAMPLES: [Example; 2] = [MU53, MU422];
