//! Exact DR-completed volumes of strata of k-differentials.
//!
//! The completed volume of a stratum `μ` is its own volume plus one term per
//! two-level graph `Γ` that is either a special simple star or a sunflower:
//!
//! ```text
//! vol(μ) + Σ_Γ 1/(|Aut Γ| k^{h_ab}) · ∏ κ_e · ∏ vol(μ_v)
//! ```
//!
//! All arithmetic is exact over big rationals.
//!
//! ```
//! use stratavol::{completed_volume, parse_table, fmt_rational};
//! let table = parse_table(stratavol::reference::MU53_VOL).unwrap();
//! let report = completed_volume(2, &[5, 3], &table).unwrap();
//! assert_eq!(fmt_rational(&report.completed_vol), "-73/448");
//! ```

pub mod checks;
pub mod completed;
pub mod error;
pub mod exact;
pub mod exec;
pub mod graphs;
pub mod reference;
pub mod ribbon;
pub mod signature;
pub mod volumes;

pub use completed::{
    coefficient_cgg, completed_volume, completed_volume_with, contribution, graph_form_cgg, render, Contribution,
    Format, Report, ReportJson,
};
pub use error::{Error, Result};
pub use exact::{bracket, dfact2, f2, fmt_rational, parse_rational, rat, PiValue, Rational};
pub use exec::Exec;
pub use graphs::{all_graphs, enumerate_special_stars, enumerate_sunflowers, GraphKind, TwoLevelGraph};
pub use signature::{genus, is_holo_abelian, mv_convert, proj_dim, Signature, VolumeKind};
pub use volumes::{lookup, parse_table, vol_q0_two_poles, vol_sf_bottom, Role, VolumeKey, VolumeQuery, VolumeTable};
