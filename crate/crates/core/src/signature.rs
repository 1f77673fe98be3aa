//! Signatures of strata and the Masur-Veech normalization.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorial, sign, PiValue, Rational};

/// A labeled order vector `μ = (m_1, ..., m_n)` of a `k`-differential.
///
/// Orders stay in the caller's order; only volume-table keys are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    k: i64,
    orders: Vec<i64>,
}

/// Genus of `(k, orders)`, or why there is none.
pub fn genus(k: i64, orders: &[i64]) -> Result<i64> {
    if k < 1 {
        return Err(Error::InvalidSignature(format!("k = {k} must be >= 1")));
    }
    if orders.is_empty() {
        return Err(Error::InvalidSignature("no orders given".into()));
    }
    let total: i64 = orders.iter().sum();
    let shifted = total + 2 * k;
    if shifted.rem_euclid(2 * k) != 0 {
        return Err(Error::InvalidSignature(format!(
            "order sum {total} is not of the form {k}(2g-2)"
        )));
    }
    let g = shifted / (2 * k);
    if g < 0 {
        return Err(Error::InvalidSignature(format!("order sum {total} gives negative genus")));
    }
    Ok(g)
}

impl Signature {
    pub fn new(k: i64, orders: Vec<i64>) -> Result<Self> {
        genus(k, &orders)?;
        Ok(Signature { k, orders })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn genus(&self) -> i64 {
        (self.orders.iter().sum::<i64>() + 2 * self.k) / (2 * self.k)
    }

    /// All orders nonnegative multiples of `k`.
    pub fn is_holo_abelian(&self) -> bool {
        self.orders.iter().all(|&m| m >= 0 && m % self.k == 0)
    }

    /// `2g-3+n`, the projectivized dimension of a stratum.
    pub fn generic_proj_dim(&self) -> i64 {
        2 * self.genus() - 3 + self.n() as i64
    }

    /// Projectivized dimension: `2g-2+n` for holomorphic abelian signatures
    /// with `k = 1`, and `2g-3+n` otherwise.
    pub fn proj_dim(&self) -> i64 {
        if self.k == 1 && self.is_holo_abelian() {
            self.generic_proj_dim() + 1
        } else {
            self.generic_proj_dim()
        }
    }

    /// The same signature with orders permuted: `orders[i]` becomes `orders[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Signature {
        Signature { k: self.k, orders: perm.iter().map(|&i| self.orders[i]).collect() }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.orders.iter().map(|m| m.to_string()).collect();
        write!(f, "k={}:({})", self.k, mu.join(","))
    }
}

pub fn is_holo_abelian(sig: &Signature) -> bool {
    sig.is_holo_abelian()
}

pub fn proj_dim(sig: &Signature) -> i64 {
    sig.proj_dim()
}

/// Which quantity [`mv_convert`] normalizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeKind {
    StratumVolume,
    CompletedVolume,
}

/// Converts an intersection-theoretic volume to the Masur-Veech normalization.
///
/// Supported:
/// * stratum volumes with `k = 1, n = 1`: factor `2(2πi)^{2g}/(2g-1)!`;
/// * stratum volumes with `k = 2`, all orders odd and `> -2`:
///   factor `2^{3-n}(2πi)^{2g-2+n}/(2g-3+n)!`;
/// * completed volumes with `k = 2`, all orders odd and `> -2`:
///   factor `2^{2g+1}(-1)^{g-1+n/2}π^{2g-2+n}/(2g-3+n)!`.
pub fn mv_convert(sig: &Signature, v: &Rational, kind: VolumeKind) -> Result<PiValue> {
    let g = sig.genus();
    let n = sig.n() as i64;
    let quadratic_odd = sig.k() == 2 && sig.orders().iter().all(|&m| m % 2 != 0 && m > -2);
    let unsupported = || Error::UnsupportedConversion(format!("{sig} as {kind:?}"));

    let (coef, power) = match kind {
        VolumeKind::StratumVolume if sig.k() == 1 && n == 1 && g >= 1 => {
            // 2 (2πi)^{2g} / (2g-1)!  with i^{2g} = (-1)^g
            let num = BigInt::from(2) * BigInt::from(2).pow(2 * g as u32) * sign(g);
            (Rational::new(num, factorial((2 * g - 1) as u64)), 2 * g)
        }
        VolumeKind::StratumVolume if quadratic_odd => {
            let p = 2 * g - 2 + n;
            if p % 2 != 0 || p < 1 {
                return Err(unsupported());
            }
            let num = BigInt::from(2).pow((p + 3 - n) as u32) * sign(p / 2);
            (Rational::new(num, factorial((p - 1) as u64)), p)
        }
        VolumeKind::CompletedVolume if quadratic_odd => {
            let p = 2 * g - 2 + n;
            if n % 2 != 0 || p < 1 {
                return Err(unsupported());
            }
            let num = BigInt::from(2).pow((2 * g + 1) as u32) * sign(g - 1 + n / 2);
            (Rational::new(num, factorial((2 * g - 3 + n) as u64)), p)
        }
        _ => return Err(unsupported()),
    };
    let value = coef * v;
    if value.is_zero() {
        return Ok(PiValue::new(value, 0));
    }
    Ok(PiValue::new(value, power as u32))
}
