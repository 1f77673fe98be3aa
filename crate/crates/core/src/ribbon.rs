//! Joining counts and identities for the two-singularity quadratic case.
//!
//! Notation: for a list of component genera `g_1..g_h` set `κ_i = 4g_i - 2`,
//! `e_i = 2g_i - 1`, `D_L = Σ_{i∈L} κ_i`, `c_{1,I} = m1 + 2 - Σ_{i∈I} 4g_i` and
//! `c_{2,J} = m2 + 2 - Σ_{j∈J} 4g_j`. Index sets are bitmasks over `0..h`;
//! the distinguished maximal element is the last index `h - 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, bracket, f2, int, Rational};
use crate::volumes::vol_q0_two_poles;

type Mask = u32;

fn members(mask: Mask, h: usize) -> impl Iterator<Item = usize> {
    (0..h).filter(move |i| mask >> i & 1 == 1)
}

fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    // Every subset of `mask`, including the empty set.
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(cur)
    })
}

fn parity(n: u32) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Genus-zero data `(m1, m2; g_1..g_h)` with `m1 + m2 + 4 = 4 Σ g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarData {
    pub m1: i64,
    pub m2: i64,
    pub genera: Vec<i64>,
}

impl StarData {
    pub fn new(m1: i64, m2: i64, genera: Vec<i64>) -> Result<Self> {
        let ok = m1 >= 1
            && m2 >= 1
            && m1 % 2 != 0
            && m2 % 2 != 0
            && !genera.is_empty()
            && genera.iter().all(|&g| g >= 1)
            && genera.len() < 31;
        if !ok {
            return Err(Error::InvalidSignature(format!("bad star data ({m1}, {m2}, {genera:?})")));
        }
        if m1 + m2 + 4 != 4 * genera.iter().sum::<i64>() {
            return Err(Error::InvalidSignature(format!(
                "({m1}, {m2}, {genera:?}) violates m1 + m2 + 4 = 4 Σ g_i"
            )));
        }
        Ok(StarData { m1, m2, genera })
    }

    pub fn h(&self) -> usize {
        self.genera.len()
    }

    fn sum4(&self, mask: Mask) -> i64 {
        4 * members(mask, self.h()).map(|i| self.genera[i]).sum::<i64>()
    }

    fn d(&self, mask: Mask) -> i64 {
        members(mask, self.h()).map(|i| 4 * self.genera[i] - 2).sum()
    }

    /// `R = ∏ e_i = ∏ κ_i / 2`.
    pub fn r(&self) -> BigInt {
        self.genera.iter().fold(BigInt::one(), |a, &g| a * (2 * g - 1))
    }

    /// Every ordered partition `I ⊔ J ⊔ K = {0..h-1}`.
    pub fn partitions(&self) -> Vec<PartitionIJK> {
        let h = self.h();
        let mut out = Vec::with_capacity(3usize.pow(h as u32));
        for code in 0..3usize.pow(h as u32) {
            let (mut i, mut j, mut k) = (0, 0, 0);
            let mut c = code;
            for idx in 0..h {
                match c % 3 {
                    0 => i |= 1 << idx,
                    1 => j |= 1 << idx,
                    _ => k |= 1 << idx,
                }
                c /= 3;
            }
            out.push(PartitionIJK { i, j, k, c1: self.m1 + 2 - self.sum4(i), c2: self.m2 + 2 - self.sum4(j) });
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionIJK {
    pub i: Mask,
    pub j: Mask,
    pub k: Mask,
    pub c1: i64,
    pub c2: i64,
}

impl PartitionIJK {
    pub fn admissible(&self) -> bool {
        self.c1 > 0 && self.c2 > 0 && self.k != 0
    }

    pub fn location_of(&self, idx: usize) -> HLocation {
        if self.i >> idx & 1 == 1 {
            HLocation::InI
        } else if self.j >> idx & 1 == 1 {
            HLocation::InJ
        } else {
            HLocation::InK
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HLocation {
    InI,
    InJ,
    InK,
}

/// `α^ε_{L',H}(u) = -u [c_{2,L'} + u - 2]_{|H|+ε} f₂(m2 - c_{2,L'} - u, |L'|+1)`.
pub fn alpha_closed(eps: i64, u: i64, m2: i64, lprime: &[i64], h_size: i64) -> Result<Rational> {
    let c2l = m2 + 2 - 4 * lprime.iter().sum::<i64>();
    let br = bracket(c2l + u - 2, h_size + eps)?;
    let tail = f2(m2 - c2l - u, lprime.len() as i64 + 1)?;
    Ok(int(-u) * br * tail)
}

/// The defining subset sum of `α^ε_{L',H}(u)` over `J' ⊆ L'`.
pub fn alpha_brute(eps: i64, u: i64, m2: i64, lprime: &[i64], h_size: i64) -> Result<Rational> {
    let l = lprime.len();
    let full: Mask = (1 << l) - 1;
    let mut acc = Rational::zero();
    for jp in submasks(full) {
        let rest = full & !jp;
        let c2j = m2 + 2 - 4 * members(jp, l).map(|i| lprime[i]).sum::<i64>();
        let d_rest: i64 = members(rest, l).map(|i| 4 * lprime[i] - 2).sum();
        let kp = h_size + rest.count_ones() as i64;
        let term = int(c2j) * f2(m2, jp.count_ones() as i64 + 1)? * bracket(c2j - 2 - d_rest + u, kp + eps)?;
        acc += parity(rest.count_ones()) * term;
    }
    Ok(acc)
}

/// The sum `S_{L'}` over splittings `I' ⊔ H = U`:
///
/// `Σ f₂(m1,|I'|+1) [c_{2,L'} - 1]_{|H|} ((m1 - 2|I'| + 2)(c_{1,I'∪{h}} - 1) + c_{1,I'}(c_{2,L'} - 2|H| + 1))`.
///
/// The maximal component's `4g_h` is fixed by `c_{1,U} + c_{2,L'} = 4g_h`.
/// Summands whose linear factor vanishes are skipped without evaluating the
/// bracket.
pub fn s_sum(m1: i64, m2: i64, lprime: &[i64], u_genera: &[i64]) -> Result<Rational> {
    let c2l = m2 + 2 - 4 * lprime.iter().sum::<i64>();
    let c1u = m1 + 2 - 4 * u_genera.iter().sum::<i64>();
    let four_gh = c1u + c2l;
    let n = u_genera.len();
    let full: Mask = (1 << n) - 1;
    let mut acc = Rational::zero();
    for ip in submasks(full) {
        let i_size = ip.count_ones() as i64;
        let h_size = n as i64 - i_size;
        let c1i = m1 + 2 - 4 * members(ip, n).map(|i| u_genera[i]).sum::<i64>();
        let linear = (m1 - 2 * i_size + 2) * (c1i - four_gh - 1) + c1i * (c2l - 2 * h_size + 1);
        if linear == 0 {
            continue;
        }
        acc += f2(m1, i_size + 1)? * bracket(c2l - 1, h_size)? * int(linear);
    }
    Ok(acc)
}

/// `𝒩(I,J,K)` with the maximal index in the block named by `loc`.
pub fn n_count(data: &StarData, p: &PartitionIJK, loc: HLocation) -> Result<Rational> {
    if !p.admissible() {
        return Err(Error::Precondition(format!("partition {p:?} is not admissible")));
    }
    let h = data.h();
    let top = h - 1;
    if p.location_of(top) != loc {
        return Err(Error::Precondition(format!("maximal index is not in {loc:?}")));
    }
    let (c1, c2) = (p.c1, p.c2);
    let ksize = p.k.count_ones() as i64;
    let base = f2(data.m1, p.i.count_ones() as i64 + 1)? * f2(data.m2, p.j.count_ones() as i64 + 1)?;
    let alt = |shift: i64, c: i64, filter: &dyn Fn(Mask) -> bool| -> Result<Rational> {
        let mut s = Rational::zero();
        for l in submasks(p.k).filter(|l| filter(*l)) {
            s += parity(l.count_ones()) * bracket(c - shift - data.d(l), ksize)?;
        }
        Ok(s)
    };
    let any = |_: Mask| true;
    match loc {
        HLocation::InI => Ok(int(c2) * base * int(c1 - 1) * alt(1, c2, &any)?),
        HLocation::InJ => Ok(int(c1) * base * int(c2 - 1) * alt(3, c2, &any)?),
        HLocation::InK => {
            let with_h = alt(3, c1, &|l: Mask| l >> top & 1 == 1)?;
            let without_h = alt(1, c1, &|l: Mask| l >> top & 1 == 0)?;
            Ok(int(c1) * int(c2) * base * (with_h + without_h))
        }
    }
}

/// `ℱ(I,J,K) = c_{1,I} f₂(m1,|I|+1) c_{2,J} f₂(m2,|J|+1) Σ_{L⊆K} (-1)^{|L|} [c_{2,J} - 2 - D_L]_{|K|}`.
pub fn f_term(data: &StarData, p: &PartitionIJK) -> Result<Rational> {
    let ksize = p.k.count_ones() as i64;
    let mut s = Rational::zero();
    for l in submasks(p.k) {
        s += parity(l.count_ones()) * bracket(p.c2 - 2 - data.d(l), ksize)?;
    }
    Ok(int(p.c1)
        * f2(data.m1, p.i.count_ones() as i64 + 1)?
        * int(p.c2)
        * f2(data.m2, p.j.count_ones() as i64 + 1)?
        * s)
}

/// `𝒢_h = R · Σ 𝒩(I,J,K)` over admissible partitions.
pub fn g_count(data: &StarData) -> Result<Rational> {
    let top = data.h() - 1;
    let mut acc = Rational::zero();
    for p in data.partitions().iter().filter(|p| p.admissible()) {
        acc += n_count(data, p, p.location_of(top))?;
    }
    Ok(acc * Rational::from_integer(data.r()))
}

/// `ℱ_h = R · Σ ℱ(I,J,K)` over admissible partitions.
pub fn f_count(data: &StarData) -> Result<Rational> {
    let mut acc = Rational::zero();
    for p in data.partitions().iter().filter(|p| p.admissible()) {
        acc += f_term(data, p)?;
    }
    Ok(acc * Rational::from_integer(data.r()))
}

/// `vol(m1, m2, -4g_1, ..., -4g_h) · ∏ κ_i/2`.
pub fn g_closed(data: &StarData) -> Result<Rational> {
    Ok(vol_q0_two_poles(data.m1, data.m2, &data.genera)? * Rational::from_integer(data.r()))
}

/// Compares both sides of the 2-step Vandermonde convolution
///
/// `Σ_{r=0}^{|L'|-1} (-1)^r C(|L'|-1, r) f₂(m2, |L'|+1-r) f₂(c_{2,L'}+u+2r-2, r+2)
///   = f₂(m2 - c_{2,L'} - u, |L'|+1)`.
pub fn vandermonde_sides(m2: i64, lprime: &[i64], u: i64) -> Result<(Rational, Rational)> {
    let l = lprime.len() as i64;
    if l == 0 {
        return Err(Error::Precondition("vandermonde_check needs a nonempty L'".into()));
    }
    let c2l = m2 + 2 - 4 * lprime.iter().sum::<i64>();
    let mut lhs = Rational::zero();
    for r in 0..l {
        let a = f2(m2, l + 1 - r).map_err(|e| Error::domain("vandermonde lhs", e.to_string()))?;
        let b = f2(c2l + u + 2 * r - 2, r + 2).map_err(|e| Error::domain("vandermonde lhs", e.to_string()))?;
        lhs += parity(r as u32) * Rational::from_integer(binomial(l - 1, r)) * a * b;
    }
    let rhs = f2(m2 - c2l - u, l + 1).map_err(|e| Error::domain("vandermonde rhs", e.to_string()))?;
    Ok((lhs, rhs))
}

pub fn vandermonde_check(m2: i64, lprime: &[i64], u: i64) -> Result<bool> {
    vandermonde_sides(m2, lprime, u).map(|(a, b)| a == b)
}
