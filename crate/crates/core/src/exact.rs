//! Exact arithmetic: big rationals, the 2-step factorial family and π-monomials.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always normalized with a positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `p/q`, or `p` when `q = 1`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| format!("bad numerator `{n}`"))?;
    let d = BigInt::from_str(d).map_err(|_| format!("bad denominator `{d}`"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(n, d))
}

/// `a!! = a(a-2)(a-4)...`, with `(-1)!! = 0!! = 1`.
pub fn dfact2(a: i64) -> Result<BigInt> {
    if a < -1 {
        return Err(Error::domain("dfact2", format!("{a}!! is undefined")));
    }
    let mut acc = BigInt::one();
    let mut x = a;
    while x > 1 {
        acc *= x;
        x -= 2;
    }
    Ok(acc)
}

/// The ratio `f₂(a, n)`.
///
/// * `n = 1`: `1/(a+2)`, defined for `a >= -1`.
/// * `n >= 2`: the falling 2-step product `a(a-2)...(a-2(n-3))` with `n-2`
///   factors. Wherever `a - 2(n-2) >= -1` this equals `a!!/(a-2(n-2))!!`;
///   elsewhere it is the polynomial continuation of that ratio.
pub fn f2(a: i64, n: i64) -> Result<Rational> {
    match n {
        n if n < 1 => Err(Error::domain("f2", format!("f2({a},{n}): n must be >= 1"))),
        1 => {
            if a < -1 {
                Err(Error::domain("f2", format!("f2({a},1): need a >= -1")))
            } else {
                Ok(rat(1, a + 2))
            }
        }
        _ => {
            let mut acc = BigInt::one();
            for j in 0..n - 2 {
                acc *= a - 2 * j;
            }
            Ok(Rational::from_integer(acc))
        }
    }
}

/// `[a]_r = 1_{a >= 2(r-1)} · f₂(a, r+1)`.
///
/// The only argument where the indicator passes but `f₂` is undefined is
/// `(a, r) = (-2, 0)`, which is reported as a domain error.
pub fn bracket(a: i64, r: i64) -> Result<Rational> {
    if r < 0 {
        return Err(Error::domain("bracket", format!("[{a}]_{r}: r must be >= 0")));
    }
    if a < 2 * (r - 1) {
        return Ok(Rational::zero());
    }
    f2(a, r + 1).map_err(|_| Error::domain("bracket", format!("[{a}]_{r} divides by zero")))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// An exact rational coefficient times `π^pi_power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PiValue {
    coefficient: Rational,
    pi_power: u32,
}

impl PiValue {
    /// Builds a value, collapsing every zero to the canonical `0·π⁰`.
    pub fn new(coefficient: Rational, pi_power: u32) -> Self {
        let pi_power = if coefficient.is_zero() { 0 } else { pi_power };
        PiValue { coefficient, pi_power }
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power == 0 {
            write!(f, "{}", fmt_rational(&self.coefficient))
        } else {
            write!(f, "{}*pi^{}", fmt_rational(&self.coefficient), self.pi_power)
        }
    }
}

impl FromStr for PiValue {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (c, p) = match s.split_once("*pi^") {
            Some((c, p)) => (c, p.trim().parse::<u32>().map_err(|e| e.to_string())?),
            None => (s, 0),
        };
        Ok(PiValue::new(parse_rational(c)?, p))
    }
}

impl From<PiValue> for String {
    fn from(v: PiValue) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for PiValue {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl std::ops::Add for &PiValue {
    type Output = PiValue;

    /// Sum of two monomials of the same π-power (zero is compatible with any).
    fn add(self, rhs: &PiValue) -> PiValue {
        let p = if self.coefficient.is_zero() { rhs.pi_power } else { self.pi_power };
        assert!(
            rhs.coefficient.is_zero() || rhs.pi_power == p,
            "adding pi^{} to pi^{}",
            rhs.pi_power,
            p
        );
        PiValue::new(&self.coefficient + &rhs.coefficient, p)
    }
}

pub(crate) fn sign(even_exponent_half: i64) -> i64 {
    if even_exponent_half.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
