//! Unique factorization in Z[i], the valuations `nu_p` and `nu`, and the
//! coset index monoid built on `nu`.

use std::fmt;
use std::ops::Mul;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianInt, UnitExp};

/// Largest norm `factor` will attempt by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub max_norm: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            max_norm: 1_000_000_000_000,
        }
    }
}

/// `unit * prod(prime^exp)` with canonical, pairwise non-associate primes
/// sorted by `(norm, re, im)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: UnitExp,
    pub factors: Vec<(GaussianInt, u32)>,
}

impl Factorization {
    pub fn product(&self) -> GaussianInt {
        self.factors
            .iter()
            .fold(self.unit.value(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn nu(&self) -> CosetIndex {
        CosetIndex(self.factors.iter().map(|(_, e)| u64::from(*e)).sum())
    }

    pub fn exponent_of(&self, p: &GaussianInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q.is_associate(p))
            .map_or(0, |(_, e)| *e)
    }
}

/// Renders the right-hand side of `z = ...`, e.g. `-i*(1+i)^2` or
/// `(-1-2i)*(-1+2i)`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.unit);
        }
        if self.unit != UnitExp::ONE {
            write!(f, "{}*", self.unit)?;
        }
        for (k, (p, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "({p})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Index `n` of the coset `A_n = { a : nu(a) = n }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CosetIndex(pub u64);

impl CosetIndex {
    pub const IDENTITY: CosetIndex = CosetIndex(0);
}

/// Coset product: `A_n * A_m = A_{n+m}`.
pub fn coset_mul(n: CosetIndex, m: CosetIndex) -> CosetIndex {
    CosetIndex(n.0 + m.0)
}

pub fn coset_cmp(n: CosetIndex, m: CosetIndex) -> std::cmp::Ordering {
    n.cmp(&m)
}

impl Mul for CosetIndex {
    type Output = CosetIndex;
    fn mul(self, rhs: CosetIndex) -> CosetIndex {
        coset_mul(self, rhs)
    }
}

impl fmt::Display for CosetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}", self.0)
    }
}

fn norm_u64(z: &GaussianInt, budget: FactorBudget) -> Result<u64> {
    let n = z.norm();
    match n.to_u64() {
        Some(v) if v <= budget.max_norm => Ok(v),
        _ => Err(Error::FactorBudget {
            norm: n.to_string(),
            budget: budget.max_norm,
        }),
    }
}

/// Rational prime factorization by trial division.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_rational_prime(n: u64) -> bool {
    n >= 2 && factor_u64(n) == [(n, 1)]
}

/// `(a, b)` with `a^2 + b^2 = p`, `0 < b < a`, by exhaustive search.
fn two_squares(p: u64) -> Option<(u64, u64)> {
    let mut b = 1u64;
    while 2 * b * b < p {
        let rest = p - b * b;
        let a = rest.isqrt();
        if a * a == rest {
            return Some((a, b));
        }
        b += 1;
    }
    None
}

/// Strips every power of `p` from `z`, returning the count.
fn strip(z: &mut GaussianInt, p: &GaussianInt) -> u32 {
    let mut e = 0;
    while let Some(q) = z.exact_div(p) {
        *z = q;
        e += 1;
    }
    e
}

pub fn factor(z: &GaussianInt) -> Result<Factorization> {
    factor_with_budget(z, FactorBudget::default())
}

/// Factors the norm over Z and lifts each rational prime: 2 ramifies as
/// `(1+i)^2`, `p = 3 (mod 4)` stays inert, `p = 1 (mod 4)` splits.
pub fn factor_with_budget(z: &GaussianInt, budget: FactorBudget) -> Result<Factorization> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = norm_u64(z, budget)?;
    let mut rest = z.clone();
    let mut factors = Vec::new();
    for (p, e) in factor_u64(n) {
        let primes: Vec<GaussianInt> = match p % 4 {
            2 => vec![GaussianInt::one_plus_i()],
            3 => vec![GaussianInt::new(p, 0).canonical()?],
            _ => {
                let (a, b) = two_squares(p).expect("p = 1 mod 4 is a sum of two squares");
                vec![
                    GaussianInt::new(a, b).canonical()?,
                    GaussianInt::new(a, -i64::try_from(b).unwrap()).canonical()?,
                ]
            }
        };
        let expected = if p % 4 == 3 { e / 2 } else { e };
        let mut found = 0;
        for q in primes {
            let k = strip(&mut rest, &q);
            if k > 0 {
                factors.push((q, k));
            }
            found += k;
        }
        if found != expected {
            return Err(Error::Identity(format!(
                "rational prime {p}^{e} of norm({z}) lifted to {found} Gaussian factors"
            )));
        }
    }
    let unit = UnitExp::of(&rest).ok_or_else(|| {
        Error::Identity(format!("cofactor {rest} of {z} is not a unit after trial division"))
    })?;
    factors.sort_by(|a, b| a.0.cmp_key(&b.0));
    Ok(Factorization { unit, factors })
}

/// Prime test: the norm is a rational prime, or the square of a rational
/// prime `q = 3 (mod 4)` with `p` associate to `q`.
pub fn is_gaussian_prime(p: &GaussianInt) -> Result<bool> {
    if p.is_zero() {
        return Ok(false);
    }
    let n = norm_u64(p, FactorBudget::default())?;
    if is_rational_prime(n) {
        return Ok(true);
    }
    let q = n.isqrt();
    Ok(q * q == n && q % 4 == 3 && is_rational_prime(q) && p.is_associate(&GaussianInt::new(q, 0)))
}

pub fn nu_p(z: &GaussianInt, p: &GaussianInt) -> Result<u32> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_gaussian_prime(p)? {
        return Err(Error::NotPrime(p.clone()));
    }
    let mut rest = z.clone();
    Ok(strip(&mut rest, p))
}

pub fn nu(z: &GaussianInt) -> Result<CosetIndex> {
    factor(z).map(|f| f.nu())
}

/// Membership in the submonoid generated by `1+i` and the primary odd
/// primes: the unit part under canonical normalization is trivial.
pub fn in_g(z: &GaussianInt) -> Result<bool> {
    let (u, _) = z.canonical_associate()?;
    Ok(u == UnitExp::ONE)
}
