//! Exact arithmetic in the Gaussian integers Z[i].
//!
//! Elements are backed by arbitrary-precision integers, so ring operations
//! never overflow. Division rounds each coordinate of the exact quotient to
//! the nearest integer, breaking ties toward negative infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    re: BigInt,
    im: BigInt,
}

/// A unit of Z[i] written as `i^e`, `e` in `0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UnitExp(u8);

#[allow(clippy::should_implement_trait)]
impl UnitExp {
    pub const ONE: UnitExp = UnitExp(0);
    pub const I: UnitExp = UnitExp(1);
    pub const MINUS_ONE: UnitExp = UnitExp(2);
    pub const MINUS_I: UnitExp = UnitExp(3);

    pub fn new(e: i64) -> Self {
        UnitExp(e.rem_euclid(4) as u8)
    }

    pub fn exp(self) -> u8 {
        self.0
    }

    pub fn mul(self, other: UnitExp) -> UnitExp {
        UnitExp((self.0 + other.0) % 4)
    }

    pub fn inverse(self) -> UnitExp {
        UnitExp((4 - self.0) % 4)
    }

    pub fn value(self) -> GaussianInt {
        match self.0 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    /// Recovers the exponent of a unit, or `None` if `z` is not a unit.
    pub fn of(z: &GaussianInt) -> Option<UnitExp> {
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        match (&z.re, &z.im) {
            (r, i) if r == &one && i.is_zero() => Some(UnitExp(0)),
            (r, i) if r.is_zero() && i == &one => Some(UnitExp(1)),
            (r, i) if r == &minus_one && i.is_zero() => Some(UnitExp(2)),
            (r, i) if r.is_zero() && i == &minus_one => Some(UnitExp(3)),
            _ => None,
        }
    }

    pub fn all() -> [UnitExp; 4] {
        [UnitExp(0), UnitExp(1), UnitExp(2), UnitExp(3)]
    }
}

impl fmt::Display for UnitExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::default()
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    /// The ramified prime `1+i`.
    pub fn one_plus_i() -> Self {
        GaussianInt::new(1, 1)
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        UnitExp::of(self).is_some()
    }

    pub fn conj(&self) -> Self {
        GaussianInt::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussianInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Multiplies by `i^u`.
    pub fn mul_unit(&self, u: UnitExp) -> Self {
        match u.exp() {
            0 => self.clone(),
            1 => GaussianInt::new(-&self.im, self.re.clone()),
            2 => -self,
            _ => GaussianInt::new(self.im.clone(), -&self.re),
        }
    }

    /// Euclidean division: `self = q*w + r` with `norm(r) <= norm(w)/2`.
    pub fn div_rem(&self, w: &GaussianInt) -> Result<(GaussianInt, GaussianInt)> {
        if w.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = w.norm();
        let num = self * &w.conj();
        let q = GaussianInt::new(round_half_down(&num.re, &n), round_half_down(&num.im, &n));
        let r = self - &(&q * w);
        Ok((q, r))
    }

    /// Exact quotient `self / w`, or `None` when `w` does not divide `self`.
    pub fn exact_div(&self, w: &GaussianInt) -> Option<GaussianInt> {
        if w.is_zero() {
            return None;
        }
        let n = w.norm();
        let num = self * &w.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussianInt::new(qr, qi))
        } else {
            None
        }
    }

    /// True when `self` divides `z`. Zero divides only zero.
    pub fn divides(&self, z: &GaussianInt) -> bool {
        if self.is_zero() {
            return z.is_zero();
        }
        z.exact_div(self).is_some()
    }

    /// Not divisible by `1+i`; equivalently the norm is odd.
    pub fn is_odd(&self) -> bool {
        (&self.re + &self.im).is_odd()
    }

    /// Odd and congruent to 1 modulo `(1+i)^3`: imaginary part even and
    /// `re + im = 1 (mod 4)`.
    pub fn is_primary(&self) -> bool {
        self.im.is_even() && (&self.re + &self.im).mod_floor(&BigInt::from(4)) == BigInt::one()
    }

    /// Largest `k` with `(1+i)^k | self`, and the odd cofactor.
    pub fn split_even_part(&self) -> Result<(u32, GaussianInt)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut k = 0;
        let mut z = self.clone();
        while !z.is_odd() {
            // z / (1+i) = z (1-i) / 2
            let t = &z * &GaussianInt::new(1, -1);
            z = GaussianInt::new(&t.re / 2, &t.im / 2);
            k += 1;
        }
        Ok((k, z))
    }

    /// `self = i^u * c` with `c` the canonical member of the associate class:
    /// the primary associate for odd elements, `(1+i)^k * c'` with `c'`
    /// primary otherwise.
    pub fn canonical_associate(&self) -> Result<(UnitExp, GaussianInt)> {
        let (k, odd) = self.split_even_part()?;
        let primary = UnitExp::all()
            .into_iter()
            .map(|u| odd.mul_unit(u))
            .find(|c| c.is_primary())
            .expect("every odd element has a primary associate");
        let c = &GaussianInt::one_plus_i().pow(k) * &primary;
        let u = UnitExp::all()
            .into_iter()
            .find(|u| &c.mul_unit(*u) == self)
            .expect("canonical form is an associate");
        Ok((u, c))
    }

    pub fn canonical(&self) -> Result<GaussianInt> {
        self.canonical_associate().map(|(_, c)| c)
    }

    pub fn is_associate(&self, other: &GaussianInt) -> bool {
        UnitExp::all().into_iter().any(|u| &self.mul_unit(u) == other)
    }

    /// Canonical-sign square root: `re > 0`, or `re = 0` and `im >= 0`.
    pub fn is_square(&self) -> Option<GaussianInt> {
        if self.is_zero() {
            return Some(GaussianInt::zero());
        }
        let n = self.norm();
        let s = n.sqrt();
        if &s * &s != n {
            return None;
        }
        let (x2, xr) = (&s + &self.re).div_rem(&BigInt::from(2));
        let (y2, yr) = (&s - &self.re).div_rem(&BigInt::from(2));
        if !xr.is_zero() || !yr.is_zero() {
            return None;
        }
        let x = x2.sqrt();
        let y = y2.sqrt();
        if &x * &x != x2 || &y * &y != y2 {
            return None;
        }
        let y = if x.is_zero() || !self.im.is_negative() { y } else { -y };
        let w = GaussianInt::new(x, y);
        if &w.square() == self {
            Some(w)
        } else {
            None
        }
    }

    pub fn re_mod(&self, k: u32) -> u32 {
        assert!(k >= 1, "modulus must be positive");
        self.re.mod_floor(&BigInt::from(k)).to_u32().unwrap()
    }

    pub fn im_mod(&self, k: u32) -> u32 {
        assert!(k >= 1, "modulus must be positive");
        self.im.mod_floor(&BigInt::from(k)).to_u32().unwrap()
    }

    /// Sort key `(norm, re, im)` used for every deterministic ordering.
    pub fn sort_key(&self) -> (BigInt, BigInt, BigInt) {
        (self.norm(), self.re.clone(), self.im.clone())
    }

    pub fn cmp_key(&self, other: &GaussianInt) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.re.cmp(&other.re))
            .then_with(|| self.im.cmp(&other.im))
    }

    pub fn to_i128_parts(&self) -> Option<(i128, i128)> {
        Some((self.re.to_i128()?, self.im.to_i128()?))
    }
}

/// Nearest integer to `a/n` (`n > 0`), ties toward negative infinity.
fn round_half_down(a: &BigInt, n: &BigInt) -> BigInt {
    // ceil((2a - n) / 2n)
    let num: BigInt = a * 2 - n;
    let den: BigInt = n * 2;
    -((-num).div_floor(&den))
}

/// Greatest common divisor in canonical associate form.
pub fn gcd(z: &GaussianInt, w: &GaussianInt) -> Result<GaussianInt> {
    if z.is_zero() && w.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let mut a = z.clone();
    let mut b = w.clone();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    a.canonical()
}

/// True when `gcd(z, w)` is a unit.
pub fn coprime(z: &GaussianInt, w: &GaussianInt) -> bool {
    gcd(z, w).map(|g| g.is_unit()).unwrap_or(false)
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = BigInt::one();
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im == one {
                    write!(f, "i")
                } else if self.im == -one {
                    write!(f, "-i")
                } else {
                    write!(f, "{}i", self.im)
                }
            }
            (false, false) => {
                write!(f, "{}", self.re)?;
                if self.im == one {
                    write!(f, "+i")
                } else if self.im == -one {
                    write!(f, "-i")
                } else if self.im.is_negative() {
                    write!(f, "{}i", self.im)
                } else {
                    write!(f, "+{}i", self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianInt({self})")
    }
}

impl FromStr for GaussianInt {
    type Err = Error;

    /// Accepts `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` with an optional
    /// leading sign. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let parse_int = |p: &str| -> Result<BigInt> {
            let digits = p.strip_prefix(['+', '-']).unwrap_or(p);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let v: BigInt = digits.parse().map_err(|_| err())?;
            Ok(if p.starts_with('-') { -v } else { v })
        };
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GaussianInt::new(parse_int(&t)?, 0));
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            p => parse_int(p)?,
        };
        Ok(GaussianInt::new(parse_int(re_part)?, im))
    }
}

impl From<i64> for GaussianInt {
    fn from(v: i64) -> Self {
        GaussianInt::new(v, 0)
    }
}

impl PartialOrd for GaussianInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `(norm, re, im)`.
impl Ord for GaussianInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key(other)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b GaussianInt> for &'a GaussianInt {
            type Output = GaussianInt;
            fn $m(self, rhs: &'b GaussianInt) -> GaussianInt {
                let f: fn(&GaussianInt, &GaussianInt) -> GaussianInt = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussianInt> for GaussianInt {
            type Output = GaussianInt;
            fn $m(self, rhs: GaussianInt) -> GaussianInt {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b GaussianInt> for GaussianInt {
            type Output = GaussianInt;
            fn $m(self, rhs: &'b GaussianInt) -> GaussianInt {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<GaussianInt> for &'a GaussianInt {
            type Output = GaussianInt;
            fn $m(self, rhs: GaussianInt) -> GaussianInt {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| GaussianInt::new(&a.re + &b.re, &a.im + &b.im));
binop!(Sub, sub, |a, b| GaussianInt::new(&a.re - &b.re, &a.im - &b.im));
binop!(Mul, mul, |a, b| GaussianInt::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt::new(-&self.re, -&self.im)
    }
}

/// Shorthand for literals in tests and tables. Panics on malformed input.
pub fn gi(s: &str) -> GaussianInt {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}
