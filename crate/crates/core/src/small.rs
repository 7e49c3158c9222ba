//! Fixed-width Gaussian integers for the search kernels.
//!
//! Every operation is checked; overflow surfaces as [`Error::Overflow`].
//! Results that leave the kernel are re-verified with [`GaussianInt`].

use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SmallGi {
    pub re: i128,
    pub im: i128,
}

// Checked counterparts of the operator traits, returning `Result`.
#[allow(clippy::should_implement_trait)]
impl SmallGi {
    pub const ZERO: SmallGi = SmallGi { re: 0, im: 0 };

    pub const fn new(re: i128, im: i128) -> Self {
        SmallGi { re, im }
    }

    pub fn from_big(z: &GaussianInt) -> Result<Self> {
        let (re, im) = z.to_i128_parts().ok_or(Error::Overflow)?;
        Ok(SmallGi { re, im })
    }

    pub fn to_big(self) -> GaussianInt {
        GaussianInt::new(self.re, self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_odd(self) -> bool {
        (self.re + self.im) & 1 == 1
    }

    pub fn add(self, o: SmallGi) -> Result<SmallGi> {
        Ok(SmallGi {
            re: self.re.checked_add(o.re).ok_or(Error::Overflow)?,
            im: self.im.checked_add(o.im).ok_or(Error::Overflow)?,
        })
    }

    pub fn sub(self, o: SmallGi) -> Result<SmallGi> {
        Ok(SmallGi {
            re: self.re.checked_sub(o.re).ok_or(Error::Overflow)?,
            im: self.im.checked_sub(o.im).ok_or(Error::Overflow)?,
        })
    }

    pub fn mul(self, o: SmallGi) -> Result<SmallGi> {
        let m = |a: i128, b: i128| a.checked_mul(b).ok_or(Error::Overflow);
        let re = m(self.re, o.re)?
            .checked_sub(m(self.im, o.im)?)
            .ok_or(Error::Overflow)?;
        let im = m(self.re, o.im)?
            .checked_add(m(self.im, o.re)?)
            .ok_or(Error::Overflow)?;
        Ok(SmallGi { re, im })
    }

    pub fn norm(self) -> Result<u128> {
        let a = self.re.unsigned_abs();
        let b = self.im.unsigned_abs();
        a.checked_mul(a)
            .and_then(|x| b.checked_mul(b).and_then(|y| x.checked_add(y)))
            .ok_or(Error::Overflow)
    }

    /// `self / d` when exact, `None` otherwise.
    pub fn exact_div(self, d: SmallGi) -> Result<Option<SmallGi>> {
        let n = d.norm()?;
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = i128::try_from(n).map_err(|_| Error::Overflow)?;
        let num = self.mul(SmallGi::new(d.re, -d.im))?;
        if num.re % n != 0 || num.im % n != 0 {
            return Ok(None);
        }
        Ok(Some(SmallGi::new(num.re / n, num.im / n)))
    }

    /// Square root with the same sign convention as
    /// [`GaussianInt::is_square`]. Integer-only.
    pub fn sqrt(self) -> Result<Option<SmallGi>> {
        if self.is_zero() {
            return Ok(Some(SmallGi::ZERO));
        }
        let n = self.norm()?;
        let Some(s) = exact_isqrt(n) else {
            return Ok(None);
        };
        let s = i128::try_from(s).map_err(|_| Error::Overflow)?;
        let xx = s.checked_add(self.re).ok_or(Error::Overflow)?;
        let yy = s.checked_sub(self.re).ok_or(Error::Overflow)?;
        if xx & 1 != 0 || yy & 1 != 0 {
            return Ok(None);
        }
        let (Some(x), Some(y)) = (exact_isqrt((xx / 2) as u128), exact_isqrt((yy / 2) as u128))
        else {
            return Ok(None);
        };
        let (x, mut y) = (x as i128, y as i128);
        if x != 0 && self.im < 0 {
            y = -y;
        }
        let w = SmallGi::new(x, y);
        Ok((w.mul(w)? == self).then_some(w))
    }
}

/// Residues mod 64 that can be perfect squares.
const SQUARE_MOD64: u64 = {
    let mut mask = 0u64;
    let mut k = 0;
    while k < 64 {
        mask |= 1 << ((k * k) % 64);
        k += 1;
    }
    mask
};

const fn square_mask(m: u64) -> u128 {
    let mut mask = 0u128;
    let mut k = 0;
    while k < m {
        mask |= 1 << ((k * k) % m);
        k += 1;
    }
    mask
}

const SQUARE_MOD63: u128 = square_mask(63);
const SQUARE_MOD65: u128 = square_mask(65);
const SQUARE_MOD11: u128 = square_mask(11);

/// `Some(r)` when `n = r^2`.
pub fn exact_isqrt(n: u128) -> Option<u128> {
    if SQUARE_MOD64 >> (n % 64) & 1 == 0
        || SQUARE_MOD63 >> (n % 63) & 1 == 0
        || SQUARE_MOD65 >> (n % 65) & 1 == 0
        || SQUARE_MOD11 >> (n % 11) & 1 == 0
    {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

pub fn gcd(mut a: SmallGi, mut b: SmallGi) -> Result<SmallGi> {
    while !b.is_zero() {
        let n = i128::try_from(b.norm()?).map_err(|_| Error::Overflow)?;
        let num = a.mul(SmallGi::new(b.re, -b.im))?;
        let q = SmallGi::new(round_half_down(num.re, n), round_half_down(num.im, n));
        let r = a.sub(q.mul(b)?)?;
        a = b;
        b = r;
    }
    Ok(a)
}

fn round_half_down(a: i128, n: i128) -> i128 {
    -((n - 2 * a).div_euclid(2 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gi;

    #[test]
    fn isqrt_filters_agree_with_brute_force() {
        for n in 0u128..20_000 {
            let r = n.isqrt();
            assert_eq!(exact_isqrt(n).is_some(), r * r == n, "{n}");
        }
    }

    #[test]
    fn sqrt_matches_big() {
        for a in -30..=30 {
            for b in -30..=30 {
                let z = GaussianInt::new(a, b);
                let small = SmallGi::new(a, b).sqrt().unwrap().map(SmallGi::to_big);
                assert_eq!(small, z.is_square(), "{z}");
                let sq = z.square();
                let s = SmallGi::from_big(&sq).unwrap().sqrt().unwrap().unwrap();
                assert_eq!(s.to_big(), sq.is_square().unwrap());
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let big = SmallGi::new(i128::MAX / 2, 3);
        assert_eq!(big.mul(big), Err(Error::Overflow));
        assert_eq!(SmallGi::new(i128::MAX, 0).add(SmallGi::new(1, 0)), Err(Error::Overflow));
        assert_eq!(SmallGi::new(i128::MAX, 0).norm(), Err(Error::Overflow));
    }

    #[test]
    fn gcd_matches_big_up_to_units() {
        for (a, b) in [("6+2i", "4"), ("5", "2+i"), ("3", "7"), ("0", "1+i"), ("12", "8i")] {
            let g = gcd(SmallGi::from_big(&gi(a)).unwrap(), SmallGi::from_big(&gi(b)).unwrap())
                .unwrap()
                .to_big();
            assert!(g.is_associate(&crate::gaussian::gcd(&gi(a), &gi(b)).unwrap()));
        }
    }

    #[test]
    fn exact_division() {
        let q = SmallGi::new(5, 0).exact_div(SmallGi::new(2, 1)).unwrap();
        assert_eq!(q, Some(SmallGi::new(2, -1)));
        assert_eq!(SmallGi::new(5, 0).exact_div(SmallGi::new(1, 1)).unwrap(), None);
    }
}
