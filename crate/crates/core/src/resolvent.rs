//! Quartics `aX^4 + bX^2Y^2 + cY^4 = dZ^2`, the resolvent quadratic of the
//! `(1, 6e, e^2, 1)` members, and the passage to the system
//! `U^2 + eV^2 = U'^2 - eV'^2`, `UV = U'V'`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{nu, CosetIndex};
use crate::gaussian::{coprime, GaussianInt, UnitExp};
use crate::small::SmallGi;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuarticEquation {
    pub a: GaussianInt,
    pub b: GaussianInt,
    pub c: GaussianInt,
    pub d: GaussianInt,
}

impl QuarticEquation {
    pub fn new(a: GaussianInt, b: GaussianInt, c: GaussianInt, d: GaussianInt) -> Result<Self> {
        if a.is_zero() || d.is_zero() {
            return Err(Error::Precondition(format!("a = {a} and d = {d} must be nonzero")));
        }
        Ok(QuarticEquation { a, b, c, d })
    }

    /// `a x^4 + b x^2 y^2 + c y^4`
    pub fn eval(&self, x: &GaussianInt, y: &GaussianInt) -> GaussianInt {
        let (x2, y2) = (x.square(), y.square());
        &self.a * x2.square() + &self.b * &x2 * &y2 + &self.c * y2.square()
    }

    pub fn holds(&self, x: &GaussianInt, y: &GaussianInt, z: &GaussianInt) -> bool {
        self.eval(x, y) == &self.d * z.square()
    }

    /// The catalog entry with the same coefficients, if any.
    pub fn catalog_id(&self) -> Option<&'static str> {
        CATALOG_IDS
            .iter()
            .copied()
            .find(|id| catalog_equation(id).is_ok_and(|e| e == *self))
    }
}

/// Comma-separated `a,b,c,d` literals.
impl FromStr for QuarticEquation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, c, d] = parts.as_slice() else {
            return Err(Error::UnknownEquation(s.to_string()));
        };
        QuarticEquation::new(a.parse()?, b.parse()?, c.parse()?, d.parse()?)
    }
}

impl fmt::Display for QuarticEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})X^4 + ({})X^2Y^2 + ({})Y^4 = ({})Z^2",
            self.a, self.b, self.c, self.d
        )
    }
}

/// Ids of the quartic catalog. `-neg` entries negate `b`.
pub const CATALOG_IDS: &[&str] = &["3.1", "3.3", "3.5", "3.6", "3.6neg", "3.9", "3.9neg"];

pub fn catalog_equation(id: &str) -> Result<QuarticEquation> {
    let g = |a: i64, b: i64| GaussianInt::new(a, b);
    let (a, b, c, d) = match id {
        "3.1" => (g(1, 0), g(0, 0), g(1, 0), g(1, 0)),
        "3.3" => (g(1, 0), g(0, 0), g(1, 0), g(0, 1)),
        "3.5" => (g(1, 0), g(0, 0), g(1, 0), g(1, 1)),
        "3.6" => (g(1, 0), g(6, 0), g(1, 0), g(1, 0)),
        "3.6neg" => (g(1, 0), g(-6, 0), g(1, 0), g(1, 0)),
        "3.9" => (g(1, 0), g(6, 6), g(0, 2), g(1, 0)),
        "3.9neg" => (g(1, 0), g(-6, -6), g(0, 2), g(1, 0)),
        _ => return Err(Error::UnknownEquation(id.to_string())),
    };
    QuarticEquation::new(a, b, c, d)
}

/// `(eps, mu)` for the equations `(1, 6 eps, eps^2, 1)` with
/// `eps` in `{1, -1, 1+i, -(1+i)}`; `mu = eps`.
pub fn resolvent_params(eq: &QuarticEquation) -> Result<(GaussianInt, GaussianInt)> {
    for eps in [(1, 0), (-1, 0), (1, 1), (-1, -1)].map(|(a, b)| GaussianInt::new(a, b)) {
        let want = QuarticEquation {
            a: GaussianInt::one(),
            b: GaussianInt::new(6, 0) * &eps,
            c: eps.square(),
            d: GaussianInt::one(),
        };
        if *eq == want {
            return Ok((eps.clone(), eps));
        }
    }
    Err(Error::NoResolvent(eq.to_string()))
}

/// `(u^2 + eps v^2)^2 + 4 mu (uv)^2`, checked against `u^4 + b u^2v^2 + c v^4`.
pub fn resolvent_discriminant(
    eq: &QuarticEquation,
    u: &GaussianInt,
    v: &GaussianInt,
) -> Result<GaussianInt> {
    let (eps, mu) = resolvent_params(eq)?;
    let s = u.square() + &eps * v.square();
    let disc = s.square() + GaussianInt::new(4, 0) * mu * (u * v).square();
    if disc != eq.eval(u, v) {
        return Err(Error::Identity(format!("discriminant mismatch at u = {u}, v = {v}")));
    }
    Ok(disc)
}

/// A root of `z^2 - (u^2 + eps v^2) z - mu (uv)^2` in Z[i], if one exists.
pub fn resolvent_root(
    eq: &QuarticEquation,
    u: &GaussianInt,
    v: &GaussianInt,
) -> Result<Option<GaussianInt>> {
    let (eps, _) = resolvent_params(eq)?;
    let Some(d) = resolvent_discriminant(eq, u, v)?.is_square() else {
        return Ok(None);
    };
    let s = u.square() + eps * v.square();
    let two = GaussianInt::new(2, 0);
    Ok((&s + &d).exact_div(&two).or_else(|| (s - d).exact_div(&two)))
}

/// `U^2 + eps V^2 = U'^2 - eps V'^2` and `UV = U'V'` with coprime pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemSolution {
    pub u: GaussianInt,
    pub v: GaussianInt,
    pub up: GaussianInt,
    pub vp: GaussianInt,
    pub eps: GaussianInt,
}

impl SystemSolution {
    pub fn new(
        u: GaussianInt,
        v: GaussianInt,
        up: GaussianInt,
        vp: GaussianInt,
        eps: GaussianInt,
    ) -> Result<Self> {
        let s = SystemSolution { u, v, up, vp, eps };
        s.check()?;
        Ok(s)
    }

    /// Identity and coprimality check.
    pub fn check(&self) -> Result<()> {
        let lhs = self.u.square() + &self.eps * self.v.square();
        let rhs = self.up.square() - &self.eps * self.vp.square();
        if lhs != rhs {
            return Err(Error::Identity(format!("U^2 + eV^2 != U'^2 - eV'^2 for {self}")));
        }
        if &self.u * &self.v != &self.up * &self.vp {
            return Err(Error::Identity(format!("UV != U'V' for {self}")));
        }
        if !coprime(&self.u, &self.v) || !coprime(&self.up, &self.vp) {
            return Err(Error::Precondition(format!("pairs of {self} are not coprime")));
        }
        Ok(())
    }

    pub fn is_nontrivial(&self) -> bool {
        ![&self.u, &self.v, &self.up, &self.vp].iter().any(|z| z.is_zero())
    }

    /// Coset index of `UV`.
    pub fn index(&self) -> Result<CosetIndex> {
        nu(&(&self.u * &self.v))
    }
}

impl fmt::Display for SystemSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(U, V, U', V') = ({}, {}, {}, {}) with e = {}",
            self.u, self.v, self.up, self.vp, self.eps
        )
    }
}

/// From a point `(u, v)` with `d^2 = D(u, v)` to a system solution.
///
/// The half-sums `u' = (d + u^2 + eps v^2)/2`, `v' = (d - u^2 - eps v^2)/2`
/// must split as `u' = n^2`, `v' = eps m^2` (returning `(u, v, n, m)`) or as
/// `u' = -n^2`, `v' = -eps m^2` (returning `(iu, iv, n, m)`). Failure of the
/// split is reported as [`Error::NotSquare`].
pub fn quartic_to_system(
    eq: &QuarticEquation,
    u: &GaussianInt,
    v: &GaussianInt,
    d: &GaussianInt,
) -> Result<SystemSolution> {
    let (eps, _) = resolvent_params(eq)?;
    if !u.is_zero() && !v.is_zero() && d.square() != resolvent_discriminant(eq, u, v)? {
        return Err(Error::Precondition(format!("d = {d} does not square to D({u}, {v})")));
    }
    system_from_point(&eps, u, v, d)
}

/// [`quartic_to_system`] for an arbitrary nonzero `eps`.
pub fn system_from_point(
    eps: &GaussianInt,
    u: &GaussianInt,
    v: &GaussianInt,
    d: &GaussianInt,
) -> Result<SystemSolution> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::Precondition(format!("u = {u}, v = {v}: both must be nonzero")));
    }
    if eps.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !coprime(u, v) {
        return Err(Error::Precondition(format!("gcd({u}, {v}) is not a unit")));
    }
    let s = u.square() + eps * v.square();
    let disc = s.square() + GaussianInt::new(4, 0) * eps * (u * v).square();
    if d.square() != disc {
        return Err(Error::Precondition(format!("d = {d} does not square to D({u}, {v})")));
    }
    let two = GaussianInt::new(2, 0);
    let sum = d + &s;
    let diff = d - &s;
    let up = sum.exact_div(&two).ok_or_else(|| Error::NotDivisible(sum, two.clone()))?;
    let vp = diff.exact_div(&two).ok_or(Error::NotDivisible(diff, two))?;
    for unit in [UnitExp::ONE, UnitExp::MINUS_ONE] {
        let Some(n) = up.mul_unit(unit).is_square() else {
            continue;
        };
        let Some(m2) = vp.mul_unit(unit).exact_div(eps) else {
            continue;
        };
        let Some(mut m) = m2.is_square() else {
            continue;
        };
        let rot = if unit == UnitExp::ONE { UnitExp::ONE } else { UnitExp::I };
        let (uu, vv) = (u.mul_unit(rot), v.mul_unit(rot));
        if &n * &m != &uu * &vv {
            m = -m;
        }
        return SystemSolution::new(uu, vv, n, m, eps.clone());
    }
    Err(Error::NotSquare(up))
}

/// `(U, V, d)` with `d = U'^2 + eps V'^2`, so `d^2 = D(U, V)`.
pub fn system_to_quartic(sol: &SystemSolution) -> Result<(GaussianInt, GaussianInt, GaussianInt)> {
    sol.check()?;
    let d = sol.up.square() + &sol.eps * sol.vp.square();
    let s = sol.u.square() + &sol.eps * sol.v.square();
    let disc = s.square() + GaussianInt::new(4, 0) * &sol.eps * (&sol.u * &sol.v).square();
    if d.square() != disc {
        return Err(Error::Identity(format!("d^2 != D(U, V) for {sol}")));
    }
    Ok((sol.u.clone(), sol.v.clone(), d))
}

/// Nontrivial system solutions with `U, V` in the box of half-width
/// `bound`, found through the resolvent of `(1, 6 eps, eps^2, 1)`. Sorted
/// by `(U, V)`.
pub fn search_system(eps: &GaussianInt, bound: u32) -> Result<Vec<SystemSolution>> {
    let eq = QuarticEquation::new(
        GaussianInt::one(),
        GaussianInt::new(6, 0) * eps,
        eps.square(),
        GaussianInt::one(),
    )?;
    resolvent_params(&eq)?;
    let b = i128::from(bound);
    let cb = SmallGi::from_big(&eq.b)?;
    let cc = SmallGi::from_big(&eq.c)?;
    let elems: Vec<SmallGi> = (-b..=b)
        .flat_map(|re| (-b..=b).map(move |im| SmallGi::new(re, im)))
        .filter(|z| !z.is_zero())
        .collect();
    let found: Result<Vec<Vec<SystemSolution>>> = elems
        .par_iter()
        .map(|&u| {
            let mut out = Vec::new();
            let u2 = u.mul(u)?;
            let u4 = u2.mul(u2)?;
            for &v in &elems {
                let v2 = v.mul(v)?;
                let w = u4.add(cb.mul(u2.mul(v2)?)?)?.add(cc.mul(v2.mul(v2)?)?)?;
                let Some(d) = w.sqrt()? else { continue };
                let (ub, vb) = (u.to_big(), v.to_big());
                if !coprime(&ub, &vb) {
                    continue;
                }
                if let Ok(sol) = quartic_to_system(&eq, &ub, &vb, &d.to_big()) {
                    if sol.is_nontrivial() {
                        out.push(sol);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all: Vec<SystemSolution> = found?.into_iter().flatten().collect();
    all.sort_by(|x, y| x.u.cmp_key(&y.u).then_with(|| x.v.cmp_key(&y.v)));
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gi;

    #[test]
    fn catalog_and_params() {
        for id in CATALOG_IDS {
            let eq = catalog_equation(id).unwrap();
            assert_eq!(eq.catalog_id(), Some(*id));
        }
        let (e, m) = resolvent_params(&catalog_equation("3.9").unwrap()).unwrap();
        assert_eq!((e, m), (gi("1+i"), gi("1+i")));
        assert!(matches!(
            resolvent_params(&catalog_equation("3.1").unwrap()),
            Err(Error::NoResolvent(_))
        ));
        let eq: QuarticEquation = "1, 6+6i, 2i, 1".parse().unwrap();
        assert_eq!(eq.catalog_id(), Some("3.9"));
        assert!("1,2,3".parse::<QuarticEquation>().is_err());
        assert!(QuarticEquation::new(gi("0"), gi("1"), gi("1"), gi("1")).is_err());
    }

    #[test]
    fn discriminant_examples() {
        let e1 = catalog_equation("3.6").unwrap();
        let d = resolvent_discriminant(&e1, &gi("1+i"), &gi("2")).unwrap();
        let (u2, v2) = (gi("1+i").square(), gi("4"));
        assert_eq!(d, (&u2 + &v2).square() + gi("4") * (&u2 * &v2));
        let e2 = catalog_equation("3.9").unwrap();
        let d = resolvent_discriminant(&e2, &gi("1"), &gi("1+i")).unwrap();
        let opi = gi("1+i");
        assert_eq!(d, gi("1") + gi("6+6i") * opi.square() + gi("2i") * opi.pow(4));
        assert_eq!(resolvent_discriminant(&e1, &gi("1"), &gi("0")).unwrap(), gi("1"));
    }

    #[test]
    fn quartic_to_system_cases() {
        let eq = catalog_equation("3.6").unwrap();
        // u^2 + v^2 = 0: the half-sums are +-i, which do not split.
        assert_eq!(
            quartic_to_system(&eq, &gi("1"), &gi("i"), &gi("2i")),
            Err(Error::NotSquare(gi("i")))
        );
        assert_eq!(
            quartic_to_system(&eq, &gi("1"), &gi("i"), &gi("-2i")),
            Err(Error::NotSquare(gi("-i")))
        );
        // D(1, 2) = 41 has no square root.
        assert_eq!(resolvent_discriminant(&eq, &gi("1"), &gi("2")).unwrap(), gi("41"));
        assert_eq!(gi("41").is_square(), None);
        assert_eq!(resolvent_root(&eq, &gi("1"), &gi("2")).unwrap(), None);
        assert!(matches!(
            quartic_to_system(&eq, &gi("1"), &gi("2"), &gi("7")),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            quartic_to_system(&eq, &gi("1"), &gi("0"), &gi("1")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn round_trip_relaxed_eps() {
        // 36 + 5 = (2i)^2 - 5(-3i)^2 and 6 = (2i)(-3i).
        let sol = SystemSolution::new(gi("6"), gi("1"), gi("2i"), gi("-3i"), gi("5")).unwrap();
        let (u, v, d) = system_to_quartic(&sol).unwrap();
        assert_eq!(d, gi("-49"));
        assert_eq!(system_from_point(&gi("5"), &u, &v, &d).unwrap(), sol);
        assert!(matches!(system_from_point(&gi("5"), &u, &v, &gi("49")), Err(Error::NotSquare(_))));
    }

    #[test]
    fn catalog_systems_are_empty_in_small_boxes() {
        for eps in ["1", "-1", "1+i", "-1-i"] {
            assert!(search_system(&gi(eps), 6).unwrap().is_empty(), "{eps}");
        }
    }

    #[test]
    fn system_rejects_bad_identities() {
        assert!(SystemSolution::new(gi("6"), gi("1"), gi("2i"), gi("3i"), gi("5")).is_err());
        assert!(SystemSolution::new(gi("2"), gi("2"), gi("2"), gi("2"), gi("1")).is_err());
    }
}
