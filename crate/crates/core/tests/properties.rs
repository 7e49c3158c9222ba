use std::collections::BTreeSet;

use proptest::prelude::*;

use zquartic::conic::{conic_param, szabo_halfsum_param, ConicForm, ConicVariant, ParamPair, Triple};
use zquartic::descent::{build_certificate, gcd4_factorize, relaxed_seed, ascend, DescentCertificate};
use zquartic::factor::{factor, nu};
use zquartic::resolvent::{catalog_equation, resolvent_discriminant, resolvent_params};
use zquartic::search::{parse_equation, search, EquationKind, SearchConfig};
use zquartic::small::{self, SmallGi};
use zquartic::{gcd, GaussianInt, UnitExp};

fn gi(r: i64) -> impl Strategy<Value = GaussianInt> {
    (-r..=r, -r..=r).prop_map(|(a, b)| GaussianInt::new(a, b))
}

fn nonzero(r: i64) -> impl Strategy<Value = GaussianInt> {
    gi(r).prop_filter("nonzero", |z| !z.is_zero())
}

fn unit() -> impl Strategy<Value = UnitExp> {
    (0i64..4).prop_map(UnitExp::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn div_rem_remainder_is_small(a in gi(10_000), b in nonzero(1_000)) {
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&q * &b + &r, a);
        prop_assert!(r.norm() * 2 <= b.norm());
    }

    #[test]
    fn gcd_divides_and_scales(a in nonzero(500), b in nonzero(500), c in nonzero(30)) {
        let g = gcd(&a, &b).unwrap();
        prop_assert!(g.divides(&a) && g.divides(&b));
        prop_assert_eq!(g.canonical().unwrap(), g.clone());
        let gc = gcd(&(&a * &c), &(&b * &c)).unwrap();
        prop_assert!(gc.is_associate(&(&g * &c)));
    }

    #[test]
    fn factorization_is_canonical(z in nonzero(3_000)) {
        let f = factor(&z).unwrap();
        prop_assert_eq!(f.product(), z);
        for (p, e) in &f.factors {
            prop_assert!(*e >= 1);
            prop_assert_eq!(&p.canonical().unwrap(), p);
        }
        let keys: Vec<_> = f.factors.iter().map(|(p, _)| p.sort_key()).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn nu_is_additive(a in nonzero(300), b in nonzero(300), u in unit()) {
        let lhs = nu(&(&a * &b)).unwrap();
        prop_assert_eq!(lhs, nu(&a).unwrap() * nu(&b).unwrap());
        prop_assert_eq!(nu(&a.mul_unit(u)).unwrap(), nu(&a).unwrap());
    }

    #[test]
    fn squares_are_recognized(z in gi(100_000)) {
        let r = z.square().is_square().unwrap();
        prop_assert!(r == z || r == -&z);
        let shifted = &z.square() + &GaussianInt::one();
        if let Some(s) = shifted.is_square() {
            prop_assert_eq!(s.square(), shifted);
        }
    }

    #[test]
    fn literal_round_trip(z in gi(1_000_000)) {
        let back: GaussianInt = z.to_string().parse().unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn small_kernel_agrees(a in gi(1_000_000), b in nonzero(1_000)) {
        let (sa, sb) = (SmallGi::from_big(&a).unwrap(), SmallGi::from_big(&b).unwrap());
        prop_assert_eq!(sa.mul(sb).unwrap().to_big(), &a * &b);
        prop_assert_eq!(small::gcd(sa, sb).unwrap().to_big().canonical().unwrap(), gcd(&a, &b).unwrap());
        let sq = sa.mul(sa).unwrap().sqrt().unwrap().map(SmallGi::to_big);
        prop_assert!(sq == Some(a.clone()) || sq == Some(-&a));
    }

    #[test]
    fn conic_parametrization_is_sound(
        p in nonzero(40), q in nonzero(40), t in unit(), k in 0usize..4, zero in any::<bool>()
    ) {
        let eps = [GaussianInt::one(), GaussianInt::i(), GaussianInt::new(-1, 0), GaussianInt::one_plus_i()][k].clone();
        let form = if zero {
            ConicForm::new(GaussianInt::one(), ConicVariant::ZeroForm).unwrap()
        } else {
            ConicForm::new(eps, ConicVariant::Equation).unwrap()
        };
        if let Ok(tr) = conic_param(&form, &ParamPair::new(p, q, t)) {
            prop_assert!(form.holds(&tr), "{} on {}", tr, form);
        }
    }

    #[test]
    fn halfsum_identities(p in nonzero(40), q in nonzero(40), t in unit(), upper in any::<bool>()) {
        let pair = ParamPair::new(p.clone(), q.clone(), t);
        if let Ok(Triple { x: a, y: b, z: g }) = szabo_halfsum_param(&pair, if upper { 1 } else { -1 }) {
            prop_assert_eq!(a.square() + b.square(), &GaussianInt::i() * &g.square());
            let sign = if t.exp() % 2 == 0 { GaussianInt::one() } else { GaussianInt::new(-1, 0) };
            prop_assert_eq!(GaussianInt::new(2, 0) * &a * &b, sign * (p.pow(4) + q.pow(4)));
        }
    }

    #[test]
    fn discriminant_identity(u in gi(1_000), v in gi(1_000), k in 0usize..4) {
        let id = ["3.6", "3.6neg", "3.9", "3.9neg"][k];
        let eq = catalog_equation(id).unwrap();
        let (eps, mu) = resolvent_params(&eq).unwrap();
        let (u2, v2) = (u.square(), v.square());
        let s = &u2 + &(&eps * &v2);
        let expected = s.square() + GaussianInt::new(4, 0) * &mu * (&u * &v).square();
        prop_assert_eq!(resolvent_discriminant(&eq, &u, &v).unwrap(), expected.clone());
        prop_assert_eq!(eq.eval(&u, &v), expected);
    }

    #[test]
    fn gcd4_reconstructs(a in nonzero(15), b in nonzero(15), c in nonzero(15), d in nonzero(15)) {
        let (n, m, np, mp) = (&a * &b, &c * &d, &a * &c, &b * &d);
        if let Ok(g) = gcd4_factorize(&n, &m, &np, &mp) {
            prop_assert_eq!(g.reconstruct(), [n, m, np, mp]);
        }
    }
}

#[test]
fn certificate_text_round_trip() {
    let (cert, _) = build_certificate(&ascend(&relaxed_seed()).unwrap(), 8).unwrap();
    let text = cert.to_text();
    let parsed = DescentCertificate::parse(&text).unwrap();
    assert_eq!(parsed, cert);
    assert_eq!(parsed.to_text(), text);
}

fn abs(z: &GaussianInt) -> f64 {
    let (a, b) = z.to_i128_parts().unwrap();
    ((a * a + b * b) as f64).sqrt()
}

/// Every `(x, y, z)` in a box large enough to contain all solutions with
/// the two searched coordinates bounded, checked by direct substitution.
fn brute_force(spec_id: &str, bound: i64) -> BTreeSet<Triple> {
    let spec = parse_equation(spec_id).unwrap();
    let box_of = |r: i64| -> Vec<GaussianInt> {
        (-r..=r)
            .flat_map(|a| (-r..=r).map(move |b| GaussianInt::new(a, b)))
            .filter(|z| !z.is_zero())
            .collect()
    };
    // |x|, |y| <= bound * sqrt(2), so the free coordinate has modulus at
    // most sqrt(sum |coefficient| / |leading|) * 2 bound^2.
    let scale = match &spec.kind {
        EquationKind::Quartic(eq) => (abs(&eq.a) + abs(&eq.b) + abs(&eq.c)) / abs(&eq.d),
        EquationKind::Biquadratic(eps) => 2.0 / abs(eps),
    };
    let reach = (scale.sqrt() * 2.0 * (bound * bound) as f64).ceil() as i64;
    let (near, far) = (box_of(bound), box_of(reach));
    let mut out = BTreeSet::new();
    for x in &near {
        for second in &near {
            for free in &far {
                let t = match spec.kind {
                    EquationKind::Quartic(_) => Triple::new(x.clone(), second.clone(), free.clone()),
                    EquationKind::Biquadratic(_) => Triple::new(x.clone(), free.clone(), second.clone()),
                };
                if (spec.y_even && t.y.is_odd()) || !spec.holds(&t) {
                    continue;
                }
                if gcd(&gcd(&t.x, &t.y).unwrap(), &t.z).unwrap().is_unit() {
                    out.insert(t);
                }
            }
        }
    }
    out
}

#[test]
fn search_matches_direct_enumeration() {
    for (id, bound) in [("3.3", 2), ("3.6", 2), ("3.1", 2), ("3.2", 2), ("1,-1,1,1", 2), ("1,0,-1,1", 2)] {
        let spec = parse_equation(id).unwrap();
        let found: BTreeSet<Triple> = search(&SearchConfig::new(spec, bound as u32))
            .unwrap()
            .iter()
            .map(|r| r.triple())
            .collect();
        assert_eq!(found, brute_force(id, bound), "{id}");
    }
}
