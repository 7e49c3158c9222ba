//! Seeded property suites run by the `selftest` subcommand.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conic::{parametrization_completeness, residue_obstruction, ConicForm, ConicVariant};
use crate::descent::{ascend, build_certificate, relaxed_seed, verify_descent_certificate, DescentCertificate};
use crate::error::Result;
use crate::factor::{factor, nu, CosetIndex};
use crate::gaussian::{self, GaussianInt};
use crate::resolvent::{catalog_equation, resolvent_discriminant, system_from_point, system_to_quartic};

pub const DEFAULT_SEED: u64 = 20_161_114;

pub type GcdFn = fn(&GaussianInt, &GaussianInt) -> Result<GaussianInt>;

/// Replaceable operations, so a deliberately broken implementation can be
/// shown to fail its suite.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub gcd: GcdFn,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { gcd: gaussian::gcd }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.failure.is_none())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "selftest seed {}", self.seed);
        for r in &self.suites {
            match &r.failure {
                None => {
                    let _ = writeln!(s, "PASS {} ({} cases)", r.name, r.cases);
                }
                Some(f) => {
                    let _ = writeln!(s, "FAIL {} ({} cases): {f}", r.name, r.cases);
                }
            }
        }
        let passed = self.suites.iter().filter(|r| r.failure.is_none()).count();
        let _ = writeln!(s, "{passed}/{} suites passed", self.suites.len());
        s
    }
}

fn random_gi(rng: &mut ChaCha8Rng, r: i64) -> GaussianInt {
    GaussianInt::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

fn random_nonzero(rng: &mut ChaCha8Rng, r: i64) -> GaussianInt {
    loop {
        let z = random_gi(rng, r);
        if !z.is_zero() {
            return z;
        }
    }
}

type Check = std::result::Result<usize, String>;

fn gcd_oracle(gcd: GcdFn) -> Check {
    let r = 5i64;
    let elems: Vec<GaussianInt> = (-r..=r)
        .flat_map(|a| (-r..=r).map(move |b| GaussianInt::new(a, b)))
        .filter(|z| !z.is_zero())
        .collect();
    let mut cases = 0;
    for a in &elems {
        for b in &elems {
            // Largest common divisor by norm among all candidates.
            let best = elems
                .iter()
                .filter(|d| d.divides(a) && d.divides(b))
                .max_by(|x, y| x.norm().cmp(&y.norm()))
                .expect("units divide everything");
            let g = gcd(a, b).map_err(|e| format!("gcd({a}, {b}): {e}"))?;
            if g != best.canonical().expect("nonzero") {
                return Err(format!("gcd({a}, {b}) = {g}, exhaustive search gives {best}"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn nu_additivity(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..500 {
        let (a, b) = (random_nonzero(rng, 60), random_nonzero(rng, 60));
        let lhs = nu(&(&a * &b)).map_err(|e| e.to_string())?;
        let rhs = nu(&a).map_err(|e| e.to_string())? * nu(&b).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("nu({a} * {b}) = {lhs}, sum gives {rhs}"));
        }
    }
    Ok(500)
}

fn monoid_laws(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..500 {
        let [a, b, c] = [0; 3].map(|_| CosetIndex(rng.gen_range(0..1000)));
        if (a * b) * c != a * (b * c) {
            return Err(format!("associativity fails at {a}, {b}, {c}"));
        }
        if a * CosetIndex::IDENTITY != a || CosetIndex::IDENTITY * a != a {
            return Err(format!("identity fails at {a}"));
        }
    }
    Ok(500)
}

fn completeness() -> Check {
    let mut cases = 0;
    for (eps, v) in [
        (GaussianInt::one(), ConicVariant::Equation),
        (GaussianInt::i(), ConicVariant::Equation),
        (GaussianInt::one_plus_i(), ConicVariant::Equation),
        (GaussianInt::one(), ConicVariant::ZeroForm),
    ] {
        let form = ConicForm::new(eps, v).map_err(|e| e.to_string())?;
        let r = parametrization_completeness(&form, 6).map_err(|e| e.to_string())?;
        if !r.complete() {
            return Err(format!("{form}: {} unmatched, first {}", r.unmatched.len(), r.unmatched[0]));
        }
        cases += r.eligible;
    }
    Ok(cases)
}

fn discriminant_identity(rng: &mut ChaCha8Rng) -> Check {
    let eqs = ["3.6", "3.6neg", "3.9", "3.9neg"].map(|id| catalog_equation(id).expect("catalog"));
    for _ in 0..500 {
        let (u, v) = (random_gi(rng, 100), random_gi(rng, 100));
        for eq in &eqs {
            resolvent_discriminant(eq, &u, &v).map_err(|e| e.to_string())?;
        }
    }
    Ok(500 * eqs.len())
}

fn round_trips(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for _ in 0..300 {
        let z = random_nonzero(rng, 1000);
        let f = factor(&z).map_err(|e| e.to_string())?;
        if f.product() != z {
            return Err(format!("factorization of {z} multiplies back to {}", f.product()));
        }
        let back: GaussianInt = z.to_string().parse().map_err(|e: crate::Error| e.to_string())?;
        if back != z {
            return Err(format!("literal round trip of {z} gives {back}"));
        }
        cases += 1;
    }
    let s1 = relaxed_seed();
    let s2 = ascend(&s1).map_err(|e| e.to_string())?;
    for s in [&s1, &s2] {
        let (u, v, d) = system_to_quartic(s).map_err(|e| e.to_string())?;
        let again = system_from_point(&s.eps, &u, &v, &d).map_err(|e| e.to_string())?;
        if again != *s {
            return Err(format!("system round trip of {s} gives {again}"));
        }
        cases += 1;
    }
    let (cert, _) = build_certificate(&s2, 8).map_err(|e| e.to_string())?;
    let verdict = verify_descent_certificate(&cert);
    if !verdict.valid {
        return Err(format!("descent certificate: {verdict}"));
    }
    let text = cert.to_text();
    let parsed = DescentCertificate::parse(&text).map_err(|e| e.to_string())?;
    if parsed.to_text() != text {
        return Err("certificate text does not round-trip".into());
    }
    Ok(cases + 1)
}

fn obstructions() -> Check {
    let cases = [
        (ConicForm::pythagorean(), "3.1/t=0"),
        (ConicForm::pythagorean(), "3.1/t=1"),
        (ConicForm::pythagorean(), "3.1/t=2"),
        (ConicForm::new(GaussianInt::one(), ConicVariant::ZeroForm).expect("catalog"), "3.3/parity"),
        (ConicForm::new(GaussianInt::one_plus_i(), ConicVariant::Equation).expect("catalog"), "3.4/parity"),
    ];
    let mut rows = 0;
    for (form, case) in &cases {
        let r = residue_obstruction(form, case).map_err(|e| e.to_string())?;
        if !r.impossible {
            return Err(format!("{case}: forced {:?} meets allowed {:?}", r.forced_values(), r.allowed_values()));
        }
        rows += r.forced.len() + r.allowed.len();
    }
    Ok(rows)
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    run_selftest_with(seed, Hooks::default())
}

pub fn run_selftest_with(seed: u64, hooks: Hooks) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = Vec::new();
    let mut record = |name: &'static str, r: Check| {
        let (cases, failure) = match r {
            Ok(n) => (n, None),
            Err(e) => (0, Some(e)),
        };
        suites.push(SuiteResult { name, cases, failure });
    };
    record("gcd oracle", gcd_oracle(hooks.gcd));
    record("nu additivity", nu_additivity(&mut rng));
    record("monoid laws", monoid_laws(&mut rng));
    record("parametrization completeness", completeness());
    record("discriminant identity", discriminant_identity(&mut rng));
    record("round trips", round_trips(&mut rng));
    record("residue obstructions", obstructions());
    SelftestReport { seed, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn broken_gcd(a: &GaussianInt, b: &GaussianInt) -> Result<GaussianInt> {
        let g = gaussian::gcd(a, b)?;
        Ok(if g.is_unit() { g } else { GaussianInt::one() })
    }

    #[test]
    fn fresh_build_passes_and_is_reproducible() {
        let a = run_selftest(DEFAULT_SEED);
        assert!(a.all_pass(), "{}", a.to_text());
        assert_eq!(a.to_text(), run_selftest(DEFAULT_SEED).to_text());
    }

    #[test]
    fn broken_gcd_is_caught() {
        let r = run_selftest_with(DEFAULT_SEED, Hooks { gcd: broken_gcd });
        let failed: Vec<_> = r.suites.iter().filter(|s| s.failure.is_some()).map(|s| s.name).collect();
        assert_eq!(failed, vec!["gcd oracle"]);
    }
}
