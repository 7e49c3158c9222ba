//! Second-degree forms `X^2 + eps*Y^2 = Z^2` and `X^2 + eps*Y^2 + Z^2 = 0`:
//! parametrizations, their inversion, residue obstructions and a brute-force
//! oracle.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{coprime, GaussianInt, UnitExp};
use crate::small::{self, SmallGi};

/// Largest box bound accepted by [`brute_force_conic`].
pub const CONIC_BUDGET: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConicVariant {
    /// `X^2 + eps*Y^2 = Z^2`
    Equation,
    /// `X^2 + eps*Y^2 + Z^2 = 0`
    ZeroForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicForm {
    eps: GaussianInt,
    variant: ConicVariant,
}

/// The coefficients a form may carry: `1, i, 1+i` and their negatives.
pub fn eps_catalog() -> Vec<GaussianInt> {
    [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]
        .into_iter()
        .map(|(a, b)| GaussianInt::new(a, b))
        .collect()
}

impl ConicForm {
    pub fn new(eps: GaussianInt, variant: ConicVariant) -> Result<Self> {
        if !eps_catalog().contains(&eps) {
            return Err(Error::UnsupportedEps(eps));
        }
        Ok(ConicForm { eps, variant })
    }

    /// `X^2 + Y^2 = Z^2`
    pub fn pythagorean() -> Self {
        ConicForm {
            eps: GaussianInt::one(),
            variant: ConicVariant::Equation,
        }
    }

    pub fn eps(&self) -> &GaussianInt {
        &self.eps
    }

    pub fn variant(&self) -> ConicVariant {
        self.variant
    }

    /// `eps` is an associate of `1+i`; such families need `Q` even.
    fn ramified(&self) -> bool {
        !self.eps.is_odd()
    }

    pub fn holds(&self, t: &Triple) -> bool {
        let lhs = t.x.square() + &self.eps * t.y.square();
        match self.variant {
            ConicVariant::Equation => lhs == t.z.square(),
            ConicVariant::ZeroForm => (lhs + t.z.square()).is_zero(),
        }
    }
}

impl fmt::Display for ConicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            ConicVariant::Equation => write!(f, "X^2 + ({})Y^2 = Z^2", self.eps),
            ConicVariant::ZeroForm => write!(f, "X^2 + ({})Y^2 + Z^2 = 0", self.eps),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPair {
    pub p: GaussianInt,
    pub q: GaussianInt,
    pub t: UnitExp,
}

impl ParamPair {
    pub fn new(p: GaussianInt, q: GaussianInt, t: UnitExp) -> Self {
        ParamPair { p, q, t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub x: GaussianInt,
    pub y: GaussianInt,
    pub z: GaussianInt,
}

impl Triple {
    pub fn new(x: GaussianInt, y: GaussianInt, z: GaussianInt) -> Self {
        Triple { x, y, z }
    }

    /// `(i^a x, i^b y, i^c z)`
    pub fn act(&self, [a, b, c]: [UnitExp; 3]) -> Triple {
        Triple::new(self.x.mul_unit(a), self.y.mul_unit(b), self.z.mul_unit(c))
    }
}

impl Ord for Triple {
    fn cmp(&self, o: &Self) -> Ordering {
        self.x
            .cmp_key(&o.x)
            .then_with(|| self.y.cmp_key(&o.y))
            .then_with(|| self.z.cmp_key(&o.z))
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// `(k(P^2 - s*eps*Q^2), (1+i)^2 PQ, k(P^2 + s*eps*Q^2))` with `s = -k^2`.
/// Satisfies `X^2 + eps*Y^2 = Z^2` for any `P, Q`.
pub(crate) fn param_triple(
    eps: &GaussianInt,
    kappa: UnitExp,
    p: &GaussianInt,
    q: &GaussianInt,
) -> Triple {
    let s = kappa.mul(kappa).mul(UnitExp::MINUS_ONE);
    let p2 = p.square();
    let seq2 = (eps * q.square()).mul_unit(s);
    let y = GaussianInt::new(0, 2) * p * q;
    Triple::new(
        (&p2 - &seq2).mul_unit(kappa),
        y,
        (p2 + seq2).mul_unit(kappa),
    )
}

/// The leading unit `k` for parameter `t`: `i^(t+1)` for `eps = 1`,
/// `i^(1-t)` otherwise. In both cases `-k^2 = (-1)^t`.
fn kappa_for(eps: &GaussianInt, t: UnitExp) -> UnitExp {
    if *eps == GaussianInt::one() {
        t.mul(UnitExp::I)
    } else {
        UnitExp::I.mul(t.inverse())
    }
}

fn t_for(eps: &GaussianInt, kappa: UnitExp) -> UnitExp {
    if *eps == GaussianInt::one() {
        kappa.mul(UnitExp::MINUS_I)
    } else {
        UnitExp::I.mul(kappa.inverse())
    }
}

fn check_pair(form: &ConicForm, p: &GaussianInt, q: &GaussianInt) -> Result<()> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Precondition(format!("P = {p}, Q = {q}: both must be nonzero")));
    }
    if !coprime(p, q) {
        return Err(Error::Precondition(format!("gcd({p}, {q}) is not a unit")));
    }
    if form.ramified() {
        if q.is_odd() {
            return Err(Error::Precondition(format!("Q = {q} must be divisible by 1+i")));
        }
    } else if p.is_odd() && q.is_odd() {
        return Err(Error::Precondition(format!("PQ = ({p})({q}) must be divisible by 1+i")));
    }
    Ok(())
}

/// `(i^(t+1)(P^2 - (-1)^t Q^2), (1+i)^2 PQ, i^(t+1)(P^2 + (-1)^t Q^2))`.
pub fn pythagorean_param(p: &ParamPair) -> Result<Triple> {
    conic_param(&ConicForm::pythagorean(), p)
}

/// `(i^(1-t)(P^2 - (-1)^t eps Q^2), (1+i)^2 PQ, i^(1-t)(P^2 + (-1)^t eps Q^2))`
/// for `eps != 1`. The zero form returns `(X, Y, iZ)`.
pub fn conic_param(form: &ConicForm, p: &ParamPair) -> Result<Triple> {
    check_pair(form, &p.p, &p.q)?;
    let mut t = param_triple(&form.eps, kappa_for(&form.eps, p.t), &p.p, &p.q);
    if form.variant == ConicVariant::ZeroForm {
        t.z = t.z.mul_unit(UnitExp::I);
    }
    if !form.holds(&t) {
        return Err(Error::Identity(format!("{t} does not satisfy {form}")));
    }
    Ok(t)
}

/// A parameter pair reproducing a triple up to the unit action
/// `(i^a x, i^b y, i^c z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatch {
    pub pair: ParamPair,
    pub action: [UnitExp; 3],
}

/// Unit actions that map solutions of `X^2 + eps*Y^2 = Z^2` to solutions:
/// the three exponents share a parity.
pub(crate) fn conic_actions() -> impl Iterator<Item = [UnitExp; 3]> {
    UnitExp::all().into_iter().flat_map(|a| {
        UnitExp::all().into_iter().flat_map(move |b| {
            UnitExp::all()
                .into_iter()
                .filter(move |c| a.exp() % 2 == b.exp() % 2 && b.exp() % 2 == c.exp() % 2)
                .map(move |c| [a, b, c])
        })
    })
}

/// Solves `param_triple(eps, k, P, Q) = (x, y, z)` for `P, Q` with
/// `P^2 = (z+x)/(2k)` and `Q^2 = (z-x)/(2k*s*eps)`.
pub(crate) fn solve_param(
    eps: &GaussianInt,
    kappa: UnitExp,
    target: &Triple,
) -> Option<(GaussianInt, GaussianInt)> {
    let s = kappa.mul(kappa).mul(UnitExp::MINUS_ONE);
    let two_k = GaussianInt::new(2, 0).mul_unit(kappa);
    let p2 = (&target.z + &target.x).exact_div(&two_k)?;
    let q2 = (&target.z - &target.x).exact_div(&(eps * &two_k).mul_unit(s))?;
    let p = p2.is_square()?;
    let mut q = q2.is_square()?;
    let y = GaussianInt::new(0, 2) * &p * &q;
    if y != target.y {
        if -y == target.y {
            q = -q;
        } else {
            return None;
        }
    }
    (param_triple(eps, kappa, &p, &q) == *target).then_some((p, q))
}

/// Finds `(P, Q, t)` satisfying the family preconditions and a unit action
/// carrying `triple` onto the generated triple. First match in a fixed
/// order.
pub fn invert_conic(form: &ConicForm, triple: &Triple) -> Option<ParamMatch> {
    let mut base = triple.clone();
    if form.variant == ConicVariant::ZeroForm {
        base.z = base.z.mul_unit(UnitExp::MINUS_I);
    }
    for action in conic_actions() {
        let target = base.act(action);
        for kappa in UnitExp::all() {
            let Some((p, q)) = solve_param(&form.eps, kappa, &target) else {
                continue;
            };
            if check_pair(form, &p, &q).is_ok() {
                let pair = ParamPair::new(p, q, t_for(&form.eps, kappa));
                return Some(ParamMatch { pair, action });
            }
        }
    }
    None
}

/// `(A, B, G)` with `A = i^t (P^2 -+ (-1)^t iQ^2)/(1+i)`,
/// `B = i^(t+1) (P^2 +- (-1)^t iQ^2)/(1+i)`, `G = i^((1-+1)/2) (1+i)PQ`.
/// `sign = 1` picks the upper signs. Then `A^2 + B^2 = iG^2` and
/// `2AB = (-1)^t (P^4 + Q^4)`.
pub fn szabo_halfsum_param(p: &ParamPair, sign: i8) -> Result<Triple> {
    if sign != 1 && sign != -1 {
        return Err(Error::Precondition(format!("sign must be +1 or -1, got {sign}")));
    }
    let (pp, qq, t) = (&p.p, &p.q, p.t);
    if !pp.is_odd() || !qq.is_odd() {
        return Err(Error::Precondition(format!("P = {pp} and Q = {qq} must both be odd")));
    }
    if !coprime(pp, qq) {
        return Err(Error::Precondition(format!("gcd({pp}, {qq}) is not a unit")));
    }
    let s = if t.exp() % 2 == 0 { UnitExp::ONE } else { UnitExp::MINUS_ONE };
    let siq2 = qq.square().mul_unit(s.mul(UnitExp::I));
    let p2 = pp.square();
    let (n1, n2) = if sign == 1 {
        (&p2 - &siq2, &p2 + &siq2)
    } else {
        (&p2 + &siq2, &p2 - &siq2)
    };
    let opi = GaussianInt::one_plus_i();
    let a = n1
        .exact_div(&opi)
        .ok_or_else(|| Error::NotDivisible(n1.clone(), opi.clone()))?
        .mul_unit(t);
    let b = n2
        .exact_div(&opi)
        .ok_or_else(|| Error::NotDivisible(n2.clone(), opi.clone()))?
        .mul_unit(t.mul(UnitExp::I));
    let gu = if sign == 1 { UnitExp::ONE } else { UnitExp::I };
    let g = (&opi * pp * qq).mul_unit(gu);

    let i = GaussianInt::i();
    if a.square() + b.square() != &i * g.square() {
        return Err(Error::Identity(format!("A^2 + B^2 != iG^2 for ({a}, {b}, {g})")));
    }
    let quartic = p2.square() + qq.pow(4);
    let two_ab = GaussianInt::new(2, 0) * &a * &b;
    if two_ab != quartic.mul_unit(s) {
        return Err(Error::Identity(format!("2AB != (-1)^t (P^4 + Q^4) for ({a}, {b})")));
    }
    Ok(Triple::new(a, b, g))
}

/// `(P^2+Q^2)/2 = u` and `(P^2-Q^2)/2 = i^l v` with `v = (1+i)^(2+r) w`,
/// `w` primary, `l` in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSumSplit {
    pub u: GaussianInt,
    pub l: u8,
    pub r: i64,
    pub w: GaussianInt,
    pub v: GaussianInt,
    /// Reasons the stated pattern does not fit this instance, if any.
    pub ambiguous: Vec<String>,
}

/// Splits the half-sums of `P^2` and `Q^2` for odd coprime `P, Q`.
/// Instances that do not fit the exponent pattern are returned with
/// `ambiguous` filled in rather than rejected.
pub fn halfsum_split(p: &GaussianInt, q: &GaussianInt) -> Result<HalfSumSplit> {
    if !p.is_odd() || !q.is_odd() {
        return Err(Error::Precondition(format!("P = {p} and Q = {q} must both be odd")));
    }
    if !coprime(p, q) {
        return Err(Error::Precondition(format!("gcd({p}, {q}) is not a unit")));
    }
    let two = GaussianInt::new(2, 0);
    let (p2, q2) = (p.square(), q.square());
    let sum = &p2 + &q2;
    let diff = &p2 - &q2;
    let u = sum
        .exact_div(&two)
        .ok_or_else(|| Error::NotDivisible(sum.clone(), two.clone()))?;
    let h = diff
        .exact_div(&two)
        .ok_or_else(|| Error::NotDivisible(diff.clone(), two.clone()))?;
    let mut ambiguous = Vec::new();
    if !u.is_primary() {
        ambiguous.push(format!("u = {u} is not primary"));
    }
    if h.is_zero() {
        ambiguous.push("P^2 - Q^2 = 0".to_string());
        return Ok(HalfSumSplit {
            u,
            l: 0,
            r: 0,
            w: GaussianInt::zero(),
            v: GaussianInt::zero(),
            ambiguous,
        });
    }
    let (unit, canon) = h.canonical_associate()?;
    let (k, w) = canon.split_even_part()?;
    let r = i64::from(k) - 2;
    if r < 0 {
        ambiguous.push(format!("(P^2-Q^2)/2 = {h} has only {k} factors of 1+i"));
    }
    let l = match unit.exp() {
        0 | 1 => unit.exp(),
        e => {
            ambiguous.push(format!("unit i^{e} of (P^2-Q^2)/2 lies outside i^0, i^1"));
            e % 2
        }
    };
    Ok(HalfSumSplit { u, l, r, w, v: canon, ambiguous })
}

/// One row of a congruence table: input residues and the resulting value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceRow {
    pub inputs: Vec<(u32, u32)>,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub case: String,
    pub modulus: u32,
    /// Values the case forces on the checked quantity.
    pub forced: Vec<CongruenceRow>,
    /// Values the quantity can take for admissible inputs.
    pub allowed: Vec<CongruenceRow>,
    /// Forced and allowed value sets are nonempty and disjoint.
    pub impossible: bool,
}

impl ObstructionReport {
    pub fn forced_values(&self) -> BTreeSet<u32> {
        self.forced.iter().map(|r| r.value).collect()
    }

    pub fn allowed_values(&self) -> BTreeSet<u32> {
        self.allowed.iter().map(|r| r.value).collect()
    }
}

pub const OBSTRUCTION_CASES: &[&str] = &[
    "3.1/t=0",
    "3.1/t=1",
    "3.1/t=2",
    "3.3/parity",
    "3.4/parity",
    "trivial",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Primary,
    Odd,
    Even,
}

/// Residues `a+bi` mod 4 of the class, with `0 <= a, b < 4`.
fn residues(class: Class) -> Vec<GaussianInt> {
    let mut out = Vec::new();
    for a in 0..4i64 {
        for b in 0..4i64 {
            let keep = match class {
                Class::Primary => b % 2 == 0 && (a + b) % 4 == 1,
                Class::Odd => (a + b) % 2 == 1,
                Class::Even => (a + b) % 2 == 0,
            };
            if keep {
                out.push(GaussianInt::new(a, b));
            }
        }
    }
    out
}

fn key(z: &GaussianInt) -> (u32, u32) {
    (z.re_mod(4), z.im_mod(4))
}

/// Evaluates `f` over every combination of residues mod 4 for the given
/// input classes. Reduction mod 4 is a ring homomorphism, so the values are
/// exact for all Gaussian integers in those classes.
fn table(
    classes: &[Class],
    modulus: u32,
    f: impl Fn(&[GaussianInt]) -> GaussianInt,
    part: fn(&GaussianInt, u32) -> u32,
) -> Vec<CongruenceRow> {
    let sets: Vec<Vec<GaussianInt>> = classes.iter().map(|c| residues(*c)).collect();
    let mut rows = Vec::new();
    let mut idx = vec![0usize; sets.len()];
    loop {
        let args: Vec<GaussianInt> = idx.iter().zip(&sets).map(|(i, s)| s[*i].clone()).collect();
        rows.push(CongruenceRow {
            inputs: args.iter().map(key).collect(),
            value: part(&f(&args), modulus),
        });
        let mut k = 0;
        loop {
            if k == idx.len() {
                return rows;
            }
            idx[k] += 1;
            if idx[k] < sets[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn re_part(z: &GaussianInt, m: u32) -> u32 {
    z.re_mod(m)
}

/// Mechanically checks a congruence contradiction over all residue
/// classes. Tags are listed in [`OBSTRUCTION_CASES`].
pub fn residue_obstruction(form: &ConicForm, case: &str) -> Result<ObstructionReport> {
    use Class::*;
    let i = GaussianInt::i();
    let one = GaussianInt::one();
    let opi = GaussianInt::one_plus_i();
    let expect = |eps: &GaussianInt, variant: ConicVariant| -> Result<()> {
        if form.eps != *eps || form.variant != variant {
            return Err(Error::Precondition(format!("case {case} does not apply to {form}")));
        }
        Ok(())
    };
    let (modulus, forced, allowed) = match case {
        "trivial" => (1, Vec::new(), Vec::new()),
        "3.1/t=0" | "3.1/t=2" => {
            expect(&one, ConicVariant::Equation)?;
            // alpha^2 = +-i(P^4 - Q^4) with one of P, Q odd and the other even.
            let unit = if case == "3.1/t=0" { i.clone() } else { -&i };
            let f = |v: &[GaussianInt]| (v[0].pow(4) - v[1].pow(4)) * &unit;
            let mut forced = table(&[Odd, Even], 4, f, re_part);
            forced.extend(table(&[Even, Odd], 4, f, re_part));
            let allowed = table(&[Primary], 4, |v| v[0].square(), re_part);
            (4, forced, allowed)
        }
        "3.1/t=1" => {
            expect(&one, ConicVariant::Equation)?;
            // alpha^2 + P^4 = -Q^4 with P odd and Q even.
            let forced = table(&[Even], 4, |v| -v[0].pow(4), re_part);
            let allowed = table(&[Primary, Odd], 4, |v| v[0].square() + v[1].pow(4), re_part);
            (4, forced, allowed)
        }
        "3.3/parity" => {
            expect(&one, ConicVariant::ZeroForm)?;
            // i(m^2 +- n^2) = m'^2 +- n'^2, each pair with one odd entry.
            let mut forced = Vec::new();
            let mut allowed = Vec::new();
            for sgn in [one.clone(), -&one] {
                let f = |v: &[GaussianInt]| &i * (v[0].square() + &sgn * v[1].square());
                let g = |v: &[GaussianInt]| v[0].square() + &sgn * v[1].square();
                for classes in [[Odd, Even], [Even, Odd]] {
                    forced.extend(table(&classes, 2, f, re_part));
                    allowed.extend(table(&classes, 2, g, re_part));
                }
            }
            (2, forced, allowed)
        }
        "3.4/parity" => {
            expect(&opi, ConicVariant::Equation)?;
            // i(n^2 +- (1+i)m^2) = n'^2 +- (1+i)m'^2 with n odd and m even.
            let mut forced = Vec::new();
            let mut allowed = Vec::new();
            for sgn in [one.clone(), -&one] {
                let c = &sgn * &opi;
                let f = |v: &[GaussianInt]| &i * (v[0].square() + &c * v[1].square());
                let g = |v: &[GaussianInt]| v[0].square() + &c * v[1].square();
                forced.extend(table(&[Odd, Even], 2, f, re_part));
                allowed.extend(table(&[Odd, Even], 2, g, re_part));
            }
            (2, forced, allowed)
        }
        _ => return Err(Error::UnknownCase(case.to_string())),
    };
    let report = ObstructionReport {
        case: case.to_string(),
        modulus,
        impossible: false,
        forced,
        allowed,
    };
    let (fv, av) = (report.forced_values(), report.allowed_values());
    let impossible = !fv.is_empty() && !av.is_empty() && fv.is_disjoint(&av);
    Ok(ObstructionReport { impossible, ..report })
}

/// All primitive `(X, Y, Z)` with `X, Y` in the box of half-width `bound`,
/// sorted. Both signs of `Z` are listed.
pub fn brute_force_conic(form: &ConicForm, bound: u32) -> Result<Vec<Triple>> {
    brute_force_conic_with_budget(form, bound, CONIC_BUDGET)
}

pub fn brute_force_conic_with_budget(
    form: &ConicForm,
    bound: u32,
    budget: u32,
) -> Result<Vec<Triple>> {
    if bound > budget {
        return Err(Error::Budget { bound, budget });
    }
    let b = i128::from(bound);
    let eps = SmallGi::from_big(&form.eps)?;
    let zero_form = form.variant == ConicVariant::ZeroForm;
    let box_elems: Vec<SmallGi> = (-b..=b)
        .flat_map(|re| (-b..=b).map(move |im| SmallGi::new(re, im)))
        .collect();
    let rows: Result<Vec<Vec<Triple>>> = box_elems
        .par_iter()
        .map(|&x| {
            let mut out = Vec::new();
            let x2 = x.mul(x)?;
            for &y in &box_elems {
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                if small::gcd(x, y)?.norm()? != 1 {
                    continue;
                }
                let mut w = x2.add(eps.mul(y.mul(y)?)?)?;
                if zero_form {
                    w = SmallGi::ZERO.sub(w)?;
                }
                let Some(z) = w.sqrt()? else { continue };
                let t = Triple::new(x.to_big(), y.to_big(), z.to_big());
                if !form.holds(&t) {
                    return Err(Error::Identity(format!("{t} does not satisfy {form}")));
                }
                if !z.is_zero() {
                    out.push(Triple::new(t.x.clone(), t.y.clone(), -&t.z));
                }
                out.push(t);
            }
            Ok(out)
        })
        .collect();
    let mut all: Vec<Triple> = rows?.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// A brute-force solution falls under the parametrization when
/// `Y = 0 mod (1+i)^3`.
pub fn in_param_family(t: &Triple) -> bool {
    !t.y.is_zero() && GaussianInt::new(2, 2).divides(&t.y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub bound: u32,
    pub total: usize,
    pub eligible: usize,
    pub matched: usize,
    pub unmatched: Vec<Triple>,
}

impl CompletenessReport {
    pub fn complete(&self) -> bool {
        self.unmatched.is_empty() && self.matched == self.eligible
    }
}

/// Inverts the parametrization on every eligible brute-force solution
/// and re-generates it through [`conic_param`].
pub fn parametrization_completeness(form: &ConicForm, bound: u32) -> Result<CompletenessReport> {
    let all = brute_force_conic(form, bound)?;
    let eligible: Vec<&Triple> = all.iter().filter(|t| in_param_family(t)).collect();
    let results: Vec<(Triple, bool)> = eligible
        .par_iter()
        .map(|t| {
            let ok = invert_conic(form, t).is_some_and(|m| {
                conic_param(form, &m.pair).is_ok_and(|g| g == t.act(m.action))
            });
            ((*t).clone(), ok)
        })
        .collect();
    let unmatched: Vec<Triple> = results.iter().filter(|r| !r.1).map(|r| r.0.clone()).collect();
    Ok(CompletenessReport {
        bound,
        total: all.len(),
        eligible: eligible.len(),
        matched: results.len() - unmatched.len(),
        unmatched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gi;

    fn pair(p: &str, q: &str, t: i64) -> ParamPair {
        ParamPair::new(gi(p), gi(q), UnitExp::new(t))
    }

    fn form(eps: &str, v: ConicVariant) -> ConicForm {
        ConicForm::new(gi(eps), v).unwrap()
    }

    #[test]
    fn pythagorean_example() {
        let t = pythagorean_param(&pair("1", "1+i", 1)).unwrap();
        assert_eq!(t, Triple::new(gi("-1-2i"), gi("-2+2i"), gi("-1+2i")));
        assert!(ConicForm::pythagorean().holds(&t));
        assert!(pythagorean_param(&pair("1", "0", 0)).is_err());
        assert!(pythagorean_param(&pair("1", "3", 0)).is_err());
        assert!(pythagorean_param(&pair("2", "4", 0)).is_err());
    }

    #[test]
    fn conic_examples() {
        let f = form("i", ConicVariant::Equation);
        assert!(f.holds(&conic_param(&f, &pair("1+i", "1", 1)).unwrap()));
        let f = form("1+i", ConicVariant::Equation);
        assert!(f.holds(&conic_param(&f, &pair("1", "1+i", 1)).unwrap()));
        assert!(conic_param(&f, &pair("1+i", "1", 1)).is_err());
        assert!(conic_param(&f, &pair("1", "0", 1)).is_err());
        assert_eq!(
            ConicForm::new(gi("2"), ConicVariant::Equation),
            Err(Error::UnsupportedEps(gi("2")))
        );
        let f = form("1", ConicVariant::ZeroForm);
        assert!(f.holds(&conic_param(&f, &pair("2+i", "1+i", 3)).unwrap()));
    }

    #[test]
    fn inversion_recovers_generated_triples() {
        for eps in eps_catalog() {
            for variant in [ConicVariant::Equation, ConicVariant::ZeroForm] {
                let f = ConicForm::new(eps.clone(), variant).unwrap();
                for (p, q) in [("1", "1+i"), ("2+i", "2"), ("3", "-1+i"), ("1+2i", "4i")] {
                    for t in 0..4 {
                        let pp = pair(p, q, t);
                        let g = conic_param(&f, &pp).unwrap();
                        let m = invert_conic(&f, &g).unwrap();
                        assert_eq!(conic_param(&f, &m.pair).unwrap(), g.act(m.action));
                    }
                }
            }
        }
    }

    #[test]
    fn halfsum_examples() {
        let abg = szabo_halfsum_param(&pair("1", "1", 0), -1).unwrap();
        assert_eq!(abg, Triple::new(gi("1"), gi("1"), gi("-1+i")));
        let alt = szabo_halfsum_param(&pair("1", "-1", 0), -1).unwrap();
        assert_eq!((alt.x, alt.y), (gi("1"), gi("1")));
        assert_eq!(alt.z, gi("1-i"));
        for t in 0..4 {
            for sign in [1, -1] {
                szabo_halfsum_param(&pair("1+2i", "3", t), sign).unwrap();
            }
        }
        assert!(szabo_halfsum_param(&pair("1+i", "1", 0), 1).is_err());
        assert!(szabo_halfsum_param(&pair("1", "1", 0), 0).is_err());
    }

    #[test]
    fn halfsum_split_examples() {
        let s = halfsum_split(&gi("1"), &gi("3")).unwrap();
        assert_eq!((s.u, s.l, s.r, s.w), (gi("5"), 0, 2, gi("1")));
        assert!(s.ambiguous.is_empty());
        let s = halfsum_split(&gi("1"), &gi("1+2i")).unwrap();
        assert_eq!(s.r, 1);
        assert!(!s.ambiguous.is_empty());
        assert!(!halfsum_split(&gi("1"), &gi("1")).unwrap().ambiguous.is_empty());
        assert!(halfsum_split(&gi("2"), &gi("1")).is_err());
    }

    #[test]
    fn obstructions() {
        let py = ConicForm::pythagorean();
        let zero = form("1", ConicVariant::ZeroForm);
        let ram = form("1+i", ConicVariant::Equation);
        for (f, case) in [
            (&py, "3.1/t=0"),
            (&py, "3.1/t=1"),
            (&py, "3.1/t=2"),
            (&zero, "3.3/parity"),
            (&ram, "3.4/parity"),
        ] {
            let r = residue_obstruction(f, case).unwrap();
            assert!(r.impossible, "{case}: {:?} vs {:?}", r.forced_values(), r.allowed_values());
        }
        let r = residue_obstruction(&py, "3.1/t=1").unwrap();
        assert_eq!(r.forced_values(), BTreeSet::from([0]));
        assert_eq!(r.allowed_values(), BTreeSet::from([2]));
        let r = residue_obstruction(&py, "trivial").unwrap();
        assert_eq!(r.modulus, 1);
        assert!(r.forced.is_empty() && !r.impossible);
        assert_eq!(
            residue_obstruction(&py, "3.7/t=9"),
            Err(Error::UnknownCase("3.7/t=9".into()))
        );
        assert!(matches!(residue_obstruction(&ram, "3.1/t=0"), Err(Error::Precondition(_))));
    }

    #[test]
    fn brute_force_small_boxes() {
        let py = ConicForm::pythagorean();
        assert!(brute_force_conic(&py, 0).unwrap().is_empty());
        let sols = brute_force_conic(&py, 5).unwrap();
        assert!(sols.iter().all(|t| py.holds(t)));
        assert!(sols.contains(&Triple::new(gi("3"), gi("4"), gi("5"))));
        assert!(sols.contains(&Triple::new(gi("-1-2i"), gi("-2+2i"), gi("-1+2i"))));
        assert!(sols.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            brute_force_conic(&py, 51),
            Err(Error::Budget { bound: 51, budget: 50 })
        );
    }

    #[test]
    fn completeness_small_bound() {
        for (eps, v) in [
            ("1", ConicVariant::Equation),
            ("i", ConicVariant::Equation),
            ("1+i", ConicVariant::Equation),
            ("-1-i", ConicVariant::Equation),
            ("1", ConicVariant::ZeroForm),
        ] {
            let r = parametrization_completeness(&form(eps, v), 6).unwrap();
            assert!(r.eligible > 0, "{eps}");
            assert!(r.complete(), "{eps}: {:?}", r.unmatched);
        }
    }
}
