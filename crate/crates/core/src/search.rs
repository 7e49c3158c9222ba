//! Bounded exhaustive search over Z[i] for the catalog equations, orbit
//! grouping under unit symmetries, and report rendering.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;

use crate::conic::Triple;
use crate::error::{Error, Result};
use crate::gaussian::{gcd, GaussianInt, UnitExp};
use crate::resolvent::{catalog_equation, QuarticEquation, CATALOG_IDS};
use crate::small::SmallGi;

/// Largest box bound accepted by the searches.
pub const SEARCH_BUDGET: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationKind {
    /// `aX^4 + bX^2Y^2 + cY^4 = dZ^2`
    Quartic(QuarticEquation),
    /// `X^4 + eps Y^2 = Z^4`
    Biquadratic(GaussianInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSpec {
    pub id: Option<String>,
    pub kind: EquationKind,
    /// Only `y` divisible by `1+i` is searched.
    pub y_even: bool,
}

/// Every id accepted by [`parse_equation`].
pub fn equation_ids() -> Vec<&'static str> {
    let mut ids = CATALOG_IDS.to_vec();
    ids.extend(["3.2", "3.4"]);
    ids.sort();
    ids
}

/// A catalog id or four comma-separated literals `a,b,c,d`.
pub fn parse_equation(s: &str) -> Result<EquationSpec> {
    let s = s.trim();
    let bi = |eps: GaussianInt| EquationSpec {
        id: Some(s.to_string()),
        kind: EquationKind::Biquadratic(eps),
        y_even: false,
    };
    match s {
        "3.2" => return Ok(bi(GaussianInt::i())),
        "3.4" => return Ok(bi(GaussianInt::one_plus_i())),
        _ => {}
    }
    if let Ok(eq) = catalog_equation(s) {
        return Ok(EquationSpec {
            id: Some(s.to_string()),
            kind: EquationKind::Quartic(eq),
            y_even: s.starts_with("3.9"),
        });
    }
    if s.contains(',') {
        let eq: QuarticEquation = s.parse()?;
        return Ok(EquationSpec {
            id: eq.catalog_id().map(str::to_string),
            kind: EquationKind::Quartic(eq),
            y_even: false,
        });
    }
    Err(Error::UnknownEquation(s.to_string()))
}

impl EquationSpec {
    pub fn holds(&self, t: &Triple) -> bool {
        match &self.kind {
            EquationKind::Quartic(eq) => eq.holds(&t.x, &t.y, &t.z),
            EquationKind::Biquadratic(eps) => t.x.pow(4) + eps * t.y.square() == t.z.pow(4),
        }
    }

    /// Unit actions `(i^a x, i^b y, i^c z)` preserving the equation.
    pub fn symmetries(&self) -> Vec<[UnitExp; 3]> {
        let mut out = Vec::new();
        for a in UnitExp::all() {
            for b in UnitExp::all() {
                for c in UnitExp::all() {
                    let keep = match &self.kind {
                        EquationKind::Quartic(eq) => {
                            c.exp() % 2 == 0 && (eq.b.is_zero() || (a.exp() + b.exp()) % 2 == 0)
                        }
                        EquationKind::Biquadratic(_) => b.exp() % 2 == 0,
                    };
                    if keep {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// `x <-> y` is a symmetry.
    pub fn swap_symmetric(&self) -> bool {
        match &self.kind {
            EquationKind::Quartic(eq) => eq.a == eq.c && !self.y_even,
            EquationKind::Biquadratic(_) => false,
        }
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EquationKind::Quartic(eq) => write!(f, "{eq}")?,
            EquationKind::Biquadratic(eps) => write!(f, "X^4 + ({eps})Y^2 = Z^4")?,
        }
        if self.y_even {
            write!(f, " with Y = 0 mod (1+i)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub equation: EquationSpec,
    /// Half-width of the box on `max(|re|, |im|)` of the searched
    /// coordinates: `x, y` for quartics, `x, z` for `X^4 + eps Y^2 = Z^4`.
    pub bound: u32,
    pub require_primitive: bool,
    pub workers: usize,
    pub format: OutputFormat,
}

impl SearchConfig {
    pub fn new(equation: EquationSpec, bound: u32) -> Self {
        SearchConfig {
            equation,
            bound,
            require_primitive: true,
            workers: 1,
            format: OutputFormat::Text,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub x: GaussianInt,
    pub y: GaussianInt,
    pub z: GaussianInt,
    pub primitive: bool,
    pub orbit_id: String,
}

impl SolutionRecord {
    pub fn triple(&self) -> Triple {
        Triple::new(self.x.clone(), self.y.clone(), self.z.clone())
    }
}

fn check_budget(bound: u32) -> Result<()> {
    if bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    if bound > SEARCH_BUDGET {
        return Err(Error::Budget {
            bound,
            budget: SEARCH_BUDGET,
        });
    }
    Ok(())
}

fn box_elements(bound: u32) -> Vec<SmallGi> {
    let b = i128::from(bound);
    (-b..=b)
        .flat_map(|re| (-b..=b).map(move |im| SmallGi::new(re, im)))
        .filter(|z| !z.is_zero())
        .collect()
}

fn is_primitive(t: &Triple) -> bool {
    gcd(&t.x, &t.y)
        .and_then(|g| gcd(&g, &t.z))
        .is_ok_and(|g| g.is_unit())
}

/// Runs `f` over the outer coordinates on a pool of `workers` threads and
/// merges the rows in a fixed order.
fn run_partitioned<F>(workers: usize, outer: &[SmallGi], f: F) -> Result<Vec<Triple>>
where
    F: Fn(SmallGi) -> Result<Vec<Triple>> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let rows: Result<Vec<Vec<Triple>>> = pool.install(|| outer.par_iter().map(|&x| f(x)).collect());
    let mut all: Vec<Triple> = rows?.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    Ok(all)
}

fn finish(cfg: &SearchConfig, triples: Vec<Triple>) -> Result<Vec<SolutionRecord>> {
    let mut out = Vec::new();
    for t in triples {
        if !cfg.equation.holds(&t) {
            return Err(Error::Identity(format!("{t} does not satisfy {}", cfg.equation)));
        }
        let primitive = is_primitive(&t);
        if cfg.require_primitive && !primitive {
            continue;
        }
        out.push(SolutionRecord {
            x: t.x,
            y: t.y,
            z: t.z,
            primitive,
            orbit_id: String::new(),
        });
    }
    Ok(orbit_normalize(&cfg.equation, out))
}

/// All records with `xyz != 0` in the box, both signs of `z`, sorted by
/// `(x, y, z)` under the `(norm, re, im)` order.
pub fn search(cfg: &SearchConfig) -> Result<Vec<SolutionRecord>> {
    match &cfg.equation.kind {
        EquationKind::Quartic(_) => search_quartic(cfg),
        EquationKind::Biquadratic(_) => search_biquadratic_z4(cfg),
    }
}

pub fn search_quartic(cfg: &SearchConfig) -> Result<Vec<SolutionRecord>> {
    check_budget(cfg.bound)?;
    let EquationKind::Quartic(eq) = &cfg.equation.kind else {
        return Err(Error::Precondition(format!("{} is not a quartic", cfg.equation)));
    };
    let [a, b, c, d] = [&eq.a, &eq.b, &eq.c, &eq.d].map(SmallGi::from_big);
    let (a, b, c, d) = (a?, b?, c?, d?);
    let elems = box_elements(cfg.bound);
    let ys: Vec<SmallGi> = elems
        .iter()
        .copied()
        .filter(|y| !cfg.equation.y_even || !y.is_odd())
        .collect();
    let triples = run_partitioned(cfg.workers, &elems, |x| {
        let mut out = Vec::new();
        let x2 = x.mul(x)?;
        let ax4 = a.mul(x2.mul(x2)?)?;
        let bx2 = b.mul(x2)?;
        for &y in &ys {
            let y2 = y.mul(y)?;
            let w = ax4.add(bx2.mul(y2)?)?.add(c.mul(y2.mul(y2)?)?)?;
            let Some(q) = w.exact_div(d)? else { continue };
            let Some(z) = q.sqrt()? else { continue };
            if z.is_zero() {
                continue;
            }
            let (xb, yb, zb) = (x.to_big(), y.to_big(), z.to_big());
            out.push(Triple::new(xb.clone(), yb.clone(), -&zb));
            out.push(Triple::new(xb, yb, zb));
        }
        Ok(out)
    })?;
    finish(cfg, triples)
}

/// `X^4 + eps Y^2 = Z^4` over `(x, z)` in the box, `y` from the square
/// root of `(z^4 - x^4)/eps`.
pub fn search_biquadratic_z4(cfg: &SearchConfig) -> Result<Vec<SolutionRecord>> {
    check_budget(cfg.bound)?;
    let EquationKind::Biquadratic(eps) = &cfg.equation.kind else {
        return Err(Error::Precondition(format!("{} is not biquadratic", cfg.equation)));
    };
    let e = SmallGi::from_big(eps)?;
    let elems = box_elements(cfg.bound);
    let fourth: Vec<SmallGi> = elems
        .iter()
        .map(|z| z.mul(*z).and_then(|z2| z2.mul(z2)))
        .collect::<Result<_>>()?;
    let triples = run_partitioned(cfg.workers, &elems, |x| {
        let mut out = Vec::new();
        let x2 = x.mul(x)?;
        let x4 = x2.mul(x2)?;
        for (z, z4) in elems.iter().zip(&fourth) {
            let Some(q) = z4.sub(x4)?.exact_div(e)? else { continue };
            let Some(y) = q.sqrt()? else { continue };
            if y.is_zero() || (cfg.equation.y_even && y.is_odd()) {
                continue;
            }
            let (xb, yb, zb) = (x.to_big(), y.to_big(), z.to_big());
            out.push(Triple::new(xb.clone(), -&yb, zb.clone()));
            out.push(Triple::new(xb, yb, zb));
        }
        Ok(out)
    })?;
    finish(cfg, triples)
}

/// The orbit of `t` under the equation's symmetry set.
pub fn orbit(spec: &EquationSpec, t: &Triple) -> Vec<Triple> {
    let mut out: Vec<Triple> = Vec::new();
    let swapped = Triple::new(t.y.clone(), t.x.clone(), t.z.clone());
    let bases = if spec.swap_symmetric() {
        vec![t.clone(), swapped]
    } else {
        vec![t.clone()]
    };
    for base in &bases {
        for s in spec.symmetries() {
            out.push(base.act(s));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Fills `orbit_id` with the smallest element of each record's orbit.
pub fn orbit_normalize(spec: &EquationSpec, records: Vec<SolutionRecord>) -> Vec<SolutionRecord> {
    records
        .into_iter()
        .map(|mut r| {
            let rep = orbit(spec, &r.triple()).into_iter().next().expect("orbit contains r");
            r.orbit_id = rep.to_string();
            r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSummary {
    pub representative: Triple,
    pub size: usize,
}

/// Orbits present in `records`, ordered by representative. `size` counts
/// the records in each orbit.
pub fn orbits(spec: &EquationSpec, records: &[SolutionRecord]) -> Vec<OrbitSummary> {
    let mut map: BTreeMap<Triple, usize> = BTreeMap::new();
    for r in records {
        let rep = orbit(spec, &r.triple()).into_iter().next().expect("orbit contains r");
        *map.entry(rep).or_default() += 1;
    }
    map.into_iter()
        .map(|(representative, size)| OrbitSummary { representative, size })
        .collect()
}

#[derive(Serialize)]
struct JsonTriple {
    x: String,
    y: String,
    z: String,
}

#[derive(Serialize)]
struct JsonEquation {
    id: Option<String>,
    kind: &'static str,
    coefficients: Vec<String>,
    y_even: bool,
    text: String,
}

#[derive(Serialize)]
struct JsonOrbit {
    representative: JsonTriple,
    size: usize,
}

#[derive(Serialize)]
struct JsonReport {
    equation: JsonEquation,
    bound: u32,
    orbits: Vec<JsonOrbit>,
    raw_count: usize,
}

fn json_equation(spec: &EquationSpec) -> JsonEquation {
    let (kind, coefficients) = match &spec.kind {
        EquationKind::Quartic(eq) => (
            "quartic",
            [&eq.a, &eq.b, &eq.c, &eq.d].iter().map(|z| z.to_string()).collect(),
        ),
        EquationKind::Biquadratic(eps) => ("biquadratic", vec![eps.to_string()]),
    };
    JsonEquation {
        id: spec.id.clone(),
        kind,
        coefficients,
        y_even: spec.y_even,
        text: spec.to_string(),
    }
}

/// Renders a search result. The output depends only on the equation,
/// the bound and the records.
pub fn render(cfg: &SearchConfig, records: &[SolutionRecord]) -> Result<String> {
    let spec = &cfg.equation;
    match cfg.format {
        OutputFormat::Json => {
            let report = JsonReport {
                equation: json_equation(spec),
                bound: cfg.bound,
                orbits: orbits(spec, records)
                    .into_iter()
                    .map(|o| JsonOrbit {
                        representative: JsonTriple {
                            x: o.representative.x.to_string(),
                            y: o.representative.y.to_string(),
                            z: o.representative.z.to_string(),
                        },
                        size: o.size,
                    })
                    .collect(),
                raw_count: records.len(),
            };
            let mut s = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Config(e.to_string());
            w.write_record(["x", "y", "z", "primitive", "orbit_id"]).map_err(io)?;
            for r in records {
                w.write_record([
                    r.x.to_string(),
                    r.y.to_string(),
                    r.z.to_string(),
                    r.primitive.to_string(),
                    r.orbit_id.clone(),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let os = orbits(spec, records);
            let _ = writeln!(s, "equation: {spec}");
            let _ = writeln!(s, "bound: {}", cfg.bound);
            let _ = writeln!(s, "solutions: {}", records.len());
            let _ = writeln!(s, "orbits: {}", os.len());
            for o in &os {
                let _ = writeln!(s, "  {} size {}", o.representative, o.size);
            }
            for r in records {
                let _ = writeln!(s, "{}, {}, {}", r.x, r.y, r.z);
            }
            Ok(s)
        }
    }
}
