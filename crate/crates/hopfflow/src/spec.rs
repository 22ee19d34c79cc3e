//! JSON surface specifications.
//!
//! Coefficients are exact: a JSON integer or a string holding an integer
//! or `"p/q"`. A paracomplex or complex coefficient is either such a
//! scalar (real) or a pair `[re, im]`.

use std::fmt;
use std::str::FromStr;

use hopfflow_core::geometry::{GridSpec, NodeForms};
use hopfflow_core::parafunc::{ParaFunction, RealBranch};
use hopfflow_core::poly::{Polynomial, Rational};
use hopfflow_core::spacelike::ComplexFunctionData;
use hopfflow_core::spacelike::{generate_kobayashi, SpacelikePatch};
use hopfflow_core::weierstrass::{generate_ko, generate_null, ImmersionPatch, WeierstrassData};
use hopfflow_core::ParaComplex;
use num_complex::Complex;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Smallest accepted node count per axis.
pub const MIN_RESOLUTION: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Coeff(pub Rational);

fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let r = Rational::from_str(t).map_err(|_| format!("`{s}` is not an integer or a \"p/q\" rational"))?;
    Ok(r)
}

struct CoeffVisitor;

impl<'de> Visitor<'de> for CoeffVisitor {
    type Value = Coeff;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Coeff, E> {
        Ok(Coeff(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Coeff, E> {
        Ok(Coeff(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Coeff, E> {
        Err(E::custom(format!("{v} is a float; write coefficients as integers or \"p/q\" strings")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Coeff, E> {
        parse_rational(v).map(Coeff).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(CoeffVisitor)
    }
}

impl Serialize for Coeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// `re + j·im` (or `re + i·im` for the space-like route).
#[derive(Clone, Debug, PartialEq)]
pub struct Pair {
    pub re: Rational,
    pub im: Rational,
}

struct PairVisitor;

impl<'de> Visitor<'de> for PairVisitor {
    type Value = Pair;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a coefficient or a pair [re, im] of coefficients")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Pair, E> {
        Ok(Pair { re: CoeffVisitor.visit_i64::<E>(v)?.0, im: Rational::from_integer(0.into()) })
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Pair, E> {
        Ok(Pair { re: CoeffVisitor.visit_u64::<E>(v)?.0, im: Rational::from_integer(0.into()) })
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Pair, E> {
        CoeffVisitor.visit_f64::<E>(v).map(|c| Pair { re: c.0, im: Rational::from_integer(0.into()) })
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Pair, E> {
        Ok(Pair { re: CoeffVisitor.visit_str::<E>(v)?.0, im: Rational::from_integer(0.into()) })
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Pair, A::Error> {
        let re: Coeff = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: Coeff = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(Pair { re: re.0, im: im.0 })
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(PairVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteKind {
    Ko,
    Null,
    Kobayashi,
    Chart,
}

impl RouteKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RouteKind::Ko => "ko",
            RouteKind::Null => "null",
            RouteKind::Kobayashi => "kobayashi",
            RouteKind::Chart => "chart",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: usize,
    pub nv: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        GridConfig { u_min: g.u_min, u_max: g.u_max, v_min: g.v_min, v_max: g.v_max, nu: g.nu, nv: g.nv }
    }
}

impl GridConfig {
    pub fn to_grid(&self) -> GridSpec {
        GridSpec {
            u_min: self.u_min,
            u_max: self.u_max,
            v_min: self.v_min,
            v_max: self.v_max,
            nu: self.nu,
            nv: self.nv,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub winding_radius: f64,
    pub samples: usize,
    pub jet_cap: usize,
    /// Streamline seeds per axis.
    pub seeds: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            winding_radius: hopfflow_core::flow::DEFAULT_RADIUS,
            samples: hopfflow_core::flow::DEFAULT_SAMPLES,
            jet_cap: hopfflow_core::parafunc::DEFAULT_JET_CAP,
            seeds: 6,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub route: RouteKind,
    pub data: serde_json::Value,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BranchTag {
    Poly,
    ExpFlat,
}

/// `{"kind": "poly", "coeffs": [...]}` or `{"kind": "exp_flat", "a": ...}`
/// for `exp(−a/t²)`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchSpec {
    kind: BranchTag,
    #[serde(default)]
    coeffs: Option<Vec<Coeff>>,
    #[serde(default)]
    a: Option<Coeff>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Convention {
    /// Branches in `x = (u+v)/2`, `y = (u−v)/2`.
    #[default]
    HalfSum,
    /// Branches in `u + v` and `u − v`.
    FullSum,
}

/// Either `{"z_poly": [...]}` or `{"first": .., "second": .., "convention": ..}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParaFunctionSpec {
    #[serde(default)]
    z_poly: Option<Vec<Pair>>,
    #[serde(default)]
    first: Option<BranchSpec>,
    #[serde(default)]
    second: Option<BranchSpec>,
    #[serde(default)]
    convention: Convention,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KoData {
    g: ParaFunctionSpec,
    #[serde(default)]
    omega_hat: Option<ParaFunctionSpec>,
    #[serde(default)]
    allow_singular_base: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NullData {
    g1: BranchSpec,
    g2: BranchSpec,
    #[serde(default)]
    omega1: Option<BranchSpec>,
    #[serde(default)]
    omega2: Option<BranchSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KobayashiData {
    g: Vec<Pair>,
    #[serde(default)]
    omega_hat: Option<Vec<Pair>>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeSpec {
    sigma: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "N")]
    n: f64,
    #[serde(default = "one")]
    metric_sign: i8,
}

fn one() -> i8 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartData {
    /// Row-major over the grid (`u` fastest); `null` masks a node.
    nodes: Vec<Option<NodeSpec>>,
}

/// A validated surface ready for the pipeline.
#[derive(Clone, Debug)]
pub enum Surface {
    TimeLike(Box<ImmersionPatch>),
    SpaceLike(Box<SpacelikePatch>),
    Chart(Vec<Option<NodeForms>>),
}

impl Surface {
    pub fn tag(&self) -> &'static str {
        match self {
            Surface::SpaceLike(_) => "spacelike",
            _ => "timelike",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Resolved {
    pub name: String,
    pub route: RouteKind,
    pub surface: Surface,
    pub grid: GridSpec,
    pub analysis: AnalysisConfig,
}

fn spec_err(pointer: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Spec { pointer: pointer.into(), message: message.into() }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn from_value<T: serde::de::DeserializeOwned>(value: &serde_json::Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let p = pointer_of(e.path());
        spec_err(format!("{prefix}{}", if p == "/?" { "" } else { &p }), e.inner().to_string())
    })
}

/// Parses a JSON document; errors carry the JSON pointer of the offending
/// field.
pub fn parse_spec(text: &str) -> Result<SurfaceSpec, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: SurfaceSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let p = pointer_of(e.path());
        spec_err(if p == "/?" { String::new() } else { p }, e.inner().to_string())
    })?;
    Ok(spec)
}

fn branch(b: &BranchSpec, at: &str) -> Result<RealBranch, CliError> {
    match b.kind {
        BranchTag::Poly => {
            if b.a.is_some() {
                return Err(spec_err(format!("{at}/a"), "`a` belongs to exp_flat branches"));
            }
            let c =
                b.coeffs.as_ref().ok_or_else(|| spec_err(format!("{at}/coeffs"), "missing polynomial coefficients"))?;
            Ok(RealBranch::poly(Polynomial::new(c.iter().map(|c| c.0.clone()).collect())))
        }
        BranchTag::ExpFlat => {
            if b.coeffs.is_some() {
                return Err(spec_err(format!("{at}/coeffs"), "`coeffs` belongs to poly branches"));
            }
            let a = b.a.as_ref().ok_or_else(|| spec_err(format!("{at}/a"), "missing decay constant"))?;
            if a.0 <= Rational::from_integer(0.into()) {
                return Err(spec_err(format!("{at}/a"), "decay constant must be positive"));
            }
            Ok(RealBranch::exp_flat(a.0.clone()))
        }
    }
}

fn para_function(p: &ParaFunctionSpec, at: &str) -> Result<ParaFunction, CliError> {
    match (&p.z_poly, &p.first, &p.second) {
        (Some(c), None, None) => {
            if c.is_empty() {
                return Err(spec_err(format!("{at}/z_poly"), "empty coefficient list"));
            }
            let coeffs: Vec<ParaComplex<Rational>> =
                c.iter().map(|c| ParaComplex::new(c.re.clone(), c.im.clone())).collect();
            Ok(ParaFunction::from_z_poly(&coeffs))
        }
        (None, Some(a), Some(b)) => {
            let (a, b) = (branch(a, &format!("{at}/first"))?, branch(b, &format!("{at}/second"))?);
            Ok(match p.convention {
                Convention::HalfSum => ParaFunction::new(a, b),
                Convention::FullSum => ParaFunction::wedge(a, b),
            })
        }
        (Some(_), _, _) => Err(spec_err(at, "give either `z_poly` or `first`/`second`, not both")),
        (None, None, _) => Err(spec_err(format!("{at}/first"), "missing branch")),
        (None, Some(_), None) => Err(spec_err(format!("{at}/second"), "missing branch")),
    }
}

fn unit_branch() -> RealBranch {
    RealBranch::poly(Polynomial::from_i64(&[1]))
}

fn construction(e: hopfflow_core::Error) -> CliError {
    spec_err("/data", e.to_string())
}

impl SurfaceSpec {
    /// Validates the grid and builds the surface.
    pub fn resolve(&self, fallback_name: &str) -> Result<Resolved, CliError> {
        let g = &self.grid;
        for (k, n) in [("nu", g.nu), ("nv", g.nv)] {
            if n < MIN_RESOLUTION {
                return Err(spec_err(format!("/grid/{k}"), format!("resolution {n} is below {MIN_RESOLUTION}")));
            }
        }
        for (k, lo, hi) in [("u_max", g.u_min, g.u_max), ("v_max", g.v_min, g.v_max)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(spec_err(format!("/grid/{k}"), "empty or non-finite range"));
            }
        }
        let a = &self.analysis;
        if !(a.winding_radius > 0.0 && a.winding_radius.is_finite()) {
            return Err(spec_err("/analysis/winding_radius", "radius must be positive"));
        }
        if a.samples < hopfflow_core::flow::MIN_SAMPLES {
            return Err(spec_err(
                "/analysis/samples",
                format!("at least {} samples are required", hopfflow_core::flow::MIN_SAMPLES),
            ));
        }
        if a.jet_cap == 0 {
            return Err(spec_err("/analysis/jet_cap", "jet cap must be positive"));
        }
        if a.seeds == 0 {
            return Err(spec_err("/analysis/seeds", "at least one seed per axis is required"));
        }
        let grid = g.to_grid();
        let surface = match self.route {
            RouteKind::Ko => {
                let d: KoData = from_value(&self.data, "/data")?;
                let gf = para_function(&d.g, "/data/g")?;
                let w = match &d.omega_hat {
                    Some(w) => para_function(w, "/data/omega_hat")?,
                    None => ParaFunction::new(unit_branch(), unit_branch()),
                };
                let data = if d.allow_singular_base {
                    WeierstrassData::with_singular_base(gf, w)
                } else {
                    WeierstrassData::new(gf, w)
                }
                .map_err(construction)?;
                Surface::TimeLike(Box::new(generate_ko(&data).map_err(construction)?))
            }
            RouteKind::Null => {
                let d: NullData = from_value(&self.data, "/data")?;
                let w1 = d.omega1.as_ref().map(|b| branch(b, "/data/omega1")).transpose()?.unwrap_or_else(unit_branch);
                let w2 = d.omega2.as_ref().map(|b| branch(b, "/data/omega2")).transpose()?.unwrap_or_else(unit_branch);
                let patch = generate_null(branch(&d.g1, "/data/g1")?, branch(&d.g2, "/data/g2")?, w1, w2)
                    .map_err(construction)?;
                Surface::TimeLike(Box::new(patch))
            }
            RouteKind::Kobayashi => {
                let d: KobayashiData = from_value(&self.data, "/data")?;
                let c = |v: &[Pair]| v.iter().map(|p| Complex::new(p.re.clone(), p.im.clone())).collect::<Vec<_>>();
                if d.g.is_empty() {
                    return Err(spec_err("/data/g", "empty coefficient list"));
                }
                let omega = match &d.omega_hat {
                    Some(w) if w.is_empty() => return Err(spec_err("/data/omega_hat", "empty coefficient list")),
                    Some(w) => c(w),
                    None => vec![Complex::new(Rational::from_integer(1.into()), Rational::from_integer(0.into()))],
                };
                let data = ComplexFunctionData { g: c(&d.g), omega_hat: omega };
                Surface::SpaceLike(Box::new(generate_kobayashi(&data).map_err(construction)?))
            }
            RouteKind::Chart => {
                let d: ChartData = from_value(&self.data, "/data")?;
                if d.nodes.len() != grid.len() {
                    return Err(spec_err(
                        "/data/nodes",
                        format!("{} nodes given, the grid has {}", d.nodes.len(), grid.len()),
                    ));
                }
                let mut nodes = Vec::with_capacity(d.nodes.len());
                for (k, n) in d.nodes.iter().enumerate() {
                    nodes.push(match n {
                        None => None,
                        Some(n) => {
                            if n.metric_sign != 1 && n.metric_sign != -1 {
                                return Err(spec_err(format!("/data/nodes/{k}/metric_sign"), "must be 1 or -1"));
                            }
                            if ![n.sigma, n.l, n.m, n.n].iter().all(|x| x.is_finite()) {
                                return Err(spec_err(format!("/data/nodes/{k}"), "non-finite form value"));
                            }
                            Some(NodeForms { sigma: n.sigma, l: n.l, m: n.m, n: n.n, metric_sign: n.metric_sign })
                        }
                    });
                }
                Surface::Chart(nodes)
            }
        };
        Ok(Resolved {
            name: self.name.clone().unwrap_or_else(|| fallback_name.to_string()),
            route: self.route,
            surface,
            grid,
            analysis: self.analysis,
        })
    }
}
