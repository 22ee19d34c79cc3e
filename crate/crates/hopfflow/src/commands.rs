//! The four pipeline commands. Each writes its artifacts into `out` and
//! returns their paths in a fixed order.

use std::fs;
use std::path::{Path, PathBuf};

use hopfflow_core::flow::{perpendicular, streamlines, winding_index, FlowField, StreamOptions, WindingResult};
use hopfflow_core::geometry::{ChartClassification, GridSpec, PointKind};
use hopfflow_core::parafunc::ParaFunction;
use hopfflow_core::umbilic::{analyze_point, eigenfields, measure_indices, Admissible, Prediction};
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::CliError;
use crate::pipeline::{classify, surface_rows};
use crate::spec::{Resolved, Surface};
use crate::svg::{render, Layer, Scene};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

#[derive(Serialize)]
struct GridJson {
    u_min: f64,
    u_max: f64,
    v_min: f64,
    v_max: f64,
    nu: usize,
    nv: usize,
}

impl From<&GridSpec> for GridJson {
    fn from(g: &GridSpec) -> Self {
        GridJson { u_min: g.u_min, u_max: g.u_max, v_min: g.v_min, v_max: g.v_max, nu: g.nu, nv: g.nv }
    }
}

#[derive(Serialize)]
struct SurfaceMetadata<'a> {
    name: &'a str,
    route: &'a str,
    surface: &'a str,
    grid: GridJson,
    nodes: usize,
    valid_nodes: usize,
    columns: [&'a str; 9],
}

const SURFACE_COLUMNS: [&str; 9] = ["u", "v", "f0", "f1", "f2", "sigma", "L", "M", "N"];

/// `surface.csv` and `metadata.json`.
pub fn cmd_generate(r: &Resolved, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out)?;
    let rows = surface_rows(r)?;
    let csv_path = out.join("surface.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(SURFACE_COLUMNS)?;
    for row in &rows {
        let f = row.f.map(|f| f.map(num)).unwrap_or_default();
        let forms = row.forms.map(|f| f.map(num)).unwrap_or_default();
        let mut rec = vec![num(row.u), num(row.v)];
        rec.extend(f);
        rec.extend(forms);
        rec.resize(9, String::new());
        w.write_record(&rec)?;
    }
    w.flush()?;
    let meta = SurfaceMetadata {
        name: &r.name,
        route: r.route.as_str(),
        surface: r.surface.tag(),
        grid: (&r.grid).into(),
        nodes: rows.len(),
        valid_nodes: rows.iter().filter(|r| r.forms.is_some()).count(),
        columns: SURFACE_COLUMNS,
    };
    let meta_path = out.join("metadata.json");
    write_json(&meta_path, &meta)?;
    Ok(vec![csv_path, meta_path])
}

#[derive(Serialize, Debug, PartialEq, Eq)]
pub struct Counts {
    pub positive: usize,
    pub negative: usize,
    pub umbilic: usize,
    pub quasi_umbilic: usize,
    pub masked: usize,
}

#[derive(Serialize)]
struct ClassSummary<'a> {
    name: &'a str,
    surface: &'a str,
    counts: Counts,
    /// Zero decisions made by a float threshold rather than an exact test.
    marginal: usize,
}

pub fn counts(c: &ChartClassification) -> Counts {
    Counts {
        positive: c.positive.len(),
        negative: c.negative.len(),
        umbilic: c.umbilic.len(),
        quasi_umbilic: c.quasi_umbilic.len(),
        masked: c.classes.iter().filter(|c| c.is_none()).count(),
    }
}

/// `classification.csv` and `summary.json`.
pub fn cmd_classify(r: &Resolved, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out)?;
    let classes = classify(r)?;
    let csv_path = out.join("classification.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(["u", "v", "kind", "D", "dir1_u", "dir1_v", "dir2_u", "dir2_v"])?;
    for (k, c) in classes.classes.iter().enumerate() {
        let (u, v) = r.grid.coords(k);
        let mut rec = vec![num(u), num(v)];
        match c {
            None => {
                rec.push("masked".into());
                rec.resize(8, String::new());
            }
            Some(c) => {
                rec.push(c.kind.as_str().into());
                rec.push(num(c.d));
                for i in 0..2 {
                    let d = c.dirs.get(i);
                    rec.push(opt_num(d.map(|d| d[0])));
                    rec.push(opt_num(d.map(|d| d[1])));
                }
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    let summary = ClassSummary {
        name: &r.name,
        surface: r.surface.tag(),
        counts: counts(&classes),
        marginal: classes.marginal_count(),
    };
    let json_path = out.join("summary.json");
    write_json(&json_path, &summary)?;
    Ok(vec![csv_path, json_path])
}

/// An index value written as an integer when it is one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexValue(pub f64);

impl Serialize for IndexValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.fract() == 0.0 && self.0.abs() < 1e15 {
            s.serialize_i64(self.0 as i64)
        } else {
            s.serialize_f64(self.0)
        }
    }
}

#[derive(Serialize)]
pub struct OrdersJson {
    pub first: String,
    pub second: String,
}

#[derive(Serialize)]
pub struct MeasuredJson {
    pub radius: f64,
    pub samples: usize,
    pub indices: Vec<IndexValue>,
    pub perpendicular: Vec<IndexValue>,
    pub half_radius_indices: Vec<IndexValue>,
    pub radius_stable: bool,
}

#[derive(Serialize)]
pub struct IndexJson {
    pub name: String,
    pub surface: &'static str,
    pub jet_cap: usize,
    pub orders: Option<OrdersJson>,
    pub degenerate: Option<bool>,
    pub order: Option<usize>,
    pub psi_product_sign: Option<i8>,
    pub parity_class: Option<&'static str>,
    pub prediction: String,
    pub predicted_indices: Option<Vec<IndexValue>>,
    pub measured: Option<MeasuredJson>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub admissible: &'static str,
    pub notes: Vec<String>,
}

/// Distinct values in increasing order.
fn distinct(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn values(ws: &[WindingResult]) -> Vec<IndexValue> {
    ws.iter().map(|w| IndexValue(w.index)).collect()
}

fn analytic_hopf(r: &Resolved) -> Result<ParaFunction, CliError> {
    match &r.surface {
        Surface::TimeLike(p) => Ok(p.hopf()?),
        _ => Err(CliError::Spec {
            pointer: "/route".into(),
            message: "index analysis needs Weierstrass data; a user-supplied chart has none".into(),
        }),
    }
}

fn timelike_index(r: &Resolved) -> Result<IndexJson, CliError> {
    let a = &r.analysis;
    let qhat = analytic_hopf(r)?;
    let report = analyze_point(&qhat, a.jet_cap)?;
    let mut notes = report.notes.clone();
    let (predicted, measured, matches) = match &report.prediction {
        Prediction::Indices(p) => {
            let pred: Vec<f64> = p.iter().map(|&i| i as f64).collect();
            let full = measure_indices(&qhat, a.jet_cap, a.winding_radius, a.samples)?;
            let half = measure_indices(&qhat, a.jet_cap, 0.5 * a.winding_radius, a.samples)?;
            let m = [full.x1, full.x2];
            let h = [half.x1, half.x2];
            let stable = m.iter().zip(&h).all(|(a, b)| a.index == b.index);
            let got: Vec<f64> = m.iter().map(|w| w.index).collect();
            let ok = distinct(&got) == distinct(&pred) && stable;
            let mj = MeasuredJson {
                radius: a.winding_radius,
                samples: a.samples,
                indices: values(&m),
                perpendicular: values(&[full.x1_perpendicular]),
                half_radius_indices: values(&h),
                radius_stable: stable,
            };
            (Some(pred.into_iter().map(IndexValue).collect()), Some(mj), Some(ok))
        }
        p => {
            notes.push(format!("measurement skipped: {}; no smooth principal flow to measure", p.describe()));
            (None, None, None)
        }
    };
    Ok(IndexJson {
        name: r.name.clone(),
        surface: "timelike",
        jet_cap: a.jet_cap,
        orders: Some(OrdersJson {
            first: report.orders.branch1.order.to_string(),
            second: report.orders.branchm1.order.to_string(),
        }),
        degenerate: Some(report.degenerate),
        order: report.order,
        psi_product_sign: report.psi_product_sign,
        parity_class: Some(report.parity_class.as_str()),
        prediction: report.prediction.describe(),
        predicted_indices: predicted,
        measured,
        matches,
        admissible: match report.admissible {
            Admissible::Yes => "yes",
            Admissible::No => "no",
            Admissible::Unknown => "unknown",
        },
        notes,
    })
}

fn spacelike_index(r: &Resolved) -> Result<IndexJson, CliError> {
    let Surface::SpaceLike(p) = &r.surface else { unreachable!() };
    let a = &r.analysis;
    let q = p.data.hopf_differential();
    let m = q.iter().position(|c| !c.re.is_zero() || !c.im.is_zero());
    let mut out = IndexJson {
        name: r.name.clone(),
        surface: "spacelike",
        jet_cap: a.jet_cap,
        orders: None,
        degenerate: None,
        order: m,
        psi_product_sign: None,
        parity_class: None,
        prediction: String::new(),
        predicted_indices: None,
        measured: None,
        matches: None,
        admissible: "yes",
        notes: Vec::new(),
    };
    let Some(m) = m else {
        out.prediction = "totally umbilic".into();
        out.notes.push("measurement skipped: the Hopf differential vanishes identically".into());
        return Ok(out);
    };
    let pred = -(m as f64) / 2.0;
    out.prediction = if m == 0 { "regular point".into() } else { format!("isolated umbilic of order {m}") };
    out.predicted_indices = Some(vec![IndexValue(pred)]);
    let field = p.principal_line_field();
    let full = winding_index(&field, a.winding_radius, a.samples)?;
    let half = winding_index(&field, 0.5 * a.winding_radius, a.samples)?;
    let perp = winding_index(&perpendicular(&field), a.winding_radius, a.samples)?;
    let stable = full.index == half.index;
    out.matches = Some(full.index == pred && stable);
    out.measured = Some(MeasuredJson {
        radius: a.winding_radius,
        samples: a.samples,
        indices: values(&[full]),
        perpendicular: values(&[perp]),
        half_radius_indices: values(&[half]),
        radius_stable: stable,
    });
    Ok(out)
}

pub fn index_report(r: &Resolved) -> Result<IndexJson, CliError> {
    match r.surface {
        Surface::SpaceLike(_) => spacelike_index(r),
        _ => timelike_index(r),
    }
}

/// `index.json`.
pub fn cmd_index(r: &Resolved, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out)?;
    let report = index_report(r)?;
    let path = out.join("index.json");
    write_json(&path, &report)?;
    Ok(vec![path])
}

fn seeds(g: &GridSpec, n: usize) -> Vec<(f64, f64)> {
    let mut s = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let u = g.u_min + (i as f64 + 0.5) / n as f64 * (g.u_max - g.u_min);
            let v = g.v_min + (j as f64 + 0.5) / n as f64 * (g.v_max - g.v_min);
            s.push((u, v));
        }
    }
    s
}

/// The line field turned by a right angle.
fn rotated(field: &FlowField) -> FlowField {
    let f = field.clone();
    FlowField::line(move |u, v| {
        let [a, b] = f.eval(u, v);
        [-b, a]
    })
}

/// `flow.svg`: streamlines of both principal foliations over the
/// classification, or the classification alone with a banner when no
/// smooth flow exists.
pub fn cmd_flow(r: &Resolved, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out)?;
    let g = &r.grid;
    let classes = classify(r)?;
    let background: Vec<Option<PointKind>> = classes.classes.iter().map(|c| c.as_ref().map(|c| c.kind)).collect();
    let width = (g.u_max - g.u_min).max(g.v_max - g.v_min);
    let opts =
        StreamOptions { step: width / 400.0, max_len: 1.5 * width, bounds: (g.u_min, g.u_max, g.v_min, g.v_max) };
    let seeds = seeds(g, r.analysis.seeds);
    let (fields, banner): (Vec<(&str, &'static str, FlowField)>, Option<String>) = match &r.surface {
        Surface::TimeLike(_) => {
            let qhat = analytic_hopf(r)?;
            match eigenfields(&qhat, r.analysis.jet_cap) {
                Ok((x1, x2)) => (vec![("X1", "#1f4e9c", x1), ("X2", "#b03a2e", x2)], None),
                Err(e) => (Vec::new(), Some(format!("no smooth principal flow: {e}"))),
            }
        }
        Surface::SpaceLike(p) => {
            let f = p.principal_line_field();
            let g2 = rotated(&f);
            (vec![("principal_1", "#1f4e9c", f), ("principal_2", "#b03a2e", g2)], None)
        }
        Surface::Chart(_) => (Vec::new(), Some("user-supplied chart: classification only".into())),
    };
    let layers = fields
        .into_iter()
        .map(|(label, color, f)| Layer { label: label.into(), color, lines: streamlines(&f, &seeds, &opts) })
        .collect();
    let scene = Scene { title: format!("{} ({})", r.name, r.surface.tag()), grid: *g, background, layers, banner };
    let path = out.join("flow.svg");
    fs::write(&path, render(&scene))?;
    Ok(vec![path])
}
