//! Grid evaluation. Work is spread over a rayon pool whose size comes from
//! `HOPFFLOW_THREADS`; results are collected in grid order, so output does
//! not depend on the thread count.

use hopfflow_core::geometry::{classify_node, ChartClassification, NodeForms, PointClass, SurfaceChart};
use hopfflow_core::spacelike::classify_spacelike;
use hopfflow_core::weierstrass::chart_from_nodes;
use rayon::prelude::*;

use crate::error::CliError;
use crate::spec::{Resolved, Surface};

pub const THREADS_ENV: &str = "HOPFFLOW_THREADS";

fn pool() -> rayon::ThreadPool {
    let n = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Send + Sync) -> Vec<T> {
    pool().install(|| (0..n).into_par_iter().map(&f).collect())
}

/// One node of the surface table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceRow {
    pub u: f64,
    pub v: f64,
    /// Absent for user-supplied charts.
    pub f: Option<[f64; 3]>,
    /// `(σ, L, M, N)`; absent where the metric degenerates.
    pub forms: Option<[f64; 4]>,
}

pub fn surface_rows(r: &Resolved) -> Result<Vec<SurfaceRow>, CliError> {
    let grid = &r.grid;
    let rows: Vec<Result<SurfaceRow, hopfflow_core::Error>> = match &r.surface {
        Surface::TimeLike(p) => par_map(grid.len(), |k| {
            let (u, v) = grid.coords(k);
            let forms = p.forms_at(u, v)?.map(|f| [f.sigma, f.l, f.m, f.n]);
            Ok(SurfaceRow { u, v, f: Some(p.eval(u, v)?), forms })
        }),
        Surface::SpaceLike(p) => par_map(grid.len(), |k| {
            let (u, v) = grid.coords(k);
            let forms = p.forms_at(u, v).map(|f| [f.sigma, f.l, f.m, f.n]);
            Ok(SurfaceRow { u, v, f: Some(p.eval(u, v)), forms })
        }),
        Surface::Chart(nodes) => (0..grid.len())
            .map(|k| {
                let (u, v) = grid.coords(k);
                Ok(SurfaceRow { u, v, f: None, forms: nodes[k].map(|n| [n.sigma, n.l, n.m, n.n]) })
            })
            .collect(),
    };
    rows.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

/// The time-like chart; `None` for space-like surfaces.
pub fn timelike_chart(r: &Resolved) -> Result<Option<SurfaceChart>, CliError> {
    let grid = &r.grid;
    match &r.surface {
        Surface::TimeLike(p) => {
            let nodes: Vec<Result<Option<NodeForms>, hopfflow_core::Error>> = par_map(grid.len(), |k| {
                let (u, v) = grid.coords(k);
                Ok(p.forms_at(u, v)?.map(NodeForms::from))
            });
            let nodes = nodes.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok(Some(chart_from_nodes(p, grid, nodes)))
        }
        Surface::Chart(nodes) => Ok(Some(SurfaceChart::user_supplied(*grid, nodes.clone()))),
        Surface::SpaceLike(_) => Ok(None),
    }
}

pub fn classify(r: &Resolved) -> Result<ChartClassification, CliError> {
    let classes: Vec<Option<PointClass>> = match &r.surface {
        Surface::SpaceLike(p) => {
            let grid = &r.grid;
            par_map(grid.len(), |k| {
                let (u, v) = grid.coords(k);
                p.forms_at(u, v).map(|f| classify_spacelike(&f))
            })
        }
        _ => {
            let chart = timelike_chart(r)?.expect("time-like chart");
            par_map(chart.grid.len(), |k| classify_node(&chart, k))
        }
    };
    Ok(ChartClassification::from_classes(classes))
}
