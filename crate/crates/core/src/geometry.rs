//! Pointwise analysis of a time-like isothermal chart.
//!
//! A chart carries `σ, L, M, N` on grid nodes, with
//! `ds² = ε e^{2σ}(du² − dv²)` and `II = L du² + 2M du dv + N dv²`.
//! Principal directions are the eigenvectors of
//! `A_f = ½[[L+N, 2M], [−2M, −(L+N)]]`, which are also the eigenvectors of the
//! Weingarten matrix, and the null vectors of `B = [[M, (L+N)/2], [(L+N)/2, M]]`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::paracomplex::ParaComplex;
use crate::parafunc::ParaFunction;
use crate::poly::{from_f64, rat, Rational};

/// Rectangular grid of `nu × nv` nodes, `u` fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: usize,
    pub nv: usize,
}

impl Default for GridSpec {
    /// `[−½, ½]²` with 65 nodes per axis; the spacing `1/64` is exact.
    fn default() -> Self {
        GridSpec::square(0.5, 65)
    }
}

impl GridSpec {
    pub fn square(half_width: f64, n: usize) -> Self {
        GridSpec { u_min: -half_width, u_max: half_width, v_min: -half_width, v_max: half_width, nu: n, nv: n }
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n <= 1 {
            return lo;
        }
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }

    pub fn u(&self, i: usize) -> f64 {
        Self::axis(self.u_min, self.u_max, self.nu, i)
    }

    pub fn v(&self, j: usize) -> f64 {
        Self::axis(self.v_min, self.v_max, self.nv, j)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    pub fn ij(&self, idx: usize) -> (usize, usize) {
        (idx % self.nu, idx / self.nu)
    }

    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let (i, j) = self.ij(idx);
        (self.u(i), self.v(j))
    }

    /// Node coordinates as exact rationals (the binary values of the doubles).
    pub fn exact_coords(&self, idx: usize) -> (Rational, Rational) {
        let (u, v) = self.coords(idx);
        (from_f64(u).unwrap_or_else(Rational::zero), from_f64(v).unwrap_or_else(Rational::zero))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |k| self.coords(k))
    }

    /// Grid-neighbour indices (8-neighbourhood).
    pub fn neighbours(&self, idx: usize) -> Vec<usize> {
        let (i, j) = self.ij(idx);
        let mut out = Vec::new();
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a >= 0 && b >= 0 && (a as usize) < self.nu && (b as usize) < self.nv {
                    out.push(self.index(a as usize, b as usize));
                }
            }
        }
        out
    }
}

/// `σ, L, M, N` and the metric sign `ε` at one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeForms {
    pub sigma: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub metric_sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Generated,
    UserSupplied,
}

/// Forms on a grid; `None` marks masked nodes.
#[derive(Clone, Debug)]
pub struct SurfaceChart {
    pub grid: GridSpec,
    pub nodes: Vec<Option<NodeForms>>,
    pub provenance: Provenance,
    /// Exact `Q̂` with polynomial branches when the chart is analytic; then
    /// `L + N + 2jM = 4Q̂` and zero tests are done on its branches.
    pub hopf: Option<ParaFunction>,
}

impl SurfaceChart {
    pub fn user_supplied(grid: GridSpec, nodes: Vec<Option<NodeForms>>) -> Self {
        SurfaceChart { grid, nodes, provenance: Provenance::UserSupplied, hopf: None }
    }

    pub fn valid_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    /// Exact branch values `(Q̂₁(x), Q̂₋₁(y))` at a node of an analytic chart.
    pub fn exact_hopf_branches(&self, idx: usize) -> Option<(Rational, Rational)> {
        let q = self.hopf.as_ref()?;
        let (u, v) = self.grid.exact_coords(idx);
        let half = rat(1, 2);
        let x = (&u + &v) * &half;
        let y = (&u - &v) * &half;
        Some((q.branch1.eval_exact(&x)?, q.branchm1.eval_exact(&y)?))
    }
}

/// `ε e^{−2σ}[[L, M], [−M, −N]]`.
pub fn weingarten(node: &NodeForms) -> [[f64; 2]; 2] {
    let s = node.metric_sign as f64 * libm::exp(-2.0 * node.sigma);
    [[s * node.l, s * node.m], [-s * node.m, -s * node.n]]
}

/// `A_f = ½[[L+N, 2M], [−2M, −(L+N)]]`.
pub fn trace_free_part(node: &NodeForms) -> [[f64; 2]; 2] {
    let a = 0.5 * (node.l + node.n);
    [[a, node.m], [-node.m, -a]]
}

/// `B = [[M, (L+N)/2], [(L+N)/2, M]]`.
pub fn null_form(node: &NodeForms) -> [[f64; 2]; 2] {
    let h = 0.5 * (node.l + node.n);
    [[node.m, h], [h, node.m]]
}

/// `D_f = e^{−4σ}((L+N)² − 4M²)`.
pub fn discriminant(node: &NodeForms) -> f64 {
    let a = node.l + node.n;
    libm::exp(-4.0 * node.sigma) * (a * a - 4.0 * node.m * node.m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    Umbilic,
    QuasiUmbilic,
    Positive,
    Negative,
}

impl PointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointKind::Umbilic => "umbilic",
            PointKind::QuasiUmbilic => "quasi_umbilic",
            PointKind::Positive => "positive",
            PointKind::Negative => "negative",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointClass {
    pub kind: PointKind,
    pub d: f64,
    /// Unit principal directions in the `(u, v)` chart, first non-zero
    /// component positive; `dirs[i]` belongs to `eigenvalues[i]`.
    pub dirs: Vec<[f64; 2]>,
    /// Principal curvatures when `D ≥ 0`; at negative points they form a
    /// complex-conjugate pair and are not reported.
    pub eigenvalues: Option<(f64, f64)>,
    pub complex_pair: bool,
    /// The zero decision was made by a float threshold rather than an
    /// exact test.
    pub marginal: bool,
}

/// `τ = 1e−9·(1 + |L| + |N| + |M|)`.
pub fn zero_tolerance(node: &NodeForms) -> f64 {
    1e-9 * (1.0 + libm::fabs(node.l) + libm::fabs(node.n) + libm::fabs(node.m))
}

fn normalise(v: [f64; 2]) -> [f64; 2] {
    let r = libm::hypot(v[0], v[1]);
    let mut w = [v[0] / r, v[1] / r];
    if w[0] < 0.0 || (w[0] == 0.0 && w[1] < 0.0) {
        w = [-w[0], -w[1]];
    }
    w
}

fn longer(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    if libm::hypot(a[0], a[1]) >= libm::hypot(b[0], b[1]) {
        a
    } else {
        b
    }
}

/// Eigenvectors of `A_f` for the eigenvalues `+r/2` and `−r/2`,
/// `r = √((L+N)² − 4M²)`, chosen from two candidate formulas to avoid
/// cancellation.
pub fn principal_directions(a: f64, b: f64) -> ([f64; 2], [f64; 2]) {
    let r = libm::sqrt((a * a - b * b).max(0.0));
    let plus = longer([a + r, -b], [b, r - a]);
    let minus = longer([a - r, -b], [b, -r - a]);
    (normalise(plus), normalise(minus))
}

/// Classifies one node. `exact` holds `(Q̂₁(x), Q̂₋₁(y))` when the chart is
/// analytic; it decides all zero tests.
pub fn classify(node: &NodeForms, exact: Option<&(Rational, Rational)>) -> PointClass {
    let a = node.l + node.n;
    let b = 2.0 * node.m;
    let d = discriminant(node);
    let tau = zero_tolerance(node);
    // Π₁(L+N+2jM) = a + b, Π₋₁ = a − b
    let (z1, z2, marginal) = match exact {
        Some((q1, q2)) => (q1.is_zero(), q2.is_zero(), false),
        None => {
            let (p, q) = (libm::fabs(a + b) <= tau, libm::fabs(a - b) <= tau);
            (p, q, (p && a + b != 0.0) || (q && a - b != 0.0))
        }
    };
    let sign = match exact {
        Some((q1, q2)) => {
            let s = |q: &Rational| {
                if q.is_zero() {
                    0
                } else if *q > Rational::zero() {
                    1
                } else {
                    -1
                }
            };
            s(q1) * s(q2)
        }
        None if z1 || z2 => 0,
        None => {
            if d > 0.0 {
                1
            } else {
                -1
            }
        }
    };
    let ew = |t: f64| node.metric_sign as f64 * libm::exp(-2.0 * node.sigma) * t;
    let half_trace = 0.5 * (node.l - node.n);
    if z1 && z2 {
        let lam = ew(half_trace);
        return PointClass {
            kind: PointKind::Umbilic,
            d: 0.0,
            dirs: Vec::new(),
            eigenvalues: Some((lam, lam)),
            complex_pair: false,
            marginal,
        };
    }
    if z1 || z2 {
        let lam = ew(half_trace);
        return PointClass {
            kind: PointKind::QuasiUmbilic,
            d: 0.0,
            dirs: alloc::vec![normalise([a, -b])],
            eigenvalues: Some((lam, lam)),
            complex_pair: false,
            marginal,
        };
    }
    if sign > 0 {
        let r = libm::sqrt((a * a - b * b).max(0.0));
        let (p, m) = principal_directions(a, b);
        PointClass {
            kind: PointKind::Positive,
            d,
            dirs: alloc::vec![p, m],
            eigenvalues: Some((ew(half_trace + 0.5 * r), ew(half_trace - 0.5 * r))),
            complex_pair: false,
            marginal: false,
        }
    } else {
        PointClass {
            kind: PointKind::Negative,
            d,
            dirs: Vec::new(),
            eigenvalues: None,
            complex_pair: true,
            marginal: false,
        }
    }
}

/// Classification of every unmasked node and the partition into positive
/// (𝓟), negative (𝓝), umbilic (Ξ) and quasi-umbilic (Ξ′) node indices.
#[derive(Clone, Debug, Default)]
pub struct ChartClassification {
    pub classes: Vec<Option<PointClass>>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub umbilic: Vec<usize>,
    pub quasi_umbilic: Vec<usize>,
}

impl ChartClassification {
    pub fn from_classes(classes: Vec<Option<PointClass>>) -> Self {
        let mut out = ChartClassification::default();
        for (k, c) in classes.iter().enumerate() {
            if let Some(c) = c {
                match c.kind {
                    PointKind::Positive => out.positive.push(k),
                    PointKind::Negative => out.negative.push(k),
                    PointKind::Umbilic => out.umbilic.push(k),
                    PointKind::QuasiUmbilic => out.quasi_umbilic.push(k),
                }
            }
        }
        out.classes = classes;
        out
    }

    pub fn marginal_count(&self) -> usize {
        self.classes.iter().flatten().filter(|c| c.marginal).count()
    }
}

pub fn classify_node(chart: &SurfaceChart, idx: usize) -> Option<PointClass> {
    let node = chart.nodes[idx].as_ref()?;
    let exact = chart.exact_hopf_branches(idx);
    Some(classify(node, exact.as_ref()))
}

pub fn classify_chart(chart: &SurfaceChart) -> ChartClassification {
    ChartClassification::from_classes((0..chart.nodes.len()).map(|k| classify_node(chart, k)).collect())
}

/// Angle in `[0, π/2]` between two lines through the origin.
pub fn line_angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dot = libm::fabs(a[0] * b[0] + a[1] * b[1]);
    let cross = libm::fabs(a[0] * b[1] - a[1] * b[0]);
    libm::atan2(cross, dot)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionCheck {
    pub checked: usize,
    pub max_angle: f64,
    pub pass: bool,
}

/// Angular tolerance of [`quasi_umbilic_direction_check`].
pub const DIRECTION_TOL: f64 = 1e-6;

/// Compares the principal direction at every quasi-umbilic node on
/// `𝓛₋ₛ = {u + s·v = 0}` with `target`.
pub fn direction_check_against(
    chart: &SurfaceChart,
    classes: &ChartClassification,
    s: i8,
    target: [f64; 2],
) -> DirectionCheck {
    let mut checked = 0;
    let mut max_angle: f64 = 0.0;
    for &k in &classes.quasi_umbilic {
        let (u, v) = chart.grid.exact_coords(k);
        let on_line = ParaComplex::new(u, v).on_null_line(-s);
        if !on_line {
            continue;
        }
        let c = classes.classes[k].as_ref().expect("classified");
        checked += 1;
        max_angle = max_angle.max(line_angle(c.dirs[0], target));
    }
    DirectionCheck { checked, max_angle, pass: checked > 0 && max_angle <= DIRECTION_TOL }
}

/// True iff at every quasi-umbilic node on `𝓛₋ₛ` the principal direction is
/// parallel to `(s, 1)`; false when there is no such node.
pub fn quasi_umbilic_direction_check(chart: &SurfaceChart, classes: &ChartClassification, s: i8) -> bool {
    direction_check_against(chart, classes, s, [s as f64, 1.0]).pass
}

/// Real principal curvatures on the sampled neighbourhood of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampledAdmissibility {
    /// `D ≥ 0` at every unmasked grid neighbour.
    AdmissibleOnSample,
    /// Some neighbour is a negative point.
    NotAdmissible,
    /// The node has no unmasked neighbour.
    Undetermined,
}

pub fn sampled_admissibility(chart: &SurfaceChart, classes: &ChartClassification, idx: usize) -> SampledAdmissibility {
    let mut seen = false;
    for k in chart.grid.neighbours(idx) {
        if let Some(c) = &classes.classes[k] {
            seen = true;
            if c.kind == PointKind::Negative {
                return SampledAdmissibility::NotAdmissible;
            }
        }
    }
    if seen {
        SampledAdmissibility::AdmissibleOnSample
    } else {
        SampledAdmissibility::Undetermined
    }
}
