//! Winding indices, perpendicular flows and streamlines of planar fields.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_RADIUS: f64 = 0.1;
pub const DEFAULT_SAMPLES: usize = 2048;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const MIN_SAMPLES: usize = 720;
/// Largest admissible distance of the raw winding from an admissible value.
pub const ROUNDING_RESIDUAL: f64 = 0.05;

const ZERO_RETRIES: usize = 3;
const GUARD_RETRIES: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// Oriented vector field; integer index.
    Vector,
    /// Unoriented line field; `v` and `−v` are identified, half-integer index.
    Line,
}

type FieldFn = Arc<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;

/// A planar field in `(u, v)` components around a singular point.
#[derive(Clone)]
pub struct FlowField {
    eval: FieldFn,
    pub kind: FieldKind,
    pub center: (f64, f64),
}

impl core::fmt::Debug for FlowField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FlowField").field("kind", &self.kind).field("center", &self.center).finish()
    }
}

impl FlowField {
    pub fn vector(f: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        FlowField { eval: Arc::new(f), kind: FieldKind::Vector, center: (0.0, 0.0) }
    }

    pub fn line(f: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        FlowField { eval: Arc::new(f), kind: FieldKind::Line, center: (0.0, 0.0) }
    }

    /// A field `a∂_x + b∂_y` given in null coordinates `x = (u+v)/2`,
    /// `y = (u−v)/2`; its `(u, v)` components are `(a+b, a−b)`.
    pub fn from_null(f: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        Self::vector(move |u, v| {
            let [a, b] = f(0.5 * (u + v), 0.5 * (u - v));
            [a + b, a - b]
        })
    }

    pub fn with_center(mut self, u: f64, v: f64) -> Self {
        self.center = (u, v);
        self
    }

    pub fn eval(&self, u: f64, v: f64) -> [f64; 2] {
        (self.eval)(u, v)
    }

    /// Multiplies the field by a scalar function.
    pub fn scaled(&self, s: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let inner = self.eval.clone();
        FlowField {
            eval: Arc::new(move |u, v| {
                let [a, b] = inner(u, v);
                let k = s(u, v);
                [k * a, k * b]
            }),
            kind: self.kind,
            center: self.center,
        }
    }
}

/// `(x₁, x₂) ↦ (x₂, x₁)` on components; an involution that negates the
/// index.
pub fn perpendicular(field: &FlowField) -> FlowField {
    let inner = field.eval.clone();
    FlowField {
        eval: Arc::new(move |u, v| {
            let [a, b] = inner(u, v);
            [b, a]
        }),
        kind: field.kind,
        center: field.center,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingResult {
    /// Integer for vector fields, half-integer for line fields.
    pub index: f64,
    /// Unrounded winding.
    pub raw: f64,
    pub radius: f64,
    pub samples: usize,
    /// Largest angle change between consecutive samples (of the field
    /// direction; for line fields half the doubled-angle change).
    pub max_jump: f64,
}

impl WindingResult {
    pub fn as_integer(&self) -> Option<i64> {
        (self.index == libm::round(self.index)).then_some(self.index as i64)
    }
}

enum Attempt {
    Ok(WindingResult),
    Zero,
    Guard(f64),
}

fn wrap(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

fn attempt(field: &FlowField, radius: f64, samples: usize) -> Attempt {
    let (cu, cv) = field.center;
    let doubling = if field.kind == FieldKind::Line { 2.0 } else { 1.0 };
    let mut prev = None;
    let mut total = 0.0;
    let mut max_jump: f64 = 0.0;
    for k in 0..=samples {
        let t = 2.0 * PI * (k % samples) as f64 / samples as f64;
        let [a, b] = field.eval(cu + radius * libm::cos(t), cv + radius * libm::sin(t));
        let norm = libm::hypot(a, b);
        if !norm.is_finite() || norm <= 1e-300 {
            return Attempt::Zero;
        }
        let ang = doubling * libm::atan2(b, a);
        if let Some(p) = prev {
            let d = wrap(ang - p);
            total += d;
            max_jump = max_jump.max(libm::fabs(d) / doubling);
        }
        prev = Some(ang);
    }
    if max_jump >= PI / 2.0 {
        return Attempt::Guard(max_jump);
    }
    let raw = total / (2.0 * PI * doubling);
    let index = if field.kind == FieldKind::Line { libm::round(2.0 * raw) / 2.0 } else { libm::round(raw) };
    Attempt::Ok(WindingResult { index, raw, radius, samples, max_jump })
}

/// Index of the field at its center from the winding of its direction
/// around the circle of the given radius.
pub fn winding_index(field: &FlowField, radius: f64, samples: usize) -> Result<WindingResult> {
    if samples < MIN_SAMPLES {
        return Err(Error::Invalid(format!("samples = {samples} < {MIN_SAMPLES}")));
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::Invalid(format!("radius = {radius} must be positive")));
    }
    let mut r = radius;
    let mut n = samples;
    let (mut zero_tries, mut guard_tries) = (0, 0);
    loop {
        match attempt(field, r, n) {
            Attempt::Ok(w) => {
                if libm::fabs(w.raw - w.index) > ROUNDING_RESIDUAL {
                    return Err(Error::Winding(format!(
                        "raw winding {} is {} away from {}",
                        w.raw,
                        libm::fabs(w.raw - w.index),
                        w.index
                    )));
                }
                return Ok(w);
            }
            Attempt::Zero => {
                zero_tries += 1;
                if zero_tries > ZERO_RETRIES {
                    return Err(Error::Winding(format!("field vanishes on the circle of radius {r}")));
                }
                r = radius * (1.0 + 0.0137 * zero_tries as f64);
            }
            Attempt::Guard(j) => {
                guard_tries += 1;
                if guard_tries > GUARD_RETRIES {
                    return Err(Error::Winding(format!("angle jump {j} ≥ π/2 with {n} samples")));
                }
                n *= 4;
            }
        }
    }
}

/// Options for [`streamlines`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamOptions {
    pub step: f64,
    pub max_len: f64,
    /// `(u_min, u_max, v_min, v_max)`.
    pub bounds: (f64, f64, f64, f64),
}

impl Default for StreamOptions {
    fn default() -> Self {
        StreamOptions { step: DEFAULT_STEP, max_len: 1.0, bounds: (-0.5, 0.5, -0.5, 0.5) }
    }
}

const MIN_MAGNITUDE: f64 = 1e-10;

/// Unit field direction; line fields are oriented along `prev`.
fn direction(field: &FlowField, p: (f64, f64), prev: [f64; 2]) -> Option<[f64; 2]> {
    let [a, b] = field.eval(p.0, p.1);
    let n = libm::hypot(a, b);
    if !n.is_finite() || n < MIN_MAGNITUDE {
        return None;
    }
    let mut d = [a / n, b / n];
    if field.kind == FieldKind::Line && d[0] * prev[0] + d[1] * prev[1] < 0.0 {
        d = [-d[0], -d[1]];
    }
    Some(d)
}

fn inside(p: (f64, f64), b: (f64, f64, f64, f64)) -> bool {
    p.0 >= b.0 && p.0 <= b.1 && p.1 >= b.2 && p.1 <= b.3
}

fn trace(field: &FlowField, seed: (f64, f64), sign: f64, opts: &StreamOptions) -> Vec<(f64, f64)> {
    let mut pts = alloc::vec![seed];
    let mut p = seed;
    let Some(d0) = direction(field, seed, [1.0, 0.0]) else { return pts };
    let mut prev = [sign * d0[0], sign * d0[1]];
    let mut len = 0.0;
    while len < opts.max_len {
        let h = opts.step.min(opts.max_len - len);
        let k = |q: (f64, f64), prev: [f64; 2]| -> Option<[f64; 2]> {
            let d = direction(field, q, prev)?;
            Some(if field.kind == FieldKind::Vector { [sign * d[0], sign * d[1]] } else { d })
        };
        let Some(k1) = k(p, prev) else { break };
        let Some(k2) = k((p.0 + 0.5 * h * k1[0], p.1 + 0.5 * h * k1[1]), k1) else { break };
        let Some(k3) = k((p.0 + 0.5 * h * k2[0], p.1 + 0.5 * h * k2[1]), k1) else { break };
        let Some(k4) = k((p.0 + h * k3[0], p.1 + h * k3[1]), k1) else { break };
        let q = (
            p.0 + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p.1 + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        );
        if !inside(q, opts.bounds) {
            break;
        }
        pts.push(q);
        prev = k1;
        p = q;
        len += h;
    }
    pts
}

/// Fixed-step RK4 integration of the normalised field from each seed in
/// both directions. Each polyline runs from the backward end through the
/// seed to the forward end.
pub fn streamlines(field: &FlowField, seeds: &[(f64, f64)], opts: &StreamOptions) -> Vec<Vec<(f64, f64)>> {
    seeds
        .iter()
        .map(|&s| {
            let mut back = trace(field, s, -1.0, opts);
            let fwd = trace(field, s, 1.0, opts);
            back.reverse();
            back.extend_from_slice(&fwd[1..]);
            back
        })
        .collect()
}
