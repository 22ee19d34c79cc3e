//! Local structure at a base point from the split orders of `Q̂`.
//!
//! With `Q̂ = ε₁x^{m₁}ψ₁(x) + ε₋₁y^{m₋₁}ψ₋₁(y)` around `o`:
//!
//! * `m₁ = m₋₁ = 0`: `o` is a positive or negative point.
//! * one order zero, the other `m ≥ 1`: `o` is a quasi-umbilic; the sign of
//!   `N²(Q̂)` changes across the quasi-umbilic line iff `m` is odd.
//! * both orders positive and finite: `o` is an isolated umbilic. Odd orders
//!   give mixed signs nearby; even orders with `ψ₁(0)ψ₋₁(0) < 0` give only
//!   negative points off the null lines; with a positive product there are
//!   two smooth principal flows, of index `±1` when both `m_s/2` are odd and
//!   `0` otherwise.
//! * an infinite order: `D_f ≡ 0` near `o`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::flow::{perpendicular, winding_index, FlowField, WindingResult};
use crate::geometry::{classify_node, line_angle, PointKind, SurfaceChart};
use crate::paracomplex::ParaComplex;
use crate::parafunc::{ParaFunction, SplitOrder, SplitOrders};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    /// Both orders zero: not a singular point.
    Regular,
    QuasiUmbilic,
    /// Some order is odd.
    OddOrder,
    /// Both orders even; both halves odd.
    MMod4Eq2,
    /// Both orders even; some half even.
    MMod4Eq0,
    Infinite,
}

impl ParityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParityClass::Regular => "regular",
            ParityClass::QuasiUmbilic => "quasi_umbilic",
            ParityClass::OddOrder => "odd_order",
            ParityClass::MMod4Eq2 => "m_mod_4_eq_2",
            ParityClass::MMod4Eq0 => "m_mod_4_eq_0",
            ParityClass::Infinite => "infinite",
        }
    }
}

/// Predicted local structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prediction {
    /// `o` is not singular: `D_f(o)` has the sign of `ψ₁(0)ψ₋₁(0)`.
    RegularPoint {
        positive: bool,
    },
    /// Quasi-umbilics form `𝓛_s` near `o`; `mixed` when both positive and
    /// negative points occur nearby.
    QuasiUmbilic {
        line: i8,
        mixed: bool,
    },
    /// Isolated umbilic with positive and negative points nearby.
    NotAdmissible,
    /// Isolated umbilic with only negative points off `𝓛₁ ∪ 𝓛₋₁`; no smooth
    /// curvature line flow.
    AllNegative,
    /// Isolated umbilic with two smooth flows of these indices.
    Indices(Vec<i64>),
    TotallyUmbilic,
    TotallyQuasiUmbilic,
    /// Umbilics along `𝓛_line`, quasi-umbilics elsewhere.
    UmbilicLine {
        line: i8,
    },
    /// Every jet below the cap vanishes on both branches; possibly
    /// totally umbilic.
    Undecidable {
        cap: usize,
    },
}

impl Prediction {
    pub fn describe(&self) -> String {
        match self {
            Prediction::RegularPoint { positive: true } => "regular positive point".into(),
            Prediction::RegularPoint { positive: false } => "regular negative point".into(),
            Prediction::QuasiUmbilic { line, mixed } => format!(
                "quasi-umbilic; quasi-umbilics along L_{line}; {}",
                if *mixed { "positive and negative points nearby" } else { "one-signed complement" }
            ),
            Prediction::NotAdmissible => "not admissible".into(),
            Prediction::AllNegative => "no smooth flow (all-negative neighborhood)".into(),
            Prediction::Indices(v) => format!("indices {v:?}"),
            Prediction::TotallyUmbilic => "totally umbilic".into(),
            Prediction::TotallyQuasiUmbilic => "totally quasi-umbilic".into(),
            Prediction::UmbilicLine { line } => format!("umbilics along L_{line}, quasi-umbilics elsewhere"),
            Prediction::Undecidable { cap } => format!("possibly totally umbilic, undecidable at cap {cap}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissible {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    pub orders: SplitOrders,
    pub degenerate: bool,
    /// `m = m₁ = m₋₁` when non-degenerate.
    pub order: Option<usize>,
    pub psi_product_sign: Option<i8>,
    pub parity_class: ParityClass,
    pub prediction: Prediction,
    pub measured_indices: Option<(i64, i64)>,
    pub admissible: Admissible,
    pub notes: Vec<String>,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Orders, parity class and predictions at `o` for the given `Q̂`.
pub fn analyze_point(qhat: &ParaFunction, cap: usize) -> Result<IndexReport> {
    let orders = qhat.split_orders(cap)?;
    let (o1, o2) = (orders.branch1.order, orders.branchm1.order);
    let mut notes = Vec::new();
    let psi_sign = match (o1, o2) {
        (SplitOrder::Finite(_), SplitOrder::Finite(_)) => Some(sign(orders.branch1.coeff * orders.branchm1.coeff)),
        _ => None,
    };
    let mut report = IndexReport {
        orders: orders.clone(),
        degenerate: o1 != o2,
        order: None,
        psi_product_sign: psi_sign,
        parity_class: ParityClass::Infinite,
        prediction: Prediction::Undecidable { cap },
        measured_indices: None,
        admissible: Admissible::Unknown,
        notes: Vec::new(),
    };
    let inf = |o: SplitOrder| !matches!(o, SplitOrder::Finite(_));
    match (o1, o2) {
        (SplitOrder::Finite(m1), SplitOrder::Finite(m2)) => {
            if m1 == m2 {
                report.order = Some(m1);
            }
            let positive = psi_sign == Some(1);
            if m1 == 0 && m2 == 0 {
                report.parity_class = ParityClass::Regular;
                report.prediction = Prediction::RegularPoint { positive };
                report.admissible = if positive { Admissible::Yes } else { Admissible::No };
            } else if m1 == 0 || m2 == 0 {
                // m_s = 0, m₋ₛ ≥ 1: quasi-umbilics along 𝓛_s
                let (s, m) = if m1 == 0 { (1, m2) } else { (-1, m1) };
                report.parity_class = ParityClass::QuasiUmbilic;
                let mixed = m % 2 == 1;
                report.prediction = Prediction::QuasiUmbilic { line: s, mixed };
                report.admissible = if !mixed && positive { Admissible::Yes } else { Admissible::No };
            } else if m1 % 2 == 1 || m2 % 2 == 1 {
                report.parity_class = ParityClass::OddOrder;
                report.prediction = Prediction::NotAdmissible;
                report.admissible = Admissible::No;
            } else {
                let both_odd_halves = (m1 / 2) % 2 == 1 && (m2 / 2) % 2 == 1;
                report.parity_class = if both_odd_halves { ParityClass::MMod4Eq2 } else { ParityClass::MMod4Eq0 };
                if positive {
                    report.prediction =
                        Prediction::Indices(if both_odd_halves { alloc::vec![1, -1] } else { alloc::vec![0] });
                    report.admissible = Admissible::Yes;
                    if m1 != m2 {
                        notes
                            .push("degenerate: hypothesis of non-degeneracy not met, construction extrapolated".into());
                    }
                } else {
                    report.prediction = Prediction::AllNegative;
                    report.admissible = Admissible::No;
                }
            }
        }
        (a, b) if inf(a) && inf(b) => {
            let exact = a == SplitOrder::Infinite && b == SplitOrder::Infinite;
            report.parity_class = ParityClass::Infinite;
            report.prediction = if exact { Prediction::TotallyUmbilic } else { Prediction::Undecidable { cap } };
            report.admissible = if exact { Admissible::Yes } else { Admissible::Unknown };
        }
        (a, b) => {
            // exactly one branch of infinite order: Z(V) = V
            let (s, m, other) = if inf(b) { (1i8, a.finite().unwrap(), b) } else { (-1, b.finite().unwrap(), a) };
            report.parity_class = ParityClass::Infinite;
            report.prediction =
                if m == 0 { Prediction::TotallyQuasiUmbilic } else { Prediction::UmbilicLine { line: -s } };
            report.admissible = Admissible::Yes;
            if let SplitOrder::AtLeast(c) = other {
                notes.push(format!("order of one branch is only known to be >= {c}"));
            }
        }
    }
    report.notes = notes;
    Ok(report)
}

/// `min{i : dⁱQ̂/dzⁱ(o) ≠ 0}` by repeated differentiation, up to `cap`.
pub fn order_by_derivatives(qhat: &ParaFunction, cap: usize) -> Result<Option<usize>> {
    let mut d = qhat.clone();
    let o = ParaComplex::new(0.0, 0.0);
    for i in 0..cap {
        let val = d.evaluate(o)?;
        if val.re != 0.0 || val.im != 0.0 {
            return Ok(Some(i));
        }
        d = d.derivative()?;
    }
    Ok(None)
}

/// The principal fields `X₁ = (p+q)∂_u + (q−p)∂_v` and
/// `X₂ = (q−p)∂_u + (p+q)∂_v` with `p = x^{n₁}√α(x)`, `q = y^{n₋₁}√β(y)`,
/// `α = δψ₁`, `β = δψ₋₁`, `δ = sign ψ₁(0)`.
pub fn eigenfields(qhat: &ParaFunction, cap: usize) -> Result<(FlowField, FlowField)> {
    let so = qhat.split_orders(cap)?;
    let (m1, m2) = match (so.branch1.order, so.branchm1.order) {
        (SplitOrder::Finite(a), SplitOrder::Finite(b)) => (a, b),
        (a, b) => return Err(Error::Unsupported(format!("split orders ({a}, {b}) are not finite"))),
    };
    if m1 % 2 == 1 || m2 % 2 == 1 {
        return Err(Error::Unsupported(format!("odd split order ({m1}, {m2}): no smooth principal flow")));
    }
    let (c1, c2) = (so.branch1.coeff, so.branchm1.coeff);
    if c1 * c2 <= 0.0 {
        return Err(Error::Unsupported("ψ₁(0)ψ₋₁(0) ≤ 0: no smooth principal flow".into()));
    }
    let delta = if c1 > 0.0 { 1.0 } else { -1.0 };
    let psi1 = qhat.branch1.psi(m1, c1);
    let psi2 = qhat.branchm1.psi(m2, c2);
    let (n1, n2) = ((m1 / 2) as i32, (m2 / 2) as i32);
    let pq = move |u: f64, v: f64| {
        let (x, y) = (0.5 * (u + v), 0.5 * (u - v));
        let p = libm::pow(x, n1 as f64) * libm::sqrt(delta * psi1.value(x));
        let q = libm::pow(y, n2 as f64) * libm::sqrt(delta * psi2.value(y));
        (p, q)
    };
    let pq2 = pq.clone();
    let x1 = FlowField::vector(move |u, v| {
        let (p, q) = pq(u, v);
        [p + q, q - p]
    });
    let x2 = FlowField::vector(move |u, v| {
        let (p, q) = pq2(u, v);
        [q - p, p + q]
    });
    Ok((x1, x2))
}

/// Largest sine of the angle between `field` and the nearest principal
/// direction over the positive and quasi-umbilic nodes of the chart where
/// the field does not vanish.
pub fn eigenfield_check(field: &FlowField, chart: &SurfaceChart) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..chart.grid.len() {
        let Some(c) = classify_node(chart, k) else { continue };
        if !matches!(c.kind, PointKind::Positive | PointKind::QuasiUmbilic) {
            continue;
        }
        let (u, v) = chart.grid.coords(k);
        let x = field.eval(u, v);
        let n = libm::hypot(x[0], x[1]);
        if n.is_nan() || n <= 1e-12 {
            continue;
        }
        let best = c.dirs.iter().map(|d| libm::sin(line_angle(*d, x))).fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    worst
}

/// Winding indices of `X₁` and `X₂` (when they exist) and of the
/// perpendicular of `X₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredIndices {
    pub x1: WindingResult,
    pub x2: WindingResult,
    pub x1_perpendicular: WindingResult,
}

pub fn measure_indices(qhat: &ParaFunction, cap: usize, radius: f64, samples: usize) -> Result<MeasuredIndices> {
    let (x1, x2) = eigenfields(qhat, cap)?;
    Ok(MeasuredIndices {
        x1: winding_index(&x1, radius, samples)?,
        x2: winding_index(&x2, radius, samples)?,
        x1_perpendicular: winding_index(&perpendicular(&x1), radius, samples)?,
    })
}

/// Fills `measured_indices` when the report predicts smooth flows.
pub fn attach_measurement(
    report: &mut IndexReport,
    qhat: &ParaFunction,
    cap: usize,
    radius: f64,
    samples: usize,
) -> Result<()> {
    if let Prediction::Indices(_) = report.prediction {
        let m = measure_indices(qhat, cap, radius, samples)?;
        let as_int = |w: &WindingResult| w.as_integer().unwrap_or(i64::MIN);
        report.measured_indices = Some((as_int(&m.x1), as_int(&m.x2)));
    }
    Ok(())
}

/// `ψ₁(x)ψ₋₁(y)` is non-negative with zeros only on the null lines for
/// polynomial `Q̂` of even orders and positive product; checked exactly at
/// the given rational points.
pub fn n2_sign_exact(qhat: &ParaFunction, u: &crate::poly::Rational, v: &crate::poly::Rational) -> Option<i8> {
    let val = qhat.evaluate_exact(&ParaComplex::new(u.clone(), v.clone()))?;
    let n2 = val.n2();
    Some(if n2.is_zero() {
        0
    } else if n2 > crate::poly::Rational::zero() {
        1
    } else {
        -1
    })
}
