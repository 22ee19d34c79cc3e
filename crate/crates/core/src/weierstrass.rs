//! Weierstrass-type generators for time-like zero mean curvature surfaces.
//!
//! Ambient space is `ℝ³₁` with signature `(++−)`; the third coordinate is
//! time-like. For data `(g, ω = ω̂ dz)` with `g(o) = 0` and `N²(ω̂(o)) ≠ 0`
//!
//! ```text
//! f = Re ∫₀ᶻ ( j(1−g²), 2g, 1+g² ) ω
//! ```
//!
//! and, in split form with `x = (u+v)/2`, `y = (u−v)/2`,
//!
//! ```text
//! f = ∫₀ˣ (1−g₁², 2g₁, 1+g₁²) ω̂₁ + ∫₀ʸ (−(1−g₂²), 2g₂, 1+g₂²) ω̂₂.
//! ```
//!
//! The two agree for the same data. In these coordinates
//! `⟨f_x, f_y⟩ = −2(1−g₁g₂)²ω̂₁ω̂₂`, so `⟨f_u, f_u⟩ = −(1−N²g)²N²ω̂ =
//! −⟨f_v, f_v⟩`. The unit normal is
//! `ñ = (−g₁+g₂, 1+g₁g₂, g₁+g₂)/(−1+g₁g₂)` and the second fundamental form is
//! `−2ω̂₁g₁′dx² − 2ω̂₂g₂′dy²`, which gives `L + N + 2jM = −4ω̂·dg/dz`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{GridSpec, NodeForms, Provenance, SurfaceChart};
use crate::paracomplex::ParaComplex;
use crate::parafunc::{null_coords, ParaFunction, RealBranch};
use crate::poly::{rat, rint, BiPoly, Polynomial, Rational};
use crate::quadrature;

pub type Vec3 = [f64; 3];

/// Absolute tolerance of the adaptive quadrature for non-polynomial data.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// `⟨a, b⟩ = a₀b₀ + a₁b₁ − a₂b₂`.
pub fn lorentz_inner(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// `G(a × b)` with `G = diag(1, 1, −1)`; orthogonal to `a` and `b` for
/// [`lorentz_inner`].
pub fn lorentz_cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], -(a[0] * b[1] - a[1] * b[0])]
}

/// Weierstrass data `(g, ω̂)` with base point `o = (0, 0)`.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    pub g: ParaFunction,
    pub omega_hat: ParaFunction,
    /// Skips the `N²(ω̂(o)) ≠ 0` requirement.
    pub allow_singular_base: bool,
}

impl WeierstrassData {
    pub fn new(g: ParaFunction, omega_hat: ParaFunction) -> Result<Self> {
        let d = WeierstrassData { g, omega_hat, allow_singular_base: false };
        d.validate()?;
        Ok(d)
    }

    /// Data whose `ω̂` may vanish at the base point; the resulting chart
    /// masks the nodes where the conformal factor vanishes.
    pub fn with_singular_base(g: ParaFunction, omega_hat: ParaFunction) -> Result<Self> {
        let d = WeierstrassData { g, omega_hat, allow_singular_base: true };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let (g1, g2) = (self.g.branch1.eval(0.0)?, self.g.branchm1.eval(0.0)?);
        if g1 != 0.0 || g2 != 0.0 {
            return Err(Error::DegenerateData(format!("g(o) = ({g1}, {g2}) in null branches, expected 0")));
        }
        if !self.allow_singular_base {
            let n2 = self.omega_hat.branch1.eval(0.0)? * self.omega_hat.branchm1.eval(0.0)?;
            if n2 == 0.0 {
                return Err(Error::DegenerateData("N²(ω̂(o)) = 0".into()));
            }
        }
        Ok(())
    }
}

/// Construction route of a patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `Re ∫ (j(1−g²), 2g, 1+g²) ω`.
    Ko,
    /// Split form in null coordinates.
    Null,
}

#[derive(Clone, Debug)]
pub enum PatchRepr {
    /// Exact polynomial components in `(u, v)`; `null` keeps the `(x, y)`
    /// form when the patch was built in null coordinates.
    Poly { uv: [BiPoly; 3], null: Option<Box<[BiPoly; 3]>> },
    /// Components evaluated by adaptive quadrature of the split integrands.
    Quadrature,
}

/// Derivatives of `f` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchJet {
    pub fu: Vec3,
    pub fv: Vec3,
    pub fuu: Vec3,
    pub fuv: Vec3,
    pub fvv: Vec3,
}

/// A generated immersion `f : U → ℝ³₁`.
#[derive(Clone, Debug)]
pub struct ImmersionPatch {
    pub data: WeierstrassData,
    pub route: Route,
    pub repr: PatchRepr,
}

/// Pointwise fundamental forms in `(u, v)`:
/// `ds² = ε e^{2σ}(du² − dv²)`, `II = L du² + 2M du dv + N dv²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Forms {
    pub sigma: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub metric_sign: i8,
}

impl Forms {
    pub fn e2sigma(&self) -> f64 {
        libm::exp(2.0 * self.sigma)
    }

    /// `H = ε e^{−2σ}(L − N)/2`.
    pub fn mean_curvature(&self) -> f64 {
        self.metric_sign as f64 * (self.l - self.n) / (2.0 * self.e2sigma())
    }

    /// `L + N + 2jM`.
    pub fn hopf_combination(&self) -> ParaComplex<f64> {
        ParaComplex::new(self.l + self.n, 2.0 * self.m)
    }

    fn from_metric(coef: f64, l: f64, m: f64, n: f64) -> Option<Forms> {
        if !(coef != 0.0 && coef.is_finite()) {
            return None;
        }
        let sigma = 0.5 * libm::log(libm::fabs(coef));
        let metric_sign = if coef > 0.0 { 1 } else { -1 };
        let f = Forms { sigma, l, m, n, metric_sign };
        (sigma.is_finite() && l.is_finite() && m.is_finite() && n.is_finite()).then_some(f)
    }
}

impl From<Forms> for NodeForms {
    fn from(f: Forms) -> NodeForms {
        NodeForms { sigma: f.sigma, l: f.l, m: f.m, n: f.n, metric_sign: f.metric_sign }
    }
}

/// `c_k z^k ↦ c_k z^{k+1}/(k+1)`.
fn z_antiderivative(coeffs: &[ParaComplex<Rational>]) -> Vec<ParaComplex<Rational>> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(ParaComplex::real(Rational::zero()));
    for (k, c) in coeffs.iter().enumerate() {
        out.push(c.scale(rat(1, k as i64 + 1)));
    }
    out
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rint((n - i) as i64) / rint((i + 1) as i64);
    }
    acc
}

/// `Re Σ c_k (u + jv)^k` as a polynomial in `(u, v)`. Since
/// `(u+jv)^k = Σ_{i even} C(k,i)u^{k−i}v^i + j Σ_{i odd} C(k,i)u^{k−i}v^i`,
/// `Re(c·w) = Re c·Re w + Im c·Im w`.
pub fn real_part_uv(coeffs: &[ParaComplex<Rational>]) -> BiPoly {
    let mut acc = BiPoly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        let k = k as u32;
        for i in 0..=k {
            let part = if i % 2 == 0 { &c.re } else { &c.im };
            if part.is_zero() {
                continue;
            }
            acc = acc.add(&BiPoly::term(binomial(k, i) * part, k - i, i));
        }
    }
    acc
}

fn pc_const(re: i64, im: i64) -> ParaFunction {
    ParaFunction::constant(&ParaComplex::new(rint(re), rint(im)))
}

/// Polynomial integrand branches `(1−g_s²)ω̂_s, 2g_sω̂_s, (1+g_s²)ω̂_s`.
fn branch_integrands(g: &RealBranch, w: &RealBranch) -> [RealBranch; 3] {
    let g2 = g.mul(g);
    let one = RealBranch::constant(Rational::one());
    [one.add(&g2.scale(&rint(-1))).mul(w), g.mul(w).scale(&rint(2)), one.add(&g2).mul(w)]
}

/// Generates `f` from `Re ∫ (j(1−g²), 2g, 1+g²) ω`. Polynomial data are
/// antidifferentiated termwise in `z`; other data use quadrature on the
/// equivalent split integrals (the integrand is para-holomorphic, so the
/// integral is path independent).
pub fn generate_ko(data: &WeierstrassData) -> Result<ImmersionPatch> {
    data.validate()?;
    check_base_metric(data)?;
    let (g, w) = (&data.g, &data.omega_hat);
    let repr = if g.is_poly() && w.is_poly() {
        let one = pc_const(1, 0);
        let g2 = g.mul(g);
        let integrands = [
            pc_const(0, 1).mul(&one.add(&g2.scale_real(&rint(-1)))).mul(w),
            g.mul(w).scale_real(&rint(2)),
            one.add(&g2).mul(w),
        ];
        let mut uv = [BiPoly::zero(), BiPoly::zero(), BiPoly::zero()];
        for (slot, integrand) in uv.iter_mut().zip(integrands.iter()) {
            let zc = integrand.to_z_poly().expect("polynomial branches");
            *slot = real_part_uv(&z_antiderivative(&zc));
        }
        PatchRepr::Poly { uv, null: None }
    } else {
        PatchRepr::Quadrature
    };
    Ok(ImmersionPatch { data: data.clone(), route: Route::Ko, repr })
}

/// Generates `f` from the split formula with `x₁ = x`, `x₂ = y`.
pub fn generate_null(g1: RealBranch, g2: RealBranch, w1: RealBranch, w2: RealBranch) -> Result<ImmersionPatch> {
    let data = WeierstrassData::new(ParaFunction::new(g1, g2), ParaFunction::new(w1, w2))?;
    generate_null_from(&data)
}

pub fn generate_null_from(data: &WeierstrassData) -> Result<ImmersionPatch> {
    data.validate()?;
    check_base_metric(data)?;
    let (g, w) = (&data.g, &data.omega_hat);
    let repr = if g.is_poly() && w.is_poly() {
        let first = branch_integrands(&g.branch1, &w.branch1);
        let second = branch_integrands(&g.branchm1, &w.branchm1);
        let signs = [-1, 1, 1];
        let mut null = [BiPoly::zero(), BiPoly::zero(), BiPoly::zero()];
        for i in 0..3 {
            let p = first[i].as_poly().unwrap().antiderivative();
            let q = second[i].as_poly().unwrap().antiderivative().scale(&rint(signs[i]));
            null[i] = BiPoly::from_first(&p).add(&BiPoly::from_second(&q));
        }
        let uv = [null[0].null_to_uv(), null[1].null_to_uv(), null[2].null_to_uv()];
        PatchRepr::Poly { uv, null: Some(Box::new(null)) }
    } else {
        PatchRepr::Quadrature
    };
    Ok(ImmersionPatch { data: data.clone(), route: Route::Null, repr })
}

/// The generated map is not an immersion when `1 − g₁g₂` vanishes at `o`.
fn check_base_metric(data: &WeierstrassData) -> Result<()> {
    let p = data.g.branch1.eval(0.0)? * data.g.branchm1.eval(0.0)?;
    if p == 1.0 {
        return Err(Error::DegenerateData("1 − N²(g(o)) = 0".into()));
    }
    Ok(())
}

/// `Q̂ = −ω̂ · dg/dz`.
pub fn hopf_differential(data: &WeierstrassData) -> Result<ParaFunction> {
    Ok(data.omega_hat.mul(&data.g.derivative()?).scale_real(&rint(-1)))
}

fn integrand_at(g: &RealBranch, w: &RealBranch, t: f64) -> Vec3 {
    let (gv, wv) = (g.value(t), w.value(t));
    [(1.0 - gv * gv) * wv, 2.0 * gv * wv, (1.0 + gv * gv) * wv]
}

impl ImmersionPatch {
    pub fn is_poly(&self) -> bool {
        matches!(self.repr, PatchRepr::Poly { .. })
    }

    /// `f(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> Result<Vec3> {
        match &self.repr {
            PatchRepr::Poly { uv, .. } => Ok([uv[0].eval_f64(u, v), uv[1].eval_f64(u, v), uv[2].eval_f64(u, v)]),
            PatchRepr::Quadrature => {
                let (x, y) = null_coords(u, v);
                let (g, w) = (&self.data.g, &self.data.omega_hat);
                g.branch1.eval(x)?;
                w.branch1.eval(x)?;
                g.branchm1.eval(y)?;
                w.branchm1.eval(y)?;
                let mut out = [0.0; 3];
                for (i, slot) in out.iter_mut().enumerate() {
                    let a =
                        quadrature::integrate(|t| integrand_at(&g.branch1, &w.branch1, t)[i], 0.0, x, QUADRATURE_TOL);
                    let b =
                        quadrature::integrate(|t| integrand_at(&g.branchm1, &w.branchm1, t)[i], 0.0, y, QUADRATURE_TOL);
                    *slot = a + if i == 0 { -b } else { b };
                }
                Ok(out)
            }
        }
    }

    /// Exact value at a rational point (polynomial patches only).
    pub fn eval_exact(&self, u: &Rational, v: &Rational) -> Option<[Rational; 3]> {
        match &self.repr {
            PatchRepr::Poly { uv, .. } => Some([uv[0].eval(u, v), uv[1].eval(u, v), uv[2].eval(u, v)]),
            PatchRepr::Quadrature => None,
        }
    }

    /// First and second derivatives of `f`: exact for polynomial patches,
    /// otherwise from the integrands (`f_x`, `f_y` are the integrands,
    /// `f_xy = 0`) with central differences for the second order.
    pub fn jet(&self, u: f64, v: f64) -> Result<PatchJet> {
        match &self.repr {
            PatchRepr::Poly { uv, .. } => {
                let d = |p: &BiPoly, a: usize, b: usize| {
                    let mut q = p.clone();
                    for _ in 0..a {
                        q = q.d_first();
                    }
                    for _ in 0..b {
                        q = q.d_second();
                    }
                    q.eval_f64(u, v)
                };
                let comp = |a, b| [d(&uv[0], a, b), d(&uv[1], a, b), d(&uv[2], a, b)];
                Ok(PatchJet { fu: comp(1, 0), fv: comp(0, 1), fuu: comp(2, 0), fuv: comp(1, 1), fvv: comp(0, 2) })
            }
            PatchRepr::Quadrature => {
                let (x, y) = null_coords(u, v);
                let (g, w) = (&self.data.g, &self.data.omega_hat);
                let fx_at = |t: f64| integrand_at(&g.branch1, &w.branch1, t);
                let fy_at = |t: f64| {
                    let a = integrand_at(&g.branchm1, &w.branchm1, t);
                    [-a[0], a[1], a[2]]
                };
                g.branch1.eval(x)?;
                g.branchm1.eval(y)?;
                let h = 1e-5;
                let (fx, fy) = (fx_at(x), fy_at(y));
                let (xp, xm, yp, ym) = (fx_at(x + h), fx_at(x - h), fy_at(y + h), fy_at(y - h));
                let mut jet = PatchJet { fu: [0.0; 3], fv: [0.0; 3], fuu: [0.0; 3], fuv: [0.0; 3], fvv: [0.0; 3] };
                for i in 0..3 {
                    let fxx = (xp[i] - xm[i]) / (2.0 * h);
                    let fyy = (yp[i] - ym[i]) / (2.0 * h);
                    // ∂_u = (∂_x + ∂_y)/2, ∂_v = (∂_x − ∂_y)/2
                    jet.fu[i] = 0.5 * (fx[i] + fy[i]);
                    jet.fv[i] = 0.5 * (fx[i] - fy[i]);
                    jet.fuu[i] = 0.25 * (fxx + fyy);
                    jet.fuv[i] = 0.25 * (fxx - fyy);
                    jet.fvv[i] = 0.25 * (fxx + fyy);
                }
                Ok(jet)
            }
        }
    }

    /// Unit normal from the split data, `ñ = (−g₁+g₂, 1+g₁g₂, g₁+g₂)/(−1+g₁g₂)`.
    pub fn normal(&self, u: f64, v: f64) -> Result<Vec3> {
        let (x, y) = null_coords(u, v);
        let (g1, g2) = (self.data.g.branch1.eval(x)?, self.data.g.branchm1.eval(y)?);
        let d = -1.0 + g1 * g2;
        Ok([(-g1 + g2) / d, (1.0 + g1 * g2) / d, (g1 + g2) / d])
    }

    /// Forms computed from `f` itself: `ν = −G(f_u × f_v)/|·|`,
    /// `L = ⟨f_uu, ν⟩`, `M = ⟨f_uv, ν⟩`, `N = ⟨f_vv, ν⟩`. `None` where `f`
    /// fails to be an immersion.
    pub fn forms_geometric(&self, u: f64, v: f64) -> Result<Option<Forms>> {
        let j = self.jet(u, v)?;
        let c = lorentz_cross(&j.fu, &j.fv);
        let nn = lorentz_inner(&c, &c);
        if !(nn != 0.0 && nn.is_finite()) {
            return Ok(None);
        }
        let s = -1.0 / libm::sqrt(libm::fabs(nn));
        let nu = [c[0] * s, c[1] * s, c[2] * s];
        Ok(Forms::from_metric(
            lorentz_inner(&j.fu, &j.fu),
            lorentz_inner(&j.fuu, &nu),
            lorentz_inner(&j.fuv, &nu),
            lorentz_inner(&j.fvv, &nu),
        ))
    }

    /// Closed-form forms from the data: `e^{2σ} = |(1−g₁g₂)²ω̂₁ω̂₂|`,
    /// `ℓ = −2ω̂₁g₁′`, `n = −2ω̂₂g₂′`, `L = N = (ℓ+n)/4`, `M = (ℓ−n)/4`.
    pub fn forms_analytic(&self, u: f64, v: f64) -> Result<Option<Forms>> {
        let (x, y) = null_coords(u, v);
        let (g, w) = (&self.data.g, &self.data.omega_hat);
        let (g1, g2) = (g.branch1.eval(x)?, g.branchm1.eval(y)?);
        let (w1, w2) = (w.branch1.eval(x)?, w.branchm1.eval(y)?);
        let dg1 = g.branch1.derivative()?.value(x);
        let dg2 = g.branchm1.derivative()?.value(y);
        let k = 1.0 - g1 * g2;
        let coef = -k * k * w1 * w2;
        let (ell, en) = (-2.0 * w1 * dg1, -2.0 * w2 * dg2);
        Ok(Forms::from_metric(coef, 0.25 * (ell + en), 0.25 * (ell - en), 0.25 * (ell + en)))
    }

    /// Analytic forms when `g′` is available, geometric ones otherwise.
    pub fn forms_at(&self, u: f64, v: f64) -> Result<Option<Forms>> {
        match self.forms_analytic(u, v) {
            Err(Error::Unsupported(_)) => self.forms_geometric(u, v),
            other => other,
        }
    }

    /// Weingarten matrix in null coordinates, `[[0, ω̂₂g₂′/Δ], [ω̂₁g₁′/Δ, 0]]`
    /// with `Δ = (−1+g₁g₂)²ω̂₁ω̂₂`.
    pub fn weingarten_null(&self, x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
        let (g, w) = (&self.data.g, &self.data.omega_hat);
        let (g1, g2) = (g.branch1.eval(x)?, g.branchm1.eval(y)?);
        let (w1, w2) = (w.branch1.eval(x)?, w.branchm1.eval(y)?);
        let dg1 = g.branch1.derivative()?.value(x);
        let dg2 = g.branchm1.derivative()?.value(y);
        let k = -1.0 + g1 * g2;
        let delta = k * k * w1 * w2;
        Ok([[0.0, w2 * dg2 / delta], [w1 * dg1 / delta, 0.0]])
    }

    /// The exact `Q̂` when the data are polynomial.
    pub fn hopf(&self) -> Result<ParaFunction> {
        hopf_differential(&self.data)
    }
}

/// Evaluates the forms of `patch` on every node of `grid`, row by row in
/// `v` with `u` fastest. Nodes where the patch is not an immersion are
/// masked.
pub fn fundamental_forms(patch: &ImmersionPatch, grid: &GridSpec) -> Result<SurfaceChart> {
    let mut nodes = Vec::with_capacity(grid.len());
    for (u, v) in grid.nodes() {
        nodes.push(patch.forms_at(u, v)?.map(NodeForms::from));
    }
    Ok(chart_from_nodes(patch, grid, nodes))
}

/// Assembles a chart from node forms computed elsewhere (for example in
/// parallel) in [`GridSpec::nodes`] order.
pub fn chart_from_nodes(patch: &ImmersionPatch, grid: &GridSpec, nodes: Vec<Option<NodeForms>>) -> SurfaceChart {
    let hopf = hopf_differential(&patch.data).ok().filter(|q| q.is_poly());
    SurfaceChart { grid: *grid, nodes, provenance: Provenance::Generated, hopf }
}

/// The split data of `g = c·z^k`.
pub fn monomial(c: ParaComplex<Rational>, k: usize) -> ParaFunction {
    ParaFunction::z_pow(k, c)
}

/// `ω̂ ≡ 1`.
pub fn unit_omega() -> ParaFunction {
    ParaFunction::constant(&ParaComplex::real(Rational::one()))
}

/// A polynomial branch from integer coefficients.
pub fn int_branch(coeffs: &[i64]) -> RealBranch {
    RealBranch::poly(Polynomial::from_i64(coeffs))
}
