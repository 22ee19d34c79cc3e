//! Space-like zero mean curvature surfaces, for comparison with the
//! time-like case.
//!
//! For holomorphic data `(g, ω = ω̂ dz)`, `z = u + iv`,
//! `f = Re ∫₀ᶻ (1+g², i(1−g²), 2g) ω` in `ℝ³₁` with signature `(++−)`.
//! Then `ds² = (1−|g|²)²|ω̂|²(du² + dv²)`, the unit time-like normal is
//! `ν = (2 Re g, 2 Im g, 1+|g|²)/(1−|g|²)` and
//! `(L − N) − 2iM = −4ω̂g′`. Umbilics are isolated, there are no
//! quasi-umbilics, and the principal line field has index `−m/2` at a zero
//! of order `m` of the Hopf differential.

use alloc::vec::Vec;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::flow::{winding_index, FlowField, WindingResult};
use crate::geometry::{GridSpec, PointClass, PointKind};
use crate::poly::{rat, rint, to_f64, BiPoly, Rational};
use crate::weierstrass::{lorentz_cross, lorentz_inner, Vec3};

pub type ComplexRational = Complex<Rational>;

/// Polynomial data with complex rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFunctionData {
    pub g: Vec<ComplexRational>,
    pub omega_hat: Vec<ComplexRational>,
}

fn cr(re: Rational, im: Rational) -> ComplexRational {
    Complex::new(re, im)
}

fn czero() -> ComplexRational {
    cr(Rational::zero(), Rational::zero())
}

fn trim(mut p: Vec<ComplexRational>) -> Vec<ComplexRational> {
    while p.last().is_some_and(|c| c.re.is_zero() && c.im.is_zero()) {
        p.pop();
    }
    p
}

fn cmul(a: &[ComplexRational], b: &[ComplexRational]) -> Vec<ComplexRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![czero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    trim(out)
}

fn cadd(a: &[ComplexRational], b: &[ComplexRational]) -> Vec<ComplexRational> {
    let n = a.len().max(b.len());
    trim((0..n).map(|k| a.get(k).cloned().unwrap_or_else(czero) + b.get(k).cloned().unwrap_or_else(czero)).collect())
}

fn cscale(a: &[ComplexRational], c: &ComplexRational) -> Vec<ComplexRational> {
    trim(a.iter().map(|x| x * c).collect())
}

fn cderiv(a: &[ComplexRational]) -> Vec<ComplexRational> {
    trim(a.iter().enumerate().skip(1).map(|(k, c)| c * cr(rint(k as i64), Rational::zero())).collect())
}

fn cantideriv(a: &[ComplexRational]) -> Vec<ComplexRational> {
    let mut out = alloc::vec![czero()];
    out.extend(a.iter().enumerate().map(|(k, c)| c * cr(rat(1, k as i64 + 1), Rational::zero())));
    trim(out)
}

/// Evaluates a complex polynomial at a double-precision point.
pub fn ceval(a: &[ComplexRational], z: Complex<f64>) -> Complex<f64> {
    let mut acc = Complex::new(0.0, 0.0);
    for c in a.iter().rev() {
        acc = acc * z + Complex::new(to_f64(&c.re), to_f64(&c.im));
    }
    acc
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rint((n - i) as i64) / rint((i + 1) as i64);
    }
    acc
}

/// `Re Σ c_k (u + iv)^k` as a polynomial in `(u, v)`.
pub fn real_part_uv(coeffs: &[ComplexRational]) -> BiPoly {
    let mut acc = BiPoly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        let k = k as u32;
        for i in 0..=k {
            // (iv)^i = i^i v^i; Re(c·w) = Re c Re w − Im c Im w
            let coef = match i % 4 {
                0 => c.re.clone(),
                1 => -c.im.clone(),
                2 => -c.re.clone(),
                _ => c.im.clone(),
            };
            if coef.is_zero() {
                continue;
            }
            acc = acc.add(&BiPoly::term(binomial(k, i) * coef, k - i, i));
        }
    }
    acc
}

impl ComplexFunctionData {
    /// `g = −z^{m+1}/(m+1)`, `ω = dz`, so that `−ω̂g′ = z^m`.
    pub fn hopf_order(m: usize) -> Self {
        let mut g = alloc::vec![czero(); m + 2];
        g[m + 1] = cr(rat(-1, m as i64 + 1), Rational::zero());
        ComplexFunctionData { g, omega_hat: alloc::vec![cr(Rational::one(), Rational::zero())] }
    }

    /// `−ω̂ g′`.
    pub fn hopf_differential(&self) -> Vec<ComplexRational> {
        cscale(&cmul(&self.omega_hat, &cderiv(&self.g)), &cr(rint(-1), Rational::zero()))
    }
}

/// A space-like patch with exact polynomial components and their
/// derivatives up to order two.
#[derive(Clone, Debug)]
pub struct SpacelikePatch {
    pub data: ComplexFunctionData,
    pub uv: [BiPoly; 3],
    derivs: [[BiPoly; 3]; 5],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacelikeForms {
    pub sigma: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl SpacelikeForms {
    /// `(L − N) − 2iM`.
    pub fn hopf(&self) -> Complex<f64> {
        Complex::new(self.l - self.n, -2.0 * self.m)
    }

    /// `H = ½e^{−2σ}(L + N)`.
    pub fn mean_curvature(&self) -> f64 {
        0.5 * libm::exp(-2.0 * self.sigma) * (self.l + self.n)
    }

    /// Unit principal direction of the larger principal curvature: the
    /// eigenvector of `½[[L−N, 2M], [2M, N−L]]` at angle
    /// `½ atan2(2M, L−N)`.
    pub fn principal_line(&self) -> [f64; 2] {
        let t = 0.5 * libm::atan2(2.0 * self.m, self.l - self.n);
        [libm::cos(t), libm::sin(t)]
    }
}

/// Builds `f = Re ∫ (1+g², i(1−g²), 2g) ω` by termwise integration.
pub fn generate_kobayashi(data: &ComplexFunctionData) -> Result<SpacelikePatch> {
    let one = alloc::vec![cr(Rational::one(), Rational::zero())];
    let g2 = cmul(&data.g, &data.g);
    let i = cr(Rational::zero(), Rational::one());
    let minus_g2 = cscale(&g2, &cr(rint(-1), Rational::zero()));
    let integrands = [
        cmul(&cadd(&one, &g2), &data.omega_hat),
        cscale(&cmul(&cadd(&one, &minus_g2), &data.omega_hat), &i),
        cscale(&cmul(&data.g, &data.omega_hat), &cr(rint(2), Rational::zero())),
    ];
    let uv: [BiPoly; 3] = [
        real_part_uv(&cantideriv(&integrands[0])),
        real_part_uv(&cantideriv(&integrands[1])),
        real_part_uv(&cantideriv(&integrands[2])),
    ];
    let d = |f: &dyn Fn(&BiPoly) -> BiPoly| [f(&uv[0]), f(&uv[1]), f(&uv[2])];
    let derivs = [
        d(&|p| p.d_first()),
        d(&|p| p.d_second()),
        d(&|p| p.d_first().d_first()),
        d(&|p| p.d_first().d_second()),
        d(&|p| p.d_second().d_second()),
    ];
    Ok(SpacelikePatch { data: data.clone(), uv, derivs })
}

impl SpacelikePatch {
    pub fn eval(&self, u: f64, v: f64) -> Vec3 {
        [self.uv[0].eval_f64(u, v), self.uv[1].eval_f64(u, v), self.uv[2].eval_f64(u, v)]
    }

    fn d(&self, k: usize, u: f64, v: f64) -> Vec3 {
        let p = &self.derivs[k];
        [p[0].eval_f64(u, v), p[1].eval_f64(u, v), p[2].eval_f64(u, v)]
    }

    /// `ν = (2 Re g, 2 Im g, 1+|g|²)/(1−|g|²)`.
    pub fn normal(&self, u: f64, v: f64) -> Vec3 {
        let g = ceval(&self.data.g, Complex::new(u, v));
        let n = g.norm_sqr();
        let k = 1.0 / (1.0 - n);
        [2.0 * g.re * k, 2.0 * g.im * k, (1.0 + n) * k]
    }

    /// Forms from `f` itself with the normal oriented like [`Self::normal`].
    /// `None` where the surface is not space-like.
    pub fn forms_at(&self, u: f64, v: f64) -> Option<SpacelikeForms> {
        let (fu, fv) = (self.d(0, u, v), self.d(1, u, v));
        let e = lorentz_inner(&fu, &fu);
        if e.is_nan() || e <= 0.0 {
            return None;
        }
        let c = lorentz_cross(&fu, &fv);
        let nn = lorentz_inner(&c, &c);
        if nn.is_nan() || nn >= 0.0 {
            return None;
        }
        let mut nu = c.map(|x| x / libm::sqrt(-nn));
        if lorentz_inner(&nu, &self.normal(u, v)) > 0.0 {
            nu = nu.map(|x| -x);
        }
        // both are future-pointing unit time-like vectors: ⟨ν, ν̃⟩ = −1
        let (fuu, fuv, fvv) = (self.d(2, u, v), self.d(3, u, v), self.d(4, u, v));
        Some(SpacelikeForms {
            sigma: 0.5 * libm::log(e),
            l: lorentz_inner(&fuu, &nu),
            m: lorentz_inner(&fuv, &nu),
            n: lorentz_inner(&fvv, &nu),
        })
    }

    pub fn forms_on_grid(&self, grid: &GridSpec) -> Vec<Option<SpacelikeForms>> {
        grid.nodes().map(|(u, v)| self.forms_at(u, v)).collect()
    }

    /// The principal line field around `o`.
    pub fn principal_line_field(&self) -> FlowField {
        let p = self.clone();
        FlowField::line(move |u, v| match p.forms_at(u, v) {
            Some(f) if f.hopf().norm_sqr() > 0.0 => f.principal_line(),
            _ => [0.0, 0.0],
        })
    }
}

/// Classifies a space-like node from its shape operator
/// `e^{−2σ}[[L, M], [M, N]]`. The discriminant `e^{−4σ}((L−N)² + 4M²)` is
/// never negative, and it vanishes only where the operator is scalar.
pub fn classify_spacelike(f: &SpacelikeForms) -> PointClass {
    let k = libm::exp(-2.0 * f.sigma);
    let (a, b) = (f.l - f.n, 2.0 * f.m);
    let d = k * k * (a * a + b * b);
    let tau = 1e-9 * (1.0 + libm::fabs(f.l) + libm::fabs(f.n) + libm::fabs(f.m));
    let h = f.mean_curvature();
    let r = 0.5 * k * libm::hypot(a, b);
    let scalar = libm::fabs(a) <= tau && libm::fabs(b) <= tau;
    let marginal = scalar && (a != 0.0 || b != 0.0);
    if scalar {
        return PointClass {
            kind: PointKind::Umbilic,
            d: 0.0,
            dirs: Vec::new(),
            eigenvalues: Some((h, h)),
            complex_pair: false,
            marginal,
        };
    }
    if d <= tau * tau * k * k {
        return PointClass {
            kind: PointKind::QuasiUmbilic,
            d: 0.0,
            dirs: alloc::vec![f.principal_line()],
            eigenvalues: Some((h, h)),
            complex_pair: false,
            marginal: true,
        };
    }
    let [c, s] = f.principal_line();
    let mut e2 = [-s, c];
    if e2[0] < 0.0 || (e2[0] == 0.0 && e2[1] < 0.0) {
        e2 = [s, -c];
    }
    let mut e1 = [c, s];
    if e1[0] < 0.0 || (e1[0] == 0.0 && e1[1] < 0.0) {
        e1 = [-c, -s];
    }
    PointClass {
        kind: PointKind::Positive,
        d,
        dirs: alloc::vec![e1, e2],
        eigenvalues: Some((h + r, h - r)),
        complex_pair: false,
        marginal: false,
    }
}

/// Measured index of the principal line field of the order-`m` example at
/// `o`; the expected value is `−m/2`.
pub fn spacelike_index(m: usize, radius: f64, samples: usize) -> Result<WindingResult> {
    if m == 0 {
        return Err(Error::Invalid("order m must be at least 1".into()));
    }
    let patch = generate_kobayashi(&ComplexFunctionData::hopf_order(m))?;
    winding_index(&patch.principal_line_field(), radius, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{DEFAULT_RADIUS, DEFAULT_SAMPLES};

    #[test]
    fn spacelike_nodes_are_positive_or_umbilic() {
        let p = generate_kobayashi(&ComplexFunctionData::hopf_order(2)).unwrap();
        let grid = GridSpec::square(0.5, 17);
        let mut umbilic = 0;
        for (k, f) in p.forms_on_grid(&grid).into_iter().enumerate() {
            let c = classify_spacelike(&f.unwrap());
            match c.kind {
                PointKind::Umbilic => {
                    umbilic += 1;
                    assert_eq!(grid.coords(k), (0.0, 0.0));
                }
                PointKind::Positive => {
                    let (a, b) = (c.dirs[0], c.dirs[1]);
                    assert!((a[0] * b[0] + a[1] * b[1]).abs() < 1e-12);
                }
                k => panic!("unexpected {k:?}"),
            }
        }
        assert_eq!(umbilic, 1);
    }

    const PTS: [(f64, f64); 4] = [(0.1, 0.05), (-0.2, 0.13), (0.3, -0.27), (-0.05, -0.31)];

    fn patches() -> Vec<SpacelikePatch> {
        let mut v: Vec<SpacelikePatch> =
            (1..4).map(|m| generate_kobayashi(&ComplexFunctionData::hopf_order(m)).unwrap()).collect();
        v.push(
            generate_kobayashi(&ComplexFunctionData {
                g: alloc::vec![czero(), cr(rint(1), rint(2)), cr(rat(1, 2), rint(-1))],
                omega_hat: alloc::vec![cr(rint(2), rint(1)), cr(rint(0), rint(1))],
            })
            .unwrap(),
        );
        v
    }

    #[test]
    fn complex_unit() {
        let i = cr(Rational::zero(), Rational::one());
        assert_eq!(&i * &i, cr(rint(-1), Rational::zero()));
    }

    #[test]
    fn hopf_of_order_m_example() {
        for m in 1..5 {
            let q = ComplexFunctionData::hopf_order(m).hopf_differential();
            assert_eq!(q.len(), m + 1);
            assert_eq!(q[m], cr(rint(1), Rational::zero()));
        }
        let q = ComplexFunctionData::hopf_order(1).hopf_differential();
        assert_eq!(ceval(&q, Complex::new(1.0, 0.0)), Complex::new(1.0, 0.0));
    }

    #[test]
    fn zero_gauss_map_gives_plane() {
        let d = ComplexFunctionData { g: Vec::new(), omega_hat: alloc::vec![cr(rint(1), Rational::zero())] };
        let p = generate_kobayashi(&d).unwrap();
        // f = (u, −v, 0)
        assert_eq!(p.eval(0.3, -0.2), [0.3, 0.2, 0.0]);
        assert!(d.hopf_differential().is_empty());
        let f = p.forms_at(0.1, 0.4).unwrap();
        assert_eq!((f.l, f.m, f.n), (0.0, 0.0, 0.0));
    }

    #[test]
    fn isothermal_and_maximal() {
        for p in patches() {
            for (u, v) in PTS {
                let (fu, fv) = (p.d(0, u, v), p.d(1, u, v));
                let (e, f, g) = (lorentz_inner(&fu, &fu), lorentz_inner(&fu, &fv), lorentz_inner(&fv, &fv));
                assert!((e - g).abs() < 1e-10 && f.abs() < 1e-10);
                let gz = ceval(&p.data.g, Complex::new(u, v));
                let w = ceval(&p.data.omega_hat, Complex::new(u, v));
                let expect = (1.0 - gz.norm_sqr()).powi(2) * w.norm_sqr();
                assert!((e - expect).abs() < 1e-10);
                let nu = p.normal(u, v);
                assert!((lorentz_inner(&nu, &nu) + 1.0).abs() < 1e-10);
                assert!(lorentz_inner(&nu, &fu).abs() < 1e-10 && lorentz_inner(&nu, &fv).abs() < 1e-10);
                assert!(p.forms_at(u, v).unwrap().mean_curvature().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn hopf_combination_is_minus_four_omega_dg() {
        for p in patches() {
            let q = p.data.hopf_differential();
            for (u, v) in PTS {
                let f = p.forms_at(u, v).unwrap();
                let expect = ceval(&q, Complex::new(u, v)) * 4.0;
                assert!((f.hopf() - expect).norm_sqr() < 1e-20, "{:?} vs {expect:?}", f.hopf());
            }
        }
    }

    #[test]
    fn cauchy_riemann_and_codazzi() {
        let h = 1e-4;
        for p in patches() {
            let at = |u: f64, v: f64| p.forms_at(u, v).unwrap();
            for (u, v) in PTS {
                let d = |f: &dyn Fn(SpacelikeForms) -> f64, du: f64, dv: f64| {
                    (f(at(u + du, v + dv)) - f(at(u - du, v - dv))) / (2.0 * h)
                };
                let (a_u, a_v) = (d(&|f| f.hopf().re, h, 0.0), d(&|f| f.hopf().re, 0.0, h));
                let (b_u, b_v) = (d(&|f| f.hopf().im, h, 0.0), d(&|f| f.hopf().im, 0.0, h));
                assert!((a_u - b_v).abs() <= 1e-6 && (a_v + b_u).abs() <= 1e-6);
                let c = at(u, v);
                let res = d(&|f| f.l, 0.0, h) - d(&|f| f.m, h, 0.0) - d(&|f| f.sigma, 0.0, h) * (c.l + c.n);
                assert!(res.abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn umbilics_are_isolated() {
        let grid = GridSpec::square(0.5, 33);
        for m in 1..4 {
            let p = generate_kobayashi(&ComplexFunctionData::hopf_order(m)).unwrap();
            for (k, f) in p.forms_on_grid(&grid).iter().enumerate() {
                let (u, v) = grid.coords(k);
                let q = f.unwrap().hopf().norm_sqr();
                if u == 0.0 && v == 0.0 {
                    assert_eq!(q, 0.0);
                } else {
                    assert!(q > 0.0);
                }
            }
        }
    }

    #[test]
    fn index_law() {
        for (m, expect) in [(1, -0.5), (2, -1.0), (3, -1.5)] {
            let w = spacelike_index(m, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
            assert_eq!(w.index, expect);
            let half = spacelike_index(m, DEFAULT_RADIUS / 2.0, DEFAULT_SAMPLES).unwrap();
            assert_eq!(half.index, expect);
        }
    }
}
