//! Para-holomorphic functions in split form.
//!
//! A para-holomorphic `h(z)`, `z = u + jv`, is stored as two real functions of
//! one variable:
//!
//! ```text
//! h(z) = ε₁·φ₁(x) + ε₋₁·φ₋₁(y),    x = (u+v)/2,  y = (u−v)/2,
//! ```
//!
//! where `φ_s = Π_s ∘ h`. Branch arguments always use these half-sum null
//! coordinates. Data written in the full-sum convention `φ₁(u+v)`,
//! `φ₋₁(u−v)` (the wedge `φ₁ ∨ φ₂`) is converted on construction by the
//! argument rescaling `t ↦ 2t`.
//!
//! With this convention `z` itself has branches `(2x, 2y)`, products act
//! branch-wise, `N²(h) = φ₁(x)·φ₋₁(y)`, and `dh/dz` has branches `φ_s′/2`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::paracomplex::ParaComplex;
use crate::poly::{rat, rint, to_f64, Polynomial, Rational};

/// Default jet cap.
pub const DEFAULT_JET_CAP: usize = 16;

/// Closed interval of admissible branch arguments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    fn scaled(&self, lambda: f64) -> Interval {
        let (a, b) = (self.lo / lambda, self.hi / lambda);
        if lambda > 0.0 {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

/// `Σ_k c_k t^k · exp(−a/t²)` with `a > 0` and integer (possibly negative)
/// exponents `k`. Every jet at `t = 0` vanishes.
#[derive(Clone, PartialEq)]
pub struct FlatBranch {
    pub laurent: BTreeMap<i32, Rational>,
    pub a: Rational,
}

impl FlatBranch {
    pub fn new(laurent: BTreeMap<i32, Rational>, a: Rational) -> Self {
        let laurent = laurent.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FlatBranch { laurent, a }
    }

    fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let e = libm::exp(-to_f64(&self.a) / (t * t));
        if e == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for (k, c) in &self.laurent {
            s += to_f64(c) * libm::pow(t, *k as f64);
        }
        s * e
    }

    /// d/dt (c t^k e^{−a/t²}) = c (k t^{k−1} + 2a t^{k−3}) e^{−a/t²}.
    fn derivative(&self) -> FlatBranch {
        let mut out: BTreeMap<i32, Rational> = BTreeMap::new();
        let two_a = &self.a * rint(2);
        for (k, c) in &self.laurent {
            if *k != 0 {
                *out.entry(k - 1).or_insert_with(Rational::zero) += c * rint(*k as i64);
            }
            *out.entry(k - 3).or_insert_with(Rational::zero) += c * &two_a;
        }
        FlatBranch::new(out, self.a.clone())
    }

    fn mul_poly(&self, p: &Polynomial) -> FlatBranch {
        let mut out: BTreeMap<i32, Rational> = BTreeMap::new();
        for (k, c) in &self.laurent {
            for (i, d) in p.coeffs().iter().enumerate() {
                *out.entry(k + i as i32).or_insert_with(Rational::zero) += c * d;
            }
        }
        FlatBranch::new(out, self.a.clone())
    }

    fn mul(&self, other: &FlatBranch) -> FlatBranch {
        let mut out: BTreeMap<i32, Rational> = BTreeMap::new();
        for (k, c) in &self.laurent {
            for (i, d) in &other.laurent {
                *out.entry(k + i).or_insert_with(Rational::zero) += c * d;
            }
        }
        FlatBranch::new(out, &self.a + &other.a)
    }

    /// `φ(λt)`.
    fn rescale_arg(&self, lambda: &Rational) -> FlatBranch {
        let laurent = self
            .laurent
            .iter()
            .map(|(k, c)| (*k, c * num_traits::pow::pow(lambda.clone(), k.unsigned_abs() as usize).pow(k.signum())))
            .collect();
        FlatBranch::new(laurent, &self.a / (lambda * lambda))
    }
}

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type JetFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A branch given by closures: an evaluator and, optionally, a provider of
/// the derivatives `φ^{(k)}(0)` and of the derivative branch.
#[derive(Clone)]
pub struct CallableBranch {
    pub name: String,
    pub eval: EvalFn,
    pub jets: Option<JetFn>,
    pub derivative: Option<Arc<RealBranch>>,
}

#[derive(Clone)]
pub enum BranchKind {
    Poly(Polynomial),
    Flat(FlatBranch),
    Callable(CallableBranch),
}

/// One real branch `φ_s(t)` of a para-holomorphic function.
#[derive(Clone)]
pub struct RealBranch {
    pub kind: BranchKind,
    pub domain: Interval,
}

/// Jets `φ^{(k)}(0)`, `k = 0..cap`.
#[derive(Clone, Debug, PartialEq)]
pub enum Jets {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

fn factorial(k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 2..=k {
        acc *= rint(i as i64);
    }
    acc
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl RealBranch {
    pub fn poly(p: Polynomial) -> Self {
        RealBranch { kind: BranchKind::Poly(p), domain: Interval::REAL_LINE }
    }

    pub fn constant(c: Rational) -> Self {
        Self::poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::poly(Polynomial::zero())
    }

    /// `exp(−a/t²)`, the flat function.
    pub fn exp_flat(a: Rational) -> Self {
        let mut l = BTreeMap::new();
        l.insert(0, Rational::one());
        RealBranch { kind: BranchKind::Flat(FlatBranch::new(l, a)), domain: Interval::REAL_LINE }
    }

    pub fn callable(
        name: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        jets: Option<Box<dyn Fn(usize) -> f64 + Send + Sync>>,
    ) -> Self {
        RealBranch {
            kind: BranchKind::Callable(CallableBranch {
                name: name.into(),
                eval: Arc::new(eval),
                jets: jets.map(Arc::from),
                derivative: None,
            }),
            domain: Interval::REAL_LINE,
        }
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_derivative(mut self, d: RealBranch) -> Self {
        if let BranchKind::Callable(c) = &mut self.kind {
            c.derivative = Some(Arc::new(d));
        }
        self
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match &self.kind {
            BranchKind::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_poly(&self) -> bool {
        self.as_poly().is_some()
    }

    /// Evaluates without a domain check.
    pub fn value(&self, t: f64) -> f64 {
        match &self.kind {
            BranchKind::Poly(p) => p.eval_f64(t),
            BranchKind::Flat(f) => f.eval(t),
            BranchKind::Callable(c) => (c.eval)(t),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain { value: t, lo: self.domain.lo, hi: self.domain.hi });
        }
        Ok(self.value(t))
    }

    pub fn eval_exact(&self, t: &Rational) -> Option<Rational> {
        self.as_poly().map(|p| p.eval(t))
    }

    pub fn derivative(&self) -> Result<RealBranch> {
        let kind = match &self.kind {
            BranchKind::Poly(p) => BranchKind::Poly(p.derivative()),
            BranchKind::Flat(f) => BranchKind::Flat(f.derivative()),
            BranchKind::Callable(c) => match &c.derivative {
                Some(d) => return Ok((**d).clone().with_domain(self.domain)),
                None => {
                    return Err(Error::Unsupported(format!(
                        "derivative of callable branch `{}` without derivative provider",
                        c.name
                    )))
                }
            },
        };
        Ok(RealBranch { kind, domain: self.domain })
    }

    pub fn jets(&self, cap: usize) -> Result<Jets> {
        match &self.kind {
            BranchKind::Poly(p) => Ok(Jets::Exact((0..cap).map(|k| p.coeff(k) * factorial(k)).collect())),
            BranchKind::Flat(_) => Ok(Jets::Exact((0..cap).map(|_| Rational::zero()).collect())),
            BranchKind::Callable(c) => match &c.jets {
                Some(j) => Ok(Jets::Float((0..cap).map(|k| j(k)).collect())),
                None => Err(Error::Unsupported(format!("branch `{}` has no jet provider", c.name))),
            },
        }
    }

    pub fn scale(&self, k: &Rational) -> RealBranch {
        let kind = match &self.kind {
            BranchKind::Poly(p) => BranchKind::Poly(p.scale(k)),
            BranchKind::Flat(f) => {
                BranchKind::Flat(FlatBranch::new(f.laurent.iter().map(|(e, c)| (*e, c * k)).collect(), f.a.clone()))
            }
            BranchKind::Callable(_) => {
                return self.mul(&RealBranch::constant(k.clone()));
            }
        };
        RealBranch { kind, domain: self.domain }
    }

    /// `φ(λt)` for a non-zero rational `λ`.
    pub fn rescale_arg(&self, lambda: &Rational) -> RealBranch {
        let lf = to_f64(lambda);
        let domain = self.domain.scaled(lf);
        let kind = match &self.kind {
            BranchKind::Poly(p) => BranchKind::Poly(p.rescale_arg(lambda)),
            BranchKind::Flat(f) => BranchKind::Flat(f.rescale_arg(lambda)),
            BranchKind::Callable(c) => {
                let ev = c.eval.clone();
                let jets = c.jets.clone().map(|j| Arc::new(move |k: usize| j(k) * libm::pow(lf, k as f64)) as JetFn);
                BranchKind::Callable(CallableBranch {
                    name: format!("{}(λt)", c.name),
                    eval: Arc::new(move |t| ev(lf * t)),
                    jets,
                    derivative: c.derivative.as_ref().map(|d| Arc::new(d.rescale_arg(lambda).scale(lambda))),
                })
            }
        };
        RealBranch { kind, domain }
    }

    pub fn mul(&self, other: &RealBranch) -> RealBranch {
        use BranchKind::*;
        let domain = self.domain.intersect(&other.domain);
        let kind = match (&self.kind, &other.kind) {
            (Poly(p), Poly(q)) => Poly(p.mul(q)),
            (Flat(f), Poly(p)) | (Poly(p), Flat(f)) => Flat(f.mul_poly(p)),
            (Flat(f), Flat(g)) => Flat(f.mul(g)),
            _ => return self.combine(other, "·", |a, b| a * b, true),
        };
        RealBranch { kind, domain }
    }

    pub fn add(&self, other: &RealBranch) -> RealBranch {
        use BranchKind::*;
        let domain = self.domain.intersect(&other.domain);
        let kind = match (&self.kind, &other.kind) {
            (Poly(p), Poly(q)) => Poly(p.add(q)),
            (Flat(f), Flat(g)) if f.a == g.a => {
                let mut l = f.laurent.clone();
                for (k, c) in &g.laurent {
                    *l.entry(*k).or_insert_with(Rational::zero) += c;
                }
                Flat(FlatBranch::new(l, f.a.clone()))
            }
            _ => return self.combine(other, "+", |a, b| a + b, false),
        };
        RealBranch { kind, domain }
    }

    fn combine(&self, other: &RealBranch, op: &str, f: fn(f64, f64) -> f64, product: bool) -> RealBranch {
        let (a, b) = (self.clone(), other.clone());
        let (ja, jb) = (self.float_jet_fn(), other.float_jet_fn());
        let jets: Option<JetFn> = match (ja, jb) {
            (Some(ja), Some(jb)) => Some(if product {
                // Leibniz rule
                Arc::new(move |k: usize| (0..=k).map(|i| binomial(k, i) * ja(i) * jb(k - i)).sum())
            } else {
                Arc::new(move |k: usize| ja(k) + jb(k))
            }),
            _ => None,
        };
        let (a2, b2) = (a.clone(), b.clone());
        RealBranch {
            kind: BranchKind::Callable(CallableBranch {
                name: format!("({} {op} {})", a.name(), b.name()),
                eval: Arc::new(move |t| f(a2.value(t), b2.value(t))),
                jets,
                derivative: None,
            }),
            domain: self.domain.intersect(&other.domain),
        }
    }

    fn float_jet_fn(&self) -> Option<JetFn> {
        match &self.kind {
            BranchKind::Poly(p) => {
                let p = p.clone();
                Some(Arc::new(move |k| to_f64(&(p.coeff(k) * factorial(k)))))
            }
            BranchKind::Flat(_) => Some(Arc::new(|_| 0.0)),
            BranchKind::Callable(c) => c.jets.clone(),
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            BranchKind::Poly(p) => format!("{p:?}"),
            BranchKind::Flat(f) => format!("flat(a={})", f.a),
            BranchKind::Callable(c) => c.name.clone(),
        }
    }

    /// Order of vanishing at `t = 0` and the leading Taylor coefficient.
    pub fn order(&self, cap: usize) -> Result<BranchOrder> {
        if let BranchKind::Poly(p) = &self.kind {
            return Ok(match p.lowest_order() {
                None => BranchOrder { order: SplitOrder::Infinite, coeff: 0.0, exact_coeff: Some(Rational::zero()) },
                Some(m) if m < cap => {
                    let c = p.coeff(m);
                    BranchOrder { order: SplitOrder::Finite(m), coeff: to_f64(&c), exact_coeff: Some(c) }
                }
                Some(_) => BranchOrder { order: SplitOrder::AtLeast(cap), coeff: 0.0, exact_coeff: None },
            });
        }
        match self.jets(cap)? {
            Jets::Exact(j) => Ok(match j.iter().position(|c| !c.is_zero()) {
                Some(m) => {
                    let c = &j[m] / factorial(m);
                    BranchOrder { order: SplitOrder::Finite(m), coeff: to_f64(&c), exact_coeff: Some(c) }
                }
                None => BranchOrder { order: SplitOrder::AtLeast(cap), coeff: 0.0, exact_coeff: None },
            }),
            Jets::Float(j) => Ok(match first_nonvanishing(&j) {
                Some(m) => {
                    BranchOrder { order: SplitOrder::Finite(m), coeff: j[m] / to_f64(&factorial(m)), exact_coeff: None }
                }
                None => BranchOrder { order: SplitOrder::AtLeast(cap), coeff: 0.0, exact_coeff: None },
            }),
        }
    }

    /// `ψ(t) = φ(t)/t^m` for a branch of finite order `m`.
    pub fn psi(&self, m: usize, leading: f64) -> RealBranch {
        match &self.kind {
            BranchKind::Poly(p) => RealBranch { kind: BranchKind::Poly(p.divide_by_power(m)), domain: self.domain },
            _ => {
                let phi = self.clone();
                RealBranch::callable(
                    "psi",
                    move |t| if t == 0.0 { leading } else { phi.value(t) / libm::pow(t, m as f64) },
                    None,
                )
                .with_domain(self.domain)
            }
        }
    }
}

impl fmt::Debug for RealBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Index of the first jet above the round-off threshold
/// `1e−9·(1 + max lower jet magnitude)`.
pub fn first_nonvanishing(jets: &[f64]) -> Option<usize> {
    let mut lower_max: f64 = 0.0;
    for (k, j) in jets.iter().enumerate() {
        if libm::fabs(*j) > 1e-9 * (1.0 + lower_max) {
            return Some(k);
        }
        lower_max = lower_max.max(libm::fabs(*j));
    }
    None
}

/// Order of vanishing of one branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitOrder {
    Finite(usize),
    /// The branch vanishes identically (known exactly).
    Infinite,
    /// Every jet below the cap vanishes; the order is at least the cap and
    /// may be infinite.
    AtLeast(usize),
}

impl SplitOrder {
    pub fn finite(&self) -> Option<usize> {
        match self {
            SplitOrder::Finite(m) => Some(*m),
            _ => None,
        }
    }
}

impl fmt::Display for SplitOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitOrder::Finite(m) => write!(f, "{m}"),
            SplitOrder::Infinite => write!(f, "inf"),
            SplitOrder::AtLeast(c) => write!(f, ">={c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchOrder {
    pub order: SplitOrder,
    /// `c_s = φ_s^{(m_s)}(0)/m_s!`, zero when the order is not finite.
    pub coeff: f64,
    pub exact_coeff: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitOrders {
    pub branch1: BranchOrder,
    pub branchm1: BranchOrder,
}

impl SplitOrders {
    pub fn get(&self, s: i8) -> &BranchOrder {
        if s > 0 {
            &self.branch1
        } else {
            &self.branchm1
        }
    }
}

/// Leading data of `Q̂ = ε₁ x^{m₁}ψ₁(x) + ε₋₁ y^{m₋₁}ψ₋₁(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub m1: usize,
    pub m_1: usize,
    pub psi1_at_0: f64,
    pub psim1_at_0: f64,
    pub degenerate: bool,
}

impl NormalForm {
    pub fn psi_product(&self) -> f64 {
        self.psi1_at_0 * self.psim1_at_0
    }

    /// `N²(R(0)) = 2^{−2m}ψ₁(0)ψ₋₁(0)` for non-degenerate data.
    pub fn n2_leading(&self) -> Option<f64> {
        (!self.degenerate).then(|| self.psi_product() / libm::pow(4.0, self.m1 as f64))
    }
}

/// A para-holomorphic function `ε₁φ₁(x) + ε₋₁φ₋₁(y)` (half-sum convention).
#[derive(Clone, Debug)]
pub struct ParaFunction {
    pub branch1: RealBranch,
    pub branchm1: RealBranch,
}

impl ParaFunction {
    pub fn new(branch1: RealBranch, branchm1: RealBranch) -> Self {
        ParaFunction { branch1, branchm1 }
    }

    /// `φ₁ ∨ φ₂ (u,v) = ε₁φ₁(u+v) + ε₋₁φ₂(u−v)`, given in the full-sum
    /// convention and stored with half-sum arguments.
    pub fn wedge(phi1: RealBranch, phi2: RealBranch) -> Self {
        let two = rint(2);
        ParaFunction { branch1: phi1.rescale_arg(&two), branchm1: phi2.rescale_arg(&two) }
    }

    pub fn constant(c: &ParaComplex<Rational>) -> Self {
        ParaFunction { branch1: RealBranch::constant(c.pi(1)), branchm1: RealBranch::constant(c.pi(-1)) }
    }

    pub fn zero() -> Self {
        ParaFunction { branch1: RealBranch::zero(), branchm1: RealBranch::zero() }
    }

    pub fn identity() -> Self {
        Self::from_z_poly(&[ParaComplex::real(Rational::zero()), ParaComplex::real(Rational::one())])
    }

    /// `h(z) = Σ c_k z^k`: since `Π_s(z) = 2t`, branch `s` is
    /// `Σ Π_s(c_k)(2t)^k`.
    pub fn from_z_poly(coeffs: &[ParaComplex<Rational>]) -> Self {
        let mk = |s: i8| {
            Polynomial::new(coeffs.iter().enumerate().map(|(k, c)| c.pi(s) * num_traits::pow(rint(2), k)).collect())
        };
        ParaFunction { branch1: RealBranch::poly(mk(1)), branchm1: RealBranch::poly(mk(-1)) }
    }

    /// `z^k` with unit coefficient.
    pub fn z_pow(k: usize, c: ParaComplex<Rational>) -> Self {
        let mut v: Vec<ParaComplex<Rational>> = (0..k).map(|_| ParaComplex::real(Rational::zero())).collect();
        v.push(c);
        Self::from_z_poly(&v)
    }

    /// Inverse of [`ParaFunction::from_z_poly`] for polynomial branches:
    /// `c_k = ε₁a_k/2^k + ε₋₁b_k/2^k`.
    pub fn to_z_poly(&self) -> Option<Vec<ParaComplex<Rational>>> {
        let (p, q) = (self.branch1.as_poly()?, self.branchm1.as_poly()?);
        let n = p.coeffs().len().max(q.coeffs().len());
        Some(
            (0..n)
                .map(|k| {
                    let pw = num_traits::pow(rint(2), k);
                    crate::paracomplex::IdempotentPair { pi1: p.coeff(k) / &pw, pim1: q.coeff(k) / &pw }.recompose()
                })
                .collect(),
        )
    }

    pub fn is_poly(&self) -> bool {
        self.branch1.is_poly() && self.branchm1.is_poly()
    }

    pub fn branch(&self, s: i8) -> &RealBranch {
        if s > 0 {
            &self.branch1
        } else {
            &self.branchm1
        }
    }

    pub fn evaluate(&self, z: ParaComplex<f64>) -> Result<ParaComplex<f64>> {
        let (x, y) = null_coords(z.re, z.im);
        let a = self.branch1.eval(x)?;
        let b = self.branchm1.eval(y)?;
        Ok(ParaComplex::new(0.5 * (a + b), 0.5 * (a - b)))
    }

    /// Values `(φ₁(x), φ₋₁(y))` at `(u, v)`.
    pub fn branch_values(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let (x, y) = null_coords(u, v);
        Ok((self.branch1.eval(x)?, self.branchm1.eval(y)?))
    }

    pub fn evaluate_exact(&self, z: &ParaComplex<Rational>) -> Option<ParaComplex<Rational>> {
        let half = rat(1, 2);
        let x = (&z.re + &z.im) * &half;
        let y = (&z.re - &z.im) * &half;
        let a = self.branch1.eval_exact(&x)?;
        let b = self.branchm1.eval_exact(&y)?;
        Some(crate::paracomplex::IdempotentPair { pi1: a, pim1: b }.recompose())
    }

    /// `N²(h(z)) = φ₁(x)·φ₋₁(y)`.
    pub fn n2_at(&self, u: f64, v: f64) -> Result<f64> {
        let (a, b) = self.branch_values(u, v)?;
        Ok(a * b)
    }

    /// `dh/dz`, branches `φ_s′(t)/2`.
    pub fn derivative(&self) -> Result<ParaFunction> {
        let half = rat(1, 2);
        Ok(ParaFunction {
            branch1: self.branch1.derivative()?.scale(&half),
            branchm1: self.branchm1.derivative()?.scale(&half),
        })
    }

    pub fn mul(&self, other: &ParaFunction) -> ParaFunction {
        ParaFunction { branch1: self.branch1.mul(&other.branch1), branchm1: self.branchm1.mul(&other.branchm1) }
    }

    pub fn add(&self, other: &ParaFunction) -> ParaFunction {
        ParaFunction { branch1: self.branch1.add(&other.branch1), branchm1: self.branchm1.add(&other.branchm1) }
    }

    pub fn scale_real(&self, k: &Rational) -> ParaFunction {
        ParaFunction { branch1: self.branch1.scale(k), branchm1: self.branchm1.scale(k) }
    }

    /// Multiplication by a paracomplex constant acts as `Π_s(c)` on branch `s`.
    pub fn scale(&self, c: &ParaComplex<Rational>) -> ParaFunction {
        ParaFunction { branch1: self.branch1.scale(&c.pi(1)), branchm1: self.branchm1.scale(&c.pi(-1)) }
    }

    /// Composes each branch with a linear map `t ↦ λ_s t`.
    pub fn rescale_args(&self, lambda1: &Rational, lambdam1: &Rational) -> ParaFunction {
        ParaFunction { branch1: self.branch1.rescale_arg(lambda1), branchm1: self.branchm1.rescale_arg(lambdam1) }
    }

    pub fn split_orders(&self, cap: usize) -> Result<SplitOrders> {
        Ok(SplitOrders { branch1: self.branch1.order(cap)?, branchm1: self.branchm1.order(cap)? })
    }

    /// Orders and `ψ_s(0)` of the factorisation `φ_s(t) = t^{m_s}ψ_s(t)`.
    pub fn normal_form(&self, cap: usize) -> Result<NormalForm> {
        let so = self.split_orders(cap)?;
        match (so.branch1.order, so.branchm1.order) {
            (SplitOrder::Finite(m1), SplitOrder::Finite(m_1)) => Ok(NormalForm {
                m1,
                m_1,
                psi1_at_0: so.branch1.coeff,
                psim1_at_0: so.branchm1.coeff,
                degenerate: m1 != m_1,
            }),
            (a, b) => Err(Error::Invalid(format!("split orders ({a}, {b}) are not both finite below the cap"))),
        }
    }
}

/// `x = (u+v)/2`, `y = (u−v)/2`.
pub fn null_coords(u: f64, v: f64) -> (f64, f64) {
    (0.5 * (u + v), 0.5 * (u - v))
}

/// `u = x + y`, `v = x − y`.
pub fn uv_coords(x: f64, y: f64) -> (f64, f64) {
    (x + y, x - y)
}

/// Exact sign helper for rational branch values.
pub fn rational_sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
