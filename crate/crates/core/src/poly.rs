//! Exact rational polynomials.
//!
//! [`Polynomial`] is univariate with ascending coefficients; [`BiPoly`] is a
//! sparse bivariate polynomial keyed by exponent pairs. Both keep an `f64`
//! copy of their coefficients for fast floating evaluation next to the exact
//! rational evaluation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Univariate polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
    approx: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let approx = coeffs.iter().map(to_f64).collect();
        Polynomial { coeffs, approx }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rint(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the first non-zero coefficient.
    pub fn lowest_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.approx.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * rint(k as i64)).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c / rint(k as i64 + 1));
        }
        Self::new(v)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `p(λ·t)`.
    pub fn rescale_arg(&self, lambda: &Rational) -> Self {
        let mut pw = Rational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c * &pw);
            pw *= lambda;
        }
        Self::new(v)
    }

    /// `p(t) / t^m`; the low coefficients must vanish.
    pub fn divide_by_power(&self, m: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(m).all(|c| c.is_zero()));
        Self::new(self.coeffs.iter().skip(m).cloned().collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    /// Sign of `p(t)` evaluated exactly.
    pub fn sign_at(&self, t: &Rational) -> i8 {
        let val = self.eval(t);
        if val.is_zero() {
            0
        } else if val.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Sparse bivariate polynomial `Σ c_{ab} s^a t^b` with rational coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
    approx: Vec<(u32, u32, f64)>,
}

impl BiPoly {
    pub fn from_terms(terms: BTreeMap<(u32, u32), Rational>) -> Self {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let approx = terms.iter().map(|(&(a, b), c)| (a, b, to_f64(c))).collect();
        BiPoly { terms, approx }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: Rational, a: u32, b: u32) -> Self {
        let mut t = BTreeMap::new();
        t.insert((a, b), c);
        Self::from_terms(t)
    }

    /// Embeds `p(s)` as a polynomial in the first variable.
    pub fn from_first(p: &Polynomial) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| ((k as u32, 0), c.clone())).collect())
    }

    /// Embeds `p(t)` as a polynomial in the second variable.
    pub fn from_second(p: &Polynomial) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| ((0, k as u32), c.clone())).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        for (k, c) in &other.terms {
            *t.entry(*k).or_insert_with(Rational::zero) += c;
        }
        Self::from_terms(t)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rint(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut t: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                *t.entry((a1 + a2, b1 + b2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Self::from_terms(t)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::term(Rational::one(), 0, 0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// ∂/∂s.
    pub fn d_first(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|(&(a, b), c)| ((a - 1, b), c * rint(a as i64)))
                .collect(),
        )
    }

    /// ∂/∂t.
    pub fn d_second(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|(&(a, b), c)| ((a, b - 1), c * rint(b as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for ((a, b), c) in &self.terms {
            acc += c * num_traits::pow(s.clone(), *a as usize) * num_traits::pow(t.clone(), *b as usize);
        }
        acc
    }

    pub fn eval_f64(&self, s: f64, t: f64) -> f64 {
        self.approx.iter().map(|&(a, b, c)| c * powi(s, a) * powi(t, b)).sum()
    }

    /// Substitutes `s = (p+q)/2`, `t = (p−q)/2`, i.e. rewrites a polynomial in
    /// null coordinates `(x, y)` as a polynomial in `(u, v)`.
    pub fn null_to_uv(&self) -> Self {
        let half = rat(1, 2);
        let x = BiPoly::from_terms([((1, 0), half.clone()), ((0, 1), half.clone())].into_iter().collect());
        let y = BiPoly::from_terms([((1, 0), half.clone()), ((0, 1), -half)].into_iter().collect());
        let mut acc = BiPoly::zero();
        for ((a, b), c) in &self.terms {
            acc = acc.add(&x.pow(*a).mul(&y.pow(*b)).scale(c));
        }
        acc
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})s^{a}t^{b}")?;
        }
        Ok(())
    }
}
