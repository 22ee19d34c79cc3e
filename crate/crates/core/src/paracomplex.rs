//! Split-complex (paracomplex) numbers `u + jv`, `j² = 1`.
//!
//! Besides the ring operations this module carries the idempotent basis
//! `ε₁ = (1+j)/2`, `ε₋₁ = (1−j)/2`, in which every paracomplex number splits
//! into two independent real coordinates `Π₁(z) = u+v` and `Π₋₁(z) = u−v`.
//! Products act coordinate-wise in that basis, which is what makes
//! para-holomorphic functions a pair of one-variable real functions.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// A paracomplex number `re + j·im`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParaComplex<T = f64> {
    pub re: T,
    pub im: T,
}

/// The two null-coordinate projections of a paracomplex number.
///
/// `pi1 = Π₁(z) = u + v` and `pim1 = Π₋₁(z) = u − v`, so that
/// `z = pi1·ε₁ + pim1·ε₋₁`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct IdempotentPair<T = f64> {
    pub pi1: T,
    pub pim1: T,
}

impl<T> ParaComplex<T> {
    pub const fn new(re: T, im: T) -> Self {
        ParaComplex { re, im }
    }
}

impl<T: Clone + Zero> ParaComplex<T> {
    pub fn real(re: T) -> Self {
        ParaComplex { re, im: T::zero() }
    }
}

impl<T: Clone + Zero + One> ParaComplex<T> {
    /// The para-imaginary unit.
    pub fn j() -> Self {
        ParaComplex { re: T::zero(), im: T::one() }
    }
}

impl<T> ParaComplex<T>
where
    T: Clone
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + core::ops::Div<Output = T>,
{
    /// `ε₁ = (1+j)/2`.
    pub fn eps1() -> Self {
        IdempotentPair { pi1: T::one(), pim1: T::zero() }.recompose()
    }

    /// `ε₋₁ = (1−j)/2`.
    pub fn epsm1() -> Self {
        IdempotentPair { pi1: T::zero(), pim1: T::one() }.recompose()
    }

    /// `ε_s` for `s ∈ {1, −1}`.
    pub fn eps(s: i8) -> Self {
        if s > 0 {
            Self::eps1()
        } else {
            Self::epsm1()
        }
    }

    /// `N²[u + jv] = u² − v²`.
    pub fn n2(&self) -> T {
        self.re.clone() * self.re.clone() - self.im.clone() * self.im.clone()
    }

    /// `u − jv`.
    pub fn conj(&self) -> Self {
        ParaComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn decompose(&self) -> IdempotentPair<T> {
        IdempotentPair { pi1: self.re.clone() + self.im.clone(), pim1: self.re.clone() - self.im.clone() }
    }

    /// `Π_s(z) = u + s·v`.
    pub fn pi(&self, s: i8) -> T {
        if s > 0 {
            self.re.clone() + self.im.clone()
        } else {
            self.re.clone() - self.im.clone()
        }
    }

    pub fn scale(&self, k: T) -> Self {
        ParaComplex { re: self.re.clone() * k.clone(), im: self.im.clone() * k }
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ParaComplex::real(T::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Membership in the null line `𝓛_s = { u − s·v = 0 }`.
    pub fn on_null_line(&self, s: i8) -> bool {
        self.pi(-s).is_zero()
    }

    /// Non-invertible elements are exactly `𝓛₁ ∪ 𝓛₋₁`.
    pub fn is_zero_divisor(&self) -> bool {
        self.n2().is_zero()
    }
}

impl<T> IdempotentPair<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    /// `pi1·ε₁ + pim1·ε₋₁`; the halving is done with `one + one` so that the
    /// operation stays exact for rational scalars.
    pub fn recompose(&self) -> ParaComplex<T>
    where
        T: core::ops::Div<Output = T>,
    {
        let two = T::one() + T::one();
        ParaComplex {
            re: (self.pi1.clone() + self.pim1.clone()) / two.clone(),
            im: (self.pi1.clone() - self.pim1.clone()) / two,
        }
    }

    pub fn n2(&self) -> T {
        self.pi1.clone() * self.pim1.clone()
    }
}

impl ParaComplex<f64> {
    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn abs_max(&self) -> f64 {
        libm::fmax(libm::fabs(self.re), libm::fabs(self.im))
    }
}

impl<T: Add<Output = T>> Add for ParaComplex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ParaComplex { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<T: Sub<Output = T>> Sub for ParaComplex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ParaComplex { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<T: Neg<Output = T>> Neg for ParaComplex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        ParaComplex { re: -self.re, im: -self.im }
    }
}

impl<T> Mul for ParaComplex<T>
where
    T: Clone + Add<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    /// `(a+jb)(c+jd) = (ac+bd) + j(ad+bc)`.
    fn mul(self, rhs: Self) -> Self {
        ParaComplex {
            re: self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T> Zero for ParaComplex<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    fn zero() -> Self {
        ParaComplex { re: T::zero(), im: T::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T> One for ParaComplex<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    fn one() -> Self {
        ParaComplex { re: T::one(), im: T::zero() }
    }
}

impl<T: fmt::Display> fmt::Display for ParaComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+j{}", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Pc = ParaComplex<f64>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn j_squared_is_one() {
        let j = Pc::j();
        assert_eq!(j * j, Pc::new(1.0, 0.0));
    }

    #[test]
    fn idempotents_annihilate() {
        let e1 = Pc::eps1();
        let em1 = Pc::epsm1();
        assert_eq!(e1 * em1, Pc::new(0.0, 0.0));
        assert_eq!(e1 * e1, e1);
        assert_eq!(em1 * em1, em1);
        assert_eq!(e1.conj(), em1);
        assert_eq!(e1.decompose(), IdempotentPair { pi1: 1.0, pim1: 0.0 });
    }

    #[test]
    fn product_and_norm_example() {
        let a = Pc::new(1.0, 2.0);
        let b = Pc::new(3.0, 1.0);
        let ab = a * b;
        assert_eq!(ab, Pc::new(5.0, 7.0));
        assert_eq!(a.n2(), -3.0);
        assert_eq!(b.n2(), 8.0);
        assert_eq!(ab.n2(), -24.0);
    }

    #[test]
    fn n2_examples() {
        assert_eq!(Pc::new(3.0, 1.0).n2(), 8.0);
        assert_eq!(Pc::new(1.0, 1.0).n2(), 0.0);
        let z = Pc::new(2.0, 3.0);
        let p = z.decompose();
        assert_eq!(p, IdempotentPair { pi1: 5.0, pim1: -1.0 });
        assert_eq!(z.n2(), -5.0);
        assert_eq!(p.n2(), -5.0);
    }

    #[test]
    fn null_lines() {
        assert!(Pc::new(1.0, 1.0).on_null_line(1));
        assert!(Pc::new(1.0, -1.0).on_null_line(-1));
        assert!(!Pc::new(1.0, 1.0).on_null_line(-1));
        assert!(Pc::new(2.0, -2.0).is_zero_divisor());
        // 𝓛_s ⇔ Π₋ₛ(z) = 0
        assert_eq!(Pc::new(3.0, 3.0).pi(-1), 0.0);
    }

    #[test]
    fn projections_of_conjugate_swap() {
        let z = Pc::new(0.7, -1.3);
        assert_eq!(z.conj().pi(1), z.pi(-1));
        assert_eq!(z.conj().pi(-1), z.pi(1));
    }

    #[test]
    fn powu_matches_repeated_product() {
        let z = ParaComplex::new(q(1, 2), q(-3, 4));
        let mut acc = ParaComplex::real(q(1, 1));
        for k in 0..7u32 {
            assert_eq!(z.powu(k), acc);
            acc = acc * z.clone();
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    fn rational_pc() -> impl Strategy<Value = ParaComplex<Rational>> {
        (small_rational(), small_rational()).prop_map(|(a, b)| ParaComplex::new(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn decompose_roundtrip_exact(z in rational_pc()) {
            prop_assert_eq!(z.decompose().recompose(), z);
        }
    }

    proptest! {
        #[test]
        fn n2_multiplicative_exact(a in rational_pc(), b in rational_pc()) {
            prop_assert_eq!((a.clone() * b.clone()).n2(), a.n2() * b.n2());
        }

        #[test]
        fn projections_multiplicative(a in rational_pc(), b in rational_pc()) {
            let ab = a.clone() * b.clone();
            prop_assert_eq!(ab.pi(1), a.pi(1) * b.pi(1));
            prop_assert_eq!(ab.pi(-1), a.pi(-1) * b.pi(-1));
        }

        #[test]
        fn ring_axioms_exact(a in rational_pc(), b in rational_pc(), c in rational_pc()) {
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a * c);
        }

        #[test]
        fn n2_multiplicative_float(a in -1e3f64..1e3, b in -1e3f64..1e3, c in -1e3f64..1e3, d in -1e3f64..1e3) {
            let z = Pc::new(a, b);
            let w = Pc::new(c, d);
            let lhs = (z * w).n2();
            let rhs = z.n2() * w.n2();
            let scale = z.re.abs().max(z.im.abs()).powi(2) * w.re.abs().max(w.im.abs()).powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0) * 8.0);
        }

        #[test]
        fn null_line_iff_projection_vanishes(a in small_rational(), s in prop::bool::ANY) {
            let s: i8 = if s { 1 } else { -1 };
            // z = a + j·s·a lies on 𝓛_s
            let z = ParaComplex::new(a.clone(), if s > 0 { a.clone() } else { -a.clone() });
            prop_assert!(z.on_null_line(s));
            prop_assert!(z.is_zero_divisor());
        }
    }
}
