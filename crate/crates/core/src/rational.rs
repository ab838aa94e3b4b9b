//! Exact rational and Gaussian-rational arithmetic.
//!
//! Every exact value in the crate (Bernoulli numbers, e-invariant classes,
//! polynomial coefficients) is built from these two types.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inverse of zero")]
    InverseOfZero,
}

/// A reduced fraction with positive denominator. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Reduces `num/den` to canonical form.
    pub fn reduce(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, RationalError> {
        let den = den.into();
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, RationalError> {
        if self.is_zero() {
            return Err(RationalError::InverseOfZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self, RationalError> {
        Ok(self * &other.recip()?)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Representative of the class modulo 1, in `[0, 1)`.
    pub fn fract_mod_one(&self) -> Self {
        let (num, den) = (self.0.numer(), self.0.denom());
        Rational(BigRational::new(num.mod_floor(den), den.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// `re + im·i` with both parts exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

/// Field operations accepted by [`gauss_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussOp {
    Add,
    Mul,
    Conj,
    Inv,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::real(Rational::from(n))
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self, RationalError> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(RationalError::InverseOfZero);
        }
        let n_inv = n.recip()?;
        Ok(GaussianRational::new(&self.re * &n_inv, -(&self.im * &n_inv)))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = Rational::from(k);
        GaussianRational::new(&self.re * &k, &self.im * &k)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Dispatches one field operation. `b` is ignored for `Conj` and `Inv`.
pub fn gauss_op(
    a: &GaussianRational,
    b: &GaussianRational,
    op: GaussOp,
) -> Result<GaussianRational, RationalError> {
    match op {
        GaussOp::Add => Ok(a + b),
        GaussOp::Mul => Ok(a * b),
        GaussOp::Conj => Ok(a.conj()),
        GaussOp::Inv => a.inv(),
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        GaussianRational::new(re, im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(re, im)`; only used for deterministic sorting.
impl Ord for GaussianRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::reduce(n, d).unwrap()
    }

    fn g(a: (i64, i64), b: (i64, i64)) -> GaussianRational {
        GaussianRational::new(q(a.0, a.1), q(b.0, b.1))
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(-3, -6), q(1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(0, -7), Rational::zero());
        assert_eq!(Rational::reduce(1, 0), Err(RationalError::ZeroDenominator));
    }

    #[test]
    fn reduce_bernoulli_nine_term() {
        // B_9 / 18 with B_9 = 43867/798; gcd(43867, 14364) = 1 so nothing cancels.
        let r = q(43867, 798 * 18);
        assert_eq!(r.numer(), &BigInt::from(43867));
        assert_eq!(r.denom(), &BigInt::from(14364));
        assert_eq!(num_integer::gcd(43867i64, 14364), 1);
    }

    #[test]
    fn gaussian_examples() {
        let i = GaussianRational::i();
        assert_eq!(gauss_op(&i, &i, GaussOp::Mul).unwrap(), GaussianRational::from_int(-1));
        let a = g((1, 2), (1, 3));
        let c = gauss_op(&a, &a, GaussOp::Conj).unwrap();
        assert_eq!(c.conj(), a);
        let one_plus_i = g((1, 1), (1, 1));
        let inv = gauss_op(&one_plus_i, &GaussianRational::zero(), GaussOp::Inv).unwrap();
        assert_eq!(inv, g((1, 2), (-1, 2)));
        assert!((&one_plus_i * &inv).is_one());
        assert_eq!(GaussianRational::zero().inv(), Err(RationalError::InverseOfZero));
    }

    #[test]
    fn fract_mod_one_is_canonical() {
        assert_eq!(q(-1, 240).fract_mod_one(), q(239, 240));
        assert_eq!(q(7, 3).fract_mod_one(), q(1, 3));
        assert_eq!(q(-2, 1).fract_mod_one(), Rational::zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(g((1, 2), (-1, 3)).to_string(), "(1/2-1/3i)");
        assert_eq!(g((0, 1), (2, 1)).to_string(), "2i");
        assert_eq!(g((-5, 1), (0, 1)).to_string(), "-5");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
        (arb_rational(), arb_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rational_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.recip().unwrap()).is_one());
            }
        }

        #[test]
        fn gaussian_field_axioms(a in arb_gauss(), b in arb_gauss(), c in arb_gauss()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conj_is_field_automorphism(a in arb_gauss(), b in arb_gauss()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert!((&a.conj() * &a).im.is_zero());
        }

        #[test]
        fn reduce_is_idempotent(n in -1000i64..1000, d in 1i64..500) {
            let r = q(n, d);
            let again = Rational::reduce(r.numer().clone(), r.denom().clone()).unwrap();
            prop_assert_eq!(again, r);
        }
    }
}
