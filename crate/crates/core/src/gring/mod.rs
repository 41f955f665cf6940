//! Exact arithmetic in `Q[q]` localized at `q`, `q - 1` and `q + 1`.
//!
//! Every [`MotiveExpr`] is kept in canonical form: a numerator polynomial
//! over the rationals divided by `q^d0 (q-1)^d1 (q+1)^d2`, where no
//! denominator factor with a positive exponent divides the numerator.
//! Two expressions are equal iff their canonical forms coincide.

mod epoly;
pub(crate) mod poly;
mod render;
pub mod units;

pub use epoly::BivariatePoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use poly::Coeffs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GringError {
    #[error("negative power of a non-unit element {0}")]
    NonUnitInverse(String),
    #[error("evaluation at q = {0} hits a pole of the localization")]
    PoleAtUnit(BigInt),
    #[error("expression {0} is not a polynomial in q")]
    NotPolynomial(String),
    #[error("expression {0} has non-integral coefficients")]
    NotIntegral(String),
    #[error("malformed serialized expression: {0}")]
    Malformed(String),
}

/// An element of the localized Grothendieck ring, written in `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MotiveExpr {
    num: Coeffs,
    d0: u32,
    d1: u32,
    d2: u32,
}

/// The distinguished unit factors `q`, `q - 1`, `q + 1`, as roots.
const ROOTS: [i64; 3] = [0, 1, -1];

impl MotiveExpr {
    /// Builds the canonical form of `numerator / (q^d0 (q-1)^d1 (q+1)^d2)`.
    pub fn canonicalize(numerator: Vec<BigRational>, d0: u32, d1: u32, d2: u32) -> Self {
        let mut num = numerator;
        poly::trim(&mut num);
        if num.is_empty() {
            return Self::zero();
        }
        let mut ds = [d0, d1, d2];
        for (k, &root) in ROOTS.iter().enumerate() {
            while ds[k] > 0 {
                match poly::div_linear(&num, root) {
                    Some(quot) => {
                        num = quot;
                        ds[k] -= 1;
                    }
                    None => break,
                }
            }
        }
        MotiveExpr { num, d0: ds[0], d1: ds[1], d2: ds[2] }
    }

    /// Integer-coefficient convenience constructor, low-to-high.
    pub fn from_int_coeffs(coeffs: &[i64], d0: u32, d1: u32, d2: u32) -> Self {
        let num = coeffs
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Self::canonicalize(num, d0, d1, d2)
    }

    pub fn zero() -> Self {
        MotiveExpr { num: Vec::new(), d0: 0, d1: 0, d2: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::canonicalize(vec![c], 0, 0, 0)
    }

    /// The Lefschetz motive `q`.
    pub fn q() -> Self {
        Self::from_int_coeffs(&[0, 1], 0, 0, 0)
    }

    /// `q^e0 (q-1)^e1 (q+1)^e2` as a polynomial.
    pub fn unit_monomial(e0: u32, e1: u32, e2: u32) -> Self {
        let mut num = poly::linear_pow(0, e0);
        num = poly::mul(&num, &poly::linear_pow(1, e1));
        num = poly::mul(&num, &poly::linear_pow(-1, e2));
        MotiveExpr { num, d0: 0, d1: 0, d2: 0 }
    }

    pub fn numerator(&self) -> &[BigRational] {
        &self.num
    }

    /// Denominator exponents `(d0, d1, d2)` of `q`, `q - 1`, `q + 1`.
    pub fn denominator_exponents(&self) -> (u32, u32, u32) {
        (self.d0, self.d1, self.d2)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// True when no denominator factor survives canonicalization.
    pub fn is_polynomial(&self) -> bool {
        self.d0 == 0 && self.d1 == 0 && self.d2 == 0
    }

    pub fn is_integral(&self) -> bool {
        poly::is_integral(&self.num)
    }

    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    fn neg_expr(&self) -> Self {
        MotiveExpr { num: poly::neg(&self.num), ..self.clone() }
    }

    fn add_expr(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let d0 = self.d0.max(other.d0);
        let d1 = self.d1.max(other.d1);
        let d2 = self.d2.max(other.d2);
        let lift = |e: &Self| {
            let f = Self::unit_monomial(d0 - e.d0, d1 - e.d1, d2 - e.d2);
            poly::mul(&e.num, &f.num)
        };
        Self::canonicalize(poly::add(&lift(self), &lift(other)), d0, d1, d2)
    }

    fn sub_expr(&self, other: &Self) -> Self {
        self.add_expr(&other.neg_expr())
    }

    fn mul_expr(&self, other: &Self) -> Self {
        Self::canonicalize(
            poly::mul(&self.num, &other.num),
            self.d0 + other.d0,
            self.d1 + other.d1,
            self.d2 + other.d2,
        )
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MotiveExpr { num: self.num.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn pow_u(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_expr(&base);
            }
            base = base.mul_expr(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents require a unit, i.e. `±c` times a
    /// product of `q`, `q - 1`, `q + 1` (`c` a nonzero rational).
    pub fn pow(&self, n: i64) -> Result<Self, GringError> {
        if n >= 0 {
            return Ok(self.pow_u(n as u32));
        }
        let inv = self.inverse()?;
        Ok(inv.pow_u(n.unsigned_abs() as u32))
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self, GringError> {
        if self.is_zero() {
            return Err(GringError::NonUnitInverse(self.to_string()));
        }
        let mut rest = self.num.clone();
        let mut es = [0u32; 3];
        for (k, &root) in ROOTS.iter().enumerate() {
            while let Some(quot) = poly::div_linear(&rest, root) {
                if quot.is_empty() {
                    break;
                }
                rest = quot;
                es[k] += 1;
            }
        }
        if rest.len() != 1 {
            return Err(GringError::NonUnitInverse(self.to_string()));
        }
        let c = rest[0].recip();
        let top = Self::unit_monomial(self.d0, self.d1, self.d2);
        Ok(Self::canonicalize(
            top.num.iter().map(|x| x * &c).collect(),
            es[0],
            es[1],
            es[2],
        ))
    }

    /// Divides by `q^e0 (q-1)^e1 (q+1)^e2`.
    pub fn div_units(&self, e0: u32, e1: u32, e2: u32) -> Self {
        Self::canonicalize(self.num.clone(), self.d0 + e0, self.d1 + e1, self.d2 + e2)
    }

    /// Exact value at an integer point away from the poles `0, ±1`.
    pub fn eval_at(&self, q0: &BigInt) -> Result<BigRational, GringError> {
        if q0.is_zero() || q0.abs().is_one() {
            return Err(GringError::PoleAtUnit(q0.clone()));
        }
        let x = BigRational::from_integer(q0.clone());
        let top = poly::eval(&self.num, &x);
        let den = x.pow(self.d0 as i32)
            * (&x - BigRational::one()).pow(self.d1 as i32)
            * (&x + BigRational::one()).pow(self.d2 as i32);
        Ok(top / den)
    }

    pub fn eval_at_i64(&self, q0: i64) -> Result<BigRational, GringError> {
        self.eval_at(&BigInt::from(q0))
    }

    /// E-polynomial under `q -> uv`; only defined on integral polynomials.
    pub fn e_polynomial(&self) -> Result<BivariatePoly, GringError> {
        if !self.is_polynomial() {
            return Err(GringError::NotPolynomial(self.to_string()));
        }
        if !self.is_integral() {
            return Err(GringError::NotIntegral(self.to_string()));
        }
        Ok(BivariatePoly::from_diagonal(
            self.num.iter().map(|c| c.to_integer()).collect(),
        ))
    }

    /// True if the expression is `±c · q^i (q-1)^j (q+1)^k` over its denominator.
    pub fn is_unit(&self) -> bool {
        self.inverse().is_ok()
    }

    /// Leading coefficient of the numerator, zero for the zero element.
    pub fn leading_coefficient(&self) -> BigRational {
        self.num.last().cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Named constants from the group classes used throughout.
pub mod constants {
    use super::MotiveExpr;

    pub fn lefschetz() -> MotiveExpr {
        MotiveExpr::q()
    }

    pub fn class_sl2() -> MotiveExpr {
        MotiveExpr::from_int_coeffs(&[0, -1, 0, 1], 0, 0, 0)
    }

    /// `[PGL2] = [GL2] / (q - 1)`.
    pub fn class_pgl2() -> MotiveExpr {
        class_gl2().div_units(0, 1, 0)
    }

    pub fn class_gl2() -> MotiveExpr {
        MotiveExpr::from_int_coeffs(&[0, 1, -1, -1, 1], 0, 0, 0)
    }
}

impl Default for MotiveExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for MotiveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MotiveExpr({})", self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&MotiveExpr> for &MotiveExpr {
            type Output = MotiveExpr;
            fn $method(self, rhs: &MotiveExpr) -> MotiveExpr {
                MotiveExpr::$imp(self, rhs)
            }
        }
        impl $tr<MotiveExpr> for MotiveExpr {
            type Output = MotiveExpr;
            fn $method(self, rhs: MotiveExpr) -> MotiveExpr {
                MotiveExpr::$imp(&self, &rhs)
            }
        }
        impl $tr<&MotiveExpr> for MotiveExpr {
            type Output = MotiveExpr;
            fn $method(self, rhs: &MotiveExpr) -> MotiveExpr {
                MotiveExpr::$imp(&self, rhs)
            }
        }
        impl $tr<MotiveExpr> for &MotiveExpr {
            type Output = MotiveExpr;
            fn $method(self, rhs: MotiveExpr) -> MotiveExpr {
                MotiveExpr::$imp(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_expr);
forward_binop!(Sub, sub, sub_expr);
forward_binop!(Mul, mul, mul_expr);

impl Neg for MotiveExpr {
    type Output = MotiveExpr;
    fn neg(self) -> MotiveExpr {
        self.neg_expr()
    }
}

impl Neg for &MotiveExpr {
    type Output = MotiveExpr;
    fn neg(self) -> MotiveExpr {
        self.neg_expr()
    }
}

impl std::iter::Sum for MotiveExpr {
    fn sum<I: Iterator<Item = MotiveExpr>>(iter: I) -> Self {
        iter.fold(MotiveExpr::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> MotiveExpr {
        MotiveExpr::from_int_coeffs(v, 0, 0, 0)
    }

    #[test]
    fn canonicalize_strips_common_factors() {
        let e = MotiveExpr::from_int_coeffs(&[0, -1, 0, 1], 0, 1, 0);
        assert_eq!(e, z(&[0, 1, 1]));
        assert!(e.is_polynomial());
        let zero = MotiveExpr::from_int_coeffs(&[0], 3, 3, 3);
        assert_eq!(zero, MotiveExpr::zero());
        assert_eq!(zero.denominator_exponents(), (0, 0, 0));
        let gl2 = z(&[0, 1, -1, -1, 1]);
        assert_eq!(gl2.numerator().len(), 5);
    }

    #[test]
    fn ring_operations() {
        assert_eq!(z(&[-1, 1]) * z(&[1, 1]), z(&[-1, 0, 1]));
        let a = z(&[0, -1, 0, 1]);
        assert_eq!(&a + &(-&a), MotiveExpr::zero());
        let inv = z(&[-1, 0, 1]).pow(-1).unwrap();
        assert_eq!(inv.numerator(), &[BigRational::one()]);
        assert_eq!(inv.denominator_exponents(), (0, 1, 1));
    }

    #[test]
    fn negative_power_of_non_unit_fails() {
        let e = z(&[1, 0, 1]);
        assert!(matches!(e.pow(-1), Err(GringError::NonUnitInverse(_))));
        assert!(MotiveExpr::zero().pow(-2).is_err());
    }

    #[test]
    fn inverse_of_scaled_unit() {
        let e = MotiveExpr::unit_monomial(2, 0, 1).scale_int(-3);
        let inv = e.inverse().unwrap();
        assert_eq!(e * inv, MotiveExpr::one());
    }

    #[test]
    fn divide_by_units() {
        assert_eq!(z(&[0, -1, 0, 1]).div_units(1, 1, 1), MotiveExpr::one());
        assert_eq!(z(&[0, 1, -1, -1, 1]).div_units(0, 1, 0), z(&[0, -1, 0, 1]));
        let e = MotiveExpr::one().div_units(0, 0, 1);
        assert_eq!(e.denominator_exponents(), (0, 0, 1));
    }

    #[test]
    fn evaluation() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(constants::class_sl2().eval_at_i64(3).unwrap(), r(24, 1));
        assert_eq!(constants::class_gl2().eval_at_i64(3).unwrap(), r(48, 1));
        let e = MotiveExpr::one().div_units(0, 1, 0);
        assert_eq!(e.eval_at_i64(3).unwrap(), r(1, 2));
        for bad in [0, 1, -1] {
            assert!(matches!(e.eval_at_i64(bad), Err(GringError::PoleAtUnit(_))));
        }
    }

    #[test]
    fn group_classes() {
        assert_eq!(constants::class_gl2(), z(&[0, 1, -1, -1, 1]));
        assert_eq!(constants::class_sl2(), z(&[0, -1, 0, 1]));
        assert_eq!(constants::class_sl2(), constants::class_pgl2());
        assert_eq!(constants::lefschetz(), MotiveExpr::q());
    }

    #[test]
    fn e_polynomial_requires_polynomial() {
        let e = MotiveExpr::one().div_units(0, 0, 1);
        assert!(matches!(e.e_polynomial(), Err(GringError::NotPolynomial(_))));
        let half = MotiveExpr::from_rational(BigRational::new(1.into(), 2.into()));
        assert!(matches!(half.e_polynomial(), Err(GringError::NotIntegral(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_poly() -> impl Strategy<Value = MotiveExpr> {
            proptest::collection::vec(-20i64..20, 0..6).prop_map(|c| MotiveExpr::from_int_coeffs(&c, 0, 0, 0))
        }

        fn motive() -> impl Strategy<Value = MotiveExpr> {
            (proptest::collection::vec((-20i64..20, 1i64..5), 0..6), 0u32..3, 0u32..3, 0u32..3).prop_map(
                |(c, d0, d1, d2)| {
                    let num = c.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect();
                    MotiveExpr::canonicalize(num, d0, d1, d2)
                },
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

            #[test]
            fn e_polynomial_is_multiplicative(a in int_poly(), b in int_poly()) {
                let ab = (&a * &b).e_polynomial().unwrap();
                prop_assert_eq!(ab, a.e_polynomial().unwrap().product(&b.e_polynomial().unwrap()));
            }

            #[test]
            fn div_units_undone_by_multiplication(a in motive(), e0 in 0u32..3, e1 in 0u32..3, e2 in 0u32..3) {
                let d = a.div_units(e0, e1, e2);
                prop_assert_eq!(d * MotiveExpr::unit_monomial(e0, e1, e2), a);
            }

            #[test]
            fn units_invert(e0 in 0u32..4, e1 in 0u32..4, e2 in 0u32..4, c in 1i64..9) {
                let u = MotiveExpr::unit_monomial(e0, e1, e2).scale_int(c);
                prop_assert!(u.is_unit());
                prop_assert_eq!(&u * &u.inverse().unwrap(), MotiveExpr::one());
                prop_assert_eq!(u.pow(-2).unwrap() * u.pow_u(2), MotiveExpr::one());
            }

            #[test]
            fn canonical_denominators_are_coprime(a in motive()) {
                let (d0, d1, d2) = a.denominator_exponents();
                for (d, root) in [(d0, 0i64), (d1, 1), (d2, -1)] {
                    if d > 0 {
                        prop_assert!(!poly::eval(a.numerator(), &BigRational::from_integer(root.into())).is_zero());
                    }
                }
            }

            #[test]
            fn evaluation_respects_division(a in motive(), b in motive(), q0 in 2i64..30) {
                let q0 = BigInt::from(q0);
                prop_assert_eq!((&a - &b).eval_at(&q0).unwrap(), a.eval_at(&q0).unwrap() - b.eval_at(&q0).unwrap());
                if b.is_unit() {
                    let quotient = &a * &b.inverse().unwrap();
                    prop_assert_eq!(quotient.eval_at(&q0).unwrap(), a.eval_at(&q0).unwrap() / b.eval_at(&q0).unwrap());
                }
            }
        }
    }
}
