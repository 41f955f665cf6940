//! Shorthand constructors for building closed forms: signed powers of the
//! three distinguished units and small constants.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::MotiveExpr;

fn signed(e: i64, k: usize) -> MotiveExpr {
    let mut pos = [0u32; 3];
    let mut neg = [0u32; 3];
    if e >= 0 {
        pos[k] = e as u32;
    } else {
        neg[k] = e.unsigned_abs() as u32;
    }
    MotiveExpr::unit_monomial(pos[0], pos[1], pos[2]).div_units(neg[0], neg[1], neg[2])
}

/// `q^e`.
pub fn q_pow(e: i64) -> MotiveExpr {
    signed(e, 0)
}

/// `(q - 1)^e`.
pub fn qm1_pow(e: i64) -> MotiveExpr {
    signed(e, 1)
}

/// `(q + 1)^e`.
pub fn qp1_pow(e: i64) -> MotiveExpr {
    signed(e, 2)
}

/// `(q^3 - q)^e`, the class of `SL2` raised to `e`.
pub fn sl2_pow(e: i64) -> MotiveExpr {
    &(&q_pow(e) * &qm1_pow(e)) * &qp1_pow(e)
}

pub fn int(n: i64) -> MotiveExpr {
    MotiveExpr::from_int(n)
}

pub fn two_pow(n: u32) -> MotiveExpr {
    MotiveExpr::from_bigint(BigInt::from(1) << n)
}

pub fn ratio(n: i64, d: i64) -> MotiveExpr {
    MotiveExpr::from_rational(BigRational::new(n.into(), d.into()))
}

/// `(-1)^e`.
pub fn sign(e: i64) -> MotiveExpr {
    int(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}
