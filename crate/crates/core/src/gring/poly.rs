//! Dense univariate polynomials over `Q`, coefficients stored low-to-high.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type Coeffs = Vec<BigRational>;

pub(crate) fn trim(c: &mut Coeffs) {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

pub(crate) fn add(a: &[BigRational], b: &[BigRational]) -> Coeffs {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(&mut out);
    out
}

pub(crate) fn neg(a: &[BigRational]) -> Coeffs {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Multiplies by `(q + root_neg)` where the factor is `q - root`.
pub(crate) fn mul_linear(a: &[BigRational], root: i64) -> Coeffs {
    if a.is_empty() {
        return Vec::new();
    }
    let r = BigRational::from_integer(BigInt::from(root));
    let mut out = vec![BigRational::zero(); a.len() + 1];
    for (i, x) in a.iter().enumerate() {
        out[i + 1] += x;
        out[i] -= x * &r;
    }
    trim(&mut out);
    out
}

/// Exact division by `q - root`; `None` if `root` is not a root.
pub(crate) fn div_linear(a: &[BigRational], root: i64) -> Option<Coeffs> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    let r = BigRational::from_integer(BigInt::from(root));
    // synthetic division, high to low
    let n = a.len();
    let mut quot = vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for i in (0..n).rev() {
        let cur = &a[i] + &carry * &r;
        if i == 0 {
            if !cur.is_zero() {
                return None;
            }
        } else {
            quot[i - 1] = cur.clone();
        }
        carry = cur;
    }
    trim(&mut quot);
    Some(quot)
}

pub(crate) fn eval(a: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub(crate) fn linear_pow(root: i64, n: u32) -> Coeffs {
    let mut out = vec![BigRational::one()];
    for _ in 0..n {
        out = mul_linear(&out, root);
    }
    out
}

pub(crate) fn is_integral(a: &[BigRational]) -> bool {
    a.iter().all(|c| c.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Coeffs {
        let mut c: Coeffs = v
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        trim(&mut c);
        c
    }

    #[test]
    fn synthetic_division() {
        // q^3 - q = q (q - 1)(q + 1)
        let a = p(&[0, -1, 0, 1]);
        assert_eq!(div_linear(&a, 1).unwrap(), p(&[0, 1, 1]));
        assert_eq!(div_linear(&a, -1).unwrap(), p(&[0, -1, 1]));
        assert_eq!(div_linear(&a, 0).unwrap(), p(&[-1, 0, 1]));
        assert!(div_linear(&p(&[1, 1]), 1).is_none());
    }

    #[test]
    fn mul_then_divide_linear() {
        let a = p(&[3, -2, 0, 5]);
        for root in [-1, 0, 1] {
            assert_eq!(div_linear(&mul_linear(&a, root), root).unwrap(), a);
        }
    }
}
