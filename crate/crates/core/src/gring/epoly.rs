use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer polynomial in `u, v`; keys are `(deg_u, deg_v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivariatePoly {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigInt)>>(terms: I) -> Self {
        let mut out = BivariatePoly::default();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    /// Image of `sum c_k q^k` under `q -> uv`.
    pub(crate) fn from_diagonal(coeffs: Vec<BigInt>) -> Self {
        Self::from_terms(
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| ((k as u32, k as u32), c)),
        )
    }

    fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, du: u32, dv: u32) -> BigInt {
        self.terms.get(&(du, dv)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut out = BivariatePoly::default();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                out.add_term((a + c, b + d), x * y);
            }
        }
        out
    }
}

fn monomial(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(du, dv), c)) in self.terms.iter().rev().enumerate() {
            let mono = format!("{}{}", monomial("u", du), monomial("v", dv));
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::MotiveExpr;

    #[test]
    fn substitution_q_to_uv() {
        let sl2 = MotiveExpr::from_int_coeffs(&[0, -1, 0, 1], 0, 0, 0);
        let e = sl2.e_polynomial().unwrap();
        assert_eq!(e.to_string(), "u^3v^3 - uv");
        assert_eq!(MotiveExpr::one().e_polynomial().unwrap().to_string(), "1");
        let sq = MotiveExpr::from_int_coeffs(&[1, -2, 1], 0, 0, 0);
        assert_eq!(sq.e_polynomial().unwrap().to_string(), "u^2v^2 - 2uv + 1");
    }
}
