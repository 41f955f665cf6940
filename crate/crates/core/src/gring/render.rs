//! Plain-text, LaTeX and JSON forms of [`MotiveExpr`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GringError, MotiveExpr};

#[derive(Clone, Copy)]
enum Style {
    Plain,
    Latex,
}

fn render_coeff(c: &BigRational, style: Style) -> String {
    if c.is_integer() {
        return c.to_integer().to_string();
    }
    match style {
        Style::Plain => format!("{}/{}", c.numer(), c.denom()),
        Style::Latex => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
    }
}

fn render_power(base: &str, e: u32, style: Style) -> String {
    match (e, style) {
        (1, _) => base.to_string(),
        (_, Style::Plain) => format!("{base}^{e}"),
        (_, Style::Latex) => format!("{base}^{{{e}}}"),
    }
}

fn render_poly(num: &[BigRational], style: Style) -> (String, usize) {
    let mut out = String::new();
    let mut nterms = 0;
    for (k, c) in num.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if nterms == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let var = if k == 0 { String::new() } else { render_power("q", k as u32, style) };
        if var.is_empty() {
            out.push_str(&render_coeff(&mag, style));
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            let sep = match style {
                Style::Plain => "*",
                Style::Latex => " ",
            };
            out.push_str(&render_coeff(&mag, style));
            out.push_str(sep);
            out.push_str(&var);
        }
        nterms += 1;
    }
    if nterms == 0 {
        out.push('0');
    }
    (out, nterms)
}

fn render_denominator(e: &MotiveExpr, style: Style) -> Vec<String> {
    let (d0, d1, d2) = e.denominator_exponents();
    let mut parts = Vec::new();
    if d0 > 0 {
        parts.push(render_power("q", d0, style));
    }
    if d1 > 0 {
        parts.push(render_power("(q-1)", d1, style));
    }
    if d2 > 0 {
        parts.push(render_power("(q+1)", d2, style));
    }
    parts
}

impl MotiveExpr {
    pub fn to_plain(&self) -> String {
        let (num, nterms) = render_poly(self.numerator(), Style::Plain);
        let den = render_denominator(self, Style::Plain);
        if den.is_empty() {
            return num;
        }
        let num = if nterms > 1 { format!("({num})") } else { num };
        format!("{num}/({})", den.join("*"))
    }

    pub fn to_latex(&self) -> String {
        let (num, _) = render_poly(self.numerator(), Style::Latex);
        let den = render_denominator(self, Style::Latex);
        if den.is_empty() {
            return num;
        }
        format!("\\frac{{{num}}}{{{}}}", den.join(""))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("MotiveExpr serialization is infallible")
    }
}

impl fmt::Display for MotiveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

/// Wire form: `{"num": ["c0", "c1", ...], "d0": .., "d1": .., "d2": ..}`.
/// Coefficients are decimal strings (`"-3"`, `"1/2"`) so big values survive.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    num: Vec<String>,
    d0: u32,
    d1: u32,
    d2: u32,
}

fn parse_rational(s: &str) -> Result<BigRational, GringError> {
    let bad = || GringError::Malformed(format!("coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

impl Serialize for MotiveExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (d0, d1, d2) = self.denominator_exponents();
        Wire {
            num: self.numerator().iter().map(|c| render_coeff(c, Style::Plain)).collect(),
            d0,
            d1,
            d2,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MotiveExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(deserializer)?;
        let num = w
            .num
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(MotiveExpr::canonicalize(num, w.d0, w.d1, w.d2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_text() {
        let e = MotiveExpr::from_int_coeffs(&[0, 1, 0, 1], 0, 2, 0);
        assert_eq!(e.to_plain(), "(q^3 + q)/((q-1)^2)");
        let r = MotiveExpr::from_int_coeffs(&[0, -1, 0, 1], 0, 2, 0);
        assert_eq!(r.to_plain(), "(q^2 + q)/((q-1))");
        let gl2 = MotiveExpr::from_int_coeffs(&[0, 1, -1, -1, 1], 0, 0, 0);
        assert_eq!(gl2.to_plain(), "q^4 - q^3 - q^2 + q");
        assert_eq!(MotiveExpr::zero().to_plain(), "0");
        let f = MotiveExpr::from_int_coeffs(&[-4], 0, 1, 1);
        assert_eq!(f.to_plain(), "-4/((q-1)*(q+1))");
        let h = MotiveExpr::from_int_coeffs(&[0, 0, 3], 0, 0, 0).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(h.to_plain(), "3/2*q^2");
    }

    #[test]
    fn latex() {
        let e = MotiveExpr::from_int_coeffs(&[1, 0, 2], 1, 0, 3);
        assert_eq!(e.to_latex(), "\\frac{2 q^{2} + 1}{q(q+1)^{3}}");
    }

    #[test]
    fn json_shape() {
        let e = MotiveExpr::from_int_coeffs(&[1, 0, 2], 1, 0, 3);
        let v = e.to_json_value();
        assert_eq!(v, serde_json::json!({"num": ["1", "0", "2"], "d0": 1, "d1": 0, "d2": 3}));
        let back: MotiveExpr = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn json_rejects_garbage() {
        let bad = serde_json::json!({"num": ["x"], "d0": 0, "d1": 0, "d2": 0});
        assert!(serde_json::from_value::<MotiveExpr>(bad).is_err());
        let zero_den = serde_json::json!({"num": ["1/0"], "d0": 0, "d1": 0, "d2": 0});
        assert!(serde_json::from_value::<MotiveExpr>(zero_den).is_err());
    }
}
