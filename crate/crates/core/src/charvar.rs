//! Character-variety classes two ways: assembled from the stratified
//! representation variety, and from the published closed forms.
//!
//! The two routes share no simplification code, so comparing them checks
//! the closed forms.

use serde::{Deserialize, Serialize};

use crate::gring::units::{int, q_pow, qm1_pow, qp1_pow, ratio, sign, sl2_pow, two_pow};
use crate::gring::MotiveExpr;
use crate::repvar::{
    checked_alpha, rep_jordan, rep_nodal, rep_semisimple, strata_jordan, strata_nopar,
    strata_semisimple, FormulaError,
};
use crate::topology::{ExactScalar, NodeSurface, ParabolicStructure};

fn q() -> MotiveExpr {
    MotiveExpr::q()
}

fn check(g: u32, b: u32) -> Result<(), FormulaError> {
    if g == 0 {
        return Err(FormulaError::GenusZero);
    }
    if b == 0 {
        return Err(FormulaError::NoBranches);
    }
    Ok(())
}

/// `½((q-1)^N + (q+1)^N)`.
pub fn sym_quotient_torus(n: u32) -> MotiveExpr {
    ratio(1, 2) * (qm1_pow(n as i64) + qp1_pow(n as i64))
}

fn irreducible_quotient(rep: MotiveExpr, reducible: &MotiveExpr) -> MotiveExpr {
    (rep - reducible).div_units(1, 1, 1)
}

pub fn assemble_nopar(g: u32, b: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    let rep = rep_nodal(&NodeSurface::single_point(g, b)?)?;
    let red = strata_nopar(g, b)?;
    Ok(sym_quotient_torus(2 * g + b - 1) + irreducible_quotient(rep, &red.reducible_total))
}

/// `[X^ρ ⫽ SL2]` for Jordan punctures.
pub fn jordan_rho_quotient(g: u32, b: u32, s: u32) -> MotiveExpr {
    let (g, b, s) = (g as i64, b as i64, s as i64);
    let n = 2 * g + b - 1;
    (qm1_pow(n) - two_pow(n as u32)) * q_pow(2 * g + b - 3) * qm1_pow(s - 1)
}

/// `[X^υ ⫽ SL2]` for Jordan punctures.
pub fn jordan_upsilon_quotient(g: u32, b: u32, s: u32) -> MotiveExpr {
    let (g, b) = (g as i64, b as i64);
    let n = 2 * g + b - 1;
    let bracket = (int(1) - q()).pow_u(s).div_units(0, 0, 0) - int(1);
    sign(s as i64) * two_pow(n as u32) * q_pow(n).div_units(0, 1, 0) * (bracket.div_units(1, 0, 0) + int(1))
}

pub fn assemble_jordan(g: u32, b: u32, s: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    if s == 0 {
        return assemble_nopar(g, b);
    }
    let rep = rep_jordan(g, b, s)?;
    let red = strata_jordan(g, b, s)?;
    Ok(jordan_rho_quotient(g, b, s)
        + jordan_upsilon_quotient(g, b, s)
        + irreducible_quotient(rep, &red.reducible_total))
}

pub fn assemble_semisimple(g: u32, b: u32, eigs: &[ExactScalar]) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    if eigs.is_empty() {
        return assemble_nopar(g, b);
    }
    let a = checked_alpha(eigs)?;
    let n = (2 * g + b - 1) as i64;
    let rep = rep_semisimple(g, b, eigs)?;
    let red = strata_semisimple(g, b, eigs)?;
    Ok(int(a.alpha_plus as i64) * qm1_pow(n) + irreducible_quotient(rep, &red.reducible_total))
}

/// Closed form without punctures.
pub fn char_closed_nopar(g: u32, b: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    let (g, b) = (g as i64, b as i64);
    let x = (qm1_pow(b) + int(1)) * qm1_pow(2 * g);
    let four_g = two_pow((2 * g) as u32);
    let qq1 = q() * qm1_pow(1) * qp1_pow(1);
    let mut br = q_pow(8) * &x + q_pow(7) * &x - int(2) * q_pow(6) * &x - int(2) * q_pow(5) * &x
        + q_pow(4) * &x
        + q_pow(3) * &x;
    br = br + qm1_pow(3) * q_pow(3) * (qp1_pow(b) - int(1)) * qp1_pow(2 * g + 2);
    let inner = qp1_pow(2) * qm1_pow(2 * g) * (&four_g + &q() - int(3)) * q_pow(2 * g)
        + qm1_pow(2) * qp1_pow(2 * g) * (&four_g + &q() - int(1)) * q_pow(2 * g)
        + int(2) * (qm1_pow(1) * qp1_pow(1)).pow_u((2 * g) as u32) * (q_pow(2 * g) + q_pow(2));
    br = br + qq1.pow_u(b as u32) * inner;
    let tail = int(2) * (&four_g * &(q_pow(4) + q_pow(2) + int(1)) + qp1_pow(2) * qm1_pow(2 * g + 1))
        - q_pow(2) * int(3) * two_pow((2 * g + 1) as u32);
    br = br - qm1_pow(1) * qp1_pow(1) * q_pow(2 * g + 1) * tail;
    Ok(br * ratio(1, 2).div_units(3, 3, 3))
}

/// Closed form with `s` punctures of type `J+` (`s >= 1`).
pub fn char_closed_jordan(g: u32, b: u32, s: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    if s == 0 {
        return Err(FormulaError::WrongCase(
            "the Jordan closed form needs s >= 1; use the non-parabolic form".into(),
        ));
    }
    let (g, b, s) = (g as i64, b as i64, s as i64);
    let four_g = two_pow((2 * g) as u32);
    let qq1b = (q() * qm1_pow(1) * qp1_pow(1)).pow_u(b as u32);
    let q2m1 = qm1_pow(1) * qp1_pow(1);
    let t1 = (&four_g - int(3)) * &qq1b * qm1_pow(2 * g + s);
    let t2 = &qq1b
        * (q() * (&four_g * &(q() + int(2)) + q_pow(2) - q() - int(5)) * qm1_pow(2 * g + s)
            + int(2) * q2m1.pow_u((2 * g + s) as u32)
            + q() * sign(s) * (&four_g * &(q() - int(2)) + q_pow(2) - int(3) * q() + int(3)) * qp1_pow(2 * g + s)
            + (&four_g - int(1)) * sign(s) * qp1_pow(2 * g + s));
    let two_b2g = two_pow((b + 2 * g) as u32);
    let t3 = &q2m1
        * sign(s)
        * &two_b2g
        * q_pow(b)
        * (q_pow(5) - q_pow(4) + q_pow(3) + q2m1.pow_u(2) * (int(1) - q()).pow_u(s as u32) + int(2) * q_pow(2) + q()
            - int(1));
    let t4 = &q2m1 * sign(s + 1) * q_pow(b + 3) * int(3) * &two_b2g;
    Ok((t1 + t2 + t3 + t4) * q_pow(2 * g - 3) * ratio(1, 2).div_units(0, 3, 3))
}

/// Closed form with semisimple punctures; the unlabeled `α` in its last
/// bracket term is read as `α_+`.
pub fn char_closed_semisimple(g: u32, b: u32, eigs: &[ExactScalar]) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    if eigs.is_empty() {
        return Err(FormulaError::WrongCase(
            "the semisimple closed form needs s >= 1; use the non-parabolic form".into(),
        ));
    }
    let a = checked_alpha(eigs)?;
    let (gi, bi, si) = (g as i64, b as i64, eigs.len() as i64);
    let ap = int(a.alpha_plus as i64);
    let t1 = (int(4) * qm1_pow(bi) * &ap * (q_pow(3) - q_pow(bi + 2 * gi + si))).div_units(3, 0, 0);
    let ratio_term = (q() * qp1_pow(-1)).pow(-2 * gi - si + 2).expect("unit power");
    let t2 = qm1_pow(1)
        * qp1_pow(1)
        * sl2_pow(bi - 2)
        * q_pow(2 * gi + si - 1)
        * (ratio_term + qp1_pow(2 * gi + si - 2) + two_pow((2 * gi + si - 1) as u32) - two_pow(si as u32));
    let t3 = int(-2) * qm1_pow(bi) * &ap;
    let t4 = qm1_pow(bi + 1) * &ap;
    let i0 = crate::repvar::interaction_i0(g, eigs.len() as u32, a);
    Ok(qm1_pow(2 * gi - 2) * (t1 + t2 + t3 + t4) + i0 * sl2_pow(bi - 2))
}

/// Interaction term `I_r` of the mixed case.
pub fn interaction_ir(g: u32, r: u32, s: u32, alpha_plus: u32, alpha_minus: u32) -> MotiveExpr {
    let (g, r, s) = (g as i64, r as i64, s as i64);
    let four_g = two_pow((2 * g) as u32);
    let sum = int((alpha_plus + alpha_minus) as i64);
    let bracket = &four_g + &four_g * &q() - int(2) * q() - int(2)
        + qp1_pow(2 * g + r)
        + qp1_pow(1) * (int(1) - two_pow((2 * g - 1) as u32) - ratio(1, 2) * qp1_pow(2 * g + r - 1));
    q_pow(2 * g + s - 1) * qm1_pow(2 * g + r - 1) * sum * bracket
        + q_pow(2 * g + s - 1) * qm1_pow(2 * g + r) * qp1_pow(1) * int(alpha_plus as i64)
}

/// Closed form with `r >= 1` Jordan and `s >= 1` semisimple punctures.
pub fn char_closed_mixed(g: u32, b: u32, r: u32, eigs: &[ExactScalar]) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    if r == 0 || eigs.is_empty() {
        return Err(FormulaError::WrongCase("the mixed closed form needs r >= 1 and s >= 1".into()));
    }
    let a = checked_alpha(eigs)?;
    let s = eigs.len() as u32;
    let (gi, bi, ri, si) = (g as i64, b as i64, r as i64, s as i64);
    let main = q_pow(2 * gi + si - 2)
        * qm1_pow(2 * gi + ri - 2)
        * (two_pow((2 * gi + si - 1) as u32) - two_pow(s) + qp1_pow(2 * gi + ri + si - 2))
        * sl2_pow(bi - 1);
    Ok(main + interaction_ir(g, r, s, a.alpha_plus, a.alpha_minus) * sl2_pow(bi - 2))
}

/// Closed form for the single relation `∏[A_i, B_i] ∏ P_k = -Id`.
pub fn char_closed_twisted(g: u32, b: u32, r: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    let (g, b, r) = (g as i64, b as i64, r as i64);
    let t1 = sign(r + 1)
        * two_pow((2 * g - 1) as u32)
        * qp1_pow(2 * g + r + b - 3)
        * qm1_pow(b - 2)
        * q_pow(2 * g + b - 3);
    let t2 = qm1_pow(2 * g + r + b - 3)
        * qp1_pow(b - 2)
        * q_pow(2 * g + b - 3)
        * (qp1_pow(2 * g + r - 2) + two_pow((2 * g - 1) as u32) - int(1));
    Ok(t1 + t2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Assembled,
    Closed,
    Both,
}

impl std::str::FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "assembled" => Ok(Route::Assembled),
            "closed" => Ok(Route::Closed),
            "both" => Ok(Route::Both),
            _ => Err(format!("unknown route {s:?} (assembled|closed|both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharCase {
    Nopar,
    Jordan,
    Semisimple,
    Mixed,
    Twisted,
}

/// Both routes and their difference. Missing routes are `None`: the mixed
/// and twisted cases have no stratified assembly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharReport {
    pub case: CharCase,
    pub genus: u32,
    pub b: u32,
    pub r: u32,
    pub s: u32,
    pub assembled: Option<MotiveExpr>,
    pub closed_form: Option<MotiveExpr>,
    pub difference: Option<MotiveExpr>,
    pub agrees: Option<bool>,
    pub difference_is_polynomial: Option<bool>,
}

impl CharReport {
    /// The value to present: assembled when available, else the closed form.
    pub fn primary(&self) -> Option<&MotiveExpr> {
        self.assembled.as_ref().or(self.closed_form.as_ref())
    }
}

/// `[Char(X, Q)]` after reducing the parabolic data and replacing the
/// surface by `Σ_{g, b_eff}`.
pub fn char(ns: &NodeSurface, par: &ParabolicStructure, route: Route) -> Result<CharReport, FormulaError> {
    let g = ns.genus();
    check(g, 1)?;
    let red = par.reduce()?;
    let b = ns.b_eff();
    let (r, s) = (red.r, red.s());
    let eigs = &red.eigenvalues;
    let case = match (red.twisted, r, s) {
        (true, _, _) => CharCase::Twisted,
        (false, 0, 0) => CharCase::Nopar,
        (false, _, 0) => CharCase::Jordan,
        (false, 0, _) => CharCase::Semisimple,
        (false, _, _) => CharCase::Mixed,
    };
    let want_assembled = route != Route::Closed;
    let want_closed = route != Route::Assembled;
    let assembled = if want_assembled {
        match case {
            CharCase::Nopar => Some(assemble_nopar(g, b)?),
            CharCase::Jordan => Some(assemble_jordan(g, b, r)?),
            CharCase::Semisimple => Some(assemble_semisimple(g, b, eigs)?),
            CharCase::Mixed | CharCase::Twisted => None,
        }
    } else {
        None
    };
    let closed_form = if want_closed {
        Some(match case {
            CharCase::Nopar => char_closed_nopar(g, b)?,
            CharCase::Jordan => char_closed_jordan(g, b, r)?,
            CharCase::Semisimple => char_closed_semisimple(g, b, eigs)?,
            CharCase::Mixed => char_closed_mixed(g, b, r, eigs)?,
            CharCase::Twisted => char_closed_twisted(g, b, r)?,
        })
    } else {
        None
    };
    if route == Route::Assembled && assembled.is_none() {
        return Err(FormulaError::WrongCase(format!(
            "no stratified assembly for the {case:?} case; use route closed"
        )));
    }
    let difference = match (&assembled, &closed_form) {
        (Some(a), Some(c)) => Some(a - c),
        _ => None,
    };
    Ok(CharReport {
        case,
        genus: g,
        b,
        r,
        s,
        agrees: difference.as_ref().map(MotiveExpr::is_zero),
        difference_is_polynomial: difference.as_ref().map(MotiveExpr::is_polynomial),
        assembled,
        closed_form,
        difference,
    })
}
