//! Closed-form virtual classes of `SL2` representation varieties over
//! node-surfaces, and of the strata of their reducible loci.
//!
//! Each formula lives in its own function and is written term by term, so a
//! disagreement with the point-count oracle points at exactly one of them.

use serde::Serialize;
use thiserror::Error;

use crate::gring::units::{int, q_pow, qm1_pow, qp1_pow, ratio, sign, sl2_pow, two_pow};
use crate::gring::MotiveExpr;
use crate::topology::{alpha_pm, AlphaPair, ExactScalar, NodeSurface, ParabolicStructure, TopologyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("the formulas are only valid for genus g >= 1")]
    GenusZero,
    #[error("node-surface needs at least one branch (b >= 1)")]
    NoBranches,
    #[error("invalid eigenvalue {0}: must avoid 0, 1 and -1")]
    InvalidEigenvalue(String),
    #[error("{0}")]
    WrongCase(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

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

pub(crate) fn checked_alpha(eigs: &[ExactScalar]) -> Result<AlphaPair, FormulaError> {
    for e in eigs {
        let bad = match e {
            ExactScalar::Rational(x) => ExactScalar::rational(x.clone()).is_err(),
            ExactScalar::FiniteField { p, a } => ExactScalar::finite_field(*p, *a as i64).is_err(),
            ExactScalar::Generic(_) => false,
        };
        if bad {
            return Err(FormulaError::InvalidEigenvalue(e.to_string()));
        }
    }
    Ok(alpha_pm(eigs)?)
}

fn alpha_expr(a: u32) -> MotiveExpr {
    int(a as i64)
}

/// `[Rep(Σ_g)]`, five terms.
pub fn rep_smooth(g: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, 1)?;
    let g = g as i64;
    let q = q();
    let e = 2 * g - 1;
    let c = two_pow((2 * g - 1) as u32);
    let t1 = &c * &qm1_pow(e) * qp1_pow(1) * q_pow(e);
    let t2 = &c * &qp1_pow(e) * qm1_pow(1) * q_pow(e);
    let t3 = (&q + &q_pow(e)) * (qm1_pow(e) * qp1_pow(e));
    let t4 = ratio(1, 2) * qp1_pow(e) * qm1_pow(2) * q_pow(e);
    let t5 = ratio(1, 2) * qm1_pow(e) * qp1_pow(1) * (&q - &int(3)) * q_pow(e);
    Ok(t1 + t2 + t3 + t4 + t5)
}

/// `(q^3 - q)^ν`, one free generator per extra branch.
pub fn cone_factor(ns: &NodeSurface) -> MotiveExpr {
    sl2_pow(ns.free_rank() as i64)
}

pub fn rep_nodal(ns: &NodeSurface) -> Result<MotiveExpr, FormulaError> {
    Ok(rep_smooth(ns.genus())? * cone_factor(ns))
}

/// The three-term Jordan formula for `Σ_g` with `s` punctures of type `J+`,
/// times `(q^3 - q)^{b-1}`, substituted literally for any `s`.
pub fn rep_jordan_formula(g: u32, b: u32, s: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    let (g, s, b) = (g as i64, s as i64, b as i64);
    let e = 2 * g + s - 1;
    let qg = q_pow(2 * g - 1);
    let four_g = two_pow((2 * g) as u32);
    let t1 = qm1_pow(e) * qp1_pow(e) * &qg;
    let t2 = ratio(1, 2) * qm1_pow(e) * &qg * qp1_pow(1) * (&four_g + &q() - int(3));
    let t3 = ratio(1, 2) * sign(s) * qp1_pow(e) * &qg * qm1_pow(1) * (&four_g + &q() - int(1));
    Ok((t1 + t2 + t3) * sl2_pow(b - 1))
}

/// `[Rep(Σ_{g,b}, Q_s^+)]`; `s = 0` is the non-parabolic class.
pub fn rep_jordan(g: u32, b: u32, s: u32) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    if s == 0 {
        return rep_nodal(&NodeSurface::single_point(g, b)?);
    }
    rep_jordan_formula(g, b, s)
}

/// Interaction term `I_0`, including its first summand exactly as printed
/// (which cancels to zero).
pub fn interaction_i0(g: u32, s: u32, a: AlphaPair) -> MotiveExpr {
    let (g, s) = (g as i64, s as i64);
    let sum = alpha_expr(a.alpha_plus) + alpha_expr(a.alpha_minus);
    let inner = q() * qp1_pow(2 * g - 1) + q_pow(2 * g) * qp1_pow(2 * g - 1)
        - q_pow(2 * g) * qp1_pow(2 * g - 1)
        - q() * qp1_pow(2 * g - 1);
    let first = q_pow(s - 1) * qm1_pow(2 * g - 1) * qp1_pow(1) * sum * inner;
    let second = q_pow(2 * g + s - 1) * qm1_pow(2 * g) * qp1_pow(1) * alpha_expr(a.alpha_plus);
    first + second
}

/// `[Rep(Σ_{g,b}, Q(ξ_1, …, ξ_s))]` for semisimple punctures.
pub fn rep_semisimple(g: u32, b: u32, eigs: &[ExactScalar]) -> Result<MotiveExpr, FormulaError> {
    check(g, b)?;
    let a = checked_alpha(eigs)?;
    if eigs.is_empty() {
        return rep_nodal(&NodeSurface::single_point(g, b)?);
    }
    let (gi, si, bi) = (g as i64, eigs.len() as i64, b as i64);
    let bracket = two_pow((2 * gi + si - 1) as u32) - two_pow(si as u32)
        + qp1_pow(2 * gi + si - 2)
        + q_pow(2 - 2 * gi - si) * qp1_pow(2 * gi + si - 2);
    let main = q_pow(2 * gi + si - 1) * qm1_pow(2 * gi - 1) * qp1_pow(1) * bracket;
    Ok((main + interaction_i0(g, eigs.len() as u32, a)) * sl2_pow(bi - 1))
}

/// Reduces the parabolic data and dispatches to the matching formula.
///
/// Without a stratified formula, the twisted case and Jordan plus
/// semisimple data with `α_+ = 0` use `[Rep] = (q³ - q)[Char]`, which holds
/// because neither admits a reducible representation. Mixed data with
/// `α_+ > 0` has reducibles and no formula.
pub fn rep_mixed(ns: &NodeSurface, par: &ParabolicStructure) -> Result<MotiveExpr, FormulaError> {
    let g = ns.genus();
    check(g, 1)?;
    let red = par.reduce()?;
    let b = ns.b_eff();
    let sl2 = sl2_pow(1);
    if red.twisted {
        return Ok(sl2 * crate::charvar::char_closed_twisted(g, b, red.r)?);
    }
    match (red.r, red.s()) {
        (0, 0) => rep_nodal(ns),
        (r, 0) => rep_jordan(g, b, r),
        (0, _) => rep_semisimple(g, b, &red.eigenvalues),
        (r, _) => {
            if checked_alpha(&red.eigenvalues)?.alpha_plus > 0 {
                return Err(FormulaError::WrongCase(
                    "no representation-variety formula for Jordan and semisimple punctures with alpha_+ > 0".into(),
                ));
            }
            Ok(sl2 * crate::charvar::char_closed_mixed(g, b, r, &red.eigenvalues)?)
        }
    }
}

/// Classes of the four reducible strata. `reducible_total` is their sum;
/// `quoted_total` is the closed form for the whole reducible locus as it is
/// printed alongside the strata, kept for comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataReport {
    pub iota: MotiveExpr,
    pub upsilon: MotiveExpr,
    pub delta: MotiveExpr,
    pub rho: MotiveExpr,
    pub reducible_total: MotiveExpr,
    pub quoted_total: MotiveExpr,
}

impl StrataReport {
    fn new(iota: MotiveExpr, upsilon: MotiveExpr, delta: MotiveExpr, rho: MotiveExpr, quoted_total: MotiveExpr) -> Self {
        let reducible_total = &iota + &upsilon + &delta + &rho;
        StrataReport { iota, upsilon, delta, rho, reducible_total, quoted_total }
    }

    pub fn quoted_total_agrees(&self) -> bool {
        self.quoted_total == self.reducible_total
    }

    pub fn strata(&self) -> [(crate::ffcount::Stratum, &MotiveExpr); 4] {
        use crate::ffcount::Stratum;
        [
            (Stratum::Iota, &self.iota),
            (Stratum::Upsilon, &self.upsilon),
            (Stratum::Delta, &self.delta),
            (Stratum::Rho, &self.rho),
        ]
    }
}

pub fn strata_nopar(g: u32, b: u32) -> Result<StrataReport, FormulaError> {
    check(g, b)?;
    let n = (2 * g + b - 1) as i64;
    let two_n = two_pow(n as u32);
    let sl2 = sl2_pow(1);
    let iota = two_n.clone();
    let upsilon = &two_n * &(qm1_pow(1) * qp1_pow(1)) * (q_pow(n) - int(1)).div_units(0, 1, 0);
    let delta = (&sl2 * &ratio(1, 2)) * (qm1_pow(n - 1) + qp1_pow(n - 1)) - &two_n * &q_pow(2);
    let rho = sl2.div_units(1, 1, 0) * (qm1_pow(n) - &two_n) * (q_pow(n - 1) - q());
    let quoted = qp1_pow(1) * qm1_pow(n) * (q_pow(n - 1) - q())
        + (&sl2 * &ratio(1, 2)) * (qm1_pow(n - 1) + qp1_pow(n - 1))
        - two_n * (q_pow(2) - int(1));
    Ok(StrataReport::new(iota, upsilon, delta, rho, quoted))
}

/// `[π_s] = q^{2g-1}(q-1)^s`.
pub fn pi_s(g: u32, s: u32) -> MotiveExpr {
    q_pow(2 * g as i64 - 1) * qm1_pow(s as i64)
}

/// `[π̃_s] = (-1)^s (((1-q)^s - 1)/q + 1)`.
pub fn tilde_pi_s(s: u32) -> MotiveExpr {
    let one_minus_q = int(1) - q();
    sign(s as i64) * ((one_minus_q.pow_u(s) - int(1)).div_units(1, 0, 0) + int(1))
}

/// Jordan strata substituted literally for any `s`.
pub fn strata_jordan_formula(g: u32, b: u32, s: u32) -> Result<StrataReport, FormulaError> {
    check(g, b)?;
    let (gi, bi, si) = (g as i64, b as i64, s as i64);
    let n = 2 * gi + bi - 1;
    let two_n = two_pow(n as u32);
    let upsilon = &two_n * &(qm1_pow(1) * qp1_pow(1)) * q_pow(n).div_units(0, 1, 0) * tilde_pi_s(s);
    let rho = sl2_pow(1).div_units(1, 1, 0) * (qm1_pow(n) - &two_n) * q_pow(bi - 1) * pi_s(g, s);
    let inner = (qm1_pow(1) * qp1_pow(1))
        * two_pow((bi + 2 * gi) as u32)
        * (sign(si) * ((int(1) - q()).pow_u(s) + q() - int(1)) - qm1_pow(si));
    let quoted = (q_pow(bi + 2 * gi - 2) * (inner + int(2) * qp1_pow(1) * qm1_pow(bi + 2 * gi + si)))
        * ratio(1, 2).div_units(0, 1, 0);
    Ok(StrataReport::new(MotiveExpr::zero(), upsilon, MotiveExpr::zero(), rho, quoted))
}

/// Jordan strata; `s = 0` is the non-parabolic stratification.
pub fn strata_jordan(g: u32, b: u32, s: u32) -> Result<StrataReport, FormulaError> {
    check(g, b)?;
    if s == 0 {
        return strata_nopar(g, b);
    }
    strata_jordan_formula(g, b, s)
}

pub fn strata_semisimple(g: u32, b: u32, eigs: &[ExactScalar]) -> Result<StrataReport, FormulaError> {
    check(g, b)?;
    let a = checked_alpha(eigs)?;
    if eigs.is_empty() {
        return strata_nopar(g, b);
    }
    let (gi, bi, si) = (g as i64, b as i64, eigs.len() as i64);
    let n = 2 * gi + bi - 1;
    let ap = alpha_expr(a.alpha_plus);
    let delta = int(2) * &ap * (q_pow(2) + q()) * qm1_pow(n);
    let rho = int(4) * &ap * sl2_pow(1).div_units(1, 1, 0) * qm1_pow(n) * (q_pow(2 * gi + bi + si - 2) - q());
    let quoted = (int(2) * qp1_pow(1) * &ap * qm1_pow(bi + 2 * gi - 1) * (q_pow(3) - int(2) * q_pow(bi + 2 * gi + si)))
        .div_units(2, 0, 0);
    Ok(StrataReport::new(MotiveExpr::zero(), MotiveExpr::zero(), delta, rho, quoted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn at(e: &MotiveExpr, q0: i64) -> BigRational {
        e.eval_at_i64(q0).unwrap()
    }

    fn n(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn poly(c: &[i64]) -> MotiveExpr {
        MotiveExpr::from_int_coeffs(c, 0, 0, 0)
    }

    #[test]
    fn smooth_genus_one() {
        // q(q^2 - 1)(q + 4) = q^4 + 4q^3 - q^2 - 4q
        assert_eq!(rep_smooth(1).unwrap(), poly(&[0, -4, -1, 4, 1]));
        assert_eq!(at(&rep_smooth(1).unwrap(), 3), n(168));
        assert_eq!(at(&rep_smooth(1).unwrap(), 5), n(1080));
        assert_eq!(rep_smooth(0), Err(FormulaError::GenusZero));
    }

    #[test]
    fn cone_and_nodal() {
        assert_eq!(cone_factor(&NodeSurface::smooth(1)), MotiveExpr::one());
        let two = NodeSurface::new(1, vec![2]).unwrap();
        assert_eq!(cone_factor(&two), crate::gring::constants::class_sl2());
        assert_eq!(cone_factor(&NodeSurface::new(1, vec![3, 2]).unwrap()), sl2_pow(3));
        assert_eq!(at(&rep_nodal(&two).unwrap(), 3), n(4032));
        assert_eq!(at(&rep_nodal(&NodeSurface::new(1, vec![3]).unwrap()).unwrap(), 3), n(96768));
    }

    #[test]
    fn jordan_examples() {
        // q(q^2-1)(q+1)(q-3)
        let expect = q() * qm1_pow(1) * qp1_pow(2) * (q() - int(3));
        assert_eq!(rep_jordan(1, 1, 1).unwrap(), expect);
        assert_eq!(at(&expect, 3), n(0));
        assert_eq!(at(&expect, 5), n(1440));
    }

    #[test]
    fn i0_first_summand_vanishes() {
        let a = AlphaPair { alpha_plus: 0, alpha_minus: 1 };
        assert!(interaction_i0(2, 3, a).is_zero());
    }

    #[test]
    fn tilde_pi_values() {
        assert!(tilde_pi_s(1).is_zero());
        assert_eq!(tilde_pi_s(2), q() - int(1));
        // {(c1,c2,c3) in (k*)^3 : c1+c2+c3 = 0} has (q-1)(q-2) points
        assert_eq!(tilde_pi_s(3), (q() - int(1)) * (q() - int(2)));
        assert_eq!(pi_s(1, 2), q() * qm1_pow(2));
    }

    #[test]
    fn nopar_strata_examples() {
        let r = strata_nopar(1, 1).unwrap();
        assert_eq!(r.iota, int(4));
        assert_eq!(r.upsilon, int(4) * qp1_pow(2) * qm1_pow(1));
        let at3: Vec<_> = [&r.iota, &r.upsilon, &r.delta, &r.rho].iter().map(|e| at(e, 3)).collect();
        assert_eq!(at3, vec![n(4), n(128), n(36), n(0)]);
        assert_eq!(at(&r.reducible_total, 3), n(168));
    }

    #[test]
    fn semisimple_strata_examples() {
        let gen: Vec<_> = (0..2).map(|i| ExactScalar::generic(format!("x{i}"))).collect();
        let r = strata_semisimple(1, 1, &gen).unwrap();
        assert!(r.reducible_total.is_zero());
        let two = ExactScalar::integer(2).unwrap();
        let r = strata_semisimple(1, 1, &[two.clone(), two]).unwrap();
        assert_eq!(r.delta, int(2) * (q_pow(2) + q()) * qm1_pow(2));
    }

    #[test]
    fn totals_are_polynomials() {
        for g in 1..=3 {
            for b in 1..=4 {
                assert!(strata_nopar(g, b).unwrap().reducible_total.is_polynomial());
                for s in 1..=3 {
                    assert!(strata_jordan(g, b, s).unwrap().reducible_total.is_polynomial());
                }
            }
        }
    }

    #[test]
    fn mixed_dispatch() {
        let ns = NodeSurface::smooth(1);
        let p: ParabolicStructure = "t=2;j+=1".parse().unwrap();
        assert_eq!(rep_mixed(&ns, &p).unwrap(), rep_jordan(1, 1, 1).unwrap());
        let p: ParabolicStructure = "t=1;ss=2".parse().unwrap();
        let neg = [ExactScalar::integer(-2).unwrap()];
        assert_eq!(rep_mixed(&ns, &p).unwrap(), rep_semisimple(1, 1, &neg).unwrap());
        assert_eq!(rep_mixed(&NodeSurface::smooth(0), &p), Err(FormulaError::GenusZero));
        let p: ParabolicStructure = "j+=1;ss=2,2".parse().unwrap();
        assert!(matches!(rep_mixed(&ns, &p), Err(FormulaError::WrongCase(_))));
        let p: ParabolicStructure = "j+=1;ss=2,3".parse().unwrap();
        assert!(rep_mixed(&ns, &p).is_ok());
    }

    #[test]
    fn invalid_eigenvalue_rejected() {
        let bad = [ExactScalar::Rational(BigRational::from_integer((-1).into()))];
        assert!(matches!(rep_semisimple(1, 1, &bad), Err(FormulaError::InvalidEigenvalue(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn strata_sum_and_sign(g in 1u32..4, b in 1u32..5, s in 1u32..4, p in prop::sample::select(vec![3i64, 5, 7, 11, 13])) {
                let eigs: Vec<ExactScalar> = (0..s).map(|i| ExactScalar::integer(2 + i as i64).unwrap()).collect();
                for rep in [strata_nopar(g, b).unwrap(), strata_jordan(g, b, s).unwrap(), strata_semisimple(g, b, &eigs).unwrap()] {
                    let sum: MotiveExpr = rep.strata().iter().map(|(_, e)| (*e).clone()).sum();
                    prop_assert_eq!(&sum, &rep.reducible_total);
                    for (_, e) in rep.strata() {
                        prop_assert!(at(e, p) >= BigRational::from_integer(0.into()));
                    }
                }
            }

            #[test]
            fn nodal_factorizes(g in 1u32..4, branches in proptest::collection::vec(2u32..5, 0..3)) {
                let ns = NodeSurface::new(g, branches).unwrap();
                let expected = rep_smooth(g).unwrap() * sl2_pow(ns.free_rank() as i64);
                prop_assert_eq!(rep_nodal(&ns).unwrap(), expected);
            }
        }
    }
}
