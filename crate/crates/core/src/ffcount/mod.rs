//! Point-counting oracle over `SL2(F_p)`.
//!
//! Representation counts come from class-function convolution evaluated at
//! the identity; strata counts from exhaustive enumeration.

mod classfn;
mod group;
mod strata;

pub use classfn::{commutator_distribution, holonomy_indicator, ClassFunction};
pub use group::{build_group, GroupTable, Mat, CACHE_ENV, MAX_PRIME};
pub use strata::{classify_tuple, count_strata, Stratum, StratumCounts, DEFAULT_CAP};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::gring::MotiveExpr;
use crate::topology::{alpha_pm, pow_mod, ExactScalar, HolonomyClass, ParabolicStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("invalid eigenvalue {0}")]
    InvalidEigenvalue(String),
    #[error("eigenvalue {got} does not live in F_{expected}")]
    WrongCharacteristic { expected: u64, got: String },
    #[error("enumeration needs {bound} tuples, above the cap {cap}")]
    TooLarge { bound: u128, cap: u128 },
    #[error("count overflowed 128 bits")]
    Overflow,
}

/// `#{(A_1, B_1, …, C_1, …, C_ν, P_1, …) : ∏[A_i, B_i] ∏ P_k = Id, P_k ∈ h_k}`.
pub fn count_representations(
    g: &GroupTable,
    genus: u32,
    nu: u32,
    holonomies: &[HolonomyClass],
) -> Result<u128, FfError> {
    let free = (g.order() as u128).checked_pow(nu).ok_or(FfError::Overflow)?;
    if genus == 0 && holonomies.is_empty() {
        return Ok(free);
    }
    let comm = commutator_distribution(g);
    let mut f = ClassFunction::delta_identity(g);
    for _ in 0..genus {
        f = f.convolve(&comm, g)?;
    }
    for h in holonomies {
        f = f.convolve(&holonomy_indicator(g, h)?, g)?;
    }
    f.value(g.identity()).checked_mul(free).ok_or(FfError::Overflow)
}

/// Relation data for the oracle: genus, free rank and puncture structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleParams {
    pub genus: u32,
    pub nu: u32,
    pub parabolic: ParabolicStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRecord {
    pub prime: u64,
    pub expected: Option<BigRational>,
    pub actual: Option<BigInt>,
    pub status: Status,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub records: Vec<PrimeRecord>,
}

impl VerificationReport {
    pub fn matched(&self) -> usize {
        self.count(Status::Match)
    }

    pub fn mismatched(&self) -> usize {
        self.count(Status::Mismatch)
    }

    pub fn skipped(&self) -> usize {
        self.count(Status::Skipped)
    }

    fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn all_match(&self) -> bool {
        self.matched() > 0 && self.mismatched() == 0
    }
}

fn legendre(a: u64, p: u64) -> i32 {
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Reduces the puncture data mod `p`; `Err(reason)` means the prime is skipped.
fn holonomies_mod(par: &ParabolicStructure, p: u64) -> Result<Vec<HolonomyClass>, String> {
    let mut residues = Vec::new();
    for xi in &par.eigenvalues {
        let a = xi
            .residue_mod(p)
            .ok_or_else(|| format!("eigenvalue {xi} has no image in F_{p}"))?;
        let red = ExactScalar::finite_field(p, a as i64)
            .map_err(|_| format!("eigenvalue {xi} is {a} mod {p}, one of 0, 1, -1"))?;
        residues.push(red);
    }
    if !residues.is_empty() {
        let symbolic = alpha_pm(&par.eigenvalues).map_err(|e| e.to_string())?;
        let reduced = alpha_pm(&residues).map_err(|e| e.to_string())?;
        if symbolic != reduced {
            return Err(format!(
                "alpha pair changes mod {p}: ({}, {}) becomes ({}, {})",
                symbolic.alpha_plus,
                symbolic.alpha_minus,
                reduced.alpha_plus,
                reduced.alpha_minus
            ));
        }
    }
    let mut out: Vec<HolonomyClass> = par
        .holonomies()
        .into_iter()
        .filter(|h| !matches!(h, HolonomyClass::Semisimple(_)))
        .collect();
    out.extend(residues.into_iter().map(HolonomyClass::Semisimple));
    Ok(out)
}

/// Compares `expr` at each prime with the oracle count.
pub fn verify(
    expr: &MotiveExpr,
    params: &OracleParams,
    primes: &[u64],
) -> Result<VerificationReport, FfError> {
    let mut records = Vec::new();
    for &p in primes {
        let g = GroupTable::load_or_build(p)?;
        let hs = match holonomies_mod(&params.parabolic, p) {
            Ok(hs) => hs,
            Err(reason) => {
                records.push(PrimeRecord {
                    prime: p,
                    expected: None,
                    actual: None,
                    status: Status::Skipped,
                    note: Some(reason),
                });
                continue;
            }
        };
        let expected = expr.eval_at(&BigInt::from(p)).expect("odd prime is not a pole");
        let actual = BigInt::from(count_representations(&g, params.genus, params.nu, &hs)?);
        let ok = expected == BigRational::from_integer(actual.clone());
        let note = if !ok && !params.parabolic.eigenvalues.is_empty() {
            let l: i32 = hs
                .iter()
                .filter_map(|h| match h {
                    HolonomyClass::Semisimple(ExactScalar::FiniteField { a, .. }) => {
                        Some(legendre(*a, p))
                    }
                    _ => None,
                })
                .product();
            Some(format!("product of Legendre symbols of the eigenvalues mod {p} is {l}"))
        } else {
            None
        };
        records.push(PrimeRecord {
            prime: p,
            expected: Some(expected),
            actual: Some(actual),
            status: if ok { Status::Match } else { Status::Mismatch },
            note,
        });
    }
    Ok(VerificationReport { records })
}

/// One stratum comparison: formula value vs enumerated count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumRecord {
    pub prime: u64,
    pub stratum: Stratum,
    pub expected: BigRational,
    pub actual: u64,
}

impl StratumRecord {
    pub fn matches(&self) -> bool {
        self.expected == BigRational::from_integer(self.actual.into())
    }
}

/// Compares per-stratum formulas at `p` with exhaustive classification.
pub fn verify_strata(
    formulas: &[(Stratum, MotiveExpr)],
    params: &OracleParams,
    p: u64,
    cap: u128,
) -> Result<Option<Vec<StratumRecord>>, FfError> {
    let g = GroupTable::load_or_build(p)?;
    let Ok(hs) = holonomies_mod(&params.parabolic, p) else {
        return Ok(None);
    };
    let counts = count_strata(&g, params.genus, params.nu, &hs, cap)?;
    let pick = |s: Stratum| match s {
        Stratum::Irreducible => counts.irreducible,
        Stratum::Iota => counts.iota,
        Stratum::Upsilon => counts.upsilon,
        Stratum::Delta => counts.delta,
        Stratum::Rho => counts.rho,
    };
    let out = formulas
        .iter()
        .map(|(s, e)| StratumRecord {
            prime: p,
            stratum: *s,
            expected: e.eval_at(&BigInt::from(p)).expect("odd prime is not a pole"),
            actual: pick(*s),
        })
        .collect();
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::NodeSurface;

    fn brute(g: &GroupTable, genus: u32, hs: &[HolonomyClass]) -> u128 {
        // enumerate all tuples and test the relation directly
        let inds: Vec<ClassFunction> =
            hs.iter().map(|h| holonomy_indicator(g, h).unwrap()).collect();
        let n = g.order();
        let slots = 2 * genus as usize + hs.len();
        let mut idx = vec![0usize; slots];
        let mut count = 0u128;
        loop {
            let mut prod = g.identity();
            for i in 0..genus as usize {
                prod = g.mul(prod, g.commutator(idx[2 * i], idx[2 * i + 1]));
            }
            let mut ok = true;
            for (k, ind) in inds.iter().enumerate() {
                let pk = idx[2 * genus as usize + k];
                ok &= ind.value(pk) != 0;
                prod = g.mul(prod, pk);
            }
            if ok && prod == g.identity() {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == slots {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn anchor_counts() {
        let g3 = GroupTable::build(3).unwrap();
        assert_eq!(count_representations(&g3, 1, 0, &[]).unwrap(), 168);
        assert_eq!(count_representations(&g3, 1, 0, &[HolonomyClass::JordanPlus]).unwrap(), 0);
        let g5 = GroupTable::build(5).unwrap();
        assert_eq!(count_representations(&g5, 1, 0, &[]).unwrap(), 1080);
        assert_eq!(count_representations(&g5, 1, 1, &[]).unwrap(), 129600);
        assert_eq!(count_representations(&g5, 1, 0, &[HolonomyClass::JordanPlus]).unwrap(), 1440);
        assert_eq!(count_representations(&g5, 0, 2, &[]).unwrap(), 14400);
    }

    #[test]
    fn convolution_equals_brute_force() {
        let g = GroupTable::build(3).unwrap();
        use HolonomyClass::*;
        for hs in [
            vec![],
            vec![JordanPlus],
            vec![MinusId],
            vec![JordanMinus],
            vec![JordanPlus, JordanPlus],
            vec![JordanPlus, JordanMinus],
            vec![MinusId, JordanMinus],
        ] {
            assert_eq!(count_representations(&g, 1, 0, &hs).unwrap(), brute(&g, 1, &hs), "{hs:?}");
        }
    }

    #[test]
    fn free_generators_factor_out() {
        let g = GroupTable::build(5).unwrap();
        let hs = [HolonomyClass::JordanPlus, HolonomyClass::JordanMinus];
        let base = count_representations(&g, 1, 0, &hs).unwrap();
        assert_eq!(count_representations(&g, 1, 2, &hs).unwrap(), base * 120 * 120);
    }

    #[test]
    fn minus_id_pair_cancels() {
        let g = GroupTable::build(5).unwrap();
        use HolonomyClass::*;
        let a = count_representations(&g, 1, 0, &[JordanPlus]).unwrap();
        let b = count_representations(&g, 1, 0, &[MinusId, JordanPlus, MinusId]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_reports_perturbation_everywhere() {
        let q = MotiveExpr::q();
        let sl2 = crate::gring::constants::class_sl2();
        // g=1 smooth: q(q^2-1)(q+4)
        let rep = &sl2 * &(&q + &MotiveExpr::from_int(4));
        let params = OracleParams { genus: 1, nu: 0, parabolic: ParabolicStructure::none() };
        let ok = verify(&rep, &params, &[3, 5, 7]).unwrap();
        assert_eq!(ok.matched(), 3);
        let bad = verify(&(&rep + &MotiveExpr::one()), &params, &[3, 5, 7]).unwrap();
        assert_eq!(bad.mismatched(), 3);
        assert!(!bad.all_match());
        let _ = NodeSurface::smooth(1);
    }

    #[test]
    fn verify_skips_degenerate_eigenvalues() {
        let params = OracleParams {
            genus: 1,
            nu: 0,
            parabolic: "ss=2".parse().unwrap(),
        };
        let r = verify(&MotiveExpr::zero(), &params, &[3]).unwrap();
        assert_eq!(r.skipped(), 1);
        let f5 = OracleParams { genus: 1, nu: 0, parabolic: "ss=F5:2".parse().unwrap() };
        let r = verify(&MotiveExpr::zero(), &f5, &[7]).unwrap();
        assert_eq!(r.skipped(), 1);
    }

    #[test]
    fn verify_skips_when_alpha_changes() {
        // 2 * 4 = 8 ≡ 1 mod 7 but not over Q
        let params = OracleParams { genus: 1, nu: 0, parabolic: "ss=2,4".parse().unwrap() };
        let r = verify(&MotiveExpr::zero(), &params, &[7]).unwrap();
        assert_eq!(r.skipped(), 1);
        assert!(r.records[0].note.as_deref().unwrap().contains("alpha"));
    }
}
