//! Class functions on `SL2(F_p)` and their convolution.

use rayon::prelude::*;

use super::group::GroupTable;
use super::FfError;
use crate::topology::{ExactScalar, HolonomyClass};

/// Integer-valued function on the group, constant on conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    values: Vec<u128>,
}

impl ClassFunction {
    /// Builds from per-class values, in the order of [`GroupTable::classes`].
    pub fn from_class_values(g: &GroupTable, per_class: &[u128]) -> Self {
        let values = (0..g.order()).map(|i| per_class[g.class_of(i)]).collect();
        ClassFunction { values }
    }

    /// Checks class constancy before accepting the vector.
    pub fn from_values(g: &GroupTable, values: Vec<u128>) -> Option<Self> {
        let ok = g
            .classes()
            .iter()
            .all(|cl| cl.iter().all(|&i| values[i as usize] == values[cl[0] as usize]));
        (ok && values.len() == g.order()).then_some(ClassFunction { values })
    }

    pub fn delta_identity(g: &GroupTable) -> Self {
        let mut values = vec![0; g.order()];
        values[g.identity()] = 1;
        ClassFunction { values }
    }

    pub fn value(&self, i: usize) -> u128 {
        self.values[i]
    }

    pub fn values(&self) -> &[u128] {
        &self.values
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn total(&self) -> Option<u128> {
        self.values.iter().try_fold(0u128, |acc, &v| acc.checked_add(v))
    }

    /// `(f * h)(x) = Σ_y f(y) h(y⁻¹ x)`, evaluated on class representatives.
    pub fn convolve(&self, h: &ClassFunction, g: &GroupTable) -> Result<ClassFunction, FfError> {
        let support: Vec<usize> = (0..g.order()).filter(|&y| self.values[y] != 0).collect();
        let per_class = g
            .classes()
            .par_iter()
            .map(|cl| {
                let x = cl[0] as usize;
                support.iter().try_fold(0u128, |acc, &y| {
                    let hv = h.values[g.mul(g.inv(y), x)];
                    self.values[y]
                        .checked_mul(hv)
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(FfError::Overflow)
                })
            })
            .collect::<Result<Vec<u128>, FfError>>()?;
        Ok(Self::from_class_values(g, &per_class))
    }
}

/// `f(x) = #{(a, b) : a b a⁻¹ b⁻¹ = x}`.
pub fn commutator_distribution(g: &GroupTable) -> ClassFunction {
    let n = g.order();
    let values = (0..n)
        .into_par_iter()
        .fold(
            || vec![0u128; n],
            |mut acc, a| {
                for b in 0..n {
                    acc[g.commutator(a, b)] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u128; n],
            |mut x, y| {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
                x
            },
        );
    ClassFunction { values }
}

/// Eigenvalue `ξ` as a residue mod `p`, rejecting `0` and `±1`.
pub(crate) fn field_eigenvalue(g: &GroupTable, xi: &ExactScalar) -> Result<u64, FfError> {
    let p = g.p();
    match xi {
        ExactScalar::FiniteField { p: q, a } if *q == p => {
            if *a == 0 || *a == 1 || *a == p - 1 {
                return Err(FfError::InvalidEigenvalue(format!("{a} mod {p}")));
            }
            Ok(*a)
        }
        other => Err(FfError::WrongCharacteristic { expected: p, got: other.to_string() }),
    }
}

/// Indicator of the `F_p`-points of the closure orbit of the holonomy class.
pub fn holonomy_indicator(g: &GroupTable, h: &HolonomyClass) -> Result<ClassFunction, FfError> {
    let p = g.p();
    let (id, mid) = (g.identity(), g.minus_identity());
    let pick: Box<dyn Fn(usize) -> bool> = match h {
        HolonomyClass::MinusId => Box::new(move |i| i == mid),
        HolonomyClass::JordanPlus => Box::new(move |i| g.trace(i) == 2 % p && i != id),
        HolonomyClass::JordanMinus => Box::new(move |i| g.trace(i) == p - 2 && i != mid),
        HolonomyClass::Semisimple(xi) => {
            let a = field_eigenvalue(g, xi)?;
            let t = (a + crate::topology::inv_mod(a, p)) % p;
            Box::new(move |i| g.trace(i) == t)
        }
    };
    let values = (0..g.order()).map(|i| u128::from(pick(i))).collect();
    Ok(ClassFunction { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_convolve(f: &ClassFunction, h: &ClassFunction, g: &GroupTable) -> Vec<u128> {
        let mut out = vec![0u128; g.order()];
        for y in 0..g.order() {
            for z in 0..g.order() {
                out[g.mul(y, z)] += f.value(y) * h.value(z);
            }
        }
        out
    }

    #[test]
    fn commutator_distribution_facts() {
        for p in [3, 5] {
            let g = GroupTable::build(p).unwrap();
            let f = commutator_distribution(&g);
            let n = g.order() as u128;
            assert_eq!(f.total(), Some(n * n));
            assert!(ClassFunction::from_values(&g, f.values().to_vec()).is_some());
            assert_eq!(f.value(g.identity()), n * g.classes().len() as u128);
        }
        let g = GroupTable::build(3).unwrap();
        assert_eq!(commutator_distribution(&g).value(g.identity()), 168);
    }

    #[test]
    fn convolution_matches_naive() {
        let g = GroupTable::build(3).unwrap();
        let f = commutator_distribution(&g);
        let j = holonomy_indicator(&g, &HolonomyClass::JordanPlus).unwrap();
        let fj = f.convolve(&j, &g).unwrap();
        assert_eq!(fj.values(), naive_convolve(&f, &j, &g).as_slice());
        let ff = f.convolve(&f, &g).unwrap();
        assert_eq!(ff.values(), naive_convolve(&f, &f, &g).as_slice());
    }

    #[test]
    fn indicator_sizes() {
        for p in [3u64, 5, 7] {
            let g = GroupTable::build(p).unwrap();
            let sz = |h: HolonomyClass| holonomy_indicator(&g, &h).unwrap().support_size() as u64;
            assert_eq!(sz(HolonomyClass::MinusId), 1);
            assert_eq!(sz(HolonomyClass::JordanPlus), p * p - 1);
            assert_eq!(sz(HolonomyClass::JordanMinus), p * p - 1);
            if p > 3 {
                let xi = ExactScalar::finite_field(p, 2).unwrap();
                assert_eq!(sz(HolonomyClass::Semisimple(xi)), p * p + p);
            }
        }
    }

    #[test]
    fn semisimple_needs_matching_field() {
        let g = GroupTable::build(5).unwrap();
        let other = ExactScalar::finite_field(7, 2).unwrap();
        assert!(matches!(
            holonomy_indicator(&g, &HolonomyClass::Semisimple(other)),
            Err(FfError::WrongCharacteristic { .. })
        ));
    }
}
