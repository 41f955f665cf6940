//! Exhaustive classification of relation-satisfying tuples into strata.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classfn::holonomy_indicator;
use super::group::{GroupTable, Mat};
use super::FfError;
use crate::topology::HolonomyClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratum {
    Irreducible,
    Iota,
    Upsilon,
    Delta,
    Rho,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stratum::Irreducible => "irreducible",
            Stratum::Iota => "iota",
            Stratum::Upsilon => "upsilon",
            Stratum::Delta => "delta",
            Stratum::Rho => "rho",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumCounts {
    pub irreducible: u64,
    pub iota: u64,
    pub upsilon: u64,
    pub delta: u64,
    pub rho: u64,
}

impl StratumCounts {
    pub fn total(&self) -> u64 {
        self.irreducible + self.iota + self.upsilon + self.delta + self.rho
    }

    pub fn reducible(&self) -> u64 {
        self.iota + self.upsilon + self.delta + self.rho
    }

    fn bump(&mut self, s: Stratum) {
        match s {
            Stratum::Irreducible => self.irreducible += 1,
            Stratum::Iota => self.iota += 1,
            Stratum::Upsilon => self.upsilon += 1,
            Stratum::Delta => self.delta += 1,
            Stratum::Rho => self.rho += 1,
        }
    }

    fn merge(mut self, o: StratumCounts) -> StratumCounts {
        self.irreducible += o.irreducible;
        self.iota += o.iota;
        self.upsilon += o.upsilon;
        self.delta += o.delta;
        self.rho += o.rho;
        self
    }
}

/// `F_{p^2} = F_p[x]/(x^2 - n)` for the least non-residue `n`.
#[derive(Debug, Clone, Copy)]
struct Fp2 {
    p: u64,
    n: u64,
}

type E = (u64, u64);

impl Fp2 {
    fn new(p: u64) -> Self {
        let n = (2..p)
            .find(|&n| crate::topology::pow_mod(n, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a non-residue");
        Fp2 { p, n }
    }

    fn lift(&self, a: u64) -> E {
        (a % self.p, 0)
    }

    fn add(&self, x: E, y: E) -> E {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    fn sub(&self, x: E, y: E) -> E {
        ((x.0 + self.p - y.0) % self.p, (x.1 + self.p - y.1) % self.p)
    }

    fn mul(&self, x: E, y: E) -> E {
        let p = self.p;
        ((x.0 * y.0 + self.n * (x.1 * y.1 % p)) % p, (x.0 * y.1 + x.1 * y.0) % p)
    }

    /// A square root in `F_{p^2}` of an element of `F_p`.
    fn sqrt_base(&self, a: u64) -> E {
        let p = self.p;
        let a = a % p;
        if let Some(r) = (0..p).find(|r| r * r % p == a) {
            return (r, 0);
        }
        let target = a * crate::topology::inv_mod(self.n, p) % p;
        let r = (0..p).find(|r| r * r % p == target).expect("a/n is a square");
        (0, r)
    }
}

type Line = (E, E);

fn central(m: &Mat) -> bool {
    m[1] == 0 && m[2] == 0 && m[0] == m[3]
}

/// Eigenlines of a non-central matrix over `F_{p^2}` (one or two lines).
fn eigenlines(f: &Fp2, m: &Mat) -> Vec<Line> {
    let p = f.p;
    let [a, b, c, d] = m.map(u64::from);
    if b == 0 && c == 0 {
        return vec![(f.lift(1), f.lift(0)), (f.lift(0), f.lift(1))];
    }
    let t = (a + d) % p;
    let disc = (t * t + 4 * (p - 1)) % p;
    let r = f.sqrt_base(disc);
    let half = f.lift(crate::topology::inv_mod(2, p));
    let lams = [
        f.mul(f.add(f.lift(t), r), half),
        f.mul(f.sub(f.lift(t), r), half),
    ];
    let mut out: Vec<Line> = Vec::new();
    for lam in lams {
        let v = if b != 0 {
            (f.lift(b), f.sub(lam, f.lift(a)))
        } else {
            (f.sub(lam, f.lift(d)), f.lift(c))
        };
        if !out.iter().any(|w| parallel(f, &v, w)) {
            out.push(v);
        }
    }
    out
}

fn parallel(f: &Fp2, v: &Line, w: &Line) -> bool {
    f.sub(f.mul(v.0, w.1), f.mul(v.1, w.0)) == (0, 0)
}

fn is_eigenline(f: &Fp2, m: &Mat, v: &Line) -> bool {
    let [a, b, c, d] = m.map(|x| f.lift(x as u64));
    let mv = (f.add(f.mul(a, v.0), f.mul(b, v.1)), f.add(f.mul(c, v.0), f.mul(d, v.1)));
    parallel(f, v, &mv)
}

fn classify_mats(f: &Fp2, tuple: &[Mat]) -> Stratum {
    let p = f.p;
    let Some(first) = tuple.iter().find(|m| !central(m)) else {
        return Stratum::Iota;
    };
    let common = eigenlines(f, first)
        .into_iter()
        .filter(|v| tuple.iter().all(|m| is_eigenline(f, m, v)))
        .count();
    match common {
        0 => Stratum::Irreducible,
        2 => Stratum::Delta,
        _ => {
            let double = tuple.iter().all(|m| {
                let t = (m[0] as u64 + m[3] as u64) % p;
                t == 2 % p || t == p - 2
            });
            if double {
                Stratum::Upsilon
            } else {
                Stratum::Rho
            }
        }
    }
}

/// Stratum of a tuple of group elements (given by index).
pub fn classify_tuple(g: &GroupTable, tuple: &[usize]) -> Stratum {
    let f = Fp2::new(g.p());
    let mats: Vec<Mat> = tuple.iter().map(|&i| g.element(i)).collect();
    classify_mats(&f, &mats)
}

/// Default enumeration cap for [`count_strata`].
pub const DEFAULT_CAP: u128 = 50_000_000;

/// Enumerates `(A_1, B_1, …, A_g, B_g, C_1, …, C_ν, P_1, …, P_s)` with
/// `∏[A_i, B_i] ∏ P_k = Id`, solving the last constrained entry from the
/// relation, and tallies strata.
pub fn count_strata(
    g: &GroupTable,
    genus: u32,
    nu: u32,
    holonomies: &[HolonomyClass],
    cap: u128,
) -> Result<StratumCounts, FfError> {
    let n = g.order() as u128;
    let s = holonomies.len() as u32;
    let free = (2 * genus + nu + s).saturating_sub(1);
    let bound = n.checked_pow(free).ok_or(FfError::Overflow)?;
    if bound > cap {
        return Err(FfError::TooLarge { bound, cap });
    }
    let supports: Vec<Vec<usize>> = holonomies
        .iter()
        .map(|h| {
            let ind = holonomy_indicator(g, h)?;
            Ok((0..g.order()).filter(|&i| ind.value(i) != 0).collect())
        })
        .collect::<Result<_, FfError>>()?;
    let last_ok: Vec<bool> = match holonomies.last() {
        Some(h) => {
            let ind = holonomy_indicator(g, h)?;
            (0..g.order()).map(|i| ind.value(i) != 0).collect()
        }
        None => Vec::new(),
    };
    let fibers: HashMap<usize, Vec<(usize, usize)>> = if s == 0 && genus > 0 {
        let mut m: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for a in 0..g.order() {
            for b in 0..g.order() {
                m.entry(g.commutator(a, b)).or_default().push((a, b));
            }
        }
        m
    } else {
        HashMap::new()
    };

    // Enumerated slots, in tuple order, before the solved one(s).
    let mut slots: Vec<Vec<usize>> = Vec::new();
    let pairs_enumerated = if s == 0 { genus.saturating_sub(1) } else { genus };
    let all: Vec<usize> = (0..g.order()).collect();
    for _ in 0..2 * pairs_enumerated {
        slots.push(all.clone());
    }
    for _ in 0..nu {
        slots.push(all.clone());
    }
    if s > 0 {
        slots.extend(supports[..supports.len() - 1].iter().cloned());
    }

    let f = Fp2::new(g.p());
    let nslots = slots.len();
    let radices: Vec<usize> = slots.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    let chunk = radices.last().copied().unwrap_or(1).max(1);
    let outer = total / chunk;

    let counts = (0..outer.max(1))
        .into_par_iter()
        .map(|o| {
            let mut acc = StratumCounts::default();
            if total == 0 {
                return acc;
            }
            let mut idx = vec![0usize; nslots];
            let mut rest = o;
            for k in (0..nslots.saturating_sub(1)).rev() {
                idx[k] = rest % radices[k];
                rest /= radices[k];
            }
            let inner = if nslots == 0 { 1 } else { chunk };
            let mut tuple: Vec<Mat> = Vec::with_capacity(nslots + 3);
            for last in 0..inner {
                if nslots > 0 {
                    idx[nslots - 1] = last;
                }
                let chosen: Vec<usize> = (0..nslots).map(|k| slots[k][idx[k]]).collect();
                // product of enumerated commutators, then enumerated punctures
                let mut prod = g.identity();
                for i in 0..pairs_enumerated as usize {
                    prod = g.mul(prod, g.commutator(chosen[2 * i], chosen[2 * i + 1]));
                }
                let c_enum = 2 * pairs_enumerated as usize;
                if s > 0 {
                    for &pk in &chosen[c_enum + nu as usize..] {
                        prod = g.mul(prod, pk);
                    }
                    let solved = g.inv(prod);
                    if !last_ok[solved] {
                        continue;
                    }
                    tuple.clear();
                    tuple.extend(chosen.iter().map(|&i| g.element(i)));
                    tuple.push(g.element(solved));
                    acc.bump(classify_mats(&f, &tuple));
                } else if genus > 0 {
                    let target = g.inv(prod);
                    if let Some(pairs) = fibers.get(&target) {
                        for &(a, b) in pairs {
                            tuple.clear();
                            tuple.extend(chosen[..c_enum].iter().map(|&i| g.element(i)));
                            tuple.push(g.element(a));
                            tuple.push(g.element(b));
                            tuple.extend(chosen[c_enum..].iter().map(|&i| g.element(i)));
                            acc.bump(classify_mats(&f, &tuple));
                        }
                    }
                } else {
                    tuple.clear();
                    tuple.extend(chosen.iter().map(|&i| g.element(i)));
                    acc.bump(classify_mats(&f, &tuple));
                }
            }
            acc
        })
        .reduce(StratumCounts::default, StratumCounts::merge);
    Ok(counts)
}
