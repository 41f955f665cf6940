//! Node-surfaces, parabolic structures and their combinatorial reductions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("conic point with {0} branch(es); every conic point needs at least 2")]
    TooFewBranches(u32),
    #[error("invalid eigenvalue {0}: must avoid 0, 1 and -1")]
    InvalidEigenvalue(String),
    #[error("{0} is not an odd prime")]
    BadModulus(u64),
    #[error("cannot negate generic eigenvalue {0}")]
    NegationUndefined(String),
    #[error("eigenvalues mix incompatible scalar kinds")]
    MixedScalarKinds,
    #[error("parse error: {0}")]
    Parse(String),
}

impl TopologyError {
    /// Parse failures are usage errors; everything else is a domain error.
    pub fn is_parse(&self) -> bool {
        matches!(self, TopologyError::Parse(_))
    }
}

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// An eigenvalue `ξ` of a semisimple puncture.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    FiniteField { p: u64, a: u64 },
    /// No multiplicative relations with anything.
    Generic(String),
}

impl ExactScalar {
    pub fn rational(x: BigRational) -> Result<Self, TopologyError> {
        if x.is_zero() || x.abs().is_one() {
            return Err(TopologyError::InvalidEigenvalue(x.to_string()));
        }
        Ok(ExactScalar::Rational(x))
    }

    pub fn integer(n: i64) -> Result<Self, TopologyError> {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn finite_field(p: u64, a: i64) -> Result<Self, TopologyError> {
        if !is_odd_prime(p) {
            return Err(TopologyError::BadModulus(p));
        }
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 || a == 1 || a == p - 1 {
            return Err(TopologyError::InvalidEigenvalue(format!("{a} mod {p}")));
        }
        Ok(ExactScalar::FiniteField { p, a })
    }

    pub fn generic(label: impl Into<String>) -> Self {
        ExactScalar::Generic(label.into())
    }

    pub fn negate(&self) -> Result<Self, TopologyError> {
        match self {
            ExactScalar::Rational(x) => Ok(ExactScalar::Rational(-x)),
            ExactScalar::FiniteField { p, a } => Ok(ExactScalar::FiniteField { p: *p, a: p - a }),
            ExactScalar::Generic(l) => Err(TopologyError::NegationUndefined(l.clone())),
        }
    }

    /// Residue modulo `p`, or `None` when the scalar has no image in `F_p`.
    pub fn residue_mod(&self, p: u64) -> Option<u64> {
        match self {
            ExactScalar::Rational(x) => {
                let pb = BigInt::from(p);
                let n = x.numer().mod_floor(&pb).to_u64()?;
                let d = x.denom().mod_floor(&pb).to_u64()?;
                if d == 0 {
                    return None;
                }
                Some(((n as u128 * inv_mod(d, p) as u128) % p as u128) as u64)
            }
            ExactScalar::FiniteField { p: fp, a } => (*fp == p).then_some(*a),
            ExactScalar::Generic(_) => None,
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(x) => write!(f, "{x}"),
            ExactScalar::FiniteField { p, a } => write!(f, "F{p}:{a}"),
            ExactScalar::Generic(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HolonomyClass {
    MinusId,
    JordanPlus,
    JordanMinus,
    Semisimple(ExactScalar),
}

/// Normalization genus plus one branch count per conic point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeSurface {
    genus: u32,
    branches: Vec<u32>,
}

impl NodeSurface {
    pub fn new(genus: u32, mut branches: Vec<u32>) -> Result<Self, TopologyError> {
        if let Some(&r) = branches.iter().find(|&&r| r < 2) {
            return Err(TopologyError::TooFewBranches(r));
        }
        branches.sort_unstable_by(|a, b| b.cmp(a));
        Ok(NodeSurface { genus, branches })
    }

    pub fn smooth(genus: u32) -> Self {
        NodeSurface { genus, branches: Vec::new() }
    }

    /// `Σ_{g,b}`: one conic point with `b` branches (smooth when `b = 1`).
    pub fn single_point(genus: u32, b: u32) -> Result<Self, TopologyError> {
        match b {
            0 => Err(TopologyError::TooFewBranches(0)),
            1 => Ok(Self::smooth(genus)),
            _ => Self::new(genus, vec![b]),
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn branches(&self) -> &[u32] {
        &self.branches
    }

    pub fn free_rank(&self) -> u32 {
        self.branches.iter().map(|r| r - 1).sum()
    }

    /// Branch count of the single-point surface with the same free rank.
    pub fn b_eff(&self) -> u32 {
        self.free_rank() + 1
    }
}

pub fn free_rank(ns: &NodeSurface) -> u32 {
    ns.free_rank()
}

impl fmt::Display for NodeSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={}", self.genus)?;
        if !self.branches.is_empty() {
            let bs: Vec<String> = self.branches.iter().map(u32::to_string).collect();
            write!(f, ";branches={}", bs.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ParabolicStructure {
    pub t: u32,
    pub r_plus: u32,
    pub r_minus: u32,
    pub eigenvalues: Vec<ExactScalar>,
}

impl ParabolicStructure {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn jordan(r: u32) -> Self {
        ParabolicStructure { r_plus: r, ..Self::default() }
    }

    pub fn semisimple(eigenvalues: Vec<ExactScalar>) -> Self {
        ParabolicStructure { eigenvalues, ..Self::default() }
    }

    pub fn s(&self) -> u32 {
        self.eigenvalues.len() as u32
    }

    pub fn r(&self) -> u32 {
        self.r_plus + self.r_minus
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0 && self.r() == 0 && self.eigenvalues.is_empty()
    }

    pub fn sigma(&self) -> i32 {
        if (self.r_minus + self.t) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Puncture holonomies in a fixed order: `-Id`, `J+`, `J-`, semisimple.
    pub fn holonomies(&self) -> Vec<HolonomyClass> {
        let mut out = Vec::new();
        out.extend((0..self.t).map(|_| HolonomyClass::MinusId));
        out.extend((0..self.r_plus).map(|_| HolonomyClass::JordanPlus));
        out.extend((0..self.r_minus).map(|_| HolonomyClass::JordanMinus));
        out.extend(self.eigenvalues.iter().cloned().map(HolonomyClass::Semisimple));
        out
    }

    pub fn reduce(&self) -> Result<ReducedParabolic, TopologyError> {
        let r = self.r();
        let mut eigenvalues = self.eigenvalues.clone();
        let mut twisted = false;
        if self.sigma() == -1 {
            match eigenvalues.first_mut() {
                Some(first) => *first = first.negate()?,
                None => twisted = true,
            }
        }
        Ok(ReducedParabolic { r, eigenvalues, twisted })
    }
}

pub fn sigma(p: &ParabolicStructure) -> i32 {
    p.sigma()
}

pub fn reduce(p: &ParabolicStructure) -> Result<ReducedParabolic, TopologyError> {
    p.reduce()
}

/// `r` Jordan-plus punctures, semisimple eigenvalues, and whether a single
/// `-Id` puncture remains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedParabolic {
    pub r: u32,
    pub eigenvalues: Vec<ExactScalar>,
    pub twisted: bool,
}

impl ReducedParabolic {
    pub fn s(&self) -> u32 {
        self.eigenvalues.len() as u32
    }

    pub fn to_parabolic(&self) -> ParabolicStructure {
        ParabolicStructure {
            t: u32::from(self.twisted),
            r_plus: self.r,
            r_minus: 0,
            eigenvalues: self.eigenvalues.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphaPair {
    pub alpha_plus: u32,
    pub alpha_minus: u32,
}

enum Kind {
    Rational,
    Field(u64),
    Generic,
}

fn common_kind(eigs: &[ExactScalar]) -> Result<Kind, TopologyError> {
    let mut kind: Option<Kind> = None;
    for e in eigs {
        let k = match e {
            ExactScalar::Rational(_) => Kind::Rational,
            ExactScalar::FiniteField { p, .. } => Kind::Field(*p),
            ExactScalar::Generic(_) => Kind::Generic,
        };
        kind = match (kind, k) {
            (None, k) => Some(k),
            (Some(Kind::Rational), Kind::Rational) => Some(Kind::Rational),
            (Some(Kind::Generic), Kind::Generic) => Some(Kind::Generic),
            (Some(Kind::Field(a)), Kind::Field(b)) if a == b => Some(Kind::Field(a)),
            _ => return Err(TopologyError::MixedScalarKinds),
        };
    }
    Ok(kind.unwrap_or(Kind::Rational))
}

/// Halved counts of sign tuples whose signed product is `+1` and `-1`.
pub fn alpha_pm(eigenvalues: &[ExactScalar]) -> Result<AlphaPair, TopologyError> {
    let kind = common_kind(eigenvalues)?;
    let s = eigenvalues.len();
    let (mut plus, mut minus) = (0u32, 0u32);
    match kind {
        Kind::Generic => {}
        Kind::Rational => {
            let xs: Vec<&BigRational> = eigenvalues
                .iter()
                .map(|e| match e {
                    ExactScalar::Rational(x) => x,
                    _ => unreachable!(),
                })
                .collect();
            for mask in 0u64..(1u64 << s) {
                let mut prod = BigRational::one();
                for (i, x) in xs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        prod /= *x;
                    } else {
                        prod *= *x;
                    }
                }
                if prod.is_one() {
                    plus += 1;
                } else if (-prod).is_one() {
                    minus += 1;
                }
            }
        }
        Kind::Field(p) => {
            let xs: Vec<(u64, u64)> = eigenvalues
                .iter()
                .map(|e| match e {
                    ExactScalar::FiniteField { a, .. } => (*a, inv_mod(*a, p)),
                    _ => unreachable!(),
                })
                .collect();
            for mask in 0u64..(1u64 << s) {
                let mut prod = 1u64;
                for (i, &(x, xi)) in xs.iter().enumerate() {
                    let f = if mask >> i & 1 == 1 { xi } else { x };
                    prod = ((prod as u128 * f as u128) % p as u128) as u64;
                }
                if prod == 1 {
                    plus += 1;
                } else if prod == p - 1 {
                    minus += 1;
                }
            }
        }
    }
    Ok(AlphaPair { alpha_plus: plus / 2, alpha_minus: minus / 2 })
}

// ---- text grammar -------------------------------------------------------

fn parse_err(msg: impl Into<String>) -> TopologyError {
    TopologyError::Parse(msg.into())
}

fn fields(s: &str) -> Result<Vec<(String, String)>, TopologyError> {
    let mut out = Vec::new();
    for part in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key=value, got {part:?}")))?;
        out.push((k.trim().to_ascii_lowercase(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_u32(key: &str, v: &str) -> Result<u32, TopologyError> {
    v.parse().map_err(|_| parse_err(format!("{key}: not a nonnegative integer: {v:?}")))
}

fn parse_branches(v: &str) -> Result<Vec<u32>, TopologyError> {
    v.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_u32("branches", x))
        .collect()
}

impl FromStr for NodeSurface {
    type Err = TopologyError;

    /// `g=2;branches=3,2`; `branches` may be omitted for a smooth surface.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut genus = None;
        let mut branches = Vec::new();
        for (k, v) in fields(s)? {
            match k.as_str() {
                "g" | "genus" => genus = Some(parse_u32("g", &v)?),
                "branches" | "b" => branches = parse_branches(&v)?,
                _ => return Err(parse_err(format!("unknown surface key {k:?}"))),
            }
        }
        let genus = genus.ok_or_else(|| parse_err("surface needs g=<genus>"))?;
        NodeSurface::new(genus, branches)
    }
}

fn parse_scalar_item(item: &str) -> Result<BigRational, TopologyError> {
    let bad = || parse_err(format!("eigenvalue {item:?}"));
    let (n, d) = match item.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (item, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `2,3` (rationals), `F5:2,3` (residues mod 5) or `generic:3`.
pub fn parse_eigenvalues(v: &str) -> Result<Vec<ExactScalar>, TopologyError> {
    let v = v.trim();
    if v.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(n) = v.strip_prefix("generic:") {
        let n = parse_u32("ss", n.trim())?;
        return Ok((1..=n).map(|i| ExactScalar::generic(format!("x{i}"))).collect());
    }
    let items = |body: &str| -> Vec<String> {
        body.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
    };
    if let Some(rest) = v.strip_prefix('F').or_else(|| v.strip_prefix('f')) {
        let (p, body) = rest
            .split_once(':')
            .ok_or_else(|| parse_err(format!("expected F<p>:<residues>, got {v:?}")))?;
        let p: u64 = p.trim().parse().map_err(|_| parse_err(format!("modulus {p:?}")))?;
        return items(body)
            .iter()
            .map(|x| {
                let a: i64 = x.parse().map_err(|_| parse_err(format!("residue {x:?}")))?;
                ExactScalar::finite_field(p, a)
            })
            .collect();
    }
    items(v)
        .iter()
        .map(|x| ExactScalar::rational(parse_scalar_item(x)?))
        .collect()
}

fn render_eigenvalues(eigs: &[ExactScalar]) -> String {
    if eigs.is_empty() {
        return String::new();
    }
    if eigs.iter().all(|e| matches!(e, ExactScalar::Generic(_))) {
        return format!("generic:{}", eigs.len());
    }
    if let Some(ExactScalar::FiniteField { p, .. }) = eigs.first() {
        let same = eigs
            .iter()
            .all(|e| matches!(e, ExactScalar::FiniteField { p: q, .. } if q == p));
        if same {
            let rs: Vec<String> = eigs
                .iter()
                .map(|e| match e {
                    ExactScalar::FiniteField { a, .. } => a.to_string(),
                    _ => unreachable!(),
                })
                .collect();
            return format!("F{p}:{}", rs.join(","));
        }
    }
    eigs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl FromStr for ParabolicStructure {
    type Err = TopologyError;

    /// `t=1;j+=2;j-=0;ss=2,3`; every key is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = ParabolicStructure::default();
        for (k, v) in fields(s)? {
            match k.as_str() {
                "t" => out.t = parse_u32("t", &v)?,
                "j+" => out.r_plus = parse_u32("j+", &v)?,
                "j-" => out.r_minus = parse_u32("j-", &v)?,
                "ss" => out.eigenvalues = parse_eigenvalues(&v)?,
                _ => return Err(parse_err(format!("unknown parabolic key {k:?}"))),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ParabolicStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={};j+={};j-={}", self.t, self.r_plus, self.r_minus)?;
        if !self.eigenvalues.is_empty() {
            write!(f, ";ss={}", render_eigenvalues(&self.eigenvalues))?;
        }
        Ok(())
    }
}

// ---- JSON forms ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceWire {
    g: u32,
    #[serde(default)]
    branches: Vec<u32>,
}

impl Serialize for NodeSurface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SurfaceWire { g: self.genus, branches: self.branches.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NodeSurface {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = SurfaceWire::deserialize(d)?;
        NodeSurface::new(w.g, w.branches).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParabolicWire {
    #[serde(default)]
    t: u32,
    #[serde(default, rename = "j+")]
    j_plus: u32,
    #[serde(default, rename = "j-")]
    j_minus: u32,
    #[serde(default)]
    ss: String,
}

impl Serialize for ParabolicStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ParabolicWire {
            t: self.t,
            j_plus: self.r_plus,
            j_minus: self.r_minus,
            ss: render_eigenvalues(&self.eigenvalues),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParabolicStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ParabolicWire::deserialize(d)?;
        Ok(ParabolicStructure {
            t: w.t,
            r_plus: w.j_plus,
            r_minus: w.j_minus,
            eigenvalues: parse_eigenvalues(&w.ss).map_err(serde::de::Error::custom)?,
        })
    }
}
