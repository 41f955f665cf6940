//! Full enumeration of `SL2(F_p)` with conjugacy data and an on-disk cache.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::FfError;
use crate::topology::is_odd_prime;

/// Largest prime accepted; keeps the `p^4` index lookup and `|G|` tractable.
pub const MAX_PRIME: u64 = 47;

/// Directory holding cached group tables; unset means no caching.
pub const CACHE_ENV: &str = "NODEVAR_GROUP_CACHE";

const MAGIC: &[u8; 4] = b"NVGT";
const VERSION: u32 = 1;

pub type Mat = [u8; 4];

#[derive(Debug, Clone)]
pub struct GroupTable {
    p: u32,
    elements: Vec<Mat>,
    lookup: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
    identity: u32,
    minus_identity: u32,
}

fn check_prime(p: u64) -> Result<(), FfError> {
    if p == 2 {
        return Err(FfError::EvenCharacteristic);
    }
    if !is_odd_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    if p > MAX_PRIME {
        return Err(FfError::PrimeTooLarge(p));
    }
    Ok(())
}

impl GroupTable {
    pub fn build(p: u64) -> Result<Self, FfError> {
        check_prime(p)?;
        let pu = p as u32;
        let mut elements = Vec::with_capacity((p * p * p - p) as usize);
        for a in 0..pu {
            for b in 0..pu {
                for c in 0..pu {
                    for d in 0..pu {
                        if (a * d + pu * pu - b * c) % pu == 1 {
                            elements.push([a as u8, b as u8, c as u8, d as u8]);
                        }
                    }
                }
            }
        }
        let classes = conjugacy_classes(pu, &elements);
        Ok(Self::assemble(pu, elements, classes))
    }

    fn assemble(p: u32, elements: Vec<Mat>, classes: Vec<Vec<u32>>) -> Self {
        let n = elements.len();
        let mut lookup = vec![u32::MAX; (p as usize).pow(4)];
        for (i, m) in elements.iter().enumerate() {
            lookup[key(p, m)] = i as u32;
        }
        let find = |m: &Mat| lookup[key(p, m)];
        let inv: Vec<u32> = elements.iter().map(|m| find(&inverse(p, m))).collect();
        let trace = elements.iter().map(|m| (m[0] as u32 + m[3] as u32) % p).collect();
        let mut class_of = vec![0u32; n];
        for (k, cl) in classes.iter().enumerate() {
            for &i in cl {
                class_of[i as usize] = k as u32;
            }
        }
        let identity = find(&[1, 0, 0, 1]);
        let m1 = (p - 1) as u8;
        let minus_identity = find(&[m1, 0, 0, m1]);
        GroupTable { p, elements, lookup, inv, trace, class_of, classes, identity, minus_identity }
    }

    /// Loads from the cache directory in [`CACHE_ENV`] if possible, otherwise
    /// builds (and tries to write the cache).
    pub fn load_or_build(p: u64) -> Result<Self, FfError> {
        check_prime(p)?;
        let Some(dir) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
            return Self::build(p);
        };
        Self::load_or_build_in(p, &dir)
    }

    pub fn load_or_build_in(p: u64, dir: &Path) -> Result<Self, FfError> {
        let path = cache_path(dir, p);
        if let Ok(g) = Self::read_cache(&path) {
            if g.p as u64 == p {
                return Ok(g);
            }
        }
        let g = Self::build(p)?;
        let _ = fs::create_dir_all(dir).and_then(|_| g.write_cache(&path));
        Ok(g)
    }

    pub fn write_cache(&self, path: &Path) -> io::Result<()> {
        let mut buf = Vec::with_capacity(16 + 8 * self.elements.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&self.p.to_le_bytes());
        buf.extend_from_slice(&(self.elements.len() as u32).to_le_bytes());
        for m in &self.elements {
            buf.extend_from_slice(m);
        }
        buf.extend_from_slice(&(self.classes.len() as u32).to_le_bytes());
        for cl in &self.classes {
            buf.extend_from_slice(&(cl.len() as u32).to_le_bytes());
            for &i in cl {
                buf.extend_from_slice(&i.to_le_bytes());
            }
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &buf)?;
        fs::rename(tmp, path)
    }

    pub fn read_cache(path: &Path) -> io::Result<Self> {
        let bytes = fs::read(path)?;
        let bad = |what: &str| io::Error::new(io::ErrorKind::InvalidData, what.to_string());
        let mut pos = 0usize;
        let mut take = |k: usize| -> io::Result<&[u8]> {
            let s = bytes.get(pos..pos + k).ok_or_else(|| bad("truncated"))?;
            pos += k;
            Ok(s)
        };
        if take(4)? != MAGIC {
            return Err(bad("magic"));
        }
        let u32_at = |s: &[u8]| u32::from_le_bytes([s[0], s[1], s[2], s[3]]);
        if u32_at(take(4)?) != VERSION {
            return Err(bad("version"));
        }
        let p = u32_at(take(4)?);
        if check_prime(p as u64).is_err() {
            return Err(bad("prime"));
        }
        let n = u32_at(take(4)?) as usize;
        if n != (p as usize).pow(3) - p as usize {
            return Err(bad("order"));
        }
        let mut elements = Vec::with_capacity(n);
        for _ in 0..n {
            let s = take(4)?;
            let m = [s[0], s[1], s[2], s[3]];
            let (a, b, c, d) = (m[0] as u32, m[1] as u32, m[2] as u32, m[3] as u32);
            if m.iter().any(|&x| x as u32 >= p) || (a * d + p * p - b * c) % p != 1 {
                return Err(bad("element"));
            }
            elements.push(m);
        }
        let nc = u32_at(take(4)?) as usize;
        let mut classes = Vec::with_capacity(nc);
        let mut seen = vec![false; n];
        for _ in 0..nc {
            let k = u32_at(take(4)?) as usize;
            let mut cl = Vec::with_capacity(k);
            for _ in 0..k {
                let i = u32_at(take(4)?);
                if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                    return Err(bad("class partition"));
                }
                cl.push(i);
            }
            classes.push(cl);
        }
        if seen.iter().any(|s| !s) || pos != bytes.len() {
            return Err(bad("class partition"));
        }
        Ok(Self::assemble(p, elements, classes))
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> Mat {
        self.elements[i]
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        if m.iter().any(|&x| x as u32 >= self.p) {
            return None;
        }
        let i = self.lookup[key(self.p, m)];
        (i != u32::MAX).then_some(i as usize)
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.lookup[key(self.p, &product(self.p, &self.elements[i], &self.elements[j]))] as usize
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn trace(&self, i: usize) -> u64 {
        self.trace[i] as u64
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    pub fn minus_identity(&self) -> usize {
        self.minus_identity as usize
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i] as usize
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let aba = self.mul(ab, self.inv(a));
        self.mul(aba, self.inv(b))
    }
}

pub fn build_group(p: u64) -> Result<GroupTable, FfError> {
    GroupTable::load_or_build(p)
}

fn cache_path(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("sl2_f{p}.v{VERSION}.bin"))
}

fn key(p: u32, m: &Mat) -> usize {
    let p = p as usize;
    ((m[0] as usize * p + m[1] as usize) * p + m[2] as usize) * p + m[3] as usize
}

fn product(p: u32, x: &Mat, y: &Mat) -> Mat {
    let [a, b, c, d] = x.map(u32::from);
    let [e, f, g, h] = y.map(u32::from);
    [
        ((a * e + b * g) % p) as u8,
        ((a * f + b * h) % p) as u8,
        ((c * e + d * g) % p) as u8,
        ((c * f + d * h) % p) as u8,
    ]
}

fn inverse(p: u32, m: &Mat) -> Mat {
    let neg = |x: u8| ((p - x as u32) % p) as u8;
    [m[3], neg(m[1]), neg(m[2]), m[0]]
}

fn conjugacy_classes(p: u32, elements: &[Mat]) -> Vec<Vec<u32>> {
    let n = elements.len();
    let mut lookup = vec![u32::MAX; (p as usize).pow(4)];
    for (i, m) in elements.iter().enumerate() {
        lookup[key(p, m)] = i as u32;
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut cl = Vec::new();
        for g in elements {
            let c = product(p, &product(p, g, &elements[x]), &inverse(p, g));
            let j = lookup[key(p, &c)] as usize;
            if !assigned[j] {
                assigned[j] = true;
                cl.push(j as u32);
            }
        }
        cl.sort_unstable();
        classes.push(cl);
    }
    classes
}
