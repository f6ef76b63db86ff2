//! The HillPathJump fitness function.
//!
//! An instance is a ZeroMax hill, a fitness-increasing path `z_1, …, z_L` of
//! Hamming-adjacent points, and an optimum `x*` that lies `k` expanded-path
//! steps past the last path point `x+`. The path starts with
//! `z_i = 1^i 0^(n−i)` for `i ≤ r = √n`; every later point is `1^r` followed
//! by an expanded gray-code point, with path index `i > r` mapped to expanded
//! index `i − r + 1` so that `z_(r+1)` differs from `z_r`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::graypath::{ExpandedPath, MAX_BLOCK};

/// Fitness value. Wide enough for `n + L + 1` at any supported size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fitness(pub u128);

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// 1-based position on the path.
pub type PathIndex = u128;

/// How the path length is specified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathLength {
    /// `L = floor(a · n^(k−1))`.
    Coefficient(f64),
    Explicit(u128),
}

#[derive(Clone, Debug)]
pub struct Instance {
    n: usize,
    k: usize,
    a: Option<f64>,
    path_len: u128,
    r: usize,
    expanded: ExpandedPath,
    x_plus: BitString,
    x_star: BitString,
}

fn perfect_square_root(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Largest path length an instance with these parameters can host.
pub fn max_path_length(n: usize, k: usize) -> Result<u128> {
    let r = perfect_square_root(n)
        .ok_or_else(|| Error::Config(format!("n = {n} is not a perfect square")))?;
    let expanded = expanded_for(r)?;
    Ok((r as u128 + expanded.len()).saturating_sub(k as u128 + 1))
}

fn expanded_for(r: usize) -> Result<ExpandedPath> {
    if r < 2 {
        return Err(Error::Config("n must be at least 4".into()));
    }
    if r > MAX_BLOCK {
        return Err(Error::Config(format!(
            "n = {} exceeds the supported maximum {}",
            r * r,
            MAX_BLOCK * MAX_BLOCK
        )));
    }
    ExpandedPath::new(r as u32 - 1, r).map_err(|e| Error::Config(e.to_string()))
}

impl Instance {
    pub fn new(n: usize, k: usize, length: PathLength) -> Result<Self> {
        let r = perfect_square_root(n)
            .ok_or_else(|| Error::Config(format!("n = {n} is not a perfect square")))?;
        if k < 4 {
            return Err(Error::Config(format!(
                "jump length k must be at least 4 (got {k})"
            )));
        }
        let expanded = expanded_for(r)?;
        let (a, path_len) = match length {
            PathLength::Coefficient(a) => {
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::Config(format!(
                        "coefficient a must be positive (got {a})"
                    )));
                }
                let raw = a * (n as f64).powi(k as i32 - 1);
                let l = if raw >= 2f64.powi(127) {
                    u128::MAX
                } else {
                    raw.floor() as u128
                };
                (Some(a), l)
            }
            PathLength::Explicit(l) => (None, l),
        };
        if path_len < r as u128 + 2 {
            return Err(Error::Config(format!(
                "path length {path_len} is shorter than the minimum √n + 2 = {}",
                r + 2
            )));
        }
        let max = (r as u128 + expanded.len()).saturating_sub(k as u128 + 1);
        if path_len > max {
            return Err(Error::Capacity {
                requested: path_len,
                max,
            });
        }

        let prefix = BitString::ones(r);
        let plus_index = path_len - r as u128 + 1;
        let star_index = plus_index + k as u128;
        let x_plus = prefix.concat(&expanded.point(plus_index)?);
        let x_star = prefix.concat(&expanded.point(star_index)?);
        if expanded.hamming(plus_index, star_index)? != k {
            return Err(Error::Config(format!(
                "x+ and x* are not {k} bits apart at n = {n}; choose k ≤ √n + 1"
            )));
        }
        Ok(Self {
            n,
            k,
            a,
            path_len,
            r,
            expanded,
            x_plus,
            x_star,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The coefficient the instance was built from, if any.
    pub fn a(&self) -> Option<f64> {
        self.a
    }

    /// Path length `L`.
    pub fn path_len(&self) -> u128 {
        self.path_len
    }

    /// Block size `√n`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of gray-code bits `N = (n − √n)/√n`.
    pub fn word_bits(&self) -> u32 {
        self.expanded.word_bits()
    }

    pub fn expanded(&self) -> &ExpandedPath {
        &self.expanded
    }

    /// Last path point, the second-best individual.
    pub fn x_plus(&self) -> &BitString {
        &self.x_plus
    }

    /// The unique optimum.
    pub fn x_star(&self) -> &BitString {
        &self.x_star
    }

    /// Expanded-path index of the suffix of `x*`.
    pub fn x_star_expanded_index(&self) -> u128 {
        self.path_len - self.r as u128 + 1 + self.k as u128
    }

    /// `L / n^(k−1)`, the coefficient an explicit length corresponds to.
    pub fn effective_a(&self) -> f64 {
        self.path_len as f64 / (self.n as f64).powi(self.k as i32 - 1)
    }

    pub fn optimum_fitness(&self) -> Fitness {
        Fitness(self.n as u128 + self.path_len + 1)
    }

    pub fn path_point(&self, i: PathIndex) -> Result<BitString> {
        if i == 0 || i > self.path_len {
            return Err(Error::Domain(format!(
                "path index {i} out of range 1..={}",
                self.path_len
            )));
        }
        if i <= self.r as u128 {
            return Ok(BitString::prefix_ones(self.n, i as usize));
        }
        let mut out = BitString::ones(self.n);
        self.expanded
            .write_point(i - self.r as u128 + 1, &mut out, self.r)?;
        Ok(out)
    }

    /// Position of `x` on the path, or `None` when `x` is not a path point.
    pub fn path_rank(&self, x: &BitString) -> Option<PathIndex> {
        if x.len() != self.n {
            return None;
        }
        let r = self.r;
        let head = x.get_run(0, r);
        let full = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        if head != full {
            let lead = head.trailing_ones() as usize;
            return (lead > 0 && x.count_ones() == lead).then_some(lead as u128);
        }
        let j = self.expanded.rank_at(x, r)?;
        let i = if j == 1 { r as u128 } else { j + r as u128 - 1 };
        (i <= self.path_len).then_some(i)
    }

    pub fn evaluate(&self, x: &BitString) -> Result<Fitness> {
        if x.len() != self.n {
            return Err(Error::Domain(format!(
                "bit string has length {}, instance has n = {}",
                x.len(),
                self.n
            )));
        }
        Ok(self.evaluate_unchecked(x))
    }

    /// [`evaluate`](Self::evaluate) without the length check.
    #[inline]
    pub fn evaluate_unchecked(&self, x: &BitString) -> Fitness {
        if *x == self.x_star {
            return self.optimum_fitness();
        }
        match self.path_rank(x) {
            Some(i) => Fitness(self.n as u128 + i),
            None => Fitness(x.count_zeros() as u128),
        }
    }

    /// Path index of a fitness value, treating `x*` as index `L + k`.
    /// `None` for points off the path.
    pub fn progress_index(&self, f: Fitness) -> Option<u128> {
        let n = self.n as u128;
        if f == self.optimum_fitness() {
            Some(self.path_len + self.k as u128)
        } else if f.0 > n {
            Some(f.0 - n)
        } else {
            None
        }
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            n: self.n,
            k: self.k,
            a: self.a,
            path_len: self.path_len,
            r: self.r,
            word_bits: self.word_bits(),
            x_plus: self.x_plus.to_hex(),
            x_star: self.x_star.to_hex(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }

    /// Rebuilds an instance and checks the stored derived fields against it.
    pub fn from_document(doc: &InstanceDocument) -> Result<Self> {
        let mut inst = Self::new(doc.n, doc.k, PathLength::Explicit(doc.path_len))?;
        inst.a = doc.a;
        if inst.to_document() != *doc {
            return Err(Error::Config(
                "instance document does not match the instance it describes".into(),
            ));
        }
        Ok(inst)
    }
}

/// JSON form of an [`Instance`]; derived bit strings are hex encoded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub n: usize,
    pub k: usize,
    pub a: Option<f64>,
    #[serde(rename = "L")]
    pub path_len: u128,
    pub r: usize,
    #[serde(rename = "N")]
    pub word_bits: u32,
    pub x_plus: String,
    pub x_star: String,
}
