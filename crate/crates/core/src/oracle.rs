//! Brute-force reference constructions for small instances.
//!
//! The path here is built literally from character strings: a reflected gray
//! code list, each bit repeated `√n` times, transitions filled in one
//! character at a time, and a `1^√n` prefix. It shares no code with
//! [`crate::graypath`]; only `n`, `k` and `L` are common inputs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::fitness::Instance;

/// Largest gray word length the oracle will materialize.
pub const MAX_ORACLE_WORD_BITS: usize = 10;
/// Largest `n` for exhaustive fitness checks.
pub const MAX_EXHAUSTIVE_N: usize = 20;

/// A materialized path.
#[derive(Clone, Debug)]
pub struct ExplicitPath {
    pub n: usize,
    pub r: usize,
    /// `z_1, …, z_L`.
    pub points: Vec<BitString>,
    /// The full expanded gray-code path `x̃_1, …, x̃_M`.
    pub expanded: Vec<BitString>,
    /// `x*`, when the expanded path reaches `k` steps past `x+`.
    pub x_star: Option<BitString>,
}

/// Reflected gray code on `bits` bits as strings: `G(b) = 0·G(b−1), 1·rev(G(b−1))`.
fn reflected_gray(bits: usize) -> Vec<String> {
    let mut codes = vec![String::new()];
    for _ in 0..bits {
        let mut next: Vec<String> = codes.iter().map(|c| format!("0{c}")).collect();
        next.extend(codes.iter().rev().map(|c| format!("1{c}")));
        codes = next;
    }
    codes
}

fn repeat_each(word: &str, r: usize) -> String {
    word.chars()
        .flat_map(|ch| std::iter::repeat_n(ch, r))
        .collect()
}

/// Expanded gray path as strings of `N·r` characters.
fn expanded_strings(word_bits: usize, r: usize) -> Vec<String> {
    let words = reflected_gray(word_bits);
    let mut out = vec![repeat_each(&words[0], r)];
    for pair in words.windows(2) {
        let (from, to) = (pair[0].as_bytes(), pair[1].as_bytes());
        let b = (0..word_bits).find(|&b| from[b] != to[b]).unwrap();
        let base = repeat_each(&pair[0], r);
        let rising = from[b] == b'0';
        for i in 1..r {
            // 0→1 passes through 0^(r−i) 1^i; 1→0 through 0^i 1^(r−i)
            let block = if rising {
                "0".repeat(r - i) + &"1".repeat(i)
            } else {
                "0".repeat(i) + &"1".repeat(r - i)
            };
            let mut s = base.clone();
            s.replace_range(b * r..(b + 1) * r, &block);
            out.push(s);
        }
        out.push(repeat_each(&pair[1], r));
    }
    out
}

fn parse(s: &str) -> BitString {
    s.parse().expect("oracle strings contain only 0 and 1")
}

/// Materializes the path `z_1, …, z_L` for `n = r²` with `N = r − 1 ≤ 10`.
/// Any `L ≤ r + M − 1` is accepted; `x*` is included when it fits.
pub fn enumerate_path(n: usize, k: usize, path_len: usize) -> Result<ExplicitPath> {
    let r = (1..=n).find(|r| r * r >= n).unwrap_or(0);
    if r * r != n || r < 2 {
        return Err(Error::Config(format!(
            "n = {n} is not a perfect square ≥ 4"
        )));
    }
    let word_bits = r - 1;
    if word_bits > MAX_ORACLE_WORD_BITS {
        return Err(Error::Config(format!(
            "oracle refuses n = {n}: 2^{word_bits} gray words exceed the 2^{MAX_ORACLE_WORD_BITS} limit"
        )));
    }
    let expanded = expanded_strings(word_bits, r);
    let prefix = "1".repeat(r);
    let mut points: Vec<String> = (1..=r)
        .map(|i| "1".repeat(i) + &"0".repeat(n - i))
        .collect();
    // x̃_1 prefixed by 1^r would repeat z_r, so the prefixed part starts at x̃_2
    points.extend(expanded.iter().skip(1).map(|x| format!("{prefix}{x}")));
    if path_len > points.len() {
        return Err(Error::Capacity {
            requested: path_len as u128,
            max: points.len() as u128,
        });
    }
    points.truncate(path_len);
    let x_star = (path_len > r)
        .then(|| path_len - r + k)
        .and_then(|idx| expanded.get(idx))
        .map(|x| parse(&format!("{prefix}{x}")));
    Ok(ExplicitPath {
        n,
        r,
        points: points.iter().map(|s| parse(s)).collect(),
        expanded: expanded.iter().map(|s| parse(s)).collect(),
        x_star,
    })
}

impl ExplicitPath {
    pub fn path_len(&self) -> usize {
        self.points.len()
    }

    pub fn lookup(&self) -> HashMap<&BitString, usize> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i + 1))
            .collect()
    }

    /// Fitness by direct table lookup.
    pub fn fitness(&self, lookup: &HashMap<&BitString, usize>, x: &BitString) -> u128 {
        let (n, l) = (self.n as u128, self.points.len() as u128);
        if self.x_star.as_ref() == Some(x) {
            n + l + 1
        } else if let Some(&i) = lookup.get(x) {
            n + i as u128
        } else {
            x.count_zeros() as u128
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub x: String,
    pub expected: u128,
    pub actual: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FitnessCheckReport {
    pub n: usize,
    pub k: usize,
    pub path_len: usize,
    pub checked: u64,
    pub mismatches: u64,
    /// The first few mismatches.
    pub examples: Vec<Mismatch>,
    /// Number of inputs attaining the maximum fitness.
    pub optimum_count: u64,
    /// Number of inputs with fitness in `(n, n + L]`.
    pub path_count: u64,
}

impl FitnessCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares [`Instance::evaluate`] with the explicit path on all of `{0,1}^n`.
pub fn exhaustive_fitness_check(inst: &Instance) -> Result<FitnessCheckReport> {
    let n = inst.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::Config(format!(
            "exhaustive check refuses n = {n} (limit {MAX_EXHAUSTIVE_N})"
        )));
    }
    let l = inst.path_len() as usize;
    let path = enumerate_path(n, inst.k(), l)?;
    let lookup = path.lookup();
    let mut report = FitnessCheckReport {
        n,
        k: inst.k(),
        path_len: l,
        ..Default::default()
    };
    let max = (n + l + 1) as u128;
    for v in 0..(1u64 << n) {
        let x = BitString::from_u64_lsb(n, v);
        let expected = path.fitness(&lookup, &x);
        let actual = inst.evaluate(&x)?.0;
        report.checked += 1;
        if expected != actual {
            report.mismatches += 1;
            if report.examples.len() < 10 {
                report.examples.push(Mismatch {
                    x: x.to_string(),
                    expected,
                    actual,
                });
            }
        }
        if actual == max {
            report.optimum_count += 1;
        } else if actual > n as u128 {
            report.path_count += 1;
        }
    }
    Ok(report)
}

/// Outcome of comparing the implicit path with the explicit one.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PathCheckReport {
    pub n: usize,
    pub k: usize,
    pub path_len: usize,
    pub point_mismatches: u64,
    pub rank_mismatches: u64,
    pub x_star_matches: bool,
    pub x_plus_distance: usize,
    pub fitness: Option<FitnessCheckReport>,
}

impl PathCheckReport {
    pub fn passed(&self) -> bool {
        self.point_mismatches == 0
            && self.rank_mismatches == 0
            && self.x_star_matches
            && self.x_plus_distance == self.k
            && self.fitness.as_ref().is_none_or(FitnessCheckReport::passed)
    }
}

/// Point-by-point comparison of the implicit and explicit paths, plus the
/// exhaustive fitness check when `n` is small enough.
pub fn verify_path(inst: &Instance) -> Result<PathCheckReport> {
    let l = inst.path_len() as usize;
    let path = enumerate_path(inst.n(), inst.k(), l)?;
    let mut report = PathCheckReport {
        n: inst.n(),
        k: inst.k(),
        path_len: l,
        ..Default::default()
    };
    for (idx, z) in path.points.iter().enumerate() {
        let i = idx as u128 + 1;
        if inst.path_point(i)? != *z {
            report.point_mismatches += 1;
        }
        if inst.path_rank(z) != Some(i) {
            report.rank_mismatches += 1;
        }
    }
    report.x_star_matches = path.x_star.as_ref() == Some(inst.x_star());
    report.x_plus_distance = path.points[l - 1].hamming(inst.x_star());
    if inst.n() <= 16 {
        report.fitness = Some(exhaustive_fitness_check(inst)?);
    }
    Ok(report)
}

/// Exact expected one-generation path progress from `z_i` at rate `c/n`,
/// summing `d · p^H (1 − p)^(n−H)` over every later path point and the jump
/// to `x*` (counted as reaching index `L + k`).
pub fn exact_drift(path: &ExplicitPath, k: usize, c: f64, i: usize) -> Result<f64> {
    let n = path.n;
    let l = path.path_len();
    if i == 0 || i > l {
        return Err(Error::Domain(format!(
            "path index {i} out of range 1..={l}"
        )));
    }
    let p = c / n as f64;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("c/n must lie in (0, 1) (got {p})")));
    }
    let prob = |h: usize| (h as f64 * p.ln() + (n - h) as f64 * (-p).ln_1p()).exp();
    let here = &path.points[i - 1];
    let mut drift = 0.0;
    for j in i + 1..=l {
        drift += (j - i) as f64 * prob(here.hamming(&path.points[j - 1]));
    }
    if let Some(star) = &path.x_star {
        drift += (l + k - i) as f64 * prob(here.hamming(star));
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::PathLength;

    #[test]
    fn gray_list_matches_listing() {
        assert_eq!(
            reflected_gray(3),
            ["000", "001", "011", "010", "110", "111", "101", "100"]
        );
    }

    #[test]
    fn small_path_shape() {
        let p = enumerate_path(16, 4, 32).unwrap();
        assert_eq!(p.expanded.len(), 29);
        assert_eq!(p.points[0].to_string(), "1000000000000000");
        assert_eq!(p.points[1].to_string(), "1100000000000000");
        assert_eq!(p.points[2].to_string(), "1110000000000000");
        assert_eq!(p.points[3].to_string(), "1111000000000000");
        assert!(p.x_star.is_none());
        for w in p.points.windows(2) {
            assert_eq!(w[0].hamming(&w[1]), 1);
        }
        assert!(matches!(
            enumerate_path(16, 4, 33),
            Err(Error::Capacity { max: 32, .. })
        ));
        assert!(enumerate_path(15, 4, 10).is_err());
        assert!(enumerate_path(144, 4, 20).is_err());
    }

    #[test]
    fn fitness_check_small() {
        let inst = Instance::new(16, 4, PathLength::Explicit(20)).unwrap();
        let report = exhaustive_fitness_check(&inst).unwrap();
        assert_eq!(report.checked, 65_536);
        assert_eq!(report.mismatches, 0, "{:?}", report.examples);
        assert_eq!(report.optimum_count, 1);
        assert_eq!(report.path_count, 20);
    }

    #[test]
    fn drift_at_path_end_is_the_jump() {
        let inst = Instance::new(25, 4, PathLength::Explicit(70)).unwrap();
        let path = enumerate_path(25, 4, 70).unwrap();
        let d = exact_drift(&path, 4, 2.0, 70).unwrap();
        let jump = crate::theory::jump_success_probability(25.0, 4, 2.0).unwrap();
        assert!((d - 4.0 * jump).abs() < 1e-15);
        assert!(verify_path(&inst).unwrap().passed());
    }
}
