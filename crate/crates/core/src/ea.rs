//! Seeded (1+1) EA with standard bit mutation, instrumented for HillPathJump.
//!
//! Each generation flips every bit independently with probability `p`. The
//! number of flipped bits is drawn from `Binomial(n, p)` by inversion and the
//! positions are a uniform subset of that size, which has the same
//! distribution as per-bit coin flips. An offspring replaces its parent when
//! its fitness is at least the parent's. Generations that flip nothing still
//! count.
//!
//! Randomness comes from ChaCha8 seeded with a `u64`. Independent trials use
//! [`trial_seed`] to derive their seed from a master seed and the trial index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::fitness::{Fitness, Instance, PathIndex};

/// Per-bit flip probability.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MutationRate(f64);

impl MutationRate {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "mutation rate must lie in (0, 1) (got {p})"
            )));
        }
        Ok(Self(p))
    }

    /// `p = c/n`.
    pub fn from_c(c: f64, n: usize) -> Result<Self> {
        Self::new(c / n as f64)
    }

    pub fn p(&self) -> f64 {
        self.0
    }

    /// The constant `c = p·n`.
    pub fn c(&self, n: usize) -> f64 {
        self.0 * n as f64
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    mix64(master ^ mix64(trial.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

/// Inverse-CDF sampler for the number of flipped bits.
#[derive(Clone, Debug)]
struct FlipCount {
    cdf: Vec<f64>,
}

impl FlipCount {
    fn new(n: usize, p: f64) -> Self {
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        let mut log_choose = 0.0f64;
        let mut cdf = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        for k in 0..=n {
            if k > 0 {
                log_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
            }
            acc += (log_choose + k as f64 * lp + (n - k) as f64 * lq).exp();
            cdf.push(acc);
        }
        let total = acc;
        for v in &mut cdf {
            *v /= total;
        }
        Self { cdf }
    }

    #[inline]
    fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        // the first entry holds most of the mass at rates c/n
        if u < self.cdf[0] {
            return 0;
        }
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1)
    }
}

/// Standard bit mutation on strings of a fixed length.
#[derive(Clone, Debug)]
pub struct Mutator {
    n: usize,
    count: FlipCount,
    chosen: BitString,
    positions: Vec<usize>,
}

impl Mutator {
    pub fn new(n: usize, rate: MutationRate) -> Self {
        Self {
            n,
            count: FlipCount::new(n, rate.p()),
            chosen: BitString::zeros(n),
            positions: Vec::new(),
        }
    }

    /// Writes a mutated copy of `parent` into `child`; returns the number of
    /// flipped bits.
    pub fn mutate(
        &mut self,
        parent: &BitString,
        child: &mut BitString,
        rng: &mut impl Rng,
    ) -> usize {
        child.clone_from(parent);
        let flips = self.count.sample(rng);
        if flips == 0 {
            return 0;
        }
        let n = self.n;
        if flips <= n / 2 {
            self.pick(flips, rng);
            for &i in &self.positions {
                child.flip(i);
            }
        } else {
            // pick the bits to keep instead
            self.pick(n - flips, rng);
            for i in 0..n {
                if !self.chosen.get(i) {
                    child.flip(i);
                }
            }
        }
        for &i in &self.positions {
            self.chosen.set(i, false);
        }
        flips
    }

    fn pick(&mut self, count: usize, rng: &mut impl Rng) {
        self.positions.clear();
        while self.positions.len() < count {
            let i = rng.random_range(0..self.n);
            if !self.chosen.get(i) {
                self.chosen.set(i, true);
                self.positions.push(i);
            }
        }
    }
}

/// A (1+1) EA bound to an instance. One [`step`](Self::step) is one generation.
pub struct OnePlusOne<'a> {
    inst: &'a Instance,
    mutator: Mutator,
    rng: ChaCha8Rng,
    parent: BitString,
    fitness: Fitness,
    child: BitString,
    generation: u64,
}

impl<'a> OnePlusOne<'a> {
    pub fn new(
        inst: &'a Instance,
        rate: MutationRate,
        rng: ChaCha8Rng,
        start: BitString,
    ) -> Result<Self> {
        let fitness = inst.evaluate(&start)?;
        Ok(Self {
            inst,
            mutator: Mutator::new(inst.n(), rate),
            rng,
            child: start.clone(),
            parent: start,
            fitness,
            generation: 0,
        })
    }

    /// Starts from a uniformly random string drawn from `seed`'s stream.
    pub fn random_start(inst: &'a Instance, rate: MutationRate, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut start = BitString::zeros(inst.n());
        for i in 0..inst.n() {
            start.set(i, rng.random());
        }
        Self::new(inst, rate, rng, start)
    }

    pub fn seeded(
        inst: &'a Instance,
        rate: MutationRate,
        seed: u64,
        start: BitString,
    ) -> Result<Self> {
        Self::new(inst, rate, ChaCha8Rng::seed_from_u64(seed), start)
    }

    pub fn parent(&self) -> &BitString {
        &self.parent
    }

    pub fn fitness(&self) -> Fitness {
        self.fitness
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Runs one generation. Returns `true` when the parent changed.
    #[inline]
    pub fn step(&mut self) -> bool {
        self.generation += 1;
        let flips = self
            .mutator
            .mutate(&self.parent, &mut self.child, &mut self.rng);
        if flips == 0 {
            return false;
        }
        let f = self.inst.evaluate_unchecked(&self.child);
        if f >= self.fitness {
            std::mem::swap(&mut self.parent, &mut self.child);
            self.fitness = f;
            true
        } else {
            false
        }
    }
}

/// When a run stops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopAt {
    #[default]
    Optimum,
    /// Stop as soon as `x+` or `x*` is reached.
    SecondBest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Maximum number of generations.
    pub budget: Option<u64>,
    pub stop: StopAt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Optimum,
    SecondBest,
    Truncated,
}

/// Hitting times of one run. Steps count generations from the start
/// individual (step 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    /// Generations performed.
    pub steps_total: u64,
    /// First step whose individual is on the path or is `x*`.
    pub step_path_entry: Option<u64>,
    pub fitness_at_entry: Option<Fitness>,
    /// First step at `x+` (absent when `x*` came first).
    pub step_xplus: Option<u64>,
    pub step_xstar: Option<u64>,
    /// `x*` was reached without visiting `x+`.
    pub early_jump: bool,
    /// Generations spent at `x+` before moving to `x*`.
    pub jump_wait: Option<u64>,
    pub outcome: Outcome,
}

impl RunRecord {
    pub fn truncated(&self) -> bool {
        self.outcome == Outcome::Truncated
    }

    /// Step at which `x+` or `x*` was first reached.
    pub fn step_second_best_or_optimum(&self) -> Option<u64> {
        match (self.step_xplus, self.step_xstar) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Generations between path entry and reaching `x+` or `x*`.
    pub fn path_phase(&self) -> Option<u64> {
        Some(self.step_second_best_or_optimum()? - self.step_path_entry?)
    }
}

struct Tracker<'a> {
    inst: &'a Instance,
    record: RunRecord,
    plus: Fitness,
    star: Fitness,
}

impl<'a> Tracker<'a> {
    fn new(inst: &'a Instance, seed: u64) -> Self {
        let star = inst.optimum_fitness();
        Self {
            inst,
            plus: Fitness(star.0 - 1),
            star,
            record: RunRecord {
                seed,
                steps_total: 0,
                step_path_entry: None,
                fitness_at_entry: None,
                step_xplus: None,
                step_xstar: None,
                early_jump: false,
                jump_wait: None,
                outcome: Outcome::Truncated,
            },
        }
    }

    /// Records events for the individual at `step`; returns `true` when the
    /// run should stop.
    fn observe(&mut self, step: u64, f: Fitness, stop: StopAt) -> bool {
        let r = &mut self.record;
        if r.step_path_entry.is_none() && f.0 > self.inst.n() as u128 {
            r.step_path_entry = Some(step);
            r.fitness_at_entry = Some(f);
        }
        if f == self.plus && r.step_xplus.is_none() {
            r.step_xplus = Some(step);
            if stop == StopAt::SecondBest {
                r.outcome = Outcome::SecondBest;
                return true;
            }
        }
        if f == self.star {
            r.step_xstar = Some(step);
            r.early_jump = r.step_xplus.is_none();
            r.jump_wait = r.step_xplus.map(|s| step - s);
            r.outcome = Outcome::Optimum;
            return true;
        }
        false
    }
}

fn drive(mut ea: OnePlusOne<'_>, seed: u64, opts: RunOptions) -> RunRecord {
    let mut tracker = Tracker::new(ea.inst, seed);
    let budget = opts.budget.unwrap_or(u64::MAX);
    if !tracker.observe(0, ea.fitness(), opts.stop) {
        while ea.generation() < budget {
            if ea.step() && tracker.observe(ea.generation(), ea.fitness(), opts.stop) {
                break;
            }
        }
    }
    tracker.record.steps_total = ea.generation();
    tracker.record
}

/// One run from a uniformly random start.
pub fn run(inst: &Instance, rate: MutationRate, seed: u64, opts: RunOptions) -> RunRecord {
    let ea = OnePlusOne::random_start(inst, rate, seed).expect("random start has length n");
    drive(ea, seed, opts)
}

/// One run from a given start individual.
pub fn run_from(
    inst: &Instance,
    rate: MutationRate,
    seed: u64,
    start: BitString,
    opts: RunOptions,
) -> Result<RunRecord> {
    Ok(drive(
        OnePlusOne::seeded(inst, rate, seed, start)?,
        seed,
        opts,
    ))
}

/// One generation of progress from a path point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriftSample {
    pub state: PathIndex,
    /// Change of path index; a move to `x*` counts as reaching index `L + k`.
    pub progress: i128,
}

/// Samples one generation from `z_i`.
pub fn sample_drift(
    inst: &Instance,
    mutator: &mut Mutator,
    state: &BitString,
    i: PathIndex,
    scratch: &mut BitString,
    rng: &mut impl Rng,
) -> DriftSample {
    let mut progress = 0;
    if mutator.mutate(state, scratch, rng) > 0 {
        let f = inst.evaluate_unchecked(scratch);
        if let Some(j) = inst.progress_index(f) {
            if j >= i {
                progress = (j - i) as i128;
            }
        }
    }
    DriftSample { state: i, progress }
}

/// Monte-Carlo mean of the one-generation path progress from `z_i`.
pub fn estimate_drift(
    inst: &Instance,
    rate: MutationRate,
    i: PathIndex,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let state = inst.path_point(i)?;
    let mut mutator = Mutator::new(inst.n(), rate);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = state.clone();
    let mut total: i128 = 0;
    for _ in 0..trials {
        total += sample_drift(inst, &mut mutator, &state, i, &mut scratch, &mut rng).progress;
    }
    Ok(total as f64 / trials as f64)
}
