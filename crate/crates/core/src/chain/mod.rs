//! Markov chains on polarized distributions.
//!
//! Both chains keep the auxiliary half `Y` of the lifted ground set as a
//! counter: the lifted weights depend on `|S ∩ Y|` only, so the law of the
//! `X` part is the same as for the labelled chain.

pub mod cluster;
pub mod polarized;

use crate::dyncon::ConnectivityBackend;
use crate::error::{validation, Result};
use serde::{Deserialize, Serialize};
use std::ops::AddAssign;

/// Environment variable that turns on per-step state validation.
pub const DEBUG_ASSERTS_ENV: &str = "MATROID_MCMC_DEBUG_ASSERTS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    /// Target total-variation distance, in `(0, 1)`.
    pub epsilon: f64,
    /// `C` in the step count `ceil(C * n * ln(n / epsilon))`.
    pub mix_constant: f64,
    pub seed: u64,
    /// Explicit step count, bypassing the formula.
    pub step_override: Option<u64>,
    pub backend: ConnectivityBackend,
    /// Check state validity after every step (panics on violation).
    pub check_invariants: bool,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            epsilon: 0.05,
            mix_constant: 4.0,
            seed: 0,
            step_override: None,
            backend: ConnectivityBackend::Hdt,
            check_invariants: false,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(validation(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if !(self.mix_constant.is_finite() && self.mix_constant > 0.0) {
            return Err(validation(format!("mix constant must be positive, got {}", self.mix_constant)));
        }
        Ok(())
    }

    /// Number of transitions for a ground set of size `n`.
    pub fn steps(&self, n: usize) -> u64 {
        if let Some(t) = self.step_override {
            return t;
        }
        let n = n as f64;
        (self.mix_constant * n * (n / self.epsilon).ln()).ceil().max(1.0) as u64
    }

    /// Same configuration with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        ChainConfig { seed, ..self.clone() }
    }

    /// Enables invariant checks when `MATROID_MCMC_DEBUG_ASSERTS=1`.
    pub fn with_env_checks(mut self) -> Self {
        if std::env::var(DEBUG_ASSERTS_ENV).is_ok_and(|v| v == "1") {
            self.check_invariants = true;
        }
        self
    }
}

/// A chain that can be rerun from its initial state under a new seed.
pub trait Sampler: Send {
    fn ground_size(&self) -> usize;

    /// Observably identical to building a fresh chain with `seed`.
    fn restart(&mut self, seed: u64);

    /// Runs the configured number of transitions and returns the sample.
    fn run(&mut self) -> Vec<usize>;

    fn stats(&self) -> StepStats;
}

impl Sampler for polarized::PolarizedChain {
    fn ground_size(&self) -> usize {
        self.ground_size()
    }
    fn restart(&mut self, seed: u64) {
        self.restart(seed)
    }
    fn run(&mut self) -> Vec<usize> {
        self.run()
    }
    fn stats(&self) -> StepStats {
        self.stats()
    }
}

impl Sampler for cluster::RandomClusterChain {
    fn ground_size(&self) -> usize {
        self.ground_size()
    }
    fn restart(&mut self, seed: u64) {
        self.restart(seed)
    }
    fn run(&mut self) -> Vec<usize> {
        self.run()
    }
    fn stats(&self) -> StepStats {
        self.stats()
    }
}

/// Proposal and transition counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub proposals: u64,
    pub rejections: u64,
    pub steps: u64,
}

impl StepStats {
    pub fn rejection_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.rejections as f64 / self.proposals as f64
        }
    }
}

impl AddAssign for StepStats {
    fn add_assign(&mut self, o: StepStats) {
        self.proposals += o.proposals;
        self.rejections += o.rejections;
        self.steps += o.steps;
    }
}

impl std::iter::Sum for StepStats {
    fn sum<I: Iterator<Item = StepStats>>(iter: I) -> Self {
        let mut s = StepStats::default();
        for x in iter {
            s += x;
        }
        s
    }
}

/// A subset of `0..n` kept as the prefix of a permutation, so both the set
/// and its complement support uniform picks and `O(1)` updates.
#[derive(Clone, Debug)]
pub(crate) struct SplitSet {
    order: Vec<u32>,
    pos: Vec<u32>,
    len: usize,
}

impl SplitSet {
    pub(crate) fn new(n: usize) -> Self {
        SplitSet { order: (0..n as u32).collect(), pos: (0..n as u32).collect(), len: 0 }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        (self.pos[i] as usize) < self.len
    }

    /// `k`-th member, `k < len`.
    #[inline]
    pub(crate) fn member(&self, k: usize) -> usize {
        self.order[k] as usize
    }

    /// `k`-th non-member, `k < n - len`.
    #[inline]
    pub(crate) fn outsider(&self, k: usize) -> usize {
        self.order[self.len + k] as usize
    }

    #[inline]
    fn swap(&mut self, a: usize, b: usize) {
        self.order.swap(a, b);
        self.pos[self.order[a] as usize] = a as u32;
        self.pos[self.order[b] as usize] = b as u32;
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize) {
        debug_assert!(!self.contains(i));
        self.swap(self.pos[i] as usize, self.len);
        self.len += 1;
    }

    #[inline]
    pub(crate) fn remove(&mut self, i: usize) {
        debug_assert!(self.contains(i));
        self.len -= 1;
        self.swap(self.pos[i] as usize, self.len);
    }

    /// Empties the set and restores the initial layout, so that later picks
    /// by position do not depend on earlier history.
    pub(crate) fn clear(&mut self) {
        for (k, (o, p)) in self.order.iter_mut().zip(self.pos.iter_mut()).enumerate() {
            *o = k as u32;
            *p = k as u32;
        }
        self.len = 0;
    }

    pub(crate) fn sorted(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.order[..self.len].iter().map(|&i| i as usize).collect();
        v.sort_unstable();
        v
    }
}
