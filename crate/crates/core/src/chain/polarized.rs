//! Down-up walk on the polarized independent-set distribution.
//!
//! A state is `S = A ∪ B` with `A` independent, `B` a set of auxiliary slots
//! and `|A| + |B| = n`, weighted by `prod(λ_A) / C(n, |A|)`. Summing over the
//! `C(n, |A|)` choices of `B` gives back `prod(λ_A)`, so `A` is distributed as
//! the weighted independent-set measure.
//!
//! One transition drops a uniform element of `S` and re-adds an element by
//! rejection: propose `x_i` outside `A` with weight `λ_i`, or any free slot
//! with aggregate weight `n - |A|`, and retry while the proposal makes `A`
//! dependent.

use super::{ChainConfig, SplitSet, StepStats};
use crate::error::{contract, validation, Result};
use crate::matroid::{build_oracle_with, Fields, IncrementalOracle, MatroidSpec, OracleKind};
use crate::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// What the down step removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DropClass {
    Auxiliary,
    Element(usize),
}

pub struct PolarizedChain {
    n: usize,
    fields: Fields,
    oracle: Box<dyn IncrementalOracle>,
    set: SplitSet,
    y_count: usize,
    /// Fields of the elements outside `A`; members have weight zero.
    outside: WeightedIndex,
    cfg: ChainConfig,
    rng: ChaCha8Rng,
    stats: StepStats,
}

impl PolarizedChain {
    pub fn new(spec: &MatroidSpec, fields: Fields, cfg: ChainConfig) -> Result<Self> {
        let oracle = build_oracle_with(spec, OracleKind::IndependenceOnly, cfg.backend)?;
        Self::with_oracle(oracle, fields, cfg)
    }

    /// Runs on a caller-built oracle, which must hold the empty set.
    pub fn with_oracle(oracle: Box<dyn IncrementalOracle>, fields: Fields, cfg: ChainConfig) -> Result<Self> {
        cfg.validate()?;
        let n = oracle.ground_size();
        if fields.len() != n {
            return Err(validation(format!("{} fields for a ground set of size {n}", fields.len())));
        }
        if oracle.current_len() != 0 {
            return Err(contract("oracle must start from the empty set"));
        }
        let outside = WeightedIndex::from_weights(fields.as_slice())?;
        Ok(PolarizedChain {
            n,
            fields,
            oracle,
            set: SplitSet::new(n),
            y_count: n,
            outside,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
            stats: StepStats::default(),
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &ChainConfig {
        &self.cfg
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    /// `A = S ∩ X`, sorted.
    pub fn sample(&self) -> Vec<usize> {
        self.set.sorted()
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    /// Moves the chain to `A = elements`, `y_count = n - |A|`.
    pub fn set_state(&mut self, elements: &[usize]) -> Result<()> {
        for k in (0..self.set.len()).rev() {
            let i = self.set.member(k);
            self.drop_element(i);
        }
        self.set.clear();
        for &i in elements {
            if let Err(e) = self.oracle.insert(i) {
                self.set_state(&[])?;
                return Err(e);
            }
            self.set.add(i);
            self.outside.assign(i, 0.0);
        }
        self.y_count = self.n - self.set.len();
        if !self.oracle.is_independent() {
            let bad = self.sample();
            self.set_state(&[])?;
            return Err(validation(format!("state {bad:?} is not independent")));
        }
        Ok(())
    }

    /// Returns to `A = ∅` with a fresh RNG stream and zeroed counters, which
    /// is observably identical to building a new chain with `seed`.
    pub fn restart(&mut self, seed: u64) {
        self.set_state(&[]).expect("the empty set is independent");
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.cfg.seed = seed;
        self.stats = StepStats::default();
    }

    fn drop_element(&mut self, i: usize) {
        self.set.remove(i);
        self.oracle.delete(i).expect("member of A is in the oracle set");
        self.outside.assign(i, self.fields.get(i));
    }

    /// Drops a uniformly random element of `S`.
    pub fn down_step(&mut self) -> DropClass {
        let j = self.rng.gen_range(0..self.n);
        if j < self.y_count {
            self.y_count -= 1;
            DropClass::Auxiliary
        } else {
            let i = self.set.member(j - self.y_count);
            self.drop_element(i);
            DropClass::Element(i)
        }
    }

    /// Re-completes `T` (with `|T| = n - 1`) to a state of size `n`.
    pub fn up_step(&mut self) {
        debug_assert_eq!(self.set.len() + self.y_count, self.n - 1);
        // k+1 free slots of weight (n-k)/(k+1) each
        let slot_mass = (self.n - self.set.len()) as f64;
        loop {
            self.stats.proposals += 1;
            let x_mass = self.outside.total();
            let u = self.rng.gen::<f64>() * (x_mass + slot_mass);
            if u >= x_mass {
                self.y_count += 1;
                return;
            }
            let i = self.outside.descend(u);
            self.oracle.insert(i).expect("proposed element lies outside A");
            if self.oracle.is_independent() {
                self.set.add(i);
                self.outside.assign(i, 0.0);
                return;
            }
            self.oracle.delete(i).expect("just inserted");
            self.stats.rejections += 1;
        }
    }

    /// One down-up transition.
    pub fn step(&mut self) {
        self.down_step();
        self.up_step();
        self.stats.steps += 1;
        if self.cfg.check_invariants {
            self.check_state();
        }
    }

    /// Runs the configured number of transitions and returns `A`.
    pub fn run(&mut self) -> Vec<usize> {
        let t = self.cfg.steps(self.n);
        for _ in 0..t {
            self.step();
        }
        self.sample()
    }

    /// Panics unless the state lies in the support of the polarized measure.
    pub fn check_state(&mut self) {
        assert_eq!(self.set.len() + self.y_count, self.n, "|A| + |B| must equal n");
        assert_eq!(self.oracle.current_len(), self.set.len(), "oracle set out of sync");
        assert!(self.oracle.is_independent(), "A = {:?} is dependent", self.sample());
        for i in 0..self.n {
            let w = if self.set.contains(i) { 0.0 } else { self.fields.get(i) };
            assert_eq!(self.outside.weight(i), w, "index weight of {i} out of sync");
        }
    }
}
