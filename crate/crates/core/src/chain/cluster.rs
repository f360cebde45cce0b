//! Up-down walk for the random cluster model `π(S) ∝ q^{-rk(S)} prod(λ_S)`,
//! `0 <= q <= 1`, lifted to `T ⊆ X ∪ Y` with `|T| = n` and weight
//! `q^{-rk(T∩X)} prod(λ_{T∩X}) / C(n, |T∩Y|)`.
//!
//! The up step adds a uniform element of the complement of `T`. The down step
//! removes `e` with probability proportional to the weight of `T \ e`; after
//! normalising, a slot in `T∩Y` has weight `|T∩X| / |T∩Y|`, and `x_j` has
//! weight `1/λ_j`, multiplied by `q` when removing it lowers the rank. It is
//! realised by proposing with the `q`-free weights and rejecting rank-lowering
//! proposals with probability `1 - q`.
//!
//! With `q = 0` the support is restricted to maximum-rank sets; the chain then
//! starts from a greedily built basis and never lowers the rank.

use super::{ChainConfig, SplitSet, StepStats};
use crate::error::{validation, Error, Result};
use crate::matroid::{build_oracle_with, Fields, IncrementalOracle, MatroidSpec, OracleKind};
use crate::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct RandomClusterChain {
    n: usize,
    q: f64,
    fields: Fields,
    oracle: Box<dyn IncrementalOracle>,
    set: SplitSet,
    y_count: usize,
    /// `1/λ_j` for members of `A`, zero elsewhere.
    inverse: WeightedIndex,
    /// Rank of the initial state; with `q = 0` every state keeps it.
    start_rank: usize,
    start: Vec<usize>,
    cfg: ChainConfig,
    rng: ChaCha8Rng,
    stats: StepStats,
}

impl RandomClusterChain {
    pub fn new(spec: &MatroidSpec, fields: Fields, q: f64, cfg: ChainConfig) -> Result<Self> {
        let oracle = build_oracle_with(spec, OracleKind::RankCapable, cfg.backend)?;
        Self::with_oracle(oracle, fields, q, cfg)
    }

    /// Runs on a caller-built rank-capable oracle holding the empty set.
    pub fn with_oracle(
        oracle: Box<dyn IncrementalOracle>,
        fields: Fields,
        q: f64,
        cfg: ChainConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if !(0.0..=1.0).contains(&q) {
            return Err(validation(format!("q must lie in [0, 1], got {q}")));
        }
        if oracle.kind() != OracleKind::RankCapable {
            return Err(Error::Unsupported("random cluster sampling needs a rank oracle".into()));
        }
        let n = oracle.ground_size();
        if fields.len() != n {
            return Err(validation(format!("{} fields for a ground set of size {n}", fields.len())));
        }
        if oracle.current_len() != 0 {
            return Err(crate::error::contract("oracle must start from the empty set"));
        }
        let mut chain = RandomClusterChain {
            n,
            q,
            fields,
            oracle,
            set: SplitSet::new(n),
            y_count: n,
            inverse: WeightedIndex::new(n),
            start_rank: 0,
            start: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
            stats: StepStats::default(),
        };
        chain.initialise()?;
        Ok(chain)
    }

    fn initialise(&mut self) -> Result<()> {
        if self.q == 0.0 {
            let mut rank = 0;
            for i in 0..self.n {
                self.oracle.insert(i)?;
                let r = self.oracle.rank()?;
                if r > rank {
                    rank = r;
                    self.set.add(i);
                    self.inverse.assign(i, 1.0 / self.fields.get(i));
                } else {
                    self.oracle.delete(i)?;
                }
            }
            self.start_rank = rank;
            self.start = self.sample();
        }
        self.y_count = self.n - self.set.len();
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &ChainConfig {
        &self.cfg
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    pub fn sample(&self) -> Vec<usize> {
        self.set.sorted()
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    /// Moves the chain to `A = elements`, `y_count = n - |A|`. With `q = 0`
    /// the set must have maximum rank. On error the previous state is kept.
    pub fn set_state(&mut self, elements: &[usize]) -> Result<()> {
        let previous = self.sample();
        let loaded = self.load(elements).and_then(|_| {
            if self.q == 0.0 && self.oracle.rank()? != self.start_rank {
                Err(validation(format!("state {elements:?} does not have full rank")))
            } else {
                Ok(())
            }
        });
        if loaded.is_err() {
            self.load(&previous).expect("previous state was valid");
        }
        loaded
    }

    /// Returns to the initial state with a fresh RNG stream and zeroed
    /// counters, which is observably identical to building a new chain.
    pub fn restart(&mut self, seed: u64) {
        let start = std::mem::take(&mut self.start);
        self.load(&start).expect("initial state was valid");
        self.start = start;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.cfg.seed = seed;
        self.stats = StepStats::default();
    }

    fn load(&mut self, elements: &[usize]) -> Result<()> {
        for k in (0..self.set.len()).rev() {
            let i = self.set.member(k);
            self.remove_element(i);
        }
        self.set.clear();
        self.y_count = self.n;
        for &i in elements {
            self.oracle.insert(i)?;
            self.set.add(i);
            self.inverse.assign(i, 1.0 / self.fields.get(i));
            self.y_count -= 1;
        }
        Ok(())
    }

    fn remove_element(&mut self, j: usize) {
        self.set.remove(j);
        self.oracle.delete(j).expect("member of A is in the oracle set");
        self.inverse.assign(j, 0.0);
    }

    /// Adds a uniform element of `(X ∪ Y) \ T`.
    pub fn up_step(&mut self) {
        debug_assert_eq!(self.set.len() + self.y_count, self.n);
        // n - |A| free elements of X, n - y_count = |A| free slots of Y
        let free_x = self.n - self.set.len();
        let j = self.rng.gen_range(0..self.n);
        if j < free_x {
            let i = self.set.outsider(j);
            self.oracle.insert(i).expect("outsider is not in the oracle set");
            self.set.add(i);
            self.inverse.assign(i, 1.0 / self.fields.get(i));
        } else {
            self.y_count += 1;
        }
    }

    /// Removes one element of `T` (with `|T| = n + 1`).
    pub fn down_step(&mut self) {
        debug_assert_eq!(self.set.len() + self.y_count, self.n + 1);
        // y_count slots of weight |A|/y_count each
        let slot_mass = if self.y_count > 0 { self.set.len() as f64 } else { 0.0 };
        loop {
            self.stats.proposals += 1;
            let x_mass = self.inverse.total();
            let u = self.rng.gen::<f64>() * (x_mass + slot_mass);
            if u >= x_mass {
                self.y_count -= 1;
                return;
            }
            let j = self.inverse.descend(u);
            if self.q < 1.0 {
                let drops = self.oracle.rank_drops_on_delete(j).expect("rank-capable oracle");
                if drops && self.rng.gen::<f64>() >= self.q {
                    self.stats.rejections += 1;
                    continue;
                }
            }
            self.remove_element(j);
            return;
        }
    }

    /// One up-down transition.
    pub fn step(&mut self) {
        self.up_step();
        self.down_step();
        self.stats.steps += 1;
        if self.cfg.check_invariants {
            self.check_state();
        }
    }

    pub fn run(&mut self) -> Vec<usize> {
        let t = self.cfg.steps(self.n);
        for _ in 0..t {
            self.step();
        }
        self.sample()
    }

    pub fn check_state(&mut self) {
        assert_eq!(self.set.len() + self.y_count, self.n, "|A| + |B| must equal n");
        assert_eq!(self.oracle.current_len(), self.set.len(), "oracle set out of sync");
        if self.q == 0.0 {
            assert_eq!(self.oracle.rank().unwrap(), self.start_rank, "rank dropped at q = 0");
        }
    }
}
