//! Synthetic graph families and a per-step cost harness for the
//! connected-spanning sampler.

use crate::chain::{ChainConfig, StepStats};
use crate::dyncon::ConnectivityBackend;
use crate::error::{validation, Result};
use crate::matroid::{build_oracle_with, IncrementalOracle, OracleKind};
use crate::reliability::NetworkInstance;
use crate::PolarizedChain;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Grid,
    /// Union of two random Hamiltonian cycles: 4-regular, possibly with parallel edges.
    RandomRegular,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Grid => "grid",
            Family::RandomRegular => "random-regular",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "path" => Ok(Family::Path),
            "grid" => Ok(Family::Grid),
            "random-regular" | "regular" => Ok(Family::RandomRegular),
            other => Err(format!("unknown graph family '{other}' (expected path, grid or random-regular)")),
        }
    }
}

/// A member of `family` with roughly `m` edges and failure probability `p`.
pub fn generate(family: Family, m: usize, p: f64, seed: u64) -> Result<NetworkInstance> {
    if m < 2 {
        return Err(validation("scaling instances need at least two edges"));
    }
    let edges: Vec<(usize, usize)> = match family {
        Family::Path => (0..m).map(|i| (i, i + 1)).collect(),
        Family::Grid => {
            let side = ((m as f64 / 2.0).sqrt().round() as usize + 1).max(2);
            let id = |r: usize, c: usize| r * side + c;
            let mut e = Vec::new();
            for r in 0..side {
                for c in 0..side {
                    if c + 1 < side {
                        e.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < side {
                        e.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            e
        }
        Family::RandomRegular => {
            let n = (m / 2).max(3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut e = Vec::with_capacity(2 * n);
            for _ in 0..2 {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                e.extend((0..n).map(|k| (order[k], order[(k + 1) % n])));
            }
            e
        }
    };
    let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
    NetworkInstance::uniform(vertices, &edges, p)
}

#[derive(Default)]
struct OpClock {
    inserts: AtomicU64,
    insert_ns: AtomicU64,
    deletes: AtomicU64,
    delete_ns: AtomicU64,
    queries: AtomicU64,
    query_ns: AtomicU64,
}

impl OpClock {
    fn reset(&self) {
        for c in [&self.inserts, &self.insert_ns, &self.deletes, &self.delete_ns, &self.queries, &self.query_ns] {
            c.store(0, Ordering::Relaxed);
        }
    }
}

fn tick(count: &AtomicU64, total: &AtomicU64, start: Instant) {
    count.fetch_add(1, Ordering::Relaxed);
    total.fetch_add(start.elapsed().as_nanos() as u64, Ordering::Relaxed);
}

/// Wraps an oracle and accumulates the time spent in each kind of call.
struct TimedOracle {
    inner: Box<dyn IncrementalOracle>,
    clock: Arc<OpClock>,
}

impl IncrementalOracle for TimedOracle {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn kind(&self) -> OracleKind {
        self.inner.kind()
    }
    fn contains(&self, i: usize) -> bool {
        self.inner.contains(i)
    }
    fn current_len(&self) -> usize {
        self.inner.current_len()
    }
    fn insert(&mut self, i: usize) -> Result<()> {
        let t = Instant::now();
        let r = self.inner.insert(i);
        tick(&self.clock.inserts, &self.clock.insert_ns, t);
        r
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        let t = Instant::now();
        let r = self.inner.delete(i);
        tick(&self.clock.deletes, &self.clock.delete_ns, t);
        r
    }
    fn is_independent(&mut self) -> bool {
        let t = Instant::now();
        let r = self.inner.is_independent();
        tick(&self.clock.queries, &self.clock.query_ns, t);
        r
    }
    fn rank(&mut self) -> Result<usize> {
        self.inner.rank()
    }
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.inner.rank_drops_on_delete(i)
    }
}

/// One CSV row of the scaling harness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub family: String,
    pub backend: String,
    pub n: usize,
    pub m: usize,
    pub steps: u64,
    pub wall_s: f64,
    pub proposals: u64,
    pub rejections: u64,
    pub per_step_us: f64,
    pub insert_ns: f64,
    pub delete_ns: f64,
    pub query_ns: f64,
}

fn mean_ns(count: &AtomicU64, total: &AtomicU64) -> f64 {
    let c = count.load(Ordering::Relaxed);
    if c == 0 {
        0.0
    } else {
        total.load(Ordering::Relaxed) as f64 / c as f64
    }
}

/// Times `steps` transitions of the connected-spanning sampler on `inst`
/// after `warmup` untimed ones. Oracle construction is not timed either.
///
/// The level structure of the dynamic-connectivity backend starts with
/// every edge at level 0 and pays for its amortized bound during the first
/// `O(m log m)` operations, so short timings without warm-up overstate its
/// per-step cost on large graphs.
pub fn measure(
    inst: &NetworkInstance,
    family: Family,
    backend: ConnectivityBackend,
    warmup: u64,
    steps: u64,
    seed: u64,
) -> Result<ScalingRow> {
    let clock = Arc::new(OpClock::default());
    let inner = build_oracle_with(&inst.cographic(), OracleKind::IndependenceOnly, backend)?;
    let oracle = Box::new(TimedOracle { inner, clock: Arc::clone(&clock) });
    let cfg = ChainConfig { seed, backend, ..ChainConfig::default() };
    let mut chain = PolarizedChain::with_oracle(oracle, inst.fields(), cfg)?;
    for _ in 0..warmup {
        chain.step();
    }
    let before = chain.stats();
    clock.reset();
    let start = Instant::now();
    for _ in 0..steps {
        chain.step();
    }
    let wall_s = start.elapsed().as_secs_f64();
    let after = chain.stats();
    let StepStats { proposals, rejections, steps } = StepStats {
        proposals: after.proposals - before.proposals,
        rejections: after.rejections - before.rejections,
        steps: after.steps - before.steps,
    };
    Ok(ScalingRow {
        family: family.name().to_string(),
        backend: backend.name().to_string(),
        n: inst.vertex_count(),
        m: inst.edge_count(),
        steps,
        wall_s,
        proposals,
        rejections,
        per_step_us: wall_s * 1e6 / steps.max(1) as f64,
        insert_ns: mean_ns(&clock.inserts, &clock.insert_ns),
        delete_ns: mean_ns(&clock.deletes, &clock.delete_ns),
        query_ns: mean_ns(&clock.queries, &clock.query_ns),
    })
}

/// Runs [`measure`] over every family, size and backend.
pub fn sweep(
    families: &[Family],
    sizes: &[usize],
    backends: &[ConnectivityBackend],
    warmup: u64,
    steps: u64,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::new();
    for &family in families {
        for &m in sizes {
            let inst = generate(family, m, 0.5, seed)?;
            for &backend in backends {
                rows.push(measure(&inst, family, backend, warmup, steps, seed)?);
            }
        }
    }
    Ok(rows)
}
