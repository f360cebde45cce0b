//! All-terminal network reliability.
//!
//! Each edge `e` fails independently with probability `p_e`. Failure sets `S`
//! that leave `G[E \ S]` connected are exactly the independent sets of the
//! cographic matroid, and `P(S fails) ∝ prod(λ_S)` with `λ_e = p_e/(1-p_e)`,
//! so the independent-set sampler draws failure sets conditioned on
//! connectivity.
//!
//! [`rel_estimate`] turns that sampler into a reliability estimate by
//! deletion and contraction. For each edge `e` in order it estimates the
//! marginal `q_e = P(e ∈ S)` and uses
//! `Z(G) = p_e Z(G-e) / q_e` when `q̂_e >= 1/2`, otherwise
//! `Z(G) = (1-p_e) Z(G/e) / (1-q_e)`, until one vertex is left.

use crate::batch::map_indexed;
use crate::chain::{ChainConfig, StepStats};
use crate::dyncon::{ConnectivityBackend, UnionFind};
use crate::error::{validation, Error, Result};
use crate::exact::components;
use crate::matroid::{check_probs, Fields, MatroidSpec};
use crate::PolarizedChain;
use serde::{Deserialize, Serialize};

/// Largest edge count accepted by [`rel_exact`].
pub const EXACT_LIMIT: usize = 24;

/// A connected multigraph with per-edge failure probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkInstance {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    p: Vec<f64>,
}

impl NetworkInstance {
    pub fn new(vertices: usize, edges: Vec<[usize; 2]>, p: Vec<f64>) -> Result<Self> {
        if vertices == 0 {
            return Err(validation("graph needs at least one vertex"));
        }
        if p.len() != edges.len() {
            return Err(validation(format!("{} probabilities for {} edges", p.len(), edges.len())));
        }
        if let Some(e) = edges.iter().position(|&[u, v]| u >= vertices || v >= vertices) {
            return Err(validation(format!("edge {e} has an endpoint outside 0..{vertices}")));
        }
        check_probs(&p)?;
        if vertices > edges.len() + 1 {
            return Err(validation(format!("{} edges cannot connect {vertices} vertices", edges.len())));
        }
        let mut uf = UnionFind::new(vertices);
        for &[u, v] in &edges {
            uf.union(u, v);
        }
        if uf.sets != 1 {
            return Err(validation(format!("graph is disconnected ({} components)", uf.sets)));
        }
        Ok(NetworkInstance { vertices, edges, p })
    }

    /// Same failure probability on every edge.
    pub fn uniform(vertices: usize, edges: &[(usize, usize)], p: f64) -> Result<Self> {
        Self::new(vertices, edges.iter().map(|&(u, v)| [u, v]).collect(), vec![p; edges.len()])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn failure_probs(&self) -> &[f64] {
        &self.p
    }

    pub fn cographic(&self) -> MatroidSpec {
        MatroidSpec::Cographic { vertices: Some(self.vertices), edges: self.edges.clone() }
    }

    pub fn graphic(&self) -> MatroidSpec {
        MatroidSpec::Graphic { vertices: Some(self.vertices), edges: self.edges.clone() }
    }

    /// `λ_e = p_e / (1 - p_e)`.
    pub fn fields(&self) -> Fields {
        Fields::from_failure_probs(&self.p).expect("probabilities were validated")
    }

    /// Whether the edges outside `failed` span a connected graph.
    pub fn survives(&self, failed: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        let mut dead = vec![false; self.edges.len()];
        for &e in failed {
            dead[e] = true;
        }
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            if !dead[e] {
                uf.union(u, v);
            }
        }
        uf.sets == 1
    }

    /// `G - e`; the result must stay connected.
    pub fn delete(&self, e: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        let mut p = self.p.clone();
        edges.remove(e);
        p.remove(e);
        Self::new(self.vertices, edges, p)
    }

    /// `G / e`: merges the endpoints of `e`, drops `e`, keeps parallel edges
    /// and the self-loops that appear. Vertex ids are renumbered densely.
    pub fn contract(&self, e: usize) -> Self {
        let [a, b] = self.edges[e];
        let (keep, gone) = (a.min(b), a.max(b));
        let relabel = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone && a != b {
                v - 1
            } else {
                v
            }
        };
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        let mut p = Vec::with_capacity(self.edges.len() - 1);
        for (f, &[u, v]) in self.edges.iter().enumerate() {
            if f != e {
                edges.push([relabel(u), relabel(v)]);
                p.push(self.p[f]);
            }
        }
        let vertices = if a == b { self.vertices } else { self.vertices - 1 };
        NetworkInstance { vertices, edges, p }
    }

    fn is_loop(&self, e: usize) -> bool {
        self.edges[e][0] == self.edges[e][1]
    }

    fn is_bridge(&self, e: usize) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        for (f, &[u, v]) in self.edges.iter().enumerate() {
            if f != e {
                uf.union(u, v);
            }
        }
        uf.sets > 1
    }
}

fn sampler(inst: &NetworkInstance, cfg: &ChainConfig) -> Result<PolarizedChain> {
    PolarizedChain::new(&inst.cographic(), inst.fields(), cfg.clone())
}

/// Draws a failure set `S` with `G[E \ S]` connected, approximately from
/// `μ_rel(S) ∝ prod_{e∈S} p_e prod_{e∉S} (1-p_e)`.
pub fn rel_sample(inst: &NetworkInstance, cfg: &ChainConfig) -> Result<Vec<usize>> {
    let s = sampler(inst, cfg)?.run();
    if cfg.check_invariants {
        assert!(inst.survives(&s), "failure set {s:?} disconnects the graph");
    }
    Ok(s)
}

/// The surviving edges `E \ S` for a failure set drawn by [`rel_sample`].
pub fn rel_connected_subgraph(inst: &NetworkInstance, cfg: &ChainConfig) -> Result<Vec<usize>> {
    let s = rel_sample(inst, cfg)?;
    let mut failed = vec![false; inst.edge_count()];
    for e in s {
        failed[e] = true;
    }
    Ok((0..inst.edge_count()).filter(|&e| !failed[e]).collect())
}

/// Exact `Z_rel = P(G[E \ S] connected)` by enumerating all failure sets.
pub fn rel_exact(inst: &NetworkInstance) -> Result<f64> {
    let m = inst.edge_count();
    if m > EXACT_LIMIT {
        return Err(Error::TooLarge { what: "edge count", actual: m, limit: EXACT_LIMIT });
    }
    let mut z = 0.0;
    for alive in 0..1u64 << m {
        if components(inst.vertices, &inst.edges, alive) == 1 {
            z += (0..m).map(|e| if alive >> e & 1 == 1 { 1.0 - inst.p[e] } else { inst.p[e] }).product::<f64>();
        }
    }
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateConfig {
    /// Target relative error.
    pub eps: f64,
    /// Allowed failure probability.
    pub delta: f64,
    /// `c0` in the per-edge sample count `ceil(c0 m ln(2m/delta) / eps^2)`.
    pub c0: f64,
    /// TV target of each chain; defaults to `eps / (4 m)`.
    pub chain_eps: Option<f64>,
    pub mix_constant: f64,
    pub seed: u64,
    pub backend: ConnectivityBackend,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            eps: 0.1,
            delta: 0.05,
            c0: 8.0,
            chain_eps: None,
            mix_constant: 4.0,
            seed: 0,
            backend: ConnectivityBackend::Hdt,
        }
    }
}

impl EstimateConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("eps", self.eps), ("delta", self.delta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(validation(format!("{name} must lie in (0, 1), got {x}")));
            }
        }
        if !(self.c0.is_finite() && self.c0 > 0.0) {
            return Err(validation(format!("c0 must be positive, got {}", self.c0)));
        }
        Ok(())
    }

    /// Chain samples per estimated marginal for a graph with `m` edges.
    pub fn samples_per_edge(&self, m: usize) -> usize {
        let m = m as f64;
        (self.c0 * m * (2.0 * m / self.delta).ln() / (self.eps * self.eps)).ceil() as usize
    }

    fn chain_config(&self, m: usize) -> ChainConfig {
        ChainConfig {
            epsilon: self.chain_eps.unwrap_or(self.eps / (4.0 * m as f64)),
            mix_constant: self.mix_constant,
            seed: self.seed,
            step_override: None,
            backend: self.backend,
            check_invariants: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Delete,
    Contract,
    /// A self-loop of the current graph; it never affects connectivity.
    SelfLoop,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Index in the input graph.
    pub edge: usize,
    pub branch: Branch,
    /// Marginal used for the branch factor (exactly 0 for bridges and loops).
    pub marginal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityEstimate {
    pub z_hat: f64,
    pub eps: f64,
    pub delta: f64,
    pub samples_used: u64,
    pub trace: Vec<TraceEntry>,
}

/// Supplies `P(e ∈ S)` for edge `e` of an intermediate graph.
pub trait MarginalSource {
    /// Returns the marginal and the number of chain samples spent on it.
    fn marginal(&mut self, graph: &NetworkInstance, e: usize, level: usize) -> Result<(f64, u64)>;
}

/// Estimates marginals from independent chains.
pub struct SampledMarginals {
    cfg: EstimateConfig,
    m: usize,
    stats: StepStats,
}

impl SampledMarginals {
    /// `m` is the edge count of the original graph.
    pub fn new(cfg: EstimateConfig, m: usize) -> Self {
        SampledMarginals { cfg, m, stats: StepStats::default() }
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }
}

impl MarginalSource for SampledMarginals {
    fn marginal(&mut self, graph: &NetworkInstance, e: usize, level: usize) -> Result<(f64, u64)> {
        let n = self.cfg.samples_per_edge(self.m);
        let chain_cfg = self.cfg.chain_config(self.m);
        let level_seed = mix(self.cfg.seed, level as u64);
        sampler(graph, &chain_cfg)?;
        let chunks = n.div_ceil(CHUNK);
        let parts = map_indexed(chunks, |c| {
            let mut chain = sampler(graph, &chain_cfg).expect("sampler was built once");
            let mut hits = 0u64;
            let mut stats = StepStats::default();
            for j in c * CHUNK..((c + 1) * CHUNK).min(n) {
                chain.restart(level_seed ^ j as u64);
                if chain.run().binary_search(&e).is_ok() {
                    hits += 1;
                }
                stats += chain.stats();
            }
            (hits, stats)
        });
        let hits: u64 = parts.iter().map(|p| p.0).sum();
        self.stats += parts.iter().map(|p| p.1).sum();
        Ok((hits as f64 / n as f64, n as u64))
    }
}

const CHUNK: usize = 256;

/// SplitMix64 finaliser, used to give every level its own seed stream.
fn mix(seed: u64, level: u64) -> u64 {
    let mut z = seed.wrapping_add(level.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Exact marginals `p_e Z(G-e) / Z(G)` by enumeration.
pub struct ExactMarginals;

impl MarginalSource for ExactMarginals {
    fn marginal(&mut self, graph: &NetworkInstance, e: usize, _level: usize) -> Result<(f64, u64)> {
        let z = rel_exact(graph)?;
        if graph.is_bridge(e) {
            return Ok((0.0, 0));
        }
        Ok((graph.p[e] * rel_exact(&graph.delete(e)?)? / z, 0))
    }
}

/// Estimates `Z_rel` within relative error `eps` with probability `1 - delta`.
pub fn rel_estimate(inst: &NetworkInstance, cfg: &EstimateConfig) -> Result<ReliabilityEstimate> {
    cfg.validate()?;
    let mut source = SampledMarginals::new(cfg.clone(), inst.edge_count());
    rel_estimate_with(inst, cfg, &mut source)
}

/// Deletion/contraction telescoping with marginals taken from `source`.
///
/// Loops of the current graph contribute a factor 1 and bridges are
/// contracted with the exact marginal 0; neither consults `source`.
pub fn rel_estimate_with(
    inst: &NetworkInstance,
    cfg: &EstimateConfig,
    source: &mut dyn MarginalSource,
) -> Result<ReliabilityEstimate> {
    let mut graph = inst.clone();
    let mut z = 1.0;
    let mut samples_used = 0;
    let mut trace = Vec::with_capacity(inst.edge_count());
    for edge in 0..inst.edge_count() {
        // the current edge is always first in `graph`
        let p = graph.p[0];
        let entry = if graph.is_loop(0) {
            graph = graph.delete(0)?;
            TraceEntry { edge, branch: Branch::SelfLoop, marginal: 0.0 }
        } else if graph.is_bridge(0) {
            z *= 1.0 - p;
            graph = graph.contract(0);
            TraceEntry { edge, branch: Branch::Contract, marginal: 0.0 }
        } else {
            let (q, used) = source.marginal(&graph, 0, edge)?;
            samples_used += used;
            if q >= 0.5 {
                z *= p / q;
                graph = graph.delete(0)?;
                TraceEntry { edge, branch: Branch::Delete, marginal: q }
            } else {
                z *= (1.0 - p) / (1.0 - q);
                graph = graph.contract(0);
                TraceEntry { edge, branch: Branch::Contract, marginal: q }
            }
        };
        trace.push(entry);
    }
    debug_assert_eq!(graph.vertex_count(), 1);
    Ok(ReliabilityEstimate { z_hat: z, eps: cfg.eps, delta: cfg.delta, samples_used, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4(p: f64) -> NetworkInstance {
        NetworkInstance::uniform(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], p).unwrap()
    }

    #[test]
    fn exact_values() {
        let single = NetworkInstance::uniform(2, &[(0, 1)], 0.3).unwrap();
        assert!((rel_exact(&single).unwrap() - 0.7).abs() < 1e-15);
        let tri = NetworkInstance::uniform(3, &[(0, 1), (1, 2), (2, 0)], 0.5).unwrap();
        assert!((rel_exact(&tri).unwrap() - 0.5).abs() < 1e-15);
        assert!((rel_exact(&k4(0.5)).unwrap() - 38.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(NetworkInstance::uniform(3, &[(0, 1)], 0.5).is_err());
        assert!(NetworkInstance::uniform(2, &[(0, 1)], 1.0).is_err());
        assert!(NetworkInstance::uniform(2, &[(0, 2)], 0.5).is_err());
        assert!(NetworkInstance::uniform(1, &[], 0.5).is_ok());
    }

    #[test]
    fn contraction_relabels() {
        let g = NetworkInstance::uniform(3, &[(0, 2), (1, 2), (2, 0)], 0.5).unwrap();
        let c = g.contract(0);
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edges(), &[[1, 0], [0, 0]]);
    }

    #[test]
    fn single_edge_is_exact() {
        let single = NetworkInstance::uniform(2, &[(0, 1)], 0.3).unwrap();
        let est = rel_estimate(&single, &EstimateConfig::default()).unwrap();
        assert_eq!(est.z_hat, 0.7);
        assert_eq!(est.trace, vec![TraceEntry { edge: 0, branch: Branch::Contract, marginal: 0.0 }]);
        assert_eq!(est.samples_used, 0);
    }

    #[test]
    fn exact_marginals_telescope() {
        let g = k4(0.5);
        let est = rel_estimate_with(&g, &EstimateConfig::default(), &mut ExactMarginals).unwrap();
        assert!((est.z_hat - 38.0 / 64.0).abs() < 1e-12);
        assert_eq!(est.trace.len(), 6);
    }

    #[test]
    fn sampler_support() {
        let tri = NetworkInstance::new(3, vec![[0, 1], [1, 2], [2, 0]], vec![0.75, 0.25, 0.25]).unwrap();
        let cfg = ChainConfig { check_invariants: true, ..Default::default() };
        for seed in 0..50 {
            let s = rel_sample(&tri, &cfg.with_seed(seed)).unwrap();
            assert!(s.len() <= 1);
            let alive = rel_connected_subgraph(&tri, &cfg.with_seed(seed)).unwrap();
            assert_eq!(alive.len() + s.len(), 3);
        }
    }
}
