//! Exhaustive ground truth for small instances: distributions, rank
//! functions, one-step transition kernels and total-variation distance.
//!
//! Nothing here touches the incremental oracles. Ranks are recomputed from
//! the [`MatroidSpec`] by direct enumeration, traversal or elimination, so the
//! results can be used to check the samplers and the oracles independently.

use crate::error::{validation, Error, Result};
use crate::matroid::{Fields, MatroidSpec};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Largest ground set accepted by [`exact_mu`] and [`exact_rc`].
pub const MU_LIMIT: usize = 20;
/// Largest ground set accepted by [`exact_pi`] (the lift has `2n` elements).
pub const PI_LIMIT: usize = 10;
/// Largest collapsed state space accepted by [`exact_kernel`].
pub const KERNEL_LIMIT: usize = 4000;
/// Largest ground set accepted by [`check_matroid_axioms`].
pub const AXIOM_LIMIT: usize = 8;
/// Largest ground set accepted by [`labeled_kernel`].
pub const LABELED_LIMIT: usize = 5;

fn too_large(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::TooLarge { what, actual, limit })
    } else {
        Ok(())
    }
}

/// A finite distribution over subsets given as bitmasks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactDistribution {
    pub support: Vec<u64>,
    pub prob: Vec<f64>,
}

impl ExactDistribution {
    /// Normalises nonnegative weights; zero-weight atoms are dropped.
    pub fn from_weights(weights: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
        for (s, w) in weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(validation(format!("weight {w} of atom {s:#b} is not a finite nonnegative number")));
            }
            if w > 0.0 {
                *acc.entry(s).or_insert(0.0) += w;
            }
        }
        let total: f64 = acc.values().sum();
        if total <= 0.0 {
            return Err(validation("distribution has no mass"));
        }
        let (support, prob) = acc.into_iter().map(|(s, w)| (s, w / total)).unzip();
        Ok(ExactDistribution { support, prob })
    }

    /// Empirical distribution of a list of samples, each a list of indices.
    pub fn empirical<S: AsRef<[usize]>>(samples: &[S]) -> Result<Self> {
        let mut counts: HashMap<u64, f64> = HashMap::new();
        for s in samples {
            *counts.entry(mask_of(s.as_ref())).or_insert(0.0) += 1.0;
        }
        Self::from_weights(counts)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Probability of the atom `s` (zero off the support).
    pub fn get(&self, s: u64) -> f64 {
        self.support.binary_search(&s).map_or(0.0, |k| self.prob[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.support.iter().copied().zip(self.prob.iter().copied())
    }

    /// Image under `f`, merging atoms that map to the same set.
    pub fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
        for (s, p) in self.iter() {
            *acc.entry(f(s)).or_insert(0.0) += p;
        }
        let (support, prob) = acc.into_iter().unzip();
        ExactDistribution { support, prob }
    }

    /// Probability that element `i` belongs to the random set.
    pub fn marginal(&self, i: usize) -> f64 {
        self.iter().filter(|(s, _)| s >> i & 1 == 1).map(|(_, p)| p).sum()
    }
}

/// `½ Σ |a(S) − b(S)|` over the union of the supports.
pub fn tv_distance(a: &ExactDistribution, b: &ExactDistribution) -> f64 {
    let mut diff: HashMap<u64, f64> = HashMap::new();
    for (s, p) in a.iter() {
        *diff.entry(s).or_insert(0.0) += p;
    }
    for (s, p) in b.iter() {
        *diff.entry(s).or_insert(0.0) -= p;
    }
    0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
}

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

pub fn set_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Brute-force rank function of a specification.
pub struct BruteRank<'a> {
    spec: &'a MatroidSpec,
    n: usize,
    family: Vec<u64>,
}

impl<'a> BruteRank<'a> {
    pub fn new(spec: &'a MatroidSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.ground_size();
        too_large("ground set", n, 63)?;
        let family = match spec {
            MatroidSpec::Explicit { independent_sets, .. } => {
                independent_sets.iter().map(|s| mask_of(s)).collect()
            }
            _ => Vec::new(),
        };
        Ok(BruteRank { spec, n, family })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self, s: u64) -> usize {
        match self.spec {
            MatroidSpec::Explicit { .. } => self
                .family
                .iter()
                .filter(|&&f| f & !s == 0)
                .map(|f| f.count_ones() as usize)
                .max()
                .unwrap_or(0),
            MatroidSpec::Uniform { k, .. } => (s.count_ones() as usize).min(*k),
            MatroidSpec::Partition { blocks, caps } => blocks
                .iter()
                .zip(caps)
                .map(|(b, &c)| b.iter().filter(|&&i| s >> i & 1 == 1).count().min(c))
                .sum(),
            MatroidSpec::Graphic { edges, .. } => {
                let nv = self.spec.vertex_count().unwrap();
                nv - components(nv, edges, s)
            }
            MatroidSpec::Cographic { edges, .. } => {
                let nv = self.spec.vertex_count().unwrap();
                let all = full(self.n);
                s.count_ones() as usize + components(nv, edges, all) - components(nv, edges, all & !s)
            }
            MatroidSpec::BinaryLinear { matrix } => gf2_rank(matrix, s),
        }
    }

    pub fn is_independent(&self, s: u64) -> bool {
        self.rank(s) == s.count_ones() as usize
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        self.rank(full(self.n))
    }
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Connected components of the graph on `nv` vertices using the edges in `s`,
/// by depth-first search over an adjacency list.
pub fn components(nv: usize, edges: &[[usize; 2]], s: u64) -> usize {
    let mut adj = vec![Vec::new(); nv];
    for (e, &[u, v]) in edges.iter().enumerate() {
        if s >> e & 1 == 1 {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; nv];
    let mut count = 0;
    for root in 0..nv {
        if seen[root] {
            continue;
        }
        count += 1;
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

/// Rank over GF(2) of the columns of `matrix` selected by `s`.
fn gf2_rank(matrix: &[Vec<u8>], s: u64) -> usize {
    let mut cols: Vec<Vec<u8>> = (0..matrix.first().map_or(0, Vec::len))
        .filter(|&j| s >> j & 1 == 1)
        .map(|j| matrix.iter().map(|row| row[j]).collect())
        .collect();
    let rows = matrix.len();
    let mut rank = 0;
    for r in 0..rows {
        let Some(p) = (rank..cols.len()).find(|&c| cols[c][r] == 1) else {
            continue;
        };
        cols.swap(rank, p);
        let pivot = cols[rank].clone();
        for c in cols.iter_mut().skip(rank + 1) {
            if c[r] == 1 {
                for (x, y) in c.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exhaustively checks `∅ ∈ I`, downward closure and the exchange axiom.
pub fn check_matroid_axioms(spec: &MatroidSpec) -> Result<()> {
    let r = BruteRank::new(spec)?;
    let n = r.ground_size();
    too_large("ground set", n, AXIOM_LIMIT)?;
    let indep: Vec<bool> = (0..1u64 << n).map(|s| r.is_independent(s)).collect();
    if !indep[0] {
        return Err(validation("the empty set is not independent"));
    }
    for s in 0..1u64 << n {
        if !indep[s as usize] {
            continue;
        }
        for i in set_of(s) {
            if !indep[(s & !(1 << i)) as usize] {
                return Err(validation(format!("{:?} is independent but drops to a dependent set", set_of(s))));
            }
        }
        for t in 0..1u64 << n {
            if indep[t as usize] && t.count_ones() > s.count_ones() {
                let ok = set_of(t & !s).into_iter().any(|x| indep[(s | 1 << x) as usize]);
                if !ok {
                    return Err(validation(format!("exchange fails for {:?} and {:?}", set_of(s), set_of(t))));
                }
            }
        }
    }
    Ok(())
}

fn check_fields(spec: &MatroidSpec, fields: &Fields) -> Result<()> {
    if fields.len() != spec.ground_size() {
        return Err(validation(format!("{} fields for a ground set of size {}", fields.len(), spec.ground_size())));
    }
    Ok(())
}

/// `μ(A) ∝ prod(λ_A)` over independent sets.
pub fn exact_mu(spec: &MatroidSpec, fields: &Fields) -> Result<ExactDistribution> {
    let r = BruteRank::new(spec)?;
    too_large("ground set", r.ground_size(), MU_LIMIT)?;
    check_fields(spec, fields)?;
    let n = r.ground_size();
    ExactDistribution::from_weights(
        (0..1u64 << n).filter(|&s| r.is_independent(s)).map(|s| (s, fields.weight_of_mask(s))),
    )
}

/// The lifted distribution on `X ∪ Y` with labelled `Y`: bit `i < n` is
/// `x_i`, bit `n + j` is `y_j`. Support `{A ∪ B : A ∈ I, |A| + |B| = n}`,
/// weight `prod(λ_A) / C(n, |A|)`.
pub fn exact_pi(spec: &MatroidSpec, fields: &Fields) -> Result<ExactDistribution> {
    let r = BruteRank::new(spec)?;
    let n = r.ground_size();
    too_large("ground set", n, PI_LIMIT)?;
    check_fields(spec, fields)?;
    let mut atoms = Vec::new();
    for a in (0..1u64 << n).filter(|&s| r.is_independent(s)) {
        let k = a.count_ones() as usize;
        let w = fields.weight_of_mask(a) / binom(n, k);
        for b in (0..1u64 << n).filter(|b| b.count_ones() as usize == n - k) {
            atoms.push((a | b << n, w));
        }
    }
    ExactDistribution::from_weights(atoms)
}

/// Projection of a lifted distribution onto `X`.
pub fn x_marginal(lifted: &ExactDistribution, n: usize) -> ExactDistribution {
    lifted.map(|s| s & full(n))
}

/// `π(S) ∝ q^{-rk(S)} prod(λ_S)`; with `q = 0`, `prod(λ_S)` on maximum-rank sets.
pub fn exact_rc(spec: &MatroidSpec, fields: &Fields, q: f64) -> Result<ExactDistribution> {
    let r = BruteRank::new(spec)?;
    let n = r.ground_size();
    too_large("ground set", n, MU_LIMIT)?;
    check_fields(spec, fields)?;
    check_q(q)?;
    let top = r.full_rank();
    ExactDistribution::from_weights((0..1u64 << n).filter_map(|s| {
        let rk = r.rank(s);
        if q == 0.0 {
            (rk == top).then(|| (s, fields.weight_of_mask(s)))
        } else {
            Some((s, q.powi(-(rk as i32)) * fields.weight_of_mask(s)))
        }
    }))
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(validation(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(())
}

pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Which walk a kernel describes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "chain", rename_all = "kebab-case")]
pub enum ChainKind {
    /// Down-up walk on the polarized independent-set distribution.
    Polarized,
    /// Up-down walk on the lifted random cluster distribution.
    RandomCluster { q: f64 },
}

/// A one-step transition matrix over collapsed states `(A, y_count)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactKernel {
    pub states: Vec<(u64, usize)>,
    pub matrix: Vec<Vec<f64>>,
}

impl ExactKernel {
    pub fn index_of(&self, state: (u64, usize)) -> Option<usize> {
        self.states.iter().position(|&s| s == state)
    }

    /// Largest deviation of a row sum from one.
    pub fn row_sum_error(&self) -> f64 {
        self.matrix.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Solves `v P = v`, `Σ v = 1` by LU decomposition.
    pub fn stationary(&self) -> Result<Vec<f64>> {
        let m = self.states.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                a[(j, i)] = self.matrix[i][j];
            }
            a[(i, i)] -= 1.0;
        }
        for j in 0..m {
            a[(m - 1, j)] = 1.0;
        }
        let mut b = DVector::<f64>::zeros(m);
        b[m - 1] = 1.0;
        let v = a.lu().solve(&b).ok_or_else(|| validation("kernel has no unique stationary vector"))?;
        Ok(v.iter().copied().collect())
    }

    /// `max_j |(v P)_j − v_j|`.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let m = self.states.len();
        (0..m)
            .map(|j| ((0..m).map(|i| v[i] * self.matrix[i][j]).sum::<f64>() - v[j]).abs())
            .fold(0.0, f64::max)
    }
}

/// Collapsed target of a kernel: `(A, n − |A|) ↦ μ(A)` for the polarized walk
/// and `(A, n − |A|) ↦ π_RC(A)` for the random cluster walk.
pub fn collapsed_target(kind: ChainKind, spec: &MatroidSpec, fields: &Fields) -> Result<Vec<((u64, usize), f64)>> {
    let n = spec.ground_size();
    let d = match kind {
        ChainKind::Polarized => exact_mu(spec, fields)?,
        ChainKind::RandomCluster { q } => exact_rc(spec, fields, q)?,
    };
    Ok(d.iter().map(|(a, p)| ((a, n - a.count_ones() as usize), p)).collect())
}

/// Collapsed lifted distribution `(A, y) ↦ Σ_B π(A ∪ B)` from a labelled one.
pub fn collapse(lifted: &ExactDistribution, n: usize) -> BTreeMap<(u64, usize), f64> {
    let mut out = BTreeMap::new();
    for (s, p) in lifted.iter() {
        *out.entry((s & full(n), (s >> n).count_ones() as usize)).or_insert(0.0) += p;
    }
    out
}

/// One-step kernel of the sampler, in its collapsed form: `Y` is a counter
/// and each re-completion follows the proposal weights after discarding the
/// rejected ones.
pub fn exact_kernel(kind: ChainKind, spec: &MatroidSpec, fields: &Fields) -> Result<ExactKernel> {
    let r = BruteRank::new(spec)?;
    let n = r.ground_size();
    too_large("ground set", n, MU_LIMIT)?;
    check_fields(spec, fields)?;
    if let ChainKind::RandomCluster { q } = kind {
        check_q(q)?;
    }
    let top = r.full_rank();
    let states: Vec<(u64, usize)> = (0..1u64 << n)
        .filter(|&a| match kind {
            ChainKind::Polarized => r.is_independent(a),
            ChainKind::RandomCluster { q } => q > 0.0 || r.rank(a) == top,
        })
        .map(|a| (a, n - a.count_ones() as usize))
        .collect();
    too_large("state space", states.len(), KERNEL_LIMIT)?;
    let index: HashMap<(u64, usize), usize> = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let lam = fields.as_slice();
    let mut matrix = vec![vec![0.0; states.len()]; states.len()];
    for (row, &(a, y)) in states.iter().enumerate() {
        let mut put = |to: (u64, usize), p: f64| matrix[row][index[&to]] += p;
        match kind {
            ChainKind::Polarized => {
                let mut mids = Vec::new();
                if y > 0 {
                    mids.push(((a, y - 1), y as f64 / n as f64));
                }
                mids.extend(set_of(a).into_iter().map(|i| ((a & !(1 << i), y), 1.0 / n as f64)));
                for ((t, ty), pd) in mids {
                    let k = t.count_ones() as usize;
                    let slot = (n - k) as f64;
                    let adds: Vec<(usize, f64)> = (0..n)
                        .filter(|&i| t >> i & 1 == 0 && r.is_independent(t | 1 << i))
                        .map(|i| (i, lam[i]))
                        .collect();
                    let z = slot + adds.iter().map(|x| x.1).sum::<f64>();
                    put((t, ty + 1), pd * slot / z);
                    for (i, w) in adds {
                        put((t | 1 << i, ty), pd * w / z);
                    }
                }
            }
            ChainKind::RandomCluster { q } => {
                let mut mids: Vec<((u64, usize), f64)> =
                    (0..n).filter(|&i| a >> i & 1 == 0).map(|i| ((a | 1 << i, y), 1.0 / n as f64)).collect();
                let k = a.count_ones() as usize;
                if k > 0 {
                    mids.push(((a, y + 1), k as f64 / n as f64));
                }
                for ((t, ty), pu) in mids {
                    let rt = r.rank(t);
                    let slot = if ty > 0 { t.count_ones() as f64 } else { 0.0 };
                    let removes: Vec<(usize, f64)> = set_of(t)
                        .into_iter()
                        .map(|j| {
                            let keep = if r.rank(t & !(1 << j)) < rt { q } else { 1.0 };
                            (j, keep / lam[j])
                        })
                        .filter(|x| x.1 > 0.0)
                        .collect();
                    let z = slot + removes.iter().map(|x| x.1).sum::<f64>();
                    if slot > 0.0 {
                        put((t, ty - 1), pu * slot / z);
                    }
                    for (j, w) in removes {
                        put((t & !(1 << j), ty), pu * w / z);
                    }
                }
            }
        }
    }
    Ok(ExactKernel { states, matrix })
}

/// Kernel of the walk with labelled `Y`, built directly from its definition:
/// the polarized walk drops a uniform element of `S` and then picks
/// `S' ⊇ T` with probability proportional to its lifted weight; the random
/// cluster walk adds a uniform element of the complement and then removes
/// `e` with probability proportional to the lifted weight of the result.
/// States are bitmasks over `2n` bits as in [`exact_pi`].
pub fn labeled_kernel(kind: ChainKind, spec: &MatroidSpec, fields: &Fields) -> Result<(Vec<u64>, Vec<Vec<f64>>)> {
    let r = BruteRank::new(spec)?;
    let n = r.ground_size();
    too_large("ground set", n, LABELED_LIMIT)?;
    check_fields(spec, fields)?;
    let top = r.full_rank();
    let weight = |s: u64| -> f64 {
        let a = s & full(n);
        let y = (s >> n).count_ones() as usize;
        let base = fields.weight_of_mask(a) / binom(n, y);
        match kind {
            ChainKind::Polarized => {
                if r.is_independent(a) {
                    base
                } else {
                    0.0
                }
            }
            ChainKind::RandomCluster { q } => {
                let rk = r.rank(a);
                if q == 0.0 {
                    if rk == top {
                        base
                    } else {
                        0.0
                    }
                } else {
                    q.powi(-(rk as i32)) * base
                }
            }
        }
    };
    let states: Vec<u64> =
        (0..1u64 << (2 * n)).filter(|s| s.count_ones() as usize == n && weight(*s) > 0.0).collect();
    let index: HashMap<u64, usize> = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let mut matrix = vec![vec![0.0; states.len()]; states.len()];
    for (row, &s) in states.iter().enumerate() {
        match kind {
            ChainKind::Polarized => {
                for e in set_of(s) {
                    let t = s & !(1 << e);
                    let ups: Vec<(u64, f64)> =
                        (0..2 * n).filter(|&f| t >> f & 1 == 0).map(|f| (t | 1 << f, weight(t | 1 << f))).collect();
                    let z: f64 = ups.iter().map(|u| u.1).sum();
                    for (to, w) in ups.into_iter().filter(|u| u.1 > 0.0) {
                        matrix[row][index[&to]] += w / z / n as f64;
                    }
                }
            }
            ChainKind::RandomCluster { .. } => {
                for f in (0..2 * n).filter(|&f| s >> f & 1 == 0) {
                    let t = s | 1 << f;
                    let downs: Vec<(u64, f64)> =
                        set_of(t).into_iter().map(|e| (t & !(1 << e), weight(t & !(1 << e)))).collect();
                    let z: f64 = downs.iter().map(|d| d.1).sum();
                    for (to, w) in downs.into_iter().filter(|d| d.1 > 0.0) {
                        matrix[row][index[&to]] += w / z / n as f64;
                    }
                }
            }
        }
    }
    Ok((states, matrix))
}
