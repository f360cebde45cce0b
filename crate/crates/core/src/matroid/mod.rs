//! Matroid descriptions, external fields and incremental oracles.
//!
//! Samplers never look at a matroid directly. They drive an
//! [`IncrementalOracle`] that maintains a current set `S` under single-element
//! insertions and deletions and answers "is `S` independent?" (and, for
//! rank-capable oracles, rank queries) after each change.

mod binary;
mod counting;
mod explicit;
mod graph;

use crate::dyncon::{ConnectivityBackend, UnionFind};
use crate::error::{contract, validation, Error, Result};
use serde::{Deserialize, Serialize};

pub(crate) const EXPLICIT_LIMIT: usize = 24;

/// Ground set `0..n`, optionally labelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    pub n: usize,
    pub labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(validation("ground set must have at least one element"));
        }
        if n > u32::MAX as usize {
            return Err(validation(format!("ground set of {n} elements exceeds the supported {}", u32::MAX)));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }
}

/// Positive external fields, one per ground element.
#[derive(Clone, Debug, PartialEq)]
pub struct Fields {
    lambda: Vec<f64>,
    lambda_max: f64,
    lambda_min: f64,
}

impl Fields {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(validation("fields must cover at least one element"));
        }
        if let Some((i, x)) = lambda.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
            return Err(validation(format!("field of element {i} must be positive and finite, got {x}")));
        }
        let lambda_max = lambda.iter().cloned().fold(f64::MIN, f64::max);
        let lambda_min = lambda.iter().cloned().fold(f64::MAX, f64::min);
        Ok(Fields { lambda, lambda_max, lambda_min })
    }

    pub fn constant(n: usize, x: f64) -> Result<Self> {
        Fields::new(vec![x; n])
    }

    /// Fields `p/(1-p)` for failure probabilities `p`.
    pub fn from_failure_probs(p: &[f64]) -> Result<Self> {
        check_probs(p)?;
        Fields::new(p.iter().map(|&p| p / (1.0 - p)).collect())
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.lambda[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// Product of the fields over the elements set in `mask`.
    pub fn weight_of_mask(&self, mask: u64) -> f64 {
        let mut w = 1.0;
        let mut m = mask;
        while m != 0 {
            w *= self.lambda[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        w
    }
}

pub(crate) fn check_probs(p: &[f64]) -> Result<()> {
    if let Some((i, x)) = p.iter().enumerate().find(|(_, x)| !(**x > 0.0 && **x < 1.0)) {
        return Err(validation(format!("failure probability of edge {i} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

/// A concrete matroid. Deserializes from JSON tagged by `"variant"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum MatroidSpec {
    /// Independent sets listed explicitly; elements in no listed set are loops.
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        independent_sets: Vec<Vec<usize>>,
    },
    /// Sets of size at most `k`.
    Uniform { n: usize, k: usize },
    /// At most `caps[b]` elements from each block `blocks[b]`.
    Partition { blocks: Vec<Vec<usize>>, caps: Vec<usize> },
    /// Forests of a multigraph; element `i` is edge `i`.
    Graphic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<usize>,
        edges: Vec<[usize; 2]>,
    },
    /// Edge sets whose removal leaves a connected graph.
    Cographic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<usize>,
        edges: Vec<[usize; 2]>,
    },
    /// Column matroid of a 0/1 matrix over GF(2); element `i` is column `i`.
    BinaryLinear { matrix: Vec<Vec<u8>> },
}

impl MatroidSpec {
    pub fn free(n: usize) -> Self {
        MatroidSpec::Uniform { n, k: n }
    }

    pub fn graphic(edges: &[(usize, usize)]) -> Self {
        MatroidSpec::Graphic { vertices: None, edges: edges.iter().map(|&(u, v)| [u, v]).collect() }
    }

    pub fn cographic(edges: &[(usize, usize)]) -> Self {
        MatroidSpec::Cographic { vertices: None, edges: edges.iter().map(|&(u, v)| [u, v]).collect() }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            MatroidSpec::Explicit { .. } => "explicit",
            MatroidSpec::Uniform { .. } => "uniform",
            MatroidSpec::Partition { .. } => "partition",
            MatroidSpec::Graphic { .. } => "graphic",
            MatroidSpec::Cographic { .. } => "cographic",
            MatroidSpec::BinaryLinear { .. } => "binary-linear",
        }
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        match self {
            MatroidSpec::Explicit { n, independent_sets } => n.unwrap_or_else(|| {
                independent_sets.iter().flatten().map(|&i| i + 1).max().unwrap_or(0)
            }),
            MatroidSpec::Uniform { n, .. } => *n,
            MatroidSpec::Partition { blocks, .. } => blocks.iter().map(Vec::len).sum(),
            MatroidSpec::Graphic { edges, .. } | MatroidSpec::Cographic { edges, .. } => edges.len(),
            MatroidSpec::BinaryLinear { matrix } => matrix.first().map_or(0, Vec::len),
        }
    }

    /// Vertex count of graphic and cographic specs.
    pub fn vertex_count(&self) -> Option<usize> {
        match self {
            MatroidSpec::Graphic { vertices, edges } | MatroidSpec::Cographic { vertices, edges } => {
                Some(vertices.unwrap_or_else(|| edges.iter().flatten().map(|&v| v + 1).max().unwrap_or(1)))
            }
            _ => None,
        }
    }

    pub fn ground_set(&self) -> Result<GroundSet> {
        GroundSet::new(self.ground_size())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ground_size();
        if n == 0 {
            return Err(validation("ground set must have at least one element"));
        }
        if n > u32::MAX as usize {
            return Err(validation(format!("ground set of {n} elements exceeds the supported {}", u32::MAX)));
        }
        match self {
            MatroidSpec::Explicit { independent_sets, .. } => {
                explicit::family_masks(n, independent_sets).map(|_| ())
            }
            MatroidSpec::Uniform { n, k } => {
                if k > n {
                    return Err(validation(format!("uniform rank k={k} exceeds n={n}")));
                }
                Ok(())
            }
            MatroidSpec::Partition { blocks, caps } => counting::partition_layout(blocks, caps).map(|_| ()),
            MatroidSpec::Graphic { edges, .. } | MatroidSpec::Cographic { edges, .. } => {
                let nv = self.vertex_count().unwrap();
                if nv > u32::MAX as usize {
                    return Err(validation(format!("{nv} vertices exceed the supported {}", u32::MAX)));
                }
                if let Some(e) = edges.iter().position(|&[u, v]| u >= nv || v >= nv) {
                    return Err(validation(format!("edge {e} has an endpoint outside 0..{nv}")));
                }
                if matches!(self, MatroidSpec::Cographic { .. }) {
                    if nv > edges.len() + 1 {
                        return Err(validation(format!(
                            "cographic matroid needs a connected graph, and {} edges cannot connect {nv} vertices",
                            edges.len()
                        )));
                    }
                    let mut uf = UnionFind::new(nv);
                    for &[u, v] in edges {
                        uf.union(u, v);
                    }
                    if uf.sets != 1 {
                        return Err(validation(format!(
                            "cographic matroid needs a connected graph, found {} components",
                            uf.sets
                        )));
                    }
                }
                Ok(())
            }
            MatroidSpec::BinaryLinear { matrix } => {
                for (r, row) in matrix.iter().enumerate() {
                    if row.len() != n {
                        return Err(validation(format!("matrix row {r} has {} columns, expected {n}", row.len())));
                    }
                    if row.iter().any(|&b| b > 1) {
                        return Err(validation(format!("matrix row {r} has an entry other than 0/1")));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    IndependenceOnly,
    RankCapable,
}

/// Stateful independence/rank tester over a mutable set `S ⊆ 0..n`.
///
/// The sequence of `insert`/`delete` calls determines `S`; queries take
/// `&mut self` only because some backends reorganise internal structures
/// (splay trees) while answering, and never change `S`.
pub trait IncrementalOracle: Send {
    fn ground_size(&self) -> usize;

    fn kind(&self) -> OracleKind;

    fn contains(&self, i: usize) -> bool;

    /// `|S|`.
    fn current_len(&self) -> usize;

    fn insert(&mut self, i: usize) -> Result<()>;

    fn delete(&mut self, i: usize) -> Result<()>;

    fn is_independent(&mut self) -> bool;

    fn rank(&mut self) -> Result<usize>;

    /// Whether `rk(S \ {i}) = rk(S) - 1`. Requires `i ∈ S`.
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool>;

    /// Members of `S` in increasing order.
    fn current(&self) -> Vec<usize> {
        (0..self.ground_size()).filter(|&i| self.contains(i)).collect()
    }
}

/// Builds an oracle with `S = ∅`, backing graph variants by the default
/// dynamic-connectivity structure.
pub fn build_oracle(spec: &MatroidSpec, kind: OracleKind) -> Result<Box<dyn IncrementalOracle>> {
    build_oracle_with(spec, kind, ConnectivityBackend::default())
}

pub fn build_oracle_with(
    spec: &MatroidSpec,
    kind: OracleKind,
    backend: ConnectivityBackend,
) -> Result<Box<dyn IncrementalOracle>> {
    spec.validate()?;
    let n = spec.ground_size();
    let oracle: Box<dyn IncrementalOracle> = match spec {
        MatroidSpec::Explicit { independent_sets, .. } => {
            Box::new(explicit::ExplicitOracle::new(n, independent_sets)?)
        }
        MatroidSpec::Uniform { n, k } => Box::new(counting::UniformOracle::new(*n, *k)),
        MatroidSpec::Partition { blocks, caps } => Box::new(counting::PartitionOracle::new(blocks, caps)?),
        MatroidSpec::Graphic { edges, .. } => {
            Box::new(graph::GraphicOracle::new(spec.vertex_count().unwrap(), edges, backend))
        }
        MatroidSpec::Cographic { edges, .. } => {
            Box::new(graph::CographicOracle::new(spec.vertex_count().unwrap(), edges, backend))
        }
        MatroidSpec::BinaryLinear { matrix } => Box::new(binary::BinaryOracle::new(matrix)),
    };
    Ok(match kind {
        OracleKind::RankCapable => oracle,
        OracleKind::IndependenceOnly => Box::new(IndependenceOnly(oracle)),
    })
}

/// Hides the rank queries of an inner oracle.
struct IndependenceOnly(Box<dyn IncrementalOracle>);

impl IncrementalOracle for IndependenceOnly {
    fn ground_size(&self) -> usize {
        self.0.ground_size()
    }
    fn kind(&self) -> OracleKind {
        OracleKind::IndependenceOnly
    }
    fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }
    fn current_len(&self) -> usize {
        self.0.current_len()
    }
    fn insert(&mut self, i: usize) -> Result<()> {
        self.0.insert(i)
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        self.0.delete(i)
    }
    fn is_independent(&mut self) -> bool {
        self.0.is_independent()
    }
    fn rank(&mut self) -> Result<usize> {
        Err(Error::Unsupported("rank query on an independence-only oracle".into()))
    }
    fn rank_drops_on_delete(&mut self, _i: usize) -> Result<bool> {
        Err(Error::Unsupported("rank-drop query on an independence-only oracle".into()))
    }
}

/// Membership bookkeeping shared by the backends.
#[derive(Clone, Debug)]
pub(crate) struct Membership {
    member: Vec<bool>,
    len: usize,
}

impl Membership {
    pub(crate) fn new(n: usize) -> Self {
        Membership { member: vec![false; n], len: 0 }
    }

    pub(crate) fn insert(&mut self, i: usize) -> Result<()> {
        match self.member.get(i) {
            None => Err(contract(format!("element {i} outside ground set of size {}", self.member.len()))),
            Some(true) => Err(contract(format!("element {i} is already in the current set"))),
            Some(false) => {
                self.member[i] = true;
                self.len += 1;
                Ok(())
            }
        }
    }

    pub(crate) fn delete(&mut self, i: usize) -> Result<()> {
        match self.member.get(i) {
            Some(true) => {
                self.member[i] = false;
                self.len -= 1;
                Ok(())
            }
            _ => Err(contract(format!("element {i} is not in the current set"))),
        }
    }

    pub(crate) fn require(&self, i: usize) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(contract(format!("element {i} is not in the current set")))
        }
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.member.get(i).copied().unwrap_or(false)
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn ground_size(&self) -> usize {
        self.member.len()
    }
}

/// Collects a set family into bitmasks, rejecting duplicates inside a set.
pub(crate) fn to_mask(n: usize, set: &[usize]) -> Result<u64> {
    let mut mask = 0u64;
    for &i in set {
        if i >= n {
            return Err(validation(format!("element {i} outside ground set of size {n}")));
        }
        if mask >> i & 1 == 1 {
            return Err(validation(format!("element {i} repeated within a set")));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}
