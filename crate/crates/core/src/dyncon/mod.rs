//! Fully dynamic connectivity over multigraphs.
//!
//! [`DynGraph`] is the level-based structure of Holm, de Lichtenberg and
//! Thorup: a hierarchy of spanning forests kept as Euler-tour sequences in
//! splay trees, giving `O(log^2 n)` amortized insert/delete and `O(log n)`
//! amortized queries. [`NaiveDynGraph`] keeps only the edge list and answers
//! every query by a fresh union-find pass; it is the reference oracle in tests
//! and the slow baseline in benchmarks.

mod ett;
mod hdt;

pub use hdt::DynGraph;

use crate::error::{contract, Result};
use serde::{Deserialize, Serialize};

/// Opaque handle returned by `insert_edge`. Handles are never reused, so a
/// stale handle is always detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeHandle {
    pub(crate) slot: u32,
    pub(crate) gen: u32,
}

pub trait DynamicConnectivity: Send {
    fn vertex_count(&self) -> usize;

    /// Adds an edge; parallel edges and self-loops are allowed.
    ///
    /// Panics if either endpoint is out of range.
    fn insert_edge(&mut self, u: usize, v: usize) -> EdgeHandle;

    fn delete_edge(&mut self, h: EdgeHandle) -> Result<()>;

    fn connected(&mut self, u: usize, v: usize) -> bool;

    /// Number of connected components, isolated vertices included.
    fn component_count(&mut self) -> usize;

    /// Number of live edges.
    fn edge_count(&self) -> usize;
}

/// Which connectivity structure backs graphic and cographic oracles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectivityBackend {
    #[default]
    Hdt,
    Naive,
}

impl std::str::FromStr for ConnectivityBackend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hdt" | "dyncon" => Ok(ConnectivityBackend::Hdt),
            "naive" => Ok(ConnectivityBackend::Naive),
            other => Err(format!("unknown connectivity backend '{other}' (expected hdt or naive)")),
        }
    }
}

impl ConnectivityBackend {
    pub fn name(self) -> &'static str {
        match self {
            ConnectivityBackend::Hdt => "hdt",
            ConnectivityBackend::Naive => "naive",
        }
    }
}

/// Slot allocator shared by both backends: generation-tagged slots with a free list.
#[derive(Clone, Debug, Default)]
pub(crate) struct Slots {
    gens: Vec<u32>,
    live: Vec<bool>,
    free: Vec<u32>,
    count: usize,
}

impl Slots {
    pub(crate) fn alloc(&mut self) -> EdgeHandle {
        self.count += 1;
        if let Some(slot) = self.free.pop() {
            self.live[slot as usize] = true;
            EdgeHandle { slot, gen: self.gens[slot as usize] }
        } else {
            let slot = self.gens.len() as u32;
            self.gens.push(0);
            self.live.push(true);
            EdgeHandle { slot, gen: 0 }
        }
    }

    pub(crate) fn check(&self, h: EdgeHandle) -> Result<usize> {
        let s = h.slot as usize;
        if s < self.gens.len() && self.live[s] && self.gens[s] == h.gen {
            Ok(s)
        } else {
            Err(contract(format!("edge handle {h:?} is not live")))
        }
    }

    pub(crate) fn release(&mut self, slot: usize) {
        self.live[slot] = false;
        self.gens[slot] = self.gens[slot].wrapping_add(1);
        self.free.push(slot as u32);
        self.count -= 1;
    }

    pub(crate) fn len(&self) -> usize {
        self.count
    }

    #[cfg(test)]
    pub(crate) fn capacity(&self) -> usize {
        self.gens.len()
    }
}

/// Recompute-on-query connectivity: `O(1)` updates, `O(m α(n))` queries.
#[derive(Clone, Debug)]
pub struct NaiveDynGraph {
    n: usize,
    slots: Slots,
    ends: Vec<(u32, u32)>,
}

impl NaiveDynGraph {
    pub fn new(vertex_count: usize) -> Self {
        NaiveDynGraph { n: vertex_count, slots: Slots::default(), ends: Vec::new() }
    }

    fn components(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.n);
        for (s, &(u, v)) in self.ends.iter().enumerate() {
            if self.slots.live[s] {
                uf.union(u as usize, v as usize);
            }
        }
        uf
    }
}

impl DynamicConnectivity for NaiveDynGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> EdgeHandle {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range for {} vertices", self.n);
        let h = self.slots.alloc();
        let s = h.slot as usize;
        if s == self.ends.len() {
            self.ends.push((u as u32, v as u32));
        } else {
            self.ends[s] = (u as u32, v as u32);
        }
        h
    }

    fn delete_edge(&mut self, h: EdgeHandle) -> Result<()> {
        let s = self.slots.check(h)?;
        self.slots.release(s);
        Ok(())
    }

    fn connected(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n);
        u == v || {
            let mut uf = self.components();
            uf.find(u) == uf.find(v)
        }
    }

    fn component_count(&mut self) -> usize {
        self.components().sets
    }

    fn edge_count(&self) -> usize {
        self.slots.len()
    }
}

/// Path-halving union-find with union by size.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    pub(crate) sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n], sets: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }
}
