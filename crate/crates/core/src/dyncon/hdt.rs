use super::ett::EulerTourForest;
use super::{DynamicConnectivity, EdgeHandle, Slots};
use crate::error::Result;

#[derive(Clone, Debug, Default)]
struct EdgeRec {
    u: u32,
    v: u32,
    level: u8,
    tree: bool,
    /// Index in `adj[u][level]` / `adj[v][level]` while a non-tree edge.
    pos_u: u32,
    pos_v: u32,
    /// Arc pair in forest `i` for every `i <= level` while a tree edge.
    arcs: Vec<(u32, u32)>,
}

/// Level-based fully dynamic connectivity.
///
/// Every edge has a level. Forest `F_i` spans the edges of level `>= i` and
/// `F_0` is a spanning forest of the whole graph. A tree in `F_i` has at most
/// `n / 2^i` vertices, which caps the number of levels at `log2 n + 1`.
/// Self-loops are recorded but never enter a forest or adjacency list.
#[derive(Clone, Debug)]
pub struct DynGraph {
    n: usize,
    slots: Slots,
    edges: Vec<EdgeRec>,
    forests: Vec<EulerTourForest>,
    /// `adj[v][i]`: non-tree edges of level `i` incident to `v`.
    adj: Vec<Vec<Vec<u32>>>,
    components: usize,
}

impl DynGraph {
    pub fn new(vertex_count: usize) -> Self {
        DynGraph {
            n: vertex_count,
            slots: Slots::default(),
            edges: Vec::new(),
            forests: vec![EulerTourForest::new(vertex_count)],
            adj: vec![Vec::new(); vertex_count],
            components: vertex_count,
        }
    }

    /// Number of levels currently materialised.
    pub fn level_count(&self) -> usize {
        self.forests.len()
    }

    fn forest(&mut self, level: usize) -> &mut EulerTourForest {
        while self.forests.len() <= level {
            self.forests.push(EulerTourForest::new(self.n));
        }
        &mut self.forests[level]
    }

    fn add_nontree(&mut self, e: u32, level: usize) {
        let (u, v) = (self.edges[e as usize].u as usize, self.edges[e as usize].v as usize);
        self.edges[e as usize].level = level as u8;
        self.edges[e as usize].tree = false;
        for (end, x) in [(0, u), (1, v)] {
            let lists = &mut self.adj[x];
            if lists.len() <= level {
                lists.resize_with(level + 1, Vec::new);
            }
            let list = &mut lists[level];
            let pos = list.len() as u32;
            list.push(e);
            let first = pos == 0;
            if end == 0 {
                self.edges[e as usize].pos_u = pos;
            } else {
                self.edges[e as usize].pos_v = pos;
            }
            if first {
                self.forest(level).set_adj_mark(x, true);
            }
        }
    }

    fn remove_nontree(&mut self, e: u32) {
        let rec = &self.edges[e as usize];
        let level = rec.level as usize;
        let ends = [(rec.u as usize, rec.pos_u), (rec.v as usize, rec.pos_v)];
        for (x, pos) in ends {
            let list = &mut self.adj[x][level];
            list.swap_remove(pos as usize);
            if let Some(&moved) = list.get(pos as usize) {
                let m = &mut self.edges[moved as usize];
                // a moved parallel edge has x as exactly one endpoint
                if m.u as usize == x {
                    m.pos_u = pos;
                } else {
                    m.pos_v = pos;
                }
            }
            if list.is_empty() {
                self.forests[level].set_adj_mark(x, false);
            }
        }
    }

    /// Makes `e` a tree edge of level `level`, linking it in `F_0..=F_level`.
    fn add_tree(&mut self, e: u32, level: usize) {
        let (u, v) = (self.edges[e as usize].u as usize, self.edges[e as usize].v as usize);
        let mut arcs = Vec::with_capacity(level + 1);
        for i in 0..=level {
            arcs.push(self.forest(i).link(u, v, e));
        }
        self.forests[level].set_edge_mark(arcs[level].0, true);
        let rec = &mut self.edges[e as usize];
        rec.tree = true;
        rec.level = level as u8;
        rec.arcs = arcs;
    }

    /// Moves tree edge `e` from its level `i` up to `i + 1`.
    fn raise_tree(&mut self, e: u32) {
        let i = self.edges[e as usize].level as usize;
        let (u, v) = (self.edges[e as usize].u as usize, self.edges[e as usize].v as usize);
        let old = self.edges[e as usize].arcs[i].0;
        self.forests[i].set_edge_mark(old, false);
        let arcs = self.forest(i + 1).link(u, v, e);
        self.forests[i + 1].set_edge_mark(arcs.0, true);
        let rec = &mut self.edges[e as usize];
        rec.arcs.push(arcs);
        rec.level = (i + 1) as u8;
    }

    /// Searches levels `level..=0` for an edge reconnecting the trees of `u` and `v`.
    fn replace(&mut self, u: usize, v: usize, level: usize) -> bool {
        for i in (0..=level).rev() {
            let su = self.forests[i].tree_size(u);
            let sv = self.forests[i].tree_size(v);
            let small = if su <= sv { u } else { v };

            while let Some(f) = self.forests[i].find_marked_edge(small) {
                self.raise_tree(f);
            }

            while let Some(x) = self.forests[i].find_marked_vertex(small) {
                while let Some(&f) = self.adj[x][i].last() {
                    let rec = &self.edges[f as usize];
                    let other = if rec.u as usize == x { rec.v } else { rec.u } as usize;
                    self.remove_nontree(f);
                    if self.forests[i].connected(other, small) {
                        self.add_nontree(f, i + 1);
                    } else {
                        self.add_tree(f, i);
                        return true;
                    }
                }
            }
        }
        false
    }

    #[cfg(test)]
    pub(crate) fn check_levels(&mut self) {
        // every tree edge is linked in exactly levels 0..=level
        for s in 0..self.slots.capacity() {
            if !self.slots.live[s] {
                continue;
            }
            let rec = self.edges[s].clone();
            if rec.u == rec.v {
                continue;
            }
            if rec.tree {
                assert_eq!(rec.arcs.len(), rec.level as usize + 1);
            } else {
                assert!(rec.arcs.is_empty());
                assert!(self.forests[rec.level as usize].connected(rec.u as usize, rec.v as usize));
            }
        }
    }
}

impl DynamicConnectivity for DynGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> EdgeHandle {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range for {} vertices", self.n);
        let h = self.slots.alloc();
        let e = h.slot;
        let rec = EdgeRec { u: u as u32, v: v as u32, ..EdgeRec::default() };
        if e as usize == self.edges.len() {
            self.edges.push(rec);
        } else {
            self.edges[e as usize] = rec;
        }
        if u != v {
            if self.forests[0].connected(u, v) {
                self.add_nontree(e, 0);
            } else {
                self.add_tree(e, 0);
                self.components -= 1;
            }
        }
        h
    }

    fn delete_edge(&mut self, h: EdgeHandle) -> Result<()> {
        let e = self.slots.check(h)?;
        let (u, v) = (self.edges[e].u as usize, self.edges[e].v as usize);
        if u != v {
            if self.edges[e].tree {
                let level = self.edges[e].level as usize;
                let arcs = std::mem::take(&mut self.edges[e].arcs);
                for (i, (a, b)) in arcs.into_iter().enumerate() {
                    self.forests[i].cut(a, b);
                }
                self.edges[e].tree = false;
                if !self.replace(u, v, level) {
                    self.components += 1;
                }
            } else {
                self.remove_nontree(e as u32);
            }
        }
        self.slots.release(e);
        Ok(())
    }

    fn connected(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n);
        self.forests[0].connected(u, v)
    }

    fn component_count(&mut self) -> usize {
        self.components
    }

    fn edge_count(&self) -> usize {
        self.slots.len()
    }
}
