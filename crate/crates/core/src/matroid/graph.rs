use super::{IncrementalOracle, Membership, OracleKind};
use crate::dyncon::{ConnectivityBackend, DynGraph, DynamicConnectivity, EdgeHandle, NaiveDynGraph};
use crate::error::Result;

fn new_graph(vertices: usize, backend: ConnectivityBackend) -> Box<dyn DynamicConnectivity> {
    match backend {
        ConnectivityBackend::Hdt => Box::new(DynGraph::new(vertices)),
        ConnectivityBackend::Naive => Box::new(NaiveDynGraph::new(vertices)),
    }
}

/// Graphic matroid: the dynamic graph holds exactly the edges of `S`.
pub(crate) struct GraphicOracle {
    ends: Vec<(usize, usize)>,
    vertices: usize,
    graph: Box<dyn DynamicConnectivity>,
    handles: Vec<Option<EdgeHandle>>,
    members: Membership,
}

impl GraphicOracle {
    pub(crate) fn new(vertices: usize, edges: &[[usize; 2]], backend: ConnectivityBackend) -> Self {
        GraphicOracle {
            ends: edges.iter().map(|&[u, v]| (u, v)).collect(),
            vertices,
            graph: new_graph(vertices, backend),
            handles: vec![None; edges.len()],
            members: Membership::new(edges.len()),
        }
    }

    fn graph_rank(&mut self) -> usize {
        self.vertices - self.graph.component_count()
    }
}

impl IncrementalOracle for GraphicOracle {
    fn ground_size(&self) -> usize {
        self.members.ground_size()
    }
    fn kind(&self) -> OracleKind {
        OracleKind::RankCapable
    }
    fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
    fn current_len(&self) -> usize {
        self.members.len()
    }
    fn insert(&mut self, i: usize) -> Result<()> {
        self.members.insert(i)?;
        let (u, v) = self.ends[i];
        self.handles[i] = Some(self.graph.insert_edge(u, v));
        Ok(())
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        self.members.delete(i)?;
        let h = self.handles[i].take().expect("member edge has a handle");
        self.graph.delete_edge(h)
    }
    fn is_independent(&mut self) -> bool {
        self.members.len() == self.graph_rank()
    }
    fn rank(&mut self) -> Result<usize> {
        Ok(self.graph_rank())
    }
    /// An edge carries rank iff its endpoints disconnect without it.
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.members.require(i)?;
        let (u, v) = self.ends[i];
        if u == v {
            return Ok(false);
        }
        let h = self.handles[i].take().expect("member edge has a handle");
        self.graph.delete_edge(h)?;
        let still = self.graph.connected(u, v);
        self.handles[i] = Some(self.graph.insert_edge(u, v));
        Ok(!still)
    }
}

/// Cographic matroid: `S` is a set of removed edges and the dynamic graph
/// holds the complement `E \ S`. `S` is independent iff the complement is
/// connected.
pub(crate) struct CographicOracle {
    ends: Vec<(usize, usize)>,
    graph: Box<dyn DynamicConnectivity>,
    handles: Vec<Option<EdgeHandle>>,
    members: Membership,
    base_components: usize,
}

impl CographicOracle {
    pub(crate) fn new(vertices: usize, edges: &[[usize; 2]], backend: ConnectivityBackend) -> Self {
        let mut graph = new_graph(vertices, backend);
        let handles = edges.iter().map(|&[u, v]| Some(graph.insert_edge(u, v))).collect();
        let base_components = graph.component_count();
        CographicOracle {
            ends: edges.iter().map(|&[u, v]| (u, v)).collect(),
            graph,
            handles,
            members: Membership::new(edges.len()),
            base_components,
        }
    }
}

impl IncrementalOracle for CographicOracle {
    fn ground_size(&self) -> usize {
        self.members.ground_size()
    }
    fn kind(&self) -> OracleKind {
        OracleKind::RankCapable
    }
    fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
    fn current_len(&self) -> usize {
        self.members.len()
    }
    fn insert(&mut self, i: usize) -> Result<()> {
        self.members.insert(i)?;
        let h = self.handles[i].take().expect("complement edge has a handle");
        self.graph.delete_edge(h)
    }
    fn delete(&mut self, i: usize) -> Result<()> {
        self.members.delete(i)?;
        let (u, v) = self.ends[i];
        self.handles[i] = Some(self.graph.insert_edge(u, v));
        Ok(())
    }
    fn is_independent(&mut self) -> bool {
        self.graph.component_count() == self.base_components
    }
    /// Dual rank `|S| + κ(E) - κ(E \ S)`.
    fn rank(&mut self) -> Result<usize> {
        Ok(self.members.len() + self.base_components - self.graph.component_count())
    }
    /// Putting `i` back into the complement leaves the component count
    /// unchanged iff its endpoints are already connected there.
    fn rank_drops_on_delete(&mut self, i: usize) -> Result<bool> {
        self.members.require(i)?;
        let (u, v) = self.ends[i];
        Ok(u == v || self.graph.connected(u, v))
    }
}
