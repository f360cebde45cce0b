//! Euler-tour forest on splay trees.
//!
//! Each tree of the forest is stored as its circular Euler tour: one node per
//! vertex (placed at its first visit) and two arc nodes per tree edge. The
//! tour sequence is kept in a splay tree keyed by position. Vertex nodes are
//! created lazily; a vertex without a node is a singleton tree.

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    /// Nodes in the subtree.
    size: u32,
    /// Vertex nodes in the subtree.
    verts: u32,
    /// Vertex id for vertex nodes, edge slot for arc nodes.
    label: u32,
    is_vertex: bool,
    /// Arc that carries the "tree edge of exactly this level" mark.
    own_edge: bool,
    /// Vertex with non-tree edges stored at this level.
    own_adj: bool,
    agg_edge: bool,
    agg_adj: bool,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct EulerTourForest {
    nodes: Vec<Node>,
    free: Vec<u32>,
    vertex: Vec<u32>,
}

impl EulerTourForest {
    pub(crate) fn new(n: usize) -> Self {
        EulerTourForest { nodes: Vec::new(), free: Vec::new(), vertex: vec![NIL; n] }
    }

    fn alloc(&mut self, label: u32, is_vertex: bool) -> u32 {
        let node = Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
            verts: is_vertex as u32,
            label,
            is_vertex,
            own_edge: false,
            own_adj: false,
            agg_edge: false,
            agg_adj: false,
        };
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = node;
            id
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn vertex_node(&mut self, v: usize) -> u32 {
        let id = self.vertex[v];
        if id != NIL {
            return id;
        }
        let id = self.alloc(v as u32, true);
        self.vertex[v] = id;
        id
    }

    #[inline]
    fn n(&self, x: u32) -> &Node {
        &self.nodes[x as usize]
    }

    #[inline]
    fn nm(&mut self, x: u32) -> &mut Node {
        &mut self.nodes[x as usize]
    }

    #[inline]
    fn size(&self, x: u32) -> u32 {
        if x == NIL {
            0
        } else {
            self.n(x).size
        }
    }

    #[inline]
    fn pull(&mut self, x: u32) {
        let (l, r) = (self.n(x).left, self.n(x).right);
        let mut size = 1;
        let mut verts = self.n(x).is_vertex as u32;
        let mut agg_edge = self.n(x).own_edge;
        let mut agg_adj = self.n(x).own_adj;
        for c in [l, r] {
            if c != NIL {
                let cn = self.n(c);
                size += cn.size;
                verts += cn.verts;
                agg_edge |= cn.agg_edge;
                agg_adj |= cn.agg_adj;
            }
        }
        let node = self.nm(x);
        node.size = size;
        node.verts = verts;
        node.agg_edge = agg_edge;
        node.agg_adj = agg_adj;
    }

    fn rotate(&mut self, x: u32) {
        let p = self.n(x).parent;
        let g = self.n(p).parent;
        if self.n(p).left == x {
            let b = self.n(x).right;
            self.nm(p).left = b;
            if b != NIL {
                self.nm(b).parent = p;
            }
            self.nm(x).right = p;
        } else {
            let b = self.n(x).left;
            self.nm(p).right = b;
            if b != NIL {
                self.nm(b).parent = p;
            }
            self.nm(x).left = p;
        }
        self.nm(p).parent = x;
        self.nm(x).parent = g;
        if g != NIL {
            if self.n(g).left == p {
                self.nm(g).left = x;
            } else {
                self.nm(g).right = x;
            }
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: u32) {
        while self.n(x).parent != NIL {
            let p = self.n(x).parent;
            let g = self.n(p).parent;
            if g != NIL {
                let zigzig = (self.n(g).left == p) == (self.n(p).left == x);
                if zigzig {
                    self.rotate(p);
                } else {
                    self.rotate(x);
                }
            }
            self.rotate(x);
        }
    }

    fn root_of(&self, mut x: u32) -> u32 {
        while self.n(x).parent != NIL {
            x = self.n(x).parent;
        }
        x
    }

    /// Concatenates two sequences given by their roots.
    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let mut last = a;
        while self.n(last).right != NIL {
            last = self.n(last).right;
        }
        self.splay(last);
        self.nm(last).right = b;
        self.nm(b).parent = last;
        self.pull(last);
        last
    }

    /// Detaches everything before `x`; returns (prefix root, root at `x`).
    fn split_before(&mut self, x: u32) -> (u32, u32) {
        self.splay(x);
        let l = self.n(x).left;
        if l != NIL {
            self.nm(l).parent = NIL;
            self.nm(x).left = NIL;
            self.pull(x);
        }
        (l, x)
    }

    /// Detaches everything after `x`; returns (root at `x`, suffix root).
    fn split_after(&mut self, x: u32) -> (u32, u32) {
        self.splay(x);
        let r = self.n(x).right;
        if r != NIL {
            self.nm(r).parent = NIL;
            self.nm(x).right = NIL;
            self.pull(x);
        }
        (x, r)
    }

    /// Rotates the tour so it starts at `x`; returns the new root.
    fn reroot(&mut self, x: u32) -> u32 {
        let (l, x) = self.split_before(x);
        self.merge(x, l)
    }

    pub(crate) fn connected(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            return true;
        }
        let (a, b) = (self.vertex[u], self.vertex[v]);
        if a == NIL || b == NIL {
            return false;
        }
        self.splay(a);
        let r = self.root_of(b);
        self.splay(b);
        r == a
    }

    /// Number of vertices in the tree containing `v`.
    pub(crate) fn tree_size(&mut self, v: usize) -> usize {
        let a = self.vertex[v];
        if a == NIL {
            return 1;
        }
        self.splay(a);
        self.n(a).verts as usize
    }

    /// Links the trees of `u` and `v` by a tree edge; returns its two arc nodes.
    pub(crate) fn link(&mut self, u: usize, v: usize, edge: u32) -> (u32, u32) {
        let nu = self.vertex_node(u);
        let nv = self.vertex_node(v);
        let ru = self.reroot(nu);
        let rv = self.reroot(nv);
        let a = self.alloc(edge, false);
        let b = self.alloc(edge, false);
        let s = self.merge(ru, a);
        let s = self.merge(s, rv);
        self.merge(s, b);
        (a, b)
    }

    /// Removes the tree edge whose arcs are `a` and `b`.
    pub(crate) fn cut(&mut self, a: u32, b: u32) {
        self.splay(a);
        let pa = self.size(self.n(a).left);
        self.splay(b);
        let pb = self.size(self.n(b).left);
        let (first, second) = if pa < pb { (a, b) } else { (b, a) };
        let (prefix, first) = self.split_before(first);
        let (_, rest) = self.split_after(first);
        debug_assert!(rest != NIL);
        let (_, second) = self.split_before(second);
        let (_, suffix) = self.split_after(second);
        self.merge(prefix, suffix);
        self.free.push(first);
        self.free.push(second);
    }

    pub(crate) fn set_edge_mark(&mut self, arc: u32, on: bool) {
        self.splay(arc);
        self.nm(arc).own_edge = on;
        self.pull(arc);
    }

    pub(crate) fn set_adj_mark(&mut self, v: usize, on: bool) {
        let x = if on {
            self.vertex_node(v)
        } else {
            match self.vertex[v] {
                NIL => return,
                x => x,
            }
        };
        self.splay(x);
        self.nm(x).own_adj = on;
        self.pull(x);
    }

    /// Edge slot of some marked arc in the tree of `v`.
    pub(crate) fn find_marked_edge(&mut self, v: usize) -> Option<u32> {
        self.find_marked(v, |n| n.own_edge, |n| n.agg_edge)
    }

    /// Some vertex with the adjacency mark in the tree of `v`.
    pub(crate) fn find_marked_vertex(&mut self, v: usize) -> Option<usize> {
        self.find_marked(v, |n| n.own_adj, |n| n.agg_adj).map(|l| l as usize)
    }

    fn find_marked(&mut self, v: usize, own: fn(&Node) -> bool, agg: fn(&Node) -> bool) -> Option<u32> {
        let mut x = self.vertex[v];
        if x == NIL {
            return None;
        }
        self.splay(x);
        if !agg(self.n(x)) {
            return None;
        }
        loop {
            let node = self.n(x);
            if own(node) {
                break;
            }
            let l = node.left;
            x = if l != NIL && agg(self.n(l)) { l } else { node.right };
        }
        self.splay(x);
        Some(self.n(x).label)
    }
}
