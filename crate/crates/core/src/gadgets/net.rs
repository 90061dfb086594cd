//! Small networks of plain vertices and relation nodes, flattened into a
//! gadget by realizing every node and wiring its dangling edges.

use crate::graph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Hw22,
    Eq(usize),
    /// Exactly one of `k` edges.
    Hw1(usize),
}

impl Node {
    pub fn arity(self) -> usize {
        match self {
            Node::Hw22 => 2,
            Node::Eq(k) | Node::Hw1(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum End {
    Vertex(usize),
    Slot(usize, usize),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Net {
    pub vertices: usize,
    pub nodes: Vec<Node>,
    pub links: Vec<(End, End)>,
    pub outer: Vec<End>,
    next_slot: Vec<usize>,
}

impl Net {
    pub fn vertex(&mut self) -> End {
        self.vertices += 1;
        End::Vertex(self.vertices - 1)
    }

    pub fn node(&mut self, kind: Node) -> usize {
        self.nodes.push(kind);
        self.next_slot.push(0);
        self.nodes.len() - 1
    }

    /// Next unused dangling edge of `node`.
    pub fn slot(&mut self, node: usize) -> End {
        let s = self.next_slot[node];
        assert!(s < self.nodes[node].arity(), "node {node} has no free slot");
        self.next_slot[node] += 1;
        End::Slot(node, s)
    }

    pub fn link(&mut self, a: End, b: End) {
        self.links.push((a, b));
    }

    pub fn dangle(&mut self, e: End) {
        self.outer.push(e);
    }

    /// Every remaining slot of `node` becomes an outer dangling edge.
    pub fn dangle_rest(&mut self, node: usize) {
        while self.next_slot[node] < self.nodes[node].arity() {
            let e = self.slot(node);
            self.dangle(e);
        }
    }

    /// Attaches `j` forced edges to `x` with HW(2)=2 nodes, plus one
    /// forced single edge when `j` is odd.
    pub fn force(&mut self, x: End, j: usize) {
        for _ in 0..j / 2 {
            let h = self.node(Node::Hw22);
            let (s0, s1) = (self.slot(h), self.slot(h));
            self.link(s0, x);
            self.link(s1, x);
        }
        if j % 2 == 1 {
            let f = self.node(Node::Hw1(1));
            let s = self.slot(f);
            self.link(s, x);
        }
    }

    /// Connects `a` and `b` through `count` HW(2)=2 nodes.
    pub fn common_hw22(&mut self, a: End, b: End, count: usize) {
        for _ in 0..count {
            let h = self.node(Node::Hw22);
            let (s0, s1) = (self.slot(h), self.slot(h));
            self.link(s0, a);
            self.link(s1, b);
        }
    }

    pub fn check_complete(&self) -> bool {
        self.nodes
            .iter()
            .zip(&self.next_slot)
            .all(|(n, &s)| s == n.arity())
    }

    /// Replaces every exactly-one node of arity four or more by a chain of
    /// arity-2 and arity-3 exactly-one nodes.
    pub fn expand_hw1(&self) -> Net {
        let mut out = Net {
            vertices: self.vertices,
            ..Net::default()
        };
        let mut slot_map: Vec<Vec<End>> = Vec::with_capacity(self.nodes.len());
        for &kind in &self.nodes {
            match kind {
                Node::Hw1(k) if k >= 4 => {
                    let u = out.node(Node::Hw1(3));
                    let mut free: Vec<End> = (0..3).map(|_| out.slot(u)).collect();
                    for _ in 0..k - 3 {
                        let x = free.pop().expect("free slot");
                        let v = out.node(Node::Hw1(2));
                        let w = out.node(Node::Hw1(3));
                        let (v0, v1, w0) = (out.slot(v), out.slot(v), out.slot(w));
                        out.link(x, v0);
                        out.link(v1, w0);
                        free.push(out.slot(w));
                        free.push(out.slot(w));
                    }
                    slot_map.push(free);
                }
                _ => {
                    let id = out.node(kind);
                    slot_map.push((0..kind.arity()).map(|_| out.slot(id)).collect());
                }
            }
        }
        let map = |e: End| match e {
            End::Vertex(_) => e,
            End::Slot(n, s) => slot_map[n][s],
        };
        for &(a, b) in &self.links {
            out.link(map(a), map(b));
        }
        for &e in &self.outer {
            out.dangle(map(e));
        }
        out
    }
}

/// Resolved endpoint: vertex index in the flattened graph.
pub(crate) fn resolve(e: End, vertex_base: usize, slot_vertex: &[Vec<Vertex>]) -> Vertex {
    match e {
        End::Vertex(v) => vertex_base + v,
        End::Slot(n, s) => slot_vertex[n][s],
    }
}
