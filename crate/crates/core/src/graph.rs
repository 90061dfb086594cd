use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Undirected loop-free multigraph with stable, dense edge indices.
///
/// Parallel edges are distinct edges with distinct indices; nothing in the
/// crate ever merges them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    incident: Vec<Vec<EdgeId>>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            incident: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = MultiGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.incident.push(Vec::new());
        self.n - 1
    }

    /// Appends an edge and returns its index.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId> {
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.incident[u].push(id);
        self.incident[v].push(id);
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// Incident edge ids of `v` in insertion order.
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident[v].len()
    }

    pub fn other(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Neighbour list with multiplicity.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.incident[v].iter().map(move |&e| self.other(e, v))
    }

    /// Simple adjacency sets (parallel edges collapsed).
    pub fn adjacency_sets(&self) -> Vec<Vec<Vertex>> {
        let mut adj: Vec<Vec<Vertex>> = (0..self.n)
            .map(|v| {
                let mut ns: Vec<Vertex> = self.neighbors(v).collect();
                ns.sort_unstable();
                ns.dedup();
                ns
            })
            .collect();
        adj.shrink_to_fit();
        adj
    }

    /// No parallel edges (loops are impossible by construction).
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        self.edges
            .iter()
            .all(|&(u, v)| seen.insert((u.min(v), u.max(v))))
    }

    /// Disjoint union; returns the offset added to `other`'s vertex ids.
    pub fn append(&mut self, other: &MultiGraph) -> usize {
        let offset = self.n;
        for _ in 0..other.n {
            self.add_vertex();
        }
        for &(u, v) in &other.edges {
            self.add_edge(u + offset, v + offset)
                .expect("edges of a valid graph stay valid after shifting");
        }
        offset
    }

    pub fn complete(k: usize) -> Self {
        let mut g = MultiGraph::new(k);
        for u in 0..k {
            for v in u + 1..k {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle(k: usize) -> Self {
        let mut g = MultiGraph::new(k);
        for u in 0..k {
            g.add_edge(u, (u + 1) % k).unwrap();
        }
        g
    }

    pub fn path(k: usize) -> Self {
        let mut g = MultiGraph::new(k);
        for u in 1..k {
            g.add_edge(u - 1, u).unwrap();
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = MultiGraph::new(a + b);
        for u in 0..a {
            for v in 0..b {
                g.add_edge(u, a + v).unwrap();
            }
        }
        g
    }

    /// Length of a shortest cycle, `None` for forests. Parallel edges form
    /// cycles of length 2.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut via = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            via.iter_mut().for_each(|e| *e = usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                    break;
                }
                for &e in &self.incident[u] {
                    if e == via[u] {
                        continue;
                    }
                    let w = self.other(e, u);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else if via[w] != e {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}
