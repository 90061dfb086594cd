use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};

/// Tree decomposition: a tree on `bags.len()` nodes plus one bag per node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    /// Sorted, duplicate-free bags.
    pub bags: Vec<Vec<Vertex>>,
    /// Undirected tree edges between node ids.
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<Vertex>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    /// Single bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition::new(vec![(0..n).collect()], Vec::new())
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// `max |bag| - 1`, clamped at 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Checks the three decomposition conditions and that the node graph is a
/// tree; returns the width. The error names the first violation found.
pub fn validate_td(g: &MultiGraph, td: &TreeDecomposition) -> Result<usize> {
    let k = td.bags.len();
    let bad = |msg: String| Err(Error::InvalidDecomposition(msg));

    if k == 0 {
        if g.n() == 0 {
            return Ok(0);
        }
        return bad("no bags for a non-empty graph".into());
    }
    for &(a, b) in &td.tree_edges {
        if a >= k || b >= k {
            return bad(format!("tree edge ({a},{b}) references a missing node"));
        }
        if a == b {
            return bad(format!("tree edge ({a},{a}) is a loop"));
        }
    }
    if td.tree_edges.len() != k - 1 {
        return bad(format!(
            "{} tree edges for {k} nodes, a tree needs {}",
            td.tree_edges.len(),
            k - 1
        ));
    }
    let adj = td.adjacency();
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        for &u in &adj[t] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    if let Some(t) = seen.iter().position(|s| !s) {
        return bad(format!("node {t} is disconnected from node 0"));
    }

    let mut occurrences = vec![0usize; g.n()];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                return bad(format!("bag {t} holds vertex {v} outside the graph"));
            }
            occurrences[v] += 1;
        }
    }
    if let Some(v) = occurrences.iter().position(|&c| c == 0) {
        return bad(format!("vertex {v} is in no bag"));
    }

    let mut covered = vec![false; g.m()];
    let holders = vertex_holders(g.n(), td);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        covered[e] = holders[u].iter().any(|&t| td.bags[t].binary_search(&v).is_ok());
    }
    if let Some(e) = covered.iter().position(|c| !c) {
        let (u, v) = g.edge(e);
        return bad(format!("edge ({},{}) uncovered", u.min(v), u.max(v)));
    }

    // A vertex's nodes induce a forest of the tree; it is connected exactly
    // when it has one tree edge fewer than nodes.
    let mut inner_edges = vec![0usize; g.n()];
    for &(a, b) in &td.tree_edges {
        for &v in &td.bags[a] {
            if td.bags[b].binary_search(&v).is_ok() {
                inner_edges[v] += 1;
            }
        }
    }
    for v in 0..g.n() {
        if inner_edges[v] + 1 != occurrences[v] {
            return bad(format!("bags containing vertex {v} do not form a connected subtree"));
        }
    }
    Ok(td.width())
}

pub(crate) fn vertex_holders(n: usize, td: &TreeDecomposition) -> Vec<Vec<usize>> {
    let mut holders = vec![Vec::new(); n];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v < n {
                holders[v].push(t);
            }
        }
    }
    holders
}
