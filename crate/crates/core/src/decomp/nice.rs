use super::td::{validate_td, vertex_holders, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(Vertex),
    IntroduceEdge(EdgeId),
    Forget(Vertex),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted bag.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition with introduce-edge nodes.
///
/// Nodes are stored bottom-up: every child has a smaller index than its
/// parent, and the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Structural check of every nice-decomposition rule against `g`.
    pub fn check(&self, g: &MultiGraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        if self.nodes.is_empty() {
            return bad("empty nice decomposition".into());
        }
        if !self.nodes[self.root()].bag.is_empty() {
            return bad("root bag is not empty".into());
        }
        let mut introduced = vec![0usize; g.m()];
        let mut parent_count = vec![0usize; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= t {
                    return bad(format!("node {t} has child {c} stored after it"));
                }
                parent_count[c] += 1;
            }
            let child_bag = |i: usize| &self.nodes[node.children[i]].bag;
            let arity = node.children.len();
            let ok = match node.kind {
                NiceKind::Leaf => arity == 0 && node.bag.is_empty(),
                NiceKind::IntroduceVertex(v) => {
                    arity == 1 && !child_bag(0).contains(&v) && with(child_bag(0), v) == node.bag
                }
                NiceKind::Forget(v) => {
                    arity == 1 && child_bag(0).contains(&v) && without(child_bag(0), v) == node.bag
                }
                NiceKind::IntroduceEdge(e) => {
                    if e >= g.m() {
                        return bad(format!("node {t} introduces unknown edge {e}"));
                    }
                    introduced[e] += 1;
                    let (u, v) = g.edge(e);
                    arity == 1
                        && *child_bag(0) == node.bag
                        && node.bag.contains(&u)
                        && node.bag.contains(&v)
                }
                NiceKind::Join => arity == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag,
            };
            if !ok {
                return bad(format!("node {t} ({:?}) violates its node rule", node.kind));
            }
        }
        if let Some(t) = (0..self.root()).find(|&t| parent_count[t] != 1) {
            return bad(format!("node {t} has {} parents", parent_count[t]));
        }
        if let Some(e) = introduced.iter().position(|&c| c != 1) {
            return bad(format!("edge {e} introduced {} times", introduced[e]));
        }
        validate_td(g, &self.as_tree_decomposition())?;
        Ok(())
    }

    /// Forgets the node types; leaves the bags and tree shape.
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(t, n)| n.children.iter().map(move |&c| (c, t)))
            .collect();
        TreeDecomposition { bags, tree_edges: edges }
    }

    pub fn count(&self, pred: impl Fn(&NiceKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }
}

fn with(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut b = bag.to_vec();
    let pos = b.binary_search(&v).unwrap_or_else(|p| p);
    b.insert(pos, v);
    b
}

fn without(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    bag.iter().copied().filter(|&x| x != v).collect()
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NiceKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Walks from the bag of node `from` to `target` by forgetting first,
    /// then introducing, both in ascending vertex order.
    fn morph(&mut self, mut from: usize, target: &[Vertex]) -> usize {
        let current = self.nodes[from].bag.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            let bag = without(&self.nodes[from].bag, v);
            from = self.push(NiceKind::Forget(v), bag, vec![from]);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            let bag = with(&self.nodes[from].bag, v);
            from = self.push(NiceKind::IntroduceVertex(v), bag, vec![from]);
        }
        from
    }
}

/// Converts a valid tree decomposition into a nice one rooted at node 0.
///
/// Each edge is introduced at the topmost decomposition node holding both
/// endpoints, right before the first of them is forgotten. Children are
/// visited by ascending subtree minimum node id and joined left-deep.
pub fn make_nice(g: &MultiGraph, td: &TreeDecomposition) -> Result<NiceDecomposition> {
    validate_td(g, td)?;
    let mut b = Builder { nodes: Vec::new() };
    if td.is_empty() {
        b.push(NiceKind::Leaf, Vec::new(), Vec::new());
        return Ok(NiceDecomposition { nodes: b.nodes });
    }

    let k = td.len();
    let adj = td.adjacency();
    let mut parent = vec![usize::MAX; k];
    let mut depth = vec![0usize; k];
    let mut order = Vec::with_capacity(k);
    let mut stack = vec![0usize];
    let mut seen = vec![false; k];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        order.push(t);
        for &c in &adj[t] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = t;
                depth[c] = depth[t] + 1;
                stack.push(c);
            }
        }
    }

    let mut subtree_min: Vec<usize> = (0..k).collect();
    for &t in order.iter().rev() {
        if parent[t] != usize::MAX {
            let p = parent[t];
            subtree_min[p] = subtree_min[p].min(subtree_min[t]);
        }
    }
    let mut children = vec![Vec::new(); k];
    for t in 1..k {
        if parent[t] != usize::MAX {
            children[parent[t]].push(t);
        }
    }
    for list in &mut children {
        list.sort_by_key(|&c| (subtree_min[c], c));
    }

    let holders = vertex_holders(g.n(), td);
    let mut edges_at = vec![Vec::new(); k];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let top = holders[u]
            .iter()
            .copied()
            .filter(|&t| td.bags[t].binary_search(&v).is_ok())
            .min_by_key(|&t| (depth[t], t))
            .expect("validated decomposition covers every edge");
        edges_at[top].push(e);
    }

    // Post-order over the rooted tree without recursion.
    let mut built = vec![usize::MAX; k];
    let mut post = Vec::with_capacity(k);
    let mut stack = vec![(0usize, false)];
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            post.push(t);
        } else {
            stack.push((t, true));
            for &c in children[t].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    for &t in &post {
        let bag = &td.bags[t];
        let mut branches: Vec<usize> = children[t]
            .iter()
            .map(|&c| b.morph(built[c], bag))
            .collect();
        if branches.is_empty() {
            let leaf = b.push(NiceKind::Leaf, Vec::new(), Vec::new());
            branches.push(b.morph(leaf, bag));
        }
        let mut cur = branches[0];
        for &other in &branches[1..] {
            cur = b.push(NiceKind::Join, bag.clone(), vec![cur, other]);
        }
        for &e in &edges_at[t] {
            cur = b.push(NiceKind::IntroduceEdge(e), bag.clone(), vec![cur]);
        }
        built[t] = cur;
    }
    b.morph(built[0], &[]);
    Ok(NiceDecomposition { nodes: b.nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_nodes(nd: &NiceDecomposition) -> usize {
        nd.count(|k| matches!(k, NiceKind::IntroduceEdge(_)))
    }

    #[test]
    fn nice_examples() {
        let k3 = MultiGraph::complete(3);
        let nd = make_nice(&k3, &TreeDecomposition::trivial(3)).unwrap();
        nd.check(&k3).unwrap();
        assert_eq!(nd.width(), 2);
        assert_eq!(edge_nodes(&nd), 3);

        let p3 = MultiGraph::path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nd = make_nice(&p3, &td).unwrap();
        nd.check(&p3).unwrap();
        assert_eq!(nd.width(), 1);
        assert_eq!(edge_nodes(&nd), 2);

        let double = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let nd = make_nice(&double, &TreeDecomposition::trivial(2)).unwrap();
        nd.check(&double).unwrap();
        assert_eq!(edge_nodes(&nd), 2);
    }

    #[test]
    fn star_decomposition_gets_joins() {
        // Star with centre 0; one bag per leaf edge around a centre bag.
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nd = make_nice(&g, &td).unwrap();
        nd.check(&g).unwrap();
        assert_eq!(nd.count(|k| matches!(k, NiceKind::Join)), 2);
        assert_eq!(nd.width(), 1);
    }

    #[test]
    fn propagates_validation_errors() {
        let k3 = MultiGraph::complete(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(make_nice(&k3, &td).is_err());
    }
}
