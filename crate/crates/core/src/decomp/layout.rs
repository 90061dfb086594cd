use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

/// Linear ordering of the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearLayout {
    pub order: Vec<Vertex>,
}

impl LinearLayout {
    pub fn new(order: Vec<Vertex>) -> Self {
        LinearLayout { order }
    }

    pub fn identity(n: usize) -> Self {
        LinearLayout::new((0..n).collect())
    }

    /// `position[v]` = index of `v` in the order; errors unless the order is
    /// a permutation of `0..n`.
    pub fn positions(&self, n: usize) -> Result<Vec<usize>> {
        if self.order.len() != n {
            return Err(Error::InvalidLayout(format!(
                "layout has {} entries for {n} vertices",
                self.order.len()
            )));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidLayout(format!("vertex {v} out of range")));
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidLayout(format!("vertex {v} listed twice")));
            }
            pos[v] = i;
        }
        Ok(pos)
    }

    /// `cuts[i]` = edges with exactly one endpoint among the first `i + 1`
    /// vertices, sorted by edge id. `cuts.len() == n`.
    pub fn cuts(&self, g: &MultiGraph) -> Result<Vec<Vec<EdgeId>>> {
        let pos = self.positions(g.n())?;
        let mut opened = vec![Vec::new(); g.n()];
        let mut closed_at = vec![0usize; g.m()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
            opened[a].push(e);
            closed_at[e] = b;
        }
        let mut cuts = Vec::with_capacity(g.n());
        let mut current: Vec<EdgeId> = Vec::new();
        for (i, fresh) in opened.iter().enumerate() {
            current.retain(|&e| closed_at[e] != i);
            current.extend(fresh.iter().copied());
            current.sort_unstable();
            cuts.push(current.clone());
        }
        Ok(cuts)
    }
}

pub fn cutwidth_of_layout(g: &MultiGraph, l: &LinearLayout) -> Result<usize> {
    Ok(l.cuts(g)?.iter().map(Vec::len).max().unwrap_or(0))
}
