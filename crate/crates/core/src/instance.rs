use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::relation::Relation;

/// Per-vertex constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// Degree must lie in the list.
    List(DegreeList),
    /// The selected incident edges, read through `order` (coordinate `i` is
    /// edge `order[i]`), must form an accepted mask.
    Rel { relation: Relation, order: Vec<EdgeId> },
}

impl Constraint {
    pub fn as_list(&self) -> Option<&DegreeList> {
        match self {
            Constraint::List(l) => Some(l),
            Constraint::Rel { .. } => None,
        }
    }
}

/// A General Factor instance, optionally with relation vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: MultiGraph,
    constraints: Vec<Constraint>,
}

impl Instance {
    pub fn new(graph: MultiGraph, constraints: Vec<Constraint>) -> Result<Self> {
        if constraints.len() != graph.n() {
            return Err(Error::InvalidInstance(format!(
                "{} constraints for {} vertices",
                constraints.len(),
                graph.n()
            )));
        }
        for (v, c) in constraints.iter().enumerate() {
            if let Constraint::Rel { relation, order } = c {
                if relation.arity() != graph.degree(v) || order.len() != graph.degree(v) {
                    return Err(Error::InvalidInstance(format!(
                        "vertex {v}: relation arity {} / order length {} but degree {}",
                        relation.arity(),
                        order.len(),
                        graph.degree(v)
                    )));
                }
                let mut a = order.clone();
                a.sort_unstable();
                let mut b = graph.incident(v).to_vec();
                b.sort_unstable();
                if a != b {
                    return Err(Error::InvalidInstance(format!(
                        "vertex {v}: coordinate order is not its incident edge set"
                    )));
                }
            }
        }
        Ok(Instance { graph, constraints })
    }

    /// Every vertex gets its own list.
    pub fn with_lists(graph: MultiGraph, lists: Vec<DegreeList>) -> Result<Self> {
        Instance::new(graph, lists.into_iter().map(Constraint::List).collect())
    }

    /// `B`-homogeneous instance.
    pub fn homogeneous(graph: MultiGraph, b: &DegreeList) -> Self {
        let lists = vec![Constraint::List(b.clone()); graph.n()];
        Instance::new(graph, lists).expect("list constraints are always consistent")
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, v: Vertex) -> &Constraint {
        &self.constraints[v]
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn is_all_lists(&self) -> bool {
        self.constraints.iter().all(|c| matches!(c, Constraint::List(_)))
    }

    /// Lists of all vertices, or an error naming the first relation vertex.
    pub fn lists(&self) -> Result<Vec<&DegreeList>> {
        self.constraints
            .iter()
            .enumerate()
            .map(|(v, c)| {
                c.as_list().ok_or_else(|| {
                    Error::Precondition(format!("vertex {v} carries a relation, lists required"))
                })
            })
            .collect()
    }

    /// Largest list maximum (`M`); 0 for lists that are all empty.
    pub fn max_degree_bound(&self) -> Result<usize> {
        Ok(self.lists()?.iter().filter_map(|l| DegreeList::max(l)).max().unwrap_or(0))
    }

    /// Whether `selected` (indexed by edge id) satisfies every constraint.
    pub fn is_solution(&self, selected: &[bool]) -> bool {
        (0..self.n()).all(|v| match &self.constraints[v] {
            Constraint::List(l) => {
                l.contains(self.graph.incident(v).iter().filter(|&&e| selected[e]).count())
            }
            Constraint::Rel { relation, order } => {
                let mask = order
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| selected[e])
                    .fold(0u32, |acc, (i, _)| acc | 1 << i);
                relation.contains(mask)
            }
        })
    }
}
