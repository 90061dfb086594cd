//! Realization gadgets: homogeneous graphs with dangling edges whose
//! solvable dangling patterns (or maximum solution sizes) encode a relation.

mod decision;
mod girth;
mod net;
mod penalized;
mod verify;

pub use decision::{realize_eq, realize_even_relation, realize_hw22, realize_hw_eq1, Realizer};
pub use girth::{high_girth_regular, GirthGraph, GirthOptions};
pub use penalized::{realize_eq_penalized_internal, realize_hw22_penalized};
pub use verify::{
    verify_penalized, verify_realization, verify_realization_with, PenalizedReport, RealizationReport,
    VerifyOptions,
};

use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::instance::{Constraint, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    Decision,
    /// `alpha` is the target size; `internal` excludes dangling edges from
    /// the solution size.
    Penalized { alpha: usize, beta: usize, internal: bool },
}

/// A `B`-homogeneous graph plus dangling edges `d_1..d_k`; dangling `i`
/// hangs at vertex `portals[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub graph: MultiGraph,
    pub list: DegreeList,
    pub portals: Vec<Vertex>,
    pub kind: GadgetKind,
}

impl Gadget {
    pub fn arity(&self) -> usize {
        self.portals.len()
    }

    /// Portal sequence as runs of `(vertex, multiplicity)`.
    pub fn portal_groups(&self) -> Vec<(Vertex, usize)> {
        let mut out: Vec<(Vertex, usize)> = Vec::new();
        for &p in &self.portals {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn distinct_portals(&self) -> bool {
        let mut p = self.portals.clone();
        p.sort_unstable();
        p.windows(2).all(|w| w[0] != w[1])
    }

    /// Simple once the dangling edges are attached to distinct outside
    /// vertices: the internal graph must be simple.
    pub fn is_simple(&self) -> bool {
        self.graph.is_simple()
    }

    /// Number of selected danglings at every vertex under `pattern`.
    pub fn pinned(&self, pattern: u32) -> Vec<usize> {
        let mut c = vec![0; self.graph.n()];
        for (i, &p) in self.portals.iter().enumerate() {
            if pattern >> i & 1 == 1 {
                c[p] += 1;
            }
        }
        c
    }

    /// Internal instance in which the danglings of `pattern` are selected
    /// and the others are not: each portal's list is shifted down.
    pub fn pinned_instance(&self, pattern: u32) -> Instance {
        let lists = self
            .pinned(pattern)
            .into_iter()
            .map(|j| self.list.shift_down(j))
            .collect();
        Instance::with_lists(self.graph.clone(), lists).expect("lists only")
    }
}

/// Host edges at `v` in the order that is matched against the portals:
/// the relation's coordinate order for relation vertices, otherwise
/// ascending edge index.
pub fn host_edge_order(host: &Instance, v: Vertex) -> Vec<EdgeId> {
    match host.constraint(v) {
        Constraint::Rel { order, .. } => order.clone(),
        Constraint::List(_) => host.graph().incident(v).to_vec(),
    }
}

/// Result of replacing several vertices by gadgets at once.
#[derive(Debug, Clone)]
pub struct Insertion {
    pub instance: Instance,
    /// New id of every kept host vertex (`None` for replaced ones).
    pub host_map: Vec<Option<Vertex>>,
    /// For every replaced vertex (in argument order), the new ids of the
    /// gadget's vertices.
    pub gadget_vertices: Vec<Vec<Vertex>>,
}

/// Replaces each listed vertex by its gadget. Host edges keep their
/// indices (rewired to portals); gadget edges are appended.
pub fn insert_gadgets(host: &Instance, replacements: &[(Vertex, &Gadget)]) -> Result<Insertion> {
    let g = host.graph();
    let mut replaced = vec![None; g.n()];
    for (idx, &(v, gadget)) in replacements.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::Precondition(format!("vertex {v} is not in the host")));
        }
        if replaced[v].is_some() {
            return Err(Error::Precondition(format!("vertex {v} replaced twice")));
        }
        if g.degree(v) != gadget.arity() {
            return Err(Error::Precondition(format!(
                "vertex {v} has degree {} but the gadget has {} dangling edges",
                g.degree(v),
                gadget.arity()
            )));
        }
        replaced[v] = Some(idx);
    }
    let mut host_map = vec![None; g.n()];
    let mut next = 0;
    for v in 0..g.n() {
        if replaced[v].is_none() {
            host_map[v] = Some(next);
            next += 1;
        }
    }
    let mut gadget_vertices = Vec::with_capacity(replacements.len());
    for &(_, gadget) in replacements {
        gadget_vertices.push((next..next + gadget.graph.n()).collect::<Vec<_>>());
        next += gadget.graph.n();
    }
    // endpoint of host edge e at replaced vertex v
    let mut portal_of: Vec<[Option<Vertex>; 2]> = vec![[None, None]; g.m()];
    for (idx, &(v, gadget)) in replacements.iter().enumerate() {
        for (i, &e) in host_edge_order(host, v).iter().enumerate() {
            let (a, _) = g.edge(e);
            let side = if a == v { 0 } else { 1 };
            portal_of[e][side] = Some(gadget_vertices[idx][gadget.portals[i]]);
        }
    }
    let mut out = MultiGraph::new(next);
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let x = portal_of[e][0].or(host_map[a]).expect("mapped endpoint");
        let y = portal_of[e][1].or(host_map[b]).expect("mapped endpoint");
        out.add_edge(x, y)?;
    }
    let mut constraints: Vec<Constraint> = Vec::with_capacity(next);
    for v in 0..g.n() {
        if host_map[v].is_some() {
            constraints.push(host.constraint(v).clone());
        }
    }
    for (idx, &(_, gadget)) in replacements.iter().enumerate() {
        let base = gadget_vertices[idx][0..].first().copied().unwrap_or(next);
        for &(a, b) in gadget.graph.edges() {
            out.add_edge(base + a, base + b)?;
        }
        constraints.extend((0..gadget.graph.n()).map(|_| Constraint::List(gadget.list.clone())));
    }
    Ok(Insertion {
        instance: Instance::new(out, constraints)?,
        host_map,
        gadget_vertices,
    })
}

/// Inserts `gadget` at `v`; see [`insert_gadgets`].
pub fn insert_gadget(host: &Instance, v: Vertex, gadget: &Gadget) -> Result<Instance> {
    insert_gadgets(host, &[(v, gadget)]).map(|ins| ins.instance)
}
