//! Decision gadgets for lists with `0 ∉ B` and a gap of at least two.

use std::collections::HashMap;

use super::net::{resolve, Net, Node};
use super::{Gadget, GadgetKind};
use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};
use crate::relation::Relation;

/// Largest arity accepted by [`realize_even_relation`].
pub const RELATION_MAX_ARITY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Node(Node),
    Pair(usize, usize),
}

/// Builds gadgets for one list `B`, caching every sub-gadget.
#[derive(Debug, Clone)]
pub struct Realizer {
    b: DegreeList,
    a: usize,
    d: usize,
    parity: Parity,
    cache: HashMap<Key, Gadget>,
}

impl Realizer {
    pub fn new(b: &DegreeList) -> Result<Self> {
        if b.contains(0) {
            return Err(Error::Precondition(format!("list {b} contains 0")));
        }
        let (a, d) = b
            .gap_witness()
            .filter(|&(_, d)| d > 1)
            .ok_or_else(|| Error::Precondition(format!("list {b} has no gap of size two or more")))?;
        let parity = match (b.has_even(), b.has_odd()) {
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        };
        Ok(Realizer {
            b: b.clone(),
            a,
            d,
            parity,
            cache: HashMap::new(),
        })
    }

    pub fn list(&self) -> &DegreeList {
        &self.b
    }

    fn max(&self) -> usize {
        DegreeList::max(&self.b).expect("non-empty")
    }

    pub fn hw22(&mut self) -> Result<Gadget> {
        self.node(Node::Hw22)
    }

    /// `EQ(k)`: all or none of the `k` dangling edges.
    pub fn eq(&mut self, k: usize) -> Result<Gadget> {
        if k == 0 {
            return Err(Error::Precondition("EQ needs at least one edge".into()));
        }
        self.node(Node::Eq(k))
    }

    /// Exactly one of `k` dangling edges. Even-only lists can only realize
    /// these in pairs: pass `paired = Some(l)` to get a gadget whose first
    /// `k` danglings carry one exactly-one constraint and whose last `l`
    /// carry another.
    pub fn hw_eq1(&mut self, k: usize, paired: Option<usize>) -> Result<Gadget> {
        if k == 0 || paired == Some(0) {
            return Err(Error::Precondition("exactly-one needs at least one edge".into()));
        }
        match (self.parity, paired) {
            (Parity::Even, None) => {
                return Err(Error::ParityObstruction(format!(
                    "even-only list {} realizes exactly-one nodes only in pairs",
                    self.b
                )))
            }
            (Parity::Odd | Parity::Mixed, Some(_)) => {
                return Err(Error::Precondition(format!(
                    "list {} realizes exactly-one nodes alone; drop the pairing",
                    self.b
                )))
            }
            _ => {}
        }
        let mut net = Net::default();
        for arity in std::iter::once(k).chain(paired) {
            let n = net.node(Node::Hw1(arity));
            net.dangle_rest(n);
        }
        self.flatten(&net)
    }

    /// Gadget whose solvable dangling patterns are exactly `r`.
    pub fn even_relation(&mut self, r: &Relation) -> Result<Gadget> {
        let e = r.arity();
        if e > RELATION_MAX_ARITY {
            return Err(Error::Precondition(format!(
                "relation arity {e} exceeds {RELATION_MAX_ARITY}"
            )));
        }
        if !r.is_even() {
            return Err(Error::Precondition("relation has an odd-weight tuple".into()));
        }
        if r.is_empty() {
            // one vertex per dangling edge plus a vertex that cannot be satisfied
            return Ok(Gadget {
                graph: MultiGraph::new(e + 1),
                list: self.b.clone(),
                portals: (0..e).collect(),
                kind: GadgetKind::Decision,
            });
        }
        let tuples = r.accepted();
        let mut net = Net::default();
        let outs: Vec<usize> = (0..e)
            .map(|k| {
                let zeros = tuples.iter().filter(|&&x| x >> k & 1 == 0).count();
                net.node(Node::Hw1(1 + zeros))
            })
            .collect();
        for &o in &outs {
            let s = net.slot(o);
            net.dangle(s);
        }
        let p = if e % 2 == 1 { 1 } else { 2 };
        let anchors: Vec<usize> = (0..p).map(|_| net.node(Node::Hw1(tuples.len()))).collect();
        for &x in tuples {
            let zeros: Vec<usize> = (0..e).filter(|&k| x >> k & 1 == 0).collect();
            let v = net.node(Node::Eq(zeros.len() + p));
            for k in zeros {
                let (a, b) = (net.slot(v), net.slot(outs[k]));
                net.link(a, b);
            }
            for &j in &anchors {
                let (a, b) = (net.slot(v), net.slot(j));
                net.link(a, b);
            }
        }
        self.flatten(&net)
    }

    fn node(&mut self, kind: Node) -> Result<Gadget> {
        if let Some(g) = self.cache.get(&Key::Node(kind)) {
            return Ok(g.clone());
        }
        let g = match kind {
            Node::Hw22 => self.build_hw22(),
            Node::Eq(k) => {
                let net = self.eq_net(k)?;
                self.flatten(&net)?
            }
            Node::Hw1(k) => {
                let net = self.hw1_net(k)?;
                self.flatten(&net)?
            }
        };
        self.cache.insert(Key::Node(kind), g.clone());
        Ok(g)
    }

    fn pair(&mut self, k: usize, l: usize) -> Result<Gadget> {
        if let Some(g) = self.cache.get(&Key::Pair(k, l)) {
            return Ok(g.clone());
        }
        let mut net = Net::default();
        let (u, v) = (net.vertex(), net.vertex());
        net.common_hw22(u, v, self.max() - 1);
        for _ in 0..k {
            net.dangle(u);
        }
        for _ in 0..l {
            net.dangle(v);
        }
        let g = self.flatten(&net)?;
        self.cache.insert(Key::Pair(k, l), g.clone());
        Ok(g)
    }

    /// Complete graph on `min B + 1` vertices with one edge split into two
    /// dangling edges.
    fn build_hw22(&self) -> Gadget {
        let k = self.b.min().expect("non-empty") + 1;
        let mut graph = MultiGraph::new(k);
        for i in 0..k {
            for j in i + 1..k {
                if (i, j) != (0, 1) {
                    graph.add_edge(i, j).expect("in range");
                }
            }
        }
        Gadget {
            graph,
            list: self.b.clone(),
            portals: vec![0, 1],
            kind: GadgetKind::Decision,
        }
    }

    fn eq_net(&self, k: usize) -> Result<Net> {
        let d = self.d;
        let mut net = Net::default();
        if k == d + 1 {
            let (u, v) = (net.vertex(), net.vertex());
            net.common_hw22(u, v, self.a);
            for _ in 0..k {
                net.dangle(u);
            }
            return Ok(net);
        }
        if k == 2 {
            // clique of EQ(d+1) nodes with one edge split
            let hubs: Vec<usize> = (0..d + 2).map(|_| net.node(Node::Eq(d + 1))).collect();
            for &h in &hubs[..2] {
                let s = net.slot(h);
                net.dangle(s);
            }
            for i in 0..hubs.len() {
                for j in i + 1..hubs.len() {
                    if (i, j) != (0, 1) {
                        let (a, b) = (net.slot(hubs[i]), net.slot(hubs[j]));
                        net.link(a, b);
                    }
                }
            }
            return Ok(net);
        }
        match self.parity {
            Parity::Even | Parity::Odd => {
                if k % 2 == 1 {
                    return Err(Error::ParityObstruction(format!(
                        "single-parity list {} cannot realize EQ({k})",
                        self.b
                    )));
                }
                if k == 4 {
                    let hub = net.node(Node::Eq(d + 1));
                    for _ in 0..(d + 1 - 4) / 2 {
                        let e = net.node(Node::Eq(2));
                        for _ in 0..2 {
                            let (a, b) = (net.slot(hub), net.slot(e));
                            net.link(a, b);
                        }
                    }
                    net.dangle_rest(hub);
                } else {
                    chain(&mut net, 4, (k - 2) / 2);
                }
            }
            Parity::Mixed => match k {
                1 => {
                    let (b, c) = self
                        .b
                        .values()
                        .windows(2)
                        .map(|w| (w[0], w[1]))
                        .find(|(b, c)| (c - b) % 2 == 1)
                        .expect("mixed parity");
                    let (u, v) = (net.vertex(), net.vertex());
                    net.common_hw22(u, v, b);
                    for _ in 0..(c - b - 1) / 2 {
                        let e = net.node(Node::Eq(2));
                        for _ in 0..2 {
                            let s = net.slot(e);
                            net.link(s, u);
                        }
                    }
                    net.dangle(u);
                }
                3 => {
                    let hub = net.node(Node::Eq(d + 1));
                    for _ in 0..d - 2 {
                        let e = net.node(Node::Eq(1));
                        let (a, b) = (net.slot(hub), net.slot(e));
                        net.link(a, b);
                    }
                    net.dangle_rest(hub);
                }
                _ => chain(&mut net, 3, k - 2),
            },
        }
        Ok(net)
    }

    /// Single exactly-one node of arity 1..=3 (odd or mixed lists).
    fn hw1_net(&self, k: usize) -> Result<Net> {
        if !(1..=3).contains(&k) {
            return Err(Error::Internal(format!("base exactly-one node of arity {k}")));
        }
        let mut net = Net::default();
        match self.parity {
            Parity::Even => {
                return Err(Error::Internal("unpaired exactly-one node for an even-only list".into()))
            }
            Parity::Odd => {
                let u = net.vertex();
                net.force(u, self.max() - 1);
                for _ in 0..k {
                    net.dangle(u);
                }
            }
            Parity::Mixed if k == 1 => {
                let o = *self.b.values().iter().find(|b| *b % 2 == 1).expect("odd member");
                let w = net.vertex();
                net.force(w, o - 1);
                let h = net.node(Node::Hw22);
                let (s0, s1) = (net.slot(h), net.slot(h));
                net.link(s0, w);
                net.dangle(s1);
            }
            Parity::Mixed => {
                // copies of each input: u sees at least one, v at most one
                let (u, v) = (net.vertex(), net.vertex());
                for _ in 0..k {
                    let e = net.node(Node::Eq(3));
                    let s = net.slot(e);
                    net.dangle(s);
                    let s = net.slot(e);
                    net.link(s, u);
                    let s = net.slot(e);
                    net.link(s, v);
                }
                net.force(u, self.a + self.d);
                net.force(v, self.max() - 1);
            }
        }
        Ok(net)
    }

    fn flatten(&mut self, net: &Net) -> Result<Gadget> {
        debug_assert!(net.check_complete());
        let net = net.expand_hw1();
        let mut graph = MultiGraph::new(net.vertices);
        let mut slot_vertex: Vec<Vec<Vertex>> = vec![Vec::new(); net.nodes.len()];
        let append = |graph: &mut MultiGraph, g: &Gadget| -> Vec<Vertex> {
            let off = graph.append(&g.graph);
            g.portals.iter().map(|&p| p + off).collect()
        };
        let hw1: Vec<usize> = (0..net.nodes.len())
            .filter(|&i| matches!(net.nodes[i], Node::Hw1(_)))
            .collect();
        if self.parity == Parity::Even {
            if hw1.len() % 2 == 1 {
                return Err(Error::ParityObstruction(format!(
                    "odd number of exactly-one nodes for even-only list {}",
                    self.b
                )));
            }
            for pair in hw1.chunks(2) {
                let (k, l) = (net.nodes[pair[0]].arity(), net.nodes[pair[1]].arity());
                let g = self.pair(k, l)?;
                let ports = append(&mut graph, &g);
                slot_vertex[pair[0]] = ports[..k].to_vec();
                slot_vertex[pair[1]] = ports[k..].to_vec();
            }
        }
        for (i, &kind) in net.nodes.iter().enumerate() {
            if self.parity == Parity::Even && matches!(kind, Node::Hw1(_)) {
                continue;
            }
            let g = self.node(kind)?;
            slot_vertex[i] = append(&mut graph, &g);
        }
        for &(a, b) in &net.links {
            graph.add_edge(resolve(a, 0, &slot_vertex), resolve(b, 0, &slot_vertex))?;
        }
        Ok(Gadget {
            graph,
            list: self.b.clone(),
            portals: net.outer.iter().map(|&e| resolve(e, 0, &slot_vertex)).collect(),
            kind: GadgetKind::Decision,
        })
    }
}

/// Path of `count` EQ(`unit`) nodes joined by single edges.
fn chain(net: &mut Net, unit: usize, count: usize) {
    let nodes: Vec<usize> = (0..count).map(|_| net.node(Node::Eq(unit))).collect();
    for w in nodes.windows(2) {
        let (a, b) = (net.slot(w[0]), net.slot(w[1]));
        net.link(a, b);
    }
    for &n in &nodes {
        net.dangle_rest(n);
    }
}

/// HW(2)=2 with both dangling edges forced.
pub fn realize_hw22(b: &DegreeList) -> Result<Gadget> {
    Realizer::new(b)?.hw22()
}

pub fn realize_eq(b: &DegreeList, k: usize) -> Result<Gadget> {
    Realizer::new(b)?.eq(k)
}

pub fn realize_hw_eq1(b: &DegreeList, k: usize, paired: Option<usize>) -> Result<Gadget> {
    Realizer::new(b)?.hw_eq1(k, paired)
}

pub fn realize_even_relation(b: &DegreeList, r: &Relation) -> Result<Gadget> {
    Realizer::new(b)?.even_relation(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::verify_realization;

    fn l(v: &[usize]) -> DegreeList {
        DegreeList::from(v)
    }

    fn pair_relation(k: usize, l: usize) -> Relation {
        let mut masks = Vec::new();
        for i in 0..k {
            for j in 0..l {
                masks.push(1u32 << i | 1 << (k + j));
            }
        }
        Relation::new(k + l, masks).unwrap()
    }

    #[test]
    fn hw22_shapes() {
        let g = realize_hw22(&l(&[1, 4])).unwrap();
        assert_eq!((g.graph.n(), g.graph.m()), (2, 0));
        let g = realize_hw22(&l(&[3, 7])).unwrap();
        assert_eq!((g.graph.n(), g.graph.m()), (4, 5));
        assert!(verify_realization(&g, &Relation::hw_eq(2, 2)).unwrap().pass);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(Realizer::new(&l(&[0, 3])), Err(Error::Precondition(_))));
        assert!(matches!(Realizer::new(&l(&[1, 2, 3])), Err(Error::Precondition(_))));
        assert!(matches!(realize_eq(&l(&[3, 7]), 3), Err(Error::ParityObstruction(_))));
        assert!(matches!(realize_hw_eq1(&l(&[2, 6]), 1, None), Err(Error::ParityObstruction(_))));
        assert!(matches!(realize_hw_eq1(&l(&[1, 4]), 1, Some(1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn eq_gadgets_verify() {
        for (b, ks) in [
            (l(&[1, 4]), vec![1, 2, 3, 4, 5]),
            (l(&[3, 7]), vec![2, 4, 6]),
            (l(&[2, 6]), vec![2, 4, 6]),
        ] {
            for k in ks {
                let g = realize_eq(&b, k).unwrap();
                assert!(g.is_simple(), "B={b} k={k}");
                let rep = verify_realization(&g, &Relation::eq(k)).unwrap();
                assert!(rep.pass, "B={b} k={k}: {rep:?}");
            }
        }
    }

    #[test]
    fn hw1_gadgets_verify() {
        for b in [l(&[1, 4]), l(&[3, 7]), l(&[1, 2, 5])] {
            for k in 1..=6 {
                let g = realize_hw_eq1(&b, k, None).unwrap();
                assert!(g.is_simple(), "B={b} k={k}");
                let rep = verify_realization(&g, &Relation::hw_eq(k, 1)).unwrap();
                assert!(rep.pass, "B={b} k={k}: {rep:?}");
            }
        }
        let b = l(&[2, 6]);
        for (k, m) in [(1, 1), (2, 3), (4, 1)] {
            let g = realize_hw_eq1(&b, k, Some(m)).unwrap();
            assert!(g.is_simple());
            let rep = verify_realization(&g, &pair_relation(k, m)).unwrap();
            assert!(rep.pass, "k={k} l={m}: {rep:?}");
        }
    }

    #[test]
    fn even_relation_verifies() {
        let r = Relation::new(3, [0b000, 0b011, 0b101]).unwrap();
        for b in [l(&[1, 4]), l(&[2, 6]), l(&[3, 7])] {
            let g = realize_even_relation(&b, &r).unwrap();
            assert!(g.is_simple());
            assert!(g.distinct_portals());
            let rep = verify_realization(&g, &r).unwrap();
            assert!(rep.pass, "B={b}: {rep:?}");
        }
        let empty = Relation::new(2, []).unwrap();
        let g = realize_even_relation(&l(&[1, 4]), &empty).unwrap();
        assert!(verify_realization(&g, &empty).unwrap().pass);
        let odd = Relation::new(1, [1]).unwrap();
        assert!(realize_even_relation(&l(&[1, 4]), &odd).is_err());
    }
}
