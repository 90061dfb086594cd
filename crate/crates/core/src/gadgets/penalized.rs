//! Penalized gadgets for the maximization version: solutions that respect
//! the relation reach size `alpha`, all others lose at least `beta`.

use super::girth::{high_girth_regular, GirthOptions};
use super::{Gadget, GadgetKind};
use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::graph::MultiGraph;

fn witness(b: &DegreeList) -> Result<(usize, usize)> {
    b.gap_witness()
        .filter(|&(_, d)| d > 1)
        .ok_or_else(|| Error::Precondition(format!("list {b} has no gap of size two or more")))
}

/// HW(2)=2 with penalty `beta`: an `(a+d+1)`-regular graph of girth at
/// least `beta` with one edge split into the two dangling edges.
pub fn realize_hw22_penalized(b: &DegreeList, beta: usize, opts: &GirthOptions) -> Result<Gadget> {
    let (a, d) = witness(b)?;
    let gg = high_girth_regular(a + d + 1, beta.max(3), opts)?;
    let (u, v) = gg.graph.edge(0);
    let mut graph = MultiGraph::new(gg.graph.n());
    for &(x, y) in &gg.graph.edges()[1..] {
        graph.add_edge(x, y)?;
    }
    let alpha = graph.m() + 2;
    Ok(Gadget {
        graph,
        list: b.clone(),
        portals: vec![u, v],
        kind: GadgetKind::Penalized {
            alpha,
            beta,
            internal: false,
        },
    })
}

/// EQ(d+1) with penalty `beta`, measured without the dangling edges:
/// vertices `u`, `v` sharing `a` HW(2)=2 gadgets of penalty `beta + 2`,
/// and `d + 1` dangling edges at `u`.
pub fn realize_eq_penalized_internal(b: &DegreeList, beta: usize, opts: &GirthOptions) -> Result<Gadget> {
    let (a, d) = witness(b)?;
    if a == 0 {
        return Err(Error::Precondition(format!(
            "list {b}: the gap starts at 0, so the gadget would have target size 0"
        )));
    }
    let hw = realize_hw22_penalized(b, beta + 2, opts)?;
    let GadgetKind::Penalized { alpha: hw_alpha, .. } = hw.kind else {
        unreachable!("penalized by construction")
    };
    let mut graph = MultiGraph::new(2);
    for _ in 0..a {
        let off = graph.append(&hw.graph);
        graph.add_edge(hw.portals[0] + off, 0)?;
        graph.add_edge(hw.portals[1] + off, 1)?;
    }
    Ok(Gadget {
        graph,
        list: b.clone(),
        portals: vec![0; d + 1],
        kind: GadgetKind::Penalized {
            alpha: a * hw_alpha,
            beta,
            internal: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::verify_penalized;
    use crate::relation::Relation;

    #[test]
    fn hw22_penalized_small() {
        let o = GirthOptions::default();
        for (b, beta) in [(DegreeList::from([0, 3]), 3), (DegreeList::from([0, 3]), 4), (DegreeList::from([0, 1, 4]), 3)] {
            let g = realize_hw22_penalized(&b, beta, &o).unwrap();
            assert!(g.is_simple());
            let rep = verify_penalized(&g, &Relation::hw_eq(2, 2)).unwrap();
            assert!(rep.pass, "B={b} beta={beta}: {rep:?}");
        }
    }

    #[test]
    fn eq_penalized_internal() {
        let o = GirthOptions::default();
        let b = DegreeList::from([0, 1, 4]);
        let g = realize_eq_penalized_internal(&b, 1, &o).unwrap();
        assert_eq!(g.arity(), 3);
        let rep = verify_penalized(&g, &Relation::eq(3)).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(realize_eq_penalized_internal(&DegreeList::from([0, 3]), 1, &o).is_err());
    }
}
