//! Replacing relation vertices by gadgets for a fixed list.

use std::collections::HashMap;

use super::bfr::{check_bfr, BfrInstance};
use crate::decomp::{heuristic_layout, LinearLayout};
use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::gadgets::{insert_gadgets, Gadget, Realizer};
use crate::graph::Vertex;
use crate::instance::{Constraint, Instance};
use crate::relation::Relation;

/// Homogeneous instance plus the host layout with every gadget spliced in
/// at the position of the vertex it replaced.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorInstance {
    pub instance: Instance,
    pub layout: LinearLayout,
}

/// Replaces every relation vertex by a decision gadget over `b`. The result
/// is solvable exactly when `bfr` is; solution counts are not preserved.
pub fn bfr_to_bfactor(bfr: &BfrInstance, b: &DegreeList) -> Result<FactorInstance> {
    let mut realizer = Realizer::new(b)?;
    let inst = &bfr.instance;
    check_bfr(inst)?;
    let mut cache: HashMap<Relation, (Gadget, Vec<Vertex>)> = HashMap::new();
    let mut targets: Vec<(Vertex, Relation)> = Vec::new();
    for v in 0..inst.n() {
        match inst.constraint(v) {
            Constraint::Rel { relation, .. } => {
                if !cache.contains_key(relation) {
                    let gadget = realizer.even_relation(relation)?;
                    let inner = heuristic_layout(&gadget.graph).order;
                    cache.insert(relation.clone(), (gadget, inner));
                }
                targets.push((v, relation.clone()));
            }
            Constraint::List(l) if l != b => {
                return Err(Error::Precondition(format!("vertex {v} has list {l}, expected {b}")));
            }
            Constraint::List(_) => {}
        }
    }
    let replacements: Vec<(Vertex, &Gadget)> = targets.iter().map(|(v, r)| (*v, &cache[r].0)).collect();
    let ins = insert_gadgets(inst, &replacements)?;
    let mut slot = vec![None; inst.n()];
    for (idx, (v, _)) in targets.iter().enumerate() {
        slot[*v] = Some(idx);
    }
    let mut order = Vec::with_capacity(ins.instance.n());
    for &v in &bfr.layout.order {
        match (ins.host_map[v], slot[v]) {
            (Some(x), _) => order.push(x),
            (None, Some(idx)) => {
                let inner = &cache[&targets[idx].1].1;
                order.extend(inner.iter().map(|&u| ins.gadget_vertices[idx][u]));
            }
            (None, None) => return Err(Error::Internal(format!("vertex {v} lost during insertion"))),
        }
    }
    Ok(FactorInstance {
        instance: ins.instance,
        layout: LinearLayout::new(order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{cutwidth_of_layout, heuristic_td, make_nice};
    use crate::reduce::{cnf_to_bfr, CnfFormula};
    use crate::solver_tw::decide_tw;

    fn decide(cnf: &CnfFormula, b: &DegreeList) -> bool {
        let out = bfr_to_bfactor(&cnf_to_bfr(cnf).unwrap(), b).unwrap();
        assert!(out.instance.is_all_lists());
        assert!(out.instance.graph().is_simple());
        cutwidth_of_layout(out.instance.graph(), &out.layout).unwrap();
        let nd = make_nice(out.instance.graph(), &heuristic_td(out.instance.graph())).unwrap();
        decide_tw(&out.instance, &nd).unwrap()
    }

    #[test]
    fn tiny_formulas() {
        let b = DegreeList::from([1, 4]);
        assert!(decide(&CnfFormula::new(1, vec![vec![1]]).unwrap(), &b));
        assert!(!decide(&CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap(), &b));
    }

    #[test]
    fn rejects_lists_with_zero() {
        let bfr = cnf_to_bfr(&CnfFormula::new(1, vec![vec![1]]).unwrap()).unwrap();
        assert!(matches!(bfr_to_bfactor(&bfr, &DegreeList::from([0, 3])), Err(Error::Precondition(_))));
    }
}
