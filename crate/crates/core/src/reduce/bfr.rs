//! Grid instances with relation vertices built from a CNF formula.

use super::cnf::CnfFormula;
use crate::decomp::LinearLayout;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::instance::{Constraint, Instance};
use crate::relation::Relation;

/// Slack over the number of variables in the cutwidth of the bundled
/// layout, measured on the grid construction below.
pub const C_IMPL: usize = 8;

/// Instance whose relation vertices all accept tuples of one even positive
/// weight, bundled with a linear layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BfrInstance {
    pub instance: Instance,
    pub layout: LinearLayout,
}

/// Every relation vertex has arity equal to its degree and accepts only
/// tuples of one even weight `c > 0`.
pub fn check_bfr(inst: &Instance) -> Result<()> {
    for v in 0..inst.n() {
        if let Constraint::Rel { relation, .. } = inst.constraint(v) {
            if relation.arity() != inst.graph().degree(v) {
                return Err(Error::InvalidInstance(format!("vertex {v}: arity differs from degree")));
            }
            match relation.constant_weight() {
                Some(c) if c > 0 && c % 2 == 0 => {}
                _ => {
                    return Err(Error::InvalidInstance(format!(
                        "vertex {v}: accepted weights {:?} are not one even positive value",
                        relation.weights()
                    )))
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Absent,
    Pos,
    Neg,
    Both,
}

fn sign(clause: &[i32], var: usize) -> Sign {
    let pos = clause.contains(&(var as i32 + 1));
    let neg = clause.contains(&-(var as i32 + 1));
    match (pos, neg) {
        (false, false) => Sign::Absent,
        (true, false) => Sign::Pos,
        (false, true) => Sign::Neg,
        (true, true) => Sign::Both,
    }
}

/// Mask set over `(left, right, top, ntop, bottom, nbottom)`: row edges
/// agree, negated edges complement their positive twins, and the bottom
/// edge is selected exactly when the top edge is or the literal holds.
pub fn cell_relation(s_pos: bool, s_neg: bool) -> Relation {
    let mut masks = Vec::new();
    for l in 0..2u32 {
        for t in 0..2u32 {
            let lit = (s_pos && l == 1) || (s_neg && l == 0);
            let b = t | lit as u32;
            masks.push(l | l << 1 | t << 2 | (1 - t) << 3 | b << 4 | (1 - b) << 5);
        }
    }
    Relation::new(6, masks).expect("arity 6")
}

#[derive(Default, Clone)]
struct Slots {
    left: Option<EdgeId>,
    right: Option<EdgeId>,
    top: Option<EdgeId>,
    ntop: Option<EdgeId>,
    bottom: Option<EdgeId>,
    nbottom: Option<EdgeId>,
    up: Option<EdgeId>,
    down: Option<EdgeId>,
    extra: Option<EdgeId>,
}

impl Slots {
    fn order(&self) -> Vec<EdgeId> {
        [
            self.left,
            self.right,
            self.top,
            self.ntop,
            self.bottom,
            self.nbottom,
            self.up,
            self.down,
            self.extra,
        ]
        .into_iter()
        .flatten()
        .collect()
    }
}

/// Grid of relation vertices whose solutions correspond one-to-one to the
/// satisfying assignments of `cnf`, padded to constant even weights.
///
/// Row `i` carries variable `i`: its horizontal edges are all selected
/// when the variable is true. Column `j` carries clause `j`: the vertical
/// edges record whether a literal above already satisfied it. Coordinates
/// at grid vertices follow left, right, top, negated top, bottom, negated
/// bottom, then the vertical edges of the two boundary columns, then pads.
pub fn cnf_to_bfr(cnf: &CnfFormula) -> Result<BfrInstance> {
    let n = cnf.num_vars();
    if n == 0 {
        return Err(Error::Precondition("formula without variables".into()));
    }
    let m = cnf.clauses().len();
    let cols = m + 2;
    let mut g = MultiGraph::new(n * cols + m);
    let row = |i: usize, j: usize| -> Vertex { i * cols + j };
    let head = |j: usize| -> Vertex { n * cols + j - 1 };
    let mut slots = vec![Slots::default(); g.n()];
    // head vertex slots: pos top, neg top, pos bottom, neg bottom
    let mut heads = vec![[0; 4]; m + 1];

    for i in 0..n {
        for j in 0..=m {
            let e = g.add_edge(row(i, j), row(i, j + 1))?;
            slots[row(i, j)].right = Some(e);
            slots[row(i, j + 1)].left = Some(e);
        }
    }
    for j in 1..=m {
        let e = g.add_edge(head(j), row(0, j))?;
        slots[row(0, j)].top = Some(e);
        heads[j][0] = e;
        let e = g.add_edge(head(j), row(0, j))?;
        slots[row(0, j)].ntop = Some(e);
        heads[j][1] = e;
        for i in 0..n - 1 {
            let e = g.add_edge(row(i, j), row(i + 1, j))?;
            slots[row(i, j)].bottom = Some(e);
            slots[row(i + 1, j)].top = Some(e);
            let e = g.add_edge(row(i, j), row(i + 1, j))?;
            slots[row(i, j)].nbottom = Some(e);
            slots[row(i + 1, j)].ntop = Some(e);
        }
        let e = g.add_edge(row(n - 1, j), head(j))?;
        slots[row(n - 1, j)].bottom = Some(e);
        heads[j][2] = e;
        let e = g.add_edge(row(n - 1, j), head(j))?;
        slots[row(n - 1, j)].nbottom = Some(e);
        heads[j][3] = e;
    }
    // boundary columns joined into one path through an extra bottom edge
    for j in [0, m + 1] {
        for i in 0..n - 1 {
            let e = g.add_edge(row(i, j), row(i + 1, j))?;
            slots[row(i, j)].down = Some(e);
            slots[row(i + 1, j)].up = Some(e);
        }
    }
    let e = g.add_edge(row(n - 1, 0), row(n - 1, m + 1))?;
    slots[row(n - 1, 0)].extra = Some(e);
    slots[row(n - 1, m + 1)].extra = Some(e);

    let mut constraints = Vec::with_capacity(g.n());
    for i in 0..n {
        for j in 0..cols {
            let order = slots[row(i, j)].order();
            let relation = if j == 0 || j == m + 1 {
                Relation::symmetric(order.len(), &[0, 2])?
            } else {
                let s = sign(&cnf.clauses()[j - 1], i);
                cell_relation(matches!(s, Sign::Pos | Sign::Both), matches!(s, Sign::Neg | Sign::Both))
            };
            constraints.push(Constraint::Rel { relation, order });
        }
    }
    for h in heads.iter().skip(1) {
        constraints.push(Constraint::Rel {
            relation: Relation::new(4, [0b0110])?,
            order: h.to_vec(),
        });
    }
    let mut order = Vec::with_capacity(g.n());
    for j in 0..cols {
        if (1..=m).contains(&j) {
            order.push(head(j));
        }
        order.extend((0..n).map(|i| row(i, j)));
    }
    let raw = BfrInstance {
        instance: Instance::new(g, constraints)?,
        layout: LinearLayout::new(order),
    };
    let out = normalize_parity(&raw)?;
    check_bfr(&out.instance)?;
    Ok(out)
}

/// Brings every relation with accepted weights `{w, w+2}` to constant
/// weight `w + 2`: two pad coordinates, selected exactly on the light
/// tuples, lead to two fresh vertices `A`, `B` joined by a double edge.
/// `A` and `B` accept `(pad, e1, e2)` in `{110, 011}` (pad first), which
/// forces both pads equal and leaves one completion either way.
pub fn normalize_parity(bfr: &BfrInstance) -> Result<BfrInstance> {
    let inst = &bfr.instance;
    let mut g = inst.graph().clone();
    let mut constraints: Vec<Constraint> = inst.constraints().to_vec();
    let mut after: Vec<Vec<Vertex>> = vec![Vec::new(); inst.n()];
    let pad_rel = Relation::new(3, [0b011, 0b110])?;
    for v in 0..inst.n() {
        let Constraint::Rel { relation, order } = inst.constraint(v) else {
            continue;
        };
        let w = relation.weights();
        let light = match w.as_slice() {
            [] | [_] => continue,
            [a, b] if b - a == 2 => *a,
            _ => {
                return Err(Error::Precondition(format!(
                    "vertex {v}: accepted weights {w:?} are not of the form {{w, w+2}}"
                )))
            }
        };
        let k = relation.arity();
        let masks = relation.accepted().iter().map(|&x| {
            if x.count_ones() as usize == light {
                x | 0b11 << k
            } else {
                x
            }
        });
        let padded = Relation::new(k + 2, masks)?;
        let a = g.add_vertex();
        let b = g.add_vertex();
        let d1 = g.add_edge(v, a)?;
        let d2 = g.add_edge(v, b)?;
        let e1 = g.add_edge(a, b)?;
        let e2 = g.add_edge(a, b)?;
        let mut new_order = order.clone();
        new_order.extend([d1, d2]);
        constraints[v] = Constraint::Rel {
            relation: padded,
            order: new_order,
        };
        constraints.push(Constraint::Rel {
            relation: pad_rel.clone(),
            order: vec![d1, e1, e2],
        });
        constraints.push(Constraint::Rel {
            relation: pad_rel.clone(),
            order: vec![d2, e1, e2],
        });
        after[v] = vec![a, b];
    }
    let mut order = Vec::with_capacity(g.n());
    for &v in &bfr.layout.order {
        order.push(v);
        order.extend(after[v].iter().copied());
    }
    Ok(BfrInstance {
        instance: Instance::new(g, constraints)?,
        layout: LinearLayout::new(order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::cutwidth_of_layout;
    use crate::oracle::{backtrack_profile, brute_force_profile, brute_force_sat};
    use num_bigint::BigUint;

    fn count(cnf: &CnfFormula) -> BigUint {
        let bfr = cnf_to_bfr(cnf).unwrap();
        backtrack_profile(&bfr.instance).unwrap().total()
    }

    #[test]
    fn cell_relation_conditions() {
        for (pos, neg) in [(false, false), (true, false), (false, true)] {
            let r = cell_relation(pos, neg);
            assert_eq!(r.len(), 4);
            for &x in r.accepted() {
                let bit = |i: u32| x >> i & 1;
                assert_eq!(bit(0), bit(1));
                assert_eq!(bit(2) ^ bit(3), 1);
                assert_eq!(bit(4) ^ bit(5), 1);
                if bit(2) == 1 {
                    assert_eq!(bit(4), 1);
                }
                let lit = (pos && bit(0) == 1) || (neg && bit(0) == 0);
                assert_eq!(bit(4) == 1, bit(2) == 1 || lit);
            }
            assert_eq!(r.weights(), vec![2, 4]);
        }
    }

    #[test]
    fn small_counts() {
        let one = CnfFormula::new(1, vec![vec![1]]).unwrap();
        assert_eq!(count(&one), 1u32.into());
        let f = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        assert_eq!(count(&f), 3u32.into());
        let empty = CnfFormula::new(2, vec![]).unwrap();
        assert_eq!(count(&empty), 4u32.into());
        let contra = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(count(&contra), 0u32.into());
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, -2]]).unwrap();
        assert_eq!(count(&f), brute_force_sat(&f).unwrap());
        assert!(cnf_to_bfr(&CnfFormula::new(0, vec![]).unwrap()).is_err());
    }

    #[test]
    fn layout_within_bound() {
        for n in 1..=4 {
            let clauses = (0..3)
                .map(|j| vec![(j % n + 1) as i32, -(((j + 1) % n + 1) as i32)])
                .collect();
            let bfr = cnf_to_bfr(&CnfFormula::new(n, clauses).unwrap()).unwrap();
            check_bfr(&bfr.instance).unwrap();
            let cw = cutwidth_of_layout(bfr.instance.graph(), &bfr.layout).unwrap();
            assert!(cw <= n + C_IMPL, "n={n}: cutwidth {cw}");
        }
    }

    #[test]
    fn padding_preserves_counts() {
        // two {0,2} vertices on a triangle with a pendant list vertex
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let hw = Relation::symmetric(2, &[0, 2]).unwrap();
        let cs = vec![
            Constraint::Rel { relation: hw.clone(), order: vec![0, 2] },
            Constraint::Rel { relation: hw, order: vec![0, 1] },
            Constraint::List(crate::DegreeList::from([0, 1, 2])),
        ];
        let bfr = BfrInstance {
            instance: Instance::new(g, cs).unwrap(),
            layout: LinearLayout::identity(3),
        };
        let padded = normalize_parity(&bfr).unwrap();
        check_bfr(&padded.instance).unwrap();
        assert_eq!(padded.instance.n(), 7);
        assert_eq!(
            brute_force_profile(&bfr.instance).unwrap().total(),
            brute_force_profile(&padded.instance).unwrap().total()
        );
        let constant = normalize_parity(&padded).unwrap();
        assert_eq!(constant.instance, padded.instance);
        let bad = Relation::symmetric(3, &[0, 3]).unwrap();
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let cs = vec![
            Constraint::Rel { relation: bad.clone(), order: vec![0, 1, 2] },
            Constraint::Rel { relation: bad, order: vec![0, 1, 2] },
        ];
        let bfr = BfrInstance {
            instance: Instance::new(g, cs).unwrap(),
            layout: LinearLayout::identity(2),
        };
        assert!(normalize_parity(&bfr).is_err());
    }
}
