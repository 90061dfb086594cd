//! Exhaustive reference evaluation.

use num_bigint::BigUint;

use crate::decomp::heuristic_layout;
use crate::error::{Error, Result};
use crate::instance::{Constraint, Instance};
use crate::profile::SizeProfile;
use crate::reduce::CnfFormula;

pub const DEFAULT_EDGE_BUDGET: usize = 25;
pub const DEFAULT_VARIABLE_BUDGET: usize = 20;

/// Per-vertex acceptance test on the local selection.
enum Check {
    /// `ok[d]` for degree `d`.
    Degree(Vec<bool>),
    /// `ok[mask]` over local coordinates; `coord[e]` maps incident edges.
    Mask(Vec<bool>),
}

struct Local {
    checks: Vec<Check>,
    /// For each edge, its endpoints and the coordinate bit at each.
    ends: Vec<[(usize, u32); 2]>,
}

fn local(inst: &Instance) -> Local {
    let g = inst.graph();
    let mut ends = vec![[(0usize, 0u32); 2]; g.m()];
    let mut filled = vec![0usize; g.m()];
    let mut checks = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        match inst.constraint(v) {
            Constraint::List(l) => {
                let mut ok = vec![false; g.degree(v) + 1];
                for (d, slot) in ok.iter_mut().enumerate() {
                    *slot = l.contains(d);
                }
                for &e in g.incident(v) {
                    ends[e][filled[e]] = (v, 1);
                    filled[e] += 1;
                }
                checks.push(Check::Degree(ok));
            }
            Constraint::Rel { relation, order } => {
                for (i, &e) in order.iter().enumerate() {
                    ends[e][filled[e]] = (v, 1 << i);
                    filled[e] += 1;
                }
                checks.push(Check::Mask(relation.table()));
            }
        }
    }
    Local { checks, ends }
}

impl Local {
    fn ok(&self, v: usize, state: u32) -> bool {
        match &self.checks[v] {
            Check::Degree(t) => t[state as usize],
            Check::Mask(t) => t[state as usize],
        }
    }
}

/// Exact profile by Gray-code enumeration of all `2^m` edge subsets.
pub fn brute_force_profile(inst: &Instance) -> Result<SizeProfile> {
    brute_force_profile_with(inst, DEFAULT_EDGE_BUDGET)
}

pub fn brute_force_profile_with(inst: &Instance, max_edges: usize) -> Result<SizeProfile> {
    let m = inst.m();
    if m > max_edges || m >= 63 {
        return Err(Error::Budget(format!(
            "brute force over {m} edges exceeds the limit of {max_edges}"
        )));
    }
    let loc = local(inst);
    let n = inst.n();
    // Degree vertices track a count, relation vertices a mask.
    let mut state = vec![0u32; n];
    let mut bad = (0..n).filter(|&v| !loc.ok(v, 0)).count();
    let mut selected = vec![false; m];
    let mut size = 0usize;
    let mut counts = vec![0u64; m + 1];
    if bad == 0 {
        counts[0] += 1;
    }
    for k in 1u64..1u64 << m {
        let e = k.trailing_zeros() as usize;
        selected[e] = !selected[e];
        let on = selected[e];
        if on {
            size += 1;
        } else {
            size -= 1;
        }
        for &(v, bit) in &loc.ends[e] {
            let before = loc.ok(v, state[v]);
            state[v] = match (&loc.checks[v], on) {
                (Check::Degree(_), true) => state[v] + 1,
                (Check::Degree(_), false) => state[v] - 1,
                (Check::Mask(_), _) => state[v] ^ bit,
            };
            let after = loc.ok(v, state[v]);
            match (before, after) {
                (true, false) => bad += 1,
                (false, true) => bad -= 1,
                _ => {}
            }
        }
        if bad == 0 {
            counts[size] += 1;
        }
    }
    Ok(SizeProfile {
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}

/// Exact profile by backtracking over the edges with partial-assignment
/// pruning at every vertex. Still exhaustive over consistent assignments,
/// so it is usable for relation-heavy instances with many edges and few
/// solutions.
pub fn backtrack_profile(inst: &Instance) -> Result<SizeProfile> {
    let g = inst.graph();
    let m = g.m();
    let loc = local(inst);
    // Edge order: by position of the later endpoint in a greedy layout, so
    // vertices close early.
    let layout = heuristic_layout(g);
    let pos = layout.positions(g.n())?;
    let mut edges: Vec<usize> = (0..m).collect();
    edges.sort_by_key(|&e| {
        let (u, v) = g.edge(e);
        (pos[u].max(pos[v]), pos[u].min(pos[v]), e)
    });
    let mut remaining: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    // Known coordinate bits for relation vertices.
    let mut known = vec![0u32; g.n()];
    let mut state = vec![0u32; g.n()];
    let mut counts = vec![BigUint::default(); m + 1];

    struct Ctx<'a> {
        inst: &'a Instance,
        loc: &'a Local,
        edges: &'a [usize],
    }

    fn feasible(ctx: &Ctx, v: usize, state: u32, known: u32, remaining: usize) -> bool {
        match ctx.inst.constraint(v) {
            Constraint::List(l) => {
                let d = state as usize;
                l.values().iter().any(|&b| b >= d && b <= d + remaining)
            }
            Constraint::Rel { relation, .. } => {
                if remaining == 0 {
                    ctx.loc.ok(v, state)
                } else {
                    relation.consistent(known, state)
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        ctx: &Ctx,
        i: usize,
        size: usize,
        state: &mut [u32],
        known: &mut [u32],
        remaining: &mut [usize],
        counts: &mut [BigUint],
    ) {
        if i == ctx.edges.len() {
            counts[size] += 1u32;
            return;
        }
        let e = ctx.edges[i];
        let ends = ctx.loc.ends[e];
        for choice in [false, true] {
            let mut ok = true;
            for &(v, bit) in &ends {
                remaining[v] -= 1;
                if matches!(ctx.loc.checks[v], Check::Mask(_)) {
                    known[v] |= bit;
                    if choice {
                        state[v] |= bit;
                    }
                } else if choice {
                    state[v] += 1;
                }
            }
            for &(v, _) in &ends {
                ok &= feasible(ctx, v, state[v], known[v], remaining[v]);
            }
            if ok {
                go(ctx, i + 1, size + choice as usize, state, known, remaining, counts);
            }
            for &(v, bit) in &ends {
                remaining[v] += 1;
                if matches!(ctx.loc.checks[v], Check::Mask(_)) {
                    known[v] &= !bit;
                    state[v] &= !bit;
                } else if choice {
                    state[v] -= 1;
                }
            }
        }
    }

    let ctx = Ctx {
        inst,
        loc: &loc,
        edges: &edges,
    };
    if (0..g.n()).all(|v| feasible(&ctx, v, 0, 0, remaining[v])) {
        go(&ctx, 0, 0, &mut state, &mut known, &mut remaining, &mut counts);
    }
    Ok(SizeProfile { counts })
}

/// Number of satisfying assignments by enumeration.
pub fn brute_force_sat(cnf: &CnfFormula) -> Result<BigUint> {
    brute_force_sat_with(cnf, DEFAULT_VARIABLE_BUDGET)
}

pub fn brute_force_sat_with(cnf: &CnfFormula, max_vars: usize) -> Result<BigUint> {
    let n = cnf.num_vars();
    if n > max_vars || n >= 63 {
        return Err(Error::Budget(format!(
            "enumeration over {n} variables exceeds the limit of {max_vars}"
        )));
    }
    let count = (0u64..1 << n).filter(|&a| cnf.satisfied_by(a)).count();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::DegreeList;
    use crate::graph::MultiGraph;
    use crate::relation::Relation;
    use proptest::prelude::*;

    fn double_factorial(k: u64) -> u64 {
        (1..=k).step_by(2).product()
    }

    #[test]
    fn profile_examples() {
        let empty = Instance::homogeneous(MultiGraph::new(3), &DegreeList::from([0, 2]));
        assert_eq!(brute_force_profile(&empty).unwrap(), SizeProfile::from_u64(&[1]));
        let edge = Instance::homogeneous(MultiGraph::path(2), &DegreeList::from([1]));
        assert_eq!(brute_force_profile(&edge).unwrap(), SizeProfile::from_u64(&[0, 1]));
        for k in 1..=3usize {
            let inst = Instance::homogeneous(MultiGraph::complete(2 * k), &DegreeList::from([1]));
            let p = brute_force_profile(&inst).unwrap();
            assert_eq!(p.counts[k], BigUint::from(double_factorial(2 * k as u64 - 1)));
            assert_eq!(p.total(), p.counts[k]);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::homogeneous(MultiGraph::complete(8), &DegreeList::from([1]));
        assert!(matches!(brute_force_profile(&inst), Err(Error::Budget(_))));
        assert!(brute_force_profile_with(&inst, 28).is_ok());
    }

    #[test]
    fn relation_vertices() {
        // centre carries EQ(3) over a star: all or nothing
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut cs = vec![Constraint::Rel {
            relation: Relation::eq(3),
            order: vec![2, 0, 1],
        }];
        cs.extend((1..4).map(|_| Constraint::List(DegreeList::from([0, 1]))));
        let inst = Instance::new(g, cs).unwrap();
        let p = brute_force_profile(&inst).unwrap();
        assert_eq!(p, SizeProfile::from_u64(&[1, 0, 0, 1]));
        assert_eq!(backtrack_profile(&inst).unwrap(), p);
    }

    #[test]
    fn sat_examples() {
        let f = |n, cls: Vec<Vec<i32>>| CnfFormula::new(n, cls).unwrap();
        assert_eq!(brute_force_sat(&f(1, vec![vec![1]])).unwrap(), BigUint::from(1u32));
        assert_eq!(brute_force_sat(&f(2, vec![vec![1, 2]])).unwrap(), BigUint::from(3u32));
        assert_eq!(
            brute_force_sat(&f(2, vec![vec![1, -2], vec![-1]])).unwrap(),
            BigUint::from(1u32)
        );
        assert!(brute_force_sat(&f(21, vec![])).is_err());
    }

    fn arb_instance(with_relations: bool) -> impl Strategy<Value = Instance> {
        (2usize..=6)
            .prop_flat_map(move |n| {
                let edges = proptest::collection::vec((0..n, 0..n), 0..=10);
                let lists = proptest::collection::vec(proptest::bits::u8::between(0, 5), n);
                let rels = proptest::collection::vec(any::<u64>(), n);
                (Just(n), edges, lists, rels)
            })
            .prop_map(move |(n, edges, lists, rels)| {
                let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(u, v)| u != v).collect();
                let g = MultiGraph::from_edges(n, &edges).unwrap();
                let cs = (0..n)
                    .map(|v| {
                        let d = g.degree(v);
                        if with_relations && rels[v] % 2 == 1 && d <= 6 {
                            let masks = (0..1u32 << d).filter(|&x| rels[v] >> (x % 63 + 1) & 1 == 1);
                            Constraint::Rel {
                                relation: Relation::new(d, masks).unwrap(),
                                order: g.incident(v).iter().rev().copied().collect(),
                            }
                        } else {
                            Constraint::List(DegreeList::new((0..5).filter(|b| lists[v] >> b & 1 == 1)))
                        }
                    })
                    .collect();
                Instance::new(g, cs).unwrap()
            })
    }

    fn literal(inst: &Instance) -> SizeProfile {
        let m = inst.m();
        let mut p = SizeProfile::zero(m);
        for x in 0u32..1 << m {
            let sel: Vec<bool> = (0..m).map(|e| x >> e & 1 == 1).collect();
            if inst.is_solution(&sel) {
                p.counts[x.count_ones() as usize] += 1u32;
            }
        }
        p
    }

    proptest! {
        #[test]
        fn gray_code_matches_definition(inst in arb_instance(true)) {
            prop_assert_eq!(brute_force_profile(&inst).unwrap(), literal(&inst));
        }

        #[test]
        fn backtracking_matches_gray_code(inst in arb_instance(true)) {
            prop_assert_eq!(backtrack_profile(&inst).unwrap(), brute_force_profile(&inst).unwrap());
        }

        #[test]
        fn relabelling_invariance(inst in arb_instance(true), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let g = inst.graph();
            let mut perm: Vec<usize> = (0..g.m()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            // new edge perm[e] is old edge e
            let mut edges = vec![(0, 0); g.m()];
            for e in 0..g.m() {
                edges[perm[e]] = g.edge(e);
            }
            let h = MultiGraph::from_edges(g.n(), &edges).unwrap();
            let cs = (0..g.n()).map(|v| match inst.constraint(v) {
                Constraint::List(l) => Constraint::List(l.clone()),
                Constraint::Rel { relation, order } => {
                    // keep coordinates on the same edges, then also permute
                    // the coordinates themselves
                    let d = order.len();
                    let rot: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
                    let mut new_order = vec![0; d];
                    for i in 0..d {
                        new_order[rot[i]] = perm[order[i]];
                    }
                    Constraint::Rel { relation: relation.permute(&rot), order: new_order }
                }
            }).collect();
            let relabelled = Instance::new(h, cs).unwrap();
            prop_assert_eq!(brute_force_profile(&relabelled).unwrap(), brute_force_profile(&inst).unwrap());
        }
    }
}
