//! Instance families shared by the benchmarks.

use genfac::decomp::{LinearLayout, TreeDecomposition};
use genfac::{DegreeList, Instance, MultiGraph};

/// Core of `w - 1` vertices joined to two paths of `leaves` vertices, every
/// path vertex adjacent to the whole core. The returned decomposition has
/// width `w` and a single join over the core.
pub fn two_branch_fan(w: usize, leaves: usize) -> (Instance, TreeDecomposition) {
    assert!(w >= 2, "width below 2");
    let core: Vec<usize> = (0..w - 1).collect();
    let mut g = MultiGraph::new(w - 1);
    let mut bags = vec![core.clone()];
    let mut tree_edges = Vec::new();
    for _ in 0..2 {
        let mut parent = 0;
        let mut prev: Option<usize> = None;
        for _ in 0..leaves {
            let x = g.add_vertex();
            for &v in &core {
                g.add_edge(x, v).expect("fresh vertex");
            }
            let mut bag = core.clone();
            if let Some(p) = prev {
                g.add_edge(p, x).expect("fresh vertex");
                bag.push(p);
            }
            bag.push(x);
            bags.push(bag);
            tree_edges.push((parent, bags.len() - 1));
            parent = bags.len() - 1;
            prev = Some(x);
        }
    }
    let inst = Instance::homogeneous(g, &DegreeList::from([0, 1, 2]));
    (inst, TreeDecomposition::new(bags, tree_edges))
}

/// `rows x cols` grid with list `b` everywhere, laid out column by column;
/// the cutwidth is `rows + 1` for `rows >= 2`.
pub fn grid(rows: usize, cols: usize, b: &DegreeList) -> (Instance, LinearLayout) {
    let mut g = MultiGraph::new(rows * cols);
    let at = |r: usize, c: usize| c * rows + r;
    for c in 0..cols {
        for r in 0..rows {
            if r + 1 < rows {
                g.add_edge(at(r, c), at(r + 1, c)).expect("in range");
            }
            if c + 1 < cols {
                g.add_edge(at(r, c), at(r, c + 1)).expect("in range");
            }
        }
    }
    (Instance::homogeneous(g, b), LinearLayout::identity(rows * cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use genfac::decomp::{cutwidth_of_layout, validate_td};

    #[test]
    fn families_have_the_stated_widths() {
        for w in 2..=6 {
            let (inst, td) = two_branch_fan(w, 5);
            assert_eq!(validate_td(inst.graph(), &td).unwrap(), w);
        }
        for rows in 2..=4 {
            let (inst, layout) = grid(rows, 5, &DegreeList::from([1]));
            assert_eq!(cutwidth_of_layout(inst.graph(), &layout).unwrap(), rows + 1);
        }
    }
}
