use std::collections::{BTreeSet, HashSet};

use super::layout::LinearLayout;
use super::td::TreeDecomposition;
use crate::graph::{MultiGraph, Vertex};

fn fill_in(adj: &[HashSet<Vertex>], v: Vertex) -> usize {
    let ns: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Min-fill elimination ordering (ties: smaller degree, then smaller id).
pub fn min_fill_ordering(g: &MultiGraph) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<HashSet<Vertex>> = g
        .adjacency_sets()
        .into_iter()
        .map(|ns| ns.into_iter().collect())
        .collect();
    let mut key: Vec<(usize, usize)> = (0..n).map(|v| (fill_in(&adj, v), adj[v].len())).collect();
    let mut queue: BTreeSet<(usize, usize, Vertex)> =
        (0..n).map(|v| (key[v].0, key[v].1, v)).collect();
    let mut eliminated = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while let Some((_, _, v)) = queue.pop_first() {
        eliminated[v] = true;
        order.push(v);
        let ns: Vec<Vertex> = adj[v].iter().copied().collect();
        for &a in &ns {
            adj[a].remove(&v);
        }
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        let mut touched: HashSet<Vertex> = HashSet::new();
        for &a in &ns {
            touched.insert(a);
            touched.extend(adj[a].iter().copied());
        }
        for w in touched {
            if eliminated[w] {
                continue;
            }
            let fresh = (fill_in(&adj, w), adj[w].len());
            if fresh != key[w] {
                queue.remove(&(key[w].0, key[w].1, w));
                key[w] = fresh;
                queue.insert((fresh.0, fresh.1, w));
            }
        }
    }
    order
}

/// Tree decomposition from an elimination ordering: the bag of `v` is `v`
/// plus its neighbours at elimination time, attached to the bag of the
/// neighbour eliminated next. Bags contained in their parent are merged
/// away.
pub fn td_from_ordering(g: &MultiGraph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<HashSet<Vertex>> = g
        .adjacency_sets()
        .into_iter()
        .map(|ns| ns.into_iter().collect())
        .collect();
    let mut bags: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = adj[v].iter().copied().filter(|&w| pos[w] > i).collect();
        for (x, &a) in later.iter().enumerate() {
            for &b in &later[x + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[i] = later.iter().map(|&w| pos[w]).min();
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // Chain the roots of separate components.
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    for w in roots.windows(2) {
        parent[w[0]] = Some(w[1]);
    }

    // Merge a bag into its parent when it is a subset; parents come later in
    // the elimination order, so a single forward pass with path-compressed
    // representatives suffices.
    let mut rep: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    for i in 0..n {
        if let Some(p) = parent[i] {
            if bags[i].iter().all(|v| bags[p].binary_search(v).is_ok()) {
                alive[i] = false;
                rep[i] = p;
            }
        }
    }
    fn find(rep: &mut [usize], mut x: usize) -> usize {
        while rep[x] != x {
            rep[x] = rep[rep[x]];
            x = rep[x];
        }
        x
    }
    let mut id = vec![usize::MAX; n];
    let mut out_bags = Vec::new();
    for i in 0..n {
        if alive[i] {
            id[i] = out_bags.len();
            out_bags.push(bags[i].clone());
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        if let Some(p) = parent[i] {
            let p = find(&mut rep, p);
            edges.push((id[i], id[p]));
        }
    }
    TreeDecomposition::new(out_bags, edges)
}

/// Min-fill heuristic decomposition. Always valid, width not guaranteed.
pub fn heuristic_td(g: &MultiGraph) -> TreeDecomposition {
    td_from_ordering(g, &min_fill_ordering(g))
}

/// Greedy layout: start from a minimum-degree vertex and repeatedly append
/// the vertex that keeps the running cut smallest, preferring vertices
/// adjacent to the placed prefix.
pub fn heuristic_layout(g: &MultiGraph) -> LinearLayout {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut to_placed = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let delta = g.degree(v) as isize - 2 * to_placed[v] as isize;
                (delta, to_placed[v] == 0, g.degree(v), v)
            })
            .expect("an unplaced vertex remains");
        placed[best] = true;
        order.push(best);
        for w in g.neighbors(best) {
            to_placed[w] += 1;
        }
    }
    LinearLayout::new(order)
}
