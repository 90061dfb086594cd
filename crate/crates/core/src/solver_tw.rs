//! Dynamic programming over nice tree decompositions.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;

use crate::decomp::{NiceDecomposition, NiceKind};
use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::instance::Instance;
use crate::ntt::{self, PrimeBasis};
use crate::profile::SizeProfile;
use crate::weight::{Poly, SizeRange, Weight};

/// Default cap on dense fast-join cells.
pub const DEFAULT_MEM_BUDGET: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinMode {
    Naive,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwOptions {
    pub join: JoinMode,
    /// Upper bound on `(M+1)^|bag| * (|bag| M + 1) * (m + 1)` for fast joins.
    pub mem_budget: u64,
}

impl Default for TwOptions {
    fn default() -> Self {
        TwOptions {
            join: JoinMode::Fast,
            mem_budget: DEFAULT_MEM_BUDGET,
        }
    }
}

/// Counters collected during one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TwStats {
    /// Largest number of stored `f` entries in any table.
    pub peak_entries: usize,
    pub joins: usize,
    pub join_ms: f64,
}

/// Table of one decomposition node: for every degree vector `f` over the bag
/// (entries in `0..=max_degree`), a weight. Vectors are packed into a
/// mixed-radix key whose digit `i` belongs to `bag[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<W> {
    bag: Vec<Vertex>,
    base: u64,
    powers: Vec<u64>,
    entries: HashMap<u64, W>,
}

/// Counting table: the weight of `f` is its polynomial in the solution size.
pub type DpTable = Table<Poly>;

fn powers(base: u64, len: usize) -> Result<Vec<u64>> {
    let mut p = Vec::with_capacity(len + 1);
    let mut x = 1u64;
    p.push(x);
    for _ in 0..len {
        x = x.checked_mul(base).ok_or_else(|| {
            Error::Budget(format!("{base}^{len} degree vectors do not fit a 64-bit key"))
        })?;
        p.push(x);
    }
    Ok(p)
}

impl<W: Weight> Table<W> {
    pub fn new(bag: Vec<Vertex>, max_degree: usize) -> Result<Self> {
        let base = max_degree as u64 + 1;
        let powers = powers(base, bag.len())?;
        Ok(Table {
            bag,
            base,
            powers,
            entries: HashMap::new(),
        })
    }

    pub fn bag(&self) -> &[Vertex] {
        &self.bag
    }

    pub fn max_degree(&self) -> usize {
        self.base as usize - 1
    }

    /// Number of stored degree vectors.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn encode(&self, f: &[usize]) -> u64 {
        f.iter().zip(&self.powers).map(|(&d, &p)| d as u64 * p).sum()
    }

    fn decode(&self, key: u64) -> Vec<usize> {
        (0..self.bag.len()).map(|i| self.digit(key, i)).collect()
    }

    #[inline]
    fn digit(&self, key: u64, i: usize) -> usize {
        (key / self.powers[i] % self.base) as usize
    }

    fn check_vector(&self, f: &[usize]) -> Result<()> {
        if f.len() != self.bag.len() || f.iter().any(|&d| d as u64 >= self.base) {
            return Err(Error::Precondition(format!(
                "degree vector {f:?} does not fit bag of size {} with maximum {}",
                self.bag.len(),
                self.max_degree()
            )));
        }
        Ok(())
    }

    pub fn weight(&self, f: &[usize]) -> Option<&W> {
        if self.check_vector(f).is_err() {
            return None;
        }
        self.entries.get(&self.encode(f))
    }

    pub fn insert(&mut self, f: &[usize], w: W) -> Result<()> {
        self.check_vector(f)?;
        let key = self.encode(f);
        if w.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, w);
        }
        Ok(())
    }

    /// Entries as `(f, weight)` pairs in key order.
    pub fn iter(&self) -> Vec<(Vec<usize>, &W)> {
        let mut keys: Vec<&u64> = self.entries.keys().collect();
        keys.sort_unstable();
        keys.into_iter().map(|k| (self.decode(*k), &self.entries[k])).collect()
    }

    fn add(&mut self, key: u64, w: W) {
        match self.entries.get_mut(&key) {
            Some(x) => x.add_assign(&w),
            None => {
                if !w.is_zero() {
                    self.entries.insert(key, w);
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.bag != other.bag || self.base != other.base {
            return Err(Error::Precondition(format!(
                "join of tables over different bags {:?} / {:?}",
                self.bag, other.bag
            )));
        }
        Ok(())
    }
}

impl DpTable {
    pub fn count(&self, f: &[usize], s: usize) -> BigUint {
        self.weight(f).map(|p| p.coeff(s)).unwrap_or_default()
    }

    pub fn set_count(&mut self, f: &[usize], s: usize, value: BigUint) -> Result<()> {
        let mut p = self.weight(f).cloned().unwrap_or_default();
        p.set(s, value);
        self.insert(f, p)
    }
}

/// Join by summing over all splits `f1 + f2 = f` (no wrap-around, entries
/// above the maximum dropped) and `s1 + s2 = s`.
pub fn join_naive<W: Weight>(a: &Table<W>, b: &Table<W>) -> Result<Table<W>> {
    a.check_compatible(b)?;
    let mut out = Table {
        bag: a.bag.clone(),
        base: a.base,
        powers: a.powers.clone(),
        entries: HashMap::new(),
    };
    let r = a.bag.len();
    let bd: Vec<(Vec<usize>, u64, &W)> = b
        .entries
        .iter()
        .map(|(&k, w)| (b.decode(k), k, w))
        .collect();
    for (&ka, wa) in &a.entries {
        let fa = a.decode(ka);
        for (fb, kb, wb) in &bd {
            if (0..r).all(|i| fa[i] + fb[i] < a.base as usize) {
                out.add(ka + kb, wa.mul(wb));
            }
        }
    }
    Ok(out)
}

/// Join through a partially cyclic convolution over every basis prime and
/// CRT reconstruction. Degree vectors are convolved modulo `M + 1`; an
/// extra coordinate carries `|f|_1` so wrapped sums can be discarded on
/// readout. `m` bounds the instance size so counts stay below `2^m`.
pub fn join_fast(a: &DpTable, b: &DpTable, basis: &PrimeBasis, m: usize) -> Result<DpTable> {
    a.check_compatible(b)?;
    if basis.product().bits() <= m as u64 {
        return Err(Error::Precondition(format!(
            "prime basis product has {} bits, counts need more than {m}",
            basis.product().bits()
        )));
    }
    let mut out = Table {
        bag: a.bag.clone(),
        base: a.base,
        powers: a.powers.clone(),
        entries: HashMap::new(),
    };
    if a.is_empty() || b.is_empty() {
        return Ok(out);
    }
    let r = a.bag.len();
    let c = a.base as usize;
    let len_of = |t: &DpTable| t.entries.values().map(Poly::len).max().unwrap_or(1);
    let (la, lb) = (len_of(a), len_of(b));
    let qs = la + lb - 1;
    let pf = norm_axis_len(c, r);
    let ps = qs.next_power_of_two();
    let mut dims = vec![c; r];
    dims.extend([pf, ps]);
    if r > 0 && basis.cyclic_len != c {
        return Err(Error::Precondition(format!(
            "basis has no root of unity of order {c}"
        )));
    }
    ntt::check_shape(basis, &dims, r)?;
    let cells = a.powers[r] as usize;
    let total = cells * pf * ps;
    let norm = |key: u64| -> usize { (0..r).map(|i| a.digit(key, i)).sum() };

    // coefficient bound from the inputs, capped by the 2^m bound
    let bits_of = |t: &DpTable| {
        let top = t.entries.values().flat_map(|p| p.0.iter()).map(|v| v.bits()).max().unwrap_or(0);
        top + (t.len() as u64 + 1).ilog2() as u64 + 1
    };
    let bound = (bits_of(a) + bits_of(b) + (la.min(lb) as u64).ilog2() as u64 + 1).min(m as u64 + 1);
    let used = &basis.primes[..basis.primes_for_bits(bound)];
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(used.len());
    for bp in used {
        let fld = bp.field;
        let lift = |t: &DpTable| {
            let mut arr = vec![0u64; total];
            for (&k, p) in &t.entries {
                let base = (k as usize * pf + norm(k) % pf) * ps;
                for (s, v) in p.0.iter().enumerate() {
                    arr[base + s] = fld.reduce(v);
                }
            }
            arr
        };
        let mut x = lift(a);
        let mut y = lift(b);
        ntt::forward(bp, basis, &mut x, &dims, r);
        ntt::forward(bp, basis, &mut y, &dims, r);
        ntt::pointwise_mul(bp, &mut x, &y);
        residues.push(ntt::inverse_picked(bp, basis, &mut x, &dims, r, |cell| norm(cell as u64) % pf));
    }
    let mut buf = vec![0u64; used.len()];
    for key in 0..cells as u64 {
        let base = key as usize * ps;
        let mut poly = Poly::default();
        for s in 0..qs {
            for (i, res) in residues.iter().enumerate() {
                buf[i] = res[base + s];
            }
            if buf.iter().all(|&x| x == 0) {
                continue;
            }
            poly.set(s, basis.reconstruct(&buf));
        }
        if !poly.is_zero() {
            out.entries.insert(key, poly);
        }
    }
    Ok(out)
}

/// Dense cell count the fast join needs for bags of `bag` vertices.
pub fn fast_join_cells(max_degree: usize, bag: usize, m: usize) -> u128 {
    (max_degree as u128 + 1).saturating_pow(bag as u32)
        .saturating_mul(bag as u128 * max_degree as u128 + 1)
        .saturating_mul(m as u128 + 1)
}

/// Length of the cyclic axis carrying the digit sum of a key in the fast
/// join. A digit sum that wrapped in `w <= bag` places is off by `base * w`,
/// which is never a multiple of this length.
fn norm_axis_len(base: usize, bag: usize) -> usize {
    if bag == 0 || base <= 1 {
        1
    } else {
        1 << (base.trailing_zeros() + bag.ilog2() + 1)
    }
}

/// Prime basis adequate for every join of a run.
pub fn basis_for(max_degree: usize, max_bag: usize, m: usize) -> Result<PrimeBasis> {
    let longest = norm_axis_len(max_degree + 1, max_bag).max((2 * m + 1).next_power_of_two());
    PrimeBasis::new(max_degree + 1, longest.trailing_zeros(), m + 1)
}

struct Prepared<'a> {
    lists: Vec<&'a DegreeList>,
    caps: Vec<usize>,
    max_degree: usize,
}

fn prepare<'a>(inst: &'a Instance, nd: &NiceDecomposition) -> Result<Option<Prepared<'a>>> {
    let lists = inst.lists()?;
    nd.check(inst.graph())?;
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(None);
    }
    let caps: Vec<usize> = lists.iter().map(|l| DegreeList::max(l).unwrap_or(0)).collect();
    let max_degree = caps.iter().copied().max().unwrap_or(0);
    powers(max_degree as u64 + 1, nd.max_bag_size())?;
    Ok(Some(Prepared {
        lists,
        caps,
        max_degree,
    }))
}

fn run<W: Weight>(
    inst: &Instance,
    nd: &NiceDecomposition,
    prep: &Prepared,
    stats: &mut TwStats,
    join: &mut dyn FnMut(&Table<W>, &Table<W>) -> Result<Table<W>>,
) -> Result<Option<W>> {
    let g = inst.graph();
    let mut tables: Vec<Option<Table<W>>> = Vec::with_capacity(nd.nodes.len());
    for (t, node) in nd.nodes.iter().enumerate() {
        let mut take = |i: usize| {
            tables[node.children[i]]
                .take()
                .ok_or_else(|| Error::Internal(format!("table of child of node {t} missing")))
        };
        let table = match node.kind {
            NiceKind::Leaf => {
                let mut tb = Table::new(Vec::new(), prep.max_degree)?;
                tb.entries.insert(0, W::one());
                tb
            }
            NiceKind::IntroduceVertex(v) => {
                let child = take(0)?;
                let pos = node.bag.binary_search(&v).expect("checked decomposition");
                let mut tb = Table::new(node.bag.clone(), prep.max_degree)?;
                let p = child.powers[pos];
                tb.entries = child
                    .entries
                    .into_iter()
                    .map(|(k, w)| (k % p + k / p * p * tb.base, w))
                    .collect();
                tb
            }
            NiceKind::IntroduceEdge(e) => {
                let mut tb = take(0)?;
                let (u, v) = g.edge(e);
                let pu = tb.bag.binary_search(&u).expect("checked decomposition");
                let pv = tb.bag.binary_search(&v).expect("checked decomposition");
                let delta = tb.powers[pu] + tb.powers[pv];
                let grow: Vec<(u64, W)> = tb
                    .entries
                    .iter()
                    .filter(|(&k, _)| tb.digit(k, pu) < prep.caps[u] && tb.digit(k, pv) < prep.caps[v])
                    .map(|(&k, w)| (k + delta, w.shift()))
                    .collect();
                for (k, w) in grow {
                    tb.add(k, w);
                }
                tb
            }
            NiceKind::Forget(v) => {
                let child = take(0)?;
                let pos = child.bag.binary_search(&v).expect("checked decomposition");
                let mut tb = Table::new(node.bag.clone(), prep.max_degree)?;
                let (lo, hi) = (child.powers[pos], child.powers[pos + 1]);
                let list = prep.lists[v];
                let base = child.base;
                for (k, w) in child.entries {
                    if list.contains((k / lo % base) as usize) {
                        tb.add(k % lo + k / hi * lo, w);
                    }
                }
                tb
            }
            NiceKind::Join => {
                let a = take(0)?;
                let b = take(1)?;
                let start = Instant::now();
                let tb = join(&a, &b)?;
                stats.joins += 1;
                stats.join_ms += start.elapsed().as_secs_f64() * 1e3;
                tb
            }
        };
        stats.peak_entries = stats.peak_entries.max(table.len());
        tables.push(Some(table));
    }
    let root = tables
        .pop()
        .flatten()
        .ok_or_else(|| Error::Internal("no root table".into()))?;
    if !root.bag.is_empty() || root.entries.keys().any(|&k| k != 0) {
        return Err(Error::Internal("root table is not over the empty bag".into()));
    }
    Ok(root.entries.get(&0).cloned())
}

/// Size profile by dynamic programming over `nd`.
pub fn count_tw(inst: &Instance, nd: &NiceDecomposition, join: JoinMode) -> Result<SizeProfile> {
    let opts = TwOptions {
        join,
        ..TwOptions::default()
    };
    count_tw_with(inst, nd, &opts).map(|(p, _)| p)
}

pub fn count_tw_with(
    inst: &Instance,
    nd: &NiceDecomposition,
    opts: &TwOptions,
) -> Result<(SizeProfile, TwStats)> {
    let m = inst.m();
    let mut stats = TwStats::default();
    let Some(prep) = prepare(inst, nd)? else {
        return Ok((SizeProfile::zero(m), stats));
    };
    let root = match opts.join {
        JoinMode::Naive => run(inst, nd, &prep, &mut stats, &mut |a, b| join_naive(a, b))?,
        JoinMode::Fast => {
            let bag = nd.max_bag_size();
            let cells = fast_join_cells(prep.max_degree, bag, m);
            if cells > opts.mem_budget as u128 {
                return Err(Error::Budget(format!(
                    "fast join needs (M+1)^bag*(bag*M+1)*(m+1) = {cells} cells with M={}, bag={bag}, m={m}; budget is {}",
                    prep.max_degree, opts.mem_budget
                )));
            }
            let has_join = nd.count(|k| matches!(k, NiceKind::Join)) > 0;
            let basis = if has_join {
                Some(basis_for(prep.max_degree, bag, m)?)
            } else {
                None
            };
            run(inst, nd, &prep, &mut stats, &mut |a, b| {
                join_fast(a, b, basis.as_ref().expect("basis exists when joins do"), m)
            })?
        }
    };
    let counts = root.map(|p| p.0).unwrap_or_default();
    if counts.len() > m + 1 {
        return Err(Error::Internal("solution larger than the edge set".into()));
    }
    let profile = SizeProfile::with_len(counts, m);
    Ok((profile, stats))
}

/// Whether any solution exists.
pub fn decide_tw(inst: &Instance, nd: &NiceDecomposition) -> Result<bool> {
    let Some(prep) = prepare(inst, nd)? else {
        return Ok(false);
    };
    let mut stats = TwStats::default();
    Ok(run::<bool>(inst, nd, &prep, &mut stats, &mut |a, b| join_naive(a, b))?.unwrap_or(false))
}

/// Smallest and largest solution size, `None` when unsolvable.
pub fn size_range_tw(inst: &Instance, nd: &NiceDecomposition) -> Result<Option<(usize, usize)>> {
    let Some(prep) = prepare(inst, nd)? else {
        return Ok(None);
    };
    let mut stats = TwStats::default();
    let root = run::<SizeRange>(inst, nd, &prep, &mut stats, &mut |a, b| join_naive(a, b))?;
    Ok(root.and_then(|r| r.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{heuristic_td, make_nice, TreeDecomposition};
    use crate::graph::MultiGraph;
    use num_traits::One;
    use proptest::prelude::*;

    fn homog(g: MultiGraph, b: &[usize]) -> Instance {
        Instance::homogeneous(g, &DegreeList::new(b.iter().copied()))
    }

    fn both(inst: &Instance) -> SizeProfile {
        let nd = make_nice(inst.graph(), &heuristic_td(inst.graph())).unwrap();
        let a = count_tw(inst, &nd, JoinMode::Naive).unwrap();
        let b = count_tw(inst, &nd, JoinMode::Fast).unwrap();
        assert_eq!(a, b);
        a
    }

    #[test]
    fn count_examples() {
        let k3 = homog(MultiGraph::complete(3), &[2]);
        assert_eq!(both(&k3), SizeProfile::from_u64(&[0, 0, 0, 1]));
        let k4 = homog(MultiGraph::complete(4), &[1]);
        assert_eq!(both(&k4), SizeProfile::from_u64(&[0, 0, 3, 0, 0, 0, 0]));
        let c4 = homog(MultiGraph::cycle(4), &[0, 2]);
        assert_eq!(both(&c4), SizeProfile::from_u64(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn star_decomposition_exercises_joins() {
        // K_{1,3} plus a parallel edge, decomposed around the centre.
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nd = make_nice(&g, &td).unwrap();
        let inst = Instance::with_lists(
            g,
            vec![
                DegreeList::from([0, 2]),
                DegreeList::from([0, 1]),
                DegreeList::from([0, 1]),
                DegreeList::from([0, 1, 2]),
            ],
        )
        .unwrap();
        let naive = count_tw(&inst, &nd, JoinMode::Naive).unwrap();
        let fast = count_tw(&inst, &nd, JoinMode::Fast).unwrap();
        assert_eq!(naive, fast);
        // the empty set and any two of the four centre edges
        assert_eq!(naive, SizeProfile::from_u64(&[1, 0, 6, 0, 0]));
    }

    #[test]
    fn empty_list_gives_zero_profile() {
        let g = MultiGraph::path(3);
        let inst = Instance::with_lists(
            g.clone(),
            vec![DegreeList::from([1]), DegreeList::empty(), DegreeList::from([1])],
        )
        .unwrap();
        let nd = make_nice(&g, &heuristic_td(&g)).unwrap();
        assert_eq!(count_tw(&inst, &nd, JoinMode::Fast).unwrap(), SizeProfile::zero(2));
        assert!(!decide_tw(&inst, &nd).unwrap());
    }

    #[test]
    fn memory_guard_names_the_bound() {
        let inst = homog(MultiGraph::complete(6), &[0, 5]);
        let nd = make_nice(inst.graph(), &heuristic_td(inst.graph())).unwrap();
        let opts = TwOptions {
            join: JoinMode::Fast,
            mem_budget: 10,
        };
        let err = count_tw_with(&inst, &nd, &opts).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
        assert!(err.to_string().contains("(M+1)^bag"));
    }

    #[test]
    fn relation_vertices_are_rejected() {
        let g = MultiGraph::path(2);
        let inst = Instance::new(
            g.clone(),
            vec![
                crate::instance::Constraint::Rel {
                    relation: crate::relation::Relation::eq(1),
                    order: vec![0],
                },
                crate::instance::Constraint::List(DegreeList::from([1])),
            ],
        )
        .unwrap();
        let nd = make_nice(&g, &heuristic_td(&g)).unwrap();
        assert!(matches!(count_tw(&inst, &nd, JoinMode::Naive), Err(Error::Precondition(_))));
    }

    #[test]
    fn join_identity_and_zero() {
        let mut delta = DpTable::new(vec![3, 5], 2).unwrap();
        delta.set_count(&[0, 0], 0, BigUint::one()).unwrap();
        let mut b = DpTable::new(vec![3, 5], 2).unwrap();
        b.set_count(&[1, 2], 3, BigUint::from(7u32)).unwrap();
        b.set_count(&[2, 0], 1, BigUint::from(2u32)).unwrap();
        assert_eq!(join_naive(&delta, &b).unwrap(), b);
        let basis = basis_for(2, 2, 6).unwrap();
        assert_eq!(join_fast(&delta, &b, &basis, 6).unwrap(), b);
        let zero = DpTable::new(vec![3, 5], 2).unwrap();
        assert!(join_naive(&b, &zero).unwrap().is_empty());
        assert!(join_fast(&b, &zero, &basis, 6).unwrap().is_empty());
    }

    #[test]
    fn wrapped_sum_is_discarded() {
        // f = (M) joined with itself wraps to 2M mod (M+1) = M-1 cyclically
        let mut a = DpTable::new(vec![0], 2).unwrap();
        a.set_count(&[2], 1, BigUint::one()).unwrap();
        let basis = basis_for(2, 1, 4).unwrap();
        let fast = join_fast(&a, &a, &basis, 4).unwrap();
        assert_eq!(fast, join_naive(&a, &a).unwrap());
        assert!(fast.is_empty());
    }

    #[test]
    fn huge_counts_and_many_wraps() {
        let big = BigUint::one() << 150u32;
        for (md, bag) in [(1, 7), (2, 5), (3, 3)] {
            let mut a = DpTable::new((0..bag).collect(), md).unwrap();
            for key in 0..(md + 1).pow(bag as u32) {
                let f: Vec<usize> = (0..bag).map(|i| key / (md + 1).pow(i as u32) % (md + 1)).collect();
                a.set_count(&f, key % 3, &big + key).unwrap();
                a.set_count(&f, 2, BigUint::from(key + 1)).unwrap();
            }
            let basis = basis_for(md, bag, 400).unwrap();
            assert_eq!(join_fast(&a, &a, &basis, 400).unwrap(), join_naive(&a, &a).unwrap());
        }
    }

    #[test]
    fn join_rejects_mismatch_and_small_basis() {
        let a = DpTable::new(vec![0, 1], 2).unwrap();
        let b = DpTable::new(vec![0, 2], 2).unwrap();
        assert!(join_naive(&a, &b).is_err());
        let basis = basis_for(2, 2, 4).unwrap();
        assert!(join_fast(&a, &a, &basis, 10_000).is_err());
    }

    fn arb_table(bag: usize, max_degree: usize, m: usize) -> impl Strategy<Value = DpTable> {
        let cells = (max_degree + 1).pow(bag as u32);
        proptest::collection::vec(proptest::collection::vec(0u64..1 << 40, m + 1), cells)
            .prop_map(move |vals| {
                let mut t = DpTable::new((0..bag).collect(), max_degree).unwrap();
                for (key, poly) in vals.into_iter().enumerate() {
                    let f: Vec<usize> =
                        (0..bag).map(|i| key / (max_degree + 1).pow(i as u32) % (max_degree + 1)).collect();
                    for (s, v) in poly.into_iter().enumerate() {
                        if v % 3 != 0 {
                            t.set_count(&f, s, BigUint::from(v)).unwrap();
                        }
                    }
                }
                t
            })
    }

    fn schoolbook(a: &DpTable, b: &DpTable, max_degree: usize, bag: usize, m: usize) -> DpTable {
        let mut out = DpTable::new((0..bag).collect(), max_degree).unwrap();
        for (fa, _) in a.iter() {
            for (fb, _) in b.iter() {
                let f: Vec<usize> = fa.iter().zip(&fb).map(|(x, y)| x + y).collect();
                if f.iter().any(|&d| d > max_degree) {
                    continue;
                }
                for s1 in 0..=m {
                    for s2 in 0..=m {
                        let add = a.count(&fa, s1) * b.count(&fb, s2);
                        let cur = out.count(&f, s1 + s2);
                        out.set_count(&f, s1 + s2, cur + add).unwrap();
                    }
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn naive_join_matches_schoolbook(
            (a, b) in (arb_table(2, 2, 4), arb_table(2, 2, 4))
        ) {
            prop_assert_eq!(join_naive(&a, &b).unwrap(), schoolbook(&a, &b, 2, 2, 4));
        }

        #[test]
        fn fast_join_matches_naive(
            (md, bag, m) in (0usize..=3, 0usize..=3, 0usize..=6)
                .prop_filter("small", |(md, bag, _)| (md + 1).pow(*bag as u32) <= 64),
            seed in any::<u64>()
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut make = || {
                let mut t = DpTable::new((0..bag).collect(), md).unwrap();
                for key in 0..(md + 1).pow(bag as u32) {
                    let f: Vec<usize> = (0..bag).map(|i| key / (md + 1).pow(i as u32) % (md + 1)).collect();
                    for s in 0..=m {
                        if rng.gen_bool(0.5) {
                            t.set_count(&f, s, BigUint::from(rng.gen_range(1u64..1 << 20))).unwrap();
                        }
                    }
                }
                t
            };
            let (a, b) = (make(), make());
            let m_bound = 2 * m + 45;
            let basis = basis_for(md, bag, m_bound).unwrap();
            prop_assert_eq!(join_fast(&a, &b, &basis, m_bound).unwrap(), join_naive(&a, &b).unwrap());
        }
    }
}
