//! Dynamic programming along a linear layout, over subsets of cut edges.

use crate::decomp::LinearLayout;
use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Vertex};
use crate::instance::Instance;
use crate::profile::SizeProfile;
use crate::weight::{Poly, Weight};

/// Default refusal threshold on the cut size.
pub const DEFAULT_CUT_GUARD: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    Naive,
    Improved,
}

/// Table after placing the first `position` vertices: one polynomial per
/// subset of the current cut. Bit `j` of a mask is `cut[j]`; the cut is
/// sorted by edge index.
#[derive(Debug, Clone, PartialEq)]
pub struct CutState {
    pub position: usize,
    pub cut: Vec<EdgeId>,
    pub table: Vec<Poly>,
}

impl CutState {
    pub fn initial() -> Self {
        CutState {
            position: 0,
            cut: Vec::new(),
            table: vec![Poly::one()],
        }
    }
}

/// Precomputed cuts of one layout.
#[derive(Debug, Clone)]
pub struct CutDp<'a> {
    inst: &'a Instance,
    lists: Vec<&'a DegreeList>,
    order: Vec<Vertex>,
    cuts: Vec<Vec<EdgeId>>,
    max_degree: usize,
}

/// Split of a step: which bits of the previous and next cut are shared.
struct Bits {
    /// For each bit of the previous cut: `Ok(j)` = bit `j` of `Ĉ`, `Err(j)` =
    /// bit `j` of `δ⁻`.
    prev: Vec<std::result::Result<usize, usize>>,
    /// Same for the next cut with `δ⁺`.
    next: Vec<std::result::Result<usize, usize>>,
    common: usize,
    minus: usize,
    plus: usize,
}

fn scatter(mask: usize, bits: &[std::result::Result<usize, usize>]) -> (usize, usize) {
    let mut shared = 0;
    let mut own = 0;
    for (b, slot) in bits.iter().enumerate() {
        if mask >> b & 1 == 1 {
            match *slot {
                Ok(j) => shared |= 1 << j,
                Err(j) => own |= 1 << j,
            }
        }
    }
    (shared, own)
}

fn gather(shared: usize, own: usize, bits: &[std::result::Result<usize, usize>]) -> usize {
    let mut mask = 0;
    for (b, slot) in bits.iter().enumerate() {
        let set = match *slot {
            Ok(j) => shared >> j & 1,
            Err(j) => own >> j & 1,
        };
        mask |= set << b;
    }
    mask
}

impl<'a> CutDp<'a> {
    pub fn new(inst: &'a Instance, layout: &LinearLayout, guard: usize) -> Result<Self> {
        let lists = inst.lists()?;
        let cuts = layout.cuts(inst.graph())?;
        let width = cuts.iter().map(Vec::len).max().unwrap_or(0);
        if width > guard {
            return Err(Error::Budget(format!(
                "layout has a cut of {width} edges, the limit is {guard}"
            )));
        }
        let max_degree = lists.iter().filter_map(|l| DegreeList::max(l)).max().unwrap_or(0);
        Ok(CutDp {
            inst,
            lists,
            order: layout.order.clone(),
            cuts,
            max_degree,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn cutwidth(&self) -> usize {
        self.cuts.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn bits(&self, prev: &CutState) -> Result<Bits> {
        let i = prev.position;
        if i >= self.order.len() {
            return Err(Error::Internal("step past the last position".into()));
        }
        let expected: &[EdgeId] = if i == 0 { &[] } else { &self.cuts[i - 1] };
        if prev.cut != expected || prev.table.len() != 1 << prev.cut.len() {
            return Err(Error::Internal(format!("state at position {i} does not match the layout")));
        }
        let next = &self.cuts[i];
        let v = self.order[i];
        let touches = |e: EdgeId| {
            let (a, b) = self.inst.graph().edge(e);
            a == v || b == v
        };
        let mut common = 0;
        let mut minus = 0;
        let mut prev_bits = Vec::with_capacity(prev.cut.len());
        for &e in &prev.cut {
            if touches(e) {
                prev_bits.push(Err(minus));
                minus += 1;
            } else {
                prev_bits.push(Ok(common));
                common += 1;
            }
        }
        let mut plus = 0;
        let mut shared = 0;
        let mut next_bits = Vec::with_capacity(next.len());
        for &e in next {
            if touches(e) {
                next_bits.push(Err(plus));
                plus += 1;
            } else {
                next_bits.push(Ok(shared));
                shared += 1;
            }
        }
        if shared != common {
            return Err(Error::Internal(format!(
                "cut bookkeeping mismatch at position {i}: {common} vs {shared} shared edges"
            )));
        }
        Ok(Bits {
            prev: prev_bits,
            next: next_bits,
            common,
            minus,
            plus,
        })
    }

    /// Direct step: every `S⁻ ⊆ δ⁻` against every `S⁺ ⊆ δ⁺`.
    pub fn step_naive(&self, prev: &CutState) -> Result<CutState> {
        let bits = self.bits(prev)?;
        let list = self.lists[self.order[prev.position]];
        let next = &self.cuts[prev.position];
        let mut table = vec![Poly::default(); 1 << next.len()];
        for (pm, w) in prev.table.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let (hat, minus) = scatter(pm, &bits.prev);
            let dm = minus.count_ones() as usize;
            for plus in 0..1usize << bits.plus {
                let dp = plus.count_ones() as usize;
                if !list.contains(dm + dp) {
                    continue;
                }
                let mut x = w.clone();
                for _ in 0..dp {
                    x = x.shift();
                }
                table[gather(hat, plus, &bits.next)].add_assign(&x);
            }
        }
        Ok(CutState {
            position: prev.position + 1,
            cut: next.clone(),
            table,
        })
    }

    /// Step through `h[ℓ][Ĉ] = Σ_{|S⁻| + ℓ ∈ B} prev[Ĉ ∪ S⁻]`, read back at
    /// `ℓ = |S⁺|`.
    pub fn step_improved(&self, prev: &CutState) -> Result<CutState> {
        let bits = self.bits(prev)?;
        let list = self.lists[self.order[prev.position]];
        let next = &self.cuts[prev.position];
        let hat_cells = 1usize << bits.common;
        // g[j][Ĉ]: selections of exactly j edges of δ⁻
        let mut g = vec![vec![Poly::default(); hat_cells]; bits.minus + 1];
        for (pm, w) in prev.table.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let (hat, minus) = scatter(pm, &bits.prev);
            g[minus.count_ones() as usize][hat].add_assign(w);
        }
        let top = bits.plus.min(self.max_degree);
        let mut h = vec![vec![Poly::default(); hat_cells]; top + 1];
        for (l, row) in h.iter_mut().enumerate() {
            for (j, gj) in g.iter().enumerate() {
                if !list.contains(j + l) {
                    continue;
                }
                for (cell, x) in row.iter_mut().zip(gj) {
                    if !x.is_zero() {
                        cell.add_assign(x);
                    }
                }
            }
            for cell in row.iter_mut() {
                for _ in 0..l {
                    *cell = cell.shift();
                }
            }
        }
        let mut table = vec![Poly::default(); 1 << next.len()];
        for (nm, slot) in table.iter_mut().enumerate() {
            let (hat, plus) = scatter(nm, &bits.next);
            let l = plus.count_ones() as usize;
            if l <= top {
                *slot = h[l][hat].clone();
            }
        }
        Ok(CutState {
            position: prev.position + 1,
            cut: next.clone(),
            table,
        })
    }

    pub fn step(&self, prev: &CutState, mode: StepMode) -> Result<CutState> {
        match mode {
            StepMode::Naive => self.step_naive(prev),
            StepMode::Improved => self.step_improved(prev),
        }
    }
}

/// Size profile by dynamic programming along `layout`.
pub fn count_cutw(inst: &Instance, layout: &LinearLayout, mode: StepMode) -> Result<SizeProfile> {
    count_cutw_with(inst, layout, mode, DEFAULT_CUT_GUARD)
}

pub fn count_cutw_with(
    inst: &Instance,
    layout: &LinearLayout,
    mode: StepMode,
    guard: usize,
) -> Result<SizeProfile> {
    let dp = CutDp::new(inst, layout, guard)?;
    let m = inst.m();
    if dp.lists.iter().any(|l| l.is_empty()) {
        return Ok(SizeProfile::zero(m));
    }
    let mut state = CutState::initial();
    for _ in 0..dp.len() {
        state = dp.step(&state, mode)?;
    }
    if !state.cut.is_empty() {
        return Err(Error::Internal("final cut is not empty".into()));
    }
    let counts = state.table.pop().map(|p| p.0).unwrap_or_default();
    if counts.len() > m + 1 {
        return Err(Error::Internal("solution larger than the edge set".into()));
    }
    Ok(SizeProfile::with_len(counts, m))
}
