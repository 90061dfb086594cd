//! Exhaustive checks of a gadget against the relation it should realize.

use super::{Gadget, GadgetKind};
use crate::decomp::{heuristic_td, make_nice, NiceDecomposition};
use crate::error::{Error, Result};
use crate::oracle::brute_force_profile;
use crate::relation::Relation;
use crate::solver_tw::{decide_tw, size_range_tw};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Internal instances with at most this many edges go to the
    /// enumeration oracle, larger ones to the tree-decomposition solver.
    pub oracle_edges: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { oracle_edges: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationReport {
    pub pass: bool,
    pub patterns: usize,
    /// `(pattern, in relation, solvable)` for every disagreement.
    pub mismatches: Vec<(u32, bool, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenalizedReport {
    pub pass: bool,
    pub alpha: usize,
    pub beta: usize,
    /// `(pattern, in relation, largest size)`; sizes follow the gadget's
    /// internal or external convention.
    pub rows: Vec<(u32, bool, Option<usize>)>,
}

fn check_arity(g: &Gadget, r: &Relation) -> Result<()> {
    if g.arity() != r.arity() {
        return Err(Error::Precondition(format!(
            "gadget has {} dangling edges, relation has arity {}",
            g.arity(),
            r.arity()
        )));
    }
    if g.arity() > 20 {
        return Err(Error::Budget(format!("{} dangling edges to enumerate", g.arity())));
    }
    Ok(())
}

fn decomposition(g: &Gadget, opts: &VerifyOptions) -> Result<Option<NiceDecomposition>> {
    if g.graph.m() <= opts.oracle_edges {
        return Ok(None);
    }
    make_nice(&g.graph, &heuristic_td(&g.graph)).map(Some)
}

pub fn verify_realization(g: &Gadget, r: &Relation) -> Result<RealizationReport> {
    verify_realization_with(g, r, &VerifyOptions::default())
}

/// Decides every dangling pattern by pinning it (shifted lists at the
/// portals) and compares with membership in `r`.
pub fn verify_realization_with(g: &Gadget, r: &Relation, opts: &VerifyOptions) -> Result<RealizationReport> {
    check_arity(g, r)?;
    let nd = decomposition(g, opts)?;
    let patterns = 1usize << g.arity();
    let mut mismatches = Vec::new();
    for pattern in 0..patterns as u32 {
        let inst = g.pinned_instance(pattern);
        let solvable = match &nd {
            Some(nd) => decide_tw(&inst, nd)?,
            None => brute_force_profile(&inst)?.summary().decide,
        };
        let expected = r.contains(pattern);
        if solvable != expected {
            mismatches.push((pattern, expected, solvable));
        }
    }
    Ok(RealizationReport {
        pass: mismatches.is_empty(),
        patterns,
        mismatches,
    })
}

/// Checks that patterns in `r` reach exactly `alpha` and all others stay at
/// most `alpha - beta` (or are unsolvable).
pub fn verify_penalized(g: &Gadget, r: &Relation) -> Result<PenalizedReport> {
    let GadgetKind::Penalized { alpha, beta, internal } = g.kind else {
        return Err(Error::Precondition("not a penalized gadget".into()));
    };
    check_arity(g, r)?;
    let opts = VerifyOptions::default();
    let nd = decomposition(g, &opts)?;
    let mut rows = Vec::new();
    let mut pass = alpha > 0;
    for pattern in 0..(1u32 << g.arity()) {
        let inst = g.pinned_instance(pattern);
        let best = match &nd {
            Some(nd) => size_range_tw(&inst, nd)?.map(|(_, hi)| hi),
            None => brute_force_profile(&inst)?.summary().max_size,
        };
        let size = best.map(|s| if internal { s } else { s + pattern.count_ones() as usize });
        let expected = r.contains(pattern);
        let ok = if expected {
            size == Some(alpha)
        } else {
            size.map_or(true, |s| s + beta <= alpha)
        };
        pass &= ok;
        rows.push((pattern, expected, size));
    }
    Ok(PenalizedReport { pass, alpha, beta, rows })
}
