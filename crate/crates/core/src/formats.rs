//! Line-oriented text formats. Every id is 1-based in files.
//!
//! Instances:
//! ```text
//! c comment
//! p genfac <n> <m>
//! v <id> list <b1,b2,...>          (`-` for the empty list)
//! v <id> rel <arity> <hex,hex,...> order <edge ids...>
//! e <id> <u> <v>
//! portal <vertex> <count>          (gadgets only, in dangling order)
//! kind decision | kind penalized <alpha> <beta> <internal|external>
//! ```
//! Tree decompositions use the PACE `.td` format, layouts a `p layout <n>`
//! header followed by one `l` line, formulas DIMACS CNF.

use std::fmt::Write as _;

use crate::decomp::{LinearLayout, TreeDecomposition};
use crate::degree::DegreeList;
use crate::error::{Error, Result};
use crate::gadgets::{Gadget, GadgetKind};
use crate::graph::{MultiGraph, Vertex};
use crate::instance::{Constraint, Instance};
use crate::reduce::CnfFormula;
use crate::relation::Relation;

/// Parsed instance file; `portals` and `kind` are only present in gadget
/// files.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub portals: Vec<Vertex>,
    pub kind: Option<GadgetKind>,
}

impl InstanceFile {
    /// Gadget view; every vertex must carry the same list.
    pub fn into_gadget(self) -> Result<Gadget> {
        let lists = self.instance.lists()?;
        let list = lists
            .first()
            .map(|l| (*l).clone())
            .ok_or_else(|| Error::InvalidInstance("gadget without vertices".into()))?;
        if lists.iter().any(|l| **l != list) {
            return Err(Error::InvalidInstance("gadget vertices carry different lists".into()));
        }
        Ok(Gadget {
            graph: self.instance.graph().clone(),
            list,
            portals: self.portals,
            kind: self.kind.unwrap_or(GadgetKind::Decision),
        })
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn list_text(l: &DegreeList) -> String {
    if l.is_empty() {
        "-".into()
    } else {
        join(l.values(), ",")
    }
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let g = inst.graph();
    writeln!(out, "p genfac {} {}", g.n(), g.m()).unwrap();
    for v in 0..g.n() {
        match inst.constraint(v) {
            Constraint::List(l) => writeln!(out, "v {} list {}", v + 1, list_text(l)).unwrap(),
            Constraint::Rel { relation, order } => {
                let masks = if relation.is_empty() {
                    "-".to_string()
                } else {
                    join(relation.accepted().iter().map(|m| format!("{m:x}")), ",")
                };
                writeln!(
                    out,
                    "v {} rel {} {} order {}",
                    v + 1,
                    relation.arity(),
                    masks,
                    join(order.iter().map(|e| e + 1), " ")
                )
                .unwrap();
            }
        }
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        writeln!(out, "e {} {} {}", e + 1, a + 1, b + 1).unwrap();
    }
    out
}

pub fn write_gadget(g: &Gadget) -> String {
    let inst = Instance::homogeneous(g.graph.clone(), &g.list);
    let mut out = write_instance(&inst);
    for (v, c) in g.portal_groups() {
        writeln!(out, "portal {} {}", v + 1, c).unwrap();
    }
    match g.kind {
        GadgetKind::Decision => out.push_str("kind decision\n"),
        GadgetKind::Penalized { alpha, beta, internal } => {
            let mode = if internal { "internal" } else { "external" };
            writeln!(out, "kind penalized {alpha} {beta} {mode}").unwrap();
        }
    }
    out
}

fn num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let t = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{t}`")))
}

fn id(tok: Option<&str>, line: usize, what: &str, bound: usize) -> Result<usize> {
    let x = num(tok, line, what)?;
    if x == 0 || x > bound {
        return Err(Error::parse(line, format!("{what} {x} outside 1..={bound}")));
    }
    Ok(x - 1)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn no_trailing(toks: &[&str], used: usize, line: usize) -> Result<()> {
    if toks.len() > used {
        return Err(Error::parse(line, format!("unexpected `{}`", toks[used])));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut constraints: Vec<Option<Constraint>> = Vec::new();
    let mut edges: Vec<Option<(Vertex, Vertex)>> = Vec::new();
    let mut portals = Vec::new();
    let mut kind = None;
    for (ln, toks) in content_lines(text) {
        if toks[0] == "p" {
            if header.is_some() {
                return Err(Error::parse(ln, "second header"));
            }
            if toks.get(1) != Some(&"genfac") {
                return Err(Error::parse(ln, "expected `p genfac <n> <m>`"));
            }
            let n = num(toks.get(2).copied(), ln, "vertex count")?;
            let m = num(toks.get(3).copied(), ln, "edge count")?;
            no_trailing(&toks, 4, ln)?;
            header = Some((n, m));
            constraints = vec![None; n];
            edges = vec![None; m];
            continue;
        }
        let (n, m) = header.ok_or_else(|| Error::parse(ln, "line before the `p genfac` header"))?;
        match toks[0] {
            "v" => {
                let v = id(toks.get(1).copied(), ln, "vertex", n)?;
                if constraints[v].is_some() {
                    return Err(Error::parse(ln, format!("vertex {} declared twice", v + 1)));
                }
                let c = match toks.get(2).copied() {
                    Some("list") => {
                        let t = toks.get(3).ok_or_else(|| Error::parse(ln, "missing list"))?;
                        no_trailing(&toks, 4, ln)?;
                        let values = if *t == "-" {
                            Vec::new()
                        } else {
                            t.split(',')
                                .map(|x| x.parse().map_err(|_| Error::parse(ln, format!("bad degree `{x}`"))))
                                .collect::<Result<Vec<usize>>>()?
                        };
                        Constraint::List(DegreeList::new(values))
                    }
                    Some("rel") => {
                        let arity = num(toks.get(3).copied(), ln, "arity")?;
                        let t = toks.get(4).ok_or_else(|| Error::parse(ln, "missing masks"))?;
                        let masks = if *t == "-" {
                            Vec::new()
                        } else {
                            t.split(',')
                                .map(|x| {
                                    u32::from_str_radix(x.trim_start_matches("0x"), 16)
                                        .map_err(|_| Error::parse(ln, format!("bad mask `{x}`")))
                                })
                                .collect::<Result<Vec<u32>>>()?
                        };
                        if toks.get(5) != Some(&"order") {
                            return Err(Error::parse(ln, "expected `order`"));
                        }
                        let order = toks[6..]
                            .iter()
                            .map(|t| id(Some(t), ln, "edge", m))
                            .collect::<Result<Vec<_>>>()?;
                        let relation = Relation::new(arity, masks).map_err(|e| Error::parse(ln, e.to_string()))?;
                        Constraint::Rel { relation, order }
                    }
                    _ => return Err(Error::parse(ln, "expected `list` or `rel`")),
                };
                constraints[v] = Some(c);
            }
            "e" => {
                let e = id(toks.get(1).copied(), ln, "edge", m)?;
                let a = id(toks.get(2).copied(), ln, "vertex", n)?;
                let b = id(toks.get(3).copied(), ln, "vertex", n)?;
                no_trailing(&toks, 4, ln)?;
                if edges[e].is_some() {
                    return Err(Error::parse(ln, format!("edge {} declared twice", e + 1)));
                }
                if a == b {
                    return Err(Error::parse(ln, "loop"));
                }
                edges[e] = Some((a, b));
            }
            "portal" => {
                let v = id(toks.get(1).copied(), ln, "vertex", n)?;
                let c = num(toks.get(2).copied(), ln, "count")?;
                no_trailing(&toks, 3, ln)?;
                portals.extend(std::iter::repeat(v).take(c));
            }
            "kind" => {
                kind = Some(match toks.get(1).copied() {
                    Some("decision") => {
                        no_trailing(&toks, 2, ln)?;
                        GadgetKind::Decision
                    }
                    Some("penalized") => {
                        let alpha = num(toks.get(2).copied(), ln, "alpha")?;
                        let beta = num(toks.get(3).copied(), ln, "beta")?;
                        let internal = match toks.get(4).copied() {
                            Some("internal") => true,
                            Some("external") => false,
                            _ => return Err(Error::parse(ln, "expected `internal` or `external`")),
                        };
                        no_trailing(&toks, 5, ln)?;
                        GadgetKind::Penalized { alpha, beta, internal }
                    }
                    _ => return Err(Error::parse(ln, "expected `decision` or `penalized`")),
                });
            }
            other => return Err(Error::parse(ln, format!("unknown line type `{other}`"))),
        }
    }
    let (n, _) = header.ok_or_else(|| Error::parse(0, "missing `p genfac` header"))?;
    let mut g = MultiGraph::new(n);
    for (e, x) in edges.into_iter().enumerate() {
        let (a, b) = x.ok_or_else(|| Error::parse(0, format!("edge {} missing", e + 1)))?;
        g.add_edge(a, b)?;
    }
    let constraints = constraints
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::parse(0, format!("vertex {} missing", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(InstanceFile {
        instance: Instance::new(g, constraints)?,
        portals,
        kind,
    })
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    writeln!(out, "s td {} {} {}", td.len(), td.max_bag_size(), n).unwrap();
    for (i, bag) in td.bags.iter().enumerate() {
        let mut line = format!("b {}", i + 1);
        for v in bag {
            write!(line, " {}", v + 1).unwrap();
        }
        writeln!(out, "{line}").unwrap();
    }
    for &(a, b) in &td.tree_edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// PACE tree decomposition; returns it with the declared vertex count.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut tree_edges = Vec::new();
    for (ln, toks) in content_lines(text) {
        match toks[0] {
            "s" => {
                if header.is_some() {
                    return Err(Error::parse(ln, "second header"));
                }
                if toks.get(1) != Some(&"td") {
                    return Err(Error::parse(ln, "expected `s td <bags> <width+1> <n>`"));
                }
                let nb = num(toks.get(2).copied(), ln, "bag count")?;
                let w = num(toks.get(3).copied(), ln, "bag size")?;
                let n = num(toks.get(4).copied(), ln, "vertex count")?;
                no_trailing(&toks, 5, ln)?;
                header = Some((nb, w, n));
                bags = vec![None; nb];
            }
            "b" => {
                let (nb, w, n) = header.ok_or_else(|| Error::parse(ln, "bag before the header"))?;
                let i = id(toks.get(1).copied(), ln, "bag", nb)?;
                if bags[i].is_some() {
                    return Err(Error::parse(ln, format!("bag {} declared twice", i + 1)));
                }
                let bag = toks[2..]
                    .iter()
                    .map(|t| id(Some(t), ln, "vertex", n))
                    .collect::<Result<Vec<_>>>()?;
                if bag.len() > w {
                    return Err(Error::parse(ln, format!("bag of size {} exceeds declared {w}", bag.len())));
                }
                bags[i] = Some(bag);
            }
            _ => {
                let (nb, _, _) = header.ok_or_else(|| Error::parse(ln, "tree edge before the header"))?;
                let a = id(toks.first().copied(), ln, "bag", nb)?;
                let b = id(toks.get(1).copied(), ln, "bag", nb)?;
                no_trailing(&toks, 2, ln)?;
                tree_edges.push((a, b));
            }
        }
    }
    let (_, _, n) = header.ok_or_else(|| Error::parse(0, "missing `s td` header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((TreeDecomposition::new(bags, tree_edges), n))
}

pub fn write_layout(l: &LinearLayout) -> String {
    format!(
        "p layout {}\nl {}\n",
        l.order.len(),
        join(l.order.iter().map(|v| v + 1), " ")
    )
}

pub fn parse_layout(text: &str) -> Result<LinearLayout> {
    let mut n = None;
    let mut order = None;
    for (ln, toks) in content_lines(text) {
        match toks[0] {
            "p" if toks.get(1) == Some(&"layout") => {
                n = Some(num(toks.get(2).copied(), ln, "vertex count")?);
                no_trailing(&toks, 3, ln)?;
            }
            "l" => {
                let n = n.ok_or_else(|| Error::parse(ln, "layout before the header"))?;
                if order.is_some() {
                    return Err(Error::parse(ln, "second layout line"));
                }
                order = Some(
                    toks[1..]
                        .iter()
                        .map(|t| id(Some(t), ln, "vertex", n))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            other => return Err(Error::parse(ln, format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing `p layout` header"))?;
    let l = LinearLayout::new(order.unwrap_or_default());
    l.positions(n)?;
    Ok(l)
}

pub fn write_dimacs(cnf: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars(), cnf.clauses().len());
    for c in cnf.clauses() {
        let mut line = join(c, " ");
        line.push_str(if c.is_empty() { "0" } else { " 0" });
        writeln!(out, "{line}").unwrap();
    }
    out
}

/// DIMACS CNF; clauses may span lines and end at `0`.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    let mut last = 0;
    for (ln, toks) in content_lines(text) {
        last = ln;
        if toks[0] == "%" {
            break;
        }
        if toks[0] == "p" {
            if toks.get(1) != Some(&"cnf") || header.is_some() {
                return Err(Error::parse(ln, "expected one `p cnf <n> <m>` header"));
            }
            let n = num(toks.get(2).copied(), ln, "variable count")?;
            let m = num(toks.get(3).copied(), ln, "clause count")?;
            no_trailing(&toks, 4, ln)?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| Error::parse(ln, "clause before the header"))?;
        for t in toks {
            let lit: i32 = t.parse().map_err(|_| Error::parse(ln, format!("bad literal `{t}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if lit.unsigned_abs() as usize > n {
                return Err(Error::parse(ln, format!("literal {lit} outside 1..={n}")));
            } else {
                cur.push(lit);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p cnf` header"))?;
    if !cur.is_empty() {
        return Err(Error::parse(last, "last clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(Error::parse(last, format!("header promises {m} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(n, clauses)
}
