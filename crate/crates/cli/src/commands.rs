use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

use genfac::decomp::{
    cutwidth_of_layout, heuristic_layout, heuristic_td, make_nice, validate_td, LinearLayout, TreeDecomposition,
};
use genfac::formats::{parse_dimacs, parse_instance, parse_layout, parse_td, write_gadget, write_instance, write_layout, write_td};
use genfac::gadgets::{
    realize_eq_penalized_internal, realize_hw22_penalized, verify_penalized, verify_realization, Gadget, GadgetKind,
    GirthOptions, Realizer,
};
use genfac::oracle::{backtrack_profile, brute_force_profile_with};
use genfac::reduce::{bfr_to_bfactor, cnf_to_bfr};
use genfac::solver_cutw::{count_cutw_with, StepMode, DEFAULT_CUT_GUARD};
use genfac::solver_tw::{count_tw_with, JoinMode, TwOptions, TwStats, DEFAULT_MEM_BUDGET};
use genfac::{DegreeList, Error, Instance, Relation, SizeProfile};

use crate::report::Report;
use crate::{
    BenchArgs, Command, CutwArgs, GadgetBuildArgs, GadgetCommand, GadgetVerifyArgs, JoinArg, OracleArgs,
    ReduceArgs, ReduceCommand, SolveArgs, SolverArg, StepArg, TwArgs, ValidateArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::CountTw(a) => count_tw_cmd(a),
        Command::CountCutw(a) => count_cutw_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Decide(a) => solve_cmd(a, "decide"),
        Command::Min(a) => solve_cmd(a, "min"),
        Command::Max(a) => solve_cmd(a, "max"),
        Command::Gadget(GadgetCommand::Build(a)) => gadget_build(a),
        Command::Gadget(GadgetCommand::Verify(a)) => gadget_verify(a),
        Command::Reduce(ReduceCommand::Cnf(a)) => reduce_cnf(a),
        Command::Bench(a) => bench(a),
        Command::Validate(a) => validate(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    let file = parse_instance(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(file.instance)
}

fn load_td(inst: &Instance, path: Option<&Path>) -> Result<TreeDecomposition> {
    let Some(path) = path else {
        return Ok(heuristic_td(inst.graph()));
    };
    let (td, n) = parse_td(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if n != inst.n() {
        return Err(Error::InvalidDecomposition(format!(
            "decomposition declares {n} vertices, instance has {}",
            inst.n()
        ))
        .into());
    }
    validate_td(inst.graph(), &td)?;
    Ok(td)
}

fn load_layout(inst: &Instance, path: Option<&Path>) -> Result<LinearLayout> {
    let Some(path) = path else {
        return Ok(heuristic_layout(inst.graph()));
    };
    let layout = parse_layout(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    layout.positions(inst.n())?;
    Ok(layout)
}

fn parse_list(text: &str) -> Result<DegreeList> {
    let values = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Precondition(format!("bad degree list `{text}`: {e}")))?;
    Ok(DegreeList::new(values))
}

fn budget(flag: Option<u64>) -> u64 {
    flag.unwrap_or(DEFAULT_MEM_BUDGET)
}

fn join_mode(j: JoinArg) -> JoinMode {
    match j {
        JoinArg::Naive => JoinMode::Naive,
        JoinArg::Fast => JoinMode::Fast,
    }
}

fn step_mode(s: StepArg) -> StepMode {
    match s {
        StepArg::Naive => StepMode::Naive,
        StepArg::Improved => StepMode::Improved,
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn solve_tw(inst: &Instance, td: &TreeDecomposition, join: JoinMode, mem_budget: u64) -> Result<(SizeProfile, usize, TwStats)> {
    let nd = make_nice(inst.graph(), td)?;
    let opts = TwOptions { join, mem_budget };
    let (profile, stats) = count_tw_with(inst, &nd, &opts)?;
    Ok((profile, nd.width(), stats))
}

fn solve_cutw(inst: &Instance, layout: &LinearLayout, step: StepMode, guard: usize) -> Result<(SizeProfile, usize)> {
    let width = cutwidth_of_layout(inst.graph(), layout)?;
    Ok((count_cutw_with(inst, layout, step, guard)?, width))
}

fn count_tw_cmd(a: TwArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let td = load_td(&inst, a.td.as_deref())?;
    let start = Instant::now();
    let join = join_mode(a.join);
    let (profile, width, _) = solve_tw(&inst, &td, join, budget(a.mem_budget))?;
    let mode = if join == JoinMode::Fast { "tw-fast" } else { "tw-naive" };
    println!("{}", Report::new(&inst, &profile, mode, Some(width), ms(start)).render(a.format));
    Ok(())
}

fn count_cutw_cmd(a: CutwArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let layout = load_layout(&inst, a.layout.as_deref())?;
    let start = Instant::now();
    let (profile, width) = solve_cutw(&inst, &layout, step_mode(a.step), a.guard)?;
    let mode = if a.step == StepArg::Improved { "cutw-improved" } else { "cutw-naive" };
    println!("{}", Report::new(&inst, &profile, mode, Some(width), ms(start)).render(a.format));
    Ok(())
}

fn oracle_cmd(a: OracleArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let start = Instant::now();
    let (profile, mode) = if a.backtrack {
        (backtrack_profile(&inst)?, "oracle-backtrack")
    } else {
        (brute_force_profile_with(&inst, a.max_edges)?, "oracle")
    };
    println!("{}", Report::new(&inst, &profile, mode, None, ms(start)).render(a.format));
    Ok(())
}

fn solve_cmd(a: SolveArgs, task: &str) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let start = Instant::now();
    let (profile, width, solver) = match a.solver {
        SolverArg::Tw => {
            let td = load_td(&inst, a.td.as_deref())?;
            let join = join_mode(a.join);
            let (p, w, _) = solve_tw(&inst, &td, join, budget(a.mem_budget))?;
            (p, Some(w), if join == JoinMode::Fast { "tw-fast" } else { "tw-naive" })
        }
        SolverArg::Cutw => {
            let layout = load_layout(&inst, a.layout.as_deref())?;
            let (p, w) = solve_cutw(&inst, &layout, StepMode::Improved, DEFAULT_CUT_GUARD)?;
            (p, Some(w), "cutw-improved")
        }
        SolverArg::Oracle => (backtrack_profile(&inst)?, None, "oracle-backtrack"),
    };
    let mode = format!("{task}/{solver}");
    println!("{}", Report::new(&inst, &profile, &mode, width, ms(start)).render(a.format));
    Ok(())
}

/// Constructions addressable from the command line.
enum Target {
    Hw22,
    Eq(usize),
    Hw1(usize, Option<usize>),
    Rel(Relation),
    Hw22Penalized,
    EqPenalized,
}

fn parse_target(spec: &str) -> Result<Target> {
    let bad = || Error::Precondition(format!("unknown relation `{spec}`"));
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    Ok(match parts.as_slice() {
        ["hw22"] => Target::Hw22,
        ["hw22-penalized"] => Target::Hw22Penalized,
        ["eq-penalized"] => Target::EqPenalized,
        ["eq", k] => Target::Eq(num(k)?),
        ["hw1", k] => match k.split_once('+') {
            Some((k, l)) => Target::Hw1(num(k)?, Some(num(l)?)),
            None => Target::Hw1(num(k)?, None),
        },
        ["rel", arity, masks] => {
            let masks = masks
                .split(',')
                .filter(|t| !t.is_empty() && *t != "-")
                .map(|t| u32::from_str_radix(t, 16).map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            Target::Rel(Relation::new(num(arity)?, masks)?)
        }
        _ => return Err(bad().into()),
    })
}

/// Two exactly-one constraints side by side: the first `k` bits and the
/// last `l` bits each have weight one.
fn pair_relation(k: usize, l: usize) -> Result<Relation> {
    let masks = (0..k).flat_map(|i| (0..l).map(move |j| (1u32 << i) | (1u32 << (k + j))));
    Ok(Relation::new(k + l, masks)?)
}

fn target_relation(t: &Target, gadget: &Gadget) -> Result<Relation> {
    Ok(match t {
        Target::Hw22 | Target::Hw22Penalized => Relation::hw_eq(2, 2),
        Target::Eq(k) => Relation::eq(*k),
        Target::EqPenalized => Relation::eq(gadget.arity()),
        Target::Hw1(k, None) => Relation::hw_eq(*k, 1),
        Target::Hw1(k, Some(l)) => pair_relation(*k, *l)?,
        Target::Rel(r) => r.clone(),
    })
}

fn gadget_build(a: GadgetBuildArgs) -> Result<()> {
    let b = parse_list(&a.list)?;
    let mut girth = GirthOptions::default();
    if let Some(seed) = a.seed {
        girth.seed = seed;
    }
    let gadget = match parse_target(&a.relation)? {
        Target::Hw22Penalized => realize_hw22_penalized(&b, a.beta, &girth)?,
        Target::EqPenalized => realize_eq_penalized_internal(&b, a.beta, &girth)?,
        t => {
            let mut realizer = Realizer::new(&b)?;
            match t {
                Target::Hw22 => realizer.hw22()?,
                Target::Eq(k) => realizer.eq(k)?,
                Target::Hw1(k, l) => realizer.hw_eq1(k, l)?,
                Target::Rel(r) => realizer.even_relation(&r)?,
                Target::Hw22Penalized | Target::EqPenalized => unreachable!("handled above"),
            }
        }
    };
    let text = write_gadget(&gadget);
    match &a.output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn gadget_verify(a: GadgetVerifyArgs) -> Result<()> {
    let text = read(&a.gadget)?;
    let gadget = parse_instance(&text)
        .and_then(|f| f.into_gadget())
        .with_context(|| format!("in {}", a.gadget.display()))?;
    let relation = target_relation(&parse_target(&a.relation)?, &gadget)?;
    let pass = match gadget.kind {
        GadgetKind::Decision => {
            let rep = verify_realization(&gadget, &relation)?;
            let mismatches: Vec<_> = rep
                .mismatches
                .iter()
                .map(|&(p, want, got)| json!({"pattern": p, "in_relation": want, "solvable": got}))
                .collect();
            println!(
                "{}",
                json!({"kind": "decision", "pass": rep.pass, "patterns": rep.patterns, "mismatches": mismatches})
            );
            rep.pass
        }
        GadgetKind::Penalized { .. } => {
            let rep = verify_penalized(&gadget, &relation)?;
            let rows: Vec<_> = rep
                .rows
                .iter()
                .map(|&(p, want, size)| json!({"pattern": p, "in_relation": want, "max_size": size}))
                .collect();
            println!(
                "{}",
                json!({"kind": "penalized", "pass": rep.pass, "alpha": rep.alpha, "beta": rep.beta, "rows": rows})
            );
            rep.pass
        }
    };
    if !pass {
        bail!(Error::Precondition(format!("gadget does not realize `{}`", a.relation)));
    }
    Ok(())
}

fn reduce_cnf(a: ReduceArgs) -> Result<()> {
    let cnf = parse_dimacs(&read(&a.cnf)?).with_context(|| format!("in {}", a.cnf.display()))?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let emit = |stem: &str, inst: &Instance, layout: &LinearLayout| -> Result<serde_json::Value> {
        write(&a.out_dir.join(format!("{stem}.gf")), &write_instance(inst))?;
        write(&a.out_dir.join(format!("{stem}.layout")), &write_layout(layout))?;
        let mut info = json!({
            "n": inst.n(),
            "m": inst.m(),
            "cutwidth": cutwidth_of_layout(inst.graph(), layout)?,
        });
        if a.td {
            let td = heuristic_td(inst.graph());
            write(&a.out_dir.join(format!("{stem}.td")), &write_td(&td, inst.n()))?;
            info["treewidth_bound"] = json!(td.width());
        }
        Ok(info)
    };
    let bfr = cnf_to_bfr(&cnf)?;
    let bfr_info = emit("bfr", &bfr.instance, &bfr.layout)?;
    let factor_info = match &a.list {
        Some(list) => {
            let factor = bfr_to_bfactor(&bfr, &parse_list(list)?)?;
            emit("factor", &factor.instance, &factor.layout)?
        }
        None => serde_json::Value::Null,
    };
    println!(
        "{}",
        json!({
            "variables": cnf.num_vars(),
            "clauses": cnf.clauses().len(),
            "bfr": bfr_info,
            "factor": factor_info,
        })
    );
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    println!("instance\twidth\tmode\twall_ms\ttable_cells");
    let repeat = a.repeat.max(1);
    for path in &a.instances {
        let inst = load_instance(path)?;
        let name = path.display();
        let td = heuristic_td(inst.graph());
        let layout = heuristic_layout(inst.graph());
        for (mode, join) in [("tw-naive", JoinMode::Naive), ("tw-fast", JoinMode::Fast)] {
            let mut best: Option<(f64, usize, usize)> = None;
            for _ in 0..repeat {
                let start = Instant::now();
                match solve_tw(&inst, &td, join, budget(a.mem_budget)) {
                    Ok((_, width, stats)) => {
                        let t = ms(start);
                        if best.map_or(true, |b| t < b.0) {
                            best = Some((t, width, stats.peak_entries));
                        }
                    }
                    Err(e) => {
                        eprintln!("{name} {mode}: {e}");
                        break;
                    }
                }
            }
            match best {
                Some((t, w, cells)) => println!("{name}\t{w}\t{mode}\t{t:.3}\t{cells}"),
                None => println!("{name}\t{}\t{mode}\t-\t-", td.width()),
            }
        }
        let width = cutwidth_of_layout(inst.graph(), &layout)?;
        for (mode, step) in [("cutw-naive", StepMode::Naive), ("cutw-improved", StepMode::Improved)] {
            let mut best: Option<f64> = None;
            for _ in 0..repeat {
                let start = Instant::now();
                match count_cutw_with(&inst, &layout, step, DEFAULT_CUT_GUARD) {
                    Ok(_) => {
                        let t = ms(start);
                        best = Some(best.map_or(t, |b: f64| b.min(t)));
                    }
                    Err(e) => {
                        eprintln!("{name} {mode}: {e}");
                        break;
                    }
                }
            }
            let cells = 1u128 << width.min(127);
            match best {
                Some(t) => println!("{name}\t{width}\t{mode}\t{t:.3}\t{cells}"),
                None => println!("{name}\t{width}\t{mode}\t-\t-"),
            }
        }
    }
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<()> {
    if a.td.is_none() && a.layout.is_none() {
        bail!(Error::Precondition("nothing to validate: pass --td and/or --layout".into()));
    }
    let inst = load_instance(&a.instance)?;
    let mut out = json!({});
    if let Some(path) = &a.td {
        let td = load_td(&inst, Some(path))?;
        out["td"] = json!({"valid": true, "width": td.width(), "bags": td.len()});
    }
    if let Some(path) = &a.layout {
        let layout = load_layout(&inst, Some(path))?;
        out["layout"] = json!({"valid": true, "cutwidth": cutwidth_of_layout(inst.graph(), &layout)?});
    }
    println!("{out}");
    Ok(())
}
