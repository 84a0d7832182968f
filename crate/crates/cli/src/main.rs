use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use mhg_core::completion::magic_complete;
use mhg_core::families::{classify_cycle, ForbiddenFamily, WitnessDetector};
use mhg_core::graph::{first_membership_failure, GraphFile};
use mhg_core::magic::{magic_distances, Time, TimeRule};
use mhg_core::onedelta::{is_twisted_pair, OneDeltaTable};
use mhg_core::oracle::{verify_equivalence, SweepMode, VerifyOptions, DEFAULT_BUDGET};
use mhg_core::params::{classify, enumerate_admissible, is_acceptable};
use mhg_core::{EdgeLabelledGraph, LabelledCycle, MagicContext, ParameterSequence, RawParams};

/// Exit status for usage and input errors; clap uses the same value.
const EXIT_USAGE: u8 = 2;
const EXIT_VERDICT: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "mhg", version, about = "Forbidden cycles and completions for 3-constrained metrically homogeneous graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Magic distance to use instead of the smallest one.
    #[arg(long, global = true, value_name = "M")]
    m: Option<u32>,
    /// Stage order below M.
    #[arg(long, global = true, value_enum, default_value_t = RuleArg::Standard)]
    time_rule: RuleArg,
    /// Largest number of label assignments the brute-force oracle may try per graph.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = positive_budget)]
    budget: u128,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Standard,
    Interleaved,
}

impl From<RuleArg> for TimeRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Standard => TimeRule::Standard,
            RuleArg::Interleaved => TimeRule::Interleaved,
        }
    }
}

fn positive_budget(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Debug, Clone)]
struct ParamsArg {
    /// δ K1 K2 C0 C1
    #[arg(long = "params", num_args = 5, value_names = ["DELTA", "K1", "K2", "C0", "C1"], allow_negative_numbers = true, required = true)]
    values: Vec<i64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parameter sequences.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Magic distances, the ⊕ table and the stage order.
    #[command(subcommand)]
    Magic(MagicCmd),
    /// Graph membership.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Magic completion of a graph file.
    Complete {
        file: PathBuf,
        #[command(flatten)]
        params: ParamsArg,
        /// Include the per-stage fill log.
        #[arg(long)]
        trace: bool,
    },
    /// Forbidden cycle families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Compare brute force, forbidden witnesses and the magic completion on small graphs.
    Verify {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        n_max: usize,
        /// Sample this many random graphs on exactly n-max vertices instead of sweeping all.
        #[arg(long, value_name = "COUNT")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "sample")]
        seed: u64,
        /// Check every labelled graph instead of one per isomorphism class.
        #[arg(long)]
        no_iso: bool,
    },
    /// Table of forbidden cycles built from edges of length 1 and δ.
    Table {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// Whether two tables are transposes of each other.
    Twisted {
        #[arg(long, num_args = 5, value_names = ["DELTA", "K1", "K2", "C0", "C1"], required = true)]
        params1: Vec<i64>,
        #[arg(long, num_args = 5, value_names = ["DELTA", "K1", "K2", "C0", "C1"], required = true)]
        params2: Vec<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum ParamsCmd {
    /// Acceptability and admissibility case of one tuple.
    Check {
        #[arg(allow_negative_numbers = true)]
        delta: i64,
        #[arg(allow_negative_numbers = true)]
        k1: i64,
        #[arg(allow_negative_numbers = true)]
        k2: i64,
        #[arg(allow_negative_numbers = true)]
        c0: i64,
        #[arg(allow_negative_numbers = true)]
        c1: i64,
    },
    /// All admissible tuples for one δ.
    List { delta: u32 },
}

#[derive(Subcommand, Debug)]
enum MagicCmd {
    Show { delta: i64, k1: i64, k2: i64, c0: i64, c1: i64 },
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// Membership verdict and the first violation.
    Check {
        file: PathBuf,
        #[command(flatten)]
        params: ParamsArg,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    /// Family tags of one cycle.
    Classify {
        #[command(flatten)]
        params: ParamsArg,
        /// Comma-separated labels, e.g. 5,5,5,5,5
        #[arg(long)]
        cycle: String,
    },
    /// Every member of the forbidden family, canonical forms only.
    Enumerate {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// A closed walk in the graph that is a forbidden cycle, if any.
    Witness {
        file: PathBuf,
        #[command(flatten)]
        params: ParamsArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

impl ParamsArg {
    fn admissible(&self) -> Result<ParameterSequence> {
        admissible(&self.values)
    }
}

fn admissible(v: &[i64]) -> Result<ParameterSequence> {
    let &[d, k1, k2, c0, c1] = v else {
        bail!("expected five parameters, got {}", v.len());
    };
    Ok(ParameterSequence::admissible(d, k1, k2, c0, c1)?)
}

fn context(p: ParameterSequence, g: &Global) -> Result<MagicContext> {
    let ctx = match g.m {
        Some(m) => MagicContext::with_magic(p, m)?,
        None => MagicContext::new(p)?,
    };
    Ok(ctx.with_rule(g.time_rule.into()))
}

fn read_graph(path: &Path) -> Result<EdgeLabelledGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    EdgeLabelledGraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit_json(out: &mut impl Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn time_json(t: Time) -> Value {
    match t {
        Time::Finite(v) => json!(v),
        Time::Infinite => json!("inf"),
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Params(ParamsCmd::Check { delta, k1, k2, c0, c1 }) => {
            let raw = RawParams { delta: *delta, k1: *k1, k2: *k2, c0: *c0, c1: *c1 };
            let acceptable = is_acceptable(raw);
            let case = acceptable.then(|| classify(raw));
            let (c, c_prime) = if acceptable { (Some(c0.min(c1)), Some(c0.max(c1))) } else { (None, None) };
            emit_json(
                out,
                &json!({
                    "params": raw,
                    "acceptable": acceptable,
                    "admissible": case.is_some_and(|c| c.is_admissible()),
                    "case": case.map(|c| c.label()),
                    "c": c,
                    "c_prime": c_prime,
                }),
            )?;
        }
        Command::Params(ParamsCmd::List { delta }) => {
            let all = enumerate_admissible(*delta);
            if g.json {
                let rows: Vec<Value> =
                    all.iter().map(|p| json!({ "params": p.raw(), "case": p.case().label() })).collect();
                emit_json(out, &rows)?;
            } else {
                for p in all {
                    writeln!(out, "{} {}", p.raw(), p.case().label())?;
                }
            }
        }
        Command::Magic(MagicCmd::Show { delta, k1, k2, c0, c1 }) => {
            let p = admissible(&[*delta, *k1, *k2, *c0, *c1])?;
            let ctx = context(p, g)?;
            let candidates = magic_distances(&p)?;
            if g.json {
                let times: Vec<Value> =
                    (1..=ctx.delta()).map(|x| json!({ "distance": x, "time": time_json(ctx.time(x)) })).collect();
                emit_json(
                    out,
                    &json!({
                        "params": p.raw(),
                        "case": p.case().label(),
                        "magic_distances": candidates,
                        "m": ctx.m(),
                        "time_rule": ctx.rule(),
                        "times": times,
                        "permutation": ctx.permutation(),
                        "oplus": ctx.table(),
                    }),
                )?;
            } else {
                let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                writeln!(out, "params {} case {}", p.raw(), p.case().label())?;
                writeln!(out, "magic distances: {}", list(&candidates))?;
                writeln!(out, "M = {} ({} time rule)", ctx.m(), ctx.rule())?;
                writeln!(out, "permutation: {}", list(ctx.permutation()))?;
                let w = ctx.delta().to_string().len() + 1;
                write!(out, "{:>w$}", "⊕")?;
                for y in 1..=ctx.delta() {
                    write!(out, " {y:>w$}")?;
                }
                writeln!(out)?;
                for (x, row) in ctx.table().iter().enumerate() {
                    write!(out, "{:>w$}", x + 1)?;
                    for v in row {
                        write!(out, " {v:>w$}")?;
                    }
                    writeln!(out)?;
                }
            }
        }
        Command::Graph(GraphCmd::Check { file, params }) => {
            let p = params.admissible()?;
            let graph = read_graph(file)?;
            let failure = first_membership_failure(&p, &graph);
            if g.json {
                emit_json(out, &json!({ "member": failure.is_none(), "failure": failure }))?;
            } else {
                match failure {
                    None => writeln!(out, "member")?,
                    Some(f) => writeln!(out, "not a member: {}", serde_json::to_string(&f)?)?,
                }
            }
        }
        Command::Complete { file, params, trace } => {
            let p = params.admissible()?;
            let ctx = context(p, g)?;
            let graph = read_graph(file)?;
            let done = magic_complete(&ctx, &graph)?;
            let member = first_membership_failure(&p, &done.graph).is_none();
            let mut body = json!({
                "m": ctx.m(),
                "time_rule": ctx.rule(),
                "member": member,
                "graph": GraphFile::from(&done.graph),
            });
            if *trace {
                body["trace"] = serde_json::to_value(&done.trace)?;
            }
            emit_json(out, &body)?;
        }
        Command::Family(FamilyCmd::Classify { params, cycle }) => {
            let p = params.admissible()?;
            let cycle: LabelledCycle = cycle.parse().with_context(|| format!("bad cycle {cycle:?}"))?;
            if let Some(&bad) = cycle.labels().iter().find(|&&l| l > p.delta()) {
                bail!("label {bad} exceeds δ = {}", p.delta());
            }
            let family = ForbiddenFamily::new(p)?;
            let witnesses = classify_cycle(&p, &cycle);
            let in_f = family.contains(&cycle);
            if g.json {
                emit_json(out, &json!({ "cycle": cycle, "in_f": in_f, "witnesses": witnesses }))?;
            } else {
                writeln!(out, "{cycle} {}", if in_f { "in F" } else { "not in F" })?;
                for w in &witnesses {
                    writeln!(out, "  {} n={} d={:?} x={:?}", w.tag, w.n, w.d_edges, w.x_edges)?;
                }
            }
        }
        Command::Family(FamilyCmd::Enumerate { params }) => {
            let p = params.admissible()?;
            let family = ForbiddenFamily::new(p)?;
            let members = family.enumerate();
            if g.json {
                let rows: Vec<Value> = members
                    .iter()
                    .map(|c| {
                        let tags: Vec<_> = family.witnesses(c).iter().map(|w| w.tag).collect();
                        json!({ "cycle": c, "tags": tags })
                    })
                    .collect();
                emit_json(
                    out,
                    &json!({
                        "params": p.raw(),
                        "length_bound": family.length_bound(),
                        "count": members.len(),
                        "members": rows,
                    }),
                )?;
            } else {
                for c in &members {
                    let mut tags: Vec<String> = family.witnesses(c).iter().map(|w| w.tag.to_string()).collect();
                    tags.dedup();
                    writeln!(out, "{c} {}", tags.join(","))?;
                }
            }
        }
        Command::Family(FamilyCmd::Witness { file, params }) => {
            let p = params.admissible()?;
            let graph = read_graph(file)?;
            let found = WitnessDetector::new(p)?.find(&graph);
            if g.json {
                emit_json(out, &json!({ "witness": found }))?;
            } else {
                match &found {
                    None => writeln!(out, "none")?,
                    Some(f) => {
                        let path: Vec<String> = f.walk.vertices.iter().map(usize::to_string).collect();
                        writeln!(out, "walk {}-{} labels {} family {}", path.join("-"), path[0], f.walk.cycle(), f.witness.tag)?;
                    }
                }
            }
            if found.is_some() {
                return Ok(ExitCode::from(EXIT_VERDICT));
            }
        }
        Command::Verify { params, n_max, sample, seed, no_iso } => {
            let p = params.admissible()?;
            let mode = match sample {
                Some(count) => SweepMode::Sample { count: *count, seed: *seed },
                None => SweepMode::Exhaustive,
            };
            let options = VerifyOptions {
                budget: g.budget,
                iso_reduction: !no_iso,
                magic: g.m,
                rule: g.time_rule.into(),
                threads: g.threads,
            };
            let report = verify_equivalence(&p, *n_max, mode, options)?;
            if g.json {
                emit_json(out, &report)?;
            } else {
                writeln!(out, "params {} n_max {} M {} ({} time rule)", p.raw(), n_max, report.magic_distance, report.time_rule)?;
                if let SweepMode::Sample { count, seed } = mode {
                    writeln!(out, "sampled {count} graphs, seed {seed}")?;
                }
                writeln!(out, "graphs checked: {} ({} evaluated)", report.graphs_checked, report.classes_checked)?;
                writeln!(out, "completable: {}", report.completable)?;
                writeln!(out, "witness mismatches: {}", report.mismatches.len())?;
                writeln!(out, "magic completion disagreements: {}", report.magic_disagreements.len())?;
                writeln!(out, "fallback events: {} ({} disagreeing)", report.fallback_events, report.fallback_disagreements)?;
                for m in report.mismatches.iter().chain(&report.magic_disagreements).take(5) {
                    writeln!(out, "  {}", serde_json::to_string(m)?)?;
                }
            }
            if !report.is_clean() {
                return Ok(ExitCode::from(EXIT_VERDICT));
            }
        }
        Command::Table { params } => {
            let table = OneDeltaTable::new(&params.admissible()?)?;
            if g.json {
                emit_json(out, &table)?;
            } else {
                write!(out, "{}", table.render_text())?;
            }
        }
        Command::Twisted { params1, params2 } => {
            let (p1, p2) = (admissible(params1)?, admissible(params2)?);
            let twisted = is_twisted_pair(&p1, &p2)?;
            let (t1, t2) = (OneDeltaTable::new(&p1)?, OneDeltaTable::new(&p2)?);
            if g.json {
                emit_json(
                    out,
                    &json!({
                        "twisted": twisted,
                        "cells1": t1.cell_set(),
                        "cells2": t2.cell_set(),
                    }),
                )?;
            } else {
                writeln!(out, "twisted: {twisted}")?;
                writeln!(out, "{}: {:?}", p1.raw(), t1.cell_set())?;
                writeln!(out, "{}: {:?}", p2.raw(), t2.cell_set())?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
