//! Command-line surface for the broadcast toolkit: family generators, gadget
//! builders, the exact solver, the scheme verifier, and the brute-force
//! oracle, all speaking the JSON graph/scheme documents.

use anyhow::{anyhow, bail, Context};
use bcast_core::graph::{Graph, VertexLabel};
use bcast_core::io::{self, ParamsDoc, ThreeDmDoc};
use bcast_core::oracle::{oracle_broadcast_time, sat_classify, solve_3dm, OracleConfig, SatClass};
use bcast_core::reductions::{
    bcsize_from_usat, bcsize_origin_scheme, bg_from_stbt, bg_yes_scheme, parse_dimacs,
    stbt_from_3dm, stbt_yes_scheme, ReductionArtifact,
};
use bcast_core::schemes::{validate_scheme, BroadcastScheme};
use bcast_core::solver::{broadcast_center, broadcast_time_from, SolverConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

#[derive(Parser)]
#[command(name = "bcast", version, about = "Broadcast-time toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family instance.
    Gen(GenArgs),
    /// Build a gadget instance from a source problem.
    Reduce(ReduceArgs),
    /// Exact broadcast time from one originator, with a witness scheme.
    Solve(SolveArgs),
    /// Broadcast center of a graph.
    Center(CenterArgs),
    /// Replay a scheme file against a graph.
    Verify(VerifyArgs),
    /// Brute-force broadcast time at oracle scale.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Binomial tree of degree k.
    Bt,
    /// Pruned binomial tree of degree k with i branches removed.
    Pruned,
    /// Knödel graph on n vertices.
    Knodel,
    /// Star on m vertices.
    Star,
    /// Path on m vertices.
    Path,
    /// Seeded random rooted tree on n vertices.
    RandomTree,
    /// Seeded random connected graph on n vertices.
    RandomGraph,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Degree, for binomial and pruned trees.
    #[arg(long)]
    k: Option<usize>,
    /// Removed branches, for pruned trees.
    #[arg(long)]
    i: Option<usize>,
    /// Order, for Knödel graphs.
    #[arg(long)]
    n: Option<usize>,
    /// Size, for stars and paths.
    #[arg(long)]
    m: Option<usize>,
    /// Seed for the random families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write a DOT rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceFrom {
    /// 3-dimensional matching instance -> time-bounded broadcast instance.
    #[value(name = "3dm")]
    ThreeDm,
    /// Time-bounded broadcast instance -> broadcast-graph instance.
    Stbt,
    /// CNF formula (unique-SAT question) -> center-size instance.
    Usat,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    from: ReduceFrom,
    /// Input file: 3DM JSON, graph JSON with an `originator` mark, or
    /// DIMACS CNF.
    #[arg(long, visible_alias = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Params sidecar path (defaults to <out>.params.json).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Write a certifying scheme here; the witness is taken from --witness
    /// or found by the oracle where possible.
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
    /// Witness file: matching indices (JSON array) for 3dm, an inner scheme
    /// for stbt, an assignment (JSON array of booleans) for usat.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Originator for the certificate (defaults to the source origin for
    /// stbt, the star center for usat).
    #[arg(long)]
    certificate_origin: Option<String>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Originator label, `namespace:local`.
    #[arg(long)]
    from: String,
    /// Wall-clock budget, e.g. `30s`, `5m`.
    #[arg(long)]
    budget: Option<String>,
    /// Search-node budget.
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CenterArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    scheme: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Single originator label.
    #[arg(long)]
    from: Option<String>,
    /// Comma-separated origin set (multi-origin broadcast).
    #[arg(long)]
    origins: Option<String>,
    #[arg(long)]
    max_vertices: Option<usize>,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Reduce(args) => reduce(args),
        Command::Solve(args) => solve(args),
        Command::Center(args) => center(args),
        Command::Verify(args) => verify(args),
        Command::Oracle(args) => oracle(args),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<(Graph, BTreeMap<String, VertexLabel>)> {
    Ok(io::graph_from_json(&read(path)?)?)
}

fn parse_budget(text: &str) -> anyhow::Result<Duration> {
    let text = text.trim();
    let split = text.find(|c: char| c.is_alphabetic()).unwrap_or(text.len());
    let (value, unit) = text.split_at(split);
    let value: u64 = value
        .parse()
        .map_err(|_| anyhow!("bad budget value `{text}`"))?;
    match unit {
        "" | "s" => Ok(Duration::from_secs(value)),
        "ms" => Ok(Duration::from_millis(value)),
        "m" => Ok(Duration::from_secs(value * 60)),
        "h" => Ok(Duration::from_secs(value * 3600)),
        other => bail!("unknown budget unit `{other}`"),
    }
}

fn solver_config(
    budget: Option<&str>,
    nodes: Option<u64>,
    workers: usize,
) -> anyhow::Result<SolverConfig> {
    let mut cfg = SolverConfig {
        node_budget: nodes,
        workers: workers.max(1),
        ..SolverConfig::default()
    };
    if let Some(b) = budget {
        cfg.time_budget = Some(parse_budget(b)?);
    }
    Ok(cfg)
}

/// Missing family parameters are usage errors (exit code 2), like any other
/// bad flag combination.
fn require(value: Option<usize>, flag: &str, family: &str) -> usize {
    value.unwrap_or_else(|| {
        clap::Error::raw(
            clap::error::ErrorKind::MissingRequiredArgument,
            format!("--{flag} is required for --family {family}\n"),
        )
        .exit()
    })
}

fn gen(args: GenArgs) -> anyhow::Result<()> {
    let mut marks: BTreeMap<String, VertexLabel> = BTreeMap::new();
    let graph = match args.family {
        Family::Bt => {
            let k = require(args.k, "k", "bt");
            let bt = bcast_core::families::binomial_tree(k)?;
            marks.insert("root".into(), bt.root.clone());
            for (i, l) in bt.leaves.iter().enumerate() {
                marks.insert(format!("leaf:{i}"), l.clone());
            }
            bt.graph
        }
        Family::Pruned => {
            let k = require(args.k, "k", "pruned");
            let i = require(args.i, "i", "pruned");
            let t = bcast_core::families::pruned_binomial(k, i)?;
            marks.insert("root".into(), t.root.clone());
            for (j, b) in t.branch_roots.iter().enumerate() {
                marks.insert(format!("branch:{j}"), b.clone());
            }
            t.graph
        }
        Family::Knodel => {
            let n = require(args.n, "n", "knodel");
            bcast_core::families::knodel(n)?.graph
        }
        Family::Star => {
            let m = require(args.m, "m", "star");
            let (g, c) = bcast_core::families::star(m)?;
            marks.insert("star_center".into(), c);
            g
        }
        Family::Path => {
            let m = require(args.m, "m", "path");
            let (g, a, b) = bcast_core::families::path(m)?;
            marks.insert("path:first".into(), a);
            marks.insert("path_end".into(), b);
            g
        }
        Family::RandomTree => {
            let n = require(args.n, "n", "random-tree");
            let mut rng = bcast_core::catalog::SplitMix::new(args.seed);
            let (g, root) = bcast_core::catalog::random_rooted_tree(n, &mut rng);
            marks.insert("root".into(), root);
            g
        }
        Family::RandomGraph => {
            let n = require(args.n, "n", "random-graph");
            let mut rng = bcast_core::catalog::SplitMix::new(args.seed);
            bcast_core::catalog::random_connected_graphs(1, n, n, &mut rng)
                .pop()
                .expect("one graph requested")
        }
    };
    write(&args.out, &io::graph_to_json(&graph, &marks))?;
    if let Some(dot) = &args.dot {
        write(dot, &io::to_dot(&graph, &marks))?;
    }
    println!(
        "wrote {} ({} vertices, {} edges)",
        args.out.display(),
        graph.vertex_count(),
        graph.edge_count()
    );
    Ok(())
}

fn write_artifact(args: &ReduceArgs, art: &ReductionArtifact) -> anyhow::Result<PathBuf> {
    write(&args.out, &io::graph_to_json(&art.graph, &art.marks))?;
    let params_path = args
        .params
        .clone()
        .unwrap_or_else(|| args.out.with_extension("params.json"));
    write(
        &params_path,
        &serde_json::to_string_pretty(&ParamsDoc::from_artifact(art))?,
    )?;
    if let Some(dot) = &args.dot {
        write(dot, &io::to_dot(&art.graph, &art.marks))?;
    }
    for w in &art.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "wrote {} ({} vertices, {} edges) and {}",
        args.out.display(),
        art.graph.vertex_count(),
        art.graph.edge_count(),
        params_path.display()
    );
    Ok(params_path)
}

fn reduce(args: ReduceArgs) -> anyhow::Result<()> {
    match args.from {
        ReduceFrom::ThreeDm => {
            let doc: ThreeDmDoc = serde_json::from_str(&read(&args.input)?)
                .with_context(|| "parsing 3DM instance document")?;
            let inst = doc.to_instance()?;
            let art = stbt_from_3dm(&inst)?;
            write_artifact(&args, &art)?;
            if let Some(cert) = &args.emit_certificate {
                let matching: std::collections::BTreeSet<usize> = match &args.witness {
                    Some(path) => serde_json::from_str(&read(path)?)
                        .with_context(|| "parsing matching witness (JSON array of indices)")?,
                    None => solve_3dm(&inst, &OracleConfig::default())?
                        .ok_or_else(|| anyhow!("no matching exists; cannot certify"))?
                        .into_iter()
                        .collect(),
                };
                let scheme = stbt_yes_scheme(&art, &inst, &matching)?;
                let round = validate_scheme(&art.graph, &scheme)?;
                write(cert, &io::scheme_to_json(&scheme))?;
                println!("certificate validates at round {round}");
            }
        }
        ReduceFrom::Stbt => {
            let (g_s, marks) = load_graph(&args.input)?;
            let v_s = marks
                .get("originator")
                .ok_or_else(|| anyhow!("input graph needs an `originator` mark"))?
                .clone();
            let art = bg_from_stbt(&g_s, &v_s)?;
            write_artifact(&args, &art)?;
            if let Some(cert) = &args.emit_certificate {
                let inner: BroadcastScheme = match &args.witness {
                    Some(path) => io::scheme_from_json(&read(path)?)?,
                    None => {
                        let r = broadcast_time_from(&g_s, &v_s, &SolverConfig::default())?;
                        r.witness
                            .ok_or_else(|| anyhow!("solver could not certify the source"))?
                    }
                };
                let origin = match &args.certificate_origin {
                    Some(text) => VertexLabel::parse(text)?,
                    None => v_s.clone(),
                };
                let scheme = bg_yes_scheme(&art, &origin, &inner)?;
                let round = validate_scheme(&art.graph, &scheme)?;
                write(cert, &io::scheme_to_json(&scheme))?;
                println!("certificate from {origin} validates at round {round}");
            }
        }
        ReduceFrom::Usat => {
            let phi = parse_dimacs(&read(&args.input)?)?;
            let art = bcsize_from_usat(&phi)?;
            write_artifact(&args, &art)?;
            if let Some(cert) = &args.emit_certificate {
                let assignment: Option<Vec<bool>> = match &args.witness {
                    Some(path) => Some(
                        serde_json::from_str(&read(path)?)
                            .with_context(|| "parsing assignment witness (JSON array of bools)")?,
                    ),
                    None => match sat_classify(&phi, &OracleConfig::default())? {
                        SatClass::Unique(a) => Some(a),
                        SatClass::Unsat | SatClass::Multiple => None,
                    },
                };
                let origin = match &args.certificate_origin {
                    Some(text) => VertexLabel::parse(text)?,
                    None => art.mark("star_center")?.clone(),
                };
                let scheme = bcsize_origin_scheme(&art, &origin, assignment.as_deref())?;
                let round = validate_scheme(&art.graph, &scheme)?;
                write(cert, &io::scheme_to_json(&scheme))?;
                println!("certificate from {origin} validates at round {round}");
            }
        }
    }
    Ok(())
}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let (graph, _) = load_graph(&args.graph)?;
    let origin = VertexLabel::parse(&args.from)?;
    let cfg = solver_config(args.budget.as_deref(), args.budget_nodes, args.workers)?;
    let result = broadcast_time_from(&graph, &origin, &cfg)?;
    println!(
        "status={:?} time={} proven_lower={}",
        result.status, result.time, result.proven_lower
    );
    if let Some(out) = &args.out {
        write(out, &serde_json::to_string_pretty(&result)?)?;
    }
    Ok(())
}

fn center(args: CenterArgs) -> anyhow::Result<()> {
    let (graph, _) = load_graph(&args.graph)?;
    let cfg = solver_config(args.budget.as_deref(), args.budget_nodes, args.workers)?;
    let result = broadcast_center(&graph, &cfg)?;
    println!(
        "min_time={} members={}",
        result.min_time,
        result
            .members
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    if let Some(out) = &args.out {
        write(out, &serde_json::to_string_pretty(&result)?)?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> anyhow::Result<()> {
    let (graph, _) = load_graph(&args.graph)?;
    let scheme = io::scheme_from_json(&read(&args.scheme)?)?;
    let round = validate_scheme(&graph, &scheme)?;
    println!("{round}");
    Ok(())
}

fn oracle(args: OracleArgs) -> anyhow::Result<()> {
    let (graph, _) = load_graph(&args.graph)?;
    let mut origins = std::collections::BTreeSet::new();
    if let Some(from) = &args.from {
        origins.insert(VertexLabel::parse(from)?);
    }
    if let Some(list) = &args.origins {
        for item in list.split(',') {
            origins.insert(VertexLabel::parse(item.trim())?);
        }
    }
    if origins.is_empty() {
        bail!("pass --from or --origins");
    }
    let mut cfg = OracleConfig::default();
    if let Some(cap) = args.max_vertices {
        cfg.max_vertices = cap;
    }
    let t = oracle_broadcast_time(&graph, &origins, &cfg)?;
    println!("{t}");
    Ok(())
}
