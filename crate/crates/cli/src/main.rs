use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use compat_core::arrangement::{ArrangementInstance, MoveSequence};
use compat_core::gen::{random_instance, Rng};
use compat_core::model::undirected_union;
use compat_core::modular::{solve_modular, ModularDecomposition};
use compat_core::ramp::{
    random_scene, reduce_to_2co, render_svg, schedule_from_solution, verify_schedule, Scene,
    Schedule, EPSILON,
};
use compat_core::reductions::{
    reduce_mis, reduce_ncl, reduce_sat_acyclic, reduce_sat_planar, reduce_sat_reversed, CnfFormula,
    ConstraintGraph, PartitionedGraph,
};
use compat_core::treewidth::{
    heuristic_td_bounded, make_nice, parse_pace, read_td_json, solve_treewidth, TreeDecomposition,
};
use compat_core::{
    find_trivial_pair, solve_bfs, solve_bounded_with, solve_exact_with, solve_k1, verify_direct,
    verify_sequence, Error, ExactOptions, Instance, LabeledOrdering, SolveOutcome,
};

/// Widest heuristic decomposition `--method auto` hands to the treewidth solver.
const AUTO_WIDTH: usize = 4;

#[derive(Parser)]
#[command(
    name = "compat",
    about = "k-compatible ordering toolkit",
    disable_version_flag = true
)]
struct Cli {
    /// Worker threads for parallel solvers.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Suppress log lines on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print the tool version and every file schema.
    #[arg(long)]
    version: bool,
    #[command(subcommand)]
    command: Option<Group>,
}

#[derive(Subcommand)]
enum Group {
    /// Compatible orderings.
    #[command(subcommand)]
    Co(CoCmd),
    /// Set arrangements.
    #[command(subcommand)]
    Arr(ArrCmd),
    /// Single-move arm planning.
    #[command(subcommand)]
    Ramp(RampCmd),
    /// Seeded generators.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Brute,
    K1,
    Trivial,
    Treewidth,
    Modular,
}

#[derive(Subcommand)]
enum CoCmd {
    Solve(SolveArgs),
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        /// Only constrain the vertices that appear in the solution.
        #[arg(long)]
        partial: bool,
    },
    /// Writes the reduced instance to stdout.
    Reduce {
        kind: ReduceKind,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Minimum ordering size (brute force only).
    #[arg(long)]
    bound: Option<usize>,
    /// Search-node budget (brute force only); exhausting it exits with 3.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Tree decomposition, PACE `.td` or JSON.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Vertex names for PACE ids, one per line.
    #[arg(long)]
    td_names: Option<PathBuf>,
    /// Modular decomposition JSON.
    #[arg(long)]
    md: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    SatPlanar,
    SatAcyclic,
    SatReversed,
    Mis,
    Ncl,
}

#[derive(Subcommand)]
enum ArrCmd {
    Solve {
        #[arg(long)]
        instance: PathBuf,
    },
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        moves: PathBuf,
    },
}

#[derive(Subcommand)]
enum RampCmd {
    Reduce {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = EPSILON)]
        epsilon: f64,
    },
    Solve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = EPSILON)]
        epsilon: f64,
    },
    Verify {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, default_value_t = EPSILON)]
        epsilon: f64,
    },
    /// SVG to `--out`, or to stdout without it.
    Render {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Instance,
    Scene,
}

#[derive(Subcommand)]
enum GenCmd {
    Random {
        #[arg(long, value_enum, default_value_t = GenKind::Instance)]
        kind: GenKind,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0.2)]
        arc_density: f64,
        /// Side of the square holding arm centers.
        #[arg(long, default_value_t = 1.5)]
        spread: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Answer class, mapped to the process exit code.
#[derive(Clone, Copy)]
enum Status {
    Yes,
    No,
    Unknown,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Yes => 0,
            Status::No => 1,
            Status::Unknown => 3,
        }
    }
}

struct Reply {
    status: Status,
    body: Value,
}

impl Reply {
    fn yes(body: Value) -> Self {
        Reply {
            status: Status::Yes,
            body,
        }
    }

    fn no(body: Value) -> Self {
        Reply {
            status: Status::No,
            body,
        }
    }

    fn unknown(body: Value) -> Self {
        Reply {
            status: Status::Unknown,
            body,
        }
    }
}

struct Log {
    quiet: bool,
}

impl Log {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Instance::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn solution_reply(method: &str, sol: LabeledOrdering, extra: Value) -> Reply {
    let mut body = json!({ "result": "yes", "method": method, "solution": sol });
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    Reply::yes(body)
}

fn outcome_reply(method: &str, out: SolveOutcome) -> Reply {
    match out {
        SolveOutcome::Solved(sol) => solution_reply(method, sol, json!({})),
        SolveOutcome::NoSolution => Reply::no(json!({ "result": "no" })),
        SolveOutcome::Unknown => Reply::unknown(json!({ "result": "unknown", "method": method })),
    }
}

/// A no carries only `extra` besides the result, so it reads `{"result":"no"}`
/// for most methods.
fn option_reply(method: &str, sol: Option<LabeledOrdering>, extra: Value) -> Reply {
    match sol {
        Some(sol) => solution_reply(method, sol, extra),
        None => {
            let mut body = json!({ "result": "no" });
            if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
                b.extend(e);
            }
            Reply::no(body)
        }
    }
}

fn load_td(args: &SolveArgs, inst: &Instance, path: &Path) -> Result<TreeDecomposition> {
    let text = read(path)?;
    let td = if text.trim_start().starts_with('{') {
        read_td_json(&text, inst.vertices())?
    } else {
        let names: Option<Vec<String>> = match &args.td_names {
            Some(p) => Some(
                read(p)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect(),
            ),
            None => None,
        };
        parse_pace(&text, inst.vertices(), names.as_deref())?
    };
    Ok(td)
}

fn solve_by_treewidth(inst: &Instance, td: TreeDecomposition, log: &Log) -> Result<Reply> {
    let width = td.width();
    log.info(format!("tree decomposition width {width}"));
    let ntd = make_nice(&td)?;
    let sol = solve_treewidth(inst, &ntd)?;
    Ok(option_reply("treewidth", sol, json!({ "width": width })))
}

fn brute(inst: &Instance, args: &SolveArgs) -> Reply {
    let opts = ExactOptions {
        max_nodes: args.max_nodes,
        ..ExactOptions::default()
    };
    match args.bound {
        Some(b) => outcome_reply("brute", solve_bounded_with(inst, b, &opts)),
        None => outcome_reply("brute", solve_exact_with(inst, &opts)),
    }
}

fn co_solve(args: &SolveArgs, log: &Log) -> Result<Reply> {
    let inst = load_instance(&args.instance)?;
    if args.bound.is_some() && !matches!(args.method, Method::Brute) {
        bail!("--bound is only supported with --method brute");
    }
    match args.method {
        Method::Brute => Ok(brute(&inst, args)),
        Method::K1 => Ok(option_reply("k1", solve_k1(&inst)?, json!({}))),
        Method::Trivial => Ok(match find_trivial_pair(&inst) {
            Some((label, sol)) => solution_reply("trivial", sol, json!({ "label": label })),
            None => Reply::unknown(json!({
                "result": "unknown",
                "method": "trivial",
                "reason": "no label has an acyclic pair union",
            })),
        }),
        Method::Treewidth => {
            let td = match &args.td {
                Some(p) => load_td(args, &inst, p)?,
                None => heuristic_td_bounded(&undirected_union(&inst), usize::MAX)
                    .expect("unbounded heuristic"),
            };
            solve_by_treewidth(&inst, td, log)
        }
        Method::Modular => {
            let path = args.md.as_ref().context("--method modular needs --md")?;
            let md = ModularDecomposition::from_json(&read(path)?)?;
            Ok(option_reply(
                "modular",
                solve_modular(&inst, &md)?,
                json!({}),
            ))
        }
        Method::Auto => {
            if let Some((label, sol)) = find_trivial_pair(&inst) {
                log.info(format!("label {label} has an acyclic pair union"));
                return Ok(solution_reply("trivial", sol, json!({ "label": label })));
            }
            if inst.k() == 1 {
                return Ok(option_reply("k1", solve_k1(&inst)?, json!({})));
            }
            if let Some(td) = heuristic_td_bounded(&undirected_union(&inst), AUTO_WIDTH) {
                match solve_by_treewidth(&inst, td, log) {
                    Ok(r) => return Ok(r),
                    Err(e) => match e.downcast_ref::<Error>() {
                        Some(Error::TooLarge(msg)) => log.info(format!("treewidth skipped: {msg}")),
                        _ => return Err(e),
                    },
                }
            }
            Ok(brute(&inst, args))
        }
    }
}

fn co_verify(instance: &Path, solution: &Path, partial: bool) -> Result<Reply> {
    let inst = load_instance(instance)?;
    let sol = LabeledOrdering::from_json(&read(solution)?)
        .with_context(|| format!("parsing {}", solution.display()))?;
    Ok(match verify_direct(&inst, &sol, !partial) {
        Ok(()) => Reply::yes(json!({ "valid": true })),
        Err(v) => Reply::no(json!({ "valid": false, "violation": v })),
    })
}

fn co_reduce(kind: ReduceKind, input: &Path, log: &Log) -> Result<Reply> {
    let text = read(input)?;
    let body = match kind {
        ReduceKind::SatPlanar | ReduceKind::SatAcyclic | ReduceKind::SatReversed => {
            let f = CnfFormula::from_dimacs(&text)?;
            if !f.is_4_bounded() {
                log.info("formula is not 4-bounded");
            }
            let inst = match kind {
                ReduceKind::SatPlanar => reduce_sat_planar(&f)?.0,
                ReduceKind::SatAcyclic => reduce_sat_acyclic(&f)?.0,
                _ => reduce_sat_reversed(&f)?.0,
            };
            serde_json::to_value(&inst)?
        }
        ReduceKind::Mis => {
            let g = PartitionedGraph::from_json(&text)?;
            let (inst, bound) = reduce_mis(&g)?;
            log.info(format!("solve with --method brute --bound {bound}"));
            serde_json::to_value(&inst)?
        }
        ReduceKind::Ncl => {
            let cg = ConstraintGraph::from_json(&text)?;
            let (inst, _) = reduce_ncl(&cg)?;
            serde_json::from_str(&inst.to_json())?
        }
    };
    Ok(Reply::yes(body))
}

fn load_arrangement(path: &Path) -> Result<ArrangementInstance> {
    ArrangementInstance::from_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
}

fn arr(cmd: &ArrCmd) -> Result<Reply> {
    match cmd {
        ArrCmd::Solve { instance } => {
            let inst = load_arrangement(instance)?;
            Ok(match solve_bfs(&inst)? {
                Some(seq) => Reply::yes(json!({ "result": "yes", "moves": seq })),
                None => Reply::no(json!({ "result": "no" })),
            })
        }
        ArrCmd::Verify { instance, moves } => {
            let inst = load_arrangement(instance)?;
            let seq = MoveSequence::from_json(&read(moves)?)
                .with_context(|| format!("parsing {}", moves.display()))?;
            Ok(match verify_sequence(&inst, &seq) {
                Ok(()) => Reply::yes(json!({ "valid": true })),
                Err(f) => Reply::no(json!({ "valid": false, "fault": f })),
            })
        }
    }
}

fn load_scene(path: &Path) -> Result<Scene> {
    Scene::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn ramp(cmd: &RampCmd, log: &Log) -> Result<Reply> {
    match cmd {
        RampCmd::Reduce { scene, epsilon } => {
            let (inst, _) = reduce_to_2co(&load_scene(scene)?, *epsilon)?;
            Ok(Reply::yes(serde_json::to_value(&inst)?))
        }
        RampCmd::Solve { scene, epsilon } => {
            let scene = load_scene(scene)?;
            if scene.is_degenerate(*epsilon) {
                log.info("scene is within tolerance of a predicate boundary");
            }
            let (inst, map) = reduce_to_2co(&scene, *epsilon)?;
            Ok(match solve_exact_with(&inst, &ExactOptions::default()) {
                SolveOutcome::Solved(sol) => {
                    let sched = schedule_from_solution(&sol, &map)?;
                    Reply::yes(json!({ "result": "yes", "schedule": sched }))
                }
                SolveOutcome::NoSolution => Reply::no(json!({ "result": "no" })),
                SolveOutcome::Unknown => Reply::unknown(json!({ "result": "unknown" })),
            })
        }
        RampCmd::Verify {
            scene,
            schedule,
            epsilon,
        } => {
            let scene = load_scene(scene)?;
            let sched = Schedule::from_json(&read(schedule)?)
                .with_context(|| format!("parsing {}", schedule.display()))?;
            Ok(match verify_schedule(&scene, &sched, *epsilon)? {
                Ok(()) => Reply::yes(json!({ "valid": true })),
                Err(c) => Reply::no(json!({ "valid": false, "collision": c })),
            })
        }
        RampCmd::Render {
            scene,
            schedule,
            out,
        } => {
            let scene = load_scene(scene)?;
            let sched = match schedule {
                Some(p) => Some(Schedule::from_json(&read(p)?)?),
                None => None,
            };
            let svg = render_svg(&scene, sched.as_ref());
            match out {
                Some(p) => {
                    std::fs::write(p, svg).with_context(|| format!("writing {}", p.display()))?;
                    Ok(Reply::yes(json!({ "written": p })))
                }
                None => {
                    print!("{svg}");
                    Ok(Reply::yes(Value::Null))
                }
            }
        }
    }
}

fn gen(cmd: &GenCmd) -> Result<Reply> {
    let GenCmd::Random {
        kind,
        n,
        k,
        arc_density,
        spread,
        seed,
    } = cmd;
    if !(0.0..=1.0).contains(arc_density) {
        bail!("--arc-density must lie in [0, 1]");
    }
    let mut rng = Rng::seeded(*seed);
    let body = match kind {
        GenKind::Instance => {
            if *k == 0 {
                bail!("--k must be at least 1");
            }
            serde_json::to_value(random_instance(&mut rng, *n, *k, *arc_density))?
        }
        GenKind::Scene => {
            serde_json::from_str(&random_scene(&mut rng, *n, *spread, EPSILON).to_json())?
        }
    };
    Ok(Reply::yes(body))
}

fn versions() -> Value {
    use compat_core::{arrangement, model, modular, ramp, treewidth};
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "schemas": {
            "instance": model::INSTANCE_SCHEMA,
            "labeled_ordering": model::ORDERING_SCHEMA,
            "tree_decomposition": treewidth::TD_SCHEMA,
            "modular_decomposition": modular::MD_SCHEMA,
            "arm_scene": ramp::SCENE_SCHEMA,
            "arm_schedule": ramp::SCHEDULE_SCHEMA,
            "arrangement": arrangement::ARRANGEMENT_SCHEMA,
            "move_sequence": arrangement::MOVES_SCHEMA,
            "two_angle_scene": arrangement::TWO_ANGLE_SCHEMA,
            "cnf": "dimacs, exactly 3 literals per clause",
            "pace_td": "pace-2017",
        }
    })
}

fn run(cli: &Cli) -> Result<Reply> {
    let log = Log { quiet: cli.quiet };
    if cli.threads == 0 {
        bail!("--threads must be at least 1");
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .context("starting thread pool")?;
    match &cli.command {
        None if cli.version => Ok(Reply::yes(versions())),
        None => bail!("no command given; see --help"),
        Some(Group::Co(CoCmd::Solve(args))) => co_solve(args, &log),
        Some(Group::Co(CoCmd::Verify {
            instance,
            solution,
            partial,
        })) => co_verify(instance, solution, *partial),
        Some(Group::Co(CoCmd::Reduce { kind, input })) => co_reduce(*kind, input, &log),
        Some(Group::Arr(cmd)) => arr(cmd),
        Some(Group::Ramp(cmd)) => ramp(cmd, &log),
        Some(Group::Gen(cmd)) => gen(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(reply) => {
            if !reply.body.is_null() {
                println!(
                    "{}",
                    serde_json::to_string(&reply.body).expect("json value")
                );
            }
            ExitCode::from(reply.status.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
