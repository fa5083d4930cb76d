//! `wpg` — solve, check, generate, and benchmark window parity and
//! parity-response games.
//!
//! Exit codes: `solve` returns 0 when the start vertex is winning for P1
//! and 1 when it is winning for P2; `check` returns 0 when the strategy
//! verifies and 1 when it does not; any error exits with 2.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use wpg::format::{
    game_to_dot, game_to_json, lasso_to_text, parse_game_auto, serialize_game,
};
use wpg::game::{GameStructure, Objective, ObjectiveKind, Player, VertexId};
use wpg::generators::{gen_fig1, gen_fig2, gen_fig3, gen_random};
use wpg::product::{GameSolve, SolveOptions, DEFAULT_PRODUCT_CAP};
use wpg::strategy::{lift_from_solve, verify_winning, MooreMachine};

#[derive(Parser)]
#[command(
    name = "wpg",
    version,
    about = "Solver for two-player games with window parity and parity-response objectives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game and report the winner of every vertex.
    Solve(SolveArgs),
    /// Verify a strategy machine from a start vertex.
    Check(CheckArgs),
    /// Emit a built-in game family.
    Gen(GenArgs),
    /// Solve a family across a size range and print CSV measurements.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ObjectiveArgs {
    /// One of: parity, dirfixpr, fixpr, dirfixwp, fixwp, dirbndpr, bndpr,
    /// dirbndwp, bndwp.
    #[arg(long)]
    objective: String,
    /// Window size / bound; required exactly for the fix* objectives.
    #[arg(long)]
    lambda: Option<u64>,
}

impl ObjectiveArgs {
    fn parse(&self) -> Result<Objective> {
        let kind: ObjectiveKind = self
            .objective
            .parse()
            .map_err(|e| anyhow!("{e}"))?;
        Objective::new(kind, self.lambda).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Game file, text or JSON.
    game: PathBuf,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Start vertex.
    #[arg(long, default_value_t = 0)]
    from: VertexId,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Write the P1 strategy machine as JSON to this path.
    #[arg(long)]
    strategy_out: Option<PathBuf>,
    /// Write a DOT rendering of the solved product arena (the base arena
    /// for parity) to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Cap on materialized product vertices.
    #[arg(long, default_value_t = DEFAULT_PRODUCT_CAP)]
    max_product: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Game file, text or JSON.
    game: PathBuf,
    /// Strategy machine JSON produced by `solve --strategy-out`.
    strategy: PathBuf,
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long, default_value_t = 0)]
    from: VertexId,
    #[arg(long, default_value_t = DEFAULT_PRODUCT_CAP)]
    max_product: usize,
}

#[derive(Args)]
struct GenArgs {
    /// Family: fig1, fig2, fig3, or random.
    family: String,
    /// Chain length for fig3 (the game has 6n vertices and 2n dimensions).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Vertex count for the random family.
    #[arg(long, default_value_t = 10)]
    vertices: usize,
    /// Out-degree range for the random family, as LO:HI.
    #[arg(long, default_value = "1:3")]
    degree: String,
    #[arg(long, default_value_t = 1)]
    dims: usize,
    #[arg(long, default_value_t = 4)]
    max_priority: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the JSON mirror instead of the text format.
    #[arg(long)]
    json: bool,
    /// Also write a DOT rendering to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the game here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Family: fig3 or random.
    #[arg(long)]
    family: String,
    /// Size range as LO:HI or LO:HI:STEP (fig3: n; random: vertices).
    #[arg(long)]
    sizes: String,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Fixed bound for the random family; fig3 defaults to 3n.
    #[arg(long, default_value = "1:3")]
    degree: String,
    #[arg(long, default_value_t = 1)]
    dims: usize,
    #[arg(long, default_value_t = 4)]
    max_priority: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRODUCT_CAP)]
    max_product: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Bench(args) => cmd_bench(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_game(path: &Path) -> Result<GameStructure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_game_auto(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn game_hash(g: &GameStructure) -> String {
    let digest = Sha256::digest(serialize_game(g).as_bytes());
    let mut out = String::new();
    for byte in digest.iter().take(8) {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GameInfo {
    hash: String,
    vertices: usize,
    edges: usize,
    dims: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SolveReport {
    game: GameInfo,
    objective: String,
    lambda: Option<u64>,
    from: VertexId,
    winner: u8,
    winners: Vec<u8>,
    product_vertices: usize,
    reachable_bad: usize,
    wall_ms: f64,
    strategy: Option<String>,
}

fn build_report(
    g: &GameStructure,
    objective: &Objective,
    solve: &GameSolve,
    from: VertexId,
    wall_ms: f64,
    strategy: Option<String>,
) -> SolveReport {
    let (product_vertices, reachable_bad) = match &solve.product {
        Some(ps) => (ps.product.num_vertices(), ps.product.reachable_bad_count()),
        None => (g.num_vertices(), 0),
    };
    SolveReport {
        game: GameInfo {
            hash: game_hash(g),
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            dims: g.dims(),
        },
        objective: objective.kind().name().to_string(),
        lambda: solve.lambda_used,
        from,
        winner: if solve.base_win1.contains(from) { 1 } else { 2 },
        winners: (0..g.num_vertices())
            .map(|v| if solve.base_win1.contains(v) { 1 } else { 2 })
            .collect(),
        product_vertices,
        reachable_bad,
        wall_ms,
        strategy,
    }
}

fn print_report(g: &GameStructure, report: &SolveReport) {
    println!(
        "game      : {} ({} vertices, {} edges, {} dimension{})",
        report.game.hash,
        report.game.vertices,
        report.game.edges,
        report.game.dims,
        if report.game.dims == 1 { "" } else { "s" }
    );
    match report.lambda {
        Some(l) => println!("objective : {} (lambda {})", report.objective, l),
        None => println!("objective : {}", report.objective),
    }
    println!(
        "product   : {} vertices, {} bad",
        report.product_vertices, report.reachable_bad
    );
    println!("time      : {:.3} ms", report.wall_ms);
    if let Some(path) = &report.strategy {
        println!("strategy  : {path}");
    }
    println!("winner from vertex {}: P{}", report.from, report.winner);
    println!("vertex  winner");
    for (v, w) in report.winners.iter().enumerate() {
        match g.name(v) {
            Some(name) => println!("{v:<7} {w}  # {name}"),
            None => println!("{v:<7} {w}"),
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let g = load_game(&args.game)?;
    let objective = args.objective.parse()?;
    if args.from >= g.num_vertices() {
        bail!("start vertex {} outside the game", args.from);
    }
    let options = SolveOptions {
        max_product_vertices: args.max_product,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let solve = wpg::product::solve_objective(&g, &objective, &options)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let strategy = match &args.strategy_out {
        Some(path) => {
            let machine = lift_from_solve(&g, &objective, &solve, Player::P1)?;
            std::fs::write(path, machine.to_json())
                .with_context(|| format!("writing {}", path.display()))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    if let Some(path) = &args.dot {
        let dot = match &solve.product {
            Some(ps) => ps.product.to_dot(&g),
            None => game_to_dot(&g),
        };
        std::fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?;
    }

    let report = build_report(&g, &objective, &solve, args.from, wall_ms, strategy);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_report(&g, &report);
    }
    Ok(if report.winner == 1 { 0 } else { 1 })
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    let g = load_game(&args.game)?;
    let objective = args.objective.parse()?;
    if args.from >= g.num_vertices() {
        bail!("start vertex {} outside the game", args.from);
    }
    let text = std::fs::read_to_string(&args.strategy)
        .with_context(|| format!("reading {}", args.strategy.display()))?;
    let machine = MooreMachine::from_json(&text).map_err(|e| anyhow!("{e}"))?;
    let options = SolveOptions {
        max_product_vertices: args.max_product,
        ..SolveOptions::default()
    };
    let verdict = verify_winning(&g, &objective, &machine, args.from, &options)?;
    if verdict.winning {
        println!(
            "true: the machine wins {} from vertex {}",
            verdict.checked, args.from
        );
        Ok(0)
    } else {
        println!(
            "false: the machine does not win {} from vertex {}",
            verdict.checked, args.from
        );
        if let Some(cex) = verdict.counterexample {
            println!("counterexample: {}", lasso_to_text(&cex));
        }
        Ok(1)
    }
}

fn parse_range(text: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| anyhow!("bad range component `{s}`"))
    };
    match parts.as_slice() {
        [lo, hi] => Ok((parse(lo)?, parse(hi)?, 1)),
        [lo, hi, step] => {
            let step = parse(step)?;
            if step == 0 {
                bail!("range step must be positive");
            }
            Ok((parse(lo)?, parse(hi)?, step))
        }
        _ => bail!("expected LO:HI or LO:HI:STEP, got `{text}`"),
    }
}

fn parse_degree(text: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi, _) = parse_range(text)?;
    if lo == 0 {
        bail!("out-degree must be at least 1");
    }
    Ok(lo..=hi)
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let g = match args.family.as_str() {
        "fig1" => gen_fig1(),
        "fig2" => gen_fig2(),
        "fig3" => {
            if args.n == 0 {
                bail!("fig3 needs --n of at least 1");
            }
            gen_fig3(args.n)
        }
        "random" => {
            if args.vertices == 0 || args.dims == 0 {
                bail!("random family needs positive --vertices and --dims");
            }
            gen_random(
                args.vertices,
                parse_degree(&args.degree)?,
                args.dims,
                args.max_priority,
                args.seed,
            )
        }
        other => bail!("unknown family `{other}` (expected fig1, fig2, fig3, or random)"),
    };
    let body = if args.json {
        game_to_json(&g)
    } else {
        serialize_game(&g)
    };
    match &args.output {
        Some(path) => std::fs::write(path, body)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    if let Some(path) = &args.dot {
        std::fs::write(path, game_to_dot(&g))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let objective_kind: ObjectiveKind = args
        .objective
        .objective
        .parse()
        .map_err(|e| anyhow!("{e}"))?;
    let (lo, hi, step) = parse_range(&args.sizes)?;
    let options = SolveOptions {
        max_product_vertices: args.max_product,
        ..SolveOptions::default()
    };
    println!("size,vertices,edges,lambda,product_vertices,reachable_bad,time_ms,start_winner");
    let mut size = lo;
    while size <= hi {
        let (g, default_lambda) = match args.family.as_str() {
            "fig3" => (gen_fig3(size), Some(3 * size as u64)),
            "random" => (
                gen_random(
                    size,
                    parse_degree(&args.degree)?,
                    args.dims,
                    args.max_priority,
                    args.seed.wrapping_add(size as u64),
                ),
                None,
            ),
            other => bail!("unknown bench family `{other}` (expected fig3 or random)"),
        };
        let objective = if objective_kind.is_fixed() {
            let lambda = args
                .objective
                .lambda
                .or(default_lambda)
                .ok_or_else(|| anyhow!("--lambda required for {objective_kind}"))?;
            Objective::new(objective_kind, Some(lambda)).map_err(|e| anyhow!("{e}"))?
        } else {
            Objective::new(objective_kind, args.objective.lambda).map_err(|e| anyhow!("{e}"))?
        };
        let start = Instant::now();
        let solve = wpg::product::solve_objective(&g, &objective, &options)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let (product_vertices, bad) = match &solve.product {
            Some(ps) => (ps.product.num_vertices(), ps.product.reachable_bad_count()),
            None => (g.num_vertices(), 0),
        };
        println!(
            "{size},{},{},{},{product_vertices},{bad},{wall_ms:.3},{}",
            g.num_vertices(),
            g.num_edges(),
            solve.lambda_used.map(|l| l.to_string()).unwrap_or_default(),
            if solve.base_win1.contains(0) { 1 } else { 2 }
        );
        if step == 0 {
            break;
        }
        size += step;
    }
    Ok(0)
}
