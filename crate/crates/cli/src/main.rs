use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use regsep::baselines::{BruteError, DEFAULT_STRATEGY_BOUND};
use regsep::suites::{run_suite, select, SuiteConfig};
use regsep::{
    brute_force_winner, count_states_r, count_states_s, gen_random, parse_game, render_game, rn,
    solve_spm, solve_with_registers, solve_with_safety, solve_zielonka, GameGraph, GenSpec, Player,
    Priority, ProductError, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(
    name = "regsep",
    version,
    about = "Solve parity games with register-based separating automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game file.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::SafetyProduct)]
        algorithm: Algorithm,
        /// Product node cap.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Solve once from every node instead of only the start node.
        #[arg(long)]
        all_starts: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print random games.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Priority,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Expected out-degree.
        #[arg(long, default_value_t = 2.0)]
        density: f64,
        /// Write `game-<i>.pg` files here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suites.
    Check {
        /// A suite name, `sizes`, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Register and state counts, and product size bounds.
    Stats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Priority,
        /// Edge count of the hypothetical game; defaults to 2n.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve a random corpus with several solvers in parallel.
    Bench {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: Priority,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::All)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    SafetyProduct,
    ParityProduct,
    Zielonka,
    Spm,
    Brute,
    All,
}

impl Algorithm {
    const SOLVERS: [Algorithm; 5] = [
        Algorithm::SafetyProduct,
        Algorithm::ParityProduct,
        Algorithm::Zielonka,
        Algorithm::Spm,
        Algorithm::Brute,
    ];

    fn expand(self) -> Vec<Algorithm> {
        match self {
            Algorithm::All => Self::SOLVERS.to_vec(),
            a => vec![a],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Algorithm::SafetyProduct => "safety-product",
            Algorithm::ParityProduct => "parity-product",
            Algorithm::Zielonka => "zielonka",
            Algorithm::Spm => "spm",
            Algorithm::Brute => "brute",
            Algorithm::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

/// An error with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

const EXIT_PARSE: u8 = 2;
const EXIT_CAP: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            path,
            algorithm,
            cap,
            all_starts,
            format,
        } => solve(&path, algorithm, cap, all_starts, format),
        Command::Gen {
            n,
            d,
            seed,
            count,
            density,
            out,
        } => gen(n, d, seed, count, density, out.as_deref()),
        Command::Check { suite, seed, cap } => check(&suite, seed, cap),
        Command::Stats { n, d, m, format } => stats(n, d, m.unwrap_or(2 * n), format),
        Command::Bench {
            n,
            d,
            seed,
            count,
            algorithm,
            cap,
            format,
        } => bench(n, d, seed, count, algorithm, cap, format),
    }
}

struct Record {
    game: Option<usize>,
    start: Option<usize>,
    solver: Algorithm,
    outcome: Result<Solved, Failure>,
}

struct Solved {
    winner: Player,
    /// Zero for solvers that build no product.
    product_nodes: usize,
    product_edges: usize,
    wall_time: f64,
}

fn solve_one(g: &GameGraph, solver: Algorithm, cap: usize) -> Result<Solved, Failure> {
    let started = Instant::now();
    let product = |r: Result<regsep::ProductSolve, ProductError>| match r {
        Ok(s) => Ok((s.winner, s.product_nodes, s.product_edges)),
        Err(e @ ProductError::ResourceLimit { .. }) => Err(Failure::new(EXIT_CAP, e)),
        Err(e) => Err(Failure::new(1, e)),
    };
    let (winner, product_nodes, product_edges) = match solver {
        Algorithm::SafetyProduct => product(solve_with_safety(g, cap))?,
        Algorithm::ParityProduct => product(solve_with_registers(g, cap))?,
        Algorithm::Zielonka => (solve_zielonka(g), 0, 0),
        Algorithm::Spm => (solve_spm(g), 0, 0),
        Algorithm::Brute => match brute_force_winner(g, DEFAULT_STRATEGY_BOUND) {
            Ok(w) => (w, 0, 0),
            Err(e @ BruteError { .. }) => return Err(Failure::new(EXIT_CAP, e)),
        },
        Algorithm::All => unreachable!("expanded before solving"),
    };
    Ok(Solved {
        winner,
        product_nodes,
        product_edges,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

impl Record {
    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Records => {
                if let Some(g) = self.game {
                    let _ = write!(out, "game={g} ");
                }
                if let Some(s) = self.start {
                    let _ = write!(out, "start={s} ");
                }
                let _ = write!(out, "solver={}", self.solver.name());
                match &self.outcome {
                    Ok(s) => {
                        let _ = write!(
                            out,
                            " winner={} product_nodes={} product_edges={} wall_time={:.6}",
                            s.winner, s.product_nodes, s.product_edges, s.wall_time
                        );
                    }
                    Err(f) => {
                        let kind = if f.code == EXIT_CAP { "cap" } else { "failed" };
                        let _ = write!(out, " error={kind}");
                    }
                }
            }
            Format::Text => {
                if let Some(g) = self.game {
                    let _ = write!(out, "game {g:>4}  ");
                }
                if let Some(s) = self.start {
                    let _ = write!(out, "start {s:>3}  ");
                }
                let _ = write!(out, "{:<16}", self.solver.name());
                match &self.outcome {
                    Ok(s) => {
                        let _ = write!(out, "winner: {}", s.winner);
                        if s.product_nodes > 0 {
                            let _ = write!(
                                out,
                                "  product: {} nodes, {} edges",
                                s.product_nodes, s.product_edges
                            );
                        }
                        let _ = write!(out, "  time: {:.3} ms", s.wall_time * 1e3);
                    }
                    Err(f) => {
                        let _ = write!(out, "error: {:#}", f.error);
                    }
                }
            }
        }
        out
    }
}

fn read_game(path: &Path) -> Result<GameGraph, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_game(&text).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            anyhow!(e).context(format!("{}", path.display())),
        )
    })
}

/// Exit status for a batch of records: the first failure's status, or 1 if
/// solvers disagree on some instance.
fn verdict(records: Vec<Record>) -> Result<(), Failure> {
    let mut winners: BTreeMap<(Option<usize>, Option<usize>), Player> = BTreeMap::new();
    let mut disagreements = BTreeSet::new();
    for r in records {
        let s = r.outcome?;
        let key = (r.game, r.start);
        if *winners.entry(key).or_insert(s.winner) != s.winner {
            disagreements.insert(r.game.or(r.start).unwrap_or(0));
        }
    }
    if !disagreements.is_empty() {
        return Err(anyhow!("solvers disagree on {disagreements:?}").into());
    }
    Ok(())
}

fn solve(
    path: &Path,
    algorithm: Algorithm,
    cap: usize,
    all_starts: bool,
    format: Format,
) -> Result<(), Failure> {
    let g = read_game(path)?;
    let starts: Vec<Option<usize>> = if all_starts {
        g.nodes().map(Some).collect()
    } else {
        vec![None]
    };
    let mut records = Vec::new();
    for start in starts {
        let game = match start {
            Some(v) => g.with_start(v).map_err(anyhow::Error::from)?,
            None => g.clone(),
        };
        for solver in algorithm.expand() {
            records.push(Record {
                game: None,
                start,
                solver,
                outcome: solve_one(&game, solver, cap),
            });
        }
    }
    for r in &records {
        println!("{}", r.render(format));
    }
    verdict(records)
}

fn gen(
    n: usize,
    d: Priority,
    seed: u64,
    count: usize,
    density: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if n == 0 || d == 0 {
        return Err(Failure::new(
            EXIT_PARSE,
            anyhow!("--n and --d must be positive"),
        ));
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    for i in 0..count {
        let spec = GenSpec {
            density,
            ..GenSpec::new(n, d, seed.wrapping_add(i as u64))
        };
        let text = render_game(&gen_random(&spec));
        match out {
            Some(dir) => {
                let path = dir.join(format!("game-{i}.pg"));
                std::fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            None => {
                if count > 1 {
                    println!("# game {i}");
                }
                print!("{text}");
            }
        }
    }
    Ok(())
}

fn check(suite: &str, seed: Option<u64>, cap: usize) -> Result<(), Failure> {
    let names = select(suite);
    if names.is_empty() {
        return Err(Failure::new(EXIT_PARSE, anyhow!("unknown suite {suite:?}")));
    }
    let mut cfg = SuiteConfig {
        cap,
        ..SuiteConfig::default()
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let mut failed = 0;
    for name in names {
        let report = run_suite(name, &cfg).expect("selected suites exist");
        println!("{}", report.line());
        if !report.passed {
            for line in report.detail.lines().skip(1) {
                println!("{line}");
            }
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(anyhow!("{failed} suite(s) failed").into());
    }
    Ok(())
}

fn stats(n: usize, d: Priority, m: usize, format: Format) -> Result<(), Failure> {
    if n == 0 || d == 0 {
        return Err(Failure::new(
            EXIT_PARSE,
            anyhow!("--n and --d must be positive"),
        ));
    }
    let overflow = |what: &str| anyhow!("{what} overflows 128 bits");
    let registers = rn(n) as u128;
    let eta = count_states_r(n, d).map_err(|_| overflow("eta"))?;
    let xi = count_states_s(n, d).map_err(|_| overflow("xi"))?;
    let (n128, m128) = (n as u128, m as u128);
    let mul = |a: u128, b: u128, what: &str| a.checked_mul(b).ok_or_else(|| overflow(what));
    let nodes_r = mul(n128 + m128, eta, "R product nodes")?;
    let edges_r = mul(
        mul(m128, eta, "R product edges")?,
        registers + 2,
        "R product edges",
    )?;
    let nodes_s = mul(n128 + m128, xi, "S product nodes")?;
    let edges_s = mul(
        mul(m128, xi, "S product edges")?,
        registers + 2,
        "S product edges",
    )?;
    let d_even = d + d % 2;
    match format {
        Format::Records => println!(
            "n={n} d={d_even} m={m} rn={registers} eta={eta} xi={xi} \
             r_product_nodes={nodes_r} r_product_edges={edges_r} \
             s_product_nodes={nodes_s} s_product_edges_max={edges_s}"
        ),
        Format::Text => {
            println!("n = {n}, d = {d_even}, m = {m}");
            println!("registers rn(n)       {registers}");
            println!("R states (eta)        {eta}");
            println!("S states (xi)         {xi}");
            println!("R product nodes       {nodes_r}");
            println!("R product edges       {edges_r}");
            println!("S product nodes       {nodes_s}");
            println!("S product edges, max  {edges_s}");
        }
    }
    Ok(())
}

fn bench(
    n: usize,
    d: Priority,
    seed: u64,
    count: usize,
    algorithm: Algorithm,
    cap: usize,
    format: Format,
) -> Result<(), Failure> {
    if n == 0 || d == 0 {
        return Err(Failure::new(
            EXIT_PARSE,
            anyhow!("--n and --d must be positive"),
        ));
    }
    let solvers = algorithm.expand();
    let mut records: Vec<Record> = (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let g = gen_random(&GenSpec::new(n, d, seed.wrapping_add(i as u64)));
            solvers
                .iter()
                .map(|&solver| Record {
                    game: Some(i),
                    start: None,
                    solver,
                    outcome: solve_one(&g, solver, cap),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    records.sort_by_key(|r| {
        (
            r.game,
            Algorithm::SOLVERS.iter().position(|&a| a == r.solver),
        )
    });
    for r in &records {
        println!("{}", r.render(format));
    }
    if format == Format::Text {
        let mut totals = vec![(0.0, 0usize); solvers.len()];
        for r in &records {
            if let Ok(s) = &r.outcome {
                let i = solvers
                    .iter()
                    .position(|&a| a == r.solver)
                    .expect("bench solver");
                totals[i].0 += s.wall_time;
                totals[i].1 += 1;
            }
        }
        println!("-- totals over {count} games (n = {n}, d = {d}, seed = {seed})");
        for (solver, (time, solved)) in solvers.iter().zip(totals) {
            println!(
                "{:<16}{solved:>6} solved  {:>10.3} ms",
                solver.name(),
                time * 1e3
            );
        }
    }
    verdict(records)
}
