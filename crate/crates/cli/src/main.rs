use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qpgame::solver::DEFAULT_BUDGET;
use qpgame::statistics::{
    bound_report, check_trace, count_partial_increasing, extract_even_factorization,
    naive_space_bound, run_trace, PropertyViolation,
};
use qpgame::verification::{
    cross_check, enumerate_solve, zielonka_solve, CrossCheckParams, DEFAULT_ENUMERATION_CAP,
};
use qpgame::{
    generate_random, parse_pgsolver, serialize_pgsolver, solve, GeneratorParams, ParityGame,
    Player, SolveOptions,
};
use serde_json::json;

/// Parity game solver based on play statistics.
#[derive(Parser)]
#[command(name = "qpg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Qp,
    Zielonka,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game in PGSolver format.
    Solve {
        /// Input file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "qp")]
        algorithm: Algorithm,
        /// Statistic index bound (defaults to the smallest k with 2^k > n).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=126))]
        k: Option<u64>,
        /// Compare the result against Zielonka's algorithm (or, for
        /// `--algorithm zielonka`, against the statistics solver).
        #[arg(long)]
        check: bool,
        /// Product-node cap; overrides QPG_BUDGET.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Generate a random game.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_priority: u32,
        #[arg(long, default_value_t = 1)]
        deg_min: usize,
        #[arg(long, default_value_t = 3)]
        deg_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Cross-check the statistics solver against the oracles on random games.
    Verify {
        #[arg(long, default_value_t = 1000)]
        games: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        m_min: u32,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        #[arg(long, default_value_t = 1)]
        deg_min: usize,
        #[arg(long, default_value_t = 3)]
        deg_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        anke_behaviors: usize,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Leave timings out of the report.
        #[arg(long)]
        no_timings: bool,
    },
    /// Tabulate statistic space sizes.
    Count {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_priority: u64,
    },
    /// Show the statistic trace of a priority sequence.
    Trace {
        /// Comma-separated priorities, e.g. `2,3,2`.
        #[arg(long)]
        priorities: String,
        #[arg(long)]
        k: usize,
    },
    /// Time the statistics solver and Zielonka over an n/M grid (CSV).
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        max_priority: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure with a definite exit code.
struct Exit(u8);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<Exit>() {
            Some(Exit(code)) => ExitCode::from(*code),
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}

impl std::fmt::Debug for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Exit {}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve {
            input,
            format,
            algorithm,
            k,
            check,
            budget,
        } => cmd_solve(
            &input,
            format,
            algorithm,
            k.map(|k| k as usize),
            check,
            budget,
        ),
        Command::Gen {
            n,
            max_priority,
            deg_min,
            deg_max,
            seed,
            output,
        } => {
            let game = generate_random(&GeneratorParams::new(
                n,
                max_priority,
                deg_min,
                deg_max,
                seed,
            ))?;
            let text = serialize_pgsolver(&game);
            match output {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => io::stdout().write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Verify {
            games,
            n_min,
            n_max,
            m_min,
            m_max,
            deg_min,
            deg_max,
            seed,
            anke_behaviors,
            report,
            no_timings,
        } => {
            if n_min == 0
                || n_min > n_max
                || m_min == 0
                || m_min > m_max
                || deg_min == 0
                || deg_min > deg_max
            {
                bail!("invalid ranges: need 1 <= n-min <= n-max, 1 <= m-min <= m-max, 1 <= deg-min <= deg-max");
            }
            let params = CrossCheckParams {
                count: games,
                n_min,
                n_max,
                m_min,
                m_max,
                deg_min,
                deg_max,
                seed,
                anke_behaviors,
                enumeration_cap: DEFAULT_ENUMERATION_CAP,
                budget: Some(budget_from_env()?),
            };
            let r = cross_check(&params);
            println!(
                "games {} agree {} enumerated {} bound-violations {} unsound-oracle {} boris-runs {} boris-failures {}",
                r.games_attempted, r.agreements, r.enumerated, r.bound_violations, r.zielonka_unsound, r.boris_runs, r.boris_failures
            );
            if let Some(c) = &r.first_counterexample {
                println!("first disagreement: game {} (seed {})", c.index, c.seed);
                print!("{}", c.minimized);
            }
            if let Some(path) = report {
                fs::write(&path, r.to_json(!no_timings))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if r.passed() {
                Ok(())
            } else {
                Err(Exit(2).into())
            }
        }
        Command::Count { k, max_priority } => cmd_count(k, max_priority),
        Command::Trace { priorities, k } => cmd_trace(&priorities, k),
        Command::Bench {
            n,
            max_priority,
            seed,
        } => cmd_bench(&n, &max_priority, seed),
    }
}

fn budget_from_env() -> Result<usize> {
    match std::env::var("QPG_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("QPG_BUDGET=`{v}` is not a node count")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(input).with_context(|| format!("reading {input}"))
    }
}

fn winners_with(
    game: &ParityGame,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> Result<Vec<Player>> {
    Ok(match algorithm {
        Algorithm::Qp => solve(game, options)?.winners,
        Algorithm::Zielonka => zielonka_solve(game).winners,
        Algorithm::Brute => enumerate_solve(game, DEFAULT_ENUMERATION_CAP)?,
    })
}

fn cmd_solve(
    input: &str,
    format: Format,
    algorithm: Algorithm,
    k: Option<usize>,
    check: bool,
    budget: Option<usize>,
) -> Result<()> {
    let text = read_input(input)?;
    let game = parse_pgsolver(&text)?;
    let violations = game.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        bail!("invalid game: {}", list.join("; "));
    }
    let options = SolveOptions {
        k,
        budget: Some(match budget {
            Some(b) => b,
            None => budget_from_env()?,
        }),
    };

    let (winners, stats) = if algorithm == Algorithm::Qp {
        let r = solve(&game, &options)?;
        (r.winners, Some(r.stats))
    } else {
        (winners_with(&game, algorithm, &options)?, None)
    };

    let mut out = io::stdout().lock();
    for v in game.vertices() {
        let winner = winners[v as usize].parity_name();
        match format {
            Format::Text => writeln!(out, "{v} {winner}")?,
            Format::Json => writeln!(out, "{}", json!({"vertex": v, "winner": winner}))?,
        }
    }
    if let Some(s) = &stats {
        match format {
            Format::Text => writeln!(
                out,
                "k={} product_nodes={} product_edges={} bound_nodes={} bound_edges={}",
                s.k, s.product_nodes, s.product_edges, s.bound_nodes, s.bound_edges
            )?,
            Format::Json => writeln!(out, "{}", serde_json::to_string(s)?)?,
        }
        if !s.within_bounds() {
            eprintln!("internal error: product exceeds its size bounds");
            return Err(Exit(2).into());
        }
    }
    out.flush()?;

    if check {
        let (reference, name) = if algorithm == Algorithm::Zielonka {
            (winners_with(&game, Algorithm::Qp, &options)?, "qp")
        } else {
            (zielonka_solve(&game).winners, "zielonka")
        };
        if let Some(v) = game
            .vertices()
            .find(|&v| reference[v as usize] != winners[v as usize])
        {
            eprintln!(
                "check failed: vertex {v} won by {} but {name} says {}",
                winners[v as usize].parity_name(),
                reference[v as usize].parity_name()
            );
            return Err(Exit(2).into());
        }
    }
    Ok(())
}

fn cmd_count(k: u64, m: u64) -> Result<()> {
    if k == 0 || m == 0 {
        bail!("--k and --max-priority must be at least 1");
    }
    let report = bound_report(k, m);
    println!("i\t|S(i,M)|");
    for i in 0..k {
        println!("{i}\t{}", count_partial_increasing(i, m));
    }
    println!("naive bound (M+1)^k = {}", naive_space_bound(k, m));
    println!("j\tg(j)");
    for (j, g) in report.g.iter().enumerate() {
        println!("{j}\t{g}");
    }
    match report.i_star {
        Some(i) => println!("i_star = {i}"),
        None => println!("i_star = none"),
    }
    Ok(())
}

fn parse_priorities(list: &str) -> Result<Vec<u32>> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|tok| match tok.trim().parse::<u32>() {
            Ok(p) if p >= 1 => Ok(p),
            _ => bail!(
                "malformed priority `{}` (expected integers >= 1)",
                tok.trim()
            ),
        })
        .collect()
}

fn cmd_trace(list: &str, k: usize) -> Result<()> {
    let priorities = parse_priorities(list)?;
    if k > qpgame::statistics::MAX_INDEX {
        bail!("--k must be at most {}", qpgame::statistics::MAX_INDEX);
    }
    let trace = run_trace(&priorities, k);
    print!("{}", trace.dump());
    let bins: Vec<String> = trace.bins().iter().map(ToString::to_string).collect();
    println!("bins {}", bins.join(","));
    match extract_even_factorization(&trace) {
        Ok(f) => println!("factorization {:?}", f.dates()),
        Err(e) => println!("factorization failed: {e}"),
    }
    let violations = check_trace(&trace);
    for law in PropertyViolation::LAWS {
        let broken: Vec<&PropertyViolation> =
            violations.iter().filter(|v| v.law() == law).collect();
        match broken.first() {
            None => println!("check {law}: ok"),
            Some(first) => println!("check {law}: {} violation(s), first: {first}", broken.len()),
        }
    }
    Ok(())
}

fn cmd_bench(ns: &[usize], ms: &[u32], seed: u64) -> Result<()> {
    let budget = budget_from_env()?;
    let cells: Vec<(usize, u32)> = ns
        .iter()
        .flat_map(|&n| ms.iter().map(move |&m| (n, m)))
        .collect();
    if cells.iter().any(|&(n, m)| n == 0 || m == 0) {
        bail!("grid values must be positive");
    }
    let rows: Vec<Result<String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .enumerate()
            .map(|(i, &(n, m))| {
                scope.spawn(move || -> Result<String> {
                    let params = GeneratorParams::new(
                        n,
                        m,
                        1,
                        3.min(n),
                        qpgame::generate::mix_seed(seed, i as u64),
                    );
                    let game = generate_random(&params)?;
                    let t = Instant::now();
                    let r = solve(
                        &game,
                        &SolveOptions {
                            k: None,
                            budget: Some(budget),
                        },
                    )?;
                    let millis = t.elapsed().as_secs_f64() * 1000.0;
                    let t = Instant::now();
                    let z = zielonka_solve(&game);
                    let zielonka_millis = t.elapsed().as_secs_f64() * 1000.0;
                    if z.winners != r.winners {
                        eprintln!("solvers disagree on the n={n} M={m} game");
                        return Err(Exit(2).into());
                    }
                    Ok(format!(
                        "{n},{m},{},{},{},{millis:.3},{zielonka_millis:.3}",
                        r.k, r.stats.product_nodes, r.stats.bound_nodes
                    ))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect()
    });
    println!("n,M,k,product_nodes,bound_nodes,millis,zielonka_millis");
    for row in rows {
        println!("{}", row?);
    }
    Ok(())
}
