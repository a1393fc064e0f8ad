use std::error::Error;
use std::io::{self, IsTerminal};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncw_core::catalog::{self, SuiteSpec};
use ncw_core::discrete::{simulate_walk, WalkConfig};
use ncw_core::eval::{assignments, eval, index_vars, Bindings};
use ncw_core::forms::{self, MaxwellDerivation, Mode};
use ncw_core::oracle;
use ncw_core::world::{coordinate_world, flat_world, gauge_world, metric_world, potential_world};
use ncw_core::{parse_expr, parse_world_file, Report, World};
use num_rational::BigRational;

mod repl;

#[derive(Parser)]
#[command(name = "ncw", version, about = "Exact symbolic calculus in noncommutative worlds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite, or `all` of them
    Check(CheckArgs),
    /// Normalize an expression in a world
    Normalize {
        /// World file, or a built-in such as `flat:2`
        #[arg(short, long)]
        world: String,
        #[arg(short, long)]
        expr: String,
    },
    /// Interactive session in a world
    Repl {
        #[arg(short, long, default_value = "flat:3")]
        world: String,
    },
    /// Simulate a seeded ±Delta random walk
    Walk {
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value = "1/2")]
        delta: BigRational,
        #[arg(long, default_value = "1/4")]
        tau: BigRational,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Per-step table instead of the summary
        #[arg(long)]
        csv: bool,
    },
    /// Exterior-calculus derivation of the homogeneous Maxwell equations
    Maxwell {
        /// Yang-Mills curvature instead
        #[arg(long)]
        ym: bool,
        #[arg(short, default_value_t = 4)]
        d: u32,
        #[arg(long)]
        json: bool,
    },
    /// Random-matrix test of a named identity or an expression asserted to vanish
    Oracle {
        #[arg(long)]
        identity: String,
        /// Generator count for bianchi and curvature, dimension for levi-civita
        #[arg(short, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Matrix size
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name, or `all`
    suite: String,
    #[arg(short)]
    d: Option<u32>,
    #[arg(short)]
    n: Option<u32>,
    #[arg(long)]
    maxlen: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Matrix size for oracle suites
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
    /// Hamiltonian for the `hamilton` suite
    #[arg(long)]
    hamiltonian: Option<String>,
}

type Result<T> = std::result::Result<T, Box<dyn Error>>;

fn load_world(spec: &str) -> Result<World> {
    if let Some((kind, d)) = spec.split_once(':') {
        if let Ok(d) = d.parse::<u32>() {
            let w = match kind {
                "flat" => flat_world(d),
                "gauge" => gauge_world(d),
                "metric" => metric_world(d),
                "potential" => potential_world(d),
                "coordinates" => coordinate_world(d),
                _ => return Err(format!("unknown built-in world `{kind}`").into()),
            };
            return Ok(w?);
        }
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
    Ok(parse_world_file(&text)?)
}

fn print_report(r: &Report, json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(r)?);
    } else {
        print!("{r}");
    }
    Ok(())
}

fn check(a: &CheckArgs) -> Result<bool> {
    let mut spec = SuiteSpec {
        name: a.suite.clone(),
        d: a.d,
        n: a.n,
        maxlen: a.maxlen,
        trials: a.trials,
        matrix_dim: a.dim,
        seed: a.seed,
        hamiltonian: None,
    };
    if let Some(text) = &a.hamiltonian {
        let w = flat_world(a.d.unwrap_or(3))?;
        spec.hamiltonian = Some(eval(&parse_expr(text)?, &w, &Bindings::new())?);
    }
    if a.suite != "all" {
        let r = catalog::run_suite(&spec)?;
        print_report(&r, a.json)?;
        return Ok(r.passed());
    }
    let reports = catalog::run_all(&spec)?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    if a.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            println!("== {}", r.suite);
            print!("{r}");
        }
        println!("all: {passed}/{} suites passed", reports.len());
    }
    Ok(passed == reports.len())
}

fn normalize(world: &str, text: &str) -> Result<bool> {
    let w = load_world(world)?;
    let expr = parse_expr(text)?;
    let mut vars = Vec::new();
    index_vars(&expr, &mut vars);
    if vars.is_empty() {
        println!("{}", w.render(&w.normalize(&eval(&expr, &w, &Bindings::new())?)?));
        return Ok(true);
    }
    for b in assignments(&vars, w.dim()) {
        let e = w.normalize(&eval(&expr, &w, &b)?)?;
        let case: Vec<String> = vars.iter().map(|v| format!("{v}={}", b[v])).collect();
        println!("{}: {}", case.join(" "), w.render(&e));
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Check(a) => check(&a),
        Command::Normalize { world, expr } => normalize(&world, &expr),
        Command::Repl { world } => {
            let w = load_world(&world)?;
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            repl::run(w, stdin.lock(), io::stdout().lock(), prompt)?;
            Ok(true)
        }
        Command::Walk { steps, delta, tau, seed, csv } => {
            let r = simulate_walk(&WalkConfig { steps, delta, tau, seed })?;
            if csv {
                print!("{}", r.to_csv());
            } else {
                print!("{r}");
            }
            Ok(true)
        }
        Command::Maxwell { ym, d, json } => {
            let r = if ym {
                let r = forms::yang_mills_curvature_check(d)?;
                if !json {
                    println!("F = {}", forms::yang_mills_curvature(d, Mode::Noncommutative));
                }
                r
            } else {
                if !json {
                    print!("{}", MaxwellDerivation::compute());
                }
                forms::weyl_maxwell_derivation()
            };
            print_report(&r, json)?;
            Ok(r.passed())
        }
        Command::Oracle { identity, k, trials, dim, seed, json } => {
            let r = match oracle::oracle_suite(&identity, k, trials, dim, seed)? {
                Some(r) => r,
                None => oracle::oracle_expression(&parse_expr(&identity)?, trials, dim, seed)?,
            };
            print_report(&r, json)?;
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
