//! `portfolio` - construct and evaluate opponent-strategy portfolios in
//! two-player zero-sum matrix games.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 solver
//! or resource-limit failure.

use clap::{Args, Parser, Subcommand};
use portfolio_core::bench::{
    emit_plot_data, run_experiment, verify_fixtures, write_csv, ExperimentConfig,
};
use portfolio_core::construct::{
    brute_force_pure, double_oracle, eps_dom_min_size, eps_dom_mixed, eps_dom_pure, greedy_k,
    random_mixed, ConstructionResult,
};
use portfolio_core::games::{
    blotto, fixture, goofspiel3, kuhn_poker, load_game, load_portfolio, normalize, random_game,
    save_game, save_portfolio, FixtureSpec, MatrixGame,
};
use portfolio_core::portfolio::{exploitability, SelectionFunction, DEFAULT_RM_ITERATIONS};
use portfolio_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "portfolio", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a game and write it to a game file.
    Generate(GenerateArgs),
    /// Construct a portfolio for a game file.
    Construct(ConstructArgs),
    /// Evaluate a portfolio file against a game file.
    Evaluate(EvaluateArgs),
    /// Run an experiment sweep from a config file.
    Experiment(ExperimentArgs),
    /// Check every counterexample game against its exact values.
    VerifyFixtures,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    game: GenerateGame,
}

#[derive(Subcommand)]
enum GenerateGame {
    /// Random game with integer payoffs from [-1e7, 1e7], normalized.
    Random {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Colonel Blotto with the given fields and coins.
    Blotto {
        #[arg(long)]
        fields: usize,
        #[arg(long)]
        coins: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Goofspiel with three point cards, full normal form.
    Goofspiel3 {
        #[arg(long)]
        out: PathBuf,
    },
    /// Kuhn poker in normal form.
    Kuhn {
        #[arg(long)]
        bet: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// A named fixture, e.g. `theorem_2`, `theorem_3:0.1`, `neg_identity:3`.
    Fixture {
        #[arg(long)]
        name: String,
        /// Normalize payoffs to [-1, 1] before writing.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ConstructArgs {
    /// Game file to construct for; normalized automatically if needed.
    #[arg(long)]
    game: PathBuf,
    /// One of: eps-dom-pure, eps-dom-mixed, eps-dom-min-size, greedy-k,
    /// double-oracle, brute-force-pure, random-mixed.
    #[arg(long)]
    method: String,
    /// Portfolio size (all methods except eps-dom-min-size).
    #[arg(long)]
    k: Option<usize>,
    /// Dominance budget for eps-dom-min-size, in normalized units.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Seed for random-mixed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Selection function optimized by brute-force-pure.
    #[arg(long, default_value = "pessimistic")]
    selection: String,
    #[arg(long, default_value_t = DEFAULT_RM_ITERATIONS)]
    rm_iterations: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    portfolio: PathBuf,
    /// pessimistic, optimistic or rm-plus.
    #[arg(long, default_value = "pessimistic")]
    selection: String,
    #[arg(long, default_value_t = DEFAULT_RM_ITERATIONS)]
    rm_iterations: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving results.csv and the configured plots.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
}

fn parse_selection(name: &str, rm_iterations: usize) -> Result<SelectionFunction, Error> {
    match name {
        "pessimistic" => Ok(SelectionFunction::Pessimistic),
        "optimistic" => Ok(SelectionFunction::Optimistic),
        "rm-plus" => Ok(SelectionFunction::RmPlus {
            iterations: rm_iterations,
        }),
        other => Err(Error::Parameter(format!(
            "unknown selection function '{other}'"
        ))),
    }
}

fn load_normalized(path: &PathBuf) -> Result<MatrixGame, Error> {
    let game = load_game(path)?;
    Ok(if game.normalized {
        game
    } else {
        normalize(&game)
    })
}

fn run_generate(args: GenerateArgs) -> Result<(), Error> {
    let (game, out) = match args.game {
        GenerateGame::Random {
            rows,
            cols,
            seed,
            out,
        } => {
            if rows == 0 || cols == 0 {
                return Err(Error::Parameter("dimensions must be positive".into()));
            }
            (random_game(rows, cols, seed), out)
        }
        GenerateGame::Blotto { fields, coins, out } => {
            if fields == 0 {
                return Err(Error::Parameter("blotto needs at least one field".into()));
            }
            (blotto(fields, coins), out)
        }
        GenerateGame::Goofspiel3 { out } => (goofspiel3(), out),
        GenerateGame::Kuhn { bet, out } => (kuhn_poker(bet)?, out),
        GenerateGame::Fixture {
            name,
            normalize: norm,
            out,
        } => {
            let game = fixture(&FixtureSpec::parse(&name)?)?;
            (if norm { normalize(&game) } else { game }, out)
        }
    };
    save_game(&game, &out)?;
    println!(
        "wrote {} ({}x{}, normalized: {})",
        out.display(),
        game.rows(),
        game.cols(),
        game.normalized
    );
    Ok(())
}

fn run_construct(args: ConstructArgs) -> Result<(), Error> {
    let game = load_normalized(&args.game)?;
    let need_k = || {
        args.k
            .ok_or_else(|| Error::Parameter(format!("--k is required for {}", args.method)))
    };
    let result: ConstructionResult = match args.method.as_str() {
        "eps-dom-pure" => eps_dom_pure(&game, need_k()?)?,
        "eps-dom-mixed" => eps_dom_mixed(&game, need_k()?)?,
        "eps-dom-min-size" => {
            let epsilon = args.epsilon.ok_or_else(|| {
                Error::Parameter("--epsilon is required for eps-dom-min-size".into())
            })?;
            eps_dom_min_size(&game, epsilon)?
        }
        "greedy-k" => greedy_k(&game, need_k()?)?,
        "double-oracle" => double_oracle(&game, need_k()?)?,
        "brute-force-pure" => {
            let selection = parse_selection(&args.selection, args.rm_iterations)?;
            brute_force_pure(&game, need_k()?, selection)?
        }
        "random-mixed" => random_mixed(&game, need_k()?, args.seed)?,
        other => return Err(Error::Parameter(format!("unknown method '{other}'"))),
    };
    save_portfolio(&result.portfolio, Some(result.metadata()), &args.out)?;
    match result.epsilon_bound {
        Some(bound) => println!(
            "wrote {} (k = {}, epsilon bound = {bound}, raw units = {})",
            args.out.display(),
            result.portfolio.k(),
            game.difference_to_raw(bound)
        ),
        None => println!(
            "wrote {} (k = {})",
            args.out.display(),
            result.portfolio.k()
        ),
    }
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<(), Error> {
    let game = load_normalized(&args.game)?;
    let (portfolio, _) = load_portfolio(&args.portfolio)?;
    let selection = parse_selection(&args.selection, args.rm_iterations)?;
    let ex = exploitability(&game, &portfolio, selection)?;
    println!("exploitability: {ex}");
    println!("exploitability_raw: {}", game.difference_to_raw(ex));
    Ok(())
}

fn run_experiment_cmd(args: ExperimentArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.config)?;
    let config = ExperimentConfig::from_json(&text)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let rows = run_experiment(&config)?;
    let csv_path = config
        .output_csv
        .clone()
        .unwrap_or_else(|| args.out_dir.join("results.csv"));
    write_csv(&rows, &csv_path)?;
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "cell error: {} {} k={} seed={}: {}",
            row.game,
            row.method,
            row.k,
            row.seed,
            row.error.as_deref().unwrap_or("")
        );
    }
    for plot in &config.plots {
        emit_plot_data(&rows, plot, &args.out_dir)?;
    }
    println!(
        "wrote {} rows to {} ({} plots, {failures} cell errors)",
        rows.len(),
        csv_path.display(),
        config.plots.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, Error> = match cli.command {
        Command::Generate(args) => run_generate(args).map(|()| true),
        Command::Construct(args) => run_construct(args).map(|()| true),
        Command::Evaluate(args) => run_evaluate(args).map(|()| true),
        Command::Experiment(args) => run_experiment_cmd(args).map(|()| true),
        Command::VerifyFixtures => verify_fixtures().map(|report| {
            println!("{report}");
            report.all_pass()
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SolverFailure(_) | Error::Resource { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
