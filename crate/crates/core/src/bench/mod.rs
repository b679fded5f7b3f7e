//! Experiment configuration, seeded sweeps, fixture verification and
//! CSV / plot-data emission.
//!
//! A sweep executes the full `game x method x (k or epsilon) x seed` grid.
//! Each cell instantiates its game from the cell seed (so random-game
//! experiments vary the game per seed, mirroring how stochastic methods are
//! seeded), constructs one portfolio and evaluates it under every
//! configured selection function. Failures become error rows with empty
//! value fields and the run continues. Row order is normalized by cell key,
//! so identical configs yield identical CSVs up to the `runtime_ms` column
//! regardless of parallelism.

mod fixtures_verify;
mod plot;

pub use fixtures_verify::{verify_fixtures, FixtureCheck, FixtureReport};
pub use plot::{emit_plot_data, PlotAxis, PlotSpec, PlotValue};

use crate::construct::{
    brute_force_pure, double_oracle, eps_dom_min_size, eps_dom_mixed, eps_dom_pure, greedy_k,
    random_mixed, ConstructionResult,
};
use crate::games::{
    blotto, fixture, goofspiel3, kuhn_poker, load_game, normalize, random_game, FixtureSpec,
    MatrixGame,
};
use crate::portfolio::{Evaluator, SelectionFunction, DEFAULT_RM_ITERATIONS};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Which game each grid cell plays.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GameSpec {
    /// A fresh random game per cell seed.
    Random {
        rows: usize,
        cols: usize,
    },
    Blotto {
        fields: usize,
        coins: usize,
    },
    Goofspiel3,
    Kuhn {
        bet: f64,
    },
    /// A fixture by name, e.g. `"theorem_3:0.1"`.
    Fixture {
        name: String,
    },
    File {
        path: PathBuf,
    },
}

impl GameSpec {
    /// Stable identifier used in result rows.
    pub fn id(&self) -> String {
        match self {
            GameSpec::Random { rows, cols } => format!("random-{rows}x{cols}"),
            GameSpec::Blotto { fields, coins } => format!("blotto-{fields}-{coins}"),
            GameSpec::Goofspiel3 => "goofspiel3".into(),
            GameSpec::Kuhn { bet } => format!("kuhn-{bet}"),
            GameSpec::Fixture { name } => name.clone(),
            GameSpec::File { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }

    /// Builds the (normalized) game this cell evaluates.
    pub fn instantiate(&self, seed: u64) -> Result<MatrixGame> {
        let game = match self {
            GameSpec::Random { rows, cols } => random_game(*rows, *cols, seed),
            GameSpec::Blotto { fields, coins } => blotto(*fields, *coins),
            GameSpec::Goofspiel3 => goofspiel3(),
            GameSpec::Kuhn { bet } => kuhn_poker(*bet)?,
            GameSpec::Fixture { name } => normalize(&fixture(&FixtureSpec::parse(name)?)?),
            GameSpec::File { path } => {
                let game = load_game(path)?;
                if game.normalized {
                    game
                } else {
                    normalize(&game)
                }
            }
        };
        Ok(game)
    }
}

/// Construction method identifiers accepted in configs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum MethodSpec {
    EpsDomPure,
    EpsDomMixed,
    /// Sweeps `epsilon_grid` instead of `k_values`.
    EpsDomMinSize,
    GreedyK,
    DoubleOracle,
    /// Constructed once per selection function (the optimum depends on it).
    BruteForcePure,
    RandomMixed,
}

impl MethodSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::EpsDomPure => "eps-dom-pure",
            MethodSpec::EpsDomMixed => "eps-dom-mixed",
            MethodSpec::EpsDomMinSize => "eps-dom-min-size",
            MethodSpec::GreedyK => "greedy-k",
            MethodSpec::DoubleOracle => "double-oracle",
            MethodSpec::BruteForcePure => "brute-force-pure",
            MethodSpec::RandomMixed => "random-mixed",
        }
    }
}

/// Selection functions accepted in configs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionSpec {
    Pessimistic,
    Optimistic,
    RmPlus,
}

impl SelectionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionSpec::Pessimistic => "pessimistic",
            SelectionSpec::Optimistic => "optimistic",
            SelectionSpec::RmPlus => "rm-plus",
        }
    }

    pub fn to_function(self, rm_iterations: usize) -> SelectionFunction {
        match self {
            SelectionSpec::Pessimistic => SelectionFunction::Pessimistic,
            SelectionSpec::Optimistic => SelectionFunction::Optimistic,
            SelectionSpec::RmPlus => SelectionFunction::RmPlus {
                iterations: rm_iterations,
            },
        }
    }
}

fn default_seeds() -> Vec<u64> {
    (10..=59).collect()
}

fn default_rm_iterations() -> usize {
    DEFAULT_RM_ITERATIONS
}

/// Full description of one experiment sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub games: Vec<GameSpec>,
    pub methods: Vec<MethodSpec>,
    /// Portfolio sizes for the size-parameterized methods.
    #[serde(default)]
    pub k_values: Vec<usize>,
    /// Epsilon grid for `eps-dom-min-size`.
    #[serde(default)]
    pub epsilon_grid: Vec<f64>,
    pub selections: Vec<SelectionSpec>,
    /// Cell seeds; drives both game sampling and stochastic methods.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_rm_iterations")]
    pub rm_iterations: usize,
    /// Where `run_experiment_to_csv` writes the row table.
    #[serde(default)]
    pub output_csv: Option<PathBuf>,
    /// Figures derived from the rows after the run.
    #[serde(default)]
    pub plots: Vec<PlotSpec>,
    /// Worker threads; absent or 0 uses the rayon default.
    #[serde(default)]
    pub parallelism: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.games.is_empty() {
            return Err(Error::parameter("config lists no games"));
        }
        if self.methods.is_empty() {
            return Err(Error::parameter("config lists no methods"));
        }
        if self.selections.is_empty() {
            return Err(Error::parameter("config lists no selection functions"));
        }
        if self.seeds.is_empty() {
            return Err(Error::parameter("config lists no seeds"));
        }
        if self.rm_iterations == 0 {
            return Err(Error::parameter("rm_iterations must be at least 1"));
        }
        let needs_k = self
            .methods
            .iter()
            .any(|m| !matches!(m, MethodSpec::EpsDomMinSize));
        if needs_k && self.k_values.is_empty() {
            return Err(Error::parameter("config lists no k values"));
        }
        if self.methods.contains(&MethodSpec::EpsDomMinSize) && self.epsilon_grid.is_empty() {
            return Err(Error::parameter(
                "eps-dom-min-size requires a nonempty epsilon_grid",
            ));
        }
        if self.k_values.contains(&0) {
            return Err(Error::parameter("k values must be positive"));
        }
        for spec in &self.games {
            if let GameSpec::Random { rows, cols } = spec {
                if *rows == 0 || *cols == 0 {
                    return Err(Error::parameter("random game dimensions must be positive"));
                }
                if self.k_values.iter().any(|&k| k > *cols) {
                    return Err(Error::parameter(format!(
                        "k exceeds the column count of {}",
                        spec.id()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One output row; `exploitability` is absent on per-cell failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub game: String,
    pub method: String,
    /// Portfolio size: the requested `k`, or the achieved size for
    /// `eps-dom-min-size`.
    pub k: usize,
    pub seed: u64,
    pub selection: String,
    pub exploitability: Option<f64>,
    pub epsilon_bound: Option<f64>,
    pub runtime_ms: f64,
    /// Failure note for error rows; not part of the CSV schema.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
struct Cell {
    game: GameSpec,
    method: MethodSpec,
    /// Requested size, or usize::MAX for epsilon-driven cells.
    k: usize,
    epsilon: Option<f64>,
    seed: u64,
}

fn construct_for_cell(
    cell: &Cell,
    game: &MatrixGame,
    selection: SelectionFunction,
) -> Result<ConstructionResult> {
    match cell.method {
        MethodSpec::EpsDomPure => eps_dom_pure(game, cell.k),
        MethodSpec::EpsDomMixed => eps_dom_mixed(game, cell.k),
        MethodSpec::EpsDomMinSize => eps_dom_min_size(game, cell.epsilon.expect("epsilon cell")),
        MethodSpec::GreedyK => greedy_k(game, cell.k),
        MethodSpec::DoubleOracle => double_oracle(game, cell.k),
        MethodSpec::BruteForcePure => brute_force_pure(game, cell.k, selection),
        MethodSpec::RandomMixed => random_mixed(game, cell.k, cell.seed),
    }
}

fn run_cell(cell: &Cell, config: &ExperimentConfig) -> Vec<ResultRow> {
    let base_row = |k: usize| ResultRow {
        game: cell.game.id(),
        method: cell.method.name().to_string(),
        k,
        seed: cell.seed,
        selection: String::new(),
        exploitability: None,
        epsilon_bound: None,
        runtime_ms: 0.0,
        error: None,
    };
    let game = match cell.game.instantiate(cell.seed) {
        Ok(game) => game,
        Err(e) => {
            return config
                .selections
                .iter()
                .map(|s| {
                    let mut row = base_row(cell.k);
                    row.selection = s.name().into();
                    row.error = Some(e.to_string());
                    row
                })
                .collect();
        }
    };
    let evaluator = match Evaluator::new(&game) {
        Ok(e) => e,
        Err(e) => {
            return config
                .selections
                .iter()
                .map(|s| {
                    let mut row = base_row(cell.k);
                    row.selection = s.name().into();
                    row.error = Some(e.to_string());
                    row
                })
                .collect();
        }
    };

    // Brute force optimizes for the selection itself, so it constructs once
    // per selection; every other method constructs once per cell.
    let per_selection_construction = cell.method == MethodSpec::BruteForcePure;
    let mut shared: Option<ConstructionResult> = None;
    let mut rows = Vec::with_capacity(config.selections.len());
    for selection_spec in &config.selections {
        let selection = selection_spec.to_function(config.rm_iterations);
        let constructed = if per_selection_construction || shared.is_none() {
            match construct_for_cell(cell, &game, selection) {
                Ok(result) => {
                    if !per_selection_construction {
                        shared = Some(result.clone());
                    }
                    result
                }
                Err(e) => {
                    let mut row = base_row(cell.k);
                    row.selection = selection_spec.name().into();
                    row.error = Some(e.to_string());
                    rows.push(row);
                    continue;
                }
            }
        } else {
            shared.clone().expect("cached construction")
        };

        let eval_started = std::time::Instant::now();
        let mut row = base_row(constructed.portfolio.k());
        row.selection = selection_spec.name().into();
        row.epsilon_bound = constructed.epsilon_bound;
        match evaluator.evaluate(&constructed.portfolio, selection) {
            Ok(eval) => {
                row.exploitability = Some(eval.exploitability);
            }
            Err(e) => {
                row.error = Some(e.to_string());
            }
        }
        row.runtime_ms = constructed.runtime_ms + eval_started.elapsed().as_secs_f64() * 1e3;
        rows.push(row);
    }
    rows
}

/// Executes the full grid and returns the rows sorted by cell key. Per-cell
/// failures are recorded as error rows and the run continues.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let mut cells = Vec::new();
    for game in &config.games {
        for method in &config.methods {
            match method {
                MethodSpec::EpsDomMinSize => {
                    for &epsilon in &config.epsilon_grid {
                        for &seed in &config.seeds {
                            cells.push(Cell {
                                game: game.clone(),
                                method: *method,
                                k: 0,
                                epsilon: Some(epsilon),
                                seed,
                            });
                        }
                    }
                }
                _ => {
                    for &k in &config.k_values {
                        for &seed in &config.seeds {
                            cells.push(Cell {
                                game: game.clone(),
                                method: *method,
                                k,
                                epsilon: None,
                                seed,
                            });
                        }
                    }
                }
            }
        }
    }

    let run_all = || -> Vec<Vec<ResultRow>> {
        cells
            .par_iter()
            .map(|cell| run_cell(cell, config))
            .collect()
    };
    let mut rows: Vec<ResultRow> = match config.parallelism {
        Some(threads) if threads > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot build thread pool: {e}")))?
            .install(run_all),
        _ => run_all(),
    }
    .into_iter()
    .flatten()
    .collect();

    rows.sort_by(|a, b| {
        (
            &a.game,
            &a.method,
            a.k,
            a.seed,
            &a.selection,
            cmp_key(a.epsilon_bound),
        )
            .cmp(&(
                &b.game,
                &b.method,
                b.k,
                b.seed,
                &b.selection,
                cmp_key(b.epsilon_bound),
            ))
    });
    Ok(rows)
}

fn cmp_key(v: Option<f64>) -> u64 {
    // Total order for the sort key; NaN never occurs in stored bounds.
    v.map(|x| x.to_bits()).unwrap_or(0)
}

/// Runs the grid and writes the CSV when the config names an output path.
pub fn run_experiment_to_csv(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let rows = run_experiment(config)?;
    if let Some(path) = &config.output_csv {
        write_csv(&rows, path)?;
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "game,method,k,seed,selection,exploitability,epsilon_bound,runtime_ms";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows in the canonical CSV schema. Error rows have empty
/// `exploitability` (and usually `epsilon_bound`) fields.
pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 64 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.game,
            row.method,
            row.k,
            row.seed,
            row.selection,
            fmt_opt(row.exploitability),
            fmt_opt(row.epsilon_bound),
            row.runtime_ms
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Mean and standard error of a sample.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests;
