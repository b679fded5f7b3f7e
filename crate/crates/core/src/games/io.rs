//! Versioned JSON file formats for games and portfolios.
//!
//! Games: `format_version`, `rows`, `cols`, `payoffs` (array of rows),
//! `row_labels`, `col_labels`, `normalized`, optional `denorm_offset` /
//! `denorm_scale`. Portfolios: `format_version`, `k`, `strategies`, `pure`,
//! plus an optional provenance `metadata` block. serde_json round-trips f64
//! exactly, so `load(save(g)) == g`.

use super::MatrixGame;
use crate::portfolio::Portfolio;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct GameFile {
    format_version: u32,
    rows: usize,
    cols: usize,
    payoffs: Vec<Vec<f64>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    normalized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    denorm_offset: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    denorm_scale: Option<f64>,
}

/// Provenance block stored alongside a constructed portfolio.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PortfolioMetadata {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_bound: Option<f64>,
    pub runtime_ms: f64,
}

#[derive(Serialize, Deserialize)]
struct PortfolioFile {
    format_version: u32,
    k: usize,
    strategies: Vec<Vec<f64>>,
    pure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<PortfolioMetadata>,
}

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {msg}", path.display()))
}

pub fn save_game(game: &MatrixGame, path: impl AsRef<Path>) -> Result<()> {
    let file = GameFile {
        format_version: FORMAT_VERSION,
        rows: game.rows(),
        cols: game.cols(),
        payoffs: (0..game.rows()).map(|i| game.row(i).to_vec()).collect(),
        row_labels: game.row_labels.clone(),
        col_labels: game.col_labels.clone(),
        normalized: game.normalized,
        denorm_offset: Some(game.denorm_offset),
        denorm_scale: Some(game.denorm_scale),
    };
    let text = serde_json::to_string_pretty(&file).expect("game serializes");
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_game(path: impl AsRef<Path>) -> Result<MatrixGame> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let file: GameFile = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    if file.format_version != FORMAT_VERSION {
        return Err(parse_err(
            path,
            format!("unsupported format_version {}", file.format_version),
        ));
    }
    if file.payoffs.len() != file.rows {
        return Err(parse_err(
            path,
            format!(
                "expected {} payoff rows, found {}",
                file.rows,
                file.payoffs.len()
            ),
        ));
    }
    for (i, row) in file.payoffs.iter().enumerate() {
        if row.len() != file.cols {
            return Err(parse_err(
                path,
                format!(
                    "payoff row {i} has {} entries, expected {}",
                    row.len(),
                    file.cols
                ),
            ));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(parse_err(
                path,
                format!("payoff entry ({i}, {j}) is not finite"),
            ));
        }
    }
    let mut game = MatrixGame::from_rows(file.payoffs).map_err(|e| parse_err(path, e))?;
    if file.row_labels.len() == file.rows {
        game.row_labels = file.row_labels;
    }
    if file.col_labels.len() == file.cols {
        game.col_labels = file.col_labels;
    }
    game.normalized = file.normalized;
    game.denorm_offset = file.denorm_offset.unwrap_or(0.0);
    game.denorm_scale = file.denorm_scale.unwrap_or(1.0);
    if game.normalized && (game.min_entry() < -1.0 - 1e-12 || game.max_entry() > 1.0 + 1e-12) {
        return Err(parse_err(
            path,
            "file claims normalized payoffs but entries fall outside [-1, 1]",
        ));
    }
    Ok(game)
}

pub fn save_portfolio(
    portfolio: &Portfolio,
    metadata: Option<PortfolioMetadata>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let file = PortfolioFile {
        format_version: FORMAT_VERSION,
        k: portfolio.k(),
        strategies: portfolio.strategies().to_vec(),
        pure: portfolio.is_pure(),
        metadata,
    };
    let text = serde_json::to_string_pretty(&file).expect("portfolio serializes");
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_portfolio(path: impl AsRef<Path>) -> Result<(Portfolio, Option<PortfolioMetadata>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let file: PortfolioFile = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    if file.format_version != FORMAT_VERSION {
        return Err(parse_err(
            path,
            format!("unsupported format_version {}", file.format_version),
        ));
    }
    if file.strategies.len() != file.k {
        return Err(parse_err(
            path,
            format!(
                "expected {} strategies, found {}",
                file.k,
                file.strategies.len()
            ),
        ));
    }
    let portfolio = Portfolio::from_rows(file.strategies).map_err(|e| parse_err(path, e))?;
    Ok((portfolio, file.metadata))
}
