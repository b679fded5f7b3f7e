//! Construction and evaluation of opponent-strategy portfolios in
//! two-player zero-sum normal-form games.
//!
//! A *portfolio* is a small set of mixed strategies that stands in for the
//! column player's full action set. Restricting the column player to a
//! portfolio, solving the restricted game and then measuring how much the
//! row player loses against an unrestricted best response gives the
//! portfolio's *exploitability*. This crate provides:
//!
//! * [`solver`] — exact LP solving (two-phase simplex) and small-scale MILP
//!   solving (branch and bound), the backend for every optimization below.
//! * [`games`] — the matrix-game data model, seeded generators (random,
//!   Blotto, Goofspiel-3, Kuhn poker), counterexample fixtures and file I/O.
//! * [`equilibrium`] — game value, best responses, strategy exploitability,
//!   Regret Matching+ dynamics and epsilon-dominance LPs.
//! * [`portfolio`] — game restriction and the pessimistic / optimistic /
//!   RM+ portfolio evaluations.
//! * [`construct`] — portfolio-construction algorithms: dominance MILPs,
//!   Greedy-K, Double Oracle, brute-force optima and a random baseline.
//! * [`bench`] — experiment configuration, seeded sweeps, fixture
//!   verification and CSV / plot-data emission.
//!
//! ```
//! use portfolio_core::games::fixtures::fixture;
//! use portfolio_core::games::FixtureSpec;
//! use portfolio_core::equilibrium::game_value;
//!
//! let rps = fixture(&FixtureSpec::Rps).unwrap();
//! let eq = game_value(&rps).unwrap();
//! assert!(eq.value.abs() < 1e-9);
//! ```

pub mod bench;
pub mod construct;
pub mod equilibrium;
pub mod games;
pub mod portfolio;
pub mod solver;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// One of the two players of a zero-sum matrix game. Player one picks rows
/// and maximizes the matrix entry, player two picks columns and minimizes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}
