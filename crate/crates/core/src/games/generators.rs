//! Seeded game generators.
//!
//! Reproducibility notes: the PRNG is ChaCha8 seeded via
//! `ChaCha8Rng::seed_from_u64`, integer ranges are sampled by unbiased
//! rejection on `next_u64`, and every enumeration order below is frozen:
//!
//! * Blotto allocations are compositions in ascending lexicographic order;
//! * Goofspiel strategies are `(first card) x (outcome map)` with cards
//!   ascending and outcomes ordered win < lose < draw;
//! * Kuhn cards are ordered J < Q < K, player-one actions are
//!   check-fold < check-call < bet, player-two actions are the pair
//!   (response to a bet in fold < call) x (action after a check in
//!   check < bet).

use super::{normalize, MatrixGame};
use crate::{Error, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Unbiased uniform integer in `[0, range)` by rejection sampling.
fn uniform_index(rng: &mut ChaCha8Rng, range: u64) -> u64 {
    let limit = u64::MAX - u64::MAX % range;
    loop {
        let v = rng.next_u64();
        if v < limit {
            return v % range;
        }
    }
}

/// Random game with integer payoffs sampled i.i.d. uniformly from
/// `[-1e7, 1e7]`, then normalized to `[-1, 1]`. Entries are generated in
/// row-major order, so the matrix is reproducible per seed.
pub fn random_game(rows: usize, cols: usize, seed: u64) -> MatrixGame {
    assert!(rows >= 1 && cols >= 1, "game dimensions must be positive");
    const LIMIT: i64 = 10_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = (2 * LIMIT + 1) as u64;
    let raw: Vec<Vec<f64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| (uniform_index(&mut rng, range) as i64 - LIMIT) as f64)
                .collect()
        })
        .collect();
    let game = MatrixGame::from_rows(raw).expect("generated matrix is well-formed");
    normalize(&game)
}

fn compositions(fields: usize, coins: usize) -> Vec<Vec<usize>> {
    fn rec(fields: usize, coins: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if fields == 1 {
            prefix.push(coins);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=coins {
            prefix.push(c);
            rec(fields - 1, coins - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(fields, coins, &mut Vec::new(), &mut out);
    out
}

/// Colonel Blotto: each action distributes `coins` over `fields` ordered
/// fields; the payoff is the sign of the number of fields won minus fields
/// lost. The game is symmetric and the sign payoffs already span `[-1, 1]`
/// for the non-trivial sizes.
pub fn blotto(fields: usize, coins: usize) -> MatrixGame {
    assert!(fields >= 1, "blotto needs at least one field");
    let actions = compositions(fields, coins);
    let n = actions.len();
    let mut rows = Vec::with_capacity(n);
    for a in &actions {
        let mut row = Vec::with_capacity(n);
        for b in &actions {
            let mut won = 0i32;
            let mut lost = 0i32;
            for (x, y) in a.iter().zip(b) {
                if x > y {
                    won += 1;
                } else if x < y {
                    lost += 1;
                }
            }
            row.push(f64::from((won - lost).signum()));
        }
        rows.push(row);
    }
    let mut game = MatrixGame::from_rows(rows).expect("well-formed");
    let labels: Vec<String> = actions
        .iter()
        .map(|a| {
            a.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("-")
        })
        .collect();
    game.row_labels = labels.clone();
    game.col_labels = labels;
    normalize(&game)
}

#[derive(Clone, Copy)]
struct GoofStrategy {
    /// Card bid in round one (1, 2 or 3).
    first: u8,
    /// For each round-one outcome (win, lose, draw): 0 picks the lower of
    /// the two remaining cards, 1 the higher. The third card is forced.
    map: [u8; 3],
}

fn goof_strategies() -> Vec<GoofStrategy> {
    let mut out = Vec::with_capacity(24);
    for first in 1..=3u8 {
        for w in 0..2u8 {
            for l in 0..2u8 {
                for d in 0..2u8 {
                    out.push(GoofStrategy {
                        first,
                        map: [w, l, d],
                    });
                }
            }
        }
    }
    out
}

fn goof_play(s1: GoofStrategy, s2: GoofStrategy) -> f64 {
    let remaining = |first: u8| -> [u8; 2] {
        let mut rest: Vec<u8> = (1..=3).filter(|&c| c != first).collect();
        rest.sort_unstable();
        [rest[0], rest[1]]
    };
    let outcome = |a: u8, b: u8| -> usize {
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => 0, // win
            std::cmp::Ordering::Less => 1,    // lose
            std::cmp::Ordering::Equal => 2,   // draw
        }
    };

    let mut points = (0i32, 0i32);
    let mut award = |prize: i32, a: u8, b: u8| {
        if a > b {
            points.0 += prize;
        } else if b > a {
            points.1 += prize;
        }
        // Equal bids discard the prize card.
    };

    let (b1, b2) = (s1.first, s2.first);
    award(3, b1, b2);
    let rem1 = remaining(s1.first);
    let rem2 = remaining(s2.first);
    let c1 = rem1[s1.map[outcome(b1, b2)] as usize];
    let c2 = rem2[s2.map[outcome(b2, b1)] as usize];
    award(2, c1, c2);
    let last1 = rem1[0] + rem1[1] - c1;
    let last2 = rem2[0] + rem2[1] - c2;
    award(1, last1, last2);

    f64::from((points.0 - points.1).signum())
}

/// Goofspiel with three point cards dealt in descending order (3, 2, 1) and
/// imperfect information: players learn only whether they won, lost or drew
/// each round. The full (unreduced) normal form is built: a pure strategy is
/// a first bid plus a map from the round-one outcome to one of the two
/// remaining cards, 24 strategies per player. The player with the most
/// points receives payoff 1.
pub fn goofspiel3() -> MatrixGame {
    let strategies = goof_strategies();
    let rows: Vec<Vec<f64>> = strategies
        .iter()
        .map(|&a| strategies.iter().map(|&b| goof_play(a, b)).collect())
        .collect();
    let mut game = MatrixGame::from_rows(rows).expect("well-formed");
    let labels: Vec<String> = strategies
        .iter()
        .map(|s| format!("f{}-w{}-l{}-d{}", s.first, s.map[0], s.map[1], s.map[2]))
        .collect();
    game.row_labels = labels.clone();
    game.col_labels = labels;
    normalize(&game)
}

/// Player-one Kuhn action per dealt card.
#[derive(Clone, Copy, PartialEq)]
enum KuhnP1 {
    CheckFold,
    CheckCall,
    Bet,
}

const P1_ACTIONS: [KuhnP1; 3] = [KuhnP1::CheckFold, KuhnP1::CheckCall, KuhnP1::Bet];

/// Kuhn poker in normal form. Both players ante 1; player one may check or
/// bet `bet`, player two responds per card with a (fold | call after a bet,
/// check | bet after a check) pair; a check-then-bet puts the same choice
/// back to player one, folded into the check-fold / check-call actions.
/// The 6 equiprobable deals of distinct cards from {J, Q, K} are averaged
/// into the matrix. Payoffs are normalized by the maximum absolute entry so
/// the result lives in `[-1, 1]`; `denorm_scale` restores raw units.
pub fn kuhn_poker(bet: f64) -> Result<MatrixGame> {
    if !bet.is_finite() || bet <= 0.0 {
        return Err(Error::parameter(format!(
            "kuhn bet must be positive, got {bet}"
        )));
    }
    // Player-two per-card codes: (response to bet) * 2 + (action after check),
    // with fold = 0 / call = 1 and check = 0 / bet = 1.
    let deal_payoff = |c1: usize, c2: usize, a1: KuhnP1, code2: u8| -> f64 {
        let showdown: f64 = if c1 > c2 { 1.0 } else { -1.0 };
        let p2_calls_bet = code2 / 2 == 1;
        let p2_bets_after_check = code2 % 2 == 1;
        match a1 {
            KuhnP1::Bet => {
                if p2_calls_bet {
                    showdown * (1.0 + bet)
                } else {
                    1.0
                }
            }
            KuhnP1::CheckFold => {
                if p2_bets_after_check {
                    -1.0
                } else {
                    showdown
                }
            }
            KuhnP1::CheckCall => {
                if p2_bets_after_check {
                    showdown * (1.0 + bet)
                } else {
                    showdown
                }
            }
        }
    };

    let mut rows = Vec::with_capacity(27);
    for i in 0..27 {
        let a = [
            P1_ACTIONS[i / 9],
            P1_ACTIONS[(i / 3) % 3],
            P1_ACTIONS[i % 3],
        ];
        let mut row = Vec::with_capacity(64);
        for j in 0..64 {
            let codes = [(j / 16) as u8, ((j / 4) % 4) as u8, (j % 4) as u8];
            let mut total = 0.0;
            for (c1, &a1) in a.iter().enumerate() {
                for (c2, &code2) in codes.iter().enumerate() {
                    if c1 != c2 {
                        total += deal_payoff(c1, c2, a1, code2);
                    }
                }
            }
            row.push(total / 6.0);
        }
        rows.push(row);
    }
    let mut game = MatrixGame::from_rows(rows)?;
    let p1_label = |a: KuhnP1| match a {
        KuhnP1::CheckFold => "cf",
        KuhnP1::CheckCall => "cc",
        KuhnP1::Bet => "b",
    };
    game.row_labels = (0..27)
        .map(|i| {
            format!(
                "{}{}{}",
                p1_label(P1_ACTIONS[i / 9]),
                p1_label(P1_ACTIONS[(i / 3) % 3]),
                p1_label(P1_ACTIONS[i % 3])
            )
        })
        .collect();
    let p2_label = |c: usize| {
        format!(
            "{}{}",
            if c / 2 == 1 { "c" } else { "f" },
            if c % 2 == 1 { "b" } else { "k" }
        )
    };
    game.col_labels = (0..64)
        .map(|j| {
            format!(
                "{}|{}|{}",
                p2_label(j / 16),
                p2_label((j / 4) % 4),
                p2_label(j % 4)
            )
        })
        .collect();

    let max_abs = game.payoffs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let scale = if max_abs > 0.0 { max_abs } else { 1.0 };
    for v in &mut game.payoffs {
        *v /= scale;
    }
    game.normalized = true;
    game.denorm_offset = 0.0;
    game.denorm_scale = scale;
    Ok(game)
}
