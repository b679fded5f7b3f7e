//! Executable verification of every counterexample game: each check
//! evaluates a fixture portfolio and compares against the exact value, in
//! raw (pre-normalization) units.

use crate::construct::{brute_force_pure, double_oracle};
use crate::equilibrium::game_value;
use crate::games::{fixture, normalize, FixtureSpec, MatrixGame};
use crate::portfolio::{exploitability, Portfolio, SelectionFunction};
use crate::Result;

/// How a check's actual value relates to its expected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// `|actual - expected| <= tolerance`.
    Exact,
    /// `actual >= expected - tolerance`.
    AtLeast,
}

#[derive(Debug, Clone)]
pub struct FixtureCheck {
    pub name: String,
    pub kind: CheckKind,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct FixtureReport {
    pub checks: Vec<FixtureCheck>,
}

impl FixtureReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        kind: CheckKind,
        expected: f64,
        actual: f64,
        tolerance: f64,
    ) {
        let pass = match kind {
            CheckKind::Exact => (actual - expected).abs() <= tolerance,
            CheckKind::AtLeast => actual >= expected - tolerance,
        };
        self.checks.push(FixtureCheck {
            name: name.into(),
            kind,
            expected,
            actual,
            tolerance,
            pass,
        });
    }
}

impl std::fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for check in &self.checks {
            let relation = match check.kind {
                CheckKind::Exact => "=",
                CheckKind::AtLeast => ">=",
            };
            writeln!(
                f,
                "[{}] {}: expected {} {}, actual {} (tolerance {})",
                if check.pass { "PASS" } else { "FAIL" },
                check.name,
                relation,
                check.expected,
                check.actual,
                check.tolerance
            )?;
        }
        write!(
            f,
            "{}/{} fixture checks passed",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        )
    }
}

const TOL: f64 = 1e-6;

fn raw_exploitability(
    raw: &MatrixGame,
    columns: &[usize],
    selection: SelectionFunction,
) -> Result<f64> {
    let game = normalize(raw);
    let portfolio = Portfolio::from_columns(columns, game.cols())?;
    Ok(game.difference_to_raw(exploitability(&game, &portfolio, selection)?))
}

/// Runs the full fixture assertion list and reports expected vs actual per
/// check. Failures are report entries, not errors.
pub fn verify_fixtures() -> Result<FixtureReport> {
    let mut report = FixtureReport::default();
    let pes = SelectionFunction::Pessimistic;
    let opt = SelectionFunction::Optimistic;

    // Unique-support game: the equilibrium support is a poor portfolio.
    let theorem2 = fixture(&FixtureSpec::Theorem2)?;
    report.push(
        "theorem_2 game value",
        CheckKind::Exact,
        0.5,
        game_value(&theorem2)?.value,
        TOL,
    );
    report.push(
        "theorem_2 ex_PES({c2})",
        CheckKind::Exact,
        0.5,
        raw_exploitability(&theorem2, &[2], pes)?,
        TOL,
    );
    report.push(
        "theorem_2 ex_OPT({c2})",
        CheckKind::Exact,
        0.0,
        raw_exploitability(&theorem2, &[2], opt)?,
        TOL,
    );

    // Its delta-perturbed variant: all three size-1 portfolios stay bad.
    let theorem3 = fixture(&FixtureSpec::Theorem3 { delta: 0.1 })?;
    for (j, expected) in [(0usize, 0.4), (1, 0.4), (2, 0.5)] {
        report.push(
            format!("theorem_3(0.1) ex_PES({{c{j}}})"),
            CheckKind::Exact,
            expected,
            raw_exploitability(&theorem3, &[j], pes)?,
            TOL,
        );
    }

    // Non-monotone growth: the optimal pair gets worse with any extra column.
    let incremental = fixture(&FixtureSpec::Incremental)?;
    report.push(
        "incremental ex_PES({b0,b1})",
        CheckKind::Exact,
        0.0,
        raw_exploitability(&incremental, &[0, 1], pes)?,
        TOL,
    );
    for extra in [2usize, 3] {
        report.push(
            format!("incremental ex_PES({{b0,b1,b{extra}}})"),
            CheckKind::Exact,
            1.0,
            raw_exploitability(&incremental, &[0, 1, extra], pes)?,
            TOL,
        );
    }

    // Full column rank, yet one column suffices.
    for n in [2usize, 3, 4] {
        let rank = fixture(&FixtureSpec::RankGame { n })?;
        report.push(
            format!("rank_game({n}) ex_PES({{last}})"),
            CheckKind::Exact,
            0.0,
            raw_exploitability(&rank, &[n], pes)?,
            TOL,
        );
    }

    // Negated identity: every small pure portfolio is maximally exploited.
    for n in [3usize, 4, 5] {
        let neg = fixture(&FixtureSpec::NegIdentity { n })?;
        let game = normalize(&neg);
        let bound_scale = 1.0; // raw payoff range of -I is 1
        for k in 1..n {
            let mut worst_margin = f64::INFINITY;
            let mut best = f64::INFINITY;
            for columns in crate::construct::subsets_lex(n, k) {
                let portfolio = Portfolio::from_columns(&columns, n)?;
                let ex = game.difference_to_raw(exploitability(&game, &portfolio, pes)?);
                worst_margin = worst_margin.min(ex - bound_scale * (n - k) as f64 / (n * k) as f64);
                best = best.min(ex);
            }
            report.push(
                format!("neg_identity({n}) k={k} min margin over (n-k)/(nk)"),
                CheckKind::AtLeast,
                0.0,
                worst_margin,
                TOL,
            );
            report.push(
                format!("neg_identity({n}) k={k} exact ex_PES"),
                CheckKind::Exact,
                1.0 - 1.0 / n as f64,
                best,
                TOL,
            );
        }
    }

    // Rock-paper-scissors: the mixed pair halves the pure pair's
    // exploitability, under both selection functions.
    let rps = fixture(&FixtureSpec::Rps)?;
    report.push(
        "rps ex_PES({R,P})",
        CheckKind::Exact,
        2.0 / 3.0,
        raw_exploitability(&rps, &[0, 1], pes)?,
        TOL,
    );
    report.push(
        "rps ex_OPT({R,P})",
        CheckKind::Exact,
        2.0 / 3.0,
        raw_exploitability(&rps, &[0, 1], opt)?,
        TOL,
    );
    let mixed = Portfolio::from_rows(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5]])?;
    let rps_norm = normalize(&rps);
    for (name, selection) in [("PES", pes), ("OPT", opt)] {
        report.push(
            format!("rps ex_{name}(mixed pair)"),
            CheckKind::Exact,
            1.0 / 3.0,
            rps_norm.difference_to_raw(exploitability(&rps_norm, &mixed, selection)?),
            TOL,
        );
    }
    let brute = brute_force_pure(&rps_norm, 2, pes)?;
    report.push(
        "rps optimal pure pair ex_PES",
        CheckKind::Exact,
        2.0 / 3.0,
        rps_norm.difference_to_raw(exploitability(&rps_norm, &brute.portfolio, pes)?),
        TOL,
    );

    // Double Oracle stops on the equilibrium support and stays exploitable.
    let do_result = double_oracle(&theorem3, 1)?;
    let do_ex = raw_exploitability(
        &theorem3,
        &do_result.portfolio.pure_columns().expect("pure"),
        pes,
    )?;
    report.push(
        "double_oracle(theorem_3, k=1) ex_PES",
        CheckKind::AtLeast,
        0.4,
        do_ex,
        TOL,
    );

    Ok(report)
}
