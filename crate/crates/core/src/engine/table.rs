use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::TuGame;
use crate::rational::{self, Rational};

use super::staged::StagedProblem;
use super::values::{Engine, Mode};

/// The seven coalitional value functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Alpha,
    Beta,
    First,
    LastMin,
    LastMax,
    Optimistic,
    Pessimistic,
}

impl GameKind {
    pub const ALL: [GameKind; 7] = [
        GameKind::Alpha,
        GameKind::Beta,
        GameKind::First,
        GameKind::LastMin,
        GameKind::LastMax,
        GameKind::Optimistic,
        GameKind::Pessimistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameKind::Alpha => "alpha",
            GameKind::Beta => "beta",
            GameKind::First => "first",
            GameKind::LastMin => "last-min",
            GameKind::LastMax => "last-max",
            GameKind::Optimistic => "optimistic",
            GameKind::Pessimistic => "pessimistic",
        }
    }

    /// Column heading in printed tables.
    pub fn symbol(self) -> &'static str {
        match self {
            GameKind::Alpha => "v^α",
            GameKind::Beta => "v^β",
            GameKind::First => "v^F",
            GameKind::LastMin => "v^L_min",
            GameKind::LastMax => "v^L_max",
            GameKind::Optimistic => "v^o",
            GameKind::Pessimistic => "v^p",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().as_str() {
            "alpha" | "a" => GameKind::Alpha,
            "beta" | "b" => GameKind::Beta,
            "first" | "f" => GameKind::First,
            "last-min" | "lmin" | "last_min" => GameKind::LastMin,
            "last-max" | "lmax" | "last_max" => GameKind::LastMax,
            "optimistic" | "o" => GameKind::Optimistic,
            "pessimistic" | "p" => GameKind::Pessimistic,
            other => return Err(Error::Parse(format!("unknown value function {other:?}"))),
        };
        Ok(kind)
    }
}

/// All seven values of one coalition, plus the first movers realizing the
/// optimistic and pessimistic values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub coalition: Coalition,
    #[serde(with = "rational::text")]
    pub alpha: Rational,
    #[serde(with = "rational::text")]
    pub beta: Rational,
    #[serde(with = "rational::text")]
    pub first: Rational,
    #[serde(with = "rational::text")]
    pub last_min: Rational,
    #[serde(with = "rational::text")]
    pub last_max: Rational,
    #[serde(with = "rational::text")]
    pub optimistic: Rational,
    #[serde(with = "rational::text")]
    pub pessimistic: Rational,
    pub optimistic_realizers: Vec<Coalition>,
    pub pessimistic_realizers: Vec<Coalition>,
}

impl TableRow {
    pub fn value(&self, kind: GameKind) -> &Rational {
        match kind {
            GameKind::Alpha => &self.alpha,
            GameKind::Beta => &self.beta,
            GameKind::First => &self.first,
            GameKind::LastMin => &self.last_min,
            GameKind::LastMax => &self.last_max,
            GameKind::Optimistic => &self.optimistic,
            GameKind::Pessimistic => &self.pessimistic,
        }
    }
}

/// One row per nonempty coalition, ascending by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTable {
    pub agents: usize,
    pub rows: Vec<TableRow>,
}

impl GameTable {
    pub fn row(&self, s: Coalition) -> &TableRow {
        &self.rows[s.index() - 1]
    }

    pub fn value(&self, kind: GameKind, s: Coalition) -> &Rational {
        self.row(s).value(kind)
    }

    pub fn game(&self, kind: GameKind) -> TuGame {
        TuGame::from_fn(self.agents, |s| self.value(kind, s).clone())
            .expect("tables have a valid agent count")
    }

    /// Rows ordered by coalition size, then members.
    pub fn display_rows(&self) -> Vec<&TableRow> {
        let mut rows: Vec<&TableRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| r.coalition.display_key());
        rows
    }
}

impl<P: StagedProblem> Engine<P> {
    pub fn table_row(&self, s: Coalition) -> Result<TableRow> {
        let (optimistic, optimistic_realizers) = self.optimistic(s)?;
        let (pessimistic, pessimistic_realizers) = self.pessimistic(s)?;
        Ok(TableRow {
            coalition: s,
            alpha: self.alpha(s)?,
            beta: self.beta(s)?,
            first: self.first(s)?,
            last_min: self.last(s, Mode::Min)?,
            last_max: self.last(s, Mode::Max)?,
            optimistic,
            pessimistic,
            optimistic_realizers,
            pessimistic_realizers,
        })
    }

    pub fn table(&self) -> Result<GameTable> {
        let rows = Coalition::nonempty(self.agents())
            .map(|s| self.table_row(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(GameTable {
            agents: self.agents(),
            rows,
        })
    }
}

/// Builds the table on `jobs` worker threads, each with its own engine.
/// The result does not depend on `jobs`.
pub fn compute_table<P>(problem: &P, jobs: usize) -> Result<GameTable>
where
    P: StagedProblem + Sync,
{
    if jobs <= 1 {
        return Engine::new(problem)?.table();
    }
    let n = problem.agents();
    crate::game::check_agent_count(n)?;
    let coalitions: Vec<Coalition> = Coalition::nonempty(n).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        coalitions
            .par_iter()
            .map_init(
                || Engine::new(problem),
                |engine, &s| match engine {
                    Ok(engine) => engine.table_row(s),
                    Err(e) => Err(Error::Internal(e.to_string())),
                },
            )
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(GameTable { agents: n, rows })
}
