use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{Claim, GameKind, GameTable};
use crate::error::Result;
use crate::game::{Allocation, TuGame};
use crate::rational::{self, Rational};

/// Output format of a report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub coalition: Coalition,
    pub label: String,
    #[serde(with = "rational::text_vec")]
    pub values: Vec<Rational>,
    /// Text cells after the numeric ones, e.g. realizing subsets.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedAllocation {
    pub name: String,
    #[serde(with = "rational::text_vec")]
    pub payoffs: Vec<Rational>,
}

/// What every subcommand prints: one row per coalition, one column per
/// value function, then allocations, audit claims and notes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub agents: usize,
    pub columns: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_columns: Vec<String>,
    pub rows: Vec<ReportRow>,
    #[serde(default)]
    pub allocations: Vec<NamedAllocation>,
    #[serde(default)]
    pub checks: Vec<Claim>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, agents: usize) -> Self {
        Report {
            title: title.into(),
            agents,
            ..Report::default()
        }
    }

    /// Rows for the given games, ordered by coalition size then members.
    pub fn with_games(mut self, games: &[(&str, &TuGame)]) -> Self {
        self.columns = games.iter().map(|(name, _)| name.to_string()).collect();
        let mut coalitions: Vec<Coalition> = Coalition::nonempty(self.agents).collect();
        coalitions.sort_by_key(|s| s.display_key());
        self.rows = coalitions
            .into_iter()
            .map(|s| ReportRow {
                coalition: s,
                label: s.to_string(),
                values: games.iter().map(|(_, g)| g.value(s).clone()).collect(),
                extra: Vec::new(),
            })
            .collect();
        self
    }

    /// Rows from an engine table restricted to `kinds`; realizing subsets
    /// are added whenever `v^o` or `v^p` is shown.
    pub fn with_table(mut self, table: &GameTable, kinds: &[GameKind]) -> Self {
        self.columns = kinds.iter().map(|k| k.symbol().to_string()).collect();
        let optimistic = kinds.contains(&GameKind::Optimistic);
        let pessimistic = kinds.contains(&GameKind::Pessimistic);
        if optimistic {
            self.extra_columns.push("T(v^o)".into());
        }
        if pessimistic {
            self.extra_columns.push("T(v^p)".into());
        }
        let sets = |ts: &[Coalition]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
        self.rows = table
            .display_rows()
            .into_iter()
            .map(|r| {
                let mut extra = Vec::new();
                if optimistic {
                    extra.push(sets(&r.optimistic_realizers));
                }
                if pessimistic {
                    extra.push(sets(&r.pessimistic_realizers));
                }
                ReportRow {
                    coalition: r.coalition,
                    label: r.coalition.to_string(),
                    values: kinds.iter().map(|&k| r.value(k).clone()).collect(),
                    extra,
                }
            })
            .collect();
        self
    }

    pub fn allocation(&mut self, name: impl Into<String>, x: &Allocation) {
        self.allocations.push(NamedAllocation {
            name: name.into(),
            payoffs: x.0.clone(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table => Ok(self.to_table()),
            Format::Csv => Ok(self.to_csv()),
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn cells(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = vec!["S".to_string()];
        header.extend(self.columns.iter().cloned());
        header.extend(self.extra_columns.iter().cloned());
        let body = self
            .rows
            .iter()
            .map(|r| {
                let mut line = vec![r.label.clone()];
                line.extend(r.values.iter().map(rational::format));
                line.extend(r.extra.iter().cloned());
                line
            })
            .collect();
        (header, body)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.title).unwrap();
        let (header, body) = self.cells();
        if !self.columns.is_empty() {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for line in &body {
                for (w, cell) in widths.iter_mut().zip(line) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let fmt_line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", fmt_line(&header)).unwrap();
            for line in &body {
                writeln!(out, "{}", fmt_line(line)).unwrap();
            }
        }
        for a in &self.allocations {
            let xs: Vec<String> = a.payoffs.iter().map(rational::format).collect();
            writeln!(out, "{}: ({})", a.name, xs.join(", ")).unwrap();
        }
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(out, "[{mark}] {}: {} ({w})", c.id, c.statement).unwrap(),
                None => writeln!(out, "[{mark}] {}: {}", c.id, c.statement).unwrap(),
            }
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        out
    }

    /// The coalition table only.
    pub fn to_csv(&self) -> String {
        let (header, body) = self.cells();
        let quote = |c: &String| {
            if c.contains([',', '"']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        let mut out = String::new();
        for line in std::iter::once(&header).chain(&body) {
            writeln!(out, "{}", line.iter().map(quote).collect::<Vec<_>>().join(",")).unwrap();
        }
        out
    }
}
