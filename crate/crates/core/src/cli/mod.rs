//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on bad input, 2 when `--audit` finds a
//! failing claim.

pub mod commands;
pub mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::engine::{ExplicitProblem, GameKind};
use crate::error::Result;
use crate::game::TuGame;
use crate::polytope::Polytope;

pub use commands::{GenKind, Options};
pub use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "feasgames", version, about = "Cooperative games from problems with feasibility externalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Shorthand for `--format table`.
    #[arg(long, conflicts_with_all = ["csv", "json"])]
    pub table: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
    /// Value functions to show, comma separated (e.g. first,last_min,optimistic).
    #[arg(long, value_delimiter = ',')]
    pub games: Option<Vec<GameKind>>,
    /// Run the consistency and theorem checks.
    #[arg(long)]
    pub audit: bool,
    /// Worker threads for table computation.
    #[arg(long, env = "FEASGAMES_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Seed for sampled checks and `gen`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Common {
    pub fn format(&self) -> Format {
        if self.table {
            Format::Table
        } else if self.csv {
            Format::Csv
        } else if self.json {
            Format::Json
        } else {
            self.format
        }
    }

    pub fn options(&self) -> Options {
        Options {
            games: self.games.clone(),
            audit: self.audit,
            jobs: self.jobs,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value-function table of an explicit feasibility problem.
    Explicit(FileArgs),
    /// Joint production with increasing or decreasing marginal costs.
    Production(FileArgs),
    /// Queueing with waiting costs.
    Queueing(FileArgs),
    /// Bankruptcy: estate and claims.
    Bankruptcy(FileArgs),
    /// Airport runway cost sharing.
    Airport(FileArgs),
    /// Minimum cost spanning tree.
    Mcst(FileArgs),
    /// River water sharing.
    River(FileArgs),
    /// Shapley value of a game.
    Shapley(FileArgs),
    /// Core nonemptiness with a point or a balanced certificate.
    Core(FileArgs),
    /// Anti-core nonemptiness with a point or a balanced certificate.
    Anticore(FileArgs),
    /// Random instances as JSON lines.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct FileArgs {
    /// Instance file (JSON).
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 3)]
    pub agents: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Output text and whether every audit claim passed.
pub fn run(cli: &Cli) -> Result<(String, bool)> {
    use commands::*;
    let (args, report) = match &cli.command {
        Command::Gen(g) => return Ok((generate(g.kind, g.agents, g.count, g.seed)?, true)),
        Command::Explicit(a) => {
            let text = std::fs::read_to_string(&a.input)?;
            (a, explicit(&ExplicitProblem::from_json(&text)?, &a.common.options())?)
        }
        Command::Production(a) => (a, production(load(&a.input)?, &a.common.options())?),
        Command::Queueing(a) => (a, queueing(&load(&a.input)?, &a.common.options())?),
        Command::Bankruptcy(a) => (a, bankruptcy(&load(&a.input)?, &a.common.options())?),
        Command::Airport(a) => (a, airport(&load(&a.input)?, &a.common.options())?),
        Command::Mcst(a) => (a, mcst(&load(&a.input)?, &a.common.options())?),
        Command::River(a) => (a, river(&load(&a.input)?, &a.common.options())?),
        Command::Shapley(a) => (a, shapley(&read_game(a)?)),
        Command::Core(a) => (a, polytope_report(&read_game(a)?, Polytope::Core, &a.common.options())?),
        Command::Anticore(a) => (a, polytope_report(&read_game(a)?, Polytope::AntiCore, &a.common.options())?),
    };
    Ok((report.render(args.common.format())?, report.passed()))
}

fn read_game(a: &FileArgs) -> Result<TuGame> {
    TuGame::from_json(&std::fs::read_to_string(&a.input)?)
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
