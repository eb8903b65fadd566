//! Coalitional games for problems with feasibility externalities.
//!
//! A problem is presented as a [`engine::StagedProblem`]: coalitions take
//! turns making moves over a shared state. The [`engine::Engine`] derives
//! the first-mover, last-mover, α/β, three-stage, optimistic and
//! pessimistic games from it, and [`polytope`] decides core and anti-core
//! questions about the results with an exact rational simplex ([`lp`]).
//!
//! The [`apps`] module holds the applications: queueing, bankruptcy,
//! airport, joint production, minimum-cost spanning trees and river
//! sharing.

pub mod apps;
pub mod cli;
pub mod coalition;
pub mod engine;
pub mod error;
pub mod game;
pub mod gen;
pub mod lp;
pub mod polytope;
pub mod rational;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use game::{Allocation, TuGame};
pub use rational::Rational;

/// Largest supported number of agents; games store `2^n` values.
pub const MAX_AGENTS: usize = 16;
