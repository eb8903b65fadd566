//! Coalitional value functions of staged problems.
//!
//! Given a [`StagedProblem`], an [`Engine`] computes, for each coalition `S`:
//!
//! * `v^F`: `S` optimizes first while everyone else is inactive;
//! * `v^L_min` / `v^L_max`: the complement first plays one of its own
//!   maximizers (the worst or best one for `S`), then `S` optimizes;
//! * `v^α`: the complement may play anything feasible first;
//! * `v^β`: `S` commits first and the complement replies arbitrarily;
//! * `v^{T⊆S}`: `T` first, the complement best-responds, `S∖T` last;
//! * `v^o` / `v^p`: the best and worst of the three-stage values over `T`.

mod audit;
mod explicit;
mod staged;
mod table;
mod values;

pub use audit::{inclusion_claim, AuditReport, Claim, SequentialRow};
pub use explicit::{
    classify_externalities, direct_table, ExplicitDocument, ExplicitProblem, ExternalityClass,
    ExternalityTag, ExternalityWitness, Profile, StagedExplicit,
};
pub use staged::{Move, StagedProblem};
pub use table::{compute_table, GameKind, GameTable, TableRow};
pub use values::{Engine, GrandOptimum, Mode};
