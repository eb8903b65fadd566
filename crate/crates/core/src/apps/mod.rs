//! Application adapters: closed-form games and staged presentations for the
//! generic engine.

pub mod airport;
pub mod bankruptcy;
pub mod mcst;
pub mod production;
pub mod queueing;
pub mod river;
