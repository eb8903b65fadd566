//! Value-function tables for joint production under decreasing and
//! increasing returns to scale.
//!
//! ```text
//! cargo run --example production_tables
//! ```

use feasgames::apps::production::{Production, ProductionInstance};
use feasgames::cli::Report;
use feasgames::engine::{compute_table, GameKind};
use feasgames::rational::int;
use feasgames::Rational;

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn show(title: &str, instance: ProductionInstance, kinds: &[GameKind]) -> feasgames::Result<()> {
    let p = Production::new(instance)?;
    let table = compute_table(&p, 2)?;
    let mut report = Report::new(title, 3).with_table(&table, kinds);
    report.note(format!("externalities: {:?}", p.declared_class()?));
    println!("{}", report.to_table());
    Ok(())
}

fn main() -> feasgames::Result<()> {
    let utilities = vec![ints(&[6, 3]), ints(&[12, 6]), ints(&[12, 8, 4])];

    // Marginal cost 0, 1, 2, ...: every unit costs more than the last.
    let rising: Vec<Rational> = (0..8).map(int).collect();
    show(
        "Rising marginal cost",
        ProductionInstance::new(utilities.clone(), rising, int(8)),
        &[GameKind::Alpha, GameKind::LastMin, GameKind::LastMax, GameKind::First],
    )?;

    // 14, 9, 7, 3 then 1: the first units are expensive.
    show(
        "Falling marginal cost",
        ProductionInstance::new(utilities, ints(&[14, 9, 7, 3]), int(1)),
        &[GameKind::First, GameKind::LastMin, GameKind::Optimistic, GameKind::Pessimistic],
    )
}
