//! Build a small problem by listing its feasible action profiles, classify
//! its externalities and audit the value functions.

use feasgames::cli::Report;
use feasgames::engine::{classify_externalities, compute_table, Engine, ExplicitProblem, GameKind};
use feasgames::rational::int;

fn main() -> feasgames::Result<()> {
    // Two wells on one aquifer: pumping hard (2) by one agent rules out
    // pumping hard by the other.
    let feasible = vec![
        vec![0, 0],
        vec![1, 0],
        vec![0, 1],
        vec![1, 1],
        vec![2, 0],
        vec![2, 1],
        vec![0, 2],
        vec![1, 2],
    ];
    let revenues = vec![vec![int(0), int(3), int(5)], vec![int(0), int(2), int(6)]];
    let p = ExplicitProblem::new(
        vec!["east".into(), "west".into()],
        vec![vec!["idle".into(), "low".into(), "high".into()]; 2],
        feasible,
        revenues,
    )?;

    let class = classify_externalities(&p);
    println!("externalities: {:?}", class.tag);

    let table = compute_table(&p.staged(), 1)?;
    println!("{}", Report::new("Aquifer", 2).with_table(&table, &GameKind::ALL).to_table());

    let engine = Engine::new(p.staged())?;
    for claim in engine.theorem_audit(&table, class.tag)?.claims {
        println!("{:<40} {}", claim.id, if claim.passed { "ok" } else { "FAILED" });
    }
    Ok(())
}
