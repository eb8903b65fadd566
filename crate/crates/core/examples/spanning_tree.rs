//! Minimum cost spanning tree: Bird allocation, irreducible matrix and the
//! engine's first-mover games.

use feasgames::apps::mcst::McstInstance;
use feasgames::engine::{compute_table, GameKind};
use feasgames::polytope;
use feasgames::rational::int;
use feasgames::Coalition;

fn main() -> feasgames::Result<()> {
    let raw = [[0, 6, 9, 4], [6, 0, 2, 8], [9, 2, 0, 3], [4, 8, 3, 0]];
    let m = McstInstance::new(raw.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect())?;
    let tree = m.grand_tree();
    println!("optimal tree {:?} costs {}", tree.edges(), tree.cost);
    println!("Bird allocation {}", m.bird_allocation());

    let bar = m.irreducible_matrix();
    for row in &bar.cost {
        println!("  {}", row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
    }
    let audit = m.irreducible_core_audit(&polytope::all_orders(m.agents()))?;
    println!("irreducible core audit passed: {}", audit.passed());

    // A first-moving coalition can only wire to nodes already connected,
    // so its pessimistic value can fall below its stand-alone cost.
    let table = compute_table(&m.staged(), 1)?;
    let closed = m.pessimistic_game();
    for s in Coalition::nonempty(m.agents()) {
        println!(
            "{:<8} stand-alone {:>4}  v^F {:>4}  v^p {:>4}",
            s.to_string(),
            closed.value(s).to_string(),
            table.value(GameKind::First, s).to_string(),
            table.value(GameKind::Pessimistic, s).to_string()
        );
    }
    Ok(())
}
