//! Optimistic and pessimistic queueing games and the two transfer rules.

use feasgames::apps::queueing::QueueingInstance;
use feasgames::polytope;
use feasgames::rational::{frac, int};

fn main() -> feasgames::Result<()> {
    let q = QueueingInstance::new(vec![int(4), frac(3, 2), int(2), int(1)])?;
    let (o, p) = (q.optimistic_game(), q.pessimistic_game());
    println!("service order: {:?}", q.served_order(o.grand()));

    let (lo, hi) = (q.minimal_transfer_rule(), q.maximal_transfer_rule());
    println!("minimal transfer rule {lo}, Shapley of v^o {}", o.shapley());
    println!("maximal transfer rule {hi}, Shapley of v^p {}", p.shapley());
    println!("v^o concave: {}, v^p convex: {}", o.is_concave(), p.is_convex());
    println!(
        "minimal rule in A(v^o): {}, maximal rule in C(v^p): {}",
        polytope::in_anti_core(&o, &lo)?,
        polytope::in_core(&p, &hi)?
    );
    let inclusion = polytope::inclusion_anticore_in_core(&o, &p)?;
    println!("A(v^o) ⊆ C(v^p): {}", inclusion.holds());
    Ok(())
}
