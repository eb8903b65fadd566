//! Bankruptcy and airport problems, where moving first and moving last give
//! dual games.

use feasgames::apps::airport::AirportInstance;
use feasgames::apps::bankruptcy::BankruptcyInstance;
use feasgames::engine::Engine;
use feasgames::polytope;
use feasgames::rational::int;

fn main() -> feasgames::Result<()> {
    let b = BankruptcyInstance::new(int(200), vec![int(100), int(200), int(300)])?;
    let (f, l) = (b.first_game(), b.last_game());
    println!("bankruptcy: dual = {}", polytope::duality_check(&f, &l)?.is_none());
    println!("  Shapley of v^F {}", f.shapley());
    let engine = Engine::new(b.discretize()?)?;
    let efficient = engine.sequential_efficiency()?.iter().all(|r| r.efficient && r.dual);
    println!("  sequential play efficient for every split: {efficient}");

    let a = AirportInstance::from_cumulative(vec![1, 2, 2, 3], &[int(4), int(10), int(12)])?;
    let (f, l) = (a.first_game(), a.last_game());
    println!("airport: dual = {}", polytope::duality_check(&f, &l)?.is_none());
    println!("  Shapley of v^F {}", f.shapley());
    let engine = Engine::new(a.staged())?;
    let efficient = engine.sequential_efficiency()?.iter().all(|r| r.efficient && r.dual);
    println!("  sequential play efficient for every split: {efficient}");
    Ok(())
}
