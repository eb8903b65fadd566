//! River sharing: the three games and the downstream incremental rule.

use feasgames::apps::river::RiverInstance;
use feasgames::cli::Report;
use feasgames::polytope;
use feasgames::rational::int;

fn main() -> feasgames::Result<()> {
    let benefits = vec![
        vec![int(9), int(5), int(2), int(1)],
        vec![int(8), int(7), int(3), int(1)],
        vec![int(12), int(6), int(4), int(2)],
    ];
    let r = RiverInstance::new(vec![2, 0, 2], benefits)?;
    let (uti, ats, last) = (r.uti_game(), r.ats_game(), r.last_game());
    let mut report = Report::new("River", r.agents()).with_games(&[("v^UTI", &uti), ("v^ATS", &ats), ("v^L", &last)]);
    let y = r.downstream_incremental();
    report.allocation("downstream incremental", &y);
    println!("{}", report.to_table());
    println!("y in A(v^UTI): {}", polytope::in_anti_core(&uti, &y)?);
    println!("y in C(v^ATS): {}", polytope::in_core(&ats, &y)?);
    println!("y in C(v^L):   {}", polytope::in_core(&last, &y)?);
    Ok(())
}
