//! One report builder per subcommand. Builders take parsed instances so
//! they can be driven without files.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::apps::airport::AirportInstance;
use crate::apps::bankruptcy::BankruptcyInstance;
use crate::apps::mcst::McstInstance;
use crate::apps::production::{Production, ProductionInstance};
use crate::apps::queueing::QueueingInstance;
use crate::apps::river::RiverInstance;
use crate::coalition::Coalition;
use crate::engine::{
    classify_externalities, compute_table, direct_table, inclusion_claim, Claim, Engine, ExplicitProblem,
    ExternalityTag, GameKind, GameTable, Mode, StagedProblem,
};
use crate::error::{Error, Result};
use crate::game::TuGame;
use crate::gen;
use crate::polytope::{self, CoreReport, Polytope};

use super::report::Report;

/// Largest move count per coalition for which an application report also
/// runs the generic engine.
pub const ENGINE_BUDGET: u64 = 20_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub games: Option<Vec<GameKind>>,
    pub audit: bool,
    pub jobs: usize,
    pub seed: u64,
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn agree(id: &str, statement: &str, a: &TuGame, b: &TuGame) -> Claim {
    let witness = Coalition::all(a.agents())
        .find(|&s| a.value(s) != b.value(s))
        .map(|s| format!("{s}: {} vs {}", a.value(s), b.value(s)));
    Claim::new(id, statement, witness)
}

fn membership(id: &str, statement: &str, violation: Option<Coalition>) -> Claim {
    Claim::new(id, statement, violation.map(|s| format!("violated at {s}")))
}

fn theorem_claims<P: StagedProblem>(
    engine: &Engine<P>,
    table: &GameTable,
    class: ExternalityTag,
) -> Result<Vec<Claim>> {
    Ok(engine.theorem_audit(table, class)?.claims)
}

pub fn explicit(p: &ExplicitProblem, opts: &Options) -> Result<Report> {
    let kinds = opts.games.clone().unwrap_or_else(|| GameKind::ALL.to_vec());
    let table = compute_table(&p.staged(), opts.jobs)?;
    let class = classify_externalities(p);
    let mut report = Report::new("Explicit problem", p.agents()).with_table(&table, &kinds);
    report.note(format!("externalities: {:?}", class.tag));
    for (what, w) in [("lost", &class.lost), ("gained", &class.gained)] {
        if let Some(w) = w {
            report.note(format!(
                "{what} action for {} when outsiders play {:?}: {:?}",
                w.coalition, w.outsiders, w.action
            ));
        }
    }
    if opts.audit {
        let direct = direct_table(p);
        let mismatch = table
            .rows
            .iter()
            .zip(&direct.rows)
            .find(|(a, b)| a != b)
            .map(|(a, _)| format!("first difference at {}", a.coalition));
        report
            .checks
            .push(Claim::new("staged-equals-direct", "staged and direct tables agree", mismatch));
        let engine = Engine::new(p.staged())?;
        report.checks.extend(theorem_claims(&engine, &table, class.tag)?);
    }
    Ok(report)
}

pub fn production(inst: ProductionInstance, opts: &Options) -> Result<Report> {
    let kinds = opts
        .games
        .clone()
        .or_else(|| inst.columns.clone())
        .unwrap_or_else(|| GameKind::ALL.to_vec());
    let p = Production::new(inst)?;
    let table = compute_table(&p, opts.jobs)?;
    let mut report = Report::new("Joint production", p.agents()).with_table(&table, &kinds);
    let class = match p.declared_class() {
        Ok(tag) => tag,
        Err(_) => {
            report.note("marginal costs are not monotone: only class-free claims apply");
            ExternalityTag::Mixed
        }
    };
    report.note(format!("declared externalities: {class:?}"));
    if opts.audit {
        let engine = Engine::new(&p)?;
        report.checks.extend(theorem_claims(&engine, &table, class)?);
    }
    Ok(report)
}

pub fn queueing(q: &QueueingInstance, opts: &Options) -> Result<Report> {
    q.validate()?;
    let (o, p) = (q.optimistic_game(), q.pessimistic_game());
    let mut report = Report::new("Queueing", q.agents()).with_games(&[("v^o", &o), ("v^p", &p)]);
    let (min_rule, max_rule) = (q.minimal_transfer_rule(), q.maximal_transfer_rule());
    report.allocation("minimal transfer", &min_rule);
    report.allocation("maximal transfer", &max_rule);
    if opts.audit {
        let c = &mut report.checks;
        c.push(Claim::check("minimal-is-shapley", "minimal transfer rule = Sh(v^o)", min_rule == o.shapley(), || {
            format!("Sh(v^o) = {:?}", o.shapley().0)
        }));
        c.push(Claim::check("maximal-is-shapley", "maximal transfer rule = Sh(v^p)", max_rule == p.shapley(), || {
            format!("Sh(v^p) = {:?}", p.shapley().0)
        }));
        c.push(Claim::new(
            "optimistic-concave",
            "v^o is concave",
            o.concavity_violation().map(|v| format!("{v:?}")),
        ));
        c.push(Claim::new(
            "pessimistic-convex",
            "v^p is convex",
            p.convexity_violation().map(|v| format!("{v:?}")),
        ));
        c.push(membership("minimal-in-anticore", "minimal rule ∈ A(v^o)", polytope::anti_core_violation(&o, &min_rule)?));
        c.push(membership("maximal-in-core", "maximal rule ∈ C(v^p)", polytope::core_violation(&p, &max_rule)?));
        c.push(inclusion_claim("optimistic-in-pessimistic", "A(v^o) ⊆ C(v^p)", &o, &p)?);
        if q.agents() <= 5 {
            let engine = Engine::new(q.staged())?;
            c.push(agree("engine-first", "engine v^F = v^o", &engine.first_game()?, &o));
            c.push(agree("engine-last-min", "engine v^L_min = v^p", &engine.last_game(Mode::Min)?, &p));
        } else {
            report.note("engine cross-check skipped above 5 agents");
        }
    }
    Ok(report)
}

pub fn bankruptcy(b: &BankruptcyInstance, opts: &Options) -> Result<Report> {
    b.validate()?;
    let (f, l) = (b.first_game(), b.last_game());
    let mut report = Report::new("Bankruptcy", b.agents()).with_games(&[("v^F", &f), ("v^L", &l)]);
    report.allocation("Sh(v^F)", &f.shapley());
    if opts.audit {
        report
            .checks
            .push(Claim::new("duality", "v^L is the dual of v^F", polytope::duality_check(&f, &l)?.map(|s| s.to_string())));
        let d = b.discretize()?;
        let moves: u64 = d.claims.iter().map(|&c| c as u64 + 1).product();
        if moves <= ENGINE_BUDGET {
            let engine = Engine::new(&d)?;
            let table = engine.table()?;
            let c = &mut report.checks;
            c.push(agree("engine-first", "engine v^F = min(c(S), E)", &table.game(GameKind::First), &f));
            c.push(agree("engine-last-min", "engine v^L_min = max(E − c(N∖S), 0)", &table.game(GameKind::LastMin), &l));
            c.push(sequential(&engine)?);
            c.extend(theorem_claims(&engine, &table, ExternalityTag::Negative)?);
        } else {
            report.note("engine cross-check skipped: too many estate units");
        }
    }
    Ok(report)
}

fn sequential<P: StagedProblem>(engine: &Engine<P>) -> Result<Claim> {
    let rows = engine.sequential_efficiency()?;
    let bad = rows.iter().find(|r| !(r.efficient && r.dual));
    Ok(Claim::new(
        "sequential-efficiency",
        "S first then N∖S reaches the grand optimum, and v^F(S) + v^L_min(N∖S) = v(N)",
        bad.map(|r| format!("{} (efficient: {}, dual: {})", r.coalition, r.efficient, r.dual)),
    ))
}

pub fn airport(a: &AirportInstance, opts: &Options) -> Result<Report> {
    a.validate()?;
    let (f, l) = (a.first_game(), a.last_game());
    let mut report = Report::new("Airport", a.agents()).with_games(&[("v^F", &f), ("v^L", &l)]);
    report.allocation("Sh(v^F)", &f.shapley());
    if opts.audit {
        report
            .checks
            .push(Claim::new("duality", "v^L is the dual of v^F", polytope::duality_check(&f, &l)?.map(|s| s.to_string())));
        let per_agent = a.segment_costs.len() as u64 + 2;
        if per_agent.checked_pow(a.agents() as u32).is_some_and(|m| m <= ENGINE_BUDGET) {
            let staged = a.staged();
            let engine = Engine::new(staged)?;
            let table = engine.table()?;
            let c = &mut report.checks;
            c.push(agree("engine-first", "engine v^F = −c(max l_S)", &table.game(GameKind::First), &f));
            c.push(agree("engine-last-min", "engine v^L_min = closed form", &table.game(GameKind::LastMin), &l));
            c.push(sequential(&engine)?);
            c.extend(theorem_claims(&engine, &table, ExternalityTag::Positive)?);
        } else {
            report.note("engine cross-check skipped: instance too large");
        }
    }
    Ok(report)
}

pub fn mcst(m: &McstInstance, opts: &Options) -> Result<Report> {
    m.validate()?;
    let n = m.agents();
    let (p, o) = (m.pessimistic_game(), m.optimistic_game());
    let bar = m.irreducible_matrix();
    let (bar_p, bar_o) = (bar.pessimistic_game(), bar.optimistic_game());
    let mut report = Report::new("Minimum cost spanning tree", n).with_games(&[
        ("v^p", &p),
        ("v^o", &o),
        ("bar v^p", &bar_p),
        ("bar v^o", &bar_o),
    ]);
    let bird = m.bird_allocation();
    report.allocation("Bird", &bird);
    if opts.audit {
        let orders = if n <= 4 {
            polytope::all_orders(n)
        } else {
            polytope::sample_orders(n, 24, &mut gen::rng(opts.seed))
        };
        let audit = m.irreducible_core_audit(&orders)?;
        let c = &mut report.checks;
        c.push(Claim::new("irreducible-duality", "bar v^p and bar v^o are dual", audit.duality.map(|s| s.to_string())));
        c.push(Claim::new(
            "irreducible-optimistic",
            "bar v^o = v^o",
            audit.optimistic_mismatch.map(|s| s.to_string()),
        ));
        c.push(Claim::new(
            "irreducible-core",
            "extreme points of A(v^o) and C(bar v^p) agree",
            audit.cross.map(|(poly, x)| format!("{poly:?} vertex {:?}", x.0)),
        ));
        c.push(membership("bird-in-anticore", "Bird ∈ A(v^o)", polytope::anti_core_violation(&o, &bird)?));
        c.push(membership("bird-in-core", "Bird ∈ C(v^p)", polytope::core_violation(&p, &bird)?));
        c.push(Claim::check("irreducible-fixed-point", "the irreducible matrix is its own irreducible matrix", bar.irreducible_matrix() == bar, String::new));
        if n <= 4 {
            let engine = Engine::new(m.staged())?;
            let table = engine.table()?;
            c.push(agree("engine-first", "engine v^F = −mst(S ∪ {0})", &table.game(GameKind::First), &p));
            c.push(agree("engine-last-min", "engine v^L_min = v^o", &table.game(GameKind::LastMin), &o));
            c.push(agree("engine-last-max", "engine v^L_max = v^o", &table.game(GameKind::LastMax), &o));
            c.push(agree("engine-pessimistic", "engine v^p = −mst(S ∪ {0})", &table.game(GameKind::Pessimistic), &p));
            c.extend(theorem_claims(&engine, &table, m.declared_class())?);
        } else {
            report.note("engine cross-check skipped above 4 agents");
        }
    }
    Ok(report)
}

pub fn river(r: &RiverInstance, opts: &Options) -> Result<Report> {
    r.validate()?;
    let n = r.agents();
    let (uti, ats, last) = (r.uti_game(), r.ats_game(), r.last_game());
    let mut report = Report::new("River sharing", n).with_games(&[("v^UTI", &uti), ("v^ATS", &ats), ("v^L", &last)]);
    let y = r.downstream_incremental();
    report.allocation("downstream incremental", &y);
    if opts.audit {
        let c = &mut report.checks;
        let chain = Coalition::all(n)
            .find(|&s| !(last.value(s) <= ats.value(s) && ats.value(s) <= uti.value(s)))
            .map(|s| s.to_string());
        c.push(Claim::new("chain", "v^L ≤ v^ATS ≤ v^UTI", chain));
        let y_ats = r.downstream_incremental_ats();
        c.push(Claim::check("increments-agree", "y^DI from v^UTI = y^DI from v^ATS", y == y_ats, || {
            format!("{:?}", y_ats.0)
        }));
        c.push(membership("di-in-anticore", "y^DI ∈ A(v^UTI)", polytope::anti_core_violation(&uti, &y)?));
        c.push(membership("di-in-ats-core", "y^DI ∈ C(v^ATS)", polytope::core_violation(&ats, &y)?));
        c.push(membership("di-in-last-core", "y^DI ∈ C(v^L)", polytope::core_violation(&last, &y)?));
        if r.total_water() <= 10 {
            let all = Coalition::grand(n);
            let bad = Coalition::all(n)
                .find(|&s| r.max_benefit(s, all) != r.max_benefit_brute(s, all) || r.max_benefit(s, s) != r.max_benefit_brute(s, s))
                .map(|s| s.to_string());
            c.push(Claim::new("dp-matches-enumeration", "the DP solver matches full enumeration", bad));
        }
        let moves = (u64::from(r.total_water()) + 1).checked_pow(n as u32);
        if moves.is_some_and(|m| m <= ENGINE_BUDGET) {
            let engine = Engine::new(r)?;
            let table = compute_table(r, opts.jobs)?;
            c.push(agree("engine-first", "engine v^F = v^UTI", &table.game(GameKind::First), &uti));
            c.push(agree("engine-optimistic", "engine v^o = v^UTI", &table.game(GameKind::Optimistic), &uti));
            c.push(agree("engine-pessimistic", "engine v^p = v^L", &table.game(GameKind::Pessimistic), &last));
            c.extend(theorem_claims(&engine, &table, r.declared_class())?);
        } else {
            report.note("engine cross-check skipped: too much water");
        }
    }
    Ok(report)
}

pub fn shapley(g: &TuGame) -> Report {
    let mut report = Report::new("Shapley value", g.agents()).with_games(&[("v", g)]);
    report.allocation("Shapley", &g.shapley());
    report
}

pub fn polytope_report(g: &TuGame, which: Polytope, opts: &Options) -> Result<Report> {
    let (title, result) = match which {
        Polytope::Core => ("Core", polytope::core_nonempty(g)?),
        Polytope::AntiCore => ("Anti-core", polytope::anti_core_nonempty(g)?),
    };
    let mut report = Report::new(title, g.agents()).with_games(&[("v", g)]);
    match &result {
        CoreReport::Nonempty(x) => {
            report.note("nonempty");
            report.allocation("point", x);
            if opts.audit {
                let v = polytope::violation(g, which, x)?;
                report.checks.push(membership("point-member", "the point satisfies every constraint", v));
            }
        }
        CoreReport::Empty(w) => {
            report.note("empty");
            for weight in &w.weights {
                report.note(format!("λ{} = {}", weight.coalition, crate::rational::format(&weight.weight)));
            }
            report.note(format!("Σ λ_S v(S) = {}", crate::rational::format(&w.weighted_value(g))));
            if opts.audit {
                report.checks.push(Claim::check("certificate-balanced", "weights are balanced", w.is_balanced(), String::new));
                report.checks.push(Claim::check(
                    "certificate-violates",
                    "weights violate the balancedness condition",
                    w.certifies_empty(g, which),
                    String::new,
                ));
            }
        }
    }
    Ok(report)
}

/// Instance kinds produced by `gen`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    Queueing,
    /// Non-decreasing marginal costs.
    Production,
    /// Non-increasing marginal costs.
    ProductionDecreasing,
    Bankruptcy,
    Airport,
    Mcst,
    River,
    Explicit,
    Game,
}

/// `count` instances, one JSON document per line.
pub fn generate(kind: GenKind, agents: usize, count: usize, seed: u64) -> Result<String> {
    if agents == 0 {
        return Err(Error::NoAgents);
    }
    crate::game::check_agent_count(agents)?;
    let mut rng = gen::rng(seed);
    let mut out = String::new();
    for _ in 0..count {
        let line = match kind {
            GenKind::Queueing => serde_json::to_string(&gen::queueing(&mut rng, agents))?,
            GenKind::Production => {
                serde_json::to_string(&gen::production(&mut rng, agents, gen::CostTrend::NonDecreasing))?
            }
            GenKind::ProductionDecreasing => {
                serde_json::to_string(&gen::production(&mut rng, agents, gen::CostTrend::NonIncreasing))?
            }
            GenKind::Bankruptcy => serde_json::to_string(&gen::bankruptcy(&mut rng, agents))?,
            GenKind::Airport => serde_json::to_string(&gen::airport(&mut rng, agents))?,
            GenKind::Mcst => serde_json::to_string(&gen::mcst(&mut rng, agents))?,
            GenKind::River => serde_json::to_string(&gen::river(&mut rng, agents, 10))?,
            GenKind::Explicit => serde_json::to_string(&gen::explicit(&mut rng, agents.min(3), 4).to_document())?,
            GenKind::Game => serde_json::to_string(&gen::game(&mut rng, agents).to_document())?,
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
