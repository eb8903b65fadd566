//! Property tests for the application adapters.

use feasgames::apps::production::Production;
use feasgames::apps::river::blocks;
use feasgames::engine::{compute_table, Engine, ExternalityTag, GameKind, GameTable, StagedProblem};
use feasgames::gen::{self, CostTrend};
use feasgames::polytope;
use feasgames::{Coalition, TuGame};
use proptest::prelude::*;

fn audit_passes<P: StagedProblem>(p: P, class: ExternalityTag) -> Result<(), String> {
    let engine = Engine::new(p).map_err(|e| e.to_string())?;
    let table = engine.table().map_err(|e| e.to_string())?;
    let report = engine.theorem_audit(&table, class).map_err(|e| e.to_string())?;
    let failed = report.failures().next().map(|c| format!("{}: {:?}", c.id, c.witness));
    failed.map_or(Ok(()), Err)
}

fn same(a: &TuGame, b: &TuGame) -> Option<Coalition> {
    Coalition::all(a.agents()).find(|&s| a.value(s) != b.value(s))
}

fn table_of<P: StagedProblem + Sync>(p: &P) -> GameTable {
    compute_table(p, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn queueing_games_and_rules(seed in any::<u64>(), n in 1usize..=6) {
        let q = gen::queueing(&mut gen::rng(seed), n);
        let (o, p) = (q.optimistic_game(), q.pessimistic_game());
        prop_assert!(o.is_concave());
        prop_assert!(p.is_convex());
        prop_assert!(polytope::in_anti_core(&o, &q.minimal_transfer_rule()).unwrap());
        prop_assert!(polytope::in_core(&p, &q.maximal_transfer_rule()).unwrap());
        prop_assert!(polytope::inclusion_anticore_in_core(&o, &p).unwrap().holds());
    }

    #[test]
    fn queueing_closed_forms_match_engine(seed in any::<u64>(), n in 1usize..=4) {
        let q = gen::queueing(&mut gen::rng(seed), n);
        let t = table_of(&q.staged());
        prop_assert_eq!(same(&t.game(GameKind::Optimistic), &q.optimistic_game()), None);
        prop_assert_eq!(same(&t.game(GameKind::Pessimistic), &q.pessimistic_game()), None);
        prop_assert_eq!(audit_passes(q.staged(), ExternalityTag::Negative), Ok(()));
    }

    #[test]
    fn bankruptcy_duality_and_engine(seed in any::<u64>(), n in 1usize..=4) {
        let b = gen::bankruptcy(&mut gen::rng(seed), n);
        prop_assert_eq!(polytope::duality_check(&b.first_game(), &b.last_game()).unwrap(), None);
        let d = b.discretize().unwrap();
        let t = table_of(&d);
        prop_assert_eq!(same(&t.game(GameKind::First), &b.first_game()), None);
        prop_assert_eq!(same(&t.game(GameKind::LastMin), &b.last_game()), None);
        let engine = Engine::new(&d).unwrap();
        prop_assert!(engine.sequential_efficiency().unwrap().iter().all(|r| r.efficient && r.dual));
        prop_assert_eq!(audit_passes(&d, ExternalityTag::Negative), Ok(()));
    }

    #[test]
    fn airport_duality_and_engine(seed in any::<u64>(), n in 1usize..=4) {
        let a = gen::airport(&mut gen::rng(seed), n);
        prop_assert_eq!(polytope::duality_check(&a.first_game(), &a.last_game()).unwrap(), None);
        let t = table_of(&a.staged());
        prop_assert_eq!(same(&t.game(GameKind::First), &a.first_game()), None);
        prop_assert_eq!(same(&t.game(GameKind::LastMin), &a.last_game()), None);
        let engine = Engine::new(a.staged()).unwrap();
        prop_assert!(engine.sequential_efficiency().unwrap().iter().all(|r| r.efficient && r.dual));
        prop_assert_eq!(audit_passes(a.staged(), ExternalityTag::Positive), Ok(()));
    }

    #[test]
    fn production_chains_by_cost_trend(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = gen::rng(seed);
        let up = Production::new(gen::production(&mut rng, n, CostTrend::NonDecreasing)).unwrap();
        prop_assert_eq!(audit_passes(&up, up.declared_class().unwrap()), Ok(()));
        let down = Production::new(gen::production(&mut rng, n, CostTrend::NonIncreasing)).unwrap();
        prop_assert_eq!(audit_passes(&down, down.declared_class().unwrap()), Ok(()));
        let t = table_of(&down);
        prop_assert!(Coalition::nonempty(n).all(|s| t.value(GameKind::Optimistic, s) >= t.value(GameKind::LastMax, s)));
    }

    #[test]
    fn mcst_invariants(seed in any::<u64>(), n in 1usize..=5) {
        let m = gen::mcst(&mut gen::rng(seed), n);
        let (p, o) = (m.pessimistic_game(), m.optimistic_game());
        prop_assert!(Coalition::all(n).all(|s| o.value(s) >= p.value(s)));
        let bar = m.irreducible_matrix();
        prop_assert_eq!(&bar.irreducible_matrix(), &bar);
        for (row, bar_row) in m.cost.iter().zip(&bar.cost) {
            prop_assert!(row.iter().zip(bar_row).all(|(c, b)| b <= c));
        }
        prop_assert_eq!(bar.grand_tree().cost, m.grand_tree().cost);
        let bird = m.bird_allocation();
        prop_assert!(polytope::in_anti_core(&o, &bird).unwrap());
        prop_assert!(polytope::in_core(&p, &bird).unwrap());
    }

    #[test]
    fn mcst_tree_choice_is_irrelevant(seed in any::<u64>(), n in 1usize..=4) {
        let m = gen::mcst(&mut gen::rng(seed), n);
        let bar = m.irreducible_matrix();
        for tree in m.optimal_trees().unwrap() {
            prop_assert_eq!(&m.irreducible_for(&tree), &bar);
        }
    }

    #[test]
    fn river_chain_and_blocks(seed in any::<u64>(), n in 1usize..=4) {
        let r = gen::river(&mut gen::rng(seed), n, 10);
        let (uti, ats, last) = (r.uti_game(), r.ats_game(), r.last_game());
        let t = table_of(&r);
        let (first, p) = (t.game(GameKind::First), t.game(GameKind::Pessimistic));
        prop_assert_eq!(same(&first, &uti), None);
        prop_assert_eq!(same(&t.game(GameKind::Optimistic), &uti), None);
        prop_assert_eq!(same(&p, &last), None);
        for s in Coalition::all(n) {
            prop_assert!(last.value(s) <= ats.value(s) && ats.value(s) <= uti.value(s));
            let bs = blocks(s);
            prop_assert_eq!(bs.iter().map(|b| b.len()).sum::<usize>(), s.len());
            for b in &bs {
                let members: Vec<usize> = b.members().collect();
                prop_assert!(members.windows(2).all(|w| w[1] == w[0] + 1));
                let (lo, hi) = (members[0], *members.last().unwrap());
                prop_assert!(lo == 0 || !s.contains(lo - 1));
                prop_assert!(!s.contains(hi + 1));
            }
            let consecutive = bs.len() == 1;
            if consecutive && s.contains(n - 1) {
                prop_assert_eq!(ats.value(s), last.value(s));
            }
        }
    }
}
