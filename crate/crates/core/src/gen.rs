//! Seeded random instances for property sweeps.
//!
//! Every generator draws only small integers so that the exhaustive engine
//! stays fast; the same seed always yields the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apps::airport::AirportInstance;
use crate::apps::bankruptcy::BankruptcyInstance;
use crate::apps::mcst::McstInstance;
use crate::apps::production::ProductionInstance;
use crate::apps::queueing::QueueingInstance;
use crate::apps::river::RiverInstance;
use crate::engine::ExplicitProblem;
use crate::game::TuGame;
use crate::rational::{frac, int, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Direction of the marginal cost sequence of a production instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostTrend {
    NonDecreasing,
    NonIncreasing,
}

/// Waiting costs in halves between 1/2 and 8, with occasional ties.
pub fn queueing(rng: &mut impl Rng, n: usize) -> QueueingInstance {
    let w = (0..n).map(|_| frac(rng.gen_range(1..=16), 2)).collect();
    QueueingInstance::new(w).expect("positive costs")
}

pub fn production(rng: &mut impl Rng, n: usize, trend: CostTrend) -> ProductionInstance {
    let utilities: Vec<Vec<Rational>> = (0..n)
        .map(|_| {
            let cap = rng.gen_range(1..=3);
            let mut u = rng.gen_range(0..=12i64);
            (0..cap)
                .map(|_| {
                    let v = int(u);
                    u = (u - rng.gen_range(0..=4)).max(0);
                    v
                })
                .collect()
        })
        .collect();
    let total: usize = utilities.iter().map(Vec::len).sum();
    let mut c = match trend {
        CostTrend::NonDecreasing => rng.gen_range(0..=3i64),
        CostTrend::NonIncreasing => rng.gen_range(6..=14i64),
    };
    let costs: Vec<Rational> = (0..total)
        .map(|_| {
            let v = int(c);
            let step = rng.gen_range(0..=3);
            c = match trend {
                CostTrend::NonDecreasing => c + step,
                CostTrend::NonIncreasing => (c - step).max(0),
            };
            v
        })
        .collect();
    let tail = costs.last().cloned().unwrap_or_else(|| int(c));
    ProductionInstance::new(utilities, costs, tail)
}

/// Claims on a common unit so the discretized engine stays small.
pub fn bankruptcy(rng: &mut impl Rng, n: usize) -> BankruptcyInstance {
    let unit = int(rng.gen_range(1..=5));
    loop {
        let units: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let total: i64 = units.iter().sum();
        if total == 0 {
            continue;
        }
        let estate = rng.gen_range(0..total);
        let claims = units.iter().map(|&k| int(k) * &unit).collect();
        return BankruptcyInstance::new(int(estate) * &unit, claims).expect("claims exceed the estate");
    }
}

pub fn airport(rng: &mut impl Rng, n: usize) -> AirportInstance {
    let len = rng.gen_range(1..=3);
    let lengths = (0..n).map(|_| rng.gen_range(1..=len)).collect();
    let segments = (0..len).map(|_| int(rng.gen_range(0..=6))).collect();
    AirportInstance::new(lengths, segments).expect("lengths within the runway")
}

pub fn mcst(rng: &mut impl Rng, n: usize) -> McstInstance {
    let k = n + 1;
    let mut cost = vec![vec![int(0); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let c = int(rng.gen_range(1..=12));
            cost[i][j] = c.clone();
            cost[j][i] = c;
        }
    }
    McstInstance::new(cost).expect("symmetric nonnegative")
}

/// At most `max_water` units in total.
pub fn river(rng: &mut impl Rng, n: usize, max_water: u32) -> RiverInstance {
    let mut entries: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    while entries.iter().sum::<u32>() > max_water {
        let i = rng.gen_range(0..n);
        entries[i] = entries[i].saturating_sub(1);
    }
    let total = entries.iter().sum::<u32>().max(1) as usize;
    let benefits = (0..n)
        .map(|_| {
            let mut b = 4 * total as i64 + rng.gen_range(1..=10);
            (0..total)
                .map(|_| {
                    let v = int(b);
                    b -= rng.gen_range(1..=4);
                    v
                })
                .collect()
        })
        .collect();
    RiverInstance::new(entries, benefits).expect("benefits stay positive")
}

/// An explicit problem with `2..=max_actions` actions per agent and a
/// random set of feasible profiles containing the all-null one.
pub fn explicit(rng: &mut impl Rng, n: usize, max_actions: usize) -> ExplicitProblem {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_actions.max(2))).collect();
    let mut feasible = Vec::new();
    let mut profile = vec![0usize; n];
    'outer: loop {
        if profile.iter().all(|&a| a == 0) || rng.gen_bool(0.5) {
            feasible.push(profile.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if profile[k] + 1 < sizes[k] {
                profile[k] += 1;
                break;
            }
            profile[k] = 0;
        }
    }
    feasible.shuffle(rng);
    let revenues = sizes
        .iter()
        .map(|&m| (0..m).map(|_| int(rng.gen_range(-4..=9))).collect())
        .collect();
    ExplicitProblem::unnamed(feasible, revenues).expect("contains the null profile")
}

/// A game with small integer values.
pub fn game(rng: &mut impl Rng, n: usize) -> TuGame {
    TuGame::from_fn(n, |s| {
        if s.is_empty() {
            int(0)
        } else {
            int(rng.gen_range(-6..=12))
        }
    })
    .expect("small agent count")
}
