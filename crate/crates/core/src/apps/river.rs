//! Sharing a river in whole units of water.
//!
//! Locations are ordered upstream to downstream; water entering at a
//! location can only be consumed there or further down. Each agent has
//! strictly decreasing positive marginal benefits per unit.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{ExternalityTag, Move, StagedProblem};
use crate::error::{Error, Result};
use crate::game::{check_agent_count, Allocation, TuGame};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiverInstance {
    /// Units of water entering at each location.
    pub entries: Vec<u32>,
    #[serde(with = "rational::text_matrix")]
    pub marginal_benefits: Vec<Vec<Rational>>,
}

impl RiverInstance {
    pub fn new(entries: Vec<u32>, marginal_benefits: Vec<Vec<Rational>>) -> Result<Self> {
        let r = RiverInstance {
            entries,
            marginal_benefits,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.agents();
        check_agent_count(n)?;
        if self.marginal_benefits.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.marginal_benefits.len(),
            });
        }
        let total = self.total_water() as usize;
        for (i, mb) in self.marginal_benefits.iter().enumerate() {
            if mb.iter().any(|b| !b.is_positive()) || mb.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidInstance(format!(
                    "marginal benefits of agent {} must be positive and strictly decreasing",
                    i + 1
                )));
            }
            if mb.len() < total {
                return Err(Error::InvalidInstance(format!(
                    "agent {} lists {} marginal benefits but the river carries {total} units",
                    i + 1,
                    mb.len()
                )));
            }
        }
        Ok(())
    }

    pub fn agents(&self) -> usize {
        self.entries.len()
    }

    pub fn total_water(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// `b_i(x)`.
    pub fn benefit(&self, agent: usize, units: u32) -> Rational {
        rational::sum(&self.marginal_benefits[agent][..units as usize])
    }

    /// Best total benefit of `members` when only water entering at
    /// `sources` is available, under the upstream-first flow constraints.
    pub fn max_benefit(&self, members: Coalition, sources: Coalition) -> Rational {
        let mut memo = HashMap::new();
        self.solve(0, 0, members, sources, &mut memo)
    }

    fn solve(
        &self,
        location: usize,
        stock: u32,
        members: Coalition,
        sources: Coalition,
        memo: &mut HashMap<(usize, u32), Rational>,
    ) -> Rational {
        if location == self.agents() {
            return Rational::zero();
        }
        if let Some(v) = memo.get(&(location, stock)) {
            return v.clone();
        }
        let available = stock + if sources.contains(location) { self.entries[location] } else { 0 };
        let best = if members.contains(location) {
            (0..=available)
                .map(|x| self.benefit(location, x) + self.solve(location + 1, available - x, members, sources, memo))
                .max()
                .expect("at least the zero option")
        } else {
            self.solve(location + 1, available, members, sources, memo)
        };
        memo.insert((location, stock), best.clone());
        best
    }

    /// [`RiverInstance::max_benefit`] by trying every consumption vector.
    pub fn max_benefit_brute(&self, members: Coalition, sources: Coalition) -> Rational {
        let total: u32 = sources.members().map(|i| self.entries[i]).sum();
        let list: Vec<usize> = members.members().collect();
        let mut x = vec![0u32; list.len()];
        let mut best = Rational::zero();
        loop {
            let feasible = list.iter().enumerate().all(|(k, &i)| {
                let used: u32 = x[..=k].iter().sum();
                let arrived: u32 = (0..=i).filter(|&j| sources.contains(j)).map(|j| self.entries[j]).sum();
                used <= arrived
            });
            if feasible {
                let value = rational::sum(&list.iter().zip(&x).map(|(&i, &u)| self.benefit(i, u)).collect::<Vec<_>>());
                if value > best {
                    best = value;
                }
            }
            let mut d = x.len();
            loop {
                if d == 0 {
                    return best;
                }
                d -= 1;
                if x[d] < total {
                    x[d] += 1;
                    break;
                }
                x[d] = 0;
            }
        }
    }

    /// `v^UTI(S)`: `S` may use all water flowing through its locations.
    pub fn uti_game(&self) -> TuGame {
        let all = Coalition::grand(self.agents());
        TuGame::from_fn(self.agents(), |s| self.max_benefit(s, all)).expect("validated size")
    }

    /// `v^ATS(S)`: each consecutive block of `S` keeps only its own entries.
    pub fn ats_game(&self) -> TuGame {
        TuGame::from_fn(self.agents(), |s| {
            rational::sum(&blocks(s).into_iter().map(|t| self.max_benefit(t, t)).collect::<Vec<_>>())
        })
        .expect("validated size")
    }

    /// `v^L(S)`: zero unless `S` holds the most downstream location, then
    /// the value of the block of `S` ending there on its own entries.
    pub fn last_game(&self) -> TuGame {
        let n = self.agents();
        TuGame::from_fn(n, |s| match blocks(s).last() {
            Some(&t) if t.contains(n - 1) => self.max_benefit(t, t),
            _ => Rational::zero(),
        })
        .expect("validated size")
    }

    /// `y^DI_i = v^UTI({1..i}) − v^UTI({1..i−1})`.
    pub fn downstream_incremental(&self) -> Allocation {
        self.prefix_increments(|s| self.max_benefit(s, Coalition::grand(self.agents())))
    }

    /// The same rule computed from `v^ATS` increments.
    pub fn downstream_incremental_ats(&self) -> Allocation {
        self.prefix_increments(|s| self.max_benefit(s, s))
    }

    fn prefix_increments(&self, value: impl Fn(Coalition) -> Rational) -> Allocation {
        let mut prev = Rational::zero();
        Allocation(
            (0..self.agents())
                .map(|i| {
                    let v = value(Coalition::grand(i + 1));
                    let y = &v - &prev;
                    prev = v;
                    y
                })
                .collect(),
        )
    }

    pub fn declared_class(&self) -> ExternalityTag {
        ExternalityTag::Negative
    }
}

/// Maximal runs of consecutive agents in `s`, upstream first.
pub fn blocks(s: Coalition) -> Vec<Coalition> {
    let mut out: Vec<Coalition> = Vec::new();
    let mut prev: Option<usize> = None;
    for i in s.members() {
        match (prev, out.last_mut()) {
            (Some(p), Some(last)) if p + 1 == i => *last = last.with(i),
            _ => out.push(Coalition::singleton(i)),
        }
        prev = Some(i);
    }
    out
}

/// Staged river use; the state is every agent's consumption so far. A
/// member's label is its number of units.
impl StagedProblem for RiverInstance {
    type State = Vec<u32>;

    fn agents(&self) -> usize {
        self.entries.len()
    }

    fn initial_state(&self) -> Vec<u32> {
        vec![0; self.entries.len()]
    }

    fn moves(&self, coalition: Coalition, state: &Vec<u32>) -> Vec<Move<Vec<u32>>> {
        let mut out = Vec::new();
        let mut next = state.clone();
        self.extend(0, 0, coalition, &mut next, &mut out);
        out
    }
}

impl RiverInstance {
    fn extend(&self, location: usize, slack: i64, c: Coalition, next: &mut Vec<u32>, out: &mut Vec<Move<Vec<u32>>>) {
        if location == self.agents() {
            let shares: Vec<Rational> = c.members().map(|i| self.benefit(i, next[i])).collect();
            out.push(Move {
                label: c.members().map(|i| next[i] as usize).collect(),
                payoff: rational::sum(&shares),
                shares: Some(shares),
                next: next.clone(),
            });
            return;
        }
        let slack = slack + i64::from(self.entries[location]);
        if c.contains(location) {
            let cap = slack.min(self.marginal_benefits[location].len() as i64);
            for x in 0..=cap.max(0) {
                next[location] = x as u32;
                self.extend(location + 1, slack - x, c, next, out);
            }
            next[location] = 0;
        } else {
            let rest = slack - i64::from(next[location]);
            if rest >= 0 {
                self.extend(location + 1, rest, c, next, out);
            }
        }
    }
}
