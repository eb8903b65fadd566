//! Single-machine queueing with linear waiting costs.
//!
//! Agent `i` served in slot `t` earns `−w_i·t`. Outsiders occupying slots can
//! only remove options, so the problem has negative externalities: the
//! optimistic game serves a coalition first, the pessimistic game last.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{ExplicitProblem, Move, StagedProblem};
use crate::error::{Error, Result};
use crate::game::{check_agent_count, Allocation, TuGame};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueingInstance {
    #[serde(with = "rational::text_vec")]
    pub waiting_costs: Vec<Rational>,
}

impl QueueingInstance {
    pub fn new(waiting_costs: Vec<Rational>) -> Result<Self> {
        let q = QueueingInstance { waiting_costs };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        check_agent_count(self.agents())?;
        if let Some(i) = self.waiting_costs.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidInstance(format!(
                "waiting cost of agent {} must be positive",
                i + 1
            )));
        }
        Ok(())
    }

    pub fn agents(&self) -> usize {
        self.waiting_costs.len()
    }

    /// Members of `s` by non-increasing waiting cost, ties by index.
    pub fn served_order(&self, s: Coalition) -> Vec<usize> {
        let mut order: Vec<usize> = s.members().collect();
        order.sort_by(|&a, &b| self.waiting_costs[b].cmp(&self.waiting_costs[a]).then(a.cmp(&b)));
        order
    }

    /// Cost of serving `s` optimally in consecutive slots starting at
    /// `first_slot`.
    fn block_cost(&self, s: Coalition, first_slot: usize) -> Rational {
        self.served_order(s)
            .into_iter()
            .enumerate()
            .fold(rational::zero(), |acc, (k, i)| {
                acc + int((first_slot + k) as i64) * &self.waiting_costs[i]
            })
    }

    /// `v^o`: `S` takes the first `|S|` slots.
    pub fn optimistic_game(&self) -> TuGame {
        TuGame::from_fn(self.agents(), |s| -self.block_cost(s, 1)).expect("validated size")
    }

    /// `v^p`: `S` is served after everyone else.
    pub fn pessimistic_game(&self) -> TuGame {
        let n = self.agents();
        TuGame::from_fn(n, |s| -self.block_cost(s, n - s.len() + 1)).expect("validated size")
    }

    /// Minimal transfer rule: serve by non-increasing waiting cost; each
    /// agent gets half its own cost per predecessor and pays half its
    /// followers' costs.
    pub fn minimal_transfer_rule(&self) -> Allocation {
        self.transfer_rule(true)
    }

    /// Maximal transfer rule: each agent gets half its predecessors' costs
    /// and pays half its own cost per follower.
    pub fn maximal_transfer_rule(&self) -> Allocation {
        self.transfer_rule(false)
    }

    fn transfer_rule(&self, minimal: bool) -> Allocation {
        let n = self.agents();
        let order = self.served_order(Coalition::grand(n));
        let half = rational::frac(1, 2);
        let mut x = vec![rational::zero(); n];
        for (k, &i) in order.iter().enumerate() {
            let w = &self.waiting_costs[i];
            let before = &order[..k];
            let after = &order[k + 1..];
            let own = -(int(k as i64 + 1) * w);
            let transfer = if minimal {
                int(before.len() as i64) * w
                    - rational::sum(after.iter().map(|&j| &self.waiting_costs[j]))
            } else {
                rational::sum(before.iter().map(|&j| &self.waiting_costs[j]))
                    - int(after.len() as i64) * w
            };
            x[i] = own + &half * transfer;
        }
        Allocation(x)
    }

    /// Revenue of an unserved agent: below every slot.
    pub fn null_revenue(&self, agent: usize) -> Rational {
        -(int(self.agents() as i64 + 1) * &self.waiting_costs[agent])
    }

    /// Slot-choice encoding: action `t ≥ 1` is slot `t`, action 0 leaves the
    /// job unserved; no two agents share a slot.
    pub fn explicit_problem(&self) -> Result<ExplicitProblem> {
        let n = self.agents();
        let mut feasible = Vec::new();
        let mut profile = vec![0usize; n];
        fn fill(k: usize, n: usize, used: u32, profile: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == n {
                out.push(profile.clone());
                return;
            }
            for slot in 0..=n {
                if slot > 0 && used >> slot & 1 == 1 {
                    continue;
                }
                profile[k] = slot;
                let used = if slot > 0 { used | 1 << slot } else { used };
                fill(k + 1, n, used, profile, out);
            }
            profile[k] = 0;
        }
        fill(0, n, 0, &mut profile, &mut feasible);
        let revenues = (0..n)
            .map(|i| {
                std::iter::once(self.null_revenue(i))
                    .chain((1..=n).map(|t| -(int(t as i64) * &self.waiting_costs[i])))
                    .collect()
            })
            .collect();
        ExplicitProblem::unnamed(feasible, revenues)
    }

    pub fn staged(&self) -> QueueSlots<'_> {
        QueueSlots { instance: self }
    }
}

/// Staged queueing: the state is the set of occupied slots (bit `t`).
#[derive(Clone, Copy, Debug)]
pub struct QueueSlots<'a> {
    instance: &'a QueueingInstance,
}

impl StagedProblem for QueueSlots<'_> {
    type State = u32;

    fn agents(&self) -> usize {
        self.instance.agents()
    }

    fn initial_state(&self) -> u32 {
        0
    }

    fn moves(&self, coalition: Coalition, state: &u32) -> Vec<Move<u32>> {
        let q = self.instance;
        let n = q.agents();
        let members: Vec<usize> = coalition.members().collect();
        let mut out = Vec::new();
        let mut label = vec![0usize; members.len()];
        fn fill(
            k: usize,
            used: u32,
            members: &[usize],
            label: &mut Vec<usize>,
            q: &QueueingInstance,
            n: usize,
            out: &mut Vec<Move<u32>>,
        ) {
            if k == members.len() {
                let shares: Vec<Rational> = members
                    .iter()
                    .zip(label.iter())
                    .map(|(&i, &t)| {
                        if t == 0 {
                            q.null_revenue(i)
                        } else {
                            -(int(t as i64) * &q.waiting_costs[i])
                        }
                    })
                    .collect();
                out.push(Move {
                    label: label.clone(),
                    payoff: rational::sum(&shares),
                    shares: Some(shares),
                    next: used,
                });
                return;
            }
            for slot in 0..=n {
                if slot > 0 && used >> slot & 1 == 1 {
                    continue;
                }
                label[k] = slot;
                let used = if slot > 0 { used | 1 << slot } else { used };
                fill(k + 1, used, members, label, q, n, out);
            }
            label[k] = 0;
        }
        fill(0, *state, &members, &mut label, q, n, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{classify_externalities, Engine, ExternalityTag, Mode};
    use crate::rational::frac;

    fn q(ws: &[i64]) -> QueueingInstance {
        QueueingInstance::new(ws.iter().map(|&w| int(w)).collect()).unwrap()
    }

    /// Both orders of two agents, written out.
    fn two_agent_oracle(w1: i64, w2: i64) -> [(Coalition, i64, i64); 3] {
        let grand = -std::cmp::min(w1 + 2 * w2, 2 * w1 + w2);
        [
            (Coalition::singleton(0), -w1, -2 * w1),
            (Coalition::singleton(1), -w2, -2 * w2),
            (Coalition::grand(2), grand, grand),
        ]
    }

    #[test]
    fn two_agents_match_enumeration() {
        let inst = q(&[3, 1]);
        let (o, p) = (inst.optimistic_game(), inst.pessimistic_game());
        for (s, vo, vp) in two_agent_oracle(3, 1) {
            assert_eq!(*o.value(s), int(vo));
            assert_eq!(*p.value(s), int(vp));
        }
        assert_eq!(*p.value(Coalition::singleton(0)), int(-6));
    }

    #[test]
    fn transfer_rules_for_two_agents() {
        let inst = q(&[3, 1]);
        assert_eq!(inst.minimal_transfer_rule().0, vec![frac(-7, 2), frac(-3, 2)]);
        assert_eq!(inst.maximal_transfer_rule().0, vec![frac(-9, 2), frac(-1, 2)]);
        assert_eq!(inst.minimal_transfer_rule(), inst.optimistic_game().shapley());
        assert_eq!(inst.maximal_transfer_rule(), inst.pessimistic_game().shapley());
    }

    #[test]
    fn single_agent() {
        let inst = q(&[4]);
        assert_eq!(*inst.optimistic_game().grand_value(), int(-4));
        assert_eq!(*inst.pessimistic_game().grand_value(), int(-4));
        assert_eq!(inst.minimal_transfer_rule().0, vec![int(-4)]);
        assert_eq!(inst.maximal_transfer_rule().0, vec![int(-4)]);
    }

    #[test]
    fn slot_encoding_is_negative_and_matches_engine() {
        let inst = q(&[2, 5, 1]);
        let explicit = inst.explicit_problem().unwrap();
        assert_eq!(classify_externalities(&explicit).tag, ExternalityTag::Negative);
        let e = Engine::new(explicit.staged()).unwrap();
        assert_eq!(e.first_game().unwrap(), inst.optimistic_game());
        assert_eq!(e.last_game(Mode::Min).unwrap(), inst.pessimistic_game());
        let slots = Engine::new(inst.staged()).unwrap();
        assert_eq!(slots.first_game().unwrap(), inst.optimistic_game());
        assert_eq!(slots.pessimistic_game().unwrap(), inst.pessimistic_game());
    }

    #[test]
    fn rejects_nonpositive_costs() {
        assert!(QueueingInstance::new(vec![int(1), int(0)]).is_err());
    }
}
