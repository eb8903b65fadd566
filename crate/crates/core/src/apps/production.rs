//! Joint production of a homogeneous good in discrete units.
//!
//! Each agent has a list of marginal utilities (its quantity cap is the list
//! length); the shared technology has a marginal-cost sequence given by an
//! explicit prefix followed by a constant tail. A coalition moving after
//! others have produced `Q` units pays exactly the incremental cost
//! `C(Q + q) − C(Q)` of its own `q` units.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{ExternalityTag, GameKind, Move, StagedProblem};
use crate::error::{Error, Result};
use crate::game::check_agent_count;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductionInstance {
    #[serde(with = "rational::text_matrix")]
    pub marginal_utilities: Vec<Vec<Rational>>,
    #[serde(with = "rational::text_vec")]
    pub marginal_costs: Vec<Rational>,
    #[serde(with = "rational::text")]
    pub cost_tail: Rational,
    /// Preferred table columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<GameKind>>,
}

/// A validated production problem with cumulative cost and utility tables.
#[derive(Clone, Debug)]
pub struct Production {
    instance: ProductionInstance,
    /// `cost[q] = C(q)` for every reachable total `q`.
    cost: Vec<Rational>,
    /// `utility[i][q] = u_i(q)`.
    utility: Vec<Vec<Rational>>,
}

impl ProductionInstance {
    pub fn new(marginal_utilities: Vec<Vec<Rational>>, marginal_costs: Vec<Rational>, cost_tail: Rational) -> Self {
        ProductionInstance {
            marginal_utilities,
            marginal_costs,
            cost_tail,
            columns: None,
        }
    }

    pub fn marginal_cost(&self, unit: usize) -> &Rational {
        self.marginal_costs.get(unit).unwrap_or(&self.cost_tail)
    }
}

impl Production {
    pub fn new(instance: ProductionInstance) -> Result<Self> {
        let n = instance.marginal_utilities.len();
        check_agent_count(n)?;
        for (i, mu) in instance.marginal_utilities.iter().enumerate() {
            if mu.iter().any(Signed::is_negative) || mu.windows(2).any(|w| w[1] > w[0]) {
                return Err(Error::InvalidInstance(format!(
                    "marginal utilities of agent {} must be nonnegative and non-increasing",
                    i + 1
                )));
            }
        }
        if instance.marginal_costs.iter().any(Signed::is_negative) || instance.cost_tail.is_negative() {
            return Err(Error::InvalidInstance("marginal costs must be nonnegative".into()));
        }
        let total: usize = instance.marginal_utilities.iter().map(Vec::len).sum();
        let mut cost = Vec::with_capacity(total + 1);
        cost.push(Rational::zero());
        for unit in 0..total {
            let next = &cost[unit] + instance.marginal_cost(unit);
            cost.push(next);
        }
        let utility = instance
            .marginal_utilities
            .iter()
            .map(|mu| {
                let mut u = vec![Rational::zero()];
                for m in mu {
                    let next = u.last().expect("starts with zero") + m;
                    u.push(next);
                }
                u
            })
            .collect();
        Ok(Production {
            instance,
            cost,
            utility,
        })
    }

    pub fn instance(&self) -> &ProductionInstance {
        &self.instance
    }

    pub fn cap(&self, agent: usize) -> usize {
        self.utility[agent].len() - 1
    }

    /// `C(q)`.
    pub fn cost(&self, units: usize) -> &Rational {
        &self.cost[units]
    }

    /// Negative when marginal costs never fall over the reachable range,
    /// Positive when they never rise, Neutral when constant.
    pub fn declared_class(&self) -> Result<ExternalityTag> {
        let steps: Vec<Rational> = self.cost.windows(2).map(|w| &w[1] - &w[0]).collect();
        let rising = steps.windows(2).all(|w| w[1] >= w[0]);
        let falling = steps.windows(2).all(|w| w[1] <= w[0]);
        match (rising, falling) {
            (true, true) => Ok(ExternalityTag::Neutral),
            (true, false) => Ok(ExternalityTag::Negative),
            (false, true) => Ok(ExternalityTag::Positive),
            (false, false) => Err(Error::InvalidInstance(
                "marginal costs are neither non-decreasing nor non-increasing".into(),
            )),
        }
    }
}

impl StagedProblem for Production {
    /// Total units produced so far.
    type State = usize;

    fn agents(&self) -> usize {
        self.utility.len()
    }

    fn initial_state(&self) -> usize {
        0
    }

    fn moves(&self, coalition: Coalition, state: &usize) -> Vec<Move<usize>> {
        let members: Vec<usize> = coalition.members().collect();
        let mut moves = Vec::new();
        let mut quantities = vec![0usize; members.len()];
        loop {
            let mut shares = Vec::with_capacity(members.len());
            let mut produced = *state;
            for (k, &i) in members.iter().enumerate() {
                let q = quantities[k];
                let paid = &self.cost[produced + q] - &self.cost[produced];
                shares.push(&self.utility[i][q] - paid);
                produced += q;
            }
            moves.push(Move {
                label: quantities.clone(),
                payoff: rational::sum(&shares),
                shares: Some(shares),
                next: produced,
            });
            // Advance the mixed-radix counter; the last member varies fastest.
            let mut k = members.len();
            loop {
                if k == 0 {
                    return moves;
                }
                k -= 1;
                if quantities[k] < self.cap(members[k]) {
                    quantities[k] += 1;
                    break;
                }
                quantities[k] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Engine, Mode};
    use crate::rational::int;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn padded(xs: &[i64], len: usize) -> Vec<Rational> {
        let mut v = ints(xs);
        v.resize(len, int(0));
        v
    }

    pub(crate) fn decreasing_returns() -> Production {
        let mu = vec![padded(&[6, 3], 12), padded(&[12, 6], 12), padded(&[12, 8, 4], 12)];
        let mc: Vec<Rational> = (0..36).map(int).collect();
        Production::new(ProductionInstance::new(mu, mc, int(36))).unwrap()
    }

    pub(crate) fn increasing_returns() -> Production {
        let mu = vec![ints(&[6, 3]), ints(&[12, 6]), ints(&[12, 8, 4])];
        Production::new(ProductionInstance::new(mu, ints(&[14, 9, 7, 3]), int(1))).unwrap()
    }

    #[test]
    fn maximizers_of_two_and_three() {
        let p = decreasing_returns();
        let e = Engine::new(&p).unwrap();
        let s = Coalition::from_members([1, 2]);
        let labels: Vec<Vec<usize>> = e
            .maximizer_set(s, &0)
            .unwrap()
            .into_iter()
            .map(|m| m.label)
            .collect();
        assert_eq!(labels, vec![vec![2, 2], vec![2, 3]]);
        assert_eq!(e.first(s).unwrap(), int(32));
    }

    #[test]
    fn last_mover_after_worst_and_best_maximizer() {
        let p = decreasing_returns();
        let e = Engine::new(&p).unwrap();
        let one = Coalition::singleton(0);
        assert_eq!(e.last(one, Mode::Min).unwrap(), int(1));
        assert_eq!(e.last(one, Mode::Max).unwrap(), int(2));
        assert_eq!(e.alpha(one).unwrap(), int(0));
    }

    #[test]
    fn increasing_returns_three_first() {
        let p = increasing_returns();
        let e = Engine::new(&p).unwrap();
        let s = Coalition::from_members([1, 2]);
        let labels: Vec<Vec<usize>> = e
            .maximizer_set(s, &0)
            .unwrap()
            .into_iter()
            .map(|m| m.label)
            .collect();
        assert_eq!(labels, vec![vec![2, 3]]);
        assert_eq!(e.first(Coalition::singleton(0)).unwrap(), int(0));
        assert_eq!(e.last(Coalition::singleton(0), Mode::Min).unwrap(), int(7));
        assert_eq!(
            e.stage(Coalition::singleton(2), s, Mode::Min).unwrap(),
            int(10)
        );
        assert_eq!(e.grand_optimum().unwrap().value, int(15));
    }

    #[test]
    fn declared_classes() {
        assert_eq!(decreasing_returns().declared_class().unwrap(), ExternalityTag::Negative);
        assert_eq!(increasing_returns().declared_class().unwrap(), ExternalityTag::Positive);
        let flat = Production::new(ProductionInstance::new(vec![ints(&[3, 1])], vec![], int(2))).unwrap();
        assert_eq!(flat.declared_class().unwrap(), ExternalityTag::Neutral);
        let bumpy = Production::new(ProductionInstance::new(
            vec![ints(&[3, 2, 1])],
            ints(&[1, 3, 2]),
            int(2),
        ))
        .unwrap();
        assert!(bumpy.declared_class().is_err());
    }

    #[test]
    fn zero_utilities_give_zero_games() {
        let p = Production::new(ProductionInstance::new(
            vec![ints(&[0, 0]), ints(&[0])],
            ints(&[1, 2]),
            int(3),
        ))
        .unwrap();
        let t = Engine::new(&p).unwrap().table().unwrap();
        for r in &t.rows {
            for k in GameKind::ALL {
                assert_eq!(*r.value(k), int(0));
            }
        }
    }

    #[test]
    fn rejects_increasing_utilities() {
        let bad = ProductionInstance::new(vec![ints(&[1, 2])], vec![], int(0));
        assert!(Production::new(bad).is_err());
    }

    fn column(t: &crate::engine::GameTable, kind: GameKind) -> Vec<Rational> {
        t.display_rows().iter().map(|r| r.value(kind).clone()).collect()
    }

    #[test]
    fn decreasing_returns_table_and_audit() {
        let p = decreasing_returns();
        let e = Engine::new(&p).unwrap();
        let t = e.table().unwrap();
        assert_eq!(column(&t, GameKind::Alpha), ints(&[0, 0, 0, 0, 0, 0, 34]));
        assert_eq!(column(&t, GameKind::LastMin), ints(&[1, 9, 11, 12, 17, 24, 34]));
        assert_eq!(column(&t, GameKind::LastMax), ints(&[2, 9, 13, 12, 17, 24, 34]));
        assert_eq!(column(&t, GameKind::First), ints(&[8, 17, 21, 21, 24, 32, 34]));
        assert_eq!(column(&t, GameKind::Beta), column(&t, GameKind::First));
        let audit = e.theorem_audit(&t, p.declared_class().unwrap()).unwrap();
        assert!(audit.passed(), "{:?}", audit.failures().collect::<Vec<_>>());
    }

    #[test]
    fn increasing_returns_table_and_audit() {
        let p = increasing_returns();
        let e = Engine::new(&p).unwrap();
        let t = e.table().unwrap();
        assert_eq!(column(&t, GameKind::First), ints(&[0, 0, 0, 0, 0, 8, 15]));
        assert_eq!(column(&t, GameKind::LastMin), ints(&[7, 0, 0, 0, 0, 8, 15]));
        assert_eq!(column(&t, GameKind::LastMax), ints(&[7, 0, 0, 0, 0, 8, 15]));
        let pair = Coalition::from_members([1, 2]);
        assert_eq!(t.row(pair).optimistic, int(10));
        assert_eq!(t.row(pair).optimistic_realizers, vec![Coalition::singleton(2)]);
        let audit = e.theorem_audit(&t, p.declared_class().unwrap()).unwrap();
        assert!(audit.passed(), "{:?}", audit.failures().collect::<Vec<_>>());
    }
}
