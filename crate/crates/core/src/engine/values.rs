use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_agent_count, TuGame};
use crate::rational::{self, Rational};

use super::staged::{Move, StagedProblem};

/// Whether the complement's maximizer is the worst or the best one for the
/// coalition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Min,
    Max,
}

impl Mode {
    fn pick(self, a: Rational, b: Rational) -> Rational {
        match self {
            Mode::Min => rational::min(a, b),
            Mode::Max => rational::max(a, b),
        }
    }

    fn fold(self, values: impl IntoIterator<Item = Rational>) -> Option<Rational> {
        values.into_iter().reduce(|a, b| self.pick(a, b))
    }
}

/// Best response of a coalition at a state: its value and the distinct
/// states its maximizers lead to (ascending).
#[derive(Debug)]
struct Best<S> {
    value: Rational,
    successors: Vec<S>,
}

/// The grand coalition's optimal play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrandOptimum<S> {
    pub label: Vec<usize>,
    pub value: Rational,
    pub shares: Option<Vec<Rational>>,
    pub next: S,
}

/// Value-function evaluator over a staged problem, memoizing best responses
/// by `(coalition, state)`.
pub struct Engine<P: StagedProblem> {
    problem: P,
    n: usize,
    initial: P::State,
    best: RefCell<HashMap<(Coalition, P::State), Rc<Best<P::State>>>>,
}

impl<P: StagedProblem> Engine<P> {
    pub fn new(problem: P) -> Result<Self> {
        let n = problem.agents();
        check_agent_count(n)?;
        let initial = problem.initial_state();
        Ok(Engine {
            problem,
            n,
            initial,
            best: RefCell::new(HashMap::new()),
        })
    }

    pub fn problem(&self) -> &P {
        &self.problem
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn initial_state(&self) -> &P::State {
        &self.initial
    }

    /// Moves of `coalition` at `state`, validated. The empty coalition can
    /// only stay put.
    pub fn moves(&self, coalition: Coalition, state: &P::State) -> Result<Vec<Move<P::State>>> {
        if coalition.is_empty() {
            return Ok(vec![Move {
                label: Vec::new(),
                payoff: Rational::from_integer(0.into()),
                shares: Some(Vec::new()),
                next: state.clone(),
            }]);
        }
        let moves = self.problem.moves(coalition, state);
        let size = coalition.len();
        if let Some(bad) = moves.iter().find(|m| m.label.len() != size) {
            return Err(Error::InvalidInstance(format!(
                "move label {:?} has {} entries for coalition {coalition}",
                bad.label,
                bad.label.len()
            )));
        }
        if !moves.iter().any(Move::is_null) {
            return Err(Error::InvalidInstance(format!(
                "coalition {coalition} has no inactive move at state {state:?}"
            )));
        }
        Ok(moves)
    }

    fn best(&self, coalition: Coalition, state: &P::State) -> Result<Rc<Best<P::State>>> {
        let key = (coalition, state.clone());
        if let Some(hit) = self.best.borrow().get(&key) {
            return Ok(Rc::clone(hit));
        }
        let moves = self.moves(coalition, state)?;
        let value = moves
            .iter()
            .map(|m| &m.payoff)
            .max()
            .expect("move lists are nonempty")
            .clone();
        let mut successors: Vec<P::State> = moves
            .into_iter()
            .filter(|m| m.payoff == value)
            .map(|m| m.next)
            .collect();
        successors.sort();
        successors.dedup();
        let entry = Rc::new(Best { value, successors });
        self.best.borrow_mut().insert(key, Rc::clone(&entry));
        Ok(entry)
    }

    /// Best-response value of `coalition` at `state`.
    pub fn best_value(&self, coalition: Coalition, state: &P::State) -> Result<Rational> {
        Ok(self.best(coalition, state)?.value.clone())
    }

    /// Every move of `coalition` at `state` that attains the best payoff, in
    /// listed order.
    pub fn maximizer_set(
        &self,
        coalition: Coalition,
        state: &P::State,
    ) -> Result<Vec<Move<P::State>>> {
        let value = self.best_value(coalition, state)?;
        Ok(self
            .moves(coalition, state)?
            .into_iter()
            .filter(|m| m.payoff == value)
            .collect())
    }

    /// The grand coalition's optimum; ties go to the lexicographically first
    /// label.
    pub fn grand_optimum(&self) -> Result<GrandOptimum<P::State>> {
        let best = self
            .maximizer_set(self.grand(), &self.initial)?
            .into_iter()
            .min_by(|a, b| a.label.cmp(&b.label))
            .expect("maximizer sets are nonempty");
        Ok(GrandOptimum {
            label: best.label,
            value: best.payoff,
            shares: best.shares,
            next: best.next,
        })
    }

    pub fn first(&self, s: Coalition) -> Result<Rational> {
        self.best_value(s, &self.initial)
    }

    /// `v^β` from its minimax definition: `S` commits first, then the
    /// complement picks any feasible reply; `S`'s revenue is its own.
    pub fn beta(&self, s: Coalition) -> Result<Rational> {
        let rest = s.complement(self.n);
        let mut best: Option<Rational> = None;
        for m in self.moves(s, &self.initial)? {
            let replies = self.moves(rest, &m.next)?;
            let worst = replies
                .iter()
                .map(|_| m.payoff.clone())
                .min()
                .expect("reply lists are nonempty");
            best = Some(match best {
                Some(b) => rational::max(b, worst),
                None => worst,
            });
        }
        Ok(best.expect("move lists are nonempty"))
    }

    /// `v^L_mode(S)`: the complement plays one of its maximizers first.
    pub fn last(&self, s: Coalition, mode: Mode) -> Result<Rational> {
        let rest = s.complement(self.n);
        let after = self.best(rest, &self.initial)?;
        let mut values = Vec::with_capacity(after.successors.len());
        for state in &after.successors {
            values.push(self.best_value(s, state)?);
        }
        Ok(mode.fold(values).expect("maximizer sets are nonempty"))
    }

    /// `v^α(S)`: the complement may play anything feasible first.
    pub fn alpha(&self, s: Coalition) -> Result<Rational> {
        let rest = s.complement(self.n);
        let mut states: Vec<P::State> = self
            .moves(rest, &self.initial)?
            .into_iter()
            .map(|m| m.next)
            .collect();
        states.sort();
        states.dedup();
        let mut values = Vec::with_capacity(states.len());
        for state in &states {
            values.push(self.best_value(s, state)?);
        }
        Ok(Mode::Min.fold(values).expect("move lists are nonempty"))
    }

    /// `v^{T⊆S}_mode`: `T` moves first, then the complement of `S`
    /// best-responds, then `S∖T` moves last.
    pub fn stage(&self, t: Coalition, s: Coalition, mode: Mode) -> Result<Rational> {
        if !t.is_subset_of(s) {
            return Err(Error::NotSubset {
                first: t,
                second: s,
            });
        }
        let rest = s.complement(self.n);
        let late = s.minus(t);
        // Only the best payoff reaching each state matters.
        let mut reach: BTreeMap<P::State, Rational> = BTreeMap::new();
        for m in self.moves(t, &self.initial)? {
            match reach.get_mut(&m.next) {
                Some(v) if *v >= m.payoff => {}
                Some(v) => *v = m.payoff,
                None => {
                    reach.insert(m.next, m.payoff);
                }
            }
        }
        let mut best: Option<Rational> = None;
        for (state, payoff) in reach {
            let reply = self.best(rest, &state)?;
            let mut tails = Vec::with_capacity(reply.successors.len());
            for after in &reply.successors {
                tails.push(self.best_value(late, after)?);
            }
            let total = payoff + mode.fold(tails).expect("maximizer sets are nonempty");
            best = Some(match best {
                Some(b) => rational::max(b, total),
                None => total,
            });
        }
        Ok(best.expect("move lists are nonempty"))
    }

    /// `v^o(S)` and every `T ⊆ S` attaining it, ascending.
    pub fn optimistic(&self, s: Coalition) -> Result<(Rational, Vec<Coalition>)> {
        self.extremal_stage(s, Mode::Max)
    }

    /// `v^p(S)` and every `T ⊆ S` attaining it, ascending.
    pub fn pessimistic(&self, s: Coalition) -> Result<(Rational, Vec<Coalition>)> {
        self.extremal_stage(s, Mode::Min)
    }

    fn extremal_stage(&self, s: Coalition, mode: Mode) -> Result<(Rational, Vec<Coalition>)> {
        let mut best: Option<Rational> = None;
        let mut realizers = Vec::new();
        for t in s.subsets() {
            let v = self.stage(t, s, mode)?;
            let better = match &best {
                None => true,
                Some(b) => match mode {
                    Mode::Max => v > *b,
                    Mode::Min => v < *b,
                },
            };
            if better {
                best = Some(v);
                realizers.clear();
                realizers.push(t);
            } else if best.as_ref() == Some(&v) {
                realizers.push(t);
            }
        }
        Ok((best.expect("every coalition has a subset"), realizers))
    }

    fn game(&self, value: impl Fn(Coalition) -> Result<Rational>) -> Result<TuGame> {
        let mut values = Vec::with_capacity(1 << self.n);
        for s in Coalition::all(self.n) {
            values.push(if s.is_empty() {
                rational::zero()
            } else {
                value(s)?
            });
        }
        TuGame::new(self.n, values)
    }

    pub fn first_game(&self) -> Result<TuGame> {
        self.game(|s| self.first(s))
    }

    pub fn beta_game(&self) -> Result<TuGame> {
        self.game(|s| self.beta(s))
    }

    pub fn last_game(&self, mode: Mode) -> Result<TuGame> {
        self.game(|s| self.last(s, mode))
    }

    pub fn alpha_game(&self) -> Result<TuGame> {
        self.game(|s| self.alpha(s))
    }

    pub fn optimistic_game(&self) -> Result<TuGame> {
        self.game(|s| Ok(self.optimistic(s)?.0))
    }

    pub fn pessimistic_game(&self) -> Result<TuGame> {
        self.game(|s| Ok(self.pessimistic(s)?.0))
    }

    /// Number of memoized best responses.
    pub fn cache_len(&self) -> usize {
        self.best.borrow().len()
    }
}
