use std::fmt::Debug;
use std::hash::Hash;

use crate::coalition::Coalition;
use crate::rational::Rational;

/// A problem in which coalitions take turns acting on a shared state.
///
/// `moves(S, state)` lists everything `S` may jointly do when the agents that
/// have already acted left the problem in `state` and everyone else is still
/// inactive. Each move's label has one entry per member of `S`, in ascending
/// agent order; entry 0 is that member's null action. The all-null move must
/// always be listed.
pub trait StagedProblem {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn agents(&self) -> usize;

    fn initial_state(&self) -> Self::State;

    fn moves(&self, coalition: Coalition, state: &Self::State) -> Vec<Move<Self::State>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move<S> {
    pub label: Vec<usize>,
    /// Sum of the members' revenues from this move.
    pub payoff: Rational,
    /// Per-member revenues, ascending agent order, when the adapter can
    /// attribute them.
    pub shares: Option<Vec<Rational>>,
    pub next: S,
}

impl<S> Move<S> {
    pub fn is_null(&self) -> bool {
        self.label.iter().all(|&a| a == 0)
    }
}

impl<P: StagedProblem + ?Sized> StagedProblem for &P {
    type State = P::State;

    fn agents(&self) -> usize {
        (**self).agents()
    }

    fn initial_state(&self) -> Self::State {
        (**self).initial_state()
    }

    fn moves(&self, coalition: Coalition, state: &Self::State) -> Vec<Move<Self::State>> {
        (**self).moves(coalition, state)
    }
}
