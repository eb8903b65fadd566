//! Problems given by an explicit list of jointly feasible action profiles.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::check_agent_count;
use crate::rational::{self, Rational};

use super::staged::{Move, StagedProblem};
use super::table::{GameTable, TableRow};
use super::values::Mode;

/// An action profile: one action index per agent, 0 being the null action.
pub type Profile = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitProblem {
    names: Vec<String>,
    actions: Vec<Vec<String>>,
    feasible: Vec<Profile>,
    lookup: HashSet<Profile>,
    revenues: Vec<Vec<Rational>>,
}

/// On-disk form of an [`ExplicitProblem`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitDocument {
    pub agents: Vec<String>,
    /// Per agent, action labels; index 0 is the null action.
    pub actions: Vec<Vec<String>>,
    pub feasible: Vec<Profile>,
    /// Per agent, revenue of each of its actions.
    #[serde(with = "rational::text_matrix")]
    pub revenues: Vec<Vec<Rational>>,
}

impl ExplicitProblem {
    /// Validates and builds a problem. Duplicate profiles are merged and the
    /// profile list is sorted.
    pub fn new(
        names: Vec<String>,
        actions: Vec<Vec<String>>,
        feasible: Vec<Profile>,
        revenues: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let n = names.len();
        check_agent_count(n)?;
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if actions.len() != n || revenues.len() != n {
            return bad(format!(
                "{n} agents but {} action lists and {} revenue lists",
                actions.len(),
                revenues.len()
            ));
        }
        for i in 0..n {
            if actions[i].is_empty() {
                return bad(format!("agent {} has no null action", i + 1));
            }
            if revenues[i].len() != actions[i].len() {
                return bad(format!(
                    "agent {} has {} actions but {} revenues",
                    i + 1,
                    actions[i].len(),
                    revenues[i].len()
                ));
            }
        }
        for p in &feasible {
            if p.len() != n || p.iter().zip(&actions).any(|(&a, list)| a >= list.len()) {
                return bad(format!("profile {p:?} does not fit the action lists"));
            }
        }
        let feasible: Vec<Profile> = feasible
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let lookup: HashSet<Profile> = feasible.iter().cloned().collect();
        if !lookup.contains(&vec![0; n]) {
            return bad("the all-null profile must be feasible".into());
        }
        Ok(ExplicitProblem {
            names,
            actions,
            feasible,
            lookup,
            revenues,
        })
    }

    /// Agents named `1..=n`, actions named by index.
    pub fn unnamed(feasible: Vec<Profile>, revenues: Vec<Vec<Rational>>) -> Result<Self> {
        let names = (1..=revenues.len()).map(|i| i.to_string()).collect();
        let actions = revenues
            .iter()
            .map(|r| (0..r.len()).map(|a| a.to_string()).collect())
            .collect();
        ExplicitProblem::new(names, actions, feasible, revenues)
    }

    pub fn from_document(doc: ExplicitDocument) -> Result<Self> {
        ExplicitProblem::new(doc.agents, doc.actions, doc.feasible, doc.revenues)
    }

    pub fn to_document(&self) -> ExplicitDocument {
        ExplicitDocument {
            agents: self.names.clone(),
            actions: self.actions.clone(),
            feasible: self.feasible.clone(),
            revenues: self.revenues.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        ExplicitProblem::from_document(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }

    pub fn agents(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn feasible(&self) -> &[Profile] {
        &self.feasible
    }

    pub fn is_feasible(&self, profile: &[usize]) -> bool {
        self.lookup.contains(profile)
    }

    pub fn revenue(&self, agent: usize, action: usize) -> &Rational {
        &self.revenues[agent][action]
    }

    /// `Σ_{i∈S} R_i(a_i)`.
    pub fn coalition_revenue(&self, s: Coalition, profile: &[usize]) -> Rational {
        rational::sum(s.members().map(|i| self.revenue(i, profile[i])))
    }

    /// Feasible profiles that agree with `base` outside `s`: the slice
    /// `f_S(base_{N∖S})`, as full profiles.
    pub fn slice<'a>(&'a self, s: Coalition, base: &'a [usize]) -> impl Iterator<Item = &'a Profile> {
        self.feasible.iter().filter(move |p| {
            p.iter()
                .zip(base)
                .enumerate()
                .all(|(i, (a, b))| s.contains(i) || a == b)
        })
    }

    /// The problem as coalitions acting in turn; the state records who has
    /// committed to what.
    pub fn staged(&self) -> StagedExplicit<'_> {
        StagedExplicit { problem: self }
    }
}

/// Staged view of an [`ExplicitProblem`]. The state is the partial profile
/// of the agents that have acted.
#[derive(Clone, Copy, Debug)]
pub struct StagedExplicit<'a> {
    problem: &'a ExplicitProblem,
}

impl StagedProblem for StagedExplicit<'_> {
    type State = Vec<Option<usize>>;

    fn agents(&self) -> usize {
        self.problem.agents()
    }

    fn initial_state(&self) -> Self::State {
        vec![None; self.problem.agents()]
    }

    fn moves(&self, coalition: Coalition, state: &Self::State) -> Vec<Move<Self::State>> {
        let p = self.problem;
        let mut moves: Vec<Move<Self::State>> = p
            .feasible
            .iter()
            .filter(|profile| {
                profile.iter().zip(state).enumerate().all(|(i, (&a, fixed))| match fixed {
                    Some(b) => a == *b,
                    None => coalition.contains(i) || a == 0,
                })
            })
            .map(|profile| {
                let label: Vec<usize> = coalition.members().map(|i| profile[i]).collect();
                let shares: Vec<Rational> = coalition
                    .members()
                    .map(|i| p.revenue(i, profile[i]).clone())
                    .collect();
                let mut next = state.clone();
                for i in coalition.members() {
                    next[i] = Some(profile[i]);
                }
                Move {
                    label,
                    payoff: rational::sum(&shares),
                    shares: Some(shares),
                    next,
                }
            })
            .collect();
        moves.sort_by(|a, b| a.label.cmp(&b.label));
        moves
    }
}

/// All seven games computed straight from the profile sets, without the
/// staged engine.
pub fn direct_table(p: &ExplicitProblem) -> GameTable {
    let direct = Direct { p };
    let rows = Coalition::nonempty(p.agents())
        .map(|s| direct.row(s))
        .collect();
    GameTable {
        agents: p.agents(),
        rows,
    }
}

struct Direct<'a> {
    p: &'a ExplicitProblem,
}

impl Direct<'_> {
    fn null(&self) -> Profile {
        vec![0; self.p.agents()]
    }

    /// Best revenue of `s` given `base` outside it, and the maximizing
    /// profiles.
    fn best(&self, s: Coalition, base: &[usize]) -> (Rational, Vec<Profile>) {
        let mut value: Option<Rational> = None;
        let mut argmax = Vec::new();
        for q in self.p.slice(s, base) {
            let r = self.p.coalition_revenue(s, q);
            match &value {
                Some(v) if r < *v => {}
                Some(v) if r == *v => argmax.push(q.clone()),
                _ => {
                    value = Some(r);
                    argmax = vec![q.clone()];
                }
            }
        }
        (value.expect("base profiles are feasible"), argmax)
    }

    fn first(&self, s: Coalition) -> Rational {
        self.best(s, &self.null()).0
    }

    fn beta(&self, s: Coalition) -> Rational {
        let rest = s.complement(self.p.agents());
        self.p
            .slice(s, &self.null())
            .map(|a| {
                let own = self.p.coalition_revenue(s, a);
                self.p
                    .slice(rest, a)
                    .map(|_| own.clone())
                    .min()
                    .expect("the complement can stay inactive")
            })
            .max()
            .expect("the null profile is feasible")
    }

    fn last(&self, s: Coalition, mode: Mode) -> Rational {
        let rest = s.complement(self.p.agents());
        let (_, replies) = self.best(rest, &self.null());
        let values = replies.iter().map(|b| self.best(s, b).0);
        fold(mode, values)
    }

    fn alpha(&self, s: Coalition) -> Rational {
        let rest = s.complement(self.p.agents());
        let values: Vec<Rational> = self
            .p
            .slice(rest, &self.null())
            .map(|b| self.best(s, b).0)
            .collect();
        fold(Mode::Min, values)
    }

    fn stage(&self, t: Coalition, s: Coalition, mode: Mode) -> Rational {
        let n = self.p.agents();
        let rest = s.complement(n);
        let late = s.minus(t);
        let values: Vec<Rational> = self
            .p
            .slice(t, &self.null())
            .map(|a| {
                let (_, replies) = self.best(rest, a);
                let tail = fold(mode, replies.iter().map(|b| self.best(late, b).0));
                self.p.coalition_revenue(t, a) + tail
            })
            .collect();
        fold(Mode::Max, values)
    }

    fn extremal(&self, s: Coalition, mode: Mode) -> (Rational, Vec<Coalition>) {
        let values: BTreeMap<Coalition, Rational> =
            s.subsets().map(|t| (t, self.stage(t, s, mode))).collect();
        let target = fold(mode, values.values().cloned());
        let realizers = values
            .into_iter()
            .filter(|(_, v)| *v == target)
            .map(|(t, _)| t)
            .collect();
        (target, realizers)
    }

    fn row(&self, s: Coalition) -> TableRow {
        let (optimistic, optimistic_realizers) = self.extremal(s, Mode::Max);
        let (pessimistic, pessimistic_realizers) = self.extremal(s, Mode::Min);
        TableRow {
            coalition: s,
            alpha: self.alpha(s),
            beta: self.beta(s),
            first: self.first(s),
            last_min: self.last(s, Mode::Min),
            last_max: self.last(s, Mode::Max),
            optimistic,
            pessimistic,
            optimistic_realizers,
            pessimistic_realizers,
        }
    }
}

fn fold(mode: Mode, values: impl IntoIterator<Item = Rational>) -> Rational {
    values
        .into_iter()
        .reduce(|a, b| match mode {
            Mode::Min => rational::min(a, b),
            Mode::Max => rational::max(a, b),
        })
        .unwrap_or_else(Rational::zero)
}

/// Direction of a problem's feasibility externalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExternalityTag {
    /// Outsiders' actions only ever remove feasible actions.
    Negative,
    /// Outsiders' actions only ever add feasible actions.
    Positive,
    /// Outsiders' actions never change what is feasible.
    Neutral,
    Mixed,
}

impl ExternalityTag {
    /// Claims proven for negative externalities apply.
    pub fn negative_claims(self) -> bool {
        matches!(self, ExternalityTag::Negative | ExternalityTag::Neutral)
    }

    pub fn positive_claims(self) -> bool {
        matches!(self, ExternalityTag::Positive | ExternalityTag::Neutral)
    }
}

/// An action of `coalition` that is feasible in one situation but not the
/// other: with the outsiders inactive versus after they played `outsiders`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalityWitness {
    pub coalition: Coalition,
    /// Full profile, coalition entries null.
    pub outsiders: Profile,
    /// Full profile, outsider entries null.
    pub action: Profile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalityClass {
    pub tag: ExternalityTag,
    /// A feasible action lost because of the outsiders' play.
    pub lost: Option<ExternalityWitness>,
    /// An action made feasible by the outsiders' play.
    pub gained: Option<ExternalityWitness>,
}

fn restrict(profile: &[usize], s: Coalition) -> Profile {
    profile
        .iter()
        .enumerate()
        .map(|(i, &a)| if s.contains(i) { a } else { 0 })
        .collect()
}

/// Compares `f_S(a_{N∖S})` with `f_S(⊖_{N∖S})` for every proper coalition
/// `S` and every outsider play `a_{N∖S} ∈ f_{N∖S}(⊖_S)`. Witnesses are the
/// first found in ascending coalition order.
pub fn classify_externalities(p: &ExplicitProblem) -> ExternalityClass {
    let n = p.agents();
    let null = vec![0; n];
    let mut lost = None;
    let mut gained = None;
    for s in Coalition::proper(n) {
        let rest = s.complement(n);
        let alone: BTreeSet<Profile> = p.slice(s, &null).map(|q| restrict(q, s)).collect();
        for b in p.slice(rest, &null) {
            let b = restrict(b, rest);
            let with: BTreeSet<Profile> = p.slice(s, &b).map(|q| restrict(q, s)).collect();
            if lost.is_none() {
                if let Some(a) = alone.difference(&with).next() {
                    lost = Some(ExternalityWitness {
                        coalition: s,
                        outsiders: b.clone(),
                        action: a.clone(),
                    });
                }
            }
            if gained.is_none() {
                if let Some(a) = with.difference(&alone).next() {
                    gained = Some(ExternalityWitness {
                        coalition: s,
                        outsiders: b.clone(),
                        action: a.clone(),
                    });
                }
            }
            if lost.is_some() && gained.is_some() {
                break;
            }
        }
    }
    let tag = match (&lost, &gained) {
        (None, None) => ExternalityTag::Neutral,
        (Some(_), None) => ExternalityTag::Negative,
        (None, Some(_)) => ExternalityTag::Positive,
        (Some(_), Some(_)) => ExternalityTag::Mixed,
    };
    ExternalityClass { tag, lost, gained }
}
