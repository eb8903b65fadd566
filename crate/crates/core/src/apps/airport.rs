//! Airport runway cost sharing.
//!
//! Agent `i` needs a runway of length `l_i`; building the first `ℓ` unit
//! segments costs `c(ℓ)`. A runway built by others can only help, so the
//! problem has positive externalities.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{ExplicitProblem, Move, StagedProblem};
use crate::error::{Error, Result};
use crate::game::{check_agent_count, TuGame};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AirportInstance {
    pub lengths: Vec<usize>,
    /// Cost of each unit segment, from the start of the runway.
    #[serde(with = "rational::text_vec")]
    pub segment_costs: Vec<Rational>,
}

impl AirportInstance {
    pub fn new(lengths: Vec<usize>, segment_costs: Vec<Rational>) -> Result<Self> {
        let a = AirportInstance { lengths, segment_costs };
        a.validate()?;
        Ok(a)
    }

    /// Builds the segment costs from cumulative costs `c(1), c(2), …`.
    pub fn from_cumulative(lengths: Vec<usize>, cumulative: &[Rational]) -> Result<Self> {
        let mut prev = rational::zero();
        let segments = cumulative
            .iter()
            .map(|c| {
                let seg = c - &prev;
                prev = c.clone();
                seg
            })
            .collect();
        Self::new(lengths, segments)
    }

    pub fn validate(&self) -> Result<()> {
        check_agent_count(self.agents())?;
        if let Some(i) = self.lengths.iter().position(|&l| l == 0 || l > self.segment_costs.len()) {
            return Err(Error::InvalidInstance(format!(
                "length of agent {} must be between 1 and {}",
                i + 1,
                self.segment_costs.len()
            )));
        }
        if self.segment_costs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInstance("segment costs must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn agents(&self) -> usize {
        self.lengths.len()
    }

    /// `c(ℓ)`.
    pub fn cost(&self, length: usize) -> Rational {
        rational::sum(&self.segment_costs[..length])
    }

    /// Longest requirement in `s`; 0 for the empty coalition.
    pub fn longest(&self, s: Coalition) -> usize {
        s.members().map(|i| self.lengths[i]).max().unwrap_or(0)
    }

    fn full(&self) -> usize {
        self.longest(Coalition::grand(self.agents()))
    }

    /// `v^F(S) = −c(max_{i∈S} l_i)`.
    pub fn first_game(&self) -> TuGame {
        TuGame::from_fn(self.agents(), |s| -self.cost(self.longest(s))).expect("validated size")
    }

    /// `v^L(S) = −(c(max_N l) − c(max_{N∖S} l))`.
    pub fn last_game(&self) -> TuGame {
        let n = self.agents();
        let total = self.cost(self.full());
        TuGame::from_fn(n, |s| {
            if s.is_empty() {
                return rational::zero();
            }
            self.cost(self.longest(s.complement(n))) - &total
        })
        .expect("validated size")
    }

    /// Revenue of an agent left unserved: below any runway cost.
    pub fn penalty(&self) -> Rational {
        -(rational::one() + self.cost(self.segment_costs.len()))
    }

    /// Positive encoding over segment actions: 0 leaves the agent unserved,
    /// 1 serves it without building, and the remaining actions serve it
    /// while building one interval `(lo, hi]` of segments. A profile is
    /// feasible when every served agent's requirement is covered by the
    /// union of built intervals.
    pub fn explicit_problem(&self) -> Result<ExplicitProblem> {
        let n = self.agents();
        let top = self.full();
        let intervals: Vec<(usize, usize)> = (0..top)
            .flat_map(|lo| (lo + 1..=top).map(move |hi| (lo, hi)))
            .collect();
        let per_agent = intervals.len() + 2;
        let mut labels = vec!["unserved".to_string(), "served".to_string()];
        labels.extend(intervals.iter().map(|(lo, hi)| format!("build({lo},{hi}]")));
        let mut feasible = Vec::new();
        let mut profile = vec![0usize; n];
        loop {
            let mut covered = 0u64;
            for &a in &profile {
                if a >= 2 {
                    let (lo, hi) = intervals[a - 2];
                    covered |= ((1u64 << hi) - 1) & !((1u64 << lo) - 1);
                }
            }
            let ok = profile
                .iter()
                .zip(&self.lengths)
                .all(|(&a, &l)| a == 0 || covered & ((1u64 << l) - 1) == (1u64 << l) - 1);
            if ok {
                feasible.push(profile.clone());
            }
            let mut k = n;
            loop {
                if k == 0 {
                    let revenues = (0..n)
                        .map(|_| {
                            let mut r = vec![self.penalty(), rational::zero()];
                            r.extend(intervals.iter().map(|&(lo, hi)| self.cost(lo) - self.cost(hi)));
                            r
                        })
                        .collect();
                    let names = (1..=n).map(|i| format!("agent {i}")).collect();
                    return ExplicitProblem::new(names, vec![labels; n], feasible, revenues);
                }
                k -= 1;
                if profile[k] + 1 < per_agent {
                    profile[k] += 1;
                    break;
                }
                profile[k] = 0;
            }
        }
    }

    pub fn staged(&self) -> AirportStaged<'_> {
        AirportStaged { instance: self }
    }
}

/// Staged runway building; the state is the length built so far. Member
/// label 0 is unserved, 1 is served without building, and `k + 1` is
/// served while extending the runway to length `k`. Members extend in
/// index order.
#[derive(Clone, Copy, Debug)]
pub struct AirportStaged<'a> {
    instance: &'a AirportInstance,
}

impl StagedProblem for AirportStaged<'_> {
    type State = usize;

    fn agents(&self) -> usize {
        self.instance.agents()
    }

    fn initial_state(&self) -> usize {
        0
    }

    fn moves(&self, coalition: Coalition, built: &usize) -> Vec<Move<usize>> {
        let a = self.instance;
        let members: Vec<usize> = coalition.members().collect();
        let top = a.full();
        let mut out = Vec::new();
        let mut label = vec![0usize; members.len()];
        let mut shares = vec![rational::zero(); members.len()];
        fn fill(
            k: usize,
            built: usize,
            ctx: (&AirportInstance, &[usize], usize),
            label: &mut Vec<usize>,
            shares: &mut Vec<Rational>,
            out: &mut Vec<Move<usize>>,
        ) {
            let (a, members, top) = ctx;
            if k == members.len() {
                let covered = members
                    .iter()
                    .zip(label.iter())
                    .all(|(&i, &l)| l == 0 || a.lengths[i] <= built);
                if covered {
                    out.push(Move {
                        label: label.clone(),
                        payoff: rational::sum(shares.iter()),
                        shares: Some(shares.clone()),
                        next: built,
                    });
                }
                return;
            }
            label[k] = 0;
            shares[k] = a.penalty();
            fill(k + 1, built, ctx, label, shares, out);
            label[k] = 1;
            shares[k] = rational::zero();
            fill(k + 1, built, ctx, label, shares, out);
            for target in built + 1..=top {
                label[k] = target + 1;
                shares[k] = a.cost(built) - a.cost(target);
                fill(k + 1, target, ctx, label, shares, out);
            }
            label[k] = 0;
        }
        fill(0, *built, (a, &members, top), &mut label, &mut shares, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{classify_externalities, Engine, ExternalityTag, Mode};
    use crate::polytope;
    use crate::rational::int;

    fn example() -> AirportInstance {
        AirportInstance::from_cumulative(vec![1, 2], &[int(3), int(5)]).unwrap()
    }

    #[test]
    fn two_planes() {
        let a = example();
        let (f, l) = (a.first_game(), a.last_game());
        let one = Coalition::singleton(0);
        assert_eq!(*f.value(one), int(-3));
        assert_eq!(*l.value(one), int(0));
        assert_eq!(*f.value(Coalition::singleton(1)), int(-5));
        assert_eq!(*l.value(Coalition::singleton(1)), int(-2));
        assert_eq!(*f.grand_value(), int(-5));
        assert_eq!(polytope::duality_check(&f, &l).unwrap(), None);
    }

    #[test]
    fn equal_lengths_leave_nothing_to_last_movers() {
        let a = AirportInstance::new(vec![2, 2, 2], vec![int(1), int(4)]).unwrap();
        let l = a.last_game();
        for s in Coalition::proper(3) {
            assert_eq!(*l.value(s), int(0));
        }
    }

    #[test]
    fn single_plane() {
        let a = AirportInstance::new(vec![2], vec![int(1), int(4)]).unwrap();
        assert_eq!(a.first_game(), a.last_game());
        assert_eq!(*a.first_game().grand_value(), int(-5));
    }

    #[test]
    fn staged_adapter_agrees() {
        let a = AirportInstance::new(vec![1, 3, 2], vec![int(2), int(0), int(5)]).unwrap();
        let e = Engine::new(a.staged()).unwrap();
        assert_eq!(e.first_game().unwrap(), a.first_game());
        assert_eq!(e.last_game(Mode::Min).unwrap(), a.last_game());
        assert_eq!(e.last_game(Mode::Max).unwrap(), a.last_game());
        for row in e.sequential_efficiency().unwrap() {
            assert!(row.efficient && row.dual, "{}", row.coalition);
        }
    }

    #[test]
    fn explicit_encoding_is_positive() {
        let a = example();
        let p = a.explicit_problem().unwrap();
        assert_eq!(classify_externalities(&p).tag, ExternalityTag::Positive);
        let e = Engine::new(p.staged()).unwrap();
        assert_eq!(e.first_game().unwrap(), a.first_game());
        assert_eq!(e.last_game(Mode::Min).unwrap(), a.last_game());
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(AirportInstance::new(vec![0], vec![int(1)]).is_err());
        assert!(AirportInstance::new(vec![3], vec![int(1)]).is_err());
        assert!(AirportInstance::new(vec![1], vec![int(-1)]).is_err());
    }
}
