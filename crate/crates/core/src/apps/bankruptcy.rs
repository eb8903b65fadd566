//! Bankruptcy: an estate `E` smaller than the sum of the claims.
//!
//! Claimants who arrive first collect their claims in full, so a coalition
//! moving first gets `min(c(S), E)` and one moving last gets what is left.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{ExplicitProblem, Move, StagedProblem};
use crate::error::{Error, Result};
use crate::game::{check_agent_count, TuGame};
use crate::rational::{self, Rational};

/// Largest per-claim unit count the staged adapter accepts.
pub const MAX_UNITS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankruptcyInstance {
    #[serde(with = "rational::text")]
    pub estate: Rational,
    #[serde(with = "rational::text_vec")]
    pub claims: Vec<Rational>,
}

impl BankruptcyInstance {
    pub fn new(estate: Rational, claims: Vec<Rational>) -> Result<Self> {
        let b = BankruptcyInstance { estate, claims };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        check_agent_count(self.agents())?;
        if self.estate.is_negative() || self.claims.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInstance("estate and claims must be nonnegative".into()));
        }
        if rational::sum(&self.claims) <= self.estate {
            return Err(Error::InvalidInstance(
                "the claims must add up to more than the estate".into(),
            ));
        }
        Ok(())
    }

    pub fn agents(&self) -> usize {
        self.claims.len()
    }

    fn claim_of(&self, s: Coalition) -> Rational {
        rational::sum(s.members().map(|i| &self.claims[i]))
    }

    /// `v^F(S) = min(c(S), E)`.
    pub fn first_game(&self) -> TuGame {
        TuGame::from_fn(self.agents(), |s| {
            rational::min(self.claim_of(s), self.estate.clone())
        })
        .expect("validated size")
    }

    /// `v^L(S) = max(E − c(N∖S), 0)`.
    pub fn last_game(&self) -> TuGame {
        let n = self.agents();
        TuGame::from_fn(n, |s| {
            if s.is_empty() {
                return rational::zero();
            }
            rational::max(&self.estate - self.claim_of(s.complement(n)), rational::zero())
        })
        .expect("validated size")
    }

    /// The discretization step: the gcd of the estate and all claims.
    pub fn unit(&self) -> Rational {
        let mut values = self.claims.clone();
        values.push(self.estate.clone());
        rational::gcd(&values)
    }

    fn units(&self, value: &Rational, unit: &Rational) -> Result<usize> {
        (value / unit)
            .to_integer()
            .to_usize()
            .filter(|&k| k <= MAX_UNITS)
            .ok_or_else(|| Error::InvalidInstance(format!("more than {MAX_UNITS} estate units")))
    }

    /// Claims and estate counted in units of [`BankruptcyInstance::unit`].
    pub fn discretize(&self) -> Result<Discretized> {
        let unit = self.unit();
        let claims = self
            .claims
            .iter()
            .map(|c| self.units(c, &unit))
            .collect::<Result<Vec<_>>>()?;
        let estate = self.units(&self.estate, &unit)?;
        Ok(Discretized { unit, claims, estate })
    }

    /// Action `k` claims `k` units; the null action claims nothing. A
    /// profile is feasible when the claims fit in the estate.
    pub fn explicit_problem(&self) -> Result<ExplicitProblem> {
        let d = self.discretize()?;
        let mut feasible = Vec::new();
        let mut profile = vec![0usize; self.agents()];
        fn fill(k: usize, left: usize, d: &Discretized, profile: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == d.claims.len() {
                out.push(profile.clone());
                return;
            }
            for take in 0..=d.claims[k].min(left) {
                profile[k] = take;
                fill(k + 1, left - take, d, profile, out);
            }
            profile[k] = 0;
        }
        fill(0, d.estate, &d, &mut profile, &mut feasible);
        let revenues = d
            .claims
            .iter()
            .map(|&c| (0..=c).map(|k| Rational::from_integer(k.into()) * &d.unit).collect())
            .collect();
        ExplicitProblem::unnamed(feasible, revenues)
    }
}

/// A bankruptcy problem in whole units; the staged state is the number of
/// units still in the estate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discretized {
    pub unit: Rational,
    pub claims: Vec<usize>,
    pub estate: usize,
}

impl StagedProblem for Discretized {
    type State = usize;

    fn agents(&self) -> usize {
        self.claims.len()
    }

    fn initial_state(&self) -> usize {
        self.estate
    }

    fn moves(&self, coalition: Coalition, left: &usize) -> Vec<Move<usize>> {
        let members: Vec<usize> = coalition.members().collect();
        let mut out = Vec::new();
        let mut label = vec![0usize; members.len()];
        fn fill(
            k: usize,
            left: usize,
            members: &[usize],
            d: &Discretized,
            label: &mut Vec<usize>,
            out: &mut Vec<Move<usize>>,
        ) {
            if k == members.len() {
                let shares: Vec<Rational> = label
                    .iter()
                    .map(|&u| Rational::from_integer(u.into()) * &d.unit)
                    .collect();
                out.push(Move {
                    label: label.clone(),
                    payoff: rational::sum(&shares),
                    shares: Some(shares),
                    next: left,
                });
                return;
            }
            for take in 0..=d.claims[members[k]].min(left) {
                label[k] = take;
                fill(k + 1, left - take, members, d, label, out);
            }
            label[k] = 0;
        }
        fill(0, *left, &members, self, &mut label, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{classify_externalities, Engine, ExternalityTag, Mode};
    use crate::polytope;
    use crate::rational::int;
    use num_traits::Zero;

    fn example() -> BankruptcyInstance {
        BankruptcyInstance::new(int(100), vec![int(60), int(80)]).unwrap()
    }

    #[test]
    fn two_claimants() {
        let b = example();
        let (f, l) = (b.first_game(), b.last_game());
        assert_eq!(*f.value(Coalition::singleton(0)), int(60));
        assert_eq!(*l.value(Coalition::singleton(0)), int(20));
        assert_eq!(*f.grand_value(), int(100));
        assert_eq!(*l.grand_value(), int(100));
        assert_eq!(*f.dual().value(Coalition::singleton(0)), int(20));
        assert_eq!(polytope::duality_check(&f, &l).unwrap(), None);
    }

    #[test]
    fn engine_on_discretized_estate() {
        let b = example();
        let d = b.discretize().unwrap();
        assert_eq!(d.unit, int(20));
        assert_eq!((d.claims.clone(), d.estate), (vec![3, 4], 5));
        let e = Engine::new(&d).unwrap();
        assert_eq!(e.first_game().unwrap(), b.first_game());
        assert_eq!(e.last_game(Mode::Min).unwrap(), b.last_game());
        assert_eq!(e.last_game(Mode::Max).unwrap(), b.last_game());
        for row in e.sequential_efficiency().unwrap() {
            assert!(row.efficient && row.dual, "{}", row.coalition);
        }
    }

    #[test]
    fn empty_estate() {
        let b = BankruptcyInstance::new(int(0), vec![int(3), int(5), int(0)]).unwrap();
        assert!(b.first_game().values().iter().all(Zero::is_zero));
        assert!(b.last_game().values().iter().all(Zero::is_zero));
    }

    #[test]
    fn explicit_encoding_is_negative() {
        let b = BankruptcyInstance::new(int(4), vec![int(2), int(3), int(1)]).unwrap();
        let p = b.explicit_problem().unwrap();
        assert_eq!(classify_externalities(&p).tag, ExternalityTag::Negative);
        let e = Engine::new(p.staged()).unwrap();
        assert_eq!(e.first_game().unwrap(), b.first_game());
        assert_eq!(e.last_game(Mode::Min).unwrap(), b.last_game());
    }

    #[test]
    fn rejects_solvent_estate() {
        assert!(BankruptcyInstance::new(int(10), vec![int(4), int(6)]).is_err());
        assert!(BankruptcyInstance::new(int(-1), vec![int(4)]).is_err());
    }
}
