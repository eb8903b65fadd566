//! Transferable-utility games and their classical operations.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::MAX_AGENTS;

/// A TU game: an exact value for every coalition, indexed by bitmask.
#[derive(Clone, PartialEq, Eq)]
pub struct TuGame {
    n: usize,
    values: Vec<Rational>,
}

/// A payoff vector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation(#[serde(with = "rational::text_vec")] pub Vec<Rational>);

impl Allocation {
    pub fn new(payoffs: Vec<Rational>) -> Self {
        Allocation(payoffs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.0
    }

    /// `x(S)`; zero for the empty coalition.
    pub fn coalition_sum(&self, coalition: Coalition) -> Rational {
        rational::sum(coalition.members().map(|i| &self.0[i]))
    }

    pub fn total(&self) -> Rational {
        rational::sum(&self.0)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn check_agent_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::NoAgents)
    } else if n > MAX_AGENTS {
        Err(Error::TooManyAgents(n))
    } else {
        Ok(())
    }
}

/// A violated supermodularity (or submodularity) inequality:
/// `v(larger ∪ {agent}) − v(larger)` vs `v(smaller ∪ {agent}) − v(smaller)`
/// with `smaller ⊆ larger ⊆ N∖{agent}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurvatureViolation {
    pub agent: usize,
    pub smaller: Coalition,
    pub larger: Coalition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Leq,
    Geq,
    Incomparable,
}

/// Coalition-wise comparison of two games.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub relation: Relation,
    /// First coalition (ascending bitmask) with `g1(S) < g2(S)`.
    pub first_less: Option<Coalition>,
    /// First coalition with `g1(S) > g2(S)`.
    pub first_greater: Option<Coalition>,
}

impl Comparison {
    /// The coalition where strictness (or, when incomparable, the violation of
    /// `≤`) occurs.
    pub fn witness(&self) -> Option<Coalition> {
        match self.relation {
            Relation::Eq => None,
            Relation::Leq => self.first_less,
            Relation::Geq | Relation::Incomparable => self.first_greater,
        }
    }
}

impl TuGame {
    /// Builds a game from one value per coalition, indexed by bitmask.
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        check_agent_count(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(Error::MalformedGame(format!(
                "value of the empty coalition is {}, not 0",
                values[0]
            )));
        }
        Ok(TuGame { n, values })
    }

    /// Builds a game from a value function; the empty coalition is forced to 0.
    pub fn from_fn(n: usize, mut value: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        check_agent_count(n)?;
        let values = Coalition::all(n)
            .map(|s| if s.is_empty() { Rational::zero() } else { value(s) })
            .collect();
        Ok(TuGame { n, values })
    }

    /// `v(S) = Σ_{i∈S} weights[i]`.
    pub fn additive(weights: &[Rational]) -> Result<Self> {
        TuGame::from_fn(weights.len(), |s| rational::sum(s.members().map(|i| &weights[i])))
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn value(&self, coalition: Coalition) -> &Rational {
        &self.values[coalition.index()]
    }

    pub fn grand_value(&self) -> &Rational {
        self.value(self.grand())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    fn same_size(&self, other: &TuGame) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// The Shapley value, from the subset formula with factorial weights.
    pub fn shapley(&self) -> Allocation {
        let n = self.n;
        let fact: Vec<BigInt> = std::iter::once(BigInt::one())
            .chain((1..=n).scan(BigInt::one(), |acc, k| {
                *acc *= k;
                Some(acc.clone())
            }))
            .collect();
        let weight: Vec<Rational> = (0..n)
            .map(|s| Rational::new(&fact[s] * &fact[n - s - 1], fact[n].clone()))
            .collect();
        let grand = self.grand();
        let payoffs = (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for s in grand.without(i).subsets() {
                    let marginal = self.value(s.with(i)) - self.value(s);
                    acc += &weight[s.len()] * marginal;
                }
                acc
            })
            .collect();
        Allocation(payoffs)
    }

    /// `v*(S) = v(N) − v(N∖S)`.
    pub fn dual(&self) -> TuGame {
        let grand = self.grand_value().clone();
        let values = Coalition::all(self.n)
            .map(|s| &grand - self.value(s.complement(self.n)))
            .collect();
        TuGame { n: self.n, values }
    }

    fn curvature_violation(&self, convex: bool) -> Option<CurvatureViolation> {
        let grand = self.grand();
        for agent in 0..self.n {
            let others = grand.without(agent);
            for larger in others.subsets() {
                let big = self.value(larger.with(agent)) - self.value(larger);
                for smaller in larger.subsets() {
                    let small = self.value(smaller.with(agent)) - self.value(smaller);
                    let ok = if convex { big >= small } else { big <= small };
                    if !ok {
                        return Some(CurvatureViolation {
                            agent,
                            smaller,
                            larger,
                        });
                    }
                }
            }
        }
        None
    }

    /// First violation of `v(T∪{i})−v(T) ≥ v(S∪{i})−v(S)`, scanning `i`
    /// ascending, then `T`, then `S ⊆ T` by ascending bitmask.
    pub fn convexity_violation(&self) -> Option<CurvatureViolation> {
        self.curvature_violation(true)
    }

    pub fn is_convex(&self) -> bool {
        self.convexity_violation().is_none()
    }

    /// Mirror of [`TuGame::convexity_violation`] with `≤`.
    pub fn concavity_violation(&self) -> Option<CurvatureViolation> {
        self.curvature_violation(false)
    }

    pub fn is_concave(&self) -> bool {
        self.concavity_violation().is_none()
    }

    pub fn compare(&self, other: &TuGame) -> Result<Comparison> {
        self.same_size(other)?;
        let mut first_less = None;
        let mut first_greater = None;
        for s in Coalition::all(self.n) {
            match self.value(s).cmp(other.value(s)) {
                std::cmp::Ordering::Less if first_less.is_none() => first_less = Some(s),
                std::cmp::Ordering::Greater if first_greater.is_none() => first_greater = Some(s),
                _ => {}
            }
        }
        let relation = match (first_less, first_greater) {
            (None, None) => Relation::Eq,
            (Some(_), None) => Relation::Leq,
            (None, Some(_)) => Relation::Geq,
            (Some(_), Some(_)) => Relation::Incomparable,
        };
        Ok(Comparison {
            relation,
            first_less,
            first_greater,
        })
    }

    /// `θ·self + (1−θ)·other`, coalition-wise.
    pub fn weighted(&self, other: &TuGame, theta: &Rational) -> Result<TuGame> {
        self.same_size(other)?;
        if *theta < Rational::zero() || *theta > Rational::one() {
            return Err(Error::WeightOutOfRange(theta.to_string()));
        }
        let rest = Rational::one() - theta;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| theta * a + &rest * b)
            .collect();
        Ok(TuGame { n: self.n, values })
    }

    /// Payoff of the k-th agent in `order` is its marginal contribution to the
    /// first k−1 agents.
    pub fn marginal_vector(&self, order: &[usize]) -> Result<Allocation> {
        let mut seen = Coalition::EMPTY;
        let valid = order.len() == self.n
            && order.iter().all(|&i| {
                let fresh = i < self.n && !seen.contains(i);
                seen = seen.with(i);
                fresh
            });
        if !valid {
            return Err(Error::NotAPermutation(order.to_vec()));
        }
        let mut payoffs = vec![Rational::zero(); self.n];
        let mut before = Coalition::EMPTY;
        for &i in order {
            payoffs[i] = self.value(before.with(i)) - self.value(before);
            before = before.with(i);
        }
        Ok(Allocation(payoffs))
    }

    pub fn to_document(&self) -> GameDocument {
        GameDocument {
            n: self.n,
            values: Coalition::all(self.n)
                .map(|s| {
                    let v = self.value(s);
                    (s.mask(), IntText::from(v.numer()), IntText::from(v.denom()))
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &GameDocument) -> Result<Self> {
        check_agent_count(doc.n)?;
        let mut values: Vec<Option<Rational>> = vec![None; 1 << doc.n];
        values[0] = Some(Rational::zero());
        for (mask, num, den) in &doc.values {
            let slot = values.get_mut(*mask as usize).ok_or_else(|| {
                Error::MalformedGame(format!("coalition mask {mask} out of range"))
            })?;
            let (num, den) = (num.to_bigint()?, den.to_bigint()?);
            if den.is_zero() {
                return Err(Error::MalformedGame(format!("zero denominator at mask {mask}")));
            }
            let value = Rational::new(num, den);
            if *mask == 0 && !value.is_zero() {
                return Err(Error::MalformedGame("value of the empty coalition must be 0".into()));
            }
            *slot = Some(value);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(mask, v)| {
                v.ok_or_else(|| Error::MalformedGame(format!("missing value for mask {mask}")))
            })
            .collect::<Result<Vec<_>>>()?;
        TuGame::new(doc.n, values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("game documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GameDocument = serde_json::from_str(text)?;
        TuGame::from_document(&doc)
    }
}

impl fmt::Debug for TuGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for s in Coalition::nonempty(self.n) {
            map.entry(&s, &format_args!("{}", self.value(s)));
        }
        map.finish()
    }
}

/// Serialized form of a game: `n` and `(bitmask, numerator, denominator)`
/// triples; bit `i` is agent `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDocument {
    pub n: usize,
    pub values: Vec<(u32, IntText, IntText)>,
}

/// An integer written as a JSON number when it fits in `i64`, otherwise as a
/// decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntText {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for IntText {
    fn from(value: &BigInt) -> Self {
        match i64::try_from(value) {
            Ok(v) => IntText::Small(v),
            Err(_) => IntText::Big(value.to_string()),
        }
    }
}

impl IntText {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntText::Small(v) => Ok(BigInt::from(*v)),
            IntText::Big(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}
