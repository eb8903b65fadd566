//! Core and anti-core of a game.
//!
//! `C(v)` is the set of efficient allocations with `x(S) ≥ v(S)` for every
//! coalition; `A(v)` reverses the inequalities. Emptiness is decided by the
//! exact simplex, and an empty answer comes with balanced weights that
//! witness it.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Allocation, TuGame};
use crate::lp::{Direction, LinearProgram, LpOutcome, Relation};
use crate::rational::{self, Rational};

/// Which of the two polytopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polytope {
    Core,
    AntiCore,
}

impl Polytope {
    fn relation(self) -> Relation {
        match self {
            Polytope::Core => Relation::Geq,
            Polytope::AntiCore => Relation::Leq,
        }
    }

    fn admits(self, sum: &Rational, value: &Rational) -> bool {
        match self {
            Polytope::Core => sum >= value,
            Polytope::AntiCore => sum <= value,
        }
    }
}

/// Weights on nonempty proper coalitions that sum to one over each agent's
/// coalitions. Only nonzero weights are stored, ascending by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedWeights {
    pub agents: usize,
    pub weights: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    pub coalition: Coalition,
    #[serde(with = "rational::text")]
    pub weight: Rational,
}

impl BalancedWeights {
    /// `Σ_{S∋i} λ_S = 1` for every agent and every weight lies in `[0, 1]`.
    pub fn is_balanced(&self) -> bool {
        let in_range = self
            .weights
            .iter()
            .all(|w| !w.weight.is_negative() && w.weight <= rational::one());
        in_range
            && (0..self.agents).all(|i| {
                let total = rational::sum(
                    self.weights
                        .iter()
                        .filter(|w| w.coalition.contains(i))
                        .map(|w| &w.weight),
                );
                total == rational::one()
            })
    }

    /// `Σ_S λ_S v(S)`.
    pub fn weighted_value(&self, game: &TuGame) -> Rational {
        self.weights
            .iter()
            .fold(Rational::zero(), |acc, w| acc + &w.weight * game.value(w.coalition))
    }

    /// The weights prove that the given polytope of `game` is empty.
    pub fn certifies_empty(&self, game: &TuGame, polytope: Polytope) -> bool {
        if self.agents != game.agents() || !self.is_balanced() {
            return false;
        }
        let total = self.weighted_value(game);
        match polytope {
            Polytope::Core => total > *game.grand_value(),
            Polytope::AntiCore => total < *game.grand_value(),
        }
    }
}

/// Outcome of a non-emptiness query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreReport {
    Nonempty(Allocation),
    Empty(BalancedWeights),
}

impl CoreReport {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, CoreReport::Nonempty(_))
    }

    pub fn point(&self) -> Option<&Allocation> {
        match self {
            CoreReport::Nonempty(x) => Some(x),
            CoreReport::Empty(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&BalancedWeights> {
        match self {
            CoreReport::Empty(w) => Some(w),
            CoreReport::Nonempty(_) => None,
        }
    }
}

fn check_len(game: &TuGame, x: &Allocation) -> Result<()> {
    if x.len() != game.agents() {
        return Err(Error::DimensionMismatch {
            expected: game.agents(),
            found: x.len(),
        });
    }
    Ok(())
}

/// First coalition (ascending bitmask, grand coalition last) whose constraint
/// `x` violates; `None` when `x` belongs to the polytope.
pub fn violation(game: &TuGame, polytope: Polytope, x: &Allocation) -> Result<Option<Coalition>> {
    check_len(game, x)?;
    let grand = game.grand();
    for s in Coalition::nonempty(game.agents()) {
        let sum = x.coalition_sum(s);
        let ok = if s == grand {
            sum == *game.value(s)
        } else {
            polytope.admits(&sum, game.value(s))
        };
        if !ok {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn core_violation(game: &TuGame, x: &Allocation) -> Result<Option<Coalition>> {
    violation(game, Polytope::Core, x)
}

pub fn anti_core_violation(game: &TuGame, x: &Allocation) -> Result<Option<Coalition>> {
    violation(game, Polytope::AntiCore, x)
}

pub fn in_core(game: &TuGame, x: &Allocation) -> Result<bool> {
    Ok(core_violation(game, x)?.is_none())
}

pub fn in_anti_core(game: &TuGame, x: &Allocation) -> Result<bool> {
    Ok(anti_core_violation(game, x)?.is_none())
}

fn indicator(n: usize, s: Coalition) -> Vec<Rational> {
    (0..n)
        .map(|i| if s.contains(i) { rational::one() } else { Rational::zero() })
        .collect()
}

/// The polytope as an LP over free variables `x`. Rows are the proper
/// coalitions ascending, then the efficiency row.
pub fn polytope_program(game: &TuGame, polytope: Polytope, direction: Direction) -> LinearProgram {
    let n = game.agents();
    let mut lp = LinearProgram::new(n, direction);
    for s in Coalition::proper(n) {
        lp.add(indicator(n, s), polytope.relation(), game.value(s).clone())
            .expect("indicator has n entries");
    }
    lp.add(indicator(n, game.grand()), Relation::Eq, game.grand_value().clone())
        .expect("indicator has n entries");
    lp
}

fn nonempty(game: &TuGame, polytope: Polytope) -> Result<CoreReport> {
    let lp = polytope_program(game, polytope, Direction::Minimize);
    match lp.solve()? {
        LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => {
            Ok(CoreReport::Nonempty(Allocation(point)))
        }
        LpOutcome::Infeasible(cert) => {
            let weights = balanced_weights(game, polytope, &cert.multipliers)?;
            if !weights.certifies_empty(game, polytope) {
                return Err(Error::Internal(
                    "balancedness certificate failed verification".into(),
                ));
            }
            Ok(CoreReport::Empty(weights))
        }
    }
}

/// Rescales Farkas multipliers of [`polytope_program`] into balanced weights.
///
/// The multiplier on the efficiency row is `−t` (core) or `t` (anti-core)
/// with `t > 0`, and each agent's proper-coalition multipliers sum to `±t`.
fn balanced_weights(game: &TuGame, polytope: Polytope, y: &[Rational]) -> Result<BalancedWeights> {
    let n = game.agents();
    let efficiency = y
        .last()
        .ok_or_else(|| Error::Internal("empty certificate".into()))?;
    let scale = match polytope {
        Polytope::Core => -efficiency,
        Polytope::AntiCore => efficiency.clone(),
    };
    if !scale.is_positive() {
        return Err(Error::Internal(
            "certificate has a non-positive efficiency multiplier".into(),
        ));
    }
    let weights = Coalition::proper(n)
        .zip(y)
        .filter(|(_, m)| !m.is_zero())
        .map(|(s, m)| {
            let w = match polytope {
                Polytope::Core => m / &scale,
                Polytope::AntiCore => -m / &scale,
            };
            Weight { coalition: s, weight: w }
        })
        .collect();
    Ok(BalancedWeights { agents: n, weights })
}

pub fn core_nonempty(game: &TuGame) -> Result<CoreReport> {
    nonempty(game, Polytope::Core)
}

pub fn anti_core_nonempty(game: &TuGame) -> Result<CoreReport> {
    nonempty(game, Polytope::AntiCore)
}

/// Minimum of `x(S)` over `A(game)`, or `None` when the anti-core is empty.
pub fn anti_core_min(game: &TuGame, s: Coalition) -> Result<Option<Rational>> {
    let mut lp = polytope_program(game, Polytope::AntiCore, Direction::Minimize);
    lp.set_objective(indicator(game.agents(), s))?;
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
        LpOutcome::Infeasible(_) => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::Internal(
            "x(S) unbounded below over an anti-core".into(),
        )),
    }
}

/// Two verdicts on `A(v1) ⊆ C(v2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    /// First `S` with `v1(N) < v1(S) + v2(N∖S)`; `None` means the sum test
    /// holds.
    pub sum_violation: Option<Coalition>,
    pub anti_core_empty: bool,
    /// First `S` with `min_{x∈A(v1)} x(S) < v2(S)`; `None` means the LP test
    /// holds (vacuously so when `A(v1)` is empty).
    pub lp_violation: Option<Coalition>,
}

impl InclusionReport {
    /// The primary (sum-test) verdict.
    pub fn holds(&self) -> bool {
        self.sum_violation.is_none()
    }

    pub fn lp_holds(&self) -> bool {
        self.lp_violation.is_none()
    }

    pub fn disagreement(&self) -> bool {
        self.holds() != self.lp_holds()
    }
}

fn same_grand(v1: &TuGame, v2: &TuGame) -> Result<()> {
    if v1.agents() != v2.agents() {
        return Err(Error::DimensionMismatch {
            expected: v1.agents(),
            found: v2.agents(),
        });
    }
    if v1.grand_value() != v2.grand_value() {
        return Err(Error::EfficiencyMismatch(
            v1.grand_value().to_string(),
            v2.grand_value().to_string(),
        ));
    }
    Ok(())
}

/// The sum test alone: `v1(N) ≥ v1(S) + v2(N∖S)` for every `S`.
pub fn inclusion_sum_violation(v1: &TuGame, v2: &TuGame) -> Result<Option<Coalition>> {
    same_grand(v1, v2)?;
    let n = v1.agents();
    let grand = v1.grand_value();
    Ok(Coalition::all(n)
        .find(|&s| *grand < v1.value(s) + v2.value(s.complement(n))))
}

pub fn inclusion_anticore_in_core(v1: &TuGame, v2: &TuGame) -> Result<InclusionReport> {
    let sum_violation = inclusion_sum_violation(v1, v2)?;
    let n = v1.agents();
    let anti_core_empty = !anti_core_nonempty(v1)?.is_nonempty();
    let mut lp_violation = None;
    if !anti_core_empty {
        for s in Coalition::nonempty(n) {
            let min = anti_core_min(v1, s)?.expect("anti-core is nonempty");
            if min < *v2.value(s) {
                lp_violation = Some(s);
                break;
            }
        }
    }
    Ok(InclusionReport {
        sum_violation,
        anti_core_empty,
        lp_violation,
    })
}

/// First `S` with `v2(S) ≠ v1(N) − v1(N∖S)`; `None` when `v2` is the dual of
/// `v1`.
pub fn duality_check(v1: &TuGame, v2: &TuGame) -> Result<Option<Coalition>> {
    if v1.agents() != v2.agents() {
        return Err(Error::DimensionMismatch {
            expected: v1.agents(),
            found: v2.agents(),
        });
    }
    let n = v1.agents();
    Ok(Coalition::all(n)
        .find(|&s| *v2.value(s) != v1.grand_value() - v1.value(s.complement(n))))
}

/// Vertices of the polytope found by minimizing `Σ_k (k+1)·x_{order[k]}` for
/// each given order; duplicates removed, first-found order kept. Empty when
/// the polytope is empty.
pub fn extreme_points(
    game: &TuGame,
    polytope: Polytope,
    orders: &[Vec<usize>],
) -> Result<Vec<Allocation>> {
    let n = game.agents();
    let mut found: Vec<Allocation> = Vec::new();
    for order in orders {
        let mut objective = vec![Rational::zero(); n];
        for (k, &i) in order.iter().enumerate() {
            objective[i] = rational::int(k as i64 + 1);
        }
        let mut lp = polytope_program(game, polytope, Direction::Minimize);
        lp.set_objective(objective)?;
        match lp.solve()? {
            LpOutcome::Optimal { point, .. } => {
                let x = Allocation(point);
                if !found.contains(&x) {
                    found.push(x);
                }
            }
            LpOutcome::Infeasible(_) => return Ok(Vec::new()),
            LpOutcome::Unbounded { .. } => {
                return Err(Error::Internal("core polytope is unbounded".into()))
            }
        }
    }
    Ok(found)
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_orders(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                extend(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// Up to `count` random orders (all of them when `n! ≤ count`).
pub fn sample_orders(n: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let total: usize = (1..=n).product();
    if total <= count {
        return all_orders(n);
    }
    (0..count)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            order
        })
        .collect()
}

/// Random convex combination of the given points with small integer weights.
pub fn convex_combination(points: &[Allocation], rng: &mut impl Rng) -> Option<Allocation> {
    let n = points.first()?.len();
    let weights: Vec<i64> = points.iter().map(|_| rng.gen_range(0..=4)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return Some(points[0].clone());
    }
    let mut x = vec![Rational::zero(); n];
    for (p, w) in points.iter().zip(&weights) {
        for (xi, pi) in x.iter_mut().zip(p.payoffs()) {
            *xi += pi * rational::int(*w);
        }
    }
    let total = rational::int(total);
    Some(Allocation(x.into_iter().map(|v| v / &total).collect()))
}

/// Vertices of one polytope checked against the other: each vertex of
/// `A(anti)` must lie in `C(core)` and vice versa. Returns the first offending
/// point.
pub fn cross_validate(
    anti: &TuGame,
    core: &TuGame,
    orders: &[Vec<usize>],
) -> Result<Option<(Polytope, Allocation)>> {
    for x in extreme_points(anti, Polytope::AntiCore, orders)? {
        if !in_core(core, &x)? {
            return Ok(Some((Polytope::AntiCore, x)));
        }
    }
    for x in extreme_points(core, Polytope::Core, orders)? {
        if !in_anti_core(anti, &x)? {
            return Ok(Some((Polytope::Core, x)));
        }
    }
    Ok(None)
}
