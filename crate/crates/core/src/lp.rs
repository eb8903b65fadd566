//! Exact rational linear programming.
//!
//! A dense two-phase simplex over [`Rational`] with Bland's least-index rule,
//! so it always terminates and pivots the same way every time. Variables are
//! free; sign restrictions are ordinary constraints. Every outcome carries
//! evidence that can be checked by substitution:
//!
//! * an optimal point,
//! * a Farkas certificate `y` with `yᵀA = 0` and `yᵀb = 1` whose signs make
//!   the constraint system contradictory, or
//! * an improving ray that keeps every constraint satisfied.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Leq,
    Eq,
    Geq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub bound: Rational,
}

impl Constraint {
    fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs = dot(&self.coefficients, point);
        match self.relation {
            Relation::Leq => lhs <= self.bound,
            Relation::Eq => lhs == self.bound,
            Relation::Geq => lhs >= self.bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    variables: usize,
    direction: Direction,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

/// Multipliers, one per constraint, proving infeasibility: nonnegative on `≥`
/// rows, nonpositive on `≤` rows, free on `=` rows, with `Σ yᵢaᵢ = 0` and
/// `Σ yᵢbᵢ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible(FarkasCertificate),
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl LinearProgram {
    /// A program with `variables` free variables and a zero objective.
    pub fn new(variables: usize, direction: Direction) -> Self {
        LinearProgram {
            variables,
            direction,
            objective: vec![Rational::zero(); variables],
            constraints: Vec::new(),
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) -> Result<&mut Self> {
        self.check_len(objective.len())?;
        self.objective = objective;
        Ok(self)
    }

    pub fn add(
        &mut self,
        coefficients: Vec<Rational>,
        relation: Relation,
        bound: Rational,
    ) -> Result<&mut Self> {
        self.check_len(coefficients.len())?;
        self.constraints.push(Constraint {
            coefficients,
            relation,
            bound,
        });
        Ok(self)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.variables {
            return Err(Error::MalformedLp(format!(
                "coefficient vector of length {len} for {} variables",
                self.variables
            )));
        }
        Ok(())
    }

    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        dot(&self.objective, point)
    }

    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.variables && self.constraints.iter().all(|c| c.holds_at(point))
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let outcome = self.solve_inner(true)?;
        if !outcome.verify(self) {
            return Err(Error::Internal(
                "simplex outcome failed verification by substitution".into(),
            ));
        }
        Ok(outcome)
    }

    fn solve_inner(&self, certify: bool) -> Result<LpOutcome> {
        let mut tableau = Tableau::standard_form(self);
        if !tableau.phase_one() {
            if !certify {
                return Err(Error::Internal("Farkas alternative system infeasible".into()));
            }
            return Ok(LpOutcome::Infeasible(self.farkas_certificate()?));
        }
        // Phase two minimizes; a maximization is a minimization of −c.
        let sign = match self.direction {
            Direction::Minimize => Rational::from_integer(1.into()),
            Direction::Maximize => Rational::from_integer((-1).into()),
        };
        let cost: Vec<Rational> = (0..tableau.columns)
            .map(|j| match tableau.kind[j] {
                Column::Plus(k) => &sign * &self.objective[k],
                Column::Minus(k) => -(&sign * &self.objective[k]),
                _ => Rational::zero(),
            })
            .collect();
        match tableau.optimize(&cost) {
            None => {
                let point = tableau.point(self.variables);
                let value = self.objective_at(&point);
                Ok(LpOutcome::Optimal { point, value })
            }
            Some(entering) => {
                let point = tableau.point(self.variables);
                let ray = tableau.ray(entering, self.variables);
                Ok(LpOutcome::Unbounded { point, ray })
            }
        }
    }

    /// Solves the alternative system, which is feasible exactly when `self`
    /// is not.
    fn farkas_certificate(&self) -> Result<FarkasCertificate> {
        let m = self.constraints.len();
        let mut alt = LinearProgram::new(m, Direction::Minimize);
        for (i, c) in self.constraints.iter().enumerate() {
            let mut unit = vec![Rational::zero(); m];
            unit[i] = rational::one();
            match c.relation {
                Relation::Geq => {
                    alt.add(unit, Relation::Geq, Rational::zero())?;
                }
                Relation::Leq => {
                    alt.add(unit, Relation::Leq, Rational::zero())?;
                }
                Relation::Eq => {}
            }
        }
        for j in 0..self.variables {
            let column = self
                .constraints
                .iter()
                .map(|c| c.coefficients[j].clone())
                .collect();
            alt.add(column, Relation::Eq, Rational::zero())?;
        }
        let bounds = self.constraints.iter().map(|c| c.bound.clone()).collect();
        alt.add(bounds, Relation::Eq, rational::one())?;
        match alt.solve_inner(false)? {
            LpOutcome::Optimal { point, .. } => Ok(FarkasCertificate { multipliers: point }),
            _ => Err(Error::Internal("unexpected outcome of the Farkas system".into())),
        }
    }
}

impl FarkasCertificate {
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        if self.multipliers.len() != lp.constraints.len() {
            return false;
        }
        let signs_ok = self
            .multipliers
            .iter()
            .zip(&lp.constraints)
            .all(|(y, c)| match c.relation {
                Relation::Geq => !y.is_negative(),
                Relation::Leq => !y.is_positive(),
                Relation::Eq => true,
            });
        let combination_zero = (0..lp.variables).all(|j| {
            self.multipliers
                .iter()
                .zip(&lp.constraints)
                .fold(Rational::zero(), |acc, (y, c)| acc + y * &c.coefficients[j])
                .is_zero()
        });
        let bound = self
            .multipliers
            .iter()
            .zip(&lp.constraints)
            .fold(Rational::zero(), |acc, (y, c)| acc + y * &c.bound);
        signs_ok && combination_zero && bound.is_positive()
    }
}

impl LpOutcome {
    /// Re-checks the outcome against `lp` by direct substitution.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        match self {
            LpOutcome::Optimal { point, value } => {
                lp.is_feasible_point(point) && lp.objective_at(point) == *value
            }
            LpOutcome::Infeasible(cert) => cert.verify(lp),
            LpOutcome::Unbounded { point, ray } => {
                let recession = lp.constraints.iter().all(|c| {
                    let d = dot(&c.coefficients, ray);
                    match c.relation {
                        Relation::Leq => !d.is_positive(),
                        Relation::Eq => d.is_zero(),
                        Relation::Geq => !d.is_negative(),
                    }
                });
                let gain = lp.objective_at(ray);
                let improving = match lp.direction {
                    Direction::Minimize => gain.is_negative(),
                    Direction::Maximize => gain.is_positive(),
                };
                lp.is_feasible_point(point) && recession && improving
            }
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible(_))
    }

    pub fn optimal_point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial,
}

/// `A z = b`, `z ≥ 0`, `b ≥ 0`, with one basic column per row.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    kind: Vec<Column>,
    columns: usize,
}

impl Tableau {
    fn standard_form(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        let slacks = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let columns = 2 * lp.variables + slacks + m;
        let mut kind = Vec::with_capacity(columns);
        kind.extend((0..lp.variables).map(Column::Plus));
        kind.extend((0..lp.variables).map(Column::Minus));
        kind.extend(std::iter::repeat(Column::Slack).take(slacks));
        kind.extend(std::iter::repeat(Column::Artificial).take(m));

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = 2 * lp.variables;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); columns];
            for (k, a) in c.coefficients.iter().enumerate() {
                row[k] = a.clone();
                row[lp.variables + k] = -a;
            }
            match c.relation {
                Relation::Leq => {
                    row[slack] = rational::one();
                    slack += 1;
                }
                Relation::Geq => {
                    row[slack] = -rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut b = c.bound.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                b = -b;
            }
            let artificial = 2 * lp.variables + slacks + i;
            row[artificial] = rational::one();
            basis.push(artificial);
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            rows,
            rhs,
            basis,
            kind,
            columns,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost · z` over non-artificial entering columns. Returns the
    /// entering column of an unbounded direction, or `None` at an optimum.
    fn optimize(&mut self, cost: &[Rational]) -> Option<usize> {
        loop {
            let entering = (0..self.columns).find(|&j| {
                self.kind[j] != Column::Artificial
                    && !self.basis.contains(&j)
                    && self.reduced_cost(cost, j).is_negative()
            });
            let entering = entering?;
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                None => return Some(entering),
                Some((r, _)) => self.pivot(r, entering),
            }
        }
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                d -= &cost[b] * &self.rows[i][j];
            }
        }
        d
    }

    /// Drives the artificial variables to zero; false when impossible.
    fn phase_one(&mut self) -> bool {
        let cost: Vec<Rational> = self
            .kind
            .iter()
            .map(|k| {
                if *k == Column::Artificial {
                    rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        // Artificial columns may not re-enter, so start from the basis they
        // form and let only structural columns enter.
        self.optimize(&cost);
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| self.kind[**b] == Column::Artificial)
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        if infeasibility.is_positive() {
            return false;
        }
        // Pivot remaining (zero-level) artificials out, dropping redundant rows.
        let mut r = 0;
        while r < self.rows.len() {
            if self.kind[self.basis[r]] != Column::Artificial {
                r += 1;
                continue;
            }
            let replacement = (0..self.columns)
                .find(|&j| self.kind[j] != Column::Artificial && !self.rows[r][j].is_zero());
            match replacement {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
        true
    }

    fn values(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.columns];
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[i].clone();
        }
        z
    }

    fn point(&self, variables: usize) -> Vec<Rational> {
        let z = self.values();
        (0..variables).map(|k| &z[k] - &z[variables + k]).collect()
    }

    fn ray(&self, entering: usize, variables: usize) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.columns];
        d[entering] = rational::one();
        for (i, &b) in self.basis.iter().enumerate() {
            d[b] = -&self.rows[i][entering];
        }
        (0..variables).map(|k| &d[k] - &d[variables + k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(1, Direction::Maximize);
        lp.set_objective(v(&[1])).unwrap();
        lp.add(v(&[1]), Relation::Leq, int(3)).unwrap();
        assert_eq!(
            lp.solve().unwrap(),
            LpOutcome::Optimal {
                point: v(&[3]),
                value: int(3)
            }
        );
    }

    #[test]
    fn infeasible_box() {
        let mut lp = LinearProgram::new(2, Direction::Maximize);
        lp.set_objective(v(&[1, 1])).unwrap();
        lp.add(v(&[1, 0]), Relation::Leq, int(1)).unwrap();
        lp.add(v(&[0, 1]), Relation::Leq, int(1)).unwrap();
        lp.add(v(&[1, 1]), Relation::Geq, int(3)).unwrap();
        match lp.solve().unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(cert.verify(&lp));
                // Unique up to scaling: (−1, −1, 1), scaled so yᵀb = 1.
                assert_eq!(cert.multipliers, vec![int(-1), int(-1), int(1)]);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(2, Direction::Maximize);
        lp.set_objective(v(&[1, 2])).unwrap();
        lp.add(v(&[1, -1]), Relation::Leq, int(4)).unwrap();
        lp.add(v(&[1, 0]), Relation::Geq, int(0)).unwrap();
        let out = lp.solve().unwrap();
        assert!(matches!(out, LpOutcome::Unbounded { .. }));
        assert!(out.verify(&lp));
    }

    #[test]
    fn free_variables_go_negative() {
        let mut lp = LinearProgram::new(2, Direction::Minimize);
        lp.set_objective(v(&[1, 1])).unwrap();
        lp.add(v(&[1, 0]), Relation::Geq, int(-5)).unwrap();
        lp.add(v(&[0, 1]), Relation::Geq, frac(-1, 2)).unwrap();
        let out = lp.solve().unwrap();
        assert_eq!(out.optimal_point().unwrap(), &[int(-5), frac(-1, 2)]);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2, Direction::Maximize);
        lp.set_objective(v(&[1, 0])).unwrap();
        lp.add(v(&[1, 1]), Relation::Eq, int(2)).unwrap();
        lp.add(v(&[2, 2]), Relation::Eq, int(4)).unwrap();
        lp.add(v(&[0, 1]), Relation::Geq, int(0)).unwrap();
        let out = lp.solve().unwrap();
        assert_eq!(out.optimal_point().unwrap(), &[int(2), int(0)]);
    }

    #[test]
    fn wrong_length_is_malformed() {
        let mut lp = LinearProgram::new(2, Direction::Maximize);
        assert!(matches!(
            lp.add(v(&[1]), Relation::Leq, int(0)),
            Err(Error::MalformedLp(_))
        ));
    }

    /// Brute-force optimum of a bounded 2-variable LP: every vertex is the
    /// intersection of two constraint lines.
    fn vertex_optimum(lp: &LinearProgram) -> Option<Rational> {
        let cs = lp.constraints();
        let mut best: Option<Rational> = None;
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let (a, b) = (&cs[i].coefficients, &cs[j].coefficients);
                let det = &a[0] * &b[1] - &a[1] * &b[0];
                if det.is_zero() {
                    continue;
                }
                let x = (&cs[i].bound * &b[1] - &a[1] * &cs[j].bound) / &det;
                let y = (&a[0] * &cs[j].bound - &cs[i].bound * &b[0]) / &det;
                let p = vec![x, y];
                if lp.is_feasible_point(&p) {
                    let val = lp.objective_at(&p);
                    best = Some(match best {
                        Some(b) if b >= val => b,
                        _ => val,
                    });
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration_in_a_box(
            rows in prop::collection::vec((-4i64..=4, -4i64..=4, -6i64..=6), 0..5),
            obj in (-3i64..=3, -3i64..=3),
        ) {
            let mut lp = LinearProgram::new(2, Direction::Maximize);
            lp.set_objective(v(&[obj.0, obj.1])).unwrap();
            for (x, y) in [(1, 0), (0, 1)] {
                lp.add(v(&[x, y]), Relation::Leq, int(5)).unwrap();
                lp.add(v(&[x, y]), Relation::Geq, int(-5)).unwrap();
            }
            for &(a, b, c) in &rows {
                lp.add(v(&[a, b]), Relation::Leq, int(c)).unwrap();
            }
            let out = lp.solve().unwrap();
            prop_assert!(out.verify(&lp));
            match out {
                LpOutcome::Optimal { value, .. } => {
                    prop_assert_eq!(Some(value), vertex_optimum(&lp));
                }
                LpOutcome::Infeasible(_) => prop_assert_eq!(vertex_optimum(&lp), None),
                LpOutcome::Unbounded { .. } => prop_assert!(false, "box is bounded"),
            }
        }
    }
}
