use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Allocation, TuGame};
use crate::polytope;

use super::explicit::ExternalityTag;
use super::staged::StagedProblem;
use super::table::{GameKind, GameTable};
use super::values::{Engine, Mode};

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Claim {
    pub fn new(id: &str, statement: &str, witness: Option<String>) -> Claim {
        Claim {
            id: id.to_string(),
            statement: statement.to_string(),
            passed: witness.is_none(),
            witness,
        }
    }

    /// A claim that passes or fails without a coalition witness.
    pub fn check(id: &str, statement: &str, passed: bool, detail: impl FnOnce() -> String) -> Claim {
        Claim::new(id, statement, (!passed).then(detail))
    }
}

/// Claims evaluated for one problem. Every claim here is a theorem, so a
/// failure points at a bug.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub class: ExternalityTag,
    pub claims: Vec<Claim>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// First coalition where `lhs ≤ rhs` fails.
fn leq(table: &GameTable, lhs: GameKind, rhs: GameKind) -> Option<String> {
    table.rows.iter().find_map(|r| {
        (r.value(lhs) > r.value(rhs)).then(|| {
            format!(
                "{}: {}={} > {}={}",
                r.coalition,
                lhs.symbol(),
                r.value(lhs),
                rhs.symbol(),
                r.value(rhs)
            )
        })
    })
}

fn eq(table: &GameTable, lhs: GameKind, rhs: GameKind) -> Option<String> {
    table.rows.iter().find_map(|r| {
        (r.value(lhs) != r.value(rhs)).then(|| {
            format!(
                "{}: {}={} ≠ {}={}",
                r.coalition,
                lhs.symbol(),
                r.value(lhs),
                rhs.symbol(),
                r.value(rhs)
            )
        })
    })
}

fn chain(table: &GameTable, kinds: &[(GameKind, bool)]) -> Option<String> {
    // (kind, equal_to_next)
    kinds.windows(2).find_map(|w| {
        let ((a, equal), (b, _)) = (w[0], w[1]);
        if equal {
            eq(table, a, b)
        } else {
            leq(table, a, b)
        }
    })
}

/// `A(v1) ⊆ C(v2)` by the sum test, cross-checked by the LP test.
pub fn inclusion_claim(id: &str, statement: &str, v1: &TuGame, v2: &TuGame) -> Result<Claim> {
    let report = match polytope::inclusion_anticore_in_core(v1, v2) {
        Err(Error::EfficiencyMismatch(a, b)) => {
            return Ok(Claim::new(id, statement, Some(format!("grand values differ: {a} ≠ {b}"))))
        }
        other => other?,
    };
    let witness = match (report.sum_violation, report.disagreement()) {
        (Some(s), _) => Some(format!("sum test fails at {s}")),
        (None, true) => Some(format!(
            "LP test disagrees at {}",
            report.lp_violation.expect("disagreement means an LP violation")
        )),
        (None, false) => None,
    };
    Ok(Claim::new(id, statement, witness))
}

fn nonempty_claim(id: &str, statement: &str, game: &TuGame) -> Result<Claim> {
    let report = polytope::anti_core_nonempty(game)?;
    Ok(Claim::check(id, statement, report.is_nonempty(), || {
        "anti-core is empty".to_string()
    }))
}

/// Per-coalition result of [`sequential_efficiency`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequentialRow {
    pub coalition: Coalition,
    /// Some maximizer of `S` moving first, followed by a best reply of the
    /// complement, reaches the grand optimum.
    pub efficient: bool,
    /// `v^F(S) + v^L_min(N∖S) = v(N)`.
    pub dual: bool,
}

impl<P: StagedProblem> Engine<P> {
    /// Per-agent revenues under the grand coalition's optimal play.
    pub fn grand_shares(&self) -> Result<Allocation> {
        let opt = self.grand_optimum()?;
        let shares = opt.shares.ok_or(Error::NoPayoffShares)?;
        Ok(Allocation(shares))
    }

    /// `x_i = R_i(a*)` for the grand optimum `a*`, checked against
    /// `A(v^o)`. Under negative externalities `v^o = v^F`.
    pub fn anticore_witness(&self) -> Result<Allocation> {
        let x = self.grand_shares()?;
        let optimistic = self.optimistic_game()?;
        if let Some(s) = polytope::anti_core_violation(&optimistic, &x)? {
            return Err(Error::WitnessOutsideAntiCore(s));
        }
        Ok(x)
    }

    pub fn sequential_efficiency(&self) -> Result<Vec<SequentialRow>> {
        let n = self.agents();
        let grand = self.best_value(self.grand(), self.initial_state())?;
        let mut rows = Vec::new();
        for s in Coalition::proper(n) {
            let rest = s.complement(n);
            let first = self.first(s)?;
            let mut efficient = false;
            for m in self.maximizer_set(s, self.initial_state())? {
                if m.payoff.clone() + self.best_value(rest, &m.next)? == grand {
                    efficient = true;
                    break;
                }
            }
            let dual = first + self.last(rest, Mode::Min)? == grand;
            rows.push(SequentialRow {
                coalition: s,
                efficient,
                dual,
            });
        }
        Ok(rows)
    }

    /// Every claim that applies to a problem of the given class.
    pub fn theorem_audit(&self, table: &GameTable, class: ExternalityTag) -> Result<AuditReport> {
        use GameKind::*;
        let mut claims = Vec::new();

        claims.push(Claim::new(
            "beta-is-first",
            "v^β computed by minimax equals v^F",
            eq(table, Beta, First),
        ));

        let mut reduction = None;
        for row in &table.rows {
            let s = row.coalition;
            let checks = [
                (self.stage(s, s, Mode::Min)?, &row.first, "v^{S⊆S}_min", "v^F"),
                (self.stage(s, s, Mode::Max)?, &row.first, "v^{S⊆S}_max", "v^F"),
                (self.stage(Coalition::EMPTY, s, Mode::Min)?, &row.last_min, "v^{∅⊆S}_min", "v^L_min"),
                (self.stage(Coalition::EMPTY, s, Mode::Max)?, &row.last_max, "v^{∅⊆S}_max", "v^L_max"),
            ];
            if let Some((a, b, x, y)) = checks.iter().find(|(a, b, _, _)| a != *b) {
                reduction = Some(format!("{s}: {x}={a} ≠ {y}={b}"));
                break;
            }
        }
        claims.push(Claim::new(
            "stage-reductions",
            "v^{S⊆S} = v^F and v^{∅⊆S} = v^L for both modes",
            reduction,
        ));

        claims.push(Claim::new(
            "general-chain",
            "v^p ≤ v^L_min ≤ v^L_max ≤ v^o and v^α ≤ v^L_min",
            chain(table, &[(Pessimistic, false), (LastMin, false), (LastMax, false), (Optimistic, false)])
                .or_else(|| leq(table, Alpha, LastMin)),
        ));
        claims.push(Claim::new(
            "first-between",
            "v^p ≤ v^F ≤ v^o",
            chain(table, &[(Pessimistic, false), (First, false), (Optimistic, false)]),
        ));

        let grand = table.value(First, Coalition::grand(table.agents)).clone();
        let grand_ok = [LastMin, LastMax, Optimistic, Pessimistic, Alpha, Beta]
            .iter()
            .all(|k| *table.value(*k, Coalition::grand(table.agents)) == grand);
        claims.push(Claim::check(
            "grand-values",
            "every value function gives the grand optimum at N",
            grand_ok,
            || "grand-coalition values differ".to_string(),
        ));

        let first = table.game(First);
        let last_min = table.game(LastMin);
        let last_max = table.game(LastMax);
        let optimistic = table.game(Optimistic);
        let pessimistic = table.game(Pessimistic);
        claims.push(inclusion_claim(
            "first-in-last-min",
            "A(v^F) ⊆ C(v^L_min)",
            &first,
            &last_min,
        )?);
        claims.push(inclusion_claim(
            "last-max-in-first",
            "A(v^L_max) ⊆ C(v^F)",
            &last_max,
            &first,
        )?);

        if class.negative_claims() {
            claims.push(Claim::new(
                "negative-chain",
                "v^α ≤ v^L_min ≤ v^L_max ≤ v^F ≤ v^o",
                chain(table, &[(Alpha, false), (LastMin, false), (LastMax, false), (First, false), (Optimistic, false)]),
            ));
            claims.push(Claim::new("negative-optimistic", "v^o = v^F", eq(table, Optimistic, First)));
            claims.push(Claim::new(
                "negative-pessimistic",
                "v^p = v^L_min",
                eq(table, Pessimistic, LastMin),
            ));
            claims.push(nonempty_claim("negative-first-nonempty", "A(v^F) ≠ ∅", &first)?);
            claims.push(nonempty_claim("negative-optimistic-nonempty", "A(v^o) ≠ ∅", &optimistic)?);
            claims.push(inclusion_claim(
                "negative-optimistic-in-pessimistic",
                "A(v^o) ⊆ C(v^p)",
                &optimistic,
                &pessimistic,
            )?);
            match self.anticore_witness() {
                Ok(_) => claims.push(Claim::new(
                    "negative-witness",
                    "the grand optimum's revenues lie in A(v^o) = A(v^F)",
                    None,
                )),
                Err(Error::NoPayoffShares) => {}
                Err(Error::WitnessOutsideAntiCore(s)) => claims.push(Claim::new(
                    "negative-witness",
                    "the grand optimum's revenues lie in A(v^o) = A(v^F)",
                    Some(format!("violated at {s}")),
                )),
                Err(e) => return Err(e),
            }
        }

        if class.positive_claims() {
            claims.push(Claim::new(
                "positive-alpha",
                "v^α = v^β = v^F",
                chain(table, &[(Alpha, true), (Beta, true), (First, false)]),
            ));
            claims.push(Claim::new(
                "positive-chain",
                "v^F ≤ v^L_min ≤ v^L_max ≤ v^o",
                chain(table, &[(First, false), (LastMin, false), (LastMax, false), (Optimistic, false)]),
            ));
            claims.push(Claim::new(
                "positive-pessimistic",
                "v^p = v^F",
                eq(table, Pessimistic, First),
            ));
            claims.push(inclusion_claim(
                "positive-last-max-in-pessimistic",
                "A(v^L_max) ⊆ C(v^p)",
                &last_max,
                &pessimistic,
            )?);
        }

        Ok(AuditReport { class, claims })
    }
}
