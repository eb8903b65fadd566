//! Minimum cost spanning tree games.
//!
//! Node 0 is the source and node `i + 1` is agent `i`. Revenues are negated
//! connection costs. A coalition connecting after the others may route
//! through their nodes, so externalities are positive.

use std::collections::VecDeque;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::engine::{ExternalityTag, Move, StagedProblem};
use crate::error::{Error, Result};
use crate::game::{check_agent_count, Allocation, TuGame};
use crate::polytope::{self, Polytope};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McstInstance {
    /// Symmetric `(n+1)×(n+1)` edge costs; row and column 0 are the source.
    #[serde(with = "rational::text_matrix")]
    pub cost: Vec<Vec<Rational>>,
}

/// A tree over a set of nodes, rooted at the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    /// `parent[v]` for every non-root node in the tree.
    pub parent: Vec<Option<usize>>,
    pub cost: Rational,
}

impl SpanningTree {
    /// Tree edges `(parent, child)` by ascending child.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect()
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Kruskal over `k` nodes with edges ordered by `(cost, i, j)`.
fn kruskal(k: usize, cost: impl Fn(usize, usize) -> Rational) -> Vec<(usize, usize, Rational)> {
    let mut edges: Vec<(Rational, usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| (cost(i, j), i, j))
        .collect();
    edges.sort();
    let mut uf: Vec<usize> = (0..k).collect();
    let mut tree = Vec::with_capacity(k.saturating_sub(1));
    for (c, i, j) in edges {
        let (a, b) = (find(&mut uf, i), find(&mut uf, j));
        if a != b {
            uf[a] = b;
            tree.push((i, j, c));
        }
    }
    tree
}

/// Orients undirected edges away from `root`.
fn orient(nodes: usize, root: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; nodes];
    let mut seen = vec![false; nodes];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}

impl McstInstance {
    pub fn new(cost: Vec<Vec<Rational>>) -> Result<Self> {
        let m = McstInstance { cost };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let size = self.cost.len();
        if size < 2 {
            return Err(Error::NoAgents);
        }
        check_agent_count(size - 1)?;
        for (i, row) in self.cost.iter().enumerate() {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: row.len(),
                });
            }
            for (j, c) in row.iter().enumerate() {
                if i != j && (c.is_negative() || *c != self.cost[j][i]) {
                    return Err(Error::InvalidInstance(format!(
                        "cost ({i},{j}) must be nonnegative and symmetric"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn agents(&self) -> usize {
        self.cost.len() - 1
    }

    fn nodes(&self) -> usize {
        self.cost.len()
    }

    /// Node mask of `s` together with the source.
    pub fn with_source(s: Coalition) -> u32 {
        s.mask() << 1 | 1
    }

    /// Minimum spanning tree over the nodes in `mask`, which must include
    /// the source.
    pub fn mst(&self, mask: u32) -> Result<SpanningTree> {
        if mask & 1 == 0 {
            return Err(Error::InvalidInstance("the node set must contain the source".into()));
        }
        let nodes: Vec<usize> = (0..self.nodes()).filter(|&v| mask >> v & 1 == 1).collect();
        let local = kruskal(nodes.len(), |a, b| self.cost[nodes[a]][nodes[b]].clone());
        let edges: Vec<(usize, usize)> = local.iter().map(|(a, b, _)| (nodes[*a], nodes[*b])).collect();
        Ok(SpanningTree {
            parent: orient(self.nodes(), 0, &edges),
            cost: rational::sum(local.iter().map(|(_, _, c)| c)),
        })
    }

    /// Cheapest way to connect `s` when the source and all of `N∖S` act as
    /// one source.
    pub fn contracted_cost(&self, s: Coalition) -> Rational {
        let n = self.agents();
        let sources: Vec<usize> = std::iter::once(0)
            .chain(s.complement(n).members().map(|i| i + 1))
            .collect();
        let members: Vec<usize> = s.members().map(|i| i + 1).collect();
        let cost = |a: usize, b: usize| {
            if a == 0 {
                let v = members[b - 1];
                sources
                    .iter()
                    .map(|&u| &self.cost[u][v])
                    .min()
                    .expect("the source is always present")
                    .clone()
            } else {
                self.cost[members[a - 1]][members[b - 1]].clone()
            }
        };
        rational::sum(kruskal(members.len() + 1, cost).iter().map(|(_, _, c)| c))
    }

    /// `−mst(S ∪ {0})`: the stand-alone value `v^F`, which the theory
    /// equates with `v^p`.
    pub fn pessimistic_game(&self) -> TuGame {
        TuGame::from_fn(self.agents(), |s| {
            -self.mst(Self::with_source(s)).expect("contains the source").cost
        })
        .expect("validated size")
    }

    /// `v^o(S)`: `S` connects to the contracted source `(N∖S) ∪ {0}`.
    pub fn optimistic_game(&self) -> TuGame {
        TuGame::from_fn(self.agents(), |s| -self.contracted_cost(s)).expect("validated size")
    }

    pub fn grand_tree(&self) -> SpanningTree {
        self.mst(Self::with_source(Coalition::grand(self.agents())))
            .expect("contains the source")
    }

    /// Each agent pays the edge to its parent in the grand tree.
    pub fn bird_allocation(&self) -> Allocation {
        let tree = self.grand_tree();
        Allocation(
            (1..self.nodes())
                .map(|v| -self.cost[tree.parent[v].expect("spanning")][v].clone())
                .collect(),
        )
    }

    /// `c̄_ij` = most expensive edge on the path between `i` and `j` in the
    /// given tree over all nodes.
    pub fn irreducible_for(&self, tree: &SpanningTree) -> McstInstance {
        let k = self.nodes();
        let mut adj = vec![Vec::new(); k];
        for (p, c) in tree.edges() {
            adj[p].push(c);
            adj[c].push(p);
        }
        let mut bar = vec![vec![rational::zero(); k]; k];
        for start in 0..k {
            let mut stack = vec![(start, None::<usize>, rational::zero())];
            while let Some((u, from, top)) = stack.pop() {
                bar[start][u] = top.clone();
                for &w in &adj[u] {
                    if Some(w) != from {
                        let edge = &self.cost[u][w];
                        stack.push((w, Some(u), if *edge > top { edge.clone() } else { top.clone() }));
                    }
                }
            }
        }
        McstInstance { cost: bar }
    }

    /// The irreducible cost matrix built from the lexicographic grand tree.
    pub fn irreducible_matrix(&self) -> McstInstance {
        self.irreducible_for(&self.grand_tree())
    }

    /// Every minimum-cost spanning tree over all nodes, by Prüfer
    /// enumeration. Only for small instances.
    pub fn optimal_trees(&self) -> Result<Vec<SpanningTree>> {
        let k = self.nodes();
        if k > 8 {
            return Err(Error::InvalidInstance("tree enumeration is limited to 7 agents".into()));
        }
        let best = self.grand_tree().cost;
        let mut out = Vec::new();
        if k == 2 {
            let tree = SpanningTree {
                parent: orient(2, 0, &[(0, 1)]),
                cost: self.cost[0][1].clone(),
            };
            return Ok(vec![tree]);
        }
        let mut seq = vec![0usize; k - 2];
        loop {
            let edges = prufer_edges(&seq, k);
            let cost = rational::sum(edges.iter().map(|&(a, b)| &self.cost[a][b]));
            if cost == best {
                out.push(SpanningTree {
                    parent: orient(k, 0, &edges),
                    cost,
                });
            }
            let mut d = seq.len();
            loop {
                if d == 0 {
                    return Ok(out);
                }
                d -= 1;
                if seq[d] + 1 < k {
                    seq[d] += 1;
                    break;
                }
                seq[d] = 0;
            }
        }
    }

    /// Three checks on the irreducible matrix: its pessimistic and
    /// optimistic games are dual, its optimistic game equals the original
    /// one, and `A(v^o)` and `C(c̄ v^p)` share their extreme points.
    pub fn irreducible_core_audit(&self, orders: &[Vec<usize>]) -> Result<IrreducibleAudit> {
        let bar = self.irreducible_matrix();
        let (bar_p, bar_o) = (bar.pessimistic_game(), bar.optimistic_game());
        let o = self.optimistic_game();
        Ok(IrreducibleAudit {
            duality: polytope::duality_check(&bar_p, &bar_o)?,
            optimistic_mismatch: Coalition::all(self.agents()).find(|&s| o.value(s) != bar_o.value(s)),
            cross: polytope::cross_validate(&o, &bar_p, orders)?,
        })
    }

    /// Penalty per agent left unconnected: above any tree cost.
    pub fn penalty(&self) -> Rational {
        let k = self.nodes();
        let total = rational::sum((0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| &self.cost[i][j]));
        -(rational::one() + total)
    }

    pub fn declared_class(&self) -> ExternalityTag {
        ExternalityTag::Positive
    }

    pub fn staged(&self) -> McstStaged<'_> {
        McstStaged { instance: self }
    }
}

fn prufer_edges(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &s in seq {
        let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Result of [`McstInstance::irreducible_core_audit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleAudit {
    pub duality: Option<Coalition>,
    pub optimistic_mismatch: Option<Coalition>,
    pub cross: Option<(Polytope, Allocation)>,
}

impl IrreducibleAudit {
    pub fn passed(&self) -> bool {
        self.duality.is_none() && self.optimistic_mismatch.is_none() && self.cross.is_none()
    }
}

/// Staged connection game; the state is the mask of connected nodes. A
/// coalition either stays unconnected or wires every member, each naming
/// its parent node (label = parent + 1).
#[derive(Clone, Copy, Debug)]
pub struct McstStaged<'a> {
    instance: &'a McstInstance,
}

impl StagedProblem for McstStaged<'_> {
    type State = u32;

    fn agents(&self) -> usize {
        self.instance.agents()
    }

    fn initial_state(&self) -> u32 {
        1
    }

    fn moves(&self, coalition: Coalition, connected: &u32) -> Vec<Move<u32>> {
        let m = self.instance;
        let members: Vec<usize> = coalition.members().map(|i| i + 1).collect();
        let penalty = m.penalty();
        let mut out = vec![Move {
            label: vec![0; members.len()],
            payoff: &penalty * rational::int(members.len() as i64),
            shares: Some(vec![penalty; members.len()]),
            next: *connected,
        }];
        if members.is_empty() {
            return out;
        }
        let own = McstInstance::with_source(coalition) & !1;
        let targets: Vec<usize> = (0..m.nodes())
            .filter(|&v| (connected | own) >> v & 1 == 1)
            .collect();
        let mut choice = vec![0usize; members.len()];
        loop {
            let parents: Vec<usize> = choice.iter().map(|&c| targets[c]).collect();
            if members.iter().zip(&parents).all(|(&v, &p)| p != v) && reaches(&members, &parents, *connected) {
                let shares: Vec<Rational> = members
                    .iter()
                    .zip(&parents)
                    .map(|(&v, &p)| -m.cost[p][v].clone())
                    .collect();
                out.push(Move {
                    label: parents.iter().map(|p| p + 1).collect(),
                    payoff: rational::sum(&shares),
                    shares: Some(shares),
                    next: connected | own,
                });
            }
            let mut d = choice.len();
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                if choice[d] + 1 < targets.len() {
                    choice[d] += 1;
                    break;
                }
                choice[d] = 0;
            }
        }
    }
}

/// Whether following parents from every member ends in the connected set.
fn reaches(members: &[usize], parents: &[usize], connected: u32) -> bool {
    members.iter().all(|&start| {
        let mut v = start;
        for _ in 0..=members.len() {
            if connected >> v & 1 == 1 {
                return true;
            }
            match members.iter().position(|&u| u == v) {
                Some(k) => v = parents[k],
                None => return false,
            }
        }
        false
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Engine, Mode};
    use crate::rational::int;

    fn matrix(rows: &[&[i64]]) -> McstInstance {
        McstInstance::new(rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()).unwrap()
    }

    fn example() -> McstInstance {
        matrix(&[&[0, 10, 4], &[10, 0, 3], &[4, 3, 0]])
    }

    #[test]
    fn two_agent_tree() {
        let m = example();
        let t = m.grand_tree();
        assert_eq!(t.cost, int(7));
        assert_eq!(t.edges(), vec![(2, 1), (0, 2)]);
        // The three spanning trees of a triangle cost 14, 13 and 7.
        assert_eq!(m.optimal_trees().unwrap(), vec![t]);
        assert_eq!(m.mst(1).unwrap().cost, int(0));
        assert!(m.mst(0b110).is_err());
    }

    #[test]
    fn two_agent_games() {
        let m = example();
        let (p, o) = (m.pessimistic_game(), m.optimistic_game());
        let one = Coalition::singleton(0);
        assert_eq!(*p.value(one), int(-10));
        assert_eq!(*o.value(one), int(-3));
        assert_eq!(*o.value(Coalition::singleton(1)), int(-3));
        assert_eq!(*p.grand_value(), int(-7));
        assert_eq!(*o.grand_value(), int(-7));
    }

    #[test]
    fn irreducible_two_agent() {
        let m = example();
        let bar = m.irreducible_matrix();
        assert_eq!(bar.cost[0][1], int(4));
        assert_eq!(bar.cost[0][2], int(4));
        assert_eq!(bar.cost[1][2], int(3));
        assert_eq!(bar.irreducible_matrix(), bar);
        assert_eq!(bar.grand_tree().cost, int(7));
    }

    #[test]
    fn bird_is_in_the_anti_core() {
        let m = example();
        let x = m.bird_allocation();
        assert_eq!(x.0, vec![int(-3), int(-4)]);
        let o = m.optimistic_game();
        // x({1}) = -3 ≤ -3, x({2}) = -4 ≤ -3, x(N) = -7.
        assert!(polytope::in_anti_core(&o, &x).unwrap());
        assert!(polytope::in_core(&m.pessimistic_game(), &x).unwrap());
    }

    #[test]
    fn audit_passes() {
        let m = example();
        let audit = m.irreducible_core_audit(&polytope::all_orders(2)).unwrap();
        assert!(audit.passed(), "{audit:?}");
        let uniform = matrix(&[&[0, 2, 2, 2], &[2, 0, 2, 2], &[2, 2, 0, 2], &[2, 2, 2, 0]]);
        assert_eq!(uniform.irreducible_matrix(), uniform);
        assert!(uniform.irreducible_core_audit(&polytope::all_orders(3)).unwrap().passed());
        let o = uniform.optimistic_game();
        for s in Coalition::nonempty(3) {
            assert_eq!(*o.value(s), int(-2 * s.len() as i64));
        }
    }

    #[test]
    fn single_agent() {
        let m = matrix(&[&[0, 5], &[5, 0]]);
        assert_eq!(m.bird_allocation().0, vec![int(-5)]);
        assert_eq!(m.optimal_trees().unwrap().len(), 1);
    }

    fn three_agents() -> McstInstance {
        matrix(&[&[0, 6, 9, 4], &[6, 0, 2, 8], &[9, 2, 0, 3], &[4, 8, 3, 0]])
    }

    #[test]
    fn staged_adapter_agrees() {
        let m = three_agents();
        let e = Engine::new(m.staged()).unwrap();
        assert_eq!(e.first_game().unwrap(), m.pessimistic_game());
        assert_eq!(e.last_game(Mode::Min).unwrap(), m.optimistic_game());
        assert_eq!(e.last_game(Mode::Max).unwrap(), m.optimistic_game());
        assert_eq!(e.optimistic_game().unwrap(), m.optimistic_game());
        assert_eq!(e.anticore_witness().unwrap(), m.bird_allocation());
    }

    /// A first-moving part of `S` cannot wire through partners that are not
    /// connected yet, so the three-stage minimum drops below `v^F`, even
    /// for the grand coalition.
    #[test]
    fn pessimistic_falls_below_first() {
        let m = three_agents();
        let e = Engine::new(m.staged()).unwrap();
        let s = Coalition::from_members([0, 1]);
        assert_eq!(e.first(s).unwrap(), int(-8));
        // Agent 2 connects to the source alone (9), agent 3 hooks onto it
        // (3), then agent 1 follows at cost 2.
        assert_eq!(e.stage(Coalition::singleton(1), s, Mode::Min).unwrap(), int(-11));
        assert_eq!(e.pessimistic(s).unwrap(), (int(-11), vec![Coalition::singleton(1)]));
        let t = e.table().unwrap();
        let audit = e.theorem_audit(&t, m.declared_class()).unwrap();
        let failed: Vec<&str> = audit.failures().map(|c| c.id.as_str()).collect();
        assert_eq!(
            failed,
            vec!["grand-values", "positive-pessimistic", "positive-last-max-in-pessimistic"]
        );
    }

    #[test]
    fn irreducible_matrix_does_not_depend_on_the_tree() {
        let m = matrix(&[&[0, 1, 1, 1], &[1, 0, 1, 2], &[1, 1, 0, 1], &[1, 2, 1, 0]]);
        let trees = m.optimal_trees().unwrap();
        assert!(trees.len() > 1);
        for t in &trees {
            assert_eq!(m.irreducible_for(t), m.irreducible_matrix());
        }
    }

    #[test]
    fn rejects_asymmetric_costs() {
        let bad = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        assert!(McstInstance::new(bad).is_err());
    }
}
