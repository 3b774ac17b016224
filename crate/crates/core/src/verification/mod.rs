//! Oracles and cross-checks that do not share code with the statistics
//! solver.

mod cross_check;
mod enumerate;
mod zielonka;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::game::{ParityGame, Player, VertexId};
use crate::solver::Controller;
use crate::statistics::Statistic;

pub use cross_check::{
    cross_check, minimize_counterexample, Counterexample, CrossCheckParams, CrossCheckReport,
    GameRecord,
};
pub use enumerate::{enumerate_solve, EnumerateError, DEFAULT_ENUMERATION_CAP};
pub use zielonka::{zielonka_solve, ZielonkaSolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("strategy has {got} entries for a game with {expected} vertices")]
    WrongLength { got: usize, expected: usize },
    #[error("strategy makes no choice at {owner}'s vertex {vertex}")]
    NotTotal { owner: Player, vertex: VertexId },
    #[error("strategy picks the missing edge ({from},{to})")]
    MissingEdge { from: VertexId, to: VertexId },
}

/// A memoryless strategy for one player: one successor per owned vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalStrategy {
    owner: Player,
    choice: Vec<Option<VertexId>>,
}

impl PositionalStrategy {
    /// Entries at vertices not owned by `owner` are ignored.
    pub fn new(
        game: &ParityGame,
        owner: Player,
        choice: Vec<Option<VertexId>>,
    ) -> Result<PositionalStrategy, StrategyError> {
        if choice.len() != game.vertex_count() {
            return Err(StrategyError::WrongLength {
                got: choice.len(),
                expected: game.vertex_count(),
            });
        }
        let mut clean = vec![None; choice.len()];
        for v in game.vertices().filter(|&v| game.owner(v) == owner) {
            let to = choice[v as usize].ok_or(StrategyError::NotTotal { owner, vertex: v })?;
            if !game.has_edge(v, to) {
                return Err(StrategyError::MissingEdge { from: v, to });
            }
            clean[v as usize] = Some(to);
        }
        Ok(PositionalStrategy {
            owner,
            choice: clean,
        })
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn choice(&self, v: VertexId) -> Option<VertexId> {
        self.choice.get(v as usize).copied().flatten()
    }
}

impl Controller for PositionalStrategy {
    fn choose(
        &self,
        _game: &ParityGame,
        vertex: VertexId,
        _memory: &Statistic,
    ) -> Option<VertexId> {
        self.choice(vertex)
    }
}

/// For each vertex, whether `strategy` wins every play from it.
///
/// The game is restricted to the strategy's choices. A cycle is bad if its
/// maximum priority has the opponent's parity; for each such priority `p`
/// the vertices of priority `p` are bad iff they lie on a cycle of the
/// subgraph of priorities `<= p`. A vertex is sound iff it reaches no bad
/// vertex in the restriction.
pub fn verify_positional_strategy(
    game: &ParityGame,
    strategy: &PositionalStrategy,
) -> Result<Vec<bool>, StrategyError> {
    let n = game.vertex_count();
    let owner = strategy.owner;
    let mut restricted: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    for v in game.vertices() {
        if game.owner(v) == owner {
            let to = strategy
                .choice(v)
                .ok_or(StrategyError::NotTotal { owner, vertex: v })?;
            if !game.has_edge(v, to) {
                return Err(StrategyError::MissingEdge { from: v, to });
            }
            restricted.push(vec![to]);
        } else {
            restricted.push(game.successors(v).to_vec());
        }
    }

    let mut bad = vec![false; n];
    let mut levels: Vec<u32> = game
        .priorities()
        .iter()
        .copied()
        .filter(|&p| Player::from_priority(p) != owner)
        .collect();
    levels.sort_unstable();
    levels.dedup();
    for p in levels {
        let mut g = DiGraph::<VertexId, ()>::new();
        let nodes: Vec<_> = game.vertices().map(|v| g.add_node(v)).collect();
        for v in game.vertices().filter(|&v| game.priority(v) <= p) {
            for &u in &restricted[v as usize] {
                if game.priority(u) <= p {
                    g.add_edge(nodes[v as usize], nodes[u as usize], ());
                }
            }
        }
        for scc in tarjan_scc(&g) {
            let cyclic = scc.len() > 1 || g.contains_edge(scc[0], scc[0]);
            if !cyclic {
                continue;
            }
            for ix in scc {
                let v = g[ix];
                if game.priority(v) == p {
                    bad[v as usize] = true;
                }
            }
        }
    }

    // backward reachability of bad vertices in the restriction
    let mut preds = vec![Vec::new(); n];
    for v in game.vertices() {
        for &u in &restricted[v as usize] {
            preds[u as usize].push(v);
        }
    }
    let mut reaches_bad = bad.clone();
    let mut stack: Vec<VertexId> = (0..n as VertexId).filter(|&v| bad[v as usize]).collect();
    while let Some(u) = stack.pop() {
        for &p in &preds[u as usize] {
            if !reaches_bad[p as usize] {
                reaches_bad[p as usize] = true;
                stack.push(p);
            }
        }
    }
    Ok(reaches_bad.into_iter().map(|b| !b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_strategy_is_sound() {
        let g = ParityGame::from_edges(vec![2], vec![Player::Anke], [(0, 0)]);
        let s = PositionalStrategy::new(&g, Player::Anke, vec![Some(0)]).unwrap();
        assert_eq!(verify_positional_strategy(&g, &s), Ok(vec![true]));
    }

    #[test]
    fn routing_into_odd_cycle_is_unsound() {
        // 0 (Anke, 2) -> {0, 1}; 1 (Boris, 3) <-> 2 (Boris, 2); 3 (Boris, 1) -> 0
        let g = ParityGame::from_edges(
            vec![2, 3, 2, 1],
            vec![Player::Anke, Player::Boris, Player::Boris, Player::Boris],
            [(0, 0), (0, 1), (1, 2), (2, 1), (3, 0)],
        );
        let into_cycle =
            PositionalStrategy::new(&g, Player::Anke, vec![Some(1), None, None, None]).unwrap();
        assert_eq!(
            verify_positional_strategy(&g, &into_cycle),
            Ok(vec![false, false, false, false])
        );
        let stay =
            PositionalStrategy::new(&g, Player::Anke, vec![Some(0), None, None, None]).unwrap();
        assert_eq!(
            verify_positional_strategy(&g, &stay),
            Ok(vec![true, false, false, true])
        );
    }

    #[test]
    fn boris_strategies_are_checked_dually() {
        let g = ParityGame::from_edges(
            vec![3, 4],
            vec![Player::Boris, Player::Anke],
            [(0, 0), (0, 1), (1, 0)],
        );
        let loop_odd = PositionalStrategy::new(&g, Player::Boris, vec![Some(0), None]).unwrap();
        assert_eq!(
            verify_positional_strategy(&g, &loop_odd),
            Ok(vec![true, true])
        );
        let via_four = PositionalStrategy::new(&g, Player::Boris, vec![Some(1), None]).unwrap();
        assert_eq!(
            verify_positional_strategy(&g, &via_four),
            Ok(vec![false, false])
        );
    }

    #[test]
    fn malformed_strategies() {
        let g = ParityGame::from_edges(
            vec![2, 3],
            vec![Player::Anke, Player::Boris],
            [(0, 1), (1, 0)],
        );
        assert_eq!(
            PositionalStrategy::new(&g, Player::Anke, vec![None, None]),
            Err(StrategyError::NotTotal {
                owner: Player::Anke,
                vertex: 0
            })
        );
        assert_eq!(
            PositionalStrategy::new(&g, Player::Anke, vec![Some(0), None]),
            Err(StrategyError::MissingEdge { from: 0, to: 0 })
        );
        assert!(matches!(
            PositionalStrategy::new(&g, Player::Anke, vec![Some(1)]),
            Err(StrategyError::WrongLength { .. })
        ));
    }
}
