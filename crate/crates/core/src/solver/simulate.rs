use std::collections::HashMap;

use thiserror::Error;

use super::strategy::MemoryStrategy;
use crate::game::{ParityGame, Player, Priority, VertexId};
use crate::generate::mix_seed;
use crate::statistics::Statistic;

/// Decides moves from the current vertex and the statistic of the play so
/// far. Returning `None` means the controller has no move there.
pub trait Controller {
    fn choose(&self, game: &ParityGame, vertex: VertexId, memory: &Statistic) -> Option<VertexId>;
}

impl Controller for MemoryStrategy<'_> {
    fn choose(&self, _game: &ParityGame, vertex: VertexId, memory: &Statistic) -> Option<VertexId> {
        self.decision(vertex, memory)
    }
}

/// A pseudo-random controller that is a fixed function of
/// `(seed, vertex, statistic)`, so plays against it still form lassos.
#[derive(Clone, Copy, Debug)]
pub struct SeededRandom {
    pub seed: u64,
}

impl Controller for SeededRandom {
    fn choose(&self, game: &ParityGame, vertex: VertexId, memory: &Statistic) -> Option<VertexId> {
        let succ = game.successors(vertex);
        if succ.is_empty() {
            return None;
        }
        let mut h = mix_seed(self.seed, u64::from(vertex));
        for (i, c) in memory.entries() {
            h = mix_seed(h, ((i as u64) << 32) | u64::from(c));
        }
        Some(succ[(h % succ.len() as u64) as usize])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlayState {
    pub vertex: VertexId,
    pub memory: Statistic,
}

/// A play `prefix · cycle^ω` over play states.
#[derive(Clone, Debug)]
pub struct Lasso {
    pub prefix: Vec<PlayState>,
    pub cycle: Vec<PlayState>,
    /// Maximum vertex priority on the cycle, i.e. the limsup of the play.
    pub cycle_max_priority: Priority,
    /// Moves whose update filled index `k` (after which memory resets).
    pub target_hits: usize,
}

impl Lasso {
    pub fn winner(&self) -> Player {
        Player::from_priority(self.cycle_max_priority)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimulationError {
    #[error("no repeated state within {cap} moves")]
    CapExceeded { cap: usize },
    #[error("{player} has no move at vertex {vertex} with statistic {memory}")]
    NoDecision {
        player: Player,
        vertex: VertexId,
        memory: String,
    },
    #[error("{player} moved along the missing edge ({from},{to})")]
    IllegalMove {
        player: Player,
        from: VertexId,
        to: VertexId,
    },
}

/// Plays `anke` against `boris` from `start` with statistic memory bounded
/// by `k`, resetting the memory to `∅` whenever an update fills index `k`.
/// Stops at the first repeated `(vertex, memory)` state.
pub fn simulate(
    game: &ParityGame,
    start: VertexId,
    anke: &dyn Controller,
    boris: &dyn Controller,
    k: usize,
    cap: usize,
) -> Result<Lasso, SimulationError> {
    let mut seen: HashMap<PlayState, usize> = HashMap::new();
    let mut path: Vec<PlayState> = Vec::new();
    let mut hits: Vec<bool> = Vec::new();
    let mut state = PlayState {
        vertex: start,
        memory: Statistic::empty(k),
    };
    loop {
        if let Some(&first) = seen.get(&state) {
            let cycle = path.split_off(first);
            let cycle_max_priority = cycle
                .iter()
                .map(|s| game.priority(s.vertex))
                .max()
                .expect("non-empty cycle");
            return Ok(Lasso {
                prefix: path,
                cycle,
                cycle_max_priority,
                target_hits: hits.iter().filter(|&&h| h).count(),
            });
        }
        if path.len() >= cap {
            return Err(SimulationError::CapExceeded { cap });
        }
        let player = game.owner(state.vertex);
        let controller = match player {
            Player::Anke => anke,
            Player::Boris => boris,
        };
        let next = controller
            .choose(game, state.vertex, &state.memory)
            .ok_or_else(|| SimulationError::NoDecision {
                player,
                vertex: state.vertex,
                memory: state.memory.to_string(),
            })?;
        if !game.has_edge(state.vertex, next) {
            return Err(SimulationError::IllegalMove {
                player,
                from: state.vertex,
                to: next,
            });
        }
        let updated = state.memory.update(game.priority(next)).statistic;
        let hit = updated.contains_index(k);
        let memory = if hit { Statistic::empty(k) } else { updated };
        seen.insert(state.clone(), path.len());
        path.push(state);
        hits.push(hit);
        state = PlayState {
            vertex: next,
            memory,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{extract_strategy, solve, SolveOptions};

    #[test]
    fn self_loop_cycle_is_the_loop() {
        let g = ParityGame::from_edges(vec![1], vec![Player::Boris], [(0, 0)]);
        let r = solve(&g, &SolveOptions::default()).unwrap();
        let boris = extract_strategy(&r, Player::Boris);
        assert_eq!(boris.decision(0, &Statistic::empty(r.k)), Some(0));
        let lasso = simulate(&g, 0, &SeededRandom { seed: 1 }, &boris, r.k, 100).unwrap();
        assert!(lasso.prefix.is_empty());
        assert_eq!(lasso.cycle.len(), 1);
        assert_eq!(lasso.winner(), Player::Boris);
        assert_eq!(lasso.target_hits, 0);
    }

    #[test]
    fn anke_reset_strategy_on_even_loop() {
        let g = ParityGame::from_edges(vec![2], vec![Player::Anke], [(0, 0)]);
        let r = solve(&g, &SolveOptions::default()).unwrap();
        let anke = extract_strategy(&r, Player::Anke);
        assert!(anke.undefined().is_empty());
        let lasso = simulate(&g, 0, &anke, &SeededRandom { seed: 0 }, r.k, 100).unwrap();
        // (0,∅) -> (0,{0↦2}) -> target, reset to (0,∅)
        assert_eq!(lasso.cycle.len(), 2);
        assert_eq!(lasso.target_hits, 1);
        assert_eq!(lasso.winner(), Player::Anke);
    }

    #[test]
    fn cap_and_missing_decisions_are_reported() {
        let g = ParityGame::from_edges(
            vec![2, 2],
            vec![Player::Anke, Player::Anke],
            [(0, 1), (1, 0)],
        );
        let r = solve(&g, &SolveOptions::default()).unwrap();
        let boris = extract_strategy(&r, Player::Boris);
        assert_eq!(boris.decision_count(), 0);
        let err = simulate(&g, 0, &SeededRandom { seed: 0 }, &boris, r.k, 1).unwrap_err();
        assert_eq!(err, SimulationError::CapExceeded { cap: 1 });
        let err = simulate(&g, 0, &boris, &boris, r.k, 10).unwrap_err();
        assert!(matches!(
            err,
            SimulationError::NoDecision {
                player: Player::Anke,
                ..
            }
        ));
    }
}
