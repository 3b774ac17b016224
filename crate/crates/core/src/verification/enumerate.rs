//! Brute-force solving over all pairs of positional strategies.

use thiserror::Error;

use crate::game::{ParityGame, Player, Priority, VertexId};

/// Default cap on the number of strategy pairs.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("{pairs} strategy pairs exceed the cap of {cap}")]
    CapExceeded { pairs: u128, cap: u64 },
}

/// Number of positional strategy pairs of `game`.
pub fn strategy_pair_count(game: &ParityGame) -> u128 {
    game.vertices()
        .map(|v| game.successors(v).len() as u128)
        .try_fold(1u128, |acc, d| acc.checked_mul(d))
        .unwrap_or(u128::MAX)
}

/// Anke wins `v` iff some positional Anke strategy makes every positional
/// Boris reply produce a lasso from `v` whose cycle maximum is even.
pub fn enumerate_solve(game: &ParityGame, cap: u64) -> Result<Vec<Player>, EnumerateError> {
    let pairs = strategy_pair_count(game);
    if pairs > u128::from(cap) {
        return Err(EnumerateError::CapExceeded { pairs, cap });
    }
    let n = game.vertex_count();
    let anke: Vec<VertexId> = game
        .vertices()
        .filter(|&v| game.owner(v) == Player::Anke)
        .collect();
    let boris: Vec<VertexId> = game
        .vertices()
        .filter(|&v| game.owner(v) == Player::Boris)
        .collect();

    let mut next = vec![0 as VertexId; n];
    let mut anke_wins = vec![false; n];
    let mut sigma = Odometer::new(&anke);
    loop {
        sigma.apply(game, &mut next);
        let mut wins_all = vec![true; n];
        let mut tau = Odometer::new(&boris);
        loop {
            tau.apply(game, &mut next);
            let limsup = cycle_maxima(game, &next);
            for v in 0..n {
                if limsup[v] % 2 == 1 {
                    wins_all[v] = false;
                }
            }
            if !tau.step(game) {
                break;
            }
        }
        for v in 0..n {
            anke_wins[v] |= wins_all[v];
        }
        if !sigma.step(game) {
            break;
        }
    }
    Ok(anke_wins
        .into_iter()
        .map(|w| if w { Player::Anke } else { Player::Boris })
        .collect())
}

/// Mixed-radix counter over the successor choices of a vertex set.
struct Odometer {
    vertices: Vec<VertexId>,
    digits: Vec<usize>,
}

impl Odometer {
    fn new(vertices: &[VertexId]) -> Odometer {
        Odometer {
            vertices: vertices.to_vec(),
            digits: vec![0; vertices.len()],
        }
    }

    fn apply(&self, game: &ParityGame, next: &mut [VertexId]) {
        for (&v, &d) in self.vertices.iter().zip(&self.digits) {
            next[v as usize] = game.successors(v)[d];
        }
    }

    fn step(&mut self, game: &ParityGame) -> bool {
        for (i, &v) in self.vertices.iter().enumerate() {
            self.digits[i] += 1;
            if self.digits[i] < game.successors(v).len() {
                return true;
            }
            self.digits[i] = 0;
        }
        false
    }
}

/// For a functional graph `next`, the maximum priority on the cycle each
/// vertex eventually enters.
fn cycle_maxima(game: &ParityGame, next: &[VertexId]) -> Vec<Priority> {
    let n = next.len();
    const UNKNOWN: Priority = 0;
    let mut value = vec![UNKNOWN; n];
    let mut visit = vec![usize::MAX; n];
    for start in 0..n {
        if value[start] != UNKNOWN {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while value[v] == UNKNOWN && visit[v] != start {
            visit[v] = start;
            path.push(v);
            v = next[v] as usize;
        }
        let result = if value[v] != UNKNOWN {
            value[v]
        } else {
            // v closes a new cycle on the current path
            let pos = path.iter().position(|&x| x == v).expect("cycle on path");
            let max = path[pos..]
                .iter()
                .map(|&x| game.priority(x as VertexId))
                .max()
                .expect("non-empty");
            for &x in &path[pos..] {
                value[x] = max;
            }
            path.truncate(pos);
            max
        };
        for &x in &path {
            value[x] = result;
        }
    }
    value
}
