//! The statistics game as a reachability game.
//!
//! Nodes are pairs `(v, f)` of a vertex and a statistic not using index
//! `k`. Moving along `(v, u)` updates `f` by the priority of `u`; an update
//! that fills index `k` goes to the target instead. Anke wins the parity
//! game from `v` iff she can force the target from `(v, ∅)`. The starting
//! vertex's own priority is not read.

mod product;
mod reachability;
mod simulate;
mod strategy;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::game::{ParityGame, Player, Violation};

pub use product::{explore, size_bounds, ExploreError, NodeId, ProductGame, ProductMove};
pub use reachability::{solve_reachability, Attractor};
pub use simulate::{simulate, Controller, Lasso, PlayState, SeededRandom, SimulationError};
pub use strategy::{extract_strategy, MemoryStrategy};

/// Default product-node cap, overridable on the command line.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// How the statistic index bound is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KMode {
    /// Smallest `k` with `2^k > 2n`, the requirement for strictly
    /// alternating play where a loop must repeat vertex and player.
    Alternating,
    /// Smallest `k` with `2^k > n`; enough when the owner is a function of
    /// the vertex.
    Ownership,
}

/// Smallest `k >= 1` with `2^k` above `n` (ownership) or `2n` (alternating).
pub fn default_k(game: &ParityGame, mode: KMode) -> usize {
    let n = game.vertex_count() as u128;
    let limit = match mode {
        KMode::Alternating => 2 * n,
        KMode::Ownership => n,
    };
    let mut k = 1;
    while (1u128 << k) <= limit {
        k += 1;
    }
    k
}

/// `ceil(log2(n + 1))`, evaluated in floating point.
pub fn log_k(n: usize) -> usize {
    ((n as f64 + 1.0).log2().ceil() as usize).max(1)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid game: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidGame(Vec<Violation>),
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Statistic index bound; ownership-mode default when absent.
    pub k: Option<usize>,
    /// Product-node cap for exploration.
    pub budget: Option<usize>,
}

/// Size of the explored product next to its a priori bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExploreStats {
    pub k: usize,
    pub product_nodes: usize,
    pub product_edges: usize,
    #[serde(serialize_with = "serialize_big")]
    pub bound_nodes: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub bound_edges: BigUint,
}

/// Integers that fit in `u64` are written as JSON numbers, larger ones as
/// decimal strings.
fn serialize_big<S: serde::Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(value) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&value.to_string()),
    }
}

impl ExploreStats {
    pub fn within_bounds(&self) -> bool {
        BigUint::from(self.product_nodes) <= self.bound_nodes
            && BigUint::from(self.product_edges) <= self.bound_edges
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub winners: Vec<Player>,
    pub k: usize,
    pub product: ProductGame,
    pub attractor: Attractor,
    pub stats: ExploreStats,
}

impl SolveResult {
    pub fn winner(&self, v: crate::game::VertexId) -> Player {
        self.winners[v as usize]
    }
}

/// Solves `game` by exploring the statistics game and running backward
/// induction on it.
pub fn solve(game: &ParityGame, options: &SolveOptions) -> Result<SolveResult, SolveError> {
    let violations = game.validate();
    if !violations.is_empty() {
        return Err(SolveError::InvalidGame(violations));
    }
    let k = options
        .k
        .unwrap_or_else(|| default_k(game, KMode::Ownership));
    let product = explore(game, k, options.budget)?;
    let attractor = solve_reachability(&product);
    let winners = game
        .vertices()
        .map(|v| {
            if attractor.is_winning(product.seed(v)) {
                Player::Anke
            } else {
                Player::Boris
            }
        })
        .collect();
    let (bound_nodes, bound_edges) = size_bounds(game, k);
    let stats = ExploreStats {
        k,
        product_nodes: product.node_count(),
        product_edges: product.edge_count(),
        bound_nodes,
        bound_edges,
    };
    Ok(SolveResult {
        winners,
        k,
        product,
        attractor,
        stats,
    })
}
