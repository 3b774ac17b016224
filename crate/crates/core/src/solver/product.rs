use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use thiserror::Error;

use crate::game::{ParityGame, Player, VertexId};
use crate::statistics::{count_partial_increasing, Statistic};

/// Node of a [`ProductGame`]; [`NodeId::TARGET`] is the single absorbing
/// target that collapses every statistic filling index `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const TARGET: NodeId = NodeId(u32::MAX);

    pub fn is_target(self) -> bool {
        self == NodeId::TARGET
    }

    pub fn index(self) -> usize {
        debug_assert!(!self.is_target());
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> NodeId {
        NodeId(i as u32)
    }
}

/// One move of the product game: the parity-game vertex moved to and the
/// product node it leads to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductMove {
    pub vertex: VertexId,
    pub node: NodeId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExploreError {
    #[error(
        "product exploration exceeded the budget of {budget} nodes (size bound {bound_nodes})"
    )]
    BudgetExceeded { budget: usize, bound_nodes: BigUint },
    #[error("statistic index bound must be at least 1")]
    ZeroK,
}

/// The statistics game as an explicit reachability game, restricted to the
/// nodes reachable from the seeds `(v, ∅)`.
///
/// Moves are stored per parity-game edge, so a node may list the target
/// more than once; [`ProductGame::edge_count`] counts distinct edges.
#[derive(Clone, Debug)]
pub struct ProductGame {
    k: usize,
    vertices: Vec<VertexId>,
    statistics: Vec<Statistic>,
    owners: Vec<Player>,
    offsets: Vec<usize>,
    moves: Vec<ProductMove>,
    index: HashMap<(VertexId, Statistic), NodeId>,
    edge_count: usize,
    target_reached: bool,
}

/// `n * |S(k-1, M)| + 1` and `m * |S(k-1, M)|`.
pub fn size_bounds(game: &ParityGame, k: usize) -> (BigUint, BigUint) {
    let space = count_partial_increasing(k as u64 - 1, u64::from(game.max_priority()));
    let nodes = &space * BigUint::from(game.vertex_count()) + 1u32;
    let edges = space * BigUint::from(game.edge_count());
    (nodes, edges)
}

/// Breadth-first closure from the seeds `(0, ∅), (1, ∅), ...`; node ids
/// follow discovery order and successors are visited in ascending vertex
/// order, so the result is deterministic.
///
/// The game must be valid. `budget` caps the number of non-target nodes.
pub fn explore(
    game: &ParityGame,
    k: usize,
    budget: Option<usize>,
) -> Result<ProductGame, ExploreError> {
    if k == 0 {
        return Err(ExploreError::ZeroK);
    }
    let n = game.vertex_count();
    let mut pg = ProductGame {
        k,
        vertices: Vec::new(),
        statistics: Vec::new(),
        owners: Vec::new(),
        offsets: vec![0],
        moves: Vec::new(),
        index: HashMap::new(),
        edge_count: 0,
        target_reached: false,
    };
    let over_budget = |count: usize| budget.is_some_and(|b| count > b);
    let exceeded = || ExploreError::BudgetExceeded {
        budget: budget.unwrap_or(0),
        bound_nodes: size_bounds(game, k).0,
    };

    let mut queue = VecDeque::new();
    for v in game.vertices() {
        pg.intern(game, v, Statistic::empty(k));
        queue.push_back(NodeId::from_index(v as usize));
    }
    if over_budget(n) {
        return Err(exceeded());
    }

    // Nodes are interned in discovery order and popped in the same order,
    // so `offsets` can be filled as each node is expanded.
    while let Some(id) = queue.pop_front() {
        debug_assert_eq!(id.index() + 1, pg.offsets.len());
        let v = pg.vertices[id.index()];
        let f = pg.statistics[id.index()].clone();
        let mut to_target = false;
        for &u in game.successors(v) {
            let next = f.update(game.priority(u)).statistic;
            let node = if next.contains_index(k) {
                if !to_target {
                    pg.edge_count += 1;
                    to_target = true;
                }
                pg.target_reached = true;
                NodeId::TARGET
            } else {
                pg.edge_count += 1;
                match pg.index.get(&(u, next.clone())) {
                    Some(&existing) => existing,
                    None => {
                        let fresh = pg.intern(game, u, next);
                        if over_budget(pg.vertices.len()) {
                            return Err(exceeded());
                        }
                        queue.push_back(fresh);
                        fresh
                    }
                }
            };
            pg.moves.push(ProductMove { vertex: u, node });
        }
        pg.offsets.push(pg.moves.len());
    }
    Ok(pg)
}

impl ProductGame {
    fn intern(&mut self, game: &ParityGame, v: VertexId, f: Statistic) -> NodeId {
        let id = NodeId::from_index(self.vertices.len());
        self.vertices.push(v);
        self.owners.push(game.owner(v));
        self.index.insert((v, f.clone()), id);
        self.statistics.push(f);
        id
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Explored nodes, counting the target once if any move reaches it.
    pub fn node_count(&self) -> usize {
        self.vertices.len() + usize::from(self.target_reached)
    }

    /// Non-target nodes; their ids are `0..state_count()`.
    pub fn state_count(&self) -> usize {
        self.vertices.len()
    }

    /// Distinct edges (parallel moves into the target count once).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn target_reached(&self) -> bool {
        self.target_reached
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.vertices.len()).map(NodeId::from_index)
    }

    pub fn vertex(&self, id: NodeId) -> VertexId {
        self.vertices[id.index()]
    }

    pub fn statistic(&self, id: NodeId) -> &Statistic {
        &self.statistics[id.index()]
    }

    pub fn owner(&self, id: NodeId) -> Player {
        self.owners[id.index()]
    }

    /// Moves out of `id`, ascending by parity-game vertex.
    pub fn moves(&self, id: NodeId) -> &[ProductMove] {
        &self.moves[self.offsets[id.index()]..self.offsets[id.index() + 1]]
    }

    pub fn lookup(&self, v: VertexId, f: &Statistic) -> Option<NodeId> {
        // TODO: borrow-keyed lookup would avoid this clone
        self.index.get(&(v, f.clone())).copied()
    }

    /// The seed node `(v, ∅)`.
    pub fn seed(&self, v: VertexId) -> NodeId {
        NodeId::from_index(v as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn self_loop(priority: u32) -> ParityGame {
        ParityGame::from_edges(vec![priority], vec![Player::Anke], [(0, 0)])
    }

    #[test]
    fn odd_self_loop_never_reaches_target() {
        let pg = explore(&self_loop(1), 1, None).unwrap();
        assert_eq!(pg.node_count(), 1);
        assert_eq!(pg.edge_count(), 1);
        assert!(!pg.target_reached());
        assert_eq!(
            pg.moves(pg.seed(0)),
            &[ProductMove {
                vertex: 0,
                node: pg.seed(0)
            }]
        );
    }

    #[test]
    fn even_self_loop_reaches_target_in_two_moves() {
        let pg = explore(&self_loop(2), 1, None).unwrap();
        assert_eq!(pg.state_count(), 2);
        assert_eq!(pg.node_count(), 3);
        let second = pg.moves(pg.seed(0))[0].node;
        assert_eq!(
            pg.statistic(second),
            &Statistic::from_entries(1, &[(0, 2)]).unwrap()
        );
        assert_eq!(pg.moves(second)[0].node, NodeId::TARGET);
    }

    #[test]
    fn parallel_target_moves_count_once() {
        let g = ParityGame::from_edges(
            vec![2, 2],
            vec![Player::Anke, Player::Anke],
            [(0, 0), (0, 1), (1, 0)],
        );
        let pg = explore(&g, 1, None).unwrap();
        let f = Statistic::from_entries(1, &[(0, 2)]).unwrap();
        let id = pg.lookup(0, &f).unwrap();
        assert_eq!(pg.moves(id).len(), 2);
        assert!(pg.moves(id).iter().all(|m| m.node.is_target()));
        let distinct: usize = pg
            .nodes()
            .map(|id| {
                let mut t: Vec<_> = pg.moves(id).iter().map(|m| m.node).collect();
                t.dedup();
                t.len()
            })
            .sum();
        assert_eq!(pg.edge_count(), distinct);
    }

    #[test]
    fn budget_is_enforced() {
        let g = ParityGame::from_edges(
            vec![2, 4],
            vec![Player::Anke, Player::Boris],
            [(0, 1), (1, 0)],
        );
        let err = explore(&g, 3, Some(3)).unwrap_err();
        assert!(matches!(
            err,
            ExploreError::BudgetExceeded { budget: 3, .. }
        ));
        assert_eq!(explore(&g, 0, None).unwrap_err(), ExploreError::ZeroK);
    }

    #[test]
    fn size_bounds_example() {
        let g = self_loop(2);
        let (nodes, edges) = size_bounds(&g, 2);
        // |S(1, 2)| = 8
        assert_eq!(nodes, BigUint::from(9u32));
        assert_eq!(edges, BigUint::from(8u32));
    }
}
