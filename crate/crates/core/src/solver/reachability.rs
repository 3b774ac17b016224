use std::collections::VecDeque;

use super::product::{NodeId, ProductGame};
use crate::game::Player;

/// Winning region of the reaching player (Anke) in a product game, with
/// the backward-induction round in which each node joined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    winning: Vec<bool>,
    rank: Vec<u32>,
}

const UNRANKED: u32 = u32::MAX;

impl Attractor {
    pub fn is_winning(&self, id: NodeId) -> bool {
        id.is_target() || self.winning[id.index()]
    }

    /// Distance to the target under optimal play: 0 for the target,
    /// `None` outside the region.
    pub fn rank(&self, id: NodeId) -> Option<u32> {
        if id.is_target() {
            return Some(0);
        }
        let r = self.rank[id.index()];
        (r != UNRANKED).then_some(r)
    }

    /// Winning non-target nodes.
    pub fn winning_count(&self) -> usize {
        self.winning.iter().filter(|&&w| w).count()
    }

    pub fn winning_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.winning
            .iter()
            .enumerate()
            .filter(|(_, &w)| w)
            .map(|(i, _)| NodeId::from_index(i))
    }
}

/// Backward induction with remaining-successor counters. Each move is
/// inspected once from its head; runs in time linear in the move count.
pub fn solve_reachability(pg: &ProductGame) -> Attractor {
    let n = pg.state_count();
    let target = n;
    let slot = |id: NodeId| if id.is_target() { target } else { id.index() };

    // reverse adjacency over `n + 1` slots, the last one being the target
    let mut in_offsets = vec![0usize; n + 2];
    for id in pg.nodes() {
        for m in pg.moves(id) {
            in_offsets[slot(m.node) + 1] += 1;
        }
    }
    for i in 0..=n {
        in_offsets[i + 1] += in_offsets[i];
    }
    let mut fill = in_offsets.clone();
    let mut preds = vec![0u32; in_offsets[n + 1]];
    for id in pg.nodes() {
        for m in pg.moves(id) {
            let s = slot(m.node);
            preds[fill[s]] = id.index() as u32;
            fill[s] += 1;
        }
    }

    let mut remaining: Vec<usize> = pg.nodes().map(|id| pg.moves(id).len()).collect();
    let mut winning = vec![false; n];
    let mut rank = vec![UNRANKED; n];
    let mut queue = VecDeque::from([(target, 0u32)]);
    while let Some((s, r)) = queue.pop_front() {
        for &p in &preds[in_offsets[s]..in_offsets[s + 1]] {
            let p = p as usize;
            if winning[p] {
                continue;
            }
            let joins = match pg.owner(NodeId::from_index(p)) {
                Player::Anke => true,
                Player::Boris => {
                    remaining[p] -= 1;
                    remaining[p] == 0
                }
            };
            if joins {
                winning[p] = true;
                rank[p] = r + 1;
                queue.push_back((p, r + 1));
            }
        }
    }
    Attractor { winning, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::ParityGame;
    use crate::generate::{generate_random, GeneratorParams};
    use crate::solver::default_k;
    use crate::solver::product::explore;
    use crate::solver::KMode;

    /// Recomputes the region by iterating the one-step predecessor operator
    /// to a fixed point.
    fn naive_region(pg: &ProductGame) -> Vec<bool> {
        let mut win = vec![false; pg.state_count()];
        let is_in = |win: &[bool], id: NodeId| id.is_target() || win[id.index()];
        loop {
            let mut changed = false;
            for id in pg.nodes() {
                if win[id.index()] {
                    continue;
                }
                let moves = pg.moves(id);
                let joins = match pg.owner(id) {
                    Player::Anke => moves.iter().any(|m| is_in(&win, m.node)),
                    Player::Boris => moves.iter().all(|m| is_in(&win, m.node)),
                };
                if joins {
                    win[id.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                return win;
            }
        }
    }

    #[test]
    fn unreachable_target_gives_empty_region() {
        let g = ParityGame::from_edges(vec![1], vec![Player::Anke], [(0, 0)]);
        let attr = solve_reachability(&explore(&g, 1, None).unwrap());
        assert_eq!(attr.winning_count(), 0);
    }

    #[test]
    fn forced_path_into_target() {
        let g = ParityGame::from_edges(vec![2], vec![Player::Boris], [(0, 0)]);
        let pg = explore(&g, 1, None).unwrap();
        let attr = solve_reachability(&pg);
        assert!(attr.is_winning(pg.seed(0)));
        assert_eq!(attr.rank(pg.seed(0)), Some(2));
    }

    #[test]
    fn matches_naive_fixed_point() {
        for seed in 0..1000u64 {
            let n = 1 + (seed % 7) as usize;
            let params = GeneratorParams::new(n, 1 + (seed % 5) as u32, 1, n.min(3), seed);
            let g = generate_random(&params).unwrap();
            let pg = explore(&g, default_k(&g, KMode::Ownership), None).unwrap();
            let attr = solve_reachability(&pg);
            let naive = naive_region(&pg);
            for id in pg.nodes() {
                assert_eq!(attr.is_winning(id), naive[id.index()], "seed {seed}");
            }
            // fixed point: no escape for Boris, a move inside for Anke, ranks decrease
            for id in attr.winning_nodes() {
                let r = attr.rank(id).unwrap();
                let moves = pg.moves(id);
                match pg.owner(id) {
                    Player::Anke => assert!(moves
                        .iter()
                        .any(|m| attr.rank(m.node).is_some_and(|q| q < r))),
                    Player::Boris => assert!(moves
                        .iter()
                        .all(|m| attr.rank(m.node).is_some_and(|q| q < r))),
                }
            }
        }
    }
}
