//! Zielonka's recursive attractor decomposition, with positional strategy
//! extraction.

use std::collections::VecDeque;

use super::PositionalStrategy;
use crate::game::{ParityGame, Player, VertexId};

#[derive(Clone, Debug)]
pub struct ZielonkaSolution {
    pub winners: Vec<Player>,
    /// Positional strategies indexed by [`Player::index`]. Each is total on
    /// its owner's vertices and winning on the owner's region.
    pub strategies: [PositionalStrategy; 2],
}

struct Solver<'a> {
    game: &'a ParityGame,
    preds: Vec<Vec<VertexId>>,
}

struct Solution {
    region: [Vec<bool>; 2],
}

impl<'a> Solver<'a> {
    fn new(game: &'a ParityGame) -> Self {
        let mut preds = vec![Vec::new(); game.vertex_count()];
        for (v, u) in game.edges() {
            preds[u as usize].push(v);
        }
        Solver { game, preds }
    }

    /// `player`-attractor of `target` inside `sub`. Records attracting
    /// moves of `player` in `strategy`.
    fn attractor(
        &self,
        sub: &[bool],
        player: Player,
        target: &[bool],
        strategy: &mut [Option<VertexId>],
    ) -> Vec<bool> {
        let game = self.game;
        let mut attr: Vec<bool> = target.to_vec();
        let mut remaining: Vec<usize> = game
            .vertices()
            .map(|v| {
                game.successors(v)
                    .iter()
                    .filter(|&&u| sub[u as usize])
                    .count()
            })
            .collect();
        let mut queue: VecDeque<VertexId> =
            game.vertices().filter(|&v| target[v as usize]).collect();
        while let Some(u) = queue.pop_front() {
            for &p in &self.preds[u as usize] {
                let pi = p as usize;
                if !sub[pi] || attr[pi] {
                    continue;
                }
                let joins = if game.owner(p) == player {
                    strategy[pi] = Some(u);
                    true
                } else {
                    remaining[pi] -= 1;
                    remaining[pi] == 0
                };
                if joins {
                    attr[pi] = true;
                    queue.push_back(p);
                }
            }
        }
        attr
    }

    fn solve(&self, sub: &[bool], strategy: &mut [Option<VertexId>]) -> Solution {
        let game = self.game;
        let n = game.vertex_count();
        let Some(top) = game
            .vertices()
            .filter(|&v| sub[v as usize])
            .map(|v| game.priority(v))
            .max()
        else {
            return Solution {
                region: [vec![false; n], vec![false; n]],
            };
        };
        let alpha = Player::from_priority(top);
        let opp = alpha.opponent();

        let tops: Vec<bool> = game
            .vertices()
            .map(|v| sub[v as usize] && game.priority(v) == top)
            .collect();
        // alpha vertices of top priority may move anywhere inside `sub`
        for v in game
            .vertices()
            .filter(|&v| tops[v as usize] && game.owner(v) == alpha)
        {
            strategy[v as usize] = game
                .successors(v)
                .iter()
                .copied()
                .find(|&u| sub[u as usize]);
        }
        let a = self.attractor(sub, alpha, &tops, strategy);
        let rest: Vec<bool> = (0..n).map(|i| sub[i] && !a[i]).collect();
        let inner = self.solve(&rest, strategy);

        if !inner.region[opp.index()].iter().any(|&b| b) {
            let mut region = [vec![false; n], vec![false; n]];
            region[alpha.index()] = sub.to_vec();
            return Solution { region };
        }

        let b = self.attractor(sub, opp, &inner.region[opp.index()], strategy);
        let rest: Vec<bool> = (0..n).map(|i| sub[i] && !b[i]).collect();
        let mut outer = self.solve(&rest, strategy);
        for (won, &attracted) in outer.region[opp.index()].iter_mut().zip(&b) {
            *won |= attracted;
        }
        outer
    }
}

pub fn zielonka_solve(game: &ParityGame) -> ZielonkaSolution {
    let n = game.vertex_count();
    let solver = Solver::new(game);
    let mut strategy = vec![None; n];
    let all = vec![true; n];
    let solution = solver.solve(&all, &mut strategy);

    let winners: Vec<Player> = (0..n)
        .map(|i| {
            if solution.region[Player::Anke.index()][i] {
                Player::Anke
            } else {
                Player::Boris
            }
        })
        .collect();

    let build = |player: Player| {
        let choice: Vec<Option<VertexId>> = game
            .vertices()
            .map(|v| {
                if game.owner(v) != player {
                    None
                } else if winners[v as usize] == player {
                    strategy[v as usize]
                } else {
                    game.successors(v).first().copied()
                }
            })
            .collect();
        PositionalStrategy::new(game, player, choice).expect("zielonka strategy is total")
    };
    let strategies = [build(Player::Anke), build(Player::Boris)];
    ZielonkaSolution {
        winners,
        strategies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::verify_positional_strategy;

    #[test]
    fn even_self_loop() {
        let g = ParityGame::from_edges(vec![2], vec![Player::Anke], [(0, 0)]);
        let s = zielonka_solve(&g);
        assert_eq!(s.winners, vec![Player::Anke]);
        assert_eq!(s.strategies[0].choice(0), Some(0));
    }

    #[test]
    fn two_cycle_goes_to_boris() {
        let g = ParityGame::from_edges(
            vec![2, 3],
            vec![Player::Anke, Player::Boris],
            [(0, 1), (1, 0)],
        );
        assert_eq!(
            zielonka_solve(&g).winners,
            vec![Player::Boris, Player::Boris]
        );
    }

    #[test]
    fn choice_matters() {
        // Anke at 0 chooses between an even loop on 1 and an odd loop on 2.
        let g = ParityGame::from_edges(
            vec![1, 4, 5],
            vec![Player::Anke, Player::Boris, Player::Boris],
            [(0, 1), (0, 2), (1, 1), (2, 2)],
        );
        let s = zielonka_solve(&g);
        assert_eq!(s.winners, vec![Player::Anke, Player::Anke, Player::Boris]);
        assert_eq!(s.strategies[0].choice(0), Some(1));
        let sound = verify_positional_strategy(&g, &s.strategies[0]).unwrap();
        assert!(sound[0] && sound[1]);
    }
}
