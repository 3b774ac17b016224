use super::product::{NodeId, ProductGame};
use super::SolveResult;
use crate::game::{Player, VertexId};
use crate::statistics::Statistic;

/// A strategy that remembers the current statistic of the play.
///
/// Boris's version keeps the play outside the attractor forever. Anke's
/// version always moves to a successor of smaller attractor rank; once the
/// target is hit, the play continues from the reached vertex with the
/// statistic reset to `∅`.
///
/// Anke's version wins the reachability game but is not in general a
/// winning parity-game strategy: repeated resets can let an odd priority
/// dominate between target hits, and a reset can land on a vertex outside
/// her region where the strategy has no decision.
#[derive(Clone, Debug)]
pub struct MemoryStrategy<'a> {
    owner: Player,
    product: &'a ProductGame,
    choice: Vec<Option<VertexId>>,
    undefined: Vec<NodeId>,
}

impl<'a> MemoryStrategy<'a> {
    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn k(&self) -> usize {
        self.product.k()
    }

    /// Whether hitting the target resets the statistic memory.
    pub fn resets_on_target(&self) -> bool {
        self.owner == Player::Anke
    }

    pub fn decision_at(&self, id: NodeId) -> Option<VertexId> {
        self.choice.get(id.index()).copied().flatten()
    }

    pub fn decision(&self, v: VertexId, memory: &Statistic) -> Option<VertexId> {
        self.product
            .lookup(v, memory)
            .and_then(|id| self.decision_at(id))
    }

    /// Nodes owned by this player where the strategy is undefined because
    /// they lie in the opponent's region.
    pub fn undefined(&self) -> &[NodeId] {
        &self.undefined
    }

    pub fn decision_count(&self) -> usize {
        self.choice.iter().filter(|c| c.is_some()).count()
    }
}

/// Least-id winning strategy for `player` on the explored product.
pub fn extract_strategy(result: &SolveResult, player: Player) -> MemoryStrategy<'_> {
    let pg = &result.product;
    let attr = &result.attractor;
    let mut choice = vec![None; pg.state_count()];
    let mut undefined = Vec::new();
    for id in pg.nodes().filter(|&id| pg.owner(id) == player) {
        let pick = match player {
            Player::Boris if !attr.is_winning(id) => pg
                .moves(id)
                .iter()
                .find(|m| !attr.is_winning(m.node))
                .map(|m| m.vertex),
            Player::Anke if attr.is_winning(id) => {
                let r = attr.rank(id).expect("winning node has a rank");
                pg.moves(id)
                    .iter()
                    .find(|m| attr.rank(m.node).is_some_and(|q| q < r))
                    .map(|m| m.vertex)
            }
            _ => None,
        };
        match pick {
            Some(u) => choice[id.index()] = Some(u),
            None => undefined.push(id),
        }
    }
    MemoryStrategy {
        owner: player,
        product: pg,
        choice,
        undefined,
    }
}
