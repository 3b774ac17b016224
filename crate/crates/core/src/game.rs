//! Parity game model: vertices with priorities and owners, successor lists,
//! structural validation and the reduction to strictly alternating play.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type VertexId = u32;
pub type Priority = u32;

/// The two players. Anke is the even player, Boris the odd one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Anke,
    Boris,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Anke => Player::Boris,
            Player::Boris => Player::Anke,
        }
    }

    /// The player who wins a play whose limsup is `priority`.
    pub fn from_priority(priority: Priority) -> Player {
        if priority.is_multiple_of(2) {
            Player::Anke
        } else {
            Player::Boris
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Anke => 0,
            Player::Boris => 1,
        }
    }

    /// PGSolver owner code: 0 for the even player, 1 for the odd player.
    pub fn code(self) -> u8 {
        self.index() as u8
    }

    /// `"even"` / `"odd"`, as used in machine-readable output.
    pub fn parity_name(self) -> &'static str {
        match self {
            Player::Anke => "even",
            Player::Boris => "odd",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Anke => write!(f, "Anke"),
            Player::Boris => write!(f, "Boris"),
        }
    }
}

/// A broken structural invariant of a [`ParityGame`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    SinkVertex {
        vertex: VertexId,
    },
    DanglingEdge {
        from: VertexId,
        to: VertexId,
    },
    PriorityOutOfRange {
        vertex: VertexId,
        priority: Priority,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "game has no vertices"),
            Violation::SinkVertex { vertex } => {
                write!(f, "vertex {vertex} has no outgoing edge")
            }
            Violation::DanglingEdge { from, to } => {
                write!(f, "edge ({from},{to}) points outside the vertex range")
            }
            Violation::PriorityOutOfRange { vertex, priority } => {
                write!(
                    f,
                    "vertex {vertex} has priority {priority}, expected at least 1"
                )
            }
        }
    }
}

/// A parity game in the vertex-ownership model.
///
/// Successor lists are kept sorted and free of duplicates, so the edge
/// relation is a set. Construction does not check the structural
/// invariants; call [`ParityGame::validate`] for that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    priorities: Vec<Priority>,
    owners: Vec<Player>,
    successors: Vec<Vec<VertexId>>,
    names: Vec<Option<String>>,
    priority_shift: Priority,
}

impl ParityGame {
    /// Builds a game from per-vertex data. Panics if the three vectors have
    /// different lengths.
    pub fn from_parts(
        priorities: Vec<Priority>,
        owners: Vec<Player>,
        mut successors: Vec<Vec<VertexId>>,
    ) -> ParityGame {
        assert_eq!(
            priorities.len(),
            owners.len(),
            "priority/owner length mismatch"
        );
        assert_eq!(
            priorities.len(),
            successors.len(),
            "priority/successor length mismatch"
        );
        for succ in &mut successors {
            succ.sort_unstable();
            succ.dedup();
        }
        let n = priorities.len();
        ParityGame {
            priorities,
            owners,
            successors,
            names: vec![None; n],
            priority_shift: 0,
        }
    }

    /// Builds a game from an explicit edge list.
    pub fn from_edges(
        priorities: Vec<Priority>,
        owners: Vec<Player>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> ParityGame {
        let mut successors = vec![Vec::new(); priorities.len()];
        for (from, to) in edges {
            successors[from as usize].push(to);
        }
        ParityGame::from_parts(priorities, owners, successors)
    }

    pub fn with_names(mut self, names: Vec<Option<String>>) -> ParityGame {
        assert_eq!(names.len(), self.priorities.len());
        self.names = names;
        self
    }

    pub(crate) fn with_priority_shift(mut self, shift: Priority) -> ParityGame {
        self.priority_shift = shift;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.priorities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.priorities.len()).map(|v| v as VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(v, succ)| succ.iter().map(move |&u| (v as VertexId, u)))
    }

    pub fn priority(&self, v: VertexId) -> Priority {
        self.priorities[v as usize]
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owners[v as usize]
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.successors[v as usize]
    }

    pub fn has_edge(&self, from: VertexId, to: VertexId) -> bool {
        self.successors
            .get(from as usize)
            .is_some_and(|succ| succ.binary_search(&to).is_ok())
    }

    pub fn name(&self, v: VertexId) -> Option<&str> {
        self.names[v as usize].as_deref()
    }

    pub fn priorities(&self) -> &[Priority] {
        &self.priorities
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    /// Largest priority in the game, 0 for the empty game.
    pub fn max_priority(&self) -> Priority {
        self.priorities.iter().copied().max().unwrap_or(0)
    }

    /// Amount added to every priority on ingest (2 when the source used
    /// priority 0, otherwise 0).
    pub fn priority_shift(&self) -> Priority {
        self.priority_shift
    }

    /// Lists every broken structural invariant; empty iff the game is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.vertex_count();
        let mut violations = Vec::new();
        if n == 0 {
            violations.push(Violation::NoVertices);
        }
        for v in self.vertices() {
            let succ = self.successors(v);
            if succ.is_empty() {
                violations.push(Violation::SinkVertex { vertex: v });
            }
            for &u in succ {
                if u as usize >= n {
                    violations.push(Violation::DanglingEdge { from: v, to: u });
                }
            }
            let p = self.priority(v);
            if p == 0 {
                violations.push(Violation::PriorityOutOfRange {
                    vertex: v,
                    priority: p,
                });
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// True iff every edge joins vertices of different owners.
    pub fn is_alternating(&self) -> bool {
        self.edges().all(|(v, u)| self.owner(v) != self.owner(u))
    }
}

/// A strictly alternating image of an ownership game.
#[derive(Clone, Debug)]
pub struct Alternation {
    pub game: ParityGame,
    /// Vertices `0..original_count` of the image are the original vertices
    /// with unchanged ids; the rest are relay vertices.
    pub original_count: usize,
    /// For each relay vertex (in id order), the original edge it splits.
    pub relays: Vec<(VertexId, VertexId)>,
    /// Amount added to every original priority in the image.
    pub priority_offset: Priority,
}

impl Alternation {
    pub fn original_of(&self, v: VertexId) -> Option<VertexId> {
        ((v as usize) < self.original_count).then_some(v)
    }
}

const RELAY_PRIORITY: Priority = 1;
const RELAY_SHIFT: Priority = 2;

/// Maps an ownership game to one where owners strictly alternate along
/// every edge, preserving the winner of every original vertex.
///
/// Each same-owner edge `(v, u)` is split by a relay owned by the other
/// player whose only successor is `u`. Relays carry priority 1 after all
/// original priorities have been shifted by +2, so they never decide a
/// limsup. A game that already alternates is returned unchanged.
pub fn to_alternating(game: &ParityGame) -> Alternation {
    let n = game.vertex_count();
    if game.is_alternating() {
        return Alternation {
            game: game.clone(),
            original_count: n,
            relays: Vec::new(),
            priority_offset: 0,
        };
    }

    let mut priorities: Vec<Priority> = game.priorities.iter().map(|p| p + RELAY_SHIFT).collect();
    let mut owners = game.owners.clone();
    let mut successors: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut names = game.names.clone();
    let mut relays = Vec::new();

    for (v, u) in game.edges() {
        if game.owner(v) == game.owner(u) {
            let relay = priorities.len() as VertexId;
            priorities.push(RELAY_PRIORITY);
            owners.push(game.owner(v).opponent());
            successors.push(vec![u]);
            names.push(None);
            successors[v as usize].push(relay);
            relays.push((v, u));
        } else {
            successors[v as usize].push(u);
        }
    }

    let image = ParityGame::from_parts(priorities, owners, successors).with_names(names);
    Alternation {
        game: image,
        original_count: n,
        relays,
        priority_offset: RELAY_SHIFT,
    }
}
