//! Parity game solving through play statistics.
//!
//! A play is summarised by a [`statistics::Statistic`], a short increasing
//! partial map from indices to priorities that is updated by every visited
//! priority. The parity game is won by the even player exactly when she can
//! force some statistic to fill its top index, which turns solving into a
//! reachability game on `(vertex, statistic)` pairs ([`solver`]).
//!
//! [`verification`] holds independent oracles (Zielonka's algorithm and
//! exhaustive positional enumeration) plus a strategy checker and the batch
//! cross-check harness.

pub mod game;
pub mod generate;
pub mod pgsolver;
pub mod solver;
pub mod statistics;
pub mod verification;

pub use game::{to_alternating, Alternation, ParityGame, Player, Priority, VertexId, Violation};
pub use generate::{generate_random, GeneratorError, GeneratorParams};
pub use pgsolver::{parse_pgsolver, serialize_pgsolver, ParseError};
pub use solver::{default_k, solve, KMode, SolveError, SolveOptions, SolveResult};
