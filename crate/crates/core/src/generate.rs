//! Seeded random parity games.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{ParityGame, Player, Priority, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub n: usize,
    pub max_priority: Priority,
    pub out_degree_min: usize,
    pub out_degree_max: usize,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("vertex count must be positive")]
    NoVertices,
    #[error("maximal priority must be positive")]
    NoPriorities,
    #[error("out-degree range {min}..={max} is not within 1..={n}")]
    BadDegreeRange { min: usize, max: usize, n: usize },
}

impl GeneratorParams {
    pub fn new(
        n: usize,
        max_priority: Priority,
        out_degree_min: usize,
        out_degree_max: usize,
        seed: u64,
    ) -> Self {
        GeneratorParams {
            n,
            max_priority,
            out_degree_min,
            out_degree_max,
            seed,
        }
    }

    pub fn check(&self) -> Result<(), GeneratorError> {
        if self.n == 0 {
            return Err(GeneratorError::NoVertices);
        }
        if self.max_priority == 0 {
            return Err(GeneratorError::NoPriorities);
        }
        if self.out_degree_min == 0
            || self.out_degree_min > self.out_degree_max
            || self.out_degree_max > self.n
        {
            return Err(GeneratorError::BadDegreeRange {
                min: self.out_degree_min,
                max: self.out_degree_max,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// Generates a game fully determined by `params`.
///
/// Per vertex, in id order: an out-degree uniform in the degree range, that
/// many distinct successors, a priority uniform in `1..=max_priority` and a
/// uniformly chosen owner.
pub fn generate_random(params: &GeneratorParams) -> Result<ParityGame, GeneratorError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let mut priorities = Vec::with_capacity(n);
    let mut owners = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    for _ in 0..n {
        let degree = rng.random_range(params.out_degree_min..=params.out_degree_max);
        let succ: Vec<VertexId> = index::sample(&mut rng, n, degree)
            .into_iter()
            .map(|u| u as VertexId)
            .collect();
        successors.push(succ);
        priorities.push(rng.random_range(1..=params.max_priority));
        owners.push(if rng.random_bool(0.5) {
            Player::Anke
        } else {
            Player::Boris
        });
    }
    Ok(ParityGame::from_parts(priorities, owners, successors))
}

/// SplitMix64 step, used to derive independent per-item seeds from a batch
/// seed.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgsolver::serialize_pgsolver;

    #[test]
    fn single_vertex_game_is_forced() {
        let g = generate_random(&GeneratorParams::new(1, 1, 1, 1, 0)).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.successors(0), &[0]);
        assert_eq!(g.priority(0), 1);
    }

    #[test]
    fn same_seed_same_game() {
        let p = GeneratorParams::new(12, 5, 1, 4, 99);
        let a = serialize_pgsolver(&generate_random(&p).unwrap());
        let b = serialize_pgsolver(&generate_random(&p).unwrap());
        assert_eq!(a, b);
        let other =
            serialize_pgsolver(&generate_random(&GeneratorParams { seed: 100, ..p }).unwrap());
        assert_ne!(a, other);
    }

    #[test]
    fn generated_game_is_valid() {
        let p = GeneratorParams::new(8, 6, 1, 3, 42);
        let g = generate_random(&p).unwrap();
        assert!(g.validate().is_empty());
        for v in g.vertices() {
            let d = g.successors(v).len();
            assert!((1..=3).contains(&d));
            assert!((1..=6).contains(&g.priority(v)));
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(
            generate_random(&GeneratorParams::new(0, 1, 1, 1, 0)),
            Err(GeneratorError::NoVertices)
        );
        assert_eq!(
            generate_random(&GeneratorParams::new(2, 0, 1, 1, 0)),
            Err(GeneratorError::NoPriorities)
        );
        assert!(matches!(
            generate_random(&GeneratorParams::new(2, 2, 2, 3, 0)),
            Err(GeneratorError::BadDegreeRange { .. })
        ));
        assert!(matches!(
            generate_random(&GeneratorParams::new(2, 2, 0, 1, 0)),
            Err(GeneratorError::BadDegreeRange { .. })
        ));
    }
}
