//! Seeded batch comparison of the statistics solver against the oracles.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{enumerate_solve, strategy_pair_count};
use super::{verify_positional_strategy, zielonka_solve};
use crate::game::{ParityGame, Player, VertexId};
use crate::generate::{generate_random, mix_seed, GeneratorParams};
use crate::pgsolver::serialize_pgsolver;
use crate::solver::{extract_strategy, simulate, solve, SeededRandom, SolveOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckParams {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub m_min: u32,
    pub m_max: u32,
    pub deg_min: usize,
    pub deg_max: usize,
    pub seed: u64,
    /// Random Anke controllers tried against Boris's extracted strategy
    /// from each Boris-winning vertex.
    pub anke_behaviors: usize,
    /// Exhaustive enumeration runs only when the strategy-pair count is at
    /// most this.
    pub enumeration_cap: u64,
    pub budget: Option<usize>,
}

impl CrossCheckParams {
    /// Game `index` of the batch and its seed. The seed fixes `n`, `M` and
    /// the generator stream.
    pub fn game(&self, index: usize) -> (u64, ParityGame) {
        let seed = mix_seed(self.seed, index as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(self.n_min..=self.n_max);
        let m = rng.random_range(self.m_min..=self.m_max);
        let deg_max = self.deg_max.min(n);
        let deg_min = self.deg_min.min(deg_max);
        let game = generate_random(&GeneratorParams::new(n, m, deg_min, deg_max, seed))
            .expect("batch parameters are valid");
        (seed, game)
    }
}

impl Default for CrossCheckParams {
    fn default() -> Self {
        CrossCheckParams {
            count: 100,
            n_min: 1,
            n_max: 8,
            m_min: 1,
            m_max: 6,
            deg_min: 1,
            deg_max: 3,
            seed: 0,
            anke_behaviors: 10,
            enumeration_cap: super::DEFAULT_ENUMERATION_CAP,
            budget: Some(crate::solver::DEFAULT_BUDGET),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameRecord {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub max_priority: u32,
    pub edges: usize,
    pub k: usize,
    /// Winners as a string of `E` (even) / `O` (odd), one per vertex.
    pub qp: String,
    pub zielonka: String,
    pub enumerate: Option<String>,
    pub agree: bool,
    pub zielonka_sound: bool,
    pub product_nodes: usize,
    pub product_edges: usize,
    pub bound_nodes: String,
    pub bound_edges: String,
    pub bounds_ok: bool,
    pub boris_runs: usize,
    pub boris_failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub seed: u64,
    pub game: String,
    pub minimized: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub params: CrossCheckParams,
    pub games_attempted: usize,
    pub agreements: usize,
    pub enumerated: usize,
    pub bound_violations: usize,
    pub zielonka_unsound: usize,
    pub boris_runs: usize,
    pub boris_failures: usize,
    /// True iff every engaged solver returned identical winners on every
    /// game.
    pub all_agree: bool,
    pub first_counterexample: Option<Counterexample>,
    pub games: Vec<GameRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_millis: Option<f64>,
}

impl CrossCheckReport {
    /// Agreement, bound compliance, strategy soundness and the Boris
    /// simulations all passed.
    pub fn passed(&self) -> bool {
        self.all_agree
            && self.bound_violations == 0
            && self.zielonka_unsound == 0
            && self.boris_failures == 0
    }

    pub fn to_json(&self, include_timings: bool) -> String {
        if include_timings {
            return serde_json::to_string_pretty(self).expect("report serializes");
        }
        let mut stripped = self.clone();
        stripped.total_millis = None;
        for g in &mut stripped.games {
            g.millis = None;
        }
        serde_json::to_string_pretty(&stripped).expect("report serializes")
    }
}

fn winners_string(w: &[Player]) -> String {
    w.iter()
        .map(|p| if *p == Player::Anke { 'E' } else { 'O' })
        .collect()
}

struct Outcome {
    qp: Option<Vec<Player>>,
    zielonka: Vec<Player>,
    enumerate: Option<Vec<Player>>,
}

impl Outcome {
    fn agree(&self) -> bool {
        self.qp.as_ref() == Some(&self.zielonka)
            && self.enumerate.as_ref().is_none_or(|e| *e == self.zielonka)
    }
}

fn run_solvers(game: &ParityGame, params: &CrossCheckParams) -> Outcome {
    let qp = solve(
        game,
        &SolveOptions {
            k: None,
            budget: params.budget,
        },
    )
    .ok()
    .map(|r| r.winners);
    let zielonka = zielonka_solve(game).winners;
    let enumerate = enumerate_solve(game, params.enumeration_cap).ok();
    Outcome {
        qp,
        zielonka,
        enumerate,
    }
}

fn check_game(params: &CrossCheckParams, index: usize) -> (GameRecord, Option<ParityGame>) {
    let start = Instant::now();
    let (seed, game) = params.game(index);

    let qp = solve(
        &game,
        &SolveOptions {
            k: None,
            budget: params.budget,
        },
    );
    let z = zielonka_solve(&game);
    let enumerate = (strategy_pair_count(&game) <= u128::from(params.enumeration_cap))
        .then(|| enumerate_solve(&game, params.enumeration_cap).expect("within cap"));

    let zielonka_sound = [Player::Anke, Player::Boris].iter().all(|&p| {
        let sound =
            verify_positional_strategy(&game, &z.strategies[p.index()]).expect("total strategy");
        game.vertices()
            .all(|v| z.winners[v as usize] != p || sound[v as usize])
    });

    let mut record = GameRecord {
        index,
        seed,
        n: game.vertex_count(),
        max_priority: game.max_priority(),
        edges: game.edge_count(),
        k: 0,
        qp: String::new(),
        zielonka: winners_string(&z.winners),
        enumerate: enumerate.as_deref().map(winners_string),
        agree: false,
        zielonka_sound,
        product_nodes: 0,
        product_edges: 0,
        bound_nodes: String::new(),
        bound_edges: String::new(),
        bounds_ok: false,
        boris_runs: 0,
        boris_failures: 0,
        error: None,
        millis: None,
    };

    match qp {
        Ok(result) => {
            record.k = result.k;
            record.qp = winners_string(&result.winners);
            record.agree =
                result.winners == z.winners && enumerate.as_ref().is_none_or(|e| *e == z.winners);
            record.product_nodes = result.stats.product_nodes;
            record.product_edges = result.stats.product_edges;
            record.bound_nodes = result.stats.bound_nodes.to_string();
            record.bound_edges = result.stats.bound_edges.to_string();
            record.bounds_ok = result.stats.within_bounds();

            let boris = extract_strategy(&result, Player::Boris);
            let cap = result.product.state_count() + 1;
            for v in game
                .vertices()
                .filter(|&v| result.winner(v) == Player::Boris)
            {
                for r in 0..params.anke_behaviors {
                    let anke = SeededRandom {
                        seed: mix_seed(seed, (u64::from(v) << 32) | r as u64),
                    };
                    record.boris_runs += 1;
                    let ok = match simulate(&game, v, &anke, &boris, result.k, cap) {
                        Ok(lasso) => lasso.winner() == Player::Boris && lasso.target_hits == 0,
                        Err(_) => false,
                    };
                    if !ok {
                        record.boris_failures += 1;
                    }
                }
            }
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record.millis = Some(start.elapsed().as_secs_f64() * 1000.0);
    let failing = (!record.agree).then_some(game);
    (record, failing)
}

/// Greedily deletes edges and then vertices while `still_fails` holds and
/// the game stays valid.
pub fn minimize_counterexample(
    game: &ParityGame,
    still_fails: impl Fn(&ParityGame) -> bool,
) -> ParityGame {
    let mut current = game.clone();
    'edges: loop {
        for (v, u) in current.edges().collect::<Vec<_>>() {
            if current.successors(v).len() < 2 {
                continue;
            }
            let edges = current.edges().filter(|&e| e != (v, u));
            let candidate = ParityGame::from_edges(
                current.priorities().to_vec(),
                current.owners().to_vec(),
                edges,
            );
            if still_fails(&candidate) {
                current = candidate;
                continue 'edges;
            }
        }
        break;
    }
    'vertices: loop {
        for drop in current.vertices().collect::<Vec<_>>() {
            if current.vertex_count() < 2 {
                break 'vertices;
            }
            let keep: Vec<VertexId> = current.vertices().filter(|&v| v != drop).collect();
            let remap = |v: VertexId| if v > drop { v - 1 } else { v };
            let successors: Vec<Vec<VertexId>> = keep
                .iter()
                .map(|&v| {
                    current
                        .successors(v)
                        .iter()
                        .filter(|&&u| u != drop)
                        .map(|&u| remap(u))
                        .collect()
                })
                .collect();
            if successors.iter().any(Vec::is_empty) {
                continue;
            }
            let candidate = ParityGame::from_parts(
                keep.iter().map(|&v| current.priority(v)).collect(),
                keep.iter().map(|&v| current.owner(v)).collect(),
                successors,
            );
            if still_fails(&candidate) {
                current = candidate;
                continue 'vertices;
            }
        }
        break;
    }
    current
}

/// Generates `params.count` games from `params.seed`, solves each with the
/// statistics solver, Zielonka and (within the cap) exhaustive
/// enumeration, checks Zielonka's strategies, the product size bounds and
/// Boris's extracted strategy in simulation. Games are processed in
/// parallel; records keep index order.
pub fn cross_check(params: &CrossCheckParams) -> CrossCheckReport {
    let start = Instant::now();
    let results: Vec<(GameRecord, Option<ParityGame>)> = (0..params.count)
        .into_par_iter()
        .map(|i| check_game(params, i))
        .collect();

    let mut first_counterexample = None;
    let mut games = Vec::with_capacity(results.len());
    for (record, failing) in results {
        if first_counterexample.is_none() {
            if let Some(game) = failing {
                let minimized = minimize_counterexample(&game, |g| !run_solvers(g, params).agree());
                first_counterexample = Some(Counterexample {
                    index: record.index,
                    seed: record.seed,
                    game: serialize_pgsolver(&game),
                    minimized: serialize_pgsolver(&minimized),
                });
            }
        }
        games.push(record);
    }

    let agreements = games.iter().filter(|g| g.agree).count();
    CrossCheckReport {
        params: params.clone(),
        games_attempted: games.len(),
        agreements,
        enumerated: games.iter().filter(|g| g.enumerate.is_some()).count(),
        bound_violations: games
            .iter()
            .filter(|g| g.error.is_none() && !g.bounds_ok)
            .count(),
        zielonka_unsound: games.iter().filter(|g| !g.zielonka_sound).count(),
        boris_runs: games.iter().map(|g| g.boris_runs).sum(),
        boris_failures: games.iter().map(|g| g.boris_failures).sum(),
        all_agree: agreements == games.len(),
        first_counterexample,
        games,
        total_millis: Some(start.elapsed().as_secs_f64() * 1000.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_batch_agrees_vacuously() {
        let r = cross_check(&CrossCheckParams {
            count: 0,
            ..Default::default()
        });
        assert_eq!(r.games_attempted, 0);
        assert!(r.all_agree && r.passed());
    }

    #[test]
    fn small_batch_passes_and_is_deterministic() {
        let params = CrossCheckParams {
            count: 200,
            seed: 5,
            ..Default::default()
        };
        let a = cross_check(&params);
        assert!(a.passed(), "{}", a.to_json(false));
        assert_eq!(a.enumerated, 200);
        let b = cross_check(&params);
        assert_eq!(a.to_json(false), b.to_json(false));
        assert!(!a.to_json(false).contains("millis"));
    }

    #[test]
    fn minimizer_shrinks_to_the_failing_core() {
        // "fails" whenever some vertex has priority 5
        let g = generate_random(&GeneratorParams::new(8, 6, 1, 3, 3)).unwrap();
        let g = ParityGame::from_parts(
            g.priorities()
                .iter()
                .enumerate()
                .map(|(i, &p)| if i == 4 { 5 } else { p.min(4) })
                .collect(),
            g.owners().to_vec(),
            g.vertices().map(|v| g.successors(v).to_vec()).collect(),
        );
        let small = minimize_counterexample(&g, |h| h.is_valid() && h.priorities().contains(&5));
        assert!(small.is_valid());
        assert!(small.priorities().contains(&5));
        assert!(small.vertex_count() < g.vertex_count());
    }
}
