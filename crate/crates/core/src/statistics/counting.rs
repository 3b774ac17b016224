//! Exact sizes of statistic spaces.
//!
//! `S(i, M)` is the set of increasing partial maps `0..=i -> 1..=M`. Its
//! size splits by domain size `d` into `C(i+1, d)` domains times
//! `C(d+M-1, d)` increasing functions per domain.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

use super::{Statistic, ABSENT};
use crate::game::Priority;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("enumeration exceeded the cap of {cap} statistics")]
    CapExceeded { cap: u64 },
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Number of increasing functions `{1..x} -> {1..y}`, i.e. `C(x+y-1, x)`.
pub fn count_increasing(x: u64, y: u64) -> BigUint {
    if y == 0 {
        return if x == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    binomial(big(x + y - 1), big(x))
}

/// Number of increasing partial functions `{0..x} -> {1..y}`.
pub fn count_partial_increasing(x: u64, y: u64) -> BigUint {
    (0..=x + 1)
        .map(|d| binomial(big(x + 1), big(d)) * count_increasing(d, y))
        .sum()
}

/// The `(M+1)^k` bound on `|S(k-1, M)|` obtained by letting every slot be
/// absent or any of `M` values.
pub fn naive_space_bound(k: u64, max_priority: u64) -> BigUint {
    Pow::pow(big(max_priority + 1), k)
}

/// Streams every increasing partial map `0..=i -> 1..=M` in lexicographic
/// slot order (absent before any value).
pub struct SpaceIter {
    slots: Vec<Priority>,
    max_priority: Priority,
    started: bool,
    done: bool,
}

impl SpaceIter {
    pub fn new(i: usize, max_priority: Priority) -> SpaceIter {
        SpaceIter {
            slots: vec![ABSENT; i + 1],
            max_priority,
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        for p in (0..self.slots.len()).rev() {
            let floor = self.slots[..p]
                .iter()
                .copied()
                .filter(|&s| s != ABSENT)
                .max()
                .unwrap_or(1);
            let candidate = if self.slots[p] == ABSENT {
                floor
            } else {
                self.slots[p] + 1
            };
            if candidate <= self.max_priority {
                self.slots[p] = candidate;
                self.slots[p + 1..].fill(ABSENT);
                return true;
            }
        }
        false
    }
}

impl Iterator for SpaceIter {
    type Item = Statistic;

    fn next(&mut self) -> Option<Statistic> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Statistic {
            slots: self.slots.clone().into_boxed_slice(),
        })
    }
}

/// Counts `S(i, M)` by exhaustive enumeration, stopping with an error once
/// more than `cap` statistics have been produced.
pub fn enumerate_space(
    i: usize,
    max_priority: Priority,
    cap: Option<u64>,
) -> Result<u64, CountError> {
    let mut count = 0u64;
    for _ in SpaceIter::new(i, max_priority) {
        count += 1;
        if let Some(cap) = cap {
            if count > cap {
                return Err(CountError::CapExceeded { cap });
            }
        }
    }
    Ok(count)
}

/// Encodes an increasing `f: {1..x} -> {1..y}` (given as its values) as the
/// `x`-subset `{f(1), f(2)+1, ..., f(x)+x-1}` of `{1..x+y-1}`.
pub fn subset_of_increasing(values: &[u64]) -> Vec<u64> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| v + i as u64)
        .collect()
}

/// Inverse of [`subset_of_increasing`]: the ascending subset `j_1 < ... < j_x`
/// maps to `z -> j_z - z + 1`.
pub fn increasing_from_subset(subset: &[u64]) -> Vec<u64> {
    subset
        .iter()
        .enumerate()
        .map(|(i, &j)| j - i as u64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentConstants {
    /// `log2(e)`.
    pub log2_e: f64,
    /// `1 + log2(e)`.
    pub one_plus_log2_e: f64,
    /// `log2((sqrt 2 + 1) / (sqrt 2 - 1))`.
    pub balanced: f64,
}

impl ExponentConstants {
    pub fn compute() -> ExponentConstants {
        let s = std::f64::consts::SQRT_2;
        ExponentConstants {
            log2_e: std::f64::consts::LOG2_E,
            one_plus_log2_e: 1.0 + std::f64::consts::LOG2_E,
            balanced: ((s + 1.0) / (s - 1.0)).log2(),
        }
    }
}

/// Exact per-domain-size terms `g(i) = C(k,i) * C(i+M-1,i)` of `|S(k-1, M)|`
/// together with the quantities derived from them.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub k: u64,
    pub max_priority: u64,
    pub g: Vec<BigUint>,
    /// Smallest `i >= 1` with `g(i) <= g(i-1)`, by exact comparison.
    pub i_star: Option<usize>,
    /// Smallest `i >= 1` with `(k-i)(i-1+M) <= i^2`, i.e. where the
    /// ratio `(k-i)(i-1+M)/i^2` first drops to 1 or below.
    pub i_star_short_ratio: Option<usize>,
    /// `(k - (M-1) + sqrt((M-k-1)^2 + 8k(M-1))) / 4`.
    pub i_star_closed_form: f64,
    /// `g(i) i^2 = g(i-1) (k-i) (i-1+M)` for every `0 < i < k`.
    pub short_ratio_identity: bool,
    /// First `i` where that identity fails.
    pub short_ratio_first_failure: Option<usize>,
    /// `g(i) i^2 = g(i-1) (k-i+1) (i-1+M)` for every `0 < i < k`.
    pub exact_ratio_identity: bool,
    /// `g(k) k^2 = g(k-1) (k-1+M)`.
    pub top_ratio_identity: bool,
    /// `sum of g(i)`, which is `|S(k-1, M)|`.
    pub space_size: BigUint,
    pub constants: ExponentConstants,
}

pub fn bound_report(k: u64, max_priority: u64) -> BoundReport {
    assert!(k >= 1 && max_priority >= 1);
    let m = max_priority;
    let g: Vec<BigUint> = (0..=k)
        .map(|i| binomial(big(k), big(i)) * binomial(big(i + m - 1), big(i)))
        .collect();

    let i_star = (1..=k as usize).find(|&i| g[i] <= g[i - 1]);
    let i_star_short_ratio = (1..=k)
        .find(|&i| (k - i) * (i - 1 + m) <= i * i)
        .map(|i| i as usize);

    let (kf, mf) = (k as f64, m as f64);
    let i_star_closed_form =
        (kf - (mf - 1.0) + ((mf - kf - 1.0).powi(2) + 8.0 * kf * (mf - 1.0)).sqrt()) / 4.0;

    let short_ratio_first_failure = (1..k)
        .find(|&i| {
            let i_u = i as usize;
            &g[i_u] * big(i * i) != &g[i_u - 1] * big((k - i) * (i - 1 + m))
        })
        .map(|i| i as usize);
    let exact_ratio_identity = (1..k).all(|i| {
        let i_u = i as usize;
        &g[i_u] * big(i * i) == &g[i_u - 1] * big((k - i + 1) * (i - 1 + m))
    });
    let ku = k as usize;
    let top_ratio_identity = &g[ku] * big(k * k) == &g[ku - 1] * big(k - 1 + m);

    let space_size = g.iter().sum();
    BoundReport {
        k,
        max_priority,
        g,
        i_star,
        i_star_short_ratio,
        i_star_closed_form,
        short_ratio_identity: short_ratio_first_failure.is_none(),
        short_ratio_first_failure,
        exact_ratio_identity,
        top_ratio_identity,
        space_size,
        constants: ExponentConstants::compute(),
    }
}

impl BoundReport {
    /// `g(i)` as `f64` where representable.
    pub fn g_f64(&self, i: usize) -> Option<f64> {
        self.g.get(i).and_then(ToPrimitive::to_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn increasing_counts() {
        assert_eq!(count_increasing(2, 2), n(3));
        for y in 1..6 {
            assert_eq!(count_increasing(0, y), n(1));
        }
        for x in 0..6 {
            assert_eq!(count_increasing(x, 1), n(1));
        }
    }

    #[test]
    fn partial_counts() {
        assert_eq!(count_partial_increasing(1, 2), n(8));
        assert_eq!(count_partial_increasing(0, 1), n(2));
        for m in 1..10 {
            assert_eq!(count_partial_increasing(0, m), n(m + 1));
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let all: Vec<String> = SpaceIter::new(1, 2).map(|s| s.to_string()).collect();
        assert_eq!(
            all,
            vec!["[-,-]", "[-,1]", "[-,2]", "[1,-]", "[1,1]", "[1,2]", "[2,-]", "[2,2]"]
        );
        for m in 1..6 {
            assert_eq!(enumerate_space(0, m, None), Ok(m as u64 + 1));
        }
        assert_eq!(
            enumerate_space(3, 3, Some(10)),
            Err(CountError::CapExceeded { cap: 10 })
        );
    }

    #[test]
    fn enumeration_yields_increasing_distinct_statistics() {
        let all: Vec<Statistic> = SpaceIter::new(3, 4).collect();
        assert!(all.iter().all(Statistic::is_increasing));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn subset_encoding_example() {
        assert_eq!(subset_of_increasing(&[1, 1, 2]), vec![1, 2, 4]);
        assert_eq!(increasing_from_subset(&[1, 2, 4]), vec![1, 1, 2]);
    }

    #[test]
    fn naive_bound_example() {
        assert_eq!(naive_space_bound(2, 2), n(9));
    }

    #[test]
    fn bound_report_small() {
        let r = bound_report(2, 2);
        assert_eq!(r.g, vec![n(1), n(4), n(3)]);
        assert_eq!(r.space_size, count_partial_increasing(1, 2));
        assert_eq!(r.i_star, Some(2));
        assert!(r.top_ratio_identity);
        assert!(r.exact_ratio_identity);
        // g(1) * 1 = 4 but g(0) * (2-1) * (1-1+2) = 2
        assert_eq!(r.short_ratio_first_failure, Some(1));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn balanced_constant() {
        let c = ExponentConstants::compute();
        assert!((c.balanced - 2.5431).abs() < 5e-5);
        assert!((c.log2_e - 1.4427).abs() < 5e-5);
        assert!((c.one_plus_log2_e - 2.4427).abs() < 5e-5);
    }
}
