use std::fmt::Write as _;

use thiserror::Error;

use super::{Statistic, UpdateKind};
use crate::game::Priority;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub priority: Priority,
    pub kind: UpdateKind,
    pub index: Option<usize>,
}

/// The statistics `f_0 = ∅, f_1, ..., f_N` induced by a priority sequence
/// `c_0, ..., c_{N-1}`, where `c_t` updates `f_t` into `f_{t+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatisticTrace {
    k: usize,
    steps: Vec<TraceStep>,
    statistics: Vec<Statistic>,
}

pub fn run_trace(priorities: &[Priority], k: usize) -> StatisticTrace {
    let mut statistics = Vec::with_capacity(priorities.len() + 1);
    let mut steps = Vec::with_capacity(priorities.len());
    statistics.push(Statistic::empty(k));
    for &c in priorities {
        let u = statistics.last().expect("non-empty").update(c);
        steps.push(TraceStep {
            priority: c,
            kind: u.kind,
            index: u.index,
        });
        statistics.push(u.statistic);
    }
    StatisticTrace {
        k,
        steps,
        statistics,
    }
}

impl StatisticTrace {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of updates `N`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn priorities(&self) -> Vec<Priority> {
        self.steps.iter().map(|s| s.priority).collect()
    }

    /// `f_t` for `t` in `0..=N`.
    pub fn statistic(&self, t: usize) -> &Statistic {
        &self.statistics[t]
    }

    pub fn statistics(&self) -> &[Statistic] {
        &self.statistics
    }

    pub fn last(&self) -> &Statistic {
        self.statistics.last().expect("trace holds f_0")
    }

    /// `bin(f_t)` for `t` in `0..=N`.
    pub fn bins(&self) -> Vec<u128> {
        self.statistics.iter().map(Statistic::bin).collect()
    }

    /// One line per step:
    /// `t: c=<priority> kind=<I|II|noop> idx=<l|-> f=<slots of f_{t+1}> bin=<bin(f_{t+1})>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (t, step) in self.steps.iter().enumerate() {
            let f = &self.statistics[t + 1];
            let idx = step
                .index
                .map_or_else(|| "-".to_string(), |i| i.to_string());
            let _ = writeln!(
                out,
                "{t}: c={} kind={} idx={idx} f={f} bin={}",
                step.priority,
                step.kind.label(),
                f.bin()
            );
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("dates are not strictly increasing at position {position}")]
    NotIncreasing { position: usize },
    #[error("date {date} exceeds the sequence length {len}")]
    OutOfRange { date: usize, len: usize },
    #[error("no type I date with counter value {value} before date {before}")]
    MissingDate { value: u128, before: usize },
}

/// Dates `t_1 < ... < t_x` splitting `c_{t_1}, ..., c_{N-1}` into `x`
/// blocks with even maxima. The last block runs from `t_x` to the end of
/// the sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenFactorization {
    dates: Vec<usize>,
    end: usize,
}

impl EvenFactorization {
    pub fn dates(&self) -> &[usize] {
        &self.dates
    }

    /// Exclusive end of the last block (the trace length `N`).
    pub fn end(&self) -> usize {
        self.end
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// The dates followed by the end boundary, in the form accepted by
    /// [`check_even_factorization`].
    pub fn boundaries(&self) -> Vec<usize> {
        let mut b = self.dates.clone();
        b.push(self.end);
        b
    }
}

/// Constructs an even factorization with `bin(f_N)` blocks, scanning
/// backward: `t_j` is the last type I date before `t_{j+1}` whose result
/// has counter value `j`, starting from `t_{x+1} = N`.
pub fn extract_even_factorization(
    trace: &StatisticTrace,
) -> Result<EvenFactorization, FactorizationError> {
    let n = trace.len();
    let x = trace.last().bin();
    let mut dates = Vec::new();
    let mut next = n;
    let mut value = x;
    while value >= 1 {
        let found = (0..next).rev().find(|&t| {
            trace.steps[t].kind == UpdateKind::TypeI && trace.statistics[t + 1].bin() == value
        });
        match found {
            Some(t) => {
                dates.push(t);
                next = t;
            }
            None => {
                return Err(FactorizationError::MissingDate {
                    value,
                    before: next,
                })
            }
        }
        value -= 1;
    }
    dates.reverse();
    Ok(EvenFactorization { dates, end: n })
}

/// True iff, for consecutive dates `t_i < t_{i+1}`, the maximum of
/// `c_{t_i}, ..., c_{t_{i+1} - 1}` is even. Dates may range over `0..=len`.
pub fn check_even_factorization(
    priorities: &[Priority],
    dates: &[usize],
) -> Result<bool, FactorizationError> {
    for (position, &d) in dates.iter().enumerate() {
        if d > priorities.len() {
            return Err(FactorizationError::OutOfRange {
                date: d,
                len: priorities.len(),
            });
        }
        if position > 0 && dates[position - 1] >= d {
            return Err(FactorizationError::NotIncreasing { position });
        }
    }
    Ok(dates.windows(2).all(|w| {
        let block_max = priorities[w[0]..w[1]]
            .iter()
            .copied()
            .max()
            .expect("non-empty block");
        block_max % 2 == 0
    }))
}
