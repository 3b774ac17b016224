//! Checkers for the structural laws every statistic trace obeys.

use std::fmt;

use super::trace::{check_even_factorization, extract_even_factorization, StatisticTrace};
use super::UpdateKind;

/// The five obligations attached to a type II step at date `N` and index
/// `l`, relative to the last earlier type I step at `l` (date `t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeIIClause {
    /// No earlier type I insertion at `l` exists.
    Witness,
    /// `f_{t+1}` and `f_{N+1}` differ somewhere other than `l`.
    Agreement,
    /// `f_{t+1}(l)` is not even, or not below `f_{N+1}(l)`.
    EvenAndSmaller,
    /// Counter values do not compare as the parity of `c_N` requires.
    Counter,
    /// Some insertion above `l` happened strictly between `t` and `N`.
    HigherInsertion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyViolation {
    NotIncreasing {
        date: usize,
    },
    CounterOverflow {
        date: usize,
    },
    TypeIIncrement {
        date: usize,
        before: u128,
        after: u128,
    },
    NoOpMismatch {
        date: usize,
    },
    FirstReach {
        value: u128,
        date: usize,
    },
    TypeII {
        date: usize,
        clause: TypeIIClause,
    },
    Factorization {
        message: String,
    },
}

impl PropertyViolation {
    /// Names of the laws in [`PropertyViolation::law`] order.
    pub const LAWS: [&'static str; 7] = [
        "increasing",
        "counter-bound",
        "type-i-increment",
        "noop",
        "first-reach",
        "type-ii",
        "factorization",
    ];

    pub fn law(&self) -> &'static str {
        let i = match self {
            PropertyViolation::NotIncreasing { .. } => 0,
            PropertyViolation::CounterOverflow { .. } => 1,
            PropertyViolation::TypeIIncrement { .. } => 2,
            PropertyViolation::NoOpMismatch { .. } => 3,
            PropertyViolation::FirstReach { .. } => 4,
            PropertyViolation::TypeII { .. } => 5,
            PropertyViolation::Factorization { .. } => 6,
        };
        Self::LAWS[i]
    }
}

impl fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyViolation::NotIncreasing { date } => {
                write!(f, "f_{} is not increasing", date + 1)
            }
            PropertyViolation::CounterOverflow { date } => {
                write!(f, "bin(f_{}) exceeds 2^(k+1)", date + 1)
            }
            PropertyViolation::TypeIIncrement {
                date,
                before,
                after,
            } => {
                write!(
                    f,
                    "type I step at date {date} moved the counter {before} -> {after}"
                )
            }
            PropertyViolation::NoOpMismatch { date } => {
                write!(f, "no-op classification wrong at date {date}")
            }
            PropertyViolation::FirstReach { value, date } => {
                write!(f, "counter value {value} first reached at date {date} without a type I step landing on it")
            }
            PropertyViolation::TypeII { date, clause } => {
                write!(f, "type II step at date {date} breaks {clause:?}")
            }
            PropertyViolation::Factorization { message } => {
                write!(f, "even factorization: {message}")
            }
        }
    }
}

/// Checks a trace against every law: increasing results, type I steps
/// increment the counter by one, each counter value is first reached by a
/// type I step landing exactly on it, type II steps have a matching type I
/// witness, no-op steps are exactly the odd priorities with nothing below
/// them, and the extracted even factorization is valid with at least
/// `bin(f_N)` blocks. Returns all violations found.
pub fn check_trace(trace: &StatisticTrace) -> Vec<PropertyViolation> {
    let mut out = Vec::new();
    let k = trace.k();
    let stats = trace.statistics();
    let bins = trace.bins();
    let steps = trace.steps();

    let mut reached = 0u128;
    for (t, step) in steps.iter().enumerate() {
        let (before, after) = (&stats[t], &stats[t + 1]);
        if !after.is_increasing() {
            out.push(PropertyViolation::NotIncreasing { date: t });
        }
        if k + 1 < 128 && bins[t + 1] >= 1u128 << (k + 1) {
            out.push(PropertyViolation::CounterOverflow { date: t });
        }
        if step.kind == UpdateKind::TypeI && bins[t + 1] != bins[t] + 1 {
            out.push(PropertyViolation::TypeIIncrement {
                date: t,
                before: bins[t],
                after: bins[t + 1],
            });
        }
        let c = step.priority;
        let nothing_below = c % 2 == 1 && before.entries().all(|(_, v)| v >= c);
        if (step.kind == UpdateKind::NoOp) != nothing_below
            || (step.kind == UpdateKind::NoOp && before != after)
        {
            out.push(PropertyViolation::NoOpMismatch { date: t });
        }
        if bins[t + 1] > reached {
            if step.kind != UpdateKind::TypeI || bins[t + 1] != reached + 1 {
                out.push(PropertyViolation::FirstReach {
                    value: reached + 1,
                    date: t,
                });
            }
            reached = bins[t + 1];
        }
        if step.kind == UpdateKind::TypeII {
            check_type_ii(trace, t, &mut out);
        }
    }

    match extract_even_factorization(trace) {
        Ok(fac) => {
            if (fac.len() as u128) < bins[trace.len()] {
                out.push(PropertyViolation::Factorization {
                    message: format!(
                        "{} blocks for counter value {}",
                        fac.len(),
                        bins[trace.len()]
                    ),
                });
            }
            match check_even_factorization(&trace.priorities(), &fac.boundaries()) {
                Ok(true) => {}
                Ok(false) => out.push(PropertyViolation::Factorization {
                    message: format!("block with odd maximum in {:?}", fac.boundaries()),
                }),
                Err(e) => out.push(PropertyViolation::Factorization {
                    message: e.to_string(),
                }),
            }
        }
        Err(e) => out.push(PropertyViolation::Factorization {
            message: e.to_string(),
        }),
    }
    out
}

fn check_type_ii(trace: &StatisticTrace, date: usize, out: &mut Vec<PropertyViolation>) {
    let steps = trace.steps();
    let stats = trace.statistics();
    let index = steps[date].index.expect("type II step has an index");
    let mut fail = |clause| out.push(PropertyViolation::TypeII { date, clause });

    let Some(t) = (0..date)
        .rev()
        .find(|&t| steps[t].kind == UpdateKind::TypeI && steps[t].index == Some(index))
    else {
        fail(TypeIIClause::Witness);
        return;
    };
    let (then, now) = (&stats[t + 1], &stats[date + 1]);
    if (0..=trace.k()).any(|i| i != index && then.get(i) != now.get(i)) {
        fail(TypeIIClause::Agreement);
    }
    match (then.get(index), now.get(index)) {
        (Some(a), Some(b)) if a % 2 == 0 && a < b => {}
        _ => fail(TypeIIClause::EvenAndSmaller),
    }
    let counter_ok = if steps[date].priority.is_multiple_of(2) {
        then.bin() == now.bin()
    } else {
        then.bin() > now.bin()
    };
    if !counter_ok {
        fail(TypeIIClause::Counter);
    }
    if steps[t + 1..date]
        .iter()
        .any(|s| s.index.is_some_and(|i| i > index))
    {
        fail(TypeIIClause::HigherInsertion);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::run_trace;
    use proptest::prelude::*;

    #[test]
    fn clean_traces() {
        for seq in [
            &[2, 2, 2][..],
            &[3],
            &[2, 3, 2, 2],
            &[4, 1, 3, 2, 6, 5, 5, 2],
        ] {
            assert!(check_trace(&run_trace(seq, 2)).is_empty(), "{seq:?}");
        }
    }

    #[test]
    fn saturated_counter_does_not_increment() {
        // k = 1: after three even reads both indices hold even values and a
        // further Type I update lands on index 1 again
        let trace = run_trace(&[2, 2, 2, 2], 1);
        assert_eq!(trace.bins(), vec![0, 1, 2, 3, 2]);
        assert_eq!(trace.steps()[3].kind, UpdateKind::TypeI);
        assert_eq!(
            check_trace(&trace),
            vec![PropertyViolation::TypeIIncrement {
                date: 3,
                before: 3,
                after: 2
            }]
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn random_traces_obey_every_law(k in 0usize..8, seq in proptest::collection::vec(1u32..=8, 0..200)) {
            let trace = run_trace(&seq, k);
            let full = (1u128 << (k + 1)) - 1;
            let saturates = trace.bins().contains(&full);
            let v = check_trace(&trace);
            if !saturates {
                prop_assert!(v.is_empty(), "{:?}", v);
            }
            for x in &v {
                prop_assert!(matches!(x, PropertyViolation::TypeIIncrement { before, .. } if *before == full), "{:?}", x);
            }
        }
    }
}
