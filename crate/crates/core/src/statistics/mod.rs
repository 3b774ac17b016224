//! Statistics: partial increasing maps from indices `0..=k` to priorities,
//! updated by every priority visited during a play.
//!
//! Reading a priority `c` applies two insertion rules in succession:
//!
//! * rule I (only for even `c`): insert at the highest index `j <= k` such
//!   that the statistic is defined and even on `0..j`;
//! * rule II: if some value below `c` is present, insert at the highest
//!   index holding a value below `c`.
//!
//! Inserting `c` at `l` clears every index `<= l` and sets index `l` to `c`.
//! The counter value `bin(f)` sums `2^j` over indices holding even values.

mod counting;
mod properties;
mod trace;

use std::fmt;

use thiserror::Error;

use crate::game::Priority;

pub use counting::{
    bound_report, count_increasing, count_partial_increasing, enumerate_space,
    increasing_from_subset, naive_space_bound, subset_of_increasing, BoundReport, CountError,
    ExponentConstants, SpaceIter,
};
pub use properties::{check_trace, PropertyViolation, TypeIIClause};
pub use trace::{
    check_even_factorization, extract_even_factorization, run_trace, EvenFactorization,
    FactorizationError, StatisticTrace, TraceStep,
};

/// Largest supported maximal index; keeps counter values inside `u128`.
pub const MAX_INDEX: usize = 126;

const ABSENT: Priority = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatisticError {
    #[error("index {index} outside 0..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("priority must be at least 1")]
    InvalidPriority,
}

/// A partial map `0..=k -> 1..=M`, stored as `k + 1` slots.
///
/// Values produced by [`Statistic::update`] are always increasing on their
/// domain. [`Statistic::insert`] can produce non-increasing intermediates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Statistic {
    slots: Box<[Priority]>,
}

/// How a priority changed a statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UpdateKind {
    TypeI,
    TypeII,
    NoOp,
}

impl UpdateKind {
    pub fn label(self) -> &'static str {
        match self {
            UpdateKind::TypeI => "I",
            UpdateKind::TypeII => "II",
            UpdateKind::NoOp => "noop",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Update {
    pub statistic: Statistic,
    pub kind: UpdateKind,
    pub index: Option<usize>,
}

impl Statistic {
    pub fn empty(k: usize) -> Statistic {
        assert!(k <= MAX_INDEX, "maximal index {k} exceeds {MAX_INDEX}");
        Statistic {
            slots: vec![ABSENT; k + 1].into_boxed_slice(),
        }
    }

    /// Builds a statistic from one optional value per index `0..=k`.
    /// Does not require the result to be increasing.
    pub fn from_slots(slots: &[Option<Priority>]) -> Result<Statistic, StatisticError> {
        assert!(!slots.is_empty() && slots.len() <= MAX_INDEX + 1);
        let slots = slots
            .iter()
            .map(|s| match s {
                Some(0) => Err(StatisticError::InvalidPriority),
                Some(p) => Ok(*p),
                None => Ok(ABSENT),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Statistic {
            slots: slots.into_boxed_slice(),
        })
    }

    /// Builds a statistic with maximal index `k` from `(index, value)` pairs.
    pub fn from_entries(
        k: usize,
        entries: &[(usize, Priority)],
    ) -> Result<Statistic, StatisticError> {
        let mut f = Statistic::empty(k);
        for &(i, c) in entries {
            if i > k {
                return Err(StatisticError::IndexOutOfRange { index: i, k });
            }
            if c == ABSENT {
                return Err(StatisticError::InvalidPriority);
            }
            f.slots[i] = c;
        }
        Ok(f)
    }

    /// The maximal index `k`.
    pub fn max_index(&self) -> usize {
        self.slots.len() - 1
    }

    pub fn get(&self, index: usize) -> Option<Priority> {
        self.slots.get(index).copied().filter(|&c| c != ABSENT)
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.get(index).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(|&c| c == ABSENT)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Priority)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != ABSENT)
            .map(|(i, &c)| (i, c))
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries().map(|(i, _)| i)
    }

    pub fn is_increasing(&self) -> bool {
        let mut last = 0;
        for (_, c) in self.entries() {
            if c < last {
                return false;
            }
            last = c;
        }
        true
    }

    /// Clears every index `<= index` and sets `index` to `c`.
    pub fn insert(&self, index: usize, c: Priority) -> Result<Statistic, StatisticError> {
        if index > self.max_index() {
            return Err(StatisticError::IndexOutOfRange {
                index,
                k: self.max_index(),
            });
        }
        if c == ABSENT {
            return Err(StatisticError::InvalidPriority);
        }
        let mut slots = self.slots.clone();
        slots[..index].fill(ABSENT);
        slots[index] = c;
        Ok(Statistic { slots })
    }

    fn insert_unchecked(&mut self, index: usize, c: Priority) {
        self.slots[..index].fill(ABSENT);
        self.slots[index] = c;
    }

    /// Rule I target: for even `c`, the highest `j <= k` such that the
    /// statistic is defined and even on `0..j`.
    pub fn rule1_index(&self, c: Priority) -> Option<usize> {
        if !c.is_multiple_of(2) {
            return None;
        }
        let even_prefix = self
            .slots
            .iter()
            .take_while(|&&s| s != ABSENT && s % 2 == 0)
            .count();
        Some(even_prefix.min(self.max_index()))
    }

    /// Rule II target: the highest defined index holding a value below `c`.
    pub fn rule2_index(&self, c: Priority) -> Option<usize> {
        self.slots.iter().rposition(|&s| s != ABSENT && s < c)
    }

    /// Applies rule I and then rule II (on the intermediate result).
    pub fn update(&self, c: Priority) -> Update {
        assert!(c != ABSENT, "priorities start at 1");
        let mut next = self.clone();
        let mut kind = UpdateKind::NoOp;
        let mut index = None;
        if let Some(j) = next.rule1_index(c) {
            next.insert_unchecked(j, c);
            kind = UpdateKind::TypeI;
            index = Some(j);
        }
        if let Some(j) = next.rule2_index(c) {
            next.insert_unchecked(j, c);
            kind = UpdateKind::TypeII;
            index = Some(j);
            debug_assert_eq!(
                self.rule2_index(c)
                    .map(|j2| self.insert(j2, c).expect("in range")),
                Some(next.clone()),
                "rule II result depends on whether rule I ran first"
            );
        }
        debug_assert!(
            next.is_increasing(),
            "update produced a non-increasing statistic"
        );
        Update {
            statistic: next,
            kind,
            index,
        }
    }

    /// `sum of 2^j` over indices `j` holding an even value.
    pub fn bin(&self) -> u128 {
        self.entries()
            .filter(|(_, c)| c % 2 == 0)
            .map(|(i, _)| 1u128 << i)
            .sum()
    }

    /// Canonical byte encoding: each slot as a little-endian `u32`, absent
    /// slots as 0.
    pub fn encode(&self) -> Vec<u8> {
        self.slots.iter().flat_map(|s| s.to_le_bytes()).collect()
    }

    pub fn decode(bytes: &[u8]) -> Option<Statistic> {
        if bytes.is_empty() || !bytes.len().is_multiple_of(4) || bytes.len() / 4 > MAX_INDEX + 1 {
            return None;
        }
        let slots = bytes
            .chunks_exact(4)
            .map(|c| Priority::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect::<Vec<_>>();
        Some(Statistic {
            slots: slots.into_boxed_slice(),
        })
    }
}

/// Slot list, e.g. `[-,2,4]`.
impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &s) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if s == ABSENT {
                f.write_str("-")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (i, c)) in self.entries().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}↦{c}")?;
        }
        write!(f, "}}/k={}", self.max_index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stat(k: usize, entries: &[(usize, Priority)]) -> Statistic {
        Statistic::from_entries(k, entries).unwrap()
    }

    /// Independent rule interpreter over `BTreeMap`, written from the rule
    /// text without sharing code with `Statistic`.
    fn naive_update(
        k: usize,
        f: &std::collections::BTreeMap<usize, Priority>,
        c: Priority,
    ) -> (std::collections::BTreeMap<usize, Priority>, UpdateKind) {
        fn ins(
            f: &std::collections::BTreeMap<usize, Priority>,
            l: usize,
            c: Priority,
        ) -> std::collections::BTreeMap<usize, Priority> {
            let mut g: std::collections::BTreeMap<usize, Priority> = f
                .iter()
                .filter(|(&i, _)| i > l)
                .map(|(&i, &v)| (i, v))
                .collect();
            g.insert(l, c);
            g
        }
        let mut g = f.clone();
        let mut kind = UpdateKind::NoOp;
        if c.is_multiple_of(2) {
            let mut best = 0;
            for j in 0..=k {
                if (0..j).all(|i| g.get(&i).is_some_and(|v| v % 2 == 0)) {
                    best = j;
                }
            }
            g = ins(&g, best, c);
            kind = UpdateKind::TypeI;
        }
        if let Some((&j, _)) = g.iter().rfind(|(_, &v)| v < c) {
            g = ins(&g, j, c);
            kind = UpdateKind::TypeII;
        }
        (g, kind)
    }

    #[test]
    fn empty_statistic() {
        let f = Statistic::empty(3);
        assert!(f.is_empty());
        assert_eq!(f.domain().count(), 0);
        assert_eq!(f.bin(), 0);
        assert_eq!(f.max_index(), 3);
    }

    #[test]
    fn insert_examples() {
        assert_eq!(
            stat(2, &[(0, 2), (2, 4)]).insert(1, 2).unwrap(),
            stat(2, &[(1, 2), (2, 4)])
        );
        assert_eq!(
            Statistic::empty(2).insert(0, 2).unwrap(),
            stat(2, &[(0, 2)])
        );
        let non_inc = stat(2, &[(1, 3)]).insert(0, 4).unwrap();
        assert_eq!(non_inc, stat(2, &[(0, 4), (1, 3)]));
        assert!(!non_inc.is_increasing());
    }

    #[test]
    fn insert_errors() {
        assert_eq!(
            Statistic::empty(2).insert(3, 2),
            Err(StatisticError::IndexOutOfRange { index: 3, k: 2 })
        );
        assert_eq!(
            Statistic::empty(2).insert(0, 0),
            Err(StatisticError::InvalidPriority)
        );
        assert!(Statistic::from_entries(1, &[(2, 1)]).is_err());
    }

    #[test]
    fn rule_indices() {
        assert_eq!(Statistic::empty(2).rule1_index(2), Some(0));
        assert_eq!(stat(2, &[(0, 2)]).rule1_index(2), Some(1));
        assert_eq!(stat(2, &[(0, 2)]).rule1_index(3), None);
        // full even prefix saturates at k
        assert_eq!(stat(1, &[(0, 2), (1, 2)]).rule1_index(4), Some(1));
        assert_eq!(stat(2, &[(1, 2)]).rule2_index(3), Some(1));
        assert_eq!(stat(2, &[(1, 2)]).rule2_index(2), None);
        assert_eq!(Statistic::empty(2).rule2_index(5), None);
    }

    #[test]
    fn update_examples() {
        let u = Statistic::empty(2).update(3);
        assert_eq!(
            (u.statistic, u.kind, u.index),
            (Statistic::empty(2), UpdateKind::NoOp, None)
        );

        let u = stat(2, &[(0, 2)]).update(2);
        assert_eq!(
            (u.statistic.clone(), u.kind, u.index),
            (stat(2, &[(1, 2)]), UpdateKind::TypeI, Some(1))
        );
        assert_eq!(u.statistic.bin(), 2);

        let f = stat(2, &[(1, 3)]);
        let u = f.update(4);
        assert_eq!(
            (u.statistic.clone(), u.kind, u.index),
            (stat(2, &[(1, 4)]), UpdateKind::TypeII, Some(1))
        );
        assert_eq!(
            f.insert(f.rule1_index(4).unwrap(), 4).unwrap(),
            stat(2, &[(0, 4), (1, 3)])
        );
        assert_eq!(f.insert(f.rule2_index(4).unwrap(), 4).unwrap(), u.statistic);

        let f = stat(2, &[(1, 2)]);
        let u = f.update(3);
        assert_eq!(
            (u.statistic.clone(), u.kind, u.index),
            (stat(2, &[(1, 3)]), UpdateKind::TypeII, Some(1))
        );
        assert_eq!((f.bin(), u.statistic.bin()), (2, 0));
    }

    #[test]
    fn bin_examples() {
        assert_eq!(Statistic::empty(2).bin(), 0);
        assert_eq!(stat(2, &[(1, 2)]).bin(), 2);
        assert_eq!(stat(2, &[(0, 2), (1, 3)]).bin(), 1);
    }

    #[test]
    fn encoding_round_trips() {
        let f = stat(3, &[(1, 2), (3, 7)]);
        assert_eq!(Statistic::decode(&f.encode()), Some(f.clone()));
        assert_eq!(f.encode().len(), 16);
        assert_eq!(format!("{f}"), "[-,2,-,7]");
        assert_eq!(format!("{f:?}"), "{1↦2, 3↦7}/k=3");
        assert_eq!(Statistic::decode(&[1, 2, 3]), None);
    }

    fn arb_increasing(k: usize, m: Priority) -> impl Strategy<Value = Statistic> {
        proptest::collection::vec((any::<bool>(), 1..=m), k + 1).prop_map(move |raw| {
            let mut vals: Vec<Priority> = raw.iter().map(|(_, v)| *v).collect();
            vals.sort_unstable();
            let slots: Vec<Option<Priority>> = raw
                .iter()
                .zip(vals)
                .map(|((keep, _), v)| keep.then_some(v))
                .collect();
            Statistic::from_slots(&slots).unwrap()
        })
    }

    proptest! {
        #[test]
        fn update_matches_naive_interpreter(k in 0usize..6, seq in proptest::collection::vec(1u32..=8, 0..60)) {
            let mut f = Statistic::empty(k);
            let mut naive = std::collections::BTreeMap::new();
            for c in seq {
                let u = f.update(c);
                let (g, kind) = naive_update(k, &naive, c);
                prop_assert_eq!(u.kind, kind);
                prop_assert_eq!(u.statistic.entries().collect::<Vec<_>>(), g.iter().map(|(&i, &v)| (i, v)).collect::<Vec<_>>());
                f = u.statistic;
                naive = g;
            }
        }

        #[test]
        fn update_preserves_increasing(f in (0usize..7).prop_flat_map(|k| arb_increasing(k, 8)), c in 1u32..=8) {
            let u = f.update(c);
            prop_assert!(u.statistic.is_increasing());
            prop_assert!(u.statistic.bin() < 1u128 << (f.max_index() + 1));
            let noop_expected = c % 2 == 1 && f.entries().all(|(_, v)| v >= c);
            prop_assert_eq!(u.kind == UpdateKind::NoOp, noop_expected);
            if u.kind == UpdateKind::NoOp {
                prop_assert_eq!(&u.statistic, &f);
            }
            if u.kind == UpdateKind::TypeII {
                prop_assert_eq!(f.insert(f.rule2_index(c).unwrap(), c).unwrap(), u.statistic.clone());
            }
            if u.kind == UpdateKind::TypeI && f.bin() != (1u128 << (f.max_index() + 1)) - 1 {
                prop_assert_eq!(u.statistic.bin(), f.bin() + 1);
            }
        }
    }
}
