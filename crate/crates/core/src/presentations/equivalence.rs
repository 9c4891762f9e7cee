//! Equivalence structures described by their character.

use std::collections::BTreeMap;

use serde::Serialize;

use super::counts::{dovetail, Interleaved};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::structure::FiniteStructure;

/// How many classes there are of each size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct EqCharacter {
    /// class size → number of classes of that size; both at least one.
    pub entries: BTreeMap<ExtCount, ExtCount>,
    /// Infinitely many distinct finite sizes occur beyond `entries`.
    pub unbounded_tail: bool,
}

impl EqCharacter {
    pub fn new(entries: impl IntoIterator<Item = (ExtCount, ExtCount)>) -> Self {
        EqCharacter {
            entries: entries.into_iter().collect(),
            unbounded_tail: false,
        }
    }

    pub fn with_tail(mut self) -> Self {
        self.unbounded_tail = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (size, count) in &self.entries {
            if size.is_zero() {
                return Err(Error::input(format!("character[{size}]"), "class size must be at least 1"));
            }
            if count.is_zero() {
                return Err(Error::input(format!("character[{size}]"), "count must be at least 1"));
            }
        }
        Ok(())
    }

    /// The character of a finite equivalence structure.
    pub fn of_structure(s: &FiniteStructure) -> Self {
        let mut entries = BTreeMap::new();
        for c in s.classes(0) {
            let e = entries.entry(Fin(c.len() as u64)).or_insert(Fin(0));
            *e = *e + Fin(1);
        }
        EqCharacter {
            entries,
            unbounded_tail: false,
        }
    }

    /// Total number of elements.
    pub fn cardinality(&self) -> ExtCount {
        if self.unbounded_tail {
            return Omega;
        }
        self.entries.iter().map(|(&s, &c)| s * c).sum()
    }

    /// Class sizes in fill order: largest declared size first; the tail
    /// contributes one class of each size `1, 2, 3, …`.
    pub(crate) fn class_sequence(&self) -> impl Fn(usize) -> Option<ExtCount> + '_ {
        let mut items: Vec<(Option<ExtCount>, ExtCount)> =
            self.entries.iter().rev().map(|(&s, &c)| (Some(s), c)).collect();
        if self.unbounded_tail {
            items.push((None, Omega));
        }
        let seq = Interleaved::new(items);
        move |j| seq.get(j).map(|(size, round)| size.unwrap_or(Fin(round as u64 + 1)))
    }
}

/// The first `n` elements; classes filled along diagonals.
pub fn materialize_equivalence(c: &EqCharacter, n: usize) -> Result<FiniteStructure> {
    let size = c.class_sequence();
    let pts = dovetail(n, &size);
    if pts.len() < n {
        return Err(Error::Precondition(format!("the structure has only {} elements", pts.len())));
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &(cl, _)) in pts.iter().enumerate() {
        classes.entry(cl).or_default().push(x);
    }
    let labels = pts.iter().map(|(cl, p)| format!("c{cl}:{p}")).collect();
    Ok(FiniteStructure::equivalence(n, &classes.into_values().collect::<Vec<_>>())?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fills_pairs() {
        let s = materialize_equivalence(&EqCharacter::new([(Fin(2), Omega)]), 4).unwrap();
        assert_eq!(s.classes(0), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn character_of_finite() {
        let s = FiniteStructure::equivalence(5, &[vec![0, 1], vec![2, 3], vec![4]]).unwrap();
        assert_eq!(EqCharacter::of_structure(&s), EqCharacter::new([(Fin(1), Fin(1)), (Fin(2), Fin(2))]));
    }
}
