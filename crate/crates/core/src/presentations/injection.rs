//! Injection structures described by their orbit spectrum.

use std::collections::BTreeMap;

use serde::Serialize;

use super::counts::{dovetail, Interleaved};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::structure::FiniteStructure;

/// Orbit counts of an injection structure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct InjSpectrum {
    /// cycle length → number of cycles of that length.
    pub cycles: BTreeMap<u64, ExtCount>,
    /// One-way infinite orbits `x, f(x), f²(x), …` with `x` not in the range.
    pub omega_orbits: ExtCount,
    /// Two-way infinite orbits.
    pub zeta_orbits: ExtCount,
    /// Cycles of infinitely many distinct lengths beyond `cycles`.
    pub unbounded_cycle_tail: bool,
}

/// The kind of orbit a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Cycle(u64),
    Omega,
    Zeta,
}

impl InjSpectrum {
    pub fn new(cycles: impl IntoIterator<Item = (u64, ExtCount)>, omega: ExtCount, zeta: ExtCount) -> Self {
        InjSpectrum {
            cycles: cycles.into_iter().collect(),
            omega_orbits: omega,
            zeta_orbits: zeta,
            unbounded_cycle_tail: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (k, c) in &self.cycles {
            if *k == 0 {
                return Err(Error::input("cycles", "cycle length must be at least 1"));
            }
            if c.is_zero() {
                return Err(Error::input(format!("cycles[{k}]"), "count must be at least 1"));
            }
        }
        Ok(())
    }

    /// The spectrum of a finite total injection (all orbits are cycles).
    pub fn of_structure(s: &FiniteStructure) -> Result<Self> {
        if !s.is_total() {
            return Err(Error::Unsupported(
                "a partial injection has no exact orbit spectrum".into(),
            ));
        }
        let mut cycles = BTreeMap::new();
        let mut seen = vec![false; s.size()];
        for x in 0..s.size() {
            if seen[x] {
                continue;
            }
            let mut len = 0u64;
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                len += 1;
                y = s.func(0, y).expect("total");
            }
            let e = cycles.entry(len).or_insert(Fin(0));
            *e = *e + Fin(1);
        }
        Ok(InjSpectrum::new(cycles, Fin(0), Fin(0)))
    }

    /// Orbits in fill order: longest cycles first, then ω, then ℤ; orbits of
    /// infinite multiplicity and the tail (one cycle of each length) alternate.
    pub(crate) fn orbit_sequence(&self) -> impl Fn(usize) -> Option<OrbitKind> + '_ {
        let mut items: Vec<(Option<OrbitKind>, ExtCount)> =
            self.cycles.iter().rev().map(|(&k, &c)| (Some(OrbitKind::Cycle(k)), c)).collect();
        items.push((Some(OrbitKind::Omega), self.omega_orbits));
        items.push((Some(OrbitKind::Zeta), self.zeta_orbits));
        if self.unbounded_cycle_tail {
            items.push((None, Omega));
        }
        let seq = Interleaved::new(items.into_iter().filter(|(_, c)| !c.is_zero()));
        move |j| {
            seq.get(j)
                .map(|(k, round)| k.unwrap_or(OrbitKind::Cycle(round as u64 + 1)))
        }
    }
}

impl OrbitKind {
    fn size(self) -> ExtCount {
        match self {
            OrbitKind::Cycle(k) => Fin(k),
            _ => Omega,
        }
    }
}

/// Integer offset of the `p`-th filled point of a ℤ-orbit: `0, 1, -1, 2, -2, …`.
pub fn zeta_offset(p: u64) -> i64 {
    let p = p as i64;
    if p % 2 == 1 {
        (p + 1) / 2
    } else {
        -(p / 2)
    }
}

/// The first `n` elements, orbits filled along diagonals; `f` is left
/// undefined where its value has not been filled yet.
pub fn materialize_injection(sp: &InjSpectrum, n: usize) -> Result<FiniteStructure> {
    let orbit = sp.orbit_sequence();
    let pts = dovetail(n, |c| orbit(c).map(OrbitKind::size));
    if pts.len() < n {
        return Err(Error::Precondition(format!("the structure has only {} elements", pts.len())));
    }
    let mut at: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    let coord = |c: usize, p: u64| -> i64 {
        match orbit(c).expect("filled orbit") {
            OrbitKind::Zeta => zeta_offset(p),
            _ => p as i64,
        }
    };
    for (x, &(c, p)) in pts.iter().enumerate() {
        at.insert((c, coord(c, p)), x);
    }
    let f = pts
        .iter()
        .map(|&(c, p)| {
            let next = match orbit(c).expect("filled orbit") {
                OrbitKind::Cycle(k) => ((p + 1) % k) as i64,
                _ => coord(c, p) + 1,
            };
            at.get(&(c, next)).copied()
        })
        .collect();
    let labels = pts.iter().map(|&(c, p)| format!("o{c}:{}", coord(c, p))).collect();
    Ok(FiniteStructure::partial_injection(f)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle() {
        let s = materialize_injection(&InjSpectrum::new([(3, Fin(1))], Fin(0), Fin(0)), 3).unwrap();
        assert_eq!(s.functions()[0], vec![Some(1), Some(2), Some(0)]);
    }

    #[test]
    fn zeta_prefix_is_a_path() {
        let s = materialize_injection(&InjSpectrum::new([], Fin(0), Fin(1)), 3).unwrap();
        // points 0, 1, -1: f(-1) = 0, f(0) = 1, f(1) undefined
        assert_eq!(s.functions()[0], vec![Some(1), None, Some(0)]);
        assert_eq!(InjSpectrum::of_structure(&s).unwrap_err().kind(), "unsupported");
    }
}
