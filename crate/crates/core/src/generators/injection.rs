//! `INJ_INF`, `INJ_COF` and the computably homogeneous chain of odd numbers.
//!
//! `INJ_INF` grows one orbit from `φ(0) = 1`. After stage `s` the map is
//! defined on `0..=2s`, the orbit runs from its start `a` to its end `2s+1`,
//! and stage `s+1` either extends the end twice (`2s+1 ↦ 2s+2 ↦ 2s+3`) or,
//! when something enters `W`, once at each side (`2s+1 ↦ 2s+3`, `2s+2 ↦ a`).
//!
//! `INJ_COF` is given in closed form on `ω − {0}`: the orbit of `2i+1` is
//! `{2^n (2i+1)}`, walked upwards unless `i` enters `W` at stage `m+1`, in
//! which case exponents from `2m` on are rewired into a two-way chain. Stage
//! `s` defines `φ` on `1..=s`.

use std::collections::HashMap;

use serde_json::json;

use super::{number_labels, Construction, LimitSet, Schedule, StageSnapshot, Tail};
use crate::error::Result;
use crate::ext::{ExtCount, Fin, Omega};
use crate::presentations::{InjSpectrum, Presentation};
use crate::structure::FiniteStructure;

pub(super) struct InjInf {
    f: Vec<Option<u64>>,
    start: u64,
}

impl InjInf {
    pub fn new() -> Self {
        InjInf {
            f: vec![Some(1), None],
            start: 0,
        }
    }
}

impl Construction for InjInf {
    fn step(&mut self, s1: u64, w: &Schedule) {
        let s = s1 - 1;
        let b = 2 * s + 1;
        self.f.push(None);
        self.f.push(None);
        if w.entering(s1).is_some() {
            self.f[b as usize] = Some(2 * s + 3);
            self.f[(2 * s + 2) as usize] = Some(self.start);
            self.start = 2 * s + 2;
        } else {
            self.f[b as usize] = Some(2 * s + 2);
            self.f[(2 * s + 2) as usize] = Some(2 * s + 3);
        }
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let f = self.f.iter().map(|y| y.map(|y| y as usize)).collect();
        let st = FiniteStructure::partial_injection(f)?.with_labels(number_labels(0..self.f.len() as u64));
        Ok((st, json!({"start": self.start, "end": self.f.len() - 1})))
    }
}

pub(super) fn check_inf(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    let n = (2 * s + 2) as usize;
    let st = &snap.structure;
    if st.size() != n || snap.numbers() != Some((0..n as u64).collect()) {
        out.push(format!("universe is not {{0, …, {}}}", n - 1));
        return;
    }
    let f = &st.functions()[0];
    for (x, y) in f.iter().enumerate() {
        if y.is_some() != (x < n - 1) {
            out.push(format!("φ({x}) should {}be defined", if x < n - 1 { "" } else { "not " }));
        }
    }
    let mut hit = vec![false; n];
    for y in f.iter().flatten() {
        hit[*y] = true;
    }
    let starts: Vec<usize> = (0..n).filter(|&x| !hit[x]).collect();
    let want = (1..=s).rev().find(|&r| w.entering(r).is_some()).map_or(0, |r| 2 * r) as usize;
    if starts != [want] {
        out.push(format!("orbit starts at {starts:?}, expected {want}"));
        return;
    }
    let (mut x, mut seen) = (want, 1);
    while let Some(y) = f[x] {
        x = y;
        seen += 1;
        if seen > n {
            break;
        }
    }
    if x != n - 1 || seen != n {
        out.push("the elements do not form a single orbit ending at 2s+1".into());
    }
}

/// `φ(2^n x)` for odd `x`, looking up `i = (x-1)/2` in `W_{n+1}` only.
pub(super) fn cof_phi(y: u64, w: &Schedule) -> u64 {
    let (n, x) = split(y);
    let i = (x - 1) / 2;
    let rewired = w.stage_of(i).filter(|&t| t <= n + 1).map(|t| t - 1);
    match rewired {
        Some(m) if n >= 2 * m => {
            if n == 2 * m + 1 {
                x
            } else if n % 2 == 0 {
                y << 2
            } else {
                y >> 2
            }
        }
        _ => y << 1,
    }
}

/// `y = 2^n x` with `x` odd.
fn split(y: u64) -> (u64, u64) {
    let n = y.trailing_zeros() as u64;
    (n, y >> n)
}

pub(super) struct InjCof {
    index: HashMap<u64, usize>,
    elems: Vec<u64>,
    f: Vec<Option<usize>>,
}

impl InjCof {
    pub fn new() -> Self {
        InjCof {
            index: HashMap::new(),
            elems: Vec::new(),
            f: Vec::new(),
        }
    }

    fn id(&mut self, y: u64) -> usize {
        if let Some(&i) = self.index.get(&y) {
            return i;
        }
        self.index.insert(y, self.elems.len());
        self.elems.push(y);
        self.f.push(None);
        self.elems.len() - 1
    }
}

impl Construction for InjCof {
    fn step(&mut self, s: u64, w: &Schedule) {
        let a = self.id(s);
        let b = self.id(cof_phi(s, w));
        self.f[a] = Some(b);
    }

    fn snapshot(&self, s: u64, w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let st = FiniteStructure::partial_injection(self.f.clone())?.with_labels(number_labels(self.elems.iter().copied()));
        let zeta: Vec<u64> = w.events().into_iter().filter(|&(_, t)| t <= s + 1).map(|(i, _)| i).collect();
        Ok((st, json!({"domain": [1, s], "rewired": zeta})))
    }
}

pub(super) fn check_cof(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    let Some(nums) = snap.numbers() else {
        out.push("elements are not labelled by numbers".into());
        return;
    };
    let st = &snap.structure;
    let pos: HashMap<u64, usize> = nums.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    if nums.contains(&0) {
        out.push("0 is not in the universe".into());
    }
    let phi = |y: u64| pos.get(&y).and_then(|&i| st.func(0, i)).map(|j| nums[j]);
    for y in 1..=s {
        if phi(y).is_none() {
            out.push(format!("φ({y}) is not defined by stage {s}"));
        }
    }
    for (i, &y) in nums.iter().enumerate() {
        let Some(z) = st.func(0, i).map(|j| nums[j]) else {
            if y <= s {
                out.push(format!("φ({y}) missing"));
            }
            continue;
        };
        if y > s {
            out.push(format!("φ({y}) is defined before stage {y}"));
        }
        let ((n, x), (k, x2)) = (split(y), split(z));
        if x != x2 {
            out.push(format!("φ({y}) = {z} leaves the orbit of {x}"));
            continue;
        }
        let i = (x - 1) / 2;
        let ok = match w.stage_of(i) {
            None => k == n + 1,
            Some(t) => {
                let m = t - 1;
                if n < 2 * m {
                    k == n + 1
                } else if n == 2 * m + 1 {
                    k == 0
                } else if n % 2 == 0 {
                    k == n + 2
                } else {
                    k + 2 == n
                }
            }
        };
        if !ok {
            out.push(format!("φ({y}) = {z} does not follow the orbit pattern of {x}"));
        }
    }
    // The orbit of 2i+1 has a preimage of 2i+1 exactly when rewired.
    let mut has_pre = vec![false; nums.len()];
    for i in 0..nums.len() {
        if let Some(j) = st.func(0, i) {
            has_pre[j] = true;
        }
    }
    for (j, &y) in nums.iter().enumerate() {
        let (n, x) = split(y);
        if n != 0 {
            continue;
        }
        let i = (x - 1) / 2;
        let expect = w.stage_of(i).is_some_and(|t| {
            let e = u32::try_from(2 * (t - 1) + 1).ok();
            e.and_then(|e| 1u64.checked_shl(e)).and_then(|p| p.checked_mul(x)).is_some_and(|top| top <= s)
        });
        if has_pre[j] != expect {
            out.push(format!("{x} has a preimage: {}, expected {expect}", has_pre[j]));
        }
    }
}

pub(super) fn limit(cof: bool, set: &LimitSet) -> Presentation {
    let sp = if !cof {
        if set.tail.is_infinite() {
            InjSpectrum::new([], Fin(0), Fin(1))
        } else {
            InjSpectrum::new([], Fin(1), Fin(0))
        }
    } else {
        let (omega, zeta): (ExtCount, ExtCount) = match set.tail {
            Tail::Finite => (Omega, Fin(set.w.len() as u64)),
            Tail::Infinite => (Omega, Omega),
            Tail::Cofinite => (Fin(set.missing().len() as u64), Omega),
        };
        InjSpectrum::new([], omega, zeta)
    };
    Presentation::Injection(sp)
}

/// The chain on odd numbers: `f(4i+1) = 4i+5`, `f(4i+7) = 4i+3`, `f(3) = 1`,
/// extended to `2^k x` by `f(2^k x) = 2^k f(x)`.
pub fn odd_zchain_f(y: u64) -> u64 {
    assert!(y > 0, "0 is not in the universe");
    let (k, x) = split(y);
    let fx = match x % 4 {
        1 => x + 4,
        _ if x == 3 => 1,
        _ => x - 4,
    };
    fx << k
}

/// The substructure on `1..=n`, listing `y` as element `y - 1`.
///
/// `f(y)` is left undefined when it exceeds `n`.
pub fn build_odd_zchain(n: usize) -> FiniteStructure {
    let f = (1..=n as u64)
        .map(|y| Some(odd_zchain_f(y)).filter(|&z| z <= n as u64).map(|z| z as usize - 1))
        .collect();
    FiniteStructure::partial_injection(f)
        .expect("the chain map is injective")
        .with_labels(number_labels(1..=n as u64))
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn inj_inf_start() {
        let snap = build_reduction(Kind::InjInf, &Schedule::empty(), 0).unwrap();
        assert_eq!(snap.structure.functions()[0], vec![Some(1), None]);
    }

    #[test]
    fn inj_inf_two_sides() {
        let w = Schedule::new([(5, 2)]).unwrap();
        let snap = build_reduction(Kind::InjInf, &w, 2).unwrap();
        // 0→1→2→3 after stage 1; stage 2 adds 3→5 and 4→0.
        let f = &snap.structure.functions()[0];
        assert_eq!(f, &vec![Some(1), Some(2), Some(3), Some(5), Some(0), None]);
        assert_eq!(snap.metadata["start"], 4);
        assert!(check_stage_invariants(Kind::InjInf, &snap, &w).unwrap().holds);
    }

    #[test]
    fn inj_cof_rewiring() {
        // i = 0 enters at stage 2, so m = 1: exponents below 2 go up by one,
        // 2^3 ↦ 1, and from 2^2 on evens climb and odds descend by two.
        let w = Schedule::new([(0, 2)]).unwrap();
        let vals: Vec<u64> = [1, 2, 4, 8, 16, 32, 128].iter().map(|&y| cof_phi(y, &w)).collect();
        assert_eq!(vals, vec![2, 4, 16, 1, 64, 8, 32]);
        assert_eq!(cof_phi(3, &w), 6);
        let snap = build_reduction(Kind::InjCof, &w, 40).unwrap();
        assert!(check_stage_invariants(Kind::InjCof, &snap, &w).unwrap().holds);
        let other = Schedule::new([(1, 2)]).unwrap();
        assert!(!check_stage_invariants(Kind::InjCof, &snap, &other).unwrap().holds);
    }

    #[test]
    fn inj_cof_late_rewiring() {
        // 2^65 · 65 is far beyond any stage, so 65 never gets a preimage
        let w = Schedule::new([(32, 33)]).unwrap();
        let snap = build_reduction(Kind::InjCof, &w, 130).unwrap();
        assert!(check_stage_invariants(Kind::InjCof, &snap, &w).unwrap().holds);
    }

    #[test]
    fn zchain_values() {
        assert_eq!(odd_zchain_f(1), 5);
        assert_eq!(odd_zchain_f(3), 1);
        assert_eq!(odd_zchain_f(7), 3);
        assert_eq!(odd_zchain_f(6), 2);
        let s = build_odd_zchain(8);
        assert_eq!(s.func(0, 0), Some(4));
        assert_eq!(s.func(0, 4), None);
    }

    #[test]
    fn limits() {
        let w = Schedule::new([(0, 1), (3, 2)]).unwrap();
        let inj = |o, z| Presentation::Injection(InjSpectrum::new([], o, z));
        assert_eq!(limit_presentation(Kind::InjInf, &w, Tail::Finite).unwrap(), inj(Fin(1), Fin(0)));
        assert_eq!(limit_presentation(Kind::InjInf, &w, Tail::Infinite).unwrap(), inj(Fin(0), Fin(1)));
        assert_eq!(limit_presentation(Kind::InjCof, &w, Tail::Cofinite).unwrap(), inj(Fin(2), Omega));
        assert_eq!(limit_presentation(Kind::InjCof, &w, Tail::Finite).unwrap(), inj(Omega, Fin(2)));
    }
}
