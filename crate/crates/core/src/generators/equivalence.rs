//! `EQ_INF` and `EQ_COF`: equivalence structures with classes of size one or two.
//!
//! `EQ_INF` starts from `{0, 1, 2}` with `0 ≡ 1`. At stage `s+1` it adds
//! `2s+3` and `2s+4`; if something enters `W`, `2s+3` joins the least element
//! still alone. `EQ_COF` starts empty and at stage `s+1` adds `2s` and `2s+1`:
//! when `n` enters `W`, `2n` is paired with the least lone odd number, and
//! otherwise a lone odd number (if any) is paired with `2s+1`.

use std::collections::BTreeMap;

use serde_json::json;

use super::{number_labels, Construction, LimitSet, Schedule, StageSnapshot, Tail};
use crate::error::Result;
use crate::ext::{Fin, Omega};
use crate::presentations::{EqCharacter, Presentation};
use crate::structure::FiniteStructure;

/// `partner[x]` is the other member of `x`'s class.
#[derive(Default)]
struct Pairs {
    partner: Vec<Option<u64>>,
}

impl Pairs {
    fn push(&mut self) {
        self.partner.push(None);
    }

    fn join(&mut self, a: u64, b: u64) {
        debug_assert!(self.partner[a as usize].is_none() && self.partner[b as usize].is_none());
        self.partner[a as usize] = Some(b);
        self.partner[b as usize] = Some(a);
    }

    fn alone(&self, x: u64) -> bool {
        self.partner[x as usize].is_none()
    }

    fn snapshot(&self) -> Result<(FiniteStructure, serde_json::Value)> {
        let n = self.partner.len();
        let classes: Vec<Vec<usize>> = (0..n)
            .filter_map(|x| match self.partner[x] {
                None => Some(vec![x]),
                Some(y) if x < y as usize => Some(vec![x, y as usize]),
                Some(_) => None,
            })
            .collect();
        let pairs = classes.iter().filter(|c| c.len() == 2).count();
        let st = FiniteStructure::equivalence(n, &classes)?.with_labels(number_labels(0..n as u64));
        Ok((st, json!({"class_sizes": {"1": classes.len() - pairs, "2": pairs}})))
    }
}

pub(super) struct EqInf(Pairs);

impl EqInf {
    pub fn new() -> Self {
        let mut p = Pairs::default();
        for _ in 0..3 {
            p.push();
        }
        p.join(0, 1);
        EqInf(p)
    }
}

impl Construction for EqInf {
    fn step(&mut self, s1: u64, w: &Schedule) {
        let s = s1 - 1;
        let p = &mut self.0;
        p.push();
        p.push();
        if w.entering(s1).is_some() {
            // 2s+2 is always alone, so the search succeeds.
            let i = (0..=2 * s + 2).find(|&i| p.alone(i)).unwrap();
            p.join(2 * s + 3, i);
        }
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        self.0.snapshot()
    }
}

pub(super) struct EqCof(Pairs);

impl EqCof {
    pub fn new() -> Self {
        EqCof(Pairs::default())
    }
}

impl Construction for EqCof {
    fn step(&mut self, s1: u64, w: &Schedule) {
        let s = s1 - 1;
        let p = &mut self.0;
        p.push();
        p.push();
        let lone_odd = |p: &Pairs, upto: u64| (0..=s).map(|m| 2 * m + 1).find(|&o| o <= upto && p.alone(o));
        match w.entering(s1) {
            Some(n) => {
                // Case I: 2n is alone (n ∉ W_s, or n = s is new). The odd
                // partner is 2s+1 exactly when no older odd number is alone;
                // whatever is not used stays a singleton.
                let o = lone_odd(p, 2 * s + 1).unwrap();
                p.join(2 * n, o);
            }
            None => {
                // Case II: 2s stays alone.
                if let Some(o) = lone_odd(p, 2 * s) {
                    p.join(o, 2 * s + 1);
                }
            }
        }
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        self.0.snapshot()
    }
}

/// Class of each element and the size of each class.
fn classes(snap: &StageSnapshot) -> (Vec<usize>, Vec<usize>) {
    let cl = snap.structure.classes(0);
    let mut of = vec![0; snap.structure.size()];
    for (i, c) in cl.iter().enumerate() {
        for &x in c {
            of[x] = i;
        }
    }
    (of, cl.iter().map(Vec::len).collect())
}

fn check_universe(snap: &StageSnapshot, n: u64, out: &mut Vec<String>) -> bool {
    if snap.structure.size() as u64 != n || snap.numbers() != Some((0..n).collect()) {
        out.push(format!("universe is not {{0, …, {}}}", n as i64 - 1));
        return false;
    }
    true
}

/// Classes restricted to `0..=m`; the stage-`r` structure is the restriction
/// to `0..=2r+2`, since later stages only pair new elements with old ones.
fn check_inf_stage(snap: &StageSnapshot, w: &Schedule, r: u64, out: &mut Vec<String>) {
    let st = &snap.structure;
    let eq = |a: u64, b: u64| st.rel(0, a as usize, b as usize);
    let alone_below = |x: u64, m: u64| (0..=m).all(|y| y == x || !eq(x, y));
    let (a, b) = (2 * r + 1, 2 * r + 2);
    if !alone_below(b, b) {
        out.push(format!("{b} is not alone at stage {r}"));
    }
    let partner = (0..a).find(|&y| eq(a, y));
    if w.entering(r).is_some() {
        let want = (0..a).find(|&i| alone_below(i, a - 1));
        if partner != want {
            out.push(format!("stage {r}: {a} is paired with {partner:?}, expected the least lone element {want:?}"));
        }
    } else if partner.is_some() {
        out.push(format!("stage {r}: nothing entered W but {a} was paired"));
    }
}

pub(super) fn check_inf(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    if !check_universe(snap, 2 * s + 3, out) {
        return;
    }
    let st = &snap.structure;
    if !st.rel(0, 0, 1) {
        out.push("0 and 1 are not equivalent".into());
    }
    let (_, sizes) = classes(snap);
    if sizes.iter().any(|&k| k > 2) {
        out.push("a class has more than two elements".into());
    }
    let pairs = sizes.iter().filter(|&&k| k == 2).count();
    if pairs != w.count_by(s) + 1 {
        out.push(format!("{pairs} classes of size two, expected |W_s| + 1 = {}", w.count_by(s) + 1));
    }
    for r in 1..=s {
        check_inf_stage(snap, w, r, out);
    }
}

pub(super) fn check_cof(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    if !check_universe(snap, 2 * s, out) {
        return;
    }
    let (of, sizes) = classes(snap);
    if sizes.iter().any(|&k| k > 2) {
        out.push("a class has more than two elements".into());
    }
    for n in 0..s {
        let alone = sizes[of[2 * n as usize]] == 1;
        if alone == w.contains_by(n, s) {
            out.push(format!("[{}] has size {}, but {n} ∈ W_s is {}", 2 * n, sizes[of[2 * n as usize]], !alone));
        }
    }
    let lone_odds = (0..s).filter(|m| sizes[of[(2 * m + 1) as usize]] == 1).count();
    if lone_odds > 1 {
        out.push(format!("{lone_odds} odd numbers are alone; at most one may be"));
    }
    let st = &snap.structure;
    for a in (0..2 * s as usize).step_by(2) {
        for b in (a + 2..2 * s as usize).step_by(2) {
            if st.rel(0, a, b) {
                out.push(format!("even numbers {a} and {b} share a class"));
            }
        }
    }
}

pub(super) fn limit(cof: bool, set: &LimitSet) -> Presentation {
    let ch = if !cof {
        match set.tail {
            Tail::Finite => EqCharacter::new([(Fin(1), Omega), (Fin(2), Fin(set.w.len() as u64 + 1))]),
            _ => EqCharacter::new([(Fin(2), Omega)]),
        }
    } else {
        // Every odd number ends up paired; 2n is alone exactly when n ∉ W.
        let mut m = BTreeMap::from([(Fin(2), Omega)]);
        let alone = match set.tail {
            Tail::Cofinite => Fin(set.missing().len() as u64),
            _ => Omega,
        };
        if !alone.is_zero() {
            m.insert(Fin(1), alone);
        }
        EqCharacter::new(m)
    };
    Presentation::Equivalence(ch)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::ext::{Fin, Omega};
    use crate::presentations::{EqCharacter, Presentation};

    #[test]
    fn eq_inf_start() {
        let snap = build_reduction(Kind::EqInf, &Schedule::empty(), 0).unwrap();
        assert_eq!(snap.structure.size(), 3);
        assert_eq!(snap.structure.classes(0), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn eq_inf_pairs_least_lone() {
        // Element 0 enters at stage 1: only 2 is alone, so 3 joins it.
        let w = Schedule::new([(0, 1), (1, 3)]).unwrap();
        let snap = build_reduction(Kind::EqInf, &w, 3).unwrap();
        assert_eq!(
            snap.structure.classes(0),
            vec![vec![0, 1], vec![2, 3], vec![4, 7], vec![5], vec![6], vec![8]]
        );
        assert!(check_stage_invariants(Kind::EqInf, &snap, &w).unwrap().holds);
    }

    #[test]
    fn eq_cof_cases() {
        let w = Schedule::new([(0, 2), (2, 3)]).unwrap();
        // Stage 1: {0}, {1}. Stage 2, case I with n = 0: 0 ≡ 1; 2, 3 alone.
        // Stage 3, case I with n = 2 = s: 4 ≡ 3 and 5 alone.
        let snap = build_reduction(Kind::EqCof, &w, 3).unwrap();
        assert_eq!(snap.structure.classes(0), vec![vec![0, 1], vec![2], vec![3, 4], vec![5]]);
        // Stage 4, case II: 6 alone, 5 ≡ 7.
        let snap = build_reduction(Kind::EqCof, &w, 4).unwrap();
        assert_eq!(
            snap.structure.classes(0),
            vec![vec![0, 1], vec![2], vec![3, 4], vec![5, 7], vec![6]]
        );
        assert!(check_stage_invariants(Kind::EqCof, &snap, &w).unwrap().holds);
    }

    #[test]
    fn limits() {
        let w = Schedule::new([(0, 1), (1, 3)]).unwrap();
        let eq = |c: EqCharacter| Presentation::Equivalence(c);
        assert_eq!(
            limit_presentation(Kind::EqInf, &w, Tail::Finite).unwrap(),
            eq(EqCharacter::new([(Fin(1), Omega), (Fin(2), Fin(3))]))
        );
        assert_eq!(
            limit_presentation(Kind::EqInf, &w, Tail::Infinite).unwrap(),
            eq(EqCharacter::new([(Fin(2), Omega)]))
        );
        let w = Schedule::new([(2, 3)]).unwrap();
        assert_eq!(
            limit_presentation(Kind::EqCof, &w, Tail::Cofinite).unwrap(),
            eq(EqCharacter::new([(Fin(1), Fin(2)), (Fin(2), Omega)]))
        );
    }
}
