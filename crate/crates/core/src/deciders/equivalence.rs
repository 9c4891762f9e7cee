//! Equivalence structures given by their character.

use serde::Serialize;

use super::{anchors, ExceptionalDescriptor, Report, Verdict};
use crate::ext::{ExtCount, Fin};
use crate::presentations::equivalence::EqCharacter;
use crate::structure::{Family, FiniteStructure};

/// Exceptional representatives are listed by label only up to this many.
const MAX_LISTED: u64 = 64;

#[derive(Serialize)]
struct ClassCount {
    size: ExtCount,
    count: ExtCount,
}

/// Labels `c{class}:0` of one member of each class whose size is not `keep`,
/// in the materialization order.
fn representatives(c: &EqCharacter, keep: ExtCount) -> Vec<String> {
    let seq = c.class_sequence();
    let want: u64 = c.entries.iter().filter(|(s, _)| **s != keep).filter_map(|(_, n)| n.finite()).sum();
    let mut out = Vec::new();
    let mut j = 0;
    while (out.len() as u64) < want {
        match seq(j) {
            Some(s) if s != keep => out.push(format!("c{j}:0")),
            Some(_) => {}
            None => break,
        }
        j += 1;
    }
    out
}

pub fn analyze_equivalence(c: &EqCharacter) -> Report {
    let mut r = Report::new(Family::Equivalence);
    let omega_sizes: Vec<ExtCount> = c.entries.iter().filter(|(_, n)| n.is_omega()).map(|(s, _)| *s).collect();
    r.uh = Verdict::from_bool(!c.unbounded_tail && c.entries.len() <= 1);
    let wuh = !c.unbounded_tail && omega_sizes.len() <= 1;
    r.wuh = Verdict::from_bool(wuh);
    r.cc = r.wuh;
    r.delta2_from_wuh();
    r.cite(anchors::EQ_UH);
    r.cite(anchors::EQ_WUH);
    r.cite(anchors::EQ_CC);
    if !wuh {
        if c.unbounded_tail {
            r.note("infinitely many class sizes occur");
        } else {
            r.note("more than one class size occurs infinitely often");
        }
        return r;
    }
    r.cite(anchors::EQ_EXC);
    r.cite(anchors::EQ_DEF);
    // The size that may stay unfixed: forced when some size is infinitely
    // repeated, otherwise any size present gives one minimal set.
    let keeps: Vec<ExtCount> = match omega_sizes.first() {
        Some(&k) => vec![k],
        None => c.entries.keys().copied().collect(),
    };
    let mut sets: Vec<(u64, ExtCount)> = keeps
        .iter()
        .map(|&k| {
            let n: u64 = c.entries.iter().filter(|(s, _)| **s != k).filter_map(|(_, n)| n.finite()).sum();
            (n, k)
        })
        .collect();
    sets.sort();
    if sets.is_empty() {
        r.minimal_exceptional = vec![ExceptionalDescriptor::empty()];
    }
    for &(n, k) in &sets {
        let description = format!("one element from each class whose size is not {k}");
        r.minimal_exceptional.push(if n == 0 {
            ExceptionalDescriptor::empty()
        } else if n <= MAX_LISTED {
            ExceptionalDescriptor::named(description, representatives(c, k))
        } else {
            ExceptionalDescriptor::symbolic(description, Fin(n))
        });
    }
    if let Some(&(_, k)) = sets.first() {
        let exc: Vec<ClassCount> = c
            .entries
            .iter()
            .filter(|(s, _)| **s != k)
            .map(|(&size, &count)| ClassCount { size, count })
            .collect();
        r.detail("majority_size", k);
        r.detail("exceptional_classes", exc);
        let small_unique = c.entries.get(&Fin(1)) == Some(&Fin(1)) && k == Fin(1);
        let mut d = "S together with the other member of every exceptional class of size 2".to_string();
        if small_unique {
            d.push_str(", and the element of the single class of size 1");
        }
        r.detail("definable_closure", d);
    }
    r
}

/// `D(S)` for a finite equivalence structure, from the class structure: an
/// element is fixed by every automorphism fixing `S` iff it is the only
/// unfixed member of a class meeting `S`, or it forms the only singleton class
/// disjoint from `S`.
pub fn definable_closure_equivalence(s: &FiniteStructure, set: &[usize]) -> Vec<usize> {
    let classes = s.classes(0);
    let meets = |c: &Vec<usize>| c.iter().any(|x| set.contains(x));
    let lone_singletons = classes.iter().filter(|c| c.len() == 1 && !meets(c)).count();
    let mut out: Vec<usize> = Vec::new();
    for c in &classes {
        let free: Vec<usize> = c.iter().copied().filter(|x| !set.contains(x)).collect();
        if meets(c) {
            out.extend(c.iter().filter(|x| set.contains(x)));
            if free.len() == 1 {
                out.push(free[0]);
            }
        } else if c.len() == 1 && lone_singletons == 1 {
            out.push(c[0]);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_structures;
    use crate::ext::Omega;
    use crate::oracle::Oracle;

    #[test]
    fn paper_characters() {
        assert!(analyze_equivalence(&EqCharacter::new([(Fin(2), Omega)])).uh.is_yes());
        let two = analyze_equivalence(&EqCharacter::new([(Fin(1), Omega), (Fin(2), Omega)]));
        assert!(two.wuh.is_no() && two.cc.is_no());
        let r = analyze_equivalence(&EqCharacter::new([(Fin(3), Fin(2)), (Fin(5), Fin(1)), (Omega, Omega)]));
        assert!(r.wuh.is_yes() && r.uh.is_no());
        assert_eq!(r.minimal_exceptional.len(), 1);
        assert_eq!(r.minimal_exceptional[0].size, Fin(3));
        assert!(analyze_equivalence(&EqCharacter::new([(Fin(2), Fin(1))]).with_tail()).wuh.is_no());
    }

    #[test]
    fn finite_choices() {
        // one class of size 1 and one of size 2: either may be the fixed one
        let r = analyze_equivalence(&EqCharacter::new([(Fin(1), Fin(1)), (Fin(2), Fin(1))]));
        assert_eq!(r.minimal_exceptional.len(), 2);
        let sizes: Vec<ExtCount> = r.minimal_exceptional.iter().map(|d| d.size).collect();
        assert_eq!(sizes, vec![Fin(1), Fin(1)]);
    }

    #[test]
    fn minimal_sets_match_oracle() {
        let o = Oracle::default();
        for n in 1..=6 {
            for s in enumerate_structures(Family::Equivalence, n).unwrap() {
                let r = analyze_equivalence(&EqCharacter::of_structure(&s));
                let mut want: Vec<usize> = o.minimal_exceptional_sets(&s).unwrap().iter().map(|m| m.len()).collect();
                want.sort();
                want.dedup();
                let mut got: Vec<usize> = r.minimal_exceptional.iter().map(|d| d.size.finite().unwrap() as usize).collect();
                got.sort();
                got.dedup();
                assert_eq!(got, want, "{:?}", s.classes(0));
            }
        }
    }

    #[test]
    fn closure_matches_oracle() {
        let o = Oracle::default();
        for n in 1..=5 {
            for s in enumerate_structures(Family::Equivalence, n).unwrap() {
                for m in 0u32..(1 << n) {
                    let set: Vec<usize> = (0..n).filter(|x| m >> x & 1 == 1).collect();
                    let want = o.definable_closure(&s, &set).unwrap().closure;
                    assert_eq!(definable_closure_equivalence(&s, &set), want);
                }
            }
        }
    }
}
