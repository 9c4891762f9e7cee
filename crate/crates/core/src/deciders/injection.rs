//! Injection structures given by their orbit spectrum.

use super::{anchors, ExceptionalDescriptor, Report, Verdict};
use crate::ext::{Fin, Omega};
use crate::presentations::injection::{InjSpectrum, OrbitKind};
use crate::structure::{Family, FiniteStructure};

const MAX_LISTED: u64 = 64;

/// Labels `o{orbit}:0` of the starting points of the ω-orbits, in
/// materialization order.
fn omega_representatives(sp: &InjSpectrum, want: u64) -> Vec<String> {
    let seq = sp.orbit_sequence();
    let mut out = Vec::new();
    let mut j = 0;
    while (out.len() as u64) < want {
        match seq(j) {
            Some(OrbitKind::Omega) => out.push(format!("o{j}:0")),
            Some(_) => {}
            None => break,
        }
        j += 1;
    }
    out
}

pub fn analyze_injection(sp: &InjSpectrum) -> Report {
    let mut r = Report::new(Family::Injection);
    let om = sp.omega_orbits;
    let ze = sp.zeta_orbits;
    r.uh = Verdict::from_bool(om.is_zero());
    r.wuh = Verdict::from_bool(om.is_finite());
    r.cc = Verdict::from_bool((om + ze).is_finite());
    r.delta2 = Verdict::from_bool(om.is_finite() || ze.is_finite());
    for a in [anchors::INJ_UH, anchors::INJ_WUH, anchors::INJ_CC, anchors::INJ_D2] {
        r.cite(a);
    }
    if om == Omega {
        r.note("infinitely many ω-orbits");
        return r;
    }
    r.cite(anchors::INJ_EXC);
    r.cite(anchors::INJ_DEF);
    let k = om.finite().expect("finite");
    r.minimal_exceptional = vec![if k == 0 {
        ExceptionalDescriptor::empty()
    } else if k <= MAX_LISTED {
        let reps = omega_representatives(sp, k);
        r.detail("omega_orbit_reps", &reps);
        ExceptionalDescriptor::named("one member of each ω-orbit", reps)
    } else {
        ExceptionalDescriptor::symbolic("one member of each ω-orbit", Fin(k))
    }];
    let mut d = "S together with the union of the ω-orbits".to_string();
    if sp.cycles.get(&1) == Some(&Fin(1)) {
        d.push_str(", and the unique fixed point");
        r.note("a unique orbit of size one is definable from the empty set");
    }
    r.detail("definable_closure", d);
    r
}

/// `D(S)` for a finite permutation: the orbits meeting `S`, plus the fixed
/// point when exactly one orbit of size one misses `S`.
pub fn definable_closure_injection(s: &FiniteStructure, set: &[usize]) -> Vec<usize> {
    let n = s.size();
    let mut orbit_id = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if orbit_id[x] != usize::MAX {
            continue;
        }
        let mut o = Vec::new();
        let mut y = x;
        while orbit_id[y] == usize::MAX {
            orbit_id[y] = orbits.len();
            o.push(y);
            y = s.func(0, y).expect("a total injection");
        }
        orbits.push(o);
    }
    let meets = |o: &Vec<usize>| o.iter().any(|x| set.contains(x));
    let free_fixed: Vec<usize> = orbits.iter().filter(|o| o.len() == 1 && !meets(o)).map(|o| o[0]).collect();
    let mut out: Vec<usize> = orbits.iter().filter(|o| meets(o)).flatten().copied().collect();
    if free_fixed.len() == 1 {
        out.push(free_fixed[0]);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_structures;
    use crate::oracle::Oracle;

    #[test]
    fn spectra() {
        let z = analyze_injection(&InjSpectrum::new([], Fin(0), Omega));
        assert!(z.uh.is_yes() && z.cc.is_no() && z.delta2.is_yes());
        let w = analyze_injection(&InjSpectrum::new([], Omega, Fin(0)));
        assert!(w.uh.is_no() && w.wuh.is_no() && w.delta2.is_yes());
        let t = analyze_injection(&InjSpectrum::new([(3, Omega)], Fin(2), Fin(0)));
        assert!(t.wuh.is_yes() && t.uh.is_no());
        assert_eq!(t.minimal_exceptional[0].size, Fin(2));
        // the 3-cycles come first in the fill order, round-robin with nothing
        assert_eq!(t.minimal_exceptional[0].elements.as_ref().unwrap().len(), 2);
        let both = analyze_injection(&InjSpectrum::new([], Omega, Omega));
        assert!(both.delta2.is_no() && both.cc.is_no());
    }

    #[test]
    fn closure_matches_oracle() {
        let o = Oracle::default();
        for n in 1..=5 {
            for s in enumerate_structures(Family::Injection, n).unwrap() {
                for m in 0u32..(1 << n) {
                    let set: Vec<usize> = (0..n).filter(|x| m >> x & 1 == 1).collect();
                    let want = o.definable_closure(&s, &set).unwrap().closure;
                    assert_eq!(definable_closure_injection(&s, &set), want);
                }
            }
        }
    }
}
