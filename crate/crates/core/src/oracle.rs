//! Brute-force ground truth on small finite structures.
//!
//! Everything here is exhaustive: partial isomorphisms between generated
//! substructures are enumerated outright and tested for extendibility. Answers
//! are only trusted up to the size cap.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{automorphisms, find_iso, is_automorphism};
use crate::structure::{FiniteStructure, PartialMap};

pub use crate::enumerate::enumerate_structures;

/// Default size cap for oracle operations.
pub const DEFAULT_CAP: usize = 8;
/// No cap above this is accepted.
pub const HARD_CAP: usize = 12;

/// Above this many automorphisms the extension test switches from a
/// restriction table to one search per partial map.
const GROUP_TABLE_LIMIT: usize = 50_000;

/// Oracle settings.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

/// Outcome of a brute-force check, with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// A partial isomorphism of generated substructures with no extension.
    pub counterexample: Option<PartialMap>,
}

/// `D(S)` together with the automorphisms that justify each exclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinableClosureResult {
    pub base: Vec<usize>,
    pub closure: Vec<usize>,
    /// `(x, σ)`: σ fixes the base pointwise and moves `x`.
    pub witness: Vec<(usize, Vec<usize>)>,
}

impl Oracle {
    /// An oracle with the given cap; caps above the hard limit are refused.
    pub fn with_cap(cap: usize) -> Result<Self> {
        if cap > HARD_CAP {
            return Err(Error::Cap {
                size: cap,
                cap: HARD_CAP,
            });
        }
        Ok(Oracle { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.cap {
            Err(Error::Cap {
                size: n,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// One structure per isomorphism type of `family` on exactly `n` elements.
    pub fn enumerate(&self, family: crate::Family, n: usize) -> Result<Vec<FiniteStructure>> {
        self.check(n)?;
        enumerate_structures(family, n)
    }

    /// Is every isomorphism between generated substructures extendible?
    pub fn is_uh(&self, s: &FiniteStructure) -> Result<Verdict> {
        self.is_exceptional(s, &[])
    }

    /// Is `set` an exceptional set: does every isomorphism of generated
    /// substructures containing `set` and fixing it pointwise extend?
    pub fn is_exceptional(&self, s: &FiniteStructure, set: &[usize]) -> Result<Verdict> {
        self.check(s.size())?;
        let n = s.size();
        let base = normalize_set(n, set)?;
        let group = automorphisms(s, &base, GROUP_TABLE_LIMIT);
        let mut required = vec![false; n];
        for &x in base.iter().chain(s.constants().iter()) {
            required[x] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&x| !required[x]).collect();
        // closed domains in order of size, then lexicographically
        let mut domains: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..(1 << free.len()) {
            let mut inx = required.clone();
            for (i, &x) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    inx[x] = true;
                }
            }
            if s.is_closed(&inx) {
                domains.push((0..n).filter(|&x| inx[x]).collect());
            }
        }
        domains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for dom in &domains {
            let table: Option<HashSet<Vec<usize>>> = group
                .as_ref()
                .map(|g| g.iter().map(|p| dom.iter().map(|&x| p[x]).collect()).collect());
            let mut bad = None;
            for_each_partial_iso(s, dom, &base, &mut |img: &[usize]| {
                let ok = match &table {
                    Some(t) => t.contains(img),
                    None => {
                        let forced: Vec<(usize, usize)> =
                            dom.iter().copied().zip(img.iter().copied()).collect();
                        find_iso(s, s, &forced).is_some()
                    }
                };
                if !ok {
                    bad = Some(img.to_vec());
                }
                ok
            });
            if let Some(img) = bad {
                return Ok(Verdict {
                    holds: false,
                    counterexample: Some(PartialMap {
                        pairs: dom.iter().copied().zip(img).filter(|(a, _)| !base.contains(a)).collect(),
                        fixed: base.clone(),
                    }),
                });
            }
        }
        Ok(Verdict {
            holds: true,
            counterexample: None,
        })
    }

    /// All minimal exceptional sets, sorted by size then lexicographically.
    pub fn minimal_exceptional_sets(&self, s: &FiniteStructure) -> Result<Vec<Vec<usize>>> {
        self.check(s.size())?;
        let n = s.size();
        let mut exceptional = vec![false; 1 << n];
        let mut minimal = Vec::new();
        let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
        masks.sort_by_key(|m| (m.count_ones(), subset_of(n, *m)));
        for m in masks {
            // monotone: a superset of an exceptional set is exceptional
            let has_exc_subset = (0..n).any(|i| m >> i & 1 == 1 && exceptional[(m & !(1 << i)) as usize]);
            if has_exc_subset {
                exceptional[m as usize] = true;
                continue;
            }
            if self.is_exceptional(s, &subset_of(n, m))?.holds {
                exceptional[m as usize] = true;
                minimal.push(subset_of(n, m));
            }
        }
        Ok(minimal)
    }

    /// `D(S)`: the elements fixed by every automorphism fixing `S` pointwise.
    pub fn definable_closure(&self, s: &FiniteStructure, set: &[usize]) -> Result<DefinableClosureResult> {
        self.check(s.size())?;
        let n = s.size();
        let base = normalize_set(n, set)?;
        let mut closure = Vec::new();
        let mut witness = Vec::new();
        for x in 0..n {
            if base.contains(&x) {
                closure.push(x);
                continue;
            }
            let mut moved = None;
            for y in 0..n {
                if y == x {
                    continue;
                }
                let mut forced: Vec<(usize, usize)> = base.iter().map(|&b| (b, b)).collect();
                forced.push((x, y));
                if let Some(p) = find_iso(s, s, &forced) {
                    moved = Some(p);
                    break;
                }
            }
            match moved {
                Some(p) => {
                    debug_assert!(is_automorphism(s, &p));
                    witness.push((x, p));
                }
                None => closure.push(x),
            }
        }
        Ok(DefinableClosureResult {
            base,
            closure,
            witness,
        })
    }
}

fn subset_of(n: usize, m: u32) -> Vec<usize> {
    (0..n).filter(|&i| m >> i & 1 == 1).collect()
}

fn normalize_set(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut out = BTreeSet::new();
    for (i, &x) in set.iter().enumerate() {
        if x >= n {
            return Err(Error::input(format!("S[{i}]"), format!("element {x} out of range")));
        }
        out.insert(x);
    }
    Ok(out.into_iter().collect())
}

/// Enumerates the partial isomorphisms with domain `dom` (a closed set) that
/// fix `fixed` pointwise, in lexicographic order of the image tuple.
pub fn for_each_partial_iso(
    s: &FiniteStructure,
    dom: &[usize],
    fixed: &[usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = s.size();
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in dom.iter().enumerate() {
        pos[x] = i;
    }
    let mut forced = vec![None; dom.len()];
    for &f in fixed.iter().chain(s.constants().iter()) {
        if pos[f] != usize::MAX {
            forced[pos[f]] = Some(f);
        }
    }
    let mut img = vec![0usize; dom.len()];
    let mut used = vec![false; n];
    fn ok(s: &FiniteStructure, dom: &[usize], pos: &[usize], img: &[usize], i: usize, y: usize) -> bool {
        let x = dom[i];
        for r in 0..s.relations().len() {
            if s.rel(r, x, x) != s.rel(r, y, y) {
                return false;
            }
            for j in 0..i {
                let (x2, y2) = (dom[j], img[j]);
                if s.rel(r, x, x2) != s.rel(r, y, y2) || s.rel(r, x2, x) != s.rel(r, y2, y) {
                    return false;
                }
            }
        }
        for k in 0..s.functions().len() {
            if s.func(k, x).is_some() != s.func(k, y).is_some() {
                return false;
            }
            if s.func(k, x) == Some(x) && s.func(k, y) != Some(y) {
                return false;
            }
            for j in 0..i {
                let (x2, y2) = (dom[j], img[j]);
                if (s.func(k, x) == Some(x2)) != (s.func(k, y) == Some(y2))
                    || (s.func(k, x2) == Some(x)) != (s.func(k, y2) == Some(y))
                {
                    return false;
                }
            }
            // images of points inside the domain must land on images
            if let Some(fx) = s.func(k, x) {
                if pos[fx] == usize::MAX {
                    return false;
                }
            }
        }
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        s: &FiniteStructure,
        dom: &[usize],
        pos: &[usize],
        forced: &[Option<usize>],
        i: usize,
        img: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == dom.len() {
            return visit(img);
        }
        let cands: Vec<usize> = match forced[i] {
            Some(f) => vec![f],
            None => (0..s.size()).collect(),
        };
        for y in cands {
            if used[y] || !ok(s, dom, pos, img, i, y) {
                continue;
            }
            used[y] = true;
            img[i] = y;
            let cont = go(s, dom, pos, forced, i + 1, img, used, visit);
            used[y] = false;
            if !cont {
                return false;
            }
        }
        true
    }
    go(s, dom, &pos, &forced, 0, &mut img, &mut used, visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq22() -> FiniteStructure {
        FiniteStructure::equivalence(4, &[vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn uh_examples() {
        let o = Oracle::default();
        assert!(o.is_uh(&FiniteStructure::chain(1)).unwrap().holds);
        assert!(o.is_uh(&eq22()).unwrap().holds);
        let v = o.is_uh(&FiniteStructure::chain(3)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.counterexample.unwrap().pairs, vec![(0, 1)]);
    }

    #[test]
    fn exceptional_examples() {
        let o = Oracle::default();
        let c3 = FiniteStructure::chain(3);
        assert!(o.is_exceptional(&c3, &[1]).unwrap().holds);
        assert!(o.is_exceptional(&c3, &[0, 1, 2]).unwrap().holds);
        let v = o.is_exceptional(&FiniteStructure::chain(4), &[1]).unwrap();
        assert!(!v.holds);
        let w = v.counterexample.unwrap();
        assert_eq!(w.fixed, vec![1]);
        assert_eq!(w.pairs, vec![(2, 3)]);
    }

    #[test]
    fn minimal_sets() {
        let o = Oracle::default();
        assert_eq!(o.minimal_exceptional_sets(&eq22()).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(
            o.minimal_exceptional_sets(&FiniteStructure::chain(3)).unwrap(),
            vec![vec![1], vec![0, 2]]
        );
        // regression fixture: neither endpoint of the 2-chain is definable from nothing
        assert_eq!(
            o.minimal_exceptional_sets(&FiniteStructure::chain(2)).unwrap(),
            vec![vec![0], vec![1]]
        );
    }

    #[test]
    fn closure_examples() {
        let o = Oracle::default();
        let c3 = FiniteStructure::chain(3);
        assert_eq!(o.definable_closure(&c3, &[]).unwrap().closure, vec![0, 1, 2]);
        assert_eq!(o.definable_closure(&c3, &[0, 1, 2]).unwrap().closure, vec![0, 1, 2]);
        let d = o.definable_closure(&eq22(), &[]).unwrap();
        assert!(d.closure.is_empty());
        assert_eq!(d.witness.len(), 4);
    }

    #[test]
    fn caps() {
        let o = Oracle::default();
        assert!(matches!(o.is_uh(&FiniteStructure::chain(9)), Err(Error::Cap { .. })));
        assert!(Oracle::with_cap(13).is_err());
        assert!(Oracle::with_cap(12).is_ok());
    }
}
