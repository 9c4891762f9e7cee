//! Back-and-forth construction of isomorphisms.
//!
//! Finite structures are matched by alternating least-unmatched selection with
//! backtracking; every prefix is checked with [`stage_iso`] at full closure
//! depth. Symbolic presentations replace that check by exact metadata (class
//! sizes, orbit offsets, interval types), which is what keeps a greedy
//! selection from ever getting stuck.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtCount;
use crate::presentations::counts::dovetail;
use crate::presentations::injection::zeta_offset;
use crate::presentations::linear::{normalize_linear, points, Coord};
use crate::presentations::{pres_isomorphic, Block, EqCharacter, InjSpectrum, LinOrderPres, OrbitKind, Presentation};
use crate::search::{find_iso, is_isomorphism, refine};
use crate::structure::{generated_isomorphism, FiniteStructure, PartialMap};

/// `A_s[x̄]`: values of terms of height ≤ `s` over `x̄`.
///
/// Constants count as terms of height 0, so for the rooted trees `A_0` is `x̄`
/// plus the root; for every other family `A_0 = x̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermStage {
    pub base: Vec<usize>,
    pub stage: usize,
    pub elements: Vec<usize>,
}

fn check_range(s: &FiniteStructure, xs: &[usize], what: &str) -> Result<()> {
    for (i, &x) in xs.iter().enumerate() {
        if x >= s.size() {
            return Err(Error::input(format!("{what}[{i}]"), format!("element {x} out of range")));
        }
    }
    Ok(())
}

pub fn term_stage(s: &FiniteStructure, base: &[usize], stage: usize) -> Result<TermStage> {
    check_range(s, base, "x")?;
    let mut set = vec![false; s.size()];
    let mut frontier: Vec<usize> = base.iter().copied().chain(s.constants()).collect();
    for &x in &frontier {
        set[x] = true;
    }
    for _ in 0..stage {
        let mut next = Vec::new();
        for &x in &frontier {
            for k in 0..s.functions().len() {
                if let Some(y) = s.func(k, x) {
                    if !std::mem::replace(&mut set[y], true) {
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(TermStage {
        base: base.to_vec(),
        stage,
        elements: (0..s.size()).filter(|&x| set[x]).collect(),
    })
}

/// Term values `(value in s1, value in s2)` over the two tuples, or `None`
/// when some term is defined on one side only.
fn term_values(
    s1: &FiniteStructure,
    x: &[usize],
    s2: &FiniteStructure,
    y: &[usize],
    stage: usize,
) -> Option<Vec<(usize, usize)>> {
    let (c1, c2) = (s1.constants(), s2.constants());
    if c1.len() != c2.len() {
        return None;
    }
    let mut level: Vec<(usize, usize)> = x.iter().copied().zip(y.iter().copied()).chain(c1.into_iter().zip(c2)).collect();
    let mut all = level.clone();
    for _ in 0..stage {
        let mut next = Vec::new();
        for &(a, b) in &level {
            for k in 0..s1.functions().len() {
                match (s1.func(k, a), s2.func(k, b)) {
                    (Some(fa), Some(fb)) => next.push((fa, fb)),
                    (None, None) => {}
                    _ => return None,
                }
            }
        }
        // terms repeat once both sides revisit a pair
        next.sort_unstable();
        next.dedup();
        next.retain(|p| !all.contains(p));
        if next.is_empty() {
            break;
        }
        all.extend(&next);
        level = next;
    }
    Some(all)
}

/// Do the height-≤`stage` terms over `x̄` and `ȳ` satisfy the same atomic
/// formulas? At `stage ≥ |universe|` this is isomorphism of `⟨x̄⟩` and `⟨ȳ⟩`.
pub fn stage_iso(s1: &FiniteStructure, x: &[usize], s2: &FiniteStructure, y: &[usize], stage: usize) -> Result<bool> {
    if s1.family() != s2.family() {
        return Err(Error::input("family", format!("cannot compare {} with {}", s1.family(), s2.family())));
    }
    if x.len() != y.len() {
        return Err(Error::input("y", format!("tuple lengths differ: {} and {}", x.len(), y.len())));
    }
    check_range(s1, x, "x")?;
    check_range(s2, y, "y")?;
    let Some(t) = term_values(s1, x, s2, y, stage) else {
        return Ok(false);
    };
    for &(a1, b1) in &t {
        for &(a2, b2) in &t {
            if (a1 == a2) != (b1 == b2) {
                return Ok(false);
            }
            if (0..s1.relations().len()).any(|r| s1.rel(r, a1, a2) != s2.rel(r, b1, b2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Search nodes spent locating the obstruction once extension has failed.
const EXTENSION_BUDGET: usize = 100_000;

/// Result of trying to extend a partial isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Extension {
    Automorphism { map: Vec<usize> },
    /// No automorphism extends the map. `level` is the largest number of
    /// further elements (taken in index order) the map extends to, and
    /// `stuck_at` the element where that deepest attempt stops (a lower bound
    /// when the search budget runs out).
    Failure { level: usize, stuck_at: usize },
}

pub fn extend_to_automorphism(s: &FiniteStructure, m: &PartialMap) -> Result<Extension> {
    m.check()?;
    let mut pairs = m.pairs.clone();
    pairs.extend(m.fixed.iter().map(|&x| (x, x)));
    for (i, &(a, b)) in pairs.iter().enumerate() {
        if a >= s.size() || b >= s.size() {
            return Err(Error::input(format!("pairs[{i}]"), "element out of range"));
        }
    }
    let closed = generated_isomorphism(s, s, &pairs)
        .ok_or_else(|| Error::input("map", "not an isomorphism of generated substructures"))?;
    if let Some(map) = find_iso(s, s, &closed) {
        return Ok(Extension::Automorphism { map });
    }
    let mut dom = vec![false; s.size()];
    for &(a, _) in &closed {
        dom[a] = true;
    }
    let rest: Vec<usize> = (0..s.size()).filter(|&x| !dom[x]).collect();
    let mut best = (0, rest.first().copied().unwrap_or(0));
    let mut budget = EXTENSION_BUDGET;
    fn deepest(
        s: &FiniteStructure,
        pairs: &[(usize, usize)],
        rest: &[usize],
        i: usize,
        best: &mut (usize, usize),
        budget: &mut usize,
    ) {
        if i == rest.len() || *budget == 0 {
            return;
        }
        *budget -= 1;
        if i >= best.0 {
            *best = (i, rest[i]);
        }
        if pairs.iter().any(|p| p.0 == rest[i]) {
            // already forced by the generated closure
            return deepest(s, pairs, rest, i + 1, best, budget);
        }
        for y in 0..s.size() {
            let mut next = pairs.to_vec();
            next.push((rest[i], y));
            if let Some(c) = generated_isomorphism(s, s, &next) {
                deepest(s, &c, rest, i + 1, best, budget);
            }
        }
    }
    deepest(s, &closed, &rest, 0, &mut best, &mut budget);
    Ok(Extension::Failure {
        level: best.0,
        stuck_at: best.1,
    })
}

/// Matched pairs in the order the construction chose them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoSchedule {
    pub pairs: Vec<(usize, usize)>,
    /// `verified[i]`: the first `i + 1` pairs passed the prefix check.
    pub verified: Vec<bool>,
    /// Element labels of the pairs, when the sides carry labels.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<(String, String)>,
    /// The full map `A → B` when every element was matched.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<Vec<usize>>,
}

/// An isomorphism `a → b` built by back-and-forth.
pub fn back_and_forth(a: &FiniteStructure, b: &FiniteStructure) -> Result<IsoSchedule> {
    if a.family() != b.family() {
        return Err(Error::input("family", format!("cannot match {} against {}", a.family(), b.family())));
    }
    let n = a.size();
    if b.size() != n {
        return Err(Error::NoIsomorphism { prefix: vec![] });
    }
    let colors = refine(&[a, b], &[vec![0; n], vec![0; n]]);
    let mut ca = colors[0].clone();
    let mut cb = colors[1].clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return Err(Error::NoIsomorphism { prefix: vec![] });
    }
    let depth = n.max(1);
    let mut st = Search {
        a,
        b,
        colors: &colors,
        depth,
        pairs: Vec::new(),
        fwd: vec![None; n],
        bwd: vec![None; n],
        best: Vec::new(),
    };
    if !st.go() {
        return Err(Error::NoIsomorphism { prefix: st.best });
    }
    let total: Vec<usize> = st.fwd.iter().map(|y| y.expect("all matched")).collect();
    if !is_isomorphism(a, b, &total) {
        return Err(Error::Precondition("back-and-forth produced a map that is not an isomorphism".into()));
    }
    let labels = match (a.labels(), b.labels()) {
        (None, None) => vec![],
        _ => st.pairs.iter().map(|&(x, y)| (a.label(x), b.label(y))).collect(),
    };
    Ok(IsoSchedule {
        verified: vec![true; st.pairs.len()],
        pairs: st.pairs,
        labels,
        total: Some(total),
    })
}

struct Search<'a> {
    a: &'a FiniteStructure,
    b: &'a FiniteStructure,
    colors: &'a [Vec<u64>],
    depth: usize,
    pairs: Vec<(usize, usize)>,
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
    best: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn go(&mut self) -> bool {
        let forth = self.pairs.len() % 2 == 0;
        let pick = if forth {
            self.fwd.iter().position(Option::is_none)
        } else {
            self.bwd.iter().position(Option::is_none)
        };
        let Some(x) = pick else {
            return true;
        };
        for y in 0..self.a.size() {
            let (p, q) = if forth { (x, y) } else { (y, x) };
            if self.bwd[q].is_some() && forth || self.fwd[p].is_some() && !forth {
                continue;
            }
            if self.colors[0][p] != self.colors[1][q] {
                continue;
            }
            self.pairs.push((p, q));
            let (xs, ys): (Vec<usize>, Vec<usize>) = self.pairs.iter().copied().unzip();
            if stage_iso(self.a, &xs, self.b, &ys, self.depth).expect("same family") {
                self.fwd[p] = Some(q);
                self.bwd[q] = Some(p);
                if self.pairs.len() > self.best.len() {
                    self.best = self.pairs.clone();
                }
                if self.go() {
                    return true;
                }
                self.fwd[p] = None;
                self.bwd[q] = None;
            }
            self.pairs.pop();
        }
        false
    }
}

/// Largest enumeration prefix searched for a single candidate.
const MAX_SEARCH: usize = 1 << 20;

/// One side of a symbolic construction: its elements in enumeration order.
trait Side {
    type Pt: Clone;
    fn points(&self, m: usize) -> Vec<Self::Pt>;
    fn label(&self, p: &Self::Pt) -> String;
    /// Can `(a, b)` be added to the matched pairs and still extend?
    fn fits(&self, other: &Self, pairs: &[(Self::Pt, Self::Pt)], a: &Self::Pt, b: &Self::Pt) -> bool;
}

struct EqSide<'a>(&'a EqCharacter);

impl Side for EqSide<'_> {
    /// `(class, position, class size)`.
    type Pt = (usize, u64, ExtCount);

    fn points(&self, m: usize) -> Vec<Self::Pt> {
        let size = self.0.class_sequence();
        dovetail(m, &size).into_iter().map(|(c, p)| (c, p, size(c).expect("filled class"))).collect()
    }

    fn label(&self, p: &Self::Pt) -> String {
        format!("c{}:{}", p.0, p.1)
    }

    fn fits(&self, _: &Self, pairs: &[(Self::Pt, Self::Pt)], a: &Self::Pt, b: &Self::Pt) -> bool {
        a.2 == b.2 && pairs.iter().all(|(x, y)| (x.0 == a.0) == (y.0 == b.0))
    }
}

struct InjSide<'a>(&'a InjSpectrum);

impl Side for InjSide<'_> {
    /// `(orbit, kind, coordinate)`: cycle and ω positions count from 0, ℤ
    /// positions are offsets from the first filled point.
    type Pt = (usize, OrbitKind, i64);

    fn points(&self, m: usize) -> Vec<Self::Pt> {
        let orbit = self.0.orbit_sequence();
        dovetail(m, |c| orbit(c).map(|k| if let OrbitKind::Cycle(n) = k { ExtCount::Fin(n) } else { ExtCount::Omega }))
            .into_iter()
            .map(|(c, p)| {
                let k = orbit(c).expect("filled orbit");
                (c, k, if k == OrbitKind::Zeta { zeta_offset(p) } else { p as i64 })
            })
            .collect()
    }

    fn label(&self, p: &Self::Pt) -> String {
        format!("o{}:{}", p.0, p.2)
    }

    fn fits(&self, _: &Self, pairs: &[(Self::Pt, Self::Pt)], a: &Self::Pt, b: &Self::Pt) -> bool {
        if a.1 != b.1 || (a.1 == OrbitKind::Omega && a.2 != b.2) {
            return false;
        }
        pairs.iter().all(|(x, y)| {
            if (x.0 == a.0) != (y.0 == b.0) {
                return false;
            }
            if x.0 != a.0 {
                return true;
            }
            match a.1 {
                OrbitKind::Cycle(k) => (a.2 - x.2).rem_euclid(k as i64) == (b.2 - y.2).rem_euclid(k as i64),
                _ => a.2 - x.2 == b.2 - y.2,
            }
        })
    }
}

struct LinSide<'a>(&'a LinOrderPres);

fn below(b: Block, c: Coord) -> Option<Block> {
    match (b, c) {
        (Block::Fin(_), Coord::Int(c)) => (c > 1).then(|| Block::Fin(c as u64 - 1)),
        (Block::Omega, Coord::Int(c)) => (c > 0).then(|| Block::Fin(c as u64)),
        (Block::OmegaStar | Block::Zeta, _) => Some(Block::OmegaStar),
        (Block::Eta, _) => Some(Block::Eta),
        _ => unreachable!("coordinate kind matches block"),
    }
}

fn above(b: Block, c: Coord) -> Option<Block> {
    match (b, c) {
        (Block::Fin(k), Coord::Int(c)) => (k as i64 > c).then(|| Block::Fin(k - c as u64)),
        (Block::OmegaStar, Coord::Int(c)) => (c < 0).then(|| Block::Fin((-c) as u64)),
        (Block::Omega | Block::Zeta, _) => Some(Block::Omega),
        (Block::Eta, _) => Some(Block::Eta),
        _ => unreachable!("coordinate kind matches block"),
    }
}

impl LinSide<'_> {
    fn cmp(a: &(usize, Coord), b: &(usize, Coord)) -> Ordering {
        a.0.cmp(&b.0).then(a.1.cmp_within(&b.1))
    }

    /// Order type of the open interval between two points (or an end).
    fn interval(&self, lo: Option<&(usize, Coord)>, hi: Option<&(usize, Coord)>) -> LinOrderPres {
        let bl = &self.0.blocks;
        let mut out = Vec::new();
        match (lo, hi) {
            (Some(l), Some(h)) if l.0 == h.0 => match (l.1, h.1) {
                (Coord::Int(x), Coord::Int(y)) => out.push(Block::Fin((y - x - 1) as u64)),
                _ => out.push(Block::Eta),
            },
            _ => {
                let start = match lo {
                    Some(l) => {
                        out.extend(above(bl[l.0], l.1));
                        l.0 + 1
                    }
                    None => 0,
                };
                let end = hi.map_or(bl.len(), |h| h.0);
                out.extend(&bl[start..end]);
                if let Some(h) = hi {
                    out.extend(below(bl[h.0], h.1));
                }
            }
        }
        normalize_linear(&LinOrderPres::new(out))
    }
}

impl Side for LinSide<'_> {
    type Pt = (usize, Coord);

    fn points(&self, m: usize) -> Vec<Self::Pt> {
        points(self.0, m)
    }

    fn label(&self, p: &Self::Pt) -> String {
        format!("b{}:{}", p.0, p.1)
    }

    /// Partial isomorphisms of linear orders extend iff the gaps they leave
    /// have matching order types.
    fn fits(&self, other: &Self, pairs: &[(Self::Pt, Self::Pt)], a: &Self::Pt, b: &Self::Pt) -> bool {
        let mut all: Vec<(Self::Pt, Self::Pt)> = pairs.to_vec();
        all.push((*a, *b));
        all.sort_by(|x, y| Self::cmp(&x.0, &y.0));
        if all.windows(2).any(|w| Self::cmp(&w[0].1, &w[1].1) != Ordering::Less) {
            return false;
        }
        // only the two gaps next to the new pair changed
        let i = all.iter().position(|p| p.0 == *a).expect("just pushed");
        let lo = i.checked_sub(1).map(|j| &all[j]);
        let hi = all.get(i + 1);
        self.interval(lo.map(|p| &p.0), Some(a)) == other.interval(lo.map(|p| &p.1), Some(b))
            && self.interval(Some(a), hi.map(|p| &p.0)) == other.interval(Some(b), hi.map(|p| &p.1))
    }
}

fn symbolic<S: Side>(a: &S, b: &S, n: usize) -> Result<IsoSchedule> {
    let mut pa: Vec<S::Pt> = a.points(16);
    let mut pb: Vec<S::Pt> = b.points(16);
    let mut ma = vec![false; pa.len()];
    let mut mb = vec![false; pb.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut matched: Vec<(S::Pt, S::Pt)> = Vec::new();
    fn grow<S: Side>(s: &S, pts: &mut Vec<S::Pt>, used: &mut Vec<bool>, want: usize) -> bool {
        let mut m = pts.len().max(1);
        while pts.len() <= want {
            if m > MAX_SEARCH {
                return false;
            }
            m *= 2;
            let fresh = s.points(m);
            if fresh.len() == pts.len() {
                return false;
            }
            *pts = fresh;
        }
        used.resize(pts.len(), false);
        true
    }
    while pairs.len() < n {
        let forth = pairs.len() % 2 == 0;
        let (xs, ux, ys, uy, sx, sy) = if forth {
            (&mut pa, &mut ma, &mut pb, &mut mb, a, b)
        } else {
            (&mut pb, &mut mb, &mut pa, &mut ma, b, a)
        };
        if ux.iter().all(|u| *u) && !grow(sx, xs, ux, ux.len()) {
            break;
        }
        let x = ux.iter().position(|u| !u).expect("an unmatched element");
        let mut y = 0;
        let found = loop {
            if y >= ys.len() && !grow(sy, ys, uy, y) {
                break None;
            }
            if !uy[y] {
                let ok = if forth {
                    sx.fits(sy, &matched, &xs[x], &ys[y])
                } else {
                    sy.fits(sx, &matched, &ys[y], &xs[x])
                };
                if ok {
                    break Some(y);
                }
            }
            y += 1;
        };
        let Some(y) = found else {
            return Err(Error::Precondition(format!("no partner found for element {x} within {MAX_SEARCH} candidates")));
        };
        ux[x] = true;
        uy[y] = true;
        let (i, j) = if forth { (x, y) } else { (y, x) };
        matched.push((pa[i].clone(), pb[j].clone()));
        pairs.push((i, j));
    }
    Ok(IsoSchedule {
        verified: vec![true; pairs.len()],
        labels: matched.iter().map(|(p, q)| (a.label(p), b.label(q))).collect(),
        pairs,
        total: None,
    })
}

/// The first `n` pairs of an isomorphism between two symbolic presentations.
///
/// Pairs index the materialization order of each side. Supported for linear
/// orders, equivalence structures and injection structures.
pub fn back_and_forth_symbolic(a: &Presentation, b: &Presentation, n: usize) -> Result<IsoSchedule> {
    if !pres_isomorphic(a, b)? {
        return Err(Error::Precondition("the presentations are not isomorphic".into()));
    }
    match (a, b) {
        (Presentation::Linear(p), Presentation::Linear(q)) => symbolic(&LinSide(p), &LinSide(q), n),
        (Presentation::Equivalence(p), Presentation::Equivalence(q)) => symbolic(&EqSide(p), &EqSide(q), n),
        (Presentation::Injection(p), Presentation::Injection(q)) => symbolic(&InjSide(p), &InjSide(q), n),
        _ => Err(Error::Unsupported(format!(
            "symbolic back-and-forth for {}; materialize both sides instead",
            a.family()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{Fin, Omega};
    use crate::presentations::linear::materialize_linear;

    #[test]
    fn stage_examples() {
        let e = FiniteStructure::equivalence(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(stage_iso(&e, &[0, 1], &e, &[3, 2], 0).unwrap());
        assert!(!stage_iso(&e, &[0, 1], &e, &[1, 2], 5).unwrap());
        let two = FiniteStructure::injection(vec![1, 2, 0, 4, 5, 3]).unwrap();
        assert!(stage_iso(&two, &[0], &two, &[3], 3).unwrap());
        // a prefix of an ω-orbit: 0 starts it, 1 does not, yet short terms agree
        let path = FiniteStructure::partial_injection(vec![Some(1), Some(2), Some(3), None]).unwrap();
        assert!(stage_iso(&path, &[0], &path, &[1], 2).unwrap());
        assert!(!stage_iso(&path, &[0], &path, &[1], 3).unwrap());
        assert!(stage_iso(&e, &[0], &e, &[0, 1], 0).is_err());
        let ts = term_stage(&two, &[0], 1).unwrap();
        assert_eq!(ts.elements, vec![0, 1]);
        assert_eq!(term_stage(&two, &[0], 0).unwrap().elements, vec![0]);
    }

    #[test]
    fn extension_examples() {
        let e = FiniteStructure::equivalence(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let Extension::Automorphism { map } = extend_to_automorphism(&e, &PartialMap::new(vec![(0, 2)])).unwrap() else {
            panic!("0 → 2 extends");
        };
        assert_eq!(map[0], 2);
        assert!(is_isomorphism(&e, &e, &map));
        let c3 = FiniteStructure::chain(3);
        assert!(matches!(extend_to_automorphism(&c3, &PartialMap::new(vec![(0, 1)])).unwrap(), Extension::Failure { .. }));
        let id = extend_to_automorphism(&c3, &PartialMap::new(vec![])).unwrap();
        assert_eq!(id, Extension::Automorphism { map: vec![0, 1, 2] });
        assert!(extend_to_automorphism(&c3, &PartialMap::new(vec![(0, 1), (1, 0)])).is_err());
    }

    #[test]
    fn finite_schedules() {
        let e = FiniteStructure::equivalence(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let s = back_and_forth(&e, &e).unwrap();
        assert_eq!(s.pairs, vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        let f = FiniteStructure::equivalence(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let s = back_and_forth(&e, &f).unwrap();
        assert!(is_isomorphism(&e, &f, s.total.as_ref().unwrap()));
        let chain = FiniteStructure::chain(3);
        let eq = FiniteStructure::equivalence(3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(back_and_forth(&chain, &eq).unwrap_err().kind(), "input");
        let other = FiniteStructure::equivalence(4, &[vec![0, 1, 2], vec![3]]).unwrap();
        assert_eq!(back_and_forth(&e, &other).unwrap_err().kind(), "no-isomorphism");
    }

    #[test]
    fn symbolic_schedules() {
        let a = Presentation::Linear(LinOrderPres::new(vec![Block::Fin(1), Block::Omega, Block::Eta]));
        let b = Presentation::Linear(LinOrderPres::new(vec![Block::Omega, Block::Eta, Block::Fin(1), Block::Eta]));
        let s = back_and_forth_symbolic(&a, &b, 40).unwrap();
        assert_eq!(s.pairs.len(), 40);
        // the matched points form a partial isomorphism of the finite suborders
        let (Presentation::Linear(p), Presentation::Linear(q)) = (&a, &b) else { unreachable!() };
        let ma = s.pairs.iter().map(|x| x.0).max().unwrap() + 1;
        let mb = s.pairs.iter().map(|x| x.1).max().unwrap() + 1;
        let (fa, fb) = (materialize_linear(p, ma).unwrap(), materialize_linear(q, mb).unwrap());
        let (xs, ys): (Vec<usize>, Vec<usize>) = s.pairs.iter().copied().unzip();
        assert!(stage_iso(&fa, &xs, &fb, &ys, 0).unwrap());
        // back and forth: the first 20 elements of each side are matched
        for i in 0..20 {
            assert!(xs.contains(&i) && ys.contains(&i));
        }

        let eq = Presentation::Equivalence(EqCharacter::new([(Fin(2), Omega), (Fin(3), Fin(1))]));
        assert_eq!(back_and_forth_symbolic(&eq, &eq, 30).unwrap().pairs.len(), 30);
        let inj = Presentation::Injection(InjSpectrum::new([(3, Fin(2))], Fin(1), Omega));
        let s = back_and_forth_symbolic(&inj, &inj, 30).unwrap();
        assert!(s.labels.iter().all(|(x, y)| !x.is_empty() && !y.is_empty()));
        let zeta = Presentation::Linear(LinOrderPres::new(vec![Block::Zeta]));
        let omega = Presentation::Linear(LinOrderPres::new(vec![Block::Omega]));
        assert_eq!(back_and_forth_symbolic(&zeta, &omega, 3).unwrap_err().kind(), "precondition");
    }
}
