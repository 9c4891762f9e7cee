//! Test-side reference code, kept independent of the library's search.
//!
//! The naive oracle tries every bijection between every pair of generated
//! substructures against every permutation of the universe. It is slow but
//! hard to get wrong, and it is what the frozen fixtures were made with.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use homog_core::ext::{ExtCount, Fin, Omega};
use homog_core::presentations::TreePres;
use homog_core::generators::Schedule;
use homog_core::{Family, FiniteStructure};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(p: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if p.len() == used.len() {
            out.push(p.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                p.push(x);
                go(p, used, out);
                p.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn signature(s: &FiniteStructure) -> (usize, usize) {
    (s.family().relation_count(), s.family().function_count())
}

/// `perm` maps `a` onto `b` preserving relations, functions and constants.
pub fn preserves(a: &FiniteStructure, b: &FiniteStructure, perm: &[usize]) -> bool {
    let n = a.size();
    if b.size() != n || perm.len() != n || a.family() != b.family() {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in perm {
        if y >= n || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    let (rels, fns) = signature(a);
    for r in 0..rels {
        for x in 0..n {
            for y in 0..n {
                if a.rel(r, x, y) != b.rel(r, perm[x], perm[y]) {
                    return false;
                }
            }
        }
    }
    for k in 0..fns {
        for x in 0..n {
            if a.func(k, x).map(|y| perm[y]) != b.func(k, perm[x]) {
                return false;
            }
        }
    }
    let ca: Vec<usize> = a.constants().iter().map(|&c| perm[c]).collect();
    ca == b.constants()
}

/// Smallest superset of `mask` closed under the functions and holding the constants.
fn closure(s: &FiniteStructure, mut mask: u32) -> u32 {
    for c in s.constants() {
        mask |= 1 << c;
    }
    let (_, fns) = signature(s);
    loop {
        let mut next = mask;
        for x in 0..s.size() {
            if mask >> x & 1 == 1 {
                for k in 0..fns {
                    if let Some(y) = s.func(k, x) {
                        next |= 1 << y;
                    }
                }
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|x| mask >> x & 1 == 1).collect()
}

/// Whether every isomorphism between generated substructures that contain
/// `set` and fix it pointwise is the restriction of an automorphism.
pub fn naive_exceptional(s: &FiniteStructure, set: &[usize]) -> bool {
    let n = s.size();
    assert!(n <= 8, "the naive oracle is for tiny structures");
    let base: u32 = set.iter().fold(0, |m, &x| m | 1 << x);
    let fixed = closure(s, base);
    let autos: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| members(fixed, n).iter().all(|&x| p[x] == x) && preserves(s, s, p))
        .collect();
    let closed: Vec<u32> = {
        let mut v: Vec<u32> = (0u32..1 << n).map(|m| closure(s, m | base)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (rels, fns) = signature(s);
    for &d1 in &closed {
        let dom = members(d1, n);
        let restrictions: HashSet<Vec<usize>> = autos.iter().map(|p| dom.iter().map(|&x| p[x]).collect()).collect();
        for &d2 in &closed {
            if d1.count_ones() != d2.count_ones() {
                continue;
            }
            let img = members(d2, n);
            for p in permutations(dom.len()) {
                let phi: Vec<usize> = p.iter().map(|&i| img[i]).collect();
                let at = |x: usize| phi[dom.iter().position(|&y| y == x).unwrap()];
                let mut iso = members(fixed, n).iter().all(|&x| at(x) == x);
                for (i, &x) in dom.iter().enumerate() {
                    if !iso {
                        break;
                    }
                    for (j, &y) in dom.iter().enumerate() {
                        if (0..rels).any(|r| s.rel(r, x, y) != s.rel(r, phi[i], phi[j])) {
                            iso = false;
                        }
                    }
                    if (0..fns).any(|k| s.func(k, x).map(at) != s.func(k, phi[i])) {
                        iso = false;
                    }
                }
                if iso && !restrictions.contains(&phi) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn naive_uh(s: &FiniteStructure) -> bool {
    naive_exceptional(s, &[])
}

/// Ultrahomogeneity of a finite tree under the predecessor function, with no
/// size cap. Generated substructures are the subtrees closed downwards, and
/// an isomorphism between two of them is an embedding of the first whose
/// image is the second; it must come from an automorphism.
pub fn pred_tree_uh(parent: &[Option<usize>]) -> bool {
    let n = parent.len();
    let root = parent.iter().position(Option::is_none).expect("a root");
    let mut kids = vec![vec![]; n];
    for (x, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            kids[*p].push(x);
        }
    }
    // breadth-first order, so a parent is always placed before its children
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        order.extend(kids[order[i]].iter().copied());
        i += 1;
    }
    let embeddings = |dom: &[usize]| -> Vec<Vec<usize>> {
        fn go(
            i: usize,
            dom: &[usize],
            parent: &[Option<usize>],
            kids: &[Vec<usize>],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if i == dom.len() {
                out.push(dom.iter().map(|&x| map[x]).collect());
                return;
            }
            let x = dom[i];
            let cands: Vec<usize> = match parent[x] {
                None => vec![x],
                Some(p) => kids[map[p]].clone(),
            };
            for y in cands {
                if !used[y] {
                    used[y] = true;
                    map[x] = y;
                    go(i + 1, dom, parent, kids, map, used, out);
                    used[y] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(0, dom, parent, &kids, &mut vec![usize::MAX; n], &mut vec![false; n], &mut out);
        out
    };
    let autos = embeddings(&order);
    // every downward-closed set, each listed in breadth-first order
    let mut ok = true;
    let mut chosen = vec![false; n];
    fn each_down_set(
        i: usize,
        order: &[usize],
        parent: &[Option<usize>],
        chosen: &mut Vec<bool>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == order.len() {
            let dom: Vec<usize> = order.iter().copied().filter(|&x| chosen[x]).collect();
            return f(&dom);
        }
        let x = order[i];
        if parent[x].map_or(true, |p| chosen[p]) {
            chosen[x] = true;
            if !each_down_set(i + 1, order, parent, chosen, f) {
                return false;
            }
            chosen[x] = false;
        }
        // the root is a constant and always present
        if parent[x].is_none() {
            return true;
        }
        each_down_set(i + 1, order, parent, chosen, f)
    }
    let mut idx = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        idx[x] = i;
    }
    each_down_set(0, &order, parent, &mut chosen, &mut |dom| {
        let restrictions: HashSet<Vec<usize>> =
            autos.iter().map(|a| dom.iter().map(|&x| a[idx[x]]).collect()).collect();
        ok = embeddings(dom).iter().all(|e| restrictions.contains(e));
        ok
    });
    ok
}

/// A uniformly random parent array on `0..n` with root 0.
pub fn random_parents(n: usize, rng: &mut ChaCha8Rng) -> Vec<Option<usize>> {
    (0..n).map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) }).collect()
}

fn classes_of(ids: &[usize]) -> Vec<Vec<usize>> {
    let mut by = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for (x, &c) in ids.iter().enumerate() {
        by.entry(c).or_default().push(x);
    }
    by.into_values().collect()
}

pub fn random_structure(f: Family, n: usize, rng: &mut ChaCha8Rng) -> FiniteStructure {
    match f {
        Family::Order => {
            let mut seq: Vec<usize> = (0..n).collect();
            seq.shuffle(rng);
            FiniteStructure::order_from_sequence(&seq).unwrap()
        }
        Family::Equivalence => {
            let ids: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            FiniteStructure::equivalence(n, &classes_of(&ids)).unwrap()
        }
        Family::Injection => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            FiniteStructure::injection(perm).unwrap()
        }
        Family::Graph => {
            let p = rng.gen_range(0.2..0.8);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            FiniteStructure::graph(n, &edges).unwrap()
        }
        Family::TreePo => FiniteStructure::tree_po(&random_parents(n, rng)).unwrap(),
        Family::TreePred => FiniteStructure::tree_pred(&random_parents(n, rng)).unwrap(),
        Family::NestedEq(k) => {
            let mut ids: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut parts = vec![classes_of(&ids)];
            for _ in 1..k {
                let up: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                ids = ids.iter().map(|&c| up[c]).collect();
                parts.push(classes_of(&ids));
            }
            parts.reverse();
            FiniteStructure::nested(n, &parts).unwrap()
        }
    }
}

/// A random relabelling of `s`, and the permutation used.
pub fn shuffled(s: &FiniteStructure, rng: &mut ChaCha8Rng) -> (FiniteStructure, Vec<usize>) {
    let mut perm: Vec<usize> = (0..s.size()).collect();
    perm.shuffle(rng);
    (s.relabel(&perm), perm)
}

/// An isomorphism invariant computed without any search: per element, the
/// number of relation neighbours each way, the preimage count and the orbit
/// length under each function; sorted.
pub fn cheap_invariant(s: &FiniteStructure) -> Vec<Vec<usize>> {
    let n = s.size();
    let (rels, fns) = signature(s);
    let mut v: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut row = vec![];
            for r in 0..rels {
                row.push((0..n).filter(|&y| s.rel(r, x, y)).count());
                row.push((0..n).filter(|&y| s.rel(r, y, x)).count());
            }
            for k in 0..fns {
                row.push((0..n).filter(|&y| s.func(k, y) == Some(x)).count());
                let mut y = x;
                let mut steps = 0;
                while let Some(z) = s.func(k, y) {
                    steps += 1;
                    y = z;
                    if y == x || steps > n {
                        break;
                    }
                }
                row.push(steps);
            }
            row
        })
        .collect();
    v.sort();
    v
}

/// A random finite tree presentation of height at most `h`, without tails.
pub fn random_tree_pres(h: usize, rng: &mut ChaCha8Rng) -> TreePres {
    if h == 0 {
        return TreePres::leaf();
    }
    let kinds = rng.gen_range(0..=3);
    let kids: Vec<(TreePres, ExtCount)> = (0..kinds)
        .map(|_| {
            let sub = random_tree_pres(rng.gen_range(0..h), rng);
            let m = match rng.gen_range(0..4) {
                0 => Fin(1),
                1 => Fin(2),
                _ => Omega,
            };
            (sub, m)
        })
        .collect();
    TreePres::node(kids)
}

/// Each stage enumerates a fresh number with probability `p`; `bounded`
/// keeps every element entering at stage `s` below `s`.
pub fn random_schedule(stages: u64, p: f64, bounded: bool, rng: &mut ChaCha8Rng) -> Schedule {
    let mut used = BTreeSet::new();
    let mut events = vec![];
    for s in 1..=stages {
        if !rng.gen_bool(p) {
            continue;
        }
        let top = if bounded { s } else { s + 40 };
        let free: Vec<u64> = (0..top).filter(|x| !used.contains(x)).collect();
        if free.is_empty() {
            continue;
        }
        let x = free[rng.gen_range(0..free.len())];
        used.insert(x);
        events.push((x, s));
    }
    Schedule::new(events).unwrap()
}

/// Reflexive, antisymmetric, transitive, with a least element and chains as down-sets.
pub fn naive_tree_order(n: usize, r: impl Fn(usize, usize) -> bool) -> bool {
    let order = (0..n).all(|a| r(a, a))
        && (0..n).all(|a| (0..n).all(|b| a == b || !(r(a, b) && r(b, a))))
        && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r(a, b) && r(b, c)) || r(a, c))));
    let chains = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r(a, c) && r(b, c)) || r(a, b) || r(b, a))));
    order && chains && (n == 0 || (0..n).any(|x| (0..n).all(|y| r(x, y))))
}
