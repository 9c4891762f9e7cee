//! Backtracking isomorphism search with colour refinement.

use std::collections::BTreeMap;

use crate::structure::FiniteStructure;

/// Edge pattern between `x` and `y` inside one structure.
fn pattern(s: &FiniteStructure, x: usize, y: usize) -> u64 {
    let mut p = 0u64;
    let mut bit = 0;
    for r in 0..s.relations().len() {
        p |= (s.rel(r, x, y) as u64) << bit;
        p |= (s.rel(r, y, x) as u64) << (bit + 1);
        bit += 2;
    }
    for k in 0..s.functions().len() {
        p |= ((s.func(k, x) == Some(y)) as u64) << bit;
        p |= ((s.func(k, y) == Some(x)) as u64) << (bit + 1);
        bit += 2;
    }
    p
}

fn self_pattern(s: &FiniteStructure, x: usize) -> u64 {
    let mut p = pattern(s, x, x);
    for k in 0..s.functions().len() {
        p = (p << 1) | s.func(k, x).is_some() as u64;
    }
    p
}

/// Stable colours for the elements of several structures at once.
///
/// `tags[i][x]` individualizes element `x` of structure `i` (0 = untagged).
/// Colour ids are assigned by sorting signatures, so they are invariant under
/// isomorphisms respecting the tags.
pub fn refine(structs: &[&FiniteStructure], tags: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut colors: Vec<Vec<u64>> = structs
        .iter()
        .zip(tags)
        .map(|(s, t)| (0..s.size()).map(|x| (t[x] << 32) | self_pattern(s, x)).collect())
        .collect();
    colors = renumber(&colors.iter().map(|c| c.iter().map(|&v| vec![v]).collect()).collect::<Vec<Vec<Vec<u64>>>>());
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<Vec<Vec<u64>>> = structs
            .iter()
            .zip(&colors)
            .map(|(s, col)| {
                (0..s.size())
                    .map(|x| {
                        let mut nb: Vec<u64> = (0..s.size())
                            .filter(|&y| y != x)
                            .map(|y| (col[y] << 32) | pattern(s, x, y))
                            .collect();
                        nb.sort_unstable();
                        let mut sig = vec![col[x]];
                        sig.extend(nb);
                        sig
                    })
                    .collect()
            })
            .collect();
        let next = renumber(&sigs);
        let c = count_classes(&next);
        colors = next;
        if c == classes {
            return colors;
        }
        classes = c;
    }
}

fn renumber(sigs: &[Vec<Vec<u64>>]) -> Vec<Vec<u64>> {
    let mut ids: BTreeMap<&Vec<u64>, u64> = BTreeMap::new();
    for s in sigs {
        for v in s {
            ids.insert(v, 0);
        }
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i as u64;
    }
    sigs.iter()
        .map(|s| s.iter().map(|v| ids[v]).collect())
        .collect()
}

fn count_classes(colors: &[Vec<u64>]) -> usize {
    let mut all: Vec<u64> = colors.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Local compatibility of `x ↦ y` with the pairs already placed.
fn compatible(
    a: &FiniteStructure,
    b: &FiniteStructure,
    map: &[Option<usize>],
    x: usize,
    y: usize,
) -> bool {
    if self_pattern(a, x) != self_pattern(b, y) {
        return false;
    }
    map.iter().enumerate().all(|(x2, m)| match m {
        Some(y2) => pattern(a, x, x2) == pattern(b, y, *y2),
        None => true,
    })
}

/// Enumerates isomorphisms `a → b` extending `forced`, in lexicographic order
/// of the image vector. `visit` returns `false` to stop early.
pub fn for_each_iso(
    a: &FiniteStructure,
    b: &FiniteStructure,
    forced: &[(usize, usize)],
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    let n = a.size();
    if a.family() != b.family() || n != b.size() {
        return;
    }
    let mut ta = vec![0u64; n];
    let mut tb = vec![0u64; n];
    for (i, &(x, y)) in forced.iter().enumerate() {
        if x >= n || y >= n {
            return;
        }
        ta[x] = i as u64 + 1;
        tb[y] = i as u64 + 1;
    }
    let cols = refine(&[a, b], &[ta, tb]);
    let (ca, cb) = (&cols[0], &cols[1]);
    let mut hist_a = BTreeMap::new();
    let mut hist_b = BTreeMap::new();
    for x in 0..n {
        *hist_a.entry(ca[x]).or_insert(0) += 1;
        *hist_b.entry(cb[x]).or_insert(0) += 1;
    }
    if hist_a != hist_b {
        return;
    }
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    let mut out = vec![0; n];
    fn go(
        a: &FiniteStructure,
        b: &FiniteStructure,
        ca: &[u64],
        cb: &[u64],
        x: usize,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        out: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = a.size();
        if x == n {
            return visit(out);
        }
        for y in 0..n {
            if used[y] || ca[x] != cb[y] || !compatible(a, b, map, x, y) {
                continue;
            }
            map[x] = Some(y);
            used[y] = true;
            out[x] = y;
            let cont = go(a, b, ca, cb, x + 1, map, used, out, visit);
            map[x] = None;
            used[y] = false;
            if !cont {
                return false;
            }
        }
        true
    }
    go(a, b, ca, cb, 0, &mut map, &mut used, &mut out, &mut visit);
}

/// First isomorphism extending `forced`, if any.
pub fn find_iso(
    a: &FiniteStructure,
    b: &FiniteStructure,
    forced: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_iso(a, b, forced, |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// All automorphisms fixing `fixed` pointwise, up to `limit` of them.
/// Returns `None` when the limit is exceeded.
pub fn automorphisms(s: &FiniteStructure, fixed: &[usize], limit: usize) -> Option<Vec<Vec<usize>>> {
    let forced: Vec<(usize, usize)> = fixed.iter().map(|&x| (x, x)).collect();
    let mut out = Vec::new();
    let mut over = false;
    for_each_iso(s, s, &forced, |m| {
        if out.len() == limit {
            over = true;
            return false;
        }
        out.push(m.to_vec());
        true
    });
    (!over).then_some(out)
}

/// True when `perm` is an automorphism of `s`.
pub fn is_automorphism(s: &FiniteStructure, perm: &[usize]) -> bool {
    is_isomorphism(s, s, perm)
}

/// Edge-by-edge check that `perm` is an isomorphism `a → b`.
pub fn is_isomorphism(a: &FiniteStructure, b: &FiniteStructure, perm: &[usize]) -> bool {
    let n = a.size();
    if a.family() != b.family() || b.size() != n || perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in perm {
        if y >= n || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    (0..a.relations().len()).all(|r| {
        (0..n).all(|x| (0..n).all(|y| a.rel(r, x, y) == b.rel(r, perm[x], perm[y])))
    }) && (0..a.functions().len())
        .all(|k| (0..n).all(|x| a.func(k, x).map(|v| perm[v]) == b.func(k, perm[x])))
}

/// Canonical code: the least encoding over colour-respecting relabellings.
///
/// Two structures of the same family get equal codes iff they are isomorphic.
pub fn canonical_code(s: &FiniteStructure) -> Vec<u8> {
    let n = s.size();
    let cols = refine(&[s], &[vec![0; n]]).remove(0);
    // positions are filled cell by cell in colour order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| cols[x]);
    let slot_color: Vec<u64> = order.iter().map(|&x| cols[x]).collect();
    let mut best: Option<Vec<u8>> = None;
    let mut at = vec![usize::MAX; n]; // position -> element
    let mut used = vec![false; n];
    fn encode(s: &FiniteStructure, at: &[usize]) -> Vec<u8> {
        let n = at.len();
        let mut pos = vec![0usize; n];
        for (p, &x) in at.iter().enumerate() {
            pos[x] = p;
        }
        let mut code = Vec::new();
        for r in 0..s.relations().len() {
            for p in 0..n {
                for q in 0..n {
                    code.push(s.rel(r, at[p], at[q]) as u8);
                }
            }
        }
        for k in 0..s.functions().len() {
            for p in 0..n {
                code.push(s.func(k, at[p]).map_or(255, |v| pos[v] as u8));
            }
        }
        code
    }
    fn go(
        s: &FiniteStructure,
        cols: &[u64],
        slot_color: &[u64],
        p: usize,
        at: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut Option<Vec<u8>>,
    ) {
        let n = s.size();
        if p == n {
            let code = encode(s, at);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        for x in 0..n {
            if !used[x] && cols[x] == slot_color[p] {
                used[x] = true;
                at[p] = x;
                go(s, cols, slot_color, p + 1, at, used, best);
                used[x] = false;
            }
        }
    }
    go(s, &cols, &slot_color, 0, &mut at, &mut used, &mut best);
    let mut code = vec![n as u8];
    code.extend(best.unwrap_or_default());
    code
}
