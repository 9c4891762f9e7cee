//! Trees of finite height under the partial order `≺`, with the root as a
//! constant.
//!
//! A weakly ultrahomogeneous tree has finitely many nodes of rank ≥ 1. The
//! exceptional-set test only ever has to look at those nodes plus finitely
//! many leaves, so it runs on a finite skeleton of the presentation.
//!
//! Conditions (i) and (ii) alone let a leaf be mapped to a leaf under another
//! parent (e.g. `0→1`, `0→2→{3,4}` with `K = {3}`), so the test adds (iii):
//! leaves outside `K` with different parents have different `L_K`.

use std::collections::HashMap;

use serde::Serialize;

use super::{anchors, ExceptionalDescriptor, Report, Verdict};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::presentations::tree::TreePres;
use crate::structure::{Family, FiniteStructure};

/// Minimal sets are searched over at most this many candidate nodes.
const MAX_CANDIDATES: usize = 16;
/// Nodes are listed by path only up to this many.
const MAX_LISTED: u64 = 64;

/// Human-readable node path: `e` for the root, else fill indices joined by dots.
pub fn path_name(p: &[usize]) -> String {
    if p.is_empty() {
        "e".into()
    } else {
        p.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Rank of the root; `None` when a tail hides it (it is then at least 2).
pub fn rank(t: &TreePres) -> Option<usize> {
    (!t.has_tail()).then(|| t.height())
}

/// Number of nodes of rank ≥ 1.
pub fn inner_nodes(t: &TreePres) -> ExtCount {
    if t.tail {
        return Omega;
    }
    if t.children.is_empty() {
        return Fin(0);
    }
    Fin(1) + t.children.iter().map(|(c, m)| inner_nodes(c) * *m).sum()
}

/// Outcome of the exceptional-set test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeCheck<N> {
    pub holds: bool,
    /// `"i"`, `"ii"` or `"iii"` on failure.
    pub condition: Option<&'static str>,
    /// A pair with `K ∪ {a} ≅ K ∪ {b}` that cannot be extended: `a ≺ b` for
    /// (i) and (ii), two leaves under different parents for (iii).
    pub witness: Option<(N, N)>,
    /// `L_K(x) = {y ∈ K : y ⪯ x}` for the witness nodes.
    pub lower: Vec<(N, Vec<N>)>,
    /// `U_K(x) = {y ∈ K : x ⪯ y}` for the witness nodes.
    pub upper: Vec<(N, Vec<N>)>,
}

impl<N: Clone> TreeCheck<N> {
    fn map<M>(self, f: impl Fn(&N) -> M) -> TreeCheck<M> {
        let g = |v: Vec<(N, Vec<N>)>| v.into_iter().map(|(x, s)| (f(&x), s.iter().map(&f).collect())).collect();
        TreeCheck {
            holds: self.holds,
            condition: self.condition,
            witness: self.witness.map(|(a, b)| (f(&a), f(&b))),
            lower: g(self.lower),
            upper: g(self.upper),
        }
    }
}

/// A finite tree given by parents, with the rank ≥ 1 flags of the full tree.
struct Skeleton {
    parent: Vec<Option<usize>>,
    inner: Vec<bool>,
    root: usize,
}

impl Skeleton {
    fn below_eq(&self, a: usize, b: usize) -> bool {
        let mut x = Some(b);
        while let Some(y) = x {
            if y == a {
                return true;
            }
            x = self.parent[y];
        }
        false
    }

    fn check(&self, k: &[bool]) -> TreeCheck<usize> {
        let n = self.parent.len();
        let in_k = |x: usize| k[x] || x == self.root;
        let trace = |cond: &'static str, a: usize, b: usize| {
            let l = |x: usize| (0..n).filter(|&y| in_k(y) && self.below_eq(y, x)).collect::<Vec<_>>();
            let u = |x: usize| (0..n).filter(|&y| in_k(y) && self.below_eq(x, y)).collect::<Vec<_>>();
            TreeCheck {
                holds: false,
                condition: Some(cond),
                witness: Some((a, b)),
                lower: vec![(a, l(a)), (b, l(b))],
                upper: vec![(a, u(a)), (b, u(b))],
            }
        };
        for a in 0..n {
            if self.inner[a] && !(0..n).any(|y| in_k(y) && self.below_eq(a, y)) {
                let b = (0..n).find(|&c| self.parent[c] == Some(a)).expect("skeleton keeps a child");
                return trace("i", a, b);
            }
        }
        for b in 0..n {
            if in_k(b) {
                continue;
            }
            let mut a = self.parent[b];
            while let Some(x) = a {
                if !(0..n).any(|z| in_k(z) && self.below_eq(x, z) && !self.below_eq(b, z)) {
                    return trace("ii", x, b);
                }
                a = self.parent[x];
            }
        }
        // leaves outside K under different parents must be told apart by K
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for b in 0..n {
            if in_k(b) || self.inner[b] {
                continue;
            }
            let Some(p) = self.parent[b] else { continue };
            let low: Vec<usize> = (0..n).filter(|&y| in_k(y) && self.below_eq(y, p)).collect();
            match seen.get(&low) {
                Some(&b2) if self.parent[b2] != Some(p) => return trace("iii", b2, b),
                Some(_) => {}
                None => {
                    seen.insert(low, b);
                }
            }
        }
        TreeCheck {
            holds: true,
            condition: None,
            witness: None,
            lower: vec![],
            upper: vec![],
        }
    }
}

/// The skeleton of a weakly ultrahomogeneous presentation: every node of rank
/// ≥ 1, the requested extra paths, and one spare leaf child of each node.
fn skeleton(t: &TreePres, extra: &[Vec<usize>]) -> Result<(Skeleton, Vec<Vec<usize>>)> {
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut parent = Vec::new();
    let mut inner = Vec::new();
    fn add(
        p: Vec<usize>,
        is_inner: bool,
        paths: &mut Vec<Vec<usize>>,
        index: &mut HashMap<Vec<usize>, usize>,
        parent: &mut Vec<Option<usize>>,
        inner: &mut Vec<bool>,
    ) -> usize {
        if let Some(&i) = index.get(&p) {
            return i;
        }
        let par = (!p.is_empty()).then(|| index[&p[..p.len() - 1]]);
        let i = paths.len();
        index.insert(p.clone(), i);
        paths.push(p);
        parent.push(par);
        inner.push(is_inner);
        i
    }
    // inner nodes in preorder; finitely many because the tree is wuh
    let mut stack: Vec<(Vec<usize>, &TreePres)> = vec![(vec![], t)];
    while let Some((p, node)) = stack.pop() {
        add(p.clone(), !node.is_leaf(), &mut paths, &mut index, &mut parent, &mut inner);
        let finite = node.children.iter().filter_map(|(_, m)| m.finite()).sum::<u64>() as usize;
        for j in (0..finite).rev() {
            let c = node.child(j).expect("finite part");
            if !c.is_leaf() {
                let mut q = p.clone();
                q.push(j);
                stack.push((q, c));
            }
        }
        // the first leaf child not named in `extra`
        let omega_leaf = node.children.iter().any(|(c, m)| m.is_omega() && c.is_leaf());
        let mut spare = None;
        let mut j = 0;
        while j < finite || omega_leaf {
            let mut q = p.clone();
            q.push(j);
            if node.child(j).is_some_and(TreePres::is_leaf) && !extra.contains(&q) {
                spare = Some(q);
                break;
            }
            j += 1;
        }
        if let Some(q) = spare {
            stack.push((q, &LEAF));
        }
    }
    for (n, p) in extra.iter().enumerate() {
        let mut node = t;
        for (d, &j) in p.iter().enumerate() {
            node = node
                .child(j)
                .ok_or_else(|| Error::input(format!("K[{n}][{d}]"), format!("node {} has no child {j}", path_name(&p[..d]))))?;
            add(p[..=d].to_vec(), !node.is_leaf(), &mut paths, &mut index, &mut parent, &mut inner);
        }
    }
    Ok((Skeleton { parent, inner, root: 0 }, paths))
}

static LEAF: TreePres = TreePres {
    children: Vec::new(),
    tail: false,
};

fn require_wuh(t: &TreePres) -> Result<()> {
    if !inner_nodes(t).is_finite() {
        return Err(Error::Precondition("the tree is not weakly ultrahomogeneous".into()));
    }
    Ok(())
}

/// Whether `k` (node paths) is an exceptional set of the tree presented by `t`.
pub fn is_exceptional_tree_po(t: &TreePres, k: &[Vec<usize>]) -> Result<TreeCheck<Vec<usize>>> {
    t.validate()?;
    require_wuh(t)?;
    let (sk, paths) = skeleton(t, k)?;
    let mut mark = vec![false; paths.len()];
    for p in k {
        mark[paths.iter().position(|q| q == p).expect("added")] = true;
    }
    Ok(sk.check(&mark).map(|&i| paths[i].clone()))
}

/// Whether `k` is an exceptional set of a finite tree structure.
pub fn is_exceptional_tree_po_finite(s: &FiniteStructure, k: &[usize]) -> Result<TreeCheck<usize>> {
    if s.family() != Family::TreePo {
        return Err(Error::input("family", "not a tree under ≺"));
    }
    s.validate()?;
    let parent = s.parent_array();
    let n = s.size();
    let mut inner = vec![false; n];
    for p in parent.iter().flatten() {
        inner[*p] = true;
    }
    let mut mark = vec![false; n];
    for (i, &x) in k.iter().enumerate() {
        if x >= n {
            return Err(Error::input(format!("K[{i}]"), format!("no element {x}")));
        }
        mark[x] = true;
    }
    let root = s.root().ok_or_else(|| Error::input("tree", "no root"))?;
    Ok(Skeleton { parent, inner, root }.check(&mark))
}

/// The non-root nodes a minimal exceptional set can use: inner nodes, and one
/// leaf under each inner node (leaves under one parent are interchangeable).
fn minimal_sets(t: &TreePres) -> Option<Vec<Vec<Vec<usize>>>> {
    let (sk, paths) = skeleton(t, &[]).ok()?;
    let cand: Vec<usize> = (1..paths.len()).collect();
    if cand.len() > MAX_CANDIDATES {
        return None;
    }
    let m = cand.len();
    let good = |mask: u32| {
        let mut mark = vec![false; paths.len()];
        for (b, &x) in cand.iter().enumerate() {
            mark[x] = mask >> b & 1 == 1;
        }
        sk.check(&mark).holds
    };
    let ok: Vec<bool> = (0..1u32 << m).map(good).collect();
    let mut out: Vec<Vec<Vec<usize>>> = (0..1u32 << m)
        .filter(|&mask| ok[mask as usize] && (0..m).all(|b| mask >> b & 1 == 0 || !ok[(mask & !(1 << b)) as usize]))
        .map(|mask| (0..m).filter(|b| mask >> b & 1 == 1).map(|b| paths[cand[b]].clone()).collect())
        .collect();
    out.sort_by(|a: &Vec<Vec<usize>>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Some(out)
}

/// Order embeddings between trees, with ω multiplicities cut down to a finite
/// surrogate large enough to exceed every finite resource of both trees.
pub struct Embedder {
    memo: HashMap<(Vec<(TreePres, u64)>, Vec<(TreePres, u64)>), bool>,
}

impl Default for Embedder {
    fn default() -> Self {
        Embedder { memo: HashMap::new() }
    }
}

fn weight(t: &TreePres) -> u64 {
    1 + t.children.iter().map(|(c, m)| m.finite().unwrap_or(1) * weight(c)).sum::<u64>()
}

fn cut(t: &TreePres, n: u64) -> TreePres {
    TreePres {
        children: t.children.iter().map(|(c, m)| (cut(c, n), Fin(m.finite().unwrap_or(n)))).collect(),
        tail: false,
    }
}

fn counts(t: &TreePres) -> Vec<(TreePres, u64)> {
    t.children.iter().map(|(c, m)| (c.clone(), m.finite().expect("cut"))).collect()
}

impl Embedder {
    /// Whether `x` embeds into `y` as a partial order. Tails are not supported.
    pub fn embeds(&mut self, x: &TreePres, y: &TreePres) -> bool {
        let n = weight(x) + weight(y) + 1;
        let (x, y) = (cut(x, n).canonical(), cut(y, n).canonical());
        self.into_tree(&[(x, 1)], &y)
    }

    /// The forest `h` maps into `y` with pairwise incomparable tree images.
    fn into_tree(&mut self, h: &[(TreePres, u64)], y: &TreePres) -> bool {
        let single = h.len() == 1 && h[0].1 == 1;
        (single && self.forest(&counts(&h[0].0), &counts(y))) || self.forest(h, &counts(y))
    }

    /// The forest `f` maps into the forest `g`, distinct trees of `f` going to
    /// incomparable places.
    fn forest(&mut self, f: &[(TreePres, u64)], g: &[(TreePres, u64)]) -> bool {
        let f: Vec<(TreePres, u64)> = f.iter().filter(|e| e.1 > 0).cloned().collect();
        let g: Vec<(TreePres, u64)> = g.iter().filter(|e| e.1 > 0).cloned().collect();
        if f.is_empty() {
            return true;
        }
        if g.is_empty() {
            return false;
        }
        let key = (f.clone(), g.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (gy, gc) = g[0].clone();
        let rest_g: Vec<(TreePres, u64)> = g[1..].to_vec();
        let v = self.assign(&f, &gy, gc, None, &rest_g);
        self.memo.insert(key, v);
        v
    }

    /// Gives each of `copies` copies of `gy` a sub-forest of `f` (non-increasing,
    /// to skip symmetric choices), then places the remainder into `rest`.
    fn assign(
        &mut self,
        f: &[(TreePres, u64)],
        gy: &TreePres,
        copies: u64,
        bound: Option<&[u64]>,
        rest: &[(TreePres, u64)],
    ) -> bool {
        if copies == 0 || f.iter().all(|e| e.1 == 0) {
            return self.forest(f, rest);
        }
        let limits: Vec<u64> = f.iter().map(|e| e.1).collect();
        let mut pick = vec![0u64; f.len()];
        loop {
            let within = bound.is_none_or(|b| pick.as_slice() <= b);
            if within {
                let h: Vec<(TreePres, u64)> =
                    f.iter().zip(&pick).filter(|(_, &c)| c > 0).map(|((t, _), &c)| (t.clone(), c)).collect();
                if h.is_empty() || self.into_tree(&h, gy) {
                    let left: Vec<(TreePres, u64)> = f.iter().zip(&pick).map(|((t, m), &c)| (t.clone(), m - c)).collect();
                    let next_bound = pick.clone();
                    if self.assign(&left, gy, copies - 1, Some(&next_bound), rest) {
                        return true;
                    }
                }
            }
            // odometer over sub-multisets
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return false;
                }
                if pick[i] < limits[i] {
                    pick[i] += 1;
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
}

/// Strongly-finite-type and finite-type tests with memo tables.
#[derive(Default)]
pub struct TypeClassifier {
    emb: Embedder,
    sft: HashMap<TreePres, bool>,
    ft: HashMap<TreePres, bool>,
}

impl TypeClassifier {
    /// Successor types `(x, y)` with `T[x]` embedding in `T[y]`, `x ≇ y`.
    fn embedding_pairs(&mut self, t: &TreePres) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..t.children.len() {
            for j in 0..t.children.len() {
                if i != j && self.emb.embeds(&t.children[i].0, &t.children[j].0) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn node_sft(&mut self, t: &TreePres) -> bool {
        !t.tail && self.embedding_pairs(t).iter().all(|&(_, j)| t.children[j].1.is_finite())
    }

    fn node_ft(&mut self, t: &TreePres) -> bool {
        if t.tail {
            return false;
        }
        for (c, m) in t.children.clone() {
            if m.is_omega() && !self.strongly_finite_type(&c) {
                return false;
            }
        }
        self.embedding_pairs(t)
            .iter()
            .all(|&(i, j)| t.children[i].1.is_finite() || t.children[j].1.is_finite())
    }

    /// Every node is of strongly finite type.
    pub fn strongly_finite_type(&mut self, t: &TreePres) -> bool {
        let t = t.canonical();
        if let Some(&v) = self.sft.get(&t) {
            return v;
        }
        let v = self.node_sft(&t) && t.children.iter().all(|(c, _)| self.strongly_finite_type(c));
        self.sft.insert(t, v);
        v
    }

    /// Every node is of finite type.
    pub fn finite_type(&mut self, t: &TreePres) -> bool {
        let t = t.canonical();
        if let Some(&v) = self.ft.get(&t) {
            return v;
        }
        let v = self.node_ft(&t) && t.children.iter().all(|(c, _)| self.finite_type(c));
        self.ft.insert(t, v);
        v
    }
}

pub fn analyze_tree_po(t: &TreePres) -> Report {
    let t = t.canonical();
    let mut r = Report::new(Family::TreePo);
    let rk = rank(&t);
    let inner = inner_nodes(&t);
    r.uh = Verdict::from_bool(rk.is_some_and(|k| k <= 1));
    r.wuh = Verdict::from_bool(inner.is_finite());
    r.cite(anchors::TREE_PO_UH);
    r.cite(anchors::TREE_PO_WUH);
    r.cite(anchors::TREE_FT);
    let mut cls = TypeClassifier::default();
    let sft = cls.strongly_finite_type(&t);
    let ft = cls.finite_type(&t);
    r.cc = Verdict::from_bool(ft);
    r.delta2_from_wuh();
    r.detail("rank", rk);
    r.detail("rank_at_least_one", inner);
    r.detail("strongly_finite_type", sft);
    r.detail("finite_type", ft);
    if t.has_tail() {
        r.note("a tail hides infinitely many successor types");
    }
    if !inner.is_finite() {
        r.note("infinitely many nodes have rank at least 1");
        return r;
    }
    r.cite(anchors::TREE_PO_EXC);
    if inner <= Fin(MAX_LISTED) {
        let (sk, paths) = skeleton(&t, &[]).expect("wuh skeleton");
        let exc: Vec<String> = (0..paths.len()).filter(|&i| sk.inner[i]).map(|i| path_name(&paths[i])).collect();
        r.detail("exceptional_set", ExceptionalDescriptor::named("every node with a successor", exc));
    }
    match minimal_sets(&t) {
        Some(sets) => {
            r.minimal_exceptional = sets
                .into_iter()
                .map(|s| {
                    if s.is_empty() {
                        ExceptionalDescriptor::empty()
                    } else {
                        let names = s.iter().map(|p| path_name(p)).collect();
                        ExceptionalDescriptor::named("node paths; the root is always fixed", names)
                    }
                })
                .collect();
        }
        None => r.note("too many nodes of rank at least 1 to enumerate minimal exceptional sets"),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_structures;
    use crate::oracle::Oracle;
    use crate::presentations::tree::materialize_tree;

    fn paper_tree() -> TreePres {
        TreePres::fan(TreePres::fan(TreePres::leaf(), Omega), Fin(1))
    }

    #[test]
    fn paper_example() {
        let t = paper_tree();
        let r = analyze_tree_po(&t);
        assert!(r.wuh.is_yes() && r.uh.is_no());
        let exc = &r.details["exceptional_set"]["elements"];
        assert_eq!(exc, &serde_json::json!(["e", "0"]));
        assert!(is_exceptional_tree_po(&t, &[vec![], vec![0]]).unwrap().holds);
        assert!(is_exceptional_tree_po(&t, &[vec![0]]).unwrap().holds);
        let c = is_exceptional_tree_po(&t, &[vec![]]).unwrap();
        assert_eq!(c.condition, Some("i"));
        assert_eq!(c.witness.as_ref().unwrap().0, vec![0]);
        // the 6-node truncation agrees
        let s = materialize_tree(&t, Family::TreePo, 6).unwrap();
        let o = Oracle::default();
        assert!(!o.is_exceptional(&s, &[0]).unwrap().holds);
        assert!(o.is_exceptional(&s, &[1]).unwrap().holds);
    }

    #[test]
    fn verdicts() {
        assert!(analyze_tree_po(&TreePres::fan(TreePres::leaf(), Omega)).uh.is_yes());
        let bad = TreePres::fan(TreePres::fan(TreePres::leaf(), Fin(1)), Omega);
        assert!(analyze_tree_po(&bad).wuh.is_no());
        assert!(is_exceptional_tree_po(&bad, &[]).is_err());
    }

    #[test]
    fn finite_type_example() {
        // ω nodes with two successors of four leaves each, ω with three of one leaf each
        let a = TreePres::fan(TreePres::fan(TreePres::leaf(), Fin(4)), Fin(2));
        let b = TreePres::fan(TreePres::fan(TreePres::leaf(), Fin(1)), Fin(3));
        let t = TreePres::node([(a.clone(), Omega), (b.clone(), Omega)]);
        let mut cls = TypeClassifier::default();
        assert!(cls.strongly_finite_type(&t));
        let mut e = Embedder::default();
        assert!(!e.embeds(&a, &b) && !e.embeds(&b, &a));
        let r = analyze_tree_po(&t);
        assert!(r.wuh.is_no() && r.cc.is_yes());
    }

    #[test]
    fn embeddings() {
        let mut e = Embedder::default();
        let star = |k| TreePres::fan(TreePres::leaf(), k);
        assert!(e.embeds(&star(Fin(5)), &star(Omega)));
        assert!(!e.embeds(&star(Omega), &star(Fin(5))));
        // two leaves over a root fit into a chain with two leaves on top
        let chain = TreePres::fan(star(Fin(2)), Fin(1));
        assert!(e.embeds(&star(Fin(2)), &chain));
        assert!(!e.embeds(&chain, &star(Fin(2))));
        // a star of six leaves does not fit into three stars of two
        assert!(!e.embeds(&star(Omega), &TreePres::fan(star(Fin(2)), Fin(3))));
        // an infinite antichain needs infinitely many places
        assert!(e.embeds(&star(Omega), &TreePres::fan(star(Fin(2)), Omega)));
    }

    #[test]
    fn finite_trees_match_oracle() {
        let o = Oracle::default();
        for n in 1..=5 {
            for s in enumerate_structures(Family::TreePo, n).unwrap() {
                for m in 0u32..(1 << n) {
                    let k: Vec<usize> = (0..n).filter(|x| m >> x & 1 == 1).collect();
                    let want = o.is_exceptional(&s, &k).unwrap().holds;
                    assert_eq!(is_exceptional_tree_po_finite(&s, &k).unwrap().holds, want, "{:?} {k:?} {:?}", (0..n).map(|x| (0..n).filter(|&y| s.rel(0, y, x)).count()).collect::<Vec<_>>(), o.is_exceptional(&s, &k).unwrap());
                }
            }
        }
    }
}
