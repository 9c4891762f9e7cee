//! Trees under the predecessor function.
//!
//! A tree is ultrahomogeneous iff nodes of equal height have equal successor
//! counts, i.e. it has a branching profile `β`. Weak ultrahomogeneity asks for a
//! finite subtree `S` with every `T_S[x]` ultrahomogeneous; the search below
//! builds `S` top-down, excluding into `S` exactly the children that do not fit
//! the profile kept at their parent.

use serde::Serialize;

use super::tree_po::{path_name, TypeClassifier};
use super::{anchors, ExceptionalDescriptor, Report, Verdict};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::presentations::tree::TreePres;
use crate::structure::Family;

const MAX_LISTED: u64 = 64;

/// Successor count at each height, when nodes of equal height agree.
pub type BranchingProfile = Vec<ExtCount>;

/// `β` of an ultrahomogeneous tree, without the final level of leaves.
pub fn branching_profile(t: &TreePres) -> Option<BranchingProfile> {
    let mut level: Vec<&TreePres> = vec![t];
    let mut beta = Vec::new();
    loop {
        if level.iter().any(|x| x.tail) {
            return None;
        }
        let d = level[0].degree();
        if level.iter().any(|x| x.degree() != d) {
            return None;
        }
        if d.is_zero() {
            return Some(beta);
        }
        beta.push(d);
        let mut next: Vec<&TreePres> = level.iter().flat_map(|x| x.children.iter().map(|(c, _)| c)).collect();
        next.sort();
        next.dedup();
        level = next;
    }
}

/// Which children of a node go into `S`, recursively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    /// The profile shared by the kept children, if any are kept.
    pub kept: Option<BranchingProfile>,
    /// `(child type index, copies, plan below each copy)`.
    pub excluded: Vec<(usize, u64, Plan)>,
}

impl Plan {
    /// Number of nodes of `S` at and below this node.
    pub fn size(&self) -> u64 {
        1 + self.excluded.iter().map(|(_, k, p)| k * p.size()).sum::<u64>()
    }
}

/// The plan for a canonical tree, or `None` when no finite `S` works.
pub fn plan(t: &TreePres) -> Option<Plan> {
    if t.tail {
        return None;
    }
    let profiles: Vec<Option<BranchingProfile>> = t.children.iter().map(|(c, _)| branching_profile(c)).collect();
    let mut forced: Option<BranchingProfile> = None;
    for (i, (_, m)) in t.children.iter().enumerate() {
        if m.is_omega() {
            let p = profiles[i].clone()?;
            match &forced {
                Some(q) if *q != p => return None,
                _ => forced = Some(p),
            }
        }
    }
    let kept = forced.or_else(|| {
        // keep the profile covering the most children; ties to the smaller profile
        let mut best: Option<(u64, BranchingProfile)> = None;
        for p in profiles.iter().flatten() {
            let n: u64 = t
                .children
                .iter()
                .zip(&profiles)
                .filter(|(_, q)| q.as_ref() == Some(p))
                .map(|((_, m), _)| m.finite().expect("no ω children here"))
                .sum();
            let better = match &best {
                None => true,
                Some((bn, bp)) => n > *bn || (n == *bn && p < bp),
            };
            if better {
                best = Some((n, p.clone()));
            }
        }
        best.map(|(_, p)| p)
    });
    let mut excluded = Vec::new();
    for (i, (c, m)) in t.children.iter().enumerate() {
        if kept.is_some() && profiles[i] == kept {
            continue;
        }
        let k = m.finite().expect("ω children are kept");
        excluded.push((i, k, plan(c)?));
    }
    Some(Plan { kept, excluded })
}

/// Node paths of `S` for a plan, root first.
pub fn plan_paths(t: &TreePres, p: &Plan) -> Vec<Vec<usize>> {
    fn go(t: &TreePres, p: &Plan, at: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(at.clone());
        let mut offset = vec![0u64; t.children.len()];
        let mut acc = 0;
        for (i, (_, m)) in t.children.iter().enumerate() {
            offset[i] = acc;
            acc += m.finite().unwrap_or(0);
        }
        for (i, k, sub) in &p.excluded {
            for c in 0..*k {
                let mut q = at.clone();
                q.push((offset[*i] + c) as usize);
                go(&t.children[*i].0, sub, q, out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, p, vec![], &mut out);
    out
}

/// `T_U[a]`: the chain below `a`, `a` itself, and the full subtrees over the
/// children of `a` that are not in `u`.
pub fn rooted_view(t: &TreePres, a: &[usize], u: &[Vec<usize>]) -> Result<TreePres> {
    let mut node = t;
    for (d, &j) in a.iter().enumerate() {
        node = node
            .child(j)
            .ok_or_else(|| Error::input(format!("a[{d}]"), format!("node {} has no child {j}", path_name(&a[..d]))))?;
    }
    let mut removed = vec![0u64; node.children.len()];
    for q in u {
        if q.len() == a.len() + 1 && q[..a.len()] == *a {
            let j = q[a.len()];
            let c = node.child(j).ok_or_else(|| Error::input("U", format!("no node {}", path_name(q))))?;
            let i = node.children.iter().position(|(x, _)| x == c).expect("child type");
            removed[i] += 1;
        }
    }
    let kids = node
        .children
        .iter()
        .zip(&removed)
        .map(|((c, m), &r)| (c.clone(), m.minus(r)))
        .filter(|(_, m)| !m.is_zero());
    let mut view = TreePres {
        children: kids.collect(),
        tail: node.tail,
    }
    .canonical();
    for _ in 0..a.len() {
        view = TreePres::fan(view, Fin(1));
    }
    Ok(view)
}

/// The closed form for height ≤ 2: the height-1 nodes of infinite
/// multiplicity share one successor count.
pub fn closed_form_h2(t: &TreePres) -> bool {
    let mut degrees: Vec<ExtCount> = t.children.iter().filter(|(_, m)| m.is_omega()).map(|(c, _)| c.degree()).collect();
    degrees.dedup();
    degrees.len() <= 1
}

/// The closed form for height 3: (a) the successors of each height-1 node are
/// almost all of one successor count, and (b) almost all height-1 nodes have
/// `h` successors with `k` successors each.
pub fn closed_form_h3(t: &TreePres) -> bool {
    let a = t.children.iter().all(|(x, _)| {
        let mut d: Vec<ExtCount> = x.children.iter().filter(|(_, m)| m.is_omega()).map(|(y, _)| y.degree()).collect();
        d.sort();
        d.dedup();
        d.len() <= 1
    });
    let mut hk: Vec<Option<(ExtCount, Option<ExtCount>)>> = t
        .children
        .iter()
        .filter(|(_, m)| m.is_omega())
        .map(|(x, _)| {
            let mut ks: Vec<ExtCount> = x.children.iter().map(|(y, _)| y.degree()).collect();
            ks.dedup();
            match ks.len() {
                0 => Some((x.degree(), None)),
                1 => Some((x.degree(), Some(ks[0]))),
                _ => None,
            }
        })
        .collect();
    hk.sort();
    hk.dedup();
    let b = hk.iter().all(Option::is_some) && hk.len() <= 1;
    a && b
}

#[derive(Serialize)]
struct ClosedForm {
    height: usize,
    wuh: bool,
}

pub fn analyze_tree_pred(t: &TreePres) -> Report {
    let t = t.canonical();
    let mut r = Report::new(Family::TreePred);
    let beta = branching_profile(&t);
    r.uh = Verdict::from_bool(beta.is_some());
    r.cite(anchors::TREE_PRED_UH);
    r.cite(anchors::TREE_PRED_WUH);
    if let Some(b) = &beta {
        r.detail("branching_profile", b);
    }
    let pl = plan(&t);
    r.wuh = Verdict::from_bool(pl.is_some());
    let h = t.height();
    if !t.has_tail() && h <= 3 {
        let closed = if h <= 2 {
            r.cite(anchors::TREE_PRED_H2);
            closed_form_h2(&t)
        } else {
            r.cite(anchors::TREE_PRED_H3);
            closed_form_h3(&t)
        };
        r.detail("closed_form", ClosedForm { height: h, wuh: closed });
        if closed != pl.is_some() {
            r.note("internal inconsistency: closed form and recursion disagree");
        }
    }
    let mut cls = TypeClassifier::default();
    let sft = cls.strongly_finite_type(&t);
    let ft = cls.finite_type(&t);
    r.detail("strongly_finite_type", sft);
    r.detail("finite_type", ft);
    r.cc = if pl.is_some() {
        r.cite(anchors::LOCALLY_FINITE_CC);
        Verdict::Yes
    } else if ft {
        r.cite(anchors::TREE_FT);
        r.note("computably categorical under ≺, hence under predecessor");
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    r.delta2_from_wuh();
    match pl {
        None => {
            if t.has_tail() {
                r.note("a tail gives infinitely many successor types");
            }
        }
        Some(_) if beta.is_some() => r.minimal_exceptional = vec![ExceptionalDescriptor::empty()],
        Some(p) => {
            let description = "finite subtree S with every T_S[x] ultrahomogeneous (canonical choice)";
            let n = p.size();
            r.minimal_exceptional = vec![if n <= MAX_LISTED {
                let names = plan_paths(&t, &p).iter().map(|q| path_name(q)).collect();
                ExceptionalDescriptor::named(description, names)
            } else {
                ExceptionalDescriptor::symbolic(description, Fin(n))
            }];
            if let Some(k) = &p.kept {
                r.detail("kept_profile", k);
            }
        }
    }
    r
}

/// Whether `t` has a node of infinite multiplicity below it, i.e. is infinite.
pub fn is_infinite(t: &TreePres) -> bool {
    t.size() == Omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_structures;
    use crate::oracle::Oracle;

    fn star(k: ExtCount) -> TreePres {
        TreePres::fan(TreePres::leaf(), k)
    }

    #[test]
    fn uniform_tree() {
        let t = TreePres::fan(star(Fin(2)), Fin(2));
        let r = analyze_tree_pred(&t);
        assert!(r.uh.is_yes());
        assert_eq!(branching_profile(&t), Some(vec![Fin(2), Fin(2)]));
    }

    #[test]
    fn height_two() {
        let ok = TreePres::node([(star(Fin(3)), Omega), (star(Fin(5)), Fin(1))]);
        let r = analyze_tree_pred(&ok);
        assert!(r.wuh.is_yes() && r.uh.is_no());
        let s = &r.minimal_exceptional[0];
        // root and the one node with five successors
        assert_eq!(s.elements.as_ref().unwrap(), &vec!["e".to_string(), "0".to_string()]);
        let bad = TreePres::node([(star(Fin(2)), Omega), (star(Fin(3)), Omega)]);
        assert!(analyze_tree_pred(&bad).wuh.is_no());
    }

    #[test]
    fn two_populations() {
        let a = TreePres::fan(star(Fin(4)), Fin(2));
        let b = TreePres::fan(star(Fin(1)), Fin(3));
        let t = TreePres::node([(a, Omega), (b, Omega)]);
        let r = analyze_tree_pred(&t);
        assert!(r.wuh.is_no());
        assert_eq!(r.details["strongly_finite_type"], serde_json::json!(true));
        assert!(!closed_form_h3(&t));
    }

    #[test]
    fn rank_homogeneity_examples() {
        // height-1 nodes with n successors for each n, each infinitely often
        let mut kids: Vec<(TreePres, ExtCount)> = (0..4).map(|n| (star(Fin(n)), Omega)).collect();
        kids.push((star(Fin(9)), Fin(1)));
        let t = TreePres::node(kids).with_tail();
        assert!(analyze_tree_pred(&t).wuh.is_no());
        // two height-1 nodes and all possible successors above them, cut at height 4
        let mut full = TreePres::leaf();
        for _ in 0..3 {
            full = TreePres::fan(full, Omega);
        }
        let t = TreePres::fan(full, Fin(2));
        assert!(analyze_tree_pred(&t).uh.is_yes());
    }

    #[test]
    fn plan_gives_uh_views() {
        let t = TreePres::node([
            (star(Fin(3)), Omega),
            (TreePres::node([(star(Fin(1)), Omega), (star(Fin(2)), Fin(2))]), Fin(1)),
            (star(Fin(5)), Fin(2)),
        ]);
        let p = plan(&t).unwrap();
        let s = plan_paths(&t, &p);
        for x in &s {
            let v = rooted_view(&t, x, &s).unwrap();
            assert!(branching_profile(&v).is_some(), "{}", path_name(x));
        }
    }

    #[test]
    fn finite_trees_match_oracle() {
        let o = Oracle::default();
        for n in 1..=6 {
            for s in enumerate_structures(Family::TreePred, n).unwrap() {
                let t = TreePres::of_structure(&s).unwrap();
                let r = analyze_tree_pred(&t);
                assert_eq!(r.uh.as_bool(), Some(o.is_uh(&s).unwrap().holds), "{t}");
                assert!(r.wuh.is_yes());
            }
        }
    }
}
