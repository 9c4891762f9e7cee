//! Nested equivalence structures, through their tree of classes under inclusion.

use std::collections::BTreeMap;

use serde::Serialize;

use super::equivalence::analyze_equivalence;
use super::tree_po::TypeClassifier;
use super::tree_pred::{analyze_tree_pred, branching_profile, plan, plan_paths};
use super::{anchors, ExceptionalDescriptor, Report, Verdict};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin};
use crate::presentations::equivalence::EqCharacter;
use crate::presentations::nested::{class_tree, NestedEqPres};
use crate::presentations::tree::TreePres;
use crate::structure::{Family, FiniteStructure};

const MAX_LISTED: usize = 64;

/// `T_A` for a finite structure: nodes are the classes `[a]_i` for
/// `i = 0..=n+1`, each the predecessor of the classes it splits into.
#[derive(Clone, Debug)]
pub struct ClassTree {
    pub tree: FiniteStructure,
    /// Element `a` ↦ the node of the singleton `{a}`.
    pub class_map: Vec<usize>,
    /// Node ↦ `(level, members)`.
    pub classes: Vec<(usize, Vec<usize>)>,
}

pub fn build_ta(a: &FiniteStructure) -> Result<ClassTree> {
    let Family::NestedEq(k) = a.family() else {
        return Err(Error::input("family", "not a nested equivalence structure"));
    };
    a.validate()?;
    let n = a.size();
    let mut classes: Vec<(usize, Vec<usize>)> = vec![(0, (0..n).collect())];
    let mut parent: Vec<Option<usize>> = vec![None];
    // node of [x]_{i-1} for each x, level by level
    let mut above = vec![0usize; n];
    for level in 1..=k + 1 {
        let mut here = vec![usize::MAX; n];
        for x in 0..n {
            if here[x] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = if level <= k {
                (0..n).filter(|&y| a.rel(level - 1, x, y)).collect()
            } else {
                vec![x]
            };
            let id = classes.len();
            for &y in &members {
                here[y] = id;
            }
            parent.push(Some(above[x]));
            classes.push((level, members));
        }
        above = here;
    }
    let labels = classes
        .iter()
        .map(|(l, m)| {
            let m: Vec<String> = m.iter().map(|&x| a.label(x)).collect();
            format!("E{l}{{{}}}", m.join(","))
        })
        .collect();
    let tree = FiniteStructure::tree_pred(&parent)?.with_labels(labels);
    Ok(ClassTree {
        tree,
        class_map: above,
        classes,
    })
}

/// Successor counts at each depth, when they agree: the `k_i`.
fn split_counts(t: &TreePres, arity: usize) -> Option<Vec<ExtCount>> {
    let mut level = vec![t];
    let mut ks = Vec::new();
    for _ in 0..=arity {
        let d = level[0].degree();
        if level.iter().any(|x| x.degree() != d) {
            return None;
        }
        ks.push(d);
        level = level.iter().flat_map(|x| x.children.iter().map(|(c, _)| c)).collect();
    }
    Some(ks)
}

fn character(kids: &[(TreePres, ExtCount)]) -> EqCharacter {
    let mut by: BTreeMap<ExtCount, ExtCount> = BTreeMap::new();
    for (c, m) in kids {
        *by.entry(c.size()).or_default() = by.get(&c.size()).copied().unwrap_or_default() + *m;
    }
    EqCharacter::new(by)
}

/// The two-relation characterization: `E_1` weakly ultrahomogeneous, each
/// restriction of `E_2` weakly ultrahomogeneous, and almost all restrictions
/// made of `h` classes of size `k` for one pair `(h, k)`.
fn corollary_n2(t: &TreePres) -> bool {
    let e1 = analyze_equivalence(&character(&t.children)).wuh.is_yes();
    let each = t
        .children
        .iter()
        .all(|(x, _)| analyze_equivalence(&character(&x.children)).wuh.is_yes());
    let mut hk: Vec<Option<(ExtCount, ExtCount)>> = t
        .children
        .iter()
        .filter(|(_, m)| m.is_omega())
        .map(|(x, _)| {
            let mut sizes: Vec<ExtCount> = x.children.iter().map(|(y, _)| y.size()).collect();
            sizes.dedup();
            (sizes.len() == 1).then(|| (x.degree(), sizes[0]))
        })
        .collect();
    hk.sort();
    hk.dedup();
    e1 && each && hk.len() <= 1 && hk.iter().all(Option::is_some)
}

/// With every class finite: all `E_i` classes share a size, for each `i`.
fn each_relation_uh(t: &TreePres, arity: usize) -> bool {
    let mut level: Vec<&TreePres> = t.children.iter().map(|(c, _)| c).collect();
    for _ in 1..=arity {
        let s = level[0].size();
        if level.iter().any(|x| x.size() != s) {
            return false;
        }
        level = level.iter().flat_map(|x| x.children.iter().map(|(c, _)| c)).collect();
    }
    true
}

#[derive(Serialize)]
struct Checks {
    split_counts: Option<Vec<ExtCount>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    two_relation_form: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    each_relation_uh: Option<bool>,
}

pub fn analyze_nested(p: &NestedEqPres) -> Result<Report> {
    p.validate()?;
    let arity = p.arity();
    let t = match p {
        NestedEqPres::Tree { tree, .. } => tree.canonical(),
        NestedEqPres::Finite(s) => class_tree(s)?.canonical(),
    };
    let mut r = Report::new(Family::NestedEq(arity));
    for a in [anchors::NESTED_UH, anchors::NESTED_WUH] {
        r.cite(a);
    }
    let via_tree = analyze_tree_pred(&t);
    let ks = split_counts(&t, arity);
    r.uh = via_tree.uh;
    r.wuh = via_tree.wuh;
    if ks.is_some() != r.uh.is_yes() {
        r.note("internal inconsistency: split counts and class tree disagree on uh");
    }
    let two = (arity == 2).then(|| corollary_n2(&t));
    if let Some(c) = two {
        r.cite(anchors::NESTED_N2);
        if c != r.wuh.is_yes() {
            r.note("internal inconsistency: two-relation form and class tree disagree on wuh");
        }
    }
    let all_finite = t.children.iter().all(|(x, _)| x.size().is_finite());
    let each = all_finite.then(|| each_relation_uh(&t, arity));
    if let Some(e) = each {
        r.cite(anchors::NESTED_FINITE);
        if e != r.uh.is_yes() {
            r.note("internal inconsistency: per-relation form and class tree disagree on uh");
        }
    }
    r.detail(
        "checks",
        Checks {
            split_counts: ks,
            two_relation_form: two,
            each_relation_uh: each,
        },
    );
    debug_assert!(branching_profile(&t).is_some() == r.uh.is_yes());
    r.cc = if r.wuh.is_yes() {
        r.cite(anchors::LOCALLY_FINITE_CC);
        Verdict::Yes
    } else if TypeClassifier::default().finite_type(&t) {
        r.cite(anchors::NESTED_CC);
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    r.delta2_from_wuh();
    if r.uh.is_yes() {
        r.minimal_exceptional = vec![ExceptionalDescriptor::empty()];
    } else if let Some(pl) = plan(&t) {
        // each class node of S is named by its first element, as a leaf path of the class tree
        let nodes: Vec<Vec<usize>> = plan_paths(&t, &pl).into_iter().skip(1).collect();
        let description = "one element from each class in the canonical S of the class tree";
        r.detail(
            "class_nodes",
            nodes.iter().map(|q| super::tree_po::path_name(q)).collect::<Vec<_>>(),
        );
        r.minimal_exceptional = vec![if nodes.len() <= MAX_LISTED {
            let names = nodes
                .iter()
                .map(|q| {
                    let mut leaf = q.clone();
                    leaf.resize(arity + 1, 0);
                    super::tree_po::path_name(&leaf)
                })
                .collect();
            ExceptionalDescriptor::named(description, names)
        } else {
            ExceptionalDescriptor::symbolic(description, Fin(nodes.len() as u64))
        }];
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_structures;
    use crate::ext::Omega;
    use crate::oracle::Oracle;
    use crate::presentations::nested::materialize_nested;

    fn fan(t: TreePres, k: ExtCount) -> TreePres {
        TreePres::fan(t, k)
    }

    fn classes(k: u64, size: ExtCount) -> TreePres {
        fan(fan(TreePres::leaf(), size), Fin(k))
    }

    #[test]
    fn build_examples() {
        let one = FiniteStructure::nested(3, &[vec![vec![0, 1], vec![2]]]).unwrap();
        let ta = build_ta(&one).unwrap();
        assert_eq!(ta.tree.size(), 1 + 2 + 3);
        let t = TreePres::of_structure(&ta.tree).unwrap();
        assert_eq!(t, TreePres::node([(fan(TreePres::leaf(), Fin(2)), Fin(1)), (fan(TreePres::leaf(), Fin(1)), Fin(1))]));

        let e1 = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let crossing = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        assert!(FiniteStructure::nested(6, &[e1.clone(), crossing]).is_err());
        let nested = FiniteStructure::nested(6, &[e1, vec![vec![0, 1], vec![2], vec![3], vec![4, 5]]]).unwrap();
        let ta = build_ta(&nested).unwrap();
        let t = TreePres::of_structure(&ta.tree).unwrap();
        assert_eq!(t.degree(), Fin(2));
        // both middle nodes split into a class of two and a class of one
        assert_eq!(t.children, vec![(TreePres::node([(fan(TreePres::leaf(), Fin(1)), Fin(1)), (fan(TreePres::leaf(), Fin(2)), Fin(1))]), Fin(2))]);
        assert_eq!(ta.class_map.len(), 6);
        assert!(build_ta(&FiniteStructure::chain(3)).is_err());
    }

    #[test]
    fn three_examples() {
        let split = NestedEqPres::Tree {
            n: 2,
            tree: TreePres::node([(classes(3, Omega), Fin(1)), (classes(5, Omega), Fin(1))]),
        };
        let r = analyze_nested(&split).unwrap();
        assert!(r.uh.is_no());

        let bc = NestedEqPres::Tree {
            n: 2,
            tree: TreePres::node([(fan(fan(TreePres::leaf(), Fin(2)), Omega), Fin(1)), (fan(fan(TreePres::leaf(), Fin(3)), Omega), Fin(1))]),
        };
        let r = analyze_nested(&bc).unwrap();
        assert!(r.wuh.is_yes() && r.uh.is_no());
        assert_eq!(r.minimal_exceptional[0].size, Fin(1));

        let two_types = NestedEqPres::Tree {
            n: 2,
            tree: TreePres::node([(classes(2, Fin(1)), Omega), (classes(1, Fin(2)), Omega)]),
        };
        let r = analyze_nested(&two_types).unwrap();
        assert!(r.wuh.is_no() && r.cc.is_yes());
        for r in [analyze_nested(&split).unwrap(), analyze_nested(&bc).unwrap(), r] {
            assert!(r.notes.iter().all(|n| !n.contains("inconsistency")), "{:?}", r.notes);
        }
    }

    #[test]
    fn exceptional_sets_on_truncation() {
        // B split into pairs, C into triples; cut to two classes of each
        let t = TreePres::node([(fan(fan(TreePres::leaf(), Fin(2)), Fin(2)), Fin(1)), (fan(fan(TreePres::leaf(), Fin(3)), Fin(2)), Fin(1))]);
        let s = materialize_nested(2, &t, 10).unwrap();
        let o = Oracle::with_cap(10).unwrap();
        let b = (0..10).find(|&x| s.classes(0).iter().any(|c| c.len() == 4 && c.contains(&x))).unwrap();
        let c = (0..10).find(|&x| s.classes(0).iter().any(|k| k.len() == 6 && k.contains(&x))).unwrap();
        assert!(o.is_exceptional(&s, &[b, c]).unwrap().holds);
        assert!(o.is_exceptional(&s, &[c]).unwrap().holds);
    }

    #[test]
    fn agrees_with_oracle() {
        let o = Oracle::default();
        let big = Oracle::with_cap(12).unwrap();
        for n in 1..=6 {
            for s in enumerate_structures(Family::NestedEq(2), n).unwrap() {
                let r = analyze_nested(&NestedEqPres::Finite(s.clone())).unwrap();
                let want = o.is_uh(&s).unwrap().holds;
                assert_eq!(r.uh.as_bool(), Some(want));
                let ta = build_ta(&s).unwrap();
                if ta.tree.size() <= big.cap() {
                    assert_eq!(big.is_uh(&ta.tree).unwrap().holds, want);
                }
                assert!(r.notes.iter().all(|n| !n.contains("inconsistency")));
            }
        }
    }
}
