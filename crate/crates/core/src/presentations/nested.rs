//! Nested equivalence structures `E_1 ⊇ … ⊇ E_n`, via their class tree.

use std::collections::BTreeMap;

use super::tree::{paths_of_weight, TreePres};
use crate::error::{Error, Result};
use crate::ext::{Fin, Omega};
use crate::structure::{Family, FiniteStructure};

/// A nested equivalence structure with `n` relations.
///
/// Symbolically it is its class tree: the root is the single `E_0` class, the
/// nodes at depth `i` are the `E_i` classes and the leaves, all at depth `n+1`,
/// are the elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NestedEqPres {
    Tree { n: usize, tree: TreePres },
    Finite(FiniteStructure),
}

impl NestedEqPres {
    pub fn arity(&self) -> usize {
        match self {
            NestedEqPres::Tree { n, .. } => *n,
            NestedEqPres::Finite(s) => match s.family() {
                Family::NestedEq(k) => k,
                _ => 0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NestedEqPres::Tree { n, tree } => {
                if *n == 0 {
                    return Err(Error::input("n", "at least one relation is required"));
                }
                tree.validate()?;
                if tree.has_tail() {
                    return Err(Error::input("tree", "class trees must be fully described"));
                }
                if !leaves_at_depth(tree, n + 1) {
                    return Err(Error::input("tree", format!("every leaf must be at depth {}", n + 1)));
                }
                Ok(())
            }
            NestedEqPres::Finite(s) => {
                if !matches!(s.family(), Family::NestedEq(_)) {
                    return Err(Error::input("family", "not a nested equivalence structure"));
                }
                s.validate()
            }
        }
    }
}

/// The class tree of a finite nested equivalence structure.
pub fn class_tree(s: &FiniteStructure) -> Result<TreePres> {
    let Family::NestedEq(k) = s.family() else {
        return Err(Error::input("family", "not a nested equivalence structure"));
    };
    s.validate()?;
    fn build(s: &FiniteStructure, members: &[usize], level: usize, k: usize) -> TreePres {
        if level == k {
            return TreePres::fan(TreePres::leaf(), Fin(members.len() as u64));
        }
        let mut seen = vec![false; s.size()];
        let mut kids = Vec::new();
        for &a in members {
            if seen[a] {
                continue;
            }
            let class: Vec<usize> = members.iter().copied().filter(|&b| s.rel(level, a, b)).collect();
            for &b in &class {
                seen[b] = true;
            }
            kids.push((build(s, &class, level + 1, k), Fin(1)));
        }
        TreePres::node(kids)
    }
    let all: Vec<usize> = (0..s.size()).collect();
    Ok(build(s, &all, 0, k))
}

fn leaves_at_depth(t: &TreePres, d: usize) -> bool {
    if t.children.is_empty() {
        d == 0
    } else {
        d > 0 && t.children.iter().all(|(c, _)| leaves_at_depth(c, d - 1))
    }
}

/// The first `n` elements (leaves of the class tree, in weight order).
pub fn materialize_nested(arity: usize, tree: &TreePres, n: usize) -> Result<FiniteStructure> {
    let mut leaves: Vec<Vec<usize>> = Vec::new();
    let total = tree.size();
    let mut w = 0usize;
    // every leaf has weight at most its depth plus its index sum, so a finite
    // tree is exhausted once w passes its size
    let bound = match total {
        Fin(k) => Some(k as usize + arity + 1),
        Omega => None,
    };
    while leaves.len() < n && bound.is_none_or(|b| w <= b) {
        for p in paths_of_weight(tree, w) {
            if p.len() == arity + 1 && leaves.len() < n {
                leaves.push(p);
            }
        }
        w += 1;
    }
    if leaves.len() < n {
        return Err(Error::Precondition(format!("the structure has only {} elements", leaves.len())));
    }
    let parts: Vec<Vec<Vec<usize>>> = (1..=arity)
        .map(|i| {
            let mut by: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
            for (x, p) in leaves.iter().enumerate() {
                by.entry(&p[..i]).or_default().push(x);
            }
            by.into_values().collect()
        })
        .collect();
    let labels = leaves
        .iter()
        .map(|p| p.iter().map(|j| j.to_string()).collect::<Vec<_>>().join("."))
        .collect();
    Ok(FiniteStructure::nested(n, &parts)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_two_prefix() {
        // two E_1 classes, each an infinite set of singletons under E_2
        let half = TreePres::fan(TreePres::fan(TreePres::leaf(), Fin(1)), Omega);
        let t = TreePres::fan(half, Fin(2));
        let p = NestedEqPres::Tree { n: 2, tree: t.clone() };
        p.validate().unwrap();
        let s = materialize_nested(2, &t, 6).unwrap();
        assert_eq!(s.classes(0).len(), 2);
        assert_eq!(s.classes(1).len(), 6);
        assert_eq!(class_tree(&s).unwrap().height(), 3);
        let bad = NestedEqPres::Tree { n: 3, tree: t };
        assert!(bad.validate().is_err());
    }
}
