//! Trees of finite height given by child multiplicities.

use std::fmt;

use super::counts::Interleaved;
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::structure::{Family, FiniteStructure};

/// A node together with the isomorphism types of its child subtrees.
///
/// `tail` marks infinitely many further children of pairwise distinct types
/// that are not described; only verdicts that do not depend on them are exact.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreePres {
    pub children: Vec<(TreePres, ExtCount)>,
    pub tail: bool,
}

impl TreePres {
    pub fn leaf() -> Self {
        TreePres::default()
    }

    /// A node with the given children, canonicalized.
    pub fn node(children: impl IntoIterator<Item = (TreePres, ExtCount)>) -> Self {
        TreePres {
            children: children.into_iter().collect(),
            tail: false,
        }
        .canonical()
    }

    pub fn with_tail(mut self) -> Self {
        self.tail = true;
        self
    }

    /// `k` copies of `child` under a fresh root.
    pub fn fan(child: TreePres, k: ExtCount) -> Self {
        TreePres::node([(child, k)])
    }

    /// Children merged by type, zero multiplicities dropped, sorted.
    pub fn canonical(&self) -> TreePres {
        let mut kids: Vec<(TreePres, ExtCount)> = self
            .children
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(c, m)| (c.canonical(), *m))
            .collect();
        kids.sort();
        let mut merged: Vec<(TreePres, ExtCount)> = Vec::with_capacity(kids.len());
        for (c, m) in kids {
            match merged.last_mut() {
                Some((last, lm)) if *last == c => *lm = *lm + m,
                _ => merged.push((c, m)),
            }
        }
        TreePres {
            children: merged,
            tail: self.tail,
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty() && !self.tail
    }

    /// Height of the described part (a tail adds no height information).
    pub fn height(&self) -> usize {
        self.children.iter().map(|(c, _)| c.height() + 1).max().unwrap_or(0)
    }

    /// Number of immediate successors.
    pub fn degree(&self) -> ExtCount {
        if self.tail {
            return Omega;
        }
        self.children.iter().map(|(_, m)| *m).sum()
    }

    /// Number of nodes.
    pub fn size(&self) -> ExtCount {
        if self.tail {
            return Omega;
        }
        Fin(1) + self.children.iter().map(|(c, m)| c.size() * *m).sum()
    }

    pub fn has_tail(&self) -> bool {
        self.tail || self.children.iter().any(|(c, _)| c.has_tail())
    }

    pub fn validate(&self) -> Result<()> {
        fn go(t: &TreePres, path: &str) -> Result<()> {
            for (i, (c, m)) in t.children.iter().enumerate() {
                if m.is_zero() {
                    return Err(Error::input(format!("{path}[{i}][1]"), "multiplicity must be at least 1"));
                }
                go(c, &format!("{path}[{i}][0]"))?;
            }
            Ok(())
        }
        go(self, "tree")
    }

    /// The tree of a finite tree structure (either family).
    pub fn of_structure(s: &FiniteStructure) -> Result<Self> {
        if !matches!(s.family(), Family::TreePo | Family::TreePred) {
            return Err(Error::input("family", "not a tree"));
        }
        let parent = s.parent_array();
        let root = s.root().ok_or_else(|| Error::input("tree", "no root"))?;
        let mut kids = vec![Vec::new(); s.size()];
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                kids[*p].push(x);
            }
        }
        fn build(x: usize, kids: &[Vec<usize>]) -> TreePres {
            TreePres::node(kids[x].iter().map(|&c| (build(c, kids), Fin(1))))
        }
        Ok(build(root, &kids))
    }

    /// Children in fill order; each entry is `(child type index, copy number)`.
    fn child_sequence(&self) -> Interleaved<usize> {
        Interleaved::new(self.children.iter().enumerate().map(|(i, (_, m))| (i, *m)))
    }

    /// Child subtree at fill index `j`.
    pub fn child(&self, j: usize) -> Option<&TreePres> {
        self.child_sequence().get(j).map(|(i, _)| &self.children[i].0)
    }

    /// The canonical text form.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TreePres {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (c, m)) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
            if *m != Fin(1) {
                write!(f, "*{m}")?;
            }
        }
        if self.tail {
            f.write_str(if self.children.is_empty() { "..." } else { " ..." })?;
        }
        f.write_str(")")
    }
}

/// Node addresses of the first `n` nodes: paths of child fill indices, ordered
/// by `depth + sum of indices`, then lexicographically. Parents precede children.
pub fn node_paths(t: &TreePres, n: usize) -> Result<Vec<Vec<usize>>> {
    if t.has_tail() {
        return Err(Error::Unsupported("a tree with an undescribed tail cannot be materialized".into()));
    }
    let total = t.size();
    let want = match total {
        Fin(k) => n.min(k as usize),
        Omega => n,
    };
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut w = 0usize;
    while out.len() < want {
        for p in paths_of_weight(t, w) {
            if out.len() == want {
                break;
            }
            out.push(p);
        }
        w += 1;
    }
    Ok(out)
}

/// All node paths of weight exactly `w`, sorted.
pub(crate) fn paths_of_weight(t: &TreePres, w: usize) -> Vec<Vec<usize>> {
    fn go(t: &TreePres, path: &mut Vec<usize>, budget: usize, out: &mut Vec<Vec<usize>>) {
        if budget == 0 {
            out.push(path.clone());
            return;
        }
        let seq = t.child_sequence();
        for j in 0..budget {
            let Some((i, _)) = seq.get(j) else { break };
            path.push(j);
            go(&t.children[i].0, path, budget - 1 - j, out);
            path.pop();
        }
    }
    let mut level = Vec::new();
    go(t, &mut Vec::new(), w, &mut level);
    level.sort();
    level
}

/// The subtree at a node path.
pub fn subtree_at<'a>(t: &'a TreePres, path: &[usize]) -> &'a TreePres {
    path.iter().fold(t, |node, &j| node.child(j).expect("valid path"))
}

fn path_label(path: &[usize]) -> String {
    if path.is_empty() {
        "e".into()
    } else {
        path.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// The first `n` nodes as a finite tree of the given family.
pub fn materialize_tree(t: &TreePres, family: Family, n: usize) -> Result<FiniteStructure> {
    let paths = node_paths(t, n)?;
    if paths.len() < n {
        return Err(Error::Precondition(format!("the tree has only {} nodes", paths.len())));
    }
    let parent: Vec<Option<usize>> = paths
        .iter()
        .map(|p| {
            if p.is_empty() {
                None
            } else {
                paths.iter().position(|q| q[..] == p[..p.len() - 1])
            }
        })
        .collect();
    let labels = paths.iter().map(|p| path_label(p)).collect();
    let s = match family {
        Family::TreePo => FiniteStructure::tree_po(&parent)?,
        Family::TreePred => FiniteStructure::tree_pred(&parent)?,
        _ => return Err(Error::input("family", "not a tree family")),
    };
    Ok(s.with_labels(labels))
}
