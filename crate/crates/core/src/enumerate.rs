//! One representative per isomorphism type, per family and size.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::search::canonical_code;
use crate::structure::{Family, FiniteStructure};

/// An unlabelled rooted tree: the multiset of child subtrees, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape(pub Vec<Shape>);

impl Shape {
    pub fn size(&self) -> usize {
        1 + self.0.iter().map(Shape::size).sum::<usize>()
    }

    pub fn leaves(&self) -> usize {
        if self.0.is_empty() {
            1
        } else {
            self.0.iter().map(Shape::leaves).sum()
        }
    }

    /// Parent array in preorder; node 0 is the root.
    pub fn parent_array(&self) -> Vec<Option<usize>> {
        fn go(s: &Shape, parent: Option<usize>, out: &mut Vec<Option<usize>>) {
            let me = out.len();
            out.push(parent);
            for c in &s.0 {
                go(c, Some(me), out);
            }
        }
        let mut out = Vec::new();
        go(self, None, &mut out);
        out
    }
}

/// Partitions of `n` into parts, largest part first, in decreasing lex order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Multisets over `items` (each with a weight) of total weight `n`.
fn multisets<T: Clone>(items: &[(T, usize)], n: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(
        items: &[(T, usize)],
        start: usize,
        n: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            let (t, w) = &items[i];
            if *w <= n && *w > 0 {
                cur.push(t.clone());
                go(items, i, n - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, 0, n, &mut Vec::new(), &mut out);
    out
}

fn sorted(mut v: Vec<Shape>) -> Shape {
    v.sort();
    Shape(v)
}

/// All rooted trees with exactly `n` nodes.
pub fn rooted_trees(n: usize) -> Vec<Shape> {
    if n == 0 {
        return vec![];
    }
    let mut by_size: Vec<Vec<Shape>> = vec![vec![], vec![Shape(vec![])]];
    for k in 2..=n {
        let items: Vec<(Shape, usize)> = (1..k)
            .flat_map(|j| by_size[j].iter().map(move |t| (t.clone(), j)))
            .collect();
        let mut trees: Vec<Shape> = multisets(&items, k - 1).into_iter().map(sorted).collect();
        trees.sort();
        trees.dedup();
        by_size.push(trees);
    }
    by_size.swap_remove(n)
}

/// Trees whose leaves all sit at depth `h`, with exactly `leaves` leaves.
pub fn level_trees(h: usize, leaves: usize) -> Vec<Shape> {
    if leaves == 0 {
        return vec![];
    }
    if h == 0 {
        return if leaves == 1 { vec![Shape(vec![])] } else { vec![] };
    }
    let items: Vec<(Shape, usize)> = (1..=leaves)
        .flat_map(|j| level_trees(h - 1, j).into_iter().map(move |t| (t, j)))
        .collect();
    let mut out: Vec<Shape> = multisets(&items, leaves).into_iter().map(sorted).collect();
    out.sort();
    out.dedup();
    out
}

/// The nested equivalence structure whose class tree is `t` (leaves at depth `k+1`).
pub fn nested_from_level_tree(t: &Shape, k: usize) -> Result<FiniteStructure> {
    // number the leaves left to right; E_i classes are leaf sets below depth-i nodes
    let mut parts: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    fn go(s: &Shape, depth: usize, k: usize, next: &mut usize, parts: &mut Vec<Vec<Vec<usize>>>) -> Vec<usize> {
        let leaves = if s.0.is_empty() {
            let x = *next;
            *next += 1;
            vec![x]
        } else {
            s.0.iter().flat_map(|c| go(c, depth + 1, k, next, parts)).collect()
        };
        if (1..=k).contains(&depth) {
            parts[depth - 1].push(leaves.clone());
        }
        leaves
    }
    let mut next = 0;
    go(t, 0, k, &mut next, &mut parts);
    FiniteStructure::nested(next, &parts)
}

/// One structure per isomorphism type of `family` on exactly `n` elements,
/// in a fixed deterministic order.
pub fn enumerate_structures(family: Family, n: usize) -> Result<Vec<FiniteStructure>> {
    if n == 0 {
        return Err(Error::input("n", "size must be at least 1"));
    }
    Ok(match family {
        Family::Order => vec![FiniteStructure::chain(n)],
        Family::Equivalence => partitions(n)
            .into_iter()
            .map(|p| FiniteStructure::equivalence(n, &blocks(&p)))
            .collect::<Result<_>>()?,
        Family::Injection => partitions(n)
            .into_iter()
            .map(|p| {
                let mut f = vec![0; n];
                for b in blocks(&p) {
                    for (i, &x) in b.iter().enumerate() {
                        f[x] = b[(i + 1) % b.len()];
                    }
                }
                FiniteStructure::injection(f)
            })
            .collect::<Result<_>>()?,
        Family::Graph => graphs(n)?,
        Family::TreePo => rooted_trees(n)
            .iter()
            .map(|t| FiniteStructure::tree_po(&t.parent_array()))
            .collect::<Result<_>>()?,
        Family::TreePred => rooted_trees(n)
            .iter()
            .map(|t| FiniteStructure::tree_pred(&t.parent_array()))
            .collect::<Result<_>>()?,
        Family::NestedEq(k) => level_trees(k + 1, n)
            .iter()
            .map(|t| nested_from_level_tree(t, k))
            .collect::<Result<_>>()?,
    })
}

/// Consecutive blocks `0..p0, p0..p0+p1, …`.
fn blocks(parts: &[usize]) -> Vec<Vec<usize>> {
    let mut at = 0;
    parts
        .iter()
        .map(|&p| {
            let b = (at..at + p).collect();
            at += p;
            b
        })
        .collect()
}

/// Graphs by vertex augmentation, deduplicated by canonical code.
fn graphs(n: usize) -> Result<Vec<FiniteStructure>> {
    let mut level = vec![FiniteStructure::graph(1, &[])?];
    for m in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let old: Vec<(usize, usize)> = (0..m - 1)
                .flat_map(|a| (a + 1..m - 1).map(move |b| (a, b)))
                .filter(|&(a, b)| g.rel(0, a, b))
                .collect();
            for mask in 0u32..(1 << (m - 1)) {
                let mut edges = old.clone();
                edges.extend((0..m - 1).filter(|&a| mask >> a & 1 == 1).map(|a| (a, m - 1)));
                let h = FiniteStructure::graph(m, &edges)?;
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let count = |f, n| enumerate_structures(f, n).unwrap().len();
        assert_eq!(count(Family::Equivalence, 3), 3);
        assert_eq!(count(Family::Order, 5), 1);
        assert_eq!(count(Family::Injection, 3), 3);
        assert_eq!(count(Family::Equivalence, 6), 11);
        // OEIS A000081 and A000088
        assert_eq!(count(Family::TreePo, 6), 20);
        assert_eq!(count(Family::TreePred, 7), 48);
        assert_eq!(count(Family::Graph, 5), 34);
        // level trees: 5 of height 2 on 4 leaves, 6 of height 3 on 3 leaves
        assert_eq!(count(Family::NestedEq(1), 4), 5);
        assert_eq!(count(Family::NestedEq(2), 3), 6);
    }

    #[test]
    fn nested_shape() {
        let s = &enumerate_structures(Family::NestedEq(2), 2).unwrap()[0];
        assert_eq!(s.family(), Family::NestedEq(2));
        assert_eq!(s.size(), 2);
    }
}
