//! Fill orders shared by the count-based presentations.

use crate::ext::ExtCount;

/// A sequence of parts given by `(part, multiplicity)`.
///
/// Finitely repeated parts come first, in the given order; parts with infinite
/// multiplicity then alternate round-robin.
pub struct Interleaved<T> {
    finite: Vec<T>,
    infinite: Vec<T>,
}

impl<T: Clone> Interleaved<T> {
    pub fn new(items: impl IntoIterator<Item = (T, ExtCount)>) -> Self {
        let mut finite = Vec::new();
        let mut infinite = Vec::new();
        for (t, m) in items {
            match m.finite() {
                Some(k) => finite.extend(std::iter::repeat_n(t, k as usize)),
                None => infinite.push(t),
            }
        }
        Interleaved { finite, infinite }
    }

    /// The `j`-th part, with the index of its round among the infinite parts.
    pub fn get(&self, j: usize) -> Option<(T, usize)> {
        if j < self.finite.len() {
            return Some((self.finite[j].clone(), 0));
        }
        if self.infinite.is_empty() {
            return None;
        }
        let r = j - self.finite.len();
        let q = self.infinite.len();
        Some((self.infinite[r % q].clone(), r / q))
    }
}

/// The first `n` points `(part, position)` of a disjoint union, in diagonal
/// order: position `p` of part `c` comes at step `c + p`, parts in increasing
/// order within a step. `size(c)` is `None` past the last part.
pub fn dovetail(n: usize, size: impl Fn(usize) -> Option<ExtCount>) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(n);
    let total: Option<u64> = {
        let mut t = Some(0u64);
        let mut c = 0;
        loop {
            match size(c) {
                None => break,
                Some(ExtCount::Omega) => {
                    t = None;
                    break;
                }
                Some(ExtCount::Fin(k)) => t = t.map(|t| t + k),
            }
            c += 1;
            if c > n + 1 {
                // infinitely many parts; sizes are at least one so enough points exist
                t = None;
                break;
            }
        }
        t
    };
    let want = match total {
        Some(t) => n.min(t as usize),
        None => n,
    };
    let mut d = 0usize;
    while out.len() < want {
        for c in 0..=d {
            let p = (d - c) as u64;
            match size(c) {
                Some(s) if ExtCount::Fin(p) < s => out.push((c, p)),
                _ => {}
            }
            if out.len() == want {
                break;
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{Fin, Omega};

    #[test]
    fn interleaving() {
        let parts = Interleaved::new([("a", Fin(2)), ("x", Omega), ("b", Fin(1)), ("y", Omega)]);
        let got: Vec<&str> = (0..7).map(|j| parts.get(j).unwrap().0).collect();
        assert_eq!(got, ["a", "a", "b", "x", "y", "x", "y"]);
    }

    #[test]
    fn diagonal_fill() {
        let pts = dovetail(4, |_| Some(Fin(2)));
        assert_eq!(pts, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let pts = dovetail(10, |c| (c < 1).then_some(Fin(3)));
        assert_eq!(pts.len(), 3);
    }
}
