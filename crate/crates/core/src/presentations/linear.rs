//! Linear orders written as finite sums of blocks.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{Family, FiniteStructure, Relation};

/// One summand of a block string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// A finite chain with `k ≥ 1` points.
    Fin(u64),
    Omega,
    OmegaStar,
    Zeta,
    /// The rationals.
    Eta,
}

impl Block {
    fn has_min(self) -> bool {
        matches!(self, Block::Fin(_) | Block::Omega)
    }

    fn has_max(self) -> bool {
        matches!(self, Block::Fin(_) | Block::OmegaStar)
    }

    /// Name as used in files.
    pub fn name(self) -> String {
        match self {
            Block::Fin(k) => format!("Fin {k}"),
            Block::Omega => "OMEGA".into(),
            Block::OmegaStar => "OMEGA_STAR".into(),
            Block::Zeta => "ZETA".into(),
            Block::Eta => "ETA".into(),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Block {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Block::Fin(k) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("Fin", k)?;
                m.end()
            }
            other => s.serialize_str(&other.name()),
        }
    }
}

/// A linear order `B_0 + B_1 + … + B_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinOrderPres {
    pub blocks: Vec<Block>,
}

impl LinOrderPres {
    pub fn new(blocks: Vec<Block>) -> Self {
        LinOrderPres { blocks }
    }

    /// Checks `Fin(k)` has `k ≥ 1`.
    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.blocks.iter().enumerate() {
            if *b == Block::Fin(0) {
                return Err(Error::input(format!("blocks[{i}]"), "Fin block needs k >= 1"));
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        normalize_linear(self) == *self
    }
}

/// Canonical form under the block rewrite rules.
///
/// `ZETA` is first unfolded into `OMEGA_STAR OMEGA` so that the finite-absorption
/// rules can see its halves; the pair is folded back at the end.
pub fn normalize_linear(p: &LinOrderPres) -> LinOrderPres {
    let mut v: Vec<Block> = Vec::new();
    for &b in &p.blocks {
        match b {
            Block::Zeta => v.extend([Block::OmegaStar, Block::Omega]),
            Block::Fin(0) => {}
            b => v.push(b),
        }
    }
    loop {
        let mut changed = false;
        let mut out: Vec<Block> = Vec::with_capacity(v.len());
        for b in v {
            out.push(b);
            loop {
                let k = out.len();
                let rewrite = match out.as_slice() {
                    [.., Block::Fin(a), Block::Fin(c)] => Some((2, vec![Block::Fin(a + c)])),
                    [.., Block::Eta, Block::Eta] => Some((2, vec![Block::Eta])),
                    [.., Block::Eta, Block::Fin(1), Block::Eta] => Some((3, vec![Block::Eta])),
                    [.., Block::Fin(_), Block::Omega] => Some((2, vec![Block::Omega])),
                    [.., Block::OmegaStar, Block::Fin(_)] => Some((2, vec![Block::OmegaStar])),
                    _ => None,
                };
                match rewrite {
                    Some((len, rep)) => {
                        out.truncate(k - len);
                        out.extend(rep);
                        changed = true;
                    }
                    None => break,
                }
            }
        }
        v = out;
        if !changed {
            break;
        }
    }
    let mut out = Vec::with_capacity(v.len());
    for b in v {
        if b == Block::Omega && out.last() == Some(&Block::OmegaStar) {
            out.pop();
            out.push(Block::Zeta);
        } else {
            out.push(b);
        }
    }
    LinOrderPres { blocks: out }
}

/// Piece of the condensation of an order: a maximal set of points at finite
/// distance from each other, or a dense stretch of singleton pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    /// A finite piece with this many points.
    Finite(u64),
    Omega,
    OmegaStar,
    Zeta,
    Dense,
}

/// Isomorphism invariant computed from the condensation, independently of the
/// rewrite rules: the sequence of pieces, with adjacent dense stretches merged
/// and single points between dense stretches absorbed.
pub fn condensation(p: &LinOrderPres) -> Vec<Piece> {
    // glue blocks when the left one has a maximum and the right one a minimum
    let mut pieces: Vec<Piece> = Vec::new();
    let mut cur: Option<(bool, bool, u64, bool)> = None; // (has_min, has_max, size, finite)
    let flush = |cur: &mut Option<(bool, bool, u64, bool)>, pieces: &mut Vec<Piece>| {
        if let Some((lo, hi, k, fin)) = cur.take() {
            pieces.push(match (fin, lo, hi) {
                (true, _, _) => Piece::Finite(k),
                (false, true, false) => Piece::Omega,
                (false, false, true) => Piece::OmegaStar,
                (false, false, false) => Piece::Zeta,
                (false, true, true) => unreachable!("infinite piece with both endpoints"),
            });
        }
    };
    for &b in &p.blocks {
        if b == Block::Eta {
            flush(&mut cur, &mut pieces);
            pieces.push(Piece::Dense);
            continue;
        }
        if b == Block::Fin(0) {
            continue;
        }
        // ZETA neither starts nor ends a gluing run
        let (lo, hi) = (b.has_min(), b.has_max());
        let (size, fin) = match b {
            Block::Fin(k) => (k, true),
            _ => (0, false),
        };
        match cur {
            Some((clo, true, csize, cfin)) if lo => {
                cur = Some((clo, hi, csize + size, cfin && fin));
            }
            _ => {
                flush(&mut cur, &mut pieces);
                cur = Some((lo, hi, size, fin));
            }
        }
    }
    flush(&mut cur, &mut pieces);
    loop {
        let before = pieces.len();
        let mut out: Vec<Piece> = Vec::new();
        for piece in pieces {
            out.push(piece);
            loop {
                match out.as_slice() {
                    [.., Piece::Dense, Piece::Dense] => {
                        out.pop();
                    }
                    [.., Piece::Dense, Piece::Finite(1), Piece::Dense] => {
                        out.truncate(out.len() - 2);
                    }
                    _ => break,
                }
            }
        }
        pieces = out;
        if pieces.len() == before {
            return pieces;
        }
    }
}

/// Position of a point inside its block.
///
/// Finite blocks use `1..=k`; `OMEGA` uses `0, 1, …`; `OMEGA_STAR` uses
/// `0, -1, …`; `ZETA` uses the integers; `ETA` uses dyadic rationals in `(0,1)`
/// written `num / 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Int(i64),
    Dyadic { num: u64, exp: u32 },
}

impl Coord {
    pub(crate) fn cmp_within(&self, other: &Coord) -> Ordering {
        match (self, other) {
            (Coord::Int(a), Coord::Int(b)) => a.cmp(b),
            (Coord::Dyadic { num: a, exp: ea }, Coord::Dyadic { num: b, exp: eb }) => {
                let e = (*ea).max(*eb);
                ((*a as u128) << (e - ea)).cmp(&((*b as u128) << (e - eb)))
            }
            _ => Ordering::Equal,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Int(k) => write!(f, "{k}"),
            Coord::Dyadic { num, exp } => write!(f, "{num}/{}", 1u64 << exp),
        }
    }
}

/// The `j`-th point of a block in fill order, if the block has that many.
fn nth_point(b: Block, j: u64) -> Option<Coord> {
    Some(match b {
        Block::Fin(k) => {
            if j >= k {
                return None;
            }
            Coord::Int(j as i64 + 1)
        }
        Block::Omega => Coord::Int(j as i64),
        Block::OmegaStar => Coord::Int(-(j as i64)),
        Block::Zeta => {
            let j = j as i64;
            Coord::Int(if j % 2 == 1 { (j + 1) / 2 } else { -(j / 2) })
        }
        Block::Eta => {
            // breadth-first dyadic insertion: 1/2, 1/4, 3/4, 1/8, …
            let exp = 64 - (j + 1).leading_zeros();
            let first = 1u64 << (exp - 1);
            let num = 2 * (j + 1 - first) + 1;
            Coord::Dyadic { num, exp }
        }
    })
}

/// The first `n` points of the fill order: round-robin over the blocks.
pub fn points(p: &LinOrderPres, n: usize) -> Vec<(usize, Coord)> {
    let mut out = Vec::with_capacity(n);
    let mut round = 0u64;
    while out.len() < n {
        let mut any = false;
        for (i, &b) in p.blocks.iter().enumerate() {
            if out.len() == n {
                break;
            }
            if let Some(c) = nth_point(b, round) {
                out.push((i, c));
                any = true;
            }
        }
        if !any {
            break;
        }
        round += 1;
    }
    out
}

/// A finite suborder of `p` on its first `n` points in fill order.
pub fn materialize_linear(p: &LinOrderPres, n: usize) -> Result<FiniteStructure> {
    let pts = points(p, n);
    if pts.len() < n {
        return Err(Error::Precondition(format!(
            "the order has only {} points, {n} requested",
            pts.len()
        )));
    }
    let cmp = |a: &(usize, Coord), b: &(usize, Coord)| a.0.cmp(&b.0).then(a.1.cmp_within(&b.1));
    let rel = Relation::from_fn(n, |a, b| cmp(&pts[a], &pts[b]) != Ordering::Greater);
    let labels = pts.iter().map(|(i, c)| format!("b{i}:{c}")).collect();
    Ok(FiniteStructure::from_parts(Family::Order, n, vec![rel], vec![]).with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::Block::*;
    use super::*;

    fn norm(v: &[Block]) -> Vec<Block> {
        normalize_linear(&LinOrderPres::new(v.to_vec())).blocks
    }

    #[test]
    fn rewrite_examples() {
        assert_eq!(norm(&[Fin(2), Fin(3)]), vec![Fin(5)]);
        assert_eq!(norm(&[Eta, Fin(1), Eta]), vec![Eta]);
        assert_eq!(norm(&[OmegaStar, Omega]), vec![Zeta]);
        assert_eq!(norm(&[OmegaStar, Fin(3), Omega]), vec![Zeta]);
        assert_eq!(norm(&[Zeta, Fin(2), Zeta]), vec![Zeta, Fin(2), Zeta]);
        assert_eq!(norm(&[Zeta, Zeta, Fin(1)]), vec![Zeta, Zeta, Fin(1)]);
        assert_eq!(norm(&[Fin(1), Zeta]), vec![Fin(1), Zeta]);
    }

    #[test]
    fn eta_labels_are_dyadic() {
        let s = materialize_linear(&LinOrderPres::new(vec![Eta]), 3).unwrap();
        assert_eq!(s.labels().unwrap(), ["b0:1/2", "b0:1/4", "b0:3/4"]);
        assert!(s.rel(0, 1, 0) && s.rel(0, 0, 2));
    }

    #[test]
    fn condensation_examples() {
        let c = |v: &[Block]| condensation(&LinOrderPres::new(v.to_vec()));
        assert_eq!(c(&[OmegaStar, Fin(2), Omega]), vec![Piece::Zeta]);
        assert_eq!(c(&[Eta, Fin(1), Eta]), vec![Piece::Dense]);
        assert_ne!(c(&[Fin(1), Eta]), c(&[Eta, Fin(1)]));
    }
}
