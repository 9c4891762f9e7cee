//! Linear orders given as block strings.
//!
//! Points are addressed on the normalized form as `(block, position)`, with
//! positions `1..=k` inside a finite block. The special points are exactly the
//! points of finite blocks: in a weakly ultrahomogeneous order every other point
//! lies in a dense stretch.

use serde::Serialize;

use super::{anchors, ExceptionalDescriptor, Report, Verdict};
use crate::error::{Error, Result};
use crate::presentations::linear::{materialize_linear, normalize_linear, Block, LinOrderPres};
use crate::structure::Family;

/// `(block index, position)` on the normalized form.
pub type Point = (usize, u64);

/// Beyond this many minimal sets the enumeration stops.
pub const MAX_MINIMAL_SETS: usize = 4096;
/// Finite blocks longer than this are not enumerated.
const MAX_ENUMERATED_BLOCK: u64 = 200;
/// Special points are listed individually only up to this many.
const MAX_LISTED_POINTS: u64 = 10_000;

/// Why a set fails to be exceptional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum LinearViolation {
    /// Infinitely many successivities: no finite set is exceptional.
    NotWuh,
    /// Condition (i): a successor pair lies outside the set.
    SuccessorPair { a: Point, b: Point },
    /// Condition (ii): an end of a finite block next to a dense part is missing.
    MissingEnd { a: Point },
}

impl LinearViolation {
    /// `"i"`, `"ii"` or `"not-wuh"`.
    pub fn condition(&self) -> &'static str {
        match self {
            LinearViolation::NotWuh => "not-wuh",
            LinearViolation::SuccessorPair { .. } => "i",
            LinearViolation::MissingEnd { .. } => "ii",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearCheck {
    pub holds: bool,
    pub violation: Option<LinearViolation>,
}

fn is_wuh(p: &LinOrderPres) -> bool {
    !p.blocks.iter().any(|b| matches!(b, Block::Omega | Block::OmegaStar | Block::Zeta))
}

/// For each finite block of the normalized order: whether its first and last
/// points are forced into every exceptional set.
fn forced_ends(p: &LinOrderPres) -> Vec<(usize, u64, bool, bool)> {
    let m = p.blocks.len();
    p.blocks
        .iter()
        .enumerate()
        .filter_map(|(i, b)| match b {
            Block::Fin(k) => Some((i, *k, i > 0, i + 1 < m)),
            _ => None,
        })
        .collect()
}

/// Names `a1, a2, …` of the special points, in order.
pub fn special_points(p: &LinOrderPres) -> Vec<Point> {
    let q = normalize_linear(p);
    forced_ends(&q)
        .into_iter()
        .flat_map(|(i, k, _, _)| (1..=k).map(move |j| (i, j)))
        .collect()
}

fn point_name(q: &LinOrderPres, pt: Point) -> String {
    let before: u64 = q.blocks[..pt.0]
        .iter()
        .map(|b| match b {
            Block::Fin(k) => *k,
            _ => 0,
        })
        .sum();
    format!("a{}", before + pt.1)
}

fn check_coords(q: &LinOrderPres, s: &[Point]) -> Result<()> {
    for (n, &(i, j)) in s.iter().enumerate() {
        match q.blocks.get(i) {
            None => return Err(Error::input(format!("S[{n}][0]"), format!("no block {i}"))),
            Some(Block::Fin(k)) if j == 0 || j > *k => {
                return Err(Error::input(format!("S[{n}][1]"), format!("block {i} has positions 1..={k}")))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Whether `s` is an exceptional set. `s` uses coordinates on the normalized
/// form; members outside finite blocks are not special and are ignored.
pub fn is_exceptional_linear(p: &LinOrderPres, s: &[Point]) -> Result<LinearCheck> {
    p.validate()?;
    let q = normalize_linear(p);
    check_coords(&q, s)?;
    if !is_wuh(&q) {
        return Ok(LinearCheck {
            holds: false,
            violation: Some(LinearViolation::NotWuh),
        });
    }
    let fail = |v| Ok(LinearCheck {
        holds: false,
        violation: Some(v),
    });
    let ends = forced_ends(&q);
    let has = |i: usize, j: u64| s.contains(&(i, j));
    for &(i, k, _, _) in &ends {
        if let Some(j) = (1..k).find(|&j| !has(i, j) && !has(i, j + 1)) {
            return fail(LinearViolation::SuccessorPair { a: (i, j), b: (i, j + 1) });
        }
    }
    for &(i, k, first, last) in &ends {
        if first && !has(i, 1) {
            return fail(LinearViolation::MissingEnd { a: (i, 1) });
        }
        if last && !has(i, k) {
            return fail(LinearViolation::MissingEnd { a: (i, k) });
        }
    }
    Ok(LinearCheck {
        holds: true,
        violation: None,
    })
}

/// `D(S)`: `S` together with every special point.
pub fn definable_closure_linear(p: &LinOrderPres, s: &[Point]) -> Result<Vec<Point>> {
    let check = is_exceptional_linear(p, s)?;
    if !check.holds {
        return Err(Error::Precondition("S is not an exceptional set".into()));
    }
    let mut out = special_points(p);
    out.extend_from_slice(s);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Minimal subsets of positions `1..=k` that contain the forced ends, leave no
/// two adjacent positions out, and keep every unforced member necessary.
fn block_minimal_sets(k: u64, first: bool, last: bool, limit: usize) -> (Vec<Vec<u64>>, bool) {
    fn go(
        j: u64,
        k: u64,
        forced: &dyn Fn(u64) -> bool,
        cur: &mut Vec<bool>,
        out: &mut Vec<Vec<u64>>,
        limit: usize,
    ) -> bool {
        // position j-1 can be judged once j is decided
        let ok_prev = |cur: &Vec<bool>, i: usize| -> bool {
            let p = i as u64 + 1;
            if !cur[i] || forced(p) {
                return true;
            }
            let left_out = i > 0 && !cur[i - 1];
            let right_out = i + 1 < cur.len() && !cur[i + 1];
            left_out || right_out
        };
        if j > k {
            if !ok_prev(cur, k as usize - 1) {
                return true;
            }
            if out.len() == limit {
                return false;
            }
            out.push((1..=k).filter(|&p| cur[p as usize - 1]).collect());
            return true;
        }
        for take in [true, false] {
            if !take && forced(j) {
                continue;
            }
            if !take && j > 1 && !cur[j as usize - 2] {
                continue;
            }
            cur.push(take);
            let fine = j < 2 || ok_prev(cur, j as usize - 2);
            if fine && !go(j + 1, k, forced, cur, out, limit) {
                cur.pop();
                return false;
            }
            cur.pop();
        }
        true
    }
    if k > MAX_ENUMERATED_BLOCK {
        // far more than `limit` sets; none are listed
        return (vec![], true);
    }
    let forced = move |p: u64| (first && p == 1) || (last && p == k);
    let mut out = Vec::new();
    let complete = go(1, k, &forced, &mut Vec::new(), &mut out, limit);
    (out, !complete)
}

/// All minimal exceptional sets as point lists; the flag reports truncation.
pub fn minimal_exceptional_linear(p: &LinOrderPres) -> (Vec<Vec<Point>>, bool) {
    let q = normalize_linear(p);
    if !is_wuh(&q) {
        return (vec![], false);
    }
    let mut acc: Vec<Vec<Point>> = vec![vec![]];
    let mut truncated = false;
    for (i, k, first, last) in forced_ends(&q) {
        let (sets, t) = block_minimal_sets(k, first, last, MAX_MINIMAL_SETS);
        truncated |= t;
        let mut next = Vec::new();
        'outer: for a in &acc {
            for b in &sets {
                if next.len() == MAX_MINIMAL_SETS {
                    truncated = true;
                    break 'outer;
                }
                let mut v = a.clone();
                v.extend(b.iter().map(|&j| (i, j)));
                next.push(v);
            }
        }
        acc = next;
    }
    acc.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    (acc, truncated)
}

#[derive(Serialize)]
struct SpecialPoint {
    name: String,
    block: usize,
    position: u64,
}

pub fn analyze_linear(p: &LinOrderPres) -> Report {
    let q = normalize_linear(p);
    let mut r = Report::new(Family::Order);
    let wuh = is_wuh(&q);
    r.uh = Verdict::from_bool(matches!(q.blocks.as_slice(), [] | [Block::Fin(1)] | [Block::Eta]));
    r.wuh = Verdict::from_bool(wuh);
    r.cc = r.wuh;
    r.delta2_from_wuh();
    r.cite(anchors::LIN_UH);
    r.cite(anchors::LIN_WUH);
    r.cite(anchors::LIN_CC);
    r.detail("normalized", &q);
    if q.blocks.len() <= 1 && matches!(q.blocks.as_slice(), [] | [Block::Fin(1)]) {
        r.note("a finite chain with at most one point is trivially ultrahomogeneous");
    }
    if !wuh {
        r.note("an ω, ω* or ζ block contributes infinitely many successivities");
        return r;
    }
    r.cite(anchors::LIN_EXC);
    r.cite(anchors::LIN_DEF);
    let total: u64 = forced_ends(&q).iter().map(|e| e.1).sum();
    if total <= MAX_LISTED_POINTS {
        let pts: Vec<SpecialPoint> = special_points(&q)
            .into_iter()
            .map(|pt| SpecialPoint {
                name: point_name(&q, pt),
                block: pt.0,
                position: pt.1,
            })
            .collect();
        r.detail("special_points", pts);
    } else {
        r.detail("special_point_count", total);
    }
    let (sets, truncated) = minimal_exceptional_linear(&q);
    if truncated {
        r.note(format!("minimal exceptional sets truncated at {MAX_MINIMAL_SETS}"));
    }
    r.minimal_exceptional = sets
        .into_iter()
        .map(|s| {
            if s.is_empty() {
                ExceptionalDescriptor::empty()
            } else {
                let names = s.iter().map(|&pt| point_name(&q, pt)).collect();
                ExceptionalDescriptor::named("special points (block, position) on the normalized form", names)
            }
        })
        .collect();
    r.detail("definable_closure", "S together with all special points");
    r
}

/// The finite chain standing in for `p`: each dense stretch becomes one point.
/// A set of special points is exceptional in `p` iff it is exceptional in the
/// chain, since the stand-ins play the role of the unfixable dense neighbours.
pub fn finite_surrogate(p: &LinOrderPres) -> Result<(crate::structure::FiniteStructure, Vec<Option<Point>>)> {
    let q = normalize_linear(p);
    if !is_wuh(&q) {
        return Err(Error::Precondition("the order is not weakly ultrahomogeneous".into()));
    }
    let mut coords = Vec::new();
    for (i, b) in q.blocks.iter().enumerate() {
        match b {
            Block::Fin(k) => coords.extend((1..=*k).map(|j| Some((i, j)))),
            _ => coords.push(None),
        }
    }
    let blocks = vec![Block::Fin(coords.len() as u64)];
    let s = materialize_linear(&LinOrderPres::new(blocks), coords.len())?;
    Ok((s, coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use Block::*;

    fn lo(v: &[Block]) -> LinOrderPres {
        LinOrderPres::new(v.to_vec())
    }

    #[test]
    fn eta_fin5_eta() {
        let p = lo(&[Eta, Fin(5), Eta]);
        let r = analyze_linear(&p);
        assert!(r.wuh.is_yes() && r.uh.is_no());
        let got: Vec<Vec<String>> = r.minimal_exceptional.iter().map(|d| d.elements.clone().unwrap()).collect();
        assert_eq!(got, vec![vec!["a1", "a3", "a5"], vec!["a1", "a2", "a4", "a5"]]);
        assert!(is_exceptional_linear(&p, &[(1, 1), (1, 3), (1, 5)]).unwrap().holds);
        let c = is_exceptional_linear(&p, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(c.violation, Some(LinearViolation::MissingEnd { a: (1, 1) }));
        assert_eq!(
            definable_closure_linear(&p, &[(1, 1), (1, 3), (1, 5)]).unwrap(),
            (1..=5).map(|j| (1, j)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn small_cases() {
        let eta = analyze_linear(&lo(&[Eta]));
        assert!(eta.uh.is_yes());
        assert_eq!(eta.minimal_exceptional, vec![ExceptionalDescriptor::empty()]);
        assert!(definable_closure_linear(&lo(&[Eta]), &[]).unwrap().is_empty());
        assert!(analyze_linear(&lo(&[Omega])).wuh.is_no());
        let f3 = lo(&[Fin(3)]);
        assert!(is_exceptional_linear(&f3, &[(0, 2)]).unwrap().holds);
        assert_eq!(definable_closure_linear(&f3, &[(0, 2)]).unwrap(), vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(is_exceptional_linear(&f3, &[(0, 4)]).unwrap_err().kind(), "input");
        assert!(definable_closure_linear(&f3, &[]).is_err());
    }

    #[test]
    fn surrogate_agrees_with_oracle() {
        // each dense stretch becomes one point that is never in S
        let p = lo(&[Eta, Fin(5), Eta]);
        let (s, coords) = finite_surrogate(&p).unwrap();
        let o = Oracle::default();
        for m in 0u32..(1 << 5) {
            let set: Vec<Point> = (0..5).filter(|b| m >> b & 1 == 1).map(|b| (1, b as u64 + 1)).collect();
            let idx: Vec<usize> = coords
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_some_and(|c| set.contains(&c)))
                .map(|(x, _)| x)
                .collect();
            let want = o.is_exceptional(&s, &idx).unwrap().holds;
            assert_eq!(is_exceptional_linear(&p, &set).unwrap().holds, want, "{set:?}");
        }
    }
}
