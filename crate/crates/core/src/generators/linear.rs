//! `LIN_INF` and `LIN_COF`: orders that become dense when `W` is large.
//!
//! `A^0 = {0}` and stage `s+1` adds the element `s+1`: as the new least
//! element when `s+1 = 3t+1`, as the new greatest when `s+1 = 3t+2`, and when
//! `s+1 = 3t+3` between the successor pair with the least code, provided
//! something entered `W` at stage `t+1` (`LIN_INF`) or the pair lies inside
//! `W_{t+1}` (`LIN_COF`). If there is no such pair, `s+1` becomes least.

use serde_json::json;

use super::{cantor_pair, number_labels, Construction, LimitSet, Schedule, StageSnapshot, Tail};
use crate::error::Result;
use crate::presentations::{normalize_linear, Block, LinOrderPres, Presentation};
use crate::structure::FiniteStructure;

pub(super) struct Lin {
    cof: bool,
    order: Vec<u64>,
    inserted: Vec<u64>,
}

impl Lin {
    pub fn new(cof: bool) -> Self {
        Lin {
            cof,
            order: vec![0],
            inserted: Vec::new(),
        }
    }
}

/// Index `j` of the least-code pair `(seq[j], seq[j+1])` accepted by `ok`.
fn least_pair(seq: &[u64], ok: impl Fn(u64, u64) -> bool) -> Option<usize> {
    (0..seq.len().saturating_sub(1))
        .filter(|&j| ok(seq[j], seq[j + 1]))
        .min_by_key(|&j| cantor_pair(seq[j], seq[j + 1]))
}

/// Where stage `s` puts `s`, given the order before it: the position in the
/// new sequence.
fn slot(cof: bool, before: &[u64], s: u64, w: &Schedule) -> usize {
    match s % 3 {
        1 => 0,
        2 => before.len(),
        _ => {
            let t1 = s / 3;
            let j = if cof {
                least_pair(before, |a, b| w.contains_by(a, t1) && w.contains_by(b, t1))
            } else if w.entering(t1).is_some() {
                least_pair(before, |_, _| true)
            } else {
                None
            };
            j.map_or(0, |j| j + 1)
        }
    }
}

impl Construction for Lin {
    fn step(&mut self, s: u64, w: &Schedule) {
        let at = slot(self.cof, &self.order, s, w);
        if s % 3 == 0 && at > 0 {
            self.inserted.push(s);
        }
        self.order.insert(at, s);
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let seq: Vec<usize> = self.order.iter().map(|&x| x as usize).collect();
        let st = FiniteStructure::order_from_sequence(&seq)?.with_labels(number_labels(0..self.order.len() as u64));
        Ok((st, json!({"order": self.order, "insertions": self.inserted})))
    }
}

/// The elements from least to greatest.
fn sequence(snap: &StageSnapshot) -> Vec<u64> {
    let st = &snap.structure;
    let n = st.size();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&x| (0..n).filter(|&y| st.rel(0, y, x)).count());
    idx.into_iter().map(|x| x as u64).collect()
}

/// The stage-`x` order is the final order restricted to `0..=x`, so each
/// placement can be re-derived from the final order alone.
pub(super) fn check(cof: bool, snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    if snap.structure.size() as u64 != s + 1 {
        out.push(format!("universe has {} elements, expected {}", snap.structure.size(), s + 1));
        return;
    }
    if snap.numbers() != Some((0..=s).collect()) {
        out.push("elements are not labelled 0..=s".into());
        return;
    }
    let seq = sequence(snap);
    let upto = |x: u64| -> Vec<u64> { seq.iter().copied().filter(|&y| y <= x).collect() };
    for x in 1..=s {
        let now = upto(x);
        let before: Vec<u64> = now.iter().copied().filter(|&y| y < x).collect();
        let pos = now.iter().position(|&y| y == x).unwrap();
        let want = slot(cof, &before, x, w);
        if pos != want {
            out.push(format!("element {x} sits at position {pos} of stage {x}, expected {want}"));
        }
    }
    if cof {
        // An element outside W_t for every consulted t keeps the neighbours it
        // had on arrival: nothing is put next to it.
        let wt = s / 3;
        for x in 0..=s {
            if w.contains_by(x, wt) {
                continue;
            }
            let entry = upto(x.max(1));
            let now_pos = seq.iter().position(|&y| y == x).unwrap();
            let p = entry.iter().position(|&y| y == x).unwrap();
            let mut nbrs = Vec::new();
            if p > 0 {
                nbrs.push((entry[p - 1], now_pos.checked_sub(1).map(|i| seq[i])));
            }
            if p + 1 < entry.len() {
                nbrs.push((entry[p + 1], seq.get(now_pos + 1).copied()));
            }
            for (was, is) in nbrs {
                if Some(was) != is {
                    out.push(format!("{x} is outside W but lost its neighbour {was}"));
                }
            }
        }
    }
}

pub(super) fn limit(cof: bool, set: &LimitSet) -> Result<Presentation> {
    let blocks = match (cof, set.tail) {
        (false, Tail::Finite) | (true, Tail::Finite) => vec![Block::Zeta],
        (false, _) => vec![Block::Eta],
        (true, Tail::Infinite) => {
            return Err(crate::error::Error::Unsupported(
                "LIN_COF with a coinfinite W has infinitely many successivities placed by the enumeration; \
                 no block presentation is determined"
                    .into(),
            ))
        }
        (true, Tail::Cofinite) => cof_blocks(set),
    };
    Ok(Presentation::Linear(normalize_linear(&LinOrderPres::new(blocks))))
}

/// With `W` cofinite only pairs touching the finite complement `F` survive.
///
/// An element of `F` has both neighbours three stages after it arrives and
/// keeps them, and every pair inside `W` is eventually split. The runs of
/// surviving pairs are therefore visible at that stage, with dense parts
/// between and around them.
fn cof_blocks(set: &LimitSet) -> Vec<Block> {
    let missing = set.missing();
    let upto = set.tail_start() + set.w.last_stage() + 3;
    let w = set.completed(upto);
    let mut lin = Lin::new(true);
    for s in 1..=upto {
        lin.step(s, &w);
    }
    let seq = &lin.order;
    let out_of_w = |x: u64| missing.contains(&x);
    let mut blocks = vec![Block::Eta];
    let mut j = 0;
    while j + 1 < seq.len() {
        if out_of_w(seq[j]) || out_of_w(seq[j + 1]) {
            let start = j;
            while j + 1 < seq.len() && (out_of_w(seq[j]) || out_of_w(seq[j + 1])) {
                j += 1;
            }
            blocks.push(Block::Fin((j - start + 1) as u64));
            blocks.push(Block::Eta);
        }
        j += 1;
    }
    blocks
}
