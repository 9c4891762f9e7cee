//! Tree constructions, under `⪯` (`TREE_ORD_*`) and under the predecessor
//! function (`TREE_PRED_*`).
//!
//! `TREE_ORD_CHAIN` places every element above the root `0` and, for each
//! maximal run `n, …, n+L-1` of `W`, stacks the odd numbers `2x+1` and the
//! evens added when the `x` entered into one chain below `2n+1`. A run that
//! never ends gives `2n+1` infinitely many predecessors, so the limit is a
//! tree exactly when `W` is not cofinite.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use super::{number_labels, Construction, Kind, LimitSet, Schedule, StageSnapshot, Tail};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::presentations::{Presentation, TreePres};
use crate::structure::FiniteStructure;

fn po_snapshot(parent: &[Option<usize>], meta: serde_json::Value) -> Result<(FiniteStructure, serde_json::Value)> {
    let st = FiniteStructure::tree_po(parent)?.with_labels(number_labels(0..parent.len() as u64));
    Ok((st, meta))
}

/// Parent array of a tree snapshot, `None` at the root.
fn parents(snap: &StageSnapshot) -> Vec<Option<usize>> {
    snap.structure.parent_array()
}

fn check_numbered(snap: &StageSnapshot, n: usize, out: &mut Vec<String>) -> bool {
    if snap.structure.size() != n || snap.numbers() != Some((0..n as u64).collect()) {
        out.push(format!("universe is not {{0, …, {}}}", n as i64 - 1));
        return false;
    }
    if snap.structure.root() != Some(0) {
        out.push("the root is not 0".into());
        return false;
    }
    true
}

/// Chains are kept top first: each element's parent is the next one, and the
/// last hangs from the root.
pub(super) struct OrdChain {
    n: usize,
    chains: BTreeMap<u64, Vec<u64>>,
}

impl OrdChain {
    pub fn new() -> Self {
        OrdChain {
            n: 1,
            chains: BTreeMap::new(),
        }
    }
}

impl Construction for OrdChain {
    fn step(&mut self, s1: u64, w: &Schedule) {
        let s = s1 - 1;
        self.n += 2;
        let Some(m) = w.entering(s1) else { return };
        let ws = w.enumerated_by(s);
        let mut chain = Vec::new();
        if m > 0 && ws.contains(&(m - 1)) {
            let mut n = m - 1;
            while n > 0 && ws.contains(&(n - 1)) {
                n -= 1;
            }
            chain = self.chains.remove(&(2 * n + 1)).expect("every run has a chain");
        }
        chain.extend([2 * m + 1, 2 * s + 2]);
        if ws.contains(&(m + 1)) {
            chain.extend(self.chains.remove(&(2 * m + 3)).expect("every run has a chain"));
        }
        self.chains.insert(chain[0], chain);
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let mut parent: Vec<Option<usize>> = vec![Some(0); self.n];
        parent[0] = None;
        for c in self.chains.values() {
            for k in 0..c.len() {
                parent[c[k] as usize] = Some(c.get(k + 1).map_or(0, |&p| p as usize));
            }
        }
        let chains: Vec<&Vec<u64>> = self.chains.values().collect();
        po_snapshot(&parent, json!({"chains": chains, "non_tree_limit": true}))
    }
}

/// Maximal runs of consecutive numbers in `ws`.
fn runs(ws: &BTreeSet<u64>) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &x in ws {
        match out.last_mut() {
            Some((_, end)) if *end + 1 == x => *end = x,
            _ => out.push((x, x)),
        }
    }
    out
}

pub(super) fn check_chain(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    let n = (2 * s + 1) as usize;
    if !check_numbered(snap, n, out) {
        return;
    }
    // The run n..=e has the chain 2n+1, e_n, 2n+3, e_{n+1}, …, 2e+1, e_e, where
    // e_x = 2t is the even element added at the stage t when x entered.
    let mut expect: Vec<Option<usize>> = vec![Some(0); n];
    expect[0] = None;
    for (a, b) in runs(&w.enumerated_by(s)) {
        let chain: Vec<u64> = (a..=b).flat_map(|x| [2 * x + 1, 2 * w.stage_of(x).unwrap()]).collect();
        for k in 0..chain.len() {
            expect[chain[k] as usize] = Some(chain.get(k + 1).map_or(0, |&p| p as usize));
        }
    }
    for (x, (got, want)) in parents(snap).iter().zip(&expect).enumerate() {
        if got != want {
            out.push(format!("parent of {x} is {got:?}, expected {want:?}"));
        }
    }
}

/// Root `0` below everything; once `W` is nonempty at stage `t0`, the
/// elements `t0, t0+1, …` form a chain.
pub(super) struct OrdUh {
    parent: Vec<Option<usize>>,
}

impl OrdUh {
    pub fn new() -> Self {
        OrdUh { parent: vec![None] }
    }
}

impl Construction for OrdUh {
    fn step(&mut self, s: u64, w: &Schedule) {
        let p = if s > 1 && w.count_by(s - 1) > 0 { s - 1 } else { 0 };
        self.parent.push(Some(p as usize));
    }

    fn snapshot(&self, s: u64, w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let first = w.events().first().map(|&(_, t)| t).filter(|&t| t <= s);
        po_snapshot(&self.parent, json!({"first_nonempty_stage": first}))
    }
}

pub(super) fn check_ord_uh(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    if !check_numbered(snap, s as usize + 1, out) {
        return;
    }
    let st = &snap.structure;
    // u ≺ t for 0 < u < t iff W_u is nonempty.
    for t in 1..=s as usize {
        for u in 1..t {
            let want = w.count_by(u as u64) > 0;
            if st.rel(0, u, t) != want {
                out.push(format!("{u} ≺ {t} should be {want}"));
            }
        }
        if !st.rel(0, 0, t) {
            out.push(format!("0 is not below {t}"));
        }
    }
}

/// Root `0` below everything, and `2s+1 ≺ 2s+2` when something enters `W` at stage `s`.
pub(super) struct OrdWuh {
    parent: Vec<Option<usize>>,
}

impl OrdWuh {
    pub fn new() -> Self {
        OrdWuh {
            parent: vec![None, Some(0), Some(0)],
        }
    }
}

impl Construction for OrdWuh {
    fn step(&mut self, s: u64, w: &Schedule) {
        let a = 2 * s as usize + 1;
        self.parent.push(Some(0));
        self.parent.push(Some(if w.entering(s).is_some() { a } else { 0 }));
    }

    fn snapshot(&self, s: u64, w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        po_snapshot(&self.parent, json!({"rank_one_nodes": w.count_by(s)}))
    }
}

pub(super) fn check_ord_wuh(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    if !check_numbered(snap, (2 * s + 3) as usize, out) {
        return;
    }
    let par = parents(snap);
    for t in 0..=s {
        let (a, b) = ((2 * t + 1) as usize, (2 * t + 2) as usize);
        let want = if w.entering(t).is_some() { a } else { 0 };
        if par[a] != Some(0) || par[b] != Some(want) {
            out.push(format!("stage {t}: parents of {a}, {b} are {:?}, {:?}", par[a], par[b]));
        }
    }
}

/// Root `0` with children `1` and `2`. Every stage gives `1` a new child, and
/// `2` one more when something enters `W`.
pub(super) struct PredUh {
    parent: Vec<Option<usize>>,
}

impl PredUh {
    pub fn new() -> Self {
        PredUh {
            parent: vec![None, Some(0), Some(0)],
        }
    }
}

impl Construction for PredUh {
    fn step(&mut self, s: u64, w: &Schedule) {
        self.parent.push(Some(1));
        if w.entering(s).is_some() {
            self.parent.push(Some(2));
        }
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let st = FiniteStructure::tree_pred(&self.parent)?.with_labels(number_labels(0..self.parent.len() as u64));
        let count = |p| self.parent.iter().filter(|&&q| q == Some(p)).count();
        Ok((st, json!({"successors": {"1": count(1), "2": count(2)}})))
    }
}

fn child_counts(par: &[Option<usize>]) -> Vec<usize> {
    let mut c = vec![0; par.len()];
    for p in par.iter().flatten() {
        c[*p] += 1;
    }
    c
}

pub(super) fn check_pred_uh(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    let n = 3 + s as usize + w.count_by(s);
    if !check_numbered(snap, n, out) {
        return;
    }
    let par = parents(snap);
    let c = child_counts(&par);
    if par[1] != Some(0) || par[2] != Some(0) || c[0] != 2 {
        out.push("the root's children are not exactly 1 and 2".into());
    }
    if c[1] != s as usize {
        out.push(format!("1 has {} successors, expected {s}", c[1]));
    }
    if c[2] != w.count_by(s) {
        out.push(format!("2 has {} successors, expected |W_s| = {}", c[2], w.count_by(s)));
    }
    if c.iter().skip(3).any(|&k| k > 0) {
        out.push("a node of height 2 has successors".into());
    }
}

/// `k_n`: the length of the run `n+1, n+2, …` inside `ws`.
fn run_after(n: u64, ws: &BTreeSet<u64>) -> u64 {
    (n + 1..).take_while(|x| ws.contains(x)).count() as u64
}

/// Root `0` with children `2^n` for `n ≤ s`; after stage `s` the node `2^n`
/// has `n + k_n` successors for the run `n+1, …, n+k_n` inside `W_s`.
pub(super) struct PredWuh {
    parent: Vec<Option<usize>>,
    labels: Vec<String>,
    /// Element id of `2^n` and its successor count.
    nodes: Vec<(usize, u64)>,
}

impl PredWuh {
    pub fn new() -> Self {
        let mut t = PredWuh {
            parent: vec![None],
            labels: vec!["0".into()],
            nodes: Vec::new(),
        };
        t.grow(0, &BTreeSet::new());
        t
    }

    fn grow(&mut self, s: u64, ws: &BTreeSet<u64>) {
        self.parent.push(Some(0));
        self.labels.push(format!("2^{s}"));
        self.nodes.push((self.parent.len() - 1, 0));
        for n in 0..=s {
            let target = n + run_after(n, ws);
            let (id, have) = self.nodes[n as usize];
            for j in have..target {
                self.parent.push(Some(id));
                self.labels.push(format!("2^{n}.{j}"));
            }
            self.nodes[n as usize].1 = have.max(target);
        }
    }
}

impl Construction for PredWuh {
    fn step(&mut self, s: u64, w: &Schedule) {
        self.grow(s, &w.enumerated_by(s));
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let st = FiniteStructure::tree_pred(&self.parent)?.with_labels(self.labels.clone());
        let counts: Vec<u64> = self.nodes.iter().map(|&(_, k)| k).collect();
        Ok((st, json!({"successors": counts})))
    }
}

pub(super) fn check_pred_wuh(snap: &StageSnapshot, w: &Schedule, out: &mut Vec<String>) {
    let s = snap.stage;
    let st = &snap.structure;
    if st.root() != Some(0) || st.label(0) != "0" {
        out.push("the root is not 0".into());
        return;
    }
    let ws = w.enumerated_by(s);
    let par = parents(snap);
    let c = child_counts(&par);
    let mut seen = vec![false; s as usize + 1];
    for x in 1..st.size() {
        let l = st.label(x);
        if par[x] == Some(0) {
            let n = l.strip_prefix("2^").and_then(|v| v.parse::<u64>().ok());
            match n {
                Some(n) if n <= s && !seen[n as usize] => {
                    seen[n as usize] = true;
                    let want = n + run_after(n, &ws);
                    if c[x] as u64 != want {
                        out.push(format!("{l} has {} successors, expected {want}", c[x]));
                    }
                }
                _ => out.push(format!("unexpected child {l} of the root")),
            }
        } else if c[x] > 0 {
            out.push(format!("{l} is at height 2 but has successors"));
        }
    }
    if seen.iter().any(|b| !b) {
        out.push(format!("the root does not have the children 2^0, …, 2^{s}"));
    }
}

fn leaves(k: ExtCount) -> TreePres {
    TreePres::fan(TreePres::leaf(), k)
}

pub(super) fn limit(kind: Kind, set: &LimitSet) -> Result<Presentation> {
    let size = |t: Tail| if t.is_infinite() { Omega } else { Fin(set.w.len() as u64) };
    Ok(match kind {
        Kind::TreeOrdUh => {
            if !set.w.is_empty() || set.tail.is_infinite() {
                return Err(Error::Unsupported(
                    "once W is nonempty the TREE_ORD_UH limit contains an infinite branch, \
                     which has no finite-height presentation"
                        .into(),
                ));
            }
            Presentation::TreePo(leaves(Omega))
        }
        Kind::TreeOrdWuh => Presentation::TreePo(TreePres::node([
            (TreePres::leaf(), Omega),
            (leaves(Fin(1)), size(set.tail)),
        ])),
        Kind::TreePredUh => Presentation::TreePred(TreePres::node([
            (leaves(Omega), Fin(1)),
            (leaves(size(set.tail)), Fin(1)),
        ])),
        Kind::TreePredWuh => {
            if set.tail == Tail::Infinite {
                return Err(Error::Unsupported(
                    "with a coinfinite W the TREE_PRED_WUH successor counts depend on the unlisted \
                     part of W"
                        .into(),
                ));
            }
            Presentation::TreePred(pred_wuh_limit(set))
        }
        _ => unreachable!("not a tree construction"),
    })
}

/// `2^n` ends with `n + k_n` successors. Under the cofinite flag `k_n` is
/// infinite from the last missing element on. For a finite `W` the counts are
/// listed up past its largest element; beyond that `2^n` has exactly `n`
/// successors, a new count each time, which the tail stands for.
fn pred_wuh_limit(set: &LimitSet) -> TreePres {
    let have = set.w.elements();
    match set.tail {
        Tail::Cofinite => {
            let missing = set.missing();
            let last = missing.last().map_or(0, |&m| m);
            let mut kids: Vec<(TreePres, ExtCount)> = (0..last)
                .map(|n| {
                    let next_out = missing.iter().copied().find(|&f| f > n).unwrap();
                    (leaves(Fin(next_out - 1)), Fin(1))
                })
                .collect();
            kids.push((leaves(Omega), Omega));
            TreePres::node(kids)
        }
        Tail::Finite | Tail::Infinite => {
            let upto = set.tail_start() + 1;
            TreePres::node((0..=upto).map(|n| (leaves(Fin(n + run_after(n, &have))), Fin(1)))).with_tail()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::ext::{Fin, Omega};
    use crate::presentations::{Presentation, TreePres};

    fn chains(snap: &StageSnapshot) -> Vec<Vec<u64>> {
        serde_json::from_value(snap.metadata["chains"].clone()).unwrap()
    }

    #[test]
    fn chain_merges() {
        // 2 enters at stage 3 (even 6), 0 at stage 4 (even 8), 1 at stage 5
        // (even 10), joining both runs into 1, 8, 3, 10, 5, 6.
        let w = Schedule::new([(2, 3), (0, 4), (1, 5)]).unwrap();
        let snap = build_reduction(Kind::TreeOrdChain, &w, 4).unwrap();
        assert_eq!(chains(&snap), vec![vec![1, 8], vec![5, 6]]);
        let snap = build_reduction(Kind::TreeOrdChain, &w, 5).unwrap();
        assert_eq!(chains(&snap), vec![vec![1, 8, 3, 10, 5, 6]]);
        assert!(check_stage_invariants(Kind::TreeOrdChain, &snap, &w).unwrap().holds);
        assert_eq!(snap.structure.size(), 11);
    }

    #[test]
    fn ord_uh_chain_after_first_event() {
        let w = Schedule::new([(0, 3)]).unwrap();
        let snap = build_reduction(Kind::TreeOrdUh, &w, 6).unwrap();
        assert_eq!(
            snap.structure.parent_array(),
            vec![None, Some(0), Some(0), Some(0), Some(3), Some(4), Some(5)]
        );
        assert!(check_stage_invariants(Kind::TreeOrdUh, &snap, &w).unwrap().holds);
    }

    #[test]
    fn pred_wuh_counts() {
        // W_3 = {1, 2}: k_0 = 2, k_1 = 1, others 0.
        let w = Schedule::new([(2, 1), (1, 3)]).unwrap();
        let snap = build_reduction(Kind::TreePredWuh, &w, 3).unwrap();
        assert_eq!(snap.metadata["successors"], serde_json::json!([2, 2, 2, 3]));
        assert!(check_stage_invariants(Kind::TreePredWuh, &snap, &w).unwrap().holds);
    }

    #[test]
    fn limits() {
        let fan = |k| TreePres::fan(TreePres::leaf(), k);
        let w = Schedule::new([(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            limit_presentation(Kind::TreePredUh, &w, Tail::Finite).unwrap(),
            Presentation::TreePred(TreePres::node([(fan(Omega), Fin(1)), (fan(Fin(2)), Fin(1))]))
        );
        // W = {0, 1} ∪ [3, ∞) misses 2: 2^0 ends with 0 + 1 and 2^1 with 1 + 0
        // successors; every later node has infinitely many.
        let w = Schedule::new([(0, 1), (1, 2), (3, 3)]).unwrap();
        assert_eq!(
            limit_presentation(Kind::TreePredWuh, &w, Tail::Cofinite).unwrap(),
            Presentation::TreePred(TreePres::node([(fan(Fin(1)), Fin(2)), (fan(Omega), Omega)]))
        );
        assert_eq!(
            limit_presentation(Kind::TreeOrdUh, &Schedule::empty(), Tail::Finite).unwrap(),
            Presentation::TreePo(fan(Omega))
        );
        assert_eq!(limit_presentation(Kind::TreeOrdUh, &w, Tail::Finite).unwrap_err().kind(), "unsupported");
        assert_eq!(limit_presentation(Kind::TreeOrdChain, &Schedule::empty(), Tail::Finite).unwrap_err().kind(), "unsupported");
    }
}
