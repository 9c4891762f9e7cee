//! Stage-by-stage constructions behind the index-set reductions, plus two
//! special injection structures.
//!
//! A construction reads a c.e. set `W` through a [`Schedule`] and produces the
//! finite structure it has built after `s` stages. Whether `W` is infinite or
//! cofinite cannot be decided from finite data, so [`limit_presentation`] takes
//! that answer as a [`Tail`] flag and returns the structure the construction
//! converges to.

mod degrees;
mod equivalence;
mod injection;
mod linear;
mod trees;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presentations::json::structure_to_json;
use crate::presentations::Presentation;
use crate::structure::{Family, FiniteStructure};

pub use degrees::{build_inj_degrees, check_inj_degrees};
pub use injection::{build_odd_zchain, odd_zchain_f};

/// Which construction to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "LIN_INF")]
    LinInf,
    #[serde(rename = "LIN_COF")]
    LinCof,
    #[serde(rename = "EQ_INF")]
    EqInf,
    #[serde(rename = "EQ_COF")]
    EqCof,
    #[serde(rename = "INJ_INF")]
    InjInf,
    #[serde(rename = "INJ_COF")]
    InjCof,
    #[serde(rename = "TREE_ORD_CHAIN")]
    TreeOrdChain,
    #[serde(rename = "TREE_ORD_UH")]
    TreeOrdUh,
    #[serde(rename = "TREE_ORD_WUH")]
    TreeOrdWuh,
    #[serde(rename = "TREE_PRED_UH")]
    TreePredUh,
    #[serde(rename = "TREE_PRED_WUH")]
    TreePredWuh,
    /// The multi-orbit injection structure whose orbits realize the degrees of
    /// the `W_e`; as a reduction kind it runs the single set `e = 0`.
    #[serde(rename = "INJ_DEGREES")]
    InjDegrees,
}

impl Kind {
    /// The eleven reductions.
    pub const REDUCTIONS: [Kind; 11] = [
        Kind::LinInf,
        Kind::LinCof,
        Kind::EqInf,
        Kind::EqCof,
        Kind::InjInf,
        Kind::InjCof,
        Kind::TreeOrdChain,
        Kind::TreeOrdUh,
        Kind::TreeOrdWuh,
        Kind::TreePredUh,
        Kind::TreePredWuh,
    ];

    pub const ALL: [Kind; 12] = [
        Kind::LinInf,
        Kind::LinCof,
        Kind::EqInf,
        Kind::EqCof,
        Kind::InjInf,
        Kind::InjCof,
        Kind::TreeOrdChain,
        Kind::TreeOrdUh,
        Kind::TreeOrdWuh,
        Kind::TreePredUh,
        Kind::TreePredWuh,
        Kind::InjDegrees,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::LinInf => "LIN_INF",
            Kind::LinCof => "LIN_COF",
            Kind::EqInf => "EQ_INF",
            Kind::EqCof => "EQ_COF",
            Kind::InjInf => "INJ_INF",
            Kind::InjCof => "INJ_COF",
            Kind::TreeOrdChain => "TREE_ORD_CHAIN",
            Kind::TreeOrdUh => "TREE_ORD_UH",
            Kind::TreeOrdWuh => "TREE_ORD_WUH",
            Kind::TreePredUh => "TREE_PRED_UH",
            Kind::TreePredWuh => "TREE_PRED_WUH",
            Kind::InjDegrees => "INJ_DEGREES",
        }
    }

    pub fn parse(name: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::input("kind", format!("unknown construction {name:?}")))
    }

    pub fn family(self) -> Family {
        match self {
            Kind::LinInf | Kind::LinCof => Family::Order,
            Kind::EqInf | Kind::EqCof => Family::Equivalence,
            Kind::InjInf | Kind::InjCof | Kind::InjDegrees => Family::Injection,
            Kind::TreeOrdChain | Kind::TreeOrdUh | Kind::TreeOrdWuh => Family::TreePo,
            Kind::TreePredUh | Kind::TreePredWuh => Family::TreePred,
        }
    }

    /// Constructions that assume `W_s ⊆ {0, …, s-1}`.
    pub fn requires_bounded(self) -> bool {
        matches!(self, Kind::EqInf | Kind::EqCof | Kind::TreeOrdChain | Kind::InjDegrees)
    }

    /// Every finite stage is a tree, but the limit need not be.
    pub fn non_tree_limit(self) -> bool {
        self == Kind::TreeOrdChain
    }

    /// True when later stages may relate elements that are already present.
    ///
    /// `EQ_COF` pairs an old even singleton with an odd one, and `TREE_ORD_CHAIN`
    /// merges chains; both only ever add relations.
    pub fn adds_old_relations(self) -> bool {
        matches!(self, Kind::EqCof | Kind::TreeOrdChain)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite enumeration of a c.e. set: `(x, s)` means `x` enters at stage `s`.
///
/// Stages start at 1, since `W_0` is empty. At most one element enters per
/// stage and each element enters once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u64)>", into = "Vec<(u64, u64)>")]
pub struct Schedule {
    by_stage: BTreeMap<u64, u64>,
    by_element: BTreeMap<u64, u64>,
}

impl Schedule {
    pub fn empty() -> Self {
        Schedule::default()
    }

    pub fn new(events: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut w = Schedule::default();
        for (i, (x, s)) in events.into_iter().enumerate() {
            let path = format!("schedule[{i}]");
            if s == 0 {
                return Err(Error::input(path, "stages start at 1"));
            }
            if w.by_stage.insert(s, x).is_some() {
                return Err(Error::input(path, format!("two elements enter at stage {s}")));
            }
            if w.by_element.insert(x, s).is_some() {
                return Err(Error::input(path, format!("element {x} enters twice")));
            }
        }
        Ok(w)
    }

    /// Events ordered by stage.
    pub fn events(&self) -> Vec<(u64, u64)> {
        self.by_stage.iter().map(|(&s, &x)| (x, s)).collect()
    }

    pub fn len(&self) -> usize {
        self.by_stage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_stage.is_empty()
    }

    /// The element entering at stage `s`.
    pub fn entering(&self, s: u64) -> Option<u64> {
        self.by_stage.get(&s).copied()
    }

    pub fn stage_of(&self, x: u64) -> Option<u64> {
        self.by_element.get(&x).copied()
    }

    /// `x ∈ W_s`.
    pub fn contains_by(&self, x: u64, s: u64) -> bool {
        self.stage_of(x).is_some_and(|t| t <= s)
    }

    /// `W_s`.
    pub fn enumerated_by(&self, s: u64) -> BTreeSet<u64> {
        self.by_stage.range(..=s).map(|(_, &x)| x).collect()
    }

    /// `|W_s|`.
    pub fn count_by(&self, s: u64) -> usize {
        self.by_stage.range(..=s).count()
    }

    /// All elements, i.e. the set if the schedule is the whole enumeration.
    pub fn elements(&self) -> BTreeSet<u64> {
        self.by_element.keys().copied().collect()
    }

    pub fn last_stage(&self) -> u64 {
        self.by_stage.keys().next_back().copied().unwrap_or(0)
    }

    /// Checks `W_s ⊆ {0, …, s-1}`.
    pub fn check_bounded(&self) -> Result<()> {
        for (&s, &x) in &self.by_stage {
            if x >= s {
                return Err(Error::input(
                    "schedule",
                    format!("element {x} enters at stage {s}; it must be smaller than the stage"),
                ));
            }
        }
        Ok(())
    }

    fn check_for(&self, kind: Kind) -> Result<()> {
        if kind.requires_bounded() {
            self.check_bounded()?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<(u64, u64)>> for Schedule {
    type Error = Error;
    fn try_from(v: Vec<(u64, u64)>) -> Result<Self> {
        Schedule::new(v)
    }
}

impl From<Schedule> for Vec<(u64, u64)> {
    fn from(w: Schedule) -> Self {
        w.events()
    }
}

/// The structure a construction has built after some number of stages.
#[derive(Clone, Debug, PartialEq)]
pub struct StageSnapshot {
    pub kind: Kind,
    pub stage: u64,
    pub structure: FiniteStructure,
    pub metadata: Value,
}

impl StageSnapshot {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "stage": self.stage,
            "structure": structure_to_json(&self.structure),
            "metadata": self.metadata,
        })
    }

    /// Display labels as numbers, for constructions whose elements are numbers.
    fn numbers(&self) -> Option<Vec<u64>> {
        match self.structure.labels() {
            Some(ls) => ls.iter().map(|l| l.parse().ok()).collect(),
            None => Some((0..self.structure.size() as u64).collect()),
        }
    }
}

/// One construction in progress.
trait Construction {
    /// Carries out stage `s ≥ 1`.
    fn step(&mut self, s: u64, w: &Schedule);
    fn snapshot(&self, s: u64, w: &Schedule) -> Result<(FiniteStructure, Value)>;
}

/// A construction that can be advanced one stage at a time.
pub struct Run {
    kind: Kind,
    w: Schedule,
    stage: u64,
    inner: Box<dyn Construction>,
}

impl Run {
    pub fn new(kind: Kind, w: &Schedule) -> Result<Run> {
        w.check_for(kind)?;
        let inner: Box<dyn Construction> = match kind {
            Kind::LinInf => Box::new(linear::Lin::new(false)),
            Kind::LinCof => Box::new(linear::Lin::new(true)),
            Kind::EqInf => Box::new(equivalence::EqInf::new()),
            Kind::EqCof => Box::new(equivalence::EqCof::new()),
            Kind::InjInf => Box::new(injection::InjInf::new()),
            Kind::InjCof => Box::new(injection::InjCof::new()),
            Kind::TreeOrdChain => Box::new(trees::OrdChain::new()),
            Kind::TreeOrdUh => Box::new(trees::OrdUh::new()),
            Kind::TreeOrdWuh => Box::new(trees::OrdWuh::new()),
            Kind::TreePredUh => Box::new(trees::PredUh::new()),
            Kind::TreePredWuh => Box::new(trees::PredWuh::new()),
            Kind::InjDegrees => Box::new(degrees::Degrees::new(1)),
        };
        Ok(Run {
            kind,
            w: w.clone(),
            stage: 0,
            inner,
        })
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn step(&mut self) {
        self.stage += 1;
        self.inner.step(self.stage, &self.w);
    }

    pub fn snapshot(&self) -> Result<StageSnapshot> {
        let (structure, metadata) = self.inner.snapshot(self.stage, &self.w)?;
        Ok(StageSnapshot {
            kind: self.kind,
            stage: self.stage,
            structure,
            metadata,
        })
    }
}

/// The structure after exactly `stages` stages of the construction `kind`.
pub fn build_reduction(kind: Kind, w: &Schedule, stages: u64) -> Result<StageSnapshot> {
    let mut run = Run::new(kind, w)?;
    while run.stage() < stages {
        run.step();
    }
    run.snapshot()
}

/// Outcome of a stage check; no violations means every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCheck {
    pub holds: bool,
    pub violations: Vec<String>,
}

impl StageCheck {
    fn from(violations: Vec<String>) -> StageCheck {
        StageCheck {
            holds: violations.is_empty(),
            violations,
        }
    }
}

/// Checks the invariants the construction maintains at every stage.
///
/// The checks work from the snapshot and the schedule alone; they do not rerun
/// the construction.
pub fn check_stage_invariants(kind: Kind, snap: &StageSnapshot, w: &Schedule) -> Result<StageCheck> {
    if snap.kind != kind {
        return Err(Error::input(
            "kind",
            format!("snapshot was built by {}, not {}", snap.kind, kind),
        ));
    }
    w.check_for(kind)?;
    let mut out = Vec::new();
    if snap.structure.family() != kind.family() {
        out.push(format!("family is {}, expected {}", snap.structure.family(), kind.family()));
        return Ok(StageCheck::from(out));
    }
    if let Err(e) = snap.structure.validate() {
        out.push(format!("not a valid structure: {e}"));
        return Ok(StageCheck::from(out));
    }
    match kind {
        Kind::LinInf => linear::check(false, snap, w, &mut out),
        Kind::LinCof => linear::check(true, snap, w, &mut out),
        Kind::EqInf => equivalence::check_inf(snap, w, &mut out),
        Kind::EqCof => equivalence::check_cof(snap, w, &mut out),
        Kind::InjInf => injection::check_inf(snap, w, &mut out),
        Kind::InjCof => injection::check_cof(snap, w, &mut out),
        Kind::TreeOrdChain => trees::check_chain(snap, w, &mut out),
        Kind::TreeOrdUh => trees::check_ord_uh(snap, w, &mut out),
        Kind::TreeOrdWuh => trees::check_ord_wuh(snap, w, &mut out),
        Kind::TreePredUh => trees::check_pred_uh(snap, w, &mut out),
        Kind::TreePredWuh => trees::check_pred_wuh(snap, w, &mut out),
        Kind::InjDegrees => degrees::check(snap, std::slice::from_ref(w), &mut out),
    }
    Ok(StageCheck::from(out))
}

/// Checks that `next` extends `prev`: labels of `prev` are a prefix of those
/// of `next`, defined function values persist, and relations among old
/// elements are preserved (or only grow, for kinds that add them).
pub fn check_growth(prev: &StageSnapshot, next: &StageSnapshot) -> Vec<String> {
    let mut out = Vec::new();
    if prev.kind != next.kind {
        out.push("snapshots come from different constructions".to_string());
        return out;
    }
    let (a, b) = (&prev.structure, &next.structure);
    let n = a.size();
    if b.size() < n {
        out.push(format!("universe shrank from {n} to {}", b.size()));
        return out;
    }
    for x in 0..n {
        if a.label(x) != b.label(x) {
            out.push(format!("element {x} was {} and is now {}", a.label(x), b.label(x)));
            return out;
        }
    }
    for (k, f) in a.functions().iter().enumerate() {
        for x in 0..n {
            if let Some(y) = f[x] {
                if b.func(k, x) != Some(y) {
                    out.push(format!("value at {} changed", a.label(x)));
                }
            }
        }
    }
    let monotone = prev.kind.adds_old_relations();
    for r in 0..a.relations().len() {
        for x in 0..n {
            for y in 0..n {
                let (u, v) = (a.rel(r, x, y), b.rel(r, x, y));
                if u != v && (u || !monotone) {
                    out.push(format!("relation between {} and {} changed", a.label(x), a.label(y)));
                }
            }
        }
    }
    out
}

/// What the finite schedule leaves out of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// `W` is exactly the scheduled elements.
    Finite,
    /// `W` also contains an infinite, coinfinite set of larger elements.
    Infinite,
    /// `W` also contains every element above the largest scheduled one.
    Cofinite,
}

impl Tail {
    pub fn parse(s: &str) -> Result<Tail> {
        match s {
            "finite" => Ok(Tail::Finite),
            "infinite" => Ok(Tail::Infinite),
            "cofinite" => Ok(Tail::Cofinite),
            _ => Err(Error::input("tail", format!("expected finite, infinite or cofinite, got {s:?}"))),
        }
    }

    pub fn is_infinite(self) -> bool {
        self != Tail::Finite
    }
}

/// The set `W = w ∪ tail` as far as a limit needs it.
pub(crate) struct LimitSet<'a> {
    pub w: &'a Schedule,
    pub tail: Tail,
}

impl LimitSet<'_> {
    /// First element of the cofinite tail.
    pub fn tail_start(&self) -> u64 {
        self.w.elements().last().map_or(0, |m| m + 1)
    }

    /// The complement of `W` under the cofinite flag.
    pub fn missing(&self) -> Vec<u64> {
        let have = self.w.elements();
        (0..self.tail_start()).filter(|x| !have.contains(x)).collect()
    }

    /// The schedule extended by the cofinite tail through stage `upto`, the
    /// tail entering one element per stage after the scheduled events.
    pub fn completed(&self, upto: u64) -> Schedule {
        let mut ev = self.w.events();
        let (start, after) = (self.tail_start(), self.w.last_stage());
        for k in 0..upto.saturating_sub(after) {
            ev.push((start + k, after + 1 + k));
        }
        Schedule::new(ev).expect("tail events go to fresh stages and elements")
    }
}

/// The structure the construction converges to when the schedule lists every
/// element of `W` except the part described by `tail`.
pub fn limit_presentation(kind: Kind, w: &Schedule, tail: Tail) -> Result<Presentation> {
    w.check_for(kind)?;
    let set = LimitSet { w, tail };
    match kind {
        Kind::LinInf | Kind::LinCof => linear::limit(kind == Kind::LinCof, &set),
        Kind::EqInf | Kind::EqCof => Ok(equivalence::limit(kind == Kind::EqCof, &set)),
        Kind::InjInf | Kind::InjCof => Ok(injection::limit(kind == Kind::InjCof, &set)),
        Kind::TreeOrdChain => Err(Error::Unsupported(
            "TREE_ORD_CHAIN limits need not be trees and have no tree presentation".into(),
        )),
        Kind::TreeOrdUh | Kind::TreeOrdWuh | Kind::TreePredUh | Kind::TreePredWuh => trees::limit(kind, &set),
        Kind::InjDegrees => Err(Error::Unsupported(
            "the orbit degrees of INJ_DEGREES are not visible to a presentation".into(),
        )),
    }
}

/// The standard pairing `⟨x, y⟩ = (x+y)(x+y+1)/2 + y`.
pub fn cantor_pair(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}

fn number_labels(xs: impl IntoIterator<Item = u64>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_checks() {
        assert!(Schedule::new([(0, 0)]).is_err());
        assert!(Schedule::new([(0, 1), (1, 1)]).is_err());
        assert!(Schedule::new([(0, 1), (0, 2)]).is_err());
        let w = Schedule::new([(3, 2), (0, 1)]).unwrap();
        assert_eq!(w.events(), vec![(0, 1), (3, 2)]);
        assert!(w.check_bounded().is_err());
        assert!(build_reduction(Kind::EqInf, &w, 3).is_err());
        assert!(build_reduction(Kind::LinInf, &w, 3).is_ok());
        let back: Schedule = serde_json::from_str("[[0,1],[3,2]]").unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<Schedule>("[[0,1],[1,1]]").is_err());
    }

    #[test]
    fn kind_names() {
        for k in Kind::ALL {
            assert_eq!(Kind::parse(k.name()).unwrap(), k);
        }
        assert_eq!(Kind::parse("NOPE").unwrap_err().kind(), "input");
    }

    #[test]
    fn kind_mismatch() {
        let w = Schedule::empty();
        let snap = build_reduction(Kind::LinInf, &w, 2).unwrap();
        assert_eq!(check_stage_invariants(Kind::LinCof, &snap, &w).unwrap_err().kind(), "input");
    }

    #[test]
    fn cantor_values() {
        assert_eq!(cantor_pair(0, 0), 0);
        assert_eq!(cantor_pair(1, 0), 1);
        assert_eq!(cantor_pair(0, 1), 2);
        assert_eq!(cantor_pair(0, 2), 5);
    }

    #[test]
    fn completion() {
        let w = Schedule::new([(1, 1), (4, 2)]).unwrap();
        let set = LimitSet { w: &w, tail: Tail::Cofinite };
        assert_eq!(set.missing(), vec![0, 2, 3]);
        let c = set.completed(5);
        assert_eq!(c.events(), vec![(1, 1), (4, 2), (5, 3), (6, 4), (7, 5)]);
    }

    #[test]
    fn every_kind_grows() {
        let w = Schedule::new([(0, 1), (2, 3), (1, 4), (3, 7), (5, 8), (4, 9)]).unwrap();
        for k in Kind::ALL {
            let mut run = Run::new(k, &w).unwrap();
            let mut prev = run.snapshot().unwrap();
            for _ in 0..12 {
                run.step();
                let next = run.snapshot().unwrap();
                assert_eq!(check_growth(&prev, &next), Vec::<String>::new(), "{k} at {}", next.stage);
                let v = check_stage_invariants(k, &next, &w).unwrap();
                assert!(v.holds, "{k} at {}: {:?}", next.stage, v.violations);
                prev = next;
            }
        }
    }

    #[test]
    fn limits_close_the_loop() {
        use crate::deciders::{analyze, Verdict::*};
        // (kind, schedule, tail, uh, wuh) as each reduction predicts.
        let w = Schedule::new([(0, 1), (1, 3), (3, 4)]).unwrap();
        let e = Schedule::empty();
        let cases = [
            (Kind::LinInf, &w, Tail::Infinite, Yes, Yes),
            (Kind::LinInf, &w, Tail::Finite, No, No),
            (Kind::LinCof, &w, Tail::Cofinite, No, Yes),
            (Kind::LinCof, &w, Tail::Finite, No, No),
            (Kind::EqInf, &w, Tail::Infinite, Yes, Yes),
            (Kind::EqInf, &w, Tail::Finite, No, Yes),
            (Kind::EqCof, &e, Tail::Cofinite, Yes, Yes),
            (Kind::EqCof, &w, Tail::Cofinite, No, Yes),
            (Kind::EqCof, &w, Tail::Infinite, No, No),
            (Kind::InjInf, &w, Tail::Infinite, Yes, Yes),
            (Kind::InjInf, &w, Tail::Finite, No, Yes),
            (Kind::InjCof, &w, Tail::Cofinite, No, Yes),
            (Kind::InjCof, &w, Tail::Infinite, No, No),
            (Kind::TreeOrdUh, &e, Tail::Finite, Yes, Yes),
            (Kind::TreeOrdWuh, &w, Tail::Finite, No, Yes),
            (Kind::TreeOrdWuh, &w, Tail::Infinite, No, No),
            (Kind::TreePredUh, &w, Tail::Infinite, Yes, Yes),
            (Kind::TreePredUh, &w, Tail::Finite, No, Yes),
            (Kind::TreePredWuh, &w, Tail::Cofinite, No, Yes),
            (Kind::TreePredWuh, &w, Tail::Finite, No, No),
        ];
        for (k, w, tail, uh, wuh) in cases {
            let p = limit_presentation(k, w, tail).unwrap();
            let r = analyze(&p).unwrap();
            assert_eq!((r.uh, r.wuh), (uh, wuh), "{k} {tail:?}: {p:?}");
        }
    }
}
