//! Family-specific characterizations of (weak) ultrahomogeneity.
//!
//! Each decider works on a presentation and returns a [`Report`]. The
//! verdicts are the published characterizations evaluated symbolically; the
//! brute-force oracle is the cross-check on finite instances.

pub mod equivalence;
pub mod graph;
pub mod injection;
pub mod linear;
pub mod nested;
pub mod tree_po;
pub mod tree_pred;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::Result;
use crate::ext::ExtCount;
use crate::presentations::Presentation;
use crate::structure::Family;

pub use equivalence::analyze_equivalence;
pub use graph::analyze_graph;
pub use injection::analyze_injection;
pub use linear::{analyze_linear, definable_closure_linear, is_exceptional_linear};
pub use nested::{analyze_nested, build_ta};
pub use tree_po::{analyze_tree_po, is_exceptional_tree_po};
pub use tree_pred::{analyze_tree_pred, rooted_view};

/// A three-valued answer, plus "does not apply".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    /// The characterization available does not settle the question.
    Unknown,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn is_no(self) -> bool {
        self == Verdict::No
    }

    /// `Some(b)` for a definite answer.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            _ => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Yes => s.serialize_bool(true),
            Verdict::No => s.serialize_bool(false),
            Verdict::Unknown => s.serialize_str("unknown"),
            Verdict::NotApplicable => s.serialize_none(),
        }
    }
}

/// A symbolic exceptional set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalDescriptor {
    pub description: String,
    /// Concrete members, when the set is a set of named points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    /// Number of members.
    pub size: ExtCount,
}

impl ExceptionalDescriptor {
    pub fn empty() -> Self {
        ExceptionalDescriptor {
            description: "the empty set".into(),
            elements: Some(vec![]),
            size: ExtCount::Fin(0),
        }
    }

    pub fn symbolic(description: impl Into<String>, size: ExtCount) -> Self {
        ExceptionalDescriptor {
            description: description.into(),
            elements: None,
            size,
        }
    }

    pub fn named(description: impl Into<String>, elements: Vec<String>) -> Self {
        let size = ExtCount::Fin(elements.len() as u64);
        ExceptionalDescriptor {
            description: description.into(),
            elements: Some(elements),
            size,
        }
    }
}

/// The outcome of analysing one presentation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub family: Family,
    pub uh: Verdict,
    pub wuh: Verdict,
    pub cc: Verdict,
    pub delta2: Verdict,
    /// Minimal exceptional sets, up to automorphism, when `wuh` holds.
    pub minimal_exceptional: Vec<ExceptionalDescriptor>,
    /// Family-specific data (special points, exceptional classes, …).
    #[serde(flatten)]
    pub details: BTreeMap<String, Value>,
    /// The characterizations the verdicts rest on.
    pub citations: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub(crate) fn new(family: Family) -> Self {
        Report {
            family,
            uh: Verdict::Unknown,
            wuh: Verdict::Unknown,
            cc: Verdict::Unknown,
            delta2: Verdict::Unknown,
            minimal_exceptional: vec![],
            details: BTreeMap::new(),
            citations: vec![],
            notes: vec![],
        }
    }

    pub(crate) fn cite(&mut self, anchor: &str) {
        self.citations.push(anchor.to_string());
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub(crate) fn detail(&mut self, key: &str, v: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(v).expect("serializable detail"));
    }

    /// Every weakly ultrahomogeneous structure here is relatively Δ⁰₂-categorical;
    /// below that the families give no general answer.
    pub(crate) fn delta2_from_wuh(&mut self) {
        self.delta2 = match self.wuh {
            Verdict::Yes => Verdict::Yes,
            _ => Verdict::Unknown,
        };
        if self.wuh.is_yes() {
            self.cite(anchors::WUH_DELTA2);
        }
    }

    /// Checks `uh ⇒ wuh` and `cc ⇒ delta2`; returns the first violation.
    pub fn implication_violation(&self) -> Option<&'static str> {
        if self.uh.is_yes() && !self.wuh.is_yes() {
            return Some("uh without wuh");
        }
        if self.wuh.is_no() && self.uh.is_yes() {
            return Some("uh with not wuh");
        }
        if self.cc.is_yes() && self.delta2.is_no() {
            return Some("cc without delta2");
        }
        None
    }
}

/// Anchor strings naming the results each verdict uses.
pub mod anchors {
    pub const WUH_DELTA2: &str = "every computable weakly ultrahomogeneous structure is Δ⁰₂-categorical";
    pub const LOCALLY_FINITE_CC: &str = "every locally finite weakly ultrahomogeneous structure is computably categorical";
    pub const LIN_UH: &str = "η is the unique countable infinite ultrahomogeneous linear order";
    pub const LIN_WUH: &str = "a linear order is weakly ultrahomogeneous iff it has finitely many successivities";
    pub const LIN_CC: &str = "a computable linear order is computably categorical iff it is weakly ultrahomogeneous";
    pub const LIN_EXC: &str = "exceptional sets of a linear order: no successor pair outside S, and S contains the block ends next to dense parts";
    pub const LIN_DEF: &str = "the definable closure of a minimal exceptional set of a linear order is its set of special points";
    pub const EQ_UH: &str = "an equivalence structure is ultrahomogeneous iff all classes have the same size";
    pub const EQ_WUH: &str = "an equivalence structure is weakly ultrahomogeneous iff all but finitely many classes have one size";
    pub const EQ_EXC: &str = "a minimal exceptional set of an equivalence structure has one element from each exceptional class";
    pub const EQ_DEF: &str = "definable closure of a minimal exceptional set adds the exceptional classes of size at most 2";
    pub const EQ_CC: &str = "a computable equivalence structure is computably categorical iff it is weakly ultrahomogeneous";
    pub const INJ_UH: &str = "an injection structure is ultrahomogeneous iff it has no ω-orbits";
    pub const INJ_WUH: &str = "an injection structure is weakly ultrahomogeneous iff it has finitely many ω-orbits";
    pub const INJ_EXC: &str = "a minimal exceptional set of an injection structure has one member from each ω-orbit";
    pub const INJ_DEF: &str = "definable closure of a minimal exceptional set of an injection structure is the union of the ω-orbits";
    pub const INJ_CC: &str = "an injection structure is computably categorical iff it has finitely many infinite orbits";
    pub const INJ_D2: &str = "an injection structure is Δ⁰₂-categorical iff it has finitely many ω-orbits or finitely many ℤ-orbits";
    pub const GRAPH_UH: &str = "countable ultrahomogeneous graphs: random, K_n-free, mK_n, C5, 3×3 lattice and complements";
    pub const GRAPH_SPLIT: &str = "a weakly ultrahomogeneous graph is H ⊔ mK_n with H having finitely many components";
    pub const GRAPH_LF: &str = "a locally finite graph is weakly ultrahomogeneous iff it is H ⊔ mK_n with H finite";
    pub const GRAPH_UNION: &str = "an ultrahomogeneous graph plus a finite graph is weakly ultrahomogeneous";
    pub const GRAPH_DOM: &str = "in a weakly ultrahomogeneous graph at most one component is not finitely dominated";
    pub const TREE_PO_UH: &str = "a tree under ≺ is ultrahomogeneous iff it has rank at most 1";
    pub const TREE_PO_WUH: &str = "a tree under ≺ is weakly ultrahomogeneous iff finitely many nodes have rank at least 1";
    pub const TREE_PO_EXC: &str = "exceptional sets of a tree under ≺: every non-leaf lies below K, and every a ≺ b is split by K";
    pub const TREE_FT: &str = "a tree of finite height under ≺ is computably categorical iff it is of finite type";
    pub const TREE_PRED_UH: &str = "a tree under predecessor is ultrahomogeneous iff nodes of equal height have equal successor counts";
    pub const TREE_PRED_WUH: &str = "a tree under predecessor is weakly ultrahomogeneous iff some finite subtree S makes every T_S[x] ultrahomogeneous";
    pub const TREE_PRED_H2: &str = "height ≤ 2: all but finitely many height-1 nodes have equal successor counts";
    pub const TREE_PRED_H3: &str = "height 3: conditions on successors of height-1 nodes and uniform (h, k) branching";
    pub const TREE_PO_TO_PRED: &str = "if (T,≺) is (weakly) ultrahomogeneous then so is (T,f)";
    pub const NESTED_UH: &str = "a nested equivalence structure is ultrahomogeneous iff each E_i class splits into k_i classes of E_{i+1}";
    pub const NESTED_WUH: &str = "a nested equivalence structure is weakly ultrahomogeneous iff its class tree is, under predecessor";
    pub const NESTED_N2: &str = "nested 2-equivalence: E_1 and each restriction of E_2 weakly ultrahomogeneous, almost all restrictions uh with h classes of size k";
    pub const NESTED_FINITE: &str = "with all classes finite, nested uh iff each (A,E_i) is uh";
    pub const NESTED_CC: &str = "a nested equivalence structure is computably categorical iff its class tree is of finite type";
}

/// Dispatches on the family of the presentation.
pub fn analyze(p: &Presentation) -> Result<Report> {
    p.validate()?;
    match p {
        Presentation::Linear(l) => Ok(analyze_linear(l)),
        Presentation::Equivalence(c) => Ok(analyze_equivalence(c)),
        Presentation::Injection(sp) => Ok(analyze_injection(sp)),
        Presentation::Graph(g) => analyze_graph(g),
        Presentation::TreePo(t) => Ok(analyze_tree_po(t)),
        Presentation::TreePred(t) => Ok(analyze_tree_pred(t)),
        Presentation::Nested(n) => analyze_nested(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_json() {
        let v = serde_json::to_string(&[Verdict::Yes, Verdict::No, Verdict::Unknown, Verdict::NotApplicable]).unwrap();
        assert_eq!(v, r#"[true,false,"unknown",null]"#);
    }
}
