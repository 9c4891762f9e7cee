//! Finite symbolic descriptions of countable structures.

pub(crate) mod counts;
pub mod equivalence;
pub mod graph;
pub mod injection;
pub mod json;
pub mod linear;
pub mod nested;
pub mod tree;

pub use equivalence::EqCharacter;
pub use graph::{CatalogTag, GraphPres};
pub use injection::{InjSpectrum, OrbitKind};
pub use linear::{normalize_linear, Block, LinOrderPres};
pub use nested::NestedEqPres;
pub use tree::TreePres;

use crate::error::{Error, Result};
use crate::ext::Fin;
use crate::structure::{Family, FiniteStructure};

/// A presentation of one countable structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Linear(LinOrderPres),
    Equivalence(EqCharacter),
    Injection(InjSpectrum),
    Graph(GraphPres),
    TreePo(TreePres),
    TreePred(TreePres),
    Nested(NestedEqPres),
}

impl Presentation {
    pub fn family(&self) -> Family {
        match self {
            Presentation::Linear(_) => Family::Order,
            Presentation::Equivalence(_) => Family::Equivalence,
            Presentation::Injection(_) => Family::Injection,
            Presentation::Graph(_) => Family::Graph,
            Presentation::TreePo(_) => Family::TreePo,
            Presentation::TreePred(_) => Family::TreePred,
            Presentation::Nested(p) => Family::NestedEq(p.arity()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Presentation::Linear(p) => p.validate(),
            Presentation::Equivalence(c) => c.validate(),
            Presentation::Injection(sp) => sp.validate(),
            Presentation::Graph(g) => g.validate(),
            Presentation::TreePo(t) | Presentation::TreePred(t) => t.validate(),
            Presentation::Nested(p) => p.validate(),
        }
    }

    /// The exact presentation of a finite structure.
    pub fn of_structure(s: &FiniteStructure) -> Result<Presentation> {
        s.validate()?;
        Ok(match s.family() {
            Family::Order => Presentation::Linear(LinOrderPres::new(if s.size() == 0 {
                vec![]
            } else {
                vec![Block::Fin(s.size() as u64)]
            })),
            Family::Equivalence => Presentation::Equivalence(EqCharacter::of_structure(s)),
            Family::Injection => Presentation::Injection(InjSpectrum::of_structure(s)?),
            Family::Graph => Presentation::Graph(GraphPres::of_structure(s)),
            Family::TreePo => Presentation::TreePo(TreePres::of_structure(s)?),
            Family::TreePred => Presentation::TreePred(TreePres::of_structure(s)?),
            Family::NestedEq(_) => Presentation::Nested(NestedEqPres::Finite(s.clone())),
        })
    }

    /// The first `n` elements in the family's fill order.
    pub fn materialize(&self, n: usize) -> Result<FiniteStructure> {
        match self {
            Presentation::Linear(p) => linear::materialize_linear(p, n),
            Presentation::Equivalence(c) => equivalence::materialize_equivalence(c, n),
            Presentation::Injection(sp) => injection::materialize_injection(sp, n),
            Presentation::Graph(g) => graph::materialize_graph(g, n),
            Presentation::TreePo(t) => tree::materialize_tree(t, Family::TreePo, n),
            Presentation::TreePred(t) => tree::materialize_tree(t, Family::TreePred, n),
            Presentation::Nested(NestedEqPres::Tree { n: k, tree }) => nested::materialize_nested(*k, tree, n),
            Presentation::Nested(NestedEqPres::Finite(s)) => {
                if n > s.size() {
                    return Err(Error::Precondition(format!("the structure has only {} elements", s.size())));
                }
                Ok(s.induced(&(0..n).collect::<Vec<_>>()))
            }
        }
    }

    /// Number of elements, when finite.
    pub fn finite_size(&self) -> Option<usize> {
        let c = match self {
            Presentation::Linear(p) => p
                .blocks
                .iter()
                .map(|b| match b {
                    Block::Fin(k) => Fin(*k),
                    _ => crate::ext::Omega,
                })
                .sum(),
            Presentation::Equivalence(c) => c.cardinality(),
            Presentation::Injection(sp) => {
                if sp.unbounded_cycle_tail {
                    crate::ext::Omega
                } else {
                    sp.cycles.iter().map(|(&k, &c)| Fin(k) * c).sum::<crate::ext::ExtCount>()
                        + sp.omega_orbits * crate::ext::Omega
                        + sp.zeta_orbits * crate::ext::Omega
                }
            }
            Presentation::Graph(g) => {
                if g.catalog_tag.is_some() {
                    crate::ext::Omega
                } else {
                    g.components.iter().map(|(c, m)| Fin(c.size() as u64) * *m).sum::<crate::ext::ExtCount>()
                        + g.bulk.map_or(Fin(0), |(m, n)| m * n)
                }
            }
            Presentation::TreePo(t) | Presentation::TreePred(t) => t.size(),
            Presentation::Nested(NestedEqPres::Tree { tree, .. }) => leaf_count(tree),
            Presentation::Nested(NestedEqPres::Finite(s)) => Fin(s.size() as u64),
        };
        c.finite().map(|k| k as usize)
    }
}

fn leaf_count(t: &TreePres) -> crate::ext::ExtCount {
    if t.tail {
        return crate::ext::Omega;
    }
    if t.children.is_empty() {
        return Fin(1);
    }
    t.children.iter().map(|(c, m)| leaf_count(c) * *m).sum()
}

/// Isomorphism of presentations of the same family, by normal forms.
pub fn pres_isomorphic(a: &Presentation, b: &Presentation) -> Result<bool> {
    if a.family().name() != b.family().name() {
        return Err(Error::input(
            "family",
            format!("cannot compare {} with {}", a.family(), b.family()),
        ));
    }
    Ok(match (a, b) {
        (Presentation::Linear(p), Presentation::Linear(q)) => normalize_linear(p) == normalize_linear(q),
        (Presentation::Equivalence(c), Presentation::Equivalence(d)) => c == d,
        (Presentation::Injection(s), Presentation::Injection(t)) => s == t,
        (Presentation::Graph(g), Presentation::Graph(h)) => match (g.catalog_tag, h.catalog_tag) {
            (None, None) => g.normal_form() == h.normal_form(),
            (x, y) => x == y,
        },
        (Presentation::TreePo(s), Presentation::TreePo(t))
        | (Presentation::TreePred(s), Presentation::TreePred(t)) => s.canonical() == t.canonical(),
        (Presentation::Nested(p), Presentation::Nested(q)) => {
            p.arity() == q.arity() && nested_tree(p)? == nested_tree(q)?
        }
        _ => unreachable!("families already compared"),
    })
}

fn nested_tree(p: &NestedEqPres) -> Result<TreePres> {
    match p {
        NestedEqPres::Tree { tree, .. } => Ok(tree.canonical()),
        NestedEqPres::Finite(s) => nested::class_tree(s),
    }
}
