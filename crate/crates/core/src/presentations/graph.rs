//! Graphs as disjoint unions of connected pieces.

use std::collections::BTreeMap;

use serde::Serialize;

use super::counts::{dovetail, Interleaved};
use crate::error::{Error, Result};
use crate::ext::{ExtCount, Fin, Omega};
use crate::search::canonical_code;
use crate::structure::{Family, FiniteStructure};

/// Named ultrahomogeneous graphs with no finite description here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogTag {
    Random,
    /// The generic `K_n`-free graph.
    KnFree(u64),
    /// Complement of the generic `K_n`-free graph.
    ComplementKnFree(u64),
    C5,
    Lattice3x3,
}

impl CatalogTag {
    pub fn parse(s: &str) -> Option<CatalogTag> {
        let num = |p: &str| s.strip_prefix(p).and_then(|k| k.parse::<u64>().ok()).filter(|&k| k >= 3);
        Some(match s {
            "random" => CatalogTag::Random,
            "c5" => CatalogTag::C5,
            "lattice-3x3" => CatalogTag::Lattice3x3,
            _ => {
                if let Some(k) = num("complement-kn-free:") {
                    CatalogTag::ComplementKnFree(k)
                } else if let Some(k) = num("kn-free:") {
                    CatalogTag::KnFree(k)
                } else {
                    return None;
                }
            }
        })
    }

    pub fn name(self) -> String {
        match self {
            CatalogTag::Random => "random".into(),
            CatalogTag::KnFree(k) => format!("kn-free:{k}"),
            CatalogTag::ComplementKnFree(k) => format!("complement-kn-free:{k}"),
            CatalogTag::C5 => "c5".into(),
            CatalogTag::Lattice3x3 => "lattice-3x3".into(),
        }
    }
}

/// `H ⊔ m·K_n`, where `H` is a list of finite connected graphs with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphPres {
    pub components: Vec<(FiniteStructure, ExtCount)>,
    /// `(m, n)`: `m` disjoint copies of `K_n`.
    pub bulk: Option<(ExtCount, ExtCount)>,
    pub catalog_tag: Option<CatalogTag>,
}

/// A component of a normalized graph presentation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Piece {
    Finite(Vec<u8>),
    /// `K_ω`.
    InfiniteClique,
}

impl GraphPres {
    pub fn tagged(tag: CatalogTag) -> Self {
        GraphPres {
            catalog_tag: Some(tag),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.catalog_tag.is_some() && (!self.components.is_empty() || self.bulk.is_some()) {
            return Err(Error::input("catalog_tag", "a catalog tag excludes all other fields"));
        }
        for (i, (g, m)) in self.components.iter().enumerate() {
            if g.family() != Family::Graph {
                return Err(Error::input(format!("components[{i}]"), "not a graph"));
            }
            if g.size() == 0 || !is_connected(g) {
                return Err(Error::input(format!("components[{i}]"), "component is not connected"));
            }
            if m.is_zero() {
                return Err(Error::input(format!("components[{i}].multiplicity"), "must be at least 1"));
            }
        }
        if let Some((m, n)) = self.bulk {
            if m.is_zero() || n.is_zero() {
                return Err(Error::input("bulk", "m and n must be at least 1"));
            }
        }
        Ok(())
    }

    /// The components of a finite graph, each with multiplicity one.
    pub fn of_structure(g: &FiniteStructure) -> Self {
        let comps = components(g)
            .into_iter()
            .map(|c| (g.induced(&c), Fin(1)))
            .collect();
        GraphPres {
            components: comps,
            bulk: None,
            catalog_tag: None,
        }
    }

    /// Components with their multiplicities merged by isomorphism type;
    /// finite bulk cliques are folded in as ordinary components.
    pub fn normal_form(&self) -> BTreeMap<Piece, ExtCount> {
        let mut out: BTreeMap<Piece, ExtCount> = BTreeMap::new();
        let mut add = |p: Piece, m: ExtCount| {
            let e = out.entry(p).or_insert(Fin(0));
            *e = *e + m;
        };
        for (g, m) in &self.components {
            add(Piece::Finite(canonical_code(g)), *m);
        }
        if let Some((m, n)) = self.bulk {
            match n {
                Fin(k) => add(Piece::Finite(canonical_code(&complete(k as usize))), m),
                Omega => add(Piece::InfiniteClique, m),
            }
        }
        out
    }

    /// Pieces in fill order, with their sizes.
    fn piece_sequence(&self) -> Interleaved<Option<usize>> {
        let mut items: Vec<(Option<usize>, ExtCount)> =
            self.components.iter().enumerate().map(|(i, (_, m))| (Some(i), *m)).collect();
        if let Some((m, _)) = self.bulk {
            items.push((None, m));
        }
        Interleaved::new(items)
    }
}

/// `K_n`.
pub fn complete(n: usize) -> FiniteStructure {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    FiniteStructure::graph(n, &edges).expect("valid clique")
}

pub fn is_complete(g: &FiniteStructure) -> bool {
    let n = g.size();
    (0..n).all(|a| (0..n).all(|b| a == b || g.rel(0, a, b)))
}

/// Vertex sets of the connected components, each sorted, by least vertex.
pub fn components(g: &FiniteStructure) -> Vec<Vec<usize>> {
    let n = g.size();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = vec![];
        while let Some(x) = stack.pop() {
            members.push(x);
            for y in 0..n {
                if comp[y] == usize::MAX && g.rel(0, x, y) {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn is_connected(g: &FiniteStructure) -> bool {
    components(g).len() <= 1
}

/// The first `n` vertices, components filled along diagonals.
pub fn materialize_graph(p: &GraphPres, n: usize) -> Result<FiniteStructure> {
    if let Some(tag) = p.catalog_tag {
        return Err(Error::Unsupported(format!(
            "the catalog graph {} has no finite presentation here",
            tag.name()
        )));
    }
    let seq = p.piece_sequence();
    let size = |c: usize| -> Option<ExtCount> {
        seq.get(c).map(|(piece, _)| match piece {
            Some(i) => Fin(p.components[i].0.size() as u64),
            None => p.bulk.expect("bulk piece").1,
        })
    };
    let pts = dovetail(n, size);
    if pts.len() < n {
        return Err(Error::Precondition(format!("the graph has only {} vertices", pts.len())));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let ((ca, pa), (cb, pb)) = (pts[a], pts[b]);
            if ca != cb {
                continue;
            }
            let adjacent = match seq.get(ca).expect("filled").0 {
                Some(i) => p.components[i].0.rel(0, pa as usize, pb as usize),
                None => true,
            };
            if adjacent {
                edges.push((a, b));
            }
        }
    }
    let labels = pts.iter().map(|(c, v)| format!("c{c}:{v}")).collect();
    Ok(FiniteStructure::graph(n, &edges)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bulk_fill() {
        let p = GraphPres {
            bulk: Some((Omega, Fin(2))),
            ..Default::default()
        };
        let g = materialize_graph(&p, 4).unwrap();
        assert_eq!(components(&g), vec![vec![0, 1], vec![2, 3]]);
        assert!(materialize_graph(&GraphPres::tagged(CatalogTag::Random), 3).is_err());
    }

    #[test]
    fn normal_form_merges() {
        let p = GraphPres {
            components: vec![(complete(3), Fin(2))],
            bulk: Some((Omega, Fin(3))),
            catalog_tag: None,
        };
        let q = GraphPres {
            bulk: Some((Omega, Fin(3))),
            ..Default::default()
        };
        assert_eq!(p.normal_form(), q.normal_form());
        assert_eq!(CatalogTag::parse("kn-free:4"), Some(CatalogTag::KnFree(4)));
    }
}
