//! Explicit finite structures for each supported family.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The families of structures handled by the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Linear orders `(A, ≤)`.
    Order,
    /// Equivalence structures `(A, E)`.
    Equivalence,
    /// Injection structures `(A, f)`.
    Injection,
    /// Simple undirected graphs.
    Graph,
    /// Trees as partial orders `(T, ≺, ε)`.
    TreePo,
    /// Trees with a predecessor function, `f(ε) = ε`.
    TreePred,
    /// Nested equivalence structures `(A, E_1 ⊇ … ⊇ E_n)`.
    NestedEq(usize),
}

impl Family {
    /// Stable name used in files and reports.
    pub fn name(self) -> &'static str {
        match self {
            Family::Order => "order",
            Family::Equivalence => "equivalence",
            Family::Injection => "injection",
            Family::Graph => "graph",
            Family::TreePo => "tree-po",
            Family::TreePred => "tree-pred",
            Family::NestedEq(_) => "nested-eq",
        }
    }

    /// Parses a family name; `nested-eq` takes its arity from `n`.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Family> {
        Ok(match name {
            "order" => Family::Order,
            "equivalence" => Family::Equivalence,
            "injection" => Family::Injection,
            "graph" => Family::Graph,
            "tree-po" => Family::TreePo,
            "tree-pred" => Family::TreePred,
            "nested-eq" => match n {
                Some(k) if k >= 1 => Family::NestedEq(k),
                _ => {
                    return Err(Error::input(
                        "n",
                        "nested-eq needs an arity n >= 1",
                    ))
                }
            },
            other => return Err(Error::input("family", format!("unknown family {other:?}"))),
        })
    }

    /// Number of binary relations in the signature.
    pub fn relation_count(self) -> usize {
        match self {
            Family::Order | Family::Equivalence | Family::Graph | Family::TreePo => 1,
            Family::NestedEq(k) => k,
            Family::Injection | Family::TreePred => 0,
        }
    }

    /// Number of unary functions in the signature.
    pub fn function_count(self) -> usize {
        match self {
            Family::Injection | Family::TreePred => 1,
            _ => 0,
        }
    }

    /// True when every generated substructure is just the generating set
    /// (plus named constants).
    pub fn is_relational(self) -> bool {
        self.function_count() == 0
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::NestedEq(k) => write!(f, "nested-eq({k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A square boolean matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    /// The empty relation on `n` points.
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    /// Builds a relation from a predicate.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                bits.push(f(a, b));
            }
        }
        Relation { n, bits }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, v: bool) {
        self.bits[a * self.n + b] = v;
    }
}

/// An explicit finite structure.
///
/// Elements are `0..size`. Functions may be partial: a finite prefix of an
/// infinite structure (an unfinished ω-orbit, a generator stage) leaves some
/// values undefined, and isomorphisms must then respect definedness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    family: Family,
    n: usize,
    rels: Vec<Relation>,
    funcs: Vec<Vec<Option<usize>>>,
    labels: Option<Vec<String>>,
}

impl FiniteStructure {
    /// Assembles a structure without checking the family axioms.
    pub fn from_parts(
        family: Family,
        n: usize,
        rels: Vec<Relation>,
        funcs: Vec<Vec<Option<usize>>>,
    ) -> Self {
        FiniteStructure {
            family,
            n,
            rels,
            funcs,
            labels: None,
        }
    }

    /// Assembles and validates.
    pub fn new(
        family: Family,
        n: usize,
        rels: Vec<Relation>,
        funcs: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let s = Self::from_parts(family, n, rels, funcs);
        s.validate()?;
        Ok(s)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_parts(Family::Order, n, vec![Relation::from_fn(n, |a, b| a <= b)], vec![])
    }

    /// A linear order listing the elements from least to greatest.
    pub fn order_from_sequence(seq: &[usize]) -> Result<Self> {
        let n = seq.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &x) in seq.iter().enumerate() {
            if x >= n || rank[x] != usize::MAX {
                return Err(Error::input(format!("order[{i}]"), "not a permutation of 0..n"));
            }
            rank[x] = i;
        }
        Ok(Self::from_parts(
            Family::Order,
            n,
            vec![Relation::from_fn(n, |a, b| rank[a] <= rank[b])],
            vec![],
        ))
    }

    /// An equivalence structure from a partition of `0..n`.
    pub fn equivalence(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let rel = partition_relation(n, classes, "classes")?;
        Self::new(Family::Equivalence, n, vec![rel], vec![])
    }

    /// A nested equivalence structure; `partitions[i]` gives the classes of `E_{i+1}`.
    pub fn nested(n: usize, partitions: &[Vec<Vec<usize>>]) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::input("relations", "at least one relation is required"));
        }
        let rels = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| partition_relation(n, p, &format!("relations[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Family::NestedEq(partitions.len()), n, rels, vec![])
    }

    /// A total injection `x ↦ f[x]`.
    pub fn injection(f: Vec<usize>) -> Result<Self> {
        let n = f.len();
        Self::new(Family::Injection, n, vec![], vec![f.into_iter().map(Some).collect()])
    }

    /// A partial injection, as found in finite prefixes.
    pub fn partial_injection(f: Vec<Option<usize>>) -> Result<Self> {
        let n = f.len();
        Self::new(Family::Injection, n, vec![], vec![f])
    }

    /// A graph on `0..n`.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rel = Relation::empty(n);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::input(format!("edges[{i}]"), "vertex out of range"));
            }
            rel.set(a, b, true);
            rel.set(b, a, true);
        }
        Self::new(Family::Graph, n, vec![rel], vec![])
    }

    /// A tree under `⪯` from a parent array; the root has parent `None`.
    pub fn tree_po(parent: &[Option<usize>]) -> Result<Self> {
        let n = parent.len();
        let depth = parent_depths(parent)?;
        let rel = Relation::from_fn(n, |a, b| is_ancestor(parent, &depth, a, b));
        // a parent array with depths is a tree, no need for the cubic check
        Ok(Self::from_parts(Family::TreePo, n, vec![rel], vec![]))
    }

    /// A tree under the predecessor function from a parent array.
    pub fn tree_pred(parent: &[Option<usize>]) -> Result<Self> {
        parent_depths(parent)?;
        let f = parent
            .iter()
            .enumerate()
            .map(|(i, p)| Some(p.unwrap_or(i)))
            .collect();
        Self::new(Family::TreePred, parent.len(), vec![], vec![f])
    }

    /// Attaches display names.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn relations(&self) -> &[Relation] {
        &self.rels
    }

    pub fn functions(&self) -> &[Vec<Option<usize>>] {
        &self.funcs
    }

    #[inline]
    pub fn rel(&self, r: usize, a: usize, b: usize) -> bool {
        self.rels[r].get(a, b)
    }

    #[inline]
    pub fn func(&self, k: usize, a: usize) -> Option<usize> {
        self.funcs[k][a]
    }

    /// True when every function is total.
    pub fn is_total(&self) -> bool {
        self.funcs.iter().all(|f| f.iter().all(Option::is_some))
    }

    /// The root of a tree (the least element, or the fixed point of `f`).
    pub fn root(&self) -> Option<usize> {
        match self.family {
            Family::TreePo => (0..self.n).find(|&r| (0..self.n).all(|x| self.rel(0, r, x))),
            Family::TreePred => (0..self.n).find(|&r| self.func(0, r) == Some(r)),
            _ => None,
        }
    }

    /// Named constants of the signature, which every substructure contains.
    pub fn constants(&self) -> Vec<usize> {
        match self.family {
            Family::TreePo => self.root().into_iter().collect(),
            _ => vec![],
        }
    }

    /// The immediate predecessor of a tree node (`None` for the root).
    pub fn parent(&self, x: usize) -> Option<usize> {
        match self.family {
            Family::TreePred => self.func(0, x).filter(|&p| p != x),
            Family::TreePo => {
                let below: Vec<usize> =
                    (0..self.n).filter(|&y| y != x && self.rel(0, y, x)).collect();
                below
                    .iter()
                    .copied()
                    .find(|&y| below.iter().all(|&z| self.rel(0, z, y)))
            }
            _ => None,
        }
    }

    /// Parent array of a tree.
    pub fn parent_array(&self) -> Vec<Option<usize>> {
        if self.family != Family::TreePo {
            return (0..self.n).map(|x| self.parent(x)).collect();
        }
        // the parent is the strictly-below element with the most below it
        let below = |x: usize| (0..self.n).filter(move |&y| y != x && self.rel(0, y, x));
        let count: Vec<usize> = (0..self.n).map(|x| below(x).count()).collect();
        (0..self.n).map(|x| below(x).max_by_key(|&y| count[y])).collect()
    }

    /// Classes of relation `r` (an equivalence), each sorted, ordered by least element.
    pub fn classes(&self, r: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for a in 0..self.n {
            if seen[a] {
                continue;
            }
            let class: Vec<usize> = (0..self.n).filter(|&b| self.rel(r, a, b)).collect();
            for &b in &class {
                seen[b] = true;
            }
            out.push(class);
        }
        out
    }

    /// Closure of `t` under the functions and constants: the universe of `⟨t⟩`.
    pub fn generated_substructure(&self, t: &[usize]) -> Result<Vec<usize>> {
        for (i, &x) in t.iter().enumerate() {
            if x >= self.n {
                return Err(Error::input(format!("t[{i}]"), format!("element {x} out of range")));
            }
        }
        let mut set: BTreeSet<usize> = t.iter().copied().collect();
        set.extend(self.constants());
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for f in &self.funcs {
                if let Some(y) = f[x] {
                    if set.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        Ok(set.into_iter().collect())
    }

    /// True when `x` is closed under the functions and contains the constants.
    pub fn is_closed(&self, x: &[bool]) -> bool {
        self.constants().iter().all(|&c| x[c])
            && (0..self.n).all(|a| {
                !x[a] || self.funcs.iter().all(|f| f[a].is_none_or(|b| x[b]))
            })
    }

    /// The structure with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteStructure {
        let n = self.n;
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let rels = self
            .rels
            .iter()
            .map(|r| Relation::from_fn(n, |a, b| r.get(inv[a], inv[b])))
            .collect();
        let funcs = self
            .funcs
            .iter()
            .map(|f| (0..n).map(|a| f[inv[a]].map(|y| perm[y])).collect())
            .collect();
        let mut s = FiniteStructure::from_parts(self.family, n, rels, funcs);
        if let Some(l) = &self.labels {
            s.labels = Some((0..n).map(|a| l[inv[a]].clone()).collect());
        }
        s
    }

    /// The induced substructure on `keep` (in the given order), with
    /// functions restricted; values leaving `keep` become undefined.
    pub fn induced(&self, keep: &[usize]) -> FiniteStructure {
        let mut pos = vec![None; self.n];
        for (i, &x) in keep.iter().enumerate() {
            pos[x] = Some(i);
        }
        let m = keep.len();
        let rels = self
            .rels
            .iter()
            .map(|r| Relation::from_fn(m, |a, b| r.get(keep[a], keep[b])))
            .collect();
        let funcs = self
            .funcs
            .iter()
            .map(|f| keep.iter().map(|&x| f[x].and_then(|y| pos[y])).collect())
            .collect();
        let mut s = FiniteStructure::from_parts(self.family, m, rels, funcs);
        if let Some(l) = &self.labels {
            s.labels = Some(keep.iter().map(|&x| l[x].clone()).collect());
        }
        s
    }

    /// Checks the family axioms.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.rels.len() != self.family.relation_count()
            || self.funcs.len() != self.family.function_count()
        {
            return Err(Error::input("family", "signature does not match the family"));
        }
        for (k, f) in self.funcs.iter().enumerate() {
            if f.len() != n {
                return Err(Error::input(format!("functions[{k}]"), "wrong length"));
            }
            if let Some(x) = f.iter().position(|v| v.is_some_and(|y| y >= n)) {
                return Err(Error::input(format!("functions[{k}][{x}]"), "value out of range"));
            }
        }
        let bad = |what: &str| Err(Error::input("relations", what.to_string()));
        match self.family {
            Family::Order => {
                let r = &self.rels[0];
                for a in 0..n {
                    if !r.get(a, a) {
                        return bad("order is not reflexive");
                    }
                    for b in 0..n {
                        if a != b && r.get(a, b) == r.get(b, a) {
                            return bad("order is not total and antisymmetric");
                        }
                    }
                }
                // a tournament is transitive iff no two elements have as many below them
                let mut seen = vec![false; n];
                for b in 0..n {
                    let k = (0..n).filter(|&a| r.get(a, b)).count() - 1;
                    if std::mem::replace(&mut seen[k], true) {
                        return bad("order is not transitive");
                    }
                }
            }
            Family::Equivalence | Family::NestedEq(_) => {
                for (i, r) in self.rels.iter().enumerate() {
                    if !is_equivalence(r, n) {
                        return Err(Error::input(
                            format!("relations[{i}]"),
                            "not an equivalence relation",
                        ));
                    }
                    if i > 0 {
                        let prev = &self.rels[i - 1];
                        for a in 0..n {
                            for b in 0..n {
                                if r.get(a, b) && !prev.get(a, b) {
                                    return Err(Error::input(
                                        format!("relations[{i}]"),
                                        format!("E{} is not contained in E{}", i + 1, i),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            Family::Injection => {
                let mut hit = vec![false; n];
                for y in self.funcs[0].iter().flatten() {
                    if std::mem::replace(&mut hit[*y], true) {
                        return Err(Error::input("functions[0]", "f is not injective"));
                    }
                }
            }
            Family::Graph => {
                let r = &self.rels[0];
                for a in 0..n {
                    if r.get(a, a) {
                        return bad("graph has a loop");
                    }
                    for b in 0..n {
                        if r.get(a, b) != r.get(b, a) {
                            return bad("adjacency is not symmetric");
                        }
                    }
                }
            }
            Family::TreePo => {
                let r = &self.rels[0];
                if let Some(a) = (0..n).find(|&a| !r.get(a, a)) {
                    return Err(Error::input(format!("relations[0][{a}]"), "tree order is not reflexive"));
                }
                if n > 0 && self.root().is_none() {
                    return bad("no least element");
                }
                // Guess each parent as the strictly-below element with the most
                // elements below it, then require every down-set to be its
                // parent's plus the node itself. That is exactly a tree order.
                let below = |x: usize| (0..n).filter(move |&y| y != x && r.get(y, x));
                let count: Vec<usize> = (0..n).map(|x| below(x).count()).collect();
                let parent: Vec<Option<usize>> = (0..n).map(|x| below(x).max_by_key(|&y| count[y])).collect();
                if parent_depths(&parent).is_err() {
                    return bad("tree order is not antisymmetric");
                }
                for x in 0..n {
                    for y in 0..n {
                        let want = y == x || parent[x].is_some_and(|p| r.get(y, p));
                        if r.get(y, x) != want {
                            return bad("tree order is not transitive or a down-set is not a chain");
                        }
                    }
                }
            }
            Family::TreePred => {
                if !self.is_total() {
                    return Err(Error::input("functions[0]", "predecessor must be total"));
                }
                if n == 0 {
                    return Ok(());
                }
                let roots: Vec<usize> = (0..n).filter(|&x| self.func(0, x) == Some(x)).collect();
                if roots.len() != 1 {
                    return Err(Error::input("functions[0]", "need exactly one root"));
                }
                // 0 unknown, 1 on the current walk, 2 reaches the root
                let mut state = vec![0u8; n];
                state[roots[0]] = 2;
                for a in 0..n {
                    let mut walk = vec![];
                    let mut x = a;
                    while state[x] == 0 {
                        state[x] = 1;
                        walk.push(x);
                        x = self.func(0, x).unwrap();
                    }
                    if state[x] == 1 {
                        return Err(Error::input(
                            format!("functions[0][{a}]"),
                            "does not reach the root",
                        ));
                    }
                    for y in walk {
                        state[y] = 2;
                    }
                }
            }
        }
        Ok(())
    }
}

fn is_equivalence(r: &Relation, n: usize) -> bool {
    (0..n).all(|a| r.get(a, a))
        && (0..n).all(|a| (0..n).all(|b| r.get(a, b) == r.get(b, a)))
        && (0..n).all(|a| {
            (0..n).all(|b| !r.get(a, b) || (0..n).all(|c| !r.get(b, c) || r.get(a, c)))
        })
}

fn partition_relation(n: usize, classes: &[Vec<usize>], path: &str) -> Result<Relation> {
    let mut id = vec![usize::MAX; n];
    for (ci, class) in classes.iter().enumerate() {
        for (j, &x) in class.iter().enumerate() {
            if x >= n {
                return Err(Error::input(format!("{path}[{ci}][{j}]"), "element out of range"));
            }
            if id[x] != usize::MAX {
                return Err(Error::input(format!("{path}[{ci}][{j}]"), "element listed twice"));
            }
            id[x] = ci;
        }
    }
    if let Some(x) = id.iter().position(|&c| c == usize::MAX) {
        return Err(Error::input(path, format!("element {x} is in no class")));
    }
    Ok(Relation::from_fn(n, |a, b| id[a] == id[b]))
}

fn parent_depths(parent: &[Option<usize>]) -> Result<Vec<usize>> {
    let n = parent.len();
    if n > 0 && parent.iter().filter(|p| p.is_none()).count() != 1 {
        return Err(Error::input("parent", "need exactly one root"));
    }
    let mut depth = vec![usize::MAX; n];
    for a in 0..n {
        let mut chain = vec![];
        let mut x = a;
        while depth[x] == usize::MAX {
            chain.push(x);
            if chain.len() > n {
                return Err(Error::input(format!("parent[{a}]"), "cycle"));
            }
            match parent[x] {
                None => {
                    depth[x] = 0;
                    chain.pop();
                    break;
                }
                Some(p) if p < n => x = p,
                Some(_) => return Err(Error::input(format!("parent[{x}]"), "out of range")),
            }
        }
        while let Some(y) = chain.pop() {
            let p = parent[y].unwrap();
            if depth[p] == usize::MAX {
                return Err(Error::input(format!("parent[{a}]"), "cycle"));
            }
            depth[y] = depth[p] + 1;
        }
    }
    Ok(depth)
}

fn is_ancestor(parent: &[Option<usize>], depth: &[usize], a: usize, b: usize) -> bool {
    let mut x = b;
    while depth[x] > depth[a] {
        x = parent[x].unwrap();
    }
    x == a
}

/// A finite partial map between two structures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PartialMap {
    /// `(source, target)` pairs.
    pub pairs: Vec<(usize, usize)>,
    /// Elements required to be mapped to themselves.
    pub fixed: Vec<usize>,
}

impl PartialMap {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        PartialMap {
            pairs,
            fixed: vec![],
        }
    }

    /// Checks that sources are distinct and targets are distinct.
    pub fn check(&self) -> Result<()> {
        let mut src = BTreeSet::new();
        let mut dst = BTreeSet::new();
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            if !src.insert(a) || !dst.insert(b) {
                return Err(Error::input(format!("pairs[{i}]"), "map is not injective"));
            }
        }
        Ok(())
    }
}

/// Closes a finite correspondence under the constants and functions.
///
/// Returns the closed list of pairs or `None` when the induced map is not a
/// well-defined injection respecting definedness. Relations are not checked.
pub fn close_pairs(
    a: &FiniteStructure,
    b: &FiniteStructure,
    pairs: &[(usize, usize)],
) -> Option<Vec<(usize, usize)>> {
    let mut fwd = vec![None; a.size()];
    let mut bwd = vec![None; b.size()];
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize)> = pairs.to_vec();
    let (ca, cb) = (a.constants(), b.constants());
    if ca.len() != cb.len() {
        return None;
    }
    stack.extend(ca.into_iter().zip(cb));
    while let Some((x, y)) = stack.pop() {
        if x >= a.size() || y >= b.size() {
            return None;
        }
        match (fwd[x], bwd[y]) {
            (None, None) => {
                fwd[x] = Some(y);
                bwd[y] = Some(x);
                out.push((x, y));
                for k in 0..a.functions().len() {
                    match (a.func(k, x), b.func(k, y)) {
                        (Some(fx), Some(fy)) => stack.push((fx, fy)),
                        (None, None) => {}
                        _ => return None,
                    }
                }
            }
            (Some(y2), Some(x2)) if y2 == y && x2 == x => {}
            _ => return None,
        }
    }
    Some(out)
}

/// True when the closed pair list preserves every relation in both directions.
pub fn preserves_relations(
    a: &FiniteStructure,
    b: &FiniteStructure,
    closed: &[(usize, usize)],
) -> bool {
    (0..a.relations().len()).all(|r| {
        closed.iter().all(|&(x1, y1)| {
            closed
                .iter()
                .all(|&(x2, y2)| a.rel(r, x1, x2) == b.rel(r, y1, y2))
        })
    })
}

/// The isomorphism of generated substructures induced by `pairs`, if any.
pub fn generated_isomorphism(
    a: &FiniteStructure,
    b: &FiniteStructure,
    pairs: &[(usize, usize)],
) -> Option<Vec<(usize, usize)>> {
    if a.family() != b.family() {
        return None;
    }
    let closed = close_pairs(a, b, pairs)?;
    preserves_relations(a, b, &closed).then_some(closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_substructure_examples() {
        let e = FiniteStructure::equivalence(5, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(e.generated_substructure(&[1, 4]).unwrap(), vec![1, 4]);
        let c = FiniteStructure::injection(vec![1, 2, 0]).unwrap();
        assert_eq!(c.generated_substructure(&[0]).unwrap(), vec![0, 1, 2]);
        let p = FiniteStructure::tree_pred(&[None, Some(0), Some(1)]).unwrap();
        assert_eq!(p.generated_substructure(&[2]).unwrap(), vec![0, 1, 2]);
        assert!(e.generated_substructure(&[7]).is_err());
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(FiniteStructure::injection(vec![1, 1]).is_err());
        assert!(FiniteStructure::tree_pred(&[None, Some(2), Some(1)]).is_err());
        assert!(FiniteStructure::nested(
            6,
            &[
                vec![vec![0, 1, 2], vec![3, 4, 5]],
                vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            ],
        )
        .is_err());
    }

    #[test]
    fn tree_po_parent_round_trip() {
        let parent = vec![None, Some(0), Some(0), Some(1)];
        let t = FiniteStructure::tree_po(&parent).unwrap();
        assert_eq!(t.root(), Some(0));
        assert_eq!(t.parent_array(), parent);
        assert_eq!(t.generated_substructure(&[3]).unwrap(), vec![0, 3]);
    }
}
