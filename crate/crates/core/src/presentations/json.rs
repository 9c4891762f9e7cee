//! JSON files for presentations and finite structures.
//!
//! Every file is an object with a `"family"` field. Finite structures carry
//! their family's data field (`order`, `classes`, `f`, `edges`, `parent` or
//! `relations`); anything else is read as a presentation. Counts are integers
//! or the string `"omega"`. Errors name the offending field as a path such as
//! `$.character[1][0]`.

use serde_json::{json, Map, Value};

use super::*;
use crate::ext::{ExtCount, Omega};

/// A parsed input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Presentation(Presentation),
    Structure(FiniteStructure),
}

impl Input {
    pub fn family(&self) -> Family {
        match self {
            Input::Presentation(p) => p.family(),
            Input::Structure(s) => s.family(),
        }
    }

    /// The presentation, using the exact one for finite structures.
    pub fn presentation(&self) -> Result<Presentation> {
        match self {
            Input::Presentation(p) => Ok(p.clone()),
            Input::Structure(s) => Presentation::of_structure(s),
        }
    }
}

const STRUCTURE_FIELDS: [&str; 6] = ["order", "classes", "f", "edges", "parent", "relations"];

/// Parses a file's text, reporting syntax errors by line and column.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        Error::input(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<Input> {
    let obj = as_object(v, "$")?;
    let name = as_str(field(obj, "$", "family")?, "$.family")?;
    if STRUCTURE_FIELDS.iter().any(|f| obj.contains_key(*f)) {
        let s = parse_structure(obj, name)?;
        return Ok(Input::Structure(s));
    }
    let p = match name {
        "order" => Presentation::Linear(LinOrderPres::new(
            as_array(field(obj, "$", "blocks")?, "$.blocks")?
                .iter()
                .enumerate()
                .map(|(i, b)| parse_block(b, &format!("$.blocks[{i}]")))
                .collect::<Result<_>>()?,
        )),
        "equivalence" => {
            let mut c = EqCharacter::new(parse_count_map(obj.get("character"), "$.character")?);
            c.unbounded_tail = opt_bool(obj, "unbounded_tail")?;
            Presentation::Equivalence(c)
        }
        "injection" => {
            let mut cycles = Vec::new();
            for (k, c) in parse_count_map(obj.get("cycles"), "$.cycles")? {
                match k {
                    ExtCount::Fin(k) if k >= 1 => cycles.push((k, c)),
                    _ => return Err(Error::input("$.cycles", "cycle lengths are positive integers")),
                }
            }
            let mut sp = InjSpectrum::new(
                cycles,
                opt_count(obj, "omega")?,
                opt_count(obj, "zeta")?,
            );
            sp.unbounded_cycle_tail = opt_bool(obj, "unbounded_cycle_tail")?;
            Presentation::Injection(sp)
        }
        "graph" => Presentation::Graph(parse_graph(obj)?),
        "tree-po" => Presentation::TreePo(parse_tree(field(obj, "$", "tree")?, "$.tree")?),
        "tree-pred" => Presentation::TreePred(parse_tree(field(obj, "$", "tree")?, "$.tree")?),
        "nested-eq" => {
            let n = as_usize(field(obj, "$", "n")?, "$.n")?;
            let tree = parse_tree(field(obj, "$", "tree")?, "$.tree")?;
            Presentation::Nested(NestedEqPres::Tree { n, tree })
        }
        other => return Err(Error::input("$.family", format!("unknown family {other:?}"))),
    };
    p.validate().map_err(|e| prefix_path(e, "$."))?;
    Ok(Input::Presentation(p))
}

fn prefix_path(e: Error, prefix: &str) -> Error {
    match e {
        Error::Input { path, message } if !path.starts_with('$') => Error::Input {
            path: format!("{prefix}{path}"),
            message,
        },
        e => e,
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::input(format!("{path}.{name}"), "missing field"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::input(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::input(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::input(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    match v.as_i64() {
        Some(k) if k >= 0 => Ok(k as usize),
        Some(k) => Err(Error::input(path, format!("negative value {k}"))),
        None => Err(Error::input(path, "expected a non-negative integer")),
    }
}

fn opt_bool(obj: &Map<String, Value>, name: &str) -> Result<bool> {
    match obj.get(name) {
        None => Ok(false),
        Some(v) => v
            .as_bool()
            .ok_or_else(|| Error::input(format!("$.{name}"), "expected a boolean")),
    }
}

fn opt_count(obj: &Map<String, Value>, name: &str) -> Result<ExtCount> {
    match obj.get(name) {
        None => Ok(ExtCount::Fin(0)),
        Some(v) => parse_count(v, &format!("$.{name}")),
    }
}

/// An integer or `"omega"`.
pub fn parse_count(v: &Value, path: &str) -> Result<ExtCount> {
    match v {
        Value::String(s) if s == "omega" => Ok(Omega),
        Value::String(s) => match s.parse::<i64>() {
            Ok(k) if k >= 0 => Ok(ExtCount::Fin(k as u64)),
            Ok(k) => Err(Error::input(path, format!("negative count {k}"))),
            Err(_) => Err(Error::input(path, format!("expected an integer or \"omega\", found {s:?}"))),
        },
        Value::Number(_) => match v.as_i64() {
            Some(k) if k >= 0 => Ok(ExtCount::Fin(k as u64)),
            Some(k) => Err(Error::input(path, format!("negative count {k}"))),
            None => match v.as_u64() {
                Some(k) => Ok(ExtCount::Fin(k)),
                None => Err(Error::input(path, "counts must be integers")),
            },
        },
        _ => Err(Error::input(path, "expected an integer or \"omega\"")),
    }
}

/// `{"3": 2, "omega": 1}` or `[[3, 2], ["omega", 1]]`.
fn parse_count_map(v: Option<&Value>, path: &str) -> Result<Vec<(ExtCount, ExtCount)>> {
    let mut out = Vec::new();
    match v {
        None => {}
        Some(Value::Object(m)) => {
            for (k, c) in m {
                let kp = format!("{path}.{k}");
                out.push((parse_count(&Value::String(k.clone()), &kp)?, parse_count(c, &kp)?));
            }
        }
        Some(Value::Array(a)) => {
            for (i, e) in a.iter().enumerate() {
                let p = format!("{path}[{i}]");
                let pair = as_array(e, &p)?;
                if pair.len() != 2 {
                    return Err(Error::input(p, "expected [size, count]"));
                }
                out.push((
                    parse_count(&pair[0], &format!("{p}[0]"))?,
                    parse_count(&pair[1], &format!("{p}[1]"))?,
                ));
            }
        }
        Some(_) => return Err(Error::input(path, "expected an object or an array of pairs")),
    }
    for w in 0..out.len() {
        if out[..w].iter().any(|(k, _)| *k == out[w].0) {
            return Err(Error::input(path, format!("size {} listed twice", out[w].0)));
        }
        if out[w].0.is_zero() {
            return Err(Error::input(path, "sizes must be at least 1"));
        }
        if out[w].1.is_zero() {
            return Err(Error::input(path, "counts must be at least 1"));
        }
    }
    Ok(out)
}

fn parse_block(v: &Value, path: &str) -> Result<Block> {
    let fin = |k: &Value, p: &str| -> Result<Block> {
        match parse_count(k, p)? {
            ExtCount::Fin(k) if k >= 1 => Ok(Block::Fin(k)),
            _ => Err(Error::input(p, "Fin blocks need a finite k >= 1")),
        }
    };
    match v {
        Value::String(s) => match s.as_str() {
            "ETA" => Ok(Block::Eta),
            "OMEGA" => Ok(Block::Omega),
            "OMEGA_STAR" => Ok(Block::OmegaStar),
            "ZETA" => Ok(Block::Zeta),
            other => match other.strip_prefix("Fin ") {
                Some(k) => fin(&Value::String(k.trim().into()), path),
                None => Err(Error::input(path, format!("unknown block {other:?}"))),
            },
        },
        Value::Object(m) if m.len() == 1 && m.contains_key("Fin") => fin(&m["Fin"], &format!("{path}.Fin")),
        _ => Err(Error::input(path, "expected a block name or {\"Fin\": k}")),
    }
}

/// A node is an array of `[child, multiplicity]` pairs, or an object
/// `{"children": [...], "tail": true}`.
pub fn parse_tree(v: &Value, path: &str) -> Result<TreePres> {
    let (kids, tail, kpath) = match v {
        Value::Array(a) => (a, false, path.to_string()),
        Value::Object(m) => {
            let kp = format!("{path}.children");
            let kids = match m.get("children") {
                Some(c) => as_array(c, &kp)?,
                None => return Err(Error::input(kp, "missing field")),
            };
            let tail = match m.get("tail") {
                None => false,
                Some(t) => t
                    .as_bool()
                    .ok_or_else(|| Error::input(format!("{path}.tail"), "expected a boolean"))?,
            };
            (kids, tail, kp)
        }
        _ => return Err(Error::input(path, "expected a tree node")),
    };
    let mut children = Vec::new();
    for (i, e) in kids.iter().enumerate() {
        let p = format!("{kpath}[{i}]");
        let pair = as_array(e, &p)?;
        if pair.len() != 2 {
            return Err(Error::input(p, "expected [child, multiplicity]"));
        }
        let m = parse_count(&pair[1], &format!("{p}[1]"))?;
        if m.is_zero() {
            return Err(Error::input(format!("{p}[1]"), "multiplicity must be at least 1"));
        }
        children.push((parse_tree(&pair[0], &format!("{p}[0]"))?, m));
    }
    Ok(TreePres { children, tail }.canonical())
}

fn parse_edges(v: &Value, path: &str) -> Result<Vec<(usize, usize)>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("{path}[{i}]");
            let pair = as_array(e, &p)?;
            if pair.len() != 2 {
                return Err(Error::input(p, "expected [u, v]"));
            }
            Ok((as_usize(&pair[0], &format!("{p}[0]"))?, as_usize(&pair[1], &format!("{p}[1]"))?))
        })
        .collect()
}

fn parse_graph(obj: &Map<String, Value>) -> Result<GraphPres> {
    let mut g = GraphPres::default();
    if let Some(t) = obj.get("catalog_tag") {
        let s = as_str(t, "$.catalog_tag")?;
        g.catalog_tag = Some(
            CatalogTag::parse(s).ok_or_else(|| Error::input("$.catalog_tag", format!("unknown tag {s:?}")))?,
        );
    }
    if let Some(c) = obj.get("components") {
        for (i, comp) in as_array(c, "$.components")?.iter().enumerate() {
            let p = format!("$.components[{i}]");
            let co = as_object(comp, &p)?;
            let n = as_usize(field(co, &p, "size")?, &format!("{p}.size"))?;
            let edges = match co.get("edges") {
                Some(e) => parse_edges(e, &format!("{p}.edges"))?,
                None => vec![],
            };
            let m = match co.get("multiplicity") {
                Some(m) => parse_count(m, &format!("{p}.multiplicity"))?,
                None => ExtCount::Fin(1),
            };
            let graph = FiniteStructure::graph(n, &edges).map_err(|e| prefix_path(e, &format!("{p}.")))?;
            g.components.push((graph, m));
        }
    }
    if let Some(b) = obj.get("bulk") {
        let bo = as_object(b, "$.bulk")?;
        g.bulk = Some((
            parse_count(field(bo, "$.bulk", "m")?, "$.bulk.m")?,
            parse_count(field(bo, "$.bulk", "n")?, "$.bulk.n")?,
        ));
    }
    Ok(g)
}

fn parse_index_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_partition(v: &Value, path: &str) -> Result<Vec<Vec<usize>>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_index_list(c, &format!("{path}[{i}]")))
        .collect()
}

fn parse_optional_list(v: &Value, path: &str) -> Result<Vec<Option<usize>>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| match x {
            Value::Null => Ok(None),
            x => as_usize(x, &format!("{path}[{i}]")).map(Some),
        })
        .collect()
}

fn parse_structure(obj: &Map<String, Value>, family: &str) -> Result<FiniteStructure> {
    let size = |name: &str| -> Result<usize> { as_usize(field(obj, "$", name)?, &format!("$.{name}")) };
    let s = match family {
        "order" => FiniteStructure::order_from_sequence(&parse_index_list(field(obj, "$", "order")?, "$.order")?),
        "equivalence" => FiniteStructure::equivalence(
            size("size")?,
            &parse_partition(field(obj, "$", "classes")?, "$.classes")?,
        ),
        "injection" => FiniteStructure::partial_injection(parse_optional_list(field(obj, "$", "f")?, "$.f")?),
        "graph" => FiniteStructure::graph(size("size")?, &parse_edges(field(obj, "$", "edges")?, "$.edges")?),
        "tree-po" => FiniteStructure::tree_po(&parse_optional_list(field(obj, "$", "parent")?, "$.parent")?),
        "tree-pred" => FiniteStructure::tree_pred(&parse_optional_list(field(obj, "$", "parent")?, "$.parent")?),
        "nested-eq" => {
            let rels = as_array(field(obj, "$", "relations")?, "$.relations")?
                .iter()
                .enumerate()
                .map(|(i, r)| parse_partition(r, &format!("$.relations[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            FiniteStructure::nested(size("size")?, &rels)
        }
        other => return Err(Error::input("$.family", format!("unknown family {other:?}"))),
    }
    .map_err(|e| prefix_path(e, "$."))?;
    match obj.get("labels") {
        None => Ok(s),
        Some(l) => {
            let labels: Vec<String> = as_array(l, "$.labels")?
                .iter()
                .enumerate()
                .map(|(i, x)| as_str(x, &format!("$.labels[{i}]")).map(str::to_string))
                .collect::<Result<_>>()?;
            if labels.len() != s.size() {
                return Err(Error::input("$.labels", "one label per element is required"));
            }
            Ok(s.with_labels(labels))
        }
    }
}

fn count_json(c: ExtCount) -> Value {
    match c {
        ExtCount::Fin(k) => json!(k),
        Omega => json!("omega"),
    }
}

fn count_key(c: ExtCount) -> String {
    c.to_string()
}

pub fn tree_to_json(t: &TreePres) -> Value {
    let kids: Vec<Value> = t
        .children
        .iter()
        .map(|(c, m)| json!([tree_to_json(c), count_json(*m)]))
        .collect();
    if t.tail {
        json!({"children": kids, "tail": true})
    } else {
        Value::Array(kids)
    }
}

/// The file form of a finite structure.
pub fn structure_to_json(s: &FiniteStructure) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), json!(s.family().name()));
    let n = s.size();
    match s.family() {
        Family::Order => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&x| (0..n).filter(|&y| s.rel(0, y, x)).count());
            m.insert("order".into(), json!(order));
        }
        Family::Equivalence => {
            m.insert("size".into(), json!(n));
            m.insert("classes".into(), json!(s.classes(0)));
        }
        Family::Injection => {
            m.insert("f".into(), json!(s.functions()[0]));
        }
        Family::Graph => {
            m.insert("size".into(), json!(n));
            let edges: Vec<[usize; 2]> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| [a, b]))
                .filter(|&[a, b]| s.rel(0, a, b))
                .collect();
            m.insert("edges".into(), json!(edges));
        }
        Family::TreePo | Family::TreePred => {
            m.insert("parent".into(), json!(s.parent_array()));
        }
        Family::NestedEq(k) => {
            m.insert("size".into(), json!(n));
            let rels: Vec<Vec<Vec<usize>>> = (0..k).map(|r| s.classes(r)).collect();
            m.insert("relations".into(), json!(rels));
        }
    }
    if let Some(l) = s.labels() {
        m.insert("labels".into(), json!(l));
    }
    Value::Object(m)
}

/// The file form of a presentation.
pub fn presentation_to_json(p: &Presentation) -> Value {
    match p {
        Presentation::Linear(l) => json!({"family": "order", "blocks": l.blocks}),
        Presentation::Equivalence(c) => {
            let ch: Map<String, Value> = c.entries.iter().map(|(&s, &k)| (count_key(s), count_json(k))).collect();
            json!({"family": "equivalence", "character": ch, "unbounded_tail": c.unbounded_tail})
        }
        Presentation::Injection(sp) => {
            let cy: Map<String, Value> = sp.cycles.iter().map(|(k, c)| (k.to_string(), count_json(*c))).collect();
            json!({
                "family": "injection",
                "cycles": cy,
                "omega": count_json(sp.omega_orbits),
                "zeta": count_json(sp.zeta_orbits),
                "unbounded_cycle_tail": sp.unbounded_cycle_tail,
            })
        }
        Presentation::Graph(g) => {
            let mut m = Map::new();
            m.insert("family".into(), json!("graph"));
            if let Some(t) = g.catalog_tag {
                m.insert("catalog_tag".into(), json!(t.name()));
            }
            let comps: Vec<Value> = g
                .components
                .iter()
                .map(|(c, k)| {
                    let mut v = structure_to_json(c);
                    let o = v.as_object_mut().expect("object");
                    o.remove("family");
                    o.insert("multiplicity".into(), count_json(*k));
                    v
                })
                .collect();
            m.insert("components".into(), Value::Array(comps));
            if let Some((a, b)) = g.bulk {
                m.insert("bulk".into(), json!({"m": count_json(a), "n": count_json(b)}));
            }
            Value::Object(m)
        }
        Presentation::TreePo(t) => json!({"family": "tree-po", "tree": tree_to_json(t)}),
        Presentation::TreePred(t) => json!({"family": "tree-pred", "tree": tree_to_json(t)}),
        Presentation::Nested(NestedEqPres::Tree { n, tree }) => {
            json!({"family": "nested-eq", "n": n, "tree": tree_to_json(tree)})
        }
        Presentation::Nested(NestedEqPres::Finite(s)) => structure_to_json(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        match parse_input(text).unwrap() {
            Input::Presentation(p) => p,
            Input::Structure(_) => panic!("expected a presentation"),
        }
    }

    #[test]
    fn parses_each_family() {
        let p = pres(r#"{"family":"order","blocks":["ETA",{"Fin":5},"Fin 2","ETA"]}"#);
        assert_eq!(
            p,
            Presentation::Linear(LinOrderPres::new(vec![Block::Eta, Block::Fin(5), Block::Fin(2), Block::Eta]))
        );
        let p = pres(r#"{"family":"equivalence","character":{"3":2,"5":1,"omega":"omega"}}"#);
        let Presentation::Equivalence(c) = &p else { panic!() };
        assert_eq!(c.entries.len(), 3);
        let p = pres(r#"{"family":"injection","cycles":[[3,"omega"]],"omega":2}"#);
        let Presentation::Injection(sp) = &p else { panic!() };
        assert_eq!(sp.omega_orbits, ExtCount::Fin(2));
        let p = pres(r#"{"family":"tree-po","tree":[[[[[],"omega"]],1]]}"#);
        assert_eq!(p.family(), Family::TreePo);
        for q in [p.clone(), pres(r#"{"family":"graph","bulk":{"m":"omega","n":3}}"#)] {
            assert_eq!(pres(&presentation_to_json(&q).to_string()), q);
        }
    }

    #[test]
    fn error_paths() {
        let e = parse_input(r#"{"family":"equivalence","character":[[2,-1]]}"#).unwrap_err();
        assert_eq!(e, Error::input("$.character[0][1]", "negative count -1"));
        let e = parse_input("{\"family\":\n").unwrap_err();
        assert!(matches!(e, Error::Input { ref path, .. } if path.starts_with("line 2")));
        let e = parse_input(r#"{"family":"tree-po","tree":[[[], 0]]}"#).unwrap_err();
        assert!(matches!(e, Error::Input { ref path, .. } if path == "$.tree[0][1]"));
    }

    #[test]
    fn structures_round_trip() {
        let s = match parse_input(r#"{"family":"equivalence","size":4,"classes":[[0,1],[2,3]]}"#).unwrap() {
            Input::Structure(s) => s,
            _ => panic!(),
        };
        assert_eq!(parse_value(&structure_to_json(&s)).unwrap(), Input::Structure(s));
        let e = parse_input(r#"{"family":"nested-eq","size":6,"relations":[[[0,1,2],[3,4,5]],[[0,1],[2,3],[4,5]]]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("E2 is not contained in E1"), "{e}");
    }
}
