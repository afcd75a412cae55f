//! JSON ingestion and canonical serialization of complexes, symmetric
//! sequences, presentations, coalgebras and simplicial sets.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace, LinearMap};
use crate::linalg::{self, Vector};
use crate::multilinear::{self, Cooperation, Tensor};
use crate::scalar::{Field, Scalar};
use crate::simplicial::{NormalForm, Simplex, SimplicialSet};
use crate::symseq::SymmetricSequence;
use crate::tree::{Cell, NamedPoly, NamedTree, Presentation};

fn perr(location: &str, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

fn obj<'a>(v: &'a Value, loc: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(loc, "expected an object"))
}

fn arr<'a>(v: &'a Value, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(loc, "expected an array"))
}

fn field_of<'a>(m: &'a Map<String, Value>, key: &str, loc: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| perr(loc, format!("missing '{key}'")))
}

fn string(v: &Value, loc: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| perr(loc, "expected a string"))
}

fn int(v: &Value, loc: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| perr(loc, "expected an integer"))
}

fn uint(v: &Value, loc: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(loc, "expected a nonnegative integer"))
}

pub fn field_to_json(f: Field) -> Value {
    match f {
        Field::Rational => json!("Q"),
        Field::Prime(p) => json!({ "p": p }),
    }
}

pub fn field_from_json(v: &Value, loc: &str) -> Result<Field> {
    match v {
        Value::String(s) => Field::parse(s).map_err(|e| perr(loc, e.to_string())),
        Value::Object(m) => {
            let p = uint(field_of(m, "p", loc)?, &format!("{loc}.p"))?;
            Field::prime(p as u64).map_err(|e| perr(loc, e.to_string()))
        }
        _ => Err(perr(loc, "expected \"Q\" or {\"p\": prime}")),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

pub fn scalar_from_json(f: Field, v: &Value, loc: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => Scalar::parse(f, s).map_err(|e| perr(loc, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_i64(f, n.as_i64().unwrap())),
        _ => Err(perr(loc, "expected a coefficient string such as \"-1/2\"")),
    }
}

fn coeff_of(f: Field, m: &Map<String, Value>, loc: &str) -> Result<Scalar> {
    match m.get("coeff") {
        None => Ok(f.one()),
        Some(v) => scalar_from_json(f, v, &format!("{loc}.coeff")),
    }
}

pub fn basis_to_json(s: &GradedSpace) -> Value {
    let mut m = Map::new();
    for (d, labels) in s.basis_map() {
        m.insert(d.to_string(), json!(labels));
    }
    Value::Object(m)
}

pub fn basis_from_json(v: &Value, loc: &str) -> Result<GradedSpace> {
    let mut basis = BTreeMap::new();
    for (k, labels) in obj(v, loc)? {
        let d: i64 = k.parse().map_err(|_| perr(loc, format!("degree key '{k}' is not an integer")))?;
        let l = arr(labels, &format!("{loc}.{k}"))?
            .iter()
            .enumerate()
            .map(|(i, x)| string(x, &format!("{loc}.{k}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        basis.insert(d, l);
    }
    GradedSpace::new(basis).map_err(|e| perr(loc, e.to_string()))
}

fn entries_to_json(m: &LinearMap) -> Value {
    let mut out = vec![];
    for (j, col) in m.cols.iter().enumerate() {
        for (i, x) in col {
            out.push(json!({
                "from": m.source.label(j),
                "to": m.target.label(*i),
                "deg": m.source.degree(j),
                "coeff": scalar_to_json(x),
            }));
        }
    }
    Value::Array(out)
}

fn entries_from_json(f: Field, source: &GradedSpace, target: &GradedSpace, v: &Value, loc: &str) -> Result<Vec<Vector>> {
    let mut cols = vec![Vector::new(); source.dim()];
    for (k, e) in arr(v, loc)?.iter().enumerate() {
        let l = format!("{loc}[{k}]");
        let m = obj(e, &l)?;
        let from = string(field_of(m, "from", &l)?, &format!("{l}.from"))?;
        let to = string(field_of(m, "to", &l)?, &format!("{l}.to"))?;
        let j = source.find_label(&from).ok_or_else(|| perr(&l, format!("unknown basis element '{from}'")))?;
        let i = target.find_label(&to).ok_or_else(|| perr(&l, format!("unknown basis element '{to}'")))?;
        if let Some(d) = m.get("deg") {
            if int(d, &format!("{l}.deg"))? != source.degree(j) {
                return Err(perr(&l, format!("'{from}' does not have degree {d}")));
            }
        }
        linalg::add_entry(&mut cols[j], i, &coeff_of(f, m, &l)?);
    }
    Ok(cols)
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    json!({ "field": field_to_json(c.field), "basis": basis_to_json(&c.space), "d": entries_to_json(&c.d) })
}

/// Loads a complex; `field` overrides a missing "field" entry.
pub fn complex_from_json(v: &Value, default_field: Option<Field>, loc: &str) -> Result<ChainComplex> {
    let m = obj(v, loc)?;
    let f = match m.get("field") {
        Some(x) => field_from_json(x, &format!("{loc}.field"))?,
        None => default_field.ok_or_else(|| perr(loc, "missing 'field'"))?,
    };
    let space = basis_from_json(field_of(m, "basis", loc)?, &format!("{loc}.basis"))?;
    let cols = match m.get("d") {
        Some(d) => entries_from_json(f, &space, &space, d, &format!("{loc}.d"))?,
        None => vec![Vector::new(); space.dim()],
    };
    ChainComplex::new(f, space, cols).map_err(|e| match e {
        Error::NotAComplex(s) => Error::NotAComplex(format!("{loc}: {s}")),
        other => perr(loc, other.to_string()),
    })
}

pub fn linear_map_to_json(m: &LinearMap) -> Value {
    json!({ "degree": m.degree, "entries": entries_to_json(m) })
}

pub fn linear_map_from_json(f: Field, source: &ChainComplex, target: &ChainComplex, v: &Value, loc: &str) -> Result<LinearMap> {
    let (degree, entries) = match v {
        Value::Array(_) => (0, v),
        _ => {
            let m = obj(v, loc)?;
            let deg = match m.get("degree") {
                Some(d) => int(d, &format!("{loc}.degree"))?,
                None => 0,
            };
            (deg, field_of(m, "entries", loc)?)
        }
    };
    let cols = entries_from_json(f, &source.space, &target.space, entries, &format!("{loc}.entries"))?;
    LinearMap::new(f, source.space.clone(), target.space.clone(), degree, cols).map_err(|e| perr(loc, e.to_string()))
}

fn dense(m: &LinearMap) -> Value {
    let n = m.target.dim();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array(m.cols.iter().map(|c| scalar_to_json(&c.get(&i).cloned().unwrap_or_else(|| m.field.zero()))).collect()))
        .collect();
    Value::Array(rows)
}

fn dense_from(f: Field, space: &Arc<GradedSpace>, v: &Value, loc: &str) -> Result<LinearMap> {
    let rows = arr(v, loc)?;
    let n = space.dim();
    if rows.len() != n {
        return Err(perr(loc, format!("expected {n} rows")));
    }
    let mut cols = vec![Vector::new(); n];
    for (i, r) in rows.iter().enumerate() {
        let r = arr(r, &format!("{loc}[{i}]"))?;
        if r.len() != n {
            return Err(perr(&format!("{loc}[{i}]"), format!("expected {n} entries")));
        }
        for (j, x) in r.iter().enumerate() {
            linalg::add_entry(&mut cols[j], i, &scalar_from_json(f, x, &format!("{loc}[{i}][{j}]"))?);
        }
    }
    LinearMap::new(f, space.clone(), space.clone(), 0, cols).map_err(|e| perr(loc, e.to_string()))
}

/// `{"field", "components": [{"arity", "basis", "d", "action": [matrix per s_j]}]}`
/// with `matrix[i][j]` the coefficient of basis element i in s·(basis element j).
pub fn symseq_to_json(s: &SymmetricSequence) -> Value {
    let comps: Vec<Value> = s
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.dim() > 0)
        .map(|(n, c)| {
            json!({
                "arity": n,
                "basis": basis_to_json(&c.space),
                "d": entries_to_json(&c.d),
                "action": s.actions[n].iter().map(dense).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "field": field_to_json(s.field), "components": comps })
}

pub fn symseq_from_json(v: &Value, default_field: Option<Field>, loc: &str) -> Result<SymmetricSequence> {
    let m = obj(v, loc)?;
    let f = match m.get("field") {
        Some(x) => field_from_json(x, &format!("{loc}.field"))?,
        None => default_field.ok_or_else(|| perr(loc, "missing 'field'"))?,
    };
    let single;
    let comps: Vec<&Value> = match m.get("components") {
        Some(c) => arr(c, &format!("{loc}.components"))?.iter().collect(),
        None => {
            single = v.clone();
            vec![&single]
        }
    };
    let mut out = SymmetricSequence::zero(f);
    for (k, c) in comps.iter().enumerate() {
        let l = format!("{loc}.components[{k}]");
        let cm = obj(c, &l)?;
        let n = uint(field_of(cm, "arity", &l)?, &format!("{l}.arity"))?;
        let cx = complex_from_json(c, Some(f), &l)?;
        if n < out.components.len() && out.dim(n) > 0 {
            return Err(perr(&l, format!("arity {n} given twice")));
        }
        let acts = match cm.get("action") {
            Some(a) => arr(a, &format!("{l}.action"))?
                .iter()
                .enumerate()
                .map(|(j, x)| dense_from(f, &cx.space, x, &format!("{l}.action[{j}]")))
                .collect::<Result<Vec<_>>>()?,
            None => vec![],
        };
        if acts.len() != n.saturating_sub(1) {
            return Err(perr(&l, format!("arity {n} needs {} action matrices", n.saturating_sub(1))));
        }
        out = out.padded(n);
        out.components[n] = cx;
        out.actions[n] = acts;
    }
    SymmetricSequence::new(f, out.components, out.actions).map_err(|e| perr(loc, e.to_string()))
}

pub fn tree_to_json(t: &NamedTree) -> Value {
    match t {
        NamedTree::Leaf(i) => json!(i + 1),
        NamedTree::Node(name, ch) => {
            let mut v = vec![json!(name)];
            v.extend(ch.iter().map(tree_to_json));
            Value::Array(v)
        }
    }
}

/// Trees are `["name", child, ...]` with leaves the integers 1..n.
pub fn tree_from_json(v: &Value, loc: &str) -> Result<NamedTree> {
    match v {
        Value::Number(_) => {
            let i = uint(v, loc)?;
            if i == 0 {
                return Err(perr(loc, "leaf labels start at 1"));
            }
            Ok(NamedTree::Leaf(i - 1))
        }
        Value::Array(a) if !a.is_empty() => {
            let name = string(&a[0], &format!("{loc}[0]"))?;
            let ch = a[1..].iter().enumerate().map(|(i, c)| tree_from_json(c, &format!("{loc}[{}]", i + 1))).collect::<Result<Vec<_>>>()?;
            Ok(NamedTree::Node(name, ch))
        }
        _ => Err(perr(loc, "expected a tree [\"name\", children...] or a leaf number")),
    }
}

fn collect_leaves(t: &NamedTree, out: &mut Vec<usize>) {
    match t {
        NamedTree::Leaf(i) => out.push(*i),
        NamedTree::Node(_, ch) => ch.iter().for_each(|c| collect_leaves(c, out)),
    }
}

fn poly_to_json(p: &NamedPoly) -> Value {
    Value::Array(p.iter().map(|(c, t)| json!({ "coeff": scalar_to_json(c), "tree": tree_to_json(t) })).collect())
}

fn poly_from_json(f: Field, v: &Value, loc: &str) -> Result<NamedPoly> {
    let mut out = vec![];
    for (k, m) in arr(v, loc)?.iter().enumerate() {
        let l = format!("{loc}[{k}]");
        match m {
            Value::Object(o) => {
                let t = tree_from_json(field_of(o, "tree", &l)?, &format!("{l}.tree"))?;
                out.push((coeff_of(f, o, &l)?, t));
            }
            _ => out.push((f.one(), tree_from_json(m, &l)?)),
        }
        let mut leaves = vec![];
        collect_leaves(&out.last().unwrap().1, &mut leaves);
        let mut sorted = leaves.clone();
        sorted.sort();
        if sorted != (0..leaves.len()).collect::<Vec<_>>() {
            return Err(perr(&l, "leaf labels must be 1..n, each used once"));
        }
    }
    Ok(out)
}

pub fn cell_to_json(c: &Cell) -> Value {
    json!({ "name": c.name, "arity": c.arity, "degree": c.degree, "boundary": poly_to_json(&c.boundary) })
}

pub fn cell_from_json(f: Field, v: &Value, loc: &str) -> Result<Cell> {
    let m = obj(v, loc)?;
    Ok(Cell {
        name: string(field_of(m, "name", loc)?, &format!("{loc}.name"))?,
        arity: uint(field_of(m, "arity", loc)?, &format!("{loc}.arity"))?,
        degree: int(field_of(m, "degree", loc)?, &format!("{loc}.degree"))?,
        boundary: match m.get("boundary") {
            Some(b) => poly_from_json(f, b, &format!("{loc}.boundary"))?,
            None => vec![],
        },
    })
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    json!({ "field": field_to_json(p.field), "generators": p.cells.iter().map(cell_to_json).collect::<Vec<_>>() })
}

pub fn presentation_from_json(v: &Value, default_field: Option<Field>, loc: &str) -> Result<Presentation> {
    let m = obj(v, loc)?;
    let f = match m.get("field") {
        Some(x) => field_from_json(x, &format!("{loc}.field"))?,
        None => default_field.ok_or_else(|| perr(loc, "missing 'field'"))?,
    };
    let cells = arr(field_of(m, "generators", loc)?, &format!("{loc}.generators"))?
        .iter()
        .enumerate()
        .map(|(i, c)| cell_from_json(f, c, &format!("{loc}.generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(f, cells)
}

/// `{"op", "arity", "degree", "matrix": [{"from", "to": [..], "coeff"}]}`.
pub fn cooperation_to_json(op: &str, c: &ChainComplex, d: &Cooperation) -> Value {
    let mut entries = vec![];
    for (b, t) in d.images.iter().enumerate() {
        for (k, x) in t {
            entries.push(json!({
                "from": c.space.label(b),
                "to": k.iter().map(|i| c.space.label(*i)).collect::<Vec<_>>(),
                "coeff": scalar_to_json(x),
            }));
        }
    }
    json!({ "op": op, "arity": d.arity, "degree": d.degree, "matrix": entries })
}

/// Reads a cooperation; arity and degree come from the entry or, failing
/// that, from `expected`.
pub fn cooperation_from_json(c: &ChainComplex, v: &Value, expected: Option<(usize, i64)>, loc: &str) -> Result<(String, Cooperation)> {
    let m = obj(v, loc)?;
    let name = string(field_of(m, "op", loc)?, &format!("{loc}.op"))?;
    let arity = match (m.get("arity"), expected) {
        (Some(a), _) => uint(a, &format!("{loc}.arity"))?,
        (None, Some((a, _))) => a,
        (None, None) => return Err(perr(loc, "missing 'arity'")),
    };
    let degree = match (m.get("degree"), expected) {
        (Some(a), _) => int(a, &format!("{loc}.degree"))?,
        (None, Some((_, d))) => d,
        (None, None) => return Err(perr(loc, "missing 'degree'")),
    };
    if let Some((a, d)) = expected {
        if (a, d) != (arity, degree) {
            return Err(perr(loc, format!("'{name}' has arity {a} and degree {d}")));
        }
    }
    let mut d = Cooperation::zero(c, arity, degree);
    for (k, e) in arr(field_of(m, "matrix", loc)?, &format!("{loc}.matrix"))?.iter().enumerate() {
        let l = format!("{loc}.matrix[{k}]");
        let em = obj(e, &l)?;
        let from = string(field_of(em, "from", &l)?, &format!("{l}.from"))?;
        let b = c.space.find_label(&from).ok_or_else(|| perr(&l, format!("unknown basis element '{from}'")))?;
        let key = arr(field_of(em, "to", &l)?, &format!("{l}.to"))?
            .iter()
            .map(|x| {
                let s = string(x, &format!("{l}.to"))?;
                c.space.find_label(&s).ok_or_else(|| perr(&l, format!("unknown basis element '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        multilinear::add_term(&mut d.images[b], key, &coeff_of(c.field, em, &l)?);
    }
    d.check_shape(c).map_err(|e| perr(loc, e.to_string()))?;
    Ok((name, d))
}

/// A carrier and named cooperations.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalgebraData {
    pub carrier: ChainComplex,
    pub cooperations: Vec<(String, Cooperation)>,
}

impl CoalgebraData {
    pub fn get(&self, name: &str) -> Option<&Cooperation> {
        self.cooperations.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }
}

pub fn coalgebra_to_json(c: &CoalgebraData) -> Value {
    json!({
        "carrier": complex_to_json(&c.carrier),
        "cooperations": c.cooperations.iter().map(|(n, d)| cooperation_to_json(n, &c.carrier, d)).collect::<Vec<_>>(),
    })
}

/// `expected` gives arity and degree for known operation labels.
pub fn coalgebra_from_json(
    v: &Value,
    default_field: Option<Field>,
    expected: &HashMap<String, (usize, i64)>,
    loc: &str,
) -> Result<CoalgebraData> {
    let m = obj(v, loc)?;
    let carrier = complex_from_json(field_of(m, "carrier", loc)?, default_field, &format!("{loc}.carrier"))?;
    let mut cooperations = vec![];
    for (i, x) in arr(field_of(m, "cooperations", loc)?, &format!("{loc}.cooperations"))?.iter().enumerate() {
        let l = format!("{loc}.cooperations[{i}]");
        let name = obj(x, &l)?.get("op").and_then(|s| s.as_str()).unwrap_or_default().to_string();
        let (n, d) = cooperation_from_json(&carrier, x, expected.get(&name).copied(), &l)?;
        if cooperations.iter().any(|(o, _): &(String, Cooperation)| *o == n) {
            return Err(perr(&l, format!("'{n}' given twice")));
        }
        cooperations.push((n, d));
    }
    Ok(CoalgebraData { carrier, cooperations })
}

pub fn simplicial_to_json(x: &SimplicialSet) -> Value {
    let mut m = Map::new();
    for (n, level) in x.simplices.iter().enumerate() {
        let items: Vec<Value> = level
            .iter()
            .map(|s| {
                let faces: Vec<Value> = s
                    .faces
                    .iter()
                    .map(|f| {
                        let id = &x.simplices[f.base.0][f.base.1].id;
                        if f.is_degenerate() {
                            json!({ "base": id, "degens": f.degens })
                        } else {
                            json!(id)
                        }
                    })
                    .collect();
                json!({ "id": s.id, "faces": faces })
            })
            .collect();
        m.insert(n.to_string(), Value::Array(items));
    }
    json!({ "simplices": m })
}

pub fn simplicial_from_json(v: &Value, loc: &str) -> Result<SimplicialSet> {
    let m = obj(v, loc)?;
    let sm = obj(field_of(m, "simplices", loc)?, &format!("{loc}.simplices"))?;
    let mut levels: BTreeMap<usize, &Vec<Value>> = BTreeMap::new();
    for (k, l) in sm {
        let n: usize = k.parse().map_err(|_| perr(loc, format!("dimension key '{k}' is not a nonnegative integer")))?;
        levels.insert(n, arr(l, &format!("{loc}.simplices.{k}"))?);
    }
    let top = levels.keys().next_back().map_or(0, |t| t + 1);
    let mut ids: HashMap<String, (usize, usize)> = HashMap::new();
    for (n, l) in &levels {
        for (i, s) in l.iter().enumerate() {
            let loc2 = format!("{loc}.simplices.{n}[{i}]");
            let id = string(field_of(obj(s, &loc2)?, "id", &loc2)?, &format!("{loc2}.id"))?;
            if ids.insert(id.clone(), (*n, i)).is_some() {
                return Err(perr(&loc2, format!("duplicate simplex id '{id}'")));
            }
        }
    }
    let mut simplices: Vec<Vec<Simplex>> = vec![vec![]; top];
    for (n, l) in &levels {
        for (i, s) in l.iter().enumerate() {
            let loc2 = format!("{loc}.simplices.{n}[{i}]");
            let sm = obj(s, &loc2)?;
            let id = string(field_of(sm, "id", &loc2)?, &loc2)?;
            let faces = match sm.get("faces") {
                None => vec![],
                Some(f) => arr(f, &format!("{loc2}.faces"))?
                    .iter()
                    .enumerate()
                    .map(|(j, f)| face_from_json(f, &ids, &format!("{loc2}.faces[{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            };
            simplices[*n].push(Simplex { id, faces });
        }
    }
    SimplicialSet::new(simplices)
}

fn face_from_json(v: &Value, ids: &HashMap<String, (usize, usize)>, loc: &str) -> Result<NormalForm> {
    let lookup = |s: &str| ids.get(s).copied().ok_or_else(|| perr(loc, format!("unknown simplex '{s}'")));
    match v {
        Value::String(s) => Ok(NormalForm { base: lookup(s)?, degens: vec![] }),
        Value::Object(m) => {
            let base = lookup(&string(field_of(m, "base", loc)?, &format!("{loc}.base"))?)?;
            let degens = match m.get("degens") {
                Some(d) => {
                    arr(d, &format!("{loc}.degens"))?.iter().map(|x| uint(x, &format!("{loc}.degens"))).collect::<Result<Vec<_>>>()?
                }
                None => vec![],
            };
            // any word of degeneracies is accepted and normalized
            Ok(NormalForm { base, degens: crate::simplicial::normalize_degeneracies(&degens) })
        }
        _ => Err(perr(loc, "expected a simplex id or {\"base\", \"degens\"}")),
    }
}

/// Parses JSON text with the error located by line and column.
pub fn parse_text(text: &str, name: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| perr(&format!("{name}:{}:{}", e.line(), e.column()), e.to_string()))
}

pub fn tensor_to_json(c: &ChainComplex, t: &Tensor) -> Value {
    Value::Array(
        t.iter()
            .map(|(k, x)| json!({ "coeff": scalar_to_json(x), "term": k.iter().map(|i| c.space.label(*i)).collect::<Vec<_>>() }))
            .collect(),
    )
}

pub fn vector_to_json(space: &GradedSpace, v: &Vector) -> Value {
    Value::Array(v.iter().map(|(i, x)| json!({ "coeff": scalar_to_json(x), "basis": space.label(*i) })).collect())
}

/// Reads `[{"basis", "coeff"}]` or a plain list of labels.
pub fn vector_from_json(f: Field, space: &GradedSpace, v: &Value, loc: &str) -> Result<Vector> {
    let mut out = Vector::new();
    for (k, e) in arr(v, loc)?.iter().enumerate() {
        let l = format!("{loc}[{k}]");
        let (label, c) = match e {
            Value::String(s) => (s.clone(), f.one()),
            _ => {
                let m = obj(e, &l)?;
                (string(field_of(m, "basis", &l)?, &format!("{l}.basis"))?, coeff_of(f, m, &l)?)
            }
        };
        let i = space.find_label(&label).ok_or_else(|| perr(&l, format!("unknown basis element '{label}'")))?;
        linalg::add_entry(&mut out, i, &c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial;
    use crate::symseq;
    use crate::tree;

    #[test]
    fn complex_round_trip() {
        for f in [Field::f2(), Field::Rational, Field::prime(3).unwrap()] {
            let c = crate::complex::tensor(&ChainComplex::disk(f, 1), &ChainComplex::sphere(f, -2));
            let v = complex_to_json(&c);
            let c2 = complex_from_json(&v, None, "$").unwrap();
            assert_eq!(c2, c);
            assert_eq!(complex_to_json(&c2), v);
        }
    }

    #[test]
    fn complex_rejects_nonzero_square() {
        let v = json!({
            "field": "Q",
            "basis": {"0": ["z"], "1": ["y"], "2": ["x"]},
            "d": [{"from": "x", "to": "y", "deg": 2, "coeff": "1"}, {"from": "y", "to": "z", "deg": 1, "coeff": "1"}]
        });
        assert!(matches!(complex_from_json(&v, None, "$"), Err(Error::NotAComplex(_))));
        let bad = json!({"field": {"p": 4}, "basis": {}});
        assert!(matches!(complex_from_json(&bad, None, "$"), Err(Error::Parse { .. })));
    }

    #[test]
    fn symseq_round_trip() {
        let s = symseq::disk_sequence(Field::Rational, 1, 3);
        let v = symseq_to_json(&s);
        let s2 = symseq_from_json(&v, None, "$").unwrap();
        assert_eq!(symseq_to_json(&s2), v);
        assert_eq!(s2, s);
    }

    #[test]
    fn presentation_round_trip() {
        let p = tree::ainfty_presentation(Field::Rational, 4);
        let v = presentation_to_json(&p);
        let p2 = presentation_from_json(&v, None, "$").unwrap();
        assert_eq!(p2, p);
        assert_eq!(presentation_to_json(&p2), v);
    }

    #[test]
    fn simplicial_round_trip_with_degenerate_faces() {
        for x in [simplicial::projective_plane(), simplicial::circle(), simplicial::SimplicialSet::empty()] {
            let v = simplicial_to_json(&x);
            let x2 = simplicial_from_json(&v, "$").unwrap();
            assert_eq!(x2, x);
            assert_eq!(simplicial_to_json(&x2), v);
        }
        // a 2-simplex with a collapsed edge: the sphere S² = Δ²/∂Δ²
        let v = json!({"simplices": {
            "0": [{"id": "v"}],
            "2": [{"id": "t", "faces": [{"base": "v", "degens": [0]}, {"base": "v", "degens": [0]}, {"base": "v", "degens": [0]}]}]
        }});
        let x = simplicial_from_json(&v, "$").unwrap();
        assert_eq!(simplicial_to_json(&simplicial_from_json(&simplicial_to_json(&x), "$").unwrap()), simplicial_to_json(&x));
        let h = crate::complex::homology(&simplicial::normalized_chains(&x, Field::Rational)).betti();
        assert_eq!(h.values().copied().collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn coalgebra_round_trip() {
        let f = Field::f2();
        let c = ChainComplex::disk(f, 1);
        let mut d = Cooperation::zero(&c, 2, 0);
        multilinear::add_term(&mut d.images[1], vec![1, 0], &f.one());
        let data = CoalgebraData { carrier: c, cooperations: vec![("m".into(), d)] };
        let v = coalgebra_to_json(&data);
        let back = coalgebra_from_json(&v, None, &HashMap::new(), "$").unwrap();
        assert_eq!(back, data);
        assert_eq!(coalgebra_to_json(&back), v);
    }

    #[test]
    fn parse_errors_carry_locations() {
        let v = json!({"field": "Q", "basis": {"0": ["x", 3]}});
        match complex_from_json(&v, None, "$") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "$.basis.0[1]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_text("{\"a\": ", "in.json"), Err(Error::Parse { .. })));
    }
}
