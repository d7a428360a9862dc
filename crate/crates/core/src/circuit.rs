//! Circuit files: named constrained pairs wired together by an expression tree.
//!
//! ```text
//! {
//!   "kind": "circuit",
//!   "encoding": "signalling",
//!   "constraints": { "s1": {"src": ["A"], "dst": ["B1","B2"], "pairs": [[0,1]]} },
//!   "pairs": {
//!     "f": { "constraint": "s1", "morphism": {"kind": "channel", ...} },
//!     "id": { "identity": [["B1",2],["B2",2]] }
//!   },
//!   "circuit": { "seq": ["f", "id"] }
//! }
//! ```
//!
//! Encodings: `sectorial` (direct sum), `sectorial-kron` (Kronecker), `signalling`,
//! `funcrel`, `monoid` (with top-level `monoid` and `labeling`) and `csp`.
//!
//! Constraint expressions are a declared name, an inline constraint,
//! `{"meet": [..]}`, `{"converse": e}` or `{"compose": [..]}` with the first
//! relation applied first. Circuit nodes are a pair name, `{"seq": [..]}`
//! (first stage first), `{"par": [..]}`, `{"dagger": e}` and
//! `{"relax": e, "to": constraint}`.
//!
//! Boundaries of the whole tree are checked before anything is evaluated.
//! Leaves are verified when reached, and every derived pair is re-checked.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{Map, Value};

use crate::constrained::{
    ConstrainedCategory, Csp, Encoding, FinSet, FuncRel, MonoidEncoding, MonoidObject, Pair,
    SectorTensor, Sectorial, Signalling,
};
use crate::cspcat::{CspProblem, FinFunction};
use crate::error::{Error, Result};
use crate::funcrel::PartitionedFunction;
use crate::io::{self, Json};
use crate::monoidrel::{Element, FiniteMonoid};
use crate::relcat::FiniteRelation;
use crate::sectorial::BlockMatrix;
use crate::signalling::StochChannel;

pub const KIND: &str = "circuit";

/// What a circuit file needs from an encoding beyond [`Encoding`].
pub trait CircuitEncoding: Encoding {
    fn parse_object(&self, v: &Value) -> Result<Self::Object>;
    fn parse_constraint(&self, v: &Value) -> Result<Self::Constraint>;
    fn parse_morphism(&self, v: &Value) -> Result<Self::Morphism>;
    fn constraint_json(&self, c: &Self::Constraint) -> String;
    fn morphism_json(&self, f: &Self::Morphism) -> String;

    fn meet(&self, _a: &Self::Constraint, _b: &Self::Constraint) -> Result<Self::Constraint> {
        Err(Error::Unsupported("meet"))
    }

    fn converse(&self, _c: &Self::Constraint) -> Result<Self::Constraint> {
        Err(Error::Unsupported("converse"))
    }
}

macro_rules! relation_constraints {
    () => {
        fn parse_constraint(&self, v: &Value) -> Result<FiniteRelation> {
            FiniteRelation::from_value(v)
        }

        fn constraint_json(&self, c: &FiniteRelation) -> String {
            c.to_json()
        }

        fn meet(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<FiniteRelation> {
            a.meet(b)
        }

        fn converse(&self, c: &FiniteRelation) -> Result<FiniteRelation> {
            Ok(c.converse())
        }
    };
}

impl CircuitEncoding for Sectorial {
    relation_constraints!();

    fn parse_object(&self, v: &Value) -> Result<Self::Object> {
        io::sector_space_from_value(v)
    }

    fn parse_morphism(&self, v: &Value) -> Result<BlockMatrix> {
        BlockMatrix::from_value(v)
    }

    fn morphism_json(&self, f: &BlockMatrix) -> String {
        f.to_json()
    }
}

impl CircuitEncoding for Signalling {
    relation_constraints!();

    fn parse_object(&self, v: &Value) -> Result<Self::Object> {
        io::factor_space_from_value(v)
    }

    fn parse_morphism(&self, v: &Value) -> Result<StochChannel> {
        StochChannel::from_value(v)
    }

    fn morphism_json(&self, f: &StochChannel) -> String {
        f.to_json()
    }
}

impl CircuitEncoding for FuncRel {
    relation_constraints!();

    fn parse_object(&self, v: &Value) -> Result<Self::Object> {
        io::partitioned_set_from_value(v)
    }

    fn parse_morphism(&self, v: &Value) -> Result<PartitionedFunction> {
        PartitionedFunction::from_value(v)
    }

    fn morphism_json(&self, f: &PartitionedFunction) -> String {
        f.to_json()
    }
}

impl CircuitEncoding for MonoidEncoding {
    relation_constraints!();

    /// There is one object; whatever is written, it is the labelled set.
    fn parse_object(&self, _v: &Value) -> Result<MonoidObject> {
        Ok(MonoidObject(self.labeling.set().clone()))
    }

    fn parse_morphism(&self, v: &Value) -> Result<Element> {
        let m = v
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("monoid element must be an integer, found {v}")))?;
        let m = m as usize;
        if m >= self.monoid.size() {
            return Err(Error::IndexOutOfBounds {
                index: m,
                size: self.monoid.size(),
            });
        }
        Ok(m)
    }

    fn morphism_json(&self, m: &Element) -> String {
        m.to_string()
    }
}

impl CircuitEncoding for Csp {
    fn parse_object(&self, v: &Value) -> Result<FinSet> {
        v.as_u64()
            .map(|n| FinSet(n as usize))
            .ok_or_else(|| Error::Parse(format!("csp object must be a size, found {v}")))
    }

    fn parse_constraint(&self, v: &Value) -> Result<CspProblem> {
        CspProblem::from_value(v)
    }

    fn parse_morphism(&self, v: &Value) -> Result<FinFunction> {
        FinFunction::from_value(v)
    }

    fn constraint_json(&self, c: &CspProblem) -> String {
        c.to_json()
    }

    fn morphism_json(&self, f: &FinFunction) -> String {
        f.to_json()
    }
}

/// The outcome of a successful circuit check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitReport {
    pub encoding: String,
    pub dom: String,
    pub cod: String,
    /// Serialized composite constraint.
    pub constraint: String,
    /// Serialized composite morphism.
    pub morphism: String,
    /// Pair leaves verified.
    pub leaves: usize,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(String),
    Seq(Vec<Node>),
    Par(Vec<Node>),
    Dagger(Box<Node>),
    Relax(Box<Node>, Value),
}

fn parse_node(v: &Value, path: &str) -> Result<Node> {
    let bad = |msg: String| Error::Parse(msg).at(path);
    match v {
        Value::String(name) => Ok(Node::Leaf(name.clone())),
        Value::Object(obj) => {
            let list = |key: &str| -> Result<Vec<Node>> {
                let items = obj[key]
                    .as_array()
                    .ok_or_else(|| bad(format!("`{key}` takes a list")))?;
                if items.is_empty() {
                    return Err(bad(format!("`{key}` needs at least one stage")));
                }
                items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| parse_node(x, &format!("{path}.{key}[{i}]")))
                    .collect()
            };
            let keys: BTreeSet<&str> = obj.keys().map(String::as_str).collect();
            match keys.iter().copied().collect::<Vec<_>>().as_slice() {
                ["seq"] => Ok(Node::Seq(list("seq")?)),
                ["par"] => Ok(Node::Par(list("par")?)),
                ["dagger"] => Ok(Node::Dagger(Box::new(parse_node(
                    &obj["dagger"],
                    &format!("{path}.dagger"),
                )?))),
                ["relax", "to"] => Ok(Node::Relax(
                    Box::new(parse_node(&obj["relax"], &format!("{path}.relax"))?),
                    obj["to"].clone(),
                )),
                _ => Err(bad(format!("unrecognised node with keys {keys:?}"))),
            }
        }
        other => Err(bad(format!("unrecognised node {other}"))),
    }
}

struct Circuit<'a, E: CircuitEncoding> {
    cat: ConstrainedCategory<E>,
    constraint_decls: &'a Map<String, Value>,
    constraints: BTreeMap<String, E::Constraint>,
    pairs: BTreeMap<String, (E::Constraint, E::Morphism)>,
    verified: BTreeMap<String, Pair<E>>,
}

impl<'a, E: CircuitEncoding> Circuit<'a, E> {
    fn constraint(
        &mut self,
        v: &Value,
        path: &str,
        stack: &mut Vec<String>,
    ) -> Result<E::Constraint> {
        let enc = self.cat.encoding();
        let list = |v: &Value, key: &str| -> Result<Vec<Value>> {
            match v.as_array() {
                Some(items) if !items.is_empty() => Ok(items.clone()),
                _ => Err(Error::Parse(format!("`{key}` takes a non-empty list")).at(path)),
            }
        };
        match v {
            Value::String(name) => {
                if let Some(c) = self.constraints.get(name) {
                    return Ok(c.clone());
                }
                if stack.contains(name) {
                    return Err(Error::Parse(format!(
                        "constraint `{name}` is defined in terms of itself"
                    ))
                    .at(path));
                }
                let decl = self
                    .constraint_decls
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("unknown constraint `{name}`")).at(path))?;
                stack.push(name.clone());
                let c = self.constraint(decl, &format!("constraints.{name}"), stack)?;
                stack.pop();
                self.constraints.insert(name.clone(), c.clone());
                Ok(c)
            }
            Value::Object(obj) if obj.len() == 1 && obj.contains_key("meet") => {
                let items = list(&obj["meet"], "meet")?;
                let mut acc = self.constraint(&items[0], &format!("{path}.meet[0]"), stack)?;
                for (i, x) in items.iter().enumerate().skip(1) {
                    let next = self.constraint(x, &format!("{path}.meet[{i}]"), stack)?;
                    acc = self
                        .cat
                        .encoding()
                        .meet(&acc, &next)
                        .map_err(|e| e.at(path))?;
                }
                Ok(acc)
            }
            Value::Object(obj) if obj.len() == 1 && obj.contains_key("converse") => {
                let inner =
                    self.constraint(&obj["converse"], &format!("{path}.converse"), stack)?;
                self.cat.encoding().converse(&inner).map_err(|e| e.at(path))
            }
            Value::Object(obj) if obj.len() == 1 && obj.contains_key("compose") => {
                let items = list(&obj["compose"], "compose")?;
                let mut acc = self.constraint(&items[0], &format!("{path}.compose[0]"), stack)?;
                for (i, x) in items.iter().enumerate().skip(1) {
                    let next = self.constraint(x, &format!("{path}.compose[{i}]"), stack)?;
                    acc = self
                        .cat
                        .encoding()
                        .compose_constraint(&next, &acc)
                        .map_err(|e| e.at(path))?;
                }
                Ok(acc)
            }
            inline => enc.parse_constraint(inline).map_err(|e| e.at(path)),
        }
    }

    fn boundary(&self, node: &Node, path: &str) -> Result<(E::Object, E::Object)> {
        let enc = self.cat.encoding();
        match node {
            Node::Leaf(name) => {
                let (_, f) = self
                    .pairs
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("unknown pair `{name}`")).at(path))?;
                Ok(enc.boundary(f))
            }
            Node::Seq(items) => {
                let (dom, mut cod) = self.boundary(&items[0], &format!("{path}.seq[0]"))?;
                for (i, item) in items.iter().enumerate().skip(1) {
                    let sub = format!("{path}.seq[{i}]");
                    let (d, c) = self.boundary(item, &sub)?;
                    if d != cod {
                        return Err(Error::BoundaryMismatch(format!(
                            "stage expects input {d} but receives {cod}"
                        ))
                        .at(sub));
                    }
                    cod = c;
                }
                Ok((dom, cod))
            }
            Node::Par(items) => {
                let (mut dom, mut cod) = self.boundary(&items[0], &format!("{path}.par[0]"))?;
                for (i, item) in items.iter().enumerate().skip(1) {
                    let sub = format!("{path}.par[{i}]");
                    let (d, c) = self.boundary(item, &sub)?;
                    dom = enc.tensor_object(&dom, &d).map_err(|e| e.at(&sub))?;
                    cod = enc.tensor_object(&cod, &c).map_err(|e| e.at(&sub))?;
                }
                Ok((dom, cod))
            }
            Node::Dagger(inner) => {
                if !enc.structures().dagger {
                    return Err(Error::Unsupported("dagger").at(path));
                }
                let (d, c) = self.boundary(inner, &format!("{path}.dagger"))?;
                Ok((c, d))
            }
            Node::Relax(inner, _) => self.boundary(inner, &format!("{path}.relax")),
        }
    }

    fn eval(&mut self, node: &Node, path: &str) -> Result<Pair<E>> {
        match node {
            Node::Leaf(name) => {
                if let Some(p) = self.verified.get(name) {
                    return Ok(p.clone());
                }
                let (c, f) = self.pairs[name].clone();
                let p = self
                    .cat
                    .pair(c, f)
                    .map_err(|e| e.at(format!("{path} (pair `{name}`)")))?;
                self.verified.insert(name.clone(), p.clone());
                Ok(p)
            }
            Node::Seq(items) => {
                let mut acc = self.eval(&items[0], &format!("{path}.seq[0]"))?;
                for (i, item) in items.iter().enumerate().skip(1) {
                    let sub = format!("{path}.seq[{i}]");
                    let next = self.eval(item, &sub)?;
                    acc = self.cat.compose(&next, &acc).map_err(|e| e.at(&sub))?;
                }
                Ok(acc)
            }
            Node::Par(items) => {
                let mut acc = self.eval(&items[0], &format!("{path}.par[0]"))?;
                for (i, item) in items.iter().enumerate().skip(1) {
                    let sub = format!("{path}.par[{i}]");
                    let next = self.eval(item, &sub)?;
                    acc = self.cat.tensor(&acc, &next).map_err(|e| e.at(&sub))?;
                }
                Ok(acc)
            }
            Node::Dagger(inner) => {
                let p = self.eval(inner, &format!("{path}.dagger"))?;
                self.cat.dagger(&p).map_err(|e| e.at(path))
            }
            Node::Relax(inner, to) => {
                let p = self.eval(inner, &format!("{path}.relax"))?;
                let weaker = self.constraint(to, &format!("{path}.to"), &mut Vec::new())?;
                self.cat.relax(&p, weaker).map_err(|e| e.at(path))
            }
        }
    }
}

fn object_field<'a>(doc: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>> {
    match doc.get(key) {
        None => Err(Error::Parse(format!("circuit needs `{key}`"))),
        Some(Value::Object(m)) => Ok(m),
        Some(_) => Err(Error::Parse(format!("`{key}` must be an object"))),
    }
}

static EMPTY: std::sync::OnceLock<Map<String, Value>> = std::sync::OnceLock::new();

fn run<E: CircuitEncoding>(encoding: E, doc: &Map<String, Value>) -> Result<CircuitReport> {
    let constraint_decls = match doc.get("constraints") {
        None => EMPTY.get_or_init(Map::new),
        Some(_) => object_field(doc, "constraints")?,
    };
    let mut circuit = Circuit {
        cat: ConstrainedCategory::new(encoding).with_recheck(true),
        constraint_decls,
        constraints: BTreeMap::new(),
        pairs: BTreeMap::new(),
        verified: BTreeMap::new(),
    };
    for name in constraint_decls.keys() {
        circuit.constraint(&Value::String(name.clone()), "constraints", &mut Vec::new())?;
    }
    for (name, decl) in object_field(doc, "pairs")? {
        let path = format!("pairs.{name}");
        let decl = decl
            .as_object()
            .ok_or_else(|| Error::Parse("a pair must be an object".into()).at(&path))?;
        let keys: BTreeSet<&str> = decl.keys().map(String::as_str).collect();
        let pair = if keys == BTreeSet::from(["identity"]) {
            let enc = circuit.cat.encoding();
            let obj = enc
                .parse_object(&decl["identity"])
                .map_err(|e| e.at(&path))?;
            enc.identity(&obj).map_err(|e| e.at(&path))?
        } else if keys == BTreeSet::from(["constraint", "morphism"]) {
            let c = circuit.constraint(
                &decl["constraint"],
                &format!("{path}.constraint"),
                &mut Vec::new(),
            )?;
            let f = circuit
                .cat
                .encoding()
                .parse_morphism(&decl["morphism"])
                .map_err(|e| e.at(format!("{path}.morphism")))?;
            (c, f)
        } else {
            return Err(Error::Parse(
                "a pair has `constraint` and `morphism`, or only `identity`".into(),
            )
            .at(&path));
        };
        circuit.pairs.insert(name.clone(), pair);
    }
    let tree = doc
        .get("circuit")
        .ok_or_else(|| Error::Parse("circuit needs `circuit`".into()))?;
    let root = parse_node(tree, "circuit")?;
    let (dom, cod) = circuit.boundary(&root, "circuit")?;
    let p = circuit.eval(&root, "circuit")?;
    let enc = circuit.cat.encoding();
    Ok(CircuitReport {
        encoding: enc.name().to_string(),
        dom: dom.to_string(),
        cod: cod.to_string(),
        constraint: enc.constraint_json(p.constraint()),
        morphism: enc.morphism_json(p.morphism()),
        leaves: circuit.verified.len(),
    })
}

/// Parses, type-checks and evaluates a circuit document.
pub fn check_circuit(v: &Value) -> Result<CircuitReport> {
    let doc = v
        .as_object()
        .ok_or_else(|| Error::Parse("a circuit is a JSON object".into()))?;
    if io::kind_of(v)? != KIND {
        return Err(Error::Parse(format!("expected kind \"{KIND}\"")));
    }
    let known = [
        "kind",
        "encoding",
        "constraints",
        "pairs",
        "circuit",
        "monoid",
        "labeling",
    ];
    if let Some(k) = doc.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::Parse(format!("unknown circuit field `{k}`")));
    }
    let encoding = doc
        .get("encoding")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("circuit needs a string `encoding`".into()))?;
    match encoding {
        "sectorial" => run(
            Sectorial {
                tensor: SectorTensor::DirectSum,
            },
            doc,
        ),
        "sectorial-kron" => run(
            Sectorial {
                tensor: SectorTensor::Kronecker,
            },
            doc,
        ),
        "signalling" => run(Signalling, doc),
        "funcrel" => run(FuncRel, doc),
        "csp" => run(Csp, doc),
        "monoid" => {
            let monoid = FiniteMonoid::from_value(
                doc.get("monoid")
                    .ok_or_else(|| Error::Parse("monoid circuits need `monoid`".into()))?,
            )?;
            let labeling = io::labeling_from_value(
                doc.get("labeling")
                    .ok_or_else(|| Error::Parse("monoid circuits need `labeling`".into()))?,
                &monoid,
            )?;
            run(MonoidEncoding { monoid, labeling }, doc)
        }
        other => Err(Error::Parse(format!("unknown encoding \"{other}\""))),
    }
}

pub fn check_circuit_json(text: &str) -> Result<CircuitReport> {
    check_circuit(&io::parse_value(text)?)
}
