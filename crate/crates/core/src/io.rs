//! The JSON container format.
//!
//! Every document is an object with a `kind` tag. Relations may omit the tag
//! and are emitted without it:
//!
//! ```text
//! {"src": ["a1","a2"], "dst": ["b1"], "pairs": [[0,0],[1,0]]}
//! {"kind": "matrix", "dom": [["a",1]], "cod": [["b",2]], "entries": ["1/1","0/1"]}
//! {"kind": "channel", "dom": [["A",2]], "cod": [["B",2]], "entries": ["1/1","0/1","0/1","1/1"]}
//! {"kind": "function", "dom": [["x",2]], "cod": [["y",1]], "map": [0,0]}
//! {"kind": "monoid", "size": 2, "table": [0,1,1,1], "identity": 0}
//! {"kind": "labeling", "set": ["s1","s2"], "assignment": [1,0]}
//! {"kind": "csp", "dom": 2, "cod": 2, "constraints": [{"scope":[0,1],"allowed":[[0,1]]}]}
//! {"kind": "map", "cod": 2, "map": [1,0]}
//! ```
//!
//! Matrix and channel entries are dense and row-major, one row per output
//! basis vector. Rationals are always written `"p/q"`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cspcat::{CspConstraint, CspProblem, FinFunction, Tuple};
use crate::error::{Error, Result};
use crate::funcrel::{PartitionedFinSet, PartitionedFunction};
use crate::monoidrel::{FiniteMonoid, MonoidLabeling};
use crate::rational;
use crate::relcat::{FiniteRelation, LabelList};
use crate::sectorial::{BlockMatrix, SectorSpace};
use crate::signalling::{FactorSpace, StochChannel};

/// A type with a JSON document form.
pub trait Json: Sized {
    const KIND: &'static str;

    fn from_value(v: &Value) -> Result<Self>;

    fn to_json(&self) -> String;

    fn from_json(text: &str) -> Result<Self> {
        Self::from_value(&parse_value(text)?)
    }
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// `{"k": v, ...}` with compact values.
fn object(fields: &[(&str, String)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("{}: {}", compact(k), v))
        .collect();
    format!("{{{}}}", body.join(", "))
}

fn kind_field(kind: &str) -> (&'static str, String) {
    ("kind", compact(kind))
}

fn decode<T: DeserializeOwned>(v: &Value, kind: &str) -> Result<T> {
    if let Some(k) = v.get("kind") {
        if k.as_str() != Some(kind) {
            return Err(Error::Parse(format!("expected kind \"{kind}\", found {k}")));
        }
    }
    T::deserialize(v).map_err(|e| Error::Parse(format!("{kind}: {e}")))
}

pub fn kind_of(v: &Value) -> Result<&str> {
    match v.get("kind") {
        None => Ok(FiniteRelation::KIND),
        Some(Value::String(s)) => Ok(s),
        Some(other) => Err(Error::Parse(format!(
            "kind must be a string, found {other}"
        ))),
    }
}

fn rationals(entries: &[String]) -> Result<Vec<rational::Rational>> {
    entries.iter().map(|s| rational::parse(s)).collect()
}

fn format_entries(data: &[rational::Rational]) -> String {
    compact(&data.iter().map(rational::format).collect::<Vec<_>>())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    src: Vec<String>,
    dst: Vec<String>,
    pairs: Vec<(usize, usize)>,
}

impl Json for FiniteRelation {
    const KIND: &'static str = "relation";

    fn from_value(v: &Value) -> Result<Self> {
        let d: RelationDoc = decode(v, Self::KIND)?;
        FiniteRelation::new(LabelList::new(d.src)?, LabelList::new(d.dst)?, d.pairs)
    }

    fn to_json(&self) -> String {
        let pairs: Vec<(usize, usize)> = self.pairs().collect();
        object(&[
            ("src", compact(self.src().labels())),
            ("dst", compact(self.dst().labels())),
            ("pairs", compact(&pairs)),
        ])
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpacesDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    dom: Vec<(String, usize)>,
    cod: Vec<(String, usize)>,
    entries: Vec<String>,
}

impl Json for BlockMatrix {
    const KIND: &'static str = "matrix";

    fn from_value(v: &Value) -> Result<Self> {
        let d: SpacesDoc = decode(v, Self::KIND)?;
        BlockMatrix::from_rows(
            SectorSpace::new(d.dom)?,
            SectorSpace::new(d.cod)?,
            rationals(&d.entries)?,
        )
    }

    fn to_json(&self) -> String {
        object(&[
            kind_field(Self::KIND),
            ("dom", compact(self.dom().sectors())),
            ("cod", compact(self.cod().sectors())),
            ("entries", format_entries(self.entries().data())),
        ])
    }
}

impl Json for StochChannel {
    const KIND: &'static str = "channel";

    fn from_value(v: &Value) -> Result<Self> {
        let d: SpacesDoc = decode(v, Self::KIND)?;
        StochChannel::from_rows(
            FactorSpace::new(d.dom)?,
            FactorSpace::new(d.cod)?,
            rationals(&d.entries)?,
        )
    }

    fn to_json(&self) -> String {
        object(&[
            kind_field(Self::KIND),
            ("dom", compact(self.dom().factors())),
            ("cod", compact(self.cod().factors())),
            ("entries", format_entries(self.matrix().data())),
        ])
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    dom: Vec<(String, usize)>,
    cod: Vec<(String, usize)>,
    map: Vec<usize>,
}

impl Json for PartitionedFunction {
    const KIND: &'static str = "function";

    fn from_value(v: &Value) -> Result<Self> {
        let d: FunctionDoc = decode(v, Self::KIND)?;
        PartitionedFunction::new(
            PartitionedFinSet::new(d.dom)?,
            PartitionedFinSet::new(d.cod)?,
            d.map,
        )
    }

    fn to_json(&self) -> String {
        object(&[
            kind_field(Self::KIND),
            ("dom", compact(self.dom().blocks())),
            ("cod", compact(self.cod().blocks())),
            ("map", compact(self.map())),
        ])
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    size: usize,
    table: Vec<usize>,
    identity: usize,
}

impl Json for FiniteMonoid {
    const KIND: &'static str = "monoid";

    fn from_value(v: &Value) -> Result<Self> {
        let d: MonoidDoc = decode(v, Self::KIND)?;
        FiniteMonoid::new(d.size, d.table, d.identity)
    }

    fn to_json(&self) -> String {
        object(&[
            kind_field(Self::KIND),
            ("size", compact(&self.size())),
            ("table", compact(self.table())),
            ("identity", compact(&self.identity())),
        ])
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelingDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    set: Vec<String>,
    assignment: Vec<usize>,
}

pub const LABELING_KIND: &str = "labeling";

/// Labelings are validated against the monoid they map into.
pub fn labeling_from_value(v: &Value, monoid: &FiniteMonoid) -> Result<MonoidLabeling> {
    let d: LabelingDoc = decode(v, LABELING_KIND)?;
    MonoidLabeling::new(LabelList::new(d.set)?, d.assignment, monoid)
}

pub fn labeling_to_json(lab: &MonoidLabeling) -> String {
    object(&[
        kind_field(LABELING_KIND),
        ("set", compact(lab.set().labels())),
        ("assignment", compact(lab.assignment())),
    ])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    scope: Tuple,
    allowed: Vec<Tuple>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CspDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    dom: usize,
    cod: usize,
    constraints: Vec<ConstraintDoc>,
}

impl Json for CspProblem {
    const KIND: &'static str = "csp";

    fn from_value(v: &Value) -> Result<Self> {
        let d: CspDoc = decode(v, Self::KIND)?;
        let cs = d
            .constraints
            .into_iter()
            .map(|c| CspConstraint::new(c.scope, c.allowed))
            .collect::<Result<Vec<_>>>()?;
        CspProblem::new(d.dom, d.cod, cs)
    }

    fn to_json(&self) -> String {
        let cs: Vec<ConstraintDoc> = self
            .constraints()
            .iter()
            .map(|c| ConstraintDoc {
                scope: c.scope().to_vec(),
                allowed: c.allowed().iter().cloned().collect(),
            })
            .collect();
        object(&[
            kind_field(Self::KIND),
            ("dom", compact(&self.dom())),
            ("cod", compact(&self.cod())),
            ("constraints", compact(&cs)),
        ])
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    #[allow(dead_code)]
    kind: Option<String>,
    cod: usize,
    map: Vec<usize>,
}

impl Json for FinFunction {
    const KIND: &'static str = "map";

    fn from_value(v: &Value) -> Result<Self> {
        let d: MapDoc = decode(v, Self::KIND)?;
        FinFunction::new(d.cod, d.map)
    }

    fn to_json(&self) -> String {
        object(&[
            kind_field(Self::KIND),
            ("cod", compact(&self.cod())),
            ("map", compact(self.map())),
        ])
    }
}

/// Object lists as they appear in files: `[["a",1],["b",2]]`.
pub fn sector_space_from_value(v: &Value) -> Result<SectorSpace> {
    SectorSpace::new(list_of_pairs(v)?)
}

pub fn factor_space_from_value(v: &Value) -> Result<FactorSpace> {
    FactorSpace::new(list_of_pairs(v)?)
}

pub fn partitioned_set_from_value(v: &Value) -> Result<PartitionedFinSet> {
    PartitionedFinSet::new(list_of_pairs(v)?)
}

fn list_of_pairs(v: &Value) -> Result<Vec<(String, usize)>> {
    Vec::<(String, usize)>::deserialize(v).map_err(|e| Error::Parse(format!("object: {e}")))
}

/// Any standalone document other than a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Relation(FiniteRelation),
    Matrix(BlockMatrix),
    Channel(StochChannel),
    Function(PartitionedFunction),
    Monoid(FiniteMonoid),
    Csp(CspProblem),
    Map(FinFunction),
}

impl Document {
    pub fn from_value(v: &Value) -> Result<Self> {
        Ok(match kind_of(v)? {
            FiniteRelation::KIND => Document::Relation(FiniteRelation::from_value(v)?),
            BlockMatrix::KIND => Document::Matrix(BlockMatrix::from_value(v)?),
            StochChannel::KIND => Document::Channel(StochChannel::from_value(v)?),
            PartitionedFunction::KIND => Document::Function(PartitionedFunction::from_value(v)?),
            FiniteMonoid::KIND => Document::Monoid(FiniteMonoid::from_value(v)?),
            CspProblem::KIND => Document::Csp(CspProblem::from_value(v)?),
            FinFunction::KIND => Document::Map(FinFunction::from_value(v)?),
            other => return Err(Error::Parse(format!("unknown kind \"{other}\""))),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(&parse_value(text)?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Relation(_) => FiniteRelation::KIND,
            Document::Matrix(_) => BlockMatrix::KIND,
            Document::Channel(_) => StochChannel::KIND,
            Document::Function(_) => PartitionedFunction::KIND,
            Document::Monoid(_) => FiniteMonoid::KIND,
            Document::Csp(_) => CspProblem::KIND,
            Document::Map(_) => FinFunction::KIND,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Document::Relation(x) => x.to_json(),
            Document::Matrix(x) => x.to_json(),
            Document::Channel(x) => x.to_json(),
            Document::Function(x) => x.to_json(),
            Document::Monoid(x) => x.to_json(),
            Document::Csp(x) => x.to_json(),
            Document::Map(x) => x.to_json(),
        }
    }
}
