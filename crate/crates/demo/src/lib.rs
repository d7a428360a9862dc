//! Browser bindings. Every export takes and returns JSON text; failures come
//! back as `{"error": "..."}` rather than exceptions.

use relcon::io::Json;
use relcon::relcat::FiniteRelation;
use relcon::sectorial::BlockMatrix;
use relcon::signalling::{parity_constraints, parity_counterexample};
use relcon::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn relation_value(r: &FiniteRelation) -> Value {
    json!({
        "json": r.to_json(),
        "text": r.to_string(),
    })
}

/// `op` is `compose` (`first` applied first) or `meet`.
#[wasm_bindgen]
pub fn relation_op(op: &str, first: &str, second: &str) -> String {
    respond((|| {
        let a = FiniteRelation::from_json(first)?;
        let b = FiniteRelation::from_json(second)?;
        let r = match op {
            "compose" => b.compose(&a)?,
            "meet" => a.meet(&b)?,
            other => {
                return Err(relcon::Error::Invalid(format!(
                    "unknown operation `{other}`"
                )))
            }
        };
        Ok(relation_value(&r))
    })())
}

/// Support of a block matrix and, if a relation is given, whether the
/// matrix satisfies it.
#[wasm_bindgen]
pub fn sectorial_check(matrix: &str, relation: &str) -> String {
    respond((|| {
        let f = BlockMatrix::from_json(matrix)?;
        let support = f.support_relation();
        let mut out = json!({ "support": relation_value(&support) });
        if !relation.trim().is_empty() {
            let tau = FiniteRelation::from_json(relation)?;
            let v = f.sectorial_violation(&tau)?;
            out["satisfied"] = json!(v.is_none());
            out["witness"] = json!(v.map(|v| v.to_string()));
        }
        Ok(out)
    })())
}

/// The parity channel `A -> B1 B2` against the relation allowing the arrows
/// chosen by `to_b1` and `to_b2`.
#[wasm_bindgen]
pub fn parity_explorer(to_b1: bool, to_b2: bool) -> String {
    respond((|| {
        let f = parity_counterexample();
        let (s1, s2) = parity_constraints();
        let pairs = [(to_b1, 0), (to_b2, 1)]
            .into_iter()
            .filter(|(on, _)| *on)
            .map(|(_, j)| (0, j));
        let tau = FiniteRelation::new(s1.src().clone(), s1.dst().clone(), pairs)?;
        Ok(json!({
            "relation": relation_value(&tau),
            "channel": f.to_json(),
            "signalling": f.check_signalling(&tau)?,
            "atomic": f.check_signalling_atomic(&tau)?,
            "cosignalling": f.check_cosignalling(&tau)?,
            "witness": f.signalling_violation(&tau)?.map(|v| v.to_string()),
            "meet_of_singles": tau == s1.meet(&s2)?,
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn compose_and_meet() {
        let tau = r#"{"src": ["a1","a2"], "dst": ["b1","b2"], "pairs": [[0,0],[0,1],[1,1]]}"#;
        let sigma = r#"{"src": ["b1","b2"], "dst": ["c1","c2","c3"], "pairs": [[0,0],[1,2]]}"#;
        let v = parse(&relation_op("compose", tau, sigma));
        assert_eq!(
            v["json"],
            r#"{"src": ["a1","a2"], "dst": ["c1","c2","c3"], "pairs": [[0,0],[0,2],[1,2]]}"#
        );
        assert_eq!(parse(&relation_op("meet", tau, tau))["json"], tau);
        assert!(parse(&relation_op("meet", tau, sigma))["error"].is_string());
        assert!(parse(&relation_op("join", tau, tau))["error"].is_string());
    }

    #[test]
    fn sectorial_support_and_witness() {
        let m = r#"{"kind": "matrix", "dom": [["a",1],["b",1]], "cod": [["c",1],["d",1]], "entries": ["1","0","5/2","1"]}"#;
        let only_support = parse(&sectorial_check(m, ""));
        assert_eq!(
            only_support["support"]["text"],
            "[a, b] -> [c, d] {a->c, a->d, b->d}"
        );
        assert!(only_support.get("satisfied").is_none());
        let diag = r#"{"src": ["a","b"], "dst": ["c","d"], "pairs": [[0,0],[1,1]]}"#;
        let v = parse(&sectorial_check(m, diag));
        assert_eq!(v["satisfied"], false);
        assert!(v["witness"].as_str().unwrap().contains('a'));
    }

    #[test]
    fn parity_reports_the_gap() {
        let both = parse(&parity_explorer(false, false));
        assert_eq!(both["meet_of_singles"], true);
        assert_eq!(both["signalling"], false);
        assert_eq!(both["atomic"], true);
        assert_eq!(both["witness"], "joint output [B1, B2] depends on input A");
        let one = parse(&parity_explorer(true, false));
        assert_eq!(one["signalling"], true);
    }
}
