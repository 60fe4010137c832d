//! JSON reports. Keys come out sorted and sets in their canonical order, so
//! equal inputs give byte-identical text.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::bundle::SelfCheck;
use crate::classification::Infomorphism;
use crate::{Channel, Classification, ConceptLattice, IntegrationResult, Sequent, SequentTheory};

/// Pretty-printed text with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}

pub fn sequent(s: &Sequent) -> Value {
    json!({ "ant": s.ant, "con": s.con })
}

pub fn sequents<'a>(items: impl IntoIterator<Item = &'a Sequent>) -> Value {
    Value::Array(items.into_iter().map(sequent).collect())
}

pub fn theory(t: &SequentTheory) -> Value {
    json!({ "types": t.types, "axioms": sequents(&t.axioms) })
}

pub fn classification(c: &Classification) -> Value {
    let incidence: Vec<[&str; 2]> = c
        .incidence
        .iter()
        .map(|(i, t)| [i.as_str(), t.as_str()])
        .collect();
    json!({ "instances": c.instances, "types": c.types, "incidence": incidence })
}

pub fn infomorphism(f: &Infomorphism) -> Value {
    json!({
        "source": f.source.name,
        "target": f.target.name,
        "type_map": f.type_map,
        "instance_map": f.instance_map,
    })
}

/// `defects` holds one rendered line per problem found while loading.
pub fn validate(defects: &[String], checks: Option<&SelfCheck>) -> Value {
    let mut report = if defects.is_empty() {
        json!({ "ok": checks.is_none_or(|c| c.failures.is_empty()) })
    } else {
        json!({ "ok": false, "defects": defects })
    };
    if let Some(c) = checks {
        report["self_checks"] = json!({
            "seed": c.seed,
            "checks": c.checks,
            "failures": c.failures,
        });
    }
    report
}

pub fn close(name: &str, closed: &SequentTheory) -> Value {
    json!({
        "theory": name,
        "types": closed.types,
        "count": closed.axioms.len(),
        "axioms": sequents(&closed.axioms),
    })
}

pub fn entails(name: &str, query: &Sequent, entailed: bool) -> Value {
    json!({ "theory": name, "sequent": sequent(query), "entailed": entailed })
}

pub fn lattice(name: &str, l: &ConceptLattice) -> Value {
    let concepts: Vec<Value> = l
        .concepts
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "index": i, "extent": c.extent, "intent": c.intent }))
        .collect();
    json!({
        "classification": name,
        "concepts": concepts,
        "covers": l.covers(),
        "bottom": l.bottom(),
        "top": l.top(),
    })
}

pub fn channel(ch: &Channel) -> Value {
    let legs: BTreeMap<&String, Value> = ch
        .legs
        .iter()
        .map(|(node, leg)| {
            (
                node,
                json!({ "type_map": leg.type_map, "instance_map": leg.instance_map }),
            )
        })
        .collect();
    json!({ "core": classification(&ch.core), "legs": legs })
}

pub fn sum(name: &str, ch: &Channel) -> Value {
    let mut report = channel(ch);
    report["system"] = json!(name);
    report
}

pub fn integrate(name: &str, r: &IntegrationResult) -> Value {
    let lang = &r.closure.sum_language;
    let classes: BTreeMap<&String, Vec<String>> = lang
        .classes
        .iter()
        .map(|(class, members)| {
            (
                class,
                members.iter().map(|(n, t)| format!("{n}.{t}")).collect(),
            )
        })
        .collect();
    let cocone: BTreeMap<&String, &BTreeMap<String, String>> =
        lang.cocone.iter().map(|(n, f)| (n, f.as_map())).collect();
    let deltas: BTreeMap<&String, Value> = r.deltas.iter().map(|(n, d)| (n, sequents(d))).collect();
    json!({
        "system": name,
        "delta_bound": r.delta_bound,
        "sum_language": { "types": lang.sum, "classes": classes, "cocone": cocone },
        "sum_axioms": sequents(&r.closure.sum_theory.axioms),
        "pointwise": r.pointwise,
        "monocosmic": r.monocosmic,
        "verdict": r.verdict.to_string(),
        "deltas": deltas,
        "channel": r.channel.as_ref().map(channel),
    })
}

pub fn consistency(pointwise: bool, monocosmic: bool, verdict: &str) -> Value {
    json!({ "pointwise": pointwise, "monocosmic": monocosmic, "verdict": verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_text_ends_in_newline() {
        let text = render(&consistency(true, false, "polycosmic"));
        assert_eq!(
            text,
            "{\n  \"monocosmic\": false,\n  \"pointwise\": true,\n  \"verdict\": \"polycosmic\"\n}\n"
        );
    }

    #[test]
    fn sequent_shape() {
        let s = Sequent::parse("philosopher |- mortal_gr").unwrap();
        assert_eq!(
            serde_json::to_string(&sequent(&s)).unwrap(),
            r#"{"ant":["philosopher"],"con":["mortal_gr"]}"#
        );
    }

    #[test]
    fn failed_validation_lists_defects() {
        let v = validate(&["broken".to_string()], None);
        assert_eq!(v["ok"], json!(false));
        assert_eq!(v["defects"].as_array().unwrap().len(), 1);
    }
}
