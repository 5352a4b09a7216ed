//! JSON result documents. Keys come out sorted since `serde_json::Map` is a
//! `BTreeMap` without the `preserve_order` feature.

use psolve_core::conditions::{ConditionReport, Quantity};
use psolve_core::resolution::{ClosureStats, Refutation};
use psolve_core::search::{Decision, SearchStats};
use psolve_core::{Bihypergraph, Certificate, FailureWitness, Method, VertexSet};
use serde_json::{json, Value};

fn names(b: &Bihypergraph, s: &VertexSet) -> Value {
    s.iter().map(|v| b.name(v)).collect()
}

fn refutation(b: &Bihypergraph, r: &Refutation) -> Value {
    let steps: Vec<Value> = r
        .steps
        .iter()
        .map(|s| {
            json!({
                "id": s.id,
                "conclusion": names(b, &s.conclusion),
                "premises": s.premises.iter().map(|&p| r.ref_name(b, p)).collect::<Vec<_>>(),
                "pivot": r.ref_name(b, s.pivot),
            })
        })
        .collect();
    json!({ "mode": r.mode.to_string(), "steps": steps })
}

pub fn certificate(b: &Bihypergraph, method: Method, cert: &Certificate) -> Value {
    let witness = match cert {
        Certificate::HasS(p) => json!({
            "x": names(b, &p.x_side),
            "complement": names(b, &p.x_side.complement(b.vertex_count())),
        }),
        Certificate::FailsS(FailureWitness::Refutation(r)) => {
            json!({ "refutation": refutation(b, r) })
        }
        Certificate::FailsS(FailureWitness::Exhausted) => json!({ "exhausted": true }),
    };
    json!({
        "verdict": cert.verdict().to_string(),
        "method": method.to_string(),
        "witness": witness,
    })
}

fn closure_stats(s: &ClosureStats) -> Value {
    json!({ "generated": s.generated, "kept": s.kept, "subsumed": s.subsumed, "rounds": s.rounds })
}

fn search_stats(s: &SearchStats) -> Value {
    json!({ "decisions": s.decisions, "propagations": s.propagations, "conflicts": s.conflicts })
}

pub fn decision(b: &Bihypergraph, method: Method, d: &Decision) -> Value {
    let mut doc = certificate(b, method, &d.certificate);
    let mut stats = serde_json::Map::new();
    if let Some(c) = &d.closure {
        stats.insert("closure".into(), closure_stats(c));
    }
    if let Some(s) = &d.search {
        stats.insert("search".into(), search_stats(s));
    }
    doc["stats"] = Value::Object(stats);
    doc
}

pub fn indeterminate(method: Method, e: &psolve_core::Error) -> Value {
    json!({ "verdict": "Unknown", "method": method.to_string(), "error": e.to_string() })
}

pub fn describe_quantity(q: &Quantity) -> String {
    match q {
        Quantity::LargeSubsets {
            k,
            required,
            present,
        } => {
            format!(
                "k = {k}, {present} of {required} ({})-subsets in E ∩ F",
                k + 1
            )
        }
        Quantity::UpsetCount { count, threshold } => {
            format!("|I(E) ∪ I(F)| = {count}, threshold {threshold}")
        }
        Quantity::WeightSum { sum, threshold } => format!("sum = {sum}, threshold {threshold}"),
    }
}

fn quantity(q: &Quantity) -> Value {
    match q {
        Quantity::LargeSubsets {
            k,
            required,
            present,
        } => json!({ "k": k, "required": required, "present": present }),
        Quantity::UpsetCount { count, threshold } => {
            json!({ "count": count, "threshold": threshold })
        }
        Quantity::WeightSum { sum, threshold } => {
            json!({ "sum": sum.to_string(), "threshold": threshold.to_string() })
        }
    }
}

pub fn conditions(reports: &[ConditionReport]) -> Value {
    let items: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "criterion": r.criterion.name(),
                "verdict": r.verdict.to_string(),
                "computed": r.computed.as_ref().map(quantity),
                "note": r.note,
            })
        })
        .collect();
    json!({ "conditions": items })
}
