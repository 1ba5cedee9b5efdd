//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every entry point takes the graph as text (edge list or GML, sniffed
//! from the content) and returns a JSON string. Node ids in the JSON are
//! dense indices into `labels`.

use deception_core::harness::{aggregate_reports, detection_seed, evaluate_detailed, redetect_seed};
use deception_core::io::{parse_graph, GraphFormat, LabelTable};
use deception_core::{modularity, Deceiver, Detector, DetectorId, EvalConfig, Graph, Partition, TargetChoice};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const KARATE: &str = include_str!("../../core/data/karate.gml");

// Edge lists never contain brackets.
fn sniff(text: &str) -> GraphFormat {
    if text.contains('[') {
        GraphFormat::Gml
    } else {
        GraphFormat::EdgeList
    }
}

fn load(text: &str) -> Result<(Graph, LabelTable), String> {
    parse_graph(text.as_bytes(), sniff(text)).map_err(|e| e.to_string())
}

fn parse<T: std::str::FromStr>(name: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    name.parse().map_err(|e: T::Err| e.to_string())
}

fn edges_json(graph: &Graph) -> Value {
    graph.edges().map(|(u, v)| json!([u, v])).collect()
}

fn partition_json(p: &Partition) -> Value {
    json!({
        "communities": p.communities(),
        "modularity": modularity(p).unwrap_or(0.0),
    })
}

/// Graph, labels and one detected partition.
pub fn detect_value(text: &str, algorithm: &str, seed: u64) -> Result<Value, String> {
    let (graph, labels) = load(text)?;
    let detector: DetectorId = parse(algorithm)?;
    let partition = detector.detect(&graph, seed).map_err(|e| e.to_string())?;
    Ok(json!({
        "labels": labels.labels(),
        "edges": edges_json(&graph),
        "partition": partition_json(&partition),
    }))
}

/// One evaluation cell. An empty `target` draws a detected community at
/// random, otherwise it is a whitespace separated list of node labels.
pub fn deceive_value(
    text: &str,
    algorithm: &str,
    deceiver: &str,
    budget: usize,
    target: &str,
    seed: u64,
) -> Result<Value, String> {
    let (graph, labels) = load(text)?;
    let detector: DetectorId = parse(algorithm)?;
    let mut config = EvalConfig::new("web", parse(deceiver)?, vec![budget], 1, seed);
    if !target.trim().is_empty() {
        config.target = TargetChoice::Fixed(labels.resolve(target).map_err(|e| e.to_string())?);
    }
    let cell = evaluate_detailed(&graph, &detector, &config).map_err(|e| e.to_string())?.remove(0);
    let r = &cell.report;
    if r.status.is_failed() {
        return Err(r.status.to_string());
    }
    let initial = detector.detect(&graph, detection_seed(r.seed)).map_err(|e| e.to_string())?;
    let mut after = graph.clone();
    for u in &r.updates {
        after.apply_update_mut(u).map_err(|e| e.to_string())?;
    }
    let redetected = detector.detect(&after, redetect_seed(r.seed)).map_err(|e| e.to_string())?;
    let updates: Vec<Value> = r
        .updates
        .iter()
        .map(|u| json!({"kind": if u.is_addition() { "add" } else { "del" }, "u": u.u, "v": u.v}))
        .collect();
    Ok(json!({
        "labels": labels.labels(),
        "target": cell.target,
        "updates": updates,
        "status": r.status.to_string(),
        "before": {
            "edges": edges_json(&graph),
            "partition": partition_json(&initial),
            "safeness": r.saf_before,
            "score": r.score_before,
        },
        "after": {
            "edges": edges_json(&after),
            "partition": partition_json(&redetected),
            "safeness": r.saf_after,
            "score": r.score_after,
        },
    }))
}

/// Mean final score per budget `1..=max_budget` for both deceivers.
pub fn sweep_value(text: &str, algorithm: &str, max_budget: usize, runs: usize, seed: u64) -> Result<Value, String> {
    let (graph, _) = load(text)?;
    let detector: DetectorId = parse(algorithm)?;
    let mut out = serde_json::Map::new();
    for deceiver in Deceiver::ALL {
        let config = EvalConfig::new("web", deceiver, (1..=max_budget).collect(), runs, seed);
        let reports: Vec<_> = evaluate_detailed(&graph, &detector, &config)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.report)
            .collect();
        let curve: Vec<Value> = aggregate_reports(&reports)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|s| {
                json!({
                    "budget": s.budget,
                    "score_mean": s.score_mean,
                    "score_std": s.score_std,
                    "saf_mean": s.saf_mean,
                    "failed": s.failed,
                })
            })
            .collect();
        out.insert(deceiver.as_str().to_string(), Value::Array(curve));
    }
    Ok(Value::Object(out))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn karate_gml() -> String {
    KARATE.to_string()
}

#[wasm_bindgen]
pub fn detect(text: &str, algorithm: &str, seed: u32) -> Result<String, JsError> {
    to_js(detect_value(text, algorithm, seed.into()))
}

#[wasm_bindgen]
pub fn deceive(
    text: &str,
    algorithm: &str,
    deceiver: &str,
    budget: usize,
    target: &str,
    seed: u32,
) -> Result<String, JsError> {
    to_js(deceive_value(text, algorithm, deceiver, budget, target, seed.into()))
}

#[wasm_bindgen]
pub fn sweep(text: &str, algorithm: &str, max_budget: usize, runs: usize, seed: u32) -> Result<String, JsError> {
    to_js(sweep_value(text, algorithm, max_budget, runs, seed.into()))
}
