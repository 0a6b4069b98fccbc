//! JSON schemas for graphs, curves, boundary witnesses and space manifests.
//!
//! Legs are numbered from 1 in every document. Lengths are strings `"p/q"`
//! or `"inf"`.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::moduli::ModuliSpace;
use crate::scalar::{ExtendedLength, Scalar};
use crate::tautological::{BoundaryWitness, Position, QuotientMetricGraph};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: usize,
    weight: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfEdgeDoc {
    v: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: usize,
    halfedges: [HalfEdgeDoc; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LegDoc {
    index: usize,
    v: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthDoc {
    edge: usize,
    len: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    vertices: Vec<VertexDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
    #[serde(default)]
    legs: Vec<LegDoc>,
    lengths: Option<Vec<LengthDoc>>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// Places items with ids `0..len` (in any order) into a vector.
fn by_id<T>(items: Vec<(usize, T)>, what: &str) -> Result<Vec<T>> {
    let len = items.len();
    let mut slots: Vec<Option<T>> = (0..len).map(|_| None).collect();
    for (id, item) in items {
        let slot = slots
            .get_mut(id)
            .ok_or_else(|| schema(format!("{what} id {id} out of range 0..{len}")))?;
        if slot.replace(item).is_some() {
            return Err(schema(format!("duplicate {what} id {id}")));
        }
    }
    Ok(slots.into_iter().map(|s| s.unwrap()).collect())
}

fn parse_doc(value: &Value) -> Result<CurveDoc> {
    CurveDoc::deserialize(value).map_err(|e| schema(e.to_string()))
}

fn graph_from_doc(doc: &CurveDoc) -> Result<WeightedGraph> {
    let weights = by_id(doc.vertices.iter().map(|v| (v.id, v.weight)).collect(), "vertex")?;
    let ends = by_id(
        doc.edges.iter().map(|e| (e.id, [e.halfedges[0].v, e.halfedges[1].v])).collect(),
        "edge",
    )?;
    let legs = by_id(
        doc.legs
            .iter()
            .map(|l| {
                let index = l.index.checked_sub(1).ok_or_else(|| schema("leg indices start at 1"))?;
                Ok((index, l.v))
            })
            .collect::<Result<_>>()?,
        "leg",
    )?;
    WeightedGraph::new(weights, ends, legs).map_err(|e| schema(e.to_string()))
}

pub fn graph_from_json(value: &Value) -> Result<WeightedGraph> {
    let doc = parse_doc(value)?;
    if doc.lengths.is_some() {
        return Err(schema("a graph document has no lengths"));
    }
    graph_from_doc(&doc)
}

pub fn curve_from_json<S: Scalar>(value: &Value) -> Result<TropicalCurve<S>> {
    let doc = parse_doc(value)?;
    let graph = graph_from_doc(&doc)?;
    let lengths = doc.lengths.as_deref().unwrap_or_default();
    let lengths = by_id(
        lengths
            .iter()
            .map(|l| {
                let len = ExtendedLength::parse_text(&l.len)
                    .ok_or_else(|| schema(format!("unreadable length {:?}", l.len)))?;
                Ok((l.edge, len))
            })
            .collect::<Result<_>>()?,
        "length edge",
    )?;
    TropicalCurve::new(graph, lengths)
}

pub fn graph_to_json(g: &WeightedGraph) -> Value {
    let vertices: Vec<Value> = g.weights().iter().enumerate().map(|(id, w)| json!({"id": id, "weight": w})).collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(id, [a, b])| json!({"id": id, "halfedges": [{"v": a}, {"v": b}]}))
        .collect();
    let legs: Vec<Value> = g.legs().iter().enumerate().map(|(i, v)| json!({"index": i + 1, "v": v})).collect();
    json!({"vertices": vertices, "edges": edges, "legs": legs})
}

pub fn curve_to_json<S: Scalar>(c: &TropicalCurve<S>) -> Value {
    let mut value = graph_to_json(c.graph());
    let lengths: Vec<Value> = c
        .lengths()
        .iter()
        .enumerate()
        .map(|(e, l)| json!({"edge": e, "len": l.to_text()}))
        .collect();
    value["lengths"] = Value::Array(lengths);
    value
}

pub fn position_to_json<S: Scalar>(c: &TropicalCurve<S>, p: &Position<S>) -> Value {
    match p {
        Position::Vertex(v) => json!({"vertex": v}),
        Position::Along { half, distance } => match c.graph().half_edge(*half) {
            crate::graph::HalfEdge::Edge { edge, side } => {
                json!({"edge": edge, "from": c.graph().ends(edge)[side], "side": side, "distance": distance.to_text()})
            }
            crate::graph::HalfEdge::Leg(i) => json!({"leg": i + 1, "distance": distance.to_text()}),
        },
    }
}

pub fn witness_to_json<S: Scalar>(w: &BoundaryWitness<S>) -> Value {
    match w {
        BoundaryWitness::Glue(c) => json!({"kind": "glue", "curve": curve_to_json(c)}),
        BoundaryWitness::Clutch { first, second, leg_order } => {
            let legs: Vec<usize> = leg_order.iter().map(|i| i + 1).collect();
            json!({"kind": "clutch", "first": curve_to_json(first), "second": curve_to_json(second), "legs": legs})
        }
    }
}

pub fn witness_from_json<S: Scalar>(value: &Value) -> Result<BoundaryWitness<S>> {
    let field = |name: &str| value.get(name).ok_or_else(|| schema(format!("witness is missing {name:?}")));
    match value.get("kind").and_then(Value::as_str) {
        Some("glue") => Ok(BoundaryWitness::Glue(curve_from_json(field("curve")?)?)),
        Some("clutch") => {
            let legs: Vec<usize> = serde_json::from_value(field("legs")?.clone()).map_err(|e| schema(e.to_string()))?;
            let leg_order = legs
                .into_iter()
                .map(|i| i.checked_sub(1).ok_or_else(|| schema("leg indices start at 1")))
                .collect::<Result<_>>()?;
            Ok(BoundaryWitness::Clutch {
                first: curve_from_json(field("first")?)?,
                second: curve_from_json(field("second")?)?,
                leg_order,
            })
        }
        _ => Err(schema("witness kind must be \"glue\" or \"clutch\"")),
    }
}

pub fn quotient_to_json<S: Scalar>(q: &QuotientMetricGraph<S>) -> Value {
    let vertices: Vec<Value> = q.weights.iter().enumerate().map(|(id, w)| json!({"id": id, "weight": w})).collect();
    let edges: Vec<Value> = q
        .edges
        .iter()
        .enumerate()
        .map(|(id, e)| {
            json!({
                "id": id,
                "halfedges": [{"v": e.ends[0]}, {"v": e.ends[1]}],
                "len": e.length.to_text(),
                "folded": e.folded,
            })
        })
        .collect();
    let legs: Vec<Value> = q.legs.iter().enumerate().map(|(i, v)| json!({"index": i + 1, "v": v})).collect();
    json!({"vertices": vertices, "edges": edges, "legs": legs, "total_length": q.total_length().to_text()})
}

/// `{g, n, strata: [{id, graph, dim, monodromy_order, ...}], arrows}`.
pub fn manifest_to_json(space: &ModuliSpace) -> Value {
    let strata: Vec<Value> = space
        .strata()
        .iter()
        .enumerate()
        .map(|(id, s)| {
            json!({
                "id": id,
                "graph": graph_to_json(&s.graph),
                "dim": s.dim(),
                "monodromy_order": s.monodromy.len(),
                "aut_order": s.aut_order,
                "form": s.form.to_hex(),
            })
        })
        .collect();
    let arrows: Vec<Value> = space
        .contraction_arrows()
        .iter()
        .map(|a| json!({"src": a.source, "dst": a.target, "map": a.map}))
        .collect();
    json!({"g": space.genus(), "n": space.num_legs(), "strata": strata, "arrows": arrows})
}
