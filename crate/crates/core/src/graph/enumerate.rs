//! Enumeration of stable graphs of type `(g, n)` by inverse contractions.
//!
//! Every stable graph with an edge `e` contracts to the stable graph `G/e`
//! with one edge fewer, so starting from `•_{g,n}` and applying the two
//! inverse moves (turn one unit of weight into a loop, or split a vertex
//! along a new edge) level by level reaches every class.

use std::collections::BTreeMap;

use super::{canonical_labeling, CanonicalForm, WeightedGraph};
use crate::error::{Error, Result};

fn in_stable_range(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

pub(crate) fn check_stable_range(g: u32, n: usize) -> Result<()> {
    if in_stable_range(g, n) {
        Ok(())
    } else {
        Err(Error::UnstableRange { g, n })
    }
}

/// Graphs with one more edge that contract onto `graph` along the new edge.
fn expansions(graph: &WeightedGraph) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    let nv = graph.num_vertices();
    for v in 0..nv {
        let w = graph.weight(v);
        if w > 0 {
            let mut weights = graph.weights().to_vec();
            weights[v] -= 1;
            let mut ends = graph.edges().to_vec();
            ends.push([v, v]);
            out.push(WeightedGraph::new(weights, ends, graph.legs().to_vec()).unwrap());
        }

        let halves = graph.incident_halves(v);
        let k = halves.len();
        for mask in 0u64..(1u64 << k) {
            for moved_weight in 0..=w {
                let mut weights = graph.weights().to_vec();
                weights[v] = w - moved_weight;
                weights.push(moved_weight);
                let mut ends = graph.edges().to_vec();
                let mut legs = graph.legs().to_vec();
                for (bit, &h) in halves.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        match graph.half_edge(h) {
                            super::HalfEdge::Edge { edge, side } => ends[edge][side] = nv,
                            super::HalfEdge::Leg(i) => legs[i] = nv,
                        }
                    }
                }
                ends.push([v, nv]);
                let candidate = WeightedGraph::new(weights, ends, legs).unwrap();
                if candidate.vertex_is_stable(v) && candidate.vertex_is_stable(nv) {
                    out.push(candidate);
                }
            }
        }
    }
    out
}

/// One canonical representative per isomorphism class of stable graphs of
/// genus `g` with `n` legs, sorted by edge count and then canonical form.
pub fn enumerate_stable_graphs(g: u32, n: usize) -> Result<Vec<WeightedGraph>> {
    check_stable_range(g, n)?;
    let max_edges = (3 * g as usize + n).saturating_sub(3);
    let start = canonical_labeling(&WeightedGraph::single_vertex(g, n));
    let mut all: Vec<(usize, CanonicalForm, WeightedGraph)> = vec![(0, start.form, start.graph.clone())];
    let mut level = vec![start.graph];
    for edges in 1..=max_edges {
        let mut next: BTreeMap<CanonicalForm, WeightedGraph> = BTreeMap::new();
        for graph in &level {
            for candidate in expansions(graph) {
                let lab = canonical_labeling(&candidate);
                next.entry(lab.form).or_insert(lab.graph);
            }
        }
        if next.is_empty() {
            break;
        }
        level = next.values().cloned().collect();
        all.extend(next.into_iter().map(|(form, graph)| (edges, form, graph)));
    }
    all.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(all.into_iter().map(|(_, _, graph)| graph).collect())
}
