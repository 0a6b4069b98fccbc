//! Tropical curves `Γ = (G, ℓ)` with edge lengths in `(0, ∞]`.

use crate::error::{Error, Result};
use crate::graph::{self, CanonicalForm, GraphIsomorphism, WeightedGraph};
use crate::perm::Perm;
use crate::scalar::{ExtendedLength, Scalar};

/// A weighted graph with a positive, possibly infinite, length on every edge.
/// Curves with an infinite edge are the extended tropical curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalCurve<S> {
    graph: WeightedGraph,
    lengths: Vec<ExtendedLength<S>>,
}

/// Canonical encoding of a curve up to length-, weight- and leg-preserving
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveForm<S> {
    pub graph: CanonicalForm,
    pub lengths: Vec<ExtendedLength<S>>,
}

impl<S: Scalar> CurveForm<S> {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.graph.to_bytes();
        for l in &self.lengths {
            out.push(b';');
            out.extend(l.to_text().bytes());
        }
        out
    }
}

impl<S: Scalar> TropicalCurve<S> {
    pub fn new(graph: WeightedGraph, lengths: Vec<ExtendedLength<S>>) -> Result<Self> {
        if lengths.len() != graph.num_edges() {
            return Err(Error::InvalidLength(format!(
                "{} lengths for {} edges",
                lengths.len(),
                graph.num_edges()
            )));
        }
        if let Some(e) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(Error::InvalidLength(format!(
                "edge {e} has non-positive length {}",
                lengths[e]
            )));
        }
        Ok(TropicalCurve { graph, lengths })
    }

    /// The curve `•_{g,n}`: one vertex of weight `g`, no edges, `n` legs.
    pub fn point(genus: u32, legs: usize) -> Self {
        TropicalCurve { graph: WeightedGraph::single_vertex(genus, legs), lengths: Vec::new() }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn lengths(&self) -> &[ExtendedLength<S>] {
        &self.lengths
    }

    pub fn length(&self, e: usize) -> &ExtendedLength<S> {
        &self.lengths[e]
    }

    pub fn genus(&self) -> Result<u32> {
        self.graph.genus()
    }

    pub fn num_legs(&self) -> usize {
        self.graph.num_legs()
    }

    pub fn is_stable(&self) -> bool {
        self.graph.is_stable()
    }

    /// Sum of all edge lengths, `∞` if any edge is infinite.
    pub fn total_length(&self) -> ExtendedLength<S> {
        ExtendedLength::sum(&self.lengths)
    }

    /// Edges of infinite length, and whether there are none (the curve lies
    /// in the finite part rather than on the boundary).
    pub fn infinite_part(&self) -> (Vec<usize>, bool) {
        let infinite: Vec<usize> = (0..self.lengths.len()).filter(|&e| self.lengths[e].is_infinite()).collect();
        let finite = infinite.is_empty();
        (infinite, finite)
    }

    /// Relabels the underlying graph (see [`WeightedGraph::relabel`]) and
    /// carries the lengths along.
    pub fn relabel(&self, vertex_perm: &Perm, edge_perm: &Perm, flips: &[bool]) -> (Self, GraphIsomorphism) {
        let (graph, iso) = self.graph.relabel(vertex_perm, edge_perm, flips);
        let lengths = edge_perm.permute(&self.lengths);
        (TropicalCurve { graph, lengths }, iso)
    }

    /// Length-preserving graph isomorphisms `self → other`.
    pub fn isomorphisms_to(&self, other: &TropicalCurve<S>) -> Vec<GraphIsomorphism> {
        let ne = self.graph.num_edges();
        graph::isomorphisms(&self.graph, &other.graph)
            .into_iter()
            .filter(|iso| {
                iso.edge_map(ne)
                    .iter()
                    .enumerate()
                    .all(|(e, &f)| self.lengths[e] == other.lengths[f])
            })
            .collect()
    }

    /// `Aut(Γ)`: graph automorphisms preserving the length function.
    pub fn automorphisms(&self) -> Vec<GraphIsomorphism> {
        self.isomorphisms_to(self)
    }

    fn best_order(&self) -> (CurveForm<S>, Vec<usize>) {
        let (form, orders) = graph::canon::optimal_orders(&self.graph);
        let mut best: Option<(Vec<ExtendedLength<S>>, Vec<usize>)> = None;
        for order in orders {
            let word = self.length_word(&order);
            if best.as_ref().is_none_or(|(b, _)| word < *b) {
                best = Some((word, order));
            }
        }
        let (lengths, order) = best.expect("at least one admissible ordering");
        (CurveForm { graph: form, lengths }, order)
    }

    /// Sorted lengths of the edges between each pair of positions.
    fn length_word(&self, order: &[usize]) -> Vec<ExtendedLength<S>> {
        let nv = order.len();
        let mut pos = vec![0; nv];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut keyed: Vec<((usize, usize), &ExtendedLength<S>)> = self
            .graph
            .edges()
            .iter()
            .zip(&self.lengths)
            .map(|(&[a, b], l)| ((pos[a].min(pos[b]), pos[a].max(pos[b])), l))
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, l)| l.clone()).collect()
    }

    /// Equal for two curves iff they are isomorphic as tropical curves.
    pub fn canonical_form(&self) -> CurveForm<S> {
        self.best_order().0
    }

    /// The canonically relabelled copy of this curve and the isomorphism onto
    /// it. Its graph is the canonical representative of the graph's class.
    pub fn canonical(&self) -> (TropicalCurve<S>, GraphIsomorphism) {
        let (_, order) = self.best_order();
        let mut idx: Vec<usize> = (0..self.lengths.len()).collect();
        idx.sort_by(|&a, &b| self.lengths[a].cmp(&self.lengths[b]));
        let mut rank = vec![0; idx.len()];
        for (r, &e) in idx.iter().enumerate() {
            rank[e] = r;
        }
        let (graph, iso) = graph::canon::labeling_for_order(&self.graph, &order, &rank);
        let mut lengths = vec![ExtendedLength::Infinite; self.lengths.len()];
        for (e, f) in iso.edge_map(self.lengths.len()).into_iter().enumerate() {
            lengths[f] = self.lengths[e].clone();
        }
        (TropicalCurve { graph, lengths }, iso)
    }

    /// The unique tropically equivalent curve whose graph is stable.
    ///
    /// Repeatedly removes weight-0 vertices of valence 1 with their edge,
    /// smooths leg-free weight-0 vertices of valence 2 into one edge of summed
    /// length, and absorbs the edge under a weight-0 vertex carrying one leg
    /// and one edge into that leg.
    pub fn stabilize(&self) -> Result<TropicalCurve<S>> {
        let g = self.graph.genus()?;
        graph::check_stable_range(g, self.num_legs())?;
        if self.is_stable() {
            return Ok(self.clone());
        }

        let mut weights = self.graph.weights().to_vec();
        let mut alive = vec![true; weights.len()];
        let mut edges: Vec<Option<([usize; 2], ExtendedLength<S>)>> = self
            .graph
            .edges()
            .iter()
            .zip(&self.lengths)
            .map(|(&e, l)| Some((e, l.clone())))
            .collect();
        let mut legs = self.graph.legs().to_vec();

        loop {
            let mut changed = false;
            for v in 0..weights.len() {
                if !alive[v] || weights[v] != 0 {
                    continue;
                }
                // incident (edge, side) pairs and legs
                let mut halves = Vec::new();
                for (e, slot) in edges.iter().enumerate() {
                    if let Some((ends, _)) = slot {
                        for side in 0..2 {
                            if ends[side] == v {
                                halves.push((e, side));
                            }
                        }
                    }
                }
                let leg_count = legs.iter().filter(|&&u| u == v).count();
                match (halves.as_slice(), leg_count) {
                    ([(e, _)], 0) => {
                        edges[*e] = None;
                        alive[v] = false;
                        changed = true;
                    }
                    ([(e1, s1), (e2, s2)], 0) if e1 != e2 => {
                        let (a_ends, a_len) = edges[*e1].take().unwrap();
                        let (b_ends, b_len) = edges[*e2].take().unwrap();
                        edges.push(Some(([a_ends[1 - s1], b_ends[1 - s2]], a_len + b_len)));
                        alive[v] = false;
                        changed = true;
                    }
                    ([(e, side)], 1) => {
                        let (ends, _) = edges[*e].take().unwrap();
                        let target = ends[1 - side];
                        for u in legs.iter_mut().filter(|u| **u == v) {
                            *u = target;
                        }
                        alive[v] = false;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }

        let mut new_index = vec![usize::MAX; weights.len()];
        let mut new_weights = Vec::new();
        for v in 0..weights.len() {
            if alive[v] {
                new_index[v] = new_weights.len();
                new_weights.push(weights[v]);
            }
        }
        weights = new_weights;
        let (ends, lengths): (Vec<[usize; 2]>, Vec<ExtendedLength<S>>) = edges
            .into_iter()
            .flatten()
            .map(|([a, b], l)| ([new_index[a], new_index[b]], l))
            .unzip();
        let legs = legs.into_iter().map(|v| new_index[v]).collect();
        let curve = TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)?;
        debug_assert!(curve.is_stable());
        Ok(curve)
    }

    /// Replaces every edge by a path of `pieces` edges through new weight-0
    /// vertices, splitting the length evenly.
    pub fn subdivide(&self, pieces: usize) -> TropicalCurve<S> {
        assert!(pieces >= 1);
        let mut weights = self.graph.weights().to_vec();
        let mut ends = Vec::new();
        let mut lengths = Vec::new();
        for (e, &[a, b]) in self.graph.edges().iter().enumerate() {
            let piece = match &self.lengths[e] {
                ExtendedLength::Finite(l) => ExtendedLength::Finite(l.clone() / S::from_fraction(pieces as i64, 1)),
                ExtendedLength::Infinite => ExtendedLength::Infinite,
            };
            let mut prev = a;
            for k in 0..pieces {
                let next = if k + 1 == pieces {
                    b
                } else {
                    weights.push(0);
                    weights.len() - 1
                };
                ends.push([prev, next]);
                lengths.push(piece.clone());
                prev = next;
            }
        }
        let graph = WeightedGraph::new(weights, ends, self.graph.legs().to_vec()).unwrap();
        TropicalCurve { graph, lengths }
    }
}

/// A stable graph together with the valuations of the local equations of its
/// nodes: the input of the naive tropicalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedDualGraph<S> {
    pub graph: WeightedGraph,
    /// Valuation of the node equation of each edge; `None` marks missing data.
    pub node_valuations: Vec<Option<ExtendedLength<S>>>,
}

/// Sets the length of every edge to the valuation of its node.
pub fn naive_trop<S: Scalar>(data: &ValuedDualGraph<S>) -> Result<TropicalCurve<S>> {
    if !data.graph.is_stable() {
        return Err(Error::NotStable);
    }
    let mut lengths = Vec::with_capacity(data.graph.num_edges());
    for e in 0..data.graph.num_edges() {
        match data.node_valuations.get(e) {
            Some(Some(v)) => lengths.push(v.clone()),
            _ => return Err(Error::MissingValuation(e)),
        }
    }
    TropicalCurve::new(data.graph.clone(), lengths)
}
