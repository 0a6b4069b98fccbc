//! Weighted multigraphs with legs: the combinatorial types of stable curves.
//!
//! A graph is stored with a fixed half-edge layout: edge `e` owns the
//! half-edges `2e` and `2e + 1` (attached to `ends(e)[0]` and `ends(e)[1]`),
//! and leg `i` is the half-edge `2|E| + i`. The edge pairing is therefore the
//! involution `h ↦ h ^ 1` on `0..2|E|`, and legs are its unpaired complement.
//! Legs are indexed from 0 internally; the JSON schema and the CLI use 1-based
//! indices.

pub(crate) mod canon;
mod enumerate;
mod iso;

pub use canon::{canonical_form, canonical_labeling, CanonicalForm, CanonicalLabeling};
pub use enumerate::enumerate_stable_graphs;
pub(crate) use enumerate::check_stable_range;
pub use iso::{automorphism_group, is_isomorphic, isomorphisms, AutomorphismGroup, GraphIsomorphism};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// What a half-edge is attached to besides its vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfEdge {
    /// Side `0` or `1` of an edge.
    Edge { edge: usize, side: usize },
    /// Leg with 0-based index.
    Leg(usize),
}

/// A connected-or-not multigraph `G = (V, E, L, h)` with vertex weights `h`,
/// loops and parallel edges allowed, and an ordered list of legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    weights: Vec<u32>,
    ends: Vec<[usize; 2]>,
    legs: Vec<usize>,
}

impl WeightedGraph {
    /// Builds a graph from vertex weights, edge endpoints and the vertex of
    /// each leg (in leg order).
    pub fn new(weights: Vec<u32>, ends: Vec<[usize; 2]>, legs: Vec<usize>) -> Result<Self> {
        let nv = weights.len();
        for (e, pair) in ends.iter().enumerate() {
            for &v in pair {
                if v >= nv {
                    return Err(Error::MalformedGraph(format!("edge {e} references vertex {v}")));
                }
            }
        }
        for (i, &v) in legs.iter().enumerate() {
            if v >= nv {
                return Err(Error::MalformedGraph(format!("leg {} references vertex {v}", i + 1)));
            }
        }
        Ok(WeightedGraph { weights, ends, legs })
    }

    /// The one-vertex graph `•_{g,n}` with no edges.
    pub fn single_vertex(weight: u32, legs: usize) -> Self {
        WeightedGraph { weights: vec![weight], ends: Vec::new(), legs: vec![0; legs] }
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_half_edges(&self) -> usize {
        2 * self.ends.len() + self.legs.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.ends
    }

    pub fn ends(&self, e: usize) -> [usize; 2] {
        self.ends[e]
    }

    /// Vertex of each leg, in leg order.
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn leg_vertex(&self, leg: usize) -> usize {
        self.legs[leg]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.ends[e][0] == self.ends[e][1]
    }

    pub fn half_edge(&self, h: usize) -> HalfEdge {
        let ne = 2 * self.ends.len();
        if h < ne {
            HalfEdge::Edge { edge: h / 2, side: h % 2 }
        } else {
            HalfEdge::Leg(h - ne)
        }
    }

    pub fn leg_half(&self, leg: usize) -> usize {
        2 * self.ends.len() + leg
    }

    pub fn half_vertex(&self, h: usize) -> usize {
        match self.half_edge(h) {
            HalfEdge::Edge { edge, side } => self.ends[edge][side],
            HalfEdge::Leg(i) => self.legs[i],
        }
    }

    /// The other half of an edge, or `None` for a leg.
    pub fn partner(&self, h: usize) -> Option<usize> {
        (h < 2 * self.ends.len()).then_some(h ^ 1)
    }

    /// All half-edges at `v`, in increasing order.
    pub fn incident_halves(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.half_vertex(h) == v).collect()
    }

    /// Number of half-edges at `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> Result<usize> {
        if v >= self.num_vertices() {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.valence_unchecked(v))
    }

    pub(crate) fn valence_unchecked(&self, v: usize) -> usize {
        let edge_ends = self.ends.iter().flatten().filter(|&&u| u == v).count();
        edge_ends + self.legs.iter().filter(|&&u| u == v).count()
    }

    /// Number of edges joining `u` and `w` (loops at `u` when `u == w`).
    pub fn multiplicity(&self, u: usize, w: usize) -> usize {
        self.ends
            .iter()
            .filter(|&&[a, b]| (a == u && b == w) || (a == w && b == u))
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        if nv == 0 {
            return false;
        }
        self.component_of(0, None).iter().all(|&c| c)
    }

    /// Vertices reachable from `start`, optionally ignoring one edge.
    pub(crate) fn component_of(&self, start: usize, skip_edge: Option<usize>) -> Vec<bool> {
        let nv = self.num_vertices();
        let mut adjacency = vec![Vec::new(); nv];
        for (e, &[a, b]) in self.ends.iter().enumerate() {
            if Some(e) != skip_edge {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        let mut seen = vec![false; nv];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// True if deleting `e` disconnects the graph.
    pub fn is_bridge(&self, e: usize) -> Result<bool> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let [a, b] = self.ends[e];
        Ok(!self.component_of(a, Some(e))[b])
    }

    /// First Betti number `|E| - |V| + 1` of a connected graph.
    pub fn betti_number(&self) -> Result<u32> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok((self.num_edges() + 1 - self.num_vertices()) as u32)
    }

    /// `g(G) = h¹(G) + Σ_v h(v)`.
    pub fn genus(&self) -> Result<u32> {
        Ok(self.betti_number()? + self.total_weight())
    }

    pub(crate) fn vertex_is_stable(&self, v: usize) -> bool {
        let valence = self.valence_unchecked(v);
        match self.weights[v] {
            0 => valence >= 3,
            1 => valence >= 1,
            _ => true,
        }
    }

    /// Connected, and every weight-0 vertex has valence ≥ 3 and every
    /// weight-1 vertex valence ≥ 1.
    pub fn is_stable(&self) -> bool {
        self.is_connected() && (0..self.num_vertices()).all(|v| self.vertex_is_stable(v))
    }

    /// Collapses the edges in `edges` (duplicates ignored). Merged vertices get
    /// the genus of their preimage.
    pub fn contract(&self, edges: &[usize]) -> Result<Contraction> {
        let ne = self.num_edges();
        let mut contracted = vec![false; ne];
        for &e in edges {
            if e >= ne {
                return Err(Error::UnknownEdge(e));
            }
            contracted[e] = true;
        }

        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in (0..ne).filter(|&e| contracted[e]) {
            let [a, b] = self.ends[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }

        // new vertices are numbered by first appearance of their root
        let mut root_index = vec![usize::MAX; nv];
        let mut vertex_map = vec![0; nv];
        let mut count = 0;
        for v in 0..nv {
            let r = find(&mut parent, v);
            if root_index[r] == usize::MAX {
                root_index[r] = count;
                count += 1;
            }
            vertex_map[v] = root_index[r];
        }

        // genus of each preimage: Σh + (#contracted edges) - (#vertices) + 1
        let mut weights = vec![0i64; count];
        let mut sizes = vec![0i64; count];
        for v in 0..nv {
            weights[vertex_map[v]] += self.weights[v] as i64;
            sizes[vertex_map[v]] += 1;
        }
        for e in (0..ne).filter(|&e| contracted[e]) {
            weights[vertex_map[self.ends[e][0]]] += 1;
        }
        let weights: Vec<u32> = weights
            .iter()
            .zip(&sizes)
            .map(|(w, s)| (w - s + 1) as u32)
            .collect();

        let edge_injection: Vec<usize> = (0..ne).filter(|&e| !contracted[e]).collect();
        let target_ends = edge_injection
            .iter()
            .map(|&e| [vertex_map[self.ends[e][0]], vertex_map[self.ends[e][1]]])
            .collect();
        let target_legs = self.legs.iter().map(|&v| vertex_map[v]).collect();
        let target = WeightedGraph { weights, ends: target_ends, legs: target_legs };

        Ok(Contraction {
            source: self.clone(),
            contracted: (0..ne).filter(|&e| contracted[e]).collect(),
            target,
            vertex_map,
            edge_injection,
        })
    }

    /// Relabels vertices by `vertex_perm`, edges by `edge_perm`, and swaps
    /// the two sides of every edge `e` with `flips[e]` set (indices refer to
    /// the old edge ids). Returns the new graph and the isomorphism from
    /// `self` onto it.
    pub fn relabel(&self, vertex_perm: &Perm, edge_perm: &Perm, flips: &[bool]) -> (WeightedGraph, GraphIsomorphism) {
        let nv = self.num_vertices();
        let ne = self.num_edges();
        assert_eq!(vertex_perm.degree(), nv);
        assert_eq!(edge_perm.degree(), ne);
        let mut weights = vec![0; nv];
        for v in 0..nv {
            weights[vertex_perm.apply(v)] = self.weights[v];
        }
        let mut ends = vec![[0, 0]; ne];
        let mut half_map = vec![0; self.num_half_edges()];
        for e in 0..ne {
            let f = edge_perm.apply(e);
            let flip = flips.get(e).copied().unwrap_or(false) as usize;
            for side in 0..2 {
                ends[f][side ^ flip] = vertex_perm.apply(self.ends[e][side]);
                half_map[2 * e + side] = 2 * f + (side ^ flip);
            }
        }
        for i in 0..self.num_legs() {
            half_map[2 * ne + i] = 2 * ne + i;
        }
        let legs = self.legs.iter().map(|&v| vertex_perm.apply(v)).collect();
        let graph = WeightedGraph { weights, ends, legs };
        let iso = GraphIsomorphism::new(vertex_perm.images().to_vec(), half_map);
        (graph, iso)
    }
}

/// A weighted contraction `π: G → G'` collapsing a set of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub source: WeightedGraph,
    /// Contracted edge ids of `source`, sorted.
    pub contracted: Vec<usize>,
    pub target: WeightedGraph,
    /// `vertex_map[v]` is the image of source vertex `v`.
    pub vertex_map: Vec<usize>,
    /// `edge_injection[e']` is the source edge that target edge `e'` comes from.
    pub edge_injection: Vec<usize>,
}
