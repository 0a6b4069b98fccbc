//! Leg-preserving, weight-preserving isomorphisms at half-edge level.

use std::collections::BTreeMap;

use super::{HalfEdge, WeightedGraph};
use crate::perm::{all_permutations, Perm};

/// A pair of bijections on vertices and half-edges that preserves incidence,
/// the edge pairing, vertex weights and every leg index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphIsomorphism {
    pub vertex_map: Vec<usize>,
    pub half_map: Vec<usize>,
}

impl GraphIsomorphism {
    pub fn new(vertex_map: Vec<usize>, half_map: Vec<usize>) -> Self {
        GraphIsomorphism { vertex_map, half_map }
    }

    pub fn identity(g: &WeightedGraph) -> Self {
        GraphIsomorphism {
            vertex_map: (0..g.num_vertices()).collect(),
            half_map: (0..g.num_half_edges()).collect(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GraphIsomorphism) -> GraphIsomorphism {
        GraphIsomorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            half_map: other.half_map.iter().map(|&h| self.half_map[h]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIsomorphism {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut half_map = vec![0; self.half_map.len()];
        for (h, &k) in self.half_map.iter().enumerate() {
            half_map[k] = h;
        }
        GraphIsomorphism { vertex_map, half_map }
    }

    /// Image of each edge id (edges are the pairs `{2e, 2e+1}`).
    pub fn edge_map(&self, num_edges: usize) -> Vec<usize> {
        (0..num_edges).map(|e| self.half_map[2 * e] / 2).collect()
    }

    /// Checks every defining condition of an isomorphism `g1 → g2`.
    pub fn is_isomorphism(&self, g1: &WeightedGraph, g2: &WeightedGraph) -> bool {
        if g1.num_vertices() != g2.num_vertices()
            || g1.num_edges() != g2.num_edges()
            || g1.num_legs() != g2.num_legs()
            || self.vertex_map.len() != g1.num_vertices()
            || self.half_map.len() != g1.num_half_edges()
        {
            return false;
        }
        if Perm::from_images(self.vertex_map.clone()).is_none()
            || Perm::from_images(self.half_map.clone()).is_none()
        {
            return false;
        }
        let weights_ok = (0..g1.num_vertices()).all(|v| g1.weight(v) == g2.weight(self.vertex_map[v]));
        let incidence_ok = (0..g1.num_half_edges())
            .all(|h| self.vertex_map[g1.half_vertex(h)] == g2.half_vertex(self.half_map[h]));
        let pairing_ok = (0..g1.num_half_edges()).all(|h| match (g1.half_edge(h), g1.partner(h)) {
            (HalfEdge::Leg(i), _) => g2.half_edge(self.half_map[h]) == HalfEdge::Leg(i),
            (_, Some(p)) => g2.partner(self.half_map[h]) == Some(self.half_map[p]),
            (_, None) => false,
        });
        weights_ok && incidence_ok && pairing_ok
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct VertexSignature {
    weight: u32,
    valence: usize,
    loops: usize,
    legs: Vec<usize>,
}

fn signatures(g: &WeightedGraph) -> Vec<VertexSignature> {
    (0..g.num_vertices())
        .map(|v| VertexSignature {
            weight: g.weight(v),
            valence: g.valence_unchecked(v),
            loops: g.multiplicity(v, v),
            legs: (0..g.num_legs()).filter(|&i| g.leg_vertex(i) == v).collect(),
        })
        .collect()
}

fn multiplicity_matrix(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let nv = g.num_vertices();
    let mut m = vec![vec![0; nv]; nv];
    for &[a, b] in g.edges() {
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }
    m
}

/// Enumerates vertex bijections compatible with signatures and edge
/// multiplicities. `visit` returns `false` to stop the search.
fn vertex_maps(g1: &WeightedGraph, g2: &WeightedGraph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if g1.num_vertices() != g2.num_vertices()
        || g1.num_edges() != g2.num_edges()
        || g1.num_legs() != g2.num_legs()
    {
        return;
    }
    let s1 = signatures(g1);
    let s2 = signatures(g2);
    let mut a = s1.clone();
    let mut b = s2.clone();
    a.sort();
    b.sort();
    if a != b {
        return;
    }
    let m1 = multiplicity_matrix(g1);
    let m2 = multiplicity_matrix(g2);
    let nv = g1.num_vertices();
    let mut map = vec![usize::MAX; nv];
    let mut used = vec![false; nv];

    fn extend(
        u: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ctx: (&[VertexSignature], &[VertexSignature], &[Vec<usize>], &[Vec<usize>]),
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let (s1, s2, m1, m2) = ctx;
        if u == map.len() {
            return visit(map);
        }
        for w in 0..map.len() {
            if used[w] || s1[u] != s2[w] {
                continue;
            }
            if (0..u).any(|p| m1[u][p] != m2[w][map[p]]) {
                continue;
            }
            map[u] = w;
            used[w] = true;
            let go_on = extend(u + 1, map, used, ctx, visit);
            used[w] = false;
            map[u] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }

    extend(0, &mut map, &mut used, (&s1, &s2, &m1, &m2), visit);
}

fn pair_key(ends: [usize; 2]) -> (usize, usize) {
    (ends[0].min(ends[1]), ends[0].max(ends[1]))
}

/// Expands one vertex bijection into every compatible half-edge bijection.
fn half_edge_maps(g1: &WeightedGraph, g2: &WeightedGraph, vmap: &[usize]) -> Vec<Vec<usize>> {
    let ne = g1.num_edges();
    let mut groups1: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in 0..ne {
        groups1.entry(pair_key(g1.ends(e))).or_default().push(e);
    }
    let mut groups2: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in 0..ne {
        groups2.entry(pair_key(g2.ends(e))).or_default().push(e);
    }

    // Each group contributes a list of partial half maps (pairs h1 -> h2).
    let mut choices: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    for ((a, b), edges1) in &groups1 {
        let key = pair_key([vmap[*a], vmap[*b]]);
        let edges2 = &groups2[&key];
        let k = edges1.len();
        let mut options = Vec::new();
        for perm in all_permutations(k) {
            if a == b {
                for flips in 0u32..(1 << k) {
                    let mut partial = Vec::with_capacity(2 * k);
                    for (i, &e1) in edges1.iter().enumerate() {
                        let e2 = edges2[perm[i]];
                        let flip = ((flips >> i) & 1) as usize;
                        partial.push((2 * e1, 2 * e2 + flip));
                        partial.push((2 * e1 + 1, 2 * e2 + (1 - flip)));
                    }
                    options.push(partial);
                }
            } else {
                let mut partial = Vec::with_capacity(2 * k);
                for (i, &e1) in edges1.iter().enumerate() {
                    let e2 = edges2[perm[i]];
                    for side in 0..2 {
                        let target_vertex = vmap[g1.ends(e1)[side]];
                        let target_side = if g2.ends(e2)[0] == target_vertex { 0 } else { 1 };
                        partial.push((2 * e1 + side, 2 * e2 + target_side));
                    }
                }
                options.push(partial);
            }
        }
        choices.push(options);
    }

    let mut base = vec![usize::MAX; g1.num_half_edges()];
    for i in 0..g1.num_legs() {
        base[g1.leg_half(i)] = g2.leg_half(i);
    }
    let mut out = vec![base];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for partial_map in &out {
            for option in &options {
                let mut m = partial_map.clone();
                for &(h1, h2) in option {
                    m[h1] = h2;
                }
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Every isomorphism `g1 → g2`, in a deterministic order. Empty iff the
/// graphs are not isomorphic.
pub fn isomorphisms(g1: &WeightedGraph, g2: &WeightedGraph) -> Vec<GraphIsomorphism> {
    let mut out = Vec::new();
    vertex_maps(g1, g2, &mut |vmap| {
        for half_map in half_edge_maps(g1, g2, vmap) {
            out.push(GraphIsomorphism::new(vmap.to_vec(), half_map));
        }
        true
    });
    out
}

pub fn is_isomorphic(g1: &WeightedGraph, g2: &WeightedGraph) -> bool {
    let mut found = false;
    vertex_maps(g1, g2, &mut |_| {
        found = true;
        false
    });
    found
}

/// `Aut(G)` together with the induced permutation of edge ids of each
/// element.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub elements: Vec<GraphIsomorphism>,
    pub edge_actions: Vec<Perm>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The image of `Aut(G)` in the permutations of `E(G)`, sorted and
    /// without repetitions.
    pub fn edge_image(&self) -> Vec<Perm> {
        let mut image = self.edge_actions.clone();
        image.sort();
        image.dedup();
        image
    }
}

pub fn automorphism_group(g: &WeightedGraph) -> AutomorphismGroup {
    let elements = isomorphisms(g, g);
    let edge_actions = elements
        .iter()
        .map(|a| Perm::from_images(a.edge_map(g.num_edges())).expect("automorphism permutes edges"))
        .collect();
    AutomorphismGroup { elements, edge_actions }
}
