//! Canonical forms by colour refinement followed by exhaustive search over
//! the orderings that the refined colouring allows.
//!
//! An ordering of the vertices determines an integer word: vertex weights,
//! the position of each leg's vertex, and the upper triangle of the edge
//! multiplicity matrix. The canonical form is the lexicographically least
//! word over all admissible orderings. The colouring is isomorphism
//! invariant, so admissible orderings of isomorphic graphs correspond and the
//! minimum is an invariant; the word determines the graph up to isomorphism,
//! so equal words imply isomorphic graphs.

use std::collections::BTreeMap;
use std::fmt;

use super::{GraphIsomorphism, WeightedGraph};
use crate::perm::all_permutations;

/// Byte-comparable canonical encoding of a graph's isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn words(&self) -> &[u32] {
        &self.0
    }

    /// Big-endian bytes; byte order agrees with the word order.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_be_bytes()).collect()
    }

    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A canonical form together with the canonical representative graph and an
/// isomorphism from the input onto it.
#[derive(Clone, Debug)]
pub struct CanonicalLabeling {
    pub form: CanonicalForm,
    pub graph: WeightedGraph,
    pub iso: GraphIsomorphism,
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

/// Stable colouring: start from (weight, legs, loops, valence) and refine by
/// the multiset of (neighbour colour, multiplicity).
fn refined_colours(g: &WeightedGraph) -> Vec<usize> {
    let nv = g.num_vertices();
    let initial: Vec<(u32, Vec<usize>, usize, usize)> = (0..nv)
        .map(|v| {
            let legs = (0..g.num_legs()).filter(|&i| g.leg_vertex(i) == v).collect();
            (g.weight(v), legs, g.multiplicity(v, v), g.valence_unchecked(v))
        })
        .collect();
    let mut colours = rank(&initial);
    let mut classes = colours.iter().max().map_or(0, |m| m + 1);
    loop {
        let keys: Vec<(usize, Vec<(usize, usize)>)> = (0..nv)
            .map(|v| {
                let mut nbrs: Vec<(usize, usize)> = (0..nv)
                    .filter(|&w| w != v)
                    .map(|w| (colours[w], g.multiplicity(v, w)))
                    .filter(|&(_, m)| m > 0)
                    .collect();
                nbrs.sort();
                (colours[v], nbrs)
            })
            .collect();
        let next = rank(&keys);
        let next_classes = next.iter().max().map_or(0, |m| m + 1);
        colours = next;
        if next_classes == classes {
            return colours;
        }
        classes = next_classes;
    }
}

fn encode(g: &WeightedGraph, order: &[usize]) -> Vec<u32> {
    let nv = g.num_vertices();
    let mut pos = vec![0; nv];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut words = Vec::with_capacity(3 + nv + g.num_legs() + nv * (nv + 1) / 2);
    words.extend([nv as u32, g.num_edges() as u32, g.num_legs() as u32]);
    words.extend(order.iter().map(|&v| g.weight(v)));
    words.extend(g.legs().iter().map(|&v| pos[v] as u32));
    for i in 0..nv {
        for j in i..nv {
            words.push(g.multiplicity(order[i], order[j]) as u32);
        }
    }
    words
}

/// Calls `visit` on every vertex ordering compatible with the refined
/// colouring (cells in colour order, all permutations within each cell).
fn admissible_orders(g: &WeightedGraph, visit: &mut dyn FnMut(&[usize])) {
    let colours = refined_colours(g);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colours.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| all_permutations(c.len())).collect();

    fn walk(
        depth: usize,
        cells: &[Vec<usize>],
        perms: &[Vec<Vec<usize>>],
        order: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == cells.len() {
            visit(order);
            return;
        }
        for p in &perms[depth] {
            let base = order.len();
            order.extend(p.iter().map(|&i| cells[depth][i]));
            walk(depth + 1, cells, perms, order, visit);
            order.truncate(base);
        }
    }

    let mut order = Vec::with_capacity(g.num_vertices());
    walk(0, &cells, &perms, &mut order, visit);
}

/// The canonical word and every admissible ordering attaining it.
pub(crate) fn optimal_orders(g: &WeightedGraph) -> (CanonicalForm, Vec<Vec<usize>>) {
    let mut best: Option<Vec<u32>> = None;
    let mut orders = Vec::new();
    admissible_orders(g, &mut |order| {
        let word = encode(g, order);
        match &best {
            Some(b) if word > *b => {}
            Some(b) if word == *b => orders.push(order.to_vec()),
            _ => {
                best = Some(word);
                orders.clear();
                orders.push(order.to_vec());
            }
        }
    });
    (CanonicalForm(best.unwrap_or_default()), orders)
}

pub fn canonical_form(g: &WeightedGraph) -> CanonicalForm {
    optimal_orders(g).0
}

/// Relabels `g` along `order`. Parallel edges (and loops) are matched to the
/// canonical edges of their vertex pair in increasing `edge_rank`, ties broken
/// by edge id.
pub(crate) fn labeling_for_order(g: &WeightedGraph, order: &[usize], edge_rank: &[usize]) -> (WeightedGraph, GraphIsomorphism) {
    let nv = g.num_vertices();
    let ne = g.num_edges();
    let mut pos = vec![0; nv];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in 0..ne {
        let [a, b] = g.ends(e);
        let key = (pos[a].min(pos[b]), pos[a].max(pos[b]));
        groups.entry(key).or_default().push(e);
    }
    let mut ends = Vec::with_capacity(ne);
    let mut half_map = vec![0; g.num_half_edges()];
    for ((i, j), mut edges) in groups {
        edges.sort_by_key(|&e| (edge_rank[e], e));
        for e in edges {
            let f = ends.len();
            ends.push([i, j]);
            let flip = usize::from(i != j && pos[g.ends(e)[0]] != i);
            half_map[2 * e] = 2 * f + flip;
            half_map[2 * e + 1] = 2 * f + (1 - flip);
        }
    }
    for leg in 0..g.num_legs() {
        half_map[g.leg_half(leg)] = 2 * ne + leg;
    }
    let weights = order.iter().map(|&v| g.weight(v)).collect();
    let legs = g.legs().iter().map(|&v| pos[v]).collect();
    let graph = WeightedGraph::new(weights, ends, legs).expect("relabeling keeps vertex ids in range");
    (graph, GraphIsomorphism::new(pos, half_map))
}

pub fn canonical_labeling(g: &WeightedGraph) -> CanonicalLabeling {
    let (form, orders) = optimal_orders(g);
    let ranks = vec![0; g.num_edges()];
    let (graph, iso) = labeling_for_order(g, &orders[0], &ranks);
    CanonicalLabeling { form, graph, iso }
}
