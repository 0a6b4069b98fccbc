//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the library's canonical forms or isomorphism search.

#![allow(dead_code)]

use std::collections::HashSet;

use tropmod::graph::WeightedGraph;
use tropmod::{Curve, Length};

/// All `(g, n)` with `2g-2+n > 0` and `3g-3+n <= max_dim`.
pub fn types_up_to(max_dim: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=(max_dim as u32 + 3) / 3 {
        for n in 0..=max_dim + 3 {
            if 2 * g as i64 - 2 + n as i64 > 0 && (3 * g as usize + n) <= max_dim + 3 {
                out.push((g, n));
            }
        }
    }
    out
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Edge multiset (with a label per edge) after renaming vertices by `p`.
fn labeled_edges<T: Ord + Clone>(g: &WeightedGraph, p: &[usize], labels: &[T]) -> Vec<((usize, usize), T)> {
    let mut out: Vec<_> = g
        .edges()
        .iter()
        .zip(labels)
        .map(|(&[a, b], l)| (sorted_pair(p[a], p[b]), l.clone()))
        .collect();
    out.sort();
    out
}

/// Whether some vertex bijection carries `a` onto `b` preserving weights,
/// legs, and the multiset of labeled edges between each pair of vertices.
pub fn labeled_iso<T: Ord + Clone>(a: &WeightedGraph, la: &[T], b: &WeightedGraph, lb: &[T]) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() || a.num_legs() != b.num_legs() {
        return false;
    }
    let target = labeled_edges(b, &(0..b.num_vertices()).collect::<Vec<_>>(), lb);
    permutations(a.num_vertices()).into_iter().any(|p| {
        (0..a.num_vertices()).all(|v| a.weight(v) == b.weight(p[v]))
            && (0..a.num_legs()).all(|i| p[a.leg_vertex(i)] == b.leg_vertex(i))
            && labeled_edges(a, &p, la) == target
    })
}

pub fn graph_iso(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    labeled_iso(a, &vec![(); a.num_edges()], b, &vec![(); b.num_edges()])
}

pub fn curve_iso(a: &Curve, b: &Curve) -> bool {
    labeled_iso(a.graph(), a.lengths(), b.graph(), b.lengths())
}

fn weight_vectors(len: usize, max: u32, total: u32) -> Vec<Vec<u32>> {
    // nonincreasing, sum at most total
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=max.min(total) {
        for mut rest in weight_vectors(len - 1, first, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multisets(pairs: &[(usize, usize)], k: usize, start: usize, acc: &mut Vec<[usize; 2]>, out: &mut Vec<Vec<[usize; 2]>>) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    for i in start..pairs.len() {
        acc.push([pairs[i].0, pairs[i].1]);
        multisets(pairs, k, i, acc, out);
        acc.pop();
    }
}

fn connected(nv: usize, ends: &[[usize; 2]]) -> bool {
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &[a, b] in ends {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Brute-force canonical key: the lexicographically least description over
/// all vertex orders sorted by a vertex invariant.
pub fn brute_key(g: &WeightedGraph) -> (Vec<u32>, Vec<(usize, usize)>, Vec<usize>) {
    let nv = g.num_vertices();
    let mut inv = vec![(0u32, 0usize, 0usize); nv];
    for v in 0..nv {
        inv[v].0 = g.weight(v);
    }
    for &[a, b] in g.edges() {
        inv[a].1 += 1;
        inv[b].1 += 1;
    }
    for &v in g.legs() {
        inv[v].2 += 1;
    }
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(inv[v]));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match blocks.last_mut() {
            Some(b) if inv[b[0]] == inv[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let mut best = None;
    let mut choice: Vec<Vec<usize>> = blocks.iter().map(|b| (0..b.len()).collect()).collect();
    let block_perms: Vec<Vec<Vec<usize>>> = blocks.iter().map(|b| permutations(b.len())).collect();
    let mut idx = vec![0; blocks.len()];
    loop {
        for (k, b) in blocks.iter().enumerate() {
            choice[k] = block_perms[k][idx[k]].iter().map(|&i| b[i]).collect();
        }
        let seq: Vec<usize> = choice.concat();
        let mut new_of = vec![0; nv];
        for (pos, &v) in seq.iter().enumerate() {
            new_of[v] = pos;
        }
        let weights: Vec<u32> = seq.iter().map(|&v| g.weight(v)).collect();
        let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|&[a, b]| sorted_pair(new_of[a], new_of[b])).collect();
        edges.sort();
        let legs: Vec<usize> = g.legs().iter().map(|&v| new_of[v]).collect();
        let key = (weights, edges, legs);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        let mut k = 0;
        while k < blocks.len() && idx[k] + 1 == block_perms[k].len() {
            idx[k] = 0;
            k += 1;
        }
        if k == blocks.len() {
            break;
        }
        idx[k] += 1;
    }
    best.unwrap()
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All placements of legs `0..n` with `count[v]` legs on vertex `v`.
fn placements(count: &mut [usize], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if count.iter().all(|&c| c == 0) {
        out.push(acc.clone());
        return;
    }
    for v in 0..count.len() {
        if count[v] > 0 {
            count[v] -= 1;
            acc.push(v);
            placements(count, acc, out);
            acc.pop();
            count[v] += 1;
        }
    }
}

/// One graph per isomorphism class of stable graphs of type `(g, n)`, by
/// exhaustive generation over vertex counts, weights, edge multisets and
/// leg placements, deduplicated by [`brute_key`].
pub fn stable_graphs(g: u32, n: usize) -> Vec<WeightedGraph> {
    let max_vertices = (2 * g as usize + n).saturating_sub(2).max(1);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for nv in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
        for weights in weight_vectors(nv, g, g) {
            let h: u32 = weights.iter().sum();
            let ne = (g - h) as usize + nv - 1;
            let mut edge_sets = Vec::new();
            multisets(&pairs, ne, 0, &mut Vec::new(), &mut edge_sets);
            for ends in edge_sets {
                if !connected(nv, &ends) {
                    continue;
                }
                let mut deg = vec![0; nv];
                for &[a, b] in &ends {
                    deg[a] += 1;
                    deg[b] += 1;
                }
                // vertices may be renamed freely, so (weight, degree, legs)
                // can be required to be nonincreasing
                if (1..nv).any(|v| (weights[v], deg[v]) > (weights[v - 1], deg[v - 1])) {
                    continue;
                }
                for mut count in compositions(n, nv) {
                    let stable = (0..nv).all(|v| match weights[v] {
                        0 => deg[v] + count[v] >= 3,
                        1 => deg[v] + count[v] >= 1,
                        _ => true,
                    });
                    let sorted = (1..nv)
                        .all(|v| (weights[v], deg[v], count[v]) <= (weights[v - 1], deg[v - 1], count[v - 1]));
                    if !stable || !sorted {
                        continue;
                    }
                    let mut legs_list = Vec::new();
                    placements(&mut count, &mut Vec::new(), &mut legs_list);
                    for legs in legs_list {
                        let graph = WeightedGraph::new(weights.clone(), ends.clone(), legs).unwrap();
                        if seen.insert(brute_key(&graph)) {
                            out.push(graph);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn lengths_text(c: &Curve) -> Vec<String> {
    c.lengths().iter().map(Length::to_text).collect()
}

/// Number of half-edge permutations that are automorphisms, by exhaustive
/// search over vertex bijections, edge bijections and edge flips.
pub fn brute_automorphisms(g: &WeightedGraph) -> usize {
    let ne = g.num_edges();
    let mut count = 0;
    for p in permutations(g.num_vertices()) {
        if (0..g.num_vertices()).any(|v| g.weight(v) != g.weight(p[v]))
            || (0..g.num_legs()).any(|i| p[g.leg_vertex(i)] != g.leg_vertex(i))
        {
            continue;
        }
        for q in permutations(ne) {
            for flips in 0u32..1 << ne {
                let ok = (0..ne).all(|e| {
                    let [a, b] = g.ends(e);
                    let [c, d] = g.ends(q[e]);
                    let (a, b) = if flips >> e & 1 == 1 { (b, a) } else { (a, b) };
                    p[a] == c && p[b] == d
                });
                if ok {
                    count += 1;
                }
            }
        }
    }
    count
}
