//! Forgetful maps and their sections, clutching and gluing (with the
//! generalized `[x, y]` variants), boundary witnesses, and the fibers of the
//! forgetful map as quotients `Γ / Aut(Γ)`.

use crate::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::graph::{check_stable_range, GraphIsomorphism, HalfEdge, WeightedGraph};
use crate::moduli::ModuliSpace;
use crate::scalar::{ExtendedLength, Scalar};

/// A point of a curve: a vertex, or an interior point of an edge or leg at
/// `distance` from the vertex carrying the half-edge `half`.
///
/// On an infinite edge, finite distances are measured from either end and
/// `distance = ∞` is the point at infinity in the middle. On a leg the
/// distance may be any positive value or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position<S> {
    Vertex(usize),
    Along { half: usize, distance: ExtendedLength<S> },
}

impl<S: Scalar> Position<S> {
    /// Image of the position under an isomorphism of curves.
    pub fn transport(&self, iso: &GraphIsomorphism) -> Position<S> {
        match self {
            Position::Vertex(v) => Position::Vertex(iso.vertex_map[*v]),
            Position::Along { half, distance } => Position::Along { half: iso.half_map[*half], distance: distance.clone() },
        }
    }
}

/// A curve with `n` legs together with a point on it: the fiber data of
/// the forgetful map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedFiberPoint<S> {
    pub base_curve: TropicalCurve<S>,
    pub position: Position<S>,
}

/// Checks a position and rewrites points of finite edges from side 0, so
/// equal points of a curve have equal normal forms.
pub fn normalize_position<S: Scalar>(c: &TropicalCurve<S>, p: &Position<S>) -> Result<Position<S>> {
    let g = c.graph();
    match p {
        Position::Vertex(v) => {
            if *v >= g.num_vertices() {
                return Err(Error::InvalidPosition(format!("no vertex {v}")));
            }
            Ok(p.clone())
        }
        Position::Along { half, distance } => {
            if *half >= g.num_half_edges() {
                return Err(Error::InvalidPosition(format!("no half-edge {half}")));
            }
            if !distance.is_positive() {
                return Err(Error::InvalidPosition(format!("distance {distance} is not positive")));
            }
            match g.half_edge(*half) {
                HalfEdge::Leg(_) => Ok(p.clone()),
                HalfEdge::Edge { edge, side } => match c.length(edge) {
                    ExtendedLength::Finite(l) => {
                        let d = distance
                            .as_finite()
                            .filter(|d| *d < l)
                            .ok_or_else(|| Error::InvalidPosition(format!("distance {distance} exceeds edge length {l:?}")))?;
                        let d = if side == 0 { d.clone() } else { l.clone() - d.clone() };
                        Ok(Position::Along { half: 2 * edge, distance: ExtendedLength::Finite(d) })
                    }
                    ExtendedLength::Infinite if distance.is_infinite() => {
                        Ok(Position::Along { half: 2 * edge, distance: ExtendedLength::Infinite })
                    }
                    ExtendedLength::Infinite => Ok(p.clone()),
                },
            }
        }
    }
}

/// Drops vertex `v`, shifting higher vertex ids down.
fn drop_vertex(weights: &mut Vec<u32>, ends: &mut [[usize; 2]], legs: &mut [usize], v: usize) {
    weights.remove(v);
    for u in ends.iter_mut().flatten().chain(legs.iter_mut()) {
        debug_assert_ne!(*u, v);
        if *u > v {
            *u -= 1;
        }
    }
}

/// `π^trop`: removes the last leg and stabilizes, returning the point `p_v`
/// of the result that the leg was attached to.
pub fn forget<S: Scalar>(c: &TropicalCurve<S>) -> Result<(TropicalCurve<S>, Position<S>)> {
    let graph = c.graph();
    let total = graph.num_legs();
    if total == 0 {
        return Err(Error::Precondition("forget needs a curve with at least one leg".into()));
    }
    check_stable_range(c.genus()?, total - 1)?;
    if !c.is_stable() {
        return Err(Error::NotStable);
    }
    let v = graph.leg_vertex(total - 1);
    let mut weights = graph.weights().to_vec();
    let mut ends = graph.edges().to_vec();
    let mut lengths = c.lengths().to_vec();
    let mut legs = graph.legs().to_vec();
    legs.pop();
    let star = WeightedGraph::new(weights.clone(), ends.clone(), legs.clone())?;
    if star.vertex_is_stable(v) {
        return Ok((TropicalCurve::new(star, lengths)?, Position::Vertex(v)));
    }

    let ne = graph.num_edges();
    match star.incident_halves(v)[..] {
        [h, leg_half] if h < 2 * ne && leg_half >= 2 * ne => {
            let (e1, side) = (h / 2, h % 2);
            let v1 = ends[e1][1 - side];
            let l1 = lengths.remove(e1);
            ends.remove(e1);
            let leg = leg_half - 2 * ne;
            legs[leg] = v1;
            drop_vertex(&mut weights, &mut ends, &mut legs, v);
            let curve = TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)?;
            let half = curve.graph().leg_half(leg);
            Ok((curve, Position::Along { half, distance: l1 }))
        }
        [h1, h2] if h2 < 2 * ne && h1 / 2 != h2 / 2 => {
            let (e1, e2) = (h1 / 2, h2 / 2);
            let v1 = ends[e1][1 - h1 % 2];
            let v2 = ends[e2][1 - h2 % 2];
            let (l1, l2) = (lengths[e1].clone(), lengths[e2].clone());
            for e in [e2, e1] {
                ends.remove(e);
                lengths.remove(e);
            }
            ends.push([v1, v2]);
            lengths.push(l1.clone() + l2.clone());
            drop_vertex(&mut weights, &mut ends, &mut legs, v);
            let merged = ends.len() - 1;
            let position = if l1.is_finite() {
                Position::Along { half: 2 * merged, distance: l1 }
            } else if l2.is_finite() {
                Position::Along { half: 2 * merged + 1, distance: l2 }
            } else {
                Position::Along { half: 2 * merged, distance: ExtendedLength::Infinite }
            };
            Ok((TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)?, position))
        }
        _ => unreachable!("a stable curve loses stability at one bivalent weight-0 vertex"),
    }
}

/// The section `σ_i`: leg `i` (0-based) moves to a new weight-0 vertex
/// joined to its old vertex by an edge of length `∞`; the new last leg sits
/// on the same new vertex.
pub fn section<S: Scalar>(c: &TropicalCurve<S>, i: usize) -> Result<TropicalCurve<S>> {
    let graph = c.graph();
    let n = graph.num_legs();
    if i >= n {
        return Err(Error::LegOutOfRange { index: i + 1, count: n });
    }
    if !c.is_stable() {
        return Err(Error::NotStable);
    }
    let v0 = graph.num_vertices();
    let mut weights = graph.weights().to_vec();
    weights.push(0);
    let mut ends = graph.edges().to_vec();
    ends.push([graph.leg_vertex(i), v0]);
    let mut lengths = c.lengths().to_vec();
    lengths.push(ExtendedLength::Infinite);
    let mut legs = graph.legs().to_vec();
    legs[i] = v0;
    legs.push(v0);
    TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)
}

/// The curve `Γ_p`: a new last leg attached at `p`, subdividing the edge or
/// leg through `p` at a new weight-0 vertex when `p` is not a vertex.
pub fn attach_leg<S: Scalar>(c: &TropicalCurve<S>, p: &Position<S>) -> Result<TropicalCurve<S>> {
    let p = normalize_position(c, p)?;
    let graph = c.graph();
    let mut weights = graph.weights().to_vec();
    let mut ends = graph.edges().to_vec();
    let mut lengths = c.lengths().to_vec();
    let mut legs = graph.legs().to_vec();
    match p {
        Position::Vertex(v) => legs.push(v),
        Position::Along { half, distance } => {
            let w = weights.len();
            weights.push(0);
            match graph.half_edge(half) {
                HalfEdge::Leg(i) => {
                    ends.push([legs[i], w]);
                    lengths.push(distance);
                    legs[i] = w;
                }
                HalfEdge::Edge { edge, side } => {
                    let (a, b) = (ends[edge][side], ends[edge][1 - side]);
                    let rest = match (&lengths[edge], &distance) {
                        (ExtendedLength::Finite(l), ExtendedLength::Finite(d)) => ExtendedLength::Finite(l.clone() - d.clone()),
                        _ => ExtendedLength::Infinite,
                    };
                    ends[edge] = [a, w];
                    lengths[edge] = distance;
                    ends.push([w, b]);
                    lengths.push(rest);
                }
            }
            legs.push(w);
        }
    }
    TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)
}

fn check_glue_length<S: Scalar>(x: &ExtendedLength<S>) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidLength(format!("clutching and gluing lengths must be positive, got {x}")))
    }
}

/// `κ^trop[x, y]` with an explicit leg order: the last legs of `c1` and `c2`
/// become an edge of length `x + y`; the remaining legs of `c1` then of `c2`
/// are renumbered by `leg_order` (`leg_order[k]` is the new index of the
/// `k`-th of them).
pub fn clutch_labeled<S: Scalar>(
    c1: &TropicalCurve<S>,
    c2: &TropicalCurve<S>,
    x: &ExtendedLength<S>,
    y: &ExtendedLength<S>,
    leg_order: &[usize],
) -> Result<TropicalCurve<S>> {
    check_glue_length(x)?;
    check_glue_length(y)?;
    for c in [c1, c2] {
        if c.num_legs() == 0 {
            return Err(Error::Precondition("clutching needs a last leg on both curves".into()));
        }
        if !c.is_stable() {
            return Err(Error::NotStable);
        }
    }
    let (g1, g2) = (c1.graph(), c2.graph());
    let (n1, n2) = (g1.num_legs() - 1, g2.num_legs() - 1);
    let order = crate::perm::Perm::from_images(leg_order.to_vec())
        .filter(|p| p.degree() == n1 + n2)
        .ok_or_else(|| Error::Precondition(format!("leg order must be a permutation of 0..{}", n1 + n2)))?;
    let off = g1.num_vertices();
    let mut weights = g1.weights().to_vec();
    weights.extend_from_slice(g2.weights());
    let mut ends = g1.edges().to_vec();
    ends.extend(g2.edges().iter().map(|&[a, b]| [a + off, b + off]));
    ends.push([g1.leg_vertex(n1), g2.leg_vertex(n2) + off]);
    let mut lengths = c1.lengths().to_vec();
    lengths.extend_from_slice(c2.lengths());
    lengths.push(x.clone() + y.clone());
    let joined: Vec<usize> = g1.legs()[..n1]
        .iter()
        .copied()
        .chain(g2.legs()[..n2].iter().map(|&v| v + off))
        .collect();
    let legs = order.permute(&joined);
    TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)
}

/// `κ^trop[x, y]`: legs of `c1` keep their indices, legs of `c2` follow.
pub fn clutch_xy<S: Scalar>(
    c1: &TropicalCurve<S>,
    c2: &TropicalCurve<S>,
    x: &ExtendedLength<S>,
    y: &ExtendedLength<S>,
) -> Result<TropicalCurve<S>> {
    let n = c1.num_legs() + c2.num_legs();
    let identity: Vec<usize> = (0..n.saturating_sub(2)).collect();
    clutch_labeled(c1, c2, x, y, &identity)
}

/// `κ^trop`: the new bridge has length `∞`.
pub fn clutch<S: Scalar>(c1: &TropicalCurve<S>, c2: &TropicalCurve<S>) -> Result<TropicalCurve<S>> {
    clutch_xy(c1, c2, &ExtendedLength::Infinite, &ExtendedLength::Infinite)
}

/// `γ^trop[x, y]`: the last two legs become an edge of length `x + y`.
pub fn glue_xy<S: Scalar>(c: &TropicalCurve<S>, x: &ExtendedLength<S>, y: &ExtendedLength<S>) -> Result<TropicalCurve<S>> {
    check_glue_length(x)?;
    check_glue_length(y)?;
    let graph = c.graph();
    let total = graph.num_legs();
    if total < 2 {
        return Err(Error::Precondition("gluing needs two legs".into()));
    }
    if !c.is_stable() {
        return Err(Error::NotStable);
    }
    let mut ends = graph.edges().to_vec();
    ends.push([graph.leg_vertex(total - 2), graph.leg_vertex(total - 1)]);
    let mut lengths = c.lengths().to_vec();
    lengths.push(x.clone() + y.clone());
    let legs = graph.legs()[..total - 2].to_vec();
    TropicalCurve::new(WeightedGraph::new(graph.weights().to_vec(), ends, legs)?, lengths)
}

/// `γ^trop`: the new edge has length `∞`.
pub fn glue<S: Scalar>(c: &TropicalCurve<S>) -> Result<TropicalCurve<S>> {
    glue_xy(c, &ExtendedLength::Infinite, &ExtendedLength::Infinite)
}

/// A preimage of a boundary curve under gluing or clutching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryWitness<S> {
    Glue(TropicalCurve<S>),
    /// `leg_order` renumbers the legs as in [`clutch_labeled`]; the two
    /// sides of a bridge need not carry the first `n₁` legs.
    Clutch { first: TropicalCurve<S>, second: TropicalCurve<S>, leg_order: Vec<usize> },
}

impl<S: Scalar> BoundaryWitness<S> {
    /// The curve obtained by applying the map the witness is for.
    pub fn apply(&self) -> Result<TropicalCurve<S>> {
        match self {
            BoundaryWitness::Glue(c) => glue(c),
            BoundaryWitness::Clutch { first, second, leg_order } => {
                clutch_labeled(first, second, &ExtendedLength::Infinite, &ExtendedLength::Infinite, leg_order)
            }
        }
    }
}

/// Cuts the first infinite edge of `c`; see [`cover_boundary_at`].
pub fn cover_boundary<S: Scalar>(c: &TropicalCurve<S>) -> Result<BoundaryWitness<S>> {
    let (infinite, _) = c.infinite_part();
    let e = *infinite.first().ok_or(Error::NoInfiniteEdge)?;
    cover_boundary_at(c, e)
}

/// Cuts the infinite edge `e` into two new last legs. A non-bridge yields
/// the preimage under gluing; a bridge splits the curve into the two
/// clutching factors, the first being the side holding the lowest leg (or
/// the side of `ends(e)[0]` if neither has legs).
pub fn cover_boundary_at<S: Scalar>(c: &TropicalCurve<S>, e: usize) -> Result<BoundaryWitness<S>> {
    let graph = c.graph();
    if e >= graph.num_edges() {
        return Err(Error::UnknownEdge(e));
    }
    if c.length(e).is_finite() {
        return Err(Error::NoInfiniteEdge);
    }
    if !c.is_stable() {
        return Err(Error::NotStable);
    }
    let [v1, v2] = graph.ends(e);
    if !graph.is_bridge(e)? {
        let mut ends = graph.edges().to_vec();
        let mut lengths = c.lengths().to_vec();
        ends.remove(e);
        lengths.remove(e);
        let mut legs = graph.legs().to_vec();
        legs.extend([v1, v2]);
        let cut = TropicalCurve::new(WeightedGraph::new(graph.weights().to_vec(), ends, legs)?, lengths)?;
        return Ok(BoundaryWitness::Glue(cut));
    }

    let side = graph.component_of(v1, Some(e));
    let lowest = |in_side: bool| graph.legs().iter().position(|&v| side[v] == in_side);
    let first_is_v1 = match (lowest(true), lowest(false)) {
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => true,
    };
    let part = |in_side: bool, attach: usize| -> Result<(TropicalCurve<S>, Vec<usize>)> {
        let vertices: Vec<usize> = (0..graph.num_vertices()).filter(|&v| side[v] == in_side).collect();
        let mut index = vec![usize::MAX; graph.num_vertices()];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let weights = vertices.iter().map(|&v| graph.weight(v)).collect();
        let mut ends = Vec::new();
        let mut lengths = Vec::new();
        for f in (0..graph.num_edges()).filter(|&f| f != e && side[graph.ends(f)[0]] == in_side) {
            let [a, b] = graph.ends(f);
            ends.push([index[a], index[b]]);
            lengths.push(c.length(f).clone());
        }
        let old_legs: Vec<usize> = (0..graph.num_legs()).filter(|&i| side[graph.leg_vertex(i)] == in_side).collect();
        let mut legs: Vec<usize> = old_legs.iter().map(|&i| index[graph.leg_vertex(i)]).collect();
        legs.push(index[attach]);
        Ok((TropicalCurve::new(WeightedGraph::new(weights, ends, legs)?, lengths)?, old_legs))
    };
    let (first_side, first_attach, second_attach) = if first_is_v1 { (true, v1, v2) } else { (false, v2, v1) };
    let (first, mut leg_order) = part(first_side, first_attach)?;
    let (second, second_legs) = part(!first_side, second_attach)?;
    leg_order.extend(second_legs);
    Ok(BoundaryWitness::Clutch { first, second, leg_order })
}

/// An edge of `Γ / Aut(Γ)`. A folded edge is the image of an edge whose two
/// halves are exchanged by an automorphism; it runs from the image of the
/// edge's end to a new fold vertex and has half the length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientEdge<S> {
    pub ends: [usize; 2],
    pub length: ExtendedLength<S>,
    pub folded: bool,
    /// The edge of the curve chosen to represent the orbit.
    pub representative: usize,
}

/// The metric graph `Γ / Aut(Γ)`. Vertices are the vertex orbits followed by
/// the fold points, which have weight 0 and valence 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMetricGraph<S> {
    pub weights: Vec<u32>,
    pub edges: Vec<QuotientEdge<S>>,
    pub legs: Vec<usize>,
    /// Image of each vertex of the curve.
    pub vertex_class: Vec<usize>,
    /// Image of each edge of the curve.
    pub edge_class: Vec<usize>,
}

impl<S: Scalar> QuotientMetricGraph<S> {
    pub fn total_length(&self) -> ExtendedLength<S> {
        ExtendedLength::sum(self.edges.iter().map(|e| &e.length))
    }

    /// Number of fold vertices.
    pub fn folds(&self) -> usize {
        self.edges.iter().filter(|e| e.folded).count()
    }
}

pub fn quotient_by_automorphisms<S: Scalar>(c: &TropicalCurve<S>) -> QuotientMetricGraph<S> {
    let graph = c.graph();
    let auts = c.automorphisms();
    let nv = graph.num_vertices();
    let mut vertex_class = vec![usize::MAX; nv];
    let mut weights = Vec::new();
    for v in 0..nv {
        if vertex_class[v] == usize::MAX {
            let k = weights.len();
            weights.push(graph.weight(v));
            for a in &auts {
                vertex_class[a.vertex_map[v]] = k;
            }
        }
    }
    let ne = graph.num_edges();
    let mut edge_class = vec![usize::MAX; ne];
    let mut edges = Vec::new();
    let mut pending = Vec::new();
    for e in 0..ne {
        if edge_class[e] != usize::MAX {
            continue;
        }
        let k = edges.len();
        let mut folded = false;
        for a in &auts {
            edge_class[a.half_map[2 * e] / 2] = k;
            folded |= a.half_map[2 * e] == 2 * e + 1;
        }
        let [x, y] = graph.ends(e);
        if folded {
            pending.push(k);
            edges.push(QuotientEdge {
                ends: [vertex_class[x], usize::MAX],
                length: c.length(e).half(),
                folded,
                representative: e,
            });
        } else {
            edges.push(QuotientEdge {
                ends: [vertex_class[x], vertex_class[y]],
                length: c.length(e).clone(),
                folded,
                representative: e,
            });
        }
    }
    for k in pending {
        edges[k].ends[1] = weights.len();
        weights.push(0);
    }
    let legs = graph.legs().iter().map(|&v| vertex_class[v]).collect();
    QuotientMetricGraph { weights, edges, legs, vertex_class, edge_class }
}

/// Whether two positions of `c` lie in one `Aut(c)`-orbit, i.e. are the same
/// point of `Γ / Aut(Γ)`.
pub fn same_quotient_point<S: Scalar>(c: &TropicalCurve<S>, p: &Position<S>, q: &Position<S>) -> Result<bool> {
    let q = normalize_position(c, q)?;
    normalize_position(c, p)?;
    for a in c.automorphisms() {
        if normalize_position(c, &p.transport(&a))? == q {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of [`fiber_check`], with the first violation found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberCheck {
    Pass,
    /// Attaching a leg at this sample and forgetting it again does not
    /// return the base curve with the same point.
    RoundTrip(usize),
    /// These two samples agree in the quotient but give different moduli
    /// points, or the other way around.
    Mismatch(usize, usize),
}

impl FiberCheck {
    pub fn passed(&self) -> bool {
        *self == FiberCheck::Pass
    }
}

/// Checks pointwise that the fiber of `π^trop` over `[c]` is `c / Aut(c)`:
/// every sampled point `p` gives a curve `Γ_p` in `space_next` that forgets
/// back to `(c, p)`, and two samples give the same moduli point exactly when
/// they are identified in the quotient.
pub fn fiber_check<S: Scalar>(
    space_next: &ModuliSpace,
    space: &ModuliSpace,
    c: &TropicalCurve<S>,
    samples: &[Position<S>],
) -> Result<FiberCheck> {
    if !c.is_stable() {
        return Err(Error::NotStable);
    }
    space.locate(c)?;
    let mut points = Vec::with_capacity(samples.len());
    for (k, p) in samples.iter().enumerate() {
        let p = normalize_position(c, p)?;
        let attached = attach_leg(c, &p)?;
        if !attached.is_stable() {
            return Ok(FiberCheck::RoundTrip(k));
        }
        let (base, image) = forget(&attached)?;
        let back = c
            .isomorphisms_to(&base)
            .iter()
            .any(|iso| normalize_position(&base, &p.transport(iso)).ok() == normalize_position(&base, &image).ok());
        if !back {
            return Ok(FiberCheck::RoundTrip(k));
        }
        points.push(space_next.locate(&attached)?);
    }
    for a in 0..samples.len() {
        for b in a + 1..samples.len() {
            let same = same_quotient_point(c, &samples[a], &samples[b])?;
            if same != (points[a] == points[b]) {
                return Ok(FiberCheck::Mismatch(a, b));
            }
        }
    }
    Ok(FiberCheck::Pass)
}

/// Sample positions covering `c / Aut(c)`: every vertex, the quarter, half
/// and three-quarter points of every edge (at distances 1, 2 and `∞` on
/// infinite edges), and points at distance 1 and `∞` on every leg.
pub fn sample_positions<S: Scalar>(c: &TropicalCurve<S>) -> Vec<Position<S>> {
    let g = c.graph();
    let mut out: Vec<Position<S>> = (0..g.num_vertices()).map(Position::Vertex).collect();
    for e in 0..g.num_edges() {
        match c.length(e) {
            ExtendedLength::Finite(l) => {
                for (p, q) in [(1, 4), (1, 2), (3, 4)] {
                    let d = l.clone() * S::from_fraction(p, q);
                    out.push(Position::Along { half: 2 * e, distance: ExtendedLength::Finite(d) });
                }
            }
            ExtendedLength::Infinite => {
                for h in [2 * e, 2 * e + 1] {
                    for d in [1, 2] {
                        out.push(Position::Along { half: h, distance: ExtendedLength::integer(d) });
                    }
                }
                out.push(Position::Along { half: 2 * e, distance: ExtendedLength::Infinite });
            }
        }
    }
    for i in 0..g.num_legs() {
        for d in [ExtendedLength::integer(1), ExtendedLength::Infinite] {
            out.push(Position::Along { half: g.leg_half(i), distance: d });
        }
    }
    out
}
