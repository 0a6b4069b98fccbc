//! The moduli spaces `M_{g,n}^trop ⊂ M̄_{g,n}^trop` as generalized cone
//! complexes: one orthant `σ_G = ℝ_{≥0}^{E(G)}` per stable graph class, glued
//! along the faces where contracted edges have length zero, modulo the edge
//! action of `Aut(G)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::cone::{reduce_diagram, Diagram, ExtendedPoint, FaceMorphism, GeneralizedComplex, OrthantCone};
use crate::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::graph::{
    automorphism_group, canonical_labeling, enumerate_stable_graphs, CanonicalForm, WeightedGraph,
};
use crate::perm::Perm;
use crate::scalar::{ExtendedLength, Scalar};

/// One stratum `σ_G°/H_G`.
#[derive(Clone, Debug)]
pub struct Stratum {
    /// Canonical representative; cone coordinates are its edge ids.
    pub graph: WeightedGraph,
    pub form: CanonicalForm,
    /// `|Aut(G)|`, counted on half-edges.
    pub aut_order: usize,
    /// `H_G`: the image of `Aut(G)` in the permutations of `E(G)`.
    pub monodromy: Vec<Perm>,
}

impl Stratum {
    pub fn dim(&self) -> usize {
        self.graph.num_edges()
    }
}

#[derive(Clone, Debug)]
pub struct ModuliSpace {
    g: u32,
    n: usize,
    strata: Vec<Stratum>,
    index: HashMap<CanonicalForm, usize>,
    /// `j_ϖ` for every single-edge contraction `G → G/e`, from the cone of
    /// `G/e` to the cone of `G`.
    contraction_arrows: Vec<FaceMorphism>,
    complex: GeneralizedComplex,
}

/// A point of `M̄_{g,n}^trop`: a stratum and its cone coordinates, least in
/// their `H_G`-orbit. All coordinates are positive or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuliPoint<S> {
    pub stratum: usize,
    pub lengths: Vec<ExtendedLength<S>>,
}

/// The closure order on strata: `G ≤ G′` iff `G′` contracts onto `G`.
#[derive(Clone, Debug)]
pub struct StrataPoset {
    /// `(lower, upper)` pairs differing by one edge contraction.
    pub covers: Vec<(usize, usize)>,
    leq: Vec<Vec<bool>>,
}

impl StrataPoset {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.leq.len()).find(|&a| (0..self.leq.len()).all(|b| self.leq[a][b]))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.leq.len())
            .filter(|&a| (0..self.leq.len()).all(|b| a == b || !self.leq[a][b]))
            .collect()
    }
}

impl ModuliSpace {
    pub fn build(g: u32, n: usize) -> Result<Self> {
        let graphs = enumerate_stable_graphs(g, n)?;
        let mut strata = Vec::with_capacity(graphs.len());
        let mut index = HashMap::with_capacity(graphs.len());
        for (i, graph) in graphs.into_iter().enumerate() {
            let form = canonical_labeling(&graph).form;
            let aut = automorphism_group(&graph);
            index.insert(form.clone(), i);
            strata.push(Stratum { aut_order: aut.order(), monodromy: aut.edge_image(), form, graph });
        }

        let mut contraction_arrows = Vec::new();
        for (t, stratum) in strata.iter().enumerate() {
            for e in 0..stratum.dim() {
                let contraction = stratum.graph.contract(&[e])?;
                let lab = canonical_labeling(&contraction.target);
                let s = index[&lab.form];
                let back = lab.iso.inverse().edge_map(lab.graph.num_edges());
                let map = back.iter().map(|&f| contraction.edge_injection[f]).collect();
                contraction_arrows.push(FaceMorphism { source: s, target: t, map });
            }
        }

        let mut arrows = contraction_arrows.clone();
        for (t, stratum) in strata.iter().enumerate() {
            for h in stratum.monodromy.iter().filter(|h| !h.is_identity()) {
                arrows.push(FaceMorphism { source: t, target: t, map: h.images().to_vec() });
            }
        }
        let cones = strata
            .iter()
            .map(|s| OrthantCone::standard(s.dim()))
            .collect();
        let complex = reduce_diagram(&Diagram { cones, arrows })?;
        debug_assert_eq!(complex.num_cones(), strata.len());
        Ok(ModuliSpace { g, n, strata, index, contraction_arrows, complex })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn num_legs(&self) -> usize {
        self.n
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &Stratum {
        &self.strata[i]
    }

    pub fn stratum_of(&self, form: &CanonicalForm) -> Option<usize> {
        self.index.get(form).copied()
    }

    pub fn contraction_arrows(&self) -> &[FaceMorphism] {
        &self.contraction_arrows
    }

    pub fn complex(&self) -> &GeneralizedComplex {
        &self.complex
    }

    /// `H_G` as a sorted list of edge permutations.
    pub fn monodromy(&self, i: usize) -> &[Perm] {
        &self.strata[i].monodromy
    }

    /// The unique stratum of dimension 0, the point `•_{g,n}`.
    pub fn point_stratum(&self) -> usize {
        self.strata.iter().position(|s| s.dim() == 0).expect("the edge-free graph is always enumerated")
    }

    pub fn max_dim(&self) -> usize {
        self.strata.iter().map(|s| s.dim()).max().unwrap_or(0)
    }

    /// Number of strata of each dimension.
    pub fn f_vector(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for s in &self.strata {
            *out.entry(s.dim()).or_insert(0) += 1;
        }
        out
    }

    /// The point with coordinates `coords` on the cone of stratum `i`; zero
    /// coordinates move it into the stratum of the corresponding contraction.
    pub fn point<S: Scalar>(&self, i: usize, coords: Vec<ExtendedLength<S>>) -> Result<ModuliPoint<S>> {
        let p = self.complex.normalize(&self.complex.point(i, coords)?)?;
        Ok(ModuliPoint { stratum: p.cone, lengths: p.coords })
    }

    /// The moduli point of a curve of type `(g, n)`, after stabilization.
    pub fn locate<S: Scalar>(&self, curve: &TropicalCurve<S>) -> Result<ModuliPoint<S>> {
        let genus = curve.genus()?;
        if genus != self.g || curve.num_legs() != self.n {
            return Err(Error::TypeMismatch { expected_g: self.g, expected_n: self.n, g: genus, n: curve.num_legs() });
        }
        let stable = curve.stabilize()?;
        let lab = canonical_labeling(stable.graph());
        let s = self.index[&lab.form];
        let mut coords = vec![ExtendedLength::zero(); stable.graph().num_edges()];
        for (e, f) in lab.iso.edge_map(coords.len()).into_iter().enumerate() {
            coords[f] = stable.length(e).clone();
        }
        self.point(s, coords)
    }

    /// The curve on the stratum representative carrying the point's lengths.
    pub fn curve<S: Scalar>(&self, p: &ModuliPoint<S>) -> Result<TropicalCurve<S>> {
        TropicalCurve::new(self.strata[p.stratum].graph.clone(), p.lengths.clone())
    }

    pub fn point_equal<S: Scalar>(&self, p: &ModuliPoint<S>, q: &ModuliPoint<S>) -> Result<bool> {
        self.complex.point_equal(
            &ExtendedPoint { cone: p.stratum, coords: p.lengths.clone() },
            &ExtendedPoint { cone: q.stratum, coords: q.lengths.clone() },
        )
    }

    pub fn strata_poset(&self) -> StrataPoset {
        let k = self.strata.len();
        let mut covers: Vec<(usize, usize)> =
            self.contraction_arrows.iter().map(|a| (a.source, a.target)).collect();
        covers.sort_unstable();
        covers.dedup();
        let mut leq = vec![vec![false; k]; k];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        // strata are sorted by dimension and covers raise it by one
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.strata[i].dim()));
        for &upper in &order {
            for &(lower, u) in &covers {
                if u == upper {
                    for b in 0..k {
                        if leq[upper][b] {
                            leq[lower][b] = true;
                        }
                    }
                }
            }
        }
        StrataPoset { covers, leq }
    }

    /// Hasse diagram of the strata poset in DOT, one node per stratum.
    pub fn poset_dot(&self) -> String {
        let poset = self.strata_poset();
        let mut out = format!("digraph strata_{}_{} {{\n", self.g, self.n);
        for (i, s) in self.strata.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"dim:{} order:{}\"];", s.dim(), s.monodromy.len());
        }
        for (a, b) in poset.covers {
            let _ = writeln!(out, "  s{a} -> s{b};");
        }
        out.push_str("}\n");
        out
    }
}
