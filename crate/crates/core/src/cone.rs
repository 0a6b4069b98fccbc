//! Orthant cones, their extensions by faces at infinity, and generalized cone
//! complexes presented by finite diagrams of face morphisms.
//!
//! A diagram is reduced by splitting every cone into its open faces (a cone
//! and a subset of its coordinates), gluing open faces along the arrows, and
//! keeping one representative face per glued class. Loops in the gluing
//! graph become the symmetry group `H_i` of the representative, so the
//! colimit is the disjoint union of the open representative cones modulo
//! their groups.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::{generate_group, Perm};
use crate::scalar::{ExtendedLength, Scalar};

/// Largest cone dimension accepted by [`reduce_diagram`]; every cone is
/// split into `2^dim` open faces.
pub const MAX_CONE_DIM: usize = 24;

/// The orthant `(ℝ_{≥0})^labels`, with its lattice `ℤ^labels`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrthantCone {
    labels: Vec<u32>,
}

impl OrthantCone {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!("repeated cone label in {labels:?}")));
        }
        Ok(OrthantCone { labels })
    }

    /// The cone with labels `0..dim`.
    pub fn standard(dim: usize) -> Self {
        OrthantCone { labels: (0..dim as u32).collect() }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// A point of an extended cone `σ̄`, coordinates listed in label order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedPoint<S> {
    pub cone: usize,
    pub coords: Vec<ExtendedLength<S>>,
}

/// The locally closed face `F(τ, τ′)` of an extended orthant: points with
/// coordinates `∞` exactly on `τ′` and nonzero exactly on `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceAtInfinity {
    pub tau: Vec<u32>,
    pub tau_prime: Vec<u32>,
}

/// The face at infinity whose relative interior contains the point.
pub fn classify_point<S: Scalar>(cone: &OrthantCone, coords: &[ExtendedLength<S>]) -> FaceAtInfinity {
    let mut tau = Vec::new();
    let mut tau_prime = Vec::new();
    for (&label, x) in cone.labels.iter().zip(coords) {
        if !x.is_zero() {
            tau.push(label);
        }
        if x.is_infinite() {
            tau_prime.push(label);
        }
    }
    tau.sort_unstable();
    tau_prime.sort_unstable();
    FaceAtInfinity { tau, tau_prime }
}

fn check_coords<S: Scalar>(dim: usize, coords: &[ExtendedLength<S>]) -> Result<()> {
    if coords.len() != dim {
        return Err(Error::InvalidLength(format!("{} coordinates for a cone of dimension {dim}", coords.len())));
    }
    if let Some(x) = coords.iter().find(|x| x.is_finite() && !x.is_zero() && !x.is_positive()) {
        return Err(Error::InvalidLength(format!("negative coordinate {x}")));
    }
    Ok(())
}

/// An isomorphism of `source` onto the face of `target` spanned by the
/// positions `map[0], map[1], …`; the remaining target coordinates are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceMorphism {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
}

impl FaceMorphism {
    /// Image of a point of the source cone.
    pub fn apply<S: Scalar>(&self, coords: &[ExtendedLength<S>], target_dim: usize) -> Vec<ExtendedLength<S>> {
        let mut out = vec![ExtendedLength::zero(); target_dim];
        for (i, &j) in self.map.iter().enumerate() {
            out[j] = coords[i].clone();
        }
        out
    }
}

/// A finite diagram of orthant cones and face morphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub cones: Vec<OrthantCone>,
    pub arrows: Vec<FaceMorphism>,
}

impl Diagram {
    fn validate(&self) -> Result<()> {
        for cone in &self.cones {
            if cone.dim() > MAX_CONE_DIM {
                return Err(Error::Precondition(format!("cone dimension {} exceeds {MAX_CONE_DIM}", cone.dim())));
            }
        }
        for (k, a) in self.arrows.iter().enumerate() {
            let src = self.cones.get(a.source).ok_or(Error::UnknownCone(a.source))?;
            let tgt = self.cones.get(a.target).ok_or(Error::UnknownCone(a.target))?;
            if a.map.len() != src.dim() {
                return Err(Error::InvalidArrow(format!(
                    "arrow {k} maps {} coordinates from a cone of dimension {}",
                    a.map.len(),
                    src.dim()
                )));
            }
            let mut seen = vec![false; tgt.dim()];
            for &j in &a.map {
                if j >= tgt.dim() || seen[j] {
                    return Err(Error::InvalidArrow(format!(
                        "arrow {k} is not injective into a cone of dimension {}",
                        tgt.dim()
                    )));
                }
                seen[j] = true;
            }
        }
        Ok(())
    }
}

fn full_mask(dim: usize) -> u64 {
    (1u64 << dim) - 1
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// The submask of `outer` selecting its set bits whose rank is in `inner`.
fn expand(outer: u64, inner: u64) -> u64 {
    bits(outer)
        .into_iter()
        .enumerate()
        .filter(|&(k, _)| inner >> k & 1 == 1)
        .fold(0, |m, (_, b)| m | 1 << b)
}

fn image_mask(p: &Perm, mask: u64) -> u64 {
    bits(mask).into_iter().fold(0, |m, b| m | 1 << p.apply(b))
}

fn orbit_min<T: Ord + Clone>(group: &[Perm], values: &[T]) -> Vec<T> {
    group
        .iter()
        .map(|h| h.permute(values))
        .min()
        .unwrap_or_else(|| values.to_vec())
}

/// The colimit of a reduced diagram: one cone per class of open faces, the
/// face inclusions between them, and the symmetry group of each cone.
#[derive(Clone, Debug)]
pub struct GeneralizedComplex {
    cones: Vec<OrthantCone>,
    self_groups: Vec<Vec<Perm>>,
    face_arrows: Vec<FaceMorphism>,
    /// Representative open face `(raw cone, mask)` of each cone.
    reps: Vec<(usize, u64)>,
    raw_dims: Vec<usize>,
    offsets: Vec<usize>,
    node_class: Vec<usize>,
    /// Bijection from the local positions of each open face onto the
    /// positions of its class representative.
    node_to_rep: Vec<Perm>,
}

/// Reduces a diagram to one cone per isomorphism class of faces, with
/// isomorphisms collected into self-symmetry groups and all faces present.
///
/// Cones of the diagram that are not identified with a face of an earlier
/// cone keep their relative order at the front of the result.
pub fn reduce_diagram(diagram: &Diagram) -> Result<GeneralizedComplex> {
    diagram.validate()?;
    let raw_dims: Vec<usize> = diagram.cones.iter().map(|c| c.dim()).collect();
    let mut offsets = Vec::with_capacity(raw_dims.len());
    let mut total = 0usize;
    for &d in &raw_dims {
        offsets.push(total);
        total += 1 << d;
    }
    let node_of = |c: usize, mask: u64| offsets[c] + mask as usize;
    let mut node_cone = vec![0; total];
    for (c, &d) in raw_dims.iter().enumerate() {
        for mask in 0..1u64 << d {
            node_cone[node_of(c, mask)] = c;
        }
    }

    // every arrow glues each open face of its source to an open face of its target
    let mut adjacency: Vec<Vec<(usize, Perm)>> = vec![Vec::new(); total];
    for a in &diagram.arrows {
        for mask in 0..1u64 << raw_dims[a.source] {
            let image = bits(mask).into_iter().fold(0u64, |m, s| m | 1 << a.map[s]);
            let beta: Vec<usize> = bits(mask)
                .into_iter()
                .map(|s| (image & ((1u64 << a.map[s]) - 1)).count_ones() as usize)
                .collect();
            let beta = Perm::from_images(beta).expect("injective arrow restricts to a bijection");
            let (u, v) = (node_of(a.source, mask), node_of(a.target, image));
            adjacency[v].push((u, beta.inverse()));
            adjacency[u].push((v, beta));
        }
    }

    let mut component = vec![usize::MAX; total];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..total {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        component[start] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            for &(v, _) in &adjacency[u] {
                if component[v] == usize::MAX {
                    component[v] = id;
                    members.push(v);
                }
            }
            i += 1;
        }
        components.push(members);
    }

    let key = |node: usize| {
        let c = node_cone[node];
        let mask = (node - offsets[c]) as u64;
        (mask != full_mask(raw_dims[c]), c, mask)
    };
    let mut classes: Vec<(usize, Vec<usize>)> = components
        .into_iter()
        .map(|members| (*members.iter().min_by_key(|&&u| key(u)).unwrap(), members))
        .collect();
    classes.sort_by_key(|(rep, _)| key(*rep));

    let mut node_class = vec![0; total];
    let mut node_to_rep: Vec<Option<Perm>> = vec![None; total];
    let mut cones = Vec::with_capacity(classes.len());
    let mut reps = Vec::with_capacity(classes.len());
    let mut self_groups = Vec::with_capacity(classes.len());
    for (class, (rep, members)) in classes.iter().enumerate() {
        let c = node_cone[*rep];
        let mask = (*rep - offsets[c]) as u64;
        let dim = mask.count_ones() as usize;
        let labels = bits(mask).into_iter().map(|b| diagram.cones[c].labels[b]).collect();
        cones.push(OrthantCone { labels });
        reps.push((c, mask));
        for &u in members {
            node_class[u] = class;
        }

        let mut generators = Vec::new();
        node_to_rep[*rep] = Some(Perm::identity(dim));
        let mut queue = VecDeque::from([*rep]);
        while let Some(u) = queue.pop_front() {
            let to_rep_u = node_to_rep[u].clone().unwrap();
            for (v, beta) in &adjacency[u] {
                let through = to_rep_u.compose(&beta.inverse());
                match &node_to_rep[*v] {
                    Some(to_rep_v) => generators.push(through.compose(&to_rep_v.inverse())),
                    None => {
                        node_to_rep[*v] = Some(through);
                        queue.push_back(*v);
                    }
                }
            }
        }
        self_groups.push(generate_group(dim, &generators));
    }
    let node_to_rep: Vec<Perm> = node_to_rep.into_iter().map(|p| p.unwrap()).collect();

    let mut complex = GeneralizedComplex {
        cones,
        self_groups,
        face_arrows: Vec::new(),
        reps,
        raw_dims,
        offsets,
        node_class,
        node_to_rep,
    };
    let mut face_arrows = Vec::new();
    for i in 0..complex.cones.len() {
        let dim = complex.cones[i].dim();
        for mask in 0..full_mask(dim) {
            let (j, to_rep) = complex.face(i, mask);
            let local = bits(mask);
            let from_rep = to_rep.inverse();
            let map = (0..to_rep.degree()).map(|r| local[from_rep.apply(r)]).collect();
            face_arrows.push(FaceMorphism { source: j, target: i, map });
        }
    }
    complex.face_arrows = face_arrows;
    Ok(complex)
}

/// A cone of the barycentric subdivision: the chain of faces
/// `chain[0] ⊊ chain[1] ⊊ … ⊊ full` of a cone of the complex, as position
/// masks. Its rays are the barycenters of the faces in the chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarycentricCone {
    pub cone: usize,
    pub chain: Vec<u64>,
}

impl BarycentricCone {
    pub fn dim(&self) -> usize {
        self.chain.len()
    }
}

/// The barycentric subdivision `B(Σ)`: a genuine cone complex on the same
/// point set, one cone per symmetry class of chains.
#[derive(Clone, Debug)]
pub struct BarycentricSubdivision {
    pub cones: Vec<BarycentricCone>,
    index: HashMap<BarycentricCone, usize>,
    maximal: Vec<usize>,
}

impl BarycentricSubdivision {
    /// Cones coming from full-length chains in maximal cones of the complex.
    pub fn maximal_cones(&self) -> &[usize] {
        &self.maximal
    }

    /// The open cone containing a point, with the point's coefficients on
    /// the barycenters of its chain.
    pub fn locate<S: Scalar>(
        &self,
        complex: &GeneralizedComplex,
        p: &ExtendedPoint<S>,
    ) -> Result<(usize, Vec<ExtendedLength<S>>)> {
        let p = complex.normalize(p)?;
        let mut levels: Vec<&ExtendedLength<S>> = p.coords.iter().collect();
        levels.sort();
        levels.dedup();
        levels.reverse();
        let mut chain = Vec::with_capacity(levels.len());
        let mut coefficients = Vec::with_capacity(levels.len());
        for (k, v) in levels.iter().enumerate() {
            let mask = (0..p.coords.len())
                .filter(|&t| p.coords[t] >= **v)
                .fold(0u64, |m, t| m | 1 << t);
            chain.push(mask);
            coefficients.push(match levels.get(k + 1).and_then(|w| w.as_finite()) {
                Some(w) => v.minus(w),
                None => (*v).clone(),
            });
        }
        let found = self.index[&BarycentricCone { cone: p.cone, chain: chain.clone() }];
        // the stored representative may be a symmetric image; the coefficients
        // are attached to chain levels, so they carry over unchanged
        Ok((found, coefficients))
    }

    /// The point `Σ_k coefficients[k] · barycenter(chain[k])`.
    pub fn point<S: Scalar>(&self, k: usize, coefficients: &[ExtendedLength<S>], complex: &GeneralizedComplex) -> ExtendedPoint<S> {
        let cell = &self.cones[k];
        let dim = complex.cones[cell.cone].dim();
        let mut coords = vec![ExtendedLength::zero(); dim];
        for (mask, c) in cell.chain.iter().zip(coefficients) {
            for t in bits(*mask) {
                coords[t] = coords[t].clone() + c.clone();
            }
        }
        ExtendedPoint { cone: cell.cone, coords }
    }
}

fn chains_ending_at(full: u64) -> Vec<Vec<u64>> {
    if full == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = vec![vec![full]];
    while let Some(chain) = stack.pop() {
        let bottom = chain[0];
        let mut sub = (bottom - 1) & bottom;
        while sub != 0 {
            let mut longer = vec![sub];
            longer.extend_from_slice(&chain);
            stack.push(longer);
            sub = (sub - 1) & bottom;
        }
        out.push(chain);
    }
    out.sort();
    out
}

impl GeneralizedComplex {
    pub fn cones(&self) -> &[OrthantCone] {
        &self.cones
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone(&self, i: usize) -> Result<&OrthantCone> {
        self.cones.get(i).ok_or(Error::UnknownCone(i))
    }

    /// The group `H_i` of coordinate permutations identified with the
    /// identity, sorted, identity first.
    pub fn self_group(&self, i: usize) -> &[Perm] {
        &self.self_groups[i]
    }

    /// Every inclusion of a cone as a proper face of another.
    pub fn face_arrows(&self) -> &[FaceMorphism] {
        &self.face_arrows
    }

    /// The cone of the complex that the given cone of the input diagram was
    /// identified with, and the bijection of coordinates onto it.
    pub fn class_of_input_cone(&self, raw: usize) -> Result<(usize, &Perm)> {
        let dim = *self.raw_dims.get(raw).ok_or(Error::UnknownCone(raw))?;
        let node = self.offsets[raw] + full_mask(dim) as usize;
        Ok((self.node_class[node], &self.node_to_rep[node]))
    }

    /// The face of cone `i` spanned by the positions in `mask`: its class and
    /// the bijection from the face's positions (in increasing order) onto the
    /// positions of that class.
    pub fn face(&self, i: usize, mask: u64) -> (usize, &Perm) {
        let (c, outer) = self.reps[i];
        let node = self.offsets[c] + expand(outer, mask) as usize;
        (self.node_class[node], &self.node_to_rep[node])
    }

    /// Cones that are not a proper face of any cone.
    pub fn maximal_cones(&self) -> Vec<usize> {
        let mut is_face = vec![false; self.cones.len()];
        for a in &self.face_arrows {
            is_face[a.source] = true;
        }
        (0..self.cones.len()).filter(|&i| !is_face[i]).collect()
    }

    /// Validates a point of cone `i`.
    pub fn point<S: Scalar>(&self, i: usize, coords: Vec<ExtendedLength<S>>) -> Result<ExtendedPoint<S>> {
        check_coords(self.cone(i)?.dim(), &coords)?;
        Ok(ExtendedPoint { cone: i, coords })
    }

    /// The normalized point of the complex represented by a point of a cone
    /// of the input diagram.
    pub fn input_point<S: Scalar>(&self, raw: usize, coords: Vec<ExtendedLength<S>>) -> Result<ExtendedPoint<S>> {
        let dim = *self.raw_dims.get(raw).ok_or(Error::UnknownCone(raw))?;
        check_coords(dim, &coords)?;
        let support = (0..dim).filter(|&t| !coords[t].is_zero()).fold(0u64, |m, t| m | 1 << t);
        let node = self.offsets[raw] + support as usize;
        Ok(self.transport(self.node_class[node], &self.node_to_rep[node], support, &coords))
    }

    fn transport<S: Scalar>(&self, class: usize, to_rep: &Perm, support: u64, coords: &[ExtendedLength<S>]) -> ExtendedPoint<S> {
        let local: Vec<ExtendedLength<S>> = bits(support).into_iter().map(|t| coords[t].clone()).collect();
        let moved = to_rep.permute(&local);
        ExtendedPoint { cone: class, coords: orbit_min(&self.self_groups[class], &moved) }
    }

    /// Pushes a point down to the cone of its support face and picks the
    /// least coordinate vector in its symmetry orbit. Two points are equal in
    /// the colimit iff their normal forms agree.
    pub fn normalize<S: Scalar>(&self, p: &ExtendedPoint<S>) -> Result<ExtendedPoint<S>> {
        check_coords(self.cone(p.cone)?.dim(), &p.coords)?;
        let support = (0..p.coords.len()).filter(|&t| !p.coords[t].is_zero()).fold(0u64, |m, t| m | 1 << t);
        let (class, to_rep) = self.face(p.cone, support);
        Ok(self.transport(class, to_rep, support, &p.coords))
    }

    pub fn point_equal<S: Scalar>(&self, p: &ExtendedPoint<S>, q: &ExtendedPoint<S>) -> Result<bool> {
        Ok(self.normalize(p)? == self.normalize(q)?)
    }

    /// The faces at infinity `F(τ, τ′)°` with `τ` a whole cone, one per
    /// symmetry class; together they stratify the extended complex.
    pub fn extended_closure_cells(&self) -> Vec<(usize, FaceAtInfinity)> {
        let mut out = Vec::new();
        for (i, cone) in self.cones.iter().enumerate() {
            let full = full_mask(cone.dim());
            let mut seen = std::collections::BTreeSet::new();
            for sub in 0..=full {
                let least = self.self_groups[i].iter().map(|h| image_mask(h, sub)).min().unwrap();
                if seen.insert(least) {
                    let mut tau = cone.labels.clone();
                    tau.sort_unstable();
                    let mut tau_prime: Vec<u32> = bits(least).into_iter().map(|t| cone.labels[t]).collect();
                    tau_prime.sort_unstable();
                    out.push((i, FaceAtInfinity { tau, tau_prime }));
                }
            }
        }
        out
    }

    pub fn barycentric_subdivision(&self) -> BarycentricSubdivision {
        let maximal_cones = self.maximal_cones();
        let mut cones = Vec::new();
        let mut index = HashMap::new();
        let mut maximal = Vec::new();
        for (i, cone) in self.cones.iter().enumerate() {
            let group = &self.self_groups[i];
            for chain in chains_ending_at(full_mask(cone.dim())) {
                let key = BarycentricCone { cone: i, chain: chain.clone() };
                if index.contains_key(&key) {
                    continue;
                }
                let k = cones.len();
                for h in group {
                    let image = chain.iter().map(|&m| image_mask(h, m)).collect();
                    index.insert(BarycentricCone { cone: i, chain: image }, k);
                }
                if chain.len() == cone.dim() && maximal_cones.contains(&i) {
                    maximal.push(k);
                }
                cones.push(key);
            }
        }
        BarycentricSubdivision { cones, index, maximal }
    }

    /// The input diagram of this complex: its cones, face arrows and one
    /// self-arrow per group element.
    pub fn to_diagram(&self) -> Diagram {
        let mut arrows = self.face_arrows.clone();
        for (i, group) in self.self_groups.iter().enumerate() {
            for h in group.iter().filter(|h| !h.is_identity()) {
                arrows.push(FaceMorphism { source: i, target: i, map: h.images().to_vec() });
            }
        }
        Diagram { cones: self.cones.clone(), arrows }
    }

    pub fn to_json(&self) -> Value {
        let cones: Vec<Value> = self
            .cones
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let group: Vec<&[usize]> = self.self_groups[i].iter().map(|p| p.images()).collect();
                json!({"id": i, "labels": c.labels, "dim": c.dim(), "group": group})
            })
            .collect();
        let arrows: Vec<Value> = self
            .face_arrows
            .iter()
            .map(|a| json!({"src": a.source, "dst": a.target, "map": a.map}))
            .collect();
        json!({"cones": cones, "arrows": arrows})
    }

    /// Hasse diagram of the face poset, edges pointing from a face to the
    /// cones it is a facet of.
    pub fn face_poset_dot(&self) -> String {
        let mut covers: Vec<(usize, usize)> = self
            .face_arrows
            .iter()
            .filter(|a| self.cones[a.source].dim() + 1 == self.cones[a.target].dim())
            .map(|a| (a.source, a.target))
            .collect();
        covers.sort_unstable();
        covers.dedup();
        let mut out = String::from("digraph faces {\n");
        for (i, c) in self.cones.iter().enumerate() {
            let _ = writeln!(out, "  c{i} [label=\"dim:{} order:{}\"];", c.dim(), self.self_groups[i].len());
        }
        for (a, b) in covers {
            let _ = writeln!(out, "  c{a} -> c{b};");
        }
        out.push_str("}\n");
        out
    }
}
