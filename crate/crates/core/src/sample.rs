//! Random curves for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::curve::TropicalCurve;
use crate::moduli::ModuliSpace;
use crate::perm::Perm;
use crate::scalar::{ExtendedLength, Scalar};

/// Positive `p/q` with `1 ≤ p ≤ 12`, `1 ≤ q ≤ 4`, or `∞` with probability
/// `inf_prob`.
pub fn random_length<S: Scalar, R: Rng + ?Sized>(rng: &mut R, inf_prob: f64) -> ExtendedLength<S> {
    if inf_prob > 0.0 && rng.gen_bool(inf_prob) {
        return ExtendedLength::Infinite;
    }
    ExtendedLength::Finite(S::from_fraction(rng.gen_range(1..=12), rng.gen_range(1..=4)))
}

pub fn random_perm<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Perm {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffled identity is a permutation")
}

/// The curve with vertices and edges renumbered and edges reversed at random.
pub fn random_relabel<S: Scalar, R: Rng + ?Sized>(rng: &mut R, c: &TropicalCurve<S>) -> TropicalCurve<S> {
    let g = c.graph();
    let vp = random_perm(rng, g.num_vertices());
    let ep = random_perm(rng, g.num_edges());
    let flips: Vec<bool> = (0..g.num_edges()).map(|_| rng.gen()).collect();
    c.relabel(&vp, &ep, &flips).0
}

/// A curve on a uniformly chosen stratum of `space`, relabeled at random.
pub fn random_curve<S: Scalar, R: Rng + ?Sized>(rng: &mut R, space: &ModuliSpace, inf_prob: f64) -> TropicalCurve<S> {
    let stratum = space.strata().choose(rng).expect("a moduli space has a stratum");
    let lengths = (0..stratum.graph.num_edges()).map(|_| random_length(rng, inf_prob)).collect();
    let c = TropicalCurve::new(stratum.graph.clone(), lengths).expect("random lengths are positive");
    random_relabel(rng, &c)
}
