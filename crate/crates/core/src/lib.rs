//! Moduli spaces of extended tropical curves `M̄_{g,n}^trop` as generalized
//! cone complexes, with the tropical tautological maps.
//!
//! Everything is generic over an exact ordered field ([`scalar::Scalar`]);
//! the aliases below fix it to arbitrary-precision rationals.

pub mod cone;
pub mod curve;
pub mod error;
pub mod graph;
pub mod json;
pub mod moduli;
pub mod perm;
pub mod sample;
pub mod scalar;
pub mod tautological;
pub mod verify;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Length = scalar::ExtendedLength<Rational>;
pub type Curve = curve::TropicalCurve<Rational>;
pub type Point = moduli::ModuliPoint<Rational>;
pub type Position = tautological::Position<Rational>;
pub type Witness = tautological::BoundaryWitness<Rational>;
