//! Exact ECH capacities of concave toric domains in the singular toric
//! spaces M(n,m), whose boundaries are lens spaces.
//!
//! Three independent routes compute the capacities and cross-check one
//! another:
//!
//! - closed-form spectra of singular ellipsoids ([`spectrum`]),
//! - maximization of Ω-lengths over concave lattice paths ([`paths`]),
//! - weight expansions and max-plus convolution of ball spectra ([`packing`]).
//!
//! The combinatorial embedded contact complex ([`complex`]) supplies a
//! fourth route through filtered homology, and [`index`] recomputes the
//! grading from Conley-Zehnder, Chern and self-intersection terms.
//!
//! All arithmetic is exact; see [`rational::Rational`].

pub mod complex;
pub mod domain;
pub mod geometry;
pub mod index;
pub mod packing;
pub mod paths;
pub mod rational;
pub mod spectrum;

pub use domain::{CapacitySequence, ConeFrame, DomainBoundary};
pub use geometry::{IntVec2, RatVec2};
pub use rational::Rational;
