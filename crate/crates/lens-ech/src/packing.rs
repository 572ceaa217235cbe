//! Weight expansions and ball-packing capacities.
//!
//! A concave domain in `M(n,1)` decomposes into one singular ball
//! `B_n(a₁)` and classical balls `B(a_j)`; a classical concave domain
//! decomposes into classical balls alone. The ECH capacities of the domain
//! are the max-plus convolution of the capacities of the balls.

use num_traits::Zero;
use thiserror::Error;

use crate::domain::{CapacitySequence, ConeFrame, DomainBoundary, DomainError};
use crate::geometry::RatVec2;
use crate::paths::{capacities_by_paths, PathError};
use crate::rational::{int, Rational};
use crate::spectrum::{classical_spectrum, spectrum, SpectrumError};

/// Largest recursion depth of the weight expansion.
pub const MAX_DEPTH: usize = 64;

/// Errors raised by weight expansion and packing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("weight expansions are defined for m = 0 or m = 1, got m = {0}")]
    UnsupportedFrame(i64),
    #[error("weight expansion exceeded depth {0}")]
    DepthExceeded(usize),
    #[error("a piece of the expansion is not a valid domain: {0}")]
    InvalidPiece(DomainError),
    #[error("max-plus convolution needs at least one sequence")]
    Empty,
    #[error("sequence of length {len} is shorter than the requested {count} terms")]
    ShortSequence { len: usize, count: usize },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// One singular ball (absent for classical frames) and a multiset of
/// classical balls, sorted nonincreasingly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightExpansion {
    frame: ConeFrame,
    singular_weight: Option<Rational>,
    classical_weights: Vec<Rational>,
}

impl WeightExpansion {
    /// Builds an expansion from explicit weights, for comparisons against
    /// supplied weight lists.
    pub fn new(frame: ConeFrame, singular_weight: Option<Rational>, mut classical_weights: Vec<Rational>) -> Self {
        classical_weights.sort_by(|a, b| b.cmp(a));
        WeightExpansion { frame, singular_weight, classical_weights }
    }

    pub fn frame(&self) -> ConeFrame {
        self.frame
    }

    pub fn singular_weight(&self) -> Option<&Rational> {
        self.singular_weight.as_ref()
    }

    pub fn classical_weights(&self) -> &[Rational] {
        &self.classical_weights
    }

    /// `n·a₁²/2 + Σ a_j²/2`.
    pub fn ball_area(&self) -> Rational {
        let singular = self
            .singular_weight
            .as_ref()
            .map_or_else(Rational::zero, |a| int(self.frame.n()) * a * a);
        let classical = self.classical_weights.iter().fold(Rational::zero(), |acc, a| acc + a * a);
        (singular + classical) / int(2)
    }

    /// Scales every weight by `r`.
    pub fn scaled(&self, r: &Rational) -> WeightExpansion {
        WeightExpansion {
            frame: self.frame,
            singular_weight: self.singular_weight.as_ref().map(|a| a * r),
            classical_weights: self.classical_weights.iter().map(|a| a * r).collect(),
        }
    }
}

/// Point of the boundary above `x`, for `x` between the end abscissae.
fn point_at(vs: &[RatVec2], x: &Rational) -> RatVec2 {
    vs.windows(2)
        .find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            if x <= &a.x && x >= &b.x {
                if a.x == b.x {
                    return Some(a.clone());
                }
                let t = (&a.x - x) / (&a.x - &b.x);
                Some(RatVec2::new(x.clone(), &a.y + t * (&b.y - &a.y)))
            } else {
                None
            }
        })
        .expect("abscissa within the boundary")
}

/// The boundary between the abscissae `hi` and `lo`, with both ends.
fn portion(vs: &[RatVec2], lo: &Rational, hi: &Rational) -> Vec<RatVec2> {
    let mut out = vec![point_at(vs, hi)];
    out.extend(vs.iter().filter(|v| &v.x > lo && &v.x < hi).cloned());
    out.push(point_at(vs, lo));
    out.dedup();
    out
}

fn classical_piece(vertices: Vec<RatVec2>) -> Result<DomainBoundary, PackingError> {
    DomainBoundary::new(ConeFrame::CLASSICAL, vertices).map_err(PackingError::InvalidPiece)
}

fn expand_classical(b: &DomainBoundary, depth: usize, out: &mut Vec<Rational>) -> Result<(), PackingError> {
    if depth > MAX_DEPTH {
        return Err(PackingError::DepthExceeded(MAX_DEPTH));
    }
    let vs = b.vertices();
    let a = vs.iter().map(|v| &v.x + &v.y).min().expect("non-empty boundary");
    let on_edge: Vec<&Rational> = vs.iter().filter(|v| &v.x + &v.y == a).map(|v| &v.x).collect();
    let x2 = on_edge.iter().copied().min().expect("minimizer exists").clone();
    let x3 = on_edge.iter().copied().max().expect("minimizer exists").clone();
    out.push(a.clone());
    if x2 > Rational::zero() {
        let piece = portion(vs, &Rational::zero(), &x2)
            .into_iter()
            .map(|p| {
                let y = &p.y - &a;
                RatVec2::new(p.x.clone(), &p.x + y)
            })
            .collect();
        expand_classical(&classical_piece(piece)?, depth + 1, out)?;
    }
    if x3 < a {
        let piece = portion(vs, &x3, &vs[0].x)
            .into_iter()
            .map(|p| {
                let x = &p.x - &a;
                RatVec2::new(&x + &p.y, p.y.clone())
            })
            .collect();
        expand_classical(&classical_piece(piece)?, depth + 1, out)?;
    }
    Ok(())
}

/// The weight expansion of a concave domain in a frame with `m ∈ {0, 1}`.
///
/// For `m = 1` the singular weight is the largest `a` with the triangle
/// `(0,0), a·(n,1), (0,a)` inside Ω, namely the least height of ∂⁺Ω. The
/// part of Ω left of the triangle is translated down by `a`; the part right
/// of it is translated by `−(n·a, a)` and mapped by `(x,y) ↦ (y, −x + n·y)`.
/// Both become classical concave domains and are expanded recursively.
pub fn weight_expansion(b: &DomainBoundary) -> Result<WeightExpansion, PackingError> {
    let frame = b.frame();
    let mut weights = Vec::new();
    match frame.m() {
        0 => {
            expand_classical(b, 0, &mut weights)?;
            Ok(WeightExpansion::new(frame, None, weights))
        }
        1 => {
            let n = int(frame.n());
            let vs = b.vertices();
            let a = vs.iter().map(|v| &v.y).min().expect("non-empty boundary").clone();
            let on_edge: Vec<&Rational> = vs.iter().filter(|v| v.y == a).map(|v| &v.x).collect();
            let x2 = on_edge.iter().copied().min().expect("minimizer exists").clone();
            let x3 = on_edge.iter().copied().max().expect("minimizer exists").clone();
            if x2 > Rational::zero() {
                let piece = portion(vs, &Rational::zero(), &x2)
                    .into_iter()
                    .map(|p| RatVec2::new(p.x.clone(), &p.y - &a))
                    .collect();
                expand_classical(&classical_piece(piece)?, 1, &mut weights)?;
            }
            let corner = &n * &a;
            if x3 < corner {
                let piece = portion(vs, &x3, &vs[0].x)
                    .into_iter()
                    .map(|p| {
                        let x = &p.x - &corner;
                        let y = &p.y - &a;
                        RatVec2::new(y.clone(), -x + &n * y)
                    })
                    .collect();
                expand_classical(&classical_piece(piece)?, 1, &mut weights)?;
            }
            Ok(WeightExpansion::new(frame, Some(a), weights))
        }
        m => Err(PackingError::UnsupportedFrame(m)),
    }
}

/// `c_k(X ⊔ Y) = max_{i + j = k} c_i(X) + c_j(Y)`, iterated over `seqs`
/// and truncated to `count` terms.
pub fn max_plus_convolve(seqs: &[CapacitySequence], count: usize) -> Result<CapacitySequence, PackingError> {
    let (first, rest) = seqs.split_first().ok_or(PackingError::Empty)?;
    if let Some(short) = seqs.iter().find(|s| s.len() < count) {
        return Err(PackingError::ShortSequence { len: short.len(), count });
    }
    let mut acc: Vec<Rational> = first.values()[..count].to_vec();
    for s in rest {
        let other = s.values();
        acc = (0..count)
            .map(|k| (0..=k).map(|i| &acc[i] + &other[k - i]).max().expect("k + 1 splittings"))
            .collect();
    }
    Ok(CapacitySequence::new(acc).expect("max-plus convolution is nondecreasing from 0"))
}

/// Capacities of the disjoint union of the balls of `w`, for `k < count`.
pub fn capacities_of_expansion(w: &WeightExpansion, count: usize) -> Result<CapacitySequence, PackingError> {
    let mut seqs = Vec::with_capacity(w.classical_weights.len() + 1);
    if let Some(a) = &w.singular_weight {
        let frame = ConeFrame::new(w.frame.n(), 1).expect("frames with m = 1 are valid");
        seqs.push(spectrum(frame, a, a, count)?);
    }
    for a in &w.classical_weights {
        seqs.push(classical_spectrum(a, a, count)?);
    }
    if seqs.is_empty() {
        return Ok(CapacitySequence::new(vec![Rational::zero(); count.max(1)])
            .expect("zero sequence")
            .truncated(count));
    }
    max_plus_convolve(&seqs, count)
}

/// `c_0, …, c_{count−1}` through the weight expansion.
pub fn packing_capacities(b: &DomainBoundary, count: usize) -> Result<CapacitySequence, PackingError> {
    capacities_of_expansion(&weight_expansion(b)?, count)
}

/// Outcome of comparing packing capacities with path capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingReport {
    pub packing: CapacitySequence,
    pub paths: CapacitySequence,
    /// First `k` where the two disagree.
    pub first_discrepancy: Option<usize>,
}

impl PackingReport {
    pub fn is_success(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// Compares packing and path capacities for `k <= k_max`.
pub fn verify_packing(b: &DomainBoundary, k_max: usize) -> Result<PackingReport, PackingError> {
    verify_packing_with(b, &weight_expansion(b)?, k_max)
}

/// Compares the capacities of a supplied expansion with the path capacities
/// of `b` for `k <= k_max`.
pub fn verify_packing_with(
    b: &DomainBoundary,
    w: &WeightExpansion,
    k_max: usize,
) -> Result<PackingReport, PackingError> {
    let packing = capacities_of_expansion(w, k_max + 1)?;
    let paths = capacities_by_paths(b, k_max + 1)?;
    let first_discrepancy = (0..=k_max).find(|&k| packing.get(k) != paths.get(k));
    Ok(PackingReport { packing, paths, first_discrepancy })
}
