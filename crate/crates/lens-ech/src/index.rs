//! Index apparatus for orbit sets: Conley–Zehnder terms, rotation numbers,
//! relative Chern and self-intersection components, the Fredholm index,
//! partition conditions and the ellipsoid index bijection.
//!
//! Irrational slopes are modelled as a rational plus a signed infinitesimal
//! `ε`, so floors and strict comparisons are decided lexicographically.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::{Generator, Label};
use crate::domain::ConeFrame;
use crate::geometry::{twice_area_int, IntVec2, RatVec2};
use crate::paths::Edge;
use crate::rational::{floor_i64, int, Rational};
use crate::spectrum::is_admissible;

/// Errors raised by index computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("tangent {0} is parallel to the ray")]
    ParallelTangent(Box<RatVec2>),
    #[error("tangent {0} is vertical")]
    VerticalTangent(Box<RatVec2>),
    #[error("{v} is not a trivialization vector for {frame}: need n·v2 − m·v1 = 1")]
    NotTrivialization { v: IntVec2, frame: ConeFrame },
    #[error("the pair ({r},{s}) is not admissible for {frame}")]
    NotAdmissible { r: i64, s: i64, frame: ConeFrame },
    #[error("the orbit set does not close up: l = {numerator}/{denominator} is not an integer")]
    NotClosed { numerator: i64, denominator: i64 },
    #[error("untilted data produce a tie; choose a tilt")]
    Tie,
    #[error("{name} must be positive")]
    NonPositive { name: &'static str },
    #[error("partition length must be at least 1")]
    ZeroLength,
}

/// Direction of the infinitesimal tilt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tilt {
    Negative,
    Zero,
    Positive,
}

impl Tilt {
    pub fn sign(self) -> i64 {
        match self {
            Tilt::Negative => -1,
            Tilt::Zero => 0,
            Tilt::Positive => 1,
        }
    }

    fn from_sign(x: &Rational) -> Self {
        match x.cmp(&Rational::zero()) {
            Ordering::Less => Tilt::Negative,
            Ordering::Equal => Tilt::Zero,
            Ordering::Greater => Tilt::Positive,
        }
    }
}

/// A rotation angle `θ + slope·ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RotationData {
    theta: Rational,
    slope: Rational,
}

impl RotationData {
    pub fn exact(theta: Rational) -> Self {
        RotationData { theta, slope: Rational::zero() }
    }

    pub fn tilted(theta: Rational, tilt: Tilt) -> Self {
        RotationData { theta, slope: int(tilt.sign()) }
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn tilt(&self) -> Tilt {
        Tilt::from_sign(&self.slope)
    }

    pub fn is_exact(&self) -> bool {
        self.slope.is_zero()
    }

    /// `k·(θ + slope·ε)`.
    pub fn times(&self, k: i64) -> RotationData {
        RotationData { theta: &self.theta * int(k), slope: &self.slope * int(k) }
    }

    pub fn negated(&self) -> RotationData {
        self.times(-1)
    }

    /// Adds an integer to `θ`.
    pub fn shifted(&self, delta: i64) -> RotationData {
        RotationData { theta: &self.theta + int(delta), slope: self.slope.clone() }
    }

    /// `⌊θ + slope·ε⌋`.
    pub fn floor(&self) -> i64 {
        let f = floor_i64(&self.theta);
        if self.theta.is_integer() && self.slope.is_negative() {
            f - 1
        } else {
            f
        }
    }

    /// `⌈θ + slope·ε⌉`.
    pub fn ceil(&self) -> i64 {
        -self.negated().floor()
    }

    /// True when `θ` is an integer and there is no tilt to decide the floor.
    pub fn is_tie(&self) -> bool {
        self.theta.is_integer() && self.slope.is_zero()
    }

    fn quotient(num: (Rational, Rational), den: (Rational, Rational)) -> RotationData {
        let (p0, p1) = num;
        let (q0, q1) = den;
        let theta = &p0 / &q0;
        let slope = (p1 * &q0 - p0 * q1) / (&q0 * &q0);
        RotationData { theta, slope }
    }
}

/// `2⌊kθ⌋ + 1`, with the tilt deciding integral values.
pub fn cz_elliptic(theta: &RotationData, k: i64) -> i64 {
    2 * theta.times(k).floor() + 1
}

/// The Conley–Zehnder index of a hyperbolic orbit with winding `k`.
pub fn cz_hyperbolic(k: i64) -> i64 {
    k
}

fn check_trivialization(frame: ConeFrame, v: IntVec2) -> Result<(), IndexError> {
    if frame.n() * v.y - frame.m() * v.x == 1 {
        Ok(())
    } else {
        Err(IndexError::NotTrivialization { v, frame })
    }
}

/// `(φ₊, φ₋) = ((a₀′ × v)/(a₀′ × (n,m)), a₁′.y / a₁′.x)`.
pub fn rotation_numbers(
    a0_prime: &RatVec2,
    a1_prime: &RatVec2,
    frame: ConeFrame,
    v: IntVec2,
) -> Result<(Rational, Rational), IndexError> {
    check_trivialization(frame, v)?;
    let den = a0_prime.cross(&frame.ray().to_rat());
    if den.is_zero() {
        return Err(IndexError::ParallelTangent(Box::new(a0_prime.clone())));
    }
    if a1_prime.x.is_zero() {
        return Err(IndexError::VerticalTangent(Box::new(a1_prime.clone())));
    }
    Ok((a0_prime.cross(&v.to_rat()) / den, &a1_prime.y / &a1_prime.x))
}

/// Rotation numbers of the special orbits of `E_{n,m}(a,b)` with `b`
/// tilted to `b + tilt·ε`. The boundary tangent is `a′ = (−a·n, b − a·m)`.
pub fn ellipsoid_rotation_numbers(
    frame: ConeFrame,
    a: &Rational,
    b: &Rational,
    tilt: Tilt,
    v: IntVec2,
) -> Result<(RotationData, RotationData), IndexError> {
    check_trivialization(frame, v)?;
    if !a.is_positive() {
        return Err(IndexError::NonPositive { name: "a" });
    }
    if !b.is_positive() {
        return Err(IndexError::NonPositive { name: "b" });
    }
    let (n, m) = (int(frame.n()), int(frame.m()));
    let e = int(tilt.sign());
    let tangent_x = -(a * &n);
    let tangent_y = b - a * &m;
    let cross_v = (
        &tangent_x * int(v.y) - &tangent_y * int(v.x),
        -(&e * int(v.x)),
    );
    let cross_ray = (&tangent_x * &m - &tangent_y * &n, -(&e * &n));
    let phi_plus = RotationData::quotient(cross_v, cross_ray);
    let phi_minus = RotationData::quotient((tangent_y, e), (tangent_x, Rational::zero()));
    Ok((phi_plus, phi_minus))
}

/// The three index components and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexComponents {
    pub chern: i64,
    pub self_intersection: i64,
    pub cz_total: i64,
    pub total: i64,
}

impl IndexComponents {
    fn new(chern: i64, self_intersection: i64, cz_total: i64) -> Self {
        IndexComponents { chern, self_intersection, cz_total, total: chern + self_intersection + cz_total }
    }
}

/// An orbit set: `r` covers of the special orbit on the ray, labelled
/// interior edges, and `s` covers of the special orbit on the axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSet {
    pub frame: ConeFrame,
    pub positive_special: i64,
    pub interior: Vec<(Edge, Label)>,
    pub negative_special: i64,
}

impl OrbitSet {
    pub fn from_generator(g: &Generator) -> Self {
        OrbitSet {
            frame: g.path().frame(),
            positive_special: 0,
            interior: g.path().edges().iter().copied().zip(g.decorated().labels().iter().copied()).collect(),
            negative_special: 0,
        }
    }

    /// The ellipsoid orbit set `e₊^r e₋^s`.
    pub fn special(frame: ConeFrame, r: i64, s: i64) -> Self {
        OrbitSet { frame, positive_special: r, interior: Vec::new(), negative_special: s }
    }

    /// Elliptic covers among the interior edges.
    fn interior_elliptic(&self) -> i64 {
        self.interior
            .iter()
            .map(|(e, l)| match l {
                Label::E => e.multiplicity,
                Label::H => e.multiplicity - 1,
            })
            .sum()
    }
}

/// Components of the index of an orbit set under the trivialization `v`.
///
/// The closing path runs from `l·(n,m)` through `r` copies of `v`, the
/// interior edges and `s` copies of `(−1,0)` to `(0,k)`. The Chern term is
/// `l + k`, the self-intersection term is twice the enclosed area, and the
/// Conley–Zehnder term is `−e` over interior elliptic covers plus the
/// elliptic terms of the special orbits with rotation numbers `φ₊, φ₋`.
pub fn orbit_set_components(
    set: &OrbitSet,
    v: IntVec2,
    rotation: Option<(&RotationData, &RotationData)>,
) -> Result<IndexComponents, IndexError> {
    let frame = set.frame;
    check_trivialization(frame, v)?;
    let (r, s) = (set.positive_special, set.negative_special);
    let sum = set.interior.iter().fold(IntVec2::ZERO, |acc, (e, _)| acc + e.vector());
    let numerator = s - r * v.x - sum.x;
    if numerator % frame.n() != 0 {
        return Err(IndexError::NotClosed { numerator, denominator: frame.n() });
    }
    let l = numerator / frame.n();
    let k = l * frame.m() + r * v.y + sum.y;
    let mut polygon = vec![IntVec2::ZERO];
    let mut cur = frame.ray().scale(l);
    polygon.push(cur);
    for _ in 0..r {
        cur = cur + v;
        polygon.push(cur);
    }
    for (e, _) in &set.interior {
        cur = cur + e.vector();
        polygon.push(cur);
    }
    for _ in 0..s {
        cur = cur + IntVec2::new(-1, 0);
        polygon.push(cur);
    }
    debug_assert_eq!(cur, IntVec2::new(0, k));
    polygon.dedup();
    let q = twice_area_int(&polygon);
    let mut cz = -set.interior_elliptic();
    if r > 0 || s > 0 {
        let (plus, minus) = rotation.ok_or(IndexError::Tie)?;
        cz += (1..=r).map(|i| cz_elliptic(plus, i)).sum::<i64>();
        cz += (1..=s).map(|j| cz_elliptic(&minus.negated(), j)).sum::<i64>();
    }
    Ok(IndexComponents::new(l + k, q, cz))
}

/// Components of the index of a generator under the trivialization `v`.
pub fn index_components(g: &Generator, v: IntVec2) -> Result<IndexComponents, IndexError> {
    orbit_set_components(&OrbitSet::from_generator(g), v, None)
}

/// `−2 + 2g + 2e_β + h + 2c`.
pub fn fredholm_index(genus: u32, elliptic_negative_ends: u32, hyperbolic_ends: u32, chern: u32) -> i64 {
    -2 + 2 * i64::from(genus) + 2 * i64::from(elliptic_negative_ends) + i64::from(hyperbolic_ends) + 2 * i64::from(chern)
}

/// Orbit type for partition conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitKind {
    PositiveHyperbolic,
    NegativeHyperbolic,
    Elliptic(RotationData),
}

/// Horizontal displacements of the primitive pieces of a vertex chain.
fn displacements(vertices: &[IntVec2]) -> Vec<i64> {
    vertices
        .windows(2)
        .flat_map(|w| {
            let d = w[1] - w[0];
            let g = num_integer::gcd(d.x, d.y);
            std::iter::repeat_n(d.x / g, g as usize)
        })
        .collect()
}

/// Hull of `points` (sorted by x) keeping the chain on the side selected
/// by `upper`.
fn hull_chain(points: &[IntVec2], upper: bool) -> Vec<IntVec2> {
    let mut chain: Vec<IntVec2> = Vec::with_capacity(points.len());
    for &p in points {
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            let turn = (b - a).cross(p - a);
            if (upper && turn >= 0) || (!upper && turn <= 0) {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
}

/// Vertices of the highest concave lattice path from `(0,0)` to
/// `(m, ⌊mθ⌋)` on or below `y = θx`.
pub fn upper_partition_path(theta: &RotationData, m: i64) -> Vec<IntVec2> {
    let points: Vec<IntVec2> = (0..=m).map(|i| IntVec2::new(i, theta.times(i).floor())).collect();
    hull_chain(&points, true)
}

/// Vertices of the lowest convex lattice path from `(0,0)` to
/// `(m, ⌈mθ⌉)` on or above `y = θx`.
pub fn lower_partition_path(theta: &RotationData, m: i64) -> Vec<IntVec2> {
    let points: Vec<IntVec2> = (0..=m).map(|i| IntVec2::new(i, theta.times(i).ceil())).collect();
    hull_chain(&points, false)
}

/// The partition conditions `(P⁺, P⁻)` for `m` covers.
pub fn partitions(kind: &OrbitKind, m: i64) -> Result<(Vec<i64>, Vec<i64>), IndexError> {
    if m < 1 {
        return Err(IndexError::ZeroLength);
    }
    Ok(match kind {
        OrbitKind::PositiveHyperbolic => {
            let ones = vec![1; m as usize];
            (ones.clone(), ones)
        }
        OrbitKind::NegativeHyperbolic => {
            let mut p = vec![2; (m / 2) as usize];
            if m % 2 == 1 {
                p.push(1);
            }
            (p.clone(), p)
        }
        OrbitKind::Elliptic(theta) => (
            displacements(&upper_partition_path(theta, m)),
            displacements(&lower_partition_path(theta, m)),
        ),
    })
}

/// The lattice point `(k₂, (k₁ + m·k₂)/n)` of an admissible pair.
pub fn generator_point(frame: ConeFrame, k1: i64, k2: i64) -> Result<IntVec2, IndexError> {
    if k1 < 0 || k2 < 0 || !is_admissible(frame, k1, k2) {
        return Err(IndexError::NotAdmissible { r: k1, s: k2, frame });
    }
    Ok(IntVec2::new(k2, (k1 + frame.m() * k2) / frame.n()))
}

/// Action `a·k₁ + b·k₂` of the lattice point `(x,y)` in the cone, with
/// `k₂ = x` and `k₁ = n·y − m·x`.
fn point_action(frame: ConeFrame, a: &Rational, b: &Rational, p: IntVec2) -> Rational {
    a * int(frame.n() * p.y - frame.m() * p.x) + b * int(p.x)
}

/// Number of cone lattice points strictly below the line through `point`
/// of constant tilted action `a·(n·y − m·x) + (b + tilt·ε)·x`.
pub fn eta(frame: ConeFrame, point: IntVec2, a: &Rational, b: &Rational, tilt: Tilt) -> Result<usize, IndexError> {
    if !a.is_positive() {
        return Err(IndexError::NonPositive { name: "a" });
    }
    if !b.is_positive() {
        return Err(IndexError::NonPositive { name: "b" });
    }
    if !frame.contains_closed(point) {
        return Err(IndexError::NotAdmissible { r: point.x, s: point.y, frame });
    }
    let target = point_action(frame, a, b, point);
    let x_max = floor_i64(&(&target / b));
    let mut below = 0;
    for x in 0..=x_max {
        let y_min = num_integer::Integer::div_ceil(&(frame.m() * x), &frame.n());
        let y_max = floor_i64(&((&target / a + int(frame.m() * x)) / int(frame.n())));
        for y in y_min..=y_max {
            let p = IntVec2::new(x, y);
            if p == point {
                continue;
            }
            match point_action(frame, a, b, p).cmp(&target) {
                Ordering::Less => below += 1,
                Ordering::Greater => {}
                Ordering::Equal => match tilt {
                    Tilt::Zero => return Err(IndexError::Tie),
                    Tilt::Positive if x < point.x => below += 1,
                    Tilt::Negative if x > point.x => below += 1,
                    _ => {}
                },
            }
        }
    }
    Ok(below)
}

/// Index of the ellipsoid generator `e₊^r e₋^s` of `E_{n,m}(a, b + tilt·ε)`.
pub fn ellipsoid_generator_index(
    frame: ConeFrame,
    a: &Rational,
    b: &Rational,
    tilt: Tilt,
    r: i64,
    s: i64,
) -> Result<i64, IndexError> {
    ellipsoid_generator_components(frame, a, b, tilt, r, s, frame.trivialization()).map(|c| c.total)
}

/// Index components of `e₊^r e₋^s` under the trivialization `v`.
pub fn ellipsoid_generator_components(
    frame: ConeFrame,
    a: &Rational,
    b: &Rational,
    tilt: Tilt,
    r: i64,
    s: i64,
    v: IntVec2,
) -> Result<IndexComponents, IndexError> {
    if r < 0 || s < 0 || !is_admissible(frame, r, s) {
        return Err(IndexError::NotAdmissible { r, s, frame });
    }
    let (plus, minus) = ellipsoid_rotation_numbers(frame, a, b, tilt, v)?;
    if tilt == Tilt::Zero {
        let tie = (1..=r).any(|i| plus.times(i).is_tie()) || (1..=s).any(|j| minus.times(-j).is_tie());
        if tie {
            return Err(IndexError::Tie);
        }
    }
    orbit_set_components(&OrbitSet::special(frame, r, s), v, Some((&plus, &minus)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{generators_of_index, DecoratedPath};
    use crate::rational::frac;

    fn frame(n: i64, m: i64) -> ConeFrame {
        ConeFrame::new(n, m).unwrap()
    }

    #[test]
    fn cz_examples() {
        assert_eq!(cz_elliptic(&RotationData::exact(frac(3, 10)), 1), 1);
        assert_eq!(cz_elliptic(&RotationData::exact(frac(-1, 5)), 1), -1);
        assert_eq!(cz_elliptic(&RotationData::tilted(frac(1, 2), Tilt::Negative), 2), 1);
        assert_eq!(cz_elliptic(&RotationData::tilted(frac(1, 2), Tilt::Positive), 2), 3);
        assert_eq!(cz_hyperbolic(3), 3);
    }

    #[test]
    fn rotation_examples() {
        let f = frame(2, 1);
        let a0 = RatVec2::from_ints(-3, -1);
        let a1 = RatVec2::from_ints(-1, 2);
        let (plus, minus) = rotation_numbers(&a0, &a1, f, IntVec2::new(1, 1)).unwrap();
        assert_eq!(plus, int(2));
        assert_eq!(minus, int(-2));
        let (shifted, _) = rotation_numbers(&a0, &a1, f, IntVec2::new(3, 2)).unwrap();
        assert_eq!(shifted, int(3));
        assert!(matches!(
            rotation_numbers(&RatVec2::from_ints(-2, -1), &a1, f, IntVec2::new(1, 1)),
            Err(IndexError::ParallelTangent(_))
        ));
        assert!(matches!(
            rotation_numbers(&a0, &RatVec2::from_ints(0, 1), f, IntVec2::new(1, 1)),
            Err(IndexError::VerticalTangent(_))
        ));
        assert!(rotation_numbers(&a0, &a1, f, IntVec2::new(1, 0)).is_err());
    }

    #[test]
    fn components_examples() {
        let f = frame(2, 1);
        let g = Generator::new(DecoratedPath::parse(f, "2,1;0,1:e").unwrap());
        let c = index_components(&g, f.trivialization()).unwrap();
        assert_eq!(c, IndexComponents { chern: 2, self_intersection: 2, cz_total: -2, total: 2 });
        let h = Generator::new(DecoratedPath::parse(f, "2,1;0,1:h").unwrap());
        assert_eq!(index_components(&h, f.trivialization()).unwrap().total, 3);
        let empty = Generator::new(DecoratedPath::empty(f));
        assert_eq!(
            index_components(&empty, f.trivialization()).unwrap(),
            IndexComponents { chern: 0, self_intersection: 0, cz_total: 0, total: 0 }
        );
    }

    #[test]
    fn components_match_grading() {
        for (n, m) in [(1, 0), (2, 1), (3, 1), (3, 2)] {
            let f = frame(n, m);
            let v = f.trivialization();
            for i in 0..=8 {
                for g in generators_of_index(f, i).unwrap() {
                    for w in [v, v + f.ray()] {
                        assert_eq!(index_components(&g, w).unwrap().total, i as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn fredholm_examples() {
        assert_eq!(fredholm_index(0, 1, 0, 0), 0);
        assert_eq!(fredholm_index(0, 0, 1, 1), 1);
        assert_eq!(fredholm_index(1, 0, 1, 0), 1);
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions(&OrbitKind::PositiveHyperbolic, 4).unwrap(), (vec![1; 4], vec![1; 4]));
        assert_eq!(partitions(&OrbitKind::NegativeHyperbolic, 5).unwrap(), (vec![2, 2, 1], vec![2, 2, 1]));
        assert_eq!(partitions(&OrbitKind::NegativeHyperbolic, 4).unwrap(), (vec![2, 2], vec![2, 2]));
        let (plus, _) = partitions(&OrbitKind::Elliptic(RotationData::exact(frac(1, 3))), 3).unwrap();
        assert_eq!(plus, vec![3]);
        assert!(partitions(&OrbitKind::PositiveHyperbolic, 0).is_err());
    }

    #[test]
    fn ellipsoid_index_examples() {
        let f = frame(2, 1);
        let one = int(1);
        assert_eq!(ellipsoid_generator_index(f, &one, &one, Tilt::Positive, 2, 0).unwrap(), 2);
        assert_eq!(ellipsoid_generator_index(f, &one, &one, Tilt::Positive, 0, 0).unwrap(), 0);
        for tilt in [Tilt::Positive, Tilt::Negative] {
            let index = ellipsoid_generator_index(f, &one, &one, tilt, 1, 1).unwrap();
            assert_eq!(index, 4);
            let p = generator_point(f, 1, 1).unwrap();
            assert_eq!(index, 2 * eta(f, p, &one, &one, tilt).unwrap() as i64);
        }
        assert!(matches!(
            ellipsoid_generator_index(f, &one, &one, Tilt::Zero, 2, 0),
            Err(IndexError::Tie)
        ));
        assert!(ellipsoid_generator_index(f, &one, &one, Tilt::Positive, 1, 0).is_err());
        assert!(matches!(eta(f, IntVec2::new(1, 1), &one, &one, Tilt::Zero), Err(IndexError::Tie)));
    }

    #[test]
    fn tilted_floor_and_ceil() {
        let half = RotationData::tilted(frac(1, 2), Tilt::Negative);
        assert_eq!(half.times(2).floor(), 0);
        assert_eq!(half.times(2).ceil(), 1);
        let up = RotationData::tilted(int(1), Tilt::Positive);
        assert_eq!(up.floor(), 1);
        assert_eq!(up.ceil(), 2);
        assert_eq!(RotationData::exact(int(1)).ceil(), 1);
    }
}
