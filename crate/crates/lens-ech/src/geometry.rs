//! Exact plane geometry over the integers and the rationals.
//!
//! Cross products, primitive decomposition of lattice vectors, lattice-point
//! scans of polygons, shoelace areas, trivialization vectors and unimodular
//! maps. Nothing here uses floating point.

use std::fmt;

use num_integer::Integer;
use num_traits::{Num, Signed, Zero};
use thiserror::Error;

use crate::rational::{ceil_i64, floor_i64, int, Rational};

/// Errors raised by the geometry primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the zero vector has no primitive decomposition")]
    ZeroVector,
    #[error("({n},{m}) is not a coprime pair with n >= 1")]
    NotCoprime { n: i64, m: i64 },
    #[error("matrix has determinant {det}, expected 1")]
    NotUnimodular { det: i64 },
    #[error("polygon needs at least one vertex")]
    EmptyPolygon,
    #[error("polygon repeats vertex {index} consecutively")]
    RepeatedVertex { index: usize },
    #[error("polygon is oriented clockwise")]
    Clockwise,
    #[error("polygon is not simple: edges {first} and {second} meet")]
    NonSimple { first: usize, second: usize },
}

/// A lattice vector or lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec2 {
    pub x: i64,
    pub y: i64,
}

impl IntVec2 {
    pub const ZERO: IntVec2 = IntVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IntVec2 { x, y }
    }

    /// `self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: IntVec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: IntVec2) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn scale(self, k: i64) -> IntVec2 {
        IntVec2::new(self.x * k, self.y * k)
    }

    pub fn to_rat(self) -> RatVec2 {
        RatVec2::new(int(self.x), int(self.y))
    }
}

impl std::ops::Add for IntVec2 {
    type Output = IntVec2;
    fn add(self, o: IntVec2) -> IntVec2 {
        IntVec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for IntVec2 {
    type Output = IntVec2;
    fn sub(self, o: IntVec2) -> IntVec2 {
        IntVec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for IntVec2 {
    type Output = IntVec2;
    fn neg(self) -> IntVec2 {
        IntVec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A point or vector with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec2 {
    pub x: Rational,
    pub y: Rational,
}

impl RatVec2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        RatVec2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatVec2::new(int(x), int(y))
    }

    /// `self.x * other.y - self.y * other.x`.
    pub fn cross(&self, other: &RatVec2) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn sub(&self, other: &RatVec2) -> RatVec2 {
        RatVec2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &RatVec2) -> RatVec2 {
        RatVec2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, r: &Rational) -> RatVec2 {
        RatVec2::new(&self.x * r, &self.y * r)
    }

    /// The lattice point equal to `self`, if both coordinates are integers.
    pub fn to_int(&self) -> Option<IntVec2> {
        Some(IntVec2::new(
            crate::rational::as_i64(&self.x)?,
            crate::rational::as_i64(&self.y)?,
        ))
    }
}

impl From<IntVec2> for RatVec2 {
    fn from(v: IntVec2) -> Self {
        v.to_rat()
    }
}

impl fmt::Display for RatVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Anything with exact planar coordinates; lets [`cross`] accept both
/// lattice and rational vectors.
pub trait Planar {
    fn to_rat_vec(&self) -> RatVec2;
}

impl Planar for IntVec2 {
    fn to_rat_vec(&self) -> RatVec2 {
        self.to_rat()
    }
}

impl Planar for RatVec2 {
    fn to_rat_vec(&self) -> RatVec2 {
        self.clone()
    }
}

/// Exact cross product `u.x·v.y − u.y·v.x`.
pub fn cross<V: Planar>(u: &V, v: &V) -> Rational {
    u.to_rat_vec().cross(&v.to_rat_vec())
}

/// Splits `v` into a primitive vector and a positive multiplicity.
pub fn primitive_decompose(v: IntVec2) -> Result<(IntVec2, i64), GeometryError> {
    if v == IntVec2::ZERO {
        return Err(GeometryError::ZeroVector);
    }
    let g = v.x.gcd(&v.y);
    Ok((IntVec2::new(v.x / g, v.y / g), g))
}

/// The canonical trivialization vector `v` with `(n,m) × v = 1`.
///
/// Solutions form the family `v + t·(n,m)`; the representative returned is
/// the one with `0 <= v.x < n`. For `(1,0)` this is `(0,1)`.
pub fn trivialization_vector(n: i64, m: i64) -> Result<IntVec2, GeometryError> {
    if n < 1 || n.gcd(&m) != 1 {
        return Err(GeometryError::NotCoprime { n, m });
    }
    // n·x + m·y = 1, and n·v2 − m·v1 = 1 with v2 = x, v1 = −y.
    let e = n.extended_gcd(&m);
    let (v1, v2) = (-e.y * e.gcd, e.x * e.gcd);
    let t = Integer::div_floor(&v1, &n);
    let v = IntVec2::new(v1 - t * n, v2 - t * m);
    debug_assert_eq!(IntVec2::new(n, m).cross(v), 1);
    Ok(v)
}

/// An integer matrix `[[a, b], [c, d]]` of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sl2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };

    /// The matrix with rows `[a, b]` and `[c, d]`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(GeometryError::NotUnimodular { det });
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn compose(&self, other: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn apply(&self, v: IntVec2) -> IntVec2 {
        IntVec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn apply_rat(&self, v: &RatVec2) -> RatVec2 {
        RatVec2::new(
            &v.x * int(self.a) + &v.y * int(self.b),
            &v.x * int(self.c) + &v.y * int(self.d),
        )
    }
}

/// A closed segment between two rational points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub from: RatVec2,
    pub to: RatVec2,
}

impl Segment {
    pub fn new(from: RatVec2, to: RatVec2) -> Self {
        Segment { from, to }
    }

    pub fn from_ints(from: IntVec2, to: IntVec2) -> Self {
        Segment::new(from.to_rat(), to.to_rat())
    }
}

/// Where a point sits relative to a closed polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A simple counterclockwise polygon with rational vertices.
///
/// Zero-area polygons whose vertices are collinear are admitted as
/// degenerate polygons; they contain exactly the points of their edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<RatVec2>,
}

impl LatticePolygon {
    pub fn new(vertices: Vec<RatVec2>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::EmptyPolygon);
        }
        let len = vertices.len();
        if len > 1 {
            for i in 0..len {
                if vertices[i] == vertices[(i + 1) % len] {
                    return Err(GeometryError::RepeatedVertex { index: i });
                }
            }
        }
        let area2 = twice_signed_area(&vertices);
        if area2.is_negative() {
            return Err(GeometryError::Clockwise);
        }
        if area2.is_zero() {
            if !all_collinear(&vertices) {
                return Err(GeometryError::NonSimple { first: 0, second: 0 });
            }
        } else {
            check_simple(&vertices)?;
        }
        Ok(LatticePolygon { vertices })
    }

    pub fn from_ints(vertices: &[IntVec2]) -> Result<Self, GeometryError> {
        LatticePolygon::new(vertices.iter().map(|v| v.to_rat()).collect())
    }

    pub fn vertices(&self) -> &[RatVec2] {
        &self.vertices
    }

    /// The point's position relative to the closed polygon.
    pub fn locate(&self, p: &RatVec2) -> Location {
        let poly: Vec<[Rational; 2]> =
            self.vertices.iter().map(|v| [v.x.clone(), v.y.clone()]).collect();
        locate(&poly, &[p.x.clone(), p.y.clone()])
    }

    /// Returns the polygon transformed by the unimodular map `m`.
    pub fn transformed(&self, m: &Sl2) -> LatticePolygon {
        LatticePolygon {
            vertices: self.vertices.iter().map(|v| m.apply_rat(v)).collect(),
        }
    }
}

/// Lattice points of the closed polygon `p`, omitting points on any of the
/// `excluded` segments. Points come in lexicographic order.
pub fn lattice_points_in_polygon(
    p: &LatticePolygon,
    excluded: &[Segment],
) -> (usize, Vec<IntVec2>) {
    let integral: Option<Vec<IntVec2>> = p.vertices.iter().map(RatVec2::to_int).collect();
    let integral_excl: Option<Vec<(IntVec2, IntVec2)>> = excluded
        .iter()
        .map(|s| Some((s.from.to_int()?, s.to.to_int()?)))
        .collect();
    let points = match (integral, integral_excl) {
        (Some(verts), Some(excl)) => scan_int(&verts, &excl),
        _ => scan_rat(p, excluded),
    };
    (points.len(), points)
}

/// Lattice points of the closed polygon with integer `vertices`, omitting
/// points on the `excluded` segments. The vertices must describe a valid
/// [`LatticePolygon`]; this entry point skips the validation.
pub(crate) fn scan_int(vertices: &[IntVec2], excluded: &[(IntVec2, IntVec2)]) -> Vec<IntVec2> {
    let poly: Vec<[i64; 2]> = vertices.iter().map(|v| [v.x, v.y]).collect();
    let excl: Vec<([i64; 2], [i64; 2])> =
        excluded.iter().map(|(a, b)| ([a.x, a.y], [b.x, b.y])).collect();
    let (x_lo, x_hi) = min_max(vertices.iter().map(|v| v.x));
    let (y_lo, y_hi) = min_max(vertices.iter().map(|v| v.y));
    let mut out = Vec::new();
    for x in x_lo..=x_hi {
        for y in y_lo..=y_hi {
            let pt = [x, y];
            if locate(&poly, &pt) == Location::Outside {
                continue;
            }
            if excl.iter().any(|(a, b)| on_segment(a, b, &pt)) {
                continue;
            }
            out.push(IntVec2::new(x, y));
        }
    }
    out
}

/// Number of lattice points in the closed polygon with integer `vertices`,
/// omitting points on the `excluded` segments.
pub(crate) fn count_int(vertices: &[IntVec2], excluded: &[(IntVec2, IntVec2)]) -> usize {
    scan_int(vertices, excluded).len()
}

fn scan_rat(p: &LatticePolygon, excluded: &[Segment]) -> Vec<IntVec2> {
    let poly: Vec<[Rational; 2]> =
        p.vertices.iter().map(|v| [v.x.clone(), v.y.clone()]).collect();
    let excl: Vec<([Rational; 2], [Rational; 2])> = excluded
        .iter()
        .map(|s| {
            (
                [s.from.x.clone(), s.from.y.clone()],
                [s.to.x.clone(), s.to.y.clone()],
            )
        })
        .collect();
    let x_lo = p.vertices.iter().map(|v| ceil_i64(&v.x)).min().unwrap_or(0);
    let x_hi = p.vertices.iter().map(|v| floor_i64(&v.x)).max().unwrap_or(-1);
    let y_lo = p.vertices.iter().map(|v| ceil_i64(&v.y)).min().unwrap_or(0);
    let y_hi = p.vertices.iter().map(|v| floor_i64(&v.y)).max().unwrap_or(-1);
    let mut out = Vec::new();
    for x in x_lo..=x_hi {
        for y in y_lo..=y_hi {
            let pt = [int(x), int(y)];
            if locate(&poly, &pt) == Location::Outside {
                continue;
            }
            if excl.iter().any(|(a, b)| on_segment(a, b, &pt)) {
                continue;
            }
            out.push(IntVec2::new(x, y));
        }
    }
    out
}

/// Shoelace area, positive for counterclockwise polygons.
pub fn polygon_area(p: &LatticePolygon) -> Rational {
    twice_signed_area(&p.vertices) / int(2)
}

/// Twice the signed shoelace area of a lattice polygon.
pub fn twice_area_int(vertices: &[IntVec2]) -> i64 {
    let len = vertices.len();
    (0..len)
        .map(|i| vertices[i].cross(vertices[(i + 1) % len]))
        .sum()
}

fn twice_signed_area(vertices: &[RatVec2]) -> Rational {
    let len = vertices.len();
    (0..len)
        .map(|i| vertices[i].cross(&vertices[(i + 1) % len]))
        .fold(Rational::zero(), |acc, c| acc + c)
}

fn all_collinear(vertices: &[RatVec2]) -> bool {
    let Some(first) = vertices.first() else {
        return true;
    };
    let Some(other) = vertices.iter().find(|v| *v != first) else {
        return true;
    };
    let dir = other.sub(first);
    vertices.iter().all(|v| dir.cross(&v.sub(first)).is_zero())
}

fn check_simple(vertices: &[RatVec2]) -> Result<(), GeometryError> {
    let len = vertices.len();
    let pt = |i: usize| [vertices[i % len].x.clone(), vertices[i % len].y.clone()];
    for i in 0..len {
        for j in (i + 1)..len {
            let (a, b) = (pt(i), pt(i + 1));
            let (c, d) = (pt(j), pt(j + 1));
            let adjacent_next = j == i + 1;
            let adjacent_wrap = i == 0 && j == len - 1;
            if adjacent_next || adjacent_wrap {
                // Adjacent edges may only share their common vertex.
                let (shared, p_far, q_far) = if adjacent_next { (&b, &a, &d) } else { (&a, &b, &c) };
                let u = sub(p_far, shared);
                let w = sub(q_far, shared);
                let crossed = &u[0] * &w[1] - &u[1] * &w[0];
                let dotted = &u[0] * &w[0] + &u[1] * &w[1];
                if crossed.is_zero() && dotted.is_positive() {
                    return Err(GeometryError::NonSimple { first: i, second: j });
                }
                continue;
            }
            if segments_meet(&a, &b, &c, &d) {
                return Err(GeometryError::NonSimple { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// Scalar types the generic point-location code can run on.
trait Scalar: Clone + Ord + Num + Signed {}
impl Scalar for i64 {}
impl Scalar for Rational {}

fn sub<T: Scalar>(a: &[T; 2], b: &[T; 2]) -> [T; 2] {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone()]
}

/// `(b − a) × (c − a)`.
fn orient<T: Scalar>(a: &[T; 2], b: &[T; 2], c: &[T; 2]) -> T {
    let u = sub(b, a);
    let v = sub(c, a);
    u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone()
}

fn within<T: Scalar>(lo: &T, hi: &T, v: &T) -> bool {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    lo <= v && v <= hi
}

fn on_segment<T: Scalar>(a: &[T; 2], b: &[T; 2], p: &[T; 2]) -> bool {
    orient(a, b, p).is_zero() && within(&a[0], &b[0], &p[0]) && within(&a[1], &b[1], &p[1])
}

fn segments_meet<T: Scalar>(a: &[T; 2], b: &[T; 2], c: &[T; 2], d: &[T; 2]) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    if o1 != o2 && o3 != o4 && !o1.is_zero() && !o2.is_zero() && !o3.is_zero() && !o4.is_zero() {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Winding-number point location with an exact on-boundary test.
fn locate<T: Scalar>(poly: &[[T; 2]], p: &[T; 2]) -> Location {
    let len = poly.len();
    if len == 1 {
        return if poly[0] == *p { Location::Boundary } else { Location::Outside };
    }
    let mut winding = 0i64;
    for i in 0..len {
        let a = &poly[i];
        let b = &poly[(i + 1) % len];
        if on_segment(a, b, p) {
            return Location::Boundary;
        }
        if a[1] <= p[1] {
            if b[1] > p[1] && orient(a, b, p).is_positive() {
                winding += 1;
            }
        } else if b[1] <= p[1] && orient(a, b, p).is_negative() {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

fn min_max(values: impl Iterator<Item = i64>) -> (i64, i64) {
    values.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}
