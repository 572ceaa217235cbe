//! Rational concave toric domains in the singular spaces M(n,m).
//!
//! A domain is described by its upper boundary ∂⁺Ω, a concave polygonal
//! curve running from a point on the ray through `(n,m)` to a point on the
//! positive y-axis. The complement of Ω inside the cone is convex.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::geometry::{IntVec2, RatVec2};
use crate::rational::{self, int, parse_rational, Rational};

/// Errors raised while building or validating domains and sequences.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("({n},{m}) is not a cone frame: need n >= 1, m >= 0, gcd(n,m) = 1, and m = 0 only with n = 1")]
    InvalidFrame { n: i64, m: i64 },
    #[error("a boundary needs at least two vertices")]
    TooFewVertices,
    #[error("first vertex {0} is not on the open ray through (n,m)")]
    FirstVertexOffRay(Box<RatVec2>),
    #[error("last vertex {0} is not on the open positive y-axis")]
    LastVertexOffAxis(Box<RatVec2>),
    #[error("vertex {index} is not strictly inside the cone")]
    VertexOutsideCone { index: usize },
    #[error("vertex {index} repeats the previous vertex")]
    RepeatedVertex { index: usize },
    #[error("edge {edge} has direction {direction} outside the admissible fan")]
    DirectionOutsideFan { edge: usize, direction: Box<RatVec2> },
    #[error("boundary turns convexly at vertex {vertex}")]
    ConvexTurn { vertex: usize },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: Rational },
    #[error("support direction {0} must have positive x-component")]
    SupportDirection(IntVec2),
    #[error("capacity sequence must start at 0 and be nondecreasing (fails at k = {0})")]
    NotCapacitySequence(usize),
}

/// The cone `V_{n,m}` spanned by `(n,m)` and `(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeFrame {
    n: i64,
    m: i64,
}

impl ConeFrame {
    /// The classical quadrant, M(1,0) = ℂ².
    pub const CLASSICAL: ConeFrame = ConeFrame { n: 1, m: 0 };

    pub fn new(n: i64, m: i64) -> Result<Self, DomainError> {
        let ok = n >= 1 && m >= 0 && n.gcd(&m) == 1 && (m != 0 || n == 1);
        if ok {
            Ok(ConeFrame { n, m })
        } else {
            Err(DomainError::InvalidFrame { n, m })
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// The primitive ray direction `(n,m)`.
    pub fn ray(&self) -> IntVec2 {
        IntVec2::new(self.n, self.m)
    }

    /// True when `u = (p,q)` points strictly between `−(n,m)` and `(0,1)`,
    /// i.e. `p < 0` and `n·q − m·p > 0`.
    pub fn admits_direction(&self, u: IntVec2) -> bool {
        u.x < 0 && self.ray().cross(u) > 0
    }

    /// The canonical trivialization vector of this frame.
    pub fn trivialization(&self) -> IntVec2 {
        crate::geometry::trivialization_vector(self.n, self.m)
            .expect("frame invariants guarantee coprimality")
    }

    /// True when the lattice point lies in the closed cone.
    pub fn contains_closed(&self, p: IntVec2) -> bool {
        p.x >= 0 && self.ray().cross(p) >= 0
    }

    fn on_open_ray(&self, p: &RatVec2) -> bool {
        let lhs = &p.y * int(self.n) - &p.x * int(self.m);
        lhs.is_zero() && p.x.is_positive()
    }

    fn strictly_inside(&self, p: &RatVec2) -> bool {
        let lhs = &p.y * int(self.n) - &p.x * int(self.m);
        lhs.is_positive() && p.x.is_positive()
    }

    fn admits_rational_direction(&self, u: &RatVec2) -> bool {
        let lhs = &u.y * int(self.n) - &u.x * int(self.m);
        u.x.is_negative() && lhs.is_positive()
    }
}

impl std::fmt::Display for ConeFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// Validated upper boundary ∂⁺Ω of a rational concave toric domain.
///
/// Vertices run from the ray endpoint to the y-axis endpoint. Collinear
/// interior vertices are merged, so equal domains have equal vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainBoundary {
    frame: ConeFrame,
    vertices: Vec<RatVec2>,
}

impl DomainBoundary {
    /// Validates `vertices` against every boundary invariant and returns the
    /// normalized boundary, or the first violated invariant.
    pub fn new(frame: ConeFrame, vertices: Vec<RatVec2>) -> Result<Self, DomainError> {
        validate_domain(frame, vertices)
    }

    pub fn frame(&self) -> ConeFrame {
        self.frame
    }

    pub fn vertices(&self) -> &[RatVec2] {
        &self.vertices
    }

    /// `t₀` with first vertex `t₀·(n,m)`.
    pub fn ray_parameter(&self) -> Rational {
        &self.vertices[0].x / int(self.frame.n)
    }

    /// `t₁` with last vertex `(0, t₁)`.
    pub fn axis_height(&self) -> Rational {
        self.vertices.last().expect("non-empty").y.clone()
    }

    /// Area of Ω, the region between the cone and ∂⁺Ω.
    pub fn area(&self) -> Rational {
        let mut pts = vec![RatVec2::from_ints(0, 0)];
        pts.extend(self.vertices.iter().cloned());
        let len = pts.len();
        let twice = (0..len)
            .map(|i| pts[i].cross(&pts[(i + 1) % len]))
            .fold(Rational::zero(), |acc, c| acc + c);
        twice / int(2)
    }

    /// Height of ∂⁺Ω above `x`, for `0 <= x <= t₀·n`.
    pub fn height_at(&self, x: &Rational) -> Option<Rational> {
        self.vertices.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            if x <= &a.x && x >= &b.x {
                let t = (&a.x - x) / (&a.x - &b.x);
                Some(&a.y + t * (&b.y - &a.y))
            } else {
                None
            }
        })
    }

    /// True when Ω ⊆ `other`: same frame, and ∂⁺Ω is nowhere above the
    /// boundary of `other`. Both boundaries are piecewise linear, so the
    /// comparison at the breakpoints of either one decides it.
    pub fn is_subdomain_of(&self, other: &DomainBoundary) -> bool {
        if self.frame != other.frame || self.vertices[0].x > other.vertices[0].x {
            return false;
        }
        let limit = &self.vertices[0].x;
        self.vertices
            .iter()
            .map(|v| &v.x)
            .chain(other.vertices.iter().map(|v| &v.x).filter(|x| *x <= limit))
            .all(|x| match (self.height_at(x), other.height_at(x)) {
                (Some(mine), Some(theirs)) => mine <= theirs,
                _ => false,
            })
    }
}

/// Checks the boundary invariants in order and normalizes collinear runs.
pub fn validate_domain(frame: ConeFrame, vertices: Vec<RatVec2>) -> Result<DomainBoundary, DomainError> {
    if vertices.len() < 2 {
        return Err(DomainError::TooFewVertices);
    }
    if !frame.on_open_ray(&vertices[0]) {
        return Err(DomainError::FirstVertexOffRay(Box::new(vertices[0].clone())));
    }
    let last = vertices.last().expect("len >= 2");
    if !(last.x.is_zero() && last.y.is_positive()) {
        return Err(DomainError::LastVertexOffAxis(Box::new(last.clone())));
    }
    let inner = 1..vertices.len() - 1;
    if let Some(index) = inner.clone().find(|&i| !frame.strictly_inside(&vertices[i])) {
        return Err(DomainError::VertexOutsideCone { index });
    }
    if let Some(index) = (1..vertices.len()).find(|&i| vertices[i] == vertices[i - 1]) {
        return Err(DomainError::RepeatedVertex { index });
    }
    let directions: Vec<RatVec2> = vertices.windows(2).map(|w| w[1].sub(&w[0])).collect();
    if let Some(edge) = directions.iter().position(|d| !frame.admits_rational_direction(d)) {
        return Err(DomainError::DirectionOutsideFan {
            edge,
            direction: Box::new(directions[edge].clone()),
        });
    }
    // All directions have negative x, so parallel consecutive edges point the
    // same way and their shared vertex can be dropped.
    let mut merged: Vec<RatVec2> = vec![vertices[0].clone()];
    for v in vertices.iter().skip(1) {
        if merged.len() >= 2 {
            let a = &merged[merged.len() - 2];
            let b = &merged[merged.len() - 1];
            if b.sub(a).cross(&v.sub(b)).is_zero() {
                merged.pop();
            }
        }
        merged.push(v.clone());
    }
    for i in 1..merged.len() - 1 {
        let u = merged[i].sub(&merged[i - 1]);
        let w = merged[i + 1].sub(&merged[i]);
        if !u.cross(&w).is_negative() {
            let original = vertices.iter().position(|p| *p == merged[i]).unwrap_or(i);
            return Err(DomainError::ConvexTurn { vertex: original });
        }
    }
    Ok(DomainBoundary { frame, vertices: merged })
}

/// The singular ellipsoid E_{n,m}(a,b): the triangle with vertices
/// `(0,0)`, `a·(n,m)` and `(0,b)`.
///
/// For the classical frame this is the ellipsoid with vertices `(a,0)`,
/// `(0,b)`. With this normalization the ECH capacities are exactly the
/// sequence N^{n,m}(a,b) of admissible combinations `a·k₁ + b·k₂`.
pub fn make_singular_ellipsoid(frame: ConeFrame, a: &Rational, b: &Rational) -> Result<DomainBoundary, DomainError> {
    if !a.is_positive() {
        return Err(DomainError::NonPositive { name: "a", value: a.clone() });
    }
    if !b.is_positive() {
        return Err(DomainError::NonPositive { name: "b", value: b.clone() });
    }
    let start = frame.ray().to_rat().scale(a);
    let end = RatVec2::new(Rational::zero(), b.clone());
    validate_domain(frame, vec![start, end])
}

/// The singular ball B_{n,m}(a) = E_{n,m}(a,a).
pub fn make_ball(frame: ConeFrame, a: &Rational) -> Result<DomainBoundary, DomainError> {
    make_singular_ellipsoid(frame, a, a)
}

/// Minimum of `w × p` over the vertices `p` of ∂⁺Ω, with a minimizing vertex.
///
/// Ties resolve to the vertex closest to the ray endpoint.
pub fn support_value(b: &DomainBoundary, w: IntVec2) -> Result<(Rational, RatVec2), DomainError> {
    if w.x <= 0 {
        return Err(DomainError::SupportDirection(w));
    }
    let w = w.to_rat();
    let mut best: Option<(Rational, &RatVec2)> = None;
    for p in &b.vertices {
        let value = w.cross(p);
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, p));
        }
    }
    let (value, point) = best.expect("boundary has vertices");
    Ok((value, point.clone()))
}

/// The domain `r·Ω`.
pub fn scale_domain(b: &DomainBoundary, r: &Rational) -> Result<DomainBoundary, DomainError> {
    if !r.is_positive() {
        return Err(DomainError::NonPositive { name: "scale", value: r.clone() });
    }
    Ok(DomainBoundary {
        frame: b.frame,
        vertices: b.vertices.iter().map(|v| v.scale(r)).collect(),
    })
}

/// A nondecreasing sequence of exact values indexed from `k = 0`, with
/// `c₀ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CapacitySequence {
    values: Vec<Rational>,
}

impl CapacitySequence {
    pub fn new(values: Vec<Rational>) -> Result<Self, DomainError> {
        if let Some(first) = values.first() {
            if !first.is_zero() {
                return Err(DomainError::NotCapacitySequence(0));
            }
        }
        if let Some(k) = (1..values.len()).find(|&k| values[k] < values[k - 1]) {
            return Err(DomainError::NotCapacitySequence(k));
        }
        Ok(CapacitySequence { values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&Rational> {
        self.values.get(k)
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.values
    }

    /// The first `count` terms.
    pub fn truncated(&self, count: usize) -> CapacitySequence {
        CapacitySequence {
            values: self.values.iter().take(count).cloned().collect(),
        }
    }

    /// Every term multiplied by `r >= 0`.
    pub fn scaled(&self, r: &Rational) -> CapacitySequence {
        CapacitySequence {
            values: self.values.iter().map(|v| v * r).collect(),
        }
    }
}

/// Failure to read a domain document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("not valid JSON: {0}")]
    Json(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid domain: {0}")]
    Invalid(#[from] DomainError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> DecodeError {
    DecodeError::Schema { path: path.into(), message: message.into() }
}

fn encode_coordinate(out: &mut String, value: &Rational) {
    match rational::as_i64(value) {
        Some(i) => write!(out, "{i}").expect("writing to a String"),
        None => write!(out, "\"{value}\"").expect("writing to a String"),
    }
}

/// Serializes a boundary as a domain document. Identical boundaries give
/// identical bytes.
pub fn encode_domain(b: &DomainBoundary) -> String {
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"n\": {},", b.frame.n).unwrap();
    writeln!(out, "  \"m\": {},", b.frame.m).unwrap();
    writeln!(out, "  \"boundary\": [").unwrap();
    for (i, v) in b.vertices.iter().enumerate() {
        out.push_str("    [");
        encode_coordinate(&mut out, &v.x);
        out.push_str(", ");
        encode_coordinate(&mut out, &v.y);
        out.push(']');
        if i + 1 < b.vertices.len() {
            out.push(',');
        }
        out.push('\n');
    }
    writeln!(out, "  ]").unwrap();
    writeln!(out, "}}").unwrap();
    out
}

fn decode_integer(value: &Value, path: &str) -> Result<i64, DecodeError> {
    value
        .as_i64()
        .ok_or_else(|| schema(path, "expected an integer"))
}

fn decode_coordinate(value: &Value, path: &str) -> Result<Rational, DecodeError> {
    match value {
        Value::Number(num) => num
            .as_i64()
            .map(int)
            .ok_or_else(|| schema(path, "numbers must be integers; write fractions as \"p/q\"")),
        Value::String(text) => parse_rational(text).map_err(|e| schema(path, e.to_string())),
        _ => Err(schema(path, "expected an integer or a \"p/q\" string")),
    }
}

/// Parses and validates a domain document.
pub fn decode_domain(text: &str) -> Result<DomainBoundary, DecodeError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| DecodeError::Json(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("$", "expected an object with fields n, m, boundary"))?;
    if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "n" | "m" | "boundary")) {
        return Err(schema(key.as_str(), "unknown field"));
    }
    let field = |name: &str| obj.get(name).ok_or_else(|| schema(name, "missing field"));
    let n = decode_integer(field("n")?, "n")?;
    let m = decode_integer(field("m")?, "m")?;
    let frame = ConeFrame::new(n, m).map_err(|e| schema("n,m", e.to_string()))?;
    let rows = field("boundary")?
        .as_array()
        .ok_or_else(|| schema("boundary", "expected an array of [x, y] pairs"))?;
    let mut vertices = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let path = format!("boundary[{i}]");
        let pair = row
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema(path.as_str(), "expected a two-element array"))?;
        let x = decode_coordinate(&pair[0], &format!("{path}[0]"))?;
        let y = decode_coordinate(&pair[1], &format!("{path}[1]"))?;
        vertices.push(RatVec2::new(x, y));
    }
    Ok(validate_domain(frame, vertices)?)
}
