//! Concave (n,m)-lattice paths, their lattice counts and Ω-lengths.
//!
//! A non-empty path starts at `s·(n,m)` with `s >= 1`, ends at `(0,t)` with
//! `t >= 1`, and turns clockwise at every vertex. Edges are stored ray→axis
//! as a primitive direction `(p,q)` with `p < 0` and `n·q − m·p > 0`
//! together with a multiplicity.
//!
//! The ECH capacity `c_k` of a concave domain is the largest Ω-length among
//! paths enclosing exactly `k` counted lattice points.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::domain::{support_value, CapacitySequence, ConeFrame, DomainBoundary};
use crate::geometry::{count_int, primitive_decompose, twice_area_int, IntVec2};
use crate::rational::{int, Rational};

/// Largest lattice count the enumerator accepts.
pub const DEFAULT_MAX_LATTICE_COUNT: usize = 20;

/// Errors raised by path construction and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("edge {edge} has zero length or non-positive multiplicity")]
    DegenerateEdge { edge: usize },
    #[error("edge {edge} has direction {direction} outside the admissible fan")]
    DirectionOutsideFan { edge: usize, direction: IntVec2 },
    #[error("path turns convexly between edges {edge} and {}", edge + 1)]
    ConvexTurn { edge: usize },
    #[error("path ends at {0}, not on the positive y-axis")]
    EndOffAxis(IntVec2),
    #[error("start multiple must be at least 1 for a non-empty path and 0 for the empty path, got {0}")]
    StartMultiple(i64),
    #[error("vertex {0} is not on the ray through (n,m)")]
    StartOffRay(IntVec2),
    #[error("path frame {path} differs from domain frame {domain}")]
    FrameMismatch { path: ConeFrame, domain: ConeFrame },
    #[error("lattice count {requested} exceeds the enumeration bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("malformed path `{0}`; expected `x,y;x,y;...` or `empty`")]
    Malformed(String),
}

/// One edge: a primitive direction traversed `multiplicity` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub direction: IntVec2,
    pub multiplicity: i64,
}

impl Edge {
    /// The full edge vector `multiplicity · direction`.
    pub fn vector(&self) -> IntVec2 {
        self.direction.scale(self.multiplicity)
    }
}

/// A validated concave (n,m)-lattice path.
///
/// The derived ordering (start multiple, end height, edges) is the
/// canonical order used by every enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConcavePath {
    frame: ConeFrame,
    start: i64,
    end: i64,
    edges: Vec<Edge>,
}

impl ConcavePath {
    /// The empty path, the generator of index zero.
    pub fn empty(frame: ConeFrame) -> Self {
        ConcavePath { frame, start: 0, end: 0, edges: Vec::new() }
    }

    /// Validates a path given by its start multiple and edge vectors.
    ///
    /// Each `(vector, k)` contributes `k · vector`; vectors need not be
    /// primitive, and consecutive parallel edges are merged.
    pub fn new(frame: ConeFrame, start: i64, edges: &[(IntVec2, i64)]) -> Result<Self, PathError> {
        if edges.is_empty() {
            return if start == 0 {
                Ok(ConcavePath::empty(frame))
            } else {
                Err(PathError::StartMultiple(start))
            };
        }
        if start < 1 {
            return Err(PathError::StartMultiple(start));
        }
        let mut merged: Vec<Edge> = Vec::with_capacity(edges.len());
        for (i, &(v, k)) in edges.iter().enumerate() {
            if k < 1 {
                return Err(PathError::DegenerateEdge { edge: i });
            }
            let (direction, g) = primitive_decompose(v).map_err(|_| PathError::DegenerateEdge { edge: i })?;
            if !frame.admits_direction(direction) {
                return Err(PathError::DirectionOutsideFan { edge: i, direction });
            }
            match merged.last_mut() {
                Some(last) if last.direction == direction => last.multiplicity += g * k,
                _ => merged.push(Edge { direction, multiplicity: g * k }),
            }
        }
        if let Some(edge) = (1..merged.len()).find(|&i| merged[i - 1].direction.cross(merged[i].direction) >= 0) {
            return Err(PathError::ConvexTurn { edge: edge - 1 });
        }
        let end_point = merged
            .iter()
            .fold(frame.ray().scale(start), |acc, e| acc + e.vector());
        if end_point.x != 0 || end_point.y < 1 {
            return Err(PathError::EndOffAxis(end_point));
        }
        Ok(ConcavePath { frame, start, end: end_point.y, edges: merged })
    }

    /// Builds a path from its vertex list, traversed ray→axis.
    pub fn from_vertices(frame: ConeFrame, vertices: &[IntVec2]) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Ok(ConcavePath::empty(frame));
        }
        let first = vertices[0];
        let ray = frame.ray();
        if ray.cross(first) != 0 || first.x % ray.x != 0 || first.x <= 0 {
            return Err(PathError::StartOffRay(first));
        }
        let start = first.x / ray.x;
        let edges: Vec<(IntVec2, i64)> = vertices.windows(2).map(|w| (w[1] - w[0], 1)).collect();
        ConcavePath::new(frame, start, &edges)
    }

    /// Parses `x,y;x,y;...` (vertices ray→axis) or `empty`.
    pub fn parse(frame: ConeFrame, text: &str) -> Result<Self, PathError> {
        let trimmed = text.trim();
        if trimmed == "empty" {
            return Ok(ConcavePath::empty(frame));
        }
        let malformed = || PathError::Malformed(text.to_string());
        let vertices = trimmed
            .split(';')
            .map(|pair| {
                let (x, y) = pair.split_once(',').ok_or_else(malformed)?;
                Ok(IntVec2::new(
                    x.trim().parse().map_err(|_| malformed())?,
                    y.trim().parse().map_err(|_| malformed())?,
                ))
            })
            .collect::<Result<Vec<_>, PathError>>()?;
        if vertices.len() < 2 {
            return Err(malformed());
        }
        ConcavePath::from_vertices(frame, &vertices)
    }

    pub fn frame(&self) -> ConeFrame {
        self.frame
    }

    /// `s` with start vertex `s·(n,m)`; zero for the empty path.
    pub fn start_multiple(&self) -> i64 {
        self.start
    }

    /// `t` with end vertex `(0,t)`; zero for the empty path.
    pub fn end_height(&self) -> i64 {
        self.end
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sum of the edge multiplicities.
    pub fn total_multiplicity(&self) -> i64 {
        self.edges.iter().map(|e| e.multiplicity).sum()
    }

    /// Vertices from `s·(n,m)` to `(0,t)`; empty for the empty path.
    pub fn vertices(&self) -> Vec<IntVec2> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        let mut cur = self.frame.ray().scale(self.start);
        out.push(cur);
        for e in &self.edges {
            cur = cur + e.vector();
            out.push(cur);
        }
        out
    }

    /// Start vertex of every edge, paired with the edge.
    pub fn positioned_edges(&self) -> Vec<(IntVec2, Edge)> {
        self.vertices().into_iter().zip(self.edges.iter().copied()).collect()
    }

    /// The closed region bounded by the ray segment, the path and the
    /// y-axis segment, as a counterclockwise lattice polygon.
    pub fn region(&self) -> Vec<IntVec2> {
        let mut poly = vec![IntVec2::ZERO];
        poly.extend(self.vertices());
        poly
    }

    /// Lattice points of the region not lying on the path. Points on the
    /// two axis segments, including the origin, are counted.
    pub fn lattice_count(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let verts = self.vertices();
        let excluded: Vec<(IntVec2, IntVec2)> = verts.windows(2).map(|w| (w[0], w[1])).collect();
        count_int(&self.region(), &excluded)
    }

    /// Twice the area of the region.
    pub fn twice_area(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            twice_area_int(&self.region())
        }
    }

    /// Height of the path above `x`, for `0 <= x <= s·n`.
    pub fn height_at(&self, x: &Rational) -> Option<Rational> {
        let verts = self.vertices();
        verts.windows(2).find_map(|w| {
            let (a, b) = (w[0], w[1]);
            let (xa, xb) = (int(a.x), int(b.x));
            if *x <= xa && *x >= xb {
                let t = (&xa - x) / (&xa - &xb);
                Some(int(a.y) + t * int(b.y - a.y))
            } else {
                None
            }
        })
    }

    /// True when this path is nowhere strictly above `other`, i.e. its
    /// region is contained in the region of `other`.
    pub fn never_above(&self, other: &ConcavePath) -> bool {
        if self.frame != other.frame {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        if other.is_empty() || self.start > other.start {
            return false;
        }
        let limit = self.start * self.frame.n();
        let mut xs: Vec<i64> = self.vertices().iter().map(|v| v.x).collect();
        xs.extend(other.vertices().iter().map(|v| v.x).filter(|&x| x <= limit));
        xs.iter().all(|&x| {
            let x = int(x);
            match (self.height_at(&x), other.height_at(&x)) {
                (Some(mine), Some(theirs)) => mine <= theirs,
                _ => false,
            }
        })
    }
}

impl fmt::Display for ConcavePath {
    /// `x,y;x,y;...` or `empty`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.vertices().iter().map(|v| format!("{},{}", v.x, v.y)).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Checks a path for validity; re-running the constructor on the stored
/// data recomputes the endpoints.
pub fn validate_path(frame: ConeFrame, start: i64, edges: &[(IntVec2, i64)]) -> Result<ConcavePath, PathError> {
    ConcavePath::new(frame, start, edges)
}

/// Pick's count of lattice points in the region of `path` not on the path.
pub fn lattice_count_by_pick(path: &ConcavePath) -> usize {
    if path.is_empty() {
        return 0;
    }
    let twice = path.twice_area() + path.start + path.end - path.total_multiplicity();
    debug_assert!(twice >= 0 && twice % 2 == 0);
    (twice / 2) as usize
}

/// `l_Ω(Λ)`: for each edge, `w × p_w` with `w` the edge vector reversed
/// (axis→ray) and `p_w` its support point on ∂⁺Ω.
pub fn omega_length(b: &DomainBoundary, path: &ConcavePath) -> Result<Rational, PathError> {
    if b.frame() != path.frame {
        return Err(PathError::FrameMismatch { path: path.frame, domain: b.frame() });
    }
    let mut total = Rational::zero();
    for e in &path.edges {
        let w = -e.vector();
        let (value, _) = support_value(b, w).expect("reversed fan directions have positive x");
        total += value;
    }
    Ok(total)
}

/// Every valid path with lattice count at most a bound, grouped by count.
#[derive(Debug, Clone)]
pub struct PathCatalog {
    frame: ConeFrame,
    by_count: Vec<Vec<ConcavePath>>,
}

impl PathCatalog {
    /// Enumerates all paths with lattice count `<= max_count`.
    ///
    /// Non-empty paths count the origin, the `s − 1` interior ray points and
    /// the `t − 1` interior axis points, so `s + t <= max_count + 1`. Points
    /// are counted column by column as edges are added; a partial path is
    /// pruned once its columns plus the `t` axis points exceed the bound.
    pub fn build(frame: ConeFrame, max_count: usize) -> Result<Self, PathError> {
        if max_count > DEFAULT_MAX_LATTICE_COUNT {
            return Err(PathError::BoundExceeded { requested: max_count, bound: DEFAULT_MAX_LATTICE_COUNT });
        }
        let max = max_count as i64;
        let endpoints: Vec<(i64, i64)> = (1..=max)
            .flat_map(|s| (1..=(max + 1 - s)).map(move |t| (s, t)))
            .collect();
        let found: Vec<Vec<(usize, ConcavePath)>> = endpoints
            .par_iter()
            .map(|&(s, t)| {
                let mut out = Vec::new();
                let mut search = Search::new(frame, s, t, max);
                search.run(&mut out);
                out
            })
            .collect();
        let mut by_count: Vec<Vec<ConcavePath>> = vec![Vec::new(); max_count + 1];
        by_count[0].push(ConcavePath::empty(frame));
        for (count, path) in found.into_iter().flatten() {
            by_count[count].push(path);
        }
        for paths in &mut by_count {
            paths.sort();
        }
        Ok(PathCatalog { frame, by_count })
    }

    pub fn frame(&self) -> ConeFrame {
        self.frame
    }

    pub fn max_count(&self) -> usize {
        self.by_count.len() - 1
    }

    /// Paths with lattice count exactly `count`, canonically ordered.
    pub fn paths_with_count(&self, count: usize) -> &[ConcavePath] {
        self.by_count.get(count).map_or(&[], Vec::as_slice)
    }

    /// `(count, path)` for every catalogued path.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &ConcavePath)> {
        self.by_count
            .iter()
            .enumerate()
            .flat_map(|(count, paths)| paths.iter().map(move |p| (count, p)))
    }
}

/// Depth-first search over concave vertex chains with fixed endpoints.
struct Search {
    frame: ConeFrame,
    end: IntVec2,
    y_max: i64,
    max_count: i64,
    s: i64,
    t: i64,
    counted: i64,
    vertices: Vec<IntVec2>,
    edges: Vec<Edge>,
}

impl Search {
    fn new(frame: ConeFrame, s: i64, t: i64, max_count: i64) -> Self {
        let start = frame.ray().scale(s);
        Search {
            frame,
            end: IntVec2::new(0, t),
            y_max: start.y.max(t),
            max_count,
            s,
            t,
            counted: 0,
            vertices: vec![start],
            edges: Vec::new(),
        }
    }

    /// Counted lattice points in the columns `next.x <= x < cur.x` under
    /// the edge `cur → next`, lying on or above the ray.
    fn column_count(&self, cur: IntVec2, next: IntVec2) -> i64 {
        let d = next - cur;
        let den = -d.x;
        let (n, m) = (self.frame.n(), self.frame.m());
        (next.x..cur.x)
            .map(|x| {
                let num = cur.y * den + (cur.x - x) * d.y;
                let top = num_integer::Integer::div_ceil(&num, &den);
                let bottom = num_integer::Integer::div_ceil(&(m * x), &n);
                (top - bottom).max(0)
            })
            .sum()
    }

    fn run(&mut self, out: &mut Vec<(usize, ConcavePath)>) {
        let cur = *self.vertices.last().expect("start vertex");
        let prev = self.edges.last().map(|e| e.direction);
        for x in 0..cur.x {
            for y in 0..=self.y_max {
                let next = IntVec2::new(x, y);
                let (direction, step) = match primitive_decompose(next - cur) {
                    Ok(pair) => pair,
                    Err(_) => continue,
                };
                if !self.frame.admits_direction(direction) {
                    continue;
                }
                if prev.is_some_and(|p| p.cross(direction) >= 0) {
                    continue;
                }
                let at_end = next == self.end;
                if !at_end {
                    if x <= 0 || self.frame.ray().cross(next) <= 0 {
                        continue;
                    }
                    if direction.cross(self.end - next) >= 0 {
                        continue;
                    }
                }
                let counted = self.counted + self.column_count(cur, next);
                let bound = if at_end { counted } else { counted + self.t };
                if bound > self.max_count {
                    continue;
                }
                self.vertices.push(next);
                self.edges.push(Edge { direction, multiplicity: step });
                if at_end {
                    let path = ConcavePath {
                        frame: self.frame,
                        start: self.s,
                        end: self.t,
                        edges: self.edges.clone(),
                    };
                    debug_assert_eq!(counted as usize, path.lattice_count());
                    out.push((counted as usize, path));
                } else {
                    let saved = std::mem::replace(&mut self.counted, counted);
                    self.run(out);
                    self.counted = saved;
                }
                self.vertices.pop();
                self.edges.pop();
            }
        }
    }
}

/// Every valid path with lattice count exactly `target`, canonically
/// ordered.
pub fn enumerate_paths(frame: ConeFrame, target: usize) -> Result<Vec<ConcavePath>, PathError> {
    Ok(PathCatalog::build(frame, target)?.paths_with_count(target).to_vec())
}

/// `c_k = max { l_Ω(Λ) : L(Λ) = k }`.
pub fn capacity_by_paths(b: &DomainBoundary, k: usize) -> Result<Rational, PathError> {
    let catalog = PathCatalog::build(b.frame(), k)?;
    max_length(b, catalog.paths_with_count(k))
}

/// `c_0, …, c_{count−1}` by path maximization.
pub fn capacities_by_paths(b: &DomainBoundary, count: usize) -> Result<CapacitySequence, PathError> {
    let catalog = PathCatalog::build(b.frame(), count.saturating_sub(1))?;
    capacities_from_catalog(b, &catalog, count)
}

/// `c_0, …, c_{count−1}` from an existing catalog of matching frame.
pub fn capacities_from_catalog(
    b: &DomainBoundary,
    catalog: &PathCatalog,
    count: usize,
) -> Result<CapacitySequence, PathError> {
    if catalog.frame != b.frame() {
        return Err(PathError::FrameMismatch { path: catalog.frame, domain: b.frame() });
    }
    if count > catalog.max_count() + 1 {
        return Err(PathError::BoundExceeded { requested: count - 1, bound: catalog.max_count() });
    }
    let values = (0..count)
        .map(|k| max_length(b, catalog.paths_with_count(k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CapacitySequence::new(values).expect("path capacities are nondecreasing"))
}

fn max_length(b: &DomainBoundary, paths: &[ConcavePath]) -> Result<Rational, PathError> {
    let mut best = Rational::zero();
    for p in paths {
        let len = omega_length(b, p)?;
        if len > best {
            best = len;
        }
    }
    Ok(best)
}
