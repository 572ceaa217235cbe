//! The combinatorial embedded contact complex of a concave lens space.
//!
//! Generators are concave paths with an `e` or `h` label on every edge,
//! graded by `I = 2·L + h`. The differential lowers the index by one: it
//! sends a generator `A` to every `B` such that `A` is obtained from `B`
//! by rounding a corner `c` of `P_B` carrying `k >= 1` incident `h`
//! labels, where the rounded arc of `A` carries exactly `k − 1` of them.
//! Coefficients live in the two-element field.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::domain::{CapacitySequence, ConeFrame, DomainBoundary};
use crate::geometry::{primitive_decompose, IntVec2};
use crate::paths::{omega_length, ConcavePath, PathCatalog, PathError, DEFAULT_MAX_LATTICE_COUNT};
use crate::rational::Rational;

/// Largest index any slice or generator query accepts.
pub const DEFAULT_MAX_INDEX: usize = 2 * DEFAULT_MAX_LATTICE_COUNT;

/// Errors raised by the complex.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("index {requested} exceeds the bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("boundary pairs need an index gap of 1, got {upper} and {lower}")]
    IndexGap { upper: usize, lower: usize },
    #[error("{labels} labels given for a path with {edges} edges")]
    LabelCount { labels: usize, edges: usize },
    #[error("label `{0}` is neither `e` nor `h`")]
    BadLabel(char),
    #[error("generators belong to different frames")]
    FrameMismatch,
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Orbit type carried by an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// All covers elliptic.
    E,
    /// One hyperbolic orbit plus `multiplicity − 1` elliptic covers.
    H,
}

impl Label {
    pub fn from_char(c: char) -> Result<Self, ComplexError> {
        match c {
            'e' => Ok(Label::E),
            'h' => Ok(Label::H),
            other => Err(ComplexError::BadLabel(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Label::E => 'e',
            Label::H => 'h',
        }
    }
}

/// A concave path with one label per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedPath {
    path: ConcavePath,
    labels: Vec<Label>,
}

impl DecoratedPath {
    pub fn new(path: ConcavePath, labels: Vec<Label>) -> Result<Self, ComplexError> {
        if labels.len() != path.edges().len() {
            return Err(ComplexError::LabelCount { labels: labels.len(), edges: path.edges().len() });
        }
        Ok(DecoratedPath { path, labels })
    }

    /// The path with every edge labelled `e`.
    pub fn elliptic(path: ConcavePath) -> Self {
        let labels = vec![Label::E; path.edges().len()];
        DecoratedPath { path, labels }
    }

    pub fn empty(frame: ConeFrame) -> Self {
        DecoratedPath::elliptic(ConcavePath::empty(frame))
    }

    /// Parses `x,y;x,y;...:labels` or `empty`. Without a `:labels` suffix
    /// every edge is labelled `e`.
    pub fn parse(frame: ConeFrame, text: &str) -> Result<Self, ComplexError> {
        let (path_text, labels) = match text.split_once(':') {
            Some((p, l)) => (p, Some(l.trim())),
            None => (text, None),
        };
        let path = ConcavePath::parse(frame, path_text)?;
        match labels {
            None => Ok(DecoratedPath::elliptic(path)),
            Some(l) => {
                let labels = l.chars().map(Label::from_char).collect::<Result<Vec<_>, _>>()?;
                DecoratedPath::new(path, labels)
            }
        }
    }

    pub fn path(&self) -> &ConcavePath {
        &self.path
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Number of `h` labels.
    pub fn h_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Label::H).count()
    }

    pub fn is_elliptic(&self) -> bool {
        self.h_count() == 0
    }
}

impl fmt::Display for DecoratedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return write!(f, "empty");
        }
        let labels: String = self.labels.iter().map(|l| l.as_char()).collect();
        write!(f, "{}:{}", self.path, labels)
    }
}

/// `I = 2·L + h`.
pub fn index(g: &DecoratedPath) -> usize {
    2 * g.path.lattice_count() + g.h_count()
}

/// A decorated path together with its cached index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    decorated: DecoratedPath,
    index: usize,
}

impl Generator {
    pub fn new(decorated: DecoratedPath) -> Self {
        let index = index(&decorated);
        Generator { decorated, index }
    }

    pub fn decorated(&self) -> &DecoratedPath {
        &self.decorated
    }

    pub fn path(&self) -> &ConcavePath {
        &self.decorated.path
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

fn check_index(requested: usize) -> Result<(), ComplexError> {
    if requested > DEFAULT_MAX_INDEX {
        Err(ComplexError::BoundExceeded { requested, bound: DEFAULT_MAX_INDEX })
    } else {
        Ok(())
    }
}

/// All labelings of `path` with exactly `h` labels `H`, in lexicographic
/// order of the label vector.
fn labelings(edges: usize, h: usize) -> Vec<Vec<Label>> {
    if h > edges {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(edges);
    fn go(edges: usize, h: usize, current: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        let placed = current.iter().filter(|&&l| l == Label::H).count();
        let remaining = edges - current.len();
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        if h - placed < remaining {
            current.push(Label::E);
            go(edges, h, current, out);
            current.pop();
        }
        if placed < h {
            current.push(Label::H);
            go(edges, h, current, out);
            current.pop();
        }
    }
    go(edges, h, &mut current, &mut out);
    out
}

fn generators_from_catalog(catalog: &PathCatalog, target: usize) -> Vec<Generator> {
    let mut out: Vec<Generator> = (0..=target / 2)
        .flat_map(|count| {
            let h = target - 2 * count;
            catalog.paths_with_count(count).iter().flat_map(move |p| {
                labelings(p.edges().len(), h)
                    .into_iter()
                    .map(move |labels| Generator { decorated: DecoratedPath { path: p.clone(), labels }, index: target })
            })
        })
        .collect();
    out.sort();
    out
}

/// All generators of index `target`, canonically ordered.
pub fn generators_of_index(frame: ConeFrame, target: usize) -> Result<Vec<Generator>, ComplexError> {
    check_index(target)?;
    let catalog = PathCatalog::build(frame, target / 2)?;
    Ok(generators_from_catalog(&catalog, target))
}

/// Lattice points of the closed triangle `(a,b,c)`.
fn triangle_points(a: IntVec2, b: IntVec2, c: IntVec2) -> Vec<IntVec2> {
    let orient = (b - a).cross(c - a).signum();
    let (x0, x1) = (a.x.min(b.x).min(c.x), a.x.max(b.x).max(c.x));
    let (y0, y1) = (a.y.min(b.y).min(c.y), a.y.max(b.y).max(c.y));
    let inside = |z: IntVec2| {
        [(a, b), (b, c), (c, a)]
            .iter()
            .all(|&(u, v)| (v - u).cross(z - u) * orient >= 0)
    };
    (x0..=x1)
        .flat_map(|x| (y0..=y1).map(move |y| IntVec2::new(x, y)))
        .filter(|&z| inside(z))
        .collect()
}

/// The path obtained from `path` by rounding the corner at vertex `corner`.
///
/// With `p` one primitive step before the corner (or `(s+1)·(n,m)` at the
/// start) and `q` one primitive step after it (or `(0,t+1)` at the end),
/// the corner is replaced by the boundary of the convex hull of the lattice
/// points of the triangle `(p,c,q)` other than `c`. Returns `None` when the
/// result is not a valid concave path.
pub fn round_corner(path: &ConcavePath, corner: usize) -> Option<ConcavePath> {
    let frame = path.frame();
    let vs = path.vertices();
    if corner >= vs.len() {
        return None;
    }
    let edges = path.edges();
    let c = vs[corner];
    let p = if corner == 0 {
        frame.ray().scale(path.start_multiple() + 1)
    } else {
        c - edges[corner - 1].direction
    };
    let q = if corner == vs.len() - 1 {
        IntVec2::new(0, path.end_height() + 1)
    } else {
        c + edges[corner].direction
    };
    let pts: Vec<IntVec2> = triangle_points(p, c, q).into_iter().filter(|&z| z != c).collect();
    let mut chain = vec![p];
    let mut x = p;
    while x != q {
        let next = pts
            .iter()
            .copied()
            .filter(|&y| y != x && pts.iter().all(|&z| (y - x).cross(z - x) <= 0))
            .max_by_key(|&y| (y - x).x.abs() + (y - x).y.abs())?;
        chain.push(next);
        x = next;
        if chain.len() > pts.len() + 1 {
            return None;
        }
    }
    let mut full: Vec<IntVec2> = vs[..corner].to_vec();
    full.extend(chain);
    full.extend_from_slice(&vs[corner + 1..]);
    full.dedup();
    let first = full[0];
    if first.x % frame.n() != 0 {
        return None;
    }
    let start = first.x / frame.n();
    let steps: Vec<(IntVec2, i64)> = full.windows(2).map(|w| (w[1] - w[0], 1)).collect();
    if steps.iter().any(|&(d, _)| primitive_decompose(d).is_err()) {
        return None;
    }
    ConcavePath::new(frame, start, &steps).ok()
}

/// Every `(corner, A)` such that `A` is obtained from `b` by rounding a
/// corner, with multiplicity over corners.
fn coboundary_candidates(b: &DecoratedPath) -> Vec<DecoratedPath> {
    if b.path.is_empty() {
        return Vec::new();
    }
    let positioned_b = b.path.positioned_edges();
    let edge_count = b.labels.len();
    let mut out = Vec::new();
    for corner in 0..=edge_count {
        let incident = [corner.checked_sub(1), (corner < edge_count).then_some(corner)];
        let k = incident.iter().flatten().filter(|&&e| b.labels[e] == Label::H).count();
        if k == 0 {
            continue;
        }
        let Some(rounded) = round_corner(&b.path, corner) else {
            continue;
        };
        let positioned_a = rounded.positioned_edges();
        let kept: Vec<Option<Label>> = positioned_a
            .iter()
            .map(|pe| positioned_b.iter().position(|qe| qe == pe).map(|i| b.labels[i]))
            .collect();
        let free: Vec<usize> = (0..kept.len()).filter(|&i| kept[i].is_none()).collect();
        for choice in labelings(free.len(), k - 1) {
            let mut labels: Vec<Label> = kept.iter().map(|l| l.unwrap_or(Label::E)).collect();
            for (&slot, &label) in free.iter().zip(&choice) {
                labels[slot] = label;
            }
            out.push(DecoratedPath { path: rounded.clone(), labels });
        }
    }
    out
}

/// `⟨∂A, B⟩` in the two-element field.
pub fn boundary_pair(a: &Generator, b: &Generator) -> Result<bool, ComplexError> {
    if a.path().frame() != b.path().frame() {
        return Err(ComplexError::FrameMismatch);
    }
    if a.index != b.index + 1 {
        return Err(ComplexError::IndexGap { upper: a.index, lower: b.index });
    }
    let hits = coboundary_candidates(&b.decorated).iter().filter(|&d| *d == a.decorated).count();
    Ok(hits % 2 == 1)
}

/// All generators `B` with `⟨∂A, B⟩ = 1`, canonically ordered.
pub fn differential(a: &Generator) -> Result<Vec<Generator>, ComplexError> {
    if a.index == 0 {
        return Ok(Vec::new());
    }
    let lower = generators_of_index(a.path().frame(), a.index - 1)?;
    let mut out = Vec::new();
    for b in lower {
        if boundary_pair(a, &b)? {
            out.push(b);
        }
    }
    Ok(out)
}

/// A dense matrix over the two-element field stored as bit rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<Vec<u64>>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { rows: vec![vec![0; cols.div_ceil(64)]; rows], cols }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] ^= 1 << (c % 64);
    }

    /// Nonzero entries as `(row, column)` pairs in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        (0..self.rows())
            .flat_map(|r| (0..self.cols).filter(move |&c| self.get(r, c)).map(move |c| (r, c)))
            .collect()
    }

    /// Rank over the two-element field.
    pub fn rank(&self) -> usize {
        rank_of(self.rows.clone())
    }

    /// `self · other`, with rows as sources: row `r` of the product is the
    /// sum of the rows of `other` selected by row `r` of `self`.
    pub fn compose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows(), "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows(), other.cols);
        for r in 0..self.rows() {
            for c in (0..self.cols).filter(|&c| self.get(r, c)) {
                xor_into(&mut out.rows[r], &other.rows[c]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&w| w == 0))
    }

    /// Sum of the rows selected by `mask`.
    fn combine(&self, mask: &[bool]) -> Vec<u64> {
        let mut acc = vec![0; self.cols.div_ceil(64)];
        for (row, _) in self.rows.iter().zip(mask).filter(|(_, &m)| m) {
            xor_into(&mut acc, row);
        }
        acc
    }
}

fn xor_into(acc: &mut [u64], row: &[u64]) {
    for (a, b) in acc.iter_mut().zip(row) {
        *a ^= b;
    }
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn rank_of(rows: Vec<Vec<u64>>) -> usize {
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for mut row in rows {
        while let Some(bit) = leading_bit(&row) {
            match pivots.get(&bit) {
                Some(p) => xor_into(&mut row, p),
                None => {
                    pivots.insert(bit, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Basis of `{x : Σ x_i · row_i = 0}` over the rows whose `mask` entry is
/// set, as vectors indexed by all rows.
fn left_kernel(m: &BitMatrix, mask: &[bool]) -> Vec<Vec<u64>> {
    let n = m.rows();
    let words = n.div_ceil(64);
    let mut pivots: HashMap<usize, (Vec<u64>, Vec<u64>)> = HashMap::new();
    let mut kernel = Vec::new();
    for r in (0..n).filter(|&r| mask[r]) {
        let mut row = m.rows[r].clone();
        let mut track = vec![0u64; words];
        track[r / 64] |= 1 << (r % 64);
        loop {
            match leading_bit(&row) {
                None => {
                    kernel.push(track);
                    break;
                }
                Some(bit) => match pivots.get(&bit) {
                    Some((p, t)) => {
                        xor_into(&mut row, p);
                        xor_into(&mut track, t);
                    }
                    None => {
                        pivots.insert(bit, (row, track));
                        break;
                    }
                },
            }
        }
    }
    kernel
}

/// Rank of the homology group in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomologyRank {
    pub index: usize,
    pub rank: usize,
    /// False for the top degree of a slice, where only the kernel is known.
    pub complete: bool,
}

/// Generators and boundary matrices for indices `0..=max_index`.
///
/// `boundary(I)` has one row per index-`I` generator and one column per
/// index-`(I−1)` generator.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    frame: ConeFrame,
    generators: Vec<Vec<Generator>>,
    boundaries: Vec<BitMatrix>,
}

impl ComplexSlice {
    pub fn build(frame: ConeFrame, max_index: usize) -> Result<Self, ComplexError> {
        check_index(max_index)?;
        let catalog = PathCatalog::build(frame, max_index / 2)?;
        let generators: Vec<Vec<Generator>> = (0..=max_index)
            .into_par_iter()
            .map(|i| generators_from_catalog(&catalog, i))
            .collect();
        let positions: Vec<HashMap<&DecoratedPath, usize>> = generators
            .iter()
            .map(|gens| gens.iter().enumerate().map(|(i, g)| (&g.decorated, i)).collect())
            .collect();
        let mut boundaries = vec![BitMatrix::zeros(generators[0].len(), 0)];
        for i in 1..=max_index {
            let contributions: Vec<Vec<usize>> = generators[i - 1]
                .par_iter()
                .map(|b| {
                    coboundary_candidates(&b.decorated)
                        .iter()
                        .filter_map(|a| positions[i].get(a).copied())
                        .collect()
                })
                .collect();
            let mut d = BitMatrix::zeros(generators[i].len(), generators[i - 1].len());
            for (col, rows) in contributions.iter().enumerate() {
                for &row in rows {
                    d.flip(row, col);
                }
            }
            boundaries.push(d);
        }
        Ok(ComplexSlice { frame, generators, boundaries })
    }

    pub fn frame(&self) -> ConeFrame {
        self.frame
    }

    pub fn max_index(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn generators(&self, i: usize) -> &[Generator] {
        self.generators.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn dimension(&self, i: usize) -> usize {
        self.generators(i).len()
    }

    /// `∂_I`, from index `I` to index `I − 1`; `∂_0` has no columns.
    pub fn boundary(&self, i: usize) -> &BitMatrix {
        &self.boundaries[i]
    }

    /// Generators hit by `∂` applied to the given index-`I` generator.
    pub fn boundary_of(&self, i: usize, row: usize) -> Vec<&Generator> {
        let d = &self.boundaries[i];
        (0..d.cols()).filter(|&c| d.get(row, c)).map(|c| &self.generators[i - 1][c]).collect()
    }

    /// For each `I >= 2`, the number of nonzero entries of `∂_{I−1} ∘ ∂_I`.
    pub fn d_squared_defects(&self) -> Vec<(usize, usize)> {
        (2..=self.max_index())
            .map(|i| (i, self.boundaries[i].compose(&self.boundaries[i - 1]).entries().len()))
            .collect()
    }

    pub fn homology_ranks(&self) -> Vec<HomologyRank> {
        let top = self.max_index();
        (0..=top)
            .map(|i| {
                let out = self.boundaries[i].rank();
                let incoming = if i < top { self.boundaries[i + 1].rank() } else { 0 };
                HomologyRank { index: i, rank: self.dimension(i) - out - incoming, complete: i < top }
            })
            .collect()
    }

    /// Structured text export: generator descriptors and boundary matrices
    /// as `(row, column)` lists.
    pub fn export_json(&self) -> String {
        let generators: Vec<serde_json::Value> = self
            .generators
            .iter()
            .flatten()
            .map(|g| {
                let edges: Vec<serde_json::Value> = g
                    .path()
                    .edges()
                    .iter()
                    .zip(g.decorated.labels())
                    .map(|(e, l)| {
                        json!({
                            "direction": [e.direction.x, e.direction.y],
                            "multiplicity": e.multiplicity,
                            "label": l.as_char().to_string(),
                        })
                    })
                    .collect();
                json!({
                    "index": g.index,
                    "start": g.path().start_multiple(),
                    "end": g.path().end_height(),
                    "edges": edges,
                    "text": g.decorated.to_string(),
                })
            })
            .collect();
        let boundaries: Vec<serde_json::Value> = (1..=self.max_index())
            .map(|i| {
                let entries: Vec<[usize; 2]> = self.boundaries[i].entries().into_iter().map(|(r, c)| [r, c]).collect();
                json!({ "index": i, "rows": self.dimension(i), "cols": self.dimension(i - 1), "entries": entries })
            })
            .collect();
        let counts: Vec<usize> = (0..=self.max_index()).map(|i| self.dimension(i)).collect();
        let doc = json!({
            "n": self.frame.n(),
            "m": self.frame.m(),
            "max_index": self.max_index(),
            "dimensions": counts,
            "generators": generators,
            "boundaries": boundaries,
        });
        serde_json::to_string_pretty(&doc).expect("json values serialize")
    }

    /// True when the sum of the all-`e` generators of index `i` is a cycle.
    pub fn elliptic_sum_is_cycle(&self, i: usize) -> bool {
        let mask: Vec<bool> = self.generators(i).iter().map(|g| g.decorated.is_elliptic()).collect();
        if i == 0 || i > self.max_index() {
            return true;
        }
        self.boundaries[i].combine(&mask).iter().all(|&w| w == 0)
    }

    /// True when the cycle given by `mask` over index-`i` generators is not
    /// a boundary.
    pub fn is_essential(&self, i: usize, mask: &[bool]) -> bool {
        let cycle = if i == 0 {
            true
        } else {
            self.boundaries[i].combine(mask).iter().all(|&w| w == 0)
        };
        if !cycle || mask.iter().all(|&m| !m) {
            return false;
        }
        let words = self.dimension(i).div_ceil(64);
        let mut vector = vec![0u64; words];
        for (j, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            vector[j / 64] |= 1 << (j % 64);
        }
        match self.boundaries.get(i + 1) {
            None => true,
            Some(d) => {
                let image = d.rows.clone();
                let base = rank_of(image.clone());
                let mut with = image;
                with.push(vector);
                rank_of(with) > base
            }
        }
    }
}

/// `c_k` as the largest action of an all-`e` generator of index `2k`, for
/// `k = 0..=k_max`.
pub fn capacities_from_complex(b: &DomainBoundary, k_max: usize) -> Result<CapacitySequence, ComplexError> {
    check_index(2 * k_max)?;
    let catalog = PathCatalog::build(b.frame(), k_max)?;
    let values = (0..=k_max)
        .map(|k| {
            let mut best = Rational::from_integer(0.into());
            for g in generators_from_catalog(&catalog, 2 * k).iter().filter(|g| g.decorated.is_elliptic()) {
                let len = omega_length(b, g.path())?;
                if len > best {
                    best = len;
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>, ComplexError>>()?;
    Ok(CapacitySequence::new(values).expect("elliptic maxima are nondecreasing"))
}

/// `c_k` as the least action level at which the index-`2k` generators
/// support a cycle that is not a boundary, for `k = 0..=k_max`.
pub fn capacities_by_filtration(b: &DomainBoundary, k_max: usize) -> Result<CapacitySequence, ComplexError> {
    check_index(2 * k_max + 1)?;
    let slice = ComplexSlice::build(b.frame(), 2 * k_max + 1)?;
    capacities_from_slice(b, &slice, k_max)
}

/// The filtration capacities using an existing slice reaching index
/// `2·k_max + 1`.
pub fn capacities_from_slice(
    b: &DomainBoundary,
    slice: &ComplexSlice,
    k_max: usize,
) -> Result<CapacitySequence, ComplexError> {
    if slice.frame != b.frame() {
        return Err(ComplexError::FrameMismatch);
    }
    if slice.max_index() < 2 * k_max + 1 {
        return Err(ComplexError::BoundExceeded { requested: 2 * k_max + 1, bound: slice.max_index() });
    }
    let mut values = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let i = 2 * k;
        let gens = slice.generators(i);
        let actions = gens.iter().map(|g| omega_length(b, g.path())).collect::<Result<Vec<_>, _>>()?;
        let mut levels = actions.clone();
        levels.sort();
        levels.dedup();
        let image = slice.boundaries[i + 1].rows.clone();
        let base = rank_of(image.clone());
        let found = levels.into_iter().find(|level| {
            let mask: Vec<bool> = actions.iter().map(|a| a <= level).collect();
            let kernel = if i == 0 {
                mask.iter()
                    .enumerate()
                    .filter(|(_, &m)| m)
                    .map(|(j, _)| {
                        let mut v = vec![0u64; gens.len().div_ceil(64)];
                        v[j / 64] |= 1 << (j % 64);
                        v
                    })
                    .collect()
            } else {
                left_kernel(&slice.boundaries[i], &mask)
            };
            let mut with = image.clone();
            with.extend(kernel);
            rank_of(with) > base
        });
        values.push(found.unwrap_or_else(|| Rational::from_integer(0.into())));
    }
    Ok(CapacitySequence::new(values).expect("filtration levels are nondecreasing"))
}

/// True when `beta` is nowhere strictly above `alpha`.
pub fn no_crossing(alpha: &ConcavePath, beta: &ConcavePath) -> bool {
    beta.never_above(alpha)
}

/// The slice class `σ_{α,β}` at the breakpoint direction `w`: edges whose
/// direction precedes `w` in the clockwise order contribute, with `α`
/// counted negatively and `β` positively, plus `(s_β − s_α)·(n,m)`.
pub fn slice_class(alpha: &DecoratedPath, beta: &DecoratedPath, w: IntVec2) -> Result<IntVec2, ComplexError> {
    let frame = alpha.path.frame();
    if beta.path.frame() != frame {
        return Err(ComplexError::FrameMismatch);
    }
    let before = |p: &ConcavePath| {
        p.edges()
            .iter()
            .filter(|e| e.direction.cross(w) < 0)
            .fold(IntVec2::ZERO, |acc, e| acc + e.vector())
    };
    let shift = frame.ray().scale(beta.path.start_multiple() - alpha.path.start_multiple());
    Ok(before(&beta.path) - before(&alpha.path) + shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_ball;
    use crate::rational::int;

    fn frame(n: i64, m: i64) -> ConeFrame {
        ConeFrame::new(n, m).unwrap()
    }

    fn gen(f: ConeFrame, text: &str) -> Generator {
        Generator::new(DecoratedPath::parse(f, text).unwrap())
    }

    #[test]
    fn index_examples() {
        let f = frame(2, 1);
        assert_eq!(gen(f, "empty").index(), 0);
        assert_eq!(gen(f, "2,1;0,1:e").index(), 2);
        assert_eq!(gen(f, "2,1;0,1:h").index(), 3);
    }

    #[test]
    fn generators_of_lens_space_three_two() {
        let f = frame(3, 2);
        assert_eq!(gen(f, "3,2;0,4:e").index(), 16);
        assert_eq!(gen(f, "3,2;0,4:h").index(), 17);
    }

    #[test]
    #[ignore = "the path (3,2)->(1,2)->(0,5) encloses 6 counted points, so 2L+h gives 12 rather than the reported 10"]
    fn three_two_generator_reported_as_index_ten() {
        assert_eq!(gen(frame(3, 2), "3,2;1,2;0,5:ee").index(), 10);
    }

    #[test]
    fn generators_of_small_index() {
        let f = frame(2, 1);
        assert_eq!(generators_of_index(f, 0).unwrap(), vec![gen(f, "empty")]);
        assert!(generators_of_index(f, 1).unwrap().is_empty());
        assert_eq!(generators_of_index(f, 2).unwrap(), vec![gen(f, "2,1;0,1:e")]);
        assert!(generators_of_index(f, DEFAULT_MAX_INDEX + 1).is_err());
    }

    #[test]
    fn boundary_pair_examples() {
        let f = frame(2, 1);
        let a = gen(f, "2,1;1,1;0,2:ee");
        let b = gen(f, "2,1;0,1:h");
        assert!(boundary_pair(&a, &b).unwrap());
        let c = gen(f, "2,1;0,1:e");
        assert!(matches!(
            boundary_pair(&c, &gen(f, "empty")),
            Err(ComplexError::IndexGap { upper: 2, lower: 0 })
        ));
        for x in generators_of_index(f, 5).unwrap().iter().filter(|g| g.decorated().is_elliptic()) {
            for y in generators_of_index(f, 4).unwrap().iter().filter(|g| g.decorated().is_elliptic()) {
                assert!(!boundary_pair(x, y).unwrap());
            }
        }
    }

    #[test]
    fn differential_examples() {
        let f = frame(2, 1);
        let a = gen(f, "2,1;1,1;0,2:ee");
        assert!(differential(&a).unwrap().contains(&gen(f, "2,1;0,1:h")));
        assert!(differential(&gen(f, "empty")).unwrap().is_empty());
        assert!(differential(&gen(f, "2,1;0,1:e")).unwrap().is_empty());
    }

    #[test]
    fn rounding_adds_the_corner() {
        let f = frame(2, 1);
        let p = ConcavePath::parse(f, "2,1;0,1").unwrap();
        let q = round_corner(&p, 1).unwrap();
        assert_eq!(q, ConcavePath::parse(f, "2,1;1,1;0,2").unwrap());
        assert_eq!(q.lattice_count(), p.lattice_count() + 1);
    }

    #[test]
    fn slice_matches_differential() {
        let f = frame(2, 1);
        let slice = ComplexSlice::build(f, 7).unwrap();
        for i in 1..=7 {
            for (row, a) in slice.generators(i).iter().enumerate() {
                let mut expected = differential(a).unwrap();
                expected.sort();
                let got: Vec<Generator> = slice.boundary_of(i, row).into_iter().cloned().collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn expected_dimensions() {
        let cases: [((i64, i64), [usize; 13]); 4] = [
            ((2, 1), [1, 0, 1, 1, 2, 4, 7, 8, 10, 11, 13, 18, 24]),
            ((3, 2), [1, 0, 1, 2, 4, 5, 7, 8, 10, 14, 19, 27, 39]),
            ((1, 0), [1, 0, 1, 1, 2, 2, 3, 3, 4, 6, 9, 10, 12]),
            ((3, 1), [1, 0, 1, 1, 2, 4, 7, 11, 17, 21, 26, 34, 45]),
        ];
        for ((n, m), dims) in cases {
            let slice = ComplexSlice::build(frame(n, m), 12).unwrap();
            let got: Vec<usize> = (0..=12).map(|i| slice.dimension(i)).collect();
            assert_eq!(got, dims, "frame ({n},{m})");
        }
    }

    #[test]
    fn lens_space_homology() {
        for (n, m) in [(2, 1), (3, 2), (1, 0)] {
            let slice = ComplexSlice::build(frame(n, m), 7).unwrap();
            assert!(slice.d_squared_defects().iter().all(|&(_, d)| d == 0));
            let ranks: Vec<usize> = slice.homology_ranks().iter().filter(|r| r.complete).map(|r| r.rank).collect();
            assert_eq!(ranks, vec![1, 0, 1, 0, 1, 0, 1]);
        }
    }

    #[test]
    fn complex_capacities_of_ball() {
        let b = make_ball(frame(2, 1), &int(1)).unwrap();
        let caps = capacities_from_complex(&b, 4).unwrap();
        assert_eq!(caps.values(), [int(0), int(2), int(2), int(2), int(4)]);
        let filtered = capacities_by_filtration(&b, 4).unwrap();
        assert_eq!(filtered, caps);
    }

    #[test]
    fn no_crossing_examples() {
        let f = frame(2, 1);
        let small = ConcavePath::parse(f, "2,1;0,1").unwrap();
        let big = ConcavePath::parse(f, "2,1;1,1;0,2").unwrap();
        assert!(no_crossing(&big, &small));
        assert!(no_crossing(&big, &big));
        let g = DecoratedPath::elliptic(big.clone());
        for w in [IntVec2::new(-1, 0), IntVec2::new(-1, 1), IntVec2::new(-1, 5)] {
            assert_eq!(slice_class(&g, &g, w).unwrap(), IntVec2::ZERO);
        }
    }

    #[test]
    fn parse_and_display() {
        let f = frame(2, 1);
        let g = DecoratedPath::parse(f, "2,1;1,1;0,2:eh").unwrap();
        assert_eq!(g.to_string(), "2,1;1,1;0,2:eh");
        assert!(matches!(DecoratedPath::parse(f, "2,1;0,1:x"), Err(ComplexError::BadLabel('x'))));
        assert!(matches!(DecoratedPath::parse(f, "2,1;0,1:ee"), Err(ComplexError::LabelCount { .. })));
        assert_eq!(DecoratedPath::parse(f, "empty").unwrap().to_string(), "empty");
    }
}
