//! Independent oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use lens_ech::domain::validate_domain;
use lens_ech::paths::{ConcavePath, PathCatalog};
use lens_ech::rational::{frac, int};
use lens_ech::{ConeFrame, DomainBoundary, IntVec2, RatVec2, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn frame(n: i64, m: i64) -> ConeFrame {
    ConeFrame::new(n, m).unwrap()
}

pub fn domain(f: ConeFrame, vertices: &[(Rational, Rational)]) -> DomainBoundary {
    let vs = vertices.iter().map(|(x, y)| RatVec2::new(x.clone(), y.clone())).collect();
    validate_domain(f, vs).unwrap()
}

pub fn int_domain(f: ConeFrame, vertices: &[(i64, i64)]) -> DomainBoundary {
    let vs: Vec<(Rational, Rational)> = vertices.iter().map(|&(x, y)| (int(x), int(y))).collect();
    domain(f, &vs)
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Hand-built concave domains with `m ∈ {0, 1}`.
pub fn packing_domains() -> Vec<DomainBoundary> {
    vec![
        int_domain(frame(2, 1), &[(4, 2), (1, 2), (0, 3)]),
        int_domain(frame(2, 1), &[(6, 3), (3, 2), (1, 2), (0, 4)]),
        domain(frame(2, 1), &[(int(4), int(2)), (int(2), frac(3, 2)), (int(0), frac(5, 2))]),
        int_domain(frame(3, 1), &[(6, 2), (1, 2), (0, 3)]),
        int_domain(frame(3, 1), &[(9, 3), (3, 2), (0, 3)]),
        domain(frame(3, 1), &[(int(6), int(2)), (int(3), frac(3, 2)), (int(0), frac(5, 2))]),
        int_domain(ConeFrame::CLASSICAL, &[(3, 0), (1, 1), (0, 3)]),
        int_domain(ConeFrame::CLASSICAL, &[(4, 0), (1, 1), (0, 2)]),
    ]
}

/// The first `count` values of `{a·k₁ + b·k₂ : k₁ + m·k₂ ≡ 0 (mod n)}` by
/// exhaustive enumeration of a box large enough to contain them.
pub fn brute_spectrum(n: i64, m: i64, a: &Rational, b: &Rational, count: usize) -> Vec<Rational> {
    let bound = 2 * n * count as i64 + 2;
    let mut values = Vec::new();
    for k1 in 0..=bound {
        for k2 in 0..=bound {
            if (k1 + m * k2) % n == 0 {
                values.push(a * int(k1) + b * int(k2));
            }
        }
    }
    values.sort();
    values.truncate(count);
    let limit = a.min(b).clone() * int(bound);
    assert!(values.last().is_none_or(|v| *v < limit), "enumeration box too small");
    values
}

/// Counted lattice points of a path by a direct column-free scan of the
/// bounding box with exact sidedness tests.
pub fn brute_lattice_count(p: &ConcavePath) -> usize {
    if p.is_empty() {
        return 0;
    }
    let vs = p.vertices();
    let frame = p.frame();
    let x_max = vs[0].x;
    let y_max = vs.iter().map(|v| v.y).max().unwrap();
    let on_path = |z: IntVec2| {
        vs.windows(2).any(|w| {
            let (a, b) = (w[0], w[1]);
            (b - a).cross(z - a) == 0 && z.x <= a.x && z.x >= b.x && z.y >= a.y.min(b.y) && z.y <= a.y.max(b.y)
        })
    };
    let mut count = 0;
    for x in 0..=x_max {
        for y in 0..=y_max {
            let z = IntVec2::new(x, y);
            if frame.n() * y < frame.m() * x || on_path(z) {
                continue;
            }
            let height = p.height_at(&int(x)).unwrap();
            if int(y) < height {
                count += 1;
            }
        }
    }
    count
}

/// A seeded generator for reproducible random cases.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut StdRng, max_num: i64, max_den: i64) -> Rational {
    frac(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

/// A random non-empty concave lattice path's vertex list, used as a domain.
pub fn random_lattice_domain(rng: &mut StdRng, f: ConeFrame, catalog: &PathCatalog) -> DomainBoundary {
    loop {
        let count = rng.gen_range(1..=catalog.max_count());
        let paths = catalog.paths_with_count(count);
        if paths.is_empty() {
            continue;
        }
        let p = &paths[rng.gen_range(0..paths.len())];
        let vs: Vec<RatVec2> = p.vertices().iter().map(|v| v.to_rat()).collect();
        return validate_domain(f, vs).unwrap();
    }
}

/// Partition of a lattice chain into primitive horizontal displacements.
pub fn chain_partition(vs: &[IntVec2]) -> Vec<i64> {
    let mut out = Vec::new();
    for w in vs.windows(2) {
        let d = w[1] - w[0];
        let g = num_integer::gcd(d.x, d.y);
        for _ in 0..g {
            out.push(d.x / g);
        }
    }
    out
}

/// The extremal lattice chain from `(0,0)` to `(m, end)` by exhaustive
/// search: among all chains with lattice vertices on the `upper` side
/// constraint (below `y = θx` and concave when `upper`, above it and
/// convex otherwise) return the one enclosing the extremal area.
pub fn brute_extremal_chain(theta: &Rational, m: i64, upper: bool) -> Vec<IntVec2> {
    let line = |x: i64| theta * int(x);
    let end_y = if upper {
        lens_ech::rational::floor_i64(&line(m))
    } else {
        lens_ech::rational::ceil_i64(&line(m))
    };
    let end = IntVec2::new(m, end_y);
    let allowed = |z: IntVec2| if upper { int(z.y) <= line(z.x) } else { int(z.y) >= line(z.x) };
    let mut best: Option<(i64, Vec<IntVec2>)> = None;
    let mut chain = vec![IntVec2::ZERO];
    fn twice_area_under(chain: &[IntVec2]) -> i64 {
        chain.windows(2).map(|w| (w[1].x - w[0].x) * (w[0].y + w[1].y)).sum()
    }
    fn search(
        chain: &mut Vec<IntVec2>,
        end: IntVec2,
        upper: bool,
        allowed: &dyn Fn(IntVec2) -> bool,
        best: &mut Option<(i64, Vec<IntVec2>)>,
    ) {
        let cur = *chain.last().unwrap();
        if cur == end {
            let area = twice_area_under(chain);
            let better = match best {
                None => true,
                Some((b, _)) => if upper { area > *b } else { area < *b },
            };
            if better {
                *best = Some((area, chain.clone()));
            }
            return;
        }
        for x in cur.x + 1..=end.x {
            let chord = (end.y * x).div_euclid(end.x);
            let (lo, hi) = (chord - 1, chord + 1);
            for y in lo - x.abs()..=hi + x.abs() {
                let next = IntVec2::new(x, y);
                if !allowed(next) {
                    continue;
                }
                let d = next - cur;
                if chain.len() >= 2 {
                    let prev = cur - chain[chain.len() - 2];
                    let turn = prev.cross(d);
                    if (upper && turn >= 0) || (!upper && turn <= 0) {
                        continue;
                    }
                }
                chain.push(next);
                search(chain, end, upper, allowed, best);
                chain.pop();
            }
        }
    }
    search(&mut chain, end, upper, &allowed, &mut best);
    let (_, chain) = best.expect("the straight chain to the end exists");
    chain
}
