//! Properties of the exact planar primitives.

use lens_ech::geometry::{
    lattice_points_in_polygon, primitive_decompose, trivialization_vector, twice_area_int, LatticePolygon, Sl2,
};
use lens_ech::rational::{format_rational, frac, parse_rational};
use lens_ech::IntVec2;
use num_integer::Integer;
use proptest::prelude::*;

fn vec2() -> impl Strategy<Value = IntVec2> {
    (-50i64..=50, -50i64..=50).prop_map(|(x, y)| IntVec2::new(x, y))
}

fn sl2() -> impl Strategy<Value = Sl2> {
    let generators = [Sl2::new(1, 1, 0, 1).unwrap(), Sl2::new(1, 0, 1, 1).unwrap(), Sl2::new(0, -1, 1, 0).unwrap()];
    proptest::collection::vec(0usize..3, 0..6)
        .prop_map(move |word| word.iter().fold(Sl2::IDENTITY, |acc, &i| acc.compose(&generators[i])))
}

fn triangle() -> impl Strategy<Value = [IntVec2; 3]> {
    (vec2(), vec2(), vec2())
        .prop_filter("nondegenerate", |(a, b, c)| (*b - *a).cross(*c - *a) != 0)
        .prop_map(|(a, b, c)| if (b - a).cross(c - a) > 0 { [a, b, c] } else { [a, c, b] })
}

proptest! {
    #[test]
    fn cross_is_antisymmetric_and_bilinear(u in vec2(), v in vec2(), w in vec2(), k in -5i64..=5) {
        prop_assert_eq!(u.cross(v), -v.cross(u));
        prop_assert_eq!(u.cross(u), 0);
        prop_assert_eq!((u + w).cross(v), u.cross(v) + w.cross(v));
        prop_assert_eq!(u.scale(k).cross(v), k * u.cross(v));
    }

    #[test]
    fn primitive_decomposition_recombines(v in vec2().prop_filter("nonzero", |v| *v != IntVec2::ZERO)) {
        let (p, g) = primitive_decompose(v).unwrap();
        prop_assert!(g > 0);
        prop_assert_eq!(p.x.gcd(&p.y), 1);
        prop_assert_eq!(p.scale(g), v);
    }

    #[test]
    fn unimodular_maps_preserve_cross(m in sl2(), u in vec2(), v in vec2()) {
        prop_assert_eq!(m.apply(u).cross(m.apply(v)), u.cross(v));
        prop_assert_eq!(m.compose(&m.inverse()), Sl2::IDENTITY);
        prop_assert_eq!(m.inverse().apply(m.apply(u)), u);
    }

    #[test]
    fn lattice_counts_are_unimodular_invariants(m in sl2(), t in triangle()) {
        let p = LatticePolygon::from_ints(&t).unwrap();
        let (count, _) = lattice_points_in_polygon(&p, &[]);
        let (moved, _) = lattice_points_in_polygon(&p.transformed(&m), &[]);
        prop_assert_eq!(count, moved);
        let image: Vec<IntVec2> = t.iter().map(|v| m.apply(*v)).collect();
        prop_assert_eq!(twice_area_int(&t), twice_area_int(&image));
    }

    #[test]
    fn triangle_counts_satisfy_pick(t in triangle()) {
        let p = LatticePolygon::from_ints(&t).unwrap();
        let (count, points) = lattice_points_in_polygon(&p, &[]);
        prop_assert_eq!(count, points.len());
        let boundary: i64 = (0..3).map(|i| {
            let d = t[(i + 1) % 3] - t[i];
            d.x.gcd(&d.y)
        }).sum();
        let area2 = twice_area_int(&t);
        prop_assert_eq!(area2, 2 * (count as i64 - boundary) + boundary - 2);
    }

    #[test]
    fn trivialization_is_canonical(n in 1i64..=30, m in 0i64..=30) {
        prop_assume!(n.gcd(&m) == 1);
        let v = trivialization_vector(n, m).unwrap();
        prop_assert_eq!(IntVec2::new(n, m).cross(v), 1);
        prop_assert!(0 <= v.x && v.x < n);
    }

    #[test]
    fn rationals_round_trip_through_text(p in -1000i64..=1000, q in 1i64..=1000) {
        let r = frac(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
