//! Domain documents, subdomain tests and capacity sequences.

mod common;

use common::*;
use lens_ech::domain::{decode_domain, encode_domain, make_singular_ellipsoid, scale_domain, support_value};
use lens_ech::paths::PathCatalog;
use lens_ech::rational::{frac, int};
use lens_ech::IntVec2;
use proptest::prelude::*;

#[test]
fn documents_round_trip_byte_for_byte() {
    let mut rand = rng(11);
    for (n, m) in [(1, 0), (2, 1), (3, 2), (5, 3)] {
        let f = frame(n, m);
        let catalog = PathCatalog::build(f, 10).unwrap();
        for _ in 0..20 {
            let d = scale_domain(&random_lattice_domain(&mut rand, f, &catalog), &frac(3, 7)).unwrap();
            let text = encode_domain(&d);
            let back = decode_domain(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(encode_domain(&back), text);
        }
    }
}

#[test]
fn malformed_documents_are_rejected() {
    for text in [
        "",
        "[]",
        r#"{"n": 2, "m": 1}"#,
        r#"{"n": 2, "m": 2, "boundary": [[2, 1], [0, 1]]}"#,
        r#"{"n": 2, "m": 1, "boundary": [[2, 1], [0, "x"]]}"#,
        r#"{"n": 2, "m": 1, "boundary": [[2, 1], [1, 3], [0, 2]]}"#,
        r#"{"n": 1, "m": 0, "boundary": [[1.5, 0], [0, 1]]}"#,
    ] {
        assert!(decode_domain(text).is_err(), "accepted {text:?}");
    }
}

proptest! {
    #[test]
    fn ellipsoids_nest_when_parameters_grow(
        n in 1i64..=4, a in 1i64..=9, b in 1i64..=9, da in 0i64..=3, db in 0i64..=3,
    ) {
        let m = if n == 1 { 0 } else { 1 };
        let f = frame(n, m);
        prop_assume!(int(b) > int(a) * int(m) || n == 1);
        let small = make_singular_ellipsoid(f, &int(a), &int(b)).unwrap();
        let large = make_singular_ellipsoid(f, &int(a + da), &int(b + db)).unwrap();
        prop_assert!(small.is_subdomain_of(&large));
        prop_assert!(small.is_subdomain_of(&small));
        if da + db > 0 {
            prop_assert!(!large.is_subdomain_of(&small));
        }
    }

    #[test]
    fn scaling_multiplies_area_and_support(k in 1i64..=6, d in 1i64..=6, seed in 0u64..1000) {
        let f = frame(3, 1);
        let catalog = PathCatalog::build(f, 8).unwrap();
        let dom = random_lattice_domain(&mut rng(seed), f, &catalog);
        let r = frac(k, d);
        let scaled = scale_domain(&dom, &r).unwrap();
        prop_assert_eq!(scaled.area(), dom.area() * &r * &r);
        let w = IntVec2::new(1, -2);
        let (h, _) = support_value(&dom, w).unwrap();
        let (hs, _) = support_value(&scaled, w).unwrap();
        prop_assert_eq!(hs, h * r);
    }
}
