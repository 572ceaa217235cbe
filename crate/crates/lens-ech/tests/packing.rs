//! Properties of weight expansions and max-plus convolution.

mod common;

use common::*;
use lens_ech::domain::scale_domain;
use lens_ech::packing::{max_plus_convolve, verify_packing, weight_expansion};
use lens_ech::paths::PathCatalog;
use lens_ech::rational::{frac, int};
use lens_ech::spectrum::{classical_spectrum, spectrum};
use lens_ech::CapacitySequence;
use proptest::prelude::*;

const COUNT: usize = 12;

fn ball_spectrum() -> impl Strategy<Value = CapacitySequence> {
    (prop_oneof![Just((1i64, 0i64)), Just((2, 1)), Just((3, 1)), Just((4, 1))], 1i64..=6, 1i64..=3).prop_map(
        |((n, m), p, q)| {
            let a = frac(p, q);
            if n == 1 {
                classical_spectrum(&a, &a, COUNT).unwrap()
            } else {
                spectrum(frame(n, m), &a, &a, COUNT).unwrap()
            }
        },
    )
}

proptest! {
    #[test]
    fn convolution_is_commutative_and_associative(x in ball_spectrum(), y in ball_spectrum(), z in ball_spectrum()) {
        let xy = max_plus_convolve(&[x.clone(), y.clone()], COUNT).unwrap();
        let yx = max_plus_convolve(&[y.clone(), x.clone()], COUNT).unwrap();
        prop_assert_eq!(&xy, &yx);
        let left = max_plus_convolve(&[xy, z.clone()], COUNT).unwrap();
        let yz = max_plus_convolve(&[y.clone(), z.clone()], COUNT).unwrap();
        let right = max_plus_convolve(&[x.clone(), yz], COUNT).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &max_plus_convolve(&[x, y, z], COUNT).unwrap());
    }

    #[test]
    fn convolution_dominates_each_factor(x in ball_spectrum(), y in ball_spectrum()) {
        let xy = max_plus_convolve(&[x.clone(), y.clone()], COUNT).unwrap();
        for k in 0..COUNT {
            prop_assert!(xy.values()[k] >= x.values()[k].clone().max(y.values()[k].clone()));
        }
        let zero = CapacitySequence::new(vec![int(0); COUNT]).unwrap();
        prop_assert_eq!(max_plus_convolve(&[x.clone(), zero], COUNT).unwrap(), x);
    }

    #[test]
    fn weights_scale_with_the_domain(which in 0usize..3, seed in 0u64..10_000, rn in 1i64..=5, rd in 1i64..=5) {
        let (n, m) = [(1, 0), (2, 1), (3, 1)][which];
        let f = frame(n, m);
        let catalog = PathCatalog::build(f, 8).unwrap();
        let d = random_lattice_domain(&mut rng(seed), f, &catalog);
        let r = frac(rn, rd);
        let w = weight_expansion(&d).unwrap();
        prop_assert_eq!(weight_expansion(&scale_domain(&d, &r).unwrap()).unwrap(), w.scaled(&r));
        prop_assert_eq!(w.ball_area(), d.area());
    }
}

#[test]
fn short_sequences_are_rejected() {
    let s = classical_spectrum(&int(1), &int(1), 3).unwrap();
    assert!(max_plus_convolve(std::slice::from_ref(&s), 4).is_err());
    assert!(max_plus_convolve(&[], 1).is_err());
    assert_eq!(max_plus_convolve(std::slice::from_ref(&s), 3).unwrap(), s);
}

#[test]
fn random_lattice_domains_pack_exactly() {
    let mut rand = rng(23);
    for (n, m) in [(1, 0), (2, 1), (3, 1), (4, 1)] {
        let f = frame(n, m);
        let catalog = PathCatalog::build(f, 10).unwrap();
        for _ in 0..6 {
            let d = random_lattice_domain(&mut rand, f, &catalog);
            let report = verify_packing(&d, 8).unwrap();
            assert!(report.is_success(), "{:?} differs at {:?}", d.vertices(), report.first_discrepancy);
        }
    }
}

#[test]
fn frames_with_large_m_are_unsupported() {
    let f = frame(3, 2);
    let catalog = PathCatalog::build(f, 4).unwrap();
    let d = random_lattice_domain(&mut rng(1), f, &catalog);
    assert!(weight_expansion(&d).is_err());
}
