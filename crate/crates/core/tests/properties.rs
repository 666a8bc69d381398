//! Randomized invariants across the public API.

use klo_core::padic::{self, BoxFunction, CharacterSpec};
use klo_core::{Alcove, CartanDatum, HeckeAlgebra, HeckeElt, LaurentPoly, PeriodicModule, PeriodicVec, WeylElt};
use proptest::prelude::*;

const TYPES: [&str; 3] = ["A2", "B2", "G2"];

fn datum(k: usize) -> CartanDatum {
    CartanDatum::named(TYPES[k]).unwrap()
}

fn weyl(d: &CartanDatum, word: &[usize]) -> WeylElt {
    word.iter().fold(d.identity(), |w, &s| d.right_mul_gen(&w, 1 + s % d.rank()))
}

/// The alcove reached from `A+` by crossing walls of the given affine types.
fn alcove(d: &CartanDatum, walls: &[usize]) -> Alcove {
    walls.iter().fold(d.base_alcove(), |a, &s| d.cross(&a, s % (d.rank() + 1)))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    (-3i32..3, proptest::collection::vec(-3i64..=3, 0..4)).prop_map(|(lo, c)| LaurentPoly::from_dense(lo, c))
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..4, 0..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn length_is_compatible_with_products(k in 0usize..3, x in word(), y in word()) {
        let d = datum(k);
        let (x, y) = (weyl(&d, &x), weyl(&d, &y));
        let xy = d.mult(&x, &y);
        prop_assert!(xy.length() <= x.length() + y.length());
        prop_assert_eq!((xy.length() + x.length() + y.length()) % 2, 0);
        prop_assert_eq!(d.inverse(&x).length(), x.length());
        prop_assert!(d.mult(&d.inverse(&x), &x).is_identity());
        for w in d.reduced_words(&x) {
            prop_assert_eq!(w.len(), x.length());
            prop_assert_eq!(d.from_word(&w).unwrap(), x.clone());
        }
    }

    #[test]
    fn wall_crossing_is_involutive_and_adjacent(k in 0usize..3, walls in proptest::collection::vec(0usize..3, 0..14), s in 0usize..3) {
        let d = datum(k);
        let s = s % (d.rank() + 1);
        let a = alcove(&d, &walls);
        let b = d.cross(&a, s);
        prop_assert_eq!(d.cross(&b, s), a.clone());
        prop_assert_eq!(d.distance(&a, &b).abs(), 1);
        prop_assert_eq!(d.lset(&a).contains(s), d.distance(&b, &a) == 1);
    }

    #[test]
    fn distance_is_additive(k in 0usize..3, w1 in proptest::collection::vec(0usize..3, 0..10), w2 in proptest::collection::vec(0usize..3, 0..10), w3 in proptest::collection::vec(0usize..3, 0..10)) {
        let d = datum(k);
        let (a, b, c) = (alcove(&d, &w1), alcove(&d, &w2), alcove(&d, &w3));
        prop_assert_eq!(d.distance(&a, &b) + d.distance(&b, &c), d.distance(&a, &c));
        prop_assert_eq!(d.distance(&a, &b), -d.distance(&b, &a));
    }

    #[test]
    fn star_is_a_group_action(k in 0usize..3, walls in proptest::collection::vec(0usize..3, 0..14), x in word(), y in word()) {
        let d = datum(k);
        let a = alcove(&d, &walls);
        let (x, y) = (weyl(&d, &x), weyl(&d, &y));
        prop_assert_eq!(d.star(&x, &d.star(&y, &a)), d.star(&d.mult(&x, &y), &a));
        prop_assert_eq!(d.star(&d.identity(), &a), a.clone());
    }

    #[test]
    fn vertices_average_to_barycenter(k in 0usize..3, walls in proptest::collection::vec(0usize..3, 0..14)) {
        let d = datum(k);
        let a = alcove(&d, &walls);
        let vs = d.vertices(&a);
        let n = vs.len() as i64;
        let avg: Vec<_> = (0..d.rank()).map(|i| vs.iter().map(|v| v[i]).sum::<num_rational::Rational64>() / n).collect();
        prop_assert_eq!(avg, d.barycenter(&a));
    }

    #[test]
    fn finite_hecke_quadratic_and_bar(k in 0usize..2, terms in proptest::collection::vec((word(), poly()), 1..4), s in 1usize..3) {
        let d = datum(k);
        let h = HeckeAlgebra::new(&d);
        let x = HeckeElt::from_terms(terms.iter().map(|(w, c)| (weyl(&d, w), c.clone())));
        let tx = h.left_mul_gen(s, &x);
        let ttx = h.left_mul_gen(s, &tx);
        prop_assert_eq!(ttx, tx.scale(&LaurentPoly::v_minus_inv()).add(&x));
        prop_assert_eq!(h.bar(&h.bar(&x)), x.clone());
        let y = h.tilde_t(&weyl(&d, &[s, s + 1, s]));
        prop_assert_eq!(h.bar(&h.mult(&x, &y)), h.mult(&h.bar(&x), &h.bar(&y)));
    }

    #[test]
    fn periodic_quadratic_relation(k in 0usize..2, walls in proptest::collection::vec(0usize..3, 0..10), s in 0usize..3, c in poly()) {
        let d = datum(k);
        let pm = PeriodicModule::new(&d);
        let s = s % (d.rank() + 1);
        let m = PeriodicVec::basis(alcove(&d, &walls), 12).scale(&c);
        let tm = pm.hecke_apply(s, &m).unwrap();
        let ttm = pm.hecke_apply(s, &tm).unwrap();
        prop_assert!(ttm.eq_certified(&tm.scale(&LaurentPoly::v_minus_inv()).add(&m)));
    }

    #[test]
    fn theta_squares_to_identity(k in 0usize..2, walls in proptest::collection::vec(0usize..3, 0..8), s in 1usize..3) {
        let d = datum(k);
        let pm = PeriodicModule::new(&d);
        let m = PeriodicVec::basis(alcove(&d, &walls), 8);
        prop_assert!(pm.theta(s, &pm.theta(s, &m)).eq_certified(&m));
    }

    #[test]
    fn fourier_is_linear_and_involutive(terms in proptest::collection::vec((-5i64..5, -5i64..5, poly()), 0..5), c in poly()) {
        let f = BoxFunction::from_terms(terms.iter().map(|(a, b, p)| ((*a, *b), p.clone())));
        let p1 = CharacterSpec::PSI1;
        prop_assert_eq!(padic::fourier(&padic::fourier(&f, p1), p1), f.clone());
        prop_assert_eq!(padic::fourier(&f.scale(&c), p1), padic::fourier(&f, p1).scale(&c));
    }

    #[test]
    fn psi_intertwines_hecke_on_combinations(ns in proptest::collection::vec((-6i64..6, poly()), 1..4), s in 0usize..2) {
        let d = CartanDatum::named("A1").unwrap();
        let pm = PeriodicModule::new(&d);
        let m = PeriodicVec::from_terms(ns.iter().map(|(n, c)| (d.rank1_alcove(*n), c.clone())), 12);
        let lhs = padic::psi(&pm, &pm.hecke_apply(s, &m).unwrap()).unwrap();
        let rhs = padic::convolve(s, padic::psi(&pm, &m).unwrap().boxes()).unwrap();
        prop_assert_eq!(lhs.boxes(), &rhs);
    }
}
