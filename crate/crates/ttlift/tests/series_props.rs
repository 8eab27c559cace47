//! Algebraic invariants of the truncated series ring and the lift map.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use ttlift::scalar::{Mode, Scalar};
use ttlift::series::{Ring, Series, Var};

const D: u32 = 4;

fn ring() -> Arc<Ring> {
    Ring::new(2, 1, D, Mode::Rational).unwrap()
}

fn all_vars(r: &Arc<Ring>) -> Vec<Var> {
    r.all_vars().collect()
}

prop_compose! {
    fn term()(vars in prop::collection::vec(0usize..8, 0..4), p in -4i64..=4, q in 1i64..=3, im in -2i64..=2) -> (Vec<usize>, i64, i64, i64) {
        (vars, p, q, im)
    }
}

fn build(r: &Arc<Ring>, terms: &[(Vec<usize>, i64, i64, i64)]) -> Series {
    let vs = all_vars(r);
    let mut s = Series::zero(r);
    for (vars, p, q, im) in terms {
        let c = Scalar::ratio(Mode::Rational, *p, *q).add(&Scalar::ratio(Mode::Rational, *im, 1).mul(&Scalar::i(Mode::Rational)));
        let mut m = Series::constant(r, c);
        for &v in vars {
            m = &m * &Series::var(r, vs[v % vs.len()]);
        }
        s = &s + &m;
    }
    s
}

fn series() -> impl Strategy<Value = Vec<(Vec<usize>, i64, i64, i64)>> {
    prop::collection::vec(term(), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        let r = ring();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a * &Series::one(&r)), &a);
    }

    #[test]
    fn leibniz(a in series(), b in series(), v in 0usize..8) {
        let r = ring();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let v = all_vars(&r)[v];
        let lhs = (&a * &b).deriv(v);
        let rhs = &(&a.deriv(v) * &b) + &(&a * &b.deriv(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation(a in series(), b in series()) {
        let r = ring();
        let (a, b) = (build(&r, &a), build(&r, &b));
        prop_assert_eq!(&a.conj().conj(), &a);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        let v = Var::hol(0, 1);
        prop_assert_eq!(a.deriv(v).conj(), a.conj().deriv(v.conj()));
    }

    #[test]
    fn inverse_of_unit(a in series()) {
        let r = ring();
        let b = build(&r, &a);
        let a = &(&Series::one(&r) + &b) - &Series::constant(&r, b.constant_term());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, Series::one(&r));
    }

    #[test]
    fn derivatives_can_exhaust_the_window(a in series()) {
        let r = ring();
        let a = build(&r, &a).with_valid(1);
        let v = Var::hol(1, 0);
        prop_assert_eq!(a.deriv(v).valid_degree(), Some(0));
        prop_assert_eq!(a.deriv(v).deriv(v).valid_degree(), None);
        prop_assert_eq!(a.deriv(v).deriv(v).max_abs(), 0.0);
    }

    #[test]
    fn validity_window_of_products(a in series(), b in series(), cut in 1u32..D) {
        let r = ring();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let at = a.clone().with_valid(cut);
        let p = &at * &b;
        // The product agrees with the exact product on its declared window.
        let exact = (&a * &b).with_window(p.valid_degree());
        prop_assert_eq!(p.to_terms(), exact.to_terms());
        prop_assert!(p.valid_degree() >= Some(cut));
        let z = Series::zero(&r).with_valid(cut - 1);
        prop_assert!(!(&z * &z).is_exact());
        prop_assert!(z.deriv(Var::hol(0, 0)).deriv(Var::hol(0, 0)).valid_degree() < Some(cut));
    }
}

fn mixed(r: &Arc<Ring>, seed: u64) -> Series {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    ttlift::builtins::random_mixed(r, &mut rng, 0, 3, true)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lift_is_a_ring_map_commuting_with_conj(s1 in 0u64..1000, s2 in 0u64..1000) {
        let ctx = common::context("a2", common::trunc(1, 4, 1), 7);
        let (f, g) = (mixed(&ctx.ring, s1), mixed(&ctx.ring, s2));
        let lf = ctx.lift_function(&f).unwrap();
        let lg = ctx.lift_function(&g).unwrap();
        prop_assert_eq!(ctx.lift_function(&(&f * &g)).unwrap(), &lf * &lg);
        prop_assert_eq!(ctx.lift_function(&(&f + &g)).unwrap(), &lf + &lg);
        prop_assert_eq!(ctx.lift_function(&f.conj()).unwrap(), lf.conj());
    }
}
