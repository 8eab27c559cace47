//! Values checked against hand computations and an independent polynomial
//! implementation.

mod common;

use ttlift::builtins;
use ttlift::config::ConfigError;
use ttlift::series::{Series, TermJson, Var};
use ttlift::small::ModelError;

use common::poly::{gravity_u, q, to_poly, Poly};

#[test]
fn gravity1d_u_matches_brute_force_through_degree_6() {
    let ctx = common::context("gravity1d", common::trunc(3, 6, 3), 7);
    let got = to_poly(&ctx.u[0].to_terms(), 4);
    assert_eq!(got, gravity_u(3, 6));
    assert_eq!(ctx.u[0].valid_degree(), Some(6));
}

#[test]
fn gravity1d_u_low_degree_closed_form() {
    let ctx = common::context("gravity1d", common::trunc(3, 3, 3), 7);
    let want = Poly::from([
        (vec![1, 0, 0, 0], q(1, 1)),
        (vec![1, 1, 0, 0], q(1, 1)),
        (vec![1, 2, 0, 0], q(1, 1)),
        (vec![2, 0, 1, 0], q(1, 2)),
    ]);
    assert_eq!(to_poly(&ctx.u[0].to_terms(), 4), want);
}

#[test]
fn restrictions_of_u_and_m() {
    for name in ["gravity1d", "a2", "rand2d", "a3"] {
        let ctx = common::context(name, None, 7);
        for a in 0..ctx.n() {
            assert_eq!(ctx.u[a].restrict_small(), Series::var(&ctx.ring, Var::hol(0, a)), "{name}");
            for b in 0..ctx.n() {
                let want = if a == b { Series::one(&ctx.ring) } else { Series::zero(&ctx.ring) };
                assert_eq!(ctx.m.get(a, b).restrict_small(), want, "{name}");
            }
        }
    }
}

#[test]
fn gravity1d_deformed_flat_coordinates() {
    let lm = common::load("gravity1d", common::trunc(3, 6, 3), 7);
    let fl = lm.model.deformed_flats(3).unwrap();
    let t = Series::var(&lm.model.ring, Var::hol(0, 0));
    let mut fact = 2i64;
    for i in 0..=3 {
        let want = t.pow(i as u32 + 2).scale(&lm.model.ring.ratio(1, fact));
        assert_eq!(fl.theta[0][i], want, "theta_{i}");
        fact *= i as i64 + 3;
    }
}

#[test]
fn gravity1d_chern_connection() {
    let lm = common::load("gravity1d", common::trunc(3, 6, 3), 7);
    let herm = lm.model.hermitian_from_k(lm.k.as_ref().unwrap()).unwrap();
    let ch = lm.model.chern_and_curvature_small(&herm);
    let r = &lm.model.ring;
    let a = &Series::one(r) + &Series::var(r, Var::hol(0, 0));
    let want = a.inverse().unwrap().scale(&r.ratio(1, 2));
    assert_eq!(ch.conn[0].get(0, 0), &want);
    // h = |1 + t0|
    assert_eq!(&(herm.h.get(0, 0) * herm.h.get(0, 0)), &(&a * &a.conj()));
}

#[test]
fn a3_wdvv_exact_and_corruption_detected() {
    let lm = common::load("a3", None, 7);
    assert_eq!(lm.model.wdvv_residual().max, 0.0);
    let mut cfg = builtins::config("a3", None, 7).unwrap();
    cfg.prepotential.push(TermJson { re: "1".into(), im: "0".into(), mono: vec![[0, 0, 1, 1], [0, 0, 2, 1], [0, 0, 3, 1]] });
    match cfg.build() {
        Err(ConfigError::Model(ModelError::Wdvv(r))) => assert!(r > 0.0),
        other => panic!("expected a WDVV rejection, got {other:?}"),
    }
}

#[test]
fn eta_hat_is_block_diagonal_for_every_builtin() {
    for name in ["gravity1d", "a2", "rand2d", "a3"] {
        let ctx = common::context(name, None, 7);
        let e = ctx.eta_hat();
        for i in 0..ctx.dim() {
            for k in 0..ctx.dim() {
                let corr = ctx.eta_hat_by_correlators(&ctx.tframe[i], &ctx.tframe[k]);
                assert_eq!(&corr, e.get(i, k), "{name} ({i}, {k})");
                if ctx.level_of(i) != ctx.level_of(k) {
                    assert!(corr.is_zero());
                }
            }
        }
    }
}
