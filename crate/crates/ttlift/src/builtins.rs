//! Built-in models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{mat_to_json, CvJson, EulerJson, ModelConfig, Normalization, RealStructureJson, Truncation};
use crate::matrix::Mat;
use crate::scalar::{Mode, Scalar};
use crate::series::{Ring, Series, TermJson, Var};
use std::sync::Arc;

pub struct Builtin {
    pub name: &'static str,
    pub summary: &'static str,
    pub provenance: &'static str,
    pub default_truncation: Truncation,
}

const A2_SEED: u64 = 11;

pub fn list() -> Vec<Builtin> {
    vec![
        Builtin {
            name: "gravity1d",
            summary: "N=1, eta=1, F=t^3/6, E=t d/dt, h=|1+t0| with g=1+t0",
            provenance: "one-dimensional CDV structure built from a(t) = 1 + t0; \
                         the tt* equations reduce to a single equation solved by any holomorphic a",
            default_truncation: Truncation { n_max: 3, d_max: 6, i_max: 3 },
        },
        Builtin {
            name: "a2",
            summary: "N=2, F=t1^2 t2/2 + t2^4/72, E=t1 d1 + (2/3) t2 d2, generic real structure",
            provenance: "A2 Frobenius manifold; WDVV is vacuous in dimension 2, homogeneity checked exactly",
            default_truncation: Truncation { n_max: 2, d_max: 5, i_max: 2 },
        },
        Builtin {
            name: "rand2d",
            summary: "N=2, F=t1^2 t2/2 + a t2^3 + b t2^4 with seeded a, b, generic real structure",
            provenance: "random potential; Euler homogeneity generally fails, so R0 axioms are informational",
            default_truncation: Truncation { n_max: 2, d_max: 4, i_max: 2 },
        },
        Builtin {
            name: "a3",
            summary: "N=3, A3 Frobenius manifold, no real structure",
            provenance: "F = t1^2 t3/2 + t1 t2^2/2 - t2^2 t3^2/16 + t3^5/960",
            default_truncation: Truncation { n_max: 1, d_max: 4, i_max: 1 },
        },
    ]
}

pub fn find(name: &str) -> Option<Builtin> {
    list().into_iter().find(|b| b.name == name)
}

/// Config for a built-in model at the given truncation (defaults if None).
pub fn config(name: &str, trunc: Option<Truncation>, seed: u64) -> Option<ModelConfig> {
    let b = find(name)?;
    let t = trunc.unwrap_or(b.default_truncation);
    let mut cfg = match name {
        "gravity1d" => gravity1d(t),
        "a2" => a2(t),
        "rand2d" => rand2d(t, seed),
        "a3" => a3(t),
        _ => return None,
    };
    cfg.seed = seed;
    cfg.provenance = Some(b.provenance.to_string());
    Some(cfg)
}

fn s(x: &str) -> String {
    x.to_string()
}

fn ring(n: usize, t: Truncation) -> Arc<Ring> {
    Ring::new(n, t.n_max, t.d_max, Mode::Rational).expect("built-in truncation")
}

/// Ring for exact prepotentials: wide enough that nothing is dropped
/// before the loader applies the real truncation.
fn poly_ring(n: usize) -> Arc<Ring> {
    Ring::new(n, 0, 8, Mode::Rational).expect("poly ring")
}

fn t0(r: &Arc<Ring>, a: usize) -> Series {
    Series::var(r, Var::hol(0, a))
}

fn base(name: &str, n: usize, eta: Vec<Vec<String>>, f: &[TermJson], euler: EulerJson, t: Truncation) -> ModelConfig {
    ModelConfig {
        name: name.to_string(),
        n,
        eta,
        unit_index: 1,
        prepotential: f.to_vec(),
        euler,
        real_structure: None,
        potential_a: None,
        cv: None,
        truncation: t,
        scalar_mode: Mode::Rational,
        tolerance: 0.0,
        seed: 0,
        theta_constants: None,
        normalization: Normalization::Liu,
        provenance: None,
    }
}

fn antidiag(n: usize) -> Vec<Vec<String>> {
    (0..n).map(|i| (0..n).map(|j| s(if i + j == n - 1 { "1" } else { "0" })).collect()).collect()
}

fn gravity1d(t: Truncation) -> ModelConfig {
    let pr = poly_ring(1);
    let f = t0(&pr, 0).pow(3).scale(&pr.ratio(1, 6));
    let r = ring(1, t);
    let x = t0(&r, 0);
    let euler = EulerJson { q: vec![vec![s("1")]], r: vec![s("0")], weight_d: s("-2") };
    let mut cfg = base("gravity1d", 1, vec![vec![s("1")]], &f.to_terms(), euler, t);
    let a = &Series::one(&r) + &x;
    // K = |a|/a = (conj(a)/a)^{1/2}, so that h = g·K = |a| with g = a.
    let k = (&a.conj() * &a.inverse().expect("a(0) = 1")).sqrt_unit().expect("constant term 1");
    let km = Mat::from_fn(1, 1, |_, _| k.clone());
    let gm = Mat::from_fn(1, 1, |_, _| a.clone());
    cfg.real_structure = Some(RealStructureJson { k: mat_to_json(&km), g: Some(mat_to_json(&gm)) });
    cfg
}

fn a2_like(name: &str, f: &[TermJson], t: Truncation, seed: u64) -> ModelConfig {
    let r = ring(2, t);
    let euler = EulerJson { q: vec![vec![s("1"), s("0")], vec![s("0"), s("2/3")]], r: vec![s("0"), s("0")], weight_d: s("-5/3") };
    let mut cfg = base(name, 2, antidiag(2), f, euler, t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_mixed(&r, &mut rng, 1, 2, true);
    let k = generic_k(&r, &x);
    cfg.real_structure = Some(RealStructureJson { k: mat_to_json(&k), g: None });
    // η-self-adjoint potential A = η^{-1} S with S symmetric.
    let eta = Mat::from_scalars(&r, &[vec![Scalar::zero(Mode::Rational), Scalar::one(Mode::Rational)], vec![Scalar::one(Mode::Rational), Scalar::zero(Mode::Rational)]]);
    let s01 = random_mixed(&r, &mut rng, 0, 2, true);
    let sm = Mat::from_fn(2, 2, |i, j| if i == j { random_mixed(&r, &mut rng, 0, 1, true) } else { s01.clone() });
    cfg.potential_a = Some(mat_to_json(&eta.mul(&sm)));
    let u = Mat::from_fn(2, 2, |_, _| random_mixed(&r, &mut rng, 0, 1, true));
    let q = Mat::from_fn(2, 2, |_, _| random_mixed(&r, &mut rng, 0, 1, true));
    cfg.cv = Some(CvJson { u: mat_to_json(&u), q: mat_to_json(&q) });
    cfg
}

fn a2(t: Truncation) -> ModelConfig {
    let r = poly_ring(2);
    let (x, y) = (t0(&r, 0), t0(&r, 1));
    let f = &(&x.pow(2) * &y).scale(&r.ratio(1, 2)) + &y.pow(4).scale(&r.ratio(1, 72));
    a2_like("a2", &f.to_terms(), t, A2_SEED)
}

fn rand2d(t: Truncation, seed: u64) -> ModelConfig {
    let r = poly_ring(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let a = small_rational(&mut rng);
    let b = small_rational(&mut rng);
    let (x, y) = (t0(&r, 0), t0(&r, 1));
    let f = &(&(&x.pow(2) * &y).scale(&r.ratio(1, 2)) + &y.pow(3).scale(&a)) + &y.pow(4).scale(&b);
    a2_like("rand2d", &f.to_terms(), t, seed)
}

fn a3(t: Truncation) -> ModelConfig {
    let r = poly_ring(3);
    let (x, y, z) = (t0(&r, 0), t0(&r, 1), t0(&r, 2));
    let f = &(&(&(&x.pow(2) * &z).scale(&r.ratio(1, 2)) + &(&x * &y.pow(2)).scale(&r.ratio(1, 2)))
        - &(&y.pow(2) * &z.pow(2)).scale(&r.ratio(1, 16)))
        + &z.pow(5).scale(&r.ratio(1, 960));
    let q = vec![vec![s("1"), s("0"), s("0")], vec![s("0"), s("3/4"), s("0")], vec![s("0"), s("0"), s("1/2")]];
    let euler = EulerJson { q, r: vec![s("0"); 3], weight_d: s("-3/2") };
    base("a3", 3, antidiag(3), &f.to_terms(), euler, t)
}

fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    let p = rng.gen_range(-3i64..=3);
    let q = rng.gen_range(1i64..=4);
    Scalar::ratio(Mode::Rational, if p == 0 { 1 } else { p }, q)
}

fn small_complex<R: Rng>(rng: &mut R) -> Scalar {
    let re = small_rational(rng);
    let im = small_rational(rng);
    re.add(&im.mul(&Scalar::i(Mode::Rational)))
}

/// Random polynomial in level-0 (t, t̄) with degrees in [lo, hi].
pub fn random_mixed<R: Rng>(r: &Arc<Ring>, rng: &mut R, lo: u32, hi: u32, complex: bool) -> Series {
    let n = r.n;
    let mut vars: Vec<Var> = (0..n).map(|a| Var::hol(0, a)).collect();
    vars.extend((0..n).map(|a| Var::antihol(0, a)));
    let mut acc = Series::zero(r);
    let count = rng.gen_range(2..=4);
    for _ in 0..count {
        let d = rng.gen_range(lo..=hi.min(r.d_max));
        let mut m = Series::one(r);
        for _ in 0..d {
            m = &m * &Series::var(r, vars[rng.gen_range(0..vars.len())]);
        }
        let c = if complex { small_complex(rng) } else { small_rational(rng) };
        acc = &acc + &m.scale(&c);
    }
    acc
}

/// K = G conj(G)^{-1} with G = exp(diag(x, -x)), an involution for the
/// antidiagonal η and Hermitian h = ηK. Needs x(0) = 0.
pub fn generic_k(r: &Arc<Ring>, x: &Series) -> Mat {
    let w = x - &x.conj();
    let e = w.exp_nilpotent().expect("x(0) = 0");
    let ei = (-&w).exp_nilpotent().expect("x(0) = 0");
    Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => e.clone(),
        (1, 1) => ei.clone(),
        _ => Series::zero(r),
    })
}
