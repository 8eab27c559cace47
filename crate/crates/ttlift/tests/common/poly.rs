//! Minimal exact polynomial arithmetic, independent of the library series.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use ttlift::series::TermJson;

pub type Poly = BTreeMap<Vec<u32>, BigRational>;

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

pub fn mul(a: &Poly, b: &Poly, cap: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() <= cap {
                *out.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn var(k: usize, nvars: usize) -> Poly {
    let mut e = vec![0; nvars];
    e[k] = 1;
    Poly::from([(e, BigRational::one())])
}

pub fn scale(a: &Poly, c: &BigRational) -> Poly {
    a.iter().map(|(e, x)| (e.clone(), x * c)).filter(|(_, x)| !x.is_zero()).collect()
}

/// u = Σ_k t_k u^k / k!, iterated to a fixed point.
pub fn gravity_u(n_max: usize, cap: u32) -> Poly {
    let nv = n_max + 1;
    let mut u = Poly::new();
    for _ in 0..=cap + 1 {
        let mut next = Poly::new();
        let mut upow = Poly::from([(vec![0; nv], BigRational::one())]);
        let mut fact = 1i64;
        for k in 0..=n_max {
            if k > 0 {
                upow = mul(&upow, &u, cap);
                fact *= k as i64;
            }
            next = add(&next, &scale(&mul(&var(k, nv), &upow, cap), &q(1, fact)));
        }
        u = next;
    }
    u
}

pub fn parse_q(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((p, d)) => BigRational::new(p.parse().unwrap(), d.parse().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

pub fn to_poly(terms: &[TermJson], nv: usize) -> Poly {
    terms
        .iter()
        .map(|t| {
            assert_eq!(t.im, "0");
            let mut e = vec![0; nv];
            for m in &t.mono {
                assert_eq!(m[0], 0, "holomorphic");
                e[m[1] as usize] += m[3];
            }
            (e, parse_q(&t.re))
        })
        .collect()
}
