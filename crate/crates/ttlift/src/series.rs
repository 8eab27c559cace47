//! Truncated multivariate power series in the variables t^α_n and their
//! conjugates, with explicit tracking of the degree window that is known
//! to be correct.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Mode, Scalar};

/// Hard cap on d_max; monomials are stored inline.
pub const MAX_DEGREE: usize = 12;

/// `known` marker for series that are complete polynomials (nothing was
/// ever lost to truncation).
const EXACT: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series belong to different rings")]
    Context,
    #[error("substitution image for {0} has a nonzero constant term")]
    Composition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid ring: {0}")]
    Ring(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    Hol = 0,
    Antihol = 1,
}

impl Sector {
    pub fn flip(self) -> Sector {
        match self {
            Sector::Hol => Sector::Antihol,
            Sector::Antihol => Sector::Hol,
        }
    }
}

/// A coordinate t^α_n (hol) or its conjugate. `flavor` is 0-based here and
/// 1-based in every serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub sector: Sector,
    pub level: usize,
    pub flavor: usize,
}

impl Var {
    pub fn hol(level: usize, flavor: usize) -> Var {
        Var { sector: Sector::Hol, level, flavor }
    }

    pub fn antihol(level: usize, flavor: usize) -> Var {
        Var { sector: Sector::Antihol, level, flavor }
    }

    pub fn conj(self) -> Var {
        Var { sector: self.sector.flip(), ..self }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.sector == Sector::Antihol { "b" } else { "" };
        write!(f, "t{bar}{}_{}", self.flavor + 1, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub n: usize,
    pub n_max: usize,
    pub d_max: u32,
    pub mode: Mode,
}

impl Ring {
    pub fn new(n: usize, n_max: usize, d_max: u32, mode: Mode) -> Result<Arc<Ring>, SeriesError> {
        if n == 0 {
            return Err(SeriesError::Ring("N must be positive".into()));
        }
        if d_max as usize > MAX_DEGREE {
            return Err(SeriesError::Ring(format!("d_max {d_max} exceeds {MAX_DEGREE}")));
        }
        if 2 * (n_max + 1) * n > 255 {
            return Err(SeriesError::Ring("too many variables".into()));
        }
        Ok(Arc::new(Ring { n, n_max, d_max, mode }))
    }

    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn nvars(&self) -> usize {
        2 * self.levels() * self.n
    }

    pub fn index(&self, v: Var) -> u8 {
        debug_assert!(v.level <= self.n_max && v.flavor < self.n);
        ((v.sector as usize) * self.levels() * self.n + v.level * self.n + v.flavor) as u8
    }

    pub fn var(&self, idx: u8) -> Var {
        let idx = idx as usize;
        let per = self.levels() * self.n;
        let sector = if idx >= per { Sector::Antihol } else { Sector::Hol };
        let r = idx % per;
        Var { sector, level: r / self.n, flavor: r % self.n }
    }

    pub fn contains(&self, v: Var) -> bool {
        v.level <= self.n_max && v.flavor < self.n
    }

    pub fn all_vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.nvars() as u8).map(move |i| self.var(i))
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        Scalar::from_int(self.mode, n)
    }

    pub fn ratio(&self, p: i64, q: i64) -> Scalar {
        Scalar::ratio(self.mode, p, q)
    }
}

/// A monomial as the sorted multiset of its variable indices. The derived
/// ordering (length first, then lexicographic) is the canonical graded order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono {
    len: u8,
    v: [u8; MAX_DEGREE],
}

impl Mono {
    pub const ONE: Mono = Mono { len: 0, v: [0; MAX_DEGREE] };

    pub fn var(idx: u8) -> Mono {
        let mut m = Mono::ONE;
        m.len = 1;
        m.v[0] = idx;
        m
    }

    pub fn from_indices(mut idx: Vec<u8>) -> Option<Mono> {
        if idx.len() > MAX_DEGREE {
            return None;
        }
        idx.sort_unstable();
        let mut m = Mono::ONE;
        m.len = idx.len() as u8;
        m.v[..idx.len()].copy_from_slice(&idx);
        Some(m)
    }

    pub fn degree(&self) -> u32 {
        self.len as u32
    }

    pub fn indices(&self) -> &[u8] {
        &self.v[..self.len as usize]
    }

    pub fn exponent(&self, idx: u8) -> u32 {
        self.indices().iter().filter(|&&x| x == idx).count() as u32
    }

    /// (index, exponent) pairs in increasing index order.
    pub fn factors(&self) -> Vec<(u8, u32)> {
        let mut out: Vec<(u8, u32)> = Vec::new();
        for &x in self.indices() {
            match out.last_mut() {
                Some((y, e)) if *y == x => *e += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    pub fn mul(&self, o: &Mono) -> Option<Mono> {
        let (a, b) = (self.indices(), o.indices());
        if a.len() + b.len() > MAX_DEGREE {
            return None;
        }
        let mut m = Mono::ONE;
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
                m.v[k] = a[i];
                i += 1;
            } else {
                m.v[k] = b[j];
                j += 1;
            }
            k += 1;
        }
        m.len = k as u8;
        Some(m)
    }

    /// Remove one occurrence of `idx`; None if absent.
    pub fn remove_one(&self, idx: u8) -> Option<Mono> {
        let s = self.indices();
        let p = s.iter().position(|&x| x == idx)?;
        let mut m = Mono::ONE;
        m.len = self.len - 1;
        m.v[..p].copy_from_slice(&s[..p]);
        m.v[p..m.len as usize].copy_from_slice(&s[p + 1..]);
        Some(m)
    }

    pub fn map_indices(&self, f: impl Fn(u8) -> u8) -> Mono {
        Mono::from_indices(self.indices().iter().map(|&x| f(x)).collect()).expect("same length")
    }
}

#[derive(Clone)]
pub struct Series {
    ring: Arc<Ring>,
    terms: BTreeMap<Mono, Scalar>,
    /// Coefficients of total degree < known are exact; 0 means nothing is
    /// known.
    known: u32,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valid_degree() {
            Some(v) => write!(f, "{self} [valid {v}]"),
            None => write!(f, "{self} [nothing valid]"),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (idx, e) in m.factors() {
                let v = self.ring.var(idx);
                if e == 1 {
                    write!(f, "*{v}")?;
                } else {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Series {
    pub fn zero(ring: &Arc<Ring>) -> Series {
        Series { ring: ring.clone(), terms: BTreeMap::new(), known: EXACT }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Series {
        let mut s = Series::zero(ring);
        if !c.is_zero() {
            s.terms.insert(Mono::ONE, c.to_mode(ring.mode));
        }
        s
    }

    pub fn one(ring: &Arc<Ring>) -> Series {
        Series::constant(ring, Scalar::one(ring.mode))
    }

    pub fn int(ring: &Arc<Ring>, n: i64) -> Series {
        Series::constant(ring, ring.scalar(n))
    }

    pub fn var(ring: &Arc<Ring>, v: Var) -> Series {
        Series::monomial(ring, Scalar::one(ring.mode), &[(v, 1)])
    }

    /// c · Π v^e; truncated (and marked so) if the degree exceeds d_max.
    pub fn monomial(ring: &Arc<Ring>, c: Scalar, factors: &[(Var, u32)]) -> Series {
        let mut idx = Vec::new();
        for &(v, e) in factors {
            assert!(ring.contains(v), "variable {v} outside the ring");
            for _ in 0..e {
                idx.push(ring.index(v));
            }
        }
        let mut s = Series::zero(ring);
        if idx.len() as u32 > ring.d_max {
            s.known = ring.d_max + 1;
            return s;
        }
        if !c.is_zero() {
            s.terms.insert(Mono::from_indices(idx).unwrap(), c.to_mode(ring.mode));
        }
        s
    }

    /// Build from raw terms; terms above d_max are dropped and mark the
    /// result as truncated.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Mono, Scalar)>) -> Series {
        let mut s = Series::zero(ring);
        for (m, c) in terms {
            if m.degree() > ring.d_max {
                s.known = ring.d_max + 1;
                continue;
            }
            let c = c.to_mode(ring.mode);
            match s.terms.get_mut(&m) {
                Some(x) => x.add_assign(&c),
                None => {
                    s.terms.insert(m, c);
                }
            }
        }
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree through which every coefficient is known.
    /// None when no coefficient is known.
    pub fn valid_degree(&self) -> Option<u32> {
        if self.known == 0 {
            None
        } else {
            Some((self.known - 1).min(self.ring.d_max))
        }
    }

    /// True when the series is a complete polynomial (no truncation loss).
    pub fn is_exact(&self) -> bool {
        self.known == EXACT
    }

    pub fn with_valid(self, v: u32) -> Series {
        self.with_window(Some(v))
    }

    /// Restrict to a validity window; None forgets every coefficient.
    pub fn with_window(mut self, v: Option<u32>) -> Series {
        let k = v.map_or(0, |v| v.saturating_add(1));
        self.known = self.known.min(k);
        self.clip();
        self
    }

    /// Lowest degree of a stored term (None for the zero series).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.ring.mode))
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Mono::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero with nothing lost to truncation.
    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.is_exact()
    }

    /// Max coefficient magnitude over degrees ≤ `window`.
    pub fn max_abs_within(&self, window: u32) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() <= window)
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.valid_degree().map_or(0.0, |w| self.max_abs_within(w))
    }

    pub fn is_holomorphic(&self) -> bool {
        let per = (self.ring.levels() * self.ring.n) as u8;
        self.terms.keys().all(|m| m.indices().iter().all(|&i| i < per))
    }

    pub fn uses_only_level0(&self) -> bool {
        self.terms.keys().all(|m| m.indices().iter().all(|&i| self.ring.var(i).level == 0))
    }

    fn check(&self, o: &Series) {
        assert!(same_ring(&self.ring, &o.ring), "{}", SeriesError::Context);
    }

    pub fn checked_add(&self, o: &Series) -> Result<Series, SeriesError> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(SeriesError::Context);
        }
        Ok(self.add_impl(o, false))
    }

    pub fn checked_mul(&self, o: &Series) -> Result<Series, SeriesError> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(SeriesError::Context);
        }
        Ok(self.mul_impl(o))
    }

    fn add_impl(&self, o: &Series, negate: bool) -> Series {
        self.check(o);
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let c = if negate { c.neg() } else { c.clone() };
            match terms.get_mut(m) {
                Some(x) => {
                    x.add_assign(&c);
                    if x.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(*m, c);
                }
            }
        }
        let known = self.known.min(o.known);
        let mut s = Series { ring: self.ring.clone(), terms, known };
        s.clip();
        s
    }

    fn clip(&mut self) {
        if self.known != EXACT {
            let k = self.known;
            self.terms.retain(|m, _| m.degree() < k);
        }
    }

    fn mul_impl(&self, o: &Series) -> Series {
        self.check(o);
        let d = self.ring.d_max;
        let mut acc: HashMap<Mono, Scalar> = HashMap::new();
        let mut dropped = false;
        let bterms: Vec<(&Mono, &Scalar)> = o.terms.iter().collect();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for &(mb, cb) in &bterms {
                if da + mb.degree() > d {
                    dropped = true;
                    break;
                }
                let m = ma.mul(mb).expect("degree checked");
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(x) => x.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        // Unknown coefficients of one factor only reach degrees at or above
        // its known count plus the other factor's (effective) order.
        let inf = u64::MAX / 4;
        let eff = |x: &Series| -> u64 {
            let o = x.order().map_or(inf, u64::from);
            if x.known == EXACT { o } else { o.min(u64::from(x.known)) }
        };
        let kn = |x: &Series| -> u64 { if x.known == EXACT { inf } else { u64::from(x.known) } };
        let k = (eff(self) + kn(o)).min(kn(self) + eff(o));
        let known = if k >= inf {
            if dropped { d + 1 } else { EXACT }
        } else {
            k.min(u64::from(d) + 1) as u32
        };
        let mut s = Series {
            ring: self.ring.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            known,
        };
        s.clip();
        s
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        let c = c.to_mode(self.ring.mode);
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (*m, x.mul(&c)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        Series { ring: self.ring.clone(), terms, known: self.known }
    }

    pub fn scale_int(&self, n: i64) -> Series {
        self.scale(&self.ring.scalar(n))
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut r = Series::one(&self.ring);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Formal ∂/∂v. Loses one degree of validity unless the series is exact.
    pub fn deriv(&self, v: Var) -> Series {
        let idx = self.ring.index(v);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            if e == 0 {
                continue;
            }
            let c = c.mul(&self.ring.scalar(e as i64));
            terms.insert(m.remove_one(idx).unwrap(), c);
        }
        let known = if self.known == EXACT { EXACT } else { self.known.saturating_sub(1) };
        let mut s = Series { ring: self.ring.clone(), terms, known };
        s.clip();
        s
    }

    /// Swap sectors and conjugate coefficients.
    pub fn conj(&self) -> Series {
        let per = (self.ring.levels() * self.ring.n) as u8;
        let flip = |i: u8| if i >= per { i - per } else { i + per };
        let terms = self.terms.iter().map(|(m, c)| (m.map_indices(flip), c.conj())).collect();
        Series { ring: self.ring.clone(), terms, known: self.known }
    }

    /// Set every variable of level ≥ 1 (both sectors) to zero.
    pub fn restrict_small(&self) -> Series {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.indices().iter().all(|&i| ring.var(i).level == 0))
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Series { ring: ring.clone(), terms, known: self.known }
    }

    /// Keep only terms whose variables all satisfy `keep`.
    pub fn restrict_vars(&self, keep: impl Fn(Var) -> bool) -> Series {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.indices().iter().all(|&i| keep(ring.var(i))))
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Series { ring: ring.clone(), terms, known: self.known }
    }

    /// Simultaneous substitution v ↦ map(v) for every variable with an
    /// image; other variables are left alone. Images with a nonzero
    /// constant term are rejected unless `allow_constant` is set.
    pub fn substitute(
        &self,
        map: &dyn Fn(Var) -> Option<Series>,
        allow_constant: bool,
    ) -> Result<Series, SeriesError> {
        let ring = self.ring.clone();
        let mut images: HashMap<u8, Series> = HashMap::new();
        let mut min_order = u32::MAX;
        for m in self.terms.keys() {
            for &i in m.indices() {
                if images.contains_key(&i) {
                    continue;
                }
                let v = ring.var(i);
                let img = match map(v) {
                    Some(s) => {
                        if !same_ring(&s.ring, &ring) {
                            return Err(SeriesError::Context);
                        }
                        if !allow_constant && !s.constant_term().is_zero() {
                            return Err(SeriesError::Composition(v.to_string()));
                        }
                        s
                    }
                    None => Series::var(&ring, v),
                };
                min_order = min_order.min(img.order().unwrap_or(u32::MAX));
                images.insert(i, img);
            }
        }
        // Group by the holomorphic part of each monomial so that mixed
        // products happen once per holomorphic factor.
        let per = (ring.levels() * ring.n) as u8;
        let mut groups: BTreeMap<Mono, Vec<(Mono, Scalar)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let h: Vec<u8> = m.indices().iter().copied().filter(|&i| i < per).collect();
            let a: Vec<u8> = m.indices().iter().copied().filter(|&i| i >= per).collect();
            groups
                .entry(Mono::from_indices(h).unwrap())
                .or_default()
                .push((Mono::from_indices(a).unwrap(), c.clone()));
        }
        let mut cache: HashMap<Mono, Series> = HashMap::new();
        let mut eval = |m: &Mono| -> Series { eval_mono(m, &images, &mut cache, &ring) };
        let mut out = Series::zero(&ring);
        for (h, anti) in &groups {
            let mut inner = Series::zero(&ring);
            for (a, c) in anti {
                inner = &inner + &eval(a).scale(c);
            }
            out = &out + &(&eval(h) * &inner);
        }
        if self.known != EXACT {
            // Unknown terms have degree >= known and may involve any
            // variable, so they land at degree >= known * (least image order).
            for i in 0..ring.nvars() as u8 {
                if !images.contains_key(&i) {
                    let o = map(ring.var(i)).map_or(Some(1), |s| s.order());
                    min_order = min_order.min(o.unwrap_or(u32::MAX));
                }
            }
            let k = match (self.known, min_order) {
                (0, _) => 0,
                (_, u32::MAX) => EXACT,
                (k, m) => k.saturating_mul(m),
            };
            out.known = out.known.min(k);
            out.clip();
        }
        Ok(out)
    }

    /// s with s·s = self on the valid window; requires constant term 1.
    pub fn sqrt_unit(&self) -> Result<Series, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::Domain("sqrt_unit needs constant term 1".into()));
        }
        let ring = &self.ring;
        let x = self - &Series::one(ring);
        if x.is_zero() {
            let mut one = Series::one(ring);
            one.known = self.known;
            return Ok(one);
        }
        // Σ binom(1/2, k) x^k
        let mut coef = BigRational::from_integer(BigInt::from(1));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut out = Series::one(ring);
        let mut xp = Series::one(ring);
        for k in 0..ring.d_max {
            let kk = BigRational::from_integer(BigInt::from(k));
            coef = coef * (&half - &kk) / (&kk + BigRational::from_integer(BigInt::from(1)));
            xp = &xp * &x;
            if xp.is_zero() {
                break;
            }
            let c = Scalar::from_rational(ring.mode, coef.clone(), BigRational::from_integer(BigInt::from(0)));
            out = &out + &xp.scale(&c);
        }
        Ok(out.with_window(self.valid_degree()).mark_truncated())
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Series, SeriesError> {
        let ring = &self.ring;
        let c = self.constant_term();
        let ci = c.inv().ok_or_else(|| SeriesError::Domain("inverse needs a nonzero constant term".into()))?;
        let x = &self.scale(&ci) - &Series::one(ring);
        if x.is_zero() {
            let mut c = Series::constant(ring, ci);
            c.known = self.known;
            return Ok(c);
        }
        let mut out = Series::one(ring);
        let mut xp = Series::one(ring);
        for k in 1..=ring.d_max {
            xp = &xp * &x;
            if xp.is_zero() {
                break;
            }
            out = if k % 2 == 1 { &out - &xp } else { &out + &xp };
        }
        Ok(out.scale(&ci).with_window(self.valid_degree()).mark_truncated())
    }

    /// exp of a series with zero constant term.
    pub fn exp_nilpotent(&self) -> Result<Series, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::Domain("exp needs zero constant term".into()));
        }
        let ring = &self.ring;
        let mut out = Series::one(ring);
        let mut term = Series::one(ring);
        for k in 1..=ring.d_max as i64 {
            term = (&term * self).scale(&ring.ratio(1, k));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
        }
        Ok(out.with_window(self.valid_degree()).mark_truncated())
    }

    fn mark_truncated(mut self) -> Series {
        if self.known == EXACT {
            self.known = self.ring.d_max + 1;
        }
        self
    }

    /// Serializable term list in canonical order.
    pub fn to_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                re: c.re_string(),
                im: c.im_string(),
                mono: m
                    .factors()
                    .into_iter()
                    .map(|(i, e)| {
                        let v = self.ring.var(i);
                        [v.sector as u32, v.level as u32, v.flavor as u32 + 1, e]
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn from_term_list(ring: &Arc<Ring>, terms: &[TermJson]) -> Result<Series, String> {
        let mut out = Vec::new();
        for (k, t) in terms.iter().enumerate() {
            let c = Scalar::parse(ring.mode, &t.re, &t.im).map_err(|e| format!("/{k}: {e}"))?;
            let mut idx = Vec::new();
            for (j, f) in t.mono.iter().enumerate() {
                let [sec, level, flavor, e] = *f;
                let sector = match sec {
                    0 => Sector::Hol,
                    1 => Sector::Antihol,
                    _ => return Err(format!("/{k}/mono/{j}: sector must be 0 or 1")),
                };
                if flavor == 0 || flavor as usize > ring.n || level as usize > ring.n_max {
                    return Err(format!("/{k}/mono/{j}: variable outside the ring"));
                }
                let v = Var { sector, level: level as usize, flavor: flavor as usize - 1 };
                for _ in 0..e {
                    idx.push(ring.index(v));
                }
            }
            if idx.len() > MAX_DEGREE {
                return Err(format!("/{k}: degree above {MAX_DEGREE}"));
            }
            out.push((Mono::from_indices(idx).unwrap(), c));
        }
        Ok(Series::from_terms(ring, out))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson { valid_degree: self.valid_degree(), terms: self.to_terms() }
    }
}

/// Potential P with ∂P/∂vars[k] = omega[k] and P(0) = 0, by the radial
/// homotopy formula. Only meaningful for closed forms; callers verify.
pub fn homotopy_potential(ring: &Arc<Ring>, vars: &[Var], omega: &[Series]) -> Series {
    let mut acc: HashMap<Mono, Scalar> = HashMap::new();
    let mut known = EXACT;
    for (v, w) in vars.iter().zip(omega) {
        if w.known != EXACT {
            known = known.min(w.known.saturating_add(1));
        }
        let idx = ring.index(*v);
        for (m, c) in &w.terms {
            let k = m.degree() as i64 + 1;
            let Some(mm) = m.mul(&Mono::var(idx)) else { continue };
            let c = c.mul(&ring.ratio(1, k));
            match acc.get_mut(&mm) {
                Some(x) => x.add_assign(&c),
                None => {
                    acc.insert(mm, c);
                }
            }
        }
    }
    let mut s = Series::from_terms(ring, acc);
    if known != EXACT {
        s.known = s.known.min(known.min(ring.d_max + 1));
        s.clip();
    }
    s
}

fn eval_mono(m: &Mono, images: &HashMap<u8, Series>, cache: &mut HashMap<Mono, Series>, ring: &Arc<Ring>) -> Series {
    if m.degree() == 0 {
        return Series::one(ring);
    }
    if let Some(s) = cache.get(m) {
        return s.clone();
    }
    let last = m.indices()[m.degree() as usize - 1];
    let rest = m.remove_one(last).unwrap();
    let r = eval_mono(&rest, images, cache, ring);
    let s = &r * &images[&last];
    cache.insert(*m, s.clone());
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub re: String,
    pub im: String,
    pub mono: Vec<[u32; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    /// None when no coefficient is known.
    pub valid_degree: Option<u32>,
    pub terms: Vec<TermJson>,
}

impl PartialEq for Series {
    /// Coefficient equality on the common valid window.
    fn eq(&self, o: &Series) -> bool {
        if !same_ring(&self.ring, &o.ring) {
            return false;
        }
        (self - o).max_abs() == 0.0
    }
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        self.add_impl(o, false)
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        self.add_impl(o, true)
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        self.mul_impl(o)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale_int(-1)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, o: Series) -> Series {
        &self + &o
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        &self - &o
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring1(d: u32) -> Arc<Ring> {
        Ring::new(1, 2, d, Mode::Rational).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring1(6);
        let t = Series::var(&r, Var::hol(0, 0));
        let one = Series::one(&r);
        let p = &(&t + &one) * &(&t - &one);
        assert_eq!(p, &t.pow(2) - &one);
        assert!(p.is_exact());
    }

    #[test]
    fn min_rule_and_truncation() {
        let r = ring1(6);
        let t = Series::var(&r, Var::hol(0, 0));
        let a = (&Series::one(&r) + &t).with_valid(6);
        let a = Series { known: 7, ..a };
        let b = Series { known: 5, ..(&Series::one(&r) + &t) };
        assert_eq!((&a * &b).valid_degree(), Some(4));
        let p = &t.pow(3) * &t.pow(4);
        assert!(p.is_zero());
        assert_eq!(p.valid_degree(), Some(6));
        assert!(!p.is_exact());
    }

    #[test]
    fn derivative_examples() {
        let r = ring1(6);
        let t0 = Series::var(&r, Var::hol(0, 0));
        let t1 = Series::var(&r, Var::hol(1, 0));
        let f = &t0.pow(2) * &t1;
        assert_eq!(f.deriv(Var::hol(0, 0)), (&t0 * &t1).scale_int(2));
        assert!(f.deriv(Var::antihol(0, 0)).is_zero());
    }

    #[test]
    fn substitute_square() {
        let r = ring1(6);
        let t0 = Series::var(&r, Var::hol(0, 0));
        let t1 = Series::var(&r, Var::hol(1, 0));
        let img = &t0 + &(&t1 * &t0);
        let f = t0.pow(2);
        let g = f
            .substitute(&|v| if v == Var::hol(0, 0) { Some(img.clone()) } else { None }, false)
            .unwrap();
        let expect = &(&t0.pow(2) + &(&t1 * &t0.pow(2)).scale_int(2)) + &(&t1.pow(2) * &t0.pow(2));
        assert_eq!(g, expect);
        let bad = &img + &Series::one(&r);
        let e = f.substitute(&|v| if v == Var::hol(0, 0) { Some(bad.clone()) } else { None }, false);
        assert!(matches!(e, Err(SeriesError::Composition(_))));
    }

    #[test]
    fn substitute_truncated_zero() {
        // The lost terms of a truncated zero may use any variable, so the
        // window follows the least image order, not the (empty) term list.
        let r = ring1(6);
        let t0 = Series::var(&r, Var::hol(0, 0));
        let z = Series::zero(&r).with_valid(1);
        let g = z.substitute(&|v| if v == Var::hol(0, 0) { Some(t0.pow(2)) } else { None }, false).unwrap();
        assert_eq!(g.valid_degree(), Some(1));
        let g = z.substitute(&|_| Some(t0.pow(3)), false).unwrap();
        assert_eq!(g.valid_degree(), Some(5));
    }

    #[test]
    fn conjugate_of_i_t() {
        let r = ring1(4);
        let s = Series::monomial(&r, Scalar::i(r.mode), &[(Var::hol(0, 0), 1)]);
        let c = s.conj();
        assert_eq!(c, Series::monomial(&r, Scalar::i(r.mode).neg(), &[(Var::antihol(0, 0), 1)]));
        assert_eq!(c.conj(), s);
    }

    #[test]
    fn sqrt_examples() {
        let r = ring1(6);
        let t = Series::var(&r, Var::hol(0, 0));
        let one = Series::one(&r);
        let sq = (&one + &t).pow(2);
        assert_eq!(sq.sqrt_unit().unwrap(), &one + &t);
        assert_eq!(one.sqrt_unit().unwrap(), one);
        let a = &(&one + &t) * &(&one + &t.conj());
        let s = a.sqrt_unit().unwrap();
        assert_eq!(&s * &s, a);
        assert!(t.sqrt_unit().is_err());
    }

    #[test]
    fn restrict_examples() {
        let r = ring1(6);
        let t0 = Series::var(&r, Var::hol(0, 0));
        let t2 = Series::var(&r, Var::hol(2, 0));
        assert!((&t2 * &t0).restrict_small().is_zero());
        assert_eq!((&t0 + &t2).restrict_small(), t0);
    }

    #[test]
    fn inverse_and_exp() {
        let r = ring1(6);
        let t = Series::var(&r, Var::hol(0, 0));
        let a = &Series::int(&r, 2) + &t;
        assert_eq!(&a * &a.inverse().unwrap(), Series::one(&r));
        let e = t.exp_nilpotent().unwrap();
        let em = t.scale_int(-1).exp_nilpotent().unwrap();
        assert_eq!(&e * &em, Series::one(&r));
    }
}
