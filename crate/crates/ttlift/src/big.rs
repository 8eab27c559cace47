//! The truncated big phase space: u-map, M-matrix, T-frame, genus-zero
//! correlators, products, and lifted tensors.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::Mat;
use crate::small::{ChernData, CvData, DeformedFlats, FrobeniusModel, Hermitian, ModelError, PotentialEndo, RealStructure};
use crate::series::{Ring, Sector, Series, SeriesError, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BigError {
    #[error("i_max ({i_max}) must be at least n_max ({n_max})")]
    Imax { i_max: usize, n_max: usize },
    #[error("level {0} exceeds n_max")]
    Truncation(usize),
    #[error("u-map iteration did not become stationary")]
    NoConvergence,
    #[error("function depends on descendant variables")]
    Domain,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    Coord,
    T,
}

/// A vector field with series components indexed by (level, flavor).
#[derive(Clone, Debug)]
pub struct FrameVector {
    pub frame: Frame,
    pub sector: Sector,
    pub comps: Vec<Series>,
}

/// Real-structure data cached by the context.
#[derive(Clone, Debug)]
pub struct HermData {
    pub k: RealStructure,
    pub herm: Hermitian,
    pub chern: ChernData,
}

pub struct BigContext {
    pub model: FrobeniusModel,
    pub ring: Arc<Ring>,
    pub n_max: usize,
    pub i_max: usize,
    pub flats: DeformedFlats,
    /// Small structure constants C_α.
    pub c: Vec<Mat>,
    /// lift(∂_α∂_β∂_σ F)
    pub c_lower_hat: Vec<Vec<Vec<Series>>>,
    /// u^σ (upper index)
    pub u: Vec<Series>,
    pub u_bar: Vec<Series>,
    /// m[σ][α] = ∂u^σ/∂t^α_0, stored as matrix row σ column α.
    pub m: Mat,
    pub m_bar: Mat,
    /// two[i][β][α] = <<τ_i(γ_β) γ_α>> = lift(R_{α,β,i})
    pub two: Vec<Vec<Vec<Series>>>,
    /// Coordinate components of T^n(γ_α), indexed by frame index.
    pub tframe: Vec<Vec<Series>>,
    /// T-frame components of τ_{n,α}.
    pub tinv: Vec<Vec<Series>>,
    three: HashMap<[usize; 3], Series>,
    pub herm: Option<HermData>,
    pub potential: Option<PotentialEndo>,
    pub cv: Option<CvData>,
}

impl BigContext {
    pub fn build(
        model: FrobeniusModel,
        k: Option<RealStructure>,
        potential: Option<PotentialEndo>,
        cv: Option<CvData>,
        i_max: usize,
    ) -> Result<BigContext, BigError> {
        let ring = model.ring.clone();
        let n_max = ring.n_max;
        if i_max < n_max {
            return Err(BigError::Imax { i_max, n_max });
        }
        let n = ring.n;
        let flats = model.deformed_flats(i_max)?;
        let c = model.structure_constants();
        let u = solve_u(&model, &flats)?;
        let u_bar: Vec<Series> = u.iter().map(|s| s.conj()).collect();
        let m = Mat::from_fn(n, n, |s, a| u[s].deriv(Var::hol(0, a)));
        let m_bar = m.conj();
        let lift = |f: &Series| lift_with(&u, f);
        let cl = model.c_lower();
        let c_lower_hat = cl
            .iter()
            .map(|x| x.iter().map(|y| y.iter().map(|z| lift(z)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut two = Vec::new();
        for i in 0..=i_max {
            let mut tb = Vec::new();
            for b in 0..n {
                let mut ta = Vec::new();
                for a in 0..n {
                    ta.push(lift(&flats.r[a][b][i])?);
                }
                tb.push(ta);
            }
            two.push(tb);
        }
        let mut ctx = BigContext {
            model,
            ring: ring.clone(),
            n_max,
            i_max,
            flats,
            c,
            c_lower_hat,
            u,
            u_bar,
            m,
            m_bar,
            two,
            tframe: vec![],
            tinv: vec![],
            three: HashMap::new(),
            herm: None,
            potential,
            cv,
        };
        ctx.build_tframe()?;
        ctx.build_three_point();
        if let Some(k) = k {
            let herm = ctx.model.hermitian_from_k(&k)?;
            let chern = ctx.model.chern_and_curvature_small(&herm);
            ctx.herm = Some(HermData { k, herm, chern });
        }
        Ok(ctx)
    }

    pub fn n(&self) -> usize {
        self.ring.n
    }

    /// Number of frame indices (n, α) with n ≤ n_max.
    pub fn dim(&self) -> usize {
        (self.n_max + 1) * self.ring.n
    }

    pub fn idx(&self, level: usize, flavor: usize) -> usize {
        level * self.ring.n + flavor
    }

    pub fn level_of(&self, i: usize) -> usize {
        i / self.ring.n
    }

    pub fn flavor_of(&self, i: usize) -> usize {
        i % self.ring.n
    }

    pub fn coord_var(&self, i: usize) -> Var {
        Var::hol(self.level_of(i), self.flavor_of(i))
    }

    pub fn zero(&self) -> Series {
        Series::zero(&self.ring)
    }

    pub fn zero_vec(&self) -> Vec<Series> {
        vec![self.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vec<Series> {
        let mut v = self.zero_vec();
        v[i] = Series::one(&self.ring);
        v
    }

    /// Natural lift f ↦ f(u, ū) of a function on the small phase space.
    pub fn lift_function(&self, f: &Series) -> Result<Series, BigError> {
        lift_with(&self.u, f)
    }

    pub fn lift_mat(&self, x: &Mat) -> Mat {
        x.map(|s| self.lift_function(s).expect("small-phase matrix"))
    }

    pub fn two_point_lift(&self, i: usize, beta: usize, alpha: usize) -> Result<Series, BigError> {
        if i > self.i_max {
            return Err(BigError::Truncation(i));
        }
        Ok(self.two[i][beta][alpha].clone())
    }

    /// τ_+ applied to coordinate components.
    pub fn tau_plus(&self, w: &[Series]) -> Result<Vec<Series>, BigError> {
        let mut out = self.zero_vec();
        for (i, x) in w.iter().enumerate() {
            if x.is_exact_zero() {
                continue;
            }
            let l = self.level_of(i);
            if l + 1 > self.n_max {
                return Err(BigError::Truncation(l + 1));
            }
            out[self.idx(l + 1, self.flavor_of(i))] = x.clone();
        }
        Ok(out)
    }

    /// τ_- applied to coordinate components (level-0 components drop out).
    pub fn tau_minus(&self, w: &[Series]) -> Vec<Series> {
        let mut out = self.zero_vec();
        for (i, x) in w.iter().enumerate() {
            let l = self.level_of(i);
            if l > 0 {
                out[self.idx(l - 1, self.flavor_of(i))] = x.clone();
            }
        }
        out
    }

    /// Closed form T(τ_{m,β}) = τ_{m+1,β} - η^{σμ} lift(R_{σ,β,m}) τ_{0,μ},
    /// extended function-linearly.
    pub fn apply_t(&self, w: &[Series]) -> Result<Vec<Series>, BigError> {
        let n = self.n();
        let mut out = self.tau_plus(w)?;
        for (i, x) in w.iter().enumerate() {
            if x.is_exact_zero() {
                continue;
            }
            let (l, b) = (self.level_of(i), self.flavor_of(i));
            for mu in 0..n {
                let mut coef = self.zero();
                for s in 0..n {
                    let e = &self.model.eta_inv[s][mu];
                    if !e.is_zero() {
                        coef = &coef + &self.two[l][b][s].scale(e);
                    }
                }
                if !coef.is_exact_zero() {
                    out[self.idx(0, mu)] = &out[self.idx(0, mu)] - &(x * &coef);
                }
            }
        }
        Ok(out)
    }

    fn build_tframe(&mut self) -> Result<(), BigError> {
        let n = self.n();
        let dim = self.dim();
        let mut tf: Vec<Vec<Series>> = vec![vec![]; dim];
        for a in 0..n {
            tf[self.idx(0, a)] = self.basis(self.idx(0, a));
            for l in 1..=self.n_max {
                let prev = tf[self.idx(l - 1, a)].clone();
                tf[self.idx(l, a)] = self.apply_t(&prev)?;
            }
        }
        // Unipotent back substitution: τ_I = T_I - Σ_{lower J} (T_I)^J τ_J.
        let mut inv: Vec<Vec<Series>> = vec![vec![]; dim];
        for i in 0..dim {
            let mut v = self.basis(i);
            for j in 0..dim {
                if self.level_of(j) < self.level_of(i) && !tf[i][j].is_exact_zero() {
                    let coef = tf[i][j].clone();
                    for (x, y) in v.iter_mut().zip(&inv[j]) {
                        if !y.is_exact_zero() {
                            *x = &*x - &(&coef * y);
                        }
                    }
                }
            }
            inv[i] = v;
        }
        self.tframe = tf;
        self.tinv = inv;
        Ok(())
    }

    /// T^n(γ_α) in coordinates.
    pub fn t_frame_vector(&self, level: usize, flavor: usize) -> Result<FrameVector, BigError> {
        if level > self.n_max {
            return Err(BigError::Truncation(level));
        }
        Ok(FrameVector { frame: Frame::Coord, sector: Sector::Hol, comps: self.tframe[self.idx(level, flavor)].clone() })
    }

    pub fn to_tframe(&self, w: &[Series]) -> Vec<Series> {
        combine(&self.ring, w, &self.tinv)
    }

    pub fn to_coord(&self, x: &[Series]) -> Vec<Series> {
        combine(&self.ring, x, &self.tframe)
    }

    /// Directional derivative of f along a holomorphic coordinate vector.
    pub fn deriv_along(&self, f: &Series, w: &[Series]) -> Series {
        let mut acc = self.zero();
        for (i, x) in w.iter().enumerate() {
            if !x.is_exact_zero() {
                acc = &acc + &(x * &f.deriv(self.coord_var(i)));
            }
        }
        acc
    }

    /// Directional derivative along the antiholomorphic vector whose
    /// components (already conjugated) are `w`.
    pub fn deriv_along_bar(&self, f: &Series, w: &[Series]) -> Series {
        let mut acc = self.zero();
        for (i, x) in w.iter().enumerate() {
            if !x.is_exact_zero() {
                acc = &acc + &(x * &f.deriv(self.coord_var(i).conj()));
            }
        }
        acc
    }

    pub fn deriv_mat_along(&self, x: &Mat, w: &[Series]) -> Mat {
        x.map(|s| self.deriv_along(s, w))
    }

    pub fn deriv_mat_along_bar(&self, x: &Mat, w: &[Series]) -> Mat {
        x.map(|s| self.deriv_along_bar(s, w))
    }

    /// Lie bracket of two holomorphic coordinate vector fields.
    pub fn bracket(&self, v: &[Series], w: &[Series]) -> Vec<Series> {
        (0..self.dim()).map(|k| &self.deriv_along(&w[k], v) - &self.deriv_along(&v[k], w)).collect()
    }

    /// Coordinate components of the string field S = -Σ t̃^α_n τ_{n-1,α}.
    pub fn string_field(&self) -> Vec<Series> {
        let mut s = self.zero_vec();
        for p in 0..self.n_max {
            for d in 0..self.n() {
                let mut t = Series::var(&self.ring, Var::hol(p + 1, d));
                if p == 0 && d == self.model.unit {
                    t = &t - &Series::one(&self.ring);
                }
                s[self.idx(p, d)] = -&t;
            }
        }
        s
    }

    /// Base case <<τ_{0,α} τ_{0,β} τ_{0,γ}>> = lift(c_{αβσ}) M^σ_γ, unsymmetrized.
    pub fn three_point_base(&self, a: usize, b: usize, g: usize) -> Series {
        let mut acc = self.zero();
        for s in 0..self.n() {
            acc = &acc + &(&self.c_lower_hat[a][b][s] * self.m.get(s, g));
        }
        acc
    }

    fn build_three_point(&mut self) {
        let dim = self.dim();
        let mut keys: Vec<[usize; 3]> = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    keys.push([i, j, k]);
                }
            }
        }
        // Reduce by total level so recursive references are already known.
        keys.sort_by_key(|k| (k.iter().map(|&x| self.level_of(x)).sum::<usize>(), *k));
        for key in keys {
            let v = self.three_point_reduce(key);
            self.three.insert(key, v);
        }
    }

    fn sort_key(&self, mut k: [usize; 3]) -> [usize; 3] {
        k.sort();
        k
    }

    /// TRR on the slot with the highest level.
    fn three_point_reduce(&self, key: [usize; 3]) -> Series {
        let [a, b, c] = key;
        let lc = self.level_of(c);
        if lc == 0 {
            return self.three_point_base(self.flavor_of(a), self.flavor_of(b), self.flavor_of(c));
        }
        let n = self.n();
        let gc = self.flavor_of(c);
        let mut acc = self.zero();
        for mu in 0..n {
            for nu in 0..n {
                let e = &self.model.eta_inv[mu][nu];
                if e.is_zero() {
                    continue;
                }
                let k = self.sort_key([a, b, self.idx(0, nu)]);
                let t = &self.three[&k];
                acc = &acc + &(&self.two[lc - 1][gc][mu] * t).scale(e);
            }
        }
        acc
    }

    /// <<τ_a τ_b τ_c>> for frame indices a, b, c (any levels ≤ n_max).
    pub fn three_point(&self, a: usize, b: usize, c: usize) -> Series {
        self.three[&self.sort_key([a, b, c])].clone()
    }

    /// Independent route for correlators with a primary slot:
    /// <<τ_a τ_b γ_μ>> = ∂/∂t_b <<τ_a γ_μ>>.
    pub fn three_point_by_derivative(&self, a: usize, b: usize, mu: usize) -> Series {
        let (l, al) = (self.level_of(a), self.flavor_of(a));
        self.two[l][al][mu].deriv(self.coord_var(b))
    }

    /// W1 ∘ W2 = <<W1 W2 γ^σ>> γ_σ via TRR-reduced correlators.
    pub fn quantum_product(&self, w1: &[Series], w2: &[Series]) -> Vec<Series> {
        self.product_with(w1, w2, |a, b, mu| self.three_point(a, b, self.idx(0, mu)))
    }

    /// The same product with correlators taken as derivatives of two-point lifts.
    pub fn quantum_product_by_derivative(&self, w1: &[Series], w2: &[Series]) -> Vec<Series> {
        self.product_with(w1, w2, |a, b, mu| self.three_point_by_derivative(a, b, mu))
    }

    fn product_with(&self, w1: &[Series], w2: &[Series], corr: impl Fn(usize, usize, usize) -> Series) -> Vec<Series> {
        let n = self.n();
        let mut out = self.zero_vec();
        let mut pairs = Vec::new();
        for (a, x) in w1.iter().enumerate() {
            for (b, y) in w2.iter().enumerate() {
                if !x.is_exact_zero() && !y.is_exact_zero() {
                    pairs.push((a, b, x * y));
                }
            }
        }
        for s in 0..n {
            let mut acc = self.zero();
            for (a, b, xy) in &pairs {
                for mu in 0..n {
                    let e = &self.model.eta_inv[mu][s];
                    if !e.is_zero() {
                        acc = &acc + &(xy * &corr(*a, *b, mu)).scale(e);
                    }
                }
            }
            out[self.idx(0, s)] = acc;
        }
        out
    }

    /// <<W1 W2 W3>> for coordinate vectors.
    pub fn correlator3(&self, w1: &[Series], w2: &[Series], w3: &[Series]) -> Series {
        let mut acc = self.zero();
        for (a, x) in w1.iter().enumerate() {
            if x.is_exact_zero() {
                continue;
            }
            for (b, y) in w2.iter().enumerate() {
                if y.is_exact_zero() {
                    continue;
                }
                let xy = x * y;
                for (c, z) in w3.iter().enumerate() {
                    if !z.is_exact_zero() {
                        acc = &acc + &(&(&xy * z) * &self.three_point(a, b, c));
                    }
                }
            }
        }
        acc
    }

    /// Liu's metric η̂(W, V) = Σ_k <<S τ_-^k(W) τ_-^k(V)>>.
    pub fn eta_hat_by_correlators(&self, w: &[Series], v: &[Series]) -> Series {
        let s = self.string_field();
        let mut acc = self.zero();
        let (mut wk, mut vk) = (w.to_vec(), v.to_vec());
        for _ in 0..=self.n_max {
            acc = &acc + &self.correlator3(&s, &wk, &vk);
            wk = self.tau_minus(&wk);
            vk = self.tau_minus(&vk);
        }
        acc
    }

    /// Degenerate pairing <U, V> = <<S U V>>.
    pub fn degenerate_pairing(&self, u: &[Series], v: &[Series]) -> Series {
        self.correlator3(&self.string_field(), u, v)
    }

    /// Block-diagonal lift of a small endomorphism to the T-frame.
    pub fn lift_block(&self, x: &Mat) -> Mat {
        let lx = self.lift_mat(x);
        self.block(&lx)
    }

    /// Block-diagonal repetition of an already lifted N×N matrix.
    pub fn block(&self, lx: &Mat) -> Mat {
        let dim = self.dim();
        Mat::from_fn(dim, dim, |i, j| {
            if self.level_of(i) == self.level_of(j) {
                lx.get(self.flavor_of(i), self.flavor_of(j)).clone()
            } else {
                self.zero()
            }
        })
    }

    /// η̂ in the T-frame.
    pub fn eta_hat(&self) -> Mat {
        self.block(&self.model.eta_mat())
    }

    /// ĥ in the T-frame.
    pub fn h_hat(&self) -> Option<Mat> {
        self.herm.as_ref().map(|h| self.lift_block(&h.herm.h))
    }

    /// Σ_σ coef[σ] · lifted block of mats[σ], i.e. the transport pattern
    /// M^σ_α T^n(lift(X_σ)).
    fn transported(&self, coefs: Vec<Series>, lifted: &[Mat]) -> Mat {
        let n = self.n();
        let mut acc = Mat::zeros(&self.ring, n, n);
        for (s, cf) in coefs.iter().enumerate() {
            acc = acc.add(&lifted[s].scale_series(cf));
        }
        self.block(&acc)
    }

    /// Ĉ along the T-frame direction e_J (closed form).
    pub fn higgs_hat_dir(&self, j: usize, c_hat: &[Mat]) -> Mat {
        if self.level_of(j) > 0 {
            return Mat::zeros(&self.ring, self.dim(), self.dim());
        }
        let a = self.flavor_of(j);
        self.transported((0..self.n()).map(|s| self.m.get(s, a).clone()).collect(), c_hat)
    }

    /// Lifted small structure constants lift(C_σ).
    pub fn c_hat_small(&self) -> Vec<Mat> {
        self.c.iter().map(|x| self.lift_mat(x)).collect()
    }

    /// Ĉ_W(V) for W, V in the T-frame.
    pub fn higgs_hat(&self, w: &[Series], v: &[Series]) -> Vec<Series> {
        let ch = self.c_hat_small();
        let mut out = self.zero_vec();
        for (j, x) in w.iter().enumerate() {
            if x.is_exact_zero() || self.level_of(j) > 0 {
                continue;
            }
            let cv = self.higgs_hat_dir(j, &ch).apply(v);
            for (o, y) in out.iter_mut().zip(cv) {
                *o = &*o + &(x * &y);
            }
        }
        out
    }

    /// Generic transport: direction e_J gets Σ_σ M^σ_α lift(X_σ) for J at
    /// level 0, zero otherwise.
    pub fn transport_dir(&self, j: usize, lifted: &[Mat]) -> Mat {
        self.higgs_hat_dir(j, lifted)
    }

    /// Antiholomorphic transport with conj(M).
    pub fn transport_dir_bar(&self, j: usize, lifted: &[Mat]) -> Mat {
        if self.level_of(j) > 0 {
            return Mat::zeros(&self.ring, self.dim(), self.dim());
        }
        let b = self.flavor_of(j);
        self.transported((0..self.n()).map(|s| self.m_bar.get(s, b).clone()).collect(), lifted)
    }

    /// Mixed transport M^σ_α conj(M^ν_β) lift(X_{σν}).
    pub fn transport_mixed(&self, j: usize, k: usize, lifted: &[Vec<Mat>]) -> Mat {
        let dim = self.dim();
        if self.level_of(j) > 0 || self.level_of(k) > 0 {
            return Mat::zeros(&self.ring, dim, dim);
        }
        let (a, b) = (self.flavor_of(j), self.flavor_of(k));
        let n = self.n();
        let mut acc = Mat::zeros(&self.ring, n, n);
        for s in 0..n {
            for v in 0..n {
                let cf = self.m.get(s, a) * self.m_bar.get(v, b);
                acc = acc.add(&lifted[s][v].scale_series(&cf));
            }
        }
        self.block(&acc)
    }

    /// Closed-form Chern connection matrix Â along e_J.
    pub fn chern_hat_dir(&self, j: usize, a_hat: &[Mat]) -> Mat {
        self.transport_dir(j, a_hat)
    }

    /// Closed-form connection matrix along an arbitrary holomorphic
    /// coordinate vector, by function-linearity.
    pub fn along_coord(&self, w: &[Series], per_dir: &dyn Fn(usize) -> Mat) -> Mat {
        let x = self.to_tframe(w);
        let dim = self.dim();
        let mut acc = Mat::zeros(&self.ring, dim, dim);
        for (j, cf) in x.iter().enumerate() {
            if !cf.is_exact_zero() {
                acc = acc.add(&per_dir(j).scale_series(cf));
            }
        }
        acc
    }

    /// Express a coordinate-frame connection action in T-frame terms: the
    /// T-frame components of ∇_{e_J} e_I for the flat coordinate connection.
    pub fn flat_cov_of_frame(&self, j: usize, i: usize) -> Vec<Series> {
        let w = &self.tframe[j];
        let v = &self.tframe[i];
        let coord: Vec<Series> = v.iter().map(|x| self.deriv_along(x, w)).collect();
        self.to_tframe(&coord)
    }

    /// S∘S as a primary vector (TRR route).
    pub fn s_circ_s(&self) -> Vec<Series> {
        let s = self.string_field();
        self.quantum_product(&s, &s)
    }

    /// T-frame diamond product: T^n(U) ⋄ T^m(V) = δ_{mn} T^n(U∘V), with U∘V
    /// the product on primaries.
    pub fn diamond(&self, x: &[Series], y: &[Series]) -> Vec<Series> {
        let n = self.n();
        let mut out = self.zero_vec();
        for l in 0..=self.n_max {
            for a in 0..n {
                let xa = &x[self.idx(l, a)];
                if xa.is_exact_zero() {
                    continue;
                }
                for b in 0..n {
                    let yb = &y[self.idx(l, b)];
                    if yb.is_exact_zero() {
                        continue;
                    }
                    let p = self.quantum_product(&self.basis(self.idx(0, a)), &self.basis(self.idx(0, b)));
                    let xy = xa * yb;
                    for s in 0..n {
                        let o = self.idx(l, s);
                        out[o] = &out[o] + &(&xy * &p[self.idx(0, s)]);
                    }
                }
            }
        }
        out
    }

    /// Ŝ = Σ_k T^k(S∘S) in T-frame components.
    pub fn s_hat(&self) -> Vec<Series> {
        let p = self.s_circ_s();
        let mut out = self.zero_vec();
        for l in 0..=self.n_max {
            for s in 0..self.n() {
                out[self.idx(l, s)] = p[self.idx(0, s)].clone();
            }
        }
        out
    }

    /// Bilinear form value X^T B Y for T-frame components.
    pub fn form(&self, b: &Mat, x: &[Series], y: &[Series]) -> Series {
        let by = b.apply(y);
        let mut acc = self.zero();
        for (a, c) in x.iter().zip(&by) {
            if !a.is_exact_zero() && !c.is_exact_zero() {
                acc = &acc + &(a * c);
            }
        }
        acc
    }
}

fn combine(ring: &Arc<Ring>, coefs: &[Series], basis: &[Vec<Series>]) -> Vec<Series> {
    let dim = basis.len();
    let mut out = vec![Series::zero(ring); dim];
    for (c, b) in coefs.iter().zip(basis) {
        if c.is_exact_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !x.is_exact_zero() {
                *o = &*o + &(c * x);
            }
        }
    }
    out
}

fn lift_with(u: &[Series], f: &Series) -> Result<Series, BigError> {
    if !f.uses_only_level0() {
        return Err(BigError::Domain);
    }
    let n = u.len();
    Ok(f.substitute(
        &|v: Var| {
            if v.level != 0 || v.flavor >= n {
                return None;
            }
            Some(match v.sector {
                Sector::Hol => u[v.flavor].clone(),
                Sector::Antihol => u[v.flavor].conj(),
            })
        },
        false,
    )?)
}

/// Fixed point u_α = η_{αγ} t^γ_0 + Σ_{i, β} t^β_{i+1} lift(R_{α,β,i}).
fn solve_u(model: &FrobeniusModel, flats: &DeformedFlats) -> Result<Vec<Series>, BigError> {
    let ring = &model.ring;
    let n = ring.n;
    let n_max = ring.n_max;
    let t0: Vec<Series> = (0..n).map(|a| Series::var(ring, Var::hol(0, a))).collect();
    let mut u = t0.clone();
    for _ in 0..=ring.d_max + 1 {
        let mut lower = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = Series::zero(ring);
            for g in 0..n {
                if !model.eta[a][g].is_zero() {
                    acc = &acc + &t0[g].scale(&model.eta[a][g]);
                }
            }
            for i in 0..n_max {
                for b in 0..n {
                    let r = lift_with(&u, &flats.r[a][b][i])?;
                    if !r.is_exact_zero() {
                        acc = &acc + &(&Series::var(ring, Var::hol(i + 1, b)) * &r);
                    }
                }
            }
            lower.push(acc);
        }
        let next: Vec<Series> = (0..n)
            .map(|s| {
                let mut acc = Series::zero(ring);
                for a in 0..n {
                    if !model.eta_inv[s][a].is_zero() {
                        acc = &acc + &lower[a].scale(&model.eta_inv[s][a]);
                    }
                }
                acc
            })
            .collect();
        let stationary = next.iter().zip(&u).all(|(x, y)| (x - y).is_zero());
        u = next;
        if stationary {
            return Ok(u);
        }
    }
    Err(BigError::NoConvergence)
}
