//! Frobenius manifold and tt* calculus on the small phase space.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{invert_scalar_matrix, Mat};
use crate::residual::Measure;
use crate::scalar::Scalar;
use crate::series::{homotopy_potential, Ring, Series, SeriesError, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("eta is not symmetric")]
    EtaNotSymmetric,
    #[error("eta is singular")]
    EtaSingular,
    #[error("prepotential must depend on level-0 holomorphic variables only")]
    PrepotentialDomain,
    #[error("WDVV residual {0} exceeds tolerance")]
    Wdvv(f64),
    #[error("unit index {0} out of range")]
    Unit(usize),
    #[error("integrability failure for theta[{beta}][{i}]: {what}")]
    Integrability { beta: usize, i: usize, what: String },
    #[error("metric h is degenerate at the origin")]
    DegenerateMetric,
    #[error("real structure is not an involution (residual {0})")]
    NotInvolution(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Debug)]
pub struct EulerField {
    /// E = Σ (Q^α_β t^β + r^α) ∂_α, stored as Q[α][β].
    pub q: Vec<Vec<Scalar>>,
    pub r: Vec<Scalar>,
    pub weight_d: Scalar,
}

#[derive(Clone, Debug)]
pub struct FrobeniusModel {
    pub name: String,
    pub ring: Arc<Ring>,
    pub eta: Vec<Vec<Scalar>>,
    pub eta_inv: Vec<Vec<Scalar>>,
    pub f: Series,
    /// 0-based flavor of the unit field.
    pub unit: usize,
    pub euler: EulerField,
    /// θ_{β,i}(0), indexed [β][i]; missing entries are 0.
    pub theta_constants: Vec<Vec<Scalar>>,
}

/// Real structure k(Y^β τ_β) = K^γ_β conj(Y^β) τ_γ, with the symmetric
/// holomorphic metric g it pairs with (η unless given), h = g(·, k·).
#[derive(Clone, Debug)]
pub struct RealStructure {
    pub k: Mat,
    pub g: Option<Mat>,
}

#[derive(Clone, Debug)]
pub struct PotentialEndo {
    pub a: Mat,
}

#[derive(Clone, Debug)]
pub struct CvData {
    pub u: Mat,
    pub q: Mat,
}

#[derive(Clone, Debug)]
pub struct DeformedFlats {
    /// theta[β][i]
    pub theta: Vec<Vec<Series>>,
    /// r[α][β][i] = ∂_α θ_{β,i}
    pub r: Vec<Vec<Vec<Series>>>,
}

#[derive(Clone, Debug)]
pub struct EulerData {
    pub r0: Mat,
    pub rinf: Mat,
    /// |L_E η + d η| (the L_E g = -d g convention).
    pub lie_eta_minus: f64,
    /// |L_E η - d η| (the L_E g = d g convention).
    pub lie_eta_plus: f64,
}

#[derive(Clone, Debug)]
pub struct Hermitian {
    pub h: Mat,
    pub h_inv: Mat,
    pub g: Mat,
    pub involution: Measure,
    pub hermitian: Measure,
}

#[derive(Clone, Debug)]
pub struct ChernData {
    /// A[α]: D_α τ_β = A[α][μ][β] τ_μ
    pub conn: Vec<Mat>,
    /// curv[α][β] = R_{α β̄}
    pub curv: Vec<Vec<Mat>>,
    /// adj[α] = C†_{ᾱ}
    pub adj: Vec<Mat>,
}

/// Named residuals, each on its own degree window.
pub type ResidualMap = BTreeMap<String, Measure>;

impl FrobeniusModel {
    pub fn new(
        name: &str,
        ring: &Arc<Ring>,
        eta: Vec<Vec<Scalar>>,
        f: Series,
        unit: usize,
        euler: EulerField,
    ) -> Result<FrobeniusModel, ModelError> {
        let n = ring.n;
        if eta.len() != n || eta.iter().any(|r| r.len() != n) {
            return Err(ModelError::Shape("eta must be N×N".into()));
        }
        if euler.q.len() != n || euler.q.iter().any(|r| r.len() != n) || euler.r.len() != n {
            return Err(ModelError::Shape("Euler data must be N×N and N".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if eta[i][j] != eta[j][i] {
                    return Err(ModelError::EtaNotSymmetric);
                }
            }
        }
        let eta_inv = invert_scalar_matrix(&eta).ok_or(ModelError::EtaSingular)?;
        if unit >= n {
            return Err(ModelError::Unit(unit + 1));
        }
        if !(f.is_holomorphic() && f.uses_only_level0()) {
            return Err(ModelError::PrepotentialDomain);
        }
        Ok(FrobeniusModel {
            name: name.to_string(),
            ring: ring.clone(),
            eta,
            eta_inv,
            f,
            unit,
            euler,
            theta_constants: vec![],
        })
    }

    pub fn n(&self) -> usize {
        self.ring.n
    }

    pub fn t(&self, a: usize) -> Var {
        Var::hol(0, a)
    }

    pub fn eta_mat(&self) -> Mat {
        Mat::from_scalars(&self.ring, &self.eta)
    }

    pub fn eta_inv_mat(&self) -> Mat {
        Mat::from_scalars(&self.ring, &self.eta_inv)
    }

    /// ∂_α∂_β∂_σ F
    pub fn c_lower(&self) -> Vec<Vec<Vec<Series>>> {
        let n = self.n();
        let d1: Vec<Series> = (0..n).map(|a| self.f.deriv(self.t(a))).collect();
        let d2: Vec<Vec<Series>> = (0..n).map(|a| (0..n).map(|b| d1[a].deriv(self.t(b))).collect()).collect();
        (0..n).map(|a| (0..n).map(|b| (0..n).map(|s| d2[a][b].deriv(self.t(s))).collect()).collect()).collect()
    }

    /// C[α][μ][ν] = c^μ_{αν} = η^{μσ} ∂_α∂_ν∂_σ F.
    pub fn structure_constants(&self) -> Vec<Mat> {
        let n = self.n();
        let cl = self.c_lower();
        (0..n)
            .map(|a| {
                Mat::from_fn(n, n, |mu, nu| {
                    let mut acc = Series::zero(&self.ring);
                    for s in 0..n {
                        if !self.eta_inv[mu][s].is_zero() {
                            acc = &acc + &cl[a][nu][s].scale(&self.eta_inv[mu][s]);
                        }
                    }
                    acc
                })
            })
            .collect()
    }

    pub fn wdvv_residual(&self) -> Measure {
        let c = self.structure_constants();
        let mut m = Measure::empty();
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                m = m.join(Measure::of_mat(&c[a].commutator(&c[b])));
            }
        }
        if m.count == 0 {
            m = Measure { max: 0.0, window: self.ring.d_max, count: 0 };
        }
        m
    }

    pub fn check_wdvv(&self, tol: f64) -> Result<(), ModelError> {
        let w = self.wdvv_residual();
        if w.max > tol {
            return Err(ModelError::Wdvv(w.max));
        }
        Ok(())
    }

    /// E^σ as series.
    pub fn euler_components(&self) -> Vec<Series> {
        let n = self.n();
        (0..n)
            .map(|s| {
                let mut e = Series::constant(&self.ring, self.euler.r[s].clone());
                for b in 0..n {
                    e = &e + &Series::var(&self.ring, self.t(b)).scale(&self.euler.q[s][b]);
                }
                e
            })
            .collect()
    }

    pub fn euler_endomorphisms(&self) -> EulerData {
        let n = self.n();
        let c = self.structure_constants();
        let e = self.euler_components();
        let mut r0 = Mat::zeros(&self.ring, n, n);
        for s in 0..n {
            r0 = r0.add(&c[s].scale_series(&e[s]));
        }
        let rinf = Mat::from_scalars(&self.ring, &self.euler.q);
        let mode = self.ring.mode;
        let mut minus: f64 = 0.0;
        let mut plus: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut l = Scalar::zero(mode);
                for s in 0..n {
                    l = l.add(&self.euler.q[s][a].mul(&self.eta[s][b]));
                    l = l.add(&self.eta[a][s].mul(&self.euler.q[s][b]));
                }
                let de = self.euler.weight_d.mul(&self.eta[a][b]);
                minus = minus.max(l.add(&de).abs());
                plus = plus.max(l.sub(&de).abs());
            }
        }
        EulerData { r0, rinf, lie_eta_minus: minus, lie_eta_plus: plus }
    }

    /// η-adjoint X* = η^{-1} Xᵀ η.
    pub fn eta_adjoint(&self, x: &Mat) -> Mat {
        self.eta_inv_mat().mul(&x.transpose()).mul(&self.eta_mat())
    }

    /// Residuals of the Saito axioms for (∇, η, C, R0, R∞) in flat coordinates.
    pub fn saito_residuals_small(&self) -> ResidualMap {
        let n = self.n();
        let c = self.structure_constants();
        let eu = self.euler_endomorphisms();
        let ring = &self.ring;
        let mut out = ResidualMap::new();
        let zero = Measure { max: 0.0, window: ring.d_max, count: 1 };
        // Levi-Civita connection of a constant metric in flat coordinates.
        out.insert("R_nabla".into(), zero);
        out.insert("nabla_eta".into(), Measure::of_mat(&self.eta_mat().deriv(self.t(0))));
        let mut dc = Measure::empty();
        let mut cc = Measure::empty();
        let mut sym = Measure::empty();
        let mut r0c_plus = Measure::empty();
        let mut r0c_minus = Measure::empty();
        let mut r0_comm = Measure::empty();
        for a in 0..n {
            for b in 0..n {
                dc = dc.join(Measure::of_mat(&c[b].deriv(self.t(a)).sub(&c[a].deriv(self.t(b)))));
                cc = cc.join(Measure::of_mat(&c[a].commutator(&c[b])));
            }
            sym = sym.join(Measure::of_mat(&c[a].sub(&self.eta_adjoint(&c[a]))));
            let d_r0 = eu.r0.deriv(self.t(a));
            let br = c[a].commutator(&eu.rinf);
            r0c_plus = r0c_plus.join(Measure::of_mat(&d_r0.add(&c[a]).sub(&br)));
            r0c_minus = r0c_minus.join(Measure::of_mat(&d_r0.sub(&c[a]).add(&br)));
            r0_comm = r0_comm.join(Measure::of_mat(&eu.r0.commutator(&c[a])));
        }
        out.insert("d_nabla_C".into(), dc);
        out.insert("C_wedge_C".into(), cc);
        out.insert("C_star".into(), sym);
        out.insert("nabla_R0[plus]".into(), r0c_plus);
        out.insert("nabla_R0[minus]".into(), r0c_minus);
        out.insert("R0_C_commute".into(), r0_comm);
        out.insert("R0_star".into(), Measure::of_mat(&eu.r0.sub(&self.eta_adjoint(&eu.r0))));
        out.insert("nabla_Rinf".into(), Measure::of_mat(&eu.rinf.deriv(self.t(0))));
        let w = Mat::identity(ring, n).scale(&self.euler.weight_d);
        out.insert("weight".into(), Measure::of_mat(&self.eta_adjoint(&eu.rinf).add(&eu.rinf).add(&w)));
        out.insert("lie_eta[minus]".into(), Measure::scalar(eu.lie_eta_minus));
        out.insert("lie_eta[plus]".into(), Measure::scalar(eu.lie_eta_plus));
        out
    }

    /// θ_{β,i}, 0 ≤ i ≤ i_max, and R_{α,β,i} = ∂_α θ_{β,i}.
    pub fn deformed_flats(&self, i_max: usize) -> Result<DeformedFlats, ModelError> {
        let n = self.n();
        let ring = &self.ring;
        let c = self.structure_constants();
        let vars: Vec<Var> = (0..n).map(|a| self.t(a)).collect();
        let konst = |b: usize, i: usize| -> Series {
            let c = self.theta_constants.get(b).and_then(|r| r.get(i)).cloned();
            Series::constant(ring, c.unwrap_or_else(|| Scalar::zero(ring.mode)))
        };
        let mut theta: Vec<Vec<Series>> = vec![Vec::new(); n];
        let mut r: Vec<Vec<Vec<Series>>> = vec![vec![Vec::new(); n]; n];
        for b in 0..n {
            let th0 = &self.f.deriv(self.t(b)) + &konst(b, 0);
            for a in 0..n {
                r[a][b].push(th0.deriv(self.t(a)));
            }
            theta[b].push(th0);
            for i in 1..=i_max {
                let prev = theta[b][i - 1].clone();
                let dprev: Vec<Series> = (0..n).map(|s| prev.deriv(self.t(s))).collect();
                let mut grad = Vec::with_capacity(n);
                for a in 0..n {
                    // Φ_{aγ} = c^σ_{aγ} ∂_σ θ_{i-1}
                    let phi: Vec<Series> = (0..n)
                        .map(|g| {
                            let mut acc = Series::zero(ring);
                            for s in 0..n {
                                acc = &acc + &(c[a].get(s, g) * &dprev[s]);
                            }
                            acc
                        })
                        .collect();
                    let mut ga = homotopy_potential(ring, &vars, &phi);
                    if a == self.unit {
                        ga = &ga + &Series::constant(ring, prev.constant_term());
                    }
                    for (g, p) in phi.iter().enumerate() {
                        if Measure::diff(&ga.deriv(self.t(g)), p).max > 0.0 {
                            return Err(ModelError::Integrability {
                                beta: b,
                                i,
                                what: format!("mixed partials disagree in direction {}", g + 1),
                            });
                        }
                    }
                    grad.push(ga);
                }
                let th = &homotopy_potential(ring, &vars, &grad) + &konst(b, i);
                for (a, ga) in grad.iter().enumerate() {
                    if Measure::diff(&th.deriv(self.t(a)), ga).max > 0.0 {
                        return Err(ModelError::Integrability { beta: b, i, what: "gradient is not closed".into() });
                    }
                }
                for (a, ga) in grad.into_iter().enumerate() {
                    r[a][b].push(ga);
                }
                theta[b].push(th);
            }
        }
        Ok(DeformedFlats { theta, r })
    }

    /// H = g·K with its validity residuals.
    pub fn hermitian_from_k(&self, k: &RealStructure) -> Result<Hermitian, ModelError> {
        let n = self.n();
        let g = k.g.clone().unwrap_or_else(|| self.eta_mat());
        if k.k.rows != n || k.k.cols != n || g.rows != n || g.cols != n {
            return Err(ModelError::Shape("K and g must be N×N".into()));
        }
        let h = g.mul(&k.k);
        let involution = Measure::of_mat(&k.k.mul(&k.k.conj()).sub(&Mat::identity(&self.ring, n)));
        let hermitian = Measure::of_mat(&h.sub(&h.conj().transpose()));
        let h_inv = h.inverse().map_err(|_| ModelError::DegenerateMetric)?;
        Ok(Hermitian { h, h_inv, g, involution, hermitian })
    }

    /// h-adjoint X† = conj(H^{-1} Xᵀ H).
    pub fn h_adjoint(herm: &Hermitian, x: &Mat) -> Mat {
        herm.h_inv.mul(&x.transpose()).mul(&herm.h).conj()
    }

    pub fn chern_and_curvature_small(&self, herm: &Hermitian) -> ChernData {
        let n = self.n();
        let c = self.structure_constants();
        let conn: Vec<Mat> =
            (0..n).map(|a| herm.h.deriv(self.t(a)).mul(&herm.h_inv).transpose()).collect();
        let curv = (0..n)
            .map(|a| (0..n).map(|b| conn[a].deriv(self.t(b).conj()).neg()).collect())
            .collect();
        let adj = (0..n).map(|a| FrobeniusModel::h_adjoint(herm, &c[a])).collect();
        ChernData { conn, curv, adj }
    }

    /// Covariant derivative of an endomorphism along ∂_α for a connection
    /// with matrix A: X(E) + [A, E].
    pub fn cov_endo(&self, conn: &Mat, e: &Mat, v: Var) -> Mat {
        e.deriv(v).add(&conn.commutator(e))
    }

    /// (∂^D C)_{α,β} for all α, β.
    pub fn del_d_c(&self, ch: &ChernData) -> Vec<Vec<Mat>> {
        let n = self.n();
        let c = self.structure_constants();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        self.cov_endo(&ch.conn[a], &c[b], self.t(a)).sub(&self.cov_endo(&ch.conn[b], &c[a], self.t(b)))
                    })
                    .collect()
            })
            .collect()
    }

    /// R_{αβ̄} + [C_α, C†_β̄] for all α, β.
    pub fn second_tt(&self, ch: &ChernData) -> Vec<Vec<Mat>> {
        let n = self.n();
        let c = self.structure_constants();
        (0..n).map(|a| (0..n).map(|b| ch.curv[a][b].add(&c[a].commutator(&ch.adj[b]))).collect()).collect()
    }

    /// (D_α B)_{βγ} for a bilinear form with matrix B.
    pub fn cov_form(&self, conn: &Mat, b: &Mat, v: Var) -> Mat {
        b.deriv(v).sub(&conn.transpose().mul(b)).sub(&b.mul(conn))
    }

    pub fn tt_and_potential_residuals_small(
        &self,
        herm: &Hermitian,
        ch: &ChernData,
        k: &RealStructure,
        pot: Option<&PotentialEndo>,
        cv: Option<&CvData>,
    ) -> ResidualMap {
        let n = self.n();
        let c = self.structure_constants();
        let eu = self.euler_endomorphisms();
        let mut out = ResidualMap::new();
        let first = self.del_d_c(ch);
        let second = self.second_tt(ch);
        out.insert("first_tt".into(), join_all(first.iter().flatten()));
        out.insert("second_tt".into(), join_all(second.iter().flatten()));
        let eta = self.eta_mat();
        let mut de = Measure::empty();
        let mut dg = Measure::empty();
        for a in 0..n {
            de = de.join(Measure::of_mat(&self.cov_form(&ch.conn[a], &eta, self.t(a))));
            dg = dg.join(Measure::of_mat(&self.cov_form(&ch.conn[a], &herm.g, self.t(a))));
        }
        out.insert("D_eta".into(), de);
        out.insert("D_g".into(), dg);
        out.insert("k_involution".into(), herm.involution);
        out.insert("h_hermitian".into(), herm.hermitian);
        if let Some(p) = pot {
            let a_dag = FrobeniusModel::h_adjoint(herm, &p.a);
            let mut m3a = Measure::empty();
            let mut m3b = Measure::empty();
            for a in 0..n {
                m3a = m3a.join(Measure::of_mat(&self.cov_endo(&ch.conn[a], &p.a, self.t(a)).sub(&c[a])));
                m3b = m3b.join(Measure::of_mat(&ch.conn[a].add(&a_dag.commutator(&c[a]))));
            }
            out.insert("potential_3a".into(), m3a);
            out.insert("potential_3b".into(), m3b);
            let x = eu.rinf.add(&a_dag.commutator(&eu.r0));
            out.insert("potential_3c".into(), Measure::of_mat(&x.sub(&FrobeniusModel::h_adjoint(herm, &x))));
            out.insert("potential_self_adjoint".into(), Measure::of_mat(&p.a.sub(&self.eta_adjoint(&p.a))));
        }
        if let Some(cvd) = cv {
            let kuk = k.k.mul(&cvd.u.conj()).mul(&k.k.conj());
            let (mut i1, mut i2, mut i3) = (Measure::empty(), Measure::empty(), Measure::empty());
            for a in 0..n {
                i1 = i1.join(Measure::of_mat(&c[a].commutator(&cvd.u)));
                let du = self.cov_endo(&ch.conn[a], &cvd.u, self.t(a));
                i2 = i2.join(Measure::of_mat(&du.add(&c[a].commutator(&cvd.q)).sub(&c[a])));
                let dq = self.cov_endo(&ch.conn[a], &cvd.q, self.t(a));
                i3 = i3.join(Measure::of_mat(&dq.sub(&c[a].commutator(&kuk))));
            }
            out.insert("cv_i".into(), i1);
            out.insert("cv_ii_U".into(), i2);
            out.insert("cv_ii_Q".into(), i3);
            let gq = herm.g.clone();
            let g_adj = herm.g.inverse().map(|gi| gi.mul(&cvd.q.transpose()).mul(&gq));
            out.insert("cv_iii_h".into(), Measure::of_mat(&cvd.q.sub(&FrobeniusModel::h_adjoint(herm, &cvd.q))));
            if let Ok(ga) = g_adj {
                out.insert("cv_iii_g".into(), Measure::of_mat(&cvd.q.add(&ga)));
            }
        }
        out
    }
}

pub fn join_all<'a>(it: impl IntoIterator<Item = &'a Mat>) -> Measure {
    it.into_iter().fold(Measure::empty(), |m, x| m.join(Measure::of_mat(x)))
}
