//! The identity catalogue. Every check evaluates a residual on its declared
//! degree window and level band; run_all aggregates them in a fixed order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::big::BigContext;
use crate::builtins::random_mixed;
use crate::catalogue::{self, Identity, Needs, CATALOGUE};
use crate::matrix::Mat;
use crate::report::{Entry, ResidualReport, Status};
use crate::residual::Measure;
use crate::series::{Series, Var};
use crate::small::{EulerData, FrobeniusModel, ResidualMap};

pub const GROUPS: [&str; 8] = ["small", "frame", "lift", "metric", "saito_hat", "ttstar_hat", "lax", "aux"];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tol: f64,
    /// Group names or id prefixes; None runs everything.
    pub select: Option<Vec<String>>,
}

impl VerifyOptions {
    pub fn new(seed: u64, tol: f64) -> VerifyOptions {
        VerifyOptions { seed, tol, select: None }
    }
}

/// Data shared by several groups, computed once.
pub struct Derived {
    pub c_dir: Vec<Mat>,
    /// br[J][K]: T-frame components of [e_J, e_K].
    pub br: Vec<Vec<Vec<Series>>>,
    pub tframe_bar: Vec<Vec<Series>>,
    pub euler: EulerData,
    pub small_saito: ResidualMap,
    pub r0_hat: Mat,
    pub rinf_hat: Mat,
    pub herm: Option<HermDerived>,
}

pub struct HermDerived {
    pub h_hat: Mat,
    pub h_hat_inv: Mat,
    /// Connection matrices from the defining property (∂Ĥ Ĥ^{-1})ᵀ.
    pub a_def: Vec<Mat>,
    /// Closed-form transport M^σ_α lift(A_σ).
    pub a_closed: Vec<Mat>,
    /// Ĉ†_{ē_K} = conj(Ĥ^{-1} Ĉ_Kᵀ Ĥ).
    pub cdag: Vec<Mat>,
    pub small_tt: ResidualMap,
    /// ddc[J][K] = (∂^{D̂}Ĉ)_{e_J, e_K}
    pub ddc: Vec<Vec<Mat>>,
    /// sec[J][K] = R̂_{e_J ē_K} + [Ĉ_J, Ĉ†_K]
    pub sec: Vec<Vec<Mat>>,
}

struct Ck<'a> {
    ctx: &'a BigContext,
    d: &'a Derived,
    seed: u64,
    tol: f64,
    out: Vec<Entry>,
}

impl<'a> Ck<'a> {
    fn push(&mut self, id: &str, m: Measure, informational: bool, samples: usize, band: [usize; 2], note: Option<&str>) {
        let d_max = self.ctx.ring.d_max;
        let status = if m.max <= self.tol { Status::Pass } else { Status::Fail };
        self.out.push(Entry {
            id: id.to_string(),
            group: id.split('.').next().unwrap_or("").to_string(),
            status,
            informational,
            max_residual: m.max,
            degree_window: if m.count == 0 { None } else { Some(m.window.min(d_max)) },
            level_band: band,
            samples,
            seed: self.seed,
            note: note.map(|s| s.to_string()),
        });
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }

    /// Informational unless the small-phase residual `key` is zero.
    fn cond(&self, map: &ResidualMap, key: &str) -> bool {
        map.get(key).is_none_or(|m| m.max > self.tol)
    }

    fn nmax(&self) -> usize {
        self.ctx.n_max
    }
}

fn vec_diff(a: &[Series], b: &[Series]) -> Measure {
    a.iter().zip(b).fold(Measure::empty(), |m, (x, y)| m.join(Measure::diff(x, y)))
}

fn vec_measure(a: &[Series]) -> Measure {
    Measure::of_all(a)
}

fn mat_diff(a: &Mat, b: &Mat) -> Measure {
    Measure::of_mat(&a.sub(b))
}

fn comb(ctx: &BigContext, coefs: &[Series], mats: &[Mat]) -> Mat {
    let dim = ctx.dim();
    let mut acc = Mat::zeros(&ctx.ring, dim, dim);
    for (c, m) in coefs.iter().zip(mats) {
        if !c.is_exact_zero() {
            acc = acc.add(&m.scale_series(c));
        }
    }
    acc
}

/// Random holomorphic coordinate vector supported on levels ≤ top.
fn random_vector(ctx: &BigContext, rng: &mut ChaCha8Rng, top: usize) -> Vec<Series> {
    let mut v = ctx.zero_vec();
    let r = &ctx.ring;
    for l in 0..=top {
        for a in 0..ctx.n() {
            if rng.gen_bool(0.6) {
                let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let mut s = Series::int(r, c);
                if rng.gen_bool(0.5) {
                    let vl = rng.gen_range(0..=ctx.n_max);
                    let vf = rng.gen_range(0..ctx.n());
                    s = &s + &Series::var(r, Var::hol(vl, vf)).scale_int(rng.gen_range(-2..=2));
                }
                v[ctx.idx(l, a)] = s;
            }
        }
    }
    v
}

impl Derived {
    pub fn build(ctx: &BigContext) -> Derived {
        let dim = ctx.dim();
        let c_hat = ctx.c_hat_small();
        let c_dir: Vec<Mat> = (0..dim).map(|j| ctx.higgs_hat_dir(j, &c_hat)).collect();
        let br: Vec<Vec<Vec<Series>>> = (0..dim)
            .into_par_iter()
            .map(|j| (0..dim).map(|k| ctx.to_tframe(&ctx.bracket(&ctx.tframe[j], &ctx.tframe[k]))).collect())
            .collect();
        let tframe_bar = ctx.tframe.iter().map(|v| v.iter().map(|s| s.conj()).collect()).collect();
        let euler = ctx.model.euler_endomorphisms();
        let small_saito = ctx.model.saito_residuals_small();
        let r0_hat = ctx.lift_block(&euler.r0);
        let rinf_hat = ctx.block(&euler.rinf);
        let mut d = Derived { c_dir, br, tframe_bar, euler, small_saito, r0_hat, rinf_hat, herm: None };
        if let Some(hd) = &ctx.herm {
            let h_hat = ctx.lift_block(&hd.herm.h);
            let h_hat_inv = ctx.lift_block(&hd.herm.h_inv);
            let a_def: Vec<Mat> =
                (0..dim).into_par_iter().map(|j| ctx.deriv_mat_along(&h_hat, &ctx.tframe[j]).mul(&h_hat_inv).transpose()).collect();
            let a_lift: Vec<Mat> = hd.chern.conn.iter().map(|a| ctx.lift_mat(a)).collect();
            let a_closed: Vec<Mat> = (0..dim).map(|j| ctx.chern_hat_dir(j, &a_lift)).collect();
            let cdag: Vec<Mat> =
                (0..dim).into_par_iter().map(|k| h_hat_inv.mul(&d.c_dir[k].transpose()).mul(&h_hat).conj()).collect();
            let small_tt = ctx.model.tt_and_potential_residuals_small(
                &hd.herm,
                &hd.chern,
                &hd.k,
                ctx.potential.as_ref(),
                ctx.cv.as_ref(),
            );
            let ddc: Vec<Vec<Mat>> = (0..dim)
                .into_par_iter()
                .map(|j| {
                    (0..dim)
                        .map(|k| {
                            let t1 = ctx.deriv_mat_along(&d.c_dir[k], &ctx.tframe[j]).add(&a_def[j].commutator(&d.c_dir[k]));
                            let t2 = ctx.deriv_mat_along(&d.c_dir[j], &ctx.tframe[k]).add(&a_def[k].commutator(&d.c_dir[j]));
                            t1.sub(&t2).sub(&comb(ctx, &d.br[j][k], &d.c_dir))
                        })
                        .collect()
                })
                .collect();
            let sec: Vec<Vec<Mat>> = (0..dim)
                .into_par_iter()
                .map(|j| {
                    (0..dim)
                        .map(|k| {
                            let r = ctx.deriv_mat_along_bar(&a_def[j], &d.tframe_bar[k]).neg();
                            r.add(&d.c_dir[j].commutator(&cdag[k]))
                        })
                        .collect()
                })
                .collect();
            d.herm = Some(HermDerived { h_hat, h_hat_inv, a_def, a_closed, cdag, small_tt, ddc, sec });
        }
        d
    }
}

/// Run every selected identity. Groups run in parallel; the report follows
/// the catalogue order, with skipped entries where inputs are absent.
pub fn run_all(ctx: &BigContext, opts: &VerifyOptions) -> ResidualReport {
    let d = Derived::build(ctx);
    let wanted: Vec<&str> = GROUPS
        .iter()
        .copied()
        .filter(|g| match &opts.select {
            None => true,
            Some(sel) => sel.iter().any(|s| s == g || s.starts_with(&format!("{g}.")) || g.starts_with(s.as_str())),
        })
        .collect();
    let parts: Vec<Vec<Entry>> = wanted
        .par_iter()
        .map(|g| {
            let mut ck = Ck { ctx, d: &d, seed: opts.seed, tol: opts.tol, out: Vec::new() };
            match *g {
                "small" => group_small(&mut ck),
                "frame" => group_frame(&mut ck),
                "lift" => group_lift(&mut ck),
                "metric" => group_metric(&mut ck),
                "saito_hat" => group_saito_hat(&mut ck),
                "ttstar_hat" => group_ttstar_hat(&mut ck),
                "lax" => group_lax(&mut ck),
                _ => group_aux(&mut ck),
            }
            ck.out
        })
        .collect();
    let mut computed: std::collections::HashMap<String, Entry> =
        parts.into_iter().flatten().map(|e| (e.id.clone(), e)).collect();
    let mut entries = Vec::new();
    for ident in CATALOGUE {
        let selected = match &opts.select {
            None => true,
            Some(sel) => sel.iter().any(|s| ident.id.starts_with(s.as_str())),
        };
        if !selected {
            continue;
        }
        match computed.remove(ident.id) {
            Some(e) => entries.push(e),
            None => entries.push(skipped(ctx, ident, opts.seed)),
        }
    }
    debug_assert!(
        computed.keys().all(|k| catalogue::find(k).is_some()),
        "ids missing from the catalogue: {:?}",
        computed.keys().collect::<Vec<_>>()
    );
    ResidualReport { entries }
}

fn skipped(ctx: &BigContext, ident: &Identity, seed: u64) -> Entry {
    let why = match ident.needs {
        Needs::RealStructure | Needs::RealDescendants if ctx.herm.is_none() => "no real structure",
        Needs::Potential if ctx.herm.is_none() || ctx.potential.is_none() => "no potential A",
        Needs::Cv if ctx.herm.is_none() || ctx.cv.is_none() => "no CV data",
        Needs::Level2 => "needs n_max >= 2",
        Needs::Descendants | Needs::RealDescendants => "needs n_max >= 1",
        _ => "not applicable to this model",
    };
    Entry {
        id: ident.id.to_string(),
        group: ident.id.split('.').next().unwrap_or("").to_string(),
        status: Status::Skipped,
        informational: false,
        max_residual: 0.0,
        degree_window: None,
        level_band: [0, 0],
        samples: 0,
        seed,
        note: Some(why.to_string()),
    }
}

/// True when `s` names a group or prefixes at least one catalogue id.
pub fn known_selector(s: &str) -> bool {
    !s.is_empty() && CATALOGUE.iter().any(|i| i.id.starts_with(s))
}

fn group_small(ck: &mut Ck) {
    let ctx = ck.ctx;
    let n = [0, 0];
    ck.push("small.wdvv", ctx.model.wdvv_residual(), false, 1, n, None);
    let hyp = ["nabla_R0[plus]", "nabla_R0[minus]", "R0_C_commute", "R0_star", "nabla_Rinf", "weight", "lie_eta[minus]", "lie_eta[plus]"];
    let saito = ck.d.small_saito.clone();
    for (k, m) in &saito {
        let info = hyp.contains(&k.as_str());
        let note = match k.as_str() {
            "nabla_R0[plus]" => Some("convention: nabla R0 + C = [C, Rinf]"),
            "nabla_R0[minus]" => Some("convention: nabla R0 - C + [C, Rinf] = 0 with R0 = C_E, Rinf = nabla E"),
            "weight" => Some("Rinf* + Rinf + w Id with w = weight_d; reported only"),
            "lie_eta[minus]" => Some("|L_E eta + d eta|"),
            "lie_eta[plus]" => Some("|L_E eta - d eta|"),
            _ => None,
        };
        ck.push(&format!("small.saito.{k}"), *m, info, 1, n, note);
    }
    match &ck.d.herm {
        Some(h) => {
            let tt = h.small_tt.clone();
            for (k, m) in &tt {
                let gate = matches!(k.as_str(), "k_involution" | "h_hermitian");
                ck.push(&format!("small.tt.{k}"), *m, !gate, 1, n, None);
            }
        }
        None => {}
    }
}

fn group_frame(ck: &mut Ck) {
    let ctx = ck.ctx;
    let nm = ck.nmax();
    let dim = ctx.dim();
    let n = ctx.n();
    let s = ctx.string_field();
    let definitional = |w: &[Series]| -> Vec<Series> {
        let tp = ctx.tau_plus(w).expect("level headroom");
        let p = ctx.quantum_product(&s, &tp);
        tp.iter().zip(&p).map(|(a, b)| a - b).collect()
    };
    // Closed-form T-frame against τ_+ W − S∘τ_+ W.
    let mut m = Measure::empty();
    let mut count = 0;
    if nm >= 1 {
        for i in 0..dim {
            if ctx.level_of(i) < nm {
                m = m.join(vec_diff(&ctx.tframe[i + n], &definitional(&ctx.tframe[i])));
                count += 1;
            }
        }
        let mut rng = ck.rng(1);
        for _ in 0..5 {
            let w = random_vector(ctx, &mut rng, nm - 1);
            m = m.join(vec_diff(&ctx.apply_t(&w).expect("headroom"), &definitional(&w)));
            count += 1;
        }
        ck.push("frame.t_closed_vs_definitional", m, false, count, [0, nm], None);
    }
    // Brackets of the T-frame.
    let (mut tt, mut tg) = (Measure::empty(), Measure::empty());
    let (mut ctt, mut ctg) = (0, 0);
    let prod = |a: usize, b: usize| ctx.quantum_product(&ctx.basis(ctx.idx(0, a)), &ctx.basis(ctx.idx(0, b)));
    for j in 0..dim {
        let lj = ctx.level_of(j);
        if lj == 0 {
            continue;
        }
        for k in 0..dim {
            let br = ctx.bracket(&ctx.tframe[j], &ctx.tframe[k]);
            if ctx.level_of(k) >= 1 {
                tt = tt.join(vec_measure(&br));
                ctt += 1;
            } else {
                let p = prod(ctx.flavor_of(j), ctx.flavor_of(k));
                let mut target = ctx.zero_vec();
                for sg in 0..n {
                    target[ctx.idx(lj - 1, sg)] = p[ctx.idx(0, sg)].clone();
                }
                tg = tg.join(vec_diff(&br, &ctx.to_coord(&target)));
                ctg += 1;
            }
        }
    }
    ck.push("frame.bracket_TT", tt, false, ctt, [1, nm], None);
    ck.push("frame.bracket_T_primary", tg, false, ctg, [0, nm], None);
    // TRR: T(W1)∘W2 = 0 via both correlator routes.
    let mut rng = ck.rng(2);
    let w2s: Vec<Vec<Series>> = (0..20).map(|_| random_vector(ctx, &mut rng, nm)).collect();
    let (mut md, mut mm) = (Measure::empty(), Measure::empty());
    let mut c = 0;
    for j in 0..dim {
        if ctx.level_of(j) == 0 {
            continue;
        }
        for w2 in &w2s {
            md = md.join(vec_measure(&ctx.quantum_product_by_derivative(&ctx.tframe[j], w2)));
            mm = mm.join(vec_measure(&ctx.quantum_product(&ctx.tframe[j], w2)));
            c += 1;
        }
    }
    ck.push("frame.trr[derivative]", md, false, c, [0, nm], Some("correlators as derivatives of lifted two-point functions"));
    ck.push("frame.trr[memo]", mm, false, c, [0, nm], Some("correlators reduced by TRR on the highest slot"));
    // The two product routes agree on random pairs.
    let mut pr = Measure::empty();
    for k in 0..6 {
        let w1 = random_vector(ctx, &mut rng, nm);
        pr = pr.join(vec_diff(&ctx.quantum_product(&w1, &w2s[k]), &ctx.quantum_product_by_derivative(&w1, &w2s[k])));
    }
    ck.push("frame.product_routes", pr, false, 6, [0, nm], None);
    let mut su = Measure::empty();
    for a in 0..n {
        let g = ctx.basis(ctx.idx(0, a));
        su = su.join(vec_diff(&ctx.quantum_product(&s, &g), &g));
        su = su.join(vec_diff(&ctx.quantum_product_by_derivative(&s, &g), &g));
    }
    ck.push("frame.string_unit", su, false, 2 * n, [0, nm], None);
    let mut sym = Measure::empty();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let x = ctx.three_point_base(a, b, g);
                sym = sym.join(Measure::diff(&x, &ctx.three_point_base(g, b, a)));
                sym = sym.join(Measure::diff(&x, &ctx.three_point_base(b, a, g)));
            }
        }
    }
    ck.push("frame.three_point_symmetry", sym, false, n * n * n, [0, 0], None);
    let mut tu = Measure::empty();
    for a in 0..n {
        let mut ua = ctx.zero();
        for b in 0..n {
            ua = &ua + &ctx.u[b].scale(&ctx.model.eta[a][b]);
        }
        tu = tu.join(Measure::diff(&ctx.two_point_lift(0, ctx.model.unit, a).expect("i=0"), &ua));
    }
    ck.push("frame.two_point_u", tu, false, n, [0, 0], None);
    let c_hat = ctx.c_hat_small();
    let mut hp = Measure::empty();
    for a in 0..n {
        for b in 0..n {
            let ch = ctx.higgs_hat_dir(ctx.idx(0, a), &c_hat).apply(&ctx.basis(ctx.idx(0, b)));
            hp = hp.join(vec_diff(&ctx.to_coord(&ch), &prod(a, b)));
        }
    }
    ck.push("frame.higgs_vs_product", hp, false, n * n, [0, 0], None);
}

fn group_lift(ck: &mut Ck) {
    let ctx = ck.ctx;
    let nm = ck.nmax();
    let n = ctx.n();
    let dim = ctx.dim();
    let r = &ctx.ring;
    let mut m = Measure::empty();
    for a in 0..n {
        m = m.join(Measure::diff(&ctx.u[a].restrict_small(), &Series::var(r, Var::hol(0, a))));
    }
    ck.push("lift.u_restriction", m, false, n, [0, nm], None);
    ck.push("lift.m_restriction", mat_diff(&ctx.m.map(|s| s.restrict_small()), &Mat::identity(r, n)), false, n * n, [0, nm], None);
    let mut mc = Measure::empty();
    for g in 0..n {
        for a in 0..n {
            let mut acc = ctx.zero();
            for s in 0..n {
                let e = &ctx.model.eta_inv[g][s];
                if !e.is_zero() {
                    acc = &acc + &ctx.three_point_by_derivative(ctx.idx(0, ctx.model.unit), ctx.idx(0, a), s).scale(e);
                }
            }
            mc = mc.join(Measure::diff(ctx.m.get(g, a), &acc));
        }
    }
    ck.push("lift.m_correlator", mc, false, n * n, [0, 0], None);
    let mut rng = ck.rng(3);
    let fs: Vec<Series> = (0..10).map(|_| random_mixed(r, &mut rng, 1, 3.min(r.d_max), true)).collect();
    let lifted: Vec<Series> = fs.iter().map(|f| ctx.lift_function(f).expect("level 0")).collect();
    let (mut rm, mut cc) = (Measure::empty(), Measure::empty());
    for i in 0..fs.len() {
        let j = (i + 1) % fs.len();
        let lp = ctx.lift_function(&(&fs[i] * &fs[j])).expect("level 0");
        rm = rm.join(Measure::diff(&lp, &(&lifted[i] * &lifted[j])));
        cc = cc.join(Measure::diff(&ctx.lift_function(&fs[i].conj()).expect("level 0"), &lifted[i].conj()));
    }
    ck.push("lift.ring_map", rm, false, fs.len(), [0, nm], None);
    ck.push("lift.conj_commutes", cc, false, fs.len(), [0, nm], None);
    // Kill rule along Im T, plus random T(W).
    let mut dirs: Vec<Vec<Series>> = (0..dim).filter(|&i| ctx.level_of(i) >= 1).map(|i| ctx.tframe[i].clone()).collect();
    if nm >= 1 {
        for _ in 0..3 {
            let w = random_vector(ctx, &mut rng, nm - 1);
            dirs.push(ctx.apply_t(&w).expect("headroom"));
        }
    }
    let (mut kr, mut krc) = (Measure::empty(), Measure::empty());
    for d in &dirs {
        let db: Vec<Series> = d.iter().map(|s| s.conj()).collect();
        for f in &lifted {
            kr = kr.join(Measure::of(&ctx.deriv_along(f, d)));
            krc = krc.join(Measure::of(&ctx.deriv_along_bar(f, &db)));
        }
    }
    if nm >= 1 {
        ck.push("lift.kill_rule", kr, false, dirs.len() * lifted.len(), [1, nm], None);
        ck.push("lift.kill_rule_conj", krc, false, dirs.len() * lifted.len(), [1, nm], None);
    }
    let mut dn = Measure::empty();
    for (f, fh) in fs.iter().zip(&lifted) {
        for a in 0..n {
            let lhs = fh.deriv(Var::hol(0, a));
            let mut rhs = ctx.zero();
            for b in 0..n {
                rhs = &rhs + &(&ctx.lift_function(&f.deriv(Var::hol(0, b))).expect("level 0") * ctx.m.get(b, a));
            }
            dn = dn.join(Measure::diff(&lhs, &rhs));
        }
    }
    ck.push("lift.deriv_new", dn, false, fs.len() * n, [0, 0], None);
    // Derivatives of M along Im T.
    if nm >= 1 {
        let (mut q1a, mut q1b, mut q2, mut sy) = (Measure::empty(), Measure::empty(), Measure::empty(), Measure::empty());
        for a in 0..n {
            for b in 0..n {
                let p = ctx.quantum_product(&ctx.basis(ctx.idx(0, a)), &ctx.basis(ctx.idx(0, b)));
                for s in 0..n {
                    let lhs = ctx.deriv_along(ctx.m.get(s, a), &ctx.tframe[ctx.idx(1, b)]);
                    let mid = ctx.deriv_along(&ctx.u[s], &p);
                    let mut rhs = ctx.zero();
                    for mu in 0..n {
                        let e = &ctx.model.eta_inv[s][mu];
                        if !e.is_zero() {
                            let x = ctx.correlator3(&ctx.basis(ctx.idx(0, ctx.model.unit)), &ctx.basis(ctx.idx(0, mu)), &p);
                            rhs = &rhs + &x.scale(e);
                        }
                    }
                    q1a = q1a.join(Measure::diff(&lhs, &mid));
                    q1b = q1b.join(Measure::diff(&mid, &rhs));
                    let other = ctx.deriv_along(ctx.m.get(s, b), &ctx.tframe[ctx.idx(1, a)]);
                    sy = sy.join(Measure::diff(&lhs, &other));
                    for q in 2..=nm {
                        q2 = q2.join(Measure::of(&ctx.deriv_along(ctx.m.get(s, a), &ctx.tframe[ctx.idx(q, b)])));
                    }
                }
            }
        }
        ck.push("lift.m_derivative_q1[vector]", q1a, false, n * n * n, [0, 1], Some("T(tau_0b)(M^s_a) = (a o b)(u^s)"));
        ck.push("lift.m_derivative_q1[correlator]", q1b, false, n * n * n, [0, 1], Some("(a o b)(u^s) = eta^{s mu} <<tau_0,1 tau_0,mu (a o b)>>"));
        ck.push("lift.m_derivative_symmetry", sy, false, n * n * n, [0, 1], None);
        if nm >= 2 {
            ck.push("lift.m_derivative_q2", q2, false, n * n * n * (nm - 1), [2, nm], None);
        }
    }
    // [A, B]^ = [Â, B̂]
    let mut tc = Measure::empty();
    for _ in 0..3 {
        let a = Mat::from_fn(n, n, |_, _| random_mixed(r, &mut rng, 0, 2, true));
        let b = Mat::from_fn(n, n, |_, _| random_mixed(r, &mut rng, 0, 2, true));
        let lhs = ctx.lift_block(&a.commutator(&b));
        let rhs = ctx.lift_block(&a).commutator(&ctx.lift_block(&b));
        tc = tc.join(mat_diff(&lhs, &rhs));
    }
    ck.push("lift.tensor_commutator", tc, false, 3, [0, nm], None);
}

/// η̂(e_I, e_K) by correlator sums, for all T-frame pairs.
fn eta_hat_correlators(ctx: &BigContext) -> Vec<Vec<Series>> {
    let dim = ctx.dim();
    (0..dim)
        .into_par_iter()
        .map(|i| (0..dim).map(|k| ctx.eta_hat_by_correlators(&ctx.tframe[i], &ctx.tframe[k])).collect())
        .collect()
}

fn group_metric(ck: &mut Ck) {
    let ctx = ck.ctx;
    let nm = ck.nmax();
    let dim = ctx.dim();
    let eta_hat = ctx.eta_hat();
    let corr = eta_hat_correlators(ctx);
    let mut m = Measure::empty();
    for i in 0..dim {
        for k in 0..dim {
            m = m.join(Measure::diff(&corr[i][k], eta_hat.get(i, k)));
        }
    }
    ck.push("metric.eta_hat", m, false, dim * dim, [0, nm], Some("Liu's metric from correlators against the block lift"));
    let mut dm = Measure::empty();
    for j in 0..dim {
        for row in &corr {
            for x in row {
                dm = dm.join(Measure::of(&ctx.deriv_along(x, &ctx.tframe[j])));
            }
        }
    }
    ck.push("metric.eta_hat_parallel", dm, false, dim * dim * dim, [0, nm], None);
    let (Some(hd), Some(hs)) = (&ck.d.herm, &ctx.herm) else {
        return;
    };
    ck.push("metric.h_hat_hermitian", mat_diff(&hd.h_hat, &hd.h_hat.conj().transpose()), false, 1, [0, nm], None);
    let mut cd = Measure::empty();
    let mut cv = Measure::empty();
    for j in 0..dim {
        let lhs = ctx.deriv_mat_along(&hd.h_hat, &ctx.tframe[j]);
        cd = cd.join(mat_diff(&lhs, &hd.a_closed[j].transpose().mul(&hd.h_hat)));
        cv = cv.join(mat_diff(&hd.a_def[j], &hd.a_closed[j]));
    }
    ck.push("metric.chern_det", cd, false, dim, [0, nm], Some("e_J h(e_I, e_K) = h(D e_I, e_K) with the closed-form D"));
    ck.push("metric.chern_closed_vs_def", cv, false, dim, [0, nm], None);
    let curv_lift: Vec<Vec<Mat>> = hs.chern.curv.iter().map(|row| row.iter().map(|x| ctx.lift_mat(x)).collect()).collect();
    let (mut ct, mut cz) = (Measure::empty(), Measure::empty());
    let (mut nt, mut nz) = (0, 0);
    for j in 0..dim {
        for k in 0..dim {
            let r = ctx.deriv_mat_along_bar(&hd.a_def[j], &ck.d.tframe_bar[k]).neg();
            if ctx.level_of(j) == 0 && ctx.level_of(k) == 0 {
                ct = ct.join(mat_diff(&r, &ctx.transport_mixed(j, k, &curv_lift)));
                nt += 1;
            } else {
                cz = cz.join(Measure::of_mat(&r));
                nz += 1;
            }
        }
    }
    ck.push("metric.curvature_transport", ct, false, nt, [0, 0], None);
    if nm >= 1 {
        ck.push("metric.curvature_descendant", cz, false, nz, [0, nm], None);
    }
    let g_hat = ctx.lift_block(&hs.herm.g);
    let cov_form = |b: &Mat, j: usize| -> Mat {
        ctx.deriv_mat_along(b, &ctx.tframe[j]).sub(&hd.a_def[j].transpose().mul(b)).sub(&b.mul(&hd.a_def[j]))
    };
    let model = &ctx.model;
    let eta = model.eta_mat();
    let d_eta_small: Vec<Mat> = (0..ctx.n()).map(|s| ctx.lift_mat(&model.cov_form(&hs.chern.conn[s], &eta, model.t(s)))).collect();
    let d_g_small: Vec<Mat> = (0..ctx.n()).map(|s| ctx.lift_mat(&model.cov_form(&hs.chern.conn[s], &hs.herm.g, model.t(s)))).collect();
    let (mut i1, mut i2, mut de, mut dg, mut gt) = (Measure::empty(), Measure::empty(), Measure::empty(), Measure::empty(), Measure::empty());
    for j in 0..dim {
        let x = cov_form(&eta_hat, j);
        let y = cov_form(&g_hat, j);
        de = de.join(Measure::of_mat(&x));
        dg = dg.join(Measure::of_mat(&y));
        if ctx.level_of(j) >= 1 {
            i1 = i1.join(Measure::of_mat(&x));
        } else {
            i2 = i2.join(mat_diff(&x, &ctx.transport_dir(j, &d_eta_small)));
        }
        gt = gt.join(mat_diff(&y, &ctx.transport_dir(j, &d_g_small)));
    }
    if nm >= 1 {
        ck.push("metric.impreuna_1", i1, false, dim - ctx.n(), [1, nm], Some("D along Im T preserves eta_hat"));
    }
    ck.push("metric.impreuna_2", i2, false, ctx.n(), [0, nm], Some("D_{tau_0,c}(eta_hat) = M^s_c lift(D_s eta), block diagonal"));
    let tt = hd.small_tt.clone();
    ck.push("metric.D_eta_hat", de, ck.cond(&tt, "D_eta"), dim, [0, nm], Some("conditional on D eta = 0 on the small phase space"));
    ck.push("metric.D_g_hat", dg, ck.cond(&tt, "D_g"), dim, [0, nm], Some("conditional on D g = 0 on the small phase space"));
    ck.push("metric.D_g_transport", gt, false, dim, [0, nm], None);
}

fn group_saito_hat(ck: &mut Ck) {
    let ctx = ck.ctx;
    let d = ck.d;
    let nm = ck.nmax();
    let dim = ctx.dim();
    let n = ctx.n();
    // Coordinate Christoffel symbols of ∇̂ and their curvature.
    let gam: Vec<Mat> = (0..dim)
        .into_par_iter()
        .map(|b| {
            let v = ctx.coord_var(b);
            Mat::from_fn(dim, dim, |c, a| {
                let mut acc = ctx.zero();
                for i in 0..dim {
                    let x = ctx.tinv[a][i].deriv(v);
                    if !x.is_exact_zero() && !ctx.tframe[i][c].is_exact_zero() {
                        acc = &acc + &(&x * &ctx.tframe[i][c]);
                    }
                }
                acc
            })
        })
        .collect();
    let rn: Vec<Measure> = (0..dim)
        .into_par_iter()
        .map(|b| {
            let mut m = Measure::empty();
            for c in b + 1..dim {
                let r = gam[c].deriv(ctx.coord_var(b)).sub(&gam[b].deriv(ctx.coord_var(c))).add(&gam[b].commutator(&gam[c]));
                m = m.join(Measure::of_mat(&r));
            }
            m
        })
        .collect();
    let rn = rn.into_iter().fold(Measure::empty(), Measure::join);
    ck.push("saito_hat.R_nabla_hat", rn, false, dim * (dim - 1) / 2, [0, nm], Some("curvature of the connection making the T-frame parallel"));
    let prod = |a: usize, b: usize| ctx.quantum_product(&ctx.basis(ctx.idx(0, a)), &ctx.basis(ctx.idx(0, b)));
    let mut nd = Measure::empty();
    for j in 0..dim {
        for i in 0..dim {
            let diff: Vec<Series> = ctx.tframe[i].iter().map(|x| -&ctx.deriv_along(x, &ctx.tframe[j])).collect();
            let (lj, li) = (ctx.level_of(j), ctx.level_of(i));
            let mut target = ctx.zero_vec();
            if lj == 0 && li >= 1 {
                let p = prod(ctx.flavor_of(i), ctx.flavor_of(j));
                for s in 0..n {
                    target[ctx.idx(li - 1, s)] = p[ctx.idx(0, s)].clone();
                }
            }
            nd = nd.join(vec_diff(&diff, &ctx.to_coord(&target)));
        }
    }
    ck.push("saito_hat.nabla_hat_difference", nd, false, dim * dim, [0, nm], None);
    let sm = d.small_saito.clone();
    let (mut pp, mut pd, mut dd) = (Measure::empty(), Measure::empty(), Measure::empty());
    let (mut cc, mut cs) = (Measure::empty(), Measure::empty());
    let eta_hat = ctx.eta_hat();
    for j in 0..dim {
        for k in j + 1..dim {
            let x = ctx
                .deriv_mat_along(&d.c_dir[k], &ctx.tframe[j])
                .sub(&ctx.deriv_mat_along(&d.c_dir[j], &ctx.tframe[k]))
                .sub(&comb(ctx, &d.br[j][k], &d.c_dir));
            let m = Measure::of_mat(&x);
            match (ctx.level_of(j) > 0, ctx.level_of(k) > 0) {
                (false, false) => pp = pp.join(m),
                (true, true) => dd = dd.join(m),
                _ => pd = pd.join(m),
            }
            cc = cc.join(Measure::of_mat(&d.c_dir[j].commutator(&d.c_dir[k])));
        }
        cs = cs.join(mat_diff(&eta_hat.mul(&d.c_dir[j]), &d.c_dir[j].transpose().mul(&eta_hat)));
    }
    let i_dnc = ck.cond(&sm, "d_nabla_C");
    ck.push("saito_hat.d_nabla_C[primary,primary]", pp, i_dnc, n * (n - 1) / 2, [0, 0], None);
    if nm >= 1 {
        ck.push("saito_hat.d_nabla_C[primary,descendant]", pd, i_dnc, n * (dim - n), [0, nm], None);
        ck.push("saito_hat.d_nabla_C[descendant,descendant]", dd, i_dnc, (dim - n) * (dim - n - 1) / 2, [1, nm], None);
    }
    ck.push("saito_hat.C_wedge_C", cc, ck.cond(&sm, "C_wedge_C"), dim * (dim - 1) / 2, [0, nm], None);
    ck.push("saito_hat.C_star", cs, ck.cond(&sm, "C_star"), dim, [0, nm], None);
    let (mut rp, mut rmn, mut rc) = (Measure::empty(), Measure::empty(), Measure::empty());
    let mut ri = Measure::empty();
    for j in 0..dim {
        let dr0 = ctx.deriv_mat_along(&d.r0_hat, &ctx.tframe[j]);
        let br = d.c_dir[j].commutator(&d.rinf_hat);
        rp = rp.join(Measure::of_mat(&dr0.add(&d.c_dir[j]).sub(&br)));
        rmn = rmn.join(Measure::of_mat(&dr0.sub(&d.c_dir[j]).add(&br)));
        rc = rc.join(Measure::of_mat(&d.r0_hat.commutator(&d.c_dir[j])));
        ri = ri.join(Measure::of_mat(&ctx.deriv_mat_along(&d.rinf_hat, &ctx.tframe[j])));
    }
    ck.push("saito_hat.nabla_R0[minus]", rmn, ck.cond(&sm, "nabla_R0[minus]"), dim, [0, nm], Some("nabla R0 - C + [C, Rinf] = 0"));
    ck.push("saito_hat.nabla_R0[plus]", rp, ck.cond(&sm, "nabla_R0[plus]"), dim, [0, nm], Some("nabla R0 + C - [C, Rinf] = 0"));
    ck.push("saito_hat.R0_C_commute", rc, ck.cond(&sm, "R0_C_commute"), dim, [0, nm], None);
    let adj = |x: &Mat| -> Mat { ctx.block(&ctx.model.eta_inv_mat()).mul(&x.transpose()).mul(&eta_hat) };
    ck.push("saito_hat.R0_star", mat_diff(&d.r0_hat, &adj(&d.r0_hat)), ck.cond(&sm, "R0_star"), 1, [0, nm], None);
    ck.push("saito_hat.nabla_Rinf", ri, ck.cond(&sm, "nabla_Rinf"), dim, [0, nm], None);
    let w = Mat::identity(&ctx.ring, dim).scale(&ctx.model.euler.weight_d);
    ck.push(
        "saito_hat.weight",
        Measure::of_mat(&adj(&d.rinf_hat).add(&d.rinf_hat).add(&w)),
        true,
        1,
        [0, nm],
        Some("Rinf_hat* + Rinf_hat + w Id with the small weight; reported only"),
    );
}

fn group_ttstar_hat(ck: &mut Ck) {
    let ctx = ck.ctx;
    let nm = ck.nmax();
    let dim = ctx.dim();
    let n = ctx.n();
    let (Some(hd), Some(hs)) = (&ck.d.herm, &ctx.herm) else {
        return;
    };
    let model = &ctx.model;
    let c = &ctx.c;
    let ddc_small = model.del_d_c(&hs.chern);
    let sec_small = model.second_tt(&hs.chern);
    let ddc_lift: Vec<Vec<Mat>> = ddc_small.iter().map(|r| r.iter().map(|x| ctx.lift_mat(x)).collect()).collect();
    let sec_lift: Vec<Vec<Mat>> = sec_small.iter().map(|r| r.iter().map(|x| ctx.lift_mat(x)).collect()).collect();
    let (mut f1, mut f2, mut fall) = (Measure::empty(), Measure::empty(), Measure::empty());
    let (mut s1, mut s2, mut sall) = (Measure::empty(), Measure::empty(), Measure::empty());
    for j in 0..dim {
        for k in 0..dim {
            let x = &hd.ddc[j][k];
            let y = &hd.sec[j][k];
            fall = fall.join(Measure::of_mat(x));
            sall = sall.join(Measure::of_mat(y));
            if ctx.level_of(j) == 0 && ctx.level_of(k) == 0 {
                let (a, b) = (ctx.flavor_of(j), ctx.flavor_of(k));
                let mut acc = Mat::zeros(&ctx.ring, n, n);
                for nu in 0..n {
                    for s in 0..n {
                        let cf = ctx.m.get(nu, a) * ctx.m.get(s, b);
                        acc = acc.add(&ddc_lift[nu][s].scale_series(&cf));
                    }
                }
                f1 = f1.join(mat_diff(x, &ctx.block(&acc)));
                s1 = s1.join(mat_diff(y, &ctx.transport_mixed(j, k, &sec_lift)));
            } else {
                f2 = f2.join(Measure::of_mat(x));
                s2 = s2.join(Measure::of_mat(y));
            }
        }
    }
    let tt = hd.small_tt.clone();
    ck.push("ttstar_hat.first_tt_transport", f1, false, n * n, [0, nm], Some("del^D C on primaries = M M lift(del^D C)"));
    ck.push("ttstar_hat.second_tt_transport", s1, false, n * n, [0, nm], Some("R + [C, C+] on primaries = M conj(M) lift(R + [C, C+])"));
    if nm >= 1 {
        ck.push("ttstar_hat.first_tt_descendant", f2, false, dim * dim - n * n, [0, nm], None);
        ck.push("ttstar_hat.second_tt_descendant", s2, false, dim * dim - n * n, [0, nm], None);
    }
    ck.push("ttstar_hat.first_tt", fall, ck.cond(&tt, "first_tt"), dim * dim, [0, nm], Some("conditional on the small first tt* equation"));
    ck.push("ttstar_hat.second_tt", sall, ck.cond(&tt, "second_tt"), dim * dim, [0, nm], Some("conditional on the small second tt* equation"));
    let adj_lift: Vec<Mat> = hs.chern.adj.iter().map(|x| ctx.lift_mat(x)).collect();
    let (mut at, mut ad) = (Measure::empty(), Measure::empty());
    for k in 0..dim {
        let t = ctx.transport_dir_bar(k, &adj_lift);
        if ctx.level_of(k) == 0 {
            at = at.join(mat_diff(&hd.cdag[k], &t));
        } else {
            ad = ad.join(Measure::of_mat(&hd.cdag[k]));
        }
    }
    ck.push("ttstar_hat.adjoint_transport", at, false, n, [0, nm], None);
    if nm >= 1 {
        ck.push("ttstar_hat.adjoint_descendant", ad, false, dim - n, [1, nm], None);
    }
    // Potential.
    let h_adj = |x: &Mat| -> Mat { hd.h_hat_inv.mul(&x.transpose()).mul(&hd.h_hat).conj() };
    let cov = |e: &Mat, j: usize| -> Mat { ctx.deriv_mat_along(e, &ctx.tframe[j]).add(&hd.a_def[j].commutator(e)) };
    let small_cov = |e: &Mat, s: usize| -> Mat { model.cov_endo(&hs.chern.conn[s], e, model.t(s)) };
    if let Some(p) = &ctx.potential {
        let a_hat = ctx.lift_block(&p.a);
        let a_dag = h_adj(&a_hat);
        let a_dag_small = FrobeniusModel::h_adjoint(&hs.herm, &p.a);
        let tn_small: Vec<Mat> = (0..n).map(|s| ctx.lift_mat(&hs.chern.conn[s].add(&a_dag_small.commutator(&c[s])))).collect();
        let da_small: Vec<Mat> = (0..n).map(|s| ctx.lift_mat(&small_cov(&p.a, s).sub(&c[s]))).collect();
        let (mut tn, mut da, mut p3a, mut p3b) = (Measure::empty(), Measure::empty(), Measure::empty(), Measure::empty());
        for j in 0..dim {
            let x = hd.a_def[j].add(&a_dag.commutator(&ck.d.c_dir[j]));
            let y = cov(&a_hat, j).sub(&ck.d.c_dir[j]);
            tn = tn.join(mat_diff(&x, &ctx.transport_dir(j, &tn_small)));
            da = da.join(mat_diff(&y, &ctx.transport_dir(j, &da_small)));
            p3b = p3b.join(Measure::of_mat(&x));
            p3a = p3a.join(Measure::of_mat(&y));
        }
        ck.push("ttstar_hat.potential_t_n_sec", tn, false, dim, [0, nm], Some("D + [A+, C] along e_J = transport of the small expression"));
        ck.push("ttstar_hat.potential_DA", da, false, dim, [0, nm], Some("D A - C along e_J = transport of the small expression"));
        ck.push("ttstar_hat.potential_3a", p3a, ck.cond(&tt, "potential_3a"), dim, [0, nm], None);
        ck.push("ttstar_hat.potential_3b", p3b, ck.cond(&tt, "potential_3b"), dim, [0, nm], None);
        let x = ck.d.rinf_hat.add(&a_dag.commutator(&ck.d.r0_hat));
        ck.push("ttstar_hat.potential_3c", mat_diff(&x, &h_adj(&x)), ck.cond(&tt, "potential_3c"), 1, [0, nm], None);
        let eta_hat = ctx.eta_hat();
        let ea = ctx.block(&model.eta_inv_mat()).mul(&a_hat.transpose()).mul(&eta_hat);
        ck.push("ttstar_hat.potential_self_adjoint", mat_diff(&a_hat, &ea), ck.cond(&tt, "potential_self_adjoint"), 1, [0, nm], None);
        ck.push("ttstar_hat.adjoint_commutes_with_lift", mat_diff(&a_dag, &ctx.lift_block(&a_dag_small)), false, 1, [0, nm], None);
    }
    if let Some(cvd) = &ctx.cv {
        let u_hat = ctx.lift_block(&cvd.u);
        let q_hat = ctx.lift_block(&cvd.q);
        let kuk_small = hs.k.k.mul(&cvd.u.conj()).mul(&hs.k.k.conj());
        let kuk = ctx.lift_block(&kuk_small);
        let iu_small: Vec<Mat> = (0..n).map(|s| ctx.lift_mat(&small_cov(&cvd.u, s).add(&c[s].commutator(&cvd.q)).sub(&c[s]))).collect();
        let iq_small: Vec<Mat> = (0..n).map(|s| ctx.lift_mat(&small_cov(&cvd.q, s).sub(&c[s].commutator(&kuk_small)))).collect();
        let (mut ci, mut cu, mut cq, mut tu, mut tq) = (Measure::empty(), Measure::empty(), Measure::empty(), Measure::empty(), Measure::empty());
        for j in 0..dim {
            let cj = &ck.d.c_dir[j];
            ci = ci.join(Measure::of_mat(&cj.commutator(&u_hat)));
            let x = cov(&u_hat, j).add(&cj.commutator(&q_hat)).sub(cj);
            let y = cov(&q_hat, j).sub(&cj.commutator(&kuk));
            tu = tu.join(mat_diff(&x, &ctx.transport_dir(j, &iu_small)));
            tq = tq.join(mat_diff(&y, &ctx.transport_dir(j, &iq_small)));
            cu = cu.join(Measure::of_mat(&x));
            cq = cq.join(Measure::of_mat(&y));
        }
        ck.push("ttstar_hat.cv_ii_U_transport", tu, false, dim, [0, nm], None);
        ck.push("ttstar_hat.cv_ii_Q_transport", tq, false, dim, [0, nm], None);
        ck.push("ttstar_hat.cv_i", ci, ck.cond(&tt, "cv_i"), dim, [0, nm], None);
        ck.push("ttstar_hat.cv_ii_U", cu, ck.cond(&tt, "cv_ii_U"), dim, [0, nm], None);
        ck.push("ttstar_hat.cv_ii_Q", cq, ck.cond(&tt, "cv_ii_Q"), dim, [0, nm], None);
        ck.push("ttstar_hat.cv_iii_h", mat_diff(&q_hat, &h_adj(&q_hat)), ck.cond(&tt, "cv_iii_h"), 1, [0, nm], None);
        let g_hat = ctx.lift_block(&hs.herm.g);
        if let Ok(gi) = g_hat.inverse() {
            let ga = gi.mul(&q_hat.transpose()).mul(&g_hat);
            ck.push("ttstar_hat.cv_iii_g", Measure::of_mat(&q_hat.add(&ga)), ck.cond(&tt, "cv_iii_g"), 1, [0, nm], None);
        }
    }
}

fn group_lax(ck: &mut Ck) {
    let ctx = ck.ctx;
    let nm = ck.nmax();
    let dim = ctx.dim();
    let n = ctx.n();
    let (Some(hd), Some(hs)) = (&ck.d.herm, &ctx.herm) else {
        return;
    };
    let model = &ctx.model;
    let c = &ctx.c;
    let adj = &hs.chern.adj;
    let ddc = model.del_d_c(&hs.chern);
    let sec = model.second_tt(&hs.chern);
    let mut small = [Measure::empty(); 5];
    for a in 0..n {
        for b in 0..n {
            small[0] = small[0].join(Measure::of_mat(&c[a].commutator(&c[b])));
            small[1] = small[1].join(Measure::of_mat(&ddc[a][b]));
            small[2] = small[2].join(Measure::of_mat(&sec[a][b]));
            let dbar = adj[b].deriv(model.t(a).conj()).sub(&adj[a].deriv(model.t(b).conj()));
            small[3] = small[3].join(Measure::of_mat(&dbar));
            small[4] = small[4].join(Measure::of_mat(&adj[a].commutator(&adj[b])));
        }
    }
    let names = ["lambda2", "lambda1", "lambda0", "lambda-1", "lambda-2"];
    let what = ["C wedge C", "del^D C", "R + [C, C+]", "delbar^D C+", "C+ wedge C+"];
    let mut big = [Measure::empty(); 5];
    for j in 0..dim {
        for k in 0..dim {
            big[0] = big[0].join(Measure::of_mat(&ck.d.c_dir[j].commutator(&ck.d.c_dir[k])));
            big[1] = big[1].join(Measure::of_mat(&hd.ddc[j][k]));
            big[2] = big[2].join(Measure::of_mat(&hd.sec[j][k]));
            let brb: Vec<Series> = ck.d.br[j][k].iter().map(|s| s.conj()).collect();
            let dbar = ctx
                .deriv_mat_along_bar(&hd.cdag[k], &ck.d.tframe_bar[j])
                .sub(&ctx.deriv_mat_along_bar(&hd.cdag[j], &ck.d.tframe_bar[k]))
                .sub(&comb(ctx, &brb, &hd.cdag));
            big[3] = big[3].join(Measure::of_mat(&dbar));
            big[4] = big[4].join(Measure::of_mat(&hd.cdag[j].commutator(&hd.cdag[k])));
        }
    }
    for i in 0..5 {
        let id = format!("lax.small.{}", names[i]);
        ck.push(&id, small[i], i != 0, n * n, [0, 0], Some(what[i]));
    }
    for i in 0..5 {
        let id = format!("lax.big.{}", names[i]);
        ck.push(&id, big[i], small[i].max > ck.tol, dim * dim, [0, nm], Some(what[i]));
    }
}

fn group_aux(ck: &mut Ck) {
    let ctx = ck.ctx;
    let nm = ck.nmax();
    let dim = ctx.dim();
    let sh = ctx.s_hat();
    let mut su = Measure::empty();
    for i in 0..dim {
        let b = ctx.basis(i);
        su = su.join(vec_diff(&ctx.diamond(&sh, &b), &b));
    }
    ck.push("aux.s_hat_unit", su, false, dim, [0, nm], None);
    let eta_hat = ctx.eta_hat();
    let mut rng = ck.rng(5);
    let mut de = Measure::empty();
    let samples = 20;
    for _ in 0..samples {
        let (a, b, c) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
        let (x, y, z) = (ctx.basis(a), ctx.basis(b), ctx.basis(c));
        let l = ctx.form(&eta_hat, &ctx.diamond(&x, &y), &z);
        let r = ctx.form(&eta_hat, &x, &ctx.diamond(&y, &z));
        de = de.join(Measure::diff(&l, &r));
    }
    let x = random_vector(ctx, &mut rng, nm);
    let y = random_vector(ctx, &mut rng, nm);
    let z = random_vector(ctx, &mut rng, nm);
    de = de.join(Measure::diff(&ctx.form(&eta_hat, &ctx.diamond(&x, &y), &z), &ctx.form(&eta_hat, &x, &ctx.diamond(&y, &z))));
    ck.push("aux.diamond_eta", de, false, samples + 1, [0, nm], None);
    let mut dp = Measure::empty();
    let mut count = 0;
    for i in 0..dim {
        if ctx.level_of(i) == 0 {
            continue;
        }
        for v in 0..dim {
            dp = dp.join(Measure::of(&ctx.degenerate_pairing(&ctx.tframe[i], &ctx.basis(v))));
            count += 1;
        }
    }
    if nm >= 1 {
        ck.push("aux.degenerate_pairing_T", dp, false, count, [0, nm], None);
    }
    let ss = ctx.s_circ_s();
    let unit = ctx.basis(ctx.idx(0, ctx.model.unit));
    let m = ss.iter().zip(&unit).fold(Measure::empty(), |m, (a, b)| m.join(Measure::diff(&a.restrict_small(), b)));
    ck.push("aux.s_circ_s_small", m, false, 1, [0, nm], None);
}
