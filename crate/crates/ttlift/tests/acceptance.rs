//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Everything is exact rational arithmetic, so the pinned tolerance is 0.
//! Criterion 7 contains one statement that does not hold for the gravity1d
//! real structure (D̂η̂ = 0 needs Dη = 0 on the small space, and Dη ≠ 0
//! there). That line is printed as FAIL and pinned as such; the rest of the
//! criterion is asserted.

mod common;

use std::io::Write;

use ttlift::builtins;
use ttlift::matrix::Mat;
use ttlift::report::{ReportFile, ResidualReport, Status};
use ttlift::series::{Series, Var};
use ttlift::verify::{run_all, VerifyOptions};

use common::poly::{gravity_u, to_poly};

const TOL: f64 = 0.0;
const SEED: u64 = 7;
const MODELS: [&str; 4] = ["gravity1d", "a2", "rand2d", "a3"];
const WITH_K: [&str; 3] = ["gravity1d", "a2", "rand2d"];

struct Run {
    name: &'static str,
    report: ResidualReport,
}

struct Line {
    n: usize,
    what: &'static str,
    ok: bool,
    detail: String,
}

fn run(name: &'static str) -> Run {
    let ctx = common::context(name, None, SEED);
    Run { name, report: run_all(&ctx, &VerifyOptions::new(SEED, TOL)) }
}

fn runs<'a>(all: &'a [Run], names: &[&str]) -> impl Iterator<Item = &'a Run> + 'a {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    all.iter().filter(move |r| names.iter().any(|n| n == r.name))
}

/// Worst residual over ids; `Err` names the first id that failed or was
/// not computed.
fn worst(rs: &[&Run], ids: &[&str], min_samples: usize) -> Result<f64, String> {
    let mut m: f64 = 0.0;
    for r in rs {
        for id in ids {
            let e = r.report.get(id).ok_or_else(|| format!("{}: {id} missing", r.name))?;
            if e.status != Status::Pass || e.max_residual > TOL {
                return Err(format!("{}: {id} = {:e} ({:?})", r.name, e.max_residual, e.status));
            }
            if e.samples < min_samples {
                return Err(format!("{}: {id} has {} samples", r.name, e.samples));
            }
            m = m.max(e.max_residual);
        }
    }
    Ok(m)
}

fn line(n: usize, what: &'static str, r: Result<f64, String>) -> Line {
    match r {
        Ok(m) => Line { n, what, ok: true, detail: format!("max residual {m:e}") },
        Err(d) => Line { n, what, ok: false, detail: d },
    }
}

fn c1(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &MODELS).collect();
    let mut r = worst(&rs, &["metric.eta_hat"], 1);
    // Direct look at the blocks, not through the report.
    for name in MODELS {
        let ctx = common::context(name, None, SEED);
        let eh = ctx.eta_hat();
        for i in 0..ctx.dim() {
            for j in 0..ctx.dim() {
                let want = if ctx.level_of(i) == ctx.level_of(j) {
                    ctx.model.eta[ctx.flavor_of(i)][ctx.flavor_of(j)].clone()
                } else {
                    ttlift::scalar::Scalar::zero(ctx.ring.mode)
                };
                let got = eh.get(i, j);
                if !got.is_exact() || !(got - &Series::constant(&ctx.ring, want)).is_zero() {
                    r = Err(format!("{name}: eta_hat[{i}][{j}] = {got}"));
                }
            }
        }
    }
    line(1, "eta_hat lift law", r)
}

fn c2(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &MODELS).collect();
    line(2, "TRR T(W1)∘W2 = 0, 20 random W2", worst(&rs, &["frame.trr[memo]", "frame.trr[derivative]"], 20))
}

fn c3(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &MODELS).collect();
    line(3, "lift kill rule and conjugate", worst(&rs, &["lift.kill_rule", "lift.kill_rule_conj"], 10))
}

fn c4(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &WITH_K).collect();
    let ids = ["metric.chern_det", "metric.chern_closed_vs_def", "metric.curvature_transport", "metric.curvature_descendant"];
    line(4, "Chern closed form and curvature transport", worst(&rs, &ids, 1))
}

const SAITO_HAT: [&str; 12] = [
    "saito_hat.R_nabla_hat",
    "saito_hat.nabla_hat_difference",
    "saito_hat.d_nabla_C[primary,primary]",
    "saito_hat.d_nabla_C[primary,descendant]",
    "saito_hat.d_nabla_C[descendant,descendant]",
    "saito_hat.C_wedge_C",
    "saito_hat.C_star",
    "saito_hat.nabla_R0[minus]",
    "saito_hat.R0_C_commute",
    "saito_hat.R0_star",
    "saito_hat.nabla_Rinf",
    "metric.eta_hat_parallel",
];

fn c5(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &["gravity1d", "a2"]).collect();
    // N = 1 has no index pairs for some of these, so no sample floor.
    let mut l = line(5, "lifted Saito axioms", worst(&rs, &SAITO_HAT, 0));
    for r in &rs {
        let w = r.report.get("saito_hat.weight").expect("weight entry");
        l.detail.push_str(&format!("; {} weight residual {:e} (reported)", r.name, w.max_residual));
    }
    l
}

fn c6(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &["a2"]).collect();
    let ids = [
        "ttstar_hat.first_tt_transport",
        "ttstar_hat.first_tt_descendant",
        "ttstar_hat.second_tt_transport",
        "ttstar_hat.second_tt_descendant",
        "ttstar_hat.adjoint_transport",
        "ttstar_hat.adjoint_descendant",
    ];
    let mut r = worst(&rs, &ids, 1);
    // The real structure must really be generic.
    let g = rs[0].report.get("small.tt.second_tt").expect("entry").max_residual;
    if g == 0.0 {
        r = Err("a2 real structure happens to be tt*".into());
    }
    line(6, "unconditional tt* transport on a2 (generic K)", r)
}

const LAX: [&str; 10] = [
    "lax.small.lambda2",
    "lax.small.lambda1",
    "lax.small.lambda0",
    "lax.small.lambda-1",
    "lax.small.lambda-2",
    "lax.big.lambda2",
    "lax.big.lambda1",
    "lax.big.lambda0",
    "lax.big.lambda-1",
    "lax.big.lambda-2",
];

/// Returns the line plus whether the attainable part held.
fn c7(all: &[Run]) -> (Line, bool) {
    let rs: Vec<&Run> = runs(all, &["gravity1d"]).collect();
    let mut ids = vec!["small.tt.first_tt", "small.tt.second_tt", "ttstar_hat.first_tt", "ttstar_hat.second_tt"];
    ids.extend(LAX);
    let rest = worst(&rs, &ids, 1);
    let rest_ok = rest.is_ok();
    let de = rs[0].report.get("metric.D_eta_hat").expect("entry");
    let detail = match &rest {
        Ok(m) => format!(
            "tt* and all lambda coefficients {m:e}; D_eta_hat = {:e}, unattainable for this real structure (D eta != 0)",
            de.max_residual
        ),
        Err(e) => e.clone(),
    };
    let ok = rest_ok && de.max_residual <= TOL;
    (Line { n: 7, what: "harmonic chain on gravity1d", ok, detail }, rest_ok)
}

fn c8(all: &[Run]) -> Line {
    let ctx = common::context("gravity1d", common::trunc(3, 6, 3), SEED);
    let mut r: Result<f64, String> = Ok(0.0);
    if to_poly(&ctx.u[0].to_terms(), 4) != gravity_u(3, 6) || ctx.u[0].valid_degree() != Some(6) {
        r = Err("gravity1d u differs from the brute-force fixed point".into());
    }
    for name in MODELS {
        let ctx = common::context(name, None, SEED);
        for a in 0..ctx.n() {
            if ctx.u[a].restrict_small() != Series::var(&ctx.ring, Var::hol(0, a)) {
                r = Err(format!("{name}: u restricted is not t0"));
            }
        }
        if !ctx.m.map(|s| s.restrict_small()).sub(&Mat::identity(&ctx.ring, ctx.n())).is_zero() {
            r = Err(format!("{name}: M restricted is not Id"));
        }
    }
    if r.is_ok() {
        let rs: Vec<&Run> = runs(all, &MODELS).collect();
        r = worst(&rs, &["lift.u_restriction", "lift.m_restriction"], 1);
    }
    line(8, "u-map oracle through degree 6, restrictions", r)
}

fn c9(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &MODELS).collect();
    line(9, "T-frame closed form and brackets", worst(&rs, &["frame.t_closed_vs_definitional", "frame.bracket_TT", "frame.bracket_T_primary"], 1))
}

fn c10(all: &[Run]) -> Line {
    let rs: Vec<&Run> = runs(all, &MODELS).collect();
    line(10, "auxiliary S_hat, diamond, degenerate pairing", worst(&rs, &["aux.s_hat_unit", "aux.diamond_eta", "aux.degenerate_pairing_T"], 1))
}

fn c11() -> Line {
    let report = || {
        let cfg = builtins::config("a2", None, SEED).expect("built-in");
        let ctx = common::context("a2", None, SEED);
        let rep = run_all(&ctx, &VerifyOptions::new(SEED, TOL));
        ReportFile::new(cfg, TOL, None, rep).to_json_string()
    };
    let (a, b) = (report(), report());
    let r = if a == b { Ok(0.0) } else { Err("reports differ".into()) };
    let mut l = line(11, "a2 seed 7 report is byte-identical", r);
    l.detail = format!("{} bytes", a.len());
    l
}

#[test]
fn acceptance() {
    let all: Vec<Run> = MODELS.iter().map(|&m| run(m)).collect();
    let (l7, c7_attainable) = c7(&all);
    let lines = vec![c1(&all), c2(&all), c3(&all), c4(&all), c5(&all), c6(&all), l7, c8(&all), c9(&all), c10(&all), c11()];
    // Straight to stderr so the lines show up without --nocapture.
    let mut err = std::io::stderr().lock();
    for l in &lines {
        let _ = writeln!(err, "criterion {:>2} {}: {} ({})", l.n, if l.ok { "PASS" } else { "FAIL" }, l.what, l.detail);
    }
    drop(err);
    for l in &lines {
        if l.n == 7 {
            assert!(c7_attainable, "criterion 7: {}", l.detail);
            assert!(!l.ok, "criterion 7 is pinned red; if D_eta_hat now vanishes, update the ledger");
        } else {
            assert!(l.ok, "criterion {}: {}", l.n, l.detail);
        }
    }
}
