//! Serialized dumps of lifted objects.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::big::BigContext;
use crate::config::{Normalization, Truncation};
use crate::matrix::Mat;
use crate::report::SCHEMA_VERSION;
use crate::series::{Series, SeriesJson};

pub const TARGETS: [&str; 8] = ["u", "M", "t_frame", "eta_hat", "h_hat", "higgs_hat", "chern_hat", "curvature_hat"];

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("unknown target {0:?}; expected one of {TARGETS:?}")]
    UnknownTarget(String),
    #[error("target {0} needs a real structure")]
    NeedsRealStructure(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftDump {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub model: String,
    pub target: String,
    pub normalization: Normalization,
    pub truncation: Truncation,
    /// Index ranges of `components`, row-major. Frame indices run over
    /// (level, flavor) with level major.
    pub shape: Vec<usize>,
    pub index_names: Vec<String>,
    pub components: Vec<SeriesJson>,
    /// Same components, as text.
    pub display: Vec<String>,
}

fn mat_entries(m: &Mat) -> Vec<Series> {
    let mut v = Vec::with_capacity(m.rows * m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            v.push(m.get(i, j).clone());
        }
    }
    v
}

/// Rescale t_k → k!·t_k in both sectors.
pub fn dw_rescale(s: &Series) -> Series {
    let r = s.ring().clone();
    let fact = |k: usize| (1..=k as i64).product::<i64>();
    s.substitute(&|v| if v.level >= 2 { Some(Series::var(&r, v).scale_int(fact(v.level))) } else { None }, false)
        .expect("linear substitution")
}

pub fn lift_dump(ctx: &BigContext, model: &str, target: &str, trunc: Truncation, norm: Normalization) -> Result<LiftDump, DumpError> {
    let dim = ctx.dim();
    let n = ctx.n();
    let need_k = || DumpError::NeedsRealStructure(target.to_string());
    let (shape, names, comps): (Vec<usize>, Vec<&str>, Vec<Series>) = match target {
        "u" => (vec![n], vec!["alpha"], ctx.u.clone()),
        "M" => (vec![n, n], vec!["sigma", "alpha"], mat_entries(&ctx.m)),
        "t_frame" => {
            // [c][I]: coordinate component c of the frame vector e_I.
            let m = Mat::from_fn(dim, dim, |c, i| ctx.tframe[i][c].clone());
            (vec![dim, dim], vec!["coordinate", "frame"], mat_entries(&m))
        }
        "eta_hat" => (vec![dim, dim], vec!["frame", "frame"], mat_entries(&ctx.eta_hat())),
        "h_hat" => (vec![dim, dim], vec!["frame", "frame"], mat_entries(&ctx.h_hat().ok_or_else(need_k)?)),
        "higgs_hat" => {
            let c_hat = ctx.c_hat_small();
            let comps = (0..dim).flat_map(|j| mat_entries(&ctx.higgs_hat_dir(j, &c_hat))).collect();
            (vec![dim, dim, dim], vec!["direction", "row", "col"], comps)
        }
        "chern_hat" | "curvature_hat" => {
            let hd = ctx.herm.as_ref().ok_or_else(need_k)?;
            let a_lift: Vec<Mat> = hd.chern.conn.iter().map(|a| ctx.lift_mat(a)).collect();
            let a: Vec<Mat> = (0..dim).map(|j| ctx.chern_hat_dir(j, &a_lift)).collect();
            if target == "chern_hat" {
                (vec![dim, dim, dim], vec!["direction", "row", "col"], a.iter().flat_map(mat_entries).collect())
            } else {
                // R_{J K̄} = −ē_K(Â_J)
                let mut comps = Vec::new();
                for aj in &a {
                    for k in 0..dim {
                        let wb: Vec<Series> = ctx.tframe[k].iter().map(|s| s.conj()).collect();
                        comps.extend(mat_entries(&ctx.deriv_mat_along_bar(aj, &wb).neg()));
                    }
                }
                (vec![dim, dim, dim, dim], vec!["direction", "conj direction", "row", "col"], comps)
            }
        }
        _ => return Err(DumpError::UnknownTarget(target.to_string())),
    };
    let comps = match norm {
        Normalization::Liu => comps,
        Normalization::DwRescaled => comps.iter().map(dw_rescale).collect(),
    };
    Ok(LiftDump {
        schema_version: SCHEMA_VERSION,
        tool: "ttlift".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        model: model.to_string(),
        target: target.to_string(),
        normalization: norm,
        truncation: trunc,
        shape,
        index_names: names.into_iter().map(String::from).collect(),
        components: comps.iter().map(|s| s.to_json()).collect(),
        display: comps.iter().map(|s| s.to_string()).collect(),
    })
}
