//! JSON model configuration. Rationals are "p/q" strings; series are term
//! lists with monomials written as [sector, level, flavor, exponent].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Mat;
use crate::scalar::{Mode, Scalar};
use crate::series::{Ring, Series, TermJson};
use crate::small::{CvData, EulerField, FrobeniusModel, ModelError, PotentialEndo, RealStructure};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {msg}", if path.is_empty() { "<root>" } else { path.as_str() })]
    Schema { path: String, msg: String },
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Io(String),
}

/// Used in float mode when the config leaves the tolerance at 0.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

fn schema(path: impl Into<String>, msg: impl Into<String>) -> ConfigError {
    ConfigError::Schema { path: path.into(), msg: msg.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Normalization {
    #[default]
    #[serde(rename = "liu")]
    Liu,
    #[serde(rename = "dw-rescaled")]
    DwRescaled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerJson {
    /// Q[α][β], E = Σ (Q^α_β t^β + r^α) ∂_α
    pub q: Vec<Vec<String>>,
    pub r: Vec<String>,
    pub weight_d: String,
}

/// Series-valued N×N matrix. `valid_degree` marks truncated input (absent
/// means every entry is an exact polynomial).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid_degree: Option<u32>,
    pub entries: Vec<Vec<Vec<TermJson>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealStructureJson {
    pub k: MatJson,
    /// Symmetric holomorphic metric paired with k; η when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MatJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvJson {
    pub u: MatJson,
    pub q: MatJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub n_max: usize,
    pub d_max: u32,
    pub i_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub eta: Vec<Vec<String>>,
    /// 1-based.
    pub unit_index: usize,
    pub prepotential: Vec<TermJson>,
    pub euler: EulerJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_structure: Option<RealStructureJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_a: Option<MatJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cv: Option<CvJson>,
    pub truncation: Truncation,
    #[serde(default)]
    pub scalar_mode: Mode,
    #[serde(default)]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// theta_constants[β][i] = θ_{β,i}(0); missing entries are 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_constants: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// Everything needed to build a big-phase context.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub model: FrobeniusModel,
    pub k: Option<RealStructure>,
    pub potential: Option<PotentialEndo>,
    pub cv: Option<CvData>,
    pub truncation: Truncation,
    pub tolerance: f64,
    pub seed: u64,
    pub normalization: Normalization,
}

impl ModelConfig {
    pub fn from_json_str(s: &str) -> Result<ModelConfig, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(s);
        serde_path_to_error::deserialize(de).map_err(|e| {
            use serde_path_to_error::Segment;
            let pointer: String = e
                .path()
                .iter()
                .map(|seg| match seg {
                    Segment::Seq { index } => format!("/{index}"),
                    Segment::Map { key } => format!("/{}", key.replace('~', "~0").replace('/', "~1")),
                    Segment::Enum { variant } => format!("/{variant}"),
                    Segment::Unknown => "/?".to_string(),
                })
                .collect();
            schema(pointer, e.inner().to_string())
        })
    }

    pub fn load(path: &std::path::Path) -> Result<ModelConfig, ConfigError> {
        let s = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        ModelConfig::from_json_str(&s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Build and validate the model objects.
    pub fn build(&self) -> Result<LoadedModel, ConfigError> {
        let t = self.truncation;
        if t.d_max == 0 {
            return Err(schema("/truncation/d_max", "must be positive"));
        }
        if t.i_max < t.n_max {
            return Err(schema("/truncation/i_max", "must be at least n_max"));
        }
        if self.n == 0 {
            return Err(schema("/N", "must be positive"));
        }
        let ring = Ring::new(self.n, t.n_max, t.d_max, self.scalar_mode).map_err(|e| schema("/truncation", e.to_string()))?;
        let mode = self.scalar_mode;
        let n = self.n;
        let eta = scalar_matrix(mode, &self.eta, n, "/eta")?;
        if self.unit_index == 0 || self.unit_index > n {
            return Err(schema("/unit_index", format!("must lie in 1..={n}")));
        }
        let f = Series::from_term_list(&ring, &self.prepotential).map_err(|e| term_error("/prepotential", &e))?;
        let q = scalar_matrix(mode, &self.euler.q, n, "/euler/q")?;
        if self.euler.r.len() != n {
            return Err(schema("/euler/r", format!("expected {n} entries")));
        }
        let r = self
            .euler
            .r
            .iter()
            .enumerate()
            .map(|(i, x)| Scalar::parse(mode, x, "0").map_err(|e| schema(format!("/euler/r/{i}"), e)))
            .collect::<Result<Vec<_>, _>>()?;
        let weight_d = Scalar::parse(mode, &self.euler.weight_d, "0").map_err(|e| schema("/euler/weight_d", e))?;
        let mut model = FrobeniusModel::new(&self.name, &ring, eta, f, self.unit_index - 1, EulerField { q, r, weight_d })?;
        if let Some(tc) = &self.theta_constants {
            let mut rows = Vec::new();
            for (b, row) in tc.iter().enumerate() {
                rows.push(
                    row.iter()
                        .enumerate()
                        .map(|(i, x)| Scalar::parse(mode, x, "0").map_err(|e| schema(format!("/theta_constants/{b}/{i}"), e)))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            if rows.len() > n {
                return Err(schema("/theta_constants", format!("at most {n} rows")));
            }
            model.theta_constants = rows;
        }
        let tol = match mode {
            Mode::Rational => 0.0,
            Mode::Float if self.tolerance > 0.0 => self.tolerance,
            Mode::Float => DEFAULT_FLOAT_TOL,
        };
        model.check_wdvv(tol)?;
        let k = match &self.real_structure {
            Some(rs) => Some(RealStructure {
                k: series_matrix(&ring, &rs.k, n, "/real_structure/k")?,
                g: rs.g.as_ref().map(|g| series_matrix(&ring, g, n, "/real_structure/g")).transpose()?,
            }),
            None => None,
        };
        if let Some(k) = &k {
            let herm = model.hermitian_from_k(k)?;
            if herm.involution.max > tol {
                return Err(ModelError::NotInvolution(herm.involution.max).into());
            }
        }
        let potential = self
            .potential_a
            .as_ref()
            .map(|a| series_matrix(&ring, a, n, "/potential_a").map(|a| PotentialEndo { a }))
            .transpose()?;
        let cv = match &self.cv {
            Some(c) => Some(CvData { u: series_matrix(&ring, &c.u, n, "/cv/u")?, q: series_matrix(&ring, &c.q, n, "/cv/q")? }),
            None => None,
        };
        Ok(LoadedModel {
            model,
            k,
            potential,
            cv,
            truncation: t,
            tolerance: tol,
            seed: self.seed,
            normalization: self.normalization,
        })
    }
}

fn term_error(prefix: &str, e: &str) -> ConfigError {
    match e.split_once(": ") {
        Some((p, m)) => schema(format!("{prefix}{p}"), m),
        None => schema(prefix, e),
    }
}

fn scalar_matrix(mode: Mode, m: &[Vec<String>], n: usize, path: &str) -> Result<Vec<Vec<Scalar>>, ConfigError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(schema(path, format!("expected a {n}×{n} matrix")));
    }
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| Scalar::parse(mode, x, "0").map_err(|e| schema(format!("{path}/{i}/{j}"), e)))
                .collect()
        })
        .collect()
}

fn series_matrix(ring: &std::sync::Arc<Ring>, m: &MatJson, n: usize, path: &str) -> Result<Mat, ConfigError> {
    let e = &m.entries;
    if e.len() != n || e.iter().any(|r| r.len() != n) {
        return Err(schema(format!("{path}/entries"), format!("expected a {n}×{n} matrix")));
    }
    let mut out = Mat::zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Series::from_term_list(ring, &e[i][j]).map_err(|x| term_error(&format!("{path}/entries/{i}/{j}"), &x))?;
            if let Some(v) = m.valid_degree {
                s = s.with_valid(v);
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Serialize a matrix of series as a config matrix.
pub fn mat_to_json(m: &Mat) -> MatJson {
    let exact = m.data.iter().all(|s| s.is_exact());
    MatJson {
        valid_degree: if exact { None } else { Some(m.min_valid().expect("some coefficient known")) },
        entries: (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).to_terms()).collect()).collect(),
    }
}
