use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ttlift::big::BigContext;
use ttlift::builtins;
use ttlift::config::{ConfigError, LoadedModel, ModelConfig, Normalization, Truncation};
use ttlift::dump::{lift_dump, DumpError, TARGETS};
use ttlift::report::ReportFile;
use ttlift::scalar::Mode;
use ttlift::verify::{known_selector, run_all, VerifyOptions};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "ttlift", version, about = "Lift Frobenius and tt* structures to the big phase space and check the lifted identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the identity catalogue and report residuals.
    Verify(VerifyArgs),
    /// Dump a lifted object as exact series components.
    Lift(LiftArgs),
    /// List the built-in models.
    Models {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Liu,
    #[value(name = "dw-rescaled")]
    DwRescaled,
}

#[derive(Args)]
struct ModelArgs {
    /// Built-in name, path to a JSON config, or a config name in $TTLIFT_MODEL_DIR.
    #[arg(long)]
    model: String,
    /// Directory searched for <model>.json.
    #[arg(long, env = "TTLIFT_MODEL_DIR")]
    model_dir: Option<PathBuf>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    dmax: Option<u32>,
    #[arg(long)]
    imax: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    normalization: Option<NormArg>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    m: ModelArgs,
    /// Residual tolerance; 0 by default in rational mode.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Comma-separated groups or id prefixes.
    #[arg(long, value_delimiter = ',')]
    check: Option<Vec<String>>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    m: ModelArgs,
    #[arg(long)]
    target: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Fail(u8, String);

impl From<ConfigError> for Fail {
    fn from(e: ConfigError) -> Fail {
        Fail(2, e.to_string())
    }
}

impl From<DumpError> for Fail {
    fn from(e: DumpError) -> Fail {
        Fail(2, e.to_string())
    }
}

fn resolve_config(a: &ModelArgs) -> Result<ModelConfig, Fail> {
    let seed = a.seed;
    let mut cfg = if builtins::find(&a.model).is_some() {
        let b = builtins::find(&a.model).expect("checked");
        let d = b.default_truncation;
        let mut t = Truncation { n_max: a.nmax.unwrap_or(d.n_max), d_max: a.dmax.unwrap_or(d.d_max), i_max: a.imax.unwrap_or(d.i_max) };
        if a.imax.is_none() {
            t.i_max = t.i_max.max(t.n_max);
        }
        if t.d_max == 0 {
            return Err(Fail(2, "/truncation/d_max: must be positive".into()));
        }
        builtins::config(&a.model, Some(t), seed.unwrap_or(DEFAULT_SEED)).expect("built-in")
    } else {
        let path = find_config(&a.model, a.model_dir.as_deref())
            .ok_or_else(|| Fail(2, format!("unknown model {:?}: not a built-in and no such config file", a.model)))?;
        let mut cfg = ModelConfig::load(&path)?;
        if let Some(n) = a.nmax {
            cfg.truncation.n_max = n;
            if a.imax.is_none() {
                cfg.truncation.i_max = cfg.truncation.i_max.max(n);
            }
        }
        if let Some(d) = a.dmax {
            cfg.truncation.d_max = d;
        }
        if let Some(i) = a.imax {
            cfg.truncation.i_max = i;
        }
        if let Some(s) = seed {
            cfg.seed = s;
        }
        cfg
    };
    if let Some(m) = a.mode {
        cfg.scalar_mode = match m {
            ModeArg::Rational => Mode::Rational,
            ModeArg::Float => Mode::Float,
        };
    }
    if let Some(n) = a.normalization {
        cfg.normalization = match n {
            NormArg::Liu => Normalization::Liu,
            NormArg::DwRescaled => Normalization::DwRescaled,
        };
    }
    Ok(cfg)
}

fn find_config(name: &str, dir: Option<&Path>) -> Option<PathBuf> {
    let p = PathBuf::from(name);
    if p.is_file() {
        return Some(p);
    }
    let dir = dir?;
    [dir.join(name), dir.join(format!("{name}.json"))].into_iter().find(|p| p.is_file())
}

fn build(cfg: &ModelConfig) -> Result<(LoadedModel, BigContext), Fail> {
    let lm = cfg.build()?;
    let ctx = BigContext::build(lm.model.clone(), lm.k.clone(), lm.potential.clone(), lm.cv.clone(), lm.truncation.i_max)
        .map_err(|e| Fail(2, format!("invalid model: {e}")))?;
    Ok((lm, ctx))
}

fn write_out(path: &Path, s: &str) -> Result<(), Fail> {
    std::fs::write(path, s).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

/// Print to stdout; a closed pipe (`| head`) is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Fail> {
    if let Some(sel) = &a.check {
        if let Some(bad) = sel.iter().find(|s| !known_selector(s)) {
            return Err(Fail(2, format!("--check: no identity matches {bad:?}")));
        }
    }
    let cfg = resolve_config(&a.m)?;
    let (lm, ctx) = build(&cfg)?;
    let tol = a.tol.unwrap_or(lm.tolerance);
    let opts = VerifyOptions { seed: cfg.seed, tol, select: a.check.clone() };
    let report = run_all(&ctx, &opts);
    let table = report.table();
    let pass = report.overall_pass();
    let file = ReportFile::new(cfg, tol, a.check, report);
    let json = file.to_json_string();
    if let Some(p) = &a.out {
        write_out(p, &json)?;
    }
    if a.json {
        emit(&format!("{json}\n"));
    } else {
        emit(&table);
    }
    Ok(if pass { 0 } else { 1 })
}

fn cmd_lift(a: LiftArgs) -> Result<u8, Fail> {
    if !TARGETS.contains(&a.target.as_str()) {
        return Err(DumpError::UnknownTarget(a.target).into());
    }
    let cfg = resolve_config(&a.m)?;
    let (lm, ctx) = build(&cfg)?;
    let dump = lift_dump(&ctx, &cfg.name, &a.target, lm.truncation, lm.normalization)?;
    let json = serde_json::to_string_pretty(&dump).expect("serializable");
    match &a.out {
        Some(p) => write_out(p, &json)?,
        None => emit(&format!("{json}\n")),
    }
    Ok(0)
}

fn cmd_models(json: bool) -> u8 {
    let list = builtins::list();
    if json {
        let v: Vec<serde_json::Value> = list
            .iter()
            .map(|b| {
                serde_json::json!({
                    "name": b.name,
                    "summary": b.summary,
                    "provenance": b.provenance,
                    "default_truncation": b.default_truncation,
                })
            })
            .collect();
        emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
    } else {
        let mut s = String::new();
        for b in &list {
            let t = b.default_truncation;
            s.push_str(&format!("{:<10} {}\n", b.name, b.summary));
            s.push_str(&format!("{:<10} n_max={} d_max={} i_max={}\n", "", t.n_max, t.d_max, t.i_max));
            s.push_str(&format!("{:<10} {}\n", "", b.provenance));
        }
        emit(&s);
    }
    0
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Lift(a) => cmd_lift(a),
        Cmd::Models { json } => Ok(cmd_models(json)),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
