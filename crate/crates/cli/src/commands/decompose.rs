use std::path::PathBuf;

use clap::Args;
use nalgebra::DMatrix;
use qlbm::collision::{build_collision, decompose, failure_bound, gamma_window, GeneratorMatrix};
use qlbm::linalg::CMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::{read_json, resolve, write_json};

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// JSON file with the row-major generator `m` and optionally `dt`.
    #[arg(long)]
    pub omega: PathBuf,
    /// Time step; overrides the file's `dt`.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Weight, or `auto` for the lower window edge.
    #[arg(long, default_value = "auto")]
    pub gamma: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    m: Vec<Vec<f64>>,
    #[serde(default)]
    dt: Option<f64>,
}

#[derive(Debug, Serialize)]
struct WindowJson {
    lower: f64,
    upper: f64,
}

#[derive(Debug, Serialize)]
struct DecompositionJson {
    dim: usize,
    dt: f64,
    gamma: f64,
    window: WindowJson,
    spectrum: Vec<f64>,
    p_fail: f64,
    reconstruction_residual: f64,
    u_alpha: Vec<Vec<[f64; 2]>>,
    u_beta: Vec<Vec<[f64; 2]>>,
}

fn rows(m: &CMatrix<f64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn parse_matrix(rows: &[Vec<f64>]) -> CliResult<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::input(
            "m must be a non-empty square array of rows",
        ));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

pub fn run(args: &DecomposeArgs) -> CliResult<Option<serde_json::Value>> {
    let file: MatrixFile = read_json(&args.omega)?;
    let dt = args
        .dt
        .or(file.dt)
        .ok_or_else(|| CliError::input("dt missing: pass --dt or set \"dt\" in the file"))?;
    let gen = GeneratorMatrix::new(parse_matrix(&file.m)?)?;
    let op = build_collision(&gen, dt)?;
    let spectrum = op
        .real_spectrum()
        .expect("symmetric generators have real spectra");
    let window = gamma_window(&spectrum)?;
    let gamma = match args.gamma.as_str() {
        "auto" => window.optimal(),
        text => text.parse::<f64>().map_err(|_| {
            CliError::input(format!("--gamma must be a number or auto, got {text}"))
        })?,
    };
    if !window.contains(gamma) {
        return Err(CliError::input(format!(
            "gamma {gamma} is outside the feasible window [{}, {}]",
            window.lower(),
            window.upper()
        )));
    }
    let dec = decompose(&op, gamma)?;
    let out = DecompositionJson {
        dim: gen.dim(),
        dt,
        gamma,
        window: WindowJson {
            lower: window.lower(),
            upper: window.upper(),
        },
        spectrum,
        p_fail: failure_bound(&dec),
        reconstruction_residual: dec.reconstruction_residual(),
        u_alpha: rows(&dec.u_alpha),
        u_beta: rows(&dec.u_beta),
    };
    write_json(&resolve(args.out.as_deref(), "decomposition.json"), &out)?;
    let (ua, ub) = dec.unitarity_residuals();
    Ok(Some(json!({
        "command": "decompose",
        "reconstruction_residual": out.reconstruction_residual,
        "unitarity_residual_alpha": ua,
        "unitarity_residual_beta": ub,
        "commutator_residual": dec.commutator_residual(),
        "eigen_residual": op.eigen_residual(),
    })))
}
