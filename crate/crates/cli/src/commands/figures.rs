use std::path::PathBuf;

use clap::Args;
use nalgebra::DMatrix;
use qlbm::collision::{
    build_collision, gamma_sweep, gamma_window, random_symmetric_generator, success_curve,
    GeneratorMatrix,
};
use qlbm::lbm::TransportModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::{csv_writer, resolve};

/// Weight ratios `γ/γ₀` swept for the second panel.
pub const GAMMA_RATIOS: [f64; 11] = [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0];

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 8)]
    pub instances: usize,
    /// Collision time of the full step.
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Fig2Row {
    /// `a` (success against N), `b` (weight sweep at N = n_max) or `scalar`
    /// (the `C = I/2` reference).
    pub panel: &'static str,
    pub instance: Option<usize>,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma_ratio: f64,
    pub p_step: f64,
    pub p_accumulated: f64,
}

#[derive(Debug, Serialize)]
struct Fig2Config {
    command: &'static str,
    dim: usize,
    seed: u64,
    n_max: usize,
    instances: usize,
    dt: f64,
    distribution: &'static str,
}

pub fn fig2_rows(
    dim: usize,
    seed: u64,
    n_max: usize,
    instances: usize,
    dt: f64,
) -> CliResult<Vec<Fig2Row>> {
    if dim < 2 || n_max == 0 || !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::input("need dim >= 2, n-max >= 1 and dt > 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for instance in 0..instances {
        let gen = random_symmetric_generator::<f64, _>(&mut rng, dim, dt);
        for pt in success_curve(&gen, dt, n_max)? {
            rows.push(Fig2Row {
                panel: "a",
                instance: Some(instance),
                n: pt.n,
                gamma_ratio: 1.0,
                p_step: pt.p_step,
                p_accumulated: pt.p_accumulated,
            });
        }
        for (ratio, p) in gamma_sweep(&gen, dt, n_max, &GAMMA_RATIOS)? {
            rows.push(Fig2Row {
                panel: "b",
                instance: Some(instance),
                n: n_max,
                gamma_ratio: ratio,
                p_step: p,
                p_accumulated: p.powi(n_max as i32),
            });
        }
    }
    let half = GeneratorMatrix::new(DMatrix::from_diagonal_element(dim, dim, 0.5f64.ln()))?;
    for pt in success_curve(&half, 1.0, n_max)? {
        rows.push(Fig2Row {
            panel: "scalar",
            instance: None,
            n: pt.n,
            gamma_ratio: 1.0,
            p_step: pt.p_step,
            p_accumulated: pt.p_accumulated,
        });
    }
    Ok(rows)
}

pub fn fig2(args: &Fig2Args, seed: Option<u64>) -> CliResult<Option<serde_json::Value>> {
    let seed = seed.unwrap_or(0);
    let rows = fig2_rows(args.dim, seed, args.n_max, args.instances, args.dt)?;
    let config = Fig2Config {
        command: "fig2",
        dim: args.dim,
        seed,
        n_max: args.n_max,
        instances: args.instances,
        dt: args.dt,
        distribution: "symmetrized standard normal, spectral radius 1, halved until feasible",
    };
    let mut w = csv_writer(&resolve(args.out.as_deref(), "fig2.csv"), &config)?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(Some(json!({ "command": "fig2", "rows": rows.len() })))
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    #[arg(long, default_value_t = 0.05)]
    pub diffusivity: f64,
    #[arg(long, default_value_t = 4.0)]
    pub dt_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig3Row {
    pub dt: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub delta_3: f64,
    pub delta_4: f64,
    pub gamma_lower: f64,
    pub gamma_upper: f64,
}

/// Spectrum of `exp(-A dt)` (ascending) and its weight window.
pub fn fig3_row(model: &TransportModel<f64>, dt: f64) -> CliResult<Fig3Row> {
    let omega = model.omega_matrix((0.0, 0.0));
    let gen = GeneratorMatrix::new(DMatrix::from_fn(4, 4, |r, c| omega[(r, c)]))?;
    let op = build_collision(&gen, dt)?;
    let d = op.real_spectrum().expect("symmetric generator");
    let w = gamma_window(&d)?;
    Ok(Fig3Row {
        dt,
        delta_1: d[0],
        delta_2: d[1],
        delta_3: d[2],
        delta_4: d[3],
        gamma_lower: w.lower(),
        gamma_upper: w.upper(),
    })
}

pub fn fig3_rows(diffusivity: f64, dt_max: f64, samples: usize) -> CliResult<Vec<Fig3Row>> {
    if samples < 2 || !(dt_max > 0.0 && dt_max.is_finite()) {
        return Err(CliError::input("need samples >= 2 and dt-max > 0"));
    }
    let model = TransportModel::new(diffusivity)?;
    (0..samples)
        .map(|k| fig3_row(&model, dt_max * k as f64 / (samples - 1) as f64))
        .collect()
}

pub fn fig3(args: &Fig3Args) -> CliResult<Option<serde_json::Value>> {
    let rows = fig3_rows(args.diffusivity, args.dt_max, args.samples)?;
    let config = json!({
        "command": "fig3",
        "D": args.diffusivity,
        "dt_max": args.dt_max,
        "samples": args.samples,
    });
    let mut w = csv_writer(&resolve(args.out.as_deref(), "fig3.csv"), &config)?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(Some(json!({ "command": "fig3", "rows": rows.len() })))
}
