use qlbm::lbm::{run as run_lb, Scenario};
use serde::Serialize;
use serde_json::json;

use crate::error::CliResult;
use crate::output::{csv_writer, default_dir, read_json};
use crate::RunArgs;

#[derive(Debug, Serialize)]
struct MomentRow {
    step: usize,
    mass: f64,
    mean_x: f64,
    mean_y: f64,
    var_x: f64,
    var_y: f64,
}

#[derive(Debug, Serialize)]
struct DensityRow {
    x: usize,
    y: usize,
    rho: f64,
}

pub fn run(args: &RunArgs) -> CliResult<Option<serde_json::Value>> {
    let scenario: Scenario = read_json(&args.config)?;
    scenario.validate()?;
    let (model, field) = scenario.build::<f64>()?;
    let traj = run_lb(field, &model, scenario.steps, scenario.sample_every)?;
    let dir = args.out_dir.clone().unwrap_or_else(default_dir);

    let mut w = csv_writer(&dir.join("lb_moments.csv"), &scenario)?;
    for s in &traj.samples {
        let m = s.moments;
        w.serialize(MomentRow {
            step: s.step,
            mass: m.mass,
            mean_x: m.mean_x,
            mean_y: m.mean_y,
            var_x: m.var_x,
            var_y: m.var_y,
        })?;
    }
    w.flush()?;
    if args.dump {
        let mut w = csv_writer(&dir.join("lb_density.csv"), &scenario)?;
        let (nx, ny) = (traj.field.nx(), traj.field.ny());
        for x in 0..nx {
            for y in 0..ny {
                w.serialize(DensityRow {
                    x,
                    y,
                    rho: traj.field.density(x, y),
                })?;
            }
        }
        w.flush()?;
    }
    let m0 = traj.samples.first().map_or(0.0, |s| s.moments.mass);
    let drift = traj
        .samples
        .iter()
        .map(|s| (s.moments.mass - m0).abs())
        .fold(0.0, f64::max);
    Ok(Some(json!({
        "command": "lb run",
        "mass_drift": drift,
        "min_f": traj.field.min_value(),
    })))
}
