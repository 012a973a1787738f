use qlbm::protocol::{run_protocol, ProtocolConfig, ProtocolRun};
use serde::Serialize;
use serde_json::json;

use crate::error::CliResult;
use crate::output::{csv_writer, default_dir, read_json};

#[derive(Debug, Serialize)]
struct HeraldRow {
    step: usize,
    substep: usize,
    p: f64,
    outcome: &'static str,
    cumulative: f64,
}

#[derive(Debug, Serialize)]
struct MomentRow {
    step: usize,
    component: usize,
    ledger: f64,
    mass: f64,
    weight: f64,
    mean_x: f64,
    mean_y: f64,
    var_x: f64,
    var_y: f64,
}

#[derive(Debug, Serialize)]
struct FieldRow {
    step: usize,
    component: usize,
    x1: f64,
    x2: f64,
    f: f64,
}

#[derive(Debug, Serialize)]
struct AmplitudeRow {
    component: usize,
    n_x: usize,
    n_y: usize,
    re: f64,
    im: f64,
}

pub fn load(path: &std::path::Path, seed: Option<u64>) -> CliResult<ProtocolConfig> {
    let mut config: ProtocolConfig = read_json(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    config.validate()?;
    Ok(config)
}

pub fn run(args: &crate::RunArgs, seed: Option<u64>) -> CliResult<Option<serde_json::Value>> {
    let config = load(&args.config, seed)?;
    let result = run_protocol(&config)?;
    let dir = args.out_dir.clone().unwrap_or_else(default_dir);
    write_outputs(&dir, &config, &result, args.dump)?;
    if let Some(step) = result.halted_at {
        eprintln!("qlbm: herald failed at step {step}; trajectory halted");
    }
    let schedule = config.schedule()?;
    let dec = &schedule.per_step[0].decomposition;
    let (ua, ub) = dec.unitarity_residuals();
    Ok(Some(json!({
        "command": "qsim run",
        "reconstruction_residual": dec.reconstruction_residual(),
        "unitarity_residual_alpha": ua,
        "unitarity_residual_beta": ub,
        "final_norm_deviation": (result.state.norm() - 1.0).abs(),
        "final_leakage": result.state.leakage(),
        "max_field_imag": result.fields.iter().map(|(_, f)| f.max_imag).fold(0.0, f64::max),
    })))
}

pub fn write_outputs(
    dir: &std::path::Path,
    config: &ProtocolConfig,
    result: &ProtocolRun,
    dump: bool,
) -> CliResult<()> {
    let mut w = csv_writer(&dir.join("herald.csv"), config)?;
    for e in &result.herald.entries {
        w.serialize(HeraldRow {
            step: e.step,
            substep: e.substep,
            p: e.p,
            outcome: e.outcome.as_str(),
            cumulative: e.cumulative,
        })?;
    }
    w.flush()?;

    let mut w = csv_writer(&dir.join("qsim_moments.csv"), config)?;
    for s in &result.samples {
        for (component, m) in s.components.iter().enumerate() {
            w.serialize(MomentRow {
                step: s.step,
                component,
                ledger: s.ledger,
                mass: m.mass,
                weight: m.weight,
                mean_x: m.mean_x,
                mean_y: m.mean_y,
                var_x: m.var_x,
                var_y: m.var_y,
            })?;
        }
    }
    w.flush()?;

    if !result.fields.is_empty() {
        let mut w = csv_writer(&dir.join("fields.csv"), config)?;
        for (step, field) in &result.fields {
            for s in &field.samples {
                w.serialize(FieldRow {
                    step: *step,
                    component: s.component,
                    x1: s.x1,
                    x2: s.x2,
                    f: s.f,
                })?;
            }
        }
        w.flush()?;
    }
    if dump {
        let mut w = csv_writer(&dir.join("state.csv"), config)?;
        for (component, n_x, n_y, re, im) in result.state.amplitude_rows() {
            w.serialize(AmplitudeRow {
                component,
                n_x,
                n_y,
                re,
                im,
            })?;
        }
        w.flush()?;
    }
    Ok(())
}
