use qlbm::lbm::{
    fit_line, run, CouetteProfile, InitSpec, LatticeField, Scenario, TransportModel, VelocityField,
    VelocitySpec,
};

fn gaussian_field(
    n: usize,
    model: &TransportModel<f64>,
    x0: f64,
    y0: f64,
    sigma: f64,
) -> LatticeField<f64> {
    LatticeField::from_density(n, n, model, |x, y| {
        let d2 = (x as f64 - x0).powi(2) + (y as f64 - y0).powi(2);
        (-d2 / (2.0 * sigma * sigma)).exp()
    })
    .unwrap()
}

struct Fit {
    drift: (f64, f64),
    var_slope: (f64, f64),
    mass_drift: f64,
}

fn fit_run(model: &TransportModel<f64>, n: usize, steps: usize, from: usize) -> Fit {
    let field = gaussian_field(n, model, n as f64 / 2.0, n as f64 / 2.0, 2.0);
    let m0 = field.mass();
    let traj = run(field, model, steps, 10).unwrap();
    let tail: Vec<_> = traj.samples.iter().filter(|s| s.step >= from).collect();
    let t: Vec<f64> = tail.iter().map(|s| s.step as f64).collect();
    let col = |f: fn(&qlbm::lbm::Moments) -> f64| -> Vec<f64> {
        tail.iter().map(|s| f(&s.moments)).collect()
    };
    Fit {
        drift: (
            fit_line(&t, &col(|m| m.mean_x)).0,
            fit_line(&t, &col(|m| m.mean_y)).0,
        ),
        var_slope: (
            fit_line(&t, &col(|m| m.var_x)).0,
            fit_line(&t, &col(|m| m.var_y)).0,
        ),
        mass_drift: (traj.field.mass() - m0).abs(),
    }
}

#[test]
fn advected_pulse_drifts_and_spreads() {
    let model = TransportModel::new(0.05)
        .unwrap()
        .with_velocity(VelocityField::Constant { ux: 0.1, uy: 0.0 });
    let fit = fit_run(&model, 64, 2000, 200);
    assert!(
        (fit.drift.0 - 0.1).abs() / 0.1 < 0.02,
        "drift {}",
        fit.drift.0
    );
    assert!(fit.drift.1.abs() < 1e-6);
    assert!(
        (fit.var_slope.0 - 0.1).abs() / 0.1 < 0.05,
        "{}",
        fit.var_slope.0
    );
    assert!(
        (fit.var_slope.1 - 0.1).abs() / 0.1 < 0.05,
        "{}",
        fit.var_slope.1
    );
    assert!(fit.mass_drift < 1e-10);
}

#[test]
fn pulse_at_rest_stays_put() {
    let model = TransportModel::new(0.05).unwrap();
    let field = gaussian_field(32, &model, 16.0, 16.0, 2.0);
    let traj = run(field, &model, 400, 50).unwrap();
    for s in &traj.samples {
        assert!((s.moments.mean_x - 16.0).abs() < 0.01);
        assert!((s.moments.mean_y - 16.0).abs() < 0.01);
    }
}

#[test]
fn diffusivity_is_recovered() {
    for d in [0.02, 0.05, 0.1] {
        let model = TransportModel::new(d).unwrap();
        let fit = fit_run(&model, 32, 600, 100);
        for slope in [fit.var_slope.0, fit.var_slope.1] {
            let fitted = slope / 2.0;
            assert!((fitted - d).abs() / d < 0.05, "D = {d}: fitted {fitted}");
        }
    }
}

#[test]
fn anisotropic_diffusivities() {
    let (dx, dy) = (0.03, 0.12);
    let model = TransportModel::new(0.05)
        .unwrap()
        .with_anisotropy(dx, dy)
        .unwrap();
    let fit = fit_run(&model, 32, 600, 100);
    assert!((fit.var_slope.0 / 2.0 - dx).abs() / dx < 0.05);
    assert!((fit.var_slope.1 / 2.0 - dy).abs() / dy < 0.05);
}

#[test]
fn galilean_drift_matches_constant_velocity() {
    for (ux, uy) in [(0.05, 0.0), (0.0, -0.08), (0.07, 0.07)] {
        let model = TransportModel::new(0.05)
            .unwrap()
            .with_velocity(VelocityField::Constant { ux, uy });
        let fit = fit_run(&model, 32, 500, 50);
        for (got, want) in [(fit.drift.0, ux), (fit.drift.1, uy)] {
            if want == 0.0 {
                assert!(got.abs() < 1e-6);
            } else {
                assert!((got - want).abs() / want.abs() < 0.02, "{got} vs {want}");
            }
        }
    }
}

#[test]
fn mass_conserved_over_ten_thousand_steps() {
    let model = TransportModel::new(0.05)
        .unwrap()
        .with_velocity(VelocityField::Constant { ux: 0.1, uy: 0.05 });
    let field = gaussian_field(12, &model, 6.0, 6.0, 1.5);
    let m0 = field.mass();
    let traj = run(field, &model, 10_000, 10_000).unwrap();
    assert!((traj.field.mass() - m0).abs() <= 1e-10);
    assert!(traj.field.min_value() >= -1e-12);
}

/// Explicit central-difference solver for ∂ρ/∂t + U_x(y) ∂ρ/∂x = D Δρ on a
/// periodic grid refined by `refine` per lattice unit.
fn fd_mean_x_drift(n: usize, u: impl Fn(f64) -> f64, d: f64, y0: f64, t_end: f64) -> f64 {
    let refine = 2usize;
    let m = n * refine;
    let h = 1.0 / refine as f64;
    let dt = 0.2 * h * h / d;
    let steps = (t_end / dt).round() as usize;
    let dt = t_end / steps as f64;
    let mut rho = vec![0.0; m * m];
    let x0 = n as f64 / 2.0;
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (i as f64 * h, j as f64 * h);
            rho[i * m + j] = (-((x - x0).powi(2) + (y - y0).powi(2)) / 8.0).exp();
        }
    }
    let vel: Vec<f64> = (0..m).map(|j| u(j as f64 * h)).collect();
    let mean_x = |rho: &[f64]| {
        let (mut re, mut im, mut mass) = (0.0, 0.0, 0.0);
        let k = std::f64::consts::TAU / n as f64;
        for i in 0..m {
            let col: f64 = (0..m).map(|j| rho[i * m + j]).sum();
            let ph = k * i as f64 * h;
            re += col * ph.cos();
            im -= col * ph.sin();
            mass += col;
        }
        let _ = mass;
        (-im.atan2(re) / k).rem_euclid(n as f64)
    };
    let start = mean_x(&rho);
    let mut next = rho.clone();
    for _ in 0..steps {
        for i in 0..m {
            let (ip, im) = ((i + 1) % m, (i + m - 1) % m);
            for j in 0..m {
                let (jp, jm) = ((j + 1) % m, (j + m - 1) % m);
                let c = rho[i * m + j];
                let lap = (rho[ip * m + j] + rho[im * m + j] + rho[i * m + jp] + rho[i * m + jm]
                    - 4.0 * c)
                    / (h * h);
                let adv = vel[j] * (rho[ip * m + j] - rho[im * m + j]) / (2.0 * h);
                next[i * m + j] = c + dt * (d * lap - adv);
            }
        }
        std::mem::swap(&mut rho, &mut next);
    }
    let len = n as f64;
    let shift = mean_x(&rho) - start;
    (shift - len * (shift / len).round()) / t_end
}

#[test]
fn couette_drift_follows_height_and_matches_finite_differences() {
    let (n, u0, d, t) = (64usize, 0.01, 0.05, 300usize);
    let model = TransportModel::new(d)
        .unwrap()
        .with_velocity(VelocityField::Couette {
            u0,
            profile: CouetteProfile::Centered,
        });
    let profile = |y: f64| u0 * (y - n as f64 / 2.0) / (n as f64 / 2.0);
    let mut rates = Vec::new();
    for offset in [-12.0, 8.0, 14.0] {
        let y0 = n as f64 / 2.0 + offset;
        let field = gaussian_field(n, &model, n as f64 / 2.0, y0, 2.0);
        let traj = run(field, &model, t, t).unwrap();
        let first = traj.samples.first().unwrap().moments.mean_x;
        let last = traj.samples.last().unwrap().moments.mean_x;
        let lb_rate = (last - first) / t as f64;
        let fd_rate = fd_mean_x_drift(n, profile, d, y0, t as f64);
        assert!(
            (lb_rate - fd_rate).abs() / fd_rate.abs() < 0.05,
            "offset {offset}: lb {lb_rate} fd {fd_rate}"
        );
        rates.push(lb_rate / offset);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    for r in &rates {
        assert!(
            (r - mean).abs() / mean < 0.05,
            "rate/height not constant: {rates:?}"
        );
    }
    assert!((mean - u0 / (n as f64 / 2.0)).abs() / mean < 0.05);
}

#[test]
fn scenario_round_trip_runs() {
    let s = Scenario {
        nx: 16,
        ny: 16,
        diffusivity: 0.05,
        velocity: VelocitySpec::Constant { ux: 0.0, uy: 0.0 },
        init: InitSpec::Uniform { rho: 1.0 },
        steps: 5,
        sample_every: 1,
        omega4: 1.0,
    };
    let (model, field) = s.build::<f64>().unwrap();
    let before = field.clone();
    let traj = run(field, &model, s.steps, s.sample_every).unwrap();
    assert_eq!(traj.samples.len(), 6);
    assert_eq!(traj.field, before);
}
