use std::f64::consts::TAU;

use super::field::{LatticeField, Stepper};
use super::model::TransportModel;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Density moments on a periodic grid.
///
/// Mean and variance along each axis come from the fundamental Fourier mode
/// `ρ̂(k₁)`, `k₁ = 2π/L`: for a periodized Gaussian `|ρ̂(k₁)| = M e^{-k₁²σ²/2}`
/// exactly, so the estimates stay valid after the pulse wraps around. A
/// field with no weight in the fundamental mode falls back to raw moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mass: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSample {
    pub step: usize,
    pub moments: Moments,
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub samples: Vec<MomentSample>,
    pub field: LatticeField<T>,
}

/// `(mean, variance)` of a 1-D periodic profile.
fn axis_moments(profile: &[f64]) -> (f64, f64) {
    let n = profile.len();
    let len = n as f64;
    let mass: f64 = profile.iter().sum();
    let k = TAU / len;
    let (mut re, mut im) = (0.0, 0.0);
    for (x, &p) in profile.iter().enumerate() {
        let ph = k * x as f64;
        re += p * ph.cos();
        im -= p * ph.sin();
    }
    let amp = re.hypot(im);
    if mass.abs() > 0.0 && amp > 1e-12 * mass.abs() {
        let mean = (-im.atan2(re) / k).rem_euclid(len);
        let var = -2.0 * (amp / mass).ln() / (k * k);
        (mean, var)
    } else {
        let m1: f64 = profile
            .iter()
            .enumerate()
            .map(|(x, p)| x as f64 * p)
            .sum::<f64>()
            / mass;
        let m2: f64 = profile
            .iter()
            .enumerate()
            .map(|(x, p)| (x as f64 - m1).powi(2) * p)
            .sum::<f64>()
            / mass;
        (m1, m2)
    }
}

pub fn periodic_moments<T: Real>(field: &LatticeField<T>) -> Moments {
    let (nx, ny) = (field.nx(), field.ny());
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    for (x, sx) in px.iter_mut().enumerate() {
        for (y, sy) in py.iter_mut().enumerate() {
            let rho = field.density(x, y).as_f64();
            *sx += rho;
            *sy += rho;
        }
    }
    let (mean_x, var_x) = axis_moments(&px);
    let (mean_y, var_y) = axis_moments(&py);
    Moments {
        mass: field.mass().as_f64(),
        mean_x,
        mean_y,
        var_x,
        var_y,
    }
}

fn unwrap_to(prev: f64, wrapped: f64, len: f64) -> f64 {
    wrapped + len * ((prev - wrapped) / len).round()
}

/// Iterates [`Stepper::advance`], sampling moments at step 0, every
/// `sample_every` steps and at the last step. Means are unwrapped across
/// samples so drift can be fitted through periodic crossings.
pub fn run<T: Real>(
    field: LatticeField<T>,
    model: &TransportModel<T>,
    n_steps: usize,
    sample_every: usize,
) -> Result<Trajectory<T>> {
    let sample_every = sample_every.max(1);
    let (lx, ly) = (field.nx() as f64, field.ny() as f64);
    let mut stepper = Stepper::new(model, field.nx(), field.ny());
    let mut field = field;
    let mut samples = vec![MomentSample {
        step: 0,
        moments: periodic_moments(&field),
    }];
    let limit = T::lit(1e6);
    for s in 1..=n_steps {
        stepper.advance(&mut field);
        if s % sample_every == 0 || s == n_steps {
            let peak = field.max_abs();
            if !(peak <= limit) {
                return Err(Error::Unstable {
                    step: s,
                    value: peak.as_f64(),
                });
            }
            let mut m = periodic_moments(&field);
            let prev = samples.last().expect("initial sample").moments;
            m.mean_x = unwrap_to(prev.mean_x, m.mean_x, lx);
            m.mean_y = unwrap_to(prev.mean_y, m.mean_y, ly);
            samples.push(MomentSample {
                step: s,
                moments: m,
            });
        }
    }
    Ok(Trajectory { samples, field })
}

/// Least-squares `(slope, intercept)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
