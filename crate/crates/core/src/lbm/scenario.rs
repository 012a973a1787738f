use serde::{Deserialize, Serialize};

use super::field::LatticeField;
use super::model::{CouetteProfile, TransportModel, VelocityField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Classical run description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub nx: usize,
    pub ny: usize,
    #[serde(rename = "D")]
    pub diffusivity: f64,
    pub velocity: VelocitySpec,
    pub init: InitSpec,
    pub steps: usize,
    #[serde(default = "one_usize")]
    pub sample_every: usize,
    #[serde(default = "one_f64")]
    pub omega4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum VelocitySpec {
    Constant {
        #[serde(default)]
        ux: f64,
        #[serde(default)]
        uy: f64,
    },
    Couette {
        u0: f64,
        #[serde(default)]
        profile: ProfileSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileSpec {
    #[default]
    Centered,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitSpec {
    Gaussian {
        x0: f64,
        y0: f64,
        sigma: f64,
        #[serde(default = "one_f64")]
        amplitude: f64,
        #[serde(default)]
        background: f64,
    },
    Uniform {
        rho: f64,
    },
}

fn one_usize() -> usize {
    1
}

fn one_f64() -> f64 {
    1.0
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl Scenario {
    /// Range checks every physical parameter.
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(invalid("nx/ny", "grid must be at least 2x2"));
        }
        if !(self.diffusivity > 0.0 && self.diffusivity.is_finite()) {
            return Err(invalid("D", "diffusivity must be positive"));
        }
        if !(self.omega4 > 0.0 && self.omega4 <= 2.0) {
            return Err(invalid("omega4", "must lie in (0, 2]"));
        }
        if self.sample_every == 0 {
            return Err(invalid("sample_every", "must be positive"));
        }
        // f_eq stays non-negative while |U·c| / c_s² ≤ 1.
        let umax = self.velocity_field::<f64>().max_speed(self.ny);
        if !(umax <= 0.5) {
            return Err(invalid(
                "velocity",
                format!("peak speed {umax} exceeds 0.5"),
            ));
        }
        match self.init {
            InitSpec::Gaussian {
                sigma,
                amplitude,
                background,
                x0,
                y0,
            } => {
                if !(sigma > 0.0) {
                    return Err(invalid("init.sigma", "must be positive"));
                }
                if !(amplitude >= 0.0 && background >= 0.0 && amplitude + background > 0.0) {
                    return Err(invalid(
                        "init",
                        "amplitude and background must be non-negative",
                    ));
                }
                if !(x0.is_finite() && y0.is_finite()) {
                    return Err(invalid("init.x0/y0", "must be finite"));
                }
            }
            InitSpec::Uniform { rho } => {
                if !(rho > 0.0) {
                    return Err(invalid("init.rho", "must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn velocity_field<T: Real>(&self) -> VelocityField<T> {
        match self.velocity {
            VelocitySpec::Constant { ux, uy } => VelocityField::Constant {
                ux: T::lit(ux),
                uy: T::lit(uy),
            },
            VelocitySpec::Couette { u0, profile } => VelocityField::Couette {
                u0: T::lit(u0),
                profile: match profile {
                    ProfileSpec::Centered => CouetteProfile::Centered,
                    ProfileSpec::Raw => CouetteProfile::Raw,
                },
            },
        }
    }

    pub fn model<T: Real>(&self) -> Result<TransportModel<T>> {
        self.validate()?;
        TransportModel::new(T::lit(self.diffusivity))?
            .with_velocity(self.velocity_field())
            .with_omega4(T::lit(self.omega4))
    }

    /// Model and equilibrium initial field.
    pub fn build<T: Real>(&self) -> Result<(TransportModel<T>, LatticeField<T>)> {
        let model = self.model()?;
        let field = match self.init {
            InitSpec::Gaussian {
                x0,
                y0,
                sigma,
                amplitude,
                background,
            } => LatticeField::from_density(self.nx, self.ny, &model, |x, y| {
                let d2 = (x as f64 - x0).powi(2) + (y as f64 - y0).powi(2);
                T::lit(background + amplitude * (-d2 / (2.0 * sigma * sigma)).exp())
            })?,
            InitSpec::Uniform { rho } => {
                LatticeField::uniform(self.nx, self.ny, &model, T::lit(rho))?
            }
        };
        Ok((model, field))
    }
}
