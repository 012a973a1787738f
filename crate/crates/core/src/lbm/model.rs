use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const VELOCITIES: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
pub const WEIGHT: f64 = 0.25;
pub const CS2: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouetteProfile {
    /// `U_x = U₀ (y - ny/2) / (ny/2)`.
    #[default]
    Centered,
    /// `U_x = U₀ y`.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityField<T: Real> {
    Constant { ux: T, uy: T },
    Couette { u0: T, profile: CouetteProfile },
}

impl<T: Real> VelocityField<T> {
    pub fn at(&self, y: usize, ny: usize) -> (T, T) {
        match *self {
            VelocityField::Constant { ux, uy } => (ux, uy),
            VelocityField::Couette { u0, profile } => {
                let y = T::from_count(y);
                let ux = match profile {
                    CouetteProfile::Centered => {
                        let half = T::from_count(ny) * T::lit(0.5);
                        u0 * (y - half) / half
                    }
                    CouetteProfile::Raw => u0 * y,
                };
                (ux, T::zero())
            }
        }
    }

    /// Largest speed the field takes on a grid with `ny` rows.
    pub fn max_speed(&self, ny: usize) -> T {
        (0..ny.max(1)).fold(T::zero(), |acc, y| {
            let (ux, uy) = self.at(y, ny);
            acc.max((ux * ux + uy * uy).sqrt())
        })
    }
}

/// Advection-diffusion model: diffusivity, advecting velocity and the four
/// relaxation rates `ω₁..ω₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportModel<T: Real> {
    diffusivity: T,
    velocity: VelocityField<T>,
    rates: [T; 4],
}

impl<T: Real> TransportModel<T> {
    /// Isotropic model at rest with `ω₄ = 1`.
    pub fn new(diffusivity: T) -> Result<Self> {
        if !(diffusivity > T::zero() && diffusivity.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "D",
                reason: format!("diffusivity must be positive, got {}", diffusivity.as_f64()),
            });
        }
        let w = Self::rate_for(diffusivity);
        Ok(Self {
            diffusivity,
            velocity: VelocityField::Constant {
                ux: T::zero(),
                uy: T::zero(),
            },
            rates: [T::zero(), w, w, T::one()],
        })
    }

    /// `ω = 1 / (1/2 + D / c_s²)`.
    pub fn rate_for(diffusivity: T) -> T {
        T::one() / (T::lit(0.5) + diffusivity / T::lit(CS2))
    }

    /// `D = c_s² (1/ω - 1/2)`.
    pub fn diffusivity_for(rate: T) -> T {
        T::lit(CS2) * (T::one() / rate - T::lit(0.5))
    }

    pub fn with_velocity(mut self, velocity: VelocityField<T>) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn with_omega4(mut self, omega4: T) -> Result<Self> {
        check_rate("omega4", omega4)?;
        self.rates[3] = omega4;
        Ok(self)
    }

    /// Separate diffusivities along `x` and `y` (`ω₂ ≠ ω₃`).
    pub fn with_anisotropy(mut self, dx: T, dy: T) -> Result<Self> {
        for (name, d) in [("D_x", dx), ("D_y", dy)] {
            if !(d > T::zero()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be positive".into(),
                });
            }
        }
        self.rates[1] = Self::rate_for(dx);
        self.rates[2] = Self::rate_for(dy);
        Ok(self)
    }

    /// Overrides all four rates; zero rates switch collisions off.
    pub fn with_rates(mut self, rates: [T; 4]) -> Result<Self> {
        for r in rates {
            if !(r >= T::zero() && r <= T::lit(2.0)) {
                return Err(Error::InvalidParameter {
                    name: "rates",
                    reason: format!("relaxation rate {} outside [0, 2]", r.as_f64()),
                });
            }
        }
        self.rates = rates;
        Ok(self)
    }

    pub fn diffusivity(&self) -> T {
        self.diffusivity
    }

    pub fn velocity(&self) -> &VelocityField<T> {
        &self.velocity
    }

    pub fn rates(&self) -> [T; 4] {
        self.rates
    }

    /// `f_eq,i = w_i [ρ + ρ U·c_i / c_s²]`.
    pub fn equilibrium(&self, rho: T, u: (T, T)) -> Vector4<T> {
        equilibrium(rho, u)
    }

    pub fn scattering_matrix(&self) -> ScatteringMatrix<T> {
        ScatteringMatrix::new(self.rates)
    }

    /// `Ω_cl` with `Ω_cl f = -A (f - f_eq(f))` for a constant velocity `u`.
    ///
    /// `f_eq` is linear in `f` through `ρ = Σ f`, so
    /// `Ω_cl = -A + A g 1ᵀ` with `g_k = w_k (1 + U·c_k / c_s²)`.
    pub fn omega_matrix(&self, u: (T, T)) -> Matrix4<T> {
        let a = self.scattering_matrix().a;
        let g = equilibrium(T::one(), u);
        -a + a * g * Vector4::repeat(T::one()).transpose()
    }
}

fn check_rate<T: Real>(name: &'static str, w: T) -> Result<()> {
    if w > T::zero() && w <= T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("relaxation rate {} outside (0, 2]", w.as_f64()),
        })
    }
}

pub(crate) fn equilibrium<T: Real>(rho: T, (ux, uy): (T, T)) -> Vector4<T> {
    let w = T::lit(WEIGHT);
    let inv_cs2 = T::one() / T::lit(CS2);
    Vector4::from_fn(|i, _| {
        let (cx, cy) = VELOCITIES[i];
        let cu = ux * T::lit(cx as f64) + uy * T::lit(cy as f64);
        w * (rho + rho * cu * inv_cs2)
    })
}

/// `A = Σ_k ω_k â_k â_kᵀ` over the orthonormalized moments
/// `1`, `c_x`, `c_y`, `c_x² - c_s²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix<T: Real> {
    pub a: Matrix4<T>,
    /// Columns are the orthonormal moment vectors.
    pub eigenvectors: Matrix4<T>,
    pub rates: [T; 4],
}

impl<T: Real> ScatteringMatrix<T> {
    pub fn new(rates: [T; 4]) -> Self {
        let cs2 = T::lit(CS2);
        let raw: [Vector4<T>; 4] = [
            Vector4::repeat(T::one()),
            Vector4::from_fn(|i, _| T::lit(VELOCITIES[i].0 as f64)),
            Vector4::from_fn(|i, _| T::lit(VELOCITIES[i].1 as f64)),
            Vector4::from_fn(|i, _| T::lit(VELOCITIES[i].0.pow(2) as f64) - cs2),
        ];
        let mut basis: Vec<Vector4<T>> = Vec::with_capacity(4);
        for v in raw {
            let mut v = v;
            for b in &basis {
                v -= b * b.dot(&v);
            }
            basis.push(v.normalize());
        }
        let eigenvectors = Matrix4::from_columns(&basis);
        let a = basis
            .iter()
            .zip(rates)
            .fold(Matrix4::zeros(), |acc, (v, w)| acc + v * v.transpose() * w);
        Self {
            a,
            eigenvectors,
            rates,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_examples() {
        let m = TransportModel::<f64>::new(0.05).unwrap();
        let rest = m.equilibrium(1.0, (0.0, 0.0));
        assert!(rest.iter().all(|&f| (f - 0.25).abs() < 1e-16));
        let moving = m.equilibrium(1.0, (0.1, 0.0));
        for (f, e) in moving.iter().zip([0.30, 0.25, 0.20, 0.25]) {
            assert!((f - e).abs() < 1e-15);
        }
        let f = m.equilibrium(2.3, (0.07, -0.12));
        assert!((f.sum() - 2.3).abs() < 1e-14);
    }

    #[test]
    fn weights_and_velocities_balance() {
        let sx: i32 = VELOCITIES.iter().map(|c| c.0).sum();
        let sy: i32 = VELOCITIES.iter().map(|c| c.1).sum();
        assert_eq!((sx, sy), (0, 0));
        assert_eq!(WEIGHT * 4.0, 1.0);
    }

    #[test]
    fn scattering_matrix_spectrum_at_d_005() {
        let model = TransportModel::<f64>::new(0.05).unwrap();
        assert!((model.rates()[1] - 5.0 / 3.0).abs() < 1e-15);
        let s = model.scattering_matrix();
        assert!((s.a - s.a.transpose()).amax() < 1e-14);
        assert!((s.a * Vector4::repeat(1.0)).amax() < 1e-15);
        let mut eig: Vec<f64> = s.a.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, x) in eig.iter().zip([0.0, 1.0, 5.0 / 3.0, 5.0 / 3.0]) {
            assert!((e - x).abs() < 1e-12, "{e} vs {x}");
        }
        assert!((s.eigenvectors.transpose() * s.eigenvectors - Matrix4::identity()).amax() < 1e-15);
    }

    #[test]
    fn fourth_moment_is_the_anisotropic_second_moment() {
        let s = ScatteringMatrix::<f64>::new([0.0, 1.0, 1.0, 1.0]);
        let v = s.eigenvectors.column(3);
        for (x, e) in v.iter().zip([0.5, -0.5, 0.5, -0.5]) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn omega_matrix_properties() {
        let model = TransportModel::<f64>::new(0.05).unwrap();
        for u in [(0.0, 0.0), (0.1, 0.0), (0.03, -0.08)] {
            let om = model.omega_matrix(u);
            let feq = model.equilibrium(1.7, u);
            assert!((om * feq).amax() < 1e-14);
            assert!((Vector4::repeat(1.0).transpose() * om).amax() < 1e-14);
        }
        let om = model.omega_matrix((0.0, 0.0));
        assert!((om + model.scattering_matrix().a).amax() < 1e-15);
        let mut eig: Vec<f64> = (-om).symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, x) in eig.iter().zip([0.0, 1.0, 5.0 / 3.0, 5.0 / 3.0]) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn anisotropic_rates() {
        let m = TransportModel::<f64>::new(0.05)
            .unwrap()
            .with_anisotropy(0.02, 0.1)
            .unwrap();
        let r = m.rates();
        assert!((TransportModel::diffusivity_for(r[1]) - 0.02).abs() < 1e-15);
        assert!((TransportModel::diffusivity_for(r[2]) - 0.1).abs() < 1e-15);
        assert!(TransportModel::<f64>::new(-1.0).is_err());
        assert!(m.with_omega4(2.5).is_err());
    }

    #[test]
    fn couette_profiles() {
        let c = VelocityField::<f64>::Couette {
            u0: 0.01,
            profile: CouetteProfile::Centered,
        };
        assert_eq!(c.at(32, 64), (0.0, 0.0));
        assert!((c.at(48, 64).0 - 0.005).abs() < 1e-16);
        assert!((c.at(0, 64).0 + 0.01).abs() < 1e-16);
        let r = VelocityField::<f64>::Couette {
            u0: 0.01,
            profile: CouetteProfile::Raw,
        };
        assert!((r.at(10, 64).0 - 0.1).abs() < 1e-16);
    }
}
