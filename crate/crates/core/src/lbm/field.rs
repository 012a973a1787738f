use nalgebra::{Matrix4, Vector4};

use super::model::{equilibrium, TransportModel, VELOCITIES};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Distribution `f_i(x, y)` on a periodic `nx × ny` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField<T: Real> {
    nx: usize,
    ny: usize,
    f: Vec<T>,
}

impl<T: Real> LatticeField<T> {
    pub fn zeros(nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need at least 2x2 sites, got {nx}x{ny}"),
            });
        }
        Ok(Self {
            nx,
            ny,
            f: vec![T::zero(); 4 * nx * ny],
        })
    }

    /// Local equilibrium of the density `rho(x, y)` under the model velocity.
    pub fn from_density(
        nx: usize,
        ny: usize,
        model: &TransportModel<T>,
        rho: impl Fn(usize, usize) -> T,
    ) -> Result<Self> {
        let mut field = Self::zeros(nx, ny)?;
        for x in 0..nx {
            for y in 0..ny {
                let feq = equilibrium(rho(x, y), model.velocity().at(y, ny));
                field.set_site(x, y, &feq);
            }
        }
        Ok(field)
    }

    pub fn uniform(nx: usize, ny: usize, model: &TransportModel<T>, rho: T) -> Result<Self> {
        Self::from_density(nx, ny, model, |_, _| rho)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    fn idx(&self, i: usize, x: usize, y: usize) -> usize {
        (i * self.nx + x) * self.ny + y
    }

    pub fn get(&self, i: usize, x: usize, y: usize) -> T {
        self.f[self.idx(i, x, y)]
    }

    pub fn set(&mut self, i: usize, x: usize, y: usize, value: T) {
        let k = self.idx(i, x, y);
        self.f[k] = value;
    }

    pub fn site(&self, x: usize, y: usize) -> Vector4<T> {
        Vector4::from_fn(|i, _| self.get(i, x, y))
    }

    pub fn set_site(&mut self, x: usize, y: usize, f: &Vector4<T>) {
        for i in 0..4 {
            self.set(i, x, y, f[i]);
        }
    }

    pub fn density(&self, x: usize, y: usize) -> T {
        (0..4).fold(T::zero(), |acc, i| acc + self.get(i, x, y))
    }

    /// `ρ` in row-major `(x, y)` order.
    pub fn density_map(&self) -> Vec<T> {
        let mut rho = Vec::with_capacity(self.nx * self.ny);
        for x in 0..self.nx {
            for y in 0..self.ny {
                rho.push(self.density(x, y));
            }
        }
        rho
    }

    pub fn mass(&self) -> T {
        self.f.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn max_abs(&self) -> T {
        self.f.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn min_value(&self) -> T {
        self.f
            .iter()
            .fold(T::max_value().unwrap(), |acc, &v| acc.min(v))
    }
}

/// Reusable stream-and-collide kernel for one model and grid.
pub struct Stepper<T: Real> {
    a: Matrix4<T>,
    row_velocity: Vec<(T, T)>,
    scratch: Vec<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new(model: &TransportModel<T>, nx: usize, ny: usize) -> Self {
        Self {
            a: model.scattering_matrix().a,
            row_velocity: (0..ny).map(|y| model.velocity().at(y, ny)).collect(),
            scratch: vec![T::zero(); 4 * nx * ny],
        }
    }

    /// Streams every component one site along its velocity (periodic), then
    /// collides `f ← f - A (f - f_eq)`.
    pub fn advance(&mut self, field: &mut LatticeField<T>) {
        let (nx, ny) = (field.nx, field.ny);
        for (i, &(cx, cy)) in VELOCITIES.iter().enumerate() {
            for x in 0..nx {
                let xs = (x + nx).wrapping_add_signed(-cx as isize) % nx;
                for y in 0..ny {
                    let ys = (y + ny).wrapping_add_signed(-cy as isize) % ny;
                    self.scratch[(i * nx + x) * ny + y] = field.f[(i * nx + xs) * ny + ys];
                }
            }
        }
        std::mem::swap(&mut field.f, &mut self.scratch);
        for x in 0..nx {
            for y in 0..ny {
                let f = field.site(x, y);
                let feq = equilibrium(f.sum(), self.row_velocity[y]);
                let post = f - self.a * (f - feq);
                field.set_site(x, y, &post);
            }
        }
    }
}

/// One lattice-Boltzmann iteration.
pub fn step<T: Real>(field: &LatticeField<T>, model: &TransportModel<T>) -> LatticeField<T> {
    let mut next = field.clone();
    Stepper::new(model, field.nx, field.ny).advance(&mut next);
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbm::model::{CouetteProfile, VelocityField};

    #[test]
    fn uniform_equilibrium_is_a_fixed_point() {
        let model = TransportModel::new(0.05)
            .unwrap()
            .with_velocity(VelocityField::Constant { ux: 0.1, uy: -0.05 });
        let f0 = LatticeField::<f64>::uniform(8, 6, &model, 1.3).unwrap();
        let f1 = step(&f0, &model);
        let diff =
            f0.f.iter()
                .zip(&f1.f)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff <= 1e-12);
        let rest = TransportModel::new(0.05).unwrap();
        let g0 = LatticeField::<f64>::uniform(5, 5, &rest, 1.0).unwrap();
        assert_eq!(step(&g0, &rest), g0);
    }

    #[test]
    fn collisionless_pulse_streams_one_site() {
        let model = TransportModel::new(0.05)
            .unwrap()
            .with_rates([0.0; 4])
            .unwrap();
        let mut f = LatticeField::<f64>::zeros(7, 7).unwrap();
        for i in 0..4 {
            f.set(i, 3, 3, (i + 1) as f64);
        }
        let g = step(&f, &model);
        for (i, &(cx, cy)) in VELOCITIES.iter().enumerate() {
            let x = (3 + cx) as usize;
            let y = (3 + cy) as usize;
            assert_eq!(g.get(i, x, y), (i + 1) as f64);
        }
        assert_eq!(g.mass(), 10.0);
    }

    #[test]
    fn streaming_wraps_periodically() {
        let model = TransportModel::new(0.05)
            .unwrap()
            .with_rates([0.0; 4])
            .unwrap();
        let mut f = LatticeField::<f64>::zeros(4, 3).unwrap();
        f.set(0, 3, 0, 1.0);
        f.set(3, 0, 0, 2.0);
        let g = step(&f, &model);
        assert_eq!(g.get(0, 0, 0), 1.0);
        assert_eq!(g.get(3, 0, 2), 2.0);
    }

    #[test]
    fn mass_is_conserved_under_shear() {
        let model = TransportModel::new(0.05)
            .unwrap()
            .with_velocity(VelocityField::Couette {
                u0: 0.05,
                profile: CouetteProfile::Centered,
            });
        let mut f = LatticeField::<f64>::from_density(16, 16, &model, |x, y| {
            1.0 + ((x * 7 + y * 3) % 5) as f64 * 0.1
        })
        .unwrap();
        let m0 = f.mass();
        let mut stepper = Stepper::new(&model, 16, 16);
        for _ in 0..200 {
            stepper.advance(&mut f);
        }
        assert!((f.mass() - m0).abs() < 1e-11);
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(LatticeField::<f64>::zeros(1, 5).is_err());
    }
}
