use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::expm_real;
use crate::scalar::Real;

/// Ladder operators of one bosonic mode truncated to `cutoff` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAlgebra<T: Real> {
    cutoff: usize,
    lowering: DMatrix<T>,
}

impl<T: Real> ModeAlgebra<T> {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                reason: format!("need at least 2 Fock levels, got {cutoff}"),
            });
        }
        let lowering = DMatrix::from_fn(cutoff, cutoff, |r, c| {
            if c == r + 1 {
                T::from_count(c).sqrt()
            } else {
                T::zero()
            }
        });
        Ok(Self { cutoff, lowering })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `⟨n|a|n+1⟩ = √(n+1)`.
    pub fn lowering(&self) -> &DMatrix<T> {
        &self.lowering
    }

    pub fn raising(&self) -> DMatrix<T> {
        self.lowering.transpose()
    }

    /// `x̂ = (a + a†)/√2`.
    pub fn position(&self) -> DMatrix<T> {
        (&self.lowering + self.raising()) / T::lit(2.0).sqrt()
    }

    /// `a† - a`, the anti-Hermitian displacement generator.
    pub fn displacement_generator(&self) -> DMatrix<T> {
        self.raising() - &self.lowering
    }

    /// `exp(θ (a† - a))` on the truncated space (real orthogonal).
    pub fn displacement(&self, theta: T) -> DMatrix<T> {
        expm_real(&(self.displacement_generator() * theta))
    }

    /// `[a, a†]`; equals the identity except at the last level, where the
    /// truncation leaves `1 - N`.
    pub fn commutator(&self) -> DMatrix<T> {
        let ad = self.raising();
        &self.lowering * &ad - &ad * &self.lowering
    }
}

/// Hermite functions `ψ_0(x) .. ψ_{n-1}(x)` of the `x̂ = (a + a†)/√2`
/// convention, by the stable three-term recurrence.
pub fn hermite_functions<T: Real>(x: T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let psi0 = T::pi().powf(T::lit(-0.25)) * (-x * x * T::lit(0.5)).exp();
    out.push(psi0);
    if n == 1 {
        return out;
    }
    out.push(T::lit(2.0).sqrt() * x * psi0);
    for k in 1..n - 1 {
        let kf = T::from_count(k);
        let next = (T::lit(2.0) / (kf + T::one())).sqrt() * x * out[k]
            - (kf / (kf + T::one())).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Fock coefficients `c_n = ∫ ψ_n(x) g(x) dx` of the normalized real Gaussian
/// `g(x) ∝ exp(-(x - x₀)² / (4σ²))` (so `|g|²` has standard deviation `σ`),
/// for `n < levels`, together with the norm left beyond the truncation.
///
/// At `σ = 1/√2` this is the coherent state of amplitude `x₀/√2`.
pub fn gaussian_fock_coefficients(center: f64, sigma: f64, levels: usize) -> (Vec<f64>, f64) {
    let half = 14.0 * sigma;
    let h = (sigma / 20.0).min(0.02);
    let points = (2.0 * half / h).ceil() as usize + 1;
    let h = 2.0 * half / (points - 1) as f64;
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    let mut coeffs = vec![0.0; levels];
    for k in 0..points {
        let x = center - half + k as f64 * h;
        let weight = if k == 0 || k == points - 1 { 0.5 } else { 1.0 };
        let g = norm * (-(x - center).powi(2) / (4.0 * sigma * sigma)).exp();
        for (c, psi) in coeffs.iter_mut().zip(hermite_functions(x, levels)) {
            *c += weight * h * g * psi;
        }
    }
    let kept: f64 = coeffs.iter().map(|c| c * c).sum();
    (coeffs, (1.0 - kept).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coherent(alpha: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut term = (-alpha * alpha / 2.0).exp();
        for k in 0..n {
            out.push(term);
            term *= alpha / ((k + 1) as f64).sqrt();
        }
        out
    }

    #[test]
    fn ladder_matrix_elements() {
        let m = ModeAlgebra::<f64>::new(6).unwrap();
        for n in 0..5 {
            assert!((m.lowering()[(n, n + 1)] - ((n + 1) as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn truncated_commutator_artifact_is_localized() {
        let n = 10;
        let m = ModeAlgebra::<f64>::new(n).unwrap();
        let comm = m.commutator();
        let defect = comm.view((0, 0), (n - 1, n - 1)) - DMatrix::<f64>::identity(n - 1, n - 1);
        assert!(defect.amax() <= 1e-14);
        assert!((comm[(n - 1, n - 1)] - (1.0 - n as f64)).abs() < 1e-14);
    }

    #[test]
    fn displacement_is_orthogonal_and_shifts_vacuum() {
        let m = ModeAlgebra::<f64>::new(32).unwrap();
        let d = m.displacement(0.5);
        assert!((d.transpose() * &d - DMatrix::identity(32, 32)).amax() < 1e-12);
        let psi = d.column(0);
        let mean = (psi.transpose() * m.position() * psi)[(0, 0)];
        assert!((mean - 0.5 * 2f64.sqrt()).abs() < 1e-12);
        for (a, b) in psi.iter().zip(coherent(0.5, 32)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_ground_state_value() {
        let psi = hermite_functions(0.0f64, 3);
        assert!((psi[0] - 0.751126).abs() < 1e-6);
        assert!(psi[1].abs() < 1e-16);
        // ψ₂(0) = -π^{-1/4}/√2
        assert!((psi[2] + std::f64::consts::PI.powf(-0.25) / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let (n, h) = (12, 0.01);
        let mut gram = DMatrix::<f64>::zeros(n, n);
        let mut x = -15.0;
        while x <= 15.0 {
            let psi = hermite_functions(x, n);
            for i in 0..n {
                for j in 0..n {
                    gram[(i, j)] += h * psi[i] * psi[j];
                }
            }
            x += h;
        }
        assert!((gram - DMatrix::identity(n, n)).amax() < 1e-10);
    }

    #[test]
    fn vacuum_width_gives_coherent_state() {
        let alpha0 = 1.3;
        let (c, tail) =
            gaussian_fock_coefficients(2f64.sqrt() * alpha0, std::f64::consts::FRAC_1_SQRT_2, 32);
        for (a, b) in c.iter().zip(coherent(alpha0, 32)) {
            assert!((a - b).abs() < 1e-12);
        }
        // Poisson photon statistics
        let mut p = (-alpha0 * alpha0).exp();
        for (n, ck) in c.iter().enumerate().take(10) {
            assert!((ck * ck - p).abs() < 1e-12);
            p *= alpha0 * alpha0 / (n + 1) as f64;
        }
        assert!(tail < 1e-12);
    }

    #[test]
    fn wide_packets_leak_at_small_cutoff() {
        let (_, tail) = gaussian_fock_coefficients(4.0, 2.0, 8);
        assert!(tail > 1e-3);
        let (_, tail) = gaussian_fock_coefficients(0.0, 1.0, 48);
        assert!(tail < 1e-10);
    }
}
