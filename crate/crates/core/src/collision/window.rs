use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Interval `[lower, upper]` of weights `γ` for which every eigenvalue of `C`
/// splits into two unit-modulus numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaWindow<T: Real> {
    lower: T,
    upper: T,
}

impl<T: Real> GammaWindow<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if !(lower >= T::zero() && upper > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: format!(
                    "bounds [{}, {}] must be non-negative",
                    lower.as_f64(),
                    upper.as_f64()
                ),
            });
        }
        if lower > upper {
            return Err(Error::InfeasibleWindow {
                lower: lower.as_f64(),
                upper: upper.as_f64(),
            });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn contains(&self, gamma: T) -> bool {
        gamma >= self.lower && gamma <= self.upper
    }

    /// Smallest admissible weight; the failure probability grows with `γ`.
    pub fn optimal(&self) -> T {
        self.lower
    }
}

/// Intersection over all eigenvalues of `|δ_i - 1| ≤ γ ≤ 1 + δ_i`.
pub fn gamma_window<T: Real>(spectrum: &[T]) -> Result<GammaWindow<T>> {
    if let Some((index, &value)) = spectrum.iter().enumerate().find(|(_, &d)| !(d > T::zero())) {
        return Err(Error::NonPositiveSpectrum {
            index,
            value: value.as_f64(),
        });
    }
    window_from_moduli(spectrum.iter().copied())
}

/// Window for a complex spectrum: `|1 - γ| ≤ |δ_i| ≤ 1 + γ` for all `i`.
pub fn gamma_window_complex<T: Real>(spectrum: &[C<T>]) -> Result<GammaWindow<T>> {
    if let Some((index, value)) = spectrum
        .iter()
        .enumerate()
        .find(|(_, d)| !(d.modulus() > T::zero()))
    {
        return Err(Error::NonPositiveSpectrum {
            index,
            value: value.modulus().as_f64(),
        });
    }
    window_from_moduli(spectrum.iter().map(|d| d.modulus()))
}

fn window_from_moduli<T: Real>(moduli: impl Iterator<Item = T>) -> Result<GammaWindow<T>> {
    let (lower, upper) = moduli.fold((T::zero(), T::max_value().unwrap()), |(lo, hi), d| {
        (lo.max((d - T::one()).abs()), hi.min(T::one() + d))
    });
    GammaWindow::new(lower, upper)
}

pub fn optimal_gamma<T: Real>(window: &GammaWindow<T>) -> T {
    window.optimal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn identity_spectrum_window() {
        let w = gamma_window(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!((w.lower(), w.upper()), (0.0, 2.0));
        assert_eq!(optimal_gamma(&w), 0.0);
    }

    #[test]
    fn advection_diffusion_window_at_dt_06() {
        let e1 = (-1.0f64).exp();
        let w = gamma_window(&[e1, e1, (-0.6f64).exp(), 1.0]).unwrap();
        assert!((w.lower() - 0.632121).abs() < 5e-7);
        assert!((w.upper() - 1.367879).abs() < 5e-7);
        assert!((optimal_gamma(&w) - 0.632121).abs() < 5e-7);
    }

    #[test]
    fn wide_spectrum_is_infeasible() {
        match gamma_window(&[0.1, 3.5]) {
            Err(Error::InfeasibleWindow { lower, upper }) => {
                assert!((lower - 2.5).abs() < 1e-15 && (upper - 1.1).abs() < 1e-15);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_window_and_bad_spectrum() {
        let w = GammaWindow::new(0.5, 0.5).unwrap();
        assert_eq!(optimal_gamma(&w), 0.5);
        assert!(matches!(
            gamma_window(&[1.0, 0.0]),
            Err(Error::NonPositiveSpectrum { index: 1, .. })
        ));
        assert!(matches!(
            gamma_window(&[-0.2, 1.0]),
            Err(Error::NonPositiveSpectrum { index: 0, .. })
        ));
    }

    #[test]
    fn complex_window_uses_moduli() {
        let w = gamma_window_complex(&[c(0.0, 0.8), c(0.6, 0.0)]).unwrap();
        assert!((w.lower() - 0.4).abs() < 1e-15);
        assert!((w.upper() - 1.6).abs() < 1e-15);
    }
}
