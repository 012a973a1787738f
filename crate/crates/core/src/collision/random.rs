use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::operator::{build_collision, GeneratorMatrix};
use super::window::gamma_window;
use crate::linalg::symmetric_eigen_sorted;
use crate::scalar::Real;

/// Symmetrized standard-Gaussian generator scaled to spectral radius 1, then
/// halved until `exp(M dt_max)` has a feasible weight window.
///
/// Generators with only non-positive rates are feasible at any `dt`; a
/// positive rate `λ_max` bounds the step by `e^{λ_max dt} - e^{λ_min dt} ≤ 2`.
pub fn random_symmetric_generator<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    dt_max: T,
) -> GeneratorMatrix<T> {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let sym = (&g + g.transpose()) * 0.5;
    let (rates, _) = symmetric_eigen_sorted(&sym);
    let radius = rates
        .iter()
        .fold(0.0f64, |acc, l| acc.max(l.abs()))
        .max(f64::MIN_POSITIVE);
    let mut m = (sym / radius).map(T::lit);
    loop {
        let gen = GeneratorMatrix::new(m.clone()).expect("symmetric by construction");
        let feasible = build_collision(&gen, dt_max)
            .ok()
            .and_then(|c| c.real_spectrum())
            .is_some_and(|s| gamma_window(&s).is_ok());
        if feasible {
            return gen;
        }
        m *= T::lit(0.5);
    }
}
