use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::linalg::{
    condition_number, eigen_residual, expm_real, general_eigen, max_abs, max_abs_real,
    normality_defect, symmetric_eigen_sorted, to_complex, CMatrix,
};
use crate::scalar::{cr, Real, C};

/// Real symmetric collision generator `M`, with `Ω = iM` and `C = exp(M Δt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix<T: Real> {
    m: DMatrix<T>,
}

impl<T: Real> GeneratorMatrix<T> {
    pub fn new(m: DMatrix<T>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows < 2 {
            return Err(Error::DimensionTooSmall(rows));
        }
        let asym = max_abs_real(&(&m - m.transpose()));
        if !(asym <= T::tol(1e-12)) {
            return Err(Error::NotSymmetric(asym.as_f64()));
        }
        let m = (&m + m.transpose()) * T::lit(0.5);
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(dim, dim))
    }

    pub fn from_row_slice(dim: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                cols: entries.len() / dim.max(1),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.m
    }
}

/// `C = exp(M Δt)` together with its eigendecomposition `C V = V diag(δ)`.
#[derive(Debug, Clone)]
pub struct CollisionOperator<T: Real> {
    entries: CMatrix<T>,
    spectrum: Vec<C<T>>,
    eigenbasis: CMatrix<T>,
    dt: T,
}

impl<T: Real> CollisionOperator<T> {
    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    /// Eigenvalues, ascending by real part then imaginary part.
    pub fn spectrum(&self) -> &[C<T>] {
        &self.spectrum
    }

    /// The spectrum as reals when every imaginary part is negligible.
    pub fn real_spectrum(&self) -> Option<Vec<T>> {
        let tol = T::tol(1e-12);
        self.spectrum
            .iter()
            .map(|z| (z.im.abs() <= tol * z.re.abs().max(T::one())).then_some(z.re))
            .collect()
    }

    pub fn eigenbasis(&self) -> &CMatrix<T> {
        &self.eigenbasis
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_normal(&self) -> bool {
        normality_defect(&self.entries) <= T::tol(1e-12)
    }

    /// `max |C V - V diag(δ)|`.
    pub fn eigen_residual(&self) -> T {
        eigen_residual(&self.entries, &self.spectrum, &self.eigenbasis)
    }

    /// Wraps an arbitrary diagonalizable matrix.
    pub fn from_matrix(entries: CMatrix<T>, dt: T) -> Result<Self> {
        check_dt(dt)?;
        let (spectrum, eigenbasis) = general_eigen(&entries)?;
        let op = Self {
            entries,
            spectrum,
            eigenbasis,
            dt,
        };
        op.check_basis()?;
        Ok(op)
    }

    fn check_basis(&self) -> Result<()> {
        let cond = condition_number(&self.eigenbasis);
        if !(cond < T::lit(1e8)) {
            return Err(Error::IllConditioned(cond.as_f64()));
        }
        let scale = max_abs(&self.entries).max(T::one());
        let res = self.eigen_residual();
        if !(res <= T::tol(1e-10) * scale) {
            return Err(Error::Eigen(format!(
                "eigenpair residual {:e} exceeds tolerance",
                res.as_f64()
            )));
        }
        Ok(())
    }
}

fn check_dt<T: Real>(dt: T) -> Result<()> {
    if dt.is_finite() && dt >= T::zero() {
        Ok(())
    } else {
        Err(Error::NegativeTimeStep(dt.as_f64()))
    }
}

/// `C = exp(M Δt)` through the symmetric eigendecomposition of `M`.
pub fn build_collision<T: Real>(gen: &GeneratorMatrix<T>, dt: T) -> Result<CollisionOperator<T>> {
    check_dt(dt)?;
    let (rates, basis) = symmetric_eigen_sorted(gen.matrix());
    let deltas: Vec<T> = rates.iter().map(|&l| (l * dt).exp()).collect();
    let n = gen.dim();
    let scaled = DMatrix::from_fn(n, n, |r, k| basis[(r, k)] * deltas[k]);
    let entries = to_complex(&(scaled * basis.transpose()));
    Ok(CollisionOperator {
        entries,
        spectrum: deltas.into_iter().map(cr).collect(),
        eigenbasis: to_complex(&basis),
        dt,
    })
}

/// `C = exp(Ω Δt)` for a real, possibly non-symmetric generator.
///
/// The entries come from a Padé exponential; the spectrum and eigenbasis from
/// the eigendecomposition of the generator. The two routes are cross-checked
/// and the eigenbasis must have condition number below `1e8`.
pub fn build_collision_general<T: Real>(omega: &DMatrix<T>, dt: T) -> Result<CollisionOperator<T>> {
    check_dt(dt)?;
    let (rows, cols) = omega.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let entries = to_complex(&expm_real(&(omega * dt)));
    let (rates, basis) = general_eigen(&to_complex(omega))?;
    let deltas: Vec<C<T>> = rates.iter().map(|l| (l * cr(dt)).exp()).collect();
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (deltas[i], deltas[j]);
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let op = CollisionOperator {
        entries,
        spectrum: order.iter().map(|&i| deltas[i]).collect(),
        eigenbasis: CMatrix::from_fn(rows, rows, |r, k| basis[(r, order[k])]),
        dt,
    };
    op.check_basis()?;
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Truncated Taylor series, independent of the eigen route.
    fn taylor_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let mut term = DMatrix::<f64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..80 {
            term = &term * m / k as f64;
            sum += &term;
        }
        sum
    }

    #[test]
    fn zero_generator_gives_identity() {
        let gen = GeneratorMatrix::<f64>::zeros(4).unwrap();
        let c = build_collision(&gen, 0.7).unwrap();
        assert!(max_abs(&(c.entries() - CMatrix::identity(4, 4))) < 1e-15);
        assert!(c.spectrum().iter().all(|d| (d.re - 1.0).abs() < 1e-15));
    }

    #[test]
    fn advection_diffusion_rates_spectrum() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            0.0,
            -5.0 / 3.0,
            -5.0 / 3.0,
            -1.0,
        ]));
        let c = build_collision(&GeneratorMatrix::new(m).unwrap(), 0.6).unwrap();
        let s = c.real_spectrum().unwrap();
        let expected = [0.367879441171, 0.367879441171, 0.548811636094, 1.0];
        for (a, b) in s.iter().zip(expected) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn matches_taylor_oracle_on_random_generator() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                -0.8, 0.3, 0.1, -0.4, 0.3, 0.2, -0.6, 0.5, 0.1, -0.6, -1.1, 0.2, -0.4, 0.5, 0.2,
                0.7,
            ],
        );
        let c = build_collision(&GeneratorMatrix::new(m.clone()).unwrap(), 0.3).unwrap();
        let oracle = taylor_exp(&(m * 0.3));
        let diff = c.entries().map(|z| z.re) - &oracle;
        assert!(max_abs_real(&diff) < 1e-12);
        assert!(c.entries().iter().all(|z| z.im == 0.0));
        assert!(c.spectrum().iter().all(|d| d.re > 0.0));
        assert!(max_abs(&(c.entries() - c.entries().transpose())) < 1e-14);
        assert!(c.eigen_residual() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_and_negative_dt() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            GeneratorMatrix::<f64>::new(m),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            GeneratorMatrix::<f64>::new(DMatrix::zeros(1, 1)),
            Err(Error::DimensionTooSmall(1))
        ));
        let gen = GeneratorMatrix::<f64>::zeros(2).unwrap();
        assert!(matches!(
            build_collision(&gen, -0.1),
            Err(Error::NegativeTimeStep(_))
        ));
    }

    #[test]
    fn general_route_agrees_with_symmetric_route() {
        let m = DMatrix::from_row_slice(3, 3, &[-1.0, 0.2, 0.0, 0.2, -0.5, 0.1, 0.0, 0.1, -0.2]);
        let a = build_collision(&GeneratorMatrix::new(m.clone()).unwrap(), 1.3).unwrap();
        let b = build_collision_general(&m, 1.3).unwrap();
        assert!(max_abs(&(a.entries() - b.entries())) < 1e-12);
        for (x, y) in a.spectrum().iter().zip(b.spectrum()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn general_route_on_non_normal_generator() {
        let m = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.4, 0.0]);
        let c = build_collision_general(&m, 0.5).unwrap();
        assert!(!c.is_normal());
        assert!(c.eigen_residual() < 1e-12);
        let s = c.real_spectrum().unwrap();
        assert!((s[0] - (-0.5f64).exp()).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14);
    }
}
