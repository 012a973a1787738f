//! Dense complex linear-algebra helpers on top of nalgebra.

use std::cmp::Ordering;

use nalgebra::{ComplexField, DMatrix, DVector, Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

pub type CMatrix<T> = DMatrix<C<T>>;
pub type CVector<T> = DVector<C<T>>;

pub fn to_complex<T: Real>(m: &DMatrix<T>) -> CMatrix<T> {
    m.map(cr)
}

/// Largest entry modulus.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

pub fn max_abs_real<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut sv: Vec<T> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    sv
}

/// Largest singular value.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

pub fn condition_number<T: Real>(m: &CMatrix<T>) -> T {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
        _ => T::max_value().unwrap_or_else(|| T::lit(f64::MAX)),
    }
}

pub fn commutator<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a * b - b * a
}

/// `max |U†U - I|`.
pub fn unitarity_residual<T: Real>(u: &CMatrix<T>) -> T {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::<T>::identity(n, n)))
}

/// `max |AA† - A†A|` relative to `max |A|²`.
pub fn normality_defect<T: Real>(a: &CMatrix<T>) -> T {
    let scale = max_abs(a);
    if scale == T::zero() {
        return T::zero();
    }
    max_abs(&(a * a.adjoint() - a.adjoint() * a)) / (scale * scale)
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::<T>::identity(n, n)
}

/// Matrix exponential (Padé with scaling and squaring).
pub fn expm<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.exp()
}

pub fn expm_real<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    m.exp()
}

fn cmp_complex<T: Real>(a: &C<T>, b: &C<T>) -> Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen_sorted<T: Real>(m: &DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Eigendecomposition of a general complex matrix `M = V diag(λ) V⁻¹`.
///
/// Eigenvalues come out sorted by real part, then imaginary part; columns of
/// `V` have unit 2-norm. Eigenvectors are obtained from the complex Schur
/// form by back-substitution; within numerically degenerate clusters the
/// free coordinates are set to zero, which yields a valid eigenbasis whenever
/// the matrix is diagonalizable. Callers must check the residual and the
/// conditioning of `V`.
pub fn general_eigen<T: Real>(m: &CMatrix<T>) -> Result<(Vec<C<T>>, CMatrix<T>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    // Degenerate non-normal clusters may never deflate at machine precision;
    // retry with slightly looser deflation thresholds.
    let (q, t) = [32.0, 512.0, 4096.0]
        .iter()
        .find_map(|&k| Schur::try_new(m.clone(), T::default_epsilon() * T::lit(k), 10_000))
        .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?
        .unpack();
    let scale = max_abs(&t).max(T::one());
    let cluster = T::default_epsilon() * T::lit(1e3) * scale;

    let mut y = CMatrix::<T>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = cr(T::one());
        for i in (0..k).rev() {
            let mut acc = C::<T>::new(T::zero(), T::zero());
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let denom = t[(i, i)] - lambda;
            y[(i, k)] = if denom.modulus() <= cluster {
                cr(T::zero())
            } else {
                -acc / denom
            };
        }
    }
    let mut v = q * y;
    for mut col in v.column_iter_mut() {
        let norm = col.norm();
        if norm > T::zero() {
            col /= cr(norm);
        }
    }
    let values: Vec<C<T>> = (0..n).map(|k| t[(k, k)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| cmp_complex(&values[i], &values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok((sorted_values, sorted_vectors))
}

/// `max |M V - V diag(λ)|`.
pub fn eigen_residual<T: Real>(m: &CMatrix<T>, values: &[C<T>], vectors: &CMatrix<T>) -> T {
    let d = CMatrix::from_diagonal(&CVector::from_column_slice(values));
    max_abs(&(m * vectors - vectors * d))
}

/// Inverse of an eigenbasis; the adjoint when the basis is unitary.
pub fn basis_inverse<T: Real>(v: &CMatrix<T>) -> Result<CMatrix<T>> {
    if unitarity_residual(v) <= T::tol(1e-12) {
        return Ok(v.adjoint());
    }
    v.clone()
        .try_inverse()
        .ok_or_else(|| Error::Eigen("eigenbasis is singular".into()))
}
