//! Small dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> CMatrix {
    CMatrix::from_fn(N, N, |i, j| Complex64::new(rows[i][j], 0.0))
}

/// Kronecker product `a ⊗ b`; `a` acts on the more significant bits.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Frobenius norm of `m·m† − I`.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m * m.adjoint() - identity(m.nrows())).norm()
}

/// Largest entrywise absolute difference between two equally shaped matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "matrix shapes differ");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `exp(−i·h·dt)` for Hermitian `h`, through its eigendecomposition.
///
/// Callers are responsible for passing a Hermitian matrix.
pub fn expm_hermitian(h: &CMatrix, dt: f64) -> CMatrix {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|lambda| (-I * lambda * dt).exp()));
    v * phases * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Truncated Taylor series with scaling and squaring; independent of the
    // eigendecomposition path.
    fn expm_taylor(a: &CMatrix) -> CMatrix {
        let norm = a.norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
        let mut term = identity(a.nrows());
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &scaled / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn expm_matches_taylor_series() {
        let h = CMatrix::from_fn(4, 4, |i, j| {
            let re = ((i * 7 + j * 3) % 5) as f64 * 0.3;
            let im = if i == j { 0.0 } else { 0.2 * (i as f64 - j as f64) };
            Complex64::new(re, im)
        });
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        assert!(hermiticity_error(&h) < 1e-15);
        for dt in [0.01, 0.3, 2.0] {
            let u = expm_hermitian(&h, dt);
            let reference = expm_taylor(&(h.clone() * (-I * dt)));
            assert!(max_abs_diff(&u, &reference) < 1e-11, "dt={dt}");
            assert!(unitarity_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn expm_of_diagonal_is_phase() {
        let h = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE * 0.5, ONE * 1.5]));
        let u = expm_hermitian(&h, 2.0);
        assert!((u[(0, 0)] - (-I * 1.0).exp()).norm() < 1e-14);
        assert!((u[(1, 1)] - (-I * 3.0).exp()).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn kron_puts_first_factor_on_high_bit() {
        let x = from_real_rows([[0.0, 1.0], [1.0, 0.0]]);
        let id = identity(2);
        let x_high = kron(&x, &id);
        // X on the high qubit maps |00> (index 0) to |10> (index 2).
        assert_eq!(x_high[(2, 0)], ONE);
        assert_eq!(x_high[(1, 0)], ZERO);
    }
}
