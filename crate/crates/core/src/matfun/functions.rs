//! Spectral matrix functions and Schatten norms.

use num_complex::Complex64;

use super::eigen::{eig_hermitian, HermitianEigen};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Scalar function lifted to Hermitian matrices through the spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralFn {
    Log,
    Exp,
    Sqrt,
    /// Real power `λ^t`. Negative and zero exponents act on the support only.
    Power(f64),
    /// Imaginary power `λ^{it}`, unitary on the support and zero on the kernel.
    CPower(f64),
}

impl SpectralFn {
    fn needs_psd(self) -> bool {
        !matches!(self, SpectralFn::Exp)
    }
}

/// Eigenvalues at or below this are treated as kernel.
pub fn support_cutoff(max_eigenvalue: f64) -> f64 {
    (1e-10 * max_eigenvalue).max(1e-14)
}

impl HermitianEigen {
    pub fn cutoff(&self) -> f64 {
        support_cutoff(self.max_eigenvalue())
    }

    /// Number of eigenvalues above the support cutoff.
    pub fn rank(&self) -> usize {
        let tau = self.cutoff();
        self.eigenvalues.iter().filter(|&&l| l > tau).count()
    }

    /// Orthogonal projector onto the support.
    pub fn support_projector(&self) -> ComplexMatrix {
        let tau = self.cutoff();
        self.map_real(|l| if l > tau { 1.0 } else { 0.0 })
    }

    /// Applies `f` with the support convention; fails on negative spectrum for
    /// functions that need a PSD argument.
    pub fn apply(&self, f: SpectralFn) -> Result<ComplexMatrix> {
        let tau = self.cutoff();
        if f.needs_psd() && self.min_eigenvalue() < -tau {
            return Err(Error::NegativeEigenvalue(self.min_eigenvalue()));
        }
        let m = match f {
            SpectralFn::Exp => self.map_real(f64::exp),
            SpectralFn::Log => self.map_real(|l| if l > tau { l.ln() } else { 0.0 }),
            SpectralFn::Sqrt => self.map_real(|l| if l > tau { l.sqrt() } else { 0.0 }),
            SpectralFn::Power(t) => self.map_real(|l| if l > tau { l.powf(t) } else { 0.0 }),
            SpectralFn::CPower(t) => self.map(|l| {
                if l > tau {
                    Complex64::from_polar(1.0, t * l.ln())
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        };
        Ok(m)
    }
}

/// `f(m)` for Hermitian `m`.
pub fn mat_func(m: &ComplexMatrix, f: SpectralFn) -> Result<ComplexMatrix> {
    eig_hermitian(m)?.apply(f)
}

/// `|m| = Q|λ|Q†`.
pub fn abs_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(m)?.map_real(f64::abs))
}

/// Trace norm `Σ|λᵢ|` of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Frobenius (Schatten-2) norm.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.hs_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_func(&ComplexMatrix::zeros(3, 3), SpectralFn::Exp).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let s = mat_func(&ComplexMatrix::from_real_diag(&[4.0, 9.0]), SpectralFn::Sqrt).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn log_pins_kernel_to_zero() {
        let l = mat_func(&ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0]), SpectralFn::Log).unwrap();
        let ln2 = std::f64::consts::LN_2;
        let expected = ComplexMatrix::from_real_diag(&[-ln2, -ln2, 0.0]);
        assert!(l.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn negative_eigenvalue_rejected_for_log() {
        let m = ComplexMatrix::from_real_diag(&[0.5, -0.1]);
        assert!(matches!(mat_func(&m, SpectralFn::Log), Err(Error::NegativeEigenvalue(_))));
        assert!(mat_func(&m, SpectralFn::Exp).is_ok());
    }

    #[test]
    fn imaginary_power_is_partial_unitary() {
        let m = ComplexMatrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]]);
        let u = mat_func(&m, SpectralFn::CPower(1.7)).unwrap();
        let uu = &u * &u.adjoint();
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
        let zero = mat_func(&m, SpectralFn::CPower(0.0)).unwrap();
        assert!(zero.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);

        let singular = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let p = mat_func(&singular, SpectralFn::CPower(2.0)).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn negative_power_is_pseudo_inverse() {
        let m = ComplexMatrix::from_real_diag(&[4.0, 0.0]);
        let p = mat_func(&m, SpectralFn::Power(-0.5)).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.0])) < 1e-15);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::from_real_diag(&[0.25, -0.25])).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(2, 2)).unwrap(), 0.0);
        // parity distribution against the uniform distribution: Σ|p − 1/8|
        let p = [0.25, 0.0, 0.0, 0.25, 0.0, 0.25, 0.25, 0.0];
        let d: Vec<f64> = p.iter().map(|x| x - 0.125).collect();
        let oracle: f64 = d.iter().map(|x| x.abs()).sum();
        assert_eq!(oracle, 1.0);
        let tn = trace_norm(&ComplexMatrix::from_real_diag(&d)).unwrap();
        assert!((tn - oracle).abs() < 1e-15);
    }

    #[test]
    fn trace_norm_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn abs_value() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let a = abs_hermitian(&x).unwrap();
        assert!(a.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn cutoff_floor() {
        assert_eq!(support_cutoff(1.0), 1e-10);
        assert_eq!(support_cutoff(1e-6), 1e-14);
        assert_eq!(support_cutoff(0.0), 1e-14);
    }
}
