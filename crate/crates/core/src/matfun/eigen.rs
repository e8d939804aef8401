//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-8;

/// Spectral decomposition `m = Q diag(λ) Q†` with ascending `λ`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `Q diag(f(λ)) Q†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in fl.iter().enumerate() {
            if w.re == 0.0 && w.im == 0.0 {
                continue;
            }
            for i in 0..n {
                let qi = q[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += qi * q[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `Q diag(f(λ)) Q†` for a real-valued `f`; the result is exactly Hermitian.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.map(|l| Complex64::new(f(l), 0.0)).hermitian_part()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_real(|l| l)
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_ascending(self.eigenvalues.clone())
    }
}

/// Eigenvalues listed both increasing and decreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub ascending: Vec<f64>,
    pub descending: Vec<f64>,
}

impl Spectrum {
    pub fn from_ascending(ascending: Vec<f64>) -> Self {
        let descending = ascending.iter().rev().copied().collect();
        Self {
            ascending,
            descending,
        }
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is symmetrized before iterating. Eigenvalues come back ascending;
/// each eigenvector has its first non-negligible component real and positive,
/// which also orders exactly degenerate eigenpairs.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let norm = m.hs_norm();
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }

    let target = OFF_DIAGONAL_TOL * norm;
    let mut converged = false;
    let mut off = off_diagonal_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }
    if !converged && off > target {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off,
        });
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| lex_cmp(&x.1, &y.1)));

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(m)?.eigenvalues)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with `A ← G† A G`, `V ← V G`, where
/// `G = D R`: `D` moves the phase of `a[p][q]` onto row/column `q` and `R` is a
/// real Givens rotation diagonalizing the resulting real 2×2 block.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let e = phase.conj(); // e^{-iφ}
    let n = a.dim();

    // columns: B = A G
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * c - arq * e * s;
        a[(r, q)] = arp * s + arq * e * c;
    }
    // rows: A' = G† B
    let ec = phase;
    for col in 0..n {
        let bp = a[(p, col)];
        let bq = a[(q, col)];
        a[(p, col)] = bp * c - bq * ec * s;
        a[(q, col)] = bp * s + bq * ec * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * c - vrq * e * s;
        v[(r, q)] = vrp * s + vrq * e * c;
    }
}

fn fix_phase(col: &mut [Complex64]) {
    if let Some(first) = col.iter().find(|z| z.norm() > 1e-12) {
        let ph = first.conj() / first.norm();
        for z in col.iter_mut() {
            *z *= ph;
        }
    }
}

fn lex_cmp(x: &[Complex64], y: &[Complex64]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        let o = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}
