//! Random states, unitaries and channels.
//!
//! Every sampler takes an explicit generator. Streams are ChaCha8 keyed by a
//! 64-bit seed; [`seed_stream`] selects an independent substream per worker or
//! per sample, so results do not depend on evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::matfun::ComplexMatrix;

use super::{ClassicalJoint, DensityMatrix, Dims, MarkovBlock, MarkovSpec};

pub type SeedStream = ChaCha8Rng;

/// Substream `stream` of the generator keyed by `seed`.
pub fn seed_stream(seed: u64, stream: u64) -> SeedStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// `GG†/Tr(GG†)`: Hilbert–Schmidt distributed, full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace_re();
    DensityMatrix::validate(&w.scale(1.0 / tr)).expect("normalized Wishart matrix is a state")
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(d, d, rng).hermitian_part()
}

/// Orthonormalizes the columns of `m` with two passes of modified Gram–Schmidt.
/// The triangular factor has a positive real diagonal, so a Ginibre input
/// yields a Haar-distributed isometry.
fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    for j in 0..cols {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..rows).map(|i| q[k][i].conj() * q[j][i]).sum();
                for i in 0..rows {
                    let qk = q[k][i];
                    q[j][i] -= proj * qk;
                }
            }
        }
        let norm = q[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in q[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

/// Haar-random `d × d` unitary.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    orthonormalize_columns(&ginibre(d, d, rng))
}

/// Haar-random isometry `C^cols → C^rows` (`rows ≥ cols`).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    orthonormalize_columns(&ginibre(rows, cols, rng))
}

/// Flat Dirichlet sample on the simplex of joint distributions.
pub fn random_joint<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> ClassicalJoint {
    let raw: Vec<f64> = (0..dims.total()).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    // absorb the rounding residue so the 1e-12 normalization check always passes
    let residue = 1.0 - p.iter().sum::<f64>();
    let imax = (0..p.len()).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0);
    p[imax] += residue;
    ClassicalJoint::new(dims, p).expect("normalized Dirichlet sample")
}

/// Random Markov block structure on `dB`: a random composition of `dB` into
/// block sizes, each factored as `dL·dR` over a random divisor, with
/// Hilbert–Schmidt random block states and flat-Dirichlet weights.
pub fn random_markov_spec<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> MarkovSpec {
    let mut remaining = dims.b;
    let mut shapes = Vec::new();
    while remaining > 0 {
        let size = rng.random_range(1..=remaining);
        let divisors: Vec<usize> = (1..=size).filter(|d| size % d == 0).collect();
        let dl = divisors[rng.random_range(0..divisors.len())];
        shapes.push((dl, size / dl));
        remaining -= size;
    }
    let raw: Vec<f64> = shapes.iter().map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let blocks = shapes
        .into_iter()
        .zip(raw)
        .map(|((dl, dr), w)| MarkovBlock {
            p: w / total,
            d_left: dl,
            d_right: dr,
            rho_al: random_density(dims.a * dl, rng),
            rho_rc: random_density(dr * dims.c, rng),
        })
        .collect();
    MarkovSpec {
        d_a: dims.a,
        d_c: dims.c,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_has_unit_trace() {
        let mut rng = seed_stream(7, 0);
        for d in 1..6 {
            let r = random_density(d, &mut rng);
            assert!((r.matrix().trace_re() - 1.0).abs() < 1e-14);
            assert!(r.is_full_rank());
        }
    }

    #[test]
    fn same_seed_same_bits() {
        let a = random_density(4, &mut seed_stream(11, 3));
        let b = random_density(4, &mut seed_stream(11, 3));
        assert_eq!(a.matrix(), b.matrix());
        let c = random_density(4, &mut seed_stream(11, 4));
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seed_stream(1, 0);
        for d in 1..7 {
            let u = random_unitary(d, &mut rng);
            let uu = &u.adjoint() * &u;
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
        }
        let u1 = random_unitary(1, &mut rng);
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn isometry_columns_orthonormal() {
        let v = random_isometry(6, 2, &mut seed_stream(5, 0));
        let vv = &v.adjoint() * &v;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn markov_spec_covers_b() {
        let mut rng = seed_stream(9, 0);
        for db in 1..6 {
            let spec = random_markov_spec(Dims::new(2, db, 2).unwrap(), &mut rng);
            assert_eq!(spec.d_b(), db);
            spec.check().unwrap();
        }
    }
}
