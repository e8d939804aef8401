//! Validated density matrices and tripartite structure.
//!
//! Composite indices follow `A ⊗ B ⊗ C`, row-major with `C` varying fastest.

mod classical;
pub mod io;
mod markov;
pub mod random;

use std::fmt;
use std::ops::BitOr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfun::{eig_hermitian, ComplexMatrix, HermitianEigen, SpectralFn};

pub use classical::{classical_state, ClassicalJoint};
pub use markov::{markov_state, MarkovBlock, MarkovSpec};

const HERMITIAN_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// A Hermitian, positive semi-definite, unit-trace matrix together with its
/// spectral decomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    eigen: HermitianEigen,
    support_rank: usize,
}

impl DensityMatrix {
    /// Symmetrizes `m` and checks it is a quantum state.
    pub fn validate(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimMismatch(format!(
                "density matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let mat = m.hermitian_part();
        let eigen = eig_hermitian(&mat)?;
        if eigen.min_eigenvalue() < -PSD_TOL {
            return Err(Error::NotPsd(eigen.min_eigenvalue()));
        }
        let tr = mat.trace_re();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne(tr));
        }
        let support_rank = eigen.rank();
        Ok(Self {
            mat,
            eigen,
            support_rank,
        })
    }

    /// Maximally mixed state `𝟙/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::validate(&ComplexMatrix::identity(d).scale(1.0 / d as f64))
            .expect("maximally mixed state is valid")
    }

    /// Pure state `|k⟩⟨k|` in the computational basis.
    pub fn basis_state(d: usize, k: usize) -> Self {
        let mut diag = vec![0.0; d];
        diag[k] = 1.0;
        Self::validate(&ComplexMatrix::from_real_diag(&diag)).expect("basis projector is valid")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn support_rank(&self) -> usize {
        self.support_rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.support_rank == self.dim()
    }

    /// `f(ρ)` reusing the cached spectrum.
    pub fn func(&self, f: SpectralFn) -> ComplexMatrix {
        self.eigen
            .apply(f)
            .expect("density matrices are PSD within the support cutoff")
    }

    pub fn log(&self) -> ComplexMatrix {
        self.func(SpectralFn::Log)
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        self.func(SpectralFn::Sqrt)
    }

    pub fn support_projector(&self) -> ComplexMatrix {
        self.eigen.support_projector()
    }

    /// `(1−ε)ρ + ε𝟙/d`.
    pub fn regularized(&self, eps: f64) -> Self {
        let d = self.dim();
        let mixed = ComplexMatrix::identity(d).scale(eps / d as f64);
        Self::validate(&(&self.mat.scale(1.0 - eps) + &mixed)).expect("convex mixture of states")
    }

    /// `(1−λ)ρ + λσ`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Self::validate(&(&self.mat.scale(1.0 - lambda) + &other.mat.scale(lambda)))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::validate(&tensor(&self.mat, &other.mat)).expect("product of states is a state")
    }
}

/// Kronecker product with the left factor as the slower index.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// A subset of `{A, B, C}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subsystems(u8);

impl Subsystems {
    pub const NONE: Self = Self(0);
    pub const A: Self = Self(1);
    pub const B: Self = Self(2);
    pub const C: Self = Self(4);
    pub const AB: Self = Self(3);
    pub const BC: Self = Self(6);
    pub const AC: Self = Self(5);
    pub const ABC: Self = Self(7);

    pub fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self) -> Self {
        Self(!self.0 & 7)
    }

    fn mask(self) -> [bool; 3] {
        [self.0 & 1 != 0, self.0 & 2 != 0, self.0 & 4 != 0]
    }
}

impl BitOr for Subsystems {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl fmt::Display for Subsystems {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        for (bit, name) in [(1, 'A'), (2, 'B'), (4, 'C')] {
            if self.0 & bit != 0 {
                write!(f, "{name}")?;
            }
        }
        Ok(())
    }
}

/// Local dimensions `(dA, dB, dC)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Dims {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::DimMismatch(format!(
                "subsystem dimensions must be positive, got ({a},{b},{c})"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    pub fn total(&self) -> usize {
        self.a * self.b * self.c
    }

    /// Dimension of the tensor factor spanned by `set`.
    pub fn of(&self, set: Subsystems) -> usize {
        self.as_array()
            .iter()
            .zip(set.mask())
            .filter(|(_, keep)| *keep)
            .map(|(d, _)| d)
            .product()
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl std::str::FromStr for Dims {
    type Err = Error;

    /// Parses `"dA,dB,dC"`.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<usize> = text
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("dims `{text}`: {e}")))?;
        match parts[..] {
            [a, b, c] => Self::new(a, b, c),
            _ => Err(Error::Config(format!("dims `{text}`: expected three comma-separated values"))),
        }
    }
}

/// For each composite index, its position inside the kept factor and inside
/// the complementary factor.
fn split_indices(dims: &[usize], keep: &[bool]) -> Vec<(usize, usize)> {
    let n: usize = dims.iter().product();
    (0..n)
        .map(|mut idx| {
            let mut digits = vec![0; dims.len()];
            for (slot, &d) in digits.iter_mut().zip(dims).rev() {
                *slot = idx % d;
                idx /= d;
            }
            let (mut kept, mut rest) = (0, 0);
            for ((&digit, &d), &k) in digits.iter().zip(dims).zip(keep) {
                if k {
                    kept = kept * d + digit;
                } else {
                    rest = rest * d + digit;
                }
            }
            (kept, rest)
        })
        .collect()
}

/// Partial trace of `m` on the factors of `dims` not flagged in `keep`.
pub fn partial_trace_general(m: &ComplexMatrix, dims: &[usize], keep: &[bool]) -> Result<ComplexMatrix> {
    let n: usize = dims.iter().product();
    if !m.is_square() || m.dim() != n || dims.len() != keep.len() {
        return Err(Error::DimMismatch(format!(
            "partial trace of a {}x{} matrix over dims {dims:?}",
            m.rows(),
            m.cols()
        )));
    }
    let kd: usize = dims.iter().zip(keep).filter(|(_, k)| **k).map(|(d, _)| d).product();
    let split = split_indices(dims, keep);
    let mut out = ComplexMatrix::zeros(kd, kd);
    for (r, &(kr, tr)) in split.iter().enumerate() {
        for (c, &(kc, tc)) in split.iter().enumerate() {
            if tr == tc {
                out[(kr, kc)] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// `m ⊗ 𝟙` on the complement of `acts_on`, in `A ⊗ B ⊗ C` order.
pub fn embed(m: &ComplexMatrix, acts_on: Subsystems, dims: Dims) -> Result<ComplexMatrix> {
    let local = dims.of(acts_on);
    if !m.is_square() || m.dim() != local || acts_on.is_empty() {
        return Err(Error::DimMismatch(format!(
            "{}x{} operator on {acts_on} with dims ({dims})",
            m.rows(),
            m.cols()
        )));
    }
    let split = split_indices(&dims.as_array(), &acts_on.mask());
    let n = dims.total();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (kr, tr) = split[r];
        let (kc, tc) = split[c];
        if tr == tc {
            m[(kr, kc)]
        } else {
            Default::default()
        }
    }))
}

/// A density matrix on `A ⊗ B ⊗ C`.
#[derive(Clone, Debug)]
pub struct TripartiteState {
    rho: DensityMatrix,
    dims: Dims,
}

impl TripartiteState {
    pub fn new(rho: DensityMatrix, dims: Dims) -> Result<Self> {
        if rho.dim() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "state of dimension {} with subsystem dims ({dims})",
                rho.dim()
            )));
        }
        Ok(Self { rho, dims })
    }

    pub fn from_matrix(m: &ComplexMatrix, dims: Dims) -> Result<Self> {
        Self::new(DensityMatrix::validate(m)?, dims)
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix, c: &DensityMatrix) -> Self {
        let dims = Dims::new(a.dim(), b.dim(), c.dim()).expect("non-empty factors");
        Self {
            rho: a.tensor(b).tensor(c),
            dims,
        }
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Reduced state on `keep`.
    pub fn partial_trace(&self, keep: Subsystems) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        if keep == Subsystems::ABC {
            return Ok(self.rho.clone());
        }
        let m = partial_trace_general(self.rho.matrix(), &self.dims.as_array(), &keep.mask())?;
        DensityMatrix::validate(&m)
    }

    pub fn embed(&self, m: &ComplexMatrix, acts_on: Subsystems) -> Result<ComplexMatrix> {
        embed(m, acts_on, self.dims)
    }

    /// `(1−ε)ρ + ε𝟙/d` with the same subsystem dimensions.
    pub fn regularized(&self, eps: f64) -> Self {
        Self {
            rho: self.rho.regularized(eps),
            dims: self.dims,
        }
    }

    /// The three marginals that enter `I(A:C|B)`.
    pub fn marginals(&self) -> Marginals {
        let ab = self.partial_trace(Subsystems::AB).expect("non-empty keep");
        let bc = self.partial_trace(Subsystems::BC).expect("non-empty keep");
        let b = self.partial_trace(Subsystems::B).expect("non-empty keep");
        Marginals { ab, bc, b }
    }

    /// Full rank for `ρ_ABC` and every marginal used by the bounds.
    pub fn is_full_rank(&self) -> bool {
        let m = self.marginals();
        self.rho.is_full_rank() && m.ab.is_full_rank() && m.bc.is_full_rank() && m.b.is_full_rank()
    }
}

/// `ρ_AB`, `ρ_BC` and `ρ_B` of a tripartite state.
#[derive(Clone, Debug)]
pub struct Marginals {
    pub ab: DensityMatrix,
    pub bc: DensityMatrix,
    pub b: DensityMatrix,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn dims_from_str() {
        assert_eq!("2,3,2".parse::<Dims>().unwrap(), Dims::new(2, 3, 2).unwrap());
        assert!("2,3".parse::<Dims>().is_err());
        assert!("2,0,2".parse::<Dims>().is_err());
        assert!("a,b,c".parse::<Dims>().is_err());
    }

    #[test]
    fn validate_examples() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert_eq!(DensityMatrix::validate(&half).unwrap().support_rank(), 2);
        let pure = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(DensityMatrix::validate(&pure).unwrap().support_rank(), 1);
        let bad = ComplexMatrix::from_real_diag(&[0.6, 0.5]);
        assert!(matches!(DensityMatrix::validate(&bad), Err(Error::TraceNotOne(_))));
    }

    #[test]
    fn validate_rejects_non_hermitian_and_negative() {
        let nh = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(matches!(DensityMatrix::validate(&nh), Err(Error::NotHermitian(_))));
        let neg = ComplexMatrix::from_real_diag(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::validate(&neg), Err(Error::NotPsd(_))));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::validate(&ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]])).unwrap();
        let b = DensityMatrix::maximally_mixed(3);
        let c = DensityMatrix::validate(&ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(0.4, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.6, 0.0),
            ],
        )
        .unwrap())
        .unwrap();
        let s = TripartiteState::product(&a, &b, &c);
        let ra = s.partial_trace(Subsystems::A).unwrap();
        assert!(ra.matrix().max_abs_diff(a.matrix()) < 1e-14);
        let rc = s.partial_trace(Subsystems::C).unwrap();
        assert!(rc.matrix().max_abs_diff(c.matrix()) < 1e-14);
        let rac = s.partial_trace(Subsystems::AC).unwrap();
        assert!(rac.matrix().max_abs_diff(&a.matrix().kron(c.matrix())) < 1e-14);
        let all = s.partial_trace(Subsystems::ABC).unwrap();
        assert_eq!(all.matrix(), s.rho().matrix());
        assert!(matches!(s.partial_trace(Subsystems::NONE), Err(Error::EmptyKeep)));
    }

    #[test]
    fn embed_examples() {
        let dims = Dims::new(2, 3, 2).unwrap();
        let id = embed(&ComplexMatrix::identity(3), Subsystems::B, dims).unwrap();
        assert_eq!(id, ComplexMatrix::identity(12));
        let rab = ComplexMatrix::identity(6).scale(1.0 / 6.0);
        let e = embed(&rab, Subsystems::AB, dims).unwrap();
        assert!((e.trace_re() - 2.0).abs() < 1e-14);
        // A⊗C operator embeds with the identity on the middle factor
        let xa = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let zc = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let eac = embed(&xa.kron(&zc), Subsystems::AC, dims).unwrap();
        let direct = xa.kron(&ComplexMatrix::identity(3)).kron(&zc);
        assert_eq!(eac, direct);
        assert!(embed(&ComplexMatrix::identity(2), Subsystems::B, dims).is_err());
    }

    #[test]
    fn embedded_b_operators_commute_iff_local_ones_do() {
        let dims = Dims::new(2, 2, 2).unwrap();
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let d = ComplexMatrix::from_real_diag(&[0.3, 0.7]);
        let comm = |p: &ComplexMatrix, q: &ComplexMatrix| {
            let ep = embed(p, Subsystems::B, dims).unwrap();
            let eq = embed(q, Subsystems::B, dims).unwrap();
            crate::matfun::commutator(&ep, &eq).unwrap().hs_norm()
        };
        assert!(comm(&z, &d) < 1e-15);
        assert!(comm(&x, &z) > 1.0);
    }

    #[test]
    fn dims_rejects_zero() {
        assert!(Dims::new(2, 0, 1).is_err());
        assert_eq!(Dims::new(2, 3, 4).unwrap().of(Subsystems::AC), 8);
    }

    #[test]
    fn tripartite_dim_mismatch() {
        let rho = DensityMatrix::maximally_mixed(6);
        assert!(TripartiteState::new(rho, Dims::new(2, 2, 2).unwrap()).is_err());
    }
}
