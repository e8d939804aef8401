//! Quantum channels in Kraus form.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matfun::ComplexMatrix;
use crate::states::random::random_isometry;
use crate::states::DensityMatrix;

const TP_TOL: f64 = 1e-9;

/// `Φ(X) = Σ_μ K_μ X K_μ†` with `d_out × d_in` Kraus operators.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Checks shapes and `Σ K†K = 𝟙`.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::from_kraus_unchecked(kraus)?;
        let dev = (&ch.completeness() - &ComplexMatrix::identity(ch.d_in())).hs_norm();
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    /// Shape-checked but not required to be trace preserving.
    pub fn from_kraus_unchecked(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::DimMismatch("a channel needs at least one Kraus operator".into()))?;
        let shape = (first.rows(), first.cols());
        if kraus.iter().any(|k| (k.rows(), k.cols()) != shape) {
            return Err(Error::DimMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    /// `X ↦ Tr(X) 𝟙/d` via the `d²` operators `|i⟩⟨j|/√d`.
    pub fn depolarizing(d: usize) -> Self {
        let w = 1.0 / (d as f64).sqrt();
        let kraus = (0..d * d)
            .map(|idx| {
                let (i, j) = (idx / d, idx % d);
                let mut k = ComplexMatrix::zeros(d, d);
                k[(i, j)].re = w;
                k
            })
            .collect();
        Self { kraus }
    }

    /// `Tr_first` on `first ⊗ rest`, with Kraus operators `⟨a| ⊗ 𝟙`.
    pub fn partial_trace_first(d_first: usize, d_rest: usize) -> Self {
        let kraus = (0..d_first)
            .map(|a| {
                let mut bra = ComplexMatrix::zeros(1, d_first);
                bra[(0, a)].re = 1.0;
                bra.kron(&ComplexMatrix::identity(d_rest))
            })
            .collect();
        Self { kraus }
    }

    /// `Tr_last` on `rest ⊗ last`, with Kraus operators `𝟙 ⊗ ⟨c|`.
    pub fn partial_trace_last(d_rest: usize, d_last: usize) -> Self {
        let kraus = (0..d_last)
            .map(|c| {
                let mut bra = ComplexMatrix::zeros(1, d_last);
                bra[(0, c)].re = 1.0;
                ComplexMatrix::identity(d_rest).kron(&bra)
            })
            .collect();
        Self { kraus }
    }

    /// Random channel from a Haar isometry `C^{d_in} → C^{d_out} ⊗ C^k`
    /// (Stinespring), cut into `k` row blocks of height `d_out`.
    pub fn random<R: Rng + ?Sized>(d_in: usize, d_out: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 || d_in == 0 || d_out == 0 || d_out * k < d_in {
            return Err(Error::Config(format!(
                "random channel needs d_out·k ≥ d_in (d_in={d_in}, d_out={d_out}, k={k})"
            )));
        }
        let v = random_isometry(d_out * k, d_in, rng);
        let kraus = (0..k)
            .map(|mu| ComplexMatrix::from_fn(d_out, d_in, |i, j| v[(mu * d_out + i, j)]))
            .collect();
        Ok(Self { kraus })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.kraus[0].cols()
    }

    pub fn d_out(&self) -> usize {
        self.kraus[0].rows()
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.d_in(), self.d_in());
        for k in &self.kraus {
            acc += &(&k.adjoint() * k);
        }
        acc
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() || x.dim() != self.d_in() {
            return Err(Error::DimMismatch(format!(
                "channel input {} vs operator {}x{}",
                self.d_in(),
                x.rows(),
                x.cols()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.d_out(), self.d_out());
        for k in &self.kraus {
            acc += &(&(k * x) * &k.adjoint());
        }
        Ok(acc)
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::validate(&self.apply(rho.matrix())?.hermitian_part())
    }

    /// Hilbert–Schmidt dual `Φ*(Y) = Σ K† Y K`.
    pub fn dual(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !y.is_square() || y.dim() != self.d_out() {
            return Err(Error::DimMismatch(format!(
                "dual channel input {} vs operator {}x{}",
                self.d_out(),
                y.rows(),
                y.cols()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.d_in(), self.d_in());
        for k in &self.kraus {
            acc += &(&(&k.adjoint() * y) * k);
        }
        Ok(acc)
    }
}
