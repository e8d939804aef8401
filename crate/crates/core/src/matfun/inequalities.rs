//! Scalar trace inequalities, each returned as a signed gap so that a
//! non-negative value means the inequality holds.

use super::eigen::{eig_hermitian, HermitianEigen};
use super::functions::{trace_norm, SpectralFn};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

fn same_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Eigendecomposition of a matrix required to be PSD up to the support cutoff.
pub(crate) fn psd_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let e = eig_hermitian(m)?;
    if e.min_eigenvalue() < -e.cutoff() {
        return Err(Error::NotPsd(e.min_eigenvalue()));
    }
    Ok(e)
}

fn trace_exp(m: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.eigenvalues.iter().map(|l| l.exp()).sum())
}

/// Peierls–Bogoliubov gap `Tr e^{H+K}/Tr e^H − exp(Tr[e^H K]/Tr e^H)`.
///
/// Zero exactly when `K` is a multiple of the identity.
pub fn pb_gap(h: &ComplexMatrix, k: &ComplexMatrix) -> Result<f64> {
    same_dims(h, k)?;
    let eh = eig_hermitian(h)?.apply(SpectralFn::Exp)?;
    eig_hermitian(k)?;
    let z = eh.trace_re();
    let zk = trace_exp(&(h + k))?;
    let mean_k = eh.trace_product(k).re / z;
    Ok(zk / z - mean_k.exp())
}

/// Golden–Thompson gap `Tr[e^A e^B] − Tr e^{A+B}`; vanishes iff `[A, B] = 0`.
pub fn gt_gap(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    same_dims(a, b)?;
    let ea = eig_hermitian(a)?.apply(SpectralFn::Exp)?;
    let eb = eig_hermitian(b)?.apply(SpectralFn::Exp)?;
    Ok(ea.trace_product(&eb).re - trace_exp(&(a + b))?)
}

/// `Tr exp(log R − log S + log T)`, the left side of Lieb's triple-matrix inequality.
pub fn lieb_triple_lhs(r: &ComplexMatrix, s: &ComplexMatrix, t: &ComplexMatrix) -> Result<f64> {
    same_dims(r, s)?;
    same_dims(r, t)?;
    let lr = psd_eigen(r)?.apply(SpectralFn::Log)?;
    let ls = psd_eigen(s)?.apply(SpectralFn::Log)?;
    let lt = psd_eigen(t)?.apply(SpectralFn::Log)?;
    trace_exp(&(&(&lr - &ls) + &lt))
}

/// `Tr ∫₀^∞ R(S+x)⁻¹T(S+x)⁻¹ dx`, evaluated in closed form in the eigenbasis of `S`.
///
/// With `S = Q diag(s) Q†`, the integral of `(sᵢ+x)⁻¹(sⱼ+x)⁻¹` is the inverse
/// logarithmic mean `(ln sᵢ − ln sⱼ)/(sᵢ − sⱼ)` (or `1/sᵢ` on the diagonal).
pub fn lieb_triple_rhs(r: &ComplexMatrix, s: &ComplexMatrix, t: &ComplexMatrix) -> Result<f64> {
    same_dims(r, s)?;
    same_dims(r, t)?;
    psd_eigen(r)?;
    psd_eigen(t)?;
    let es = eig_hermitian(s)?;
    let smin = es.min_eigenvalue();
    if smin <= es.cutoff() {
        return Err(Error::SingularS(smin));
    }
    let q = &es.eigenvectors;
    let qh = q.adjoint();
    let rt = &(&qh * r) * q;
    let tt = &(&qh * t) * q;
    let sv = &es.eigenvalues;
    let n = sv.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = inverse_log_mean(sv[i], sv[j]);
            acc += (rt[(i, j)] * tt[(j, i)]).re * w;
        }
    }
    Ok(acc)
}

fn inverse_log_mean(a: f64, b: f64) -> f64 {
    if a == b {
        1.0 / a
    } else {
        ((a - b) / b).ln_1p() / (a - b)
    }
}

/// Audenaert gap `Tr[MᵗN¹⁻ᵗ] − ½Tr[M + N − |M − N|]` for PSD `M`, `N`, `t ∈ [0, 1]`.
///
/// `M⁰` is read as the support projector of `M`.
pub fn audenaert_gap(m: &ComplexMatrix, n: &ComplexMatrix, t: f64) -> Result<f64> {
    same_dims(m, n)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Config(format!("Audenaert exponent {t} outside [0, 1]")));
    }
    let mt = psd_eigen(m)?.apply(SpectralFn::Power(t))?;
    let nt = psd_eigen(n)?.apply(SpectralFn::Power(1.0 - t))?;
    let lhs = mt.trace_product(&nt).re;
    let rhs = 0.5 * (m.trace_re() + n.trace_re() - trace_norm(&(m - n))?);
    Ok(lhs - rhs)
}

/// `(¼‖M−N‖₁², ‖√M−√N‖₂², ‖M−N‖₁)`; ordered ascending for unit-trace `M`, `N`.
pub fn powers_stormer_sandwich(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<(f64, f64, f64)> {
    same_dims(m, n)?;
    let sm = psd_eigen(m)?.apply(SpectralFn::Sqrt)?;
    let sn = psd_eigen(n)?.apply(SpectralFn::Sqrt)?;
    let one = trace_norm(&(m - n))?;
    let two = (&sm - &sn).hs_norm().powi(2);
    Ok((0.25 * one * one, two, one))
}
