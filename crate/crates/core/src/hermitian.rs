//! Dense complex matrices, validated density matrices, spectra and dephasing.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi;

/// Column-major dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Default tolerance for Hermiticity, trace and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalues in `[-SPECTRUM_CLAMP, 0)` are treated as rounding noise and clamped to zero.
pub const SPECTRUM_CLAMP: f64 = 1e-10;

/// Unvalidated square-or-not complex matrix, the raw input form of every state.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(pub CMatrix);

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl ComplexMatrix {
    pub fn new(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self(CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &CMatrix {
        &self.0
    }

    /// Parse the `{"dim": d, "re": [[..]], "im": [[..]]}` row-major matrix format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let d = file.dim;
        if file.re.len() != d || file.im.len() != d {
            return Err(Error::Format(format!(
                "expected {d} rows, got re={} im={}",
                file.re.len(),
                file.im.len()
            )));
        }
        for (re, im) in file.re.iter().zip(&file.im) {
            if re.len() != d || im.len() != d {
                return Err(Error::NotSquare {
                    rows: d,
                    cols: re.len().max(im.len()),
                });
            }
        }
        Ok(Self(CMatrix::from_fn(d, d, |i, j| {
            Complex64::new(file.re[i][j], file.im[i][j])
        })))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix serialization is infallible")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("matrix serialization is infallible")
    }

    fn to_file(&self) -> MatrixFile {
        let (r, c) = self.0.shape();
        MatrixFile {
            dim: r,
            re: (0..r).map(|i| (0..c).map(|j| self.0[(i, j)].re).collect()).collect(),
            im: (0..r).map(|i| (0..c).map(|j| self.0[(i, j)].im).collect()).collect(),
        }
    }
}

/// Eigenvalues of a density matrix in descending order; a probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Validates, clamps to `[0, 1]`, renormalizes and sorts descending.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite entry".into()));
        }
        if let Some(v) = values
            .iter()
            .find(|&&v| v < -SPECTRUM_CLAMP || v > 1.0 + SPECTRUM_CLAMP)
        {
            return Err(Error::InvalidSpectrum(format!("entry {v} outside [0, 1]")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSpectrum(format!("entries sum to {sum}")));
        }
        for v in values.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        let clamped_sum: f64 = values.iter().sum();
        for v in values.iter_mut() {
            *v /= clamped_sum;
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Number of entries strictly above `eps`.
    pub fn rank(&self, eps: f64) -> usize {
        self.0.iter().filter(|&&v| v > eps).count()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Spectrum plus unitary eigenvector matrix whose columns follow the spectrum order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lam) in self.spectrum.values().iter().enumerate() {
            scaled.column_mut(j).scale_mut(lam);
        }
        scaled * v.adjoint()
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Wraps a matrix that is a density matrix by construction, enforcing exact Hermiticity.
    ///
    /// Diagonal entries keep their real parts bit-for-bit.
    pub(crate) fn from_hermitian_unchecked(mut m: CMatrix) -> Self {
        let n = m.nrows();
        for i in 0..n {
            m[(i, i)].im = 0.0;
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self(m)
    }

    /// Like [`Self::from_hermitian_unchecked`] but also rescales to unit trace.
    pub(crate) fn from_psd_unnormalized(m: CMatrix) -> Self {
        let tr: f64 = (0..m.nrows()).map(|i| m[(i, i)].re).sum();
        Self::from_hermitian_unchecked(m.unscale(tr))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(CMatrix::identity(d, d).unscale(d as f64))
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::TraceZero);
        }
        let d = psi.len();
        Ok(Self::from_hermitian_unchecked(CMatrix::from_fn(d, d, |i, j| {
            psi[i] * psi[j].conj() / (norm * norm)
        })))
    }

    /// Incoherent state `diag(p)`.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Spectrum::new(p.to_vec())?;
        let d = p.len();
        Ok(Self(CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(p[i].max(0.0), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// Real diagonal `ρ_ii` in basis order.
    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal_entries().iter().sum()
    }

    /// `Tr ρ²` without diagonalization.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_complex_matrix(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.clone())
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        eigh(self)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(eigh(self)?.spectrum)
    }

    pub fn dephase(&self) -> DensityMatrix {
        dephase(self)
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn conjugate_by(&self, u: &CMatrix) -> DensityMatrix {
        Self::from_hermitian_unchecked(u * &self.0 * u.adjoint())
    }

    /// `(1-η) ρ + η I/d`.
    pub fn mix_with_identity(&self, eta: f64) -> DensityMatrix {
        if eta == 0.0 {
            return self.clone();
        }
        let d = self.dim();
        let id = CMatrix::identity(d, d).unscale(d as f64);
        Self::from_hermitian_unchecked(self.0.scale(1.0 - eta) + id.scale(eta))
    }

    /// Convex combination `Σ w_i ρ_i` (weights are renormalized).
    pub fn mixture(states: &[DensityMatrix], weights: &[f64]) -> Result<DensityMatrix> {
        if states.len() != weights.len() {
            return Err(Error::LengthMismatch(states.len(), weights.len()));
        }
        let first = states.first().ok_or(Error::LengthMismatch(0, 0))?;
        let d = first.dim();
        let total: f64 = weights.iter().sum();
        let mut acc = CMatrix::zeros(d, d);
        for (s, &w) in states.iter().zip(weights) {
            if s.dim() != d {
                return Err(Error::DimMismatch(d, s.dim()));
            }
            acc += s.0.scale(w / total);
        }
        Ok(Self::from_hermitian_unchecked(acc))
    }

    /// Largest entrywise modulus of `ρ - Δ[ρ]`.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    m = m.max(self.0[(i, j)].norm());
                }
            }
        }
        m
    }
}

/// Checks a raw matrix and returns the nearest density matrix within `tol`.
///
/// The Hermitian part `(M + M†)/2` is kept, the trace is normalized to one and eigenvalues in
/// `[-tol, 0)` are clipped to zero before renormalizing.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let a = &m.0;
    let (rows, cols) = a.shape();
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = rows;
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            asym = asym.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    if asym > tol {
        return Err(Error::NotHermitian(asym));
    }
    let herm = (a + a.adjoint()).scale(0.5);
    let tr: f64 = (0..n).map(|i| herm[(i, i)].re).sum();
    if tr.abs() <= tol {
        return Err(Error::TraceZero);
    }
    if tr < 0.0 {
        let (vals, _) = jacobi::hermitian_eigen(&herm)?;
        return Err(Error::NotPsd(vals[n - 1]));
    }
    let herm = herm.unscale(tr);
    let (vals, vecs) = jacobi::hermitian_eigen(&herm)?;
    let min = vals[n - 1];
    if min < -tol {
        return Err(Error::NotPsd(min));
    }
    if min >= 0.0 {
        return Ok(DensityMatrix::from_hermitian_unchecked(herm));
    }
    let clipped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let mut scaled = vecs.clone();
    for (j, &lam) in clipped.iter().enumerate() {
        scaled.column_mut(j).scale_mut(lam / total);
    }
    Ok(DensityMatrix::from_hermitian_unchecked(scaled * vecs.adjoint()))
}

/// Eigendecomposition with the spectrum sorted descending and clamped to a probability vector.
pub fn eigh(rho: &DensityMatrix) -> Result<EigenDecomposition> {
    let (vals, vecs) = jacobi::hermitian_eigen(&rho.0)?;
    Ok(EigenDecomposition {
        spectrum: Spectrum::new(vals)?,
        eigenvectors: vecs,
    })
}

/// Completely dephased state `Δ[ρ]`: same diagonal, zero off-diagonal.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    DensityMatrix(CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(rho.0[(i, i)].re, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}
