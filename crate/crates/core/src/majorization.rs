//! Majorization predicates, Schur-Horn checks on density matrices and Gil indices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{DensityMatrix, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MajorizationMode {
    /// Partial sums plus equal totals.
    Strong,
    /// Partial sums only.
    Weak,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `min_k (Σ_{i≤k} p↓_i - Σ_{i≤k} q↓_i)` and the 1-based `k` where it is attained.
///
/// Ties keep the smallest `k`.
pub fn worst_partial_sum_margin(p: &[f64], q: &[f64]) -> Result<(f64, usize)> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let (ps, qs) = (sorted_desc(p), sorted_desc(q));
    let mut worst = (f64::INFINITY, 0);
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..ps.len() {
        sp += ps[k];
        sq += qs[k];
        let margin = sp - sq;
        if margin < worst.0 {
            worst = (margin, k + 1);
        }
    }
    Ok(worst)
}

/// Whether `p` majorizes `q` (`p ≻ q`) within `tol`.
pub fn majorizes(p: &[f64], q: &[f64], mode: MajorizationMode, tol: f64) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    if p.iter().chain(q).any(|v| !v.is_finite()) {
        return Err(Error::InvalidSpectrum("non-finite entry".into()));
    }
    if p.is_empty() {
        return Ok(true);
    }
    let (worst, _) = worst_partial_sum_margin(p, q)?;
    let totals_ok = match mode {
        MajorizationMode::Strong => (p.iter().sum::<f64>() - q.iter().sum::<f64>()).abs() <= tol,
        MajorizationMode::Weak => true,
    };
    Ok(totals_ok && worst >= -tol)
}

/// Plain and squared Schur-Horn comparison of spectrum against diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub dim: usize,
    pub plain_ok: bool,
    pub squared_ok: bool,
    pub worst_margin_plain: f64,
    pub k_at_worst: usize,
    pub worst_margin_squared: f64,
    pub k_at_worst_squared: usize,
    pub spectrum: Vec<f64>,
    pub diagonal: Vec<f64>,
}

/// `λ(ρ) ≻ diag(ρ)` (strong) and `λ(ρ)² ≻_w diag(ρ)²` (weak).
pub fn schur_horn_report(rho: &DensityMatrix, tol: f64) -> Result<MajorizationReport> {
    let spectrum = rho.spectrum()?.into_vec();
    let diagonal = sorted_desc(&rho.diagonal_entries());
    let (worst_plain, k_plain) = worst_partial_sum_margin(&spectrum, &diagonal)?;
    let plain_ok = majorizes(&spectrum, &diagonal, MajorizationMode::Strong, tol)?;

    let sq = |v: &[f64]| v.iter().map(|x| x * x).collect::<Vec<_>>();
    let (spec2, diag2) = (sq(&spectrum), sq(&diagonal));
    let (worst_sq, k_sq) = worst_partial_sum_margin(&spec2, &diag2)?;
    let squared_ok = majorizes(&spec2, &diag2, MajorizationMode::Weak, tol)?;

    Ok(MajorizationReport {
        dim: rho.dim(),
        plain_ok,
        squared_ok,
        worst_margin_plain: worst_plain,
        k_at_worst: k_plain,
        worst_margin_squared: worst_sq,
        k_at_worst_squared: k_sq,
        spectrum,
        diagonal,
    })
}

/// `G_j = Σ_{i=1}^{d-1} λ_i - j λ_min` for `j = 1..d-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GilIndexVector(pub Vec<f64>);

/// Gil indices of a descending probability vector, evaluated literally (no clamping).
pub fn gil_indices_of(values: &[f64]) -> Result<GilIndexVector> {
    let d = values.len();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let sorted = sorted_desc(values);
    let head: f64 = sorted[..d - 1].iter().sum();
    let lambda_min = sorted[d - 1];
    Ok(GilIndexVector(
        (1..d).map(|j| head - j as f64 * lambda_min).collect(),
    ))
}

pub fn gil_indices(lambda: &Spectrum) -> Result<GilIndexVector> {
    gil_indices_of(lambda.values())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GilVerdict {
    /// `Σ G^diag↓ ≥ Σ G↓` for every `k` (ties count as holding).
    ForwardHolds,
    /// `Σ G^diag↓ ≤ Σ G↓` for every `k`, with at least one strict inequality.
    ReverseHolds,
    Mixed,
}

impl GilVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            GilVerdict::ForwardHolds => "forward_holds",
            GilVerdict::ReverseHolds => "reverse_holds",
            GilVerdict::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GilReport {
    pub spectrum_indices: GilIndexVector,
    pub diagonal_indices: GilIndexVector,
    /// `Σ_{i≤k} G^diag↓_i - Σ_{i≤k} G↓_i` for `k = 1..d-1`.
    pub differences: Vec<f64>,
    pub verdict: GilVerdict,
}

/// Compares Gil indices of the diagonal against those of the spectrum without assuming a direction.
pub fn gil_report(rho: &DensityMatrix, tol: f64) -> Result<GilReport> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let spectrum_indices = gil_indices(&rho.spectrum()?)?;
    let diagonal_indices = gil_indices_of(&rho.diagonal_entries())?;
    let g = sorted_desc(&spectrum_indices.0);
    let gd = sorted_desc(&diagonal_indices.0);
    let mut differences = Vec::with_capacity(d - 1);
    let (mut s, mut sd) = (0.0, 0.0);
    for k in 0..d - 1 {
        s += g[k];
        sd += gd[k];
        differences.push(sd - s);
    }
    let forward = differences.iter().all(|&x| x >= -tol);
    let reverse = differences.iter().all(|&x| x <= tol);
    let verdict = if forward {
        GilVerdict::ForwardHolds
    } else if reverse {
        GilVerdict::ReverseHolds
    } else {
        GilVerdict::Mixed
    };
    Ok(GilReport {
        spectrum_indices,
        diagonal_indices,
        differences,
        verdict,
    })
}
