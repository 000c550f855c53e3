//! Coherence functionals: relative entropy, l1 norm, partial and cross-entropy variants, and
//! the Tsallis-2 difference.
//!
//! All entropic quantities follow the [`EntropyConfig`] log base. The cross-entropy family needs
//! `log ρ`, which is undefined on rank-deficient states; those inputs surface as
//! [`Error::SingularSupport`] unless the config mixes in `η · I/d` first.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::entropy::{spectrum_entropy, EntropyConfig};
use crate::error::{Error, Result};
use crate::hermitian::{DensityMatrix, EigenDecomposition, Spectrum};

/// `C_r(ρ) = S(Δ[ρ]) - S(ρ)`, which is also the distillable coherence.
pub fn c_rel_ent(rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<f64> {
    let diag = Spectrum::new(rho.diagonal_entries())?;
    let spec = rho.spectrum()?;
    Ok(spectrum_entropy(&diag, cfg) - spectrum_entropy(&spec, cfg))
}

/// `C_l1(ρ) = Σ_{i≠j} |ρ_ij|`.
pub fn c_l1(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += rho.entry(i, j).norm();
            }
        }
    }
    acc
}

/// `-Σ_{i≤k} v_i log v_i` over the `k` largest entries of a descending vector.
fn truncated_entropy(sorted: &[f64], k: usize, cfg: &EntropyConfig) -> f64 {
    sorted.iter().take(k).map(|&v| cfg.surprisal_term(v)).sum()
}

fn check_k(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > d {
        Err(Error::InvalidK { k, dim: d })
    } else {
        Ok(())
    }
}

/// `S^k(Δ[ρ]) - S^k(ρ)` with both entropies restricted to the `k` largest entries.
pub fn c_rel_partial(rho: &DensityMatrix, k: usize, cfg: &EntropyConfig) -> Result<f64> {
    check_k(k, rho.dim())?;
    let diag = Spectrum::new(rho.diagonal_entries())?;
    let spec = rho.spectrum()?;
    Ok(truncated_entropy(diag.values(), k, cfg) - truncated_entropy(spec.values(), k, cfg))
}

/// `C_2(ρ) = Tr ρ² - Σ ρ_ii²`, i.e. the squared off-diagonal Hilbert-Schmidt weight.
pub fn c2_measure(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += rho.entry(i, j).norm_sqr();
            }
        }
    }
    acc
}

/// The two cross entropies of a state against its dephased counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTerms {
    /// `S(ρ_diag‖ρ) = -Tr(ρ_diag log ρ)`
    pub a: f64,
    /// `S(ρ‖ρ_diag) = -Tr(ρ log ρ_diag)`
    pub b: f64,
}

/// Eigendata of the (possibly regularized) state, shared by the cross-entropy functionals.
struct CrossData {
    diag: Vec<f64>,
    eig: EigenDecomposition,
    /// `|V_ik|²`, row `i` = basis index, column `k` = eigen index.
    overlap: Vec<Vec<f64>>,
}

impl CrossData {
    fn new(rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<Self> {
        cfg.validate()?;
        let rho = rho.mix_with_identity(cfg.regularization_eta);
        let eig = rho.eigh()?;
        let d = rho.dim();
        let overlap = (0..d)
            .map(|i| (0..d).map(|k| eig.eigenvectors[(i, k)].norm_sqr()).collect())
            .collect();
        Ok(Self {
            diag: rho.diagonal_entries(),
            eig,
            overlap,
        })
    }

    /// `-d_i (log ρ)_ii` for basis index `i`.
    fn a_term(&self, i: usize, cfg: &EntropyConfig) -> Result<f64> {
        let di = self.diag[i];
        if di <= cfg.support_epsilon {
            return Ok(0.0);
        }
        let mut acc = 0.0;
        for (k, &lam) in self.eig.spectrum.values().iter().enumerate() {
            let w = self.overlap[i][k];
            if lam <= cfg.support_epsilon {
                if di * w > cfg.support_epsilon {
                    return Err(Error::SingularSupport {
                        eigenvalue: lam,
                        weight: di * w,
                    });
                }
                continue;
            }
            acc -= di * w * cfg.log(lam);
        }
        Ok(acc)
    }

    /// `-λ_k ⟨v_k| log ρ_diag |v_k⟩` for eigen index `k`.
    fn b_term(&self, k: usize, cfg: &EntropyConfig) -> f64 {
        let lam = self.eig.spectrum.values()[k];
        if lam <= cfg.support_epsilon {
            return 0.0;
        }
        let mut acc = 0.0;
        for (i, &di) in self.diag.iter().enumerate() {
            if di <= cfg.support_epsilon {
                // ρ_ii = 0 forces row i of a PSD ρ to vanish, so this weight is rounding noise
                continue;
            }
            acc -= lam * self.overlap[i][k] * cfg.log(di);
        }
        acc
    }

    fn diag_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.diag.len()).collect();
        order.sort_by(|&i, &j| self.diag[j].total_cmp(&self.diag[i]));
        order
    }
}

/// `A = -Tr(ρ_diag log ρ)` through the eigendecomposition of `ρ`, and
/// `B = -Tr(ρ log ρ_diag)` through the same eigenvectors.
///
/// `B` equals `S(Δ[ρ])` algebraically; computing it from the eigenvectors keeps that identity a
/// real consistency check.
pub fn cross_terms(rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<CrossTerms> {
    let data = CrossData::new(rho, cfg)?;
    let d = rho.dim();
    let mut a = 0.0;
    for i in 0..d {
        a += data.a_term(i, cfg)?;
    }
    let b = (0..d).map(|k| data.b_term(k, cfg)).sum();
    Ok(CrossTerms { a, b })
}

/// `C_cross(ρ) = S(ρ_diag‖ρ) - S(ρ‖ρ_diag)`.
pub fn c_cross(rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<f64> {
    let t = cross_terms(rho, cfg)?;
    Ok(t.a - t.b)
}

/// Cross-entropy coherence restricted to the top `k` terms.
///
/// `A^k` sums `-d_i (log ρ)_ii` over the `k` largest diagonal entries; `B^k` sums
/// `-λ_j ⟨v_j|log ρ_diag|v_j⟩` over the `k` largest eigenvalues. Both reduce to the full traces at
/// `k = d` and to `S^k` on incoherent states.
pub fn c_cross_partial(rho: &DensityMatrix, k: usize, cfg: &EntropyConfig) -> Result<f64> {
    check_k(k, rho.dim())?;
    let data = CrossData::new(rho, cfg)?;
    let mut a = 0.0;
    for &i in data.diag_order().iter().take(k) {
        a += data.a_term(i, cfg)?;
    }
    let b: f64 = (0..k).map(|j| data.b_term(j, cfg)).sum();
    Ok(a - b)
}

/// Which coherence functional to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureId {
    RelEnt,
    L1,
    Cross,
    RelPartial(usize),
    CrossPartial(usize),
    C2,
}

impl MeasureId {
    /// Whether the measure needs `log ρ` and therefore full-rank inputs.
    pub fn needs_full_rank(&self) -> bool {
        matches!(self, MeasureId::Cross | MeasureId::CrossPartial(_))
    }

    /// Whether the measure is defined for dimension `d`.
    pub fn valid_for(&self, d: usize) -> bool {
        match *self {
            MeasureId::RelPartial(k) | MeasureId::CrossPartial(k) => k >= 1 && k <= d,
            _ => true,
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<f64> {
        match *self {
            MeasureId::RelEnt => c_rel_ent(rho, cfg),
            MeasureId::L1 => Ok(c_l1(rho)),
            MeasureId::Cross => c_cross(rho, cfg),
            MeasureId::RelPartial(k) => c_rel_partial(rho, k, cfg),
            MeasureId::CrossPartial(k) => c_cross_partial(rho, k, cfg),
            MeasureId::C2 => Ok(c2_measure(rho)),
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::RelEnt => write!(f, "c_r"),
            MeasureId::L1 => write!(f, "c_l1"),
            MeasureId::Cross => write!(f, "c_cross"),
            MeasureId::RelPartial(k) => write!(f, "c_r_partial:{k}"),
            MeasureId::CrossPartial(k) => write!(f, "c_cross_partial:{k}"),
            MeasureId::C2 => write!(f, "c_2"),
        }
    }
}

impl FromStr for MeasureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (name, k) = match s.split_once(':') {
            Some((name, k)) => (
                name,
                Some(k.parse::<usize>().map_err(|e| format!("bad k in `{s}`: {e}"))?),
            ),
            None => (s, None),
        };
        match (name, k) {
            ("c_r" | "cr", None) => Ok(MeasureId::RelEnt),
            ("c_l1" | "cl1", None) => Ok(MeasureId::L1),
            ("c_cross" | "ccross", None) => Ok(MeasureId::Cross),
            ("c_2" | "c2", None) => Ok(MeasureId::C2),
            ("c_r_partial", Some(k)) => Ok(MeasureId::RelPartial(k)),
            ("c_cross_partial", Some(k)) => Ok(MeasureId::CrossPartial(k)),
            _ => Err(format!(
                "unknown measure `{s}` (expected c_r, c_l1, c_cross, c_2, c_r_partial:K, c_cross_partial:K)"
            )),
        }
    }
}
