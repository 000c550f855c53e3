//! Shannon, von Neumann and Tsallis-2 entropies.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermitian::{DensityMatrix, Spectrum};

/// Logarithm base for every entropy in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LogBase {
    /// bits
    #[default]
    Two,
    /// nats
    E,
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "2" | "bits" => Ok(LogBase::Two),
            "e" | "nats" => Ok(LogBase::E),
            other => Err(format!("unknown log base `{other}` (expected 2 or e)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyConfig {
    pub log_base: LogBase,
    /// Probabilities below this are treated as exact zeros (`0 log 0 = 0`).
    pub support_epsilon: f64,
    /// Mixing weight `η` toward `I/d` applied before any matrix logarithm.
    pub regularization_eta: f64,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        Self {
            log_base: LogBase::Two,
            support_epsilon: 1e-12,
            regularization_eta: 0.0,
        }
    }
}

impl EntropyConfig {
    pub fn nats() -> Self {
        Self {
            log_base: LogBase::E,
            ..Self::default()
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.regularization_eta = eta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.support_epsilon >= 0.0) {
            return Err(Error::OutOfRange {
                value: self.support_epsilon,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        if !(0.0..1.0).contains(&self.regularization_eta) {
            return Err(Error::OutOfRange {
                value: self.regularization_eta,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn log(&self, x: f64) -> f64 {
        match self.log_base {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }

    /// `-p log p` with the support convention applied.
    #[inline]
    pub fn surprisal_term(&self, p: f64) -> f64 {
        if p <= self.support_epsilon {
            0.0
        } else {
            -p * self.log(p)
        }
    }
}

/// `H(p) = -Σ p_i log p_i`.
pub fn shannon_entropy(p: &[f64], cfg: &EntropyConfig) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if !sum.is_finite() || (sum - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(sum));
    }
    if let Some(&v) = p.iter().find(|&&v| v < -1e-10) {
        return Err(Error::InvalidSpectrum(format!("negative probability {v}")));
    }
    Ok(p.iter().map(|&v| cfg.surprisal_term(v)).sum::<f64>().max(0.0))
}

/// Shannon entropy of an already-validated spectrum.
pub fn spectrum_entropy(lambda: &Spectrum, cfg: &EntropyConfig) -> f64 {
    lambda
        .values()
        .iter()
        .map(|&v| cfg.surprisal_term(v))
        .sum::<f64>()
        .max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<f64> {
    Ok(spectrum_entropy(&rho.spectrum()?, cfg))
}

/// Linear entropy `1 - Σ λ_i²` of a spectrum.
pub fn tsallis2_spectrum(lambda: &Spectrum) -> f64 {
    1.0 - lambda.values().iter().map(|v| v * v).sum::<f64>()
}

/// `1 - Tr ρ²`, evaluated from the entries.
pub fn tsallis2(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}
