//! Seeded random unitaries and density matrices, and the coherence-walk trajectory generator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;
use std::str::FromStr;

use crate::coherence::c_l1;
use crate::entropy::{spectrum_entropy, tsallis2, EntropyConfig};
use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, DensityMatrix, Spectrum};
use crate::jacobi;

/// `(master_seed, stream_index)` pair; each pair names an independent ChaCha8 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeedStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Complex standard normal with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // row-major fill so the draw order does not depend on storage layout
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of `diag(R)` absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > 0.0 { rjj / n } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// How [`random_density`] builds a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RandomMethod {
    /// `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
    Ginibre,
    /// `U diag(λ) U†` with `λ` uniform on the rank-restricted simplex and `U` Haar.
    SpectrumHaar,
}

impl RandomMethod {
    pub fn label(&self) -> &'static str {
        match self {
            RandomMethod::Ginibre => "ginibre",
            RandomMethod::SpectrumHaar => "spectrum-haar",
        }
    }
}

impl FromStr for RandomMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ginibre" => Ok(RandomMethod::Ginibre),
            "spectrum-haar" | "spectrum" => Ok(RandomMethod::SpectrumHaar),
            other => Err(format!("unknown method `{other}` (expected ginibre or spectrum-haar)")),
        }
    }
}

/// Uniform point on the simplex over the first `rank` coordinates, sorted descending.
pub fn random_simplex_spectrum<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<Spectrum> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let mut v = vec![0.0; d];
    for x in v.iter_mut().take(rank) {
        *x = Exp1.sample(rng);
    }
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
    Spectrum::new(v)
}

pub fn random_density<R: Rng + ?Sized>(
    d: usize,
    rank: usize,
    method: RandomMethod,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    match method {
        RandomMethod::Ginibre => {
            let g = ginibre(d, rank, rng);
            Ok(DensityMatrix::from_psd_unnormalized(&g * g.adjoint()))
        }
        RandomMethod::SpectrumHaar => {
            let lambda = random_simplex_spectrum(d, rank, rng)?;
            from_spectrum(&lambda, rng)
        }
    }
}

/// `U diag(λ) U†` with Haar `U`.
pub fn from_spectrum<R: Rng + ?Sized>(lambda: &Spectrum, rng: &mut R) -> Result<DensityMatrix> {
    let d = lambda.dim();
    let u = haar_unitary(d, rng);
    Ok(with_spectrum(lambda, &u))
}

/// `U diag(λ) U†` for a given unitary.
pub fn with_spectrum(lambda: &Spectrum, u: &CMatrix) -> DensityMatrix {
    let mut scaled = u.clone();
    for (j, &l) in lambda.values().iter().enumerate() {
        scaled.column_mut(j).scale_mut(l);
    }
    DensityMatrix::from_hermitian_unchecked(scaled * u.adjoint())
}

/// Random Hermitian matrix with zero diagonal and complex-Gaussian upper triangle.
pub fn zero_diagonal_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in (i + 1)..d {
            let z = complex_gaussian(rng);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Rotates each off-diagonal entry of `h` onto the phase of the matching entry of `rho`, so that
/// adding a positive multiple never shrinks an existing coherence. Zero entries keep their phase.
fn phase_aligned(mut h: CMatrix, rho: &CMatrix) -> CMatrix {
    let d = h.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let r = rho[(i, j)];
            if r.norm() > 1e-15 {
                let z = r * (h[(i, j)].norm() / r.norm());
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
    }
    h
}

/// Adds `scale · H` with `H` a traceless Hermitian matrix of entries in `[-1, 1]`, then projects
/// back onto the state space by clipping negative eigenvalues and renormalizing.
pub fn perturb<R: Rng + ?Sized>(rho: &DensityMatrix, scale: f64, rng: &mut R) -> Result<DensityMatrix> {
    let d = rho.dim();
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = Complex64::new(rng.random_range(-1.0..=1.0), 0.0);
        for j in (i + 1)..d {
            let z = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let mean_diag = (0..d).map(|i| h[(i, i)].re).sum::<f64>() / d as f64;
    for i in 0..d {
        h[(i, i)].re -= mean_diag;
    }
    let candidate = rho.matrix() + h.scale(scale);
    let (vals, vecs) = jacobi::hermitian_eigen(&candidate)?;
    if vals[d - 1] >= 0.0 {
        return Ok(DensityMatrix::from_psd_unnormalized(candidate));
    }
    let mut scaled = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(l.max(0.0));
    }
    Ok(DensityMatrix::from_psd_unnormalized(scaled * vecs.adjoint()))
}

/// One recorded point of a coherence walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// Scale actually applied (zero for the initial state and for stalled steps).
    pub scale: f64,
    pub accepted: bool,
    pub halvings: u32,
    pub c_l1: f64,
    pub s2: f64,
    pub svn: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// `states[0]` is the initial state; `states[t]` follows step `t`.
    pub states: Vec<DensityMatrix>,
    pub records: Vec<StepRecord>,
}

/// Maximum number of scale halvings before a step is recorded as a no-op.
pub const MAX_HALVINGS: u32 = 40;

/// Gradually adds off-diagonal coherence to `rho0` while keeping its diagonal fixed.
///
/// Step `t` proposes `ρ + t·ε·H` with `H` a zero-diagonal Hermitian matrix of Gaussian magnitudes
/// whose phases follow the current off-diagonal entries; the scale is halved until the proposal is
/// positive semidefinite.
pub fn coherence_walk<R: Rng + ?Sized>(
    rho0: &DensityMatrix,
    steps: usize,
    strength: f64,
    cfg: &EntropyConfig,
    rng: &mut R,
) -> Result<Trajectory> {
    if !(strength >= 0.0) || !strength.is_finite() {
        return Err(Error::OutOfRange {
            value: strength,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let d = rho0.dim();
    let record = |rho: &DensityMatrix, step, scale, accepted, halvings| -> Result<StepRecord> {
        let (vals, _) = jacobi::hermitian_eigen(rho.matrix())?;
        let spec = Spectrum::new(vals)?;
        Ok(StepRecord {
            step,
            scale,
            accepted,
            halvings,
            c_l1: c_l1(rho),
            s2: tsallis2(rho),
            svn: spectrum_entropy(&spec, cfg),
        })
    };

    let mut states = Vec::with_capacity(steps + 1);
    let mut records = Vec::with_capacity(steps + 1);
    records.push(record(rho0, 0, 0.0, true, 0)?);
    states.push(rho0.clone());

    for step in 1..=steps {
        let current = states.last().expect("non-empty").clone();
        let h = phase_aligned(zero_diagonal_hermitian(d, rng), current.matrix());
        let mut scale = step as f64 * strength;
        let mut accepted = None;
        let mut halvings = 0;
        loop {
            let candidate = current.matrix() + h.scale(scale);
            let (vals, _) = jacobi::hermitian_eigen(&candidate)?;
            if vals[d - 1] >= 0.0 {
                accepted = Some(DensityMatrix::from_hermitian_unchecked(candidate));
                break;
            }
            if halvings == MAX_HALVINGS {
                break;
            }
            scale *= 0.5;
            halvings += 1;
        }
        match accepted {
            Some(next) => {
                records.push(record(&next, step, scale, true, halvings)?);
                states.push(next);
            }
            None => {
                records.push(record(&current, step, 0.0, false, halvings)?);
                states.push(current);
            }
        }
    }
    Ok(Trajectory { states, records })
}
