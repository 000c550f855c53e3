//! # coherence-core
//!
//! Finite-dimensional quantum coherence toolkit: density matrices, coherence monotones,
//! majorization checks, incoherent channels and the entropy plane.
//!
//! Everything is dense and complex. Eigendecompositions go through a cyclic Jacobi solver
//! that returns descending eigenvalues with matched eigenvectors.
//!
//! ## Measures
//!
//! | Function | Quantity |
//! |----------|----------|
//! | [`c_rel_ent`] | `S(Δρ) - S(ρ)` |
//! | [`c_l1`] | `Σ_{i≠j} \|ρ_ij\|` |
//! | [`c_rel_partial`] | `C_r` with the top-`k` entries of each vector |
//! | [`c_cross`] | `-Tr(Δρ log ρ) + Tr(ρ log Δρ)` |
//! | [`c_cross_partial`] | `c_cross` restricted to `k` terms |
//! | [`c2_measure`] | `Σ_{i≠j} \|ρ_ij\|²` |
//!
//! ## Quick Start
//!
//! ```rust
//! use coherence_core::{c_l1, c_rel_ent, validate_density, ComplexMatrix, EntropyConfig};
//!
//! let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.25], &[0.25, 0.5]]);
//! let rho = validate_density(&m, 1e-10).unwrap();
//! let cfg = EntropyConfig::default(); // bits
//!
//! assert!((c_l1(&rho) - 0.5).abs() < 1e-12);
//! assert!((c_rel_ent(&rho, &cfg).unwrap() - 0.188722).abs() < 1e-6);
//! ```
//!
//! Random objects take any [`rand::Rng`]; [`SeedStream`] gives reproducible per-trial streams.

pub mod channel;
pub mod coherence;
pub mod entropy;
pub mod error;
pub mod hermitian;
pub mod jacobi;
pub mod majorization;
pub mod plane;
pub mod states;

pub use channel::{
    apply_channel, axiom_suite, channel_output_matrix, cross_entropy_evolution, outcome_probabilities,
    random_io_kraus, selective_outcomes, AsymmetryStats, Axiom, AxiomFailure, AxiomReport, AxiomSuiteConfig, AxiomTally,
    EvolutionPoint, KrausSet, Outcome,
};
pub use coherence::{
    c2_measure, c_cross, c_cross_partial, c_l1, c_rel_ent, c_rel_partial, cross_terms, CrossTerms, MeasureId,
};
pub use entropy::{
    shannon_entropy, spectrum_entropy, tsallis2, tsallis2_spectrum, von_neumann_entropy, EntropyConfig, LogBase,
};
pub use error::{Error, Result};
pub use hermitian::{
    dephase, eigh, validate_density, CMatrix, ComplexMatrix, DensityMatrix, EigenDecomposition, Spectrum,
};
pub use majorization::{
    gil_indices, gil_indices_of, gil_report, majorizes, schur_horn_report, GilIndexVector, GilReport, GilVerdict,
    MajorizationMode, MajorizationReport,
};
pub use plane::{
    boundary_samples, entropy_lambda_gap, eur_curve_point, family_spectrum, measurement_probs, plane_point,
    family_svn_at, refined_eur_report, Containment, CurveFamily, EurReport, FamilyKind, MeasurementBasis, PlaneEnvelope, PlanePoint, Polyline,
};
pub use states::{
    coherence_walk, from_spectrum, haar_unitary, perturb, random_density, random_simplex_spectrum, with_spectrum,
    RandomMethod, SeedStream, StepRecord, Trajectory,
};
