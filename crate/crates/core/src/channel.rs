//! Incoherent Kraus channels and the coherence-measure axiom harness.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::coherence::{c_rel_ent, cross_terms, MeasureId};
use crate::entropy::EntropyConfig;
use crate::error::{Error, Result};
use crate::hermitian::{validate_density, CMatrix, ComplexMatrix, DensityMatrix};
use crate::states::{haar_unitary, random_density, RandomMethod, SeedStream};

/// Entries with modulus at or below this count as structural zeros.
pub const STRUCTURAL_ZERO: f64 = 1e-14;

/// Completeness tolerance `‖Σ K†K - I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Kraus operators of an incoherent channel (strictly incoherent when `strict`).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<CMatrix>,
    strict: bool,
}

fn nonzeros_per_column(k: &CMatrix) -> impl Iterator<Item = usize> + '_ {
    (0..k.ncols()).map(move |j| k.column(j).iter().filter(|z| z.norm() > STRUCTURAL_ZERO).count())
}

fn nonzeros_per_row(k: &CMatrix) -> impl Iterator<Item = usize> + '_ {
    (0..k.nrows()).map(move |i| k.row(i).iter().filter(|z| z.norm() > STRUCTURAL_ZERO).count())
}

impl KrausSet {
    /// Checks completeness and the (strict) incoherent structure.
    pub fn new(operators: Vec<CMatrix>, strict: bool) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidKraus("no operators".into()))?;
        let d = first.nrows();
        let mut sum = CMatrix::zeros(d, d);
        for (m, k) in operators.iter().enumerate() {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::InvalidKraus(format!("operator {m} is not {d}x{d}")));
            }
            if nonzeros_per_column(k).any(|c| c > 1) {
                return Err(Error::InvalidKraus(format!(
                    "operator {m} has a column with more than one nonzero entry"
                )));
            }
            if strict && nonzeros_per_row(k).any(|c| c > 1) {
                return Err(Error::InvalidKraus(format!(
                    "operator {m} has a row with more than one nonzero entry"
                )));
            }
            sum += k.adjoint() * k;
        }
        let dev = (sum - CMatrix::identity(d, d)).camax();
        if dev > COMPLETENESS_TOL {
            return Err(Error::InvalidKraus(format!("completeness violated by {dev:e}")));
        }
        Ok(Self {
            dim: d,
            operators,
            strict,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim: d,
            operators: vec![CMatrix::identity(d, d)],
            strict: true,
        }
    }

    /// `K_m = |m⟩⟨m|`.
    pub fn dephasing(d: usize) -> Self {
        let operators = (0..d)
            .map(|m| {
                let mut k = CMatrix::zeros(d, d);
                k[(m, m)] = Complex64::new(1.0, 0.0);
                k
            })
            .collect();
        Self {
            dim: d,
            operators,
            strict: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// `‖Σ K†K - I‖_max`.
    pub fn completeness_error(&self) -> f64 {
        let d = self.dim;
        let mut sum = CMatrix::zeros(d, d);
        for k in &self.operators {
            sum += k.adjoint() * k;
        }
        (sum - CMatrix::identity(d, d)).camax()
    }
}

/// Random incoherent channel with exactly `n` Kraus operators.
///
/// Operators come in groups sharing one column map `f: {0..d} → {0..d}` (a permutation when
/// `strict`). A group whose map sends at most `c` columns to the same row holds `c` operators
/// `K_s = Σ_i √w_i · U_{s, r(i)} |f(i)⟩⟨i|`, where `r(i)` ranks column `i` among the columns that
/// share its target row and `U` is a Haar `c × c` unitary. Columns colliding inside a group are
/// then orthogonal across the group, and per-column weights `w` summing to one over groups give
/// `Σ K†K = I`.
pub fn random_io_kraus<R: Rng + ?Sized>(d: usize, n: usize, strict: bool, rng: &mut R) -> Result<KrausSet> {
    if d < 1 {
        return Err(Error::DimensionTooSmall(d));
    }
    if n < 1 {
        return Err(Error::InvalidKraus("need at least one operator".into()));
    }
    const MAX_MAP_DRAWS: usize = 64;

    let mut groups: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let mut chosen = None;
        for _ in 0..MAX_MAP_DRAWS {
            let map: Vec<usize> = if strict {
                let mut p: Vec<usize> = (0..d).collect();
                p.shuffle(rng);
                p
            } else {
                (0..d).map(|_| rng.random_range(0..d)).collect()
            };
            let mut counts = vec![0usize; d];
            for &r in &map {
                counts[r] += 1;
            }
            let c = counts.into_iter().max().unwrap_or(1);
            if c <= remaining {
                chosen = Some((map, c));
                break;
            }
        }
        let (map, c) = chosen.unwrap_or_else(|| {
            let mut p: Vec<usize> = (0..d).collect();
            p.shuffle(rng);
            (p, 1)
        });
        remaining -= c;
        groups.push((map, c));
    }

    let g = groups.len();
    // weights[group][column], Dirichlet(1, .., 1) over groups for every column
    let mut weights = vec![vec![0.0; d]; g];
    for i in 0..d {
        let mut total = 0.0;
        for row in weights.iter_mut() {
            let e: f64 = Exp1.sample(rng);
            row[i] = e;
            total += e;
        }
        for row in weights.iter_mut() {
            row[i] /= total;
        }
    }

    let mut operators = Vec::with_capacity(n);
    for (gi, (map, c)) in groups.iter().enumerate() {
        let u = haar_unitary(*c, rng);
        let mut seen = vec![0usize; d];
        let rank_in_row: Vec<usize> = map
            .iter()
            .map(|&r| {
                let k = seen[r];
                seen[r] += 1;
                k
            })
            .collect();
        for s in 0..*c {
            let mut k = CMatrix::zeros(d, d);
            for i in 0..d {
                k[(map[i], i)] = u[(s, rank_in_row[i])] * weights[gi][i].sqrt();
            }
            operators.push(k);
        }
    }
    KrausSet::new(operators, strict)
}

/// `Σ K_m ρ K_m†` before revalidation.
pub fn channel_output_matrix(k: &KrausSet, rho: &DensityMatrix) -> Result<CMatrix> {
    if k.dim != rho.dim() {
        return Err(Error::DimMismatch(k.dim, rho.dim()));
    }
    let mut out = CMatrix::zeros(k.dim, k.dim);
    for op in &k.operators {
        out += op * rho.matrix() * op.adjoint();
    }
    Ok(out)
}

/// Non-selective channel output, revalidated as a density matrix.
pub fn apply_channel(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let out = channel_output_matrix(k, rho)?;
    validate_density(&ComplexMatrix::new(out), 1e-9)
}

/// `p_m = Tr(K_m ρ K_m†)` for every operator, including negligible ones.
pub fn outcome_probabilities(k: &KrausSet, rho: &DensityMatrix) -> Result<Vec<f64>> {
    if k.dim != rho.dim() {
        return Err(Error::DimMismatch(k.dim, rho.dim()));
    }
    Ok(k
        .operators
        .iter()
        .map(|op| {
            let s = op * rho.matrix() * op.adjoint();
            (0..k.dim).map(|i| s[(i, i)].re).sum()
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub index: usize,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// Post-measurement ensemble `{(p_m, K_m ρ K_m† / p_m)}` with outcomes at or below `prob_floor`
/// dropped.
pub fn selective_outcomes(k: &KrausSet, rho: &DensityMatrix, prob_floor: f64) -> Result<Vec<Outcome>> {
    if k.dim != rho.dim() {
        return Err(Error::DimMismatch(k.dim, rho.dim()));
    }
    let mut out = Vec::new();
    for (index, op) in k.operators.iter().enumerate() {
        let s = op * rho.matrix() * op.adjoint();
        let p: f64 = (0..k.dim).map(|i| s[(i, i)].re).sum();
        if p > prob_floor {
            out.push(Outcome {
                index,
                probability: p,
                state: DensityMatrix::from_psd_unnormalized(s),
            });
        }
    }
    Ok(out)
}

/// Named resource-theory checks run per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Nonnegativity,
    Faithfulness,
    Monotonicity,
    StrongMonotonicity,
    Convexity,
    CrossDominance,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Nonnegativity,
        Axiom::Faithfulness,
        Axiom::Monotonicity,
        Axiom::StrongMonotonicity,
        Axiom::Convexity,
        Axiom::CrossDominance,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Axiom::Nonnegativity => "nonnegativity",
            Axiom::Faithfulness => "faithfulness",
            Axiom::Monotonicity => "monotonicity",
            Axiom::StrongMonotonicity => "strong_monotonicity",
            Axiom::Convexity => "convexity",
            Axiom::CrossDominance => "cross_dominance",
        }
    }

    fn index(&self) -> usize {
        Axiom::ALL.iter().position(|a| a == self).expect("listed")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxiomTally {
    pub axiom: Axiom,
    pub checked: usize,
    pub passed: usize,
    /// Largest violation amount seen; a check fails when this exceeds the tolerance.
    pub worst_margin: f64,
}

/// One failing check, enough to replay the trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomFailure {
    pub seed: u64,
    pub stream_index: u64,
    pub measure: String,
    pub axiom: Axiom,
    pub margin: f64,
}

/// Per-trial numbers behind the monotonicity statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRecord {
    pub stream_index: u64,
    pub dim: usize,
    pub kraus_count: usize,
    pub c_before: f64,
    pub c_after: f64,
    pub c_selective: f64,
    /// `(A, B)` cross terms before, after the channel, and averaged over selective outcomes.
    pub cross_before: Option<(f64, f64)>,
    pub cross_after: Option<(f64, f64)>,
    pub cross_selective: Option<(f64, f64)>,
}

/// Mean drops of the two cross entropies under the sampled channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymmetryStats {
    pub samples: usize,
    pub mean_delta_a: f64,
    pub mean_delta_b: f64,
    pub mean_delta_a_selective: f64,
    pub mean_delta_b_selective: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub measure: String,
    pub trials: usize,
    /// Trials whose measure could not be evaluated (e.g. singular support without regularization).
    pub evaluation_errors: usize,
    pub tallies: Vec<AxiomTally>,
    pub failures: Vec<AxiomFailure>,
    pub asymmetry: Option<AsymmetryStats>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl AxiomReport {
    pub fn tally(&self, axiom: Axiom) -> &AxiomTally {
        &self.tallies[axiom.index()]
    }

    pub fn failure_count(&self, axiom: Axiom) -> usize {
        let t = self.tally(axiom);
        t.checked - t.passed
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.evaluation_errors == 0
    }
}

#[derive(Debug, Clone)]
pub struct AxiomSuiteConfig {
    pub measure: MeasureId,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub kraus_range: (usize, usize),
    pub strict: bool,
    pub entropy: EntropyConfig,
    pub master_seed: u64,
    pub tol: f64,
    /// Stream index of trial 0; later trials use consecutive indices.
    pub stream_offset: u64,
}

impl AxiomSuiteConfig {
    pub fn new(measure: MeasureId, dims: Vec<usize>, trials: usize, master_seed: u64) -> Self {
        Self {
            measure,
            dims,
            trials,
            kraus_range: (1, 6),
            strict: false,
            entropy: EntropyConfig::default(),
            master_seed,
            tol: 1e-8,
            stream_offset: 0,
        }
    }
}

struct TrialOutcome {
    checks: Vec<(Axiom, f64)>,
    record: Option<TrialRecord>,
    error: bool,
}

fn draw_state<R: Rng + ?Sized>(d: usize, full_rank: bool, rng: &mut R) -> Result<DensityMatrix> {
    let method = if rng.random_bool(0.5) {
        RandomMethod::Ginibre
    } else {
        RandomMethod::SpectrumHaar
    };
    let rank = if full_rank { d } else { rng.random_range(1..=d) };
    random_density(d, rank, method, rng)
}

fn run_trial(cfg: &AxiomSuiteConfig, stream_index: u64) -> Result<TrialOutcome> {
    let mut rng = SeedStream::new(cfg.master_seed, stream_index).rng();
    let d = cfg.dims[rng.random_range(0..cfg.dims.len())];
    let (n_lo, n_hi) = cfg.kraus_range;
    let n = rng.random_range(n_lo..=n_hi);
    let full_rank = cfg.measure.needs_full_rank();
    let rho = draw_state(d, full_rank, &mut rng)?;
    let channel = random_io_kraus(d, n, cfg.strict, &mut rng)?;
    let mixture_parts = [draw_state(d, full_rank, &mut rng)?, draw_state(d, full_rank, &mut rng)?];
    let q: Vec<f64> = (0..3).map(|_| Exp1.sample(&mut rng)).collect();

    let measure = |s: &DensityMatrix| cfg.measure.evaluate(s, &cfg.entropy);
    let tol = cfg.tol;

    let c = measure(&rho)?;
    let mut checks = vec![(Axiom::Nonnegativity, -c)];

    let c_incoherent = measure(&rho.dephase())?;
    let faith = if c <= tol && rho.max_off_diagonal() > tol.sqrt() {
        rho.max_off_diagonal()
    } else {
        c_incoherent
    };
    checks.push((Axiom::Faithfulness, faith));

    let out = apply_channel(&channel, &rho)?;
    let c_after = measure(&out)?;
    checks.push((Axiom::Monotonicity, c_after - c));

    let outcomes = selective_outcomes(&channel, &rho, 1e-12)?;
    let mut c_sel = 0.0;
    for o in &outcomes {
        c_sel += o.probability * measure(&o.state)?;
    }
    checks.push((Axiom::StrongMonotonicity, c_sel - c));

    let states = [rho.clone(), mixture_parts[0].clone(), mixture_parts[1].clone()];
    let mixed = DensityMatrix::mixture(&states, &q)?;
    let q_total: f64 = q.iter().sum();
    let mut avg = 0.0;
    for (s, w) in states.iter().zip(&q) {
        avg += w / q_total * measure(s)?;
    }
    checks.push((Axiom::Convexity, measure(&mixed)? - avg));

    if cfg.measure == MeasureId::Cross {
        let cr = c_rel_ent(&rho, &cfg.entropy)?;
        checks.push((Axiom::CrossDominance, cr - c));
    }

    let cross = |s: &DensityMatrix| cross_terms(s, &cfg.entropy).ok().map(|t| (t.a, t.b));
    let cross_before = cross(&rho);
    let cross_after = cross(&out);
    let cross_selective = outcomes.iter().try_fold((0.0, 0.0), |acc, o| {
        cross(&o.state).map(|(a, b)| (acc.0 + o.probability * a, acc.1 + o.probability * b))
    });

    Ok(TrialOutcome {
        checks,
        record: Some(TrialRecord {
            stream_index,
            dim: d,
            kraus_count: n,
            c_before: c,
            c_after,
            c_selective: c_sel,
            cross_before,
            cross_after,
            cross_selective,
        }),
        error: false,
    })
}

/// Runs the axiom checks over `trials` independent draws of (state, channel, mixture).
///
/// Trial `t` uses `SeedStream(master_seed, stream_offset + t)` and results are folded in trial
/// order, so the report does not depend on the rayon pool size.
pub fn axiom_suite(cfg: &AxiomSuiteConfig) -> Result<AxiomReport> {
    cfg.entropy.validate()?;
    if cfg.trials == 0 {
        return Err(Error::OutOfRange {
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d < 2 || !cfg.measure.valid_for(d)) {
        return Err(Error::DimensionTooSmall(cfg.dims.iter().copied().min().unwrap_or(0)));
    }
    let (lo, hi) = cfg.kraus_range;
    if lo == 0 || hi < lo {
        return Err(Error::InvalidKraus(format!("bad operator-count range {lo}..{hi}")));
    }

    let outcomes: Vec<TrialOutcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            run_trial(cfg, cfg.stream_offset + t).unwrap_or(TrialOutcome {
                checks: Vec::new(),
                record: None,
                error: true,
            })
        })
        .collect();

    let mut tallies: Vec<AxiomTally> = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomTally {
            axiom,
            checked: 0,
            passed: 0,
            worst_margin: f64::NEG_INFINITY,
        })
        .collect();
    let mut failures = Vec::new();
    let mut records = Vec::with_capacity(cfg.trials);
    let mut evaluation_errors = 0;
    let measure_label = cfg.measure.to_string();

    for (t, outcome) in outcomes.into_iter().enumerate() {
        if outcome.error {
            evaluation_errors += 1;
            continue;
        }
        for (axiom, margin) in outcome.checks {
            let tally = &mut tallies[axiom.index()];
            tally.checked += 1;
            tally.worst_margin = tally.worst_margin.max(margin);
            if margin <= cfg.tol {
                tally.passed += 1;
            } else {
                failures.push(AxiomFailure {
                    seed: cfg.master_seed,
                    stream_index: cfg.stream_offset + t as u64,
                    measure: measure_label.clone(),
                    axiom,
                    margin,
                });
            }
        }
        records.extend(outcome.record);
    }

    let asymmetry = asymmetry_stats(&records);
    Ok(AxiomReport {
        measure: measure_label,
        trials: cfg.trials,
        evaluation_errors,
        tallies,
        failures,
        asymmetry,
        records,
    })
}

fn asymmetry_stats(records: &[TrialRecord]) -> Option<AsymmetryStats> {
    let mut n = 0usize;
    let (mut da, mut db, mut dsa, mut dsb) = (0.0, 0.0, 0.0, 0.0);
    for r in records {
        if let (Some(before), Some(after), Some(sel)) = (r.cross_before, r.cross_after, r.cross_selective) {
            n += 1;
            da += before.0 - after.0;
            db += before.1 - after.1;
            dsa += before.0 - sel.0;
            dsb += before.1 - sel.1;
        }
    }
    (n > 0).then(|| AsymmetryStats {
        samples: n,
        mean_delta_a: da / n as f64,
        mean_delta_b: db / n as f64,
        mean_delta_a_selective: dsa / n as f64,
        mean_delta_b_selective: dsb / n as f64,
    })
}

/// One step of a repeated-channel evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionPoint {
    pub step: usize,
    pub a: f64,
    pub b: f64,
}

/// Cross terms along `steps` successive IO applications, reusing one channel or drawing a
/// fresh channel every step.
pub fn cross_entropy_evolution<R: Rng + ?Sized>(
    rho0: &DensityMatrix,
    steps: usize,
    kraus_count: usize,
    strict: bool,
    reuse_channel: bool,
    cfg: &EntropyConfig,
    rng: &mut R,
) -> Result<Vec<EvolutionPoint>> {
    let d = rho0.dim();
    let t0 = cross_terms(rho0, cfg)?;
    let mut points = vec![EvolutionPoint {
        step: 0,
        a: t0.a,
        b: t0.b,
    }];
    let mut rho = rho0.clone();
    let mut channel = random_io_kraus(d, kraus_count, strict, rng)?;
    for step in 1..=steps {
        if !reuse_channel && step > 1 {
            channel = random_io_kraus(d, kraus_count, strict, rng)?;
        }
        rho = apply_channel(&channel, &rho)?;
        let t = cross_terms(&rho, cfg)?;
        points.push(EvolutionPoint { step, a: t.a, b: t.b });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::c_l1;

    fn is_diagonal(m: &CMatrix, tol: f64) -> bool {
        let n = m.nrows();
        (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= tol))
    }

    #[test]
    fn single_strict_operator_is_a_phased_permutation() {
        let mut rng = SeedStream::new(1, 0).rng();
        for d in 2..=6 {
            let k = random_io_kraus(d, 1, true, &mut rng).unwrap();
            let op = &k.operators()[0];
            assert!((op.adjoint() * op - CMatrix::identity(d, d)).camax() < 1e-12);
            let rho = random_density(d, d, RandomMethod::Ginibre, &mut rng).unwrap();
            let out = apply_channel(&k, &rho).unwrap();
            let (a, b) = (rho.spectrum().unwrap(), out.spectrum().unwrap());
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn random_channels_are_complete() {
        let mut rng = SeedStream::new(2, 0).rng();
        for d in 2..=6 {
            for n in 1..=6 {
                for strict in [false, true] {
                    let k = random_io_kraus(d, n, strict, &mut rng).unwrap();
                    assert_eq!(k.len(), n);
                    assert!(k.completeness_error() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn incoherent_inputs_stay_incoherent() {
        let mut rng = SeedStream::new(3, 0).rng();
        for _ in 0..200 {
            let d = rng.random_range(2..=6);
            let n = rng.random_range(1..=6);
            let k = random_io_kraus(d, n, false, &mut rng).unwrap();
            let p: Vec<f64> = {
                let v: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut rng)).collect();
                let s: f64 = v.iter().sum();
                v.into_iter().map(|x| x / s).collect()
            };
            let rho = DensityMatrix::diagonal(&p).unwrap();
            for o in selective_outcomes(&k, &rho, 0.0).unwrap() {
                assert!(is_diagonal(o.state.matrix(), 1e-12));
            }
            let out = channel_output_matrix(&k, &rho).unwrap();
            assert!(is_diagonal(&out, 1e-12));
        }
    }

    #[test]
    fn strict_duals_preserve_incoherence() {
        let mut rng = SeedStream::new(4, 0).rng();
        for _ in 0..100 {
            let d = rng.random_range(2..=6);
            let k = random_io_kraus(d, rng.random_range(1..=5), true, &mut rng).unwrap();
            for op in k.operators() {
                let dual = op.adjoint();
                for i in 0..d {
                    let mut basis = CMatrix::zeros(d, d);
                    basis[(i, i)] = Complex64::new(1.0, 0.0);
                    assert!(is_diagonal(&(&dual * basis * op), 1e-12));
                }
            }
        }
    }

    #[test]
    fn identity_and_dephasing_channels() {
        let mut rng = SeedStream::new(5, 0).rng();
        let rho = random_density(3, 3, RandomMethod::Ginibre, &mut rng).unwrap();
        let same = apply_channel(&KrausSet::identity(3), &rho).unwrap();
        assert!((same.matrix() - rho.matrix()).camax() < 1e-14);
        let deph = apply_channel(&KrausSet::dephasing(3), &rho).unwrap();
        assert!((deph.matrix() - rho.dephase().matrix()).camax() < 1e-14);

        let outcomes = selective_outcomes(&KrausSet::dephasing(3), &rho, 1e-12).unwrap();
        let diag = rho.diagonal_entries();
        assert_eq!(outcomes.len(), 3);
        for o in &outcomes {
            assert!((o.probability - diag[o.index]).abs() < 1e-14);
            assert!((o.state.entry(o.index, o.index).re - 1.0).abs() < 1e-12);
        }
        assert_eq!(c_l1(&deph), 0.0);
    }

    #[test]
    fn outcome_probabilities_sum_to_one() {
        let mut rng = SeedStream::new(6, 0).rng();
        for _ in 0..200 {
            let d = rng.random_range(2..=6);
            let k = random_io_kraus(d, rng.random_range(1..=6), rng.random_bool(0.5), &mut rng).unwrap();
            let rho = random_density(d, rng.random_range(1..=d), RandomMethod::SpectrumHaar, &mut rng).unwrap();
            let total: f64 = outcome_probabilities(&k, &rho).unwrap().iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
            let raw = channel_output_matrix(&k, &rho).unwrap();
            let tr: f64 = (0..d).map(|i| raw[(i, i)].re).sum();
            assert!((tr - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn io_monotonicity_of_l1_on_plus_state() {
        let mut rng = SeedStream::new(7, 0).rng();
        let plus = DensityMatrix::pure(&[1.0.into(), 1.0.into()]).unwrap();
        for _ in 0..100 {
            let k = random_io_kraus(2, rng.random_range(1..=4), false, &mut rng).unwrap();
            let out = apply_channel(&k, &plus).unwrap();
            assert!(c_l1(&out) <= c_l1(&plus) + 1e-9);
        }
    }

    #[test]
    fn kraus_validation_rejects_bad_sets() {
        let d = 2;
        let mut k = CMatrix::zeros(d, d);
        k[(0, 0)] = Complex64::new(1.0, 0.0);
        k[(0, 1)] = Complex64::new(1.0, 0.0);
        // one nonzero per column, but not complete
        assert!(KrausSet::new(vec![k.clone()], false).is_err());
        let mut coherent = CMatrix::identity(d, d);
        coherent[(1, 0)] = Complex64::new(0.1, 0.0);
        assert!(KrausSet::new(vec![coherent], false).is_err());
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            apply_channel(&KrausSet::identity(2), &rho),
            Err(Error::DimMismatch(2, 3))
        ));
    }

    #[test]
    fn small_suite_is_worker_independent() {
        let cfg = AxiomSuiteConfig::new(MeasureId::RelEnt, vec![2, 3], 64, 99);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| axiom_suite(&cfg)).unwrap();
        let b = four.install(|| axiom_suite(&cfg)).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.tallies, b.tallies);
        assert!(a.all_passed(), "{:?}", a.failures);
    }

    #[test]
    fn evolution_records_each_step() {
        let cfg = EntropyConfig::default().with_eta(1e-9);
        let mut rng = SeedStream::new(8, 0).rng();
        let rho = random_density(3, 3, RandomMethod::Ginibre, &mut rng).unwrap();
        for reuse in [false, true] {
            let pts = cross_entropy_evolution(&rho, 5, 2, false, reuse, &cfg, &mut rng).unwrap();
            assert_eq!(pts.len(), 6);
            assert!(pts.iter().all(|p| p.a.is_finite() && p.b.is_finite()));
        }
    }
}
