//! One function per subcommand. Each trial draws from its own `SeedStream(master_seed, index)`
//! and results are written in index order.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};

use coherence_core::{
    axiom_suite, c2_measure, c_l1, c_rel_ent, cross_entropy_evolution, eur_curve_point, gil_report,
    plane_point, random_density, refined_eur_report, schur_horn_report, validate_density, Axiom,
    AxiomSuiteConfig, AxiomTally, ComplexMatrix, CurveFamily, DensityMatrix,
    EvolutionPoint, GilVerdict, MeasurementBasis, PlaneEnvelope, RandomMethod, SeedStream,
};
use coherence_core::{boundary_samples, coherence_walk, perturb, AsymmetryStats};

use crate::config::{BasisSpec, RunConfig, StateSpec};
use crate::output::{fmt_num, fmt_opt, write_json, CsvOut};
use crate::RunError;

/// Files written and the number of property violations found.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub violations: usize,
}

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool, RunError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| RunError::Runtime(e.to_string()))
}

fn par_trials<T, F>(cfg: &RunConfig, start: u64, count: usize, f: F) -> Result<Vec<T>, RunError>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    Ok(pool(cfg)?.install(|| (start..start + count as u64).into_par_iter().map(f).collect()))
}

struct Draw {
    d: usize,
    rank: usize,
    method: RandomMethod,
    rho: DensityMatrix,
}

fn draw_state<R: Rng + ?Sized>(cfg: &RunConfig, rng: &mut R) -> coherence_core::Result<Draw> {
    let d = cfg.dims[rng.random_range(0..cfg.dims.len())];
    let method = cfg.method.unwrap_or_else(|| {
        if rng.random_bool(0.5) {
            RandomMethod::Ginibre
        } else {
            RandomMethod::SpectrumHaar
        }
    });
    let rank = cfg.rank.unwrap_or_else(|| rng.random_range(1..=d));
    let rho = random_density(d, rank, method, rng)?;
    Ok(Draw { d, rank, method, rho })
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    ComplexMatrix::from_json(&text).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<DensityMatrix, RunError> {
    validate_density(&load_matrix(path)?, coherence_core::hermitian::DEFAULT_TOL)
        .map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

/// A fixed (non-random) state for dimension `d`.
fn fixed_state(spec: &StateSpec, d: usize, file: Option<&DensityMatrix>) -> coherence_core::Result<DensityMatrix> {
    match spec {
        StateSpec::MaximallyMixed => Ok(DensityMatrix::maximally_mixed(d)),
        StateSpec::Zero => {
            let mut p = vec![0.0; d];
            p[0] = 1.0;
            DensityMatrix::diagonal(&p)
        }
        StateSpec::Plus => DensityMatrix::pure(&vec![1.0.into(); d]),
        StateSpec::File(_) => Ok(file.expect("file state loaded").clone()),
        StateSpec::Random => unreachable!("random states are drawn per trial"),
    }
}

/// The state file fixes the dimension when one is given.
fn file_state(cfg: &mut RunConfig) -> Result<Option<DensityMatrix>, RunError> {
    if let StateSpec::File(path) = &cfg.state {
        let rho = load_state(path)?;
        cfg.dims = vec![rho.dim()];
        return Ok(Some(rho));
    }
    Ok(None)
}

fn ensure_out(cfg: &RunConfig) -> Result<(), RunError> {
    std::fs::create_dir_all(&cfg.out).map_err(RunError::Io)
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

#[derive(Serialize)]
struct SummaryHeader<'a> {
    config: &'a RunConfig,
    trials: usize,
    violations: usize,
    errors: usize,
}

// sh-scan

#[derive(Serialize)]
struct MajorizationViolation {
    seed: u64,
    kind: &'static str,
    matrix: serde_json::Value,
    spectrum: Vec<f64>,
    diagonal: Vec<f64>,
    k: usize,
    margin: f64,
}

#[derive(Serialize)]
struct ShScanSummary<'a> {
    #[serde(flatten)]
    header: SummaryHeader<'a>,
    plain_violations: usize,
    squared_violations: usize,
    min_margin_plain: f64,
    min_margin_squared: f64,
}

pub fn sh_scan(cfg: &RunConfig) -> Result<Outcome, RunError> {
    ensure_out(cfg)?;
    let rows = par_trials(cfg, 0, cfg.trials, |t| {
        let mut rng = SeedStream::new(cfg.master_seed, t).rng();
        let draw = draw_state(cfg, &mut rng)?;
        let rho = if cfg.perturb > 0.0 {
            perturb(&draw.rho, cfg.perturb, &mut rng)?
        } else {
            draw.rho.clone()
        };
        let report = schur_horn_report(&rho, cfg.tol)?;
        Ok::<_, coherence_core::Error>((draw, rho, report))
    })?;

    let path = cfg.out.join("sh_scan.csv");
    let mut csv = CsvOut::create(
        &path,
        &[
            "seed",
            "d",
            "rank",
            "method",
            "worst_margin_plain",
            "k_plain",
            "worst_margin_squared",
            "k_squared",
            "plain_ok",
            "squared_ok",
        ],
    )?;
    let mut dumps = Vec::new();
    let (mut plain_bad, mut squared_bad, mut errors) = (0, 0, 0);
    let (mut min_plain, mut min_squared) = (f64::INFINITY, f64::INFINITY);
    for (t, row) in rows.into_iter().enumerate() {
        let t = t as u64;
        let (draw, rho, r) = match row {
            Ok(v) => v,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        min_plain = min_plain.min(r.worst_margin_plain);
        min_squared = min_squared.min(r.worst_margin_squared);
        csv.row([
            t.to_string(),
            draw.d.to_string(),
            draw.rank.to_string(),
            draw.method.label().to_string(),
            fmt_num(r.worst_margin_plain),
            r.k_at_worst.to_string(),
            fmt_num(r.worst_margin_squared),
            r.k_at_worst_squared.to_string(),
            bool_str(r.plain_ok).into(),
            bool_str(r.squared_ok).into(),
        ])?;
        for (ok, kind, k, margin) in [
            (r.plain_ok, "plain", r.k_at_worst, r.worst_margin_plain),
            (r.squared_ok, "squared", r.k_at_worst_squared, r.worst_margin_squared),
        ] {
            if !ok {
                if kind == "plain" {
                    plain_bad += 1;
                } else {
                    squared_bad += 1;
                }
                dumps.push(MajorizationViolation {
                    seed: t,
                    kind,
                    matrix: rho.to_complex_matrix().to_json_value(),
                    spectrum: r.spectrum.clone(),
                    diagonal: r.diagonal.clone(),
                    k,
                    margin,
                });
            }
        }
    }
    let mut out = Outcome {
        files: vec![csv.finish()?],
        violations: plain_bad + squared_bad + errors,
    };
    out.files.push(write_json(&cfg.out.join("sh_scan_violations.json"), &dumps)?);
    out.files.push(write_json(
        &cfg.out.join("sh_scan_summary.json"),
        &ShScanSummary {
            header: SummaryHeader {
                config: cfg,
                trials: cfg.trials,
                violations: out.violations,
                errors,
            },
            plain_violations: plain_bad,
            squared_violations: squared_bad,
            min_margin_plain: min_plain,
            min_margin_squared: min_squared,
        },
    )?);
    Ok(out)
}

// axioms

#[derive(Serialize)]
struct AxiomSummary<'a> {
    #[serde(flatten)]
    header: SummaryHeader<'a>,
    measure: String,
    tallies: &'a [AxiomTally],
    asymmetry: Option<AsymmetryStats>,
    evolution_runs: usize,
    evolution_errors: usize,
}

/// Number of cross-entropy evolution traces written next to the axiom report.
pub const EVOLUTION_RUNS: usize = 8;

pub fn axioms(cfg: &RunConfig) -> Result<Outcome, RunError> {
    ensure_out(cfg)?;
    let entropy = cfg.entropy();
    let suite = AxiomSuiteConfig {
        measure: cfg.measure,
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        kraus_range: cfg.kraus,
        strict: cfg.strict,
        entropy,
        master_seed: cfg.master_seed,
        tol: cfg.tol,
        stream_offset: 0,
    };
    let report = pool(cfg)?.install(|| axiom_suite(&suite))?;
    let label = cfg.measure.to_string().replace(':', "_");
    let mut out = Outcome::default();

    let mut tallies = CsvOut::create(
        &cfg.out.join(format!("axioms_{label}.csv")),
        &["axiom", "checked", "passed", "failed", "worst_margin"],
    )?;
    for a in Axiom::ALL {
        let t = report.tally(a);
        if t.checked == 0 {
            continue;
        }
        tallies.row([
            a.label().to_string(),
            t.checked.to_string(),
            t.passed.to_string(),
            (t.checked - t.passed).to_string(),
            fmt_num(t.worst_margin),
        ])?;
    }
    out.files.push(tallies.finish()?);

    let mut trials = CsvOut::create(
        &cfg.out.join(format!("axioms_{label}_trials.csv")),
        &[
            "seed",
            "d",
            "kraus",
            "c_before",
            "c_after",
            "c_selective",
            "a_before",
            "b_before",
            "a_after",
            "b_after",
            "a_selective",
            "b_selective",
        ],
    )?;
    for r in &report.records {
        let pair = |p: Option<(f64, f64)>| (fmt_opt(p.map(|x| x.0)), fmt_opt(p.map(|x| x.1)));
        let (ab, bb) = pair(r.cross_before);
        let (aa, ba) = pair(r.cross_after);
        let (asel, bsel) = pair(r.cross_selective);
        trials.row([
            r.stream_index.to_string(),
            r.dim.to_string(),
            r.kraus_count.to_string(),
            fmt_num(r.c_before),
            fmt_num(r.c_after),
            fmt_num(r.c_selective),
            ab,
            bb,
            aa,
            ba,
            asel,
            bsel,
        ])?;
    }
    out.files.push(trials.finish()?);

    let runs = par_trials(cfg, cfg.trials as u64, EVOLUTION_RUNS, |s| {
        let mut rng = SeedStream::new(cfg.master_seed, s).rng();
        let d = cfg.dims[rng.random_range(0..cfg.dims.len())];
        let n = rng.random_range(cfg.kraus.0..=cfg.kraus.1);
        let rho0 = random_density(d, d, RandomMethod::Ginibre, &mut rng)?;
        cross_entropy_evolution(&rho0, cfg.steps, n, cfg.strict, cfg.reuse_channel, &entropy, &mut rng)
            .map(|pts| (d, n, pts))
    })?;
    let mut evo = CsvOut::create(
        &cfg.out.join(format!("axioms_{label}_evolution.csv")),
        &["run", "d", "kraus", "step", "a", "b"],
    )?;
    let mut evolution_errors = 0;
    for (run, res) in runs.into_iter().enumerate() {
        match res {
            Ok((d, n, pts)) => {
                for EvolutionPoint { step, a, b } in pts {
                    evo.row([
                        run.to_string(),
                        d.to_string(),
                        n.to_string(),
                        step.to_string(),
                        fmt_num(a),
                        fmt_num(b),
                    ])?;
                }
            }
            Err(_) => evolution_errors += 1,
        }
    }
    out.files.push(evo.finish()?);

    out.violations = report.failures.len() + report.evaluation_errors;
    out.files.push(write_json(
        &cfg.out.join(format!("axioms_{label}_failures.json")),
        &report.failures,
    )?);
    out.files.push(write_json(
        &cfg.out.join(format!("axioms_{label}_summary.json")),
        &AxiomSummary {
            header: SummaryHeader {
                config: cfg,
                trials: cfg.trials,
                violations: out.violations,
                errors: report.evaluation_errors,
            },
            measure: report.measure.clone(),
            tallies: &report.tallies,
            asymmetry: report.asymmetry,
            evolution_runs: EVOLUTION_RUNS,
            evolution_errors,
        },
    )?);
    Ok(out)
}

// plane

#[derive(Serialize)]
struct ContainmentViolation {
    seed: u64,
    d: usize,
    s2: f64,
    svn: f64,
    lower_margin: Option<f64>,
    upper_margin: f64,
}

#[derive(Serialize)]
struct PlaneSummary<'a> {
    #[serde(flatten)]
    header: SummaryHeader<'a>,
    beyond_qubit_range: usize,
    min_lower_margin: f64,
    min_upper_margin: f64,
    violations_detail: Vec<ContainmentViolation>,
}

/// Interpolation slack for the containment check.
pub const CONTAINMENT_SLACK: f64 = 1e-6;

pub fn plane(cfg: &RunConfig) -> Result<Outcome, RunError> {
    ensure_out(cfg)?;
    let entropy = cfg.entropy();
    let mut out = Outcome::default();
    for &d in &cfg.dims {
        for fam in CurveFamily::all_for(d) {
            let path = cfg.out.join(format!("plane_{}_d{d}.csv", fam.kind.label()));
            let mut csv = CsvOut::create(&path, &["family", "d", "t", "s2", "svn"])?;
            for (t, p) in boundary_samples(&fam, cfg.samples, &entropy)? {
                csv.row([
                    fam.kind.label().to_string(),
                    d.to_string(),
                    fmt_num(t),
                    fmt_num(p.s2),
                    fmt_num(p.svn),
                ])?;
            }
            out.files.push(csv.finish()?);
        }
    }

    let envelopes = cfg
        .dims
        .iter()
        .map(|&d| PlaneEnvelope::new(d, cfg.samples, &entropy).map(|e| (d, e)))
        .collect::<coherence_core::Result<Vec<_>>>()?;
    let rows = par_trials(cfg, 0, cfg.trials, |t| {
        let mut rng = SeedStream::new(cfg.master_seed, t).rng();
        let draw = draw_state(cfg, &mut rng)?;
        let spec = draw.rho.spectrum()?;
        let p = plane_point(&spec, &entropy);
        let c_r = c_rel_ent(&draw.rho, &entropy)?;
        Ok::<_, coherence_core::Error>((draw.d, draw.rank, p, c_l1(&draw.rho), c_r, c2_measure(&draw.rho)))
    })?;

    let mut csv = CsvOut::create(
        &cfg.out.join("plane_scatter.csv"),
        &["seed", "d", "rank", "s2", "svn", "c_l1", "c_r", "c2"],
    )?;
    let mut detail = Vec::new();
    let (mut beyond, mut errors) = (0, 0);
    let (mut min_lower, mut min_upper) = (f64::INFINITY, f64::INFINITY);
    for (t, row) in rows.into_iter().enumerate() {
        let Ok((d, rank, p, l1, cr, c2)) = row else {
            errors += 1;
            continue;
        };
        csv.row([
            t.to_string(),
            d.to_string(),
            rank.to_string(),
            fmt_num(p.s2),
            fmt_num(p.svn),
            fmt_num(l1),
            fmt_num(cr),
            fmt_num(c2),
        ])?;
        let env = &envelopes.iter().find(|(e, _)| *e == d).expect("envelope per d").1;
        let c = env.locate(p);
        match c.lower_margin {
            Some(m) => min_lower = min_lower.min(m),
            None => beyond += 1,
        }
        min_upper = min_upper.min(c.upper_margin);
        if !c.holds(CONTAINMENT_SLACK) {
            detail.push(ContainmentViolation {
                seed: t as u64,
                d,
                s2: p.s2,
                svn: p.svn,
                lower_margin: c.lower_margin,
                upper_margin: c.upper_margin,
            });
        }
    }
    out.files.push(csv.finish()?);
    out.violations = detail.len() + errors;
    out.files.push(write_json(
        &cfg.out.join("plane_summary.json"),
        &PlaneSummary {
            header: SummaryHeader {
                config: cfg,
                trials: cfg.trials,
                violations: out.violations,
                errors,
            },
            beyond_qubit_range: beyond,
            min_lower_margin: min_lower,
            min_upper_margin: min_upper,
            violations_detail: detail,
        },
    )?);
    Ok(out)
}

// walk

#[derive(Serialize)]
struct WalkSummary<'a> {
    #[serde(flatten)]
    header: SummaryHeader<'a>,
    accepted_steps: Vec<usize>,
    max_diagonal_drift: Vec<f64>,
}

/// Largest allowed drift of the diagonal along a trajectory.
pub const DIAGONAL_DRIFT_TOL: f64 = 1e-9;

pub fn walk(cfg: &RunConfig) -> Result<Outcome, RunError> {
    ensure_out(cfg)?;
    let mut cfg = cfg.clone();
    let file = file_state(&mut cfg)?;
    let cfg = &cfg;
    let entropy = cfg.entropy();
    let mut out = Outcome::default();
    let mut accepted_steps = Vec::new();
    let mut drifts = Vec::new();
    for (i, &d) in cfg.dims.iter().enumerate() {
        let mut rng = SeedStream::new(cfg.master_seed, i as u64).rng();
        let rho0 = match cfg.state {
            StateSpec::Random => draw_state(&RunConfig { dims: vec![d], ..cfg.clone() }, &mut rng)?.rho,
            ref s => fixed_state(s, d, file.as_ref())?,
        };
        let traj = coherence_walk(&rho0, cfg.steps, cfg.strength, &entropy, &mut rng)?;
        let diag0 = rho0.diagonal_entries();
        let mut drift: f64 = 0.0;
        let mut csv = CsvOut::create(
            &cfg.out.join(format!("walk_d{d}.csv")),
            &["step", "scale", "accepted", "halvings", "c_l1", "s2", "svn", "c_r", "c2"],
        )?;
        for (rec, state) in traj.records.iter().zip(&traj.states) {
            for (a, b) in state.diagonal_entries().iter().zip(&diag0) {
                drift = drift.max((a - b).abs());
            }
            csv.row([
                rec.step.to_string(),
                fmt_num(rec.scale),
                bool_str(rec.accepted).into(),
                rec.halvings.to_string(),
                fmt_num(rec.c_l1),
                fmt_num(rec.s2),
                fmt_num(rec.svn),
                fmt_num(c_rel_ent(state, &entropy)?),
                fmt_num(c2_measure(state)),
            ])?;
        }
        out.files.push(csv.finish()?);
        if drift > DIAGONAL_DRIFT_TOL {
            out.violations += 1;
        }
        drifts.push(drift);
        accepted_steps.push(traj.records.iter().skip(1).filter(|r| r.accepted).count());
    }
    out.files.push(write_json(
        &cfg.out.join("walk_summary.json"),
        &WalkSummary {
            header: SummaryHeader {
                config: cfg,
                trials: cfg.dims.len(),
                violations: out.violations,
                errors: 0,
            },
            accepted_steps,
            max_diagonal_drift: drifts,
        },
    )?);
    Ok(out)
}

// eur

#[derive(Serialize)]
struct EurSummary<'a> {
    #[serde(flatten)]
    header: SummaryHeader<'a>,
    two_basis_rows: usize,
    refined_tighter: usize,
    refined_tighter_fraction: Option<f64>,
    min_slack: f64,
}

fn build_bases<R: Rng + ?Sized>(
    specs: &[BasisSpec],
    files: &[Option<MeasurementBasis>],
    d: usize,
    rng: &mut R,
) -> Vec<MeasurementBasis> {
    specs
        .iter()
        .zip(files)
        .map(|(s, f)| match s {
            BasisSpec::Computational => MeasurementBasis::computational(d),
            BasisSpec::Fourier => MeasurementBasis::fourier(d),
            BasisSpec::Haar => MeasurementBasis::haar(d, rng),
            BasisSpec::File(_) => f.clone().expect("file basis loaded"),
        })
        .collect()
}

pub fn eur(cfg: &RunConfig) -> Result<Outcome, RunError> {
    ensure_out(cfg)?;
    let mut cfg = cfg.clone();
    let file = file_state(&mut cfg)?;
    let files = cfg
        .bases
        .iter()
        .map(|b| match b {
            BasisSpec::File(p) => {
                let m = load_matrix(p)?;
                let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                MeasurementBasis::from_matrix(&m, name)
                    .map(Some)
                    .map_err(|e| RunError::Input(format!("{}: {e}", p.display())))
            }
            _ => Ok(None),
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    for f in files.iter().flatten() {
        if cfg.dims.iter().any(|&d| d != f.dim()) {
            return Err(RunError::Input(format!(
                "basis `{}` has dimension {} but d = {:?}",
                f.label(),
                f.dim(),
                cfg.dims
            )));
        }
    }
    let cfg = &cfg;
    let entropy = cfg.entropy();

    let rows = par_trials(cfg, 0, cfg.trials, |t| {
        let mut rng = SeedStream::new(cfg.master_seed, t).rng();
        let (d, rho) = match cfg.state {
            StateSpec::Random => {
                let draw = draw_state(cfg, &mut rng)?;
                (draw.d, draw.rho)
            }
            ref s => {
                let d = cfg.dims[rng.random_range(0..cfg.dims.len())];
                (d, fixed_state(s, d, file.as_ref())?)
            }
        };
        let bases = build_bases(&cfg.bases, &files, d, &mut rng);
        refined_eur_report(&rho, &bases, cfg.root, &entropy).map(|r| (d, r))
    })?;

    let n = cfg.bases.len();
    let mut header: Vec<String> = vec!["seed".into(), "d".into(), "basis_labels".into()];
    header.extend((1..=n).map(|j| format!("h_{j}")));
    header.extend((1..=n).map(|j| format!("lambda_max_{j}")));
    header.extend(["lhs", "refined_rhs", "mu_rhs", "holds", "refined_tighter"].map(String::from));
    if cfg.root.is_some() {
        header.push("root_rhs".into());
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Outcome::default();
    let mut csv = CsvOut::create(&cfg.out.join("eur.csv"), &header_refs)?;
    let (mut bad, mut errors, mut two, mut tighter) = (0, 0, 0, 0);
    let mut min_slack = f64::INFINITY;
    for (t, row) in rows.into_iter().enumerate() {
        let Ok((d, r)) = row else {
            errors += 1;
            continue;
        };
        let mut fields = vec![t.to_string(), d.to_string(), r.labels.join(";")];
        fields.extend(r.entropies.iter().map(|&h| fmt_num(h)));
        fields.extend(r.max_probs.iter().map(|&m| fmt_num(m)));
        fields.extend([
            fmt_num(r.lhs),
            fmt_num(r.refined_rhs),
            fmt_opt(r.mu_rhs),
            bool_str(r.holds).into(),
            bool_str(r.refined_tighter).into(),
        ]);
        if cfg.root.is_some() {
            fields.push(fmt_opt(r.root_rhs));
        }
        csv.row(fields)?;
        min_slack = min_slack.min(r.lhs - r.refined_rhs);
        if !r.holds {
            bad += 1;
        }
        if r.mu_rhs.is_some() {
            two += 1;
            if r.refined_tighter {
                tighter += 1;
            }
        }
    }
    out.files.push(csv.finish()?);

    for &d in &cfg.dims {
        let mut curve = CsvOut::create(&cfg.out.join(format!("eur_curve_d{d}.csv")), &["d", "a", "x", "y"])?;
        let lo = 1.0 / d as f64;
        for i in 0..cfg.samples {
            let a = (1.0 - (1.0 - lo) * i as f64 / (cfg.samples - 1) as f64).max(lo);
            let (x, y) = eur_curve_point(d, a, &entropy)?;
            curve.row([d.to_string(), fmt_num(a), fmt_num(x), fmt_num(y)])?;
        }
        out.files.push(curve.finish()?);
    }

    out.violations = bad + errors;
    out.files.push(write_json(
        &cfg.out.join("eur_summary.json"),
        &EurSummary {
            header: SummaryHeader {
                config: cfg,
                trials: cfg.trials,
                violations: out.violations,
                errors,
            },
            two_basis_rows: two,
            refined_tighter: tighter,
            refined_tighter_fraction: (two > 0).then(|| tighter as f64 / two as f64),
            min_slack,
        },
    )?);
    Ok(out)
}

// gil

#[derive(Serialize)]
struct GilSummary<'a> {
    #[serde(flatten)]
    header: SummaryHeader<'a>,
    forward_holds: usize,
    reverse_holds: usize,
    mixed: usize,
}

pub fn gil(cfg: &RunConfig) -> Result<Outcome, RunError> {
    ensure_out(cfg)?;
    let rows = par_trials(cfg, 0, cfg.trials, |t| {
        let mut rng = SeedStream::new(cfg.master_seed, t).rng();
        let draw = draw_state(cfg, &mut rng)?;
        gil_report(&draw.rho, cfg.tol).map(|r| (draw.d, draw.rank, r))
    })?;
    let mut out = Outcome::default();
    let mut csv = CsvOut::create(
        &cfg.out.join("gil.csv"),
        &["seed", "d", "rank", "verdict", "min_difference", "max_difference"],
    )?;
    let verdicts = [GilVerdict::ForwardHolds, GilVerdict::ReverseHolds, GilVerdict::Mixed];
    let mut table: Vec<(usize, [usize; 3])> = cfg.dims.iter().map(|&d| (d, [0; 3])).collect();
    let mut errors = 0;
    for (t, row) in rows.into_iter().enumerate() {
        let Ok((d, rank, r)) = row else {
            errors += 1;
            continue;
        };
        let lo = r.differences.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = r.differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        csv.row([
            t.to_string(),
            d.to_string(),
            rank.to_string(),
            r.verdict.label().to_string(),
            fmt_num(lo),
            fmt_num(hi),
        ])?;
        let v = verdicts.iter().position(|&v| v == r.verdict).expect("known verdict");
        if let Some(entry) = table.iter_mut().find(|(e, _)| *e == d) {
            entry.1[v] += 1;
        }
    }
    out.files.push(csv.finish()?);
    let mut freq = CsvOut::create(
        &cfg.out.join("gil_table.csv"),
        &["d", "trials", "forward_holds", "reverse_holds", "mixed"],
    )?;
    let mut totals = [0usize; 3];
    for (d, counts) in &table {
        freq.row([
            d.to_string(),
            counts.iter().sum::<usize>().to_string(),
            counts[0].to_string(),
            counts[1].to_string(),
            counts[2].to_string(),
        ])?;
        for i in 0..3 {
            totals[i] += counts[i];
        }
    }
    out.files.push(freq.finish()?);
    out.violations = errors;
    out.files.push(write_json(
        &cfg.out.join("gil_summary.json"),
        &GilSummary {
            header: SummaryHeader {
                config: cfg,
                trials: cfg.trials,
                violations: errors,
                errors,
            },
            forward_holds: totals[0],
            reverse_holds: totals[1],
            mixed: totals[2],
        },
    )?);
    Ok(out)
}
