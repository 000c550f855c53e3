//! Acceptance criteria for the coherence toolkit, each returning a [`Verdict`].
//!
//! Trial `t` of every Monte Carlo criterion draws from `SeedStream(SEED, t)`.

use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use coherence_core::*;

pub const SEED: u64 = 20240611;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        format!("{} {:<14} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.detail)
    }
}

/// Random state with a random generator and a random rank in `1..=d`.
pub fn mixed_state<R: Rng + ?Sized>(dims: &[usize], full_rank: bool, rng: &mut R) -> DensityMatrix {
    let d = dims[rng.random_range(0..dims.len())];
    let method = if rng.random_bool(0.5) {
        RandomMethod::Ginibre
    } else {
        RandomMethod::SpectrumHaar
    };
    let rank = if full_rank { d } else { rng.random_range(1..=d) };
    random_density(d, rank, method, rng).expect("valid sampler arguments")
}

fn par_count<F>(trials: u64, f: F) -> (usize, f64)
where
    F: Fn(u64) -> Option<f64> + Sync + Send,
{
    // (violations, worst margin); `f` returns the violation margin or None when fine
    let margins: Vec<Option<f64>> = (0..trials).into_par_iter().map(f).collect();
    let bad: Vec<f64> = margins.into_iter().flatten().collect();
    let worst = bad.iter().copied().fold(0.0, f64::max);
    (bad.len(), worst)
}

const DIMS_2_8: [usize; 7] = [2, 3, 4, 5, 6, 7, 8];
const DIMS_2_6: [usize; 5] = [2, 3, 4, 5, 6];

pub fn schur_horn(trials: u64) -> Verdict {
    let (bad, worst) = par_count(trials, |t| {
        let mut rng = SeedStream::new(SEED, t).rng();
        let rho = mixed_state(&DIMS_2_8, false, &mut rng);
        let r = schur_horn_report(&rho, 1e-10).expect("report");
        (!r.plain_ok).then_some(-r.worst_margin_plain)
    });
    Verdict::new(
        "1 sh-plain",
        bad == 0,
        format!("{bad} violations in {trials} states (worst {worst:.3e})"),
    )
}

pub fn squared_schur_horn(trials: u64) -> Verdict {
    let (bad, worst) = par_count(trials, |t| {
        let mut rng = SeedStream::new(SEED, t).rng();
        let rho = mixed_state(&DIMS_2_8, false, &mut rng);
        let rho = perturb(&rho, 1e-3, &mut rng).expect("perturbation");
        let r = schur_horn_report(&rho, 1e-10).expect("report");
        (!r.squared_ok).then_some(-r.worst_margin_squared)
    });
    Verdict::new(
        "2 sh-squared",
        bad == 0,
        format!("{bad} weak-majorization violations in {trials} perturbed states (worst {worst:.3e})"),
    )
}

/// Runs the axiom suite over IO and SIO channels, `trials` each.
pub fn axioms(measure: MeasureId, trials: usize) -> Verdict {
    let mut failed: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut errors = 0;
    let mut worst = 0.0f64;
    for (strict, offset) in [(false, 0u64), (true, trials as u64)] {
        let mut cfg = AxiomSuiteConfig::new(measure, DIMS_2_6.to_vec(), trials, SEED);
        cfg.strict = strict;
        cfg.stream_offset = offset;
        cfg.kraus_range = (1, 6);
        cfg.tol = 1e-8;
        let report = axiom_suite(&cfg).expect("suite runs");
        errors += report.evaluation_errors;
        for f in &report.failures {
            *failed.entry(f.axiom.label()).or_default() += 1;
            worst = worst.max(f.margin);
        }
    }
    let detail = if failed.is_empty() && errors == 0 {
        format!("0 failures in {} IO + {} SIO trials", trials, trials)
    } else {
        let parts: Vec<String> = failed.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "failures {} errors={errors} worst margin {worst:.3e} over {} IO + {} SIO trials",
            parts.join(" "),
            trials,
            trials
        )
    };
    Verdict::new(
        format!("3 axioms {measure}"),
        failed.is_empty() && errors == 0,
        detail,
    )
}

fn cross_cfg() -> EntropyConfig {
    EntropyConfig::default().with_eta(1e-9)
}

pub fn cross_nonnegative(trials: u64) -> Verdict {
    let cfg = cross_cfg();
    let (bad, worst) = par_count(trials, |t| {
        let mut rng = SeedStream::new(SEED, t).rng();
        let rho = mixed_state(&DIMS_2_6, true, &mut rng);
        let c = c_cross(&rho, &cfg).expect("full rank");
        (c < -1e-9).then_some(-c)
    });
    Verdict::new(
        "4a cross>=0",
        bad == 0,
        format!("{bad} negative values in {trials} full-rank states (worst {worst:.3e})"),
    )
}

pub fn cross_dominance(trials: u64) -> Verdict {
    let cfg = cross_cfg();
    let (bad, worst) = par_count(trials, |t| {
        let mut rng = SeedStream::new(SEED, t).rng();
        let rho = mixed_state(&DIMS_2_6, true, &mut rng);
        let gap = c_cross(&rho, &cfg).expect("full rank") - c_rel_ent(&rho, &cfg).expect("entropy");
        (gap < -1e-9).then_some(-gap)
    });
    Verdict::new(
        "4b cross>=c_r",
        bad == 0,
        format!("{bad} of {trials} full-rank states have C_cross < C_r - 1e-9 (worst {worst:.3e})"),
    )
}

pub fn cross_asymmetry(trials: usize) -> Verdict {
    let mut cfg = AxiomSuiteConfig::new(MeasureId::Cross, DIMS_2_6.to_vec(), trials, SEED);
    cfg.entropy = cross_cfg();
    let report = axiom_suite(&cfg).expect("suite runs");
    match report.asymmetry {
        Some(a) => Verdict::new(
            "4c asymmetry",
            a.mean_delta_a > a.mean_delta_b,
            format!(
                "mean dA = {:.6}, mean dB = {:.6} over {} channel draws",
                a.mean_delta_a, a.mean_delta_b, a.samples
            ),
        ),
        None => Verdict::new("4c asymmetry", false, "no trial produced finite cross terms"),
    }
}

pub fn diagonal_trace_identity(trials: u64) -> Verdict {
    let cfg = EntropyConfig::default();
    let (bad, worst) = par_count(trials, |t| {
        let mut rng = SeedStream::new(SEED, t).rng();
        let rho = mixed_state(&DIMS_2_8, true, &mut rng);
        let b = cross_terms(&rho, &cfg).expect("full rank").b;
        let s = von_neumann_entropy(&rho.dephase(), &cfg).expect("entropy");
        let err = (b - s).abs();
        (err > 1e-9).then_some(err)
    });
    Verdict::new(
        "5 identity",
        bad == 0,
        format!("{bad} of {trials} states off by more than 1e-9 (worst {worst:.3e})"),
    )
}

pub fn plane_endpoints() -> Verdict {
    let cfg = EntropyConfig::default();
    let mut worst = 0.0f64;
    for d in 2..=8usize {
        let up = CurveFamily::new(FamilyKind::UpperDegenerate, d).expect("defined for d >= 2");
        let top = plane_point(&family_spectrum(&up, 0.0).expect("t in range"), &cfg);
        let pure = plane_point(&family_spectrum(&up, 1.0).expect("t in range"), &cfg);
        worst = worst
            .max((top.svn - (d as f64).log2()).abs())
            .max((top.s2 - (1.0 - 1.0 / d as f64)).abs())
            .max(pure.svn.abs())
            .max(pure.s2.abs());
        let q = CurveFamily::new(FamilyKind::QubitLower, d).expect("defined for d >= 2");
        let end = plane_point(&family_spectrum(&q, 0.0).expect("t in range"), &cfg);
        worst = worst.max((end.s2 - 0.5).abs()).max((end.svn - 1.0).abs());
    }
    Verdict::new(
        "6 endpoints",
        worst <= 1e-12,
        format!("largest endpoint error {worst:.3e} over d = 2..8"),
    )
}

pub fn entropy_gap(trials: u64) -> Verdict {
    let cfg = EntropyConfig::default();
    let (bad, worst) = par_count(trials, |t| {
        let mut rng = SeedStream::new(SEED, t).rng();
        let rho = mixed_state(&DIMS_2_8, false, &mut rng);
        let g = entropy_lambda_gap(&rho, &cfg).expect("spectrum");
        (g < -1e-9).then_some(-g)
    });
    Verdict::new(
        "7 gap",
        bad == 0,
        format!("{bad} of {trials} states below -1e-9 (worst {worst:.3e})"),
    )
}

pub fn refined_eur(trials: u64) -> Verdict {
    let cfg = EntropyConfig::default();
    let rows: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = SeedStream::new(SEED, t).rng();
            let rho = mixed_state(&DIMS_2_6, false, &mut rng);
            let d = rho.dim();
            let bases = [MeasurementBasis::haar(d, &mut rng), MeasurementBasis::haar(d, &mut rng)];
            let r = refined_eur_report(&rho, &bases, None, &cfg).expect("report");
            (r.holds, r.refined_tighter)
        })
        .collect();
    let bad = rows.iter().filter(|r| !r.0).count();
    let tighter = rows.iter().filter(|r| r.1).count();
    Verdict::new(
        "8 eur",
        bad == 0,
        format!(
            "{bad} of {trials} draws violate; refined bound tighter than -2 log c in {:.4} of draws",
            tighter as f64 / trials as f64
        ),
    )
}

pub fn curve_convexity() -> Verdict {
    let cfg = EntropyConfig::default();
    let mut problems = 0;
    for d in 2..=8usize {
        let lo = 1.0 / d as f64;
        let pts: Vec<(f64, f64)> = (0..1000)
            .map(|i| {
                let a = (1.0 - (1.0 - lo) * i as f64 / 999.0).max(lo);
                eur_curve_point(d, a, &cfg).expect("a in range")
            })
            .collect();
        problems += pts.windows(2).filter(|w| w[1].0 <= w[0].0 - 1e-9).count();
        problems += pts.windows(2).filter(|w| w[1].1 < w[0].1 - 1e-9).count();
        let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        problems += slopes.windows(2).filter(|s| s[1] < s[0] - 1e-9).count();
    }
    Verdict::new(
        "9 convexity",
        problems == 0,
        format!("{problems} monotonicity or convexity breaks over 1000 samples, d = 2..8"),
    )
}

pub fn containment(per_dim: u64) -> Verdict {
    let cfg = EntropyConfig::default();
    let mut bad = 0;
    let mut beyond = 0;
    for d in 3..=6usize {
        let env = PlaneEnvelope::new(d, 512, &cfg).expect("envelope");
        let results: Vec<Containment> = (0..per_dim)
            .into_par_iter()
            .map(|t| {
                let mut rng = SeedStream::new(SEED + d as u64, t).rng();
                let rank = rng.random_range(1..=d);
                let lambda = random_simplex_spectrum(d, rank, &mut rng).expect("spectrum");
                env.locate(plane_point(&lambda, &cfg))
            })
            .collect();
        bad += results.iter().filter(|c| !c.holds(1e-6)).count();
        beyond += results.iter().filter(|c| c.lower_margin.is_none()).count();
    }
    Verdict::new(
        "10 containment",
        bad == 0,
        format!("{bad} of {} spectra outside the envelope; {beyond} beyond the qubit curve range", 4 * per_dim),
    )
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).expect("output directory") {
        let entry = entry.expect("dir entry");
        let name = entry.file_name().to_string_lossy().into_owned();
        out.insert(name, std::fs::read(entry.path()).expect("readable output"));
    }
    out
}

/// Argument lists for every subcommand used by the determinism check.
pub fn determinism_commands() -> Vec<Vec<&'static str>> {
    vec![
        vec!["sh-scan", "--d", "2..6", "--trials", "2000"],
        vec!["axioms", "--measure", "c_r", "--trials", "500"],
        vec!["axioms", "--measure", "c_cross", "--trials", "500", "--strict"],
        vec!["plane", "--d", "3..5", "--samples", "128", "--trials", "1000"],
        vec!["walk", "--d", "3..4", "--steps", "100"],
        vec!["walk", "--d", "3", "--state", "random"],
        vec!["eur", "--bases", "computational,fourier,haar", "--trials", "1000", "--root", "2"],
        vec!["gil", "--trials", "2000"],
    ]
}

pub fn determinism() -> Verdict {
    let mut mismatches = Vec::new();
    let mut files = 0;
    for args in determinism_commands() {
        let mut runs = Vec::new();
        for workers in ["1", "4", "4"] {
            let dir = tempfile::tempdir().expect("tempdir");
            let out = dir.path().to_string_lossy().into_owned();
            let mut argv = vec!["shcoh"];
            argv.extend(&args);
            argv.extend(["--seed", "11", "--workers", workers, "--out", &out]);
            let code = coherence_cli::main_with_args(argv);
            runs.push((code, read_tree(dir.path())));
        }
        files += runs[0].1.len();
        if runs.iter().any(|r| r.0 != runs[0].0 || r.1 != runs[0].1) {
            mismatches.push(args.join(" "));
        }
    }
    Verdict::new(
        "11 determinism",
        mismatches.is_empty() && files > 0,
        if mismatches.is_empty() {
            format!("{files} files byte-identical across reruns and worker counts 1/4")
        } else {
            format!("outputs differ for: {}", mismatches.join("; "))
        },
    )
}
