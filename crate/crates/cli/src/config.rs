//! Command line surface, optional TOML config file and the resolved [`RunConfig`].

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use coherence_core::{EntropyConfig, LogBase, MeasureId, RandomMethod};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("cannot read config file {path}: {reason}")]
    File { path: PathBuf, reason: String },
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

#[derive(Debug, Parser)]
#[command(name = "shcoh", version, about = "Coherence Monte Carlo harness")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// TOML file whose keys override command line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed [default: 0]
    #[arg(long, global = true, env = "SHCOH_SEED")]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core [default: 0]
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory [default: shcoh-out]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Logarithm base, 2 or e [default: 2]
    #[arg(long, global = true)]
    pub base: Option<String>,
    /// Mixing weight toward I/d before matrix logarithms [default: 1e-9 for axioms, else 0]
    #[arg(long, global = true)]
    pub eta: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SamplingArgs {
    /// Dimension: `4`, `2..6` (inclusive) or `2,3,5`
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Fixed rank; random in 1..=d when absent
    #[arg(long)]
    pub rank: Option<usize>,
    /// ginibre, spectrum-haar or mixed [default: mixed]
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Plain and squared Schur-Horn majorization scan.
    ShScan {
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Scale of the random Hermitian perturbation [default: 1e-3]
        #[arg(long)]
        perturb: Option<f64>,
        /// [default: 1e-10]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Resource-theory axiom suite under random incoherent channels.
    Axioms {
        #[command(flatten)]
        sampling: SamplingArgs,
        /// c_r, c_l1, c_cross, c_2, c_r_partial:K or c_cross_partial:K [default: c_r]
        #[arg(long)]
        measure: Option<String>,
        /// Kraus operator count range [default: 1..6]
        #[arg(long)]
        kraus: Option<String>,
        /// Strictly incoherent channels only
        #[arg(long)]
        strict: bool,
        /// [default: 1e-8]
        #[arg(long)]
        tol: Option<f64>,
        /// Length of the cross-entropy evolution traces [default: 20]
        #[arg(long)]
        steps: Option<usize>,
        /// Apply one channel repeatedly instead of drawing a fresh one per step
        #[arg(long)]
        reuse_channel: bool,
    },
    /// Boundary curves and a random scatter in the (S2, S_vN) plane.
    Plane {
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Points per boundary curve [default: 512]
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Coherence walk trajectory.
    Walk {
        #[arg(long)]
        d: Option<String>,
        /// [default: 200]
        #[arg(long)]
        steps: Option<usize>,
        /// [default: 0.005]
        #[arg(long)]
        strength: Option<f64>,
        /// maximally-mixed, random, zero, plus or a JSON matrix file [default: maximally-mixed]
        #[arg(long)]
        state: Option<String>,
    },
    /// Refined entropic uncertainty relation batch and boundary curve.
    Eur {
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Comma-separated: computational, fourier, haar or a JSON matrix file [default: computational,fourier]
        #[arg(long)]
        bases: Option<String>,
        /// maximally-mixed, random, zero, plus or a JSON matrix file [default: random]
        #[arg(long)]
        state: Option<String>,
        /// Root order n for the (1 - λ_max)^(1/n) bound
        #[arg(long)]
        root: Option<u32>,
        /// Points on the entropy versus 1 - a curve [default: 1000]
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Gil index direction frequencies.
    Gil {
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

/// Keys accepted in the `--config` file; each one overrides the flag of the same name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub base: Option<TomlScalar>,
    pub eta: Option<f64>,
    pub d: Option<TomlScalar>,
    pub trials: Option<usize>,
    pub rank: Option<usize>,
    pub method: Option<String>,
    pub perturb: Option<f64>,
    pub tol: Option<f64>,
    pub measure: Option<String>,
    pub kraus: Option<TomlScalar>,
    pub strict: Option<bool>,
    pub reuse_channel: Option<bool>,
    pub samples: Option<usize>,
    pub steps: Option<usize>,
    pub strength: Option<f64>,
    pub state: Option<String>,
    pub bases: Option<String>,
    pub root: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TomlScalar {
    Int(i64),
    Str(String),
}

impl TomlScalar {
    fn into_string(self) -> String {
        match self {
            TomlScalar::Int(i) => i.to_string(),
            TomlScalar::Str(s) => s,
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| ConfigError::File {
            path: path.to_owned(),
            reason: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ShScan,
    Axioms,
    Plane,
    Walk,
    Eur,
    Gil,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateSpec {
    MaximallyMixed,
    Random,
    Zero,
    Plus,
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "maximally-mixed" | "mixed" => StateSpec::MaximallyMixed,
            "random" => StateSpec::Random,
            "zero" => StateSpec::Zero,
            "plus" => StateSpec::Plus,
            "" => return Err("empty state".into()),
            path => StateSpec::File(PathBuf::from(path)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisSpec {
    Computational,
    Fourier,
    Haar,
    File(PathBuf),
}

impl BasisSpec {
    pub fn is_random(&self) -> bool {
        matches!(self, BasisSpec::Haar)
    }
}

fn parse_bases(s: &str) -> Result<Vec<BasisSpec>, String> {
    s.split(',')
        .map(str::trim)
        .map(|b| match b {
            "computational" | "z" => Ok(BasisSpec::Computational),
            "fourier" | "x" => Ok(BasisSpec::Fourier),
            "haar" => Ok(BasisSpec::Haar),
            "" => Err(format!("empty basis name in `{s}`")),
            path => Ok(BasisSpec::File(PathBuf::from(path))),
        })
        .collect()
}

/// `4`, `2..6` (inclusive) or `2,3,5`.
pub fn parse_usize_set(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    let bad = |e: std::num::ParseIntError| format!("`{s}`: {e}");
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(bad)?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(bad)?;
        if b < a {
            return Err(format!("empty range `{s}`"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(bad)).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(format!("empty set `{s}`"));
    }
    Ok(out)
}

/// Fully resolved run parameters. Worker count and output directory do not affect results and
/// are left out of the serialized form.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub dims: Vec<usize>,
    pub rank: Option<usize>,
    pub trials: usize,
    pub steps: usize,
    pub strength: f64,
    pub master_seed: u64,
    pub log_base: LogBase,
    pub eta: f64,
    pub kraus: (usize, usize),
    pub strict: bool,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub workers: usize,
    /// `None` alternates ginibre and spectrum-haar per trial.
    pub method: Option<RandomMethod>,
    pub perturb: f64,
    pub tol: f64,
    pub measure: MeasureId,
    pub reuse_channel: bool,
    pub samples: usize,
    pub state: StateSpec,
    pub bases: Vec<BasisSpec>,
    pub root: Option<u32>,
}

impl RunConfig {
    pub fn entropy(&self) -> EntropyConfig {
        EntropyConfig {
            log_base: self.log_base,
            ..EntropyConfig::default()
        }
        .with_eta(self.eta)
    }

    /// Defaults for `command` before any flag or file is applied.
    pub fn defaults(command: Command) -> Self {
        let dims: Vec<usize> = match command {
            Command::ShScan | Command::Gil => (2..=8).collect(),
            Command::Axioms | Command::Eur => (2..=6).collect(),
            Command::Plane | Command::Walk => vec![4],
        };
        RunConfig {
            command,
            dims,
            rank: None,
            trials: match command {
                Command::Plane => 1000,
                Command::Walk => 1,
                _ => 10_000,
            },
            steps: if command == Command::Axioms { 20 } else { 200 },
            strength: 0.005,
            master_seed: 0,
            log_base: LogBase::Two,
            eta: if command == Command::Axioms { 1e-9 } else { 0.0 },
            kraus: (1, 6),
            strict: false,
            out: PathBuf::from("shcoh-out"),
            workers: 0,
            method: None,
            perturb: 1e-3,
            tol: if command == Command::Axioms { 1e-8 } else { 1e-10 },
            measure: MeasureId::RelEnt,
            reuse_channel: false,
            samples: if command == Command::Eur { 1000 } else { 512 },
            state: if command == Command::Walk {
                StateSpec::MaximallyMixed
            } else {
                StateSpec::Random
            },
            bases: vec![BasisSpec::Computational, BasisSpec::Fourier],
            root: None,
        }
    }

    /// Flags first, then the config file on top, then validation.
    pub fn resolve(cli: Cli) -> Result<Self, ConfigError> {
        let file = match &cli.global.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Self::resolve_with(cli, file)
    }

    pub fn resolve_with(cli: Cli, file: ConfigFile) -> Result<Self, ConfigError> {
        let (mut flat, command) = Flat::from_cli(&cli);
        flat.overlay(file);
        let mut cfg = Self::defaults(command);

        if let Some(v) = flat.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = flat.workers {
            cfg.workers = v;
        }
        if let Some(v) = flat.out {
            cfg.out = v;
        }
        if let Some(v) = flat.base {
            cfg.log_base = v.parse().map_err(|e: String| invalid("base", e))?;
        }
        if let Some(v) = flat.eta {
            cfg.eta = v;
        }
        if let Some(v) = flat.d {
            cfg.dims = parse_usize_set(&v).map_err(|e| invalid("d", e))?;
        }
        if let Some(v) = flat.trials {
            cfg.trials = v;
        }
        cfg.rank = flat.rank;
        if let Some(v) = flat.method {
            cfg.method = match v.as_str() {
                "mixed" => None,
                m => Some(m.parse().map_err(|e: String| invalid("method", e))?),
            };
        }
        if let Some(v) = flat.perturb {
            cfg.perturb = v;
        }
        if let Some(v) = flat.tol {
            cfg.tol = v;
        }
        if let Some(v) = flat.measure {
            cfg.measure = v.parse().map_err(|e: String| invalid("measure", e))?;
        }
        if let Some(v) = flat.kraus {
            let set = parse_usize_set(&v).map_err(|e| invalid("kraus", e))?;
            cfg.kraus = (set[0], set[set.len() - 1]);
        }
        if let Some(v) = flat.strict {
            cfg.strict = v;
        }
        if let Some(v) = flat.reuse_channel {
            cfg.reuse_channel = v;
        }
        if let Some(v) = flat.samples {
            cfg.samples = v;
        }
        if let Some(v) = flat.steps {
            cfg.steps = v;
        }
        if let Some(v) = flat.strength {
            cfg.strength = v;
        }
        if let Some(v) = flat.state {
            cfg.state = v.parse().map_err(|e: String| invalid("state", e))?;
        }
        if let Some(v) = flat.bases {
            cfg.bases = parse_bases(&v).map_err(|e| invalid("bases", e))?;
        }
        cfg.root = flat.root;
        if command == Command::Eur && flat.trials.is_none() {
            let random = cfg.state == StateSpec::Random || cfg.bases.iter().any(BasisSpec::is_random);
            cfg.trials = if random { 10_000 } else { 1 };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dims.iter().any(|&d| d < 2) {
            return Err(invalid("d", "dimensions must be at least 2"));
        }
        if self.dims.iter().any(|&d| d > 64) {
            return Err(invalid("d", "dimensions above 64 are out of scope"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be positive"));
        }
        if let Some(r) = self.rank {
            if r == 0 || self.dims.iter().any(|&d| r > d) {
                return Err(invalid("rank", format!("rank {r} must lie in 1..=d for every d")));
            }
        }
        if !(0.0..1.0).contains(&self.eta) {
            return Err(invalid("eta", "must lie in [0, 1)"));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(invalid("tol", "must be a nonnegative number"));
        }
        if !(self.perturb >= 0.0 && self.perturb.is_finite()) {
            return Err(invalid("perturb", "must be a nonnegative number"));
        }
        if !(self.strength >= 0.0 && self.strength.is_finite()) {
            return Err(invalid("strength", "must be a nonnegative number"));
        }
        if self.kraus.0 == 0 {
            return Err(invalid("kraus", "operator counts start at 1"));
        }
        match self.command {
            Command::Axioms => {
                if let Some(&d) = self.dims.iter().find(|&&d| !self.measure.valid_for(d)) {
                    return Err(invalid("measure", format!("{} is undefined for d = {d}", self.measure)));
                }
            }
            Command::Plane | Command::Eur if self.samples < 2 => {
                return Err(invalid("samples", "need at least 2"));
            }
            Command::Walk if self.steps == 0 => return Err(invalid("steps", "must be positive")),
            Command::Eur if self.bases.len() < 2 => return Err(invalid("bases", "need at least two bases")),
            _ => {}
        }
        if let Some(0) = self.root {
            return Err(invalid("root", "must be positive"));
        }
        Ok(())
    }
}

/// Every setting as an optional string-ish value, so flags and file keys merge uniformly.
#[derive(Default)]
struct Flat {
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    base: Option<String>,
    eta: Option<f64>,
    d: Option<String>,
    trials: Option<usize>,
    rank: Option<usize>,
    method: Option<String>,
    perturb: Option<f64>,
    tol: Option<f64>,
    measure: Option<String>,
    kraus: Option<String>,
    strict: Option<bool>,
    reuse_channel: Option<bool>,
    samples: Option<usize>,
    steps: Option<usize>,
    strength: Option<f64>,
    state: Option<String>,
    bases: Option<String>,
    root: Option<u32>,
}

impl Flat {
    fn from_cli(cli: &Cli) -> (Flat, Command) {
        let g = &cli.global;
        let mut f = Flat {
            seed: g.seed,
            workers: g.workers,
            out: g.out.clone(),
            base: g.base.clone(),
            eta: g.eta,
            ..Flat::default()
        };
        let sampling = |f: &mut Flat, s: &SamplingArgs| {
            f.d = s.d.clone();
            f.trials = s.trials;
            f.rank = s.rank;
            f.method = s.method.clone();
        };
        let command = match &cli.command {
            CommandArgs::ShScan { sampling: s, perturb, tol } => {
                sampling(&mut f, s);
                f.perturb = *perturb;
                f.tol = *tol;
                Command::ShScan
            }
            CommandArgs::Axioms {
                sampling: s,
                measure,
                kraus,
                strict,
                tol,
                steps,
                reuse_channel,
            } => {
                sampling(&mut f, s);
                f.measure = measure.clone();
                f.kraus = kraus.clone();
                f.strict = strict.then_some(true);
                f.tol = *tol;
                f.steps = *steps;
                f.reuse_channel = reuse_channel.then_some(true);
                Command::Axioms
            }
            CommandArgs::Plane { sampling: s, samples } => {
                sampling(&mut f, s);
                f.samples = *samples;
                Command::Plane
            }
            CommandArgs::Walk { d, steps, strength, state } => {
                f.d = d.clone();
                f.steps = *steps;
                f.strength = *strength;
                f.state = state.clone();
                Command::Walk
            }
            CommandArgs::Eur {
                sampling: s,
                bases,
                state,
                root,
                samples,
            } => {
                sampling(&mut f, s);
                f.bases = bases.clone();
                f.state = state.clone();
                f.root = *root;
                f.samples = *samples;
                Command::Eur
            }
            CommandArgs::Gil { sampling: s } => {
                sampling(&mut f, s);
                Command::Gil
            }
        };
        (f, command)
    }

    fn overlay(&mut self, file: ConfigFile) {
        let f = self;
        macro_rules! over {
            ($($field:ident),*) => {
                $(if file.$field.is_some() { f.$field = file.$field; })*
            };
        }
        over!(seed, workers, out, eta, trials, rank, method, perturb, tol, measure, strict, reuse_channel, samples, steps, strength, state, bases, root);
        if let Some(v) = file.base {
            f.base = Some(v.into_string());
        }
        if let Some(v) = file.d {
            f.d = Some(v.into_string());
        }
        if let Some(v) = file.kraus {
            f.kraus = Some(v.into_string());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("shcoh").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn usize_sets() {
        assert_eq!(parse_usize_set("4").unwrap(), vec![4]);
        assert_eq!(parse_usize_set("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_usize_set("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_usize_set("2,5").unwrap(), vec![2, 5]);
        assert!(parse_usize_set("6..2").is_err());
        assert!(parse_usize_set("x").is_err());
    }

    #[test]
    fn command_defaults() {
        let cfg = RunConfig::resolve_with(parse(&["axioms"]), ConfigFile::default()).unwrap();
        assert_eq!(cfg.dims, vec![2, 3, 4, 5, 6]);
        assert_eq!(cfg.eta, 1e-9);
        assert_eq!(cfg.tol, 1e-8);
        assert_eq!(cfg.kraus, (1, 6));
        let cfg = RunConfig::resolve_with(parse(&["sh-scan"]), ConfigFile::default()).unwrap();
        assert_eq!(cfg.perturb, 1e-3);
        assert_eq!(cfg.eta, 0.0);
    }

    #[test]
    fn flags_apply() {
        let cli = parse(&["sh-scan", "--d", "2..6", "--trials", "100", "--seed", "7", "--workers", "3"]);
        let cfg = RunConfig::resolve_with(cli, ConfigFile::default()).unwrap();
        assert_eq!(cfg.dims, vec![2, 3, 4, 5, 6]);
        assert_eq!((cfg.trials, cfg.master_seed, cfg.workers), (100, 7, 3));
    }

    #[test]
    fn file_overrides_flags() {
        let cli = parse(&["axioms", "--trials", "100", "--measure", "c_l1"]);
        let file: ConfigFile = toml::from_str("trials = 5\nd = \"3..4\"\nkraus = 2\nbase = \"e\"").unwrap();
        let cfg = RunConfig::resolve_with(cli, file).unwrap();
        assert_eq!(cfg.trials, 5);
        assert_eq!(cfg.dims, vec![3, 4]);
        assert_eq!(cfg.kraus, (2, 2));
        assert_eq!(cfg.measure, MeasureId::L1);
        assert_eq!(cfg.log_base, LogBase::E);
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        assert!(toml::from_str::<ConfigFile>("nonsense = 1").is_err());
    }

    #[test]
    fn eur_trials_follow_randomness() {
        let cli = parse(&["eur", "--d", "2", "--state", "maximally-mixed"]);
        let cfg = RunConfig::resolve_with(cli, ConfigFile::default()).unwrap();
        assert_eq!(cfg.trials, 1);
        let cli = parse(&["eur", "--d", "2", "--bases", "computational,haar", "--state", "zero"]);
        assert_eq!(RunConfig::resolve_with(cli, ConfigFile::default()).unwrap().trials, 10_000);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for args in [
            &["sh-scan", "--d", "1"][..],
            &["axioms", "--measure", "c_r_partial:5", "--d", "2..4"],
            &["axioms", "--eta", "1.5"],
            &["gil", "--rank", "9"],
            &["eur", "--bases", "fourier"],
            &["plane", "--base", "10"],
            &["walk", "--steps", "0"],
        ] {
            assert!(RunConfig::resolve_with(parse(args), ConfigFile::default()).is_err(), "{args:?}");
        }
    }
}
