//! Command-line front end: config parsing, pipeline runs and file output.
//!
//! Every subcommand reads a JSON [`RunConfig`]. Structured results are JSON,
//! grids and particle tables are CSV.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bravais::{self, BravaisParams, DesignRequest};
use crate::dynamics::{relax, ParticleEnsemble};
use crate::error::{Error, Result};
use crate::levelsets::{classify, Classification, LEVELSET_TOL};
use crate::sampler::{self, bound_check, default_resolution, numeric_minima, verify};
use crate::spectral::{min_eigenvector, q0_decomposition, HLabel, SpectralDecomposition};
use crate::wavefield::{
    derive_coefficients, Coefficients, MediumParams, ParticleParams, TransducerVector, WaveConfig,
};

/// Exit code for invalid input.
pub const EXIT_INVALID: i32 = 1;
/// Exit code for a verification run whose predictions were not confirmed.
pub const EXIT_UNCONFIRMED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "acoustic-lattice", version, about = "Particle arrangements from standing acoustic plane waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides the config)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Grid points per axis (overrides the config)
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Seed for random draws (overrides the config)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print the potential coefficients
    Coeffs,
    /// Write wave.json for a Bravais class
    Design,
    /// Write prediction.json with the eigen-analysis and predicted minima
    Predict,
    /// Write field.csv and summary.json
    Sample,
    /// Write report.json; exit 2 unless every prediction is confirmed
    Verify,
    /// Write particles.csv after gradient-descent relaxation
    Relax,
}

/// Where the wavevectors come from. Exactly one field must be set; other
/// keys (as written in `wave.json`) are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WaveSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_rows: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bravais: Option<BravaisSpec>,
    /// Path to a `wave.json`, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BravaisSpec {
    pub class: String,
    #[serde(default)]
    pub params: BravaisParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSource {
    Direct {
        a: f64,
        b: f64,
    },
    Physical {
        medium: MediumParams,
        particle: ParticleParams,
        frequency: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeSource {
    #[default]
    MinEigenvector,
    Explicit(Vec<ComplexValue>),
    /// `eigenvalue_index` counts distinct eigenvalues from the smallest.
    Eigen {
        eigenvalue_index: usize,
        basis_index: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaxOptions {
    pub particles: usize,
    pub step_size: f64,
    pub max_iterations: usize,
    pub grad_tol: f64,
    pub trajectory: bool,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            particles: 100,
            step_size: 0.05,
            max_iterations: 20_000,
            grad_tol: 1e-6,
            trajectory: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    pub wave: WaveSource,
    /// Target wavenumber for Bravais designs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<f64>,
    pub coefficients: CoefficientSource,
    #[serde(default)]
    pub amplitudes: AmplitudeSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub relax: RelaxOptions,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        if !(cfg.dimension == 2 || cfg.dimension == 3) {
            return Err(Error::UnsupportedDimension(cfg.dimension));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let Some(file) = cfg.wave.file.as_mut() {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(cfg)
    }
}

/// `wave.json` contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFile {
    pub dimension: usize,
    pub wavenumber: f64,
    /// Rows of `K`; columns are the wavevectors.
    pub k_rows: Vec<Vec<f64>>,
    /// Rows of `A = 2πK^{-T}`; columns are the lattice vectors.
    pub lattice_rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub name: String,
    pub cli_name: String,
    pub achievable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implied_class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub params: BravaisParams,
    pub reciprocal_vectors: Vec<Vec<f64>>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl WaveFile {
    fn new(cfg: &WaveConfig, class: Option<ClassInfo>) -> Self {
        Self {
            dimension: cfg.dim(),
            wavenumber: cfg.wavenumber(),
            k_rows: rows(cfg.k_matrix()),
            lattice_rows: rows(cfg.lattice()),
            class,
        }
    }
}

/// The wave configuration plus class metadata when it came from a design.
pub fn resolve_wave(run: &RunConfig) -> Result<(WaveConfig, Option<ClassInfo>)> {
    let w = &run.wave;
    let set = [w.k_rows.is_some(), w.bravais.is_some(), w.file.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if set != 1 {
        return Err(Error::Config(
            "wave needs exactly one of `k_rows`, `bravais`, `file`".into(),
        ));
    }
    let (cfg, info) = if let Some(k) = &w.k_rows {
        (WaveConfig::from_k_rows(k)?, None)
    } else if let Some(spec) = &w.bravais {
        let k = match (run.wavenumber, &run.coefficients) {
            (Some(k), _) => k,
            (None, CoefficientSource::Physical { .. }) => coefficients_for(run, None)?.wavenumber,
            (None, CoefficientSource::Direct { .. }) => {
                return Err(Error::Config("bravais wave source needs `wavenumber`".into()))
            }
        };
        design_class(&spec.class, &spec.params, k)?
    } else {
        let path = w.file.as_ref().expect("checked above");
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: WaveFile = serde_json::from_str(&text)?;
        (WaveConfig::from_k_rows(&file.k_rows)?, file.class)
    };
    if cfg.dim() != run.dimension {
        return Err(Error::DimensionMismatch {
            expected: run.dimension,
            got: cfg.dim(),
        });
    }
    Ok((cfg, info))
}

fn design_class(class: &str, params: &BravaisParams, k: f64) -> Result<(WaveConfig, Option<ClassInfo>)> {
    let entry = bravais::lookup(class)?;
    let cfg = bravais::design(&DesignRequest {
        class: class.to_string(),
        params: params.clone(),
        wavenumber: k,
    })?;
    let gs = entry.reciprocal_vectors(params)?;
    let info = ClassInfo {
        name: entry.name.to_string(),
        cli_name: entry.cli_name.to_string(),
        achievable: entry.achievable,
        implied_class: entry.resolve_implied(params).map(str::to_string),
        notes: entry.notes.map(str::to_string),
        params: params.clone(),
        reciprocal_vectors: gs.iter().map(|g| g.iter().copied().collect()).collect(),
    };
    Ok((cfg, Some(info)))
}

/// Coefficients for the run; direct coefficients take `k` from the wavevectors.
pub fn coefficients_for(run: &RunConfig, cfg: Option<&WaveConfig>) -> Result<Coefficients> {
    match &run.coefficients {
        CoefficientSource::Direct { a, b } => {
            let k = match (cfg, run.wavenumber) {
                (Some(c), _) => c.wavenumber(),
                (None, Some(k)) => k,
                (None, None) => 1.0,
            };
            Coefficients::direct(*a, *b, k)
        }
        CoefficientSource::Physical {
            medium,
            particle,
            frequency,
        } => {
            let coef = derive_coefficients(medium, particle, *frequency)?;
            if let Some(c) = cfg {
                let k = c.wavenumber();
                if (k - coef.wavenumber).abs() > 1e-9 * coef.wavenumber {
                    return Err(Error::Config(format!(
                        "wavevector length {k} does not match the acoustic wavenumber {}",
                        coef.wavenumber
                    )));
                }
            }
            Ok(coef)
        }
    }
}

/// Amplitudes for the run; explicit vectors are normalized unless zero.
pub fn resolve_amplitudes(run: &RunConfig, dec: &SpectralDecomposition) -> Result<TransducerVector> {
    match &run.amplitudes {
        AmplitudeSource::MinEigenvector => Ok(min_eigenvector(dec)),
        AmplitudeSource::Explicit(values) => {
            if values.len() != 2 * run.dimension {
                return Err(Error::DimensionMismatch {
                    expected: 2 * run.dimension,
                    got: values.len(),
                });
            }
            let u = TransducerVector::from_complex(
                &values.iter().map(|z| Complex64::new(z.re, z.im)).collect::<Vec<_>>(),
            );
            if u.as_vector().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidParameter("amplitudes must be finite".into()));
            }
            if u.norm() == 0.0 {
                Ok(u)
            } else {
                u.normalized()
            }
        }
        AmplitudeSource::Eigen {
            eigenvalue_index,
            basis_index,
        } => {
            let n = dec.groups().len();
            if *eigenvalue_index >= n {
                return Err(Error::Config(format!(
                    "eigenvalue_index {eigenvalue_index} out of range, {n} distinct eigenvalues"
                )));
            }
            let group = dec.group(n - 1 - eigenvalue_index);
            let i = *group.indices.get(*basis_index).ok_or_else(|| {
                Error::Config(format!(
                    "basis_index {basis_index} out of range, eigenspace has dimension {}",
                    group.multiplicity()
                ))
            })?;
            Ok(TransducerVector::from_real(dec.vector(i).as_slice()))
        }
    }
}

/// Everything a pipeline command needs.
pub struct Setup {
    pub cfg: WaveConfig,
    pub class: Option<ClassInfo>,
    pub coef: Coefficients,
    pub dec: SpectralDecomposition,
    pub u: TransducerVector,
}

pub fn setup(run: &RunConfig) -> Result<Setup> {
    let (cfg, class) = resolve_wave(run)?;
    let coef = coefficients_for(run, Some(&cfg))?;
    let dec = q0_decomposition(&coef, &cfg)?;
    let u = resolve_amplitudes(run, &dec)?;
    Ok(Setup {
        cfg,
        class,
        coef,
        dec,
        u,
    })
}

/// Command-line overrides applied on top of the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub resolution: Option<usize>,
    pub seed: Option<u64>,
}

impl Overrides {
    fn out_dir(&self, run: &RunConfig) -> PathBuf {
        self.out
            .clone()
            .or_else(|| run.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn resolution(&self, run: &RunConfig) -> usize {
        self.resolution
            .or(run.resolution)
            .unwrap_or_else(|| default_resolution(run.dimension))
    }

    fn seed(&self, run: &RunConfig) -> u64 {
        self.seed.or(run.seed).unwrap_or(0)
    }
}

/// Result of a command that did not fail on input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Unconfirmed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Unconfirmed => EXIT_UNCONFIRMED,
        }
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut f = BufWriter::new(fs::File::create(&path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(path)
}

fn complex_list(u: &TransducerVector) -> Vec<ComplexValue> {
    u.as_vector().iter().map(|&z| z.into()).collect()
}

#[derive(Serialize)]
struct CoeffsOut {
    a: f64,
    b: f64,
    wavenumber: f64,
    wavelength: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    f1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frequency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sound_speed: Option<f64>,
}

pub fn cmd_coeffs<W: Write>(run: &RunConfig, mut out: W) -> Result<Outcome> {
    let coef = coefficients_for(run, None)?;
    let ph = coef.physical;
    let report = CoeffsOut {
        a: coef.a,
        b: coef.b,
        wavenumber: coef.wavenumber,
        wavelength: coef.wavelength(),
        f1: ph.map(|p| p.f1),
        f2: ph.map(|p| p.f2),
        omega: ph.map(|p| p.omega),
        frequency: ph.map(|p| p.frequency),
        sound_speed: ph.map(|p| p.sound_speed),
    };
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(Outcome::Success)
}

pub fn cmd_design<W: Write>(run: &RunConfig, ov: &Overrides, mut warn: W) -> Result<Outcome> {
    let (cfg, class) = resolve_wave(run)?;
    if let Some(info) = &class {
        if !info.achievable {
            writeln!(
                warn,
                "warning: {} is not achievable; equal-length wavevectors give {}",
                info.cli_name,
                info.implied_class.as_deref().unwrap_or("another class")
            )?;
        }
    }
    write_json(&ov.out_dir(run), "wave.json", &WaveFile::new(&cfg, class))?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct EigenspaceOut {
    value: f64,
    multiplicity: usize,
    side: &'static str,
}

fn side_name(s: Option<HLabel>) -> &'static str {
    match s {
        Some(HLabel::Plus) => "plus",
        Some(HLabel::Minus) => "minus",
        _ => "straddling",
    }
}

#[derive(Serialize)]
struct PredictionOut<'a> {
    dimension: usize,
    wavenumber: f64,
    a: f64,
    b: f64,
    eigenvalues: &'a [f64],
    eigenspaces: Vec<EigenspaceOut>,
    amplitudes: Vec<ComplexValue>,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<Classification>,
}

/// Eigenspace containing `u`, if any.
fn eigenspace_of(dec: &SpectralDecomposition, u: &TransducerVector) -> Option<usize> {
    if u.norm() == 0.0 {
        return None;
    }
    let w = u.normalized().ok()?;
    (0..dec.groups().len()).find(|&g| dec.residual(g, w.as_vector()) <= 1e-9)
}

fn classification_for(s: &Setup) -> Result<(String, Option<Classification>)> {
    let Some(g) = eigenspace_of(&s.dec, &s.u) else {
        return Ok((
            "not-eigenvector: amplitudes are not an eigenvector of Q(0); no prediction".into(),
            None,
        ));
    };
    let c = classify(&s.dec, g, &s.u, &s.cfg, LEVELSET_TOL)?;
    let status = match c.canonical {
        None => "NotCanonical: classification unsupported".to_string(),
        Some(_) => "classified".to_string(),
    };
    Ok((status, Some(c)))
}

pub fn cmd_predict(run: &RunConfig, ov: &Overrides) -> Result<Outcome> {
    let s = setup(run)?;
    let (status, classification) = classification_for(&s)?;
    let out = PredictionOut {
        dimension: s.cfg.dim(),
        wavenumber: s.cfg.wavenumber(),
        a: s.coef.a,
        b: s.coef.b,
        eigenvalues: s.dec.eigenvalues(),
        eigenspaces: (0..s.dec.groups().len())
            .rev()
            .map(|g| EigenspaceOut {
                value: s.dec.group(g).value,
                multiplicity: s.dec.group(g).multiplicity(),
                side: side_name(s.dec.group_side(g)),
            })
            .collect(),
        amplitudes: complex_list(&s.u),
        status,
        classification,
    };
    write_json(&ov.out_dir(run), "prediction.json", &out)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct SampleSummary {
    resolution: usize,
    points: usize,
    min: f64,
    max: f64,
    mean: f64,
    argmin_atomic: Vec<f64>,
    lambda_min: f64,
    lambda_max: f64,
    bound_ok: bool,
    numeric_minima: usize,
    extended_minima: usize,
}

pub fn cmd_sample(run: &RunConfig, ov: &Overrides) -> Result<Outcome> {
    let s = setup(run)?;
    let grid = sampler::sample(&s.cfg, &s.coef, &s.u, ov.resolution(run))?;
    let dir = ov.out_dir(run);
    fs::create_dir_all(&dir)?;
    let mut f = BufWriter::new(fs::File::create(dir.join("field.csv"))?);
    grid.write_csv(&mut f)?;
    f.flush()?;

    let vals = grid.values();
    let argmin = (0..vals.len())
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap_or(0);
    let bound = bound_check(&grid)?;
    let minima = numeric_minima(&grid);
    let summary = SampleSummary {
        resolution: grid.resolution(),
        points: grid.len(),
        min: grid.min(),
        max: grid.max(),
        mean: vals.iter().sum::<f64>() / vals.len() as f64,
        argmin_atomic: grid.atomic(argmin).iter().copied().collect(),
        lambda_min: bound.lambda_min,
        lambda_max: bound.lambda_max,
        bound_ok: bound.passed,
        numeric_minima: minima.len(),
        extended_minima: minima.iter().filter(|m| m.extended).count(),
    };
    write_json(&dir, "summary.json", &summary)?;
    Ok(Outcome::Success)
}

pub fn cmd_verify(run: &RunConfig, ov: &Overrides) -> Result<Outcome> {
    let s = setup(run)?;
    let (status, classification) = classification_for(&s)?;
    let predictions = classification.map(|c| c.predictions).unwrap_or_default();
    let grid = sampler::sample(&s.cfg, &s.coef, &s.u, ov.resolution(run))?;
    let report = verify(&predictions, &s.cfg, &s.coef, &s.u, &grid)?;

    #[derive(Serialize)]
    struct Out<'a> {
        status: String,
        #[serde(flatten)]
        report: &'a sampler::VerificationReport,
    }
    write_json(
        &ov.out_dir(run),
        "report.json",
        &Out {
            status,
            report: &report,
        },
    )?;
    Ok(if report.confirmed {
        Outcome::Success
    } else {
        Outcome::Unconfirmed
    })
}

pub fn cmd_relax(run: &RunConfig, ov: &Overrides) -> Result<Outcome> {
    let s = setup(run)?;
    let opts = &run.relax;
    let mut rng = ChaCha8Rng::seed_from_u64(ov.seed(run));
    let mut ens = ParticleEnsemble::random(&s.cfg, opts.particles, &mut rng);
    ens.step_size = opts.step_size;
    ens.max_iterations = opts.max_iterations;
    ens.grad_tol = opts.grad_tol;
    ens.record_trajectory = opts.trajectory;
    let res = relax(&ens, &s.u, &s.coef, &s.cfg)?;

    let d = s.cfg.dim();
    let dir = ov.out_dir(run);
    fs::create_dir_all(&dir)?;
    let mut f = BufWriter::new(fs::File::create(dir.join("particles.csv"))?);
    let mut header = vec!["id".to_string()];
    header.extend((1..=d).map(|j| format!("alpha_{j}")));
    header.extend((1..=d).map(|j| format!("x_{j}")));
    header.extend(["psi", "grad_norm", "iterations", "converged"].map(String::from));
    writeln!(f, "{}", header.join(","))?;
    for p in &res.particles {
        let nums: Vec<String> = p
            .atomic
            .iter()
            .chain(&p.position)
            .chain([&p.psi, &p.grad_norm])
            .map(|v| format!("{v:.16e}"))
            .collect();
        writeln!(f, "{},{},{},{}", p.id, nums.join(","), p.iterations, p.converged)?;
    }
    f.flush()?;

    if opts.trajectory {
        let mut t = BufWriter::new(fs::File::create(dir.join("trajectory.csv"))?);
        let mut header = vec!["iteration".to_string(), "particle".to_string()];
        header.extend((1..=d).map(|j| format!("alpha_{j}")));
        header.push("psi".into());
        writeln!(t, "{}", header.join(","))?;
        for r in &res.trajectory {
            let nums: Vec<String> = r
                .atomic
                .iter()
                .chain([&r.psi])
                .map(|v| format!("{v:.16e}"))
                .collect();
            writeln!(t, "{},{},{}", r.iteration, r.particle, nums.join(","))?;
        }
        t.flush()?;
    }
    Ok(Outcome::Success)
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let ov = Overrides {
        out: cli.out,
        resolution: cli.resolution,
        seed: cli.seed,
    };
    let result = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("--config <path> is required".into()))
        .and_then(RunConfig::load)
        .and_then(|run| match cli.command {
            Command::Coeffs => cmd_coeffs(&run, std::io::stdout().lock()),
            Command::Design => cmd_design(&run, &ov, std::io::stderr().lock()),
            Command::Predict => cmd_predict(&run, &ov),
            Command::Sample => cmd_sample(&run, &ov),
            Command::Verify => cmd_verify(&run, &ov),
            Command::Relax => cmd_relax(&run, &ov),
        });
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

/// Parse `args` and run; clap usage errors map to exit code 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            code
        }
    }
}
