//! Command-line front end: `synth`, `saliency`, `entropy`, `plot`.
//!
//! Exit codes: 0 success, 1 usage or configuration, 2 data or schema,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::density::{FutureDensity, Gaussian};
use crate::entropy::{self, EntropyMethod, EntropyOptions, EntropyResult};
use crate::error::{Error, Result};
use crate::io::{self, DensitySpec, RunManifest};
use crate::oracle::{OracleForecaster, DEFAULT_MATCH_TOLERANCE, DEFAULT_STD_FLOOR};
use crate::plot::{self, PlotOptions};
use crate::saliency::{run_pipeline, DerivativeScheme, Prior, SaliencyConfig};
use crate::synth::{generate, ConversationConfig};
use crate::window::TimeWindow;

/// Overrides the default output directory (the current directory).
pub const OUTPUT_DIR_ENV: &str = "TEMPSAL_OUTPUT_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tempsal", version, about = "Temporal saliency of multi-party behaviour")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic conversation dataset and its turn log.
    Synth(SynthArgs),
    /// Compute feature map, saliency and surprisal over sliding windows.
    Saliency(SaliencyArgs),
    /// Estimate the entropy of a density spec (JSON) or a samples file.
    Entropy(EntropyArgs),
    /// Render a saliency table and one participant's features as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// TOML file with generator settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub participants: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub preamble_frames: Option<usize>,
    #[arg(long)]
    pub stable_frames: Option<usize>,
    #[arg(long)]
    pub nod_frames: Option<usize>,
    #[arg(long)]
    pub reorient_frames: Option<usize>,
    #[arg(long)]
    pub nod_amplitude: Option<f64>,
    #[arg(long)]
    pub nod_cycles: Option<f64>,
    #[arg(long)]
    pub gaze_drift: Option<f64>,
    #[arg(long)]
    pub noise_std: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dataset path; the turn log goes next to it as `<stem>.events.json`.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Central,
    Forward,
}

impl From<SchemeArg> for DerivativeScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Central => DerivativeScheme::Central,
            SchemeArg::Forward => DerivativeScheme::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorArg {
    Uniform,
}

#[derive(Debug, Args)]
pub struct SaliencyArgs {
    /// Dataset file written by `synth` (or in the same format).
    pub dataset: PathBuf,
    /// TOML file with any of: tfut, horizon, window, stride, scheme, prior,
    /// tolerance, std_floor, output. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Future window as START LEN.
    #[arg(long, num_args = 2, value_names = ["START", "LEN"])]
    pub tfut: Option<Vec<usize>>,
    /// Frames to look back from the start of the future window.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Observed window length.
    #[arg(long)]
    pub window: Option<usize>,
    /// Step between window starts [default: 1].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Derivative scheme [default: central].
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Also compute surprisal under this prior.
    #[arg(long, value_enum)]
    pub prior: Option<PriorArg>,
    /// Oracle match tolerance (max-norm).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Oracle floor on fitted standard deviations.
    #[arg(long)]
    pub std_floor: Option<f64>,
    /// Output CSV; a `<stem>.manifest.json` is written next to it.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SaliencyFile {
    tfut: Option<[usize; 2]>,
    horizon: Option<usize>,
    window: Option<usize>,
    stride: Option<usize>,
    scheme: Option<SchemeArg>,
    prior: Option<PriorArg>,
    tolerance: Option<f64>,
    std_floor: Option<f64>,
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Pick by density kind.
    Auto,
    ClosedForm,
    GmmBounds,
    MonteCarlo,
    Knn,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// JSON density spec, or a text file with one sample per line.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    /// Neighbour rank for the k-NN estimator.
    #[arg(long, default_value_t = entropy::DEFAULT_KNN_K)]
    pub k: usize,
    #[arg(long, default_value_t = 100_000)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Saliency CSV written by `saliency`.
    pub csv: PathBuf,
    /// Dataset the table was computed from.
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub participant: usize,
    /// Comma-separated feature names.
    #[arg(long, default_value = "qx,qy")]
    pub dims: String,
    /// Observed window length used for the table.
    #[arg(long, default_value_t = 30)]
    pub window: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::EmptyWindows { .. } => EXIT_USAGE,
        Error::InvalidData(_) | Error::Schema(_) | Error::Io(_) => EXIT_DATA,
        Error::DegenerateDensity(_) | Error::EmptySupport { .. } => EXIT_NUMERICAL,
        Error::Forecast { source, .. } => exit_code(source),
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Synth(a) => synth(a, out),
        Command::Saliency(a) => saliency(a, out),
        Command::Entropy(a) => entropy_cmd(a, out),
        Command::Plot(a) => plot_cmd(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn read_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::InvalidParameter(format!("config {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn synth(a: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg: ConversationConfig = match &a.config {
        Some(p) => read_config(p)?,
        None => ConversationConfig::default(),
    };
    macro_rules! set {
        ($($f:ident),*) => { $(if let Some(v) = a.$f { cfg.$f = v; })* };
    }
    set!(participants, radius, preamble_frames, stable_frames, nod_frames, reorient_frames,
         nod_amplitude, nod_cycles, gaze_drift, noise_std, seed);
    let conv = generate(&cfg)?;
    let path = a.output.clone().unwrap_or_else(|| output_dir().join("conversation.csv"));
    let events_path = sibling(&path, ".events.json");
    write_file(&path, io::dataset_to_string(&conv.sequence, Some(&cfg)).as_bytes())?;
    let mut events = Vec::new();
    io::write_events(&mut events, &conv.events)?;
    write_file(&events_path, &events)?;
    writeln!(
        out,
        "wrote {} ({} frames, {} participants, {} turns) and {}",
        path.display(),
        conv.sequence.frame_count(),
        conv.sequence.participants(),
        conv.events.len(),
        events_path.display()
    )?;
    Ok(())
}

fn saliency(a: &SaliencyArgs, out: &mut dyn Write) -> Result<()> {
    let file: SaliencyFile = match &a.config {
        Some(p) => read_config(p)?,
        None => SaliencyFile::default(),
    };
    let missing = |name: &str| Error::InvalidParameter(format!("--{name} is required (flag or config)"));
    let tfut = match &a.tfut {
        Some(v) => [v[0], v[1]],
        None => file.tfut.ok_or_else(|| missing("tfut"))?,
    };
    let horizon = a.horizon.or(file.horizon).ok_or_else(|| missing("horizon"))?;
    let window = a.window.or(file.window).ok_or_else(|| missing("window"))?;
    let stride = a.stride.or(file.stride).unwrap_or(1);
    let scheme = a.scheme.or(file.scheme).unwrap_or(SchemeArg::Central);
    let prior = a.prior.or(file.prior);
    let tolerance = a.tolerance.or(file.tolerance).unwrap_or(DEFAULT_MATCH_TOLERANCE);
    let std_floor = a.std_floor.or(file.std_floor).unwrap_or(DEFAULT_STD_FLOOR);

    let mut config = SaliencyConfig::looking_back(TimeWindow::new(tfut[0], tfut[1])?, horizon, window, stride)?;
    config.scheme = scheme.into();
    config.prior = prior.map(|_| Prior::Uniform);

    let bytes = fs::read(&a.dataset)?;
    let (header, sequence) = io::read_dataset(bytes.as_slice())?;
    // Fail on window arithmetic before building the oracle.
    config.windows(sequence.frame_count())?;
    let oracle = OracleForecaster::with_params(vec![sequence.clone()], tolerance, std_floor)?;
    let map = run_pipeline(&oracle, &sequence, &config)?;

    let path = a.output.clone().or(file.output).unwrap_or_else(|| {
        output_dir().join(sibling(&a.dataset, ".saliency.csv").file_name().unwrap())
    });
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        saliency: config,
        conversation: header.generator,
        oracle_tolerance: tolerance,
        oracle_std_floor: std_floor,
        input_digest: io::sha256_hex(&bytes),
        created_unix: unix_now(),
    };
    let manifest_path = sibling(&path, ".manifest.json");
    write_file(&path, io::saliency_csv(&map).as_bytes())?;
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Schema(e.to_string()))?;
    write_file(&manifest_path, format!("{json}\n").as_bytes())?;

    let peak = map.argmax().map(|j| map.window_starts[j]);
    writeln!(
        out,
        "{} windows, saliency peak at window start {}; wrote {} and {}",
        map.len(),
        peak.map_or("-".into(), |s| s.to_string()),
        path.display(),
        manifest_path.display()
    )?;
    Ok(())
}

fn load_density(path: &Path) -> Result<FutureDensity> {
    let text = fs::read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if is_json {
        DensitySpec::parse(&text)?.to_density()
    } else {
        Ok(io::parse_samples(&text)?.into())
    }
}

fn print_result(out: &mut dyn Write, r: &EntropyResult) -> Result<()> {
    writeln!(out, "entropy_nats: {}", r.value)?;
    writeln!(out, "method: {}", r.method.as_str())?;
    match r.std_error {
        Some(se) => writeln!(out, "std_error: {se}")?,
        None => writeln!(out, "std_error: none")?,
    }
    if r.clamped_distances > 0 {
        writeln!(out, "clamped_distances: {}", r.clamped_distances)?;
    }
    Ok(())
}

fn entropy_cmd(a: &EntropyArgs, out: &mut dyn Write) -> Result<()> {
    let density = load_density(&a.file)?;
    let wrong_kind = |want: &str| {
        Error::InvalidParameter(format!("method needs {want}, but the file holds a {}", density.kind()))
    };
    let result = match a.method {
        MethodArg::Auto => {
            let opts = EntropyOptions { knn_k: a.k, mc_samples: a.mc_samples, seed: a.seed, ..Default::default() };
            entropy::entropy(&density, &opts)?
        }
        MethodArg::ClosedForm => match &density {
            FutureDensity::DiagonalGaussian(g) => entropy::gaussian_entropy(&Gaussian::Diagonal(g.clone())),
            FutureDensity::FullGaussian(g) => entropy::gaussian_entropy(&Gaussian::Full(g.clone())),
            _ => return Err(wrong_kind("a Gaussian")),
        },
        MethodArg::GmmBounds => match &density {
            FutureDensity::GaussianMixture(m) => {
                let (lo, hi) = entropy::gmm_entropy_bounds(m)?;
                writeln!(out, "lower_nats: {}", lo.value)?;
                writeln!(out, "upper_nats: {}", hi.value)?;
                EntropyResult {
                    value: 0.5 * (lo.value + hi.value),
                    method: EntropyMethod::GmmBoundsMidpoint,
                    std_error: Some(0.5 * (hi.value - lo.value)),
                    clamped_distances: 0,
                }
            }
            _ => return Err(wrong_kind("a Gaussian mixture")),
        },
        MethodArg::MonteCarlo => entropy::monte_carlo_entropy(&density, a.mc_samples, a.seed)?,
        MethodArg::Knn => match &density {
            FutureDensity::SampleSet(s) => entropy::knn_entropy(s, a.k)?,
            _ => return Err(wrong_kind("a samples file")),
        },
    };
    print_result(out, &result)
}

fn plot_cmd(a: &PlotArgs, out: &mut dyn Write) -> Result<()> {
    let table = io::parse_saliency_csv(&fs::read_to_string(&a.csv)?)?;
    let (_, sequence) = io::read_dataset(fs::read(&a.dataset)?.as_slice())?;
    let opts = PlotOptions { participant: a.participant, dims: plot::parse_dims(&a.dims)?, window_length: a.window };
    let svg = plot::render_svg(&table, &sequence, &opts)?;
    let path = a
        .output
        .clone()
        .unwrap_or_else(|| output_dir().join(sibling(&a.csv, ".svg").file_name().unwrap()));
    write_file(&path, svg.as_bytes())?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}
