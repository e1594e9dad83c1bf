//! Command implementations behind the `extremogram` binary.

pub mod ingest;
pub mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use extremogram::estimators::{self, ExtremogramResult};
use extremogram::models::{self, ModelDoc, ModelSpec, NoiseSpec, TheoreticalExtremogram};
use extremogram::region::Constraint;
use extremogram::spectral::{self, SpectralCentering};
use extremogram::{
    BandMethod, Centering, EstimatorConfig, Error, RegionSpec, Result, TimeSeries,
};

#[derive(Debug, Parser)]
#[command(
    name = "extremogram",
    version,
    about = "Serial extremal dependence estimation for heavy-tailed time series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical extremogram of sets A and B
    Extremogram(EstimateArgs),
    /// All four extremograms AA, AB, BA, BB of the pair (A, B)
    Cross(EstimateArgs),
    /// Lag-window spectral density of the exceedance indicators of set A
    Spectrum(SpectrumArgs),
    /// Simulate a model family to CSV
    Simulate(SimulateArgs),
    /// Tail index of a GARCH(1,1)/ARCH(1) process from its moment equation
    Tailindex(TailIndexArgs),
    /// Theoretical extremogram implied by a model specification
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandsChoice {
    Clt,
    Perm,
    None,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV input file, one observation per row (header auto-detected)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Model specification file (JSON or TOML) to simulate from
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Length of the simulated series (with --model)
    #[arg(long)]
    pub n: Option<usize>,
    /// RNG seed; required by every stochastic command
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Conditioning set A in the region DSL, e.g. "(1,inf)"
    #[arg(long = "a-set")]
    pub a_set: String,
    /// Target set B; defaults to A
    #[arg(long = "b-set")]
    pub b_set: Option<String>,
    /// Quantile level of the norm threshold
    #[arg(long, default_value_t = 0.98)]
    pub quantile: f64,
    /// Largest lag H
    #[arg(long, default_value_t = 40)]
    pub lags: usize,
    /// Block length (variance blocks and plug-in truncation); default ceil(n^0.4)
    #[arg(long)]
    pub block: Option<usize>,
    /// Confidence band method
    #[arg(long, value_enum, default_value_t = BandsChoice::None)]
    pub bands: BandsChoice,
    /// Number of permutation replicates (with --bands perm)
    #[arg(long, default_value_t = 99)]
    pub perms: usize,
    /// Confidence level of the bands
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Output path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Accept regions the bounded-away-from-zero check cannot certify
    #[arg(long)]
    pub allow_unbounded: bool,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Exceedance set C in the region DSL
    #[arg(long = "a-set")]
    pub a_set: String,
    #[arg(long, default_value_t = 0.98)]
    pub quantile: f64,
    /// Truncation lag r of the lag window; default ceil(n^0.4)
    #[arg(long)]
    pub block: Option<usize>,
    /// Use centered autocovariances at every lag instead of the mixed form
    #[arg(long)]
    pub centered: bool,
    /// Number of grid frequencies in (0, pi)
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub allow_unbounded: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model specification file (JSON or TOML)
    #[arg(long)]
    pub model: PathBuf,
    /// Series length
    #[arg(long)]
    pub n: usize,
    /// RNG seed (required: runs must be reproducible)
    #[arg(long)]
    pub seed: Option<u64>,
    /// AR filter coefficients applied to the simulated series, e.g. "-0.6465"
    #[arg(long = "filter-ar", allow_hyphen_values = true)]
    pub filter_ar: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TailIndexArgs {
    /// ARCH coefficient alpha1
    #[arg(long)]
    pub alpha1: f64,
    /// GARCH coefficient beta1
    #[arg(long, default_value_t = 0.0)]
    pub beta1: f64,
    /// Noise law: gaussian or student
    #[arg(long, default_value = "gaussian")]
    pub noise: String,
    /// Degrees of freedom for student noise
    #[arg(long)]
    pub nu: Option<f64>,
    /// Monte Carlo draws
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Model specification file (JSON or TOML)
    #[arg(long)]
    pub model: PathBuf,
    /// Set A; squared-scale families map "(u,inf)" to a = u^2
    #[arg(long = "a-set", default_value = "(1,inf)")]
    pub a_set: String,
    /// Set B; defaults to A
    #[arg(long = "b-set")]
    pub b_set: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub lags: usize,
    /// Monte Carlo replicates for families without closed forms
    #[arg(long, default_value_t = 200_000)]
    pub mc: usize,
    /// RNG seed (required for Monte Carlo families)
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit codes: 0 ok, 1 usage, 2 data/degenerate input, 3 numeric failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::Semantic(_)
        | Error::InvalidParameter { .. }
        | Error::DimensionMismatch(_)
        | Error::NotBoundedAway
        | Error::UnsupportedRegion(_) => 1,
        Error::SeriesTooShort { .. }
        | Error::NonFinite { .. }
        | Error::LagTooLarge { .. }
        | Error::TruncationTooLarge { .. }
        | Error::ZeroThreshold
        | Error::NoExceedances
        | Error::ZeroDenominator
        | Error::TooFewBlocks { .. }
        | Error::EmptyInput
        | Error::Io(_)
        | Error::ParseRow { .. } => 2,
        Error::NonCausal { .. }
        | Error::NonStationary(_)
        | Error::NoRoot(_)
        | Error::NotConverged(_)
        | Error::DivergentCoefficients(_) => 3,
    }
}

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Extremogram(args) => cmd_extremogram(args),
        Command::Cross(args) => cmd_cross(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Tailindex(args) => cmd_tailindex(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e);
            if matches!(e, Error::NoExceedances) {
                eprintln!("hint: lower --quantile so that some observations exceed the threshold");
            }
            exit_code(&e)
        }
    }
}

fn usage(reason: &str) -> Error {
    Error::InvalidParameter {
        name: "usage",
        reason: reason.to_string(),
    }
}

fn load_model(path: &Path) -> Result<ModelSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter {
        name: "model",
        reason: format!("{}: {}", path.display(), e),
    })?;
    let doc: ModelDoc = if path.extension().is_some_and(|x| x == "toml") {
        toml::from_str(&text).map_err(|e| Error::InvalidParameter {
            name: "model",
            reason: e.to_string(),
        })?
    } else {
        serde_json::from_str(&text).map_err(|e| Error::InvalidParameter {
            name: "model",
            reason: e.to_string(),
        })?
    };
    doc.to_spec()
}

/// Resolve the input series: exactly one of --input / --model.
fn resolve_series(input: &InputArgs) -> Result<TimeSeries> {
    match (&input.input, &input.model) {
        (Some(path), None) => {
            let series = ingest::ingest_csv(path)?;
            eprintln!(
                "read {} observation(s) of dimension {} from {}",
                series.len(),
                series.dim(),
                path.display()
            );
            Ok(series)
        }
        (None, Some(path)) => {
            let spec = load_model(path)?;
            let n = input
                .n
                .ok_or_else(|| usage("--n is required when simulating from --model"))?;
            let seed = input
                .seed
                .ok_or_else(|| usage("--seed is required when simulating from --model"))?;
            models::simulate(&spec, n, seed)
        }
        (Some(_), Some(_)) => Err(usage("give exactly one of --input or --model, not both")),
        (None, None) => Err(usage("one of --input or --model is required")),
    }
}

fn parse_region_arg(text: &str, allow_unbounded: bool) -> Result<RegionSpec> {
    let region = RegionSpec::parse(text)?;
    Ok(if allow_unbounded {
        region.assume_bounded_away()
    } else {
        region
    })
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| Error::InvalidParameter {
            name: "out",
            reason: format!("{}: {}", path.display(), e),
        }),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn estimate_config(args: &EstimateArgs) -> Result<EstimatorConfig> {
    let band_method = match args.bands {
        BandsChoice::None => BandMethod::None,
        BandsChoice::Clt => BandMethod::CltPlugin {
            confidence_level: args.level,
        },
        BandsChoice::Perm => {
            if args.input.seed.is_none() {
                return Err(usage("--seed is required with --bands perm"));
            }
            BandMethod::Permutation {
                num_permutations: args.perms,
                confidence_level: args.level,
            }
        }
    };
    Ok(EstimatorConfig {
        quantile_level: args.quantile,
        max_lag: args.lags,
        block_length: args.block,
        centering: Centering::PreAsymptotic,
        band_method,
        seed: args.input.seed.unwrap_or(0),
    })
}

fn render_result(result: &ExtremogramResult, format: OutputFormat, title: &str) -> String {
    match format {
        OutputFormat::Json => result.to_json(),
        OutputFormat::Csv => result.to_csv(),
        OutputFormat::Svg => svg::render_extremogram(result, title),
    }
}

fn cmd_extremogram(args: EstimateArgs) -> Result<()> {
    let series = resolve_series(&args.input)?;
    let a = parse_region_arg(&args.a_set, args.allow_unbounded)?;
    let b = match &args.b_set {
        Some(text) => parse_region_arg(text, args.allow_unbounded)?,
        None => a.clone(),
    };
    let config = estimate_config(&args)?;
    let result = estimators::empirical_extremogram(&series, &a, &b, &config)?;
    for w in &result.warnings {
        eprintln!("warning: {}", w);
    }
    write_output(&args.out, &render_result(&result, args.format, "extremogram"))
}

fn cmd_cross(args: EstimateArgs) -> Result<()> {
    let series = resolve_series(&args.input)?;
    let a = parse_region_arg(&args.a_set, args.allow_unbounded)?;
    let b = match &args.b_set {
        Some(text) => parse_region_arg(text, args.allow_unbounded)?,
        None => a.clone(),
    };
    let config = estimate_config(&args)?;
    let cross = estimators::cross_extremogram_matrix(&series, &a, &b, &config)?;
    let content = match args.format {
        OutputFormat::Json => {
            let docs: Vec<(&str, serde_json::Value)> = [
                ("aa", &cross.aa),
                ("ab", &cross.ab),
                ("ba", &cross.ba),
                ("bb", &cross.bb),
            ]
            .into_iter()
            .map(|(k, r)| {
                (
                    k,
                    serde_json::from_str(&r.to_json()).expect("own serialization parses"),
                )
            })
            .collect();
            let map: serde_json::Map<String, serde_json::Value> = docs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))
                .expect("serializable");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut out = String::from("pair,lag,rho,lo,hi,baseline\n");
            for (name, r) in [
                ("aa", &cross.aa),
                ("ab", &cross.ab),
                ("ba", &cross.ba),
                ("bb", &cross.bb),
            ] {
                for line in r.to_csv().lines().skip(1) {
                    out.push_str(&format!("{},{}\n", name, line));
                }
            }
            out
        }
        OutputFormat::Svg => {
            return Err(usage("--format svg is not available for cross; plot each pair"));
        }
    };
    write_output(&args.out, &content)
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<()> {
    let series = resolve_series(&args.input)?;
    let region = parse_region_arg(&args.a_set, args.allow_unbounded)?;
    let threshold = extremogram::select_threshold(&series, args.quantile)?;
    let truncation = args
        .block
        .unwrap_or_else(|| (series.len() as f64).powf(0.4).ceil() as usize);
    let grid = spectral::fourier_grid(series.len(), args.grid.max(1));
    let centering = if args.centered {
        SpectralCentering::Centered
    } else {
        SpectralCentering::Mixed
    };
    let est = spectral::lag_window(&series, &region, &threshold, truncation, &grid, centering)?;
    for w in &est.warnings {
        eprintln!("warning: {}", w);
    }
    let content = match args.format {
        OutputFormat::Json => est.to_json(),
        OutputFormat::Csv => est.to_csv(),
        OutputFormat::Svg => svg::render_spectrum(&est, "spectral density"),
    };
    write_output(&args.out, &content)
}

fn parse_ar_filter(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| usage(&format!("bad AR coefficient '{}'", t)))
        })
        .collect()
}

/// y_t = sum_k phi_k y_{t-k} + x_t with zero initial conditions.
fn apply_ar_filter(x: &[f64], phi: &[f64]) -> Vec<f64> {
    let mut y = Vec::with_capacity(x.len());
    for (t, &xt) in x.iter().enumerate() {
        let mut v = xt;
        for (k, &p) in phi.iter().enumerate() {
            if t > k {
                v += p * y[t - 1 - k];
            }
        }
        y.push(v);
    }
    y
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let seed = args
        .seed
        .ok_or_else(|| usage("--seed is required: simulation must be reproducible"))?;
    let spec = load_model(&args.model)?;
    let series = models::simulate(&spec, args.n, seed)?;
    let values: Vec<f64> = match &args.filter_ar {
        Some(text) => apply_ar_filter(series.values(), &parse_ar_filter(text)?),
        None => series.values().to_vec(),
    };
    let mut content = String::with_capacity(values.len() * 16);
    if series.dim() == 1 {
        for v in &values {
            content.push_str(&format!("{}\n", v));
        }
    } else {
        for row in values.chunks(series.dim()) {
            let fields: Vec<String> = row.iter().map(|v| format!("{}", v)).collect();
            content.push_str(&fields.join(","));
            content.push('\n');
        }
    }
    write_output(&args.out, &content)
}

fn cmd_tailindex(args: TailIndexArgs) -> Result<()> {
    let seed = args
        .seed
        .ok_or_else(|| usage("--seed is required: the solver is Monte Carlo"))?;
    let noise = match args.noise.as_str() {
        "gaussian" => NoiseSpec::gaussian(),
        "student" | "student_t" => {
            let nu = args
                .nu
                .ok_or_else(|| usage("--nu is required with student noise"))?;
            NoiseSpec::student(nu)
        }
        other => return Err(usage(&format!("unknown noise law '{}'", other))),
    };
    let solution =
        models::solve_garch_tail_index(args.alpha1, args.beta1, &noise, args.draws, seed)?;
    println!(
        "alpha = {:.4} (moment function standard error {:.2e}, {} draws)",
        solution.alpha, solution.h_std_err, solution.draws
    );
    Ok(())
}

/// A single upper tail (u, inf) on coordinate 1; the threshold u.
fn upper_tail_threshold(region: &RegionSpec, name: &'static str) -> Result<f64> {
    let sets = region.disjuncts();
    if sets.len() == 1 && sets[0].constraints.len() == 1 {
        if let Constraint::CoordInterval {
            coord: 0,
            lo,
            hi,
            ..
        } = sets[0].constraints[0]
        {
            if hi == f64::INFINITY && lo.is_finite() && lo > 0.0 {
                return Ok(lo);
            }
        }
    }
    Err(Error::UnsupportedRegion(format!(
        "{} must be a single upper tail \"(u,inf)\" with u > 0 for this oracle",
        name
    )))
}

fn oracle_as_result(te: &TheoreticalExtremogram, lags: usize, quantile: f64) -> ExtremogramResult {
    let config = EstimatorConfig {
        quantile_level: quantile,
        max_lag: lags,
        block_length: Some(1),
        ..EstimatorConfig::default()
    };
    let (band_lo, band_hi) = match te.std_err() {
        Some(se) => {
            let lo: Vec<f64> = te.rho.iter().zip(se).map(|(r, s)| r - 1.96 * s).collect();
            let hi: Vec<f64> = te.rho.iter().zip(se).map(|(r, s)| r + 1.96 * s).collect();
            (Some(lo), Some(hi))
        }
        None => (None, None),
    };
    ExtremogramResult {
        lags: te.lags.clone(),
        rho: te.rho.clone(),
        numerator_counts: vec![0; te.lags.len()],
        denominator_count: 0,
        variance: None,
        band_lo,
        band_hi,
        baseline: 0.0,
        centering_used: Centering::TrueValue,
        config,
        warnings: Vec::new(),
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let spec = load_model(&args.model)?;
    let a = RegionSpec::parse(&args.a_set)?;
    let b = match &args.b_set {
        Some(text) => RegionSpec::parse(text)?,
        None => a.clone(),
    };
    let te = match &spec.family {
        models::ModelFamily::Garch11 {
            alpha0,
            alpha1,
            beta1,
            noise,
        } => {
            let seed = args
                .seed
                .ok_or_else(|| usage("--seed is required: this oracle is Monte Carlo"))?;
            // raw-scale set (u, inf) on |X| corresponds to (u^2, inf) for X^2
            let ta = upper_tail_threshold(&a, "a-set")?.powi(2);
            let tb = upper_tail_threshold(&b, "b-set")?.powi(2);
            if *beta1 == 0.0 {
                models::arch1_extremogram(*alpha1, noise, ta, tb, args.lags, args.mc, seed)?
            } else {
                models::garch11_extremogram(
                    *alpha0, *alpha1, *beta1, noise, ta, tb, args.lags, args.mc, seed,
                )?
            }
        }
        models::ModelFamily::SvLognormal { noise, .. } => {
            let alpha = noise.tail_index().ok_or_else(|| {
                usage("the stochastic volatility oracle needs regularly varying noise")
            })?;
            models::sv_extremogram(&a, &b, alpha, noise.tail_balance(), args.lags)?
        }
        models::ModelFamily::Arma { phi, theta, noise } => {
            let alpha = noise
                .tail_index()
                .ok_or_else(|| usage("the linear-process oracle needs regularly varying noise"))?;
            if (noise.tail_balance() - 0.5).abs() > 1e-12 {
                return Err(usage(
                    "the linear-process oracle assumes symmetric noise (tail balance 0.5)",
                ));
            }
            let ta = upper_tail_threshold(&a, "a-set")?;
            let tb = upper_tail_threshold(&b, "b-set")?;
            let truncation = models::default_truncation(phi, theta)?;
            let psi = models::arma_psi_coefficients(phi, theta, truncation)?;
            models::linear_process_extremogram(&psi, alpha, ta, tb, args.lags)?
        }
        models::ModelFamily::SasLinear { psi, alpha, .. } => {
            let ta = upper_tail_threshold(&a, "a-set")?;
            let tb = upper_tail_threshold(&b, "b-set")?;
            models::linear_process_extremogram(psi, *alpha, ta, tb, args.lags)?
        }
    };
    let result = oracle_as_result(&te, args.lags, 0.98);
    write_output(&args.out, &render_result(&result, args.format, "model extremogram"))
}
