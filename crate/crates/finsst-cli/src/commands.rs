//! Subcommand orchestration: generators, transforms, reconstruction,
//! metrics, and heatmap rendering as reproducible pipelines.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use finsst::{
    add_noise, concentration, cyclic_distance_f, extract_ridges, gen_chirp, gen_interlacing,
    gen_two_component, inst_freq_info, itvps, modified_stft, positive_half,
    reconstruct_component, reconstruct_real_component, ridge_error, sst, stft, ComplexSignal,
    ComponentModel, RidgeBand, RidgeSet, TfKind, TfMatrix, WindowSpec, DEFAULT_ZERO_THRESHOLD,
};

use crate::io;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {what}")]
    Parse { path: String, line: usize, what: String },
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<finsst::Error> for CliError {
    fn from(e: finsst::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "finsst",
    about = "Finite STFT synchrosqueezing pipelines on cyclic signals",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignalName {
    /// Single-component chirp (frequency 10 + n/20)
    Chirp,
    /// Two components near bins 40 and 60..76
    Two,
    /// Interlacing components crossing at n = 150
    Interlace,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    Stft,
    ModifiedStft,
    Sst,
    Itvps,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a test signal CSV (and optionally its model JSON)
    Gen(GenArgs),
    /// Transform a signal CSV into a time-frequency matrix CSV
    Transform(TransformArgs),
    /// Band-sum component reconstruction from an SST matrix
    Reconstruct(ReconstructArgs),
    /// Concentration / ridge-error / bound-check metrics as JSON
    Metrics(MetricsArgs),
    /// Render a matrix CSV as a binary PGM heatmap
    Plot(PlotArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Which test signal to generate
    #[arg(long, value_enum)]
    pub signal: SignalName,
    /// Signal length
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Sup-norm of the added noise (0 = clean)
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Noise seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output signal CSV
    #[arg(long)]
    pub out: PathBuf,
    /// Optional output path for the ground-truth model JSON
    #[arg(long)]
    pub model_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct TransformArgs {
    /// Transform to compute
    #[arg(long, value_enum)]
    pub kind: TransformKind,
    /// Input signal CSV (unused for itvps)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Model JSON (required for itvps)
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Window frequency support W
    #[arg(long, default_value_t = 10)]
    pub support: usize,
    /// Signal length (itvps only; otherwise taken from the input)
    #[arg(long)]
    pub n: Option<usize>,
    /// Output matrix CSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ReconstructArgs {
    /// SST matrix CSV
    #[arg(long)]
    pub sst: PathBuf,
    /// Model JSON providing the ridge centers
    #[arg(long)]
    pub model: PathBuf,
    /// Component index (0-based)
    #[arg(long, default_value_t = 0)]
    pub component: usize,
    /// Band half-width in bins; -1 sums over all bins
    #[arg(long, default_value_t = 6)]
    pub band: i64,
    /// Window frequency support W (must match the transform)
    #[arg(long, default_value_t = 10)]
    pub support: usize,
    /// Output component CSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct MetricsArgs {
    /// Modified-STFT matrix CSV (|V| matches the plain STFT entrywise,
    /// and the modified phases feed the bound check)
    #[arg(long)]
    pub stft: PathBuf,
    /// SST matrix CSV
    #[arg(long)]
    pub sst: PathBuf,
    /// Model JSON with the ground-truth ridges
    #[arg(long)]
    pub model: PathBuf,
    /// Concentration band half-width in bins
    #[arg(long, default_value_t = 2)]
    pub band: usize,
    /// Window frequency support W (must match the transform)
    #[arg(long, default_value_t = 10)]
    pub support: usize,
    /// Output metrics JSON
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct PlotArgs {
    /// Input matrix CSV
    #[arg(long)]
    pub input: PathBuf,
    /// Output PGM (binary P5)
    #[arg(long)]
    pub out: PathBuf,
    /// log10(1 + power) scaling instead of linear
    #[arg(long, default_value_t = false)]
    pub log: bool,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn generate(name: SignalName, n: usize) -> (ComplexSignal, ComponentModel) {
    match name {
        SignalName::Chirp => gen_chirp(n),
        SignalName::Two => gen_two_component(n),
        SignalName::Interlace => gen_interlacing(n),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    if args.noise < 0.0 {
        return Err(CliError::Usage("--noise must be non-negative".into()));
    }
    let (clean, model) = generate(args.signal, args.n);
    let signal = if args.noise > 0.0 {
        add_noise(&clean, args.noise, args.seed)
    } else {
        clean
    };
    io::write_signal(&args.out, &signal)?;
    if let Some(model_path) = &args.model_out {
        io::write_model(model_path, &model)?;
    }
    Ok(())
}

fn cmd_transform(args: TransformArgs) -> Result<(), CliError> {
    if args.kind == TransformKind::Itvps {
        let model_path = args
            .model
            .as_ref()
            .ok_or_else(|| CliError::Usage("itvps requires --model".into()))?;
        let model = io::read_model(model_path)?;
        let n = match (&args.input, args.n) {
            (_, Some(n)) => n,
            (Some(input), None) => io::read_signal(input)?.len(),
            (None, None) => {
                return Err(CliError::Usage("itvps requires --n or --input".into()))
            }
        };
        let p = itvps(&model, n);
        return io::write_matrix(&args.out, &p);
    }

    let input = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("this transform requires --input".into()))?;
    let x = io::read_signal(input)?;
    if args.support >= x.len() {
        return Err(CliError::Usage(format!(
            "--support {} must be below the signal length {}",
            args.support,
            x.len()
        )));
    }
    let w = WindowSpec::hann_freq(x.len(), args.support)?;
    let t = match args.kind {
        TransformKind::Stft => stft(&x, &w)?,
        TransformKind::ModifiedStft => modified_stft(&x, &w)?,
        TransformKind::Sst => {
            let v = modified_stft(&x, &w)?;
            let omega = inst_freq_info(&v, DEFAULT_ZERO_THRESHOLD);
            sst(&v, &omega)
        }
        TransformKind::Itvps => unreachable!(),
    };
    io::write_matrix(&args.out, &t)
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<(), CliError> {
    let s = io::read_matrix(&args.sst, TfKind::Sst)?;
    let model = io::read_model(&args.model)?;
    let n = s.len();
    let w = WindowSpec::hann_freq(n, args.support)?;
    let band = if args.band < 0 {
        RidgeBand::full(n)
    } else {
        RidgeBand::from_model(&model, args.component, n, args.band as usize)?
    };
    if args.component >= model.k {
        return Err(finsst::Error::ComponentOutOfRange { index: args.component, k: model.k }.into());
    }

    let (rec, rec_real): (ComplexSignal, Option<Vec<f64>>) = if model.real_valued && args.band >= 0 {
        let r = reconstruct_real_component(&s, &band, &w)?;
        (ComplexSignal::from_real(&r), Some(r))
    } else {
        (reconstruct_component(&s, &band, &w)?, None)
    };
    io::write_signal(&args.out, &rec)?;

    // residual vs. the model component over interior samples
    let truth = component_truth(&model, args.component, n);
    let interior = 10..n.saturating_sub(10);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in interior {
        let got = match &rec_real {
            Some(r) => r[i],
            None => rec.at(i as isize).re,
        };
        let diff = got - truth[i];
        num += diff * diff;
        den += truth[i] * truth[i];
    }
    if den > 0.0 {
        eprintln!(
            "relative l2 error vs model component {} (interior samples): {:.6}",
            args.component,
            (num / den).sqrt()
        );
    }
    Ok(())
}

fn component_truth(model: &ComponentModel, k: usize, n: usize) -> Vec<f64> {
    let c = &model.components[k];
    (0..n)
        .map(|i| {
            let t = i as f64;
            let theta = std::f64::consts::TAU * c.phase.phase(t) / n as f64;
            c.amplitude_at(t) * theta.cos()
        })
        .collect()
}

#[derive(Serialize)]
struct Metrics {
    concentration_stft: f64,
    concentration_sst: f64,
    ridge_mean_err: f64,
    ridge_max_err: usize,
    bound_violations: usize,
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let v = io::read_matrix(&args.stft, TfKind::ModifiedStft)?;
    let s = io::read_matrix(&args.sst, TfKind::Sst)?;
    let model = io::read_model(&args.model)?;
    let n = v.len();
    if s.len() != n {
        return Err(CliError::Data(format!(
            "matrix sizes disagree: stft N={n}, sst N={}",
            s.len()
        )));
    }
    let w = WindowSpec::hann_freq(n, args.support)?;
    let truth = RidgeSet::from_model(&model, n);

    // real signals: compare against the positive-frequency ridges only
    let (v_view, s_view) = if model.real_valued {
        (positive_half(&v), positive_half(&s))
    } else {
        (v.clone(), s.clone())
    };
    let concentration_stft = concentration(&v_view, &truth, args.band)?;
    let concentration_sst = concentration(&s_view, &truth, args.band)?;

    let min_sep = model.d / 2;
    let est = extract_ridges(&s_view, model.k, min_sep);
    let errs = ridge_error(&est, &truth)?;
    let ridge_mean_err = errs.iter().map(|e| e.mean).sum::<f64>() / errs.len() as f64;
    let ridge_max_err = errs.iter().map(|e| e.max).max().unwrap_or(0);

    let bound_violations = count_bound_violations(&model, &w, &v)?;

    let metrics = Metrics {
        concentration_stft,
        concentration_sst,
        ridge_mean_err,
        ridge_max_err,
        bound_violations,
    };
    let mut json = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
    json.push('\n');
    std::fs::write(&args.out, json).map_err(|e| CliError::io(&args.out, e))
}

/// Counts unmasked on-ridge entries whose instantaneous-frequency
/// information misses the true ridge by more than the computed bound.
pub fn count_bound_violations(
    model: &ComponentModel,
    w: &WindowSpec,
    v: &TfMatrix,
) -> Result<usize, CliError> {
    let n_len = v.len();
    let omega = inst_freq_info(v, DEFAULT_ZERO_THRESHOLD);
    let eps = model.epsilon(n_len);
    let half_d = model.d as f64 / 2.0;
    let mut violations = 0;
    for n in 0..n_len {
        let report = finsst::squeeze::error_bound(model, w, v, n, eps, model.real_valued, 0.0)?;
        for l in 0..n_len {
            if !omega.defined(n, l) {
                continue;
            }
            for c in &model.components {
                let phi1 = c.phase.deriv(n as f64);
                if cyclic_distance_f(l as f64, phi1, n_len) < half_d {
                    let err = cyclic_distance_f(omega.at(n, l) as f64, phi1, n_len);
                    if err > report.eps_tilde {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(violations)
}

fn cmd_plot(args: PlotArgs) -> Result<(), CliError> {
    let t = io::read_matrix(&args.input, TfKind::Stft)?;
    io::write_pgm(&args.out, &t, args.log)
}
