//! `dehaze` — command-line front end for the enhancement engine.
//!
//! Subcommands: `enhance` (one image in, one image out), `metrics`
//! (no-reference quality record for an image), `bench` (directory batch
//! with timing and optional metric columns).
//!
//! Exit codes: 0 success, 1 partial batch failure, 2 I/O failure,
//! 64 usage or validation error.

mod codec;
mod config;
mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dehaze_core::pipeline::{enhance_image, run_batch, BenchReport, BenchRow, RowOutcome};
use dehaze_core::{iqa, Error, MetricReport, PipelineConfig, RgbImage};

use config::Overrides;
use report::{bench_csv, bench_json, metrics_csv, metrics_json, BenchFormat};

/// CLI failure classes, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config values: exit 64.
    Usage(String),
    /// Unreadable, unsupported, or unwritable files: exit 2.
    Io(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "dehaze",
    version,
    about = "Fractional multiscale fusion enhancement for hazy and underwater images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enhance one image and write the result
    Enhance(EnhanceArgs),
    /// Emit the no-reference metric record for an image
    Metrics(MetricsArgs),
    /// Process a directory and write a timing/metrics report
    Bench(BenchArgs),
}

#[derive(Args, Debug, Default)]
struct ConfigFlags {
    /// Filter configuration: hpfc (sharper, darker) or hbfc (brighter)
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated fractional orders in [0,2], e.g. 0.25,0.5,0.75
    #[arg(long)]
    orders: Option<String>,
    /// Coefficient truncation depth (mask radius), 1..=16
    #[arg(long)]
    k: Option<usize>,
    /// High-boost factor A >= 1 (hbfc only)
    #[arg(long)]
    boost: Option<f64>,
    /// Decomposition levels
    #[arg(long)]
    levels: Option<usize>,
    /// Base blur scale in pixels
    #[arg(long)]
    sigma0: Option<f64>,
    /// Detail enhancement strength
    #[arg(long)]
    lambda: Option<f64>,
    /// Approximation gain override in (0, 1.5]
    #[arg(long = "approx-gain")]
    approx_gain: Option<f64>,
    /// Candidate combination: weighted or argmax
    #[arg(long)]
    strategy: Option<String>,
    /// Global percentile stretch: on or off
    #[arg(long)]
    stretch: Option<String>,
    /// Flat key=value config file (flags win over file keys)
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ConfigFlags {
    fn resolve(&self) -> Result<PipelineConfig, CliError> {
        let overrides = Overrides {
            mode: self.mode.as_deref().map(config::parse_mode).transpose()?,
            orders: self
                .orders
                .as_deref()
                .map(config::parse_orders)
                .transpose()?,
            truncation: self.k,
            boost: self.boost,
            levels: self.levels,
            sigma0: self.sigma0,
            lambda: self.lambda,
            approx_gain: self.approx_gain,
            strategy: self
                .strategy
                .as_deref()
                .map(config::parse_strategy)
                .transpose()?,
            stretch: self
                .stretch
                .as_deref()
                .map(config::parse_switch)
                .transpose()?,
        };
        config::resolve(self.config.as_deref(), &overrides)
    }
}

#[derive(Args, Debug)]
struct EnhanceArgs {
    /// Input image (PPM, PNG, or JPEG)
    #[arg(long = "in")]
    input: PathBuf,
    /// Output image (.ppm or .png)
    #[arg(long = "out")]
    output: PathBuf,
    #[command(flatten)]
    config: ConfigFlags,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    /// Input image
    #[arg(long = "in")]
    input: PathBuf,
    /// Reference image for CEF
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    report: String,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of images
    #[arg(long = "in")]
    input: PathBuf,
    /// Report file; stdout when omitted
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    report: String,
    /// Include the metric suite per row (plus CEF against the input)
    #[arg(long)]
    metrics: bool,
    /// Omit runtime columns so repeat runs are byte-identical
    #[arg(long = "no-timing")]
    no_timing: bool,
    #[command(flatten)]
    config: ConfigFlags,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                0
            } else {
                eprint!("{err}");
                64
            };
        }
    };

    let outcome = match cli.command {
        Command::Enhance(args) => cmd_enhance(&args),
        Command::Metrics(args) => cmd_metrics(&args),
        Command::Bench(args) => cmd_bench(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            64
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn parse_report_format(value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "csv" => Ok(false),
        "json" => Ok(true),
        other => Err(CliError::Usage(format!(
            "invalid report format '{other}' (expected csv or json)"
        ))),
    }
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_enhance(args: &EnhanceArgs) -> Result<i32, CliError> {
    let cfg = args.config.resolve()?;
    let img = codec::read_image(&args.input)?;
    let start = Instant::now();
    let out = enhance_image(&img, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let runtime_ms = (start.elapsed().as_secs_f64() * 1e3).max(1e-6);
    codec::write_image(&args.output, &out)?;
    println!("runtime_ms={}", report::format_sig(runtime_ms));
    Ok(0)
}

fn cmd_metrics(args: &MetricsArgs) -> Result<i32, CliError> {
    let as_json = parse_report_format(&args.report)?;
    let img = codec::read_image(&args.input)?;
    let mut metrics = MetricReport::compute(&img)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;

    let with_cef = args.reference.is_some();
    if let Some(ref_path) = &args.reference {
        let reference = codec::read_image(ref_path)?;
        match iqa::cef(&img, &reference) {
            Ok(value) => metrics.cef = Some(value),
            Err(Error::GrayscaleReference) => {
                eprintln!("warning: reference image is grayscale; cef is undefined");
            }
            Err(e) => return Err(CliError::Io(e.to_string())),
        }
    }

    let label = file_label(&args.input);
    let text = if as_json {
        metrics_json(&label, &metrics, with_cef)
    } else {
        metrics_csv(&label, &metrics, with_cef)
    };
    print!("{text}");
    Ok(0)
}

const INPUT_EXTENSIONS: [&str; 4] = ["ppm", "png", "jpg", "jpeg"];

fn list_images(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("cannot read directory {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| {
            path.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|ext| {
                    INPUT_EXTENSIONS.contains(&ext.to_ascii_lowercase().as_str())
                })
        })
        .collect();
    paths.sort();
    Ok(paths)
}

fn cmd_bench(args: &BenchArgs) -> Result<i32, CliError> {
    let as_json = parse_report_format(&args.report)?;
    let cfg = args.config.resolve()?;
    let paths = list_images(&args.input)?;
    if paths.is_empty() {
        return Err(CliError::Io(format!(
            "no images found in {}",
            args.input.display()
        )));
    }

    // Decode failures become error rows; everything decodable is timed.
    let mut decode_errors: Vec<Option<String>> = Vec::with_capacity(paths.len());
    let mut decoded: Vec<(String, RgbImage)> = Vec::new();
    for path in &paths {
        match codec::read_image(path) {
            Ok(img) => {
                decode_errors.push(None);
                decoded.push((file_label(path), img));
            }
            Err(CliError::Io(msg)) | Err(CliError::Usage(msg)) => {
                decode_errors.push(Some(msg));
            }
        }
    }

    let batch = if decoded.is_empty() {
        BenchReport {
            config_summary: cfg.summary(),
            rows: Vec::new(),
        }
    } else {
        run_batch(&decoded, &cfg, args.metrics).map_err(|e| CliError::Usage(e.to_string()))?
    };

    // stitch decode failures back in, preserving directory order
    let mut batch_rows = batch.rows.into_iter();
    let rows: Vec<BenchRow> = paths
        .iter()
        .zip(&decode_errors)
        .map(|(path, failure)| match failure {
            Some(message) => BenchRow {
                id: file_label(path),
                outcome: RowOutcome::Failed {
                    message: message.clone(),
                },
            },
            None => batch_rows.next().expect("one batch row per decoded image"),
        })
        .collect();
    let report = BenchReport {
        config_summary: batch.config_summary,
        rows,
    };

    let format = BenchFormat {
        with_metrics: args.metrics,
        with_timing: !args.no_timing,
    };
    let text = if as_json {
        bench_json(&report, format)
    } else {
        bench_csv(&report, format)
    };
    match &args.output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }

    Ok(if report.failed_count() > 0 { 1 } else { 0 })
}
