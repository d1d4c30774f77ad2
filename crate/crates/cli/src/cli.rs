//! Command-line surface.
//!
//! Subcommands: `eval-class`, `eval-seg`, `eval-all`, `fuse`, `conflict`
//! and `synth`. Every evaluation command reads a dataset manifest and
//! writes a JSON report; `synth` writes a self-contained synthetic dataset.
//! `UNCERTAIN_EVAL_THREADS` caps the number of worker threads.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use uncertain_eval::{BigInt, BigRational, CertaintyScale, TilePrediction};

use crate::manifest::DatasetManifest;
use crate::pipeline::{self, EvalOptions, FusionModel, LoadedImage};
use crate::report::{EvalReport, ExpertReport, FusedReport};
use crate::synth::{self, SynthParams};

const THREADS_ENV: &str = "UNCERTAIN_EVAL_THREADS";

#[derive(Parser)]
#[command(
    name = "uncertain-eval",
    version,
    about = "Evaluates tiled image classification and segmentation against \
             multi-expert, certainty-graded ground truth, and fuses \
             classifier outputs with belief functions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certainty-weighted confusion matrices and GCR/ECR rate vectors.
    EvalClass(EvalArgs),
    /// Boundary well-detection and false-detection measures.
    EvalSeg(EvalArgs),
    /// Both metric families in one report.
    EvalAll(EvalArgs),
    /// Belief fusion of score files: build bbas, combine, decide, then
    /// evaluate the decisions against the experts.
    Fuse(FuseArgs),
    /// Conflict and auto-conflict between the experts' tile bbas.
    Conflict(ConflictArgs),
    /// Generate a deterministic synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Dataset manifest (JSON).
    #[arg(long)]
    manifest: PathBuf,

    /// Comma-separated grade weights, most to least certain; fractions
    /// like 2/3 or decimals like 0.5.
    #[arg(long, default_value = "2/3,1/2,1/3")]
    weights: String,

    /// Exponent applied to the well-detection ratio.
    #[arg(long, default_value_t = 0.1666666667)]
    exponent_a: f64,

    /// Ignore certainty grades (same as --weights 1,1,...).
    #[arg(long)]
    no_certainty: bool,

    /// Report output path.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
}

#[derive(Args)]
struct FuseArgs {
    #[command(flatten)]
    eval: EvalArgs,

    /// Bba model for the score vectors.
    #[arg(long, value_parser = parse_model, default_value = "appriou")]
    model: FusionModel,

    /// Reliability coefficient applied to every source and class.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,

    /// Distance attenuation (distance model only).
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
}

#[derive(Args)]
struct ConflictArgs {
    #[command(flatten)]
    eval: EvalArgs,

    /// Self-combination count for the auto-conflict; defaults to the
    /// number of experts (at least 2).
    #[arg(long)]
    auto_k: Option<usize>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory receiving the dataset and its manifest.
    #[arg(long)]
    out_dir: PathBuf,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 64)]
    width: u32,

    #[arg(long, default_value_t = 64)]
    height: u32,

    #[arg(long, default_value_t = 3)]
    classes: usize,

    #[arg(long, default_value_t = 3)]
    grades: usize,

    #[arg(long, default_value_t = 8)]
    tile: u32,

    /// Probability of flipping a tile's predicted class.
    #[arg(long, default_value_t = 0.1)]
    noise: f64,

    #[arg(long, default_value_t = 1)]
    experts: usize,

    #[arg(long, default_value_t = 1)]
    images: usize,

    /// Number of classifier score files to synthesize per image.
    #[arg(long, default_value_t = 0)]
    sources: usize,
}

fn parse_model(s: &str) -> Result<FusionModel, String> {
    match s {
        "appriou" => Ok(FusionModel::Appriou),
        "denoeux" => Ok(FusionModel::Denoeux),
        other => Err(format!(
            "unknown model {other:?}, expected `appriou` or `denoeux`"
        )),
    }
}

/// Parses `a/b` fractions and decimal literals into exact rationals.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let invalid = || anyhow!("invalid weight {s:?}");
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| invalid())?;
        let den: BigInt = den.trim().parse().map_err(|_| invalid())?;
        if den == BigInt::from(0) {
            bail!("weight {s:?} divides by zero");
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().map_err(|_| invalid())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    let num: BigInt = s.parse().map_err(|_| invalid())?;
    Ok(BigRational::from(num))
}

fn parse_weights(weights: &str) -> Result<Vec<BigRational>> {
    weights.split(',').map(parse_rational).collect()
}

fn build_options(args: &EvalArgs) -> Result<EvalOptions> {
    let weights = parse_weights(&args.weights)?;
    if args.exponent_a <= 0.0 {
        bail!("--exponent-a must be positive, got {}", args.exponent_a);
    }
    let scale = if args.no_certainty {
        CertaintyScale::unit(weights.len())?
    } else {
        CertaintyScale::new(
            weights
                .into_iter()
                .enumerate()
                .map(|(i, w)| (format!("g{i}"), w))
                .collect(),
        )?
    };
    Ok(EvalOptions {
        scale,
        exponent: args.exponent_a,
        use_certainty: !args.no_certainty,
    })
}

fn load(args: &EvalArgs) -> Result<(DatasetManifest, Vec<LoadedImage>, EvalOptions)> {
    let opts = build_options(args)?;
    let (manifest, base) = DatasetManifest::load(&args.manifest)?;
    let images = pipeline::load_dataset(&manifest, &base, opts.scale.len())?;
    Ok((manifest, images, opts))
}

/// What an evaluation command fills into the report.
#[derive(Clone, Copy, PartialEq, Eq)]
enum EvalKind {
    Classification,
    Segmentation,
    Both,
}

fn evaluate(
    images: &[LoadedImage],
    predictions: &[TilePrediction],
    opts: &EvalOptions,
    kind: EvalKind,
    report: &mut EvalReport,
) -> Result<()> {
    let experts = images.first().map_or(0, |i| i.comps.len());
    let mut per_expert: Vec<ExpertReport> = (0..experts)
        .map(|expert| ExpertReport {
            expert,
            classification: None,
            segmentation: None,
        })
        .collect();
    let mut fused = FusedReport {
        classification: None,
        segmentation: None,
    };

    if kind != EvalKind::Segmentation {
        let (expert_reports, merged) = pipeline::classification_reports(images, predictions, opts)?;
        for (slot, r) in per_expert.iter_mut().zip(expert_reports) {
            slot.classification = Some(r);
        }
        report.classification = Some(merged.summary());
        fused.classification = Some(merged);
    }
    if kind != EvalKind::Classification {
        let (expert_reports, merged) = pipeline::segmentation_reports(images, predictions, opts)?;
        for (slot, r) in per_expert.iter_mut().zip(expert_reports) {
            slot.segmentation = Some(r);
        }
        report.segmentation = Some(merged.summary());
        fused.segmentation = Some(merged);
    }
    report.per_expert = per_expert;
    report.fused = fused;
    Ok(())
}

fn run_eval(args: &EvalArgs, kind: EvalKind) -> Result<()> {
    let (_, images, opts) = load(args)?;
    let predictions = pipeline::hard_predictions(&images)?;
    let mut report = EvalReport::empty();
    evaluate(&images, &predictions, &opts, kind, &mut report)?;
    report.write(&args.out)?;
    println!("report written to {}", args.out.display());
    Ok(())
}

fn run_fuse(args: &FuseArgs) -> Result<()> {
    let (manifest, images, opts) = load(&args.eval)?;
    let (fusion, decisions) = pipeline::fuse(
        &images,
        args.model,
        args.alpha,
        args.nu,
        manifest.classes.len(),
    )?;
    let mut report = EvalReport::empty();
    report.fusion = Some(fusion);
    // The decided predictions are evaluated like any classifier output.
    evaluate(&images, &decisions, &opts, EvalKind::Both, &mut report)?;
    report.write(&args.eval.out)?;
    println!("report written to {}", args.eval.out.display());
    Ok(())
}

fn run_conflict(args: &ConflictArgs) -> Result<()> {
    let (manifest, images, opts) = load(&args.eval)?;
    let auto_k = args.auto_k.unwrap_or_else(|| manifest.n_experts().max(2));
    let mut report = EvalReport::empty();
    report.fusion = Some(pipeline::expert_conflict(
        &images,
        &opts,
        manifest.classes.len(),
        auto_k,
    )?);
    report.write(&args.eval.out)?;
    println!("report written to {}", args.eval.out.display());
    Ok(())
}

fn run_synth(args: &SynthArgs) -> Result<()> {
    let params = SynthParams {
        seed: args.seed,
        width: args.width,
        height: args.height,
        n_classes: args.classes,
        n_grades: args.grades,
        tile: args.tile,
        noise: args.noise,
        experts: args.experts,
        sources: args.sources,
    };
    let manifest = synth::write_dataset(&args.out_dir, &params, args.images)?;
    println!("dataset written, manifest at {}", manifest.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::EvalClass(args) => run_eval(&args, EvalKind::Classification),
        Command::EvalSeg(args) => run_eval(&args, EvalKind::Segmentation),
        Command::EvalAll(args) => run_eval(&args, EvalKind::Both),
        Command::Fuse(args) => run_fuse(&args),
        Command::Conflict(args) => run_conflict(&args),
        Command::Synth(args) => run_synth(&args),
    }
}

fn with_thread_cap(f: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => f(),
        Err(e) => bail!("{THREADS_ENV}: {e}"),
        Ok(raw) => {
            let threads: usize = raw.parse().ok().filter(|t| *t >= 1).with_context(|| {
                format!("{THREADS_ENV} must be a positive integer, got {raw:?}")
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .context("failed to build the worker pool")?;
            pool.install(f)
        }
    }
}

/// Parses and runs; returns the process exit code (0 success, 2 for any
/// usage or validation failure).
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print to stdout and exit 0; real usage
            // errors print to stderr and exit 2.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match with_thread_cap(|| dispatch(cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("2/3").unwrap(),
            BigRational::new(2.into(), 3.into())
        );
        assert_eq!(
            parse_rational("0.5").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_rational("1").unwrap(),
            BigRational::from(BigInt::from(1))
        );
        assert_eq!(
            parse_rational(".25").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert_eq!(
            parse_rational("0.1666666667").unwrap().to_f64().unwrap(),
            0.1666666667
        );
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5.5").is_err());
    }

    #[test]
    fn weight_list_parsing() {
        let weights = parse_weights("2/3,1/2,1/3").unwrap();
        assert_eq!(weights.len(), 3);
        assert_eq!(weights[1], BigRational::new(1.into(), 2.into()));
        assert!(parse_weights("2/3,,1/3").is_err());
    }

    #[test]
    fn unknown_subcommand_exits_2() {
        assert_eq!(run_cli(["uncertain-eval", "frobnicate"]), 2);
    }

    #[test]
    fn unknown_flag_exits_2() {
        assert_eq!(run_cli(["uncertain-eval", "eval-all", "--bogus"]), 2);
    }

    #[test]
    fn help_exits_0() {
        assert_eq!(run_cli(["uncertain-eval", "--help"]), 0);
    }

    #[test]
    fn missing_manifest_file_exits_2() {
        assert_eq!(
            run_cli([
                "uncertain-eval",
                "eval-all",
                "--manifest",
                "/nonexistent/m.json"
            ]),
            2
        );
    }
}
