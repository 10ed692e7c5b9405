//! Command-line interface: gen-data, train, propose, eval, gradcheck.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 numeric failure. Every
//! failure prints one machine-parsable line (`E_USAGE:` / `E_VALIDATION:` /
//! `E_NUMERIC:` plus text); every output file embeds (config hash, seed,
//! tool version).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::data::{
    generate_synthetic_dataset, load_dataset, read_pgm, save_dataset, GenConfig, SampleRecord,
};
use crate::eval::{build_curves, build_recall_report, EvalOptions, MatchRule, REPORT_KS};
use crate::losses::finite_diff_check;
use crate::nn::{load_checkpoint, save_checkpoint, Tensor};
use crate::training::{
    end_to_end_gradcheck, propose, train, Ablation, TrainConfig, TrainError, DEFAULT_NMS_IOU,
};
use crate::Provenance;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (code, msg) = match self {
            CliError::Usage(m) => ("E_USAGE", m),
            CliError::Validation(m) => ("E_VALIDATION", m),
            CliError::Numeric(m) => ("E_NUMERIC", m),
        };
        // single line, machine-parsable code first
        write!(f, "{code}: {}", msg.replace('\n', " "))
    }
}

fn validation(msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(msg.to_string())
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Diverged { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nrpn",
    version,
    about = "Region proposal toolkit: RPN/nRPN co-training with hard-negative exchange and overlap loss"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset directory
    GenData(GenDataArgs),
    /// Train proposal networks and write checkpoints + training log
    Train(TrainArgs),
    /// Emit the top-k proposals for one image as CSV
    Propose(ProposeArgs),
    /// Evaluate a checkpoint: recall report (and optional curves) as CSV
    Eval(EvalArgs),
    /// Verify analytic gradients against finite differences
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    /// Output dataset directory
    #[arg(long)]
    pub out: PathBuf,
    /// Number of images
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Square image side in pixels
    #[arg(long, default_value_t = 128)]
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Small,medium,large object proportions
    #[arg(long = "size-mix", default_value = "0.3,0.4,0.3", value_parser = parse_mix)]
    pub size_mix: SizeMix,
    #[arg(long = "min-objects", default_value_t = 1)]
    pub min_objects: usize,
    #[arg(long = "max-objects", default_value_t = 3)]
    pub max_objects: usize,
    #[arg(long = "min-distractors", default_value_t = 5)]
    pub min_distractors: usize,
    #[arg(long = "max-distractors", default_value_t = 8)]
    pub max_distractors: usize,
    /// Split name used in image ids
    #[arg(long, default_value = "train")]
    pub split: String,
}

#[derive(Debug, Clone)]
pub struct SizeMix(pub [f64; 3]);

fn parse_mix(s: &str) -> Result<SizeMix, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("--size-mix wants three comma-separated numbers, e.g. 0.3,0.4,0.3".into());
    }
    let mut mix = [0.0; 3];
    for (m, p) in mix.iter_mut().zip(parts) {
        *m = p
            .trim()
            .parse()
            .map_err(|e| format!("--size-mix: {e}"))?;
    }
    Ok(SizeMix(mix))
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training config JSON (missing fields take defaults)
    #[arg(long)]
    pub config: PathBuf,
    /// Dataset directory (gen-data output)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Output directory for checkpoints, log, and resolved config
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ablation row: rpn-only, rpn+nrpn, or rpn+nrpn+overlap-loss
    #[arg(long)]
    pub ablation: Option<String>,
    /// Override the config seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ProposeArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// PGM image file to propose on
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Dataset directory (with --image-id) as the image source
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long = "image-id")]
    pub image_id: Option<String>,
    /// Number of proposals
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// NMS IoU threshold
    #[arg(long, default_value_t = DEFAULT_NMS_IOU)]
    pub iou: f64,
    /// Output CSV path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Recall report CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Also write recall curves + average-recall CSV here
    #[arg(long)]
    pub curves: Option<PathBuf>,
    /// NMS IoU threshold used when proposing
    #[arg(long, default_value_t = DEFAULT_NMS_IOU)]
    pub iou: f64,
    /// Override the model column (defaults to the checkpoint's model name)
    #[arg(long)]
    pub model: Option<String>,
    /// Use greedy one-to-one proposal/GT matching instead of the default
    /// non-exclusive rule
    #[arg(long, default_value_t = false)]
    pub exclusive: bool,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    /// Random interior points per loss suite
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Max relative error tolerated for the loss suites
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Central-difference step for the loss suites
    #[arg(long, default_value_t = 1e-5)]
    pub step: f64,
}

/// Parses argv and dispatches; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first_line = e
                .to_string()
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .to_string();
            eprintln!("{}", CliError::Usage(first_line));
            return 1;
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::GenData(args) => cmd_gen_data(args),
        Command::Train(args) => cmd_train(args).map(|_| ()),
        Command::Propose(args) => cmd_propose(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Gradcheck(args) => cmd_gradcheck(args),
    }
}

pub fn cmd_gen_data(args: &GenDataArgs) -> Result<(), CliError> {
    let cfg = GenConfig {
        split: args.split.clone(),
        n: args.n,
        image_size: args.size,
        size_mix: args.size_mix.0,
        objects_per_image: [args.min_objects, args.max_objects],
        distractors_per_image: [args.min_distractors, args.max_distractors],
        seed: args.seed,
        stride_divisor: 8,
    };
    let (manifest, samples) = generate_synthetic_dataset(&cfg).map_err(|e| {
        // name the flags, not the config fields
        let msg = e
            .to_string()
            .replace("size_mix", "--size-mix")
            .replace("image_size", "--size");
        validation(msg)
    })?;
    save_dataset(&manifest, &samples, &args.out).map_err(validation)?;
    println!(
        "wrote {} samples to {} (seed {}, config {})",
        samples.len(),
        args.out.display(),
        manifest.seed,
        manifest.config_hash
    );
    Ok(())
}

/// The training config file: a full TrainConfig plus optional run paths and
/// mode flags; command-line flags override file values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub train: TrainConfig,
    pub data: Option<String>,
    pub out: Option<String>,
    pub ablation: Option<String>,
}

/// What `train` writes back next to its outputs: the fully resolved config
/// with its own content hash, so a run is reproducible from its artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub tool_version: String,
    /// Hash of the resolved `train` section.
    pub config_hash: String,
    #[serde(flatten)]
    pub run: RunConfig,
}

pub struct TrainOutputs {
    pub out_dir: PathBuf,
    pub rpn_path: PathBuf,
    pub nrpn_path: Option<PathBuf>,
    pub log_path: PathBuf,
    pub provenance: Provenance,
    pub model: String,
}

pub fn cmd_train(args: &TrainArgs) -> Result<TrainOutputs, CliError> {
    let raw = fs::read_to_string(&args.config)
        .map_err(|e| validation(format!("{}: {e}", args.config.display())))?;
    let mut run: RunConfig = serde_json::from_str(&raw)
        .map_err(|e| validation(format!("{}: {e}", args.config.display())))?;

    if let Some(ablation) = args.ablation.as_deref().or(run.ablation.as_deref()) {
        let a = Ablation::parse(ablation).ok_or_else(|| {
            validation(format!(
                "--ablation must be one of rpn-only, rpn+nrpn, rpn+nrpn+overlap-loss (got {ablation})"
            ))
        })?;
        a.apply(&mut run.train);
        run.ablation = Some(ablation.to_string());
    }
    if let Some(seed) = args.seed {
        run.train.seed = seed;
    }
    let data_dir = args
        .data
        .clone()
        .or_else(|| run.data.as_ref().map(PathBuf::from))
        .ok_or_else(|| validation("--data is required (flag or config field)"))?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| run.out.as_ref().map(PathBuf::from))
        .ok_or_else(|| validation("--out is required (flag or config field)"))?;
    run.data = Some(data_dir.display().to_string());
    run.out = Some(out_dir.display().to_string());

    run.train.validate()?;
    let config_hash = crate::config_hash(&run.train);
    let prov = Provenance::new(config_hash.clone(), run.train.seed);

    let (_, samples) = load_dataset(&data_dir).map_err(validation)?;
    let output = train(&samples, &run.train)?;
    let model = run.train.model_name().to_string();

    fs::create_dir_all(&out_dir).map_err(|e| validation(format!("{}: {e}", out_dir.display())))?;
    let resolved = ResolvedConfig {
        tool_version: prov.tool_version.clone(),
        config_hash: config_hash.clone(),
        run: run.clone(),
    };
    let mut resolved_json = serde_json::to_string_pretty(&resolved).expect("config serializes");
    resolved_json.push('\n');
    fs::write(out_dir.join("config.resolved.json"), resolved_json)
        .map_err(|e| validation(format!("{}: {e}", out_dir.display())))?;

    let rpn_path = out_dir.join("rpn.ckpt.json");
    save_checkpoint(&rpn_path, &output.rpn, &run.train.anchors, &prov, "rpn", &model)
        .map_err(validation)?;
    let nrpn_path = match &output.nrpn {
        Some(net) => {
            let p = out_dir.join("nrpn.ckpt.json");
            save_checkpoint(&p, net, &run.train.anchors, &prov, "nrpn", &model)
                .map_err(validation)?;
            Some(p)
        }
        None => None,
    };
    let log_path = out_dir.join("train_log.csv");
    fs::write(&log_path, output.log.to_csv(&prov))
        .map_err(|e| validation(format!("{}: {e}", log_path.display())))?;

    println!(
        "trained {model} for {} epochs on {} images -> {}",
        run.train.total_epochs,
        samples.len(),
        out_dir.display()
    );
    Ok(TrainOutputs {
        out_dir,
        rpn_path,
        nrpn_path,
        log_path,
        provenance: prov,
        model,
    })
}

fn load_image_arg(args: &ProposeArgs) -> Result<(String, Tensor), CliError> {
    match (&args.image, &args.data, &args.image_id) {
        (Some(path), _, _) => {
            let (w, h, pixels) = read_pgm(path).map_err(validation)?;
            let data: Vec<f64> = pixels.iter().map(|&v| v as f64 / 255.0).collect();
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "image".to_string());
            Ok((
                id,
                Tensor::from_vec(&[1, h, w], data).expect("pgm buffer size"),
            ))
        }
        (None, Some(dir), Some(id)) => {
            let (_, samples) = load_dataset(dir).map_err(validation)?;
            let sample = samples
                .into_iter()
                .find(|s| &s.image_id == id)
                .ok_or_else(|| validation(format!("image id {id} not found in dataset")))?;
            Ok((sample.image_id, sample.image))
        }
        _ => Err(validation(
            "propose needs --image FILE or --data DIR with --image-id ID",
        )),
    }
}

pub fn cmd_propose(args: &ProposeArgs) -> Result<(), CliError> {
    let (net, ckpt) = load_checkpoint(&args.checkpoint).map_err(validation)?;
    let (image_id, image) = load_image_arg(args)?;
    let set = propose(&net, &ckpt.anchors, &image, args.k, args.iou)?;

    let prov = Provenance::new(ckpt.config_hash.clone(), ckpt.seed);
    let mut csv = String::new();
    csv.push_str(&prov.comment_line());
    csv.push('\n');
    csv.push_str("image_id,score,x1,y1,x2,y2\n");
    for p in &set.proposals {
        csv.push_str(&format!(
            "{image_id},{},{},{},{},{}\n",
            p.score, p.bbox.x1, p.bbox.y1, p.bbox.x2, p.bbox.y2
        ));
    }
    match &args.out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| validation(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let (net, ckpt) = load_checkpoint(&args.checkpoint).map_err(validation)?;
    let (_, samples) = load_dataset(&args.data).map_err(validation)?;
    let model = args.model.clone().unwrap_or_else(|| ckpt.model.clone());
    let prov = Provenance::new(ckpt.config_hash.clone(), ckpt.seed);

    let max_k = REPORT_KS.iter().copied().max().unwrap_or(300);
    let nms_iou = args.iou;
    let proposer = |s: &SampleRecord| {
        propose(&net, &ckpt.anchors, &s.image, max_k, nms_iou)
            .expect("proposal generation on validated dataset")
    };
    let opts = EvalOptions {
        rule: if args.exclusive {
            MatchRule::ExclusiveGreedy
        } else {
            MatchRule::NonExclusive
        },
        ..EvalOptions::default()
    };
    let report = build_recall_report(&model, proposer, &samples, &opts);
    fs::write(&args.out, report.to_csv(&prov))
        .map_err(|e| validation(format!("{}: {e}", args.out.display())))?;

    if let Some(curves_path) = &args.curves {
        let proposer = |s: &SampleRecord| {
            propose(&net, &ckpt.anchors, &s.image, max_k, nms_iou)
                .expect("proposal generation on validated dataset")
        };
        let curves = build_curves(&model, proposer, &samples);
        fs::write(curves_path, curves.to_csv(&prov))
            .map_err(|e| validation(format!("{}: {e}", curves_path.display())))?;
    }
    println!("evaluated {model} on {} images -> {}", samples.len(), args.out.display());
    Ok(())
}

fn gradcheck_line(name: &str, report: &crate::losses::GradCheckReport) -> String {
    format!(
        "gradcheck {name}: max_rel_err={:.3e} tol={:.1e} points={} {}",
        report.max_rel_err,
        report.tol,
        report.points_checked,
        if report.pass() { "PASS" } else { "FAIL" }
    )
}

pub fn cmd_gradcheck(args: &GradcheckArgs) -> Result<(), CliError> {
    use crate::losses::{bce_loss, overlap_loss, smooth_l1, LossConfig};
    use rand::Rng;

    if args.samples == 0 {
        return Err(validation("--samples must be positive"));
    }
    let cfg = LossConfig::default();
    let mut failures = Vec::new();
    let mut rng = crate::rng::rng_from(args.seed, &[0x6772]);

    // overlap loss, foreground branch: p strictly inside (eps, iou)
    let fg_points: Vec<Vec<f64>> = (0..args.samples)
        .map(|_| {
            let iou: f64 = rng.gen_range(0.2..1.0);
            vec![rng.gen_range(0.01..iou - 0.01), iou]
        })
        .collect();
    let f = |x: &[f64]| {
        let lv = overlap_loss(x[0], true, x[1], &cfg).expect("interior point");
        (lv.value, vec![lv.grad1(), 1.0 / x[1]])
    };
    let report = finite_diff_check(f, &fg_points, args.step, args.tol)
        .map_err(|e| validation(e.to_string()))?;
    println!("{}", gradcheck_line("overlap_loss[fg]", &report));
    if !report.pass() {
        failures.push("overlap_loss[fg]");
    }

    // overlap loss, background branch
    let neg_points: Vec<Vec<f64>> = (0..args.samples)
        .map(|_| vec![rng.gen_range(0.01..0.99)])
        .collect();
    let f = |x: &[f64]| {
        let lv = overlap_loss(x[0], false, 1.0, &cfg).expect("interior point");
        (lv.value, vec![lv.grad1()])
    };
    let report = finite_diff_check(f, &neg_points, args.step, args.tol)
        .map_err(|e| validation(e.to_string()))?;
    println!("{}", gradcheck_line("overlap_loss[bg]", &report));
    if !report.pass() {
        failures.push("overlap_loss[bg]");
    }

    // bce, both branches
    let bce_points: Vec<Vec<f64>> = (0..args.samples)
        .map(|_| vec![rng.gen_range(0.01..0.99)])
        .collect();
    for (name, is_fg) in [("bce_loss[fg]", true), ("bce_loss[bg]", false)] {
        let f = |x: &[f64]| {
            let lv = bce_loss(x[0], is_fg, &cfg).expect("interior point");
            (lv.value, vec![lv.grad1()])
        };
        let report = finite_diff_check(f, &bce_points, args.step, args.tol)
            .map_err(|e| validation(e.to_string()))?;
        println!("{}", gradcheck_line(name, &report));
        if !report.pass() {
            failures.push(name);
        }
    }

    // smooth l1 away from the |d| = 1 kink
    let sl1_points: Vec<Vec<f64>> = (0..args.samples)
        .map(|_| {
            (0..4)
                .map(|_| {
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    if rng.gen_bool(0.5) {
                        sign * rng.gen_range(0.01..0.9)
                    } else {
                        sign * rng.gen_range(1.1..3.0)
                    }
                })
                .collect()
        })
        .collect();
    let f = |x: &[f64]| {
        let t = crate::geometry::RegressionTarget::from_array([x[0], x[1], x[2], x[3]]);
        let lv = smooth_l1(&t, &crate::geometry::RegressionTarget::ZERO);
        (lv.value, lv.grad)
    };
    let report = finite_diff_check(f, &sl1_points, args.step, args.tol)
        .map_err(|e| validation(e.to_string()))?;
    println!("{}", gradcheck_line("smooth_l1", &report));
    if !report.pass() {
        failures.push("smooth_l1");
    }

    // end-to-end network check at its own (coarser) tolerance
    let report = end_to_end_gradcheck(1e-4, 1e-3, args.seed)?;
    println!("{}", gradcheck_line("end_to_end", &report));
    if !report.pass() {
        failures.push("end_to_end");
    }

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "gradient check failed: {}",
            failures.join(", ")
        )))
    }
}

/// Writes a recall-report CSV combining several models' reports into one
/// comparison table (same header, one block per model).
pub fn write_comparison_csv(
    path: &Path,
    reports: &[(crate::eval::RecallReport, Provenance)],
) -> Result<(), CliError> {
    let mut out = String::new();
    for (i, (report, prov)) in reports.iter().enumerate() {
        let csv = report.to_csv(prov);
        if i == 0 {
            out.push_str(&csv);
        } else {
            // skip the comment + header of subsequent blocks
            for line in csv.lines().skip(2) {
                out.push_str(line);
                out.push('\n');
            }
        }
    }
    fs::write(path, out).map_err(|e| validation(format!("{}: {e}", path.display())))
}
