//! Command-line front end: dataset generation and the experiment recipes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use urbansim::eval::{
    accumulate_confusion, iou, iou_vs_trimap_curve, write_curve_csv, write_iou_csv, ConfusionCounts, LabelMap, Series,
};
use urbansim::experiments::{
    generate_dataset, parse_fidelity_list, run_adaptation_experiment, run_fidelity_sweep, run_trimap_experiment,
    AdaptationBenchmark, DatasetManifest, ExperimentReport, Fidelity, GenerationConfig, ProbeModel, SweepBenchmark,
    MANIFEST_FILE,
};
use urbansim::probe::{predict, train, LabeledImage};

#[derive(Parser)]
#[command(name = "urbansim", version, about = "Synthetic street scenes, multi-fidelity rendering and segmentation bias experiments")]
struct Cli {
    /// Worker threads for rendering and evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render every scene at every fidelity and write a manifest.
    Generate(GenerateArgs),
    /// Train one probe per fidelity and test them on a shared set.
    Sweep(SweepArgs),
    /// Mean IoU inside bands around label edges for one or more probes.
    Trimap(TrimapArgs),
    /// Compare target-only, simulated and fine-tuned probes on the target.
    Adapt(AdaptArgs),
    /// Score a probe on a dataset: per-class IoU and the trimap curve.
    Eval(EvalArgs),
}

#[derive(Args)]
struct Common {
    /// Generation config (TOML); defaults to the built-in source config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base scene seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    /// Start from the built-in shifted target config instead of the source one.
    #[arg(long)]
    target: bool,
    /// Number of scenes, overriding the config.
    #[arg(long)]
    scenes: Option<u32>,
    /// Comma-separated fidelities such as `lambertian,mcpt-40`.
    #[arg(long)]
    fidelity: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Training dataset directory; without it the built-in benchmark renders
    /// its own scenes.
    #[arg(long, requires = "test")]
    train: Option<PathBuf>,
    /// Test dataset directory.
    #[arg(long, requires = "train")]
    test: Option<PathBuf>,
    /// Training fidelities (default: all fidelities of the training data).
    #[arg(long)]
    fidelity: Option<String>,
    /// Fidelity of the test images.
    #[arg(long, default_value = "mcpt-10")]
    test_fidelity: Fidelity,
    /// Training scenes of the built-in benchmark.
    #[arg(long, default_value_t = 3)]
    scenes: u32,
    /// Test scenes of the built-in benchmark.
    #[arg(long, default_value_t = SweepBenchmark::default().test_scenes)]
    test_scenes: u32,
}

#[derive(Args)]
struct TrimapArgs {
    #[command(flatten)]
    common: Common,
    /// Probe models as `name=path`; requires `--test`.
    #[arg(long = "model", requires = "test")]
    models: Vec<String>,
    /// Test dataset directory; without it the built-in shifted-domain
    /// benchmark is used.
    #[arg(long)]
    test: Option<PathBuf>,
    /// Fidelity of the test images.
    #[arg(long, default_value = "mcpt-40")]
    fidelity: Fidelity,
    /// Comma-separated, strictly increasing band widths in pixels.
    #[arg(long, default_value = "1,2,5,10,20", value_delimiter = ',')]
    widths: Vec<u32>,
}

#[derive(Args)]
struct AdaptArgs {
    #[command(flatten)]
    common: Common,
    /// Simulated training dataset; without `--sim`, `--target` and `--test`
    /// the built-in shifted-domain benchmark is used.
    #[arg(long, requires_all = ["target", "test"])]
    sim: Option<PathBuf>,
    /// Target-domain training dataset.
    #[arg(long, requires = "sim")]
    target: Option<PathBuf>,
    /// Target-domain test dataset.
    #[arg(long, requires = "sim")]
    test: Option<PathBuf>,
    /// Config of the built-in target domain (default: the shifted target).
    #[arg(long)]
    target_config: Option<PathBuf>,
    /// Fidelity of every image used.
    #[arg(long, default_value = "mcpt-40")]
    fidelity: Fidelity,
    /// Share of the target training images used for fine-tuning.
    #[arg(long, default_value_t = 0.25)]
    fraction: f64,
    /// Comma-separated blend weights in [0, 1].
    #[arg(long, default_value = "0,0.1,0.25,0.5,0.75,1", value_delimiter = ',')]
    lambdas: Vec<f64>,
    /// Comma-separated band widths of the accompanying trimap report.
    #[arg(long, default_value = "1,2,5,10,20", value_delimiter = ',')]
    widths: Vec<u32>,
}

#[derive(Args)]
struct EvalArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Probe model file.
    #[arg(long)]
    model: PathBuf,
    /// Dataset directory to score.
    #[arg(long)]
    data: PathBuf,
    /// Fidelity of the images to score.
    #[arg(long, default_value = "mcpt-40")]
    fidelity: Fidelity,
    /// Comma-separated band widths of the trimap curve.
    #[arg(long, default_value = "1,2,5,10,20", value_delimiter = ',')]
    widths: Vec<u32>,
}

fn load_config(path: Option<&Path>, fallback: GenerationConfig, seed: Option<u64>) -> Result<GenerationConfig> {
    let mut cfg = match path {
        Some(p) => GenerationConfig::load(p).with_context(|| format!("reading config {}", p.display()))?,
        None => fallback,
    };
    if let Some(s) = seed {
        cfg.dataset.base_seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Loads a verified dataset directory.
fn open_dataset(dir: &Path) -> Result<DatasetManifest> {
    let manifest = DatasetManifest::load(&dir.join(MANIFEST_FILE))
        .with_context(|| format!("reading the manifest of {}", dir.display()))?;
    manifest
        .verify(dir)
        .with_context(|| format!("verifying {}", dir.display()))?;
    Ok(manifest)
}

fn images(dir: &Path, fidelity: Fidelity) -> Result<Vec<LabeledImage>> {
    Ok(open_dataset(dir)?.load_images(dir, &fidelity.to_string())?)
}

fn write_report(report: &ExperimentReport, out: &Path, stem: &str) -> Result<()> {
    report.write(out, stem)?;
    println!("{}", report.to_csv().trim_end());
    info!("wrote {stem}.csv, {stem}.svg and {stem}.toml to {}", out.display());
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let base = if args.target {
        GenerationConfig::shifted_target()
    } else {
        GenerationConfig::default()
    };
    let mut cfg = load_config(args.common.config.as_deref(), base, args.common.seed)?;
    if let Some(n) = args.scenes {
        cfg.dataset.n_scenes = n;
    }
    if let Some(list) = &args.fidelity {
        cfg.dataset.fidelities = parse_fidelity_list(list)?.iter().map(Fidelity::to_string).collect();
    }
    let manifest = generate_dataset(&cfg, &args.common.out)?;
    let failed = manifest.frames.iter().filter(|f| !f.complete).count();
    println!(
        "dataset {}: {} frames in {}",
        manifest.dataset_id,
        manifest.frames.len(),
        args.common.out.display()
    );
    if failed > 0 {
        bail!("{failed} of {} frames could not be written", manifest.frames.len());
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let out = &args.common.out;
    let outcome = match (&args.train, &args.test) {
        (Some(train_dir), Some(test_dir)) => {
            let manifest = open_dataset(train_dir)?;
            let fidelities = match &args.fidelity {
                Some(list) => parse_fidelity_list(list)?,
                None => manifest.config.fidelities()?,
            };
            let train_sets = fidelities
                .iter()
                .map(|f| Ok((f.to_string(), manifest.load_images(train_dir, &f.to_string())?)))
                .collect::<Result<Vec<_>>>()?;
            let test = images(test_dir, args.test_fidelity)?;
            let mut outcome = run_fidelity_sweep(&train_sets, &test)?;
            outcome.report.seeds = manifest.frames.iter().map(|f| f.scene_seed).collect();
            outcome.report.seeds.dedup();
            outcome
        }
        _ => {
            let mut bench = SweepBenchmark {
                config: load_config(args.common.config.as_deref(), GenerationConfig::default(), args.common.seed)?,
                train_scenes: args.scenes,
                test_scenes: args.test_scenes,
                test_fidelity: args.test_fidelity,
                ..SweepBenchmark::default()
            };
            if let Some(list) = &args.fidelity {
                bench.fidelities = parse_fidelity_list(list)?;
            }
            bench.run()?
        }
    };
    write_report(&outcome.report, out, "sweep")?;
    let models = out.join("models");
    std::fs::create_dir_all(&models)?;
    for (name, model) in &outcome.models {
        model.save(&models.join(format!("{name}.txt")))?;
    }
    Ok(())
}

fn trimap(args: TrimapArgs) -> Result<()> {
    let Some(test_dir) = &args.test else {
        let bench = AdaptationBenchmark {
            source: load_config(args.common.config.as_deref(), GenerationConfig::default(), args.common.seed)?,
            fidelity: args.fidelity,
            trimap_widths: args.widths,
            ..AdaptationBenchmark::default()
        };
        return write_report(&bench.run()?.trimap, &args.common.out, "trimap");
    };
    if args.models.is_empty() {
        bail!("--test needs at least one --model name=path");
    }
    let mut models: Vec<(String, ProbeModel)> = Vec::new();
    for spec in &args.models {
        let (name, path) = spec
            .split_once('=')
            .with_context(|| format!("model `{spec}` is not of the form name=path"))?;
        let model = ProbeModel::load(Path::new(path)).with_context(|| format!("loading model {path}"))?;
        models.push((name.to_string(), model));
    }
    let named: Vec<(String, &ProbeModel)> = models.iter().map(|(n, m)| (n.clone(), m)).collect();
    let test = images(test_dir, args.fidelity)?;
    write_report(&run_trimap_experiment(&named, &test, &args.widths)?, &args.common.out, "trimap")
}

fn adapt(args: AdaptArgs) -> Result<()> {
    let out = &args.common.out;
    match (&args.sim, &args.target, &args.test) {
        (Some(sim_dir), Some(target_dir), Some(test_dir)) => {
            let sim = images(sim_dir, args.fidelity)?;
            let target = images(target_dir, args.fidelity)?;
            let test = images(test_dir, args.fidelity)?;
            let report = run_adaptation_experiment(&sim, &target, args.fraction, &args.lambdas, &test)?;
            write_report(&report, out, "adaptation")?;
            let sim_model = train::<f64>(&sim)?;
            let target_model = train::<f64>(&target)?;
            let named = [("sim".to_string(), &sim_model), ("target-only".to_string(), &target_model)];
            write_report(&run_trimap_experiment(&named, &test, &args.widths)?, out, "trimap")
        }
        _ => {
            let target = load_config(args.target_config.as_deref(), GenerationConfig::shifted_target(), None)?;
            let bench = AdaptationBenchmark {
                source: load_config(args.common.config.as_deref(), GenerationConfig::default(), args.common.seed)?,
                target,
                fidelity: args.fidelity,
                target_fraction: args.fraction,
                lambdas: args.lambdas,
                trimap_widths: args.widths,
                ..AdaptationBenchmark::default()
            };
            let outcome = bench.run()?;
            write_report(&outcome.adaptation, out, "adaptation")?;
            write_report(&outcome.trimap, out, "trimap")
        }
    }
}

fn eval(args: EvalArgs) -> Result<()> {
    let model = ProbeModel::load(&args.model).with_context(|| format!("loading model {}", args.model.display()))?;
    let set = images(&args.data, args.fidelity)?;
    let preds: Vec<LabelMap> = set.iter().map(|s| predict(&model, &s.image)).collect();
    let gts: Vec<LabelMap> = set.iter().map(|s| s.labels.clone()).collect();
    let mut counts = ConfusionCounts::default();
    for (p, g) in preds.iter().zip(&gts) {
        counts += accumulate_confusion(p, g, None)?;
    }
    let curve = iou_vs_trimap_curve::<f64>(&preds, &gts, &args.widths)?;
    std::fs::create_dir_all(&args.out)?;
    write_iou_csv(&counts, &args.out.join("iou.csv"))?;
    write_curve_csv(&curve, &args.out.join("trimap.csv"))?;
    let series = Series {
        name: "mean IoU".into(),
        points: curve.iter().filter_map(|(w, v)| v.map(|v| (f64::from(*w), v))).collect(),
    };
    std::fs::write(
        args.out.join("trimap.svg"),
        urbansim::eval::svg_line_plot("IoU vs trimap width", "width (px)", "mean IoU", &[series]),
    )?;
    let mean = iou::<f64>(&counts).mean;
    println!("mean_iou,{}", mean.map_or_else(String::new, |v| v.to_string()));
    if mean.is_none() {
        bail!("no labeled pixel to score");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Sweep(a) => sweep(a),
        Command::Trimap(a) => trimap(a),
        Command::Adapt(a) => adapt(a),
        Command::Eval(a) => eval(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
