use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hmh_core::imgcore::io;
use hmh_pipeline::composite::{composite_new_background, list_backgrounds};
use hmh_pipeline::eval::{eval_matting, eval_mos, mos_table};
use hmh_pipeline::losses::{compute_losses, LossInputs};
use hmh_pipeline::manifest::{read_jsonl, resolve, Split, TripletRecord, TRIPLET_MANIFEST};
use hmh_pipeline::prepare::prepare;
use hmh_pipeline::report::BatchOutcome;
use hmh_pipeline::split::split_manifest;
use hmh_pipeline::triplets::{build_triplets, verify, AdjustOverride, AlphaSource, TripletOptions};
use hmh_pipeline::{Config, Overrides};
use rayon::prelude::*;

/// Build and evaluate a joint matting/harmonization dataset.
#[derive(Parser)]
#[command(name = "hmh", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// `key = value` config file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Square working resolution
    #[arg(long, global = true)]
    size: Option<usize>,
    #[arg(long, global = true)]
    band_radius: Option<usize>,
    #[arg(long, global = true)]
    mask_dilation: Option<usize>,
    #[arg(long, global = true)]
    train_fraction: Option<f64>,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Resize pairs and derive foreground F and inpainted background B
    Prepare {
        /// Directory with `images/` and `alphas/` paired by file stem
        corpus: PathBuf,
        /// Dataset output directory
        out: PathBuf,
    },
    /// Synthesize disharmonious composites and trimaps for a prepared dataset
    Triplets {
        dataset: PathBuf,
        /// `groundtruth` or `predicted:<dir>`
        #[arg(long, default_value = "groundtruth")]
        alpha_source: String,
        /// Force one adjustment: `illumination:<f>`, `color_enhance:<f>`, `color_transfer:<id>`
        #[arg(long)]
        adjust_override: Option<String>,
    },
    /// Relabel train/test splits of a triplet manifest
    Split {
        /// Dataset directory or triplet manifest path
        target: PathBuf,
    },
    /// Re-run every triplet's stored adjustment and compare I_d byte for byte
    Verify { dataset: PathBuf },
    /// Composite foregrounds onto randomly chosen new backgrounds
    Composite {
        /// Directory of candidate backgrounds
        #[arg(long)]
        backgrounds: PathBuf,
        /// Single image mode: portrait image
        #[arg(long, requires_all = ["alpha", "out"])]
        image: Option<PathBuf>,
        /// Single image mode: alpha matte (ground truth or predicted)
        #[arg(long)]
        alpha: Option<PathBuf>,
        /// Single image mode: output PNG
        #[arg(long)]
        out: Option<PathBuf>,
        /// Batch mode: dataset directory; composites every test-split record
        #[arg(long, conflicts_with = "image", requires = "out_dir")]
        dataset: Option<PathBuf>,
        /// Batch mode: alpha directory overriding the ground-truth mattes
        #[arg(long)]
        alpha_dir: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// MSE / SAD / Grad / Conn over trimap unknown regions
    EvalMatting {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        trimap: PathBuf,
        /// Also write per-image JSON lines here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Mean opinion score per method from an `image_id,rater_id,method,score` table
    EvalMos {
        scores: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate every loss term as a cross-check oracle
    Losses {
        /// `d_real,d_harmonized,d_composite,d_disharmonious` table
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long)]
        pred_alpha: Option<PathBuf>,
        #[arg(long)]
        gt_alpha: Option<PathBuf>,
        #[arg(long)]
        pred_image: Option<PathBuf>,
        #[arg(long)]
        gt_image: Option<PathBuf>,
        #[arg(long, default_value_t = 0.02)]
        lambda1: f64,
        #[arg(long, default_value_t = 0.01)]
        lambda2: f64,
    },
}

fn load_config(g: &GlobalArgs) -> Result<Config> {
    let base = match &g.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    Ok(base.with_overrides(&Overrides {
        seed: g.seed,
        size: g.size,
        band_radius: g.band_radius,
        mask_dilation: g.mask_dilation,
        train_fraction: g.train_fraction,
        jobs: g.jobs,
    })?)
}

/// Prints the summary; true when nothing failed.
fn summarize<T>(step: &str, outcome: &BatchOutcome<T>) -> bool {
    eprintln!(
        "{step}: {} records written, {} failed, {} warnings",
        outcome.records.len(),
        outcome.failures.len(),
        outcome.warnings.len()
    );
    for f in &outcome.failures {
        eprintln!("  FAILED {}: {}", f.image_id, f.reason);
    }
    outcome.is_clean()
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = load_config(&cli.global)?;
    match cli.command {
        Command::Prepare { corpus, out } => {
            let outcome = prepare(&corpus, &out, &cfg)?;
            Ok(summarize("prepare", &outcome))
        }
        Command::Triplets {
            dataset,
            alpha_source,
            adjust_override,
        } => {
            let opts = TripletOptions {
                alpha_source: alpha_source.parse::<AlphaSource>()?,
                adjust_override: adjust_override.map(|s| s.parse::<AdjustOverride>()).transpose()?,
            };
            let outcome = build_triplets(&dataset, &cfg, &opts)?;
            Ok(summarize("triplets", &outcome))
        }
        Command::Split { target } => {
            let manifest = if target.is_dir() {
                target.join(TRIPLET_MANIFEST)
            } else {
                target
            };
            let (train, test) = split_manifest(&manifest, cfg.train_fraction, cfg.seed)?;
            eprintln!("split: {train} train / {test} test");
            Ok(true)
        }
        Command::Verify { dataset } => {
            let records: Vec<TripletRecord> = read_jsonl(&dataset.join(TRIPLET_MANIFEST))?;
            let results: Vec<(String, hmh_pipeline::Result<bool>)> = cfg.install(|| {
                records
                    .par_iter()
                    .map(|r| (r.image_id.clone(), verify(&dataset, r)))
                    .collect()
            })?;
            let mut ok = true;
            for (id, r) in &results {
                match r {
                    Ok(true) => {}
                    Ok(false) => {
                        ok = false;
                        eprintln!("  MISMATCH {id}");
                    }
                    Err(e) => {
                        ok = false;
                        eprintln!("  FAILED {id}: {e}");
                    }
                }
            }
            eprintln!("verify: {} records, {}", results.len(), if ok { "all identical" } else { "differences found" });
            Ok(ok)
        }
        Command::Composite {
            backgrounds,
            image,
            alpha,
            out,
            dataset,
            alpha_dir,
            out_dir,
        } => {
            let candidates = list_backgrounds(&backgrounds)?;
            if let (Some(image), Some(alpha), Some(out)) = (&image, &alpha, &out) {
                let img = io::load_rgb(image)?;
                let a = io::load_alpha(alpha)?;
                let key = image.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                let (bg, result) = composite_new_background(&img, &a, &candidates, cfg.seed, key)?;
                io::save_rgb(&result, out)?;
                eprintln!("composite: {} over {}", image.display(), bg.display());
                return Ok(true);
            }
            let (Some(dataset), Some(out_dir)) = (dataset, out_dir) else {
                bail!("composite needs either --image/--alpha/--out or --dataset/--out-dir");
            };
            composite_dataset(&dataset, alpha_dir.as_deref(), &out_dir, &candidates, &cfg)
        }
        Command::EvalMatting { pred, gt, trimap, report } => {
            let r = eval_matting(&pred, &gt, &trimap, &cfg)?;
            print!("{}", r.to_table());
            if let Some(path) = report {
                std::fs::write(&path, r.to_jsonl()).with_context(|| path.display().to_string())?;
            }
            Ok(r.failures.is_empty())
        }
        Command::EvalMos { scores, report } => {
            let s = eval_mos(&scores)?;
            print!("{}", mos_table(&s));
            if let Some(path) = report {
                let mut text = String::new();
                for (method, summary) in &s {
                    text.push_str(&serde_json::to_string(&serde_json::json!({ "method": method, "summary": summary }))?);
                    text.push('\n');
                }
                std::fs::write(&path, text).with_context(|| path.display().to_string())?;
            }
            Ok(true)
        }
        Command::Losses {
            scores,
            pred_alpha,
            gt_alpha,
            pred_image,
            gt_image,
            lambda1,
            lambda2,
        } => {
            let bundle = compute_losses(&LossInputs {
                scores,
                pred_alpha,
                gt_alpha,
                pred_image,
                gt_image,
                lambda1,
                lambda2,
            })?;
            println!("{}", serde_json::to_string_pretty(&bundle)?);
            Ok(true)
        }
    }
}

fn composite_dataset(
    dataset: &Path,
    alpha_dir: Option<&Path>,
    out_dir: &Path,
    candidates: &[PathBuf],
    cfg: &Config,
) -> Result<bool> {
    let records: Vec<TripletRecord> = read_jsonl(&dataset.join(TRIPLET_MANIFEST))?;
    std::fs::create_dir_all(out_dir).with_context(|| out_dir.display().to_string())?;
    let results: Vec<(String, Result<()>)> = cfg.install(|| {
        records
            .par_iter()
            .filter(|r| r.split == Split::Test)
            .map(|r| {
                let run = || -> Result<()> {
                    let img = io::load_rgb(resolve(dataset, &r.image))?;
                    let alpha_path = match alpha_dir {
                        Some(dir) => dir.join(format!("{}.png", r.image_id)),
                        None => resolve(dataset, &r.alpha),
                    };
                    let a = io::load_alpha(&alpha_path)?;
                    let (_, out) = composite_new_background(&img, &a, candidates, cfg.seed, &r.image_id)?;
                    io::save_rgb(&out, out_dir.join(format!("{}.png", r.image_id)))?;
                    Ok(())
                };
                (r.image_id.clone(), run())
            })
            .collect()
    })?;
    let failed: Vec<_> = results.iter().filter(|(_, r)| r.is_err()).collect();
    for (id, r) in &failed {
        if let Err(e) = r {
            eprintln!("  FAILED {id}: {e:#}");
        }
    }
    eprintln!("composite: {} written, {} failed", results.len() - failed.len(), failed.len());
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
