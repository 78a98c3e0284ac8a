use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use eigenprog::corpus::DEFAULT_SEED;
use eigenprog::features::AblationLevel;
use eigenprog_cli::commands::{self, Run, Summary};
use eigenprog_cli::config::RunConfig;
use eigenprog_cli::selftest::{self, SelftestOptions};

#[derive(Parser)]
#[command(name = "eigenprog", version, about = "Eigenprogression scattering features and composer classification")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dataset manifest: CSV of `path,label`.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[arg(long, global = true)]
    workdir: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// a1, a1b1, a1b1a2, a1b1a2b2 or full.
    #[arg(long, global = true)]
    ablation: Option<AblationLevel>,
    /// Fit shrinkage and standardization on all pieces instead of per fold.
    #[arg(long, global = true)]
    paper_parity: bool,
    #[arg(long, global = true)]
    energy_fraction: Option<f64>,
    #[arg(long, global = true)]
    svm_c: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert every manifest entry (MIDI or note CSV) into a piano-roll file.
    Rasterize,
    /// Compute first- and second-order scattering coefficients per piece.
    Transform,
    /// Assemble the feature matrix for the selected ablation level.
    Features,
    /// Leave-one-out cross-validation of the linear SVM.
    Crossval,
    /// rasterize, transform, features and crossval in sequence.
    Pipeline,
    /// Run the embedded property checks.
    Selftest {
        /// Only the sub-second subset.
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true)]
        corrupt_tonnetz: bool,
    },
    /// Write the bundled synthetic two-class corpus as MIDI files and a manifest.
    SynthCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        per_class: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(m) = &self.manifest {
            cfg.manifest = Some(m.clone());
        }
        if let Some(w) = &self.workdir {
            cfg.workdir = Some(w.clone());
        }
        if let Some(n) = self.workers {
            cfg.workers = n;
        }
        if let Some(level) = self.ablation {
            cfg.ablation_level = level;
        }
        if self.paper_parity {
            cfg.paper_parity = true;
        }
        if let Some(f) = self.energy_fraction {
            cfg.energy_fraction = f;
        }
        if let Some(c) = self.svm_c {
            cfg.svm_c = c;
        }
        cfg.validate().context("invalid configuration")?;
        Ok(cfg)
    }
}

fn report_stage(stage: &str, summary: &Summary) -> bool {
    for (id, err) in &summary.failed {
        eprintln!("{stage}: {id} failed: {err}");
    }
    println!("{stage}: {summary}");
    summary.success()
}

fn crossval(run: &Run) -> Result<()> {
    let out = commands::crossval_cmd(run)?;
    let r = &out.report;
    println!(
        "crossval [{}]: accuracy {:.4} ({}/{}), d = {}, {} failed folds; report {}",
        out.ablation_level,
        r.accuracy,
        r.correct,
        r.n,
        r.feature_dim,
        r.failed_folds,
        run.work.report(out.ablation_level).display()
    );
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Selftest { quick, corrupt_tonnetz } => {
            let report = selftest::run(SelftestOptions {
                quick: *quick,
                corrupt_tonnetz: *corrupt_tonnetz,
            });
            println!("{report}");
            Ok(report.passed())
        }
        Command::SynthCorpus { out, per_class, seed } => {
            let path = commands::write_synthetic_corpus(out, *per_class, *seed)?;
            println!("wrote {} pieces; manifest {}", 2 * per_class, path.display());
            Ok(true)
        }
        Command::Rasterize => {
            let run = Run::new(cli.run_config()?)?;
            Ok(report_stage("rasterize", &commands::rasterize_cmd(&run)?))
        }
        Command::Transform => {
            let run = Run::new(cli.run_config()?)?;
            Ok(report_stage("transform", &commands::transform_cmd(&run)?))
        }
        Command::Features => {
            let run = Run::new(cli.run_config()?)?;
            let x = commands::features_cmd(&run)?;
            println!("features [{}]: {} pieces x {} columns", run.cfg.ablation_level, x.rows(), x.cols());
            Ok(true)
        }
        Command::Crossval => {
            let run = Run::new(cli.run_config()?)?;
            crossval(&run)?;
            Ok(true)
        }
        Command::Pipeline => {
            let run = Run::new(cli.run_config()?)?;
            if !report_stage("rasterize", &commands::rasterize_cmd(&run)?)
                || !report_stage("transform", &commands::transform_cmd(&run)?)
            {
                return Ok(false);
            }
            let x = commands::features_cmd(&run)?;
            println!("features [{}]: {} pieces x {} columns", run.cfg.ablation_level, x.rows(), x.cols());
            crossval(&run)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
