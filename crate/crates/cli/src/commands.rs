use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use eigenprog::features::{ablate, column_energies, load_features, save_features, shrink_select, standardize, AblationLevel, FeatureMatrix};
use eigenprog::pianoroll::{parse_midi, parse_note_csv, rasterize, read_roll, write_roll, DatasetManifest, ManifestEntry, PianoRoll};
use eigenprog::scattering::{read_path_csv, write_path_csv, FeaturePath, S1Path, TransformMetadata, Transformer};
use eigenprog::svm::{save_model, CvReport, LinearSvmModel, LooCv};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::workdir::{hash_file, load_manifest, piece_id, sha256_hex, write_provenance, WorkDir};

/// Outcome counts of a per-piece stage.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Summary {
    pub ok: usize,
    pub skipped: usize,
    pub failed: Vec<(String, String)>,
}

impl Summary {
    fn collect(outcomes: Vec<(String, Result<bool>)>) -> Self {
        let mut s = Summary::default();
        for (id, r) in outcomes {
            match r {
                Ok(true) => s.ok += 1,
                Ok(false) => s.skipped += 1,
                Err(e) => s.failed.push((id, format!("{e:#}"))),
            }
        }
        s
    }

    pub fn success(&self) -> bool {
        self.failed.is_empty()
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ok, {} failed", self.ok, self.failed.len())?;
        if self.skipped > 0 {
            write!(f, ", {} skipped", self.skipped)?;
        }
        Ok(())
    }
}

/// Resolved inputs shared by the pipeline commands.
pub struct Run {
    pub cfg: RunConfig,
    pub work: WorkDir,
    pub manifest: DatasetManifest,
    pool: rayon::ThreadPool,
}

impl Run {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let manifest = load_manifest(cfg.manifest_path()?)?;
        if manifest.is_empty() {
            bail!("manifest {} lists no pieces", cfg.manifest_path()?.display());
        }
        let work = WorkDir::create(cfg.workdir_path()?)?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
        Ok(Run { cfg, work, manifest, pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    fn pieces(&self) -> Vec<(String, &ManifestEntry)> {
        self.manifest.entries.iter().enumerate().map(|(i, e)| (piece_id(i, e), e)).collect()
    }

    /// Runs `job` on every piece in the worker pool; results keep manifest order.
    fn each<F>(&self, job: F) -> Summary
    where
        F: Fn(&str, &ManifestEntry) -> Result<bool> + Sync,
    {
        let pieces = self.pieces();
        let outcomes = self.pool.install(|| {
            pieces
                .par_iter()
                .map(|(id, e)| (id.clone(), job(id, e).with_context(|| format!("{}", e.path.display()))))
                .collect()
        });
        Summary::collect(outcomes)
    }

    fn provenance(&self, command: &str) -> Result<()> {
        write_provenance(&self.work, &self.cfg, command, Some(&self.manifest))
    }
}

fn read_notes(path: &Path) -> Result<Vec<eigenprog::pianoroll::NoteEvent>> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    Ok(if ext == "csv" {
        parse_note_csv(std::str::from_utf8(&bytes).context("note list is not UTF-8")?)?
    } else {
        parse_midi(&bytes)?
    })
}

pub fn rasterize_cmd(run: &Run) -> Result<Summary> {
    let cfg = &run.cfg;
    let summary = run.each(|id, entry| {
        let out = run.work.roll(id);
        let input = fs::read(&entry.path).with_context(|| format!("cannot read {}", entry.path.display()))?;
        let key = sha256_hex(format!("{}|{}|{}", sha256_hex(&input), cfg.roll_fingerprint(), eigenprog::VERSION).as_bytes());
        if run.work.up_to_date(&out, &key) {
            return Ok(false);
        }
        let notes = read_notes(&entry.path)?;
        let roll = rasterize::<f64>(&notes, cfg.frames, cfg.pitches, cfg.binary);
        let mut buf = Vec::new();
        write_roll(&roll, &mut buf)?;
        fs::write(&out, buf)?;
        run.work.write_stamp(&out, &key)?;
        Ok(true)
    });
    run.provenance("rasterize")?;
    Ok(summary)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PieceMetadata {
    pub id: String,
    pub label: String,
    pub source: String,
    pub config_fingerprint: String,
    pub beta2_count: usize,
    pub s1_dim: usize,
    pub s2_dim: usize,
    pub transform: serde_json::Value,
}

fn missing(path: &Path, what: &str, command: &str) -> anyhow::Error {
    anyhow::anyhow!("missing {what} {}; run `eigenprog {command}` first", path.display())
}

pub fn transform_cmd(run: &Run) -> Result<Summary> {
    let tcfg = run.cfg.transform();
    let tr = Transformer::<f64>::new(&tcfg)?;
    let meta: TransformMetadata = tr.metadata();
    let meta_json = serde_json::to_value(&meta)?;
    let summary = run.each(|id, entry| {
        let roll_path = run.work.roll(id);
        if !roll_path.is_file() {
            return Err(missing(&roll_path, "piano roll", "rasterize"));
        }
        let (s1_path, s2_path, meta_path) = (run.work.s1(id), run.work.s2(id), run.work.meta(id));
        let key = sha256_hex(format!("{}|{}|{}", hash_file(&roll_path)?, tcfg.fingerprint(), eigenprog::VERSION).as_bytes());
        if s1_path.is_file() && meta_path.is_file() && run.work.up_to_date(&s2_path, &key) {
            return Ok(false);
        }
        let roll: PianoRoll<f64> = read_roll(fs::File::open(&roll_path)?)?;
        let out = tr.transform(&roll)?;
        fs::write(&s1_path, write_path_csv(&out.s1.paths(), &out.s1.data))?;
        fs::write(&s2_path, write_path_csv(&out.s2.paths, &out.s2.values))?;
        let piece = PieceMetadata {
            id: id.to_string(),
            label: entry.label.clone(),
            source: entry.path.display().to_string(),
            config_fingerprint: meta.config_fingerprint.clone(),
            beta2_count: meta.beta2_count,
            s1_dim: meta.s1_dim,
            s2_dim: meta.s2_dim,
            transform: meta_json.clone(),
        };
        fs::write(&meta_path, serde_json::to_string_pretty(&piece)?)?;
        run.work.write_stamp(&s2_path, &key)?;
        Ok(true)
    });
    run.provenance("transform")?;
    Ok(summary)
}

fn read_piece(run: &Run, id: &str, level: AblationLevel) -> Result<(Vec<String>, Vec<f64>)> {
    let meta_path = run.work.meta(id);
    if !meta_path.is_file() {
        return Err(missing(&meta_path, "transform metadata", "transform"));
    }
    let meta: PieceMetadata = serde_json::from_str(&fs::read_to_string(&meta_path)?)?;
    let want = run.cfg.transform().fingerprint();
    if meta.config_fingerprint != want {
        bail!(
            "{id} was transformed with a different configuration ({}, expected {want}); re-run `eigenprog transform`",
            meta.config_fingerprint
        );
    }
    let s1_path = run.work.s1(id);
    if !s1_path.is_file() {
        return Err(missing(&s1_path, "first-order features", "transform"));
    }
    let (p1, v1) = read_path_csv::<S1Path>(&fs::read_to_string(&s1_path)?)?;
    let s2 = if level.needs_s2() {
        let s2_path = run.work.s2(id);
        if !s2_path.is_file() {
            return Err(missing(&s2_path, "second-order features", "transform"));
        }
        let (p2, v2) = read_path_csv::<FeaturePath>(&fs::read_to_string(&s2_path)?)?;
        p2.into_iter().zip(v2).collect()
    } else {
        Vec::new()
    };
    let s1: Vec<_> = p1.into_iter().zip(v1).collect();
    Ok(ablate(level, &s1, &s2))
}

/// Assembles the raw feature matrix for the configured ablation level.
pub fn features_cmd(run: &Run) -> Result<FeatureMatrix<f64>> {
    let level = run.cfg.ablation_level;
    run.manifest.binary_classes()?;
    let pieces = run.pieces();
    let rows: Vec<Result<(Vec<String>, Vec<f64>)>> = run.pool.install(|| {
        pieces
            .par_iter()
            .map(|(id, _)| read_piece(run, id, level))
            .collect()
    });
    let mut paths: Option<Vec<String>> = None;
    let mut values = Vec::with_capacity(rows.len());
    for ((id, _), row) in pieces.iter().zip(rows) {
        let (p, v) = row?;
        match &paths {
            None => paths = Some(p),
            Some(first) if *first != p => bail!("{id} has a different feature layout from the first piece; re-run `eigenprog transform`"),
            Some(_) => {}
        }
        values.push(v);
    }
    let labels = run.manifest.entries.iter().map(|e| e.label.clone()).collect();
    let x = FeatureMatrix::from_rows(values, paths.unwrap_or_default(), labels)?;
    save_features(&x, &run.work.features(level))?;
    run.provenance("features")?;
    Ok(x)
}

#[derive(Debug, Serialize)]
pub struct CrossvalOutput {
    pub ablation_level: AblationLevel,
    pub config_fingerprint: String,
    pub workers: usize,
    /// Columns kept by shrinkage fitted on every piece.
    pub selected_dim_all: usize,
    #[serde(flatten)]
    pub report: CvReport,
}

pub fn crossval_cmd(run: &Run) -> Result<CrossvalOutput> {
    let level = run.cfg.ablation_level;
    let path = run.work.features(level);
    if !path.is_file() {
        return Err(missing(&path, "feature matrix", "features"));
    }
    let x: FeatureMatrix<f64> = load_features(&path)?;
    let options = run.cfg.cv_options();
    let cv = LooCv::new(&x, options)?;
    let folds = run.pool.install(|| (0..cv.len()).into_par_iter().map(|i| cv.fold(i)).collect());
    let report = cv.report(folds);

    // selection, statistics and model fitted on every piece
    let mask = shrink_select(&x, options.energy_fraction)?;
    let energies = column_energies(&x);
    let mut listing = String::from("index,path,energy\n");
    for &j in &mask {
        listing.push_str(&format!("{j},{},{:?}\n", x.paths()[j], energies[j]));
    }
    fs::write(run.work.selected(level), listing)?;
    let xs = standardize(&x.select_columns(&mask)?, None)?;
    match LinearSvmModel::fit(&xs, &options.svm) {
        Ok(model) => save_model(&model, &run.work.model(level))?,
        Err(e) => log::warn!("final model not trained: {e}"),
    }

    let out = CrossvalOutput {
        ablation_level: level,
        config_fingerprint: run.cfg.transform().fingerprint(),
        workers: run.workers(),
        selected_dim_all: mask.len(),
        report,
    };
    fs::write(run.work.report(level), serde_json::to_string_pretty(&out)?)?;
    run.provenance("crossval")?;
    Ok(out)
}

/// Writes the synthetic corpus as MIDI files plus `manifest.csv` into `dir`.
pub fn write_synthetic_corpus(dir: &Path, per_class: usize, seed: u64) -> Result<std::path::PathBuf> {
    use eigenprog::corpus::{synthetic_corpus, SYNTH_TICKS_PER_QUARTER};
    use eigenprog::pianoroll::serialize_midi;

    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut manifest = DatasetManifest::default();
    for piece in synthetic_corpus(per_class, seed) {
        let file = format!("{}.mid", piece.name);
        fs::write(dir.join(&file), serialize_midi(&piece.notes, SYNTH_TICKS_PER_QUARTER))?;
        manifest.entries.push(ManifestEntry {
            path: file.into(),
            label: piece.label,
        });
    }
    let path = dir.join("manifest.csv");
    fs::write(&path, manifest.to_csv())?;
    Ok(path)
}
