use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use eigenprog::features::{AblationLevel, DEFAULT_ENERGY_FRACTION};
use eigenprog::filterbank::{Coupling, TransformConfig};
use eigenprog::svm::{CvOptions, SvmParams, DEFAULT_C};
use serde::{Deserialize, Serialize};

/// Every setting of a run. Read from a `key = value` (TOML) file; unknown keys
/// are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub frames: usize,
    pub pitches: usize,
    pub pitch_pad: usize,
    pub j1_scales: usize,
    pub j2_scales: usize,
    pub j2_coupling: Coupling,
    pub sigma: f64,
    pub xi: f64,
    pub gamma2_set: Vec<i8>,
    /// Rasterize note-on as 1 instead of velocity / 127.
    pub binary: bool,
    pub energy_fraction: f64,
    pub svm_c: f64,
    pub svm_tol: f64,
    pub svm_max_iter: usize,
    pub ablation_level: AblationLevel,
    pub paper_parity: bool,
    pub manifest: Option<PathBuf>,
    pub workdir: Option<PathBuf>,
    /// 0 uses every available core.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TransformConfig::default();
        let svm = SvmParams::default();
        RunConfig {
            frames: t.frames,
            pitches: t.pitches,
            pitch_pad: t.pitch_pad,
            j1_scales: t.j1_scales,
            j2_scales: t.j2_scales,
            j2_coupling: t.j2_coupling,
            sigma: t.sigma,
            xi: t.xi,
            gamma2_set: t.gamma2_set,
            binary: false,
            energy_fraction: DEFAULT_ENERGY_FRACTION,
            svm_c: DEFAULT_C,
            svm_tol: svm.tol,
            svm_max_iter: svm.max_iter,
            ablation_level: AblationLevel::Full,
            paper_parity: false,
            manifest: None,
            workdir: None,
            workers: 0,
        }
    }
}

impl RunConfig {
    /// Parses and validates config text. Relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).context("invalid config file")?;
        for p in [&mut cfg.manifest, &mut cfg.workdir].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).with_context(|| format!("in config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        self.transform().validate()?;
        if !(self.energy_fraction.is_finite() && self.energy_fraction > 0.0) {
            bail!("energy_fraction must be positive (got {})", self.energy_fraction);
        }
        if !(self.svm_c.is_finite() && self.svm_c > 0.0) {
            bail!("svm_c must be positive (got {})", self.svm_c);
        }
        if !(self.svm_tol.is_finite() && self.svm_tol > 0.0) || self.svm_max_iter == 0 {
            bail!("svm_tol and svm_max_iter must be positive");
        }
        Ok(())
    }

    pub fn transform(&self) -> TransformConfig {
        TransformConfig {
            frames: self.frames,
            pitches: self.pitches,
            pitch_pad: self.pitch_pad,
            j1_scales: self.j1_scales,
            j2_scales: self.j2_scales,
            j2_coupling: self.j2_coupling,
            sigma: self.sigma,
            xi: self.xi,
            gamma2_set: self.gamma2_set.clone(),
        }
    }

    pub fn cv_options(&self) -> CvOptions {
        CvOptions {
            svm: SvmParams {
                c: self.svm_c,
                tol: self.svm_tol,
                max_iter: self.svm_max_iter,
            },
            energy_fraction: self.energy_fraction,
            paper_parity: self.paper_parity,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Text identifying every setting that affects the rasterized rolls.
    pub fn roll_fingerprint(&self) -> String {
        format!("frames={};pitches={};binary={}", self.frames, self.pitches, self.binary)
    }

    pub fn manifest_path(&self) -> Result<&Path> {
        self.manifest
            .as_deref()
            .context("no manifest given (use --manifest or set `manifest` in the config)")
    }

    pub fn workdir_path(&self) -> Result<&Path> {
        self.workdir
            .as_deref()
            .context("no work directory given (use --workdir or set `workdir` in the config)")
    }
}
