use serde::Serialize;

use super::train::{encode_labels, predict, train, SvmParams};
use crate::error::{Error, Result};
use crate::features::{shrink_select, standardize, FeatureMatrix, Standardization, DEFAULT_ENERGY_FRACTION};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOptions {
    pub svm: SvmParams,
    pub energy_fraction: f64,
    /// Fit shrinkage and standardization once on every row instead of per fold.
    pub paper_parity: bool,
}

impl Default for CvOptions {
    fn default() -> Self {
        CvOptions {
            svm: SvmParams::default(),
            energy_fraction: DEFAULT_ENERGY_FRACTION,
            paper_parity: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub index: usize,
    #[serde(rename = "true")]
    pub truth: String,
    pub predicted: Option<String>,
    pub margin: Option<f64>,
    pub selected_dim: usize,
    pub epochs: usize,
    pub converged: bool,
    pub error: Option<String>,
}

impl FoldResult {
    pub fn correct(&self) -> bool {
        self.predicted.as_deref() == Some(self.truth.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub accuracy: f64,
    pub correct: usize,
    pub n: usize,
    pub failed_folds: usize,
    pub feature_dim: usize,
    pub classes: [String; 2],
    pub c: f64,
    pub energy_fraction: f64,
    pub paper_parity: bool,
    pub folds: Vec<FoldResult>,
}

/// Leave-one-out cross-validation over a raw (unstandardized) feature matrix.
/// Folds are independent; [`LooCv::fold`] may be called from several threads.
#[derive(Debug, Clone)]
pub struct LooCv<'a, T> {
    x: &'a FeatureMatrix<T>,
    y: Vec<i8>,
    classes: [String; 2],
    options: CvOptions,
    /// Shrinkage mask and statistics shared by every fold under paper parity.
    global: Option<(Vec<usize>, Standardization<T>)>,
}

impl<'a, T: Scalar> LooCv<'a, T> {
    pub fn new(x: &'a FeatureMatrix<T>, options: CvOptions) -> Result<Self> {
        if x.rows() < 3 {
            return Err(Error::Shape(format!(
                "leave-one-out needs at least 3 pieces (got {})",
                x.rows()
            )));
        }
        if x.standardization.is_some() {
            return Err(Error::AlreadyStandardized);
        }
        let (y, classes) = encode_labels(x.labels())?;
        let global = if options.paper_parity {
            let mask = shrink_select(x, options.energy_fraction)?;
            let stats = Standardization::fit(&x.select_columns(&mask)?)?;
            Some((mask, stats))
        } else {
            None
        };
        Ok(LooCv {
            x,
            y,
            classes,
            options,
            global,
        })
    }

    pub fn len(&self) -> usize {
        self.x.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn class(&self, label: i8) -> &str {
        &self.classes[usize::from(label > 0)]
    }

    fn run(&self, i: usize) -> Result<(f64, i8, usize, usize, bool)> {
        let train_rows: Vec<usize> = (0..self.len()).filter(|&k| k != i).collect();
        let raw = self.x.select_rows(&train_rows);
        let (mask, stats) = match &self.global {
            Some((m, s)) => (m.clone(), s.clone()),
            None => {
                let m = shrink_select(&raw, self.options.energy_fraction)?;
                let s = Standardization::fit(&raw.select_columns(&m)?)?;
                (m, s)
            }
        };
        let xs = standardize(&raw.select_columns(&mask)?, Some(&stats))?;
        let y: Vec<i8> = train_rows.iter().map(|&k| self.y[k]).collect();
        let (w, b, diag) = train(xs.values(), xs.cols(), &y, &self.options.svm)?;
        let held: Vec<T> = mask.iter().map(|&j| self.x.get(i, j)).collect();
        let p = predict(&w, b, &stats.apply_row(&held)?)?;
        Ok((p.margin.to_f64_lossy(), p.label, mask.len(), diag.epochs, diag.converged))
    }

    /// Trains without row `i` and predicts it. Errors are recorded in the result.
    pub fn fold(&self, i: usize) -> FoldResult {
        let truth = self.class(self.y[i]).to_string();
        match self.run(i) {
            Ok((margin, label, dim, epochs, converged)) => FoldResult {
                index: i,
                truth,
                predicted: Some(self.class(label).to_string()),
                margin: Some(margin),
                selected_dim: dim,
                epochs,
                converged,
                error: None,
            },
            Err(e) => FoldResult {
                index: i,
                truth,
                predicted: None,
                margin: None,
                selected_dim: 0,
                epochs: 0,
                converged: false,
                error: Some(e.to_string()),
            },
        }
    }

    /// Aggregates fold results (in any order) into a report.
    pub fn report(&self, mut folds: Vec<FoldResult>) -> CvReport {
        folds.sort_by_key(|f| f.index);
        let correct = folds.iter().filter(|f| f.correct()).count();
        let n = self.len();
        CvReport {
            accuracy: correct as f64 / n as f64,
            correct,
            n,
            failed_folds: folds.iter().filter(|f| f.error.is_some()).count(),
            feature_dim: self.x.cols(),
            classes: self.classes.clone(),
            c: self.options.svm.c,
            energy_fraction: self.options.energy_fraction,
            paper_parity: self.options.paper_parity,
            folds,
        }
    }
}

/// Sequential leave-one-out cross-validation.
pub fn loocv<T: Scalar>(x: &FeatureMatrix<T>, options: CvOptions) -> Result<CvReport> {
    let cv = LooCv::new(x, options)?;
    let folds = (0..cv.len()).map(|i| cv.fold(i)).collect();
    Ok(cv.report(folds))
}
