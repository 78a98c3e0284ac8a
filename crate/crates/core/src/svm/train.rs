use serde::Serialize;

use crate::error::{Error, Result};
use crate::Scalar;

pub const DEFAULT_C: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    /// Stop once every projected gradient is below this in magnitude.
    pub tol: f64,
    /// Maximum number of passes over the training set.
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: DEFAULT_C,
            tol: 1e-4,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainDiagnostics {
    pub epochs: usize,
    pub converged: bool,
    /// Largest projected-gradient magnitude at the final iterate.
    pub max_violation: f64,
    /// Dual objective after each epoch.
    pub dual_objective: Vec<f64>,
    /// Dual variables at the final iterate, one per training row.
    #[serde(skip)]
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub c: f64,
    /// Class names for labels `-1` and `+1`.
    pub classes: [String; 2],
    /// Feature paths the weights refer to.
    pub paths: Vec<String>,
    pub diagnostics: TrainDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<T> {
    /// `-1` or `+1`.
    pub label: i8,
    pub margin: T,
}

/// Maps exactly two distinct class names to `-1` (lexicographically smaller)
/// and `+1`.
pub fn encode_labels(labels: &[String]) -> Result<(Vec<i8>, [String; 2])> {
    let mut classes: Vec<&String> = labels.iter().collect();
    classes.sort();
    classes.dedup();
    if classes.len() != 2 {
        return Err(Error::ClassCount { found: classes.len() });
    }
    let y = labels.iter().map(|l| if l == classes[0] { -1 } else { 1 }).collect();
    Ok((y, [classes[0].clone(), classes[1].clone()]))
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Dual objective `sum(alpha) - |w|^2 / 2` with the bias folded into `w`.
fn dual_objective<T: Scalar>(alpha: &[T], w: &[T], b: T) -> T {
    let half = T::lit(0.5);
    alpha.iter().fold(T::zero(), |a, &v| a + v) - half * (dot(w, w) + b * b)
}

/// Trains on `rows` (`n x d`, row-major) with labels `y` in `{-1, +1}`.
///
/// The bias is learned as the weight of a constant feature of value 1, so it is
/// regularized together with `w`. Coordinates are visited in index order.
pub fn train<T: Scalar>(rows: &[T], d: usize, y: &[i8], params: &SvmParams) -> Result<(Vec<T>, T, TrainDiagnostics)> {
    let n = y.len();
    if rows.len() != n * d {
        return Err(Error::Dimension {
            expected: n * d,
            found: rows.len(),
        });
    }
    if n < 2 {
        return Err(Error::Shape(format!("training needs at least 2 rows (got {n})")));
    }
    if !(y.contains(&-1) && y.contains(&1)) || y.iter().any(|&v| v != 1 && v != -1) {
        return Err(Error::SingleClass);
    }
    if let Some(k) = rows.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: k / d.max(1),
            col: k % d.max(1),
        });
    }
    if !(params.c.is_finite() && params.c > 0.0) {
        return Err(Error::Config(format!("C must be positive (got {})", params.c)));
    }
    let c = T::lit(params.c);
    let tol = T::lit(params.tol);
    let row = |i: usize| &rows[i * d..(i + 1) * d];
    let yf: Vec<T> = y.iter().map(|&v| if v > 0 { T::one() } else { -T::one() }).collect();
    let qii: Vec<T> = (0..n).map(|i| dot(row(i), row(i)) + T::one()).collect();

    let mut alpha = vec![T::zero(); n];
    let mut w = vec![T::zero(); d];
    let mut b = T::zero();
    let projected = |a: T, g: T| {
        if a <= T::zero() {
            g.min(T::zero())
        } else if a >= c {
            g.max(T::zero())
        } else {
            g
        }
    };
    let mut history = Vec::new();
    let mut epochs = 0;
    let mut violation = T::infinity();
    let mut converged = false;
    while epochs < params.max_iter {
        for i in 0..n {
            let g = yf[i] * (dot(&w, row(i)) + b) - T::one();
            if projected(alpha[i], g) == T::zero() {
                continue;
            }
            let new = (alpha[i] - g / qii[i]).max(T::zero()).min(c);
            let delta = (new - alpha[i]) * yf[i];
            alpha[i] = new;
            for (wk, &xk) in w.iter_mut().zip(row(i)) {
                *wk = *wk + delta * xk;
            }
            b = b + delta;
        }
        epochs += 1;
        let obj = dual_objective(&alpha, &w, b);
        if let Some(&prev) = history.last() {
            let prev: f64 = prev;
            let slack = 1e-9 * prev.abs().max(1.0);
            debug_assert!(obj.to_f64_lossy() >= prev - slack, "dual objective decreased");
        }
        history.push(obj.to_f64_lossy());
        violation = (0..n)
            .map(|i| projected(alpha[i], yf[i] * (dot(&w, row(i)) + b) - T::one()).abs())
            .fold(T::zero(), |m, v| m.max(v));
        if violation < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "SVM stopped after {epochs} epochs with projected-gradient violation {:e}",
            violation.to_f64_lossy()
        );
    }
    let diagnostics = TrainDiagnostics {
        epochs,
        converged,
        max_violation: violation.to_f64_lossy(),
        dual_objective: history,
        alphas: alpha.iter().map(|a| a.to_f64_lossy()).collect(),
    };
    Ok((w, b, diagnostics))
}

impl<T: Scalar> LinearSvmModel<T> {
    /// Trains on a feature matrix whose labels name exactly two classes.
    pub fn fit(x: &crate::features::FeatureMatrix<T>, params: &SvmParams) -> Result<Self> {
        let (y, classes) = encode_labels(x.labels())?;
        let (weights, bias, diagnostics) = train(x.values(), x.cols(), &y, params)?;
        Ok(LinearSvmModel {
            weights,
            bias,
            c: params.c,
            classes,
            paths: x.paths().to_vec(),
            diagnostics,
        })
    }

    pub fn predict(&self, x: &[T]) -> Result<Prediction<T>> {
        predict(&self.weights, self.bias, x)
    }

    pub fn class_name(&self, label: i8) -> &str {
        &self.classes[usize::from(label > 0)]
    }
}

/// `sign(w.x + b)`, with an exact zero resolving to `+1`.
pub fn predict<T: Scalar>(w: &[T], b: T, x: &[T]) -> Result<Prediction<T>> {
    if x.len() != w.len() {
        return Err(Error::Dimension {
            expected: w.len(),
            found: x.len(),
        });
    }
    let margin = dot(w, x) + b;
    let label = if margin >= T::zero() { 1 } else { -1 };
    Ok(Prediction { label, margin })
}
