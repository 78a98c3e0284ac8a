//! Embedded property checks run by `eigenprog selftest`.

use std::fmt;
use std::time::Instant;

use eigenprog::features::{shrink_select, FeatureMatrix};
use eigenprog::filterbank::TransformConfig;
use eigenprog::pianoroll::PianoRoll;
use eigenprog::scattering::{cyclic_convolve, direct_cyclic_convolve, symmetry, CyclicArray, Symmetry, Transformer};
use eigenprog::spectral::{
    eigenprogression_basis, symmetric_eigendecomposition, tonnetz_laplacian, triad_operator, Quality, TonnetzLaplacian,
};
use eigenprog::svm::{train, SvmParams};
use eigenprog::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default)]
pub struct SelftestOptions {
    /// Only the sub-second subset.
    pub quick: bool,
    /// Perturb one Tonnetz edge weight before the eigen-residual check.
    pub corrupt_tonnetz: bool,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<30} {:<6} {:>8}  detail", "check", "result", "seconds")?;
        for c in &self.checks {
            let result = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "{:<30} {:<6} {:>8.3}  {}", c.name, result, c.seconds, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

type Outcome = Result<String, String>;

fn within(value: f64, tol: f64, what: &str) -> Outcome {
    if value < tol {
        Ok(format!("{what} {value:.2e} < {tol:.0e}"))
    } else {
        Err(format!("{what} {value:.2e} >= {tol:.0e}"))
    }
}

fn random_array(rng: &mut ChaCha8Rng, shape: &[usize]) -> CyclicArray<f64> {
    let n = shape.iter().product();
    let data = (0..n).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    CyclicArray::from_vec(shape, data).expect("shape matches")
}

fn convolution_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let x = random_array(&mut rng, &[16, 12]);
        let h = random_array(&mut rng, &[16, 12]);
        let fast = cyclic_convolve(&x, &h).map_err(|e| e.to_string())?;
        let slow = direct_cyclic_convolve(&x, &h).map_err(|e| e.to_string())?;
        for (a, b) in fast.data.iter().zip(&slow.data) {
            worst = worst.max((a - b).norm());
        }
    }
    within(worst, TOL, "max abs error")
}

fn triad_eigenvalues() -> Outcome {
    let mut worst = 0.0f64;
    for q in [Quality::Major, Quality::Minor] {
        let eig = symmetric_eigendecomposition(&triad_operator::<f64>(q).matrix, 1e-12).map_err(|e| e.to_string())?;
        for (v, want) in eig.values.iter().zip([1.0, 1.0, 7.0]) {
            worst = worst.max((v - want).abs());
        }
    }
    within(worst, 1e-10, "deviation from {1, 1, 7}")
}

fn tonnetz_spectrum() -> Outcome {
    let l = tonnetz_laplacian::<f64>();
    let eig = symmetric_eigendecomposition(&l.matrix, 1e-12).map_err(|e| e.to_string())?;
    let v = &eig.values;
    let n = v.len();
    let mirror = (0..n).map(|i| (v[i] + v[n - 1 - i] - 6.0).abs()).fold(0.0, f64::max);
    let trace = l.matrix.trace();
    let lo = v[0].abs();
    if (trace - 72.0).abs() > 1e-12 || v[n - 1] > 6.0 + 1e-10 {
        return Err(format!("trace {trace}, largest eigenvalue {}", v[n - 1]));
    }
    within(lo.max(mirror), 1e-10, "|lambda_min| and asymmetry about 3")
}

fn eigen_residuals(corrupt: bool) -> Outcome {
    let mut l: TonnetzLaplacian<f64> = tonnetz_laplacian();
    if corrupt {
        l.matrix[(0, 1)] += 0.25;
        l.matrix[(1, 0)] += 0.25;
    }
    let basis = eigenprogression_basis(&l, 1e-10).map_err(|e| e.to_string())?;
    within(basis.max_residual(&l), 1e-10, "max residual")
}

fn shrinkage_example() -> Outcome {
    let row = vec![2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0];
    let paths = (0..4).map(|i| format!("c{i}")).collect();
    let x = FeatureMatrix::new(row, paths, vec!["a".into()]).map_err(|e| e.to_string())?;
    let mask = shrink_select(&x, 0.5).map_err(|e| e.to_string())?;
    if mask == [0, 1] {
        Ok("energies [4, 3, 2, 1] at 0.5 keep columns [0, 1]".into())
    } else {
        Err(format!("kept {mask:?}"))
    }
}

fn svm_two_point() -> Outcome {
    let params = SvmParams { tol: 1e-10, ..Default::default() };
    let (w, b, _) = train::<f64>(&[1.0, -1.0], 1, &[1, -1], &params).map_err(|e| e.to_string())?;
    within((w[0] - 1.0).abs().max(b.abs()), 1e-6, "|(w, b) - (1, 0)|")
}

fn small_transformer() -> Transformer<f64> {
    let cfg = TransformConfig {
        frames: 128,
        j1_scales: 4,
        j2_scales: 4,
        ..Default::default()
    };
    Transformer::new(&cfg).expect("valid test config")
}

fn random_roll(seed: u64, tr: &Transformer<f64>) -> PianoRoll<f64> {
    let cfg = tr.config();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = PianoRoll::zeros(cfg.frames, cfg.pitch_pad);
    for _ in 0..12 {
        let p = rng.gen_range(36..96);
        let t0 = rng.gen_range(0..cfg.frames);
        let v = rng.gen_range(0.1..1.0);
        for t in t0..(t0 + rng.gen_range(1..32)).min(cfg.frames) {
            x.set(t, p, v);
        }
    }
    x
}

fn rel_entry(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn shift_transpose_invariance() -> Outcome {
    let tr = small_transformer();
    let mut worst = 0.0f64;
    for seed in 0..2 {
        let x = random_roll(seed, &tr);
        let moved = symmetry(&symmetry(&x, Symmetry::Shift(37)), Symmetry::Transpose(5));
        let a = tr.transform(&x).map_err(|e| e.to_string())?;
        let b = tr.transform(&moved).map_err(|e| e.to_string())?;
        worst = worst.max(rel_entry(&a.s1.data, &b.s1.data)).max(rel_entry(&a.s2.values, &b.s2.values));
    }
    within(worst, TOL, "max relative change")
}

fn inversion_reflection() -> Outcome {
    let tr = small_transformer();
    let x = random_roll(7, &tr);
    let a = tr.transform(&x).map_err(|e| e.to_string())?.s1;
    let b = tr.transform(&symmetry(&x, Symmetry::Invert)).map_err(|e| e.to_string())?.s1;
    let mirrored: Vec<f64> = a.paths().iter().map(|p| b.get(p.j1, -p.beta1)).collect();
    within(rel_entry(&a.data, &mirrored), TOL, "max relative error")
}

fn rotation_identifiability() -> Outcome {
    let tr = small_transformer();
    let k = tr.basis().wavelets.iter().position(|w| w.is_complex()).ok_or("no complex eigenprogression")?;
    let rotated = Transformer::with_basis(tr.config(), tr.basis().rebased(k, 1.234, false)).map_err(|e| e.to_string())?;
    let x = random_roll(11, &tr);
    let u1 = tr.first_order().u1(&x).map_err(|e| e.to_string())?;
    let a = tr.second_order().u2(&u1).map_err(|e| e.to_string())?;
    let b = rotated.second_order().u2(&u1).map_err(|e| e.to_string())?;
    let diff = a.data.iter().zip(&b.data).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    within(diff, TOL, "max abs change of U2")
}

pub fn run(options: SelftestOptions) -> SelftestReport {
    let mut checks: Vec<(&'static str, Box<dyn Fn() -> Outcome>)> = vec![
        ("convolution oracle", Box::new(convolution_oracle)),
        ("triad operator eigenvalues", Box::new(triad_eigenvalues)),
        ("tonnetz spectrum", Box::new(tonnetz_spectrum)),
        ("eigenprogression residuals", Box::new(move || eigen_residuals(options.corrupt_tonnetz))),
        ("shrinkage example", Box::new(shrinkage_example)),
        ("svm two-point problem", Box::new(svm_two_point)),
    ];
    if !options.quick {
        checks.push(("shift-transpose invariance", Box::new(shift_transpose_invariance)));
        checks.push(("inversion reflection", Box::new(inversion_reflection)));
        checks.push(("rotation identifiability", Box::new(rotation_identifiability)));
    }
    let checks = checks
        .into_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let outcome = f();
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check { name, passed, detail, seconds }
        })
        .collect();
    SelftestReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_subset_passes() {
        let report = run(SelftestOptions { quick: true, corrupt_tonnetz: false });
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn corrupted_tonnetz_fails_residual_check() {
        let report = run(SelftestOptions { quick: true, corrupt_tonnetz: true });
        assert!(!report.passed());
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert_eq!(failed, ["eigenprogression residuals"]);
    }
}
