mod common;

use common::{max_abs_diff, max_rel_entry, random_roll, rel_diff, test_config};
use eigenprog::filterbank::{build_prog_filterbank, build_triad_filterbank, ProgFilter, TransformConfig};
use eigenprog::pianoroll::PianoRoll;
use eigenprog::scattering::*;
use eigenprog::spectral::{eigenprogression_basis, tonnetz_laplacian, Quality, BETA1_VALUES};
use eigenprog::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn random_array(rng: &mut ChaCha8Rng, shape: &[usize]) -> CyclicArray<f64> {
    let n = shape.iter().product();
    let data = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    CyclicArray::from_vec(shape, data).unwrap()
}

#[test]
fn fft_examples() {
    let delta = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    assert_eq!(fft(&delta, false).unwrap(), vec![c(1.0, 0.0); 4]);
    let shifted = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let out = fft(&shifted, false).unwrap();
    let want = [c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)];
    for (a, b) in out.iter().zip(want) {
        assert!((a - b).norm() < 1e-15);
    }
}

#[test]
fn fft_round_trip_132() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v: Vec<_> = (0..132).map(|_| c(rng.gen(), rng.gen())).collect();
    let back = fft(&fft(&v, false).unwrap(), true).unwrap();
    let err: f64 = v.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-12);
}

#[test]
fn convolution_matches_direct_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let x = random_array(&mut rng, &[64, 24]);
        let h = random_array(&mut rng, &[64, 24]);
        let fast = cyclic_convolve(&x, &h).unwrap();
        let slow = direct_cyclic_convolve(&x, &h).unwrap();
        let err = fast.data.iter().zip(&slow.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }
}

#[test]
fn three_axis_convolution_with_z2() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x = random_array(&mut rng, &[16, 12, 2]);
    let h = random_array(&mut rng, &[16, 12, 2]);
    let fast = cyclic_convolve(&x, &h).unwrap();
    let slow = direct_cyclic_convolve(&x, &h).unwrap();
    let err = fast.data.iter().zip(&slow.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-9);
}

#[test]
fn u1_of_silence_is_zero() {
    let cfg = test_config(4);
    let fb = build_triad_filterbank::<f64>(&cfg, 132).unwrap();
    let u = u1(&PianoRoll::zeros(128, 132), &fb).unwrap();
    assert!(u.data.iter().all(|&v| v == 0.0));
    assert!(s1(&u).data.iter().all(|&v| v == 0.0));
}

#[test]
fn u1_of_impulse_is_translated_filter_modulus() {
    let cfg = test_config(3);
    let fb = build_triad_filterbank::<f64>(&cfg, 132).unwrap();
    let (t0, p0) = (17, 60);
    let mut x = PianoRoll::zeros(128, 132);
    x.set(t0, p0, 1.0);
    let u = u1(&x, &fb).unwrap();
    let mut err = 0.0f64;
    for f in &fb.filters {
        for t in 0..128 {
            for p in 0..132 {
                let src = fb.value(f, (t + 128 - t0) % 128, (p + 132 - p0) % 132).norm();
                let got = u.get(t, p, f.quality.index(), f.j1, f.beta1);
                err = err.max((src - got).abs());
            }
        }
    }
    assert!(err < 1e-12, "{err}");
}

#[test]
fn u1_matches_direct_convolution() {
    let cfg = TransformConfig { frames: 32, j1_scales: 3, ..Default::default() };
    let fb = build_triad_filterbank::<f64>(&cfg, 24).unwrap();
    let x = random_roll(5, 32, 24, 6);
    let u = u1(&x, &fb).unwrap();
    let xa = CyclicArray::from_vec(
        &[32, 24],
        (0..32 * 24).map(|i| c(x.get(i % 32, i / 32), 0.0)).collect(),
    )
    .unwrap();
    for f in &fb.filters {
        let h = CyclicArray::from_vec(&[32, 24], (0..32 * 24).map(|i| fb.value(f, i % 32, i / 32)).collect()).unwrap();
        let y = direct_cyclic_convolve(&xa, &h).unwrap();
        for i in 0..32 * 24 {
            let got = u.get(i % 32, i / 32, f.quality.index(), f.j1, f.beta1);
            assert!((y.data[i].norm() - got).abs() < 1e-9);
        }
    }
}

#[test]
fn sustained_major_chord_prefers_beta1_zero() {
    let cfg = test_config(6);
    let fb = build_triad_filterbank::<f64>(&cfg, 132).unwrap();
    let mut x = PianoRoll::zeros(128, 132);
    for t in 0..128 {
        for p in [60, 64, 67] {
            x.set(t, p, 1.0);
        }
    }
    let u = u1(&x, &fb).unwrap();
    let j = cfg.j1_scales - 1;
    let energy = |b: i8| -> f64 {
        let n = 128 * 132;
        u.slice(j, b)[Quality::Major.index() * n..(Quality::Major.index() + 1) * n].iter().map(|v| v * v).sum()
    };
    assert!(energy(0) > energy(1));
    assert!(energy(0) > energy(-1));
}

#[test]
fn s1_is_homogeneous() {
    let tr = Transformer::<f64>::new(&test_config(4)).unwrap();
    let x = random_roll(1, 128, 128, 12);
    let a = tr.transform(&x).unwrap();
    let b = tr.transform(&x.scaled(2.5)).unwrap();
    let scale = |v: &[f64]| v.iter().map(|u| 2.5 * u).collect::<Vec<_>>();
    assert!(max_rel_entry(&scale(&a.s1.data), &b.s1.data) < 1e-12);
    assert!(max_rel_entry(&scale(&a.s2.values), &b.s2.values) < 1e-12);
}

#[test]
fn u1_is_shift_equivariant() {
    let cfg = test_config(3);
    let fb = build_triad_filterbank::<f64>(&cfg, 132).unwrap();
    let x = random_roll(2, 128, 132, 10);
    let dt = 37;
    let u = u1(&x, &fb).unwrap();
    let v = u1(&symmetry(&x, Symmetry::Shift(dt)), &fb).unwrap();
    let mut err = 0.0f64;
    for j1 in 0..3 {
        for b in BETA1_VALUES {
            for q in 0..2 {
                for p in 0..132 {
                    for t in 0..128 {
                        let src = u.get((t + 128 - dt as usize) % 128, p, q, j1, b);
                        err = err.max((v.get(t, p, q, j1, b) - src).abs());
                    }
                }
            }
        }
    }
    assert!(err < 1e-12, "{err}");
}

#[test]
fn shift_and_transpose_invariance() {
    let tr = Transformer::<f64>::new(&test_config(8)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 0..3 {
        let x = tr.prepare(&random_roll(seed, 128, 128, 16)).unwrap();
        let dt = rng.gen_range(-128..128);
        let dp = rng.gen_range(-132..132);
        let y = symmetry(&symmetry(&x, Symmetry::Transpose(dp)), Symmetry::Shift(dt));
        let a = tr.transform(&x).unwrap();
        let b = tr.transform(&y).unwrap();
        assert!(max_rel_entry(&a.s1.data, &b.s1.data) < 1e-9);
        assert!(max_rel_entry(&a.s2.values, &b.s2.values) < 1e-9);
    }
}

#[test]
fn inversion_reflects_beta1() {
    let tr = Transformer::<f64>::new(&test_config(5)).unwrap();
    let x = tr.prepare(&random_roll(4, 128, 128, 16)).unwrap();
    let a = tr.transform(&x).unwrap().s1;
    let b = tr.transform(&symmetry(&x, Symmetry::Invert)).unwrap().s1;
    let reflected: Vec<f64> = (0..5).flat_map(|j| BETA1_VALUES.map(|beta| a.get(j, -beta))).collect();
    assert!(max_rel_entry(&reflected, &b.data) < 1e-9);
}

#[test]
fn retrograde_changes_s1() {
    let tr = Transformer::<f64>::new(&test_config(8)).unwrap();
    let mut x = PianoRoll::zeros(128, 128);
    for (k, p) in [60, 64, 67].into_iter().enumerate() {
        for t in 4 * k..4 * k + 4 {
            x.set(t, p, 1.0);
        }
    }
    let a = tr.transform(&x).unwrap().s1;
    let b = tr.transform(&symmetry(&x, Symmetry::Retrograde)).unwrap().s1;
    let d = rel_diff(&a.data, &b.data);
    assert!(d > 1e-2, "{d}");
}

#[test]
fn u2_of_delta_is_translated_filter_modulus() {
    let cfg = TransformConfig { frames: 16, j1_scales: 2, j2_scales: 3, pitches: 24, pitch_pad: 24, ..Default::default() };
    let basis = eigenprogression_basis(&tonnetz_laplacian(), 1e-10).unwrap();
    let fb = build_prog_filterbank::<f64>(&cfg, &basis, 24).unwrap();
    let mut u = ScatterTensor1::zeros(16, 24, 2);
    let (t0, p0, q0) = (5, 19, 1);
    u.slice_mut(0, 1)[t0 + 16 * (p0 + 24 * q0)] = 1.0;
    let plan = SecondOrderPlan::new(&fb).unwrap();
    let u2 = plan.u2(&u).unwrap();
    let mut err = 0.0f64;
    for path in u2.layout.paths() {
        let f = ProgFilter { j2: path.j2, beta2: path.beta2, gamma2: path.gamma2 };
        for q in 0..2 {
            for p in 0..24 {
                for t in 0..16 {
                    let got = u2.get(t, p, q, &path);
                    let want = if (path.j1, path.beta1) == (0, 1) {
                        fb.value(&f, (t + 16 - t0) % 16, (p + 24 - p0) % 24, (q + q0) % 2).norm()
                    } else {
                        0.0
                    };
                    err = err.max((got - want).abs());
                }
            }
        }
    }
    assert!(err < 1e-12, "{err}");
}

#[test]
fn u2_matches_direct_convolution() {
    let cfg = TransformConfig { frames: 8, j1_scales: 1, j2_scales: 2, pitches: 12, pitch_pad: 12, j2_coupling: eigenprog::filterbank::Coupling::All, ..Default::default() };
    let basis = eigenprogression_basis(&tonnetz_laplacian(), 1e-10).unwrap();
    let fb = build_prog_filterbank::<f64>(&cfg, &basis, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut u = ScatterTensor1::zeros(8, 12, 1);
    for v in &mut u.data {
        *v = rng.gen();
    }
    let u2 = SecondOrderPlan::new(&fb).unwrap().u2(&u).unwrap();
    let n = 8 * 12 * 2;
    for beta1 in BETA1_VALUES {
        let slice = u.slice(0, beta1);
        let xa = CyclicArray::from_vec(&[8, 12, 2], slice.iter().map(|&v| c(v, 0.0)).collect()).unwrap();
        for path in u2.layout.paths().into_iter().filter(|p| p.beta1 == beta1) {
            let f = ProgFilter { j2: path.j2, beta2: path.beta2, gamma2: path.gamma2 };
            let h = CyclicArray::from_vec(&[8, 12, 2], (0..n).map(|i| fb.value(&f, i % 8, (i / 8) % 12, i / 96)).collect()).unwrap();
            let y = direct_cyclic_convolve(&xa, &h).unwrap();
            let got = u2.block(&path);
            for i in 0..n {
                assert!((y.data[i].norm() - got[i]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn streaming_s2_equals_materialized() {
    let cfg = TransformConfig { frames: 32, j1_scales: 3, j2_scales: 3, ..Default::default() };
    let tr = Transformer::<f64>::new(&cfg).unwrap();
    let x = tr.prepare(&random_roll(6, 32, 128, 8)).unwrap();
    let u = tr.first_order().u1(&x).unwrap();
    let dense = tr.second_order().u2(&u).unwrap();
    assert!(dense.data.iter().all(|&v| v >= 0.0));
    let a = s2(&dense);
    let b = tr.second_order().s2(&u).unwrap();
    assert_eq!(a.paths, b.paths);
    assert_eq!(a.values, b.values);
    assert_eq!(a.paths.len(), tr.metadata().s2_dim);
}

#[test]
fn coupling_layout() {
    let tr = Transformer::<f64>::new(&TransformConfig { frames: 64, ..Default::default() }).unwrap();
    let meta = tr.metadata();
    assert_eq!(meta.s1_dim, 24);
    assert_eq!(meta.beta2_count, 14);
    // j2 > j1 with eight scales each: 28 (j1, j2) pairs
    assert_eq!(meta.s2_dim, 28 * 3 * 14 * 3);
    assert_eq!(meta.omitted_slices, vec![(7, -1), (7, 0), (7, 1)]);
    let all = TransformConfig { frames: 64, j2_coupling: eigenprog::filterbank::Coupling::All, ..Default::default() };
    assert_eq!(Transformer::<f64>::new(&all).unwrap().metadata().s2_dim, 64 * 3 * 14 * 3);
}

#[test]
fn silent_piece_gives_zero_features() {
    let tr = Transformer::<f64>::new(&test_config(4)).unwrap();
    let out = tr.transform(&PianoRoll::zeros(128, 128)).unwrap();
    assert!(out.s1.data.iter().chain(&out.s2.values).all(|&v| v == 0.0));
}

#[test]
fn mismatched_pitch_axis_is_rejected() {
    let tr = Transformer::<f64>::new(&test_config(2)).unwrap();
    assert!(tr.transform(&PianoRoll::zeros(128, 130)).is_err());
    assert!(tr.transform(&PianoRoll::zeros(64, 128)).is_err());
}

#[test]
fn rotating_a_degenerate_pair_leaves_u2_unchanged() {
    let cfg = TransformConfig { frames: 64, j1_scales: 3, j2_scales: 3, ..Default::default() };
    let base = Transformer::<f64>::new(&cfg).unwrap();
    let x = base.prepare(&random_roll(7, 64, 128, 10)).unwrap();
    let u = base.first_order().u1(&x).unwrap();
    let ref_u2 = base.second_order().u2(&u).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..base.basis().len() {
        if !base.basis().wavelets[k].is_complex() {
            continue;
        }
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let rebased = Transformer::with_basis(&cfg, base.basis().rebased(k, phi, false)).unwrap();
        let u2 = rebased.second_order().u2(&u).unwrap();
        assert!(max_abs_diff(&ref_u2.data, &u2.data) < 1e-9);
    }
}

#[test]
fn s1_csv_round_trip() {
    let tr = Transformer::<f64>::new(&test_config(3)).unwrap();
    let out = tr.transform(&random_roll(3, 128, 128, 5)).unwrap();
    let text = write_path_csv(&out.s1.paths(), &out.s1.data);
    assert_eq!(text.lines().count(), 10);
    let (paths, values) = read_path_csv::<S1Path>(&text).unwrap();
    assert_eq!(paths, out.s1.paths());
    assert_eq!(values, out.s1.data);
}
