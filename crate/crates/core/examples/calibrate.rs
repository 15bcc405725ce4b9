//! Measures the empirical constants stored in `pbop_core::calibration`.
//!
//! Run with `cargo run --release -p pbop-core --example calibrate`.

use std::time::Instant;

use pbop_core::calculus::{lacunary_test_norms, pb_probe, Family, ProbeConfig, ScalarPoly};
use pbop_core::car::pair_sum_norm;
use pbop_core::fejer::{fejer_kernel_bounds, fejer_tail, key_estimate_grid, key_estimate_kmax, key_estimate_ratio};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn main() {
    let t = Instant::now();
    println!("== pair sum norms");
    for m in 1..=7 {
        let est = pair_sum_norm::<f64>(m, 1e-10, 4000, 7).unwrap();
        println!(
            "m={m} value={:.10} lower={:.10} iters={} conv={}",
            est.value, est.certified_lower, est.iterations, est.converged
        );
    }
    println!("  [{:?}]", t.elapsed());

    println!("== lacunary test norms (eps = 1)");
    for m in 1..=5 {
        let t = Instant::now();
        let r = lacunary_test_norms::<f64>(m, 1.0, 1e-8, 11).unwrap();
        println!(
            "m={m} p_sup={:.10} p_min={:.10} pt={:.6} pt_lower={:.6} comp={:.6} cb={:.4} sqrt(m)/2={:.4} iters={} [{:?}]",
            r.p_sup,
            r.p_sup_min,
            r.pt_norm.value,
            r.pt_norm.certified_lower,
            r.compression_norm.value,
            r.cb_ratio_certified,
            (m as f64).sqrt() / 2.0,
            r.pt_norm.iterations,
            t.elapsed()
        );
    }

    println!("== pb probe (eps = 1, 200 trials, degree <= 256)");
    let cfg = ProbeConfig::default();
    for m in [2, 3, 4] {
        for fam in [Family::RandomDense, Family::RandomLacunary] {
            let t = Instant::now();
            let r = pb_probe::<f64>(m, 1.0, fam, &cfg).unwrap();
            println!(
                "m={m} {fam}: sup={:.6} offdiag_sup={:.6} argmax_deg={} [{:?}]",
                r.sup_ratio,
                r.sup_offdiag_ratio,
                r.argmax.len().saturating_sub(1),
                t.elapsed()
            );
        }
    }

    println!("== kernel bounds");
    for k in 4..=12usize {
        let b = fejer_kernel_bounds::<f64>(k, 64 << k).unwrap();
        let tails: Vec<f64> = (0..=16)
            .map(|j| {
                let d = 2f64.powi(-j);
                fejer_tail::<f64>(k, d) * 2f64.powi(k as i32) * d
            })
            .collect();
        let tmax = tails.iter().copied().fold(0.0, f64::max);
        println!(
            "k={k} l1={:.14} deriv/2^k={:.6} tail_max={:.6}",
            b.l1_norm,
            b.deriv_l1 / 2f64.powi(k as i32),
            tmax
        );
    }

    println!("== key estimate ratios");
    let mut all = vec![];
    for j in 4..=10usize {
        let t = Instant::now();
        let deg = 1usize << j;
        let kmax = key_estimate_kmax(deg);
        let n = key_estimate_grid(kmax);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + j as u64);
        let mut ratios: Vec<f64> = (0..16)
            .map(|_| key_estimate_ratio(&ScalarPoly::<f64>::random_dense(deg, &mut rng), kmax, n).unwrap())
            .collect();
        let lac = ScalarPoly::<f64>::random_lacunary(j, &mut rng);
        let lr = key_estimate_ratio(&lac, kmax, n).unwrap();
        let mx = ratios.iter().copied().fold(0.0, f64::max);
        all.extend_from_slice(&ratios);
        println!(
            "deg=2^{j} median={:.5} max={:.5} lacunary={:.5} [{:?}]",
            median(&mut ratios),
            mx,
            lr,
            t.elapsed()
        );
    }
    println!("global median={:.5}", median(&mut all));
}
