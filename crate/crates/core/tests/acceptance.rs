//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p pbop-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use pbop_core::calculus::{
    block_poly_apply, bound_table, lacunary_test_norms, operator_poly_apply, pb_probe, spectral::random_vector,
    Family, LinearOperator, ProbeConfig, ScalarPoly,
};
use pbop_core::calibration::{C_OBS_BMO, C_OFFDIAG, C_REG};
use pbop_core::car::{
    car_combination_norm, car_relations_report, relations_report_sampled, sample_basis, CarCombination, PairSum,
    pair_sum_norm,
};
use pbop_core::dense::{dense_spectral_norm, materialize_operator};
use pbop_core::fejer::{
    fejer_kernel_bounds, fejer_tail, key_estimate_grid, key_estimate_kmax, key_estimate_ratio, max_multiplier_mass,
    multiplier_mass_exact, symbol_lhs, symbol_rhs,
};
use pbop_core::hardy::{backward_shift_apply, forward_shift_apply, hankel_apply, CoeffGrid, HardyOperator, PisierState};
use pbop_core::scalar::{max_abs_diff, norm2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let mut o = f();
    let elapsed = t.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            o.pass = false;
            o.detail.push_str(&format!("; runtime above {limit:?}"));
        }
    }
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id:>2} {name}: {} ({:.2?})", o.detail, elapsed);
    o.pass
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::MIN, f64::max);
    let lo = v.iter().copied().fold(f64::MAX, f64::min);
    hi / lo
}

fn car_relations() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=8 {
        let r = car_relations_report(n).unwrap();
        assert!(r.dense);
        worst = worst.max(r.anticommutator_max).max(r.canonical_max);
    }
    let sampled = relations_report_sampled(12, &sample_basis(1 << 12, 64)).unwrap();
    worst = worst.max(sampled.anticommutator_max).max(sampled.canonical_max);
    outcome(
        worst == 0.0,
        format!("max residual {worst:e} over n=1..8 dense and n=12 ({} sampled basis vectors)", sampled.probes),
    )
}

fn lemma_norm_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut rel, mut sq) = (0.0f64, 0.0f64);
    for trial in 0..100u64 {
        let len = rng.random_range(1..=10);
        let alpha = random_vector::<f64>(len, 10_000 + trial);
        let exact = norm2(&alpha);
        let est = car_combination_norm(&alpha, len, 1e-12).unwrap();
        rel = rel.max((est.value - exact).abs() / exact);
        let op = CarCombination::new(alpha, len).unwrap();
        let v = random_vector::<f64>(op.dim_in(), 20_000 + trial);
        sq = sq.max(norm2(&op.apply(&op.apply(&v))));
    }
    outcome(
        rel <= 1e-8 && sq <= 1e-12,
        format!("max relative error {rel:.2e} (<= 1e-8), max |R^2 v| {sq:.2e} (<= 1e-12)"),
    )
}

fn pair_sum_bound() -> Outcome {
    let mut ok = true;
    let mut lows = vec![];
    for m in 1..=7 {
        let est = pair_sum_norm::<f64>(m, 1e-10, 4000, 7).unwrap();
        ok &= est.certified_lower >= m as f64 / 2.0 - 1e-9;
        lows.push(format!("{:.4}", est.certified_lower));
    }
    let mut oracle_gap = 0.0f64;
    for m in 1..=3 {
        let op = PairSum::new(m).unwrap();
        let dense = dense_spectral_norm(&materialize_operator::<f64, _>(&op, false, 1 << 11).unwrap());
        let est = pair_sum_norm::<f64>(m, 1e-13, 4000, 7).unwrap();
        oracle_gap = oracle_gap.max((dense - est.value).abs());
    }
    ok &= oracle_gap <= 1e-8;
    outcome(
        ok,
        format!(
            "certified lower bounds m=1..7 [{}] vs m/2; dense oracle gap {oracle_gap:.2e} (<= 1e-8)",
            lows.join(", ")
        ),
    )
}

fn block_identity() -> Outcome {
    let m = 3;
    let mut dev = 0.0f64;
    for (e, eps) in [0.0, 0.5, 1.0].into_iter().enumerate() {
        let op = HardyOperator::<f64>::pisier(m, eps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(300 + e as u64);
        for t in 0..50u64 {
            let deg = rng.random_range(0..=32);
            let p = ScalarPoly::<f64>::random_dense(deg, &mut rng);
            let s = PisierState::<f64>::random(m, 4000 + t).unwrap();
            let horner = operator_poly_apply(&op, &p, &s.to_vec()).unwrap();
            let block = block_poly_apply(eps, &p, &s).unwrap().to_vec();
            dev = dev.max(max_abs_diff(&horner, &block));
        }
    }
    let mut inter = 0.0f64;
    for m in 1..=6 {
        let f = CoeffGrid::<f64>::random(m, 77 + m as u64).unwrap();
        let lhs = backward_shift_apply(&hankel_apply(&f));
        let rhs = hankel_apply(&forward_shift_apply(&f));
        inter = inter.max(max_abs_diff(lhs.as_slice(), rhs.as_slice()));
    }
    outcome(
        dev <= 1e-10 && inter <= 1e-14,
        format!("Horner vs block deviation {dev:.2e} (<= 1e-10); intertwining residual {inter:.2e} (<= 1e-14)"),
    )
}

fn cb_growth() -> Outcome {
    let mut ok = true;
    let mut rows = vec![];
    for m in 1..=5 {
        let r = lacunary_test_norms::<f64>(m, 1.0, 1e-8, 11).unwrap();
        let root = (m as f64).sqrt();
        ok &= (r.p_sup - root).abs() <= 1e-6 && (r.p_sup_min - root).abs() <= 1e-6;
        ok &= r.cb_ratio_certified >= root / 2.0 - 1e-6;
        rows.push(format!("m={m}: {:.4} >= {:.4}", r.cb_ratio_certified, root / 2.0));
    }
    outcome(ok, format!("P_sup = sqrt(m); certified cb ratios {}", rows.join(", ")))
}

fn pb_evidence() -> Outcome {
    let cfg = ProbeConfig::default();
    let mut ok = true;
    let mut sups = vec![];
    let mut worst = 0.0f64;
    for m in [2, 3, 4] {
        let mut sup = 0.0f64;
        for fam in [Family::RandomDense, Family::RandomLacunary] {
            let r = pb_probe::<f64>(m, 1.0, fam, &cfg).unwrap();
            ok &= r.trials.len() == cfg.trials && r.trials.iter().all(|t| t.ratio <= C_REG);
            sup = sup.max(r.sup_ratio);
        }
        sups.push(sup);
    }
    let growth = spread(&sups);
    ok &= growth <= 1.5;
    for m in [2, 3, 4] {
        for fam in [Family::RandomDense, Family::RandomLacunary] {
            worst = worst.max(pb_probe::<f64>(m, 0.0, fam, &cfg).unwrap().sup_ratio);
        }
    }
    ok &= worst <= 1.0 + 1e-6;
    outcome(
        ok,
        format!(
            "eps=1 suprema m=2,3,4 [{:.4}, {:.4}, {:.4}] <= C_reg={C_REG}, max/min {growth:.3} (<= 1.5); eps=0 supremum {worst:.8}",
            sups[0], sups[1], sups[2]
        ),
    )
}

fn symbol_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut dev = 0.0f64;
    for _ in 0..100 {
        let deg = rng.random_range(0..=200);
        let p = ScalarPoly::<f64>::random_dense(deg, &mut rng);
        let lhs = symbol_lhs(&p, 8).unwrap();
        let rhs = symbol_rhs(&p, 8).unwrap();
        dev = dev.max(lhs.max_abs_diff(&rhs));
    }
    outcome(dev <= 1e-12, format!("max coefficient deviation {dev:.2e} (<= 1e-12)"))
}

fn seven_thirds() -> Outcome {
    let kmax = 24u32;
    let (arg, mass) = max_multiplier_mass(1 << 20, kmax);
    let bound = Ratio::new(7i128, 3);
    let quarter_pow = Ratio::new(1i128, 4i128.pow(kmax));
    let m1 = multiplier_mass_exact(1, kmax);
    let m3 = multiplier_mass_exact(3, kmax);
    let m1_expected = (Ratio::from_integer(1) - quarter_pow) / 3;
    let m3_expected = Ratio::from_integer(1) - quarter_pow * 3;
    let ok = mass <= bound && m1 == m1_expected && m3 == m3_expected;
    outcome(
        ok,
        format!(
            "max M(n) over n <= 2^20 is {:.6} at n={arg} (<= 7/3); M(1) = (1 - 4^-24)/3, M(3) = 1 - 3*4^-24 exactly",
            *mass.numer() as f64 / *mass.denom() as f64
        ),
    )
}

fn kernel_estimates() -> Outcome {
    let (mut l1_dev, mut derivs, mut tails) = (0.0f64, vec![], vec![]);
    for k in 4..=12usize {
        let b = fejer_kernel_bounds::<f64>(k, 64 << k).unwrap();
        let scale = 2f64.powi(k as i32);
        l1_dev = l1_dev.max((b.l1_norm - 1.0).abs());
        derivs.push(b.deriv_l1 / scale);
        let tail = (0..=16)
            .map(|j| {
                let d = 2f64.powi(-j);
                fejer_tail::<f64>(k, d) * scale * d
            })
            .fold(0.0, f64::max);
        tails.push(tail);
    }
    let (sd, st) = (spread(&derivs), spread(&tails));
    outcome(
        l1_dev <= 1e-10 && sd <= 1.2 && st <= 1.2,
        format!(
            "|l1 - 1| <= {l1_dev:.1e}; deriv_l1/2^k in [{:.5}, {:.5}] (spread {sd:.4}); tail*2^k*delta max in [{:.5}, {:.5}] (spread {st:.4})",
            derivs.iter().copied().fold(f64::MAX, f64::min),
            derivs.iter().copied().fold(0.0, f64::max),
            tails.iter().copied().fold(f64::MAX, f64::min),
            tails.iter().copied().fold(0.0, f64::max),
        ),
    )
}

fn key_estimate() -> Outcome {
    let mut all = vec![];
    let mut last = vec![];
    let mut worst = 0.0f64;
    for j in 4..=10usize {
        let deg = 1usize << j;
        let kmax = key_estimate_kmax(deg);
        let n = key_estimate_grid(kmax);
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + j as u64);
        let ratios: Vec<f64> = (0..16)
            .map(|_| key_estimate_ratio(&ScalarPoly::<f64>::random_dense(deg, &mut rng), kmax, n).unwrap())
            .collect();
        let lac = key_estimate_ratio(&ScalarPoly::<f64>::random_lacunary(j, &mut rng), kmax, n).unwrap();
        worst = ratios.iter().copied().fold(worst, f64::max).max(lac);
        all.extend_from_slice(&ratios);
        if j == 10 {
            last = ratios;
        }
    }
    let (global, tail) = (median(&mut all), median(&mut last));
    outcome(
        worst <= C_OBS_BMO && tail <= 1.25 * global,
        format!(
            "max ratio {worst:.4} <= c_obs={C_OBS_BMO}; degree 2^10 median {tail:.4} vs 1.25 x global median {global:.4}"
        ),
    )
}

fn bourgain_column() -> Outcome {
    let probe = ProbeConfig {
        trials: 50,
        ..ProbeConfig::default()
    };
    let k = 2.0;
    let table = bound_table(&[1, 2, 3, 4], k, C_OFFDIAG, &probe).unwrap();
    let formula = table
        .rows
        .iter()
        .all(|r| (r.sb_lower - (k - 1.0) * (r.m as f64).sqrt() / (2.0 * C_OFFDIAG)).abs() <= 1e-12);
    let margin = table
        .rows
        .iter()
        .map(|r| r.bourgain_upper - r.sb_lower)
        .fold(f64::MAX, f64::min);
    outcome(
        table.consistent() && formula,
        format!("{} rows, smallest bourgain_upper - sb_lower = {margin:.4}", table.rows.len()),
    )
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(1, "CAR relations", Some(secs(10)), car_relations),
        run(2, "norm of sum alpha_k C_k", Some(secs(30)), lemma_norm_identity),
        run(3, "tensor pair-sum lower bound", Some(secs(60)), pair_sum_bound),
        run(4, "block functional calculus", Some(secs(60)), block_identity),
        run(5, "c.b. growth", Some(secs(300)), cb_growth),
        run(6, "polynomial-boundedness probe", None, pb_evidence),
        run(7, "symbol identity", Some(secs(10)), symbol_identity),
        run(8, "multiplier mass 7/3 bound", Some(secs(30)), seven_thirds),
        run(9, "Fejer kernel estimates", Some(secs(60)), kernel_estimates),
        run(10, "key BMO estimate", None, key_estimate),
        run(11, "Bourgain consistency column", None, bourgain_column),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
