use anyhow::Result;
use pbop_core::calculus::spectral::random_vector;
use pbop_core::calculus::{block_poly_apply, operator_poly_apply, LinearOperator, ScalarPoly};
use pbop_core::car::{
    car_combination_norm, car_relations_report, relations_report_dense, relations_report_sampled, sample_basis,
    CarCombination, CarSystem,
};
use pbop_core::fejer::{fejer_kernel_bounds, fejer_tail, max_multiplier_mass, symbol_lhs, symbol_rhs};
use pbop_core::hardy::{backward_shift_apply, forward_shift_apply, hankel_apply, CoeffGrid, HardyOperator, PisierState};
use pbop_core::scalar::{max_abs_diff, norm2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::Common;
use crate::report::write_rows;
use crate::{Status, UsageError};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub suite: String,
    pub statistic: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

fn row(suite: &str, statistic: &str, value: f64, bound: f64) -> SuiteRow {
    SuiteRow {
        suite: suite.into(),
        statistic: statistic.into(),
        value,
        bound,
        pass: value <= bound,
    }
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::MIN, f64::max);
    let lo = v.iter().copied().fold(f64::MAX, f64::min);
    hi / lo
}

fn car_relations(corrupt: Option<usize>, failures: &mut Vec<String>) -> Result<SuiteRow> {
    let mut worst = 0.0f64;
    if let Some(k) = corrupt {
        let n = 8;
        if k == 0 || k > n {
            return Err(UsageError(format!("corrupt generator index must be in 1..={n}, got {k}")).into());
        }
        let sys = CarSystem::new(n)?;
        let mut gens = (1..=n).map(|j| sys.generator::<f64>(j)).collect::<pbop_core::Result<Vec<_>>>()?;
        gens[k - 1][(0, 0)] += 0.5;
        let r = relations_report_dense(&gens);
        if let Some((i, j, rel)) = r.worst {
            failures.push(format!("CAR relation {rel} violated for (i, j) = ({i}, {j})"));
        }
        worst = r.anticommutator_max.max(r.canonical_max);
    } else {
        for n in 1..=8 {
            let r = car_relations_report(n)?;
            worst = worst.max(r.anticommutator_max).max(r.canonical_max);
        }
        let r = relations_report_sampled(12, &sample_basis(1 << 12, 64))?;
        worst = worst.max(r.anticommutator_max).max(r.canonical_max);
    }
    Ok(row("car-relations", "max residual, n=1..8 dense and n=12 sampled", worst, 0.0))
}

fn car_norms(seed: u64, tol: f64) -> Result<Vec<SuiteRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rel, mut sq) = (0.0f64, 0.0f64);
    for t in 0..100u64 {
        let len = rng.random_range(1..=10);
        let alpha = random_vector::<f64>(len, seed.wrapping_add(1000 + t));
        let exact = norm2(&alpha);
        let est = car_combination_norm(&alpha, len, tol)?;
        rel = rel.max((est.value - exact).abs() / exact);
        let op = CarCombination::new(alpha, len)?;
        let v = random_vector::<f64>(op.dim_in(), seed.wrapping_add(2000 + t));
        sq = sq.max(norm2(&op.apply(&op.apply(&v))));
    }
    Ok(vec![
        row("car-norm", "max relative error of ||sum alpha_k C_k||", rel, 1e-8),
        row("car-square", "max ||R^2 v||", sq, 1e-12),
    ])
}

fn intertwining(m_top: usize, seed: u64) -> Result<SuiteRow> {
    let mut worst = 0.0f64;
    for m in 1..=m_top {
        let f = CoeffGrid::<f64>::random(m, seed.wrapping_add(m as u64))?;
        let lhs = backward_shift_apply(&hankel_apply(&f));
        let rhs = hankel_apply(&forward_shift_apply(&f));
        worst = worst.max(max_abs_diff(lhs.as_slice(), rhs.as_slice()));
    }
    Ok(row("intertwining", "max |X Gamma f - Gamma S f|", worst, 1e-14))
}

fn block_calculus(levels: &[usize], eps_list: &[f64], degree: usize, seed: u64) -> Result<SuiteRow> {
    let mut worst = 0.0f64;
    for &m in levels {
        for (e, &eps) in eps_list.iter().enumerate() {
            let op = HardyOperator::<f64>::pisier(m, eps)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(100 * m as u64 + e as u64));
            for t in 0..50u64 {
                let deg = rng.random_range(0..=degree);
                let p = ScalarPoly::<f64>::random_dense(deg, &mut rng);
                let s = PisierState::<f64>::random(m, seed.wrapping_add(5000 + t))?;
                let horner = operator_poly_apply(&op, &p, &s.to_vec())?;
                let block = block_poly_apply(eps, &p, &s)?.to_vec();
                worst = worst.max(max_abs_diff(&horner, &block));
            }
        }
    }
    Ok(row("block-calculus", "max |Horner p(T) v - block p(T) v|", worst, 1e-10))
}

fn symbol_identity(seed: u64) -> Result<SuiteRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(31));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let deg = rng.random_range(0..=200);
        let p = ScalarPoly::<f64>::random_dense(deg, &mut rng);
        worst = worst.max(symbol_lhs(&p, 8)?.max_abs_diff(&symbol_rhs(&p, 8)?));
    }
    Ok(row("symbol-identity", "max coefficient deviation, kmax=8", worst, 1e-12))
}

fn multiplier_mass() -> SuiteRow {
    let (_, mass) = max_multiplier_mass(1 << 20, 24);
    let value = *mass.numer() as f64 / *mass.denom() as f64;
    let mut r = row("multiplier-mass", "max M(n) for n <= 2^20, kmax=24", value, 7.0 / 3.0);
    r.pass = mass <= num_rational::Ratio::new(7, 3);
    r
}

fn kernel_bounds() -> Result<Vec<SuiteRow>> {
    let (mut l1, mut derivs, mut tails) = (0.0f64, vec![], vec![]);
    for k in 4..=12usize {
        let b = fejer_kernel_bounds::<f64>(k, 64 << k)?;
        let scale = 2f64.powi(k as i32);
        l1 = l1.max((b.l1_norm - 1.0).abs());
        derivs.push(b.deriv_l1 / scale);
        tails.push(
            (0..=16)
                .map(|j| {
                    let d = 2f64.powi(-j);
                    fejer_tail::<f64>(k, d) * scale * d
                })
                .fold(0.0, f64::max),
        );
    }
    Ok(vec![
        row("kernel-l1", "max | ||K_k||_1 - 1 |, k=4..12", l1, 1e-10),
        row("kernel-derivative", "max/min of deriv_l1/2^k, k=4..12", spread(&derivs), 1.2),
        row("kernel-tail", "max/min of sup_delta tail*2^k*delta, k=4..12", spread(&tails), 1.2),
    ])
}

pub fn run(common: &Common, corrupt: Option<usize>) -> Result<Status> {
    let levels = common.levels(&[3]);
    let eps_list = common.eps.map_or_else(|| vec![0.0, 0.5, 1.0], |e| vec![e]);
    let degree = common.degree.unwrap_or(32);
    let tol = common.tol.unwrap_or(1e-12);
    let m_top = levels.iter().copied().max().unwrap_or(3).max(1);

    let mut failures = vec![];
    let mut rows = vec![car_relations(corrupt, &mut failures)?];
    rows.extend(car_norms(common.seed, tol)?);
    rows.push(intertwining(m_top, common.seed)?);
    rows.push(block_calculus(&levels, &eps_list, degree, common.seed)?);
    rows.push(symbol_identity(common.seed)?);
    rows.push(multiplier_mass());
    rows.extend(kernel_bounds()?);

    let path = write_rows(&common.out, "verify", common.format, &rows)?;
    for r in &rows {
        println!(
            "{} {:<18} {} = {:.3e} (bound {:.3e})",
            if r.pass { "PASS" } else { "FAIL" },
            r.suite,
            r.statistic,
            r.value,
            r.bound
        );
        if !r.pass && failures.is_empty() {
            failures.push(format!("{} exceeded its bound", r.suite));
        }
    }
    println!("report written to {}", path.display());
    if rows.iter().all(|r| r.pass) {
        Ok(Status::Pass)
    } else {
        Ok(Status::Fail(failures))
    }
}

