use anyhow::Result;
use pbop_core::calculus::experiments::check_tensor_guard;
use pbop_core::calculus::{bound_table, lacunary_test_norms, pb_probe, Family, ProbeConfig, ScalarPoly};
use pbop_core::calibration::{C_OBS_BMO, C_OFFDIAG};
use pbop_core::fejer::{key_estimate_grid, key_estimate_kmax, key_estimate_ratio};
use pbop_core::hardy::MAX_M;
use pbop_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Common, Experiment};
use crate::report::write_rows;
use crate::{plot, Status, UsageError};

#[derive(Debug, Clone, Serialize)]
pub struct CbRow {
    pub m: usize,
    #[serde(rename = "P_sup")]
    pub p_sup: f64,
    #[serde(rename = "PT_norm_lower")]
    pub pt_norm_lower: f64,
    pub compression_norm_lower: f64,
    pub cb_ratio: f64,
    #[serde(rename = "sqrt(m)/2")]
    pub half_sqrt_m: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub m: usize,
    pub eps: f64,
    pub family: String,
    pub trial: usize,
    pub degree: usize,
    pub sup_norm: f64,
    pub full_norm: f64,
    pub offdiag_norm: f64,
    pub ratio: f64,
    pub offdiag_ratio: f64,
    /// Largest `ratio` over the trials of this `(m, family)`.
    pub supremum: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BmoRow {
    pub degree: usize,
    pub ratio: f64,
}

fn positive_tol(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Error::InvalidTolerance(tol).into())
    }
}

fn check_levels(levels: &[usize]) -> Result<()> {
    if levels.is_empty() || levels.contains(&0) {
        return Err(UsageError("m must be a nonempty list of positive levels".into()).into());
    }
    // Beyond MAX_M the block operator's dimension 2 * 4^m exceeds its cap.
    if let Some(&m) = levels.iter().find(|&&m| m > MAX_M) {
        let dim = if m >= 31 { usize::MAX } else { 2usize << (2 * m) };
        return Err(Error::ResourceGuard { dim, cap: 2 << (2 * MAX_M) }.into());
    }
    Ok(())
}

fn cb_growth(common: &Common) -> Result<(Vec<CbRow>, Vec<String>)> {
    let levels = common.levels(&[1, 2, 3, 4, 5]);
    check_levels(&levels)?;
    for &m in &levels {
        check_tensor_guard(m)?;
    }
    let eps = common.eps.unwrap_or(1.0);
    let tol = positive_tol(common.tol.unwrap_or(1e-8))?;
    let mut rows = vec![];
    let mut failures = vec![];
    for &m in &levels {
        let r = lacunary_test_norms::<f64>(m, eps, tol, common.seed)?;
        let half = (m as f64).sqrt() / 2.0;
        if r.cb_ratio_certified < eps * half - 1e-6 {
            failures.push(format!("m={m}: cb_ratio {} below eps*sqrt(m)/2 = {}", r.cb_ratio_certified, eps * half));
        }
        rows.push(CbRow {
            m,
            p_sup: r.p_sup,
            pt_norm_lower: r.pt_norm.certified_lower,
            compression_norm_lower: r.compression_norm.certified_lower,
            cb_ratio: r.cb_ratio_certified,
            half_sqrt_m: half,
        });
    }
    Ok((rows, failures))
}

fn probe_config(common: &Common) -> Result<ProbeConfig> {
    let d = ProbeConfig::default();
    let cfg = ProbeConfig {
        trials: common.trials.unwrap_or(d.trials),
        max_degree: common.degree.unwrap_or(d.max_degree),
        seed: common.seed,
        tol: positive_tol(common.tol.unwrap_or(d.tol))?,
    };
    if cfg.trials == 0 || cfg.max_degree == 0 {
        return Err(UsageError("trials and degree must be positive".into()).into());
    }
    Ok(cfg)
}

fn pb_probe_rows(common: &Common) -> Result<(Vec<ProbeRow>, Vec<String>)> {
    let levels = common.levels(&[3]);
    check_levels(&levels)?;
    let eps = common.eps.unwrap_or(1.0);
    let cfg = probe_config(common)?;
    let mut rows = vec![];
    let mut failures = vec![];
    for &m in &levels {
        for family in [Family::RandomDense, Family::RandomLacunary] {
            let r = pb_probe::<f64>(m, eps, family, &cfg)?;
            if eps == 0.0 && r.sup_ratio > 1.0 + 1e-6 {
                failures.push(format!("m={m} {family}: eps=0 supremum {} exceeds 1", r.sup_ratio));
            }
            rows.extend(r.trials.iter().map(|t| ProbeRow {
                m,
                eps,
                family: family.to_string(),
                trial: t.trial,
                degree: t.degree,
                sup_norm: t.sup_norm,
                full_norm: t.full_norm,
                offdiag_norm: t.offdiag_norm,
                ratio: t.ratio,
                offdiag_ratio: t.offdiag_ratio,
                supremum: r.sup_ratio,
            }));
        }
    }
    Ok((rows, failures))
}

fn bound_table_rows(common: &Common) -> Result<(Vec<pbop_core::calculus::BoundRow>, Vec<String>)> {
    let levels = common.levels(&[1, 2, 3, 4]);
    check_levels(&levels)?;
    let k = common.k.unwrap_or(2.0);
    let table = bound_table(&levels, k, C_OFFDIAG, &probe_config(common)?)?;
    let failures = table
        .rows
        .iter()
        .filter(|r| !r.consistent())
        .map(|r| format!("m={}: sb_lower {} exceeds bourgain_upper {}", r.m, r.sb_lower, r.bourgain_upper))
        .collect();
    Ok((table.rows, failures))
}

fn bmo_constant(common: &Common) -> Result<(Vec<BmoRow>, Vec<String>)> {
    let top = common.degree.unwrap_or(1024);
    if top < 16 || !top.is_power_of_two() {
        return Err(UsageError(format!("--degree must be a power of two >= 16, got {top}")).into());
    }
    let trials = common.trials.unwrap_or(16);
    if trials == 0 {
        return Err(UsageError("trials must be positive".into()).into());
    }
    let degrees: Vec<usize> = (4..=top.trailing_zeros() as usize).map(|j| 1 << j).collect();
    if let Some(n) = common.grid {
        let required = key_estimate_grid(key_estimate_kmax(top));
        if !n.is_power_of_two() || n < required {
            return Err(Error::GridTooCoarse { n, required }.into());
        }
    }
    let mut rows = vec![];
    let mut failures = vec![];
    for (j, &deg) in degrees.iter().enumerate() {
        let kmax = key_estimate_kmax(deg);
        let n = common.grid.unwrap_or_else(|| key_estimate_grid(kmax));
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed.wrapping_add(j as u64));
        for _ in 0..trials {
            let p = ScalarPoly::<f64>::random_dense(deg, &mut rng);
            let ratio = key_estimate_ratio(&p, kmax, n)?;
            if ratio > C_OBS_BMO {
                failures.push(format!("degree {deg}: ratio {ratio} exceeds c_obs = {C_OBS_BMO}"));
            }
            rows.push(BmoRow { degree: deg, ratio });
        }
    }
    Ok((rows, failures))
}

pub fn run(name: Experiment, common: &Common) -> Result<Status> {
    if common.plot && !matches!(name, Experiment::CbGrowth | Experiment::BmoConstant) {
        return Err(UsageError(format!("--plot is only available for cb-growth and bmo-constant, not {}", name.stem())).into());
    }
    let (path, failures) = match name {
        Experiment::CbGrowth => {
            let (rows, f) = cb_growth(common)?;
            (write_rows(&common.out, name.stem(), common.format, &rows)?, f)
        }
        Experiment::PbProbe => {
            let (rows, f) = pb_probe_rows(common)?;
            (write_rows(&common.out, name.stem(), common.format, &rows)?, f)
        }
        Experiment::BoundTable => {
            let (rows, f) = bound_table_rows(common)?;
            (write_rows(&common.out, name.stem(), common.format, &rows)?, f)
        }
        Experiment::BmoConstant => {
            let (rows, f) = bmo_constant(common)?;
            (write_rows(&common.out, name.stem(), common.format, &rows)?, f)
        }
    };
    println!("report written to {}", path.display());
    if common.plot {
        for p in plot::render(&path, &common.out)? {
            println!("plot written to {}", p.display());
        }
    }
    Ok(if failures.is_empty() {
        Status::Pass
    } else {
        Status::Fail(failures)
    })
}
