//! Quantitative experiments on `T_m`: the lacunary matrix-polynomial lower
//! bound, polynomial-boundedness probes, and the finite-dimensional bound
//! table.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::functional::{BlockPolyOperator, OffDiagonalOperator};
use crate::calculus::poly::{LacunaryMatrixPoly, ScalarPoly};
use crate::calculus::spectral::{spectral_norm, LinearOperator, NormEstimate};
use crate::calculus::supnorm::poly_sup_norm;
use crate::car::{self, pair_sum_norm, PairSum};
use crate::error::{Error, Result};
use crate::hardy::{half_dim, kernels, HankelSchedule};
use crate::scalar::{cx, czero, Cx, Real};

/// Resource guard on the tensored operand `K_m ⊕ H_m ⊗ C^{2^m}` (m <= 7).
pub const TENSOR_DIM_CAP: usize = 1 << 22;

/// Dimension of the space `P(T_m)` acts on: `2 * 4^m * 2^m`.
pub fn tensor_dim(m: usize) -> usize {
    2usize.saturating_mul(1usize.checked_shl((3 * m) as u32).unwrap_or(usize::MAX))
}

pub fn check_tensor_guard(m: usize) -> Result<()> {
    let dim = if m > 20 { usize::MAX } else { tensor_dim(m) };
    if dim > TENSOR_DIM_CAP {
        Err(Error::ResourceGuard {
            dim,
            cap: TENSOR_DIM_CAP,
        })
    } else {
        Ok(())
    }
}

/// Splitmix-style derivation of per-trial seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `P(T_m) = sum_{k=1}^m T_m^{2^k} ⊗ C_k`, applied matrix-free.
///
/// Layout: state index of `K_m ⊕ H_m` major, fiber of the `C_k` leg minor.
#[derive(Debug, Clone)]
pub struct LacunaryTensorOperator<T: Real> {
    m: usize,
    eps: T,
    sched: HankelSchedule,
    /// `(z^{2^k}, 2^k z^{2^k - 1})` coefficient vectors.
    powers: Vec<(Vec<Cx<T>>, Vec<Cx<T>>)>,
}

impl<T: Real> LacunaryTensorOperator<T> {
    pub fn new(m: usize, eps: T) -> Result<Self> {
        check_tensor_guard(m)?;
        crate::hardy::HardyOperator::<T>::pisier(m, eps)?;
        let powers = (1..=m)
            .map(|k| {
                let e = 1usize << k;
                let p = ScalarPoly::monomial(e, cx(T::one(), T::zero()));
                (p.coeffs().to_vec(), p.derivative().coeffs().to_vec())
            })
            .collect();
        Ok(LacunaryTensorOperator {
            m,
            eps,
            sched: HankelSchedule::new(m),
            powers,
        })
    }

    fn run(&self, x: &[Cx<T>], adjoint: bool) -> Vec<Cx<T>> {
        let inner = 1usize << self.m;
        let h = half_dim(self.m) * inner;
        let mut out = vec![czero(); x.len()];
        let mut tmp = vec![czero(); x.len()];
        let (g, f) = x.split_at(h);
        for (k, (p, dp)) in self.powers.iter().enumerate() {
            {
                let (go, fo) = tmp.split_at_mut(h);
                kernels::block_poly(&self.sched, inner, self.eps, p, dp, g, f, go, fo, adjoint);
            }
            for (src, dst) in tmp.chunks(inner).zip(out.chunks_mut(inner)) {
                car::apply_block(self.m, k + 1, src, dst, 1, adjoint, T::one());
            }
        }
        out
    }

    /// Unit vector with the diagonal pair-sum witness in the constant
    /// coefficients of both `K_m` and `H_m`.
    pub fn compression_witness(&self) -> Vec<Cx<T>> {
        let inner = 1usize << self.m;
        let h = half_dim(self.m) * inner;
        let u = PairSum::new(self.m).expect("guarded").diagonal_witness::<T>();
        let mut w = vec![czero(); 2 * h];
        let r = T::one() / T::lit(2.0).sqrt();
        for (i, z) in u.iter().enumerate() {
            w[i] = z.scale(r);
            w[h + i] = z.scale(r);
        }
        w
    }

    /// The constant-coefficient witness `(0, u)`, whose image has constant
    /// `K_m` coefficient `eps (sum C_k ⊗ C_k) u`.
    pub fn hardy_witness(&self) -> Vec<Cx<T>> {
        let inner = 1usize << self.m;
        let h = half_dim(self.m) * inner;
        let u = PairSum::new(self.m).expect("guarded").diagonal_witness::<T>();
        let mut w = vec![czero(); 2 * h];
        w[h..h + u.len()].copy_from_slice(&u);
        w
    }
}

impl<T: Real> LinearOperator<T> for LacunaryTensorOperator<T> {
    fn dim_in(&self) -> usize {
        tensor_dim(self.m)
    }
    fn dim_out(&self) -> usize {
        tensor_dim(self.m)
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(x, false)
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(y, true)
    }
}

/// Measured norms around the lacunary matrix polynomial `P`.
#[derive(Debug, Clone, Serialize)]
pub struct LacunaryNorms<T> {
    pub m: usize,
    pub eps: T,
    /// Largest sampled `||P(z)||` over the circle.
    pub p_sup: T,
    /// Smallest sampled `||P(z)||` (equal to `p_sup` by the CAR norm identity).
    pub p_sup_min: T,
    pub pt_norm: NormEstimate<T>,
    pub compression_norm: NormEstimate<T>,
    pub cb_ratio: T,
    /// `pt_norm.certified_lower / p_sup`.
    pub cb_ratio_certified: T,
}

/// Circle sample count for `P_sup`.
pub const P_SUP_SAMPLES: usize = 32;
const MAX_ITER: usize = 4000;

pub fn lacunary_test_norms<T: Real>(m: usize, eps: T, tol: T, seed: u64) -> Result<LacunaryNorms<T>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    check_tensor_guard(m)?;
    let lac = LacunaryMatrixPoly::new(m);
    let samples: Vec<T> = (0..P_SUP_SAMPLES)
        .into_par_iter()
        .map(|j| {
            // Offset by half a cell so z = 1 is not the only symmetric point.
            let theta = T::TAU() * (T::from_usize_lossy(j) + T::lit(0.5)) / T::from_usize_lossy(P_SUP_SAMPLES);
            let op = lac.at(cx(theta.cos(), theta.sin()))?;
            Ok(spectral_norm(&op, tol, MAX_ITER, derive_seed(seed, j as u64))?.value)
        })
        .collect::<Result<Vec<T>>>()?;
    let p_sup = samples.iter().copied().fold(T::zero(), T::max);
    let p_sup_min = samples.iter().copied().fold(T::infinity(), T::min);

    let compression_norm = pair_sum_norm(m, tol, MAX_ITER, derive_seed(seed, 1001))?;
    let op = LacunaryTensorOperator::new(m, eps)?;
    let pt_norm = spectral_norm(&op, tol, MAX_ITER, derive_seed(seed, 1002))?
        .with_witness(&op, &op.hardy_witness())
        .with_witness(&op, &op.compression_witness());
    Ok(LacunaryNorms {
        m,
        eps,
        p_sup,
        p_sup_min,
        cb_ratio: pt_norm.value / p_sup,
        cb_ratio_certified: pt_norm.certified_lower / p_sup,
        pt_norm,
        compression_norm,
    })
}

/// Random polynomial families for the polynomial-boundedness probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Complex Gaussian coefficients, degree uniform in `1..=max_degree`.
    RandomDense,
    /// Random signs on `z^{2^k}`, `2^k <= max_degree`, random length.
    RandomLacunary,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RandomDense => "random-dense",
            Family::RandomLacunary => "random-lacunary",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-dense" => Ok(Family::RandomDense),
            "random-lacunary" => Ok(Family::RandomLacunary),
            other => Err(Error::InvalidParameter(format!("unknown family {other}"))),
        }
    }
}

impl Family {
    pub fn sample<T: Real>(&self, max_degree: usize, rng: &mut ChaCha8Rng) -> ScalarPoly<T> {
        use rand::Rng;
        match self {
            Family::RandomDense => {
                let d = rng.random_range(1..=max_degree.max(1));
                ScalarPoly::random_dense(d, rng)
            }
            Family::RandomLacunary => {
                let top = (usize::BITS - 1 - max_degree.max(2).leading_zeros()) as usize;
                let terms = rng.random_range(1..=top);
                ScalarPoly::random_lacunary(terms, rng)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeTrial {
    pub trial: usize,
    pub degree: usize,
    pub sup_norm: f64,
    pub full_norm: f64,
    pub offdiag_norm: f64,
    pub ratio: f64,
    pub offdiag_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub m: usize,
    pub eps: f64,
    pub family: Family,
    pub sup_ratio: f64,
    pub sup_offdiag_ratio: f64,
    /// Coefficients `(re, im)` of the polynomial attaining `sup_ratio`.
    pub argmax: Vec<(f64, f64)>,
    pub trials: Vec<ProbeTrial>,
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    pub trials: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 200,
            max_degree: 256,
            seed: 1,
            tol: 1e-9,
        }
    }
}

/// Ratios `||p(T_m)|| / ||p||_∞` and `eps ||Γ p'(S_m)|| / ||p||_∞` over random `p`.
pub fn pb_probe<T: Real>(m: usize, eps: T, family: Family, cfg: &ProbeConfig) -> Result<ProbeReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let tol = T::lit(cfg.tol);
    crate::hardy::HardyOperator::<T>::pisier(m, eps)?;
    let family_tag = match family {
        Family::RandomDense => 0u64,
        Family::RandomLacunary => 1u64,
    };
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let stream = derive_seed(cfg.seed, (family_tag << 32) | t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let p: ScalarPoly<T> = family.sample(cfg.max_degree, &mut rng);
            let sup = poly_sup_norm(&p, tol)?;
            let full = spectral_norm(&BlockPolyOperator::new(m, eps, &p)?, tol, MAX_ITER, stream ^ 1)?;
            let off = spectral_norm(&OffDiagonalOperator::new(m, eps, &p)?, tol, MAX_ITER, stream ^ 2)?;
            let (sup, full, off) = (sup.as_f64(), full.value.as_f64(), off.value.as_f64());
            let ratio = |x: f64| if sup > 0.0 { x / sup } else { 0.0 };
            Ok((
                ProbeTrial {
                    trial: t,
                    degree: p.degree().unwrap_or(0),
                    sup_norm: sup,
                    full_norm: full,
                    offdiag_norm: off,
                    ratio: ratio(full),
                    offdiag_ratio: ratio(off),
                },
                p,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, (tr, _)) in results.iter().enumerate() {
        if tr.ratio > results[best].0.ratio {
            best = i;
        }
    }
    let sup_offdiag_ratio = results.iter().map(|r| r.0.offdiag_ratio).fold(0.0, f64::max);
    Ok(ProbeReport {
        m,
        eps: eps.as_f64(),
        family,
        sup_ratio: results[best].0.ratio,
        sup_offdiag_ratio,
        argmax: results[best].1.to_pairs(),
        trials: results.into_iter().map(|r| r.0).collect(),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundRow {
    pub m: usize,
    pub dim: usize,
    pub eps: f64,
    pub pb_probe_sup: f64,
    pub pb_paper_bound: f64,
    pub sb_lower: f64,
    pub bourgain_upper: f64,
}

impl BoundRow {
    /// `sb_lower <= pb_probe_sup^4 log(dim)`.
    pub fn consistent(&self) -> bool {
        self.sb_lower <= self.bourgain_upper
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundTable {
    pub k: f64,
    pub c_obs: f64,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(BoundRow::consistent)
    }
}

/// One row per `m` with `eps = (K - 1) / c_obs`. The probe supremum is the
/// larger of the two families' suprema.
pub fn bound_table(m_list: &[usize], k: f64, c_obs: f64, probe: &ProbeConfig) -> Result<BoundTable> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("K must exceed 1, got {k}")));
    }
    if !(c_obs > 0.0) || !c_obs.is_finite() {
        return Err(Error::InvalidParameter(format!("c_obs must be positive, got {c_obs}")));
    }
    let eps = (k - 1.0) / c_obs;
    let rows = m_list
        .iter()
        .map(|&m| {
            let dense = pb_probe::<f64>(m, eps, Family::RandomDense, probe)?;
            let lac = pb_probe::<f64>(m, eps, Family::RandomLacunary, probe)?;
            let sup = dense.sup_ratio.max(lac.sup_ratio);
            let dim = 2 * half_dim(m);
            Ok(BoundRow {
                m,
                dim,
                eps,
                pb_probe_sup: sup,
                pb_paper_bound: eps * c_obs + 1.0,
                sb_lower: eps * (m as f64).sqrt() / 2.0,
                bourgain_upper: sup.powi(4) * (dim as f64).ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundTable { k, c_obs, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::functional::block_poly_apply;
    use crate::dense::{dense_spectral_norm, materialize_operator};
    use crate::hardy::PisierState;
    use crate::scalar::max_abs_diff;

    #[test]
    fn guard_refuses_m8() {
        assert!(check_tensor_guard(7).is_ok());
        assert!(matches!(check_tensor_guard(8), Err(Error::ResourceGuard { .. })));
        assert!(matches!(
            LacunaryTensorOperator::<f64>::new(8, 1.0),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn tensor_operator_matches_leg_by_leg() {
        // Compare against block_poly_apply on each extra-leg column followed by dense C_k.
        let m = 2;
        let op = LacunaryTensorOperator::<f64>::new(m, 0.8).unwrap();
        let v = crate::calculus::spectral::random_vector::<f64>(tensor_dim(m), 5);
        let out = op.apply(&v);
        let side = 1 << m;
        let states = 2 * half_dim(m);
        let mut expect = vec![czero::<f64>(); v.len()];
        for k in 1..=m {
            let ck = crate::car::car_generator::<f64>(k, m).unwrap();
            let p = ScalarPoly::monomial(1 << k, cx(1.0, 0.0));
            let mut cols = vec![];
            for r in 0..side {
                let col: Vec<_> = (0..states).map(|s| v[s * side + r]).collect();
                let st = PisierState::from_slice(m, &col).unwrap();
                cols.push(block_poly_apply(0.8, &p, &st).unwrap().to_vec());
            }
            for s in 0..states {
                for r in 0..side {
                    for c in 0..side {
                        expect[s * side + r] += cols[c][s] * ck[(r, c)];
                    }
                }
            }
        }
        assert!(max_abs_diff(&out, &expect) < 1e-12);
        let x = crate::calculus::spectral::random_vector::<f64>(tensor_dim(m), 6);
        let lhs = crate::scalar::inner(&op.apply(&v), &x);
        let rhs = crate::scalar::inner(&v, &op.apply_adjoint(&x));
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn lacunary_norms_m1() {
        let r = lacunary_test_norms::<f64>(1, 1.0, 1e-10, 3).unwrap();
        assert!((r.p_sup - 1.0).abs() < 1e-8);
        assert!((r.compression_norm.value - 1.0).abs() < 1e-8);
        assert!(r.compression_norm.certified_lower >= 0.5);
        assert!(r.pt_norm.certified_lower >= r.compression_norm.certified_lower - 1e-12);
        let dense = materialize_operator(&LacunaryTensorOperator::<f64>::new(1, 1.0).unwrap(), false, 64).unwrap();
        assert!((dense_spectral_norm(&dense) - r.pt_norm.value).abs() < 1e-7);
    }

    #[test]
    fn probe_eps_zero_respects_von_neumann() {
        let cfg = ProbeConfig {
            trials: 12,
            max_degree: 32,
            seed: 4,
            tol: 1e-10,
        };
        for fam in [Family::RandomDense, Family::RandomLacunary] {
            let r = pb_probe::<f64>(2, 0.0, fam, &cfg).unwrap();
            assert!(r.sup_ratio <= 1.0 + 1e-6, "{fam}: {}", r.sup_ratio);
            assert_eq!(r.sup_offdiag_ratio, 0.0);
        }
    }

    #[test]
    fn probe_is_deterministic() {
        let cfg = ProbeConfig {
            trials: 6,
            max_degree: 16,
            seed: 9,
            tol: 1e-10,
        };
        let a = pb_probe::<f64>(2, 1.0, Family::RandomDense, &cfg).unwrap();
        let b = pb_probe::<f64>(2, 1.0, Family::RandomDense, &cfg).unwrap();
        assert_eq!(a.sup_ratio, b.sup_ratio);
        assert_eq!(a.argmax, b.argmax);
    }

    #[test]
    fn bound_table_rows() {
        let cfg = ProbeConfig {
            trials: 4,
            max_degree: 16,
            seed: 2,
            tol: 1e-9,
        };
        let t = bound_table(&[1, 2], 2.0, 1.5, &cfg).unwrap();
        assert_eq!(t.rows[0].dim, 8);
        for r in &t.rows {
            let expect = (2.0 - 1.0) * (r.m as f64).sqrt() / (2.0 * 1.5);
            assert!((r.sb_lower - expect).abs() < 1e-15);
            assert!((r.pb_paper_bound - 2.0).abs() < 1e-15);
        }
        assert!(t.consistent());
        assert!(bound_table(&[1], 1.0, 1.0, &cfg).is_err());
    }
}
