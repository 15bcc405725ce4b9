//! Canonical anticommutation generators on the `n`-fold tensor power of `C^2`.
//!
//! `C_k = E ⊗ ... ⊗ E ⊗ D ⊗ I ⊗ ... ⊗ I` with `D = [[0, 1], [0, 0]]`,
//! `E = diag(1, -1)` and `D` in slot `k`. Basis ordering is first-factor-major:
//! slot `f` (1-based) is bit `n - f` of the basis index.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::spectral::{spectral_norm, LinearOperator, NormEstimate};
use crate::dense::DEFAULT_DENSE_CAP;
use crate::error::{Error, Result};
use crate::scalar::{czero, Cx, Real};

/// Largest generator count for which `2^n` still indexes in `usize` comfortably.
pub const MAX_GENERATORS: usize = 30;

const NORM_MAX_ITER: usize = 500;
const NORM_SEED: u64 = 0x00C0_FFEE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CarSystem {
    n: usize,
    dim: usize,
    dense_cap: usize,
}

impl CarSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(Error::InvalidParameter(format!(
                "generator count must be in 1..={MAX_GENERATORS}, got {n}"
            )));
        }
        Ok(CarSystem {
            n,
            dim: 1 << n,
            dense_cap: DEFAULT_DENSE_CAP,
        })
    }

    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dense_cap(&self) -> usize {
        self.dense_cap
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n {
            Err(Error::IndexOutOfRange { k, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Dense matrix of `C_k`, built as an explicit Kronecker product.
    pub fn generator<T: Real>(&self, k: usize) -> Result<DMatrix<T>> {
        self.check_index(k)?;
        if self.dim > self.dense_cap {
            return Err(Error::DenseCapExceeded {
                dim: self.dim,
                cap: self.dense_cap,
            });
        }
        let (o, l) = (T::zero(), T::one());
        let d = DMatrix::from_row_slice(2, 2, &[o, l, o, o]);
        let e = DMatrix::from_row_slice(2, 2, &[l, o, o, -l]);
        let id = DMatrix::<T>::identity(2, 2);
        let mut acc = DMatrix::<T>::identity(1, 1);
        for slot in 1..=self.n {
            let factor = match slot.cmp(&k) {
                std::cmp::Ordering::Less => &e,
                std::cmp::Ordering::Equal => &d,
                std::cmp::Ordering::Greater => &id,
            };
            acc = acc.kronecker(factor);
        }
        Ok(acc)
    }

    /// `C_k v` (or `C_k^* v`) without materializing the matrix.
    pub fn apply<T: Real>(&self, k: usize, v: &[Cx<T>], adjoint: bool) -> Result<Vec<Cx<T>>> {
        self.check_index(k)?;
        if v.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut out = vec![czero(); self.dim];
        apply_block(self.n, k, v, &mut out, 1, adjoint, T::one());
        Ok(out)
    }
}

/// `dst += scale * (C_k or C_k^*) src`, where both buffers hold `2^n` rows of
/// `inner` contiguous entries and the generator acts on the row index.
pub(crate) fn apply_block<T: Real>(
    n: usize,
    k: usize,
    src: &[Cx<T>],
    dst: &mut [Cx<T>],
    inner: usize,
    adjoint: bool,
    scale: T,
) {
    debug_assert!(k >= 1 && k <= n);
    let dim = 1usize << n;
    debug_assert_eq!(src.len(), dim * inner);
    debug_assert_eq!(dst.len(), dim * inner);
    let bit = 1usize << (n - k);
    let high_shift = n - k + 1;
    for row in 0..dim {
        let has_bit = row & bit != 0;
        // D lowers slot k (row has the bit clear); D^* raises it.
        if has_bit != adjoint {
            continue;
        }
        let from = row ^ bit;
        let parity = if high_shift >= usize::BITS as usize {
            0
        } else {
            (row >> high_shift).count_ones() & 1
        };
        let s = if parity == 0 { scale } else { -scale };
        let (d, sblk) = (
            &mut dst[row * inner..(row + 1) * inner],
            &src[from * inner..(from + 1) * inner],
        );
        for (y, x) in d.iter_mut().zip(sblk) {
            *y += x.scale(s);
        }
    }
}

/// Dense `C_k` for `n` generators, refused when `2^n` exceeds the default cap.
pub fn car_generator<T: Real>(k: usize, n: usize) -> Result<DMatrix<T>> {
    CarSystem::new(n)?.generator(k)
}

pub fn car_apply<T: Real>(k: usize, n: usize, v: &[Cx<T>], adjoint: bool) -> Result<Vec<Cx<T>>> {
    CarSystem::new(n)?.apply(k, v, adjoint)
}

/// `R = sum_k alpha_k C_k` on the `2^n`-dimensional fiber.
#[derive(Debug, Clone)]
pub struct CarCombination<T: Real> {
    n: usize,
    alpha: Vec<Cx<T>>,
}

impl<T: Real> CarCombination<T> {
    pub fn new(alpha: Vec<Cx<T>>, n: usize) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        CarSystem::new(n)?;
        if alpha.len() > n {
            return Err(Error::IndexOutOfRange { k: alpha.len(), n });
        }
        Ok(CarCombination { n, alpha })
    }

    pub fn alpha(&self) -> &[Cx<T>] {
        &self.alpha
    }
}

impl<T: Real> LinearOperator<T> for CarCombination<T> {
    fn dim_in(&self) -> usize {
        1 << self.n
    }
    fn dim_out(&self) -> usize {
        1 << self.n
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        let mut out = vec![czero(); x.len()];
        let mut tmp = vec![czero(); x.len()];
        for (i, a) in self.alpha.iter().enumerate() {
            if *a == czero() {
                continue;
            }
            tmp.iter_mut().for_each(|t| *t = czero());
            apply_block(self.n, i + 1, x, &mut tmp, 1, false, T::one());
            for (o, t) in out.iter_mut().zip(&tmp) {
                *o += t * a;
            }
        }
        out
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        let mut out = vec![czero(); y.len()];
        let mut tmp = vec![czero(); y.len()];
        for (i, a) in self.alpha.iter().enumerate() {
            if *a == czero() {
                continue;
            }
            tmp.iter_mut().for_each(|t| *t = czero());
            apply_block(self.n, i + 1, y, &mut tmp, 1, true, T::one());
            let ac = a.conj();
            for (o, t) in out.iter_mut().zip(&tmp) {
                *o += t * ac;
            }
        }
        out
    }
}

/// Spectral norm of `sum_k alpha_k C_k`; the exact value is `(sum |alpha_k|^2)^(1/2)`.
pub fn car_combination_norm<T: Real>(alpha: &[Cx<T>], n: usize, tol: T) -> Result<NormEstimate<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidTolerance(tol.as_f64()));
    }
    let op = CarCombination::new(alpha.to_vec(), n)?;
    spectral_norm(&op, tol, NORM_MAX_ITER, NORM_SEED)
}

/// Which of the two defining relations a residual belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `C_i C_j + C_j C_i = 0`
    Anticommutator,
    /// `C_i^* C_j + C_j C_i^* = δ_ij I`
    Canonical,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Relation::Anticommutator => write!(f, "C_i C_j + C_j C_i = 0"),
            Relation::Canonical => write!(f, "C_i^* C_j + C_j C_i^* = delta_ij I"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub dense: bool,
    /// Basis vectors probed (all of them on the dense path).
    pub probes: usize,
    pub anticommutator_max: f64,
    pub canonical_max: f64,
    /// Pair `(i, j)` (1-based) and relation with the largest residual, if any is nonzero.
    pub worst: Option<(usize, usize, Relation)>,
}

impl RelationReport {
    pub fn exact(&self) -> bool {
        self.anticommutator_max == 0.0 && self.canonical_max == 0.0
    }
}

fn mul_skip_zeros(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (r, inner) = a.shape();
    let c = b.ncols();
    let mut out = DMatrix::zeros(r, c);
    for l in 0..inner {
        for i in 0..r {
            let ail = a[(i, l)];
            if ail == 0.0 {
                continue;
            }
            for j in 0..c {
                let blj = b[(l, j)];
                if blj != 0.0 {
                    out[(i, j)] += ail * blj;
                }
            }
        }
    }
    out
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Relation residuals over all pairs of the supplied dense generators.
pub fn relations_report_dense(gens: &[DMatrix<f64>]) -> RelationReport {
    let n = gens.len();
    let dim = gens.first().map_or(0, |g| g.nrows());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let residuals: Vec<(usize, usize, f64, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ci, cj) = (&gens[i], &gens[j]);
            let anti = mul_skip_zeros(ci, cj) + mul_skip_zeros(cj, ci);
            let cit = ci.transpose();
            let mut canon = mul_skip_zeros(&cit, cj) + mul_skip_zeros(cj, &cit);
            if i == j {
                for d in 0..dim {
                    canon[(d, d)] -= 1.0;
                }
            }
            (i + 1, j + 1, max_abs(&anti), max_abs(&canon))
        })
        .collect();
    summarize(n, true, dim, &residuals)
}

fn summarize(n: usize, dense: bool, probes: usize, residuals: &[(usize, usize, f64, f64)]) -> RelationReport {
    let mut report = RelationReport {
        n,
        dense,
        probes,
        anticommutator_max: 0.0,
        canonical_max: 0.0,
        worst: None,
    };
    let mut worst = 0.0;
    for &(i, j, a, c) in residuals {
        report.anticommutator_max = report.anticommutator_max.max(a);
        report.canonical_max = report.canonical_max.max(c);
        if a > worst {
            worst = a;
            report.worst = Some((i, j, Relation::Anticommutator));
        }
        if c > worst {
            worst = c;
            report.worst = Some((i, j, Relation::Canonical));
        }
    }
    report
}

/// Relation residuals evaluated matrix-free on the given basis vectors.
pub fn relations_report_sampled(n: usize, basis: &[usize]) -> Result<RelationReport> {
    let sys = CarSystem::new(n)?;
    for &b in basis {
        if b >= sys.dim() {
            return Err(Error::IndexOutOfRange { k: b, n: sys.dim() });
        }
    }
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    let residuals: Vec<(usize, usize, f64, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (mut anti, mut canon) = (0.0f64, 0.0f64);
            for &b in basis {
                let mut e = vec![czero::<f64>(); sys.dim()];
                e[b] = Cx::new(1.0, 0.0);
                let ap = |k: usize, v: &[Cx<f64>], adj: bool| sys.apply(k, v, adj).expect("checked");
                let a1 = ap(i, &ap(j, &e, false), false);
                let a2 = ap(j, &ap(i, &e, false), false);
                let c1 = ap(i, &ap(j, &e, false), true);
                let c2 = ap(j, &ap(i, &e, true), false);
                for r in 0..sys.dim() {
                    anti = anti.max((a1[r] + a2[r]).norm());
                    let delta = if i == j && r == b { 1.0 } else { 0.0 };
                    canon = canon.max((c1[r] + c2[r] - delta).norm());
                }
            }
            (i, j, anti, canon)
        })
        .collect::<Vec<_>>();
    Ok(summarize(n, false, basis.len(), &residuals))
}

/// Deterministic spread of basis indices: both ends plus a stride through the middle.
pub fn sample_basis(dim: usize, count: usize) -> Vec<usize> {
    if count >= dim {
        return (0..dim).collect();
    }
    let mut out: Vec<usize> = (0..count)
        .map(|s| ((s as u128 * (dim as u128 - 1)) / (count as u128 - 1).max(1)) as usize)
        .collect();
    out.dedup();
    out
}

/// Dense check when `2^n` fits under `dense_cap`, sampled matrix-free otherwise.
pub fn car_relations_report(n: usize) -> Result<RelationReport> {
    let sys = CarSystem::new(n)?;
    if sys.dim() <= sys.dense_cap() && n <= 8 {
        let gens = (1..=n)
            .map(|k| sys.generator::<f64>(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(relations_report_dense(&gens))
    } else {
        relations_report_sampled(n, &sample_basis(sys.dim(), 64))
    }
}

/// `sum_{k=1}^m C_k ⊗ C_k` on `C^{2^m} ⊗ C^{2^m}` (first leg most significant).
#[derive(Debug, Clone, Copy)]
pub struct PairSum {
    m: usize,
}

impl PairSum {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || 2 * m > MAX_GENERATORS {
            return Err(Error::InvalidParameter(format!("pair-sum size m={m} out of range")));
        }
        Ok(PairSum { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn run<T: Real>(&self, v: &[Cx<T>], adjoint: bool) -> Vec<Cx<T>> {
        let side = 1usize << self.m;
        let mut out = vec![czero(); v.len()];
        let mut tmp = vec![czero(); v.len()];
        for k in 1..=self.m {
            tmp.iter_mut().for_each(|t| *t = czero());
            // First leg: rows of length `side`.
            apply_block(self.m, k, v, &mut tmp, side, adjoint, T::one());
            // Second leg: within each contiguous row.
            for (src, dst) in tmp.chunks(side).zip(out.chunks_mut(side)) {
                apply_block(self.m, k, src, dst, 1, adjoint, T::one());
            }
        }
        out
    }

    /// Unit vector `2^{-m/2} sum_i e_i ⊗ e_i`.
    pub fn diagonal_witness<T: Real>(&self) -> Vec<Cx<T>> {
        let side = 1usize << self.m;
        let w = T::one() / T::from_usize_lossy(side).sqrt();
        let mut u = vec![czero(); side * side];
        for i in 0..side {
            u[i * side + i] = Cx::new(w, T::zero());
        }
        u
    }

    /// `<(sum C_k ⊗ C_k) u, u>` for the diagonal witness `u`; equals `m/2`.
    ///
    /// Evaluated on the unnormalized `sum_i e_i ⊗ e_i` and divided by `2^m`,
    /// so every intermediate is an integer and the result is exact.
    pub fn diagonal_pairing<T: Real>(&self) -> T {
        let side = 1usize << self.m;
        let mut u = vec![czero::<T>(); side * side];
        for i in 0..side {
            u[i * side + i] = Cx::new(T::one(), T::zero());
        }
        crate::scalar::inner(&self.apply(&u), &u).re / T::from_usize_lossy(side)
    }
}

impl<T: Real> LinearOperator<T> for PairSum {
    fn dim_in(&self) -> usize {
        1 << (2 * self.m)
    }
    fn dim_out(&self) -> usize {
        1 << (2 * self.m)
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(x, false)
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(y, true)
    }
}

pub fn car_pair_sum_apply<T: Real>(m: usize, v: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    let ps = PairSum::new(m)?;
    let dim = 1usize << (2 * m);
    if v.len() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    Ok(LinearOperator::<T>::apply(&ps, v))
}

/// Norm of the pair sum with the diagonal witness folded into the certificate.
pub fn pair_sum_norm<T: Real>(m: usize, tol: T, max_iter: usize, seed: u64) -> Result<NormEstimate<T>> {
    let ps = PairSum::new(m)?;
    let est = spectral_norm(&ps, tol, max_iter, seed)?;
    Ok(est.with_witness(&ps, &ps.diagonal_witness::<T>()))
}
