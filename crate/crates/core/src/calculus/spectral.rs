//! Matrix-free spectral norm engine.
//!
//! Power iteration on `A*A`. Every iterate yields two quantities that are
//! true lower bounds on `||A||` for a unit vector `v`: `||Av||` and
//! `||A*Av|| / ||Av||` (the latter dominates the former by Cauchy-Schwarz).
//! The largest value seen is kept as `certified_lower`, so `>=` claims can
//! be made without trusting convergence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cx, norm2, Cx, Real};

/// A linear map between finite-dimensional complex spaces, applied without
/// materializing its matrix.
pub trait LinearOperator<T: Real>: Sync {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>>;
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>>;
}

impl<T: Real, A: LinearOperator<T> + ?Sized> LinearOperator<T> for &A {
    fn dim_in(&self) -> usize {
        (**self).dim_in()
    }
    fn dim_out(&self) -> usize {
        (**self).dim_out()
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        (**self).apply_adjoint(y)
    }
}

/// Result of a norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate<T> {
    pub value: T,
    /// Largest Rayleigh-type quotient observed; always `<= ||A||`.
    pub certified_lower: T,
    pub tol: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Real> NormEstimate<T> {
    pub fn exact(value: T) -> Self {
        NormEstimate {
            value,
            certified_lower: value,
            tol: T::zero(),
            iterations: 0,
            converged: true,
        }
    }

    /// Raise `certified_lower` with the quotient `||Av|| / ||v||` of an
    /// explicit witness vector.
    pub fn with_witness<A: LinearOperator<T> + ?Sized>(mut self, op: &A, v: &[Cx<T>]) -> Self {
        let nv = norm2(v);
        if nv > T::zero() {
            let q = norm2(&op.apply(v)) / nv;
            self.certified_lower = self.certified_lower.max(q);
            self.value = self.value.max(self.certified_lower);
        }
        self
    }
}

/// Consecutive iterations whose relative change must stay below `tol`.
pub const STABILIZATION_WINDOW: usize = 3;

/// Seeded standard complex Gaussian vector.
pub fn random_vector<T: Real>(dim: usize, seed: u64) -> Vec<Cx<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            cx(T::lit(re), T::lit(im))
        })
        .collect()
}

/// Spectral norm of `op` by power iteration from a seeded random start.
pub fn spectral_norm<T: Real, A: LinearOperator<T> + ?Sized>(
    op: &A,
    tol: T,
    max_iter: usize,
    seed: u64,
) -> Result<NormEstimate<T>> {
    let start = random_vector(op.dim_in(), seed);
    spectral_norm_from(op, start, tol, max_iter)
}

/// Power iteration from a caller-supplied start vector.
pub fn spectral_norm_from<T: Real, A: LinearOperator<T> + ?Sized>(
    op: &A,
    start: Vec<Cx<T>>,
    tol: T,
    max_iter: usize,
) -> Result<NormEstimate<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidTolerance(tol.as_f64()));
    }
    if start.len() != op.dim_in() {
        return Err(Error::LengthMismatch {
            expected: op.dim_in(),
            got: start.len(),
        });
    }
    let mut est = NormEstimate {
        value: T::zero(),
        certified_lower: T::zero(),
        tol,
        iterations: 0,
        converged: false,
    };
    if op.dim_in() == 0 || op.dim_out() == 0 {
        est.converged = true;
        return Ok(est);
    }
    let nv = norm2(&start);
    if nv == T::zero() {
        return Err(Error::InvalidParameter("zero start vector".into()));
    }
    let mut v: Vec<Cx<T>> = start.into_iter().map(|z| z / nv).collect();
    let mut prev = T::zero();
    let mut stable = 0;
    for it in 1..=max_iter {
        est.iterations = it;
        let w = op.apply(&v);
        let s = norm2(&w);
        est.certified_lower = est.certified_lower.max(s);
        if s == T::zero() {
            // v lies in the kernel; with a generic start this means A = 0.
            est.value = est.certified_lower;
            est.converged = true;
            return Ok(est);
        }
        let z = op.apply_adjoint(&w);
        let nz = norm2(&z);
        let q = nz / s;
        est.certified_lower = est.certified_lower.max(q);
        est.value = q;
        if (q - prev).abs() <= tol * q {
            stable += 1;
            if stable >= STABILIZATION_WINDOW {
                est.converged = true;
                break;
            }
        } else {
            stable = 0;
        }
        prev = q;
        v = z.into_iter().map(|x| x / nz).collect();
    }
    est.value = est.value.max(est.certified_lower);
    Ok(est)
}
