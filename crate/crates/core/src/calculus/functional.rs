//! Polynomial functional calculus on the block operator `T_m`.
//!
//! Two independent evaluation paths:
//! * [`operator_poly_apply`]: Horner's scheme over repeated applications of
//!   any operator;
//! * [`block_poly_apply`]: the closed block form
//!   `p(T_m) = [[p(X_m), eps Γ p'(S_m)], [0, p(S_m)]]` with every block
//!   evaluated by coefficient convolution on the nilpotent shifts.

use crate::calculus::poly::ScalarPoly;
use crate::calculus::spectral::LinearOperator;
use crate::error::{Error, Result};
use crate::hardy::{half_dim, kernels, HankelSchedule, PisierState};
use crate::scalar::{czero, Cx, Real};

/// `p(A) v` by Horner's scheme: `acc <- A acc + c_j v` from the top down.
pub fn operator_poly_apply<T: Real, A: LinearOperator<T> + ?Sized>(
    op: &A,
    p: &ScalarPoly<T>,
    v: &[Cx<T>],
) -> Result<Vec<Cx<T>>> {
    if op.dim_in() != op.dim_out() {
        return Err(Error::InvalidParameter("operator is not square".into()));
    }
    if v.len() != op.dim_in() {
        return Err(Error::LengthMismatch {
            expected: op.dim_in(),
            got: v.len(),
        });
    }
    let mut acc = vec![czero(); v.len()];
    for (j, c) in p.coeffs().iter().enumerate().rev() {
        if j + 1 < p.coeffs().len() {
            acc = op.apply(&acc);
        }
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x * c;
        }
    }
    Ok(acc)
}

/// `p(T_m)` for the block operator with coupling `eps`, matrix-free.
#[derive(Debug, Clone)]
pub struct BlockPolyOperator<T: Real> {
    m: usize,
    eps: T,
    /// Coefficients of `p` truncated below `2^m` (higher powers vanish).
    p: Vec<Cx<T>>,
    dp: Vec<Cx<T>>,
    sched: HankelSchedule,
}

impl<T: Real> BlockPolyOperator<T> {
    pub fn new(m: usize, eps: T, p: &ScalarPoly<T>) -> Result<Self> {
        crate::hardy::HardyOperator::<T>::new(m, eps, crate::hardy::Block::T)?;
        let cut = 1usize << m;
        let trunc = |c: &[Cx<T>]| c.iter().take(cut).copied().collect::<Vec<_>>();
        Ok(BlockPolyOperator {
            m,
            eps,
            p: trunc(p.coeffs()),
            dp: trunc(p.derivative().coeffs()),
            sched: HankelSchedule::new(m),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn run(&self, x: &[Cx<T>], adjoint: bool) -> Vec<Cx<T>> {
        let h = half_dim(self.m);
        let mut out = vec![czero(); x.len()];
        let (g, f) = x.split_at(h);
        let (go, fo) = out.split_at_mut(h);
        kernels::block_poly(&self.sched, 1, self.eps, &self.p, &self.dp, g, f, go, fo, adjoint);
        out
    }
}

impl<T: Real> LinearOperator<T> for BlockPolyOperator<T> {
    fn dim_in(&self) -> usize {
        2 * half_dim(self.m)
    }
    fn dim_out(&self) -> usize {
        2 * half_dim(self.m)
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(x, false)
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(y, true)
    }
}

/// Only the off-diagonal block `eps Γ p'(S_m) : H_m -> K_m`.
#[derive(Debug, Clone)]
pub struct OffDiagonalOperator<T: Real> {
    eps: T,
    dp: Vec<Cx<T>>,
    sched: HankelSchedule,
}

impl<T: Real> OffDiagonalOperator<T> {
    pub fn new(m: usize, eps: T, p: &ScalarPoly<T>) -> Result<Self> {
        let full = BlockPolyOperator::new(m, eps, p)?;
        Ok(OffDiagonalOperator {
            eps,
            dp: full.dp,
            sched: full.sched,
        })
    }
}

impl<T: Real> LinearOperator<T> for OffDiagonalOperator<T> {
    fn dim_in(&self) -> usize {
        half_dim(self.sched.m())
    }
    fn dim_out(&self) -> usize {
        half_dim(self.sched.m())
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        let m = self.sched.m();
        let mut tmp = vec![czero(); x.len()];
        kernels::poly_shift(m, 1, &self.dp, x, &mut tmp, true, false);
        let mut out = vec![czero(); x.len()];
        kernels::hankel(&self.sched, 1, &tmp, &mut out, false, self.eps);
        out
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        let m = self.sched.m();
        let mut tmp = vec![czero(); y.len()];
        kernels::hankel(&self.sched, 1, y, &mut tmp, true, self.eps);
        let mut out = vec![czero(); y.len()];
        kernels::poly_shift(m, 1, &self.dp, &tmp, &mut out, false, true);
        out
    }
}

/// `(g, f) -> (p(X_m) g + eps Γ(p'(S_m) f), p(S_m) f)`.
pub fn block_poly_apply<T: Real>(eps: T, p: &ScalarPoly<T>, s: &PisierState<T>) -> Result<PisierState<T>> {
    let op = BlockPolyOperator::new(s.m(), eps, p)?;
    PisierState::from_slice(s.m(), &op.apply(&s.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{forward_shift_apply, hankel_apply, Block, CoeffGrid, HardyOperator};
    use crate::scalar::{cx, max_abs_diff};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn horner_constant_and_shift() {
        let s = HardyOperator::<f64>::new(2, 0.0, Block::S).unwrap();
        let f = CoeffGrid::<f64>::random(2, 4).unwrap();
        let one = ScalarPoly::constant(cx(1.0, 0.0));
        assert_eq!(operator_poly_apply(&s, &one, f.as_slice()).unwrap(), f.as_slice());
        let z = ScalarPoly::monomial(1, cx(1.0, 0.0));
        assert_eq!(
            operator_poly_apply(&s, &z, f.as_slice()).unwrap(),
            forward_shift_apply(&f).as_slice()
        );
        assert!(operator_poly_apply(&s, &z, &[czero(); 3]).is_err());
    }

    #[test]
    fn monomial_offdiagonal_is_n_gamma_s_pow() {
        let m = 3;
        let n = 5;
        let f = CoeffGrid::<f64>::random(m, 8).unwrap();
        let s = PisierState::new(crate::hardy::ConjCoeffGrid::zeros(m).unwrap(), f.clone()).unwrap();
        let out = block_poly_apply(1.0, &ScalarPoly::monomial(n, cx(1.0, 0.0)), &s).unwrap();
        let mut sf = f;
        for _ in 0..n - 1 {
            sf = forward_shift_apply(&sf);
        }
        let expect: Vec<_> = hankel_apply(&sf).as_slice().iter().map(|z| z * n as f64).collect();
        assert!(max_abs_diff(out.g.as_slice(), &expect) < 1e-13);
    }

    #[test]
    fn constant_scales_state() {
        let s = PisierState::<f64>::random(2, 2).unwrap();
        let c = cx(0.5, -2.0);
        let out = block_poly_apply(1.0, &ScalarPoly::constant(c), &s).unwrap();
        let expect: Vec<_> = s.to_vec().iter().map(|z| z * c).collect();
        assert!(max_abs_diff(&out.to_vec(), &expect) < 1e-15);
    }

    #[test]
    fn block_path_matches_horner_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=2 {
            for eps in [0.0, 0.5, 1.0] {
                let t = HardyOperator::pisier(m, eps).unwrap();
                let p = ScalarPoly::<f64>::random_dense(4 << m, &mut rng);
                let s = PisierState::random(m, 10).unwrap();
                let a = operator_poly_apply(&t, &p, &s.to_vec()).unwrap();
                let b = block_poly_apply(eps, &p, &s).unwrap().to_vec();
                assert!(max_abs_diff(&a, &b) <= 1e-10);
            }
        }
    }

    #[test]
    fn offdiagonal_adjoint_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = ScalarPoly::<f64>::random_dense(9, &mut rng);
        let op = OffDiagonalOperator::new(2, 0.7, &p).unwrap();
        let x = crate::calculus::spectral::random_vector::<f64>(16, 1);
        let y = crate::calculus::spectral::random_vector::<f64>(16, 2);
        let lhs = crate::scalar::inner(&op.apply(&x), &y);
        let rhs = crate::scalar::inner(&x, &op.apply_adjoint(&y));
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
