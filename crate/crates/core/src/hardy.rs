//! Truncated Hardy-space model.
//!
//! `H_m` holds analytic polynomials `F(z) = sum_{j < 2^m} z^j ξ_j` and `K_m`
//! conjugate-analytic ones `G(z) = sum_{j < 2^m} conj(z)^j η_j`, both with
//! coefficients in `C^{2^m}`. Storage is degree-major: coefficient `j`, fiber
//! entry `i` lives at `j * 2^m + i`, so `dim H_m = dim K_m = 4^m`.
//!
//! The projection onto `K^2` keeps every non-positive frequency, constants
//! included. Multiplication by `z` followed by that projection is therefore
//! a backward shift in `conj(z)`-degree that annihilates the constant term.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::calculus::spectral::{random_vector, LinearOperator};
use crate::car;
use crate::dense::{materialize_operator, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::scalar::{czero, Cx, Real};

/// Largest truncation parameter accepted anywhere (`dim = 2 * 4^m`).
pub const MAX_M: usize = 10;

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_M {
        Err(Error::InvalidParameter(format!("truncation m must be in 1..={MAX_M}, got {m}")))
    } else {
        Ok(())
    }
}

/// Number of stored degrees (and fiber dimension) for truncation `m`.
#[inline]
pub fn side(m: usize) -> usize {
    1 << m
}

/// `dim H_m = dim K_m = 4^m`.
#[inline]
pub fn half_dim(m: usize) -> usize {
    1 << (2 * m)
}

macro_rules! grid_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<T: Real> {
            m: usize,
            coeffs: Vec<Cx<T>>,
        }

        impl<T: Real> $name<T> {
            pub fn zeros(m: usize) -> Result<Self> {
                check_m(m)?;
                Ok($name { m, coeffs: vec![czero(); half_dim(m)] })
            }

            pub fn from_vec(m: usize, coeffs: Vec<Cx<T>>) -> Result<Self> {
                check_m(m)?;
                if coeffs.len() != half_dim(m) {
                    return Err(Error::LengthMismatch { expected: half_dim(m), got: coeffs.len() });
                }
                Ok($name { m, coeffs })
            }

            /// Seeded complex Gaussian coefficients.
            pub fn random(m: usize, seed: u64) -> Result<Self> {
                check_m(m)?;
                Ok($name { m, coeffs: random_vector(half_dim(m), seed) })
            }

            pub fn m(&self) -> usize {
                self.m
            }

            /// Vector coefficient of degree `j`.
            pub fn coeff(&self, j: usize) -> &[Cx<T>] {
                let s = side(self.m);
                &self.coeffs[j * s..(j + 1) * s]
            }

            pub fn coeff_mut(&mut self, j: usize) -> &mut [Cx<T>] {
                let s = side(self.m);
                &mut self.coeffs[j * s..(j + 1) * s]
            }

            pub fn as_slice(&self) -> &[Cx<T>] {
                &self.coeffs
            }

            pub fn into_vec(self) -> Vec<Cx<T>> {
                self.coeffs
            }

            /// Squared norm by Parseval: sum of squared coefficient moduli.
            pub fn norm_sqr(&self) -> T {
                self.coeffs.iter().fold(T::zero(), |a, z| a + z.norm_sqr())
            }
        }
    };
}

grid_type!(
    /// Element of `H_m`: analytic, degrees `0..2^m`.
    CoeffGrid
);
grid_type!(
    /// Element of `K_m`: conjugate-analytic, `conj(z)`-degrees `0..2^m`.
    ConjCoeffGrid
);

/// Element `(g, f)` of `K_m ⊕ H_m`, the space the block operator acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct PisierState<T: Real> {
    pub g: ConjCoeffGrid<T>,
    pub f: CoeffGrid<T>,
}

impl<T: Real> PisierState<T> {
    pub fn new(g: ConjCoeffGrid<T>, f: CoeffGrid<T>) -> Result<Self> {
        if g.m() != f.m() {
            return Err(Error::InvalidParameter(format!(
                "mismatched truncations {} and {}",
                g.m(),
                f.m()
            )));
        }
        Ok(PisierState { g, f })
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Ok(PisierState {
            g: ConjCoeffGrid::zeros(m)?,
            f: CoeffGrid::zeros(m)?,
        })
    }

    pub fn random(m: usize, seed: u64) -> Result<Self> {
        Ok(PisierState {
            g: ConjCoeffGrid::random(m, seed)?,
            f: CoeffGrid::random(m, seed ^ 0x9E37_79B9_7F4A_7C15)?,
        })
    }

    pub fn m(&self) -> usize {
        self.g.m()
    }

    /// Concatenation `[g; f]`.
    pub fn to_vec(&self) -> Vec<Cx<T>> {
        let mut v = Vec::with_capacity(2 * half_dim(self.m()));
        v.extend_from_slice(self.g.as_slice());
        v.extend_from_slice(self.f.as_slice());
        v
    }

    pub fn from_slice(m: usize, v: &[Cx<T>]) -> Result<Self> {
        check_m(m)?;
        let h = half_dim(m);
        if v.len() != 2 * h {
            return Err(Error::LengthMismatch {
                expected: 2 * h,
                got: v.len(),
            });
        }
        Ok(PisierState {
            g: ConjCoeffGrid::from_vec(m, v[..h].to_vec())?,
            f: CoeffGrid::from_vec(m, v[h..].to_vec())?,
        })
    }

    pub fn norm_sqr(&self) -> T {
        self.g.norm_sqr() + self.f.norm_sqr()
    }
}

/// Nonzero blocks of the truncated Hankel operator: output `conj(z)`-degree
/// `j`, input degree `n`, generator `k`, with `n + j = 2^k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HankelSchedule {
    m: usize,
    entries: Vec<(usize, usize, usize)>,
}

impl HankelSchedule {
    pub fn new(m: usize) -> Self {
        let entries = (1..=m)
            .flat_map(|k| {
                let top = (1usize << k) - 1;
                (0..=top).map(move |j| (j, top - j, k))
            })
            .collect();
        HankelSchedule { m, entries }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(usize, usize, usize)] {
        &self.entries
    }
}

/// Raw kernels on degree-major buffers whose fiber entries carry `inner`
/// passive trailing entries (1 for plain grids; `2^m` for the tensored
/// operand of the lacunary matrix polynomial).
pub(crate) mod kernels {
    use super::*;

    #[inline]
    fn block(m: usize, inner: usize) -> usize {
        side(m) * inner
    }

    /// `dst[j] += c * src[j - s]` (multiplication by `z^s`, truncated).
    pub fn shift_up<T: Real>(m: usize, inner: usize, src: &[Cx<T>], dst: &mut [Cx<T>], s: usize, c: Cx<T>) {
        let (b, n) = (block(m, inner), side(m));
        if s >= n {
            return;
        }
        for j in s..n {
            let (d, x) = (&mut dst[j * b..(j + 1) * b], &src[(j - s) * b..(j - s + 1) * b]);
            for (y, v) in d.iter_mut().zip(x) {
                *y += v * c;
            }
        }
    }

    /// `dst[j] += c * src[j + s]` (the `s`-th power of the backward shift).
    pub fn shift_down<T: Real>(m: usize, inner: usize, src: &[Cx<T>], dst: &mut [Cx<T>], s: usize, c: Cx<T>) {
        let (b, n) = (block(m, inner), side(m));
        if s >= n {
            return;
        }
        for j in 0..n - s {
            let (d, x) = (&mut dst[j * b..(j + 1) * b], &src[(j + s) * b..(j + s + 1) * b]);
            for (y, v) in d.iter_mut().zip(x) {
                *y += v * c;
            }
        }
    }

    /// `dst += scale * Γ src` (or `Γ^*` when `adjoint`).
    pub fn hankel<T: Real>(
        sched: &HankelSchedule,
        inner: usize,
        src: &[Cx<T>],
        dst: &mut [Cx<T>],
        adjoint: bool,
        scale: T,
    ) {
        let m = sched.m();
        let b = block(m, inner);
        for &(j, n, k) in sched.entries() {
            let w = scale / T::from_usize_lossy(1 << k);
            let (from, to) = if adjoint { (j, n) } else { (n, j) };
            car::apply_block(
                m,
                k,
                &src[from * b..(from + 1) * b],
                &mut dst[to * b..(to + 1) * b],
                inner,
                adjoint,
                w,
            );
        }
    }

    /// `dst += q(A) src` where `A` is `z` (`up`) or the backward shift, and
    /// `q` has the given coefficients (conjugated when `conj`).
    pub fn poly_shift<T: Real>(
        m: usize,
        inner: usize,
        coeffs: &[Cx<T>],
        src: &[Cx<T>],
        dst: &mut [Cx<T>],
        up: bool,
        conj: bool,
    ) {
        for (i, c) in coeffs.iter().enumerate().take(side(m)) {
            if *c == czero() {
                continue;
            }
            let c = if conj { c.conj() } else { *c };
            if up {
                shift_up(m, inner, src, dst, i, c);
            } else {
                shift_down(m, inner, src, dst, i, c);
            }
        }
    }

    /// `(g, f) -> (p(X)g + eps Γ p'(S) f, p(S) f)`, or its adjoint
    /// `(g, f) -> (p(X)^* g, eps p'(S)^* Γ^* g + p(S)^* f)`. `dp` holds the
    /// coefficients of `p'`. Outputs are overwritten.
    #[allow(clippy::too_many_arguments)]
    pub fn block_poly<T: Real>(
        sched: &HankelSchedule,
        inner: usize,
        eps: T,
        p: &[Cx<T>],
        dp: &[Cx<T>],
        g: &[Cx<T>],
        f: &[Cx<T>],
        g_out: &mut [Cx<T>],
        f_out: &mut [Cx<T>],
        adjoint: bool,
    ) {
        let m = sched.m();
        g_out.iter_mut().for_each(|x| *x = czero());
        f_out.iter_mut().for_each(|x| *x = czero());
        if !adjoint {
            poly_shift(m, inner, p, g, g_out, false, false);
            poly_shift(m, inner, p, f, f_out, true, false);
            if eps != T::zero() {
                let mut tmp = vec![czero(); f.len()];
                poly_shift(m, inner, dp, f, &mut tmp, true, false);
                hankel(sched, inner, &tmp, g_out, false, eps);
            }
        } else {
            poly_shift(m, inner, p, g, g_out, true, true);
            poly_shift(m, inner, p, f, f_out, false, true);
            if eps != T::zero() {
                let mut tmp = vec![czero(); g.len()];
                hankel(sched, inner, g, &mut tmp, true, eps);
                poly_shift(m, inner, dp, &tmp, f_out, false, true);
            }
        }
    }
}

fn one<T: Real>() -> Cx<T> {
    Cx::new(T::one(), T::zero())
}

/// Truncated forward shift `S_m`: `ξ_j <- ξ_{j-1}`, top coefficient dropped.
pub fn forward_shift_apply<T: Real>(f: &CoeffGrid<T>) -> CoeffGrid<T> {
    let mut out = vec![czero(); f.coeffs.len()];
    kernels::shift_up(f.m, 1, &f.coeffs, &mut out, 1, one());
    CoeffGrid { m: f.m, coeffs: out }
}

/// `X_m`: `η_j <- η_{j+1}`; the constant term is annihilated.
pub fn backward_shift_apply<T: Real>(g: &ConjCoeffGrid<T>) -> ConjCoeffGrid<T> {
    let mut out = vec![czero(); g.coeffs.len()];
    kernels::shift_down(g.m, 1, &g.coeffs, &mut out, 1, one());
    ConjCoeffGrid { m: g.m, coeffs: out }
}

/// `X_m^*`: forward shift in `conj(z)`-degree with top truncation.
pub fn backward_shift_adjoint_apply<T: Real>(g: &ConjCoeffGrid<T>) -> ConjCoeffGrid<T> {
    let mut out = vec![czero(); g.coeffs.len()];
    kernels::shift_up(g.m, 1, &g.coeffs, &mut out, 1, one());
    ConjCoeffGrid { m: g.m, coeffs: out }
}

/// `Γ_{Φ_m} f`: `(Γf)_j = sum_{k : 2^k - 1 >= j} 2^{-k} C_k ξ_{2^k - 1 - j}`.
pub fn hankel_apply<T: Real>(f: &CoeffGrid<T>) -> ConjCoeffGrid<T> {
    let sched = HankelSchedule::new(f.m);
    let mut out = vec![czero(); f.coeffs.len()];
    kernels::hankel(&sched, 1, &f.coeffs, &mut out, false, T::one());
    ConjCoeffGrid { m: f.m, coeffs: out }
}

/// `Γ_{Φ_m}^* g`.
pub fn hankel_adjoint_apply<T: Real>(g: &ConjCoeffGrid<T>) -> CoeffGrid<T> {
    let sched = HankelSchedule::new(g.m);
    let mut out = vec![czero(); g.coeffs.len()];
    kernels::hankel(&sched, 1, &g.coeffs, &mut out, true, T::one());
    CoeffGrid { m: g.m, coeffs: out }
}

/// `T_m (g, f) = (X_m g + eps Γ f, S_m f)`, or the adjoint block map.
pub fn pisier_apply<T: Real>(eps: T, s: &PisierState<T>, adjoint: bool) -> PisierState<T> {
    let op = HardyOperator::new(s.m(), eps, Block::T).expect("state has valid m");
    let v = s.to_vec();
    let out = if adjoint {
        op.apply_adjoint(&v)
    } else {
        op.apply(&v)
    };
    PisierState::from_slice(s.m(), &out).expect("dimension preserved")
}

/// Which operator of the model to act with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Block {
    /// Forward shift on `H_m`.
    S,
    /// Backward shift on `K_m`.
    X,
    /// Hankel operator `H_m -> K_m`.
    Gamma,
    /// Block operator on `K_m ⊕ H_m`.
    T,
}

/// Any of the model operators as a matrix-free [`LinearOperator`].
#[derive(Debug, Clone)]
pub struct HardyOperator<T: Real> {
    m: usize,
    eps: T,
    which: Block,
    sched: HankelSchedule,
}

impl<T: Real> HardyOperator<T> {
    pub fn new(m: usize, eps: T, which: Block) -> Result<Self> {
        check_m(m)?;
        if !(eps >= T::zero()) {
            return Err(Error::InvalidParameter(format!("eps must be nonnegative, got {eps}")));
        }
        Ok(HardyOperator {
            m,
            eps,
            which,
            sched: HankelSchedule::new(m),
        })
    }

    /// Shorthand for the block operator `T_m`.
    pub fn pisier(m: usize, eps: T) -> Result<Self> {
        Self::new(m, eps, Block::T)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    fn run(&self, x: &[Cx<T>], adjoint: bool) -> Vec<Cx<T>> {
        let (m, h) = (self.m, half_dim(self.m));
        let mut out = vec![czero(); x.len()];
        match self.which {
            Block::S => {
                if adjoint {
                    kernels::shift_down(m, 1, x, &mut out, 1, one());
                } else {
                    kernels::shift_up(m, 1, x, &mut out, 1, one());
                }
            }
            Block::X => {
                if adjoint {
                    kernels::shift_up(m, 1, x, &mut out, 1, one());
                } else {
                    kernels::shift_down(m, 1, x, &mut out, 1, one());
                }
            }
            Block::Gamma => kernels::hankel(&self.sched, 1, x, &mut out, adjoint, T::one()),
            Block::T => {
                let z = [czero(), one()];
                let dz = [one()];
                let (g, f) = x.split_at(h);
                let (go, fo) = out.split_at_mut(h);
                kernels::block_poly(&self.sched, 1, self.eps, &z, &dz, g, f, go, fo, adjoint);
            }
        }
        out
    }
}

impl<T: Real> LinearOperator<T> for HardyOperator<T> {
    fn dim_in(&self) -> usize {
        match self.which {
            Block::T => 2 * half_dim(self.m),
            _ => half_dim(self.m),
        }
    }
    fn dim_out(&self) -> usize {
        self.dim_in()
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(x, false)
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        self.run(y, true)
    }
}

/// Dense matrix of one model operator (or its adjoint), refused above the
/// default dense cap.
pub fn materialize<T: Real>(m: usize, eps: T, which: Block, adjoint: bool) -> Result<DMatrix<Cx<T>>> {
    materialize_with_cap(m, eps, which, adjoint, DEFAULT_DENSE_CAP)
}

pub fn materialize_with_cap<T: Real>(
    m: usize,
    eps: T,
    which: Block,
    adjoint: bool,
    cap: usize,
) -> Result<DMatrix<Cx<T>>> {
    let op = HardyOperator::new(m, eps, which)?;
    materialize_operator(&op, adjoint, cap)
}
