//! Scalar and lacunary matrix polynomials.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::car::CarCombination;
use crate::error::Result;
use crate::scalar::{cx, czero, Cx, Real};

/// Complex-coefficient polynomial `c_0 + c_1 z + ... + c_d z^d`.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly<T: Real> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> ScalarPoly<T> {
    pub fn new(mut coeffs: Vec<Cx<T>>) -> Self {
        while coeffs.last() == Some(&czero()) {
            coeffs.pop();
        }
        ScalarPoly { coeffs }
    }

    pub fn zero() -> Self {
        ScalarPoly { coeffs: vec![] }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// `c z^n`.
    pub fn monomial(n: usize, c: Cx<T>) -> Self {
        let mut coeffs = vec![czero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `sum_{k=1}^{m} z^{2^k}`.
    pub fn lacunary_sum(m: usize) -> Self {
        let signs = vec![T::one(); m];
        Self::lacunary(&signs)
    }

    /// `sum_{k=1}^{len} s_k z^{2^k}`.
    pub fn lacunary(signs: &[T]) -> Self {
        if signs.is_empty() {
            return Self::zero();
        }
        let top = signs.len();
        let mut coeffs = vec![czero(); (1 << top) + 1];
        for (k, s) in signs.iter().enumerate() {
            coeffs[1 << (k + 1)] = cx(*s, T::zero());
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c.scale(T::from_usize_lossy(n)))
                .collect(),
        )
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, c| acc * z + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Complex Gaussian coefficients, exact degree `degree`.
    pub fn random_dense<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<Cx<T>> = (0..=degree)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                cx(T::lit(re), T::lit(im))
            })
            .collect();
        if coeffs[degree] == czero() {
            coeffs[degree] = cx(T::one(), T::zero());
        }
        Self::new(coeffs)
    }

    /// Random signs on `z^{2^k}`, `k = 1..=terms`.
    pub fn random_lacunary<R: Rng + ?Sized>(terms: usize, rng: &mut R) -> Self {
        let signs: Vec<T> = (0..terms)
            .map(|_| if rng.random::<bool>() { T::one() } else { -T::one() })
            .collect();
        Self::lacunary(&signs)
    }

    /// Coefficients as `(re, im)` pairs in `f64`, for reports.
    pub fn to_pairs(&self) -> Vec<(f64, f64)> {
        self.coeffs.iter().map(|c| (c.re.as_f64(), c.im.as_f64())).collect()
    }
}

/// `P(z) = sum_{k=1}^m z^{2^k} C_k` with `C_k` acting on `C^{2^m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LacunaryMatrixPoly {
    m: usize,
}

impl LacunaryMatrixPoly {
    pub fn new(m: usize) -> Self {
        LacunaryMatrixPoly { m }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(2^k, k)` for `k = 1..=m`.
    pub fn terms(&self) -> Vec<(usize, usize)> {
        (1..=self.m).map(|k| (1usize << k, k)).collect()
    }

    /// The matrix `P(z)` as a matrix-free operator.
    pub fn at<T: Real>(&self, z: Cx<T>) -> Result<CarCombination<T>> {
        let alpha = self.terms().iter().map(|&(e, _)| z.powu(e as u32)).collect();
        CarCombination::new(alpha, self.m)
    }
}
