//! Finitely supported Fourier series and vector-valued trigonometric polynomials.

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{czero, Cx, Real};

/// `sum_ν c_ν e^{iνθ}` with support in `offset..offset + len`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries<T: Real> {
    offset: i64,
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> FourierSeries<T> {
    pub fn zero() -> Self {
        FourierSeries { offset: 0, coeffs: vec![] }
    }

    /// Coefficient `coeffs[i]` sits at frequency `offset + i`.
    pub fn from_coeffs(offset: i64, coeffs: Vec<Cx<T>>) -> Self {
        FourierSeries { offset, coeffs }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn get(&self, nu: i64) -> Cx<T> {
        let i = nu - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            czero()
        } else {
            self.coeffs[i as usize]
        }
    }

    /// `(frequency, coefficient)` pairs of the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Cx<T>)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.offset + i as i64, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == czero())
    }

    /// Largest `|ν|` carrying a nonzero coefficient (0 if none).
    pub fn max_abs_freq(&self) -> u64 {
        self.iter()
            .filter(|(_, c)| *c != czero())
            .map(|(nu, _)| nu.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn map_coeffs<F: Fn(i64, Cx<T>) -> Cx<T>>(&self, f: F) -> Self {
        FourierSeries {
            offset: self.offset,
            coeffs: self.iter().map(|(nu, c)| f(nu, c)).collect(),
        }
    }

    /// Multiply by `e^{isθ}`.
    pub fn shift(&self, s: i64) -> Self {
        FourierSeries {
            offset: self.offset + s,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Keep frequencies `<= 0` (the conjugate-analytic part, constants included).
    pub fn project_nonpositive(&self) -> Self {
        let keep = (0..self.coeffs.len())
            .take_while(|&i| self.offset + i as i64 <= 0)
            .count();
        FourierSeries {
            offset: self.offset,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Add `c` to the constant term.
    pub fn add_constant(&self, c: Cx<T>) -> Self {
        let lo = self.offset.min(0);
        let hi = (self.offset + self.coeffs.len() as i64).max(1);
        let mut coeffs: Vec<Cx<T>> = (lo..hi).map(|nu| self.get(nu)).collect();
        coeffs[(-lo) as usize] += c;
        FourierSeries { offset: lo, coeffs }
    }

    /// Values at `θ_j = 2πj/n` by inverse FFT; requires `n > 2 max|ν|`.
    pub fn sample(&self, n: usize, planner: &mut FftPlanner<T>) -> Vec<Cx<T>> {
        let mut buf = vec![czero(); n];
        for (nu, c) in self.iter() {
            buf[nu.rem_euclid(n as i64) as usize] += c;
        }
        planner.plan_fft_inverse(n).process(&mut buf);
        buf
    }

    /// Direct evaluation at `θ`.
    pub fn eval(&self, theta: T) -> Cx<T> {
        self.iter().fold(czero(), |acc, (nu, c)| {
            let a = theta * T::lit(nu as f64);
            acc + c * Cx::new(a.cos(), a.sin())
        })
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.coeffs.len() as i64).max(other.offset + other.coeffs.len() as i64);
        (lo..hi).fold(T::zero(), |acc, nu| acc.max((self.get(nu) - other.get(nu)).norm()))
    }
}

/// `sum_{k=1}^{kmax} f_k(θ) e_k`, component `k` at index `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigVector<T: Real> {
    components: Vec<FourierSeries<T>>,
}

impl<T: Real> TrigVector<T> {
    pub fn new(components: Vec<FourierSeries<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("trigonometric vector needs at least one component".into()));
        }
        Ok(TrigVector { components })
    }

    pub fn kmax(&self) -> usize {
        self.components.len()
    }

    /// Component `k` (1-based).
    pub fn component(&self, k: usize) -> &FourierSeries<T> {
        &self.components[k - 1]
    }

    pub fn components(&self) -> &[FourierSeries<T>] {
        &self.components
    }

    pub fn max_abs_freq(&self) -> u64 {
        self.components.iter().map(FourierSeries::max_abs_freq).max().unwrap_or(0)
    }

    /// Coefficient-level distance over all components.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.kmax(), other.kmax());
        self.components
            .iter()
            .zip(&other.components)
            .fold(T::zero(), |acc, (a, b)| acc.max(a.max_abs_diff(b)))
    }

    /// Add a constant to component `k` (1-based).
    pub fn with_constant(&self, k: usize, c: Cx<T>) -> Self {
        let mut out = self.clone();
        out.components[k - 1] = out.components[k - 1].add_constant(c);
        out
    }
}
