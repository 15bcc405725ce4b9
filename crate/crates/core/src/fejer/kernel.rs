//! Fejér kernels `K_k` with triangular coefficients `2^{-k} (2^k - |n|)`,
//! `|n| <= 2^k`, and the quadrature-based kernel estimates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fejer::series::FourierSeries;
use crate::scalar::Real;

#[inline]
fn pow2<T: Real>(k: usize) -> T {
    T::lit(2.0).powi(k as i32)
}

/// Multiplier `max(0, 1 - |ν| / 2^k)` of the section `T_k`.
pub fn fejer_weight<T: Real>(k: usize, nu: i64) -> T {
    let w = T::one() - T::lit(nu.unsigned_abs() as f64) / pow2::<T>(k);
    w.max(T::zero())
}

/// Coefficients of `K_k` for `n = -2^k..=2^k` (index `n + 2^k`).
pub fn fejer_kernel_coeffs<T: Real>(k: usize) -> Vec<T> {
    let top = 1i64 << k;
    (-top..=top).map(|n| fejer_weight(k, n)).collect()
}

/// Closed form `2^{-k} (sin(2^{k-1} θ) / sin(θ/2))^2`, equal to `2^k` at `θ ≡ 0`.
pub fn fejer_kernel<T: Real>(k: usize, theta: T) -> T {
    let s = (theta / T::lit(2.0)).sin();
    let scale = pow2::<T>(k);
    if s.abs() < T::lit(1e-9) {
        // Removable singularity: value 2^k, flat to second order.
        return scale;
    }
    let a = pow2::<T>(k) / T::lit(2.0);
    let u = (a * theta).sin() / s;
    u * u / scale
}

/// `K_k(θ)` summed from the coefficient form.
pub fn fejer_kernel_series<T: Real>(k: usize, theta: T) -> T {
    let top = 1i64 << k;
    let mut acc = fejer_weight::<T>(k, 0);
    for n in 1..=top {
        acc += T::lit(2.0) * fejer_weight::<T>(k, n) * (T::lit(n as f64) * theta).cos();
    }
    acc
}

/// `dK_k/dθ` from the closed form.
pub fn fejer_kernel_derivative<T: Real>(k: usize, theta: T) -> T {
    let half = theta / T::lit(2.0);
    let s = half.sin();
    if s.abs() < T::lit(1e-9) {
        return T::zero();
    }
    let a = pow2::<T>(k) / T::lit(2.0);
    let u = (a * theta).sin() / s;
    let du = (a * (a * theta).cos() * s - T::lit(0.5) * (a * theta).sin() * half.cos()) / (s * s);
    T::lit(2.0) * u * du / pow2::<T>(k)
}

/// Section `T_k f = f * K_k`: multiply frequency `ν` by `max(0, 1 - |ν|/2^k)`.
pub fn fejer_section_apply<T: Real>(k: usize, f: &FourierSeries<T>) -> FourierSeries<T> {
    f.map_coeffs(|nu, c| c.scale(fejer_weight(k, nu)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelBounds {
    pub k: usize,
    pub grid: usize,
    /// `(1/2π) ∫ |K_k|`.
    pub l1_norm: f64,
    /// `(1/2π) ∫ |K_k'|`.
    pub deriv_l1: f64,
}

/// Trapezoid quadrature of `|K_k|` and `|K_k'|` on `n` uniform points
/// (`n >= 8 * 2^k`, a power of two).
pub fn fejer_kernel_bounds<T: Real>(k: usize, n: usize) -> Result<KernelBounds> {
    let required = 8usize << k;
    if n < required || !n.is_power_of_two() {
        return Err(Error::GridTooCoarse { n, required });
    }
    let h = T::TAU() / T::from_usize_lossy(n);
    let (mut l1, mut d1) = (T::zero(), T::zero());
    for j in 0..n {
        let theta = h * T::from_usize_lossy(j);
        l1 += fejer_kernel(k, theta).abs();
        d1 += fejer_kernel_derivative(k, theta).abs();
    }
    let nn = T::from_usize_lossy(n);
    Ok(KernelBounds {
        k,
        grid: n,
        l1_norm: (l1 / nn).as_f64(),
        deriv_l1: (d1 / nn).as_f64(),
    })
}

/// `(1/2π) ∫_{δ/2}^{2π - δ/2} K_k`, integrated term by term from the
/// coefficient form (exact up to rounding).
pub fn fejer_tail<T: Real>(k: usize, delta: T) -> T {
    let a = delta / T::lit(2.0);
    let top = 1i64 << k;
    let mut central = a / T::PI();
    for n in 1..=top {
        let nf = T::lit(n as f64);
        central += T::lit(2.0) / T::PI() * fejer_weight::<T>(k, n) * (nf * a).sin() / nf;
    }
    T::one() - central
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn zero_coefficient_is_one() {
        for k in 1..8 {
            assert_eq!(fejer_kernel_coeffs::<f64>(k)[1 << k], 1.0);
        }
    }

    #[test]
    fn value_at_zero() {
        for k in 1..10 {
            assert_eq!(fejer_kernel::<f64>(k, 0.0), (1u64 << k) as f64);
            let sum: f64 = fejer_kernel_coeffs::<f64>(k).iter().sum();
            assert!((sum - (1u64 << k) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn value_at_pi_both_forms() {
        for k in 1..12 {
            let a = fejer_kernel::<f64>(k, std::f64::consts::PI);
            let top = 1i64 << k;
            let b: f64 = (-top..=top)
                .map(|n| fejer_weight::<f64>(k, n) * if n % 2 == 0 { 1.0 } else { -1.0 })
                .sum();
            assert!((a - b).abs() < 1e-12, "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn section_examples() {
        let c = FourierSeries::from_coeffs(0, vec![cx(2.0, 1.0)]);
        assert_eq!(fejer_section_apply(3, &c), c);
        let hi = FourierSeries::from_coeffs(8, vec![cx(1.0, 0.0), cx(1.0, 0.0)]);
        assert!(fejer_section_apply(3, &hi).is_zero());
        let half = FourierSeries::from_coeffs(4, vec![cx(1.0, 0.0)]);
        assert_eq!(fejer_section_apply(3, &half).get(4), cx(0.5, 0.0));
    }

    #[test]
    fn grid_guard() {
        assert!(matches!(
            fejer_kernel_bounds::<f64>(4, 64),
            Err(Error::GridTooCoarse { required: 128, .. })
        ));
    }

    #[test]
    fn tail_matches_fine_quadrature() {
        // Composite Simpson on the closed form as an independent oracle.
        for (k, delta) in [(4usize, 0.25f64), (6, 0.05), (5, 1.0)] {
            let a = delta / 2.0;
            let n = 200_000;
            let h = (std::f64::consts::TAU - 2.0 * a) / n as f64;
            let mut s = fejer_kernel::<f64>(k, a) + fejer_kernel::<f64>(k, std::f64::consts::TAU - a);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * fejer_kernel::<f64>(k, a + i as f64 * h);
            }
            let simpson = s * h / 3.0 / std::f64::consts::TAU;
            assert!((simpson - fejer_tail::<f64>(k, delta)).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for k in [3usize, 6] {
            for theta in [0.1f64, 0.7, 2.0, -1.3] {
                let h = 1e-6;
                let fd = (fejer_kernel::<f64>(k, theta + h) - fejer_kernel::<f64>(k, theta - h)) / (2.0 * h);
                let d = fejer_kernel_derivative::<f64>(k, theta);
                assert!((fd - d).abs() < 1e-5 * (1.0 + d.abs()));
            }
        }
    }
}
