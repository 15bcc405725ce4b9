//! Fejér sections, the conjugate-analytic symbol, multiplier bounds and the
//! discrete BMO estimate of `sum_k T_k[p conj(z)^{2^k}] e_k` against `||p||_∞`.

pub mod bmo;
pub mod kernel;
pub mod multiplier;
pub mod series;
pub mod symbol;

pub use bmo::{bmo_norm, bmo_norm_with, Arc, ArcFamily, BmoReport};
pub use kernel::{
    fejer_kernel, fejer_kernel_bounds, fejer_kernel_coeffs, fejer_kernel_derivative, fejer_kernel_series,
    fejer_section_apply, fejer_tail, fejer_weight, KernelBounds,
};
pub use multiplier::{
    max_multiplier_mass, multiplier_mass, multiplier_mass_exact, multiplier_mass_scaled, within_seven_thirds,
};
pub use series::{FourierSeries, TrigVector};
pub use symbol::{symbol_lhs, symbol_rhs};

use crate::calculus::poly::ScalarPoly;
use crate::calculus::supnorm::poly_sup_norm;
use crate::error::Result;
use crate::scalar::Real;

/// Components beyond `ceil(log2 deg)` still carry the tail `2^{-k} z p'`;
/// this many extra components keep the neglected squared oscillation below
/// `(1/8)^2 / 3` of `||p||_∞^2`.
pub const KMAX_MARGIN: usize = 3;

/// Component count used for a polynomial of degree `deg`.
pub fn key_estimate_kmax(deg: usize) -> usize {
    let d = deg.max(1);
    (usize::BITS - (d - 1).leading_zeros()) as usize + KMAX_MARGIN
}

/// Smallest admissible grid for `kmax` components (`4 * 2^kmax`).
pub fn key_estimate_grid(kmax: usize) -> usize {
    4usize << kmax
}

/// `sqrt(bmo) / ||p||_∞` for the Fejér-section symbol of `p`.
pub fn key_estimate_ratio<T: Real>(p: &ScalarPoly<T>, kmax: usize, n: usize) -> Result<f64> {
    let sup = poly_sup_norm(p, T::lit(1e-10))?.as_f64();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let report = bmo_norm(&symbol_rhs(p, kmax)?, n)?;
    Ok(report.value.sqrt() / sup)
}
