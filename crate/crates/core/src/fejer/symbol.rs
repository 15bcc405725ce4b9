//! The conjugate-analytic symbol `Q sum_k 2^{-k} p'(z) conj(z)^{2^k - 1} e_k`,
//! built two ways: directly from `p'`, and through Fejér sections
//! `Q sum_k T_k[p(z) conj(z)^{2^k}] e_k`.

use crate::calculus::poly::ScalarPoly;
use crate::error::{Error, Result};
use crate::fejer::kernel::fejer_section_apply;
use crate::fejer::series::{FourierSeries, TrigVector};
use crate::scalar::Real;

fn check_kmax(kmax: usize) -> Result<()> {
    if kmax == 0 || kmax > 40 {
        Err(Error::InvalidParameter(format!("kmax must be in 1..=40, got {kmax}")))
    } else {
        Ok(())
    }
}

/// Component `k`: `2^{-k} p'(z) conj(z)^{2^k - 1}`, frequencies `<= 0` only.
pub fn symbol_lhs<T: Real>(p: &ScalarPoly<T>, kmax: usize) -> Result<TrigVector<T>> {
    check_kmax(kmax)?;
    let dp = p.derivative();
    let comps = (1..=kmax)
        .map(|k| {
            let w = T::one() / T::lit(2.0).powi(k as i32);
            let series = FourierSeries::from_coeffs(0, dp.coeffs().iter().map(|c| c.scale(w)).collect());
            series.shift(1 - (1i64 << k)).project_nonpositive()
        })
        .collect();
    TrigVector::new(comps)
}

/// Component `k`: `T_k[p(z) conj(z)^{2^k}]`, frequencies `<= 0` only.
pub fn symbol_rhs<T: Real>(p: &ScalarPoly<T>, kmax: usize) -> Result<TrigVector<T>> {
    check_kmax(kmax)?;
    let base = FourierSeries::from_coeffs(0, p.coeffs().to_vec());
    let comps = (1..=kmax)
        .map(|k| fejer_section_apply(k, &base.shift(-(1i64 << k))).project_nonpositive())
        .collect();
    TrigVector::new(comps)
}
