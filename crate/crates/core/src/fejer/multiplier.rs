//! Squared Fejér multiplier mass `M(n) = sum_k w_k(n)^2`, where
//! `w_k(n) = n / 2^k` for `n <= 2^k`, `(2^{k+1} - n) / 2^k` for
//! `2^k < n < 2^{k+1}`, and 0 beyond. Every weight is a dyadic rational, so
//! `M(n) 4^{kmax}` is an integer and the bound `M(n) <= 7/3` can be checked
//! exactly.

use num_rational::Ratio;

use crate::scalar::Real;

/// Weight numerator over `2^k`.
fn weight_numerator(k: u32, n: u64) -> u64 {
    let p = 1u64 << k;
    if n <= p {
        n
    } else if n < 2 * p {
        2 * p - n
    } else {
        0
    }
}

/// `w_k(n)` in floating point.
pub fn multiplier_weight<T: Real>(k: u32, n: u64) -> T {
    T::lit(weight_numerator(k, n) as f64) / T::lit(2.0).powi(k as i32)
}

/// `M(n)` in floating point.
pub fn multiplier_mass<T: Real>(n: u64, kmax: u32) -> T {
    (1..=kmax).fold(T::zero(), |acc, k| {
        let w = multiplier_weight::<T>(k, n);
        acc + w * w
    })
}

/// `M(n) * 4^{kmax}` as an exact integer.
pub fn multiplier_mass_scaled(n: u64, kmax: u32) -> u128 {
    assert!(kmax <= 60, "kmax too large for exact scaling");
    (1..=kmax)
        .map(|k| {
            let num = weight_numerator(k, n) as u128;
            (num * num) << (2 * (kmax - k))
        })
        .sum()
}

/// `M(n)` as an exact rational.
pub fn multiplier_mass_exact(n: u64, kmax: u32) -> Ratio<i128> {
    Ratio::new(multiplier_mass_scaled(n, kmax) as i128, 1i128 << (2 * kmax))
}

/// Exact maximum of `M(n)` over `0 <= n <= n_max`, with the first maximizer.
pub fn max_multiplier_mass(n_max: u64, kmax: u32) -> (u64, Ratio<i128>) {
    let (mut arg, mut best) = (0u64, 0u128);
    for n in 0..=n_max {
        let s = multiplier_mass_scaled(n, kmax);
        if s > best {
            best = s;
            arg = n;
        }
    }
    (arg, Ratio::new(best as i128, 1i128 << (2 * kmax)))
}

/// `M(n) <= 7/3`, decided in integers: `3 M(n) 4^{kmax} <= 7 4^{kmax}`.
pub fn within_seven_thirds(n: u64, kmax: u32) -> bool {
    3 * multiplier_mass_scaled(n, kmax) <= 7u128 << (2 * kmax)
}
