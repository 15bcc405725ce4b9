//! Discrete vector-valued BMO norm in square-function form.
//!
//! For an arc `I` of grid cells,
//! `osc(I) = (1/|I|) sum_{θ ∈ I} sum_k |f_k(θ) - MV_k(I)|^2`, and the
//! reported value is the maximum of `osc` over an [`ArcFamily`]. Arc sums
//! are built by doubling (`S(o, 2L) = S(o, L) + S(o + L, L)`), so no prefix
//! differences and no catastrophic cancellation.

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fejer::series::TrigVector;
use crate::scalar::{czero, Cx, Real};

/// Grid-aligned arcs of power-of-two length at every offset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcFamily {
    n: usize,
    lengths: Vec<usize>,
}

impl ArcFamily {
    /// All lengths `2, 4, ..., n`.
    pub fn dyadic(n: usize) -> Result<Self> {
        Self::with_lengths(n, (1..=n.trailing_zeros()).map(|j| 1usize << j).collect())
    }

    pub fn with_lengths(n: usize, mut lengths: Vec<usize>) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::GridTooCoarse {
                n,
                required: n.max(2).next_power_of_two(),
            });
        }
        lengths.sort_unstable();
        lengths.dedup();
        if lengths.iter().any(|&l| l < 2 || l > n || !l.is_power_of_two()) {
            return Err(Error::InvalidParameter("arc lengths must be powers of two in 2..=N".into()));
        }
        Ok(ArcFamily { n, lengths })
    }

    pub fn grid(&self) -> usize {
        self.n
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Number of `(offset, length)` arcs.
    pub fn len(&self) -> usize {
        self.n * self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub offset: usize,
    pub length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BmoReport {
    /// Maximal arc average of the squared oscillation.
    pub value: f64,
    pub argmax: Arc,
    /// `MV_k` on the maximizing arc, `k = 1..=kmax`, as `(re, im)`.
    pub mean_values: Vec<(f64, f64)>,
}

fn check_grid(v_maxfreq: u64, n: usize) -> Result<()> {
    let required = (4 * v_maxfreq as usize).max(2).next_power_of_two();
    if !n.is_power_of_two() || n < required {
        return Err(Error::GridTooCoarse { n, required });
    }
    Ok(())
}

/// Samples of every component on the `n`-point grid.
pub fn sample_components<T: Real>(v: &TrigVector<T>, n: usize) -> Result<Vec<Vec<Cx<T>>>> {
    check_grid(v.max_abs_freq(), n)?;
    let mut planner = FftPlanner::new();
    Ok(v.components().iter().map(|c| c.sample(n, &mut planner)).collect())
}

/// BMO value over the dyadic arc family on an `n`-point grid.
pub fn bmo_norm<T: Real>(v: &TrigVector<T>, n: usize) -> Result<BmoReport> {
    check_grid(v.max_abs_freq(), n)?;
    bmo_norm_with(v, &ArcFamily::dyadic(n)?)
}

pub fn bmo_norm_with<T: Real>(v: &TrigVector<T>, family: &ArcFamily) -> Result<BmoReport> {
    let n = family.grid();
    let samples = sample_components(v, n)?;
    Ok(bmo_from_samples(&samples, family))
}

/// BMO value from pre-sampled components (each of length `family.grid()`).
pub fn bmo_from_samples<T: Real>(samples: &[Vec<Cx<T>>], family: &ArcFamily) -> BmoReport {
    let n = family.grid();
    // Centering by the global mean leaves every oscillation unchanged.
    let centered: Vec<Vec<Cx<T>>> = samples
        .iter()
        .map(|s| {
            let mean = s.iter().fold(czero::<T>(), |a, z| a + z) / T::from_usize_lossy(n);
            s.iter().map(|z| z - mean).collect()
        })
        .collect();
    let mut s1: Vec<Vec<Cx<T>>> = centered.clone();
    let mut s2: Vec<Vec<T>> = centered
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).collect())
        .collect();
    let mut best = (T::neg_infinity(), 0usize, 0usize);
    let mut len = 1usize;
    let mut osc = vec![T::zero(); n];
    while len < n {
        let half = len;
        len *= 2;
        for (a, b) in s1.iter_mut().zip(s2.iter_mut()) {
            let (pa, pb) = (a.clone(), b.clone());
            for o in 0..n {
                let o2 = (o + half) % n;
                a[o] = pa[o] + pa[o2];
                b[o] = pb[o] + pb[o2];
            }
        }
        if !family.lengths().contains(&len) {
            continue;
        }
        let l = T::from_usize_lossy(len);
        osc.iter_mut().for_each(|x| *x = T::zero());
        for (a, b) in s1.iter().zip(&s2) {
            for o in 0..n {
                let mean = a[o] / l;
                osc[o] += (b[o] / l - mean.norm_sqr()).max(T::zero());
            }
        }
        for (o, &x) in osc.iter().enumerate() {
            if x > best.0 {
                best = (x, o, len);
            }
        }
    }
    let (value, offset, length) = if best.0.is_finite() {
        best
    } else {
        (T::zero(), 0, n)
    };
    let mean_values = samples
        .iter()
        .map(|s| {
            let m = (0..length).fold(czero::<T>(), |acc, t| acc + s[(offset + t) % n]) / T::from_usize_lossy(length);
            (m.re.as_f64(), m.im.as_f64())
        })
        .collect();
    BmoReport {
        value: value.as_f64(),
        argmax: Arc { offset, length },
        mean_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fejer::series::FourierSeries;
    use crate::scalar::cx;

    /// Direct evaluation of every arc average; no FFT, no doubling.
    fn brute_force(v: &TrigVector<f64>, n: usize) -> f64 {
        let h = std::f64::consts::TAU / n as f64;
        let vals: Vec<Vec<Cx<f64>>> = v
            .components()
            .iter()
            .map(|c| (0..n).map(|t| c.eval(h * t as f64)).collect())
            .collect();
        let mut best: f64 = 0.0;
        let mut len = 2;
        while len <= n {
            for o in 0..n {
                let mut total = 0.0;
                for comp in &vals {
                    let arc: Vec<Cx<f64>> = (0..len).map(|t| comp[(o + t) % n]).collect();
                    let mean = arc.iter().sum::<Cx<f64>>() / len as f64;
                    total += arc.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / len as f64;
                }
                best = best.max(total);
            }
            len *= 2;
        }
        best
    }

    fn single(offset: i64, coeffs: Vec<Cx<f64>>) -> TrigVector<f64> {
        TrigVector::new(vec![FourierSeries::from_coeffs(offset, coeffs)]).unwrap()
    }

    #[test]
    fn constant_has_zero_oscillation() {
        let v = single(0, vec![cx(3.0, -2.0)]);
        assert_eq!(bmo_norm(&v, 16).unwrap().value, 0.0);
    }

    #[test]
    fn single_character_matches_brute_force() {
        let v = single(-1, vec![cx(1.0, 0.0)]);
        let fast = bmo_norm(&v, 256).unwrap().value;
        let slow = brute_force(&v, 256);
        assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
    }

    #[test]
    fn mixed_vector_matches_brute_force() {
        let a = FourierSeries::from_coeffs(-5, vec![cx(0.3, 0.1), cx(0.0, 0.0), cx(-1.0, 0.5), cx(0.2, 0.0)]);
        let b = FourierSeries::from_coeffs(-12, vec![cx(0.7, -0.4); 13]);
        let v = TrigVector::new(vec![a, b]).unwrap();
        let fast = bmo_norm(&v, 64).unwrap().value;
        assert!((fast - brute_force(&v, 64)).abs() < 1e-12);
    }

    #[test]
    fn full_circle_is_global_variance() {
        let a = FourierSeries::from_coeffs(-3, vec![cx(0.5, 0.0), cx(0.0, 1.0), cx(2.0, 0.0), cx(9.0, 9.0)]);
        let v = TrigVector::new(vec![a.clone()]).unwrap();
        let fam = ArcFamily::with_lengths(32, vec![32]).unwrap();
        let val = bmo_norm_with(&v, &fam).unwrap().value;
        let variance: f64 = a.iter().filter(|(nu, _)| *nu != 0).map(|(_, c)| c.norm_sqr()).sum();
        assert!((val - variance).abs() < 1e-12);
        let all = bmo_norm_with(&v, &ArcFamily::dyadic(32).unwrap()).unwrap().value;
        assert!(all >= val);
    }

    #[test]
    fn constant_shift_invariance() {
        let a = FourierSeries::from_coeffs(-7, (0..8).map(|i| cx(i as f64 * 0.1, 0.3)).collect());
        let v = TrigVector::new(vec![a]).unwrap();
        let base = bmo_norm(&v, 64).unwrap().value;
        let shifted = bmo_norm(&v.with_constant(1, cx(5.0, -3.0)), 64).unwrap().value;
        assert!((base - shifted).abs() <= 1e-12);
    }

    #[test]
    fn grid_guard() {
        let v = single(-9, vec![cx(1.0, 0.0)]);
        assert!(matches!(bmo_norm(&v, 32), Err(Error::GridTooCoarse { required: 64, .. })));
        assert!(bmo_norm(&v, 64).is_ok());
    }
}
