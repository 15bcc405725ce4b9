//! Supremum of `|p|` on the unit circle.
//!
//! `|p(e^{iθ})|^2` is sampled on a uniform grid by one inverse FFT, then
//! every grid-local maximum that could still beat the grid maximum (by the
//! Bernstein bound on the derivative of a degree-`d` trigonometric
//! polynomial) is polished by safeguarded Newton iteration on the
//! derivative. Only evaluated values are ever returned, so the result never
//! overshoots the true supremum.

use rustfft::FftPlanner;

use crate::calculus::poly::ScalarPoly;
use crate::error::{Error, Result};
use crate::scalar::{cx, czero, Cx, Real};

/// Minimum number of grid samples.
pub const MIN_GRID: usize = 1024;

/// Grid size used for degree `d`: `max(1024, 16 (d + 1))` rounded up to a power of two.
pub fn grid_size(d: usize) -> usize {
    MIN_GRID.max(16 * (d + 1)).next_power_of_two()
}

/// Values `p(e^{2πij/n})`, `j = 0..n`, by a single inverse FFT. Requires `deg p < n`.
pub fn sample_on_circle<T: Real>(p: &ScalarPoly<T>, n: usize) -> Vec<Cx<T>> {
    let mut buf = vec![czero(); n];
    for (i, c) in p.coeffs().iter().enumerate() {
        buf[i % n] += *c;
    }
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

struct Derivs<T: Real> {
    p: ScalarPoly<T>,
    dp: ScalarPoly<T>,
    ddp: ScalarPoly<T>,
}

impl<T: Real> Derivs<T> {
    /// `(g, g', g'')` for `g(θ) = |p(e^{iθ})|^2`.
    fn eval(&self, theta: T) -> (T, T, T) {
        let z = cx(theta.cos(), theta.sin());
        let p0 = self.p.eval(z);
        let p1 = self.dp.eval(z);
        let p2 = self.ddp.eval(z);
        let zp1 = z * p1;
        // d/dθ p = i z p',  d²/dθ² p = -(z p' + z² p'')
        let d1 = cx(T::zero(), T::one()) * zp1;
        let d2 = -(zp1 + z * z * p2);
        let two = T::lit(2.0);
        let g = p0.norm_sqr();
        let g1 = two * (p0.conj() * d1).re;
        let g2 = two * d1.norm_sqr() + two * (p0.conj() * d2).re;
        (g, g1, g2)
    }

    fn value(&self, theta: T) -> T {
        let z = cx(theta.cos(), theta.sin());
        self.p.eval(z).norm_sqr()
    }
}

fn refine<T: Real>(d: &Derivs<T>, center: T, half_width: T, start: T, tol: T) -> T {
    let (mut lo, mut hi) = (center - half_width, center + half_width);
    let mut theta = center;
    let mut best = start;
    for _ in 0..60 {
        let (g, g1, g2) = d.eval(theta);
        best = best.max(g);
        if g1 > T::zero() {
            lo = lo.max(theta);
        } else {
            hi = hi.min(theta);
        }
        let newton = if g2 < T::zero() { theta - g1 / g2 } else { T::nan() };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
        let step = (next - theta).abs();
        theta = next;
        if step <= tol * T::lit(1e-3) || hi - lo <= T::epsilon() {
            break;
        }
    }
    best.max(d.value(theta))
}

/// `||p||_∞` on `|z| = 1` to relative accuracy `tol`.
pub fn poly_sup_norm<T: Real>(p: &ScalarPoly<T>, tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidTolerance(tol.as_f64()));
    }
    let Some(deg) = p.degree() else {
        return Ok(T::zero());
    };
    if deg == 0 {
        return Ok(p.coeffs()[0].norm());
    }
    let n = grid_size(deg);
    let g: Vec<T> = sample_on_circle(p, n).iter().map(|z| z.norm_sqr()).collect();
    let gmax = g.iter().copied().fold(T::zero(), T::max);
    let h = T::TAU() / T::from_usize_lossy(n);
    let dh = T::from_usize_lossy(deg) * h;
    // sup g <= gmax / (1 - d h / 2), and between neighbors g can rise by at most d (h/2) sup g.
    let bound = gmax / (T::one() - dh / T::lit(2.0));
    let slack = dh / T::lit(2.0) * bound;
    let derivs = Derivs {
        p: p.clone(),
        dp: p.derivative(),
        ddp: p.derivative().derivative(),
    };
    let mut best = gmax;
    for j in 0..n {
        let (l, r) = (g[(j + n - 1) % n], g[(j + 1) % n]);
        if g[j] < l || g[j] < r || g[j] + slack < gmax {
            continue;
        }
        let center = h * T::from_usize_lossy(j);
        best = best.max(refine(&derivs, center, h, g[j], tol));
    }
    Ok(best.sqrt())
}
