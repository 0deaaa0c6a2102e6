//! Blow-up rate extraction and classification checks on computed fields.
//!
//! The extrapolation model throughout is `a + b/(−ln r)`: the operator
//! expansions guarantee the first correction to every limit quantity here
//! is exactly one inverse-log order.

use crate::err::{Error, Result};
use crate::field::RadialField;
use crate::num;
use crate::special::Params;
use alloc::vec::Vec;

/// A log-spaced sampling window `[r_lo, r_hi]` for asymptotic fits.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticsWindow {
    pub r_lo: f64,
    pub r_hi: f64,
    pub samples_per_decade: u32,
}

impl AsymptoticsWindow {
    pub fn new(r_lo: f64, r_hi: f64, samples_per_decade: u32) -> Result<Self> {
        let w = AsymptoticsWindow { r_lo, r_hi, samples_per_decade };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_lo > 0.0 && self.r_lo < self.r_hi && self.r_hi < num::exp(-2.0)) {
            return Err(Error::FitWindow("window must satisfy 0 < r_lo < r_hi < e^-2"));
        }
        if self.decades() < 3.0 - 1e-9 {
            return Err(Error::FitWindow("window must span at least 3 decades"));
        }
        if self.samples_per_decade < 8 {
            return Err(Error::FitWindow("need at least 8 samples per decade"));
        }
        Ok(())
    }

    pub fn decades(&self) -> f64 {
        (num::ln(self.r_hi) - num::ln(self.r_lo)) / core::f64::consts::LN_10
    }

    pub fn radii(&self) -> Vec<f64> {
        let n = (self.samples_per_decade as f64 * self.decades()) as usize + 1;
        crate::field::log_grid(self.r_lo, self.r_hi, n.max(2))
    }
}

/// Ordinary least squares for `y = a + b x`; returns `(a, b, rms_residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let e = y - a - b * x;
        ss += e * e;
    }
    (a, b, num::sqrt(ss / n))
}

/// Extrapolates `f(r) = a + b/(−ln r)` over the window; returns
/// `(a, b, rms)`.
pub fn extrapolate_inverse_log<F: Fn(f64) -> f64>(
    f: F,
    window: &AsymptoticsWindow,
) -> Result<(f64, f64, f64)> {
    window.validate()?;
    let radii = window.radii();
    let xs: Vec<f64> = radii.iter().map(|&r| 1.0 / (-num::ln(r))).collect();
    let ys: Vec<f64> = radii.iter().map(|&r| f(r)).collect();
    Ok(linear_fit(&xs, &ys))
}

/// `u(r) · (r(−ln r)^{1/2s})^{N−2s}` — the blow-up ratio whose limit is
/// `K_s` for non-removable singular solutions.
pub fn leading_ratio(u: &RadialField, params: &Params, r: f64) -> f64 {
    let e = params.dim() - 2.0 * params.s();
    u.eval(r) * num::powf(r * num::powf(-num::ln(r), 1.0 / (2.0 * params.s())), e)
}

/// Log-extrapolated limit of [`leading_ratio`] with the resonant drift
/// split off: solution fields obey
/// `ratio(r) = a + (A·ln L + b)/L` with the analytically known slope
/// `A = −K_s D_{m₀}/C_s'(0)`, so the fit removes `A·ln L/L` first and
/// extrapolates the remaining two-parameter model. Returns `(a, b, rms)`.
pub fn leading_ratio_extrapolated(
    u: &RadialField,
    params: &Params,
    window: &AsymptoticsWindow,
) -> Result<(f64, f64, f64)> {
    let a_res = crate::special::resonant_log_slope(params);
    extrapolate_inverse_log(
        |r| {
            let l = -num::ln(r);
            leading_ratio(u, params, r) - a_res * num::ln(l) / l
        },
        window,
    )
}

/// Second-order blow-up coefficient: fits
/// `(u − K_s(r(−ln r)^{1/2s})^{2s−N}) r^{N−2s}(−ln r)^{N/2s} = k + c/(−ln r)`
/// over the window and returns `(k, fit_quality)`.
///
/// `fit_quality` is the rms residual of the linear model; a fit is flagged
/// bad when it exceeds `5%·|k| + 1e-6`.
pub fn second_order_coeff(
    u: &RadialField,
    params: &Params,
    window: &AsymptoticsWindow,
) -> Result<(f64, f64)> {
    let n2s = params.dim() - 2.0 * params.s();
    let ks = params.k_s();
    let g = |r: f64| {
        let l = -num::ln(r);
        let profile = ks * num::powf(r * num::powf(l, 1.0 / (2.0 * params.s())), -n2s);
        (u.eval(r) - profile) * num::powf(r, n2s) * num::powf(l, params.dim() / (2.0 * params.s()))
    };
    let (k, _c, rms) = extrapolate_inverse_log(g, window)?;
    Ok((k, rms))
}

/// True when the fit quality reported by [`second_order_coeff`] is within
/// its acceptance threshold.
pub fn fit_quality_ok(k: f64, rms: f64) -> bool {
    rms <= 0.05 * num::abs(k) + 1e-6
}

/// Sup/inf ratio of `u` over the annulus `[r, 2r]` (samples the
/// interpolant; equals `u(r)/u(2r)` for radially non-increasing fields).
pub fn harnack_ratio(u: &RadialField, r: f64) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for i in 0..=64 {
        let rho = r * num::powf(2.0, i as f64 / 64.0);
        let v = u.eval(rho);
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    hi / lo
}

/// Report of the rough upper/lower blow-up barrier checks.
#[derive(Debug, Clone)]
pub struct BarrierReport {
    /// `sup u·r^{N−2s}` over the window (finite for any solution).
    pub sup_fundamental_ratio: f64,
    /// Per test-τ: `(τ, min over last decade of u·r^{−τ}, increasing-trend flag)`.
    pub lower_barriers: Vec<(f64, f64, bool)>,
}

/// Checks the rough barriers on a singular field: `u·r^{N−2s}` stays
/// bounded, while `u·r^{−τ}` diverges for each `τ` strictly between
/// `2s−N` and `0` (tested at `τ ∈ {0.25, 0.5, 0.75}·(2s−N)`).
pub fn barrier_checks(u: &RadialField, params: &Params, window: &AsymptoticsWindow) -> Result<BarrierReport> {
    window.validate()?;
    let radii = window.radii();
    let n2s = params.dim() - 2.0 * params.s();
    let mut sup = 0.0_f64;
    for &r in &radii {
        let v = u.eval(r) * num::powf(r, n2s);
        if v > sup {
            sup = v;
        }
    }
    let mut lower = Vec::new();
    for frac in [0.25, 0.5, 0.75] {
        let tau = frac * (2.0 * params.s() - params.dim());
        // last decade of the window, descending radii toward r_lo
        let deep: Vec<f64> = radii
            .iter()
            .copied()
            .filter(|&r| r <= window.r_lo * 10.0)
            .collect();
        let vals: Vec<f64> = deep.iter().map(|&r| u.eval(r) * num::powf(r, -tau)).collect();
        let min = vals.iter().copied().fold(f64::INFINITY, num::min);
        // the quantity must grow toward r → 0, i.e. decrease along
        // increasing radii in the deep decade
        let increasing_toward_zero = vals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
        lower.push((tau, min, increasing_toward_zero));
    }
    Ok(BarrierReport { sup_fundamental_ratio: sup, lower_barriers: lower })
}
