//! Radial fields: grid values, monotone piecewise-cubic interpolation on
//! the logarithmic radius, and the inner/outer tail models that let the
//! quadrature reach `r = 0` and `r = ∞` semi-analytically.

use crate::err::{Error, Result};
use crate::num;
use alloc::vec::Vec;

/// Inner tail model
/// `u(r) ≈ (coeff + log_log_coeff·ln L) · r^exponent · L^log_power`,
/// `L = log_shift − ln r`, for radii below the first grid node.
///
/// `log_shift` is zero for freshly built fields; rescaling a field by
/// `r ↦ r/l` shifts it by `ln l`, which keeps the family of models closed
/// under the scaling map. The `ln L` factor carries the resonant
/// correction that the critical exponent forces on solution-type fields;
/// it is zero for plain power-log profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerTail {
    pub coeff: f64,
    pub exponent: f64,
    pub log_power: f64,
    pub log_shift: f64,
    pub log_log_coeff: f64,
}

impl InnerTail {
    pub fn power_log(coeff: f64, exponent: f64, log_power: f64) -> Self {
        InnerTail { coeff, exponent, log_power, log_shift: 0.0, log_log_coeff: 0.0 }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let l = self.log_shift - num::ln(r);
        let mut amp = self.coeff;
        if self.log_log_coeff != 0.0 {
            amp += self.log_log_coeff * num::ln(l);
        }
        let mut v = amp * num::powf(r, self.exponent);
        if self.log_power != 0.0 {
            v *= num::powf(l, self.log_power);
        }
        v
    }
}

/// Behaviour beyond the last grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterTail {
    /// `u = 0` for `r ≥ support`. If the grid stops short of `support`,
    /// the gap is bridged by the boundary model `u(r_M)·((support−r)/(support−r_M))^edge_power`,
    /// the natural edge behaviour of Dirichlet solutions of `(-Δ)^s`.
    Zero { support: f64, edge_power: f64 },
    /// `u = coeff · r^exponent` beyond the grid (needs `exponent < 2s`).
    Power { coeff: f64, exponent: f64 },
}

/// Interpolation ordinate: `ln u` (positive fields spanning decades) or
/// plain `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interp {
    LogLog,
    LogLin,
}

/// A radial function on `(0, ∞)`: strictly increasing grid, per-node
/// values, declared tails, and a monotone cubic interpolant in between.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Vec<f64>,
    values: Vec<f64>,
    x: Vec<f64>, // ln grid
    y: Vec<f64>, // interpolation ordinates
    d: Vec<f64>, // pchip slopes dy/dx
    inner: InnerTail,
    outer: OuterTail,
    interp: Interp,
}

/// Fritsch-Carlson slopes: C¹, no overshoot on monotone data.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = Vec::with_capacity(n);
    if n == 1 {
        d.push(0.0);
        return d;
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    for i in 0..n {
        let di = if i == 0 || i == n - 1 {
            let (h0, h1, d0, d1) = if i == 0 {
                (h[0], h[1.min(n - 2)], del[0], del[1.min(n - 2)])
            } else {
                (h[n - 2], h[n.saturating_sub(3).min(n - 2)], del[n - 2], del[n.saturating_sub(3).min(n - 2)])
            };
            if n == 2 {
                del[0]
            } else {
                let mut e = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
                if e * d0 <= 0.0 {
                    e = 0.0;
                } else if d0 * d1 < 0.0 && num::abs(e) > 3.0 * num::abs(d0) {
                    e = 3.0 * d0;
                }
                e
            }
        } else {
            let (d0, d1) = (del[i - 1], del[i]);
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                (w1 + w2) / (w1 / d0 + w2 / d1)
            }
        };
        d.push(di);
    }
    d
}

impl RadialField {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        inner: InnerTail,
        outer: OuterTail,
        interp: Interp,
    ) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::Precondition("field needs matching grid/values, length >= 2"));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("grid must be strictly increasing and positive"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("field values must be finite"));
        }
        if interp == Interp::LogLog && values.iter().any(|&v| v <= 0.0) {
            return Err(Error::Precondition("log-log interpolation requires positive values"));
        }
        if let OuterTail::Zero { support, .. } = outer {
            if support < grid[grid.len() - 1] {
                return Err(Error::Precondition("zero-tail support must reach past the grid"));
            }
        }
        let x: Vec<f64> = grid.iter().map(|&r| num::ln(r)).collect();
        let y: Vec<f64> = match interp {
            Interp::LogLog => values.iter().map(|&v| num::ln(v)).collect(),
            Interp::LogLin => values.clone(),
        };
        let d = pchip_slopes(&x, &y);
        Ok(RadialField { grid, values, x, y, d, inner, outer, interp })
    }

    /// Builds a field by sampling `f` on a log-spaced grid.
    pub fn from_fn<F: Fn(f64) -> f64>(
        r_lo: f64,
        r_hi: f64,
        n: usize,
        f: F,
        inner: InnerTail,
        outer: OuterTail,
        interp: Interp,
    ) -> Result<Self> {
        let grid = log_grid(r_lo, r_hi, n);
        let values = grid.iter().map(|&r| f(r)).collect();
        RadialField::new(grid, values, inner, outer, interp)
    }

    /// The global power `u = r^τ` (exact under log-log interpolation).
    pub fn global_power(tau: f64, r_lo: f64, r_hi: f64, n: usize) -> Result<Self> {
        RadialField::from_fn(
            r_lo,
            r_hi,
            n,
            |r| num::powf(r, tau),
            InnerTail::power_log(1.0, tau, 0.0),
            OuterTail::Power { coeff: 1.0, exponent: tau },
            Interp::LogLog,
        )
    }

    /// The constant field `u ≡ c` on all of `ℝ^N`.
    pub fn constant(c: f64) -> Result<Self> {
        RadialField::from_fn(
            0.5,
            2.0,
            8,
            |_| c,
            InnerTail::power_log(c, 0.0, 0.0),
            OuterTail::Power { coeff: c, exponent: 0.0 },
            if c > 0.0 { Interp::LogLog } else { Interp::LogLin },
        )
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn inner_tail(&self) -> &InnerTail {
        &self.inner
    }
    pub fn outer_tail(&self) -> &OuterTail {
        &self.outer
    }
    pub fn interp(&self) -> Interp {
        self.interp
    }
    pub fn r_min(&self) -> f64 {
        self.grid[0]
    }
    pub fn r_max(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Radius beyond which the field is identically zero, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match self.outer {
            OuterTail::Zero { support, .. } => Some(support),
            OuterTail::Power { .. } => None,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r > 0.0);
        if r < self.grid[0] {
            return self.inner.eval(r);
        }
        let m = self.grid.len() - 1;
        if r > self.grid[m] {
            return match self.outer {
                OuterTail::Zero { support, edge_power } => {
                    if r >= support {
                        0.0
                    } else {
                        let frac = (support - r) / (support - self.grid[m]);
                        self.values[m] * num::powf(frac, edge_power)
                    }
                }
                OuterTail::Power { coeff, exponent } => coeff * num::powf(r, exponent),
            };
        }
        let t = num::ln(r);
        // binary search for the segment containing t
        let mut lo = 0usize;
        let mut hi = m;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.x[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.x[hi] - self.x[lo];
        let u = (t - self.x[lo]) / h;
        let (y0, y1, d0, d1) = (self.y[lo], self.y[hi], self.d[lo] * h, self.d[hi] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        let val = y0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + d0 * (u3 - 2.0 * u2 + u)
            + y1 * (-2.0 * u3 + 3.0 * u2)
            + d1 * (u3 - u2);
        match self.interp {
            Interp::LogLog => num::exp(val),
            Interp::LogLin => val,
        }
    }

    /// Pointwise map of the stored values (tails must be re-declared by
    /// the caller when the map changes them).
    pub fn with_values(&self, values: Vec<f64>, inner: InnerTail, outer: OuterTail, interp: Interp) -> Result<Self> {
        RadialField::new(self.grid.clone(), values, inner, outer, interp)
    }

    /// True if the grid values never increase with `r`.
    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

/// `n` log-spaced radii on `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    debug_assert!(a > 0.0 && b > a && n >= 2);
    let la = num::ln(a);
    let lb = num::ln(b);
    let mut g: Vec<f64> = (0..n)
        .map(|i| num::exp(la + (lb - la) * i as f64 / (n - 1) as f64))
        .collect();
    g[0] = a;
    g[n - 1] = b;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_field_is_exact_under_loglog() {
        let f = RadialField::global_power(-1.3, 1e-6, 1e3, 40).unwrap();
        for &r in &[1e-9f64, 3.7e-4, 0.011, 1.0, 57.0, 4.4e5] {
            let want = r.powf(-1.3);
            assert!(
                (f.eval(r) / want - 1.0).abs() < 1e-12,
                "r={r}: {} vs {want}",
                f.eval(r)
            );
        }
    }

    #[test]
    fn tails_take_over_outside_grid() {
        let f = RadialField::from_fn(
            0.1,
            1.0,
            64,
            |r| r * r,
            InnerTail::power_log(1.0, 2.0, 0.0),
            OuterTail::Zero { support: 2.0, edge_power: 0.5 },
            Interp::LogLin,
        )
        .unwrap();
        assert!((f.eval(0.01) - 1e-4).abs() < 1e-18);
        assert_eq!(f.eval(2.5), 0.0);
        // boundary taper between grid end and support
        let v = f.eval(1.5);
        assert!((v - 1.0 * (0.5_f64 / 1.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pchip_no_overshoot_on_monotone_data() {
        let grid = log_grid(0.1, 10.0, 9);
        let values: Vec<f64> = grid.iter().map(|&r| 1.0 / (1.0 + r)).collect();
        let f = RadialField::new(
            grid.clone(),
            values.clone(),
            InnerTail::power_log(1.0 / 1.1, 0.0, 0.0),
            OuterTail::Power { coeff: 1.0, exponent: -1.0 },
            Interp::LogLin,
        )
        .unwrap();
        let mut prev = f.eval(0.1);
        let mut r = 0.1;
        while r < 10.0 {
            let v = f.eval(r);
            assert!(v <= prev + 1e-14, "overshoot at {r}");
            prev = v;
            r *= 1.03;
        }
    }

    #[test]
    fn validation_errors() {
        assert!(RadialField::new(
            alloc::vec![1.0, 0.5],
            alloc::vec![1.0, 1.0],
            InnerTail::power_log(1.0, 0.0, 0.0),
            OuterTail::Power { coeff: 1.0, exponent: 0.0 },
            Interp::LogLin
        )
        .is_err());
        assert!(RadialField::new(
            alloc::vec![0.5, 1.0],
            alloc::vec![1.0, -1.0],
            InnerTail::power_log(1.0, 0.0, 0.0),
            OuterTail::Power { coeff: 1.0, exponent: 0.0 },
            Interp::LogLog
        )
        .is_err());
    }

    #[test]
    fn log_shift_scaling_model() {
        // a r^tau (b - ln r)^m with b = ln 2 equals the r/2-shifted base model
        let t = InnerTail { coeff: 3.0, exponent: -1.0, log_power: -2.0, log_shift: 2.0_f64.ln(), log_log_coeff: 0.0 };
        let base = InnerTail::power_log(3.0, -1.0, -2.0);
        let r = 1e-4;
        assert!((t.eval(r) - base.eval(r / 2.0) / 2.0).abs() < 1e-12 * t.eval(r).abs());
    }
}
