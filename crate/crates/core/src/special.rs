//! Closed-form constants of the problem.
//!
//! Everything here is built from the Gamma-ratio function
//!
//! ```text
//! C_s(τ) = 2^{2s} Γ((N+τ)/2) Γ((2s−τ)/2) / ( Γ(−τ/2) Γ((N−2s+τ)/2) ),   τ ∈ (−N, 2s),
//! ```
//!
//! which is the symbol of `(-Δ)^s` on the power `|x|^τ`. Its zeros at
//! `τ = 0` and `τ = 2s−N` are handled analytically through the
//! factorisation `Γ(−τ/2) = Γ(1−τ/2)/(−τ/2)`, so `c_s` never forms a
//! `0·∞` limit numerically. The left half of the interval is mapped to
//! the right half by the reflection `C_s(τ) = C_s(2s−N−τ)`, which keeps
//! every Gamma argument positive.

use crate::err::{Error, Result};
use crate::num;
use crate::quad::{self, Estimate, QuadratureSpec};

const LN_2: f64 = core::f64::consts::LN_2;
const PI: f64 = core::f64::consts::PI;

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_74;

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // recurrence keeps the Lanczos sum in its accurate range
        return ln_gamma_unchecked(x + 1.0) - num::ln(x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * num::ln(t) - t + num::ln(acc)
}

/// Natural log of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "log_gamma requires x > 0",
            value: x,
        });
    }
    Ok(ln_gamma_unchecked(x))
}

fn digamma_unchecked(x: f64) -> f64 {
    let mut result = 0.0;
    let mut z = x;
    while z < 10.0 {
        result -= 1.0 / z;
        z += 1.0;
    }
    // asymptotic series with Bernoulli coefficients
    let r = 1.0 / (z * z);
    result += num::ln(z) - 0.5 / z;
    let series = r * (1.0 / 12.0
        - r * (1.0 / 120.0
            - r * (1.0 / 252.0
                - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    result - series
}

/// Digamma function `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "digamma requires x > 0",
            value: x,
        });
    }
    Ok(digamma_unchecked(x))
}

/// Problem dimensions `N` and `s` with the derived constants attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    n: u32,
    s: f64,
    p_star: f64,
    m0: f64,
    k_s: f64,
}

impl Params {
    /// Validates `N ≥ 1`, `0 < s < 1`, `N > 2s` and precomputes
    /// `p* = N/(N−2s)`, `m₀ = −(N−2s)/(2s)` and `K_s`.
    pub fn new(n: u32, s: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain {
                what: "dimension N must be a positive integer",
                value: n as f64,
            });
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain {
                what: "s must lie in (0, 1)",
                value: s,
            });
        }
        let nf = n as f64;
        if !(nf > 2.0 * s) {
            return Err(Error::Domain {
                what: "N > 2s required",
                value: nf - 2.0 * s,
            });
        }
        let p_star = nf / (nf - 2.0 * s);
        let m0 = -(nf - 2.0 * s) / (2.0 * s);
        let mut p = Params {
            n,
            s,
            p_star,
            m0,
            k_s: 0.0,
        };
        let expo = (nf - 2.0 * s) / (2.0 * s);
        p.k_s = num::powf(-c_s_prime0(&p) * expo, expo);
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn dim(&self) -> f64 {
        self.n as f64
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn p_star(&self) -> f64 {
        self.p_star
    }
    pub fn m0(&self) -> f64 {
        self.m0
    }
    /// The blow-up constant `K_s = (−C_s'(0)·(N−2s)/2s)^{(N−2s)/2s}`.
    pub fn k_s(&self) -> f64 {
        self.k_s
    }
    /// `2s − N`, the exponent of the fundamental solution.
    pub fn fund_exponent(&self) -> f64 {
        2.0 * self.s - self.dim()
    }
}

/// First and second inverse-log expansion coefficients for exponent `m`
/// at power `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoeffs {
    pub m: f64,
    pub tau: f64,
    pub b_m: f64,
    pub d_m: f64,
    pub b_tau_m: f64,
}

fn check_tau(params: &Params, tau: f64) -> Result<()> {
    if !(tau > -params.dim() && tau < 2.0 * params.s) {
        return Err(Error::Domain {
            what: "tau must lie in (-N, 2s)",
            value: tau,
        });
    }
    Ok(())
}

// C_s(τ) = (−τ/2)·G(τ) on the reflected-right half; G stays analytic
// through τ = 0.
fn g_factor(params: &Params, tau: f64) -> f64 {
    let n = params.dim();
    let s = params.s;
    num::exp(
        2.0 * s * LN_2 + ln_gamma_unchecked((n + tau) / 2.0)
            + ln_gamma_unchecked((2.0 * s - tau) / 2.0)
            - ln_gamma_unchecked(1.0 - tau / 2.0)
            - ln_gamma_unchecked((n - 2.0 * s + tau) / 2.0),
    )
}

fn g_log_deriv(params: &Params, tau: f64) -> f64 {
    let n = params.dim();
    let s = params.s;
    0.5 * (digamma_unchecked((n + tau) / 2.0) - digamma_unchecked((2.0 * s - tau) / 2.0)
        + digamma_unchecked(1.0 - tau / 2.0)
        - digamma_unchecked((n - 2.0 * s + tau) / 2.0))
}

/// The symbol `C_s(τ)` of `(-Δ)^s` on `|x|^τ`; exact zeros at `τ = 0`
/// and `τ = 2s−N`.
pub fn c_s(params: &Params, tau: f64) -> Result<f64> {
    check_tau(params, tau)?;
    let mid = (2.0 * params.s - params.dim()) / 2.0;
    let t = if tau < mid {
        2.0 * params.s - params.dim() - tau
    } else {
        tau
    };
    Ok((-t / 2.0) * g_factor(params, t))
}

/// `C_s'(τ)` from the log-Gamma representation (digamma sums), with the
/// reflection `C_s'(τ) = −C_s'(2s−N−τ)` on the left half.
pub fn c_s_prime(params: &Params, tau: f64) -> Result<f64> {
    check_tau(params, tau)?;
    let mid = (2.0 * params.s - params.dim()) / 2.0;
    let (t, sign) = if tau < mid {
        (2.0 * params.s - params.dim() - tau, -1.0)
    } else {
        (tau, 1.0)
    };
    let g = g_factor(params, t);
    Ok(sign * (-0.5 * g + (-t / 2.0) * g * g_log_deriv(params, t)))
}

/// Closed form `C_s'(0) = −2^{2s−1} Γ(N/2) Γ(s) / Γ((N−2s)/2) < 0`.
pub fn c_s_prime0(params: &Params) -> f64 {
    let n = params.dim();
    let s = params.s;
    -num::exp(
        (2.0 * s - 1.0) * LN_2 + ln_gamma_unchecked(n / 2.0) + ln_gamma_unchecked(s)
            - ln_gamma_unchecked((n - 2.0 * s) / 2.0),
    )
}

/// `C_s''(0) = C_s'(0)·[ψ(N/2) − ψ(s) + ψ(1) − ψ((N−2s)/2)] < 0`.
///
/// Derived by differentiating the factored form `C_s = (−τ/2)G(τ)`;
/// its unit tests pin it against second central differences of `c_s`.
pub fn c_s_second0(params: &Params) -> f64 {
    let n = params.dim();
    let s = params.s;
    c_s_prime0(params)
        * (digamma_unchecked(n / 2.0) - digamma_unchecked(s) + digamma_unchecked(1.0)
            - digamma_unchecked((n - 2.0 * s) / 2.0))
}

/// `K_s` recomputed from the `B_{m₀}` route; `Params::k_s` caches the
/// direct closed form. The two must agree identically.
pub fn k_s_via_b_m0(params: &Params) -> f64 {
    let b_m0 = c_s_prime0(params) * params.m0();
    num::powf(b_m0, (params.dim() - 2.0 * params.s) / (2.0 * params.s))
}

/// Expansion coefficients `B_m = C_s'(0)m`, `D_m = C_s''(0)m(m−1)/2`,
/// and the general-power coefficient `B_{τ,m} = −C_s'(τ)m`.
///
/// The sign of `b_tau_m` is fixed by differentiating the symbol identity
/// `(-Δ)^s r^τ = C_s(τ) r^{τ−2s}` in `τ` (each `∂_τ` inserts one factor
/// `ln r = −(−ln r)`), which makes it specialise consistently:
/// `b_tau_m = b_m` at `τ = 2s−N` and `b_tau_m = −b_m` at `τ = 0`.
pub fn coeffs(params: &Params, tau: f64, m: f64) -> Result<ExpansionCoeffs> {
    let b_tau_m = -c_s_prime(params, tau)? * m;
    Ok(ExpansionCoeffs {
        m,
        tau,
        b_m: c_s_prime0(params) * m,
        d_m: c_s_second0(params) * m * (m - 1.0) / 2.0,
        b_tau_m,
    })
}

/// Slope of the resonant `ln(−ln r)` correction forced on every solution
/// with the `K_s`-leading profile.
///
/// At the critical exponent the identity `p*·B_{m₀} = B_{m₀−1}` makes the
/// linearised balance at the singularity exactly resonant: writing
/// `u − K_s w_{m₀} = r^{2s−N} Φ(L)`, `L = −ln r`, the leading balance is
/// the ODE `C_s'(0)·Φ' = (m₀−1)C_s'(0)·Φ/L − K_s D_{m₀} L^{m₀−2}` whose
/// particular solution is `A·L^{m₀−1}·ln L` with
/// `A = −K_s·D_{m₀}/C_s'(0) < 0`. Second-order fits on solution fields
/// must account for this drift.
pub fn resonant_log_slope(params: &Params) -> f64 {
    let m0 = params.m0();
    let d_m0 = c_s_second0(params) * m0 * (m0 - 1.0) / 2.0;
    -params.k_s() * d_m0 / c_s_prime0(params)
}

/// Normalisation `C_{N,s} = 2^{2s} π^{−N/2} s Γ((N+2s)/2) / Γ(1−s)` of
/// the singular-integral definition of `(-Δ)^s`.
pub fn frac_normalization(params: &Params) -> f64 {
    frac_normalization_ns(params.n, params.s).expect("validated by Params")
}

/// Same constant for raw `(N, s)`: it is defined for any `N ≥ 1`,
/// `0 < s < 1` (no `N > 2s` needed).
pub fn frac_normalization_ns(n: u32, s: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain { what: "dimension N must be a positive integer", value: n as f64 });
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { what: "s must lie in (0, 1)", value: s });
    }
    let nf = n as f64;
    Ok(s * num::exp(
        2.0 * s * LN_2 - 0.5 * nf * num::ln(PI) + ln_gamma_unchecked((nf + 2.0 * s) / 2.0)
            - ln_gamma_unchecked(1.0 - s),
    ))
}

/// Surface area of the unit sphere `S^{N-1}`.
pub fn sphere_area(n: u32) -> f64 {
    let nf = n as f64;
    2.0 * num::exp(0.5 * nf * num::ln(PI) - ln_gamma_unchecked(nf / 2.0))
}

/// The constant `c_{s,0}` relating a Dirac coefficient to the
/// `|x|^{2s−N}` amplitude:
///
/// ```text
/// c_{s,0} = C_{N,s} ω_{N−1} ∫₀¹ ∫_{B_t} (|z|^{2s−N} − 1) |e₁ − z|^{−(N+2s)} dz dt .
/// ```
///
/// The inner set integral is reduced to the radial-angular form and the
/// `t`-integral collapsed to the weight `(1 − ρ)`, leaving one radial
/// integral with an integrable endpoint singularity at `ρ = 1`.
pub fn c_s0_constant(params: &Params, spec: &QuadratureSpec) -> Result<Estimate> {
    c_s0_with_rule(params, spec, false)
}

/// Same as [`c_s0_constant`] but on the coarser Gauss-Kronrod rule;
/// exposed for the two-rule agreement check.
pub fn c_s0_alt_rule(params: &Params, spec: &QuadratureSpec) -> Result<Estimate> {
    c_s0_with_rule(params, spec, true)
}

fn c_s0_with_rule(params: &Params, spec: &QuadratureSpec, alt: bool) -> Result<Estimate> {
    let n = params.dim();
    let s = params.s;
    let integrand = |rho: f64| -> f64 {
        if rho <= 0.0 || rho >= 1.0 {
            return 0.0;
        }
        let a = crate::fraclap::angular_kernel_full(params, 1.0, rho);
        (1.0 - rho) * num::powf(rho, n - 1.0) * (num::powf(rho, 2.0 * s - n) - 1.0) * a
    };
    let rule = if alt {
        quad::Rule::G7K15
    } else {
        quad::Rule::G10K21
    };
    // left part: ρ = ξ^{1/(2s)} removes the ρ^{2s−1} corner at 0
    let left = quad::adaptive_with_rule(
        &|xi: f64| {
            let rho = num::powf(xi, 1.0 / (2.0 * s));
            integrand(rho) * rho / (2.0 * s * xi)
        },
        0.0,
        num::powf(0.5, 2.0 * s),
        spec,
        rule,
    );
    // right part: 1−ρ = ξ^{1/(2−2s)} flattens the (1−ρ)^{1−2s} endpoint
    let q = 2.0 - 2.0 * s;
    let right = quad::adaptive_with_rule(
        &|xi: f64| {
            let om = num::powf(xi, 1.0 / q);
            integrand(1.0 - om) * om / (q * xi)
        },
        0.0,
        num::powf(0.5, q),
        spec,
        rule,
    );
    let scale = frac_normalization(params) * sphere_area(params.n);
    let value = scale * (left.value + right.value);
    let error = scale * (left.error + right.error);
    let est = Estimate { value, error };
    if error > num::max(spec.abs_tol, spec.rel_tol * num::abs(value)) * 50.0 {
        return Err(Error::QuadratureNonConverged {
            value,
            error,
            tol: spec.rel_tol,
        });
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, s: f64) -> Params {
        Params::new(n, s).unwrap()
    }

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        let ln_9fac = 362880.0_f64.ln();
        assert!((log_gamma(10.0).unwrap() / ln_9fac - 1.0).abs() < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.0).is_err());
    }

    // 30-digit reference values, frozen
    const LG_REF: [(f64, f64); 16] = [
        (0.0013699999999999999, 6.5921552963402119),
        (0.0077000000000000002, 4.8621389715925494),
        (0.043099999999999999, 3.1208509335129619),
        (0.10000000000000001, 2.252712651734206),
        (0.31, 1.0613727770291053),
        (0.5, 0.57236494292470008),
        (0.77000000000000002, 0.18206516866053704),
        (1.0001, -5.7713342220471268e-05),
        (1.5, -0.12078223763524522),
        (2.3100000000000001, 0.16021693273922022),
        (5.0, 3.1780538303479458),
        (10.0, 12.801827480081469),
        (23.699999999999999, 50.661475615919734),
        (100.0, 359.1342053695754),
        (317.0, 1506.6116128464546),
        (999.0, 5898.3136684305327),
    ];

    #[test]
    fn log_gamma_reference_grid() {
        // relative error below 1e-13 across [1e-3, 1e3] (absolute near the
        // zeros of ln Γ, where a relative criterion is vacuous)
        for &(x, want) in &LG_REF {
            let got = log_gamma(x).unwrap();
            let err = (got - want).abs() / want.abs().max(0.1);
            assert!(err < 1e-13, "x={x}: {got} vs {want} (rel {err:.2e})");
        }
    }

    #[test]
    fn log_gamma_recurrence() {
        let mut x = 1.37e-3;
        while x < 9.0e2 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!(
                (lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0),
                "recurrence at {x}: {lhs} vs {rhs}"
            );
            x *= 2.31;
        }
    }

    const DG_REF: [(f64, f64); 10] = [
        (0.0033, -303.60210346441079),
        (0.021000000000000001, -48.162239949836689),
        (0.37, -2.7953014108905641),
        (0.5, -1.9635100260214235),
        (1.0, -0.57721566490153287),
        (1.46, -0.0015805619870834522),
        (5.5, 1.6110931485817512),
        (12.0, 2.4426616799758119),
        (111.0, 4.705018933342445),
        (803.0, 6.6877319197033183),
    ];

    #[test]
    fn digamma_reference_grid() {
        for &(x, want) in &DG_REF {
            let got = digamma(x).unwrap();
            let err = (got - want).abs() / want.abs().max(0.1);
            assert!(err < 1e-11, "x={x}: {got} vs {want} (rel {err:.2e})");
        }
    }

    #[test]
    fn digamma_known_values() {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-13);
        let psi_half = -EULER_GAMMA - 2.0 * LN_2;
        assert!((digamma(0.5).unwrap() - psi_half).abs() < 1e-13);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-13);
        assert!(digamma(0.0).is_err());
    }

    #[test]
    fn digamma_recurrence() {
        let mut x = 3.3e-3;
        while x < 8.0e2 {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert!(
                (lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1.0),
                "digamma recurrence at {x}"
            );
            x *= 2.77;
        }
    }

    #[test]
    fn params_derived_quantities() {
        let pr = p(3, 0.5);
        assert_eq!(pr.p_star(), 1.5);
        assert_eq!(pr.m0(), -2.0);
        assert!((pr.p_star() - 1.0 - 2.0 * pr.s() / (pr.dim() - 2.0 * pr.s())).abs() < 1e-15);
        assert!(Params::new(1, 0.7).is_err()); // N > 2s violated
        assert!(Params::new(3, 0.0).is_err());
        assert!(Params::new(3, 1.0).is_err());
        assert!(Params::new(0, 0.5).is_err());
    }

    #[test]
    fn c_s_zeros_exact() {
        for &(n, s) in &[(3u32, 0.5), (3, 0.75), (4, 0.5), (5, 0.9)] {
            let pr = p(n, s);
            assert_eq!(c_s(&pr, 0.0).unwrap(), 0.0);
            assert_eq!(c_s(&pr, 2.0 * s - n as f64).unwrap(), 0.0);
        }
    }

    #[test]
    fn c_s_domain_errors() {
        let pr = p(3, 0.5);
        assert!(c_s(&pr, -3.0).is_err());
        assert!(c_s(&pr, 1.0).is_err());
        assert!(c_s(&pr, 0.999).is_ok());
    }

    #[test]
    fn c_s_at_midpoint_matches_closed_form_max() {
        // (N=3, s=0.5, τ=-1) → 2/π, and the general closed form
        let pr = p(3, 0.5);
        let got = c_s(&pr, -1.0).unwrap();
        assert!((got - 2.0 / PI).abs() < 1e-14);
        for &(n, s) in &[(3u32, 0.5), (3, 0.75), (4, 0.5), (5, 0.9)] {
            let pr = p(n, s);
            let nf = n as f64;
            let mx = (2.0 * s * LN_2 + 2.0 * log_gamma((nf + 2.0 * s) / 4.0).unwrap()
                - 2.0 * log_gamma((nf - 2.0 * s) / 4.0).unwrap())
            .exp();
            let got = c_s(&pr, (2.0 * s - nf) / 2.0).unwrap();
            assert!((got / mx - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn c_s_classical_limit() {
        // C_s(τ) → −τ(τ+N−2) as s → 1⁻; brute-force oracle: the
        // finite-difference Laplacian of r^τ in N dimensions.
        let n = 3u32;
        let tau = -0.5;
        let r = 1.0;
        let h = 1e-5;
        let pow = |x: f64| x.powf(tau);
        let lap = -((pow(r + h) + pow(r - h) - 2.0 * pow(r)) / (h * h)
            + (n as f64 - 1.0) / r * (pow(r + h) - pow(r - h)) / (2.0 * h));
        assert!((lap - -tau * (tau + n as f64 - 2.0)).abs() < 1e-4);
        let mut last = f64::INFINITY;
        for &s in &[0.9, 0.99, 0.999] {
            let pr = p(n, s);
            let dev = (c_s(&pr, tau).unwrap() - -tau * (tau + n as f64 - 2.0)).abs();
            assert!(dev < last, "deviation must shrink as s→1⁻");
            last = dev;
        }
        assert!(last < 1e-2);
    }

    #[test]
    fn c_s_prime0_examples() {
        // (3, 0.5) → −π/2 ; (4, 0.5) → −2
        assert!((c_s_prime0(&p(3, 0.5)) + PI / 2.0).abs() < 1e-14);
        assert!((c_s_prime0(&p(4, 0.5)) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &(n, s) in &[(3u32, 0.5), (3, 0.75), (4, 0.5), (5, 0.9)] {
            let pr = p(n, s);
            // C'(0) vs lim C_s(τ)/τ by central difference
            let fd1 = (c_s(&pr, h).unwrap() - c_s(&pr, -h).unwrap()) / (2.0 * h);
            assert!((fd1 / c_s_prime0(&pr) - 1.0).abs() < 1e-6);
            // C''(0) vs second central difference
            let fd2 = (c_s(&pr, h).unwrap() + c_s(&pr, -h).unwrap()) / (h * h);
            let cpp = c_s_second0(&pr);
            assert!(cpp < 0.0);
            assert!((fd2 / cpp - 1.0).abs() < 1e-5, "N={n} s={s}: {fd2} vs {cpp}");
            // second difference at τ = 2s−N equals the one at 0 (symmetry)
            let t0 = 2.0 * s - n as f64;
            let fd2b = (c_s(&pr, t0 + h).unwrap() + c_s(&pr, t0 - h).unwrap()) / (h * h);
            assert!((fd2b / fd2 - 1.0).abs() < 1e-5);
            // C'(τ) at general τ vs central differences
            for &tau in &[-0.8 * n as f64, (2.0 * s - n as f64) * 0.45, 0.6 * s] {
                let fd = (c_s(&pr, tau + h).unwrap() - c_s(&pr, tau - h).unwrap()) / (2.0 * h);
                let an = c_s_prime(&pr, tau).unwrap();
                assert!(
                    (fd / an - 1.0).abs() < 1e-5,
                    "C' at N={n} s={s} tau={tau}: fd {fd} vs {an}"
                );
            }
        }
    }

    #[test]
    fn k_s_examples() {
        let pr = p(3, 0.5);
        assert!((pr.k_s() - PI * PI).abs() < 1e-10);
        // s → 1⁻ limit (cons k-l): within 2% of 1/√2 already at s = 0.999,
        // and the deviation shrinks monotonically along an s-grid
        let target = core::f64::consts::FRAC_1_SQRT_2;
        let mut last = f64::INFINITY;
        for &s in &[0.99, 0.995, 0.999] {
            let dev = (p(3, s).k_s() / target - 1.0).abs();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 0.02);
    }

    #[test]
    fn k_s_two_routes_agree() {
        for &(n, s) in &[(3u32, 0.5), (3, 0.75), (4, 0.5), (5, 0.9), (3, 0.999)] {
            let pr = p(n, s);
            assert!((pr.k_s() / k_s_via_b_m0(&pr) - 1.0).abs() < 1e-12);
            assert!(pr.k_s() > 0.0);
        }
    }

    #[test]
    fn coeffs_examples() {
        let pr = p(3, 0.5);
        let c0 = coeffs(&pr, -1.0, 0.0).unwrap();
        assert_eq!(c0.b_m, 0.0);
        assert_eq!(c0.d_m, 0.0);
        let cm0 = coeffs(&pr, -1.0, pr.m0()).unwrap();
        assert!((cm0.b_m - PI).abs() < 1e-12);
        assert!(cm0.b_m > 0.0 && cm0.d_m < 0.0); // m < 0 signs
        let c1 = coeffs(&pr, 0.3, 1.0).unwrap();
        assert_eq!(c1.d_m, 0.0); // m(m−1)/2 = 0 at m = 1
        assert!(coeffs(&pr, -3.5, 1.0).is_err());
    }

    #[test]
    fn frac_normalization_examples() {
        // (N=1, s=1/2) sits on the N = 2s boundary, fine for the constant
        assert!((frac_normalization_ns(1, 0.5).unwrap() - 1.0 / PI).abs() < 1e-14);
        assert!((frac_normalization(&p(3, 0.5)) - 1.0 / (PI * PI)).abs() < 1e-14);
        for &(n, s) in &[(3u32, 0.1), (3, 0.9), (5, 0.99), (2, 0.5)] {
            assert!(frac_normalization(&p(n, s)) > 0.0);
        }
        assert!(frac_normalization_ns(2, 1.0).is_err());
    }

    #[test]
    fn b_tau_m_specialises_to_b_m() {
        // b_{τ,m} at τ = 2s−N equals b_m; at τ = 0 it equals −b_m
        for &(n, s) in &[(3u32, 0.5), (5, 0.9)] {
            let pr = p(n, s);
            let m = -1.7;
            let at_fund = coeffs(&pr, 2.0 * s - n as f64, m).unwrap();
            assert!((at_fund.b_tau_m / at_fund.b_m - 1.0).abs() < 1e-12);
            let at_zero = coeffs(&pr, 0.0, m).unwrap();
            assert!((at_zero.b_tau_m / at_zero.b_m + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn c_s_symmetry_grid() {
        // Chebyshev-spaced grid clustered at the singular endpoints
        for &(n, s) in &[(3u32, 0.5), (5, 0.9)] {
            let pr = p(n, s);
            let (lo, hi) = (-(n as f64) + 1e-3, 2.0 * s - 1e-3);
            for k in 0..512u32 {
                let th = (2.0 * k as f64 + 1.0) * PI / 1024.0;
                let tau = 0.5 * (lo + hi) + 0.5 * (hi - lo) * th.cos();
                let a = c_s(&pr, tau).unwrap();
                let b = c_s(&pr, 2.0 * s - n as f64 - tau).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn c_s_signs_and_endpoint_blowup() {
        let pr = p(3, 0.5);
        // positive on (2s−N, 0), negative on (0, 2s) and (−N, 2s−N)
        assert!(c_s(&pr, -1.0).unwrap() > 0.0);
        assert!(c_s(&pr, -1.9).unwrap() > 0.0);
        assert!(c_s(&pr, 0.5).unwrap() < 0.0);
        assert!(c_s(&pr, -2.5).unwrap() < 0.0);
        // −∞ at both endpoints
        assert!(c_s(&pr, -3.0 + 1e-6).unwrap() < -1e3);
        assert!(c_s(&pr, 1.0 - 1e-6).unwrap() < -1e3);
    }
}
