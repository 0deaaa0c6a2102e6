//! Evaluation of `(-Δ)^s` on radial fields and the operator expansions
//! on log-corrected profiles.
//!
//! The principal value is realised by splitting the integral at the ball
//! `|y − x| < δ|x|`:
//!
//! * inside the ball the integrand is symmetrised to the second
//!   difference `u(x+z) + u(x−z) − 2u(x)`, which cancels the
//!   hypersingularity analytically and leaves an integrable `t^{1−2s}`
//!   scale;
//! * outside the ball the integral is reduced to one radial dimension
//!   through the angular kernel `A(r, ρ) = ∫_{S^{N−1}} |r e₁ − ρω|^{−(N+2s)} dσ`,
//!   restricted to the spherical caps excluded by the ball inside the
//!   window `(1−δ)r < ρ < (1+δ)r`;
//! * the tails below the grid and beyond it are integrated
//!   semi-analytically from the declared tail models, on the `t = −ln ρ`
//!   scale for power-log inner tails and on the `1/ρ` scale at infinity.

use crate::err::{Error, Result};
use crate::field::{InnerTail, Interp, OuterTail, RadialField};
use crate::num;
use crate::quad::{self, Estimate, QuadratureSpec, Rule};
use crate::special::{self, Params};


const PI: f64 = core::f64::consts::PI;
const FRAC_PI_2: f64 = core::f64::consts::FRAC_PI_2;

/// Angular kernel restricted to chordal distance ≥ `cap` from `r e₁`,
/// for any dimension and `0 < s < 1` (no `N > 2s` needed here).
///
/// `N = 1` is the two-point sum, `N = 3` collapses to a closed form
/// through the flat `w = 1 − cos θ` measure, and general `N` goes through
/// a composite rule on the `ln θ` scale with the `θ → 0` sliver closed
/// analytically.
fn angular_kernel_ns_impl(n: u32, s: f64, r: f64, rho: f64, cap: f64) -> f64 {
    if n == 1 {
        let mut v = 0.0;
        if num::abs(r - rho) >= cap && r != rho {
            v += num::powf(num::abs(r - rho), -(1.0 + 2.0 * s));
        }
        if r + rho >= cap {
            v += num::powf(r + rho, -(1.0 + 2.0 * s));
        }
        return v;
    }
    let nf = n as f64;
    let p = (nf + 2.0 * s) / 2.0;
    let gap2 = (r - rho) * (r - rho);
    let d_lo2 = num::max(gap2, cap * cap);
    let d_hi2 = (r + rho) * (r + rho);
    if d_lo2 >= d_hi2 {
        return 0.0;
    }
    if n == 3 {
        // 2π ∫ (d²)^{-p} dw over w with d² = gap² + 2rρw, flat measure
        let e = p - 1.0;
        return PI / (r * rho * e) * (num::powf(d_lo2, -e) - num::powf(d_hi2, -e));
    }
    // general N: θ-integral, scaled so the kernel is (a + 2(1−cos θ))^{-p}
    let a = gap2 / (r * rho);
    let theta_lo = if cap * cap > gap2 {
        // w = 1 − cos θ at the cap boundary
        let w = (cap * cap - gap2) / (2.0 * r * rho);
        libm::acos(1.0 - num::min(w, 2.0))
    } else {
        0.0
    };
    let f = |theta: f64| {
        let w = 1.0 - num::cos(theta);
        num::powf(num::sin(theta), nf - 2.0) * num::powf(a + 2.0 * w, -p)
    };
    let mut total = 0.0;
    let eps = 1e-3 * num::min(num::sqrt(a), 1.0);
    let start = num::max(theta_lo, eps);
    if theta_lo < eps && eps > 0.0 {
        // analytic sliver: θ^{N−2}(a + θ² + O(θ⁴))^{-p}
        let lo = theta_lo;
        let i1 = (num::powf(eps, nf - 1.0) - num::powf(lo, nf - 1.0)) / (nf - 1.0);
        let i2 = (num::powf(eps, nf + 1.0) - num::powf(lo, nf + 1.0)) / (nf + 1.0);
        total += num::powf(a, -p) * (i1 - p * i2 / a);
    }
    if start < PI {
        // composite on τ = ln θ; integrand variation scale is O(1) in τ
        let g = |tau: f64| {
            let theta = num::exp(tau);
            theta * f(theta)
        };
        total += quad::composite_uniform(&g, num::ln(start), num::ln(PI), 0.8, 1e-12).value;
    }
    special::sphere_area(n - 1) * num::powf(r * rho, -p) * total
}

fn angular_kernel_impl(params: &Params, r: f64, rho: f64, cap: f64, _spec: &QuadratureSpec) -> f64 {
    angular_kernel_ns_impl(params.n(), params.s(), r, rho, cap)
}

/// `∫_{S^{N−1}} |r e₁ − ρω|^{−(N+2s)} dσ(ω)` for raw `(N, s)` with
/// `N ≥ 1`, `0 < s < 1` (the kernel itself does not need `N > 2s`).
pub fn angular_kernel_ns(n: u32, s: f64, r: f64, rho: f64) -> Result<f64> {
    if n < 1 || !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { what: "angular_kernel needs N >= 1 and s in (0,1)", value: s });
    }
    if !(r > 0.0 && rho > 0.0) {
        return Err(Error::Domain { what: "angular_kernel needs r, rho > 0", value: num::min(r, rho) });
    }
    if r == rho {
        return Err(Error::QuadratureNonConverged { value: f64::INFINITY, error: f64::INFINITY, tol: 0.0 });
    }
    Ok(angular_kernel_ns_impl(n, s, r, rho, 0.0))
}

/// `∫_{S^{N−1}} |r e₁ − ρω|^{−(N+2s)} dσ(ω)`; homogeneous of degree
/// `−(N+2s)` under joint scaling of `r, ρ`.
pub fn angular_kernel(params: &Params, r: f64, rho: f64) -> Result<f64> {
    angular_kernel_ns(params.n(), params.s(), r, rho)
}

pub(crate) fn angular_kernel_full(params: &Params, r: f64, rho: f64) -> f64 {
    angular_kernel_ns_impl(params.n(), params.s(), r, rho, 0.0)
}

/// Spherical integral of the symmetrised second difference at chordal
/// radius `t` around the evaluation point.
fn second_difference_shell(params: &Params, u: &RadialField, r: f64, ur: f64, t: f64, spec: &QuadratureSpec) -> f64 {
    let n = params.n();
    if n == 1 {
        return 2.0 * (u.eval(r + t) + u.eval(num::abs(r - t)) - 2.0 * ur);
    }
    let nf = n as f64;
    let f = |th: f64| {
        let c = num::cos(th);
        let qp = num::sqrt(r * r + 2.0 * r * t * c + t * t);
        let qm = num::sqrt(r * r - 2.0 * r * t * c + t * t);
        let w = if n == 2 { 1.0 } else { num::powf(num::sin(th), nf - 2.0) };
        w * (u.eval(qp) + u.eval(qm) - 2.0 * ur)
    };
    let inner = QuadratureSpec {
        rel_tol: 1e-10,
        abs_tol: 1e-14 * num::abs(ur) * (t / r) * (t / r) + 1e-280,
        max_subdivisions: 60,
        ..*spec
    };
    2.0 * special::sphere_area(n - 1) * quad::adaptive(&f, 0.0, FRAC_PI_2, &inner).value
}

/// Radial Laplacian `u'' + (N−1)u'/r` of the interpolant, used for the
/// analytic small-`t` closure of the near field.
fn radial_laplacian(params: &Params, u: &RadialField, r: f64) -> f64 {
    let h = 1e-5 * r;
    let up = (u.eval(r + h) - u.eval(r - h)) / (2.0 * h);
    let upp = (u.eval(r + h) + u.eval(r - h) - 2.0 * u.eval(r)) / (h * h);
    upp + (params.dim() - 1.0) / r * up
}

fn inner_tail_exponent_ok(params: &Params, tail: &InnerTail) -> bool {
    tail.coeff == 0.0 || tail.exponent > -params.dim()
}

/// `(-Δ)^s u` at radius `r` for a radial field with declared tails.
///
/// Returns the value together with an accumulated quadrature error
/// estimate; the caller decides whether the estimate meets its tolerance.
pub fn fraclap_radial(params: &Params, u: &RadialField, r: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    if !(r > 0.0) {
        return Err(Error::Domain { what: "evaluation radius must be positive", value: r });
    }
    if !inner_tail_exponent_ok(params, u.inner_tail()) {
        return Err(Error::Precondition("inner tail not integrable against the kernel (needs tau > -N)"));
    }
    let delta = spec.near_field_width;
    if let Some(support) = u.support_radius() {
        // evaluation beyond the support makes the near-field split moot
        if r >= support {
            return Err(Error::Precondition("evaluation radius must lie inside the support"));
        }
    }
    let cns = special::frac_normalization(params);
    let ur = u.eval(r);
    let sphere = special::sphere_area(params.n());
    let s = params.s();
    let nf = params.dim();

    // --- near field: ball |z| < δr, symmetrised second difference ---
    let t_min = 1e-4 * delta * r;
    let t_integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        num::powf(t, -1.0 - 2.0 * s) * second_difference_shell(params, u, r, ur, t, spec)
    };
    let near_spec = QuadratureSpec { max_subdivisions: 120, ..*spec };
    let near_int = quad::adaptive_log(&t_integrand, t_min, delta * r, &near_spec);
    let lap = radial_laplacian(params, u, r);
    let small_t = sphere * (lap / nf) * num::powf(t_min, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    let near = Estimate {
        value: -(cns / 2.0) * (near_int.value + small_t),
        error: (cns / 2.0) * near_int.error,
    };

    // --- shell decomposition outside the ball ---
    let cap = delta * r;
    let full = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        num::powf(rho, nf - 1.0) * (ur - u.eval(rho)) * angular_kernel_impl(params, r, rho, 0.0, spec)
    };
    let capped = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        num::powf(rho, nf - 1.0) * (ur - u.eval(rho)) * angular_kernel_impl(params, r, rho, cap, spec)
    };

    let g1 = u.r_min();
    let win_lo = (1.0 - delta) * r;
    let win_hi = (1.0 + delta) * r;
    let mut shell = Estimate::ZERO;

    // inner tail region (0, ta]: kernel-flattened, t = -ln(rho) scale
    let ta = num::min(g1, win_lo);
    if ta > 0.0 {
        shell = shell.add(inner_tail_piece(params, u, r, ur, ta, spec));
    }

    // grid region below the window
    if ta < win_lo {
        shell = shell.add(quad::adaptive_log(&full, ta, win_lo, spec));
    }

    // principal-value window with the capped kernel
    shell = shell.add(quad::adaptive_split(&capped, &[win_lo, r, win_hi], spec, Rule::G7K15));

    // between the window and the far split
    let far_start = match u.outer_tail() {
        OuterTail::Zero { support, .. } => *support,
        OuterTail::Power { .. } => num::max(
            num::max(win_hi * 2.0, spec.far_cutoff_multiplier * r),
            u.r_max(),
        ),
    };
    if win_hi < far_start {
        shell = shell.add(quad::adaptive_log(&full, win_hi, far_start, spec));
    }

    // far field: analytic outer tail on the 1/ρ scale
    match *u.outer_tail() {
        OuterTail::Zero { .. } => {
            let f = |rho: f64| num::powf(rho, nf - 1.0) * ur * angular_kernel_impl(params, r, rho, 0.0, spec);
            shell = shell.add(quad::adaptive_upper_tail(&f, far_start, spec));
        }
        OuterTail::Power { coeff, exponent } => {
            if exponent >= 2.0 * s {
                return Err(Error::Precondition("outer power tail must have exponent < 2s"));
            }
            let f = |rho: f64| {
                num::powf(rho, nf - 1.0)
                    * (ur - coeff * num::powf(rho, exponent))
                    * angular_kernel_impl(params, r, rho, 0.0, spec)
            };
            shell = shell.add(quad::adaptive_upper_tail(&f, far_start, spec));
        }
    }

    Ok(near.add(shell.scale(cns)))
}

/// Contribution of `(0, ta]` where the field follows its inner tail model:
/// the kernel is frozen at `A(r, 0⁺)` for the slowly decaying part and the
/// exponentially small kernel variation is integrated separately.
fn inner_tail_piece(
    params: &Params,
    u: &RadialField,
    r: f64,
    ur: f64,
    ta: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let nf = params.dim();
    let tail = *u.inner_tail();
    let t1 = -num::ln(ta);

    // u(r) ∫_0^{ta} ρ^{N−1} A(r,ρ) dρ — regular integrand
    let f_ur = |rho: f64| {
        if rho <= 0.0 {
            return 0.0;
        }
        num::powf(rho, nf - 1.0) * angular_kernel_impl(params, r, rho, 0.0, spec)
    };
    let mut total = quad::adaptive(&f_ur, 0.0, ta, spec).scale(ur);

    if tail.coeff != 0.0 || tail.log_log_coeff != 0.0 {
        let a0 = angular_kernel_impl(params, r, 1e-9 * num::min(ta, r), 0.0, spec);
        let rate = tail.exponent + nf; // > 0 enforced upstream
        // kernel-frozen part: -a0 ∫_{t1}^∞ (coeff + c_ll ln L) e^{-rate·t} L^m dt
        let g = |t: f64| {
            let l = tail.log_shift + t;
            (tail.coeff + tail.log_log_coeff * num::ln(l))
                * num::exp(-rate * t)
                * num::powf(l, tail.log_power)
        };
        let t_span = num::max((num::ln(1.0 / spec.rel_tol) + 40.0) / rate, 10.0);
        let frozen = quad::adaptive_log(&|t: f64| g(t), t1, t1 + t_span, spec);
        // conservative remainder bound for the truncated exponential tail
        let t_end = t1 + t_span;
        let rem = num::abs(g(t_end)) / rate * 2.0;
        total = total.add(Estimate { value: -a0 * frozen.value, error: a0 * (frozen.error + rem) });
        // kernel variation part decays like e^{-(rate+1)t}; integrate until
        // it underflows relative to the frozen part
        let fvar = |t: f64| {
            let rho = num::exp(-t);
            let dk = angular_kernel_impl(params, r, rho, 0.0, spec) - a0;
            g(t) * dk
        };
        let var = quad::adaptive_log(&fvar, t1, t1 + num::min(t_span, 80.0), spec);
        total = total.add(Estimate { value: -var.value, error: var.error });
    }
    total
}

// ---------------------------------------------------------------------
// log-corrected profiles v_m, w_m, w_{τ,m}
// ---------------------------------------------------------------------

/// Quintic Hermite C² blend of `(−ln r)^m` down to 0 on
/// `x = ln r ∈ [xa, xb]` (value and two derivatives matched on the left,
/// all zero on the right).
#[derive(Debug, Clone, Copy)]
struct Blend {
    m: f64,
    xa: f64,
    xb: f64,
}

impl Blend {
    fn standard(m: f64) -> Self {
        Blend { m, xa: -2.0, xb: 0.0 }
    }

    fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= self.xa && x <= self.xb);
        let m = self.m;
        let la = -self.xa; // (−ln r) at the left end
        let ya = num::powf(la, m);
        let da = -m * num::powf(la, m - 1.0);
        let dda = m * (m - 1.0) * num::powf(la, m - 2.0);
        let h = self.xb - self.xa;
        let t = (x - self.xa) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        ya * h00 + h * da * h10 + h * h * dda * h20
    }
}

/// The cutoff log profile `v_m`: `(−ln r)^m` on `(0, e^{−2})`, zero for
/// `r ≥ 1`, joined by a C² quintic blend on `[e^{−2}, 1]`.
pub fn v_m_value(m: f64, r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else if r <= num::exp(-2.0) {
        num::powf(-num::ln(r), m)
    } else {
        Blend::standard(m).eval(num::ln(r))
    }
}

/// Same profile compressed onto a ball: `(−ln r)^m` for `r ≤ support/e²`,
/// zero beyond `support`, C² quintic blend between. With `support = 1`
/// this is exactly `v_m`.
pub fn v_m_truncated_value(m: f64, support: f64, r: f64) -> f64 {
    debug_assert!(support <= 1.0);
    if r >= support {
        0.0
    } else {
        let xa = num::ln(support) - 2.0;
        if num::ln(r) <= xa {
            num::powf(-num::ln(r), m)
        } else {
            Blend { m, xa, xb: num::ln(support) }.eval(num::ln(r))
        }
    }
}

/// `w_{m}` truncated at `support`: the building block of the
/// zero-exterior iteration on a ball.
pub fn make_w_m_truncated(params: &Params, m: f64, support: f64) -> Result<RadialField> {
    if !(support > 0.0 && support <= 1.0) {
        return Err(Error::Domain { what: "profile support must lie in (0, 1]", value: support });
    }
    let tau = params.fund_exponent();
    let a = support * num::exp(-2.0);
    Ok(RadialField::from_fn(
        a,
        support,
        PROFILE_NODES,
        |r| num::powf(r, tau) * v_m_truncated_value(m, support, r),
        InnerTail::power_log(1.0, tau, m),
        OuterTail::Zero { support, edge_power: 1.0 },
        Interp::LogLin,
    )
    .expect("static profile construction cannot fail"))
}

const PROFILE_NODES: usize = 4096;

/// Builds `v_m` as a radial field (dense grid over the blend, exact tail
/// below `e^{−2}`).
pub fn make_v_m(_params: &Params, m: f64) -> RadialField {
    let a = num::exp(-2.0);
    RadialField::from_fn(
        a,
        1.0,
        PROFILE_NODES,
        |r| v_m_value(m, r),
        InnerTail::power_log(1.0, 0.0, m),
        OuterTail::Zero { support: 1.0, edge_power: 1.0 },
        Interp::LogLin,
    )
    .expect("static profile construction cannot fail")
}

/// `w_m = r^{2s−N} v_m`.
pub fn make_w_m(params: &Params, m: f64) -> RadialField {
    let tau = params.fund_exponent();
    make_w_tau_m_unchecked(params, tau, m)
}

/// `w_{τ,m} = r^τ v_m` for `τ ∈ (−N, 2s)`.
pub fn make_w_tau_m(params: &Params, tau: f64, m: f64) -> Result<RadialField> {
    if !(tau > -params.dim() && tau < 2.0 * params.s()) {
        return Err(Error::Domain { what: "tau must lie in (-N, 2s)", value: tau });
    }
    Ok(make_w_tau_m_unchecked(params, tau, m))
}

fn make_w_tau_m_unchecked(params: &Params, tau: f64, m: f64) -> RadialField {
    let _ = params;
    let a = num::exp(-2.0);
    RadialField::from_fn(
        a,
        1.0,
        PROFILE_NODES,
        |r| num::powf(r, tau) * v_m_value(m, r),
        InnerTail::power_log(1.0, tau, m),
        OuterTail::Zero { support: 1.0, edge_power: 1.0 },
        Interp::LogLin,
    )
    .expect("static profile construction cannot fail")
}

/// Residual of an operator expansion together with its rescaled form
/// (bounded as `r → 0` when the expansion holds).
#[derive(Debug, Clone, Copy)]
pub struct ExpansionResidual {
    pub residual: f64,
    pub scaled: f64,
    pub quad_error: f64,
}

fn check_converged(e: Estimate, spec: &QuadratureSpec) -> Result<Estimate> {
    if e.error > 1e3 * num::max(spec.abs_tol, spec.rel_tol * num::abs(e.value)) {
        Err(Error::QuadratureNonConverged { value: e.value, error: e.error, tol: spec.rel_tol })
    } else {
        Ok(e)
    }
}

/// Residual of `(-Δ)^s w_m` against
/// `B_m r^{−N}(−ln r)^{m−1} + D_m r^{−N}(−ln r)^{m−2}`,
/// scaled by `r^N (−ln r)^{3−m}`.
pub fn expansion_residual_w(
    params: &Params,
    m: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<ExpansionResidual> {
    if !(r > 0.0 && r < num::exp(-2.0)) {
        return Err(Error::Domain { what: "expansion radius must lie in (0, e^-2)", value: r });
    }
    if m == 0.0 {
        return Err(Error::Domain { what: "expansion needs m != 0", value: m });
    }
    let w = make_w_m(params, m);
    let e = check_converged(fraclap_radial(params, &w, r, spec)?, spec)?;
    let b_m = special::c_s_prime0(params) * m;
    let d_m = special::c_s_second0(params) * m * (m - 1.0) / 2.0;
    let l = -num::ln(r);
    let nf = params.dim();
    let predicted = b_m * num::powf(r, -nf) * num::powf(l, m - 1.0)
        + d_m * num::powf(r, -nf) * num::powf(l, m - 2.0);
    let residual = e.value - predicted;
    Ok(ExpansionResidual {
        residual,
        scaled: residual * num::powf(r, nf) * num::powf(l, 3.0 - m),
        quad_error: e.error,
    })
}

/// Residual of `(-Δ)^s v_m` against
/// `−B_m r^{−2s}(−ln r)^{m−1} + D_m r^{−2s}(−ln r)^{m−2}`,
/// scaled by `r^{2s} (−ln r)^{3−m}`.
pub fn expansion_residual_v(
    params: &Params,
    m: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<ExpansionResidual> {
    if !(r > 0.0 && r < num::exp(-2.0)) {
        return Err(Error::Domain { what: "expansion radius must lie in (0, e^-2)", value: r });
    }
    if m == 0.0 {
        return Err(Error::Domain { what: "expansion needs m != 0", value: m });
    }
    let v = make_v_m(params, m);
    let e = check_converged(fraclap_radial(params, &v, r, spec)?, spec)?;
    let b_m = special::c_s_prime0(params) * m;
    let d_m = special::c_s_second0(params) * m * (m - 1.0) / 2.0;
    let l = -num::ln(r);
    let s2 = 2.0 * params.s();
    let predicted = -b_m * num::powf(r, -s2) * num::powf(l, m - 1.0)
        + d_m * num::powf(r, -s2) * num::powf(l, m - 2.0);
    let residual = e.value - predicted;
    Ok(ExpansionResidual {
        residual,
        scaled: residual * num::powf(r, s2) * num::powf(l, 3.0 - m),
        quad_error: e.error,
    })
}

/// Residual of `(-Δ)^s w_{τ,m}` against
/// `C_s(τ) w_{τ,m} r^{−2s} + B_{τ,m} r^{τ−2s}(−ln r)^{m−1}`,
/// scaled by `r^{2s−τ} (−ln r)^{2−m}`.
pub fn expansion_residual_w_tau(
    params: &Params,
    tau: f64,
    m: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<ExpansionResidual> {
    if !(r > 0.0 && r < num::exp(-2.0)) {
        return Err(Error::Domain { what: "expansion radius must lie in (0, e^-2)", value: r });
    }
    let w = make_w_tau_m(params, tau, m)?;
    let e = check_converged(fraclap_radial(params, &w, r, spec)?, spec)?;
    let c_tau = special::c_s(params, tau)?;
    let b_tau_m = special::coeffs(params, tau, m)?.b_tau_m;
    let l = -num::ln(r);
    let s2 = 2.0 * params.s();
    let predicted = c_tau * w.eval(r) * num::powf(r, -s2)
        + b_tau_m * num::powf(r, tau - s2) * num::powf(l, m - 1.0);
    let residual = e.value - predicted;
    Ok(ExpansionResidual {
        residual,
        scaled: residual * num::powf(r, s2 - tau) * num::powf(l, 2.0 - m),
        quad_error: e.error,
    })
}
