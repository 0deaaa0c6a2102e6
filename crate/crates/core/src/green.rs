//! Green function and Green operator of `(-Δ)^s` on a ball with zero
//! exterior condition.
//!
//! The kernel is the classical closed form
//!
//! ```text
//! G_R(x, y) = κ_{N,s} |x−y|^{2s−N} ∫₀^{ρ₀} t^{s−1} (1+t)^{−N/2} dt ,
//! ρ₀ = (R²−|x|²)(R²−|y|²) / (R²|x−y|²) ,
//! κ_{N,s} = Γ(N/2) / (2^{2s} π^{N/2} Γ(s)²) ,
//! ```
//!
//! gated by the torsion-function test (`rhs ≡ 1` must reproduce
//! `γ(R²−r²)^s`) before anything downstream trusts it. The incomplete
//! integral is evaluated by a hypergeometric series that converges for
//! every `ρ₀ > 0`, so kernel values cost a few dozen flops.

use crate::err::{Error, Result};
use crate::field::{InnerTail, Interp, OuterTail, RadialField};
use crate::num;
use crate::quad::{self, Estimate, QuadratureSpec};
use crate::special::{self, Params};
use alloc::vec::Vec;

/// A radial Poisson problem on the ball `B_R` with zero exterior data.
#[derive(Debug, Clone)]
pub struct BallProblem {
    pub params: Params,
    pub radius: f64,
    pub rhs: RadialField,
}

impl BallProblem {
    pub fn new(params: Params, radius: f64, rhs: RadialField) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain { what: "ball radius must be positive", value: radius });
        }
        let tail = rhs.inner_tail();
        let integrable = tail.coeff == 0.0
            || tail.exponent > -params.dim()
            || (tail.exponent == -params.dim() && tail.log_power < -1.0);
        if !integrable {
            return Err(Error::Precondition(
                "rhs inner tail not integrable: needs tau > -N, or tau = -N with log power < -1",
            ));
        }
        Ok(BallProblem { params, radius, rhs })
    }
}

/// `B(ρ₀) = ∫₀^{ρ₀} t^{s−1}(1+t)^{−N/2} dt` via the Pfaff-transformed
/// hypergeometric series (all terms positive, ratio < 1 for ρ₀ < 1) and
/// the complementary series for large arguments.
fn b_incomplete(n: f64, s: f64, rho0: f64) -> f64 {
    if rho0 <= 0.0 {
        return 0.0;
    }
    if rho0 <= 1.0 {
        b_series(n, s, rho0)
    } else {
        // B(∞) − tail, with the tail mapped back to the same series form
        let total = num::exp(
            special::log_gamma(s).unwrap() + special::log_gamma(n / 2.0 - s).unwrap()
                - special::log_gamma(n / 2.0).unwrap(),
        );
        total - b_series(n, n / 2.0 - s, 1.0 / rho0)
    }
}

// ∫₀^x t^{a−1}(1+t)^{−N/2} dt = (x^a/a) (1+x)^{−N/2} ₂F₁(1, N/2; a+1; x/(1+x)) …
// written as the forward recurrence on the Pfaff-transformed series.
fn b_series(n: f64, a: f64, x: f64) -> f64 {
    let w = x / (1.0 + x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= (n / 2.0 + k) / (a + 1.0 + k) * w;
        sum += term;
        k += 1.0;
        if term < 1e-17 * sum || k > 400.0 {
            break;
        }
    }
    num::powf(x, a) / a * num::powf(1.0 + x, -n / 2.0) * sum
}

fn kappa(params: &Params) -> f64 {
    let n = params.dim();
    let s = params.s();
    num::exp(
        special::log_gamma(n / 2.0).unwrap()
            - 2.0 * s * core::f64::consts::LN_2
            - 0.5 * n * num::ln(core::f64::consts::PI)
            - 2.0 * special::log_gamma(s).unwrap(),
    )
}

/// Torsion constant `γ` with `G[1] = γ(R²−|x|²)^s`.
pub fn torsion_constant(params: &Params) -> f64 {
    let n = params.dim();
    let s = params.s();
    num::exp(
        special::log_gamma(n / 2.0).unwrap()
            - 2.0 * s * core::f64::consts::LN_2
            - special::log_gamma((n + 2.0 * s) / 2.0).unwrap()
            - special::log_gamma(1.0 + s).unwrap(),
    )
}

/// Green kernel of the ball evaluated from radii and the cosine of the
/// angle between `x` and `y`.
pub fn green_kernel(params: &Params, radius: f64, x_r: f64, y_r: f64, cos_angle: f64) -> Result<f64> {
    if !(x_r >= 0.0 && y_r >= 0.0 && x_r < radius && y_r < radius) {
        return Err(Error::Domain { what: "green_kernel needs |x|, |y| < R", value: num::max(x_r, y_r) });
    }
    let d2 = x_r * x_r - 2.0 * x_r * y_r * cos_angle + y_r * y_r;
    if d2 <= 0.0 {
        return Err(Error::Domain { what: "green_kernel needs x != y", value: 0.0 });
    }
    Ok(green_kernel_dist(params, radius, x_r, y_r, num::sqrt(d2)))
}

fn green_kernel_dist(params: &Params, radius: f64, x_r: f64, y_r: f64, d: f64) -> f64 {
    let n = params.dim();
    let s = params.s();
    let r2 = radius * radius;
    let rho0 = (r2 - x_r * x_r) * (r2 - y_r * y_r) / (r2 * d * d);
    kappa(params) * num::powf(d, 2.0 * s - n) * b_incomplete(n, s, rho0)
}

/// Antiderivative `F(σ) = ∫ σ^{2s−2} B(C/σ²) dσ` for `N = 3`: one
/// integration by parts leaves an elementary remainder.
fn green3_antiderivative(s: f64, c: f64, sigma: f64) -> f64 {
    let b = b_incomplete(3.0, s, c / (sigma * sigma));
    if num::abs(s - 0.5) > 1e-9 {
        (num::powf(sigma, 2.0 * s - 1.0) * b
            - 2.0 * num::powf(c, s) / num::sqrt(sigma * sigma + c))
            / (2.0 * s - 1.0)
    } else {
        let rt = num::sqrt(sigma * sigma + c);
        let ls = num::ln(sigma);
        ls * b - 2.0 * num::sqrt(c) * ls / rt - 2.0 * num::ln((num::sqrt(c) + rt) / sigma)
    }
}

/// Angular average `Ḡ(x_r, ρ) = ∫_{S^{N−1}} G(x_r e₁, ρω) dσ(ω)`.
///
/// `N = 3` is closed-form (one-panel quadrature when the chordal range is
/// too narrow for the antiderivative difference to be well conditioned);
/// other dimensions go through the composite `ln θ` rule.
pub fn green_angular_average(params: &Params, radius: f64, x_r: f64, rho: f64) -> f64 {
    let n = params.n();
    if n == 1 {
        return green_kernel_dist(params, radius, x_r, rho, num::abs(x_r - rho))
            + green_kernel_dist(params, radius, x_r, rho, x_r + rho);
    }
    let s = params.s();
    let d_lo = num::abs(x_r - rho);
    let d_hi = x_r + rho;
    if n == 3 {
        let r2 = radius * radius;
        let c = (r2 - x_r * x_r) * (r2 - rho * rho) / r2;
        let kp = kappa(params);
        let half = num::min(x_r, rho); // half chordal range, exactly
        if 2.0 * half < 0.1 * d_lo {
            // narrow chordal range: one direct panel with the width formed
            // from min(x, ρ) itself, immune to the (x+ρ) − (ρ−x) rounding
            let f = |sigma: f64| num::powf(sigma, 2.0 * s - 2.0) * b_incomplete(3.0, s, c / (sigma * sigma));
            let mid = num::max(x_r, rho);
            let mut acc = 0.0;
            for &(xi, wk, _wg) in GK15.iter() {
                acc += wk * f(mid + half * xi);
            }
            return 2.0 * core::f64::consts::PI * kp / (x_r * rho) * acc * half;
        }
        let fa = green3_antiderivative(s, c, d_hi) - green3_antiderivative(s, c, d_lo);
        return 2.0 * core::f64::consts::PI * kp / (x_r * rho) * fa;
    }
    // general N: composite on τ = ln θ with the θ → 0 sliver closed
    // analytically (the kernel is constant over the sliver by construction)
    let nf = n as f64;
    let a = d_lo * d_lo / (x_r * rho);
    let f = |theta: f64| {
        let w = 1.0 - num::cos(theta);
        let d = num::sqrt(d_lo * d_lo + 2.0 * x_r * rho * w);
        num::powf(num::sin(theta), nf - 2.0) * green_kernel_dist(params, radius, x_r, rho, d)
    };
    let eps = 1e-3 * num::min(num::sqrt(a), 1.0);
    let mut total = 0.0;
    if eps > 0.0 {
        total += num::powf(eps, nf - 1.0) / (nf - 1.0)
            * green_kernel_dist(params, radius, x_r, rho, d_lo);
    }
    let start = num::max(eps, 1e-280);
    let g = |tau: f64| {
        let theta = num::exp(tau);
        theta * f(theta)
    };
    total += quad::composite_uniform(&g, num::ln(start), num::ln(core::f64::consts::PI), 0.8, 1e-12).value;
    special::sphere_area(n - 1) * total
}

/// Immutable context for repeated Green-operator applications on a fixed
/// output grid: per-node quadrature panels in `ln ρ` with the angular
/// kernel averages cached at every quadrature abscissa.
pub struct GreenContext {
    params: Params,
    radius: f64,
    nodes: Vec<f64>,
    /// per node: (abscissa ρ, Kronrod weight · ρ · Ḡ, Gauss weight · ρ · Ḡ)
    panels: Vec<Vec<(f64, f64, f64)>>,
    /// per node: Ḡ(x, 0⁺) for the frozen-kernel inner-tail closure
    kernel_at_zero: Vec<f64>,
    t_deep: f64,
}

// G7K15 on [-1, 1] flattened to (abscissa, kronrod weight, gauss weight)
const GK15: [(f64, f64, f64); 15] = [
    (-0.991455371120812639206854697526329, 0.022935322010529224963732008058970, 0.0),
    (-0.949107912342758524526189684047851, 0.063092092629978553290700663189204, 0.129484966168869693270611432679082),
    (-0.864864423359769072789712788640926, 0.104790010322250183839876322541518, 0.0),
    (-0.741531185599394439863864773280788, 0.140653259715525918745189590510238, 0.279705391489276667901467771423780),
    (-0.586087235467691130294144838258730, 0.169004726639267902826583426598550, 0.0),
    (-0.405845151377397166906606412076961, 0.190350578064785409913256402421014, 0.381830050505118944950369775488975),
    (-0.207784955007898467600689403773245, 0.204432940075298892414161999234649, 0.0),
    (0.0, 0.209482141084727828012999174891714, 0.417959183673469387755102040816327),
    (0.207784955007898467600689403773245, 0.204432940075298892414161999234649, 0.0),
    (0.405845151377397166906606412076961, 0.190350578064785409913256402421014, 0.381830050505118944950369775488975),
    (0.586087235467691130294144838258730, 0.169004726639267902826583426598550, 0.0),
    (0.741531185599394439863864773280788, 0.140653259715525918745189590510238, 0.279705391489276667901467771423780),
    (0.864864423359769072789712788640926, 0.104790010322250183839876322541518, 0.0),
    (0.949107912342758524526189684047851, 0.063092092629978553290700663189204, 0.129484966168869693270611432679082),
    (0.991455371120812639206854697526329, 0.022935322010529224963732008058970, 0.0),
];

impl GreenContext {
    /// Builds the context: 400 log-spaced output nodes on
    /// `[R·10⁻¹², R·(1−10⁻³)]` and, per node, panels covering
    /// `[R·10⁻¹⁴, R]` clustered geometrically around the node and at the
    /// boundary, with the kernel averages precomputed.
    pub fn new(params: Params, radius: f64) -> Self {
        Self::with_grid(params, radius, 400)
    }

    pub fn with_grid(params: Params, radius: f64, n_nodes: usize) -> Self {
        let mut nodes = crate::field::log_grid(radius * 1e-12, radius * (1.0 - 1e-3), n_nodes);
        // geometric rungs into the boundary resolve the dist^s edge layer,
        // which log spacing alone leaves unsampled
        let mut b = 2e-3 * radius;
        while b < 0.3 * radius {
            nodes.push(radius - b);
            b *= 1.8;
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| *a == *b);
        let t_deep = radius * 1e-14;
        let mut panels = Vec::with_capacity(nodes.len());
        let mut kernel_at_zero = Vec::with_capacity(nodes.len());
        for &x in &nodes {
            panels.push(Self::node_panels(&params, radius, x, t_deep));
            kernel_at_zero.push(green_angular_average(&params, radius, x, t_deep * 0.5));
        }
        GreenContext { params, radius, nodes, panels, kernel_at_zero, t_deep }
    }

    /// Panel boundaries in ρ for one output node: log-uniform background,
    /// geometric clustering into the diagonal ρ = x and the boundary ρ = R.
    fn panel_edges(radius: f64, x: f64, t_deep: f64) -> Vec<f64> {
        let mut edges: Vec<f64> = Vec::with_capacity(96);
        let lo = num::ln(t_deep);
        let hi = num::ln(radius);
        // background: 3 panels per decade
        let n_bg = ((hi - lo) / core::f64::consts::LN_10 * 3.0) as usize + 1;
        for i in 0..=n_bg {
            edges.push(num::exp(lo + (hi - lo) * i as f64 / n_bg as f64));
        }
        // diagonal cluster: |ρ − x| from 1e-7·x up to 0.5·x, factor-2 rungs
        let mut d = 1e-7 * x;
        while d < 0.5 * x {
            if x - d > t_deep {
                edges.push(x - d);
            }
            if x + d < radius {
                edges.push(x + d);
            }
            d *= 2.0;
        }
        edges.push(x);
        // boundary cluster: R − ρ from 1e-8·R up to 0.3·R
        let mut b = 1e-8 * radius;
        while b < 0.3 * radius {
            let rho = radius - b;
            if rho > x * 1.01 && rho > t_deep {
                edges.push(rho);
            }
            b *= 2.0;
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-300 || *a == *b);
        edges
    }

    fn node_panels(params: &Params, radius: f64, x: f64, t_deep: f64) -> Vec<(f64, f64, f64)> {
        let nf = params.dim();
        let edges = Self::panel_edges(radius, x, t_deep);
        let mut out = Vec::with_capacity((edges.len() - 1) * 15);
        for w in edges.windows(2) {
            // integrate in t = ln ρ: ∫ f(ρ) ρ^{N-1} Ḡ dρ = ∫ f(e^t) e^{Nt} Ḡ dt
            let (ta, tb) = (num::ln(w[0]), num::ln(w[1]));
            let mid = 0.5 * (ta + tb);
            let half = 0.5 * (tb - ta);
            for (xi, wk, wg) in GK15 {
                let t = mid + half * xi;
                let rho = num::exp(t);
                let g = green_angular_average(params, radius, x, rho) * num::powf(rho, nf);
                out.push((rho, wk * half * g, wg * half * g));
            }
        }
        out
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn params(&self) -> &Params {
        &self.params
    }
    /// Cached quadrature for one output node: `(ρ, w_kronrod·ρ^N·Ḡ, w_gauss·ρ^N·Ḡ)`
    /// per abscissa; `G[f]` at the node is `Σ w·f(ρ)`.
    pub fn panel_points(&self, idx: usize) -> &[(f64, f64, f64)] {
        &self.panels[idx]
    }
    /// Radius below which rhs mass is closed analytically from the tail.
    pub fn deep_cutoff(&self) -> f64 {
        self.t_deep
    }
    /// `Ḡ(x_i, 0⁺)`, the frozen kernel of the deep closure.
    pub fn kernel_at_zero(&self, idx: usize) -> f64 {
        self.kernel_at_zero[idx]
    }

    /// `G[f]` on the whole grid for an rhs given as a closure plus a
    /// declared inner tail for the mass below the deep cutoff. Returns
    /// the per-node values and the summed error estimate.
    pub fn apply_fn<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        tail: &InnerTail,
        spec: &QuadratureSpec,
    ) -> crate::Result<(Vec<f64>, f64)> {
        spec.validate()?;
        let integrable = tail.coeff == 0.0
            || tail.exponent > -self.params.dim()
            || (tail.exponent == -self.params.dim() && tail.log_power < -1.0);
        if !integrable {
            return Err(Error::Precondition(
                "rhs inner tail not integrable: needs tau > -N, or tau = -N with log power < -1",
            ));
        }
        let mut values = Vec::with_capacity(self.nodes.len());
        let mut err = 0.0;
        for i in 0..self.nodes.len() {
            let e = self.apply_at(i, f).add(self.deep_tail_mass(i, tail, spec));
            values.push(e.value);
            err += e.error;
        }
        Ok((values, err))
    }

    /// `G[f]` at one output node given the rhs as a closure (values below
    /// `t_deep` come from the declared inner tail via the caller).
    pub fn apply_at<F: Fn(f64) -> f64>(&self, idx: usize, f: &F) -> Estimate {
        let mut kron = 0.0;
        let mut gauss = 0.0;
        for &(rho, wk, wg) in &self.panels[idx] {
            let v = f(rho);
            kron += wk * v;
            gauss += wg * v;
        }
        Estimate { value: kron, error: num::abs(kron - gauss) }
    }

    /// Analytic closure of the rhs mass below the deep cutoff using the
    /// declared inner tail: the kernel is frozen at `Ḡ(x, 0⁺)` (its
    /// variation over `ρ < t_deep` is `O((t_deep/x)²)`).
    fn deep_tail_mass(&self, idx: usize, tail: &InnerTail, spec: &QuadratureSpec) -> Estimate {
        if tail.coeff == 0.0 {
            return Estimate::ZERO;
        }
        let nf = self.params.dim();
        let rate = tail.exponent + nf;
        let t1 = -num::ln(self.t_deep);
        let g0 = self.kernel_at_zero[idx];
        // mass = ∫_{t1}^∞ (coeff + c_ll ln L) e^{-rate t} L^{log_power} dt, L = shift + t
        let mass = if rate == 0.0 {
            // marginal tail r^{-N} L^m with m < −1: exact in closed form,
            // including the resonant ln L factor via d/dm of the power term
            let mp1 = tail.log_power + 1.0;
            debug_assert!(mp1 < 0.0);
            let l1 = tail.log_shift + t1;
            let base = -num::powf(l1, mp1) / mp1;
            let log_part = num::powf(l1, mp1) * (1.0 - mp1 * num::ln(l1)) / (mp1 * mp1);
            Estimate {
                value: tail.coeff * base + tail.log_log_coeff * log_part,
                error: 0.0,
            }
        } else {
            let g = |t: f64| {
                let l = tail.log_shift + t;
                (tail.coeff + tail.log_log_coeff * num::ln(l))
                    * num::exp(-rate * t)
                    * num::powf(l, tail.log_power)
            };
            let span = num::max((num::ln(1.0 / spec.rel_tol) + 40.0) / rate, 10.0);
            let e = quad::adaptive_log(&g, t1, t1 + span, spec);
            Estimate { value: e.value, error: e.error + num::abs(g(t1 + span)) / rate * 2.0 }
        };
        mass.scale(g0)
    }
}

/// Applies the Green operator to the problem's rhs and returns the
/// solution as a radial field on the context grid, with its inner tail
/// fitted from the deep nodes and a `dist^s` boundary taper declared.
pub fn green_apply(ctx: &GreenContext, problem: &BallProblem, spec: &QuadratureSpec) -> Result<RadialField> {
    spec.validate()?;
    if problem.radius != ctx.radius() {
        return Err(Error::Precondition("context and problem radii differ"));
    }
    let rhs = &problem.rhs;
    let tail = *rhs.inner_tail();
    let f = |rho: f64| rhs.eval(rho);
    let (values, _err) = ctx.apply_fn(&f, &tail, spec)?;
    solution_field(ctx, values, problem)
}

fn solution_field(ctx: &GreenContext, values: Vec<f64>, problem: &BallProblem) -> Result<RadialField> {
    let params = &ctx.params;
    // fit the output's inner tail over the deepest decade with pinned
    // exponents: G[f] ~ a r^{2s−N}(−ln r)^{q} with q read off the rhs
    let tail = rhs_driven_output_tail(params, problem, &ctx.nodes, &values);
    let positive = values.iter().all(|&v| v > 0.0);
    RadialField::new(
        ctx.nodes.clone(),
        values,
        tail,
        OuterTail::Zero { support: ctx.radius, edge_power: params.s() },
        if positive { Interp::LogLog } else { Interp::LogLin },
    )
}

/// Output tail exponents: a source `~ r^{−N}(−ln r)^{q−1}` produces
/// `~ r^{2s−N}(−ln r)^{q}/B_q`; an integrable power source `r^{τ−2s}`
/// with `τ ∈ (2s−N, 0)` produces `r^τ`-bounded output. In both cases the
/// exponents are pinned and only the coefficient is fitted through the
/// deepest grid node.
fn rhs_driven_output_tail(
    params: &Params,
    problem: &BallProblem,
    nodes: &[f64],
    values: &[f64],
) -> InnerTail {
    let t = problem.rhs.inner_tail();
    let n2s = params.dim() - 2.0 * params.s();
    let (expo, logp) = if t.coeff == 0.0 {
        (0.0, 0.0)
    } else if t.exponent <= -params.dim() + 1e-12 {
        // marginal log source: one inverse-log order gained
        (-n2s, t.log_power + 1.0)
    } else if t.exponent < -2.0 * params.s() {
        // power source r^{τ-2s} with τ in (2s−N, 0): output follows r^τ
        (t.exponent + 2.0 * params.s(), t.log_power)
    } else {
        // integrable but mild source: output bounded near the origin
        (0.0, 0.0)
    };
    let r0 = nodes[0];
    let model = InnerTail { coeff: 1.0, exponent: expo, log_power: logp, log_shift: t.log_shift, log_log_coeff: 0.0 };
    let m0 = model.eval(r0);
    let coeff = if m0 != 0.0 { values[0] / m0 } else { values[0] };
    InnerTail { coeff, exponent: expo, log_power: logp, log_shift: t.log_shift, log_log_coeff: 0.0 }
}

/// The unique solution with `lim r^{N−2s} u(r) = 0`: exactly `G_s[f]`,
/// with the vanishing-trend of `r^{N−2s}u(r)` verified numerically over
/// the deepest two decades of the grid.
pub fn poisson_solve_zero_limit(
    ctx: &GreenContext,
    problem: &BallProblem,
    spec: &QuadratureSpec,
) -> Result<(RadialField, bool)> {
    let u = green_apply(ctx, problem, spec)?;
    let n2s = ctx.params.dim() - 2.0 * ctx.params.s();
    let g = |r: f64| u.eval(r) * num::powf(r, n2s);
    let r0 = u.r_min();
    let mut decreasing = true;
    let mut prev = g(r0 * 100.0);
    for k in 1..=8 {
        let r = r0 * num::powf(100.0, 1.0 - k as f64 / 8.0);
        let v = g(r);
        if v > prev * (1.0 + 1e-9) {
            decreasing = false;
        }
        prev = v;
    }
    Ok((u, decreasing))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, s: f64) -> Params {
        Params::new(n, s).unwrap()
    }

    #[test]
    fn b_incomplete_matches_quadrature() {
        let spec = QuadratureSpec { rel_tol: 1e-13, ..Default::default() };
        for &(n, s) in &[(3.0, 0.5), (3.0, 0.75), (2.0, 0.4), (5.0, 0.9)] {
            for &x in &[1e-6, 0.3, 1.0, 7.0, 1e4] {
                let direct = quad::adaptive_left_power(
                    &|t: f64| t.powf(s - 1.0) * (1.0 + t).powf(-n / 2.0),
                    0.0,
                    x,
                    s - 1.0,
                    &spec,
                )
                .value;
                let got = b_incomplete(n, s, x);
                assert!(
                    (got / direct - 1.0).abs() < 1e-10,
                    "n={n} s={s} x={x}: {got} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn kernel_symmetry_and_positivity() {
        let pr = p(3, 0.5);
        for &(xr, yr, c) in &[(0.3, 0.7, 0.2), (0.1, 0.11, -0.9), (0.5, 0.5, 0.3)] {
            let a = green_kernel(&pr, 1.0, xr, yr, c).unwrap();
            let b = green_kernel(&pr, 1.0, yr, xr, c).unwrap();
            assert!(a > 0.0);
            assert!((a - b).abs() <= 1e-12 * a);
        }
        assert!(green_kernel(&pr, 1.0, 0.3, 0.3, 1.0).is_err()); // coincident
        assert!(green_kernel(&pr, 1.0, 1.1, 0.3, 0.0).is_err());
    }

    #[test]
    fn kernel_approaches_riesz_near_diagonal() {
        // interior far from the boundary, |x−y| → 0: ratio to |x−y|^{2s−N}
        // tends to a positive constant
        let pr = p(3, 0.5);
        let mut prev = 0.0;
        for k in 1..=4 {
            let d = 0.01_f64.powi(k).min(1e-4);
            let g = green_kernel_dist(&pr, 1.0, 0.2, 0.2 + d, d);
            let ratio = g / d.powf(2.0 * 0.5 - 3.0);
            if k > 1 {
                assert!((ratio / prev - 1.0).abs() < 1e-2);
            }
            prev = ratio;
        }
        assert!(prev > 0.0);
    }

    #[test]
    fn torsion_function_n3_half() {
        // rhs ≡ 1 on B_1 → γ(1−r²)^s with γ = 1/2 at (N,s) = (3, 1/2)
        let pr = p(3, 0.5);
        assert!((torsion_constant(&pr) - 0.5).abs() < 1e-14);
        let ctx = GreenContext::with_grid(pr, 1.0, 160);
        let rhs = RadialField::constant(1.0).unwrap();
        let prob = BallProblem::new(pr, 1.0, rhs).unwrap();
        let spec = QuadratureSpec::default();
        let u = green_apply(&ctx, &prob, &spec).unwrap();
        // exact at the quadrature nodes; interpolated off-node values are
        // covered by the acceptance run on the full-size grid
        for (i, &r) in ctx.nodes().iter().enumerate() {
            let want = 0.5 * (1.0 - r * r).sqrt();
            let got = u.values()[i];
            assert!(
                (got / want - 1.0).abs() < 1e-6,
                "node r={r}: {got} vs {want}"
            );
        }
        for &r in &[1e-6f64, 0.05, 0.3, 0.7, 0.95] {
            let want = 0.5 * (1.0 - r * r).sqrt();
            let got = u.eval(r);
            assert!((got / want - 1.0).abs() < 5e-4, "r={r}: {got} vs {want}");
        }
    }

    #[test]
    fn positivity_and_comparison() {
        let pr = p(3, 0.5);
        let ctx = GreenContext::with_grid(pr, 1.0, 32);
        let spec = QuadratureSpec::default();
        let f1 = RadialField::from_fn(
            1e-12,
            1.0,
            64,
            |r| 1.0 / (1.0 + r),
            InnerTail::power_log(1.0, 0.0, 0.0),
            OuterTail::Zero { support: 1.0, edge_power: 1.0 },
            Interp::LogLog,
        )
        .unwrap();
        let f2 = RadialField::from_fn(
            1e-12,
            1.0,
            64,
            |r| 1.0 / (1.0 + r) + r,
            InnerTail::power_log(1.0, 0.0, 0.0),
            OuterTail::Zero { support: 1.0, edge_power: 1.0 },
            Interp::LogLog,
        )
        .unwrap();
        let u1 = green_apply(&ctx, &BallProblem::new(pr, 1.0, f1).unwrap(), &spec).unwrap();
        let u2 = green_apply(&ctx, &BallProblem::new(pr, 1.0, f2).unwrap(), &spec).unwrap();
        for (&r, (&v1, &v2)) in ctx.nodes().iter().zip(u1.values().iter().zip(u2.values())) {
            assert!(v1 > 0.0, "positivity at {r}");
            assert!(v2 >= v1, "comparison at {r}");
        }
    }

    #[test]
    fn marginal_log_source_produces_log_profile() {
        // rhs = r^{-N}(−ln r)^{m−1} 1_{r<r₁}, m = −2 < 0: output grows like
        // r^{2s−N}(−ln r)^m near the origin with a positive coefficient
        let pr = p(3, 0.5);
        let r1 = (-2.0_f64).exp();
        let ctx = GreenContext::with_grid(pr, r1, 48);
        let spec = QuadratureSpec::default();
        let m = -2.0;
        let rhs = RadialField::from_fn(
            r1 * 1e-13,
            r1 * (1.0 - 1e-9),
            128,
            |r| r.powf(-3.0) * (-r.ln()).powf(m - 1.0),
            InnerTail::power_log(1.0, -3.0, m - 1.0),
            OuterTail::Zero { support: r1, edge_power: 0.0 },
            Interp::LogLog,
        )
        .unwrap();
        let prob = BallProblem::new(pr, r1, rhs).unwrap();
        let (u, trend_ok) = poisson_solve_zero_limit(&ctx, &prob, &spec).unwrap();
        assert!(trend_ok, "r^{{N-2s}} u must vanish toward the origin");
        // fitted coefficient against w_m scale over the deep decade
        for &r in &[1e-9, 1e-7] {
            let c = u.eval(r) / (r.powf(-2.0) * (-r.ln()).powf(m));
            assert!(c > 0.05, "coefficient at {r} = {c}");
        }
    }
}
