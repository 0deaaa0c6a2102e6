//! Adaptive Gauss-Kronrod quadrature on finite intervals, plus the
//! substitutions used throughout the crate (logarithmic scale, inverse
//! scale for half-infinite tails, endpoint power flattening).
//!
//! Determinism: subdivision always splits the interval with the largest
//! current error estimate, ties broken by the left endpoint, so a given
//! integrand and spec always produce the same panel tree.

use crate::num;
use alloc::vec::Vec;

/// Tolerances and limits for singular quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: u32,
    /// Half-width δ of the principal-value window `|ρ − r| < δr`.
    pub near_field_width: f64,
    /// The far split starts at this multiple of the evaluation radius.
    pub far_cutoff_multiplier: f64,
}

impl QuadratureSpec {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(crate::Error::Precondition("quadrature tolerances must be positive"));
        }
        if !(self.near_field_width > 0.0 && self.near_field_width <= 0.5) {
            return Err(crate::Error::Precondition("near_field_width must lie in (0, 0.5]"));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-13,
            max_subdivisions: 400,
            near_field_width: 0.25,
            far_cutoff_multiplier: 8.0,
        }
    }
}

/// A value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: 0.0, error: 0.0 };

    pub fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
        }
    }

    pub fn scale(self, c: f64) -> Estimate {
        Estimate {
            value: c * self.value,
            error: num::abs(c) * self.error,
        }
    }
}

/// Which embedded rule a panel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    G7K15,
    G10K21,
}

// 15-point Kronrod extension of 7-point Gauss (positive half, node 0 first).
const XK15: [f64; 8] = [
    0.000_000_000_000_000_000_000_000_000_000_000,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.991_455_371_120_812_639_206_854_697_526_329,
];
const WK15: [f64; 8] = [
    0.209_482_141_084_727_828_012_999_174_891_714,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.022_935_322_010_529_224_963_732_008_058_970,
];
// Gauss weights for the even-indexed K15 nodes (0, 2, 4, 6).
const WG7: [f64; 4] = [
    0.417_959_183_673_469_387_755_102_040_816_327,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.129_484_966_168_869_693_270_611_432_679_082,
];

// 21-point Kronrod extension of 10-point Gauss (positive half, descending
// nodes as published; index 10 is the centre).
const XK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed K21 nodes.
const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One Gauss-Kronrod pass over `[a, b]`; returns the Kronrod value and
/// the |K − G| error estimate.
pub fn gk_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: Rule) -> Estimate {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = 0.0;
    let mut gauss = 0.0;
    match rule {
        Rule::G7K15 => {
            let fc = f(mid);
            kron += WK15[0] * fc;
            gauss += WG7[0] * fc;
            for i in 1..8 {
                let fs = f(mid - half * XK15[i]) + f(mid + half * XK15[i]);
                kron += WK15[i] * fs;
                if i % 2 == 0 {
                    gauss += WG7[i / 2] * fs;
                }
            }
        }
        Rule::G10K21 => {
            let fc = f(mid);
            kron += WK21[10] * fc;
            for i in 0..10 {
                let fs = f(mid - half * XK21[i]) + f(mid + half * XK21[i]);
                kron += WK21[i] * fs;
                if i % 2 == 1 {
                    gauss += WG10[i / 2] * fs;
                }
            }
        }
    }
    Estimate {
        value: half * kron,
        error: num::abs(half * (kron - gauss)),
    }
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Estimate {
    adaptive_with_rule(f, a, b, spec, Rule::G7K15)
}

pub fn adaptive_with_rule<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    rule: Rule,
) -> Estimate {
    adaptive_split(f, &[a, b], spec, rule)
}

/// Adaptive integration with caller-supplied initial breakpoints
/// (singular or near-singular interior points should be breakpoints).
pub fn adaptive_split<F: Fn(f64) -> f64>(
    f: &F,
    pts: &[f64],
    spec: &QuadratureSpec,
    rule: Rule,
) -> Estimate {
    debug_assert!(pts.len() >= 2);
    let mut panels: Vec<Panel> = Vec::with_capacity(64);
    for w in pts.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let e = gk_panel(f, w[0], w[1], rule);
        panels.push(Panel { a: w[0], b: w[1], value: e.value, error: e.error });
    }
    let mut splits = 0u32;
    loop {
        let mut total = 0.0;
        let mut err = 0.0;
        for p in &panels {
            total += p.value;
            err += p.error;
        }
        let tol = num::max(spec.abs_tol, spec.rel_tol * num::abs(total));
        if err <= tol || splits >= spec.max_subdivisions {
            return Estimate { value: total, error: err };
        }
        // worst panel first; ties go to the leftmost
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error
                || (p.error == panels[worst].error && p.a < panels[worst].a)
            {
                worst = i;
            }
        }
        let p = panels[worst];
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // interval exhausted at machine precision
            return Estimate { value: total, error: err };
        }
        let left = gk_panel(f, p.a, m, rule);
        let right = gk_panel(f, m, p.b, rule);
        panels[worst] = Panel { a: p.a, b: m, value: left.value, error: left.error };
        panels.push(Panel { a: m, b: p.b, value: right.value, error: right.error });
        splits += 1;
    }
}

fn panel_recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, depth: u32) -> Estimate {
    let e = gk_panel(f, a, b, Rule::G7K15);
    if depth == 0 || e.error <= rel_tol * num::abs(e.value) + 1e-300 {
        return e;
    }
    let m = 0.5 * (a + b);
    panel_recurse(f, a, m, rel_tol, depth - 1).add(panel_recurse(f, m, b, rel_tol, depth - 1))
}

/// Composite GK15 over uniform panels of width `step`, each refined at
/// most three dyadic levels. Cheap and deterministic for integrands whose
/// variation scale is known in advance.
pub fn composite_uniform<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    step: f64,
    rel_tol: f64,
) -> Estimate {
    if b <= a {
        return Estimate::ZERO;
    }
    let n = ((b - a) / step) as usize + 1;
    let h = (b - a) / n as f64;
    let mut acc = Estimate::ZERO;
    for i in 0..n {
        let lo = a + h * i as f64;
        let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
        acc = acc.add(panel_recurse(f, lo, hi, rel_tol, 3));
    }
    acc
}

/// ∫_a^b f(ρ) dρ computed on the logarithmic scale (a > 0).
pub fn adaptive_log<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Estimate {
    debug_assert!(a > 0.0 && b > a);
    let g = |t: f64| {
        let rho = num::exp(t);
        f(rho) * rho
    };
    adaptive(&g, num::ln(a), num::ln(b), spec)
}

/// ∫_a^∞ f(ρ) dρ via the substitution ρ = a/v, v ∈ (0, 1].
pub fn adaptive_upper_tail<F: Fn(f64) -> f64>(f: &F, a: f64, spec: &QuadratureSpec) -> Estimate {
    debug_assert!(a > 0.0);
    let g = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let rho = a / v;
        f(rho) * rho / v
    };
    adaptive(&g, 0.0, 1.0, spec)
}

/// ∫_a^b f(ρ) dρ where f ~ (ρ − a)^α near a with α > −1: the substitution
/// ρ = a + ξ^{1/(1+α)} flattens the endpoint.
pub fn adaptive_left_power<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    debug_assert!(alpha > -1.0);
    let p = 1.0 / (1.0 + alpha);
    let xi_max = num::powf(b - a, 1.0 + alpha);
    let g = |xi: f64| {
        if xi <= 0.0 {
            return 0.0;
        }
        let d = num::powf(xi, p);
        f(a + d) * p * d / xi
    };
    adaptive(&g, 0.0, xi_max, spec)
}
