//! Constants of the three-parameter lower estimate: `C₀` maximizes
//! `C³ / (3072·e^C·(e^C − 1))`, with `y₀` the maximum and
//! `y₁ = 1 / (384·e^{C₀/2}·(e^{C₀/2} − 1))`.

use std::sync::OnceLock;

use crate::search::{bisect, golden_max};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimConstants {
    pub c0: f64,
    pub y0: f64,
    pub y1: f64,
    /// `|d/dC ln h(C)|` at `C₀`.
    pub residual: f64,
}

pub(crate) fn ln_h(c: f64) -> f64 {
    3.0 * c.ln() - 3072f64.ln() - c - c.exp_m1().ln()
}

/// `d/dC ln h(C) = 3/C − 1 − 1/(1 − e^{−C})`, strictly decreasing on `(0, ∞)`.
pub(crate) fn stationarity(c: f64) -> f64 {
    3.0 / c - 1.0 + 1.0 / (-c).exp_m1()
}

pub fn compute_estim_constants() -> EstimConstants {
    // golden section pins C₀ to about sqrt(eps); bisection on the
    // derivative takes it the rest of the way
    let (c_golden, _) = golden_max(ln_h, 1e-6, 10.0, 1e-12);
    let lo = (c_golden - 1e-3).max(1e-6);
    let hi = (c_golden + 1e-3).min(10.0);
    let c0 =
        if stationarity(lo) > 0.0 && stationarity(hi) < 0.0 { bisect(stationarity, lo, hi, 0.0) } else { c_golden };
    EstimConstants {
        c0,
        y0: ln_h(c0).exp(),
        y1: 1.0 / (384.0 * (0.5 * c0).exp() * (0.5 * c0).exp_m1()),
        residual: stationarity(c0).abs(),
    }
}

/// Cached [`compute_estim_constants`].
pub fn estim_constants() -> EstimConstants {
    static CONSTS: OnceLock<EstimConstants> = OnceLock::new();
    *CONSTS.get_or_init(compute_estim_constants)
}
