//! Quasi-arithmetic means of weighted samples.

use crate::error::{QamError, Result};
use crate::generator::Generator;

/// Weights within this distance of summing to one are silently renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Entries `a_1..a_n` with strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedSample {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(QamError::InvalidSample("sample is empty".into()));
        }
        if values.len() != weights.len() {
            return Err(QamError::InvalidSample(format!("{} values but {} weights", values.len(), weights.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(QamError::InvalidSample(format!("non-finite value {v}")));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(QamError::InvalidSample(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(QamError::InvalidSample(format!("weights sum to {total}, not 1")));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { values, weights })
    }

    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(values, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + Clone + '_ {
        self.values.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `(1/s) ln Σ wᵢ exp(s·aᵢ)` over `(aᵢ, ln wᵢ)` pairs, with the largest
/// exponent factored out.
fn log_sum_exp_mean(s: f64, points: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let shift = points.clone().map(|(a, lw)| s * a + lw).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = points.map(|(a, lw)| (s * a + lw - shift).exp()).sum();
    (shift + sum.ln()) / s
}

/// `f⁻¹(Σ wᵢ f(aᵢ))`.
pub fn qa_mean(g: &Generator, sample: &WeightedSample) -> Result<f64> {
    let dom = g.domain();
    if let Some(&v) = sample.values().iter().find(|&&v| !dom.closure_contains(v) || !g.eval(v).is_finite()) {
        return Err(QamError::OutsideDomain { value: v, domain: dom.to_string() });
    }
    let (lo, hi) = (sample.min(), sample.max());
    if lo == hi {
        return Ok(lo);
    }
    let m = match g.exp_rate() {
        Some(0.0) => sample.pairs().map(|(a, w)| w * a).sum(),
        Some(s) => log_sum_exp_mean(s, sample.pairs().map(|(a, w)| (a, w.ln()))),
        None => g.inverse(sample.pairs().map(|(a, w)| w * g.eval(a)).sum()),
    };
    Ok(m.clamp(lo, hi))
}

/// The log-exp mean `E^s`.
pub fn exp_mean(s: f64, sample: &WeightedSample) -> f64 {
    let (lo, hi) = (sample.min(), sample.max());
    let m = if s == 0.0 {
        sample.pairs().map(|(a, w)| w * a).sum()
    } else {
        log_sum_exp_mean(s, sample.pairs().map(|(a, w)| (a, w.ln())))
    };
    m.clamp(lo, hi)
}

/// The power mean `P_s`; the geometric mean at `s = 0`.
pub fn power_mean(s: f64, sample: &WeightedSample) -> Result<f64> {
    if let Some(&v) = sample.values().iter().find(|&&v| !(v > 0.0)) {
        return Err(QamError::OutsideDomain { value: v, domain: "(0, inf)".into() });
    }
    let (lo, hi) = (sample.min(), sample.max());
    let m = if s == 0.0 {
        sample.pairs().map(|(a, w)| w * a.ln()).sum::<f64>().exp()
    } else {
        // x^s = exp(s ln x); same factoring as the log-exp mean
        log_sum_exp_mean(s, sample.pairs().map(|(a, w)| (a.ln(), w.ln()))).exp()
    };
    Ok(m.clamp(lo, hi))
}

/// Two-entry mean `f⁻¹(θ f(z) + (1−θ) f(x))`.
pub fn two_point_mean(g: &Generator, z: f64, x: f64, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(QamError::InvalidSample(format!("theta = {theta} is outside [0, 1]")));
    }
    let (a, b) = g.scan_bounds();
    for v in [z, x] {
        if !(v >= a && v <= b) {
            return Err(QamError::OutsideDomain { value: v, domain: g.domain().to_string() });
        }
    }
    if theta == 0.0 {
        return Ok(x);
    }
    if theta == 1.0 {
        return Ok(z);
    }
    Ok(two_point_weighted(g, z, x, theta, 1.0 - theta))
}

/// Two-entry mean with the weights given separately so both can be tiny
/// without cancellation. Callers guarantee `z`, `x` lie in the scan region.
pub(crate) fn two_point_weighted(g: &Generator, z: f64, x: f64, wz: f64, wx: f64) -> f64 {
    if z == x {
        return x;
    }
    let m = match g.exp_rate() {
        Some(0.0) => wz * z + wx * x,
        Some(s) => log_sum_exp_mean(s, [(z, wz.ln()), (x, wx.ln())].into_iter()),
        None => g.inverse(wz * g.eval(z) + wx * g.eval(x)),
    };
    m.clamp(z.min(x), z.max(x))
}
