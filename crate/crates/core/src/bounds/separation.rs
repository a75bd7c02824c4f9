//! `(φ, K, δ)`-separation: a closed `V ⊆ U` of length `φ` on which
//! `|A f|, |A g| ≤ K` and `|A f − A g| ≥ δ`, and the lower bounds it yields.

use crate::error::{QamError, Result};
use crate::generator::Generator;
use crate::interval::{linspace, Interval};
use crate::norms::common_bounds;
use crate::search::scan_extrema;

pub const DEFAULT_PHI_GRID: usize = 64;
/// Samples of the Arrow–Pratt indices per lattice cell during the search.
const SAMPLES_PER_CELL: usize = 16;
pub const VERIFY_CELLS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCertificate {
    pub v: Interval,
    pub phi: f64,
    pub k: f64,
    pub delta: f64,
    /// Smallest margins of `K − |A f|`, `K − |A g|` and `|A f − A g| − δ`
    /// on the verification grid.
    pub residuals: [f64; 3],
}

impl SeparationCertificate {
    /// A certificate from given parameters, for evaluating the bounds
    /// without a generator pair.
    pub fn from_parameters(phi: f64, k: f64, delta: f64) -> Result<Self> {
        if !(phi > 0.0 && k > 0.0 && delta > 0.0 && delta <= 2.0 * k) {
            return Err(QamError::InvalidSample(format!(
                "need phi > 0 and 0 < delta <= 2K, got phi = {phi}, K = {k}, delta = {delta}"
            )));
        }
        Ok(Self { v: Interval::closed(0.0, phi)?, phi, k, delta, residuals: [0.0; 3] })
    }
}

/// `Θ(x) = 1 − e^{−x} − x e^{−x}`.
pub fn theta_fn(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        x2 * (0.5 - x / 3.0 + x2 / 8.0 - x2 * x / 30.0 + x2 * x2 / 144.0)
    } else {
        -(-x).exp_m1() - x * (-x).exp()
    }
}

/// `ω(x) = (e^{−x} − 1)/x`, with `ω(0) = −1`.
fn omega(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        -1.0 + 0.5 * x
    } else {
        (-x).exp_m1() / x
    }
}

/// `(1/K)·ln(1 + (δ/K)·Θ(Kφ/2))`.
pub fn box_lower_simplified_value(phi: f64, k: f64, delta: f64) -> f64 {
    ((delta / k) * theta_fn(0.5 * k * phi)).ln_1p() / k
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxBound {
    pub value: f64,
    pub alpha: f64,
    /// `α ≤ 0`; the bound collapses to zero.
    pub degenerate: bool,
}

/// `(1/K)·ln(1 + Kα)` with
/// `α = (e^{−Kφ/2} − 1)/K − (e^{(δ−K)φ/2} − 1)/(K − δ)`.
///
/// Written as `α = (φ/2)·(ω(Kφ/2) − ω((K−δ)φ/2))`, which removes the
/// singularity at `δ = K`.
pub fn box_lower_value(phi: f64, k: f64, delta: f64) -> BoxBound {
    let alpha = 0.5 * phi * (omega(0.5 * k * phi) - omega(0.5 * (k - delta) * phi));
    if !(alpha > 0.0) {
        return BoxBound { value: 0.0, alpha, degenerate: true };
    }
    BoxBound { value: (k * alpha).ln_1p() / k, alpha, degenerate: false }
}

pub fn box_lower(cert: &SeparationCertificate) -> BoxBound {
    box_lower_value(cert.phi, cert.k, cert.delta)
}

pub fn box_lower_simplified(cert: &SeparationCertificate) -> f64 {
    box_lower_simplified_value(cert.phi, cert.k, cert.delta)
}

/// Searches closed subintervals with endpoints on a `phi_grid` lattice for
/// the one maximizing the simplified box bound, then re-measures `K` and `δ`
/// on that interval with a finer scan. `None` when no interval separates.
pub fn find_separation(
    f: &Generator,
    g: &Generator,
    u: &Interval,
    phi_grid: usize,
) -> Result<Option<SeparationCertificate>> {
    let (a, b) = common_bounds(u, &[f, g])?;
    let cells = phi_grid.max(1);
    let samples = cells * SAMPLES_PER_CELL;
    let ts = linspace(a, b, samples + 1);
    let mut bound_k = Vec::with_capacity(ts.len());
    let mut gap = Vec::with_capacity(ts.len());
    for &t in &ts {
        let (af, ag) = (f.arrow_pratt_unchecked(t), g.arrow_pratt_unchecked(t));
        if !af.is_finite() || !ag.is_finite() {
            return Err(QamError::Numeric { value: if af.is_finite() { ag } else { af }, at: format!("t = {t}") });
        }
        bound_k.push(af.abs().max(ag.abs()));
        gap.push((af - ag).abs());
    }

    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..cells {
        let (mut k, mut d) = (0.0f64, f64::INFINITY);
        let mut s = i * SAMPLES_PER_CELL;
        for j in i + 1..=cells {
            while s <= j * SAMPLES_PER_CELL {
                k = k.max(bound_k[s]);
                d = d.min(gap[s]);
                s += 1;
            }
            if d <= 0.0 {
                break;
            }
            let phi = ts[j * SAMPLES_PER_CELL] - ts[i * SAMPLES_PER_CELL];
            let score = box_lower_simplified_value(phi, k, d);
            if best.is_none_or(|(v, _, _)| score > v) {
                best = Some((score, i, j));
            }
        }
    }
    let Some((_, i, j)) = best else { return Ok(None) };
    let (lo, hi) = (ts[i * SAMPLES_PER_CELL], ts[j * SAMPLES_PER_CELL]);
    verify(f, g, lo, hi)
}

fn verify(f: &Generator, g: &Generator, lo: f64, hi: f64) -> Result<Option<SeparationCertificate>> {
    let numeric = || QamError::Numeric { value: f64::NAN, at: format!("separation scan on [{lo}, {hi}]") };
    let ap_f = |t: f64| f.arrow_pratt_unchecked(t);
    let ap_g = |t: f64| g.arrow_pratt_unchecked(t);
    let ef = scan_extrema(ap_f, lo, hi, VERIFY_CELLS).ok_or_else(numeric)?;
    let eg = scan_extrema(ap_g, lo, hi, VERIFY_CELLS).ok_or_else(numeric)?;
    let k = [ef.max, ef.min, eg.max, eg.min].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let delta = scan_extrema(|t| (ap_f(t) - ap_g(t)).abs(), lo, hi, VERIFY_CELLS).ok_or_else(numeric)?.min;
    if !(delta > 0.0) || !(k > 0.0) {
        return Ok(None);
    }
    let mut residuals = [f64::INFINITY; 3];
    for t in linspace(lo, hi, VERIFY_CELLS + 1) {
        let (af, ag) = (ap_f(t), ap_g(t));
        residuals[0] = residuals[0].min(k - af.abs());
        residuals[1] = residuals[1].min(k - ag.abs());
        residuals[2] = residuals[2].min((af - ag).abs() - delta);
    }
    Ok(Some(SeparationCertificate { v: Interval::closed(lo, hi)?, phi: hi - lo, k, delta, residuals }))
}
