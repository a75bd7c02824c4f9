//! Bounds phrased through normalized generators and their inverses, plus the
//! triple-ratio sufficient condition.

use crate::error::{QamError, Result};
use crate::generator::{affine_normalize, Generator};
use crate::interval::{linspace, Interval};
use crate::norms::{common_bounds, SCAN_CELLS};
use crate::search::scan_extrema;

fn unit() -> Interval {
    Interval::closed(0.0, 1.0).expect("unit interval")
}

/// Both generators affinely mapped onto `[0, 1]`, increasing, over the
/// common scan region.
fn normalized(f: &Generator, g: &Generator, u: &Interval) -> Result<(Generator, Generator, f64, f64)> {
    let (a, b) = common_bounds(u, &[f, g])?;
    let norm = |h: &Generator| -> Result<Generator> {
        if (a, b) == h.scan_bounds() {
            return Ok(affine_normalize(h, unit()));
        }
        let (ha, hb) = (h.eval(a), h.eval(b));
        let alpha = 1.0 / (hb - ha);
        h.affine(alpha, -alpha * ha)
    };
    Ok((norm(f)?, norm(g)?, a, b))
}

/// `sup_y |F⁻¹(y) − G⁻¹(y)|` for the normalized pair, expressed in the units
/// of `U`. Scanned in `x`-space as `sup_t |t − G⁻¹(F(t))|`, both ways round.
pub fn cargo_shisha_lower(f: &Generator, g: &Generator, u: &Interval) -> Result<f64> {
    let (fnorm, gnorm, a, b) = normalized(f, g, u)?;
    let one_way = |p: &Generator, q: &Generator| -> Result<f64> {
        scan_extrema(|t| (t - q.inverse(p.eval(t))).abs(), a, b, SCAN_CELLS)
            .map(|e| e.max)
            .ok_or_else(|| QamError::Numeric { value: f64::NAN, at: "normalized inverse scan".into() })
    };
    Ok(one_way(&fnorm, &gnorm)?.max(one_way(&gnorm, &fnorm)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CargoShishaUpper {
    pub value: f64,
    pub applicable: bool,
    /// `sup |(F⁻¹)'|` in the direction that gave `value`.
    pub inverse_slope: f64,
    pub sup_diff: f64,
}

/// `2·‖(F⁻¹)'‖∞·‖F − G‖∞` for the normalized pair, in the units of `U`; the
/// smaller of the two directions. Not applicable when `inf F'` does not
/// stabilize under grid refinement.
pub fn cargo_shisha_upper(f: &Generator, g: &Generator, u: &Interval) -> Result<CargoShishaUpper> {
    let (fnorm, gnorm, a, b) = normalized(f, g, u)?;
    let sup_diff = scan_extrema(|t| (fnorm.eval(t) - gnorm.eval(t)).abs(), a, b, SCAN_CELLS)
        .map(|e| e.max)
        .ok_or_else(|| QamError::Numeric { value: f64::NAN, at: "normalized difference scan".into() })?;
    let inverse_slope = |p: &Generator| -> Option<f64> {
        let coarse = scan_extrema(|t| p.d1(t), a, b, SCAN_CELLS / 4)?.min;
        let fine = scan_extrema(|t| p.d1(t), a, b, SCAN_CELLS)?.min;
        let stable = coarse > 0.0 && fine > 0.0 && ((coarse - fine) / fine).abs() < 1e-6;
        stable.then(|| 1.0 / fine).filter(|s| s.is_finite())
    };
    let candidates = [inverse_slope(&fnorm), inverse_slope(&gnorm)];
    let best = candidates.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    if best.is_finite() {
        Ok(CargoShishaUpper { value: 2.0 * best * sup_diff, applicable: true, inverse_slope: best, sup_diff })
    } else {
        Ok(CargoShishaUpper { value: f64::INFINITY, applicable: false, inverse_slope: f64::INFINITY, sup_diff })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PalesCheck {
    /// Every admissible sample stayed below `C`.
    pub holds: bool,
    /// No triple with `|x − z| ≥ α` exists on the grid.
    pub vacuous: bool,
    pub max_deviation: f64,
    pub admissible: u64,
    pub skipped: u64,
}

/// Grid evidence for the triple-ratio condition
/// `|(f(x)−f(y))/(f(x)−f(z)) − (g(x)−g(y))/(g(x)−g(z))| < C` on all triples
/// with `|x − z| ≥ α`. A positive answer suggests, without proving, `ρ ≤ α`.
pub fn pales_sufficient_check(
    f: &Generator,
    g: &Generator,
    u: &Interval,
    alpha: f64,
    c: f64,
    grid: usize,
) -> Result<PalesCheck> {
    if !(c > 0.0 && c < 1.0) || !(alpha > 0.0) {
        return Err(QamError::InvalidSample(format!("need 0 < C < 1 and alpha > 0, got C = {c}, alpha = {alpha}")));
    }
    let (a, b) = common_bounds(u, &[f, g])?;
    let xs = linspace(a, b, grid.max(2));
    let fv: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let gv: Vec<f64> = xs.iter().map(|&x| g.eval(x)).collect();
    let osc = |v: &[f64]| {
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        hi - lo
    };
    let (osc_f, osc_g) = (osc(&fv), osc(&gv));
    let mut out = PalesCheck { holds: true, vacuous: true, max_deviation: 0.0, admissible: 0, skipped: 0 };
    for i in 0..xs.len() {
        for k in 0..xs.len() {
            if (xs[i] - xs[k]).abs() < alpha {
                continue;
            }
            let (df, dg) = (fv[i] - fv[k], gv[i] - gv[k]);
            if df.abs() < 1e-14 * osc_f || dg.abs() < 1e-14 * osc_g {
                out.skipped += xs.len() as u64;
                continue;
            }
            for j in 0..xs.len() {
                let dev = ((fv[i] - fv[j]) / df - (gv[i] - gv[j]) / dg).abs();
                out.admissible += 1;
                out.vacuous = false;
                out.max_deviation = out.max_deviation.max(dev);
                if !(dev < c) {
                    out.holds = false;
                }
            }
        }
    }
    Ok(out)
}
