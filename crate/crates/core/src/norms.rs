//! The ∗-norm `‖u‖∗ = sup_{x,y} |∫ₓʸ u|` and its Arrow–Pratt specializations.
//!
//! For any antiderivative `W` of `u`, `‖u‖∗ = max W − min W`. General
//! integrands are tabulated with adaptive Simpson quadrature. Arrow–Pratt
//! indices need no quadrature at all since `f''/f' = (ln |f'|)'`.

use crate::error::{QamError, Result};
use crate::generator::Generator;
use crate::interval::{linspace, Interval};
use crate::quad::{adaptive_simpson, cumulative};
use crate::search::{golden_max, golden_min, scan_extrema, Extrema};

/// Cells in the scan used to locate extremes of an antiderivative.
pub const SCAN_CELLS: usize = 4096;
const MIN_QUAD_CELLS: usize = 256;
const MAX_QUAD_CELLS: usize = 16384;
const REFINE_AGREEMENT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// Oscillation of a closed-form antiderivative.
    Oscillation,
    /// Quadrature-tabulated antiderivative on a refining grid.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarNormResult {
    pub value: f64,
    /// `(x, y)` with `|∫ₓʸ u| = value`.
    pub argmax_pair: (f64, f64),
    pub method: NormMethod,
}

impl StarNormResult {
    fn from_extrema(e: Extrema, method: NormMethod) -> Self {
        Self { value: e.oscillation().max(0.0), argmax_pair: (e.argmin, e.argmax), method }
    }
}

fn antiderivative_extrema<F: Fn(f64) -> f64>(u: &F, a: f64, b: f64, cells: usize) -> Result<Extrema> {
    let ts = linspace(a, b, cells + 1);
    let samples: Vec<f64> = ts.iter().map(|&t| u(t)).collect();
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(QamError::Numeric { value: samples[i], at: format!("t = {}", ts[i]) });
    }
    let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale * (b - a) / cells as f64;
    let w = cumulative(u, &ts, tol);

    let (mut imax, mut imin) = (0, 0);
    for (i, &v) in w.iter().enumerate() {
        if v > w[imax] {
            imax = i;
        }
        if v < w[imin] {
            imin = i;
        }
    }
    // W on [t_{i-1}, t_{i+1}] measured from the left node of the bracket
    let local = |i: usize| {
        let l = i.saturating_sub(1);
        let r = (i + 1).min(cells);
        (ts[l], ts[r], w[l])
    };
    let (l, r, base) = local(imax);
    let (argmax, max) = golden_max(|t| base + adaptive_simpson(u, l, t, tol), l, r, 1e-13 * (b - a));
    let (l, r, base) = local(imin);
    let (argmin, min) = golden_min(|t| base + adaptive_simpson(u, l, t, tol), l, r, 1e-13 * (b - a));
    Ok(Extrema {
        max: max.max(w[imax]),
        argmax: if max >= w[imax] { argmax } else { ts[imax] },
        min: min.min(w[imin]),
        argmin: if min <= w[imin] { argmin } else { ts[imin] },
    })
}

/// `‖u‖∗` over the closure of `v` for a continuous integrand.
pub fn star_norm<F: Fn(f64) -> f64>(u: F, v: &Interval) -> Result<StarNormResult> {
    let (a, b) = (v.lo(), v.hi());
    let mut cells = MIN_QUAD_CELLS;
    let mut prev = antiderivative_extrema(&u, a, b, cells)?;
    loop {
        cells *= 2;
        let next = antiderivative_extrema(&u, a, b, cells)?;
        let (p, n) = (prev.oscillation(), next.oscillation());
        let agree = (n - p).abs() <= REFINE_AGREEMENT * n.abs().max(p.abs()) || (n - p).abs() < 1e-300;
        if agree || cells >= MAX_QUAD_CELLS {
            return Ok(StarNormResult::from_extrema(next, NormMethod::Grid));
        }
        prev = next;
    }
}

/// Clips `v` to the scan region of every generator, erroring if `v` is not
/// inside their domains.
pub(crate) fn common_bounds(v: &Interval, gens: &[&Generator]) -> Result<(f64, f64)> {
    let (mut a, mut b) = (v.lo(), v.hi());
    for g in gens {
        if !g.domain().contains_interval(v) {
            return Err(QamError::OutsideDomain {
                value: if v.lo() < g.domain().lo() { v.lo() } else { v.hi() },
                domain: g.domain().to_string(),
            });
        }
        let (sa, sb) = g.scan_bounds();
        a = a.max(sa);
        b = b.min(sb);
    }
    if a >= b {
        return Err(QamError::InvalidInterval(format!("{v} has no interior inside the generators' scan regions")));
    }
    Ok((a, b))
}

fn oscillation<F: Fn(f64) -> f64>(h: F, a: f64, b: f64) -> Result<StarNormResult> {
    scan_extrema(&h, a, b, SCAN_CELLS)
        .map(|e| StarNormResult::from_extrema(e, NormMethod::Oscillation))
        .ok_or_else(|| QamError::Numeric { value: f64::NAN, at: format!("scan over [{a}, {b}]") })
}

/// `‖A f‖∗` on `v`, as the oscillation of `ln |f'|`.
pub fn star_norm_ap(f: &Generator, v: &Interval) -> Result<StarNormResult> {
    let (a, b) = common_bounds(v, &[f])?;
    oscillation(|t| f.ln_abs_d1(t), a, b)
}

/// `‖A f − A g‖∗` on `v`, as the oscillation of `ln |f'| − ln |g'|`.
pub fn star_norm_ap_diff(f: &Generator, g: &Generator, v: &Interval) -> Result<StarNormResult> {
    let (a, b) = common_bounds(v, &[f, g])?;
    oscillation(|t| f.ln_abs_d1(t) - g.ln_abs_d1(t), a, b)
}

/// `sup |h|` over `[a, b]` by scan plus golden refinement.
pub(crate) fn sup_abs<F: Fn(f64) -> f64>(h: F, a: f64, b: f64) -> Result<f64> {
    scan_extrema(&h, a, b, SCAN_CELLS)
        .map(|e| e.max.abs().max(e.min.abs()))
        .ok_or_else(|| QamError::Numeric { value: f64::NAN, at: format!("scan over [{a}, {b}]") })
}

/// A cell picked by [`partition_subinterval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionCell {
    pub cell: Interval,
    pub index: usize,
    pub cell_norm: f64,
    pub whole_norm: f64,
}

/// Splits `u`'s interval into `n` equal cells and returns the one with the
/// largest ∗-norm; it always carries at least `1/n` of the whole norm.
/// Near-ties resolve to the lowest index.
pub fn partition_subinterval<F: Fn(f64) -> f64>(u: F, whole: &Interval, n: usize) -> Result<PartitionCell> {
    let n = n.max(1);
    let whole_norm = star_norm(&u, whole)?.value;
    if n == 1 {
        return Ok(PartitionCell { cell: *whole, index: 0, cell_norm: whole_norm, whole_norm });
    }
    let mut best: Option<PartitionCell> = None;
    for (index, cell) in whole.partition(n).into_iter().enumerate() {
        let cell_norm = star_norm(&u, &cell)?.value;
        let better = match &best {
            None => true,
            Some(b) => cell_norm > b.cell_norm * (1.0 + 1e-12) + 1e-300,
        };
        if better {
            best = Some(PartitionCell { cell, index, cell_norm, whole_norm });
        }
    }
    Ok(best.expect("at least one cell"))
}
