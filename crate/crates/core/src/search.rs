//! One-dimensional search primitives: golden-section refinement, grid scans
//! for extrema, and bisection.

use crate::interval::linspace;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `h` on `[a, b]`, assuming unimodality inside the bracket.
///
/// The endpoints are compared against the interior optimum, so a maximum
/// sitting on the boundary is returned exactly.
pub fn golden_max<F: FnMut(f64) -> f64>(mut h: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = h(x1);
    let mut f2 = h(x2);
    let tol = tol.max(f64::EPSILON * (a.abs() + b.abs()));
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = h(x2);
        }
        iters += 1;
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let fx = h(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

pub fn golden_min<F: FnMut(f64) -> f64>(mut h: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|t| -h(t), a, b, tol);
    (x, -v)
}

/// Location and value of the extremes of a function over a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max: f64,
    pub argmax: f64,
    pub min: f64,
    pub argmin: f64,
}

impl Extrema {
    pub fn oscillation(&self) -> f64 {
        self.max - self.min
    }
}

/// Scans `h` on `cells + 1` equispaced points and polishes the best grid
/// point of each kind by golden section over its two neighbouring cells.
///
/// Returns `None` if any sampled value is not finite.
pub fn scan_extrema<F: Fn(f64) -> f64>(h: F, a: f64, b: f64, cells: usize) -> Option<Extrema> {
    let xs = linspace(a, b, cells + 1);
    let ys: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return None;
    }
    let (mut imax, mut imin) = (0, 0);
    for (i, &y) in ys.iter().enumerate() {
        if y > ys[imax] {
            imax = i;
        }
        if y < ys[imin] {
            imin = i;
        }
    }
    let tol = 1e-13 * (b - a);
    let bracket = |i: usize| (xs[i.saturating_sub(1)], xs[(i + 1).min(cells)]);

    let (l, r) = bracket(imax);
    let (mut argmax, mut max) = golden_max(&h, l, r, tol);
    if !(max >= ys[imax]) {
        argmax = xs[imax];
        max = ys[imax];
    }
    let (l, r) = bracket(imin);
    let (mut argmin, mut min) = golden_min(&h, l, r, tol);
    if !(min <= ys[imin]) {
        argmin = xs[imin];
        min = ys[imin];
    }
    Some(Extrema { max, argmax, min, argmin })
}

/// Bisection for a root of `h` on `[a, b]` where `h(a)` and `h(b)` bracket
/// zero. Stops once the bracket is narrower than `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut h: F, a: f64, b: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let neg_at_lo = h(lo) < 0.0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (h(mid) < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}
