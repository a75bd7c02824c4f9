//! Numerical measurement of the Cargo–Shisha distance
//! `ρ(A[f], A[g]) = sup |A[f]_θ(z,x) − A[g]_θ(z,x)|` over `x, z ∈ U`, `θ ∈ (0,1)`.
//!
//! The search runs on a grid in `(x, z, logit θ)` followed by coordinate-wise
//! golden-section refinement. Weights are carried as `(σ(t), σ(−t))` so that
//! both stay accurate however close `θ` gets to 0 or 1.

use std::cell::Cell;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{QamError, Result};
use crate::generator::Generator;
use crate::interval::{linspace, Interval};
use crate::mean::two_point_weighted;
use crate::norms::common_bounds;
use crate::search::{golden_max, logistic, logit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Grid points per spatial axis.
    pub grid_n: usize,
    /// Grid points on the `θ` axis.
    pub grid_m: usize,
    /// Refinement step tolerance; `None` means `1e-9·|U|`.
    pub tol: Option<f64>,
    pub max_refine_iters: usize,
    /// Smallest weight searched; `θ ∈ [theta_min, 1 − theta_min]`.
    pub theta_min: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { grid_n: 64, grid_m: 64, tol: None, max_refine_iters: 200, theta_min: 1e-15 }
    }
}

impl OptimizerConfig {
    pub fn tol_for(&self, len: f64) -> f64 {
        self.tol.unwrap_or(1e-9 * len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoArg {
    pub x: f64,
    pub z: f64,
    pub theta: f64,
}

/// A lower estimate of `ρ` together with where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoEstimate {
    pub value: f64,
    pub arg: RhoArg,
    /// Change of the maximum during the last refinement pass.
    pub refinement_gap: f64,
    pub evaluations: u64,
    /// The maximizer sits on the closure of an open endpoint.
    pub on_boundary: bool,
}

struct Objective<'a> {
    f: &'a Generator,
    g: &'a Generator,
}

impl Objective<'_> {
    fn at(&self, x: f64, z: f64, t: f64) -> f64 {
        let (wz, wx) = (logistic(t), logistic(-t));
        (two_point_weighted(self.f, z, x, wz, wx) - two_point_weighted(self.g, z, x, wz, wx)).abs()
    }
}

/// Best `(value, flat index)` over a slab of the grid; lowest index wins ties.
fn best_in_pair(obj: &Objective, xs: &[f64], ts: &[f64], i: usize, j: usize) -> Result<(f64, usize)> {
    let m = ts.len();
    let base = (i * xs.len() + j) * m;
    let mut best = (f64::NEG_INFINITY, base);
    for (k, &t) in ts.iter().enumerate() {
        let v = obj.at(xs[i], xs[j], t);
        if !v.is_finite() {
            return Err(QamError::Numeric {
                value: v,
                at: format!("x = {}, z = {}, theta = {}", xs[i], xs[j], logistic(t)),
            });
        }
        if v > best.0 {
            best = (v, base + k);
        }
    }
    Ok(best)
}

fn grid_search(obj: &Objective, xs: &[f64], ts: &[f64]) -> Result<(f64, usize)> {
    let n = xs.len();
    // (x, z, θ) and (z, x, 1 − θ) give the same objective, so x < z suffices
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    #[cfg(feature = "parallel")]
    let per_pair: Vec<Result<(f64, usize)>> = pairs.par_iter().map(|&(i, j)| best_in_pair(obj, xs, ts, i, j)).collect();
    #[cfg(not(feature = "parallel"))]
    let per_pair: Vec<Result<(f64, usize)>> = pairs.iter().map(|&(i, j)| best_in_pair(obj, xs, ts, i, j)).collect();

    let mut best = (0.0, 0);
    let mut first = true;
    for r in per_pair {
        let (v, idx) = r?;
        if first || v > best.0 {
            best = (v, idx);
            first = false;
        }
    }
    Ok(best)
}

pub fn estimate_rho(f: &Generator, g: &Generator, u: &Interval, cfg: &OptimizerConfig) -> Result<RhoEstimate> {
    let (a, b) = common_bounds(u, &[f, g])?;
    let n = cfg.grid_n.max(2);
    let m = cfg.grid_m.max(2);
    let theta_min = cfg.theta_min.clamp(1e-300, 0.25);
    let t_max = logit(1.0 - theta_min).max(-logit(theta_min));
    let xs = linspace(a, b, n);
    let ts = linspace(-t_max, t_max, m);
    let obj = Objective { f, g };

    let (grid_value, idx) = grid_search(&obj, &xs, &ts)?;
    let grid_evals = (n * (n - 1) / 2 * m) as u64;
    let mut p = [xs[idx / (n * m)], xs[(idx / m) % n], ts[idx % m]];
    let mut value = grid_value;

    let tol = cfg.tol_for(b - a);
    let tol_t = tol / (b - a);
    let lower = [a, a, -t_max];
    let upper = [b, b, t_max];
    let half_width = [(b - a) / (n - 1) as f64, (b - a) / (n - 1) as f64, 2.0 * t_max / (m - 1) as f64];
    let step_tol = [tol, tol, tol_t];

    let evals = Cell::new(0u64);
    let eval_at = |q: &[f64; 3]| {
        evals.set(evals.get() + 1);
        let v = obj.at(q[0], q[1], q[2]);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };

    let mut gap = 0.0;
    if value > 0.0 {
        for _ in 0..cfg.max_refine_iters {
            let start = p;
            let before = value;
            for k in 0..3 {
                let lo = (p[k] - half_width[k]).max(lower[k]);
                let hi = (p[k] + half_width[k]).min(upper[k]);
                let mut q = p;
                let (arg, v) = golden_max(
                    |s| {
                        q[k] = s;
                        eval_at(&q)
                    },
                    lo,
                    hi,
                    step_tol[k],
                );
                if v > value {
                    value = v;
                    p[k] = arg;
                }
            }
            gap = (value - before).abs();
            let moved = (0..3).all(|k| (p[k] - start[k]).abs() < step_tol[k]);
            if moved {
                break;
            }
        }
    }

    let on_open_edge =
        |x: f64| (!u.lo_closed() && (x - u.lo()).abs() <= tol) || (!u.hi_closed() && (x - u.hi()).abs() <= tol);
    Ok(RhoEstimate {
        value,
        arg: RhoArg { x: p[0], z: p[1], theta: logistic(p[2]) },
        refinement_gap: gap,
        evaluations: grid_evals + evals.get(),
        on_boundary: value > 0.0 && (on_open_edge(p[0]) || on_open_edge(p[1])),
    })
}

/// Outcome of comparing `ρ` on a subinterval against `ρ` on the whole interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictionCheck {
    pub full: RhoEstimate,
    pub restricted: RhoEstimate,
    pub holds: bool,
}

/// Restricting both generators to `v ⊆ u` cannot increase the distance.
pub fn rho_restricted_monotone(
    f: &Generator,
    g: &Generator,
    u: &Interval,
    v: &Interval,
    cfg: &OptimizerConfig,
) -> Result<RestrictionCheck> {
    if !u.contains_interval(v) {
        return Err(QamError::InvalidInterval(format!("{v} is not contained in {u}")));
    }
    let full = estimate_rho(f, g, u, cfg)?;
    let restricted = estimate_rho(f, g, v, cfg)?;
    let slack = 2.0 * cfg.tol_for(u.length());
    Ok(RestrictionCheck { full, restricted, holds: restricted.value <= full.value + slack })
}
