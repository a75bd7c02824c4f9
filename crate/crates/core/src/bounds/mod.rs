//! Analytic lower and upper bounds on `ρ(A[f], A[g])` and the aggregated
//! [`BoundReport`].
//!
//! Most right-hand sides are not symmetric in `f` and `g`. Every bound is
//! evaluated in both directions and the sharper one is reported: the larger
//! for lower bounds, the smaller for upper bounds.

mod analytic;
mod cargo_shisha;
mod constants;
mod separation;

pub use analytic::{
    lower_estim, lower_main, lower_main_sup, lower_main_sup_value, lower_main_value, upper_star_norm, upper_universal,
    Directional, Estim, EstimCase, MainSup,
};
pub use cargo_shisha::{cargo_shisha_lower, cargo_shisha_upper, pales_sufficient_check, CargoShishaUpper, PalesCheck};
pub use constants::{compute_estim_constants, estim_constants, EstimConstants};
pub use separation::{
    box_lower, box_lower_simplified, box_lower_simplified_value, box_lower_value, find_separation, theta_fn, BoxBound,
    SeparationCertificate, DEFAULT_PHI_GRID,
};

use crate::error::Result;
use crate::generator::Generator;
use crate::interval::Interval;
use crate::norms::{common_bounds, star_norm_ap, star_norm_ap_diff, sup_abs};
use crate::rho::{estimate_rho, OptimizerConfig, RhoEstimate};

/// Slack allowed in the sandwich check.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// Scalar summaries of a generator pair that the bound formulas consume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMeasures {
    /// `max(sup |A f|, sup |A g|)` over `U`.
    pub k: f64,
    /// `‖A f − A g‖∗`.
    pub epsilon: f64,
    pub star_f: f64,
    pub star_g: f64,
    pub len: f64,
}

pub fn pair_measures(f: &Generator, g: &Generator, u: &Interval) -> Result<PairMeasures> {
    let (a, b) = common_bounds(u, &[f, g])?;
    let k = sup_abs(|t| f.arrow_pratt_unchecked(t), a, b)?.max(sup_abs(|t| g.arrow_pratt_unchecked(t), a, b)?);
    Ok(PairMeasures {
        k,
        epsilon: star_norm_ap_diff(f, g, u)?.value,
        star_f: star_norm_ap(f, u)?.value,
        star_g: star_norm_ap(g, u)?.value,
        len: u.length(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
    /// Grid evidence only; never part of the sandwich.
    Advisory,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Advisory => "advisory",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    pub applicable: bool,
    pub params: Vec<(&'static str, f64)>,
    pub note: Option<String>,
}

impl BoundEntry {
    fn new(name: &'static str, kind: BoundKind, value: f64) -> Self {
        Self { name, kind, value, applicable: true, params: Vec::new(), note: None }
    }

    fn param(mut self, key: &'static str, v: f64) -> Self {
        self.params.push((key, v));
        self
    }

    fn not_applicable(name: &'static str, kind: BoundKind, reason: String) -> Self {
        Self { name, kind, value: 0.0, applicable: false, params: Vec::new(), note: Some(reason) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub max_lower: f64,
    pub min_upper: f64,
    pub rho: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub pair: (String, String),
    pub interval: Interval,
    pub measures: PairMeasures,
    pub rho: RhoEstimate,
    pub separation: Option<SeparationCertificate>,
    pub entries: Vec<BoundEntry>,
    pub sandwich: Sandwich,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn sandwich(rho: f64, entries: &[BoundEntry]) -> Sandwich {
    let applicable = |kind| entries.iter().filter(move |e| e.applicable && e.kind == kind);
    let max_lower = applicable(BoundKind::Lower).map(|e| e.value).fold(0.0, f64::max);
    let min_upper = applicable(BoundKind::Upper).map(|e| e.value).fold(f64::INFINITY, f64::min);
    Sandwich {
        max_lower,
        min_upper,
        rho,
        holds: max_lower <= rho + SANDWICH_SLACK && rho <= min_upper + SANDWICH_SLACK,
    }
}

/// Smallest `α` on a ladder of fractions of `|U|` for which the triple-ratio
/// grid check passes with `C = 0.99`.
fn pales_entry(f: &Generator, g: &Generator, u: &Interval) -> BoundEntry {
    const C: f64 = 0.99;
    const GRID: usize = 24;
    const RUNGS: usize = 8;
    for rung in 1..=RUNGS {
        let alpha = u.length() * rung as f64 / RUNGS as f64;
        match pales_sufficient_check(f, g, u, alpha, C, GRID) {
            Ok(c) if c.holds && !c.vacuous => {
                return BoundEntry::new("pales_check", BoundKind::Advisory, alpha)
                    .param("alpha", alpha)
                    .param("C", C)
                    .param("max_deviation", c.max_deviation)
                    .param("grid", GRID as f64);
            }
            Ok(_) => {}
            Err(e) => return BoundEntry::not_applicable("pales_check", BoundKind::Advisory, e.to_string()),
        }
    }
    BoundEntry::not_applicable("pales_check", BoundKind::Advisory, "no alpha on the ladder passed".into())
}

/// Computes `K`, `ε`, every bound and the measured `ρ` for a pair on `u`.
pub fn full_report(f: &Generator, g: &Generator, u: &Interval, cfg: &OptimizerConfig) -> Result<BoundReport> {
    use BoundKind::*;
    let m = pair_measures(f, g, u)?;
    let rho = estimate_rho(f, g, u, cfg)?;
    let consts = estim_constants();
    let mut entries = Vec::new();

    entries.push(match cargo_shisha_lower(f, g, u) {
        Ok(v) => BoundEntry::new("cargo_shisha_lower", Lower, v),
        Err(e) => BoundEntry::not_applicable("cargo_shisha_lower", Lower, e.to_string()),
    });

    let (sf, sg) = lower_main_sup(m.epsilon, m.k, m.star_f, m.star_g, m.len);
    let best = if sf.value >= sg.value { sf } else { sg };
    entries.push(
        BoundEntry::new("lower_main_sup", Lower, best.value)
            .param("c", best.c)
            .param("delta", best.delta)
            .param("forward", sf.value)
            .param("swapped", sg.value),
    );

    let lm = lower_main(m.epsilon, m.k, m.star_f, m.star_g, m.len);
    entries.push(
        BoundEntry::new("lower_main", Lower, lm.value)
            .param("forward", lm.forward)
            .param("swapped", lm.swapped)
            .param("eps_over_2K_len", if m.k > 0.0 { m.epsilon / (2.0 * m.k * m.len) } else { 0.0 }),
    );

    let est = lower_estim(m.epsilon, m.k, m.len, &consts);
    let mut e = BoundEntry::new("lower_estim", Lower, est.value)
        .param("C0", consts.c0)
        .param("y0", consts.y0)
        .param("y1", consts.y1)
        .param("K_len", m.k * m.len);
    if let Some(v) = est.short {
        e = e.param("short_case", v);
    }
    if let Some(v) = est.long {
        e = e.param("long_case", v);
    }
    entries.push(e);

    let separation = find_separation(f, g, u, DEFAULT_PHI_GRID);
    match &separation {
        Ok(Some(cert)) => {
            let b = box_lower(cert);
            let with_cert = |e: BoundEntry| {
                e.param("phi", cert.phi)
                    .param("K", cert.k)
                    .param("delta", cert.delta)
                    .param("v_lo", cert.v.lo())
                    .param("v_hi", cert.v.hi())
            };
            entries.push(with_cert(BoundEntry::new("box_lower", Lower, b.value)).param("alpha", b.alpha));
            entries.push(with_cert(BoundEntry::new("box_lower_simplified", Lower, box_lower_simplified(cert))));
        }
        Ok(None) => {
            entries.push(BoundEntry::new("box_lower", Lower, 0.0).param("delta", 0.0));
            entries.push(BoundEntry::new("box_lower_simplified", Lower, 0.0).param("delta", 0.0));
        }
        Err(err) => {
            entries.push(BoundEntry::not_applicable("box_lower", Lower, err.to_string()));
            entries.push(BoundEntry::not_applicable("box_lower_simplified", Lower, err.to_string()));
        }
    }

    entries.push(match cargo_shisha_upper(f, g, u) {
        Ok(c) if c.applicable => BoundEntry::new("cargo_shisha_upper", Upper, c.value)
            .param("inverse_slope", c.inverse_slope)
            .param("sup_diff", c.sup_diff),
        Ok(_) => BoundEntry::not_applicable("cargo_shisha_upper", Upper, "inverse derivative is unbounded".into()),
        Err(e) => BoundEntry::not_applicable("cargo_shisha_upper", Upper, e.to_string()),
    });

    let sn = upper_star_norm(m.epsilon, m.star_f, m.star_g, m.len);
    entries.push(
        BoundEntry::new("upper_star_norm", Upper, sn.value).param("forward", sn.forward).param("swapped", sn.swapped),
    );

    let (ul, uq) = upper_universal(m.k, m.len);
    entries.push(BoundEntry::new("upper_universal_log", Upper, ul).param("K", m.k));
    entries.push(BoundEntry::new("upper_universal_quadratic", Upper, uq).param("K", m.k));

    entries.push(pales_entry(f, g, u));

    let sandwich = sandwich(rho.value, &entries);
    Ok(BoundReport {
        pair: (f.label().to_string(), g.label().to_string()),
        interval: *u,
        measures: m,
        rho,
        separation: separation.ok().flatten(),
        entries,
        sandwich,
    })
}
