//! Property suites run against the built-in corpus.
//!
//! Random trials draw from a seeded ChaCha stream so every run is identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::full_report;
use crate::corpus::{groups, pairs, CorpusSelector, Group};
use crate::error::Result;
use crate::generator::Generator;
use crate::interval::Interval;
use crate::mean::{exp_mean, power_mean, qa_mean, WeightedSample};
use crate::norms::partition_subinterval;
use crate::rho::OptimizerConfig;

pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;
/// Absolute slack for order comparisons between means.
pub const ORDER_SLACK: f64 = 1e-12;
pub const AFFINE_TOL: f64 = 1e-12;
pub const CONJUGATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest violation seen; 0 when nothing was violated.
    pub worst: f64,
    /// First failing case, if any.
    pub example: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self { name, trials: 0, failures: 0, worst: 0.0, example: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }

    fn record(&mut self, violation: f64, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if violation > 0.0 {
            self.failures += 1;
            self.worst = self.worst.max(violation);
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub corpus: CorpusSelector,
    pub trials: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            corpus: CorpusSelector::Default,
            trials: 1000,
            seed: DEFAULT_SEED,
            optimizer: OptimizerConfig::default(),
        }
    }
}

fn random_sample(rng: &mut ChaCha8Rng, a: f64, b: f64) -> WeightedSample {
    let n = rng.gen_range(2..=6);
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(a..=b)).collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    WeightedSample::new(values, raw.iter().map(|w| w / total).collect()).expect("valid random sample")
}

/// `Af ≥ Ag` at every point of a 257-point grid, with at least one strict.
fn dominates(f: &Generator, g: &Generator, a: f64, b: f64) -> bool {
    let mut strict = false;
    for i in 0..=256 {
        let x = a + (b - a) * i as f64 / 256.0;
        let (af, ag) = (f.arrow_pratt_unchecked(x), g.arrow_pratt_unchecked(x));
        if af < ag {
            return false;
        }
        strict |= af > ag;
    }
    strict
}

fn ordered_pairs(groups: &[Group]) -> Vec<(Generator, Generator, (f64, f64))> {
    let mut out = Vec::new();
    for grp in groups {
        for f in &grp.generators {
            for g in &grp.generators {
                let (fa, fb) = f.scan_bounds();
                let (ga, gb) = g.scan_bounds();
                let (a, b) = (fa.max(ga), fb.min(gb));
                if dominates(f, g, a, b) {
                    out.push((f.clone(), g.clone(), (a, b)));
                }
            }
        }
    }
    out
}

/// `Af ≥ Ag` implies `A[f](a, w) ≥ A[g](a, w)` for every sample.
pub fn comparison_suite(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ordered = ordered_pairs(&groups(opts.corpus)?);
    let mut out = SuiteResult::new("comparison");
    if ordered.is_empty() {
        return Ok(out);
    }
    for _ in 0..opts.trials {
        let (f, g, (a, b)) = &ordered[rng.gen_range(0..ordered.len())];
        let s = random_sample(&mut rng, *a, *b);
        let (mf, mg) = (qa_mean(f, &s)?, qa_mean(g, &s)?);
        out.record(mg - mf - ORDER_SLACK, || format!("{f} vs {g} on {:?}: {mf} < {mg}", s.values()));
    }
    Ok(out)
}

/// `E^{−K} ≤ A[f] ≤ E^{K}` with `K = sup |Af|`.
pub fn envelope_suite(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 1);
    let gens: Vec<Generator> = groups(opts.corpus)?.into_iter().flat_map(|g| g.generators).collect();
    let mut out = SuiteResult::new("exp_envelope");
    for _ in 0..opts.trials {
        let f = &gens[rng.gen_range(0..gens.len())];
        let (a, b) = f.scan_bounds();
        let k = (0..=256).map(|i| f.arrow_pratt_unchecked(a + (b - a) * i as f64 / 256.0).abs()).fold(0.0, f64::max);
        // the grid may undershoot the true sup slightly; widen by 1e-9
        let k = k * (1.0 + 1e-9);
        let s = random_sample(&mut rng, a, b);
        let m = qa_mean(f, &s)?;
        let (lo, hi) = (exp_mean(-k, &s), exp_mean(k, &s));
        out.record((lo - m).max(m - hi) - ORDER_SLACK, || format!("{f}: {m} outside [{lo}, {hi}]"));
    }
    Ok(out)
}

/// `A[αf + β] = A[f]`.
pub fn affine_suite(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 2);
    let gens: Vec<Generator> = groups(opts.corpus)?.into_iter().flat_map(|g| g.generators).collect();
    let mut out = SuiteResult::new("affine_invariance");
    for _ in 0..opts.trials {
        let f = &gens[rng.gen_range(0..gens.len())];
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let alpha = sign * 10f64.powf(rng.gen_range(-1.0..=1.0));
        let beta = rng.gen_range(-1.0..=1.0);
        let h = f.affine(alpha, beta)?;
        let (a, b) = f.scan_bounds();
        let s = random_sample(&mut rng, a, b);
        let d = (qa_mean(&h, &s)? - qa_mean(f, &s)?).abs();
        out.record(d - AFFINE_TOL, || format!("{f} with alpha = {alpha}, beta = {beta}: diff {d}"));
    }
    Ok(out)
}

/// `P_s(e^a) = exp(E^s(a))`.
pub fn conjugation_suite(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 3);
    let mut out = SuiteResult::new("power_exp_conjugation");
    for _ in 0..opts.trials {
        let s = rng.gen_range(-20.0..=20.0);
        let sample = random_sample(&mut rng, -2.0, 2.0);
        let lifted = WeightedSample::new(sample.values().iter().map(|a| a.exp()).collect(), sample.weights().to_vec())?;
        let p = power_mean(s, &lifted)?;
        let e = exp_mean(s, &sample).exp();
        let rel = (p - e).abs() / e;
        out.record(rel - CONJUGATION_TOL, || format!("s = {s}: {p} vs {e}"));
    }
    Ok(out)
}

/// The best of `n` equal cells carries at least `1/n` of the ∗-norm.
pub fn partition_suite(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 4);
    let mut out = SuiteResult::new("partition");
    let u = Interval::closed(0.0, 1.0)?;
    let count = (opts.trials / 10).max(10);
    for _ in 0..count {
        let c: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-3.0..=3.0));
        let kink = rng.gen_range(0.0..=1.0);
        let h = move |t: f64| c[0] * (c[1] * t + c[2]).sin() + c[3] * (t - kink).abs() + c[4] * t + c[5];
        let n = rng.gen_range(2..=8);
        let p = partition_subinterval(h, &u, n)?;
        let short = p.whole_norm / n as f64 - p.cell_norm - 1e-9;
        out.record(short, || format!("coefficients {c:?}, kink {kink}, n = {n}: {} < {}/n", p.cell_norm, p.whole_norm));
    }
    Ok(out)
}

/// Every applicable lower bound ≤ measured `ρ` ≤ every applicable upper bound.
pub fn sandwich_suite(opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("sandwich");
    for p in pairs(opts.corpus)? {
        let r = full_report(&p.f, &p.g, &p.interval, &opts.optimizer)?;
        let s = r.sandwich;
        let violation = (s.max_lower - s.rho).max(s.rho - s.min_upper);
        let violation = if s.holds { 0.0 } else { violation };
        out.record(violation, || {
            format!("{} vs {} on {}: lower {} rho {} upper {}", p.f, p.g, p.interval, s.max_lower, s.rho, s.min_upper)
        });
    }
    Ok(out)
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        sandwich_suite(opts)?,
        comparison_suite(opts)?,
        envelope_suite(opts)?,
        affine_suite(opts)?,
        conjugation_suite(opts)?,
        partition_suite(opts)?,
    ])
}
