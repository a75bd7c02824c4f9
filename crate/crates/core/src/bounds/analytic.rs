//! Closed-form bounds driven by `K = sup |A f|, |A g|`, `ε = ‖A f − A g‖∗`,
//! `‖A f‖∗` and `|U|`.

use super::constants::EstimConstants;
use crate::search::{bisect, golden_max};

/// `ln(e^y − 1)` for `y > 0` without overflow.
pub(crate) fn ln_expm1(y: f64) -> f64 {
    if y > 30.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

/// A bound evaluated in both directions of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Directional {
    pub value: f64,
    pub forward: f64,
    pub swapped: f64,
}

/// `|U|·exp(‖A f‖∗)·(exp(ε) − 1)` and the swap, reporting the smaller.
pub fn upper_star_norm(eps: f64, star_f: f64, star_g: f64, len: f64) -> Directional {
    let one = |star: f64| if eps == 0.0 { 0.0 } else { len * star.exp() * eps.exp_m1() };
    let (forward, swapped) = (one(star_f), one(star_g));
    Directional { value: forward.min(swapped), forward, swapped }
}

/// The two universal upper bounds for generators with `|A| ≤ K`:
/// `(1/K)·ln(½(e^{K|U|} + 1))` and `((3 + 7e)/6)·K·|U|²`.
pub fn upper_universal(k: f64, len: f64) -> (f64, f64) {
    if k <= 0.0 {
        // K → 0 limits
        return (0.5 * len, 0.0);
    }
    let kl = k * len;
    let log_bound = if kl > 1.0 {
        (kl - std::f64::consts::LN_2 + (-kl).exp().ln_1p()) / k
    } else {
        (0.5 * kl.exp_m1()).ln_1p() / k
    };
    let quad = (3.0 + 7.0 * std::f64::consts::E) / 6.0 * k * len * len;
    (log_bound, quad)
}

/// `ε(e^{ε/4} − 1)(e^{ε/6} − 1) / (16·K·exp(‖A f‖∗)·(e^{K|U|} − 1))`.
pub fn lower_main_value(eps: f64, k: f64, star: f64, len: f64) -> f64 {
    if eps <= 0.0 || k <= 0.0 {
        return 0.0;
    }
    let ln = eps.ln() + ln_expm1(eps / 4.0) + ln_expm1(eps / 6.0) - 16f64.ln() - k.ln() - star - ln_expm1(k * len);
    ln.exp()
}

pub fn lower_main(eps: f64, k: f64, star_f: f64, star_g: f64, len: f64) -> Directional {
    let forward = lower_main_value(eps, k, star_f, len);
    let swapped = lower_main_value(eps, k, star_g, len);
    Directional { value: forward.max(swapped), forward, swapped }
}

/// The two competing terms of the `(c, δ)` lower estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MainSupTerms {
    eps: f64,
    k: f64,
    coef: f64,
}

impl MainSupTerms {
    pub(crate) fn new(eps: f64, k: f64, star: f64, len: f64) -> Self {
        // (e^{ε/4} − 1) / (2·exp(‖A f‖∗)·(e^{K|U|} − 1))
        let coef = (ln_expm1(eps / 4.0) - std::f64::consts::LN_2 - star - ln_expm1(k * len)).exp();
        Self { eps, k, coef }
    }

    pub(crate) fn first(&self, c: f64, delta: f64) -> f64 {
        (1.0 - c) * (self.eps / (2.0 * self.k) - 2.0 * delta)
    }

    pub(crate) fn second(&self, c: f64, delta: f64) -> f64 {
        delta * self.coef * ((self.eps / 2.0 - 2.0 * self.k * delta) * c).exp_m1()
    }

    pub(crate) fn min_at(&self, c: f64, delta: f64) -> f64 {
        self.first(c, delta).min(self.second(c, delta))
    }

    /// Best `c` for fixed `δ`: the first term falls in `c`, the second rises,
    /// so the optimum is their crossing.
    fn best_c(&self, delta: f64) -> (f64, f64) {
        let c = bisect(|c| self.second(c, delta) - self.first(c, delta), 0.0, 1.0, 1e-15);
        (c, self.min_at(c, delta))
    }

    pub(crate) fn delta_max(&self) -> f64 {
        self.eps / (4.0 * self.k)
    }
}

/// Result of maximizing the `(c, δ)` family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainSup {
    pub value: f64,
    pub c: f64,
    pub delta: f64,
}

const MAIN_SUP_GRID: usize = 128;

/// `sup_{c ∈ [0,1], δ ∈ (0, ε/4K)} min(first, second)` for one direction.
pub fn lower_main_sup_value(eps: f64, k: f64, star: f64, len: f64) -> MainSup {
    if eps <= 0.0 || k <= 0.0 {
        return MainSup { value: 0.0, c: 0.0, delta: 0.0 };
    }
    let t = MainSupTerms::new(eps, k, star, len);
    let dmax = t.delta_max();
    let deltas: Vec<f64> = (1..=MAIN_SUP_GRID).map(|j| dmax * j as f64 / (MAIN_SUP_GRID + 1) as f64).collect();
    let mut best = MainSup { value: 0.0, c: 0.0, delta: deltas[0] };
    let mut best_j = 0;
    for (j, &d) in deltas.iter().enumerate() {
        for i in 0..=MAIN_SUP_GRID {
            let c = i as f64 / MAIN_SUP_GRID as f64;
            let v = t.min_at(c, d);
            if v > best.value {
                best = MainSup { value: v, c, delta: d };
                best_j = j;
            }
        }
    }
    // refine δ around the best grid row with c solved exactly on each row
    let lo = if best_j == 0 { dmax * 1e-12 } else { deltas[best_j - 1] };
    let hi = if best_j + 1 == deltas.len() { dmax * (1.0 - 1e-12) } else { deltas[best_j + 1] };
    let (d, _) = golden_max(|d| t.best_c(d).1, lo, hi, 1e-14 * dmax);
    let (c, v) = t.best_c(d);
    if v > best.value {
        best = MainSup { value: v, c, delta: d };
    }
    // the specialization c = 2/3, δ = ε/(8K) is always a candidate
    let d = eps / (8.0 * k);
    let (c, v) = t.best_c(d);
    if v > best.value {
        best = MainSup { value: v, c, delta: d };
    }
    best
}

pub fn lower_main_sup(eps: f64, k: f64, star_f: f64, star_g: f64, len: f64) -> (MainSup, MainSup) {
    (lower_main_sup_value(eps, k, star_f, len), lower_main_sup_value(eps, k, star_g, len))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimCase {
    /// `K|U| ≤ C₀/2`
    Short,
    /// `K|U| ≥ C₀/2`
    Long,
    /// `K|U| = C₀/2`: both branches evaluated, the larger kept.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estim {
    pub value: f64,
    pub case: EstimCase,
    pub short: Option<f64>,
    pub long: Option<f64>,
}

/// `y₁ ε³ / K` when `K|U| ≤ C₀/2`, `y₀ ε³ / (|U|³ K⁴)` when `K|U| ≥ C₀/2`.
pub fn lower_estim(eps: f64, k: f64, len: f64, consts: &EstimConstants) -> Estim {
    if eps <= 0.0 || k <= 0.0 {
        return Estim { value: 0.0, case: EstimCase::Short, short: Some(0.0), long: None };
    }
    let kl = k * len;
    let half = 0.5 * consts.c0;
    let at_switch = (kl - half).abs() <= 1e-12 * half;
    let short = (kl <= half || at_switch).then(|| consts.y1 * eps.powi(3) / k);
    let long = (kl >= half || at_switch).then(|| consts.y0 * eps.powi(3) / (len.powi(3) * k.powi(4)));
    let case = match (short, long) {
        (Some(_), Some(_)) => EstimCase::Both,
        (Some(_), None) => EstimCase::Short,
        _ => EstimCase::Long,
    };
    let value = short.unwrap_or(0.0).max(long.unwrap_or(0.0));
    Estim { value, case, short, long }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::constants::estim_constants;

    #[test]
    fn universal_bounds() {
        let (a, b) = upper_universal(20.0, 1.0);
        let direct = (0.5 * (20f64.exp() + 1.0)).ln() / 20.0;
        assert!((a - direct).abs() <= 1e-12 * direct);
        assert!((a - 0.96534).abs() < 1e-5);
        assert!((b - 73.42).abs() < 0.01, "{b}");
        // small K|U|: the quadratic bound takes over
        let (a, b) = upper_universal(0.1, 0.1);
        assert!(b < a);
        let direct = (0.5 * (0.01f64.exp() + 1.0)).ln() / 0.1;
        assert!((a - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn main_lower_for_exp15_exp20() {
        let d = lower_main(5.0, 20.0, 15.0, 20.0, 1.0);
        assert!((d.value - 3.19184e-17).abs() < 1e-3 * 3.19184e-17, "{}", d.value);
        assert_eq!(d.value, d.forward);
        assert!(d.swapped < d.forward);
        assert_eq!(lower_main(0.0, 20.0, 15.0, 20.0, 1.0).value, 0.0);
    }

    #[test]
    fn main_lower_small_eps_series() {
        // ε → 0: ε(ε/4)(ε/6)/(16 K e^{star} (e^{K|U|} − 1)) = ε³ / (384 K e^{star} (e^{K|U|} − 1))
        let (k, star, len) = (2.0, 0.7, 1.5);
        for eps in [1e-4f64, 1e-5] {
            let series = eps.powi(3) / (384.0 * k * f64::exp(star) * (k * len).exp_m1());
            let v = lower_main_value(eps, k, star, len);
            assert!((v / series - 1.0).abs() < 1e-4, "{eps}: {v} vs {series}");
        }
    }

    #[test]
    fn sup_form_dominates_its_specialization() {
        let s = lower_main_sup_value(5.0, 20.0, 15.0, 1.0);
        assert!(s.value >= lower_main_value(5.0, 20.0, 15.0, 1.0));
        // at c = 2/3, δ = ε/(8K) the first term is ε/(12K) and the second is the closed form
        let t = MainSupTerms::new(5.0, 20.0, 15.0, 1.0);
        let d = 5.0 / 160.0;
        assert!((t.first(2.0 / 3.0, d) - 5.0 / 240.0).abs() < 1e-15);
        let closed = lower_main_value(5.0, 20.0, 15.0, 1.0);
        assert!((t.second(2.0 / 3.0, d) / closed - 1.0).abs() < 1e-12);
        assert!(s.delta > 0.0 && s.delta < 5.0 / 80.0 && (0.0..=1.0).contains(&s.c));
    }

    #[test]
    fn estim_cases() {
        let k = estim_constants();
        let e = lower_estim(5.0, 20.0, 1.0, &k);
        assert_eq!(e.case, EstimCase::Long);
        assert!((e.value - 5.71442e-8).abs() < 1e-3 * 5.71442e-8, "{}", e.value);

        let e = lower_estim(0.1, 0.5, 1.0, &k);
        assert_eq!(e.case, EstimCase::Short);
        assert!((e.value - k.y1 * 1e-3 / 0.5).abs() < 1e-18);

        let len = 0.5 * k.c0 / 3.0;
        let e = lower_estim(0.5, 3.0, len, &k);
        assert_eq!(e.case, EstimCase::Both);
        assert_eq!(e.value, e.short.unwrap().max(e.long.unwrap()));
    }

    #[test]
    fn star_norm_upper_for_exp_pair() {
        let d = upper_star_norm(5.0, 15.0, 20.0, 1.0);
        assert!((d.forward / 4.85e8 - 1.0).abs() < 1e-2, "{}", d.forward);
        assert_eq!(d.value, d.forward);
        assert_eq!(upper_star_norm(0.0, 15.0, 15.0, 1.0).value, 0.0);
    }
}
