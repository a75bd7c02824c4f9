//! Generators of quasi-arithmetic means.
//!
//! A [`Generator`] is a strictly monotone, twice differentiable function on a
//! bounded interval whose derivative never vanishes. Built-in families have
//! closed-form derivatives and inverses; expression generators get their
//! derivatives from second-order dual numbers and their inverse by bisection.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{QamError, Result};
use crate::expr::Expr;
use crate::interval::{linspace, Interval};
use crate::search::{bisect, golden_min};

/// Cells of the grid used to validate monotonicity.
pub const MONOTONICITY_CELLS: usize = 1024;
/// Margin (relative to `|U|`) used on open endpoints the function does not extend to.
pub const OPEN_MARGIN: f64 = 1e-9;
/// Absolute inversion tolerance in `x`, relative to `|U|`.
pub const INVERSE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinFamily {
    /// `x^s`, with `ln x` at `s = 0`.
    Power(f64),
    /// `exp(s x)`, with the identity at `s = 0`.
    Exp(f64),
    Identity,
    Log,
    Expression(String),
}

impl BuiltinFamily {
    fn name(&self) -> String {
        match self {
            BuiltinFamily::Power(s) => format!("pow:{s}"),
            BuiltinFamily::Exp(s) => format!("exp:{s}"),
            BuiltinFamily::Identity => "id".into(),
            BuiltinFamily::Log => "log".into(),
            BuiltinFamily::Expression(e) => format!("expr:{e}"),
        }
    }
}

/// Parses the script-friendly spec syntax: `exp:s`, `pow:s`, `id`, `log`,
/// `expr:<expression>`.
impl FromStr for BuiltinFamily {
    type Err = QamError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str, what: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| QamError::Parse { pos: what.len() + 1, msg: format!("bad {what} parameter '{t}'") })
        };
        if let Some(rest) = s.strip_prefix("exp:") {
            Ok(BuiltinFamily::Exp(num(rest, "exp")?))
        } else if let Some(rest) = s.strip_prefix("pow:") {
            Ok(BuiltinFamily::Power(num(rest, "pow")?))
        } else if let Some(rest) = s.strip_prefix("expr:") {
            Ok(BuiltinFamily::Expression(rest.to_string()))
        } else if s == "id" {
            Ok(BuiltinFamily::Identity)
        } else if s == "log" {
            Ok(BuiltinFamily::Log)
        } else {
            Err(QamError::Parse {
                pos: 0,
                msg: format!("unknown generator spec '{s}' (expected exp:s, pow:s, id, log or expr:...)"),
            })
        }
    }
}

#[derive(Debug, Clone)]
enum Base {
    Power(f64),
    Exp(f64),
    Expr(Arc<Expr>),
}

impl Base {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Base::Power(s) if *s == 0.0 => x.ln(),
            Base::Power(s) => x.powf(*s),
            Base::Exp(s) if *s == 0.0 => x,
            Base::Exp(s) => (s * x).exp(),
            Base::Expr(e) => e.eval(x),
        }
    }

    fn derivs(&self, x: f64) -> (f64, f64) {
        match self {
            Base::Power(s) if *s == 0.0 => (1.0 / x, -1.0 / (x * x)),
            Base::Power(s) => (s * x.powf(s - 1.0), s * (s - 1.0) * x.powf(s - 2.0)),
            Base::Exp(s) if *s == 0.0 => (1.0, 0.0),
            Base::Exp(s) => {
                let e = (s * x).exp();
                (s * e, s * s * e)
            }
            Base::Expr(e) => {
                let d = e.eval_dual(x);
                (d.d1, d.d2)
            }
        }
    }

    fn ln_abs_d1(&self, x: f64) -> f64 {
        match self {
            Base::Power(s) if *s == 0.0 => -x.ln(),
            Base::Power(s) => s.abs().ln() + (s - 1.0) * x.ln(),
            Base::Exp(s) if *s == 0.0 => 0.0,
            Base::Exp(s) => s.abs().ln() + s * x,
            Base::Expr(e) => e.eval_dual(x).d1.abs().ln(),
        }
    }

    fn arrow_pratt(&self, x: f64) -> f64 {
        match self {
            Base::Power(s) => (s - 1.0) / x,
            Base::Exp(s) => *s,
            Base::Expr(e) => {
                let d = e.eval_dual(x);
                d.d2 / d.d1
            }
        }
    }

    fn closed_form_inverse(&self, y: f64) -> Option<f64> {
        match self {
            Base::Power(s) if *s == 0.0 => Some(y.exp()),
            Base::Power(s) => Some(y.powf(1.0 / s)),
            Base::Exp(s) if *s == 0.0 => Some(y),
            Base::Exp(s) => Some(y.ln() / s),
            Base::Expr(_) => None,
        }
    }
}

/// A strictly monotone `C²` function on a bounded interval.
///
/// Immutable after construction; cloning is cheap.
#[derive(Debug, Clone)]
pub struct Generator {
    base: Base,
    domain: Interval,
    scale: f64,
    offset: f64,
    sign: f64,
    scan: (f64, f64),
    label: String,
}

impl Generator {
    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Sign of the first derivative, `+1.0` or `-1.0`.
    pub fn sign(&self) -> f64 {
        self.sign
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The closed region numerical scans operate on: the closure of the
    /// domain where the function extends continuously, otherwise pulled in
    /// by [`OPEN_MARGIN`]`·|U|` at the offending endpoint.
    pub fn scan_bounds(&self) -> (f64, f64) {
        self.scan
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.base.eval(x) + self.offset
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.scale * self.base.derivs(x).0
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.scale * self.base.derivs(x).1
    }

    /// `ln |f'(x)|`, evaluated without forming `f'` for the built-in families.
    pub fn ln_abs_d1(&self, x: f64) -> f64 {
        self.scale.abs().ln() + self.base.ln_abs_d1(x)
    }

    /// `f''(x) / f'(x)` without any validity check.
    pub fn arrow_pratt_unchecked(&self, x: f64) -> f64 {
        self.base.arrow_pratt(x)
    }

    /// Rate `s` when this generator is an affine image of `exp(s x)`.
    pub fn exp_rate(&self) -> Option<f64> {
        match self.base {
            Base::Exp(s) => Some(s),
            _ => None,
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        let target = (y - self.offset) / self.scale;
        if let Some(x) = self.base.closed_form_inverse(target) {
            return x;
        }
        let (a, b) = self.scan;
        let h = |t: f64| self.sign * (self.eval(t) - y);
        if h(a) >= 0.0 {
            return a;
        }
        if h(b) <= 0.0 {
            return b;
        }
        let tol = INVERSE_TOL * self.domain.length();
        let mut x = bisect(h, a, b, tol);
        // one Newton step tightens the bisection result below its bracket width
        let step = (self.eval(x) - y) / self.d1(x);
        if step.is_finite() && step.abs() <= tol {
            x -= step;
        }
        x
    }

    /// Same function with a different label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `alpha * self + beta`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Result<Generator> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(QamError::NotAGenerator(format!(
                "affine map with alpha = {alpha}, beta = {beta} is not invertible"
            )));
        }
        Ok(Generator {
            base: self.base.clone(),
            domain: self.domain,
            scale: self.scale * alpha,
            offset: self.offset * alpha + beta,
            sign: self.sign * alpha.signum(),
            scan: self.scan,
            label: format!("{alpha}*({})+{beta}", self.label),
        })
    }

    fn build(base: Base, domain: Interval, label: String) -> Result<Generator> {
        let mut g =
            Generator { base, domain, scale: 1.0, offset: 0.0, sign: 1.0, scan: (domain.lo(), domain.hi()), label };
        g.scan = (
            g.resolve_endpoint(domain.lo(), domain.lo_closed(), 1.0)?,
            g.resolve_endpoint(domain.hi(), domain.hi_closed(), -1.0)?,
        );
        g.sign = g.validate_monotone()?;
        Ok(g)
    }

    fn regular_at(&self, x: f64) -> bool {
        let (d1, d2) = self.base.derivs(x);
        self.base.eval(x).is_finite() && d1.is_finite() && d2.is_finite() && d1 != 0.0
    }

    fn resolve_endpoint(&self, e: f64, closed: bool, inward: f64) -> Result<f64> {
        if self.regular_at(e) {
            return Ok(e);
        }
        if closed {
            return Err(QamError::NotAGenerator(format!(
                "{} is not finite with non-vanishing derivative at the closed endpoint {e}",
                self.label
            )));
        }
        let shifted = e + inward * OPEN_MARGIN * self.domain.length();
        if self.regular_at(shifted) {
            Ok(shifted)
        } else {
            Err(QamError::NotAGenerator(format!("{} is not regular near the open endpoint {e}", self.label)))
        }
    }

    /// Grid check of `sign · f' > 0`, followed by a golden-section probe of
    /// every interior local minimum of `|f'|` to catch isolated zeros that
    /// fall between grid points.
    fn validate_monotone(&self) -> Result<f64> {
        let (a, b) = self.scan;
        let xs = linspace(a, b, MONOTONICITY_CELLS + 1);
        let d1: Vec<f64> = xs.iter().map(|&x| self.base.derivs(x).0).collect();
        if let Some(i) = d1.iter().position(|d| !d.is_finite() || *d == 0.0) {
            return Err(QamError::NotAGenerator(format!("{}: derivative is {} at x = {}", self.label, d1[i], xs[i])));
        }
        let sign = d1[0].signum();
        if let Some(i) = d1.iter().position(|d| d.signum() != sign) {
            return Err(QamError::NotAGenerator(format!("{}: derivative changes sign near x = {}", self.label, xs[i])));
        }
        let abs: Vec<f64> = d1.iter().map(|d| d.abs()).collect();
        for i in 1..abs.len() - 1 {
            if abs[i] <= abs[i - 1] && abs[i] <= abs[i + 1] {
                let (x, v) = golden_min(|t| self.base.derivs(t).0.abs(), xs[i - 1], xs[i + 1], 1e-15 * (b - a));
                if !(v > 1e-9 * abs[i - 1].min(abs[i + 1])) || self.base.derivs(x).0.signum() != sign {
                    return Err(QamError::NotAGenerator(format!("{}: derivative vanishes near x = {x}", self.label)));
                }
            }
        }
        Ok(sign)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.label, self.domain)
    }
}

pub fn make_builtin(kind: &BuiltinFamily, domain: Interval) -> Result<Generator> {
    let needs_positive = |family: &str| -> Result<()> {
        if domain.lo() < 0.0 || (domain.lo() == 0.0 && domain.lo_closed()) {
            return Err(QamError::InvalidDomain {
                family: family.into(),
                reason: format!("requires a domain inside (0, inf), got {domain}"),
            });
        }
        Ok(())
    };
    let base = match kind {
        BuiltinFamily::Power(s) => {
            needs_positive("power")?;
            Base::Power(*s)
        }
        BuiltinFamily::Log => {
            needs_positive("log")?;
            Base::Power(0.0)
        }
        BuiltinFamily::Exp(s) => Base::Exp(*s),
        BuiltinFamily::Identity => Base::Exp(0.0),
        BuiltinFamily::Expression(text) => return parse_generator(text, domain),
    };
    Generator::build(base, domain, kind.name())
}

pub fn parse_generator(expr: &str, domain: Interval) -> Result<Generator> {
    let e = Expr::parse(expr)?;
    Generator::build(Base::Expr(Arc::new(e)), domain, format!("expr:{}", expr.trim()))
}

/// Builds a generator from a spec string such as `exp:15` or `expr:ln(x)`.
pub fn from_spec(spec: &str, domain: Interval) -> Result<Generator> {
    make_builtin(&spec.parse::<BuiltinFamily>()?, domain)
}

/// The Arrow–Pratt index `f''(x) / f'(x)`.
pub fn arrow_pratt(g: &Generator, x: f64) -> Result<f64> {
    if !g.domain().closure_contains(x) {
        return Err(QamError::OutsideDomain { value: x, domain: g.domain().to_string() });
    }
    let d1 = g.d1(x);
    if d1 == 0.0 || !d1.is_finite() {
        return Err(QamError::NotAGenerator(format!("{}: f'({x}) = {d1}", g.label())));
    }
    Ok(g.arrow_pratt_unchecked(x))
}

/// Returns `alpha * g + beta` whose range over the scan region of `g` equals
/// `target`, oriented so the result is increasing.
pub fn affine_normalize(g: &Generator, target: Interval) -> Generator {
    let (a, b) = g.scan_bounds();
    let (ga, gb) = (g.eval(a), g.eval(b));
    let alpha = target.length() / (gb - ga);
    let beta = target.lo() - alpha * ga;
    let label = format!("norm({})", g.label());
    // a valid generator has ga != gb, so alpha is finite and non-zero
    g.affine(alpha, beta).expect("affine_normalize: generator has a degenerate range").with_label(label)
}
