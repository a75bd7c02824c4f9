//! The reference comparison for exp(15) against exp(20) on (0, 1): the
//! measured distance and the four analytic lower bounds, each checked
//! against its published value.

use qamean::{full_report, make_builtin, BoundReport, BuiltinFamily, Interval, OptimizerConfig, Result};

pub struct Row {
    pub name: &'static str,
    pub value: f64,
    /// Published value as printed.
    pub reference: &'static str,
    /// Accepted band `[lo, hi]`.
    pub band: (f64, f64),
}

impl Row {
    pub fn pass(&self) -> bool {
        self.value >= self.band.0 && self.value <= self.band.1
    }
}

fn relative(v: f64, tol: f64) -> (f64, f64) {
    (v * (1.0 - tol), v * (1.0 + tol))
}

pub fn reference_report(cfg: &OptimizerConfig) -> Result<BoundReport> {
    let u = Interval::open(0.0, 1.0)?;
    let f = make_builtin(&BuiltinFamily::Exp(15.0), u)?;
    let g = make_builtin(&BuiltinFamily::Exp(20.0), u)?;
    full_report(&f, &g, &u, cfg)
}

pub fn rows(r: &BoundReport) -> Vec<Row> {
    let value = |name: &str| r.entry(name).filter(|e| e.applicable).map_or(f64::NAN, |e| e.value);
    vec![
        Row { name: "measured rho", value: r.rho.value, reference: "~0.212", band: (0.207, 0.217) },
        Row {
            name: "lower_main",
            value: value("lower_main"),
            reference: "3.19184e-17",
            band: relative(3.19184e-17, 1e-3),
        },
        Row {
            name: "lower_estim",
            value: value("lower_estim"),
            reference: "5.71442e-8",
            band: relative(5.71442e-8, 1e-2),
        },
        Row { name: "box_lower", value: value("box_lower"), reference: ">= 0.0143", band: (0.0138, 0.0148) },
        Row {
            name: "box_lower_simplified",
            value: value("box_lower_simplified"),
            reference: ">= 0.011",
            band: (0.0105, 0.0117),
        },
    ]
}
