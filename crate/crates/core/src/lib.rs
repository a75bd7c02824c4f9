//! Quasi-arithmetic means `A[f](a, w) = f⁻¹(Σ wᵢ f(aᵢ))`, a numerical
//! estimator for the Cargo–Shisha distance
//! `ρ(A[f], A[g]) = sup |A[f](a, w) − A[g](a, w)|` between two such means,
//! and computable lower and upper bounds on `ρ` driven by the Arrow–Pratt
//! indices `Af = f''/f'` of the generators.
//!
//! ```
//! use qamean::{estimate_rho, make_builtin, BuiltinFamily, Interval, OptimizerConfig};
//!
//! let u = Interval::open(0.0, 1.0).unwrap();
//! let f = make_builtin(&BuiltinFamily::Exp(15.0), u).unwrap();
//! let g = make_builtin(&BuiltinFamily::Exp(20.0), u).unwrap();
//! let cfg = OptimizerConfig { grid_n: 32, grid_m: 32, ..Default::default() };
//! let rho = estimate_rho(&f, &g, &u, &cfg).unwrap();
//! assert!((rho.value - 0.2126).abs() < 1e-3);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN lands in the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod corpus;
pub mod dual;
pub mod error;
pub mod expr;
pub mod generator;
pub mod interval;
pub mod mean;
pub mod norms;
pub mod quad;
pub mod rho;
pub mod search;
pub mod verify;

pub use bounds::{full_report, pair_measures, BoundEntry, BoundKind, BoundReport, PairMeasures, Sandwich};
pub use error::{QamError, Result};
pub use expr::Expr;
pub use generator::{
    affine_normalize, arrow_pratt, from_spec, make_builtin, parse_generator, BuiltinFamily, Generator,
};
pub use interval::Interval;
pub use mean::{exp_mean, power_mean, qa_mean, two_point_mean, WeightedSample};
pub use norms::{partition_subinterval, star_norm, star_norm_ap, star_norm_ap_diff, StarNormResult};
pub use rho::{estimate_rho, rho_restricted_monotone, OptimizerConfig, RhoArg, RhoEstimate};
