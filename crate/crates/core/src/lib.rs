//! Bohnenblust-Hille constant families and their asymptotics, with an
//! empirical verifier for the inequality itself.
//!
//! The Bohnenblust-Hille inequality bounds the `ℓ_{2m/(m+1)}` norm of an
//! m-linear form's coefficient tensor by `C_m` times its sup norm over the
//! unit polydisk. This crate computes five families of valid constants
//! `C_m` in log space — three classical closed forms and the two recursive
//! families (real and complex scalars) driven by Khinchine constants —
//! and verifies numerically that the recursive families' consecutive
//! ratios `D_n = C_{n+1}/C_n` converge to 1, with the Euler-constant
//! closed forms for the limits of `C_{2n}/C_n` along the way.
//!
//! Modules follow the pipeline:
//!
//! * [`specialfn`] — `ln Γ`, the Euler constant, the crossover exponent `p0`;
//! * [`khinchine`] — the Khinchine constants `A_p` in both evaluation rules;
//! * [`bhconstants`] — the constant families and their ratio sequences;
//! * [`asymptotics`] — limit targets, pre-limit evaluations, tail scans;
//! * [`verifier`] — explicit multilinear forms, sup norms, inequality checks.
//!
//! The numeric core is generic over [`RealScalar`]: `f64` everywhere by
//! default, with [`DoubleDouble`] (~31 significant digits) available for
//! oracle cross-checks at the same call sites.

// Domain guards use `!(x > 0)`-style comparisons to reject NaN as well;
// reference fixtures keep their full published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod asymptotics;
pub mod bhconstants;
pub mod ddouble;
pub mod error;
pub mod khinchine;
pub mod scalar;
pub mod specialfn;
pub mod verifier;

pub use asymptotics::{
    check_claim1, check_contraction, convergence_report, envelope, even_ratio, gamma_limit_value,
    limit_target, limit_targets, ConvergenceReport, LimitKind, LimitTarget, TailScan,
};
pub use bhconstants::{
    constant_table, log_constant, ratio, ratio_series, ConstantTable, Family, FamilySpec,
    LogValue, RatioSeries,
};
pub use ddouble::DoubleDouble;
pub use error::{Error, Result};
pub use khinchine::{a_p, ln_a_p, resolved_p0, KhinchineMode};
pub use scalar::RealScalar;
pub use specialfn::{euler_gamma, find_p0, ln_gamma, Precision};
pub use verifier::{
    bh_lhs, check_inequality, littlewood_form, lower_bound_search, random_form,
    sup_norm_complex_lower, sup_norm_real, Dist, Form, InequalityOptions, InequalityReport,
    MultilinearForm, ScalarField, SupOptions, Verdict,
};

/// Extended-precision scalar (~31 significant digits) for oracle runs.
pub type Extended = DoubleDouble;

/// Real form over the default scalar type.
pub type RealForm = verifier::MultilinearForm<f64>;

/// Complex form over the default scalar type.
pub type ComplexForm = verifier::MultilinearForm<num_complex::Complex<f64>>;

/// Constant table over the default scalar type.
pub type Table = bhconstants::ConstantTable<f64>;
