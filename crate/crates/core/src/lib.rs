//! Analytical two-agent New Keynesian (TANK) model with Rotemberg price and
//! wage rigidities.
//!
//! The crate provides:
//!
//! - **`params` / `coeffs`** — structural parameters with validation and all
//!   composite coefficients (Phillips-curve blocks, profit sensitivities,
//!   the effective IS slope, the adjusted inflation penalty).
//! - **`saddle`** — the closed-form saddle-path solution: characteristic
//!   roots, impact and cumulative multipliers, determinacy diagnostics, and
//!   comparative-statics sweeps with monotonicity verdicts.
//! - **`irf`** — impulse-response panels for monetary and technology shocks
//!   from the closed-form recursions, with every log-linear identity
//!   reconstructed and verified.
//! - **`re`** — a generic first-order linear rational-expectations solver
//!   (ordered QZ with a fixed-point fallback) used both as an independent
//!   numerical check on the closed forms and to solve the forward-looking
//!   adjustment-cost variant.
//! - **`welfare`** — the second-order loss with the heterogeneity-adjusted
//!   inflation penalty and the optimal targeting rules under discretion and
//!   commitment.
//! - **`csvio` / `svg`** — deterministic CSV and SVG artifacts.
//!
//! All computations are pure functions of their inputs and safe to call from
//! any number of threads.

pub mod coeffs;
pub mod csvio;
pub mod irf;
pub mod params;
pub mod re;
pub mod saddle;
pub mod svg;
pub mod welfare;

pub use coeffs::{delta_derivatives, derive, DeltaSensitivities, DerivedCoefficients, FlexRatio};
pub use irf::{irf, irf_monetary, irf_technology, Column, IrfPanel, ShockKind, ShockSpec};
pub use params::{ParameterName, Params, ValidationReport};
pub use re::{
    build_system, build_system_with_policy, irf_from_policy, solve_re, solve_re_iterative,
    Determinacy, LinearReSystem, PolicyClosure, PolicyFunction, Variant,
};
pub use saddle::{
    ad_curve_coefficients, comparative_statics, solve, solve_params, AdCurve, SaddleSolution,
    SweepTable,
};
pub use welfare::{
    loss, rule_policy, targeting_rule, welfare_weights, LossValue, Regime, TargetingRule,
    WelfareWeights,
};
