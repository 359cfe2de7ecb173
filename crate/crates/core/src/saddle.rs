//! Closed-form saddle-path solution: characteristic roots, impact and
//! cumulative multipliers, determinacy diagnostics, comparative statics.

use thiserror::Error;

use crate::coeffs::{derive, DeriveError, DerivedCoefficients};
use crate::params::{ParameterName, Params};

/// Roots and multipliers of the inflation/output-gap system under a
/// monetary shock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    /// Stable root, in [0,1) when determinate.
    pub xi1: f64,
    /// Unstable root, > 1 when determinate.
    pub xi2: f64,
    /// Impact multiplier of price inflation, d pi_p / d m.
    pub omega_p: f64,
    /// Impact multiplier of the output gap, d x / d m.
    pub omega_x: f64,
    /// Cumulative inflation multiplier over all horizons.
    pub omega_p_inf: f64,
    /// Cumulative output-gap multiplier over all horizons.
    pub omega_x_inf: f64,
    /// True when 0 <= xi1 < 1 < xi2.
    pub determinate: bool,
    /// `1 - gamma*delta_p + gamma*kappa1/kappa2 > 0` (downward-convex parabola).
    pub ad_condition: bool,
    /// `phi_taylor > 1 + 1/kappa2`, required by the short-run comparative
    /// statics in lambda, eta, psi.
    pub prop1_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("indeterminate: AD condition fails (Xi_a = {xi_a} <= 0)")]
    Indeterminate { xi_a: f64 },
    #[error(
        "oscillatory/indeterminate: complex characteristic roots (discriminant = {discriminant})"
    )]
    OscillatoryRoots { discriminant: f64 },
    #[error("root coincidence: |xi2 - {rho_name}| < 1e-12, multiplier undefined")]
    RootCoincidence { rho_name: &'static str },
    #[error(transparent)]
    Derive(#[from] DeriveError),
}

/// Solves the characteristic quadratic `xi_a xi^2 - xi_b xi + xi_c = 0` with
/// the numerically stable split: larger root from the quadratic formula,
/// smaller root from Vieta. Multipliers follow from the roots.
pub fn solve(coeffs: &DerivedCoefficients, params: &Params) -> Result<SaddleSolution, SolveError> {
    let (xi_a, xi_b, xi_c) = (coeffs.xi_a, coeffs.xi_b, coeffs.xi_c);
    let ad_condition = xi_a > 0.0;
    if !ad_condition {
        return Err(SolveError::Indeterminate { xi_a });
    }

    let discriminant = xi_b * xi_b - 4.0 * xi_a * xi_c;
    if discriminant < 0.0 {
        return Err(SolveError::OscillatoryRoots { discriminant });
    }
    // xi_b > 0 here (phi > 1, xi_a > 0, xi_c >= 0), so the + branch is the
    // larger-magnitude root and the Vieta division does not cancel.
    let xi2 = (xi_b + discriminant.sqrt()) / (2.0 * xi_a);
    let xi1 = if xi_c == 0.0 {
        0.0
    } else {
        xi_c / (xi_a * xi2)
    };

    if (xi2 - params.rho_m).abs() < 1e-12 {
        return Err(SolveError::RootCoincidence { rho_name: "rho_m" });
    }

    let omega_p = 1.0 / (xi_a * (xi2 - params.rho_m));
    let omega_x = coeffs.k1_over_k2 * omega_p;

    let omega_p_inf = omega_p / ((1.0 - xi1) * (1.0 - params.rho_m));
    // cumulative output multiplier: (kappa1 - 1)/kappa2 = (rp + rw)/(gamma + varphi)
    let omega_x_inf =
        (coeffs.rigid_p + coeffs.rigid_w) / (params.gamma + params.varphi) * omega_p_inf;

    Ok(SaddleSolution {
        xi1,
        xi2,
        omega_p,
        omega_x,
        omega_p_inf,
        omega_x_inf,
        determinate: (0.0..1.0).contains(&xi1) && xi2 > 1.0,
        ad_condition,
        prop1_condition: params.phi_taylor > 1.0 + coeffs.inv_kappa2,
    })
}

impl SaddleSolution {
    /// Closed form of the cumulative inflation multiplier,
    /// `1 / {(1-rho_m)[phi - 1 + Xi_a (1-xi1)(1-rho_m)]}`. Must agree with
    /// the recursion-sum form stored in `omega_p_inf`.
    pub fn omega_p_inf_closed(&self, coeffs: &DerivedCoefficients, params: &Params) -> f64 {
        let one_m_rho = 1.0 - params.rho_m;
        1.0 / (one_m_rho * (params.phi_taylor - 1.0 + coeffs.xi_a * (1.0 - self.xi1) * one_m_rho))
    }
}

/// Convenience: derive + solve in one call.
pub fn solve_params(params: &Params) -> Result<(DerivedCoefficients, SaddleSolution), SolveError> {
    let coeffs = derive(params)?;
    let sol = solve(&coeffs, params)?;
    Ok((coeffs, sol))
}

// ============================================================================
// AD curve
// ============================================================================

/// Coefficients of the aggregate-demand relation for price inflation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdCurve {
    /// Coefficient on the monetary shock: `1 / (phi - 1 - gamma delta_p (1 - rho_m))`.
    pub shock_coefficient: f64,
    /// For the wage-flexible case only: the pair multiplying `(x_t, m_t)`
    /// over the same denominator, i.e. `(gamma (rho_m - 1)/den, 1/den)`.
    pub slope_pair: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdCurveError {
    #[error("AD undefined: requires 1 - gamma*delta_p > 0, got {value}")]
    ForwardSumDiverges { value: f64 },
    #[error("AD undefined: denominator phi - 1 - gamma*delta_p*(1 - rho_m) = {value} vanishes")]
    ZeroDenominator { value: f64 },
}

pub fn ad_curve_coefficients(
    coeffs: &DerivedCoefficients,
    params: &Params,
) -> Result<AdCurve, AdCurveError> {
    let forward = 1.0 - params.gamma * coeffs.delta_p;
    if forward <= 0.0 {
        return Err(AdCurveError::ForwardSumDiverges { value: forward });
    }
    let den = params.phi_taylor - 1.0 - params.gamma * coeffs.delta_p * (1.0 - params.rho_m);
    if den.abs() < 1e-14 {
        return Err(AdCurveError::ZeroDenominator { value: den });
    }
    let slope_pair =
        (coeffs.rigid_w == 0.0).then(|| (params.gamma * (params.rho_m - 1.0) / den, 1.0 / den));
    Ok(AdCurve {
        shock_coefficient: 1.0 / den,
        slope_pair,
    })
}

// ============================================================================
// Comparative statics sweeps
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// One proposition-backed monotonicity claim, evaluated over a sweep.
#[derive(Debug, Clone)]
pub struct MonotonicityVerdict {
    /// Which multiplier the claim is about.
    pub quantity: &'static str,
    pub expected: Direction,
    /// Statement the claim comes from.
    pub source: &'static str,
    /// False when the claim's precondition fails on this grid (the values are
    /// still reported, the verdict is just not evaluated).
    pub applicable: bool,
    /// `Some(true)` when the strict monotonicity holds at tolerance 1e-9;
    /// `None` when not applicable or when any grid point failed to solve.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub solution: Result<SaddleSolution, SolveError>,
}

/// Table of solutions along a one-parameter grid plus proposition verdicts.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub target: ParameterName,
    pub rows: Vec<SweepRow>,
    pub verdicts: Vec<MonotonicityVerdict>,
}

#[derive(Debug, Clone, Error)]
pub enum SweepError {
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("grid point {target} = {value} is invalid: {first_violation}")]
    InvalidPoint {
        target: ParameterName,
        value: f64,
        first_violation: String,
    },
}

/// Solves along a grid of one parameter. Solve failures are recorded per
/// point; invalid parameter combinations abort the sweep.
pub fn comparative_statics(
    base: &Params,
    target: ParameterName,
    grid: &[f64],
) -> Result<SweepTable, SweepError> {
    if grid.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &value in grid {
        let p = base.with(target, value);
        let report = p.validate();
        if !report.is_valid() {
            return Err(SweepError::InvalidPoint {
                target,
                value,
                first_violation: report.violations[0].clone(),
            });
        }
        rows.push(SweepRow {
            value,
            solution: solve_params(&p).map(|(_, s)| s),
        });
    }
    let verdicts = evaluate_verdicts(base, target, &rows);
    Ok(SweepTable {
        target,
        rows,
        verdicts,
    })
}

const TOL_MONO: f64 = 1e-9;

fn strictly<F: Fn(&SaddleSolution) -> f64>(
    rows: &[SweepRow],
    dir: Direction,
    f: F,
) -> Option<bool> {
    let mut prev: Option<f64> = None;
    for row in rows {
        let sol = row.solution.as_ref().ok()?;
        let v = f(sol);
        if let Some(p) = prev {
            let ok = match dir {
                Direction::Increasing => v > p + TOL_MONO,
                Direction::Decreasing => v < p - TOL_MONO,
            };
            if !ok {
                return Some(false);
            }
        }
        prev = Some(v);
    }
    Some(true)
}

fn evaluate_verdicts(
    base: &Params,
    target: ParameterName,
    rows: &[SweepRow],
) -> Vec<MonotonicityVerdict> {
    use Direction::*;
    let cond_everywhere = rows
        .iter()
        .all(|r| matches!(&r.solution, Ok(s) if s.prop1_condition));
    let rank = base.lambda_h == 0.0;

    // (quantity, accessor index, expected, source, applicable)
    let mut claims: Vec<(&'static str, usize, Direction, &'static str, bool)> = Vec::new();
    match target {
        ParameterName::PhiTaylor => {
            claims.push(("omega_p", 0, Decreasing, "short-run response to phi", true));
            claims.push(("omega_x", 1, Decreasing, "short-run response to phi", true));
            claims.push((
                "omega_p_inf",
                2,
                Decreasing,
                "long-run response to phi",
                true,
            ));
            claims.push((
                "omega_x_inf",
                3,
                Decreasing,
                "long-run response to phi",
                true,
            ));
        }
        ParameterName::LambdaH => {
            claims.push((
                "omega_p",
                0,
                Increasing,
                "short-run response to lambda",
                cond_everywhere,
            ));
            claims.push((
                "omega_x",
                1,
                Increasing,
                "short-run response to lambda",
                cond_everywhere,
            ));
            claims.push((
                "omega_p_inf",
                2,
                Increasing,
                "long-run response to lambda",
                true,
            ));
            claims.push((
                "omega_x_inf",
                3,
                Increasing,
                "long-run response to lambda",
                true,
            ));
        }
        ParameterName::EtaP | ParameterName::EtaW => {
            claims.push((
                "omega_x",
                1,
                Increasing,
                "adjustment-cost effect",
                rank || cond_everywhere,
            ));
            // total effect on omega_p is ambiguous under heterogeneity
            claims.push((
                "omega_p",
                0,
                Decreasing,
                "adjustment-cost effect (lambda = 0)",
                rank,
            ));
        }
        ParameterName::PsiP | ParameterName::PsiW => {
            claims.push((
                "omega_x",
                1,
                Decreasing,
                "competitiveness effect",
                rank || cond_everywhere,
            ));
            claims.push((
                "omega_p",
                0,
                Increasing,
                "competitiveness effect (lambda = 0)",
                rank,
            ));
        }
        _ => {}
    }

    claims
        .into_iter()
        .map(|(quantity, idx, expected, source, applicable)| {
            let holds = if applicable {
                match idx {
                    0 => strictly(rows, expected, |s| s.omega_p),
                    1 => strictly(rows, expected, |s| s.omega_x),
                    2 => strictly(rows, expected, |s| s.omega_p_inf),
                    _ => strictly(rows, expected, |s| s.omega_x_inf),
                }
            } else {
                None
            };
            MonotonicityVerdict {
                quantity,
                expected,
                source,
                applicable,
                holds,
            }
        })
        .collect()
}
