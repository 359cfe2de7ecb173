//! Generic first-order linear rational-expectations solver.
//!
//! The model is stacked as `A E_t[z_{t+1}] = B z_t + C s_t` with AR(1)
//! shocks `s_{t+1} = Phi s_t + eps_{t+1}` and the predetermined entries of
//! `z` ordered first. The solver augments the shock block, runs an ordered
//! generalized Schur decomposition, and reads the unique stable solution off
//! the stable deflating subspace; a damped fixed-point iteration on the
//! policy matrix serves as an independent fallback path.

pub mod qz;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::irf::{Column, IrfError, IrfPanel, ShockKind, ShockSpec};
use crate::params::Params;
use qz::{ordered_qz, GeneralizedEigenvalue, QzError};

// ============================================================================
// Variables and system container
// ============================================================================

/// Endogenous variables of the stacked system, predetermined entries first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(usize)]
pub enum Var {
    WLag = 0,
    WHLag,
    WSLag,
    PiLag,
    ALag,
    Y,
    X,
    PiP,
    PiW,
    R,
    W,
    D,
    MuP,
    MuW,
    C,
    N,
    CH,
    NH,
    WH,
    PiH,
    MuH,
    CS,
    NS,
    WS,
    PiS,
    MuS,
}

pub const N_VARS: usize = 26;
pub const N_PREDETERMINED: usize = 5;

pub const VAR_LABELS: [&str; N_VARS] = [
    "w_lag", "w_h_lag", "w_s_lag", "pi_p_lag", "a_lag", "y", "x", "pi_p", "pi_w", "r", "w", "d",
    "mu_p", "mu_w", "c", "n", "c_h", "n_h", "w_h", "pi_h", "mu_h", "c_s", "n_s", "w_s", "pi_s",
    "mu_s",
];

/// Which Phillips-curve block the system carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Static price and wage Phillips curves.
    Simple,
    /// Discounted forward-looking Phillips curves with the comparison
    /// parameterization `psi_j -> (1 - beta*rho) psi_j` on the curve slopes.
    General,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Simple => "simple",
            Variant::General => "general",
        }
    }
}

/// How the policy rate is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyClosure {
    /// `r_t = phi pi_t - E_t pi_{t+1} - m_t`.
    TaylorRule,
    /// An optimal targeting rule `x_t = c_pi pi_t + c_lag pi_{t-1} + c_da (a_t - a_{t-1})`
    /// replacing the Taylor-rule row.
    TargetingRule {
        coef_pi: f64,
        coef_pi_lag: f64,
        coef_da: f64,
    },
}

/// First-order expectational system `A E z' = B z + C s`.
#[derive(Debug, Clone)]
pub struct LinearReSystem {
    pub a_matrix: DMatrix<f64>,
    pub b_matrix: DMatrix<f64>,
    pub c_matrix: DMatrix<f64>,
    /// Diagonal AR(1) persistence of the shocks.
    pub shock_persistence: DMatrix<f64>,
    pub predetermined_count: usize,
    pub labels: Vec<&'static str>,
    pub shock_labels: Vec<&'static str>,
    pub row_names: Vec<&'static str>,
    pub shock_kind: ShockKind,
}

impl LinearReSystem {
    pub fn n_vars(&self) -> usize {
        self.a_matrix.nrows()
    }

    pub fn n_shocks(&self) -> usize {
        self.c_matrix.ncols()
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN persistence must fail
    fn validate(&self) -> Result<(), ReError> {
        let n = self.n_vars();
        let k = self.n_shocks();
        if self.a_matrix.ncols() != n
            || self.b_matrix.shape() != (n, n)
            || self.c_matrix.nrows() != n
            || self.shock_persistence.shape() != (k, k)
        {
            return Err(ReError::Malformed("inconsistent matrix dimensions".into()));
        }
        if self.predetermined_count > n {
            return Err(ReError::Malformed(
                "predetermined_count exceeds variable count".into(),
            ));
        }
        for i in 0..k {
            let rho = self.shock_persistence[(i, i)];
            if !(rho.abs() < 1.0) {
                return Err(ReError::Malformed(format!(
                    "shock persistence must lie in (-1,1), got {rho}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ReError {
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("singular stacking: {0}")]
    SingularStacking(String),
    #[error("indeterminate: {stable} stable eigenvalues for {required} state variables")]
    Indeterminate { stable: usize, required: usize },
    #[error("explosive: {stable} stable eigenvalues for {required} state variables")]
    Explosive { stable: usize, required: usize },
    #[error("stable subspace is singular in the predetermined block")]
    SingularSubspace,
    #[error("fixed-point iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Qz(#[from] QzError),
}

// ============================================================================
// Equation table
// ============================================================================

struct SystemBuilder {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    names: Vec<&'static str>,
}

impl SystemBuilder {
    fn new() -> Self {
        SystemBuilder {
            a: DMatrix::zeros(N_VARS, N_VARS),
            b: DMatrix::zeros(N_VARS, N_VARS),
            c: DMatrix::zeros(N_VARS, 1),
            names: Vec::with_capacity(N_VARS),
        }
    }

    /// One equation `sum(lead_i E z'_i) = sum(cur_j z_j) + shock_coef * s`.
    fn eq(&mut self, name: &'static str, lead: &[(Var, f64)], cur: &[(Var, f64)], shock_coef: f64) {
        let r = self.names.len();
        for &(v, coef) in lead {
            self.a[(r, v as usize)] += coef;
        }
        for &(v, coef) in cur {
            self.b[(r, v as usize)] += coef;
        }
        self.c[(r, 0)] += shock_coef;
        self.names.push(name);
    }
}

/// Stacks the log-linear equations into first-order form with a Taylor rule.
pub fn build_system(
    params: &Params,
    variant: Variant,
    shock: ShockKind,
) -> Result<LinearReSystem, ReError> {
    build_system_with_policy(params, variant, shock, PolicyClosure::TaylorRule)
}

/// Stacks the system with an arbitrary policy closure.
pub fn build_system_with_policy(
    params: &Params,
    variant: Variant,
    shock: ShockKind,
    policy: PolicyClosure,
) -> Result<LinearReSystem, ReError> {
    if !params.psi_p.is_finite() || !params.psi_w.is_finite() {
        return Err(ReError::SingularStacking(
            "infinite substitution elasticities are closed-form limits; the stacked system needs finite psi_p, psi_w".into(),
        ));
    }

    let (gamma, varphi, lam, phi) = (
        params.gamma,
        params.varphi,
        params.lambda_h,
        params.phi_taylor,
    );
    let rho = shock.persistence(params);
    // General variant: discounted Phillips curves, slopes transformed to
    // (1 - beta*rho) psi so the forward curve is the discounted counterpart
    // of the static benchmark curve. beta = 0 makes the two variants equal
    // row by row.
    let (slope_p, slope_w, beta) = match variant {
        Variant::Simple => (params.psi_p, params.psi_w, 0.0),
        Variant::General => {
            let scale = 1.0 - params.beta * rho;
            (scale * params.psi_p, scale * params.psi_w, params.beta)
        }
    };

    let a_on = matches!(shock, ShockKind::Technology);
    let m_on = matches!(shock, ShockKind::Monetary);
    let a1 = if a_on { 1.0 } else { 0.0 };
    let m1 = if m_on { 1.0 } else { 0.0 };
    let gap_coef = (1.0 + varphi) / (varphi + gamma);

    use Var::*;
    let mut sb = SystemBuilder::new();
    // carriers for the predetermined block
    sb.eq("carrier_w", &[(WLag, 1.0)], &[(W, 1.0)], 0.0);
    sb.eq("carrier_w_h", &[(WHLag, 1.0)], &[(WH, 1.0)], 0.0);
    sb.eq("carrier_w_s", &[(WSLag, 1.0)], &[(WS, 1.0)], 0.0);
    sb.eq("carrier_pi_p", &[(PiLag, 1.0)], &[(PiP, 1.0)], 0.0);
    sb.eq("carrier_a", &[(ALag, 1.0)], &[], a1);
    // production y = a + n
    sb.eq("production", &[], &[(Y, -1.0), (N, 1.0)], a1);
    // resource y = c
    sb.eq("resource", &[], &[(Y, -1.0), (C, 1.0)], 0.0);
    // price markup mu_p = a - w
    sb.eq("price_markup", &[], &[(MuP, -1.0), (W, -1.0)], a1);
    // price Phillips curve eta_p (pi_p - beta E pi_p') = -slope_p mu_p
    sb.eq(
        "price_phillips",
        &[(PiP, params.eta_p * beta)],
        &[(PiP, params.eta_p), (MuP, slope_p)],
        0.0,
    );
    // wage inflation pi_w = w - w_{t-1} + pi_p
    sb.eq(
        "wage_inflation",
        &[],
        &[(PiW, -1.0), (W, 1.0), (WLag, -1.0), (PiP, 1.0)],
        0.0,
    );
    // wage markup mu_w = w - gamma c - varphi n
    sb.eq(
        "wage_markup",
        &[],
        &[(MuW, -1.0), (W, 1.0), (C, -gamma), (N, -varphi)],
        0.0,
    );
    // wage Phillips curve eta_w (pi_w - beta E pi_w') = -slope_w mu_w;
    // eta_w = 0 degenerates to the flexible-wage row mu_w = 0
    sb.eq(
        "wage_phillips",
        &[(PiW, params.eta_w * beta)],
        &[(PiW, params.eta_w), (MuW, slope_w)],
        0.0,
    );
    // profits d = a - w
    sb.eq("profits", &[], &[(D, -1.0), (W, -1.0)], a1);
    // Euler equation of savers gamma E c_s' = r + gamma c_s
    sb.eq("euler_s", &[(CS, gamma)], &[(R, 1.0), (CS, gamma)], 0.0);
    // hand-to-mouth budget c_h = w_h + n_h
    sb.eq("budget_h", &[], &[(CH, -1.0), (WH, 1.0), (NH, 1.0)], 0.0);
    // labor demand n_h = n - psi_w (w_h - w)
    sb.eq(
        "labor_demand_h",
        &[],
        &[(NH, -1.0), (N, 1.0), (WH, -params.psi_w), (W, params.psi_w)],
        0.0,
    );
    sb.eq(
        "aggregate_consumption",
        &[],
        &[(C, -1.0), (CH, lam), (CS, 1.0 - lam)],
        0.0,
    );
    sb.eq(
        "aggregate_labor",
        &[],
        &[(N, -1.0), (NH, lam), (NS, 1.0 - lam)],
        0.0,
    );
    sb.eq(
        "aggregate_wage",
        &[],
        &[(W, -1.0), (WH, lam), (WS, 1.0 - lam)],
        0.0,
    );
    sb.eq(
        "aggregate_wage_markup",
        &[],
        &[(MuW, -1.0), (MuH, lam), (MuS, 1.0 - lam)],
        0.0,
    );
    sb.eq(
        "aggregate_wage_inflation",
        &[],
        &[(PiW, -1.0), (PiH, lam), (PiS, 1.0 - lam)],
        0.0,
    );
    // type-H wage inflation pi_h = pi_p + w_h - w_{t-1}
    sb.eq(
        "wage_inflation_h",
        &[],
        &[(PiH, -1.0), (PiP, 1.0), (WH, 1.0), (WLag, -1.0)],
        0.0,
    );
    sb.eq(
        "wage_markup_h",
        &[],
        &[(MuH, -1.0), (WH, 1.0), (CH, -gamma), (NH, -varphi)],
        0.0,
    );
    sb.eq(
        "wage_phillips_h",
        &[(PiH, params.eta_w * beta)],
        &[(PiH, params.eta_w), (MuH, slope_w)],
        0.0,
    );
    match policy {
        PolicyClosure::TaylorRule => {
            // -E pi_p' = r - phi pi_p + m  <=>  r = phi pi_p - E pi_p' - m
            sb.eq("taylor_rule", &[(PiP, -1.0)], &[(R, 1.0), (PiP, -phi)], m1);
        }
        PolicyClosure::TargetingRule {
            coef_pi,
            coef_pi_lag,
            coef_da,
        } => {
            // x = c_pi pi_p + c_lag pi_{t-1} + c_da (a - a_{t-1})
            let da = if a_on { coef_da } else { 0.0 };
            sb.eq(
                "targeting_rule",
                &[],
                &[(X, -1.0), (PiP, coef_pi), (PiLag, coef_pi_lag), (ALag, -da)],
                da,
            );
        }
    }
    // output gap x = y - (1+varphi)/(varphi+gamma) a
    sb.eq("output_gap", &[], &[(X, -1.0), (Y, 1.0)], -gap_coef * a1);

    debug_assert_eq!(sb.names.len(), N_VARS);
    let system = LinearReSystem {
        a_matrix: sb.a,
        b_matrix: sb.b,
        c_matrix: sb.c,
        shock_persistence: DMatrix::from_element(1, 1, rho),
        predetermined_count: N_PREDETERMINED,
        labels: VAR_LABELS.to_vec(),
        shock_labels: vec![shock.column_label()],
        row_names: sb.names,
        shock_kind: shock,
    };
    system.validate()?;
    Ok(system)
}

// ============================================================================
// Solution
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determinacy {
    Determinate,
    Indeterminate,
    Explosive,
}

/// The unique stable solution: every variable as a linear map of the state
/// `(shocks, predetermined variables)`, plus the state transition.
#[derive(Debug, Clone)]
pub struct PolicyFunction {
    pub shock_kind: ShockKind,
    pub labels: Vec<&'static str>,
    pub state_labels: Vec<String>,
    /// `n_vars x n_states` map of states to all variables.
    pub p_matrix: DMatrix<f64>,
    /// `n_states x n_states` transition of `(shocks, predetermined)`.
    pub state_transition: DMatrix<f64>,
    pub determinacy: Determinacy,
    pub eigenvalues: Vec<GeneralizedEigenvalue>,
}

impl PolicyFunction {
    pub fn n_states(&self) -> usize {
        self.state_transition.nrows()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.state_transition
            .complex_eigenvalues()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

fn augment(system: &LinearReSystem) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = system.n_vars();
    let k = system.n_shocks();
    let m = n + k;
    let mut a = DMatrix::zeros(m, m);
    let mut b = DMatrix::zeros(m, m);
    for i in 0..k {
        a[(i, i)] = 1.0;
        for j in 0..k {
            b[(i, j)] = system.shock_persistence[(i, j)];
        }
    }
    for r in 0..n {
        for cc in 0..n {
            a[(k + r, k + cc)] = system.a_matrix[(r, cc)];
            b[(k + r, k + cc)] = system.b_matrix[(r, cc)];
        }
        for cc in 0..k {
            b[(k + r, cc)] = system.c_matrix[(r, cc)];
        }
    }
    (a, b)
}

/// Solves the system with the ordered-QZ (generalized Schur) method. The
/// unstable-root count must equal the jump count for a unique stable
/// solution; any other split is classified and returned as an error.
pub fn solve_re(system: &LinearReSystem) -> Result<PolicyFunction, ReError> {
    system.validate()?;
    let k = system.n_shocks();
    let n = system.n_vars();
    let n_states = k + system.predetermined_count;

    let (a_aug, b_aug) = augment(system);
    // pencil det(B - lambda A): solutions z ~ lambda^t
    let qz = ordered_qz(&b_aug, &a_aug)?;

    if qz.stable_count > n_states {
        return Err(ReError::Indeterminate {
            stable: qz.stable_count,
            required: n_states,
        });
    }
    if qz.stable_count < n_states {
        return Err(ReError::Explosive {
            stable: qz.stable_count,
            required: n_states,
        });
    }

    let ns = n_states;
    let z11 = qz.z.view((0, 0), (ns, ns)).into_owned();
    let z21 = qz.z.view((ns, 0), (n + k - ns, ns)).into_owned();
    let s11 = qz.s.view((0, 0), (ns, ns)).into_owned();
    let t11 = qz.t.view((0, 0), (ns, ns)).into_owned();

    let z11_inv = z11.clone().try_inverse().ok_or(ReError::SingularSubspace)?;
    let p_jump = &z21 * &z11_inv;
    // E y1' = T11^{-1} S11 y1  =>  states' = Z11 T11^{-1} S11 Z11^{-1} states
    let t11_lu = t11.lu();
    let tinv_s = t11_lu.solve(&s11).ok_or(ReError::SingularSubspace)?;
    let state_transition = &z11 * tinv_s * &z11_inv;

    // all n variables on the states: predetermined entries are states themselves
    let mut p_matrix = DMatrix::zeros(n, ns);
    for i in 0..system.predetermined_count {
        p_matrix[(i, k + i)] = 1.0;
    }
    for r in 0..(n - system.predetermined_count) {
        for cc in 0..ns {
            p_matrix[(system.predetermined_count + r, cc)] = p_jump[(r, cc)];
        }
    }

    let mut state_labels: Vec<String> = system.shock_labels.iter().map(|s| s.to_string()).collect();
    for i in 0..system.predetermined_count {
        state_labels.push(system.labels[i].to_string());
    }

    Ok(PolicyFunction {
        shock_kind: system.shock_kind,
        labels: system.labels.clone(),
        state_labels,
        p_matrix,
        state_transition,
        determinacy: Determinacy::Determinate,
        eigenvalues: qz.eigenvalues,
    })
}

/// Classifies a system without demanding a solution.
pub fn classify(system: &LinearReSystem) -> Result<Determinacy, ReError> {
    match solve_re(system) {
        Ok(_) => Ok(Determinacy::Determinate),
        Err(ReError::Indeterminate { .. }) => Ok(Determinacy::Indeterminate),
        Err(ReError::Explosive { .. }) => Ok(Determinacy::Explosive),
        Err(e) => Err(e),
    }
}

/// Fallback solver: damped fixed-point iteration on the policy matrix
/// (damping 0.5, cap 10,000 iterations, convergence 1e-12). Requires the
/// predetermined transition rows to be the first `predetermined_count`
/// equations, which the built-in stackings satisfy.
pub fn solve_re_iterative(system: &LinearReSystem) -> Result<PolicyFunction, ReError> {
    system.validate()?;
    let n = system.n_vars();
    let k = system.n_shocks();
    let nk = system.predetermined_count;
    let nu = n - nk;
    let ns = k + nk;

    for i in 0..nk {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (system.a_matrix[(i, j)] - expect).abs() > 0.0 {
                return Err(ReError::Malformed(
                    "iterative solver expects carrier rows (identity lead block) first".into(),
                ));
            }
        }
    }

    let bk = system.b_matrix.rows(0, nk).into_owned();
    let ck = system.c_matrix.rows(0, nk).into_owned();
    let au = system.a_matrix.rows(nk, nu).into_owned();
    let bu = system.b_matrix.rows(nk, nu).into_owned();
    let cu = system.c_matrix.rows(nk, nu).into_owned();
    let buk = bu.columns(0, nk).into_owned();
    let buu = bu.columns(nk, nu).into_owned();
    let buu_lu = buu.lu();

    // z = W(P) x with x = [s; k]
    let w_of = |p: &DMatrix<f64>| -> DMatrix<f64> {
        let mut w = DMatrix::zeros(n, ns);
        for i in 0..nk {
            w[(i, k + i)] = 1.0;
        }
        for r in 0..nu {
            for cc in 0..ns {
                w[(nk + r, cc)] = p[(r, cc)];
            }
        }
        w
    };
    let sel_k = {
        let mut s = DMatrix::zeros(nk, ns);
        for i in 0..nk {
            s[(i, k + i)] = 1.0;
        }
        s
    };
    let cu_pad = {
        let mut m = DMatrix::zeros(nu, ns);
        for r in 0..nu {
            for cc in 0..k {
                m[(r, cc)] = cu[(r, cc)];
            }
        }
        m
    };

    let mut p = DMatrix::<f64>::zeros(nu, ns);
    let cap = 10_000;
    for _ in 0..cap {
        let w = w_of(&p);
        // state transition under the current guess
        let mut mbar = DMatrix::zeros(ns, ns);
        for i in 0..k {
            for j in 0..k {
                mbar[(i, j)] = system.shock_persistence[(i, j)];
            }
        }
        let mk = &bk * &w + {
            let mut m = DMatrix::zeros(nk, ns);
            for r in 0..nk {
                for cc in 0..k {
                    m[(r, cc)] = ck[(r, cc)];
                }
            }
            m
        };
        for r in 0..nk {
            for cc in 0..ns {
                mbar[(k + r, cc)] = mk[(r, cc)];
            }
        }
        let rhs = &au * &w * &mbar - &cu_pad - &buk * &sel_k;
        let p_new = buu_lu
            .solve(&rhs)
            .ok_or_else(|| ReError::SingularStacking("static block is singular".into()))?;
        let delta = (&p_new - &p).abs().max();
        p = 0.5 * p_new + 0.5 * p.clone();
        if delta < 1e-12 {
            // assemble the same outputs as the QZ path
            let w = w_of(&p);
            let mk = &bk * &w + {
                let mut m = DMatrix::zeros(nk, ns);
                for r in 0..nk {
                    for cc in 0..k {
                        m[(r, cc)] = ck[(r, cc)];
                    }
                }
                m
            };
            let mut state_transition = DMatrix::zeros(ns, ns);
            for i in 0..k {
                for j in 0..k {
                    state_transition[(i, j)] = system.shock_persistence[(i, j)];
                }
            }
            for r in 0..nk {
                for cc in 0..ns {
                    state_transition[(k + r, cc)] = mk[(r, cc)];
                }
            }
            let mut p_matrix = DMatrix::zeros(n, ns);
            for i in 0..nk {
                p_matrix[(i, k + i)] = 1.0;
            }
            for r in 0..nu {
                for cc in 0..ns {
                    p_matrix[(nk + r, cc)] = p[(r, cc)];
                }
            }
            let radius = state_transition
                .complex_eigenvalues()
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if radius >= 1.0 {
                return Err(ReError::Explosive {
                    stable: 0,
                    required: ns,
                });
            }
            let mut state_labels: Vec<String> =
                system.shock_labels.iter().map(|s| s.to_string()).collect();
            for i in 0..nk {
                state_labels.push(system.labels[i].to_string());
            }
            return Ok(PolicyFunction {
                shock_kind: system.shock_kind,
                labels: system.labels.clone(),
                state_labels,
                p_matrix,
                state_transition,
                determinacy: Determinacy::Determinate,
                eigenvalues: Vec::new(),
            });
        }
    }
    Err(ReError::NoConvergence(cap))
}

/// Max-abs residual of `A E z' - B z - C s` under the policy, over a basis
/// of unit states.
pub fn residual(system: &LinearReSystem, policy: &PolicyFunction) -> f64 {
    let (a_aug, b_aug) = augment(system);
    let k = system.n_shocks();
    let ns = policy.n_states();
    let n = system.n_vars();
    let mut g = DMatrix::zeros(n + k, ns);
    for i in 0..k {
        g[(i, i)] = 1.0;
    }
    for r in 0..n {
        for cc in 0..ns {
            g[(k + r, cc)] = policy.p_matrix[(r, cc)];
        }
    }
    (a_aug * &g * &policy.state_transition - b_aug * &g)
        .abs()
        .max()
}

/// Iterates the policy from a one-time innovation and emits the same panel
/// type as the closed-form engine (values in percent).
pub fn irf_from_policy(
    policy: &PolicyFunction,
    spec: &ShockSpec,
    params: &Params,
) -> Result<IrfPanel, IrfError> {
    if policy.determinacy != Determinacy::Determinate {
        return Err(IrfError::BadSpec(
            "policy function is not determinate".into(),
        ));
    }
    let spec = ShockSpec::new(spec.kind, spec.size, spec.horizon)?;
    let h = spec.horizon;
    let ns = policy.n_states();
    let nat = (1.0 + params.varphi) / (params.varphi + params.gamma);
    let rf_coef = params.gamma * nat * (params.rho_a - 1.0);

    let var_cols: [(Var, Column); 21] = [
        (Var::Y, Column::Y),
        (Var::X, Column::X),
        (Var::PiP, Column::PiP),
        (Var::PiW, Column::PiW),
        (Var::R, Column::R),
        (Var::W, Column::W),
        (Var::D, Column::D),
        (Var::MuP, Column::MuP),
        (Var::MuW, Column::MuW),
        (Var::C, Column::C),
        (Var::N, Column::N),
        (Var::CH, Column::CH),
        (Var::NH, Column::NH),
        (Var::WH, Column::WH),
        (Var::PiH, Column::PiH),
        (Var::MuH, Column::MuH),
        (Var::CS, Column::CS),
        (Var::NS, Column::NS),
        (Var::WS, Column::WS),
        (Var::PiS, Column::PiS),
        (Var::MuS, Column::MuS),
    ];

    let mut panel = IrfPanel::zeros(spec.kind, h);
    let mut state = nalgebra::DVector::<f64>::zeros(ns);
    state[0] = spec.size * 100.0;
    for t in 0..h {
        let z = &policy.p_matrix * &state;
        panel.set(Column::Shock, t, state[0]);
        for (v, col) in var_cols {
            panel.set(col, t, z[v as usize]);
        }
        if matches!(spec.kind, ShockKind::Technology) {
            panel.set(Column::YF, t, nat * state[0]);
            panel.set(Column::RF, t, rf_coef * state[0]);
        }
        state = &policy.state_transition * state;
    }
    Ok(panel)
}

/// Writes the stacked matrices and the eigenvalue list to CSV files in `dir`
/// (`re_system_{a,b,c}.csv`, `re_eigenvalues.csv`).
pub fn dump_system(
    system: &LinearReSystem,
    eigenvalues: Option<&[GeneralizedEigenvalue]>,
    dir: &std::path::Path,
) -> std::io::Result<()> {
    use std::io::Write;
    let matrices: [(&str, &DMatrix<f64>, &[&'static str]); 3] = [
        ("re_system_a.csv", &system.a_matrix, &system.labels),
        ("re_system_b.csv", &system.b_matrix, &system.labels),
        ("re_system_c.csv", &system.c_matrix, &system.shock_labels),
    ];
    for (name, m, col_labels) in matrices {
        let mut f = std::fs::File::create(dir.join(name))?;
        write!(f, "row")?;
        for l in col_labels.iter() {
            write!(f, ",{l}")?;
        }
        writeln!(f)?;
        for r in 0..m.nrows() {
            write!(f, "{}", system.row_names[r])?;
            for cc in 0..m.ncols() {
                write!(f, ",{}", crate::csvio::fmt_f64(m[(r, cc)]))?;
            }
            writeln!(f)?;
        }
    }
    if let Some(eigs) = eigenvalues {
        let mut f = std::fs::File::create(dir.join("re_eigenvalues.csv"))?;
        writeln!(f, "alpha_re,alpha_im,beta,modulus,stable")?;
        for e in eigs {
            writeln!(
                f,
                "{},{},{},{},{}",
                crate::csvio::fmt_f64(e.alpha_re),
                crate::csvio::fmt_f64(e.alpha_im),
                crate::csvio::fmt_f64(e.beta),
                crate::csvio::fmt_f64(e.modulus()),
                e.is_stable()
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irf::{irf_monetary, irf_technology};
    use crate::saddle::solve_params;

    fn spec(kind: ShockKind) -> ShockSpec {
        ShockSpec::new(kind, 0.01, 40).unwrap()
    }

    #[test]
    fn simple_variant_reproduces_closed_form_monetary() {
        let p = Params::benchmark();
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        let policy = solve_re(&sys).unwrap();
        let numeric = irf_from_policy(&policy, &spec(ShockKind::Monetary), &p).unwrap();
        let closed = irf_monetary(&p, &spec(ShockKind::Monetary)).unwrap();
        let dev = numeric.max_abs_diff(&closed);
        assert!(dev < 1e-8, "max deviation {dev}");
    }

    #[test]
    fn simple_variant_reproduces_closed_form_technology() {
        let p = Params::benchmark();
        let sys = build_system(&p, Variant::Simple, ShockKind::Technology).unwrap();
        let policy = solve_re(&sys).unwrap();
        let numeric = irf_from_policy(&policy, &spec(ShockKind::Technology), &p).unwrap();
        let closed = irf_technology(&p, &spec(ShockKind::Technology)).unwrap();
        let dev = numeric.max_abs_diff(&closed);
        assert!(dev < 1e-8, "max deviation {dev}");
    }

    #[test]
    fn policy_recovers_stable_root_on_inflation_lag() {
        // w_{t-1} and pi_{t-1} are collinear along the equilibrium path
        // (w = a + rp*pi), so the own-lag loading of inflation is read along
        // that direction: rp * P[pi_p, w_lag] + P[pi_p, pi_lag] = xi1.
        let p = Params::benchmark();
        let (c, s) = solve_params(&p).unwrap();
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        let policy = solve_re(&sys).unwrap();
        let row = Var::PiP as usize;
        let col_w = 1 + Var::WLag as usize; // states: [m, w_lag, ...]
        let col_pi = 1 + Var::PiLag as usize;
        let own_lag = c.rigid_p * policy.p_matrix[(row, col_w)] + policy.p_matrix[(row, col_pi)];
        assert!(
            (own_lag - s.xi1).abs() < 1e-8,
            "own-lag loading {own_lag} vs xi1 {}",
            s.xi1
        );
        // and the state transition carries exactly {rho_m, xi1} as its
        // nonzero spectrum
        let eigs = policy.state_transition.complex_eigenvalues();
        let mut mods: Vec<f64> = eigs.iter().map(|c| c.norm()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mods[5] - p.rho_m).abs() < 1e-8);
        assert!((mods[4] - s.xi1).abs() < 1e-8);
    }

    #[test]
    fn rank_price_only_reduces_to_three_equation_block() {
        // lambda = 0, eta_w = 0: policy for (pi_p, x, r) matches the
        // textbook three-equation solution
        let p = Params {
            lambda_h: 0.0,
            eta_w: 0.0,
            ..Params::benchmark()
        };
        let (_, s) = solve_params(&p).unwrap();
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        let policy = solve_re(&sys).unwrap();
        // impact of a unit m: pi = omega_p, x = omega_x, lags carry nothing (xi1 = 0)
        assert!((policy.p_matrix[(Var::PiP as usize, 0)] - s.omega_p).abs() < 1e-10);
        assert!((policy.p_matrix[(Var::X as usize, 0)] - s.omega_x).abs() < 1e-10);
        let own_lag = policy.p_matrix[(Var::PiP as usize, 1 + Var::PiLag as usize)];
        assert!(own_lag.abs() < 1e-10);
    }

    #[test]
    fn taylor_principle_violation_is_indeterminate() {
        let p = Params {
            phi_taylor: 0.5,
            lambda_h: 0.0,
            ..Params::benchmark()
        };
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        assert!(matches!(solve_re(&sys), Err(ReError::Indeterminate { .. })));
        assert_eq!(classify(&sys).unwrap(), Determinacy::Indeterminate);
    }

    #[test]
    fn general_with_beta_zero_equals_simple_row_by_row() {
        let p = Params {
            beta: 1e-300, // validation requires beta > 0; the limit is exact
            ..Params::benchmark()
        };
        // build with beta exactly zero through the variant arithmetic
        let p0 = Params { beta: 0.0, ..p };
        let simple = build_system(&p0, Variant::Simple, ShockKind::Monetary).unwrap();
        let general = build_system(&p0, Variant::General, ShockKind::Monetary).unwrap();
        assert_eq!(simple.a_matrix, general.a_matrix);
        assert_eq!(simple.b_matrix, general.b_matrix);
        assert_eq!(simple.c_matrix, general.c_matrix);
        // and the policies coincide
        let ps = solve_re(&simple).unwrap();
        let pg = solve_re(&general).unwrap();
        assert!((&ps.p_matrix - &pg.p_matrix).abs().max() < 1e-10);
    }

    #[test]
    fn general_benchmark_monetary_is_close_to_simple() {
        let p = Params::benchmark();
        let sys_g = build_system(&p, Variant::General, ShockKind::Monetary).unwrap();
        let policy = solve_re(&sys_g).unwrap();
        let general = irf_from_policy(&policy, &spec(ShockKind::Monetary), &p).unwrap();
        let simple = irf_monetary(&p, &spec(ShockKind::Monetary)).unwrap();
        let rel = |c: Column| (general.get(c, 0) - simple.get(c, 0)).abs() / simple.get(c, 0).abs();
        assert!(rel(Column::PiP) < 0.05);
        assert!(rel(Column::Y) < 0.15);
    }

    #[test]
    fn solution_residual_is_tiny() {
        let p = Params::benchmark();
        for shock in [ShockKind::Monetary, ShockKind::Technology] {
            for variant in [Variant::Simple, Variant::General] {
                let sys = build_system(&p, variant, shock).unwrap();
                let policy = solve_re(&sys).unwrap();
                let r = residual(&sys, &policy);
                assert!(r < 1e-10, "residual {r} for {variant:?}/{shock:?}");
                assert!(policy.spectral_radius() < 1.0);
            }
        }
    }

    #[test]
    fn iterative_fallback_agrees_with_qz() {
        let p = Params::benchmark();
        for shock in [ShockKind::Monetary, ShockKind::Technology] {
            let sys = build_system(&p, Variant::Simple, shock).unwrap();
            let qz_policy = solve_re(&sys).unwrap();
            let fp_policy = solve_re_iterative(&sys).unwrap();
            let dev = (&qz_policy.p_matrix - &fp_policy.p_matrix).abs().max();
            assert!(dev < 1e-9, "policy deviation {dev}");
        }
    }

    #[test]
    fn zero_shock_gives_zero_panel() {
        let p = Params::benchmark();
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        let policy = solve_re(&sys).unwrap();
        // zero size is rejected by ShockSpec, so scale a unit panel instead
        let mut panel = irf_from_policy(&policy, &spec(ShockKind::Monetary), &p).unwrap();
        panel.scale(0.0);
        assert_eq!(
            panel.max_abs_diff(&IrfPanel::zeros(ShockKind::Monetary, 40)),
            0.0
        );
    }

    #[test]
    fn doubling_the_shock_doubles_the_panel() {
        let p = Params::benchmark();
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        let policy = solve_re(&sys).unwrap();
        let one = irf_from_policy(&policy, &spec(ShockKind::Monetary), &p).unwrap();
        let two = irf_from_policy(
            &policy,
            &ShockSpec::new(ShockKind::Monetary, 0.02, 40).unwrap(),
            &p,
        )
        .unwrap();
        let mut doubled = one.clone();
        doubled.scale(2.0);
        assert!(two.max_abs_diff(&doubled) < 1e-12);
    }

    #[test]
    fn equation_rows_are_addressable_by_name() {
        let p = Params::benchmark();
        let sys = build_system(&p, Variant::Simple, ShockKind::Monetary).unwrap();
        let row = |name: &str| sys.row_names.iter().position(|n| *n == name).unwrap();

        // taylor_rule: -E pi' = r - phi pi + m
        let r = row("taylor_rule");
        assert_eq!(sys.a_matrix[(r, Var::PiP as usize)], -1.0);
        assert_eq!(sys.b_matrix[(r, Var::R as usize)], 1.0);
        assert_eq!(sys.b_matrix[(r, Var::PiP as usize)], -p.phi_taylor);
        assert_eq!(sys.c_matrix[(r, 0)], 1.0);

        // wage_phillips: eta_w pi_w + psi_w mu_w = 0 (static in the simple variant)
        let r = row("wage_phillips");
        assert_eq!(sys.a_matrix[(r, Var::PiW as usize)], 0.0);
        assert_eq!(sys.b_matrix[(r, Var::PiW as usize)], p.eta_w);
        assert_eq!(sys.b_matrix[(r, Var::MuW as usize)], p.psi_w);

        // labor_demand_h: -n_h + n - psi_w w_h + psi_w w = 0
        let r = row("labor_demand_h");
        assert_eq!(sys.b_matrix[(r, Var::NH as usize)], -1.0);
        assert_eq!(sys.b_matrix[(r, Var::WH as usize)], -p.psi_w);

        // general variant adds the discounted lead with the transformed slope
        let g = build_system(&p, Variant::General, ShockKind::Monetary).unwrap();
        let r = row("price_phillips");
        assert_eq!(g.a_matrix[(r, Var::PiP as usize)], p.eta_p * p.beta);
        let scale = 1.0 - p.beta * p.rho_m;
        assert!((g.b_matrix[(r, Var::MuP as usize)] - scale * p.psi_p).abs() < 1e-15);
    }

    #[test]
    fn infinite_elasticities_are_rejected() {
        let p = Params {
            psi_w: f64::INFINITY,
            ..Params::benchmark()
        };
        assert!(matches!(
            build_system(&p, Variant::Simple, ShockKind::Monetary),
            Err(ReError::SingularStacking(_))
        ));
    }
}
