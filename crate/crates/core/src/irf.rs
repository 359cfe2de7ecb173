//! Impulse-response panels from the closed-form recursions, with every
//! log-linear identity reconstructed and verified.
//!
//! Panels store responses in percent (a shock size of 0.01 enters as 1.0),
//! matching the reporting convention of the charts. All identities are
//! linear or jointly quadratic, so they hold in percent units unchanged.

use thiserror::Error;

use crate::coeffs::{derive, DeriveError, DerivedCoefficients};
use crate::params::Params;
use crate::saddle::{solve, SolveError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockKind {
    Monetary,
    Technology,
}

impl ShockKind {
    /// Header label of the shock column: the monetary path is `m`, the
    /// technology path is `a`.
    pub fn column_label(&self) -> &'static str {
        match self {
            ShockKind::Monetary => "m",
            ShockKind::Technology => "a",
        }
    }

    pub fn persistence(&self, params: &Params) -> f64 {
        match self {
            ShockKind::Monetary => params.rho_m,
            ShockKind::Technology => params.rho_a,
        }
    }
}

/// A one-time impulse: `size` is in levels (0.01 for a 1% shock).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSpec {
    pub kind: ShockKind,
    pub size: f64,
    pub horizon: usize,
}

impl ShockSpec {
    pub fn new(kind: ShockKind, size: f64, horizon: usize) -> Result<Self, IrfError> {
        if horizon < 1 {
            return Err(IrfError::BadSpec("horizon must be >= 1".into()));
        }
        if !size.is_finite() || size == 0.0 {
            return Err(IrfError::BadSpec(format!(
                "shock size must be finite and nonzero, got {size}"
            )));
        }
        Ok(ShockSpec {
            kind,
            size,
            horizon,
        })
    }
}

// ============================================================================
// Panel
// ============================================================================

/// Panel columns, in the fixed serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(usize)]
pub enum Column {
    Shock = 0,
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
    YF,
    RF,
}

pub const COLUMNS: [Column; 24] = [
    Column::Shock,
    Column::Y,
    Column::X,
    Column::PiP,
    Column::PiW,
    Column::R,
    Column::W,
    Column::D,
    Column::MuP,
    Column::MuW,
    Column::C,
    Column::N,
    Column::CH,
    Column::NH,
    Column::WH,
    Column::PiH,
    Column::MuH,
    Column::CS,
    Column::NS,
    Column::WS,
    Column::PiS,
    Column::MuS,
    Column::YF,
    Column::RF,
];

impl Column {
    pub fn name(&self) -> &'static str {
        match self {
            Column::Shock => "shock",
            Column::Y => "y",
            Column::X => "x",
            Column::PiP => "pi_p",
            Column::PiW => "pi_w",
            Column::R => "r",
            Column::W => "w",
            Column::D => "d",
            Column::MuP => "mu_p",
            Column::MuW => "mu_w",
            Column::C => "c",
            Column::N => "n",
            Column::CH => "c_h",
            Column::NH => "n_h",
            Column::WH => "w_h",
            Column::PiH => "pi_h",
            Column::MuH => "mu_h",
            Column::CS => "c_s",
            Column::NS => "n_s",
            Column::WS => "w_s",
            Column::PiS => "pi_s",
            Column::MuS => "mu_s",
            Column::YF => "y_f",
            Column::RF => "r_f",
        }
    }
}

/// Time-indexed responses of every endogenous variable to one shock.
#[derive(Debug, Clone, PartialEq)]
pub struct IrfPanel {
    pub shock_kind: ShockKind,
    data: Vec<Vec<f64>>,
}

impl IrfPanel {
    pub fn zeros(shock_kind: ShockKind, horizon: usize) -> Self {
        IrfPanel {
            shock_kind,
            data: vec![vec![0.0; horizon]; COLUMNS.len()],
        }
    }

    pub fn horizon(&self) -> usize {
        self.data[0].len()
    }

    pub fn col(&self, c: Column) -> &[f64] {
        &self.data[c as usize]
    }

    pub fn col_mut(&mut self, c: Column) -> &mut [f64] {
        &mut self.data[c as usize]
    }

    pub fn get(&self, c: Column, t: usize) -> f64 {
        self.data[c as usize][t]
    }

    pub fn set(&mut self, c: Column, t: usize, v: f64) {
        self.data[c as usize][t] = v;
    }

    /// Column header for serialization: the shock column carries the shock's
    /// own label so a file identifies its shock kind.
    pub fn header(&self, c: Column) -> &'static str {
        match c {
            Column::Shock => self.shock_kind.column_label(),
            other => other.name(),
        }
    }

    /// Largest absolute difference across all columns and periods.
    pub fn max_abs_diff(&self, other: &IrfPanel) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.data.iter().zip(&other.data) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        worst
    }

    pub fn scale(&mut self, factor: f64) {
        for col in &mut self.data {
            for v in col {
                *v *= factor;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IrfError {
    #[error("bad shock spec: {0}")]
    BadSpec(String),
    #[error("no determinate saddle path (xi1 = {xi1}, xi2 = {xi2})")]
    NotDeterminate { xi1: f64, xi2: f64 },
    #[error("root coincidence: |xi2 - rho_a| < 1e-12, technology multiplier undefined")]
    TechRootCoincidence,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Derive(#[from] DeriveError),
    #[error("identity `{equation}` violated at t = {t}: residual {residual:e}")]
    IdentityViolation {
        equation: &'static str,
        t: usize,
        residual: f64,
    },
}

// ============================================================================
// Closed-form IRFs
// ============================================================================

/// Monetary-shock IRF from the saddle-path recursion
/// `pi_t = xi1 pi_{t-1} + Omega_p m_t`, `x_t` from the Phillips curve, and
/// everything else reconstructed from the log-linear identities.
pub fn irf_monetary(params: &Params, spec: &ShockSpec) -> Result<IrfPanel, IrfError> {
    debug_assert!(matches!(spec.kind, ShockKind::Monetary));
    let coeffs = derive(params)?;
    let sol = solve(&coeffs, params)?;
    if !sol.determinate {
        return Err(IrfError::NotDeterminate {
            xi1: sol.xi1,
            xi2: sol.xi2,
        });
    }

    let h = spec.horizon;
    let mut panel = IrfPanel::zeros(ShockKind::Monetary, h);
    let mut e_pi_next = Vec::with_capacity(h);

    let mut m = spec.size * 100.0;
    let mut pi_lag = 0.0;
    for t in 0..h {
        let pi = sol.xi1 * pi_lag + sol.omega_p * m;
        // x_t = ((xi1*kappa1 - 1)/kappa2) pi_{t-1} + Omega_x m_t, in ratio form
        let x = (sol.xi1 * coeffs.k1_over_k2 - coeffs.inv_kappa2) * pi_lag + sol.omega_x * m;
        panel.set(Column::Shock, t, m);
        panel.set(Column::PiP, t, pi);
        panel.set(Column::X, t, x);
        panel.set(Column::Y, t, x); // natural output does not move
                                    // expectation from the law of motion, not from the realized path
        e_pi_next.push(sol.xi1 * pi + sol.omega_p * params.rho_m * m);
        pi_lag = pi;
        m *= params.rho_m;
    }

    reconstruct(&mut panel, params, &coeffs, &e_pi_next)?;
    Ok(panel)
}

/// Technology-shock IRF. The inflation recursion carries a two-term forcing
/// `A a_t + B a_{t-1}`: the lagged wage state enters through `delta a_t` in
/// the Phillips curve, so the forcing is not a pure AR(1).
pub fn irf_technology(params: &Params, spec: &ShockSpec) -> Result<IrfPanel, IrfError> {
    debug_assert!(matches!(spec.kind, ShockKind::Technology));
    let coeffs = derive(params)?;
    let sol = solve(&coeffs, params)?;
    if !sol.determinate {
        return Err(IrfError::NotDeterminate {
            xi1: sol.xi1,
            xi2: sol.xi2,
        });
    }
    if (sol.xi2 - params.rho_a).abs() < 1e-12 {
        return Err(IrfError::TechRootCoincidence);
    }

    let (gamma, varphi) = (params.gamma, params.varphi);
    let gv = gamma + varphi;
    let nat = (1.0 + varphi) / gv; // natural-output loading on a_t
    let r_f_coef = gamma * nat * (params.rho_a - 1.0);

    // forcing r~f_t = r_f_t + (gamma/kappa2)(psi_p/eta_p)(E da' - da), with
    // (gamma/kappa2)(psi_p/eta_p) = gamma*rigid_w/(gamma+varphi) staying
    // finite in every flexible limit
    let kb = gamma * coeffs.rigid_w / gv;
    let ka = r_f_coef + kb * (params.rho_a - 2.0);
    let coef_a = (ka + kb / sol.xi2) / (coeffs.xi_a * (sol.xi2 - params.rho_a));
    let coef_a_lag = kb / (coeffs.xi_a * sol.xi2);
    let da_term = coeffs.rigid_w / gv; // (psi_p/eta_p)/kappa2

    let h = spec.horizon;
    let mut panel = IrfPanel::zeros(ShockKind::Technology, h);
    let mut e_pi_next = Vec::with_capacity(h);

    let mut a = spec.size * 100.0;
    let mut a_lag = 0.0;
    let mut pi_lag = 0.0;
    for t in 0..h {
        let pi = sol.xi1 * pi_lag + coef_a * a + coef_a_lag * a_lag;
        // x_t from the Phillips curve: (kappa1 pi_t - pi_{t-1} + fp*da_t)/kappa2
        let x = coeffs.k1_over_k2 * pi - coeffs.inv_kappa2 * pi_lag + da_term * (a - a_lag);
        let y_f = nat * a;
        panel.set(Column::Shock, t, a);
        panel.set(Column::PiP, t, pi);
        panel.set(Column::X, t, x);
        panel.set(Column::Y, t, x + y_f);
        panel.set(Column::YF, t, y_f);
        panel.set(Column::RF, t, r_f_coef * a);
        e_pi_next.push(sol.xi1 * pi + (coef_a * params.rho_a + coef_a_lag) * a);
        pi_lag = pi;
        a_lag = a;
        a *= params.rho_a;
    }

    reconstruct(&mut panel, params, &coeffs, &e_pi_next)?;
    Ok(panel)
}

/// Dispatch on the shock kind.
pub fn irf(params: &Params, spec: &ShockSpec) -> Result<IrfPanel, IrfError> {
    match spec.kind {
        ShockKind::Monetary => irf_monetary(params, spec),
        ShockKind::Technology => irf_technology(params, spec),
    }
}

// ============================================================================
// Reconstruction and the identity suite
// ============================================================================

/// Fills every remaining series from `pi_p`, `x`, and the shock path, then
/// verifies the full identity suite. `expected_pi_next[t]` is the model's
/// expectation of `pi_p` at `t+1`, needed by the policy-rate identity.
#[allow(clippy::needless_range_loop)] // t indexes many panel columns at once
pub fn reconstruct(
    panel: &mut IrfPanel,
    params: &Params,
    coeffs: &DerivedCoefficients,
    expected_pi_next: &[f64],
) -> Result<(), IrfError> {
    let h = panel.horizon();
    let (gamma, varphi, lam) = (params.gamma, params.varphi, params.lambda_h);
    let rp = coeffs.rigid_p;
    let rw = coeffs.rigid_w;
    let mirror = lam / (1.0 - lam);

    for t in 0..h {
        let pi = panel.get(Column::PiP, t);
        let pi_lag = if t == 0 {
            0.0
        } else {
            panel.get(Column::PiP, t - 1)
        };
        let (a, m) = match panel.shock_kind {
            ShockKind::Monetary => (0.0, panel.get(Column::Shock, t)),
            ShockKind::Technology => (panel.get(Column::Shock, t), 0.0),
        };
        let a_lag = match (panel.shock_kind, t) {
            (ShockKind::Technology, t) if t > 0 => panel.get(Column::Shock, t - 1),
            _ => 0.0,
        };

        let y = panel.get(Column::Y, t);
        let c = y;
        let n = y - a;
        let d = -rp * pi;
        let w = a + rp * pi;
        let w_lag = a_lag + rp * pi_lag;
        let pi_w = (1.0 + rp) * pi - rp * pi_lag + (a - a_lag);
        let mu_w = -rw * pi_w;

        let c_h = c - coeffs.delta_c * d;
        let n_h = n + coeffs.delta_n * d;
        let w_h = w - coeffs.delta_w * d;
        let c_s = c + mirror * coeffs.delta_c * d;
        let n_s = n - mirror * coeffs.delta_n * d;
        let w_s = w + mirror * coeffs.delta_w * d;

        let pi_h = pi + w_h - w_lag;
        let mu_h = w_h - gamma * c_h - varphi * n_h;
        let pi_s = (pi_w - lam * pi_h) / (1.0 - lam);
        let mu_s = (mu_w - lam * mu_h) / (1.0 - lam);

        let r = params.phi_taylor * pi - expected_pi_next[t] - m;

        panel.set(Column::C, t, c);
        panel.set(Column::N, t, n);
        panel.set(Column::D, t, d);
        panel.set(Column::W, t, w);
        panel.set(Column::MuP, t, d); // price markup equals profits
        panel.set(Column::PiW, t, pi_w);
        panel.set(Column::MuW, t, mu_w);
        panel.set(Column::CH, t, c_h);
        panel.set(Column::NH, t, n_h);
        panel.set(Column::WH, t, w_h);
        panel.set(Column::PiH, t, pi_h);
        panel.set(Column::MuH, t, mu_h);
        panel.set(Column::CS, t, c_s);
        panel.set(Column::NS, t, n_s);
        panel.set(Column::WS, t, w_s);
        panel.set(Column::PiS, t, pi_s);
        panel.set(Column::MuS, t, mu_s);
        panel.set(Column::R, t, r);
    }

    verify_identities(panel, params, coeffs)
}

const IDENTITY_TOL: f64 = 1e-10;

/// Checks every log-linear model equation at every period of a panel.
///
/// Expectations are taken from the realized path: the panel is a
/// deterministic impulse response, so `E_t z_{t+1}` and the realized `z_{t+1}`
/// coincide. A violation signals an implementation bug, not a user error.
pub fn verify_identities(
    panel: &IrfPanel,
    params: &Params,
    coeffs: &DerivedCoefficients,
) -> Result<(), IrfError> {
    let h = panel.horizon();
    let (gamma, varphi, lam, phi) = (
        params.gamma,
        params.varphi,
        params.lambda_h,
        params.phi_taylor,
    );
    let rp = coeffs.rigid_p;
    let rw = coeffs.rigid_w;
    let nat = (1.0 + varphi) / (gamma + varphi);
    let g = |c: Column, t: usize| panel.get(c, t);

    let check = |name: &'static str, t: usize, residual: f64| {
        if residual.abs() > IDENTITY_TOL {
            Err(IrfError::IdentityViolation {
                equation: name,
                t,
                residual,
            })
        } else {
            Ok(())
        }
    };

    for t in 0..h {
        let (a, m) = match panel.shock_kind {
            ShockKind::Monetary => (0.0, g(Column::Shock, t)),
            ShockKind::Technology => (g(Column::Shock, t), 0.0),
        };
        let w_lag = if t == 0 { 0.0 } else { g(Column::W, t - 1) };
        let pi = g(Column::PiP, t);

        check("production", t, g(Column::Y, t) - a - g(Column::N, t))?;
        check("resource", t, g(Column::Y, t) - g(Column::C, t))?;
        check("price_markup", t, g(Column::MuP, t) - (a - g(Column::W, t)))?;
        check("price_phillips", t, rp * pi + g(Column::MuP, t))?;
        check(
            "wage_inflation",
            t,
            g(Column::PiW, t) - (g(Column::W, t) - w_lag + pi),
        )?;
        check(
            "wage_markup",
            t,
            g(Column::MuW, t)
                - (g(Column::W, t) - gamma * g(Column::C, t) - varphi * g(Column::N, t)),
        )?;
        check(
            "wage_phillips",
            t,
            rw * g(Column::PiW, t) + g(Column::MuW, t),
        )?;
        check("profits", t, g(Column::D, t) - (a - g(Column::W, t)))?;
        check("profits_inflation_link", t, g(Column::D, t) + rp * pi)?;
        check(
            "budget_h",
            t,
            g(Column::CH, t) - g(Column::WH, t) - g(Column::NH, t),
        )?;
        // labor demand divided by psi_w so the competitive limit reads w_h = w
        check(
            "labor_demand_h",
            t,
            g(Column::WH, t) - g(Column::W, t)
                + (g(Column::NH, t) - g(Column::N, t)) / params.psi_w,
        )?;
        check(
            "aggregate_consumption",
            t,
            g(Column::C, t) - lam * g(Column::CH, t) - (1.0 - lam) * g(Column::CS, t),
        )?;
        check(
            "aggregate_labor",
            t,
            g(Column::N, t) - lam * g(Column::NH, t) - (1.0 - lam) * g(Column::NS, t),
        )?;
        check(
            "aggregate_wage",
            t,
            g(Column::W, t) - lam * g(Column::WH, t) - (1.0 - lam) * g(Column::WS, t),
        )?;
        check(
            "aggregate_wage_markup",
            t,
            g(Column::MuW, t) - lam * g(Column::MuH, t) - (1.0 - lam) * g(Column::MuS, t),
        )?;
        check(
            "aggregate_wage_inflation",
            t,
            g(Column::PiW, t) - lam * g(Column::PiH, t) - (1.0 - lam) * g(Column::PiS, t),
        )?;
        check(
            "wage_inflation_h",
            t,
            g(Column::PiH, t) - (pi + g(Column::WH, t) - w_lag),
        )?;
        check(
            "wage_markup_h",
            t,
            g(Column::MuH, t)
                - (g(Column::WH, t) - gamma * g(Column::CH, t) - varphi * g(Column::NH, t)),
        )?;
        check(
            "wage_phillips_h",
            t,
            rw * g(Column::PiH, t) + g(Column::MuH, t),
        )?;
        // implied S-side structure
        check(
            "wage_inflation_s",
            t,
            g(Column::PiS, t) - (pi + g(Column::WS, t) - w_lag),
        )?;
        check(
            "wage_markup_s",
            t,
            g(Column::MuS, t)
                - (g(Column::WS, t) - gamma * g(Column::CS, t) - varphi * g(Column::NS, t)),
        )?;
        check(
            "wage_phillips_s",
            t,
            rw * g(Column::PiS, t) + g(Column::MuS, t),
        )?;
        check(
            "output_gap",
            t,
            g(Column::X, t) - (g(Column::Y, t) - nat * a),
        )?;

        if t + 1 < h {
            check(
                "euler_s",
                t,
                g(Column::R, t) - gamma * (g(Column::CS, t + 1) - g(Column::CS, t)),
            )?;
            check(
                "taylor_rule",
                t,
                g(Column::R, t) - (phi * pi - g(Column::PiP, t + 1) - m),
            )?;
        }
    }
    Ok(())
}
