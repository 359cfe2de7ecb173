//! Python bindings: structural parameters, derived coefficients, the
//! saddle-path solution, IRF panels (as dicts of column lists), welfare
//! weights, targeting rules, and parameter sweeps.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tank_core::irf::{IrfPanel, ShockKind, ShockSpec, COLUMNS};
use tank_core::re::Variant;
use tank_core::welfare::Regime;

/// Structural parameters; constructed at the benchmark calibration, fields
/// assignable from Python.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Params {
    #[pyo3(get, set)]
    beta: f64,
    #[pyo3(get, set)]
    gamma: f64,
    #[pyo3(get, set)]
    varphi: f64,
    #[pyo3(get, set)]
    eta_p: f64,
    #[pyo3(get, set)]
    psi_p: f64,
    #[pyo3(get, set)]
    eta_w: f64,
    #[pyo3(get, set)]
    psi_w: f64,
    #[pyo3(get, set)]
    lambda_h: f64,
    #[pyo3(get, set)]
    phi_taylor: f64,
    #[pyo3(get, set)]
    rho_a: f64,
    #[pyo3(get, set)]
    rho_m: f64,
}

impl Params {
    fn core(&self) -> tank_core::params::Params {
        tank_core::params::Params {
            beta: self.beta,
            gamma: self.gamma,
            varphi: self.varphi,
            eta_p: self.eta_p,
            psi_p: self.psi_p,
            eta_w: self.eta_w,
            psi_w: self.psi_w,
            lambda_h: self.lambda_h,
            phi_taylor: self.phi_taylor,
            rho_a: self.rho_a,
            rho_m: self.rho_m,
        }
    }

    fn core_valid(&self) -> PyResult<tank_core::params::Params> {
        let p = self.core();
        let report = p.validate();
        if !report.is_valid() {
            return Err(PyValueError::new_err(report.violations.join("; ")));
        }
        Ok(p)
    }
}

#[pymethods]
impl Params {
    #[new]
    fn new() -> Self {
        let p = tank_core::params::Params::benchmark();
        Params {
            beta: p.beta,
            gamma: p.gamma,
            varphi: p.varphi,
            eta_p: p.eta_p,
            psi_p: p.psi_p,
            eta_w: p.eta_w,
            psi_w: p.psi_w,
            lambda_h: p.lambda_h,
            phi_taylor: p.phi_taylor,
            rho_a: p.rho_a,
            rho_m: p.rho_m,
        }
    }

    /// Violated range constraints; an empty list means valid.
    fn validate(&self) -> Vec<String> {
        self.core().validate().violations
    }

    /// Non-fatal warnings (e.g. a non-positive effective IS slope).
    fn warnings(&self) -> Vec<String> {
        self.core().validate().warnings
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(beta={}, gamma={}, varphi={}, eta_p={}, psi_p={}, eta_w={}, psi_w={}, lambda_h={}, phi_taylor={}, rho_a={}, rho_m={})",
            self.beta, self.gamma, self.varphi, self.eta_p, self.psi_p, self.eta_w, self.psi_w,
            self.lambda_h, self.phi_taylor, self.rho_a, self.rho_m
        )
    }
}

#[pyclass]
struct DerivedCoefficients {
    #[pyo3(get)]
    kappa1: f64,
    #[pyo3(get)]
    kappa2: f64,
    #[pyo3(get)]
    delta_c: f64,
    #[pyo3(get)]
    delta_n: f64,
    #[pyo3(get)]
    delta_w: f64,
    #[pyo3(get)]
    delta_p: f64,
    #[pyo3(get)]
    gamma_tilde: f64,
    #[pyo3(get)]
    eta_p_tilde: f64,
    #[pyo3(get)]
    xi_a: f64,
    #[pyo3(get)]
    xi_b: f64,
    #[pyo3(get)]
    xi_c: f64,
}

#[pyclass]
struct SaddleSolution {
    #[pyo3(get)]
    xi1: f64,
    #[pyo3(get)]
    xi2: f64,
    #[pyo3(get)]
    omega_p: f64,
    #[pyo3(get)]
    omega_x: f64,
    #[pyo3(get)]
    omega_p_inf: f64,
    #[pyo3(get)]
    omega_x_inf: f64,
    #[pyo3(get)]
    determinate: bool,
    #[pyo3(get)]
    ad_condition: bool,
    #[pyo3(get)]
    prop1_condition: bool,
}

#[pyclass]
struct TargetingRule {
    #[pyo3(get)]
    regime: String,
    #[pyo3(get)]
    coef_pi: f64,
    #[pyo3(get)]
    coef_pi_lag: f64,
    #[pyo3(get)]
    coef_da: f64,
}

fn parse_shock(shock: &str) -> PyResult<ShockKind> {
    match shock {
        "monetary" => Ok(ShockKind::Monetary),
        "technology" => Ok(ShockKind::Technology),
        other => Err(PyValueError::new_err(format!(
            "shock must be 'monetary' or 'technology', got '{other}'"
        ))),
    }
}

fn parse_variant(variant: &str) -> PyResult<Variant> {
    match variant {
        "simple" => Ok(Variant::Simple),
        "general" => Ok(Variant::General),
        other => Err(PyValueError::new_err(format!(
            "variant must be 'simple' or 'general', got '{other}'"
        ))),
    }
}

fn panel_to_dict<'py>(py: Python<'py>, panel: &IrfPanel) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for c in COLUMNS {
        dict.set_item(panel.header(c), panel.col(c).to_vec())?;
    }
    Ok(dict)
}

/// Derived coefficients of the model.
#[pyfunction]
fn derive(params: &Params) -> PyResult<DerivedCoefficients> {
    let p = params.core_valid()?;
    let c = tank_core::coeffs::derive(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(DerivedCoefficients {
        kappa1: c.kappa1,
        kappa2: c.kappa2,
        delta_c: c.delta_c,
        delta_n: c.delta_n,
        delta_w: c.delta_w,
        delta_p: c.delta_p,
        gamma_tilde: c.gamma_tilde,
        eta_p_tilde: c.eta_p_tilde,
        xi_a: c.xi_a,
        xi_b: c.xi_b,
        xi_c: c.xi_c,
    })
}

/// Closed-form saddle-path solution.
#[pyfunction]
fn solve(params: &Params) -> PyResult<SaddleSolution> {
    let p = params.core_valid()?;
    let (_, s) =
        tank_core::saddle::solve_params(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(SaddleSolution {
        xi1: s.xi1,
        xi2: s.xi2,
        omega_p: s.omega_p,
        omega_x: s.omega_x,
        omega_p_inf: s.omega_p_inf,
        omega_x_inf: s.omega_x_inf,
        determinate: s.determinate,
        ad_condition: s.ad_condition,
        prop1_condition: s.prop1_condition,
    })
}

/// Impulse responses as a dict of column lists (values in percent).
/// `variant='simple'` uses the closed forms; `variant='general'` solves the
/// forward-looking system numerically.
#[pyfunction]
#[pyo3(signature = (params, shock="monetary", size=0.01, horizon=40, variant="simple"))]
fn irf<'py>(
    py: Python<'py>,
    params: &Params,
    shock: &str,
    size: f64,
    horizon: usize,
    variant: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.core_valid()?;
    let kind = parse_shock(shock)?;
    let spec =
        ShockSpec::new(kind, size, horizon).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let panel = match parse_variant(variant)? {
        Variant::Simple => {
            tank_core::irf::irf(&p, &spec).map_err(|e| PyRuntimeError::new_err(e.to_string()))?
        }
        Variant::General => {
            let system = tank_core::re::build_system(&p, Variant::General, kind)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            let policy = tank_core::re::solve_re(&system)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            tank_core::re::irf_from_policy(&policy, &spec, &p)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?
        }
    };
    panel_to_dict(py, &panel)
}

/// Welfare weights `(gap, wage_inflation, price_inflation, surcharge)`.
#[pyfunction]
fn welfare_weights(params: &Params) -> PyResult<(f64, f64, f64, f64)> {
    let p = params.core_valid()?;
    let c = tank_core::coeffs::derive(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let w = tank_core::welfare::welfare_weights(&c, &p);
    Ok((
        w.gap_weight,
        w.wage_infl_weight,
        w.price_infl_weight,
        w.price_infl_surcharge,
    ))
}

/// Optimal targeting rule under `regime` in {'discretion', 'commitment'}.
#[pyfunction]
fn targeting_rule(params: &Params, regime: &str) -> PyResult<TargetingRule> {
    let p = params.core_valid()?;
    let c = tank_core::coeffs::derive(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let reg = match regime {
        "discretion" => Regime::Discretion,
        "commitment" => Regime::Commitment,
        other => {
            return Err(PyValueError::new_err(format!(
                "regime must be 'discretion' or 'commitment', got '{other}'"
            )))
        }
    };
    let r = tank_core::welfare::targeting_rule(&p, &c, reg)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(TargetingRule {
        regime: r.regime.as_str().to_string(),
        coef_pi: r.coef_pi,
        coef_pi_lag: r.coef_pi_lag,
        coef_da: r.coef_da,
    })
}

/// Discounted loss under a policy regime in {'taylor', 'discretion',
/// 'commitment'}, returned as a dict with the decomposition.
#[pyfunction]
#[pyo3(signature = (params, regime="taylor", shock="technology", size=0.01, horizon=200))]
fn welfare_loss<'py>(
    py: Python<'py>,
    params: &Params,
    regime: &str,
    shock: &str,
    size: f64,
    horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.core_valid()?;
    let c = tank_core::coeffs::derive(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let weights = tank_core::welfare::welfare_weights(&c, &p);
    let kind = parse_shock(shock)?;
    let spec =
        ShockSpec::new(kind, size, horizon).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let panel = match regime {
        "taylor" => {
            tank_core::irf::irf(&p, &spec).map_err(|e| PyRuntimeError::new_err(e.to_string()))?
        }
        "discretion" | "commitment" => {
            let reg = if regime == "discretion" {
                Regime::Discretion
            } else {
                Regime::Commitment
            };
            let rule = tank_core::welfare::targeting_rule(&p, &c, reg)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            let policy = tank_core::welfare::rule_policy(&p, &rule, kind)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            tank_core::re::irf_from_policy(&policy, &spec, &p)
                .map_err(|e| PyRuntimeError::new_err(e.to_string()))?
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "regime must be 'taylor', 'discretion', or 'commitment', got '{other}'"
            )))
        }
    };
    let l = tank_core::welfare::loss(&panel, &weights, p.beta);
    let dict = PyDict::new(py);
    dict.set_item("total", l.total)?;
    dict.set_item("gap_term", l.gap_term)?;
    dict.set_item("wage_term", l.wage_term)?;
    dict.set_item("price_term", l.price_term)?;
    dict.set_item("surcharge", l.surcharge)?;
    Ok(dict)
}

/// Named analytical conditions with their numeric margins.
#[pyfunction]
fn check<'py>(py: Python<'py>, params: &Params) -> PyResult<Bound<'py, PyDict>> {
    let p = params.core_valid()?;
    let c = tank_core::coeffs::derive(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let dict = PyDict::new(py);
    dict.set_item("taylor_principle_margin", p.phi_taylor - 1.0)?;
    dict.set_item("ad_condition_margin", c.xi_a)?;
    dict.set_item("prop1_condition_margin", p.phi_taylor - 1.0 - c.inv_kappa2)?;
    dict.set_item("ad_curve_domain_margin", 1.0 - p.gamma * c.delta_p)?;
    dict.set_item("gamma_tilde", c.gamma_tilde)?;
    match tank_core::saddle::solve(&c, &p) {
        Ok(s) => {
            dict.set_item("determinate", s.determinate)?;
            dict.set_item("xi1", s.xi1)?;
            dict.set_item("xi2", s.xi2)?;
        }
        Err(e) => {
            dict.set_item("determinate", false)?;
            dict.set_item("solve_error", e.to_string())?;
        }
    }
    Ok(dict)
}

/// Sweep one parameter; returns a dict of column lists mirroring the CSV.
#[pyfunction]
fn sweep<'py>(
    py: Python<'py>,
    params: &Params,
    param: &str,
    values: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    use std::str::FromStr;
    let p = params.core_valid()?;
    let name = tank_core::params::ParameterName::from_str(param)
        .map_err(|_| PyValueError::new_err(format!("unknown parameter '{param}'")))?;
    let table = tank_core::saddle::comparative_statics(&p, name, &values)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); 7];
    let mut errors: Vec<Option<String>> = Vec::new();
    for row in &table.rows {
        cols[0].push(row.value);
        match &row.solution {
            Ok(s) => {
                for (i, v) in [
                    s.xi1,
                    s.xi2,
                    s.omega_p,
                    s.omega_x,
                    s.omega_p_inf,
                    s.omega_x_inf,
                ]
                .into_iter()
                .enumerate()
                {
                    cols[i + 1].push(v);
                }
                errors.push(None);
            }
            Err(e) => {
                for col in cols.iter_mut().skip(1) {
                    col.push(f64::NAN);
                }
                errors.push(Some(e.to_string()));
            }
        }
    }
    let dict = PyDict::new(py);
    for (i, key) in [
        param,
        "xi1",
        "xi2",
        "omega_p",
        "omega_x",
        "omega_p_inf",
        "omega_x_inf",
    ]
    .iter()
    .enumerate()
    {
        dict.set_item(*key, cols[i].clone())?;
    }
    dict.set_item("error", errors)?;
    Ok(dict)
}

#[pymodule]
fn tank_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<DerivedCoefficients>()?;
    m.add_class::<SaddleSolution>()?;
    m.add_class::<TargetingRule>()?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(irf, m)?)?;
    m.add_function(wrap_pyfunction!(welfare_weights, m)?)?;
    m.add_function(wrap_pyfunction!(targeting_rule, m)?)?;
    m.add_function(wrap_pyfunction!(welfare_loss, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
