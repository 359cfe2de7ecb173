//! Structural parameters, validation, and the key=value config format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// The eleven structural parameters of the model.
///
/// `varphi` (inverse Frisch elasticity) and `phi_taylor` (policy response
/// coefficient) are distinct fields on purpose: the source notation overloads
/// the same symbol for both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Discount factor, in (0,1).
    pub beta: f64,
    /// Relative risk aversion (inverse EIS), > 0.
    pub gamma: f64,
    /// Inverse Frisch elasticity of labor supply, > 0.
    pub varphi: f64,
    /// Price adjustment cost, >= 0 (0 means fully flexible prices).
    pub eta_p: f64,
    /// Elasticity of substitution between intermediate goods, >= 1 (may be +inf).
    pub psi_p: f64,
    /// Wage adjustment cost, >= 0 (0 means fully flexible wages).
    pub eta_w: f64,
    /// Elasticity of substitution between labor types, >= 1 (may be +inf).
    pub psi_w: f64,
    /// Share of hand-to-mouth households, in [0,1).
    pub lambda_h: f64,
    /// Taylor rule response coefficient, > 1.
    pub phi_taylor: f64,
    /// Persistence of technology shocks, in (0,1).
    pub rho_a: f64,
    /// Persistence of monetary shocks, in (0,1).
    pub rho_m: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self::benchmark()
    }
}

impl Params {
    /// Benchmark calibration.
    pub fn benchmark() -> Self {
        Params {
            beta: 0.95,
            gamma: 2.0,
            varphi: 2.0,
            eta_p: 5.0,
            psi_p: 5.0,
            eta_w: 5.0,
            psi_w: 5.0,
            lambda_h: 0.2,
            phi_taylor: 3.0,
            rho_a: 0.95,
            rho_m: 0.85,
        }
    }

    /// Checks every range constraint. An empty `violations` list means valid.
    ///
    /// Non-fatal conditions (an effective IS slope `gamma_tilde <= 0`, which
    /// the model permits but which flips the aggregate-demand logic) are
    /// reported as warnings.
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // negations deliberately classify NaN as a violation
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let mut w = Vec::new();

        if !(self.beta > 0.0 && self.beta < 1.0) {
            v.push(format!("beta must be in (0,1), got {}", self.beta));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            v.push(format!("gamma must be finite and > 0, got {}", self.gamma));
        }
        if !(self.varphi > 0.0 && self.varphi.is_finite()) {
            v.push(format!(
                "varphi must be finite and > 0, got {}",
                self.varphi
            ));
        }
        if !(self.eta_p >= 0.0 && self.eta_p.is_finite()) {
            v.push(format!("eta_p must be finite and >= 0, got {}", self.eta_p));
        }
        if !(self.psi_p >= 1.0) {
            v.push(format!("psi_p must be >= 1, got {}", self.psi_p));
        }
        if !(self.eta_w >= 0.0 && self.eta_w.is_finite()) {
            v.push(format!("eta_w must be finite and >= 0, got {}", self.eta_w));
        }
        if !(self.psi_w >= 1.0) {
            v.push(format!("psi_w must be >= 1, got {}", self.psi_w));
        }
        if !(self.lambda_h >= 0.0 && self.lambda_h < 1.0) {
            v.push(format!(
                "lambda_h must be < 1 and >= 0, got {}",
                self.lambda_h
            ));
        }
        if !(self.phi_taylor > 1.0 && self.phi_taylor.is_finite()) {
            v.push(format!(
                "phi_taylor must be > 1 (Taylor principle), got {}",
                self.phi_taylor
            ));
        }
        if !(self.rho_a > 0.0 && self.rho_a < 1.0) {
            v.push(format!("rho_a must be in (0,1), got {}", self.rho_a));
        }
        if !(self.rho_m > 0.0 && self.rho_m < 1.0) {
            v.push(format!("rho_m must be in (0,1), got {}", self.rho_m));
        }

        if v.is_empty() {
            match crate::coeffs::derive(self) {
                Ok(c) => {
                    if c.gamma_tilde <= 0.0 {
                        w.push(format!(
                            "gamma_tilde = {} <= 0: inverted aggregate-demand region",
                            c.gamma_tilde
                        ));
                    }
                }
                Err(e) => w.push(e.to_string()),
            }
        }

        ValidationReport {
            violations: v,
            warnings: w,
        }
    }

    pub fn get(&self, name: ParameterName) -> f64 {
        match name {
            ParameterName::Beta => self.beta,
            ParameterName::Gamma => self.gamma,
            ParameterName::Varphi => self.varphi,
            ParameterName::EtaP => self.eta_p,
            ParameterName::PsiP => self.psi_p,
            ParameterName::EtaW => self.eta_w,
            ParameterName::PsiW => self.psi_w,
            ParameterName::LambdaH => self.lambda_h,
            ParameterName::PhiTaylor => self.phi_taylor,
            ParameterName::RhoA => self.rho_a,
            ParameterName::RhoM => self.rho_m,
        }
    }

    pub fn set(&mut self, name: ParameterName, value: f64) {
        match name {
            ParameterName::Beta => self.beta = value,
            ParameterName::Gamma => self.gamma = value,
            ParameterName::Varphi => self.varphi = value,
            ParameterName::EtaP => self.eta_p = value,
            ParameterName::PsiP => self.psi_p = value,
            ParameterName::EtaW => self.eta_w = value,
            ParameterName::PsiW => self.psi_w = value,
            ParameterName::LambdaH => self.lambda_h = value,
            ParameterName::PhiTaylor => self.phi_taylor = value,
            ParameterName::RhoA => self.rho_a = value,
            ParameterName::RhoM => self.rho_m = value,
        }
    }

    /// Returns a copy with one parameter replaced.
    pub fn with(&self, name: ParameterName, value: f64) -> Self {
        let mut p = *self;
        p.set(name, value);
        p
    }

    /// Parses the plain-text config format: one `key = value` pair per line,
    /// `#` starts a comment, unknown keys are errors. Keys match the field
    /// names. Missing keys keep the benchmark value.
    pub fn from_config_str(text: &str) -> Result<Self, ConfigError> {
        let mut p = Params::benchmark();
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let name =
                ParameterName::from_str(key.trim()).map_err(|_| ConfigError::UnknownKey {
                    line: i + 1,
                    key: key.trim().to_string(),
                })?;
            let value: f64 = value.trim().parse().map_err(|_| ConfigError::BadValue {
                line: i + 1,
                value: value.trim().to_string(),
            })?;
            p.set(name, value);
        }
        Ok(p)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::from_config_str(&text)
    }
}

/// Outcome of `Params::validate`: every violated range constraint, plus
/// non-fatal warnings.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Names of settable parameters, used by `--set`, sweeps, and config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterName {
    Beta,
    Gamma,
    Varphi,
    EtaP,
    PsiP,
    EtaW,
    PsiW,
    LambdaH,
    PhiTaylor,
    RhoA,
    RhoM,
}

impl ParameterName {
    pub const ALL: [ParameterName; 11] = [
        ParameterName::Beta,
        ParameterName::Gamma,
        ParameterName::Varphi,
        ParameterName::EtaP,
        ParameterName::PsiP,
        ParameterName::EtaW,
        ParameterName::PsiW,
        ParameterName::LambdaH,
        ParameterName::PhiTaylor,
        ParameterName::RhoA,
        ParameterName::RhoM,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ParameterName::Beta => "beta",
            ParameterName::Gamma => "gamma",
            ParameterName::Varphi => "varphi",
            ParameterName::EtaP => "eta_p",
            ParameterName::PsiP => "psi_p",
            ParameterName::EtaW => "eta_w",
            ParameterName::PsiW => "psi_w",
            ParameterName::LambdaH => "lambda_h",
            ParameterName::PhiTaylor => "phi_taylor",
            ParameterName::RhoA => "rho_a",
            ParameterName::RhoM => "rho_m",
        }
    }
}

impl fmt::Display for ParameterName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParameterName {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ParameterName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or(())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config i/o error: {0}")]
    Io(String),
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: cannot parse value `{value}`")]
    BadValue { line: usize, value: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_is_valid() {
        let report = Params::benchmark().validate();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(
            report.warnings.is_empty(),
            "warnings: {:?}",
            report.warnings
        );
    }

    #[test]
    fn lambda_one_is_rejected() {
        let p = Params {
            lambda_h: 1.0,
            ..Params::benchmark()
        };
        let report = p.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("lambda_h must be < 1")));
    }

    #[test]
    fn taylor_principle_is_enforced() {
        let p = Params {
            phi_taylor: 0.9,
            ..Params::benchmark()
        };
        let report = p.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("Taylor principle")));
    }

    #[test]
    fn nan_fails_validation() {
        let p = Params {
            gamma: f64::NAN,
            ..Params::benchmark()
        };
        assert!(!p.validate().is_valid());
    }

    #[test]
    fn infinite_psi_w_is_allowed() {
        let p = Params {
            psi_w: f64::INFINITY,
            ..Params::benchmark()
        };
        assert!(p.validate().is_valid());
    }

    #[test]
    fn config_round_trip_and_comments() {
        let text = "\
# a comment
beta = 0.9
eta_p = 10   # trailing comment
psi_w = inf
";
        let p = Params::from_config_str(text).unwrap();
        assert_eq!(p.beta, 0.9);
        assert_eq!(p.eta_p, 10.0);
        assert!(p.psi_w.is_infinite());
        assert_eq!(p.gamma, 2.0); // untouched benchmark default
    }

    #[test]
    fn config_rejects_unknown_key() {
        let err = Params::from_config_str("sigma = 2.0").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { .. }));
    }

    #[test]
    fn negative_is_slope_is_flagged_not_rejected() {
        // Strong heterogeneity with flexible wages pushes gamma_tilde below zero.
        let p = Params {
            lambda_h: 0.6,
            eta_w: 0.0,
            ..Params::benchmark()
        };
        let report = p.validate();
        assert!(report.is_valid());
        assert!(report.warnings.iter().any(|w| w.contains("gamma_tilde")));
    }
}
