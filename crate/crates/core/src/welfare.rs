//! Second-order welfare loss with the heterogeneity-adjusted inflation
//! penalty, and the optimal targeting rules under discretion and commitment.

use thiserror::Error;

use crate::coeffs::DerivedCoefficients;
use crate::irf::{Column, IrfPanel, ShockKind};
use crate::params::Params;
use crate::re::{
    build_system_with_policy, solve_re, PolicyClosure, PolicyFunction, ReError, Variant,
};

/// Weights of the period loss `gap*x^2 + wage*(pi_w)^2 + price*(pi_p)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareWeights {
    /// `gamma + varphi`.
    pub gap_weight: f64,
    /// `eta_w`.
    pub wage_infl_weight: f64,
    /// `eta_p_tilde >= eta_p`, strict whenever hand-to-mouth households exist.
    pub price_infl_weight: f64,
    /// Heterogeneity surcharge `eta_p_tilde - eta_p`, reported separately.
    pub price_infl_surcharge: f64,
}

pub fn welfare_weights(coeffs: &DerivedCoefficients, params: &Params) -> WelfareWeights {
    WelfareWeights {
        gap_weight: params.gamma + params.varphi,
        wage_infl_weight: params.eta_w,
        price_infl_weight: coeffs.eta_p_tilde,
        price_infl_surcharge: coeffs.eta_p_tilde - params.eta_p,
    }
}

/// Discounted loss of a panel, with its additive decomposition. Values are
/// comparable across policies only; terms independent of policy are dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossValue {
    pub total: f64,
    pub gap_term: f64,
    pub wage_term: f64,
    pub price_term: f64,
    /// The part of `price_term` attributable to heterogeneity,
    /// `(eta_p_tilde - eta_p) * sum beta^t pi_p^2`.
    pub surcharge: f64,
}

/// Discounted sum of the period losses over the panel horizon. Responses
/// decay geometrically, so a couple hundred periods bound the truncation
/// error far below reporting precision.
pub fn loss(panel: &IrfPanel, weights: &WelfareWeights, beta: f64) -> LossValue {
    let mut gap = 0.0;
    let mut wage = 0.0;
    let mut price = 0.0;
    let mut surcharge = 0.0;
    let mut disc = 1.0;
    for t in 0..panel.horizon() {
        let x = panel.get(Column::X, t);
        let pw = panel.get(Column::PiW, t);
        let pp = panel.get(Column::PiP, t);
        gap += disc * weights.gap_weight * x * x;
        wage += disc * weights.wage_infl_weight * pw * pw;
        price += disc * weights.price_infl_weight * pp * pp;
        surcharge += disc * weights.price_infl_surcharge * pp * pp;
        disc *= beta;
    }
    LossValue {
        total: gap + wage + price,
        gap_term: gap,
        wage_term: wage,
        price_term: price,
        surcharge,
    }
}

// ============================================================================
// Targeting rules
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Discretion,
    Commitment,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Discretion => "discretion",
            Regime::Commitment => "commitment",
        }
    }
}

/// Optimal first-order condition
/// `x_t = coef_pi * pi_t + coef_pi_lag * pi_{t-1} + coef_da * delta a_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetingRule {
    pub regime: Regime,
    pub coef_pi: f64,
    pub coef_pi_lag: f64,
    pub coef_da: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WelfareError {
    #[error("rule undefined: requires positive finite eta_p, eta_w, psi_p, psi_w (the trade-off degenerates at {which} = {value})")]
    RuleUndefined { which: &'static str, value: f64 },
}

/// Expands the optimal-policy bracket into rule coefficients. Commitment at
/// `beta = 0` reproduces discretion coefficient for coefficient.
pub fn targeting_rule(
    params: &Params,
    coeffs: &DerivedCoefficients,
    regime: Regime,
) -> Result<TargetingRule, WelfareError> {
    for (which, value) in [
        ("eta_p", params.eta_p),
        ("eta_w", params.eta_w),
        ("psi_p", params.psi_p),
        ("psi_w", params.psi_w),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(WelfareError::RuleUndefined { which, value });
        }
    }
    let (eta_p, psi_p, eta_w, psi_w) = (params.eta_p, params.psi_p, params.eta_w, params.psi_w);
    let fp = psi_p / eta_p;
    let g = 1.0 - fp;
    // discretion is the beta = 0 member of the commitment family
    let beta = match regime {
        Regime::Discretion => 0.0,
        Regime::Commitment => params.beta,
    };
    let h = 1.0 + (beta - 1.0) * fp;
    let denom = (1.0 - beta) * eta_p * eta_w + eta_w * psi_p + eta_p * psi_w;
    let front = psi_p * psi_w / denom;
    Ok(TargetingRule {
        regime,
        coef_pi: -front * (coeffs.eta_p_tilde + eta_w * h * g),
        coef_pi_lag: -front * eta_w * h * fp,
        coef_da: -front * eta_w * h,
    })
}

/// Dynamics under the targeting rule: the rule replaces the Taylor-rule row
/// in the stacked system, and determinacy is checked rather than assumed.
pub fn rule_policy(
    params: &Params,
    rule: &TargetingRule,
    shock: ShockKind,
) -> Result<PolicyFunction, ReError> {
    let system = build_system_with_policy(
        params,
        Variant::Simple,
        shock,
        PolicyClosure::TargetingRule {
            coef_pi: rule.coef_pi,
            coef_pi_lag: rule.coef_pi_lag,
            coef_da: rule.coef_da,
        },
    )?;
    solve_re(&system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::derive;
    use crate::irf::{irf_monetary, ShockSpec};
    use crate::re::irf_from_policy;

    fn bench() -> (Params, DerivedCoefficients) {
        let p = Params::benchmark();
        let c = derive(&p).unwrap();
        (p, c)
    }

    #[test]
    fn benchmark_weights() {
        let (p, c) = bench();
        let w = welfare_weights(&c, &p);
        assert_eq!(w.gap_weight, 4.0);
        assert_eq!(w.wage_infl_weight, 5.0);
        assert!((w.price_infl_weight - 5.3175).abs() < 1e-12);
        assert!((w.price_infl_surcharge - 0.3175).abs() < 1e-12);
    }

    #[test]
    fn rank_weights_have_no_surcharge() {
        let p = Params {
            lambda_h: 0.0,
            ..Params::benchmark()
        };
        let c = derive(&p).unwrap();
        let w = welfare_weights(&c, &p);
        assert_eq!(w.price_infl_weight, p.eta_p);
        assert_eq!(w.price_infl_surcharge, 0.0);
    }

    #[test]
    fn segmented_case_penalty_formula() {
        // psi_w = 1: eta_p_tilde = eta_p + lam/(1-lam) (eta_p/psi_p)^2 gamma
        // (1 + (varphi+eta_w) gamma / (1+eta_w+varphi)^2)
        let p = Params {
            psi_w: 1.0,
            ..Params::benchmark()
        };
        let c = derive(&p).unwrap();
        let rp = p.eta_p / p.psi_p;
        let expect = p.eta_p
            + p.lambda_h / (1.0 - p.lambda_h)
                * rp
                * rp
                * p.gamma
                * (1.0
                    + (p.varphi + p.eta_w) * p.gamma
                        / ((1.0 + p.eta_w + p.varphi) * (1.0 + p.eta_w + p.varphi)));
        assert!((c.eta_p_tilde - expect).abs() < 1e-12);
    }

    #[test]
    fn competitive_flexible_case_folds_into_gap_weight() {
        // eta_w = 0, psi_w -> inf: the surcharge equals
        // lam/(1-lam)*gamma*varphi*(gamma+varphi) x^2 once pi is substituted
        // out with the flexible-wage Phillips curve pi = fp*(gamma+varphi)*x.
        let p = Params {
            eta_w: 0.0,
            psi_w: f64::INFINITY,
            ..Params::benchmark()
        };
        let c = derive(&p).unwrap();
        let gv = p.gamma + p.varphi;
        let slope = (p.psi_p / p.eta_p) * gv;
        let folded_gap = (c.eta_p_tilde - p.eta_p) * slope * slope;
        let expect = gv * p.lambda_h / (1.0 - p.lambda_h) * p.gamma * p.varphi;
        assert!((folded_gap - expect).abs() < 1e-10);
    }

    #[test]
    fn loss_of_zero_panel_is_zero() {
        let (p, c) = bench();
        let w = welfare_weights(&c, &p);
        let panel = IrfPanel::zeros(ShockKind::Monetary, 10);
        let l = loss(&panel, &w, p.beta);
        assert_eq!(l.total, 0.0);
        assert_eq!(l.surcharge, 0.0);
    }

    #[test]
    fn loss_decomposition_sums_to_total() {
        let (p, c) = bench();
        let w = welfare_weights(&c, &p);
        let panel =
            irf_monetary(&p, &ShockSpec::new(ShockKind::Monetary, 0.01, 200).unwrap()).unwrap();
        let l = loss(&panel, &w, p.beta);
        assert!((l.gap_term + l.wage_term + l.price_term - l.total).abs() < 1e-12 * l.total.abs());
        assert!(l.surcharge > 0.0 && l.surcharge < l.price_term);
    }

    #[test]
    fn surcharge_matches_inequality_identity_term() {
        // per-period check: surcharge integrand equals the cross-household
        // dispersion expression
        let (p, c) = bench();
        let w = welfare_weights(&c, &p);
        let panel =
            irf_monetary(&p, &ShockSpec::new(ShockKind::Monetary, 0.01, 120).unwrap()).unwrap();
        let mut expect = 0.0;
        let mut disc = 1.0;
        for t in 0..panel.horizon() {
            let dc = panel.get(Column::CS, t) - panel.get(Column::CH, t);
            let dn = panel.get(Column::NS, t) - panel.get(Column::NH, t);
            let dw = panel.get(Column::WS, t) - panel.get(Column::WH, t);
            expect += disc
                * p.lambda_h
                * (1.0 - p.lambda_h)
                * (p.gamma * dc * dc + p.varphi * dn * dn + p.eta_w * dw * dw);
            disc *= p.beta;
        }
        let l = loss(&panel, &w, p.beta);
        assert!((l.surcharge - expect).abs() < 1e-10 * expect.max(1.0));
    }

    #[test]
    fn benchmark_discretion_rule_collapses() {
        // psi_p = eta_p makes the (1 - psi_p/eta_p) factors vanish
        let (p, c) = bench();
        let rule = targeting_rule(&p, &c, Regime::Discretion).unwrap();
        let front = 25.0 / 75.0;
        assert!((rule.coef_pi - (-front * c.eta_p_tilde)).abs() < 1e-14);
        assert_eq!(rule.coef_pi_lag, 0.0);
        assert_eq!(rule.coef_da, 0.0);
    }

    #[test]
    fn commitment_at_beta_zero_equals_discretion_exactly() {
        let (p, c) = bench();
        let p0 = Params { beta: 0.0, ..p };
        let disc = targeting_rule(&p0, &c, Regime::Discretion).unwrap();
        let comm = targeting_rule(&p0, &c, Regime::Commitment).unwrap();
        assert_eq!(disc.coef_pi, comm.coef_pi);
        assert_eq!(disc.coef_pi_lag, comm.coef_pi_lag);
        assert_eq!(disc.coef_da, comm.coef_da);
    }

    #[test]
    fn heterogeneity_strengthens_the_inflation_response() {
        let p1 = Params::benchmark();
        let p2 = Params {
            lambda_h: 0.4,
            ..p1
        };
        let r1 = targeting_rule(&p1, &derive(&p1).unwrap(), Regime::Discretion).unwrap();
        let r2 = targeting_rule(&p2, &derive(&p2).unwrap(), Regime::Discretion).unwrap();
        assert!(r2.coef_pi.abs() > r1.coef_pi.abs());
    }

    #[test]
    fn rules_undefined_without_both_rigidities() {
        let (p, c) = bench();
        for bad in [
            Params { eta_w: 0.0, ..p },
            Params { eta_p: 0.0, ..p },
            Params {
                psi_w: f64::INFINITY,
                ..p
            },
        ] {
            assert!(matches!(
                targeting_rule(&bad, &c, Regime::Discretion),
                Err(WelfareError::RuleUndefined { .. })
            ));
        }
    }

    #[test]
    fn rule_dynamics_are_determinate_and_satisfy_the_foc() {
        let (p, c) = bench();
        let spec = ShockSpec::new(ShockKind::Technology, 0.01, 200).unwrap();
        let taylor = crate::irf::irf_technology(&p, &spec).unwrap();
        for regime in [Regime::Discretion, Regime::Commitment] {
            let rule = targeting_rule(&p, &c, regime).unwrap();
            let policy = rule_policy(&p, &rule, ShockKind::Technology).unwrap();
            let panel = irf_from_policy(&policy, &spec, &p).unwrap();
            // the first-order condition holds at every period
            for t in 0..panel.horizon() {
                let pi = panel.get(Column::PiP, t);
                let pi_lag = if t == 0 {
                    0.0
                } else {
                    panel.get(Column::PiP, t - 1)
                };
                let a = panel.get(crate::irf::Column::Shock, t);
                let a_lag = if t == 0 {
                    0.0
                } else {
                    panel.get(crate::irf::Column::Shock, t - 1)
                };
                let x = rule.coef_pi * pi + rule.coef_pi_lag * pi_lag + rule.coef_da * (a - a_lag);
                assert!((panel.get(Column::X, t) - x).abs() < 1e-9);
            }
            // period-by-period optimization stabilizes impact inflation
            // relative to the Taylor rule; commitment trades some impact
            // stabilization for promises about the path
            if regime == Regime::Discretion {
                assert!(
                    panel.get(Column::PiP, 0).abs() < taylor.get(Column::PiP, 0).abs(),
                    "discretion does not dampen impact inflation"
                );
            }
        }
    }
}
