//! Composite coefficients of the log-linear model.
//!
//! Flexible limits (`eta_j = 0` or `psi_j -> inf`) make `kappa_1` and
//! `kappa_2` infinite, so everything downstream is expressed through the
//! flexibility ratios `psi_j/eta_j`, the rigidity ratios `eta_j/psi_j`, and
//! the finite ratio `kappa_1/kappa_2`. Division by a raw `kappa` is avoided
//! except where the quantity is genuinely zero in the limit.

use thiserror::Error;

use crate::params::Params;

/// A flexibility ratio `psi_j / eta_j`, extended with +infinity for the
/// fully flexible case `eta_j = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlexRatio(f64);

impl FlexRatio {
    pub fn new(psi: f64, eta: f64) -> Self {
        if eta == 0.0 {
            FlexRatio(f64::INFINITY)
        } else {
            FlexRatio(psi / eta)
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// The reciprocal rigidity `eta_j / psi_j`; exactly 0 in the flexible limit.
    pub fn rigidity(&self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

/// Every composite symbol used by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    /// `1 + psi_p/eta_p + psi_w/eta_w` (+inf when either market is flexible).
    pub kappa1: f64,
    /// `(psi_p/eta_p)(psi_w/eta_w)(gamma + varphi)` (+inf likewise).
    pub kappa2: f64,
    /// `kappa1/kappa2`, always finite; 0 only when both markets are flexible.
    pub k1_over_k2: f64,
    /// `1/kappa2`, always finite; 0 when either market is flexible.
    pub inv_kappa2: f64,
    pub flex_p: FlexRatio,
    pub flex_w: FlexRatio,
    /// `eta_p/psi_p`.
    pub rigid_p: f64,
    /// `eta_w/psi_w`.
    pub rigid_w: f64,
    /// Profit sensitivity of hand-to-mouth consumption, in [0,1].
    pub delta_c: f64,
    /// Profit sensitivity of hand-to-mouth hours, in [0,1].
    pub delta_n: f64,
    /// Profit sensitivity of the hand-to-mouth wage, in [0,1].
    pub delta_w: f64,
    /// IS-curve heterogeneity term `lambda/(1-lambda) * (eta_p/psi_p) * delta_c`.
    pub delta_p: f64,
    /// Effective IS slope `gamma * (1 - delta_p * kappa2/kappa1)`.
    pub gamma_tilde: f64,
    /// Welfare-adjusted inflation penalty.
    pub eta_p_tilde: f64,
    /// Characteristic-polynomial coefficients of `f(xi) = xi_a xi^2 - xi_b xi + xi_c`.
    pub xi_a: f64,
    pub xi_b: f64,
    pub xi_c: f64,
}

impl DerivedCoefficients {
    /// `kappa2/kappa1` (the Phillips-curve slope); +inf when both markets are flexible.
    pub fn k2_over_k1(&self) -> f64 {
        1.0 / self.k1_over_k2
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeriveError {
    #[error("fully flexible economy (eta_p = 0 and eta_w = 0 with lambda_h > 0): all nominal dynamics are trivial")]
    FullyFlexible,
    #[error("delta derivatives require a finite psi_w")]
    InfinitePsiW,
}

/// Computes every derived coefficient from valid parameters.
pub fn derive(p: &Params) -> Result<DerivedCoefficients, DeriveError> {
    let (gamma, varphi, lam) = (p.gamma, p.varphi, p.lambda_h);
    let gv = gamma + varphi;

    let flex_p = FlexRatio::new(p.psi_p, p.eta_p);
    let flex_w = FlexRatio::new(p.psi_w, p.eta_w);
    let rp = flex_p.rigidity();
    let rw = flex_w.rigidity();

    // denom of k1/k2 in rigidity form: rp + rw + rp*rw
    let rig_sum = rp + rw + rp * rw;
    if rig_sum == 0.0 && lam > 0.0 {
        return Err(DeriveError::FullyFlexible);
    }

    let (delta_c, delta_n, delta_w) = if p.psi_w.is_infinite() {
        // competitive labor limit
        (varphi / gv, gamma / gv, 0.0)
    } else {
        let d = 1.0 + rw + varphi * p.psi_w + gamma * (p.psi_w - 1.0);
        (
            (1.0 + rw + varphi * p.psi_w) / d,
            gamma * p.psi_w / d,
            gamma / d,
        )
    };

    let delta_p = lam / (1.0 - lam) * rp * delta_c;

    // delta_p * kappa2/kappa1 = lam/(1-lam) * delta_c * rp / (k1/k2), with the
    // 0/0 of the fully flexible lambda=0 economy resolved to 0.
    let k1_over_k2 = rig_sum / gv;
    let het_slope_term = if lam == 0.0 {
        0.0
    } else {
        lam / (1.0 - lam) * delta_c * rp / k1_over_k2
    };
    let gamma_tilde = gamma * (1.0 - het_slope_term);

    let eta_p_tilde = p.eta_p
        + lam / (1.0 - lam)
            * rp
            * rp
            * (gamma * delta_c * delta_c
                + varphi * delta_n * delta_n
                + p.eta_w * delta_w * delta_w);

    let inv_kappa2 = rp * rw / gv;
    let xi_a = gamma * k1_over_k2 + 1.0 - gamma * delta_p;
    let xi_c = gamma * inv_kappa2;
    let xi_b = p.phi_taylor - 1.0 + xi_a + xi_c;

    Ok(DerivedCoefficients {
        kappa1: 1.0 + flex_p.value() + flex_w.value(),
        kappa2: flex_p.value() * flex_w.value() * gv,
        k1_over_k2,
        inv_kappa2,
        flex_p,
        flex_w,
        rigid_p: rp,
        rigid_w: rw,
        delta_c,
        delta_n,
        delta_w,
        delta_p,
        gamma_tilde,
        eta_p_tilde,
        xi_a,
        xi_b,
        xi_c,
    })
}

/// Analytic derivatives of the profit-sensitivity coefficients with respect
/// to `psi_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSensitivities {
    pub d_delta_c: f64,
    pub d_delta_n: f64,
    pub d_delta_w: f64,
    /// `sqrt(eta_w / (gamma + varphi))`: `d delta_w / d psi_w` is positive
    /// below this value of `psi_w` and negative above it.
    pub delta_w_turning_point: f64,
}

/// Closed-form derivatives of `delta_c`, `delta_n`, `delta_w` in `psi_w`.
pub fn delta_derivatives(p: &Params) -> Result<DeltaSensitivities, DeriveError> {
    if p.psi_w.is_infinite() {
        return Err(DeriveError::InfinitePsiW);
    }
    let (gamma, varphi, eta_w, psi_w) = (p.gamma, p.varphi, p.eta_w, p.psi_w);
    let rw = eta_w / psi_w;
    let d = 1.0 + rw + varphi * psi_w + gamma * (psi_w - 1.0);
    let d2 = d * d;

    let d_delta_c = -gamma * ((psi_w - 1.0) * eta_w / (psi_w * psi_w) + 1.0 + rw + varphi) / d2;
    // differentiating delta_n = gamma*psi_w / d directly
    let d_delta_n = gamma * (1.0 + 2.0 * rw - gamma) / d2;
    let d_delta_w = -gamma * (varphi + gamma - eta_w / (psi_w * psi_w)) / d2;

    Ok(DeltaSensitivities {
        d_delta_c,
        d_delta_n,
        d_delta_w,
        delta_w_turning_point: (eta_w / (gamma + varphi)).sqrt(),
    })
}
