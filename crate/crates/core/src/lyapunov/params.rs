//! Multiplier selection and the frequency-dependent derived coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Coupling, SystemConfig, Tau};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovParams {
    /// `lambda_0 .. lambda_5`.
    pub lambdas: [f64; 6],
    pub epsilon: f64,
    pub tau: Tau,
    pub coupling: Coupling,
}

/// Coefficients that depend on `xi` through `xi^2`; `i6`/`i7` exist only in the
/// cases whose drift is written with them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived {
    pub l6: f64,
    pub l7: f64,
    pub l8: f64,
    pub l9: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: Option<f64>,
    pub i6: Option<f64>,
    pub i7: Option<f64>,
}

fn mid(lo: f64, hi: f64) -> f64 {
    0.5 * (lo + hi)
}

/// A strict inequality `lhs > rhs` of the multiplier chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    pub label: &'static str,
    pub slack: f64,
}

impl LyapunovParams {
    pub fn lambda(&self, i: usize) -> f64 {
        self.lambdas[i]
    }

    /// Every strict inequality of the chain for this case, as `lhs - rhs`.
    pub fn chain(&self, cfg: &SystemConfig) -> Vec<ChainCheck> {
        let [l0, l1, l2, l3, l4, l5] = self.lambdas;
        let g = cfg.gamma.abs();
        let c = |label, slack| ChainCheck { label, slack };
        let eps_terms = self.epsilon_terms(cfg);
        let mut out = match self.tau {
            Tau::Tau1 => vec![
                c("lambda1 > 0", l1),
                c("lambda3 > 0", l3),
                c("|gamma| lambda0 > lambda1 + lambda3", g * l0 - l1 - l3),
                c("lambda4 > lambda3", l4 - l3),
                c("|gamma| lambda0 - lambda1 > lambda4", g * l0 - l1 - l4),
                c("lambda2 > lambda1 + lambda4", l2 - l1 - l4),
                c("|gamma| lambda0 > lambda2", g * l0 - l2),
                c("lambda5 > lambda1", l5 - l1),
                c("lambda2 - lambda4 > lambda5", l2 - l4 - l5),
            ],
            Tau::Tau2 => vec![
                c("lambda1 > 0", l1),
                c("lambda3 > 0", l3),
                c("lambda4 > lambda3", l4 - l3),
                c("lambda5 > lambda4", l5 - l4),
                c("lambda2 > 0", l2),
                c("lambda5 - lambda4 > lambda2", l5 - l4 - l2),
                c("|gamma| lambda0 > lambda1 + lambda5", g * l0 - l1 - l5),
            ],
            Tau::Tau3 => vec![
                c("lambda3 > 0", l3),
                c("lambda1 > 0", l1),
                c("lambda5 > lambda1", l5 - l1),
                c("lambda4 > lambda5", l4 - l5),
                c("lambda2 > 0", l2),
                c("lambda4 - lambda5 > lambda2", l4 - l5 - l2),
                c("|gamma| lambda0 > lambda3 + lambda4", g * l0 - l3 - l4),
            ],
        };
        for (label, v) in eps_terms {
            out.push(c(label, v - self.epsilon));
        }
        out
    }

    /// The quantities whose minimum bounds epsilon.
    pub fn epsilon_terms(&self, cfg: &SystemConfig) -> Vec<(&'static str, f64)> {
        let [l0, l1, l2, l3, l4, l5] = self.lambdas;
        let g = cfg.gamma.abs();
        let [k1, k2, k3, k4, _] = cfg.k;
        match self.tau {
            Tau::Tau1 => vec![
                ("eps < lambda5 - lambda1", l5 - l1),
                ("eps < k1 (lambda2 - lambda4 - lambda5)", k1 * (l2 - l4 - l5)),
                ("eps < lambda4 - lambda3", l4 - l3),
                ("eps < |gamma| lambda0 - lambda2", g * l0 - l2),
                ("eps < k2 lambda1", k2 * l1),
                ("eps < k3 lambda3", k3 * l3),
                ("eps < k4", k4),
            ],
            Tau::Tau2 => vec![
                ("eps < k2 lambda1", k2 * l1),
                ("eps < k3 lambda3", k3 * l3),
                ("eps < lambda2", l2),
                ("eps < lambda4 - lambda3", l4 - l3),
                ("eps < k1 (lambda5 - lambda4 - lambda2)", k1 * (l5 - l4 - l2)),
                ("eps < |gamma| lambda0 - lambda1 - lambda5", g * l0 - l1 - l5),
                ("eps < k4", k4),
            ],
            Tau::Tau3 => vec![
                ("eps < k2 lambda1", k2 * l1),
                ("eps < k3 lambda3", k3 * l3),
                ("eps < lambda2", l2),
                ("eps < lambda5 - lambda1", l5 - l1),
                ("eps < k1 (lambda4 - lambda5 - lambda2)", k1 * (l4 - l5 - l2)),
                ("eps < |gamma| lambda0 - lambda3 - lambda4", g * l0 - l3 - l4),
                ("eps < k4", k4),
            ],
        }
    }

    pub fn check_case(&self, cfg: &SystemConfig) -> Result<()> {
        if self.tau != cfg.tau || self.coupling != cfg.coupling {
            return Err(Error::CaseMismatch(format!(
                "multipliers for {}/{} used with {} {}",
                self.tau.index(),
                self.coupling.label(),
                cfg.case_label(),
                cfg.variant_label()
            )));
        }
        Ok(())
    }

    pub fn derived(&self, cfg: &SystemConfig, xi: f64) -> Result<Derived> {
        self.check_case(cfg)?;
        let [l0, l1, l2, l3, l4, l5] = self.lambdas;
        let [k1, k2, k3, k4, _] = cfg.k;
        let g = cfg.gamma;
        let s = cfg.gamma_sign();
        let x2 = xi * xi;
        let (l6, l7, l8, l9, i1, i2) = match self.tau {
            Tau::Tau1 => {
                let chi = cfg.chi();
                let l6 = k2 / chi * (l4 + l5);
                let l7 = -k3 / chi * (l4 + l5);
                let l8 = k2 / k1 * l5 * x2 - l1 + l6;
                let l9 = k3 / k1 * l4 * x2 - l3 + l7;
                (l6, l7, l8, l9, l4 * x2 - l2 - l9, l5 * x2 - l2 - l8)
            }
            Tau::Tau2 => {
                let l6 = k2 / k3 * ((k3 / k1 - 1.0) * l4 * x2 - l2 - l3);
                let l7 = -k3 / k2 * l6;
                let l8 = -k2 / k1 * l5 * x2 + l6 - l1;
                let l9 = l4 * x2 + l2;
                (l6, l7, l8, l9, -l5 * x2 + l2 - l8, l5 - l4 - l6 - l7)
            }
            Tau::Tau3 => {
                let l7 = k3 / k2 * ((k2 / k1 - 1.0) * l5 * x2 - l2 - l1);
                let l6 = -k2 / k3 * l7;
                let l8 = l5 * x2 + l2;
                let l9 = -k3 / k1 * l4 * x2 + l7 - l3;
                (l6, l7, l8, l9, -l4 * x2 + l2 - l9, l4 - l5 - l6 - l7)
            }
        };
        let (i3, i4, i5, i6, i7) = match (self.coupling, self.tau) {
            (Coupling::FirstOrder, Tau::Tau1) => {
                let base = g + s * k4 * l0;
                (base + k4 / g * i1, base + k4 / g * i2, Some(base), None, None)
            }
            (Coupling::FirstOrder, tau) => {
                let i3 = (s * k4 * l0 + g) * x2 + k4 / g * i1;
                let i4 = k4 / g * (i2 * x2 + i1);
                let lead = if tau == Tau::Tau2 { l5 } else { l4 };
                let i5 = -g * lead * x2 * xi + (s * k1 * l0 + (k4 - k1) / g * i1 + k1 / g * i2) * xi;
                let (i6, i7) = if tau == Tau::Tau2 {
                    ((-s * k2 * l0 + g * l1) * x2 + i3, -(k3 / g * i2 + g * l7) * x2 + i4)
                } else {
                    ((-s * k3 * l0 + g * l3) * x2 + i3, -(k2 / g * i2 + g * l6) * x2 + i4)
                };
                (i3, i4, Some(i5), Some(i6), Some(i7))
            }
            (Coupling::ZeroOrder, Tau::Tau1) => {
                let i3 = -k4 / g * (i1 + g.abs() * l0) * x2 - g;
                let i4 = -k4 / g * (i2 + g.abs() * l0) * x2 - g;
                (i3, i4, Some(-g - s * k4 * l0 * x2), None, None)
            }
            (Coupling::ZeroOrder, tau) => {
                let i3 = -s * k4 * l0 * x2 - k4 / g * i1 - g;
                let i4 = -k4 / g * (i2 * x2 + i1);
                if tau == Tau::Tau2 {
                    let i5 = (s * k1 * l0 - g * l5 + k1 / g * (i2 - i1) + k4 / g * i1) * xi;
                    let i6 = s * k2 * l0 * x2 - g * l1 + i3;
                    let i7 = k3 / g * i2 * x2 + i4 + g * l7;
                    (i3, i4, Some(i5), Some(i6), Some(i7))
                } else {
                    (i3, i4, None, None, None)
                }
            }
        };
        Ok(Derived { l6, l7, l8, l9, i1, i2, i3, i4, i5, i6, i7 })
    }
}

/// Midpoint rule over the multiplier chain of the case, with `lambda1 = lambda3 = 1`.
/// Intervals with no upper end are resolved by doubling the lower end.
pub fn select_lambdas(cfg: &SystemConfig) -> Result<LyapunovParams> {
    if !cfg.is_stable() {
        return Err(Error::Unstable(format!("{} with chi = 0 has no certificate", cfg.case_label())));
    }
    let g = cfg.gamma.abs();
    let (l1, l3) = (1.0, 1.0);
    let lambdas = match cfg.tau {
        Tau::Tau1 => {
            let l0 = 2.0 * (l1 + l3) / g;
            let l4 = mid(l3, g * l0 - l1);
            let l2 = mid(l1 + l4, g * l0);
            let l5 = mid(l1, l2 - l4);
            [l0, l1, l2, l3, l4, l5]
        }
        Tau::Tau2 => {
            let l4 = 2.0 * l3;
            let l5 = 2.0 * l4;
            let l2 = mid(0.0, l5 - l4);
            let l0 = 2.0 * (l1 + l5) / g;
            [l0, l1, l2, l3, l4, l5]
        }
        Tau::Tau3 => {
            let l5 = 2.0 * l1;
            let l4 = 2.0 * l5;
            let l2 = mid(0.0, l4 - l5);
            let l0 = 2.0 * (l3 + l4) / g;
            [l0, l1, l2, l3, l4, l5]
        }
    };
    let mut p = LyapunovParams { lambdas, epsilon: 0.0, tau: cfg.tau, coupling: cfg.coupling };
    let min = p.epsilon_terms(cfg).iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    p.epsilon = 0.5 * min;
    for check in p.chain(cfg) {
        if !(check.slack >= 0.5 * p.epsilon) {
            return Err(Error::InvalidConfig(format!(
                "multiplier chain violated: {} (slack {:e})",
                check.label, check.slack
            )));
        }
    }
    Ok(p)
}
