//! The functionals `F0`, `F1` and `L = lambda E + xi^p F1 / f~` as Hermitian forms.

use super::catalog::{assemble, find, re, rix, IdentityEntry, Term};
use super::params::{Derived, LyapunovParams};
use crate::envelope::f_tilde;
use crate::error::{Error, Result};
use crate::model::{dissipation_form, generator, hermitian_energy, Coupling, HermitianForm, SystemConfig, Tau};
use crate::model::{ETA, PHI, SIGMA, THETA, U, V, Y, Z};

/// Signs of the `u v`, `theta v` and `y v` monomials of `F0` per coupling case.
fn f0_signs(tau: Tau) -> [f64; 3] {
    match tau {
        Tau::Tau1 => [1.0, -1.0, -1.0],
        Tau::Tau2 => [-1.0, -1.0, 1.0],
        Tau::Tau3 => [-1.0, 1.0, -1.0],
    }
}

fn f0_terms(p: &LyapunovParams, d: &Derived, xi: f64) -> Vec<Term> {
    let [_, l1, l2, l3, l4, l5] = p.lambdas;
    let [su, sth, sy] = f0_signs(p.tau);
    let x2 = xi * xi;
    vec![
        rix(l1, xi, Y, Z),
        rix(su * l2, xi, U, V),
        rix(l3, xi, THETA, PHI),
        rix(1.0, xi, ETA, SIGMA),
        rix(d.l6, xi, Z, THETA),
        rix(d.l7, xi, PHI, Y),
        re(sth * l4 * x2, THETA, V),
        re(sy * l5 * x2, Y, V),
        re(-d.l8, U, Z),
        re(-d.l9, U, PHI),
    ]
}

/// Multiplier of `F0` inside `F1`.
fn f0_weight(cfg: &SystemConfig, xi: f64) -> f64 {
    match (cfg.coupling, cfg.tau) {
        (Coupling::FirstOrder, Tau::Tau1) | (Coupling::ZeroOrder, Tau::Tau2 | Tau::Tau3) => 1.0,
        _ => xi * xi,
    }
}

fn derived(cfg: &SystemConfig, p: &LyapunovParams, xi: f64) -> Result<Derived> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    p.derived(cfg, xi)
}

/// `F1` written out monomial by monomial.
pub fn f1_terms(cfg: &SystemConfig, p: &LyapunovParams, xi: f64) -> Result<Vec<Term>> {
    let d = derived(cfg, p, xi)?;
    let w = f0_weight(cfg, xi);
    let mut terms: Vec<Term> = f0_terms(p, &d, xi).into_iter().map(|t| Term { c: t.c * w, ..t }).collect();
    let l0 = p.lambdas[0];
    let (g, s, k4) = (cfg.gamma, cfg.gamma_sign(), cfg.k4());
    let x2 = xi * xi;
    let extra = match (cfg.coupling, cfg.tau) {
        (Coupling::FirstOrder, Tau::Tau1) => vec![
            rix(s * l0, xi, U, ETA),
            re(-d.i1 / g, ETA, THETA),
            re(-d.i2 / g, ETA, Y),
            rix(d.i5.unwrap_or(0.0), xi, V, SIGMA),
            re(-d.i3, SIGMA, PHI),
            re(-d.i4, SIGMA, Z),
        ],
        (Coupling::FirstOrder, Tau::Tau2) => vec![
            rix(s * l0 * x2, xi, Y, ETA),
            re(k4 / g * d.i1 * x2, V, SIGMA),
            rix(d.i3, xi, Z, SIGMA),
            re(d.i1 * x2 / g, U, ETA),
            rix(d.i4, xi, PHI, SIGMA),
            rix(-d.i2 * x2 / g, xi, ETA, THETA),
        ],
        (Coupling::FirstOrder, Tau::Tau3) => vec![
            rix(s * l0 * x2, xi, THETA, ETA),
            re(k4 / g * d.i1 * x2, V, SIGMA),
            rix(d.i4, xi, Z, SIGMA),
            re(d.i1 * x2 / g, U, ETA),
            rix(d.i3, xi, PHI, SIGMA),
            rix(-d.i2 * x2 / g, xi, ETA, Y),
        ],
        (Coupling::ZeroOrder, Tau::Tau1) => vec![
            re(-s * l0 * x2 * x2, U, ETA),
            rix(d.i1 * x2 / g, xi, ETA, THETA),
            rix(d.i2 * x2 / g, xi, ETA, Y),
            re(d.i5.unwrap_or(0.0) * x2, V, SIGMA),
            rix(d.i4, xi, Z, SIGMA),
            rix(d.i3, xi, PHI, SIGMA),
        ],
        (Coupling::ZeroOrder, Tau::Tau2) => vec![
            re(-s * l0 * x2, Y, ETA),
            rix(k4 / g * d.i1, xi, V, SIGMA),
            re(d.i3, Z, SIGMA),
            rix(d.i1 / g, xi, U, ETA),
            re(d.i4, PHI, SIGMA),
            re(-d.i2 * x2 / g, ETA, THETA),
        ],
        (Coupling::ZeroOrder, Tau::Tau3) => vec![
            re(-s * l0 * x2, THETA, ETA),
            rix(k4 / g * d.i1, xi, V, SIGMA),
            re(d.i4, Z, SIGMA),
            rix(d.i1 / g, xi, U, ETA),
            re(d.i3, PHI, SIGMA),
            re(-d.i2 * x2 / g, ETA, Y),
        ],
    };
    terms.extend(extra);
    Ok(terms)
}

fn entry(name: &str) -> IdentityEntry {
    find(name).unwrap_or_else(|| panic!("catalog entry {name} missing"))
}

/// `F1` as a weighted sum of catalog functionals `W_k`.
pub fn f1_combination(cfg: &SystemConfig, p: &LyapunovParams, xi: f64) -> Result<Vec<(IdentityEntry, f64)>> {
    let d = derived(cfg, p, xi)?;
    let [l0, l1, l2, l3, l4, l5] = p.lambdas;
    let [su, sth, sy] = f0_signs(p.tau);
    let w = f0_weight(cfg, xi);
    let (g, k4) = (cfg.gamma, cfg.k4());
    let x2 = xi * xi;
    let zero = cfg.coupling == Coupling::ZeroOrder;
    let name = |n: &str| format!("{}.{n}", if zero { "zero" } else { "first" });
    // theta v and y v monomials enter F0 with the opposite sign of their identity's W.
    let common = [
        ("common.ixi_y_z", l1),
        ("common.ixi_u_v", su * l2),
        ("common.ixi_theta_phi", l3),
        ("common.re_theta_v", -sth * l4),
        ("common.re_y_v", -sy * l5),
        ("common.ixi_eta_sigma", 1.0),
        ("common.ixi_z_theta", d.l6),
        ("common.ixi_phi_y", d.l7),
        ("common.re_u_z", d.l8),
        ("common.re_u_phi", d.l9),
    ];
    let mut out: Vec<(IdentityEntry, f64)> = common.iter().map(|(n, m)| (entry(&name(n)), m * w)).collect();
    let i5 = d.i5.unwrap_or(0.0);
    let extra: Vec<(&str, f64)> = match (cfg.coupling, cfg.tau) {
        (Coupling::FirstOrder, Tau::Tau1) => {
            vec![
                ("first.tau1.ixi_u_eta", l0),
                ("first.tau1.re_eta_theta", -d.i1 / g),
                ("first.tau1.re_eta_y", -d.i2 / g),
                ("first.tau1.ixi_v_sigma", i5),
                ("first.tau1.re_sigma_z", d.i4),
                ("first.tau1.re_sigma_phi", d.i3),
            ]
        }
        (Coupling::FirstOrder, Tau::Tau2) => vec![
            ("first.tau2.ixi_y_eta", l0 * x2),
            ("first.tau23.re_v_sigma", k4 / g * d.i1),
            ("first.tau23.ixi_z_sigma", d.i3),
            ("first.tau2.re_u_eta", d.i1 * x2 / g),
            ("first.tau23.ixi_phi_sigma", d.i4),
            ("first.tau2.ixi_eta_theta", -d.i2 * x2 / g),
        ],
        (Coupling::FirstOrder, Tau::Tau3) => vec![
            ("first.tau3.ixi_theta_eta", l0 * x2),
            ("first.tau23.re_v_sigma", k4 / g * d.i1),
            ("first.tau23.ixi_z_sigma", d.i4),
            ("first.tau3.re_u_eta", d.i1 * x2 / g),
            ("first.tau23.ixi_phi_sigma", d.i3),
            ("first.tau3.ixi_eta_y", -d.i2 * x2 / g),
        ],
        (Coupling::ZeroOrder, Tau::Tau1) => vec![
            ("zero.tau1.re_u_eta", l0 * x2),
            ("zero.tau1.ixi_eta_theta", d.i1 * x2 / g),
            ("zero.tau1.ixi_eta_y", d.i2 * x2 / g),
            ("zero.tau1.re_v_sigma", i5 * x2),
            ("zero.tau1.ixi_z_sigma", d.i4),
            ("zero.tau1.ixi_phi_sigma", d.i3),
        ],
        (Coupling::ZeroOrder, Tau::Tau2) => vec![
            ("zero.tau2.re_y_eta", l0),
            ("zero.tau23.ixi_v_sigma", k4 / g * d.i1),
            ("zero.tau23.re_z_sigma", d.i3),
            ("zero.tau2.ixi_u_eta", -d.i1 / g),
            ("zero.tau23.re_phi_sigma", d.i4),
            ("zero.tau2.re_eta_theta", -d.i2 * x2 / g),
        ],
        (Coupling::ZeroOrder, Tau::Tau3) => vec![
            ("zero.tau3.re_theta_eta", l0),
            ("zero.tau23.ixi_v_sigma", k4 / g * d.i1),
            ("zero.tau23.re_z_sigma", d.i4),
            ("zero.tau3.ixi_u_eta", -d.i1 / g),
            ("zero.tau23.re_phi_sigma", d.i3),
            ("zero.tau3.re_eta_y", -d.i2 * x2 / g),
        ],
    };
    out.extend(extra.into_iter().map(|(n, m)| (entry(n), m)));
    Ok(out)
}

/// Power `p` in `F = xi^p F1`.
pub fn scale_power(cfg: &SystemConfig) -> i32 {
    let e = 2 * cfg.eps0();
    match (cfg.coupling, cfg.tau) {
        (Coupling::FirstOrder, Tau::Tau1) => 2 + e,
        _ => e,
    }
}

/// `xi^p / f~(xi)`.
pub fn f1_scale(cfg: &SystemConfig, xi: f64) -> Result<f64> {
    let p = scale_power(cfg);
    Ok(if p == 0 { 1.0 } else { xi.powi(p) } / f_tilde(cfg, xi)?)
}

pub fn f1_form(cfg: &SystemConfig, p: &LyapunovParams, xi: f64) -> Result<HermitianForm> {
    Ok(assemble(&f1_terms(cfg, p, xi)?))
}

/// `L - lambda E`.
pub fn perturbation_form(cfg: &SystemConfig, p: &LyapunovParams, xi: f64) -> Result<HermitianForm> {
    Ok(f1_form(cfg, p, xi)?.scaled(f1_scale(cfg, xi)?))
}

pub fn functional_form(cfg: &SystemConfig, p: &LyapunovParams, xi: f64, big_lambda: f64) -> Result<HermitianForm> {
    if !big_lambda.is_finite() || big_lambda <= 0.0 {
        return Err(Error::Range(format!("big_lambda must be positive, got {big_lambda}")));
    }
    Ok(hermitian_energy(cfg).scaled(big_lambda).plus(&perturbation_form(cfg, p, xi)?))
}

/// Drift of `L` with the energy part taken from the exact dissipation form.
pub fn drift_form(cfg: &SystemConfig, p: &LyapunovParams, xi: f64, big_lambda: f64) -> Result<HermitianForm> {
    let a = generator(cfg, xi);
    let pert = perturbation_form(cfg, p, xi)?.lie_derivative(&a);
    Ok(dissipation_form(cfg, xi).scaled(big_lambda).plus(&pert))
}

/// Drift of `L` recombined from the identity right-hand sides.
pub fn drift_from_catalog(cfg: &SystemConfig, p: &LyapunovParams, xi: f64, big_lambda: f64) -> Result<HermitianForm> {
    let mut acc = HermitianForm::zero();
    for (e, m) in f1_combination(cfg, p, xi)? {
        acc = acc.plus(&e.r(cfg, xi).scaled(m));
    }
    Ok(dissipation_form(cfg, xi).scaled(big_lambda).plus(&acc.scaled(f1_scale(cfg, xi)?)))
}

/// `F1` recombined from the identity functionals.
pub fn f1_from_catalog(cfg: &SystemConfig, p: &LyapunovParams, xi: f64) -> Result<HermitianForm> {
    let mut acc = HermitianForm::zero();
    for (e, m) in f1_combination(cfg, p, xi)? {
        acc = acc.plus(&e.w(cfg, xi).scaled(m));
    }
    Ok(acc)
}
