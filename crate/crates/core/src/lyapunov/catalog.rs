//! Differential identities `d/dt W(s) = R(s)` along the mode flow, each stored as
//! a pair of sesquilinear sums.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{generator, Coupling, HermitianForm, SystemConfig, Tau, ETA, PHI, SIGMA, THETA, U, V, Y, Z};

/// `Re(c * s_a * conj(s_b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub c: Complex64,
    pub a: usize,
    pub b: usize,
}

pub fn assemble(terms: &[Term]) -> HermitianForm {
    let mut f = HermitianForm::zero();
    for t in terms {
        f.add_re(t.c, t.a, t.b);
    }
    f
}

/// Scalars shared by every identity at one frequency.
#[derive(Debug, Clone, Copy)]
pub struct Coeffs {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub g: f64,
    /// sign(gamma)
    pub s: f64,
    pub x: f64,
    /// k5 * xi^(2 eps0)
    pub d: f64,
    /// xi^(2 eps0)
    pub w: f64,
    pub t: [f64; 3],
}

impl Coeffs {
    pub fn new(cfg: &SystemConfig, xi: f64) -> Self {
        let [k1, k2, k3, k4, k5] = cfg.k;
        let w = cfg.damping.weight(xi);
        Coeffs { k1, k2, k3, k4, k5, g: cfg.gamma, s: cfg.gamma_sign(), x: xi, d: k5 * w, w, t: cfg.tau.weights() }
    }

    pub fn x2(&self) -> f64 {
        self.x * self.x
    }
}

/// `c Re(a conj(b))`.
pub fn re(c: f64, a: usize, b: usize) -> Term {
    Term { c: Complex64::new(c, 0.0), a, b }
}

/// `c Re(i xi a conj(b))`.
pub fn rix(c: f64, x: f64, a: usize, b: usize) -> Term {
    Term { c: Complex64::new(0.0, c * x), a, b }
}

/// `c |a|^2`.
pub fn sq(c: f64, a: usize) -> Term {
    re(c, a, a)
}

pub type Builder = fn(&Coeffs) -> (Vec<Term>, Vec<Term>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Common,
    Tau1,
    Tau2,
    Tau3,
    Tau23,
}

#[derive(Clone, Copy)]
pub struct IdentityEntry {
    /// `coupling.block.form`, where `form` names the leading monomial of `W`:
    /// `ixi_a_b` for `Re(i xi a conj(b))`, `re_a_b` for `Re(a conj(b))`.
    pub name: &'static str,
    pub block: Block,
    pub coupling: Coupling,
    pub build: Builder,
}

impl std::fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityEntry")
            .field("name", &self.name)
            .field("block", &self.block)
            .field("coupling", &self.coupling)
            .finish()
    }
}

impl IdentityEntry {
    pub fn applies(&self, cfg: &SystemConfig) -> bool {
        if cfg.coupling != self.coupling {
            return false;
        }
        match self.block {
            Block::Common => true,
            Block::Tau1 => cfg.tau == Tau::Tau1,
            Block::Tau2 => cfg.tau == Tau::Tau2,
            Block::Tau3 => cfg.tau == Tau::Tau3,
            Block::Tau23 => cfg.tau != Tau::Tau1,
        }
    }

    pub fn terms(&self, cfg: &SystemConfig, xi: f64) -> (Vec<Term>, Vec<Term>) {
        (self.build)(&Coeffs::new(cfg, xi))
    }

    pub fn w(&self, cfg: &SystemConfig, xi: f64) -> HermitianForm {
        assemble(&self.terms(cfg, xi).0)
    }

    pub fn r(&self, cfg: &SystemConfig, xi: f64) -> HermitianForm {
        assemble(&self.terms(cfg, xi).1)
    }
}

/// `|Herm(A* W + W A) - R|_F / (1 + |R|_F)` for explicit term lists.
pub fn residual_of(cfg: &SystemConfig, xi: f64, w: &[Term], r: &[Term]) -> f64 {
    let a = generator(cfg, xi);
    let lhs = assemble(w).lie_derivative(&a);
    let rhs = assemble(r);
    lhs.minus(&rhs).frobenius() / (1.0 + rhs.frobenius())
}

pub fn identity_residual(entry: &IdentityEntry, cfg: &SystemConfig, xi: f64) -> Result<f64> {
    if !entry.applies(cfg) {
        return Err(Error::CaseMismatch(format!(
            "identity {} does not apply to {} {}",
            entry.name,
            cfg.case_label(),
            cfg.variant_label()
        )));
    }
    let (w, r) = entry.terms(cfg, xi);
    Ok(residual_of(cfg, xi, &w, &r))
}

/// Tolerance below which an identity counts as holding.
pub const IDENTITY_TOL: f64 = 1e-12;

pub fn find(name: &str) -> Option<IdentityEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

pub fn catalog() -> Vec<IdentityEntry> {
    use Block::*;
    use Coupling::{FirstOrder as F, ZeroOrder as Zr};
    let e = |name, block, coupling, build| IdentityEntry { name, block, coupling, build };
    vec![
        e("first.common.ixi_y_z", Common, F, first_common_ixi_y_z),
        e("first.common.ixi_u_v", Common, F, first_common_ixi_u_v),
        e("first.common.ixi_theta_phi", Common, F, first_common_ixi_theta_phi),
        e("first.common.re_theta_v", Common, F, first_common_re_theta_v),
        e("first.common.re_y_v", Common, F, first_common_re_y_v),
        e("first.common.ixi_eta_sigma", Common, F, first_common_ixi_eta_sigma),
        e("first.common.ixi_z_theta", Common, F, first_common_ixi_z_theta),
        e("first.common.ixi_phi_y", Common, F, first_common_ixi_phi_y),
        e("first.common.re_u_z", Common, F, first_common_re_u_z),
        e("first.common.re_u_phi", Common, F, first_common_re_u_phi),
        e("zero.common.ixi_y_z", Common, Zr, zero_common_ixi_y_z),
        e("zero.common.ixi_u_v", Common, Zr, zero_common_ixi_u_v),
        e("zero.common.ixi_theta_phi", Common, Zr, zero_common_ixi_theta_phi),
        e("zero.common.re_theta_v", Common, Zr, zero_common_re_theta_v),
        e("zero.common.re_y_v", Common, Zr, zero_common_re_y_v),
        e("zero.common.ixi_eta_sigma", Common, Zr, zero_common_ixi_eta_sigma),
        e("zero.common.ixi_z_theta", Common, Zr, zero_common_ixi_z_theta),
        e("zero.common.ixi_phi_y", Common, Zr, zero_common_ixi_phi_y),
        e("zero.common.re_u_z", Common, Zr, zero_common_re_u_z),
        e("zero.common.re_u_phi", Common, Zr, zero_common_re_u_phi),
        e("first.tau1.ixi_u_eta", Tau1, F, first_tau1_ixi_u_eta),
        e("first.tau1.re_eta_theta", Tau1, F, first_tau1_re_eta_theta),
        e("first.tau1.re_eta_y", Tau1, F, first_tau1_re_eta_y),
        e("first.tau1.ixi_v_sigma", Tau1, F, first_tau1_ixi_v_sigma),
        e("first.tau1.re_sigma_z", Tau1, F, first_tau1_re_sigma_z),
        e("first.tau1.re_sigma_phi", Tau1, F, first_tau1_re_sigma_phi),
        e("first.tau2.ixi_y_eta", Tau2, F, first_tau2_ixi_y_eta),
        e("first.tau23.re_v_sigma", Tau23, F, first_tau23_re_v_sigma),
        e("first.tau23.ixi_z_sigma", Tau23, F, first_tau23_ixi_z_sigma),
        e("first.tau2.re_u_eta", Tau2, F, first_tau2_re_u_eta),
        e("first.tau23.ixi_phi_sigma", Tau23, F, first_tau23_ixi_phi_sigma),
        e("first.tau2.ixi_eta_theta", Tau2, F, first_tau2_ixi_eta_theta),
        e("first.tau3.ixi_theta_eta", Tau3, F, first_tau3_ixi_theta_eta),
        e("first.tau3.re_u_eta", Tau3, F, first_tau3_re_u_eta),
        e("first.tau3.ixi_eta_y", Tau3, F, first_tau3_ixi_eta_y),
        e("zero.tau1.re_u_eta", Tau1, Zr, zero_tau1_re_u_eta),
        e("zero.tau1.ixi_eta_theta", Tau1, Zr, zero_tau1_ixi_eta_theta),
        e("zero.tau1.ixi_eta_y", Tau1, Zr, zero_tau1_ixi_eta_y),
        e("zero.tau1.re_v_sigma", Tau1, Zr, zero_tau1_re_v_sigma),
        e("zero.tau1.ixi_z_sigma", Tau1, Zr, zero_tau1_ixi_z_sigma),
        e("zero.tau1.ixi_phi_sigma", Tau1, Zr, zero_tau1_ixi_phi_sigma),
        e("zero.tau2.re_y_eta", Tau2, Zr, zero_tau2_re_y_eta),
        e("zero.tau23.ixi_v_sigma", Tau23, Zr, zero_tau23_ixi_v_sigma),
        e("zero.tau23.re_z_sigma", Tau23, Zr, zero_tau23_re_z_sigma),
        e("zero.tau2.ixi_u_eta", Tau2, Zr, zero_tau2_ixi_u_eta),
        e("zero.tau23.re_phi_sigma", Tau23, Zr, zero_tau23_re_phi_sigma),
        e("zero.tau2.re_eta_theta", Tau2, Zr, zero_tau2_re_eta_theta),
        e("zero.tau3.re_theta_eta", Tau3, Zr, zero_tau3_re_theta_eta),
        e("zero.tau3.ixi_u_eta", Tau3, Zr, zero_tau3_ixi_u_eta),
        e("zero.tau3.re_eta_y", Tau3, Zr, zero_tau3_re_eta_y),
    ]
}

// First-order coupling, any tau.

fn first_common_ixi_y_z(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![rix(1.0, x, Y, Z)], vec![sq(x2, Y), sq(-c.k2 * x2, Z), rix(-c.k1, x, V, Z), re(c.t[1] * c.g * x2, ETA, Z)])
}

fn first_common_ixi_u_v(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, U, V)],
        vec![sq(x2, U), sq(-c.k1 * x2, V), rix(-1.0, x, Y, U), rix(-1.0, x, THETA, U), re(c.t[0] * c.g * x2, ETA, V)],
    )
}

fn first_common_ixi_theta_phi(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, THETA, PHI)],
        vec![sq(x2, THETA), sq(-c.k3 * x2, PHI), rix(-c.k1, x, V, PHI), re(c.t[2] * c.g * x2, ETA, PHI)],
    )
}

fn first_common_re_theta_v(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![re(-x2, THETA, V)],
        vec![
            sq(c.k1 * x2, V),
            sq(-x2, THETA),
            rix(-x2, x, U, THETA),
            rix(-c.k3 * x2, x, PHI, V),
            re(-x2, Y, THETA),
            rix(c.t[2] * c.g * x2, x, ETA, V),
        ],
    )
}

fn first_common_re_y_v(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![re(-x2, Y, V)],
        vec![
            sq(c.k1 * x2, V),
            sq(-x2, Y),
            rix(-x2, x, U, Y),
            rix(-c.k2 * x2, x, Z, V),
            re(-x2, THETA, Y),
            rix(c.t[1] * c.g * x2, x, ETA, V),
        ],
    )
}

fn first_common_ixi_eta_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    let gx2 = c.g * x2;
    (
        vec![rix(1.0, x, ETA, SIGMA)],
        vec![
            sq(x2, ETA),
            sq(-c.k4 * x2, SIGMA),
            rix(-c.d, x, ETA, SIGMA),
            re(gx2 * c.t[0], U, SIGMA),
            re(gx2 * c.t[1], Y, SIGMA),
            re(gx2 * c.t[2], THETA, SIGMA),
        ],
    )
}

fn first_common_ixi_z_theta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, Z, THETA)],
        vec![re(-x2, Y, THETA), re(c.k3 * x2, PHI, Z), rix(c.k1, x, V, Z), re(-c.t[2] * c.g * x2, ETA, Z)],
    )
}

fn first_common_ixi_phi_y(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, PHI, Y)],
        vec![re(-x2, THETA, Y), re(c.k2 * x2, Z, PHI), rix(c.k1, x, V, PHI), re(-c.t[1] * c.g * x2, ETA, PHI)],
    )
}

fn first_common_re_u_z(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(-1.0, U, Z)], vec![rix(-c.k1, x, V, Z), rix(-1.0, x, Y, U), rix(c.t[0] * c.g, x, ETA, Z)])
}

fn first_common_re_u_phi(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(-1.0, U, PHI)], vec![rix(-c.k1, x, V, PHI), rix(-1.0, x, THETA, U), rix(c.t[0] * c.g, x, ETA, PHI)])
}

// Zero-order coupling, any tau.

fn zero_common_ixi_y_z(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![rix(1.0, x, Y, Z)], vec![sq(x2, Y), sq(-c.k2 * x2, Z), rix(-c.k1, x, V, Z), rix(-c.t[1] * c.g, x, ETA, Z)])
}

fn zero_common_ixi_u_v(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, U, V)],
        vec![sq(x2, U), sq(-c.k1 * x2, V), rix(-1.0, x, Y, U), rix(-1.0, x, THETA, U), rix(-c.t[0] * c.g, x, ETA, V)],
    )
}

fn zero_common_ixi_theta_phi(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, THETA, PHI)],
        vec![sq(x2, THETA), sq(-c.k3 * x2, PHI), rix(-c.k1, x, V, PHI), rix(-c.t[2] * c.g, x, ETA, PHI)],
    )
}

fn zero_common_re_theta_v(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![re(-x2, THETA, V)],
        vec![
            sq(c.k1 * x2, V),
            sq(-x2, THETA),
            rix(-x2, x, U, THETA),
            rix(-c.k3 * x2, x, PHI, V),
            re(-x2, Y, THETA),
            re(c.t[2] * c.g * x2, ETA, V),
        ],
    )
}

fn zero_common_re_y_v(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![re(-x2, Y, V)],
        vec![
            sq(c.k1 * x2, V),
            sq(-x2, Y),
            rix(-x2, x, U, Y),
            rix(-c.k2 * x2, x, Z, V),
            re(-x2, THETA, Y),
            re(c.t[1] * c.g * x2, ETA, V),
        ],
    )
}

fn zero_common_ixi_eta_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, ETA, SIGMA)],
        vec![
            sq(x2, ETA),
            sq(-c.k4 * x2, SIGMA),
            rix(-c.d, x, ETA, SIGMA),
            rix(c.g * c.t[0], x, U, SIGMA),
            rix(c.g * c.t[1], x, Y, SIGMA),
            rix(c.g * c.t[2], x, THETA, SIGMA),
        ],
    )
}

fn zero_common_ixi_z_theta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, Z, THETA)],
        vec![re(-x2, Y, THETA), re(c.k3 * x2, PHI, Z), rix(c.k1, x, V, Z), rix(c.t[2] * c.g, x, ETA, Z)],
    )
}

fn zero_common_ixi_phi_y(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, PHI, Y)],
        vec![re(-x2, THETA, Y), re(c.k2 * x2, Z, PHI), rix(c.k1, x, V, PHI), rix(c.t[1] * c.g, x, ETA, PHI)],
    )
}

fn zero_common_re_u_z(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(-1.0, U, Z)], vec![rix(-c.k1, x, V, Z), rix(-1.0, x, Y, U), re(c.t[0] * c.g, ETA, Z)])
}

fn zero_common_re_u_phi(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(-1.0, U, PHI)], vec![rix(-c.k1, x, V, PHI), rix(-1.0, x, THETA, U), re(c.t[0] * c.g, ETA, PHI)])
}

// First-order coupling, tau = (1,0,0).

fn first_tau1_ixi_u_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2, s) = (c.x, c.x2(), c.s);
    (
        vec![rix(s, x, U, ETA)],
        vec![
            sq(c.g.abs() * x2, ETA),
            sq(-c.g.abs() * x2, U),
            re(s * c.k4 * x2, SIGMA, U),
            re(-s * c.k1 * x2, V, ETA),
            rix(s * c.d, x, ETA, U),
        ],
    )
}

fn first_tau1_re_eta_theta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (
        vec![re(1.0, ETA, THETA)],
        vec![
            rix(c.g, x, THETA, U),
            rix(c.k4, x, SIGMA, THETA),
            re(-c.d, ETA, THETA),
            rix(c.k3, x, PHI, ETA),
            re(-c.k1, V, ETA),
        ],
    )
}

fn first_tau1_re_eta_y(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (
        vec![re(1.0, ETA, Y)],
        vec![rix(-c.g, x, U, Y), rix(c.k4, x, SIGMA, Y), re(-c.d, ETA, Y), rix(c.k2, x, Z, ETA), re(-c.k1, V, ETA)],
    )
}

fn first_tau1_ixi_v_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, V, SIGMA)],
        vec![re(-x2, SIGMA, U), re(x2, V, ETA), rix(1.0, x, Y, SIGMA), rix(1.0, x, THETA, SIGMA)],
    )
}

fn first_tau1_re_sigma_z(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(-1.0, SIGMA, Z)], vec![rix(1.0, x, SIGMA, Y), rix(1.0, x, Z, ETA)])
}

fn first_tau1_re_sigma_phi(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(-1.0, SIGMA, PHI)], vec![rix(1.0, x, SIGMA, THETA), rix(1.0, x, PHI, ETA)])
}

// First-order coupling, tau = (0,1,0) and (0,0,1).

fn first_tau2_ixi_y_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2, s) = (c.x, c.x2(), c.s);
    (
        vec![rix(s, x, Y, ETA)],
        vec![
            sq(c.g.abs() * x2, ETA),
            sq(-c.g.abs() * x2, Y),
            re(s * c.k4 * x2, SIGMA, Y),
            rix(-s * c.k1, x, V, ETA),
            re(-s * c.k2 * x2, ETA, Z),
            rix(s * c.d, x, ETA, Y),
        ],
    )
}

fn first_tau23_re_v_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![re(x2, V, SIGMA)], vec![re(x2, SIGMA, Y), re(x2, SIGMA, THETA), rix(x2, x, U, SIGMA), rix(x2, x, ETA, V)])
}

fn first_tau23_ixi_z_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![rix(1.0, x, Z, SIGMA)], vec![re(-x2, SIGMA, Y), re(x2, ETA, Z)])
}

fn first_tau2_re_u_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(1.0, U, ETA)], vec![rix(-c.g, x, Y, U), rix(c.k1, x, V, ETA), rix(c.k4, x, SIGMA, U), re(-c.d, ETA, U)])
}

fn first_tau23_ixi_phi_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![rix(1.0, x, PHI, SIGMA)], vec![re(-x2, SIGMA, THETA), re(x2, ETA, PHI)])
}

fn first_tau2_ixi_eta_theta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, ETA, THETA)],
        vec![
            re(c.g * x2, Y, THETA),
            re(-c.k4 * x2, SIGMA, THETA),
            re(c.k3 * x2, ETA, PHI),
            rix(-c.d, x, ETA, THETA),
            rix(c.k1, x, V, ETA),
        ],
    )
}

fn first_tau3_ixi_theta_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2, s) = (c.x, c.x2(), c.s);
    (
        vec![rix(s, x, THETA, ETA)],
        vec![
            sq(c.g.abs() * x2, ETA),
            sq(-c.g.abs() * x2, THETA),
            re(s * c.k4 * x2, SIGMA, THETA),
            rix(-s * c.k1, x, V, ETA),
            re(-s * c.k3 * x2, ETA, PHI),
            rix(s * c.d, x, ETA, THETA),
        ],
    )
}

fn first_tau3_re_u_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (
        vec![re(1.0, U, ETA)],
        vec![rix(-c.g, x, THETA, U), rix(c.k1, x, V, ETA), rix(c.k4, x, SIGMA, U), re(-c.d, ETA, U)],
    )
}

fn first_tau3_ixi_eta_y(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, ETA, Y)],
        vec![
            re(c.g * x2, Y, THETA),
            re(-c.k4 * x2, SIGMA, Y),
            re(c.k2 * x2, ETA, Z),
            rix(-c.d, x, ETA, Y),
            rix(c.k1, x, V, ETA),
        ],
    )
}

// Zero-order coupling, tau = (1,0,0).

fn zero_tau1_re_u_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2, s) = (c.x, c.x2(), c.s);
    (
        vec![re(-s * x2, U, ETA)],
        vec![
            sq(c.g.abs() * x2, ETA),
            sq(-c.g.abs() * x2, U),
            rix(-s * c.k4 * x2, x, SIGMA, U),
            rix(-s * c.k1 * x2, x, V, ETA),
            re(s * c.d * x2, ETA, U),
        ],
    )
}

fn zero_tau1_ixi_eta_theta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, ETA, THETA)],
        vec![
            rix(c.g, x, U, THETA),
            re(-c.k4 * x2, SIGMA, THETA),
            rix(-c.d, x, ETA, THETA),
            re(c.k3 * x2, PHI, ETA),
            rix(c.k1, x, V, ETA),
        ],
    )
}

fn zero_tau1_ixi_eta_y(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, ETA, Y)],
        vec![
            rix(c.g, x, U, Y),
            re(-c.k4 * x2, SIGMA, Y),
            rix(-c.d, x, ETA, Y),
            re(c.k2 * x2, Z, ETA),
            rix(c.k1, x, V, ETA),
        ],
    )
}

fn zero_tau1_re_v_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (
        vec![re(1.0, V, SIGMA)],
        vec![rix(-1.0, x, SIGMA, U), rix(-1.0, x, V, ETA), re(1.0, Y, SIGMA), re(1.0, THETA, SIGMA)],
    )
}

fn zero_tau1_ixi_z_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![rix(1.0, x, Z, SIGMA)], vec![re(-x2, SIGMA, Y), re(x2, Z, ETA)])
}

fn zero_tau1_ixi_phi_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (vec![rix(1.0, x, PHI, SIGMA)], vec![re(-x2, SIGMA, THETA), re(x2, PHI, ETA)])
}

// Zero-order coupling, tau = (0,1,0) and (0,0,1).

fn zero_tau2_re_y_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2, s) = (c.x, c.x2(), c.s);
    (
        vec![re(-s * x2, Y, ETA)],
        vec![
            sq(c.g.abs() * x2, ETA),
            sq(-c.g.abs() * x2, Y),
            rix(-s * c.k4 * x2, x, SIGMA, Y),
            re(s * c.k1 * x2, ETA, V),
            rix(-s * c.k2 * x2, x, Z, ETA),
            re(s * c.d * x2, ETA, Y),
        ],
    )
}

fn zero_tau23_ixi_v_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(1.0, x, V, SIGMA)],
        vec![rix(-1.0, x, SIGMA, Y), rix(-1.0, x, SIGMA, THETA), re(-x2, U, SIGMA), re(x2, ETA, V)],
    )
}

fn zero_tau23_re_z_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(1.0, Z, SIGMA)], vec![rix(-1.0, x, SIGMA, Y), rix(1.0, x, ETA, Z)])
}

fn zero_tau2_ixi_u_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(-1.0, x, U, ETA)],
        vec![rix(c.g, x, Y, U), re(c.k1 * x2, V, ETA), re(-c.k4 * x2, SIGMA, U), rix(-c.d, x, ETA, U)],
    )
}

fn zero_tau23_re_phi_sigma(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (vec![re(1.0, PHI, SIGMA)], vec![rix(-1.0, x, SIGMA, THETA), rix(1.0, x, ETA, PHI)])
}

fn zero_tau2_re_eta_theta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (
        vec![re(1.0, ETA, THETA)],
        vec![
            re(c.g, Y, THETA),
            rix(c.k4, x, SIGMA, THETA),
            rix(-c.k3, x, ETA, PHI),
            re(-c.d, ETA, THETA),
            re(-c.k1, V, ETA),
        ],
    )
}

fn zero_tau3_re_theta_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2, s) = (c.x, c.x2(), c.s);
    (
        vec![re(-s * x2, THETA, ETA)],
        vec![
            sq(c.g.abs() * x2, ETA),
            sq(-c.g.abs() * x2, THETA),
            rix(-s * c.k4 * x2, x, SIGMA, THETA),
            re(s * c.k1 * x2, ETA, V),
            rix(-s * c.k3 * x2, x, PHI, ETA),
            re(s * c.d * x2, ETA, THETA),
        ],
    )
}

fn zero_tau3_ixi_u_eta(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let (x, x2) = (c.x, c.x2());
    (
        vec![rix(-1.0, x, U, ETA)],
        vec![rix(c.g, x, THETA, U), re(c.k1 * x2, V, ETA), re(-c.k4 * x2, SIGMA, U), rix(-c.d, x, ETA, U)],
    )
}

fn zero_tau3_re_eta_y(c: &Coeffs) -> (Vec<Term>, Vec<Term>) {
    let x = c.x;
    (
        vec![re(1.0, ETA, Y)],
        vec![re(c.g, Y, THETA), rix(c.k4, x, SIGMA, Y), rix(-c.k2, x, ETA, Z), re(-c.d, ETA, Y), re(-c.k1, V, ETA)],
    )
}
