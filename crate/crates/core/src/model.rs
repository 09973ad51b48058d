//! System parameters, mode generator and energy form.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Mat8 = SMatrix<Complex64, 8, 8>;
pub type Vec8 = SVector<Complex64, 8>;
pub type RMat8 = SMatrix<f64, 8, 8>;

/// Component indices of the mode vector (v, u, z, y, phi, theta, sigma, eta).
pub const V: usize = 0;
pub const U: usize = 1;
pub const Z: usize = 2;
pub const Y: usize = 3;
pub const PHI: usize = 4;
pub const THETA: usize = 5;
pub const SIGMA: usize = 6;
pub const ETA: usize = 7;

pub const COMPONENT_NAMES: [&str; 8] = ["v", "u", "z", "y", "phi", "theta", "sigma", "eta"];

/// Tolerance of the equal-speeds test, relative to max(k1, k2, k3).
pub const EQUAL_SPEEDS_RTOL: f64 = 1e-12;

/// Which equation carries the thermal coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tau {
    Tau1,
    Tau2,
    Tau3,
}

impl Tau {
    pub fn weights(self) -> [f64; 3] {
        match self {
            Tau::Tau1 => [1.0, 0.0, 0.0],
            Tau::Tau2 => [0.0, 1.0, 0.0],
            Tau::Tau3 => [0.0, 0.0, 1.0],
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Tau::Tau1 => 1,
            Tau::Tau2 => 2,
            Tau::Tau3 => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Tau> {
        match i {
            1 => Some(Tau::Tau1),
            2 => Some(Tau::Tau2),
            3 => Some(Tau::Tau3),
            _ => None,
        }
    }
}

/// Order of the heat-flux damping term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Damping {
    /// `-k5 q_xxt`, damping weight xi^2.
    TypeIII,
    /// `+k5 q_t`, damping weight 1.
    Frictional,
}

impl Damping {
    pub fn eps0(self) -> i32 {
        match self {
            Damping::TypeIII => 1,
            Damping::Frictional => 0,
        }
    }

    /// `xi^(2 eps0)`, with `0^0 = 1`.
    pub fn weight(self, xi: f64) -> f64 {
        match self {
            Damping::TypeIII => xi * xi,
            Damping::Frictional => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Damping::TypeIII => "type3",
            Damping::Frictional => "frictional",
        }
    }
}

/// Differential order of the thermal coupling terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Coupling {
    FirstOrder,
    ZeroOrder,
}

impl Coupling {
    pub fn label(self) -> &'static str {
        match self {
            Coupling::FirstOrder => "first",
            Coupling::ZeroOrder => "zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemConfig {
    pub k: [f64; 5],
    pub gamma: f64,
    pub tau: Tau,
    pub damping: Damping,
    pub coupling: Coupling,
}

impl SystemConfig {
    pub fn new(k: [f64; 5], gamma: f64, tau: Tau, damping: Damping, coupling: Coupling) -> Result<Self> {
        for (i, &kj) in k.iter().enumerate() {
            if !kj.is_finite() || kj <= 0.0 {
                return Err(Error::InvalidConfig(format!("k{} must be positive, got {kj}", i + 1)));
            }
        }
        if !gamma.is_finite() || gamma == 0.0 {
            return Err(Error::InvalidConfig(format!("gamma must be nonzero, got {gamma}")));
        }
        Ok(SystemConfig { k, gamma, tau, damping, coupling })
    }

    pub fn k1(&self) -> f64 {
        self.k[0]
    }
    pub fn k2(&self) -> f64 {
        self.k[1]
    }
    pub fn k3(&self) -> f64 {
        self.k[2]
    }
    pub fn k4(&self) -> f64 {
        self.k[3]
    }
    pub fn k5(&self) -> f64 {
        self.k[4]
    }

    pub fn chi(&self) -> f64 {
        self.k3() - self.k2()
    }

    /// Sign of gamma, as used in the `|gamma|/gamma` factors.
    pub fn gamma_sign(&self) -> f64 {
        if self.gamma > 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn equal_speeds(&self) -> bool {
        let (k1, k2, k3) = (self.k1(), self.k2(), self.k3());
        let tol = EQUAL_SPEEDS_RTOL * k1.max(k2).max(k3);
        (k1 - k2).abs() <= tol && (k1 - k3).abs() <= tol
    }

    /// Tau1 with k2 = k3 has a purely imaginary eigenvalue at every frequency.
    pub fn is_stable(&self) -> bool {
        !(self.tau == Tau::Tau1 && self.chi() == 0.0)
    }

    pub fn eps0(&self) -> i32 {
        self.damping.eps0()
    }

    /// Rate-table cell: damping and coupling.
    pub fn cell_name(&self) -> &'static str {
        match (self.coupling, self.damping) {
            (Coupling::FirstOrder, Damping::TypeIII) => "type3/first",
            (Coupling::FirstOrder, Damping::Frictional) => "frictional/first",
            (Coupling::ZeroOrder, Damping::TypeIII) => "type3/zero",
            (Coupling::ZeroOrder, Damping::Frictional) => "frictional/zero",
        }
    }

    pub fn case_label(&self) -> String {
        format!("tau{}", self.tau.index())
    }

    pub fn variant_label(&self) -> String {
        self.cell_name().to_string()
    }

    /// Energy equivalence constants: alpha1 |s|^2 <= E(s) <= alpha2 |s|^2.
    pub fn alphas(&self) -> (f64, f64) {
        let vals = [self.k1(), self.k2(), self.k3(), self.k4(), 1.0];
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (0.5 * lo, 0.5 * hi)
    }
}

/// Eight complex amplitudes at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub amps: Vec8,
    pub xi: f64,
}

impl ModeState {
    pub fn new(amps: Vec8, xi: f64) -> Self {
        ModeState { amps, xi }
    }

    pub fn unit(index: usize, xi: f64) -> Self {
        let mut amps = Vec8::zeros();
        amps[index] = Complex64::new(1.0, 0.0);
        ModeState { amps, xi }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Hermitian 8x8 matrix `M` defining the quadratic observable `s* M s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm {
    pub mat: Mat8,
}

impl Default for HermitianForm {
    fn default() -> Self {
        Self::zero()
    }
}

impl HermitianForm {
    pub fn zero() -> Self {
        HermitianForm { mat: Mat8::zeros() }
    }

    pub fn from_matrix(mat: Mat8) -> Self {
        HermitianForm { mat }
    }

    /// Hermitian part `(M + M*)/2` of an arbitrary matrix.
    pub fn hermitian_part(m: &Mat8) -> Self {
        HermitianForm { mat: (m + m.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    /// Adds the monomial `Re(c * s_a * conj(s_b))`.
    pub fn add_re(&mut self, c: Complex64, a: usize, b: usize) {
        if a == b {
            self.mat[(a, a)] += Complex64::new(c.re, 0.0);
        } else {
            self.mat[(b, a)] += c * 0.5;
            self.mat[(a, b)] += c.conj() * 0.5;
        }
    }

    pub fn eval(&self, s: &Vec8) -> f64 {
        (s.adjoint() * self.mat * s)[(0, 0)].re
    }

    pub fn scaled(&self, c: f64) -> Self {
        HermitianForm { mat: self.mat * Complex64::new(c, 0.0) }
    }

    pub fn plus(&self, other: &HermitianForm) -> Self {
        HermitianForm { mat: self.mat + other.mat }
    }

    pub fn minus(&self, other: &HermitianForm) -> Self {
        HermitianForm { mat: self.mat - other.mat }
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.norm()
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn asymmetry(&self) -> f64 {
        (self.mat - self.mat.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Hermitian part of `A* M + M A`, the matrix of `d/dt (s* M s)` along `s' = A s`.
    pub fn lie_derivative(&self, a: &Mat8) -> Self {
        HermitianForm::hermitian_part(&(a.adjoint() * self.mat + self.mat * a))
    }

    pub fn eigenvalues(&self) -> [f64; 8] {
        let h = HermitianForm::hermitian_part(&self.mat).mat;
        let ev = h.symmetric_eigenvalues();
        let mut out = [0.0; 8];
        for (o, e) in out.iter_mut().zip(ev.iter()) {
            *o = *e;
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[7]
    }
}

/// Real coefficient matrices with `A(xi) = xi^2 A2 - i xi A1 - A0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMatrices {
    pub a0: RMat8,
    pub a1: RMat8,
    pub a2: RMat8,
    pub xi: f64,
    pub a: Mat8,
}

pub fn generator_parts(cfg: &SystemConfig) -> (RMat8, RMat8, RMat8) {
    let [k1, k2, k3, k4, k5] = cfg.k;
    let g = cfg.gamma;
    let [t1, t2, t3] = cfg.tau.weights();
    let mut a0 = RMat8::zeros();
    let mut a1 = RMat8::zeros();
    let mut a2 = RMat8::zeros();

    a1[(V, U)] = -1.0;
    a0[(V, Y)] = -1.0;
    a0[(V, THETA)] = -1.0;

    a1[(U, V)] = -k1;
    a1[(Z, Y)] = -1.0;
    a1[(Y, Z)] = -k2;
    a0[(Y, V)] = k1;
    a1[(PHI, THETA)] = -1.0;
    a1[(THETA, PHI)] = -k3;
    a0[(THETA, V)] = k1;
    a1[(SIGMA, ETA)] = -1.0;
    a1[(ETA, SIGMA)] = -k4;

    match cfg.coupling {
        Coupling::FirstOrder => {
            a1[(U, ETA)] = t1 * g;
            a1[(Y, ETA)] = t2 * g;
            a1[(THETA, ETA)] = t3 * g;
            a1[(ETA, U)] = t1 * g;
            a1[(ETA, Y)] = t2 * g;
            a1[(ETA, THETA)] = t3 * g;
        }
        Coupling::ZeroOrder => {
            a0[(U, ETA)] = t1 * g;
            a0[(Y, ETA)] = t2 * g;
            a0[(THETA, ETA)] = t3 * g;
            a0[(ETA, U)] = -t1 * g;
            a0[(ETA, Y)] = -t2 * g;
            a0[(ETA, THETA)] = -t3 * g;
        }
    }

    match cfg.damping {
        Damping::TypeIII => a2[(ETA, ETA)] = -k5,
        Damping::Frictional => a0[(ETA, ETA)] = k5,
    }
    (a0, a1, a2)
}

pub fn assemble_generator(cfg: &SystemConfig, xi: f64) -> GeneratorMatrices {
    let (a0, a1, a2) = generator_parts(cfg);
    let a = Mat8::from_fn(|i, j| Complex64::new(xi * xi * a2[(i, j)] - a0[(i, j)], -xi * a1[(i, j)]));
    GeneratorMatrices { a0, a1, a2, xi, a }
}

/// The assembled complex generator `A(xi)`.
pub fn generator(cfg: &SystemConfig, xi: f64) -> Mat8 {
    assemble_generator(cfg, xi).a
}

pub fn hermitian_energy(cfg: &SystemConfig) -> HermitianForm {
    let [k1, k2, k3, k4, _] = cfg.k;
    let d = [k1, 1.0, k2, 1.0, k3, 1.0, k4, 1.0];
    let mut mat = Mat8::zeros();
    for (i, di) in d.iter().enumerate() {
        mat[(i, i)] = Complex64::new(0.5 * di, 0.0);
    }
    HermitianForm { mat }
}

pub fn energy(cfg: &SystemConfig, s: &Vec8) -> f64 {
    hermitian_energy(cfg).eval(s)
}

/// Form whose value is `-k5 xi^(2 eps0) |eta|^2`.
pub fn dissipation_form(cfg: &SystemConfig, xi: f64) -> HermitianForm {
    let mut d = HermitianForm::zero();
    d.mat[(ETA, ETA)] = Complex64::new(-cfg.k5() * cfg.damping.weight(xi), 0.0);
    d
}

pub fn dissipation_rate(cfg: &SystemConfig, xi: f64, s: &ModeState) -> f64 {
    -cfg.k5() * cfg.damping.weight(xi) * s.amps[ETA].norm_sqr()
}

/// Parses the line-oriented `key = value` config format.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let mut k: [Option<f64>; 5] = [None; 5];
    let mut gamma = None;
    let mut tau = None;
    let mut damping = None;
    let mut coupling = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::ConfigParse { line: line_no, msg };
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| err(format!("`{key}` expects a number, got `{v}`")))
        };
        match key {
            "k1" | "k2" | "k3" | "k4" | "k5" => {
                let i = key[1..].parse::<usize>().unwrap() - 1;
                k[i] = Some(num(value)?);
            }
            "gamma" => gamma = Some(num(value)?),
            "tau" => {
                let t = value
                    .parse::<u8>()
                    .ok()
                    .and_then(Tau::from_index)
                    .ok_or_else(|| err(format!("tau must be 1, 2 or 3, got `{value}`")))?;
                tau = Some(t);
            }
            "damping" => {
                damping = Some(match value {
                    "type3" => Damping::TypeIII,
                    "frictional" => Damping::Frictional,
                    _ => return Err(err(format!("damping must be type3 or frictional, got `{value}`"))),
                })
            }
            "coupling" => {
                coupling = Some(match value {
                    "first" => Coupling::FirstOrder,
                    "zero" => Coupling::ZeroOrder,
                    _ => return Err(err(format!("coupling must be first or zero, got `{value}`"))),
                })
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        }
    }

    let missing = |name: &str| Error::InvalidConfig(format!("missing key `{name}`"));
    let mut ks = [0.0; 5];
    for (i, v) in k.iter().enumerate() {
        ks[i] = v.ok_or_else(|| missing(&format!("k{}", i + 1)))?;
    }
    SystemConfig::new(
        ks,
        gamma.ok_or_else(|| missing("gamma"))?,
        tau.ok_or_else(|| missing("tau"))?,
        damping.ok_or_else(|| missing("damping"))?,
        coupling.unwrap_or(Coupling::FirstOrder),
    )
}

/// Renders a config in the file format accepted by [`parse_config`].
pub fn format_config(cfg: &SystemConfig) -> String {
    let mut out = String::new();
    for (i, kj) in cfg.k.iter().enumerate() {
        out.push_str(&format!("k{} = {kj}\n", i + 1));
    }
    out.push_str(&format!("gamma = {}\n", cfg.gamma));
    out.push_str(&format!("tau = {}\n", cfg.tau.index()));
    out.push_str(&format!("damping = {}\n", cfg.damping.label()));
    out.push_str(&format!("coupling = {}\n", cfg.coupling.label()));
    out
}
