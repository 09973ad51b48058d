//! Exact mode propagation, spectra and the chi = 0 instability.

use nalgebra::Schur;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{generator, Mat8, ModeState, SystemConfig, Tau, Vec8};

/// `|Re lambda| <= IMAG_RTOL * (1 + |lambda|)` counts as purely imaginary.
pub const IMAG_RTOL: f64 = 1e-8;
/// Per-pair backward error bound, relative to the Frobenius norm of `A`.
pub const EIG_RESIDUAL_RTOL: f64 = 1e-10;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// `e^{A t}` for the generator at `xi`.
pub fn propagator(cfg: &SystemConfig, xi: f64, t: f64) -> Result<Mat8> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    if t < 0.0 {
        return Err(Error::Range(format!("propagation time must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(Mat8::identity());
    }
    Ok((generator(cfg, xi) * Complex64::new(t, 0.0)).exp())
}

pub fn propagate(cfg: &SystemConfig, xi: f64, s0: &ModeState, t: f64) -> Result<ModeState> {
    if s0.amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    if t == 0.0 {
        return Ok(ModeState::new(s0.amps, xi));
    }
    let p = propagator(cfg, xi, t)?;
    Ok(ModeState::new(p * s0.amps, xi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub xi: f64,
    #[serde(skip)]
    pub eigenvalues: [Complex64; 8],
    pub abscissa: f64,
    pub nearest_imaginary_gap: f64,
}

/// Eigenvalues of a dense complex matrix via the complex Schur form, sorted by
/// ascending imaginary part, then ascending real part.
pub fn eigenvalues(a: &Mat8) -> Option<[Complex64; 8]> {
    let schur = Schur::try_new(*a, SCHUR_EPS, SCHUR_MAX_ITER)?;
    let (_, t) = schur.unpack();
    let mut ev = [Complex64::new(0.0, 0.0); 8];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = t[(i, i)];
    }
    ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap().then(x.re.partial_cmp(&y.re).unwrap()));
    Some(ev)
}

/// Unit vector minimizing `|(A - lambda I) v|`: the right singular vector of the
/// smallest singular value, which stays well defined for defective eigenvalues.
pub fn eigenvector(a: &Mat8, lambda: Complex64) -> Vec8 {
    let m = a - Mat8::identity() * lambda;
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let v: Vec8 = v_t.row(k).adjoint();
    v / Complex64::new(v.norm(), 0.0)
}

pub fn eigen_residual(a: &Mat8, lambda: Complex64, v: &Vec8) -> f64 {
    (a * v - v * lambda).norm() / v.norm()
}

pub fn spectrum(cfg: &SystemConfig, xi: f64) -> Result<SpectrumResult> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    let a = generator(cfg, xi);
    let ev = eigenvalues(&a).ok_or(Error::EigenNonConvergence { xi })?;
    let tol = EIG_RESIDUAL_RTOL * a.norm();
    for &lambda in &ev {
        let v = eigenvector(&a, lambda);
        let r = eigen_residual(&a, lambda, &v);
        if !(r <= tol) {
            return Err(Error::EigenResidual { xi, residual: r });
        }
    }
    let abscissa = ev.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let gap = ev.iter().map(|l| l.re.abs()).fold(f64::INFINITY, f64::min);
    Ok(SpectrumResult { xi, eigenvalues: ev, abscissa, nearest_imaginary_gap: gap })
}

/// Spectra over a grid, in grid order.
pub fn scan_spectra(cfg: &SystemConfig, grid: &[f64]) -> Result<Vec<SpectrumResult>> {
    if grid.is_empty() {
        return Err(Error::Range("empty frequency grid".into()));
    }
    grid.par_iter().map(|&xi| spectrum(cfg, xi)).collect()
}

pub fn spectral_abscissa_scan(cfg: &SystemConfig, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    Ok(scan_spectra(cfg, grid)?.into_iter().map(|s| (s.xi, s.abscissa)).collect())
}

/// Log-spaced grid on `[xi_min, xi_max]` with `per_decade` points per decade,
/// optionally preceded by `xi = 0`.
pub fn log_grid(xi_min: f64, xi_max: f64, per_decade: usize, include_zero: bool) -> Result<Vec<f64>> {
    if !(xi_min > 0.0 && xi_max >= xi_min && xi_max.is_finite() && per_decade > 0) {
        return Err(Error::Range(format!("bad grid [{xi_min}, {xi_max}] x {per_decade}")));
    }
    let (l0, l1) = (xi_min.log10(), xi_max.log10());
    let n = ((l1 - l0) * per_decade as f64).round() as usize;
    let mut grid = Vec::with_capacity(n + 2);
    if include_zero {
        grid.push(0.0);
    }
    if n == 0 {
        grid.push(xi_min);
        return Ok(grid);
    }
    for i in 0..=n {
        grid.push(10f64.powf(l0 + (l1 - l0) * i as f64 / n as f64));
    }
    Ok(grid)
}

/// Default grid: `[1e-2, 1e2]`, 200 points per decade, plus `xi = 0`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 200, true).expect("static grid")
}

/// Closed-form `det(lambda I - A)` for Tau1 with `k2 = k3`.
pub fn characteristic_det_chi0(cfg: &SystemConfig, xi: f64, lambda: Complex64) -> Result<Complex64> {
    if cfg.tau != Tau::Tau1 || cfg.chi() != 0.0 {
        return Err(Error::CaseMismatch("closed-form determinant needs tau = 1 and k2 = k3".into()));
    }
    let [k1, k2, _, k4, k5] = cfg.k;
    let g2 = cfg.gamma * cfg.gamma;
    let x2 = xi * xi;
    let d = k5 * cfg.damping.weight(xi);
    let l = lambda;
    let l2 = l * l;
    let p2 = l2 + k2 * x2;
    let (inner, heat) = match cfg.coupling {
        crate::model::Coupling::FirstOrder => {
            (l * (l + d) + (k4 + g2) * x2, l2 * (l + d) + g2 * l * x2 + k1 * x2 * (l + d))
        }
        crate::model::Coupling::ZeroOrder => (l * (l + d) + k4 * x2 + g2, l2 * (l + d) + g2 * l + k1 * x2 * (l + d)),
    };
    Ok(2.0 * k1 * l2 * p2 * inner + k4 * x2 * (l2 + k1 * x2) * p2 * p2 + l * p2 * p2 * heat)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub xi: f64,
    pub eigenvalue_re: f64,
    pub eigenvalue_im: f64,
    pub initial_norm: f64,
    pub final_norm: f64,
    pub ratio: f64,
}

/// Propagates the unit eigenvector of a purely imaginary eigenvalue to time `t_final`.
pub fn nondecay_witness(cfg: &SystemConfig, xi: f64, t_final: f64) -> Result<WitnessReport> {
    let spec = spectrum(cfg, xi)?;
    let best = spec
        .eigenvalues
        .iter()
        .copied()
        .min_by(|a, b| a.re.abs().partial_cmp(&b.re.abs()).unwrap())
        .expect("eight eigenvalues");
    if best.re.abs() > IMAG_RTOL * (1.0 + best.norm()) {
        return Err(Error::NoImaginaryEigenvalue { xi, gap: best.re.abs() });
    }
    let a = generator(cfg, xi);
    let v = eigenvector(&a, best);
    let s0 = ModeState::new(v, xi);
    let s1 = propagate(cfg, xi, &s0, t_final)?;
    let initial_norm = s0.norm_sq().sqrt();
    let final_norm = s1.norm_sq().sqrt();
    Ok(WitnessReport {
        xi,
        eigenvalue_re: best.re,
        eigenvalue_im: best.im,
        initial_norm,
        final_norm,
        ratio: final_norm / initial_norm,
    })
}
