//! Whole-line solutions through Plancherel: `|d^j U(t)|^2 = int xi^(2j) |e^(A t) U0^(xi)|^2 dxi`.

use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{default_grid, eigenvector, propagator};
use crate::envelope::{predict_rates, shape, HighBranch};
use crate::error::{Error, Result};
use crate::lyapunov::certify;
use crate::model::{generator, SystemConfig, Tau, Vec8};
use crate::quadrature::integrate_panels;

/// Relative accuracy of every frequency integral.
pub const NORM_RTOL: f64 = 1e-6;
/// Size of the dropped Gaussian tail of the integrand.
pub const TAIL_CUTOFF: f64 = 1e-16;
pub const TAIL_WINDOW: f64 = 0.5;
pub const MIN_TAIL_POINTS: usize = 8;
/// Largest tail slope of `log(norm / envelope)` accepted as bounded.
pub const RATIO_SLOPE_TOL: f64 = 0.01;

/// One component of the initial datum, `a e^(-x^2/w^2)` or its `m`-th derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Zero,
    Gaussian { amplitude: f64, width: f64 },
    GaussianDerivative { order: u32, amplitude: f64, width: f64 },
}

/// Physicists' Hermite polynomial `H_n(s)`.
pub fn hermite(n: u32, s: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * s);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * s * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Zeros of `H_n`, ascending, from the symmetric Jacobi matrix.
fn hermite_zeros(n: u32) -> Vec<f64> {
    let n = n as usize;
    let j = DMatrix::from_fn(n, n, |a, b| if a.abs_diff(b) == 1 { (a.max(b) as f64 / 2.0).sqrt() } else { 0.0 });
    let mut z: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
    z.sort_by(f64::total_cmp);
    z
}

impl Profile {
    fn parts(&self) -> Option<(u32, f64, f64)> {
        match *self {
            Profile::Zero => None,
            Profile::Gaussian { amplitude, width } => Some((0, amplitude, width)),
            Profile::GaussianDerivative { order, amplitude, width } => Some((order, amplitude, width)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.parts() {
            Some((_, a, w)) if !(a.is_finite() && w.is_finite() && w > 0.0) => {
                Err(Error::InvalidConfig(format!("profile needs finite amplitude and positive width, got ({a}, {w})")))
            }
            _ => Ok(()),
        }
    }

    /// Spatial value `a (-1)^m w^-m H_m(x/w) e^(-x^2/w^2)`.
    pub fn value(&self, x: f64) -> f64 {
        let Some((m, a, w)) = self.parts() else { return 0.0 };
        let s = x / w;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        a * sign * w.powi(-(m as i32)) * hermite(m, s) * (-s * s).exp()
    }

    /// Unitary transform `(2 pi)^(-1/2) int e^(-i x xi) u(x) dx = (i xi)^m (a w / sqrt 2) e^(-w^2 xi^2 / 4)`.
    pub fn transform(&self, xi: f64) -> Complex64 {
        let Some((m, a, w)) = self.parts() else { return Complex64::new(0.0, 0.0) };
        Complex64::new(0.0, xi).powu(m) * (a * w / SQRT_2 * (-w * w * xi * xi / 4.0).exp())
    }

    /// `int |u| dx`, from the antiderivative `-H_(m-1)(s) e^(-s^2)` between zeros of `H_m`.
    pub fn l1_norm(&self) -> f64 {
        let Some((m, a, w)) = self.parts() else { return 0.0 };
        if m == 0 {
            return a.abs() * w * PI.sqrt();
        }
        let prim = |s: f64| hermite(m - 1, s) * (-s * s).exp();
        let mut pts = vec![0.0];
        pts.extend(hermite_zeros(m).into_iter().map(prim));
        pts.push(0.0);
        let total: f64 = pts.windows(2).map(|p| (p[1] - p[0]).abs()).sum();
        a.abs() * w.powi(1 - m as i32) * total
    }

    /// Smallest `xi >= 1` past which `xi^(2j) |u^|^2` stays below the tail cutoff.
    fn tail_xi(&self, j: u32) -> f64 {
        let Some((m, a, w)) = self.parts() else { return 1.0 };
        let p = (m + j) as i32;
        let density = |x: f64| a * a * w * w / 2.0 * x.powi(2 * p) * (-w * w * x * x / 2.0).exp();
        // Beyond the peak of the density it is decreasing.
        let mut x = (1.0f64).max(((2 * p) as f64).sqrt() / w);
        while density(x) * x > TAIL_CUTOFF {
            x *= 1.05;
        }
        x
    }
}

/// Anything with a Fourier profile whose `xi >= 0` half determines the norms.
pub trait FourierDatum: Sync {
    fn transform(&self, xi: f64) -> Vec8;
    /// Ascending panel breakpoints on `[0, xi_max]` for weight `xi^(2j)`.
    fn breakpoints(&self, j: u32) -> Vec<f64>;
}

/// Per-component Gaussian-class initial datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialDatum {
    pub components: [Profile; 8],
}

impl InitialDatum {
    pub fn new(components: [Profile; 8]) -> Result<Self> {
        for c in &components {
            c.validate()?;
        }
        Ok(InitialDatum { components })
    }

    pub fn zero() -> Self {
        InitialDatum { components: [Profile::Zero; 8] }
    }

    pub fn single(index: usize, profile: Profile) -> Result<Self> {
        let mut components = [Profile::Zero; 8];
        *components.get_mut(index).ok_or_else(|| Error::Range(format!("component {index} out of range")))? = profile;
        Self::new(components)
    }

    pub fn uniform(profile: Profile) -> Result<Self> {
        Self::new([profile; 8])
    }

    /// Sum of the component `L^1` norms.
    pub fn l1_norm(&self) -> f64 {
        self.components.iter().map(Profile::l1_norm).sum()
    }

    /// `|d^m U0|_(L^2)` by quadrature of the transform.
    pub fn derivative_l2_norm(&self, m: u32) -> Result<f64> {
        let integrand = |xi: f64| xi.powi(2 * m as i32) * self.transform(xi).norm_squared();
        let q = integrate_panels(integrand, &self.breakpoints(m), NORM_RTOL * 0.1, 1e-300)?;
        Ok((2.0 * q.value).sqrt())
    }

    fn min_width(&self) -> f64 {
        self.components.iter().filter_map(Profile::parts).map(|(_, _, w)| w).fold(f64::INFINITY, f64::min)
    }
}

impl FourierDatum for InitialDatum {
    fn transform(&self, xi: f64) -> Vec8 {
        Vec8::from_fn(|i, _| self.components[i].transform(xi))
    }

    fn breakpoints(&self, j: u32) -> Vec<f64> {
        let xi_max = self.components.iter().map(|c| c.tail_xi(j)).fold(1.0, f64::max);
        let mut b = vec![0.0];
        b.extend((-4..=0).map(|e| 10f64.powi(e)).filter(|&x| x < xi_max));
        let w = self.min_width();
        let step = if w.is_finite() { 0.5 / w } else { 1.0 };
        let mut x = 1.0 + step;
        while x < xi_max {
            b.push(x);
            x += step;
        }
        b.push(xi_max);
        b
    }
}

/// Datum concentrated near `+-xi0`, built from the eigenvector of the purely imaginary
/// eigenvalue `i sqrt(k2) xi` of an unstable `chi = 0` configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBandDatum {
    pub cfg: SystemConfig,
    pub xi0: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl EigenBandDatum {
    pub fn new(cfg: SystemConfig, xi0: f64, width: f64, amplitude: f64) -> Result<Self> {
        if cfg.tau != Tau::Tau1 || cfg.is_stable() {
            return Err(Error::CaseMismatch("eigen-band datum needs tau = (1,0,0) with chi = 0".into()));
        }
        if !(xi0 > 0.0 && width > 0.0 && xi0.is_finite() && width.is_finite() && amplitude.is_finite()) {
            return Err(Error::Range(format!("bad band ({xi0}, {width}, {amplitude})")));
        }
        Ok(EigenBandDatum { cfg, xi0, width, amplitude })
    }
}

impl FourierDatum for EigenBandDatum {
    fn transform(&self, xi: f64) -> Vec8 {
        if xi < 0.0 {
            return self.transform(-xi).map(|c| c.conj());
        }
        let d = (xi - self.xi0) / self.width;
        let bump = self.amplitude * (-0.5 * d * d).exp();
        if bump < 1e-300 {
            return Vec8::zeros();
        }
        let lambda = Complex64::new(0.0, self.cfg.k2().sqrt() * xi);
        eigenvector(&generator(&self.cfg, xi), lambda) * Complex64::new(bump, 0.0)
    }

    fn breakpoints(&self, _j: u32) -> Vec<f64> {
        let half = 12.0 * self.width;
        let lo = (self.xi0 - half).max(0.0);
        let mut b = vec![0.0];
        if lo > 0.0 {
            b.push(lo);
        }
        b.extend((1..=16).map(|k| lo + (self.xi0 + half - lo) * k as f64 / 16.0));
        b
    }
}

/// `|d^j U(t)|^2_(L^2)`, integrating `xi >= 0` and doubling by conjugate symmetry.
pub fn sobolev_norm_sq<D: FourierDatum>(cfg: &SystemConfig, datum: &D, t: f64, j: u32) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Range(format!("time must be finite and nonnegative, got {t}")));
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |xi: f64| {
        let s0 = datum.transform(xi);
        if s0.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return 0.0;
        }
        let weight = if j == 0 { 1.0 } else { xi.powi(2 * j as i32) };
        if t == 0.0 {
            return weight * s0.norm_squared();
        }
        match propagator(cfg, xi, t) {
            Ok(p) => weight * (p * s0).norm_squared(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let q = integrate_panels(integrand, &datum.breakpoints(j), NORM_RTOL, 1e-300);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(2.0 * q?.value)
}

/// `(t, |d^j U(t)|_(L^2))` for each time, computed in parallel and returned in input order.
pub fn decay_series<D: FourierDatum>(cfg: &SystemConfig, datum: &D, times: &[f64], j: u32) -> Result<Vec<(f64, f64)>> {
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Range("times must be sorted and nonnegative".into()));
    }
    times.par_iter().map(|&t| Ok((t, sobolev_norm_sq(cfg, datum, t, j)?.sqrt()))).collect()
}

/// `t = 0` followed by `n` log-spaced times on `[1, 10^4]`.
pub fn default_times(n: usize) -> Vec<f64> {
    let mut out = vec![0.0];
    if n == 1 {
        out.push(1.0);
    }
    if n > 1 {
        out.extend((0..n).map(|k| 10f64.powf(4.0 * k as f64 / (n - 1) as f64)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    pub exponent: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Least-squares slope of `log(norm)` against `log(1+t)` over the last `window` fraction.
pub fn fit_tail_exponent(series: &[(f64, f64)], window: f64) -> Result<TailFit> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Range(format!("window fraction must lie in (0, 1], got {window}")));
    }
    let n = ((series.len() as f64) * window).round() as usize;
    if n < MIN_TAIL_POINTS {
        return Err(Error::Range(format!("tail window has {n} points, need {MIN_TAIL_POINTS}")));
    }
    let tail = &series[series.len() - n..];
    if tail.iter().any(|&(t, v)| !(v > 0.0) || !v.is_finite() || !(t >= 0.0)) {
        return Err(Error::Range("tail window needs positive finite norms".into()));
    }
    let xs: Vec<f64> = tail.iter().map(|&(t, _)| t.ln_1p()).collect();
    let ys: Vec<f64> = tail.iter().map(|&(_, v)| v.ln()).collect();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Range("tail window has no spread in time".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(TailFit { exponent: slope, stderr, points: n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub t: f64,
    pub norm: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub c0: f64,
    pub max_ratio: f64,
    /// Fitted tail exponent of the norm itself.
    pub tail_slope: f64,
    /// Fitted tail exponent of `norm / envelope`.
    pub ratio_slope: f64,
    pub predicted_low: String,
    pub high_branch: String,
    /// Rate of the exponential high branch, when it applies.
    pub exponential_rate: Option<f64>,
    pub pass: bool,
    pub note: Option<String>,
    #[serde(skip)]
    pub rows: Vec<DecayRow>,
}

/// Compares the measured norms with `(1+t)^-low |U0|_1 + branch(t) |d^(j+ell) U0|_2`.
pub fn verify_theorem_bound(
    cfg: &SystemConfig,
    datum: &InitialDatum,
    j: u32,
    ell: u32,
    times: &[f64],
) -> Result<BoundReport> {
    let pred = predict_rates(cfg, j, ell);
    let (Some(low), Some(branch)) = (pred.low_exponent, pred.high_branch) else {
        return Err(Error::Unstable(format!("{} {} has no decay bound", cfg.case_label(), cfg.variant_label())));
    };
    let low_f = *low.numer() as f64 / *low.denom() as f64;
    let l1 = datum.l1_norm();
    let h = datum.derivative_l2_norm(j + ell)?;
    if !(l1 > 0.0 || h > 0.0) {
        return Err(Error::Range("zero datum has no meaningful ratio".into()));
    }
    let exponential_rate = match branch {
        HighBranch::Exponential => {
            let cert = certify(cfg, &default_grid())?;
            let floor = 1.0 / shape(cfg)?.terms() as f64;
            Some(cert.c * floor / 2.0)
        }
        HighBranch::Polynomial(_) => None,
    };
    let high = |t: f64| match branch {
        HighBranch::Exponential => (-exponential_rate.unwrap_or(0.0) * t).exp(),
        HighBranch::Polynomial(r) => (1.0 + t).powf(-(*r.numer() as f64) / *r.denom() as f64),
    };
    let series = decay_series(cfg, datum, times, j)?;
    let rows: Vec<DecayRow> = series
        .iter()
        .map(|&(t, norm)| {
            let envelope = (1.0 + t).powf(-low_f) * l1 + high(t) * h;
            DecayRow { t, norm, envelope, ratio: norm / envelope }
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let ratios: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.ratio)).collect();
    let ratio_slope = fit_tail_exponent(&ratios, TAIL_WINDOW)?.exponent;
    let tail_slope = fit_tail_exponent(&series, TAIL_WINDOW)?.exponent;
    let note = (pred.regularity_loss && ell == 0).then(|| "boundedness check only".to_string());
    Ok(BoundReport {
        c0: max_ratio,
        max_ratio,
        tail_slope,
        ratio_slope,
        predicted_low: low.to_string(),
        high_branch: match branch {
            HighBranch::Exponential => "exponential".into(),
            HighBranch::Polynomial(r) => r.to_string(),
        },
        exponential_rate,
        pass: max_ratio.is_finite() && ratio_slope <= RATIO_SLOPE_TOL,
        note,
        rows,
    })
}
