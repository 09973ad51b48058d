//! Search for `(Lambda, c, c~)` such that `|U(t)|^2 <= c~ exp(-c f t) |U0|^2` pointwise.

use nalgebra::SMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::functional::{drift_form, functional_form};
use super::params::{select_lambdas, LyapunovParams};
use crate::envelope::f_of_xi;
use crate::error::{Error, Result};
use crate::model::{Coupling, Damping, HermitianForm, Mat8, SystemConfig, Tau, ETA};

pub const BIG_LAMBDA_CAP: f64 = 1_099_511_627_776.0;
/// Relative width at which the bisection on `c1` stops.
pub const C1_RTOL: f64 = 1e-3;
/// Smallest `c1` tried before a grid point is declared infeasible.
pub const C1_FLOOR: f64 = 1e-12;
/// Allowed positive eigenvalue of the whitened drift, relative to `f(xi)`.
pub const DRIFT_TOL: f64 = 1e-8;

type Mat7 = SMatrix<Complex64, 7, 7>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayCertificate {
    pub case: String,
    pub variant: String,
    pub lambda_params: LyapunovParams,
    pub big_lambda: f64,
    pub c: f64,
    pub c_tilde: f64,
    pub c1: f64,
    pub c3: f64,
    pub c4: f64,
    /// Grid point that limits `c1`.
    pub worst_xi: f64,
    /// Largest drift eigenvalue at the certified `c1`, divided by `f(xi)`.
    pub max_eig_margin: f64,
}

/// `H^{-1/2} M H^{-1/2}` for the diagonal energy matrix.
fn whiten(cfg: &SystemConfig, m: &HermitianForm) -> Mat8 {
    let [k1, k2, k3, k4, _] = cfg.k;
    let w = [k1, 1.0, k2, 1.0, k3, 1.0, k4, 1.0].map(|h| (2.0 / h).sqrt());
    Mat8::from_fn(|a, b| m.mat[(a, b)] * w[a] * w[b])
}

/// Hermitian eigenvalues of the whitened drift split off along `eta`.
struct SplitDrift {
    rest: Mat7,
    coupling: [Complex64; 7],
    eta: f64,
    f: f64,
}

impl SplitDrift {
    fn new(w: &Mat8, f: f64) -> Self {
        let idx: Vec<usize> = (0..8).filter(|&i| i != ETA).collect();
        let rest = Mat7::from_fn(|a, b| w[(idx[a], idx[b])]);
        let mut coupling = [Complex64::new(0.0, 0.0); 7];
        for (c, &i) in coupling.iter_mut().zip(&idx) {
            *c = w[(i, ETA)];
        }
        SplitDrift { rest, coupling, eta: w[(ETA, ETA)].re, f }
    }

    /// Largest eigenvalue of the Schur complement of `W + c1 f I` on `eta`, over `f`;
    /// `None` if the `eta` pivot itself is not negative.
    fn margin(&self, c1: f64) -> Option<f64> {
        let shift = c1 * self.f;
        let d = self.eta + shift;
        if !(d < 0.0) {
            return None;
        }
        let s = Mat7::from_fn(|a, b| {
            let diag = if a == b { shift } else { 0.0 };
            self.rest[(a, b)] + diag - self.coupling[a] * self.coupling[b].conj() / d
        });
        let h = (s + s.adjoint()) * Complex64::new(0.5, 0.0);
        let top = h.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(top / self.f)
    }

    fn feasible(&self, c1: f64) -> bool {
        self.margin(c1).is_some_and(|m| m <= DRIFT_TOL)
    }

    /// Largest `c1` in `(0, 1]` passing the drift test, to relative `C1_RTOL`.
    fn max_c1(&self) -> Option<f64> {
        if self.feasible(1.0) {
            return Some(1.0);
        }
        if !self.feasible(C1_FLOOR) {
            return None;
        }
        let (mut lo, mut hi) = (C1_FLOOR, 1.0);
        while hi / lo > 1.0 + C1_RTOL {
            let mid = (lo * hi).sqrt();
            if self.feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

struct PointReport {
    xi: f64,
    c1: Option<f64>,
    /// Drift margin at the floor `c1`, used to name the offending point.
    floor_margin: f64,
    gen_min: f64,
    gen_max: f64,
}

fn evaluate(
    cfg: &SystemConfig,
    p: &LyapunovParams,
    xi: f64,
    big_lambda: f64,
) -> Result<(PointReport, Option<SplitDrift>)> {
    let m = functional_form(cfg, p, xi, big_lambda)?;
    let ev = HermitianForm::from_matrix(whiten(cfg, &m)).eigenvalues();
    if ev.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite("functional eigenvalues"));
    }
    let (gen_min, gen_max) = (ev[0], ev[7]);
    if xi == 0.0 {
        return Ok((PointReport { xi, c1: Some(1.0), floor_margin: f64::NEG_INFINITY, gen_min, gen_max }, None));
    }
    let f = f_of_xi(cfg, xi)?;
    let drift = drift_form(cfg, p, xi, big_lambda)?;
    let split = SplitDrift::new(&whiten(cfg, &drift), f);
    let c1 = split.max_c1();
    let floor_margin = split.margin(C1_FLOOR).unwrap_or(f64::INFINITY);
    Ok((PointReport { xi, c1, floor_margin, gen_min, gen_max }, Some(split)))
}

/// Runs the doubling search on `Lambda` and the bisection on `c1` over `grid`.
pub fn certify(cfg: &SystemConfig, grid: &[f64]) -> Result<DecayCertificate> {
    let p = select_lambdas(cfg)?;
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Range("certificate grid must be nonempty and finite".into()));
    }
    let (alpha1, alpha2) = cfg.alphas();
    let mut big_lambda = 1.0;
    loop {
        let points: Vec<(PointReport, Option<SplitDrift>)> =
            grid.par_iter().map(|&xi| evaluate(cfg, &p, xi, big_lambda)).collect::<Result<_>>()?;
        let ok = points.iter().all(|(r, _)| r.c1.is_some() && r.gen_min > 0.0);
        if ok {
            let (worst, c1) = points
                .iter()
                .filter(|(r, _)| r.xi != 0.0)
                .map(|(r, _)| (r.xi, r.c1.unwrap_or(1.0)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((0.0, 1.0));
            let c3 = points.iter().map(|(r, _)| r.gen_min).fold(f64::INFINITY, f64::min);
            let c4 = points.iter().map(|(r, _)| r.gen_max).fold(f64::NEG_INFINITY, f64::max);
            let max_eig_margin = points
                .iter()
                .filter_map(|(_, s)| s.as_ref().and_then(|s| s.margin(c1)))
                .fold(f64::NEG_INFINITY, f64::max);
            return Ok(DecayCertificate {
                case: cfg.case_label(),
                variant: cfg.variant_label(),
                lambda_params: p,
                big_lambda,
                c: c1 / c4,
                c_tilde: c4 * alpha2 / (c3 * alpha1),
                c1,
                c3,
                c4,
                worst_xi: worst,
                max_eig_margin,
            });
        }
        if big_lambda >= BIG_LAMBDA_CAP {
            let (worst_xi, eig) = points
                .iter()
                .map(|(r, _)| if r.gen_min <= 0.0 { (r.xi, -r.gen_min) } else { (r.xi, r.floor_margin) })
                .fold((f64::NAN, f64::NEG_INFINITY), |acc, (x, e)| if e > acc.1 { (x, e) } else { acc });
            return Err(Error::CertificateFailed { worst_xi, eig });
        }
        big_lambda *= 2.0;
    }
}

/// The fourteen representative configurations certified in the acceptance suite.
pub fn standard_suite() -> Vec<SystemConfig> {
    use Coupling::{FirstOrder as F, ZeroOrder as Z};
    use Damping::{Frictional as Fr, TypeIII as T3};
    let eq = [1.0; 5];
    let uneq = [1.0, 1.0, 2.0, 1.0, 1.0];
    let rows: [(Tau, Damping, Coupling, [f64; 5], f64); 14] = [
        (Tau::Tau1, T3, F, uneq, 1.0),
        (Tau::Tau1, Fr, F, uneq, -1.0),
        (Tau::Tau1, T3, Z, uneq, 1.0),
        (Tau::Tau1, Fr, Z, uneq, 0.5),
        (Tau::Tau2, T3, F, eq, 1.0),
        (Tau::Tau2, T3, F, uneq, 1.0),
        (Tau::Tau2, Fr, F, eq, -1.0),
        (Tau::Tau2, T3, Z, uneq, 1.0),
        (Tau::Tau2, Fr, Z, eq, 1.0),
        (Tau::Tau3, T3, F, eq, 1.0),
        (Tau::Tau3, T3, F, uneq, -0.5),
        (Tau::Tau3, Fr, F, uneq, 1.0),
        (Tau::Tau3, T3, Z, eq, 1.0),
        (Tau::Tau3, Fr, Z, uneq, 1.0),
    ];
    rows.iter().map(|&(tau, d, c, k, g)| SystemConfig::new(k, g, tau, d, c).expect("suite configs are valid")).collect()
}
