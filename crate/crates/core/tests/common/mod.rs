#![allow(dead_code)]

use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tlab::model::{Coupling, Damping, SystemConfig, Tau, Vec8};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const TAUS: [Tau; 3] = [Tau::Tau1, Tau::Tau2, Tau::Tau3];
pub const DAMPINGS: [Damping; 2] = [Damping::TypeIII, Damping::Frictional];
pub const COUPLINGS: [Coupling; 2] = [Coupling::FirstOrder, Coupling::ZeroOrder];

pub fn random_cfg_with(r: &mut impl Rng, tau: Tau, damping: Damping, coupling: Coupling) -> SystemConfig {
    let mut k = [0.0; 5];
    for kj in k.iter_mut() {
        *kj = r.gen_range(0.3..3.0);
    }
    let mut gamma = r.gen_range(0.3..2.5);
    if r.gen_bool(0.5) {
        gamma = -gamma;
    }
    SystemConfig::new(k, gamma, tau, damping, coupling).unwrap()
}

pub fn random_cfg(r: &mut impl Rng) -> SystemConfig {
    let tau = TAUS[r.gen_range(0..3)];
    let damping = DAMPINGS[r.gen_range(0..2)];
    let coupling = COUPLINGS[r.gen_range(0..2)];
    random_cfg_with(r, tau, damping, coupling)
}

pub fn random_state(r: &mut impl Rng) -> Vec8 {
    Vec8::from_fn(|_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
}

/// Right-hand side of the mode system written out equation by equation.
pub fn mode_rhs(cfg: &SystemConfig, xi: f64, s: &Vec8) -> Vec8 {
    let [k1, k2, k3, k4, k5] = cfg.k;
    let g = cfg.gamma;
    let [t1, t2, t3] = cfg.tau.weights();
    let i = Complex64::i();
    let ix = i * xi;
    let damp = k5
        * match cfg.damping {
            Damping::TypeIII => xi * xi,
            Damping::Frictional => 1.0,
        };
    let (v, u, z, y, phi, theta, sigma, eta) = (s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7]);
    let mut out = Vec8::zeros();
    out[0] = ix * u + y + theta;
    out[2] = ix * y;
    out[4] = ix * theta;
    out[6] = ix * eta;
    match cfg.coupling {
        Coupling::FirstOrder => {
            out[1] = ix * k1 * v - ix * t1 * g * eta;
            out[3] = ix * k2 * z - k1 * v - ix * t2 * g * eta;
            out[5] = ix * k3 * phi - k1 * v - ix * t3 * g * eta;
            out[7] = ix * k4 * sigma - damp * eta - ix * g * (t1 * u + t2 * y + t3 * theta);
        }
        Coupling::ZeroOrder => {
            out[1] = ix * k1 * v - t1 * g * eta;
            out[3] = ix * k2 * z - k1 * v - t2 * g * eta;
            out[5] = ix * k3 * phi - k1 * v - t3 * g * eta;
            out[7] = ix * k4 * sigma - damp * eta + g * (t1 * u + t2 * y + t3 * theta);
        }
    }
    out
}

/// Adaptive Dormand-Prince 5(4) integration of the mode system.
pub fn rk45(cfg: &SystemConfig, xi: f64, s0: &Vec8, t_end: f64, tol: f64) -> Vec8 {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] =
        [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
    let _ = C;
    let mut t = 0.0;
    let mut y = *s0;
    let mut h = 1e-3;
    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let mut k: [Vec8; 7] = [Vec8::zeros(); 7];
        for st in 0..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(st) {
                yi += kj * Complex64::new(A[st][j] * h, 0.0);
            }
            k[st] = mode_rhs(cfg, xi, &yi);
        }
        let mut y5 = y;
        let mut y4 = y;
        for st in 0..7 {
            y5 += k[st] * Complex64::new(B5[st] * h, 0.0);
            y4 += k[st] * Complex64::new(B4[st] * h, 0.0);
        }
        let err = (y5 - y4).norm() / (tol * (1.0 + y.norm()));
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    y
}

/// Relative slack for rounding in the propagated norm when checking the certified bound.
pub const SOUNDNESS_RTOL: f64 = 1e-9;

/// Counts samples `(xi, s0, t)` with `|U(t)|^2 > c~ exp(-c f t) |U0|^2 (1 + SOUNDNESS_RTOL)`.
pub fn soundness_violations(
    cfg: &SystemConfig,
    cert: &tlab::lyapunov::DecayCertificate,
    grid: &[f64],
    samples: usize,
    seed: u64,
) -> usize {
    let mut r = rng(seed);
    let nonzero: Vec<f64> = grid.iter().copied().filter(|&x| x != 0.0).collect();
    let mut bad = 0;
    for _ in 0..samples {
        let xi = nonzero[r.gen_range(0..nonzero.len())] * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s0 = random_state(&mut r);
        let t = r.gen_range(0.0..50.0);
        let p = tlab::dynamics::propagator(cfg, xi, t).unwrap();
        let lhs = (p * s0).norm_squared();
        let f = tlab::envelope::f_of_xi(cfg, xi).unwrap();
        let rhs = cert.c_tilde * (-cert.c * f * t).exp() * s0.norm_squared();
        if lhs > rhs * (1.0 + SOUNDNESS_RTOL) {
            bad += 1;
        }
    }
    bad
}

pub fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// One configuration per cell: (tau, damping, coupling, equal speeds, chi != 0).
pub fn cell_cfg(tau: Tau, damping: Damping, coupling: Coupling, equal: bool) -> SystemConfig {
    let k = if equal { [1.0; 5] } else { [1.0, 1.0, 2.0, 1.0, 1.0] };
    SystemConfig::new(k, 1.0, tau, damping, coupling).unwrap()
}

/// Rate-table cell with its expected exponents; `low0 = None` marks an unstable cell.
pub struct Cell {
    pub cfg: SystemConfig,
    pub low0: Option<Rational64>,
    pub low_j: Rational64,
    pub high: Option<Option<Rational64>>,
}

pub fn table() -> Vec<Cell> {
    use Coupling::{FirstOrder as F, ZeroOrder as Z};
    use Damping::{Frictional as Fr, TypeIII as T3};
    let c = |tau, d, cp, eq, low0: Option<Rational64>, low_j, high| Cell {
        cfg: cell_cfg(tau, d, cp, eq),
        low0,
        low_j,
        high,
    };
    vec![
        c(Tau::Tau1, T3, F, false, Some(r(1, 12)), r(1, 6), Some(Some(r(1, 2)))),
        c(Tau::Tau1, Fr, F, false, Some(r(1, 8)), r(1, 4), Some(Some(r(1, 2)))),
        c(Tau::Tau2, T3, F, true, Some(r(1, 12)), r(1, 6), Some(None)),
        c(Tau::Tau3, T3, F, false, Some(r(1, 12)), r(1, 6), Some(Some(r(1, 4)))),
        c(Tau::Tau2, Fr, F, true, Some(r(1, 8)), r(1, 4), Some(Some(r(1, 2)))),
        c(Tau::Tau3, Fr, F, false, Some(r(1, 8)), r(1, 4), Some(Some(r(1, 4)))),
        c(Tau::Tau1, T3, Z, false, Some(r(1, 12)), r(1, 6), Some(Some(r(1, 4)))),
        c(Tau::Tau1, Fr, Z, false, Some(r(1, 8)), r(1, 4), Some(Some(r(1, 4)))),
        c(Tau::Tau3, T3, Z, true, Some(r(1, 8)), r(1, 4), Some(Some(r(1, 2)))),
        c(Tau::Tau2, Fr, Z, true, Some(r(1, 4)), r(1, 2), Some(Some(r(1, 2)))),
        c(Tau::Tau2, T3, Z, false, Some(r(1, 8)), r(1, 4), Some(Some(r(1, 6)))),
        c(Tau::Tau3, Fr, Z, false, Some(r(1, 4)), r(1, 2), Some(Some(r(1, 6)))),
        c(Tau::Tau1, T3, F, true, None, r(0, 1), None),
        c(Tau::Tau1, Fr, Z, true, None, r(0, 1), None),
    ]
}
