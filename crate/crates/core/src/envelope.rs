//! Decay envelopes `f(xi)`, their piecewise bounds, the two elementary decay
//! lemmas with explicit constants, and the rate table.

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Coupling, Damping, SystemConfig, Tau};
use crate::quadrature::{gamma_integral, integrate};

/// `f(xi) = xi^p / (1 + xi^2 + ... + xi^(2n))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnvelopeShape {
    pub numerator_power: u32,
    pub tilde_degree: u32,
}

impl EnvelopeShape {
    pub fn terms(&self) -> u32 {
        self.tilde_degree + 1
    }

    /// High-frequency decay order `2m` with `f ~ xi^(-2m)`; zero for a constant floor.
    pub fn high_decay(&self) -> u32 {
        2 * self.tilde_degree - self.numerator_power
    }
}

fn require_stable(cfg: &SystemConfig) -> Result<()> {
    if cfg.is_stable() {
        Ok(())
    } else {
        Err(Error::Unstable(format!("{} {} with chi = 0 has no decay envelope", cfg.case_label(), cfg.variant_label())))
    }
}

pub fn shape(cfg: &SystemConfig) -> Result<EnvelopeShape> {
    require_stable(cfg)?;
    let e = cfg.eps0() as u32;
    let type3 = cfg.damping == Damping::TypeIII;
    let eq = cfg.equal_speeds();
    let (numerator_power, tilde_degree) = match (cfg.coupling, cfg.tau) {
        (Coupling::FirstOrder, Tau::Tau1) => (4 + 2 * e, if type3 { 4 } else { 3 }),
        (Coupling::FirstOrder, _) => (
            4 + 2 * e,
            if eq {
                3
            } else if type3 {
                5
            } else {
                4
            },
        ),
        (Coupling::ZeroOrder, Tau::Tau1) => (4 + 2 * e, if type3 { 5 } else { 4 }),
        (Coupling::ZeroOrder, _) => (
            2 + 2 * e,
            if eq {
                if type3 {
                    3
                } else {
                    2
                }
            } else if type3 {
                5
            } else {
                4
            },
        ),
    };
    Ok(EnvelopeShape { numerator_power, tilde_degree })
}

/// `1 + xi^2 + ... + xi^(2n)` for the cell of `cfg`.
pub fn f_tilde(cfg: &SystemConfig, xi: f64) -> Result<f64> {
    let s = shape(cfg)?;
    Ok(geometric(xi * xi, s.tilde_degree))
}

fn geometric(x2: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc = acc * x2 + 1.0;
    }
    acc
}

pub fn f_of_xi(cfg: &SystemConfig, xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    let s = shape(cfg)?;
    let x = xi.abs();
    if x > 1.0 {
        // Divide through by xi^(2n) to avoid overflow at large xi.
        let y2 = 1.0 / (x * x);
        return Ok(x.powi(s.numerator_power as i32 - 2 * s.tilde_degree as i32) / geometric(y2, s.tilde_degree));
    }
    Ok(x.powi(s.numerator_power as i32) / geometric(x * x, s.tilde_degree))
}

pub fn piecewise_lower_bound(cfg: &SystemConfig, xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    let s = shape(cfg)?;
    let x = xi.abs();
    let k = 1.0 / s.terms() as f64;
    if x <= 1.0 {
        Ok(k * x.powi(s.numerator_power as i32))
    } else {
        Ok(k * x.powi(s.numerator_power as i32 - 2 * s.tilde_degree as i32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowFreqBound {
    pub integral: f64,
    pub bound: f64,
    pub constant: f64,
}

pub const LOW_FREQ_RTOL: f64 = 1e-8;

/// `int_0^1 xi^r1 e^(-r3 t xi^r2) dxi <= C (1+t)^(-(r1+1)/r2)` with the explicit constant.
pub fn low_freq_integral_bound(r1: f64, r2: f64, r3: f64, t: f64) -> Result<LowFreqBound> {
    if !(r1 > -1.0) || !(r2 > 0.0) || !(r3 > 0.0) || !(t >= 0.0) || ![r1, r2, r3, t].iter().all(|v| v.is_finite()) {
        return Err(Error::Range(format!("need r1 > -1, r2 > 0, r3 > 0, t >= 0; got ({r1}, {r2}, {r3}, {t})")));
    }
    let a = (r1 + 1.0) / r2;
    // xi = u^(1/(r1+1)) turns the integrand into e^(-r3 t u^(r2/(r1+1))) / (r1+1).
    let q = r2 / (r1 + 1.0);
    let res = integrate(|u: f64| (-r3 * t * u.powf(q)).exp(), 0.0, 1.0, LOW_FREQ_RTOL * 0.1, 0.0)?;
    let integral = res.value / (r1 + 1.0);
    let c12 = gamma_integral(a, LOW_FREQ_RTOL * 0.1)?;
    let two_a = 2f64.powf(a);
    let constant = (two_a / (r1 + 1.0)).max(two_a / (r2 * r3.powf(a)) * c12);
    let bound = constant * (1.0 + t).powf(-a);
    Ok(LowFreqBound { integral, bound, constant })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HighFreqBound {
    pub sup: f64,
    /// Maximizer; infinite when the supremum is only approached.
    pub argmax: f64,
    pub bound: f64,
}

/// `sup_{|xi| >= 1} |xi|^-s1 e^(-s2 t |xi|^-s3) <= (1 + s1/(s2 s3))^(s1/s3) (1+t)^(-s1/s3)`.
///
/// `s1 = 0` is accepted as the limiting case: the supremum 1 is approached as `|xi| -> inf`.
pub fn high_freq_sup_bound(s1: f64, s2: f64, s3: f64, t: f64) -> Result<HighFreqBound> {
    if !(s1 >= 0.0) || !(s2 > 0.0) || !(s3 > 0.0) || !(t >= 0.0) || ![s1, s2, s3, t].iter().all(|v| v.is_finite()) {
        return Err(Error::Range(format!("need s1 >= 0, s2 > 0, s3 > 0, t >= 0; got ({s1}, {s2}, {s3}, {t})")));
    }
    let bound = (1.0 + s1 / (s2 * s3)).powf(s1 / s3) * (1.0 + t).powf(-s1 / s3);
    if s1 == 0.0 {
        return Ok(HighFreqBound { sup: 1.0, argmax: f64::INFINITY, bound });
    }
    let x = ((s2 * s3 * t) / s1).powf(1.0 / s3).max(1.0);
    let sup = x.powf(-s1) * (-s2 * t * x.powf(-s3)).exp();
    Ok(HighFreqBound { sup, argmax: x, bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighBranch {
    Exponential,
    /// Exponent of `(1+t)^-(.)`, already multiplied by `ell`.
    Polynomial(Rational64),
}

impl Serialize for HighBranch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HighBranch::Exponential => s.serialize_str("exponential"),
            HighBranch::Polynomial(r) => s.serialize_str(&r.to_string()),
        }
    }
}

fn ser_rational<S: Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RatePrediction {
    pub stable: bool,
    #[serde(serialize_with = "ser_rational")]
    pub low_exponent: Option<Rational64>,
    pub high_branch: Option<HighBranch>,
    pub regularity_loss: bool,
    pub j: u32,
    pub ell: u32,
}

/// One row of the rate table: low exponent `low0 + j * low_j`, high exponent `ell * high`
/// (`None` for the exponential branch).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateRow {
    pub cell: &'static str,
    pub tau2or3: bool,
    pub equal_speeds: Option<bool>,
    pub low0: (i64, i64),
    pub low_j: (i64, i64),
    pub high: Option<(i64, i64)>,
}

const fn row(
    cell: &'static str,
    tau2or3: bool,
    equal_speeds: Option<bool>,
    low0: (i64, i64),
    low_j: (i64, i64),
    high: Option<(i64, i64)>,
) -> RateRow {
    RateRow { cell, tau2or3, equal_speeds, low0, low_j, high }
}

/// The stable rows; the two unstable rows (tau = (1,0,0), chi = 0, either coupling) carry no rates.
pub const RATE_TABLE: [RateRow; 12] = [
    row("type3/first", false, None, (1, 12), (1, 6), Some((1, 2))),
    row("frictional/first", false, None, (1, 8), (1, 4), Some((1, 2))),
    row("type3/first", true, Some(true), (1, 12), (1, 6), None),
    row("type3/first", true, Some(false), (1, 12), (1, 6), Some((1, 4))),
    row("frictional/first", true, Some(true), (1, 8), (1, 4), Some((1, 2))),
    row("frictional/first", true, Some(false), (1, 8), (1, 4), Some((1, 4))),
    row("type3/zero", false, None, (1, 12), (1, 6), Some((1, 4))),
    row("frictional/zero", false, None, (1, 8), (1, 4), Some((1, 4))),
    row("type3/zero", true, Some(true), (1, 8), (1, 4), Some((1, 2))),
    row("frictional/zero", true, Some(true), (1, 4), (1, 2), Some((1, 2))),
    row("type3/zero", true, Some(false), (1, 8), (1, 4), Some((1, 6))),
    row("frictional/zero", true, Some(false), (1, 4), (1, 2), Some((1, 6))),
];

pub fn rate_row(cfg: &SystemConfig) -> Option<&'static RateRow> {
    if !cfg.is_stable() {
        return None;
    }
    let t23 = cfg.tau != Tau::Tau1;
    let eq = cfg.equal_speeds();
    RATE_TABLE.iter().find(|r| r.cell == cfg.cell_name() && r.tau2or3 == t23 && r.equal_speeds.is_none_or(|e| e == eq))
}

pub fn predict_rates(cfg: &SystemConfig, j: u32, ell: u32) -> RatePrediction {
    let Some(r) = rate_row(cfg) else {
        return RatePrediction { stable: false, low_exponent: None, high_branch: None, regularity_loss: false, j, ell };
    };
    let rat = |(n, d): (i64, i64)| Rational64::new(n, d);
    let low = rat(r.low0) + rat(r.low_j) * Rational64::from_integer(j as i64);
    let high = match r.high {
        None => HighBranch::Exponential,
        Some(h) => HighBranch::Polynomial(rat(h) * Rational64::from_integer(ell as i64)),
    };
    RatePrediction {
        stable: true,
        low_exponent: Some(low),
        high_branch: Some(high),
        regularity_loss: matches!(high, HighBranch::Polynomial(_)),
        j,
        ell,
    }
}
