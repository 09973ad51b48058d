mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{cell_cfg, random_cfg_with, random_state, rng, soundness_violations, table, COUPLINGS, DAMPINGS, TAUS};
use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use tlab::dynamics::{
    characteristic_det_chi0, default_grid, eigenvalues, log_grid, nondecay_witness, propagate, spectral_abscissa_scan,
};
use tlab::envelope::{
    f_of_xi, high_freq_sup_bound, low_freq_integral_bound, piecewise_lower_bound, predict_rates, shape, HighBranch,
};
use tlab::fullline::{default_times, verify_theorem_bound, InitialDatum, Profile};
use tlab::lyapunov::catalog::{residual_of, Block};
use tlab::lyapunov::{catalog, certify, identity_residual, standard_suite, IDENTITY_TOL};
use tlab::model::{
    dissipation_rate, energy, generator, hermitian_energy, Coupling, Damping, ModeState, SystemConfig, Tau,
};

const AC1_DRAWS: usize = 100;
const AC1_MIN_ENTRIES: usize = 28;
const MUTATION_FLOOR: f64 = 1e-3;
const AC1_BUDGET: Duration = Duration::from_secs(30);

const AC2_SAMPLES: usize = 1000;
const DISSIPATION_RTOL: f64 = 1e-12;
const CONSERVATION_RTOL: f64 = 1e-10;

const AC3_SAMPLES: usize = 200;
const AC3_BUDGET: Duration = Duration::from_secs(300);

const DET_RTOL: f64 = 1e-9;
/// Off-root control: `|det|/scale` at `lambda + 0.5i` must exceed this.
const DET_CONTROL_FLOOR: f64 = 1e-7;
const ABSCISSA_FLOOR: f64 = -1e-10;
const WITNESS_TOL: f64 = 1e-6;
const WITNESS_TIME: f64 = 100.0;

/// Recorded `inf_{xi in [1, 100]} -abscissa` for Tau2, TypeIII, FirstOrder, unit coefficients.
const DELTA_BASELINE: f64 = 2.026_663_645_187_118_7e-2;
const DELTA_RTOL: f64 = 1e-6;
/// Tolerance on `xi^4 f(xi) -> 1` evaluated at `xi = 1e4`.
const HIGH_LIMIT_TOL: f64 = 1e-6;

const C0_CEILING: f64 = 10.0;
const SLOPE_SLACK: f64 = 0.02;
const AC8_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn tau_for(block: Block, r: &mut impl Rng) -> Tau {
    match block {
        Block::Tau1 => Tau::Tau1,
        Block::Tau2 => Tau::Tau2,
        Block::Tau3 => Tau::Tau3,
        Block::Tau23 => TAUS[1 + r.gen_range(0..2)],
        Block::Common => TAUS[r.gen_range(0..3)],
    }
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let cat = catalog();
    let mut r = rng(101);
    let mut worst: f64 = 0.0;
    let mut worst_name = "";
    let mut undetected = Vec::new();
    let mut mutations = 0;
    for entry in &cat {
        for _ in 0..AC1_DRAWS {
            let tau = tau_for(entry.block, &mut r);
            let damping = DAMPINGS[r.gen_range(0..2)];
            let cfg = random_cfg_with(&mut r, tau, damping, entry.coupling);
            let xi = r.gen_range(-5.0..5.0);
            let res = identity_residual(entry, &cfg, xi).unwrap();
            if res > worst {
                worst = res;
                worst_name = entry.name;
            }
        }
        let tau = tau_for(entry.block, &mut r);
        let damping = DAMPINGS[r.gen_range(0..2)];
        let cfg = random_cfg_with(&mut r, tau, damping, entry.coupling);
        let xi = r.gen_range(0.5..2.0);
        let (w, rhs) = entry.terms(&cfg, xi);
        for k in 0..rhs.len() {
            if rhs[k].c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut bad = rhs.clone();
            bad[k].c = -bad[k].c;
            mutations += 1;
            if residual_of(&cfg, xi, &w, &bad) <= MUTATION_FLOOR {
                undetected.push(format!("{}[{k}]", entry.name));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = cat.len() >= AC1_MIN_ENTRIES && worst <= IDENTITY_TOL && undetected.is_empty() && elapsed < AC1_BUDGET;
    outcome(
        pass,
        format!(
            "{} entries, worst residual {worst:.2e} ({worst_name}), {}/{mutations} sign flips undetected {undetected:?}, {:.1}s",
            cat.len(),
            undetected.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn ac2() -> Outcome {
    let mut r = rng(102);
    let mut worst: f64 = 0.0;
    for k in 0..AC2_SAMPLES {
        let cfg = random_cfg_with(&mut r, TAUS[k % 3], DAMPINGS[(k / 3) % 2], COUPLINGS[(k / 6) % 2]);
        let xi = r.gen_range(1e-3..10.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s = random_state(&mut r);
        let lie = hermitian_energy(&cfg).lie_derivative(&generator(&cfg, xi)).eval(&s);
        let formula = -cfg.k5() * cfg.damping.weight(xi) * s[tlab::model::ETA].norm_sqr();
        let direct = dissipation_rate(&cfg, xi, &ModeState::new(s, xi));
        worst = worst.max((lie - formula).abs() / formula.abs()).max((direct - formula).abs() / formula.abs());
    }
    let mut drift: f64 = 0.0;
    for _ in 0..50 {
        let (tau, coupling) = (TAUS[r.gen_range(0..3)], COUPLINGS[r.gen_range(0..2)]);
        let cfg = random_cfg_with(&mut r, tau, Damping::TypeIII, coupling);
        let s0 = ModeState::new(random_state(&mut r), 0.0);
        let e0 = energy(&cfg, &s0.amps);
        for t in [1.0, 10.0, 100.0] {
            let e = energy(&cfg, &propagate(&cfg, 0.0, &s0, t).unwrap().amps);
            drift = drift.max((e - e0).abs() / e0);
        }
    }
    outcome(
        worst <= DISSIPATION_RTOL && drift <= CONSERVATION_RTOL,
        format!("dissipation rel err {worst:.2e} over {AC2_SAMPLES} samples, xi = 0 energy drift {drift:.2e}"),
    )
}

fn ac3() -> Outcome {
    let start = Instant::now();
    let grid = default_grid();
    let mut failures = Vec::new();
    let mut violations = 0;
    let mut min_c = f64::INFINITY;
    for (k, cfg) in standard_suite().iter().enumerate() {
        match certify(cfg, &grid) {
            Ok(cert) => {
                min_c = min_c.min(cert.c);
                violations += soundness_violations(cfg, &cert, &grid, AC3_SAMPLES, 300 + k as u64);
            }
            Err(e) => failures.push(format!("{} {}: {e}", cfg.case_label(), cfg.variant_label())),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && violations == 0 && elapsed < AC3_BUDGET,
        format!(
            "{} configs, {} certify failures {failures:?}, {violations} bound violations, min c {min_c:.3e}, {:.1}s",
            standard_suite().len(),
            failures.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Natural size of `det(lambda I - A)`: the product of `|lambda| + |mu|` over eigenvalues `mu` of `A`.
fn det_scale(cfg: &SystemConfig, xi: f64, lambda: Complex64) -> f64 {
    let mu = eigenvalues(&generator(cfg, xi)).expect("schur converges");
    mu.iter().map(|m| lambda.norm() + m.norm()).product()
}

fn ac4() -> Outcome {
    let mut r = rng(104);
    let mut worst_det: f64 = 0.0;
    let mut min_control = f64::INFINITY;
    let mut min_abscissa = f64::INFINITY;
    let mut worst_witness: f64 = 0.0;
    let mut max_perturbed = f64::NEG_INFINITY;
    let grid = default_grid();
    for damping in DAMPINGS {
        for coupling in COUPLINGS {
            let mut random = random_cfg_with(&mut r, Tau::Tau1, damping, coupling);
            random.k[2] = random.k[1];
            for _ in 0..50 {
                let xi = r.gen_range(0.05..5.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
                let lambda = Complex64::new(0.0, random.k2().sqrt() * xi);
                let d = characteristic_det_chi0(&random, xi, lambda).unwrap();
                worst_det = worst_det.max(d.norm() / det_scale(&random, xi, lambda));
                let off = lambda + Complex64::new(0.0, 0.5);
                let control = characteristic_det_chi0(&random, xi, off).unwrap();
                min_control = min_control.min(control.norm() / det_scale(&random, xi, off));
            }
            let lambda = Complex64::new(0.0, (2.0 * random.k1()).sqrt());
            let d = characteristic_det_chi0(&random, 0.0, lambda).unwrap();
            worst_det = worst_det.max(d.norm() / det_scale(&random, 0.0, lambda));

            let cfg = SystemConfig::new([1.0; 5], 1.0, Tau::Tau1, damping, coupling).unwrap();
            let scan = spectral_abscissa_scan(&cfg, &grid).unwrap();
            min_abscissa = scan.iter().map(|p| p.1).fold(min_abscissa, f64::min);
            let w = nondecay_witness(&cfg, 1.0, WITNESS_TIME).unwrap();
            worst_witness = worst_witness.max((w.ratio - 1.0).abs());

            let mut perturbed = cfg;
            perturbed.k[2] = cfg.k[1] + 0.1;
            let scan = spectral_abscissa_scan(&perturbed, &grid).unwrap();
            max_perturbed = scan.iter().filter(|p| p.0 != 0.0).map(|p| p.1).fold(max_perturbed, f64::max);
        }
    }
    let pass = worst_det <= DET_RTOL
        && min_control >= DET_CONTROL_FLOOR
        && min_abscissa >= ABSCISSA_FLOOR
        && worst_witness <= WITNESS_TOL
        && max_perturbed < 0.0;
    outcome(
        pass,
        format!(
            "|det|/scale {worst_det:.2e} (off-root control {min_control:.2e}), min abscissa {min_abscissa:.2e}, witness |ratio-1| {worst_witness:.2e}, perturbed max abscissa {max_perturbed:.2e}"
        ),
    )
}

fn ac5() -> Outcome {
    let eq = SystemConfig::new([1.0; 5], 1.0, Tau::Tau2, Damping::TypeIII, Coupling::FirstOrder).unwrap();
    let band = log_grid(1.0, 100.0, 200, false).unwrap();
    let delta = spectral_abscissa_scan(&eq, &band).unwrap().iter().map(|p| -p.1).fold(f64::INFINITY, f64::min);
    let delta_ok = delta > 0.0 && (delta - DELTA_BASELINE).abs() <= DELTA_RTOL * DELTA_BASELINE;

    let uneq =
        SystemConfig::new([1.0, 1.0, 2.0, 1.0, 1.0], 1.0, Tau::Tau2, Damping::TypeIII, Coupling::FirstOrder).unwrap();
    let s = shape(&uneq).unwrap();
    let grid = default_grid();
    let below = grid
        .iter()
        .filter(|&&xi| xi != 0.0 && f_of_xi(&uneq, xi).unwrap() < piecewise_lower_bound(&uneq, xi).unwrap())
        .count();
    let xi: f64 = 1e4;
    let limit = xi.powi(4) * f_of_xi(&uneq, xi).unwrap();
    let cert = certify(&uneq, &grid);
    let pass = delta_ok
        && s.high_decay() == 4
        && s.tilde_degree == 5
        && below == 0
        && (limit - 1.0).abs() <= HIGH_LIMIT_TOL
        && cert.is_ok();
    outcome(
        pass,
        format!(
            "delta {delta:.12e} (baseline {DELTA_BASELINE:.12e}), k3 = 2: high decay xi^-{}, f~ degree {}, {below} piecewise violations, xi^4 f(1e4) = {limit:.9}, certificate {}",
            s.high_decay(),
            s.tilde_degree,
            match &cert {
                Ok(c) => format!("c = {:.3e}", c.c),
                Err(e) => format!("failed: {e}"),
            }
        ),
    )
}

fn ac6() -> Outcome {
    let cells = table();
    let mut mismatches = Vec::new();
    for cell in &cells {
        let label = format!("{} {}", cell.cfg.case_label(), cell.cfg.variant_label());
        for j in 0..4u32 {
            for ell in 1..4u32 {
                let p = predict_rates(&cell.cfg, j, ell);
                let Some(l0) = cell.low0 else {
                    if p.stable || p.low_exponent.is_some() || p.high_branch.is_some() {
                        mismatches.push(format!("{label}: unstable cell predicted rates"));
                    }
                    continue;
                };
                let low = l0 + cell.low_j * Rational64::from_integer(j as i64);
                let high = match cell.high.flatten() {
                    None => HighBranch::Exponential,
                    Some(h) => HighBranch::Polynomial(h * Rational64::from_integer(ell as i64)),
                };
                if p.low_exponent != Some(low) || p.high_branch != Some(high) {
                    mismatches.push(format!("{label} j {j} ell {ell}: table"));
                }
                let s = shape(&cell.cfg).unwrap();
                let m = s.high_decay() as i64 / 2;
                let from_shape = Rational64::new(1 + 2 * j as i64, 2 * s.numerator_power as i64);
                let high_shape = if m == 0 {
                    HighBranch::Exponential
                } else {
                    HighBranch::Polynomial(Rational64::new(ell as i64, 2 * m))
                };
                if p.low_exponent != Some(from_shape) || p.high_branch != Some(high_shape) {
                    mismatches.push(format!("{label} j {j} ell {ell}: envelope consistency"));
                }
            }
        }
    }
    outcome(mismatches.is_empty(), format!("{} cells, mismatches {mismatches:?}", cells.len()))
}

fn ac7() -> Outcome {
    let mut g = rng(107);
    let times: Vec<f64> =
        (0..30).map(|k| if k == 0 { 0.0 } else { 10f64.powf(-2.0 + 6.0 * k as f64 / 29.0) }).collect();
    let mut violations = Vec::new();
    for _ in 0..50 {
        let (r1, r2, r3) = (g.gen_range(-0.9..6.0), g.gen_range(0.5..8.0), g.gen_range(0.01..3.0));
        let (s1, s2, s3) = (g.gen_range(0.1..6.0), g.gen_range(0.01..3.0), g.gen_range(0.5..4.0));
        for &t in &times {
            let lo = low_freq_integral_bound(r1, r2, r3, t).unwrap();
            if lo.integral > lo.bound {
                violations.push(format!("low ({r1}, {r2}, {r3}) t {t}"));
            }
            let hi = high_freq_sup_bound(s1, s2, s3, t).unwrap();
            if hi.sup > hi.bound {
                violations.push(format!("high ({s1}, {s2}, {s3}) t {t}"));
            }
        }
    }
    let cfg = cell_cfg(Tau::Tau1, Damping::TypeIII, Coupling::FirstOrder, false);
    let c = match certify(&cfg, &default_grid()) {
        Ok(cert) => cert.c,
        Err(e) => return outcome(false, format!("certificate for the instantiation failed: {e}")),
    };
    for n in 0..4u32 {
        for &t in &times {
            let lo = low_freq_integral_bound(2.0 * n as f64, 6.0, c / 5.0, t).unwrap();
            if lo.integral > lo.bound {
                violations.push(format!("low instantiation j {n} t {t}"));
            }
            let hi = high_freq_sup_bound(2.0 * n as f64, c / 5.0, 2.0, t).unwrap();
            if hi.sup > hi.bound {
                violations.push(format!("high instantiation ell {n} t {t}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("50 x 30 sweep plus instantiations with c = {c:.4e}, violations {violations:?}"),
    )
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let datum = InitialDatum::uniform(Profile::Gaussian { amplitude: 1.0, width: 1.0 }).unwrap();
    let times = default_times(31);
    let mut parts = Vec::new();
    let mut pass = true;

    let type3_first = cell_cfg(Tau::Tau1, Damping::TypeIII, Coupling::FirstOrder, false);
    match verify_theorem_bound(&type3_first, &datum, 0, 1, &times) {
        Ok(rep) => {
            let ok = rep.pass && rep.c0 <= C0_CEILING && rep.tail_slope <= -1.0 / 12.0 + SLOPE_SLACK;
            pass &= ok;
            parts.push(format!(
                "Tau1 type3/first {}: c0 {:.4}, tail {:.4}, ratio slope {:.4}",
                verdict(ok),
                rep.c0,
                rep.tail_slope,
                rep.ratio_slope
            ));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("Tau1 type3/first error: {e}"));
        }
    }

    let equal_type3_first = cell_cfg(Tau::Tau2, Damping::TypeIII, Coupling::FirstOrder, true);
    match verify_theorem_bound(&equal_type3_first, &datum, 0, 1, &times) {
        Ok(rep) => {
            let ok = rep.pass && rep.high_branch == "exponential";
            pass &= ok;
            parts.push(format!(
                "Tau2 type3/first equal speeds {}: c0 {:.4}, exp rate {:.3e}, ratio slope {:.4}",
                verdict(ok),
                rep.c0,
                rep.exponential_rate.unwrap_or(f64::NAN),
                rep.ratio_slope
            ));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("Tau2 type3/first error: {e}"));
        }
    }

    let equal_frictional_zero = cell_cfg(Tau::Tau2, Damping::Frictional, Coupling::ZeroOrder, true);
    match verify_theorem_bound(&equal_frictional_zero, &datum, 0, 1, &times) {
        Ok(rep) => {
            let ok = rep.pass && rep.tail_slope <= -0.25 + SLOPE_SLACK;
            pass &= ok;
            parts.push(format!(
                "Tau2 frictional/zero equal speeds {}: c0 {:.4}, tail {:.4}",
                verdict(ok),
                rep.c0,
                rep.tail_slope
            ));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("Tau2 frictional/zero error: {e}"));
        }
    }

    let elapsed = start.elapsed();
    pass &= elapsed < AC8_BUDGET;
    parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join("; "))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "failed"
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !o.pass {
            failed += 1;
        }
        println!("{name} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
