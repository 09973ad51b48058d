mod common;

use common::{random_cfg_with, rng, COUPLINGS, DAMPINGS, TAUS};
use rand::Rng;
use tlab::lyapunov::functional::{drift_form, drift_from_catalog, f1_form, f1_from_catalog, f1_scale};
use tlab::lyapunov::select_lambdas;
use tlab::model::{generator, ETA};

#[test]
fn transcription_matches_catalog_combination() {
    let mut r = rng(41);
    for tau in TAUS {
        for damping in DAMPINGS {
            for coupling in COUPLINGS {
                for _ in 0..20 {
                    let cfg = random_cfg_with(&mut r, tau, damping, coupling);
                    let p = select_lambdas(&cfg).unwrap();
                    let xi: f64 = r.gen_range(-4.0..4.0);
                    let direct = f1_form(&cfg, &p, xi).unwrap();
                    let combo = f1_from_catalog(&cfg, &p, xi).unwrap();
                    let scale = 1.0 + direct.frobenius();
                    assert!(direct.minus(&combo).frobenius() / scale < 1e-12, "{} W-sum", cfg.case_label());
                    let big = 7.0;
                    let d1 = drift_form(&cfg, &p, xi, big).unwrap();
                    let d2 = drift_from_catalog(&cfg, &p, xi, big).unwrap();
                    let scale = 1.0 + d1.frobenius();
                    assert!(
                        d1.minus(&d2).frobenius() / scale < 1e-10,
                        "{} drift {:e}",
                        cfg.case_label(),
                        d1.minus(&d2).frobenius() / scale
                    );
                }
            }
        }
    }
}

#[test]
fn non_eta_drift_is_diagonal_and_negative() {
    let mut r = rng(42);
    for tau in TAUS {
        for damping in DAMPINGS {
            for coupling in COUPLINGS {
                for _ in 0..20 {
                    let cfg = random_cfg_with(&mut r, tau, damping, coupling);
                    let p = select_lambdas(&cfg).unwrap();
                    let xi: f64 = r.gen_range(0.1..4.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
                    let lie = f1_form(&cfg, &p, xi).unwrap().lie_derivative(&generator(&cfg, xi));
                    let m = &lie.mat;
                    let scale = m.norm();
                    for a in 0..8 {
                        for b in 0..8 {
                            if a == ETA || b == ETA {
                                continue;
                            }
                            if a == b {
                                assert!(
                                    m[(a, a)].re < 0.0,
                                    "{} {} diag {a} = {} xi {xi}",
                                    cfg.case_label(),
                                    cfg.variant_label(),
                                    m[(a, a)].re
                                );
                            } else {
                                assert!(
                                    m[(a, b)].norm() / scale < 1e-12,
                                    "{} {} off ({a},{b}) = {} xi {xi}",
                                    cfg.case_label(),
                                    cfg.variant_label(),
                                    m[(a, b)]
                                );
                            }
                        }
                    }
                    let _ = f1_scale(&cfg, xi).unwrap();
                }
            }
        }
    }
}

use common::{random_state, soundness_violations};
use num_complex::Complex64;
use tlab::dynamics::{default_grid, propagator, spectral_abscissa_scan};
use tlab::envelope::f_of_xi;
use tlab::lyapunov::functional::{functional_form, perturbation_form};
use tlab::lyapunov::{certify, standard_suite};
use tlab::model::{energy, hermitian_energy, Coupling, Damping, SystemConfig, Tau};
use tlab::quadrature::integrate;
use tlab::Error;

fn tau1_s21() -> SystemConfig {
    SystemConfig::new([1.0, 1.0, 2.0, 1.0, 1.0], 1.0, Tau::Tau1, Damping::TypeIII, Coupling::FirstOrder).unwrap()
}

#[test]
fn functional_is_hermitian() {
    let mut r = rng(43);
    for _ in 0..200 {
        let cfg = common::random_cfg(&mut r);
        let p = select_lambdas(&cfg).unwrap();
        let xi: f64 = r.gen_range(-10.0..10.0);
        let m = functional_form(&cfg, &p, xi, r.gen_range(1.0..100.0)).unwrap();
        assert!(m.asymmetry() <= 1e-14 * (1.0 + m.frobenius()));
    }
}

#[test]
fn perturbation_within_six_c2() {
    let cfg = tau1_s21();
    let p = select_lambdas(&cfg).unwrap();
    let grid = default_grid();
    let h = hermitian_energy(&cfg);
    let hinv: Vec<f64> = (0..8).map(|i| 1.0 / h.mat[(i, i)].re.sqrt()).collect();
    let ratio = |xi: f64| {
        let pf = perturbation_form(&cfg, &p, xi).unwrap();
        let w = tlab::model::Mat8::from_fn(|a, b| pf.mat[(a, b)] * hinv[a] * hinv[b]);
        tlab::model::HermitianForm::from_matrix(w).eigenvalues().iter().fold(0.0f64, |m, e| m.max(e.abs()))
    };
    let c2 = grid.iter().map(|&x| ratio(x)).fold(0.0, f64::max);
    let mut r = rng(44);
    for _ in 0..500 {
        let xi = grid[r.gen_range(0..grid.len())];
        let s = random_state(&mut r);
        let lhs = perturbation_form(&cfg, &p, xi).unwrap().eval(&s).abs();
        assert!(lhs <= 6.0 * c2 * energy(&cfg, &s) * (1.0 + 1e-12));
    }
}

#[test]
fn chi_zero_is_rejected() {
    let cfg = SystemConfig::new([1.0; 5], 1.0, Tau::Tau1, Damping::TypeIII, Coupling::FirstOrder).unwrap();
    assert!(matches!(certify(&cfg, &default_grid()), Err(Error::Unstable(_))));
}

#[test]
fn tau1_certificate_is_sound() {
    let cfg = tau1_s21();
    let grid = default_grid();
    let cert = certify(&cfg, &grid).unwrap();
    assert!(cert.c > 0.0 && cert.c_tilde >= 1.0);
    assert!(cert.max_eig_margin <= 1e-8);
    assert_eq!(soundness_violations(&cfg, &cert, &grid, 200, 45), 0);
}

#[test]
fn certified_rate_below_spectral_bound() {
    let grid = default_grid();
    for cfg in standard_suite() {
        let cert = certify(&cfg, &grid).unwrap();
        for (xi, a) in spectral_abscissa_scan(&cfg, &grid).unwrap() {
            if xi == 0.0 {
                continue;
            }
            let f = f_of_xi(&cfg, xi).unwrap();
            assert!(cert.c * f <= -a * (1.0 + 1e-6), "{} {} xi {xi}", cert.case, cert.variant);
        }
    }
}

#[test]
fn lyapunov_functional_is_monotone() {
    let grid = default_grid();
    let mut r = rng(46);
    for cfg in standard_suite().into_iter().step_by(3) {
        let cert = certify(&cfg, &grid).unwrap();
        let p = cert.lambda_params;
        for _ in 0..3 {
            let xi = grid[1 + r.gen_range(0..grid.len() - 1)];
            let s0 = random_state(&mut r);
            let m = functional_form(&cfg, &p, xi, cert.big_lambda).unwrap();
            let f = f_of_xi(&cfg, xi).unwrap();
            let at = |t: f64| propagator(&cfg, xi, t).unwrap() * s0;
            let times: Vec<f64> = (0..50).map(|k| k as f64).collect();
            let mut prev = m.eval(&s0);
            for w in times.windows(2) {
                let e_int = integrate(|t| energy(&cfg, &at(t)), w[0], w[1], 1e-12, 0.0).unwrap().value;
                let next = m.eval(&at(w[1]));
                let step = next - prev + cert.c1 * f * e_int;
                assert!(step <= 1e-8 * prev.abs(), "{} {} xi {xi}: {step:e}", cert.case, cert.variant);
                prev = next;
            }
        }
    }
}

#[test]
fn forms_scale_with_modulus_squared() {
    let mut r = rng(47);
    let cfg = tau1_s21();
    let p = select_lambdas(&cfg).unwrap();
    for _ in 0..100 {
        let xi: f64 = r.gen_range(-5.0..5.0);
        let s = random_state(&mut r);
        let a = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let m = functional_form(&cfg, &p, xi, 16.0).unwrap();
        let k = a.norm_sqr();
        assert!((m.eval(&(s * a)) - k * m.eval(&s)).abs() <= 1e-12 * (1.0 + k * m.eval(&s).abs()));
        assert!((energy(&cfg, &(s * a)) - k * energy(&cfg, &s)).abs() <= 1e-12 * (1.0 + k * energy(&cfg, &s)));
    }
}
