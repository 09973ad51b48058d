use std::fmt::Write as _;
use std::fs;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use tlab::dynamics::{characteristic_det_chi0, eigenvalues, log_grid, nondecay_witness, propagate, scan_spectra};
use tlab::envelope::{predict_rates, shape};
use tlab::fullline::{default_times, verify_theorem_bound, BoundReport, InitialDatum, Profile};
use tlab::lyapunov::{catalog, certify, identity_residual, DecayCertificate, IDENTITY_TOL};
use tlab::model::{energy, generator, parse_config, ModeState, SystemConfig, Tau, COMPONENT_NAMES};
use tlab::Error;

use crate::{Command, RunManifest};

/// Random frequency draws per identity in `identities`.
const IDENTITY_DRAWS: usize = 100;
/// Frequency of the instability evidence in `report`.
const WITNESS_XI: f64 = 1.0;
const WITNESS_TIME: f64 = 100.0;
/// `|det| / prod(|lambda| + |mu|)` accepted as a root of the characteristic polynomial.
const DET_RTOL: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute { criterion: &'static str, source: Error },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute { .. } => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Compute { criterion, source } => write!(f, "{criterion}: {source}"),
        }
    }
}

/// Input errors are usage errors; anything else failed the named check.
fn classify(criterion: &'static str) -> impl Fn(Error) -> CliError {
    move |e| match e {
        Error::ConfigParse { .. } | Error::InvalidConfig(_) | Error::Range(_) => CliError::Usage(e.to_string()),
        source => CliError::Compute { criterion, source },
    }
}

pub enum Status {
    Pass,
    Fail(Vec<String>),
}

pub struct Artifact {
    pub file: String,
    pub body: String,
}

fn artifact(file: &str, body: String) -> Artifact {
    Artifact { file: file.to_string(), body }
}

fn json_artifact<T: Serialize>(file: &str, value: &T) -> Artifact {
    let mut body = serde_json::to_string_pretty(value).expect("serializable report");
    body.push('\n');
    artifact(file, body)
}

/// Seventeen significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn load_config(m: &RunManifest) -> Result<SystemConfig, CliError> {
    let path = m.opts.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn grid(m: &RunManifest, include_zero: bool) -> Result<Vec<f64>, CliError> {
    let o = &m.opts;
    log_grid(o.xi_min, o.xi_max, o.xi_per_decade, include_zero).map_err(classify("grid"))
}

fn classification(cfg: &SystemConfig) -> Value {
    json!({
        "case": cfg.case_label(),
        "cell": cfg.cell_name(),
        "chi": cfg.chi(),
        "equal_speeds": cfg.equal_speeds(),
        "stable": cfg.is_stable(),
    })
}

pub fn run(m: &RunManifest) -> Result<(Vec<Artifact>, Status), CliError> {
    let cfg = load_config(m)?;
    match &m.command {
        Command::SimulateMode { xi, component, t_max } => simulate_mode(m, &cfg, *xi, component, *t_max),
        Command::SpectrumScan => spectrum_scan(m, &cfg),
        Command::Identities => identities(m, &cfg),
        Command::Certify => certify_cmd(m, &cfg),
        Command::Predict => predict(m, &cfg),
        Command::Decay => decay(m, &cfg),
        Command::Report => report(m, &cfg),
    }
}

fn simulate_mode(
    m: &RunManifest,
    cfg: &SystemConfig,
    xi: f64,
    component: &str,
    t_max: f64,
) -> Result<(Vec<Artifact>, Status), CliError> {
    let index = COMPONENT_NAMES
        .iter()
        .position(|&c| c == component)
        .ok_or_else(|| CliError::Usage(format!("unknown component `{component}`")))?;
    if !(t_max > 0.0 && t_max.is_finite() && xi.is_finite()) || m.opts.times < 2 {
        return Err(CliError::Usage("need finite xi, t_max > 0 and --times >= 2".into()));
    }
    let s0 = ModeState::unit(index, xi);
    let mut csv = String::from("t,energy");
    for c in COMPONENT_NAMES {
        write!(csv, ",re_{c},im_{c}").unwrap();
    }
    csv.push('\n');
    let n = m.opts.times;
    for k in 0..n {
        let t = t_max * k as f64 / (n - 1) as f64;
        let s = propagate(cfg, xi, &s0, t).map_err(classify("propagation"))?;
        write!(csv, "{},{}", num(t), num(energy(cfg, &s.amps))).unwrap();
        for a in s.amps.iter() {
            write!(csv, ",{},{}", num(a.re), num(a.im)).unwrap();
        }
        csv.push('\n');
    }
    Ok((vec![artifact("mode.csv", csv)], Status::Pass))
}

fn spectrum_scan(m: &RunManifest, cfg: &SystemConfig) -> Result<(Vec<Artifact>, Status), CliError> {
    let spectra = scan_spectra(cfg, &grid(m, true)?).map_err(classify("spectrum"))?;
    let mut csv = String::from("xi");
    for i in 1..=8 {
        write!(csv, ",re{i},im{i}").unwrap();
    }
    csv.push_str(",abscissa\n");
    for s in &spectra {
        csv.push_str(&num(s.xi));
        for l in &s.eigenvalues {
            write!(csv, ",{},{}", num(l.re), num(l.im)).unwrap();
        }
        writeln!(csv, ",{}", num(s.abscissa)).unwrap();
    }
    Ok((vec![artifact("spectrum.csv", csv)], Status::Pass))
}

fn identities(m: &RunManifest, cfg: &SystemConfig) -> Result<(Vec<Artifact>, Status), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(m.opts.seed);
    let draws: Vec<f64> = (0..IDENTITY_DRAWS).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for entry in catalog().iter().filter(|e| e.applies(cfg)) {
        let mut worst: f64 = 0.0;
        for &xi in &draws {
            worst = worst.max(identity_residual(entry, cfg, xi).map_err(classify("identities"))?);
        }
        let pass = worst <= IDENTITY_TOL;
        if !pass {
            failed.push(format!("identity {}", entry.name));
        }
        entries.push(json!({ "name": entry.name, "max_residual": worst, "pass": pass }));
    }
    let doc = json!({
        "classification": classification(cfg),
        "seed": m.opts.seed,
        "draws": IDENTITY_DRAWS,
        "tolerance": IDENTITY_TOL,
        "entries": entries,
        "pass": failed.is_empty(),
    });
    let status = if failed.is_empty() { Status::Pass } else { Status::Fail(failed) };
    Ok((vec![json_artifact("identities.json", &doc)], status))
}

fn certify_cmd(m: &RunManifest, cfg: &SystemConfig) -> Result<(Vec<Artifact>, Status), CliError> {
    let cert = certify(cfg, &grid(m, true)?).map_err(classify("certificate"))?;
    Ok((vec![json_artifact("certificate.json", &cert)], Status::Pass))
}

fn prediction(m: &RunManifest, cfg: &SystemConfig) -> Value {
    json!({
        "classification": classification(cfg),
        "envelope": shape(cfg).ok(),
        "prediction": predict_rates(cfg, m.opts.j, m.opts.ell),
    })
}

fn predict(m: &RunManifest, cfg: &SystemConfig) -> Result<(Vec<Artifact>, Status), CliError> {
    Ok((vec![json_artifact("prediction.json", &prediction(m, cfg))], Status::Pass))
}

fn datum() -> InitialDatum {
    InitialDatum::uniform(Profile::Gaussian { amplitude: 1.0, width: 1.0 }).expect("valid profile")
}

fn decay_summary(rep: &BoundReport) -> Value {
    json!({
        "datum": "gaussian amplitude 1 width 1 in every component",
        "c0": rep.c0,
        "tail_slope": rep.tail_slope,
        "ratio_slope": rep.ratio_slope,
        "predicted_low": rep.predicted_low,
        "high_branch": rep.high_branch,
        "exponential_rate": rep.exponential_rate,
        "note": rep.note,
        "pass": rep.pass,
    })
}

fn run_decay(m: &RunManifest, cfg: &SystemConfig) -> Result<BoundReport, CliError> {
    if m.opts.times < 8 {
        return Err(CliError::Usage("decay needs --times >= 8".into()));
    }
    verify_theorem_bound(cfg, &datum(), m.opts.j, m.opts.ell, &default_times(m.opts.times))
        .map_err(classify("decay bound"))
}

fn decay(m: &RunManifest, cfg: &SystemConfig) -> Result<(Vec<Artifact>, Status), CliError> {
    let rep = run_decay(m, cfg)?;
    let mut csv = String::from("t,norm,envelope,ratio\n");
    for r in &rep.rows {
        writeln!(csv, "{},{},{},{}", num(r.t), num(r.norm), num(r.envelope), num(r.ratio)).unwrap();
    }
    let status = if rep.pass { Status::Pass } else { Status::Fail(vec!["decay bound".into()]) };
    Ok((vec![artifact("decay.csv", csv), json_artifact("decay.json", &decay_summary(&rep))], status))
}

/// Evidence for the `chi = 0` instability: a root `i sqrt(k2) xi` of the characteristic
/// polynomial and an eigenmode that keeps its norm.
fn instability(cfg: &SystemConfig) -> Result<Value, CliError> {
    let lambda = Complex64::new(0.0, cfg.k2().sqrt() * WITNESS_XI);
    let det = characteristic_det_chi0(cfg, WITNESS_XI, lambda).map_err(classify("instability"))?;
    let mu = eigenvalues(&generator(cfg, WITNESS_XI)).ok_or_else(|| CliError::Compute {
        criterion: "instability",
        source: Error::EigenNonConvergence { xi: WITNESS_XI },
    })?;
    let scale: f64 = mu.iter().map(|m| lambda.norm() + m.norm()).product();
    let witness = nondecay_witness(cfg, WITNESS_XI, WITNESS_TIME).map_err(classify("instability"))?;
    let relative_det = det.norm() / scale;
    Ok(json!({
        "verdict": "unstable",
        "xi": WITNESS_XI,
        "expected_eigenvalue_im": lambda.im,
        "relative_det": relative_det,
        "root_confirmed": relative_det <= DET_RTOL,
        "witness": witness,
    }))
}

fn report(m: &RunManifest, cfg: &SystemConfig) -> Result<(Vec<Artifact>, Status), CliError> {
    let mut doc = json!({
        "classification": classification(cfg),
        "prediction": predict_rates(cfg, m.opts.j, m.opts.ell),
    });
    let mut failed = Vec::new();
    if !cfg.is_stable() {
        let evidence = if cfg.tau == Tau::Tau1 { instability(cfg)? } else { json!(null) };
        if evidence["root_confirmed"] != json!(true) {
            failed.push("instability evidence".to_string());
        }
        doc["instability"] = evidence;
    } else {
        let cert: Result<DecayCertificate, Error> = certify(cfg, &grid(m, true)?);
        match cert {
            Ok(c) => doc["certificate"] = serde_json::to_value(&c).expect("serializable"),
            Err(e) => {
                failed.push("certificate".to_string());
                doc["certificate"] = json!({ "error": e.to_string() });
            }
        }
        let rep = run_decay(m, cfg)?;
        if !rep.pass {
            failed.push("decay bound".to_string());
        }
        doc["decay"] = decay_summary(&rep);
    }
    doc["pass"] = json!(failed.is_empty());
    let status = if failed.is_empty() { Status::Pass } else { Status::Fail(failed) };
    Ok((vec![json_artifact("report.json", &doc)], status))
}
