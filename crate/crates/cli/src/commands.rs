use std::fmt::Write;

use pvfilter::contour::{numeric_contour_oracle, oracle_tolerance_at, time_domain_propagator, Contour};
use pvfilter::oscillator::{
    born_series, exact_amplitude, kubo_commutator, response_function, DriveSignal, FilterSystem, DEFAULT_ODE_STEP,
    MAX_ORDER,
};
use pvfilter::power_counting::{canonical_diagrams, claim_table, minimal_regulators, superficial_degree};
use pvfilter::reg_algebra::{decompose as partial_fractions, sum_rule_residuals, MassLadder};
use pvfilter::verify::{self, VerifyOptions};
use pvfilter::{Complex64, Error};

use crate::config::RunConfig;
use crate::{CliError, Outcome};

const DEFAULT_MASSES: [f64; 2] = [1.0, 10.0];
const SUM_RULE_TOL: f64 = 1e-12;
const KUBO_TOL: f64 = 1e-8;
const ORACLE_EPSILON: f64 = 1e-4;
const ORACLE_CUTOFF: f64 = 1e5;
const MAX_REGULATORS_SHOWN: u32 = 5;

fn e(x: f64) -> String {
    format!("{x:.16e}")
}

fn ladder(cfg: &RunConfig) -> Result<MassLadder, CliError> {
    let masses = cfg.masses.clone().unwrap_or_else(|| DEFAULT_MASSES.to_vec());
    Ok(MassLadder::new(masses)?)
}

fn system(cfg: &RunConfig) -> Result<FilterSystem, CliError> {
    Ok(FilterSystem::new(cfg.omega0.unwrap_or(1.0), cfg.omega1.unwrap_or(10.0))?)
}

pub fn decompose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ladder = ladder(cfg)?;
    let pfd = partial_fractions(&ladder)?;
    let mut out = String::from("K,M,c,eps,sigma\n");
    for k in 0..ladder.len() {
        let eps = if pfd.signs()[k] > 0 { "+1" } else { "-1" };
        writeln!(
            out,
            "{k},{},{},{eps},{}",
            e(ladder.mass(k)),
            e(pfd.coefficients()[k]),
            e(pfd.weights()[k])
        )
        .unwrap();
    }
    let tol = cfg.tol.unwrap_or(SUM_RULE_TOL);
    let residuals = sum_rule_residuals(&pfd, &ladder);
    out.push_str("\nj,sum_rule_residual\n");
    for (j, r) in residuals.iter().enumerate() {
        writeln!(out, "{j},{}", e(*r)).unwrap();
    }
    Ok(Outcome::checked(out, residuals.iter().all(|&r| r <= tol)))
}

pub fn prop(cfg: &RunConfig, oracle: bool) -> Result<Outcome, CliError> {
    let ladder = ladder(cfg)?;
    let contour = cfg.contour.unwrap_or(Contour::Feynman);
    let taus = cfg.tau_grid((0.0, 10.0, 201))?;
    let n = ladder.n();
    let mut out = String::from("tau,re,im\n");
    let values = taus
        .iter()
        .map(|&tau| time_domain_propagator(&ladder, contour, 0, n, tau))
        .collect::<Result<Vec<_>, _>>()?;
    for (tau, value) in taus.iter().zip(&values) {
        writeln!(out, "{},{},{}", e(*tau), e(value.re), e(value.im)).unwrap();
    }
    if !oracle {
        return Ok(Outcome::checked(out, true));
    }

    // The bare retarded and Feynman functions jump at tau = 0.
    let checked = |tau: f64| !(n == 0 && tau == 0.0 && matches!(contour, Contour::Feynman | Contour::Retarded));
    let numeric = par_map(&taus, |tau| {
        if checked(tau) {
            numeric_contour_oracle(&ladder, contour, 0, n, tau, ORACLE_EPSILON, ORACLE_CUTOFF).map(Some)
        } else {
            Ok(None)
        }
    })?;
    let mut mismatches = 0usize;
    for ((&tau, value), numeric) in taus.iter().zip(&values).zip(numeric) {
        let Some(numeric) = numeric else { continue };
        let tol = match cfg.tol {
            Some(tol) => tol,
            None => oracle_tolerance_at(&ladder, 0, n, tau, ORACLE_EPSILON, ORACLE_CUTOFF)?,
        };
        if (numeric - value).norm() > tol {
            mismatches += 1;
            eprintln!("oracle mismatch at tau = {tau}: residue {value}, quadrature {numeric}, tolerance {tol:e}");
        }
    }
    Ok(Outcome::checked(out, mismatches == 0))
}

/// Order-preserving parallel map over a grid.
fn par_map<T, F>(xs: &[f64], f: F) -> Result<Vec<T>, Error>
where
    T: Send,
    F: Fn(f64) -> Result<T, Error> + Sync,
{
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = xs.len().div_ceil(threads).max(1);
    let parts: Vec<Result<Vec<T>, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = xs
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(|&x| f(x)).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut all = Vec::with_capacity(xs.len());
    for part in parts {
        all.extend(part?);
    }
    Ok(all)
}

pub fn respond(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let system = system(cfg)?;
    let n_max = cfg.n_max.unwrap_or(8);
    let taus = cfg.tau_grid((0.0, 10.0, 200))?;
    let tol = cfg.tol.unwrap_or(KUBO_TOL);
    let mut out = String::from("tau,re_resp,im_resp,re_kubo,im_kubo,absdiff\n");
    let mut worst = 0.0f64;
    for &tau in &taus {
        let response = response_function(&system, tau)?;
        let theta = if tau > 0.0 { 1.0 } else { 0.0 };
        let kubo = Complex64::new(0.0, theta) * kubo_commutator(&system, n_max, tau)?;
        let diff = (response - kubo).norm();
        worst = worst.max(diff);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e(tau),
            e(response.re),
            e(response.im),
            e(kubo.re),
            e(kubo.im),
            e(diff)
        )
        .unwrap();
    }
    Ok(Outcome::checked(out, worst <= tol))
}

pub fn born(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let system = system(cfg)?;
    let width = cfg.pulse_t.unwrap_or(1.0);
    let drive = DriveSignal::gaussian(cfg.v0.unwrap_or(0.1), width)?;
    let step = cfg.ode_step.unwrap_or(DEFAULT_ODE_STEP * width);
    let series = born_series(&system, &drive, MAX_ORDER, step)?;
    let exact = exact_amplitude(&system, &drive, step)?;
    let mut out = String::from("order,re_term,im_term,re_partial,im_partial,residual\n");
    for (order, (term, partial)) in series.terms().iter().zip(series.partial_sums()).enumerate() {
        writeln!(
            out,
            "{order},{},{},{},{},{}",
            e(term.re),
            e(term.im),
            e(partial.re),
            e(partial.im),
            e((partial - exact).norm())
        )
        .unwrap();
    }
    Ok(Outcome::checked(out, true))
}

pub fn count(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let diagrams = match &cfg.diagrams {
        Some(list) if !list.is_empty() => list.clone(),
        Some(_) => return Err(CliError::Config("diagrams: the list is empty".into())),
        None => canonical_diagrams().into_iter().map(|(d, _)| d).collect(),
    };
    let mut out = String::from("name,L,F,B,minimal_N");
    for n in 0..=MAX_REGULATORS_SHOWN {
        write!(out, ",D_N{n}").unwrap();
    }
    out.push('\n');
    let mut bad = Vec::new();
    for d in &diagrams {
        for w in d.warnings() {
            eprintln!("warning: {w}");
        }
        let minimal = match minimal_regulators(d) {
            Ok(n) => n.to_string(),
            Err(err) => {
                bad.push(err.to_string());
                "error".to_string()
            }
        };
        write!(
            out,
            "{},{},{},{},{minimal}",
            d.name, d.loops, d.fermion_internal, d.photon_internal
        )
        .unwrap();
        for n in 0..=MAX_REGULATORS_SHOWN {
            write!(out, ",{}", superficial_degree(d, n)).unwrap();
        }
        out.push('\n');
    }
    if !bad.is_empty() {
        for msg in &bad {
            eprintln!("pvfilter: {msg}");
        }
        return Ok(Outcome { output: out, code: 2 });
    }
    let claims = claim_table();
    for row in claims.iter().filter(|r| !r.matches) {
        eprintln!(
            "claim mismatch: {} needs {} regulators, claimed {}",
            row.diagram.name, row.minimal, row.claimed
        );
    }
    Ok(Outcome::checked(out, claims.iter().all(|r| r.matches)))
}

pub fn verify(cfg: &RunConfig, only: Option<&str>) -> Result<Outcome, CliError> {
    let options = VerifyOptions {
        only: only.map(str::to_string),
        tol: cfg.tol,
    };
    let report = verify::run(&options).map_err(|err| match err {
        Error::InvalidParameter { reason, .. } => CliError::Config(reason),
        other => other.into(),
    })?;
    eprintln!("{} checks, {} failed", report.checks.len(), report.failures());
    Ok(Outcome::checked(report.render(), report.all_passed()))
}
