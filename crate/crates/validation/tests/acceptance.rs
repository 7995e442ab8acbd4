//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pvfilter::contour::{
    bare_loop_integral, derivative_jump, numeric_contour_oracle, regularised_tail_integral, smoothness_order,
    time_domain_propagator, Contour,
};
use pvfilter::dirac::{
    equal_time_anticommutator, falloff_exponent, g_f_matrix, inverse_filter_polynomial, FourMomentum, GammaSet,
    SpinorMatrixValue,
};
use pvfilter::oscillator::{
    build_dual_operators, hamiltonian_matrix, kubo_commutator, oscillator_hamiltonian, response_function,
    sector_s_matrix, vacuum_tadpole, DriveSignal, FilterSystem, DEFAULT_ODE_STEP,
};
use pvfilter::power_counting::claim_table;
use pvfilter::quadrature::fit_slope;
use pvfilter::reg_algebra::{decompose, recursion_residual, sum_rule_residuals, MassLadder};
use pvfilter::verify::{self, born_scaling, VerifyOptions, BORN_STEP};
use pvfilter::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn ladder(m: &[f64]) -> MassLadder {
    MassLadder::new(m.to_vec()).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

fn partial_fractions() -> Result<Outcome> {
    let (measured, elapsed) = timed(|| -> Result<(f64, f64)> {
        let l = ladder(&[1.0, 2.0, 4.0]);
        let p = decompose(&l)?;
        let c = p.coefficients();
        let expected = [8.0 / 3.0, -4.0, 4.0 / 3.0];
        let mut residual = c.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        residual = residual.max(c.iter().sum::<f64>().abs());
        residual = residual.max((c.iter().zip(l.masses()).map(|(c, m)| c / m).sum::<f64>() - 1.0).abs());
        residual = sum_rule_residuals(&p, &l).into_iter().fold(residual, f64::max);
        let two = decompose(&ladder(&[1.0, 10.0]))?;
        Ok((residual, (two.coefficients()[0] - 10.0 / 9.0).abs()))
    });
    let (residual, c0) = measured?;
    outcome(
        residual <= 1e-12 && c0 <= 1e-14 && elapsed < Duration::from_millis(1),
        format!("{{1,2,4}} residual {residual:.2e}, c0 error {c0:.2e}, {elapsed:?}"),
    )
}

fn recursion() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for m in [&[1.0, 10.0][..], &[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0, 8.0, 16.0]] {
        let l = ladder(m);
        let scale = 2.0 * l.max_mass();
        let mut accepted = 0;
        while accepted < 100 {
            let z = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            if l.masses().iter().any(|&m| (z - m).norm() < 0.05 * m) {
                continue;
            }
            accepted += 1;
            for k in 0..l.n() {
                for j in k + 1..=l.n() {
                    worst = worst.max(recursion_residual(&l, k, j, z)?);
                }
            }
        }
    }
    outcome(worst <= 1e-12, format!("max residual {worst:.2e} over N in {{1,2,4}}"))
}

fn regularised_propagator() -> Result<Outcome> {
    let at_zero = time_domain_propagator(&ladder(&[1.0, 10.0]), Contour::Feynman, 0, 1, 0.0)?;
    let mut oracle = 0.0f64;
    for m in [&[1.0, 10.0][..], &[1.0, 2.0, 4.0]] {
        let l = ladder(m);
        for contour in Contour::ALL {
            for k in 0..=l.n() {
                for j in k..=l.n() {
                    for tau in [2.0, -2.0, 0.5, -0.5, 0.1] {
                        let exact = time_domain_propagator(&l, contour, k, j, tau)?;
                        let numeric = numeric_contour_oracle(&l, contour, k, j, tau, 1e-4, 1e5)?;
                        oracle = oracle.max((exact - numeric).norm());
                    }
                }
            }
        }
    }
    let mut smooth = true;
    let mut jump = 0.0f64;
    for m in [&[1.0, 10.0][..], &[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0, 8.0, 16.0]] {
        let l = ladder(m);
        smooth &= smoothness_order(&l)? == l.n();
        let p = decompose(&l)?;
        for j in 0..l.n() as u32 {
            let scale: f64 = p.coefficients().iter().zip(l.masses()).map(|(c, m)| (c * m.powi(j as i32)).abs()).sum();
            jump = jump.max(derivative_jump(&l, j)?.norm() / scale);
        }
    }
    outcome(
        at_zero == Complex64::new(0.0, 0.0) && oracle <= 1e-2 && smooth && jump <= 1e-10,
        format!("value at 0 = {at_zero}, oracle diff {oracle:.2e}, C^(N-1): {smooth} (jumps {jump:.2e})"),
    )
}

fn divergence() -> Result<Outcome> {
    let cutoffs: Vec<f64> = (0..=8).map(|k| 1e2 * 10f64.powf(0.5 * k as f64)).collect();
    let mut values = Vec::new();
    for &c in &cutoffs {
        values.push(bare_loop_integral(1.0, c)?.norm());
    }
    let logs: Vec<f64> = cutoffs.iter().map(|c| c.ln()).collect();
    let slope = fit_slope(&logs, &values);
    let l = ladder(&[1.0, 10.0]);
    let change = (regularised_tail_integral(&l, 2e4)? - regularised_tail_integral(&l, 1e4)?).norm();
    outcome(
        (slope - 1.0).abs() <= 0.05 && change <= 1e-3,
        format!("bare log-slope {slope:.4}, regularised tail change {change:.2e}"),
    )
}

fn kubo() -> Result<Outcome> {
    let system = FilterSystem::default();
    let (worst, elapsed) = timed(|| -> Result<f64> {
        let mut worst = 0.0f64;
        for s in 0..200 {
            let tau = 10.0 * s as f64 / 199.0;
            let theta = if tau > 0.0 { 1.0 } else { 0.0 };
            let lhs = Complex64::new(0.0, theta) * kubo_commutator(&system, 8, tau)?;
            worst = worst.max((lhs - response_function(&system, tau)?).norm());
        }
        Ok(worst)
    });
    let worst = worst?;
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(1),
        format!("max |i theta [.,.] - response| {worst:.2e}, {elapsed:?}"),
    )
}

fn hamiltonian() -> Result<Outcome> {
    let system = FilterSystem::default();
    let diff = (&hamiltonian_matrix(&system, 8, 0.0)? - &oscillator_hamiltonian(&system, 8)?).norm();
    let ops = build_dual_operators(&system, 8)?;
    let mut dual = 0.0f64;
    for l in 0..2 {
        for k in 0..2 {
            let c = ops.annihilator(l).commutator(ops.creator(k));
            let delta = if l == k { 1.0 } else { 0.0 };
            dual = dual.max(c.protected_scalar_deviation(&ops.basis, Complex64::new(delta, 0.0)));
        }
    }
    outcome(
        diff <= 1e-12 && dual <= 1e-13,
        format!("Hamiltonian difference {diff:.2e}, dual commutators {dual:.2e}"),
    )
}

fn s_matrix() -> Result<Outcome> {
    let system = FilterSystem::default();
    let weak = DriveSignal::gaussian(0.1, 1.0)?;
    let mut pseudo = 0.0f64;
    for n in 1..=3 {
        pseudo = pseudo.max(sector_s_matrix(&system, &weak, n, DEFAULT_ODE_STEP)?.pseudo_unitarity_defect());
    }
    let strong = DriveSignal::gaussian(0.5, 1.0)?;
    let defect = sector_s_matrix(&system, &strong, 1, DEFAULT_ODE_STEP)?.unitarity_defect();
    let short = DriveSignal::gaussian(0.5, 0.2)?;
    let short_defect = sector_s_matrix(&system, &short, 1, 0.2 * DEFAULT_ODE_STEP)?.unitarity_defect();
    let slope = born_scaling(&system, 3, &[0.01, 0.02, 0.04], BORN_STEP)?;
    outcome(
        pseudo <= 1e-8 && defect > 1e-3 && (slope - 4.0).abs() <= 0.2,
        format!(
            "pseudo-unitarity {pseudo:.2e}, unitarity defect (v0=0.5, T=1) {defect:.2e} [T=0.2: {short_defect:.2e}], \
             order-3 slope {slope:.3}"
        ),
    )
}

fn tadpole() -> Result<Outcome> {
    let system = FilterSystem::default();
    let mut worst = 0.0f64;
    for (v0, width) in [(0.1, 1.0), (0.5, 1.0), (2.0, 0.5), (-1.0, 3.0), (10.0, 0.1)] {
        worst = worst.max(vacuum_tadpole(&system, &DriveSignal::gaussian(v0, width)?).norm());
    }
    outcome(worst == 0.0, format!("max |tadpole| {worst:e}"))
}

fn equal_time() -> Result<Outcome> {
    let g = GammaSet::dirac();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (worst, elapsed) = timed(|| -> Result<f64> {
        let mut worst = 0.0f64;
        for m in [&[1.0, 10.0][..], &[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0, 8.0, 16.0]] {
            let l = ladder(m);
            for _ in 0..50 {
                let pvec = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                for k in 0..=l.n() {
                    for j in 0..=l.n() {
                        let expected = if k == j { *g.gamma(0) } else { SpinorMatrixValue::zeros() };
                        worst = worst.max((equal_time_anticommutator(&l, k, j, pvec, &g)? - expected).norm());
                    }
                }
            }
        }
        Ok(worst)
    });
    let worst = worst?;
    outcome(
        worst <= 1e-10 && elapsed < Duration::from_secs(5),
        format!("max |sum - delta gamma^0| {worst:.2e}, {elapsed:?}"),
    )
}

fn inversion_and_falloff() -> Result<Outcome> {
    let g = GammaSet::dirac();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut inverse = 0.0f64;
    let mut exponent = 0.0f64;
    let mut masses = vec![1.0];
    for n in 0..=4 {
        if n > 0 {
            masses.push(3f64.powi(n));
        }
        let l = ladder(&masses);
        for _ in 0..20 {
            let p = FourMomentum::real(
                rng.gen_range(-3.0..3.0),
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            )?;
            let product = inverse_filter_polynomial(&l, &p, &g) * g_f_matrix(&l, 0, l.n(), &p, &g)?;
            inverse = inverse.max((product - SpinorMatrixValue::identity()).norm());
        }
        let fitted = falloff_exponent(&l, [0.3, -0.2, 0.5], 1e3 * l.max_mass(), 0.3, &g)?;
        exponent = exponent.max((fitted - (l.n() + 1) as f64).abs());
    }
    outcome(
        inverse <= 1e-12 && exponent <= 0.05,
        format!("max |P G - 1| {inverse:.2e}, max exponent deviation {exponent:.2e}"),
    )
}

fn power_counting() -> Result<Outcome> {
    let rows = claim_table();
    let minimal: Vec<u32> = rows.iter().map(|r| r.minimal).collect();
    outcome(
        minimal == [4, 2, 2, 1] && rows.iter().all(|r| r.matches),
        format!("minimal N (tadpole, self-mass, vac-pol, vertex) = {minimal:?}"),
    )
}

fn verify_suite() -> Result<Outcome> {
    let options = VerifyOptions::default();
    let (first, t1) = timed(|| verify::run(&options));
    let (second, t2) = timed(|| verify::run(&options));
    let (first, second) = (first?.render(), second?.render());
    let identical = first == second;
    outcome(
        identical && t1 < Duration::from_secs(60) && t2 < Duration::from_secs(60),
        format!(
            "{} checks, byte-identical: {identical}, runs {t1:.2?} / {t2:.2?}",
            first.lines().count()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("partial fractions", partial_fractions),
        ("recursion identities", recursion),
        ("regularised propagator", regularised_propagator),
        ("divergence demonstration", divergence),
        ("kubo vs response", kubo),
        ("hamiltonian equivalence", hamiltonian),
        ("toy S-matrix", s_matrix),
        ("tadpole vanishing", tadpole),
        ("dirac equal-time identity", equal_time),
        ("inversion and falloff", inversion_and_falloff),
        ("power counting", power_counting),
        ("verify suite", verify_suite),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
