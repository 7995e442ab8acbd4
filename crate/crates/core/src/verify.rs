//! The invariant suite behind `pvfilter verify`.
//!
//! Every check produces one measured residual and a bound. Random inputs come
//! from fixed-seed generators and summation orders are fixed, so the rendered
//! report is byte-identical between runs.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contour::{
    bare_loop_integral, derivative_jump, numeric_contour_oracle, oracle_tolerance, regularised_tail_integral,
    smoothness_order, time_domain_propagator, Contour,
};
use crate::dirac::{
    contraction_time_domain, equal_time_anticommutator, falloff_exponent, feynman_jump, g_f_matrix,
    inverse_filter_polynomial, matrix_recursion_residual, spectral_residual, FourMomentum, GammaSet,
    SpinorMatrixValue,
};
use crate::error::{Error, Result};
use crate::oscillator::{
    born_series, build_dual_operators, evolve_transfer, exact_amplitude, hamiltonian_matrix, kubo_commutator,
    oscillator_hamiltonian, pseudo_adjoint, response_function, sector_s_matrix, vacuum_tadpole, DriveSignal,
    FilterSystem, FockBasis, OperatorMatrix, SignOperator, DEFAULT_ODE_STEP,
};
use crate::power_counting::{claim_table, superficial_degree, DiagramSpec};
use crate::quadrature::fit_slope;
use crate::reg_algebra::{decompose, g_f_scalar, recursion_residual, sum_rule_residuals, MassLadder};

/// Check groups, in report order.
pub const MODULES: [&str; 5] = [
    "reg_algebra",
    "contour_propagators",
    "oscillator_filter",
    "dirac_algebra",
    "divergence_counter",
];

/// Acceptance rule for a residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub residual: f64,
    pub bound: Bound,
}

impl Check {
    /// `tol` replaces every upper bound; lower bounds are kept.
    pub fn passed(&self, tol: Option<f64>) -> bool {
        match self.bound {
            Bound::AtMost(limit) => self.residual <= tol.unwrap_or(limit),
            Bound::AtLeast(limit) => self.residual >= limit,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub only: Option<String>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
    pub tol: Option<f64>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed(self.tol))
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed(self.tol)).count()
    }

    /// One `module.name, PASS|FAIL, residual` line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.passed(self.tol) { "PASS" } else { "FAIL" };
            writeln!(out, "{}.{}, {}, {:.6e}", c.module, c.name, verdict, c.residual).unwrap();
        }
        out
    }
}

/// Runs every check group, or only `options.only`.
pub fn run(options: &VerifyOptions) -> Result<Report> {
    if let Some(tol) = options.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                reason: format!("must be a non-negative number, got {tol}"),
            });
        }
    }
    let selected: Vec<&'static str> = match options.only.as_deref() {
        None => MODULES.to_vec(),
        Some(name) if MODULES.contains(&name) => MODULES.iter().copied().filter(|m| *m == name).collect(),
        Some(name) => {
            return Err(Error::InvalidParameter {
                name: "only",
                reason: format!("unknown check group '{name}', expected one of {}", MODULES.join(", ")),
            })
        }
    };
    let mut checks = Vec::new();
    for module in selected {
        let group = match module {
            "reg_algebra" => reg_algebra_checks(),
            "contour_propagators" => contour_checks(),
            "oscillator_filter" => oscillator_checks(),
            "dirac_algebra" => dirac_checks(),
            _ => divergence_checks(),
        };
        checks.extend(group.into_iter().map(|(name, residual, bound)| Check {
            module,
            name,
            residual,
            bound,
        }));
    }
    Ok(Report {
        checks,
        tol: options.tol,
    })
}

type Row = (&'static str, f64, Bound);

/// Errors inside a check count as an infinite residual.
fn measured(value: Result<f64>) -> f64 {
    match value {
        Ok(v) if v.is_nan() => f64::INFINITY,
        Ok(v) => v,
        Err(_) => f64::INFINITY,
    }
}

fn ladder(masses: &[f64]) -> MassLadder {
    MassLadder::new(masses.to_vec()).expect("fixed ladders are valid")
}

/// Log-uniform masses in `[0.5, 50]`, resampled until well separated.
fn random_ladder(rng: &mut ChaCha8Rng, len: usize, sorted: bool) -> MassLadder {
    random_ladder_separated(rng, len, sorted, 0.02)
}

fn random_ladder_separated(rng: &mut ChaCha8Rng, len: usize, sorted: bool, separation: f64) -> MassLadder {
    loop {
        let mut m: Vec<f64> = (0..len).map(|_| 0.5 * 100f64.powf(rng.gen::<f64>())).collect();
        if sorted {
            m.sort_by(f64::total_cmp);
        }
        let separated = m.iter().enumerate().all(|(i, a)| {
            m.iter()
                .skip(i + 1)
                .all(|b| (a - b).abs() > separation * a.max(*b))
        });
        if separated {
            return MassLadder::new(m).expect("separated positive masses");
        }
    }
}

/// Random complex point in the box of half-width `2 * scale`, at least 5%
/// (relative) away from every pole.
fn random_z(rng: &mut ChaCha8Rng, ladder: &MassLadder, scale: f64) -> Complex64 {
    let scale = 2.0 * scale;
    loop {
        let z = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        if ladder.masses().iter().all(|&m| (z - m).norm() > 0.05 * m) {
            return z;
        }
    }
}

fn reg_algebra_checks() -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut rows = Vec::new();

    let examples = measured((|| {
        let l = ladder(&[1.0, 2.0, 4.0]);
        let c = decompose(&l)?;
        let expected = [8.0 / 3.0, -4.0, 4.0 / 3.0];
        let diff = c.coefficients().iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let sums = (c.coefficients().iter().sum::<f64>()).abs().max(
            (c.coefficients().iter().zip(l.masses()).map(|(c, m)| c / m).sum::<f64>() - 1.0).abs(),
        );
        Ok(diff.max(sums))
    })());
    rows.push(("partial_fraction_example", examples, Bound::AtMost(1e-12)));

    let two = measured(decompose(&ladder(&[1.0, 10.0])).map(|c| (c.coefficients()[0] - 10.0 / 9.0).abs()));
    rows.push(("two_mass_coefficient", two, Bound::AtMost(1e-14)));

    let mut reconstruction = 0.0f64;
    // Far above the lightest mass G decays like |z|^-(N+1) while the single
    // pole terms do not, so the sum cancels catastrophically there; sample on
    // the scale of the lightest mass.
    for n in 0..=6 {
        let l = random_ladder_separated(&mut rng, n + 1, false, 0.1);
        let lightest = l.masses().iter().copied().fold(f64::INFINITY, f64::min);
        let pfd = match decompose(&l) {
            Ok(p) => p,
            Err(_) => {
                reconstruction = f64::INFINITY;
                continue;
            }
        };
        for _ in 0..200 {
            let z = random_z(&mut rng, &l, lightest);
            let exact = measured(g_f_scalar(&l, 0, l.n(), z).map(|g| (pfd.evaluate(&l, z) - g).norm() / g.norm()));
            reconstruction = reconstruction.max(exact);
        }
    }
    rows.push(("reconstruction", reconstruction, Bound::AtMost(1e-10)));

    let mut recursion = 0.0f64;
    for n in [1, 2, 4] {
        let l = random_ladder(&mut rng, n + 1, true);
        for _ in 0..100 {
            let z = random_z(&mut rng, &l, l.max_mass());
            for k in 0..n {
                for j in k + 1..=n {
                    recursion = recursion.max(measured(recursion_residual(&l, k, j, z)));
                }
            }
        }
    }
    rows.push(("recursion", recursion, Bound::AtMost(1e-12)));

    let mut sum_rules = 0.0f64;
    let mut sign_mismatches = 0usize;
    for n in 0..=6 {
        for _ in 0..20 {
            let l = random_ladder(&mut rng, n + 1, true);
            match decompose(&l) {
                Ok(p) => {
                    sum_rules = sum_rule_residuals(&p, &l).into_iter().fold(sum_rules, f64::max);
                    sign_mismatches += p
                        .signs()
                        .iter()
                        .enumerate()
                        .filter(|&(k, &s)| s != if k % 2 == 0 { 1 } else { -1 })
                        .count();
                }
                Err(_) => sum_rules = f64::INFINITY,
            }
        }
    }
    rows.push(("sum_rules", sum_rules, Bound::AtMost(1e-12)));
    rows.push(("alternating_signs", sign_mismatches as f64, Bound::AtMost(0.0)));

    let mut leading = 0.0f64;
    let mut trailing = 0.0f64;
    for n in 1..=4 {
        for _ in 0..10 {
            let mut m = vec![rng.gen_range(0.5..2.0)];
            for _ in 0..n {
                let last = *m.last().unwrap();
                m.push(last * rng.gen_range(100.0..1000.0));
            }
            let l = ladder(&m);
            match decompose(&l) {
                Ok(p) => {
                    let w = p.weights();
                    leading = leading.max((w[0] - 1.0).abs()).max((w[1] - 1.0).abs());
                    trailing = w[2..].iter().copied().fold(trailing, f64::max);
                }
                Err(_) => leading = f64::INFINITY,
            }
        }
    }
    rows.push(("typical_case_leading_weights", leading, Bound::AtMost(0.01)));
    rows.push(("typical_case_trailing_weights", trailing, Bound::AtMost(0.15)));

    let mut falloff = 0.0f64;
    for n in 0..=4 {
        let l = random_ladder(&mut rng, n + 1, true);
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for s in 0..25 {
            let r = 1e3 * l.max_mass() * 10f64.powf(3.0 * s as f64 / 24.0);
            let z = Complex64::from_polar(r, 0.7);
            xs.push(r.ln());
            ys.push(measured(g_f_scalar(&l, 0, n, z).map(|g| g.norm())).ln());
        }
        falloff = falloff.max((fit_slope(&xs, &ys) + (n + 1) as f64).abs());
    }
    rows.push(("falloff_slope", falloff, Bound::AtMost(0.05)));
    rows
}

fn contour_checks() -> Vec<Row> {
    let mut rows = Vec::new();
    let (epsilon, cutoff) = (1e-4, 1e5);
    let taus = [2.0, -2.0, 0.5, -0.5, 0.1];

    let mut oracle = 0.0f64;
    for masses in [&[1.0, 10.0][..], &[1.0, 2.0, 4.0]] {
        let l = ladder(masses);
        let tol = oracle_tolerance(&l, epsilon, cutoff);
        for contour in Contour::ALL {
            for k in 0..=l.n() {
                for j in k..=l.n() {
                    for &tau in &taus {
                        let ratio = measured((|| {
                            let exact = time_domain_propagator(&l, contour, k, j, tau)?;
                            let numeric = numeric_contour_oracle(&l, contour, k, j, tau, epsilon, cutoff)?;
                            Ok((exact - numeric).norm() / tol)
                        })());
                        oracle = oracle.max(ratio);
                    }
                }
            }
        }
    }
    rows.push(("oracle_agreement_ratio", oracle, Bound::AtMost(1.0)));

    let mut feynman_retarded = 0.0f64;
    let mut partition = 0.0f64;
    for masses in [&[1.0][..], &[1.0, 10.0], &[1.0, 2.0, 4.0]] {
        let l = ladder(masses);
        for s in 0..=40 {
            let tau = -5.0 + 0.25 * s as f64;
            for k in 0..=l.n() {
                for j in k..=l.n() {
                    let value = |c| measured_complex(time_domain_propagator(&l, c, k, j, tau));
                    let (f, r) = (value(Contour::Feynman), value(Contour::Retarded));
                    let (p, m, c) = (value(Contour::Plus), value(Contour::Minus), value(Contour::Closed));
                    feynman_retarded = feynman_retarded.max((f - r).norm());
                    partition = partition.max((p + m - c).norm());
                }
            }
        }
    }
    rows.push(("feynman_equals_retarded", feynman_retarded, Bound::AtMost(1e-14)));
    rows.push(("plus_minus_closed", partition, Bound::AtMost(1e-12)));

    let at_zero = measured(time_domain_propagator(&ladder(&[1.0, 10.0]), Contour::Feynman, 0, 1, 0.0).map(|v| v.norm()));
    rows.push(("regularised_value_at_zero", at_zero, Bound::AtMost(0.0)));

    let mut jumps = 0.0f64;
    let mut order_mismatch = 0usize;
    for masses in [&[1.0, 10.0][..], &[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0, 8.0, 16.0]] {
        let l = ladder(masses);
        let pfd = decompose(&l).expect("valid ladder");
        for j in 0..l.n() as u32 {
            let scale: f64 = pfd.coefficients().iter().zip(l.masses()).map(|(c, m)| (c * m.powi(j as i32)).abs()).sum();
            jumps = jumps.max(measured(derivative_jump(&l, j).map(|v| v.norm() / scale)));
        }
        if smoothness_order(&l).ok() != Some(l.n()) {
            order_mismatch += 1;
        }
    }
    rows.push(("derivative_jumps", jumps, Bound::AtMost(1e-10)));
    rows.push(("smoothness_order", order_mismatch as f64, Bound::AtMost(0.0)));

    let cutoffs: Vec<f64> = (0..=8).map(|k| 1e2 * 10f64.powf(0.5 * k as f64)).collect();
    let values: Vec<f64> = cutoffs.iter().map(|&c| measured(bare_loop_integral(1.0, c).map(|v| v.norm()))).collect();
    let logs: Vec<f64> = cutoffs.iter().map(|c| c.ln()).collect();
    rows.push(("bare_loop_log_slope", (fit_slope(&logs, &values) - 1.0).abs(), Bound::AtMost(0.05)));

    let l = ladder(&[1.0, 10.0]);
    let tail = measured((|| Ok((regularised_tail_integral(&l, 2e4)? - regularised_tail_integral(&l, 1e4)?).norm()))());
    rows.push(("regularised_tail_stability", tail, Bound::AtMost(1e-3)));
    rows
}

fn measured_complex(value: Result<Complex64>) -> Complex64 {
    value.unwrap_or(Complex64::new(f64::INFINITY, 0.0))
}

fn oscillator_checks() -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut rows = Vec::new();
    let system = FilterSystem::default();
    let n_max = 8;
    let step = DEFAULT_ODE_STEP;

    let mut dual = 0.0f64;
    for _ in 0..5 {
        let omega0 = rng.gen_range(0.5..2.0);
        let sys = FilterSystem::new(omega0, omega0 * rng.gen_range(2.0..20.0)).expect("ordered frequencies");
        dual = dual.max(measured((|| {
            let ops = build_dual_operators(&sys, n_max)?;
            let mut worst = 0.0f64;
            for l in 0..2 {
                for k in 0..2 {
                    let c = ops.annihilator(l).commutator(ops.creator(k));
                    let delta = if l == k { 1.0 } else { 0.0 };
                    worst = worst.max(c.protected_scalar_deviation(&ops.basis, Complex64::new(delta, 0.0)));
                }
            }
            Ok(worst)
        })()));
    }
    rows.push(("dual_commutators", dual, Bound::AtMost(1e-13)));

    let equivalence = measured((|| {
        let h = hamiltonian_matrix(&system, n_max, 0.0)?;
        Ok((&h - &oscillator_hamiltonian(&system, n_max)?).norm())
    })());
    rows.push(("hamiltonian_equivalence", equivalence, Bound::AtMost(1e-12)));

    let basis = FockBasis::new(n_max).expect("n_max >= 2");
    let sign = SignOperator::filter(&basis);
    let mut hermiticity = 0.0f64;
    for _ in 0..5 {
        let v = rng.gen_range(-2.0..2.0);
        hermiticity = hermiticity.max(measured((|| {
            let h = hamiltonian_matrix(&system, n_max, v)?;
            Ok((&pseudo_adjoint(&h, &sign)? - &h).norm())
        })()));
    }
    rows.push(("pseudo_hermiticity", hermiticity, Bound::AtMost(1e-13)));

    let reversal = measured((|| {
        let random = |rng: &mut ChaCha8Rng| {
            OperatorMatrix::from_matrix(
                n_max,
                nalgebra::DMatrix::from_fn(basis.dim(), basis.dim(), |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }),
            )
        };
        let (x, y) = (random(&mut rng), random(&mut rng));
        let lhs = pseudo_adjoint(&(&x * &y), &sign)?;
        let rhs = &pseudo_adjoint(&y, &sign)? * &pseudo_adjoint(&x, &sign)?;
        let twice = pseudo_adjoint(&pseudo_adjoint(&x, &sign)?, &sign)?;
        Ok(((&lhs - &rhs).norm() / lhs.norm()).max((&twice - &x).norm()))
    })());
    rows.push(("pseudo_adjoint_algebra", reversal, Bound::AtMost(1e-13)));

    let drive = DriveSignal::gaussian(0.1, 1.0).expect("valid pulse");
    let composition = measured((|| {
        let first = evolve_transfer(&system, &drive, -8.0, -1.0, step)?;
        let second = evolve_transfer(&system, &drive, -1.0, 8.0, step)?;
        let whole = evolve_transfer(&system, &drive, -8.0, 8.0, step)?;
        Ok(first.then(&second).max_abs_diff(&whole))
    })());
    rows.push(("transfer_composition", composition, Bound::AtMost(1e-8)));

    let kubo = measured((|| {
        let mut worst = 0.0f64;
        for s in 0..200 {
            let tau = 10.0 * s as f64 / 199.0;
            let commutator = kubo_commutator(&system, n_max, tau)?;
            let theta = if tau > 0.0 { 1.0 } else { 0.0 };
            let lhs = Complex64::new(0.0, theta) * commutator;
            worst = worst.max((lhs - response_function(&system, tau)?).norm());
        }
        Ok(worst)
    })());
    rows.push(("kubo_response", kubo, Bound::AtMost(1e-8)));

    let continuity = measured(response_function(&system, 0.0).map(|r| r.norm()));
    rows.push(("response_at_zero", continuity, Bound::AtMost(0.0)));

    for (order, name, amplitudes) in BORN_WINDOWS {
        let slope = born_scaling(&system, order, amplitudes, BORN_STEP);
        rows.push((name, measured(slope.map(|s| (s - (order + 1) as f64).abs())), Bound::AtMost(0.2)));
    }

    let mut tadpole = 0.0f64;
    for (v0, width) in [(0.1, 1.0), (0.5, 1.0), (2.0, 0.5), (-1.0, 3.0)] {
        let d = DriveSignal::gaussian(v0, width).expect("valid pulse");
        tadpole = tadpole.max(vacuum_tadpole(&system, &d).norm());
    }
    rows.push(("regularised_tadpole", tadpole, Bound::AtMost(0.0)));

    let weak = DriveSignal::gaussian(0.1, 1.0).expect("valid pulse");
    let mut pseudo = 0.0f64;
    for n in 1..=3 {
        pseudo = pseudo.max(measured(sector_s_matrix(&system, &weak, n, step).map(|s| s.pseudo_unitarity_defect())));
    }
    rows.push(("s_matrix_pseudo_unitarity", pseudo, Bound::AtMost(1e-8)));

    let strong = DriveSignal::gaussian(0.5, 1.0).expect("valid pulse");
    let defect = measured(sector_s_matrix(&system, &strong, 1, step).map(|s| s.unitarity_defect()));
    rows.push(("s_matrix_unitarity_violation", defect, Bound::AtLeast(1e-3)));

    let short = DriveSignal::gaussian(0.5, 0.2).expect("valid pulse");
    let defect = measured(sector_s_matrix(&system, &short, 1, 0.2 * step).map(|s| s.unitarity_defect()));
    rows.push(("s_matrix_unitarity_violation_short_pulse", defect, Bound::AtLeast(1e-3)));
    rows
}

/// Grid for the truncation-error fits. The series quadrature carries an
/// `O(h^4)` error of order `1e-9 v0` at `h = T/200`, which would swamp the
/// smallest residuals.
pub const BORN_STEP: f64 = DEFAULT_ODE_STEP / 2.0;

/// Drive amplitudes per truncation order: small enough that the next term
/// dominates the remainder, large enough to stay above the quadrature floor.
pub const BORN_WINDOWS: [(usize, &str, &[f64]); 3] = [
    (1, "born_order1_scaling", &[0.0025, 0.005, 0.01, 0.02]),
    (2, "born_order2_scaling", &[0.005, 0.01, 0.02, 0.04]),
    (3, "born_order3_scaling", &[0.01, 0.02, 0.04]),
];

/// Log-log slope of the order-`order` truncation error against `v0`, for a
/// unit-width pulse. Expected `order + 1`.
pub fn born_scaling(system: &FilterSystem, order: usize, amplitudes: &[f64], step: f64) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &v0 in amplitudes {
        let drive = DriveSignal::gaussian(v0, 1.0)?;
        let series = born_series(system, &drive, order, step)?;
        let exact = exact_amplitude(system, &drive, step)?;
        xs.push(v0.ln());
        ys.push((series.partial_sum(order) - exact).norm().ln());
    }
    Ok(fit_slope(&xs, &ys))
}

fn random_momentum(rng: &mut ChaCha8Rng) -> FourMomentum {
    FourMomentum::new(
        Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..1.0)),
        [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
    )
    .expect("finite components")
}

fn dirac_checks() -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut rows = Vec::new();
    let g = GammaSet::dirac();
    let ladders = [ladder(&[1.0, 10.0]), ladder(&[1.0, 2.0, 4.0]), ladder(&[1.0, 2.0, 4.0, 8.0, 16.0])];

    rows.push(("clifford_relations", g.clifford_residual(), Bound::AtMost(1e-15)));
    rows.push(("gamma_adjointness", g.adjointness_residual(), Bound::AtMost(1e-15)));

    let mut spectral = 0.0f64;
    let mut recursion = 0.0f64;
    let mut inversion = 0.0f64;
    for l in &ladders {
        for _ in 0..20 {
            let p = random_momentum(&mut rng);
            for k in 0..=l.n() {
                for j in k..=l.n() {
                    spectral = spectral.max(measured(spectral_residual(l, k, j, &p, &g)));
                    if k < j {
                        recursion = recursion.max(measured(matrix_recursion_residual(l, k, j, &p, &g)));
                    }
                }
            }
            let real = FourMomentum::real(p.p0.re, p.pvec).expect("finite");
            inversion = inversion.max(measured(g_f_matrix(l, 0, l.n(), &real, &g).map(|m| {
                (inverse_filter_polynomial(l, &real, &g) * m - SpinorMatrixValue::identity()).norm()
            })));
        }
    }
    rows.push(("spectral_consistency", spectral, Bound::AtMost(1e-11)));
    rows.push(("matrix_recursion", recursion, Bound::AtMost(1e-12)));
    rows.push(("inverse_filter_polynomial", inversion, Bound::AtMost(1e-12)));

    let mut equal_time = 0.0f64;
    let mut triangular = 0.0f64;
    for l in &ladders {
        for _ in 0..50 {
            let pvec = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            for k in 0..=l.n() {
                for j in 0..=l.n() {
                    let value = equal_time_anticommutator(l, k, j, pvec, &g);
                    if j > k {
                        triangular = triangular.max(measured(value.as_ref().map(|m| m.norm()).map_err(Clone::clone)));
                    }
                    let expected = if k == j { *g.gamma(0) } else { SpinorMatrixValue::zeros() };
                    equal_time = equal_time.max(measured(value.map(|m| (m - expected).norm())));
                }
            }
        }
    }
    rows.push(("equal_time_anticommutator", equal_time, Bound::AtMost(1e-10)));
    rows.push(("anticommutator_triangularity", triangular, Bound::AtMost(0.0)));

    let mut continuity = 0.0f64;
    let mut partition = 0.0f64;
    let pvec = [0.3, -0.2, 0.5];
    for l in &ladders {
        continuity = continuity.max(measured(feynman_jump(l, pvec, &g).map(|m| m.norm())));
        for tau in [-1.5, -0.2, 0.0, 0.2, 1.5] {
            partition = partition.max(measured((|| {
                let plus = contraction_time_domain(l, Contour::Plus, pvec, tau, &g)?;
                let minus = contraction_time_domain(l, Contour::Minus, pvec, tau, &g)?;
                let closed = contraction_time_domain(l, Contour::Closed, pvec, tau, &g)?;
                Ok((plus + minus - closed).norm())
            })()));
        }
    }
    rows.push(("feynman_contraction_continuity", continuity, Bound::AtMost(1e-10)));
    rows.push(("plus_minus_closed", partition, Bound::AtMost(1e-12)));

    let mut falloff = 0.0f64;
    for l in &ladders {
        let exponent = measured(falloff_exponent(l, pvec, 1e3 * l.max_mass(), 0.3, &g));
        falloff = falloff.max((exponent - (l.n() + 1) as f64).abs());
    }
    rows.push(("falloff_exponent", falloff, Bound::AtMost(0.05)));
    rows
}

fn divergence_checks() -> Vec<Row> {
    let mut rows = Vec::new();
    let table = claim_table();
    let mismatches = table.iter().filter(|r| !r.matches).count();
    rows.push(("claim_table", mismatches as f64, Bound::AtMost(0.0)));

    let not_minimal = table
        .iter()
        .filter(|r| r.minimal > 0 && superficial_degree(&r.diagram, r.minimal - 1) < 0)
        .count();
    rows.push(("claim_minimality", not_minimal as f64, Bound::AtMost(0.0)));

    let mut violations = 0usize;
    for l in 1..=3 {
        for f in 1..=6 {
            for b in 0..=6 {
                let d = DiagramSpec::new("probe", l, f, b).expect("loops >= 1");
                for n in 0..8 {
                    if superficial_degree(&d, n) - superficial_degree(&d, n + 1) != f as i64 {
                        violations += 1;
                    }
                }
            }
        }
    }
    rows.push(("degree_monotonicity", violations as f64, Bound::AtMost(0.0)));

    let g = GammaSet::dirac();
    let mut consistency = 0.0f64;
    let mut masses = vec![1.0];
    for n in 0..=4u32 {
        if n > 0 {
            masses.push(2f64.powi(n as i32));
        }
        let l = ladder(&masses);
        let exponent = measured(falloff_exponent(&l, [0.3, -0.2, 0.5], 1e3 * l.max_mass(), 0.3, &g));
        consistency = consistency.max((exponent - (1 + n) as f64).abs());
    }
    rows.push(("fermion_falloff_consistency", consistency, Bound::AtMost(0.05)));
    rows
}
