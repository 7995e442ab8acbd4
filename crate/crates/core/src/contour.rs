//! Time-domain propagators of the single-oscillator filter.
//!
//! The frequency-domain integrand is `G^(K,L)(w) e^{-i w tau}` with poles at
//! the ladder masses, all on the positive real axis. Each [`Contour`] picks
//! which poles contribute and with which prefactor; values are evaluated by
//! residues and can be cross-checked by [`numeric_contour_oracle`].
//!
//! Conventions, fixed so the residue values reproduce the single-mode
//! propagator `i theta(tau) e^{-i M tau}` exactly:
//!
//! * `FEYNMAN` and `RETARDED` run along the real axis above the poles,
//!   measure `dw / 2pi`. With `theta(0) = 0` both vanish at `tau = 0`.
//! * `CLOSED` encircles every pole, measure `dw / 2 pi i`, oriented so that
//!   its value is `sum_l c_l e^{-i M_l tau}` (the two-time commutator).
//! * `PLUS` / `MINUS` encircle the positive / negative real-axis poles with
//!   the `CLOSED` measure, so `PLUS + MINUS = CLOSED`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, AdaptiveOptions};
use crate::reg_algebra::{decompose, g_f_scalar, MassLadder};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Integration contour in the complex energy plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contour {
    Feynman,
    Retarded,
    Closed,
    Plus,
    Minus,
}

impl Contour {
    pub const ALL: [Contour; 5] = [
        Contour::Feynman,
        Contour::Retarded,
        Contour::Closed,
        Contour::Plus,
        Contour::Minus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Contour::Feynman => "FEYNMAN",
            Contour::Retarded => "RETARDED",
            Contour::Closed => "CLOSED",
            Contour::Plus => "PLUS",
            Contour::Minus => "MINUS",
        }
    }
}

impl fmt::Display for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Contour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "FEYNMAN" | "F" => Ok(Contour::Feynman),
            "RETARDED" | "R" => Ok(Contour::Retarded),
            "CLOSED" | "C" => Ok(Contour::Closed),
            "PLUS" | "+" => Ok(Contour::Plus),
            "MINUS" | "-" => Ok(Contour::Minus),
            other => Err(Error::InvalidParameter {
                name: "contour",
                reason: format!("unknown contour '{other}'"),
            }),
        }
    }
}

/// A propagator sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub tau: f64,
    pub value: Complex64,
}

fn theta(tau: f64) -> f64 {
    if tau > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Poles and residue weights of `G^(K,L)` in ascending index order.
fn pole_terms(ladder: &MassLadder, k: usize, l: usize) -> Result<Vec<(f64, f64)>> {
    let sub = ladder.sub_ladder(k, l)?;
    let pfd = decompose(&sub)?;
    Ok(sub
        .masses()
        .iter()
        .copied()
        .zip(pfd.coefficients().iter().copied())
        .collect())
}

fn phase_sum(terms: &[(f64, f64)], tau: f64) -> Complex64 {
    terms
        .iter()
        .map(|&(m, c)| c * Complex64::new(0.0, -m * tau).exp())
        .sum()
}

/// Residue evaluation of the propagator `G^(K,L)` on `contour` at time `tau`.
pub fn time_domain_propagator(
    ladder: &MassLadder,
    contour: Contour,
    k: usize,
    l: usize,
    tau: f64,
) -> Result<Complex64> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if k > l {
        return Ok(ZERO);
    }
    let terms = pole_terms(ladder, k, l)?;
    // Every ladder pole sits on the positive real axis.
    let value = match contour {
        Contour::Feynman | Contour::Retarded => I * theta(tau) * phase_sum(&terms, tau),
        Contour::Closed | Contour::Plus => phase_sum(&terms, tau),
        Contour::Minus => ZERO,
    };
    Ok(value)
}

/// Samples [`time_domain_propagator`] on a grid of times.
pub fn propagator_table(
    ladder: &MassLadder,
    contour: Contour,
    k: usize,
    l: usize,
    taus: &[f64],
) -> Result<Vec<PropagatorValue>> {
    taus.iter()
        .map(|&tau| {
            time_domain_propagator(ladder, contour, k, l, tau).map(|value| PropagatorValue { tau, value })
        })
        .collect()
}

/// Largest `radius * |tau|` for which one circle around all poles is used.
const MAX_CIRCLE_GROWTH: f64 = 8.0;

/// Agreement bound between [`numeric_contour_oracle`] and the residue value.
pub fn oracle_tolerance(ladder: &MassLadder, epsilon: f64, cutoff: f64) -> f64 {
    10.0 * (epsilon + ladder.max_mass() / cutoff)
}

/// [`oracle_tolerance`] widened by the damping `e^{-epsilon |tau|}` that the
/// shifted poles put on each term, `epsilon |tau| sum_l |c_l|`. Needed once
/// `|tau|` is large compared with 10.
pub fn oracle_tolerance_at(ladder: &MassLadder, k: usize, l: usize, tau: f64, epsilon: f64, cutoff: f64) -> Result<f64> {
    let base = oracle_tolerance(ladder, epsilon, cutoff);
    if k > l {
        return Ok(base);
    }
    let weight: f64 = pole_terms(ladder, k, l)?.iter().map(|(_, c)| c.abs()).sum();
    Ok(base + epsilon * tau.abs() * weight)
}

/// Direct numerical realisation of the contour integral.
///
/// Open contours integrate `G^(K,L)(w) e^{-i w tau} / 2pi` along
/// `[-cutoff, cutoff]` with each pole shifted to `M_l - i epsilon`. Closed
/// contours use the trapezoid rule on a circle around the selected poles.
pub fn numeric_contour_oracle(
    ladder: &MassLadder,
    contour: Contour,
    k: usize,
    l: usize,
    tau: f64,
    epsilon: f64,
    cutoff: f64,
) -> Result<Complex64> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "must be positive".into(),
        });
    }
    if !(cutoff > 10.0 * ladder.max_mass()) {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            reason: "must exceed ten times the largest mass".into(),
        });
    }
    if k > l {
        return Ok(ZERO);
    }
    let sub = ladder.sub_ladder(k, l)?;
    match contour {
        Contour::Feynman | Contour::Retarded => line_integral(&sub, tau, epsilon, cutoff),
        Contour::Closed | Contour::Plus => Ok(circle_oracle(&sub, tau, true)),
        Contour::Minus => Ok(circle_oracle(&sub, tau, false)),
    }
}

fn line_integral(sub: &MassLadder, tau: f64, epsilon: f64, cutoff: f64) -> Result<Complex64> {
    let masses = sub.masses().to_vec();
    let numerator: f64 = masses[1..].iter().product();
    let integrand = |w: f64| {
        let mut value = Complex64::new(numerator, 0.0);
        for &m in &masses {
            value /= Complex64::new(m - w, -epsilon);
        }
        value * Complex64::new(0.0, -w * tau).exp() / (2.0 * PI)
    };

    let mut breakpoints = vec![-cutoff, cutoff];
    for &m in &masses {
        breakpoints.push(m);
        let mut d = epsilon;
        while d < 1.0 {
            breakpoints.push(m - d);
            breakpoints.push(m + d);
            d *= 4.0;
        }
    }
    // Half-period panels keep each Kronrod panel below one oscillation.
    if tau != 0.0 {
        let width = PI / tau.abs();
        let count = (2.0 * cutoff / width).ceil() as usize;
        breakpoints.extend((1..count).map(|i| -cutoff + i as f64 * width));
    } else {
        let mut x = 1.0;
        while x < cutoff {
            breakpoints.push(x);
            breakpoints.push(-x);
            x *= 2.0;
        }
    }
    breakpoints.retain(|x| x.abs() <= cutoff);
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();

    quadrature::integrate(integrand, &breakpoints, AdaptiveOptions::default())
}

fn circle_oracle(sub: &MassLadder, tau: f64, positive_side: bool) -> Complex64 {
    let masses = sub.masses().to_vec();
    let numerator: f64 = masses[1..].iter().product();
    // dw/(2 pi i) around the selected poles, oriented so the residue of
    // 1/(M - w) counts +1.
    let integrand = |w: Complex64| {
        let mut value = Complex64::new(numerator, 0.0);
        for &m in &masses {
            value /= w - m;
        }
        let sign = if masses.len() % 2 == 0 { 1.0 } else { -1.0 };
        -sign * value * (-I * w * tau).exp()
    };
    let lo = masses.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sub.max_mass();
    if !positive_side {
        // No poles on the negative axis in this model.
        return quadrature::circle_integral(integrand, Complex64::new(-hi, 0.0), 0.5 * lo, 4096);
    }
    let radius = 0.5 * (hi - lo) + 0.5 * lo;
    if radius * tau.abs() <= MAX_CIRCLE_GROWTH {
        return quadrature::circle_integral(integrand, Complex64::new(0.5 * (lo + hi), 0.0), radius, 4096);
    }
    // On a wide circle |e^{-i w tau}| reaches e^{radius |tau|} and the sum
    // cancels catastrophically; small circles around each pole avoid that.
    let mut sorted = masses.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let gap = sorted.windows(2).map(|w| w[1] - w[0]).fold(lo, f64::min);
    let r = (0.5 * gap).min(1.0 / tau.abs());
    masses
        .iter()
        .map(|&m| quadrature::circle_integral(integrand, Complex64::new(m, 0.0), r, 512))
        .sum()
}

/// `lim tau->0+ - lim tau->0-` of the Feynman propagator, `i sum_l c_l`.
pub fn jump_at_zero(ladder: &MassLadder, k: usize, l: usize) -> Result<Complex64> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if k > l {
        return Ok(ZERO);
    }
    let terms = pole_terms(ladder, k, l)?;
    Ok(I * terms.iter().map(|&(_, c)| c).sum::<f64>())
}

/// Jump of the `j`-th derivative of the Feynman propagator `G^(0,N)` at
/// `tau = 0`, `i (-i)^j sum_l c_l M_l^j`.
pub fn derivative_jump(ladder: &MassLadder, j: u32) -> Result<Complex64> {
    let terms = pole_terms(ladder, 0, ladder.n())?;
    let moment: f64 = terms.iter().map(|&(m, c)| c * m.powi(j as i32)).sum();
    Ok(I * (-I).powu(j) * moment)
}

/// Number of leading derivatives (starting from the value itself) of the
/// Feynman propagator `G^(0,N)` that are continuous at `tau = 0`.
pub fn smoothness_order(ladder: &MassLadder) -> Result<usize> {
    let terms = pole_terms(ladder, 0, ladder.n())?;
    let mut order = 0;
    loop {
        let (signed, absolute) = terms.iter().fold((0.0, 0.0), |(s, a), &(m, c)| {
            let t = c * m.powi(order as i32);
            (s + t, a + t.abs())
        });
        if signed.abs() > 1e-10 * absolute {
            return Ok(order);
        }
        order += 1;
    }
}

/// `int_{omega0+1}^{cutoff} dw / (omega0 - w)`: the unregularised equal-time
/// loop integrand with a one-sided cutoff. Grows like `-ln(cutoff)`.
pub fn bare_loop_integral(omega0: f64, cutoff: f64) -> Result<Complex64> {
    let start = omega0 + 1.0;
    quadrature::integrate(
        |w| Complex64::new(1.0 / (omega0 - w), 0.0),
        &geometric_breakpoints(start, cutoff),
        AdaptiveOptions::default(),
    )
}

/// `int_{M_N+1}^{cutoff} G^(0,N)(w) dw`: the regularised integrand's tail,
/// which converges as the cutoff grows when `N >= 1`.
pub fn regularised_tail_integral(ladder: &MassLadder, cutoff: f64) -> Result<Complex64> {
    let start = ladder.max_mass() + 1.0;
    let n = ladder.n();
    quadrature::integrate(
        |w| g_f_scalar(ladder, 0, n, Complex64::new(w, 0.0)).unwrap_or(ZERO),
        &geometric_breakpoints(start, cutoff),
        AdaptiveOptions::default(),
    )
}

fn geometric_breakpoints(start: f64, end: f64) -> Vec<f64> {
    let mut points = vec![start];
    let mut x = start * 2.0;
    while x < end {
        points.push(x);
        x *= 2.0;
    }
    points.push(end);
    points
}
