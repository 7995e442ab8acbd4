//! Dyson series of the driven filter with the regularised kernel.
//!
//! With `D(tau) = i theta(tau) sigma^2 (e^{-i W0 tau} - e^{-i W1 tau})`
//! (the propagator `G^(0,1)` on the Feynman contour), the in/out amplitude
//! `<0| a_(1) U(t_f, t_i) b_(0)^dag |0>` expands as `-i (F_0 + F_1 + ...)`:
//!
//! ```text
//! F_0(t) = D(t - t_i)
//! F_k(t) = int_{t_i}^{t} D(t - s) v(s) F_{k-1}(s) ds
//! ```
//!
//! Each nested integral is accumulated on the integration grid with exact
//! exponential weights against a local cubic interpolant of `v F_{k-1}`.

use num_complex::Complex64;

use super::{DriveSignal, FilterSystem};
use crate::contour::{jump_at_zero, time_domain_propagator, Contour};
use crate::error::{Error, Result};
use crate::reg_algebra::MassLadder;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Highest supported expansion order.
pub const MAX_ORDER: usize = 6;

const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Per-order amplitudes of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BornSeries {
    terms: Vec<Complex64>,
}

impl BornSeries {
    /// `terms()[k]` is the order-`k` contribution.
    pub fn terms(&self) -> &[Complex64] {
        &self.terms
    }

    pub fn partial_sum(&self, order: usize) -> Complex64 {
        self.terms.iter().take(order + 1).sum()
    }

    pub fn partial_sums(&self) -> Vec<Complex64> {
        self.terms
            .iter()
            .scan(ZERO, |acc, &t| {
                *acc += t;
                Some(*acc)
            })
            .collect()
    }
}

/// Weights of `int_0^h e^{-i W (h - u)} g(t_j + u) du` against the four
/// stencil values, for the panel at each of the three stencil offsets.
struct PanelWeights {
    decay: Complex64,
    weights: [[Complex64; 4]; 3],
}

impl PanelWeights {
    fn new(omega: f64, h: f64) -> Self {
        let sub = ((omega.abs() * h) / 0.5).ceil().max(1.0) as usize;
        let mut weights = [[ZERO; 4]; 3];
        for (offset, row) in weights.iter_mut().enumerate() {
            let nodes: [f64; 4] = std::array::from_fn(|q| q as f64 - offset as f64);
            for s in 0..sub {
                let (a, b) = (s as f64 / sub as f64, (s + 1) as f64 / sub as f64);
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                for &(x, w) in &GL8 {
                    for y in [mid - half * x, mid + half * x] {
                        let kernel = (-I * omega * h * (1.0 - y)).exp() * (w * half * h);
                        for (m, slot) in row.iter_mut().enumerate() {
                            let mut basis = 1.0;
                            for q in 0..4 {
                                if q != m {
                                    basis *= (y - nodes[q]) / (nodes[m] - nodes[q]);
                                }
                            }
                            *slot += kernel * basis;
                        }
                    }
                }
            }
        }
        Self {
            decay: (-I * omega * h).exp(),
            weights,
        }
    }

    /// `I(t_j) = int_{t_0}^{t_j} e^{-i W (t_j - s)} g(s) ds` on the grid.
    fn convolve(&self, g: &[Complex64]) -> Vec<Complex64> {
        let n = g.len() - 1;
        let mut out = vec![ZERO; g.len()];
        for j in 0..n {
            let start = j.saturating_sub(1).min(n - 3);
            let row = &self.weights[j - start];
            let panel: Complex64 = (0..4).map(|m| row[m] * g[start + m]).sum();
            out[j + 1] = self.decay * out[j] + panel;
        }
        out
    }
}

/// Expansion of the in/out amplitude over the drive window up to `order`.
pub fn born_series(system: &FilterSystem, drive: &DriveSignal, order: usize, step: f64) -> Result<BornSeries> {
    if order > MAX_ORDER {
        return Err(Error::InvalidParameter {
            name: "order",
            reason: format!("at most {MAX_ORDER}, got {order}"),
        });
    }
    let limit = drive.max_step();
    if !(step > 0.0) || step > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step, limit });
    }
    let (t_i, t_f) = drive.window();
    let n = (((t_f - t_i) / step) - 1e-9).ceil().max(1.0) as usize;
    if n < 3 {
        return Err(Error::QuadratureFailure { intervals: n, error: f64::INFINITY });
    }
    let h = (t_f - t_i) / n as f64;
    let times: Vec<f64> = (0..=n).map(|j| t_i + j as f64 * h).collect();
    let drive_values: Vec<f64> = times.iter().map(|&t| drive.value(t)).collect();

    let s2 = system.sigma_squared();
    let kernel = |tau: f64| {
        if tau <= 0.0 {
            ZERO
        } else {
            I * s2 * ((-I * system.omega0() * tau).exp() - (-I * system.omega1() * tau).exp())
        }
    };
    let w0 = PanelWeights::new(system.omega0(), h);
    let w1 = PanelWeights::new(system.omega1(), h);

    let mut current: Vec<Complex64> = times.iter().map(|&t| kernel(t - t_i)).collect();
    let mut terms = vec![-I * current[n]];
    for _ in 0..order {
        let source: Vec<Complex64> = current.iter().zip(&drive_values).map(|(f, &v)| f * v).collect();
        let i0 = w0.convolve(&source);
        let i1 = w1.convolve(&source);
        current = i0.iter().zip(&i1).map(|(a, b)| I * s2 * (a - b)).collect();
        terms.push(-I * current[n]);
    }
    Ok(BornSeries { terms })
}

/// First-order vacuum-phase loop with the regularised propagator,
/// `-i vbar G^(0,1)(tau = 0)`.
pub fn vacuum_tadpole(system: &FilterSystem, drive: &DriveSignal) -> Complex64 {
    let at_zero = time_domain_propagator(&system.ladder(), Contour::Feynman, 0, 1, 0.0)
        .expect("indices are within a two-mass ladder");
    -I * drive.vbar() * at_zero
}

/// The same loop with the bare propagator taken at `tau -> 0+`.
pub fn bare_vacuum_tadpole(system: &FilterSystem, drive: &DriveSignal) -> Complex64 {
    let bare = MassLadder::new(vec![system.omega0()]).expect("omega0 is positive");
    let at_zero_plus = jump_at_zero(&bare, 0, 0).expect("single-mass ladder");
    -I * drive.vbar() * at_zero_plus
}
