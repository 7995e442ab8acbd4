//! Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands on a
//! real interval, and the trapezoid rule on circles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Absolute error target per accepted panel.
    pub panel_tolerance: f64,
    /// Hard cap on the number of panels evaluated.
    pub max_panels: usize,
    /// Panels narrower than this are accepted regardless of the error estimate.
    pub min_width: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            panel_tolerance: 1e-9,
            max_panels: 4_000_000,
            min_width: 1e-13,
        }
    }
}

/// One 15-point Kronrod panel: (estimate, error estimate).
fn kronrod_panel<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += sum * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    let estimate = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (estimate, error)
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`, starting from
/// the given panel boundaries and bisecting any panel whose error estimate
/// exceeds the per-panel tolerance.
pub fn integrate<F>(f: F, breakpoints: &[f64], options: AdaptiveOptions) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut stack: Vec<(f64, f64)> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .rev()
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;
    let mut worst = 0.0f64;
    while let Some((a, b)) = stack.pop() {
        panels += 1;
        if panels > options.max_panels {
            return Err(Error::QuadratureFailure {
                intervals: panels,
                error: worst,
            });
        }
        let (estimate, error) = kronrod_panel(&f, a, b);
        if error <= options.panel_tolerance || (b - a) <= options.min_width {
            total += estimate;
            worst = worst.max(error);
        } else {
            let mid = 0.5 * (a + b);
            stack.push((mid, b));
            stack.push((a, mid));
        }
    }
    Ok(total)
}

/// Trapezoid rule for `(1/2 pi i) * contour integral` of `f` around the circle
/// `|z - center| = radius`, traversed counterclockwise.
///
/// Exponentially convergent for integrands analytic in an annulus around
/// the circle.
pub fn circle_integral<F>(f: F, center: Complex64, radius: f64, points: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    // dz = i r e^{i theta} dtheta, so (1/2 pi i) dz = r e^{i theta} dtheta / (2 pi).
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..points {
        let theta = 2.0 * PI * j as f64 / points as f64;
        let w = Complex64::from_polar(radius, theta);
        sum += f(center + w) * w;
    }
    sum / points as f64
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (num, den) = xs.iter().zip(ys).fold((0.0, 0.0), |(num, den), (&x, &y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    num / den
}
