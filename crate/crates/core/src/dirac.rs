//! Momentum-space algebra of the regularised fermion filter.
//!
//! Rational functions of the ladder are evaluated at the matrix argument
//! `p-slash = gamma^mu p_mu` (Dirac representation, metric `(+,-,-,-)`).
//! Since `p-slash^2 = p^2`, every factor is rationalised as
//!
//! ```text
//! (1 - p-slash / M)^-1 = M (M + p-slash) / (M^2 - p^2)
//! ```
//!
//! The `p_0` integrals behind the anticommutator and the contractions are
//! done by residues at `p_0 = +-E_l`, `E_l = sqrt(M_l^2 + |p|^2)`. Closed
//! contours use the measure `dp_0 / 2 pi i` oriented so that the diagonal
//! equal-time anticommutator is `+gamma^0`; open ones use `dp_0 / 2 pi` and
//! pass below the positive-energy poles and above the negative-energy ones.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::quadrature::fit_slope;
use crate::reg_algebra::{g_f_scalar, MassLadder};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative distance of `p^2` from any `M_l^2` below which evaluation is refused.
pub const MASS_SHELL_GUARD: f64 = 1e-10;

/// A 4x4 complex matrix in spinor space.
pub type SpinorMatrixValue = Matrix4<Complex64>;

/// Metric `g^{mu nu} = diag(+1, -1, -1, -1)`.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// The four gamma matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    gamma: [SpinorMatrixValue; 4],
}

impl GammaSet {
    /// Dirac representation: `gamma^0 = diag(1, 1, -1, -1)`,
    /// `gamma^i = [[0, sigma_i], [-sigma_i, 0]]`.
    pub fn dirac() -> Self {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let pauli = [
            [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        ];
        let mut gamma = [SpinorMatrixValue::zeros(); 4];
        for d in 0..4 {
            gamma[0][(d, d)] = if d < 2 { ONE } else { -ONE };
        }
        for (i, s) in pauli.iter().enumerate() {
            for r in 0..2 {
                for q in 0..2 {
                    gamma[i + 1][(r, q + 2)] = s[r][q];
                    gamma[i + 1][(r + 2, q)] = -s[r][q];
                }
            }
        }
        Self { gamma }
    }

    pub fn gamma(&self, mu: usize) -> &SpinorMatrixValue {
        &self.gamma[mu]
    }

    /// Largest entry of `{gamma^mu, gamma^nu} - 2 g^{mu nu}` over all 16 pairs.
    pub fn clifford_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu];
                let target = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
                let diff = anti - SpinorMatrixValue::identity() * Complex64::new(target, 0.0);
                worst = worst.max(diff.camax());
            }
        }
        worst
    }

    /// Largest deviation from `gamma^0` self-adjoint and `gamma^i` anti-self-adjoint.
    pub fn adjointness_residual(&self) -> f64 {
        (0..4)
            .map(|mu| {
                let adj = self.gamma[mu].adjoint();
                let expected = self.gamma[mu] * Complex64::new(METRIC[mu], 0.0);
                (adj - expected).camax()
            })
            .fold(0.0, f64::max)
    }
}

impl Default for GammaSet {
    fn default() -> Self {
        Self::dirac()
    }
}

/// Four-momentum with a complex energy component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    pub p0: Complex64,
    pub pvec: [f64; 3],
}

impl FourMomentum {
    pub fn new(p0: Complex64, pvec: [f64; 3]) -> Result<Self> {
        if !(p0.re.is_finite() && p0.im.is_finite() && pvec.iter().all(|x| x.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "momentum",
                reason: "components must be finite".into(),
            });
        }
        Ok(Self { p0, pvec })
    }

    pub fn real(p0: f64, pvec: [f64; 3]) -> Result<Self> {
        Self::new(Complex64::new(p0, 0.0), pvec)
    }

    pub fn spatial_norm_sqr(&self) -> f64 {
        self.pvec.iter().map(|x| x * x).sum()
    }

    /// `p^2 = p_0^2 - |p|^2`.
    pub fn square(&self) -> Complex64 {
        self.p0 * self.p0 - self.spatial_norm_sqr()
    }
}

/// `gamma^0 p_0 - gamma . p`.
pub fn slash(gammas: &GammaSet, p: &FourMomentum) -> SpinorMatrixValue {
    let mut out = gammas.gamma(0) * p.p0;
    for i in 0..3 {
        out -= gammas.gamma(i + 1) * Complex64::new(p.pvec[i], 0.0);
    }
    out
}

/// `G^(K,L)(p-slash) = M_K^-1 prod_{l=K..L} M_l (M_l + p-slash) / (M_l^2 - p^2)`,
/// and the zero matrix when `K > L`.
pub fn g_f_matrix(
    ladder: &MassLadder,
    k: usize,
    l: usize,
    p: &FourMomentum,
    gammas: &GammaSet,
) -> Result<SpinorMatrixValue> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if k > l {
        return Ok(SpinorMatrixValue::zeros());
    }
    let ps = slash(gammas, p);
    let p2 = p.square();
    let id = SpinorMatrixValue::identity();
    let mut out = id / Complex64::new(ladder.mass(k), 0.0);
    for &m in &ladder.masses()[k..=l] {
        let denom = m * m - p2;
        if denom.norm() <= MASS_SHELL_GUARD * m * m {
            return Err(Error::PoleProximity {
                re: p.p0.re,
                im: p.p0.im,
                pole: (m * m + p.spatial_norm_sqr()).sqrt(),
            });
        }
        out = out * (id * Complex64::new(m, 0.0) + ps) * (m / denom);
    }
    Ok(out)
}

/// Relative residual of both recursion identities with `z -> p-slash`:
///
/// ```text
/// [(M_L - p-slash)/M_L]     G^(K,L) = G^(K,L-1)
/// [(M_K - p-slash)/M_{K+1}] G^(K,L) = G^(K+1,L)
/// ```
pub fn matrix_recursion_residual(
    ladder: &MassLadder,
    k: usize,
    l: usize,
    p: &FourMomentum,
    gammas: &GammaSet,
) -> Result<f64> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if k >= l {
        return Err(Error::IndexOrder { k, l });
    }
    let g = g_f_matrix(ladder, k, l, p, gammas)?;
    let shorter_top = g_f_matrix(ladder, k, l - 1, p, gammas)?;
    let shorter_bottom = g_f_matrix(ladder, k + 1, l, p, gammas)?;
    let ps = slash(gammas, p);
    let id = SpinorMatrixValue::identity();
    let (mk, mk1, ml) = (ladder.mass(k), ladder.mass(k + 1), ladder.mass(l));

    let top = (id * Complex64::new(ml, 0.0) - ps) * g / Complex64::new(ml, 0.0);
    let bottom = (id * Complex64::new(mk, 0.0) - ps) * g / Complex64::new(mk1, 0.0);
    let r_top = (top - shorter_top).norm() / g.norm().max(shorter_top.norm());
    let r_bottom = (bottom - shorter_bottom).norm() / g.norm().max(shorter_bottom.norm());
    Ok(r_top.max(r_bottom))
}

/// Deviation of `G^(K,L)(p-slash)` from its spectral form
/// `g(z) P_+ + g(-z) P_-`, `z = sqrt(p^2)`, `P_+- = (1 +- p-slash / z) / 2`,
/// relative to the matrix norm. Requires `p^2` away from zero.
pub fn spectral_residual(
    ladder: &MassLadder,
    k: usize,
    l: usize,
    p: &FourMomentum,
    gammas: &GammaSet,
) -> Result<f64> {
    let z = p.square().sqrt();
    if z.norm() <= MASS_SHELL_GUARD * ladder.max_mass() {
        return Err(Error::InvalidParameter {
            name: "momentum",
            reason: "p-slash is not diagonalisable on the light cone".into(),
        });
    }
    let g = g_f_matrix(ladder, k, l, p, gammas)?;
    let ps = slash(gammas, p);
    let id = SpinorMatrixValue::identity();
    let plus = (id + ps / z) * Complex64::new(0.5, 0.0);
    let minus = (id - ps / z) * Complex64::new(0.5, 0.0);
    let spectral = plus * g_f_scalar(ladder, k, l, z)? + minus * g_f_scalar(ladder, k, l, -z)?;
    Ok((g - spectral).norm() / g.norm().max(f64::MIN_POSITIVE))
}

/// `(M_0 - p-slash)(1 - p-slash/M_1)...(1 - p-slash/M_N)`, the momentum-space
/// symbol of the single-field equation of motion. Inverts `G^(0,N)`.
pub fn inverse_filter_polynomial(ladder: &MassLadder, p: &FourMomentum, gammas: &GammaSet) -> SpinorMatrixValue {
    let ps = slash(gammas, p);
    let id = SpinorMatrixValue::identity();
    let mut out = id * Complex64::new(ladder.mass(0), 0.0) - ps;
    for &m in &ladder.masses()[1..] {
        out *= id - ps / Complex64::new(m, 0.0);
    }
    out
}

/// Residues of `G^(lo,hi)(p-slash(p_0))` at `p_0 = +E_m` and `p_0 = -E_m`,
/// for each `m` in `lo..=hi`.
struct PoleResidues {
    energies: Vec<f64>,
    positive: Vec<SpinorMatrixValue>,
    negative: Vec<SpinorMatrixValue>,
}

fn pole_residues(ladder: &MassLadder, lo: usize, hi: usize, pvec: [f64; 3], gammas: &GammaSet) -> Result<PoleResidues> {
    let masses = &ladder.masses()[lo..=hi];
    let p2: f64 = pvec.iter().map(|x| x * x).sum();
    let energies: Vec<f64> = masses.iter().map(|m| (m * m + p2).sqrt()).collect();
    let id = SpinorMatrixValue::identity();
    let prefactor = masses.iter().product::<f64>() / masses[0];

    let numerator = |p0: f64| {
        let ps = slash(gammas, &FourMomentum { p0: Complex64::new(p0, 0.0), pvec });
        masses
            .iter()
            .fold(id * Complex64::new(prefactor, 0.0), |acc, &m| acc * (id * Complex64::new(m, 0.0) + ps))
    };

    let mut positive = Vec::with_capacity(masses.len());
    let mut negative = Vec::with_capacity(masses.len());
    for (j, (&mj, &ej)) in masses.iter().zip(&energies).enumerate() {
        let mut others = 1.0;
        for (i, &mi) in masses.iter().enumerate() {
            if i != j {
                // E_i^2 - E_j^2 = M_i^2 - M_j^2, taken from the masses to avoid cancellation.
                let gap = (mi - mj) * (mi + mj);
                if (mi - mj).abs() <= crate::reg_algebra::MIN_RELATIVE_SEPARATION * mi.max(mj) {
                    return Err(Error::DegenerateLadder {
                        first: mi.min(mj),
                        second: mi.max(mj),
                        gap: (mi - mj).abs() / mi.max(mj),
                    });
                }
                others *= gap;
            }
        }
        positive.push(numerator(ej) / Complex64::new(-2.0 * ej * others, 0.0));
        negative.push(numerator(-ej) / Complex64::new(2.0 * ej * others, 0.0));
    }
    Ok(PoleResidues {
        energies,
        positive,
        negative,
    })
}

/// `(1/2 pi i) closed-integral G^(L,K)(p-slash) dp_0` at equal times, summed
/// from the residues at `p_0 = +-E_l`. Equals `delta_KL gamma^0`; zero
/// without evaluation when `L > K`.
pub fn equal_time_anticommutator(
    ladder: &MassLadder,
    k: usize,
    l: usize,
    pvec: [f64; 3],
    gammas: &GammaSet,
) -> Result<SpinorMatrixValue> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if l > k {
        return Ok(SpinorMatrixValue::zeros());
    }
    let r = pole_residues(ladder, l, k, pvec, gammas)?;
    let mut out = SpinorMatrixValue::zeros();
    for (pos, neg) in r.positive.iter().zip(&r.negative) {
        out -= pos + neg;
    }
    Ok(out)
}

/// Time-domain contraction of `G^(0,N)(p-slash)` at spatial momentum `pvec`:
/// the `p_0` integral of `G^(0,N) e^{-i p_0 tau}` on `contour`.
///
/// `PLUS` / `MINUS` keep the positive / negative energy poles of the closed
/// contour, `CLOSED` keeps both. `FEYNMAN` is `i PLUS` for `tau > 0` and
/// `-i MINUS` for `tau < 0`; `RETARDED` is `i theta(tau) CLOSED`.
pub fn contraction_time_domain(
    ladder: &MassLadder,
    contour: Contour,
    pvec: [f64; 3],
    tau: f64,
    gammas: &GammaSet,
) -> Result<SpinorMatrixValue> {
    if !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: "must be finite".into(),
        });
    }
    let r = pole_residues(ladder, 0, ladder.n(), pvec, gammas)?;
    let plus = |t: f64| {
        r.positive
            .iter()
            .zip(&r.energies)
            .fold(SpinorMatrixValue::zeros(), |acc, (res, &e)| acc - res * (-I * e * t).exp())
    };
    let minus = |t: f64| {
        r.negative
            .iter()
            .zip(&r.energies)
            .fold(SpinorMatrixValue::zeros(), |acc, (res, &e)| acc - res * (I * e * t).exp())
    };
    Ok(match contour {
        Contour::Plus => plus(tau),
        Contour::Minus => minus(tau),
        Contour::Closed => plus(tau) + minus(tau),
        Contour::Feynman => {
            if tau > 0.0 {
                plus(tau) * I
            } else if tau < 0.0 {
                minus(tau) * (-I)
            } else if ladder.n() == 0 {
                return Err(Error::TauZeroUndefined);
            } else {
                plus(0.0) * I
            }
        }
        Contour::Retarded => {
            if tau > 0.0 {
                (plus(tau) + minus(tau)) * I
            } else {
                SpinorMatrixValue::zeros()
            }
        }
    })
}

/// `lim tau->0+ - lim tau->0-` of the Feynman contraction, `i CLOSED(0)`.
pub fn feynman_jump(ladder: &MassLadder, pvec: [f64; 3], gammas: &GammaSet) -> Result<SpinorMatrixValue> {
    Ok(contraction_time_domain(ladder, Contour::Closed, pvec, 0.0, gammas)? * I)
}

/// Log-log slope of `|G^(0,N)(p-slash)|` along `p_0 = t e^{i angle}` for
/// `t` from `start` to `1e3 start`, at fixed spatial momentum.
pub fn falloff_exponent(ladder: &MassLadder, pvec: [f64; 3], start: f64, angle: f64, gammas: &GammaSet) -> Result<f64> {
    let n = ladder.n();
    let samples = 25;
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for s in 0..samples {
        let t = start * 10f64.powf(3.0 * s as f64 / (samples - 1) as f64);
        let p = FourMomentum::new(Complex64::from_polar(t, angle), pvec)?;
        let g = g_f_matrix(ladder, 0, n, &p, gammas)?;
        xs.push(t.ln());
        ys.push(g.norm().ln());
    }
    Ok(-fit_slope(&xs, &ys))
}
