//! Scalar regularisation algebra over a ladder of masses.
//!
//! For masses `M_0..M_N` the filter functions are
//!
//! ```text
//! G^(K,L)(z) = M_K^-1 * prod_{l=K..L} (1 - z/M_l)^-1     K <= L
//! G^(K,L)(z) = 0                                          K >  L
//! ```
//!
//! and `G^(0,N)` splits into single poles `sum_K c_K / (M_K - z)` with
//! `c_K = eps_K * sigma_K^2`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum relative separation between two ladder masses.
pub const MIN_RELATIVE_SEPARATION: f64 = 1e-9;

/// Relative guard distance around each pole `M_l`.
pub const POLE_GUARD: f64 = 1e-12;

/// An ordered list of distinct positive masses `M_0..M_N`.
///
/// Masses are kept in the order given; nothing here requires them sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct MassLadder {
    masses: Vec<f64>,
}

impl MassLadder {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidParameter {
                name: "masses",
                reason: "a ladder needs at least one mass".into(),
            });
        }
        for (index, &value) in masses.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidMass { index, value });
            }
        }
        for i in 0..masses.len() {
            for j in (i + 1)..masses.len() {
                let (a, b) = (masses[i], masses[j]);
                let gap = (a - b).abs() / a.max(b);
                if gap <= MIN_RELATIVE_SEPARATION {
                    return Err(Error::DegenerateLadder {
                        first: a,
                        second: b,
                        gap,
                    });
                }
            }
        }
        Ok(Self { masses })
    }

    /// Number of regulators, `N` (the ladder holds `N + 1` masses).
    pub fn n(&self) -> usize {
        self.masses.len() - 1
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, index: usize) -> f64 {
        self.masses[index]
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_ascending(&self) -> bool {
        self.masses.windows(2).all(|w| w[0] < w[1])
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index > self.n() {
            Err(Error::IndexOutOfRange {
                index,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    /// The contiguous sub-ladder `M_K..M_L`.
    ///
    /// `G^(K,L)` of this ladder equals `G^(0,L-K)` of the sub-ladder.
    pub fn sub_ladder(&self, k: usize, l: usize) -> Result<MassLadder> {
        self.check_index(k)?;
        self.check_index(l)?;
        if k > l {
            return Err(Error::IndexOrder { k, l });
        }
        Ok(MassLadder {
            masses: self.masses[k..=l].to_vec(),
        })
    }
}

/// Evaluates `G^(K,L)(z)`.
pub fn g_f_scalar(ladder: &MassLadder, k: usize, l: usize, z: Complex64) -> Result<Complex64> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if k > l {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut value = Complex64::new(1.0 / ladder.mass(k), 0.0);
    for &m in &ladder.masses()[k..=l] {
        guard_pole(z, m)?;
        value /= Complex64::new(1.0, 0.0) - z / m;
    }
    Ok(value)
}

fn guard_pole(z: Complex64, m: f64) -> Result<()> {
    if (z - m).norm() <= POLE_GUARD * m {
        return Err(Error::PoleProximity {
            re: z.re,
            im: z.im,
            pole: m,
        });
    }
    Ok(())
}

/// Single-pole decomposition of `G^(0,N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionDecomposition {
    coefficients: Vec<f64>,
    signs: Vec<i8>,
    weights: Vec<f64>,
}

impl PartialFractionDecomposition {
    /// `c_K`, the residue weight of the pole at `M_K`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `eps_K = sign(c_K)`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `sigma_K = sqrt(|c_K|)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_K c_K / (M_K - z)`.
    pub fn evaluate(&self, ladder: &MassLadder, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .zip(ladder.masses())
            .map(|(&c, &m)| c / (m - z))
            .sum()
    }
}

/// Computes `c_K = prod_{l>=1} M_l / prod_{l != K} (M_l - M_K)`.
pub fn decompose(ladder: &MassLadder) -> Result<PartialFractionDecomposition> {
    let masses = ladder.masses();
    let numerator: f64 = masses[1..].iter().product();
    let mut coefficients = Vec::with_capacity(masses.len());
    for (k, &mk) in masses.iter().enumerate() {
        let mut denominator = 1.0;
        for (l, &ml) in masses.iter().enumerate() {
            if l == k {
                continue;
            }
            let gap = (ml - mk).abs() / ml.max(mk);
            if gap <= MIN_RELATIVE_SEPARATION {
                return Err(Error::DegenerateLadder {
                    first: mk,
                    second: ml,
                    gap,
                });
            }
            denominator *= ml - mk;
        }
        coefficients.push(numerator / denominator);
    }
    let signs = coefficients
        .iter()
        .map(|&c| if c < 0.0 { -1 } else { 1 })
        .collect();
    let weights = coefficients.iter().map(|c| c.abs().sqrt()).collect();
    Ok(PartialFractionDecomposition {
        coefficients,
        signs,
        weights,
    })
}

/// Residual of both recursion identities at `z`, relative to the magnitudes
/// involved.
///
/// ```text
/// [(M_L - z)/M_L]     G^(K,L)(z) = G^(K,L-1)(z)
/// [(M_K - z)/M_{K+1}] G^(K,L)(z) = G^(K+1,L)(z)
/// ```
pub fn recursion_residual(ladder: &MassLadder, k: usize, l: usize, z: Complex64) -> Result<f64> {
    ladder.check_index(k)?;
    ladder.check_index(l)?;
    if k >= l {
        return Err(Error::IndexOrder { k, l });
    }
    let g = g_f_scalar(ladder, k, l, z)?;
    let shorter_top = g_f_scalar(ladder, k, l - 1, z)?;
    let shorter_bottom = g_f_scalar(ladder, k + 1, l, z)?;
    let (mk, mk1, ml) = (ladder.mass(k), ladder.mass(k + 1), ladder.mass(l));

    let top = (ml - z) / ml * g;
    let bottom = (mk - z) / mk1 * g;
    let scale_top = g.norm().max(shorter_top.norm());
    let scale_bottom = g.norm().max(shorter_bottom.norm());
    let r_top = (top - shorter_top).norm() / scale_top;
    let r_bottom = (bottom - shorter_bottom).norm() / scale_bottom;
    Ok(r_top.max(r_bottom))
}

/// Normalised sum rules `|sum_K c_K M_K^j| / sum_K |c_K| M_K^j` for
/// `j = 0..N-1`. The `j = 0` entry is the Pauli-Villars cancellation.
pub fn sum_rule_residuals(pfd: &PartialFractionDecomposition, ladder: &MassLadder) -> Vec<f64> {
    (0..ladder.n())
        .map(|j| {
            let (signed, absolute) = pfd.coefficients().iter().zip(ladder.masses()).fold(
                (0.0, 0.0),
                |(s, a), (&c, &m)| {
                    let term = c * m.powi(j as i32);
                    (s + term, a + term.abs())
                },
            );
            signed.abs() / absolute
        })
        .collect()
}

/// Raw moments `sum_K c_K M_K^j`, without normalisation.
pub fn moment(pfd: &PartialFractionDecomposition, ladder: &MassLadder, j: u32) -> f64 {
    pfd.coefficients()
        .iter()
        .zip(ladder.masses())
        .map(|(&c, &m)| c * m.powi(j as i32))
        .sum()
}
