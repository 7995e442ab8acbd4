//! The exactly solvable two-mode filter.
//!
//! A physical oscillator (frequency `omega0`) and a fictitious one
//! (`omega1 > omega0`) are recombined into dual operator sets; the drive
//! `v(t)` couples the output mode back to the input. Everything here is
//! checked against closed forms: Fock-space matrix identities, the Kubo
//! commutator, the response function and the S-matrix per number sector.

mod born;
mod dynamics;
mod fock;

pub use born::{bare_vacuum_tadpole, born_series, vacuum_tadpole, BornSeries, MAX_ORDER};
pub use dynamics::{
    evolve_transfer, exact_amplitude, in_out_amplitude, kubo_commutator, response_function,
    response_residue, sector_s_matrix, SectorMatrix, TransferMatrix, DEFAULT_ODE_STEP,
};
pub use fock::{
    basis_state, build_dual_operators, build_fock_operators, hamiltonian_matrix,
    oscillator_hamiltonian, pseudo_adjoint, DualOperators, FockBasis, FockOperators,
    OperatorMatrix, SignOperator,
};

use crate::error::{Error, Result};
use crate::reg_algebra::MassLadder;

/// Physical and fictitious frequencies of the toy filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSystem {
    omega0: f64,
    omega1: f64,
}

impl FilterSystem {
    pub fn new(omega0: f64, omega1: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega0",
                reason: format!("must be finite and positive, got {omega0}"),
            });
        }
        if !(omega1.is_finite() && omega1 > omega0) {
            return Err(Error::InvalidParameter {
                name: "omega1",
                reason: format!("must exceed omega0 = {omega0}, got {omega1}"),
            });
        }
        Ok(Self { omega0, omega1 })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    /// `1 / sqrt(1 - omega0/omega1)`.
    pub fn sigma(&self) -> f64 {
        1.0 / (1.0 - self.omega0 / self.omega1).sqrt()
    }

    /// `sigma^2 = omega1 / (omega1 - omega0)`.
    pub fn sigma_squared(&self) -> f64 {
        self.omega1 / (self.omega1 - self.omega0)
    }

    pub fn ladder(&self) -> MassLadder {
        MassLadder::new(vec![self.omega0, self.omega1]).expect("omega1 > omega0 > 0")
    }
}

impl Default for FilterSystem {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            omega1: 10.0,
        }
    }
}

/// Gaussian pulse `v0 exp(-(t - center)^2 / (2 T^2))` on a finite window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSignal {
    amplitude: f64,
    width: f64,
    center: f64,
    t_min: f64,
    t_max: f64,
}

impl DriveSignal {
    /// Window covering eight widths on each side of `t = 0`.
    pub fn gaussian(amplitude: f64, width: f64) -> Result<Self> {
        Self::with_window(amplitude, width, 0.0, -8.0 * width, 8.0 * width)
    }

    pub fn with_window(amplitude: f64, width: f64, center: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::InvalidParameter {
                name: "v0",
                reason: "must be finite".into(),
            });
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter {
                name: "pulse_T",
                reason: format!("must be positive, got {width}"),
            });
        }
        // Tiny slack so that t_min = center - 8T computed in floating point passes.
        let reach = 8.0 * width * (1.0 - 1e-12);
        if center - t_min < reach || t_max - center < reach {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: "must cover at least 8 pulse widths on each side of the center".into(),
            });
        }
        Ok(Self {
            amplitude,
            width,
            center,
            t_min,
            t_max,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn value(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        self.amplitude * (-0.5 * x * x).exp()
    }

    /// `int v dt = v0 T sqrt(2 pi)`.
    pub fn vbar(&self) -> f64 {
        self.amplitude * self.width * (2.0 * std::f64::consts::PI).sqrt()
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        Self { amplitude, ..*self }
    }

    /// Largest allowed integration step, `T / 100`.
    pub fn max_step(&self) -> f64 {
        self.width / 100.0
    }
}
