//! Time evolution of the driven filter.
//!
//! The amplitude pair `(A_(0), A_(1))` obeys
//!
//! ```text
//! i dA_(0)/dt = W0 A_(0) - v(t) A_(1)
//! i dA_(1)/dt = W1 A_(1) - W1 A_(0)
//! ```
//!
//! which is also the one-quantum Schrodinger equation in the dual basis
//! `b_(L)^dag |0>`. Evolution uses the fourth-order Magnus integrator with
//! two Gauss-Legendre nodes per step: every step is the exponential of a
//! pseudo-anti-Hermitian matrix, so pseudo-unitarity is kept to rounding.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use super::fock::{build_dual_operators, build_fock_operators, FockBasis};
use super::{DriveSignal, FilterSystem};
use crate::error::{Error, Result};

/// Default fixed step, `T / 200` for the default unit pulse width.
pub const DEFAULT_ODE_STEP: f64 = 1.0 / 200.0;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Gauss-Legendre node offsets for the two-stage Magnus step.
const GL_LO: f64 = 0.5 - 0.288_675_134_594_812_9;
const GL_HI: f64 = 0.5 + 0.288_675_134_594_812_9;
/// sqrt(3) / 12
const MAGNUS_COMMUTATOR: f64 = 0.144_337_567_297_406_4;

/// Propagator `U(t_f, t_i)` of the amplitude pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub Matrix2<Complex64>);

impl TransferMatrix {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    /// `U(t3, t2) * U(t2, t1)`.
    pub fn then(&self, later: &TransferMatrix) -> TransferMatrix {
        TransferMatrix(later.0 * self.0)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn apply(&self, amplitudes: [Complex64; 2]) -> [Complex64; 2] {
        let v = self.0 * Vector2::new(amplitudes[0], amplitudes[1]);
        [v[0], v[1]]
    }

    /// `<0| a_(1) U b_(0)^dag |0>`.
    pub fn out_in(&self) -> Complex64 {
        self.0[(1, 0)]
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn generator(system: &FilterSystem, v: f64) -> Matrix2<Complex64> {
    let (w0, w1) = (system.omega0(), system.omega1());
    Matrix2::new(
        Complex64::new(w0, 0.0),
        Complex64::new(-v, 0.0),
        Complex64::new(-w1, 0.0),
        Complex64::new(w1, 0.0),
    )
}

fn grid(t_i: f64, t_f: f64, step: f64) -> (usize, f64) {
    let span = t_f - t_i;
    let n = ((span / step) - 1e-9).ceil().max(1.0) as usize;
    (n, span / n as f64)
}

/// Fourth-order Magnus integration of `i dU/dt = H(t) U` on a uniform grid.
fn magnus<H>(hamiltonian: H, dim: usize, t_i: f64, t_f: f64, step: f64) -> DMatrix<Complex64>
where
    H: Fn(f64) -> DMatrix<Complex64>,
{
    let mut u = DMatrix::identity(dim, dim);
    if t_f <= t_i {
        return u;
    }
    let (n, h) = grid(t_i, t_f, step);
    for j in 0..n {
        let t = t_i + j as f64 * h;
        let h1 = hamiltonian(t + GL_LO * h);
        let h2 = hamiltonian(t + GL_HI * h);
        let commutator = &h2 * &h1 - &h1 * &h2;
        let omega = (&h1 + &h2) * (-I * (0.5 * h)) - commutator * Complex64::new(MAGNUS_COMMUTATOR * h * h, 0.0);
        u = omega.exp() * u;
    }
    u
}

fn magnus2<V>(system: &FilterSystem, drive: V, t_i: f64, t_f: f64, step: f64) -> Matrix2<Complex64>
where
    V: Fn(f64) -> f64,
{
    let mut u = Matrix2::identity();
    if t_f <= t_i {
        return u;
    }
    let (n, h) = grid(t_i, t_f, step);
    for j in 0..n {
        let t = t_i + j as f64 * h;
        let h1 = generator(system, drive(t + GL_LO * h));
        let h2 = generator(system, drive(t + GL_HI * h));
        let commutator = h2 * h1 - h1 * h2;
        let omega = (h1 + h2) * (-I * (0.5 * h)) - commutator * Complex64::new(MAGNUS_COMMUTATOR * h * h, 0.0);
        u = omega.exp() * u;
    }
    u
}

fn check_step(drive: &DriveSignal, step: f64) -> Result<()> {
    let limit = drive.max_step();
    if !(step > 0.0) || step > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step, limit });
    }
    Ok(())
}

/// Integrates the amplitude equations from `t_i` to `t_f` with fixed `step`.
pub fn evolve_transfer(
    system: &FilterSystem,
    drive: &DriveSignal,
    t_i: f64,
    t_f: f64,
    step: f64,
) -> Result<TransferMatrix> {
    check_step(drive, step)?;
    if t_f < t_i {
        return Err(Error::InvalidParameter {
            name: "t_f",
            reason: format!("must not precede t_i ({t_f} < {t_i})"),
        });
    }
    Ok(TransferMatrix(magnus2(system, |t| drive.value(t), t_i, t_f, step)))
}

/// `<0| a_(1) U(t_max, t_min) b_(0)^dag |0>` over the drive window.
pub fn exact_amplitude(system: &FilterSystem, drive: &DriveSignal, step: f64) -> Result<Complex64> {
    let (t_i, t_f) = drive.window();
    Ok(evolve_transfer(system, drive, t_i, t_f, step)?.out_in())
}

/// `i theta(tau) sigma^2 (e^{-i W0 tau} - e^{-i W1 tau})`.
pub fn response_residue(system: &FilterSystem, tau: f64) -> Complex64 {
    if tau <= 0.0 {
        return ZERO;
    }
    let s2 = system.sigma_squared();
    I * s2 * ((-I * system.omega0() * tau).exp() - (-I * system.omega1() * tau).exp())
}

/// Response of `A_(1)` at `tau` to a unit impulse source in the `A_(0)`
/// equation. The residue form is returned after it is checked against the
/// impulse evolved by the free integrator.
pub fn response_function(system: &FilterSystem, tau: f64) -> Result<Complex64> {
    let residue = response_residue(system, tau);
    let evolved = if tau > 0.0 {
        // The impulse sets A_(0)(0+) = i, A_(1)(0+) = 0.
        let (n, h) = grid(0.0, tau, DEFAULT_ODE_STEP);
        let g = generator(system, 0.0);
        let step = (g * (-I * h)).exp();
        let mut a = Vector2::new(I, ZERO);
        for _ in 0..n {
            a = step * a;
        }
        a[1]
    } else {
        ZERO
    };
    let diff = (residue - evolved).norm();
    if diff > 1e-8 {
        return Err(Error::OracleMismatch {
            what: "response residue vs impulse evolution",
            diff,
            tol: 1e-8,
        });
    }
    Ok(residue)
}

/// Coefficient of the commutator `[a_(1)(tau), b_(0)^dag(0)]` of the free
/// interaction-picture operators, read off the Fock matrices.
pub fn kubo_commutator(system: &FilterSystem, n_max: usize, tau: f64) -> Result<Complex64> {
    let ops = build_fock_operators(n_max)?;
    let s = Complex64::new(system.sigma(), 0.0);
    let p0 = (-I * system.omega0() * tau).exp();
    let p1 = (-I * system.omega1() * tau).exp();
    let a_out = (ops.a0.matrix() * p0 + ops.a1.matrix() * p1) * s;
    let b_in = (ops.a0_dag.matrix() - ops.a1_dag.matrix()) * s;
    let commutator = &a_out * &b_in - &b_in * &a_out;
    let commutator = super::fock::OperatorMatrix::from_matrix(n_max, commutator);
    let coefficient = commutator.entry(0, 0);
    let deviation = commutator.protected_scalar_deviation(&ops.basis, coefficient);
    if deviation > 1e-12 {
        return Err(Error::NonScalarCommutator { deviation });
    }
    Ok(coefficient)
}

/// An operator restricted to one total-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMatrix {
    pub n_total: usize,
    /// `(n0, n1)` labels, in basis order.
    pub states: Vec<(usize, usize)>,
    pub matrix: DMatrix<Complex64>,
    /// Diagonal of the sign operator on the sector.
    pub signs: Vec<f64>,
}

impl SectorMatrix {
    fn sign_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.signs.len(),
            self.signs.iter().map(|&s| Complex64::new(s, 0.0)),
        ))
    }

    /// `|| I S^dagger I S - 1 ||` (Frobenius).
    pub fn pseudo_unitarity_defect(&self) -> f64 {
        let i = self.sign_matrix();
        let n = self.matrix.nrows();
        (&i * self.matrix.adjoint() * &i * &self.matrix - DMatrix::identity(n, n)).norm()
    }

    /// `|| S^dagger S - 1 ||` (Frobenius).
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        (self.matrix.adjoint() * &self.matrix - DMatrix::identity(n, n)).norm()
    }

    pub fn identity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        (&self.matrix - DMatrix::identity(n, n)).norm()
    }
}

/// Interaction-picture S-matrix of the drive term `-v(t) b_(0)^dag a_(1)`
/// over the drive window, restricted to the sector with `n_total` quanta.
///
/// The coupling conserves total quanta, so the restriction is exact.
pub fn sector_s_matrix(
    system: &FilterSystem,
    drive: &DriveSignal,
    n_total: usize,
    step: f64,
) -> Result<SectorMatrix> {
    check_step(drive, step)?;
    let n_max = n_total.max(2);
    let dual = build_dual_operators(system, n_max)?;
    let basis = FockBasis::new(n_max)?;
    let range = basis.sector(n_total);
    let states: Vec<(usize, usize)> = basis.states()[range.clone()].to_vec();
    let dim = states.len();

    let energies: Vec<f64> = states
        .iter()
        .map(|&(n0, n1)| system.omega0() * n0 as f64 + system.omega1() * n1 as f64)
        .collect();
    let free = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        energies.iter().map(|&e| Complex64::new(e, 0.0)),
    ));
    let coupling = (dual.b0_dag.matrix() * dual.a_1.matrix())
        .view((range.start, range.start), (dim, dim))
        .into_owned();

    let (t_i, t_f) = drive.window();
    let u = magnus(
        |t| &free - &coupling * Complex64::new(drive.value(t), 0.0),
        dim,
        t_i,
        t_f,
        step,
    );
    let phase = |t: f64, sign: f64| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            energies.iter().map(|&e| (I * (sign * e * t)).exp()),
        ))
    };
    let s = phase(t_f, 1.0) * u * phase(t_i, -1.0);
    let signs = states
        .iter()
        .map(|&(_, n1)| if n1 % 2 == 1 { -1.0 } else { 1.0 })
        .collect();
    Ok(SectorMatrix {
        n_total,
        states,
        matrix: s,
        signs,
    })
}

/// `<0| a_(1)(t_f) S b_(0)^dag(t_i) |0>` from a one-quantum sector S-matrix.
pub fn in_out_amplitude(system: &FilterSystem, s: &SectorMatrix, t_i: f64, t_f: f64) -> Result<Complex64> {
    if s.n_total != 1 {
        return Err(Error::InvalidParameter {
            name: "n_total",
            reason: "in/out amplitudes live in the one-quantum sector".into(),
        });
    }
    let sigma = system.sigma();
    let mut out = Vec::with_capacity(2);
    let mut inn = Vec::with_capacity(2);
    for &(n0, _) in &s.states {
        if n0 == 1 {
            out.push(sigma * (-I * system.omega0() * t_f).exp());
            inn.push(sigma * (I * system.omega0() * t_i).exp());
        } else {
            out.push(sigma * (-I * system.omega1() * t_f).exp());
            inn.push(-sigma * (I * system.omega1() * t_i).exp());
        }
    }
    let mut total = ZERO;
    for (r, o) in out.iter().enumerate() {
        for (c, i) in inn.iter().enumerate() {
            total += o * s.matrix[(r, c)] * i;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system() -> FilterSystem {
        FilterSystem::default()
    }

    fn drive(v0: f64) -> DriveSignal {
        DriveSignal::gaussian(v0, 1.0).unwrap()
    }

    // Classical RK4 with a much finer step, as an independent oracle.
    fn rk4_transfer(system: &FilterSystem, d: &DriveSignal, t_i: f64, t_f: f64, n: usize) -> Matrix2<Complex64> {
        let h = (t_f - t_i) / n as f64;
        let f = |t: f64, u: &Matrix2<Complex64>| generator(system, d.value(t)) * u * (-I);
        let mut u = Matrix2::identity();
        for j in 0..n {
            let t = t_i + j as f64 * h;
            let k1 = f(t, &u);
            let k2 = f(t + 0.5 * h, &(u + k1 * Complex64::new(0.5 * h, 0.0)));
            let k3 = f(t + 0.5 * h, &(u + k2 * Complex64::new(0.5 * h, 0.0)));
            let k4 = f(t + h, &(u + k3 * Complex64::new(h, 0.0)));
            u += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
        }
        u
    }

    #[test]
    fn identity_for_zero_span() {
        let u = evolve_transfer(&system(), &drive(0.1), 1.5, 1.5, 0.005).unwrap();
        assert_eq!(u, TransferMatrix::identity());
    }

    #[test]
    fn step_limit() {
        let err = evolve_transfer(&system(), &drive(0.1), 0.0, 1.0, 0.02).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
        assert!(sector_s_matrix(&system(), &drive(0.1), 1, 0.02).is_err());
    }

    #[test]
    fn free_evolution_determinant() {
        let u = evolve_transfer(&system(), &drive(0.0), -8.0, 8.0, 0.005).unwrap();
        assert!((u.determinant().norm() - 1.0).abs() < 1e-8);
        let expected = (-I * 11.0 * 16.0).exp();
        assert!((u.determinant() - expected).norm() < 1e-8);
    }

    #[test]
    fn composition() {
        let (s, d) = (system(), drive(0.3));
        let u1 = evolve_transfer(&s, &d, -8.0, -1.0, 0.005).unwrap();
        let u2 = evolve_transfer(&s, &d, -1.0, 8.0, 0.005).unwrap();
        let u = evolve_transfer(&s, &d, -8.0, 8.0, 0.005).unwrap();
        assert!(u1.then(&u2).max_abs_diff(&u) < 1e-8);
    }

    #[test]
    fn agrees_with_fine_rk4() {
        let (s, d) = (system(), drive(0.5));
        let u = evolve_transfer(&s, &d, -8.0, 8.0, 0.005).unwrap();
        let reference = rk4_transfer(&s, &d, -8.0, 8.0, 64_000);
        let diff = (u.0 - reference).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn step_halving() {
        let (s, d) = (system(), drive(0.1));
        let u1 = evolve_transfer(&s, &d, -8.0, 8.0, 0.005).unwrap();
        let u2 = evolve_transfer(&s, &d, -8.0, 8.0, 0.0025).unwrap();
        let diff = u1.max_abs_diff(&u2);
        assert!(diff < 1e-9, "{diff}");
    }

    #[test]
    fn response_examples() {
        let s = system();
        assert_eq!(response_function(&s, -0.5).unwrap(), ZERO);
        assert_eq!(response_function(&s, 0.0).unwrap(), ZERO);
        assert!(response_function(&s, 1e-6).unwrap().norm() < 1e-4);
        let r = response_function(&s, 1.0).unwrap();
        let expected = I * (10.0 / 9.0) * ((-I).exp() - (-I * 10.0).exp());
        assert!((r - expected).norm() < 1e-14);
    }

    #[test]
    fn kubo_examples() {
        let s = system();
        assert!(kubo_commutator(&s, 8, 0.0).unwrap().norm() < 1e-15);
        let c = kubo_commutator(&s, 8, 1.0).unwrap();
        let expected = (10.0 / 9.0) * ((-I).exp() - (-I * 10.0).exp());
        assert!((c - expected).norm() < 1e-13);
        for tau in [0.3, 1.0, 5.0] {
            let lhs = I * kubo_commutator(&s, 8, tau).unwrap();
            assert!((lhs - response_function(&s, tau).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn s_matrix_trivial_without_drive() {
        let m = sector_s_matrix(&system(), &drive(0.0), 2, 0.005).unwrap();
        assert!(m.identity_defect() < 1e-9);
    }

    #[test]
    fn s_matrix_pseudo_unitary() {
        let m = sector_s_matrix(&system(), &drive(0.1), 1, 0.005).unwrap();
        assert!(m.pseudo_unitarity_defect() <= 1e-8);
        let short = DriveSignal::gaussian(0.5, 0.2).unwrap();
        let m = sector_s_matrix(&system(), &short, 3, 0.001).unwrap();
        assert!(m.pseudo_unitarity_defect() <= 1e-8);
        assert!(m.unitarity_defect() > 1e-3);
    }

    #[test]
    fn adiabatic_pulse_is_nearly_unitary() {
        // Non-unitarity needs drive power at W1 - W0; a unit-width pulse has
        // almost none.
        let m = sector_s_matrix(&system(), &drive(0.5), 1, 0.005).unwrap();
        assert!(m.unitarity_defect() < 1e-6);
        assert!(m.pseudo_unitarity_defect() <= 1e-8);
    }

    #[test]
    fn in_out_amplitude_matches_transfer() {
        let (s, d) = (system(), drive(0.2));
        let m = sector_s_matrix(&s, &d, 1, 0.005).unwrap();
        let (t_i, t_f) = d.window();
        let a = in_out_amplitude(&s, &m, t_i, t_f).unwrap();
        let b = exact_amplitude(&s, &d, 0.005).unwrap();
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    }
}
