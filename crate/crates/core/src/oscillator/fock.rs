//! Matrix representation of two-mode operators on a truncated Fock space.
//!
//! Basis states `|n0, n1>` with `n0 + n1 <= n_max` are ordered by total
//! quanta and then by `n0` ascending:
//!
//! ```text
//! |0,0>, |0,1>, |1,0>, |0,2>, |1,1>, |2,0>, ...
//! ```
//!
//! so `index(n0, n1) = T (T + 1) / 2 + n0` with `T = n0 + n1`, and every
//! total-number sector is a contiguous block.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FilterSystem;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Canonically ordered two-mode basis with at most `n_max` quanta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    n_max: usize,
    states: Vec<(usize, usize)>,
}

impl FockBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidParameter {
                name: "n_max",
                reason: format!("must be at least 2, got {n_max}"),
            });
        }
        let states = (0..=n_max)
            .flat_map(|total| (0..=total).map(move |n0| (n0, total - n0)))
            .collect();
        Ok(Self { n_max, states })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn index(&self, n0: usize, n1: usize) -> Option<usize> {
        let total = n0 + n1;
        (total <= self.n_max).then(|| total * (total + 1) / 2 + n0)
    }

    /// Index range of the sector with `total` quanta.
    pub fn sector(&self, total: usize) -> std::ops::Range<usize> {
        let start = total * (total + 1) / 2;
        start..start + total + 1
    }

    /// States whose quanta count is below the truncation edge, where the
    /// canonical commutators hold exactly.
    pub fn protected(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&i| self.states[i].0 + self.states[i].1 < self.n_max)
    }
}

/// Dense complex matrix on a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    n_max: usize,
    matrix: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn from_matrix(n_max: usize, matrix: DMatrix<Complex64>) -> Self {
        Self { n_max, matrix }
    }

    pub fn zeros(basis: &FockBasis) -> Self {
        Self::from_matrix(basis.n_max, DMatrix::zeros(basis.dim(), basis.dim()))
    }

    pub fn identity(basis: &FockBasis) -> Self {
        Self::from_matrix(basis.n_max, DMatrix::identity(basis.dim(), basis.dim()))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.n_max, self.matrix.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_matrix(self.n_max, &self.matrix * factor)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self::from_matrix(
            self.n_max,
            &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        )
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Block of the sector with `total` quanta.
    pub fn sector_block(&self, basis: &FockBasis, total: usize) -> DMatrix<Complex64> {
        let r = basis.sector(total);
        self.matrix.view((r.start, r.start), (r.len(), r.len())).into_owned()
    }

    /// Largest deviation from `coefficient * identity` over the columns of
    /// protected states.
    pub fn protected_scalar_deviation(&self, basis: &FockBasis, coefficient: Complex64) -> f64 {
        let mut worst = 0.0f64;
        for col in basis.protected() {
            for row in 0..self.dim() {
                let target = if row == col { coefficient } else { ZERO };
                worst = worst.max((self.matrix[(row, col)] - target).norm());
            }
        }
        worst
    }

    pub fn apply(&self, state: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(state);
        (&self.matrix * v).iter().copied().collect()
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix::from_matrix(self.n_max, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix::from_matrix(self.n_max, &self.matrix - &rhs.matrix)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix::from_matrix(self.n_max, &self.matrix * &rhs.matrix)
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        OperatorMatrix::from_matrix(self.n_max, &self.matrix * Complex64::new(rhs, 0.0))
    }
}

/// Diagonal sign operator `eps_0^{n0} eps_1^{n1}`; in the two-mode filter
/// `eps_0 = +1`, `eps_1 = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignOperator {
    diagonal: Vec<f64>,
}

impl SignOperator {
    pub fn new(basis: &FockBasis, signs: [i8; 2]) -> Self {
        let pow = |s: i8, n: usize| if s < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
        let diagonal = basis
            .states()
            .iter()
            .map(|&(n0, n1)| pow(signs[0], n0) * pow(signs[1], n1))
            .collect();
        Self { diagonal }
    }

    /// `(-1)^{n1}`.
    pub fn filter(basis: &FockBasis) -> Self {
        Self::new(basis, [1, -1])
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_matrix(&self, n_max: usize) -> OperatorMatrix {
        let d = self.diagonal.iter().map(|&s| Complex64::new(s, 0.0));
        OperatorMatrix::from_matrix(
            n_max,
            DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(self.dim(), d)),
        )
    }
}

/// `I X^dagger I`.
pub fn pseudo_adjoint(x: &OperatorMatrix, sign: &SignOperator) -> Result<OperatorMatrix> {
    if x.dim() != sign.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: sign.dim(),
        });
    }
    let d = sign.diagonal();
    let adj = x.matrix.adjoint();
    let m = DMatrix::from_fn(x.dim(), x.dim(), |i, j| adj[(i, j)] * (d[i] * d[j]));
    Ok(OperatorMatrix::from_matrix(x.n_max, m))
}

/// Physical ladder operators of the two oscillators.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub basis: FockBasis,
    pub a0: OperatorMatrix,
    pub a1: OperatorMatrix,
    pub a0_dag: OperatorMatrix,
    pub a1_dag: OperatorMatrix,
}

/// Builds `a0, a1` with `<n-1|a|n> = sqrt(n)` and their adjoints.
pub fn build_fock_operators(n_max: usize) -> Result<FockOperators> {
    let basis = FockBasis::new(n_max)?;
    let dim = basis.dim();
    let mut a0 = DMatrix::from_element(dim, dim, ZERO);
    let mut a1 = DMatrix::from_element(dim, dim, ZERO);
    for (col, &(n0, n1)) in basis.states().iter().enumerate() {
        if n0 > 0 {
            let row = basis.index(n0 - 1, n1).expect("lowered state is in the basis");
            a0[(row, col)] = Complex64::new((n0 as f64).sqrt(), 0.0);
        }
        if n1 > 0 {
            let row = basis.index(n0, n1 - 1).expect("lowered state is in the basis");
            a1[(row, col)] = Complex64::new((n1 as f64).sqrt(), 0.0);
        }
    }
    let a0 = OperatorMatrix::from_matrix(n_max, a0);
    let a1 = OperatorMatrix::from_matrix(n_max, a1);
    Ok(FockOperators {
        a0_dag: a0.adjoint(),
        a1_dag: a1.adjoint(),
        a0,
        a1,
        basis,
    })
}

/// Dual operator sets: `a_(0), a_(1)` and `b_(0)^dag, b_(1)^dag` with
/// `[a_(L), b_(K)^dag] = delta_LK`.
#[derive(Debug, Clone)]
pub struct DualOperators {
    pub basis: FockBasis,
    pub a_0: OperatorMatrix,
    pub a_1: OperatorMatrix,
    pub b0_dag: OperatorMatrix,
    pub b1_dag: OperatorMatrix,
}

impl DualOperators {
    pub fn annihilator(&self, l: usize) -> &OperatorMatrix {
        if l == 0 {
            &self.a_0
        } else {
            &self.a_1
        }
    }

    pub fn creator(&self, k: usize) -> &OperatorMatrix {
        if k == 0 {
            &self.b0_dag
        } else {
            &self.b1_dag
        }
    }
}

/// ```text
/// a_(1) = sigma (a0 + a1)        a_(0) = a0 / sigma
/// b_(0)^dag = sigma (a0^dag - a1^dag)   b_(1)^dag = a1^dag / sigma
/// ```
pub fn build_dual_operators(system: &FilterSystem, n_max: usize) -> Result<DualOperators> {
    let ops = build_fock_operators(n_max)?;
    let s = system.sigma();
    Ok(DualOperators {
        a_1: &(&ops.a0 + &ops.a1) * s,
        a_0: &ops.a0 * (1.0 / s),
        b0_dag: &(&ops.a0_dag - &ops.a1_dag) * s,
        b1_dag: &ops.a1_dag * (1.0 / s),
        basis: ops.basis,
    })
}

/// The filter Hamiltonian for a frozen drive value `v`:
///
/// ```text
/// W0 b_(0)^dag a_(0) + W1 b_(1)^dag a_(1) - W1 b_(1)^dag a_(0) - v b_(0)^dag a_(1)
/// ```
pub fn hamiltonian_matrix(system: &FilterSystem, n_max: usize, v: f64) -> Result<OperatorMatrix> {
    let dual = build_dual_operators(system, n_max)?;
    let free = free_part(system, &dual);
    let coupling = &(&dual.b0_dag * &dual.a_1) * v;
    Ok(&free - &coupling)
}

/// The first three terms of the filter Hamiltonian.
pub(crate) fn free_part(system: &FilterSystem, dual: &DualOperators) -> OperatorMatrix {
    let (w0, w1) = (system.omega0(), system.omega1());
    let t0 = &(&dual.b0_dag * &dual.a_0) * w0;
    let t1 = &(&dual.b1_dag * &dual.a_1) * w1;
    let t2 = &(&dual.b1_dag * &dual.a_0) * w1;
    &(&t0 + &t1) - &t2
}

/// `W0 a0^dag a0 + W1 a1^dag a1`.
pub fn oscillator_hamiltonian(system: &FilterSystem, n_max: usize) -> Result<OperatorMatrix> {
    let ops = build_fock_operators(n_max)?;
    let n0 = &ops.a0_dag * &ops.a0;
    let n1 = &ops.a1_dag * &ops.a1;
    Ok(&(&n0 * system.omega0()) + &(&n1 * system.omega1()))
}

/// Basis vector `|n0, n1>`.
pub fn basis_state(basis: &FockBasis, n0: usize, n1: usize) -> Option<Vec<Complex64>> {
    let idx = basis.index(n0, n1)?;
    let mut v = vec![ZERO; basis.dim()];
    v[idx] = ONE;
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system() -> FilterSystem {
        FilterSystem::new(1.0, 10.0).unwrap()
    }

    #[test]
    fn basis_dimension_and_order() {
        let b = FockBasis::new(2).unwrap();
        assert_eq!(b.dim(), 6);
        assert_eq!(
            b.states(),
            &[(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
        );
        for (i, &(n0, n1)) in b.states().iter().enumerate() {
            assert_eq!(b.index(n0, n1), Some(i));
        }
        assert_eq!(FockBasis::new(8).unwrap().dim(), 45);
        assert!(FockBasis::new(1).is_err());
    }

    #[test]
    fn ladder_matrix_elements() {
        let ops = build_fock_operators(2).unwrap();
        let b = &ops.basis;
        let vac = b.index(0, 0).unwrap();
        let one0 = b.index(1, 0).unwrap();
        assert_eq!(ops.a0.entry(vac, one0), ONE);
        let two0 = b.index(2, 0).unwrap();
        assert!((ops.a0.entry(one0, two0).re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(ops.a0_dag, ops.a0.adjoint());
    }

    #[test]
    fn canonical_commutator_on_protected_states() {
        let ops = build_fock_operators(4).unwrap();
        let c = ops.a0.commutator(&ops.a0_dag);
        assert!(c.protected_scalar_deviation(&ops.basis, ONE) < 1e-14);
        let c = ops.a1.commutator(&ops.a1_dag);
        assert!(c.protected_scalar_deviation(&ops.basis, ONE) < 1e-14);
        let c = ops.a0.commutator(&ops.a1_dag);
        assert!(c.protected_scalar_deviation(&ops.basis, ZERO) < 1e-14);
    }

    #[test]
    fn dual_operator_entries() {
        let dual = build_dual_operators(&system(), 3).unwrap();
        let b = &dual.basis;
        let sigma = (10.0f64 / 9.0).sqrt();
        let e = dual.a_1.entry(b.index(0, 0).unwrap(), b.index(1, 0).unwrap());
        assert!((e.re - sigma).abs() < 1e-15 && e.im == 0.0);

        let vac = basis_state(b, 0, 0).unwrap();
        let out = dual.b0_dag.apply(&vac);
        for (i, amp) in out.iter().enumerate() {
            let expected = match b.states()[i] {
                (1, 0) => sigma,
                (0, 1) => -sigma,
                _ => 0.0,
            };
            assert!((amp.re - expected).abs() < 1e-15 && amp.im == 0.0);
        }
    }

    #[test]
    fn dual_commutators() {
        let dual = build_dual_operators(&system(), 4).unwrap();
        for l in 0..2 {
            for k in 0..2 {
                let c = dual.annihilator(l).commutator(dual.creator(k));
                let target = if l == k { ONE } else { ZERO };
                assert!(c.protected_scalar_deviation(&dual.basis, target) < 1e-13);
            }
        }
    }

    #[test]
    fn free_hamiltonian_is_two_oscillators() {
        let h = hamiltonian_matrix(&system(), 8, 0.0).unwrap();
        let h0 = oscillator_hamiltonian(&system(), 8).unwrap();
        assert!((&h - &h0).norm() <= 1e-12);
    }

    #[test]
    fn hamiltonian_sector_structure() {
        let sys = system();
        let h = hamiltonian_matrix(&sys, 4, 0.37).unwrap();
        let basis = FockBasis::new(4).unwrap();
        assert_eq!(h.entry(0, 0), ZERO);
        let one = h.sector_block(&basis, 1);
        let trace = one[(0, 0)] + one[(1, 1)];
        assert!((trace.re - 11.0).abs() < 1e-13 && trace.im.abs() < 1e-15);
        // Nothing couples different total-number sectors.
        for (i, &(a0, a1)) in basis.states().iter().enumerate() {
            for (j, &(b0, b1)) in basis.states().iter().enumerate() {
                if a0 + a1 != b0 + b1 {
                    assert_eq!(h.entry(i, j), ZERO);
                }
            }
        }
    }

    #[test]
    fn pseudo_adjoint_of_ladder_operators() {
        let ops = build_fock_operators(3).unwrap();
        let sign = SignOperator::filter(&ops.basis);
        let a1 = pseudo_adjoint(&ops.a1, &sign).unwrap();
        assert!((&a1 + &ops.a1_dag).norm() < 1e-15);
        let a0 = pseudo_adjoint(&ops.a0, &sign).unwrap();
        assert!((&a0 - &ops.a0_dag).norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_is_pseudo_hermitian() {
        let sys = system();
        let h = hamiltonian_matrix(&sys, 5, -0.8).unwrap();
        let sign = SignOperator::filter(&FockBasis::new(5).unwrap());
        let hh = pseudo_adjoint(&h, &sign).unwrap();
        assert!((&hh - &h).norm() < 1e-13);
        // ...but not Hermitian.
        assert!((&h.adjoint() - &h).norm() > 1e-3);
    }

    #[test]
    fn pseudo_adjoint_dimension_check() {
        let ops = build_fock_operators(3).unwrap();
        let sign = SignOperator::filter(&FockBasis::new(2).unwrap());
        assert!(matches!(
            pseudo_adjoint(&ops.a0, &sign),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sign_operator_squares_to_identity() {
        let b = FockBasis::new(3).unwrap();
        let s = SignOperator::filter(&b).to_matrix(3);
        assert_eq!(&s * &s, OperatorMatrix::identity(&b));
    }
}
