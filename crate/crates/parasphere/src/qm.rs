//! Independent quantum-mechanical reference values.
//!
//! Dense complex matrices over pairs of reals, capped in practice at
//! 16×16 (four qubits), which keeps everything trivial to compute without
//! a linear-algebra dependency. This module knows nothing about the
//! sphere models; it exists so the correlation formulas elsewhere can be
//! compared against straight Hilbert-space arithmetic.
//!
//! Phase convention for spin eigenstates along n = (θ, φ):
//!   |n,+⟩ = (cos(θ/2), e^{iφ} sin(θ/2)),
//!   |n,−⟩ = (−e^{−iφ} sin(θ/2), cos(θ/2)).
//! Joint amplitudes are phase-sensitive, so this is fixed once here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::geometry::{norm3, Vector3};

/// Imaginary-part residue allowed when a Hermitian expectation is read
/// off as a real number.
pub const TOL_HERMITIAN: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn real(re: f64) -> Self {
        Complex::new(re, 0.0)
    }

    pub fn i(im: f64) -> Self {
        Complex::new(0.0, im)
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_squared(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn scaled(self, s: f64) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.6}{:+.6}i", self.re, self.im)
    }
}

/// Errors from the oracle layer.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    DimensionMismatch { left: usize, right: usize },
    EmptyOperatorList,
    NotHermitian { defect: f64 },
    NonUnitDirection { norm: f64 },
    SearchFailed { residual: f64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            OracleError::EmptyOperatorList => write!(f, "tensor product of an empty list"),
            OracleError::NotHermitian { defect } => {
                write!(f, "operator is not Hermitian (defect {defect:.3e})")
            }
            OracleError::NonUnitDirection { norm } => {
                write!(f, "direction must be unit length, got norm {norm}")
            }
            OracleError::SearchFailed { residual } => {
                write!(f, "direction search stalled at residual {residual:.3e}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = ComplexMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product, left factor on the slow index.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.get(i, j) - self.get(j, i).conj();
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex {
        let mut t = Complex::ZERO;
        for i in 0..self.rows.min(self.cols) {
            t = t + self.get(i, i);
        }
        t
    }

    /// Applies the matrix to a ket.
    pub fn apply(&self, ket: &Ket) -> Ket {
        assert_eq!(self.cols, ket.dim());
        let mut amp = vec![Complex::ZERO; self.rows];
        for (i, a) in amp.iter_mut().enumerate() {
            for j in 0..self.cols {
                *a = *a + self.get(i, j) * ket.amp[j];
            }
        }
        Ket { amp }
    }
}

/// Normalized state vector.
#[derive(Clone, PartialEq, Debug)]
pub struct Ket {
    amp: Vec<Complex>,
}

impl Ket {
    /// Builds a ket from raw amplitudes, normalizing them.
    pub fn normalized(amp: Vec<Complex>) -> Self {
        let n: f64 = amp.iter().map(|a| a.norm_squared()).sum::<f64>().sqrt();
        assert!(n > 1e-14, "cannot normalize the zero vector");
        Ket {
            amp: amp.into_iter().map(|a| a.scaled(1.0 / n)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitude(&self, i: usize) -> Complex {
        self.amp[i]
    }

    pub fn norm(&self) -> f64 {
        self.amp
            .iter()
            .map(|a| a.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨self|other⟩ with the conjugation on `self`.
    pub fn inner(&self, other: &Ket) -> Complex {
        assert_eq!(self.dim(), other.dim());
        let mut s = Complex::ZERO;
        for (a, b) in self.amp.iter().zip(other.amp.iter()) {
            s = s + a.conj() * *b;
        }
        s
    }

    /// Tensor product of states, left factor on the slow index.
    pub fn kron(&self, other: &Ket) -> Ket {
        let mut amp = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amp {
            for b in &other.amp {
                amp.push(*a * *b);
            }
        }
        Ket { amp }
    }
}

fn check_unit3(n: Vector3) -> Result<(), OracleError> {
    let norm = norm3(n);
    if (norm - 1.0).abs() > 1e-12 {
        Err(OracleError::NonUnitDirection { norm })
    } else {
        Ok(())
    }
}

/// σ·n for a unit direction n: Hermitian, traceless, squares to 1.
pub fn pauli_dot(n: Vector3) -> Result<ComplexMatrix, OracleError> {
    check_unit3(n)?;
    let (x, y, z) = (n[0], n[1], n[2]);
    Ok(ComplexMatrix::from_rows(&[
        &[Complex::real(z), Complex::new(x, -y)],
        &[Complex::new(x, y), Complex::real(-z)],
    ]))
}

/// Kronecker chain of the given operators, left to right.
pub fn tensor(ops: &[ComplexMatrix]) -> Result<ComplexMatrix, OracleError> {
    let mut iter = ops.iter();
    let first = iter.next().ok_or(OracleError::EmptyOperatorList)?;
    let mut acc = first.clone();
    for op in iter {
        acc = acc.kron(op);
    }
    Ok(acc)
}

/// ⟨ψ|O|ψ⟩ for a Hermitian O; the imaginary residue is checked against
/// `TOL_HERMITIAN` and discarded.
pub fn expectation(state: &Ket, op: &ComplexMatrix) -> Result<f64, OracleError> {
    if op.rows != op.cols || op.rows != state.dim() {
        return Err(OracleError::DimensionMismatch {
            left: op.rows,
            right: state.dim(),
        });
    }
    let defect = op.hermitian_defect();
    if defect > TOL_HERMITIAN {
        return Err(OracleError::NotHermitian { defect });
    }
    let value = state.inner(&op.apply(state));
    debug_assert!(value.im.abs() < TOL_HERMITIAN);
    Ok(value.re)
}

/// |n,+⟩ in the fixed Bloch phase convention.
pub fn bloch_plus(theta: f64, phi: f64) -> Ket {
    Ket {
        amp: vec![
            Complex::real((theta / 2.0).cos()),
            Complex::new(phi.cos(), phi.sin()).scaled((theta / 2.0).sin()),
        ],
    }
}

/// |n,−⟩ in the fixed Bloch phase convention.
pub fn bloch_minus(theta: f64, phi: f64) -> Ket {
    Ket {
        amp: vec![
            Complex::new(phi.cos(), -phi.sin()).scaled(-(theta / 2.0).sin()),
            Complex::real((theta / 2.0).cos()),
        ],
    }
}

/// Polar/azimuthal decomposition of a unit vector.
pub fn to_angles(n: Vector3) -> (f64, f64) {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    (theta, phi)
}

/// Spin eigenstates |n,±⟩ for a unit direction.
pub fn spin_eigenstate(n: Vector3, up: bool) -> Result<Ket, OracleError> {
    check_unit3(n)?;
    let (theta, phi) = to_angles(n);
    Ok(if up {
        bloch_plus(theta, phi)
    } else {
        bloch_minus(theta, phi)
    })
}

/// The two-qubit singlet (|+−⟩ − |−+⟩)/√2 in the z basis.
pub fn singlet() -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket {
        amp: vec![
            Complex::ZERO,
            Complex::real(s),
            Complex::real(-s),
            Complex::ZERO,
        ],
    }
}

/// Singlet expectation ⟨σ·a ⊗ σ·b⟩, the reference for pair correlations.
pub fn singlet_expectation(a: Vector3, b: Vector3) -> Result<f64, OracleError> {
    let op = tensor(&[pauli_dot(a)?, pauli_dot(b)?])?;
    expectation(&singlet(), &op)
}

// ── GHZ ──────────────────────────────────────────────────────────────────

/// Polar and azimuthal angles of the four analyzer directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzAngles {
    pub theta: [f64; 4],
    pub phi: [f64; 4],
}

impl GhzAngles {
    pub fn directions(&self) -> [Vector3; 4] {
        let mut out = [[0.0; 3]; 4];
        for (dir, (&theta, &phi)) in out.iter_mut().zip(self.theta.iter().zip(self.phi.iter())) {
            *dir = crate::geometry::spherical(theta, phi);
        }
        out
    }
}

/// The four-particle state (|++−−⟩ − |−−++⟩)/√2 in the z basis, dim 16.
pub fn ghz4_state() -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amp = vec![Complex::ZERO; 16];
    // |++−−⟩ = index 0b0011, |−−++⟩ = index 0b1100 with |+⟩ ↦ 0, |−⟩ ↦ 1.
    amp[0b0011] = Complex::real(s);
    amp[0b1100] = Complex::real(-s);
    Ket { amp }
}

/// ⟨Ψ| σ·n₁ ⊗ σ·n₂ ⊗ σ·n₃ ⊗ σ·n₄ |Ψ⟩ by direct matrix evaluation.
pub fn ghz4_expectation(angles: &GhzAngles) -> Result<f64, OracleError> {
    let dirs = angles.directions();
    let ops = [
        pauli_dot(dirs[0])?,
        pauli_dot(dirs[1])?,
        pauli_dot(dirs[2])?,
        pauli_dot(dirs[3])?,
    ];
    let op = tensor(&ops)?;
    expectation(&ghz4_state(), &op)
}

// ── Hardy ────────────────────────────────────────────────────────────────

/// The two-qubit state
/// (cosθ(|+−⟩ + |−+⟩) − sinθ|++⟩) / √(1 + cos²θ).
pub fn hardy_state(theta: f64) -> Ket {
    let norm = (1.0 + theta.cos().powi(2)).sqrt();
    Ket {
        amp: vec![
            Complex::real(-theta.sin() / norm),
            Complex::real(theta.cos() / norm),
            Complex::real(theta.cos() / norm),
            Complex::ZERO,
        ],
    }
}

/// The four joint amplitudes characterizing the Hardy construction:
/// ⟨Ψ|a′+, b+⟩, ⟨Ψ|a+, b′+⟩, ⟨Ψ|a−, b−⟩, ⟨Ψ|a′+, b′+⟩.
pub fn hardy_amplitudes(
    theta: f64,
    a: Vector3,
    a2: Vector3,
    b: Vector3,
    b2: Vector3,
) -> Result<[Complex; 4], OracleError> {
    let psi = hardy_state(theta);
    let joint = |first: &Ket, second: &Ket| psi.inner(&first.kron(second));
    let a_plus = spin_eigenstate(a, true)?;
    let a_minus = spin_eigenstate(a, false)?;
    let a2_plus = spin_eigenstate(a2, true)?;
    let b_plus = spin_eigenstate(b, true)?;
    let b_minus = spin_eigenstate(b, false)?;
    let b2_plus = spin_eigenstate(b2, true)?;
    Ok([
        joint(&a2_plus, &b_plus),
        joint(&a_plus, &b2_plus),
        joint(&a_minus, &b_minus),
        joint(&a2_plus, &b2_plus),
    ])
}

/// The closed-form magnitude of the fourth Hardy amplitude,
/// sinθ cos²θ / √(1 + cos²θ).
pub fn hardy_fourth_closed_form(theta: f64) -> f64 {
    theta.sin() * theta.cos().powi(2) / (1.0 + theta.cos().powi(2)).sqrt()
}

/// Directions solved for the Hardy construction at parameter `theta`.
#[derive(Clone, Copy, Debug)]
pub struct HardyDirections {
    pub a: Vector3,
    pub a2: Vector3,
    pub b: Vector3,
    pub b2: Vector3,
    /// Polar angles (a and a′) in the x-z plane.
    pub alpha: f64,
    pub alpha2: f64,
    /// Max |amplitude| over the three zero conditions at the solution.
    pub residual: f64,
}

/// Finds x-z-plane directions with a = b and a′ = b′ such that the first
/// three Hardy amplitudes vanish. Nested grid plus damped Newton on the
/// two polar angles; the state is exchange-symmetric, so the symmetric
/// ansatz collapses the first two zero conditions into one.
pub fn hardy_find_directions(theta: f64) -> Result<HardyDirections, OracleError> {
    let residuals = |alpha: f64, alpha2: f64| -> Result<(f64, f64), OracleError> {
        let a = crate::geometry::polar_xz(alpha);
        let a2 = crate::geometry::polar_xz(alpha2);
        let amps = hardy_amplitudes(theta, a, a2, a, a2)?;
        Ok((amps[0].re, amps[2].re))
    };
    let objective = |alpha: f64, alpha2: f64| -> Result<f64, OracleError> {
        let (r1, r3) = residuals(alpha, alpha2)?;
        Ok(r1 * r1 + r3 * r3)
    };

    // Coarse grid over both polar angles.
    let mut best = (0.0f64, 0.0f64, f64::INFINITY);
    let n = 180;
    for i in 0..n {
        let alpha = -std::f64::consts::PI + std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let alpha2 =
                -std::f64::consts::PI + std::f64::consts::TAU * (j as f64 + 0.5) / n as f64;
            let f = objective(alpha, alpha2)?;
            if f < best.2 {
                best = (alpha, alpha2, f);
            }
        }
    }

    // Damped Newton with a numerical Jacobian.
    let (mut alpha, mut alpha2) = (best.0, best.1);
    let h = 1e-7;
    for _ in 0..60 {
        let (r1, r3) = residuals(alpha, alpha2)?;
        if r1.abs().max(r3.abs()) < 1e-12 {
            break;
        }
        let (r1a, r3a) = residuals(alpha + h, alpha2)?;
        let (r1b, r3b) = residuals(alpha, alpha2 + h)?;
        let j11 = (r1a - r1) / h;
        let j12 = (r1b - r1) / h;
        let j21 = (r3a - r3) / h;
        let j22 = (r3b - r3) / h;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-18 {
            break;
        }
        let da = (r1 * j22 - r3 * j12) / det;
        let db = (r3 * j11 - r1 * j21) / det;
        // Damp: halve the step until the objective decreases.
        let f0 = r1 * r1 + r3 * r3;
        let mut lambda = 1.0;
        for _ in 0..30 {
            let f = objective(alpha - lambda * da, alpha2 - lambda * db)?;
            if f < f0 {
                break;
            }
            lambda *= 0.5;
        }
        alpha -= lambda * da;
        alpha2 -= lambda * db;
    }

    let a = crate::geometry::polar_xz(alpha);
    let a2 = crate::geometry::polar_xz(alpha2);
    let amps = hardy_amplitudes(theta, a, a2, a, a2)?;
    let residual = amps[0].abs().max(amps[1].abs()).max(amps[2].abs());
    if residual >= 1e-8 {
        return Err(OracleError::SearchFailed { residual });
    }
    Ok(HardyDirections {
        a,
        a2,
        b: a,
        b2: a2,
        alpha,
        alpha2,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dot3;
    use crate::rng::Stream;

    #[test]
    fn pauli_dot_properties() {
        let z = pauli_dot([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(z.get(0, 0), Complex::real(1.0));
        assert_eq!(z.get(1, 1), Complex::real(-1.0));
        assert_eq!(z.get(0, 1), Complex::ZERO);

        let mut stream = Stream::new(21, 0);
        for _ in 0..200 {
            let n = stream.unit_vector3();
            let p = pauli_dot(n).unwrap();
            assert!(p.hermitian_defect() < 1e-15);
            assert!(p.trace().abs() < 1e-15);
            // Squares to the identity ⇒ eigenvalues ±1 with zero trace.
            let sq = p.mul(&p);
            let id = ComplexMatrix::identity(2);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((sq.get(i, j) - id.get(i, j)).abs() < 1e-14);
                }
            }
            // Characteristic polynomial λ² − tr·λ + det with tr = 0 and
            // det = −1: the eigenvalues are exactly ±1.
            let det = p.get(0, 0) * p.get(1, 1) - p.get(0, 1) * p.get(1, 0);
            assert!((det + Complex::ONE).abs() < 1e-14);
        }
        assert!(pauli_dot([0.0, 0.0, 0.5]).is_err());
    }

    #[test]
    fn pauli_pair_identity() {
        // (iσ·a)(iσ·a′) + a·a′ 1 + iσ·(a×a′) = 0.
        let mut stream = Stream::new(22, 0);
        for _ in 0..200 {
            let a = stream.unit_vector3();
            let b = stream.unit_vector3();
            let i = Complex::i(1.0);
            let pa = pauli_dot(a).unwrap();
            let pb = pauli_dot(b).unwrap();
            let cross = crate::division::cross3(a, b);
            let pc = {
                // σ·(a×b) without the unit-norm check.
                let (x, y, z) = (cross[0], cross[1], cross[2]);
                ComplexMatrix::from_rows(&[
                    &[Complex::real(z), Complex::new(x, -y)],
                    &[Complex::new(x, y), Complex::real(-z)],
                ])
            };
            for r in 0..2 {
                for c in 0..2 {
                    let lhs = (i * pa.get(r, 0)) * (i * pb.get(0, c))
                        + (i * pa.get(r, 1)) * (i * pb.get(1, c));
                    let id = if r == c { Complex::ONE } else { Complex::ZERO };
                    let total = lhs + id.scaled(dot3(a, b)) + i * pc.get(r, c);
                    assert!(total.abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn tensor_products() {
        let a = ComplexMatrix::identity(2);
        let t = tensor(std::slice::from_ref(&a)).unwrap();
        assert_eq!(t, a);
        let z = pauli_dot([0.0, 0.0, 1.0]).unwrap();
        let zz = tensor(&[z.clone(), z.clone()]).unwrap();
        assert_eq!(zz.rows, 4);
        // σ_z ⊗ σ_z on |00⟩ has eigenvalue +1.
        let ket00 = Ket::normalized(vec![
            Complex::ONE,
            Complex::ZERO,
            Complex::ZERO,
            Complex::ZERO,
        ]);
        assert!((expectation(&ket00, &zz).unwrap() - 1.0).abs() < 1e-15);
        assert!(tensor(&[]).is_err());
    }

    #[test]
    fn singlet_correlations_are_minus_dot() {
        let zz = tensor(&[
            pauli_dot([0.0, 0.0, 1.0]).unwrap(),
            pauli_dot([0.0, 0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        assert!((expectation(&singlet(), &zz).unwrap() + 1.0).abs() < 1e-15);

        let mut stream = Stream::new(23, 0);
        for _ in 0..500 {
            let a = stream.unit_vector3();
            let b = stream.unit_vector3();
            let e = singlet_expectation(a, b).unwrap();
            assert!((e + dot3(a, b)).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_rejects_bad_operators() {
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, Complex::i(0.5));
        assert!(matches!(
            expectation(&bloch_plus(0.0, 0.0), &m),
            Err(OracleError::NotHermitian { .. })
        ));
        let id4 = ComplexMatrix::identity(4);
        assert!(matches!(
            expectation(&bloch_plus(0.0, 0.0), &id4),
            Err(OracleError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ghz4_state_amplitudes() {
        let psi = ghz4_state();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitude(0b0011).re - s).abs() < 1e-15);
        assert!(psi.amplitude(0b0000).abs() < 1e-15);
    }

    #[test]
    fn ghz4_oracle_at_corners() {
        let e = ghz4_expectation(&GhzAngles {
            theta: [0.0; 4],
            phi: [0.0; 4],
        })
        .unwrap();
        assert!((e - 1.0).abs() < 1e-12);

        let h = std::f64::consts::FRAC_PI_2;
        let e = ghz4_expectation(&GhzAngles {
            theta: [h; 4],
            phi: [0.0; 4],
        })
        .unwrap();
        assert!((e + 1.0).abs() < 1e-12);

        let e = ghz4_expectation(&GhzAngles {
            theta: [h; 4],
            phi: [std::f64::consts::PI, 0.0, 0.0, 0.0],
        })
        .unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hardy_state_special_cases() {
        // θ = 0: (|+−⟩ + |−+⟩)/√2.
        let psi = hardy_state(0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(psi.amplitude(0).abs() < 1e-15);
        assert!((psi.amplitude(1).re - s).abs() < 1e-15);
        assert!((psi.amplitude(2).re - s).abs() < 1e-15);
        // θ = π/2: −|++⟩.
        let psi = hardy_state(std::f64::consts::FRAC_PI_2);
        assert!((psi.amplitude(0).re + 1.0).abs() < 1e-12);
        // Normalized across a θ grid.
        for i in 0..50 {
            let theta = i as f64 * 0.05;
            assert!((hardy_state(theta).norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hardy_amplitude_at_theta_zero() {
        // With a′ = b′ = z the fourth amplitude is the |++⟩ weight, zero at θ=0.
        let z = [0.0, 0.0, 1.0];
        let x = [1.0, 0.0, 0.0];
        let amps = hardy_amplitudes(0.0, x, z, x, z).unwrap();
        assert!(amps[3].abs() < 1e-14);
    }

    #[test]
    fn hardy_exchange_symmetry() {
        // Exchanging the particles swaps the first two amplitudes and fixes
        // the other two.
        let theta = 0.7;
        let a = crate::geometry::polar_xz(0.3);
        let a2 = crate::geometry::polar_xz(1.1);
        let b = crate::geometry::polar_xz(-0.4);
        let b2 = crate::geometry::polar_xz(2.0);
        let orig = hardy_amplitudes(theta, a, a2, b, b2).unwrap();
        let swapped = hardy_amplitudes(theta, b, b2, a, a2).unwrap();
        assert!((orig[0] - swapped[1]).abs() < 1e-13);
        assert!((orig[1] - swapped[0]).abs() < 1e-13);
        assert!((orig[2] - swapped[2]).abs() < 1e-13);
        assert!((orig[3] - swapped[3]).abs() < 1e-13);
    }

    #[test]
    fn hardy_solver_meets_closed_form() {
        let theta = std::f64::consts::FRAC_PI_4;
        let sol = hardy_find_directions(theta).unwrap();
        assert!(sol.residual < 1e-8);
        let amps = hardy_amplitudes(theta, sol.a, sol.a2, sol.b, sol.b2).unwrap();
        let closed = hardy_fourth_closed_form(theta);
        assert!(
            (amps[3].abs() - closed).abs() < 1e-6,
            "fourth amplitude {} vs closed form {closed}",
            amps[3].abs()
        );
        // ≈ 0.288675 at θ = π/4.
        assert!((closed - 0.288675).abs() < 1e-6);
    }
}
