//! Dense real Clifford algebras Cl(n,0) for n ≤ 7.
//!
//! A multivector is stored as 2ⁿ coefficients indexed by a basis-blade
//! bitmask: bit j−1 set means the basis vector e_j is a factor of the
//! blade, and the blade's factors are taken in increasing index order.
//! With n capped at 7 the largest element is 128 doubles, so dense
//! storage wins on simplicity and cache behavior; the 2ⁿ×2ⁿ sign/index
//! product table for each dimension is built once and shared.
//!
//! The metric is Euclidean throughout: e_j e_j = +1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::geometry::{norm3, norm7, Vector3, Vector7};

/// Largest supported dimension.
pub const MAX_DIM: usize = 7;

/// Everything "exact" in this crate is asserted to this absolute tolerance.
pub const TOL_EXACT: f64 = 1e-12;

/// Index of a basis blade: bit j−1 set ⇔ e_j present.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct BladeIndex(pub usize);

impl BladeIndex {
    /// Number of basis vectors in the blade.
    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// True when the blade fits inside Cl(dim,0).
    pub fn fits(self, dim: usize) -> bool {
        self.0 < (1 << dim)
    }
}

/// A set of grades to keep under projection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GradeMask(pub u16);

impl GradeMask {
    pub fn single(grade: u32) -> Self {
        GradeMask(1 << grade)
    }

    pub fn of(grades: &[u32]) -> Self {
        let mut m = 0u16;
        for &g in grades {
            m |= 1 << g;
        }
        GradeMask(m)
    }

    pub fn all(dim: usize) -> Self {
        GradeMask(((1u32 << (dim + 1)) - 1) as u16)
    }

    pub fn contains(self, grade: u32) -> bool {
        self.0 >> grade & 1 == 1
    }
}

/// Sign and target blade of a single basis-blade product.
///
/// Reordering the concatenated factor list into canonical order costs one
/// sign flip per transposition; equal factors then contract to +1 under
/// the Euclidean metric. Counting transpositions reduces to counting, for
/// each factor of `a`, the factors of `b` with strictly smaller index.
pub fn blade_product(a: BladeIndex, b: BladeIndex) -> (f64, BladeIndex) {
    let (ma, mb) = (a.0, b.0);
    let mut swaps = 0u32;
    for bit in 0..MAX_DIM {
        if ma >> bit & 1 == 1 {
            swaps += (mb & ((1 << bit) - 1)).count_ones();
        }
    }
    let sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    (sign, BladeIndex(ma ^ mb))
}

struct ProductTable {
    /// sign[i * 2^dim + j] for blade masks i, j; the target mask is i ^ j.
    sign: Vec<f64>,
}

fn table(dim: usize) -> &'static ProductTable {
    static TABLES: OnceLock<Vec<ProductTable>> = OnceLock::new();
    &TABLES.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|d| {
                let size = 1 << d;
                let mut sign = vec![0.0; size * size];
                for i in 0..size {
                    for j in 0..size {
                        let (s, _) = blade_product(BladeIndex(i), BladeIndex(j));
                        sign[i * size + j] = s;
                    }
                }
                ProductTable { sign }
            })
            .collect()
    })[dim]
}

/// Dense element of Cl(dim,0).
#[derive(Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(dim={}, [", self.dim)?;
        let mut first = true;
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "{c:+.6}·e[{mask:b}]")?;
                first = false;
            }
        }
        write!(f, "])")
    }
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds Cl(7,0)");
        Multivector {
            dim,
            coeffs: vec![0.0; 1 << dim],
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        let mut m = Multivector::zero(dim);
        m.coeffs[0] = value;
        m
    }

    /// Basis vector e_j, 1-based.
    pub fn basis_vector(dim: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= dim, "e_{j} outside Cl({dim},0)");
        Multivector::basis_blade(dim, BladeIndex(1 << (j - 1)), 1.0)
    }

    pub fn basis_blade(dim: usize, blade: BladeIndex, coeff: f64) -> Self {
        assert!(blade.fits(dim), "blade {blade:?} outside Cl({dim},0)");
        let mut m = Multivector::zero(dim);
        m.coeffs[blade.0] = coeff;
        m
    }

    /// Grade-1 element with the given vector components.
    pub fn from_vector(components: &[f64]) -> Self {
        let dim = components.len();
        let mut m = Multivector::zero(dim);
        for (i, &c) in components.iter().enumerate() {
            m.coeffs[1 << i] = c;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, blade: BladeIndex) -> f64 {
        self.coeffs[blade.0]
    }

    pub fn set_coeff(&mut self, blade: BladeIndex, value: f64) {
        self.coeffs[blade.0] = value;
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Geometric product via the precomputed sign table.
    ///
    /// Panics if the operands live in different algebras; mixed-dimension
    /// products have no meaning here.
    pub fn geometric_product(&self, rhs: &Multivector) -> Multivector {
        assert_eq!(
            self.dim, rhs.dim,
            "geometric product requires equal dimensions ({} vs {})",
            self.dim, rhs.dim
        );
        let size = 1 << self.dim;
        let tab = table(self.dim);
        let mut out = Multivector::zero(self.dim);
        for i in 0..size {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            let row = &tab.sign[i * size..(i + 1) * size];
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b != 0.0 {
                    out.coeffs[i ^ j] += a * b * row[j];
                }
            }
        }
        out
    }

    /// Reversion: grade-k parts pick up (−1)^{k(k−1)/2}.
    pub fn reverse(&self) -> Multivector {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            let k = BladeIndex(mask).grade();
            if (k * (k.wrapping_sub(1)) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Zeroes every coefficient whose grade is not in the mask.
    pub fn grade_project(&self, grades: GradeMask) -> Multivector {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            if !grades.contains(BladeIndex(mask).grade()) {
                *c = 0.0;
            }
        }
        out
    }

    /// √⟨x̃ x⟩₀. For the blade basis this is the Euclidean norm of the
    /// coefficient vector, but it is computed through the product so the
    /// algebraic definition stays the one under test.
    pub fn norm(&self) -> f64 {
        let sq = self.reverse().geometric_product(self).scalar_part();
        sq.max(0.0).sqrt()
    }

    /// Coefficient-wise inner product of the underlying R^{2ⁿ}.
    pub fn dot(&self, rhs: &Multivector) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.coeffs
            .iter()
            .zip(rhs.coeffs.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scaled(&self, s: f64) -> Multivector {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn approx_eq(&self, rhs: &Multivector, tol: f64) -> bool {
        self.dim == rhs.dim
            && self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c += r;
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c -= r;
        }
        out
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scaled(-1.0)
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
    }
}

/// Errors raised by constructors that take measured data.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraError {
    /// A direction that must be unit length was not, within 1e−12.
    NonUnitDirection { norm: f64 },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::NonUnitDirection { norm } => {
                write!(f, "direction must be unit length, got norm {norm}")
            }
        }
    }
}

impl std::error::Error for AlgebraError {}

fn check_unit(norm: f64) -> Result<(), AlgebraError> {
    if (norm - 1.0).abs() > TOL_EXACT {
        Err(AlgebraError::NonUnitDirection { norm })
    } else {
        Ok(())
    }
}

/// The pseudoscalar I = e₁e₂e₃ of Cl(3,0).
pub fn trivector_i() -> Multivector {
    Multivector::basis_blade(3, BladeIndex(0b111), 1.0)
}

/// The Fano trivector J = e₁e₂e₄ + e₂e₃e₅ + e₃e₄e₆ + e₄e₅e₇ + e₅e₆e₁
/// + e₆e₇e₂ + e₇e₁e₃ of Cl(7,0), expressed on canonical blades.
pub fn trivector_j() -> Multivector {
    let mut j = Multivector::zero(7);
    for &[a, b, c] in crate::division::FANO_TRIPLES.iter() {
        // e_a e_b e_c reordered onto the canonical increasing-index blade.
        let ea = Multivector::basis_vector(7, a);
        let eb = Multivector::basis_vector(7, b);
        let ec = Multivector::basis_vector(7, c);
        j = &j + &ea.geometric_product(&eb).geometric_product(&ec);
    }
    j
}

/// Handedness of the fundamental trivector: μ = ±I on S³, μ = ±J on S⁷.
pub type Handedness = i8;

/// The bivector μ·n of Cl(3,0): n₁ e₂∧e₃ + n₂ e₃∧e₁ + n₃ e₁∧e₂, scaled
/// by the handedness.
pub fn bivector3(direction: Vector3, handedness: Handedness) -> Result<Multivector, AlgebraError> {
    check_unit(norm3(direction))?;
    let h = handedness as f64;
    let mut m = Multivector::zero(3);
    m.set_coeff(BladeIndex(0b110), h * direction[0]); // e₂e₃
    m.set_coeff(BladeIndex(0b101), -h * direction[1]); // e₃e₁ = −e₁e₃
    m.set_coeff(BladeIndex(0b011), h * direction[2]); // e₁e₂
    Ok(m)
}

/// The unit J-contraction element μ·N of Cl(7,0): Σ N_j ⟨J e_j⟩₂ scaled
/// to unit norm. Each contraction ⟨J e_j⟩₂ is a sum of three orthogonal
/// basis bivectors, so the raw expansion carries norm √3; the 1/√3
/// rescale keeps ‖μ·N‖ = 1 for unit N.
pub fn bivector7(direction: Vector7, handedness: Handedness) -> Result<Multivector, AlgebraError> {
    check_unit(norm7(direction))?;
    let j = trivector_j();
    let mut m = Multivector::zero(7);
    for (idx, &c) in direction.iter().enumerate() {
        let e = Multivector::basis_vector(7, idx + 1);
        let contraction = j.geometric_product(&e).grade_project(GradeMask::single(2));
        m = &m + &contraction.scaled(c);
    }
    Ok(m.scaled(handedness as f64 / 3f64.sqrt()))
}
