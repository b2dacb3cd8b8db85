//! Quaternions, octonions, and the structure tensors behind their
//! products.
//!
//! The quaternion here is the even subalgebra of Cl(3,0) on the basis
//! {1, I·e₁, I·e₂, I·e₃}, so its product carries the bivector rule
//! (I·e_j)(I·e_k) = −δ_jk − ε_jkl (I·e_l) rather than the Hamilton
//! convention; conversions to `Multivector` are lossless and the product
//! is checked against the Cl(3,0) embedding.
//!
//! The octonion basis multiplication comes from the seven Fano triples
//! (1,2,4), (2,3,5), (3,4,6), (4,5,7), (5,6,1), (6,7,2), (7,1,3): for each
//! triple (a,b,c), e_a e_b = e_c and cyclic, so e_j e_{j+1} = e_{j+3} with
//! indices mod 7. Equivalently e_j e_k = −δ_jk + Σ f_jkl e_l with
//! f_jkl = +1 on cyclically ordered triples. The sign of the f-term is
//! fixed by making that index-shift product rule hold verbatim; the
//! structure-function field f_jkl(ξ) and both cross products inherit it.

use std::fmt;

use crate::clifford::{AlgebraError, BladeIndex, Multivector, TOL_EXACT};
use crate::geometry::{Vector3, Vector7};

/// The seven ordered Fano triples (1-based imaginary-unit indices).
pub const FANO_TRIPLES: [[usize; 3]; 7] = [
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 6],
    [4, 5, 7],
    [5, 6, 1],
    [6, 7, 2],
    [7, 1, 3],
];

// ── Quaternions ──────────────────────────────────────────────────────────

/// Element of the even subalgebra of Cl(3,0): w + x(I·e₁) + y(I·e₂) + z(I·e₃).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn scalar(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Pure bivector part along `v` (coefficients of I·e_j).
    pub fn from_bivector(v: Vector3) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub fn bivector(self) -> Vector3 {
        [self.x, self.y, self.z]
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Reversion of the even subalgebra: bivector parts flip sign.
    pub fn reverse(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn scaled(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// R⁴ inner product of the coefficient vectors.
    pub fn dot(self, rhs: Quaternion) -> f64 {
        self.w * rhs.w + self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn approx_eq(self, rhs: Quaternion, tol: f64) -> bool {
        (self.w - rhs.w).abs() <= tol
            && (self.x - rhs.x).abs() <= tol
            && (self.y - rhs.y).abs() <= tol
            && (self.z - rhs.z).abs() <= tol
    }

    /// Lossless embedding into Cl(3,0).
    pub fn to_multivector(self) -> Multivector {
        let mut m = Multivector::scalar(3, self.w);
        m.set_coeff(BladeIndex(0b110), self.x); // I·e₁ = e₂e₃
        m.set_coeff(BladeIndex(0b101), -self.y); // I·e₂ = e₃e₁ = −e₁e₃
        m.set_coeff(BladeIndex(0b011), self.z); // I·e₃ = e₁e₂
        m
    }

    /// Inverse of `to_multivector`; ignores odd-grade coefficients.
    pub fn from_multivector(m: &Multivector) -> Self {
        Quaternion::new(
            m.coeff(BladeIndex(0)),
            m.coeff(BladeIndex(0b110)),
            -m.coeff(BladeIndex(0b101)),
            m.coeff(BladeIndex(0b011)),
        )
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl std::ops::Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        self + rhs.scaled(-1.0)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6} {:+.6}·Ie1 {:+.6}·Ie2 {:+.6}·Ie3",
            self.w, self.x, self.y, self.z
        )
    }
}

/// Product in the even subalgebra of Cl(3,0):
/// (w₁ + B₁)(w₂ + B₂) with (I·a)(I·b) = −a·b − I·(a×b).
pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    let (a, b) = (p.bivector(), q.bivector());
    let cross = cross3(a, b);
    Quaternion::new(
        p.w * q.w - (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]),
        p.w * b[0] + q.w * a[0] - cross[0],
        p.w * b[1] + q.w * a[1] - cross[1],
        p.w * b[2] + q.w * a[2] - cross[2],
    )
}

/// (pq)r − p(qr); identically zero for quaternions.
pub fn quat_associator(p: Quaternion, q: Quaternion, r: Quaternion) -> Quaternion {
    quat_mul(quat_mul(p, q), r) - quat_mul(p, quat_mul(q, r))
}

// ── Octonions ────────────────────────────────────────────────────────────

/// Octonion as 8 components: [scalar, e₁, …, e₇].
#[derive(Clone, Copy, PartialEq, Debug, serde::Serialize)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn zero() -> Self {
        Octonion([0.0; 8])
    }

    pub fn scalar(s: f64) -> Self {
        let mut o = Octonion::zero();
        o.0[0] = s;
        o
    }

    /// Imaginary unit e_j, 1-based.
    pub fn unit(j: usize) -> Self {
        assert!((1..=7).contains(&j));
        let mut o = Octonion::zero();
        o.0[j] = 1.0;
        o
    }

    /// Pure imaginary octonion with components `v` on e₁…e₇.
    pub fn from_imaginary(v: Vector7) -> Self {
        let mut o = Octonion::zero();
        o.0[1..8].copy_from_slice(&v);
        o
    }

    pub fn imaginary(self) -> Vector7 {
        let mut v = [0.0; 7];
        v.copy_from_slice(&self.0[1..8]);
        v
    }

    pub fn scalar_part(self) -> f64 {
        self.0[0]
    }

    /// Conjugation negates the seven imaginary parts.
    pub fn conj(self) -> Self {
        let mut o = self;
        for c in o.0[1..8].iter_mut() {
            *c = -*c;
        }
        o
    }

    pub fn norm_squared(self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dot(self, rhs: Octonion) -> f64 {
        self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(self, s: f64) -> Self {
        let mut o = self;
        for c in o.0.iter_mut() {
            *c *= s;
        }
        o
    }

    pub fn approx_eq(self, rhs: Octonion, tol: f64) -> bool {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl std::ops::Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut o = self;
        for (c, r) in o.0.iter_mut().zip(rhs.0.iter()) {
            *c += r;
        }
        o
    }
}

impl std::ops::Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        self + rhs.scaled(-1.0)
    }
}

/// Basis multiplication table: `entry[j][k] = (sign, index)` means
/// e_j e_k = sign · e_index, with index 0 the scalar slot.
#[derive(Clone, Debug)]
pub struct OctonionTable {
    entry: [[(f64, usize); 8]; 8],
}

impl OctonionTable {
    /// The Fano-plane table for the chosen triples.
    pub fn standard() -> &'static OctonionTable {
        use std::sync::OnceLock;
        static TABLE: OnceLock<OctonionTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let mut entry = [[(0.0, 0usize); 8]; 8];
            entry[0][0] = (1.0, 0);
            for (j, row) in entry.iter_mut().enumerate().skip(1) {
                row[0] = (1.0, j);
                row[j] = (-1.0, 0);
            }
            for (j, cell) in entry[0].iter_mut().enumerate().skip(1) {
                *cell = (1.0, j);
            }
            for &[a, b, c] in FANO_TRIPLES.iter() {
                for &(p, q, r) in &[(a, b, c), (b, c, a), (c, a, b)] {
                    entry[p][q] = (1.0, r);
                    entry[q][p] = (-1.0, r);
                }
            }
            OctonionTable { entry }
        })
    }

    /// A deliberately broken copy (e₁e₂ retargeted from e₄ to e₅) used as
    /// a negative control: norm composition must fail on it.
    pub fn corrupted() -> OctonionTable {
        let mut t = OctonionTable::standard().clone();
        t.entry[1][2] = (1.0, 5);
        t
    }

    /// Bilinear product of octonions under this table.
    pub fn mul(&self, x: Octonion, y: Octonion) -> Octonion {
        let mut out = Octonion::zero();
        for j in 0..8 {
            let a = x.0[j];
            if a == 0.0 {
                continue;
            }
            for k in 0..8 {
                let b = y.0[k];
                if b != 0.0 {
                    let (sign, idx) = self.entry[j][k];
                    out.0[idx] += sign * a * b;
                }
            }
        }
        out
    }
}

/// Octonion product under the standard Fano table.
pub fn oct_mul(x: Octonion, y: Octonion) -> Octonion {
    OctonionTable::standard().mul(x, y)
}

/// Associator [[x, y, z]] = (xy)z − x(yz).
pub fn associator(x: Octonion, y: Octonion, z: Octonion) -> Octonion {
    oct_mul(oct_mul(x, y), z) - oct_mul(x, oct_mul(y, z))
}

/// Commutator [x, y] = xy − yx.
pub fn oct_commutator(x: Octonion, y: Octonion) -> Octonion {
    oct_mul(x, y) - oct_mul(y, x)
}

// ── Cross products and structure tensors ────────────────────────────────

/// Right-handed cross product of R³ via ε-contraction.
pub fn cross3(a: Vector3, b: Vector3) -> Vector3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Totally antisymmetric structure tensor with entries in {−1, 0, +1}.
///
/// `dim` 3 holds ε_jkl; `dim` 7 holds the Fano tensor f_jkl normalized by
/// e_j e_k = −δ_jk + Σ f_jkl e_l.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    f: Vec<f64>,
}

impl StructureTensor {
    pub fn epsilon3() -> StructureTensor {
        let mut t = StructureTensor {
            dim: 3,
            f: vec![0.0; 27],
        };
        t.set(1, 2, 3, 1.0);
        t
    }

    pub fn fano7() -> StructureTensor {
        let mut t = StructureTensor {
            dim: 7,
            f: vec![0.0; 343],
        };
        for &[a, b, c] in FANO_TRIPLES.iter() {
            t.set(a, b, c, 1.0);
        }
        t
    }

    pub fn zero(dim: usize) -> StructureTensor {
        StructureTensor {
            dim,
            f: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, j: usize, k: usize, l: usize) -> usize {
        ((j - 1) * self.dim + (k - 1)) * self.dim + (l - 1)
    }

    /// 1-based component f_jkl.
    pub fn get(&self, j: usize, k: usize, l: usize) -> f64 {
        self.f[self.idx(j, k, l)]
    }

    pub fn set_raw(&mut self, j: usize, k: usize, l: usize, value: f64) {
        let i = self.idx(j, k, l);
        self.f[i] = value;
    }

    /// Sets all six antisymmetric images of (j,k,l).
    fn set(&mut self, j: usize, k: usize, l: usize, value: f64) {
        for &(a, b, c, s) in &[
            (j, k, l, 1.0),
            (k, l, j, 1.0),
            (l, j, k, 1.0),
            (k, j, l, -1.0),
            (j, l, k, -1.0),
            (l, k, j, -1.0),
        ] {
            self.set_raw(a, b, c, s * value);
        }
    }

    pub fn count_nonzero(&self) -> usize {
        self.f.iter().filter(|c| **c != 0.0).count()
    }

    /// max |f_jkl + f_kjl| over all entries; zero for tensors
    /// antisymmetric in the first two slots.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 1..=self.dim {
            for k in 1..=self.dim {
                for l in 1..=self.dim {
                    worst = worst.max((self.get(j, k, l) + self.get(k, j, l)).abs());
                }
            }
        }
        worst
    }

    /// max over the six slot permutations of the total-antisymmetry defect.
    pub fn total_antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 1..=self.dim {
            for k in 1..=self.dim {
                for l in 1..=self.dim {
                    let v = self.get(j, k, l);
                    worst = worst
                        .max((v - self.get(k, l, j)).abs())
                        .max((v - self.get(l, j, k)).abs())
                        .max((v + self.get(k, j, l)).abs())
                        .max((v + self.get(j, l, k)).abs())
                        .max((v + self.get(l, k, j)).abs());
                }
            }
        }
        worst
    }
}

/// Cross product of R⁷ by f-contraction: e_j × e_k = Σ f_jkl e_l.
pub fn cross7(a: Vector7, b: Vector7) -> Vector7 {
    contract7(&StructureTensor::fano7(), a, b)
}

fn contract7(f: &StructureTensor, a: Vector7, b: Vector7) -> Vector7 {
    let mut out = [0.0; 7];
    for j in 1..=7 {
        if a[j - 1] == 0.0 {
            continue;
        }
        for k in 1..=7 {
            let c = a[j - 1] * b[k - 1];
            if c == 0.0 {
                continue;
            }
            for l in 1..=7 {
                let fj = f.get(j, k, l);
                if fj != 0.0 {
                    out[l - 1] += fj * c;
                }
            }
        }
    }
    out
}

/// Structure functions f_jkl(ξ) at a point ξ of the unit 7-sphere:
///
///   f_jkl(ξ) = f_jkl(ξ₀) − ⟨ [[e_j, e_k, ξ]] (ξ† e_l†) ⟩₀
///
/// with ξ₀ = +1, † the conjugation, and the scalar part taken so the
/// tensor stays real. At ξ = ±1 the associator term vanishes and the
/// field reduces to the base tensor exactly.
pub fn structure_functions(xi: Octonion) -> Result<StructureTensor, AlgebraError> {
    let n = xi.norm();
    if (n - 1.0).abs() > TOL_EXACT {
        return Err(AlgebraError::NonUnitDirection { norm: n });
    }
    let base = StructureTensor::fano7();
    let mut out = StructureTensor::zero(7);
    let xi_conj = xi.conj();
    for j in 1..=7 {
        for k in 1..=7 {
            let assoc = associator(Octonion::unit(j), Octonion::unit(k), xi);
            for l in 1..=7 {
                let tail = oct_mul(xi_conj, Octonion::unit(l).conj());
                let correction = oct_mul(assoc, tail).scalar_part();
                out.set_raw(j, k, l, base.get(j, k, l) - correction);
            }
        }
    }
    Ok(out)
}

/// ξ-dependent cross product e_j ×_ξ e_k = Σ f_jkl(ξ) e_l.
pub fn cross7_xi(a: Vector7, b: Vector7, xi: Octonion) -> Result<Vector7, AlgebraError> {
    let f = structure_functions(xi)?;
    Ok(contract7(&f, a, b))
}

/// Octonion product with the imaginary-unit cross term contracted
/// against an arbitrary structure tensor instead of the Fano constants:
/// (x₀ + x⃗)(y₀ + y⃗) = x₀y₀ − x⃗·y⃗ + x₀y⃗ + y₀x⃗ + x⃗ ×_f y⃗.
pub fn oct_mul_with_tensor(f: &StructureTensor, x: Octonion, y: Octonion) -> Octonion {
    debug_assert_eq!(f.dim(), 7);
    let (xs, ys) = (x.scalar_part(), y.scalar_part());
    let (xv, yv) = (x.imaginary(), y.imaginary());
    let cross = contract7(f, xv, yv);
    let mut out = Octonion::scalar(xs * ys - crate::geometry::dot7(xv, yv));
    for l in 0..7 {
        out.0[l + 1] = xs * yv[l] + ys * xv[l] + cross[l];
    }
    out
}

/// Octonion product under the ξ-dependent structure functions; at
/// ξ = ±1 this is the standard product.
pub fn oct_mul_xi(x: Octonion, y: Octonion, xi: Octonion) -> Result<Octonion, AlgebraError> {
    Ok(oct_mul_with_tensor(&structure_functions(xi)?, x, y))
}

/// Norm-composition defect ‖xy‖ − ‖x‖‖y‖ under an arbitrary table.
pub fn norm_composition_defect(table: &OctonionTable, x: Octonion, y: Octonion) -> f64 {
    table.mul(x, y).norm() - x.norm() * y.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::bivector3;
    use crate::geometry::{dot7, norm7};
    use crate::rng::Stream;

    fn random_quat(stream: &mut Stream) -> Quaternion {
        Quaternion::new(
            stream.range(-1.0, 1.0),
            stream.range(-1.0, 1.0),
            stream.range(-1.0, 1.0),
            stream.range(-1.0, 1.0),
        )
    }

    fn random_oct(stream: &mut Stream) -> Octonion {
        let mut o = Octonion::zero();
        for c in o.0.iter_mut() {
            *c = stream.range(-1.0, 1.0);
        }
        o
    }

    #[test]
    fn fano_triples_cover_each_index_three_times() {
        let mut count = [0usize; 8];
        for t in FANO_TRIPLES.iter() {
            for &i in t {
                count[i] += 1;
            }
        }
        assert_eq!(&count[1..], &[3; 7]);
        // Distinct triples share exactly one index.
        for (i, a) in FANO_TRIPLES.iter().enumerate() {
            for b in FANO_TRIPLES.iter().skip(i + 1) {
                let shared = a.iter().filter(|x| b.contains(x)).count();
                assert_eq!(shared, 1, "triples {a:?} and {b:?}");
            }
        }
    }

    #[test]
    fn quat_mul_matches_clifford_embedding() {
        let mut stream = Stream::new(5, 0);
        for _ in 0..500 {
            let p = random_quat(&mut stream);
            let q = random_quat(&mut stream);
            let direct = quat_mul(p, q).to_multivector();
            let embedded = p.to_multivector().geometric_product(&q.to_multivector());
            assert!(direct.approx_eq(&embedded, TOL_EXACT));
        }
    }

    #[test]
    fn quat_unit_bivector_product() {
        // (I·e₁)(I·e₂) = −(I·e₃)
        let i1 = Quaternion::from_bivector([1.0, 0.0, 0.0]);
        let i2 = Quaternion::from_bivector([0.0, 1.0, 0.0]);
        let i3 = Quaternion::from_bivector([0.0, 0.0, 1.0]);
        assert!(quat_mul(i1, i2).approx_eq(i3.scaled(-1.0), 0.0));
        // Identity element.
        let mut stream = Stream::new(6, 0);
        let q = random_quat(&mut stream);
        assert!(quat_mul(Quaternion::ONE, q).approx_eq(q, 0.0));
    }

    #[test]
    fn quat_norm_composition_and_associativity() {
        let mut stream = Stream::new(7, 0);
        for _ in 0..10_000 {
            let p = random_quat(&mut stream);
            let q = random_quat(&mut stream);
            let defect = quat_mul(p, q).norm() - p.norm() * q.norm();
            assert!(defect.abs() < TOL_EXACT * (1.0 + p.norm() * q.norm()));
        }
        for i in 0..10_000u64 {
            let mut s = Stream::new(8, i);
            let p = random_quat(&mut s);
            let q = random_quat(&mut s);
            let r = random_quat(&mut s);
            let assoc = quat_associator(p, q, r);
            assert!(assoc.approx_eq(Quaternion::scalar(0.0), TOL_EXACT));
        }
    }

    #[test]
    fn octonion_product_rule_on_basis() {
        // e_j e_{j+1} = e_{j+3}, indices cycling mod 7.
        for j in 1..=7usize {
            let k = j % 7 + 1;
            let l = (j + 2) % 7 + 1;
            let prod = oct_mul(Octonion::unit(j), Octonion::unit(k));
            assert!(prod.approx_eq(Octonion::unit(l), 0.0), "j={j}");
        }
        // e₁e₂ = e₄ specifically, and the unit element.
        assert!(oct_mul(Octonion::unit(1), Octonion::unit(2)).approx_eq(Octonion::unit(4), 0.0));
        let mut stream = Stream::new(9, 0);
        let x = random_oct(&mut stream);
        assert!(oct_mul(Octonion::ONE, x).approx_eq(x, 0.0));
    }

    #[test]
    fn octonion_norm_composition_and_negative_control() {
        let mut stream = Stream::new(10, 0);
        let mut corrupted_worst: f64 = 0.0;
        let corrupted = OctonionTable::corrupted();
        for _ in 0..10_000 {
            let x = random_oct(&mut stream);
            let y = random_oct(&mut stream);
            let defect = norm_composition_defect(OctonionTable::standard(), x, y);
            assert!(defect.abs() < TOL_EXACT * (1.0 + x.norm() * y.norm()));
            corrupted_worst = corrupted_worst.max(norm_composition_defect(&corrupted, x, y).abs());
        }
        assert!(
            corrupted_worst > 0.01,
            "corrupted table unexpectedly norm-composing (worst defect {corrupted_worst})"
        );
    }

    #[test]
    fn octonion_alternative_but_not_associative() {
        let mut stream = Stream::new(11, 0);
        for _ in 0..2_000 {
            let x = random_oct(&mut stream);
            let y = random_oct(&mut stream);
            // Alternativity: x(xy) = (xx)y.
            let a = associator(x, x, y);
            assert!(a.approx_eq(Octonion::zero(), 1e-11));
            // The associator alternates: swapping the first two slots negates it.
            let z = random_oct(&mut stream);
            let s = associator(x, y, z) + associator(y, x, z);
            assert!(s.approx_eq(Octonion::zero(), 1e-11));
        }
        // A specific nonzero associator, frozen from the table:
        // (e₁e₂)e₃ = e₄e₃ = −e₆, e₁(e₂e₃) = e₁e₅ = e₆, so [[e₁,e₂,e₃]] = −2e₆.
        let a = associator(Octonion::unit(1), Octonion::unit(2), Octonion::unit(3));
        assert!(a.approx_eq(Octonion::unit(6).scaled(-2.0), 0.0));
    }

    #[test]
    fn fano_triples_generate_quaternionic_subalgebras() {
        // Each triple spans a closed associative subalgebra with zero associator.
        for &[a, b, c] in FANO_TRIPLES.iter() {
            let units = [Octonion::unit(a), Octonion::unit(b), Octonion::unit(c)];
            for &x in &units {
                for &y in &units {
                    let p = oct_mul(x, y);
                    // Product stays in span{1, e_a, e_b, e_c}.
                    for j in 1..=7 {
                        if j != a && j != b && j != c {
                            assert_eq!(p.0[j], 0.0);
                        }
                    }
                    for &z in &units {
                        assert!(associator(x, y, z).approx_eq(Octonion::zero(), 0.0));
                    }
                }
            }
        }
        // And that associator example (e₁,e₂,e₄) from a triple is zero.
        let a = associator(Octonion::unit(1), Octonion::unit(2), Octonion::unit(4));
        assert!(a.approx_eq(Octonion::zero(), 0.0));
    }

    #[test]
    fn cross3_identities() {
        assert_eq!(cross3([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), [0.0, 0.0, 1.0]);
        let mut stream = Stream::new(12, 0);
        for _ in 0..200 {
            let a = stream.unit_vector3();
            assert!(norm3_of(cross3(a, a)) < 1e-15);
            // Grade-2 part of (I·a)(I·b) is −I·(a×b).
            let b = stream.unit_vector3();
            let prod = bivector3(a, 1)
                .unwrap()
                .geometric_product(&bivector3(b, 1).unwrap());
            let q = Quaternion::from_multivector(&prod);
            let expect = cross3(a, b);
            for i in 0..3 {
                assert!((q.bivector()[i] + expect[i]).abs() < TOL_EXACT);
            }
        }
    }

    fn norm3_of(v: Vector3) -> f64 {
        crate::geometry::norm3(v)
    }

    #[test]
    fn cross7_identities() {
        let e = crate::geometry::basis7;
        let c = cross7(e(1), e(2));
        assert_eq!(c, e(4));
        let mut stream = Stream::new(13, 0);
        for _ in 0..500 {
            let u = stream.unit_vector7();
            let v = stream.unit_vector7();
            let uu = cross7(u, u);
            assert!(norm7(uu) < 1e-14);
            // Pythagorean identity ‖u×v‖² + (u·v)² = ‖u‖²‖v‖².
            let c = cross7(u, v);
            let lhs = dot7(c, c) + dot7(u, v) * dot7(u, v);
            assert!((lhs - 1.0).abs() < 1e-12);
            // Orthogonal to both arguments.
            assert!(dot7(c, u).abs() < 1e-12);
            assert!(dot7(c, v).abs() < 1e-12);
        }
    }

    #[test]
    fn structure_tensor_entry_counts() {
        let eps = StructureTensor::epsilon3();
        assert_eq!(eps.count_nonzero(), 6);
        assert_eq!(eps.total_antisymmetry_defect(), 0.0);
        let f = StructureTensor::fano7();
        assert_eq!(f.count_nonzero(), 42);
        assert_eq!(f.total_antisymmetry_defect(), 0.0);
        for j in 1..=7 {
            for k in 1..=7 {
                for l in 1..=7 {
                    let v = f.get(j, k, l);
                    assert!(v == 0.0 || v == 1.0 || v == -1.0);
                }
            }
        }
    }

    #[test]
    fn structure_functions_reduce_at_poles() {
        let base = StructureTensor::fano7();
        for pole in [1.0, -1.0] {
            let f = structure_functions(Octonion::scalar(pole)).unwrap();
            assert_eq!(f, base, "pole {pole}");
        }
        assert!(structure_functions(Octonion::scalar(0.9)).is_err());
    }

    #[test]
    fn structure_functions_antisymmetry() {
        let mut stream = Stream::new(14, 0);
        for _ in 0..100 {
            let xi = Octonion(stream.unit_vector8());
            let f = structure_functions(xi).unwrap();
            assert!(f.antisymmetry_defect() < 1e-12);
        }
    }

    #[test]
    fn structure_functions_total_antisymmetry_observed() {
        // Antisymmetry in (j,k) is forced by the alternating associator; the
        // extension to all three slots is checked empirically here.
        let mut stream = Stream::new(15, 0);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let xi = Octonion(stream.unit_vector8());
            let f = structure_functions(xi).unwrap();
            worst = worst.max(f.total_antisymmetry_defect());
        }
        assert!(worst < 1e-12, "total antisymmetry defect {worst}");
    }

    #[test]
    fn cross7_xi_reduces_and_stays_pythagorean() {
        let e = crate::geometry::basis7;
        let at_pole = cross7_xi(e(1), e(2), Octonion::scalar(1.0)).unwrap();
        assert_eq!(at_pole, e(4));

        let mut stream = Stream::new(16, 0);
        for _ in 0..60 {
            let xi = Octonion(stream.unit_vector8());
            let u = stream.unit_vector7();
            let v = stream.unit_vector7();
            let f = structure_functions(xi).unwrap();
            let uu = contract7(&f, u, u);
            assert!(norm7(uu) < 1e-11, "N ×_ξ N = {uu:?}");
            let c = contract7(&f, u, v);
            let sin_angle = (1.0 - dot7(u, v).powi(2)).max(0.0).sqrt();
            assert!(
                (norm7(c) - sin_angle).abs() < 1e-9,
                "Pythagorean rule: ‖u ×_ξ v‖ = {} vs sin∠ = {}",
                norm7(c),
                sin_angle
            );
            // Orthogonal to both arguments, as for the constant tensor.
            assert!(dot7(c, u).abs() < 1e-10);
            assert!(dot7(c, v).abs() < 1e-10);
        }
    }

    #[test]
    fn xi_product_composes_norms() {
        let mut stream = Stream::new(18, 0);
        for _ in 0..200 {
            let xi = Octonion(stream.unit_vector8());
            let x = random_oct(&mut stream);
            let y = random_oct(&mut stream);
            let p = oct_mul_xi(x, y, xi).unwrap();
            assert!((p.norm() - x.norm() * y.norm()).abs() < 1e-9);
        }
        // Reduction at the poles: the ξ-product is the table product.
        let x = random_oct(&mut Stream::new(19, 0));
        let y = random_oct(&mut Stream::new(19, 1));
        let at_pole = oct_mul_xi(x, y, Octonion::scalar(-1.0)).unwrap();
        assert!(at_pole.approx_eq(oct_mul(x, y), 1e-12));
    }

    #[test]
    fn cross7_xi_scaled_directions() {
        // Bilinear in both slots even for non-unit arguments.
        let mut stream = Stream::new(17, 0);
        let xi = Octonion(stream.unit_vector8());
        let u = stream.unit_vector7();
        let v = stream.unit_vector7();
        let c1 = cross7_xi(u, v, xi).unwrap();
        let us = crate::geometry::scale7(u, 2.5);
        let c2 = cross7_xi(us, v, xi).unwrap();
        for i in 0..7 {
            assert!((c2[i] - 2.5 * c1[i]).abs() < 1e-12);
        }
    }
}
