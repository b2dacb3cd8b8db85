//! Tangent frames on S³ and S⁷, frame transport, torsion commutators,
//! and a finite-difference check that the frame connection is flat.
//!
//! The 3-sphere of unit quaternions carries the global frame
//! β_i(X) = (I·e_i)X; the 7-sphere of unit octonions carries e_j ξ. In
//! both cases declaring the frame covariantly constant defines a
//! connection whose curvature vanishes while its torsion encodes how the
//! frame twists. The twist is measured two ways that must agree:
//! algebraically through handed commutators of measurement values, and
//! numerically by differentiating the frame field in a local chart.

use std::fmt;

use crate::clifford::{bivector3, AlgebraError, Multivector, TOL_EXACT};
use crate::division::{oct_mul, quat_mul, structure_functions, Octonion, Quaternion};
use crate::geometry::{norm3, norm7, Vector3, Vector7};
use crate::hidden::HiddenState;
use crate::rng::Stream;

/// Acceptance threshold for the numerical curvature of the sphere frames.
/// Central differences at step 1e−4 leave O(step²) truncation plus
/// O(ε/step²) rounding, both comfortably below this.
pub const TOL_CURVATURE: f64 = 1e-6;

/// Curvature threshold for the flat control, where the frame components
/// are constant and no differencing error survives.
pub const TOL_FLAT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ParallelError {
    NonUnitPoint { norm: f64 },
    InvalidStep { step: f64 },
    InvalidSamples,
    DegenerateChart,
}

impl fmt::Display for ParallelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParallelError::NonUnitPoint { norm } => {
                write!(f, "point must lie on the unit sphere, got norm {norm}")
            }
            ParallelError::InvalidStep { step } => {
                write!(f, "finite-difference step {step} outside (0, 1e-2]")
            }
            ParallelError::InvalidSamples => write!(f, "need at least one sample point"),
            ParallelError::DegenerateChart => {
                write!(f, "chart basis became degenerate and resampling failed")
            }
        }
    }
}

impl std::error::Error for ParallelError {}

impl From<AlgebraError> for ParallelError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NonUnitDirection { norm } => ParallelError::NonUnitPoint { norm },
        }
    }
}

// ── Sphere points and frames ─────────────────────────────────────────────

/// A point of S³ as a unit element of the even subalgebra of Cl(3,0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint3(Quaternion);

impl SpherePoint3 {
    pub fn new(q: Quaternion) -> Result<Self, ParallelError> {
        let n = q.norm();
        if (n - 1.0).abs() > TOL_EXACT {
            return Err(ParallelError::NonUnitPoint { norm: n });
        }
        Ok(SpherePoint3(q))
    }

    pub fn one() -> Self {
        SpherePoint3(Quaternion::ONE)
    }

    pub fn random(stream: &mut Stream) -> Self {
        loop {
            let q = Quaternion::new(
                stream.gaussian(),
                stream.gaussian(),
                stream.gaussian(),
                stream.gaussian(),
            );
            let n = q.norm();
            if n > 1e-6 {
                return SpherePoint3(q.scaled(1.0 / n));
            }
        }
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }
}

/// A point of S⁷ as a unit octonion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint7(Octonion);

impl SpherePoint7 {
    pub fn new(o: Octonion) -> Result<Self, ParallelError> {
        let n = o.norm();
        if (n - 1.0).abs() > TOL_EXACT {
            return Err(ParallelError::NonUnitPoint { norm: n });
        }
        Ok(SpherePoint7(o))
    }

    pub fn random(stream: &mut Stream) -> Self {
        SpherePoint7(Octonion(stream.unit_vector8()))
    }

    pub fn octonion(self) -> Octonion {
        self.0
    }
}

/// The three tangent vectors β_i(X) = (I·e_i)X.
#[derive(Clone, Copy, Debug)]
pub struct TangentFrame3 {
    pub beta: [Quaternion; 3],
}

/// The seven tangent vectors e_j ξ.
#[derive(Clone, Copy, Debug)]
pub struct TangentFrame7 {
    pub frame: [Octonion; 7],
}

/// Frame at X by left multiplication with the basis bivectors.
pub fn s3_frame(x: SpherePoint3) -> TangentFrame3 {
    let q = x.quaternion();
    let beta = [
        quat_mul(Quaternion::from_bivector([1.0, 0.0, 0.0]), q),
        quat_mul(Quaternion::from_bivector([0.0, 1.0, 0.0]), q),
        quat_mul(Quaternion::from_bivector([0.0, 0.0, 1.0]), q),
    ];
    TangentFrame3 { beta }
}

/// Transports a frame by right multiplication: each β_i picks up the
/// factor Y on the right, preserving orthonormality.
pub fn transport_frame(frame: &TangentFrame3, y: SpherePoint3) -> TangentFrame3 {
    let q = y.quaternion();
    TangentFrame3 {
        beta: [
            quat_mul(frame.beta[0], q),
            quat_mul(frame.beta[1], q),
            quat_mul(frame.beta[2], q),
        ],
    }
}

/// Frame at ξ by left multiplication with the imaginary units.
pub fn s7_frame(xi: SpherePoint7) -> TangentFrame7 {
    let o = xi.octonion();
    let mut frame = [Octonion::zero(); 7];
    for (j, f) in frame.iter_mut().enumerate() {
        *f = oct_mul(Octonion::unit(j + 1), o);
    }
    TangentFrame7 { frame }
}

/// Gram matrix of a frame against itself plus the base point row:
/// returns max |β_i·β_j − δ_ij| and max |β_i·X|.
pub fn s3_frame_defects(x: SpherePoint3, frame: &TangentFrame3) -> (f64, f64) {
    let mut ortho: f64 = 0.0;
    let mut tangent: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let g = frame.beta[i].dot(frame.beta[j]);
            let expected = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((g - expected).abs());
        }
        tangent = tangent.max(frame.beta[i].dot(x.quaternion()).abs());
    }
    (ortho, tangent)
}

pub fn s7_frame_defects(xi: SpherePoint7, frame: &TangentFrame7) -> (f64, f64) {
    let mut ortho: f64 = 0.0;
    let mut tangent: f64 = 0.0;
    for i in 0..7 {
        for j in 0..7 {
            let g = frame.frame[i].dot(frame.frame[j]);
            let expected = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((g - expected).abs());
        }
        tangent = tangent.max(frame.frame[i].dot(xi.octonion()).abs());
    }
    (ortho, tangent)
}

// ── Torsion by handed commutators ────────────────────────────────────────

fn check_unit3(v: Vector3) -> Result<(), ParallelError> {
    let n = norm3(v);
    if (n - 1.0).abs() > TOL_EXACT {
        return Err(ParallelError::NonUnitPoint { norm: n });
    }
    Ok(())
}

/// Torsion of a pair of equatorial values: ½[μ·a, μ·a′] computed at blade
/// level, which works out to −μ·(a×a′).
pub fn torsion_equatorial(
    a: Vector3,
    a2: Vector3,
    mu: HiddenState,
) -> Result<Multivector, ParallelError> {
    check_unit3(a)?;
    check_unit3(a2)?;
    let ba = bivector3(a, mu.sign())?;
    let ba2 = bivector3(a2, mu.sign())?;
    let comm = &mu.compose_multivector(&ba, &ba2) - &mu.compose_multivector(&ba2, &ba);
    Ok(comm.scaled(0.5))
}

/// Torsion of non-equatorial values A = cosα + (μ·a) sinα: the scalar
/// parts drop out of the commutator, leaving sinα sinα′ times the
/// equatorial torsion.
pub fn torsion_nonequatorial(
    alpha: f64,
    alpha2: f64,
    a: Vector3,
    a2: Vector3,
    mu: HiddenState,
) -> Result<Multivector, ParallelError> {
    check_unit3(a)?;
    check_unit3(a2)?;
    let va = &Multivector::scalar(3, alpha.cos()) + &bivector3(a, mu.sign())?.scaled(alpha.sin());
    let va2 =
        &Multivector::scalar(3, alpha2.cos()) + &bivector3(a2, mu.sign())?.scaled(alpha2.sin());
    let comm = &mu.compose_multivector(&va, &va2) - &mu.compose_multivector(&va2, &va);
    Ok(comm.scaled(0.5))
}

/// Torsion of a pair of 7-sphere values under the ξ-dependent product:
/// ½[μ·N, μ·N′]_ξ, a pure imaginary octonion along μ·(N ×_ξ N′).
///
/// The sign convention e_j e_k = −δ_jk + Σ f_jkl e_l makes the half
/// commutator come out as +μ·(N ×_ξ N′); its magnitude is the sine of
/// the angle between the directions either way.
pub fn torsion_7sphere(
    na: Vector7,
    na2: Vector7,
    xi: Octonion,
    mu: HiddenState,
) -> Result<Octonion, ParallelError> {
    for v in [na, na2] {
        let n = norm7(v);
        if (n - 1.0).abs() > TOL_EXACT {
            return Err(ParallelError::NonUnitPoint { norm: n });
        }
    }
    let f = structure_functions(xi)?;
    let h = mu.value();
    let va = Octonion::from_imaginary(na).scaled(h);
    let va2 = Octonion::from_imaginary(na2).scaled(h);
    // Product with the ξ-dependent structure functions; the handed state
    // flips the composition order exactly as for quaternions.
    let compose = |x: Octonion, y: Octonion| match mu {
        HiddenState::Plus => crate::division::oct_mul_with_tensor(&f, x, y),
        HiddenState::Minus => crate::division::oct_mul_with_tensor(&f, y, x),
    };
    Ok((compose(va, va2) - compose(va2, va)).scaled(0.5))
}

// ── Numerical curvature of the frame connection ──────────────────────────

/// Which frame field the chart machinery differentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartSpace {
    /// S³ with the quaternionic frame β_i(X) = (I·e_i)X.
    Sphere3,
    /// S⁷ with the octonionic frame e_j ξ.
    Sphere7,
    /// R³ with the constant standard frame: the Euclidean control, where
    /// both curvature and torsion must vanish identically.
    FlatR3,
}

impl ChartSpace {
    pub fn coords(self) -> usize {
        match self {
            ChartSpace::Sphere3 | ChartSpace::FlatR3 => 3,
            ChartSpace::Sphere7 => 7,
        }
    }

    fn ambient(self) -> usize {
        match self {
            ChartSpace::Sphere3 => 4,
            ChartSpace::Sphere7 => 8,
            ChartSpace::FlatR3 => 3,
        }
    }
}

/// Max |R^α_{βγδ}| over the sampled points.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub space: ChartSpace,
    pub samples: usize,
    pub step: f64,
    pub max_abs_component: f64,
}

/// Frame-index torsion extracted from the antisymmetric part of the
/// connection, normalized to the half-commutator convention
/// T̂ˡ_jk = ½(Ωˡ_kj − Ωˡ_jk).
#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub space: ChartSpace,
    /// T̂ˡ_jk at the first sampled point, flattened as [(j−1)k + (k−1)]l….
    pub components: Vec<f64>,
    /// max |T̂ˡ_jk + T̂ˡ_kj| over all samples.
    pub antisymmetry_defect: f64,
    /// max |T̂ − expected| over all samples: −ε_jkl on S³, the structure
    /// functions f_jkl(ξ) on S⁷, zero on the flat control.
    pub max_expected_mismatch: f64,
    pub matches_expected: bool,
}

struct Chart {
    space: ChartSpace,
    /// Center point in the ambient space.
    center: Vec<f64>,
    /// Frame vectors at the center, used as chart directions.
    axes: Vec<Vec<f64>>,
}

impl Chart {
    fn at(space: ChartSpace, stream: &mut Stream) -> Chart {
        match space {
            ChartSpace::Sphere3 => {
                let p = SpherePoint3::random(stream);
                let f = s3_frame(p);
                Chart {
                    space,
                    center: quat_coords(p.quaternion()),
                    axes: f.beta.iter().map(|q| quat_coords(*q)).collect(),
                }
            }
            ChartSpace::Sphere7 => {
                let p = SpherePoint7::random(stream);
                let f = s7_frame(p);
                Chart {
                    space,
                    center: p.octonion().0.to_vec(),
                    axes: f.frame.iter().map(|o| o.0.to_vec()).collect(),
                }
            }
            ChartSpace::FlatR3 => Chart {
                space,
                center: vec![
                    stream.range(-1.0, 1.0),
                    stream.range(-1.0, 1.0),
                    stream.range(-1.0, 1.0),
                ],
                axes: vec![
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                ],
            },
        }
    }

    /// Ambient position of chart coordinate u.
    fn point(&self, u: &[f64]) -> Vec<f64> {
        let n = self.space.ambient();
        let mut p = self.center.clone();
        for (axis, &uu) in self.axes.iter().zip(u.iter()) {
            for i in 0..n {
                p[i] += uu * axis[i];
            }
        }
        if self.space == ChartSpace::FlatR3 {
            return p;
        }
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        p.iter_mut().for_each(|x| *x /= norm);
        p
    }

    /// Coordinate basis vectors ∂_α at chart coordinate u: the chart is
    /// u ↦ (center + uE)/‖center + uE‖, whose derivative along axis α is
    /// the tangential projection of the axis, scaled by 1/‖center + uE‖.
    fn coord_basis(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let n = self.space.ambient();
        if self.space == ChartSpace::FlatR3 {
            return self.axes.clone();
        }
        let mut q = self.center.clone();
        for (axis, &uu) in self.axes.iter().zip(u.iter()) {
            for i in 0..n {
                q[i] += uu * axis[i];
            }
        }
        let qnorm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let p: Vec<f64> = q.iter().map(|x| x / qnorm).collect();
        self.axes
            .iter()
            .map(|axis| {
                let radial: f64 = axis.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
                axis.iter()
                    .zip(p.iter())
                    .map(|(a, b)| (a - radial * b) / qnorm)
                    .collect()
            })
            .collect()
    }

    /// Frame vectors evaluated at the ambient point p.
    fn frame(&self, p: &[f64]) -> Vec<Vec<f64>> {
        match self.space {
            ChartSpace::Sphere3 => {
                let q = Quaternion::new(p[0], p[1], p[2], p[3]);
                (0..3)
                    .map(|i| {
                        let mut b = [0.0; 3];
                        b[i] = 1.0;
                        quat_coords(quat_mul(Quaternion::from_bivector(b), q))
                    })
                    .collect()
            }
            ChartSpace::Sphere7 => {
                let mut o = Octonion::zero();
                o.0.copy_from_slice(p);
                (1..=7)
                    .map(|j| oct_mul(Octonion::unit(j), o).0.to_vec())
                    .collect()
            }
            ChartSpace::FlatR3 => self.axes.clone(),
        }
    }

    /// Components of the frame in the coordinate basis at u: solves the
    /// Gram system ⟨∂_β, ∂_α⟩ Eᵢ^α = ⟨∂_β, E_i⟩ for each frame leg.
    fn frame_components(&self, u: &[f64]) -> Result<Vec<Vec<f64>>, ParallelError> {
        let k = self.space.coords();
        let basis = self.coord_basis(u);
        let frame = self.frame(&self.point(u));
        let mut gram = vec![vec![0.0; k]; k];
        for b in 0..k {
            for a in 0..k {
                gram[b][a] = dot(&basis[b], &basis[a]);
            }
        }
        let mut rhs = vec![vec![0.0; k]; k];
        for (i, leg) in frame.iter().enumerate() {
            for b in 0..k {
                rhs[i][b] = dot(&basis[b], leg);
            }
        }
        let inv = invert(&gram).ok_or(ParallelError::DegenerateChart)?;
        let mut comp = vec![vec![0.0; k]; k];
        for i in 0..k {
            for a in 0..k {
                comp[i][a] = (0..k).map(|b| inv[a][b] * rhs[i][b]).sum();
            }
        }
        Ok(comp)
    }

    /// Connection coefficients Ω^α_{βγ} at u for the connection that
    /// holds the frame covariantly constant: Ω^α_{βγ} = −(∂_γ E_i^α) e^i_β,
    /// with γ the derivative index; central differences with step h.
    fn omega(&self, u: &[f64], h: f64) -> Result<Vec<Vec<Vec<f64>>>, ParallelError> {
        let k = self.space.coords();
        let comp = self.frame_components(u)?;
        let coframe = invert(&comp).ok_or(ParallelError::DegenerateChart)?;
        // d_comp[γ][i][α] = ∂_γ E_i^α
        let mut d_comp = vec![vec![vec![0.0; k]; k]; k];
        for g in 0..k {
            let mut up = u.to_vec();
            up[g] += h;
            let mut dn = u.to_vec();
            dn[g] -= h;
            let cu = self.frame_components(&up)?;
            let cd = self.frame_components(&dn)?;
            for i in 0..k {
                for a in 0..k {
                    d_comp[g][i][a] = (cu[i][a] - cd[i][a]) / (2.0 * h);
                }
            }
        }
        // coframe[α][i] = e^i_α satisfies Σ_α E_i^α e^j_α = δ_ij, i.e. it is
        // the inverse of the component matrix with indices transposed.
        let mut omega = vec![vec![vec![0.0; k]; k]; k];
        for a in 0..k {
            for b in 0..k {
                for g in 0..k {
                    let mut s = 0.0;
                    for i in 0..k {
                        s -= d_comp[g][i][a] * coframe[b][i];
                    }
                    omega[a][b][g] = s;
                }
            }
        }
        Ok(omega)
    }
}

fn quat_coords(q: Quaternion) -> Vec<f64> {
    vec![q.w, q.x, q.y, q.z]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Gauss-Jordan inverse with partial pivoting for the small chart systems.
fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv = vec![vec![0.0; n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[row][j] -= f * a[col][j];
                        inv[row][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Evaluates the curvature tensor R^α_{βγδ} of the frame connection at
/// `samples` random points and extracts the torsion from the
/// antisymmetric part of the connection at each.
///
/// R^α_{βγδ} = ∂_γ Ω^α_{βδ} − ∂_δ Ω^α_{βγ} + Ω^α_{σγ}Ω^σ_{βδ} − Ω^α_{σδ}Ω^σ_{βγ}
pub fn curvature_check(
    space: ChartSpace,
    samples: usize,
    step: f64,
    seed: u64,
) -> Result<(CurvatureReport, TorsionReport), ParallelError> {
    if samples == 0 {
        return Err(ParallelError::InvalidSamples);
    }
    if !(step > 0.0 && step <= 1e-2) {
        return Err(ParallelError::InvalidStep { step });
    }
    let k = space.coords();
    let mut max_r: f64 = 0.0;
    let mut first_torsion: Vec<f64> = Vec::new();
    let mut antisym: f64 = 0.0;
    let mut mismatch: f64 = 0.0;

    for sample in 0..samples {
        let mut stream = Stream::new(seed, sample as u64);
        let mut chart = Chart::at(space, &mut stream);
        // Resample a handful of times if the chart degenerates.
        let mut attempts = 0;
        let (omega0, domega) = loop {
            let built = build_connection(&chart, step);
            match built {
                Ok(v) => break v,
                Err(ParallelError::DegenerateChart) if attempts < 8 => {
                    attempts += 1;
                    chart = Chart::at(space, &mut stream);
                }
                Err(e) => return Err(e),
            }
        };

        // Curvature at the chart center.
        for a in 0..k {
            for b in 0..k {
                for g in 0..k {
                    for d in 0..k {
                        let mut r = domega[g][a][b][d] - domega[d][a][b][g];
                        for (s, omega_s) in omega0.iter().enumerate() {
                            r += omega0[a][s][g] * omega_s[b][d] - omega0[a][s][d] * omega_s[b][g];
                        }
                        max_r = max_r.max(r.abs());
                    }
                }
            }
        }

        // Torsion at the center: T̂ˡ_jk = ½(Ωˡ_kj − Ωˡ_jk). At u = 0 the
        // coordinate basis is the frame itself, so chart indices are frame
        // indices.
        let mut torsion = vec![0.0; k * k * k];
        for l in 0..k {
            for j in 0..k {
                for kk in 0..k {
                    torsion[(j * k + kk) * k + l] = 0.5 * (omega0[l][kk][j] - omega0[l][j][kk]);
                }
            }
        }
        let expected = expected_torsion(space, &chart);
        for l in 0..k {
            for j in 0..k {
                for kk in 0..k {
                    let t = torsion[(j * k + kk) * k + l];
                    let t_swapped = torsion[(kk * k + j) * k + l];
                    antisym = antisym.max((t + t_swapped).abs());
                    mismatch = mismatch.max((t - expected[(j * k + kk) * k + l]).abs());
                }
            }
        }
        if sample == 0 {
            first_torsion = torsion;
        }
    }

    let matches_expected = mismatch < TOL_CURVATURE;
    Ok((
        CurvatureReport {
            space,
            samples,
            step,
            max_abs_component: max_r,
        },
        TorsionReport {
            space,
            components: first_torsion,
            antisymmetry_defect: antisym,
            max_expected_mismatch: mismatch,
            matches_expected,
        },
    ))
}

type Connection = Vec<Vec<Vec<f64>>>;

/// Ω at the center plus its central-difference derivatives along each
/// chart axis: returns (Ω(0), dΩ[γ] = ∂_γΩ).
fn build_connection(chart: &Chart, h: f64) -> Result<(Connection, Vec<Connection>), ParallelError> {
    let k = chart.space.coords();
    let center = vec![0.0; k];
    let omega0 = chart.omega(&center, h)?;
    let mut domega = Vec::with_capacity(k);
    for g in 0..k {
        let mut up = center.clone();
        up[g] += h;
        let mut dn = center.clone();
        dn[g] -= h;
        let ou = chart.omega(&up, h)?;
        let od = chart.omega(&dn, h)?;
        let mut d = vec![vec![vec![0.0; k]; k]; k];
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    d[a][b][c] = (ou[a][b][c] - od[a][b][c]) / (2.0 * h);
                }
            }
        }
        domega.push(d);
    }
    Ok((omega0, domega))
}

/// The frame-index torsion each space should exhibit, flattened like the
/// report: −ε_jkl on S³, f_jkl(ξ) on S⁷, zero on the flat control.
fn expected_torsion(space: ChartSpace, chart: &Chart) -> Vec<f64> {
    let k = space.coords();
    let mut out = vec![0.0; k * k * k];
    match space {
        ChartSpace::FlatR3 => {}
        ChartSpace::Sphere3 => {
            let eps = crate::division::StructureTensor::epsilon3();
            for j in 1..=3 {
                for kk in 1..=3 {
                    for l in 1..=3 {
                        out[((j - 1) * k + (kk - 1)) * k + (l - 1)] = -eps.get(j, kk, l);
                    }
                }
            }
        }
        ChartSpace::Sphere7 => {
            let mut xi = Octonion::zero();
            xi.0.copy_from_slice(&chart.center);
            let f = structure_functions(xi).expect("chart center is unit");
            for j in 1..=7 {
                for kk in 1..=7 {
                    for l in 1..=7 {
                        out[((j - 1) * k + (kk - 1)) * k + (l - 1)] = f.get(j, kk, l);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::cross3;
    use crate::geometry::dot3;

    #[test]
    fn frame_at_poles_matches_components() {
        // X = (1,0,0,0): β_i are the coordinate axes.
        let f = s3_frame(SpherePoint3::one());
        assert!(f.beta[0].approx_eq(Quaternion::new(0.0, 1.0, 0.0, 0.0), 0.0));
        assert!(f.beta[1].approx_eq(Quaternion::new(0.0, 0.0, 1.0, 0.0), 0.0));
        assert!(f.beta[2].approx_eq(Quaternion::new(0.0, 0.0, 0.0, 1.0), 0.0));

        // X = (0,1,0,0): β₁ = (−1,0,0,0), β₂ = (0,0,0,1), β₃ = (0,0,−1,0).
        let x = SpherePoint3::new(Quaternion::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let f = s3_frame(x);
        assert!(f.beta[0].approx_eq(Quaternion::new(-1.0, 0.0, 0.0, 0.0), 0.0));
    }

    #[test]
    fn frame_components_for_random_points() {
        // β₁(X) = (−X₁, X₀, X₃, −X₂), β₂(X) = (−X₂, −X₃, X₀, X₁),
        // β₃(X) = (−X₃, X₂, −X₁, X₀) component by component.
        let mut stream = Stream::new(58, 0);
        for _ in 0..200 {
            let p = SpherePoint3::random(&mut stream);
            let (w, x, y, z) = {
                let q = p.quaternion();
                (q.w, q.x, q.y, q.z)
            };
            let f = s3_frame(p);
            assert!(f.beta[0].approx_eq(Quaternion::new(-x, w, z, -y), TOL_EXACT));
            assert!(f.beta[1].approx_eq(Quaternion::new(-y, -z, w, x), TOL_EXACT));
            assert!(f.beta[2].approx_eq(Quaternion::new(-z, y, -x, w), TOL_EXACT));
        }
    }

    #[test]
    fn frames_are_orthonormal_and_tangent() {
        let mut stream = Stream::new(51, 0);
        for _ in 0..1000 {
            let x = SpherePoint3::random(&mut stream);
            let (ortho, tangent) = s3_frame_defects(x, &s3_frame(x));
            assert!(ortho < TOL_EXACT);
            assert!(tangent < TOL_EXACT);
        }
        for _ in 0..200 {
            let xi = SpherePoint7::random(&mut stream);
            let (ortho, tangent) = s7_frame_defects(xi, &s7_frame(xi));
            assert!(ortho < TOL_EXACT);
            assert!(tangent < TOL_EXACT);
        }
    }

    #[test]
    fn transport_properties() {
        let mut stream = Stream::new(52, 0);
        let x = SpherePoint3::random(&mut stream);
        let f = s3_frame(x);
        // Transport by the identity leaves the frame alone.
        let same = transport_frame(&f, SpherePoint3::one());
        for i in 0..3 {
            assert!(same.beta[i].approx_eq(f.beta[i], 0.0));
        }
        // Transporting the pole frame to X lands on the frame at X.
        let from_pole = transport_frame(&s3_frame(SpherePoint3::one()), x);
        let direct = s3_frame(x);
        for i in 0..3 {
            assert!(from_pole.beta[i].approx_eq(direct.beta[i], TOL_EXACT));
        }
        // Orthonormality survives chains of transports.
        let mut frame = f;
        let mut here = x;
        for _ in 0..5 {
            let step = SpherePoint3::random(&mut stream);
            frame = transport_frame(&frame, step);
            here = SpherePoint3::new(quat_mul(here.quaternion(), step.quaternion())).unwrap();
            let (ortho, tangent) = s3_frame_defects(here, &frame);
            assert!(ortho < 1e-12);
            assert!(tangent < 1e-12);
        }
    }

    #[test]
    fn transport_is_path_independent() {
        // Composing two hops equals the single hop by the product point:
        // the operational content of path independence on the group.
        let mut stream = Stream::new(53, 0);
        for _ in 0..100 {
            let x = SpherePoint3::random(&mut stream);
            let z = SpherePoint3::random(&mut stream);
            let w = SpherePoint3::random(&mut stream);
            let f = s3_frame(x);
            let two_hops = transport_frame(&transport_frame(&f, z), w);
            let zw = SpherePoint3::new(quat_mul(z.quaternion(), w.quaternion())).unwrap();
            let one_hop = transport_frame(&f, zw);
            for i in 0..3 {
                assert!(two_hops.beta[i].approx_eq(one_hop.beta[i], TOL_EXACT));
            }
        }
    }

    #[test]
    fn equatorial_torsion_is_minus_mu_cross() {
        let mut stream = Stream::new(54, 0);
        for _ in 0..300 {
            let a = stream.unit_vector3();
            let a2 = stream.unit_vector3();
            for mu in HiddenState::BOTH {
                let t = torsion_equatorial(a, a2, mu).unwrap();
                let cross = cross3(a, a2);
                let sin_angle = norm3(cross);
                // −μ·(a×a′): build without the unit check by scaling.
                let expected = if sin_angle > 1e-14 {
                    bivector3(crate::geometry::scale3(cross, 1.0 / sin_angle), mu.sign())
                        .unwrap()
                        .scaled(-sin_angle)
                } else {
                    Multivector::zero(3)
                };
                assert!(t.approx_eq(&expected, TOL_EXACT), "mu = {mu:?}");
                assert!((t.norm() - sin_angle).abs() < TOL_EXACT);
                // Antisymmetry under swapping the directions.
                let swapped = torsion_equatorial(a2, a, mu).unwrap();
                assert!(swapped.approx_eq(&t.scaled(-1.0), TOL_EXACT));
            }
        }
        // Specific value: a = e₁, a′ = e₂, μ = +I gives −I·e₃.
        let t = torsion_equatorial([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], HiddenState::Plus).unwrap();
        let expected = bivector3([0.0, 0.0, 1.0], 1).unwrap().scaled(-1.0);
        assert!(t.approx_eq(&expected, 0.0));
        // a = a′ kills it.
        let z = torsion_equatorial([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], HiddenState::Plus).unwrap();
        assert!(z.approx_eq(&Multivector::zero(3), 0.0));
    }

    #[test]
    fn nonequatorial_torsion_scales_by_sines() {
        let mut stream = Stream::new(55, 0);
        for _ in 0..300 {
            let a = stream.unit_vector3();
            let a2 = stream.unit_vector3();
            let alpha = stream.range(0.0, std::f64::consts::PI);
            let alpha2 = stream.range(0.0, std::f64::consts::PI);
            for mu in HiddenState::BOTH {
                let t = torsion_nonequatorial(alpha, alpha2, a, a2, mu).unwrap();
                let base = torsion_equatorial(a, a2, mu).unwrap();
                let expected = base.scaled(alpha.sin() * alpha2.sin());
                assert!(t.approx_eq(&expected, TOL_EXACT));
            }
        }
        // Right angles reduce to the equatorial case; α = 0 kills it.
        let h = std::f64::consts::FRAC_PI_2;
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 0.0, 1.0];
        let t = torsion_nonequatorial(h, h, a, b, HiddenState::Plus).unwrap();
        assert!(t.approx_eq(
            &torsion_equatorial(a, b, HiddenState::Plus).unwrap(),
            TOL_EXACT
        ));
        let z = torsion_nonequatorial(0.0, 0.7, a, b, HiddenState::Plus).unwrap();
        assert!(z.max_abs_coeff() < TOL_EXACT);
    }

    #[test]
    fn seven_sphere_torsion() {
        use crate::geometry::basis7;
        // At ξ = 1 with e₁, e₂ the half commutator lies along e₄; the
        // handed state fixes its sign.
        let t = torsion_7sphere(
            basis7(1),
            basis7(2),
            Octonion::scalar(1.0),
            HiddenState::Minus,
        )
        .unwrap();
        assert!(t.approx_eq(Octonion::unit(4).scaled(-1.0), TOL_EXACT));
        let t = torsion_7sphere(
            basis7(1),
            basis7(2),
            Octonion::scalar(1.0),
            HiddenState::Plus,
        )
        .unwrap();
        assert!(t.approx_eq(Octonion::unit(4), TOL_EXACT));

        // N = N′ gives zero.
        let z = torsion_7sphere(
            basis7(3),
            basis7(3),
            Octonion::scalar(1.0),
            HiddenState::Plus,
        )
        .unwrap();
        assert!(z.approx_eq(Octonion::zero(), TOL_EXACT));

        // The torsion depends on ξ: generic directions see different values
        // at different points of the sphere.
        let mut stream = Stream::new(56, 0);
        let na = stream.unit_vector7();
        let nb = stream.unit_vector7();
        let xi1 = Octonion(stream.unit_vector8());
        let xi2 = Octonion(stream.unit_vector8());
        let t1 = torsion_7sphere(na, nb, xi1, HiddenState::Plus).unwrap();
        let t2 = torsion_7sphere(na, nb, xi2, HiddenState::Plus).unwrap();
        assert!(
            !t1.approx_eq(t2, 1e-6),
            "torsion unexpectedly constant across ξ"
        );
        // Magnitude is the sine of the angle for both.
        let expected = (1.0 - crate::geometry::dot7(na, nb).powi(2))
            .max(0.0)
            .sqrt();
        assert!((t1.norm() - expected).abs() < 1e-9);
        assert!((t2.norm() - expected).abs() < 1e-9);
    }

    #[test]
    fn left_right_product_difference() {
        // (μ·a)(μ·a′) − (μ·a′)(μ·a) = −2μ·(a×a′) under the handed product.
        let mut stream = Stream::new(57, 0);
        for _ in 0..200 {
            let a = stream.unit_vector3();
            let a2 = stream.unit_vector3();
            for mu in HiddenState::BOTH {
                let t = torsion_equatorial(a, a2, mu).unwrap().scaled(2.0);
                let cross = cross3(a, a2);
                let n = norm3(cross);
                if n < 1e-12 {
                    continue;
                }
                let unit = crate::geometry::scale3(cross, 1.0 / n);
                let expected = bivector3(unit, mu.sign()).unwrap().scaled(-2.0 * n);
                assert!(t.approx_eq(&expected, 1e-11));
            }
        }
        let _ = dot3([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    }

    #[test]
    fn flat_control_is_exactly_flat_and_torsion_free() {
        let (curv, tors) = curvature_check(ChartSpace::FlatR3, 5, 1e-4, 99).unwrap();
        assert!(curv.max_abs_component < TOL_FLAT);
        assert!(tors.max_expected_mismatch < TOL_FLAT);
        assert!(tors.matches_expected);
    }

    #[test]
    fn sphere3_curvature_vanishes_and_torsion_matches() {
        let (curv, tors) = curvature_check(ChartSpace::Sphere3, 10, 1e-4, 7).unwrap();
        assert!(
            curv.max_abs_component < TOL_CURVATURE,
            "max |R| = {}",
            curv.max_abs_component
        );
        assert!(
            tors.matches_expected,
            "torsion mismatch {}",
            tors.max_expected_mismatch
        );
        assert!(tors.antisymmetry_defect < TOL_CURVATURE);
    }

    #[test]
    fn sphere7_curvature_vanishes_and_torsion_matches_structure_functions() {
        let (curv, tors) = curvature_check(ChartSpace::Sphere7, 3, 1e-4, 11).unwrap();
        assert!(
            curv.max_abs_component < TOL_CURVATURE,
            "max |R| = {}",
            curv.max_abs_component
        );
        assert!(
            tors.matches_expected,
            "torsion mismatch {}",
            tors.max_expected_mismatch
        );
    }

    #[test]
    fn curvature_check_rejects_bad_parameters() {
        assert!(matches!(
            curvature_check(ChartSpace::Sphere3, 0, 1e-4, 0),
            Err(ParallelError::InvalidSamples)
        ));
        assert!(matches!(
            curvature_check(ChartSpace::Sphere3, 1, 0.5, 0),
            Err(ParallelError::InvalidStep { .. })
        ));
    }
}
