//! Hidden-state measurement functions and their ensemble averages.
//!
//! A measurement function maps a detector direction and the hidden state
//! μ to a unit-norm point of one of the parallelizable spheres. Pair
//! correlations are ensemble averages of handed products of two such
//! values; for the two-point ensemble over μ = ±I both states are
//! enumerated, the bivector parts cancel exactly, and the scalar part of
//! the mean is the correlation.

use std::fmt;

use crate::clifford::{bivector3, Multivector};
use crate::division::{
    oct_mul_with_tensor, structure_functions, Octonion, Quaternion, StructureTensor,
};
use crate::geometry::{dot3, norm3, norm7, Vector3, Vector7};
use crate::hidden::HiddenState;
use crate::qm::GhzAngles;
use crate::rng::Stream;

/// Fixed rotor axis for the 1-sphere model.
const S1_AXIS: Vector3 = [0.0, 0.0, 1.0];

/// Chunk length for Monte Carlo accumulation. Partial sums are taken per
/// chunk in index order, so the reduction is identical however the
/// chunks are scheduled.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    WrongEnsembleKind { expected: EnsembleKind },
    TooFewSamples { got: u64, minimum: u64 },
    TooFewValues,
    MixedSpheres,
    NonUnitDirection { norm: f64 },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::WrongEnsembleKind { expected } => {
                write!(f, "operation requires the {expected:?} ensemble")
            }
            ModelError::TooFewSamples { got, minimum } => {
                write!(f, "{got} samples is below the minimum {minimum}")
            }
            ModelError::TooFewValues => write!(f, "need at least two values"),
            ModelError::MixedSpheres => write!(f, "values from different spheres cannot compose"),
            ModelError::NonUnitDirection { norm } => {
                write!(f, "direction must be unit length, got norm {norm}")
            }
        }
    }
}

impl std::error::Error for ModelError {}

impl From<crate::clifford::AlgebraError> for ModelError {
    fn from(e: crate::clifford::AlgebraError) -> Self {
        match e {
            crate::clifford::AlgebraError::NonUnitDirection { norm } => {
                ModelError::NonUnitDirection { norm }
            }
        }
    }
}

fn check_unit3(v: Vector3) -> Result<(), ModelError> {
    let n = norm3(v);
    if (n - 1.0).abs() > 1e-12 {
        return Err(ModelError::NonUnitDirection { norm: n });
    }
    Ok(())
}

// ── Ensembles ────────────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// μ ∈ {+1, −1} with exact weights ½/½, enumerated rather than sampled.
    TwoPointUniform,
    /// λ uniform on S², sampled by counter-based streams.
    UniformSphereLambda,
}

#[derive(Clone, Copy, Debug)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub seed: u64,
    pub samples: u64,
}

impl EnsembleSpec {
    pub fn two_point() -> Self {
        EnsembleSpec {
            kind: EnsembleKind::TwoPointUniform,
            seed: 0,
            samples: 2,
        }
    }

    pub fn uniform_sphere(seed: u64, samples: u64) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::UniformSphereLambda,
            seed,
            samples,
        }
    }
}

// ── Measurement functions ────────────────────────────────────────────────

/// A value on one of the spheres: quaternionic for S⁰/S¹/S³, octonionic
/// for S⁷.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphereValue {
    S3(Quaternion),
    S7(Octonion),
}

impl SphereValue {
    pub fn norm(self) -> f64 {
        match self {
            SphereValue::S3(q) => q.norm(),
            SphereValue::S7(o) => o.norm(),
        }
    }

    pub fn scalar_part(self) -> f64 {
        match self {
            SphereValue::S3(q) => q.w,
            SphereValue::S7(o) => o.scalar_part(),
        }
    }
}

/// The families of local measurement functions, each mapping the hidden
/// state to a unit point of its sphere.
#[derive(Clone, Copy, Debug)]
pub enum MeasurementFunction {
    /// The 0-sphere model: the bare ±1 readout, carried as a unit scalar.
    S0Sign,
    /// Rotor about the fixed axis: cos φ + (μ·ẑ) sin φ.
    S1Rotor { phi: f64 },
    /// Equatorial point μ·a of S³.
    S3Equatorial { direction: Vector3 },
    /// Non-equatorial point cos α + (μ·a) sin α of S³.
    S3NonEquatorial { direction: Vector3, alpha: f64 },
    /// Equatorial point μ·N of S⁷.
    S7Equatorial { direction: Vector7 },
    /// Non-equatorial point cos α + (μ·N) sin α of S⁷.
    S7NonEquatorial { direction: Vector7, alpha: f64 },
}

impl MeasurementFunction {
    /// Evaluates the function at the hidden state.
    pub fn value(&self, mu: HiddenState) -> Result<SphereValue, ModelError> {
        let h = mu.value();
        Ok(match *self {
            MeasurementFunction::S0Sign => SphereValue::S3(Quaternion::scalar(h)),
            MeasurementFunction::S1Rotor { phi } => SphereValue::S3(
                Quaternion::scalar(phi.cos())
                    + Quaternion::from_bivector(S1_AXIS).scaled(h * phi.sin()),
            ),
            MeasurementFunction::S3Equatorial { direction } => {
                check_unit3(direction)?;
                SphereValue::S3(Quaternion::from_bivector(direction).scaled(h))
            }
            MeasurementFunction::S3NonEquatorial { direction, alpha } => {
                check_unit3(direction)?;
                SphereValue::S3(
                    Quaternion::scalar(alpha.cos())
                        + Quaternion::from_bivector(direction).scaled(h * alpha.sin()),
                )
            }
            MeasurementFunction::S7Equatorial { direction } => {
                let n = norm7(direction);
                if (n - 1.0).abs() > 1e-12 {
                    return Err(ModelError::NonUnitDirection { norm: n });
                }
                SphereValue::S7(Octonion::from_imaginary(direction).scaled(h))
            }
            MeasurementFunction::S7NonEquatorial { direction, alpha } => {
                let n = norm7(direction);
                if (n - 1.0).abs() > 1e-12 {
                    return Err(ModelError::NonUnitDirection { norm: n });
                }
                SphereValue::S7(
                    Octonion::scalar(alpha.cos())
                        + Octonion::from_imaginary(direction).scaled(h * alpha.sin()),
                )
            }
        })
    }
}

// ── Pair correlations ────────────────────────────────────────────────────

/// Ensemble average of a handed product of two values.
#[derive(Clone, Copy, Debug)]
pub struct CorrelationEstimate {
    /// The averaged multivector (even subalgebra of Cl(3,0)).
    pub mean: Quaternion,
    /// Scalar part of the mean: the reported correlation.
    pub scalar_part: f64,
    /// Standard error of the scalar part; exactly zero for enumerated
    /// two-point ensembles.
    pub stderr: f64,
    pub samples_used: u64,
}

/// ℰ(a, b) for the equatorial 3-sphere model: the enumerated two-point
/// average of (μ·a)(μ·b). The handed bivector parts cancel exactly and
/// the scalar part is −a·b.
pub fn epr_correlation(
    a: Vector3,
    b: Vector3,
    ens: &EnsembleSpec,
) -> Result<CorrelationEstimate, ModelError> {
    if ens.kind != EnsembleKind::TwoPointUniform {
        return Err(ModelError::WrongEnsembleKind {
            expected: EnsembleKind::TwoPointUniform,
        });
    }
    check_unit3(a)?;
    check_unit3(b)?;
    let mut mean = Quaternion::scalar(0.0);
    for mu in HiddenState::BOTH {
        let va = match (MeasurementFunction::S3Equatorial { direction: a }).value(mu)? {
            SphereValue::S3(q) => q,
            SphereValue::S7(_) => unreachable!(),
        };
        let vb = match (MeasurementFunction::S3Equatorial { direction: b }).value(mu)? {
            SphereValue::S3(q) => q,
            SphereValue::S7(_) => unreachable!(),
        };
        mean = mean + mu.compose_quat(va, vb);
    }
    mean = mean.scaled(0.5);
    Ok(CorrelationEstimate {
        mean,
        scalar_part: mean.w,
        stderr: 0.0,
        samples_used: 2,
    })
}

/// Closed form of the sign-model correlation: −1 + (2/π)·cos⁻¹(a·b).
pub fn linear_closed_form(cos_angle: f64) -> f64 {
    -1.0 + (2.0 / std::f64::consts::PI) * cos_angle.clamp(-1.0, 1.0).acos()
}

/// Monte Carlo correlation of the sign model A = sign(λ·a),
/// B = −sign(λ·b) with λ uniform on S². Converges to the linear closed
/// form; the standard error of the mean is reported.
pub fn linear_model_correlation(
    a: Vector3,
    b: Vector3,
    ens: &EnsembleSpec,
) -> Result<CorrelationEstimate, ModelError> {
    if ens.kind != EnsembleKind::UniformSphereLambda {
        return Err(ModelError::WrongEnsembleKind {
            expected: EnsembleKind::UniformSphereLambda,
        });
    }
    if ens.samples < 100 {
        return Err(ModelError::TooFewSamples {
            got: ens.samples,
            minimum: 100,
        });
    }
    check_unit3(a)?;
    check_unit3(b)?;
    // Fixed-order chunk reduction: each chunk sums sequentially, chunk
    // totals combine in index order.
    let mut sum = 0.0f64;
    let n = ens.samples;
    let mut chunk_start = 0u64;
    while chunk_start < n {
        let chunk_end = (chunk_start + CHUNK).min(n);
        let mut partial = 0.0f64;
        for i in chunk_start..chunk_end {
            let lambda = Stream::new(ens.seed, i).unit_vector3();
            let alice = if dot3(lambda, a) >= 0.0 { 1.0 } else { -1.0 };
            let bob = if dot3(lambda, b) >= 0.0 { -1.0 } else { 1.0 };
            partial += alice * bob;
        }
        sum += partial;
        chunk_start = chunk_end;
    }
    let mean = sum / n as f64;
    // Products are ±1, so the sample variance is 1 − mean².
    let variance = (1.0 - mean * mean).max(0.0);
    let stderr = (variance / (n as f64 - 1.0)).sqrt();
    Ok(CorrelationEstimate {
        mean: Quaternion::scalar(mean),
        scalar_part: mean,
        stderr,
        samples_used: n,
    })
}

/// Non-equatorial local value A_a = cos α + (μ·a) sin α as a point of S³.
pub fn hardy_local_value(
    alpha: f64,
    a: Vector3,
    mu: HiddenState,
) -> Result<Quaternion, ModelError> {
    match (MeasurementFunction::S3NonEquatorial {
        direction: a,
        alpha,
    })
    .value(mu)?
    {
        SphereValue::S3(q) => Ok(q),
        SphereValue::S7(_) => unreachable!(),
    }
}

// ── GHZ ──────────────────────────────────────────────────────────────────

/// The four analyzer directions pushed into R⁷, one sparse pattern per
/// particle; unit vectors map to unit vectors.
#[derive(Clone, Copy, Debug)]
pub struct GhzDirectionEmbedding {
    pub n: [Vector7; 4],
}

impl GhzDirectionEmbedding {
    pub fn new(dirs: [Vector3; 4]) -> Self {
        let [n1, n2, n3, n4] = dirs;
        GhzDirectionEmbedding {
            n: [
                [-n1[0], n1[1], -n1[2], 0.0, 0.0, 0.0, 0.0],
                [n2[0], n2[1], 0.0, n2[2], 0.0, 0.0, 0.0],
                [n3[0], n3[1], 0.0, 0.0, n3[2], 0.0, 0.0],
                [n4[0], -n4[1], 0.0, 0.0, 0.0, -n4[2], 0.0],
            ],
        }
    }

    pub fn norms(&self) -> [f64; 4] {
        [
            norm7(self.n[0]),
            norm7(self.n[1]),
            norm7(self.n[2]),
            norm7(self.n[3]),
        ]
    }
}

/// Four-particle correlation of the 7-sphere model.
#[derive(Clone, Copy, Debug)]
pub struct GhzCorrelation {
    /// cosθ₁cosθ₂cosθ₃cosθ₄ − sinθ₁sinθ₂sinθ₃sinθ₄ cos(φ₁+φ₂−φ₃−φ₄).
    pub value: f64,
    pub embedding: GhzDirectionEmbedding,
    /// Worst deviation of the embedded directions from unit norm.
    pub embedding_defect: f64,
    /// Worst deviation of the four local values μ·N(n_i) from unit norm,
    /// over both hidden states.
    pub value_defect: f64,
}

/// Evaluates the closed-form GHZ correlation and checks that the
/// embedded directions and local values stay on their spheres.
pub fn ghz_correlation(angles: &GhzAngles) -> Result<GhzCorrelation, ModelError> {
    let t = angles.theta;
    let p = angles.phi;
    let value = t[0].cos() * t[1].cos() * t[2].cos() * t[3].cos()
        - t[0].sin() * t[1].sin() * t[2].sin() * t[3].sin() * (p[0] + p[1] - p[2] - p[3]).cos();

    let embedding = GhzDirectionEmbedding::new(angles.directions());
    let mut embedding_defect: f64 = 0.0;
    let mut value_defect: f64 = 0.0;
    for dir in embedding.n.iter() {
        embedding_defect = embedding_defect.max((norm7(*dir) - 1.0).abs());
        for mu in HiddenState::BOTH {
            let v = MeasurementFunction::S7Equatorial { direction: *dir }.value(mu)?;
            value_defect = value_defect.max((v.norm() - 1.0).abs());
        }
    }
    Ok(GhzCorrelation {
        value,
        embedding,
        embedding_defect,
        value_defect,
    })
}

// ── The orthogonal-directions outcome table ──────────────────────────────

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Up,
    Down,
}

#[derive(Clone, Debug)]
pub struct OutcomeRow {
    pub state: HiddenState,
    pub alice: Outcome,
    pub bob: Outcome,
}

/// One verified composition equation: worst coefficient difference
/// between the two sides, computed at blade level.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub label: String,
    pub residual: f64,
}

/// The outcome bookkeeping for detectors along e_x and e_y with e_z the
/// counterfactual third direction.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    pub rows: Vec<OutcomeRow>,
    pub identities: Vec<IdentityCheck>,
    /// Product of the three ±1 readouts per state: +1 for μ = +I, −1 for
    /// μ = −I.
    pub net_beable: [(HiddenState, f64); 2],
    pub max_residual: f64,
}

fn signed_bivector(sign: f64, axis: Vector3) -> Multivector {
    bivector3(axis, 1).expect("axis is unit").scaled(sign)
}

/// Enumerates the sign assignments consistent with composition on the
/// parallelized sphere for detectors along e_x, e_y and verifies each
/// listed equation by direct geometric products.
pub fn outcome_table() -> OutcomeTable {
    let ex = [1.0, 0.0, 0.0];
    let ey = [0.0, 1.0, 0.0];
    let ez = [0.0, 0.0, 1.0];
    let mut identities = Vec::new();

    // The four sign alternatives available at the fixed state μ = +I:
    // flipping the sense of either rotor flips the sense of the product.
    for (sa, sb) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
        let lhs = signed_bivector(sa, ex).geometric_product(&signed_bivector(sb, ey));
        let rhs = signed_bivector(-sa * sb, ez);
        let residual = (&lhs - &rhs).max_abs_coeff();
        identities.push(IdentityCheck {
            label: format!(
                "[{:+}I·ex][{:+}I·ey] = {:+}I·ez",
                sa as i8,
                sb as i8,
                (-sa * sb) as i8
            ),
            residual,
        });
    }

    // Per-state pair equations, composed with the state's handed product.
    let mut rows = Vec::new();
    for mu in HiddenState::BOTH {
        let h = mu.value();
        // Alice's readout about e_x is the state sign; Bob's two
        // alternatives are ±.
        for bob_sign in [h, -h] {
            let a = signed_bivector(h, ex);
            let b = signed_bivector(bob_sign, ey);
            let product = mu.compose_multivector(&a, &b);
            // Composition lands on ∓I·e_z: the product of the two senses,
            // inverted by the torsion of the handed frame.
            let rhs_sign = -h * bob_sign * h;
            let rhs = signed_bivector(rhs_sign, ez);
            let residual = (&product - &rhs).max_abs_coeff();
            identities.push(IdentityCheck {
                label: format!(
                    "state {:+}: [{:+}I·ex][{:+}I·ey] = {:+}I·ez",
                    h as i8, h as i8, bob_sign as i8, rhs_sign as i8
                ),
                residual,
            });
            rows.push(OutcomeRow {
                state: mu,
                alice: if h > 0.0 { Outcome::Up } else { Outcome::Down },
                bob: if bob_sign > 0.0 {
                    Outcome::Up
                } else {
                    Outcome::Down
                },
            });
        }
    }

    let net_beable = [(HiddenState::Plus, 1.0), (HiddenState::Minus, -1.0)];
    // The net beable is the product of the three ±1 readouts, all equal
    // to the state sign: h³ = h.
    for (mu, expected) in net_beable {
        let h = mu.value();
        assert_eq!(h * h * h, expected);
    }

    let max_residual = identities.iter().fold(0.0f64, |m, c| m.max(c.residual));
    OutcomeTable {
        rows,
        identities,
        net_beable,
        max_residual,
    }
}

// ── Factorizability ──────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug)]
pub struct FactorizabilityReport {
    pub product_norm: f64,
    /// |product_norm − 1|: how far the composed value drifted off the sphere.
    pub residual: f64,
    pub factorizable: bool,
}

/// Composes a chain of values left to right with the handed product and
/// checks the result still lies on the sphere. S⁷ chains compose under
/// the ξ-dependent product.
pub fn factorizability_check(
    values: &[SphereValue],
    mu: HiddenState,
    xi: Option<Octonion>,
) -> Result<FactorizabilityReport, ModelError> {
    if values.len() < 2 {
        return Err(ModelError::TooFewValues);
    }
    let all_s3 = values.iter().all(|v| matches!(v, SphereValue::S3(_)));
    let all_s7 = values.iter().all(|v| matches!(v, SphereValue::S7(_)));
    if !all_s3 && !all_s7 {
        return Err(ModelError::MixedSpheres);
    }
    let product_norm = if all_s3 {
        let quats: Vec<Quaternion> = values
            .iter()
            .map(|v| match v {
                SphereValue::S3(q) => *q,
                SphereValue::S7(_) => unreachable!(),
            })
            .collect();
        mu.compose_quat_chain(&quats).norm()
    } else {
        let f: StructureTensor = match xi {
            Some(point) => structure_functions(point).map_err(|e| -> ModelError { e.into() })?,
            None => StructureTensor::fano7(),
        };
        let octs: Vec<Octonion> = values
            .iter()
            .map(|v| match v {
                SphereValue::S7(o) => *o,
                SphereValue::S3(_) => unreachable!(),
            })
            .collect();
        let compose = |x: Octonion, y: Octonion| match mu {
            HiddenState::Plus => oct_mul_with_tensor(&f, x, y),
            HiddenState::Minus => oct_mul_with_tensor(&f, y, x),
        };
        octs.iter().copied().fold(Octonion::ONE, compose).norm()
    };
    let residual = (product_norm - 1.0).abs();
    Ok(FactorizabilityReport {
        product_norm,
        residual,
        factorizable: residual < 1e-9,
    })
}

// ── Degenerate spheres ───────────────────────────────────────────────────

#[derive(Clone, Copy, Debug)]
pub struct S1Check {
    /// Worst coefficient of R(φ)R(φ′) − R(φ′)R(φ).
    pub commutator_defect: f64,
    /// Worst coefficient of R(φ)R(φ′) − R(φ+φ′).
    pub composition_defect: f64,
    pub commutes: bool,
}

/// Rotors about a fixed axis commute and compose by angle addition:
/// the 1-sphere carries neither curvature nor torsion.
pub fn s1_commutativity_check(phi: f64, phi2: f64) -> S1Check {
    let rotor = |angle: f64| {
        Quaternion::scalar(angle.cos()) + Quaternion::from_bivector(S1_AXIS).scaled(angle.sin())
    };
    let left = crate::division::quat_mul(rotor(phi), rotor(phi2));
    let right = crate::division::quat_mul(rotor(phi2), rotor(phi));
    let composed = rotor(phi + phi2);
    let commutator_defect = (left - right).norm();
    let composition_defect = (left - composed).norm();
    S1Check {
        commutator_defect,
        composition_defect,
        commutes: commutator_defect < 1e-12,
    }
}

/// The readout along the direction exclusive to both detectors for a
/// fixed state: ±1 with the state's sign.
pub fn exclusive_direction_value(mu: HiddenState) -> f64 {
    mu.value()
}

/// Two-point ensemble average of the readout along the direction
/// exclusive to both detectors: identically zero, encoding the
/// null-result convention. The direction itself only gets validated;
/// the ±1 readout does not depend on it.
pub fn exclusive_direction_average(z: Vector3, ens: &EnsembleSpec) -> Result<f64, ModelError> {
    check_unit3(z)?;
    if ens.kind != EnsembleKind::TwoPointUniform {
        return Err(ModelError::WrongEnsembleKind {
            expected: EnsembleKind::TwoPointUniform,
        });
    }
    let sum: f64 = HiddenState::BOTH
        .iter()
        .map(|mu| exclusive_direction_value(*mu))
        .sum();
    Ok(sum / 2.0)
}
