//! CHSH strings, bound formulas, and their verification machinery.
//!
//! For a quadruple of settings the string is
//! ℰ(a,b) + ℰ(a,b′) + ℰ(a′,b) − ℰ(a′,b′). Two ceilings are tracked:
//!
//! * the *pairing bound* 2√(1 − (a×a′)·(b×b′)), whose radicand is the
//!   scalar of the product of the two parties' torsion commutators — on
//!   the degenerate spheres the torsion vanishes and it collapses to 2;
//! * the *variance bound* √⟨‖F‖²⟩ with F the handed sum of value
//!   products, which is a Cauchy-Schwarz theorem for every model and is
//!   what the scans assert per trial.
//!
//! On the equatorial 3-sphere the two coincide identically (the pairing
//! term is exactly the commutator cross term of ‖F‖²) and both top out
//! at 2√2. With non-equatorial scalar parts the pairing formula keeps
//! only the sin-weighted commutator term, so it can undershoot the
//! achievable string; the scans therefore assert the variance bound and
//! report the pairing-bound margin separately. Cross products pair
//! unprimed-first in both factors throughout.

use serde::Serialize;

use crate::division::{cross3, cross7_xi, Octonion, Quaternion};
use crate::geometry::{dot3, dot7, planar, Vector3, Vector7};
use crate::hidden::HiddenState;
use crate::models::{linear_closed_form, linear_model_correlation, EnsembleSpec, ModelError};
use crate::rng::Stream;

/// 2√2, the ceiling shared by the 3- and 7-sphere models.
pub const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Per-trial slack when comparing a string against a bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Convergence target for the maximizer.
pub const TOL_OPTIMUM: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChshMode {
    S0,
    S1,
    S3Equatorial,
    S3NonEquatorial,
    S7Equatorial,
    S7NonEquatorial,
    /// The sign model on uniformly distributed λ, evaluated by Monte
    /// Carlo at the optimizer's candidate settings.
    LinearMc,
}

impl ChshMode {
    /// The analytic ceiling for the mode: 2 where the torsion vanishes,
    /// 2√2 on the twisted spheres.
    pub fn ceiling(self) -> f64 {
        match self {
            ChshMode::S0 | ChshMode::S1 | ChshMode::LinearMc => 2.0,
            _ => TSIRELSON,
        }
    }

    pub fn is_seven(self) -> bool {
        matches!(self, ChshMode::S7Equatorial | ChshMode::S7NonEquatorial)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChshError {
    ModeMismatch { mode: ChshMode },
    TooFewTrials { got: u64, minimum: u64 },
    Model(ModelError),
}

impl std::fmt::Display for ChshError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChshError::ModeMismatch { mode } => {
                write!(f, "quadruple does not carry the data for mode {mode:?}")
            }
            ChshError::TooFewTrials { got, minimum } => {
                write!(f, "{got} trials is below the minimum {minimum}")
            }
            ChshError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ChshError {}

impl From<ModelError> for ChshError {
    fn from(e: ModelError) -> Self {
        ChshError::Model(e)
    }
}

// ── Quadruples ───────────────────────────────────────────────────────────

/// Settings for the S⁰/S¹/S³ family: four unit 3-vectors plus optional
/// polar offsets (α_a, α_a′, β_b, β_b′) for the non-equatorial model.
/// The S¹ mode reads each direction's equatorial phase atan2(y, x).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DirectionQuadruple {
    pub a: Vector3,
    pub a_alt: Vector3,
    pub b: Vector3,
    pub b_alt: Vector3,
    pub alphas: Option<[f64; 4]>,
}

impl DirectionQuadruple {
    pub fn equatorial(a: Vector3, a_alt: Vector3, b: Vector3, b_alt: Vector3) -> Self {
        DirectionQuadruple {
            a,
            a_alt,
            b,
            b_alt,
            alphas: None,
        }
    }

    /// Coplanar quadruple from in-plane angles in radians.
    pub fn coplanar(angles: [f64; 4]) -> Self {
        DirectionQuadruple::equatorial(
            planar(angles[0]),
            planar(angles[1]),
            planar(angles[2]),
            planar(angles[3]),
        )
    }

    fn sines(&self) -> f64 {
        match self.alphas {
            None => 1.0,
            Some([a, a2, b, b2]) => a.sin() * a2.sin() * b.sin() * b2.sin(),
        }
    }

    fn phases(&self) -> [f64; 4] {
        [
            self.a[1].atan2(self.a[0]),
            self.a_alt[1].atan2(self.a_alt[0]),
            self.b[1].atan2(self.b[0]),
            self.b_alt[1].atan2(self.b_alt[0]),
        ]
    }
}

/// Settings for the S⁷ family: four unit 7-vectors, the two sphere
/// points fixing each party's cross product, and optional polar offsets.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SevenQuadruple {
    pub na: Vector7,
    pub na_alt: Vector7,
    pub nb: Vector7,
    pub nb_alt: Vector7,
    pub xi1: Octonion,
    pub xi2: Octonion,
    pub alphas: Option<[f64; 4]>,
}

impl SevenQuadruple {
    pub fn equatorial(na: Vector7, na_alt: Vector7, nb: Vector7, nb_alt: Vector7) -> Self {
        SevenQuadruple {
            na,
            na_alt,
            nb,
            nb_alt,
            xi1: Octonion::scalar(1.0),
            xi2: Octonion::scalar(1.0),
            alphas: None,
        }
    }

    fn sines(&self) -> f64 {
        match self.alphas {
            None => 1.0,
            Some([a, a2, b, b2]) => a.sin() * a2.sin() * b.sin() * b2.sin(),
        }
    }
}

/// A quadruple for any mode. The variants differ in size, but both
/// stay plain `Copy` values: quadruples are created by the million in
/// scans and never stored long-term.
#[derive(Clone, Copy, Debug, Serialize)]
#[allow(clippy::large_enum_variant)]
pub enum Quadruple {
    Directions(DirectionQuadruple),
    Seven(SevenQuadruple),
}

// ── Pair correlations per mode ───────────────────────────────────────────

/// Two-point enumerated correlation of quaternionic values
/// A = cos α + (μ·a) sin α, B = cos β + (μ·b) sin β.
fn corr_quat(a: Vector3, alpha: f64, b: Vector3, beta: f64) -> f64 {
    let mut mean = 0.0;
    for mu in HiddenState::BOTH {
        let h = mu.value();
        let va =
            Quaternion::scalar(alpha.cos()) + Quaternion::from_bivector(a).scaled(h * alpha.sin());
        let vb =
            Quaternion::scalar(beta.cos()) + Quaternion::from_bivector(b).scaled(h * beta.sin());
        mean += mu.compose_quat(va, vb).w;
    }
    mean / 2.0
}

/// Two-point enumerated correlation of octonionic values.
fn corr_oct(na: Vector7, alpha: f64, nb: Vector7, beta: f64) -> f64 {
    let mut mean = 0.0;
    for mu in HiddenState::BOTH {
        let h = mu.value();
        let va =
            Octonion::scalar(alpha.cos()) + Octonion::from_imaginary(na).scaled(h * alpha.sin());
        let vb = Octonion::scalar(beta.cos()) + Octonion::from_imaginary(nb).scaled(h * beta.sin());
        mean += mu.compose_oct(va, vb).scalar_part();
    }
    mean / 2.0
}

/// The zero-torsion 1-sphere correlation: rotors about a common axis
/// carry no torsion, and torsion-free transport leaves only the linear
/// correlation in the circular distance between the phases.
fn corr_s1(phi_a: f64, phi_b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut d = (phi_a - phi_b).rem_euclid(tau);
    if d > std::f64::consts::PI {
        d = tau - d;
    }
    -1.0 + 2.0 * d / std::f64::consts::PI
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

fn alphas_of(alphas: Option<[f64; 4]>) -> [f64; 4] {
    alphas.unwrap_or([HALF_PI; 4])
}

/// The four correlations (ab, ab′, a′b, a′b′) for a mode and quadruple.
pub fn correlations(mode: ChshMode, q: &Quadruple) -> Result<[f64; 4], ChshError> {
    match (mode, q) {
        (ChshMode::S0, Quadruple::Directions(_)) => {
            // Direction-independent ±1 readouts, anticorrelated: the
            // enumerated average is −1 for every pair.
            Ok([-1.0; 4])
        }
        (ChshMode::S1, Quadruple::Directions(d)) => {
            let [pa, pa2, pb, pb2] = d.phases();
            Ok([
                corr_s1(pa, pb),
                corr_s1(pa, pb2),
                corr_s1(pa2, pb),
                corr_s1(pa2, pb2),
            ])
        }
        (ChshMode::S3Equatorial, Quadruple::Directions(d)) => Ok([
            corr_quat(d.a, HALF_PI, d.b, HALF_PI),
            corr_quat(d.a, HALF_PI, d.b_alt, HALF_PI),
            corr_quat(d.a_alt, HALF_PI, d.b, HALF_PI),
            corr_quat(d.a_alt, HALF_PI, d.b_alt, HALF_PI),
        ]),
        (ChshMode::S3NonEquatorial, Quadruple::Directions(d)) => {
            let [aa, aa2, bb, bb2] = alphas_of(d.alphas);
            Ok([
                corr_quat(d.a, aa, d.b, bb),
                corr_quat(d.a, aa, d.b_alt, bb2),
                corr_quat(d.a_alt, aa2, d.b, bb),
                corr_quat(d.a_alt, aa2, d.b_alt, bb2),
            ])
        }
        (ChshMode::S7Equatorial, Quadruple::Seven(s)) => Ok([
            corr_oct(s.na, HALF_PI, s.nb, HALF_PI),
            corr_oct(s.na, HALF_PI, s.nb_alt, HALF_PI),
            corr_oct(s.na_alt, HALF_PI, s.nb, HALF_PI),
            corr_oct(s.na_alt, HALF_PI, s.nb_alt, HALF_PI),
        ]),
        (ChshMode::S7NonEquatorial, Quadruple::Seven(s)) => {
            let [aa, aa2, bb, bb2] = alphas_of(s.alphas);
            Ok([
                corr_oct(s.na, aa, s.nb, bb),
                corr_oct(s.na, aa, s.nb_alt, bb2),
                corr_oct(s.na_alt, aa2, s.nb, bb),
                corr_oct(s.na_alt, aa2, s.nb_alt, bb2),
            ])
        }
        (ChshMode::LinearMc, Quadruple::Directions(d)) => {
            // Closed form; the Monte Carlo route lives in
            // `linear_mc_string` where a sample budget is available.
            Ok([
                linear_closed_form(dot3(d.a, d.b)),
                linear_closed_form(dot3(d.a, d.b_alt)),
                linear_closed_form(dot3(d.a_alt, d.b)),
                linear_closed_form(dot3(d.a_alt, d.b_alt)),
            ])
        }
        _ => Err(ChshError::ModeMismatch { mode }),
    }
}

// ── Bounds ───────────────────────────────────────────────────────────────

/// The pairing of the two parties' torsion directions,
/// (a×a′)·(b×b′), both cross products unprimed-first.
pub fn torsion_pairing3(q: &DirectionQuadruple) -> f64 {
    dot3(cross3(q.a, q.a_alt), cross3(q.b, q.b_alt))
}

/// Equatorial 3-sphere bound 2√(1 − (a×a′)·(b×b′)).
pub fn bound_s3(q: &DirectionQuadruple) -> f64 {
    2.0 * (1.0 - torsion_pairing3(q)).max(0.0).sqrt()
}

/// Non-equatorial 3-sphere bound: the pairing picks up the four sines
/// of the polar offsets. Reduces to `bound_s3` at right angles and to 2
/// when any offset vanishes.
pub fn bound_s3_nonequatorial(q: &DirectionQuadruple) -> f64 {
    2.0 * (1.0 - torsion_pairing3(q) * q.sines()).max(0.0).sqrt()
}

/// ξ-dependent pairing {Na ×_ξ₁ Na′}·{Nb ×_ξ₂ Nb′} of the 7-sphere.
pub fn torsion_pairing7(q: &SevenQuadruple) -> Result<f64, ChshError> {
    let ca = cross7_xi(q.na, q.na_alt, q.xi1).map_err(|e| ChshError::Model(e.into()))?;
    let cb = cross7_xi(q.nb, q.nb_alt, q.xi2).map_err(|e| ChshError::Model(e.into()))?;
    Ok(dot7(ca, cb))
}

/// 7-sphere bound 2√(1 − {Na ×_ξ₁ Na′}·{Nb ×_ξ₂ Nb′}·sin-factors).
pub fn bound_s7(q: &SevenQuadruple) -> Result<f64, ChshError> {
    let pairing = torsion_pairing7(q)?;
    Ok(2.0 * (1.0 - pairing * q.sines()).max(0.0).sqrt())
}

/// The formula bound for a mode: 2 on the torsion-free spheres, the
/// pairing bound on S³/S⁷.
pub fn formula_bound(mode: ChshMode, q: &Quadruple) -> Result<f64, ChshError> {
    match (mode, q) {
        (ChshMode::S0 | ChshMode::S1 | ChshMode::LinearMc, Quadruple::Directions(_)) => Ok(2.0),
        (ChshMode::S3Equatorial, Quadruple::Directions(d)) => Ok(bound_s3(d)),
        (ChshMode::S3NonEquatorial, Quadruple::Directions(d)) => Ok(bound_s3_nonequatorial(d)),
        (ChshMode::S7Equatorial | ChshMode::S7NonEquatorial, Quadruple::Seven(s)) => bound_s7(s),
        _ => Err(ChshError::ModeMismatch { mode }),
    }
}

/// √⟨‖F‖²⟩ for F = A(B + B′) + A′(B − B′) composed with the handed
/// product and averaged over both hidden states. |string| ≤ this by
/// Cauchy-Schwarz, whatever the model.
pub fn variance_bound(mode: ChshMode, q: &Quadruple) -> Result<f64, ChshError> {
    match (mode, q) {
        (ChshMode::S0, Quadruple::Directions(_)) => Ok(2.0),
        (ChshMode::S1 | ChshMode::LinearMc, Quadruple::Directions(_)) => {
            // Linear correlations come from ±1 readouts, for which the
            // classical variance argument gives exactly 2.
            Ok(2.0)
        }
        (ChshMode::S3Equatorial | ChshMode::S3NonEquatorial, Quadruple::Directions(d)) => {
            let [aa, aa2, bb, bb2] = if mode == ChshMode::S3Equatorial {
                [HALF_PI; 4]
            } else {
                alphas_of(d.alphas)
            };
            let mut mean = 0.0;
            for mu in HiddenState::BOTH {
                let h = mu.value();
                let value = |dir: Vector3, alpha: f64| {
                    Quaternion::scalar(alpha.cos())
                        + Quaternion::from_bivector(dir).scaled(h * alpha.sin())
                };
                let va = value(d.a, aa);
                let va2 = value(d.a_alt, aa2);
                let vb = value(d.b, bb);
                let vb2 = value(d.b_alt, bb2);
                let f = mu.compose_quat(va, vb + vb2) + mu.compose_quat(va2, vb - vb2);
                mean += f.norm_squared();
            }
            Ok((mean / 2.0).sqrt())
        }
        (ChshMode::S7Equatorial | ChshMode::S7NonEquatorial, Quadruple::Seven(s)) => {
            let [aa, aa2, bb, bb2] = if mode == ChshMode::S7Equatorial {
                [HALF_PI; 4]
            } else {
                alphas_of(s.alphas)
            };
            let mut mean = 0.0;
            for mu in HiddenState::BOTH {
                let h = mu.value();
                let value = |dir: Vector7, alpha: f64| {
                    Octonion::scalar(alpha.cos())
                        + Octonion::from_imaginary(dir).scaled(h * alpha.sin())
                };
                let va = value(s.na, aa);
                let va2 = value(s.na_alt, aa2);
                let vb = value(s.nb, bb);
                let vb2 = value(s.nb_alt, bb2);
                let f = mu.compose_oct(va, vb + vb2) + mu.compose_oct(va2, vb - vb2);
                mean += f.norm_squared();
            }
            Ok((mean / 2.0).sqrt())
        }
        _ => Err(ChshError::ModeMismatch { mode }),
    }
}

// ── The string ───────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize)]
pub struct ChshReport {
    pub mode: ChshMode,
    pub correlations: [f64; 4],
    pub string_value: f64,
    /// The mode's formula bound at this quadruple.
    pub bound: f64,
    /// The Cauchy-Schwarz bound at this quadruple.
    pub variance_bound: f64,
    /// |string| > bound + 1e−9.
    pub violated_bound: bool,
}

fn check_quadruple(q: &Quadruple) -> Result<(), ChshError> {
    let bad = |n: f64| ChshError::Model(ModelError::NonUnitDirection { norm: n });
    match q {
        Quadruple::Directions(d) => {
            for v in [d.a, d.a_alt, d.b, d.b_alt] {
                let n = crate::geometry::norm3(v);
                if (n - 1.0).abs() > 1e-12 {
                    return Err(bad(n));
                }
            }
        }
        Quadruple::Seven(s) => {
            for v in [s.na, s.na_alt, s.nb, s.nb_alt] {
                let n = crate::geometry::norm7(v);
                if (n - 1.0).abs() > 1e-12 {
                    return Err(bad(n));
                }
            }
        }
    }
    Ok(())
}

/// Assembles ℰ(a,b) + ℰ(a,b′) + ℰ(a′,b) − ℰ(a′,b′) and both bounds.
pub fn chsh_string(mode: ChshMode, q: &Quadruple) -> Result<ChshReport, ChshError> {
    check_quadruple(q)?;
    let correlations = correlations(mode, q)?;
    let string_value = correlations[0] + correlations[1] + correlations[2] - correlations[3];
    let bound = formula_bound(mode, q)?;
    let vb = variance_bound(mode, q)?;
    Ok(ChshReport {
        mode,
        correlations,
        string_value,
        bound,
        variance_bound: vb,
        violated_bound: string_value.abs() > bound + BOUND_SLACK,
    })
}

/// The sign-model string evaluated by Monte Carlo at `samples` per pair.
pub fn linear_mc_string(q: &DirectionQuadruple, seed: u64, samples: u64) -> Result<f64, ChshError> {
    let pairs = [
        (q.a, q.b),
        (q.a, q.b_alt),
        (q.a_alt, q.b),
        (q.a_alt, q.b_alt),
    ];
    let mut value = 0.0;
    for (k, (x, y)) in pairs.iter().enumerate() {
        let ens = EnsembleSpec::uniform_sphere(seed.wrapping_add(k as u64), samples);
        let est = linear_model_correlation(*x, *y, &ens)?;
        value += if k == 3 {
            -est.scalar_part
        } else {
            est.scalar_part
        };
    }
    Ok(value)
}

// ── Scanning ─────────────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanConfig {
    pub mode: ChshMode,
    pub seed: u64,
    pub trials: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub mode: ChshMode,
    pub trials: u64,
    /// Trials with |string| > formula bound + slack.
    pub formula_violations: u64,
    /// Trials with |string| > variance bound + slack. Zero always.
    pub variance_violations: u64,
    /// Trials with |string| > mode ceiling + slack. Zero always.
    pub ceiling_violations: u64,
    pub max_abs_string: f64,
    /// max(|string| − formula bound) over the scan.
    pub worst_formula_margin: f64,
    /// max(|string| − variance bound) over the scan; stays negative.
    pub worst_variance_margin: f64,
}

/// Draws a random quadruple for the mode.
pub fn random_quadruple(mode: ChshMode, stream: &mut Stream) -> Quadruple {
    let pi = std::f64::consts::PI;
    match mode {
        ChshMode::S0 | ChshMode::S1 | ChshMode::LinearMc => {
            // Equator-circle settings parameterized by phase.
            Quadruple::Directions(DirectionQuadruple::coplanar([
                stream.range(0.0, std::f64::consts::TAU),
                stream.range(0.0, std::f64::consts::TAU),
                stream.range(0.0, std::f64::consts::TAU),
                stream.range(0.0, std::f64::consts::TAU),
            ]))
        }
        ChshMode::S3Equatorial | ChshMode::S3NonEquatorial => {
            let mut d = DirectionQuadruple::equatorial(
                stream.unit_vector3(),
                stream.unit_vector3(),
                stream.unit_vector3(),
                stream.unit_vector3(),
            );
            if mode == ChshMode::S3NonEquatorial {
                d.alphas = Some([
                    stream.range(0.0, pi),
                    stream.range(0.0, pi),
                    stream.range(0.0, pi),
                    stream.range(0.0, pi),
                ]);
            }
            Quadruple::Directions(d)
        }
        ChshMode::S7Equatorial | ChshMode::S7NonEquatorial => {
            let mut s = SevenQuadruple::equatorial(
                stream.unit_vector7(),
                stream.unit_vector7(),
                stream.unit_vector7(),
                stream.unit_vector7(),
            );
            s.xi1 = Octonion(stream.unit_vector8());
            s.xi2 = Octonion(stream.unit_vector8());
            if mode == ChshMode::S7NonEquatorial {
                s.alphas = Some([
                    stream.range(0.0, pi),
                    stream.range(0.0, pi),
                    stream.range(0.0, pi),
                    stream.range(0.0, pi),
                ]);
            }
            Quadruple::Seven(s)
        }
    }
}

/// Samples random quadruples and checks every trial against the formula
/// bound, the variance bound, and the mode ceiling.
pub fn scan_inequality(cfg: &ScanConfig) -> Result<ScanReport, ChshError> {
    if cfg.trials < 1 {
        return Err(ChshError::TooFewTrials {
            got: cfg.trials,
            minimum: 1,
        });
    }
    let ceiling = cfg.mode.ceiling();
    let mut report = ScanReport {
        mode: cfg.mode,
        trials: cfg.trials,
        formula_violations: 0,
        variance_violations: 0,
        ceiling_violations: 0,
        max_abs_string: 0.0,
        worst_formula_margin: f64::NEG_INFINITY,
        worst_variance_margin: f64::NEG_INFINITY,
    };
    for trial in 0..cfg.trials {
        let mut stream = Stream::new(cfg.seed, trial);
        let q = random_quadruple(cfg.mode, &mut stream);
        let r = chsh_string(cfg.mode, &q)?;
        let s = r.string_value.abs();
        report.max_abs_string = report.max_abs_string.max(s);
        report.worst_formula_margin = report.worst_formula_margin.max(s - r.bound);
        report.worst_variance_margin = report.worst_variance_margin.max(s - r.variance_bound);
        if s > r.bound + BOUND_SLACK {
            report.formula_violations += 1;
        }
        if s > r.variance_bound + BOUND_SLACK {
            report.variance_violations += 1;
        }
        if s > ceiling + BOUND_SLACK {
            report.ceiling_violations += 1;
        }
    }
    Ok(report)
}

// ── Maximization ─────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize)]
pub struct MaximizeReport {
    pub mode: ChshMode,
    pub best_abs_string: f64,
    pub best: Quadruple,
    pub bound_at_best: f64,
    pub variance_bound_at_best: f64,
    /// Torsion pairing at the optimum (−1 at the coplanar maximum of the
    /// 3-sphere model).
    pub pairing_at_best: Option<f64>,
    /// For the S⁷ modes: the largest pairing bound over a seeded sample
    /// of ξ pairs at the optimal directions.
    pub bound_over_xi_samples: Option<f64>,
    /// For the Monte Carlo linear model: the string re-evaluated by
    /// sampling at the optimum.
    pub mc_string_at_best: Option<f64>,
    pub evaluations: u64,
}

/// Golden-section maximization of a 1-d slice.
fn golden_max(mut lo: f64, mut hi: f64, mut eval: impl FnMut(f64) -> f64) -> (f64, f64) {
    let inv_phi = 0.618_033_988_749_894_9;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        }
        if (hi - lo).abs() < 1e-12 {
            break;
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coordinate-wise golden-section refinement.
fn refine(
    coords: &mut [f64],
    objective: &mut dyn FnMut(&[f64]) -> f64,
    evaluations: &mut u64,
) -> f64 {
    let mut best = objective(coords);
    *evaluations += 1;
    let mut window = std::f64::consts::FRAC_PI_2;
    for _ in 0..40 {
        let mut improved = false;
        for i in 0..coords.len() {
            let center = coords[i];
            let mut local = coords.to_vec();
            let (x, f) = golden_max(center - window, center + window, |v| {
                local[i] = v;
                *evaluations += 1;
                objective(&local)
            });
            if f > best + 1e-15 {
                best = f;
                coords[i] = x;
                improved = true;
            }
        }
        window *= 0.5;
        if !improved && window < 1e-10 {
            break;
        }
    }
    best
}

/// Deterministic multi-start maximization of |string| for the mode:
/// a coarse coplanar grid, a 1° local re-grid around its best cell,
/// golden-section refinement, plus seeded random starts.
pub fn maximize_chsh(cfg: &ScanConfig) -> Result<MaximizeReport, ChshError> {
    if cfg.trials < 100 {
        return Err(ChshError::TooFewTrials {
            got: cfg.trials,
            minimum: 100,
        });
    }
    let mode = cfg.mode;
    let mut evaluations: u64 = 0;

    // The S⁰ string is constant: every quadruple realizes |S| = 2.
    if mode == ChshMode::S0 {
        let q = Quadruple::Directions(DirectionQuadruple::coplanar([0.0; 4]));
        let r = chsh_string(mode, &q)?;
        return Ok(MaximizeReport {
            mode,
            best_abs_string: r.string_value.abs(),
            best: q,
            bound_at_best: r.bound,
            variance_bound_at_best: r.variance_bound,
            pairing_at_best: None,
            bound_over_xi_samples: None,
            mc_string_at_best: None,
            evaluations: 1,
        });
    }

    // Coordinates: in-plane angles of a′, b, b′ with a pinned at phase 0
    // (every mode's string is invariant under a common rotation), plus
    // the four polar offsets for the non-equatorial modes.
    let non_equatorial = matches!(mode, ChshMode::S3NonEquatorial | ChshMode::S7NonEquatorial);
    let base_len = 3;
    let coords_len = if non_equatorial {
        base_len + 4
    } else {
        base_len
    };

    let build = |coords: &[f64]| -> Quadruple {
        let angles = [0.0, coords[0], coords[1], coords[2]];
        let alphas = if non_equatorial {
            Some([coords[3], coords[4], coords[5], coords[6]])
        } else {
            None
        };
        if mode.is_seven() {
            // A fixed 2-plane of R⁷ spanned by e₁, e₂.
            let embed = |phi: f64| -> Vector7 {
                let mut v = [0.0; 7];
                v[0] = phi.cos();
                v[1] = phi.sin();
                v
            };
            let mut s = SevenQuadruple::equatorial(
                embed(angles[0]),
                embed(angles[1]),
                embed(angles[2]),
                embed(angles[3]),
            );
            s.alphas = alphas;
            Quadruple::Seven(s)
        } else {
            let mut d = DirectionQuadruple::coplanar(angles);
            d.alphas = alphas;
            Quadruple::Directions(d)
        }
    };

    // The objective needs only the string, not the bounds: the ξ-dependent
    // bound machinery is far more expensive than the correlations and is
    // evaluated once at the winner.
    let mut objective = |coords: &[f64]| -> f64 {
        let q = build(coords);
        match correlations(mode, &q) {
            Ok(c) => (c[0] + c[1] + c[2] - c[3]).abs(),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    // Stage 1: coarse 6° grid over the three free angles (offsets pinned
    // at the equator for the non-equatorial modes).
    let mut best_coords = vec![0.0; coords_len];
    if non_equatorial {
        best_coords[3..].fill(HALF_PI);
    }
    let mut best = f64::NEG_INFINITY;
    let step6 = std::f64::consts::TAU / 60.0;
    for i in 0..60 {
        for j in 0..60 {
            for k in 0..60 {
                let mut coords = best_coords.clone();
                coords[0] = i as f64 * step6;
                coords[1] = j as f64 * step6;
                coords[2] = k as f64 * step6;
                let f = objective(&coords);
                evaluations += 1;
                if f > best {
                    best = f;
                    best_coords = coords;
                }
            }
        }
    }

    // Stage 2: 1° re-grid in the ±6° window around the best cell.
    let step1 = std::f64::consts::TAU / 360.0;
    let center = best_coords.clone();
    for i in -6i64..=6 {
        for j in -6i64..=6 {
            for k in -6i64..=6 {
                let mut coords = center.clone();
                coords[0] += i as f64 * step1;
                coords[1] += j as f64 * step1;
                coords[2] += k as f64 * step1;
                let f = objective(&coords);
                evaluations += 1;
                if f > best {
                    best = f;
                    best_coords = coords;
                }
            }
        }
    }

    // Stage 3: golden-section refinement of the grid winner.
    best = best.max(refine(&mut best_coords, &mut objective, &mut evaluations));

    // Stage 4: seeded random starts, each refined.
    let starts = 64.min(cfg.trials);
    for s in 0..starts {
        let mut stream = Stream::new(cfg.seed ^ 0xA5A5_5A5A, s);
        let mut coords: Vec<f64> = (0..coords_len)
            .map(|i| {
                if i < base_len {
                    stream.range(0.0, std::f64::consts::TAU)
                } else {
                    stream.range(0.0, std::f64::consts::PI)
                }
            })
            .collect();
        let f = refine(&mut coords, &mut objective, &mut evaluations);
        if f > best {
            best = f;
            best_coords = coords;
        }
    }

    let best_q = build(&best_coords);
    let report = chsh_string(mode, &best_q)?;

    let pairing_at_best = match &best_q {
        Quadruple::Directions(d)
            if matches!(mode, ChshMode::S3Equatorial | ChshMode::S3NonEquatorial) =>
        {
            Some(torsion_pairing3(d))
        }
        Quadruple::Seven(s) => Some(torsion_pairing7(s)?),
        _ => None,
    };

    // For the 7-sphere: sample ξ pairs at the optimal directions and
    // record the largest pairing bound seen.
    let bound_over_xi_samples = if let Quadruple::Seven(s) = &best_q {
        let mut worst = report.bound;
        for i in 0..32u64 {
            let mut stream = Stream::new(cfg.seed ^ 0x0FF0_F00F, i);
            let mut probe = *s;
            probe.xi1 = Octonion(stream.unit_vector8());
            probe.xi2 = Octonion(stream.unit_vector8());
            worst = worst.max(bound_s7(&probe)?);
        }
        Some(worst)
    } else {
        None
    };

    // Monte Carlo confirmation for the sign model.
    let mc_string_at_best = if mode == ChshMode::LinearMc {
        if let Quadruple::Directions(d) = &best_q {
            Some(linear_mc_string(d, cfg.seed, 1_000_000)?)
        } else {
            None
        }
    } else {
        None
    };

    Ok(MaximizeReport {
        mode,
        best_abs_string: best,
        best: best_q,
        bound_at_best: report.bound,
        variance_bound_at_best: report.variance_bound,
        pairing_at_best,
        bound_over_xi_samples,
        mc_string_at_best,
        evaluations,
    })
}
