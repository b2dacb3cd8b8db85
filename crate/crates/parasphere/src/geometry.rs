//! Plain Euclidean vector helpers for the ambient spaces R³ and R⁷.
//!
//! Directions are passed around as fixed-size arrays; anything with
//! algebraic structure (bivectors, quaternions, octonions) lives in the
//! dedicated modules.

/// A direction or point in R³.
pub type Vector3 = [f64; 3];

/// A direction or point in R⁷.
pub type Vector7 = [f64; 7];

pub fn dot3(a: Vector3, b: Vector3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: Vector3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn scale3(a: Vector3, s: f64) -> Vector3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn sub3(a: Vector3, b: Vector3) -> Vector3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Normalizes `a`, returning `None` for vectors too short to carry a direction.
pub fn normalize3(a: Vector3) -> Option<Vector3> {
    let n = norm3(a);
    if n < 1e-14 {
        None
    } else {
        Some(scale3(a, 1.0 / n))
    }
}

/// Angle between two unit vectors, clamped against rounding at ±1.
pub fn angle3(a: Vector3, b: Vector3) -> f64 {
    dot3(a, b).clamp(-1.0, 1.0).acos()
}

/// Unit vector in the x-z plane at polar angle `alpha` from +z.
pub fn polar_xz(alpha: f64) -> Vector3 {
    [alpha.sin(), 0.0, alpha.cos()]
}

/// Unit vector at spherical coordinates (polar `theta` from +z, azimuth `phi`).
pub fn spherical(theta: f64, phi: f64) -> Vector3 {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Unit vector in the x-y plane at angle `phi` from +x.
pub fn planar(phi: f64) -> Vector3 {
    [phi.cos(), phi.sin(), 0.0]
}

pub fn dot7(a: Vector7, b: Vector7) -> f64 {
    let mut s = 0.0;
    for i in 0..7 {
        s += a[i] * b[i];
    }
    s
}

pub fn norm7(a: Vector7) -> f64 {
    dot7(a, a).sqrt()
}

pub fn scale7(a: Vector7, s: f64) -> Vector7 {
    let mut out = [0.0; 7];
    for i in 0..7 {
        out[i] = a[i] * s;
    }
    out
}

pub fn normalize7(a: Vector7) -> Option<Vector7> {
    let n = norm7(a);
    if n < 1e-14 {
        None
    } else {
        Some(scale7(a, 1.0 / n))
    }
}

pub fn angle7(a: Vector7, b: Vector7) -> f64 {
    dot7(a, b).clamp(-1.0, 1.0).acos()
}

/// Standard basis vector e_j (1-based) of R⁷.
pub fn basis7(j: usize) -> Vector7 {
    let mut v = [0.0; 7];
    v[j - 1] = 1.0;
    v
}
