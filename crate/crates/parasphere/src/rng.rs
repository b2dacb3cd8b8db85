//! Counter-based deterministic random streams.
//!
//! Every consumer derives an independent `Stream` from a `(seed, index)`
//! pair, so results never depend on thread count, chunking, or evaluation
//! order. The generator is splitmix64, which is plenty for Monte Carlo
//! direction sampling.

use crate::geometry::{normalize3, normalize7, Vector3, Vector7};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream keyed by `(seed, index)`.
#[derive(Clone, Debug)]
pub struct Stream {
    state: u64,
}

impl Stream {
    /// Derives the stream for sample `index` of the run keyed by `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        // Decorrelate the two keys before mixing them into one state.
        let mut s = seed ^ 0x5851_F42D_4C95_7F2D;
        let a = splitmix64(&mut s);
        let mut t = index.wrapping_add(0x1405_7B7E_F767_814F);
        let b = splitmix64(&mut t);
        Stream {
            state: a ^ b.rotate_left(17),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform direction on S² (area measure).
    pub fn unit_vector3(&mut self) -> Vector3 {
        loop {
            let z = self.range(-1.0, 1.0);
            let phi = self.range(0.0, std::f64::consts::TAU);
            let r = (1.0 - z * z).max(0.0).sqrt();
            if let Some(v) = normalize3([r * phi.cos(), r * phi.sin(), z]) {
                return v;
            }
        }
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        loop {
            let u = self.next_f64();
            if u > 1e-300 {
                let v = self.next_f64();
                return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
            }
        }
    }

    /// Uniform direction on S⁶ ⊂ R⁷ via normalized Gaussians.
    pub fn unit_vector7(&mut self) -> Vector7 {
        loop {
            let mut v = [0.0; 7];
            for c in v.iter_mut() {
                *c = self.gaussian();
            }
            if let Some(u) = normalize7(v) {
                return u;
            }
        }
    }

    /// Uniform point on S⁷ ⊂ R⁸, returned as 8 components.
    pub fn unit_vector8(&mut self) -> [f64; 8] {
        loop {
            let mut v = [0.0; 8];
            for c in v.iter_mut() {
                *c = self.gaussian();
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-14 {
                for c in v.iter_mut() {
                    *c /= n;
                }
                return v;
            }
        }
    }
}
