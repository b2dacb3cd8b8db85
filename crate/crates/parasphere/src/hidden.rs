//! The hidden state μ and the handed composition of measurement values.
//!
//! The complete state is a handedness tag: μ = +I or −I on the 3-sphere
//! (μ = +J or −J on the 7-sphere). The tag does two things at once:
//!
//! * it orients the value itself, μ·n = ±(I·n);
//! * it selects which translation parallel-transports products of values.
//!   The right-handed state composes by left multiplication, the
//!   left-handed state by right multiplication. Concretely, composing A
//!   then B in the state μ = −I multiplies in reversed order, which is
//!   the same thing as flipping the orientation of the structure tensor.
//!
//! Under this rule the handed identity
//! (μ·a)(μ·b) = −a·b − μ·(a×b) holds verbatim for both states, and the
//! two states' product bivectors cancel when averaged.

use crate::clifford::Multivector;
use crate::division::{oct_mul, quat_mul, Octonion, Quaternion};

/// Handedness tag μ ∈ {+1, −1} selecting +I/−I (or +J/−J).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HiddenState {
    /// μ = +I (or +J): right-handed frame, left-translation transport.
    Plus,
    /// μ = −I (or −J): left-handed frame, right-translation transport.
    Minus,
}

impl HiddenState {
    pub const BOTH: [HiddenState; 2] = [HiddenState::Plus, HiddenState::Minus];

    pub fn value(self) -> f64 {
        match self {
            HiddenState::Plus => 1.0,
            HiddenState::Minus => -1.0,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            HiddenState::Plus => 1,
            HiddenState::Minus => -1,
        }
    }

    /// Handed product of quaternionic values: order reverses for μ = −I.
    pub fn compose_quat(self, a: Quaternion, b: Quaternion) -> Quaternion {
        match self {
            HiddenState::Plus => quat_mul(a, b),
            HiddenState::Minus => quat_mul(b, a),
        }
    }

    /// Handed product of octonionic values: order reverses for μ = −J.
    pub fn compose_oct(self, a: Octonion, b: Octonion) -> Octonion {
        match self {
            HiddenState::Plus => oct_mul(a, b),
            HiddenState::Minus => oct_mul(b, a),
        }
    }

    /// Handed product of Cl(n,0) elements.
    pub fn compose_multivector(self, a: &Multivector, b: &Multivector) -> Multivector {
        match self {
            HiddenState::Plus => a.geometric_product(b),
            HiddenState::Minus => b.geometric_product(a),
        }
    }

    /// Left-to-right handed composition of a chain of quaternionic values:
    /// (((v₁ ∘ v₂) ∘ v₃) ∘ …) under the handed product.
    pub fn compose_quat_chain(self, values: &[Quaternion]) -> Quaternion {
        values
            .iter()
            .copied()
            .fold(Quaternion::ONE, |acc, v| self.compose_quat(acc, v))
    }

    /// Left-to-right handed composition of a chain of octonionic values.
    /// Octonions are not associative, so the pairwise bracketing order is
    /// part of the definition.
    pub fn compose_oct_chain(self, values: &[Octonion]) -> Octonion {
        values
            .iter()
            .copied()
            .fold(Octonion::ONE, |acc, v| self.compose_oct(acc, v))
    }

    /// Handed commutator [a, b] = a∘b − b∘a under the handed product.
    pub fn commutator_quat(self, a: Quaternion, b: Quaternion) -> Quaternion {
        self.compose_quat(a, b) - self.compose_quat(b, a)
    }

    pub fn commutator_oct(self, a: Octonion, b: Octonion) -> Octonion {
        self.compose_oct(a, b) - self.compose_oct(b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::TOL_EXACT;
    use crate::division::cross3;
    use crate::rng::Stream;

    /// μ·a as a quaternion (pure bivector scaled by the handedness).
    fn mu_dot(mu: HiddenState, a: [f64; 3]) -> Quaternion {
        Quaternion::from_bivector(a).scaled(mu.value())
    }

    #[test]
    fn handed_identity_holds_for_both_states() {
        let mut stream = Stream::new(3, 0);
        for _ in 0..500 {
            let a = stream.unit_vector3();
            let b = stream.unit_vector3();
            for mu in HiddenState::BOTH {
                // (μ·a)(μ·b) = −a·b − μ·(a×b)
                let lhs = mu.compose_quat(mu_dot(mu, a), mu_dot(mu, b));
                let cross = cross3(a, b);
                let rhs = Quaternion::scalar(-crate::geometry::dot3(a, b)) - mu_dot(mu, cross);
                assert!(lhs.approx_eq(rhs, TOL_EXACT), "mu = {mu:?}");
            }
        }
    }

    #[test]
    fn handed_products_average_to_scalar() {
        let mut stream = Stream::new(4, 0);
        for _ in 0..200 {
            let a = stream.unit_vector3();
            let b = stream.unit_vector3();
            let mut mean = Quaternion::scalar(0.0);
            for mu in HiddenState::BOTH {
                mean = mean + mu.compose_quat(mu_dot(mu, a), mu_dot(mu, b));
            }
            mean = mean.scaled(0.5);
            // Bivector parts cancel exactly between the two states.
            assert_eq!(mean.bivector(), [0.0, 0.0, 0.0]);
            assert!((mean.w + crate::geometry::dot3(a, b)).abs() < TOL_EXACT);
        }
    }

    #[test]
    fn chain_composition_matches_pairwise() {
        let mut stream = Stream::new(5, 0);
        let values: Vec<Quaternion> = (0..4)
            .map(|_| Quaternion::from_bivector(stream.unit_vector3()))
            .collect();
        for mu in HiddenState::BOTH {
            let chained = mu.compose_quat_chain(&values);
            let mut acc = values[0];
            for &v in &values[1..] {
                acc = mu.compose_quat(acc, v);
            }
            assert!(chained.approx_eq(acc, TOL_EXACT));
        }
    }
}
