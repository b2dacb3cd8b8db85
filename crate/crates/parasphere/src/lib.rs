//! Geometric algebra on the parallelizable spheres S⁰, S¹, S³, and S⁷.
//!
//! The crate builds up, layer by layer, the machinery needed to study
//! hidden-state correlation models whose values live on the unit spheres
//! that carry a global tangent frame:
//!
//! * [`clifford`] — dense real Clifford algebras Cl(n,0), n ≤ 7;
//! * [`division`] — quaternions, octonions, Fano-plane structure tensors
//!   and the point-dependent structure functions of the 7-sphere;
//! * [`hidden`] — the two-valued hidden state μ and its handed products;
//! * [`parallel`] — tangent frames, frame transport, torsion commutators
//!   and a finite-difference check that the frame connection is flat;
//! * [`qm`] — an independent quantum-mechanical reference: Pauli
//!   operators, tensor products, singlet/Hardy/GHZ states;
//! * [`models`] — measurement functions and ensemble-averaged
//!   correlations for the S⁰/S¹/S³/S⁷ models;
//! * [`chsh`] — CHSH strings, bound formulas, variance bounds, scans and
//!   a deterministic maximizer.
//!
//! Everything is pure and deterministic: random quantities flow from
//! counter-based streams in [`rng`], so any result is reproducible from
//! its seed alone and independent of threading or chunk order.

pub mod chsh;
pub mod clifford;
pub mod division;
pub mod geometry;
pub mod hidden;
pub mod models;
pub mod parallel;
pub mod qm;
pub mod rng;
