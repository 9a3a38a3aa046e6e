//! State-vector toolkit for small entanglement experiments.
//!
//! * [`linalg`]: states, operators, tensor products and phase-aware equality
//!   for dimensions 2, 3 and 4.
//! * [`frames`]: qubit-sphere points, the general rotation, and the nine
//!   qutrit directions grouped into six frames.
//! * [`gates`]: the entangler and its phase-error model, Hadamards, the
//!   ±i distinguisher, and the eight-element operator group.
//! * [`entanglement`]: entangled families, Bell sets, dense coding, density
//!   matrices and the mixedness experiment.
//! * [`qkd`]: seeded BB84-style sessions over three state sets.
//! * [`measure`]: Born-rule sampling and seeded random streams.

pub mod entanglement;
pub mod error;
pub mod frames;
pub mod gates;
pub mod linalg;
pub mod measure;
pub mod qkd;

pub use error::{Error, Result};
pub use linalg::{Amplitude, OperatorMatrix, PhaseMatch, StateVector, ACCUM_TOL, EXACT_TOL};
