//! Qubit-sphere points, the general single-qubit rotation, and the qutrit
//! reference frame: nine polarization directions grouped into six frames.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, equal_up_to_global_phase, inner, Amplitude, OperatorMatrix, StateVector, EXACT_TOL, ZERO,
};

fn check_weights(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && beta.is_finite()) || alpha < 0.0 || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha and beta must be finite and non-negative (got {alpha}, {beta})"
        )));
    }
    let norm_sqr = alpha * alpha + beta * beta;
    if (norm_sqr - 1.0).abs() > EXACT_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// Point `(α, β, θ)` on the qubit sphere, standing for `α|0⟩ + β e^{iθ}|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitPoint {
    alpha: f64,
    beta: f64,
    theta: f64,
}

impl QubitPoint {
    /// `theta` is reduced into `[0, 2π)`.
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        check_weights(alpha, beta)?;
        if !theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        Ok(Self {
            alpha,
            beta,
            theta: theta.rem_euclid(TAU),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

pub fn qubit_point_to_state(p: &QubitPoint) -> Result<StateVector> {
    StateVector::new(vec![
        c(p.alpha, 0.0),
        Amplitude::from_polar(p.beta, p.theta),
    ])
}

/// Parameters of the most general single-qubit rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl RotationParams {
    pub fn new(alpha: f64, beta: f64, theta1: f64, theta2: f64) -> Result<Self> {
        check_weights(alpha, beta)?;
        Ok(Self {
            alpha,
            beta,
            theta1,
            theta2,
        })
    }
}

/// `[[α e^{iθ₁}, β e^{−iθ₂}], [β e^{iθ₂}, −α e^{−iθ₁}]]`.
///
/// Sends `|0⟩` to `α e^{iθ₁}|0⟩ + β e^{iθ₂}|1⟩`.
pub fn general_rotation(p: &RotationParams) -> Result<OperatorMatrix> {
    check_weights(p.alpha, p.beta)?;
    OperatorMatrix::from_rows(&[
        [
            Amplitude::from_polar(p.alpha, p.theta1),
            Amplitude::from_polar(p.beta, -p.theta2),
        ],
        [
            Amplitude::from_polar(p.beta, p.theta2),
            -Amplitude::from_polar(p.alpha, -p.theta1),
        ],
    ])
}

fn qutrit(a: f64, b: f64, d: f64) -> StateVector {
    StateVector::from_raw(vec![c(a, 0.0), c(b, 0.0), c(d, 0.0)])
}

/// The nine qutrit directions, in listed order:
/// `|0⟩, |1⟩, |2⟩, |0⟩±|1⟩, |0⟩±|2⟩, |1⟩±|2⟩`, each normalized.
pub fn nine_directions() -> Vec<StateVector> {
    let h = FRAC_1_SQRT_2;
    vec![
        qutrit(1.0, 0.0, 0.0),
        qutrit(0.0, 1.0, 0.0),
        qutrit(0.0, 0.0, 1.0),
        qutrit(h, h, 0.0),
        qutrit(h, -h, 0.0),
        qutrit(h, 0.0, h),
        qutrit(h, 0.0, -h),
        qutrit(0.0, h, h),
        qutrit(0.0, h, -h),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Plane {
    XY,
    XZ,
    YZ,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::XY, Plane::XZ, Plane::YZ];

    /// Computational levels spanning the plane.
    pub fn levels(self) -> (usize, usize) {
        match self {
            Plane::XY => (0, 1),
            Plane::XZ => (0, 2),
            Plane::YZ => (1, 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Computational,
    Superposition,
}

/// Identifies one of the six frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FrameLabel {
    pub plane: Plane,
    pub kind: FrameKind,
}

impl fmt::Display for FrameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            FrameKind::Computational => "computational",
            FrameKind::Superposition => "superposition",
        };
        write!(f, "{:?}-{kind}", self.plane)
    }
}

/// Two orthonormal qutrit directions lying in one coordinate plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frame {
    pub label: FrameLabel,
    vectors: [StateVector; 2],
}

impl Frame {
    pub fn new(label: FrameLabel, first: StateVector, second: StateVector) -> Result<Self> {
        for v in [&first, &second] {
            if v.dim() != 3 {
                return Err(Error::DimensionMismatch {
                    left: 3,
                    right: v.dim(),
                });
            }
        }
        if inner(&first, &second)?.norm() > EXACT_TOL {
            return Err(Error::InvalidParameter(format!(
                "frame {label} vectors are not orthogonal"
            )));
        }
        Ok(Self {
            label,
            vectors: [first, second],
        })
    }

    pub fn vectors(&self) -> &[StateVector; 2] {
        &self.vectors
    }

    /// Unit vector spanning the orthogonal complement of the frame.
    ///
    /// For orthonormal `u`, `v` in C³ the conjugated cross product is
    /// orthogonal to both and has unit norm.
    pub fn complement(&self) -> StateVector {
        let u = self.vectors[0].amplitudes();
        let v = self.vectors[1].amplitudes();
        let cross = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        StateVector::normalized(cross.iter().map(|z| z.conj()).collect())
            .expect("cross product of orthonormal vectors is a unit vector")
    }

    /// The full three-outcome measurement basis: both frame vectors followed
    /// by the out-of-frame direction.
    pub fn measurement_basis(&self) -> [StateVector; 3] {
        [
            self.vectors[0].clone(),
            self.vectors[1].clone(),
            self.complement(),
        ]
    }

    /// Position (0 or 1) of `s` in this frame, up to global phase.
    pub fn position_of(&self, s: &StateVector) -> Option<usize> {
        self.vectors.iter().position(|v| {
            equal_up_to_global_phase(v, s, EXACT_TOL)
                .map(|m| m.matched)
                .unwrap_or(false)
        })
    }
}

/// The six frames, ordered by plane (XY, XZ, YZ) and, within a plane,
/// computational before superposition.
pub fn six_frames() -> Vec<Frame> {
    let h = FRAC_1_SQRT_2;
    let mut frames = Vec::with_capacity(6);
    for plane in Plane::ALL {
        let (lo, hi) = plane.levels();
        let e = |a: f64, b: f64| {
            let mut amps = vec![ZERO; 3];
            amps[lo] = c(a, 0.0);
            amps[hi] = c(b, 0.0);
            StateVector::from_raw(amps)
        };
        let comp = (e(1.0, 0.0), e(0.0, 1.0));
        let sup = (e(h, h), e(h, -h));
        for (kind, (first, second)) in [
            (FrameKind::Computational, comp),
            (FrameKind::Superposition, sup),
        ] {
            let label = FrameLabel { plane, kind };
            frames.push(Frame::new(label, first, second).expect("static frame is orthonormal"));
        }
    }
    frames
}

/// Index of `s` within [`nine_directions`], up to global phase.
pub fn direction_index(s: &StateVector) -> Result<usize> {
    if s.dim() != 3 {
        return Err(Error::NotADirection);
    }
    nine_directions()
        .iter()
        .position(|d| {
            equal_up_to_global_phase(d, s, EXACT_TOL)
                .map(|m| m.matched)
                .unwrap_or(false)
        })
        .ok_or(Error::NotADirection)
}

/// Labels of every frame containing `s` up to global phase.
pub fn frame_membership(s: &StateVector) -> Result<Vec<FrameLabel>> {
    direction_index(s)?;
    Ok(six_frames()
        .into_iter()
        .filter(|f| f.position_of(s).is_some())
        .map(|f| f.label)
        .collect())
}
