//! Gate catalog and the eight-element operator group.
//!
//! The group elements are 2×2 matrices with entries in {0, ±1, ±i}. Their
//! products close only up to a global phase, so the multiplication table is
//! checked projectively and the phase of every product is kept as data.
//!
//! Multiplication convention: the row label is the left matrix factor, so the
//! table entry at `(row, col)` is `row · col`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, equal_up_to_global_phase, Amplitude, OperatorMatrix, EXACT_TOL, ONE, ZERO,
};

/// The Bell-state preparation gate
/// `(1/√2)[[1,0,0,1],[0,1,1,0],[0,1,−1,0],[1,0,0,−1]]`.
pub fn entangler() -> OperatorMatrix {
    imperfect_entangler(0.0, 0.0)
}

/// Entangler with phase errors `e^{iθ₁}` on the `|00⟩`/`|11⟩` block and
/// `e^{iθ₂}` on the `|01⟩`/`|10⟩` block.
///
/// Only unitary when `sin θ₁ = sin θ₂ = 0`; columns 1 and 4 have inner
/// product `−i·sin θ₁`.
pub fn imperfect_entangler(theta1: f64, theta2: f64) -> OperatorMatrix {
    let h = FRAC_1_SQRT_2;
    let p1 = Amplitude::from_polar(h, theta1);
    let p2 = Amplitude::from_polar(h, theta2);
    let r = c(h, 0.0);
    OperatorMatrix::from_rows(&[
        [p1, ZERO, ZERO, r],
        [ZERO, p2, r, ZERO],
        [ZERO, r, -p2, ZERO],
        [r, ZERO, ZERO, -p1],
    ])
    .expect("4x4 literal")
}

pub fn hadamard2() -> OperatorMatrix {
    let h = c(FRAC_1_SQRT_2, 0.0);
    OperatorMatrix::from_rows(&[[h, h], [h, -h]]).expect("2x2 literal")
}

/// `(1/2)` times the ±1 Sylvester matrix; equal to `H₂ ⊗ H₂`.
pub fn hadamard4() -> OperatorMatrix {
    let p = c(0.5, 0.0);
    let m = -p;
    OperatorMatrix::from_rows(&[[p, p, p, p], [p, m, p, m], [p, p, m, m], [p, m, m, p]])
        .expect("4x4 literal")
}

/// `(1/√2)[[1, −i], [i, −1]]`: separates `|0⟩+i|1⟩` from `|0⟩−i|1⟩`.
pub fn i_distinguisher() -> OperatorMatrix {
    let h = FRAC_1_SQRT_2;
    OperatorMatrix::from_rows(&[[c(h, 0.0), c(0.0, -h)], [c(0.0, h), c(-h, 0.0)]])
        .expect("2x2 literal")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupLabel {
    I,
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl GroupLabel {
    pub const ALL: [GroupLabel; 8] = [
        GroupLabel::I,
        GroupLabel::A,
        GroupLabel::B,
        GroupLabel::C,
        GroupLabel::D,
        GroupLabel::E,
        GroupLabel::F,
        GroupLabel::G,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        b"IABCDEFG"[self.index()] as char
    }

    pub fn from_char(ch: char) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_char() == ch.to_ascii_uppercase())
            .ok_or_else(|| Error::UnknownLabel(ch.to_string()))
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for GroupLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(ch), None) => Self::from_char(ch),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupElement {
    pub label: GroupLabel,
    pub matrix: OperatorMatrix,
}

pub fn group_element(label: GroupLabel) -> GroupElement {
    use GroupLabel::*;
    let (o, z) = (ONE, ZERO);
    let rows = match label {
        I => [[o, z], [z, o]],
        A => [[z, o], [o, z]],
        B => [[o, z], [z, -o]],
        C => [[z, o], [-o, z]],
        D => [[o, z], [z, crate::linalg::I]],
        E => [[z, o], [crate::linalg::I, z]],
        F => [[o, z], [z, -crate::linalg::I]],
        G => [[z, o], [-crate::linalg::I, z]],
    };
    GroupElement {
        label,
        matrix: OperatorMatrix::from_rows(&rows).expect("2x2 literal"),
    }
}

/// Multiplication table as published: `TABLE[row][col]` is the label of
/// `row · col`.
pub const TABLE: [[GroupLabel; 8]; 8] = {
    use GroupLabel::*;
    [
        [I, A, B, C, D, E, F, G],
        [A, I, C, B, G, F, E, D],
        [B, C, I, A, F, G, D, E],
        [C, B, A, I, E, D, G, F],
        [D, E, F, G, B, C, I, A],
        [E, D, G, F, A, I, C, B],
        [F, G, D, E, I, A, B, C],
        [G, F, E, D, C, B, A, I],
    ]
};

/// One cell of the multiplication table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableVerdict {
    pub row: GroupLabel,
    pub col: GroupLabel,
    pub expected: GroupLabel,
    pub computed: GroupLabel,
    /// `row · col = phase · computed`.
    pub phase: Amplitude,
    /// The product equals the element exactly (phase 1).
    pub exact: bool,
}

impl TableVerdict {
    pub fn agrees(&self) -> bool {
        self.expected == self.computed
    }

    /// Phase rounded onto {1, −1, i, −i} for display.
    pub fn phase_name(&self) -> &'static str {
        phase_name(self.phase)
    }
}

pub fn phase_name(phase: Amplitude) -> &'static str {
    const NAMES: [(Amplitude, &str); 4] = [
        (ONE, "1"),
        (Amplitude::new(-1.0, 0.0), "-1"),
        (crate::linalg::I, "i"),
        (Amplitude::new(0.0, -1.0), "-i"),
    ];
    NAMES
        .iter()
        .find(|(p, _)| (phase - p).norm() < 1e-9)
        .map(|(_, n)| *n)
        .unwrap_or("other")
}

/// Identifies `product` with a group element up to global phase.
pub fn identify(product: &OperatorMatrix) -> Option<(GroupLabel, Amplitude)> {
    GroupLabel::ALL.into_iter().find_map(|l| {
        let m = equal_up_to_global_phase(product, &group_element(l).matrix, EXACT_TOL).ok()?;
        m.matched.then_some((l, m.phase))
    })
}

pub fn multiply_mod_phase(x: &GroupElement, y: &GroupElement) -> Result<TableVerdict> {
    let product = x.matrix.matmul(&y.matrix)?;
    let (computed, phase) = identify(&product).ok_or(Error::ClosureViolation {
        row: x.label.as_char(),
        col: y.label.as_char(),
    })?;
    Ok(TableVerdict {
        row: x.label,
        col: y.label,
        expected: TABLE[x.label.index()][y.label.index()],
        computed,
        phase,
        exact: (phase - ONE).norm() <= EXACT_TOL,
    })
}

/// All 64 verdicts in row-major order.
pub fn verify_table() -> Result<Vec<TableVerdict>> {
    let elements: Vec<GroupElement> = GroupLabel::ALL.into_iter().map(group_element).collect();
    let mut out = Vec::with_capacity(64);
    for x in &elements {
        for y in &elements {
            out.push(multiply_mod_phase(x, y)?);
        }
    }
    Ok(out)
}

/// True when `labels` contains `I` and is closed under multiplication up to
/// phase.
pub fn subgroup_check(labels: &[GroupLabel]) -> bool {
    if !labels.contains(&GroupLabel::I) {
        return false;
    }
    labels.iter().all(|&x| {
        labels.iter().all(|&y| {
            multiply_mod_phase(&group_element(x), &group_element(y))
                .map(|v| labels.contains(&v.computed))
                .unwrap_or(false)
        })
    })
}
