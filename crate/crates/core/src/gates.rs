//! Gate definitions and the standard gate set.
//!
//! Diagonal gates store only their diagonal so that wide controlled-phase
//! style gates (multi-controlled Z on n qubits) stay cheap to hold and apply.
//! Matrices are reference-counted: cloning a gate or a circuit never copies
//! matrix storage.

use std::sync::Arc;

use crate::linalg::{C64, ComplexMatrix};

#[derive(Debug, Clone)]
pub enum GateKind {
    Dense(Arc<ComplexMatrix>),
    Diagonal(Arc<Vec<C64>>),
}

/// A named unitary acting on `arity` qubits.
#[derive(Debug, Clone)]
pub struct GateDef {
    label: String,
    arity: usize,
    kind: GateKind,
    parameter: Option<f64>,
}

impl GateDef {
    pub fn dense(label: &str, arity: usize, matrix: ComplexMatrix) -> Self {
        assert_eq!(matrix.rows(), 1 << arity);
        assert_eq!(matrix.cols(), 1 << arity);
        Self {
            label: label.to_string(),
            arity,
            kind: GateKind::Dense(Arc::new(matrix)),
            parameter: None,
        }
    }

    pub fn diagonal(label: &str, arity: usize, diag: Vec<C64>) -> Self {
        assert_eq!(diag.len(), 1 << arity);
        Self {
            label: label.to_string(),
            arity,
            kind: GateKind::Diagonal(Arc::new(diag)),
            parameter: None,
        }
    }

    fn with_parameter(mut self, value: f64) -> Self {
        self.parameter = Some(value);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn parameter(&self) -> Option<f64> {
        self.parameter
    }

    /// Materialize the full 2^arity square matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        match &self.kind {
            GateKind::Dense(m) => (**m).clone(),
            GateKind::Diagonal(d) => {
                let dim = d.len();
                let mut m = ComplexMatrix::zeros(dim, dim);
                for (i, &z) in d.iter().enumerate() {
                    m[(i, i)] = z;
                }
                m
            }
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        match &self.kind {
            GateKind::Dense(m) => m.is_unitary(tol),
            GateKind::Diagonal(d) => d.iter().all(|z| (z.norm() - 1.0).abs() <= tol),
        }
    }

    /// Structural equality: same label, parameter, and matrix entries.
    pub fn same_gate(&self, other: &Self) -> bool {
        self.label == other.label
            && self.arity == other.arity
            && self.parameter == other.parameter
            && self.matrix().max_abs_diff(&other.matrix()) == 0.0
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity() -> GateDef {
    GateDef::diagonal("id", 1, vec![c(1.0, 0.0), c(1.0, 0.0)])
}

pub fn x() -> GateDef {
    GateDef::dense(
        "x",
        1,
        ComplexMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap(),
    )
}

pub fn y() -> GateDef {
    GateDef::dense(
        "y",
        1,
        ComplexMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap(),
    )
}

pub fn z() -> GateDef {
    GateDef::diagonal("z", 1, vec![c(1.0, 0.0), c(-1.0, 0.0)])
}

pub fn h() -> GateDef {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    GateDef::dense(
        "h",
        1,
        ComplexMatrix::from_rows(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap(),
    )
}

/// RZ(theta) = diag(e^{-i theta/2}, e^{+i theta/2})
pub fn rz(theta: f64) -> GateDef {
    GateDef::diagonal(
        "rz",
        1,
        vec![
            C64::from_polar(1.0, -theta / 2.0),
            C64::from_polar(1.0, theta / 2.0),
        ],
    )
    .with_parameter(theta)
}

/// RX(theta) = exp(-i theta X / 2)
pub fn rx(theta: f64) -> GateDef {
    let half = theta / 2.0;
    GateDef::dense(
        "rx",
        1,
        ComplexMatrix::from_rows(
            2,
            2,
            &[
                c(half.cos(), 0.0),
                c(0.0, -half.sin()),
                c(0.0, -half.sin()),
                c(half.cos(), 0.0),
            ],
        )
        .unwrap(),
    )
    .with_parameter(theta)
}

/// Phase gate diag(1, e^{i phi}).
pub fn phase(phi: f64) -> GateDef {
    GateDef::diagonal("p", 1, vec![c(1.0, 0.0), C64::from_polar(1.0, phi)]).with_parameter(phi)
}

/// CX with targets\[0\] = control, targets\[1\] = target.
pub fn cx() -> GateDef {
    // Local little-endian index = control + 2*target.
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0); // |c=0,t=0> fixed
    m[(2, 2)] = c(1.0, 0.0); // |c=0,t=1> fixed
    m[(3, 1)] = c(1.0, 0.0); // |c=1,t=0> -> |c=1,t=1>
    m[(1, 3)] = c(1.0, 0.0); // |c=1,t=1> -> |c=1,t=0>
    GateDef::dense("cx", 2, m)
}

pub fn cz() -> GateDef {
    GateDef::diagonal(
        "cz",
        2,
        vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
    )
}

/// Controlled phase diag(1, 1, 1, e^{i phi}).
pub fn cphase(phi: f64) -> GateDef {
    GateDef::diagonal(
        "cp",
        2,
        vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), C64::from_polar(1.0, phi)],
    )
    .with_parameter(phi)
}

pub fn swap() -> GateDef {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 2)] = c(1.0, 0.0);
    m[(2, 1)] = c(1.0, 0.0);
    m[(3, 3)] = c(1.0, 0.0);
    GateDef::dense("swap", 2, m)
}

/// Multi-controlled Z on `arity` qubits: flips the phase of |1...1>.
pub fn mcz(arity: usize) -> GateDef {
    assert!(arity >= 1);
    let dim = 1usize << arity;
    let mut diag = vec![c(1.0, 0.0); dim];
    diag[dim - 1] = c(-1.0, 0.0);
    GateDef::diagonal("mcz", arity, diag)
}

/// Single-qubit error gate for a fault kind.
pub fn pauli_error(kind: PauliKind) -> GateDef {
    match kind {
        PauliKind::X => x(),
        PauliKind::Y => y(),
        PauliKind::Z => z(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PauliKind {
    X,
    Y,
    Z,
}

impl PauliKind {
    pub const ALL: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

    pub fn name(&self) -> &'static str {
        match self {
            PauliKind::X => "x",
            PauliKind::Y => "y",
            PauliKind::Z => "z",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtin_gates_are_unitary() {
        let gates: Vec<GateDef> = vec![
            identity(),
            x(),
            y(),
            z(),
            h(),
            rz(0.7),
            rx(1.3),
            phase(2.1),
            cx(),
            cz(),
            cphase(0.4),
            swap(),
            mcz(3),
            mcz(5),
        ];
        for gate in gates {
            assert!(gate.is_unitary(1e-10), "{} is not unitary", gate.label());
            // The materialized matrix must agree.
            assert!(
                gate.matrix().is_unitary(1e-10),
                "{} matrix is not unitary",
                gate.label()
            );
        }
    }

    #[test]
    fn rz_matches_definition() {
        let theta = 0.918;
        let m = rz(theta).matrix();
        assert!((m[(0, 0)] - C64::from_polar(1.0, -theta / 2.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - C64::from_polar(1.0, theta / 2.0)).norm() < 1e-15);
        assert_eq!(m[(0, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn mcz_flips_only_all_ones() {
        let g = mcz(3);
        let m = g.matrix();
        for i in 0..8 {
            let want = if i == 7 { -1.0 } else { 1.0 };
            assert_eq!(m[(i, i)].re, want);
        }
    }

    #[test]
    fn same_gate_distinguishes_parameters() {
        assert!(rz(0.5).same_gate(&rz(0.5)));
        assert!(!rz(0.5).same_gate(&rz(0.6)));
        assert!(!x().same_gate(&y()));
    }
}
