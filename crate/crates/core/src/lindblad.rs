//! Density-matrix evolution under the Lindblad master equation.
//!
//! This is the exact reference the trajectory ensembles are checked against:
//! a fixed-step RK4 integrator with re-Hermitization and trace renormalization
//! after every step.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, C64, ComplexMatrix};
use crate::state::StateVector;

/// Hermitian trace-1 operator on a 2^n-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                actual: matrix.cols(),
            });
        }
        Ok(Self { matrix })
    }

    /// |psi><psi|
    pub fn pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        let amps = state.amplitudes();
        for i in 0..dim {
            for j in 0..dim {
                matrix[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// tr(rho^2)
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    /// Smallest eigenvalue; positive semidefiniteness check.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }

    /// Population <k|rho|k>.
    pub fn population(&self, k: usize) -> f64 {
        self.matrix[(k, k)].re
    }
}

/// Trace distance (1/2) * sum |eig(rho - sigma)|.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let delta = a.matrix().sub(b.matrix());
    let eigs = hermitian_eigenvalues(&delta);
    Ok(0.5 * eigs.iter().map(|e| e.abs()).sum::<f64>())
}

/// Jump operator J with rate gamma.
#[derive(Debug, Clone)]
pub struct JumpChannel {
    pub operator: ComplexMatrix,
    pub rate: f64,
}

impl JumpChannel {
    pub fn new(operator: ComplexMatrix, rate: f64) -> Self {
        assert!(rate >= 0.0, "jump rate must be non-negative");
        Self { operator, rate }
    }
}

/// System Hamiltonian plus its environment-coupling channels (hbar = 1).
#[derive(Debug, Clone)]
pub struct OpenSystem {
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<JumpChannel>,
}

impl OpenSystem {
    pub fn new(hamiltonian: ComplexMatrix, channels: Vec<JumpChannel>) -> Result<Self> {
        if !hamiltonian.is_hermitian(1e-10) {
            return Err(Error::InvalidArgument(
                "system Hamiltonian must be Hermitian".into(),
            ));
        }
        let dim = hamiltonian.rows();
        for ch in &channels {
            if ch.operator.rows() != dim || ch.operator.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: ch.operator.rows(),
                });
            }
        }
        Ok(Self {
            hamiltonian,
            channels,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }
}

/// -i[H, rho] + sum_i gamma_i (J_i rho J_i^dag - (1/2){J_i^dag J_i, rho})
pub fn lindblad_rhs(sys: &OpenSystem, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            actual: rho.dim(),
        });
    }
    let minus_i = C64::new(0.0, -1.0);
    let mut out = sys.hamiltonian.commutator(rho.matrix()).scale(minus_i);
    for ch in &sys.channels {
        if ch.rate == 0.0 {
            continue;
        }
        let jdag = ch.operator.adjoint();
        let jdag_j = jdag.matmul(&ch.operator);
        let sandwich = ch.operator.matmul(rho.matrix()).matmul(&jdag);
        let anti = jdag_j
            .matmul(rho.matrix())
            .add(&rho.matrix().matmul(&jdag_j))
            .scale(C64::new(0.5, 0.0));
        out = out.add(&sandwich.sub(&anti).scale(C64::new(ch.rate, 0.0)));
    }
    Ok(out)
}

/// Fixed-step RK4 integration of the master equation from `rho0` to
/// `t_final`. Each step re-Hermitizes ((rho + rho^dag)/2) and renormalizes
/// the trace; a pre-renormalization drift above 1e-6 aborts.
pub fn evolve(
    sys: &OpenSystem,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if dt <= 0.0 {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    if t_final < 0.0 {
        return Err(Error::InvalidArgument("t_final must be non-negative".into()));
    }
    let steps = (t_final / dt).round() as usize;
    let mut rho = rho0.matrix().clone();
    let half = C64::new(dt / 2.0, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);

    for step in 0..steps {
        let k1 = lindblad_rhs(sys, &DensityMatrix { matrix: rho.clone() })?;
        let k2 = lindblad_rhs(
            sys,
            &DensityMatrix {
                matrix: rho.add(&k1.scale(half)),
            },
        )?;
        let k3 = lindblad_rhs(
            sys,
            &DensityMatrix {
                matrix: rho.add(&k2.scale(half)),
            },
        )?;
        let k4 = lindblad_rhs(
            sys,
            &DensityMatrix {
                matrix: rho.add(&k3.scale(full)),
            },
        )?;
        let increment = k1
            .add(&k2.scale(C64::new(2.0, 0.0)))
            .add(&k3.scale(C64::new(2.0, 0.0)))
            .add(&k4)
            .scale(sixth);
        rho = rho.add(&increment);

        // Re-Hermitize and renormalize; the Lindblad flow preserves both
        // exactly, so any drift here is integrator error.
        rho = rho.add(&rho.adjoint()).scale(C64::new(0.5, 0.0));
        let tr = rho.trace().re;
        let drift = (tr - 1.0).abs();
        if drift > 1e-6 {
            return Err(Error::TraceDrift {
                t: (step + 1) as f64 * dt,
                drift,
            });
        }
        rho = rho.scale(C64::new(1.0 / tr, 0.0));
    }

    Ok(DensityMatrix { matrix: rho })
}

/// sigma^- = |0><1| lowering operator on one qubit.
pub fn lowering_operator() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(1.0, 0.0);
    m
}
