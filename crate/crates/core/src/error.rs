use thiserror::Error;

/// Errors surfaced by the simulator, circuit, and Monte Carlo layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate target qubit {index}")]
    DuplicateTarget { index: usize },

    #[error("gate {label} acts on {arity} qubits but {given} targets were given")]
    ArityMismatch {
        label: String,
        arity: usize,
        given: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state norm {norm} too close to zero to sample from")]
    DegenerateState { norm: f64 },

    #[error("node index {index} out of range for circuit with {num_nodes} op nodes")]
    NodeIndexOutOfRange { index: usize, num_nodes: usize },

    #[error("error gate must act on a single qubit, got arity {arity}")]
    ErrorGateArity { arity: usize },

    #[error("cannot place errors in a circuit with no op nodes")]
    EmptyCircuit,

    #[error("trace drifted by {drift:.3e} at t={t} (limit 1e-6); reduce dt")]
    TraceDrift { t: f64, drift: f64 },

    #[error("total jump probability {delta_p:.3e} >= 0.1; reduce dt")]
    StepProbabilityTooLarge { delta_p: f64 },

    #[error("ensemble must contain at least one trajectory")]
    EmptyEnsemble,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
