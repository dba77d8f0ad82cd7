//! Deterministic builders for the six benchmark algorithms, each paired with
//! an explicit success predicate over final states.
//!
//! Qubit layout conventions (little-endian everywhere):
//! - Bernstein-Vazirani / Deutsch-Jozsa: problem qubits 0..n, ancilla at n.
//! - Grover: n search qubits, no ancilla.
//! - Simon: first register 0..n, second register n..2n.
//! - QPE: counting qubits 0..m, eigenstate qubit at m.
//! - EOH: n system qubits.

use rand::Rng;

use crate::circuit::CircuitDag;
use crate::error::{Error, Result};
use crate::gates;
use crate::seeding;
use crate::state::{fidelity, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AlgorithmKind {
    BernsteinVazirani,
    DeutschJozsa,
    Grover,
    Simon,
    Qpe,
    Eoh,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::BernsteinVazirani,
        AlgorithmKind::DeutschJozsa,
        AlgorithmKind::Grover,
        AlgorithmKind::Simon,
        AlgorithmKind::Qpe,
        AlgorithmKind::Eoh,
    ];

    /// Lowercase name used in CSV output and on the command line.
    pub fn csv_name(&self) -> &'static str {
        match self {
            AlgorithmKind::BernsteinVazirani => "bernstein-vazirani",
            AlgorithmKind::DeutschJozsa => "deutsch-jozsa",
            AlgorithmKind::Grover => "grover",
            AlgorithmKind::Simon => "simon",
            AlgorithmKind::Qpe => "qpe",
            AlgorithmKind::Eoh => "eoh",
        }
    }

    /// Display name used in rendered tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            AlgorithmKind::BernsteinVazirani => "BernsteinVazirani",
            AlgorithmKind::DeutschJozsa => "DeutschJozsa",
            AlgorithmKind::Grover => "Grover",
            AlgorithmKind::Simon => "Simon",
            AlgorithmKind::Qpe => "QPE",
            AlgorithmKind::Eoh => "EOH",
        }
    }

    pub fn parse(name: &str) -> Option<AlgorithmKind> {
        match name.to_ascii_lowercase().as_str() {
            "bernstein-vazirani" | "bernsteinvazirani" | "bv" => {
                Some(AlgorithmKind::BernsteinVazirani)
            }
            "deutsch-jozsa" | "deutschjozsa" | "dj" => Some(AlgorithmKind::DeutschJozsa),
            "grover" => Some(AlgorithmKind::Grover),
            "simon" => Some(AlgorithmKind::Simon),
            "qpe" => Some(AlgorithmKind::Qpe),
            "eoh" => Some(AlgorithmKind::Eoh),
            _ => None,
        }
    }

    /// Grid sizes used for this algorithm in the benchmark tables.
    pub fn default_sizes(&self) -> &'static [usize] {
        match self {
            AlgorithmKind::Qpe | AlgorithmKind::Eoh => &[3, 5, 7],
            _ => &[3, 5, 7, 11],
        }
    }
}

/// Deterministic verdict on a faulty final state, given the ideal one.
#[derive(Debug, Clone)]
pub enum SuccessPredicate {
    /// Most probable outcome on `qubits` equals `expected`.
    ArgmaxMarginal { qubits: Vec<usize>, expected: usize },
    /// Most probable outcome on `qubits` is all-zeros iff `constant`.
    ArgmaxZeroIff { qubits: Vec<usize>, constant: bool },
    /// Every outcome on `qubits` with probability > 1e-9 satisfies
    /// y . secret = 0 (mod 2).
    SupportOrthogonal { qubits: Vec<usize>, secret: u64 },
    /// fidelity(faulty, ideal) >= threshold.
    FidelityAtLeast { threshold: f64 },
}

impl SuccessPredicate {
    pub fn evaluate(&self, faulty: &StateVector, ideal: &StateVector) -> Result<bool> {
        match self {
            SuccessPredicate::ArgmaxMarginal { qubits, expected } => {
                let marginal = faulty.marginal_probabilities(qubits)?;
                Ok(argmax(&marginal) == *expected)
            }
            SuccessPredicate::ArgmaxZeroIff { qubits, constant } => {
                let marginal = faulty.marginal_probabilities(qubits)?;
                Ok((argmax(&marginal) == 0) == *constant)
            }
            SuccessPredicate::SupportOrthogonal { qubits, secret } => {
                let marginal = faulty.marginal_probabilities(qubits)?;
                Ok(marginal.iter().enumerate().all(|(y, &p)| {
                    p <= 1e-9 || (y as u64 & secret).count_ones() % 2 == 0
                }))
            }
            SuccessPredicate::FidelityAtLeast { threshold } => {
                Ok(fidelity(faulty, ideal)? >= *threshold)
            }
        }
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

/// Problem parameters baked into an instance, kept for reporting.
#[derive(Debug, Clone)]
pub enum AlgorithmSecret {
    BitString { bits: u64, len: usize },
    Constant { value: bool },
    Marked { index: usize },
    Phase { numerator: u64, counting_bits: usize },
    Ising { couplings: Vec<f64>, fields: Vec<f64>, time: f64, steps: usize },
}

#[derive(Debug, Clone)]
pub struct AlgorithmInstance {
    pub kind: AlgorithmKind,
    /// Total qubits including ancillas.
    pub num_qubits: usize,
    pub dag: CircuitDag,
    pub secret: AlgorithmSecret,
    pub predicate: SuccessPredicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Constant,
    Balanced,
}

fn check_secret(n: usize, s: u64, require_nonzero: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one problem bit".into()));
    }
    if n > 32 {
        return Err(Error::InvalidArgument("problem size above supported range".into()));
    }
    if s >= (1u64 << n) {
        return Err(Error::InvalidArgument(format!(
            "secret {s} does not fit in {n} bits"
        )));
    }
    if require_nonzero && s == 0 {
        return Err(Error::InvalidArgument("secret must be nonzero".into()));
    }
    Ok(())
}

/// Bernstein-Vazirani for the secret string `s` on `n` problem bits.
///
/// H layer, phase oracle for f(x) = s.x mod 2 via CX kickback onto the |->
/// ancilla, H layer on the problem register.
pub fn build_bernstein_vazirani(n: usize, s: u64) -> Result<AlgorithmInstance> {
    check_secret(n, s, true)?;
    let anc = n;
    let mut dag = CircuitDag::new(n + 1);
    dag.push(gates::x(), &[anc])?;
    for q in 0..n {
        dag.push(gates::h(), &[q])?;
    }
    dag.push(gates::h(), &[anc])?;
    for q in 0..n {
        if (s >> q) & 1 == 1 {
            dag.push(gates::cx(), &[q, anc])?;
        }
    }
    for q in 0..n {
        dag.push(gates::h(), &[q])?;
    }
    Ok(AlgorithmInstance {
        kind: AlgorithmKind::BernsteinVazirani,
        num_qubits: n + 1,
        dag,
        secret: AlgorithmSecret::BitString { bits: s, len: n },
        predicate: SuccessPredicate::ArgmaxMarginal {
            qubits: (0..n).collect(),
            expected: s as usize,
        },
    })
}

/// Deutsch-Jozsa on `n` problem bits. Constant oracles are f = 0 or f = 1
/// (seed picks which); balanced oracles are f(x) = s.x with a seeded s != 0.
pub fn build_deutsch_jozsa(n: usize, mode: OracleMode, seed: u64) -> Result<AlgorithmInstance> {
    if n == 0 || n > 32 {
        return Err(Error::InvalidArgument("problem size out of range".into()));
    }
    let mut rng = seeding::stream_rng(seeding::derive_seed("dj-oracle", &[seed, n as u64]), 0);
    let anc = n;
    let mut dag = CircuitDag::new(n + 1);
    dag.push(gates::x(), &[anc])?;
    for q in 0..n {
        dag.push(gates::h(), &[q])?;
    }
    dag.push(gates::h(), &[anc])?;
    let secret = match mode {
        OracleMode::Constant => {
            let value: bool = rng.gen();
            if value {
                // f = 1: global phase flip via Z on the |-> ancilla.
                dag.push(gates::z(), &[anc])?;
            }
            AlgorithmSecret::Constant { value }
        }
        OracleMode::Balanced => {
            let s = rng.gen_range(1..(1u64 << n));
            for q in 0..n {
                if (s >> q) & 1 == 1 {
                    dag.push(gates::cx(), &[q, anc])?;
                }
            }
            AlgorithmSecret::BitString { bits: s, len: n }
        }
    };
    for q in 0..n {
        dag.push(gates::h(), &[q])?;
    }
    Ok(AlgorithmInstance {
        kind: AlgorithmKind::DeutschJozsa,
        num_qubits: n + 1,
        dag,
        secret,
        predicate: SuccessPredicate::ArgmaxZeroIff {
            qubits: (0..n).collect(),
            constant: mode == OracleMode::Constant,
        },
    })
}

/// Number of Grover iterations round((pi/4) sqrt(2^n)).
pub fn grover_default_iterations(n: usize) -> usize {
    ((std::f64::consts::PI / 4.0) * ((1u64 << n) as f64).sqrt()).round() as usize
}

/// Grover search for `marked` over n bits: uniform superposition then
/// `iterations` rounds of [phase oracle + diffuser]. The oracle is a
/// multi-controlled Z conjugated by X on the zero bits of `marked`.
pub fn build_grover(n: usize, marked: usize, iterations: usize) -> Result<AlgorithmInstance> {
    if n == 0 || n > 32 {
        return Err(Error::InvalidArgument("search size out of range".into()));
    }
    if marked >= (1 << n) {
        return Err(Error::InvalidArgument(format!(
            "marked element {marked} does not fit in {n} bits"
        )));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut dag = CircuitDag::new(n);
    for &q in &all {
        dag.push(gates::h(), &[q])?;
    }
    for _ in 0..iterations {
        // Oracle: flip the phase of |marked>.
        for &q in &all {
            if (marked >> q) & 1 == 0 {
                dag.push(gates::x(), &[q])?;
            }
        }
        dag.push(gates::mcz(n), &all)?;
        for &q in &all {
            if (marked >> q) & 1 == 0 {
                dag.push(gates::x(), &[q])?;
            }
        }
        // Diffuser: inversion about the mean.
        for &q in &all {
            dag.push(gates::h(), &[q])?;
        }
        for &q in &all {
            dag.push(gates::x(), &[q])?;
        }
        dag.push(gates::mcz(n), &all)?;
        for &q in &all {
            dag.push(gates::x(), &[q])?;
        }
        for &q in &all {
            dag.push(gates::h(), &[q])?;
        }
    }
    Ok(AlgorithmInstance {
        kind: AlgorithmKind::Grover,
        num_qubits: n,
        dag,
        secret: AlgorithmSecret::Marked { index: marked },
        predicate: SuccessPredicate::ArgmaxMarginal {
            qubits: all,
            expected: marked,
        },
    })
}

/// Simon's problem for hidden string `s` on 2n qubits. The oracle copies the
/// first register then masks with s controlled on the pivot bit, giving
/// f(x) = x xor (x_pivot ? s : 0), a valid 2-to-1 function with period s.
pub fn build_simon(n: usize, s: u64) -> Result<AlgorithmInstance> {
    check_secret(n, s, true)?;
    let pivot = s.trailing_zeros() as usize;
    let mut dag = CircuitDag::new(2 * n);
    for q in 0..n {
        dag.push(gates::h(), &[q])?;
    }
    for q in 0..n {
        dag.push(gates::cx(), &[q, n + q])?;
    }
    for q in 0..n {
        if (s >> q) & 1 == 1 {
            dag.push(gates::cx(), &[pivot, n + q])?;
        }
    }
    for q in 0..n {
        dag.push(gates::h(), &[q])?;
    }
    Ok(AlgorithmInstance {
        kind: AlgorithmKind::Simon,
        num_qubits: 2 * n,
        dag,
        secret: AlgorithmSecret::BitString { bits: s, len: n },
        predicate: SuccessPredicate::SupportOrthogonal {
            qubits: (0..n).collect(),
            secret: s,
        },
    })
}

/// Quantum phase estimation of theta = k / 2^m with m counting qubits and a
/// phase-gate unitary on one eigenstate qubit prepared in |1>.
pub fn build_qpe(m: usize, k: u64) -> Result<AlgorithmInstance> {
    if m == 0 || m > 32 {
        return Err(Error::InvalidArgument("counting register out of range".into()));
    }
    if k >= (1u64 << m) {
        return Err(Error::InvalidArgument(format!(
            "phase numerator {k} needs more than {m} bits"
        )));
    }
    let eigen = m;
    let theta = k as f64 / (1u64 << m) as f64;
    let mut dag = CircuitDag::new(m + 1);
    dag.push(gates::x(), &[eigen])?;
    for q in 0..m {
        dag.push(gates::h(), &[q])?;
    }
    for j in 0..m {
        let phi = 2.0 * std::f64::consts::PI * theta * (1u64 << j) as f64;
        dag.push(gates::cphase(phi), &[j, eigen])?;
    }
    append_inverse_qft(&mut dag, m)?;
    Ok(AlgorithmInstance {
        kind: AlgorithmKind::Qpe,
        num_qubits: m + 1,
        dag,
        secret: AlgorithmSecret::Phase {
            numerator: k,
            counting_bits: m,
        },
        predicate: SuccessPredicate::ArgmaxMarginal {
            qubits: (0..m).collect(),
            expected: k as usize,
        },
    })
}

/// Inverse QFT on qubits 0..m (little-endian convention: the forward QFT
/// maps |x> to (1/sqrt(M)) sum_y e^{2 pi i x y / M} |y>).
fn append_inverse_qft(dag: &mut CircuitDag, m: usize) -> Result<()> {
    for i in 0..m / 2 {
        dag.push(gates::swap(), &[i, m - 1 - i])?;
    }
    for i in 0..m {
        for j in 0..i {
            let phi = -std::f64::consts::PI / (1u64 << (i - j)) as f64;
            dag.push(gates::cphase(phi), &[j, i])?;
        }
        dag.push(gates::h(), &[i])?;
    }
    Ok(())
}

/// One term of a Pauli-sum Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PauliTerm {
    X { qubit: usize, coefficient: f64 },
    Z { qubit: usize, coefficient: f64 },
    ZZ { a: usize, b: usize, coefficient: f64 },
}

/// Hamiltonian evolution: first-order Trotter circuit approximating
/// exp(-i H t), with success defined by fidelity against the noiseless run.
pub fn build_eoh(
    n: usize,
    hamiltonian: &[PauliTerm],
    t: f64,
    trotter_steps: usize,
) -> Result<AlgorithmInstance> {
    if n == 0 || n > 32 {
        return Err(Error::InvalidArgument("system size out of range".into()));
    }
    if trotter_steps == 0 {
        return Err(Error::InvalidArgument("trotter_steps must be >= 1".into()));
    }
    let dt = t / trotter_steps as f64;
    let mut dag = CircuitDag::new(n);
    for _ in 0..trotter_steps {
        for term in hamiltonian {
            match *term {
                PauliTerm::X { qubit, coefficient } => {
                    dag.push(gates::rx(2.0 * coefficient * dt), &[qubit])?;
                }
                PauliTerm::Z { qubit, coefficient } => {
                    dag.push(gates::rz(2.0 * coefficient * dt), &[qubit])?;
                }
                PauliTerm::ZZ { a, b, coefficient } => {
                    dag.push(gates::cx(), &[a, b])?;
                    dag.push(gates::rz(2.0 * coefficient * dt), &[b])?;
                    dag.push(gates::cx(), &[a, b])?;
                }
            }
        }
    }
    Ok(AlgorithmInstance {
        kind: AlgorithmKind::Eoh,
        num_qubits: n,
        dag,
        secret: AlgorithmSecret::Ising {
            couplings: vec![],
            fields: vec![],
            time: t,
            steps: trotter_steps,
        },
        predicate: SuccessPredicate::FidelityAtLeast { threshold: 1.0 - 1e-6 },
    })
}

/// Seeded transverse-field Ising chain used by the experiment harness:
/// X fields first (so every wire leaves the computational basis on its first
/// node), then nearest-neighbour ZZ couplings. Coefficients are uniform in
/// [0.5, 1.5].
pub fn seeded_ising_terms(n: usize, seed: u64) -> (Vec<PauliTerm>, Vec<f64>, Vec<f64>) {
    let mut rng = seeding::stream_rng(seeding::derive_seed("eoh-ising", &[seed, n as u64]), 0);
    let fields: Vec<f64> = (0..n).map(|_| 0.5 + rng.gen::<f64>()).collect();
    let couplings: Vec<f64> = (0..n.saturating_sub(1)).map(|_| 0.5 + rng.gen::<f64>()).collect();
    let mut terms = Vec::new();
    for (q, &h) in fields.iter().enumerate() {
        terms.push(PauliTerm::X {
            qubit: q,
            coefficient: h,
        });
    }
    for (q, &j) in couplings.iter().enumerate() {
        terms.push(PauliTerm::ZZ {
            a: q,
            b: q + 1,
            coefficient: j,
        });
    }
    (terms, couplings, fields)
}

pub const EOH_TIME: f64 = 1.0;
pub const EOH_TROTTER_STEPS: usize = 2;

/// Map a requested grid size to a concrete seeded instance.
///
/// The grid size is the total qubit count for every algorithm except Simon,
/// whose register structure forces an even total: a requested size t builds
/// the ceil(t/2)-bit instance on 2*ceil(t/2) qubits, and reports the actual
/// total.
pub fn instance_for(
    kind: AlgorithmKind,
    size: usize,
    master_seed: u64,
) -> Result<AlgorithmInstance> {
    if size < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid size {size} is too small"
        )));
    }
    let mut rng = seeding::stream_rng(
        seeding::derive_seed("instance", &[master_seed, kind as u64, size as u64]),
        0,
    );
    match kind {
        AlgorithmKind::BernsteinVazirani => {
            let n = size - 1;
            let s = rng.gen_range(1..(1u64 << n.min(32)));
            build_bernstein_vazirani(n, s)
        }
        AlgorithmKind::DeutschJozsa => {
            let n = size - 1;
            build_deutsch_jozsa(n, OracleMode::Balanced, rng.gen())
        }
        AlgorithmKind::Grover => {
            let marked = rng.gen_range(0..(1usize << size));
            build_grover(size, marked, grover_default_iterations(size))
        }
        AlgorithmKind::Simon => {
            let n = (size + 1) / 2;
            let s = rng.gen_range(1..(1u64 << n.min(32)));
            build_simon(n, s)
        }
        AlgorithmKind::Qpe => {
            let m = size - 1;
            let k = rng.gen_range(1..(1u64 << m.min(32)));
            build_qpe(m, k)
        }
        AlgorithmKind::Eoh => {
            let (terms, couplings, fields) = seeded_ising_terms(size, master_seed);
            let mut instance = build_eoh(size, &terms, EOH_TIME, EOH_TROTTER_STEPS)?;
            instance.secret = AlgorithmSecret::Ising {
                couplings,
                fields,
                time: EOH_TIME,
                steps: EOH_TROTTER_STEPS,
            };
            Ok(instance)
        }
    }
}
