//! Circuit DAG with deterministic node order and fault injection by node
//! substitution.
//!
//! Nodes are stored in insertion order, which is always a valid topological
//! order (a gate can only depend on gates pushed before it). `op_nodes`
//! therefore enumerates nodes deterministically and index `i` addresses the
//! same node across identical builds, which is what makes "error at node i"
//! reproducible.

use crate::error::{Error, Result};
use crate::gates::GateDef;
use crate::state::StateVector;

#[derive(Debug, Clone)]
pub struct GateNode {
    pub gate: GateDef,
    pub qargs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CircuitDag {
    num_qubits: usize,
    nodes: Vec<GateNode>,
}

impl CircuitDag {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            nodes: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Append a gate at the back of the wires it touches.
    pub fn push(&mut self, gate: GateDef, qargs: &[usize]) -> Result<()> {
        if qargs.len() != gate.arity() {
            return Err(Error::ArityMismatch {
                label: gate.label().to_string(),
                arity: gate.arity(),
                given: qargs.len(),
            });
        }
        for (i, &q) in qargs.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
            if qargs[..i].contains(&q) {
                return Err(Error::DuplicateTarget { index: q });
            }
        }
        self.nodes.push(GateNode {
            gate,
            qargs: qargs.to_vec(),
        });
        Ok(())
    }

    /// Deterministic topologically-ordered node list.
    pub fn op_nodes(&self) -> &[GateNode] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Longest wire-dependency path, counting op nodes.
    pub fn depth(&self) -> usize {
        let mut wire_depth = vec![0usize; self.num_qubits];
        let mut depth = 0usize;
        for node in &self.nodes {
            let d = 1 + node
                .qargs
                .iter()
                .map(|&q| wire_depth[q])
                .max()
                .unwrap_or(0);
            for &q in &node.qargs {
                wire_depth[q] = d;
            }
            depth = depth.max(d);
        }
        depth
    }

    /// New DAG with one copy of `error` appended immediately after the
    /// selected node on every wire that node touches.
    pub fn inject_error(&self, error: &GateDef, index: usize) -> Result<CircuitDag> {
        if error.arity() != 1 {
            return Err(Error::ErrorGateArity {
                arity: error.arity(),
            });
        }
        if index >= self.nodes.len() {
            return Err(Error::NodeIndexOutOfRange {
                index,
                num_nodes: self.nodes.len(),
            });
        }
        let mut nodes = Vec::with_capacity(self.nodes.len() + self.nodes[index].qargs.len());
        nodes.extend_from_slice(&self.nodes[..=index]);
        for &q in &self.nodes[index].qargs {
            nodes.push(GateNode {
                gate: error.clone(),
                qargs: vec![q],
            });
        }
        nodes.extend_from_slice(&self.nodes[index + 1..]);
        Ok(CircuitDag {
            num_qubits: self.num_qubits,
            nodes,
        })
    }

    /// Run the circuit on `initial`, applying gates in topological order.
    pub fn execute(&self, initial: &StateVector) -> Result<StateVector> {
        if initial.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                actual: initial.dim(),
            });
        }
        let mut state = initial.clone();
        for node in &self.nodes {
            state.apply_gate_in_place(&node.gate, &node.qargs)?;
        }
        Ok(state)
    }

    /// Run from |0...0>.
    pub fn execute_from_zero(&self) -> Result<StateVector> {
        self.execute(&StateVector::zero_state(self.num_qubits))
    }

    /// Line-oriented text dump: one node per line, `<gate> <angle?> <qubits...>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            out.push_str(node.gate.label());
            if let Some(p) = node.gate.parameter() {
                out.push(' ');
                out.push_str(&format!("{p}"));
            }
            for &q in &node.qargs {
                out.push(' ');
                out.push_str(&q.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::state::fidelity;

    #[test]
    fn op_nodes_of_empty_circuit() {
        let dag = CircuitDag::new(1);
        assert!(dag.op_nodes().is_empty());
        assert_eq!(dag.depth(), 0);
    }

    #[test]
    fn op_nodes_preserve_wire_forced_order() {
        let mut dag = CircuitDag::new(2);
        dag.push(gates::h(), &[0]).unwrap();
        dag.push(gates::cx(), &[0, 1]).unwrap();
        let nodes = dag.op_nodes();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].gate.label(), "h");
        assert_eq!(nodes[1].gate.label(), "cx");
    }

    #[test]
    fn depth_of_parallel_and_chained_gates() {
        let mut parallel = CircuitDag::new(2);
        parallel.push(gates::h(), &[0]).unwrap();
        parallel.push(gates::h(), &[1]).unwrap();
        assert_eq!(parallel.depth(), 1);

        // Longest path by hand: H(q0) -> CX(q0,q1) -> X(q1) chains on wires.
        let mut chained = CircuitDag::new(2);
        chained.push(gates::h(), &[0]).unwrap();
        chained.push(gates::cx(), &[0, 1]).unwrap();
        chained.push(gates::x(), &[1]).unwrap();
        assert_eq!(chained.depth(), 3);
    }

    #[test]
    fn execute_empty_circuit_is_identity() {
        let dag = CircuitDag::new(3);
        let out = dag.execute_from_zero().unwrap();
        assert_eq!(out.probabilities()[0], 1.0);
    }

    #[test]
    fn execute_bell_circuit() {
        let mut dag = CircuitDag::new(2);
        dag.push(gates::h(), &[0]).unwrap();
        dag.push(gates::cx(), &[0, 1]).unwrap();
        let out = dag.execute_from_zero().unwrap();
        let p = out.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[3] - 0.5).abs() < 1e-12);
        assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn execute_rejects_dimension_mismatch() {
        let dag = CircuitDag::new(2);
        let wrong = StateVector::zero_state(3);
        assert!(dag.execute(&wrong).is_err());
    }

    #[test]
    fn inject_x_after_h_matches_matrix_oracle() {
        // Oracle: X * H on |0> by direct 2x2 multiplication.
        let oracle_m = gates::x().matrix().matmul(&gates::h().matrix());
        let v = oracle_m.matvec(&[crate::linalg::C64::new(1.0, 0.0), crate::linalg::C64::new(0.0, 0.0)]);
        let oracle = StateVector::from_amplitudes(v).unwrap();

        let mut dag = CircuitDag::new(1);
        dag.push(gates::h(), &[0]).unwrap();
        let injected = dag.inject_error(&gates::x(), 0).unwrap();
        let got = injected.execute_from_zero().unwrap();
        assert!((fidelity(&got, &oracle).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inject_identity_leaves_distribution_unchanged() {
        let mut dag = CircuitDag::new(2);
        dag.push(gates::h(), &[0]).unwrap();
        dag.push(gates::cx(), &[0, 1]).unwrap();
        dag.push(gates::h(), &[1]).unwrap();
        let base = dag.execute_from_zero().unwrap();
        for index in 0..dag.num_nodes() {
            let injected = dag.inject_error(&gates::identity(), index).unwrap();
            let got = injected.execute_from_zero().unwrap();
            assert!((fidelity(&got, &base).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inject_after_two_qubit_node_hits_both_wires() {
        let mut dag = CircuitDag::new(2);
        dag.push(gates::h(), &[0]).unwrap();
        dag.push(gates::cx(), &[0, 1]).unwrap();
        let injected = dag.inject_error(&gates::z(), 1).unwrap();
        // Exactly two error nodes added, one per CX wire, right after it.
        assert_eq!(injected.num_nodes(), dag.num_nodes() + 2);
        assert_eq!(injected.op_nodes()[2].gate.label(), "z");
        assert_eq!(injected.op_nodes()[2].qargs, vec![0]);
        assert_eq!(injected.op_nodes()[3].gate.label(), "z");
        assert_eq!(injected.op_nodes()[3].qargs, vec![1]);
    }

    #[test]
    fn inject_adds_arity_nodes_and_never_reduces_depth() {
        let mut dag = CircuitDag::new(3);
        dag.push(gates::h(), &[0]).unwrap();
        dag.push(gates::cx(), &[0, 1]).unwrap();
        dag.push(gates::cx(), &[1, 2]).unwrap();
        for index in 0..dag.num_nodes() {
            let arity = dag.op_nodes()[index].qargs.len();
            let injected = dag.inject_error(&gates::x(), index).unwrap();
            assert_eq!(injected.num_nodes(), dag.num_nodes() + arity);
            assert!(injected.depth() >= dag.depth());
        }
    }

    #[test]
    fn inject_validates_inputs() {
        let mut dag = CircuitDag::new(2);
        dag.push(gates::h(), &[0]).unwrap();
        assert!(matches!(
            dag.inject_error(&gates::x(), 5),
            Err(Error::NodeIndexOutOfRange { .. })
        ));
        assert!(matches!(
            dag.inject_error(&gates::cx(), 0),
            Err(Error::ErrorGateArity { .. })
        ));
    }

    #[test]
    fn execution_invariant_under_reordering_independent_nodes() {
        // Same gates on disjoint wires pushed in different orders.
        let mut a = CircuitDag::new(4);
        a.push(gates::h(), &[0]).unwrap();
        a.push(gates::x(), &[1]).unwrap();
        a.push(gates::rz(0.3), &[2]).unwrap();
        a.push(gates::cx(), &[2, 3]).unwrap();
        a.push(gates::cx(), &[0, 1]).unwrap();

        let mut b = CircuitDag::new(4);
        b.push(gates::rz(0.3), &[2]).unwrap();
        b.push(gates::x(), &[1]).unwrap();
        b.push(gates::h(), &[0]).unwrap();
        b.push(gates::cx(), &[0, 1]).unwrap();
        b.push(gates::cx(), &[2, 3]).unwrap();

        let sa = a.execute_from_zero().unwrap();
        let sb = b.execute_from_zero().unwrap();
        assert!((fidelity(&sa, &sb).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dump_format_is_line_oriented() {
        let mut dag = CircuitDag::new(2);
        dag.push(gates::h(), &[0]).unwrap();
        dag.push(gates::rz(std::f64::consts::PI / 8.0), &[1]).unwrap();
        dag.push(gates::cx(), &[0, 1]).unwrap();
        let dump = dag.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines[0], "h 0");
        assert!(lines[1].starts_with("rz 0.3926990816987241"));
        assert_eq!(lines[2], "cx 0 1");
    }
}
