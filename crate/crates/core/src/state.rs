//! Dense state vectors and the gate-application kernels.
//!
//! Qubit order is little-endian throughout: qubit 0 is the least significant
//! bit of a basis index. This convention is load-bearing for the algorithm
//! success predicates and must not change.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::{GateDef, GateKind};
use crate::linalg::C64;

/// Pure n-qubit state as 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// |0...0>
    pub fn zero_state(num_qubits: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = C64::new(1.0, 0.0);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Computational basis state |index>.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if index >= (1 << num_qubits) {
            return Err(Error::QubitOutOfRange {
                index,
                num_qubits,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(1),
                actual: len,
            });
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amplitudes {
                *a *= inv;
            }
        }
    }

    /// <a|b>
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Entry k is |amplitude_k|^2.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal distribution over `qubits`, in the order given: bit j of the
    /// result index corresponds to `qubits[j]`.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        let mut out = vec![0.0; 1 << qubits.len()];
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut sub = 0usize;
            for (j, &q) in qubits.iter().enumerate() {
                sub |= ((index >> q) & 1) << j;
            }
            out[sub] += p;
        }
        Ok(out)
    }

    /// Index of the most probable outcome; ties break to the lowest index.
    pub fn argmax_outcome(&self) -> usize {
        let mut best = 0usize;
        let mut best_p = -1.0f64;
        for (k, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p > best_p {
                best_p = p;
                best = k;
            }
        }
        best
    }

    /// Draw a basis index with probability |amplitude_k|^2.
    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        let norm_sqr: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr < 1e-12 {
            return Err(Error::DegenerateState {
                norm: norm_sqr.sqrt(),
            });
        }
        let u: f64 = rng.gen::<f64>() * norm_sqr;
        let mut acc = 0.0;
        for (k, amp) in self.amplitudes.iter().enumerate() {
            acc += amp.norm_sqr();
            if u < acc {
                return Ok(k);
            }
        }
        Ok(self.amplitudes.len() - 1)
    }

    /// In-place gate application. `targets[j]` carries bit j of the gate's
    /// own little-endian index space.
    pub(crate) fn apply_gate_in_place(&mut self, gate: &GateDef, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.arity() {
            return Err(Error::ArityMismatch {
                label: gate.label().to_string(),
                arity: gate.arity(),
                given: targets.len(),
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t,
                    num_qubits: self.num_qubits,
                });
            }
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget { index: t });
            }
        }
        match gate.kind() {
            GateKind::Dense(matrix) => self.apply_dense(matrix.data(), targets),
            GateKind::Diagonal(diag) => self.apply_diagonal(diag, targets),
        }
        Ok(())
    }

    fn apply_dense(&mut self, matrix: &[C64], targets: &[usize]) {
        let k = targets.len();
        let block = 1usize << k;
        debug_assert_eq!(matrix.len(), block * block);

        if k == 1 {
            // Hot path: single-qubit gates dominate circuit execution.
            let mask = 1usize << targets[0];
            let m00 = matrix[0];
            let m01 = matrix[1];
            let m10 = matrix[2];
            let m11 = matrix[3];
            for base in 0..self.amplitudes.len() {
                if base & mask != 0 {
                    continue;
                }
                let other = base | mask;
                let a0 = self.amplitudes[base];
                let a1 = self.amplitudes[other];
                self.amplitudes[base] = m00 * a0 + m01 * a1;
                self.amplitudes[other] = m10 * a0 + m11 * a1;
            }
            return;
        }

        let target_mask: usize = targets.iter().map(|&t| 1usize << t).sum();
        let mut gathered = vec![C64::new(0.0, 0.0); block];
        let mut addresses = vec![0usize; block];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 {
                continue;
            }
            for local in 0..block {
                let mut addr = base;
                for (j, &t) in targets.iter().enumerate() {
                    if (local >> j) & 1 == 1 {
                        addr |= 1 << t;
                    }
                }
                addresses[local] = addr;
                gathered[local] = self.amplitudes[addr];
            }
            for row in 0..block {
                let mut acc = C64::new(0.0, 0.0);
                for col in 0..block {
                    acc += matrix[row * block + col] * gathered[col];
                }
                self.amplitudes[addresses[row]] = acc;
            }
        }
    }

    fn apply_diagonal(&mut self, diag: &[C64], targets: &[usize]) {
        debug_assert_eq!(diag.len(), 1 << targets.len());
        for (index, amp) in self.amplitudes.iter_mut().enumerate() {
            let mut local = 0usize;
            for (j, &t) in targets.iter().enumerate() {
                local |= ((index >> t) & 1) << j;
            }
            *amp *= diag[local];
        }
    }
}

/// Pure-function gate application: returns the transformed state.
pub fn apply_gate(state: &StateVector, gate: &GateDef, targets: &[usize]) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_gate_in_place(gate, targets)?;
    Ok(out)
}

/// |<a|b>|^2
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    let ip = a.inner(b)?;
    Ok(ip.norm_sqr())
}

/// Neumaier-compensated sum, used wherever reduction order must not leak
/// into results.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub type Complex = Complex64;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn x_flips_zero_to_one() {
        let state = apply_gate(&StateVector::zero_state(1), &gates::x(), &[0]).unwrap();
        assert_close(state.probabilities()[1], 1.0, 1e-12);
    }

    #[test]
    fn z_flips_plus_to_minus() {
        let plus = apply_gate(&StateVector::zero_state(1), &gates::h(), &[0]).unwrap();
        let got = apply_gate(&plus, &gates::z(), &[0]).unwrap();
        let minus = StateVector::from_amplitudes(vec![
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        assert_close(fidelity(&got, &minus).unwrap(), 1.0, 1e-12);
    }

    #[test]
    fn rz_pi_on_plus_gives_minus_up_to_phase() {
        // Oracle: direct 2x2 multiplication of diag(e^{-i pi/2}, e^{i pi/2})
        // against (1,1)/sqrt(2), done with ComplexMatrix.
        use crate::linalg::ComplexMatrix;
        let rz = gates::rz(std::f64::consts::PI);
        let m = rz.matrix();
        let v = m.matvec(&[
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        let oracle = StateVector::from_amplitudes(v).unwrap();

        let plus = apply_gate(&StateVector::zero_state(1), &gates::h(), &[0]).unwrap();
        let got = apply_gate(&plus, &rz, &[0]).unwrap();
        assert_close(fidelity(&got, &oracle).unwrap(), 1.0, 1e-12);

        let minus = StateVector::from_amplitudes(vec![
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        assert_close(fidelity(&got, &minus).unwrap(), 1.0, 1e-12);
        let _ = ComplexMatrix::identity(2);
    }

    #[test]
    fn probabilities_of_basis_and_hadamard() {
        let zero = StateVector::zero_state(1);
        assert_eq!(zero.probabilities(), vec![1.0, 0.0]);
        let plus = apply_gate(&zero, &gates::h(), &[0]).unwrap();
        let p = plus.probabilities();
        assert_close(p[0], 0.5, 1e-12);
        assert_close(p[1], 0.5, 1e-12);
    }

    #[test]
    fn bell_probabilities_match_kron_oracle() {
        // Oracle: brute-force matrix product (CX * (I kron H)) |00>.
        use crate::linalg::ComplexMatrix;
        let h = gates::h().matrix();
        let id = ComplexMatrix::identity(2);
        // Little-endian: qubit 0 varies fastest, so H on qubit 0 is I kron H.
        let layer = id.kron(&h);
        let cx = gates::cx().matrix();
        let full = cx.matmul(&layer);
        let v = full.matvec(&[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let oracle = StateVector::from_amplitudes(v).unwrap();

        let mut state = StateVector::zero_state(2);
        state.apply_gate_in_place(&gates::h(), &[0]).unwrap();
        state.apply_gate_in_place(&gates::cx(), &[0, 1]).unwrap();

        assert_close(fidelity(&state, &oracle).unwrap(), 1.0, 1e-12);
        let p = state.probabilities();
        assert_close(p[0], 0.5, 1e-12);
        assert_close(p[1], 0.0, 1e-12);
        assert_close(p[2], 0.0, 1e-12);
        assert_close(p[3], 0.5, 1e-12);
    }

    #[test]
    fn sampling_basis_state_is_deterministic() {
        let one = StateVector::basis_state(1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..32 {
            assert_eq!(one.sample_outcome(&mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn sampling_is_reproducible_for_fixed_seed() {
        let plus = apply_gate(&StateVector::zero_state(1), &gates::h(), &[0]).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64)
                .map(|_| plus.sample_outcome(&mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
    }

    #[test]
    fn bell_sampling_frequency_within_bounds() {
        let mut state = StateVector::zero_state(2);
        state.apply_gate_in_place(&gates::h(), &[0]).unwrap();
        state.apply_gate_in_place(&gates::cx(), &[0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let zeros = (0..n)
            .filter(|_| state.sample_outcome(&mut rng).unwrap() == 0)
            .count();
        let freq = zeros as f64 / n as f64;
        assert!((0.48..=0.52).contains(&freq), "freq {freq}");
    }

    #[test]
    fn degenerate_state_rejected() {
        let zero = StateVector::from_amplitudes(vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            zero.sample_outcome(&mut rng),
            Err(Error::DegenerateState { .. })
        ));
    }

    #[test]
    fn fidelity_identities() {
        let zero = StateVector::zero_state(1);
        let one = StateVector::basis_state(1, 1).unwrap();
        let plus = apply_gate(&zero, &gates::h(), &[0]).unwrap();
        assert_close(fidelity(&zero, &zero).unwrap(), 1.0, 1e-15);
        assert_close(fidelity(&zero, &one).unwrap(), 0.0, 1e-15);
        assert_close(fidelity(&zero, &plus).unwrap(), 0.5, 1e-12);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = StateVector::zero_state(1);
        let b = StateVector::zero_state(2);
        assert!(fidelity(&a, &b).is_err());
    }

    #[test]
    fn apply_gate_validates_targets() {
        let state = StateVector::zero_state(2);
        assert!(matches!(
            apply_gate(&state, &gates::x(), &[5]),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            apply_gate(&state, &gates::cx(), &[1, 1]),
            Err(Error::DuplicateTarget { .. })
        ));
        assert!(matches!(
            apply_gate(&state, &gates::cx(), &[0]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn double_application_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut state = StateVector::zero_state(3);
        // Scramble into a generic state first.
        for q in 0..3 {
            state.apply_gate_in_place(&gates::h(), &[q]).unwrap();
            state
                .apply_gate_in_place(&gates::rz(rng.gen::<f64>() * 6.28), &[q])
                .unwrap();
        }
        state.apply_gate_in_place(&gates::cx(), &[0, 1]).unwrap();

        let reference = state.clone();
        let theta = 1.234;
        for gate_pair in [
            (gates::x(), gates::x()),
            (gates::z(), gates::z()),
            (gates::rz(theta), gates::rz(-theta)),
        ] {
            let mut s = reference.clone();
            s.apply_gate_in_place(&gate_pair.0, &[1]).unwrap();
            s.apply_gate_in_place(&gate_pair.1, &[1]).unwrap();
            assert_close(fidelity(&s, &reference).unwrap(), 1.0, 1e-9);
        }
    }

    #[test]
    fn random_gate_sequences_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let num_qubits = 8;
        let mut state = StateVector::zero_state(num_qubits);
        for _ in 0..1000 {
            match rng.gen_range(0..6) {
                0 => {
                    let q = rng.gen_range(0..num_qubits);
                    state.apply_gate_in_place(&gates::h(), &[q]).unwrap();
                }
                1 => {
                    let q = rng.gen_range(0..num_qubits);
                    state.apply_gate_in_place(&gates::x(), &[q]).unwrap();
                }
                2 => {
                    let q = rng.gen_range(0..num_qubits);
                    state.apply_gate_in_place(&gates::y(), &[q]).unwrap();
                }
                3 => {
                    let q = rng.gen_range(0..num_qubits);
                    let theta = rng.gen::<f64>() * 6.28;
                    state.apply_gate_in_place(&gates::rz(theta), &[q]).unwrap();
                }
                4 => {
                    let a = rng.gen_range(0..num_qubits);
                    let b = (a + rng.gen_range(1..num_qubits)) % num_qubits;
                    state.apply_gate_in_place(&gates::cx(), &[a, b]).unwrap();
                }
                _ => {
                    let a = rng.gen_range(0..num_qubits);
                    let b = (a + rng.gen_range(1..num_qubits)) % num_qubits;
                    state.apply_gate_in_place(&gates::cz(), &[a, b]).unwrap();
                }
            }
            debug_assert!(state.norm().is_finite());
        }
        assert_close(state.norm(), 1.0, 1e-9);
        let total: f64 = state.probabilities().iter().sum();
        assert_close(total, 1.0, 1e-9);
    }

    #[test]
    fn marginal_probabilities_of_bell_pair() {
        let mut state = StateVector::zero_state(3);
        state.apply_gate_in_place(&gates::h(), &[1]).unwrap();
        state.apply_gate_in_place(&gates::cx(), &[1, 2]).unwrap();
        let marg = state.marginal_probabilities(&[1, 2]).unwrap();
        assert_close(marg[0], 0.5, 1e-12);
        assert_close(marg[3], 0.5, 1e-12);
        let single = state.marginal_probabilities(&[0]).unwrap();
        assert_close(single[0], 1.0, 1e-12);
    }

    #[test]
    fn compensated_sum_handles_cancellation() {
        let values = vec![1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(values), 1.0);
    }
}
