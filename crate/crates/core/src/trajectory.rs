//! Quantum jump (Monte Carlo wave function) engine.
//!
//! A trajectory is a pure state driven by the effective non-Hermitian
//! Hamiltonian H = H_S - (i/2) sum_i gamma_i J_i^dag J_i, interrupted by
//! stochastic jumps. Averaging |psi><psi| over many trajectories reproduces
//! the Lindblad density-matrix evolution.
//!
//! Per-trajectory RNG streams are derived from (master seed, trajectory
//! index) with counter-based ChaCha streams, so ensembles are bit-identical
//! whether they run serially or in parallel.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::lindblad::{DensityMatrix, OpenSystem};
use crate::linalg::{C64, ComplexMatrix};
use crate::state::{compensated_sum, StateVector};

/// Ensemble parameters: step size, horizon, RNG seed, trajectory count.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryConfig {
    pub dt: f64,
    pub t_final: f64,
    pub seed: u64,
    pub num_trajectories: usize,
}

/// H = H_S - (i/2) sum_i gamma_i J_i^dag J_i
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    matrix: ComplexMatrix,
}

impl EffectiveHamiltonian {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn effective_hamiltonian(sys: &OpenSystem) -> EffectiveHamiltonian {
    let mut matrix = sys.hamiltonian.clone();
    for ch in &sys.channels {
        if ch.rate == 0.0 {
            continue;
        }
        let jdag_j = ch.operator.adjoint().matmul(&ch.operator);
        matrix = matrix.add(&jdag_j.scale(C64::new(0.0, -0.5 * ch.rate)));
    }
    EffectiveHamiltonian { matrix }
}

/// Per-channel jump probabilities over one step:
/// delta_p_i = dt * gamma_i * <psi| J_i^dag J_i |psi>, plus their total.
pub fn jump_probabilities(
    state: &StateVector,
    sys: &OpenSystem,
    dt: f64,
) -> Result<(Vec<f64>, f64)> {
    if state.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            actual: state.dim(),
        });
    }
    let mut per_channel = Vec::with_capacity(sys.channels.len());
    for ch in &sys.channels {
        let jpsi = ch.operator.matvec(state.amplitudes());
        let norm_sqr: f64 = jpsi.iter().map(|a| a.norm_sqr()).sum();
        per_channel.push(dt * ch.rate * norm_sqr);
    }
    let total = per_channel.iter().sum();
    Ok((per_channel, total))
}

/// One stochastic step: no-jump drift with probability 1 - delta_p, or a
/// jump through channel i with probability delta_p_i. The channel is picked
/// by a single uniform draw partitioned as
/// [0, dp_1), [dp_1, dp_1+dp_2), ..., [delta_p, 1) = no jump.
pub fn step<R: Rng + ?Sized>(
    state: &StateVector,
    sys: &OpenSystem,
    dt: f64,
    rng: &mut R,
) -> Result<StateVector> {
    let (per_channel, delta_p) = jump_probabilities(state, sys, dt)?;
    if delta_p >= 0.1 {
        return Err(Error::StepProbabilityTooLarge { delta_p });
    }

    let u: f64 = rng.gen();
    let mut chosen: Option<usize> = None;
    let mut acc = 0.0;
    for (i, &dp) in per_channel.iter().enumerate() {
        acc += dp;
        if u < acc {
            chosen = Some(i);
            break;
        }
    }

    let new_amps = match chosen {
        Some(i) => {
            // Jump: sqrt(gamma_i dt / dp_i) J_i |psi>. dp_i > 0 whenever the
            // draw lands in its window, so the scale is finite.
            let ch = &sys.channels[i];
            let scale = (ch.rate * dt / per_channel[i]).sqrt();
            ch.operator
                .matvec(state.amplitudes())
                .into_iter()
                .map(|a| a * scale)
                .collect::<Vec<C64>>()
        }
        None => {
            // No jump: (1 - i dt H)|psi> / sqrt(1 - delta_p).
            let h_eff = effective_hamiltonian(sys);
            let h_psi = h_eff.matrix().matvec(state.amplitudes());
            let scale = 1.0 / (1.0 - delta_p).sqrt();
            state
                .amplitudes()
                .iter()
                .zip(h_psi)
                .map(|(a, hp)| (a - Complex64::new(0.0, dt) * hp) * scale)
                .collect()
        }
    };

    let mut out = StateVector::from_amplitudes(new_amps)?;
    // Both branches are normalized analytically only to first order in dt;
    // renormalize to keep floating-point drift out of long runs.
    out.normalize();
    Ok(out)
}

/// Internal driver reusing the precomputed effective Hamiltonian; `step`
/// stays the single-step reference implementation.
fn run_steps<R: Rng + ?Sized>(
    sys: &OpenSystem,
    h_eff: &EffectiveHamiltonian,
    psi0: &StateVector,
    dt: f64,
    num_steps: usize,
    rng: &mut R,
    mut observer: Option<&mut Vec<StateVector>>,
) -> Result<StateVector> {
    let mut state = psi0.clone();
    for _ in 0..num_steps {
        let (per_channel, delta_p) = jump_probabilities(&state, sys, dt)?;
        if delta_p >= 0.1 {
            return Err(Error::StepProbabilityTooLarge { delta_p });
        }
        let u: f64 = rng.gen();
        let mut chosen: Option<usize> = None;
        let mut acc = 0.0;
        for (i, &dp) in per_channel.iter().enumerate() {
            acc += dp;
            if u < acc {
                chosen = Some(i);
                break;
            }
        }
        let new_amps: Vec<C64> = match chosen {
            Some(i) => {
                let ch = &sys.channels[i];
                let scale = (ch.rate * dt / per_channel[i]).sqrt();
                ch.operator
                    .matvec(state.amplitudes())
                    .into_iter()
                    .map(|a| a * scale)
                    .collect()
            }
            None => {
                let h_psi = h_eff.matrix().matvec(state.amplitudes());
                let scale = 1.0 / (1.0 - delta_p).sqrt();
                state
                    .amplitudes()
                    .iter()
                    .zip(h_psi)
                    .map(|(a, hp)| (a - Complex64::new(0.0, dt) * hp) * scale)
                    .collect()
            }
        };
        state = StateVector::from_amplitudes(new_amps)?;
        state.normalize();
        if let Some(trace) = observer.as_deref_mut() {
            trace.push(state.clone());
        }
    }
    Ok(state)
}

/// RNG stream for one trajectory of one ensemble.
pub fn trajectory_rng(seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory_index);
    rng
}

/// Run a single trajectory to t_final, with the RNG stream derived from
/// (cfg.seed, trajectory_index).
pub fn run_trajectory(
    sys: &OpenSystem,
    psi0: &StateVector,
    cfg: &TrajectoryConfig,
    trajectory_index: u64,
) -> Result<StateVector> {
    let num_steps = (cfg.t_final / cfg.dt).round() as usize;
    let h_eff = effective_hamiltonian(sys);
    let mut rng = trajectory_rng(cfg.seed, trajectory_index);
    run_steps(sys, &h_eff, psi0, cfg.dt, num_steps, &mut rng, None)
}

/// Like [`run_trajectory`] but also returns the state after every step.
pub fn run_trajectory_traced(
    sys: &OpenSystem,
    psi0: &StateVector,
    cfg: &TrajectoryConfig,
    trajectory_index: u64,
) -> Result<(StateVector, Vec<StateVector>)> {
    let num_steps = (cfg.t_final / cfg.dt).round() as usize;
    let h_eff = effective_hamiltonian(sys);
    let mut rng = trajectory_rng(cfg.seed, trajectory_index);
    let mut trace = Vec::with_capacity(num_steps);
    let fin = run_steps(
        sys,
        &h_eff,
        psi0,
        cfg.dt,
        num_steps,
        &mut rng,
        Some(&mut trace),
    )?;
    Ok((fin, trace))
}

/// Run the full ensemble. Trajectories are independent and execute in
/// parallel; results are identical to serial execution for a fixed seed.
pub fn run_ensemble(
    sys: &OpenSystem,
    psi0: &StateVector,
    cfg: &TrajectoryConfig,
) -> Result<Vec<StateVector>> {
    let results = exec::map_indexed(cfg.num_trajectories, |i| {
        run_trajectory(sys, psi0, cfg, i as u64)
    });
    results.into_iter().collect()
}

/// Sequential twin of [`run_ensemble`]; must produce bit-identical output.
pub fn run_ensemble_serial(
    sys: &OpenSystem,
    psi0: &StateVector,
    cfg: &TrajectoryConfig,
) -> Result<Vec<StateVector>> {
    let results = exec::map_indexed_seq(cfg.num_trajectories, |i| {
        run_trajectory(sys, psi0, cfg, i as u64)
    });
    results.into_iter().collect()
}

/// (1/M) sum_i |psi_i><psi_i|, accumulated entrywise with compensated
/// summation in trajectory order.
pub fn ensemble_density(trajectories: &[StateVector]) -> Result<DensityMatrix> {
    let first = trajectories.first().ok_or(Error::EmptyEnsemble)?;
    let dim = first.dim();
    for t in trajectories {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: t.dim(),
            });
        }
    }
    let m = trajectories.len() as f64;
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let re = compensated_sum(
                trajectories
                    .iter()
                    .map(|t| (t.amplitudes()[i] * t.amplitudes()[j].conj()).re),
            );
            let im = compensated_sum(
                trajectories
                    .iter()
                    .map(|t| (t.amplitudes()[i] * t.amplitudes()[j].conj()).im),
            );
            matrix[(i, j)] = C64::new(re / m, im / m);
        }
    }
    DensityMatrix::new(matrix)
}

/// Sample mean and standard error of <psi|O|psi> over the ensemble.
pub fn estimate_observable(
    trajectories: &[StateVector],
    observable: &ComplexMatrix,
) -> Result<(f64, f64)> {
    if !observable.is_hermitian(1e-10) {
        return Err(Error::InvalidArgument("observable must be Hermitian".into()));
    }
    if trajectories.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: trajectories.len(),
        });
    }
    let values: Vec<f64> = trajectories
        .iter()
        .map(|t| {
            let o_psi = observable.matvec(t.amplitudes());
            t.amplitudes()
                .iter()
                .zip(o_psi)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>()
        })
        .collect();
    let m = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / m;
    let variance = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (m - 1.0);
    Ok((mean, (variance / m).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::lindblad::{evolve, lowering_operator, trace_distance, JumpChannel};
    use rand::rngs::mock::StepRng;

    fn damping_system(gamma: f64) -> OpenSystem {
        OpenSystem::new(
            ComplexMatrix::zeros(2, 2),
            vec![JumpChannel::new(lowering_operator(), gamma)],
        )
        .unwrap()
    }

    fn excited() -> StateVector {
        StateVector::basis_state(1, 1).unwrap()
    }

    #[test]
    fn effective_hamiltonian_without_channels_is_hs() {
        let h = gates::x().matrix();
        let sys = OpenSystem::new(h.clone(), vec![]).unwrap();
        assert_eq!(effective_hamiltonian(&sys).matrix().max_abs_diff(&h), 0.0);
    }

    #[test]
    fn effective_hamiltonian_of_damping() {
        // H = -(i gamma / 2) |1><1| by substitution.
        let gamma = 0.6;
        let sys = damping_system(gamma);
        let h = effective_hamiltonian(&sys);
        assert!(h.matrix()[(0, 0)].norm() < 1e-15);
        assert!((h.matrix()[(1, 1)] - C64::new(0.0, -gamma / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn effective_hamiltonian_of_unitary_channel() {
        // J unitary means J^dag J = I, so H = H_S - (i gamma/2) I.
        let gamma = 0.9;
        let hs = gates::z().matrix();
        let sys = OpenSystem::new(
            hs.clone(),
            vec![JumpChannel::new(gates::x().matrix(), gamma)],
        )
        .unwrap();
        let h = effective_hamiltonian(&sys);
        let expected = hs.add(&ComplexMatrix::identity(2).scale(C64::new(0.0, -gamma / 2.0)));
        assert!(h.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn jump_probabilities_cases() {
        let gamma = 0.8;
        let dt = 1e-3;
        let sys = damping_system(gamma);

        // Ground state is annihilated by sigma-.
        let (_, total) = jump_probabilities(&StateVector::zero_state(1), &sys, dt).unwrap();
        assert_eq!(total, 0.0);

        // Excited state: <1|J^dag J|1> = 1.
        let (per, total) = jump_probabilities(&excited(), &sys, dt).unwrap();
        assert!((total - gamma * dt).abs() < 1e-15);
        assert_eq!(per.len(), 1);

        // Two channels add.
        let sys2 = OpenSystem::new(
            ComplexMatrix::zeros(2, 2),
            vec![
                JumpChannel::new(lowering_operator(), gamma),
                JumpChannel::new(gates::z().matrix(), 0.4),
            ],
        )
        .unwrap();
        let (per2, total2) = jump_probabilities(&excited(), &sys2, dt).unwrap();
        assert!((total2 - (per2[0] + per2[1])).abs() < 1e-18);
        assert!((total2 - (gamma * dt + 0.4 * dt)).abs() < 1e-15);
    }

    #[test]
    fn step_without_channels_is_schroedinger_drift() {
        let sys = OpenSystem::new(ComplexMatrix::zeros(2, 2), vec![]).unwrap();
        let psi = excited();
        let mut rng = StepRng::new(0, 0);
        let out = step(&psi, &sys, 1e-3, &mut rng).unwrap();
        assert!((crate::state::fidelity(&out, &psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn forced_jump_lands_in_ground_state() {
        // StepRng yielding 0 makes the uniform draw 0 < delta_p: jump.
        let sys = damping_system(1.0);
        let mut rng = StepRng::new(0, 0);
        let out = step(&excited(), &sys, 1e-3, &mut rng).unwrap();
        let ground = StateVector::zero_state(1);
        assert!((crate::state::fidelity(&out, &ground).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn forced_no_jump_keeps_excited_state() {
        // StepRng yielding max makes the draw ~1 >= delta_p: no jump. |1> is
        // an eigenstate of J^dag J, so renormalization restores it exactly.
        let sys = damping_system(1.0);
        let mut rng = StepRng::new(u64::MAX, 0);
        let out = step(&excited(), &sys, 1e-3, &mut rng).unwrap();
        assert!((crate::state::fidelity(&out, &excited()).unwrap() - 1.0).abs() < 1e-12);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_rejects_oversized_dt() {
        let sys = damping_system(1.0);
        let mut rng = StepRng::new(0, 0);
        assert!(matches!(
            step(&excited(), &sys, 0.2, &mut rng),
            Err(Error::StepProbabilityTooLarge { .. })
        ));
    }

    #[test]
    fn step_preserves_unit_norm_on_both_branches() {
        let sys = damping_system(1.0);
        // A state with both components exercises drift and jump paths.
        let psi = StateVector::from_amplitudes(vec![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
        ])
        .unwrap();
        for raw in [0u64, u64::MAX, u64::MAX / 2] {
            let mut rng = StepRng::new(raw, 0);
            let out = step(&psi, &sys, 1e-3, &mut rng).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn jump_branch_frequency_matches_delta_p() {
        // Empirical jump rate over many single steps from a fixed state
        // within 5 binomial standard deviations of delta_p.
        let sys = damping_system(1.0);
        let psi = StateVector::from_amplitudes(vec![
            C64::new(
                std::f64::consts::FRAC_1_SQRT_2,
                0.0,
            ),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let dt = 0.05;
        let (_, delta_p) = jump_probabilities(&psi, &sys, dt).unwrap();
        let trials = 100_000usize;
        let mut rng = trajectory_rng(41, 0);
        let ground = StateVector::zero_state(1);
        let mut jumps = 0usize;
        for _ in 0..trials {
            let out = step(&psi, &sys, dt, &mut rng).unwrap();
            // The jump branch maps psi exactly onto |0>.
            if (crate::state::fidelity(&out, &ground).unwrap() - 1.0).abs() < 1e-9 {
                jumps += 1;
            }
        }
        let freq = jumps as f64 / trials as f64;
        let sigma = (delta_p * (1.0 - delta_p) / trials as f64).sqrt();
        assert!(
            (freq - delta_p).abs() <= 5.0 * sigma,
            "freq {freq}, delta_p {delta_p}, sigma {sigma}"
        );
    }

    #[test]
    fn zero_time_trajectory_returns_initial_state() {
        let sys = damping_system(1.0);
        let cfg = TrajectoryConfig {
            dt: 1e-3,
            t_final: 0.0,
            seed: 5,
            num_trajectories: 1,
        };
        let out = run_trajectory(&sys, &excited(), &cfg, 0).unwrap();
        assert_eq!(out, excited());
    }

    #[test]
    fn trajectories_are_reproducible_per_index() {
        let sys = damping_system(1.0);
        let cfg = TrajectoryConfig {
            dt: 1e-3,
            t_final: 1.0,
            seed: 77,
            num_trajectories: 16,
        };
        let a = run_trajectory(&sys, &excited(), &cfg, 2).unwrap();
        let b = run_trajectory(&sys, &excited(), &cfg, 2).unwrap();
        assert_eq!(a, b);
        // Streams are independent: across a handful of indices both branches
        // (jumped / survived) must show up.
        let finals: Vec<StateVector> = (0..16)
            .map(|i| run_trajectory(&sys, &excited(), &cfg, i).unwrap())
            .collect();
        assert!(finals.iter().any(|s| *s != finals[0]));
    }

    #[test]
    fn survival_fraction_matches_exponential_decay() {
        // gamma t = 1: fraction still excited ~ e^{-1} +- 0.02 at M = 10^4.
        let sys = damping_system(1.0);
        let cfg = TrajectoryConfig {
            dt: 1e-3,
            t_final: 1.0,
            seed: 11,
            num_trajectories: 10_000,
        };
        let finals = run_ensemble(&sys, &excited(), &cfg).unwrap();
        let survived = finals
            .iter()
            .filter(|s| s.probabilities()[1] > 0.5)
            .count();
        let fraction = survived as f64 / cfg.num_trajectories as f64;
        assert!(
            (fraction - (-1.0f64).exp()).abs() < 0.02,
            "fraction {fraction}"
        );
    }

    #[test]
    fn parallel_ensemble_is_bit_identical_to_serial() {
        let sys = damping_system(1.0);
        let cfg = TrajectoryConfig {
            dt: 1e-2,
            t_final: 0.5,
            seed: 123,
            num_trajectories: 64,
        };
        let par = run_ensemble(&sys, &excited(), &cfg).unwrap();
        let ser = run_ensemble_serial(&sys, &excited(), &cfg).unwrap();
        assert_eq!(par, ser);
    }

    #[test]
    fn ensemble_density_of_single_state_is_projector() {
        let rho = ensemble_density(&[excited()]).unwrap();
        assert!((rho.population(1) - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ensemble_density_of_mixed_pair() {
        let rho = ensemble_density(&[StateVector::zero_state(1), excited()]).unwrap();
        assert!((rho.population(0) - 0.5).abs() < 1e-15);
        assert!((rho.population(1) - 0.5).abs() < 1e-15);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);
        assert!((rho.trace().re - 1.0).abs() < 1e-9);
        assert!(rho.is_hermitian(1e-9));
    }

    #[test]
    fn ensemble_density_rejects_empty() {
        assert!(matches!(ensemble_density(&[]), Err(Error::EmptyEnsemble)));
    }

    #[test]
    fn ensemble_density_tracks_lindblad_solution() {
        // Smoke-scale version of the equivalence check; the acceptance suite
        // runs it at M = 10^4.
        let sys = damping_system(1.0);
        let cfg = TrajectoryConfig {
            dt: 1e-3,
            t_final: 1.0,
            seed: 4242,
            num_trajectories: 2_000,
        };
        let finals = run_ensemble(&sys, &excited(), &cfg).unwrap();
        let rho_traj = ensemble_density(&finals).unwrap();
        let rho_lind = evolve(
            &sys,
            &DensityMatrix::pure(&excited()),
            cfg.t_final,
            cfg.dt,
        )
        .unwrap();
        let dist = trace_distance(&rho_traj, &rho_lind).unwrap();
        assert!(dist < 0.05, "trace distance {dist}");
    }

    #[test]
    fn estimate_observable_basics() {
        let ensemble = vec![excited(), excited(), excited()];
        let projector = {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(1, 1)] = C64::new(1.0, 0.0);
            m
        };
        let (mean, se) = estimate_observable(&ensemble, &projector).unwrap();
        assert!((mean - 1.0).abs() < 1e-15);
        assert_eq!(se, 0.0);

        let identity = ComplexMatrix::identity(2);
        let mixed = vec![StateVector::zero_state(1), excited()];
        let (mean_id, _) = estimate_observable(&mixed, &identity).unwrap();
        assert!((mean_id - 1.0).abs() < 1e-12);

        assert!(matches!(
            estimate_observable(&[excited()], &identity),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
