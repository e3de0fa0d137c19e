//! Benchmark problem instances: the narrow-gorge landscape, the two-qubit
//! toy molecule, the transverse-field Ising chain, Hamiltonians loaded
//! from text files, and a synthetic quadratic used by optimizer property
//! tests.

use crate::ansatz::{build, AnsatzSpec, Entanglement};
use crate::error::{Error, Result};
use crate::gradient::Objective;
use crate::pauli::{h2_hamiltonian, tfim_hamiltonian, Hamiltonian, DENSE_MAX_QUBITS};
use crate::scalar::{real, Real};
use std::path::Path;

/// How to fill the initial parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub enum InitPolicy<T> {
    Zeros,
    PiOverTwo,
    Explicit(Vec<T>),
    /// Uniform in [-π, π), driven by the run seed.
    Random,
}

impl<T: Real> InitPolicy<T> {
    pub fn resolve(&self, n_params: usize, seed: u64) -> Result<Vec<T>> {
        match self {
            InitPolicy::Zeros => Ok(vec![T::zero(); n_params]),
            InitPolicy::PiOverTwo => Ok(vec![T::FRAC_PI_2(); n_params]),
            InitPolicy::Explicit(values) => {
                if values.len() != n_params {
                    return Err(Error::ParameterCount {
                        expected: n_params,
                        actual: values.len(),
                    });
                }
                Ok(values.clone())
            }
            InitPolicy::Random => {
                let mut state = seed ^ 0x9e3779b97f4a7c15;
                Ok((0..n_params)
                    .map(|_| {
                        let u = splitmix64(&mut state);
                        let unit = (u >> 11) as f64 / (1u64 << 53) as f64;
                        real::<T>((unit * 2.0 - 1.0) * std::f64::consts::PI)
                    })
                    .collect())
            }
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// A named objective with its start point and exact reference energy.
#[derive(Debug)]
pub struct ProblemInstance<T> {
    pub name: String,
    pub objective: Objective<T>,
    pub initial: Vec<T>,
    /// Exact minimum (dense diagonalization or analytic); `None` when the
    /// register is too large to diagonalize.
    pub reference_energy: Option<T>,
    pub n_qubits: usize,
    /// Iteration budget used when a run does not override it.
    pub default_iterations: usize,
}

impl<T: Real> ProblemInstance<T> {
    fn new(
        name: String,
        objective: Objective<T>,
        initial: Vec<T>,
        reference_energy: Option<T>,
        n_qubits: usize,
        default_iterations: usize,
    ) -> Result<Self> {
        if initial.len() != objective.n_params() {
            return Err(Error::ParameterCount {
                expected: objective.n_params(),
                actual: initial.len(),
            });
        }
        if let Some(reference) = reference_energy {
            let at_start = objective.eval_raw(&initial)?;
            debug_assert!(
                reference <= at_start + real(1e-9),
                "reference energy above the start value"
            );
        }
        Ok(Self {
            name,
            objective,
            initial,
            reference_energy,
            n_qubits,
            default_iterations,
        })
    }
}

/// Narrow-gorge landscape on `n` qubits: cost 1 − |⟨0|U(θ)|0⟩|² with a
/// product-RX circuit, evaluated on the simulator. The well around the
/// optimum θ = 0 narrows exponentially with n, so the initial gradient
/// norm at the all-π/2 start is √n·2⁻ⁿ.
pub fn narrow_gorge<T: Real>(n: usize) -> Result<ProblemInstance<T>> {
    if n == 0 || n > 12 {
        return Err(Error::QubitCount { n, min: 1, max: 12 });
    }
    let circuit = build(&AnsatzSpec::product_rx(n))?;
    let objective = Objective::zero_overlap(circuit);
    ProblemInstance::new(
        format!("narrow-gorge-{n}"),
        objective,
        vec![T::FRAC_PI_2(); n],
        Some(T::zero()),
        n,
        100,
    )
}

/// Closed-form twin of [`narrow_gorge`]; same cost function without the
/// simulator in the loop. Used as an oracle in tests.
pub fn narrow_gorge_closed_form<T: Real>(n: usize) -> Result<ProblemInstance<T>> {
    if n == 0 || n > 12 {
        return Err(Error::QubitCount { n, min: 1, max: 12 });
    }
    ProblemInstance::new(
        format!("narrow-gorge-closed-{n}"),
        Objective::narrow_gorge_closed_form(n),
        vec![T::FRAC_PI_2(); n],
        Some(T::zero()),
        n,
        100,
    )
}

/// Two-qubit toy molecule 0.4(ZI + IZ) + 0.2 XX with a single-depth Ry
/// ansatz and the plateau-prone start (7π/32, π/2, 0, 0). The first
/// excited state at energy −0.2 is the plateau; the ground energy is
/// −√0.68.
pub fn h2_toy<T: Real>() -> Result<ProblemInstance<T>> {
    let hamiltonian = h2_hamiltonian::<T>();
    let reference = hamiltonian.ground_energy_exact()?;
    let circuit = build(&AnsatzSpec::ry(2, 1, Entanglement::Linear))?;
    let objective = Objective::expectation(circuit, hamiltonian)?;
    let initial = vec![
        real::<T>(7.0) * T::PI() / real::<T>(32.0),
        T::FRAC_PI_2(),
        T::zero(),
        T::zero(),
    ];
    ProblemInstance::new("h2".into(), objective, initial, Some(reference), 2, 1000)
}

/// Open-chain transverse-field Ising model Σ Z_i Z_{i+1} + Σ X_i with a
/// two-depth Ry ansatz and the all-π/2 start.
///
/// The entangler is all-to-all: under the linear chain the gradient norm
/// at the all-π/2 start is exactly 1, while the reference behavior for
/// this problem has it well above 1.
pub fn tfim<T: Real>(n: usize) -> Result<ProblemInstance<T>> {
    tfim_with(n, 2, Entanglement::Full)
}

/// [`tfim`] with configurable ansatz depth and entangler topology.
pub fn tfim_with<T: Real>(
    n: usize,
    depth: usize,
    entanglement: Entanglement,
) -> Result<ProblemInstance<T>> {
    if !(2..=12).contains(&n) {
        return Err(Error::QubitCount { n, min: 2, max: 12 });
    }
    let hamiltonian = tfim_hamiltonian::<T>(n)?;
    let reference = hamiltonian.ground_energy_exact()?;
    let circuit = build(&AnsatzSpec::ry(n, depth, entanglement))?;
    let n_params = circuit.n_params();
    let objective = Objective::expectation(circuit, hamiltonian)?;
    ProblemInstance::new(
        format!("tfim-{n}"),
        objective,
        vec![T::FRAC_PI_2(); n_params],
        Some(reference),
        n,
        1000,
    )
}

/// VQE instance over a Hamiltonian read from the text format of
/// [`crate::pauli::Hamiltonian::parse`].
pub fn from_file<T: Real>(
    path: &Path,
    ansatz: &AnsatzSpec,
    init: &InitPolicy<T>,
    seed: u64,
) -> Result<ProblemInstance<T>> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "hamiltonian".into());
    instance_from_hamiltonian(name, Hamiltonian::parse(&text)?, ansatz, init, seed)
}

/// Bind an already-parsed Hamiltonian to an ansatz and a start policy.
pub fn instance_from_hamiltonian<T: Real>(
    name: String,
    hamiltonian: Hamiltonian<T>,
    ansatz: &AnsatzSpec,
    init: &InitPolicy<T>,
    seed: u64,
) -> Result<ProblemInstance<T>> {
    if hamiltonian.n_qubits() != ansatz.n_qubits {
        return Err(Error::QubitCountMismatch {
            hamiltonian: hamiltonian.n_qubits(),
            ansatz: ansatz.n_qubits,
        });
    }
    let n_qubits = hamiltonian.n_qubits();
    let reference = if n_qubits <= DENSE_MAX_QUBITS {
        Some(hamiltonian.ground_energy_exact()?)
    } else {
        None
    };
    let circuit = build(ansatz)?;
    let n_params = circuit.n_params();
    let objective = Objective::expectation(circuit, hamiltonian)?;
    let initial = init.resolve(n_params, seed)?;
    ProblemInstance::new(name, objective, initial, reference, n_qubits, 1000)
}

/// f(x) = ½‖x − x*‖² with analytic gradient; the test bed for
/// optimizer-level properties.
pub fn synthetic_quadratic<T: Real>(dim: usize, x_star: Vec<T>) -> Result<ProblemInstance<T>> {
    if dim == 0 || x_star.len() != dim {
        return Err(Error::ParameterCount {
            expected: dim,
            actual: x_star.len(),
        });
    }
    let objective = Objective::quadratic(x_star);
    ProblemInstance::new(
        format!("quadratic-{dim}"),
        objective,
        vec![T::zero(); dim],
        Some(T::zero()),
        0,
        1000,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradient::parameter_shift_gradient;
    use crate::optimizer::{Algorithm, Optimizer, OptimizerConfig};
    use crate::scalar::{dot, l2_norm};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn narrow_gorge_values() {
        let p = narrow_gorge::<f64>(2).unwrap();
        let f = p.objective.evaluate(&[FRAC_PI_2, FRAC_PI_2]).unwrap();
        assert!((f - 0.75).abs() < 1e-14);
        assert!(p.objective.evaluate(&[0.0, 0.0]).unwrap().abs() < 1e-14);
        assert!(narrow_gorge::<f64>(0).is_err());
        assert!(narrow_gorge::<f64>(13).is_err());
    }

    #[test]
    fn narrow_gorge_initial_gradient_scaling() {
        for n in [2usize, 4, 8] {
            let p = narrow_gorge::<f64>(n).unwrap();
            let g = parameter_shift_gradient(&p.objective, &p.initial).unwrap();
            let expect = (n as f64).sqrt() * 2f64.powi(-(n as i32));
            assert!(
                (l2_norm(&g) - expect).abs() < 1e-10,
                "n={n}: {} vs {expect}",
                l2_norm(&g)
            );
        }
    }

    #[test]
    fn h2_instance_shape() {
        let p = h2_toy::<f64>().unwrap();
        assert_eq!(p.objective.n_params(), 4);
        let at_init = p.objective.evaluate(&p.initial).unwrap();
        assert!(at_init > -0.2 && at_init < 0.8, "initial energy {at_init}");
        let reference = p.reference_energy.unwrap();
        assert!((reference + 0.68f64.sqrt()).abs() < 1e-10);
        assert!(reference <= at_init);
    }

    #[test]
    fn tfim_instance_values() {
        let p = tfim::<f64>(8).unwrap();
        assert_eq!(p.objective.n_params(), 24);
        let zero_energy = p.objective.evaluate(&[0.0; 24]).unwrap();
        assert!((zero_energy - 7.0).abs() < 1e-12);
        assert!(p.reference_energy.unwrap() < -7.0);
        assert!(tfim::<f64>(1).is_err());
    }

    #[test]
    fn from_file_matches_h2_modulo_init() {
        let dir = std::env::temp_dir().join("gorge-problems-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h2.txt");
        std::fs::write(&path, "0.4 ZI\n0.4 IZ\n0.2 XX\n").unwrap();
        let spec = AnsatzSpec::ry(2, 1, Entanglement::Linear);
        let p = from_file::<f64>(&path, &spec, &InitPolicy::Zeros, 0).unwrap();
        let h2 = h2_toy::<f64>().unwrap();
        assert_eq!(p.objective.n_params(), 4);
        let theta = [0.3, -0.2, 0.9, 0.1];
        let a = p.objective.evaluate(&theta).unwrap();
        let b = h2.objective.evaluate(&theta).unwrap();
        assert_eq!(a, b);
        assert_eq!(p.initial, vec![0.0; 4]);
    }

    #[test]
    fn from_file_rejects_qubit_mismatch() {
        let dir = std::env::temp_dir().join("gorge-problems-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mismatch.txt");
        std::fs::write(&path, "1.0 ZZ\n").unwrap();
        let spec = AnsatzSpec::ry(4, 2, Entanglement::Linear);
        assert!(matches!(
            from_file::<f64>(&path, &spec, &InitPolicy::Zeros, 0),
            Err(Error::QubitCountMismatch { .. })
        ));
    }

    #[test]
    fn file_instance_parameter_count() {
        let spec = AnsatzSpec::ry(4, 2, Entanglement::Linear);
        let h = Hamiltonian::<f64>::parse("0.5 ZZII\n0.25 IXXI\n-0.75 IIZZ").unwrap();
        let p = instance_from_hamiltonian("test".into(), h, &spec, &InitPolicy::Zeros, 0).unwrap();
        assert_eq!(p.objective.n_params(), 12);
    }

    #[test]
    fn quadratic_instance_values() {
        let p = synthetic_quadratic(2, vec![0.0f64, 0.0]).unwrap();
        assert!((p.objective.evaluate(&[3.0, 4.0]).unwrap() - 12.5).abs() < 1e-12);
        let g = p.objective.analytic_gradient(&[3.0, 4.0]).unwrap();
        let ghat = crate::optimizer::normalize(&g, 1e-12).unwrap();
        assert_eq!(ghat, vec![0.6, 0.8]);
        // Lemma-style quantity ⟨ĝ, x − x*⟩ equals the distance here.
        assert!((dot(&ghat, &[3.0, 4.0]) - 5.0).abs() < 1e-12);
        assert!(synthetic_quadratic::<f64>(2, vec![0.0]).is_err());
    }

    #[test]
    fn ngd_on_quadratic_shrinks_distance_by_eta_each_step() {
        let p = synthetic_quadratic(2, vec![0.0f64, 0.0]).unwrap();
        let mut opt = Optimizer::new(OptimizerConfig::new(Algorithm::Ngd), vec![3.0, 4.0]).unwrap();
        let mut dist = 5.0f64;
        while dist > 0.05 {
            let g = p.objective.analytic_gradient(opt.position()).unwrap();
            opt.ngd_step(&g).unwrap();
            let new_dist = l2_norm(opt.position());
            assert!((dist - new_dist - 0.05).abs() < 1e-12);
            dist = new_dist;
        }
    }

    #[test]
    fn f32_lane_smoke() {
        let p = h2_toy::<f32>().unwrap();
        let start = p.objective.evaluate(&p.initial).unwrap();
        let mut opt = Optimizer::new(
            OptimizerConfig::<f32>::new(Algorithm::Gd),
            p.initial.clone(),
        )
        .unwrap();
        for _ in 0..5 {
            let g = parameter_shift_gradient(&p.objective, opt.position()).unwrap();
            opt.gd_step(&g).unwrap();
        }
        let end = p.objective.evaluate(opt.position()).unwrap();
        assert!(end < start);
        assert!((p.reference_energy.unwrap() + 0.68f32.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn init_policies() {
        let zeros = InitPolicy::<f64>::Zeros.resolve(3, 0).unwrap();
        assert_eq!(zeros, vec![0.0; 3]);
        let pis = InitPolicy::<f64>::PiOverTwo.resolve(2, 0).unwrap();
        assert_eq!(pis, vec![FRAC_PI_2; 2]);
        assert!(InitPolicy::Explicit(vec![1.0]).resolve(2, 0).is_err());
        let r1 = InitPolicy::<f64>::Random.resolve(4, 7).unwrap();
        let r2 = InitPolicy::<f64>::Random.resolve(4, 7).unwrap();
        assert_eq!(r1, r2, "random init must be seed-deterministic");
        assert!(r1.iter().all(|x| x.abs() <= std::f64::consts::PI));
    }
}
