//! Objectives and gradient evaluation.
//!
//! An [`Objective`] binds a cost function — a circuit expectation value, a
//! zero-state overlap cost, or a closed form — and counts every cost
//! evaluation. Gradients come from the ±π/2 parameter-shift rule (exact
//! for half-angle single-Pauli rotations) with central finite differences
//! as an independent oracle. When one slot feeds several gates the shift
//! is applied per gate occurrence and the contributions are summed, so a
//! gradient costs exactly 2 · (parameterized gate occurrences) evaluations.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::Hamiltonian;
use crate::scalar::{real, Real};
use crate::statevector::{apply_circuit_shifted, zero_state, Statevector};
use std::sync::atomic::{AtomicU64, Ordering};

/// What an objective computes.
#[derive(Debug)]
pub enum ObjectiveKind<T> {
    /// ⟨Φ(θ)|H|Φ(θ)⟩ with |Φ(θ)⟩ = U(θ)|0…0⟩.
    CircuitExpectation {
        circuit: Circuit,
        hamiltonian: Hamiltonian<T>,
    },
    /// 1 − |⟨0…0|U(θ)|0…0⟩|², the fidelity cost to the all-zeros state.
    ZeroOverlapCost { circuit: Circuit },
    /// Closed form 1 − Π_k cos²(θ_k/2); equals [`ObjectiveKind::ZeroOverlapCost`]
    /// over a product-RX circuit.
    NarrowGorgeClosedForm { n_qubits: usize },
    /// ½‖x − x*‖² with analytic gradient; not shift-differentiable.
    Quadratic { x_star: Vec<T> },
}

/// A costed problem binding with a monotone evaluation counter.
///
/// Evaluation is deterministic: the same θ always produces bit-identical
/// cost values. The counter uses relaxed atomics, so `&Objective` can be
/// shared across threads.
#[derive(Debug)]
pub struct Objective<T> {
    kind: ObjectiveKind<T>,
    evals: AtomicU64,
}

impl<T: Real> Objective<T> {
    pub fn new(kind: ObjectiveKind<T>) -> Self {
        Self {
            kind,
            evals: AtomicU64::new(0),
        }
    }

    /// Energy objective for a circuit/Hamiltonian pair.
    pub fn expectation(circuit: Circuit, hamiltonian: Hamiltonian<T>) -> Result<Self> {
        if circuit.n_qubits() != hamiltonian.n_qubits() {
            return Err(Error::QubitCountMismatch {
                hamiltonian: hamiltonian.n_qubits(),
                ansatz: circuit.n_qubits(),
            });
        }
        Ok(Self::new(ObjectiveKind::CircuitExpectation {
            circuit,
            hamiltonian,
        }))
    }

    /// Fidelity cost 1 − |⟨0|U(θ)|0⟩|².
    pub fn zero_overlap(circuit: Circuit) -> Self {
        Self::new(ObjectiveKind::ZeroOverlapCost { circuit })
    }

    /// Closed-form narrow-gorge cost on `n` parameters.
    pub fn narrow_gorge_closed_form(n_qubits: usize) -> Self {
        Self::new(ObjectiveKind::NarrowGorgeClosedForm { n_qubits })
    }

    /// ½‖x − x*‖².
    pub fn quadratic(x_star: Vec<T>) -> Self {
        Self::new(ObjectiveKind::Quadratic { x_star })
    }

    pub fn kind(&self) -> &ObjectiveKind<T> {
        &self.kind
    }

    pub fn n_params(&self) -> usize {
        match &self.kind {
            ObjectiveKind::CircuitExpectation { circuit, .. }
            | ObjectiveKind::ZeroOverlapCost { circuit } => circuit.n_params(),
            ObjectiveKind::NarrowGorgeClosedForm { n_qubits } => *n_qubits,
            ObjectiveKind::Quadratic { x_star } => x_star.len(),
        }
    }

    /// Qubit register size, when the objective is circuit-backed.
    pub fn n_qubits(&self) -> Option<usize> {
        match &self.kind {
            ObjectiveKind::CircuitExpectation { circuit, .. }
            | ObjectiveKind::ZeroOverlapCost { circuit } => Some(circuit.n_qubits()),
            ObjectiveKind::NarrowGorgeClosedForm { n_qubits } => Some(*n_qubits),
            ObjectiveKind::Quadratic { .. } => None,
        }
    }

    /// Cost evaluations performed so far.
    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// Evaluate the cost at θ, incrementing the evaluation counter.
    pub fn evaluate(&self, theta: &[T]) -> Result<T> {
        let v = self.eval_raw(theta)?;
        self.evals.fetch_add(1, Ordering::Relaxed);
        Ok(v)
    }

    /// Evaluation without counting; used for construction-time validation.
    pub(crate) fn eval_raw(&self, theta: &[T]) -> Result<T> {
        self.check_len(theta)?;
        match &self.kind {
            ObjectiveKind::CircuitExpectation {
                circuit,
                hamiltonian,
            } => {
                let psi = run_circuit(circuit, theta, None)?;
                hamiltonian.expectation(&psi)
            }
            ObjectiveKind::ZeroOverlapCost { circuit } => {
                let psi = run_circuit(circuit, theta, None)?;
                Ok(T::one() - psi.amplitude_zero().norm_sqr())
            }
            ObjectiveKind::NarrowGorgeClosedForm { .. } => Ok(narrow_gorge_cost(theta)),
            ObjectiveKind::Quadratic { x_star } => {
                let half = real::<T>(0.5);
                Ok(half
                    * theta
                        .iter()
                        .zip(x_star)
                        .map(|(&t, &s)| (t - s) * (t - s))
                        .sum::<T>())
            }
        }
    }

    /// Number of parameterized gate occurrences (shift evaluation points).
    fn shift_occurrences(&self) -> Result<Vec<usize>> {
        match &self.kind {
            ObjectiveKind::CircuitExpectation { circuit, .. }
            | ObjectiveKind::ZeroOverlapCost { circuit } => Ok(circuit
                .parameterized_gates()
                .map(|(_, slot)| slot)
                .collect()),
            // One virtual RX occurrence per parameter.
            ObjectiveKind::NarrowGorgeClosedForm { n_qubits } => Ok((0..*n_qubits).collect()),
            ObjectiveKind::Quadratic { .. } => Err(Error::ParameterShiftUnsupported),
        }
    }

    /// Cost with `delta` added to the angle of one gate occurrence.
    fn eval_occurrence_shifted(&self, theta: &[T], occurrence: usize, delta: T) -> Result<T> {
        let v = match &self.kind {
            ObjectiveKind::CircuitExpectation {
                circuit,
                hamiltonian,
            } => {
                let gate_index = circuit
                    .parameterized_gates()
                    .nth(occurrence)
                    .expect("occurrence index in range")
                    .0;
                let psi = run_circuit(circuit, theta, Some((gate_index, delta)))?;
                hamiltonian.expectation(&psi)?
            }
            ObjectiveKind::ZeroOverlapCost { circuit } => {
                let gate_index = circuit
                    .parameterized_gates()
                    .nth(occurrence)
                    .expect("occurrence index in range")
                    .0;
                let psi = run_circuit(circuit, theta, Some((gate_index, delta)))?;
                T::one() - psi.amplitude_zero().norm_sqr()
            }
            ObjectiveKind::NarrowGorgeClosedForm { .. } => {
                let mut shifted = theta.to_vec();
                shifted[occurrence] += delta;
                narrow_gorge_cost(&shifted)
            }
            ObjectiveKind::Quadratic { .. } => return Err(Error::ParameterShiftUnsupported),
        };
        self.evals.fetch_add(1, Ordering::Relaxed);
        Ok(v)
    }

    /// Analytic gradient, available for the closed-form objectives.
    pub fn analytic_gradient(&self, theta: &[T]) -> Result<Vec<T>> {
        self.check_len(theta)?;
        match &self.kind {
            ObjectiveKind::NarrowGorgeClosedForm { .. } => Ok(narrow_gorge_gradient(theta)),
            ObjectiveKind::Quadratic { x_star } => {
                Ok(theta.iter().zip(x_star).map(|(&t, &s)| t - s).collect())
            }
            _ => Err(Error::ParameterShiftUnsupported),
        }
    }

    fn check_len(&self, theta: &[T]) -> Result<()> {
        if theta.len() != self.n_params() {
            return Err(Error::ParameterCount {
                expected: self.n_params(),
                actual: theta.len(),
            });
        }
        Ok(())
    }
}

fn run_circuit<T: Real>(
    circuit: &Circuit,
    theta: &[T],
    shift: Option<(usize, T)>,
) -> Result<Statevector<T>> {
    let psi0 = zero_state(circuit.n_qubits())?;
    apply_circuit_shifted(circuit, theta, &psi0, shift)
}

/// Narrow-gorge cost 1 − Π_k cos²(θ_k/2).
pub fn narrow_gorge_cost<T: Real>(theta: &[T]) -> T {
    let two = real::<T>(2.0);
    let mut prod = T::one();
    for &t in theta {
        let c = (t / two).cos();
        prod *= c * c;
    }
    T::one() - prod
}

/// Analytic gradient of [`narrow_gorge_cost`]:
/// ∂f/∂θ_k = (1/2) sin θ_k · Π_{j≠k} cos²(θ_j/2).
pub fn narrow_gorge_gradient<T: Real>(theta: &[T]) -> Vec<T> {
    let two = real::<T>(2.0);
    let half = real::<T>(0.5);
    let cos2: Vec<T> = theta
        .iter()
        .map(|&t| {
            let c = (t / two).cos();
            c * c
        })
        .collect();
    (0..theta.len())
        .map(|k| {
            let rest = cos2
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(T::one(), |acc, (_, &c)| acc * c);
            half * theta[k].sin() * rest
        })
        .collect()
}

/// Evaluate the objective (spec-level alias for [`Objective::evaluate`]).
pub fn evaluate<T: Real>(obj: &Objective<T>, theta: &[T]) -> Result<T> {
    obj.evaluate(theta)
}

/// Exact gradient by the ±π/2 parameter-shift rule.
///
/// Component k is Σ over occurrences of slot k of
/// [f(θ with that gate shifted +π/2) − f(−π/2)] / 2.
pub fn parameter_shift_gradient<T: Real>(obj: &Objective<T>, theta: &[T]) -> Result<Vec<T>> {
    if theta.len() != obj.n_params() {
        return Err(Error::ParameterCount {
            expected: obj.n_params(),
            actual: theta.len(),
        });
    }
    let half = real::<T>(0.5);
    let shift = T::FRAC_PI_2();
    let mut grad = vec![T::zero(); obj.n_params()];
    for (occurrence, slot) in obj.shift_occurrences()?.into_iter().enumerate() {
        let plus = obj.eval_occurrence_shifted(theta, occurrence, shift)?;
        let minus = obj.eval_occurrence_shifted(theta, occurrence, -shift)?;
        grad[slot] += (plus - minus) * half;
    }
    debug_assert!(grad.iter().all(|g| g.is_finite()));
    Ok(grad)
}

/// Central finite differences [f(θ+h·e_k) − f(θ−h·e_k)] / 2h. Test oracle.
pub fn finite_difference_gradient<T: Real>(
    obj: &Objective<T>,
    theta: &[T],
    h: T,
) -> Result<Vec<T>> {
    if h <= T::zero() {
        return Err(Error::InvalidConfig(
            "finite-difference step must be positive".into(),
        ));
    }
    if theta.len() != obj.n_params() {
        return Err(Error::ParameterCount {
            expected: obj.n_params(),
            actual: theta.len(),
        });
    }
    let two_h = h + h;
    let mut grad = vec![T::zero(); obj.n_params()];
    let mut work = theta.to_vec();
    for k in 0..theta.len() {
        work[k] = theta[k] + h;
        let plus = obj.evaluate(&work)?;
        work[k] = theta[k] - h;
        let minus = obj.evaluate(&work)?;
        work[k] = theta[k];
        grad[k] = (plus - minus) / two_h;
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build, AnsatzSpec};
    use crate::circuit::Gate;
    use crate::pauli::h2_hamiltonian;
    use std::f64::consts::FRAC_PI_2;

    fn rx_z_objective() -> Objective<f64> {
        let c = Circuit::new(1, vec![Gate::Rx { qubit: 0, slot: 0 }]).unwrap();
        let h = Hamiltonian::<f64>::parse("1.0 Z").unwrap();
        Objective::expectation(c, h).unwrap()
    }

    #[test]
    fn rx_expectation_is_cos_theta() {
        let obj = rx_z_objective();
        for theta in [0.0f64, 0.3, 1.2, FRAC_PI_2, 2.9] {
            assert!((obj.evaluate(&[theta]).unwrap() - theta.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn parameter_shift_matches_analytic_derivative() {
        let obj = rx_z_objective();
        let g = parameter_shift_gradient(&obj, &[FRAC_PI_2]).unwrap();
        assert!((g[0] + 1.0).abs() < 1e-14);
        let g = parameter_shift_gradient(&obj, &[0.7]).unwrap();
        assert!((g[0] + 0.7f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn gradient_vanishes_at_gorge_optimum() {
        let c = build(&AnsatzSpec::product_rx(3)).unwrap();
        let obj = Objective::<f64>::zero_overlap(c);
        let g = parameter_shift_gradient(&obj, &[0.0, 0.0, 0.0]).unwrap();
        assert!(g.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn h2_evaluation_at_zero_angles() {
        let c = build(&AnsatzSpec::ry(2, 1, crate::ansatz::Entanglement::Linear)).unwrap();
        let obj = Objective::expectation(c, h2_hamiltonian::<f64>()).unwrap();
        assert!((obj.evaluate(&[0.0; 4]).unwrap() - 0.8).abs() < 1e-14);
    }

    #[test]
    fn finite_difference_on_quadratic() {
        let obj = Objective::quadratic(vec![0.0f64, 0.0]);
        let g = finite_difference_gradient(&obj, &[3.0, 0.0], 1e-5).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-8);
        let analytic = obj.analytic_gradient(&[3.0, 4.0]).unwrap();
        assert_eq!(analytic, vec![3.0, 4.0]);
        assert!(matches!(
            finite_difference_gradient(&obj, &[0.0, 0.0], 0.0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn finite_difference_on_constant_direction() {
        // For f(x) = x^2/2 the derivative at 3 is 3; with the quadratic
        // objective at x_star = 0 this doubles as the x^2 example.
        let obj = Objective::quadratic(vec![0.0f64]);
        let g = finite_difference_gradient(&obj, &[3.0], 1e-5).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn finite_difference_is_zero_where_the_cost_is_flat() {
        // At x = x_star the two shifted evaluations are identical.
        let obj = Objective::quadratic(vec![1.5f64, -2.0]);
        let g = finite_difference_gradient(&obj, &[1.5, -2.0], 1e-5).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
    }

    #[test]
    fn parameter_shift_rejects_quadratic() {
        let obj = Objective::quadratic(vec![0.0]);
        assert!(matches!(
            parameter_shift_gradient(&obj, &[1.0]),
            Err(Error::ParameterShiftUnsupported)
        ));
    }

    #[test]
    fn eval_count_bookkeeping() {
        let c = build(&AnsatzSpec::product_rx(5)).unwrap();
        let obj = Objective::zero_overlap(c);
        let theta = vec![0.3; 5];
        assert_eq!(obj.eval_count(), 0);
        obj.evaluate(&theta).unwrap();
        assert_eq!(obj.eval_count(), 1);
        parameter_shift_gradient(&obj, &theta).unwrap();
        assert_eq!(obj.eval_count(), 1 + 2 * 5);
    }

    #[test]
    fn shared_slot_contributions_are_summed() {
        // Two RX gates on different qubits driven by one slot, measured with
        // a ZI + IZ observable: f(θ) = 2cos(θ), f'(θ) = -2 sin(θ).
        let c = Circuit::new(
            2,
            vec![
                Gate::Rx { qubit: 0, slot: 0 },
                Gate::Rx { qubit: 1, slot: 0 },
            ],
        )
        .unwrap();
        let h = Hamiltonian::<f64>::parse("1.0 ZI\n1.0 IZ").unwrap();
        let obj = Objective::expectation(c, h).unwrap();
        let theta = [0.4];
        let before = obj.eval_count();
        let g = parameter_shift_gradient(&obj, &theta).unwrap();
        assert_eq!(obj.eval_count() - before, 4); // 2 occurrences x 2 shifts
        assert!((g[0] + 2.0 * 0.4f64.sin()).abs() < 1e-13);
        let fd = finite_difference_gradient(&obj, &theta, 1e-5).unwrap();
        assert!((g[0] - fd[0]).abs() < 1e-9);
    }

    #[test]
    fn closed_form_matches_simulator_route() {
        let spec = AnsatzSpec::product_rx(4);
        let sim = Objective::<f64>::zero_overlap(build(&spec).unwrap());
        let closed = Objective::narrow_gorge_closed_form(4);
        let theta = [0.3, -1.1, 2.0, 0.9];
        let a = sim.evaluate(&theta).unwrap();
        let b = closed.evaluate(&theta).unwrap();
        assert!((a - b).abs() < 1e-12);
        let ga = parameter_shift_gradient(&sim, &theta).unwrap();
        let gb = closed.analytic_gradient(&theta).unwrap();
        for (x, y) in ga.iter().zip(&gb) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
