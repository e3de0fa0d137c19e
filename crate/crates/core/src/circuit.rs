//! Parameterized circuits: gate sequences over a fixed qubit register.
//!
//! Rotation gates do not store angles; they reference a slot in the
//! parameter vector supplied at application time, so one `Circuit` value
//! describes the whole family U(θ).

use crate::error::{Error, Result};

/// A single gate. Rotations carry a parameter slot, entanglers a control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Rx { qubit: usize, slot: usize },
    Ry { qubit: usize, slot: usize },
    Rz { qubit: usize, slot: usize },
    Cx { control: usize, target: usize },
    Cz { control: usize, target: usize },
}

impl Gate {
    /// Parameter slot for rotation gates.
    pub fn slot(self) -> Option<usize> {
        match self {
            Gate::Rx { slot, .. } | Gate::Ry { slot, .. } | Gate::Rz { slot, .. } => Some(slot),
            Gate::Cx { .. } | Gate::Cz { .. } => None,
        }
    }

    fn max_qubit(self) -> usize {
        match self {
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => qubit,
            Gate::Cx { control, target } | Gate::Cz { control, target } => control.max(target),
        }
    }
}

/// An ordered gate sequence with a validated parameter-slot layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    /// Validate and build a circuit.
    ///
    /// Slots must cover 0..n_params-1 with every slot used at least once;
    /// entanglers must have distinct control and target.
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit(
                "circuit needs at least one qubit".into(),
            ));
        }
        let mut n_params = 0usize;
        for (i, g) in gates.iter().enumerate() {
            if g.max_qubit() >= n_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} addresses qubit {} on a {n_qubits}-qubit register",
                    g.max_qubit()
                )));
            }
            if let Gate::Cx { control, target } | Gate::Cz { control, target } = g {
                if control == target {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {i} has control == target == {control}"
                    )));
                }
            }
            if let Some(slot) = g.slot() {
                n_params = n_params.max(slot + 1);
            }
        }
        let mut used = vec![false; n_params];
        for g in &gates {
            if let Some(slot) = g.slot() {
                used[slot] = true;
            }
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::InvalidCircuit(format!(
                "parameter slot {missing} is never used"
            )));
        }
        Ok(Self {
            n_qubits,
            gates,
            n_params,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Parameterized gate occurrences in application order: (gate index, slot).
    pub fn parameterized_gates(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.gates
            .iter()
            .enumerate()
            .filter_map(|(i, g)| g.slot().map(|s| (i, s)))
    }
}
