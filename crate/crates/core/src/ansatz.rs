//! Circuit-family builders: the hardware-efficient Ry ansatz and a
//! product-of-RX ansatz with one parameter per qubit.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Which circuit family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzFamily {
    /// `depth` repetitions of [Ry layer; entangling CX layer] followed by a
    /// final Ry layer; (depth+1)·n parameters.
    RyHardwareEfficient,
    /// One RX rotation per qubit, no entanglers; n parameters.
    ProductRx,
}

/// Entangler topology for the Ry ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entanglement {
    /// CX(i → i+1) for i = 0..n-2.
    Linear,
    /// CX(i → j) for all i < j.
    Full,
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entanglement::Linear => write!(f, "linear"),
            Entanglement::Full => write!(f, "full"),
        }
    }
}

impl FromStr for Entanglement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Entanglement::Linear),
            "full" => Ok(Entanglement::Full),
            other => Err(Error::InvalidAnsatz(format!(
                "unknown entanglement `{other}` (expected linear or full)"
            ))),
        }
    }
}

/// Declarative ansatz description. `ProductRx` ignores depth and
/// entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub family: AnsatzFamily,
    pub n_qubits: usize,
    pub depth: usize,
    pub entanglement: Entanglement,
}

impl AnsatzSpec {
    pub fn ry(n_qubits: usize, depth: usize, entanglement: Entanglement) -> Self {
        Self {
            family: AnsatzFamily::RyHardwareEfficient,
            n_qubits,
            depth,
            entanglement,
        }
    }

    pub fn product_rx(n_qubits: usize) -> Self {
        Self {
            family: AnsatzFamily::ProductRx,
            n_qubits,
            depth: 0,
            entanglement: Entanglement::Linear,
        }
    }

    /// Number of parameters the built circuit will carry.
    pub fn n_params(&self) -> usize {
        match self.family {
            AnsatzFamily::RyHardwareEfficient => (self.depth + 1) * self.n_qubits,
            AnsatzFamily::ProductRx => self.n_qubits,
        }
    }
}

/// Build the circuit described by `spec`.
///
/// Parameter slots are assigned layer-major: slot = layer·n + qubit.
pub fn build(spec: &AnsatzSpec) -> Result<Circuit> {
    if spec.n_qubits == 0 {
        return Err(Error::InvalidAnsatz(
            "ansatz needs at least one qubit".into(),
        ));
    }
    let n = spec.n_qubits;
    let mut gates = Vec::new();
    match spec.family {
        AnsatzFamily::ProductRx => {
            for q in 0..n {
                gates.push(Gate::Rx { qubit: q, slot: q });
            }
        }
        AnsatzFamily::RyHardwareEfficient => {
            for layer in 0..=spec.depth {
                for q in 0..n {
                    gates.push(Gate::Ry {
                        qubit: q,
                        slot: layer * n + q,
                    });
                }
                if layer < spec.depth {
                    match spec.entanglement {
                        Entanglement::Linear => {
                            for q in 0..n.saturating_sub(1) {
                                gates.push(Gate::Cx {
                                    control: q,
                                    target: q + 1,
                                });
                            }
                        }
                        Entanglement::Full => {
                            for i in 0..n {
                                for j in i + 1..n {
                                    gates.push(Gate::Cx {
                                        control: i,
                                        target: j,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Circuit::new(n, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::statevector::{apply_circuit, zero_state};

    fn count_cx(c: &crate::circuit::Circuit) -> usize {
        c.gates()
            .iter()
            .filter(|g| matches!(g, Gate::Cx { .. }))
            .count()
    }

    #[test]
    fn ry_two_qubit_single_depth() {
        let c = build(&AnsatzSpec::ry(2, 1, Entanglement::Linear)).unwrap();
        assert_eq!(c.n_params(), 4);
        assert_eq!(count_cx(&c), 1);
    }

    #[test]
    fn ry_four_qubit_two_depth() {
        let c = build(&AnsatzSpec::ry(4, 2, Entanglement::Linear)).unwrap();
        assert_eq!(c.n_params(), 12);
        assert_eq!(count_cx(&c), 6);
    }

    #[test]
    fn full_entanglement_counts() {
        let c = build(&AnsatzSpec::ry(4, 1, Entanglement::Full)).unwrap();
        assert_eq!(c.n_params(), 8);
        assert_eq!(count_cx(&c), 6);
    }

    #[test]
    fn product_rx_has_no_entanglers() {
        let spec = AnsatzSpec::product_rx(8);
        let c = build(&spec).unwrap();
        assert_eq!(c.n_params(), 8);
        assert_eq!(count_cx(&c), 0);
        assert_eq!(spec.n_params(), 8);
    }

    #[test]
    fn param_count_formula_across_specs() {
        for n in 1..=5 {
            for d in 0..=3 {
                let spec = AnsatzSpec::ry(n, d, Entanglement::Linear);
                let c = build(&spec).unwrap();
                assert_eq!(c.n_params(), (d + 1) * n);
                assert_eq!(spec.n_params(), c.n_params());
            }
        }
    }

    #[test]
    fn zero_angles_fix_the_zero_state() {
        let c = build(&AnsatzSpec::ry(3, 2, Entanglement::Full)).unwrap();
        let theta = vec![0.0f64; c.n_params()];
        let out = apply_circuit(&c, &theta, &zero_state(3).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[0].re, 1.0);
        assert!(out.amplitudes()[1..].iter().all(|a| a.norm_sqr() == 0.0));
    }

    #[test]
    fn depth_zero_is_one_rotation_layer() {
        let c = build(&AnsatzSpec::ry(3, 0, Entanglement::Linear)).unwrap();
        assert_eq!(c.n_params(), 3);
        assert_eq!(count_cx(&c), 0);
    }

    #[test]
    fn rejects_empty_register() {
        assert!(build(&AnsatzSpec::product_rx(0)).is_err());
    }
}
