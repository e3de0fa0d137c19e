//! gorge: normalized-gradient optimizers benchmarked on variational
//! quantum eigensolver problems.
//!
//! The crate has three layers:
//!
//! - a small exact statevector simulator ([`statevector`], [`circuit`],
//!   [`ansatz`]) together with Pauli-sum Hamiltonians ([`pauli`]),
//! - objective/gradient plumbing ([`gradient`]) and a suite of first-order
//!   optimizers ([`optimizer`]) including normalized gradient descent and
//!   its history-based variant, whose per-block learning rates come from a
//!   box-constrained quadratic program ([`qp`]),
//! - benchmark problems ([`problems`]) and an experiment runner that
//!   produces CSV convergence traces ([`runner`]).
//!
//! All numeric code is generic over the scalar type via [`scalar::Real`]
//! (implemented for `f32` and `f64`); the `*64` aliases below pin the
//! default `f64` lane.

pub mod ansatz;
pub mod circuit;
pub mod error;
pub mod gradient;
mod linalg;
pub mod optimizer;
pub mod pauli;
pub mod problems;
pub mod qp;
pub mod runner;
pub mod scalar;
pub mod statevector;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` lane of [`pauli::Hamiltonian`].
pub type Hamiltonian64 = pauli::Hamiltonian<f64>;
/// `f64` lane of [`pauli::PauliTerm`].
pub type PauliTerm64 = pauli::PauliTerm<f64>;
/// `f64` lane of [`statevector::Statevector`].
pub type Statevector64 = statevector::Statevector<f64>;
/// `f64` lane of [`gradient::Objective`].
pub type Objective64 = gradient::Objective<f64>;
/// `f64` lane of [`optimizer::OptimizerConfig`].
pub type OptimizerConfig64 = optimizer::OptimizerConfig<f64>;
/// `f64` lane of [`optimizer::Optimizer`].
pub type Optimizer64 = optimizer::Optimizer<f64>;
/// `f64` lane of [`qp::QpSubproblem`].
pub type QpSubproblem64 = qp::QpSubproblem<f64>;
/// `f64` lane of [`problems::ProblemInstance`].
pub type ProblemInstance64 = problems::ProblemInstance<f64>;
/// `f64` lane of [`runner::RunConfig`].
pub type RunConfig64 = runner::RunConfig<f64>;
/// `f64` lane of [`runner::EnergyTrace`].
pub type EnergyTrace64 = runner::EnergyTrace<f64>;
