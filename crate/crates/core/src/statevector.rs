//! Exact statevector simulation.
//!
//! States live on 2^n complex amplitudes with qubit 0 mapped to the most
//! significant bit of the basis index (matching the leftmost-character
//! convention of the Pauli text format). Rotation gates use the half-angle
//! convention R_P(φ) = exp(-i φ P / 2), under which the ±π/2 parameter
//! shift rule is exact. Gates are applied in place by stride iteration; no
//! gate matrices are materialized. Global phase is not normalized away.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use num_complex::Complex;

/// Largest register accepted by [`zero_state`] (16 MiB of f64 amplitudes).
pub const MAX_QUBITS: usize = 20;

/// A normalized pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector<T> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> Statevector<T> {
    /// Wrap an amplitude vector. The length must be a power of two and the
    /// norm must be 1 within 1e-8.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                actual: dim,
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let sv = Self { n_qubits, amps };
        let deviation = (sv.norm_sqr() - T::one()).abs();
        let norm_tol = real::<T>(1e-8).max(T::epsilon() * real(1e3));
        if deviation > norm_tol {
            return Err(Error::NotNormalized {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// Amplitude of the all-zeros basis state ⟨0…0|ψ⟩.
    pub fn amplitude_zero(&self) -> Complex<T> {
        self.amps[0]
    }

    /// Σ |amplitude|².
    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: other.dimension(),
            });
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.amps.iter().zip(other.amps.iter()) {
            acc += a.conj() * *b;
        }
        Ok(acc)
    }
}

/// |0⟩^⊗n. Accepts 1 ≤ n ≤ 20.
pub fn zero_state<T: Real>(n: usize) -> Result<Statevector<T>> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount {
            n,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
    amps[0] = Complex::new(T::one(), T::zero());
    Ok(Statevector { n_qubits: n, amps })
}

/// Apply U(θ) to `psi0`, returning the evolved state.
pub fn apply_circuit<T: Real>(
    circuit: &Circuit,
    theta: &[T],
    psi0: &Statevector<T>,
) -> Result<Statevector<T>> {
    apply_circuit_shifted(circuit, theta, psi0, None)
}

/// Like [`apply_circuit`], but with `delta` added to the angle of the single
/// gate occurrence at `gate_index`. This is the primitive behind per-gate
/// parameter shifts when one slot feeds several gates.
pub(crate) fn apply_circuit_shifted<T: Real>(
    circuit: &Circuit,
    theta: &[T],
    psi0: &Statevector<T>,
    shift: Option<(usize, T)>,
) -> Result<Statevector<T>> {
    if theta.len() != circuit.n_params() {
        return Err(Error::ParameterCount {
            expected: circuit.n_params(),
            actual: theta.len(),
        });
    }
    if psi0.dimension() != 1 << circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << circuit.n_qubits(),
            actual: psi0.dimension(),
        });
    }

    let n = circuit.n_qubits();
    let mut amps = psi0.amps.clone();
    for (index, gate) in circuit.gates().iter().enumerate() {
        let angle_of = |slot: usize| {
            let mut angle = theta[slot];
            if let Some((shift_index, delta)) = shift {
                if shift_index == index {
                    angle += delta;
                }
            }
            angle
        };
        match *gate {
            Gate::Rx { qubit, slot } => apply_rx(&mut amps, n, qubit, angle_of(slot)),
            Gate::Ry { qubit, slot } => apply_ry(&mut amps, n, qubit, angle_of(slot)),
            Gate::Rz { qubit, slot } => apply_rz(&mut amps, n, qubit, angle_of(slot)),
            Gate::Cx { control, target } => apply_cx(&mut amps, n, control, target),
            Gate::Cz { control, target } => apply_cz(&mut amps, n, control, target),
        }
        debug_assert!({
            let norm: T = amps
                .iter()
                .map(|a| a.norm_sqr())
                .fold(T::zero(), |s, x| s + x);
            (norm - T::one()).abs() < real::<T>(1e-10).max(T::epsilon() * real(1e4))
        });
    }
    Ok(Statevector { n_qubits: n, amps })
}

#[inline]
fn bit_mask(n: usize, qubit: usize) -> usize {
    1usize << (n - 1 - qubit)
}

/// Visit each amplitude pair (i, i|mask) with the qubit bit clear in i.
fn for_each_pair<F: FnMut(usize, usize)>(len: usize, mask: usize, mut f: F) {
    for i in 0..len {
        if i & mask == 0 {
            f(i, i | mask);
        }
    }
}

fn apply_rx<T: Real>(amps: &mut [Complex<T>], n: usize, qubit: usize, angle: T) {
    let half = angle / real(2.0);
    let c = half.cos();
    let s = half.sin();
    let mis = Complex::new(T::zero(), -s);
    let mask = bit_mask(n, qubit);
    for_each_pair(amps.len(), mask, |i, j| {
        let a = amps[i];
        let b = amps[j];
        amps[i] = a * c + b * mis;
        amps[j] = a * mis + b * c;
    });
}

fn apply_ry<T: Real>(amps: &mut [Complex<T>], n: usize, qubit: usize, angle: T) {
    let half = angle / real(2.0);
    let c = half.cos();
    let s = half.sin();
    let mask = bit_mask(n, qubit);
    for_each_pair(amps.len(), mask, |i, j| {
        let a = amps[i];
        let b = amps[j];
        amps[i] = a * c - b * s;
        amps[j] = a * s + b * c;
    });
}

fn apply_rz<T: Real>(amps: &mut [Complex<T>], n: usize, qubit: usize, angle: T) {
    let half = angle / real(2.0);
    let phase0 = Complex::from_polar(T::one(), -half);
    let phase1 = Complex::from_polar(T::one(), half);
    let mask = bit_mask(n, qubit);
    for (i, amp) in amps.iter_mut().enumerate() {
        *amp *= if i & mask == 0 { phase0 } else { phase1 };
    }
}

fn apply_cx<T: Real>(amps: &mut [Complex<T>], n: usize, control: usize, target: usize) {
    let cmask = bit_mask(n, control);
    let tmask = bit_mask(n, target);
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

fn apply_cz<T: Real>(amps: &mut [Complex<T>], n: usize, control: usize, target: usize) {
    let cmask = bit_mask(n, control);
    let tmask = bit_mask(n, target);
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & cmask != 0 && i & tmask != 0 {
            *amp = -*amp;
        }
    }
}
