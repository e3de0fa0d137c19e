//! Pauli-string Hamiltonians.
//!
//! A Hamiltonian is a sum of weighted Pauli strings
//!
//!   H = Σ_k  c_k · P_k,   P_k ∈ {I, X, Y, Z}^⊗n,   c_k ∈ ℝ,
//!
//! stored dense (one operator per qubit, qubit 0 = leftmost character in
//! the text form). Expectation values are evaluated term by term with bit
//! manipulation in O(2^n) per term; the dense matrix built from explicit
//! Kronecker products serves as an independent oracle.
//!
//! The text interchange format is one term per line, `<coefficient>
//! <pauli-string>`, with `#` starting a comment.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{real, Real};
use crate::statevector::Statevector;
use num_complex::Complex;
use std::fmt;

/// Largest qubit count for which dense-matrix routines are allowed.
pub const DENSE_MAX_QUBITS: usize = 12;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// 2x2 matrix of the operator.
    fn matrix<T: Real>(self) -> [Complex<T>; 4] {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match self {
            Pauli::I => [one, zero, zero, one],
            Pauli::X => [zero, one, one, zero],
            Pauli::Y => [zero, -i, i, zero],
            Pauli::Z => [one, zero, zero, -one],
        }
    }
}

/// One weighted Pauli string: `coefficient · P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm<T> {
    pub coefficient: T,
    pub paulis: Vec<Pauli>,
}

impl<T: Real> PauliTerm<T> {
    pub fn new(coefficient: T, paulis: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::InvalidConfig(
                "pauli term coefficient must be finite".into(),
            ));
        }
        if paulis.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        Ok(Self {
            coefficient,
            paulis,
        })
    }

    /// Text form of the operator part, qubit 0 first.
    pub fn pauli_string(&self) -> String {
        self.paulis.iter().map(|p| p.as_char()).collect()
    }

    /// Bit masks driving the sparse action of the string on basis states:
    /// `xmask` holds the flipped qubits (X and Y), `sign_mask` the qubits
    /// contributing a (-1)^bit phase (Z and Y), and the returned count is
    /// the number of Y factors (each contributes a global i).
    fn masks(&self) -> (usize, usize, u32) {
        let n = self.paulis.len();
        let mut xmask = 0usize;
        let mut sign_mask = 0usize;
        let mut y_count = 0u32;
        for (q, p) in self.paulis.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => xmask |= bit,
                Pauli::Y => {
                    xmask |= bit;
                    sign_mask |= bit;
                    y_count += 1;
                }
                Pauli::Z => sign_mask |= bit,
            }
        }
        (xmask, sign_mask, y_count)
    }
}

/// Sum of weighted Pauli strings on a fixed qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T> {
    n_qubits: usize,
    terms: Vec<PauliTerm<T>>,
}

impl<T: Real> Hamiltonian<T> {
    /// Build from a non-empty term list; all strings must share one length.
    pub fn new(terms: Vec<PauliTerm<T>>) -> Result<Self> {
        let n_qubits = terms.first().ok_or(Error::EmptyHamiltonian)?.paulis.len();
        for t in &terms {
            if t.paulis.len() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    actual: t.paulis.len(),
                });
            }
            if !t.coefficient.is_finite() {
                return Err(Error::InvalidConfig(
                    "pauli term coefficient must be finite".into(),
                ));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    /// Parse the text format: one `<coefficient> <pauli-string>` per line,
    /// `#` comments, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms: Vec<PauliTerm<T>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let coeff_tok = parts.next().unwrap();
            let pauli_tok = parts.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected `<coefficient> <pauli-string>`".into(),
            })?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "trailing tokens after pauli string".into(),
                });
            }
            let coeff: f64 = coeff_tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("malformed coefficient `{coeff_tok}`"),
            })?;
            if !coeff.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("coefficient `{coeff_tok}` is not finite"),
                });
            }
            let mut paulis = Vec::with_capacity(pauli_tok.len());
            for c in pauli_tok.chars() {
                paulis.push(Pauli::from_char(c).ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("`{c}` is not one of I, X, Y, Z"),
                })?);
            }
            if let Some(first) = terms.first() {
                if paulis.len() != first.paulis.len() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "pauli string length {} differs from {}",
                            paulis.len(),
                            first.paulis.len()
                        ),
                    });
                }
            }
            terms.push(PauliTerm::new(real(coeff), paulis)?);
        }
        Self::new(terms)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    /// Hilbert-space dimension 2^n.
    pub fn dimension(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Merge duplicate Pauli strings, summing their coefficients.
    /// First-occurrence order is preserved.
    pub fn canonicalize(&self) -> Self {
        let mut merged: Vec<PauliTerm<T>> = Vec::new();
        for term in &self.terms {
            match merged.iter_mut().find(|m| m.paulis == term.paulis) {
                Some(m) => m.coefficient += term.coefficient,
                None => merged.push(term.clone()),
            }
        }
        Self {
            n_qubits: self.n_qubits,
            terms: merged,
        }
    }

    /// Expectation value ⟨ψ|H|ψ⟩ of a unit state.
    ///
    /// Contributions are accumulated term by term in declaration order so
    /// the result is bit-reproducible.
    pub fn expectation(&self, psi: &Statevector<T>) -> Result<T> {
        if psi.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: psi.dimension(),
            });
        }
        let deviation = (psi.norm_sqr() - T::one()).abs();
        let norm_tol = real::<T>(1e-8).max(T::epsilon() * real(1e3));
        if deviation > norm_tol {
            return Err(Error::NotNormalized {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }

        let amps = psi.amplitudes();
        let mut total = Complex::new(T::zero(), T::zero());
        let coeff_scale: T = self.terms.iter().map(|t| t.coefficient.abs()).sum();
        for term in &self.terms {
            let (xmask, sign_mask, y_count) = term.masks();
            let iphase: Complex<T> = match y_count % 4 {
                0 => Complex::new(T::one(), T::zero()),
                1 => Complex::new(T::zero(), T::one()),
                2 => Complex::new(-T::one(), T::zero()),
                _ => Complex::new(T::zero(), -T::one()),
            };
            let mut acc = Complex::new(T::zero(), T::zero());
            for (j, amp) in amps.iter().enumerate() {
                let target = j ^ xmask;
                let mut v = amps[target].conj() * *amp;
                if (j & sign_mask).count_ones() % 2 == 1 {
                    v = -v;
                }
                acc += v;
            }
            total += acc * iphase * Complex::new(term.coefficient, T::zero());
        }

        // Hermitian observable on a (near-)unit state: the imaginary part is
        // pure rounding noise.
        let tol = real::<T>(1e-10).max(T::epsilon() * real(256.0) * coeff_scale.max(T::one()));
        assert!(
            total.im.abs() < tol,
            "expectation value acquired an imaginary part"
        );
        Ok(total.re)
    }

    /// Dense 2^n x 2^n matrix of the Hamiltonian (row-major), built by
    /// explicit Kronecker products. Test oracle; guarded to n ≤ 12.
    pub fn dense_matrix(&self) -> Result<Vec<Complex<T>>> {
        if self.n_qubits > DENSE_MAX_QUBITS {
            return Err(Error::QubitCount {
                n: self.n_qubits,
                min: 1,
                max: DENSE_MAX_QUBITS,
            });
        }
        let dim = self.dimension();
        let mut out = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for term in &self.terms {
            let mut m = vec![Complex::new(T::one(), T::zero())]; // 1x1 seed
            let mut md = 1usize;
            for p in &term.paulis {
                m = kron(&m, md, &p.matrix::<T>(), 2);
                md *= 2;
            }
            let c = Complex::new(term.coefficient, T::zero());
            for (o, v) in out.iter_mut().zip(m.iter()) {
                *o += *v * c;
            }
        }
        Ok(out)
    }

    /// Full spectrum, ascending, by dense diagonalization.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let m = self.dense_matrix()?;
        Ok(linalg::hermitian_eigenvalues(&m, self.dimension()))
    }

    /// Exact ground-state energy: smallest eigenvalue of the dense matrix.
    pub fn ground_energy_exact(&self) -> Result<T> {
        let m = self.dense_matrix()?;
        Ok(linalg::hermitian_ground(&m, self.dimension()))
    }
}

impl<T: Real> fmt::Display for Hamiltonian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} {}", term.coefficient, term.pauli_string())?;
        }
        Ok(())
    }
}

/// Kronecker product of an `an x an` and a `bn x bn` matrix (row-major).
fn kron<T: Real>(a: &[Complex<T>], an: usize, b: &[Complex<T>], bn: usize) -> Vec<Complex<T>> {
    let n = an * bn;
    let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
    for ai in 0..an {
        for aj in 0..an {
            let av = a[ai * an + aj];
            for bi in 0..bn {
                for bj in 0..bn {
                    out[(ai * bn + bi) * n + (aj * bn + bj)] = av * b[bi * bn + bj];
                }
            }
        }
    }
    out
}

/// The two-qubit toy Hamiltonian α(ZI + IZ) + β(XX) with (α, β) = (0.4, 0.2).
pub fn h2_hamiltonian<T: Real>() -> Hamiltonian<T> {
    let alpha = real::<T>(0.4);
    let beta = real::<T>(0.2);
    Hamiltonian::new(vec![
        PauliTerm::new(alpha, vec![Pauli::Z, Pauli::I]).unwrap(),
        PauliTerm::new(alpha, vec![Pauli::I, Pauli::Z]).unwrap(),
        PauliTerm::new(beta, vec![Pauli::X, Pauli::X]).unwrap(),
    ])
    .unwrap()
}

/// Open-chain transverse-field Ising Hamiltonian
/// Σ_{i<n-1} Z_i Z_{i+1} + Σ_i X_i.
pub fn tfim_hamiltonian<T: Real>(n: usize) -> Result<Hamiltonian<T>> {
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    let mut terms = Vec::with_capacity(2 * n - 1);
    for i in 0..n - 1 {
        let mut paulis = vec![Pauli::I; n];
        paulis[i] = Pauli::Z;
        paulis[i + 1] = Pauli::Z;
        terms.push(PauliTerm::new(T::one(), paulis)?);
    }
    for i in 0..n {
        let mut paulis = vec![Pauli::I; n];
        paulis[i] = Pauli::X;
        terms.push(PauliTerm::new(T::one(), paulis)?);
    }
    Hamiltonian::new(terms)
}
