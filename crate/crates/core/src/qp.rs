//! The learning-rate subproblem of historical NGD:
//!
//!   minimize  h(y) = yᵀ A y + C y   subject to  k ≤ y ≤ 0,
//!
//! where A is the Gram matrix of the block's normalized gradients
//! (unit diagonal, PSD) and C_j = 2(ε/κ)(1 + Σ_{i<j} δ_{i,j}). The box
//! lower bound k < 0 carries the stabilization role when A is singular
//! (δ → ±1); no regularization is added.
//!
//! The solver is cyclic coordinate descent with exact per-coordinate
//! minimization plus a periodic active-set refinement that solves the free
//! subspace directly. It is deterministic and meets a 1e-8 KKT contract
//! for the small block sizes used here.

use crate::error::{Error, Result};
use crate::linalg::solve_linear;
use crate::scalar::{dot, real, Real};

/// Box-constrained quadratic subproblem `min yᵀAy + Cy, k ≤ y ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpSubproblem<T> {
    /// Gram matrix, row-major m×m, symmetric with unit diagonal.
    gram: Vec<T>,
    /// Linear coefficients, length m.
    linear: Vec<T>,
    /// Lower bound k < 0; the upper bound is 0.
    lower: T,
}

impl<T: Real> QpSubproblem<T> {
    pub fn new(gram: Vec<T>, linear: Vec<T>, lower: T) -> Result<Self> {
        let m = linear.len();
        if gram.len() != m * m || m == 0 {
            return Err(Error::InvalidConfig(
                "gram matrix shape does not match linear coefficients".into(),
            ));
        }
        if lower >= T::zero() {
            return Err(Error::InvalidConfig(
                "qp lower bound must be negative".into(),
            ));
        }
        Ok(Self {
            gram,
            linear,
            lower,
        })
    }

    pub fn len(&self) -> usize {
        self.linear.len()
    }

    pub fn is_empty(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn gram(&self) -> &[T] {
        &self.gram
    }

    pub fn linear(&self) -> &[T] {
        &self.linear
    }

    pub fn lower_bound(&self) -> T {
        self.lower
    }

    /// h(y) = yᵀAy + Cy.
    pub fn objective(&self, y: &[T]) -> T {
        let m = self.len();
        let mut quad = T::zero();
        for i in 0..m {
            for j in 0..m {
                quad += y[i] * self.gram[i * m + j] * y[j];
            }
        }
        quad + dot(&self.linear, y)
    }

    /// ∇h(y) = 2Ay + C.
    fn gradient(&self, y: &[T]) -> Vec<T> {
        let m = self.len();
        let two = real::<T>(2.0);
        (0..m)
            .map(|i| {
                let mut s = T::zero();
                for j in 0..m {
                    s += self.gram[i * m + j] * y[j];
                }
                two * s + self.linear[i]
            })
            .collect()
    }

    /// Largest Karush-Kuhn-Tucker violation of `y`: |∇_i h| on interior
    /// coordinates, the wrong-signed part of ∇_i h on active bounds.
    pub fn kkt_residual(&self, y: &[T]) -> T {
        let grad = self.gradient(y);
        let mut worst = T::zero();
        for i in 0..self.len() {
            let v = if y[i] >= T::zero() {
                grad[i].max(T::zero()) // at upper bound 0: need ∇ ≤ 0
            } else if y[i] <= self.lower {
                (-grad[i]).max(T::zero()) // at lower bound k: need ∇ ≥ 0
            } else {
                grad[i].abs()
            };
            worst = worst.max(v);
        }
        worst
    }
}

/// Assemble the subproblem from a window of unit gradients.
///
/// `A[i][j] = ⟨ĝ_i, ĝ_j⟩` with the diagonal pinned to 1, and
/// `C[j] = 2(ε/κ)(1 + Σ_{i<j} A[i][j])`.
pub fn build_qp<T: Real>(
    ghat_history: &[Vec<T>],
    eps_over_kappa: T,
    lower_bound: T,
) -> Result<QpSubproblem<T>> {
    let m = ghat_history.len();
    if m == 0 {
        return Err(Error::InvalidConfig("empty gradient history".into()));
    }
    if eps_over_kappa <= T::zero() {
        return Err(Error::InvalidConfig(
            "learning rate must be positive".into(),
        ));
    }
    let unit_tol = real::<T>(1e-10).max(T::epsilon() * real(1e3));
    for g in ghat_history {
        if g.len() != ghat_history[0].len() {
            return Err(Error::DimensionMismatch {
                expected: ghat_history[0].len(),
                actual: g.len(),
            });
        }
        let norm = dot(g, g).sqrt();
        if (norm - T::one()).abs() > unit_tol {
            return Err(Error::InvalidConfig(format!(
                "gradient history entry is not unit norm (|g| = {norm})"
            )));
        }
    }

    let mut gram = vec![T::zero(); m * m];
    for i in 0..m {
        gram[i * m + i] = T::one();
        for j in i + 1..m {
            let d = dot(&ghat_history[i], &ghat_history[j]);
            gram[i * m + j] = d;
            gram[j * m + i] = d;
        }
    }
    let two = real::<T>(2.0);
    let linear: Vec<T> = (0..m)
        .map(|j| {
            let mut s = T::one();
            for i in 0..j {
                s += gram[i * m + j];
            }
            two * eps_over_kappa * s
        })
        .collect();
    QpSubproblem::new(gram, linear, lower_bound)
}

/// Solve the box QP to a KKT residual of at most 1e-8 (typically far
/// tighter). Deterministic; the PSD box problem always attains a minimum.
pub fn solve_box_qp<T: Real>(qp: &QpSubproblem<T>) -> Vec<T> {
    let m = qp.len();
    let two = real::<T>(2.0);
    let tol = real::<T>(1e-10).max(T::epsilon() * real(1e2));
    let lower = qp.lower_bound();

    let clamp = |v: T| v.max(lower).min(T::zero());
    let mut y = vec![T::zero(); m];

    // Cyclic coordinate descent; the unit diagonal makes the exact
    // per-coordinate step y_i <- clamp(y_i - grad_i / 2).
    let max_passes = 500_000usize;
    for pass in 0..max_passes {
        let mut moved = T::zero();
        for i in 0..m {
            let mut s = T::zero();
            for j in 0..m {
                s += qp.gram()[i * m + j] * y[j];
            }
            let grad_i = two * s + qp.linear()[i];
            let next = clamp(y[i] - grad_i / two);
            moved = moved.max((next - y[i]).abs());
            y[i] = next;
        }

        if qp.kkt_residual(&y) <= tol {
            break;
        }

        // Periodic active-set refinement: solve the free subspace exactly
        // with the bound coordinates fixed, accept only a feasible
        // KKT-clean candidate.
        if pass % 16 == 15 || moved == T::zero() {
            if let Some(candidate) = refine_active_set(qp, &y) {
                if qp.kkt_residual(&candidate) <= tol
                    && qp.objective(&candidate) <= qp.objective(&y) + tol
                {
                    y = candidate;
                    break;
                }
            }
            if moved == T::zero() {
                break;
            }
        }
    }
    debug_assert!(y.iter().all(|&v| v >= lower && v <= T::zero()));
    y
}

/// Solve `2 A_ff y_f = -(C_f + 2 A_fb y_b)` for the coordinates of `y`
/// strictly inside the box; returns `None` if the free block is singular
/// or the solution leaves the box.
fn refine_active_set<T: Real>(qp: &QpSubproblem<T>, y: &[T]) -> Option<Vec<T>> {
    let m = qp.len();
    let two = real::<T>(2.0);
    let free: Vec<usize> = (0..m)
        .filter(|&i| y[i] > qp.lower_bound() && y[i] < T::zero())
        .collect();
    if free.is_empty() {
        return None;
    }
    let nf = free.len();
    let mut a = vec![T::zero(); nf * nf];
    let mut b = vec![T::zero(); nf];
    for (fi, &i) in free.iter().enumerate() {
        let mut rhs = qp.linear()[i];
        for j in 0..m {
            if let Some(fj) = free.iter().position(|&f| f == j) {
                a[fi * nf + fj] = two * qp.gram()[i * m + j];
            } else {
                rhs += two * qp.gram()[i * m + j] * y[j];
            }
        }
        b[fi] = -rhs;
    }
    let solved = solve_linear(a, b, nf)?;
    let mut candidate = y.to_vec();
    for (fi, &i) in free.iter().enumerate() {
        if solved[fi] < qp.lower_bound() || solved[fi] > T::zero() {
            return None;
        }
        candidate[i] = solved[fi];
    }
    Some(candidate)
}

/// Golden-section branch point (√5 − 1)/2 of the two-step closed form.
pub fn ngd2_branch_point<T: Real>() -> T {
    (real::<T>(5.0).sqrt() - T::one()) / real::<T>(2.0)
}

/// Closed-form two-step rates (η₁, η₂) as a function of δ = ⟨ĝ_t, ĝ_{t+1}⟩:
///
/// - for −1 < δ ≤ (√5−1)/2: η₁ = −(ε/κ)(1−δ−δ²)/(1−δ²), η₂ = −(ε/κ)/(1−δ²);
/// - for (√5−1)/2 < δ ≤ 1: η₁ = 0, η₂ = −(ε/κ)(1+δ).
pub fn ngd2_closed_form<T: Real>(delta: T, eps_over_kappa: T) -> Result<(T, T)> {
    check_delta(delta)?;
    let one = T::one();
    if delta <= ngd2_branch_point() {
        let denom = one - delta * delta;
        let eta1 = -eps_over_kappa * (one - delta - delta * delta) / denom;
        let eta2 = -eps_over_kappa / denom;
        Ok((eta1, eta2))
    } else {
        Ok((T::zero(), -eps_over_kappa * (one + delta)))
    }
}

/// Guaranteed two-step squared-distance decrease c·(ε/κ)² at the closed-form
/// rates: (2−δ²)/(1−δ²)·(ε/κ)² on the first branch, (1+δ)²(ε/κ)² on the
/// second. Always at least 2(ε/κ)², the decrease of two ordinary NGD steps.
pub fn certified_decrease<T: Real>(delta: T, eps_over_kappa: T) -> Result<T> {
    check_delta(delta)?;
    let one = T::one();
    let two = real::<T>(2.0);
    let rate2 = eps_over_kappa * eps_over_kappa;
    if delta <= ngd2_branch_point() {
        Ok((two - delta * delta) / (one - delta * delta) * rate2)
    } else {
        Ok((one + delta) * (one + delta) * rate2)
    }
}

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if delta <= -T::one() || delta > T::one() || !delta.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "delta = {delta} outside (-1, 1]"
        )));
    }
    Ok(())
}
