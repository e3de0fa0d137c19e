//! Dense symmetric/Hermitian eigenvalue routines and a small linear solver.
//!
//! A complex Hermitian matrix M = A + iB is embedded into the real
//! symmetric matrix [[A, -B], [B, A]], whose spectrum is that of M with
//! every multiplicity doubled. The symmetric problem is reduced to
//! tridiagonal form by Householder reflections and eigenvalues are then
//! located by Sturm-sequence bisection, which is robust for the clustered
//! spectra Pauli Hamiltonians produce.

use crate::scalar::{real, Real};
use num_complex::Complex;

/// Householder reduction of a symmetric matrix (row-major, `n x n`) to
/// tridiagonal form. Returns the diagonal `d` and sub-diagonal `e`
/// (`e[0]` is unused and zero). The input buffer is destroyed.
fn householder_tridiagonal<T: Real>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    debug_assert_eq!(a.len(), n * n);
    let mut e = vec![T::zero(); n];

    for k in 0..n.saturating_sub(2) {
        let sigma2: T = (k + 1..n).map(|i| a[i * n + k] * a[i * n + k]).sum();
        let sigma = sigma2.sqrt();
        if sigma == T::zero() {
            e[k + 1] = T::zero();
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 >= T::zero() { -sigma } else { sigma };

        // v = x - alpha * e1 over rows k+1..n
        let mut v = vec![T::zero(); n];
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let h = sigma2 - x0 * alpha; // v.v / 2
        if h == T::zero() {
            e[k + 1] = alpha;
            continue;
        }

        // p = B v / h over the trailing block
        let mut p = vec![T::zero(); n];
        for i in k + 1..n {
            let mut s = T::zero();
            for j in k + 1..n {
                s += a[i * n + j] * v[j];
            }
            p[i] = s / h;
        }
        let vp: T = (k + 1..n).map(|i| v[i] * p[i]).sum();
        let kappa = vp / (h + h);
        // q = p - kappa v; B <- B - v q^T - q v^T
        for i in k + 1..n {
            p[i] -= kappa * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = a[i * n + j] - v[i] * p[j] - p[i] * v[j];
            }
        }
        e[k + 1] = alpha;
    }
    if n >= 2 {
        e[n - 1] = a[(n - 1) * n + (n - 2)];
    }
    let d: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`
/// (Sturm sequence sign count).
fn sturm_count<T: Real>(d: &[T], e: &[T], x: T, guard: T) -> usize {
    let n = d.len();
    let mut count = 0;
    let mut q = d[0] - x;
    if q < T::zero() {
        count += 1;
    }
    for i in 1..n {
        let den = if q == T::zero() { guard } else { q };
        q = (d[i] - x) - e[i] * e[i] / den;
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// `k`-th smallest eigenvalue (0-indexed) of a symmetric tridiagonal matrix.
fn tridiagonal_eigenvalue_k<T: Real>(d: &[T], e: &[T], k: usize) -> T {
    let n = d.len();
    debug_assert!(k < n);
    if n == 1 {
        return d[0];
    }
    // Gershgorin bounds.
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let left = if i > 0 { e[i].abs() } else { T::zero() };
        let right = if i + 1 < n { e[i + 1].abs() } else { T::zero() };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    let span = (hi - lo).max(T::one());
    let guard = T::epsilon() * span;
    lo -= guard;
    hi += guard;

    // Bisection; the iteration count bottoms out at scalar precision.
    let two = real::<T>(2.0);
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid, guard) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / two
}

/// All eigenvalues of a real symmetric matrix, ascending. Consumes the buffer.
pub(crate) fn symmetric_eigenvalues<T: Real>(mut a: Vec<T>, n: usize) -> Vec<T> {
    let (d, e) = householder_tridiagonal(&mut a, n);
    (0..n)
        .map(|k| tridiagonal_eigenvalue_k(&d, &e, k))
        .collect()
}

/// Smallest eigenvalue of a real symmetric matrix. Consumes the buffer.
pub(crate) fn symmetric_ground<T: Real>(mut a: Vec<T>, n: usize) -> T {
    let (d, e) = householder_tridiagonal(&mut a, n);
    tridiagonal_eigenvalue_k(&d, &e, 0)
}

/// Real symmetric embedding [[Re M, -Im M], [Im M, Re M]] of a Hermitian
/// matrix (row-major, `dim x dim`).
fn hermitian_embedding<T: Real>(m: &[Complex<T>], dim: usize) -> Vec<T> {
    debug_assert_eq!(m.len(), dim * dim);
    let n = 2 * dim;
    let mut s = vec![T::zero(); n * n];
    for i in 0..dim {
        for j in 0..dim {
            let z = m[i * dim + j];
            s[i * n + j] = z.re;
            s[i * n + (j + dim)] = -z.im;
            s[(i + dim) * n + j] = z.im;
            s[(i + dim) * n + (j + dim)] = z.re;
        }
    }
    s
}

/// Smallest eigenvalue of a complex Hermitian matrix.
pub(crate) fn hermitian_ground<T: Real>(m: &[Complex<T>], dim: usize) -> T {
    symmetric_ground(hermitian_embedding(m, dim), 2 * dim)
}

/// All eigenvalues of a complex Hermitian matrix, ascending.
///
/// The embedding doubles every multiplicity, so adjacent pairs of the
/// 2*dim sorted values collapse back to the spectrum of M.
pub(crate) fn hermitian_eigenvalues<T: Real>(m: &[Complex<T>], dim: usize) -> Vec<T> {
    let all = symmetric_eigenvalues(hermitian_embedding(m, dim), 2 * dim);
    (0..dim).map(|k| all[2 * k]).collect()
}

/// Solve `a x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is numerically zero.
pub(crate) fn solve_linear<T: Real>(mut a: Vec<T>, mut b: Vec<T>, n: usize) -> Option<Vec<T>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale: T = a
        .iter()
        .fold(T::zero(), |acc, &x| acc.max(x.abs()))
        .max(T::one());
    let tiny = T::epsilon() * scale * real::<T>(16.0);

    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col].abs() <= tiny {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == T::zero() {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[row * n + j] -= factor * v;
            }
            let bv = b[col];
            b[row] -= factor * bv;
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for j in col + 1..n {
            s -= a[col * n + j] * b[j];
        }
        b[col] = s / a[col * n + col];
    }
    Some(b)
}
