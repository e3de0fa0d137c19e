//! First-order optimizers behind one stepping contract: gradient descent,
//! momentum, Nesterov acceleration, ADAM, normalized gradient descent
//! (NGD), normalized NAG, and history-based NGD (`ngdm`), whose per-block
//! learning rates are chosen by the box QP in [`crate::qp`].
//!
//! The driver API is `begin` + `advance`: `begin` evaluates the gradient
//! at the start point, and each `advance` consumes the pending gradient,
//! steps, and evaluates the gradient at the next query point (the iterate
//! for most algorithms, the lookahead point for NAG). Every returned
//! [`StepRecord`] therefore corresponds to exactly one gradient
//! evaluation, which keeps iteration counts comparable across algorithms
//! — an `ngdm` block of size m yields m records for its m evaluations.

use crate::error::{Error, Result};
use crate::qp::{build_qp, solve_box_qp};
use crate::scalar::{l2_distance, l2_norm, real, Real};
use std::fmt;
use std::str::FromStr;

/// Algorithm selector; the strings are the CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Gd,
    Momentum,
    Nag,
    Adam,
    Ngd,
    Nnag,
    Ngdm,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algorithm::Gd => "gd",
            Algorithm::Momentum => "momentum",
            Algorithm::Nag => "nag",
            Algorithm::Adam => "adam",
            Algorithm::Ngd => "ngd",
            Algorithm::Nnag => "nnag",
            Algorithm::Ngdm => "ngdm",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(Algorithm::Gd),
            "momentum" => Ok(Algorithm::Momentum),
            "nag" => Ok(Algorithm::Nag),
            "adam" => Ok(Algorithm::Adam),
            "ngd" => Ok(Algorithm::Ngd),
            "nnag" => Ok(Algorithm::Nnag),
            "ngdm" => Ok(Algorithm::Ngdm),
            other => Err(Error::InvalidConfig(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// Hyperparameters for every algorithm. `learning_rate` doubles as ε/κ
/// for the NGD variants.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig<T> {
    pub algorithm: Algorithm,
    pub learning_rate: T,
    /// Momentum coefficient β.
    pub momentum: T,
    pub beta1: T,
    pub beta2: T,
    pub adam_epsilon: T,
    /// Block size m of historical NGD.
    pub history_length: usize,
    /// Negative lower bound k of the learning-rate QP.
    pub qp_lower_bound: T,
    /// Gradient norms below this are treated as exactly stationary.
    pub norm_tolerance: T,
}

impl<T: Real> OptimizerConfig<T> {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            learning_rate: real(0.05),
            momentum: real(0.9),
            beta1: real(0.9),
            beta2: real(0.999),
            adam_epsilon: real(1e-8),
            history_length: 2,
            qp_lower_bound: real(-1000.0),
            norm_tolerance: real(1e-12),
        }
    }

    pub fn with_learning_rate(mut self, eta: T) -> Self {
        self.learning_rate = eta;
        self
    }

    pub fn with_momentum(mut self, beta: T) -> Self {
        self.momentum = beta;
        self
    }

    pub fn with_adam_betas(mut self, beta1: T, beta2: T) -> Self {
        self.beta1 = beta1;
        self.beta2 = beta2;
        self
    }

    pub fn with_adam_epsilon(mut self, eps: T) -> Self {
        self.adam_epsilon = eps;
        self
    }

    pub fn with_history_length(mut self, m: usize) -> Self {
        self.history_length = m;
        self
    }

    pub fn with_qp_lower_bound(mut self, k: T) -> Self {
        self.qp_lower_bound = k;
        self
    }

    pub fn with_norm_tolerance(mut self, tol: T) -> Self {
        self.norm_tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > T::zero()) {
            return Err(Error::InvalidConfig(
                "learning rate must be positive".into(),
            ));
        }
        for (name, v) in [
            ("momentum", self.momentum),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
        ] {
            if !(v >= T::zero() && v < T::one()) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1)")));
            }
        }
        if !(self.adam_epsilon > T::zero()) {
            return Err(Error::InvalidConfig("adam epsilon must be positive".into()));
        }
        if self.history_length == 0 {
            return Err(Error::InvalidConfig(
                "history length m must be at least 1".into(),
            ));
        }
        if !(self.qp_lower_bound < T::zero()) {
            return Err(Error::InvalidConfig(
                "qp lower bound k must be negative".into(),
            ));
        }
        if !(self.norm_tolerance > T::zero()) {
            return Err(Error::InvalidConfig(
                "norm tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// ĝ = g / ‖g‖. Fails with [`Error::VanishingGradient`] when ‖g‖ < tol.
pub fn normalize<T: Real>(g: &[T], tol: T) -> Result<Vec<T>> {
    let norm = l2_norm(g);
    if norm < tol {
        return Err(Error::VanishingGradient);
    }
    Ok(g.iter().map(|&x| x / norm).collect())
}

/// One trace-visible point produced by [`Optimizer::advance`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<T> {
    /// The iterate after this update.
    pub point: Vec<T>,
    /// Norm of the raw gradient evaluated at this iteration's query point.
    pub grad_norm: T,
    /// Euclidean length of the update that produced `point`.
    pub step_norm: T,
}

/// Mutable optimizer state for one run.
#[derive(Debug, Clone)]
pub struct Optimizer<T> {
    config: OptimizerConfig<T>,
    x: Vec<T>,
    step_index: usize,
    /// Momentum buffer m_t.
    velocity: Vec<T>,
    adam_m: Vec<T>,
    adam_v: Vec<T>,
    /// ρ_{t-1} of the Nesterov recursion; starts at ρ_0 = 1.
    rho_prev: T,
    x_prev: Vec<T>,
    /// Nesterov lookahead point y_t; equals x before the first step.
    lookahead: Vec<T>,
    /// Gradient already evaluated at the current query point.
    pending: Option<Vec<T>>,
}

impl<T: Real> Optimizer<T> {
    pub fn new(config: OptimizerConfig<T>, x0: Vec<T>) -> Result<Self> {
        config.validate()?;
        if x0.is_empty() {
            return Err(Error::InvalidConfig("empty start point".into()));
        }
        let n = x0.len();
        Ok(Self {
            config,
            x_prev: x0.clone(),
            lookahead: x0.clone(),
            x: x0,
            step_index: 0,
            velocity: vec![T::zero(); n],
            adam_m: vec![T::zero(); n],
            adam_v: vec![T::zero(); n],
            rho_prev: T::one(),
            pending: None,
        })
    }

    pub fn config(&self) -> &OptimizerConfig<T> {
        &self.config
    }

    /// Current iterate x_t.
    pub fn position(&self) -> &[T] {
        &self.x
    }

    /// Completed update count (gradient evaluations for `ngdm`).
    pub fn step_index(&self) -> usize {
        self.step_index
    }

    fn check_len(&self, g: &[T]) -> Result<()> {
        if g.len() != self.x.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                actual: g.len(),
            });
        }
        Ok(())
    }

    /// x ← x − η g.
    pub fn gd_step(&mut self, g: &[T]) -> Result<()> {
        self.check_len(g)?;
        let eta = self.config.learning_rate;
        for (x, &gi) in self.x.iter_mut().zip(g) {
            *x -= eta * gi;
        }
        self.step_index += 1;
        Ok(())
    }

    /// x ← x − η ĝ; the step length is exactly η.
    pub fn ngd_step(&mut self, g: &[T]) -> Result<()> {
        self.check_len(g)?;
        let ghat = normalize(g, self.config.norm_tolerance)?;
        let eta = self.config.learning_rate;
        for (x, gi) in self.x.iter_mut().zip(ghat) {
            *x -= eta * gi;
        }
        self.step_index += 1;
        Ok(())
    }

    /// m ← β m − η g; x ← x + m.
    pub fn momentum_step(&mut self, g: &[T]) -> Result<()> {
        self.check_len(g)?;
        let beta = self.config.momentum;
        let eta = self.config.learning_rate;
        for ((v, x), &gi) in self.velocity.iter_mut().zip(self.x.iter_mut()).zip(g) {
            *v = beta * *v - eta * gi;
            *x += *v;
        }
        self.step_index += 1;
        Ok(())
    }

    /// Exponential moving averages with bias corrections 1 − β^{t+1}
    /// (t counting from 0), then x ← x − η m̂ / (√v̂ + ε).
    pub fn adam_step(&mut self, g: &[T]) -> Result<()> {
        self.check_len(g)?;
        let c = &self.config;
        let one = T::one();
        let t = self.step_index as i32;
        let m_corr = one - c.beta1.powi(t + 1);
        let v_corr = one - c.beta2.powi(t + 1);
        for i in 0..self.x.len() {
            self.adam_m[i] = c.beta1 * self.adam_m[i] + (one - c.beta1) * g[i];
            self.adam_v[i] = c.beta2 * self.adam_v[i] + (one - c.beta2) * g[i] * g[i];
            let m_hat = self.adam_m[i] / m_corr;
            let v_hat = self.adam_v[i] / v_corr;
            self.x[i] -= c.learning_rate * m_hat / (v_hat.sqrt() + c.adam_epsilon);
        }
        self.step_index += 1;
        Ok(())
    }

    /// Shared Nesterov update: step from the stored lookahead y_t with the
    /// supplied ∇f(y_t), then roll the (ρ, γ) recursion forward and place
    /// the next lookahead.
    fn nag_update(&mut self, g: &[T], normalized: bool) -> Result<()> {
        self.check_len(g)?;
        let dir = if normalized {
            normalize(g, self.config.norm_tolerance)?
        } else {
            g.to_vec()
        };
        let eta = self.config.learning_rate;
        let old_x = std::mem::replace(
            &mut self.x,
            self.lookahead
                .iter()
                .zip(&dir)
                .map(|(&y, &d)| y - eta * d)
                .collect(),
        );
        self.x_prev = old_x;
        self.step_index += 1;

        // γ for the *next* step: ρ_t = (1 + √(1 + 4ρ_{t-1}²))/2,
        // γ_t = (ρ_{t-1} − 1)/ρ_t; the first produced γ is exactly 0.
        let four = real::<T>(4.0);
        let two = real::<T>(2.0);
        let rho = (T::one() + (T::one() + four * self.rho_prev * self.rho_prev).sqrt()) / two;
        let gamma = (self.rho_prev - T::one()) / rho;
        self.rho_prev = rho;
        self.lookahead = self
            .x
            .iter()
            .zip(&self.x_prev)
            .map(|(&xc, &xp)| xc + gamma * (xc - xp))
            .collect();
        Ok(())
    }

    /// Canonical Nesterov step: evaluates ∇f at the lookahead point via
    /// `grad_at` (unless a pending gradient is buffered) and updates.
    pub fn nag_step<G>(&mut self, grad_at: &mut G) -> Result<()>
    where
        G: FnMut(&[T]) -> Result<Vec<T>>,
    {
        let g = match self.pending.take() {
            Some(g) => g,
            None => grad_at(&self.lookahead)?,
        };
        let normalized = self.config.algorithm == Algorithm::Nnag;
        let result = self.nag_update(&g, normalized);
        if result.is_err() {
            self.pending = Some(g);
        }
        result
    }

    /// One historical-NGD block of `block_len` gradient evaluations.
    ///
    /// From the anchor x_t, take block_len−1 provisional ordinary NGD
    /// steps at rate η = ε/κ, collecting the normalized gradients at the
    /// anchor and at every provisional point; build the learning-rate QP
    /// over that history, solve it, and jump
    /// x_{t+m} = x_t + Σ η_i ĝ_{t+i−1}. With block_len = 1 this reproduces
    /// `ngd_step` exactly. A vanishing gradient anywhere aborts the block
    /// and leaves the optimizer at the anchor.
    pub fn historical_ngd_block<G>(
        &mut self,
        grad_at: &mut G,
        block_len: usize,
    ) -> Result<Vec<StepRecord<T>>>
    where
        G: FnMut(&[T]) -> Result<Vec<T>>,
    {
        if block_len == 0 {
            return Err(Error::InvalidConfig(
                "block length must be at least 1".into(),
            ));
        }
        let eta = self.config.learning_rate;
        let tol = self.config.norm_tolerance;
        let anchor = self.x.clone();
        let anchor_grad = match self.pending.take() {
            Some(g) => g,
            None => grad_at(&anchor)?,
        };
        self.check_len(&anchor_grad)?;

        let ghat0 = match normalize(&anchor_grad, tol) {
            Ok(g) => g,
            Err(e) => {
                self.pending = Some(anchor_grad);
                return Err(e);
            }
        };
        let mut ghats = vec![ghat0];
        let mut records = Vec::with_capacity(block_len);
        let mut p = anchor.clone();
        for i in 1..block_len {
            let next: Vec<T> = p
                .iter()
                .zip(&ghats[i - 1])
                .map(|(&xi, &gi)| xi - eta * gi)
                .collect();
            let g = grad_at(&next)?;
            let grad_norm = l2_norm(&g);
            match normalize(&g, tol) {
                Ok(gh) => ghats.push(gh),
                Err(e) => {
                    // Abort the block: report the anchor, keep its gradient.
                    self.pending = Some(anchor_grad);
                    return Err(e);
                }
            }
            records.push(StepRecord {
                step_norm: l2_distance(&next, &p),
                point: next.clone(),
                grad_norm,
            });
            p = next;
        }

        let qp = build_qp(&ghats, eta, self.config.qp_lower_bound)?;
        let rates = solve_box_qp(&qp);
        // A box QP always attains its minimum inside the bounds.
        debug_assert!(rates
            .iter()
            .all(|&r| r >= self.config.qp_lower_bound && r <= T::zero()));

        let mut x_new = anchor.clone();
        for (rate, ghat) in rates.iter().zip(&ghats) {
            for (xi, &gi) in x_new.iter_mut().zip(ghat) {
                *xi += *rate * gi;
            }
        }
        let g_new = grad_at(&x_new)?;
        records.push(StepRecord {
            step_norm: l2_distance(&x_new, &p),
            grad_norm: l2_norm(&g_new),
            point: x_new.clone(),
        });
        self.x_prev = anchor;
        self.x = x_new;
        self.pending = Some(g_new);
        self.step_index += block_len;
        Ok(records)
    }

    /// Evaluate and buffer the gradient at the initial query point,
    /// returning its norm (for trace row 0).
    pub fn begin<G>(&mut self, grad_at: &mut G) -> Result<T>
    where
        G: FnMut(&[T]) -> Result<Vec<T>>,
    {
        let q = self.query_point().to_vec();
        let g = grad_at(&q)?;
        let norm = l2_norm(&g);
        self.pending = Some(g);
        Ok(norm)
    }

    fn query_point(&self) -> &[T] {
        match self.config.algorithm {
            Algorithm::Nag | Algorithm::Nnag => &self.lookahead,
            _ => &self.x,
        }
    }

    /// Perform one update unit and evaluate the next gradient.
    ///
    /// Returns one record per gradient evaluation (a block of up to
    /// `row_limit` records for `ngdm`, one otherwise). On
    /// [`Error::VanishingGradient`] the state is left at the last valid
    /// iterate.
    pub fn advance<G>(&mut self, grad_at: &mut G, row_limit: usize) -> Result<Vec<StepRecord<T>>>
    where
        G: FnMut(&[T]) -> Result<Vec<T>>,
    {
        debug_assert!(row_limit >= 1);
        if self.config.algorithm == Algorithm::Ngdm {
            let len = self.config.history_length.min(row_limit).max(1);
            return self.historical_ngd_block(grad_at, len);
        }

        let x_before = self.x.clone();
        match self.config.algorithm {
            Algorithm::Nag | Algorithm::Nnag => self.nag_step(grad_at)?,
            Algorithm::Gd | Algorithm::Momentum | Algorithm::Adam | Algorithm::Ngd => {
                let g = match self.pending.take() {
                    Some(g) => g,
                    None => grad_at(&self.x)?,
                };
                let result = match self.config.algorithm {
                    Algorithm::Gd => self.gd_step(&g),
                    Algorithm::Momentum => self.momentum_step(&g),
                    Algorithm::Adam => self.adam_step(&g),
                    Algorithm::Ngd => self.ngd_step(&g),
                    _ => unreachable!(),
                };
                if let Err(e) = result {
                    self.pending = Some(g);
                    return Err(e);
                }
            }
            Algorithm::Ngdm => unreachable!(),
        }

        let g_new = grad_at(self.query_point().to_vec().as_slice())?;
        let record = StepRecord {
            grad_norm: l2_norm(&g_new),
            step_norm: l2_distance(&self.x, &x_before),
            point: self.x.clone(),
        };
        self.pending = Some(g_new);
        Ok(vec![record])
    }
}
