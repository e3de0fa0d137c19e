//! Experiment orchestration: configure a problem × optimizer pair, run a
//! trace, write CSV, summarize.
//!
//! Trace semantics: row 0 is the initial point before any update; row t
//! carries the energy at θ_t, the norm of the raw gradient evaluated at
//! iteration t's query point, the step length ‖θ_t − θ_{t−1}‖, and the
//! cumulative cost-evaluation count. Every row corresponds to exactly one
//! gradient evaluation, so historical-NGD blocks (whose provisional points
//! each get a row) are compared per gradient evaluation.
//!
//! The `ms` column is wall-clock only when `record_timing` is set; it
//! defaults to zero so that identical configs produce byte-identical CSV.

use crate::ansatz::AnsatzSpec;
use crate::error::{Error, Result};
use crate::gradient::{parameter_shift_gradient, ObjectiveKind};
use crate::optimizer::{Optimizer, OptimizerConfig};
use crate::problems::{self, InitPolicy, ProblemInstance};
use crate::scalar::{real, Real};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Which benchmark problem to run.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec<T> {
    NarrowGorge {
        n_qubits: usize,
    },
    H2Toy,
    Tfim {
        n_qubits: usize,
        depth: usize,
        entanglement: crate::ansatz::Entanglement,
    },
    FromFile {
        path: PathBuf,
        ansatz: AnsatzSpec,
        init: InitPolicy<T>,
    },
    Quadratic {
        x_star: Vec<T>,
    },
}

/// Everything one experiment needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    pub problem: ProblemSpec<T>,
    /// Replaces the problem's built-in start point when set.
    pub init_override: Option<InitPolicy<T>>,
    pub optimizer: OptimizerConfig<T>,
    /// Defaults to the problem's iteration budget when `None`.
    pub max_iterations: Option<usize>,
    pub record_gradient_norm: bool,
    /// Off by default: the ms column stays zero so traces are reproducible.
    pub record_timing: bool,
    /// Seed for randomized init policies.
    pub seed: u64,
    /// CSV destination used by [`run_and_write`].
    pub output: Option<PathBuf>,
}

impl<T: Real> RunConfig<T> {
    pub fn new(problem: ProblemSpec<T>, optimizer: OptimizerConfig<T>) -> Self {
        Self {
            problem,
            init_override: None,
            optimizer,
            max_iterations: None,
            record_gradient_norm: true,
            record_timing: false,
            seed: 0,
            output: None,
        }
    }
}

/// One trace row; see the module docs for the column semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow<T> {
    pub iteration: usize,
    pub energy: T,
    pub grad_norm: T,
    pub step_norm: T,
    pub evals: u64,
    pub ms: u64,
}

/// Convergence trace of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTrace<T> {
    rows: Vec<TraceRow<T>>,
}

impl<T: Real> EnergyTrace<T> {
    pub fn new() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[TraceRow<T>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: TraceRow<T>) {
        debug_assert_eq!(row.iteration, self.rows.len());
        self.rows.push(row);
    }

    pub fn final_energy(&self) -> Option<T> {
        self.rows.last().map(|r| r.energy)
    }

    pub fn best_energy(&self) -> Option<T> {
        self.rows
            .iter()
            .map(|r| r.energy)
            .fold(None, |best, e| match best {
                None => Some(e),
                Some(b) => Some(b.min(e)),
            })
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Reached the iteration budget.
    Completed,
    /// An exactly stationary point stopped a normalized-gradient update.
    GradientVanished { iteration: usize },
}

/// Trace plus terminal state of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput<T> {
    pub trace: EnergyTrace<T>,
    pub status: RunStatus,
    pub final_parameters: Vec<T>,
}

/// Materialize the configured problem.
pub fn build_problem<T: Real>(config: &RunConfig<T>) -> Result<ProblemInstance<T>> {
    match &config.problem {
        ProblemSpec::NarrowGorge { n_qubits } => problems::narrow_gorge(*n_qubits),
        ProblemSpec::H2Toy => problems::h2_toy(),
        ProblemSpec::Tfim {
            n_qubits,
            depth,
            entanglement,
        } => problems::tfim_with(*n_qubits, *depth, *entanglement),
        ProblemSpec::FromFile { path, ansatz, init } => {
            problems::from_file(path, ansatz, init, config.seed)
        }
        ProblemSpec::Quadratic { x_star } => {
            problems::synthetic_quadratic(x_star.len(), x_star.clone())
        }
    }
}

/// Execute one experiment: deterministic trace, one row per gradient
/// evaluation, terminating at the iteration budget or on a vanishing
/// gradient (flagged in the status).
pub fn run<T: Real>(config: &RunConfig<T>) -> Result<RunOutput<T>> {
    let problem = build_problem(config)?;
    let objective = &problem.objective;
    let initial = match &config.init_override {
        Some(policy) => policy.resolve(objective.n_params(), config.seed)?,
        None => problem.initial.clone(),
    };
    let max_iterations = config.max_iterations.unwrap_or(problem.default_iterations);

    // The experiment pipeline differentiates by parameter shift; the
    // synthetic quadratic is not shift-differentiable and uses its
    // analytic gradient.
    let analytic = matches!(objective.kind(), ObjectiveKind::Quadratic { .. });
    let mut grad_at = |x: &[T]| {
        if analytic {
            objective.analytic_gradient(x)
        } else {
            parameter_shift_gradient(objective, x)
        }
    };

    let started = Instant::now();
    let clock = |on: bool| {
        if on {
            started.elapsed().as_millis() as u64
        } else {
            0
        }
    };

    let mut optimizer = Optimizer::new(config.optimizer.clone(), initial.clone())?;
    let g0_norm = optimizer.begin(&mut grad_at)?;
    let mut trace = EnergyTrace::new();
    trace.push(TraceRow {
        iteration: 0,
        energy: objective.evaluate(&initial)?,
        grad_norm: if config.record_gradient_norm {
            g0_norm
        } else {
            T::zero()
        },
        step_norm: T::zero(),
        evals: objective.eval_count(),
        ms: clock(config.record_timing),
    });

    let mut status = RunStatus::Completed;
    while trace.len() <= max_iterations {
        let remaining = max_iterations + 1 - trace.len();
        match optimizer.advance(&mut grad_at, remaining) {
            Ok(records) => {
                for record in records {
                    let energy = objective.evaluate(&record.point)?;
                    trace.push(TraceRow {
                        iteration: trace.len(),
                        energy,
                        grad_norm: if config.record_gradient_norm {
                            record.grad_norm
                        } else {
                            T::zero()
                        },
                        step_norm: record.step_norm,
                        evals: objective.eval_count(),
                        ms: clock(config.record_timing),
                    });
                }
            }
            Err(Error::VanishingGradient) => {
                status = RunStatus::GradientVanished {
                    iteration: trace.len() - 1,
                };
                break;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(RunOutput {
        trace,
        status,
        final_parameters: optimizer.position().to_vec(),
    })
}

/// [`run`], then write the trace to `config.output` when set.
pub fn run_and_write<T: Real>(config: &RunConfig<T>) -> Result<RunOutput<T>> {
    let output = run(config)?;
    if let Some(path) = &config.output {
        write_csv(&output.trace, path)?;
    }
    Ok(output)
}

/// First row index whose energy is at or below `threshold`.
pub fn iterations_to_threshold<T: Real>(trace: &EnergyTrace<T>, threshold: T) -> Option<usize> {
    trace
        .rows()
        .iter()
        .find(|r| r.energy <= threshold)
        .map(|r| r.iteration)
}

const CSV_HEADER: &str = "iter,energy,grad_norm,step_norm,evals,ms";

/// Render the trace as CSV (full decimal precision, round-trippable).
pub fn to_csv_string<T: Real>(trace: &EnergyTrace<T>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in trace.rows() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.iteration, r.energy, r.grad_norm, r.step_norm, r.evals, r.ms
        );
    }
    out
}

/// Write the trace to `path` as CSV with a mandatory header row.
pub fn write_csv<T: Real>(trace: &EnergyTrace<T>, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv_string(trace))?;
    Ok(())
}

/// Parse CSV produced by [`write_csv`].
pub fn parse_csv<T: Real>(text: &str) -> Result<EnergyTrace<T>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(Error::Csv {
                line: 1,
                message: format!("expected header `{CSV_HEADER}`"),
            })
        }
    }
    let mut trace = EnergyTrace::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Csv {
                line: line_no,
                message: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let bad = |what: &str| Error::Csv {
            line: line_no,
            message: format!("malformed {what}"),
        };
        let row = TraceRow {
            iteration: fields[0].parse().map_err(|_| bad("iteration"))?,
            energy: parse_scalar(fields[1]).ok_or_else(|| bad("energy"))?,
            grad_norm: parse_scalar(fields[2]).ok_or_else(|| bad("grad_norm"))?,
            step_norm: parse_scalar(fields[3]).ok_or_else(|| bad("step_norm"))?,
            evals: fields[4].parse().map_err(|_| bad("evals"))?,
            ms: fields[5].parse().map_err(|_| bad("ms"))?,
        };
        if row.iteration != trace.len() {
            return Err(Error::Csv {
                line: line_no,
                message: format!("iteration {} out of order", row.iteration),
            });
        }
        trace.push(row);
    }
    Ok(trace)
}

/// Read a trace back from a CSV file.
pub fn read_csv<T: Real>(path: &Path) -> Result<EnergyTrace<T>> {
    parse_csv(&std::fs::read_to_string(path)?)
}

fn parse_scalar<T: Real>(s: &str) -> Option<T> {
    s.parse::<f64>().ok().map(|v| real(v))
}

/// Text report over labeled traces: final and best energy plus
/// iterations-to-threshold for each requested threshold.
pub fn summarize<T: Real>(entries: &[(String, &EnergyTrace<T>)], thresholds: &[T]) -> String {
    let mut out = String::new();
    for (name, trace) in entries {
        let _ = write!(out, "{name}: rows={}", trace.len());
        if let (Some(fin), Some(best)) = (trace.final_energy(), trace.best_energy()) {
            let _ = write!(out, " final={fin} best={best}");
        }
        for &threshold in thresholds {
            match iterations_to_threshold(trace, threshold) {
                Some(iter) => {
                    let _ = write!(out, " reach({threshold})={iter}");
                }
                None => {
                    let _ = write!(out, " reach({threshold})=never");
                }
            }
        }
        out.push('\n');
    }
    out
}
