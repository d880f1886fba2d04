use alloc::boxed::Box;

use crate::quantum::SpectrumResult;

/// Failure modes shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("frequencies must be positive (omega_f = {omega_f}, omega_0 = {omega_0})")]
    NonPositiveFrequency { omega_f: f64, omega_0: f64 },
    #[error("atom-field coupling must be non-negative, got {0}")]
    NegativeCoupling(f64),
    #[error("pseudo-spin j must be a positive half-integer, got {0}")]
    InvalidSpin(f64),
    #[error("pump couplings (k1 = {k1}, k2 = {k2}) outside the validity region k1 < omega_f, k1^2 + k2^2 < omega_f^2 (omega_f = {omega_f})")]
    OutsideValidityRegion { k1: f64, k2: f64, omega_f: f64 },
    #[error("critical coupling vanishes on k1^2 + k2^2 = omega_f^2; Gamma is undefined and the system is superradiant for any gamma > 0")]
    DegenerateBoundary,
    #[error("no non-singular chart at theta = {theta}")]
    DegenerateChart { theta: f64 },
    #[error("relative energy drift {drift:e} exceeded bound {bound:e} at t = {t}")]
    EnergyDriftExceeded { t: f64, drift: f64, bound: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("photon cutoff n_max = {n_max} too small (need at least {required})")]
    CutoffTooSmall { n_max: usize, required: usize },
    #[error("eigensolver did not converge: residual {residual:e} after {iterations} iterations")]
    SolverNoConvergence { residual: f64, iterations: usize },
    #[error("basis dimension {dimension} exceeds budget {budget}")]
    DimensionBudgetExceeded { dimension: usize, budget: usize },
    #[error("cutoff did not converge within budget: best n_max = {}, relative delta = {delta:e}", best.n_max)]
    BudgetExceeded {
        delta: f64,
        best: Box<SpectrumResult>,
    },
    #[error("ground state is degenerate within the selected sector (gap = {gap:e})")]
    GapClosed { gap: f64 },
    #[error(
        "Berry loop overlap collapsed at step {step} (|overlap| = {overlap:e}); increase steps"
    )]
    LoopDiscontinuity { step: usize, overlap: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
