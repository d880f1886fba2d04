use alloc::boxed::Box;

use num_traits::Float;

use super::eigen::{ground_state, Sector, SolverOptions, SpectrumResult};
use super::hamiltonian::QuantumSystem;
use crate::observables::order_parameters;
use crate::{Error, ModelParams, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffOptions {
    /// Relative ground-energy change tolerated between `n_max/2` and `n_max`.
    pub e_tol: f64,
    /// Largest photon cutoff tried.
    pub max_n_max: usize,
    /// Overrides the semiclassical starting cutoff.
    pub initial_n_max: Option<usize>,
    pub solver: SolverOptions,
}

impl Default for CutoffOptions {
    fn default() -> Self {
        Self {
            e_tol: 1e-10,
            max_n_max: 4096,
            initial_n_max: None,
            solver: SolverOptions::default().in_sector(Sector::Even),
        }
    }
}

/// Starting cutoff `max(16, ⌈8 n̄⌉)` from the thermodynamic-limit photon
/// number `n̄` (zero on the degenerate boundary, where it diverges).
pub fn initial_cutoff(p: &ModelParams) -> usize {
    let n_mean = order_parameters(p).map(|o| o.n_mean).unwrap_or(0.0);
    // slack keeps exact multiples from rounding up a whole photon
    let seed = (8.0 * n_mean * (1.0 - 1e-12)).ceil();
    if seed.is_finite() && seed < 1e9 {
        (seed as usize).max(16)
    } else {
        16
    }
}

fn solve(p: &ModelParams, n_max: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    ground_state(&QuantumSystem::new(p, n_max)?, opts)
}

/// Doubles the photon cutoff until the ground energy changes by less than
/// `e_tol · |E₀|` between `n_max/2` and `n_max`.
///
/// On running out of budget the best result so far is returned inside
/// [`Error::BudgetExceeded`].
pub fn converge_cutoff(p: &ModelParams, opts: &CutoffOptions) -> Result<SpectrumResult> {
    p.validate()?;
    let mut n_max = opts
        .initial_n_max
        .unwrap_or_else(|| initial_cutoff(p))
        .max(4);
    if n_max > opts.max_n_max {
        return Err(Error::CutoffTooSmall {
            n_max: opts.max_n_max,
            required: n_max,
        });
    }
    let mut previous = solve(p, n_max / 2, &opts.solver)?;
    loop {
        let mut current = solve(p, n_max, &opts.solver)?;
        let scale = current.ground_energy.abs().max(f64::MIN_POSITIVE);
        let delta = (current.ground_energy - previous.ground_energy).abs() / scale;
        if delta < opts.e_tol {
            return Ok(current);
        }
        if 2 * n_max > opts.max_n_max {
            current.converged = false;
            return Err(Error::BudgetExceeded {
                delta,
                best: Box::new(current),
            });
        }
        previous = current;
        n_max *= 2;
    }
}
