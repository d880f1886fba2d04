use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{Euclid, One};

use super::eigen::{dot, lowest_pair, SolverOptions};
use super::hamiltonian::QuantumSystem;
use super::observables::photon_mean;
use crate::{Error, ModelParams, Result};

/// Discrete Berry phase of the even-parity ground state around the loop
/// `β ∈ [0, 2π)` generated by `a†a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryLoopResult {
    /// Single-valued Berry phase, comparable with `2π⟨a†a⟩`.
    pub phase: f64,
    /// Gauge-invariant holonomy `−arg Π⟨ψ_k|ψ_{k+1}⟩`, defined only mod 2π.
    pub holonomy_mod_2pi: f64,
    /// `⟨a†a⟩` of the `β = 0` ground state.
    pub photon_number: f64,
    /// `|phase − 2π⟨a†a⟩|`.
    pub identity_error: f64,
    /// Photon number of the reference amplitude that fixes the gauge.
    pub reference_photons: usize,
    pub steps: usize,
    pub gap: f64,
}

/// Numeric Berry phase with a cutoff `n_max` and `steps` points on the loop.
pub fn berry_loop_numeric(p: &ModelParams, n_max: usize, steps: usize) -> Result<BerryLoopResult> {
    berry_loop_numeric_with(p, n_max, steps, &SolverOptions::default())
}

/// As [`berry_loop_numeric`] with explicit solver options. The sector in
/// `opts` is ignored: the loop always runs in the even-parity block, where
/// the ground state is non-degenerate at finite `j`.
///
/// Each `H(β_k)` is diagonalised independently. The gauge is fixed by
/// making the amplitude at a reference state `r` (the largest one at
/// `β = 0`) real and positive; that gauge is single valued on the loop and
/// shifts the phase by `−2π n_r`, which is added back.
pub fn berry_loop_numeric_with(
    p: &ModelParams,
    n_max: usize,
    steps: usize,
    opts: &SolverOptions,
) -> Result<BerryLoopResult> {
    if steps < 8 {
        return Err(Error::InvalidArgument("berry loop needs at least 8 steps"));
    }
    let sys = QuantumSystem::new(p, n_max)?;
    let indices = sys.sector_indices(1);
    let block = sys.hamiltonian.submatrix(&indices);
    let photons: Vec<f64> = indices
        .iter()
        .map(|&i| sys.basis.photon_number(i) as f64)
        .collect();

    let first = lowest_pair(&block, opts)?;
    let degeneracy_tol = 1e3 * opts.tol * first.norm;
    let gap = first.e1 - first.e0;
    if !(gap > degeneracy_tol) {
        return Err(Error::GapClosed { gap: gap.max(0.0) });
    }
    let reference = first
        .vector
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .expect("non-empty sector");
    let reference_photons = sys.basis.photon_number(indices[reference]);
    let gauge = |mut v: Vec<Complex64>, step: usize| -> Result<Vec<Complex64>> {
        let r = v[reference];
        if !(r.norm() > 1e-8) {
            return Err(Error::LoopDiscontinuity {
                step,
                overlap: r.norm(),
            });
        }
        let phase = r.conj() / r.norm();
        v.iter_mut().for_each(|x| *x *= phase);
        Ok(v)
    };

    let psi0 = gauge(first.vector, 0)?;
    let mut previous = psi0.clone();
    let mut accumulated = 0.0;
    let mut product = Complex64::one();
    for k in 1..=steps {
        let current = if k == steps {
            psi0.clone()
        } else {
            let beta = TAU * k as f64 / steps as f64;
            let rotated = block.map_entries(|r, c, v| {
                v * Complex64::from_polar(1.0, -beta * (photons[r] - photons[c]))
            });
            gauge(lowest_pair(&rotated, opts)?.vector, k)?
        };
        let overlap = dot(&previous, &current);
        if overlap.norm() < 0.5 {
            return Err(Error::LoopDiscontinuity {
                step: k,
                overlap: overlap.norm(),
            });
        }
        accumulated -= overlap.arg();
        product *= overlap / overlap.norm();
        previous = current;
    }

    let phase = accumulated + TAU * reference_photons as f64;
    let photon_number = photon_mean(&sys.basis, &psi0, &indices);
    Ok(BerryLoopResult {
        phase,
        holonomy_mod_2pi: Euclid::rem_euclid(&-product.arg(), &TAU),
        photon_number,
        identity_error: (phase - TAU * photon_number).abs(),
        reference_photons,
        steps,
        gap,
    })
}
