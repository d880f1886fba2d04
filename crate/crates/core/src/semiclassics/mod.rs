//! Coherent-state (thermodynamic-limit) description of the model.
//!
//! A phase-space point is a Glauber amplitude `α = (q + ip)/√2` for the
//! field and a Bloch coherent state `z = tan(θ/2) e^{iφ}` for the atoms,
//! with `θ` measured from the −z axis so that `j_z = −j cos θ`.

use core::f64::consts::{PI, TAU};

use num_traits::{Euclid, Float};

use crate::{ModelParams, Result};

mod fixed_points;
mod integrate;

pub use fixed_points::{
    classify_stability, find_fixed_points, superradiant_point_analytic, FixedPoint, FixedPointKind,
    Stability, StabilityReport,
};
pub use integrate::{
    integrate_trajectory, integrate_trajectory_with, IntegratorOptions, IntegratorStats,
    Trajectory, TrajectorySample,
};

/// Phase-space point `(q, p, θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
    /// Zenith angle from the −z axis, in `[0, π]`.
    pub theta: f64,
    /// Azimuth, in `[0, 2π)`.
    pub phi: f64,
}

impl ClassicalState {
    /// Builds a state with `θ` clamped to `[0, π]` and `φ` wrapped into `[0, 2π)`.
    pub fn new(q: f64, p: f64, theta: f64, phi: f64) -> Self {
        Self {
            q,
            p,
            theta: theta.clamp(0.0, PI),
            phi: wrap_angle(phi),
        }
    }

    pub fn south_pole() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn north_pole() -> Self {
        Self::new(0.0, 0.0, PI, 0.0)
    }

    /// `j_z = −j cos θ`.
    pub fn jz(&self, j: f64) -> f64 {
        -j * self.theta.cos()
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite() && self.theta.is_finite() && self.phi.is_finite()
    }
}

pub(crate) fn wrap_angle(phi: f64) -> f64 {
    let w = Euclid::rem_euclid(&phi, &TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Right-hand side of Hamilton's equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub dq: f64,
    pub dp: f64,
    pub dphi: f64,
    pub dtheta: f64,
}

impl StateDerivative {
    pub fn norm(&self) -> f64 {
        (self.dq * self.dq + self.dp * self.dp + self.dphi * self.dphi + self.dtheta * self.dtheta)
            .sqrt()
    }
}

/// `2√j γ`, the strength of the `q sin θ cos φ` coupling.
fn spin_field_coupling(p: &ModelParams) -> f64 {
    2.0 * p.j.sqrt() * p.gamma
}

/// Energy scale `max(ω₀ j, ω_f)` used to make residuals dimensionless.
pub(crate) fn energy_scale(p: &ModelParams) -> f64 {
    (p.omega_0 * p.j).max(p.omega_f)
}

/// Coherent-state expectation value of the Hamiltonian:
///
/// `E = ω_f/2 (q² + p²) − ω₀ j cos θ + 2√j γ q sin θ cos φ + K₁/2 (q² − p²) + K₂ q p`.
pub fn classical_energy(p: &ModelParams, s: &ClassicalState) -> f64 {
    let (q, pp) = (s.q, s.p);
    0.5 * p.omega_f * (q * q + pp * pp) - p.omega_0 * p.j * s.theta.cos()
        + spin_field_coupling(p) * q * s.theta.sin() * s.phi.cos()
        + 0.5 * p.k1 * (q * q - pp * pp)
        + p.k2 * q * pp
}

/// Hamilton's equations in the `(q, p, φ, θ)` variables:
/// `q̇ = ∂E/∂p`, `ṗ = −∂E/∂q`, `φ̇ = ∂E/∂θ`, `θ̇ = −∂E/∂φ`.
pub fn hamilton_rhs(p: &ModelParams, s: &ClassicalState) -> StateDerivative {
    let c = spin_field_coupling(p);
    let (sin_t, cos_t) = s.theta.sin_cos();
    let (sin_p, cos_p) = s.phi.sin_cos();
    StateDerivative {
        dq: p.omega_f * s.p - p.k1 * s.p + p.k2 * s.q,
        dp: -p.omega_f * s.q - c * sin_t * cos_p - p.k1 * s.q - p.k2 * s.p,
        dphi: p.omega_0 * p.j * sin_t + c * s.q * cos_t * cos_p,
        dtheta: c * s.q * sin_t * sin_p,
    }
}

/// Scaled energy `E/(ω₀ j)` minimised over the field, as a function of the
/// Bloch angles: `ε = −cos θ − (Γ²/2) sin²θ cos²φ`.
pub fn energy_surface(p: &ModelParams, theta: f64, phi: f64) -> Result<f64> {
    let ratio = p.coupling_ratio()?;
    Ok(energy_surface_at_ratio(ratio, theta, phi))
}

pub(crate) fn energy_surface_at_ratio(ratio: f64, theta: f64, phi: f64) -> f64 {
    let (sin_t, cos_t) = theta.sin_cos();
    let cos_p = phi.cos();
    -cos_t - 0.5 * ratio * ratio * sin_t * sin_t * cos_p * cos_p
}

/// Scaled ground-state energy `ε₀ = E₀/(ω₀ j)`: `−1` for `Γ ≤ 1`,
/// `−(Γ² + Γ⁻²)/2` above.
pub fn ground_energy(p: &ModelParams) -> Result<f64> {
    Ok(ground_energy_at_ratio(p.coupling_ratio()?))
}

pub(crate) fn ground_energy_at_ratio(ratio: f64) -> f64 {
    if ratio <= 1.0 {
        -1.0
    } else {
        -0.5 * (ratio * ratio + 1.0 / (ratio * ratio))
    }
}
