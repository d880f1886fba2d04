//! Physical parameters, critical coupling and phase classification.

use core::fmt;

use num_traits::Float;

use crate::{Error, Result};

/// Relative tolerance used for boundary classification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The six physical parameters of the extended Dicke model (ħ = 1).
///
/// `j = N/2` is the total pseudo-spin of `N` two-level atoms; `k1` and `k2`
/// couple the real and imaginary quadratures of the squared field amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega_f: f64,
    pub omega_0: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    pub j: f64,
}

/// Phase of the ground state in the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Normal,
    Critical,
    Superradiant,
    /// `k1² + k2² = ω_f²`: the critical coupling vanishes and any `γ > 0`
    /// is superradiant.
    DegenerateBoundary,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Normal => "normal",
            PhaseLabel::Critical => "critical",
            PhaseLabel::Superradiant => "superradiant",
            PhaseLabel::DegenerateBoundary => "degenerate-boundary",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ModelParams {
    pub fn new(omega_f: f64, omega_0: f64, gamma: f64, k1: f64, k2: f64, j: f64) -> Self {
        Self {
            omega_f,
            omega_0,
            gamma,
            k1,
            k2,
            j,
        }
    }

    /// Standard Dicke model at resonance (`ω_f = ω₀ = 1`, no pump).
    pub fn dicke(gamma: f64, j: f64) -> Self {
        Self::new(1.0, 1.0, gamma, 0.0, 0.0, j)
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_pump(self, k1: f64, k2: f64) -> Self {
        Self { k1, k2, ..self }
    }

    pub fn with_j(self, j: f64) -> Self {
        Self { j, ..self }
    }

    /// Number of atoms `N = 2j`.
    pub fn atom_count(&self) -> f64 {
        2.0 * self.j
    }

    /// Checks frequencies, coupling sign and spin, but not the pump region.
    ///
    /// This is enough for evaluating the classical energy and its flow,
    /// which are defined for any pump strength.
    pub fn validate_basic(&self) -> Result<&Self> {
        let finite = [
            self.omega_f,
            self.omega_0,
            self.gamma,
            self.k1,
            self.k2,
            self.j,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("model parameters must be finite"));
        }
        if self.omega_f <= 0.0 || self.omega_0 <= 0.0 {
            return Err(Error::NonPositiveFrequency {
                omega_f: self.omega_f,
                omega_0: self.omega_0,
            });
        }
        if self.gamma < 0.0 {
            return Err(Error::NegativeCoupling(self.gamma));
        }
        let two_j = 2.0 * self.j;
        if self.j < 0.5 || (two_j - two_j.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(self.j));
        }
        Ok(self)
    }

    /// Full validation including the pump validity region
    /// `k1 < ω_f` and `k1² + k2² ≤ ω_f²`.
    ///
    /// Points on the circle `k1² + k2² = ω_f²` (within [`DEFAULT_TOL`]) are
    /// accepted; they form the degenerate boundary where `γ_c = 0`.
    pub fn validate(&self) -> Result<&Self> {
        self.validate_basic()?;
        let radius_sq = self.k1 * self.k1 + self.k2 * self.k2;
        let wf_sq = self.omega_f * self.omega_f;
        if self.k1 >= self.omega_f || radius_sq > wf_sq * (1.0 + DEFAULT_TOL) {
            return Err(Error::OutsideValidityRegion {
                k1: self.k1,
                k2: self.k2,
                omega_f: self.omega_f,
            });
        }
        Ok(self)
    }

    /// Whether `(k1, k2)` lies on the circle `k1² + k2² = ω_f²`.
    pub fn on_degenerate_boundary(&self) -> bool {
        let wf_sq = self.omega_f * self.omega_f;
        (self.k1 * self.k1 + self.k2 * self.k2 - wf_sq).abs() <= DEFAULT_TOL * wf_sq
    }

    /// `ω_f − k1`, the denominator shared by γ_c, p_c and the order parameters.
    pub(crate) fn detuned_field(&self) -> f64 {
        self.omega_f - self.k1
    }

    /// Squeezing enhancement `1 + k2²/(ω_f − k1)²` of the photon number.
    pub(crate) fn pump_enhancement(&self) -> f64 {
        let d = self.detuned_field();
        1.0 + self.k2 * self.k2 / (d * d)
    }

    /// Critical atom-field coupling
    /// `γ_c = ½ √(ω₀ (ω_f² − k1² − k2²) / (ω_f − k1))`.
    ///
    /// Returns exactly `0.0` on the degenerate boundary.
    pub fn critical_coupling(&self) -> Result<f64> {
        self.validate()?;
        if self.on_degenerate_boundary() {
            return Ok(0.0);
        }
        let radicand = self.omega_0
            * (self.omega_f * self.omega_f - self.k1 * self.k1 - self.k2 * self.k2)
            / self.detuned_field();
        Ok(0.5 * radicand.max(0.0).sqrt())
    }

    /// `Γ = γ/γ_c`, undefined on the degenerate boundary.
    pub fn coupling_ratio(&self) -> Result<f64> {
        let gc = self.critical_coupling()?;
        if gc == 0.0 {
            return Err(Error::DegenerateBoundary);
        }
        Ok(self.gamma / gc)
    }

    /// Classifies the ground-state phase with relative tolerance `tol` on `Γ = 1`.
    pub fn classify_phase(&self, tol: f64) -> Result<PhaseLabel> {
        let gc = self.critical_coupling()?;
        if gc == 0.0 {
            return Ok(PhaseLabel::DegenerateBoundary);
        }
        let ratio = self.gamma / gc;
        Ok(if (ratio - 1.0).abs() <= tol {
            PhaseLabel::Critical
        } else if ratio < 1.0 {
            PhaseLabel::Normal
        } else {
            PhaseLabel::Superradiant
        })
    }

    /// Returns a copy with `γ = Γ·γ_c`, keeping every other parameter.
    pub fn at_ratio(&self, ratio: f64) -> Result<Self> {
        let gc = self.critical_coupling()?;
        if gc == 0.0 {
            return Err(Error::DegenerateBoundary);
        }
        if !(ratio >= 0.0) {
            return Err(Error::NegativeCoupling(ratio));
        }
        Ok(self.with_gamma(ratio * gc))
    }
}
