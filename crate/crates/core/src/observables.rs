//! Thermodynamic-limit order parameters, their fluctuations and the
//! ground-state Berry phase as closed-form functions of the parameters.
//!
//! All piecewise expressions assign `Γ = 1` to the normal branch. Results
//! are intensive where the text says "scaled"; multiply by `N` or `ω₀² N`
//! to recover extensive values.

use core::f64::consts::PI;

use num_traits::Float;

use crate::{Error, ModelParams, PhaseLabel, Result, DEFAULT_TOL};

/// Variances of the observables in [`OrderParameters`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluctuations {
    pub var_q: f64,
    pub var_p: f64,
    pub var_n: f64,
    pub var_jx: f64,
    pub var_jy: f64,
    pub var_jz: f64,
}

/// Ground-state expectation values of the field quadratures, photon
/// number and collective spin, with their variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameters {
    pub q_mean: f64,
    pub p_mean: f64,
    pub n_mean: f64,
    pub jx_mean: f64,
    pub jy_mean: f64,
    pub jz_mean: f64,
    pub fluctuations: Fluctuations,
}

/// Scaled Berry phase `λ₀/(ω₀² N)` and its `Γ`-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryResult {
    pub phase_scaled: f64,
    pub derivative_scaled: f64,
    pub branch: PhaseLabel,
}

/// Linearisation of the Berry phase about `Γ = 1⁺`.
///
/// `slope` is obtained by expanding the closed form; `printed_slope` carries
/// the coefficient `π ω₀² / (2 γ_c) · [1 + K₂²/(ω_f − K₁)²]` (per atom, in
/// unscaled units) that appears in the literature for the same limit. The
/// two differ by a factor `ω₀²/γ_c` and are reported side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryScaling {
    /// `d[λ₀/(ω₀² N)]/dΓ` at `Γ = 1⁺`: `π/(2γ_c²) · [1 + K₂²/(ω_f − K₁)²]`.
    pub slope: f64,
    /// `slope · |Γ − 1|` for `Γ > 1`, zero otherwise.
    pub phase_scaled: f64,
    /// Unscaled derivative `dλ₀/dΓ = ω₀² N · slope`.
    pub derivative_unscaled: f64,
    /// Literature coefficient of `|Γ − 1|` in `λ₀/N`.
    pub printed_slope: f64,
    /// `printed_slope · N`, the literature form of `dλ₀/dΓ`.
    pub printed_derivative_unscaled: f64,
}

fn positive_gc(p: &ModelParams) -> Result<f64> {
    let gc = p.critical_coupling()?;
    if gc == 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    Ok(gc)
}

/// Expectation values in the symmetry-broken `φ = 0` ground state.
pub fn order_parameters(p: &ModelParams) -> Result<OrderParameters> {
    let gc = positive_gc(p)?;
    let ratio = p.gamma / gc;
    let fluctuations = fluctuations_at(p, ratio);
    if ratio <= 1.0 {
        return Ok(OrderParameters {
            q_mean: 0.0,
            p_mean: 0.0,
            n_mean: 0.0,
            jx_mean: 0.0,
            jy_mean: 0.0,
            jz_mean: -p.j,
            fluctuations,
        });
    }
    let inv4 = ratio.powi(-4);
    let root = (1.0 - inv4).sqrt();
    let q_mean = -(p.omega_0 * p.j.sqrt() * ratio / (2.0 * gc)) * root;
    let d = p.detuned_field();
    let n_mean = (d * d + p.k2 * p.k2) / (2.0 * d * d) * q_mean * q_mean;
    Ok(OrderParameters {
        q_mean,
        p_mean: -p.k2 * q_mean / d,
        n_mean,
        jx_mean: p.j * root,
        jy_mean: 0.0,
        jz_mean: -p.j / (ratio * ratio),
        fluctuations,
    })
}

/// Variances: `Δq² = Δp² = ½`, `Δn² = ⟨n⟩`, `ΔJx² = (j/2)Γ⁻⁴`,
/// `ΔJy² = j/2`, `ΔJz² = (j/2)(1 − Γ⁻⁴)`, with `Γ → 1` in the normal phase.
pub fn fluctuations(p: &ModelParams) -> Result<Fluctuations> {
    let gc = positive_gc(p)?;
    Ok(fluctuations_at(p, p.gamma / gc))
}

fn fluctuations_at(p: &ModelParams, ratio: f64) -> Fluctuations {
    let ratio = ratio.max(1.0);
    let inv4 = ratio.powi(-4);
    let var_n = if ratio > 1.0 {
        let gc = p.gamma / ratio;
        let d = p.detuned_field();
        let q = (p.omega_0 * p.j.sqrt() * ratio / (2.0 * gc)) * (1.0 - inv4).sqrt();
        (d * d + p.k2 * p.k2) / (2.0 * d * d) * q * q
    } else {
        0.0
    };
    Fluctuations {
        var_q: 0.5,
        var_p: 0.5,
        var_n,
        var_jx: 0.5 * p.j * inv4,
        var_jy: 0.5 * p.j,
        var_jz: 0.5 * p.j * (1.0 - inv4),
    }
}

/// Scaled Berry phase `λ₀/(ω₀² N)`:
/// `0` for `Γ ≤ 1`, `π Γ² (1 − Γ⁻⁴) / (8 γ_c²) · [1 + K₂²/(ω_f − K₁)²]` above.
pub fn berry_phase(p: &ModelParams) -> Result<f64> {
    let gc = positive_gc(p)?;
    let ratio = p.gamma / gc;
    if ratio <= 1.0 {
        return Ok(0.0);
    }
    Ok(PI * ratio * ratio * (1.0 - ratio.powi(-4)) / (8.0 * gc * gc) * p.pump_enhancement())
}

/// `∂[λ₀/(ω₀² N)]/∂Γ`: `0` for `Γ ≤ 1`,
/// `π Γ (1 + Γ⁻⁴) / (4 γ_c²) · [1 + K₂²/(ω_f − K₁)²]` above.
pub fn berry_phase_derivative(p: &ModelParams) -> Result<f64> {
    let gc = positive_gc(p)?;
    let ratio = p.gamma / gc;
    if ratio <= 1.0 {
        return Ok(0.0);
    }
    Ok(PI * ratio * (1.0 + ratio.powi(-4)) / (4.0 * gc * gc) * p.pump_enhancement())
}

pub fn berry(p: &ModelParams) -> Result<BerryResult> {
    Ok(BerryResult {
        phase_scaled: berry_phase(p)?,
        derivative_scaled: berry_phase_derivative(p)?,
        branch: p.classify_phase(DEFAULT_TOL)?,
    })
}

/// First-order expansion of the Berry phase about `Γ = 1⁺`, evaluated at
/// `ratio`. `γ` in `p` is ignored; only `γ_c` enters.
pub fn berry_scaling_near_critical(p: &ModelParams, ratio: f64) -> Result<BerryScaling> {
    let gc = positive_gc(p)?;
    let enhancement = p.pump_enhancement();
    let slope = PI / (2.0 * gc * gc) * enhancement;
    let printed_slope = PI * p.omega_0 * p.omega_0 / (2.0 * gc) * enhancement;
    let n = p.atom_count();
    Ok(BerryScaling {
        slope,
        phase_scaled: if ratio > 1.0 {
            slope * (ratio - 1.0)
        } else {
            0.0
        },
        derivative_unscaled: p.omega_0 * p.omega_0 * n * slope,
        printed_slope,
        printed_derivative_unscaled: printed_slope * n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn normal_phase_values() {
        let p = ModelParams::dicke(0.25, 3.0);
        let o = order_parameters(&p).unwrap();
        assert_eq!(
            (o.q_mean, o.p_mean, o.n_mean, o.jx_mean, o.jy_mean),
            (0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(o.jz_mean, -3.0);
        assert_eq!(o.fluctuations.var_jz, 0.0);
        assert_eq!(o.fluctuations.var_jx, 1.5);
    }

    #[test]
    fn superradiant_dicke_values() {
        let p = ModelParams::dicke(1.0, 1.0);
        let o = order_parameters(&p).unwrap();
        assert_relative_eq!(o.jz_mean, -0.25, epsilon = 1e-15);
        assert_relative_eq!(o.q_mean, -1.936_491_673_103_708_5, epsilon = 1e-14);
        assert_eq!(o.p_mean, 0.0);
        assert_relative_eq!(o.fluctuations.var_jx, 1.0 / 32.0, epsilon = 1e-16);
    }

    #[test]
    fn pumped_values() {
        let p = ModelParams::dicke(1.0, 1.0).with_pump(0.5, 0.5);
        let o = order_parameters(&p).unwrap();
        assert_relative_eq!(o.p_mean, -o.q_mean, epsilon = 1e-14);
        assert_relative_eq!(o.n_mean, o.q_mean * o.q_mean, epsilon = 1e-13);
    }

    #[test]
    fn fluctuation_examples() {
        for g in [0.1, 0.5, 0.9, 3.0] {
            assert_eq!(
                fluctuations(&ModelParams::dicke(g, 2.0)).unwrap().var_q,
                0.5
            );
        }
        assert_eq!(
            fluctuations(&ModelParams::dicke(0.5, 2.0)).unwrap().var_jz,
            0.0
        );
    }

    #[test]
    fn berry_examples() {
        let p = ModelParams::dicke(0.45, 1.0);
        assert_eq!(berry_phase(&p).unwrap(), 0.0);
        assert_eq!(berry_phase(&p.with_gamma(0.5)).unwrap(), 0.0);
        assert_relative_eq!(
            berry_phase(&p.with_gamma(1.0)).unwrap(),
            1.875 * PI,
            epsilon = 1e-14
        );
        assert_eq!(berry_phase_derivative(&p.with_gamma(0.25)).unwrap(), 0.0);
        assert_relative_eq!(
            berry_phase_derivative(&p.with_gamma(1.0)).unwrap(),
            2.125 * PI,
            epsilon = 1e-14
        );
        // right limit at Γ = 1⁺ is 2π, left limit 0
        let right = berry_phase_derivative(&p.with_gamma(0.5 * (1.0 + 1e-12))).unwrap();
        assert_relative_eq!(right, 2.0 * PI, max_relative = 1e-10);
        assert_eq!(
            berry_phase(&p.with_pump(0.6, 0.8)),
            Err(Error::DegenerateBoundary)
        );
    }

    #[test]
    fn scaling_examples() {
        let p = ModelParams::dicke(0.0, 1.0);
        let s = berry_scaling_near_critical(&p, 1.01).unwrap();
        assert_relative_eq!(s.slope, 2.0 * PI, epsilon = 1e-14);
        assert_relative_eq!(s.phase_scaled, 2.0 * PI * 0.01, max_relative = 1e-12);
        assert_eq!(
            berry_scaling_near_critical(&p, 1.0).unwrap().phase_scaled,
            0.0
        );
        let pumped = p.with_pump(0.5, 0.5);
        let s = berry_scaling_near_critical(&pumped, 1.01).unwrap();
        assert_relative_eq!(s.slope, 4.0 * PI, epsilon = 1e-13);
        // γ_c = 1/2 → the literature coefficient is π ω₀² [..] instead of 2π [..]
        assert_relative_eq!(s.printed_slope, 2.0 * PI, epsilon = 1e-13);
    }

    #[test]
    fn scaling_matches_difference_quotient() {
        let p = ModelParams::dicke(0.0, 1.0).with_pump(0.3, -0.2);
        let gc = p.critical_coupling().unwrap();
        let h = 1e-7;
        let lam = |g: f64| berry_phase(&p.with_gamma(g * gc)).unwrap();
        let quotient = (lam(1.0 + h) - lam(1.0)) / h;
        let slope = berry_scaling_near_critical(&p, 1.0 + h).unwrap().slope;
        assert_relative_eq!(quotient, slope, max_relative = 1e-6);
    }

    fn valid_params() -> impl Strategy<Value = ModelParams> {
        (
            0.2f64..3.0,
            0.2f64..3.0,
            0.0f64..0.95,
            0.0f64..core::f64::consts::TAU,
            0.0f64..4.0,
            1u32..40,
        )
            .prop_map(|(wf, w0, r, a, ratio, two_j)| {
                let base = ModelParams::new(
                    wf,
                    w0,
                    0.0,
                    wf * r * a.cos(),
                    wf * r * a.sin(),
                    two_j as f64 / 2.0,
                );
                base.at_ratio(ratio).unwrap()
            })
    }

    proptest! {
        #[test]
        fn berry_identity_with_photon_number(p in valid_params()) {
            let lam = berry_phase(&p).unwrap() * p.omega_0 * p.omega_0 * p.atom_count();
            let n = order_parameters(&p).unwrap().n_mean;
            prop_assert!((lam - 2.0 * PI * n).abs() <= 1e-12 * lam.abs().max(1e-300));
        }

        #[test]
        fn photon_number_is_coherent(p in valid_params()) {
            let o = order_parameters(&p).unwrap();
            let coherent = 0.5 * (o.q_mean * o.q_mean + o.p_mean * o.p_mean);
            prop_assert!((o.n_mean - coherent).abs() <= 1e-12 * coherent.max(1e-300));
            prop_assert!(o.n_mean >= 0.0);
            prop_assert!(o.jz_mean.abs() <= p.j);
        }

        #[test]
        fn derivative_matches_difference_quotient(p in valid_params()) {
            let gc = p.critical_coupling().unwrap();
            let ratio = p.gamma / gc;
            prop_assume!((ratio - 1.0).abs() > 1e-2);
            let h = 1e-5 * ratio;
            let lam = |r: f64| berry_phase(&p.with_gamma(r * gc)).unwrap();
            let quotient = (lam(ratio + h) - lam(ratio - h)) / (2.0 * h);
            let exact = berry_phase_derivative(&p).unwrap();
            prop_assert!((quotient - exact).abs() <= 1e-6 * exact.abs().max(1e-12), "{quotient} vs {exact}");
        }

        #[test]
        fn berry_phase_increases_above_critical(p in valid_params(), step in 1e-3f64..1.0) {
            let gc = p.critical_coupling().unwrap();
            let ratio = (p.gamma / gc).max(1.0 + 1e-6);
            let lo = berry_phase(&p.with_gamma(ratio * gc)).unwrap();
            let hi = berry_phase(&p.with_gamma((ratio + step) * gc)).unwrap();
            prop_assert!(hi > lo);
        }
    }
}
