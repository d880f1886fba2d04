use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_traits::Float;

use super::{classical_energy, energy_scale, hamilton_rhs, spin_field_coupling, ClassicalState};
use crate::{Error, ModelParams, Result, DEFAULT_TOL};

/// Which stationary point of the energy surface a [`FixedPoint`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    /// `θ = 0`, all atoms in the ground state.
    SouthPole,
    /// `θ = π`, full inversion.
    NorthPole,
    /// Superradiant point at `φ = 0` carrying `(q_c, p_c)`.
    SuperradiantPlus,
    /// Parity mirror at `φ = π` carrying `(−q_c, −p_c)`.
    SuperradiantMinus,
}

impl FixedPointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FixedPointKind::SouthPole => "south-pole",
            FixedPointKind::NorthPole => "north-pole",
            FixedPointKind::SuperradiantPlus => "superradiant-plus",
            FixedPointKind::SuperradiantMinus => "superradiant-minus",
        }
    }
}

/// Sign structure of the energy Hessian at a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    /// Local energy minimum: all eigenvalues positive.
    Stable,
    /// Local energy maximum: all eigenvalues negative.
    Unstable,
    /// Eigenvalues of both signs.
    Saddle,
    /// At least one eigenvalue vanishes within tolerance.
    Degenerate,
}

impl Stability {
    pub fn is_unstable(self) -> bool {
        matches!(self, Stability::Unstable | Stability::Saddle)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Saddle => "saddle",
            Stability::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub kind: FixedPointKind,
    pub state: ClassicalState,
    pub stability: Stability,
    /// Hessian eigenvalues in ascending order.
    pub hessian_eigenvalues: [f64; 4],
    /// Scaled energy `E/(ω₀ j)`.
    pub energy: f64,
    /// `‖∇E‖ / max(ω₀ j, ω_f)` in the chart used for stability.
    pub gradient_norm: f64,
    /// `‖(q̇, ṗ, φ̇, θ̇)‖ / max(ω₀ j, ω_f)`.
    pub rhs_norm: f64,
    /// Distance moved by Newton polishing of the closed-form coordinates.
    pub refinement_shift: f64,
}

/// Output of [`classify_stability`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub stability: Stability,
    pub hessian_eigenvalues: [f64; 4],
    pub gradient_norm: f64,
}

/// Local coordinates on phase space.
///
/// The `(θ, φ)` chart is singular at the poles, where `φ` is undefined;
/// there the tangent-plane chart `(X, Y) = sin θ (cos φ, sin φ)` is used,
/// which is in turn singular on the equator.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    Spherical,
    /// `hemisphere = +1` near the south pole, `−1` near the north pole.
    Tangent {
        hemisphere: f64,
    },
}

impl Chart {
    fn for_state(s: &ClassicalState) -> Result<Self> {
        let (sin_t, cos_t) = s.theta.sin_cos();
        if !s.is_finite() {
            return Err(Error::DegenerateChart { theta: s.theta });
        }
        if sin_t >= 0.5 {
            Ok(Chart::Spherical)
        } else {
            Ok(Chart::Tangent {
                hemisphere: if cos_t >= 0.0 { 1.0 } else { -1.0 },
            })
        }
    }

    fn coords(self, s: &ClassicalState) -> Vector4<f64> {
        match self {
            Chart::Spherical => Vector4::new(s.q, s.p, s.theta, s.phi),
            Chart::Tangent { .. } => {
                let sin_t = s.theta.sin();
                Vector4::new(s.q, s.p, sin_t * s.phi.cos(), sin_t * s.phi.sin())
            }
        }
    }

    fn state(self, x: &Vector4<f64>) -> ClassicalState {
        match self {
            Chart::Spherical => ClassicalState::new(x[0], x[1], x[2], x[3]),
            Chart::Tangent { hemisphere } => {
                let rho = (x[2] * x[2] + x[3] * x[3]).sqrt().min(1.0);
                let theta = rho.atan2(hemisphere * (1.0 - rho * rho).sqrt());
                let phi = if rho == 0.0 { 0.0 } else { x[3].atan2(x[2]) };
                ClassicalState::new(x[0], x[1], theta, phi)
            }
        }
    }

    /// Gradient and Hessian of the classical energy in this chart.
    fn derivatives(self, p: &ModelParams, x: &Vector4<f64>) -> (Vector4<f64>, Matrix4<f64>) {
        let c = spin_field_coupling(p);
        let w = p.omega_0 * p.j;
        let (q, pp) = (x[0], x[1]);
        let field_q = (p.omega_f + p.k1) * q + p.k2 * pp;
        let field_p = (p.omega_f - p.k1) * pp + p.k2 * q;
        let mut h = Matrix4::zeros();
        h[(0, 0)] = p.omega_f + p.k1;
        h[(1, 1)] = p.omega_f - p.k1;
        h[(0, 1)] = p.k2;
        h[(1, 0)] = p.k2;
        match self {
            Chart::Spherical => {
                let (sin_t, cos_t) = x[2].sin_cos();
                let (sin_p, cos_p) = x[3].sin_cos();
                let g = Vector4::new(
                    field_q + c * sin_t * cos_p,
                    field_p,
                    w * sin_t + c * q * cos_t * cos_p,
                    -c * q * sin_t * sin_p,
                );
                h[(0, 2)] = c * cos_t * cos_p;
                h[(0, 3)] = -c * sin_t * sin_p;
                h[(2, 2)] = w * cos_t - c * q * sin_t * cos_p;
                h[(2, 3)] = -c * q * cos_t * sin_p;
                h[(3, 3)] = -c * q * sin_t * cos_p;
                h[(2, 0)] = h[(0, 2)];
                h[(3, 0)] = h[(0, 3)];
                h[(3, 2)] = h[(2, 3)];
                (g, h)
            }
            Chart::Tangent { hemisphere: s } => {
                let (u, v) = (x[2], x[3]);
                let r = (1.0 - u * u - v * v).max(0.0).sqrt();
                let r3 = r * r * r;
                let g = Vector4::new(
                    field_q + c * u,
                    field_p,
                    s * w * u / r + c * q,
                    s * w * v / r,
                );
                h[(0, 2)] = c;
                h[(2, 0)] = c;
                h[(2, 2)] = s * w * (1.0 / r + u * u / r3);
                h[(3, 3)] = s * w * (1.0 / r + v * v / r3);
                h[(2, 3)] = s * w * u * v / r3;
                h[(3, 2)] = h[(2, 3)];
                (g, h)
            }
        }
    }
}

fn sorted_eigenvalues(h: Matrix4<f64>) -> [f64; 4] {
    let eig = SymmetricEigen::new(h);
    let mut ev = [
        eig.eigenvalues[0],
        eig.eigenvalues[1],
        eig.eigenvalues[2],
        eig.eigenvalues[3],
    ];
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn label(eigenvalues: &[f64; 4]) -> Stability {
    let largest = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let zero_tol = DEFAULT_TOL * largest.max(f64::MIN_POSITIVE);
    if eigenvalues.iter().any(|e| e.abs() <= zero_tol) {
        Stability::Degenerate
    } else if eigenvalues.iter().all(|&e| e > 0.0) {
        Stability::Stable
    } else if eigenvalues.iter().all(|&e| e < 0.0) {
        Stability::Unstable
    } else {
        Stability::Saddle
    }
}

/// Labels a stationary point by the signs of the 4×4 energy Hessian,
/// evaluated in a chart that is regular at the point.
///
/// Fails with [`Error::InvalidArgument`] if `state` is not stationary.
pub fn classify_stability(p: &ModelParams, state: &ClassicalState) -> Result<StabilityReport> {
    p.validate_basic()?;
    let chart = Chart::for_state(state)?;
    let x = chart.coords(state);
    let (g, h) = chart.derivatives(p, &x);
    if !h.iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateChart { theta: state.theta });
    }
    let gradient_norm = g.norm() / energy_scale(p);
    if gradient_norm > 1e-6 {
        return Err(Error::InvalidArgument(
            "state is not a stationary point of the energy",
        ));
    }
    let hessian_eigenvalues = sorted_eigenvalues(h);
    Ok(StabilityReport {
        stability: label(&hessian_eigenvalues),
        hessian_eigenvalues,
        gradient_norm,
    })
}

/// Closed-form superradiant pair `[(q_c, p_c, θ_c, 0), (−q_c, −p_c, θ_c, π)]`,
/// or `None` when `Γ ≤ 1`.
pub fn superradiant_point_analytic(p: &ModelParams) -> Result<Option<[ClassicalState; 2]>> {
    let gc = p.critical_coupling()?;
    if gc == 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    let ratio = p.gamma / gc;
    if ratio <= 1.0 {
        return Ok(None);
    }
    let inv_sq = 1.0 / (ratio * ratio);
    let q_c = -(p.omega_0 * p.j.sqrt() * ratio / (2.0 * gc)) * (1.0 - inv_sq * inv_sq).sqrt();
    let p_c = -p.k2 / p.detuned_field() * q_c;
    let theta_c = inv_sq.acos();
    Ok(Some([
        ClassicalState::new(q_c, p_c, theta_c, 0.0),
        ClassicalState::new(-q_c, -p_c, theta_c, PI),
    ]))
}

/// Damped Newton iteration on `∇E = 0` starting from `start`.
fn polish(p: &ModelParams, start: &ClassicalState) -> Result<ClassicalState> {
    let chart = Chart::for_state(start)?;
    let scale = energy_scale(p);
    let mut x = chart.coords(start);
    let (mut g, mut h) = chart.derivatives(p, &x);
    for _ in 0..50 {
        let gnorm = g.norm();
        if gnorm / scale < 1e-14 {
            break;
        }
        let Some(step) = h.lu().solve(&g) else { break };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = x - step * t;
            let (gt, ht) = chart.derivatives(p, &trial);
            if gt.norm() < gnorm {
                x = trial;
                g = gt;
                h = ht;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Ok(chart.state(&x))
}

fn build_point(
    p: &ModelParams,
    kind: FixedPointKind,
    analytic: ClassicalState,
    refine: bool,
) -> Result<FixedPoint> {
    let state = if refine {
        polish(p, &analytic)?
    } else {
        analytic
    };
    let report = classify_stability(p, &state)?;
    let shift = ((state.q - analytic.q).powi(2)
        + (state.p - analytic.p).powi(2)
        + (state.theta - analytic.theta).powi(2))
    .sqrt();
    let scale = energy_scale(p);
    Ok(FixedPoint {
        kind,
        state,
        stability: report.stability,
        hessian_eigenvalues: report.hessian_eigenvalues,
        energy: classical_energy(p, &state) / (p.omega_0 * p.j),
        gradient_norm: report.gradient_norm,
        rhs_norm: hamilton_rhs(p, &state).norm() / scale,
        refinement_shift: shift,
    })
}

/// All stationary points of the classical energy.
///
/// The two poles are always present. For `Γ > 1` the superradiant pair at
/// `φ = 0, π` with `θ_c = arccos Γ⁻²` is added; its closed-form coordinates
/// are polished by Newton iteration and the shift is recorded. At `Γ = 1`
/// the pair merges into the south pole, which is then labelled
/// [`Stability::Degenerate`].
///
/// On the degenerate boundary the field quadratic form has a zero mode and
/// the energy is unbounded below for `γ > 0`, so no finite pair exists;
/// this returns [`Error::DegenerateBoundary`].
pub fn find_fixed_points(p: &ModelParams) -> Result<Vec<FixedPoint>> {
    p.validate()?;
    if p.on_degenerate_boundary() {
        return Err(Error::DegenerateBoundary);
    }
    let mut points = Vec::with_capacity(4);
    points.push(build_point(
        p,
        FixedPointKind::SouthPole,
        ClassicalState::south_pole(),
        false,
    )?);
    points.push(build_point(
        p,
        FixedPointKind::NorthPole,
        ClassicalState::north_pole(),
        false,
    )?);
    let ratio = p.coupling_ratio()?;
    if ratio > 1.0 + DEFAULT_TOL {
        if let Some([plus, minus]) = superradiant_point_analytic(p)? {
            points.push(build_point(
                p,
                FixedPointKind::SuperradiantPlus,
                plus,
                true,
            )?);
            points.push(build_point(
                p,
                FixedPointKind::SuperradiantMinus,
                minus,
                true,
            )?);
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiclassics::ground_energy;
    use approx::assert_relative_eq;

    fn kinds(points: &[FixedPoint]) -> Vec<FixedPointKind> {
        points.iter().map(|f| f.kind).collect()
    }

    #[test]
    fn normal_phase_has_two_poles() {
        let p = ModelParams::dicke(0.25, 1.0);
        let fps = find_fixed_points(&p).unwrap();
        assert_eq!(
            kinds(&fps),
            [FixedPointKind::SouthPole, FixedPointKind::NorthPole]
        );
        assert_eq!(fps[0].stability, Stability::Stable);
        assert!(fps[1].stability.is_unstable());
    }

    #[test]
    fn superradiant_pair_coordinates() {
        let p = ModelParams::dicke(1.0, 1.0);
        let fps = find_fixed_points(&p).unwrap();
        assert_eq!(fps.len(), 4);
        let plus = fps[2];
        assert_relative_eq!(plus.state.theta, 0.25f64.acos(), epsilon = 1e-12);
        assert_relative_eq!(plus.state.theta, 1.318_116_071_652_818, epsilon = 1e-12);
        // q_c = −(1·1·2/(2·0.5))·√(1 − 1/16) = −2√(15/16)
        assert_relative_eq!(plus.state.q, -1.936_491_673_103_708_5, epsilon = 1e-12);
        assert_eq!(plus.state.p, 0.0);
        assert_eq!(plus.stability, Stability::Stable);
        assert!(plus.refinement_shift < 1e-12);
        assert!(fps[0].stability.is_unstable());
    }

    #[test]
    fn pumped_pair_has_p_equal_minus_q() {
        let p = ModelParams::dicke(1.0, 1.0).with_pump(0.5, 0.5);
        let fps = find_fixed_points(&p).unwrap();
        let plus = fps[2].state;
        assert_relative_eq!(plus.p, -plus.q, epsilon = 1e-12);
        let minus = fps[3].state;
        assert_relative_eq!(minus.q, -plus.q, epsilon = 1e-12);
        assert_relative_eq!(minus.phi, PI, epsilon = 1e-12);
        assert_relative_eq!(fps[2].energy, fps[3].energy, epsilon = 1e-12);
        assert_relative_eq!(fps[2].energy, ground_energy(&p).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn critical_point_is_degenerate() {
        let p = ModelParams::dicke(0.5, 1.0);
        let fps = find_fixed_points(&p).unwrap();
        assert_eq!(fps.len(), 2);
        assert_eq!(fps[0].stability, Stability::Degenerate);
    }

    #[test]
    fn degenerate_boundary_is_reported() {
        let p = ModelParams::dicke(0.1, 1.0).with_pump(0.6, 0.8);
        assert_eq!(find_fixed_points(&p), Err(Error::DegenerateBoundary));
    }

    #[test]
    fn stability_rejects_non_stationary_state() {
        let p = ModelParams::dicke(0.3, 1.0);
        let s = ClassicalState::new(0.5, 0.0, 1.0, 0.0);
        assert!(matches!(
            classify_stability(&p, &s),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn charts_agree_on_sign_structure() {
        // θ_c ≈ 0.72 for Γ = 1.2 lies in the spherical chart; the tangent chart
        // must give the same inertia there.
        let p = ModelParams::dicke(0.6, 1.5).with_pump(0.2, 0.3);
        let [plus, _] = superradiant_point_analytic(&p).unwrap().unwrap();
        let plus = polish(&p, &plus).unwrap();
        let sph = Chart::Spherical;
        let tan = Chart::Tangent { hemisphere: 1.0 };
        let (_, hs) = sph.derivatives(&p, &sph.coords(&plus));
        let (gt, ht) = tan.derivatives(&p, &tan.coords(&plus));
        assert!(gt.norm() < 1e-10);
        assert_eq!(label(&sorted_eigenvalues(hs)), Stability::Stable);
        assert_eq!(label(&sorted_eigenvalues(ht)), Stability::Stable);
    }

    #[test]
    fn tangent_chart_round_trip() {
        for hemisphere in [1.0, -1.0] {
            let chart = Chart::Tangent { hemisphere };
            let theta = if hemisphere > 0.0 { 0.3 } else { PI - 0.3 };
            let s = ClassicalState::new(0.1, -0.2, theta, 2.0);
            let back = chart.state(&chart.coords(&s));
            assert_relative_eq!(back.theta, s.theta, epsilon = 1e-14);
            assert_relative_eq!(back.phi, s.phi, epsilon = 1e-14);
        }
    }
}
