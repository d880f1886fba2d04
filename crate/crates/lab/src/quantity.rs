//! Named observables a sweep can tabulate.

use std::f64::consts::TAU;

use dicke_core::observables::{
    berry_phase, berry_phase_derivative, berry_scaling_near_critical, order_parameters,
};
use dicke_core::quantum::{
    berry_loop_numeric_with, converge_cutoff, ground_state, quantum_observables, BasisSpec,
    CutoffOptions, QuantumSystem, Sector, SolverOptions, SpectrumResult,
};
use dicke_core::semiclassics::{energy_surface, find_fixed_points, ground_energy};
use dicke_core::{Error as CoreError, FixedPointKind, ModelParams, OrderParameters, DEFAULT_TOL};

use crate::config::QuantumSettings;
use crate::table::Cell;

macro_rules! quantities {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Quantity { $($variant),* }

        impl Quantity {
            pub const ALL: &'static [Quantity] = &[$(Quantity::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(Quantity::$variant => $name),* }
            }

            pub fn parse(s: &str) -> Option<Self> {
                match s { $($name => Some(Quantity::$variant),)* _ => None }
            }
        }
    };
}

quantities! {
    Gamma => "gamma",
    Ratio => "Gamma",
    GammaC => "gamma_c",
    Phase => "phase",
    GroundEnergy => "ground_energy",
    EnergySurface => "energy_surface",
    QMean => "q_mean",
    PMean => "p_mean",
    NMean => "n_mean",
    JxMean => "jx_mean",
    JyMean => "jy_mean",
    JzMean => "jz_mean",
    VarQ => "var_q",
    VarP => "var_p",
    VarN => "var_n",
    VarJx => "var_jx",
    VarJy => "var_jy",
    VarJz => "var_jz",
    BerryPhase => "berry_phase",
    BerryDerivative => "berry_derivative",
    BerryPhaseUnscaled => "berry_phase_unscaled",
    BerryDerivativeUnscaled => "berry_derivative_unscaled",
    BerrySlope => "berry_slope",
    BerrySlopePrinted => "berry_slope_printed",
    SouthPoleStability => "south_pole_stability",
    NorthPoleStability => "north_pole_stability",
    SuperradiantStability => "superradiant_stability",
    EdGroundEnergy => "ed_ground_energy",
    EdJzMean => "ed_jz_mean",
    EdNMean => "ed_n_mean",
    EdGap => "ed_gap",
    EdNMax => "ed_n_max",
    BerryNumeric => "berry_numeric",
    BerryIdentityError => "berry_identity_error",
}

impl Quantity {
    pub fn needs_quantum(self) -> bool {
        matches!(
            self,
            Quantity::EdGroundEnergy
                | Quantity::EdJzMean
                | Quantity::EdNMean
                | Quantity::EdGap
                | Quantity::EdNMax
                | Quantity::BerryNumeric
                | Quantity::BerryIdentityError
        )
    }
}

/// Everything needed to evaluate quantities at one grid point.
#[derive(Debug, Clone, Copy)]
pub struct PointContext<'a> {
    pub params: ModelParams,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub quantum: Option<&'a QuantumSettings>,
}

/// Finite-`j` ground state in the even sector, with its cutoff status.
#[derive(Debug, Clone)]
pub struct QuantumPoint {
    pub result: SpectrumResult,
    pub observables: OrderParameters,
    /// Set when the cutoff did not converge within budget.
    pub budget_note: Option<String>,
}

/// Bytes held by one eigensolve on a sector of dimension `dim`: the
/// Krylov basis plus a few work vectors, and the sparse matrix.
pub fn solve_bytes(dim: usize) -> usize {
    let krylov = SolverOptions::default().krylov_dim;
    dim.saturating_mul(16 * (krylov + 8) + 7 * 24)
}

/// Even-sector solver whose dimension cap follows the memory budget.
pub fn solver_options(q: &QuantumSettings) -> SolverOptions {
    let budget = q.memory_budget_mb.saturating_mul(1 << 20);
    let max_dimension = (budget / solve_bytes(1)).max(1);
    SolverOptions {
        max_dimension,
        ..SolverOptions::default().in_sector(Sector::Even)
    }
}

/// Even-sector ground state with a fixed or converged cutoff.
pub fn solve_quantum(p: &ModelParams, q: &QuantumSettings) -> Result<QuantumPoint, CoreError> {
    let solver = solver_options(q);
    let (result, budget_note) = match q.n_max {
        Some(n) => (ground_state(&QuantumSystem::new(p, n)?, &solver)?, None),
        None => {
            let opts = CutoffOptions {
                e_tol: q.e_tol,
                max_n_max: q.max_n_max,
                initial_n_max: None,
                solver,
            };
            match converge_cutoff(p, &opts) {
                Ok(r) => (r, None),
                Err(e @ CoreError::BudgetExceeded { .. }) => {
                    let note = e.to_string();
                    let CoreError::BudgetExceeded { best, .. } = e else {
                        unreachable!()
                    };
                    (*best, Some(note))
                }
                Err(e) => return Err(e),
            }
        }
    };
    let basis = BasisSpec::new(p.j, result.n_max)?;
    let observables = quantum_observables(&result, &basis);
    Ok(QuantumPoint {
        result,
        observables,
        budget_note,
    })
}

fn stability_of(p: &ModelParams, kind: FixedPointKind) -> Result<Cell, CoreError> {
    let fps = find_fixed_points(p)?;
    Ok(fps
        .iter()
        .find(|f| f.kind == kind)
        .map_or(Cell::Null, |f| Cell::Text(f.stability.as_str().to_owned())))
}

/// Evaluates `quantities` at one point. Cells that fail are `Null`; the
/// first failure message is returned alongside.
pub fn evaluate_point(
    ctx: &PointContext<'_>,
    quantities: &[Quantity],
) -> (Vec<Cell>, Option<String>) {
    let p = &ctx.params;
    let mut first_error: Option<String> = None;
    let mut quantum: Option<Result<QuantumPoint, CoreError>> = None;
    let mut berry_loop = None;
    let mut cells = Vec::with_capacity(quantities.len());

    for &q in quantities {
        let value: Result<Cell, CoreError> = (|| {
            let n = p.atom_count();
            let w2n = p.omega_0 * p.omega_0 * n;
            Ok(match q {
                Quantity::Gamma => Cell::Num(p.gamma),
                Quantity::Ratio => Cell::Num(p.coupling_ratio()?),
                Quantity::GammaC => Cell::Num(p.critical_coupling()?),
                Quantity::Phase => Cell::Text(p.classify_phase(DEFAULT_TOL)?.as_str().to_owned()),
                Quantity::GroundEnergy => Cell::Num(ground_energy(p)?),
                Quantity::EnergySurface => {
                    let (Some(t), Some(f)) = (ctx.theta, ctx.phi) else {
                        return Err(CoreError::InvalidArgument(
                            "energy_surface needs theta and phi",
                        ));
                    };
                    Cell::Num(energy_surface(p, t, f)?)
                }
                Quantity::QMean => Cell::Num(order_parameters(p)?.q_mean),
                Quantity::PMean => Cell::Num(order_parameters(p)?.p_mean),
                Quantity::NMean => Cell::Num(order_parameters(p)?.n_mean),
                Quantity::JxMean => Cell::Num(order_parameters(p)?.jx_mean),
                Quantity::JyMean => Cell::Num(order_parameters(p)?.jy_mean),
                Quantity::JzMean => Cell::Num(order_parameters(p)?.jz_mean),
                Quantity::VarQ => Cell::Num(order_parameters(p)?.fluctuations.var_q),
                Quantity::VarP => Cell::Num(order_parameters(p)?.fluctuations.var_p),
                Quantity::VarN => Cell::Num(order_parameters(p)?.fluctuations.var_n),
                Quantity::VarJx => Cell::Num(order_parameters(p)?.fluctuations.var_jx),
                Quantity::VarJy => Cell::Num(order_parameters(p)?.fluctuations.var_jy),
                Quantity::VarJz => Cell::Num(order_parameters(p)?.fluctuations.var_jz),
                Quantity::BerryPhase => Cell::Num(berry_phase(p)?),
                Quantity::BerryDerivative => Cell::Num(berry_phase_derivative(p)?),
                Quantity::BerryPhaseUnscaled => Cell::Num(berry_phase(p)? * w2n),
                Quantity::BerryDerivativeUnscaled => Cell::Num(berry_phase_derivative(p)? * w2n),
                Quantity::BerrySlope => Cell::Num(berry_scaling_near_critical(p, 1.0)?.slope),
                Quantity::BerrySlopePrinted => {
                    Cell::Num(berry_scaling_near_critical(p, 1.0)?.printed_slope)
                }
                Quantity::SouthPoleStability => stability_of(p, FixedPointKind::SouthPole)?,
                Quantity::NorthPoleStability => stability_of(p, FixedPointKind::NorthPole)?,
                Quantity::SuperradiantStability => {
                    stability_of(p, FixedPointKind::SuperradiantPlus)?
                }
                Quantity::EdGroundEnergy
                | Quantity::EdJzMean
                | Quantity::EdNMean
                | Quantity::EdGap
                | Quantity::EdNMax
                | Quantity::BerryNumeric
                | Quantity::BerryIdentityError => {
                    let settings = ctx.quantum.ok_or(CoreError::InvalidArgument(
                        "quantity needs [quantum] settings",
                    ))?;
                    let qp = quantum
                        .get_or_insert_with(|| solve_quantum(p, settings))
                        .clone()?;
                    let r = &qp.result;
                    match q {
                        Quantity::EdGroundEnergy => Cell::Num(r.ground_energy / (p.omega_0 * p.j)),
                        Quantity::EdJzMean => Cell::Num(qp.observables.jz_mean / p.j),
                        Quantity::EdNMean => Cell::Num(qp.observables.n_mean),
                        Quantity::EdGap => Cell::Num(r.gap),
                        Quantity::EdNMax => Cell::Num(r.n_max as f64),
                        _ => {
                            if settings.berry_steps == 0 {
                                return Err(CoreError::InvalidArgument(
                                    "berry_steps = 0 disables the loop",
                                ));
                            }
                            let lp = berry_loop
                                .get_or_insert_with(|| {
                                    berry_loop_numeric_with(
                                        p,
                                        r.n_max,
                                        settings.berry_steps,
                                        &solver_options(settings),
                                    )
                                })
                                .clone()?;
                            if q == Quantity::BerryNumeric {
                                Cell::Num(lp.phase)
                            } else {
                                Cell::Num((lp.phase - TAU * qp.observables.n_mean).abs())
                            }
                        }
                    }
                }
            })
        })();
        match value {
            Ok(c) => cells.push(c),
            Err(e) => {
                first_error.get_or_insert_with(|| format!("{}: {e}", q.as_str()));
                cells.push(Cell::Null);
            }
        }
    }
    if first_error.is_none() {
        if let Some(Ok(QuantumPoint {
            budget_note: Some(note),
            ..
        })) = &quantum
        {
            first_error = Some(note.clone());
        }
    }
    (cells, first_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(Quantity::parse(q.as_str()), Some(*q));
        }
    }

    #[test]
    fn errors_become_null_cells() {
        let ctx = PointContext {
            params: ModelParams::dicke(0.3, 1.0).with_pump(0.6, 0.8),
            theta: None,
            phi: None,
            quantum: None,
        };
        let (cells, err) =
            evaluate_point(&ctx, &[Quantity::GammaC, Quantity::Ratio, Quantity::Phase]);
        assert_eq!(cells[0], Cell::Num(0.0));
        assert_eq!(cells[1], Cell::Null);
        assert_eq!(cells[2], Cell::Text("degenerate-boundary".into()));
        assert!(err.unwrap().starts_with("Gamma:"));
    }
}
