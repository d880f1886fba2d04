use alloc::vec::Vec;

use num_traits::Float;

use super::{classical_energy, hamilton_rhs, ClassicalState};
use crate::{Error, ModelParams, Result};

// Dormand–Prince 5(4) tableau; the flow is autonomous so the nodes c_i are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights are the last row of A (FSAL)
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Abort once `|E − E(0)| / max(|E(0)|, ω₀ j)` exceeds `drift_factor · rel_tol`.
    pub drift_factor: f64,
    pub max_steps: usize,
    /// Initial step; chosen from the flow speed when `None`.
    pub initial_step: Option<f64>,
}

impl IntegratorOptions {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: rel_tol,
            drift_factor: 100.0,
            max_steps: 10_000_000,
            initial_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: ClassicalState,
    /// Scaled energy `E/(ω₀ j)`.
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegratorStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    pub max_relative_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub stats: IntegratorStats,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }
}

type Vec4 = [f64; 4];

fn rhs(p: &ModelParams, y: &Vec4) -> Vec4 {
    let s = ClassicalState {
        q: y[0],
        p: y[1],
        theta: y[2],
        phi: y[3],
    };
    let d = hamilton_rhs(p, &s);
    [d.dq, d.dp, d.dtheta, d.dphi]
}

fn state_of(y: &Vec4) -> ClassicalState {
    ClassicalState::new(y[0], y[1], y[2], y[3])
}

/// Integrates Hamilton's equations from `s0` over `[0, t_end]` with an
/// adaptive Dormand–Prince 5(4) pair at relative tolerance `rel_tol`.
pub fn integrate_trajectory(
    p: &ModelParams,
    s0: &ClassicalState,
    t_end: f64,
    rel_tol: f64,
) -> Result<Trajectory> {
    integrate_trajectory_with(p, s0, t_end, &IntegratorOptions::new(rel_tol))
}

pub fn integrate_trajectory_with(
    p: &ModelParams,
    s0: &ClassicalState,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    p.validate_basic()?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument("t_end must be positive and finite"));
    }
    if !(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive"));
    }
    if !s0.is_finite() {
        return Err(Error::InvalidArgument("initial state must be finite"));
    }

    let energy_unit = p.omega_0 * p.j;
    let e0 = classical_energy(p, s0);
    let drift_denominator = e0.abs().max(energy_unit);
    let drift_bound = opts.drift_factor * opts.rel_tol;

    let mut y: Vec4 = [s0.q, s0.p, s0.theta, s0.phi];
    let mut t = 0.0;
    let mut stats = IntegratorStats::default();
    let mut samples = Vec::new();
    samples.push(TrajectorySample {
        t,
        state: state_of(&y),
        energy: e0 / energy_unit,
    });

    let mut k = [[0.0; 4]; 7];
    k[0] = rhs(p, &y);
    stats.rhs_evaluations += 1;
    let speed = k[0].iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut h = opts
        .initial_step
        .unwrap_or_else(|| 0.01 * opts.rel_tol.powf(0.2) / speed.max(1e-3))
        .min(t_end);

    while t < t_end {
        if stats.accepted_steps + stats.rejected_steps >= opts.max_steps {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * (1.0 + t.abs()) {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        for stage in 1..7 {
            let mut ys = y;
            for (prev, a) in A[stage].iter().enumerate().take(stage) {
                if *a != 0.0 {
                    for i in 0..4 {
                        ys[i] += h * a * k[prev][i];
                    }
                }
            }
            k[stage] = rhs(p, &ys);
        }
        stats.rhs_evaluations += 6;

        let mut y_new = y;
        let mut err_sq = 0.0;
        for i in 0..4 {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for s in 0..7 {
                hi += B5[s] * k[s][i];
                lo += B4[s] * k[s][i];
            }
            y_new[i] = y[i] + h * hi;
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            let e = h * (hi - lo) / sc;
            err_sq += e * e;
        }
        let err = (err_sq / 4.0).sqrt();

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            k[0] = k[6];
            stats.accepted_steps += 1;

            let state = state_of(&y);
            let e = classical_energy(p, &state);
            let drift = (e - e0).abs() / drift_denominator;
            stats.max_relative_drift = stats.max_relative_drift.max(drift);
            samples.push(TrajectorySample {
                t,
                state,
                energy: e / energy_unit,
            });
            if drift > drift_bound {
                return Err(Error::EnergyDriftExceeded {
                    t,
                    drift,
                    bound: drift_bound,
                });
            }
        } else {
            stats.rejected_steps += 1;
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }

    Ok(Trajectory { samples, stats })
}
