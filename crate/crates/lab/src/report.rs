//! Tables for single-parameter-set commands.

use dicke_core::semiclassics::{
    find_fixed_points, integrate_trajectory_with, ClassicalState, IntegratorOptions,
};
use dicke_core::ModelParams;
use serde_json::Value;

use crate::config::{SweepSpec, TrajectorySettings};
use crate::sweep::base_metadata;
use crate::table::{Cell, Table};
use crate::LabError;

/// All fixed points with their stability and Hessian spectrum.
pub fn fixed_point_table(p: &ModelParams) -> Result<Table, LabError> {
    let fps = find_fixed_points(p)?;
    let mut t = Table::new([
        "kind",
        "q",
        "p",
        "theta",
        "phi",
        "stability",
        "hessian_1",
        "hessian_2",
        "hessian_3",
        "hessian_4",
        "energy",
        "gradient_norm",
    ]);
    for f in &fps {
        let s = &f.state;
        let mut row = vec![
            Cell::Text(f.kind.as_str().into()),
            Cell::Num(s.q),
            Cell::Num(s.p),
            Cell::Num(s.theta),
            Cell::Num(s.phi),
            Cell::Text(f.stability.as_str().into()),
        ];
        row.extend(f.hessian_eigenvalues.iter().map(|v| Cell::Num(*v)));
        row.extend([Cell::Num(f.energy), Cell::Num(f.gradient_norm)]);
        t.push_row(row);
    }
    t.metadata = base_metadata(
        "fixed-points",
        &SweepSpec {
            model: *p,
            ..SweepSpec::default()
        },
    );
    Ok(t)
}

/// Integrates the classical flow from the `[trajectory]` start point.
pub fn trajectory_table(spec: &SweepSpec) -> Result<Table, LabError> {
    let settings: TrajectorySettings = spec.trajectory.unwrap_or_default();
    spec.model.validate_basic()?;
    let s0 = ClassicalState::new(settings.q, settings.p, settings.theta, settings.phi);
    let opts = IntegratorOptions::new(settings.rel_tol);
    let tr = integrate_trajectory_with(&spec.model, &s0, settings.t_end, &opts)?;
    let mut t = Table::new(["t", "q", "p", "theta", "phi", "energy"]);
    let last = tr.samples.len() - 1;
    for (i, s) in tr.samples.iter().enumerate() {
        if i % settings.stride == 0 || i == last {
            let st = &s.state;
            t.push_row(
                [s.t, st.q, st.p, st.theta, st.phi, s.energy]
                    .map(Cell::Num)
                    .to_vec(),
            );
        }
    }
    t.metadata = base_metadata("trajectory", spec);
    let stats = &tr.stats;
    let mut m = serde_json::Map::new();
    m.insert("accepted_steps".into(), Value::from(stats.accepted_steps));
    m.insert("rejected_steps".into(), Value::from(stats.rejected_steps));
    m.insert("rhs_evaluations".into(), Value::from(stats.rhs_evaluations));
    m.insert(
        "max_relative_drift".into(),
        Value::from(stats.max_relative_drift),
    );
    t.metadata.insert("integrator".into(), Value::Object(m));
    Ok(t)
}
