//! Finite-`j` exact diagonalization against the thermodynamic-limit formulas.

use std::f64::consts::TAU;

use dicke_core::observables::{berry_phase, order_parameters};
use dicke_core::quantum::berry_loop_numeric_with;
use dicke_core::semiclassics::ground_energy;
use dicke_core::ModelParams;
use serde_json::Value;

use crate::config::SweepSpec;
use crate::quantity::{solve_quantum, solver_options};
use crate::sweep::{base_metadata, grid, par_map, point_context, quantum_bytes, MemoryGate};
use crate::table::{Cell, Table};
use crate::LabError;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// One row per (grid point, j).
    pub points: Table,
    /// One row per (grid point, observable): how the deviation evolves with j.
    pub trend: Table,
}

/// Compared observables, each intensive.
const OBSERVABLES: [&str; 3] = ["e0", "jz", "n"];

#[derive(Debug, Clone, Default)]
struct Row {
    n_max: Option<f64>,
    converged: Option<f64>,
    ed: [Option<f64>; 3],
    tl: [Option<f64>; 3],
    berry_numeric: Option<f64>,
    berry_ed: Option<f64>,
    berry_tl: Option<f64>,
    identity_error: Option<f64>,
    error: Option<String>,
}

fn note(row: &mut Row, msg: String) {
    match &mut row.error {
        Some(e) => {
            e.push_str("; ");
            e.push_str(&msg);
        }
        None => row.error = Some(msg),
    }
}

fn evaluate(spec: &SweepSpec, p: &ModelParams) -> Row {
    let q = spec.quantum.as_ref().expect("checked by validate_quantum");
    let mut row = Row::default();
    let wj = p.omega_0 * p.j;
    if let (Ok(e0), Ok(op)) = (ground_energy(p), order_parameters(p)) {
        row.tl = [Some(e0), Some(op.jz_mean / p.j), Some(op.n_mean / p.j)];
    }
    if let Ok(b) = berry_phase(p) {
        row.berry_tl = Some(b * p.omega_0 * p.omega_0 * p.atom_count());
    }
    let qp = match solve_quantum(p, q) {
        Ok(qp) => qp,
        Err(e) => {
            note(&mut row, e.to_string());
            return row;
        }
    };
    let r = &qp.result;
    row.n_max = Some(r.n_max as f64);
    row.converged = Some(if qp.budget_note.is_none() { 1.0 } else { 0.0 });
    if let Some(n) = &qp.budget_note {
        note(&mut row, n.clone());
    }
    row.ed = [
        Some(r.ground_energy / wj),
        Some(qp.observables.jz_mean / p.j),
        Some(qp.observables.n_mean / p.j),
    ];
    row.berry_ed = Some(TAU * qp.observables.n_mean);
    let even_dim = r.ground_vector.len().div_ceil(2);
    if q.berry_steps > 0 && even_dim > q.berry_max_dimension {
        note(
            &mut row,
            format!(
                "berry loop skipped: sector dimension {even_dim} > {}",
                q.berry_max_dimension
            ),
        );
    } else if q.berry_steps > 0 {
        match berry_loop_numeric_with(p, r.n_max, q.berry_steps, &solver_options(q)) {
            Ok(b) => {
                row.berry_numeric = Some(b.phase);
                row.identity_error = Some((b.phase - TAU * qp.observables.n_mean).abs());
            }
            Err(e) => note(&mut row, format!("berry loop: {e}")),
        }
    }
    row
}

fn dev(ed: Option<f64>, tl: Option<f64>) -> (Option<f64>, Option<f64>) {
    match (ed, tl) {
        (Some(a), Some(b)) => {
            let abs = (a - b).abs();
            (Some(abs), Some(if b != 0.0 { abs / b.abs() } else { abs }))
        }
        _ => (None, None),
    }
}

/// Runs converge-cutoff, observables and the Berry identity for every grid
/// point and every `j` in the `[quantum]` section.
pub fn validate_quantum(spec: &SweepSpec, threads: usize) -> Result<ValidationReport, LabError> {
    let q = spec
        .quantum
        .as_ref()
        .ok_or_else(|| LabError::Usage("quantum-validate needs a [quantum] section".into()))?;
    let js = if q.j.is_empty() {
        vec![spec.model.j]
    } else {
        q.j.clone()
    };
    let points = grid(spec);
    let jobs: Vec<(usize, f64)> = (0..points.len())
        .flat_map(|i| js.iter().map(move |&j| (i, j)))
        .collect();
    let gate = MemoryGate::new(q.memory_budget_mb.saturating_mul(1 << 20));

    let rows = par_map(&jobs, threads, |&(i, j)| {
        let spec_j = SweepSpec {
            model: spec.model.with_j(j),
            ..spec.clone()
        };
        match point_context(&spec_j, &points[i]) {
            Ok(ctx) => {
                let _ticket = gate.acquire(quantum_bytes(&ctx.params, q.n_max));
                evaluate(&spec_j, &ctx.params)
            }
            Err(e) => Row {
                error: Some(e.to_string()),
                ..Row::default()
            },
        }
    })?;

    let axis_names: Vec<String> = spec
        .axes
        .iter()
        .map(|a| a.name.as_str().to_owned())
        .collect();
    let mut names: Vec<String> = vec!["point".into()];
    names.extend(axis_names.iter().cloned());
    names.extend(["j", "n_max", "cutoff_converged"].map(String::from));
    for o in OBSERVABLES {
        names.extend(["ed", "tl", "abs_dev", "rel_dev"].map(|s| format!("{o}_{s}")));
    }
    names.extend(
        [
            "berry_numeric",
            "berry_ed",
            "berry_tl",
            "berry_identity_error",
            "error",
        ]
        .map(String::from),
    );
    let mut table = Table::new(names);
    for (&(i, j), row) in jobs.iter().zip(&rows) {
        let mut cells = vec![Cell::Num(i as f64)];
        cells.extend(points[i].iter().map(|v| Cell::Num(*v)));
        cells.extend([Cell::Num(j), row.n_max.into(), row.converged.into()]);
        for k in 0..OBSERVABLES.len() {
            let (abs, rel) = dev(row.ed[k], row.tl[k]);
            cells.extend([row.ed[k].into(), row.tl[k].into(), abs.into(), rel.into()]);
        }
        cells.extend([
            row.berry_numeric.into(),
            row.berry_ed.into(),
            row.berry_tl.into(),
            row.identity_error.into(),
            row.error.clone().map_or(Cell::Null, Cell::Text),
        ]);
        table.push_row(cells);
    }
    table.metadata = base_metadata("quantum-validate", spec);
    table.metadata.insert("j".into(), Value::from(js.clone()));

    let mut trend_names: Vec<String> = vec!["point".into()];
    trend_names.extend(axis_names);
    trend_names.extend(
        [
            "observable",
            "j_first",
            "j_last",
            "abs_dev_first",
            "abs_dev_last",
            "monotone_decreasing",
        ]
        .map(String::from),
    );
    let mut trend = Table::new(trend_names);
    for (i, values) in points.iter().enumerate() {
        let group: Vec<(f64, &Row)> = jobs
            .iter()
            .zip(&rows)
            .filter(|((pi, _), _)| *pi == i)
            .map(|((_, j), r)| (*j, r))
            .collect();
        for (k, o) in OBSERVABLES.iter().enumerate() {
            let devs: Vec<Option<f64>> =
                group.iter().map(|(_, r)| dev(r.ed[k], r.tl[k]).0).collect();
            let monotone = if devs.iter().all(Option::is_some) && devs.len() > 1 {
                let d: Vec<f64> = devs.iter().map(|d| d.unwrap()).collect();
                Cell::Text(
                    if d.windows(2).all(|w| w[1] < w[0]) {
                        "yes"
                    } else {
                        "no"
                    }
                    .into(),
                )
            } else {
                Cell::Null
            };
            let mut cells = vec![Cell::Num(i as f64)];
            cells.extend(values.iter().map(|v| Cell::Num(*v)));
            cells.extend([
                Cell::Text((*o).into()),
                Cell::Num(group.first().map_or(f64::NAN, |g| g.0)),
                Cell::Num(group.last().map_or(f64::NAN, |g| g.0)),
                devs.first().copied().flatten().into(),
                devs.last().copied().flatten().into(),
                monotone,
            ]);
            trend.push_row(cells);
        }
    }
    trend.metadata = table.metadata.clone();
    Ok(ValidationReport {
        points: table,
        trend,
    })
}
