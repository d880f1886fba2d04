//! Parallel grid evaluation.

use std::sync::{Condvar, Mutex};

use dicke_core::quantum::initial_cutoff;
use dicke_core::ModelParams;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{AxisName, SweepSpec};
use crate::quantity::{evaluate_point, solve_bytes, PointContext, Quantity};
use crate::table::{Cell, Table};
use crate::LabError;

/// One grid point: the axis values in axis order.
pub type GridPoint = Vec<f64>;

/// Cartesian product of the axes, first axis outermost.
pub fn grid(spec: &SweepSpec) -> Vec<GridPoint> {
    let mut points: Vec<GridPoint> = vec![Vec::new()];
    for axis in &spec.axes {
        let values = axis.values();
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    points
}

/// Applies the axis values to the template. `Γ` is applied last, after
/// every parameter `γ_c` depends on.
pub fn point_context<'a>(
    spec: &'a SweepSpec,
    values: &[f64],
) -> Result<PointContext<'a>, dicke_core::Error> {
    let mut p: ModelParams = spec.model;
    let (mut theta, mut phi, mut ratio) = (None, None, None);
    for (axis, &v) in spec.axes.iter().zip(values) {
        match axis.name {
            AxisName::Gamma => p.gamma = v,
            AxisName::Ratio => ratio = Some(v),
            AxisName::K1 => p.k1 = v,
            AxisName::K2 => p.k2 = v,
            AxisName::OmegaF => p.omega_f = v,
            AxisName::Omega0 => p.omega_0 = v,
            AxisName::J => p.j = v,
            AxisName::Theta => theta = Some(v),
            AxisName::Phi => phi = Some(v),
        }
    }
    if let Some(r) = ratio {
        p = p.at_ratio(r)?;
    }
    Ok(PointContext {
        params: p,
        theta,
        phi,
        quantum: spec.quantum.as_ref(),
    })
}

/// Caps the total memory of concurrently running eigensolves.
#[derive(Debug)]
pub struct MemoryGate {
    budget: usize,
    used: Mutex<usize>,
    released: Condvar,
}

#[derive(Debug)]
pub struct GateTicket<'a> {
    gate: &'a MemoryGate,
    bytes: usize,
}

impl MemoryGate {
    pub fn new(budget: usize) -> Self {
        Self {
            budget: budget.max(1),
            used: Mutex::new(0),
            released: Condvar::new(),
        }
    }

    /// Blocks until `bytes` (capped at the budget) fit.
    pub fn acquire(&self, bytes: usize) -> GateTicket<'_> {
        let bytes = bytes.min(self.budget);
        let mut used = self.used.lock().expect("gate poisoned");
        while *used + bytes > self.budget {
            used = self.released.wait(used).expect("gate poisoned");
        }
        *used += bytes;
        GateTicket { gate: self, bytes }
    }

    pub fn in_use(&self) -> usize {
        *self.used.lock().expect("gate poisoned")
    }
}

impl Drop for GateTicket<'_> {
    fn drop(&mut self) {
        *self.gate.used.lock().expect("gate poisoned") -= self.bytes;
        self.gate.released.notify_all();
    }
}

/// Estimated peak memory of the quantum work at one point.
pub fn quantum_bytes(p: &ModelParams, n_max: Option<usize>) -> usize {
    let n = n_max.unwrap_or_else(|| initial_cutoff(p));
    let spin = (2.0 * p.j).round() as usize + 1;
    solve_bytes((n + 1) * spin / 2 + 1)
}

/// Runs `f` on every item of `items` on a pool with `threads` workers
/// (0 = rayon default); results come back in input order.
pub fn par_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> R + Sync + Send,
) -> Result<Vec<R>, LabError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

pub fn base_metadata(command: &str, spec: &SweepSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), Value::String("dicke-lab".into()));
    m.insert(
        "version".into(),
        Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    m.insert("command".into(), Value::String(command.into()));
    m.insert("config".into(), Value::String(spec.to_config_string()));
    let p = &spec.model;
    let mut model = Map::new();
    for (k, v) in [
        ("omega_f", p.omega_f),
        ("omega_0", p.omega_0),
        ("gamma", p.gamma),
        ("k1", p.k1),
        ("k2", p.k2),
        ("j", p.j),
    ] {
        model.insert(k.into(), Value::from(v));
    }
    m.insert("model".into(), Value::Object(model));
    if spec.output.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        m.insert("timestamp_unix".into(), Value::from(secs));
    }
    m
}

/// Evaluates the requested quantities over the grid. Columns are the axis
/// values, one column per quantity, and a trailing `error` column.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<Table, LabError> {
    run_sweep_with(spec, &spec.quantities, "sweep", threads)
}

pub fn run_sweep_with(
    spec: &SweepSpec,
    quantities: &[Quantity],
    command: &str,
    threads: usize,
) -> Result<Table, LabError> {
    if quantities.is_empty() {
        return Err(LabError::Usage("no quantities requested".into()));
    }
    let points = grid(spec);
    let gate = spec
        .quantum
        .as_ref()
        .map(|q| MemoryGate::new(q.memory_budget_mb.saturating_mul(1 << 20)));
    let wants_quantum = quantities.iter().any(|q| q.needs_quantum());

    let rows = par_map(&points, threads, |values| {
        let ctx = match point_context(spec, values) {
            Ok(c) => c,
            Err(e) => return (vec![Cell::Null; quantities.len()], Some(e.to_string())),
        };
        let _ticket = match (&gate, wants_quantum) {
            (Some(g), true) => {
                let n_max = spec.quantum.as_ref().and_then(|q| q.n_max);
                Some(g.acquire(quantum_bytes(&ctx.params, n_max)))
            }
            _ => None,
        };
        evaluate_point(&ctx, quantities)
    })?;

    let mut names: Vec<String> = spec
        .axes
        .iter()
        .map(|a| a.name.as_str().to_owned())
        .collect();
    names.extend(quantities.iter().map(|q| q.as_str().to_owned()));
    names.push("error".into());
    let mut table = Table::new(names);
    for (values, (cells, error)) in points.iter().zip(rows) {
        let mut row: Vec<Cell> = values.iter().map(|v| Cell::Num(*v)).collect();
        row.extend(cells);
        row.push(error.map_or(Cell::Null, Cell::Text));
        table.push_row(row);
    }
    table.metadata = base_metadata(command, spec);
    Ok(table)
}
