//! Line-oriented `key = value` configuration with `[section]` headers.
//!
//! ```text
//! # Fig. 3 style sweep
//! [model]
//! omega_f = 1
//! k1 = 0.5
//! k2 = 0.5
//! [sweep]
//! axis1 = Gamma:0:3:301
//! quantities = jz_mean, berry_phase
//! [output]
//! format = csv
//! ```
//!
//! Sections: `[model]`, `[sweep]`, `[quantum]`, `[output]`, `[trajectory]`.
//! `#` starts a comment. Every key may appear once; unknown keys and
//! sections are errors.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use dicke_core::{Error as CoreError, ModelParams};

use crate::output::Format;
use crate::quantity::Quantity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigErrorKind {
    Syntax,
    UnknownKey,
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub kind: ConfigErrorKind,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ConfigErrorKind::Syntax => "syntax error",
            ConfigErrorKind::UnknownKey => "unknown key",
            ConfigErrorKind::Range => "range error",
        };
        write!(f, "line {}: {kind}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisName {
    Gamma,
    /// `Γ = γ/γ_c`; `γ` is back-computed at every point.
    Ratio,
    K1,
    K2,
    OmegaF,
    Omega0,
    J,
    /// Bloch angles, only used by `energy_surface`.
    Theta,
    Phi,
}

impl AxisName {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gamma" => AxisName::Gamma,
            "Gamma" => AxisName::Ratio,
            "k1" => AxisName::K1,
            "k2" => AxisName::K2,
            "omega_f" => AxisName::OmegaF,
            "omega_0" => AxisName::Omega0,
            "j" => AxisName::J,
            "theta" => AxisName::Theta,
            "phi" => AxisName::Phi,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::Gamma => "gamma",
            AxisName::Ratio => "Gamma",
            AxisName::K1 => "k1",
            AxisName::K2 => "k2",
            AxisName::OmegaF => "omega_f",
            AxisName::Omega0 => "omega_0",
            AxisName::J => "j",
            AxisName::Theta => "theta",
            AxisName::Phi => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    /// `name:start:stop:count`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("axis must be name:start:stop:count, got {s:?}"));
        }
        let name = AxisName::parse(parts[0])
            .ok_or_else(|| format!("unknown axis parameter {:?}", parts[0]))?;
        let start = parse_f64(parts[1])?;
        let stop = parse_f64(parts[2])?;
        let count = parts[3]
            .parse::<usize>()
            .map_err(|_| format!("bad count {:?}", parts[3]))?;
        Ok(Self {
            name,
            start,
            stop,
            count,
        })
    }

    pub fn check(&self) -> Result<(), String> {
        if self.count < 2 {
            return Err(format!("axis {} needs count >= 2", self.name.as_str()));
        }
        if self.start == self.stop {
            return Err(format!("axis {} has start == stop", self.name.as_str()));
        }
        Ok(())
    }

    /// Evenly spaced values including both end points.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{:?}:{:?}:{}",
            self.name.as_str(),
            self.start,
            self.stop,
            self.count
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSettings {
    /// Pseudo-spins for validation runs; sweeps use the model's `j`.
    pub j: Vec<f64>,
    /// Fixed photon cutoff, or `None` for automatic convergence.
    pub n_max: Option<usize>,
    pub e_tol: f64,
    pub max_n_max: usize,
    /// Loop points for the numeric Berry phase; 0 disables it.
    pub berry_steps: usize,
    /// Largest even-sector dimension for which the Berry loop is run.
    pub berry_max_dimension: usize,
    /// Memory allowed for concurrent eigensolves.
    pub memory_budget_mb: usize,
}

impl Default for QuantumSettings {
    fn default() -> Self {
        Self {
            j: Vec::new(),
            n_max: None,
            e_tol: 1e-10,
            max_n_max: 4096,
            berry_steps: 256,
            berry_max_dimension: 2000,
            memory_budget_mb: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSettings {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
    /// Adds a wall-clock timestamp to the metadata (breaks byte identity).
    pub timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySettings {
    pub q: f64,
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
    pub t_end: f64,
    pub rel_tol: f64,
    /// Keep every `stride`-th accepted step (the last one is always kept).
    pub stride: usize,
}

impl Default for TrajectorySettings {
    fn default() -> Self {
        Self {
            q: 0.0,
            p: 0.0,
            theta: 0.1,
            phi: 0.0,
            t_end: 100.0,
            rel_tol: 1e-10,
            stride: 1,
        }
    }
}

/// Parsed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: ModelParams,
    pub axes: Vec<Axis>,
    pub quantities: Vec<Quantity>,
    pub quantum: Option<QuantumSettings>,
    pub output: OutputSettings,
    pub trajectory: Option<TrajectorySettings>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            model: ModelParams::new(1.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            axes: Vec::new(),
            quantities: Vec::new(),
            quantum: None,
            output: OutputSettings::default(),
            trajectory: None,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not a non-negative integer: {s:?}"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("not a boolean: {s:?}")),
    }
}

fn list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

const SECTIONS: [&str; 5] = ["model", "sweep", "quantum", "output", "trajectory"];

pub fn parse_config(text: &str) -> Result<SweepSpec, ConfigError> {
    let mut spec = SweepSpec::default();
    let mut section: Option<&str> = None;
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    let mut model_lines: HashMap<&'static str, usize> = HashMap::new();
    let mut axis_lines = Vec::new();
    let mut quantities_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |kind, message: String| ConfigError {
            line,
            kind,
            message,
        };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| {
                    err(
                        ConfigErrorKind::Syntax,
                        format!("unterminated section header {content:?}"),
                    )
                })?
                .trim();
            let known = SECTIONS.iter().find(|s| **s == name).ok_or_else(|| {
                err(
                    ConfigErrorKind::UnknownKey,
                    format!("unknown section [{name}]"),
                )
            })?;
            section = Some(known);
            match *known {
                "quantum" if spec.quantum.is_none() => {
                    spec.quantum = Some(QuantumSettings::default())
                }
                "trajectory" if spec.trajectory.is_none() => {
                    spec.trajectory = Some(TrajectorySettings::default())
                }
                _ => {}
            }
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            err(
                ConfigErrorKind::Syntax,
                format!("expected key = value, got {content:?}"),
            )
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err(ConfigErrorKind::Syntax, "empty key".into()));
        }
        let sec = section.ok_or_else(|| {
            err(
                ConfigErrorKind::Syntax,
                format!("key {key:?} before any [section]"),
            )
        })?;
        if let Some(first) = seen.insert((sec.to_owned(), key.to_owned()), line) {
            return Err(err(
                ConfigErrorKind::Syntax,
                format!("duplicate key {key:?} (first on line {first})"),
            ));
        }
        let syntax = |m: String| err(ConfigErrorKind::Syntax, m);
        let unknown = || {
            err(
                ConfigErrorKind::UnknownKey,
                format!("[{sec}] has no key {key:?}"),
            )
        };

        match sec {
            "model" => {
                let v = parse_f64(value).map_err(syntax)?;
                let (slot, name): (&mut f64, &'static str) = match key {
                    "omega_f" => (&mut spec.model.omega_f, "omega_f"),
                    "omega_0" => (&mut spec.model.omega_0, "omega_0"),
                    "gamma" => (&mut spec.model.gamma, "gamma"),
                    "k1" => (&mut spec.model.k1, "k1"),
                    "k2" => (&mut spec.model.k2, "k2"),
                    "j" => (&mut spec.model.j, "j"),
                    _ => return Err(unknown()),
                };
                *slot = v;
                model_lines.insert(name, line);
            }
            "sweep" => match key {
                "axis1" | "axis2" => {
                    let axis = Axis::parse(value).map_err(syntax)?;
                    axis.check().map_err(|m| err(ConfigErrorKind::Range, m))?;
                    axis_lines.push((key.to_owned(), axis, line));
                }
                "quantities" => {
                    for name in list(value) {
                        let q = Quantity::parse(name).ok_or_else(|| {
                            err(
                                ConfigErrorKind::UnknownKey,
                                format!("unknown quantity {name:?}"),
                            )
                        })?;
                        if !spec.quantities.contains(&q) {
                            spec.quantities.push(q);
                        }
                    }
                    quantities_line = line;
                }
                _ => return Err(unknown()),
            },
            "quantum" => {
                let q = spec.quantum.as_mut().expect("created with the section");
                match key {
                    "j" => {
                        q.j = list(value)
                            .map(parse_f64)
                            .collect::<Result<_, _>>()
                            .map_err(syntax)?;
                        if q.j.is_empty() {
                            return Err(syntax("empty j list".into()));
                        }
                        if let Some(bad) =
                            q.j.iter()
                                .find(|j| ModelParams::dicke(0.0, **j).validate_basic().is_err())
                        {
                            return Err(err(
                                ConfigErrorKind::Range,
                                format!("j = {bad} is not a positive half-integer"),
                            ));
                        }
                    }
                    "n_max" => {
                        q.n_max = if value == "auto" {
                            None
                        } else {
                            Some(parse_usize(value).map_err(syntax)?)
                        };
                    }
                    "e_tol" => {
                        q.e_tol = parse_f64(value).map_err(syntax)?;
                        if !(q.e_tol > 0.0) {
                            return Err(err(
                                ConfigErrorKind::Range,
                                "e_tol must be positive".into(),
                            ));
                        }
                    }
                    "max_n_max" => q.max_n_max = parse_usize(value).map_err(syntax)?,
                    "berry_steps" => {
                        q.berry_steps = parse_usize(value).map_err(syntax)?;
                        if q.berry_steps != 0 && q.berry_steps < 8 {
                            return Err(err(
                                ConfigErrorKind::Range,
                                "berry_steps must be 0 or >= 8".into(),
                            ));
                        }
                    }
                    "berry_max_dimension" => {
                        q.berry_max_dimension = parse_usize(value).map_err(syntax)?
                    }
                    "memory_budget_mb" => {
                        q.memory_budget_mb = parse_usize(value).map_err(syntax)?;
                        if q.memory_budget_mb == 0 {
                            return Err(err(
                                ConfigErrorKind::Range,
                                "memory_budget_mb must be positive".into(),
                            ));
                        }
                    }
                    _ => return Err(unknown()),
                }
            }
            "output" => match key {
                "format" => {
                    spec.output.format = Some(Format::parse(value).ok_or_else(|| {
                        syntax(format!("format must be csv or json, got {value:?}"))
                    })?)
                }
                "path" => spec.output.path = Some(PathBuf::from(value)),
                "timestamp" => spec.output.timestamp = parse_bool(value).map_err(syntax)?,
                _ => return Err(unknown()),
            },
            "trajectory" => {
                let t = spec.trajectory.as_mut().expect("created with the section");
                match key {
                    "q" => t.q = parse_f64(value).map_err(syntax)?,
                    "p" => t.p = parse_f64(value).map_err(syntax)?,
                    "theta" => t.theta = parse_f64(value).map_err(syntax)?,
                    "phi" => t.phi = parse_f64(value).map_err(syntax)?,
                    "t_end" => {
                        t.t_end = parse_f64(value).map_err(syntax)?;
                        if !(t.t_end > 0.0) {
                            return Err(err(
                                ConfigErrorKind::Range,
                                "t_end must be positive".into(),
                            ));
                        }
                    }
                    "rel_tol" => {
                        t.rel_tol = parse_f64(value).map_err(syntax)?;
                        if !(t.rel_tol > 0.0) {
                            return Err(err(
                                ConfigErrorKind::Range,
                                "rel_tol must be positive".into(),
                            ));
                        }
                    }
                    "stride" => {
                        t.stride = parse_usize(value).map_err(syntax)?;
                        if t.stride == 0 {
                            return Err(err(
                                ConfigErrorKind::Range,
                                "stride must be positive".into(),
                            ));
                        }
                    }
                    _ => return Err(unknown()),
                }
            }
            _ => unreachable!("section names are checked"),
        }
    }

    axis_lines.sort_by(|a, b| a.0.cmp(&b.0));
    if axis_lines.len() == 1 && axis_lines[0].0 == "axis2" {
        return Err(ConfigError {
            line: axis_lines[0].2,
            kind: ConfigErrorKind::Syntax,
            message: "axis2 given without axis1".into(),
        });
    }
    if axis_lines.len() == 2 && axis_lines[0].1.name == axis_lines[1].1.name {
        return Err(ConfigError {
            line: axis_lines[1].2,
            kind: ConfigErrorKind::Range,
            message: "both axes sweep the same parameter".into(),
        });
    }
    spec.axes = axis_lines.into_iter().map(|(_, a, _)| a).collect();

    check_model(&spec, &model_lines)?;
    let has = |n| spec.axes.iter().any(|a| a.name == n);
    if spec.quantities.contains(&Quantity::EnergySurface)
        && !(has(AxisName::Theta) && has(AxisName::Phi))
    {
        return Err(ConfigError {
            line: quantities_line,
            kind: ConfigErrorKind::Range,
            message: "energy_surface needs theta and phi axes".into(),
        });
    }
    if let Some(q) = spec.quantities.iter().find(|q| q.needs_quantum()) {
        if spec.quantum.is_none() {
            return Err(ConfigError {
                line: quantities_line,
                kind: ConfigErrorKind::Range,
                message: format!("{} needs a [quantum] section", q.as_str()),
            });
        }
    }
    Ok(spec)
}

/// Validates the model template, pointing at the most relevant line.
fn check_model(spec: &SweepSpec, lines: &HashMap<&'static str, usize>) -> Result<(), ConfigError> {
    let at = |keys: &[&'static str]| {
        keys.iter()
            .filter_map(|k| lines.get(k).copied())
            .max()
            .unwrap_or(0)
    };
    let range = |line, message: String| {
        Err(ConfigError {
            line,
            kind: ConfigErrorKind::Range,
            message,
        })
    };
    match spec.model.validate() {
        Ok(_) => {}
        Err(e @ CoreError::NonPositiveFrequency { .. }) => {
            return range(at(&["omega_f", "omega_0"]), e.to_string())
        }
        Err(e @ CoreError::NegativeCoupling(_)) => return range(at(&["gamma"]), e.to_string()),
        Err(e @ CoreError::InvalidSpin(_)) => return range(at(&["j"]), e.to_string()),
        Err(e @ CoreError::OutsideValidityRegion { .. }) => {
            return range(at(&["k1", "k2", "omega_f"]), e.to_string())
        }
        Err(e) => return range(0, e.to_string()),
    }
    if spec.axes.iter().any(|a| a.name == AxisName::Ratio) && spec.model.on_degenerate_boundary() {
        return range(
            at(&["k1", "k2", "omega_f"]),
            CoreError::DegenerateBoundary.to_string(),
        );
    }
    Ok(())
}

impl SweepSpec {
    /// Canonical configuration text; parsing it yields an equal spec.
    pub fn to_config_string(&self) -> String {
        let m = &self.model;
        let mut s = format!(
            "[model]\nomega_f = {:?}\nomega_0 = {:?}\ngamma = {:?}\nk1 = {:?}\nk2 = {:?}\nj = {:?}\n",
            m.omega_f, m.omega_0, m.gamma, m.k1, m.k2, m.j
        );
        if !self.axes.is_empty() || !self.quantities.is_empty() {
            s.push_str("[sweep]\n");
            for (i, a) in self.axes.iter().enumerate() {
                s.push_str(&format!("axis{} = {a}\n", i + 1));
            }
            if !self.quantities.is_empty() {
                let names: Vec<&str> = self.quantities.iter().map(|q| q.as_str()).collect();
                s.push_str(&format!("quantities = {}\n", names.join(", ")));
            }
        }
        if let Some(q) = &self.quantum {
            s.push_str("[quantum]\n");
            if !q.j.is_empty() {
                let js: Vec<String> = q.j.iter().map(|j| format!("{j:?}")).collect();
                s.push_str(&format!("j = {}\n", js.join(", ")));
            }
            match q.n_max {
                Some(n) => s.push_str(&format!("n_max = {n}\n")),
                None => s.push_str("n_max = auto\n"),
            }
            s.push_str(&format!(
                "e_tol = {:?}\nmax_n_max = {}\nberry_steps = {}\nberry_max_dimension = {}\nmemory_budget_mb = {}\n",
                q.e_tol, q.max_n_max, q.berry_steps, q.berry_max_dimension, q.memory_budget_mb
            ));
        }
        if let Some(t) = &self.trajectory {
            s.push_str(&format!(
                "[trajectory]\nq = {:?}\np = {:?}\ntheta = {:?}\nphi = {:?}\nt_end = {:?}\nrel_tol = {:?}\nstride = {}\n",
                t.q, t.p, t.theta, t.phi, t.t_end, t.rel_tol, t.stride
            ));
        }
        let o = &self.output;
        if o.format.is_some() || o.path.is_some() || o.timestamp {
            s.push_str("[output]\n");
            if let Some(f) = o.format {
                s.push_str(&format!("format = {}\n", f.extension()));
            }
            if let Some(p) = &o.path {
                s.push_str(&format!("path = {}\n", p.display()));
            }
            if o.timestamp {
                s.push_str("timestamp = true\n");
            }
        }
        s
    }
}
