//! Job files: configure a mode, sample it on a grid and export the result.
//!
//! A job is one JSON document. Running it writes `<name>.csv` with one row
//! per grid point and `<name>.meta.json` with the configuration echo,
//! column schema, quadrature diagnostics and any task results. The CSV
//! holds no timestamps and is summed in a fixed order, so identical jobs
//! give identical bytes for any thread count.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coords::{
    cartesian_to_modified, modified_to_cartesian, CylindricalPoint, ModifiedToroidalPoint,
};
use crate::cyl_modes::{CylMode, CylModeSpec};
use crate::error::Error;
use crate::field::{beltrami_residual, CartesianPoint, ComplexVector3, HarmonicMode, Vec3};
use crate::observables::{
    energy_density, flux_through_torus, mass_and_spin, poynting, ShellDomain,
};
use crate::ring::{tau0_scaling_study, RingMode, RingModeSpec, RingQuadrature};
use crate::specfun::BesselKind;

/// Exit status for a configuration error.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for a violated numerical precondition.
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit status for a file system failure.
pub const EXIT_IO: i32 = 4;

/// Failure of a job, classified by exit status.
#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical precondition failed: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Config(_) => EXIT_CONFIG,
            JobError::Numerical(_) => EXIT_NUMERICAL,
            JobError::Io(_) => EXIT_IO,
        }
    }

    fn field(path: &str, err: Error) -> Self {
        let msg = match err {
            Error::InvalidSpec(m) | Error::Domain(m) => m,
            other => other.to_string(),
        };
        JobError::Config(format!("{path}: {msg}"))
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(m) => JobError::Config(m),
            other => JobError::Numerical(other.to_string()),
        }
    }
}

/// What a job computes besides the sampled field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    /// Ring mode on the grid.
    ModeEval,
    /// Straight cylindrical mode on the grid; needs `mode.k`.
    CylMode,
    /// Ring mode plus finite-difference Beltrami residuals per row.
    ResidualCheck,
    /// Ring mode plus momentum flux through a torus.
    Flux,
    /// Ring mode plus shell energy and angular momentum.
    MassSpin,
    /// Ring mode plus a `τ₀` scaling study and node-doubling study.
    Convergence,
}

fn one() -> f64 {
    1.0
}
fn default_tau0() -> f64 {
    0.01
}
fn default_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}
fn default_n_eta() -> usize {
    32
}
fn default_n_phi() -> usize {
    256
}

/// Mode parameters. Lengths are in units of `rho0`, which defaults to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub omega: f64,
    /// Ring winding number; required for every task except `cyl-mode`.
    #[serde(default)]
    pub m: Option<i32>,
    /// Axial wavenumber of a `cyl-mode` job.
    #[serde(default)]
    pub k: Option<f64>,
    pub l: i32,
    pub kind: BesselKind,
    #[serde(default = "one")]
    pub rho0: f64,
    #[serde(default = "default_tau0")]
    pub tau0: f64,
    /// `[re, im]`.
    #[serde(default = "default_amplitude")]
    pub amplitude: [f64; 2],
    #[serde(default)]
    pub scaling_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_n_eta")]
    pub n_eta: usize,
    #[serde(default = "default_n_phi")]
    pub n_phi: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_eta: default_n_eta(),
            n_phi: default_n_phi(),
        }
    }
}

/// One grid axis: explicit values or `count` evenly spaced points from
/// `start` to `stop` (`stop` excluded when `endpoint` is false).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default = "yes")]
        endpoint: bool,
    },
}

fn yes() -> bool {
    true
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Values(v) => v.clone(),
            Axis::Range {
                start,
                stop,
                count,
                endpoint,
            } => {
                let n = *count;
                let div = if *endpoint { n.saturating_sub(1) } else { n };
                if n == 1 || div == 0 {
                    return vec![*start; n];
                }
                let step = (stop - start) / div as f64;
                (0..n).map(|i| start + step * i as f64).collect()
            }
        }
    }

    fn validate(&self, path: &str) -> Result<(), JobError> {
        let vals = self.values();
        if vals.is_empty() {
            return Err(JobError::Config(format!("{path}: axis has no points")));
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(JobError::Config(format!(
                "{path}: axis values must be finite"
            )));
        }
        Ok(())
    }
}

/// Sampling grid. Angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridConfig {
    /// Modified toroidal `(τ, η, φ)`, iterated `τ`-major.
    Toroidal { tau: Axis, eta: Axis, phi: Axis },
    /// Cylindrical `(ρ, φ, z)` about the symmetry axis, `ρ`-major.
    Cylindrical { rho: Axis, phi: Axis, z: Axis },
    /// Cartesian `(x, y, z)`, `x`-major.
    Cartesian { x: Axis, y: Axis, z: Axis },
}

impl GridConfig {
    fn axes(&self) -> [(&'static str, &Axis); 3] {
        match self {
            GridConfig::Toroidal { tau, eta, phi } => [("tau", tau), ("eta", eta), ("phi", phi)],
            GridConfig::Cylindrical { rho, phi, z } => [("rho", rho), ("phi", phi), ("z", z)],
            GridConfig::Cartesian { x, y, z } => [("x", x), ("y", y), ("z", z)],
        }
    }

    fn validate(&self) -> Result<(), JobError> {
        for (name, axis) in self.axes() {
            axis.validate(&format!("grid.{name}"))?;
        }
        match self {
            GridConfig::Toroidal { tau, .. } => {
                if tau.values().iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
                    return Err(JobError::Config(
                        "grid.tau: values must lie in (0, 1), off the ring and the axis".into(),
                    ));
                }
            }
            GridConfig::Cylindrical { rho, .. } => {
                if rho.values().iter().any(|r| *r < 0.0) {
                    return Err(JobError::Config(
                        "grid.rho: values must be non-negative".into(),
                    ));
                }
            }
            GridConfig::Cartesian { .. } => {}
        }
        Ok(())
    }

    /// Grid points in iteration order, in Cartesian coordinates.
    pub fn points(&self, rho0: f64) -> Result<Vec<CartesianPoint>, JobError> {
        let [(_, a), (_, b), (_, c)] = self.axes();
        let (a, b, c) = (a.values(), b.values(), c.values());
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
        for &u in &a {
            for &v in &b {
                for &w in &c {
                    out.push(match self {
                        GridConfig::Toroidal { .. } => {
                            modified_to_cartesian(ModifiedToroidalPoint::new(u, v, w), rho0)?
                        }
                        GridConfig::Cylindrical { .. } => {
                            CylindricalPoint::new(u, v, w).to_cartesian()
                        }
                        GridConfig::Cartesian { .. } => Vec3::new(u, v, w),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Modified toroidal label of each point, exact for toroidal grids.
    fn labels(
        &self,
        points: &[CartesianPoint],
        rho0: f64,
    ) -> Result<Vec<ModifiedToroidalPoint>, JobError> {
        if let GridConfig::Toroidal { tau, eta, phi } = self {
            let (a, b, c) = (tau.values(), eta.values(), phi.values());
            let mut out = Vec::with_capacity(points.len());
            for &u in &a {
                for &v in &b {
                    for &w in &c {
                        out.push(ModifiedToroidalPoint::new(u, v, w));
                    }
                }
            }
            return Ok(out);
        }
        Ok(points
            .iter()
            .map(|p| cartesian_to_modified(*p, rho0))
            .collect::<crate::Result<Vec<_>>>()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualConfig {
    /// Finite-difference step; defaults to `1e-4 / omega`.
    #[serde(default)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxConfig {
    pub tau: f64,
    pub n_eta: usize,
    pub n_phi: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellConfig {
    pub tau_min: f64,
    pub tau_max: f64,
    pub n_tau: usize,
    pub n_eta: usize,
    pub n_phi: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    /// Strictly decreasing `τ₀` values for the scaling study.
    pub tau0: Vec<f64>,
    /// Target in modified toroidal coordinates `[τ, η, φ]`.
    pub target: [f64; 3],
    /// Number of node doublings in the refinement study.
    #[serde(default = "two")]
    pub doublings: usize,
}

fn two() -> usize {
    2
}

/// A complete job description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Base name of the output files.
    pub name: String,
    pub task: Task,
    pub mode: ModeConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    pub grid: GridConfig,
    /// Output directory, relative to the working directory; `--out`
    /// overrides it.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub residual: Option<ResidualConfig>,
    #[serde(default)]
    pub flux: Option<FluxConfig>,
    #[serde(default)]
    pub shell: Option<ShellConfig>,
    #[serde(default)]
    pub convergence: Option<ConvergenceConfig>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, JobError> {
        let cfg: JobConfig = serde_json::from_str(text)
            .map_err(|e| JobError::Config(format!("malformed job file: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, JobError> {
        let text = fs::read_to_string(path)
            .map_err(|e| JobError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn amplitude(&self) -> Complex64 {
        Complex64::new(self.mode.amplitude[0], self.mode.amplitude[1])
    }

    /// The ring mode described by this job.
    pub fn ring_spec(&self) -> Result<RingModeSpec, JobError> {
        let m = self.mode.m.ok_or_else(|| {
            JobError::Config(format!("mode.m: required for task {:?}", self.task))
        })?;
        let spec = RingModeSpec::new(
            self.mode.omega,
            m,
            self.mode.l,
            self.mode.rho0,
            self.mode.kind,
        )
        .with_tau0(self.mode.tau0)
        .with_nodes(self.quadrature.n_eta, self.quadrature.n_phi)
        .with_amplitude(self.amplitude())
        .with_scaling_exponent(self.mode.scaling_exponent);
        spec.validate()
            .map_err(|e| JobError::field(ring_field(&e, m), e))?;
        Ok(spec)
    }

    /// The cylindrical mode of a `cyl-mode` job.
    pub fn cyl_spec(&self) -> Result<CylModeSpec, JobError> {
        let k = self
            .mode
            .k
            .ok_or_else(|| JobError::Config("mode.k: required for task cyl-mode".into()))?;
        let spec = CylModeSpec::new(self.mode.omega, k, self.mode.l, self.mode.kind)
            .with_amplitude(self.amplitude());
        spec.validate().map_err(|e| JobError::field("mode", e))?;
        Ok(spec)
    }

    /// Checks every field against the preconditions of the modules it feeds.
    pub fn validate(&self) -> Result<(), JobError> {
        if self.name.is_empty()
            || self
                .name
                .chars()
                .any(|c| !(c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.'))
        {
            return Err(JobError::Config(
                "name: must be non-empty and use only letters, digits, '-', '_' or '.'".into(),
            ));
        }
        if !(self.mode.rho0.is_finite() && self.mode.rho0 > 0.0) {
            return Err(JobError::Config(format!(
                "mode.rho0: {} must be positive",
                self.mode.rho0
            )));
        }
        if self.mode.amplitude.iter().any(|a| !a.is_finite()) {
            return Err(JobError::Config("mode.amplitude: must be finite".into()));
        }
        match self.task {
            Task::CylMode => {
                self.cyl_spec()?;
            }
            _ => {
                self.ring_spec()?;
            }
        }
        self.grid.validate()?;
        let need = |present: bool, name: &str| {
            if present {
                Ok(())
            } else {
                Err(JobError::Config(format!(
                    "{name}: required for task {:?}",
                    self.task
                )))
            }
        };
        match self.task {
            Task::Flux => need(self.flux.is_some(), "flux")?,
            Task::MassSpin => need(self.shell.is_some(), "shell")?,
            Task::Convergence => need(self.convergence.is_some(), "convergence")?,
            _ => {}
        }
        if let Some(r) = &self.residual {
            if let Some(h) = r.step {
                if !(h > 0.0 && h.is_finite()) {
                    return Err(JobError::Config("residual.step: must be positive".into()));
                }
            }
        }
        if let Some(f) = &self.flux {
            if !(f.tau > 0.0 && f.tau < 1.0) {
                return Err(JobError::Config("flux.tau: must lie in (0, 1)".into()));
            }
            if f.tau <= self.mode.tau0 {
                return Err(JobError::Config(
                    "flux.tau: the flux surface must enclose the source torus (tau > mode.tau0)"
                        .into(),
                ));
            }
            if f.n_eta == 0 || f.n_phi == 0 {
                return Err(JobError::Config(
                    "flux: n_eta and n_phi must be positive".into(),
                ));
            }
        }
        if let Some(s) = &self.shell {
            self.shell_domain(s)
                .validate()
                .map_err(|e| JobError::field("shell", e))?;
            if s.tau_min <= self.mode.tau0 {
                return Err(JobError::Config(
                    "shell.tau_min: must exceed mode.tau0".into(),
                ));
            }
        }
        if let Some(c) = &self.convergence {
            if c.tau0.len() < 4 {
                return Err(JobError::Config(
                    "convergence.tau0: needs at least four values".into(),
                ));
            }
            if c.tau0.windows(2).any(|w| !(w[1] < w[0]))
                || c.tau0.iter().any(|t| !(*t > 0.0 && *t <= 0.3))
            {
                return Err(JobError::Config(
                    "convergence.tau0: values must be strictly decreasing within (0, 0.3]".into(),
                ));
            }
            if !(c.target[0] > 0.0 && c.target[0] < 1.0) {
                return Err(JobError::Config(
                    "convergence.target: tau must lie in (0, 1)".into(),
                ));
            }
        }
        Ok(())
    }

    fn shell_domain(&self, s: &ShellConfig) -> ShellDomain {
        ShellDomain {
            tau_min: s.tau_min,
            tau_max: s.tau_max,
            rho0: self.mode.rho0,
            n_tau: s.n_tau,
            n_eta: s.n_eta,
            n_phi: s.n_phi,
        }
    }
}

fn ring_field(err: &Error, m: i32) -> &'static str {
    let msg = err.to_string();
    if m == 0 || msg.contains("|m|") {
        "mode.m"
    } else if msg.contains("tau0") {
        "mode.tau0"
    } else if msg.contains("n_eta") || msg.contains("n_phi") {
        "quadrature"
    } else if msg.contains("omega") {
        "mode.omega"
    } else {
        "mode"
    }
}

/// Column names of the field CSV, in output order.
pub const FIELD_COLUMNS: [(&str, &str); 16] = [
    ("tau", "modified toroidal tau"),
    ("eta", "modified toroidal eta, radians in (-pi, pi]"),
    ("phi", "azimuth, radians"),
    ("x", "Cartesian x, units of rho0"),
    ("y", "Cartesian y, units of rho0"),
    ("z", "Cartesian z, units of rho0"),
    ("re_fx", "Re F_x = E_x"),
    ("im_fx", "Im F_x = B_x"),
    ("re_fy", "Re F_y = E_y"),
    ("im_fy", "Im F_y = B_y"),
    ("re_fz", "Re F_z = E_z"),
    ("im_fz", "Im F_z = B_z"),
    ("energy_density", "|F|^2 / 8pi"),
    ("poynting_x", "(Re F x Im F)_x / 4pi"),
    ("poynting_y", "(Re F x Im F)_y / 4pi"),
    ("poynting_z", "(Re F x Im F)_z / 4pi"),
];

/// Extra columns appended by `residual-check`.
pub const RESIDUAL_COLUMNS: [(&str, &str); 2] = [
    (
        "curl_residual",
        "|curl F - omega F| / |omega F| by central differences",
    ),
    ("div_residual", "|div F| / |omega F| by central differences"),
];

/// Sampled field values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub labels: Vec<ModifiedToroidalPoint>,
    pub points: Vec<CartesianPoint>,
    pub fields: Vec<ComplexVector3>,
    /// `(curl, div)` residual per row, for `residual-check`.
    pub residuals: Option<Vec<(f64, f64)>>,
}

impl FieldGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn column_names(&self) -> Vec<&'static str> {
        let mut names: Vec<&str> = FIELD_COLUMNS.iter().map(|c| c.0).collect();
        if self.residuals.is_some() {
            names.extend(RESIDUAL_COLUMNS.iter().map(|c| c.0));
        }
        names
    }

    fn schema(&self) -> Value {
        let mut cols: Vec<Value> = FIELD_COLUMNS
            .iter()
            .map(|(n, d)| json!({"name": n, "description": d}))
            .collect();
        if self.residuals.is_some() {
            cols.extend(
                RESIDUAL_COLUMNS
                    .iter()
                    .map(|(n, d)| json!({"name": n, "description": d})),
            );
        }
        Value::Array(cols)
    }

    /// Row values in column order.
    pub fn row(&self, i: usize) -> Vec<f64> {
        let (q, p, f) = (self.labels[i], self.points[i], self.fields[i]);
        let s = poynting(&f);
        let mut row = vec![
            q.tau,
            q.eta,
            q.phi,
            p.x,
            p.y,
            p.z,
            f.cx.re,
            f.cx.im,
            f.cy.re,
            f.cy.im,
            f.cz.re,
            f.cz.im,
            energy_density(&f),
            s.x,
            s.y,
            s.z,
        ];
        if let Some(r) = &self.residuals {
            row.extend([r[i].0, r[i].1]);
        }
        row
    }

    /// Writes the grid as CSV with 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), JobError> {
        let io = |e: csv::Error| JobError::Io(e.to_string());
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.column_names()).map_err(io)?;
        for i in 0..self.len() {
            let row = self.row(i);
            if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
                return Err(JobError::Numerical(format!(
                    "non-finite value in column {} of row {i}",
                    self.column_names()[bad]
                )));
            }
            out.write_record(row.iter().map(|v| format_sig17(*v)))
                .map_err(io)?;
        }
        out.flush().map_err(|e| JobError::Io(e.to_string()))
    }
}

/// `v` with 17 significant digits, which round-trips any `f64`.
pub fn format_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Everything a job produced, before it is written out.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub grid: FieldGrid,
    pub quadrature: Value,
    pub results: Value,
}

/// Paths of the written files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobFiles {
    pub csv: PathBuf,
    pub meta: PathBuf,
}

fn sample<M: HarmonicMode>(
    mode: &M,
    points: &[CartesianPoint],
) -> Result<Vec<ComplexVector3>, JobError> {
    Ok(points
        .par_iter()
        .map(|&p| mode.eval(p))
        .collect::<crate::Result<Vec<_>>>()?)
}

fn quadrature_report(quad: &RingQuadrature, points: &[CartesianPoint]) -> Value {
    let standoff = points
        .par_iter()
        .map(|&p| quad.min_distance(p))
        .reduce(|| f64::INFINITY, f64::min);
    let spec = quad.spec();
    json!({
        "tau0": spec.tau0,
        "n_eta": spec.n_eta,
        "n_phi": spec.n_phi,
        "nodes": quad.nodes().len(),
        "max_node_spacing": quad.spacing(),
        "min_target_distance": standoff,
        "min_distance_in_spacings": standoff / quad.spacing(),
    })
}

fn vec_json(v: Vec3) -> Value {
    json!([v.x, v.y, v.z])
}

fn cvec_json(f: &ComplexVector3) -> Value {
    json!(f
        .components()
        .iter()
        .map(|c| [c.re, c.im])
        .collect::<Vec<_>>())
}

/// Computes a job without writing anything.
pub fn compute_job(cfg: &JobConfig) -> Result<JobOutput, JobError> {
    cfg.validate()?;
    let rho0 = cfg.mode.rho0;
    let points = cfg.grid.points(rho0)?;
    let labels = cfg.grid.labels(&points, rho0)?;

    if cfg.task == Task::CylMode {
        let mode = CylMode::new(cfg.cyl_spec()?)?;
        let fields = sample(&mode, &points)?;
        return Ok(JobOutput {
            grid: FieldGrid {
                labels,
                points,
                fields,
                residuals: None,
            },
            quadrature: Value::Null,
            results: json!({"k_rho": mode.spec().k_rho()}),
        });
    }

    let spec = cfg.ring_spec()?;
    let mode = RingMode::new(&spec)?;
    let fields = sample(&mode, &points)?;
    let quadrature = quadrature_report(mode.quadrature(), &points);
    let mut residuals = None;
    let results = match cfg.task {
        Task::ModeEval | Task::CylMode => json!({}),
        Task::ResidualCheck => {
            let h = cfg
                .residual
                .and_then(|r| r.step)
                .unwrap_or(1e-4 / spec.omega);
            let r = points
                .par_iter()
                .map(|&p| beltrami_residual(&mode, p, h).map(|r| (r.curl, r.div)))
                .collect::<crate::Result<Vec<_>>>()?;
            let max_curl = r.iter().map(|v| v.0).fold(0.0, f64::max);
            let max_div = r.iter().map(|v| v.1).fold(0.0, f64::max);
            residuals = Some(r);
            json!({"step": h, "max_curl_residual": max_curl, "max_div_residual": max_div})
        }
        Task::Flux => {
            let f = cfg.flux.expect("validated");
            let flux = flux_through_torus(&mode, f.tau, rho0, f.n_eta, f.n_phi)?;
            let mut out = json!({"tau": f.tau, "flux": flux});
            if let Some(s) = &cfg.shell {
                let ms = mass_and_spin(&mode, &cfg.shell_domain(s))?;
                out["shell_energy"] = json!(ms.mass);
                out["relative_flux"] = json!(flux.abs() / (spec.omega * ms.mass));
            }
            out
        }
        Task::MassSpin => {
            let s = cfg.shell.expect("validated");
            let ms = mass_and_spin(&mode, &cfg.shell_domain(&s))?;
            json!({
                "mass": ms.mass,
                "spin": ms.spin,
                "angular_momentum": vec_json(ms.angular_momentum),
            })
        }
        Task::Convergence => {
            let c = cfg.convergence.as_ref().expect("validated");
            let target = ModifiedToroidalPoint::new(c.target[0], c.target[1], c.target[2]);
            let study = tau0_scaling_study(&spec, target, &c.tau0)?;
            let x = modified_to_cartesian(target, rho0)?;
            let mut refinement = Vec::new();
            let mut previous: Option<ComplexVector3> = None;
            for d in 0..=c.doublings {
                let s = spec.with_nodes(spec.n_eta << d, spec.n_phi << d);
                let f = RingQuadrature::new(&s)?.field_at(x)?;
                let change = previous.map(|p| (f - p).norm() / f.norm());
                refinement.push(json!({
                    "n_eta": s.n_eta, "n_phi": s.n_phi, "field": cvec_json(&f), "relative_change": change,
                }));
                previous = Some(f);
            }
            json!({
                "scaling": {
                    "target": c.target,
                    "tau0": study.tau0,
                    "field_norm": study.fields.iter().map(|f| f.norm()).collect::<Vec<_>>(),
                    "component_exponents": study.component_exponents,
                    "norm_exponent": study.norm_exponent,
                    "local_exponents": study.local_exponents,
                },
                "refinement": refinement,
            })
        }
    };
    Ok(JobOutput {
        grid: FieldGrid {
            labels,
            points,
            fields,
            residuals,
        },
        quadrature,
        results,
    })
}

/// Runs a job with `threads` workers (all cores when `None`) and writes
/// `<name>.csv` and `<name>.meta.json` into `out_dir`.
pub fn run_job(
    cfg: &JobConfig,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<JobFiles, JobError> {
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(JobError::Config("--threads: must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| JobError::Numerical(format!("cannot start worker threads: {e}")))?;
    let output = pool.install(|| compute_job(cfg))?;
    let elapsed = start.elapsed().as_secs_f64();

    fs::create_dir_all(out_dir)
        .map_err(|e| JobError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let csv_path = out_dir.join(format!("{}.csv", cfg.name));
    let meta_path = out_dir.join(format!("{}.meta.json", cfg.name));

    let mut buf = Vec::new();
    output.grid.write_csv(&mut buf)?;
    fs::write(&csv_path, &buf)
        .map_err(|e| JobError::Io(format!("cannot write {}: {e}", csv_path.display())))?;

    let timestamp = time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default();
    let meta = json!({
        "software": {"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")},
        "config": cfg,
        "columns": output.grid.schema(),
        "rows": output.grid.len(),
        "quadrature": output.quadrature,
        "results": output.results,
        "threads": threads.unwrap_or_else(|| pool.current_num_threads()),
        "elapsed_seconds": elapsed,
        "timestamp": timestamp,
    });
    let text = serde_json::to_string_pretty(&meta).map_err(|e| JobError::Io(e.to_string()))?;
    fs::write(&meta_path, text + "\n")
        .map_err(|e| JobError::Io(format!("cannot write {}: {e}", meta_path.display())))?;
    Ok(JobFiles {
        csv: csv_path,
        meta: meta_path,
    })
}
