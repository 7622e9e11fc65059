use std::path::Path;

use czirok::model::compatibility_roots;
use czirok::{Averaging, GSpec, KernelShape, KernelSpec, ModelError, ModelParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::HarnessError;

/// Preset identifiers accepted by `figure-preset`.
pub const PRESET_IDS: [&str; 9] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub experiment: ExperimentSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    #[serde(default = "default_length")]
    pub l: f64,
    pub sigma: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    pub g: GSpec,
    #[serde(default = "default_kernel")]
    pub kernel: KernelShape,
    #[serde(default = "default_averaging")]
    pub averaging: Averaging,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Stability,
    CriticalSigma,
    Sweep,
    Transitions,
    Fluctuation,
    FigurePreset,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Stability => "stability",
            ExperimentKind::CriticalSigma => "critical-sigma",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Transitions => "transitions",
            ExperimentKind::Fluctuation => "fluctuation",
            ExperimentKind::FigurePreset => "figure-preset",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Preset identifier for `figure-preset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub axes: Axes,
    #[serde(default = "one")]
    pub replicates: usize,
    #[serde(default)]
    pub detector: Detector,
    /// Cluster tracking is performed only when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kde: Option<KdeConfig>,
    /// Stationary state analysed, and mean of the initial velocities.
    #[serde(default)]
    pub xi: StateChoice,
    /// Highest spatial mode examined by stability experiments.
    #[serde(default = "default_k_range")]
    pub k_range: u32,
    /// Row cadence (in steps) of `simulate` time series.
    #[serde(default = "one")]
    pub every: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axes {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h: Vec<f64>,
}

impl Axes {
    pub fn is_empty(&self) -> bool {
        self.n.is_empty() && self.sigma.is_empty() && self.h.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detector {
    pub enter_frac: f64,
    pub exit_frac: f64,
}

impl Default for Detector {
    fn default() -> Self {
        Detector {
            enter_frac: 0.8,
            exit_frac: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KdeConfig {
    #[serde(default = "default_bandwidth")]
    pub bandwidth: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

impl Default for KdeConfig {
    fn default() -> Self {
        KdeConfig {
            bandwidth: default_bandwidth(),
            grid: default_grid(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedState {
    /// Positive order velocity `xi_e`.
    Order,
    /// `xi = 0`.
    Disorder,
}

/// `"order"`, `"disorder"` or an explicit velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateChoice {
    Named(NamedState),
    Value(f64),
}

impl Default for StateChoice {
    fn default() -> Self {
        StateChoice::Named(NamedState::Order)
    }
}

fn default_length() -> f64 {
    10.0
}
fn default_dt() -> f64 {
    0.1
}
fn default_kernel() -> KernelShape {
    KernelShape::TopHat { r: 1.0 }
}
fn default_averaging() -> Averaging {
    Averaging::Symmetric
}
fn default_k_range() -> u32 {
    8
}
fn default_bandwidth() -> f64 {
    0.5
}
fn default_grid() -> usize {
    256
}
fn one() -> usize {
    1
}

/// Largest positive solution of `xi = G(xi)`.
pub fn order_velocity(g: &GSpec) -> Option<f64> {
    if let Some(xi) = g.closed_form_order_velocity() {
        return Some(xi);
    }
    compatibility_roots(g, -50.0, 50.0, 1e-12)
        .ok()?
        .into_iter()
        .filter(|&r| r > 0.0)
        .reduce(f64::max)
}

/// One point of the axis product.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// Position of the cell along the `n`, `sigma` and `h` axes.
    pub index: [usize; 3],
    pub params: ModelParams,
    /// Well depth of a cubic `G`, `NaN` otherwise.
    pub h: f64,
}

fn model_field(e: ModelError) -> HarnessError {
    match e {
        ModelError::InvalidParameter { field, reason } => HarnessError::config(format!("model.{field}"), reason),
        other => HarnessError::config("model", other.to_string()),
    }
}

impl ModelConfig {
    pub fn params(&self) -> Result<ModelParams, HarnessError> {
        let kernel = KernelSpec::new(self.kernel, self.l).map_err(model_field)?;
        let params = ModelParams {
            n: self.n,
            length: self.l,
            sigma: self.sigma,
            dt: self.dt,
            g: self.g.clone(),
            kernel,
            averaging: self.averaging,
            steps: self.steps,
            seed: self.seed,
        };
        params.validate().map_err(model_field)?;
        Ok(params)
    }
}

impl StateChoice {
    pub fn resolve(self, g: &GSpec) -> Result<f64, HarnessError> {
        match self {
            StateChoice::Value(v) if v.is_finite() => Ok(v),
            StateChoice::Value(v) => Err(HarnessError::config("experiment.xi", format!("must be finite, got {v}"))),
            StateChoice::Named(NamedState::Disorder) => Ok(0.0),
            StateChoice::Named(NamedState::Order) => order_velocity(g)
                .ok_or_else(|| HarnessError::config("experiment.xi", "G has no order state (xi = G(xi) only at 0)")),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self, HarnessError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_string() } else { path };
            HarnessError::config(field, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// Short digest of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Cartesian product of the axes, `n` outermost and `h` innermost.
    /// Missing axes default to the single model value.
    pub fn cells(&self) -> Result<Vec<Cell>, HarnessError> {
        let m = &self.model;
        let axes = &self.experiment.axes;
        let ns = if axes.n.is_empty() { vec![m.n] } else { axes.n.clone() };
        let sigmas = if axes.sigma.is_empty() { vec![m.sigma] } else { axes.sigma.clone() };
        let hs: Vec<Option<f64>> = if axes.h.is_empty() {
            vec![None]
        } else {
            if !matches!(m.g, GSpec::Cubic { .. }) {
                return Err(HarnessError::config("experiment.axes.h", "requires model.g.variant = cubic"));
            }
            axes.h.iter().map(|&h| Some(h)).collect()
        };
        let mut cells = Vec::with_capacity(ns.len() * sigmas.len() * hs.len());
        for (i, &n) in ns.iter().enumerate() {
            for (j, &sigma) in sigmas.iter().enumerate() {
                for (k, h) in hs.iter().enumerate() {
                    let mut mc = m.clone();
                    mc.n = n;
                    mc.sigma = sigma;
                    if let Some(h) = h {
                        mc.g = GSpec::cubic(*h);
                    }
                    let params = mc.params()?;
                    let h = match params.g {
                        GSpec::Cubic { h } => h,
                        _ => f64::NAN,
                    };
                    cells.push(Cell {
                        index: [i, j, k],
                        params,
                        h,
                    });
                }
            }
        }
        Ok(cells)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let e = &self.experiment;
        let kind = e.kind;
        if kind == ExperimentKind::FigurePreset {
            return match e.id.as_deref() {
                Some(id) if PRESET_IDS.contains(&id) => Ok(()),
                Some(id) => Err(HarnessError::config(
                    "experiment.id",
                    format!("unknown preset `{id}`, expected one of {}", PRESET_IDS.join(", ")),
                )),
                None => Err(HarnessError::config("experiment.id", "figure-preset needs a preset id")),
            };
        }
        if e.id.is_some() {
            return Err(HarnessError::config("experiment.id", "only used by figure-preset"));
        }
        if e.replicates == 0 {
            return Err(HarnessError::config("experiment.replicates", "must be at least 1"));
        }
        if e.every == 0 {
            return Err(HarnessError::config("experiment.every", "must be at least 1"));
        }
        if e.k_range == 0 {
            return Err(HarnessError::config("experiment.k_range", "must be at least 1"));
        }
        let d = e.detector;
        if !(d.exit_frac > 0.0 && d.exit_frac < d.enter_frac && d.enter_frac <= 1.0) {
            return Err(HarnessError::config(
                "experiment.detector",
                format!("need 0 < exit_frac < enter_frac <= 1, got enter_frac={}, exit_frac={}", d.enter_frac, d.exit_frac),
            ));
        }
        if let Some(k) = e.kde {
            if !(k.bandwidth > 0.0 && k.bandwidth.is_finite()) {
                return Err(HarnessError::config("experiment.kde.bandwidth", "must be positive"));
            }
            if k.grid < 16 {
                return Err(HarnessError::config("experiment.kde.grid", "need at least 16 grid points"));
            }
        }
        let unused = |axis: &str, present: bool| {
            if present {
                Err(HarnessError::config(
                    format!("experiment.axes.{axis}"),
                    format!("not used by {}", kind.name()),
                ))
            } else {
                Ok(())
            }
        };
        match kind {
            ExperimentKind::Sweep | ExperimentKind::Transitions if e.axes.is_empty() => {
                return Err(HarnessError::config("experiment.axes", format!("{} needs at least one non-empty axis", kind.name())));
            }
            ExperimentKind::Stability => unused("n", !e.axes.n.is_empty())?,
            ExperimentKind::CriticalSigma => {
                unused("n", !e.axes.n.is_empty())?;
                unused("sigma", !e.axes.sigma.is_empty())?;
            }
            ExperimentKind::Fluctuation if e.replicates < 2 => {
                return Err(HarnessError::config("experiment.replicates", "fluctuation needs at least 2 replicates"));
            }
            _ => {}
        }
        for cell in self.cells()? {
            let p = &cell.params;
            if matches!(kind, ExperimentKind::Fluctuation) && !(p.sigma > 0.0) {
                return Err(HarnessError::config("model.sigma", "fluctuation needs sigma > 0"));
            }
            if kind != ExperimentKind::CriticalSigma {
                e.xi.resolve(&p.g)?;
            }
            // thresholds are expressed relative to the order state
            if matches!(kind, ExperimentKind::Transitions | ExperimentKind::CriticalSigma) {
                StateChoice::default().resolve(&p.g)?;
            }
        }
        Ok(())
    }
}
