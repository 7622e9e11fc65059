//! Parameter sets of the published figures.
//!
//! Every preset uses `L = 10`, `dt = 0.1`, a top-hat kernel of radius one and
//! the cubic `G`. Published reference values are attached to the output as `expected.*`
//! provenance entries; they are not checked here.

use czirok::{Averaging, GSpec, KernelShape};

use crate::config::{
    Axes, Detector, ExperimentConfig, ExperimentKind, ExperimentSpec, KdeConfig, ModelConfig, NamedState,
    StateChoice, PRESET_IDS,
};
use crate::run::run_config;
use crate::table::ResultTable;
use crate::HarnessError;

/// Default seed of `czirok figure`.
pub const DEFAULT_SEED: u64 = 1;

/// Run length of the switching-frequency presets.
pub const TRANSITION_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub id: String,
    pub config: ExperimentConfig,
    pub annotations: Vec<(String, String)>,
}

fn model(n: usize, sigma: f64, h: f64, steps: usize, seed: u64) -> ModelConfig {
    ModelConfig {
        n,
        l: 10.0,
        sigma,
        dt: 0.1,
        steps,
        seed,
        g: GSpec::cubic(h),
        kernel: KernelShape::TopHat { r: 1.0 },
        averaging: Averaging::Symmetric,
    }
}

fn spec(kind: ExperimentKind, axes: Axes, xi: NamedState) -> ExperimentSpec {
    ExperimentSpec {
        kind,
        id: None,
        axes,
        replicates: 1,
        detector: Detector::default(),
        kde: None,
        xi: StateChoice::Named(xi),
        k_range: 8,
        every: 1,
    }
}

fn notes(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(k, v)| (format!("expected.{k}"), v.to_string()))
        .collect()
}

/// Build preset `id`. `steps` overrides the preset's run length.
pub fn preset(id: &str, seed: u64, steps: Option<usize>) -> Result<Preset, HarnessError> {
    use ExperimentKind::*;
    use NamedState::*;
    let run = |default: usize| steps.unwrap_or(default);
    let sigma_axis = |v: &[f64]| Axes {
        sigma: v.to_vec(),
        ..Axes::default()
    };
    let h_axis = |v: &[f64]| Axes {
        h: v.to_vec(),
        ..Axes::default()
    };
    let (config, annotations) = match id {
        "fig1" => {
            let sigmas: Vec<f64> = (0..9).map(|i| 0.5 + 0.25 * i as f64).collect();
            let mut e = spec(
                Stability,
                Axes {
                    sigma: sigmas,
                    h: vec![5.0, 6.0, 8.0, 10.0],
                    ..Axes::default()
                },
                Order,
            );
            e.k_range = 1;
            (
                ExperimentConfig {
                    model: model(1, 1.0, 6.0, 0, seed),
                    experiment: e,
                },
                notes(&[
                    ("sigma_c", "h=5: 1.8; h=6: 0.85; h=8: 1.4; h=10: 2.2"),
                    ("most_stable_h", "6"),
                ]),
            )
        }
        "fig2" => (
            ExperimentConfig {
                model: model(500, 2.0, 6.0, run(2000), seed),
                experiment: spec(Simulate, h_axis(&[2.0, 6.0]), Disorder),
            },
            notes(&[
                ("h=2", "ubar near 0; discrepancy near 1/(6N)"),
                ("h=6", "|ubar| near xi_e = 2.8868; discrepancy near 1/(6N)"),
            ]),
        ),
        "fig3" => (
            ExperimentConfig {
                model: model(2000, 1.0, 6.0, run(2000), seed),
                experiment: spec(Simulate, sigma_axis(&[0.5, 1.0, 1.5]), Order),
            },
            notes(&[
                ("sigma=0.5", "ubar departs from xi_e; positions not uniform"),
                ("sigma=1,1.5", "ubar near xi_e = 2.8868; positions uniform"),
            ]),
        ),
        "fig4" => {
            let mut e = spec(Sweep, sigma_axis(&[0.5, 1.0, 1.5]), Order);
            e.kde = Some(KdeConfig::default());
            (
                ExperimentConfig {
                    model: model(2000, 1.0, 6.0, run(2000), seed),
                    experiment: e,
                },
                notes(&[
                    ("cluster_velocity", "sigma=0.5: 3.6"),
                    ("predicted_velocity", "sigma=0.5: 3.4"),
                ]),
            )
        }
        "fig5" => (
            ExperimentConfig {
                model: model(2000, 1.0, 6.0, run(2000), seed),
                experiment: spec(Simulate, sigma_axis(&[0.5, 1.0, 1.5]), Disorder),
            },
            notes(&[
                ("sigma=0.5,1", "ubar not near +-xi_e; positions not uniform"),
                ("sigma=1.5", "|ubar| near xi_e = 2.8868; positions uniform"),
            ]),
        ),
        "fig6" => (
            ExperimentConfig {
                model: model(2000, 1.0, 6.0, run(2000), seed),
                experiment: spec(Simulate, h_axis(&[5.0, 10.0]), Order),
            },
            notes(&[("h=5,10", "ubar departs from xi_e; positions not uniform")]),
        ),
        "fig7" | "fig8" | "fig9" => {
            let (m, axes, note) = match id {
                "fig7" => (
                    model(100, 5.0, 6.0, run(TRANSITION_STEPS), seed),
                    Axes {
                        n: vec![80, 100, 120, 140],
                        ..Axes::default()
                    },
                    "transition counts decrease with N",
                ),
                "fig8" => (
                    model(100, 5.0, 6.0, run(TRANSITION_STEPS), seed),
                    sigma_axis(&[4.0, 4.5, 5.0, 5.5]),
                    "transition counts increase with sigma",
                ),
                _ => (
                    model(100, 5.0, 6.0, run(TRANSITION_STEPS), seed),
                    h_axis(&[5.0, 5.5, 6.0, 6.5]),
                    "transition counts decrease with h",
                ),
            };
            let mut e = spec(Transitions, axes, Disorder);
            e.replicates = 20;
            (ExperimentConfig { model: m, experiment: e }, notes(&[("trend", note)]))
        }
        other => {
            return Err(HarnessError::config(
                "preset",
                format!("unknown preset `{other}`, expected one of {}", PRESET_IDS.join(", ")),
            ))
        }
    };
    config.validate()?;
    Ok(Preset {
        id: id.to_string(),
        config,
        annotations,
    })
}

impl Preset {
    pub fn annotate(&self, table: &mut ResultTable) {
        table.annotate("preset", self.id.clone());
        for (k, v) in &self.annotations {
            table.annotate(k.clone(), v.clone());
        }
    }
}

pub fn run_preset(p: &Preset) -> Result<ResultTable, HarnessError> {
    let mut table = run_config(&p.config)?;
    p.annotate(&mut table);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for id in PRESET_IDS {
            let p = preset(id, DEFAULT_SEED, None).unwrap();
            assert_eq!(p.config.model.dt, 0.1);
            assert_eq!(p.config.model.l, 10.0);
        }
    }

    #[test]
    fn pinned_parameters() {
        let f2 = preset("fig2", 1, None).unwrap().config;
        assert_eq!((f2.model.n, f2.model.sigma), (500, 2.0));
        assert_eq!(f2.experiment.axes.h, vec![2.0, 6.0]);
        let f7 = preset("fig7", 1, None).unwrap().config;
        assert_eq!(f7.experiment.axes.n, vec![80, 100, 120, 140]);
        assert_eq!((f7.model.sigma, f7.model.steps), (5.0, TRANSITION_STEPS));
        assert_eq!(preset("fig8", 1, Some(10)).unwrap().config.model.steps, 10);
    }

    #[test]
    fn unknown_preset() {
        assert!(preset("fig10", 1, None).unwrap_err().is_config());
    }
}
