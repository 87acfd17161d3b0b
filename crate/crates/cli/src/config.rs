//! JSON configuration schema: sparse documents with named scenarios and
//! defaults, resolved into a fully specified experiment.

use serde::{Deserialize, Serialize};

use vsatrack::montecarlo::{
    presets, ExperimentConfig, Method, ScenarioConfig, SweepAxis, SweepAxisName,
};
use crate::CliError;

/// A scenario by preset name or fully inline.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Named(String),
    Inline(Box<ScenarioConfig>),
}

/// One method name or a list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MethodsField {
    One(Method),
    Many(Vec<Method>),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseDoc {
    pub snr_db: Option<f64>,
    pub outlier_prob: Option<f64>,
    pub outlier_range_span: Option<f64>,
    pub outlier_velocity_span: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VsaDoc {
    pub delta: Option<f64>,
    pub grid_points: Option<usize>,
    pub eps_d: Option<f64>,
    pub eps_theta_rad: Option<f64>,
    pub residual_velocity_weight: Option<f64>,
    pub prior_gate: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EkfDoc {
    pub process_noise_spectral: Option<f64>,
    pub baseline_r_scale: Option<f64>,
    pub vsa_r_scale: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub axis: String,
    pub values: Vec<f64>,
}

/// The configuration document. Only `scenario` is required; every other
/// field falls back to the scenario preset's defaults.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub scenario: ScenarioRef,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodsField>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vsa: Option<VsaDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ekf: Option<EkfDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepDoc>,
}

/// Scenario names accepted by the `scenario` field.
fn named_scenario(name: &str) -> Option<ExperimentConfig> {
    // Experiment presets double as scenario providers; bare trajectory names
    // map to the tracking presets.
    match name {
        "line" => Some(presets::by_name("fig6a").unwrap()),
        "rhombus" => Some(presets::by_name("table1-rhombus").unwrap()),
        "circle" => Some(presets::by_name("table1-circle").unwrap()),
        "star" => Some(presets::by_name("table1-star").unwrap()),
        other => presets::by_name(other),
    }
}

/// Resolves the sparse document into a validated experiment configuration.
pub fn resolve(doc: &ConfigDoc) -> Result<ExperimentConfig, CliError> {
    let mut config = match &doc.scenario {
        ScenarioRef::Named(name) => named_scenario(name).ok_or_else(|| {
            CliError::Schema(format!(
                "scenario must name a preset ({}) or be inline; got \"{name}\"",
                presets::NAMES.join(", ")
            ))
        })?,
        ScenarioRef::Inline(scenario) => {
            let mut base = presets::by_name("fig6a").unwrap();
            base.scenario = (**scenario).clone();
            // Inline scenarios inherit only tuning defaults, not a sweep.
            base.sweep = None;
            base
        }
    };

    if let Some(methods) = &doc.method {
        config.methods = match methods {
            MethodsField::One(m) => vec![*m],
            MethodsField::Many(ms) => ms.clone(),
        };
    }
    if let Some(noise) = &doc.noise {
        if let Some(v) = noise.snr_db {
            config.noise.snr_db = v;
        }
        if let Some(v) = noise.outlier_prob {
            config.noise.outlier_prob = v;
        }
        if let Some(v) = noise.outlier_range_span {
            config.noise.outlier_range_span = v;
        }
        if let Some(v) = noise.outlier_velocity_span {
            config.noise.outlier_velocity_span = v;
        }
    }
    if let Some(vsa) = &doc.vsa {
        let d = &mut config.vsa;
        if let Some(v) = vsa.delta {
            d.delta = v;
        }
        if let Some(v) = vsa.grid_points {
            d.grid_points = v;
        }
        if let Some(v) = vsa.eps_d {
            d.eps_d = v;
        }
        if let Some(v) = vsa.eps_theta_rad {
            d.eps_theta = v;
        }
        if let Some(v) = vsa.residual_velocity_weight {
            d.residual_velocity_weight = v;
        }
        if let Some(v) = vsa.prior_gate {
            d.prior_gate = v;
        }
    }
    if let Some(ekf) = &doc.ekf {
        if let Some(v) = ekf.process_noise_spectral {
            config.process_noise_spectral = v;
        }
        if let Some(v) = ekf.baseline_r_scale {
            config.baseline_r_scale = v;
        }
        if let Some(v) = ekf.vsa_r_scale {
            config.vsa_r_scale = v;
        }
    }
    if let Some(trials) = doc.trials {
        config.n_trials = trials;
    }
    if let Some(seed) = doc.seed {
        config.base_seed = seed;
    }
    if let Some(sweep) = &doc.sweep {
        let axis = SweepAxisName::parse(&sweep.axis).map_err(|e| CliError::Schema(e.to_string()))?;
        config.sweep = Some(SweepAxis {
            axis,
            values: sweep.values.clone(),
        });
    }

    config
        .validated()
        .map_err(|e| CliError::Schema(e.to_string()))
}

/// Parses a configuration file and resolves it against the defaults.
pub fn parse_config(path: &std::path::Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let doc: ConfigDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{e}")))?;
    resolve(&doc)
}

/// The fully resolved configuration as a canonical document: inline scenario
/// and every field populated, so parsing it back is the identity.
pub fn canonical_doc(config: &ExperimentConfig) -> ConfigDoc {
    ConfigDoc {
        scenario: ScenarioRef::Inline(Box::new(config.scenario.clone())),
        method: Some(MethodsField::Many(config.methods.clone())),
        noise: Some(NoiseDoc {
            snr_db: Some(config.noise.snr_db),
            outlier_prob: Some(config.noise.outlier_prob),
            outlier_range_span: Some(config.noise.outlier_range_span),
            outlier_velocity_span: Some(config.noise.outlier_velocity_span),
        }),
        vsa: Some(VsaDoc {
            delta: Some(config.vsa.delta),
            grid_points: Some(config.vsa.grid_points),
            eps_d: Some(config.vsa.eps_d),
            eps_theta_rad: Some(config.vsa.eps_theta),
            residual_velocity_weight: Some(config.vsa.residual_velocity_weight),
            prior_gate: Some(config.vsa.prior_gate),
        }),
        ekf: Some(EkfDoc {
            process_noise_spectral: Some(config.process_noise_spectral),
            baseline_r_scale: Some(config.baseline_r_scale),
            vsa_r_scale: Some(config.vsa_r_scale),
        }),
        trials: Some(config.n_trials),
        seed: Some(config.base_seed),
        sweep: config.sweep.as_ref().map(|s| SweepDoc {
            axis: s.axis.as_str().to_string(),
            values: s.values.clone(),
        }),
    }
}

/// Canonical JSON text of the resolved configuration.
pub fn canonical_json(config: &ExperimentConfig) -> String {
    let mut text = serde_json::to_string_pretty(&canonical_doc(config)).expect("serializable");
    text.push('\n');
    text
}

/// FNV-1a 64-bit digest of the canonical configuration document.
pub fn config_hash(config: &ExperimentConfig) -> String {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for byte in canonical_json(config).as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(PRIME);
    }
    format!("fnv1a64:{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_fills_defaults() {
        let doc: ConfigDoc =
            serde_json::from_str(r#"{"scenario": "fig5", "method": "vsa"}"#).unwrap();
        let config = resolve(&doc).unwrap();
        assert_eq!(config.methods, vec![Method::Vsa]);
        assert_eq!(config.n_trials, 50);
        assert_eq!(config.base_seed, 0xC0FFEE);
        assert_eq!(config.noise.snr_db, 10.0);
        assert_eq!(config.vsa.grid_points, 100);
    }

    #[test]
    fn out_of_range_field_is_named_in_error() {
        let doc: ConfigDoc = serde_json::from_str(
            r#"{"scenario": "fig5", "noise": {"outlier_prob": 1.5}}"#,
        )
        .unwrap();
        let err = resolve(&doc).unwrap_err().to_string();
        assert!(err.contains("outlier_prob"), "error was: {err}");
        assert!(err.contains("[0, 1]"), "error was: {err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let parsed: Result<ConfigDoc, _> =
            serde_json::from_str(r#"{"scenario": "fig5", "bogus": 1}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn canonical_round_trip_is_identity() {
        let config = presets::by_name("fig6b").unwrap();
        let text = canonical_json(&config);
        let doc: ConfigDoc = serde_json::from_str(&text).unwrap();
        let reparsed = resolve(&doc).unwrap();
        assert_eq!(reparsed, config);
        assert_eq!(config_hash(&reparsed), config_hash(&config));
    }

    #[test]
    fn unknown_scenario_name_rejected() {
        let doc: ConfigDoc = serde_json::from_str(r#"{"scenario": "fig99"}"#).unwrap();
        assert!(matches!(resolve(&doc), Err(CliError::Schema(_))));
    }
}
