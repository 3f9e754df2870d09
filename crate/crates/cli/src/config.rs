//! TOML run-configuration parsing and validation.
//!
//! The schema is a flat key-value file with one optional `[tolerances]`
//! table; every field except the three couplings has a realization-dependent
//! default.  See the repository README for the full schema.

use serde::Deserialize;
use std::collections::BTreeMap;
use swanson_core::realizations::RealizationKind;
use swanson_core::suites::{OutputFormat, RunConfig, SuiteError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    omega: f64,
    alpha: f64,
    beta: f64,
    z_grid: Option<Vec<f64>>,
    realization: Option<String>,
    n_modes: Option<usize>,
    cutoff: Option<usize>,
    margin: Option<usize>,
    checks: Option<Vec<String>>,
    output_path: Option<String>,
    output_format: Option<String>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
}

/// Parses and validates a configuration file into a [`RunConfig`].
pub fn parse_config(text: &str) -> Result<RunConfig, SuiteError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| SuiteError::Config(format!("parse error: {e}")))?;

    let realization = match raw.realization.as_deref().unwrap_or("single_mode") {
        "single_mode" => RealizationKind::SingleMode,
        "n_mode" => {
            let modes = raw.n_modes.ok_or_else(|| {
                SuiteError::Config("realization \"n_mode\" requires n_modes".into())
            })?;
            RealizationKind::NMode { modes }
        }
        "spin_orbit" => RealizationKind::SpinOrbit,
        other => {
            return Err(SuiteError::Config(format!(
                "unknown realization \"{other}\"; expected single_mode, n_mode or spin_orbit"
            )))
        }
    };
    if raw.n_modes.is_some() && !matches!(realization, RealizationKind::NMode { .. }) {
        return Err(SuiteError::Config(
            "n_modes is only meaningful for the n_mode realization".into(),
        ));
    }

    let output_format = match raw.output_format.as_deref() {
        None => OutputFormat::Json,
        Some(s) => OutputFormat::parse(s)?,
    };

    let config = RunConfig {
        omega: raw.omega,
        alpha: raw.alpha,
        beta: raw.beta,
        z_grid: raw
            .z_grid
            .unwrap_or_else(|| vec![-1.0, -0.5, 0.0, 0.5, 1.0]),
        realization,
        cutoff: raw
            .cutoff
            .unwrap_or_else(|| RunConfig::default_cutoff(realization)),
        margin: raw
            .margin
            .unwrap_or_else(|| RunConfig::default_margin(realization)),
        tolerances: raw.tolerances,
        checks: raw
            .checks
            .unwrap_or_else(|| RunConfig::default_checks(realization)),
        output_path: raw.output_path.filter(|p| p != "-"),
        output_format,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let config = parse_config("omega = 2.0\nalpha = 0.5\nbeta = 0.3\n").unwrap();
        assert_eq!(config.cutoff, 80);
        assert_eq!(config.margin, 16);
        assert_eq!(config.z_grid, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(config.realization, RealizationKind::SingleMode);
        assert!(!config.checks.is_empty());
        assert_eq!(config.output_format, OutputFormat::Json);
        assert!(config.output_path.is_none());
    }

    #[test]
    fn equal_couplings_name_the_invariant() {
        let err = parse_config("omega = 2.0\nalpha = 0.4\nbeta = 0.4\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("alpha != beta"), "got: {err}");
    }

    #[test]
    fn out_of_range_grid_rejected() {
        let err = parse_config("omega = 2.0\nalpha = 0.5\nbeta = 0.3\nz_grid = [1.5]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("outside [-1, 1]"), "got: {err}");
    }

    #[test]
    fn parse_error_carries_location() {
        let err = parse_config("omega = \"two\"\nalpha = 0.5\nbeta = 0.3\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("parse error"), "got: {err}");
        assert!(err.contains("line 1"), "got: {err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let err = parse_config("omega = 2.0\nalpha = 0.5\nbeta = 0.3\nbogus = 1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "got: {err}");
    }

    #[test]
    fn multimode_defaults() {
        let config = parse_config(
            "omega = 2.0\nalpha = 0.5\nbeta = 0.3\nrealization = \"n_mode\"\nn_modes = 2\nz_grid = [0.0]\n",
        )
        .unwrap();
        assert_eq!(config.cutoff, 8);
        assert_eq!(config.margin, 4);
        assert!(config.checks.iter().all(|c| c != "bogoliubov"));
    }

    #[test]
    fn tolerance_overrides() {
        let config = parse_config(
            "omega = 2.0\nalpha = 0.5\nbeta = 0.3\n[tolerances]\nquasi_hermiticity = 1e-6\n",
        )
        .unwrap();
        assert_eq!(config.tolerance("quasi_hermiticity"), 1e-6);
        assert_eq!(config.tolerance("relations"), 1e-10);
    }
}
