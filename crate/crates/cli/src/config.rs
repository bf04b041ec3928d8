//! TOML run configurations for the `test` and `simulate` subcommands.

use std::path::Path;

use pauc_core::contrasts::ContrastMatrix;
use pauc_core::estimator::{MarginalSpec, TrimSpec};
use pauc_core::simulation::ScenarioSpec;
use serde::Deserialize;

use crate::error::CliError;

/// Contrast selection: a named family sized to the data, or literal rows.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ContrastConfig {
    Tukey,
    /// `reference` is a 1-based marker number.
    Dunnett { reference: usize },
    /// Crossed two-factor design with `a * b` markers in cell order.
    Interaction { a: usize, b: usize },
    Custom { rows: Vec<Vec<f64>>, labels: Option<Vec<String>> },
}

impl ContrastConfig {
    pub fn build(&self, markers: usize) -> Result<ContrastMatrix, CliError> {
        let matrix = match self {
            ContrastConfig::Tukey => ContrastMatrix::tukey(markers)?,
            ContrastConfig::Dunnett { reference } => {
                if !(1..=markers).contains(reference) {
                    return Err(CliError::Usage(format!(
                        "dunnett reference {reference} out of range 1..={markers}"
                    )));
                }
                ContrastMatrix::dunnett(markers, reference - 1)?
            }
            ContrastConfig::Interaction { a, b } => {
                if a * b != markers {
                    return Err(CliError::Usage(format!(
                        "interaction design {a}x{b} needs {} markers, data has {markers}",
                        a * b
                    )));
                }
                ContrastMatrix::interaction(*a, *b)?
            }
            ContrastConfig::Custom { rows, labels } => {
                let matrix = ContrastMatrix::custom(rows.clone(), labels.clone())?;
                if matrix.markers() != markers {
                    return Err(CliError::Usage(format!(
                        "contrast rows have {} columns, data has {markers} markers",
                        matrix.markers()
                    )));
                }
                matrix
            }
        };
        Ok(matrix)
    }
}

/// Configuration for `pauc test`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestConfig {
    pub delta: f64,
    pub bootstrap_reps: usize,
    #[serde(default)]
    pub seed: u64,
    /// Single window; exactly one of `trim` and `grid` must be present.
    pub trim: Option<TrimSpec>,
    /// Window list; results are then Holm-adjusted across the grid.
    pub grid: Option<Vec<TrimSpec>>,
    pub contrast: ContrastConfig,
}

impl TestConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        parse_toml(path)
    }

    /// The windows to run, and whether they form a grid.
    pub fn trims(&self) -> Result<(Vec<TrimSpec>, bool), CliError> {
        match (&self.trim, &self.grid) {
            (Some(t), None) => Ok((vec![*t], false)),
            (None, Some(g)) if !g.is_empty() => Ok((g.clone(), true)),
            (None, Some(_)) => Err(CliError::Usage("grid must not be empty".into())),
            (Some(_), Some(_)) => {
                Err(CliError::Usage("config sets both trim and grid; pick one".into()))
            }
            (None, None) => Err(CliError::Usage("config needs either trim or grid".into())),
        }
    }
}

/// Effect section of a simulation config; presence switches the run from a
/// type-I experiment to a calibrated power experiment.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectConfig {
    pub lambda: f64,
    /// 1-based marker whose diseased location parameter is tuned.
    pub tunable_marker: usize,
    /// Expected direction of the contrast image, checked up to sign.
    pub direction: Option<Vec<f64>>,
}

/// Configuration for `pauc simulate`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default)]
    pub seed: u64,
    /// One experiment per window, all sharing the same random numbers.
    pub trims: Vec<TrimSpec>,
    pub group_size: usize,
    pub delta: f64,
    pub bootstrap_reps: usize,
    pub sim_runs: usize,
    pub nondiseased: Vec<MarginalSpec>,
    pub diseased: Vec<MarginalSpec>,
    pub spearman: Vec<Vec<f64>>,
    pub contrast: ContrastConfig,
    pub effect: Option<EffectConfig>,
}

impl SimulateConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        parse_toml(path)
    }

    pub fn from_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn markers(&self) -> usize {
        self.nondiseased.len()
    }

    pub fn scenario(&self, trim: TrimSpec) -> Result<ScenarioSpec, CliError> {
        if self.trims.is_empty() {
            return Err(CliError::Usage("trims must not be empty".into()));
        }
        let contrast = self.contrast.build(self.markers())?;
        Ok(ScenarioSpec::new(
            self.nondiseased.clone(),
            self.diseased.clone(),
            self.spearman.clone(),
            self.group_size,
            trim,
            contrast,
            self.delta,
            self.bootstrap_reps,
            self.sim_runs,
        )?)
    }
}

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Parses a `--trim` flag value like `0.8,0.6`.
pub fn parse_trim_flag(text: &str) -> Result<TrimSpec, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("trim must be two numbers `p,q`, got `{text}`")));
    }
    let p: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("trim p `{}` is not a number", parts[0])))?;
    let q: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("trim q `{}` is not a number", parts[1])))?;
    Ok(TrimSpec::new(p, q)?)
}

/// Parses a `--grid` flag value like `1,0;0.8,0.2;0.6,0.4`.
pub fn parse_grid_flag(text: &str) -> Result<Vec<TrimSpec>, CliError> {
    text.split(';').map(parse_trim_flag).collect()
}
