//! JSON configuration schema and its conversion to core types.
//!
//! Every subcommand takes the same document shape where it applies:
//!
//! ```json
//! {
//!   "grid":  {"min": 0, "max": 110, "step": 1}        // or {"points": [...]}
//!   "prior": {"kind": "uniform"}                       // | {"kind": "normal", "mu": .., "sigma": ..}
//!                                                      // | {"kind": "table", "weights": [...]}
//!   "truth": {"kind": "families", "families": [...]}   // | {"kind": "matched"} (needs a channel)
//! }
//! ```

use anyhow::{anyhow, bail, Context};
use semg_core::{Dist, Grid, SemanticChannel, ShannonChannel, TruthFamily, TruthFn};
use serde::Deserialize;

/// Grid as an inclusive range plus step, or an explicit point list.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub points: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn build(&self) -> anyhow::Result<Grid> {
        match (&self.points, self.min, self.max, self.step) {
            (Some(points), None, None, None) => {
                Grid::new(points.clone()).map_err(|e| anyhow!("grid.points: {e}"))
            }
            (None, Some(min), Some(max), Some(step)) => {
                Grid::from_range(min, max, step).map_err(|e| anyhow!("grid: {e}"))
            }
            _ => bail!("grid: give either points or all of min/max/step"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Uniform,
    Normal { mu: f64, sigma: f64 },
    Table { weights: Vec<f64> },
}

impl DistSpec {
    pub fn build(&self, grid: &Grid, what: &str) -> anyhow::Result<Dist> {
        let dist = match self {
            DistSpec::Uniform => Dist::uniform(grid.len()),
            DistSpec::Normal { mu, sigma } => {
                Dist::discretized_normal(grid, *mu, *sigma).map_err(|e| anyhow!("{what}: {e}"))?
            }
            DistSpec::Table { weights } => {
                Dist::new(weights.clone()).map_err(|e| anyhow!("{what}: {e}"))?
            }
        };
        if dist.len() != grid.len() {
            bail!(
                "{what}: {} weights for a grid of {} points",
                dist.len(),
                grid.len()
            );
        }
        Ok(dist)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Gaussian { center: f64, sigma: f64 },
    Logistic { slope: f64, midpoint: f64 },
    Table { values: Vec<f64> },
}

impl FamilySpec {
    pub fn build(&self) -> anyhow::Result<TruthFamily> {
        Ok(match self {
            FamilySpec::Gaussian { center, sigma } => TruthFamily::Gaussian {
                center: *center,
                sigma: *sigma,
            },
            FamilySpec::Logistic { slope, midpoint } => TruthFamily::Logistic {
                slope: *slope,
                midpoint: *midpoint,
            },
            FamilySpec::Table { values } => TruthFamily::Table(
                TruthFn::new(values.clone()).map_err(|e| anyhow!("truth table: {e}"))?,
            ),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TruthSpec {
    /// Derive every label's truth function from the channel backward
    /// transitions (requires a channel).
    Matched,
    Families {
        families: Vec<FamilySpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub rows: Vec<Vec<f64>>,
}

/// Config for `measure`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    pub grid: GridSpec,
    pub prior: DistSpec,
    pub truth: TruthSpec,
    #[serde(default)]
    pub channel: Option<ChannelSpec>,
    #[serde(default)]
    pub actual: Option<DistSpec>,
    #[serde(default)]
    pub label: usize,
}

pub struct MeasureInputs {
    pub prior: Dist,
    pub sem: SemanticChannel,
    pub channel: Option<ShannonChannel>,
    pub actual: Option<Dist>,
    pub label: usize,
}

impl MeasureConfig {
    pub fn build(&self) -> anyhow::Result<MeasureInputs> {
        let grid = self.grid.build()?;
        let prior = self.prior.build(&grid, "prior")?;
        let channel = self
            .channel
            .as_ref()
            .map(|c| ShannonChannel::new(c.rows.clone()).map_err(|e| anyhow!("channel: {e}")))
            .transpose()?;
        if let Some(ch) = &channel {
            if ch.n_inputs() != grid.len() {
                bail!(
                    "channel: {} rows for a grid of {} points",
                    ch.n_inputs(),
                    grid.len()
                );
            }
        }
        let sem = match &self.truth {
            TruthSpec::Matched => {
                let ch = channel
                    .as_ref()
                    .ok_or_else(|| anyhow!("truth.matched requires a channel"))?;
                SemanticChannel::matched_to_channel(ch, &prior)
                    .map_err(|e| anyhow!("truth: {e}"))?
            }
            TruthSpec::Families { families } => {
                let families = families
                    .iter()
                    .map(|f| f.build())
                    .collect::<anyhow::Result<Vec<_>>>()?;
                SemanticChannel::from_families(&families, &grid)
                    .map_err(|e| anyhow!("truth: {e}"))?
            }
        };
        if let Some(ch) = &channel {
            if ch.n_labels() != sem.n_labels() {
                bail!(
                    "channel has {} labels but truth defines {}",
                    ch.n_labels(),
                    sem.n_labels()
                );
            }
        }
        let actual = self
            .actual
            .as_ref()
            .map(|a| a.build(&grid, "actual"))
            .transpose()?;
        if self.label >= sem.n_labels() {
            bail!(
                "label {} out of range ({} labels)",
                self.label,
                sem.n_labels()
            );
        }
        Ok(MeasureInputs {
            prior,
            sem,
            channel,
            actual,
            label: self.label,
        })
    }
}

/// Config for `rg-curve`. Defaults to the binary demo instance: a uniform
/// two-point source with overlapping unit-width gaussian truth functions.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RgConfig {
    pub grid: GridSpec,
    pub prior: DistSpec,
    pub truth: Vec<FamilySpec>,
}

impl RgConfig {
    pub fn build(&self) -> anyhow::Result<(Dist, SemanticChannel)> {
        let grid = self.grid.build()?;
        let prior = self.prior.build(&grid, "prior")?;
        let families = self
            .truth
            .iter()
            .map(|f| f.build())
            .collect::<anyhow::Result<Vec<_>>>()?;
        let sem =
            SemanticChannel::from_families(&families, &grid).map_err(|e| anyhow!("truth: {e}"))?;
        Ok((prior, sem))
    }

    pub fn default_json() -> serde_json::Value {
        serde_json::json!({
            "grid": {"points": [0.0, 1.0]},
            "prior": {"kind": "uniform"},
            "truth": [
                {"kind": "gaussian", "center": 0.0, "sigma": 1.0},
                {"kind": "gaussian", "center": 1.0, "sigma": 1.0},
            ],
        })
    }
}

/// Config for `gps`; command-line flags override these fields.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpsConfig {
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub dt_max: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
}

/// Config for `control`; defaults to the death-age demo problem.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    #[serde(default)]
    pub s_list: Option<Vec<f64>>,
    #[serde(default)]
    pub x_star: Option<f64>,
    #[serde(default)]
    pub problem: Option<ControlProblemSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlProblemSpec {
    pub grid: GridSpec,
    pub prior: DistSpec,
    pub goal: FamilySpec,
}

impl ControlProblemSpec {
    pub fn build(&self) -> anyhow::Result<semg_core::ControlProblem> {
        let grid = self.grid.build()?;
        let prior = self.prior.build(&grid, "prior")?;
        let goal = self
            .goal
            .build()?
            .evaluate(&grid)
            .map_err(|e| anyhow!("goal: {e}"))?;
        semg_core::ControlProblem::new(grid, prior, goal).map_err(|e| anyhow!("problem: {e}"))
    }

    pub fn default_json() -> serde_json::Value {
        serde_json::json!({
            "grid": {"min": 0.0, "max": 110.0, "step": 1.0},
            "prior": {"kind": "normal", "mu": 50.0, "sigma": 10.0},
            "goal": {"kind": "logistic", "slope": 0.8, "midpoint": 60.0},
        })
    }
}

/// Parse a JSON document into a config type, reporting the failing field
/// path on error.
pub fn parse_config<T: serde::de::DeserializeOwned>(text: &str) -> anyhow::Result<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).context("config is not valid JSON")?;
    let deserializer = value.clone();
    serde_path_to_error::deserialize(deserializer)
        .map_err(|e| anyhow!("config field `{}`: {}", e.path(), e.inner()))
}
