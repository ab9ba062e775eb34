//! Config files for each subcommand, loading with diagnostics, and the
//! canonical form that gets hashed into output headers.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use magpt::sweep::EntanglementSweepSpec;
use magpt::{figures, Grid, InitialCondition, PhysicalParams, SweepSpec, TaggedParams, Units};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    /// rad/s and seconds.
    Si,
    /// Rates in units of Γ, times in 1/Γ.
    Gamma,
}

impl UnitsArg {
    pub fn tag(self) -> Units {
        match self {
            UnitsArg::Si => Units::RadPerS,
            UnitsArg::Gamma => Units::UnitsOfGamma,
        }
    }
}

pub fn units_label(u: Units) -> &'static str {
    match u {
        Units::RadPerS => "rad_per_s",
        Units::UnitsOfGamma => "units_of_Gamma",
    }
}

/// Fails when `--units` disagrees with the units a config is written in.
pub fn check_units(requested: Option<UnitsArg>, actual: Units) -> Result<()> {
    match requested {
        Some(r) if r.tag() != actual => bail!(
            "--units {} does not match the config, which is in {}",
            match r {
                UnitsArg::Si => "si",
                UnitsArg::Gamma => "gamma",
            },
            units_label(actual)
        ),
        _ => Ok(()),
    }
}

fn vacuum() -> InitialCondition {
    InitialCondition::Vacuum
}

/// Model, input and time grid for `photon-number` and `qfi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub model: TaggedParams,
    #[serde(default = "vacuum")]
    pub input: InitialCondition,
    pub times: Grid,
}

impl Default for TrajectoryConfig {
    /// Γ = 1 on the exceptional point (ω1 = 3, ω2 = 1), `t ∈ (0, 5]`.
    fn default() -> Self {
        Self {
            model: TaggedParams {
                units: Units::UnitsOfGamma,
                params: PhysicalParams::pt_symmetric(3.0, 1.0, 10.0, 100.0),
            },
            input: InitialCondition::Vacuum,
            times: Grid::linear(0.0, 5.0, 50).open(),
        }
    }
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.times.validate("times")?;
        if self.times.min < 0.0 {
            bail!("times: must be non-negative");
        }
        Ok(())
    }
}

fn check_gamma_coupling(units: Units, coupling: f64) -> Result<()> {
    if units == Units::UnitsOfGamma && coupling != 1.0 {
        bail!("units_of_Gamma requires coupling = 1, got {coupling}");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub units: Units,
    pub sweep: SweepSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            units: Units::UnitsOfGamma,
            sweep: figures::fig1_spec(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        check_gamma_coupling(self.units, self.sweep.coupling)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntanglementConfig {
    pub units: Units,
    pub sweep: EntanglementSweepSpec,
}

impl Default for EntanglementConfig {
    fn default() -> Self {
        Self {
            units: Units::UnitsOfGamma,
            sweep: figures::fig4_spec(),
        }
    }
}

impl EntanglementConfig {
    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        check_gamma_coupling(self.units, self.sweep.coupling)
    }
}

fn default_full_detunings() -> Vec<f64> {
    vec![0.0, 1.0, 2.0, 3.0]
}

fn default_full_times() -> Vec<f64> {
    (1..=20).map(|k| 0.25 * k as f64).collect()
}

fn default_grid() -> usize {
    10
}

/// Sizes of the validation suite and optional per-check tolerances keyed
/// by check id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    #[serde(default = "default_grid")]
    pub oracle_grid: usize,
    #[serde(default = "default_grid")]
    pub closed_form_grid: usize,
    #[serde(default = "default_full_detunings")]
    pub full_detunings: Vec<f64>,
    #[serde(default = "default_full_times")]
    pub full_times: Vec<f64>,
    #[serde(default)]
    pub tolerances: std::collections::BTreeMap<String, f64>,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            oracle_grid: default_grid(),
            closed_form_grid: default_grid(),
            full_detunings: default_full_detunings(),
            full_times: default_full_times(),
            tolerances: Default::default(),
        }
    }
}

pub const CHECK_IDS: [&str; 6] = [
    "effective_oracle",
    "closed_form",
    "full_model",
    "determinant",
    "vacuum_variance",
    "cramer_rao",
];

impl ValidateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.oracle_grid < 2 || self.closed_form_grid < 2 {
            bail!("oracle_grid and closed_form_grid need at least 2 points per axis");
        }
        if self.full_detunings.is_empty() || self.full_times.is_empty() {
            bail!("full_detunings and full_times must not be empty");
        }
        if self.full_times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            bail!("full_times must be finite and non-negative");
        }
        for (id, tol) in &self.tolerances {
            if !CHECK_IDS.contains(&id.as_str()) {
                bail!("tolerances: unknown check `{id}` (known: {})", CHECK_IDS.join(", "));
            }
            if tol.is_nan() || *tol < 0.0 {
                bail!("tolerances.{id}: must be non-negative, got {tol}");
            }
        }
        Ok(())
    }
}

/// A resolved config plus its canonical text and SHA-256.
pub struct Loaded<T> {
    pub config: T,
    pub canonical: String,
    pub sha256: String,
}

pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| anyhow::anyhow!("{origin}: {e}"))
}

/// Load `path` (or take the default), apply `adjust`, validate and hash.
pub fn load<T>(
    path: Option<&Path>,
    adjust: impl FnOnce(&mut T),
    validate: impl FnOnce(&T) -> Result<()>,
) -> Result<Loaded<T>>
where
    T: DeserializeOwned + Serialize + Default,
{
    let mut config: T = match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse(&text, &p.display().to_string())?
        }
        None => T::default(),
    };
    adjust(&mut config);
    let origin = path.map_or("default config".to_string(), |p| p.display().to_string());
    validate(&config).with_context(|| format!("{origin}: invalid configuration"))?;
    let canonical = toml::to_string(&config).context("serialising the resolved config")?;
    let sha256 = hex::encode(Sha256::digest(canonical.as_bytes()));
    Ok(Loaded {
        config,
        canonical,
        sha256,
    })
}
