//! Magnetic-field estimation through the Kittel-mode frequency `ω1 = γ0 B + ω_m0`.
//!
//! Everything here is in SI. The dynamics run in units of `Γ`; the result is
//! scaled back at the end.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::dynamics::{InitialCondition, OccupationDependence};
use crate::error::{Error, Result};
use crate::metrology::precision_error_propagation;
use crate::model::{reduce, PhysicalParams};

/// How quoted frequencies (Hz, GHz/T) become the rates used in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyConvention {
    /// Multiply by 2π: `f` in Hz becomes `2πf` rad/s.
    #[default]
    Angular,
    /// Use the quoted number directly as a rate in s⁻¹.
    Cyclic,
}

impl FrequencyConvention {
    pub fn factor(self) -> f64 {
        match self {
            FrequencyConvention::Angular => TAU,
            FrequencyConvention::Cyclic => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagnetometerSpec {
    /// Gyromagnetic ratio in rad s⁻¹ T⁻¹.
    pub gamma0: f64,
    /// Anisotropy offset in rad/s.
    pub omega_m0: f64,
    /// Device parameters in rad/s.
    pub device: PhysicalParams,
    /// Seconds.
    pub integration_time: f64,
    pub convention: FrequencyConvention,
}

/// Magnetometer described with quoted (cyclic) numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnetometerConfig {
    pub detuning_hz: f64,
    pub coupling_hz: f64,
    pub kappa_hz: f64,
    /// Defaults to the PT point `g²/κ`.
    #[serde(default)]
    pub gain_hz: Option<f64>,
    pub gamma0_hz_per_tesla: f64,
    #[serde(default)]
    pub omega_m0_hz: f64,
    pub integration_time: f64,
    #[serde(default)]
    pub convention: FrequencyConvention,
}

impl Default for MagnetometerConfig {
    /// Δ = 2 MHz, κ = 100 MHz, g = 10 MHz (so Γ = 1 MHz, on the exceptional
    /// point), γ0 = 28 GHz/T and t = 10 s.
    fn default() -> Self {
        Self {
            detuning_hz: 2.0e6,
            coupling_hz: 10.0e6,
            kappa_hz: 100.0e6,
            gain_hz: None,
            gamma0_hz_per_tesla: 28.0e9,
            omega_m0_hz: 0.0,
            integration_time: 10.0,
            convention: FrequencyConvention::Angular,
        }
    }
}

impl MagnetometerConfig {
    pub fn with_convention(mut self, convention: FrequencyConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn to_spec(&self) -> Result<MagnetometerSpec> {
        let k = self.convention.factor();
        let g = self.coupling_hz * k;
        let kappa = self.kappa_hz * k;
        if kappa.is_nan() || kappa <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kappa_hz",
                reason: format!("must be positive, got {}", self.kappa_hz),
            });
        }
        let gain = self.gain_hz.map_or(g * g / kappa, |x| x * k);
        let delta = self.detuning_hz * k;
        let device = PhysicalParams {
            omega1: 0.5 * delta,
            omega2: -0.5 * delta,
            omega3: 0.0,
            g13: g,
            g23: g,
            gamma1: gain,
            gamma2: gain,
            kappa,
        };
        let spec = MagnetometerSpec {
            gamma0: self.gamma0_hz_per_tesla * k,
            omega_m0: self.omega_m0_hz * k,
            device,
            integration_time: self.integration_time,
            convention: self.convention,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl MagnetometerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.gamma0.is_nan() || self.gamma0 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma0",
                reason: format!("must be positive, got {}", self.gamma0),
            });
        }
        if self.integration_time.is_nan() || self.integration_time <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "integration_time",
                reason: format!("must be positive, got {}", self.integration_time),
            });
        }
        self.device.validate()
    }

    pub fn with_integration_time(mut self, t: f64) -> Self {
        self.integration_time = t;
        self
    }
}

/// `ω1 = γ0 B + ω_m0` in rad/s.
pub fn field_to_frequency(b: f64, spec: &MagnetometerSpec) -> f64 {
    spec.gamma0 * b + spec.omega_m0
}

/// Every intermediate of the field estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldPrecision {
    pub convention: FrequencyConvention,
    /// rad s⁻¹ T⁻¹.
    pub gamma0: f64,
    /// `Γ = g²/κ` in rad/s.
    pub coupling: f64,
    pub detuning: f64,
    pub prefactor: f64,
    pub integration_time: f64,
    /// `Γt`.
    pub gamma_t: f64,
    pub photon_number: f64,
    pub variance: f64,
    /// `∂N_c/∂ω1` in s.
    pub slope: f64,
    /// `δ²ω1` in (rad/s)².
    pub delta2_omega1: f64,
    /// `δB` in T.
    pub delta_b: f64,
    /// `δB √t` in T Hz^{-1/2}.
    pub sensitivity: f64,
    /// `δB / √t`, the alternative reading.
    pub delta_b_over_root_t: f64,
    pub divergent: bool,
}

/// `δB = √(δ²ω1) / γ0` for vacuum input.
pub fn field_precision(spec: &MagnetometerSpec) -> Result<FieldPrecision> {
    spec.validate()?;
    let m = reduce(&spec.device)?;
    let t = spec.integration_time;
    let base = FieldPrecision {
        convention: spec.convention,
        gamma0: spec.gamma0,
        coupling: m.coupling(),
        detuning: m.detuning(),
        prefactor: m.prefactor(),
        integration_time: t,
        gamma_t: m.coupling() * t,
        photon_number: 0.0,
        variance: 0.0,
        slope: 0.0,
        delta2_omega1: f64::INFINITY,
        delta_b: f64::INFINITY,
        sensitivity: f64::INFINITY,
        delta_b_over_root_t: f64::INFINITY,
        divergent: true,
    };
    let Some(units) = m.to_gamma_units() else {
        return Ok(base);
    };
    let r = precision_error_propagation(
        &units.model,
        &InitialCondition::Vacuum,
        units.time_to_internal(t),
        OccupationDependence::Tracked,
    )?;
    let scale = units.rate_scale;
    let delta2_omega1 = r.delta2_omega1 * scale * scale;
    let delta_b = delta2_omega1.sqrt() / spec.gamma0;
    Ok(FieldPrecision {
        photon_number: r.photon_number,
        variance: r.variance,
        slope: r.slope / scale,
        delta2_omega1,
        delta_b,
        sensitivity: sensitivity(delta_b, t),
        delta_b_over_root_t: delta_b / t.sqrt(),
        divergent: r.divergent,
        ..base
    })
}

/// `S = δB √t`.
pub fn sensitivity(delta_b: f64, t: f64) -> f64 {
    delta_b * t.sqrt()
}
