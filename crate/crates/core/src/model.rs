//! System parameters, adiabatic elimination of the cavity, and the spectral
//! quantities of the reduced two-magnon model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative half-width of the band around `|Δ| = 2Γ` classified as the
/// exceptional point.
pub const EP_BAND: f64 = 1e-9;

/// Relative tolerance for "gain equals dissipative coupling".
pub const PT_TOLERANCE: f64 = 1e-9;

/// Relative tolerance for the symmetric-coupling / symmetric-gain checks.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Cavity decay must exceed this multiple of `max(|ω3|, γ1, γ2)` for the
/// elimination to be flagged as valid.
pub const ADIABATIC_RATIO: f64 = 10.0;

/// Unit tag carried by parameter files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// Angular frequencies in rad/s, times in s.
    RadPerS,
    /// Rates measured in units of the dissipative coupling, times in 1/Γ.
    #[serde(rename = "units_of_Gamma")]
    UnitsOfGamma,
}

/// Full three-mode system constants.
///
/// Frequencies are detunings in a rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub g13: f64,
    pub g23: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa: f64,
}

impl PhysicalParams {
    /// Symmetric device: equal couplings `g`, equal gains `gain`, cavity on
    /// resonance with the frame (`ω3 = 0`).
    pub fn symmetric(omega1: f64, omega2: f64, g: f64, gain: f64, kappa: f64) -> Self {
        Self {
            omega1,
            omega2,
            omega3: 0.0,
            g13: g,
            g23: g,
            gamma1: gain,
            gamma2: gain,
            kappa,
        }
    }

    /// Symmetric device tuned to the PT condition `γ = g²/κ`.
    pub fn pt_symmetric(omega1: f64, omega2: f64, g: f64, kappa: f64) -> Self {
        Self::symmetric(omega1, omega2, g, g * g / kappa, kappa)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega3", self.omega3),
            ("g13", self.g13),
            ("g23", self.g23),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("kappa", self.kappa),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be > 0, got {}", self.kappa),
            });
        }
        for (name, value) in [
            ("g13", self.g13),
            ("g23", self.g23),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be >= 0, got {value}"),
                });
            }
        }
        Ok(())
    }

    /// Whether the cavity is fast enough for adiabatic elimination.
    pub fn adiabatic_valid(&self) -> bool {
        let slow = self.omega3.abs().max(self.gamma1).max(self.gamma2);
        self.kappa >= ADIABATIC_RATIO * slow
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            omega1: self.omega1 * s,
            omega2: self.omega2 * s,
            omega3: self.omega3 * s,
            g13: self.g13 * s,
            g23: self.g23 * s,
            gamma1: self.gamma1 * s,
            gamma2: self.gamma2 * s,
            kappa: self.kappa * s,
        }
    }
}

/// Parameter file contents: a unit tag plus the parameters themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaggedParams {
    pub units: Units,
    #[serde(flatten)]
    pub params: PhysicalParams,
}

impl TaggedParams {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let tagged: TaggedParams = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        tagged.validate()?;
        Ok(tagged)
    }

    /// Parameter invariants plus, for `units_of_Gamma`, `g13 g23 / κ = 1`.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.units == Units::UnitsOfGamma {
            let p = &self.params;
            let gamma = p.g13 * p.g23 / p.kappa;
            if (gamma - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "units_of_Gamma requires g13*g23/kappa = 1, got {gamma}"
                )));
            }
        }
        Ok(())
    }
}

/// Spectral phase of the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    PtExact,
    Broken,
    ExceptionalPoint,
}

impl Phase {
    pub fn classify(detuning: f64, coupling: f64) -> Self {
        let edge = 2.0 * coupling;
        let d = detuning.abs();
        if d > edge * (1.0 + EP_BAND) {
            Phase::PtExact
        } else if d < edge * (1.0 - EP_BAND) {
            Phase::Broken
        } else {
            Phase::ExceptionalPoint
        }
    }
}

/// Reduced two-mode model after eliminating the cavity.
///
/// Holds the sum frequency `Ω = ω1 + ω2`, detuning `Δ = ω1 − ω2`, the
/// dissipative coupling `Γ = g²/κ`, the magnon gain `γ` and the dimensionless
/// prefactor `g²/κ²` that converts magnon correlators into cavity photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModel {
    sum_frequency: f64,
    detuning: f64,
    coupling: f64,
    gain: f64,
    prefactor: f64,
    phase: Phase,
    splitting_sq: f64,
    adiabatic_valid: bool,
}

impl EffectiveModel {
    /// PT-symmetric model (`γ = Γ`).
    pub fn new(sum_frequency: f64, detuning: f64, coupling: f64, prefactor: f64) -> Self {
        Self::with_gain(sum_frequency, detuning, coupling, coupling, prefactor)
    }

    /// PT-symmetric model from the two magnon frequencies.
    pub fn from_frequencies(omega1: f64, omega2: f64, coupling: f64, prefactor: f64) -> Self {
        Self::new(omega1 + omega2, omega1 - omega2, coupling, prefactor)
    }

    /// General effective model with gain `γ` (non-PT when `γ != Γ`).
    pub fn with_gain(sum_frequency: f64, detuning: f64, coupling: f64, gain: f64, prefactor: f64) -> Self {
        assert!(coupling >= 0.0, "dissipative coupling must be >= 0");
        let phase = Phase::classify(detuning, coupling);
        let splitting_sq = match phase {
            Phase::ExceptionalPoint => 0.0,
            _ => {
                let d = detuning.abs();
                (d - 2.0 * coupling) * (d + 2.0 * coupling)
            }
        };
        Self {
            sum_frequency,
            detuning,
            coupling,
            gain,
            prefactor,
            phase,
            splitting_sq,
            adiabatic_valid: true,
        }
    }

    pub fn sum_frequency(&self) -> f64 {
        self.sum_frequency
    }
    pub fn detuning(&self) -> f64 {
        self.detuning
    }
    /// Dissipative coupling `Γ`.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    pub fn gain(&self) -> f64 {
        self.gain
    }
    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn omega1(&self) -> f64 {
        0.5 * (self.sum_frequency + self.detuning)
    }
    pub fn omega2(&self) -> f64 {
        0.5 * (self.sum_frequency - self.detuning)
    }
    pub fn adiabatic_valid(&self) -> bool {
        self.adiabatic_valid
    }

    pub fn is_pt(&self) -> bool {
        let scale = self.gain.abs().max(self.coupling).max(f64::MIN_POSITIVE);
        (self.gain - self.coupling).abs() <= PT_TOLERANCE * scale
    }

    /// `Λ² = Δ² − 4Γ²`; exactly zero at the exceptional point.
    pub fn splitting_sq(&self) -> f64 {
        self.splitting_sq
    }

    /// `λ² = 4Γ² − Δ² = −Λ²`.
    pub fn growth_sq(&self) -> f64 {
        -self.splitting_sq
    }

    /// `Λ = √(Δ² − 4Γ²)`, imaginary in the broken phase.
    pub fn splitting_root(&self) -> Complex64 {
        Complex64::new(self.splitting_sq, 0.0).sqrt()
    }

    /// `λ = √(4Γ² − Δ²)`, imaginary in the PT-exact phase.
    pub fn growth_root(&self) -> Complex64 {
        Complex64::new(-self.splitting_sq, 0.0).sqrt()
    }

    /// Same model with `ω1` replaced.
    pub fn with_omega1(&self, omega1: f64) -> Self {
        let omega2 = self.omega2();
        let mut m = Self::with_gain(
            omega1 + omega2,
            omega1 - omega2,
            self.coupling,
            self.gain,
            self.prefactor,
        );
        m.adiabatic_valid = self.adiabatic_valid;
        m
    }

    /// Same model with `Δ` replaced at fixed `ω2`.
    pub fn with_detuning(&self, detuning: f64) -> Self {
        self.with_omega1(self.omega2() + detuning)
    }

    /// Multiply every rate and frequency by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        assert!(s > 0.0, "scale factor must be positive");
        let mut m = Self::with_gain(
            self.sum_frequency * s,
            self.detuning * s,
            self.coupling * s,
            self.gain * s,
            self.prefactor,
        );
        m.adiabatic_valid = self.adiabatic_valid;
        m
    }

    /// Rescale so that `Γ = 1`. Returns `None` for an uncoupled model.
    pub fn to_gamma_units(&self) -> Option<GammaUnits> {
        if self.coupling <= 0.0 {
            return None;
        }
        Some(GammaUnits {
            model: self.scaled(1.0 / self.coupling),
            rate_scale: self.coupling,
        })
    }
}

/// A model expressed in units of its own dissipative coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaUnits {
    pub model: EffectiveModel,
    /// The original `Γ`; multiply internal rates by this to get back.
    pub rate_scale: f64,
}

impl GammaUnits {
    pub fn time_to_internal(&self, t: f64) -> f64 {
        t * self.rate_scale
    }
    pub fn rate_from_internal(&self, rate: f64) -> f64 {
        rate * self.rate_scale
    }
}

/// Adiabatically eliminate the cavity.
///
/// Requires symmetric couplings and gains. A gain that differs from `g²/κ`
/// is accepted but the resulting model reports `is_pt() == false`.
pub fn reduce(p: &PhysicalParams) -> Result<EffectiveModel> {
    p.validate()?;
    check_symmetric("couplings g13/g23", p.g13, p.g23)?;
    check_symmetric("gains gamma1/gamma2", p.gamma1, p.gamma2)?;
    let g = p.g13;
    let coupling = g * g / p.kappa;
    let prefactor = (g / p.kappa).powi(2);
    let mut m = EffectiveModel::with_gain(p.omega1 + p.omega2, p.omega1 - p.omega2, coupling, p.gamma1, prefactor);
    m.adiabatic_valid = p.adiabatic_valid();
    Ok(m)
}

fn check_symmetric(what: &'static str, first: f64, second: f64) -> Result<()> {
    let scale = first.abs().max(second.abs());
    if (first - second).abs() > SYMMETRY_TOLERANCE * scale {
        return Err(Error::Asymmetric { what, first, second });
    }
    Ok(())
}

/// `E_{1,2} = (Ω ± √(Δ² − 4Γ²)) / 2`.
pub fn eigenvalues(m: &EffectiveModel) -> (Complex64, Complex64) {
    let half_sum = Complex64::new(0.5 * m.sum_frequency, 0.0);
    let half_root = 0.5 * m.splitting_root();
    (half_sum + half_root, half_sum - half_root)
}

/// `|E1 − E2|`.
pub fn splitting(m: &EffectiveModel) -> f64 {
    m.splitting_sq.abs().sqrt()
}

/// `∂ΔE/∂ω1 = |Δ / √(Δ² − 4Γ²)|`; `None` at the exceptional point where it
/// diverges.
pub fn susceptibility(m: &EffectiveModel) -> Option<f64> {
    match m.phase {
        Phase::ExceptionalPoint => None,
        _ => Some(m.detuning.abs() / m.splitting_sq.abs().sqrt()),
    }
}
