//! Closed-form cavity occupation for diagonal (vacuum, thermal, number-state)
//! inputs and its analytic derivative with respect to `ω1`.
//!
//! With `z = λ²t² = (4Γ² − Δ²)t²` and `p = g²/κ²`:
//!
//! ```text
//! N_vac = p [4Γt − 8Γ²t² E_2(z) + 16Γ³t³ E_3(z)]
//! h     = (1 + E_0(z))/2 − 2Γt E_1(z) + (Δ² + 4Γ²) t² E_2(z)/2
//! N_c   = N_vac + p (n̄1 + n̄2) h
//! ```
//!
//! `h` is `|W11 + W21|² = |W12 + W22|²`, the surviving weight of the initial
//! occupations in the `a + b` mode.

use serde::{Deserialize, Serialize};

use super::moments::InitialCondition;
use crate::error::{Error, Result};
use crate::model::EffectiveModel;
use crate::special::{entire, entire_derivative};

/// Whether `∂N_c/∂ω1` includes the `ω1` dependence of the thermal
/// occupation `n̄1 = 1/(e^{ω1/T} − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccupationDependence {
    #[default]
    Tracked,
    Frozen,
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

fn z_of(m: &EffectiveModel, t: f64) -> f64 {
    m.growth_sq() * t * t
}

/// Vacuum-input `N_c(t)`.
pub fn vacuum_photon_number(m: &EffectiveModel, t: f64) -> f64 {
    let g = m.coupling();
    let z = z_of(m, t);
    let gt = g * t;
    m.prefactor() * (4.0 * gt - 8.0 * gt * gt * entire(2, z) + 16.0 * gt * gt * gt * entire(3, z))
}

/// Weight `h(t)` of the initial occupations.
pub fn occupation_weight(m: &EffectiveModel, t: f64) -> f64 {
    let g = m.coupling();
    let d = m.detuning();
    let z = z_of(m, t);
    0.5 * (1.0 + entire(0, z)) - 2.0 * g * t * entire(1, z) + 0.5 * (d * d + 4.0 * g * g) * t * t * entire(2, z)
}

fn vacuum_slope_detuning(m: &EffectiveModel, t: f64) -> f64 {
    let g = m.coupling();
    let z = z_of(m, t);
    let gt = g * t;
    let dn_dz =
        m.prefactor() * (-8.0 * gt * gt * entire_derivative(2, z) + 16.0 * gt * gt * gt * entire_derivative(3, z));
    dn_dz * (-2.0 * m.detuning() * t * t)
}

fn weight_slope_detuning(m: &EffectiveModel, t: f64) -> f64 {
    let g = m.coupling();
    let d = m.detuning();
    let z = z_of(m, t);
    let dh_dz = 0.5 * entire_derivative(0, z) - 2.0 * g * t * entire_derivative(1, z)
        + 0.5 * (d * d + 4.0 * g * g) * t * t * entire_derivative(2, z);
    dh_dz * (-2.0 * d * t * t) + d * t * t * entire(2, z)
}

/// `N_c(t)` in closed form. All phases, including the exceptional point,
/// go through the same expression.
pub fn photon_number_closed_form(m: &EffectiveModel, init: &InitialCondition, t: f64) -> Result<f64> {
    check_time(t)?;
    let (n1, n2) = init.occupations(m)?;
    let mut n = vacuum_photon_number(m, t);
    if n1 + n2 != 0.0 {
        n += m.prefactor() * (n1 + n2) * occupation_weight(m, t);
    }
    Ok(n)
}

/// Analytic `∂N_c/∂ω1` at fixed `ω2`.
pub fn photon_number_slope(
    m: &EffectiveModel,
    init: &InitialCondition,
    t: f64,
    occupation: OccupationDependence,
) -> Result<f64> {
    check_time(t)?;
    let (n1, n2) = init.occupations(m)?;
    let mut slope = vacuum_slope_detuning(m, t);
    if n1 + n2 != 0.0 {
        slope += m.prefactor() * (n1 + n2) * weight_slope_detuning(m, t);
    }
    if occupation == OccupationDependence::Tracked {
        let dn1 = init.occupation1_slope(m)?;
        if dn1 != 0.0 {
            slope += m.prefactor() * dn1 * occupation_weight(m, t);
        }
    }
    Ok(slope)
}
