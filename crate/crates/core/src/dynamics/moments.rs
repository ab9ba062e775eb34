use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::noise::NoiseCorrelators;
use super::propagator::propagator;
use crate::error::{Error, Result};
use crate::model::EffectiveModel;
use crate::special::entire;

/// Initial state of the two magnon modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    Vacuum,
    /// Product thermal state; temperature in frequency units (`k_B = 1`).
    Thermal {
        temperature: f64,
    },
    /// Number states `|n_a, n_b>`, tracked at moment level only.
    Fock {
        a: u32,
        b: u32,
    },
}

impl InitialCondition {
    /// Initial mean occupations `(n̄1, n̄2)`.
    pub fn occupations(&self, m: &EffectiveModel) -> Result<(f64, f64)> {
        match *self {
            InitialCondition::Vacuum => Ok((0.0, 0.0)),
            InitialCondition::Fock { a, b } => Ok((a as f64, b as f64)),
            InitialCondition::Thermal { temperature } => Ok((
                bose_occupation(m.omega1(), temperature)?,
                bose_occupation(m.omega2(), temperature)?,
            )),
        }
    }

    /// `dn̄1/dω1` (zero for anything but a thermal state).
    pub fn occupation1_slope(&self, m: &EffectiveModel) -> Result<f64> {
        match *self {
            InitialCondition::Thermal { temperature } if temperature > 0.0 => {
                let n = bose_occupation(m.omega1(), temperature)?;
                Ok(-n * (n + 1.0) / temperature)
            }
            _ => Ok(0.0),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            InitialCondition::Vacuum => "vacuum".into(),
            InitialCondition::Thermal { temperature } => format!("thermal(T={temperature})"),
            InitialCondition::Fock { a, b } => format!("fock({a},{b})"),
        }
    }
}

/// `1 / (exp(ω/T) − 1)`; zero at `T = 0`.
pub fn bose_occupation(frequency: f64, temperature: f64) -> Result<f64> {
    if temperature < 0.0 || !temperature.is_finite() {
        return Err(Error::ThermalOccupation { frequency, temperature });
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    if frequency <= 0.0 {
        return Err(Error::ThermalOccupation { frequency, temperature });
    }
    Ok(1.0 / (frequency / temperature).exp_m1())
}

/// First and second moments of the magnon pair `v = (a, b)`.
///
/// `normal[(i, j)] = <v_i† v_j>` and `anomalous[(i, j)] = <v_i v_j>`; both
/// are raw (not mean-subtracted) expectations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub t: f64,
    pub first: Vector2<Complex64>,
    pub normal: Matrix2<Complex64>,
    pub anomalous: Matrix2<Complex64>,
}

impl MomentState {
    pub fn zero(t: f64) -> Self {
        Self {
            t,
            first: Vector2::zeros(),
            normal: Matrix2::zeros(),
            anomalous: Matrix2::zeros(),
        }
    }

    pub fn initial(m: &EffectiveModel, init: &InitialCondition) -> Result<Self> {
        let (n1, n2) = init.occupations(m)?;
        let mut s = Self::zero(0.0);
        s.normal[(0, 0)] = Complex64::new(n1, 0.0);
        s.normal[(1, 1)] = Complex64::new(n2, 0.0);
        Ok(s)
    }

    /// Largest deviation from `N = N†`, `M = Mᵀ`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = (self.normal - self.normal.adjoint()).camax();
        let m = (self.anomalous - self.anomalous.transpose()).camax();
        n.max(m)
    }

    /// Project onto Hermitian `N` and symmetric `M`.
    pub fn symmetrized(mut self) -> Self {
        let half = Complex64::new(0.5, 0.0);
        self.normal = (self.normal + self.normal.adjoint()) * half;
        self.anomalous = (self.anomalous + self.anomalous.transpose()) * half;
        self
    }

    /// `<d† d>` for `d = a + b`.
    pub fn sum_mode_number(&self) -> f64 {
        (self.normal[(0, 0)] + self.normal[(1, 1)] + self.normal[(0, 1)] + self.normal[(1, 0)]).re
    }

    /// `<d d>` for `d = a + b`.
    pub fn sum_mode_anomalous(&self) -> Complex64 {
        self.anomalous[(0, 0)] + self.anomalous[(1, 1)] + self.anomalous[(0, 1)] + self.anomalous[(1, 0)]
    }

    /// `<d>` for `d = a + b`.
    pub fn sum_mode_mean(&self) -> Complex64 {
        self.first[0] + self.first[1]
    }

    /// Largest relative difference between two states, entrywise over all
    /// moments, normalised by the largest entry of `reference` (with an
    /// absolute floor for states that are identically zero).
    pub fn relative_difference(&self, reference: &Self) -> f64 {
        let diff = (self.first - reference.first)
            .camax()
            .max((self.normal - reference.normal).camax())
            .max((self.anomalous - reference.anomalous).camax());
        let scale = reference
            .first
            .camax()
            .max(reference.normal.camax())
            .max(reference.anomalous.camax())
            .max(1e-12);
        diff / scale
    }
}

/// Analytic moment evolution under the PT-symmetric model.
///
/// Homogeneous part `N → W̄ N Wᵀ`, `M → W M Wᵀ`, `m → W m`. The noise part
/// is `∫₀ᵗ W̄(s) D W(s)ᵀ ds` with `D = 2γ·I`, whose entries reduce to the
/// three integrals of `cosh²`, `cosh·sinh` and `sinh²` of `λs/2`; each has an
/// antiderivative expressible through `E_1..E_3` at `λ²t²`.
pub fn evolve_moments(m: &EffectiveModel, init: &InitialCondition, t: f64) -> Result<MomentState> {
    let start = MomentState::initial(m, init)?;
    evolve_from(m, &start, t)
}

/// As [`evolve_moments`] but from an arbitrary moment state at `t = 0`.
pub fn evolve_from(m: &EffectiveModel, start: &MomentState, t: f64) -> Result<MomentState> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    if !m.is_pt() {
        return Err(Error::NotPtSymmetric {
            gain: m.gain(),
            coupling: m.coupling(),
        });
    }
    let w = propagator(m, t).matrix;
    let w_bar = w.map(|z| z.conj());

    let first = w * start.first;
    let mut normal = w_bar * start.normal * w.transpose();
    let anomalous = w * start.anomalous * w.transpose();

    let diffusion = NoiseCorrelators::for_model(m).normal()[(0, 0)].re;
    let (gamma, delta) = (m.coupling(), m.detuning());
    let z = m.growth_sq() * t * t;
    let int_cc = 0.5 * t * (1.0 + entire(1, z));
    let int_cs = 0.5 * t * t * entire(2, z);
    let int_ss = 0.5 * t * t * t * entire(3, z);
    // W̄(s) Wᵀ(s) = c² I + cσ (Q̄ + Q) + σ² Q̄Q, Q = [[−iΔ, −2Γ], [−2Γ, iΔ]]
    let diag = int_cc + (delta * delta + 4.0 * gamma * gamma) * int_ss;
    let off = Complex64::new(-4.0 * gamma * int_cs, -4.0 * gamma * delta * int_ss);
    let noise = Matrix2::new(Complex64::new(diag, 0.0), off, off.conj(), Complex64::new(diag, 0.0));
    normal += noise * Complex64::new(diffusion, 0.0);

    Ok(MomentState {
        t,
        first,
        normal,
        anomalous,
    }
    .symmetrized())
}

/// Cavity occupation `N_c ≈ (g²/κ²) <(a† + b†)(a + b)>`.
pub fn photon_number(ms: &MomentState, prefactor: f64) -> f64 {
    prefactor * ms.sum_mode_number()
}
