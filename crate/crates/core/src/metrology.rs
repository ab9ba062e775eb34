//! Photon-counting estimation of `ω1`: variance, error propagation and the
//! Gaussian quantum Fisher information of the cavity mode.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    evolve_from, evolve_moments, photon_number, photon_number_slope, InitialCondition, MomentState,
    OccupationDependence,
};
use crate::error::{Error, Result};
use crate::model::EffectiveModel;

/// Below `RELIABLE_SLOPE · N_c` the slope is treated as zero.
pub const RELIABLE_SLOPE: f64 = 1e-14;

/// Cavity-mode moments obtained from the magnon moments through
/// `c ≈ −i (g/κ)(a + b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMoments {
    /// `<c† c>`.
    pub number: f64,
    /// `<c c>`.
    pub anomalous: Complex64,
    /// `<c>`.
    pub mean: Complex64,
}

impl CavityMoments {
    pub fn from_magnons(ms: &MomentState, prefactor: f64) -> Self {
        Self {
            number: photon_number(ms, prefactor),
            anomalous: -ms.sum_mode_anomalous() * prefactor,
            mean: Complex64::new(0.0, -prefactor.sqrt()) * ms.sum_mode_mean(),
        }
    }
}

/// `Var(c†c)` with the fourth moment factorised as
/// `<ABCD> ≈ <AB><CD> + <AD><BC> + <AC><BD> − 2<A><B><C><D>`.
///
/// Reduces to `N_c (1 + N_c)` whenever `<cc>` and `<c>` vanish, which holds
/// for every phase-covariant input.
pub fn photon_variance(ms: &MomentState, prefactor: f64) -> f64 {
    let c = CavityMoments::from_magnons(ms, prefactor);
    // A = c†, B = c, C = c†, D = c with <c c†> = N + 1
    let n = c.number;
    let second = n * n + n * (n + 1.0) + c.anomalous.norm_sqr() - 2.0 * c.mean.norm_sqr().powi(2);
    second - n * n
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivativeMethod {
    #[default]
    Analytic,
    /// Central differences at `step` and `step/2`, Richardson-combined.
    FiniteDifference { step: f64 },
}

/// `∂N_c/∂ω1` at fixed `ω2`.
pub fn dnc_domega1(
    m: &EffectiveModel,
    init: &InitialCondition,
    t: f64,
    method: DerivativeMethod,
    occupation: OccupationDependence,
) -> Result<f64> {
    match method {
        DerivativeMethod::Analytic => photon_number_slope(m, init, t, occupation),
        DerivativeMethod::FiniteDifference { step } => {
            if step.is_nan() || step <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "step",
                    reason: format!("finite-difference step must be positive, got {step}"),
                });
            }
            let frozen = MomentState::initial(m, init)?;
            let n_at = |w1: f64| -> Result<f64> {
                let shifted = m.with_omega1(w1);
                let start = match occupation {
                    OccupationDependence::Frozen => frozen,
                    OccupationDependence::Tracked => MomentState::initial(&shifted, init)?,
                };
                Ok(photon_number(&evolve_from(&shifted, &start, t)?, m.prefactor()))
            };
            let w1 = m.omega1();
            let central = |h: f64| -> Result<f64> { Ok((n_at(w1 + h)? - n_at(w1 - h)?) / (2.0 * h)) };
            let coarse = central(step)?;
            let fine = central(0.5 * step)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
    }
}

/// Whether a slope carries usable information about `ω1`.
pub fn slope_is_reliable(slope: f64, photon_number: f64) -> bool {
    slope != 0.0 && slope.abs() >= RELIABLE_SLOPE * photon_number.abs()
}

/// One evaluation of the photon-counting estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionResult {
    pub omega1: f64,
    pub detuning: f64,
    pub t: f64,
    pub photon_number: f64,
    pub variance: f64,
    pub slope: f64,
    /// `δ²ω1`; `+∞` when the slope is unreliable.
    pub delta2_omega1: f64,
    /// Vacuum input only.
    pub qfi: Option<f64>,
    /// `1/QFI`; vacuum input only.
    pub crb: Option<f64>,
    pub divergent: bool,
}

/// `δ²ω1 = Var(N_c) / |∂N_c/∂ω1|²`.
pub fn precision_error_propagation(
    m: &EffectiveModel,
    init: &InitialCondition,
    t: f64,
    occupation: OccupationDependence,
) -> Result<PrecisionResult> {
    let ms = evolve_moments(m, init, t)?;
    let n = photon_number(&ms, m.prefactor());
    let variance = photon_variance(&ms, m.prefactor());
    let slope = photon_number_slope(m, init, t, occupation)?;
    let divergent = !slope_is_reliable(slope, n);
    let delta2_omega1 = if divergent {
        f64::INFINITY
    } else {
        variance / (slope * slope)
    };
    let qfi = match init {
        InitialCondition::Vacuum => Some(reduced_qfi(n, slope)),
        _ => None,
    };
    Ok(PrecisionResult {
        omega1: m.omega1(),
        detuning: m.detuning(),
        t,
        photon_number: n,
        variance,
        slope,
        delta2_omega1,
        qfi,
        crb: qfi.map(|f| 1.0 / f),
        divergent,
    })
}

fn reduced_qfi(n: f64, slope: f64) -> f64 {
    if slope == 0.0 {
        return 0.0;
    }
    slope * slope / (n * n + n)
}

/// QFI of a single-mode Gaussian state with respect to one parameter.
///
/// `cov` is the quadrature covariance (vacuum = identity), `dcov` and
/// `dmean` its derivative and that of the quadrature means. With purity
/// `P = 1/√det C`:
///
/// ```text
/// F = Tr[(C⁻¹C')²] / (2(1 + P²)) + 2P'² / (1 − P⁴) + d'ᵀ C⁻¹ d'
/// ```
///
/// The purity term is dropped when the state is pure and stays pure.
pub fn gaussian_qfi_single_mode(cov: &Matrix2<f64>, dcov: &Matrix2<f64>, dmean: &Vector2<f64>) -> f64 {
    let inv = cov.try_inverse().expect("covariance of a physical state is invertible");
    let purity = 1.0 / cov.determinant().sqrt();
    let ratio = inv * dcov;
    let dpurity = -0.5 * purity * ratio.trace();
    let mixing = 1.0 - purity.powi(4);
    let purity_term = if dpurity == 0.0 {
        0.0
    } else {
        2.0 * dpurity * dpurity / mixing
    };
    (ratio * ratio).trace() / (2.0 * (1.0 + purity * purity)) + purity_term + dmean.dot(&(inv * dmean))
}

/// Both evaluations of the cavity QFI for vacuum input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiEvaluation {
    /// Single-mode Gaussian formula with `C = (1 + 2N_c) I` and null means.
    pub general: f64,
    /// `|∂N_c/∂ω1|² / (N_c² + N_c)`.
    pub reduced: f64,
}

/// Cavity QFI about `ω1`. Only the vacuum input has the `C = ηI` form the
/// reduced expression assumes.
pub fn qfi_gaussian(m: &EffectiveModel, init: &InitialCondition, t: f64) -> Result<QfiEvaluation> {
    if *init != InitialCondition::Vacuum {
        return Err(Error::UnsupportedInitialCondition(format!(
            "cavity QFI is derived for vacuum input, got {}",
            init.label()
        )));
    }
    let ms = evolve_moments(m, init, t)?;
    let n = photon_number(&ms, m.prefactor());
    let slope = photon_number_slope(m, init, t, OccupationDependence::Tracked)?;
    let eta = 1.0 + 2.0 * n;
    let general = if n == 0.0 && slope == 0.0 {
        0.0
    } else {
        gaussian_qfi_single_mode(
            &(Matrix2::identity() * eta),
            &(Matrix2::identity() * (2.0 * slope)),
            &Vector2::zeros(),
        )
    };
    Ok(QfiEvaluation {
        general,
        reduced: reduced_qfi(n, slope),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vacuum() -> InitialCondition {
        InitialCondition::Vacuum
    }

    #[test]
    fn variance_examples() {
        assert_eq!(photon_variance(&MomentState::zero(0.0), 0.01), 0.0);
        let mut s = MomentState::zero(1.0);
        s.normal[(0, 0)] = Complex64::new(100.0, 0.0);
        assert!((photon_variance(&s, 0.01) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn variance_with_coherent_part() {
        // coherent |α> in a: <d†d> = |α|², <dd> = α², <d> = α ⇒ Var = N.
        let alpha = Complex64::new(3.0, -2.0);
        let mut s = MomentState::zero(0.0);
        s.first[0] = alpha;
        s.normal[(0, 0)] = Complex64::new(alpha.norm_sqr(), 0.0);
        s.anomalous[(0, 0)] = alpha * alpha;
        let n = 0.04 * alpha.norm_sqr();
        // the cavity image of a coherent state with prefactor p is not
        // coherent; the factorisation gives N(N+1) + N² − 2N² = N
        assert!((photon_variance(&s, 0.04) - n).abs() < 1e-12);
    }

    #[test]
    fn slope_vanishes_without_coupling_and_at_symmetric_point() {
        let m = EffectiveModel::from_frequencies(3.0, 1.0, 0.0, 0.0);
        let s = dnc_domega1(
            &m,
            &vacuum(),
            2.0,
            DerivativeMethod::Analytic,
            OccupationDependence::Tracked,
        )
        .unwrap();
        assert_eq!(s, 0.0);
        let m = EffectiveModel::from_frequencies(1.0, 1.0, 1.0, 0.01);
        let s = dnc_domega1(
            &m,
            &vacuum(),
            2.0,
            DerivativeMethod::Analytic,
            OccupationDependence::Tracked,
        )
        .unwrap();
        assert_eq!(s, 0.0);
        let r = precision_error_propagation(&m, &vacuum(), 2.0, OccupationDependence::Tracked).unwrap();
        assert!(r.divergent && r.delta2_omega1.is_infinite());
    }

    #[test]
    fn analytic_matches_richardson_reference_point() {
        let m = EffectiveModel::from_frequencies(4.0, 1.0, 1.0, 0.01);
        let a = dnc_domega1(
            &m,
            &vacuum(),
            10.0,
            DerivativeMethod::Analytic,
            OccupationDependence::Tracked,
        )
        .unwrap();
        let f = dnc_domega1(
            &m,
            &vacuum(),
            10.0,
            DerivativeMethod::FiniteDifference { step: 1e-5 },
            OccupationDependence::Tracked,
        )
        .unwrap();
        assert!((a - f).abs() <= 1e-6 * a.abs(), "{a} vs {f}");
    }

    #[test]
    fn thermal_derivative_conventions() {
        let init = InitialCondition::Thermal { temperature: 1.0 };
        let m = EffectiveModel::from_frequencies(3.7, 1.0, 1.0, 0.01);
        for occ in [OccupationDependence::Tracked, OccupationDependence::Frozen] {
            let a = dnc_domega1(&m, &init, 4.0, DerivativeMethod::Analytic, occ).unwrap();
            let f = dnc_domega1(&m, &init, 4.0, DerivativeMethod::FiniteDifference { step: 1e-4 }, occ).unwrap();
            assert!((a - f).abs() <= 1e-6 * a.abs(), "{occ:?}: {a} vs {f}");
        }
        let tracked = dnc_domega1(
            &m,
            &init,
            4.0,
            DerivativeMethod::Analytic,
            OccupationDependence::Tracked,
        )
        .unwrap();
        let frozen = dnc_domega1(&m, &init, 4.0, DerivativeMethod::Analytic, OccupationDependence::Frozen).unwrap();
        assert!(tracked != frozen);
    }

    #[test]
    fn rejects_bad_step_and_non_vacuum_qfi() {
        let m = EffectiveModel::from_frequencies(4.0, 1.0, 1.0, 0.01);
        assert!(dnc_domega1(
            &m,
            &vacuum(),
            1.0,
            DerivativeMethod::FiniteDifference { step: 0.0 },
            OccupationDependence::Tracked
        )
        .is_err());
        assert!(matches!(
            qfi_gaussian(&m, &InitialCondition::Fock { a: 0, b: 1 }, 1.0),
            Err(Error::UnsupportedInitialCondition(_))
        ));
    }

    #[test]
    fn qfi_zero_at_start() {
        let m = EffectiveModel::from_frequencies(4.0, 1.0, 1.0, 0.01);
        let q = qfi_gaussian(&m, &vacuum(), 0.0).unwrap();
        assert_eq!(q.general, 0.0);
        assert_eq!(q.reduced, 0.0);
    }

    #[test]
    fn general_qfi_of_displaced_vacuum() {
        // pure coherent state with mean derivative d': F = |d'|²
        let f = gaussian_qfi_single_mode(&Matrix2::identity(), &Matrix2::zeros(), &Vector2::new(2.0, 0.0));
        assert!((f - 4.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn vacuum_variance_identity(delta in 0.0..4.0f64, t in 0.0..10.0f64) {
            let m = EffectiveModel::from_frequencies(1.0 + delta, 1.0, 1.0, 0.01);
            let ms = evolve_moments(&m, &vacuum(), t).unwrap();
            let n = photon_number(&ms, 0.01);
            let v = photon_variance(&ms, 0.01);
            prop_assert!((v - n * (1.0 + n)).abs() <= 1e-10 * v.max(1e-300));
        }

        #[test]
        fn cramer_rao_saturated(delta in 0.0..4.0f64, t in 0.01..10.0f64) {
            let m = EffectiveModel::from_frequencies(1.0 + delta, 1.0, 1.0, 0.01);
            let r = precision_error_propagation(&m, &vacuum(), t, OccupationDependence::Tracked).unwrap();
            prop_assume!(!r.divergent);
            let q = qfi_gaussian(&m, &vacuum(), t).unwrap();
            prop_assert!((r.delta2_omega1 * q.reduced - 1.0).abs() < 1e-10);
            prop_assert!((q.general / q.reduced - 1.0).abs() < 1e-10);
        }

        #[test]
        fn precision_scales_quadratically(
            delta in 0.1..4.0f64, t in 0.1..8.0f64, s in 0.01..100.0f64, temp in 0.1..2.0f64, thermal: bool,
        ) {
            let m = EffectiveModel::from_frequencies(1.0 + delta, 1.0, 1.0, 0.01);
            let (init, init_s) = if thermal {
                (InitialCondition::Thermal { temperature: temp }, InitialCondition::Thermal { temperature: temp * s })
            } else {
                (vacuum(), vacuum())
            };
            let a = precision_error_propagation(&m, &init, t, OccupationDependence::Tracked).unwrap();
            let b = precision_error_propagation(&m.scaled(s), &init_s, t / s, OccupationDependence::Tracked).unwrap();
            prop_assume!(!a.divergent);
            prop_assert!((b.delta2_omega1 / (a.delta2_omega1 * s * s) - 1.0).abs() < 1e-9);
        }
    }
}
