//! Brute-force moment ODEs used to validate the closed forms.
//!
//! For linear Langevin dynamics `v̇ = K v + ξ` with white noise
//! `<ξ_k†(t) ξ_l(t')> = D_kl δ(t − t')` and `<ξ_k(t) ξ_l(t')> = A_kl δ(t − t')`,
//! the moments obey
//!
//! ```text
//! d<v>/dt  = K <v>
//! dN/dt    = K̄ N + N Kᵀ + D        N_ij = <v_i† v_j>
//! dM/dt    = K M + M Kᵀ + A        M_ij = <v_i v_j>
//! ```
//!
//! Nothing here touches the analytic propagator.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector2};
use num_complex::Complex64;

use super::moments::{InitialCondition, MomentState};
use super::noise::NoiseCorrelators;
use super::ode::{integrate, StepControl};
use crate::error::{Error, Result};
use crate::model::{EffectiveModel, PhysicalParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative symmetry defect tolerated before an integration is aborted.
const SYMMETRY_GUARD: f64 = 1e-8;

struct LinearMoments {
    drift: DMatrix<Complex64>,
    normal_diffusion: DMatrix<Complex64>,
    anomalous_diffusion: DMatrix<Complex64>,
}

struct Moments {
    first: DVector<Complex64>,
    normal: DMatrix<Complex64>,
    anomalous: DMatrix<Complex64>,
}

impl Moments {
    fn pack(&self) -> Vec<f64> {
        self.first
            .iter()
            .chain(self.normal.transpose().iter())
            .chain(self.anomalous.transpose().iter())
            .flat_map(|z| [z.re, z.im])
            .collect()
    }

    fn unpack(n: usize, y: &[f64]) -> Self {
        let c = |k: usize| Complex64::new(y[2 * k], y[2 * k + 1]);
        let first = DVector::from_fn(n, |i, _| c(i));
        let normal = DMatrix::from_fn(n, n, |i, j| c(n + i * n + j));
        let anomalous = DMatrix::from_fn(n, n, |i, j| c(n + n * n + i * n + j));
        Self {
            first,
            normal,
            anomalous,
        }
    }

    fn symmetry_defect(&self) -> f64 {
        let scale = self.normal.camax().max(self.anomalous.camax()).max(1.0);
        let n = (&self.normal - self.normal.adjoint()).camax();
        let m = (&self.anomalous - self.anomalous.transpose()).camax();
        n.max(m) / scale
    }

    fn symmetrize(&mut self) {
        let half = Complex64::new(0.5, 0.0);
        self.normal = (&self.normal + self.normal.adjoint()) * half;
        self.anomalous = (&self.anomalous + self.anomalous.transpose()) * half;
    }
}

impl LinearMoments {
    fn integrate(&self, start: &Moments, t: f64, ctrl: &StepControl) -> Result<Moments> {
        let n = self.drift.nrows();
        let k = &self.drift;
        let k_bar = k.map(|z| z.conj());
        let k_t = k.transpose();
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            let s = Moments::unpack(n, y);
            let d = Moments {
                first: k * &s.first,
                normal: &k_bar * &s.normal + &s.normal * &k_t + &self.normal_diffusion,
                anomalous: k * &s.anomalous + &s.anomalous * &k_t + &self.anomalous_diffusion,
            };
            dy.copy_from_slice(&d.pack());
        };
        let hook = |_t: f64, y: &mut [f64]| {
            let mut s = Moments::unpack(n, y);
            let defect = s.symmetry_defect();
            if defect > SYMMETRY_GUARD {
                return Err(Error::SymmetryViolation(defect));
            }
            s.symmetrize();
            y.copy_from_slice(&s.pack());
            Ok(())
        };
        let (y, _) = integrate(rhs, t, &start.pack(), ctrl, hook)?;
        Ok(Moments::unpack(n, &y))
    }
}

fn to_state(t: f64, m: &Moments) -> MomentState {
    MomentState {
        t,
        first: Vector2::new(m.first[0], m.first[1]),
        normal: Matrix2::from_fn(|i, j| m.normal[(i, j)]),
        anomalous: Matrix2::from_fn(|i, j| m.anomalous[(i, j)]),
    }
}

fn from_state(s: &MomentState, extra_modes: usize) -> Moments {
    let n = 2 + extra_modes;
    let mut first = DVector::zeros(n);
    let mut normal = DMatrix::zeros(n, n);
    let mut anomalous = DMatrix::zeros(n, n);
    for i in 0..2 {
        first[i] = s.first[i];
        for j in 0..2 {
            normal[(i, j)] = s.normal[(i, j)];
            anomalous[(i, j)] = s.anomalous[(i, j)];
        }
    }
    Moments {
        first,
        normal,
        anomalous,
    }
}

/// Integrate the moment equations of the reduced model
/// `i d(a, b)ᵀ/dt = H_eff (a, b)ᵀ − i (A_in, B_in)ᵀ` for general gain.
pub fn oracle_integrate_effective(
    m: &EffectiveModel,
    init: &InitialCondition,
    t: f64,
    ctrl: &StepControl,
) -> Result<MomentState> {
    let start = MomentState::initial(m, init)?;
    oracle_integrate_effective_from(m, &start, t, ctrl)
}

pub fn oracle_integrate_effective_from(
    m: &EffectiveModel,
    start: &MomentState,
    t: f64,
    ctrl: &StepControl,
) -> Result<MomentState> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let net = m.gain() - m.coupling();
    let h_eff = Matrix2::new(
        Complex64::new(m.omega1(), net),
        -I * m.coupling(),
        -I * m.coupling(),
        Complex64::new(m.omega2(), net),
    );
    // v̇ = −i H_eff v − F, so the noise enters with a sign that cancels in
    // every pair correlator.
    let drift = h_eff * (-I);
    let noise = NoiseCorrelators::for_model(m);
    let sys = LinearMoments {
        drift: DMatrix::from_fn(2, 2, |i, j| drift[(i, j)]),
        normal_diffusion: DMatrix::from_fn(2, 2, |i, j| noise.normal()[(i, j)]),
        anomalous_diffusion: DMatrix::from_fn(2, 2, |i, j| noise.anomalous()[(i, j)]),
    };
    let out = sys.integrate(&from_state(start, 0), t, ctrl)?;
    Ok(to_state(t, &out))
}

/// Three-mode moments including the cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct FullMomentState {
    pub magnons: MomentState,
    pub cavity_mean: Complex64,
    /// `<c† c>`.
    pub cavity_number: f64,
    /// Full `<v_i† v_j>` over `(a, b, c)`.
    pub normal: Matrix3<Complex64>,
    /// Full `<v_i v_j>` over `(a, b, c)`.
    pub anomalous: Matrix3<Complex64>,
}

/// Integrate the moment equations of the full magnon–cavity–magnon Langevin
/// equations with vacuum noise on every port. The cavity starts in vacuum.
pub fn oracle_integrate_full(
    p: &PhysicalParams,
    init: &InitialCondition,
    t: f64,
    ctrl: &StepControl,
) -> Result<FullMomentState> {
    p.validate()?;
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let frame = EffectiveModel::from_frequencies(p.omega1, p.omega2, 0.0, 0.0);
    let start = MomentState::initial(&frame, init)?;

    let z = Complex64::new(0.0, 0.0);
    let drift = Matrix3::new(
        Complex64::new(p.gamma1, -p.omega1),
        z,
        -I * p.g13,
        z,
        Complex64::new(p.gamma2, -p.omega2),
        -I * p.g23,
        -I * p.g13,
        -I * p.g23,
        Complex64::new(-p.kappa, -p.omega3),
    );
    // ξ = (−√(2γ1) a_in†, −√(2γ2) b_in†, √(2κ) c_in) over baths (a_in, b_in, c_in)
    let annihilation = Matrix3::from_diagonal(&nalgebra::Vector3::new(
        z,
        z,
        Complex64::new((2.0 * p.kappa).sqrt(), 0.0),
    ));
    let creation = Matrix3::from_diagonal(&nalgebra::Vector3::new(
        Complex64::new(-(2.0 * p.gamma1).sqrt(), 0.0),
        Complex64::new(-(2.0 * p.gamma2).sqrt(), 0.0),
        z,
    ));
    let normal_diffusion = creation.map(|c| c.conj()) * creation.transpose();
    let anomalous_diffusion = annihilation * creation.transpose();

    let sys = LinearMoments {
        drift: DMatrix::from_fn(3, 3, |i, j| drift[(i, j)]),
        normal_diffusion: DMatrix::from_fn(3, 3, |i, j| normal_diffusion[(i, j)]),
        anomalous_diffusion: DMatrix::from_fn(3, 3, |i, j| anomalous_diffusion[(i, j)]),
    };
    let out = sys.integrate(&from_state(&start, 1), t, ctrl)?;
    Ok(FullMomentState {
        magnons: to_state(t, &out),
        cavity_mean: out.first[2],
        cavity_number: out.normal[(2, 2)].re,
        normal: Matrix3::from_fn(|i, j| out.normal[(i, j)]),
        anomalous: Matrix3::from_fn(|i, j| out.anomalous[(i, j)]),
    })
}
