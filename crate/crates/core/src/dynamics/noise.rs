use nalgebra::{Matrix2, Matrix2x3};
use num_complex::Complex64;

use crate::model::EffectiveModel;

/// Delta-correlated input noise of the reduced model.
///
/// Each effective channel `F_k ∈ {A_in, B_in}` is a linear combination of the
/// vacuum bath operators `x_j ∈ {a_in, b_in, c_in}`:
/// `F_k = Σ_j α_kj x_j + β_kj x_j†`. With `<x_j x_l†> = δ_jl` and all other
/// pair expectations zero, every pair correlator of the `F_k` follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCorrelators {
    annihilation: Matrix2x3<Complex64>,
    creation: Matrix2x3<Complex64>,
}

impl NoiseCorrelators {
    /// `A_in = √(2γ) a_in† + i√(2Γ) c_in`, `B_in = √(2γ) b_in† + i√(2Γ) c_in`.
    pub fn new(gain: f64, coupling: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let cav = Complex64::new(0.0, (2.0 * coupling).sqrt());
        let mag = Complex64::new((2.0 * gain).sqrt(), 0.0);
        Self {
            annihilation: Matrix2x3::new(zero, zero, cav, zero, zero, cav),
            creation: Matrix2x3::new(mag, zero, zero, zero, mag, zero),
        }
    }

    pub fn for_model(m: &EffectiveModel) -> Self {
        Self::new(m.gain(), m.coupling())
    }

    /// `D_kl` in `<F_k†(t) F_l(t')> = D_kl δ(t − t')`.
    pub fn normal(&self) -> Matrix2<Complex64> {
        // Only the x_j x_j† ordering survives: x_j from F_k† (coefficient
        // conj β_kj), x_j† from F_l (coefficient β_lj).
        self.creation.conjugate() * self.creation.transpose()
    }

    /// `<F_k(t) F_l†(t')>` coefficients.
    pub fn antinormal(&self) -> Matrix2<Complex64> {
        self.annihilation * self.annihilation.adjoint()
    }

    /// `<F_k(t) F_l(t')>` coefficients.
    pub fn anomalous(&self) -> Matrix2<Complex64> {
        self.annihilation * self.creation.transpose()
    }
}
