use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::model::EffectiveModel;
use crate::special::entire;

/// `W(t) = exp(−i H_PT t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub t: f64,
    pub matrix: Matrix2<Complex64>,
}

impl Propagator {
    pub fn w11(&self) -> Complex64 {
        self.matrix[(0, 0)]
    }
    pub fn w12(&self) -> Complex64 {
        self.matrix[(0, 1)]
    }
    pub fn w21(&self) -> Complex64 {
        self.matrix[(1, 0)]
    }
    pub fn w22(&self) -> Complex64 {
        self.matrix[(1, 1)]
    }
    pub fn determinant(&self) -> Complex64 {
        self.w11() * self.w22() - self.w12() * self.w21()
    }
}

/// Closed-form propagator.
///
/// `W = e^{−iΩt/2} [cosh(λt/2)·I + sinh(λt/2)/λ · Q]` with
/// `Q = [[−iΔ, −2Γ], [−2Γ, iΔ]]`; the two scalar factors are `E_0` and
/// `(t/2)·E_1` evaluated at `λ²t²/4`, real for every phase.
pub fn propagator(m: &EffectiveModel, t: f64) -> Propagator {
    assert!(t >= 0.0, "propagator requires t >= 0");
    let z = m.growth_sq() * t * t / 4.0;
    let c = entire(0, z);
    let s = 0.5 * t * entire(1, z);
    let phase = Complex64::from_polar(1.0, -0.5 * m.sum_frequency() * t);
    let delta = m.detuning();
    let off = Complex64::new(-2.0 * m.coupling() * s, 0.0);
    let matrix = Matrix2::new(Complex64::new(c, -delta * s), off, off, Complex64::new(c, delta * s)) * phase;
    Propagator { t, matrix }
}
