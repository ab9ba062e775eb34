//! Two-magnon entanglement from the Gaussian moments.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{evolve_moments, InitialCondition, MomentState};
use crate::error::{Error, Result};
use crate::model::EffectiveModel;
use crate::special::entire;

/// Smallest eigenvalue of `V + iΩ` still accepted as physical.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Relative slack on `Δ̃² − 4 det V` before a negative value is an error.
pub const DISCRIMINANT_TOLERANCE: f64 = 1e-10;

/// Symmetrised covariance of `U = (x_a, p_a, x_b, p_b)` with `x = v + v†`
/// and `p = −i(v − v†)`; the vacuum maps to the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureCovariance {
    pub v: Matrix4<f64>,
}

// u_k = α_k v_mode + β_k v_mode†
const QUADRATURES: [(usize, Complex64, Complex64); 4] = [
    (0, Complex64 { re: 1.0, im: 0.0 }, Complex64 { re: 1.0, im: 0.0 }),
    (0, Complex64 { re: 0.0, im: -1.0 }, Complex64 { re: 0.0, im: 1.0 }),
    (1, Complex64 { re: 1.0, im: 0.0 }, Complex64 { re: 1.0, im: 0.0 }),
    (1, Complex64 { re: 0.0, im: -1.0 }, Complex64 { re: 0.0, im: 1.0 }),
];

impl QuadratureCovariance {
    pub fn identity() -> Self {
        Self { v: Matrix4::identity() }
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.v.fixed_view::<2, 2>(0, 0).into_owned()
    }
    pub fn block_b(&self) -> Matrix2<f64> {
        self.v.fixed_view::<2, 2>(2, 2).into_owned()
    }
    pub fn block_c(&self) -> Matrix2<f64> {
        self.v.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Smallest eigenvalue of `V + iΩ`.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let sym = symplectic_form();
        let h = Matrix4::from_fn(|i, j| Complex64::new(self.v[(i, j)], sym[(i, j)]));
        h.symmetric_eigenvalues().min()
    }

    /// `V + iΩ ⪰ 0` up to [`PHYSICALITY_TOLERANCE`].
    pub fn is_physical(&self) -> bool {
        self.min_uncertainty_eigenvalue() >= -PHYSICALITY_TOLERANCE
    }

    /// Apply local phase rotations `θa`, `θb` to the two modes.
    pub fn rotated(&self, theta_a: f64, theta_b: f64) -> Self {
        let r = |th: f64| Matrix2::new(th.cos(), -th.sin(), th.sin(), th.cos());
        let mut s = Matrix4::zeros();
        s.fixed_view_mut::<2, 2>(0, 0).copy_from(&r(theta_a));
        s.fixed_view_mut::<2, 2>(2, 2).copy_from(&r(theta_b));
        Self {
            v: s * self.v * s.transpose(),
        }
    }
}

/// `V_kl = ½<U_k U_l + U_l U_k> − <U_k><U_l>`.
pub fn quadrature_covariance(ms: &MomentState) -> QuadratureCovariance {
    let n = &ms.normal;
    let m = &ms.anomalous;
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mean = |k: usize| {
        let (i, a, b) = QUADRATURES[k];
        (a * ms.first[i] + b * ms.first[i].conj()).re
    };
    let v = Matrix4::from_fn(|k, l| {
        let (i, ak, bk) = QUADRATURES[k];
        let (j, al, bl) = QUADRATURES[l];
        // <v_i v_j†> = δ_ij + <v_j† v_i>, <v_i† v_j†> = conj <v_j v_i>
        let raw = ak * al * m[(i, j)]
            + ak * bl * (n[(j, i)] + delta(i, j))
            + bk * al * n[(i, j)]
            + bk * bl * m[(j, i)].conj();
        raw.re - mean(k) * mean(l)
    });
    QuadratureCovariance {
        v: 0.5 * (v + v.transpose()),
    }
}

/// `Δ̃ = det A + det B − 2 det C`.
pub fn symplectic_invariant(cov: &QuadratureCovariance) -> f64 {
    cov.block_a().determinant() + cov.block_b().determinant() - 2.0 * cov.block_c().determinant()
}

/// `ν⁻ = √((Δ̃ − √(Δ̃² − 4 det V)) / 2)` evaluated literally.
///
/// Loses about half the digits when the two symplectic eigenvalues are close
/// (the evolved vacuum makes them exactly equal); [`nu_minus`] uses it only
/// to screen the regime.
pub fn nu_minus_invariant(cov: &QuadratureCovariance) -> Result<f64> {
    let s = symplectic_invariant(cov);
    let discriminant = checked_discriminant(cov)?;
    Ok((0.5 * (s - discriminant.sqrt())).max(0.0).sqrt())
}

fn checked_discriminant(cov: &QuadratureCovariance) -> Result<f64> {
    let s = symplectic_invariant(cov);
    let discriminant = s * s - 4.0 * cov.v.determinant();
    if discriminant >= 0.0 {
        Ok(discriminant)
    } else if discriminant >= -DISCRIMINANT_TOLERANCE * s * s {
        Ok(0.0)
    } else {
        Err(Error::InvalidRegime { discriminant })
    }
}

/// Smallest symplectic eigenvalue of the partially transposed covariance.
///
/// Same quantity as [`nu_minus_invariant`], computed as the smallest positive
/// eigenvalue of the Hermitian `Ṽ^½ (iΩ) Ṽ^½`, which stays accurate at
/// degeneracy. Falls back to the invariant form if `Ṽ` is not positive
/// definite.
pub fn nu_minus(cov: &QuadratureCovariance) -> Result<f64> {
    checked_discriminant(cov)?;
    let mut pt = cov.v;
    for k in 0..4 {
        pt[(3, k)] = -pt[(3, k)];
        pt[(k, 3)] = -pt[(k, 3)];
    }
    let eig = pt.symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return nu_minus_invariant(cov);
    }
    let root =
        eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let omega = symplectic_form();
    let h = Matrix4::from_fn(|i, j| {
        let mut acc = 0.0;
        for k in 0..4 {
            for l in 0..4 {
                acc += root[(i, k)] * omega[(k, l)] * root[(l, j)];
            }
        }
        Complex64::new(0.0, acc)
    });
    let nu = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    Ok(nu)
}

fn symplectic_form() -> Matrix4<f64> {
    let mut sym = Matrix4::zeros();
    sym[(0, 1)] = 1.0;
    sym[(1, 0)] = -1.0;
    sym[(2, 3)] = 1.0;
    sym[(3, 2)] = -1.0;
    sym
}

/// `E_N = max(0, −ln ν⁻)`.
pub fn log_negativity(cov: &QuadratureCovariance) -> Result<f64> {
    Ok(log_negativity_of(nu_minus(cov)?))
}

pub fn log_negativity_of(nu: f64) -> f64 {
    (-nu.ln()).max(0.0)
}

/// Side-by-side evaluation of the literal vacuum expression
/// `(4ΓtΔ²/Λ² − 16Γ³ sin Λt/Λ³ + 1)² − 32Γ⁴(1 − cos Λt)²/Λ⁴` and the direct
/// symplectic eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuMinusComparison {
    pub t: f64,
    pub direct: f64,
    pub direct_sq: f64,
    pub printed: f64,
    /// `printed − ν⁻²`.
    pub difference: f64,
    /// `printed / ν⁻²`.
    pub ratio: f64,
    /// `sign(printed − 1) == sign(ν⁻² − 1)`.
    pub sign_agrees: bool,
}

/// The literal expression rewritten with `E_n(λ²t²)` so it holds in every
/// phase: `(1 + 4Γt + 16Γ³t³E_3)² − 32Γ⁴t⁴E_2²`.
pub fn printed_nu_minus_expression(m: &EffectiveModel, t: f64) -> f64 {
    let g = m.coupling();
    let z = m.growth_sq() * t * t;
    let gt = g * t;
    let first = 1.0 + 4.0 * gt + 16.0 * gt.powi(3) * entire(3, z);
    let second = 32.0 * gt.powi(4) * entire(2, z).powi(2);
    first * first - second
}

pub fn nu_minus_closed_form_check(m: &EffectiveModel, t: f64) -> Result<NuMinusComparison> {
    let ms = evolve_moments(m, &InitialCondition::Vacuum, t)?;
    let direct = nu_minus(&quadrature_covariance(&ms))?;
    let direct_sq = direct * direct;
    let printed = printed_nu_minus_expression(m, t);
    let sign = |x: f64| {
        if x.abs() <= 1e-12 {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    Ok(NuMinusComparison {
        t,
        direct,
        direct_sq,
        printed,
        difference: printed - direct_sq,
        ratio: printed / direct_sq,
        sign_agrees: sign(printed - 1.0) == sign(direct_sq - 1.0),
    })
}

/// Hillery–Zubairy second-moment witness `|<ab>|² − <a†a><b†b>`; positive
/// values certify entanglement.
pub fn hz_witness(ms: &MomentState) -> f64 {
    ms.anomalous[(0, 1)].norm_sqr() - ms.normal[(0, 0)].re * ms.normal[(1, 1)].re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementRow {
    pub detuning: f64,
    pub t: f64,
    pub nu_minus: f64,
    pub log_negativity: f64,
    pub hz_witness: f64,
    pub physical: bool,
}

/// Evolve `init` and evaluate every entanglement figure at each time.
pub fn entanglement_series(m: &EffectiveModel, init: &InitialCondition, times: &[f64]) -> Result<Vec<EntanglementRow>> {
    times
        .iter()
        .map(|&t| {
            let ms = evolve_moments(m, init, t)?;
            let cov = quadrature_covariance(&ms);
            let nu = nu_minus(&cov)?;
            Ok(EntanglementRow {
                detuning: m.detuning(),
                t,
                nu_minus: nu,
                log_negativity: log_negativity_of(nu),
                hz_witness: hz_witness(&ms),
                physical: cov.is_physical(),
            })
        })
        .collect()
}
