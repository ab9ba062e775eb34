//! Photon-number variance by full Wick pairing over the two magnon modes.
//!
//! Works from `<v_i† v_j>` and `<v_i v_j>` only, so it shares nothing with
//! the cavity-level factorisation in the library beyond the moment state.
//! The 16-term expansion cancels badly in the broken phase, where `a` and `b`
//! are highly occupied but `a + b` is nearly empty, so every product and sum
//! is carried in double-double.

use magpt::MomentState;
use num_complex::Complex64;
use twofloat::TwoFloat;

#[derive(Clone, Copy)]
struct Dd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dd {
    fn zero() -> Self {
        Self::from(Complex64::new(0.0, 0.0))
    }

    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl From<Complex64> for Dd {
    fn from(z: Complex64) -> Self {
        Self {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }
}

fn normal(ms: &MomentState, i: usize, j: usize) -> Dd {
    ms.normal[(i, j)].into()
}

fn anomalous(ms: &MomentState, i: usize, j: usize) -> Dd {
    ms.anomalous[(i, j)].into()
}

/// `<v_i† v_j†>`.
fn creation_pair(ms: &MomentState, i: usize, j: usize) -> Dd {
    ms.anomalous[(j, i)].conj().into()
}

/// `<v_i† v_j† v_k v_l>` for a zero-mean Gaussian state.
fn normal_ordered_fourth(ms: &MomentState, i: usize, j: usize, k: usize, l: usize) -> Dd {
    creation_pair(ms, i, j)
        .mul(anomalous(ms, k, l))
        .add(normal(ms, i, k).mul(normal(ms, j, l)))
        .add(normal(ms, i, l).mul(normal(ms, j, k)))
}

/// `Var(c†c)` with `c = −i√p (a + b)` plus vacuum noise:
/// `<c†c†cc> = p² Σ_ijkl <v_i† v_j† v_k v_l>` and `<(c†c)²> = <c†c†cc> + <c†c>`.
pub fn photon_variance_full_pairing(ms: &MomentState, prefactor: f64) -> f64 {
    assert!(
        ms.first.iter().all(|m| m.norm() == 0.0),
        "full-pairing oracle covers zero-mean states only"
    );
    let mut fourth = Dd::zero();
    let mut second = Dd::zero();
    for i in 0..2 {
        for j in 0..2 {
            second = second.add(normal(ms, i, j));
            for k in 0..2 {
                for l in 0..2 {
                    fourth = fourth.add(normal_ordered_fourth(ms, i, j, k, l));
                }
            }
        }
    }
    let p = TwoFloat::from(prefactor);
    let n = p * second.re;
    f64::from(p * p * fourth.re + n - n * n)
}
