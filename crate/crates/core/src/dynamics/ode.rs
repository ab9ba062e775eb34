//! Adaptive Dormand–Prince 5(4) integrator for real ODE systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest admissible step relative to `max(1, |t|)`.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            min_step: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `y' = f(t, y)` from `t = 0` to `t_end`.
///
/// `after_step` is called with every accepted state and may project it (for
/// example back onto a symmetry manifold) or abort with an error.
pub fn integrate<F, P>(
    mut f: F,
    t_end: f64,
    y0: &[f64],
    ctrl: &StepControl,
    mut after_step: P,
) -> Result<(Vec<f64>, Stats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    P: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if t_end < 0.0 || !t_end.is_finite() {
        return Err(Error::NegativeTime(t_end));
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut stats = Stats::default();
    if t_end == 0.0 {
        return Ok((y, stats));
    }

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    let mut t = 0.0;
    f(t, &y, &mut k1);
    let mut h = initial_step(&y, &k1, t_end, ctrl);

    while t < t_end {
        if stats.accepted + stats.rejected >= ctrl.max_steps {
            return Err(Error::TooManySteps(ctrl.max_steps));
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h < ctrl.min_step * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, step: h });
        }

        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &tmp, &mut k6);
        for i in 0..n {
            y_new[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + h, &y_new, &mut k7);

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctrl.atol + ctrl.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            std::mem::swap(&mut y, &mut y_new);
            after_step(t, &mut y)?;
            // the hook may have moved the state, so no FSAL reuse of k7
            f(t, &y, &mut k1);
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= if err <= 1.0 { factor } else { factor.min(1.0) };
    }
    Ok((y, stats))
}

fn initial_step(y: &[f64], dy: &[f64], t_end: f64, ctrl: &StepControl) -> f64 {
    let norm = |v: &[f64]| {
        let s: f64 = v
            .iter()
            .zip(y)
            .map(|(a, b)| (a / (ctrl.atol + ctrl.rtol * b.abs())).powi(2))
            .sum();
        (s / v.len().max(1) as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(dy);
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(t_end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_hook(_: f64, _: &mut [f64]) -> Result<()> {
        Ok(())
    }

    #[test]
    fn exponential_decay() {
        let (y, stats) = integrate(|_, y, dy| dy[0] = -y[0], 3.0, &[1.0], &StepControl::default(), no_hook).unwrap();
        assert!((y[0] - (-3f64).exp()).abs() < 1e-11);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_long_run() {
        let (y, _) = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            20.0,
            &[1.0, 0.0],
            &StepControl::default(),
            no_hook,
        )
        .unwrap();
        assert!((y[0] - 20f64.cos()).abs() < 1e-8);
        assert!((y[1] + 20f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn zero_time_returns_input() {
        let (y, stats) = integrate(|_, _, dy| dy[0] = 1.0, 0.0, &[4.2], &StepControl::default(), no_hook).unwrap();
        assert_eq!(y, vec![4.2]);
        assert_eq!(stats.accepted, 0);
    }

    #[test]
    fn step_underflow_is_reported() {
        // y' = y² blows up at t = 1.
        let err = integrate(
            |_, y, dy| dy[0] = y[0] * y[0],
            2.0,
            &[1.0],
            &StepControl::default(),
            no_hook,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StepSizeUnderflow { .. } | Error::TooManySteps(_)));
    }

    #[test]
    fn hook_errors_abort() {
        let err = integrate(
            |_, _, dy| dy[0] = 1.0,
            1.0,
            &[0.0],
            &StepControl::default(),
            |_, _| Err(Error::Sweep("stop".into())),
        )
        .unwrap_err();
        assert_eq!(err, Error::Sweep("stop".into()));
    }
}
