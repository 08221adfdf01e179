//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4)) on a
//! flat `f64` state vector, with optional exact stops at requested sample
//! times.

/// Integration failure diagnostics.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("tolerance not met within the step budget ({max_steps} steps, reached t = {t:.6e})")]
    ToleranceNotMet { t: f64, max_steps: usize },
}

/// Step-count bookkeeping for a finished integration.
#[derive(Debug, Clone, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

pub struct Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step size; keeps the controller from striding over
    /// whole oscillation periods where the error estimate can alias.
    pub max_step: f64,
    pub max_steps: usize,
}

// Dormand–Prince coefficients.
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

// Error weights: 5th-order minus embedded 4th-order solution.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t_end`, invoking `observe`
/// with the state at every time listed in `sample_times` (which must be
/// strictly increasing and within `(t0, t_end]`). Steps land exactly on the
/// sample times, so no interpolation error enters the observations.
pub fn integrate<F, O>(
    mut rhs: F,
    t0: f64,
    t_end: f64,
    y0: &[f64],
    opts: &Options,
    sample_times: &[f64],
    mut observe: O,
) -> Result<(Vec<f64>, StepStats), OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    let n = y0.len();
    let span = t_end - t0;
    assert!(span > 0.0, "integration span must be positive");

    let mut y = y0.to_vec();
    let mut y_new = vec![0.0; n];
    let mut y_stage = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];

    let mut stats = StepStats::default();
    let mut t = t0;
    let mut h = opts.max_step.min(span);
    let mut next_sample = 0usize;

    rhs(t, &y, &mut k1);
    stats.rhs_evals += 1;

    while t < t_end {
        // Clip the step to the next sample time and the end point.
        let mut target: f64 = t_end;
        if next_sample < sample_times.len() {
            target = target.min(sample_times[next_sample]);
        }
        if h > target - t {
            h = target - t;
        }
        if h <= span * 1e-15 {
            // Squeezed against a stop point; treat as landing there.
            h = target - t;
            if h <= 0.0 {
                return Err(OdeError::StepSizeUnderflow { t, h });
            }
        }

        for i in 0..n {
            y_stage[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + C2 * h, &y_stage, &mut k2);
        for i in 0..n {
            y_stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * h, &y_stage, &mut k3);
        for i in 0..n {
            y_stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * h, &y_stage, &mut k4);
        for i in 0..n {
            y_stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * h, &y_stage, &mut k5);
        for i in 0..n {
            y_stage[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, &y_stage, &mut k6);
        for i in 0..n {
            y_new[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        rhs(t + h, &y_new, &mut k7);
        stats.rhs_evals += 6;

        // Weighted RMS error of the embedded pair.
        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            let r = e / scale;
            err_sq += r * r;
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7); // FSAL
            stats.accepted += 1;
            if next_sample < sample_times.len()
                && (t - sample_times[next_sample]).abs() <= span * 1e-14
            {
                observe(t, &y);
                next_sample += 1;
            }
        } else {
            stats.rejected += 1;
        }
        if stats.accepted + stats.rejected > opts.max_steps {
            return Err(OdeError::ToleranceNotMet {
                t,
                max_steps: opts.max_steps,
            });
        }

        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).min(opts.max_step);
        if h < span * 1e-15 && t < t_end {
            return Err(OdeError::StepSizeUnderflow { t, h });
        }
    }

    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_opts(max_step: f64) -> Options {
        Options {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step,
            max_steps: 10_000_000,
        }
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let (y, _) = integrate(
            |_t, y, dy| dy[0] = -y[0],
            0.0,
            5.0,
            &[1.0],
            &default_opts(0.5),
            &[],
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - (-5.0_f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_preserves_energy() {
        let (y, _) = integrate(
            |_t, y, dy| {
                dy[0] = y[1];
                dy[1] = -4.0 * y[0];
            },
            0.0,
            100.0,
            &[1.0, 0.0],
            &default_opts(0.2),
            &[],
            |_, _| {},
        )
        .unwrap();
        let energy = 4.0 * y[0] * y[0] + y[1] * y[1];
        assert!((energy - 4.0).abs() < 1e-7);
    }

    #[test]
    fn sample_times_are_hit_exactly() {
        let mut seen = Vec::new();
        let samples = [0.25, 0.5, 0.75, 1.0];
        integrate(
            |_t, y, dy| dy[0] = y[0],
            0.0,
            1.0,
            &[1.0],
            &default_opts(0.3),
            &samples,
            |t, y| seen.push((t, y[0])),
        )
        .unwrap();
        assert_eq!(seen.len(), 4);
        for ((t, v), expect) in seen.iter().zip(samples) {
            assert!((t - expect).abs() < 1e-12);
            assert!((v - expect.exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn step_budget_is_enforced() {
        let opts = Options {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: 1e-6,
            max_steps: 10,
        };
        let r = integrate(
            |_t, y, dy| dy[0] = y[0],
            0.0,
            1.0,
            &[1.0],
            &opts,
            &[],
            |_, _| {},
        );
        assert!(matches!(r, Err(OdeError::ToleranceNotMet { .. })));
    }
}
