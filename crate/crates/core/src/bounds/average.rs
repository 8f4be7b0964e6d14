use crate::error::{Error, Result};

/// Default relative tolerance of [`time_average`].
pub const DEFAULT_AVERAGE_TOL: f64 = 1e-8;
/// Interval cap for trapezoid doubling.
pub const MAX_INTERVALS: usize = 1 << 15;

/// A time average together with its refinement diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Average {
    pub value: f64,
    pub intervals: usize,
    pub converged: bool,
}

/// `(1/(b-a)) ∫_a^b f` by composite trapezoid with interval doubling until the
/// relative change drops below `tol`. Consecutive trapezoid levels are
/// combined by one Richardson step, `T_2n + (T_2n - T_n)/3`.
pub fn average_over(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<Average> {
    average_from(f, a, b, tol, 8)
}

/// [`average_over`] starting from `start` intervals.
pub fn average_from(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64, start: usize) -> Result<Average> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::InvalidParameter(format!("averaging interval [{a}, {b}]")));
    }
    let eval = |t: f64| -> Result<f64> {
        let v = f(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample(t))
        }
    };
    let width = b - a;
    let mut intervals = start.clamp(1, MAX_INTERVALS);
    let edge_sum = 0.5 * (eval(a)? + eval(b)?);
    let mut interior = 0.0;
    for k in 1..intervals {
        interior += eval(a + width * k as f64 / intervals as f64)?;
    }
    let mut trapezoid = (edge_sum + interior) / intervals as f64;
    let mut value = trapezoid;
    loop {
        if intervals * 2 > MAX_INTERVALS {
            return Ok(Average {
                value,
                intervals,
                converged: false,
            });
        }
        let next = intervals * 2;
        for k in (1..next).step_by(2) {
            interior += eval(a + width * k as f64 / next as f64)?;
        }
        intervals = next;
        let finer = (edge_sum + interior) / intervals as f64;
        let refined = finer + (finer - trapezoid) / 3.0;
        trapezoid = finer;
        let change = (refined - value).abs();
        value = refined;
        if change <= tol * value.abs() || change < 1e-300 {
            return Ok(Average {
                value,
                intervals,
                converged: true,
            });
        }
    }
}

/// `⟨f⟩_τ = (1/τ) ∫_0^τ f(t) dt`.
pub fn time_average(f: impl Fn(f64) -> Result<f64>, tau: f64, tol: f64) -> Result<f64> {
    Ok(average_over(f, 0.0, tau, tol)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{decay_rate, gamma_integral, DecayModel};

    #[test]
    fn elementary_averages() {
        assert_eq!(time_average(|_| Ok(2.5), 3.0, DEFAULT_AVERAGE_TOL).unwrap(), 2.5);
        assert!((time_average(Ok, 1.0, DEFAULT_AVERAGE_TOL).unwrap() - 0.5).abs() < 1e-15);
        assert!(time_average(|t| Ok(if t > 0.5 { f64::NAN } else { 1.0 }), 1.0, 1e-8).is_err());
        assert!(time_average(|_| Ok(1.0), 0.0, 1e-8).is_err());
    }

    #[test]
    fn ohmic_rate_average_matches_quadrature() {
        let m = DecayModel::ohmic_zero_t(1.0, 4.0).unwrap();
        let avg = average_over(|t| decay_rate(m, t), 0.0, 2.0, DEFAULT_AVERAGE_TOL).unwrap();
        assert!(avg.converged);
        let oracle = gamma_integral(m, 2.0).unwrap() / 2.0;
        assert!((avg.value - oracle).abs() < 1e-8 * oracle.abs().max(1.0));
    }

    #[test]
    fn cap_reports_non_convergence() {
        let avg = average_over(|t| Ok((4000.0 * t).sin()), 0.0, 1.0, 1e-14).unwrap();
        assert!(!avg.converged);
        assert_eq!(avg.intervals, MAX_INTERVALS);
    }
}
