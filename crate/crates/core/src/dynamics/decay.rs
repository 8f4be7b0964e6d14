use quadrature::double_exponential;

use crate::error::{Error, Result};

/// Absolute target for the quadrature of `Γ_t`. Tighter than needed for the
/// value itself so that `e^{-Γ_t}` stays smooth under finite differences.
const GAMMA_INTEGRAL_TOL: f64 = 1e-14;
/// Integration panels are at most this many cutoff periods wide.
const PANEL_WIDTH: f64 = 0.5;

/// Time-dependent decay rate `γ_t` of an amplitude-damping channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayModel {
    Constant {
        gamma: f64,
    },
    /// Zero-temperature Ohmic-like bath with cutoff `ω_c` and Ohmicity `k`.
    OhmicZeroT {
        omega_c: f64,
        k: f64,
    },
}

impl DecayModel {
    pub fn constant(gamma: f64) -> Result<Self> {
        positive(gamma, "gamma")?;
        Ok(Self::Constant { gamma })
    }

    pub fn ohmic_zero_t(omega_c: f64, k: f64) -> Result<Self> {
        positive(omega_c, "omega_c")?;
        positive(k, "k")?;
        if k > 30.0 {
            return Err(Error::InvalidParameter(format!("Ohmicity k = {k} above 30")));
        }
        Ok(Self::OhmicZeroT { omega_c, k })
    }
}

fn positive(x: f64, name: &str) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidParameter(format!("{name} = {x} must be positive")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} must be non-negative")));
    }
    Ok(())
}

fn ohmic_rate(omega_c: f64, k: f64, t: f64) -> f64 {
    let x = omega_c * t;
    omega_c * (1.0 + x * x).powf(-0.5 * k) * libm::tgamma(k) * (k * x.atan()).sin()
}

/// `γ_t`: the constant rate, or
/// `ω_c (1 + ω_c² t²)^{-k/2} Γ(k) sin(k·atan(ω_c t))` for the Ohmic bath.
pub fn decay_rate(model: DecayModel, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(match model {
        DecayModel::Constant { gamma } => gamma,
        DecayModel::OhmicZeroT { omega_c, k } => ohmic_rate(omega_c, k, t),
    })
}

/// `Γ_t = ∫_0^t γ_s ds`. The Ohmic case integrates panel by panel with
/// tanh-sinh quadrature.
pub fn gamma_integral(model: DecayModel, t: f64) -> Result<f64> {
    check_t(t)?;
    match model {
        DecayModel::Constant { gamma } => Ok(gamma * t),
        DecayModel::OhmicZeroT { omega_c, k } => {
            if t == 0.0 {
                return Ok(0.0);
            }
            let panels = (t * omega_c / PANEL_WIDTH).ceil().max(1.0) as usize;
            let width = t / panels as f64;
            let scale = libm::tgamma(k).max(1.0);
            let tol = GAMMA_INTEGRAL_TOL * scale / panels as f64;
            let mut total = 0.0;
            let mut err = 0.0;
            for p in 0..panels {
                let a = p as f64 * width;
                let b = if p + 1 == panels { t } else { a + width };
                let out = double_exponential::integrate(|s| ohmic_rate(omega_c, k, s), a, b, tol);
                total += out.integral;
                err += out.error_estimate;
            }
            if !(total.is_finite() && err <= 1e-10 * scale) {
                return Err(Error::Quadrature {
                    estimate: total,
                    error: err,
                });
            }
            Ok(total)
        }
    }
}
