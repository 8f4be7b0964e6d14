use crate::error::{Error, Result};
use crate::geometry::{f_map_raw, AlphaValue};
use crate::linalg::{DensityMatrix, HermitianOperator};

/// Radicands down to this (relative) level are roundoff and clamp to zero.
const RADICAND_SLACK: f64 = 1e-12;

fn clamp_radicand(r: f64, scale: f64, what: &'static str) -> Result<f64> {
    if r >= 0.0 {
        Ok(r)
    } else if r >= -RADICAND_SLACK * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand(r, what))
    }
}

/// Speed `|dF̄_α/dt|` of the normalized embedding along `ρ̇`:
/// `√( Tr ρ̇²/|F|² - (1 - (4/N)(α - 1/N)) (Tr ρρ̇)²/|F|⁴ )`.
pub fn speed_alpha(rho: &DensityMatrix, rhodot: &HermitianOperator, alpha: AlphaValue) -> Result<f64> {
    let n = rho.dim();
    if rhodot.dim() != n {
        return Err(Error::DimensionMismatch(n, rhodot.dim()));
    }
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch(n, alpha.dim()));
    }
    let tr = rhodot.trace();
    if tr.norm() > 1e-10 * (1.0 + rhodot.max_abs()) {
        return Err(Error::InvalidParameter(format!("state derivative has trace {tr}")));
    }
    let nf = n as f64;
    let f2 = f_map_raw(rho.matrix(), alpha.value())
        .hs_dot(&f_map_raw(rho.matrix(), alpha.value()))
        .re;
    let a = rhodot.hs_dot(rhodot).re;
    let b = rho.hs_dot(rhodot).re;
    let c = 1.0 - 4.0 / nf * (alpha.value() - 1.0 / nf);
    let r = a / f2 - c * b * b / (f2 * f2);
    Ok(clamp_radicand(r, a / f2, "speed metric")?.sqrt())
}

/// `ΔE = √(Tr H²ρ² - Tr HρHρ)`, i.e. `‖[H, ρ]‖/√2`.
pub fn energy_variance(h: &HermitianOperator, state: &DensityMatrix) -> Result<f64> {
    if h.dim() != state.dim() {
        return Err(Error::DimensionMismatch(h.dim(), state.dim()));
    }
    let hr = h.matrix() * state.matrix();
    // Tr(X†Y) with X = Hρ gives Tr ρH²ρ; with X = ρH it gives Tr HρHρ
    let first = hr.hs_dot(&hr).re;
    let second = hr.adjoint().hs_dot(&hr).re;
    Ok(clamp_radicand(first - second, first.abs(), "energy variance")?.sqrt())
}
