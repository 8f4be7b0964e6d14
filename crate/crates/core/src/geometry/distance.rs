use super::alpha::AlphaValue;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, HermitianOperator};

fn check_alpha(rho: &DensityMatrix, alpha: AlphaValue) -> Result<()> {
    if alpha.dim() != rho.dim() {
        return Err(Error::Alpha {
            value: alpha.value(),
            lower: 1.0 / rho.dim() as f64,
            dim: rho.dim(),
        });
    }
    Ok(())
}

/// `F_α(ρ) = ρ - ((1 + α - Tr ρ²)/N)·I`.
pub fn f_map(rho: &DensityMatrix, alpha: AlphaValue) -> Result<HermitianOperator> {
    check_alpha(rho, alpha)?;
    Ok(HermitianOperator::from_matrix_unchecked(f_map_raw(
        rho.matrix(),
        alpha.value(),
    )))
}

pub(crate) fn f_map_raw(rho: &ComplexMatrix, alpha: f64) -> ComplexMatrix {
    let n = rho.dim() as f64;
    let purity = rho.hs_dot(rho).re;
    rho.add_identity(-(1.0 + alpha - purity) / n)
}

/// `F_α(ρ)/|F_α(ρ)|`. The image never vanishes for `α > 1/N`.
pub(crate) fn unit_image(rho: &ComplexMatrix, alpha: f64) -> ComplexMatrix {
    let f = f_map_raw(rho, alpha);
    let norm = f.frobenius_norm();
    f.scale_real(1.0 / norm)
}

/// Angle between two unit vectors of the Hilbert-Schmidt space.
///
/// Evaluated as `2·atan2(|a-b|, |a+b|)`, which equals `arccos⟨a,b⟩` on
/// `[0, π]` but keeps full relative precision for nearly parallel and nearly
/// antiparallel arguments.
pub(crate) fn unit_angle(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        diff += (x - y).norm_sqr();
        sum += (x + y).norm_sqr();
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// `D_α(ρ, σ) = arccos⟨F̄_α(ρ), F̄_α(σ)⟩ ∈ [0, π]`.
pub fn distance_alpha(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: AlphaValue) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    check_alpha(rho, alpha)?;
    Ok(unit_angle(
        &unit_image(rho.matrix(), alpha.value()),
        &unit_image(sigma.matrix(), alpha.value()),
    ))
}
