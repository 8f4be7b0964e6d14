use std::f64::consts::PI;
use std::fmt;

use crate::bounds::orthogonal_reference_distance;
use crate::error::{Error, Result};
use crate::geometry::{
    default_alphas, distance_alpha, framed_distance, ordered_pairs, permuted_distance, AlphaAssignment, AlphaValue,
};
use crate::linalg::{DensityMatrix, UnitaryMatrix};
use crate::verify::{
    axiom_suite, convention_crosscheck, orthogonal_brute_force, shifted_crosscheck, speed_oracle_suite,
    structural_suite, CheckReport, FuzzConfig, ORTHOGONAL_N4_GOLDEN,
};

use super::matrix_io::parse_matrices;

/// All distances between two states.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    pub alpha: f64,
    pub d_alpha: f64,
    pub framed: f64,
    pub framed_alphas: AlphaAssignment,
    pub permuted: f64,
    pub permutation: Vec<usize>,
    pub permuted_alphas: AlphaAssignment,
}

fn fmt_alphas(f: &mut fmt::Formatter<'_>, key: &str, a: &AlphaAssignment) -> fmt::Result {
    let parts: Vec<String> = ordered_pairs(a.dim())
        .map(|(i, j)| format!("{i}{j}:{:.12e}", a.get(i, j).value()))
        .collect();
    write!(f, " {key}={}", parts.join(";"))
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={:.12e} d_alpha={:.12e} framed={:.12e} permuted={:.12e} permutation={}",
            self.alpha,
            self.d_alpha,
            self.framed,
            self.permuted,
            self.permutation
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join("-")
        )?;
        fmt_alphas(f, "framed_alphas", &self.framed_alphas)?;
        fmt_alphas(f, "permuted_alphas", &self.permuted_alphas)
    }
}

/// Distances between `ρ` and `σ`. `α` for `D_α` defaults to the larger
/// purity (1 at the maximally mixed floor); framed distances use the solver
/// eigenframes and the default per-pair α.
pub fn distance_report(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: Option<f64>) -> Result<DistanceReport> {
    let n = rho.dim();
    if sigma.dim() != n {
        return Err(Error::DimensionMismatch(n, sigma.dim()));
    }
    let alpha = match alpha {
        Some(a) => AlphaValue::new(a, n)?,
        None => {
            let a = rho.purity().max(sigma.purity());
            if a <= 1.0 / n as f64 + 1e-12 {
                AlphaValue::one(n)?
            } else {
                AlphaValue::new(a.min(1.0), n)?
            }
        }
    };
    let framed_alphas = default_alphas(rho, sigma)?;
    let framed = framed_distance(rho, sigma, (None, None), &framed_alphas)?;
    let best = permuted_distance(rho, sigma, (None, None), None)?;
    Ok(DistanceReport {
        alpha: alpha.value(),
        d_alpha: distance_alpha(rho, sigma, alpha)?,
        framed,
        framed_alphas,
        permuted: best.distance,
        permutation: best.permutation,
        permuted_alphas: best.alphas,
    })
}

/// Reads exactly two density matrices from matrix-file text.
pub fn read_state_pair(text: &str) -> Result<(DensityMatrix, DensityMatrix)> {
    let mut ms = parse_matrices(text)?;
    if ms.len() != 2 {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected 2 matrices, found {}", ms.len()),
        });
    }
    let b = ms.pop().expect("two matrices");
    let a = ms.pop().expect("two matrices");
    Ok((DensityMatrix::new(a)?, DensityMatrix::new(b)?))
}

fn orthogonal_checks() -> Vec<CheckReport> {
    let exact = |name: &str, value: Result<f64>, target: f64| {
        CheckReport::new(name, 1, value.map_or(f64::INFINITY, |v| (v - target).abs()), 1e-9, None)
    };
    let id3 = UnitaryMatrix::identity(3);
    let permuted3 = (|| {
        Ok(permuted_distance(
            &DensityMatrix::basis_state(3, 0)?,
            &DensityMatrix::basis_state(3, 1)?,
            (Some(&id3), Some(&id3)),
            None,
        )?
        .distance)
    })();
    let qubit = (|| {
        Ok(permuted_distance(
            &DensityMatrix::basis_state(2, 0)?,
            &DensityMatrix::basis_state(2, 1)?,
            (None, None),
            None,
        )?
        .distance)
    })();
    let mut out = vec![
        exact("orthogonal.n2.permuted", qubit, 2.0 * PI),
        exact("orthogonal.n2.closed_form", orthogonal_reference_distance(2), 2.0 * PI),
        exact("orthogonal.n2.brute_force", orthogonal_brute_force(2), 2.0 * PI),
        exact("orthogonal.n3.permuted", permuted3, 4.0 * PI),
        exact("orthogonal.n3.brute_force", orthogonal_brute_force(3), 4.0 * PI),
        exact(
            "orthogonal.n4.brute_force",
            orthogonal_brute_force(4),
            ORTHOGONAL_N4_GOLDEN,
        ),
    ];
    // the printed closed form exceeds the principal-branch value for N ≥ 3
    out.push(
        exact(
            "orthogonal.n3.closed_form_vs_principal",
            orthogonal_reference_distance(3),
            4.0 * PI,
        )
        .non_blocking(),
    );
    out
}

/// Every check driven by the `verify` command; `quick` runs a tenth of the
/// random cases.
pub fn verify_all(seed: u64, quick: bool) -> Result<Vec<CheckReport>> {
    let scale = if quick { 10 } else { 1 };
    let cfg = FuzzConfig {
        samples: 1000 / scale,
        seed,
        ..FuzzConfig::default()
    };
    let mut out = axiom_suite(&cfg)?;
    out.extend(structural_suite(seed, 500 / scale));
    out.extend(speed_oracle_suite(seed, 100 / scale, &cfg.alphas));
    out.push(convention_crosscheck(seed, 100 / scale));
    out.extend(shifted_crosscheck());
    out.extend(orthogonal_checks());
    Ok(out)
}
