use rayon::prelude::*;

use super::{CheckReport, Worst};
use crate::error::{Error, Result};
use crate::geometry::{distance_alpha, eigenframe, f_map, framed_distance, AlphaAssignment, AlphaValue};
use crate::linalg::{derive_seed, random_density, random_unitary, DensityMatrix, GaussianStream, UnitaryMatrix};

/// Signature of a distance under test.
pub type DistanceFn = dyn Fn(&DensityMatrix, &DensityMatrix, AlphaValue) -> Result<f64> + Sync;

/// Per-axiom tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomTolerances {
    pub non_negativity: f64,
    pub symmetry: f64,
    /// Bound on `D(ρ, ρ)`.
    pub identity: f64,
    /// `D ≤ identity` must imply `‖ρ - σ‖ ≤ indiscernible`.
    pub indiscernible: f64,
    pub triangle: f64,
    pub unitary_invariance: f64,
    /// Lower bound on `|F_α(ρ)|`.
    pub f_floor: f64,
}

impl Default for AxiomTolerances {
    fn default() -> Self {
        Self {
            non_negativity: 0.0,
            symmetry: 1e-12,
            identity: 1e-7,
            indiscernible: 1e-6,
            triangle: 1e-9,
            unitary_invariance: 1e-10,
            f_floor: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzConfig {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub tolerances: AxiomTolerances,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            dims: (2..=6).collect(),
            samples: 1000,
            seed: 0,
            alphas: vec![0.6, 0.9, 1.0],
            tolerances: AxiomTolerances::default(),
        }
    }
}

impl FuzzConfig {
    /// Dimensions in `2..=8`, at least one sample and one α, every α valid
    /// for every dimension.
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.samples == 0 || self.alphas.is_empty() {
            return Err(Error::InvalidParameter(
                "fuzz config needs dims, samples and alphas".into(),
            ));
        }
        for &n in &self.dims {
            if !(2..=8).contains(&n) {
                return Err(Error::Dimension(n));
            }
            for &a in &self.alphas {
                AlphaValue::new(a, n)?;
            }
        }
        Ok(())
    }
}

const AXIOMS: [&str; 7] = [
    "non_negativity",
    "symmetry",
    "identity",
    "indiscernibles",
    "triangle",
    "unitary_invariance",
    "f_nonzero",
];

/// One fuzz case: three random states (the third sometimes a mixture of the
/// first two, to probe the triangle near equality), a near copy of the first,
/// and a random unitary.
struct Case {
    rho: Framed,
    sigma: Framed,
    omega: Framed,
    near: Framed,
    u: UnitaryMatrix,
    alpha: AlphaValue,
}

/// A state with the frame its projective matrices are built in.
struct Framed {
    state: DensityMatrix,
    frame: UnitaryMatrix,
}

impl Framed {
    fn new(state: DensityMatrix) -> Result<Self> {
        let frame = eigenframe(&state)?;
        Ok(Self { state, frame })
    }

    fn moved(&self, u: &UnitaryMatrix) -> Self {
        Self {
            state: u.conjugate_state(&self.state),
            frame: u.compose(&self.frame),
        }
    }
}

type FramedFn<'a> = dyn Fn(&Framed, &Framed, AlphaValue) -> Result<f64> + Sync + 'a;

fn make_case(n: usize, seed: u64, alpha: f64) -> Result<Case> {
    let mut g = GaussianStream::new(seed);
    let rank = |g: &mut GaussianStream| 1 + (g.uniform() * n as f64) as usize % n;
    let (r1, r2, r3) = (rank(&mut g), rank(&mut g), rank(&mut g));
    let rho = random_density(n, r1, derive_seed(seed, &[1]))?;
    let sigma = random_density(n, r2, derive_seed(seed, &[2]))?;
    let omega = if g.uniform() < 0.3 {
        let t = g.uniform();
        DensityMatrix::new(&rho.matrix().scale_real(1.0 - t) + &sigma.matrix().scale_real(t))?
    } else {
        random_density(n, r3, derive_seed(seed, &[3]))?
    };
    let eps = 10f64.powf(-3.0 - 7.0 * g.uniform());
    let other = random_density(n, n, derive_seed(seed, &[4]))?;
    let near = DensityMatrix::new(&rho.matrix().scale_real(1.0 - eps) + &other.matrix().scale_real(eps))?;
    Ok(Case {
        rho: Framed::new(rho)?,
        sigma: Framed::new(sigma)?,
        omega: Framed::new(omega)?,
        near: Framed::new(near)?,
        u: random_unitary(n, derive_seed(seed, &[5])),
        alpha: AlphaValue::new(alpha, n)?,
    })
}

/// Violations of each axiom, in [`AXIOMS`] order.
fn violations(d: &FramedFn, c: &Case, tol: &AxiomTolerances) -> Result<[f64; 7]> {
    let a = c.alpha;
    let d_rs = d(&c.rho, &c.sigma, a)?;
    let d_sr = d(&c.sigma, &c.rho, a)?;
    let d_so = d(&c.sigma, &c.omega, a)?;
    let d_ro = d(&c.rho, &c.omega, a)?;
    let d_rr = d(&c.rho, &c.rho, a)?;
    let d_near = d(&c.rho, &c.near, a)?;
    let moved = d(&c.rho.moved(&c.u), &c.sigma.moved(&c.u), a)?;
    let indisc = if d_near <= tol.identity {
        (c.rho.state.matrix() - c.near.state.matrix()).frobenius_norm()
    } else {
        0.0
    };
    let f_min = [&c.rho, &c.sigma, &c.omega]
        .iter()
        .map(|s| f_map(&s.state, a).map(|f| f.norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok([
        (-d_rs.min(d_sr).min(d_rr).min(d_near)).max(0.0),
        (d_rs - d_sr).abs(),
        d_rr,
        indisc,
        (d_ro - d_rs - d_so).max(0.0),
        (moved - d_rs).abs(),
        (tol.f_floor - f_min).max(0.0),
    ])
}

fn axiom_tolerance(tol: &AxiomTolerances, k: usize) -> f64 {
    [
        tol.non_negativity,
        tol.symmetry,
        tol.identity,
        tol.indiscernible,
        tol.triangle,
        tol.unitary_invariance,
        0.0,
    ][k]
}

fn run_suite(cfg: &FuzzConfig, label: &str, d: &FramedFn) -> Vec<CheckReport> {
    let cases: Vec<(usize, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&n| (0..cfg.samples).map(move |s| (n, s)))
        .collect();
    let worst = cases
        .par_iter()
        .map(|&(n, s)| {
            let seed = derive_seed(cfg.seed, &[n as u64, s as u64]);
            let alpha = cfg.alphas[s % cfg.alphas.len()];
            let v = make_case(n, seed, alpha)
                .and_then(|c| violations(d, &c, &cfg.tolerances))
                .unwrap_or([f64::INFINITY; 7]);
            let mut w = [Worst::default(); 7];
            for (k, x) in v.iter().enumerate() {
                w[k].record(*x, seed);
            }
            w
        })
        .reduce(
            || [Worst::default(); 7],
            |mut a, b| {
                for k in 0..7 {
                    a[k] = a[k].merge(b[k]);
                }
                a
            },
        );
    AXIOMS
        .iter()
        .enumerate()
        .map(|(k, name)| worst[k].report(format!("{label}.{name}"), axiom_tolerance(&cfg.tolerances, k)))
        .collect()
}

/// `D̄` with uniform α. Frames are the solver eigenframes, carried along by
/// `U` in the invariance check (eigenvector phases are not covariant).
fn framed_uniform(rho: &Framed, sigma: &Framed, alpha: AlphaValue) -> Result<f64> {
    framed_distance(
        &rho.state,
        &sigma.state,
        (Some(&rho.frame), Some(&sigma.frame)),
        &AlphaAssignment::uniform(alpha),
    )
}

/// Runs the suite against an arbitrary distance (used to test the suite).
pub fn axiom_suite_with(cfg: &FuzzConfig, label: &str, d: &DistanceFn) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    Ok(run_suite(cfg, label, &|a: &Framed, b: &Framed, al| {
        d(&a.state, &b.state, al)
    }))
}

/// Metric axioms and the `|F_α| > 0` property for `D_α` and `D̄`.
pub fn axiom_suite(cfg: &FuzzConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let mut out = run_suite(cfg, "d_alpha", &|a: &Framed, b: &Framed, al| {
        distance_alpha(&a.state, &b.state, al)
    });
    let framed = run_suite(cfg, "framed", &framed_uniform);
    out.extend(framed.into_iter().filter(|r| !r.name.ends_with("f_nonzero")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::all_blocking_pass;

    fn small() -> FuzzConfig {
        FuzzConfig {
            samples: 40,
            seed: 3,
            ..FuzzConfig::default()
        }
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = FuzzConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.dims, vec![2, 3, 4, 5, 6]);
        assert_eq!(cfg.samples, 1000);
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let reports = axiom_suite(&small()).unwrap();
        assert_eq!(reports.len(), 13);
        for r in &reports {
            assert!(r.pass, "{r}");
            assert_eq!(r.cases, 200);
        }
        assert!(all_blocking_pass(&reports));
        let again = axiom_suite(&small()).unwrap();
        let lines: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
        let lines2: Vec<String> = again.iter().map(|r| r.to_string()).collect();
        assert_eq!(lines, lines2);
    }

    #[test]
    fn asymmetric_mutation_is_caught() {
        let skewed = |a: &DensityMatrix, b: &DensityMatrix, al: AlphaValue| {
            let d = distance_alpha(a, b, al)?;
            Ok(d + 1e-6 * (a.matrix()[(0, 0)].re - b.matrix()[(0, 0)].re))
        };
        let reports = axiom_suite_with(&small(), "mutant", &skewed).unwrap();
        let sym = reports.iter().find(|r| r.name == "mutant.symmetry").unwrap();
        assert!(!sym.pass);
        assert!(sym.offending_seed.is_some());
    }

    #[test]
    fn alpha_at_floor_is_rejected() {
        let cfg = FuzzConfig {
            dims: vec![2],
            alphas: vec![0.5],
            ..small()
        };
        assert!(matches!(axiom_suite(&cfg), Err(Error::Alpha { .. })));
        let cfg = FuzzConfig {
            dims: vec![9],
            ..small()
        };
        assert!(axiom_suite(&cfg).is_err());
        let cfg = FuzzConfig { samples: 0, ..small() };
        assert!(axiom_suite(&cfg).is_err());
    }
}
