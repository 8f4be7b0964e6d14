//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process exits non-zero if
//! any criterion fails.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qspeed::bounds::{orthogonal_reference_distance, tau_alpha, tau_qsl, tau_qsl_closed, QslReport, MIN_GRID};
use qspeed::dynamics::{
    decay_rate, AmplitudeDampingTrajectory, DecayModel, DephasingTrajectory, DepolarizingTrajectory,
    ProbabilitySchedule, Trajectory, UnitaryTrajectory,
};
use qspeed::experiments::{
    endpoint_alpha, fig1_point, fig2_point, nonmarkov_point, tau_alpha_point, tau_alpha_unitary_point, verify_all,
    Fig1Params, Fig2Params, NonMarkovParams, TauAlphaParams, TauAlphaStudy,
};
use qspeed::geometry::{permuted_distance, AlphaValue};
use qspeed::linalg::{derive_seed, random_density, random_hermitian, DensityMatrix, UnitaryMatrix};
use qspeed::verify::{
    axiom_suite, orthogonal_brute_force, shifted_crosscheck, speed_oracle_suite, structural_suite, CheckReport,
    FuzzConfig,
};

const SEED: u64 = 2024;
const ALPHAS: [f64; 3] = [0.6, 0.9, 1.0];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: qspeed::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn reports_pass(reports: &[CheckReport]) -> Outcome {
    if let Some(bad) = reports.iter().find(|r| r.blocking && !r.pass) {
        return Err(bad.to_string());
    }
    let worst = reports
        .iter()
        .filter(|r| r.blocking)
        .map(|r| r.worst / r.tolerance.max(f64::MIN_POSITIVE))
        .fold(0.0_f64, f64::max);
    Ok(format!("{} checks, worst/tol = {:.3e}", reports.len(), worst))
}

fn run(id: usize, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut outcome = f();
    let elapsed = start.elapsed();
    if let (Ok(_), Some(b)) = (&outcome, budget) {
        if elapsed > b {
            outcome = Err(format!(
                "runtime {:.1}s over budget {:.0}s",
                elapsed.as_secs_f64(),
                b.as_secs_f64()
            ));
        }
    }
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!(
        "[{tag}] criterion {id:>2} {name}: {detail} ({:.2}s)",
        elapsed.as_secs_f64()
    );
    outcome.is_ok()
}

fn metric_axioms() -> Outcome {
    let cfg = FuzzConfig {
        dims: (2..=6).collect(),
        samples: 1000,
        seed: SEED,
        alphas: ALPHAS.to_vec(),
        ..FuzzConfig::default()
    };
    reports_pass(&lib(axiom_suite(&cfg))?)
}

fn structural() -> Outcome {
    reports_pass(&structural_suite(SEED, 500))
}

fn speed_oracle() -> Outcome {
    reports_pass(&speed_oracle_suite(SEED, 100, &ALPHAS))
}

fn unitary_saturation() -> Outcome {
    let p = Fig1Params::default();
    let mut worst_opt = 0.0_f64;
    let mut max_other = 0.0_f64;
    for tau in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let (opt, other) = lib(fig1_point(&p, tau))?;
        ensure((opt.ratio - 1.0).abs() <= 1e-3, || format!("H_T at tau={tau}: {opt}"))?;
        ensure(other.ratio < 1.0, || format!("H0+H1 at tau={tau}: {other}"))?;
        worst_opt = worst_opt.max((opt.ratio - 1.0).abs());
        max_other = max_other.max(other.ratio);
    }
    Ok(format!(
        "max |ratio_opt - 1| = {worst_opt:.3e}, max ratio_h0h1 = {max_other:.6}"
    ))
}

fn depolarizing_saturation() -> Outcome {
    let mut worst = 0.0_f64;
    for n in 2..=4 {
        for case in 0..50u64 {
            let seed = derive_seed(SEED, &[5, n as u64, case]);
            let rank = 1 + (case as usize % n);
            let rho0 = lib(random_density(n, rank, seed))?;
            let purity = rho0.purity();
            let traj = lib(DepolarizingTrajectory::new(
                rho0,
                lib(ProbabilitySchedule::exponential(1.0))?,
                1.0,
            ))?;
            let q = lib(tau_qsl(&traj, MIN_GRID, None))?;
            let a = lib(tau_alpha(&traj, lib(AlphaValue::new(purity, n))?, MIN_GRID))?;
            for (label, r) in [("tau_qsl", &q), ("tau_alpha", &a)] {
                ensure((r.ratio - 1.0).abs() <= 1e-3, || {
                    format!("{label} n={n} seed={seed}: {r}")
                })?;
                worst = worst.max((r.ratio - 1.0).abs());
            }
        }
    }
    Ok(format!("150 states, max |ratio - 1| = {worst:.3e}"))
}

fn amplitude_damping() -> Outcome {
    let p = Fig2Params::default();
    let mut worst_equal = 0.0_f64;
    for l0 in [0.0, 0.1, 0.3, 0.5, 0.8] {
        let l = (1.0 - l0) / 2.0;
        let r = lib(fig2_point(&p, [l0, l, l]))?;
        ensure((r.ratio - 1.0).abs() <= 1e-3, || format!("lambda0={l0} equal: {r}"))?;
        worst_equal = worst_equal.max((r.ratio - 1.0).abs());
    }
    let mut max_unequal = 0.0_f64;
    for (l0, l1, l2) in [
        (0.0, 0.7, 0.3),
        (0.0, 0.2, 0.8),
        (0.2, 0.5, 0.3),
        (0.1, 0.0, 0.9),
        (0.4, 0.35, 0.25),
    ] {
        let r = lib(fig2_point(&p, [l0, l1, l2]))?;
        ensure(r.ratio <= 0.999, || format!("({l0}, {l1}, {l2}): {r}"))?;
        max_unequal = max_unequal.max(r.ratio);
    }
    let traces: Vec<CheckReport> = shifted_crosscheck()
        .into_iter()
        .filter(|r| r.name.starts_with("shifted.damping_traces"))
        .collect();
    ensure(traces.len() == 3, || {
        format!("expected 3 trace checks, got {}", traces.len())
    })?;
    for r in &traces {
        ensure(r.pass && r.tolerance <= 1e-10, || r.to_string())?;
    }
    let trace_worst = traces.iter().map(|r| r.worst).fold(0.0, f64::max);
    Ok(format!(
        "equal max |ratio - 1| = {worst_equal:.3e}, unequal max ratio = {max_unequal:.6}, trace residual {trace_worst:.1e}"
    ))
}

fn nonmarkovian() -> Outcome {
    let p = NonMarkovParams::default();
    let model = lib(DecayModel::ohmic_zero_t(p.omega_c, p.k))?;
    let gamma = |t: f64| decay_rate(model, t).unwrap();
    let (mut a, mut b) = (0.5, 1.5);
    ensure(gamma(a) > 0.0 && gamma(b) < 0.0, || {
        "no sign change of gamma_t on [0.5, 1.5]".into()
    })?;
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if gamma(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let root = 0.5 * (a + b);
    ensure((root - 1.0).abs() <= 1e-6, || format!("zero crossing at {root}"))?;
    let mut worst = 0.0_f64;
    for tau in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let (_, r) = lib(nonmarkov_point(&p, tau))?;
        ensure((r.ratio - 1.0).abs() <= 1e-3, || format!("tau={tau}: {r}"))?;
        worst = worst.max((r.ratio - 1.0).abs());
    }
    let (_, late) = lib(nonmarkov_point(&p, 2.0))?;
    ensure(late.ratio < 1.0, || format!("tau=2: {late}"))?;
    Ok(format!(
        "zero crossing at {root:.9}, max |ratio - 1| (tau <= 0.5) = {worst:.3e}, ratio(2) = {:.6}",
        late.ratio
    ))
}

fn orthogonal() -> Outcome {
    let basis = |n, k| lib(DensityMatrix::basis_state(n, k));
    let d2 = lib(permuted_distance(&basis(2, 0)?, &basis(2, 1)?, (None, None), None))?.distance;
    ensure((d2 - 2.0 * PI).abs() <= 1e-9, || format!("N=2 permuted {d2}"))?;
    let c2 = lib(orthogonal_reference_distance(2))?;
    ensure((c2 - 2.0 * PI).abs() <= 1e-9, || format!("N=2 closed form {c2}"))?;
    let id = UnitaryMatrix::identity(3);
    let d3 = lib(permuted_distance(
        &basis(3, 0)?,
        &basis(3, 1)?,
        (Some(&id), Some(&id)),
        None,
    ))?
    .distance;
    ensure((d3 - 4.0 * PI).abs() <= 1e-9, || format!("N=3 permuted {d3}"))?;
    let b3 = lib(orthogonal_brute_force(3))?;
    ensure((b3 - 4.0 * PI).abs() <= 1e-9, || format!("N=3 brute force {b3}"))?;
    let c3 = lib(orthogonal_reference_distance(3))?;
    let flag = if (c3 - 4.0 * PI).abs() > 1e-9 {
        format!("FLAGGED closed form {:.6}π vs principal 4π", c3 / PI)
    } else {
        "closed form agrees".into()
    };
    Ok(format!(
        "N=2 {:.12}π, N=3 {:.12}π (two paths); {flag}",
        d2 / PI,
        d3 / PI
    ))
}

#[derive(Clone, Copy, Debug)]
enum Family {
    Unitary,
    Depolarizing,
    AmplitudeDamping,
    AmplitudeDampingOhmic,
    Dephasing,
}

fn random_populations(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0_f64)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// `(tau_qsl, tau_alpha, closed-form report if unitary)` for one seeded case.
type CaseReports = (QslReport, QslReport, Option<QslReport>);

fn bound_case(family: Family, n: usize, seed: u64) -> qspeed::Result<CaseReports> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rng.gen_range(1..=n);
    let tau = rng.gen_range(0.2..1.5);
    let traj: Box<dyn Trajectory> = match family {
        Family::Unitary => {
            let h = random_hermitian(n, rng.gen());
            let rho0 = random_density(n, rank, rng.gen())?;
            let traj = UnitaryTrajectory::new(h.clone(), rho0.clone(), tau)?;
            let q = tau_qsl(&traj, MIN_GRID, None)?;
            let a = tau_alpha(&traj, endpoint_alpha(&traj)?, MIN_GRID)?;
            let closed = tau_qsl_closed(vec![(h, tau)], &rho0, tau, MIN_GRID)?;
            return Ok((q, a, Some(closed)));
        }
        Family::Depolarizing => Box::new(DepolarizingTrajectory::new(
            random_density(n, rank, rng.gen())?,
            ProbabilitySchedule::exponential(rng.gen_range(0.1..3.0))?,
            tau,
        )?),
        Family::AmplitudeDamping => Box::new(AmplitudeDampingTrajectory::new(
            &random_populations(&mut rng, n),
            DecayModel::constant(rng.gen_range(0.1..3.0))?,
            tau,
        )?),
        Family::AmplitudeDampingOhmic => Box::new(AmplitudeDampingTrajectory::new(
            &random_populations(&mut rng, n),
            DecayModel::ohmic_zero_t(rng.gen_range(0.5..2.0), rng.gen_range(1.0..6.0))?,
            tau,
        )?),
        Family::Dephasing => Box::new(DephasingTrajectory::from_state(
            random_density(n, rank, rng.gen())?,
            rng.gen_range(0.1..3.0),
            tau,
        )?),
    };
    let q = tau_qsl(traj.as_ref(), MIN_GRID, None)?;
    let a = tau_alpha(traj.as_ref(), endpoint_alpha(traj.as_ref())?, MIN_GRID)?;
    Ok((q, a, None))
}

fn bound_validity() -> Outcome {
    use rayon::prelude::*;
    let families = [
        Family::Unitary,
        Family::Depolarizing,
        Family::AmplitudeDamping,
        Family::AmplitudeDampingOhmic,
        Family::Dephasing,
    ];
    let mut summary = String::new();
    for (fi, family) in families.into_iter().enumerate() {
        let results: Vec<(u64, usize, qspeed::Result<CaseReports>)> = (0..100u64)
            .into_par_iter()
            .map(|case| {
                let n = 2 + (case % 3) as usize;
                let seed = derive_seed(SEED, &[9, fi as u64, case]);
                (seed, n, bound_case(family, n, seed))
            })
            .collect();
        let (mut max_ratio, mut max_rel) = (0.0_f64, 0.0_f64);
        for (seed, n, r) in results {
            let (q, a, closed) = r.map_err(|e| format!("{family:?} n={n} seed={seed}: {e}"))?;
            for (label, rep) in [("tau_qsl", &q), ("tau_alpha", &a)] {
                ensure(rep.ratio <= 1.0 + 2e-3, || {
                    format!("{family:?} {label} n={n} seed={seed}: {rep}")
                })?;
                max_ratio = max_ratio.max(rep.ratio);
            }
            if let Some(c) = closed {
                let rel = (c.bound - q.bound).abs() / q.bound.abs().max(f64::MIN_POSITIVE);
                ensure(rel <= 1e-4, || {
                    format!("closed vs generic n={n} seed={seed}: {c} / {q}")
                })?;
                max_rel = max_rel.max(rel);
            }
        }
        let _ = write!(summary, "{family:?} max ratio {max_ratio:.6}; ");
        if matches!(family, Family::Unitary) {
            let _ = write!(summary, "closed vs generic max rel {max_rel:.2e}; ");
        }
    }
    Ok(summary.trim_end_matches("; ").to_string())
}

fn tau_alpha_studies() -> Outcome {
    let p = TauAlphaParams {
        study: TauAlphaStudy::Dephasing,
        ..TauAlphaParams::default()
    };
    let third = 1.0 / 3.0;
    let (_, sat) = lib(tau_alpha_point(&p, [third; 3]))?;
    ensure((sat.ratio - 1.0).abs() <= 1e-3, || format!("equal populations: {sat}"))?;
    let mut max_other = 0.0_f64;
    for l in [[0.5, 0.3, 0.2], [0.2, 0.2, 0.6], [0.1, 0.6, 0.3], [0.6, 0.1, 0.3]] {
        let (_, r) = lib(tau_alpha_point(&p, l))?;
        ensure(r.ratio < 1.0 - 1e-3, || format!("{l:?}: {r}"))?;
        max_other = max_other.max(r.ratio);
    }
    let u = TauAlphaParams {
        study: TauAlphaStudy::Unitary,
        ..TauAlphaParams::default()
    };
    for tau in [0.5, 1.0, 2.0, 3.0] {
        let (opt, other) = lib(tau_alpha_unitary_point(&u, tau))?;
        ensure(opt.ratio < 1.0 && other.ratio < 1.0, || {
            format!("tau={tau}: {opt} / {other}")
        })?;
    }
    let (opt, other) = lib(tau_alpha_unitary_point(&u, 1.0))?;
    ensure(opt.ratio > other.ratio, || {
        format!("tau=1: H_T {} vs H0+H1 {}", opt.ratio, other.ratio)
    })?;
    Ok(format!(
        "dephasing equal {:.6}, others max {max_other:.6}; unitary tau=1 H_T {:.6} > H0+H1 {:.6}",
        sat.ratio, opt.ratio, other.ratio
    ))
}

fn cli_output(args: &[&str], dir: &Path, tag: &str) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("{tag}.csv"));
    let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let writes_file = !args.contains(&"verify") && !args.contains(&"distance");
    if writes_file {
        full.extend(["--out".into(), out.display().to_string()]);
    }
    let res = Command::new(env!("CARGO_BIN_EXE_qspeed"))
        .args(&full)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(res.status.success(), || {
        format!(
            "{args:?} exited {:?}: {}",
            res.status.code(),
            String::from_utf8_lossy(&res.stderr)
        )
    })?;
    if writes_file {
        std::fs::read(&out).map_err(|e| e.to_string())
    } else {
        Ok(res.stdout)
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let pair = dir.path().join("pair.txt");
    let rho = lib(random_density(3, 2, 11))?;
    let sigma = lib(random_density(3, 3, 12))?;
    let text = format!(
        "{}\n{}",
        qspeed::experiments::matrix_io::format_matrix(rho.matrix()),
        qspeed::experiments::matrix_io::format_matrix(sigma.matrix())
    );
    std::fs::write(&pair, text).map_err(|e| e.to_string())?;
    let pair = pair.display().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["--seed", "7", "fig1"],
        vec!["--seed", "7", "fig2"],
        vec!["--seed", "7", "nonmarkov"],
        vec!["--seed", "7", "tau-alpha", "--dynamics", "amplitude"],
        vec!["--seed", "7", "tau-alpha", "--dynamics", "dephasing"],
        vec!["--seed", "7", "tau-alpha", "--dynamics", "unitary"],
        vec!["--seed", "7", "distance", &pair],
        vec!["--seed", "7", "--quick", "verify"],
    ];
    for (k, args) in commands.iter().enumerate() {
        let a = cli_output(args, dir.path(), &format!("a{k}"))?;
        let b = cli_output(args, dir.path(), &format!("b{k}"))?;
        ensure(!a.is_empty() && a == b, || format!("{args:?} differs between runs"))?;
    }
    let render = |r: Vec<CheckReport>| r.iter().map(|c| format!("{c}\n")).collect::<String>();
    let first = render(lib(verify_all(SEED, false))?);
    let second = render(lib(verify_all(SEED, false))?);
    ensure(first == second, || "full check reports differ between runs".into())?;
    Ok(format!(
        "{} CLI commands and the full check report byte-identical",
        commands.len()
    ))
}

fn main() -> ExitCode {
    let results = [
        run(1, "metric axiom suite", Some(Duration::from_secs(60)), metric_axioms),
        run(2, "structural identities", None, structural),
        run(3, "speed vs finite differences", None, speed_oracle),
        run(
            4,
            "unitary saturation",
            Some(Duration::from_secs(30)),
            unitary_saturation,
        ),
        run(5, "depolarizing saturation", None, depolarizing_saturation),
        run(6, "amplitude damping", None, amplitude_damping),
        run(7, "non-Markovian damping", None, nonmarkovian),
        run(8, "orthogonal-state distances", None, orthogonal),
        run(9, "bound validity sweep", None, bound_validity),
        run(10, "tau_alpha studies", None, tau_alpha_studies),
        run(11, "determinism", None, determinism),
    ];
    let passed = results.iter().filter(|ok| **ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
