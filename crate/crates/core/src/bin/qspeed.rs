use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qspeed::experiments::{
    distance_report, fig1, fig2, nonmarkov, read_state_pair, render_svg, tau_alpha_study, verify_all, Fig1Params,
    Fig2Params, NonMarkovParams, Sweep, Table, TauAlphaParams, TauAlphaStudy, DEFAULT_TAUS,
};
use qspeed::verify::all_blocking_pass;
use qspeed::{bounds::MIN_GRID, Error, Result};

/// State distances and attainable quantum speed limits.
///
/// Figure studies print CSV (comment lines start with '#'). Exit codes:
/// 0 success, 1 invalid input, 2 failed check, 3 no convergence.
#[derive(Parser, Debug)]
#[command(name = "qspeed", version)]
struct Cli {
    /// Base seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Initial number of time-grid points (at least 65); refined automatically.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; csv+svg also writes <out>.svg and needs --out.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Fewer sweep points and a tenth of the random cases.
    #[arg(long, global = true)]
    quick: bool,
    /// File of `key = value` lines; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    #[value(name = "csv+svg")]
    CsvSvg,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, false)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-system framed bound vs τ for H_T and H0+H1 from the ground state.
    Fig1(Fig1Args),
    /// Amplitude damping framed bound over the populations (λ1, λ2).
    Fig2(Fig2Args),
    /// Framed bound vs τ under the Ohmic zero-temperature decay rate.
    Nonmarkov(NonMarkovArgs),
    /// Unframed-bound studies: amplitude damping, dephasing, unitary.
    TauAlpha(TauAlphaArgs),
    /// Distances between the two matrices of a matrix file.
    Distance(DistanceArgs),
    /// Runs the axiom, oracle and cross-check suites.
    Verify,
}

#[derive(Args, Debug, Default)]
struct TauSweepArgs {
    /// First evolution time [default: 0.1].
    #[arg(long)]
    tau_start: Option<f64>,
    /// Last evolution time [default: 3].
    #[arg(long)]
    tau_stop: Option<f64>,
    /// Evolution-time step [default: 0.1].
    #[arg(long)]
    tau_step: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct HamiltonianArgs {
    /// Energy scale E_m [default: 1].
    #[arg(long)]
    e_m: Option<f64>,
    /// Coupling Ω [default: 1].
    #[arg(long)]
    omega: Option<f64>,
    /// Middle level fraction μ [default: 0.5].
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Args, Debug)]
struct Fig1Args {
    #[command(flatten)]
    ham: HamiltonianArgs,
    #[command(flatten)]
    taus: TauSweepArgs,
}

#[derive(Args, Debug, Default)]
struct PopulationArgs {
    /// Ground-level population λ0 [default: 0].
    #[arg(long)]
    lambda0: Option<f64>,
    /// Single point: λ1 (λ2 defaults to 1 - λ0 - λ1).
    #[arg(long)]
    lambda1: Option<f64>,
    /// Single point: λ2.
    #[arg(long)]
    lambda2: Option<f64>,
    /// Points in the λ1 sweep over [0, 1 - λ0] [default: 21].
    #[arg(long)]
    steps: Option<usize>,
    /// Decay rate γ [default: 1].
    #[arg(long)]
    gamma: Option<f64>,
    /// Evolution time τ [default: 1].
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Args, Debug)]
struct Fig2Args {
    #[command(flatten)]
    pop: PopulationArgs,
}

#[derive(Args, Debug)]
struct NonMarkovArgs {
    /// Cutoff frequency ω_c [default: 1].
    #[arg(long)]
    omega_c: Option<f64>,
    /// Ohmicity k [default: 4].
    #[arg(long)]
    k: Option<f64>,
    #[command(flatten)]
    taus: TauSweepArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Dynamics {
    Amplitude,
    Dephasing,
    Unitary,
}

impl FromStr for Dynamics {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Dynamics as ValueEnum>::from_str(s, false)
    }
}

#[derive(Args, Debug)]
struct TauAlphaArgs {
    /// Which study to run [default: amplitude].
    #[arg(long, value_enum)]
    dynamics: Option<Dynamics>,
    #[command(flatten)]
    pop: PopulationArgs,
    /// Dephasing: coherence between levels 2 and 0 [default: sqrt(λ0 λ2)].
    #[arg(long)]
    lambda20: Option<f64>,
    #[command(flatten)]
    ham: HamiltonianArgs,
    #[command(flatten)]
    taus: TauSweepArgs,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    /// Matrix file holding two density matrices.
    input: PathBuf,
    /// α for D_α [default: the larger purity].
    #[arg(long)]
    alpha: Option<f64>,
}

/// `key = value` settings from a config file.
struct Config {
    values: BTreeMap<String, (String, usize)>,
}

const GLOBAL_KEYS: [&str; 4] = ["seed", "grid", "format", "quick"];

impl Config {
    fn empty() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    fn load(path: &Path, allowed: &[&str]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected `key = value`".into(),
            })?;
            let key = k.trim().replace('-', "_");
            if !GLOBAL_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("unknown key `{key}` for this command"),
                });
            }
            values.insert(key, (v.trim().to_string(), idx + 1));
        }
        Ok(Self { values })
    }

    /// Flag value, else config value, else `None`.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|_| Error::Parse {
                line: *line,
                message: format!("invalid value `{v}` for `{key}`"),
            }),
        }
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }
}

fn allowed_keys(cmd: &Command) -> &'static [&'static str] {
    match cmd {
        Command::Fig1(_) => &["e_m", "omega", "mu", "tau_start", "tau_stop", "tau_step"],
        Command::Fig2(_) => &["lambda0", "lambda1", "lambda2", "steps", "gamma", "tau"],
        Command::Nonmarkov(_) => &["omega_c", "k", "tau_start", "tau_stop", "tau_step"],
        Command::TauAlpha(_) => &[
            "dynamics",
            "lambda0",
            "lambda1",
            "lambda2",
            "steps",
            "gamma",
            "tau",
            "lambda20",
            "e_m",
            "omega",
            "mu",
            "tau_start",
            "tau_stop",
            "tau_step",
        ],
        Command::Distance(_) => &["alpha"],
        Command::Verify => &[],
    }
}

struct Globals {
    seed: u64,
    grid: usize,
    format: Format,
    quick: bool,
}

const QUICK_FACTOR: usize = 5;

fn sweep(cfg: &Config, a: &TauSweepArgs, quick: bool) -> Result<Sweep> {
    let mut s = Sweep {
        start: cfg.get(a.tau_start, "tau_start", DEFAULT_TAUS.start)?,
        stop: cfg.get(a.tau_stop, "tau_stop", DEFAULT_TAUS.stop)?,
        step: cfg.get(a.tau_step, "tau_step", DEFAULT_TAUS.step)?,
    };
    if quick {
        s.step *= QUICK_FACTOR as f64;
    }
    Ok(s)
}

fn steps(cfg: &Config, a: &PopulationArgs, quick: bool) -> Result<usize> {
    let s = cfg.get(a.steps, "steps", 21)?;
    Ok(if quick {
        ((s.saturating_sub(1)) / QUICK_FACTOR + 1).max(2)
    } else {
        s
    })
}

fn emit(g: &Globals, out: Option<&Path>, table: &Table, x: &str, ys: &[&str]) -> Result<()> {
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    if !table.converged {
        eprintln!("warning: some bounds did not converge within the refinement cap");
    }
    let csv = table.to_csv();
    match out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            if g.format == Format::CsvSvg {
                let svg =
                    render_svg(table, x, ys).ok_or_else(|| Error::InvalidParameter("no plottable columns".into()))?;
                std::fs::write(path.with_extension("svg"), svg)?;
            }
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p, allowed_keys(&cli.command))?,
        None => Config::empty(),
    };
    let g = Globals {
        seed: cfg.get(cli.seed, "seed", 0)?,
        grid: cfg.get(cli.grid, "grid", MIN_GRID)?,
        format: cfg.get(cli.format, "format", Format::Csv)?,
        quick: cli.quick || cfg.get(None, "quick", false)?,
    };
    if g.format == Format::CsvSvg && cli.out.is_none() {
        return Err(Error::InvalidParameter("--format csv+svg needs --out".into()));
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Fig1(a) => {
            let p = Fig1Params {
                e_m: cfg.get(a.ham.e_m, "e_m", 1.0)?,
                omega: cfg.get(a.ham.omega, "omega", 1.0)?,
                mu: cfg.get(a.ham.mu, "mu", 0.5)?,
                taus: sweep(&cfg, &a.taus, g.quick)?,
                grid: g.grid,
            };
            emit(&g, out, &fig1(&p)?, "tau", &["ratio_opt", "ratio_h0h1"])?;
        }
        Command::Fig2(a) => {
            let p = Fig2Params {
                lambda0: cfg.get(a.pop.lambda0, "lambda0", 0.0)?,
                lambda1: cfg.pick(a.pop.lambda1, "lambda1")?,
                lambda2: cfg.pick(a.pop.lambda2, "lambda2")?,
                gamma: cfg.get(a.pop.gamma, "gamma", 1.0)?,
                tau: cfg.get(a.pop.tau, "tau", 1.0)?,
                steps: steps(&cfg, &a.pop, g.quick)?,
                grid: g.grid,
            };
            emit(&g, out, &fig2(&p)?, "lambda1", &["ratio"])?;
        }
        Command::Nonmarkov(a) => {
            let p = NonMarkovParams {
                omega_c: cfg.get(a.omega_c, "omega_c", 1.0)?,
                k: cfg.get(a.k, "k", 4.0)?,
                taus: sweep(&cfg, &a.taus, g.quick)?,
                grid: g.grid,
            };
            emit(&g, out, &nonmarkov(&p)?, "tau", &["gamma_tau", "ratio"])?;
        }
        Command::TauAlpha(a) => {
            let study = match cfg.get(a.dynamics, "dynamics", Dynamics::Amplitude)? {
                Dynamics::Amplitude => TauAlphaStudy::Amplitude,
                Dynamics::Dephasing => TauAlphaStudy::Dephasing,
                Dynamics::Unitary => TauAlphaStudy::Unitary,
            };
            let p = TauAlphaParams {
                study,
                lambda0: cfg.get(a.pop.lambda0, "lambda0", 0.0)?,
                lambda1: cfg.pick(a.pop.lambda1, "lambda1")?,
                lambda2: cfg.pick(a.pop.lambda2, "lambda2")?,
                lambda20: cfg.pick(a.lambda20, "lambda20")?,
                gamma: cfg.get(a.pop.gamma, "gamma", 1.0)?,
                tau: cfg.get(a.pop.tau, "tau", 1.0)?,
                steps: steps(&cfg, &a.pop, g.quick)?,
                e_m: cfg.get(a.ham.e_m, "e_m", 1.0)?,
                omega: cfg.get(a.ham.omega, "omega", 1.0)?,
                mu: cfg.get(a.ham.mu, "mu", 0.5)?,
                taus: sweep(&cfg, &a.taus, g.quick)?,
                grid: g.grid,
            };
            let table = tau_alpha_study(&p)?;
            match study {
                TauAlphaStudy::Unitary => emit(&g, out, &table, "tau", &["ratio_opt", "ratio_h0h1"])?,
                _ => emit(&g, out, &table, "lambda1", &["ratio"])?,
            }
        }
        Command::Distance(a) => {
            let text = std::fs::read_to_string(&a.input)?;
            let (rho, sigma) = read_state_pair(&text)?;
            let r = distance_report(&rho, &sigma, cfg.pick(a.alpha, "alpha")?)?;
            write_text(out, &format!("{r}\n"))?;
        }
        Command::Verify => {
            let reports = verify_all(g.seed, g.quick)?;
            let mut text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            let failed = reports.iter().filter(|r| r.blocking && !r.pass).count();
            let flagged = reports.iter().filter(|r| !r.blocking && !r.pass).count();
            text.push_str(&format!(
                "summary checks={} blocking_failures={failed} flagged_non_blocking={flagged}\n",
                reports.len()
            ));
            write_text(out, &text)?;
            if !all_blocking_pass(&reports) {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
