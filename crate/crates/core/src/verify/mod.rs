//! Independent oracles and cross-checks.
//!
//! Every check produces a [`CheckReport`]; reports print as one
//! `key=value` record per line in the field order
//! `check cases worst tol pass seed blocking`.

mod brute;
mod crosscheck;
mod fuzz;
mod oracle;
mod structure;

use std::fmt;

pub use brute::{orthogonal_brute_force, ORTHOGONAL_N4_GOLDEN};
pub use crosscheck::{convention_crosscheck, shifted_crosscheck};
pub use fuzz::{axiom_suite, axiom_suite_with, AxiomTolerances, DistanceFn, FuzzConfig};
pub use oracle::{finite_diff_speed, speed_oracle_suite, FD_STEP};
pub use structure::structural_suite;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    /// Largest violation seen (0 when nothing was violated).
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Seed of the worst case when the check failed.
    pub offending_seed: Option<u64>,
    /// Non-blocking checks never affect the overall verdict.
    pub blocking: bool,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, cases: usize, worst: f64, tolerance: f64, seed: Option<u64>) -> Self {
        let pass = worst <= tolerance;
        Self {
            name: name.into(),
            cases,
            worst,
            tolerance,
            pass,
            offending_seed: if pass { None } else { seed },
            blocking: true,
        }
    }

    pub fn non_blocking(mut self) -> Self {
        self.blocking = false;
        self
    }

    /// A check that could not run counts as failed with infinite violation.
    pub(crate) fn errored(name: impl Into<String>, tolerance: f64) -> Self {
        Self::new(name, 0, f64::INFINITY, tolerance, None)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} cases={} worst={:.6e} tol={:.1e} pass={} seed={} blocking={}",
            self.name,
            self.cases,
            self.worst,
            self.tolerance,
            self.pass,
            self.offending_seed.map_or_else(|| "-".to_string(), |s| s.to_string()),
            self.blocking
        )
    }
}

/// True iff every blocking report passed.
pub fn all_blocking_pass(reports: &[CheckReport]) -> bool {
    reports.iter().filter(|r| r.blocking).all(|r| r.pass)
}

/// Running maximum of a violation together with the case that produced it.
/// Ties keep the earlier case, so reductions in seed order are deterministic.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Worst {
    pub value: f64,
    pub seed: Option<u64>,
    pub cases: usize,
}

impl Worst {
    pub fn record(&mut self, violation: f64, seed: u64) {
        self.cases += 1;
        // NaN counts as an infinite violation
        let v = if violation.is_nan() { f64::INFINITY } else { violation };
        if self.seed.is_none() || v > self.value {
            self.value = v;
            self.seed = Some(seed);
        }
    }

    pub fn merge(mut self, other: Worst) -> Worst {
        self.cases += other.cases;
        if other.seed.is_some() && (self.seed.is_none() || other.value > self.value) {
            self.value = other.value;
            self.seed = other.seed;
        }
        self
    }

    pub fn report(&self, name: impl Into<String>, tolerance: f64) -> CheckReport {
        CheckReport::new(name, self.cases, self.value, tolerance, self.seed)
    }
}
