//! Path lengths by summing angular steps on uniform grids refined by doubling.

use rayon::prelude::*;

use super::average::MAX_INTERVALS;
use crate::error::Result;

/// Relative change of the path length accepted as converged.
pub(crate) const PATH_TOL: f64 = 1e-6;

pub(crate) struct PathLength {
    /// Per-component path lengths (one per pair, or a single entry).
    pub lengths: Vec<f64>,
    pub intervals: usize,
    pub refinements: usize,
    pub converged: bool,
}

/// Refines a sampled path until its total length changes by less than
/// [`PATH_TOL`] relative.
///
/// `initial` holds samples on `intervals + 1` uniform points of `[0, τ]`;
/// `midpoint(t, left)` produces the sample at a new point given its left
/// neighbour; `step(a, b)` returns the per-component angles between two
/// samples.
pub(crate) fn refine_path<S, M, D>(tau: f64, initial: Vec<S>, midpoint: M, step: D) -> Result<PathLength>
where
    S: Send + Sync,
    M: Fn(f64, &S) -> Result<S> + Sync,
    D: Fn(&S, &S) -> Vec<f64> + Sync,
{
    let measure = |samples: &[S]| -> Vec<f64> {
        let steps: Vec<Vec<f64>> = samples.par_windows(2).map(|w| step(&w[0], &w[1])).collect();
        let width = steps.first().map_or(0, |s| s.len());
        let mut acc = vec![0.0; width];
        for s in &steps {
            for (a, v) in acc.iter_mut().zip(s) {
                *a += v;
            }
        }
        acc
    };
    let mut samples = initial;
    let mut intervals = samples.len() - 1;
    let mut lengths = measure(&samples);
    let mut refinements = 0;
    loop {
        if intervals * 2 > MAX_INTERVALS {
            return Ok(PathLength {
                lengths,
                intervals,
                refinements,
                converged: false,
            });
        }
        let next = intervals * 2;
        let mids: Vec<S> = (0..intervals)
            .into_par_iter()
            .map(|k| {
                let t = tau * (2 * k + 1) as f64 / next as f64;
                midpoint(t, &samples[k])
            })
            .collect::<Result<_>>()?;
        let mut merged = Vec::with_capacity(next + 1);
        let mut mids = mids.into_iter();
        for (k, s) in samples.into_iter().enumerate() {
            merged.push(s);
            if k < intervals {
                merged.push(mids.next().expect("one midpoint per interval"));
            }
        }
        samples = merged;
        intervals = next;
        refinements += 1;
        let refined = measure(&samples);
        let (old, new): (f64, f64) = (lengths.iter().sum(), refined.iter().sum());
        lengths = refined;
        if (new - old).abs() <= PATH_TOL * new.abs() || new == 0.0 {
            return Ok(PathLength {
                lengths,
                intervals,
                refinements,
                converged: true,
            });
        }
    }
}
