use super::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, Complex64, ComplexMatrix, DensityMatrix, UnitaryMatrix};

/// Eigenvalues closer than this are treated as one degenerate cluster.
const CLUSTER_TOL: f64 = 1e-9;
/// Minimum accepted overlap between matched columns of consecutive frames.
const MIN_OVERLAP: f64 = 0.5;

/// `m ≥ 2` uniformly spaced times covering `[0, τ]`, endpoints exact.
pub fn uniform_grid(tau: f64, m: usize) -> Vec<f64> {
    let last = m - 1;
    (0..m)
        .map(|k| if k == last { tau } else { tau * k as f64 / last as f64 })
        .collect()
}

/// Continuous eigenframes on a uniform grid of `m` points.
pub fn track_frame(traj: &dyn Trajectory, m: usize) -> Result<Vec<UnitaryMatrix>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "frame tracking needs at least 2 grid points, got {m}"
        )));
    }
    track_frame_from(traj, &uniform_grid(traj.horizon(), m), None)
}

/// Continuous eigenframes at the given increasing times. A declared frame is
/// sampled directly; otherwise each eigenbasis is matched to its
/// predecessor, starting from `initial` (or the solver frame at the first
/// time).
pub fn track_frame_from(
    traj: &dyn Trajectory,
    times: &[f64],
    initial: Option<&UnitaryMatrix>,
) -> Result<Vec<UnitaryMatrix>> {
    if times.is_empty() {
        return Ok(Vec::new());
    }
    if traj.frame(times[0]).is_some() && initial.is_none() {
        return times
            .iter()
            .map(|&t| {
                traj.frame(t)
                    .ok_or_else(|| Error::InconsistentTrajectory(format!("frame undeclared at t = {t}")))
            })
            .collect();
    }
    let mut frames = Vec::with_capacity(times.len());
    let first = match initial {
        Some(f) => f.clone(),
        None => eig_hermitian(traj.state(times[0])?.hermitian())?.vectors,
    };
    frames.push(first);
    for &t in &times[1..] {
        let eig = eig_hermitian(traj.state(t)?.hermitian())?;
        let prev = frames.last().expect("non-empty");
        let next = align(prev, &eig.values, eig.vectors.matrix(), t)?;
        frames.push(next);
    }
    Ok(frames)
}

/// Eigenframe of `rho` aligned to a nearby frame `prev`.
pub(crate) fn align_frame(prev: &UnitaryMatrix, rho: &DensityMatrix, t: f64) -> Result<UnitaryMatrix> {
    let eig = eig_hermitian(rho.hermitian())?;
    align(prev, &eig.values, eig.vectors.matrix(), t)
}

fn columns(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim()).map(|k| m.column(k)).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn align(prev: &UnitaryMatrix, values: &[f64], vectors: &ComplexMatrix, t: f64) -> Result<UnitaryMatrix> {
    let n = values.len();
    let old = columns(prev.matrix());
    let mut new = columns(vectors);

    // Inside a degenerate cluster the solver basis is arbitrary; replace it by
    // the projections of the best-represented previous columns.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let cluster: Vec<Vec<Complex64>> = new[start..end].to_vec();
            let weight = |p: &[Complex64]| cluster.iter().map(|v| dot(v, p).norm_sqr()).sum::<f64>();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| weight(&old[b]).total_cmp(&weight(&old[a])).then(a.cmp(&b)));
            let mut chosen: Vec<usize> = order[..end - start].to_vec();
            chosen.sort_unstable();
            let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(chosen.len());
            for &p in &chosen {
                let mut w = vec![Complex64::new(0.0, 0.0); n];
                for v in &cluster {
                    let c = dot(v, &old[p]);
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi += c * vi;
                    }
                }
                for _ in 0..2 {
                    for b in &basis {
                        let c = dot(b, &w);
                        for (wi, bi) in w.iter_mut().zip(b) {
                            *wi -= c * bi;
                        }
                    }
                }
                let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm < 1e-6 {
                    // previous columns barely reach this cluster; keep the solver basis
                    basis.clear();
                    break;
                }
                basis.push(w.iter().map(|z| z / norm).collect());
            }
            if basis.len() == end - start {
                new[start..end].clone_from_slice(&basis);
            }
        }
        start = end;
    }

    // Greedy assignment by descending overlap.
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (a, o) in old.iter().enumerate() {
        for (b, v) in new.iter().enumerate() {
            candidates.push((dot(o, v).norm(), a, b));
        }
    }
    candidates.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut assigned: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for (overlap, a, b) in candidates {
        if assigned[a].is_none() && !used[b] {
            if overlap < MIN_OVERLAP {
                return Err(Error::FrameTracking { t, overlap });
            }
            assigned[a] = Some(b);
            used[b] = true;
        }
    }
    let mut out = ComplexMatrix::zeros(n);
    for a in 0..n {
        let b = assigned[a].expect("complete assignment");
        let ov = dot(&old[a], &new[b]);
        let phase = ov.conj() / ov.norm();
        let col: Vec<Complex64> = new[b].iter().map(|z| z * phase).collect();
        out.set_column(a, &col);
    }
    Ok(UnitaryMatrix::from_matrix_unchecked(out))
}
