use super::*;
use crate::dynamics::{
    AmplitudeDampingTrajectory, DecayModel, DepolarizingTrajectory, ProbabilitySchedule, Trajectory, UnitaryTrajectory,
};
use crate::geometry::{AlphaValue, ProjectiveFamily};
use crate::linalg::{
    fourier_unitary, random_density, random_hermitian, Complex64, ComplexMatrix, DensityMatrix, HermitianOperator,
};

fn h0_h1() -> HermitianOperator {
    let mut m = ComplexMatrix::from_real_diagonal(&[0.0, 0.5, 1.0]);
    m[(0, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 0)] = Complex64::new(1.0, 0.0);
    HermitianOperator::new(m).unwrap()
}

fn h_t() -> HermitianOperator {
    let f = fourier_unitary(3).unwrap();
    HermitianOperator::new(f.conjugate(&ComplexMatrix::from_real_diagonal(&[0.0, 0.5, 1.0]))).unwrap()
}

#[test]
fn saturating_hamiltonian_for_ground_state() {
    let rho0 = DensityMatrix::basis_state(3, 0).unwrap();
    let spec = EnergySpec::new(&[0.0, 0.5, 1.0]).unwrap();
    let h = saturating_hamiltonian(&rho0, &spec).unwrap();
    assert!(h.max_abs_diff(&h_t()) < 1e-12);
    assert!(EnergySpec::new(&[0.5, 0.5, 1.0]).is_err());
    assert!(EnergySpec::new(&[1.0, 1.0, 1.0]).is_err());
    assert_eq!(spec.max_gap(), 1.0);
}

#[test]
fn optimal_hamiltonian_saturates() {
    let rho0 = DensityMatrix::basis_state(3, 0).unwrap();
    for &tau in &[0.1, 1.0, 3.0] {
        let traj = UnitaryTrajectory::new(h_t(), rho0.clone(), tau).unwrap();
        let r = tau_qsl(&traj, 65, None).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-3, "tau={tau}: {r}");
        let c = tau_qsl_closed(vec![(h_t(), tau)], &rho0, tau, 65).unwrap();
        assert!((c.ratio - 1.0).abs() < 1e-3, "closed tau={tau}: {c}");
    }
}

#[test]
fn generic_hamiltonian_does_not_saturate() {
    let rho0 = DensityMatrix::basis_state(3, 0).unwrap();
    for &tau in &[0.5, 1.0, 2.0, 3.0] {
        let traj = UnitaryTrajectory::new(h0_h1(), rho0.clone(), tau).unwrap();
        let r = tau_qsl(&traj, 65, None).unwrap();
        assert!(r.ratio < 1.0 && r.converged, "tau={tau}: {r}");
    }
}

#[test]
fn framed_distance_of_saturating_endpoints() {
    let rho0 = DensityMatrix::basis_state(3, 0).unwrap();
    let traj = UnitaryTrajectory::new(h_t(), rho0, 1.0).unwrap();
    let r = tau_qsl(&traj, 65, None).unwrap();
    // Σ_{i≠j} |E_i - E_j| τ over ordered pairs
    assert!((r.distance - 4.0).abs() < 1e-9, "{}", r.distance);
}

#[test]
fn depolarizing_saturates_both_bounds() {
    for seed in 0..6 {
        let n = 2 + seed as usize % 3;
        let rho0 = random_density(n, 1 + seed as usize % n, seed).unwrap();
        let purity = rho0.purity();
        let traj = DepolarizingTrajectory::new(rho0, ProbabilitySchedule::exponential(1.0).unwrap(), 1.0).unwrap();
        let q = tau_qsl(&traj, 65, None).unwrap();
        assert!((q.ratio - 1.0).abs() < 1e-3, "{q}");
        let a = tau_alpha(&traj, AlphaValue::new(purity, n).unwrap(), 65).unwrap();
        assert!((a.ratio - 1.0).abs() < 1e-3, "{a}");
    }
}

#[test]
fn amplitude_damping_ridge() {
    let m = DecayModel::constant(1.0).unwrap();
    let equal = AmplitudeDampingTrajectory::new(&[0.2, 0.4, 0.4], m, 1.0).unwrap();
    assert!((tau_qsl(&equal, 65, None).unwrap().ratio - 1.0).abs() < 1e-3);
    let unequal = AmplitudeDampingTrajectory::new(&[0.0, 0.7, 0.3], m, 1.0).unwrap();
    assert!(tau_qsl(&unequal, 65, None).unwrap().ratio <= 0.999);
}

#[test]
fn closed_form_agrees_with_generic() {
    for seed in 0..8 {
        let n = 2 + seed as usize % 3;
        let rho0 = random_density(n, 1 + seed as usize % n, seed + 10).unwrap();
        let h = random_hermitian(n, seed + 20);
        let tau = 0.3 + 0.1 * seed as f64;
        let traj = UnitaryTrajectory::new(h.clone(), rho0.clone(), tau).unwrap();
        let generic = tau_qsl(&traj, 65, None).unwrap();
        let closed = tau_qsl_closed(vec![(h, tau)], &rho0, tau, 65).unwrap();
        assert!(
            (generic.bound - closed.bound).abs() <= 1e-4 * generic.bound,
            "{generic}\n{closed}"
        );
    }
}

#[test]
fn pair_purity_is_conserved_by_unitaries() {
    let rho0 = random_density(4, 2, 3).unwrap();
    let traj = UnitaryTrajectory::new(random_hermitian(4, 4), rho0, 2.0).unwrap();
    let f0 = ProjectiveFamily::new(&traj.state(0.0).unwrap(), traj.frame(0.0).as_ref()).unwrap();
    for k in 1..=10 {
        let t = 0.2 * k as f64;
        let ft = ProjectiveFamily::new(&traj.state(t).unwrap(), traj.frame(t).as_ref()).unwrap();
        for ((i, j), m) in f0.pairs() {
            assert!((ft.pair_purity(i, j) - m.purity()).abs() < 1e-10);
        }
    }
}

#[test]
fn saturating_initial_state_construction() {
    let h0 = HermitianOperator::from_real_diagonal(&[0.0, 0.5, 1.0]).unwrap();
    let s = saturating_initial_state(&h0, &[1.0, 0.0, 0.0]).unwrap();
    let f = fourier_unitary(3).unwrap();
    let expected = f.conjugate(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]));
    assert!(s.state.max_abs_diff(&expected) < 1e-12);
    let traj = UnitaryTrajectory::new(h0.clone(), s.state.clone(), 1.0)
        .unwrap()
        .with_frame(s.frame.clone())
        .unwrap();
    let r = tau_qsl(&traj, 65, None).unwrap();
    assert!((r.ratio - 1.0).abs() < 1e-3, "{r}");

    // non-diagonal Hamiltonian and mixed spectrum
    let h = random_hermitian(3, 5);
    let s = saturating_initial_state(&h, &[0.6, 0.3, 0.1]).unwrap();
    let gap = {
        let e = crate::linalg::eig_hermitian(&h).unwrap().values;
        e[2] - e[0]
    };
    let tau = 0.9 * std::f64::consts::PI / gap;
    let traj = UnitaryTrajectory::new(h.clone(), s.state.clone(), tau)
        .unwrap()
        .with_frame(s.frame)
        .unwrap();
    let r = tau_qsl(&traj, 65, None).unwrap();
    assert!((r.ratio - 1.0).abs() < 1e-3, "{r}");

    let mixed = saturating_initial_state(&h, &[1.0 / 3.0; 3]).unwrap();
    let traj = UnitaryTrajectory::new(h, mixed.state, 1.0)
        .unwrap()
        .with_frame(mixed.frame)
        .unwrap();
    assert!(tau_qsl(&traj, 65, None).unwrap().distance < 1e-7);
}

#[test]
fn orthogonal_qubit_flip_saturates() {
    let tau = 1.3;
    let omega = std::f64::consts::PI / (2.0 * tau);
    let h = HermitianOperator::new(ComplexMatrix::from_fn(2, |i, j| {
        if i != j {
            Complex64::new(omega, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
    .unwrap();
    let rho0 = DensityMatrix::basis_state(2, 0).unwrap();
    let r = tau_qsl_orthogonal(vec![(h.clone(), tau)], &rho0, tau, 65).unwrap();
    assert!((r.report.bound - tau).abs() < 1e-3 * tau, "{}", r.report);
    assert!((r.report.distance - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    assert!((r.reference_distance - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(tau_qsl_orthogonal(vec![(h, tau)], &rho0, 0.5 * tau, 65).is_err());
}

#[test]
fn reference_distances() {
    use std::f64::consts::PI;
    assert!((orthogonal_reference_distance(2).unwrap() - 2.0 * PI).abs() < 1e-12);
    assert!((orthogonal_reference_distance(3).unwrap() - 32.0 * PI / 3.0).abs() < 1e-12);
    assert!((orthogonal_reference_distance(4).unwrap() - 30.0 * PI).abs() < 1e-12);
}

#[test]
fn constant_trajectory_has_zero_bound() {
    let rho = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
    let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]).unwrap();
    let traj = UnitaryTrajectory::new(h, rho, 1.0).unwrap();
    let r = tau_alpha(&traj, AlphaValue::one(3).unwrap(), 65).unwrap();
    assert_eq!((r.distance, r.bound), (0.0, 0.0));
    assert!(tau_alpha(&traj, AlphaValue::one(3).unwrap(), 64).is_err());
}

#[test]
fn refinement_never_shortens_paths() {
    let rho0 = random_density(3, 2, 31).unwrap();
    let traj = UnitaryTrajectory::new(random_hermitian(3, 32), rho0, 2.0).unwrap();
    let coarse = tau_qsl_detailed(&traj, 65, None, None, None).unwrap();
    let fine = tau_qsl_detailed(&traj, 129, None, None, None).unwrap();
    let (c, f): (f64, f64) = (coarse.pair_lengths.iter().sum(), fine.pair_lengths.iter().sum());
    assert!(f >= c - 1e-9 || (f - c).abs() < 1e-6 * c);
}
