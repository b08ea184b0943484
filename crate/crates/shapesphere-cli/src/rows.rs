//! Builds CSV rows from a moduli trajectory.

use crate::io::TrajectoryRow;
use shapesphere::invariants::{
    curvature_temporal, energy_momentum_from_invariants, k1_reduced, shape_kinematics,
    w1_reduced, BasicSixTuple, BasicTriple,
};
use shapesphere::reduced::{energy_level, reduced_rhs, ModuliState, ModuliTrajectory};
use shapesphere::shape_geometry::{frame_transform, MassDistribution, PotentialSource};

/// One row per sample. `alpha` is the rotation-angle series on the
/// trajectory grid (from the projection for full runs, from quadrature
/// of the reconstruction rate for reduced runs).
pub fn invariant_rows(
    traj: &ModuliTrajectory,
    alpha: &[f64],
    md: &MassDistribution,
) -> Vec<TrajectoryRow> {
    let mut rows = Vec::with_capacity(traj.states.len());
    for (k, st) in traj.states.iter().enumerate() {
        let mut row = TrajectoryRow {
            t: traj.t[k],
            rho: st.rho,
            phi: st.phi,
            theta: st.theta,
            rho_dot: st.rho_dot,
            phi_dot: st.phi_dot,
            theta_dot: st.theta_dot,
            alpha: alpha.get(k).copied().unwrap_or(f64::NAN),
            s: traj.arc_length[k],
            v: st.speed(),
            u_star: f64::NAN,
            u_tau: f64::NAN,
            u_nu: f64::NAN,
            k_star: f64::NAN,
            siegel: f64::NAN,
            h_drift: f64::NAN,
            omega_check: f64::NAN,
        };
        fill_invariant_columns(&mut row, st, traj.omega, traj.h, md);
        rows.push(row);
    }
    rows
}

/// Filled left to right; each failure (collision neighborhood, chart
/// pole, cusp) leaves its column and everything to the right NaN.
///
/// K_star is the curvature measured from the time parametrization, so
/// omega_check (the momentum recovered through the curvature identity)
/// is a genuine consistency probe of the run, not an echo of its
/// parameter.
fn fill_invariant_columns(
    row: &mut TrajectoryRow,
    st: &ModuliState,
    omega: f64,
    h: f64,
    md: &MassDistribution,
) {
    let Ok(jet) = md.jet(st.shape()) else { return };
    row.u_star = jet.u;
    if let Ok(level) = energy_level(st, omega, md) {
        row.h_drift = level - h;
    }
    let Ok((direction, v)) = shape_kinematics(st) else {
        return;
    };
    let Ok((u_tau, u_nu)) = frame_transform(st.shape(), direction, &jet) else {
        return;
    };
    row.u_tau = u_tau;
    row.u_nu = u_nu;
    let Ok(k_star) = reduced_rhs(st, omega, h, md)
        .and_then(|a| curvature_temporal(st, a.phi_ddot, a.theta_ddot))
    else {
        return;
    };
    row.k_star = k_star;
    row.siegel = u_nu / k_star;
    let w1 = w1_reduced(st.phi, &direction, &jet, u_tau, k_star);
    let k1 = k1_reduced(st.rho, st.rho_dot, v, omega, u_tau, u_nu, w1, k_star);
    let six = BasicSixTuple {
        u0: jet.u,
        u1: u_tau,
        w0: u_nu,
        w1,
        k0: k_star,
        k1,
    };
    let triple = BasicTriple {
        rho0: st.rho,
        rho1: st.rho_dot,
        v0: v,
    };
    row.omega_check = energy_momentum_from_invariants(&triple, &six).omega;
}
