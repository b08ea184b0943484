//! The circle fibration of centered configurations over the moduli space.
//!
//! A configuration determines two mass-weighted Jacobi vectors, read as a
//! pair of complex numbers (z1, z2) with |z1|^2 + |z2|^2 = I. The map
//!
//!   n1 = |z1|^2 - |z2|^2,   n2 + i n3 = 2 conj(z1) z2
//!
//! sends the pair to a vector in R^3 of length rho^2 = I; its spherical
//! angles are the shape coordinates (phi from the vertical component,
//! theta around the equator) and the circle lost in the map is the
//! rotation angle alpha of the triangle. This module computes the
//! projection with its time derivatives and inverts it.
//!
//! The weighted Jacobi vectors are z1 from body 1 against the (2,3)
//! barycenter and z2 along body 3 minus body 2; this pairing is what puts
//! the (2,3) collision at longitude theta = 0, where the shape potential
//! expects it.

use nalgebra::{Complex, Vector2};
use std::f64::consts::{FRAC_PI_4, PI, TAU};

use crate::consts::{POLE_SIN_PHI_TOL, RHO_COLLAPSE_TOL};
use crate::error::{Error, Result};
use crate::kinematics::{kinematic_summary, FullTrajectory, ModuliPoint, PlanarConfig};
use crate::reduced::{ModuliState, ModuliTrajectory};
use crate::shape_geometry::MassDistribution;

type C64 = Complex<f64>;

fn cvec(v: &Vector2<f64>) -> C64 {
    C64::new(v.x, v.y)
}

fn vec2(z: C64) -> Vector2<f64> {
    Vector2::new(z.re, z.im)
}

/// sqrt(M1), sqrt(M2) and m2 + m3, where M1 = m2 m3/(m2+m3) weights the
/// (2,3) relative vector and M2 = m1 (m2+m3)/mbar the vector from the
/// (2,3) barycenter to body 1. These weights make |z1|^2 + |z2|^2 = I.
fn jacobi_factors(md: &MassDistribution) -> (f64, f64, f64) {
    let [m1, m2, m3] = md.masses;
    let m23 = m2 + m3;
    ((m2 * m3 / m23).sqrt(), (m1 * m23 / md.mbar).sqrt(), m23)
}

/// Weighted Jacobi vectors and their velocities as complex numbers.
fn jacobi_pair(c: &PlanarConfig, md: &MassDistribution) -> (C64, C64, C64, C64) {
    let (rm1, rm2, m23) = jacobi_factors(md);
    let [_, m2, m3] = md.masses;
    let cm23 = (m2 * c.positions[1] + m3 * c.positions[2]) / m23;
    let vm23 = (m2 * c.velocities[1] + m3 * c.velocities[2]) / m23;
    let z1 = rm2 * cvec(&(c.positions[0] - cm23));
    let z2 = rm1 * cvec(&(c.positions[2] - c.positions[1]));
    let z1_dot = rm2 * cvec(&(c.velocities[0] - vm23));
    let z2_dot = rm1 * cvec(&(c.velocities[2] - c.velocities[1]));
    (z1, z2, z1_dot, z2_dot)
}

/// Positions recovered from the weighted Jacobi vectors; the map is
/// linear, so it converts velocity pairs the same way.
fn positions_from_jacobi(z1: C64, z2: C64, md: &MassDistribution) -> [Vector2<f64>; 3] {
    let (rm1, rm2, m23) = jacobi_factors(md);
    let [m1, m2, m3] = md.masses;
    let a1 = (m23 / (md.mbar * rm2)) * z1;
    let rel = z2 / rm1;
    let cm23 = -(m1 / m23) * a1;
    let a2 = cm23 - (m3 / m23) * rel;
    let a3 = cm23 + (m2 / m23) * rel;
    [vec2(a1), vec2(a2), vec2(a3)]
}

/// Canonical unit section of the fiber over a shape point: a pair
/// (zeta1, zeta2) with |zeta1|^2 + |zeta2|^2 = 1 projecting onto
/// (sin phi cos theta, sin phi sin theta, cos phi). It uses half angles,
/// so zeta(phi, theta + 2 pi) = -zeta(phi, theta); the sign is absorbed
/// by alpha -> alpha + pi (the deck transformation of the fibration).
fn section(phi: f64, theta: f64) -> (C64, C64) {
    let s = (0.5 * phi + FRAC_PI_4).sin();
    let c = (0.5 * phi + FRAC_PI_4).cos();
    let (sh, ch) = (0.5 * theta).sin_cos();
    (C64::new(s * ch, -c * sh), C64::new(s * sh, c * ch))
}

/// Partial derivatives of the section: ((d zeta1/d phi, d zeta2/d phi),
/// (d zeta1/d theta, d zeta2/d theta)).
#[allow(clippy::type_complexity)]
fn section_partials(phi: f64, theta: f64) -> ((C64, C64), (C64, C64)) {
    let s = (0.5 * phi + FRAC_PI_4).sin();
    let c = (0.5 * phi + FRAC_PI_4).cos();
    let (sh, ch) = (0.5 * theta).sin_cos();
    let z1_phi = C64::new(0.5 * c * ch, 0.5 * s * sh);
    let z2_phi = C64::new(0.5 * c * sh, -0.5 * s * ch);
    let z1_theta = C64::new(-0.5 * s * sh, -0.5 * c * ch);
    let z2_theta = C64::new(0.5 * s * ch, -0.5 * c * sh);
    ((z1_phi, z2_phi), (z1_theta, z2_theta))
}

/// Full decomposition of a configuration: moduli state, rotation angle
/// alpha in [0, 2 pi) and its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfProjection {
    pub state: ModuliState,
    pub alpha: f64,
    pub alpha_dot: f64,
}

impl HopfProjection {
    pub fn point(&self) -> ModuliPoint {
        ModuliPoint {
            rho: self.state.rho,
            shape: self.state.shape(),
        }
    }
}

/// Project a configuration to the moduli chart. With theta reduced to
/// [0, 2 pi) the section fixes alpha uniquely in [0, 2 pi), so the
/// decomposition is exactly invertible (no deck ambiguity is left at a
/// single configuration; it reappears only when unwrapping theta
/// continuously along a trajectory).
///
/// alpha_dot is computed by differentiating the decomposition itself, not
/// from the angular momentum; the identity omega = rho^2 (alpha_dot
/// - cos(phi) theta_dot / 2) is a consequence checked in tests.
pub fn hopf_project(c: &PlanarConfig, md: &MassDistribution) -> Result<HopfProjection> {
    let (z1, z2, z1_dot, z2_dot) = jacobi_pair(c, md);
    let rho2 = z1.norm_sqr() + z2.norm_sqr();
    let rho = rho2.sqrt();
    if rho < RHO_COLLAPSE_TOL {
        return Err(Error::Domain(
            "configuration is at the total collision; it has no shape".into(),
        ));
    }
    let n1 = z1.norm_sqr() - z2.norm_sqr();
    let w = 2.0 * z1.conj() * z2;
    let cos_phi = (w.im / rho2).clamp(-1.0, 1.0);
    let phi = cos_phi.acos();
    let sin_phi = phi.sin();
    if sin_phi < POLE_SIN_PHI_TOL {
        return Err(Error::ChartSingularity { sin_phi });
    }
    let theta = w.re.atan2(n1).rem_euclid(TAU);

    let p1 = (z1.conj() * z1_dot).re;
    let p2 = (z2.conj() * z2_dot).re;
    let rho_dot = (p1 + p2) / rho;
    let n1_dot = 2.0 * (p1 - p2);
    let w_dot = 2.0 * (z1_dot.conj() * z2 + z1.conj() * z2_dot);
    let phi_dot = (2.0 * rho * rho_dot * cos_phi - w_dot.im) / (rho2 * sin_phi);
    let theta_dot = (n1 * w_dot.re - w.re * n1_dot) / (n1 * n1 + w.re * w.re);

    // z = rho e^{i alpha} zeta and |zeta| = 1 give
    // z1 conj(zeta1) + z2 conj(zeta2) = rho e^{i alpha}.
    let (zeta1, zeta2) = section(phi, theta);
    let w_alpha = z1 * zeta1.conj() + z2 * zeta2.conj();
    let alpha = w_alpha.arg().rem_euclid(TAU);
    let ((z1_phi, z2_phi), (z1_theta, z2_theta)) = section_partials(phi, theta);
    let zeta1_dot = z1_phi * phi_dot + z1_theta * theta_dot;
    let zeta2_dot = z2_phi * phi_dot + z2_theta * theta_dot;
    let w_alpha_dot = z1_dot * zeta1.conj()
        + z1 * zeta1_dot.conj()
        + z2_dot * zeta2.conj()
        + z2 * zeta2_dot.conj();
    let alpha_dot = (w_alpha_dot / w_alpha).im;

    Ok(HopfProjection {
        state: ModuliState {
            rho,
            phi,
            theta,
            rho_dot,
            phi_dot,
            theta_dot,
        },
        alpha,
        alpha_dot,
    })
}

/// Positions of the configuration over a moduli point at rotation angle
/// alpha. Barycentric by construction; the moment of inertia is rho^2.
pub fn hopf_lift(alpha: f64, m: &ModuliPoint, md: &MassDistribution) -> Result<[Vector2<f64>; 3]> {
    if !(m.rho > 0.0) {
        return Err(Error::Domain(format!(
            "hyperradius must be positive, got {}",
            m.rho
        )));
    }
    let (zeta1, zeta2) = section(m.shape.phi, m.shape.theta);
    let g = C64::from_polar(m.rho, alpha);
    Ok(positions_from_jacobi(g * zeta1, g * zeta2, md))
}

/// Lift a moduli state with velocities. The rotation rate is not free:
/// on the (h, omega) level it is alpha_dot = omega/rho^2
/// + cos(phi) theta_dot / 2, and the lifted velocities use that value.
pub fn hopf_lift_state(
    s: &ModuliState,
    alpha: f64,
    omega: f64,
    md: &MassDistribution,
) -> Result<PlanarConfig> {
    s.validate()?;
    let (zeta1, zeta2) = section(s.phi, s.theta);
    let ((z1_phi, z2_phi), (z1_theta, z2_theta)) = section_partials(s.phi, s.theta);
    let zeta1_dot = z1_phi * s.phi_dot + z1_theta * s.theta_dot;
    let zeta2_dot = z2_phi * s.phi_dot + z2_theta * s.theta_dot;
    let alpha_dot = omega / (s.rho * s.rho) + 0.5 * s.phi.cos() * s.theta_dot;
    let g = C64::from_polar(s.rho, alpha);
    let g_dot = C64::new(s.rho_dot, s.rho * alpha_dot) * C64::from_polar(1.0, alpha);
    let positions = positions_from_jacobi(g * zeta1, g * zeta2, md);
    let velocities =
        positions_from_jacobi(g_dot * zeta1 + g * zeta1_dot, g_dot * zeta2 + g * zeta2_dot, md);
    PlanarConfig::new(positions, velocities, md)
}

/// Project every sample of a full-space trajectory, unwrapping theta and
/// alpha into continuous curves. Crossing the theta cut adds 2 pi k to
/// theta; each full turn flips the sign of the half-angle section, so
/// alpha picks up pi when k is odd (the deck transformation), after which
/// alpha itself is unwrapped. Sampling must be fine enough that neither
/// angle moves by more than pi between samples.
///
/// Returns the moduli trajectory (h and omega from the first sample, arc
/// length by trapezoid quadrature of the shape speed) and the rotation
/// angle samples.
pub fn project_trajectory(
    traj: &FullTrajectory,
    md: &MassDistribution,
) -> Result<(ModuliTrajectory, Vec<f64>)> {
    if traj.states.is_empty() {
        return Err(Error::Domain("cannot project an empty trajectory".into()));
    }
    let summary = kinematic_summary(&traj.states[0], md);
    let mut states: Vec<ModuliState> = Vec::with_capacity(traj.states.len());
    let mut alpha: Vec<f64> = Vec::with_capacity(traj.states.len());
    for c in &traj.states {
        let p = hopf_project(c, md)?;
        let mut st = p.state;
        let mut a = p.alpha;
        if let (Some(prev), Some(&prev_a)) = (states.last(), alpha.last()) {
            let turns = ((prev.theta - st.theta) / TAU).round();
            st.theta += TAU * turns;
            a += PI * turns.rem_euclid(2.0);
            a += TAU * ((prev_a - a) / TAU).round();
        }
        states.push(st);
        alpha.push(a);
    }
    let mut arc = Vec::with_capacity(states.len());
    arc.push(0.0);
    for k in 1..states.len() {
        let dt = traj.t[k] - traj.t[k - 1];
        arc.push(arc[k - 1] + 0.5 * dt * (states[k].speed() + states[k - 1].speed()));
    }
    Ok((
        ModuliTrajectory {
            t: traj.t.clone(),
            states,
            arc_length: arc,
            omega: summary.omega,
            h: summary.energy,
            halt: traj.halt,
        },
        alpha,
    ))
}
