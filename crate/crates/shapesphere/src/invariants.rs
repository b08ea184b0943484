//! Invariants of shape curves: speed and direction data, geodesic
//! curvature, and the basic 6-tuple feeding the reconstruction.
//!
//! The 6-tuple (u0, u1, w0, w1, K0, K1) collects, at one curve point, the
//! shape potential with its first two arc-length derivatives along the
//! curve (u), the normal derivative with its arc-length derivative (w),
//! and the geodesic curvature with its arc-length derivative (K). All six
//! are intrinsic to the unoriented-time-free curve; together with the
//! Siegel quotient S = w/K they are the whole input of the inverse
//! problem. The reductions here rewrite the arc-length derivatives in
//! terms of instantaneous state data, so no differentiation along the
//! trajectory is ever needed; quadrature fits along integrated
//! trajectories validate them in the acceptance suite.

use crate::consts::{REGULARITY_TOL, SPEED_TOL};
use crate::error::{Error, Result};
use crate::reduced::{EnergyMomentum, ModuliState};
use crate::shape_geometry::{
    frame_transform, DirectionElement, PotentialJet, PotentialSource, ShapePoint,
};

/// Local data of a shape curve at a point: speed, direction, and their
/// derivatives. `v1` is dv/dt; the primes are arc-length derivatives of
/// the direction components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeJet {
    pub point: ShapePoint,
    pub v: f64,
    pub direction: DirectionElement,
    pub v1: f64,
    pub j_phi_prime: f64,
    pub j_theta_prime: f64,
}

/// The basic 6-tuple at a regular curve point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicSixTuple {
    pub u0: f64,
    pub u1: f64,
    pub w0: f64,
    pub w1: f64,
    pub k0: f64,
    pub k1: f64,
}

impl BasicSixTuple {
    pub fn to_array(&self) -> [f64; 6] {
        [self.u0, self.u1, self.w0, self.w1, self.k0, self.k1]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        BasicSixTuple {
            u0: a[0],
            u1: a[1],
            w0: a[2],
            w1: a[3],
            k0: a[4],
            k1: a[5],
        }
    }
}

/// Leading coefficients of the Siegel function S(s) = w(s)/K(s) at s = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiegelValue {
    pub s0: f64,
    pub s1: f64,
}

impl SiegelValue {
    /// Siegel coefficients determined by the 6-tuple alone: s0 = w0/K0,
    /// s1 = (K0 w1 - K1 w0)/K0^2. For records arriving without dynamical
    /// context (an externally supplied 6-tuple rather than one computed
    /// by [`basic_six_tuple`]).
    pub fn of(six: &BasicSixTuple) -> Result<Self> {
        if six.k0 == 0.0 {
            return Err(Error::Degenerate(
                "vanishing curvature leaves the Siegel function undefined".into(),
            ));
        }
        Ok(SiegelValue {
            s0: six.w0 / six.k0,
            s1: (six.k0 * six.w1 - six.k1 * six.w0) / (six.k0 * six.k0),
        })
    }
}

/// The temporal data the reconstruction solves for: hyperradius, its time
/// derivative, and the shape speed at the marked curve point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicTriple {
    pub rho0: f64,
    pub rho1: f64,
    pub v0: f64,
}

/// Speed and direction of the shape motion. Errors at a cusp (v = 0).
pub fn shape_kinematics(s: &ModuliState) -> Result<(DirectionElement, f64)> {
    DirectionElement::from_velocity(s.phi, s.phi_dot, s.theta_dot)
}

/// Geodesic curvature from the fundamental formula
/// K* = 4 w0/(rho^3 v^2) - 2 omega/(rho^2 v).
pub fn curvature_dynamical(rho: f64, v: f64, w0: f64, omega: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("hyperradius {rho} not positive")));
    }
    if v < SPEED_TOL {
        return Err(Error::Cusp { speed: v });
    }
    Ok(4.0 * w0 / (rho.powi(3) * v * v) - 2.0 * omega / (rho * rho * v))
}

/// Geodesic curvature from the time parametrization:
/// K* = [cos(phi) theta' (v^2 + phi'^2) + sin(phi)(phi' theta'' -
/// theta' phi'')] / v^3, with the caller supplying the second
/// derivatives (e.g. from the reduced equations).
pub fn curvature_temporal(s: &ModuliState, phi_ddot: f64, theta_ddot: f64) -> Result<f64> {
    let v = s.speed();
    if v < SPEED_TOL {
        return Err(Error::Cusp { speed: v });
    }
    let num = s.phi.cos() * s.theta_dot * (v * v + s.phi_dot * s.phi_dot)
        + s.phi.sin() * (s.phi_dot * theta_ddot - s.theta_dot * phi_ddot);
    Ok(num / v.powi(3))
}

/// Geodesic curvature written purely in direction data:
/// K = J_theta (1 + J_phi^2) cos(phi) + (J_phi J'_theta
/// - J_theta J'_phi) sin(phi). Used as the independent cross-check of
/// the dynamical formula.
pub fn curvature_intrinsic(
    phi: f64,
    d: &DirectionElement,
    j_phi_prime: f64,
    j_theta_prime: f64,
) -> f64 {
    d.j_theta * (1.0 + d.j_phi * d.j_phi) * phi.cos()
        + (d.j_phi * j_theta_prime - d.j_theta * j_phi_prime) * phi.sin()
}

/// Covariant Hessian of the potential on the unit sphere, contracted with
/// the tangent T = (J_phi, J_theta) and the normal
/// N = (-sin(phi) J_theta, J_phi/sin(phi)): returns (Hess(T,T),
/// Hess(T,N)). The Christoffel corrections are
/// H_pt = U_pt - cot(phi) U_t and H_tt = U_tt + sin(phi)cos(phi) U_p.
fn frame_hessian(phi: f64, d: &DirectionElement, jet: &PotentialJet) -> (f64, f64) {
    let sp = phi.sin();
    let cp = phi.cos();
    let h_pp = jet.u_phiphi;
    let h_pt = jet.u_phitheta - (cp / sp) * jet.u_theta;
    let h_tt = jet.u_thetatheta + sp * cp * jet.u_phi;
    let (jp, jt) = (d.j_phi, d.j_theta);
    let tt = h_pp * jp * jp + 2.0 * h_pt * jp * jt + h_tt * jt * jt;
    let tn = -sp * jp * jt * h_pp + h_pt * (jp * jp / sp - sp * jt * jt) + h_tt * jp * jt / sp;
    (tt, tn)
}

/// du1/ds along the curve: tau1 = K0 w0 + Hess(T,T) (rotating the frame
/// trades the gradient for the curvature times the normal derivative).
pub fn tau1(phi: f64, d: &DirectionElement, jet: &PotentialJet, w0: f64, k0: f64) -> f64 {
    let (tt, _) = frame_hessian(phi, d, jet);
    k0 * w0 + tt
}

/// dw0/ds along the curve: w1 = -K0 u1 + Hess(T,N). This is the
/// corrected form of the printed reduction (see [`w1_printed_form`]); the
/// two differ generically and the quadrature oracle sides with this one.
pub fn w1_reduced(phi: f64, d: &DirectionElement, jet: &PotentialJet, u1: f64, k0: f64) -> f64 {
    let (_, tn) = frame_hessian(phi, d, jet);
    -k0 * u1 + tn
}

/// The printed closed form of w1, kept verbatim for comparison. Its
/// leading term expands -K0 u1 through the curvature formula; the second
/// derivative terms mix the Hessian entries in a pattern that does not
/// reproduce d(Uν)/ds away from symmetric states.
#[allow(clippy::too_many_arguments)]
pub fn w1_printed_form(
    phi: f64,
    d: &DirectionElement,
    jet: &PotentialJet,
    rho: f64,
    v: f64,
    omega: f64,
    u1: f64,
    w0: f64,
) -> f64 {
    let sp = phi.sin();
    let cp = phi.cos();
    let (jp, jt) = (d.j_phi, d.j_theta);
    (2.0 * u1 / (rho * rho * v)) * (omega - 2.0 * w0 / (rho * v))
        + jet.u_theta * cp * (jp * jp + jt * jt)
        + (jet.u_thetatheta / sp - jet.u_phitheta * sp) * jt * jt
        + (jet.u_phi * cp + jet.u_thetatheta / sp - jet.u_phiphi * sp) * jp * jt
}

/// dK0/ds along the curve, solved from differentiating the fundamental
/// curvature formula:
/// K1 = -4(2 K0 u1 rho^2 v - w1 rho^2 v - w0 rho rho' + 2 omega u1)
///      / (rho^5 v^3).
pub fn k1_reduced(
    rho: f64,
    rho1: f64,
    v0: f64,
    omega: f64,
    u1: f64,
    w0: f64,
    w1: f64,
    k0: f64,
) -> f64 {
    let r2v = rho * rho * v0;
    -4.0 * (2.0 * k0 * u1 * r2v - w1 * r2v - w0 * rho * rho1 + 2.0 * omega * u1)
        / (rho.powi(5) * v0.powi(3))
}

/// Full local jet of the shape curve through a moduli state: speed with
/// its time derivative and the arc-length derivatives of the direction.
pub fn shape_jet(
    s: &ModuliState,
    omega: f64,
    potential: &impl PotentialSource,
) -> Result<ShapeJet> {
    let (direction, v) = shape_kinematics(s)?;
    let point = s.shape();
    let jet = potential.jet(point)?;
    let (u1, _) = frame_transform(point, direction, &jet)?;
    let rho3 = s.rho.powi(3);
    let v1 = 2.0 * (-s.rho * s.rho * v * s.rho_dot + 2.0 * u1) / rho3;

    let sp = s.phi.sin();
    let f0 = (2.0 * s.phi).sin();
    let g0 = sp * sp;
    let (jp, jt) = (direction.j_phi, direction.j_theta);
    let r2v = s.rho * s.rho * v;
    let r3v2 = rho3 * v * v;
    let j_phi_prime =
        0.5 * f0 * jt * jt + 2.0 * omega * sp * jt / r2v + 4.0 * (jet.u_phi - u1 * jp) / r3v2;
    let j_theta_prime = -(f0 / g0) * jp * jt - 2.0 * omega * sp * jp / (g0 * r2v)
        + 4.0 * (jet.u_theta / g0 - u1 * jt) / r3v2;
    Ok(ShapeJet {
        point,
        v,
        direction,
        v1,
        j_phi_prime,
        j_theta_prime,
    })
}

/// The basic 6-tuple and the Siegel coefficients at a moduli state.
/// Errors classify the degeneracy: a cusp when the shape speed vanishes,
/// a singular point when the normal derivative w0 vanishes against the
/// gradient scale or the curvature K0 vanishes against its own summands
/// (both are divided by downstream).
pub fn basic_six_tuple(
    s: &ModuliState,
    omega: f64,
    potential: &impl PotentialSource,
) -> Result<(BasicSixTuple, SiegelValue)> {
    let (direction, v) = shape_kinematics(s)?;
    let point = s.shape();
    let jet = potential.jet(point)?;
    let (u1, w0) = frame_transform(point, direction, &jet)?;
    let k0 = curvature_dynamical(s.rho, v, w0, omega)?;

    let grad = (u1 * u1 + w0 * w0).sqrt();
    let k0_scale = (4.0 * w0 / (s.rho.powi(3) * v * v)).abs()
        + (2.0 * omega / (s.rho * s.rho * v)).abs();
    if w0.abs() <= REGULARITY_TOL * grad || k0.abs() <= REGULARITY_TOL * k0_scale {
        return Err(Error::SingularPoint {
            speed: v,
            normal: w0,
            curvature: k0,
        });
    }

    let w1 = w1_reduced(s.phi, &direction, &jet, u1, k0);
    let k1 = k1_reduced(s.rho, s.rho_dot, v, omega, u1, w0, w1, k0);
    let six = BasicSixTuple {
        u0: jet.u,
        u1,
        w0,
        w1,
        k0,
        k1,
    };
    let sv = SiegelValue {
        s0: w0 / k0,
        s1: (k0 * w1 - k1 * w0) / (k0 * k0),
    };
    Ok((six, sv))
}

/// The Siegel quotient S = w/K.
pub fn siegel(w: f64, k: f64) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::Degenerate(
            "vanishing curvature leaves the Siegel function undefined".into(),
        ));
    }
    Ok(w / k)
}

/// Recover the conserved level from the 6-tuple and the temporal triple:
///   omega = 2 w0/(rho0 v0) - K0 rho0^2 v0 / 2
///   h = rho1^2/2 + rho0^2 v0^2/8 + 2 w0^2/(rho0^4 v0^2)
///       - (w0 K0 + u0)/rho0 + K0^2 rho0^2 v0^2/8
/// (the energy integral with omega eliminated through the first line).
/// Callers must pass a regular 6-tuple and rho0, v0 > 0.
pub fn energy_momentum_from_invariants(
    triple: &BasicTriple,
    six: &BasicSixTuple,
) -> EnergyMomentum {
    let (r, z, y) = (triple.rho0, triple.rho1, triple.v0);
    let omega = 2.0 * six.w0 / (r * y) - 0.5 * six.k0 * r * r * y;
    let ry2 = r * r * y * y;
    let h = 0.5 * z * z + ry2 / 8.0 + 2.0 * six.w0 * six.w0 / (r * r * ry2)
        - (six.w0 * six.k0 + six.u0) / r
        + six.k0 * six.k0 * ry2 / 8.0;
    EnergyMomentum { h, omega }
}
