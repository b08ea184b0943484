//! Mass-dependent geometry of the shape sphere.
//!
//! The sphere carries three marked points on its equator, one per binary
//! collision, whose longitudes depend only on the mass ratios. The shape
//! potential U* is a sum of three inverse-half-power terms anchored at
//! those points. Everything downstream (reduced dynamics, invariants,
//! reconstruction) consumes the potential through its 2-jet.

use crate::consts::{COLLISION_GAP_TOL, POLE_SIN_PHI_TOL, SPEED_TOL};
use crate::error::{Error, Result};

/// Point on the shape sphere. `phi` is the colatitude in (0, pi) for chart
/// validity (the poles are reachable as limits but longitude directions
/// degenerate there), `theta` the longitude. The equator phi = pi/2 is the
/// locus of collinear shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapePoint {
    pub phi: f64,
    pub theta: f64,
}

impl ShapePoint {
    pub fn new(phi: f64, theta: f64) -> Self {
        ShapePoint { phi, theta }
    }

    /// sin(phi) guarded by the pole tolerance. Any operation dividing by
    /// sin(phi) goes through this.
    pub fn sin_phi_checked(&self) -> Result<f64> {
        let s = self.phi.sin();
        if s.abs() < POLE_SIN_PHI_TOL {
            return Err(Error::ChartSingularity { sin_phi: s });
        }
        Ok(s)
    }
}

/// Unit direction at a point of the sphere: components of d/ds in the
/// (phi, theta) chart, normalized so j_phi^2 + sin^2(phi) j_theta^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionElement {
    pub j_phi: f64,
    pub j_theta: f64,
}

impl DirectionElement {
    pub fn new(j_phi: f64, j_theta: f64) -> Self {
        DirectionElement { j_phi, j_theta }
    }

    /// Direction of the shape velocity (phi_dot, theta_dot) at colatitude
    /// phi. The speed v = sqrt(phi_dot^2 + sin^2(phi) theta_dot^2) must be
    /// positive: at a cusp there is no direction to speak of.
    pub fn from_velocity(phi: f64, phi_dot: f64, theta_dot: f64) -> Result<(Self, f64)> {
        let s = phi.sin();
        let v = (phi_dot * phi_dot + s * s * theta_dot * theta_dot).sqrt();
        if v < SPEED_TOL {
            return Err(Error::Cusp { speed: v });
        }
        Ok((
            DirectionElement {
                j_phi: phi_dot / v,
                j_theta: theta_dot / v,
            },
            v,
        ))
    }

    /// Deviation of j_phi^2 + sin^2(phi) j_theta^2 from 1.
    pub fn norm_gap(&self, phi: f64) -> f64 {
        let s = phi.sin();
        self.j_phi * self.j_phi + s * s * self.j_theta * self.j_theta - 1.0
    }
}

/// 2-jet of the shape potential at a point: value, first and second
/// partials in the (phi, theta) chart. The mixed partial is stored once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialJet {
    pub u: f64,
    pub u_phi: f64,
    pub u_theta: f64,
    pub u_phiphi: f64,
    pub u_phitheta: f64,
    pub u_thetatheta: f64,
}

/// Three positive masses with the derived shape-sphere geometry.
///
/// `mu` are the normalized masses m_i / mbar. `beta` are the angles with
/// cos(beta_i) = (mu_j mu_k - mu_i) / ((1 - mu_j)(1 - mu_k)) for cyclic
/// (i, j, k); they sum to 2 pi and are the arc separations between the
/// collision longitudes. `theta_collision` places the binary-collision
/// points on the equator as (0, beta_3, -beta_2); index i marks the
/// collision of the pair not containing body i.
#[derive(Debug, Clone, PartialEq)]
pub struct MassDistribution {
    pub masses: [f64; 3],
    pub mu: [f64; 3],
    pub mbar: f64,
    pub beta: [f64; 3],
    pub theta_collision: [f64; 3],
    strength: [f64; 3],
}

impl MassDistribution {
    pub fn new(masses: [f64; 3]) -> Result<Self> {
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::Domain(format!(
                "masses must be positive and finite, got {masses:?}"
            )));
        }
        let mbar = masses[0] + masses[1] + masses[2];
        let mu = [masses[0] / mbar, masses[1] / mbar, masses[2] / mbar];

        let mut beta = [0.0; 3];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            let c = (mu[j] * mu[k] - mu[i]) / ((1.0 - mu[j]) * (1.0 - mu[k]));
            // |c| <= 1 holds for all positive masses; rounding can push it
            // a few ulps over.
            beta[i] = c.clamp(-1.0, 1.0).acos();
        }
        let theta_collision = [0.0, beta[2], -beta[1]];

        let prefactor = mbar.powf(2.5);
        let mut strength = [0.0; 3];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            let mu_star = 0.5 * (1.0 - mu[i]);
            strength[i] = prefactor * (mu[j] * mu[k]).powf(1.5) / mu_star.sqrt();
        }

        Ok(MassDistribution {
            masses,
            mu,
            mbar,
            beta,
            theta_collision,
            strength,
        })
    }

    /// Shape potential U* with first and second partials.
    ///
    /// Each summand is c_i / sqrt(d_i) with d_i = 1 - sin(phi) cos(theta -
    /// theta_i); d_i vanishes exactly at collision point i, and the jet is
    /// refused once d_i falls under the collision tolerance. `index` in the
    /// error is the 1-based collision label.
    pub fn potential_jet(&self, p: ShapePoint) -> Result<PotentialJet> {
        let sp = p.phi.sin();
        let cp = p.phi.cos();

        let mut jet = PotentialJet {
            u: 0.0,
            u_phi: 0.0,
            u_theta: 0.0,
            u_phiphi: 0.0,
            u_phitheta: 0.0,
            u_thetatheta: 0.0,
        };

        for i in 0..3 {
            let dt = p.theta - self.theta_collision[i];
            let cdt = dt.cos();
            let sdt = dt.sin();
            let d = 1.0 - sp * cdt;
            if d < COLLISION_GAP_TOL {
                return Err(Error::CollisionSingularity {
                    index: i + 1,
                    gap: d,
                });
            }
            let c = self.strength[i];
            let dm12 = 1.0 / d.sqrt();
            let dm32 = dm12 / d;
            let dm52 = dm32 / d;

            let d_p = -cp * cdt;
            let d_t = sp * sdt;
            let d_pp = sp * cdt;
            let d_pt = cp * sdt;
            let d_tt = sp * cdt;

            jet.u += c * dm12;
            jet.u_phi += -0.5 * c * dm32 * d_p;
            jet.u_theta += -0.5 * c * dm32 * d_t;
            jet.u_phiphi += c * (0.75 * dm52 * d_p * d_p - 0.5 * dm32 * d_pp);
            jet.u_phitheta += c * (0.75 * dm52 * d_p * d_t - 0.5 * dm32 * d_pt);
            jet.u_thetatheta += c * (0.75 * dm52 * d_t * d_t - 0.5 * dm32 * d_tt);
        }
        Ok(jet)
    }
}

/// The reduced dynamics and the invariants only see the potential through
/// its 2-jet, so anything that can produce one plugs in here. The Newtonian
/// three-body potential is the real implementor; constant potentials serve
/// as test doubles.
pub trait PotentialSource {
    fn jet(&self, p: ShapePoint) -> Result<PotentialJet>;
}

impl PotentialSource for MassDistribution {
    fn jet(&self, p: ShapePoint) -> Result<PotentialJet> {
        self.potential_jet(p)
    }
}

/// Constant shape potential; all derivatives vanish.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPotential(pub f64);

impl PotentialSource for ConstantPotential {
    fn jet(&self, _p: ShapePoint) -> Result<PotentialJet> {
        Ok(PotentialJet {
            u: self.0,
            u_phi: 0.0,
            u_theta: 0.0,
            u_phiphi: 0.0,
            u_phitheta: 0.0,
            u_thetatheta: 0.0,
        })
    }
}

/// Tangential and normal derivative of the potential along a direction:
/// the gradient (U_phi, U_theta / sin phi) rotated into the frame spanned
/// by the direction and its quarter-turn.
pub fn frame_transform(
    p: ShapePoint,
    d: DirectionElement,
    jet: &PotentialJet,
) -> Result<(f64, f64)> {
    let s = p.sin_phi_checked()?;
    let u_tau = d.j_phi * jet.u_phi + d.j_theta * jet.u_theta;
    let u_nu = -d.j_theta * s * jet.u_phi + d.j_phi * jet.u_theta / s;
    Ok((u_tau, u_nu))
}
