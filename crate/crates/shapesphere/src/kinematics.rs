//! Planar three-body mechanics in the full configuration space.
//!
//! Configurations live in a barycentric frame (both the mass-weighted
//! positions and momenta sum to zero). The unreduced Newton integrator
//! here is the oracle the reduced dynamics is checked against.

use nalgebra::Vector2;

use crate::consts::RHO_COLLAPSE_TOL;
use crate::error::{Error, HaltReason, Result};
use crate::ode::{integrate, OdeOptions, OdeRhs};
use crate::shape_geometry::{MassDistribution, ShapePoint};

/// An m-triangle: planar positions and velocities of the three bodies in a
/// barycentric frame. Build through [`PlanarConfig::new`], which recenters;
/// operations assume the barycentric invariants hold.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarConfig {
    pub positions: [Vector2<f64>; 3],
    pub velocities: [Vector2<f64>; 3],
}

impl PlanarConfig {
    /// Shift positions and velocities into the barycentric frame. Input in
    /// any inertial frame is accepted; published initial data is often
    /// centered only to the printed precision, which is far short of the
    /// 1e-12 the invariants demand.
    pub fn new(
        positions: [Vector2<f64>; 3],
        velocities: [Vector2<f64>; 3],
        md: &MassDistribution,
    ) -> Result<Self> {
        let mut center = Vector2::zeros();
        let mut drift = Vector2::zeros();
        for i in 0..3 {
            center += md.masses[i] * positions[i];
            drift += md.masses[i] * velocities[i];
        }
        center /= md.mbar;
        drift /= md.mbar;
        let c = PlanarConfig {
            positions: std::array::from_fn(|i| positions[i] - center),
            velocities: std::array::from_fn(|i| velocities[i] - drift),
        };
        let inertia: f64 = (0..3)
            .map(|i| md.masses[i] * c.positions[i].norm_squared())
            .sum();
        let scale = 1.0 + positions.iter().map(Vector2::norm).fold(0.0, f64::max);
        if inertia.sqrt() < 1e-12 * md.mbar.sqrt() * scale {
            return Err(Error::Domain(
                "all three bodies coincide; the shape is undefined".into(),
            ));
        }
        Ok(c)
    }

    fn to_state(&self) -> [f64; 12] {
        let mut s = [0.0; 12];
        for i in 0..3 {
            s[2 * i] = self.positions[i].x;
            s[2 * i + 1] = self.positions[i].y;
            s[6 + 2 * i] = self.velocities[i].x;
            s[6 + 2 * i + 1] = self.velocities[i].y;
        }
        s
    }

    fn from_state(s: &[f64; 12]) -> Self {
        PlanarConfig {
            positions: std::array::from_fn(|i| Vector2::new(s[2 * i], s[2 * i + 1])),
            velocities: std::array::from_fn(|i| Vector2::new(s[6 + 2 * i], s[6 + 2 * i + 1])),
        }
    }
}

/// A point of the moduli space of oriented m-triangles: hyperradius plus
/// shape-sphere point. What remains of a configuration after quotienting
/// by rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliPoint {
    pub rho: f64,
    pub shape: ShapePoint,
}

impl ModuliPoint {
    pub fn new(rho: f64, shape: ShapePoint) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "hyperradius must be positive, got {rho}"
            )));
        }
        Ok(ModuliPoint { rho, shape })
    }
}

/// The scalar mechanical data of a configuration. `energy` is T - U by
/// construction; `rho` is the square root of the moment of inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicSummary {
    pub inertia: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub omega: f64,
    pub rho: f64,
    pub energy: f64,
}

pub fn kinematic_summary(c: &PlanarConfig, md: &MassDistribution) -> KinematicSummary {
    let mut inertia = 0.0;
    let mut kinetic = 0.0;
    let mut omega = 0.0;
    for i in 0..3 {
        inertia += md.masses[i] * c.positions[i].norm_squared();
        kinetic += 0.5 * md.masses[i] * c.velocities[i].norm_squared();
        omega += md.masses[i] * c.positions[i].perp(&c.velocities[i]);
    }
    let potential = newton_potential(c, md);
    KinematicSummary {
        inertia,
        kinetic,
        potential,
        omega,
        rho: inertia.sqrt(),
        energy: kinetic - potential,
    }
}

/// Newtonian potential U = sum m_i m_j / r_ij (gravitational constant 1).
/// Infinite at a collision, matching the limit.
pub fn newton_potential(c: &PlanarConfig, md: &MassDistribution) -> f64 {
    let mut u = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let r = (c.positions[j] - c.positions[i]).norm();
            u += md.masses[i] * md.masses[j] / r;
        }
    }
    u
}

/// Accelerations of the three bodies under Newtonian gravity.
pub fn newton_rhs(c: &PlanarConfig, md: &MassDistribution) -> Result<[Vector2<f64>; 3]> {
    let mut acc = [Vector2::zeros(); 3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dr = c.positions[j] - c.positions[i];
            let r2 = dr.norm_squared();
            if r2 == 0.0 {
                return Err(Error::Domain(format!(
                    "bodies {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
            let inv_r3 = 1.0 / (r2 * r2.sqrt());
            acc[i] += md.masses[j] * inv_r3 * dr;
            acc[j] -= md.masses[i] * inv_r3 * dr;
        }
    }
    Ok(acc)
}

struct NewtonSystem<'a> {
    md: &'a MassDistribution,
}

impl OdeRhs<12> for NewtonSystem<'_> {
    fn eval(&self, _t: f64, y: &[f64; 12]) -> Result<[f64; 12]> {
        let c = PlanarConfig::from_state(y);
        let acc = newton_rhs(&c, self.md)?;
        let mut dy = [0.0; 12];
        dy[..6].copy_from_slice(&y[6..]);
        for i in 0..3 {
            dy[6 + 2 * i] = acc[i].x;
            dy[6 + 2 * i + 1] = acc[i].y;
        }
        Ok(dy)
    }

    fn inspect(&self, _t: f64, y: &[f64; 12]) -> Option<HaltReason> {
        let c = PlanarConfig::from_state(y);
        let mut inertia = 0.0;
        for i in 0..3 {
            inertia += self.md.masses[i] * c.positions[i].norm_squared();
        }
        if inertia < RHO_COLLAPSE_TOL * RHO_COLLAPSE_TOL {
            return Some(HaltReason::HyperradiusVanishing);
        }
        let rho = inertia.sqrt();
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (c.positions[j] - c.positions[i]).norm() < 1e-12 * rho {
                    return Some(HaltReason::BodyCollision { i: i + 1, j: j + 1 });
                }
            }
        }
        None
    }
}

/// Sampled full-space trajectory. `halt` is None when the whole span was
/// covered.
#[derive(Debug, Clone)]
pub struct FullTrajectory {
    pub t: Vec<f64>,
    pub states: Vec<PlanarConfig>,
    pub halt: Option<HaltReason>,
}

/// Integrate Newton's equations from `c0` over `t_span`, sampling every
/// `stride` time units (every accepted step for None).
pub fn integrate_full(
    c0: &PlanarConfig,
    md: &MassDistribution,
    t_span: (f64, f64),
    stride: Option<f64>,
    opts: &OdeOptions,
) -> Result<FullTrajectory> {
    let sys = NewtonSystem { md };
    let sol = integrate(&sys, t_span.0, c0.to_state(), t_span.1, stride, opts)?;
    Ok(FullTrajectory {
        t: sol.t,
        states: sol.y.iter().map(PlanarConfig::from_state).collect(),
        halt: sol.halt,
    })
}
