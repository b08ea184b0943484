//! Reduced Newton equations on the moduli space.
//!
//! The moduli space is a cone over the shape sphere with coordinates
//! (rho, phi, theta). For a fixed energy-momentum level (h, omega) the
//! motion satisfies a second-order system in these three coordinates; the
//! angular momentum enters through Coriolis-type coupling terms in the
//! sphere equations and the energy through the radial equation. The energy
//! integral is used as a drift monitor only, never substituted back into
//! the flow.

use crate::consts::{POLE_SIN_PHI_TOL, RHO_COLLAPSE_TOL};
use crate::error::{Error, HaltReason, Result};
use crate::ode::{integrate, OdeOptions, OdeRhs};
use crate::shape_geometry::{PotentialSource, ShapePoint};

/// A point of the reduced phase space: cone coordinates and their time
/// derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliState {
    pub rho: f64,
    pub phi: f64,
    pub theta: f64,
    pub rho_dot: f64,
    pub phi_dot: f64,
    pub theta_dot: f64,
}

impl ModuliState {
    pub fn shape(&self) -> ShapePoint {
        ShapePoint::new(self.phi, self.theta)
    }

    /// Shape speed v = sqrt(phi_dot^2 + sin^2(phi) theta_dot^2).
    pub fn speed(&self) -> f64 {
        let s = self.phi.sin();
        (self.phi_dot * self.phi_dot + s * s * self.theta_dot * self.theta_dot).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::Domain(format!(
                "hyperradius must be positive, got {}",
                self.rho
            )));
        }
        if self.phi.sin().abs() < POLE_SIN_PHI_TOL {
            return Err(Error::ChartSingularity {
                sin_phi: self.phi.sin(),
            });
        }
        Ok(())
    }
}

/// Conserved level of a planar motion. The combination H = h omega^2 is
/// invariant under the time-size scaling symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMomentum {
    pub h: f64,
    pub omega: f64,
}

impl EnergyMomentum {
    pub fn scale_invariant(&self) -> f64 {
        self.h * self.omega * self.omega
    }
}

/// Second time-derivatives of the cone coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliAccel {
    pub rho_ddot: f64,
    pub phi_ddot: f64,
    pub theta_ddot: f64,
}

/// Right-hand side of the reduced Newton equations at energy-momentum
/// level (h, omega):
///
///   rho''   = -rho'^2/rho + U*/rho^2 + 2h/rho
///   phi''   = -2(rho'/rho) phi' + (1/2) sin(2 phi) theta'^2
///             + 2 omega sin(phi) theta'/rho^2 + (4/rho^3) U*_phi
///   theta'' = -2(rho'/rho) theta' - 2 cot(phi) phi' theta'
///             - 2 omega phi'/(rho^2 sin phi) + (4/rho^3) U*_theta/sin^2(phi)
///
/// h is the value of the energy integral on the trajectory, fixed once
/// from the initial state; it enters the radial equation explicitly.
pub fn reduced_rhs(
    s: &ModuliState,
    omega: f64,
    h: f64,
    potential: &impl PotentialSource,
) -> Result<ModuliAccel> {
    if !(s.rho > 0.0) {
        return Err(Error::Domain(format!("hyperradius {} not positive", s.rho)));
    }
    let sp = s.phi.sin();
    if sp.abs() < POLE_SIN_PHI_TOL {
        return Err(Error::ChartSingularity { sin_phi: sp });
    }
    let cp = s.phi.cos();
    let jet = potential.jet(s.shape())?;
    let rho3 = s.rho * s.rho * s.rho;

    let rho_ddot = -s.rho_dot * s.rho_dot / s.rho + jet.u / (s.rho * s.rho) + 2.0 * h / s.rho;
    let phi_ddot = -2.0 * (s.rho_dot / s.rho) * s.phi_dot
        + 0.5 * (2.0 * s.phi).sin() * s.theta_dot * s.theta_dot
        + 2.0 * omega * sp * s.theta_dot / (s.rho * s.rho)
        + 4.0 * jet.u_phi / rho3;
    let theta_ddot = -2.0 * (s.rho_dot / s.rho) * s.theta_dot
        - 2.0 * (cp / sp) * s.phi_dot * s.theta_dot
        - 2.0 * omega * s.phi_dot / (s.rho * s.rho * sp)
        + 4.0 * jet.u_theta / (rho3 * sp * sp);
    Ok(ModuliAccel {
        rho_ddot,
        phi_ddot,
        theta_ddot,
    })
}

/// Right-hand side obtained by the naive Lagrange-Jacobi reduction: the
/// same equations with the two omega-proportional coupling terms absent.
/// Correct only at omega = 0; kept as the falsification baseline showing
/// those terms are not optional.
pub fn lagrange_jacobi_rhs(
    s: &ModuliState,
    h: f64,
    potential: &impl PotentialSource,
) -> Result<ModuliAccel> {
    if !(s.rho > 0.0) {
        return Err(Error::Domain(format!("hyperradius {} not positive", s.rho)));
    }
    let sp = s.phi.sin();
    if sp.abs() < POLE_SIN_PHI_TOL {
        return Err(Error::ChartSingularity { sin_phi: sp });
    }
    let cp = s.phi.cos();
    let jet = potential.jet(s.shape())?;
    let rho3 = s.rho * s.rho * s.rho;

    let rho_ddot = -s.rho_dot * s.rho_dot / s.rho + jet.u / (s.rho * s.rho) + 2.0 * h / s.rho;
    let phi_ddot = -2.0 * (s.rho_dot / s.rho) * s.phi_dot
        + 0.5 * (2.0 * s.phi).sin() * s.theta_dot * s.theta_dot
        + 4.0 * jet.u_phi / rho3;
    let theta_ddot = -2.0 * (s.rho_dot / s.rho) * s.theta_dot
        - 2.0 * (cp / sp) * s.phi_dot * s.theta_dot
        + 4.0 * jet.u_theta / (rho3 * sp * sp);
    Ok(ModuliAccel {
        rho_ddot,
        phi_ddot,
        theta_ddot,
    })
}

/// Energy integral
/// h = rho'^2/2 + (rho^2/8)[phi'^2 + sin^2(phi) theta'^2]
///     + omega^2/(2 rho^2) - U*/rho.
pub fn energy_level(s: &ModuliState, omega: f64, potential: &impl PotentialSource) -> Result<f64> {
    let jet = potential.jet(s.shape())?;
    let sp = s.phi.sin();
    Ok(0.5 * s.rho_dot * s.rho_dot
        + s.rho * s.rho / 8.0
            * (s.phi_dot * s.phi_dot + sp * sp * s.theta_dot * s.theta_dot)
        + omega * omega / (2.0 * s.rho * s.rho)
        - jet.u / s.rho)
}

/// Moduli-space trajectory at a fixed (h, omega) level. `arc_length` is
/// the accumulated shape arc length s(t), integrated alongside the state.
#[derive(Debug, Clone)]
pub struct ModuliTrajectory {
    pub t: Vec<f64>,
    pub states: Vec<ModuliState>,
    pub arc_length: Vec<f64>,
    pub omega: f64,
    pub h: f64,
    pub halt: Option<HaltReason>,
}

/// State layout: [rho, phi, theta, rho', phi', theta', s].
struct Flow<'a, P> {
    potential: &'a P,
    omega: f64,
    h: f64,
    coriolis: bool,
}

fn unpack(y: &[f64; 7]) -> ModuliState {
    ModuliState {
        rho: y[0],
        phi: y[1],
        theta: y[2],
        rho_dot: y[3],
        phi_dot: y[4],
        theta_dot: y[5],
    }
}

impl<P: PotentialSource> OdeRhs<7> for Flow<'_, P> {
    fn eval(&self, _t: f64, y: &[f64; 7]) -> Result<[f64; 7]> {
        let s = unpack(y);
        let acc = if self.coriolis {
            reduced_rhs(&s, self.omega, self.h, self.potential)?
        } else {
            lagrange_jacobi_rhs(&s, self.h, self.potential)?
        };
        Ok([
            s.rho_dot,
            s.phi_dot,
            s.theta_dot,
            acc.rho_ddot,
            acc.phi_ddot,
            acc.theta_ddot,
            s.speed(),
        ])
    }

    fn inspect(&self, _t: f64, y: &[f64; 7]) -> Option<HaltReason> {
        let s = unpack(y);
        if s.rho < RHO_COLLAPSE_TOL {
            return Some(HaltReason::HyperradiusVanishing);
        }
        if s.phi.sin().abs() < POLE_SIN_PHI_TOL {
            return Some(HaltReason::ChartPole);
        }
        match self.potential.jet(s.shape()) {
            Err(Error::CollisionSingularity { index, .. }) => {
                Some(HaltReason::CollisionProximity { index })
            }
            Err(Error::ChartSingularity { .. }) => Some(HaltReason::ChartPole),
            _ => None,
        }
    }
}

fn integrate_flow(
    s0: &ModuliState,
    omega: f64,
    potential: &impl PotentialSource,
    t_span: (f64, f64),
    stride: Option<f64>,
    opts: &OdeOptions,
    coriolis: bool,
) -> Result<ModuliTrajectory> {
    s0.validate()?;
    // The energy level is fixed by the initial state once; the radial
    // equation consumes it as a constant.
    let h = energy_level(s0, omega, potential)?;
    let flow = Flow {
        potential,
        omega,
        h,
        coriolis,
    };
    let y0 = [
        s0.rho,
        s0.phi,
        s0.theta,
        s0.rho_dot,
        s0.phi_dot,
        s0.theta_dot,
        0.0,
    ];
    let sol = integrate(&flow, t_span.0, y0, t_span.1, stride, opts)?;
    Ok(ModuliTrajectory {
        t: sol.t,
        states: sol.y.iter().map(unpack).collect(),
        arc_length: sol.y.iter().map(|y| y[6]).collect(),
        omega,
        h,
        halt: sol.halt,
    })
}

/// Integrate the reduced Newton equations from `s0` at angular momentum
/// `omega`; h is taken from the energy integral at `s0`.
pub fn integrate_reduced(
    s0: &ModuliState,
    omega: f64,
    potential: &impl PotentialSource,
    t_span: (f64, f64),
    stride: Option<f64>,
    opts: &OdeOptions,
) -> Result<ModuliTrajectory> {
    integrate_flow(s0, omega, potential, t_span, stride, opts, true)
}

/// Integrate the naive Lagrange-Jacobi system from the same data. The
/// energy level is still computed with `omega` (the radial equation and
/// the energy integral both carry it); only the coupling terms differ.
pub fn integrate_lagrange_jacobi(
    s0: &ModuliState,
    omega: f64,
    potential: &impl PotentialSource,
    t_span: (f64, f64),
    stride: Option<f64>,
    opts: &OdeOptions,
) -> Result<ModuliTrajectory> {
    integrate_flow(s0, omega, potential, t_span, stride, opts, false)
}

/// Rotation angle along a moduli trajectory:
/// alpha(t) = alpha0 + integral of (omega/rho^2 + (1/2) cos(phi) theta').
/// Trapezoid rule on the trajectory's own grid; alpha does not feed back
/// into the flow, so quadrature order is not critical.
pub fn reconstruct_rotation(traj: &ModuliTrajectory, alpha0: f64) -> Vec<f64> {
    let rate = |s: &ModuliState| traj.omega / (s.rho * s.rho) + 0.5 * s.phi.cos() * s.theta_dot;
    let mut alpha = Vec::with_capacity(traj.t.len());
    let mut acc = alpha0;
    alpha.push(acc);
    for i in 1..traj.t.len() {
        let dt = traj.t[i] - traj.t[i - 1];
        acc += 0.5 * dt * (rate(&traj.states[i - 1]) + rate(&traj.states[i]));
        alpha.push(acc);
    }
    alpha
}

/// The time-size scaling symmetry: initial data transform as
/// (rho, phi, theta; rho', phi', theta') ->
/// (k^-2/3 rho, phi, theta; k^1/3 rho', k phi', k theta'),
/// with omega -> k^-1/3 omega and h -> k^2/3 h. k = -1 is time reversal.
pub fn scaling_transform(
    s: &ModuliState,
    em: EnergyMomentum,
    k: f64,
) -> Result<(ModuliState, EnergyMomentum)> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::Domain(format!("scaling parameter k = {k}")));
    }
    let k13 = k.cbrt();
    let s2 = ModuliState {
        rho: s.rho / (k13 * k13),
        phi: s.phi,
        theta: s.theta,
        rho_dot: k13 * s.rho_dot,
        phi_dot: k * s.phi_dot,
        theta_dot: k * s.theta_dot,
    };
    let em2 = EnergyMomentum {
        h: k13 * k13 * em.h,
        omega: em.omega / k13,
    };
    Ok((s2, em2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape_geometry::MassDistribution;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn equal_masses() -> MassDistribution {
        MassDistribution::new([1.0, 1.0, 1.0]).unwrap()
    }

    fn random_state(rng: &mut impl Rng, md: &MassDistribution) -> ModuliState {
        loop {
            let s = ModuliState {
                rho: rng.gen_range(0.5..3.0),
                phi: rng.gen_range(0.3..PI - 0.3),
                theta: rng.gen_range(0.0..2.0 * PI),
                rho_dot: rng.gen_range(-1.0..1.0),
                phi_dot: rng.gen_range(-1.0..1.0),
                theta_dot: rng.gen_range(-1.0..1.0),
            };
            let sp = s.phi.sin();
            let clear = md
                .theta_collision
                .iter()
                .all(|&ti| 1.0 - sp * (s.theta - ti).cos() > 0.05);
            if clear {
                return s;
            }
        }
    }

    #[test]
    fn lagrange_jacobi_coincides_at_zero_momentum() {
        let md = equal_masses();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let s = random_state(&mut rng, &md);
            let h = energy_level(&s, 0.0, &md).unwrap();
            let a = reduced_rhs(&s, 0.0, h, &md).unwrap();
            let b = lagrange_jacobi_rhs(&s, h, &md).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn coupling_terms_are_the_only_difference() {
        let md = equal_masses();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let s = random_state(&mut rng, &md);
            let omega = rng.gen_range(0.1..2.0);
            let h = energy_level(&s, omega, &md).unwrap();
            let full = reduced_rhs(&s, omega, h, &md).unwrap();
            let naive = lagrange_jacobi_rhs(&s, h, &md).unwrap();
            let sp = s.phi.sin();
            assert_eq!(full.rho_ddot, naive.rho_ddot);
            assert_relative_eq!(
                full.phi_ddot - naive.phi_ddot,
                2.0 * omega * sp * s.theta_dot / (s.rho * s.rho),
                max_relative = 1e-12,
                epsilon = 1e-14
            );
            assert_relative_eq!(
                full.theta_ddot - naive.theta_ddot,
                -2.0 * omega * s.phi_dot / (s.rho * s.rho * sp),
                max_relative = 1e-12,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn rest_state_feels_only_the_gradient() {
        let md = equal_masses();
        let s = ModuliState {
            rho: 1.7,
            phi: 1.2,
            theta: 0.8,
            rho_dot: 0.0,
            phi_dot: 0.0,
            theta_dot: 0.0,
        };
        let h = energy_level(&s, 0.0, &md).unwrap();
        let jet = md.potential_jet(s.shape()).unwrap();
        let acc = reduced_rhs(&s, 0.0, h, &md).unwrap();
        let rho3 = s.rho.powi(3);
        let sp = s.phi.sin();
        assert_relative_eq!(acc.phi_ddot, 4.0 * jet.u_phi / rho3, max_relative = 1e-14);
        assert_relative_eq!(
            acc.theta_ddot,
            4.0 * jet.u_theta / (rho3 * sp * sp),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            acc.rho_ddot,
            jet.u / (s.rho * s.rho) + 2.0 * h / s.rho,
            max_relative = 1e-14
        );
    }

    /// The sphere equation for phi is redundant given the radial and
    /// theta equations plus energy conservation: demanding dh/dt = 0 with
    /// rho'' and theta'' from the system determines phi'', and it must be
    /// the value the phi equation returns.
    #[test]
    fn phi_equation_follows_from_energy_conservation() {
        let md = equal_masses();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..30 {
            let mut s = random_state(&mut rng, &md);
            if s.phi_dot.abs() < 0.2 {
                s.phi_dot = 0.7;
            }
            let omega = rng.gen_range(-1.5..1.5);
            let h = energy_level(&s, omega, &md).unwrap();
            let acc = reduced_rhs(&s, omega, h, &md).unwrap();
            let jet = md.potential_jet(s.shape()).unwrap();
            let sp = s.phi.sin();
            let cp = s.phi.cos();
            let v2 = s.phi_dot * s.phi_dot + sp * sp * s.theta_dot * s.theta_dot;

            // dh/dt = 0 solved for phi'':
            // rho' rho'' + (rho rho'/4) v^2
            //   + (rho^2/4)(phi' phi'' + sin cos phi' theta'^2 + sin^2 theta' theta'')
            //   - omega^2 rho'/rho^3 - (U_phi phi' + U_theta theta')/rho
            //   + U rho'/rho^2 = 0
            let rest = s.rho_dot * acc.rho_ddot
                + 0.25 * s.rho * s.rho_dot * v2
                + 0.25
                    * s.rho
                    * s.rho
                    * (sp * cp * s.phi_dot * s.theta_dot * s.theta_dot
                        + sp * sp * s.theta_dot * acc.theta_ddot)
                - omega * omega * s.rho_dot / s.rho.powi(3)
                - (jet.u_phi * s.phi_dot + jet.u_theta * s.theta_dot) / s.rho
                + jet.u * s.rho_dot / (s.rho * s.rho);
            let phi_ddot_from_energy = -rest / (0.25 * s.rho * s.rho * s.phi_dot);
            let scale = 1.0 + acc.phi_ddot.abs();
            assert!(
                (phi_ddot_from_energy - acc.phi_ddot).abs() < 1e-9 * scale,
                "phi'' mismatch: {} vs {}",
                phi_ddot_from_energy,
                acc.phi_ddot
            );
        }
    }

    #[test]
    fn energy_is_conserved_along_the_flow() {
        let md = equal_masses();
        let s0 = ModuliState {
            rho: 1.3,
            phi: 1.1,
            theta: 0.7,
            rho_dot: 0.2,
            phi_dot: 0.4,
            theta_dot: -0.3,
        };
        let omega = 0.25;
        let traj = integrate_reduced(
            &s0,
            omega,
            &md,
            (0.0, 1.0),
            Some(0.05),
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(traj.halt.is_none(), "halted: {:?}", traj.halt);
        let tol = 1e-9 * traj.h.abs().max(1.0);
        for s in &traj.states {
            let h = energy_level(s, omega, &md).unwrap();
            assert!((h - traj.h).abs() < tol, "drift {}", h - traj.h);
        }
        // Arc length is monotone and consistent with the mean speed.
        assert!(traj.arc_length.windows(2).all(|w| w[1] >= w[0]));
        assert!(*traj.arc_length.last().unwrap() > 0.0);
    }

    #[test]
    fn symmetric_meridian_is_invariant_at_zero_momentum() {
        // For equal masses the meridian opposite a collision point is a
        // reflection symmetry line of the potential; with omega = 0 a
        // motion started along it stays on it.
        let md = equal_masses();
        let s0 = ModuliState {
            rho: 2.0,
            phi: 1.0,
            theta: PI,
            rho_dot: 0.0,
            phi_dot: 0.5,
            theta_dot: 0.0,
        };
        let traj = integrate_reduced(
            &s0,
            0.0,
            &md,
            (0.0, 0.5),
            Some(0.025),
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(traj.halt.is_none());
        for s in &traj.states {
            assert_abs_diff_eq!(s.theta, PI, epsilon = 1e-9);
            assert_abs_diff_eq!(s.theta_dot, 0.0, epsilon = 1e-9);
        }
        // It genuinely moved along the meridian.
        assert!((traj.states.last().unwrap().phi - s0.phi).abs() > 0.1);
    }

    #[test]
    fn scaling_preserves_the_invariant_and_k1_is_identity() {
        let s = ModuliState {
            rho: 1.4,
            phi: 0.9,
            theta: 2.0,
            rho_dot: -0.2,
            phi_dot: 0.3,
            theta_dot: 0.6,
        };
        let em = EnergyMomentum {
            h: -0.7,
            omega: 0.45,
        };
        let (s1, em1) = scaling_transform(&s, em, 1.0).unwrap();
        assert_eq!(s1, s);
        assert_eq!(em1, em);
        for k in [2.0, 0.3, -1.0, -2.7] {
            let (_, emk) = scaling_transform(&s, em, k).unwrap();
            assert_relative_eq!(
                emk.scale_invariant(),
                em.scale_invariant(),
                max_relative = 1e-12
            );
        }
        assert!(scaling_transform(&s, em, 0.0).is_err());
    }

    #[test]
    fn scaled_trajectory_is_the_time_rescaled_original() {
        let md = equal_masses();
        let s0 = ModuliState {
            rho: 1.3,
            phi: 1.1,
            theta: 0.7,
            rho_dot: 0.2,
            phi_dot: 0.4,
            theta_dot: -0.3,
        };
        let omega = 0.25;
        let h = energy_level(&s0, omega, &md).unwrap();
        let k = 2.0;
        let (sk, emk) = scaling_transform(&s0, EnergyMomentum { h, omega }, k).unwrap();

        let span = 0.25;
        let n = 10usize;
        let base = integrate_reduced(
            &s0,
            omega,
            &md,
            (0.0, k * span),
            Some(k * span / n as f64),
            &OdeOptions::default(),
        )
        .unwrap();
        let scaled = integrate_reduced(
            &sk,
            emk.omega,
            &md,
            (0.0, span),
            Some(span / n as f64),
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(base.halt.is_none() && scaled.halt.is_none());
        assert_relative_eq!(emk.h, base.h * k.cbrt().powi(2), max_relative = 1e-12);
        let k23 = k.cbrt().powi(2);
        for (a, b) in base.states.iter().zip(&scaled.states) {
            // gamma_k(t) = k^-2/3 gamma(k t) in rho, same sphere point.
            assert_abs_diff_eq!(b.rho, a.rho / k23, epsilon = 1e-8);
            assert_abs_diff_eq!(b.phi, a.phi, epsilon = 1e-8);
            assert_abs_diff_eq!(b.theta, a.theta, epsilon = 1e-8);
        }
    }

    #[test]
    fn time_reversal_retraces_the_trajectory() {
        let md = equal_masses();
        let s0 = ModuliState {
            rho: 1.5,
            phi: 1.3,
            theta: 4.0,
            rho_dot: 0.1,
            phi_dot: -0.3,
            theta_dot: 0.5,
        };
        let omega = 0.4;
        let h = energy_level(&s0, omega, &md).unwrap();
        let fwd = integrate_reduced(&s0, omega, &md, (0.0, 0.4), None, &OdeOptions::default())
            .unwrap();
        assert!(fwd.halt.is_none());
        let end = *fwd.states.last().unwrap();
        let (rev0, rev_em) =
            scaling_transform(&end, EnergyMomentum { h, omega }, -1.0).unwrap();
        let back = integrate_reduced(
            &rev0,
            rev_em.omega,
            &md,
            (0.0, 0.4),
            None,
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(back.halt.is_none());
        let (recovered, _) = scaling_transform(
            back.states.last().unwrap(),
            rev_em,
            -1.0,
        )
        .unwrap();
        assert_abs_diff_eq!(recovered.rho, s0.rho, epsilon = 1e-8);
        assert_abs_diff_eq!(recovered.phi, s0.phi, epsilon = 1e-8);
        assert_abs_diff_eq!(recovered.theta, s0.theta, epsilon = 1e-8);
        assert_abs_diff_eq!(recovered.rho_dot, s0.rho_dot, epsilon = 1e-8);
        assert_abs_diff_eq!(recovered.phi_dot, s0.phi_dot, epsilon = 1e-8);
        assert_abs_diff_eq!(recovered.theta_dot, s0.theta_dot, epsilon = 1e-8);
    }

    #[test]
    fn rotation_angle_closed_form_on_the_equator() {
        // Constant rho on the equator with theta frozen: alpha grows
        // linearly at omega/rho^2.
        let rho = 2.0;
        let omega = 0.7;
        let n = 50;
        let t: Vec<f64> = (0..=n).map(|i| 0.01 * i as f64).collect();
        let states: Vec<ModuliState> = t
            .iter()
            .map(|_| ModuliState {
                rho,
                phi: PI / 2.0,
                theta: 1.0,
                rho_dot: 0.0,
                phi_dot: 0.3,
                theta_dot: 0.0,
            })
            .collect();
        let traj = ModuliTrajectory {
            arc_length: vec![0.0; t.len()],
            t: t.clone(),
            states,
            omega,
            h: 0.0,
            halt: None,
        };
        let alpha = reconstruct_rotation(&traj, 0.25);
        for (ti, ai) in t.iter().zip(&alpha) {
            assert_abs_diff_eq!(*ai, 0.25 + omega * ti / (rho * rho), epsilon = 1e-12);
        }
        // omega = 0 with theta frozen: alpha stays put.
        let still = ModuliTrajectory {
            omega: 0.0,
            ..traj
        };
        let alpha0 = reconstruct_rotation(&still, 1.0);
        assert!(alpha0.iter().all(|&a| (a - 1.0).abs() < 1e-15));
    }

    #[test]
    fn energy_level_with_constant_potential_matches_by_hand() {
        use crate::shape_geometry::ConstantPotential;
        // Values of the second admissible triple of the published
        // end-to-end example; the energy comes out at the published h.
        let s = ModuliState {
            rho: 2.51475,
            phi: PI / 2.0,
            theta: 1.0,
            rho_dot: 0.0,
            phi_dot: 10.30184,
            theta_dot: 0.0,
        };
        let h = energy_level(&s, 0.312013, &ConstantPotential(213.6058)).unwrap();
        assert_abs_diff_eq!(h, -1.0400, epsilon = 5e-4);

        // At rest with omega = 0 only the potential term survives.
        let rest = ModuliState {
            rho: 2.0,
            phi: 1.0,
            theta: 0.5,
            rho_dot: 0.0,
            phi_dot: 0.0,
            theta_dot: 0.0,
        };
        let h0 = energy_level(&rest, 0.0, &ConstantPotential(6.0)).unwrap();
        assert_relative_eq!(h0, -3.0, max_relative = 1e-15);
    }
}
