//! Planar three-body dynamics on the shape sphere.
//!
//! The library reduces the planar Newtonian three-body problem to the
//! moduli space of oriented triangles (a cone over the shape sphere),
//! integrates the reduced equations of motion, extracts the intrinsic
//! invariants of the traced shape curve, and solves the inverse problem:
//! recovering the time parametrization of a motion from purely geometric
//! shape data.

pub mod consts;
pub mod error;
pub mod fixtures;
pub mod hopf;
pub mod invariants;
pub mod kinematics;
pub mod ode;
pub mod reconstruction;
pub mod reduced;
pub mod roots;
pub mod shape_geometry;

pub use error::{Error, HaltReason, Result};
pub use hopf::{hopf_lift, hopf_lift_state, hopf_project, project_trajectory, HopfProjection};
pub use invariants::{
    basic_six_tuple, curvature_dynamical, curvature_intrinsic, curvature_temporal,
    energy_momentum_from_invariants, shape_jet, shape_kinematics, siegel, BasicSixTuple,
    BasicTriple, ShapeJet, SiegelValue,
};
pub use reconstruction::{
    admissible_solutions, assemble_initial_data, basic_system_residuals, build_polynomial,
    j_invariants, reconstruct_pipeline, solve_roots, solve_zero_momentum, JInvariants,
    PolyCoefficients, RootEntry, RootReport,
};

pub use kinematics::{
    integrate_full, kinematic_summary, newton_potential, newton_rhs, FullTrajectory,
    KinematicSummary, ModuliPoint, PlanarConfig,
};
pub use reduced::{
    energy_level, integrate_lagrange_jacobi, integrate_reduced, lagrange_jacobi_rhs,
    reconstruct_rotation, reduced_rhs, scaling_transform, EnergyMomentum, ModuliAccel,
    ModuliState, ModuliTrajectory,
};
pub use shape_geometry::{
    frame_transform, ConstantPotential, DirectionElement, MassDistribution, PotentialJet,
    PotentialSource, ShapePoint,
};
