//! Numerical tolerances and thresholds used across the library.
//!
//! Everything that draws a line between "regular" and "singular" lives here
//! so the cutoffs are consistent between the dynamics, the invariants and
//! the reconstruction.

/// A shape point is treated as sitting on a two-body collision when
/// 1 - sin(phi) cos(theta - theta_i) falls below this. The shape potential
/// diverges like the inverse square root of that gap.
pub const COLLISION_GAP_TOL: f64 = 1e-12;

/// Below this value of sin(phi) the longitude chart is unusable: theta
/// derivatives carry a 1/sin(phi) factor that amplifies noise beyond any
/// meaningful precision.
pub const POLE_SIN_PHI_TOL: f64 = 1e-9;

/// Hyperradius below which a trajectory is declared to be heading into
/// triple collision and integration stops.
pub const RHO_COLLAPSE_TOL: f64 = 1e-8;

/// Relative floor for the shape speed v. Velocities with v below this
/// (relative to the natural scale of the state) are cusps: the unit
/// tangent is undefined.
pub const SPEED_TOL: f64 = 1e-9;

/// Relative floor for the regularity quantities the reconstruction divides
/// by (normal derivative of the shape potential, geodesic curvature).
pub const REGULARITY_TOL: f64 = 1e-9;

/// Coefficients smaller than this fraction of the largest coefficient are
/// dropped when trimming the degree of the root-finding polynomial.
pub const POLY_TRIM_REL: f64 = 1e-14;

/// A polynomial root counts as real when |Im| < this * (1 + |Re|).
pub const ROOT_IMAG_TOL: f64 = 1e-9;

/// Reconstructed triples must satisfy the three defining equations to this
/// relative residual, otherwise the root is reported as spurious.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Warn about ill conditioning when the denominator d + e*Y of the
/// hyperradius recovery is below this fraction of |d|.
pub const CONDITIONING_REL: f64 = 1e-8;

/// Default relative tolerance for the adaptive integrator.
pub const DEFAULT_RTOL: f64 = 1e-10;

/// Default absolute tolerance for the adaptive integrator.
pub const DEFAULT_ATOL: f64 = 1e-12;

/// Two full-plane configurations are barycentric when the mass-weighted
/// position and momentum sums are below this, relative to the overall
/// scale of the configuration.
pub const BARYCENTER_REL_TOL: f64 = 1e-12;
