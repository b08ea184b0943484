use thiserror::Error;

/// Reasons an integration stops before reaching the end of the requested span.
///
/// A halt is not a failure of the integrator. It means the trajectory ran
/// into a region where the model itself stops being meaningful (collisions,
/// chart singularities) or the step controller gave up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HaltReason {
    /// Shape came within the collision tolerance of the two-body collision
    /// point with the given index (the pair not containing that body ran
    /// into each other).
    CollisionProximity { index: usize },
    /// Two bodies in a full planar integration came closer than the
    /// collision tolerance.
    BodyCollision { i: usize, j: usize },
    /// Shape approached a pole of the spherical chart (sin(phi) ~ 0), where
    /// the longitude coordinate degenerates.
    ChartPole,
    /// Hyperradius collapsed toward zero (triple collision).
    HyperradiusVanishing,
    /// Adaptive controller pushed the step below the representable minimum.
    StepSizeUnderflow,
    /// Step budget exhausted before reaching the end of the span.
    MaxStepsExceeded,
}

impl std::fmt::Display for HaltReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HaltReason::CollisionProximity { index } => {
                write!(f, "shape entered collision neighborhood {index}")
            }
            HaltReason::BodyCollision { i, j } => {
                write!(f, "bodies {i} and {j} collided")
            }
            HaltReason::ChartPole => write!(f, "shape reached a chart pole"),
            HaltReason::HyperradiusVanishing => write!(f, "hyperradius vanished"),
            HaltReason::StepSizeUnderflow => write!(f, "step size underflow"),
            HaltReason::MaxStepsExceeded => write!(f, "maximum step count exceeded"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of a function (negative mass, zero
    /// hyperradius, coordinates off the sphere, and so on).
    #[error("domain error: {0}")]
    Domain(String),

    /// Shape potential evaluated at (or too close to) a two-body collision
    /// point. `gap` is the value of 1 - sin(phi) cos(theta - theta_i) that
    /// fell under the collision tolerance.
    #[error("shape potential singular at collision point {index} (gap {gap:.3e})")]
    CollisionSingularity { index: usize, gap: f64 },

    /// Spherical chart breaks down: sin(phi) too small for longitude
    /// derivatives to mean anything.
    #[error("chart singular at pole (sin(phi) = {sin_phi:.3e})")]
    ChartSingularity { sin_phi: f64 },

    /// Shape velocity vanished; direction of motion (and everything built
    /// from it) is undefined at a cusp.
    #[error("shape curve has a cusp here (speed {speed:.3e})")]
    Cusp { speed: f64 },

    /// Shape-curve data too degenerate for reconstruction: the invariants
    /// that the algebraic system divides by are below tolerance.
    #[error(
        "singular shape-curve point (speed {speed:.3e}, normal derivative {normal:.3e}, curvature {curvature:.3e})"
    )]
    SingularPoint {
        speed: f64,
        normal: f64,
        curvature: f64,
    },

    /// Algebraic system degenerated: zero polynomial, no admissible roots,
    /// or coefficients that do not determine a solution.
    #[error("degenerate algebraic system: {0}")]
    Degenerate(String),

    /// Integration stopped early; partial trajectory may still be useful,
    /// so the reason is carried along.
    #[error("integration halted: {0}")]
    Halted(HaltReason),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
