//! File formats: JSON records in, CSV trajectories out.
//!
//! Every float in the CSV is printed with 17 significant digits, enough
//! to round-trip IEEE doubles exactly; re-ingesting an exported file
//! reproduces the in-memory samples bit for bit.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use shapesphere::reduced::ModuliState;
use shapesphere::{Error, Result};
use std::path::Path;

fn unit_masses() -> [f64; 3] {
    [1.0, 1.0, 1.0]
}

/// Initial data for a full-space run: three planar bodies.
#[derive(Debug, Clone, Deserialize)]
pub struct FullInput {
    pub masses: [f64; 3],
    pub positions: [[f64; 2]; 3],
    pub velocities: [[f64; 2]; 3],
}

/// Initial data on the moduli cone. `omega` is the angular momentum the
/// reduced flow carries as a parameter; masses default to three unit
/// masses when the record omits them.
#[derive(Debug, Clone, Deserialize)]
pub struct ReducedInput {
    pub rho: f64,
    pub phi: f64,
    pub theta: f64,
    pub rho_dot: f64,
    pub phi_dot: f64,
    pub theta_dot: f64,
    pub omega: f64,
    #[serde(default = "unit_masses")]
    pub masses: [f64; 3],
}

impl ReducedInput {
    pub fn state(&self) -> ModuliState {
        ModuliState {
            rho: self.rho,
            phi: self.phi,
            theta: self.theta,
            rho_dot: self.rho_dot,
            phi_dot: self.phi_dot,
            theta_dot: self.theta_dot,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SixTupleRecord {
    pub u0: f64,
    pub u1: f64,
    pub w0: f64,
    pub w1: f64,
    #[serde(rename = "K0")]
    pub k0: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRecord {
    pub phi: f64,
    pub theta: f64,
}

/// Unit direction in the (phi, theta) chart: j_phi^2 + sin^2(phi)
/// j_theta^2 = 1 at the record's point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionRecord {
    pub j_phi: f64,
    pub j_theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SiegelRecord {
    pub s0: f64,
    pub s1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleRecord {
    pub rho0: f64,
    pub rho1: f64,
    pub v0: f64,
}

/// Geometric shape-curve data for the inverse problem.
#[derive(Debug, Clone, Deserialize)]
pub struct ReconstructionInput {
    pub six_tuple: SixTupleRecord,
    pub point: PointRecord,
    pub direction: DirectionRecord,
    pub h: f64,
    pub omega: f64,
    #[serde(default = "unit_masses")]
    pub masses: [f64; 3],
}

/// Output of the invariants command. A superset of
/// [`ReconstructionInput`], so it feeds straight back into
/// `--command reconstruct`.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeCurveRecord {
    pub six_tuple: SixTupleRecord,
    pub point: PointRecord,
    pub direction: DirectionRecord,
    pub h: f64,
    pub omega: f64,
    pub masses: [f64; 3],
    pub siegel: SiegelRecord,
    pub triple: TripleRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootRecord {
    pub re: f64,
    pub im: f64,
    pub is_real: bool,
    pub admissible: bool,
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionRecord {
    pub rho0: f64,
    pub rho1: f64,
    pub v0: f64,
    /// Normalized residuals of the three equations of the algebraic
    /// system; absent when the J-invariants are undefined (the
    /// zero-momentum branch with degenerate data).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<[f64; 3]>,
    /// Path of the trajectory CSV written for this solution, when one was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<String>,
}

/// Output of the reconstruct command.
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    /// "polynomial" when omega is nonzero, "zero-momentum" otherwise.
    pub branch: &'static str,
    pub h: f64,
    pub omega: f64,
    /// Ascending coefficients of P(Y); absent on the zero-momentum branch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub roots: Vec<RootRecord>,
    pub solutions: Vec<SolutionRecord>,
}

/// One CSV row per trajectory sample: the moduli state, the rotation
/// angle alpha, arc length s, shape speed v, the shape potential u_star
/// with its tangential (u_tau) and normal (u_nu) derivatives along the
/// curve, the geodesic curvature K_star, the pointwise Siegel quotient
/// u_nu/K_star, the drift of the energy integral against its value at
/// the first sample, and the angular momentum recovered from the
/// curvature identity (a consistency column: it must reproduce the run's
/// omega up to integration error). Direction-dependent entries are NaN
/// at cusps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub rho: f64,
    pub phi: f64,
    pub theta: f64,
    pub rho_dot: f64,
    pub phi_dot: f64,
    pub theta_dot: f64,
    pub alpha: f64,
    pub s: f64,
    pub v: f64,
    pub u_star: f64,
    pub u_tau: f64,
    pub u_nu: f64,
    pub k_star: f64,
    pub siegel: f64,
    pub h_drift: f64,
    pub omega_check: f64,
}

pub const CSV_HEADER: &str = "t, rho, phi, theta, rho_dot, phi_dot, theta_dot, alpha, s, v, u_star, u_tau, u_nu, K_star, siegel, h_drift, omega_check";

impl TrajectoryRow {
    pub fn to_array(&self) -> [f64; 17] {
        [
            self.t,
            self.rho,
            self.phi,
            self.theta,
            self.rho_dot,
            self.phi_dot,
            self.theta_dot,
            self.alpha,
            self.s,
            self.v,
            self.u_star,
            self.u_tau,
            self.u_nu,
            self.k_star,
            self.siegel,
            self.h_drift,
            self.omega_check,
        ]
    }

    pub fn from_array(a: [f64; 17]) -> Self {
        TrajectoryRow {
            t: a[0],
            rho: a[1],
            phi: a[2],
            theta: a[3],
            rho_dot: a[4],
            phi_dot: a[5],
            theta_dot: a[6],
            alpha: a[7],
            s: a[8],
            v: a[9],
            u_star: a[10],
            u_tau: a[11],
            u_nu: a[12],
            k_star: a[13],
            siegel: a[14],
            h_drift: a[15],
            omega_check: a[16],
        }
    }
}

/// 17 significant digits: the shortest fixed width that round-trips
/// every finite double.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::with_capacity((rows.len() + 1) * 24 * 18);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let fields = row.to_array().map(format_float);
        out.push_str(&fields.join(", "));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<TrajectoryRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Format(format!("unexpected CSV header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 17 {
            return Err(Error::Format(format!(
                "row {}: expected 17 fields, found {}",
                k + 2,
                fields.len()
            )));
        }
        let mut a = [0.0; 17];
        for (slot, field) in a.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|e| Error::Format(format!("row {}: {e} in {field:?}", k + 2)))?;
        }
        rows.push(TrajectoryRow::from_array(a));
    }
    Ok(rows)
}

pub fn export_trajectory(rows: &[TrajectoryRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Domain("cannot export an empty trajectory".into()));
    }
    std::fs::write(path, render_csv(rows)).map_err(|e| io_context(e, path, "writing"))
}

pub fn read_trajectory(path: &Path) -> Result<Vec<TrajectoryRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_context(e, path, "reading"))?;
    parse_csv(&text)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| io_context(e, path, "reading"))?;
    Ok(serde_json::from_str(&text)?)
}

/// Serialize to pretty JSON with a trailing newline, to `path` when given
/// and stdout otherwise.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_context(e, p, "writing")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn io_context(e: std::io::Error, path: &Path, verb: &str) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{verb} {}: {e}", path.display()),
    ))
}
