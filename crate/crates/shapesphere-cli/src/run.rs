//! Flag parsing, validation, and the five commands.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use nalgebra::Vector2;

use crate::examples::{human_summary, run_example, ExampleId};
use crate::io::{
    self, DirectionRecord, FullInput, PointRecord, ReconstructionInput, ReconstructionReport,
    ReducedInput, RootRecord, ShapeCurveRecord, SiegelRecord, SixTupleRecord, SolutionRecord,
    TrajectoryRow, TripleRecord,
};
use crate::rows::invariant_rows;
use shapesphere::consts::{DEFAULT_ATOL, DEFAULT_RTOL};
use shapesphere::hopf::project_trajectory;
use shapesphere::invariants::{basic_six_tuple, shape_kinematics, BasicSixTuple, SiegelValue};
use shapesphere::kinematics::{integrate_full, PlanarConfig};
use shapesphere::ode::OdeOptions;
use shapesphere::reconstruction::{
    admissible_solutions, assemble_initial_data, basic_system_residuals, build_polynomial,
    j_invariants, solve_roots, solve_zero_momentum,
};
use shapesphere::reduced::{energy_level, integrate_reduced, reconstruct_rotation};
use shapesphere::shape_geometry::{DirectionElement, MassDistribution, ShapePoint};
use shapesphere::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// Integrate the three-body equations, project onto the moduli cone,
    /// and export the invariant columns as CSV.
    SimulateFull,
    /// Integrate the reduced equations from a moduli state; same CSV.
    SimulateReduced,
    /// Evaluate the shape-curve record (6-tuple, Siegel value, marked
    /// point and direction, energies) at one reduced state; JSON out.
    Invariants,
    /// Solve the inverse problem from a shape-curve record; JSON report,
    /// plus one trajectory CSV per admissible solution when --output is
    /// given.
    Reconstruct,
    /// Replay a worked example against its published values.
    Example,
}

fn parse_span(text: &str) -> std::result::Result<(f64, f64), String> {
    let num =
        |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{e} in {:?}", s.trim()));
    match text.split(',').collect::<Vec<_>>().as_slice() {
        [t1] => Ok((0.0, num(t1)?)),
        [t0, t1] => Ok((num(t0)?, num(t1)?)),
        _ => Err("expected \"t1\" or \"t0,t1\"".into()),
    }
}

fn parse_masses(text: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected \"m1,m2,m3\"".into());
    }
    let mut masses = [0.0; 3];
    for (slot, s) in masses.iter_mut().zip(&parts) {
        *slot = s.trim().parse().map_err(|e| format!("{e} in {:?}", s.trim()))?;
    }
    Ok(masses)
}

/// Planar three-body motion on the shape sphere: simulate, extract
/// shape-curve invariants, reconstruct time parametrizations, replay
/// the worked examples.
#[derive(Debug, Parser)]
#[command(name = "shapesphere", version)]
pub struct RunConfig {
    /// What to run.
    #[arg(long, value_enum)]
    pub command: CommandKind,

    /// Input JSON record; schema depends on the command (see the io
    /// module docs).
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Output path; stdout when absent. Reconstructed trajectories go
    /// to siblings derived from it (out.json -> out.case1.csv, ...).
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Integration span, "t1" or "t0,t1".
    #[arg(long, value_parser = parse_span, default_value = "0,1", allow_hyphen_values = true)]
    pub t_span: (f64, f64),

    /// Time between exported samples.
    #[arg(long, default_value_t = 0.01)]
    pub stride: f64,

    /// Relative integration tolerance.
    #[arg(long, default_value_t = DEFAULT_RTOL)]
    pub rtol: f64,

    /// Absolute integration tolerance.
    #[arg(long, default_value_t = DEFAULT_ATOL)]
    pub atol: f64,

    /// Override the angular momentum of the input record.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,

    /// Override the energy level of a reconstruction record.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,

    /// Which worked example to replay (with --command example).
    #[arg(long, value_enum)]
    pub example: Option<ExampleId>,

    /// Masses "m1,m2,m3"; overrides the input record, which itself
    /// defaults to three unit masses.
    #[arg(long, value_parser = parse_masses)]
    pub masses: Option<[f64; 3]>,

    /// Accepted for interface stability; every current command is
    /// deterministic and ignores it.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        for (name, value) in [("stride", self.stride), ("rtol", self.rtol), ("atol", self.atol)] {
            if !value.is_finite() || !(value > 0.0) {
                return Err(Error::Format(format!("--{name} must be positive, got {value}")));
            }
        }
        if self.t_span.0 == self.t_span.1 {
            return Err(Error::Format("--t-span covers no time".into()));
        }
        match self.command {
            CommandKind::Example if self.example.is_none() => {
                Err(Error::Format("--command example needs --example".into()))
            }
            CommandKind::Example => Ok(()),
            _ if self.input.is_none() => {
                Err(Error::Format("this command needs --input".into()))
            }
            _ => Ok(()),
        }
    }

    fn ode_options(&self) -> OdeOptions {
        OdeOptions {
            rtol: self.rtol,
            atol: self.atol,
            ..OdeOptions::default()
        }
    }

    fn input_path(&self) -> &Path {
        self.input.as_deref().expect("checked by validate")
    }
}

/// Exit status for an error escaping a command: I/O and malformed input
/// or flags are 4, singular or degenerate data is 3. Published-value
/// mismatches exit 2 without an error (see [`run`]), and 1 is left to
/// panics.
pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Format(_) => 4,
        _ => 3,
    }
}

pub fn run(cfg: &RunConfig) -> Result<u8> {
    cfg.validate()?;
    match cfg.command {
        CommandKind::SimulateFull => simulate_full(cfg),
        CommandKind::SimulateReduced => simulate_reduced(cfg),
        CommandKind::Invariants => invariants(cfg),
        CommandKind::Reconstruct => reconstruct(cfg),
        CommandKind::Example => example(cfg),
    }
}

fn write_rows(rows: &[TrajectoryRow], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => io::export_trajectory(rows, p),
        None => {
            if rows.is_empty() {
                return Err(Error::Domain("cannot export an empty trajectory".into()));
            }
            print!("{}", io::render_csv(rows));
            Ok(())
        }
    }
}

fn simulate_full(cfg: &RunConfig) -> Result<u8> {
    let input: FullInput = io::read_json(cfg.input_path())?;
    let md = MassDistribution::new(cfg.masses.unwrap_or(input.masses))?;
    let positions = input.positions.map(|p| Vector2::new(p[0], p[1]));
    let velocities = input.velocities.map(|v| Vector2::new(v[0], v[1]));
    let c0 = PlanarConfig::new(positions, velocities, &md)?;
    if cfg.omega.is_some() || cfg.h.is_some() {
        eprintln!("note: --omega/--h do not apply to simulate-full; both follow from the data");
    }
    let full = integrate_full(&c0, &md, cfg.t_span, Some(cfg.stride), &cfg.ode_options())?;
    let (traj, alpha) = project_trajectory(&full, &md)?;
    let rows = invariant_rows(&traj, &alpha, &md);
    write_rows(&rows, cfg.output.as_deref())?;
    if let Some(reason) = &traj.halt {
        eprintln!("halted early: {reason}");
    }
    eprintln!(
        "full run: {} samples, h = {}, omega = {}",
        rows.len(),
        traj.h,
        traj.omega
    );
    Ok(0)
}

fn simulate_reduced(cfg: &RunConfig) -> Result<u8> {
    let input: ReducedInput = io::read_json(cfg.input_path())?;
    let md = MassDistribution::new(cfg.masses.unwrap_or(input.masses))?;
    let s0 = input.state();
    s0.validate()?;
    let omega = cfg.omega.unwrap_or(input.omega);
    let traj = integrate_reduced(&s0, omega, &md, cfg.t_span, Some(cfg.stride), &cfg.ode_options())?;
    let alpha = reconstruct_rotation(&traj, 0.0);
    let rows = invariant_rows(&traj, &alpha, &md);
    write_rows(&rows, cfg.output.as_deref())?;
    if let Some(reason) = &traj.halt {
        eprintln!("halted early: {reason}");
    }
    eprintln!("reduced run: {} samples, h = {}, omega = {omega}", rows.len(), traj.h);
    Ok(0)
}

fn invariants(cfg: &RunConfig) -> Result<u8> {
    let input: ReducedInput = io::read_json(cfg.input_path())?;
    let md = MassDistribution::new(cfg.masses.unwrap_or(input.masses))?;
    let s0 = input.state();
    s0.validate()?;
    let omega = cfg.omega.unwrap_or(input.omega);
    let (six, sg) = basic_six_tuple(&s0, omega, &md)?;
    let (direction, v) = shape_kinematics(&s0)?;
    let h = energy_level(&s0, omega, &md)?;
    let record = ShapeCurveRecord {
        six_tuple: SixTupleRecord {
            u0: six.u0,
            u1: six.u1,
            w0: six.w0,
            w1: six.w1,
            k0: six.k0,
            k1: six.k1,
        },
        point: PointRecord {
            phi: s0.phi,
            theta: s0.theta,
        },
        direction: DirectionRecord {
            j_phi: direction.j_phi,
            j_theta: direction.j_theta,
        },
        h,
        omega,
        masses: md.masses,
        siegel: SiegelRecord { s0: sg.s0, s1: sg.s1 },
        triple: TripleRecord {
            rho0: s0.rho,
            rho1: s0.rho_dot,
            v0: v,
        },
    };
    io::write_json(&record, cfg.output.as_deref())?;
    Ok(0)
}

fn case_path(base: &Path, k: usize) -> PathBuf {
    base.with_extension(format!("case{k}.csv"))
}

fn reconstruct(cfg: &RunConfig) -> Result<u8> {
    let input: ReconstructionInput = io::read_json(cfg.input_path())?;
    let md = MassDistribution::new(cfg.masses.unwrap_or(input.masses))?;
    let r = &input.six_tuple;
    let six = BasicSixTuple {
        u0: r.u0,
        u1: r.u1,
        w0: r.w0,
        w1: r.w1,
        k0: r.k0,
        k1: r.k1,
    };
    let sg = SiegelValue::of(&six)?;
    let h = cfg.h.unwrap_or(input.h);
    let omega = cfg.omega.unwrap_or(input.omega);
    let point = ShapePoint::new(input.point.phi, input.point.theta);
    let direction = DirectionElement::new(input.direction.j_phi, input.direction.j_theta);
    let gap = direction.norm_gap(point.phi);
    if gap.abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "direction is not unit at the record's point (norm gap {gap:.3e})"
        )));
    }

    let mut report;
    let triples;
    if omega == 0.0 {
        triples = solve_zero_momentum(&six, &sg, h, None)?.into_iter().collect::<Vec<_>>();
        report = ReconstructionReport {
            branch: "zero-momentum",
            h,
            omega,
            polynomial: None,
            degree: None,
            roots: Vec::new(),
            solutions: Vec::new(),
        };
    } else {
        let j = j_invariants(&six, &sg)?;
        let big_h = h * omega * omega;
        let (p, coeffs) = build_polynomial(&j, big_h);
        let mut roots = solve_roots(&p, big_h)?;
        triples = admissible_solutions(&mut roots, omega, &six, &j);
        report = ReconstructionReport {
            branch: "polynomial",
            h,
            omega,
            polynomial: Some(coeffs.to_vec()),
            degree: Some(roots.degree),
            roots: roots
                .roots
                .iter()
                .map(|r| RootRecord {
                    re: r.value.re,
                    im: r.value.im,
                    is_real: r.is_real,
                    admissible: r.admissible,
                    ill_conditioned: r.ill_conditioned,
                })
                .collect(),
            solutions: Vec::new(),
        };
    }

    let residual_basis = j_invariants(&six, &sg).ok();
    for (k, t) in triples.iter().enumerate() {
        let mut solution = SolutionRecord {
            rho0: t.rho0,
            rho1: t.rho1,
            v0: t.v0,
            residuals: residual_basis
                .as_ref()
                .map(|j| basic_system_residuals(t, &six, j, h, omega)),
            trajectory: None,
        };
        if let Some(base) = cfg.output.as_deref() {
            let path = case_path(base, k + 1);
            let s0 = assemble_initial_data(t, point, &direction);
            let traj =
                integrate_reduced(&s0, omega, &md, cfg.t_span, Some(cfg.stride), &cfg.ode_options())?;
            if let Some(reason) = &traj.halt {
                eprintln!("case {}: halted early: {reason}", k + 1);
            }
            let alpha = reconstruct_rotation(&traj, 0.0);
            io::export_trajectory(&invariant_rows(&traj, &alpha, &md), &path)?;
            solution.trajectory = Some(path.display().to_string());
        }
        report.solutions.push(solution);
    }

    io::write_json(&report, cfg.output.as_deref())?;
    eprintln!(
        "{} admissible solution(s) on the {} branch",
        report.solutions.len(),
        report.branch
    );
    Ok(0)
}

fn example(cfg: &RunConfig) -> Result<u8> {
    let id = cfg.example.expect("checked by validate");
    let report = run_example(id)?;
    io::write_json(&report, cfg.output.as_deref())?;
    eprint!("{}", human_summary(&report));
    Ok(if report.pass { 0 } else { 2 })
}
