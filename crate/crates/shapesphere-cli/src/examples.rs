//! The worked examples, replayed end to end against their published
//! values. Every comparison is a [`Check`] carrying the tolerance its
//! target was printed with; where a published number is internally
//! inconsistent, the check compares against the reconciled value and a
//! note says why (the details live next to the frozen constants in
//! the library's fixtures module).

use clap::ValueEnum;
use serde::Serialize;
use shapesphere::fixtures;
use shapesphere::hopf::hopf_project;
use shapesphere::invariants::{
    basic_six_tuple, energy_momentum_from_invariants, BasicSixTuple, SiegelValue,
};
use shapesphere::kinematics::kinematic_summary;
use shapesphere::reconstruction::{
    admissible_solutions, build_polynomial, j_invariants, solve_roots,
};
use shapesphere::roots::{real_roots, solve_polynomial};
use shapesphere::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleId {
    /// Freely chosen 6-tuple with both energies nonzero; degree six.
    #[value(name = "3.4.1")]
    Sextic,
    /// Zero-energy data collapsing the polynomial to a quartic.
    #[value(name = "3.4.2")]
    Quartic,
    /// K1 = 0 at zero energy; the polynomial is an exact quadratic.
    #[value(name = "3.4.3")]
    Quadratic,
    /// Periodic orbit from raw coordinates through to reconstruction.
    #[value(name = "henon2")]
    Henon2,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [
        ExampleId::Sextic,
        ExampleId::Quartic,
        ExampleId::Quadratic,
        ExampleId::Henon2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ExampleId::Sextic => "3.4.1",
            ExampleId::Quartic => "3.4.2",
            ExampleId::Quadratic => "3.4.3",
            ExampleId::Henon2 => "henon2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tol {
    Abs,
    Rel,
}

/// One published value and what we computed for it.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub got: f64,
    pub want: f64,
    pub tolerance: f64,
    pub kind: Tol,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn abs(name: &str, got: f64, want: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            got,
            want,
            tolerance,
            kind: Tol::Abs,
            pass: (got - want).abs() <= tolerance,
            note: None,
        }
    }

    pub fn rel(name: &str, got: f64, want: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            got,
            want,
            tolerance,
            kind: Tol::Rel,
            pass: (got - want).abs() <= tolerance * want.abs(),
            note: None,
        }
    }

    pub fn count(name: &str, got: usize, want: usize) -> Self {
        Check::abs(name, got as f64, want as f64, 0.0)
    }

    /// Absolute comparison at half a unit in the last place of a value
    /// printed to three significant figures.
    pub fn printed(name: &str, got: f64, want: f64) -> Self {
        let step = 10f64.powf(want.abs().log10().floor() - 2.0);
        Check::abs(name, got, want, 0.5 * step + 1e-12)
    }

    pub fn note(mut self, text: &str) -> Self {
        self.note = Some(text.to_string());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub id: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

pub fn run_example(id: ExampleId) -> Result<ExampleReport> {
    let checks = match id {
        ExampleId::Sextic => sextic()?,
        ExampleId::Quartic => quartic()?,
        ExampleId::Quadratic => quadratic()?,
        ExampleId::Henon2 => henon()?,
    };
    Ok(ExampleReport {
        id: id.label().to_string(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

/// Per-check lines for the terminal; the JSON report is the machine
/// form of the same content.
pub fn human_summary(report: &ExampleReport) -> String {
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let mut out = format!(
        "example {}: {passed}/{} checks pass\n",
        report.id,
        report.checks.len()
    );
    for c in &report.checks {
        let flag = if c.pass { "   ok " } else { " FAIL " };
        let kind = match c.kind {
            Tol::Abs => "abs",
            Tol::Rel => "rel",
        };
        out.push_str(&format!(
            "{flag} {}: {} vs {} ({kind} {:e})\n",
            c.name, c.got, c.want, c.tolerance
        ));
        if let Some(note) = &c.note {
            out.push_str(&format!("        note: {note}\n"));
        }
    }
    out
}

fn sextic() -> Result<Vec<Check>> {
    let six = BasicSixTuple::from_array(fixtures::EX341_SIX_TUPLE);
    let sg = SiegelValue::of(&six)?;
    let j = j_invariants(&six, &sg)?;
    let (p, coeffs) = build_polynomial(&j, 1.0);

    let mut checks = Vec::new();
    let real = real_roots(&solve_polynomial(&coeffs)?);
    checks.push(Check::count("real roots at H = 1", real.len(), 2));
    if real.len() == 2 {
        checks.push(Check::abs("root Y1 at H = 1", real[0], fixtures::EX341_ROOTS[0], 1e-7));
        checks.push(Check::abs("root Y2 at H = 1", real[1], fixtures::EX341_ROOTS[1], 1e-7));
    }

    // The published triples are scale coefficients over powers of omega.
    for omega in [-1.0f64, 1.0] {
        let mut report = solve_roots(&p, 1.0)?;
        let triples = admissible_solutions(&mut report, omega, &six, &j);
        checks.push(Check::count(
            &format!("admissible solutions at omega = {omega}"),
            triples.len(),
            1,
        ));
        let Some(t) = triples.first() else { continue };
        let want = if omega < 0.0 {
            fixtures::EX341_TRIPLE_NEG
        } else {
            fixtures::EX341_TRIPLE_POS
        };
        checks.push(Check::rel(
            &format!("rho0 at omega = {omega}"),
            t.rho0,
            want[0] * omega * omega,
            1e-6,
        ));
        checks.push(Check::rel(
            &format!("rho1 at omega = {omega}"),
            t.rho1,
            want[1] / omega,
            1e-6,
        ));
        checks.push(Check::rel(
            &format!("v0 at omega = {omega}"),
            t.v0,
            want[2] / omega.powi(3),
            1e-6,
        ));
    }

    let (_, coeffs_neg) = build_polynomial(&j, -1.0);
    let real_neg = real_roots(&solve_polynomial(&coeffs_neg)?);
    checks.push(Check::count("real roots at H = -1", real_neg.len(), 0));
    Ok(checks)
}

fn quartic() -> Result<Vec<Check>> {
    let six = BasicSixTuple::from_array(fixtures::EX342_SIX_TUPLE);
    let sg = SiegelValue::of(&six)?;
    let j = j_invariants(&six, &sg)?;
    let (p, _) = build_polynomial(&j, 0.0);
    let quartic = p.zero_energy_quartic();

    let mut checks = Vec::new();
    for (k, (computed, printed)) in quartic.iter().zip(fixtures::EX342_QUARTIC_SCALED).enumerate() {
        checks.push(Check::printed(
            &format!("scaled quartic coefficient of Y^{k}"),
            computed / fixtures::EX342_QUARTIC_SCALE,
            printed,
        ));
    }

    let real = real_roots(&solve_polynomial(&quartic)?);
    checks.push(Check::count("real roots", real.len(), 2));
    if real.len() == 2 {
        checks.push(Check::abs("root Y1", real[0], fixtures::EX342_ROOTS[0], 5e-4));
        checks.push(
            Check::abs("root Y2", real[1], fixtures::EX342_ROOTS[1], 5e-4).note(&format!(
                "published as {}, which does not solve the published quartic itself \
                 (residual -0.24 on a unit scale); {} does, and reproduces the printed \
                 companion triple",
                fixtures::EX342_ROOT2_PUBLISHED,
                fixtures::EX342_ROOTS[1],
            )),
        );
    }

    let mut report = solve_roots(&p, 0.0)?;
    let mut triples = admissible_solutions(&mut report, 1.0, &six, &j);
    checks.push(Check::count("admissible solutions at omega = 1", triples.len(), 2));
    triples.sort_by(|a, b| b.rho0.total_cmp(&a.rho0));
    let eps = [[0.05, 5e-4, 5e-6], [5e-4, 5e-4, 5e-4]];
    for (k, (t, want)) in triples.iter().zip(fixtures::EX342_TRIPLES).enumerate() {
        let case = k + 1;
        checks.push(Check::abs(&format!("case {case} rho0"), t.rho0, want[0], eps[k][0]));
        checks.push(Check::abs(&format!("case {case} rho1"), t.rho1, want[1], eps[k][1]));
        checks.push(Check::abs(&format!("case {case} v0"), t.v0, want[2], eps[k][2]));
    }
    Ok(checks)
}

fn quadratic() -> Result<Vec<Check>> {
    let six = BasicSixTuple::from_array(fixtures::EX343_SIX_TUPLE);
    let sg = SiegelValue::of(&six)?;
    let j = j_invariants(&six, &sg)?;
    let (p, _) = build_polynomial(&j, 0.0);

    let mut checks = vec![
        Check::abs("beta3 (K1 = 0 collapse)", p.beta3, 0.0, 0.0),
        Check::abs("beta4 (K1 = 0 collapse)", p.beta4, 0.0, 0.0),
    ];
    let quartic = p.zero_energy_quartic();
    for (k, (computed, printed)) in
        quartic[..3].iter().zip(fixtures::EX343_QUADRATIC_SCALED).enumerate()
    {
        checks.push(Check::printed(
            &format!("scaled quadratic coefficient of Y^{k}"),
            computed / fixtures::EX343_QUADRATIC_SCALE,
            printed,
        ));
    }

    let real = real_roots(&solve_polynomial(&quartic)?);
    checks.push(Check::count("real roots", real.len(), 2));
    if real.len() == 2 {
        checks.push(Check::abs("root Y1", real[0], fixtures::EX343_ROOTS[0], 2e-3));
        checks.push(Check::abs("root Y2", real[1], fixtures::EX343_ROOTS[1], 2e-3));
    }

    let mut report = solve_roots(&p, 0.0)?;
    let mut triples = admissible_solutions(&mut report, 1.0, &six, &j);
    checks.push(Check::count("admissible solutions at omega = 1", triples.len(), 2));
    triples.sort_by(|a, b| b.rho0.total_cmp(&a.rho0));
    for (k, t) in triples.iter().enumerate() {
        let case = k + 1;
        let em = energy_momentum_from_invariants(t, &six);
        let mut energy = Check::abs(&format!("case {case} energy integral"), em.h, 0.0, 1e-9);
        if case == 1 {
            energy = energy.note(&format!(
                "the control the published case-1 rho0 fails: {:.3e} misses the h = 0 \
                 level by six orders of magnitude, while the recomputed {:.5e} passes; \
                 rho1 and v0 are the usable published references for this case",
                fixtures::EX343_TRIPLE_1_RHO0_PUBLISHED,
                t.rho0,
            ));
        }
        checks.push(energy);
        checks.push(Check::rel(&format!("case {case} omega"), em.omega, 1.0, 1e-9));
    }
    if triples.len() == 2 {
        checks.push(Check::abs(
            "case 1 rho1",
            triples[0].rho1,
            fixtures::EX343_TRIPLE_1_RHO1,
            5e-5,
        ));
        checks.push(Check::printed("case 1 v0", triples[0].v0, fixtures::EX343_TRIPLE_1_V0));
        checks.push(Check::printed("case 2 rho0", triples[1].rho0, fixtures::EX343_TRIPLE_2[0]));
        checks.push(Check::printed("case 2 rho1", triples[1].rho1, fixtures::EX343_TRIPLE_2[1]));
        checks.push(Check::printed("case 2 v0", triples[1].v0, fixtures::EX343_TRIPLE_2[2]));
    }
    Ok(checks)
}

fn henon() -> Result<Vec<Check>> {
    let (md, c0) = fixtures::henon2();
    let summary = kinematic_summary(&c0, &md);
    let (h, omega) = (summary.energy, summary.omega);

    let mut checks = vec![
        Check::rel("energy h", h, fixtures::HENON2_ENERGY, 1e-4),
        Check::rel("angular momentum omega", omega, fixtures::HENON2_OMEGA, 1e-4),
    ];

    // The published table marks the syzygy with the opposite curve
    // orientation (the velocity-reversed state at the same omega); the
    // 6-tuple is orientation-covariant, so the comparison lives there.
    let proj = hopf_project(&c0, &md)?;
    let mut marked = proj.state;
    marked.rho_dot = -marked.rho_dot;
    marked.phi_dot = -marked.phi_dot;
    marked.theta_dot = -marked.theta_dot;
    let (six, sg) = basic_six_tuple(&marked, omega, &md)?;

    let want = fixtures::HENON2_SIX_TUPLE;
    let scale = want.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (k, (got, want)) in six.to_array().iter().zip(want).enumerate() {
        let name = ["u0", "u1", "w0", "w1", "K0", "K1"][k];
        if want == 0.0 {
            checks.push(Check::abs(
                &format!("6-tuple {name} (zero by symmetry)"),
                *got,
                0.0,
                1e-6 * scale,
            ));
        } else {
            checks.push(Check::rel(&format!("6-tuple {name}"), *got, want, 1e-4));
        }
    }

    let j = j_invariants(&six, &sg)?;
    let big_h = h * omega * omega;
    let (p, _) = build_polynomial(&j, big_h);
    let mut report = solve_roots(&p, big_h)?;
    let mut triples = admissible_solutions(&mut report, omega, &six, &j);

    // The sextic also has two negative real roots; the published pair
    // are the admissible (positive) ones.
    let mut admissible: Vec<f64> = report
        .roots
        .iter()
        .filter(|r| r.admissible)
        .map(|r| r.value.re)
        .collect();
    admissible.sort_by(|a, b| b.total_cmp(a));
    checks.push(Check::count("admissible roots", admissible.len(), 2));
    if admissible.len() == 2 {
        checks.push(Check::rel("root Y1", admissible[0], fixtures::HENON2_ROOTS[0], 1e-8));
        checks.push(Check::rel("root Y2", admissible[1], fixtures::HENON2_ROOTS[1], 1e-8));
    }

    triples.sort_by(|a, b| a.rho0.total_cmp(&b.rho0));
    if triples.len() == 2 {
        let (companion, original) = (&triples[0], &triples[1]);
        let w = fixtures::HENON2_TRIPLES;
        checks.push(Check::abs("original rho0", original.rho0, w[1][0], 5e-6));
        checks.push(Check::abs("original rho1", original.rho1, w[1][1], 1e-4));
        checks.push(Check::abs("original v0", original.v0, w[1][2], 5e-6));
        checks.push(Check::abs("companion rho0", companion.rho0, w[0][0], 5e-6));
        checks.push(Check::abs("companion rho1", companion.rho1, w[0][1], 1e-4));
        checks.push(
            Check::abs("companion v0", companion.v0, w[0][2], 5e-1).note(
                "v0 = Y/rho0 amplifies the published rounding of the large root; \
                 the slack is about 4e-5 relative",
            ),
        );
        checks.push(Check::rel(
            "original rho0 equals the size of the raw data",
            original.rho0,
            summary.rho,
            1e-9,
        ));
    }
    Ok(checks)
}
