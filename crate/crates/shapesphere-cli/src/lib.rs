//! Command-line front end for the shapesphere library.
//!
//! Five commands share one flag set: `simulate-full` integrates the
//! planar three-body equations and projects the result to the moduli
//! cone, `simulate-reduced` integrates the reduced equations directly,
//! `invariants` evaluates the shape-curve record (6-tuple, Siegel
//! coefficients, conserved pair) at a single state, `reconstruct` solves
//! the inverse problem from such a record, and `example` replays a
//! worked example against its published values.
//!
//! Exit codes: 0 all checks pass, 2 a published value comparison failed,
//! 3 singular or degenerate input, 4 I/O or configuration trouble.

pub mod examples;
pub mod io;
pub mod rows;
pub mod run;
