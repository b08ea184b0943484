//! Adaptive explicit Runge-Kutta driver.
//!
//! Dormand-Prince 5(4) pair with FSAL, PI step-size control and optional
//! fixed-stride sampling. The right-hand side may refuse an evaluation
//! (domain error, collision); the driver responds by shrinking the step,
//! and gives up with a halt reason instead of panicking. Integration runs
//! in either time direction.

use crate::consts::{DEFAULT_ATOL, DEFAULT_RTOL};
use crate::error::{HaltReason, Result};

/// Vector field for a first-order system of dimension N.
pub trait OdeRhs<const N: usize> {
    /// Evaluate the field. Errors mark states outside the domain; the
    /// driver reacts by halving the step and eventually halting.
    fn eval(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;

    /// Inspect an accepted state. Returning a reason stops the integration
    /// there; the partial trajectory up to that point is kept.
    fn inspect(&self, _t: f64, _y: &[f64; N]) -> Option<HaltReason> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Initial step guess; estimated from the field when absent.
    pub h_init: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
            max_steps: 20_000_000,
            h_init: None,
        }
    }
}

/// Sampled solution. `halt` is None when the end of the span was reached;
/// otherwise the last row holds the final accepted state before the halt.
#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub halt: Option<HaltReason>,
    pub n_steps: usize,
    pub n_rejected: usize,
}

impl<const N: usize> OdeSolution<N> {
    pub fn last(&self) -> (f64, &[f64; N]) {
        (*self.t.last().unwrap(), self.y.last().unwrap())
    }
}

// Dormand-Prince coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
// Step-ratio clamps: divider fac stays in [1/FAC2, 1/FAC1].
const FAC1: f64 = 0.2;
const FAC2: f64 = 10.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn error_norm<const N: usize>(
    err: &[f64; N],
    y0: &[f64; N],
    y1: &[f64; N],
    rtol: f64,
    atol: f64,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sk = atol + rtol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sk;
        acc += r * r;
    }
    (acc / N as f64).sqrt()
}

/// Starting step along Hairer's recipe: balance the field magnitude against
/// the state magnitude, refine with one explicit Euler probe.
fn initial_step<const N: usize, F: OdeRhs<N>>(
    rhs: &F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    dir: f64,
    span: f64,
    rtol: f64,
    atol: f64,
) -> f64 {
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..N {
        let sk = atol + rtol * y0[i].abs();
        dnf += (f0[i] / sk).powi(2);
        dny += (y0[i] / sk).powi(2);
    }
    let mut h0 = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        0.01 * (dny / dnf).sqrt()
    };
    h0 = h0.min(span);

    let y1 = axpy(y0, dir * h0, &[(1.0, f0)]);
    let h1 = match rhs.eval(t0 + dir * h0, &y1) {
        Ok(f1) => {
            let mut der2 = 0.0;
            for i in 0..N {
                let sk = atol + rtol * y0[i].abs();
                der2 += ((f1[i] - f0[i]) / sk).powi(2);
            }
            let der2 = der2.sqrt() / h0;
            let der12 = der2.max(dnf.sqrt());
            if der12 <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / der12).powf(0.2)
            }
        }
        Err(_) => h0 * 1e-3,
    };
    dir * h1.min(100.0 * h0).min(span)
}

/// Integrate from t0 to t1 (either direction), sampling at t0 + k*stride
/// for `stride = Some(s)` or at every accepted step for None. The final
/// time reached is always the last sample. Fails outright only when the
/// initial state itself is outside the domain; later trouble is reported
/// as a halt with the partial trajectory kept.
pub fn integrate<const N: usize, F: OdeRhs<N>>(
    rhs: &F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    stride: Option<f64>,
    opts: &OdeOptions,
) -> Result<OdeSolution<N>> {
    let mut sol = OdeSolution {
        t: vec![t0],
        y: vec![y0],
        halt: None,
        n_steps: 0,
        n_rejected: 0,
    };
    if t1 == t0 {
        return Ok(sol);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let stride = stride.map(f64::abs);

    if let Some(reason) = rhs.inspect(t0, &y0) {
        sol.halt = Some(reason);
        return Ok(sol);
    }
    let mut k1 = rhs.eval(t0, &y0)?;

    let mut t = t0;
    let mut y = y0;
    let mut h = match opts.h_init {
        Some(h) => dir * h.abs().min(span),
        None => initial_step(rhs, t0, &y0, &k1, dir, span, opts.rtol, opts.atol),
    };
    let mut facold = 1e-4_f64;
    let mut last_rejected = false;
    // Index of the next stride sample (sample 0 is t0 itself).
    let mut next_sample = 1usize;

    loop {
        if sol.n_steps + sol.n_rejected >= opts.max_steps {
            sol.halt = Some(HaltReason::MaxStepsExceeded);
            push_final(&mut sol, t, &y);
            return Ok(sol);
        }
        // Clamp onto the next sample time or the end of the span,
        // whichever comes first.
        let next_target = match stride {
            Some(s) => {
                let ts = t0 + dir * s * next_sample as f64;
                if dir * (ts - t1) < 0.0 { ts } else { t1 }
            }
            None => t1,
        };
        let mut h_try = h;
        let mut clamped = false;
        if dir * (t + h_try - next_target) >= 0.0 {
            h_try = next_target - t;
            clamped = true;
        }
        if h_try.abs() < 4.0 * f64::EPSILON * t.abs().max(1.0) {
            sol.halt = Some(HaltReason::StepSizeUnderflow);
            push_final(&mut sol, t, &y);
            return Ok(sol);
        }

        // One attempted step. Any stage failure is treated like a
        // rejected step at half the size.
        let hs = h_try;
        let stages = (|| -> Result<([f64; N], [f64; N], [f64; N])> {
            let k2 = rhs.eval(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
            let k3 = rhs.eval(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = rhs.eval(
                t + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = rhs.eval(
                t + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = rhs.eval(
                t + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let ynew = axpy(
                &y,
                hs,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = rhs.eval(t + hs, &ynew)?;
            let mut err = [0.0; N];
            let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
            for (c, k) in E.iter().zip(ks) {
                for i in 0..N {
                    err[i] += hs * c * k[i];
                }
            }
            Ok((ynew, k7, err))
        })();

        let (ynew, k7, errv) = match stages {
            Ok(v) => v,
            Err(_) => {
                sol.n_rejected += 1;
                last_rejected = true;
                h = 0.5 * h_try;
                continue;
            }
        };

        let err = error_norm(&errv, &y, &ynew, opts.rtol, opts.atol);
        if !err.is_finite() {
            sol.n_rejected += 1;
            last_rejected = true;
            h = 0.5 * h_try;
            continue;
        }

        if err <= 1.0 {
            sol.n_steps += 1;
            t = if clamped { next_target } else { t + h_try };
            y = ynew;
            k1 = k7;

            let on_sample = match stride {
                Some(_) => clamped,
                None => true,
            };
            if on_sample {
                sol.t.push(t);
                sol.y.push(y);
                if stride.is_some() && t != t1 {
                    next_sample += 1;
                }
            }
            if let Some(reason) = rhs.inspect(t, &y) {
                sol.halt = Some(reason);
                push_final(&mut sol, t, &y);
                return Ok(sol);
            }
            if t == t1 {
                push_final(&mut sol, t, &y);
                return Ok(sol);
            }

            let fac = ((err.powf(EXPO1) / facold.powf(BETA)) / SAFE)
                .clamp(1.0 / FAC2, 1.0 / FAC1);
            let mut hnew = h_try / fac;
            if last_rejected {
                hnew = dir * hnew.abs().min(h_try.abs());
            }
            facold = err.max(1e-4);
            last_rejected = false;
            // A step clamped onto the sample grid says nothing about
            // accuracy headroom; do not let it shrink the controller step.
            h = if clamped { dir * hnew.abs().max(h.abs()) } else { hnew };
        } else {
            sol.n_rejected += 1;
            last_rejected = true;
            h = h_try / (err.powf(EXPO1) / SAFE).min(1.0 / FAC1);
        }
    }
}

fn push_final<const N: usize>(sol: &mut OdeSolution<N>, t: f64, y: &[f64; N]) {
    if *sol.t.last().unwrap() != t {
        sol.t.push(t);
        sol.y.push(*y);
    }
}
