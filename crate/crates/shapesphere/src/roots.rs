//! Real-coefficient polynomial roots for the reconstruction system.
//!
//! Coefficients are ascending (c[k] multiplies x^k). Degrees up to two
//! get closed forms; higher degrees go through the companion matrix with
//! one Newton polish per eigenvalue. The trim threshold is relative, so
//! rescaling the polynomial never changes the computed roots.

use crate::consts::{POLY_TRIM_REL, ROOT_IMAG_TOL};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

pub type Complex64 = nalgebra::Complex<f64>;

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex64::new(c, 0.0);
    }
    (p, dp)
}

/// All complex roots of the polynomial with the given ascending real
/// coefficients. Trailing coefficients below POLY_TRIM_REL times the
/// largest magnitude are treated as zero; the identically zero
/// polynomial is degenerate. Leading coefficients that are exactly zero
/// are deflated first: each contributes one exact root at the origin,
/// where the eigenvalue route would smear a multiple zero across
/// O(sqrt(eps)) spurious values.
pub fn solve_polynomial(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 || coeffs.is_empty() {
        return Err(Error::Degenerate(
            "zero polynomial has no isolated roots".into(),
        ));
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= POLY_TRIM_REL * scale {
        deg -= 1;
    }
    let at_zero = coeffs[..deg].iter().take_while(|&&c| c == 0.0).count();
    let c = &coeffs[at_zero..=deg];
    let deg = deg - at_zero;

    let mut roots = match deg {
        0 => Vec::new(),
        1 => vec![Complex64::new(-c[0] / c[1], 0.0)],
        2 => solve_quadratic(c[0], c[1], c[2]),
        _ => companion_roots(c),
    };
    for r in &mut roots {
        *r = polish(c, *r);
    }
    roots.extend((0..at_zero).map(|_| Complex64::new(0.0, 0.0)));
    Ok(roots)
}

fn solve_quadratic(c0: f64, c1: f64, c2: f64) -> Vec<Complex64> {
    if c0 == 0.0 {
        return vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(-c1 / c2, 0.0),
        ];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc >= 0.0 {
        // Evaluate the well-conditioned root first, then divide it out.
        let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
        vec![Complex64::new(q / c2, 0.0), Complex64::new(c0 / q, 0.0)]
    } else {
        let re = -0.5 * c1 / c2;
        let im = 0.5 * (-disc).sqrt() / c2.abs();
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn companion_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn polish(c: &[f64], z: Complex64) -> Complex64 {
    let (p, dp) = horner(c, z);
    if dp.norm() < 1e-300 {
        return z;
    }
    let candidate = z - p / dp;
    let (p_new, _) = horner(c, candidate);
    if p_new.norm() < p.norm() {
        candidate
    } else {
        z
    }
}

/// The real members of a root set, sorted ascending. A root counts as
/// real when its imaginary part is below ROOT_IMAG_TOL on the scale of
/// its real part.
pub fn real_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut out: Vec<f64> = roots
        .iter()
        .filter(|z| z.im.abs() < ROOT_IMAG_TOL * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out
}
