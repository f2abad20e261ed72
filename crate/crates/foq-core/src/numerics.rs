//! Shared numerical machinery: phase-reduced trigonometry, adaptive
//! Simpson integration, a dense complex solver, and a log-log slope fit.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Hard cap on dyadic refinement: `2^20` panels on the finest level.
pub const MAX_REFINEMENT_LEVELS: u32 = 20;

/// Refinement levels that must always be performed before the stopping
/// rule may fire.  Oscillatory integrands can alias to near-agreement on
/// coarse grids; forcing at least `2^5` panels (plus two consecutive small
/// corrections, see below) rules that out for every frequency used here.
pub const MIN_REFINEMENT_LEVELS: u32 = 5;

fn tau_sin_cos(turns: f64) -> (f64, f64) {
    let angle = TAU * turns.abs().fract();
    angle.sin_cos()
}

/// `cos(2 pi turns)`, with the argument reduced modulo one turn before any
/// multiplication by `2 pi`.  Exactly even in `turns`.
pub(crate) fn cos_tau(turns: f64) -> f64 {
    tau_sin_cos(turns).1
}

/// `sin(2 pi turns)`, reduced the same way and exactly odd in `turns`.
pub(crate) fn sin_tau(turns: f64) -> f64 {
    let (s, _) = tau_sin_cos(turns);
    if turns < 0.0 {
        -s
    } else {
        s
    }
}

/// `sin(pi x)`, exactly odd in `x`.
pub(crate) fn sin_pi(x: f64) -> f64 {
    sin_tau(x * 0.5)
}

/// `e^{2 pi i turns}` on the unit circle.
///
/// Negating `turns` conjugates the result bitwise, which is what makes the
/// conjugate-symmetry identities of the coefficient formulas hold exactly
/// in floating point rather than merely up to rounding.
pub(crate) fn unit_phase(turns: f64) -> Complex64 {
    let (s, c) = tau_sin_cos(turns);
    let s = if turns < 0.0 { -s } else { s };
    Complex64::new(c, s)
}

/// `1 + e^{2h} - 2 e^h cos(2 pi omega h)`, the quantity controlling both
/// the coefficient magnitudes and the error norm.
///
/// The textbook form cancels catastrophically for small `h` and small
/// `omega h`; rewriting it as `4 e^h (sinh^2(h/2) + sin^2(pi omega h))`
/// keeps every term nonnegative.
pub(crate) fn exp_cos_gap(omega: f64, h: f64) -> f64 {
    let sh = (0.5 * h).sinh();
    let sp = sin_pi(omega * h);
    4.0 * h.exp() * (sh * sh + sp * sp)
}

/// Composite-Simpson value over `[a, b]` with `2^level` panels, refined
/// dyadically until two consecutive refinements change the result by less
/// than `tol` (absolute), with at least [`MIN_REFINEMENT_LEVELS`] performed.
///
/// Exceeding [`MAX_REFINEMENT_LEVELS`] is an error, never a silent
/// truncation.
pub fn refine_simpson_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::argument(format!("integration tolerance must be positive, got {tol}")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::argument(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a > b {
        return Err(Error::argument(format!("integration limits must be ordered, got [{a}, {b}]")));
    }

    // Trapezoid ladder: T_k uses 2^k panels and each refinement only
    // evaluates the new midpoints.  S_k = (4 T_k - T_{k-1}) / 3 is the
    // composite Simpson value on 2^k panels.
    let mut trap = 0.5 * (b - a) * (f(a) + f(b));
    let mut simpson_prev: Option<Complex64> = None;
    let mut last_delta = f64::INFINITY;
    let mut small_streak = 0u32;

    for level in 1..=MAX_REFINEMENT_LEVELS {
        let new_points = 1usize << (level - 1);
        let step = (b - a) / new_points as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..new_points {
            let x = a + step * (j as f64 + 0.5);
            acc += f(x);
        }
        let trap_next = 0.5 * trap + 0.5 * step * acc;
        let simpson = (4.0 * trap_next - trap) / 3.0;

        if let Some(prev) = simpson_prev {
            last_delta = (simpson - prev).norm();
            if last_delta < tol {
                small_streak += 1;
                if small_streak >= 2 && level >= MIN_REFINEMENT_LEVELS {
                    return Ok(simpson);
                }
            } else {
                small_streak = 0;
            }
        }
        simpson_prev = Some(simpson);
        trap = trap_next;
    }

    Err(Error::IntegrationDidNotConverge {
        a,
        b,
        levels: MAX_REFINEMENT_LEVELS,
        last_delta,
        tolerance: tol,
    })
}

/// Real-valued wrapper around [`refine_simpson_complex`].
pub fn refine_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    refine_simpson_complex(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|v| v.re)
}

/// Integrate piecewise over consecutive pairs of `breaks`, giving each
/// piece an equal share of `tol`.  Use this whenever the integrand has a
/// known kink (the kernel at the origin, a sample node, ...): placing the
/// kink on a piece boundary restores Simpson's convergence order.
pub fn refine_simpson_piecewise_complex(
    f: impl Fn(f64) -> Complex64,
    breaks: &[f64],
    tol: f64,
) -> Result<Complex64> {
    if breaks.len() < 2 {
        return Err(Error::argument("piecewise integration needs at least two breakpoints"));
    }
    let pieces = breaks.len() - 1;
    let piece_tol = tol / pieces as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo > hi {
            return Err(Error::argument(format!(
                "piecewise breakpoints must be non-decreasing, got {lo} then {hi}"
            )));
        }
        total += refine_simpson_complex(&f, lo, hi, piece_tol)?;
    }
    Ok(total)
}

/// Real-valued wrapper around [`refine_simpson_piecewise_complex`].
pub fn refine_simpson_piecewise(f: impl Fn(f64) -> f64, breaks: &[f64], tol: f64) -> Result<f64> {
    refine_simpson_piecewise_complex(|x| Complex64::new(f(x), 0.0), breaks, tol).map(|v| v.re)
}

/// `int_a^b e^{2 pi i omega x} f(x) dx` by adaptive Simpson, with the
/// domain pre-split on the oscillation period so the refinement ladder
/// starts from panels that already resolve the phase.
pub fn oscillatory_integral(
    f: impl Fn(f64) -> f64,
    omega: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    if !omega.is_finite() {
        return Err(Error::argument(format!("frequency must be finite, got {omega}")));
    }
    let span = b - a;
    let panels = ((omega.abs() * span).ceil() as usize).clamp(1, 4096);
    let breaks: Vec<f64> = (0..=panels)
        .map(|k| {
            let t = k as f64 / panels as f64;
            a * (1.0 - t) + b * t
        })
        .collect();
    refine_simpson_piecewise_complex(|x| unit_phase(omega * x) * f(x), &breaks, tol)
}

/// LU decomposition (partial pivoting) of a dense complex matrix stored
/// row-major.
pub(crate) struct ComplexLu {
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
    dim: usize,
}

pub(crate) fn lu_factor(matrix: &[Complex64], dim: usize) -> Result<ComplexLu> {
    assert_eq!(matrix.len(), dim * dim, "matrix storage does not match dimension");
    let mut lu = matrix.to_vec();
    let mut pivots = vec![0usize; dim];
    let scale = lu.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let pivot_floor = scale * f64::EPSILON * dim as f64;

    for col in 0..dim {
        let mut best = col;
        let mut best_mag = lu[col * dim + col].norm();
        for row in (col + 1)..dim {
            let mag = lu[row * dim + col].norm();
            if mag > best_mag {
                best_mag = mag;
                best = row;
            }
        }
        if !(best_mag > pivot_floor) {
            return Err(Error::SingularSystem { step: col, pivot: best_mag });
        }
        pivots[col] = best;
        if best != col {
            for k in 0..dim {
                lu.swap(col * dim + k, best * dim + k);
            }
        }
        let pivot = lu[col * dim + col];
        for row in (col + 1)..dim {
            let factor = lu[row * dim + col] / pivot;
            lu[row * dim + col] = factor;
            for k in (col + 1)..dim {
                let sub = factor * lu[col * dim + k];
                lu[row * dim + k] -= sub;
            }
        }
    }

    Ok(ComplexLu { lu, pivots, dim })
}

impl ComplexLu {
    pub(crate) fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(rhs.len(), self.dim, "right-hand side does not match dimension");
        let n = self.dim;
        let mut x = rhs.to_vec();
        for col in 0..n {
            x.swap(col, self.pivots[col]);
        }
        for row in 1..n {
            let mut acc = x[row];
            for k in 0..row {
                acc -= self.lu[row * n + k] * x[k];
            }
            x[row] = acc;
        }
        for row in (0..n).rev() {
            let mut acc = x[row];
            for k in (row + 1)..n {
                acc -= self.lu[row * n + k] * x[k];
            }
            x[row] = acc / self.lu[row * n + row];
        }
        x
    }
}

fn matvec(matrix: &[Complex64], x: &[Complex64], dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|row| {
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..dim {
                acc += matrix[row * dim + col] * x[col];
            }
            acc
        })
        .collect()
}

pub(crate) fn vec_norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn frobenius_norm(matrix: &[Complex64]) -> f64 {
    matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Solve `A x = b` with one step of iterative refinement.  Returns the
/// solution together with the 2-norm of the final residual `b - A x`.
pub(crate) fn solve_with_refinement(
    matrix: &[Complex64],
    rhs: &[Complex64],
    dim: usize,
) -> Result<(Vec<Complex64>, f64)> {
    let lu = lu_factor(matrix, dim)?;
    let mut x = lu.solve(rhs);
    let residual: Vec<Complex64> = matvec(matrix, &x, dim)
        .iter()
        .zip(rhs)
        .map(|(ax, b)| b - ax)
        .collect();
    let correction = lu.solve(&residual);
    for (xi, di) in x.iter_mut().zip(&correction) {
        *xi += di;
    }
    let final_residual: Vec<Complex64> = matvec(matrix, &x, dim)
        .iter()
        .zip(rhs)
        .map(|(ax, b)| b - ax)
        .collect();
    Ok((x, vec_norm2(&final_residual)))
}

/// Least-squares slope of `ln y` against `ln x`.  Inputs must be positive;
/// this is the standard empirical-order fit for convergence studies.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::argument("slope fit needs equally many abscissas and ordinates"));
    }
    if xs.len() < 2 {
        return Err(Error::argument("slope fit needs at least two points"));
    }
    let mut us = Vec::with_capacity(xs.len());
    let mut vs = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
            return Err(Error::argument(format!(
                "slope fit needs positive finite data, got ({x}, {y})"
            )));
        }
        us.push(x.ln());
        vs.push(y.ln());
    }
    let n = us.len() as f64;
    let u_mean = us.iter().sum::<f64>() / n;
    let v_mean = vs.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (u, v) in us.iter().zip(&vs) {
        num += (u - u_mean) * (v - v_mean);
        den += (u - u_mean) * (u - u_mean);
    }
    if den == 0.0 {
        return Err(Error::argument("slope fit needs at least two distinct abscissas"));
    }
    Ok(num / den)
}
