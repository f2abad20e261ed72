//! The worst-case quadrature error: closed form, small-spacing expansion,
//! and a brute-force evaluation of the defining quadratic form.

use std::f64::consts::TAU;

use crate::coefficients::{optimal_coefficients_unit, CoefficientSet};
use crate::error::{Error, Result};
use crate::grid::{FourierWeight, UniformGrid};
use crate::numerics::{
    cos_tau, exp_cos_gap, refine_simpson_piecewise, refine_simpson_piecewise_complex, unit_phase,
};
use crate::oracle::kernel_g;

/// Per-integral stopping tolerance inside the brute-force norm; the
/// agreement checks against the closed form run at 1e-8, so this leaves
/// three orders of headroom.
const BRUTE_FORCE_TOL: f64 = 1e-11;

/// Squared norm of the error functional of the optimal rule on the unit
/// grid: with `c = 2 pi omega`, `A = c^2 + 1`, `h = 1/n` and
/// `K = 1 + e^{2h} - 2 e^h cos(c h)`,
///
/// `||l||^2 = (A - 2 K / (h (e^{2h} - 1))) / A^2`.
///
/// This is the tight worst-case error constant over the unit ball of the
/// semi-norm `|| phi' + phi ||_{L_2(0,1)}`.
pub fn norm_squared_closed(omega: FourierWeight, n_intervals: usize) -> Result<f64> {
    if n_intervals == 0 {
        return Err(Error::argument("grid needs at least one interval"));
    }
    let w = omega.value();
    let h = 1.0 / n_intervals as f64;
    let c = TAU * w;
    let quad = c * c + 1.0;
    let value = (quad - 2.0 * exp_cos_gap(w, h) / (h * (2.0 * h).exp_m1())) / (quad * quad);
    // The quantity is a squared norm; a negative result can only be
    // rounding residue from the leading subtraction at extreme n.
    Ok(value.max(0.0))
}

/// Two-term small-spacing expansion of [`norm_squared_closed`]:
///
/// `||l||^2 = h^2/12 - ((2 pi omega)^2 + 3) h^4 / 360 + O(h^6)`.
///
/// Meaningful as an estimate only while `2 pi omega h` is small; for
/// coarse grids at high frequency the truncated series can go negative.
pub fn norm_squared_asymptotic(omega: FourierWeight, h: f64) -> Result<f64> {
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::argument(format!("grid spacing must be nonnegative, got {h}")));
    }
    let c = TAU * omega.value();
    Ok(h * h * (1.0 / 12.0 - (c * c + 3.0) * h * h / 360.0))
}

/// Evaluate the squared error norm of an arbitrary admissible weight set
/// directly from its definition, with every integral done by adaptive
/// quadrature: the kernel Gram double sum, the cross terms against the
/// weighted kernel integrals, and the kernel double integral (collapsed
/// along diagonals `t = x - y` to `int_{-1}^{1} (1-|t|) cos(2 pi omega t) G(t) dt`).
///
/// Shares no algebra with [`norm_squared_closed`] beyond the kernel
/// itself, which is what makes the agreement check meaningful.
pub fn norm_squared_bruteforce(coeffs: &CoefficientSet) -> Result<f64> {
    if !coeffs.grid().is_unit() {
        return Err(Error::GridMismatch(
            "the brute-force norm is defined on the unit grid; rescale first".into(),
        ));
    }
    let n = coeffs.grid().n_intervals();
    let h = coeffs.grid().spacing();
    let w = coeffs.omega().value();
    let values = coeffs.values();

    // Kernel values only ever appear at node differences.
    let kernel_table: Vec<f64> = (0..=n).map(|d| kernel_g(h * d as f64)).collect();

    let mut gram = 0.0;
    for (beta, cb) in values.iter().enumerate() {
        for (gamma, cg) in values.iter().enumerate() {
            let d = beta.abs_diff(gamma);
            gram += (cb.re * cg.re + cb.im * cg.im) * kernel_table[d];
        }
    }

    let mut cross_re = 0.0;
    let mut cross_im = 0.0;
    for (beta, c) in values.iter().enumerate() {
        let t = h * beta as f64;
        let integral = refine_simpson_piecewise_complex(
            |x| unit_phase(w * x) * kernel_g(x - t),
            &[0.0, t, 1.0],
            BRUTE_FORCE_TOL,
        )?;
        cross_re += c.re * integral.re;
        cross_im += c.im * integral.im;
    }

    let double = refine_simpson_piecewise(
        |t| (1.0 - t.abs()) * cos_tau(w * t) * kernel_g(t),
        &[-1.0, 0.0, 1.0],
        BRUTE_FORCE_TOL,
    )?;

    Ok(-(gram - 2.0 * cross_re - 2.0 * cross_im + double))
}

/// Error-norm summary for a rule on an arbitrary grid.
///
/// On `[a, b]` the rule is the transported unit rule at frequency
/// `omega (b - a)`, and its worst-case error is measured against the
/// unit-interval semi-norm of the rescaled integrand; that scales every
/// squared norm by `(b - a)^2`.
#[derive(Debug, Clone)]
pub struct ErrorNormReport {
    pub norm_squared: f64,
    pub asymptotic_estimate: f64,
    pub brute_force_value: Option<f64>,
    pub omega: FourierWeight,
    pub grid: UniformGrid,
}

/// Assemble an [`ErrorNormReport`]; the brute-force value is optional
/// because it is by far the most expensive entry.
pub fn error_norm_report(
    omega: FourierWeight,
    grid: UniformGrid,
    include_brute_force: bool,
) -> Result<ErrorNormReport> {
    let unit_omega = FourierWeight::new(omega.value() * grid.length())?;
    let n = grid.n_intervals();
    let scale = grid.length() * grid.length();
    let norm_squared = scale * norm_squared_closed(unit_omega, n)?;
    let asymptotic_estimate = scale * norm_squared_asymptotic(unit_omega, 1.0 / n as f64)?;
    let brute_force_value = if include_brute_force {
        let unit_coeffs = optimal_coefficients_unit(unit_omega, n)?;
        Some(scale * norm_squared_bruteforce(&unit_coeffs)?)
    } else {
        None
    };
    Ok(ErrorNormReport { norm_squared, asymptotic_estimate, brute_force_value, omega, grid })
}
