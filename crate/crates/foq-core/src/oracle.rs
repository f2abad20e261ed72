//! Independent certification of the closed-form results.
//!
//! Everything here is built from first principles: the reproducing kernel
//! of the semi-norm, the optimality system it induces on the weights, the
//! discrete operator that inverts the kernel on the grid, and the extremal
//! function whose pairing with the error functional reproduces the squared
//! error norm.  None of it evaluates the closed-form coefficient
//! expressions, so agreement between this module and [`crate::coefficients`]
//! is evidence, not tautology.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{E, TAU};
use std::ops::RangeInclusive;

use crate::coefficients::CoefficientSet;
use crate::error::{Error, Result};
use crate::grid::{FourierWeight, UniformGrid};
use crate::numerics::{
    frobenius_norm, refine_simpson_piecewise_complex, solve_with_refinement, unit_phase, vec_norm2,
};

const CZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Stopping tolerance for the inner convolution integral of the extremal
/// function.
const CONVOLUTION_TOL: f64 = 1e-13;

/// Stopping tolerance for the outer pairing quadrature.
const PAIRING_TOL: f64 = 1e-11;

/// Panel-doubling budget for the outer pairing quadrature.
const PAIRING_MAX_PANELS_PER_INTERVAL: usize = 1 << 10;

/// Reproducing kernel of the semi-norm on the orthogonal complement of its
/// null space: `G(x) = sign(x) sinh(x) / 2`, an even function vanishing at
/// the origin.
pub fn kernel_g(x: f64) -> f64 {
    0.5 * x.abs().sinh()
}

/// Right-hand side of the optimality system at node `beta`:
/// the defining integral `int_0^1 e^{2 pi i omega x} G(x - h beta) dx`
/// in closed form.  With `u = 2 pi i omega`:
///
/// `f(t) = e^{-t} (e^{u+1} + 1) / (4(u+1))
///        - e^{t} (e^{u-1} + 1) / (4(u-1))
///        + e^{u t} / ((u+1)(u-1))`
pub fn rhs_f(omega: FourierWeight, h: f64, beta: usize) -> Result<Complex64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::argument(format!("grid spacing must be positive, got {h}")));
    }
    let t = h * beta as f64;
    if t > 1.0 + 1e-9 {
        return Err(Error::argument(format!(
            "node h * beta = {t} lies outside the unit interval"
        )));
    }
    let w = omega.value();
    let u_plus = Complex64::new(1.0, TAU * w); // u + 1
    let u_minus = Complex64::new(-1.0, TAU * w); // u - 1
    let phase = unit_phase(w); // e^{2 pi i omega}
    let term_decay = (-t).exp() * (E * phase + 1.0) / (4.0 * u_plus);
    let term_growth = t.exp() * (phase / E + 1.0) / (4.0 * u_minus);
    let term_node = unit_phase(w * t) / (u_plus * u_minus);
    Ok(term_decay - term_growth + term_node)
}

/// Exactness right-hand side: `int_0^1 e^{2 pi i omega x} e^{-x} dx`.
pub fn rhs_g0(omega: FourierWeight) -> Complex64 {
    let w = omega.value();
    (unit_phase(w) / E - 1.0) / Complex64::new(-1.0, TAU * w)
}

/// Companion integral `int_0^1 e^{2 pi i omega x} e^{x} dx`, the target of
/// the growth-side exactness identity the optimal rule satisfies.
pub fn growth_integral(omega: FourierWeight) -> Complex64 {
    let w = omega.value();
    (E * unit_phase(w) - 1.0) / Complex64::new(1.0, TAU * w)
}

/// The dense `(n+2) x (n+2)` optimality system on the unit grid: a kernel
/// Gram block bordered by the decay samples `e^{-h beta}` (the Lagrange
/// column enforcing exactness on the semi-norm kernel), with a zero corner.
#[derive(Debug, Clone)]
pub struct OptimalitySystem {
    matrix: Vec<Complex64>,
    rhs: Vec<Complex64>,
    omega: FourierWeight,
    n_intervals: usize,
}

impl OptimalitySystem {
    pub fn dim(&self) -> usize {
        self.n_intervals + 2
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn omega(&self) -> FourierWeight {
        self.omega
    }

    pub fn matrix_entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn rhs_entry(&self, row: usize) -> Complex64 {
        self.rhs[row]
    }
}

/// Assemble the optimality system for the unit grid with `n_intervals`
/// intervals.  Row `beta <= n` states that the rule reproduces the kernel
/// column `G(. - h beta)`; the final row is the exactness constraint.
pub fn build_system(omega: FourierWeight, n_intervals: usize) -> Result<OptimalitySystem> {
    let grid = UniformGrid::unit(n_intervals)?;
    let n = n_intervals;
    let nf = n as f64;
    let h = grid.spacing();
    let dim = n + 2;
    let mut matrix = vec![CZERO; dim * dim];
    let mut rhs = vec![CZERO; dim];

    for beta in 0..=n {
        for gamma in 0..=n {
            let g = kernel_g(h * (beta as f64 - gamma as f64));
            matrix[beta * dim + gamma] = Complex64::new(g, 0.0);
        }
        let decay = (-(beta as f64) / nf).exp();
        matrix[beta * dim + (n + 1)] = Complex64::new(decay, 0.0);
        matrix[(n + 1) * dim + beta] = Complex64::new(decay, 0.0);
        rhs[beta] = rhs_f(omega, h, beta)?;
    }
    // The corner entry matrix[n+1][n+1] stays zero: the Lagrange multiplier
    // does not constrain itself.
    rhs[n + 1] = rhs_g0(omega);

    Ok(OptimalitySystem { matrix, rhs, omega, n_intervals })
}

/// Solution of an [`OptimalitySystem`]: the oracle's weights, the Lagrange
/// multiplier (zero at the optimum, up to solver accuracy), and the norms
/// needed to judge the solver residual.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub coefficients: CoefficientSet,
    pub lagrange_d: Complex64,
    pub residual_norm: f64,
    pub matrix_norm: f64,
    pub solution_norm: f64,
}

impl OracleSolution {
    /// Residual scaled by `||M|| ||z||`; a backward-stable solve keeps this
    /// near machine precision.
    pub fn residual_ratio(&self) -> f64 {
        self.residual_norm / (self.matrix_norm * self.solution_norm)
    }
}

/// Solve the optimality system by dense LU with partial pivoting and one
/// step of iterative refinement.
pub fn solve_system(system: &OptimalitySystem) -> Result<OracleSolution> {
    let dim = system.dim();
    let n = system.n_intervals;
    let (solution, residual_norm) = solve_with_refinement(&system.matrix, &system.rhs, dim)?;
    let coefficients = CoefficientSet::from_parts(
        solution[..=n].to_vec(),
        system.omega,
        UniformGrid::unit(n)?,
    )?;
    Ok(OracleSolution {
        coefficients,
        lagrange_d: solution[n + 1],
        residual_norm,
        matrix_norm: frobenius_norm(&system.matrix),
        solution_norm: vec_norm2(&solution),
    })
}

/// Build and solve the unit-grid optimality system in one call.
pub fn solve_optimality(omega: FourierWeight, n_intervals: usize) -> Result<OracleSolution> {
    solve_system(&build_system(omega, n_intervals)?)
}

/// The grid inverse of the kernel: a three-point stencil with
/// `D(0) = 2 (1 + e^{2h}) / (1 - e^{2h})`, `D(+-h) = -2 e^h / (1 - e^{2h})`,
/// and zero beyond `|beta| = 1`.
pub fn discrete_operator_d(h: f64, beta: i64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::argument(format!("grid spacing must be positive, got {h}")));
    }
    // 1 - e^{2h}, written through exp_m1 so small h keeps full precision.
    let denom = -(2.0 * h).exp_m1();
    Ok(match beta.abs() {
        0 => 2.0 * (2.0 + (2.0 * h).exp_m1()) / denom,
        1 => -2.0 * h.exp() / denom,
        _ => 0.0,
    })
}

/// Largest violations of the three defining identities of the discrete
/// operator over a node range.
///
/// Each violation is relative: the residual of the three-term sum divided
/// by the magnitude of its largest term (or of the target value, whichever
/// is larger).  An absolute reading would be meaningless at the extremes
/// of the node range, where `e^{h beta}` reaches `1e21` and mere rounding
/// of the individual products leaves residues far above one.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteIdentityReport {
    pub h: f64,
    pub beta_min: i64,
    pub beta_max: i64,
    /// `(D * e^{-x})(h beta) = 0`: the operator annihilates the decay
    /// solution.
    pub max_decay_violation: f64,
    /// `(D * e^{x})(h beta) = 0`: likewise for the growth solution.
    pub max_growth_violation: f64,
    /// `(D * G)(h beta) = delta_{beta,0}`: D inverts the kernel on the grid.
    pub max_delta_violation: f64,
}

impl DiscreteIdentityReport {
    pub fn max_violation(&self) -> f64 {
        self.max_decay_violation
            .max(self.max_growth_violation)
            .max(self.max_delta_violation)
    }
}

/// Check the three identities characterizing the discrete operator at all
/// nodes `beta` in `beta_range`.
pub fn verify_discrete_identities(
    h: f64,
    beta_range: RangeInclusive<i64>,
) -> Result<DiscreteIdentityReport> {
    let d0 = discrete_operator_d(h, 0)?;
    let d1 = discrete_operator_d(h, 1)?;

    // (D * phi)(h beta) as a three-term sum, returned with the largest
    // term magnitude for relative error measurement.
    let convolve = |phi: &dyn Fn(f64) -> f64, beta: i64| -> (f64, f64) {
        let center = d0 * phi(h * beta as f64);
        let left = d1 * phi(h * (beta - 1) as f64);
        let right = d1 * phi(h * (beta + 1) as f64);
        let scale = center.abs().max(left.abs()).max(right.abs());
        (center + left + right, scale)
    };
    let violation = |sum: f64, expected: f64, scale: f64| -> f64 {
        (sum - expected).abs() / scale.max(expected.abs()).max(f64::MIN_POSITIVE)
    };

    let mut report = DiscreteIdentityReport {
        h,
        beta_min: *beta_range.start(),
        beta_max: *beta_range.end(),
        max_decay_violation: 0.0,
        max_growth_violation: 0.0,
        max_delta_violation: 0.0,
    };

    for beta in beta_range {
        let (sum, scale) = convolve(&|x| (-x).exp(), beta);
        report.max_decay_violation = report.max_decay_violation.max(violation(sum, 0.0, scale));

        let (sum, scale) = convolve(&|x| x.exp(), beta);
        report.max_growth_violation = report.max_growth_violation.max(violation(sum, 0.0, scale));

        let (sum, scale) = convolve(&kernel_g, beta);
        let expected = if beta == 0 { 1.0 } else { 0.0 };
        report.max_delta_violation = report.max_delta_violation.max(violation(sum, expected, scale));
    }

    Ok(report)
}

/// `(ell, psi_ell)`: the error functional applied to its own extremal
/// function `psi_ell(x) = sum_beta conj(C_beta) G(x - h beta)
/// - int_0^1 e^{-2 pi i omega t} G(x - t) dt`, evaluated by quadrature.
///
/// For optimal weights this pairing equals the squared error norm and is
/// real and nonnegative; it is the constructive side of the worst-case
/// error bound.
pub fn extremal_pairing(coeffs: &CoefficientSet) -> Result<Complex64> {
    if !coeffs.grid().is_unit() {
        return Err(Error::GridMismatch(
            "extremal pairing is defined on the unit grid; rescale first".into(),
        ));
    }
    let grid = coeffs.grid();
    let n = grid.n_intervals();
    let h = grid.spacing();
    let w = coeffs.omega().value();
    let values = coeffs.values();

    let psi = |x: f64| -> Result<Complex64> {
        let mut discrete = CZERO;
        for (beta, c) in values.iter().enumerate() {
            discrete += c.conj() * kernel_g(x - h * beta as f64);
        }
        let continuous = refine_simpson_piecewise_complex(
            |t| unit_phase(-w * t) * kernel_g(x - t),
            &[0.0, x, 1.0],
            CONVOLUTION_TOL,
        )?;
        Ok(discrete - continuous)
    };

    // Fixed-panel composite Simpson for one node interval; panel doubling
    // happens in the caller so psi's fallible inner integral can propagate.
    let panel_integral = |lo: f64, hi: f64, panels: usize| -> Result<Complex64> {
        let step = (hi - lo) / panels as f64;
        let mut acc = unit_phase(w * lo) * psi(lo)? + unit_phase(w * hi) * psi(hi)?;
        for j in 0..panels {
            let mid = lo + step * (j as f64 + 0.5);
            acc += 4.0 * unit_phase(w * mid) * psi(mid)?;
            if j > 0 {
                let edge = lo + step * j as f64;
                acc += 2.0 * unit_phase(w * edge) * psi(edge)?;
            }
        }
        Ok(acc * step / 6.0)
    };

    let mut discrete_sum = CZERO;
    for (beta, c) in values.iter().enumerate() {
        discrete_sum += c * psi(h * beta as f64)?;
    }

    let mut previous: Option<Complex64> = None;
    let mut small_streak = 0u32;
    let mut last_delta = f64::INFINITY;
    let mut panels = 1usize;
    while panels <= PAIRING_MAX_PANELS_PER_INTERVAL {
        let mut integral = CZERO;
        for beta in 0..n {
            integral += panel_integral(grid.node(beta), grid.node(beta + 1), panels)?;
        }
        let pairing = integral - discrete_sum;
        if let Some(prev) = previous {
            last_delta = (pairing - prev).norm();
            if last_delta < PAIRING_TOL {
                small_streak += 1;
                if small_streak >= 2 {
                    return Ok(pairing);
                }
            } else {
                small_streak = 0;
            }
        }
        previous = Some(pairing);
        panels *= 2;
    }

    Err(Error::IntegrationDidNotConverge {
        a: 0.0,
        b: 1.0,
        levels: PAIRING_MAX_PANELS_PER_INTERVAL.trailing_zeros(),
        last_delta,
        tolerance: PAIRING_TOL,
    })
}

/// Relative discrepancy between the extremal pairing and the closed-form
/// squared error norm: `|(ell, psi_ell) - ||ell||^2| / ||ell||^2`.
pub fn extremal_function_check(coeffs: &CoefficientSet) -> Result<f64> {
    let pairing = extremal_pairing(coeffs)?;
    let closed = crate::error_norm::norm_squared_closed(coeffs.omega(), coeffs.grid().n_intervals())?;
    Ok((pairing - closed).norm() / closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::refine_simpson_piecewise_complex;
    use approx::assert_relative_eq;

    fn w(omega: f64) -> FourierWeight {
        FourierWeight::new(omega).unwrap()
    }

    fn assert_close(got: Complex64, want_re: f64, want_im: f64, tol: f64) {
        let want = Complex64::new(want_re, want_im);
        assert!(
            (got - want).norm() < tol,
            "got {got}, want {want}, diff {:.3e}",
            (got - want).norm()
        );
    }

    #[test]
    fn kernel_is_even_and_vanishes_at_zero() {
        assert_eq!(kernel_g(0.0), 0.0);
        assert_eq!(kernel_g(-0.0), 0.0);
        assert_relative_eq!(kernel_g(0.3), 0.15226014672357131, max_relative = 1e-15);
        assert_relative_eq!(kernel_g(2.0), 1.8134302039235094, max_relative = 1e-15);
        for &x in &[0.17, 1.0, 2.5, 42.0] {
            assert_eq!(kernel_g(x).to_bits(), kernel_g(-x).to_bits());
        }
    }

    // Reference values computed with 50-digit arithmetic from the defining
    // integral.
    #[test]
    fn rhs_matches_high_precision_references() {
        let f = rhs_f(w(1.0), 0.25, 0).unwrap();
        assert_close(f, 0.0067082740254745290, -0.091209183929262211, 1e-15);
        let f = rhs_f(w(1.0), 0.25, 2).unwrap();
        assert_close(f, 0.052561984660619376, 0.0, 1e-15);
        let f = rhs_f(w(2.7), 0.2, 3).unwrap();
        assert_close(f, -0.0074755900988396297, 0.023017523813640220, 1e-15);
        let f = rhs_f(w(0.0), 0.5, 1).unwrap();
        assert_close(f, 0.12762596520638079, 0.0, 1e-15);
        // At zero frequency and t = 0 the integral is (cosh 1 - 1) / 2.
        let f = rhs_f(w(0.0), 0.5, 0).unwrap();
        assert_close(f, 0.27154031740762189, 0.0, 1e-15);
    }

    #[test]
    fn rhs_agrees_with_direct_quadrature() {
        for &(omega, h, beta) in &[(1.0, 0.25, 1), (2.7, 0.2, 2), (0.3, 0.125, 7), (0.0, 0.5, 2)] {
            let t = h * beta as f64;
            let quad = refine_simpson_piecewise_complex(
                |x| unit_phase(omega * x) * kernel_g(x - t),
                &[0.0, t, 1.0],
                1e-12,
            )
            .unwrap();
            let closed = rhs_f(w(omega), h, beta).unwrap();
            assert!(
                (quad - closed).norm() < 1e-10,
                "({omega}, {h}, {beta}): diff {:.3e}",
                (quad - closed).norm()
            );
        }
    }

    #[test]
    fn rhs_boundary_values_conjugate_at_integer_frequency() {
        // At integer omega the weight has period one, so f(1) = conj(f(0)).
        let f0 = rhs_f(w(3.0), 0.25, 0).unwrap();
        let f1 = rhs_f(w(3.0), 0.25, 4).unwrap();
        assert!((f1 - f0.conj()).norm() < 1e-15);
    }

    #[test]
    fn rhs_validates_input() {
        assert!(rhs_f(w(1.0), 0.0, 0).is_err());
        assert!(rhs_f(w(1.0), -0.25, 1).is_err());
        assert!(rhs_f(w(1.0), 0.25, 5).is_err());
    }

    #[test]
    fn exactness_integrals_match_references() {
        assert_close(rhs_g0(w(0.0)), 0.63212055882855768, 0.0, 1e-16);
        assert_close(rhs_g0(w(1.0)), 0.015616236904490825, 0.098119710271732382, 1e-16);
        assert_close(rhs_g0(w(2.7)), -0.016696097449799610, 0.066631519440807254, 1e-16);
        assert_close(growth_integral(w(1.0)), 0.042449333006388942, -0.26671702544531646, 1e-15);
        assert_close(growth_integral(w(2.7)), -0.15823380267659664, 0.099133574924534202, 1e-15);
    }

    #[test]
    fn system_has_the_bordered_gram_structure() {
        let system = build_system(w(1.5), 5).unwrap();
        let dim = system.dim();
        assert_eq!(dim, 7);
        for row in 0..dim {
            // Symmetric (all entries are real here).
            for col in 0..dim {
                assert_eq!(system.matrix_entry(row, col), system.matrix_entry(col, row));
                assert_eq!(system.matrix_entry(row, col).im, 0.0);
            }
            // Zero diagonal on the Gram block: G(0) = 0.
            if row < dim - 1 {
                assert_eq!(system.matrix_entry(row, row).re, 0.0);
            }
        }
        assert_eq!(system.matrix_entry(dim - 1, dim - 1), CZERO);
        assert_eq!(system.matrix_entry(0, dim - 1).re, 1.0);
        assert_relative_eq!(
            system.matrix_entry(5, 6).re,
            (-1.0f64).exp(),
            max_relative = 1e-16
        );
        assert_eq!(system.rhs_entry(2), rhs_f(w(1.5), 0.2, 2).unwrap());
        assert_eq!(system.rhs_entry(6), rhs_g0(w(1.5)));
    }

    #[test]
    fn solving_reproduces_reference_weights() {
        // Same 50-digit references as the closed-form tests; the system
        // knows nothing about those expressions.
        let solution = solve_optimality(w(1.0), 4).unwrap();
        let v = solution.coefficients.values();
        assert_close(v[0], 0.10086827516286283, 0.057426902568131817, 1e-12);
        assert_close(v[1], 0.0, 0.20173655032572566, 1e-12);
        assert_close(v[2], -0.20173655032572566, 0.0, 1e-12);
        assert_close(v[4], 0.10086827516286283, -0.057426902568131817, 1e-12);
        assert!(solution.lagrange_d.norm() < 1e-12, "d = {}", solution.lagrange_d);
        assert!(solution.residual_ratio() < 1e-12);

        let solution = solve_optimality(w(0.0), 2).unwrap();
        let v = solution.coefficients.values();
        assert_close(v[0], 0.24491866240370913, 0.0, 1e-13);
        assert_close(v[1], 0.48983732480741826, 0.0, 1e-13);
        assert_close(v[2], 0.24491866240370913, 0.0, 1e-13);
    }

    #[test]
    fn stencil_matches_references_and_has_tiny_support() {
        assert_relative_eq!(
            discrete_operator_d(0.1, 0).unwrap(),
            -20.066622264507979,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            discrete_operator_d(0.1, 1).unwrap(),
            9.9833527572961096,
            max_relative = 1e-14
        );
        for beta in 2..40 {
            assert_eq!(discrete_operator_d(0.7, beta).unwrap(), 0.0);
        }
        for &beta in &[1i64, 5, 17] {
            assert_eq!(
                discrete_operator_d(0.3, beta).unwrap().to_bits(),
                discrete_operator_d(0.3, -beta).unwrap().to_bits()
            );
        }
        assert!(discrete_operator_d(0.0, 0).is_err());
        assert!(discrete_operator_d(-1.0, 0).is_err());
    }

    #[test]
    fn stencil_identities_hold_over_a_node_range() {
        let report = verify_discrete_identities(0.1, -10..=10).unwrap();
        assert!(report.max_violation() <= 1e-12, "violations {report:?}");
        // The delta identity really does produce one at the origin.
        let d0 = discrete_operator_d(0.1, 0).unwrap();
        let d1 = discrete_operator_d(0.1, 1).unwrap();
        let delta = d0 * kernel_g(0.0) + 2.0 * d1 * kernel_g(0.1);
        assert_relative_eq!(delta, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn extremal_pairing_reproduces_the_squared_norm() {
        let coeffs = crate::coefficients::optimal_coefficients_unit(w(1.0), 10).unwrap();
        let pairing = extremal_pairing(&coeffs).unwrap();
        // Reference: 50-digit evaluation gives 8.216258200581374773e-4.
        assert!(pairing.im.abs() < 1e-10, "imaginary part {:.3e}", pairing.im);
        assert!(pairing.re > 0.0);
        assert_relative_eq!(pairing.re, 8.2162582005813748e-4, max_relative = 1e-6);
        let check = extremal_function_check(&coeffs).unwrap();
        assert!(check <= 1e-6, "relative discrepancy {check:.3e}");
    }

    #[test]
    fn extremal_pairing_requires_the_unit_grid() {
        let grid = UniformGrid::new(0.0, 2.0, 4).unwrap();
        let coeffs = crate::coefficients::optimal_coefficients(w(1.0), grid).unwrap();
        assert!(matches!(extremal_pairing(&coeffs), Err(Error::GridMismatch(_))));
    }
}
