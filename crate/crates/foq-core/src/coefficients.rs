//! Closed-form optimal quadrature coefficients.
//!
//! The rule `sum_beta C_beta phi(x_beta) ~ int_a^b e^{2 pi i omega x} phi(x) dx`
//! is optimal in the sense of Sard for the Hilbert space whose semi-norm is
//! `|| phi' + phi ||_{L_2}`: among all rules that are exact on the kernel of
//! that semi-norm (multiples of `e^{-x}` after mapping to the unit interval),
//! it minimizes the worst-case error over the unit ball.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::grid::{FourierWeight, UniformGrid};
use crate::numerics::{exp_cos_gap, sin_tau, unit_phase};
use crate::oracle;

/// Optimal weights attached to the nodes of a [`UniformGrid`], together
/// with the frequency they were built for.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    values: Vec<Complex64>,
    omega: FourierWeight,
    grid: UniformGrid,
}

impl CoefficientSet {
    /// Assemble a set from raw parts, validating length and finiteness.
    pub fn from_parts(
        values: Vec<Complex64>,
        omega: FourierWeight,
        grid: UniformGrid,
    ) -> Result<Self> {
        if values.len() != grid.n_intervals() + 1 {
            return Err(Error::GridMismatch(format!(
                "{} coefficients cannot sit on a grid with {} nodes",
                values.len(),
                grid.n_intervals() + 1
            )));
        }
        if let Some(bad) = values.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFiniteData(format!("coefficient value {bad} is not finite")));
        }
        Ok(CoefficientSet { values, omega, grid })
    }

    /// One weight per grid node, indexed like the nodes.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn omega(&self) -> FourierWeight {
        self.omega
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    /// Relative residual of the decay-side exactness constraint.
    ///
    /// Every admissible rule integrates the semi-norm kernel exactly; after
    /// mapping to this grid that kernel is `e^{-(x - a)/(b - a)}`.  This
    /// returns `|sum_beta C_beta e^{-beta/n} - I| / |I|` with `I` the true
    /// integral of the weighted kernel.
    pub fn decay_exactness_residual(&self) -> Result<f64> {
        self.exactness_residual(-1.0, oracle::rhs_g0(self.unit_omega()?))
    }

    /// Relative residual of the growth-side exactness identity
    /// (integration of `e^{+(x - a)/(b - a)}`), which the optimal rule
    /// satisfies as a consequence of its construction.
    pub fn growth_exactness_residual(&self) -> Result<f64> {
        self.exactness_residual(1.0, oracle::growth_integral(self.unit_omega()?))
    }

    /// Frequency seen on the unit interval after rescaling this grid.
    fn unit_omega(&self) -> Result<FourierWeight> {
        FourierWeight::new(self.omega.value() * self.grid.length())
    }

    fn exactness_residual(&self, sign: f64, unit_integral: Complex64) -> Result<f64> {
        let n = self.grid.n_intervals() as f64;
        let scale = self.grid.length() * unit_phase(self.omega.value() * self.grid.a());
        let target = scale * unit_integral;
        let mut sum = Complex64::new(0.0, 0.0);
        for (beta, c) in self.values.iter().enumerate() {
            sum += c * (sign * beta as f64 / n).exp();
        }
        Ok((sum - target).norm() / target.norm())
    }
}

/// Closed-form optimal coefficients on the unit interval `[0, 1]`.
///
/// With `h = 1/n`, `c = 2 pi omega`, `D = (e^{2h} - 1)(c^2 + 1)` and
/// `K = 1 + e^{2h} - 2 e^h cos(c h)`:
///
/// * `C_0 = (K + i (c (e^{2h} - 1) - 2 e^h sin(c h))) / D`,
/// * `C_beta = (2 K / D) e^{i c h beta}` for `0 < beta < n`,
/// * `C_n = e^{i c} conj(C_0)`.
///
/// The last weight is evaluated through the conjugation identity rather
/// than its own rational expression; the two agree analytically and the
/// identity form preserves conjugate symmetry bitwise.
pub fn optimal_coefficients_unit(omega: FourierWeight, n_intervals: usize) -> Result<CoefficientSet> {
    let grid = UniformGrid::unit(n_intervals)?;
    let w = omega.value();
    let nf = n_intervals as f64;
    let h = 1.0 / nf;
    let c = TAU * w;
    let e2m1 = (2.0 * h).exp_m1();
    let den = e2m1 * (c * c + 1.0);
    let gap = exp_cos_gap(w, h);

    let c0 = Complex64::new(gap / den, (c * e2m1 - 2.0 * h.exp() * sin_tau(w * h)) / den);
    let rho = 2.0 * gap / den;

    let mut values = Vec::with_capacity(n_intervals + 1);
    values.push(c0);
    for beta in 1..n_intervals {
        values.push(rho * unit_phase(w * beta as f64 / nf));
    }
    values.push(unit_phase(w) * c0.conj());

    CoefficientSet::from_parts(values, omega, grid)
}

/// Optimal coefficients on an arbitrary grid `[a, b]`.
///
/// Substituting `x = a + (b - a) y` reduces the problem to the unit
/// interval at frequency `omega (b - a)`; the weights transport back as
/// `C_beta^{[a,b]} = (b - a) e^{2 pi i omega a} C_beta^{unit}`.
pub fn optimal_coefficients(omega: FourierWeight, grid: UniformGrid) -> Result<CoefficientSet> {
    let unit_omega = FourierWeight::new(omega.value() * grid.length())?;
    let unit = optimal_coefficients_unit(unit_omega, grid.n_intervals())?;
    let scale = grid.length() * unit_phase(omega.value() * grid.a());
    let values = unit.values().iter().map(|c| scale * c).collect();
    CoefficientSet::from_parts(values, omega, grid)
}

/// Optimal real weights for the cosine-weighted integral
/// `int_0^1 cos(2 pi omega x) phi(x) dx` on the unit grid.
///
/// Splitting the complex rule into real and imaginary parts splits the
/// weighted integral the same way, so these are just `Re C_beta`.
pub fn cosine_coefficients(omega: FourierWeight, n_intervals: usize) -> Result<Vec<f64>> {
    Ok(optimal_coefficients_unit(omega, n_intervals)?
        .values()
        .iter()
        .map(|c| c.re)
        .collect())
}

/// Optimal real weights for `int_0^1 sin(2 pi omega x) phi(x) dx`; the
/// imaginary parts of the complex weights.
pub fn sine_coefficients(omega: FourierWeight, n_intervals: usize) -> Result<Vec<f64>> {
    Ok(optimal_coefficients_unit(omega, n_intervals)?
        .values()
        .iter()
        .map(|c| c.im)
        .collect())
}

/// The zero-frequency optimal rule on the unit grid: a trapezoid-shaped
/// weight vector with `tanh(h/2)` at the endpoints and `2 tanh(h/2)` at
/// interior nodes (note `tanh(h/2) = (e^h - 1)/(e^h + 1) = h/2 + O(h^3)`,
/// so this tends to the classical trapezoid rule as the grid refines).
pub fn trapezoid_coefficients(n_intervals: usize) -> Result<Vec<f64>> {
    if n_intervals == 0 {
        return Err(Error::argument("grid needs at least one interval"));
    }
    let h = 1.0 / n_intervals as f64;
    let end = (0.5 * h).tanh();
    let mut values = vec![2.0 * end; n_intervals + 1];
    values[0] = end;
    values[n_intervals] = end;
    Ok(values)
}
