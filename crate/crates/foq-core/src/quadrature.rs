//! Applying a weight set to sampled data, with an optional worst-case
//! error bound from the Cauchy-Schwarz inequality.

use num_complex::Complex64;

use crate::coefficients::{optimal_coefficients, CoefficientSet};
use crate::error::{Error, Result};
use crate::error_norm::norm_squared_closed;
use crate::grid::{FourierWeight, UniformGrid};

/// Node samples of a function, optionally accompanied by derivative
/// samples for semi-norm estimation.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    values: Vec<Complex64>,
    grid: UniformGrid,
    derivative_values: Option<Vec<Complex64>>,
}

fn check_finite(label: &str, values: &[Complex64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteData(format!("{label} at node {i} is {v}")));
        }
    }
    Ok(())
}

impl SampledFunction {
    pub fn new(values: Vec<Complex64>, grid: UniformGrid) -> Result<Self> {
        if values.len() != grid.n_intervals() + 1 {
            return Err(Error::GridMismatch(format!(
                "{} samples cannot sit on a grid with {} nodes",
                values.len(),
                grid.n_intervals() + 1
            )));
        }
        check_finite("sample", &values)?;
        Ok(SampledFunction { values, grid, derivative_values: None })
    }

    pub fn with_derivatives(
        values: Vec<Complex64>,
        derivative_values: Vec<Complex64>,
        grid: UniformGrid,
    ) -> Result<Self> {
        let mut samples = SampledFunction::new(values, grid)?;
        if derivative_values.len() != grid.n_intervals() + 1 {
            return Err(Error::GridMismatch(format!(
                "{} derivative samples cannot sit on a grid with {} nodes",
                derivative_values.len(),
                grid.n_intervals() + 1
            )));
        }
        check_finite("derivative sample", &derivative_values)?;
        samples.derivative_values = Some(derivative_values);
        Ok(samples)
    }

    /// Evaluate a callable at every node.  Non-finite results are rejected
    /// with the offending node in the message.
    pub fn from_sampler(sampler: impl Fn(f64) -> Complex64, grid: UniformGrid) -> Result<Self> {
        let values: Vec<Complex64> = grid.nodes().map(sampler).collect();
        SampledFunction::new(values, grid)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn derivative_values(&self) -> Option<&[Complex64]> {
        self.derivative_values.as_deref()
    }
}

/// The approximation `sum_beta C_beta phi(x_beta)`, optionally with the
/// worst-case bound `norm_used * ||l||` on its deviation from the true
/// weighted integral.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_bound: Option<f64>,
    pub norm_used: Option<f64>,
}

/// Apply a weight set to samples living on the same grid, summing in
/// fixed index order so results are bit-reproducible across runs.
pub fn apply(coeffs: &CoefficientSet, samples: &SampledFunction) -> Result<QuadratureResult> {
    if coeffs.grid() != samples.grid() {
        return Err(Error::GridMismatch(format!(
            "coefficients on [{}, {}] with {} intervals, samples on [{}, {}] with {}",
            coeffs.grid().a(),
            coeffs.grid().b(),
            coeffs.grid().n_intervals(),
            samples.grid().a(),
            samples.grid().b(),
            samples.grid().n_intervals()
        )));
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (c, v) in coeffs.values().iter().zip(samples.values()) {
        value += c * v;
    }
    Ok(QuadratureResult { value, error_bound: None, norm_used: None })
}

/// Semi-norm `(int_a^b |phi'(x) + phi(x)|^2 dx)^{1/2}` estimated from node
/// data by the composite trapezoid rule.
///
/// Derivative samples are used when present; otherwise `phi'` comes from
/// second-order finite differences (central inside, one-sided at the
/// endpoints), which needs at least two intervals.  Note `e^{-x}` sits in
/// the kernel: with exact derivatives its semi-norm is exactly zero.
pub fn seminorm_w210(samples: &SampledFunction) -> Result<f64> {
    let grid = samples.grid();
    let n = grid.n_intervals();
    let h = grid.spacing();
    let values = samples.values();

    let derivatives: Vec<Complex64> = match samples.derivative_values() {
        Some(d) => d.to_vec(),
        None => {
            if n < 2 {
                return Err(Error::argument(
                    "finite-difference derivative estimation needs at least two intervals \
                     (or supply derivative samples)",
                ));
            }
            let mut d = Vec::with_capacity(n + 1);
            d.push((-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h));
            for beta in 1..n {
                d.push((values[beta + 1] - values[beta - 1]) / (2.0 * h));
            }
            d.push((3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h));
            d
        }
    };

    let integrand: Vec<f64> =
        values.iter().zip(&derivatives).map(|(v, d)| (v + d).norm_sqr()).collect();
    let mut integral = 0.5 * (integrand[0] + integrand[n]);
    for g in &integrand[1..n] {
        integral += g;
    }
    Ok((integral * h).sqrt())
}

/// Apply the optimal rule for `omega` on the sample grid, optionally
/// attaching the Cauchy-Schwarz error bound.
///
/// The bound rescales to the unit interval: with `phi~(y) = phi(a + (b-a) y)`
/// the true error is `(b-a)` times the unit-grid error at frequency
/// `omega (b-a)`, so `|error| <= ||phi~' + phi~||_{L_2(0,1)} * (b-a) *
/// sqrt(norm_squared_closed)`.  The semi-norm of the pulled-back function
/// uses the same node values and `(b-a)`-scaled derivatives.
pub fn integrate_samples(
    samples: &SampledFunction,
    omega: FourierWeight,
    with_bound: bool,
) -> Result<QuadratureResult> {
    let grid = samples.grid();
    let coeffs = optimal_coefficients(omega, grid)?;
    let result = apply(&coeffs, samples)?;
    if !with_bound {
        return Ok(result);
    }

    let n = grid.n_intervals();
    let unit_grid = UniformGrid::unit(n)?;
    let unit_omega = FourierWeight::new(omega.value() * grid.length())?;
    let unit_samples = match samples.derivative_values() {
        Some(d) => SampledFunction::with_derivatives(
            samples.values().to_vec(),
            d.iter().map(|v| grid.length() * v).collect(),
            unit_grid,
        )?,
        None => SampledFunction::new(samples.values().to_vec(), unit_grid)?,
    };
    let norm_used = seminorm_w210(&unit_samples)?;
    let functional_norm = grid.length() * norm_squared_closed(unit_omega, n)?.sqrt();
    Ok(QuadratureResult {
        value: result.value,
        error_bound: Some(norm_used * functional_norm),
        norm_used: Some(norm_used),
    })
}

/// Sample a callable on the grid and integrate it; see
/// [`integrate_samples`] for the bound's meaning.
pub fn integrate_fourier(
    sampler: impl Fn(f64) -> Complex64,
    omega: FourierWeight,
    grid: UniformGrid,
    with_bound: bool,
) -> Result<QuadratureResult> {
    let samples = SampledFunction::from_sampler(sampler, grid)?;
    integrate_samples(&samples, omega, with_bound)
}

/// Real-valued test functions with exact derivatives, spanning the
/// exactness cases, polynomials, oscillation, and a stiff rational.
pub mod builtins {
    use super::{Result, SampledFunction, UniformGrid};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[derive(Clone, Copy)]
    pub struct BuiltinFunction {
        pub name: &'static str,
        value: fn(f64) -> f64,
        derivative: fn(f64) -> f64,
    }

    impl BuiltinFunction {
        pub fn value(&self, x: f64) -> f64 {
            (self.value)(x)
        }

        pub fn derivative(&self, x: f64) -> f64 {
            (self.derivative)(x)
        }

        /// Sample on a grid with exact derivative values attached.
        pub fn sample(&self, grid: UniformGrid) -> Result<SampledFunction> {
            let values = grid.nodes().map(|x| Complex64::new(self.value(x), 0.0)).collect();
            let derivatives =
                grid.nodes().map(|x| Complex64::new(self.derivative(x), 0.0)).collect();
            SampledFunction::with_derivatives(values, derivatives, grid)
        }
    }

    impl std::fmt::Debug for BuiltinFunction {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.debug_struct("BuiltinFunction").field("name", &self.name).finish()
        }
    }

    pub const ALL: [BuiltinFunction; 7] = [
        BuiltinFunction { name: "exp-neg", value: |x| (-x).exp(), derivative: |x| -(-x).exp() },
        BuiltinFunction { name: "exp", value: |x| x.exp(), derivative: |x| x.exp() },
        BuiltinFunction { name: "one", value: |_| 1.0, derivative: |_| 0.0 },
        BuiltinFunction { name: "x", value: |x| x, derivative: |_| 1.0 },
        BuiltinFunction { name: "x-squared", value: |x| x * x, derivative: |x| 2.0 * x },
        BuiltinFunction {
            name: "sin-pi-x",
            value: |x| (PI * x).sin(),
            derivative: |x| PI * (PI * x).cos(),
        },
        BuiltinFunction {
            name: "runge",
            value: |x| 1.0 / (1.0 + 25.0 * x * x),
            derivative: |x| {
                let d = 1.0 + 25.0 * x * x;
                -50.0 * x / (d * d)
            },
        },
    ];

    pub fn by_name(name: &str) -> Option<&'static BuiltinFunction> {
        ALL.iter().find(|f| f.name == name)
    }
}
