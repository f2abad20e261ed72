//! Optimal quadrature for Fourier integrals on uniform grids.
//!
//! Given samples of a function `phi` at `n + 1` equally spaced nodes on
//! `[a, b]`, this crate computes the weights `C_beta` that make
//!
//! ```text
//! int_a^b e^{2 pi i omega x} phi(x) dx  ~  sum_beta C_beta phi(x_beta)
//! ```
//!
//! optimal in the sense of Sard over the Hilbert space `W_2^(1,0)` (first
//! derivative square-integrable, inner product `int (phi' + phi)(conj(psi') +
//! conj(psi))`): among all rules exact on the semi-norm's null space, the
//! weights minimize the worst-case error over the unit ball.  The weights,
//! the worst-case error norm, and its small-spacing expansion all have
//! closed forms; an independent oracle (dense solve of the optimality
//! system, brute-force quadratic form, discrete-operator identities,
//! extremal-function pairing) certifies every one of them.
//!
//! # Example
//!
//! ```
//! use foq_core::{integrate_fourier, Complex64, FourierWeight, UniformGrid};
//!
//! let omega = FourierWeight::new(1.0).unwrap();
//! let grid = UniformGrid::unit(50).unwrap();
//! let result = integrate_fourier(
//!     |x| Complex64::new(x * x, 0.0),
//!     omega,
//!     grid,
//!     true,
//! )
//! .unwrap();
//! // True value of int_0^1 e^{2 pi i x} x^2 dx, to 17 digits:
//! let exact = Complex64::new(5.0660591821168886e-2, -1.5915494309189534e-1);
//! assert!((result.value - exact).norm() <= result.error_bound.unwrap());
//! ```

// Negated float comparisons (`!(x <= tol)`) are deliberate throughout:
// they classify NaN as out of range instead of letting it slip past.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// The dense linear algebra indexes like the formulas it implements;
// iterator rewrites would obscure the triangular structure.
#![allow(clippy::needless_range_loop)]
// Frozen reference values keep all their digits from the 50-digit
// evaluation that produced them, beyond what binary64 can hold.
#![allow(clippy::excessive_precision)]

pub mod certify;
pub mod coefficients;
pub mod error;
pub mod error_norm;
pub mod grid;
pub mod numerics;
pub mod oracle;
pub mod quadrature;

pub use num_complex::Complex64;

pub use coefficients::{
    cosine_coefficients, optimal_coefficients, optimal_coefficients_unit, sine_coefficients,
    trapezoid_coefficients, CoefficientSet,
};
pub use error::{Error, Result};
pub use error_norm::{
    error_norm_report, norm_squared_asymptotic, norm_squared_bruteforce, norm_squared_closed,
    ErrorNormReport,
};
pub use grid::{FourierWeight, UniformGrid};
pub use quadrature::{
    apply, integrate_fourier, integrate_samples, seminorm_w210, QuadratureResult, SampledFunction,
};
