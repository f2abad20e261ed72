//! The oscillation weight and the uniform grid the quadrature lives on.

use crate::error::{Error, Result};

/// Frequency `omega` of the oscillatory weight `e^{2 pi i omega x}`.
///
/// Wrapping the raw float guarantees every downstream routine receives a
/// finite frequency; zero and negative values are perfectly valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierWeight(f64);

impl FourierWeight {
    pub fn new(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::argument(format!("frequency must be finite, got {omega}")));
        }
        Ok(FourierWeight(omega))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for FourierWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `n + 1` equally spaced nodes on `[a, b]`.
///
/// Nodes are indexed by `beta = 0..=n_intervals`, and the two endpoints are
/// reproduced exactly: `node(0) == a` and `node(n_intervals) == b` hold
/// bitwise, not merely up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    a: f64,
    b: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, n_intervals: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::argument(format!(
                "interval endpoints must be finite, got [{a}, {b}]"
            )));
        }
        if !(b > a) {
            return Err(Error::argument(format!(
                "interval must satisfy a < b, got [{a}, {b}]"
            )));
        }
        if n_intervals == 0 {
            return Err(Error::argument("grid needs at least one interval"));
        }
        Ok(UniformGrid { a, b, n: n_intervals })
    }

    /// The unit grid on `[0, 1]` with `n_intervals` intervals.
    pub fn unit(n_intervals: usize) -> Result<Self> {
        UniformGrid::new(0.0, 1.0, n_intervals)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_intervals(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Grid spacing `(b - a) / n_intervals`.
    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Node `x_beta`, evaluated as a convex combination so the endpoints
    /// come out exact.
    pub fn node(&self, beta: usize) -> f64 {
        debug_assert!(beta <= self.n, "node index {beta} out of range 0..={}", self.n);
        let t = beta as f64 / self.n as f64;
        self.a * (1.0 - t) + self.b * t
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |beta| self.node(beta))
    }

    pub fn is_unit(&self) -> bool {
        self.a == 0.0 && self.b == 1.0
    }
}
