//! Serializable report documents and their JSON/CSV rendering.
//!
//! Every floating-point number in every format goes through [`fmt_f64`],
//! which prints 17 significant digits — enough to reproduce the exact
//! binary64 value on re-parse, so serialized reports round-trip bit for
//! bit and the JSON and CSV encodings of one run carry identical numeric
//! text.

use std::collections::BTreeMap;
use std::io;

use foq_core::{CoefficientSet, Complex64, FourierWeight, UniformGrid};
use serde::{Deserialize, Serialize};

use crate::config::Generator;

/// Scientific notation with 16 fractional digits = 17 significant digits.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serialize any report with the shared float formatting.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization to memory cannot fail");
    let mut text = String::from_utf8(out).expect("JSON output is UTF-8");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ReIm {
    fn from(z: Complex64) -> Self {
        ReIm { re: z.re, im: z.im }
    }
}

/// Emitted by `coeffs`; re-loadable, and convertible back to the library
/// type for round-trip checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientDocument {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub n_intervals: usize,
    pub coefficients: Vec<ReIm>,
    pub generator: String,
}

impl CoefficientDocument {
    pub fn from_set(set: &CoefficientSet, generator: Generator) -> Self {
        CoefficientDocument {
            omega: set.omega().value(),
            a: set.grid().a(),
            b: set.grid().b(),
            n_intervals: set.grid().n_intervals(),
            coefficients: set.values().iter().copied().map(ReIm::from).collect(),
            generator: generator.label().to_string(),
        }
    }

    pub fn to_set(&self) -> foq_core::Result<CoefficientSet> {
        CoefficientSet::from_parts(
            self.coefficients
                .iter()
                .map(|c| Complex64::new(c.re, c.im))
                .collect(),
            FourierWeight::new(self.omega)?,
            UniformGrid::new(self.a, self.b, self.n_intervals)?,
        )
    }

    /// One row per node: position, real part, imaginary part.
    pub fn to_csv(&self) -> String {
        let grid = UniformGrid::new(self.a, self.b, self.n_intervals)
            .expect("document was built from a valid grid");
        let mut out = String::from("x,re,im\n");
        for (node, c) in grid.nodes().zip(&self.coefficients) {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(node),
                fmt_f64(c.re),
                fmt_f64(c.im)
            ));
        }
        out
    }
}

/// Emitted by `norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormDocument {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub n_intervals: usize,
    pub norm_squared: f64,
    pub asymptotic_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<f64>,
}

impl NormDocument {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("omega,a,b,n_intervals,norm_squared,asymptotic_estimate,brute_force\n");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(self.omega),
            fmt_f64(self.a),
            fmt_f64(self.b),
            self.n_intervals,
            fmt_f64(self.norm_squared),
            fmt_f64(self.asymptotic_estimate),
            self.brute_force.map(fmt_f64).unwrap_or_default()
        ));
        out
    }
}

/// Emitted by `integrate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrateDocument {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub n_intervals: usize,
    pub source: String,
    pub value: ReIm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seminorm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
}

impl IntegrateDocument {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "omega,a,b,n_intervals,source,value_re,value_im,seminorm,error_bound\n",
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(self.omega),
            fmt_f64(self.a),
            fmt_f64(self.b),
            self.n_intervals,
            self.source,
            fmt_f64(self.value.re),
            fmt_f64(self.value.im),
            self.seminorm.map(fmt_f64).unwrap_or_default(),
            self.error_bound.map(fmt_f64).unwrap_or_default()
        ));
        out
    }
}

/// One ladder step of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_intervals: usize,
    pub h: f64,
    pub norm: f64,
    /// Observed |true integral - quadrature| per builtin function.
    pub errors: BTreeMap<String, f64>,
}

/// Emitted by `convergence`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceDocument {
    pub omega: f64,
    pub factor: usize,
    pub rows: Vec<ConvergenceRow>,
    pub fitted_slope: f64,
}

impl ConvergenceDocument {
    /// Data rows, then one trailing record `fitted_slope,<value>`.
    pub fn to_csv(&self) -> String {
        let names: Vec<&str> = self
            .rows
            .first()
            .map(|r| r.errors.keys().map(String::as_str).collect())
            .unwrap_or_default();
        let mut out = String::from("n_intervals,h,norm");
        for name in &names {
            out.push_str(&format!(",err_{name}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}",
                row.n_intervals,
                fmt_f64(row.h),
                fmt_f64(row.norm)
            ));
            for name in &names {
                out.push_str(&format!(",{}", fmt_f64(row.errors[*name])));
            }
            out.push('\n');
        }
        out.push_str(&format!("fitted_slope,{}\n", fmt_f64(self.fitted_slope)));
        out
    }
}
