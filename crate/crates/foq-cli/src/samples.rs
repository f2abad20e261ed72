//! Loader for the sample-file format: CSV with header `x,re,im`, one row
//! per node, positions strictly increasing and uniformly spaced to within
//! 1e-12 relative.  Non-uniform grids are rejected outright — the rules
//! are only optimal on equally spaced nodes, so silent acceptance would
//! produce quietly wrong results.

use std::fs;
use std::path::Path;

use foq_core::{Complex64, SampledFunction, UniformGrid};

use crate::CliError;

pub fn load_samples(path: &Path) -> Result<SampledFunction, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_samples(&text)
        .map_err(|msg| CliError::Usage(format!("invalid sample file {}: {msg}", path.display())))
}

pub fn parse_samples(text: &str) -> Result<SampledFunction, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());

    let header = lines.next().ok_or("empty file")?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns != ["x", "re", "im"] {
        return Err(format!("header must be `x,re,im`, got `{header}`"));
    }

    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (index, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(format!("row {}: expected 3 fields, got {}", index + 1, fields.len()));
        }
        let parse = |field: &str, name: &str| {
            field
                .parse::<f64>()
                .map_err(|_| format!("row {}: cannot parse {name} `{field}`", index + 1))
        };
        let x = parse(fields[0], "x")?;
        let re = parse(fields[1], "re")?;
        let im = parse(fields[2], "im")?;
        if !(x.is_finite() && re.is_finite() && im.is_finite()) {
            return Err(format!("row {}: non-finite entry", index + 1));
        }
        xs.push(x);
        values.push(Complex64::new(re, im));
    }

    if xs.len() < 2 {
        return Err(format!("need at least 2 rows (one interval), got {}", xs.len()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err("positions must be strictly increasing".into());
    }

    let a = xs[0];
    let b = xs[xs.len() - 1];
    let n = xs.len() - 1;
    let spacing = (b - a) / n as f64;
    let tolerance = 1e-12 * (b - a).max(a.abs()).max(b.abs());
    for (k, &x) in xs.iter().enumerate() {
        let expected = a + spacing * k as f64;
        if (x - expected).abs() > tolerance {
            return Err(format!(
                "positions are not uniform: row {} has x = {x}, expected {expected} \
                 (tolerance {tolerance:.3e}); this tool only integrates equally spaced samples",
                k + 1
            ));
        }
    }

    let grid = UniformGrid::new(a, b, n).map_err(|e| e.to_string())?;
    SampledFunction::new(values, grid).map_err(|e| e.to_string())
}
