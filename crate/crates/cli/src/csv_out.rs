//! CSV output: `abscissa,<method>_<kind>[,...]` with one row per grid
//! point, 16 significant digits, LF endings. Writing is single-threaded
//! and ordered, so a rerun with the same configuration and seed produces
//! byte-identical files.

use billiard_core::averaging::StatisticCurve;
use billiard_core::{Error, Result};
use std::io::Write;
use std::path::Path;

/// One named output column.
pub struct Column {
    pub label: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            values,
        }
    }

    /// Default `<method>_<kind>` label.
    pub fn from_curve(curve: &StatisticCurve) -> Self {
        Self::new(
            format!("{}_{}", curve.method.name(), curve.kind.name()),
            curve.mean.clone(),
        )
    }

    /// `<method>_<kind>_<suffix>`, for runs with several curves of the
    /// same method and kind (e.g. two sampling ranges).
    pub fn from_curve_suffixed(curve: &StatisticCurve, suffix: &str) -> Self {
        Self::new(
            format!("{}_{}_{suffix}", curve.method.name(), curve.kind.name()),
            curve.mean.clone(),
        )
    }
}

/// Check that every curve lives on the same grid (bitwise), as the CSV
/// rows interleave them.
pub fn check_shared_abscissa(curves: &[&StatisticCurve]) -> Result<()> {
    for pair in curves.windows(2) {
        if pair[0].abscissa != pair[1].abscissa {
            return Err(Error::Argument(
                "curves do not share an abscissa grid".into(),
            ));
        }
    }
    Ok(())
}

pub fn emit_csv(path: &Path, abscissa: &[f64], columns: &[Column]) -> Result<()> {
    for col in columns {
        if col.values.len() != abscissa.len() {
            return Err(Error::Argument(format!(
                "column `{}` has {} values for {} grid points",
                col.label,
                col.values.len(),
                abscissa.len()
            )));
        }
    }
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    let labels: Vec<&str> = columns.iter().map(|c| c.label.as_str()).collect();
    writeln!(w, "abscissa,{}", labels.join(","))?;
    for (i, x) in abscissa.iter().enumerate() {
        write!(w, "{x:.15e}")?;
        for col in columns {
            write!(w, ",{:.15e}", col.values[i])?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}
