//! Plot-ready CSV output.

use std::io::Write;

use crate::error::Result;

/// Shortest decimal that round-trips to the same `f64`; scientific notation
/// outside `[1e-5, 1e16)`. Negative zero prints as `0`. Locale independent.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Writes a header row and numeric rows.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format_number(*v)))?;
    }
    w.flush().map_err(|e| crate::Error::Output(e.to_string()))?;
    Ok(())
}
