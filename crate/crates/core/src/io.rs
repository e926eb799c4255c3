//! File formats: sweep CSV (write and read back), PPM rasters, density and
//! time-series CSV.
//!
//! Sweep CSV: header `alpha,beta,class` or `b,c,class`, optionally followed
//! by `,trans,leo`, then one row per cell in row-major order with row 0 at the
//! highest second-axis value. Floats use Rust's shortest round-trip form, so
//! reading a file back reproduces the exact cell coordinates.

use std::fmt::Write as _;

use crate::density::DensityEstimate;
use crate::error::{Error, Result};
use crate::sweep::{Cell, CellClass, Plane, SweepResult};
use crate::transitivity::Orbit;

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

/// Sweep result as CSV text.
pub fn sweep_to_csv(result: &SweepResult) -> String {
    let (xn, yn) = result.plane.axis_names();
    let with_flags = result.has_test_flags();
    let mut out = String::with_capacity(result.cells.len() * 40);
    if with_flags {
        let _ = writeln!(out, "{xn},{yn},class,trans,leo");
    } else {
        let _ = writeln!(out, "{xn},{yn},class");
    }
    for (x, y, cell) in result.iter() {
        if with_flags {
            let _ = writeln!(out, "{x},{y},{},{},{}", cell.class, flag(cell.trans), flag(cell.leo));
        } else {
            let _ = writeln!(out, "{x},{y},{}", cell.class);
        }
    }
    out
}

fn parse_flag(s: &str, line: usize) -> Result<Option<bool>> {
    match s {
        "true" => Ok(Some(true)),
        "false" => Ok(Some(false)),
        "" => Ok(None),
        other => Err(Error::Parse(format!("line {line}: bad boolean {other:?}"))),
    }
}

/// Reads a sweep CSV written by [`sweep_to_csv`].
pub fn sweep_from_csv(text: &str) -> Result<SweepResult> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    let plane = match cols.get(..2) {
        Some(["alpha", "beta"]) => Plane::AlphaBeta,
        Some(["b", "c"]) => Plane::BC,
        _ => return Err(Error::Parse(format!("unrecognized header {header:?}"))),
    };
    let with_flags = match &cols[2..] {
        ["class"] => false,
        ["class", "trans", "leo"] => true,
        _ => return Err(Error::Parse(format!("unrecognized header {header:?}"))),
    };

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.trim().split(',').collect();
        let expected = if with_flags { 5 } else { 3 };
        if fields.len() != expected {
            return Err(Error::Parse(format!("line {lineno}: expected {expected} fields, got {}", fields.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("line {lineno}: {e}")));
        let (x, y) = (num(fields[0])?, num(fields[1])?);
        let class: CellClass = fields[2].parse()?;
        let (trans, leo) = if with_flags {
            (parse_flag(fields[3], lineno)?, parse_flag(fields[4], lineno)?)
        } else {
            (None, None)
        };
        rows.push((x, y, Cell { class, trans, leo }));
    }

    let n = rows.len();
    let mesh = (n as f64).sqrt().round() as usize;
    if mesh < 1 || mesh * mesh != n {
        return Err(Error::Parse(format!("{n} cells is not a square grid")));
    }
    let xs: Vec<f64> = rows[..mesh].iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().step_by(mesh).map(|r| r.1).collect();
    for (k, &(x, y, _)) in rows.iter().enumerate() {
        if x != xs[k % mesh] || y != ys[k / mesh] {
            return Err(Error::Parse(format!("cell {k} is not on a row-major grid")));
        }
    }
    Ok(SweepResult {
        grid: None,
        plane,
        mesh,
        xs,
        ys,
        cells: rows.into_iter().map(|r| r.2).collect(),
        timing: None,
    })
}

/// Binary PPM (P6) raster, one pixel per cell.
pub fn sweep_to_ppm(result: &SweepResult) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", result.mesh, result.mesh).into_bytes();
    out.reserve(result.cells.len() * 3);
    for cell in &result.cells {
        out.extend_from_slice(&cell.class.rgb());
    }
    out
}

/// `bin_center,density` rows followed by `# support` comment lines.
pub fn density_to_csv(estimate: &DensityEstimate) -> String {
    let mut out = String::from("bin_center,density\n");
    for (center, d) in estimate.bin_centers().zip(&estimate.density) {
        let _ = writeln!(out, "{center},{d}");
    }
    for iv in &estimate.support.items {
        let _ = writeln!(out, "# support {},{}", iv.lo, iv.hi);
    }
    out
}

/// `step,x` rows.
pub fn time_series_to_csv(orbit: &Orbit) -> String {
    let mut out = String::from("step,x\n");
    for (i, x) in orbit.samples.iter().enumerate() {
        let _ = writeln!(out, "{i},{x}");
    }
    out
}
