//! Sampled field grids and file writers: CSV with 17-significant-digit
//! decimals (bit-exact round trips), 8-bit binary PGM rasters with the
//! min-max normalization recorded in a metadata sidecar. Outputs are
//! byte-deterministic for a fixed configuration.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Quantity;
use crate::error::{Error, Result};
use crate::verify::AxisSpec;

/// Complex samples of every requested component (plus phi) on a rectangular
/// grid; singular points are masked.
pub struct FieldGrid {
    pub x: AxisSpec,
    /// None for the (x, t)-plane solutions of n-NLS.
    pub y: Option<AxisSpec>,
    pub t: AxisSpec,
    /// Component labels, e.g. "psi1".
    pub components: Vec<String>,
    /// values[c][flat_index]; flat layout t-major, then y, then x.
    pub values: Vec<Vec<Option<Complex64>>>,
    /// Auxiliary field (DS only), same layout.
    pub phi: Option<Vec<Option<Complex64>>>,
}

impl FieldGrid {
    pub fn points(&self) -> usize {
        self.x.count * self.y.map_or(1, |a| a.count) * self.t.count
    }

    pub fn flat_index(&self, ix: usize, iy: usize, it: usize) -> usize {
        let ny = self.y.map_or(1, |a| a.count);
        (it * ny + iy) * self.x.count + ix
    }

    pub fn masked_count(&self) -> usize {
        let mut mask = vec![false; self.points()];
        for comp in &self.values {
            for (i, v) in comp.iter().enumerate() {
                if v.is_none() {
                    mask[i] = true;
                }
            }
        }
        mask.iter().filter(|&&m| m).count()
    }
}

/// Formats a float with 17 significant digits; parsing the result recovers
/// the original bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with a header row; masked samples become empty cells.
pub fn write_csv(grid: &FieldGrid, quantities: &[Quantity], path: &Path) -> Result<()> {
    let mut out = String::new();
    let mut header: Vec<String> = vec!["x".into()];
    if grid.y.is_some() {
        header.push("y".into());
    }
    header.push("t".into());
    for name in &grid.components {
        for q in quantities {
            match q {
                Quantity::Re => header.push(format!("re_{name}")),
                Quantity::Im => header.push(format!("im_{name}")),
                Quantity::Abs => header.push(format!("abs_{name}")),
                Quantity::Phase => header.push(format!("phase_{name}")),
                Quantity::Phi => {}
            }
        }
    }
    if grid.phi.is_some() && quantities.contains(&Quantity::Phi) {
        header.push("phi".into());
    }
    out.push_str(&header.join(","));
    out.push('\n');

    let xs = grid.x.values();
    let ys = grid.y.map(|a| a.values()).unwrap_or_else(|| vec![0.0]);
    let ts = grid.t.values();
    for (it, &t) in ts.iter().enumerate() {
        for (iy, &y) in ys.iter().enumerate() {
            for (ix, &x) in xs.iter().enumerate() {
                let flat = grid.flat_index(ix, iy, it);
                let mut row: Vec<String> = vec![fmt_f64(x)];
                if grid.y.is_some() {
                    row.push(fmt_f64(y));
                }
                row.push(fmt_f64(t));
                for comp in &grid.values {
                    let v = comp[flat];
                    for q in quantities {
                        let cell = match (q, v) {
                            (Quantity::Phi, _) => continue,
                            (_, None) => String::new(),
                            (Quantity::Re, Some(v)) => fmt_f64(v.re),
                            (Quantity::Im, Some(v)) => fmt_f64(v.im),
                            (Quantity::Abs, Some(v)) => fmt_f64(v.norm()),
                            (Quantity::Phase, Some(v)) => fmt_f64(v.arg()),
                        };
                        row.push(cell);
                    }
                }
                if let Some(phi) = &grid.phi {
                    if quantities.contains(&Quantity::Phi) {
                        row.push(phi[flat].map(|v| fmt_f64(v.re)).unwrap_or_default());
                    }
                }
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Normalization record for one raster: pixel = round(255 (v - min)/(max - min)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RasterInfo {
    pub file: String,
    pub component: String,
    pub time_index: usize,
    pub time: f64,
    pub min: f64,
    pub max: f64,
    /// Flat (row-major, top row first) indices of masked pixels (written as
    /// full-scale white).
    pub masked_pixels: Vec<usize>,
}

/// Writes |field| heatmaps as binary 8-bit PGM, one per component and time
/// slice (2D x-y grids) or one per component (x-t grids). Returns the
/// normalization records.
pub fn write_pgm_rasters(grid: &FieldGrid, dir: &Path) -> Result<Vec<RasterInfo>> {
    let mut infos = Vec::new();
    match grid.y {
        Some(y_axis) => {
            for (ci, name) in grid.components.iter().enumerate() {
                for (it, &t) in grid.t.values().iter().enumerate() {
                    let file = format!("{name}_t{it}.pgm");
                    let mut samples = Vec::with_capacity(grid.x.count * y_axis.count);
                    // top row = largest y, so the picture is oriented as a plot
                    for iy in (0..y_axis.count).rev() {
                        for ix in 0..grid.x.count {
                            samples.push(grid.values[ci][grid.flat_index(ix, iy, it)]);
                        }
                    }
                    infos.push(write_one_pgm(
                        &samples,
                        grid.x.count,
                        y_axis.count,
                        &dir.join(&file),
                        &file,
                        name,
                        it,
                        t,
                    )?);
                }
            }
        }
        None => {
            for (ci, name) in grid.components.iter().enumerate() {
                let file = format!("{name}.pgm");
                let mut samples = Vec::with_capacity(grid.x.count * grid.t.count);
                for it in (0..grid.t.count).rev() {
                    for ix in 0..grid.x.count {
                        samples.push(grid.values[ci][grid.flat_index(ix, 0, it)]);
                    }
                }
                infos.push(write_one_pgm(
                    &samples,
                    grid.x.count,
                    grid.t.count,
                    &dir.join(&file),
                    &file,
                    name,
                    0,
                    grid.t.min,
                )?);
            }
        }
    }
    Ok(infos)
}

#[allow(clippy::too_many_arguments)]
fn write_one_pgm(
    samples: &[Option<Complex64>],
    width: usize,
    height: usize,
    path: &Path,
    file: &str,
    component: &str,
    time_index: usize,
    time: f64,
) -> Result<RasterInfo> {
    if width > 65535 || height > 65535 {
        return Err(Error::Config("raster dimensions exceed PGM limits".into()));
    }
    let mags: Vec<Option<f64>> = samples.iter().map(|v| v.map(|c| c.norm())).collect();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for m in mags.iter().flatten() {
        min = min.min(*m);
        max = max.max(*m);
    }
    if !min.is_finite() {
        min = 0.0;
        max = 0.0;
    }
    let span = if max > min { max - min } else { 1.0 };
    let mut body = Vec::with_capacity(width * height);
    let mut masked = Vec::new();
    for (idx, m) in mags.iter().enumerate() {
        match m {
            Some(v) => body.push(((v - min) / span * 255.0).round() as u8),
            None => {
                masked.push(idx);
                body.push(255);
            }
        }
    }
    let mut data = Vec::new();
    let mut header = String::new();
    write!(header, "P5\n{width} {height}\n255\n").unwrap();
    data.extend_from_slice(header.as_bytes());
    data.extend_from_slice(&body);
    std::fs::write(path, data)?;
    Ok(RasterInfo {
        file: file.to_string(),
        component: component.to_string(),
        time_index,
        time,
        min,
        max,
        masked_pixels: masked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_formatting_round_trips() {
        for &v in &[
            0.0,
            1.0,
            -1.5,
            std::f64::consts::PI,
            1.0e-300,
            -2.2250738585072014e-308,
            123456.789012345678,
        ] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {s} -> {back}");
        }
    }
}
