//! File outputs: diagnostics CSV (round-trip exact), field snapshots, study
//! reports, and simple PNG line plots of scalar time series.

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::studies::StudyReport;
use std::io::Write;
use std::path::Path;

pub fn write_diagnostics_csv(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{}", DiagnosticsRecord::CSV_HEADER)?;
    for r in records {
        writeln!(f, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn read_diagnostics_csv(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Numerical("empty diagnostics csv".into()))?;
    if header != DiagnosticsRecord::CSV_HEADER {
        return Err(Error::Numerical(format!(
            "unexpected diagnostics header: {header}"
        )));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Numerical(format!("csv row {}: {e}", i + 2)))?;
        if v.len() != 16 {
            return Err(Error::Numerical(format!(
                "csv row {}: expected 16 columns, got {}",
                i + 2,
                v.len()
            )));
        }
        out.push(DiagnosticsRecord {
            t: v[0],
            energy: v[1],
            entropy: v[2],
            mass_phi: v[3],
            mass_sigma: v[4],
            mass_total: v[5],
            d1: v[6],
            d2: v[7],
            d3: v[8],
            phi_min: v[9],
            phi_max: v[10],
            overshoot_pos: v[11],
            overshoot_neg: v[12],
            flux_norm: v[13],
            mu_residual: v[14],
            energy_residual: v[15],
        });
    }
    Ok(out)
}

/// Snapshot format: line 1 is `dim N1 [N2] L1 [L2] time`, then one value per
/// line, row-major, full-precision decimal.
pub fn write_field_snapshot(path: &Path, field: &Field, time: f64) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    let g = field.grid;
    if g.dim == 1 {
        writeln!(f, "1 {} {} {}", g.n[0], g.len[0], time)?;
    } else {
        writeln!(f, "2 {} {} {} {} {}", g.n[0], g.n[1], g.len[0], g.len[1], time)?;
    }
    for v in &field.data {
        writeln!(f, "{}", v)?;
    }
    Ok(())
}

pub fn read_field_snapshot(path: &Path) -> Result<(Field, f64)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Numerical("empty snapshot".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let bad = || Error::Numerical(format!("malformed snapshot header: {header}"));
    let dim: usize = parts.first().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let (grid, time) = if dim == 1 {
        if parts.len() != 4 {
            return Err(bad());
        }
        let n: usize = parts[1].parse().map_err(|_| bad())?;
        let l: f64 = parts[2].parse().map_err(|_| bad())?;
        let t: f64 = parts[3].parse().map_err(|_| bad())?;
        (Grid::new_1d(n, l), t)
    } else {
        if parts.len() != 6 {
            return Err(bad());
        }
        let n1: usize = parts[1].parse().map_err(|_| bad())?;
        let n2: usize = parts[2].parse().map_err(|_| bad())?;
        let l1: f64 = parts[3].parse().map_err(|_| bad())?;
        let l2: f64 = parts[4].parse().map_err(|_| bad())?;
        let t: f64 = parts[5].parse().map_err(|_| bad())?;
        (Grid::new_2d(n1, n2, l1, l2), t)
    };
    let mut data = Vec::with_capacity(grid.cells());
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        data.push(
            line.trim()
                .parse::<f64>()
                .map_err(|e| Error::Numerical(format!("snapshot value: {e}")))?,
        );
    }
    if data.len() != grid.cells() {
        return Err(Error::Numerical(format!(
            "snapshot has {} values, expected {}",
            data.len(),
            grid.cells()
        )));
    }
    Ok((Field { grid, data }, time))
}

pub fn write_study_report(dir: &Path, report: &StudyReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.csv"), report.csv())?;
    std::fs::write(dir.join("verdicts.csv"), report.verdicts_csv())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Minimal PNG line plots (no plotting backend required).
// ---------------------------------------------------------------------------

const COLORS: [[u8; 3]; 6] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
];

pub type Series<'a> = (&'a str, &'a [(f64, f64)]);

/// Draw one or more series as polylines into an 800x500 PNG with a plain
/// frame. Never fails a run: IO errors propagate, but there is no display
/// or backend dependency.
pub fn plot_png(path: &Path, series: &[Series]) -> Result<()> {
    let (w, h) = (800u32, 500u32);
    let (ml, mr, mt, mb) = (60i64, 20i64, 20i64, 40i64);
    let mut img = image::RgbImage::from_pixel(w, h, image::Rgb([255, 255, 255]));

    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in *pts {
            if x.is_finite() && y.is_finite() {
                xmin = xmin.min(x);
                xmax = xmax.max(x);
                ymin = ymin.min(y);
                ymax = ymax.max(y);
            }
        }
    }
    if !xmin.is_finite() || xmin == xmax {
        xmax = xmin + 1.0;
    }
    if !ymin.is_finite() {
        ymin = 0.0;
        ymax = 1.0;
    }
    if ymin == ymax {
        ymin -= 0.5;
        ymax += 0.5;
    }
    let pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    let px = |x: f64| -> i64 {
        ml + ((x - xmin) / (xmax - xmin) * (w as i64 - ml - mr) as f64) as i64
    };
    let py = |y: f64| -> i64 {
        (h as i64 - mb) - ((y - ymin) / (ymax - ymin) * (h as i64 - mt - mb) as f64) as i64
    };

    let mut line = |x0: i64, y0: i64, x1: i64, y1: i64, c: [u8; 3]| {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        let (mut x, mut y) = (x0, y0);
        loop {
            if x >= 0 && y >= 0 && (x as u32) < w && (y as u32) < h {
                img.put_pixel(x as u32, y as u32, image::Rgb(c));
            }
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    };

    // frame
    let frame = [0u8, 0, 0];
    line(ml, mt, w as i64 - mr, mt, frame);
    line(ml, h as i64 - mb, w as i64 - mr, h as i64 - mb, frame);
    line(ml, mt, ml, h as i64 - mb, frame);
    line(w as i64 - mr, mt, w as i64 - mr, h as i64 - mb, frame);

    for (si, (_, pts)) in series.iter().enumerate() {
        let c = COLORS[si % COLORS.len()];
        let mut prev: Option<(i64, i64)> = None;
        for &(x, y) in *pts {
            if !(x.is_finite() && y.is_finite()) {
                prev = None;
                continue;
            }
            let p = (px(x), py(y));
            if let Some(q) = prev {
                line(q.0, q.1, p.0, p.1, c);
            }
            prev = Some(p);
        }
    }

    img.save(path)
        .map_err(|e| Error::Numerical(format!("png encode failed: {e}")))?;
    Ok(())
}
