//! Output writers: atomic files, the reduction CSV and the blow-up SVG.

use crate::error::CliError;
use reinhardt_core::coeureloeb::{BlowupTable, ReductionRow};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Sends `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match write!(stdout, "{text}{nl}").and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io { path: "<stdout>".into(), message: e.to_string() })
                }
                _ => Ok(()),
            }
        }
    }
}

pub const CSV_HEADER: &str = "sign,R,theta,re_f,im_g,im_h,k,reduced_g,reduced_h,reduced_re_f,reduced_im_f";

/// One CSV line per boundary sample, grouped by sign branch and radius.
pub fn reduction_csv(blocks: &[(&str, f64, &[ReductionRow])]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (sign, r, rows) in blocks {
        for row in rows.iter() {
            let _ = writeln!(
                out,
                "{sign},{r},{},{},{},{},{},{},{},{},{}",
                row.theta, row.re_f, row.im_g, row.im_h, row.k, row.reduced_g, row.reduced_h, row.reduced_f[0], row.reduced_f[1]
            );
        }
    }
    out
}

/// Polyline of `s·Im g_R(0)` against `R`, one series per sign branch, on a
/// logarithmic `R − 1` axis.
pub fn blowup_svg(series: &[(&str, &BlowupTable)]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, t)| t.rows.iter().map(|r| ((r.r - 1.0).log10(), r.im_g0.abs())))
        .collect();
    let (x0, x1) = bounds(pts.iter().map(|p| p.0));
    let (y0, y1) = bounds(pts.iter().map(|p| p.1).chain([0.0]));
    let sx = |x: f64| PAD + (x1 - x) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{PAD} {PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">R − 1 (log scale, decreasing)</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(svg, r#"<text x="14" y="{}" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">|Im g_R(0)|</text>"#, H / 2.0, H / 2.0);
    for (label, y) in [(format!("{y0:.2}"), y0), (format!("{y1:.2}"), y1)] {
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" font-size="10" text-anchor="end">{label}</text>"#, PAD - 4.0, sy(y) + 3.0);
    }
    let colours = ["#1f5fa8", "#b0412e"];
    for (i, (name, table)) in series.iter().enumerate() {
        let path: Vec<String> = table
            .rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx((r.r - 1.0).log10()), sy(r.im_g0.abs())))
            .collect();
        let c = colours[i % colours.len()];
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#, path.join(" "));
        for r in &table.rows {
            let (x, y) = (sx((r.r - 1.0).log10()), sy(r.im_g0.abs()));
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{c}"/>"#);
            let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">R={}</text>"#, H - PAD + 14.0, r.r);
        }
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="11" fill="{c}">sign {name}</text>"#, W - PAD - 50.0, PAD + 14.0 * i as f64);
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use reinhardt_core::coeureloeb::BlowupRow;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "first").unwrap();
        write_atomic(&p, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let row = ReductionRow {
            theta: 0.5,
            re_f: 1.0,
            im_g: 2.0,
            im_h: 0.5,
            k: 1,
            reduced_g: 1.2,
            reduced_h: 0.7,
            reduced_f: [0.1, 0.2],
        };
        let rows = [row.clone(), row];
        let text = reduction_csv(&[("+", 1.5, &rows)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), CSV_HEADER.split(',').count());
        assert!(lines[1].starts_with("+,1.5,0.5,"));
    }

    #[test]
    fn svg_is_well_formed() {
        let table = BlowupTable {
            rows: vec![
                BlowupRow { r: 1.5, n: 256, im_g0: 1.5, im_h0: 0.7 },
                BlowupRow { r: 1.1, n: 1024, im_g0: 2.4, im_h0: 0.4 },
            ],
            g_increasing: true,
            h_increasing: true,
            max_center_g: 2.4,
        };
        let svg = blowup_svg(&[("+", &table)]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(!svg.contains("NaN"));
    }
}
