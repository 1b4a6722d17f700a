use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{ReportError, Result};
use crate::clustering::ClusterAssignment;
use crate::projection::Projection3D;

const PANEL: f64 = 300.0;
const MARGIN: f64 = 30.0;
const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

/// Writes `<stem>.pca.csv` and `<stem>.pca.svg` into `out_dir`. Both files
/// are rendered before either is written.
pub fn emit_plots(projection: &Projection3D, assignment: &ClusterAssignment, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    if assignment.coin_ids.is_empty() {
        return Err(ReportError::EmptyAssignment);
    }
    if projection.coin_ids != assignment.coin_ids {
        return Err(ReportError::Misaligned);
    }
    let mut csv = Vec::new();
    projection.write_csv(&assignment.labels, &mut csv).expect("writing to memory");
    let svg = render_svg(projection, &assignment.labels, stem);

    std::fs::create_dir_all(out_dir).map_err(|e| ReportError::io(out_dir, e))?;
    let csv_path = out_dir.join(format!("{stem}.pca.csv"));
    let svg_path = out_dir.join(format!("{stem}.pca.svg"));
    std::fs::write(&csv_path, csv).map_err(|e| ReportError::io(&csv_path, e))?;
    std::fs::write(&svg_path, svg).map_err(|e| ReportError::io(&svg_path, e))?;
    Ok(vec![csv_path, svg_path])
}

/// Three side-by-side scatter panels: PC1/PC2, PC1/PC3, PC2/PC3.
/// Coordinates are printed to two decimals so the output is byte-stable.
pub fn render_svg(projection: &Projection3D, labels: &[usize], title: &str) -> String {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let width = 3.0 * PANEL + 4.0 * MARGIN;
    let height = PANEL + 3.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="18" font-size="13">{}</text>"#, escape(title));
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let x0 = MARGIN + p as f64 * (PANEL + MARGIN);
        let y0 = 2.0 * MARGIN;
        let xs: Vec<f64> = projection.coords.column(a).iter().copied().collect();
        let ys: Vec<f64> = projection.coords.column(b).iter().copied().collect();
        let sx = scale(&xs);
        let sy = scale(&ys);
        let _ = writeln!(s, r#"<g transform="translate({x0},{y0})">"#);
        let _ = writeln!(s, r##"<rect width="{PANEL}" height="{PANEL}" fill="none" stroke="#999"/>"##);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">PC{}</text>"#, PANEL / 2.0, PANEL + 14.0, a + 1);
        let _ = writeln!(s, r#"<text x="-6" y="{}" text-anchor="middle" transform="rotate(-90 -6 {})">PC{}</text>"#, PANEL / 2.0, PANEL / 2.0, b + 1);
        for (i, coin) in projection.coin_ids.iter().enumerate() {
            let cx = 10.0 + sx(xs[i]) * (PANEL - 20.0);
            let cy = PANEL - 10.0 - sy(ys[i]) * (PANEL - 20.0);
            let _ = writeln!(
                s,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="5" fill="{}"><title>{} (cluster {})</title></circle>"#,
                PALETTE[labels[i] % PALETTE.len()],
                escape(coin),
                labels[i]
            );
        }
        s.push_str("</g>\n");
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    for c in 0..k {
        let x = MARGIN + c as f64 * 90.0;
        let y = height - 12.0;
        let _ = writeln!(
            s,
            r#"<circle cx="{x}" cy="{}" r="5" fill="{}"/><text x="{}" y="{y}">cluster {c}</text>"#,
            y - 4.0,
            PALETTE[c % PALETTE.len()],
            x + 9.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Affine map of the value range onto [0, 1]; constant ranges map to 0.5.
fn scale(v: &[f64]) -> impl Fn(f64) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    move |x| if hi > lo { (x - lo) / (hi - lo) } else { 0.5 }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
