//! JSON, CSV and SVG artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_traits::ToPrimitive;

use super::report::{ExperimentReport, SCHEMA};
use crate::error::{Error, Result};
use crate::polygon::Polygon;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::param(format!("unknown format {s:?}; expected json, csv or svg"))),
        }
    }
}

pub fn report_json(report: &ExperimentReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn report_from_json(text: &str) -> Result<ExperimentReport> {
    let report: ExperimentReport = serde_json::from_str(text)?;
    if report.schema != SCHEMA {
        return Err(Error::Parse(format!("unsupported report schema {:?}", report.schema)));
    }
    Ok(report)
}

/// One row per integer abscissa `k` with each polygon's value as `num/den`;
/// cells past the end of a shorter polygon are empty.
pub fn polygons_csv(polys: &[(String, Polygon)]) -> String {
    let mut out = String::from("k");
    for (label, _) in polys {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    let len = polys.iter().map(|(_, p)| p.length()).max().unwrap_or(0);
    for k in 0..=len {
        out.push_str(&k.to_string());
        for (_, p) in polys {
            out.push(',');
            if k <= p.length() {
                let v = p.eval_int(k);
                let _ = write!(out, "{}/{}", v.numer(), v.denom());
            }
        }
        out.push('\n');
    }
    out
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Up to four polygons drawn as polylines through their vertices, with a
/// legend.
pub fn polygons_svg(polys: &[(String, Polygon)]) -> Result<String> {
    if polys.is_empty() || polys.len() > COLORS.len() {
        return Err(Error::param(format!("an SVG plot takes 1 to 4 polygons, got {}", polys.len())));
    }
    let (w, h, margin) = (480.0, 360.0, 40.0);
    let xmax = polys.iter().map(|(_, p)| p.length()).max().unwrap_or(0).max(1) as f64;
    let ymax = polys
        .iter()
        .map(|(_, p)| p.endpoint().1.to_f64().unwrap_or(0.0))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let sx = |x: f64| margin + x / xmax * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - y / ymax * (h - 2.0 * margin);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.2} {y0:.2} H{x1:.2} M{x0:.2} {y0:.2} V{y1:.2}" stroke="black" fill="none"/>"#,
        x0 = sx(0.0),
        y0 = sy(0.0),
        x1 = sx(xmax),
        y1 = sy(ymax)
    );
    for (i, (label, poly)) in polys.iter().enumerate() {
        let points: Vec<String> = poly
            .vertices()
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x as f64), sy(y.to_f64().unwrap_or(0.0))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" stroke="{}" stroke-width="2" fill="none"><title>{}</title></polyline>"#,
            points.join(" "),
            COLORS[i],
            escape(label)
        );
        let y = margin + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            margin + 8.0,
            margin + 28.0,
            COLORS[i],
            margin + 34.0,
            y + 4.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The polygons of the first case of a report: sampled minimum, `HP`, `FP`,
/// `PP`, whichever are present.
pub fn report_polygons(report: &ExperimentReport) -> Vec<(String, Polygon)> {
    let Some(c) = report.cases.first() else {
        return Vec::new();
    };
    [
        ("sampled min NP", &c.sampled_min_np),
        ("HP", &c.hp),
        ("FP", &c.fp),
        ("PP", &c.pp),
    ]
    .into_iter()
    .filter_map(|(l, p)| p.clone().map(|p| (l.to_string(), p)))
    .collect()
}

pub fn render_report(report: &ExperimentReport, format: Format) -> Result<String> {
    match format {
        Format::Json => report_json(report),
        Format::Csv => Ok(polygons_csv(&report_polygons(report))),
        Format::Svg => polygons_svg(&report_polygons(report)),
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{frobenius_polygon, hodge_polygon};

    #[test]
    fn hodge_csv() {
        let hp = hodge_polygon(2, 3).unwrap();
        let csv = polygons_csv(&[("HP".into(), hp)]);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[..4], ["k,HP", "0,0/1", "1,2/3", "2,5/3"]);
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn svg_overlay() {
        let fp = frobenius_polygon(2, 3, 5).unwrap();
        let hp = hodge_polygon(2, 3).unwrap();
        assert!(fp.compare(&hp).unwrap().is_ge());
        let svg = polygons_svg(&[("FP".into(), fp.clone()), ("HP".into(), hp)]).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">FP</text>") && svg.contains(">HP</text>"));
        assert!(polygons_svg(&vec![("FP".to_string(), fp); 5]).is_err());
    }

    #[test]
    fn io_errors_name_the_path() {
        let err = write_file(Path::new("/nonexistent-dir/x.json"), "{}").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.json"));
    }
}
