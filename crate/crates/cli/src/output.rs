use std::fmt::Write as _;

use rsr_core::abelmono::{analytic_overlay, LocusRow, LocusTable};
use rsr_core::tolerances::Tolerances;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::InputError;

pub const CSV_HEADER: [&str; 9] = ["a_re", "a_im", "x_re", "x_im", "y_re", "y_im", "z_re", "z_im", "eta_residual"];

/// Standard envelope: every JSON report carries its tolerances and residuals.
pub fn report(command: &str, passed: bool, tolerances: &Tolerances, residuals: Value, result: impl Serialize) -> Value {
    json!({
        "command": command,
        "passed": passed,
        "tolerances": tolerances,
        "residuals": residuals,
        "result": result,
    })
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        // Pairs of numbers are complex scalars; print them inline.
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            let _ = writeln!(out, "{prefix} = {}", Value::Array(a.clone()));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix} = {other}");
        }
    }
}

/// One `path = value` line per leaf.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

pub fn to_csv<'a>(rows: impl IntoIterator<Item = &'a LocusRow>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let vals = [r.a.re, r.a.im, r.x.re, r.x.im, r.y.re, r.y.im, r.z.re, r.z.im, r.eta_residual];
        // Adding 0.0 turns −0 into +0.
        w.write_record(vals.iter().map(|v| (v + 0.0).to_string()))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;
const EXTENT: f64 = 6.0;

fn sx(x: f64) -> f64 {
    MARGIN + (x + EXTENT) / (2.0 * EXTENT) * (SIZE - 2.0 * MARGIN)
}

fn sy(y: f64) -> f64 {
    SIZE - MARGIN - (y + EXTENT) / (2.0 * EXTENT) * (SIZE - 2.0 * MARGIN)
}

fn inside(x: f64, y: f64) -> bool {
    x.abs() <= EXTENT && y.abs() <= EXTENT
}

/// √(3 + √5): the common value of x and y at the dodecahedral point.
pub fn dodeca_trace() -> f64 {
    (3.0 + 5f64.sqrt()).sqrt()
}

/// Real locus points over the analytic curve, in the square |x|, |y| ≤ 6.
pub fn emit_locus_svg(tables: &[LocusTable], r: f64) -> Result<String, InputError> {
    if tables.iter().all(|t| t.rows.is_empty()) {
        return Err(InputError::new("empty-table", "locus table has no rows"));
    }
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, "<!-- rsr {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Axes, unit ticks and the asymptotes |x| = 2, |y| = 2.
    let (lo, hi) = (-EXTENT, EXTENT);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(lo), sy(0.0), sx(hi), sy(0.0));
    let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(0.0), sy(lo), sx(0.0), sy(hi));
    for k in -6..=6 {
        let v = k as f64;
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(v), sy(0.0) - 3.0, sx(v), sy(0.0) + 3.0);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(0.0) - 3.0, sy(v), sx(0.0) + 3.0, sy(v));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g stroke="#999999" stroke-dasharray="4 4" stroke-width="1">"##);
    for v in [-2.0, 2.0] {
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(v), sy(lo), sx(v), sy(hi));
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(lo), sy(v), sx(hi), sy(v));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11" text-anchor="middle">"#);
    for k in [-6, -4, -2, 2, 4, 6] {
        let v = k as f64;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{k}</text>"#, sx(v), sy(0.0) + 16.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{k}</text>"#, sx(0.0) - 14.0, sy(v) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">x</text>"#, sx(hi) + 16.0, sy(0.0) + 4.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">y</text>"#, sx(0.0), sy(hi) - 10.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">r = {r}</text>"#, SIZE / 2.0, MARGIN / 2.0);
    let _ = writeln!(s, "</g>");

    // The analytic curve in all four quadrants.
    let branch = analytic_overlay(r, EXTENT, 400);
    for (qx, qy) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        let pts: Vec<String> = branch
            .iter()
            .filter(|p| inside(p[0], p[1]))
            .map(|p| format!("{:.2},{:.2}", sx(qx * p[0]), sy(qy * p[1])))
            .collect();
        if pts.len() > 1 {
            let _ = writeln!(s, r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{}"/>"##, pts.join(" "));
        }
    }

    let _ = writeln!(s, r##"<g fill="#d62728">"##);
    for row in tables.iter().flat_map(|t| t.real_rows()) {
        let (x, y) = (row.x.re, row.y.re);
        if inside(x, y) {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(x), sy(y));
        }
    }
    let _ = writeln!(s, "</g>");

    if (r - 0.1).abs() < 1e-12 {
        let d = dodeca_trace();
        let _ = writeln!(
            s,
            r#"<g><rect x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="black" stroke-width="1.5"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">dodecahedral point ({d:.5}, {d:.5})</text></g>"#,
            sx(d) - 4.0,
            sy(d) - 4.0,
            sx(d) + 8.0,
            sy(d) - 8.0
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_flattening() {
        let v = json!({"a": {"b": 1, "c": [1.0, 2.0]}, "d": [{"e": true}]});
        assert_eq!(to_text(&v), "a.b = 1\na.c = [1.0,2.0]\nd[0].e = true\n");
    }

    fn row(x: f64, y: f64, real: bool) -> LocusRow {
        let c = |v: f64| rsr_core::C64::new(v, 0.0);
        LocusRow { t: 0.0, a: c(0.0), x: c(x), y: c(y), z: c(0.0), eta_residual: 0.0, real, refined: false }
    }

    fn table(rows: Vec<LocusRow>) -> LocusTable {
        LocusTable { r: 0.1, tau: 1.0, chi0: rsr_core::C64::new(0.0, 0.0), rows, overlay: vec![] }
    }

    #[test]
    fn svg_markers_and_overlay() {
        let d = dodeca_trace();
        let one = emit_locus_svg(&[table(vec![row(d, d, true)])], 0.1).unwrap();
        assert_eq!(one.matches("<circle").count(), 1);
        assert!(one.contains("dodecahedral point (2.28825, 2.28825)"));
        assert_eq!(one.matches("<polyline").count(), 4);
        let none = emit_locus_svg(&[table(vec![row(1.0, 1.0, false)])], 0.2).unwrap();
        assert_eq!(none.matches("<circle").count(), 0);
        assert!(!none.contains("dodecahedral"));
        assert!(none.contains("<polyline"));
    }

    #[test]
    fn csv_header_and_signed_zero() {
        let s = to_csv([&row(2.0, -0.0, true)]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "a_re,a_im,x_re,x_im,y_re,y_im,z_re,z_im,eta_residual");
        assert_eq!(lines.next().unwrap(), "0,0,2,0,0,0,0,0,0");
    }

    #[test]
    fn empty_svg_rejected() {
        let t = LocusTable { r: 0.1, tau: 1.0, chi0: rsr_core::C64::new(0.0, 0.0), rows: vec![], overlay: vec![] };
        assert!(emit_locus_svg(&[t], 0.1).is_err());
    }
}
