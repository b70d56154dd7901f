//! CSV, JSON and SVG writers for sampled solution tables.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use frdt_core::{Row, Sample, SolutionTable};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error in {path}: {message}")]
    Csv { path: String, message: String },
    #[error("refusing to write an empty table")]
    EmptyTable,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EmitError + '_ {
    move |source| EmitError::Io {
        path: path.display().to_string(),
        source,
    }
}

const U_HEADER: [&str; 5] = ["x", "t", "re_u", "im_u", "abs_u"];
const V_HEADER: [&str; 3] = ["re_v", "im_v", "abs_v"];

/// Column names for a table.
pub fn csv_header(coupled: bool) -> Vec<&'static str> {
    let mut h = U_HEADER.to_vec();
    if coupled {
        h.extend(V_HEADER);
    }
    h
}

/// Shortest-free fixed format: 17 significant digits in scientific notation.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Serializes a table as CSV text.
pub fn csv_string(table: &SolutionTable) -> Result<String, EmitError> {
    if table.is_empty() {
        return Err(EmitError::EmptyTable);
    }
    let mut wtr = csv_writer(Vec::new());
    let csv_err = |e: csv::Error| EmitError::Csv {
        path: "<memory>".into(),
        message: e.to_string(),
    };
    wtr.write_record(csv_header(table.coupled)).map_err(csv_err)?;
    for row in &table.rows {
        let mut rec = vec![
            fmt_f64(row.x),
            fmt_f64(row.t),
            fmt_f64(row.u.re),
            fmt_f64(row.u.im),
            fmt_f64(row.u.abs),
        ];
        if table.coupled {
            let v = row.v.unwrap_or(Sample {
                re: f64::NAN,
                im: f64::NAN,
                abs: f64::NAN,
            });
            rec.extend([fmt_f64(v.re), fmt_f64(v.im), fmt_f64(v.abs)]);
        }
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = wtr.into_inner().map_err(|e| EmitError::Csv {
        path: "<memory>".into(),
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

pub fn emit_csv(table: &SolutionTable, path: &Path) -> Result<(), EmitError> {
    let text = csv_string(table)?;
    std::fs::write(path, text).map_err(io_err(path))
}

/// Parses CSV text produced by [`csv_string`].
pub fn parse_csv(text: &str) -> Result<SolutionTable, EmitError> {
    let bad = |message: String| EmitError::Csv {
        path: "<memory>".into(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let coupled = match header.len() {
        5 => false,
        8 => true,
        n => return Err(bad(format!("expected 5 or 8 columns, found {n}"))),
    };
    if header != csv_header(coupled) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let vals = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("row {}: {e}", line + 1)))?;
        let sample = |i: usize| Sample {
            re: vals[i],
            im: vals[i + 1],
            abs: vals[i + 2],
        };
        rows.push(Row {
            x: vals[0],
            t: vals[1],
            u: sample(2),
            v: coupled.then(|| sample(5)),
        });
    }
    Ok(SolutionTable { coupled, rows })
}

#[derive(Serialize)]
struct JsonRow {
    x: f64,
    t: f64,
    re_u: f64,
    im_u: f64,
    abs_u: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    re_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    im_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_v: Option<f64>,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    meta: &'a RunConfig,
    rows: Vec<JsonRow>,
}

pub fn json_string(table: &SolutionTable, meta: &RunConfig) -> Result<String, EmitError> {
    if table.is_empty() {
        return Err(EmitError::EmptyTable);
    }
    let rows = table
        .rows
        .iter()
        .map(|r| JsonRow {
            x: r.x,
            t: r.t,
            re_u: r.u.re,
            im_u: r.u.im,
            abs_u: r.u.abs,
            re_v: r.v.map(|v| v.re),
            im_v: r.v.map(|v| v.im),
            abs_v: r.v.map(|v| v.abs),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&JsonDoc { meta, rows })
        .expect("table serialization cannot fail");
    text.push('\n');
    Ok(text)
}

pub fn emit_json(table: &SolutionTable, meta: &RunConfig, path: &Path) -> Result<(), EmitError> {
    let text = json_string(table, meta)?;
    std::fs::write(path, text).map_err(io_err(path))
}

const PANEL_W: f64 = 440.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 50.0;

/// Line plots of the real and imaginary parts, one polyline per `t` slice.
/// Coupled tables get a second row of panels for `v`.
pub fn svg_string(table: &SolutionTable, title: &str) -> Result<String, EmitError> {
    if table.is_empty() {
        return Err(EmitError::EmptyTable);
    }
    let mut slices: Vec<f64> = Vec::new();
    for r in &table.rows {
        if !slices.contains(&r.t) {
            slices.push(r.t);
        }
    }
    slices.sort_by(f64::total_cmp);

    type Pick = fn(&Row) -> Option<f64>;
    let mut panels: Vec<(&str, Pick)> = vec![
        ("Re u", |r| Some(r.u.re)),
        ("Im u", |r| Some(r.u.im)),
    ];
    if table.coupled {
        panels.push(("Re v", |r| r.v.map(|v| v.re)));
        panels.push(("Im v", |r| r.v.map(|v| v.im)));
    }
    let rows_of_panels = panels.len().div_ceil(2);
    let width = 2.0 * (PANEL_W + 2.0 * MARGIN);
    let height = rows_of_panels as f64 * (PANEL_H + 2.0 * MARGIN) + 30.0;

    let (x_min, x_max) = range(table.rows.iter().map(|r| r.x));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        escape(title)
    );

    for (idx, (label, pick)) in panels.iter().enumerate() {
        let ox = (idx % 2) as f64 * (PANEL_W + 2.0 * MARGIN) + MARGIN;
        let oy = (idx / 2) as f64 * (PANEL_H + 2.0 * MARGIN) + 30.0 + MARGIN;
        let (y_min, y_max) = range(table.rows.iter().filter_map(pick));
        let sx = |x: f64| ox + (x - x_min) / (x_max - x_min) * PANEL_W;
        let sy = |y: f64| oy + PANEL_H - (y - y_min) / (y_max - y_min) * PANEL_H;

        let _ = writeln!(
            out,
            r##"<rect x="{ox:.3}" y="{oy:.3}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#444"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{label}</text>"#,
            ox + PANEL_W / 2.0,
            oy - 8.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            ox - 4.0,
            oy + 10.0,
            short(y_max)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            ox - 4.0,
            oy + PANEL_H,
            short(y_min)
        );
        let _ = writeln!(
            out,
            r#"<text x="{ox:.3}" y="{:.3}">{}</text>"#,
            oy + PANEL_H + 16.0,
            short(x_min)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            ox + PANEL_W,
            oy + PANEL_H + 16.0,
            short(x_max)
        );

        for (si, &t) in slices.iter().enumerate() {
            let mut pts: Vec<(f64, f64)> = table
                .rows
                .iter()
                .filter(|r| r.t == t)
                .filter_map(|r| pick(r).map(|y| (r.x, y)))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let points = pts
                .iter()
                .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{points}"><title>t = {}</title></polyline>"#,
                slice_colour(si, slices.len()),
                short(t)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_svg(table: &SolutionTable, title: &str, path: &Path) -> Result<(), EmitError> {
    let text = svg_string(table, title)?;
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes()).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

/// Min and max, widened when degenerate.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        let pad = lo.abs().max(1.0) * 1e-3;
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

/// Blue-to-red ramp over the time slices.
fn slice_colour(i: usize, n: usize) -> String {
    let f = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
    let r = (40.0 + 200.0 * f).round() as u8;
    let b = (220.0 - 180.0 * f).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

fn short(v: f64) -> String {
    format!("{v:.4}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
