//! CSV and SVG writers. Every file starts with a comment line carrying the
//! crate version and the resolved run configuration.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::limitset::{FnProfile, OmegaCover};
use crate::paramspace::CantorReport;
use crate::scalar::Scalar;
use crate::torus::{GeodesicTrace, GridRow, PolygonModel};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `# dilaflow <version> key=value ...`
pub fn header_line(config: &[(&str, String)]) -> String {
    let mut s = format!("dilaflow {VERSION}");
    for (k, v) in config {
        let _ = write!(s, " {k}={v}");
    }
    s
}

fn csv_writer<W: Write>(mut out: W, header: &str) -> io::Result<csv::Writer<W>> {
    writeln!(out, "# {header}")?;
    Ok(csv::Writer::from_writer(out))
}

fn finish<W: Write>(w: csv::Writer<W>) -> io::Result<()> {
    w.into_inner().map_err(|e| e.into_error())?.flush()
}

/// One row per H-cell: `depth,word,i_lo,i_hi,h_lo,h_hi,h_len`.
pub fn write_cantor_cells<S: Scalar, W: Write>(
    out: W,
    header: &str,
    r: &CantorReport<S>,
) -> io::Result<()> {
    let mut w = csv_writer(out, header)?;
    w.write_record(["depth", "word", "i_lo", "i_hi", "h_lo", "h_hi", "h_len"])?;
    for c in &r.cells {
        w.write_record([
            c.word.len().to_string(),
            c.word.to_string(),
            c.i_w.lo.to_literal(),
            c.i_w.hi.to_literal(),
            c.h_w.lo.to_literal(),
            c.h_w.hi.to_literal(),
            c.h_w.length().to_literal(),
        ])?;
    }
    finish(w)
}

/// `depth,cells,h_measure,complement_measure`.
pub fn write_cantor_levels<S: Scalar, W: Write>(
    out: W,
    header: &str,
    r: &CantorReport<S>,
) -> io::Result<()> {
    let mut w = csv_writer(out, header)?;
    w.write_record(["depth", "cells", "h_measure", "complement_measure"])?;
    for l in &r.levels {
        w.write_record([
            l.depth.to_string(),
            l.cells.to_string(),
            l.h_measure.to_literal(),
            l.complement_measure.to_literal(),
        ])?;
    }
    finish(w)
}

/// `x_t,f_n`.
pub fn write_fn_profile<S: Scalar, W: Write>(
    out: W,
    header: &str,
    p: &FnProfile<S>,
) -> io::Result<()> {
    let mut w = csv_writer(out, header)?;
    w.write_record(["x_t", "f_n"])?;
    for (x, v) in p.grid.iter().zip(&p.values) {
        w.write_record([x.to_literal(), v.to_literal()])?;
    }
    finish(w)
}

/// `lo,hi` per cover interval.
pub fn write_omega_cover<S: Scalar, W: Write>(
    out: W,
    header: &str,
    c: &OmegaCover<S>,
) -> io::Result<()> {
    let mut w = csv_writer(out, header)?;
    w.write_record(["lo", "hi"])?;
    for iv in &c.cover {
        w.write_record([iv.lo.to_literal(), iv.hi.to_literal()])?;
    }
    finish(w)
}

/// `angle,sector,label,depth`.
pub fn write_torus_grid<W: Write>(out: W, header: &str, rows: &[GridRow]) -> io::Result<()> {
    let mut w = csv_writer(out, header)?;
    w.write_record(["angle", "sector", "label", "depth"])?;
    for r in rows {
        w.write_record([
            crate::scalar::format_f64(r.angle),
            r.sector.clone(),
            r.label.clone(),
            r.depth.map(|d| d.to_string()).unwrap_or_default(),
        ])?;
    }
    finish(w)
}

fn svg_open(s: &mut String, header: &str, w: f64, h: f64) {
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, "<!-- {} -->", header.replace("--", "- -"));
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

/// Parameter strip: one row per depth, H-cells drawn over `[0, 1]`.
pub fn cantor_svg<S: Scalar>(header: &str, r: &CantorReport<S>) -> String {
    let (width, row, pad) = (800.0, 24.0, 20.0);
    let height = pad * 2.0 + row * (r.depth + 1) as f64;
    let mut s = String::new();
    svg_open(&mut s, header, width + 2.0 * pad, height);
    for d in 0..=r.depth {
        let y = pad + row * d as f64;
        let _ = writeln!(
            s,
            r##"<line x1="{pad}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbb"/>"##,
            y + row / 2.0,
            pad + width,
            y + row / 2.0
        );
    }
    for c in &r.cells {
        let y = pad + row * c.word.len() as f64 + 4.0;
        let x0 = pad + width * c.h_w.lo.to_f64();
        let x1 = pad + width * c.h_w.hi.to_f64();
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.3}" y="{y:.2}" width="{:.3}" height="{:.2}" fill="#1f4e9c"><title>{}</title></rect>"##,
            (x1 - x0).max(0.2),
            row - 8.0,
            if c.word.is_empty() {
                "()".to_string()
            } else {
                c.word.to_string()
            }
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Line plot of an `f_n` profile on `[0, 1] x [0, 1]`.
pub fn fn_svg<S: Scalar>(header: &str, p: &FnProfile<S>) -> String {
    let (size, pad) = (600.0, 40.0);
    let mut s = String::new();
    svg_open(&mut s, header, size + 2.0 * pad, size + 2.0 * pad);
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="none" stroke="black"/>"#
    );
    let pts: Vec<String> = p
        .grid
        .iter()
        .zip(&p.values)
        .map(|(x, v)| {
            format!(
                "{:.3},{:.3}",
                pad + size * x.to_f64(),
                pad + size * (1.0 - v.to_f64())
            )
        })
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#c0392b" stroke-width="1.5" points="{}"/>"##,
        pts.join(" ")
    );
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="{:.0}" font-family="sans-serif" font-size="14">f_{} at rho_a={}, rho_b={}</text>"#,
        pad - 12.0,
        p.n,
        p.rho_a.to_literal(),
        p.rho_b.to_literal()
    );
    s.push_str("</svg>\n");
    s
}

/// Pentagon with edge pairs colored and a traced trajectory on top.
pub fn trace_svg<S: Scalar>(
    header: &str,
    m: &PolygonModel<S>,
    trace: &GeodesicTrace<S>,
    transversal: Option<(usize, usize)>,
) -> String {
    let verts: Vec<(f64, f64)> = m
        .vertices
        .iter()
        .map(|p| (p.x.to_f64(), p.y.to_f64()))
        .collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &verts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let (size, pad) = (600.0, 30.0);
    let k = size / (xmax - xmin).max(ymax - ymin);
    let tx = |x: f64| pad + k * (x - xmin);
    let ty = |y: f64| pad + k * (ymax - y);
    let mut s = String::new();
    svg_open(
        &mut s,
        header,
        k * (xmax - xmin) + 2.0 * pad,
        k * (ymax - ymin) + 2.0 * pad,
    );
    let colors = ["#c0392b", "#1f4e9c", "#c0392b", "#1f4e9c", "black"];
    for i in 0..5 {
        let (a, b) = (verts[i], verts[(i + 1) % 5]);
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="3"/>"#,
            tx(a.0),
            ty(a.1),
            tx(b.0),
            ty(b.1),
            colors[i]
        );
    }
    if let Some((i, j)) = transversal {
        let (a, b) = (verts[i], verts[j]);
        let _ = writeln!(
            s,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#27ae60" stroke-width="2" stroke-dasharray="6 4"/>"##,
            tx(a.0),
            ty(a.1),
            tx(b.0),
            ty(b.1)
        );
    }
    for (a, b) in &trace.segments {
        let _ = writeln!(
            s,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#555" stroke-width="1"/>"##,
            tx(a.x.to_f64()),
            ty(a.y.to_f64()),
            tx(b.x.to_f64()),
            ty(b.y.to_f64())
        );
    }
    for (i, &(x, y)) in verts.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="16">{}</text>"#,
            tx(x) + 4.0,
            ty(y) - 4.0,
            PolygonModel::<S>::label(i)
        );
    }
    s.push_str("</svg>\n");
    s
}
