//! Frame files: CSV line data and legacy VTK for 2D fields.
//!
//! Every CSV file starts with the comment line [`FORMAT_TAG`], followed by
//! `# key = value` comment lines and a header row. Numbers are written with
//! 17 significant digits so that a file read back reproduces the doubles.

use crate::burgers::ScalarFrame;
use crate::error::{Error, Result};
use crate::fvm1d::Frame1D;
use crate::fvm2d::Frame2D;
use std::fmt::Write as _;

pub const FORMAT_TAG: &str = "# osgrp-frame v1";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(meta: &[(&str, String)], header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut s = String::new();
    s.push_str(FORMAT_TAG);
    s.push('\n');
    for (k, v) in meta {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s.push_str(&header.join(","));
    s.push('\n');
    for r in rows {
        let line: Vec<String> = r.into_iter().map(num).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

/// `x,rho,v,p` at the cell centres.
pub fn frame1d_csv(case: &str, f: &Frame1D) -> String {
    let rows = f.x.iter().zip(&f.cells).map(|(&x, s)| vec![x, s.rho, s.v, s.p]);
    csv(&[("case", case.into()), ("t", num(f.t))], &["x", "rho", "v", "p"], rows)
}

/// Stacked frames `x,t,rho,v,p` for space-time plots.
pub fn space_time_1d_csv(case: &str, frames: &[Frame1D]) -> String {
    let rows = frames.iter().flat_map(|f| f.x.iter().zip(&f.cells).map(move |(&x, s)| vec![x, f.t, s.rho, s.v, s.p]));
    csv(&[("case", case.into())], &["x", "t", "rho", "v", "p"], rows)
}

pub fn scalar_csv(case: &str, f: &ScalarFrame) -> String {
    let rows = f.x.iter().zip(&f.v).map(|(&x, &v)| vec![x, v]);
    csv(&[("case", case.into()), ("t", num(f.t))], &["x", "v"], rows)
}

/// Stacked frames `x,t,v` for space-time plots.
pub fn space_time_csv(case: &str, frames: &[ScalarFrame]) -> String {
    let rows = frames.iter().flat_map(|f| f.x.iter().zip(&f.v).map(move |(&x, &v)| vec![x, f.t, v]));
    csv(&[("case", case.into())], &["x", "t", "v"], rows)
}

/// Legacy ASCII VTK with the cell centres as structured points. Solid cells
/// are flagged by the `solid` scalar.
pub fn frame2d_vtk(case: &str, f: &Frame2D) -> String {
    let g = &f.grid;
    let (dx, dy) = (g.dx(), g.dy());
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "osgrp-frame v1 case={case} t={}", num(f.t));
    let _ = writeln!(s, "ASCII\nDATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", g.nx, g.ny);
    let _ = writeln!(s, "ORIGIN {} {} 0", num(g.x0 + 0.5 * dx), num(g.y0 + 0.5 * dy));
    let _ = writeln!(s, "SPACING {} {} 1", num(dx), num(dy));
    let _ = writeln!(s, "POINT_DATA {}", g.nx * g.ny);
    for (name, get) in [("rho", (|c: &crate::gas::Prim2| c.rho) as fn(&crate::gas::Prim2) -> f64), ("p", |c| c.p)] {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for c in &f.cells {
            let _ = writeln!(s, "{}", num(get(c)));
        }
    }
    let _ = writeln!(s, "VECTORS velocity double");
    for c in &f.cells {
        let _ = writeln!(s, "{} {} 0", num(c.vx), num(c.vy));
    }
    let _ = writeln!(s, "SCALARS solid int 1\nLOOKUP_TABLE default");
    for &b in &g.solid {
        let _ = writeln!(s, "{}", b as u8);
    }
    s
}

/// Parsed CSV frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut meta = Vec::new();
    let mut header = None;
    for (_, l) in lines.by_ref() {
        if let Some(c) = l.strip_prefix('#') {
            if let Some((k, v)) = c.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        header = Some(l);
        break;
    }
    let columns: Vec<String> = header.ok_or_else(|| Error::Parse("no header row".into()))?.split(',').map(|c| c.trim().to_string()).collect();
    let rows = lines
        .map(|(n, l)| {
            let r = l.split(',').map(|v| v.trim().parse::<f64>()).collect::<std::result::Result<Vec<_>, _>>();
            match r {
                Ok(r) if r.len() == columns.len() => Ok(r),
                Ok(r) => Err(Error::Parse(format!("line {}: {} fields, expected {}", n + 1, r.len(), columns.len()))),
                Err(e) => Err(Error::Parse(format!("line {}: {e}", n + 1))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { meta, columns, rows })
}

/// Discrete norms of a difference, weighted by the cell width.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

pub fn norms(a: &[f64], b: &[f64], dx: f64) -> Norms {
    let mut n = Norms::default();
    for (x, y) in a.iter().zip(b) {
        let e = (x - y).abs();
        n.l1 += e * dx;
        n.l2 += e * e * dx;
        n.linf = n.linf.max(e);
    }
    n.l2 = n.l2.sqrt();
    n
}

/// Norms of the difference of every data column of two frames on the same
/// grid. Frames on different grids are refused, not interpolated.
pub fn compare(a: &Table, b: &Table) -> Result<Vec<(String, Norms)>> {
    if a.columns != b.columns {
        return Err(Error::GridMismatch(format!("columns {:?} and {:?}", a.columns, b.columns)));
    }
    if a.rows.len() != b.rows.len() {
        return Err(Error::GridMismatch(format!("{} and {} rows", a.rows.len(), b.rows.len())));
    }
    let xa = a.column("x").ok_or_else(|| Error::Parse("no `x` column".into()))?;
    let xb = b.column("x").unwrap_or_default();
    for (i, (p, q)) in xa.iter().zip(&xb).enumerate() {
        if (p - q).abs() > 1e-12 * p.abs().max(q.abs()).max(1.0) {
            return Err(Error::GridMismatch(format!("row {i}: x = {p} and x = {q}")));
        }
    }
    if a.columns.iter().any(|c| c == "t") {
        return Err(Error::Usage("space-time files cannot be compared".into()));
    }
    let dx = if xa.len() > 1 { (xa[xa.len() - 1] - xa[0]) / (xa.len() - 1) as f64 } else { 1.0 };
    Ok(a.columns
        .iter()
        .filter(|c| *c != "x")
        .map(|c| (c.clone(), norms(&a.column(c).unwrap(), &b.column(c).unwrap(), dx)))
        .collect())
}
