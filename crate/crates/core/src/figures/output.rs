//! Flat-file renderings of grids and curves.
//!
//! Numbers are written with 17 significant digits; `NaN` is the literal
//! `nan` in CSV and `null` in JSON.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write;

use super::{BoundaryCurve, Contour, FormulaId, GridAxis, ProbabilityGrid};

pub const NAN_LITERAL: &str = "nan";

/// 17 significant digits, or `nan`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        NAN_LITERAL.to_owned()
    } else {
        format!("{x:.16e}")
    }
}

/// Header `x,y,value`, then one row per sample with `x` varying fastest.
pub fn grid_csv(grid: &ProbabilityGrid) -> String {
    let mut out = String::with_capacity(grid.values.len() * 72);
    let _ = writeln!(out, "{},{},{}", grid.x.name, grid.y.name, grid.value_name);
    for (x, y, v) in grid.iter() {
        let _ = writeln!(out, "{},{},{}", fmt_num(x), fmt_num(y), fmt_num(v));
    }
    out
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Serialize)]
pub struct GridDocument<'a> {
    pub formula_id: FormulaId,
    pub axes: [&'a GridAxis; 2],
    pub resolution: usize,
    pub fixed_params: &'a BTreeMap<String, f64>,
    pub value_name: &'a str,
    pub csv_sha256: String,
    pub values: Vec<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contours: Option<&'a [Contour]>,
}

/// Metadata, the digest of [`grid_csv`], and the values (`null` for `NaN`).
pub fn grid_json(
    grid: &ProbabilityGrid,
    contours: Option<&[Contour]>,
) -> serde_json::Result<String> {
    let doc = GridDocument {
        formula_id: grid.formula_id,
        axes: [&grid.x, &grid.y],
        resolution: grid.nx(),
        fixed_params: &grid.fixed_params,
        value_name: &grid.value_name,
        csv_sha256: sha256_hex(&grid_csv(grid)),
        values: grid
            .values
            .iter()
            .map(|v| (!v.is_nan()).then_some(*v))
            .collect(),
        contours,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// `level,polyline,vertex,x,y` rows.
pub fn contours_csv(contours: &[Contour], x_name: &str, y_name: &str) -> String {
    let mut out = format!("level,polyline,vertex,{x_name},{y_name}\n");
    for c in contours {
        for (li, line) in c.polylines.iter().enumerate() {
            for (vi, [x, y]) in line.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{li},{vi},{},{}",
                    fmt_num(c.level),
                    fmt_num(*x),
                    fmt_num(*y)
                );
            }
        }
    }
    out
}

/// `delta,v3_abs,vnorm,rho_v` rows.
pub fn curves_csv(curves: &[BoundaryCurve]) -> String {
    let mut out = String::from("delta,v3_abs,vnorm,rho_v\n");
    for c in curves {
        for s in &c.samples {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_num(c.delta),
                fmt_num(s.v3_abs),
                fmt_num(s.vnorm),
                fmt_num(s.rho)
            );
        }
    }
    out
}
