//! Sampled probability and discrepancy maps.
//!
//! Every map lives on a fixed `n × n` lattice over `[lo, hi]²` that does not
//! depend on the fixed parameters, so maps taken at different velocity norms
//! share sample points. Points outside the physical domain, or where a
//! formula is singular, hold `NaN`.

pub mod boundary;
pub mod contour;
pub mod output;

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kinematics::{Velocity, LIGHT_CONE_GUARD};
use crate::measurement::{discrepancy_eq5, discrepancy_eq6, prob_eq4_velocity, prob_eq7, prob_eq8};

pub use boundary::{curve_fig2, BoundaryCurve, BoundaryPoint};
pub use contour::{marching_squares, Contour};

/// Significance windows used when none are given.
pub const DEFAULT_DELTAS: [f64; 5] = [0.001, 0.005, 0.01, 0.02, 0.05];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormulaId {
    Eq4Map,
    Eq5Map,
    Eq6Map,
    Eq78DiffMap,
}

/// One lattice coordinate: `samples` evenly spaced points on `[min, max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl GridAxis {
    pub fn new(name: &str, min: f64, max: f64, samples: usize) -> Self {
        Self {
            name: name.to_owned(),
            min,
            max,
            samples,
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        let t = i as f64 / (self.samples - 1) as f64;
        self.min + (self.max - self.min) * t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityGrid {
    pub formula_id: FormulaId,
    pub x: GridAxis,
    pub y: GridAxis,
    pub value_name: String,
    pub fixed_params: BTreeMap<String, f64>,
    /// Row-major, `x` fastest; `NaN` marks out-of-domain points.
    pub values: Vec<f64>,
}

impl ProbabilityGrid {
    fn sample<F>(
        formula_id: FormulaId,
        x: GridAxis,
        y: GridAxis,
        value_name: &str,
        fixed_params: BTreeMap<String, f64>,
        f: F,
    ) -> Self
    where
        F: Fn(f64, f64) -> Option<f64> + Sync,
    {
        let (nx, ny) = (x.samples, y.samples);
        let mut values = vec![f64::NAN; nx * ny];
        values.par_chunks_mut(nx).enumerate().for_each(|(iy, row)| {
            let yc = y.coord(iy);
            for (ix, slot) in row.iter_mut().enumerate() {
                *slot = f(x.coord(ix), yc).unwrap_or(f64::NAN);
            }
        });
        Self {
            formula_id,
            x,
            y,
            value_name: value_name.to_owned(),
            fixed_params,
            values,
        }
    }

    pub fn nx(&self) -> usize {
        self.x.samples
    }

    pub fn ny(&self) -> usize {
        self.y.samples
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx() + ix]
    }

    pub fn coords(&self, ix: usize, iy: usize) -> (f64, f64) {
        (self.x.coord(ix), self.y.coord(iy))
    }

    /// `(x, y, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.ny()).flat_map(move |iy| {
            (0..self.nx()).map(move |ix| {
                let (x, y) = self.coords(ix, iy);
                (x, y, self.value(ix, iy))
            })
        })
    }

    /// Largest finite value, with its coordinates.
    pub fn max_finite(&self) -> Option<(f64, f64, f64)> {
        self.iter()
            .filter(|(_, _, v)| v.is_finite())
            .fold(None, |best, cur| match best {
                Some(b) if b.2 >= cur.2 => Some(b),
                _ => Some(cur),
            })
    }

    /// Largest finite `|value|`.
    pub fn max_abs_finite(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidResolution { resolution });
    }
    Ok(())
}

pub fn check_deltas(deltas: &[f64]) -> Result<()> {
    match deltas.iter().find(|d| !(**d > 0.0 && **d < 0.25)) {
        Some(&delta) => Err(Error::InvalidDelta { delta }),
        None => Ok(()),
    }
}

/// `prob_eq4(γṽ)` at `ṽ = (ρ̃_v, 0, ṽ³)`; eq4 depends on the transverse
/// velocity only through `ρ̃_v`.
pub fn fig1_value(v3: f64, rho: f64) -> Option<f64> {
    if v3 * v3 + rho * rho >= 1.0 {
        return None;
    }
    Velocity::new(rho, 0.0, v3)
        .ok()
        .map(|v| prob_eq4_velocity(&v))
}

/// eq4 sampled over `(ṽ³, ρ̃_v) ∈ [−1, 1] × [0, 1]`, masked to the open
/// unit disk.
pub fn fig1_grid(resolution: usize) -> Result<ProbabilityGrid> {
    check_resolution(resolution)?;
    Ok(ProbabilityGrid::sample(
        FormulaId::Eq4Map,
        GridAxis::new("v3", -1.0, 1.0, resolution),
        GridAxis::new("rho_v", 0.0, 1.0, resolution),
        "eq4_probability",
        BTreeMap::new(),
        fig1_value,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig1Map {
    pub grid: ProbabilityGrid,
    pub contours: Vec<Contour>,
}

/// eq4 map plus its `Δ` significance contours.
pub fn map_fig1(resolution: usize, deltas: &[f64]) -> Result<Fig1Map> {
    check_deltas(deltas)?;
    let grid = fig1_grid(resolution)?;
    let contours = deltas.iter().map(|&d| marching_squares(&grid, d)).collect();
    Ok(Fig1Map { grid, contours })
}

const RIM_SLACK: f64 = 4.0 * f64::EPSILON;

/// Discrepancy shown in the fixed-‖ṽ‖ maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Discrepancy {
    /// Wigner `m¹ = +½` input.
    Eq5,
    /// Intrinsic `+s_p¹` input.
    Eq6,
}

impl Discrepancy {
    pub fn check_vnorm(self, vnorm: f64) -> Result<()> {
        let ok = match self {
            Discrepancy::Eq5 => vnorm > 0.0 && vnorm < 1.0 - LIGHT_CONE_GUARD,
            Discrepancy::Eq6 => vnorm > 0.0 && vnorm <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidVnorm { vnorm })
        }
    }

    /// Value at `(ṽ¹, ṽ³)` with `‖ṽ‖ = vnorm`, or `None` off the disk.
    pub fn value(self, vnorm: f64, v1: f64, v3: f64) -> Option<f64> {
        let r2 = v1 * v1 + v3 * v3;
        // Points on the rim up to rounding count as inside.
        let rim = vnorm * vnorm * (1.0 + RIM_SLACK);
        match self {
            Discrepancy::Eq5 => {
                if r2 > rim {
                    return None;
                }
                let v2 = (vnorm * vnorm - r2).max(0.0).sqrt();
                Velocity::new(v1, v2, v3).ok().map(|v| discrepancy_eq5(&v))
            }
            Discrepancy::Eq6 => {
                // eq6 ignores ṽ², so evaluate in the ṽ¹ṽ³ plane; this keeps
                // the ‖ṽ‖ = 1 map (open disk) representable.
                let inside = if vnorm < 1.0 { r2 <= rim } else { r2 < 1.0 };
                if !inside {
                    return None;
                }
                Velocity::new(v1, 0.0, v3).ok().map(|v| discrepancy_eq6(&v))
            }
        }
    }
}

/// eq5 or eq6 over `(ṽ¹, ṽ³) ∈ [−1, 1]²` at fixed `‖ṽ‖`.
pub fn map_fig34(formula: Discrepancy, vnorm: f64, resolution: usize) -> Result<ProbabilityGrid> {
    check_resolution(resolution)?;
    formula.check_vnorm(vnorm)?;
    let (id, name) = match formula {
        Discrepancy::Eq5 => (FormulaId::Eq5Map, "eq5_discrepancy"),
        Discrepancy::Eq6 => (FormulaId::Eq6Map, "eq6_discrepancy"),
    };
    let params = BTreeMap::from([("vnorm".to_owned(), vnorm)]);
    Ok(ProbabilityGrid::sample(
        id,
        GridAxis::new("v1", -1.0, 1.0, resolution),
        GridAxis::new("v3", -1.0, 1.0, resolution),
        name,
        params,
        move |v1, v3| formula.value(vnorm, v1, v3),
    ))
}

/// `prob_eq8 − prob_eq7` at `(ṽ¹, ṽ²)`; both are independent of `ṽ³`.
pub fn fig5_value(v1: f64, v2: f64) -> Option<f64> {
    let v = Velocity::new(v1, v2, 0.0).ok()?;
    Some(prob_eq8(&v).ok()? - prob_eq7(&v).ok()?)
}

/// eq8 − eq7 over `(ṽ¹, ṽ²) ∈ [−1, 1]²`, masked to the open unit disk
/// with the singular center removed.
pub fn map_fig5(resolution: usize) -> Result<ProbabilityGrid> {
    check_resolution(resolution)?;
    let params = BTreeMap::from([("v3".to_owned(), 0.0)]);
    Ok(ProbabilityGrid::sample(
        FormulaId::Eq78DiffMap,
        GridAxis::new("v1", -1.0, 1.0, resolution),
        GridAxis::new("v2", -1.0, 1.0, resolution),
        "eq8_minus_eq7",
        params,
        fig5_value,
    ))
}
