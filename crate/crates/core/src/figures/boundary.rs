//! Significance boundaries of eq4: the velocities where the probability
//! of the negative `Σ³` outcome equals a window `Δ`.

use rayon::prelude::*;
use serde::Serialize;

use super::check_deltas;
use crate::error::{Error, Result};
use crate::kinematics::Velocity;
use crate::measurement::prob_eq4_velocity;

/// Presample count along `ρ̃_v` used to bracket roots.
pub const PRESAMPLES: usize = 512;
/// The presample stops this fraction short of the light cone.
const EDGE_MARGIN: f64 = 1e-9;
/// Bisection stops once the bracket is narrower than this, or cannot shrink.
const RHO_TOLERANCE: f64 = 1e-12;
/// A root is kept only if eq4 reproduces `Δ` this closely.
pub const ROOT_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub v3_abs: f64,
    pub vnorm: f64,
    pub rho: f64,
}

impl BoundaryPoint {
    /// The boundary velocity `(ρ̃_v, 0, |ṽ³|)`.
    pub fn velocity(&self) -> Velocity {
        Velocity::new(self.rho, 0.0, self.v3_abs).expect("boundary point inside light cone")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub delta: f64,
    pub samples: Vec<BoundaryPoint>,
    /// `NaN` for an empty curve.
    pub min_vnorm: f64,
    /// `|ṽ³|` at which `min_vnorm` is reached.
    pub min_vnorm_at_v3: f64,
    /// `NaN` for an empty curve.
    pub min_v3: f64,
}

impl BoundaryCurve {
    fn from_samples(delta: f64, samples: Vec<BoundaryPoint>) -> Self {
        let min_v3 = samples.iter().map(|s| s.v3_abs).fold(f64::NAN, f64::min);
        let best = samples
            .iter()
            .min_by(|a, b| a.vnorm.total_cmp(&b.vnorm))
            .copied();
        Self {
            delta,
            min_vnorm: best.map_or(f64::NAN, |b| b.vnorm),
            min_vnorm_at_v3: best.map_or(f64::NAN, |b| b.v3_abs),
            min_v3,
            samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn eq4_at(v3: f64, rho: f64) -> Option<f64> {
    Velocity::new(rho, 0.0, v3)
        .ok()
        .map(|v| prob_eq4_velocity(&v))
}

/// Bisection on a sign-changing bracket, run until the bracket stops
/// shrinking. Returns the endpoint with the smaller residual.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if hi - lo < RHO_TOLERANCE && f_lo.abs().min(f_hi.abs()) < 1e-15 {
            break;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// All `ρ̃_v ∈ (0, √(1 − ṽ³²))` where `prob_eq4 = delta` at fixed `|ṽ³|`.
/// Sign changes are bracketed on a uniform presample, so several roots are
/// found if eq4 is not monotone along the scan.
pub fn roots_at(v3_abs: f64, delta: f64) -> Vec<f64> {
    let rho_max = (1.0 - v3_abs * v3_abs).sqrt() * (1.0 - EDGE_MARGIN);
    let g = |rho: f64| eq4_at(v3_abs, rho).map_or(f64::NAN, |p| p - delta);
    let grid: Vec<(f64, f64)> = (0..PRESAMPLES)
        .map(|m| {
            let rho = rho_max * m as f64 / (PRESAMPLES - 1) as f64;
            (rho, g(rho))
        })
        .collect();

    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa.is_nan() || fb.is_nan() {
            continue;
        }
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(g, a, b));
        }
    }
    roots
        .into_iter()
        .filter(|&rho| rho > 0.0 && g(rho).abs() < ROOT_RESIDUAL)
        .collect()
}

/// Boundary curve `‖ṽ‖(|ṽ³|)` for one `Δ` at abscissas
/// `|ṽ³| = k/resolution`, `k = 1 … resolution − 1`.
pub fn boundary_curve(delta: f64, resolution: usize) -> Result<BoundaryCurve> {
    check_deltas(&[delta])?;
    if resolution < 2 {
        return Err(Error::InvalidResolution { resolution });
    }
    let samples: Vec<BoundaryPoint> = (1..resolution)
        .into_par_iter()
        .flat_map_iter(|k| {
            let v3_abs = k as f64 / resolution as f64;
            roots_at(v3_abs, delta)
                .into_iter()
                .map(move |rho| BoundaryPoint {
                    v3_abs,
                    vnorm: v3_abs.hypot(rho),
                    rho,
                })
        })
        .collect();
    Ok(BoundaryCurve::from_samples(delta, samples))
}

pub fn curve_fig2(deltas: &[f64], resolution: usize) -> Result<Vec<BoundaryCurve>> {
    check_deltas(deltas)?;
    deltas
        .iter()
        .map(|&d| boundary_curve(d, resolution))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::DEFAULT_DELTAS;

    #[test]
    fn samples_reproduce_delta() {
        for curve in curve_fig2(&DEFAULT_DELTAS, 128).unwrap() {
            assert!(!curve.is_empty(), "delta {}", curve.delta);
            for s in &curve.samples {
                let p = prob_eq4_velocity(&s.velocity());
                assert!((p - curve.delta).abs() < ROOT_RESIDUAL);
                // Rebuilt from (|ṽ³|, ‖ṽ‖) alone.
                let rho = (s.vnorm * s.vnorm - s.v3_abs * s.v3_abs).sqrt();
                let v = Velocity::new(rho, 0.0, s.v3_abs).unwrap();
                assert!((prob_eq4_velocity(&v) - curve.delta).abs() < ROOT_RESIDUAL);
            }
        }
    }

    #[test]
    fn minimum_norm_is_not_at_minimum_v3() {
        for curve in curve_fig2(&DEFAULT_DELTAS, 256).unwrap() {
            assert!(curve.min_v3 > 0.0);
            assert!(curve.min_vnorm_at_v3 > curve.min_v3);
            assert!(curve.min_vnorm < 1.0);
        }
    }

    #[test]
    fn larger_windows_need_larger_v3() {
        let curves = curve_fig2(&DEFAULT_DELTAS, 256).unwrap();
        for w in curves.windows(2) {
            assert!(w[1].min_v3 >= w[0].min_v3);
            assert!(w[1].min_vnorm > w[0].min_vnorm);
        }
    }

    #[test]
    fn no_roots_below_threshold() {
        // At |ṽ³| = 0.01 eq4 stays far below 0.05 everywhere inside the cone.
        assert!(roots_at(0.01, 0.05).is_empty());
    }

    #[test]
    fn bisect_finds_simple_root() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_delta() {
        assert!(curve_fig2(&[0.01, 0.3], 16).is_err());
        assert!(boundary_curve(0.01, 1).is_err());
    }
}
