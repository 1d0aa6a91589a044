//! Two-dimensional spin fibers: states and Hermitian operators.
//!
//! Components are always stored in the Wigner `m³` basis with row/column
//! order `(m³ = +½, m³ = −½)`.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::kinematics::Momentum;

pub type Amplitudes = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

/// Normalization tolerance for [`SpinState`].
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Largest Hermiticity defect accepted by [`HermitianOp2::new`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Physical unit carried by an operator's eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Unit {
    /// Angular momentum, `ħ`.
    Hbar,
    /// Mass moment, `ħ/c`.
    HbarPerC,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::Hbar => f.write_str("hbar"),
            Unit::HbarPerC => f.write_str("hbar/c"),
        }
    }
}

/// A 2×2 Hermitian observable on one momentum fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp2 {
    entries: Mat2,
    unit: Unit,
}

impl HermitianOp2 {
    /// Wraps `entries`, rejecting matrices whose Hermiticity defect exceeds
    /// [`HERMITIAN_TOLERANCE`]. Accepted matrices are symmetrized.
    pub fn new(entries: Mat2, unit: Unit) -> Result<Self> {
        let deviation = hermiticity_defect(&entries);
        if !deviation.is_finite() || deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let diag0 = entries[0][0].re;
        let diag1 = entries[1][1].re;
        let off = (entries[0][1] + entries[1][0].conj()) * 0.5;
        Ok(Self::from_real_parts(diag0, diag1, off, unit))
    }

    /// `[[d0, off], [conj(off), d1]]`, Hermitian by construction.
    pub fn from_real_parts(d0: f64, d1: f64, off: Complex64, unit: Unit) -> Self {
        Self {
            entries: [
                [Complex64::new(d0, 0.0), off],
                [off.conj(), Complex64::new(d1, 0.0)],
            ],
            unit,
        }
    }

    /// `c · σ / 2` for a real 3-vector `c`.
    pub fn from_bloch(c: [f64; 3], unit: Unit) -> Self {
        Self::from_real_parts(
            0.5 * c[2],
            -0.5 * c[2],
            Complex64::new(0.5 * c[0], -0.5 * c[1]),
            unit,
        )
    }

    pub fn zero(unit: Unit) -> Self {
        Self::from_real_parts(0.0, 0.0, ZERO, unit)
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    pub fn det(&self) -> f64 {
        self.entries[0][0].re * self.entries[1][1].re - self.entries[0][1].norm_sqr()
    }

    pub fn apply(&self, x: &Amplitudes) -> Amplitudes {
        mat_vec(&self.entries, x)
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &HermitianOp2) -> f64 {
        let mut d = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        d
    }
}

fn hermiticity_defect(m: &Mat2) -> f64 {
    let off = (m[1][0] - m[0][1].conj()).norm();
    off.max(m[0][0].im.abs()).max(m[1][1].im.abs())
}

pub fn mat_vec(m: &Mat2, x: &Amplitudes) -> Amplitudes {
    [
        m[0][0] * x[0] + m[0][1] * x[1],
        m[1][0] * x[0] + m[1][1] * x[1],
    ]
}

/// `⟨a|b⟩`, antilinear in the first argument.
pub fn inner(a: &Amplitudes, b: &Amplitudes) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn norm(a: &Amplitudes) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}

/// A normalized spin state on the fiber over `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    base: Momentum,
    amps: Amplitudes,
}

impl SpinState {
    /// Builds a state from amplitudes already normalized within
    /// [`NORM_TOLERANCE`].
    pub fn new(base: Momentum, up: Complex64, down: Complex64) -> Result<Self> {
        let n = norm(&[up, down]);
        if !n.is_finite() || (n * n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Usage(format!(
                "spin state amplitudes have squared norm {}, expected 1",
                n * n
            )));
        }
        Ok(Self {
            base,
            amps: [up, down],
        })
    }

    /// Builds a state by rescaling arbitrary nonzero amplitudes.
    pub fn normalized(base: Momentum, up: Complex64, down: Complex64) -> Result<Self> {
        let n = norm(&[up, down]);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            base,
            amps: [up / n, down / n],
        })
    }

    pub(crate) fn from_amplitudes_unchecked(base: Momentum, amps: Amplitudes) -> Self {
        Self { base, amps }
    }

    pub fn base(&self) -> &Momentum {
        &self.base
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn up(&self) -> Complex64 {
        self.amps[0]
    }

    pub fn down(&self) -> Complex64 {
        self.amps[1]
    }

    pub fn inner(&self, other: &SpinState) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    /// `min_θ ‖self − e^{iθ}·other‖`, the distance between rays.
    pub fn phase_distance(&self, other: &SpinState) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        norm(&[
            self.amps[0] - phase * other.amps[0],
            self.amps[1] - phase * other.amps[1],
        ])
    }
}
