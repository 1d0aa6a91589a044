//! Dimensionless kinematics: velocities in units of `c`, momenta in units
//! of `mc`, energies in units of `mc²`.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::spin_ops::Axis;

/// Velocities with `‖ṽ‖ ≥ 1 − LIGHT_CONE_GUARD` are rejected.
pub const LIGHT_CONE_GUARD: f64 = 1e-12;

/// Velocity `ṽ = v/c`, strictly inside the light cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Velocity([f64; 3]);

impl Velocity {
    pub fn new(v1: f64, v2: f64, v3: f64) -> Result<Self> {
        Self::from_array([v1, v2, v3])
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { what: "velocity" });
        }
        let norm = norm3(&v);
        if norm >= 1.0 - LIGHT_CONE_GUARD {
            return Err(Error::Superluminal { norm });
        }
        Ok(Self(v))
    }

    pub fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn v1(&self) -> f64 {
        self.0[0]
    }

    pub fn v2(&self) -> f64 {
        self.0[1]
    }

    pub fn v3(&self) -> f64 {
        self.0[2]
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.0)
    }

    pub fn norm_squared(&self) -> f64 {
        dot3(&self.0, &self.0)
    }

    /// `ρ̃_v = √((ṽ¹)² + (ṽ²)²)`, the speed transverse to the z-axis.
    pub fn rho(&self) -> f64 {
        self.0[0].hypot(self.0[1])
    }

    /// `γ⁻¹ = √(1 − ‖ṽ‖²)`.
    pub fn inverse_lorentz_factor(&self) -> f64 {
        (1.0 - self.norm_squared()).sqrt()
    }
}

impl fmt::Display for Velocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Momentum `p̃ = p/(mc)`: the base point of a spin fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Momentum([f64; 3]);

impl Momentum {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        Self::from_array([p1, p2, p3])
    }

    pub fn from_array(p: [f64; 3]) -> Result<Self> {
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { what: "momentum" });
        }
        Ok(Self(p))
    }

    pub fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn component(&self, axis: Axis) -> f64 {
        self.0[axis.index()]
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.0)
    }

    pub fn norm_squared(&self) -> f64 {
        dot3(&self.0, &self.0)
    }

    /// Squared norm of the components perpendicular to `axis`.
    pub fn transverse_norm_squared(&self, axis: Axis) -> f64 {
        let (j, k) = axis.complement();
        let (pj, pk) = (self.0[j.index()], self.0[k.index()]);
        pj * pj + pk * pk
    }

    pub fn transverse_norm(&self, axis: Axis) -> f64 {
        let (j, k) = axis.complement();
        self.0[j.index()].hypot(self.0[k.index()])
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// `γ = (1 − ‖ṽ‖²)^{-1/2}`.
pub fn lorentz_factor(v: &Velocity) -> f64 {
    1.0 / v.inverse_lorentz_factor()
}

/// `p̃ = γṽ`.
pub fn momentum_from_velocity(v: &Velocity) -> Momentum {
    let gamma = lorentz_factor(v);
    Momentum(v.0.map(|c| gamma * c))
}

/// `Ẽ_p = √(1 + ‖p̃‖²)`.
pub fn energy(p: &Momentum) -> f64 {
    (1.0 + p.norm_squared()).sqrt()
}

/// `ṽ = p̃/Ẽ_p`.
///
/// Always subluminal in exact arithmetic. For `‖p̃‖ ≳ 7·10⁵` the rounded
/// result can land inside the light-cone guard band; it is returned anyway
/// since it came from a valid momentum, not from user input.
pub fn velocity_from_momentum(p: &Momentum) -> Velocity {
    let e = energy(p);
    Velocity(p.0.map(|c| c / e))
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}
