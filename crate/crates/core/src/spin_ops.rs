//! Wigner spin, `Σ(v)` and `𝒱(v)` on a single momentum fiber.
//!
//! `Σ(v) = Ẽ_p S_⊥ + S_∥` is the angular-momentum part of the intrinsic spin
//! tensor seen by the laboratory observer; `𝒱(v) = p̃ × S` is its
//! mass-momentum part. Both are expressed in the Wigner `m³` basis.
//!
//! Closed-form spectra: `Σⁱ` has eigenvalues `±s_pⁱ` with
//! `s_pⁱ = ½√(1 + (p̃ʲ)² + (p̃ᵏ)²)`, and `𝒱ⁱ` has `±μ_pⁱ` with
//! `μ_pⁱ = ½√((p̃ʲ)² + (p̃ᵏ)²)`, where `(i, j, k)` is cyclic.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::hilbert::{Amplitudes, HermitianOp2, Mat2, SpinState, Unit};
use crate::kinematics::{energy, Momentum};

/// Transverse momenta below this norm take the parallel/degenerate branch,
/// where the eigenstate phase factors are 0/0.
pub const TRANSVERSE_TOLERANCE: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Laboratory axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Zero-based component index.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The cyclic complement `(j, k)` of this axis.
    pub fn complement(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn next(self) -> Axis {
        self.complement().0
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "1" => Ok(Axis::X),
            "y" | "2" => Ok(Axis::Y),
            "z" | "3" => Ok(Axis::Z),
            other => Err(Error::Usage(format!(
                "unknown axis '{other}', expected x, y or z"
            ))),
        }
    }
}

/// Branch selector `ε = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Eigenvalue (in units of the source operator) with its eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub unit: Unit,
    pub state: SpinState,
    /// Set when both eigenvalues coincide and `state` is a conventional
    /// choice inside the degenerate eigenspace.
    pub degenerate: bool,
}

/// Wigner spin component `Sⁱ = σⁱ/2` (unit `ħ`).
pub fn wigner_spin_op(axis: Axis) -> HermitianOp2 {
    let mut c = [0.0; 3];
    c[axis.index()] = 1.0;
    HermitianOp2::from_bloch(c, Unit::Hbar)
}

/// Unitary whose columns are the `m^axis = +½` and `m^axis = −½` kets in
/// `m³` components: `m¹ → (1, ±1)/√2`, `m² → (1, ±i)/√2`.
pub fn basis_change(axis: Axis) -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match axis {
        Axis::Z => [[ONE, ZERO], [ZERO, ONE]],
        Axis::X => [[ONE * h, ONE * h], [ONE * h, -ONE * h]],
        Axis::Y => [[ONE * h, ONE * h], [I * h, -I * h]],
    }
}

/// The Wigner basis ket `|p̃, m^axis = m/2⟩_B` in `m³` components.
pub fn basis_ket(axis: Axis, m: Sign) -> Amplitudes {
    let u = basis_change(axis);
    let col = match m {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    [u[0][col], u[1][col]]
}

/// `Σⁱ(v) = Ẽ_p (S_⊥)ᵢ + (S_∥)ᵢ` on the fiber at `p`.
pub fn sigma_op(p: &Momentum, axis: Axis) -> HermitianOp2 {
    // (Ẽ−1)/‖p̃‖² = 1/(Ẽ+1), so the coefficients stay regular at rest.
    let e = energy(p);
    let comps = p.components();
    let i = axis.index();
    let scale = comps[i] / (e + 1.0);
    let mut c = comps.map(|pk| -scale * pk);
    c[i] += e;
    HermitianOp2::from_bloch(c, Unit::Hbar)
}

/// `𝒱ⁱ(v) = (p̃ × S)ᵢ` on the fiber at `p` (unit `ħ/c`).
pub fn v_op(p: &Momentum, axis: Axis) -> HermitianOp2 {
    let (j, k) = axis.complement();
    let mut c = [0.0; 3];
    c[j.index()] = -p.component(k);
    c[k.index()] = p.component(j);
    HermitianOp2::from_bloch(c, Unit::HbarPerC)
}

/// `s_pⁱ = ½√(1 + (p̃ʲ)² + (p̃ᵏ)²)`.
pub fn sigma_eigenvalue(p: &Momentum, axis: Axis) -> f64 {
    0.5 * (1.0 + p.transverse_norm_squared(axis)).sqrt()
}

/// `μ_pⁱ = ½√((p̃ʲ)² + (p̃ᵏ)²)`.
pub fn v_eigenvalue(p: &Momentum, axis: Axis) -> f64 {
    0.5 * p.transverse_norm(axis)
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `e^{iφ_pⁱ}` for the `Σⁱ` eigenstates; `1` when the transverse momentum
/// vanishes, where the accompanying amplitude is zero anyway.
fn sigma_phase(p: &Momentum, axis: Axis) -> Complex64 {
    let rho = p.transverse_norm(axis);
    if rho < TRANSVERSE_TOLERANCE {
        return ONE;
    }
    let [p1, p2, p3] = p.components();
    let z = match axis {
        Axis::Z => -sgn(p3) * Complex64::new(p1, p2),
        Axis::Y => -sgn(p2) * Complex64::new(p3, p1),
        Axis::X => -sgn(p1) * Complex64::new(p3, -p2),
    };
    z / rho
}

/// `e^{iϕ_pⁱ}` for the `𝒱ⁱ` eigenstates. Caller guarantees a nonzero
/// transverse momentum.
fn v_phase(p: &Momentum, axis: Axis, rho: f64) -> Complex64 {
    let [p1, p2, p3] = p.components();
    let z = match axis {
        Axis::Z => -Complex64::new(p2, p1),
        Axis::Y => -Complex64::new(p1, p3),
        Axis::X => -Complex64::new(-p2, p3),
    };
    z / rho
}

/// `e^{iεθ}` given `e^{iθ}`.
fn phase_power(phase: Complex64, sign: Sign) -> Complex64 {
    match sign {
        Sign::Plus => phase,
        Sign::Minus => phase.conj(),
    }
}

fn combine(a: Complex64, ket_a: Amplitudes, b: Complex64, ket_b: Amplitudes) -> Amplitudes {
    [a * ket_a[0] + b * ket_b[0], a * ket_a[1] + b * ket_b[1]]
}

fn renormalize(x: Amplitudes) -> Amplitudes {
    let n = crate::hilbert::norm(&x);
    [x[0] / n, x[1] / n]
}

/// Closed-form eigenpair `(ε s_pⁱ, |p̃, ε s_pⁱ⟩_Σ)`:
///
/// `|p̃, ε s⟩_Σ = a⁺ |mⁱ = ε/2⟩_B + ε e^{iεφ} a⁻ |mⁱ = −ε/2⟩_B` with
/// `a^ξ = ½√((Ẽ_p + 2ξs)(2s + ξ) / (s(1 + Ẽ_p)))`.
///
/// The `mⁱ = ε/2` amplitude is real and nonnegative.
pub fn sigma_eigenstate(p: &Momentum, axis: Axis, sign: Sign) -> EigenPair {
    let s = sigma_eigenvalue(p, axis);
    let e = energy(p);
    let along = p.component(axis);
    let rho2 = p.transverse_norm_squared(axis);
    // Ẽ − 2s = (p̃ⁱ)²/(Ẽ + 2s) and 2s − 1 = ρ²/(2s + 1), both free of cancellation.
    let e_minus_2s = along * along / (e + 2.0 * s);
    let two_s_minus_1 = rho2 / (2.0 * s + 1.0);
    let denom = s * (1.0 + e);
    let a_plus = 0.5 * ((e + 2.0 * s) * (2.0 * s + 1.0) / denom).sqrt();
    let a_minus = 0.5 * (e_minus_2s * two_s_minus_1 / denom).sqrt();

    let eps = sign.value();
    let phase = phase_power(sigma_phase(p, axis), sign);
    let amps = combine(
        Complex64::new(a_plus, 0.0),
        basis_ket(axis, sign),
        eps * phase * a_minus,
        basis_ket(axis, sign.flip()),
    );
    EigenPair {
        value: eps * s,
        unit: Unit::Hbar,
        state: SpinState::from_amplitudes_unchecked(*p, renormalize(amps)),
        degenerate: false,
    }
}

/// Closed-form eigenpair `(ε μ_pⁱ, |p̃, ε μ⟩_𝒱)`:
///
/// `|p̃, ε μ⟩_𝒱 = (|mⁱ = −ε/2⟩_B + ε e^{iεϕ} |mⁱ = ε/2⟩_B)/√2`.
///
/// With no transverse momentum `𝒱ⁱ = 0`; the pair is then
/// `(0, (|mⁱ = +½⟩_B ± |mⁱ = −½⟩_B)/√2)` flagged as degenerate.
pub fn v_eigenstate(p: &Momentum, axis: Axis, sign: Sign) -> EigenPair {
    let rho = p.transverse_norm(axis);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let eps = sign.value();
    if rho < TRANSVERSE_TOLERANCE {
        let amps = combine(
            Complex64::new(h, 0.0),
            basis_ket(axis, Sign::Plus),
            Complex64::new(eps * h, 0.0),
            basis_ket(axis, Sign::Minus),
        );
        return EigenPair {
            value: 0.0,
            unit: Unit::HbarPerC,
            state: SpinState::from_amplitudes_unchecked(*p, amps),
            degenerate: true,
        };
    }
    let phase = phase_power(v_phase(p, axis, rho), sign);
    let amps = combine(
        Complex64::new(h, 0.0),
        basis_ket(axis, sign.flip()),
        eps * phase * h,
        basis_ket(axis, sign),
    );
    EigenPair {
        value: eps * 0.5 * rho,
        unit: Unit::HbarPerC,
        state: SpinState::from_amplitudes_unchecked(*p, amps),
        degenerate: false,
    }
}

/// `‖A·x − λx‖` for an eigenpair of `op`.
pub fn residual(op: &HermitianOp2, pair: &EigenPair) -> f64 {
    let x = pair.state.amplitudes();
    let ax = op.apply(x);
    crate::hilbert::norm(&[ax[0] - pair.value * x[0], ax[1] - pair.value * x[1]])
}
