//! Independent verification path: exact diagonalization of 2×2 Hermitian
//! matrices and Born probabilities computed from it.
//!
//! Nothing in here knows about the closed-form spectra or eigenstates; it
//! only consumes [`HermitianOp2`] and [`SpinState`] values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{inner, Amplitudes, HermitianOp2, SpinState, HERMITIAN_TOLERANCE};
use crate::spin_ops::Sign;

/// Eigenvalue gap below which the spectrum is treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Ascending eigenvalues with matching orthonormal eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem2 {
    pub values: [f64; 2],
    pub vectors: [Amplitudes; 2],
    pub degenerate: bool,
}

impl EigenSystem2 {
    /// Index into `values`/`vectors` for a branch (`−1` → lower).
    pub fn branch_index(branch: Sign) -> usize {
        match branch {
            Sign::Minus => 0,
            Sign::Plus => 1,
        }
    }
}

/// Diagonalizes a 2×2 Hermitian matrix in closed form.
///
/// `λ = (tr ± √(tr² − 4det))/2`, evaluated as `tr/2 ± hypot((a−d)/2, |b|)`.
/// Each eigenvector gets the phase that makes its largest-magnitude
/// component real and nonnegative.
pub fn eigh2(op: &HermitianOp2) -> Result<EigenSystem2> {
    let m = op.entries();
    let defect = (m[1][0] - m[0][1].conj())
        .norm()
        .max(m[0][0].im.abs())
        .max(m[1][1].im.abs());
    if !defect.is_finite() || defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];

    let mean = 0.5 * (a + d);
    // √(tr² − 4det)/2 = √(((a−d)/2)² + |b|²) ≥ 0; hypot cannot go negative.
    let radius = (0.5 * (a - d)).hypot(b.norm()).max(0.0);
    let values = [mean - radius, mean + radius];

    if values[1] - values[0] < DEGENERACY_TOLERANCE {
        return Ok(EigenSystem2 {
            values,
            vectors: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
            degenerate: true,
        });
    }

    // Two null vectors of (A − λ₊): (b, λ₊ − a) and (λ₊ − d, b̄); take the
    // one with the larger norm.
    let lam = values[1];
    let u1 = [b, Complex64::new(lam - a, 0.0)];
    let u2 = [Complex64::new(lam - d, 0.0), b.conj()];
    let upper = if sq_norm(&u1) >= sq_norm(&u2) { u1 } else { u2 };
    let upper = fix_phase(normalize(upper));
    // The orthogonal complement spans the other eigenspace.
    let lower = fix_phase([-upper[1].conj(), upper[0].conj()]);

    Ok(EigenSystem2 {
        values,
        vectors: [lower, upper],
        degenerate: false,
    })
}

/// `|⟨v_branch|input⟩|²` with `v_branch` from [`eigh2`]. A degenerate
/// operator has a single eigenspace, so both branches return the full
/// projector weight.
pub fn oracle_probability(input: &SpinState, op: &HermitianOp2, branch: Sign) -> Result<f64> {
    let sys = eigh2(op)?;
    if sys.degenerate {
        return Ok(sys
            .vectors
            .iter()
            .map(|v| inner(v, input.amplitudes()).norm_sqr())
            .sum());
    }
    let v = &sys.vectors[EigenSystem2::branch_index(branch)];
    Ok(inner(v, input.amplitudes()).norm_sqr())
}

fn sq_norm(x: &Amplitudes) -> f64 {
    x[0].norm_sqr() + x[1].norm_sqr()
}

fn normalize(x: Amplitudes) -> Amplitudes {
    let n = sq_norm(&x).sqrt();
    [x[0] / n, x[1] / n]
}

fn fix_phase(x: Amplitudes) -> Amplitudes {
    let pivot = if x[0].norm() >= x[1].norm() {
        x[0]
    } else {
        x[1]
    };
    let n = pivot.norm();
    if n == 0.0 {
        return x;
    }
    let phase = pivot.conj() / n;
    let mut out = [x[0] * phase, x[1] * phase];
    // Pin the pivot to an exact real value.
    if x[0].norm() >= x[1].norm() {
        out[0] = Complex64::new(n, 0.0);
    } else {
        out[1] = Complex64::new(n, 0.0);
    }
    out
}
