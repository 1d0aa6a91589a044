//! Intrinsic relativistic spin observables for a massive spin-½ particle.
//!
//! The intrinsic spin tensor splits, for a laboratory observer, into an
//! angular-momentum part `Σ(v)` (selected by a magnetic field) and a
//! mass-momentum part `𝒱(v)` (selected by an electric field). On a fixed
//! momentum fiber both are 2×2 Hermitian operators acting on the Wigner
//! spin basis. This crate builds those operators, their closed-form spectra
//! and eigenstates, and the projective Stern-Gerlach probabilities that
//! compare Wigner-spin predictions with intrinsic-spin predictions.
//!
//! Every closed form is cross-checked against [`oracle`], an independent
//! 2×2 Hermitian eigensolver that knows nothing about the formulas.
//!
//! ```
//! use intrinsic_spin::kinematics::Velocity;
//! use intrinsic_spin::measurement::{discrepancy_eq6, Formula};
//! use intrinsic_spin::crosscheck::born_pipeline;
//!
//! let v = Velocity::new(0.3, 0.2, 0.4).unwrap();
//! let closed = discrepancy_eq6(&v);
//! let born = born_pipeline(Formula::Eq6, &v).unwrap();
//! assert!((closed - born).abs() < 1e-12);
//! ```

pub mod crosscheck;
pub mod error;
pub mod figures;
pub mod hilbert;
pub mod kinematics;
pub mod measurement;
pub mod oracle;
pub mod spin_ops;

pub use error::{Error, Result};
pub use hilbert::{HermitianOp2, SpinState, Unit};
pub use kinematics::{Momentum, Velocity};
pub use spin_ops::{Axis, EigenPair, Sign};
