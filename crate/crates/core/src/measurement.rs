//! Projective relativistic Stern-Gerlach measurements.
//!
//! A laboratory magnetic field along axis `i` selects `Σⁱ(v)`; an electric
//! field along `i` selects `𝒱ⁱ(v)`. The coupling constant never matters:
//! outcome probabilities depend only on the selected observable's
//! eigenbasis, so measurement here is eigenstate filtering.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hilbert::{inner, SpinState, Unit};
use crate::kinematics::{momentum_from_velocity, Momentum, Velocity};
use crate::spin_ops::{
    basis_ket, sigma_eigenstate, sigma_eigenvalue, v_eigenstate, Axis, EigenPair, Sign,
};

/// `ρ̃_v` below this makes the `𝒱³` eigenbasis direction undefined.
pub const RHO_TOLERANCE: f64 = 1e-12;

/// Momenta closer than this (relative to `1 + ‖p̃‖`) share a fiber.
const FIBER_TOLERANCE: f64 = 1e-12;

/// Which part of the intrinsic spin tensor the field selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Observable {
    /// `Σⁱ(v)`, selected by a magnetic field.
    Sigma,
    /// `𝒱ⁱ(v)`, selected by an electric field.
    V,
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sigma" | "s" => Ok(Observable::Sigma),
            "v" => Ok(Observable::V),
            other => Err(Error::Usage(format!(
                "unknown observable '{other}', expected sigma or v"
            ))),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Observable::Sigma => "sigma",
            Observable::V => "v",
        })
    }
}

/// Prepared input states, both momentum eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// `|p̃, m^axis = +½⟩_B`: spin up in the particle's own rest frame.
    WignerUp(Axis),
    /// `|p̃, +s_p^axis⟩_Σ`: filtered by a prior Stern-Gerlach stage along `axis`.
    IntrinsicUp(Axis),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub eigenvalue: f64,
    pub unit: Unit,
    pub probability: f64,
    pub post_state: SpinState,
}

/// Both outcomes of one projective measurement, `+` branch first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub outcomes: [MeasurementOutcome; 2],
    /// The observable vanished on this fiber; outcome labels follow the
    /// `(|+½⟩ ± |−½⟩)/√2` convention.
    pub degenerate: bool,
}

impl Measurement {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

pub fn prepare(kind: InputKind, p: &Momentum) -> SpinState {
    match kind {
        InputKind::WignerUp(axis) => {
            SpinState::from_amplitudes_unchecked(*p, basis_ket(axis, Sign::Plus))
        }
        InputKind::IntrinsicUp(axis) => sigma_eigenstate(p, axis, Sign::Plus).state,
    }
}

/// `|⟨eigenstate|state⟩|²`.
pub fn born_probability(state: &SpinState, eigenstate: &SpinState) -> Result<f64> {
    let a = state.base().components();
    let b = eigenstate.base().components();
    let scale = 1.0 + state.base().norm().max(eigenstate.base().norm());
    if a.iter()
        .zip(b.iter())
        .any(|(x, y)| (x - y).abs() > FIBER_TOLERANCE * scale)
    {
        return Err(Error::FiberMismatch);
    }
    Ok(eigenstate.inner(state).norm_sqr().min(1.0))
}

pub fn eigenpair(observable: Observable, p: &Momentum, axis: Axis, sign: Sign) -> EigenPair {
    match observable {
        Observable::Sigma => sigma_eigenstate(p, axis, sign),
        Observable::V => v_eigenstate(p, axis, sign),
    }
}

pub fn measure(state: &SpinState, observable: Observable, axis: Axis) -> Measurement {
    let p = state.base();
    let outcome = |sign: Sign| {
        let pair = eigenpair(observable, p, axis, sign);
        let probability = if pair.degenerate {
            // (|+⟩ ± |−⟩)/√2 overlaps as |⟨+|ψ⟩ ± ⟨−|ψ⟩|²/2, which keeps an
            // exact ½ for basis inputs.
            let amps = state.amplitudes();
            let up = inner(&basis_ket(axis, Sign::Plus), amps);
            let down = inner(&basis_ket(axis, Sign::Minus), amps);
            0.5 * (up + sign.value() * down).norm_sqr()
        } else {
            pair.state.inner(state).norm_sqr()
        };
        MeasurementOutcome {
            eigenvalue: pair.value,
            unit: pair.unit,
            probability: probability.min(1.0),
            post_state: pair.state,
        }
    };
    let plus = eigenpair(observable, p, axis, Sign::Plus);
    Measurement {
        outcomes: [outcome(Sign::Plus), outcome(Sign::Minus)],
        degenerate: plus.degenerate,
    }
}

/// Probability of `−s_p³` when `Σ³` is measured on `|p̃, m³ = +½⟩_B`:
///
/// `𝒫 = ¼ (Ẽ_p − 2s_p³)(2s_p³ − 1) / (s_p³ (1 + Ẽ_p))`.
pub fn prob_eq4(p: &Momentum) -> f64 {
    let s = sigma_eigenvalue(p, Axis::Z);
    let e = crate::kinematics::energy(p);
    // Both factors are ≥ 0 exactly; only rounding can push them below.
    let upper = (e - 2.0 * s).max(0.0);
    let lower = (2.0 * s - 1.0).max(0.0);
    0.25 * upper * lower / (s * (1.0 + e))
}

/// [`prob_eq4`] at `p̃ = γṽ`.
pub fn prob_eq4_velocity(v: &Velocity) -> f64 {
    prob_eq4(&momentum_from_velocity(v))
}

/// `d = 𝒫(+s_p³) − ½` for input `|p̃, m¹ = +½⟩_B` measured along `Σ³`:
///
/// `d = −½ ṽ³ṽ¹ / ((γ⁻¹ + 1) √(1 − (ṽ³)²))`.
pub fn discrepancy_eq5(v: &Velocity) -> f64 {
    let (v1, v3) = (v.v1(), v.v3());
    -0.5 * v3 * v1 / ((v.inverse_lorentz_factor() + 1.0) * (1.0 - v3 * v3).sqrt())
}

/// `d = 𝒫(+s_p³) − ½` for input `|p̃, +s_p¹⟩_Σ` measured along `Σ³`:
///
/// `d = −½ ṽ³ṽ¹ / (√(1 − (ṽ¹)²) √(1 − (ṽ³)²))`.
pub fn discrepancy_eq6(v: &Velocity) -> f64 {
    let (v1, v3) = (v.v1(), v.v3());
    -0.5 * v3 * v1 / ((1.0 - v1 * v1).sqrt() * (1.0 - v3 * v3).sqrt())
}

fn transverse_speed(v: &Velocity) -> Result<f64> {
    let rho = v.rho();
    if rho <= RHO_TOLERANCE {
        return Err(Error::UndefinedDirection { rho });
    }
    Ok(rho)
}

/// Probability of `+μ_p³` when `𝒱³` is measured on `|p̃, m¹ = +½⟩_B`:
/// `𝒫 = ½ (1 − ṽ²/ρ̃_v)`.
pub fn prob_eq7(v: &Velocity) -> Result<f64> {
    let rho = transverse_speed(v)?;
    Ok(0.5 * (1.0 - v.v2() / rho))
}

/// Probability of `+μ_p³` when `𝒱³` is measured on `|p̃, +s_p¹⟩_Σ`:
/// `𝒫 = ½ (1 − ṽ²/(ρ̃_v √(1 − (ṽ¹)²)))`.
pub fn prob_eq8(v: &Velocity) -> Result<f64> {
    let rho = transverse_speed(v)?;
    let v1 = v.v1();
    let value = 0.5 * (1.0 - v.v2() / (rho * (1.0 - v1 * v1).sqrt()));
    if !(-1e-12..=1.0 + 1e-12).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// The five closed forms, all parameterized by velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formula {
    Eq4,
    Eq5,
    Eq6,
    Eq7,
    Eq8,
}

impl Formula {
    pub const ALL: [Formula; 5] = [
        Formula::Eq4,
        Formula::Eq5,
        Formula::Eq6,
        Formula::Eq7,
        Formula::Eq8,
    ];

    /// Evaluates the closed form. eq5/eq6 return discrepancies `𝒫 − ½`,
    /// the others return probabilities.
    pub fn closed_form(self, v: &Velocity) -> Result<f64> {
        match self {
            Formula::Eq4 => Ok(prob_eq4_velocity(v)),
            Formula::Eq5 => Ok(discrepancy_eq5(v)),
            Formula::Eq6 => Ok(discrepancy_eq6(v)),
            Formula::Eq7 => prob_eq7(v),
            Formula::Eq8 => prob_eq8(v),
        }
    }

    /// Offset subtracted from a raw Born probability to get this formula's
    /// quantity.
    pub fn baseline(self) -> f64 {
        match self {
            Formula::Eq5 | Formula::Eq6 => 0.5,
            _ => 0.0,
        }
    }

    /// Prepared input state.
    pub fn input(self) -> InputKind {
        match self {
            Formula::Eq4 => InputKind::WignerUp(Axis::Z),
            Formula::Eq5 | Formula::Eq7 => InputKind::WignerUp(Axis::X),
            Formula::Eq6 | Formula::Eq8 => InputKind::IntrinsicUp(Axis::X),
        }
    }

    /// Measured observable (always along the laboratory z-axis) and the
    /// outcome branch whose probability the formula reports.
    pub fn measured(self) -> (Observable, Sign) {
        match self {
            Formula::Eq4 => (Observable::Sigma, Sign::Minus),
            Formula::Eq5 | Formula::Eq6 => (Observable::Sigma, Sign::Plus),
            Formula::Eq7 | Formula::Eq8 => (Observable::V, Sign::Plus),
        }
    }

    /// eq7/eq8 are undefined when `ρ̃_v` vanishes.
    pub fn needs_transverse_velocity(self) -> bool {
        matches!(self, Formula::Eq7 | Formula::Eq8)
    }

    pub fn name(self) -> &'static str {
        match self {
            Formula::Eq4 => "eq4",
            Formula::Eq5 => "eq5",
            Formula::Eq6 => "eq6",
            Formula::Eq7 => "eq7",
            Formula::Eq8 => "eq8",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown formula '{s}', expected eq4, eq5, eq6, eq7 or eq8"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn v(a: f64, b: f64, c: f64) -> Velocity {
        Velocity::new(a, b, c).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn born_probability_examples() {
        let base = Momentum::zero();
        let up = SpinState::new(base, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let down = SpinState::new(base, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus_x = SpinState::new(base, c(h, 0.0), c(h, 0.0)).unwrap();
        assert_eq!(born_probability(&up, &up).unwrap(), 1.0);
        assert_eq!(born_probability(&up, &down).unwrap(), 0.0);
        assert!((born_probability(&up, &plus_x).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_probability_rejects_other_fibers() {
        let a = prepare(InputKind::WignerUp(Axis::Z), &Momentum::zero());
        let b = prepare(
            InputKind::WignerUp(Axis::Z),
            &Momentum::new(0.0, 0.0, 1.0).unwrap(),
        );
        assert!(matches!(
            born_probability(&a, &b),
            Err(Error::FiberMismatch)
        ));
    }

    #[test]
    fn measure_examples() {
        let rest = prepare(InputKind::WignerUp(Axis::Z), &Momentum::zero());
        let m = measure(&rest, Observable::Sigma, Axis::Z);
        assert_eq!(m.outcomes[0].eigenvalue, 0.5);
        assert_eq!(m.outcomes[0].probability, 1.0);
        assert_eq!(m.outcomes[1].eigenvalue, -0.5);
        assert_eq!(m.outcomes[1].probability, 0.0);
        assert!(!m.degenerate);

        let p = Momentum::new(1.0, 1.0, 1.0).unwrap();
        let m = measure(
            &prepare(InputKind::WignerUp(Axis::Z), &p),
            Observable::Sigma,
            Axis::Z,
        );
        assert!((m.outcomes[1].probability - prob_eq4(&p)).abs() < 1e-12);
        assert!((m.total_probability() - 1.0).abs() < 1e-12);

        let p = Momentum::new(0.0, 0.0, 5.0).unwrap();
        let m = measure(
            &prepare(InputKind::WignerUp(Axis::Z), &p),
            Observable::V,
            Axis::Z,
        );
        assert!(m.degenerate);
        assert_eq!(m.outcomes[0].eigenvalue, 0.0);
        assert_eq!(m.outcomes[1].eigenvalue, 0.0);
        assert_eq!(m.outcomes[0].probability, 0.5);
        assert_eq!(m.outcomes[1].probability, 0.5);
        assert_eq!(m.outcomes[0].unit, Unit::HbarPerC);
    }

    #[test]
    fn prob_eq4_examples() {
        assert_eq!(prob_eq4(&Momentum::zero()), 0.0);
        for pz in [-4.0, 0.3, 12.0] {
            assert_eq!(prob_eq4(&Momentum::new(0.0, 0.0, pz).unwrap()), 0.0);
        }
        // ¼(2−√3)(√3−1)/((√3/2)·3)
        let s3 = 3f64.sqrt();
        let expected = 0.25 * (2.0 - s3) * (s3 - 1.0) / (0.5 * s3 * 3.0);
        let got = prob_eq4(&Momentum::new(1.0, 1.0, 1.0).unwrap());
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.018_875).abs() < 1e-6);
    }

    #[test]
    fn discrepancy_eq5_examples() {
        assert_eq!(discrepancy_eq5(&v(0.5, 0.0, 0.0)), 0.0);
        let a = discrepancy_eq5(&v(0.2, 0.3, 0.4));
        let b = discrepancy_eq5(&v(0.2, 0.3, -0.4));
        assert_eq!(a, -b);
        // γ⁻¹ = 0.6 at ‖ṽ‖ = 0.8: −½·0.3174/(1.6·0.8)
        let vel = v(0.529, 0.0, 0.6);
        let inv_gamma = vel.inverse_lorentz_factor();
        let expected = -0.5 * 0.6 * 0.529 / ((inv_gamma + 1.0) * 0.8);
        assert!((discrepancy_eq5(&vel) - expected).abs() < 1e-15);
        assert!((discrepancy_eq5(&vel) + 0.124).abs() < 1e-3);
    }

    #[test]
    fn discrepancy_eq6_examples() {
        assert_eq!(discrepancy_eq6(&v(0.0, 0.9, 0.0)), 0.0);
        let x = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
        let d = discrepancy_eq6(&v(x, 0.0, x));
        assert!((d - (-0.5 * 0.125 / 0.875)).abs() < 1e-15);
        assert!((d + 0.0714).abs() < 1e-4);
        // Independent of ṽ².
        assert_eq!(
            discrepancy_eq6(&v(0.3, 0.0, 0.4)),
            discrepancy_eq6(&v(0.3, 0.7, 0.4))
        );
    }

    #[test]
    fn prob_eq7_examples() {
        assert_eq!(prob_eq7(&v(0.5, 0.0, 0.3)).unwrap(), 0.5);
        assert_eq!(prob_eq7(&v(0.0, 0.5, 0.0)).unwrap(), 0.0);
        assert!((prob_eq7(&v(0.3, 0.4, 0.2)).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(
            prob_eq7(&v(0.0, 0.0, 0.5)),
            Err(Error::UndefinedDirection { .. })
        ));
    }

    #[test]
    fn prob_eq8_examples() {
        assert_eq!(prob_eq8(&v(0.5, 0.0, 0.3)).unwrap(), 0.5);
        assert_eq!(prob_eq8(&v(0.0, 0.5, 0.1)).unwrap(), 0.0);
        let expected = 0.5 * (1.0 - 0.8 / 0.91f64.sqrt());
        assert!((prob_eq8(&v(0.3, 0.4, 0.0)).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.080_69).abs() < 1e-5);
        assert!(prob_eq8(&v(0.0, 0.0, 0.2)).is_err());
    }

    #[test]
    fn prepare_examples() {
        let p = Momentum::new(0.3, -2.0, 1.0).unwrap();
        assert_eq!(
            *prepare(InputKind::WignerUp(Axis::Z), &p).amplitudes(),
            [c(1.0, 0.0), c(0.0, 0.0)]
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            *prepare(InputKind::WignerUp(Axis::X), &p).amplitudes(),
            [c(h, 0.0), c(h, 0.0)]
        );
        let rest = prepare(InputKind::IntrinsicUp(Axis::Z), &Momentum::zero());
        assert!((rest.up() - c(1.0, 0.0)).norm() < 1e-15 && rest.down().norm() < 1e-15);
    }

    #[test]
    fn formula_parsing() {
        assert_eq!("EQ6".parse::<Formula>().unwrap(), Formula::Eq6);
        assert!("eq9".parse::<Formula>().is_err());
        assert_eq!("sigma".parse::<Observable>().unwrap(), Observable::Sigma);
    }

    fn velocity_in_ball(radius: f64) -> impl Strategy<Value = Velocity> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
            .prop_filter("inside unit ball", |(a, b, c)| a * a + b * b + c * c < 1.0)
            .prop_map(move |(a, b, c)| v(radius * a, radius * b, radius * c))
    }

    proptest! {
        #[test]
        fn eq4_stays_below_half(vel in velocity_in_ball(0.999)) {
            let p = prob_eq4_velocity(&vel);
            prop_assert!((0.0..0.5).contains(&p));
        }

        #[test]
        fn discrepancies_are_odd(vel in velocity_in_ball(0.99)) {
            let [a, b, c] = vel.components();
            for f in [discrepancy_eq5, discrepancy_eq6] {
                let d = f(&vel);
                prop_assert_eq!(f(&v(-a, b, c)), -d);
                prop_assert_eq!(f(&v(a, b, -c)), -d);
                prop_assert_eq!(f(&v(-a, b, -c)), d);
            }
        }

        #[test]
        fn measurement_is_complete(
            vel in velocity_in_ball(0.99),
            axis in prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)],
            obs in prop_oneof![Just(Observable::Sigma), Just(Observable::V)],
        ) {
            let p = momentum_from_velocity(&vel);
            for kind in [InputKind::WignerUp(axis), InputKind::IntrinsicUp(axis)] {
                let m = measure(&prepare(kind, &p), obs, Axis::Z);
                prop_assert!((m.total_probability() - 1.0).abs() < 1e-12);
                for o in &m.outcomes {
                    prop_assert!((0.0..=1.0).contains(&o.probability));
                }
            }
        }

        #[test]
        fn transverse_probabilities_ignore_v3(
            a in -0.6..0.6f64,
            b in -0.6..0.6f64,
            c in -0.7..0.7f64,
        ) {
            prop_assume!(a.hypot(b) > 1e-3 && a * a + b * b + c * c < 0.99);
            for f in [prob_eq7, prob_eq8] {
                prop_assert_eq!(f(&v(a, b, c)).unwrap(), f(&v(a, b, 0.0)).unwrap());
            }
        }
    }

    #[test]
    fn non_relativistic_limit() {
        // At ‖ṽ‖ = 1e-4 every effect is O(‖ṽ‖²) or smaller.
        let dirs = [
            [1.0, 0.0, 0.0],
            [0.6, 0.0, 0.8],
            [0.48, 0.6, 0.64],
            [0.0, -0.6, 0.8],
        ];
        for d in dirs {
            let vel = v(1e-4 * d[0], 1e-4 * d[1], 1e-4 * d[2]);
            assert!(prob_eq4_velocity(&vel) < 1e-8);
            assert!(discrepancy_eq5(&vel).abs() < 1e-8);
            assert!(discrepancy_eq6(&vel).abs() < 1e-8);
            if vel.rho() > 0.0 {
                let gap = prob_eq8(&vel).unwrap() - prob_eq7(&vel).unwrap();
                assert!(gap.abs() < 1e-8);
            }
        }
    }
}
