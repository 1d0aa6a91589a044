//! Two independent routes to every closed-form probability, plus the seeded
//! validation suite behind the `validate` command.
//!
//! * Born pipeline: prepare the input state, take the closed-form
//!   eigenstate of the measured observable, square the overlap.
//! * Oracle pipeline: build every state and eigenvector with
//!   [`oracle::eigh2`] alone, then square the overlap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitBall};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::SpinState;
use crate::kinematics::{momentum_from_velocity, Momentum, Velocity};
use crate::measurement::{
    born_probability, eigenpair, measure, prepare, Formula, InputKind, Observable, RHO_TOLERANCE,
};
use crate::oracle::{eigh2, oracle_probability, EigenSystem2};
use crate::spin_ops::{self, residual, sigma_op, v_op, wigner_spin_op, Axis, Sign};

/// Tolerance on spectra and eigenpair residuals.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;
/// Tolerance on probabilities.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

fn check_domain(formula: Formula, v: &Velocity) -> Result<()> {
    if formula.needs_transverse_velocity() && v.rho() <= RHO_TOLERANCE {
        return Err(Error::UndefinedDirection { rho: v.rho() });
    }
    Ok(())
}

/// The formula's quantity through closed-form eigenstates and the Born rule.
pub fn born_pipeline(formula: Formula, v: &Velocity) -> Result<f64> {
    check_domain(formula, v)?;
    let p = momentum_from_velocity(v);
    let input = prepare(formula.input(), &p);
    let (observable, branch) = formula.measured();
    let target = eigenpair(observable, &p, Axis::Z, branch);
    Ok(born_probability(&input, &target.state)? - formula.baseline())
}

fn oracle_state(p: &Momentum, kind: InputKind) -> Result<SpinState> {
    let op = match kind {
        InputKind::WignerUp(axis) => wigner_spin_op(axis),
        InputKind::IntrinsicUp(axis) => sigma_op(p, axis),
    };
    let sys = eigh2(&op)?;
    let v = sys.vectors[EigenSystem2::branch_index(Sign::Plus)];
    SpinState::normalized(*p, v[0], v[1])
}

/// The formula's quantity using only [`eigh2`] eigenvectors.
pub fn oracle_pipeline(formula: Formula, v: &Velocity) -> Result<f64> {
    check_domain(formula, v)?;
    let p = momentum_from_velocity(v);
    let input = oracle_state(&p, formula.input())?;
    let (observable, branch) = formula.measured();
    let op = match observable {
        Observable::Sigma => sigma_op(&p, Axis::Z),
        Observable::V => v_op(&p, Axis::Z),
    };
    Ok(oracle_probability(&input, &op, branch)? - formula.baseline())
}

/// Closed forms under test. Swappable so the suite can be shown to catch a
/// tampered formula.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub sigma_eigenvalue: fn(&Momentum, Axis) -> f64,
    pub v_eigenvalue: fn(&Momentum, Axis) -> f64,
    pub formula: fn(Formula, &Velocity) -> Result<f64>,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            sigma_eigenvalue: spin_ops::sigma_eigenvalue,
            v_eigenvalue: spin_ops::v_eigenvalue,
            formula: |f, v| f.closed_form(v),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation.is_finite() && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

struct Tracker {
    name: String,
    tolerance: f64,
    max: f64,
    count: usize,
}

impl Tracker {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            max: 0.0,
            count: 0,
        }
    }

    fn record(&mut self, deviation: f64) {
        // NaN must poison the check, so no f64::max here.
        if deviation.is_nan() || deviation > self.max {
            self.max = deviation;
        }
        self.count += 1;
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            max_deviation: self.max,
            tolerance: self.tolerance,
            samples: self.count,
        }
    }
}

/// Uniform momentum in the ball `‖p̃‖ ≤ radius`.
pub fn random_momentum<R: Rng>(rng: &mut R, radius: f64) -> Momentum {
    let [x, y, z]: [f64; 3] = UnitBall.sample(rng);
    Momentum::new(radius * x, radius * y, radius * z).expect("finite sample")
}

/// Uniform velocity in the ball `‖ṽ‖ ≤ radius < 1`.
pub fn random_velocity<R: Rng>(rng: &mut R, radius: f64) -> Velocity {
    let [x, y, z]: [f64; 3] = UnitBall.sample(rng);
    Velocity::new(radius * x, radius * y, radius * z).expect("radius below 1")
}

/// Maximum |closed − pipeline| per formula and route over `samples` seeded
/// velocities with `‖ṽ‖ ≤ 0.99`.
pub fn pipeline_checks(samples: usize, seed: u64, forms: &ClosedForms) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5151_5eed);
    let mut born: Vec<Tracker> = Formula::ALL
        .iter()
        .map(|f| {
            Tracker::new(
                format!("{f} closed form vs Born pipeline"),
                PROBABILITY_TOLERANCE,
            )
        })
        .collect();
    let mut oracle: Vec<Tracker> = Formula::ALL
        .iter()
        .map(|f| {
            Tracker::new(
                format!("{f} closed form vs eigh2 oracle"),
                PROBABILITY_TOLERANCE,
            )
        })
        .collect();
    for _ in 0..samples {
        let v = random_velocity(&mut rng, 0.99);
        for (idx, formula) in Formula::ALL.into_iter().enumerate() {
            if formula.needs_transverse_velocity() && v.rho() <= RHO_TOLERANCE {
                continue;
            }
            let closed = (forms.formula)(formula, &v);
            let dev = |other: Result<f64>| match (&closed, other) {
                (Ok(a), Ok(b)) => (a - b).abs(),
                _ => f64::NAN,
            };
            born[idx].record(dev(born_pipeline(formula, &v)));
            oracle[idx].record(dev(oracle_pipeline(formula, &v)));
        }
    }
    born.into_iter()
        .chain(oracle)
        .map(Tracker::finish)
        .collect()
}

/// Spectrum, eigenpair and completeness checks over `samples` seeded
/// momenta with `‖p̃‖ ≤ 10`, all three axes.
pub fn spectrum_checks(samples: usize, seed: u64, forms: &ClosedForms) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma_spec = Tracker::new("sigma spectrum vs eigh2", SPECTRUM_TOLERANCE);
    let mut v_spec = Tracker::new("v spectrum vs eigh2", SPECTRUM_TOLERANCE);
    let mut traceless = Tracker::new("spectrum symmetry |l+ + l-|", PROBABILITY_TOLERANCE);
    let mut resid = Tracker::new("closed-form eigenpair residual", SPECTRUM_TOLERANCE);
    let mut ortho = Tracker::new("closed-form eigenstate orthonormality", SPECTRUM_TOLERANCE);
    let mut complete = Tracker::new("measurement completeness", PROBABILITY_TOLERANCE);

    for _ in 0..samples {
        let p = random_momentum(&mut rng, 10.0);
        for axis in Axis::ALL {
            for (op, closed, tracker) in [
                (
                    sigma_op(&p, axis),
                    (forms.sigma_eigenvalue)(&p, axis),
                    &mut sigma_spec,
                ),
                (v_op(&p, axis), (forms.v_eigenvalue)(&p, axis), &mut v_spec),
            ] {
                match eigh2(&op) {
                    Ok(sys) => {
                        tracker.record(
                            (sys.values[0] + closed)
                                .abs()
                                .max((sys.values[1] - closed).abs()),
                        );
                        traceless.record((sys.values[0] + sys.values[1]).abs());
                    }
                    Err(_) => tracker.record(f64::NAN),
                }
            }

            for observable in [Observable::Sigma, Observable::V] {
                let op = match observable {
                    Observable::Sigma => sigma_op(&p, axis),
                    Observable::V => v_op(&p, axis),
                };
                let plus = eigenpair(observable, &p, axis, Sign::Plus);
                let minus = eigenpair(observable, &p, axis, Sign::Minus);
                resid.record(residual(&op, &plus).max(residual(&op, &minus)));
                let norm_dev = |s: &SpinState| (s.inner(s).re - 1.0).abs();
                ortho.record(
                    plus.state
                        .inner(&minus.state)
                        .norm()
                        .max(norm_dev(&plus.state))
                        .max(norm_dev(&minus.state)),
                );
                for kind in [
                    InputKind::WignerUp(axis),
                    InputKind::IntrinsicUp(axis.next()),
                ] {
                    let m = measure(&prepare(kind, &p), observable, axis);
                    complete.record((m.total_probability() - 1.0).abs());
                }
            }
        }
    }
    [sigma_spec, v_spec, traceless, resid, ortho, complete]
        .into_iter()
        .map(Tracker::finish)
        .collect()
}

pub fn run_validation(samples: usize, seed: u64) -> ValidationReport {
    run_validation_with(samples, seed, &ClosedForms::default())
}

pub fn run_validation_with(samples: usize, seed: u64, forms: &ClosedForms) -> ValidationReport {
    let mut checks = spectrum_checks(samples, seed, forms);
    checks.extend(pipeline_checks(samples, seed, forms));
    ValidationReport {
        samples,
        seed,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pipelines_agree_on_spec_points() {
        let v = Velocity::new(0.3, 0.4, 0.2).unwrap();
        assert!((born_pipeline(Formula::Eq7, &v).unwrap() - 0.1).abs() < 1e-12);
        assert!((oracle_pipeline(Formula::Eq7, &v).unwrap() - 0.1).abs() < 1e-12);
        let v = Velocity::new(0.3, 0.4, 0.0).unwrap();
        let expected = 0.5 * (1.0 - 0.8 / 0.91f64.sqrt());
        assert!((born_pipeline(Formula::Eq8, &v).unwrap() - expected).abs() < 1e-12);
        assert!((oracle_pipeline(Formula::Eq8, &v).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn undefined_direction_propagates() {
        let v = Velocity::new(0.0, 0.0, 0.7).unwrap();
        assert!(born_pipeline(Formula::Eq7, &v).is_err());
        assert!(oracle_pipeline(Formula::Eq8, &v).is_err());
        assert!(born_pipeline(Formula::Eq4, &v).unwrap().abs() < 1e-15);
    }

    #[test]
    fn validation_passes() {
        let report = run_validation(500, 7);
        for c in &report.checks {
            assert!(c.passed(), "{} failed: {:e}", c.name, c.max_deviation);
            assert!(c.samples > 0);
        }
    }

    #[test]
    fn validation_catches_tampered_eigenvalue() {
        let forms = ClosedForms {
            sigma_eigenvalue: |p, axis| spin_ops::sigma_eigenvalue(p, axis) + 1e-6,
            ..ClosedForms::default()
        };
        let report = run_validation_with(200, 1, &forms);
        assert!(!report.passed());
        let failing: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failing, ["sigma spectrum vs eigh2"]);
    }

    #[test]
    fn validation_catches_tampered_formula() {
        let forms = ClosedForms {
            formula: |f, v| match f {
                Formula::Eq5 => f.closed_form(v).map(|d| -d),
                _ => f.closed_form(v),
            },
            ..ClosedForms::default()
        };
        let report = run_validation_with(200, 1, &forms);
        assert!(report.failures().all(|c| c.name.starts_with("eq5")));
        assert_eq!(report.failures().count(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn closed_forms_match_both_pipelines(
            a in -1.0..1.0f64,
            b in -1.0..1.0f64,
            c in -1.0..1.0f64,
        ) {
            prop_assume!(a * a + b * b + c * c < 0.98);
            let vel = Velocity::new(a, b, c).unwrap();
            for formula in Formula::ALL {
                if formula.needs_transverse_velocity() && vel.rho() <= 1e-6 {
                    continue;
                }
                let closed = formula.closed_form(&vel).unwrap();
                let born = born_pipeline(formula, &vel).unwrap();
                let oracle = oracle_pipeline(formula, &vel).unwrap();
                prop_assert!((closed - born).abs() < PROBABILITY_TOLERANCE, "{} born", formula);
                prop_assert!((closed - oracle).abs() < PROBABILITY_TOLERANCE, "{} oracle", formula);
            }
        }
    }
}
