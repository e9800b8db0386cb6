//! Seeded Monte Carlo of sequential projective spin measurements.
//!
//! The simulator works in the Schrodinger picture: the state is evolved by
//! the precession propagator, collapsed by a Born-rule measurement of the
//! bare axis observable, evolved again, and measured again. The predictions
//! it is checked against come from the Heisenberg picture, so agreement of
//! the two is itself one of the verified properties. On a verified context
//! the product of the two outcomes reproduces the joint eigenvalue in every
//! single trial, which is the operational face of the eigenvalue equations.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contexts::{Context, ContextVariant};
use crate::dynamics::{propagator, PrecessionAngle};
use crate::error::{Error, Result};
use crate::pauli::{max_norm, CMatrix, CVector, PauliPolynomial};
use crate::sign::Sign;
use crate::state::StateVector;

/// Tolerance for the involutory check dense(O)^2 = I.
pub const INVOLUTORY_EPS: f64 = 1e-10;

/// One measured trial. Records with equal seeds are bit-identical, floats
/// included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub context_id: String,
    pub outcome_t1: Sign,
    pub outcome_t2: Sign,
    pub product: Sign,
    /// Born probability of the +1 branch at the first measurement.
    pub first_outcome_probability: f64,
}

/// Outcome-product counts over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProductHistogram {
    #[serde(rename = "+1")]
    pub plus: u64,
    #[serde(rename = "-1")]
    pub minus: u64,
}

impl ProductHistogram {
    pub fn total(&self) -> u64 {
        self.plus + self.minus
    }
}

/// Aggregate statistics of one context run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub context_id: String,
    pub n_trials: u64,
    pub product_histogram: ProductHistogram,
    /// Empirical frequency of outcome +1 at the first measurement.
    pub first_outcome_frequency: f64,
    /// Analytic Born probability of that outcome on the initial state.
    pub expected_first_plus_probability: f64,
    pub seed: u64,
}

/// Full result of simulating one context: the summary plus every record.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRun {
    pub summary: RunSummary,
    pub records: Vec<TrialRecord>,
}

/// A dense observable vetted once for repeated measurement: Hermitian and
/// involutory, so its spectrum is contained in {+1, -1}.
struct VettedObservable {
    matrix: CMatrix,
}

impl VettedObservable {
    fn new(observable: &PauliPolynomial) -> Result<VettedObservable> {
        if !observable.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let matrix = observable.dense();
        let square = &matrix * &matrix;
        let identity = CMatrix::identity(matrix.nrows(), matrix.ncols());
        if max_norm(&(square - identity)) >= INVOLUTORY_EPS {
            return Err(Error::NotInvolutory);
        }
        Ok(VettedObservable { matrix })
    }
}

/// Born-rule measurement of a vetted observable: p_plus = (1 + <O>)/2,
/// outcome drawn from it, state projected onto the outcome eigenspace with
/// projectors (I +/- O)/2 and renormalized.
fn born_measure(
    observable: &VettedObservable,
    amplitudes: &CVector,
    rng: &mut ChaCha8Rng,
) -> (Sign, CVector, f64) {
    let image = &observable.matrix * amplitudes;
    let expectation = amplitudes.dotc(&image).re;
    let p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let draw: f64 = rng.random();
    let raw = if draw < p_plus { amplitudes + &image } else { amplitudes - &image };
    let outcome = if draw < p_plus { Sign::Plus } else { Sign::Minus };
    let scale = 1.0 / raw.norm();
    (outcome, raw * Complex64::new(scale, 0.0), p_plus)
}

/// Measures the observable on the state: returns the drawn outcome, the
/// collapsed post-measurement state, and the +1-branch probability.
pub fn projective_measure<R: Rng>(
    state: &StateVector,
    observable: &PauliPolynomial,
    rng: &mut R,
) -> Result<(Sign, StateVector, f64)> {
    let vetted = VettedObservable::new(observable)?;
    if vetted.matrix.nrows() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: vetted.matrix.nrows(),
            found: state.dim(),
        });
    }
    let image = &vetted.matrix * state.amplitudes();
    let expectation = state.amplitudes().dotc(&image).re;
    let p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let draw: f64 = rng.random();
    let (outcome, raw) = if draw < p_plus {
        (Sign::Plus, state.amplitudes() + &image)
    } else {
        (Sign::Minus, state.amplitudes() - &image)
    };
    let post = StateVector::normalized(raw)?;
    Ok((outcome, post, p_plus))
}

/// Shared trial loop. Each trial draws from its own RNG substream, keyed by
/// the trial index, so trials are order-independent and parallelizable
/// without changing the record stream.
fn run_trials(
    context_id: &str,
    first: &VettedObservable,
    second: &VettedObservable,
    prepared: &CVector,
    between: Option<&CMatrix>,
    n_trials: u64,
    seed: u64,
) -> ContextRun {
    let mut records = Vec::with_capacity(n_trials as usize);
    let mut plus_products = 0u64;
    let mut plus_firsts = 0u64;
    let mut expected_first = 0.0f64;
    for trial in 0..n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let (outcome_t1, collapsed, p_plus) = born_measure(first, prepared, &mut rng);
        let carried = match between {
            Some(u) => u * &collapsed,
            None => collapsed,
        };
        let (outcome_t2, _, _) = born_measure(second, &carried, &mut rng);
        let product = outcome_t1 * outcome_t2;
        if product == Sign::Plus {
            plus_products += 1;
        }
        if outcome_t1 == Sign::Plus {
            plus_firsts += 1;
        }
        expected_first = p_plus;
        records.push(TrialRecord {
            trial,
            context_id: context_id.to_string(),
            outcome_t1,
            outcome_t2,
            product,
            first_outcome_probability: p_plus,
        });
    }
    let summary = RunSummary {
        context_id: context_id.to_string(),
        n_trials,
        product_histogram: ProductHistogram {
            plus: plus_products,
            minus: n_trials - plus_products,
        },
        first_outcome_frequency: plus_firsts as f64 / n_trials as f64,
        expected_first_plus_probability: expected_first,
        seed,
    };
    ContextRun { summary, records }
}

/// Simulates one sequential-measurement context: evolve the initial state to
/// the first measurement time, measure that axis, evolve across the gap,
/// measure the second axis. The z-z context is realized as two plain
/// sigma_z measurements; its four-factor algebraic form is a separately
/// verified identity, not a measurement protocol, since the equal-time x and
/// y factors do not commute.
pub fn run_temporal_context(
    context: &Context,
    theta1: PrecessionAngle,
    theta2: PrecessionAngle,
    initial: &StateVector,
    n_trials: u64,
    seed: u64,
) -> Result<ContextRun> {
    if context.variant() != ContextVariant::Temporal {
        return Err(Error::MalformedContext);
    }
    if initial.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: initial.dim() });
    }
    if n_trials == 0 {
        return Err(Error::NoTrials);
    }
    let first = VettedObservable::new(&context.measurement_observable(0))?;
    let second = VettedObservable::new(&context.measurement_observable(1))?;
    let prepared = propagator(theta1) * initial.amplitudes();
    let between = propagator(theta2.delta(theta1));
    Ok(run_trials(
        context.id(),
        &first,
        &second,
        &prepared,
        Some(&between),
        n_trials,
        seed,
    ))
}

/// Simulates one two-particle context on a shared state: measure the site-1
/// factor, then the site-2 factor. The factors commute, so the order is a
/// convention, not a physical choice.
pub fn run_spatial_context(
    context: &Context,
    initial: &StateVector,
    n_trials: u64,
    seed: u64,
) -> Result<ContextRun> {
    if context.variant() != ContextVariant::Spatial {
        return Err(Error::MalformedContext);
    }
    if initial.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: initial.dim() });
    }
    if n_trials == 0 {
        return Err(Error::NoTrials);
    }
    let first = VettedObservable::new(&context.measurement_observable(0))?;
    let second = VettedObservable::new(&context.measurement_observable(1))?;
    Ok(run_trials(
        context.id(),
        &first,
        &second,
        initial.amplitudes(),
        None,
        n_trials,
        seed,
    ))
}

/// Writes records as CSV with a header row.
pub fn write_csv<W: Write>(records: &[TrialRecord], mut writer: W) -> Result<()> {
    writeln!(writer, "trial,context_id,outcome_t1,outcome_t2,product")?;
    for r in records {
        writeln!(
            writer,
            "{},{},{},{},{}",
            r.trial,
            r.context_id,
            r.outcome_t1.value(),
            r.outcome_t2.value(),
            r.product.value()
        )?;
    }
    Ok(())
}

/// Three-sigma binomial tolerance around probability `p` at `n` samples.
pub fn binomial_three_sigma(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
