//! Commuting measurement contexts for one spin measured at two times, and for
//! two spins measured at two sites.
//!
//! The temporal triple is sigma_x(t2) sigma_y(t1), sigma_y(t2) sigma_x(t1) and
//! sigma_z(t2) sigma_z(t1); it is accepted only when all three joint operators
//! come out Hermitian and mutually commuting, which pins the precession
//! difference to an odd quarter turn. Accepted joint operators reduce to
//! scalar multiples of the identity, which is what makes the eigenvalue
//! structure state-independent. The spatial triple X(x)X, Y(x)Y, Z(x)Z with
//! the singlet as reference state is the baseline the temporal argument
//! mirrors.

use std::fmt;

use crate::dynamics::{evolve_x, evolve_y, evolve_z, PrecessionAngle};
use crate::error::{Error, Result};
use crate::pauli::{max_norm, PauliLetter, PauliPolynomial, PauliTerm};
use crate::sign::Sign;
use crate::state::StateVector;

/// Dense commutator max-norm below this counts as commuting; comfortably
/// above double-precision noise and far below the O(1) norms at generic
/// angles.
pub const COMMUTE_NORM_EPS: f64 = 1e-10;
/// Vector-norm tolerance for eigenvalue action on a state.
pub const EIGEN_ACTION_EPS: f64 = 1e-10;
/// Tolerance for the scalar in a scalar-identity operator to be +1 or -1.
pub const SCALAR_EPS: f64 = 1e-12;

/// First or second measurement: time slot t1/t2 in the temporal variant,
/// particle 1/2 in the spatial variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    One,
    Two,
}

impl Slot {
    pub fn index(self) -> u8 {
        match self {
            Slot::One => 1,
            Slot::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContextVariant {
    Temporal,
    Spatial,
}

impl fmt::Display for ContextVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextVariant::Temporal => write!(f, "temporal"),
            ContextVariant::Spatial => write!(f, "spatial"),
        }
    }
}

/// One projective spin measurement: which axis, measured when/where.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementEvent {
    slot: Slot,
    axis: PauliLetter,
}

impl MeasurementEvent {
    pub fn new(slot: Slot, axis: PauliLetter) -> Result<MeasurementEvent> {
        if axis == PauliLetter::I {
            return Err(Error::MalformedContext);
        }
        Ok(MeasurementEvent { slot, axis })
    }

    pub fn slot(self) -> Slot {
        self.slot
    }

    pub fn axis(self) -> PauliLetter {
        self.axis
    }
}

/// A pair of co-measurable spin observables together with their verified
/// joint operator. Events are stored in measurement order (slot one first);
/// the joint operator is written in the operator order with the slot-two
/// factor leftmost, matching how the sequential product acts on a ket.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    id: String,
    variant: ContextVariant,
    events: [MeasurementEvent; 2],
    joint_operator: PauliPolynomial,
    quantum_eigenvalue: Option<Sign>,
}

impl Context {
    pub fn new(
        variant: ContextVariant,
        events: [MeasurementEvent; 2],
        joint_operator: PauliPolynomial,
        quantum_eigenvalue: Option<Sign>,
    ) -> Result<Context> {
        let expected_sites = match variant {
            ContextVariant::Temporal => 1,
            ContextVariant::Spatial => 2,
        };
        if joint_operator.site_count() != expected_sites {
            return Err(Error::MalformedContext);
        }
        if events[0].slot() != Slot::One || events[1].slot() != Slot::Two {
            return Err(Error::MalformedContext);
        }
        let id = match variant {
            // Temporal ids read in operator order, t2 axis first.
            ContextVariant::Temporal => format!(
                "{}{}",
                events[1].axis().symbol().to_ascii_lowercase(),
                events[0].axis().symbol().to_ascii_lowercase()
            ),
            ContextVariant::Spatial => format!(
                "{}{}",
                events[0].axis().symbol().to_ascii_lowercase(),
                events[1].axis().symbol().to_ascii_lowercase()
            ),
        };
        Ok(Context { id, variant, events, joint_operator, quantum_eigenvalue })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn variant(&self) -> ContextVariant {
        self.variant
    }

    /// Events in measurement order: slot one, then slot two.
    pub fn events(&self) -> &[MeasurementEvent; 2] {
        &self.events
    }

    pub fn joint_operator(&self) -> &PauliPolynomial {
        &self.joint_operator
    }

    pub fn quantum_eigenvalue(&self) -> Option<Sign> {
        self.quantum_eigenvalue
    }

    pub fn eigenvalue(&self) -> Result<Sign> {
        self.quantum_eigenvalue.ok_or(Error::MissingEigenvalue)
    }

    /// The single measurement operator for one event, embedded into the
    /// context's full space: bare letters for the temporal variant,
    /// letter (x) I or I (x) letter for the spatial one.
    pub fn measurement_observable(&self, event_index: usize) -> PauliPolynomial {
        let event = self.events[event_index];
        let single = PauliTerm::single(event.axis());
        match self.variant {
            ContextVariant::Temporal => PauliPolynomial::from_term(&single),
            ContextVariant::Spatial => {
                let identity = PauliTerm::single(PauliLetter::I);
                let embedded = match event.slot() {
                    Slot::One => single.tensor(&identity),
                    Slot::Two => identity.tensor(&single),
                };
                PauliPolynomial::from_term(&embedded.expect("single-site factors"))
            }
        }
    }

    pub fn description(&self) -> String {
        let a = self.events[0].axis().symbol().to_ascii_lowercase();
        let b = self.events[1].axis().symbol().to_ascii_lowercase();
        match self.variant {
            ContextVariant::Temporal => format!("sigma_{b}(t2) sigma_{a}(t1)"),
            ContextVariant::Spatial => format!("sigma_{a}(1) sigma_{b}(2)"),
        }
    }
}

/// The verified triple of contexts for one variant.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextSet {
    variant: ContextVariant,
    contexts: Vec<Context>,
    angles: Option<(PrecessionAngle, PrecessionAngle)>,
}

impl ContextSet {
    pub fn variant(&self) -> ContextVariant {
        self.variant
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn angles(&self) -> Option<(PrecessionAngle, PrecessionAngle)> {
        self.angles
    }

    pub fn eigenvalues(&self) -> Vec<Sign> {
        self.contexts
            .iter()
            .map(|c| c.quantum_eigenvalue().expect("verified context set"))
            .collect()
    }

    /// Builds a one-context set around a caller-supplied context, for feeding
    /// custom cases into the constraint machinery.
    pub fn custom(variant: ContextVariant, contexts: Vec<Context>) -> ContextSet {
        ContextSet { variant, contexts, angles: None }
    }
}

/// Why a temporal construction was turned down, with the numbers that show it.
#[derive(Debug, Clone)]
pub struct ContextRejection {
    pub theta1: PrecessionAngle,
    pub theta2: PrecessionAngle,
    pub failures: Vec<RejectionReason>,
}

#[derive(Debug, Clone)]
pub enum RejectionReason {
    /// The written product of the two factors is not Hermitian.
    NonHermitianJoint { context: String, imaginary_norm: f64 },
    /// The two time-separated factors fail to commute, so there is no joint
    /// measurement to speak of.
    NonCommutingFactors { context: String, pair: (String, String), commutator_norm: f64 },
    /// Two of the three joint operators fail to commute.
    NonCommutingJoints { pair: (String, String), commutator_norm: f64 },
    /// Hermitian and commuting but not a signed unit multiple of identity.
    NotScalarIdentity { context: String },
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectionReason::NonHermitianJoint { context, imaginary_norm } => write!(
                f,
                "joint operator of context {context} is not Hermitian (imaginary coefficient norm {imaginary_norm:.6})"
            ),
            RejectionReason::NonCommutingFactors { context, pair, commutator_norm } => write!(
                f,
                "context {context} factors {} and {} do not commute (commutator max-norm {commutator_norm:.6})",
                pair.0, pair.1
            ),
            RejectionReason::NonCommutingJoints { pair, commutator_norm } => write!(
                f,
                "joint operators {} and {} are not mutually commuting (commutator max-norm {commutator_norm:.6})",
                pair.0, pair.1
            ),
            RejectionReason::NotScalarIdentity { context } => {
                write!(f, "joint operator of context {context} is not a signed unit multiple of identity")
            }
        }
    }
}

impl fmt::Display for ContextRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contexts rejected at (theta1 = {}, theta2 = {}): ",
            self.theta1, self.theta2
        )?;
        for (idx, failure) in self.failures.iter().enumerate() {
            if idx > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{failure}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ContextRejection {}

struct TemporalFactors {
    id: &'static str,
    later: PauliPolynomial,
    earlier: PauliPolynomial,
    later_name: String,
    earlier_name: String,
    axes: (PauliLetter, PauliLetter), // (t1 axis, t2 axis)
}

fn temporal_factors(theta1: PrecessionAngle, theta2: PrecessionAngle) -> Vec<TemporalFactors> {
    use PauliLetter::{X, Y, Z};
    [( "xy", X, Y), ("yx", Y, X), ("zz", Z, Z)]
        .into_iter()
        .map(|(id, later_axis, earlier_axis)| TemporalFactors {
            id,
            later: crate::dynamics::evolve_letter(later_axis, theta2),
            earlier: crate::dynamics::evolve_letter(earlier_axis, theta1),
            later_name: format!("sigma_{}(t2)", later_axis.symbol().to_ascii_lowercase()),
            earlier_name: format!("sigma_{}(t1)", earlier_axis.symbol().to_ascii_lowercase()),
            axes: (earlier_axis, later_axis),
        })
        .collect()
}

struct TemporalAssessment {
    joints: Vec<(&'static str, PauliPolynomial, (PauliLetter, PauliLetter))>,
    scalars: Vec<Option<Sign>>,
    hermitian: bool,
    commuting: bool,
    max_factor_commutator_norm: f64,
    total_factor_commutator_norm: f64,
    failures: Vec<RejectionReason>,
}

fn assess_temporal(theta1: PrecessionAngle, theta2: PrecessionAngle) -> TemporalAssessment {
    let factors = temporal_factors(theta1, theta2);
    let mut failures = Vec::new();
    let mut joints = Vec::new();
    let mut scalars = Vec::new();
    let mut hermitian = true;
    let mut commuting = true;
    let mut max_comm = 0.0f64;
    let mut total_comm = 0.0f64;

    for fac in &factors {
        let joint = fac.later.mul(&fac.earlier).expect("single-site factors");

        let comm = fac.later.dense() * fac.earlier.dense() - fac.earlier.dense() * fac.later.dense();
        let norm = max_norm(&comm);
        max_comm = max_comm.max(norm);
        total_comm += norm;
        if norm >= COMMUTE_NORM_EPS {
            commuting = false;
            failures.push(RejectionReason::NonCommutingFactors {
                context: fac.id.to_string(),
                pair: (fac.later_name.clone(), fac.earlier_name.clone()),
                commutator_norm: norm,
            });
        }

        if !joint.is_hermitian() {
            hermitian = false;
            let imaginary_norm = joint.terms().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
            failures.push(RejectionReason::NonHermitianJoint {
                context: fac.id.to_string(),
                imaginary_norm,
            });
        }

        scalars.push(scalar_identity_eigenvalue(&joint));
        joints.push((fac.id, joint, fac.axes));
    }

    for i in 0..joints.len() {
        for j in (i + 1)..joints.len() {
            let (a, b) = (&joints[i].1, &joints[j].1);
            let dense_comm = a.dense() * b.dense() - b.dense() * a.dense();
            let norm = max_norm(&dense_comm);
            let symbolic = a.commutes_with(b).expect("same site count");
            if norm >= COMMUTE_NORM_EPS || !symbolic {
                commuting = false;
                failures.push(RejectionReason::NonCommutingJoints {
                    pair: (joints[i].0.to_string(), joints[j].0.to_string()),
                    commutator_norm: norm,
                });
            }
        }
    }

    if failures.is_empty() {
        for ((id, _, _), scalar) in joints.iter().zip(&scalars) {
            if scalar.is_none() {
                failures.push(RejectionReason::NotScalarIdentity { context: id.to_string() });
            }
        }
    }

    TemporalAssessment {
        joints,
        scalars,
        hermitian,
        commuting,
        max_factor_commutator_norm: max_comm,
        total_factor_commutator_norm: total_comm,
        failures,
    }
}

/// Builds the three sequential-measurement contexts at the given angles.
/// Validity is checked, never assumed: the construction is handed back only
/// if every joint operator is Hermitian, all operators mutually commute, and
/// each joint operator reduces to a signed unit multiple of the identity.
/// Everything else comes back as a rejection carrying the offending pairs and
/// their commutator norms.
pub fn build_temporal_contexts(
    theta1: PrecessionAngle,
    theta2: PrecessionAngle,
) -> std::result::Result<ContextSet, ContextRejection> {
    let assessment = assess_temporal(theta1, theta2);
    if !assessment.failures.is_empty() {
        return Err(ContextRejection { theta1, theta2, failures: assessment.failures });
    }
    let contexts = assessment
        .joints
        .into_iter()
        .zip(assessment.scalars)
        .map(|((_, joint, (axis1, axis2)), scalar)| {
            Context::new(
                ContextVariant::Temporal,
                [
                    MeasurementEvent::new(Slot::One, axis1).expect("non-identity axis"),
                    MeasurementEvent::new(Slot::Two, axis2).expect("non-identity axis"),
                ],
                joint,
                Some(scalar.expect("accepted joints are scalar")),
            )
            .expect("well-formed context")
        })
        .collect();
    Ok(ContextSet { variant: ContextVariant::Temporal, contexts, angles: Some((theta1, theta2)) })
}

/// The two-particle baseline: X(x)X, Y(x)Y, Z(x)Z with eigenvalues read off
/// the singlet. The commutation and eigenstate facts are verified here rather
/// than hardcoded; a violation would be a bug in the algebra, hence the
/// panics.
pub fn build_spatial_contexts() -> ContextSet {
    use PauliLetter::{X, Y, Z};
    let singlet = StateVector::singlet();
    let contexts: Vec<Context> = [X, Y, Z]
        .into_iter()
        .map(|axis| {
            let site1 = PauliTerm::single(axis)
                .tensor(&PauliTerm::single(PauliLetter::I))
                .expect("single-site factors");
            let site2 = PauliTerm::single(PauliLetter::I)
                .tensor(&PauliTerm::single(axis))
                .expect("single-site factors");
            let joint = PauliPolynomial::from_term(&site1)
                .mul(&PauliPolynomial::from_term(&site2))
                .expect("two-site product");
            assert!(joint.is_hermitian(), "tensor square observables are Hermitian");
            let eigenvalue = eigen_action(&joint, &singlet)
                .expect("dimensions match")
                .expect("singlet is a joint eigenstate");
            Context::new(
                ContextVariant::Spatial,
                [
                    MeasurementEvent::new(Slot::One, axis).expect("non-identity axis"),
                    MeasurementEvent::new(Slot::Two, axis).expect("non-identity axis"),
                ],
                joint,
                Some(eigenvalue),
            )
            .expect("well-formed context")
        })
        .collect();

    for i in 0..contexts.len() {
        for j in (i + 1)..contexts.len() {
            let a = contexts[i].joint_operator();
            let b = contexts[j].joint_operator();
            assert!(a.commutes_with(b).expect("same sites"), "tensor squares commute");
            let comm = a.dense() * b.dense() - b.dense() * a.dense();
            assert!(max_norm(&comm) < COMMUTE_NORM_EPS);
        }
    }

    ContextSet { variant: ContextVariant::Spatial, contexts, angles: None }
}

/// If `dense(op) * state = lambda * state` for lambda in {+1, -1} within
/// 1e-10 vector norm, returns that lambda; otherwise the state is not an
/// eigenstate. Normalization is enforced by the `StateVector` type itself.
pub fn eigen_action(op: &PauliPolynomial, state: &StateVector) -> Result<Option<Sign>> {
    let dim = 1usize << op.site_count();
    if dim != state.dim() {
        return Err(Error::DimensionMismatch { expected: dim, found: state.dim() });
    }
    let image = op.dense() * state.amplitudes();
    if (&image - state.amplitudes()).norm() < EIGEN_ACTION_EPS {
        Ok(Some(Sign::Plus))
    } else if (&image + state.amplitudes()).norm() < EIGEN_ACTION_EPS {
        Ok(Some(Sign::Minus))
    } else {
        Ok(None)
    }
}

/// Detects that an operator is symbolically a signed unit multiple of the
/// identity word: the mechanized form of "the eigenvalue equations hold for
/// every state". Returns the sign, or none if any other word survives or the
/// scalar is not within 1e-12 of +/-1.
pub fn scalar_identity_eigenvalue(op: &PauliPolynomial) -> Option<Sign> {
    if !op.is_scalar_identity() {
        return None;
    }
    let lambda = op.identity_coefficient();
    if (lambda - num_complex::Complex64::new(1.0, 0.0)).norm() < SCALAR_EPS {
        Some(Sign::Plus)
    } else if (lambda + num_complex::Complex64::new(1.0, 0.0)).norm() < SCALAR_EPS {
        Some(Sign::Minus)
    } else {
        None
    }
}

/// sigma_x(t2) sigma_y(t2) sigma_y(t1) sigma_x(t1): the four-factor form of
/// the third temporal context.
pub fn four_factor_temporal(theta1: PrecessionAngle, theta2: PrecessionAngle) -> PauliPolynomial {
    evolve_x(theta2)
        .mul(&evolve_y(theta2))
        .and_then(|p| p.mul(&evolve_y(theta1)))
        .and_then(|p| p.mul(&evolve_x(theta1)))
        .expect("single-site products")
}

/// sigma_x(1) sigma_y(1) sigma_y(2) sigma_x(2): the four-factor form of the
/// third spatial context.
pub fn four_factor_spatial() -> PauliPolynomial {
    use PauliLetter::{I, X, Y};
    let embed1 = |axis| {
        PauliPolynomial::from_term(
            &PauliTerm::single(axis).tensor(&PauliTerm::single(I)).expect("single-site factors"),
        )
    };
    let embed2 = |axis| {
        PauliPolynomial::from_term(
            &PauliTerm::single(I).tensor(&PauliTerm::single(axis)).expect("single-site factors"),
        )
    };
    embed1(X)
        .mul(&embed1(Y))
        .and_then(|p| p.mul(&embed2(Y)))
        .and_then(|p| p.mul(&embed2(X)))
        .expect("two-site products")
}

/// Checks the same-time factorization identity
/// (i sigma_z(t2)) (-i sigma_z(t1)) = sigma_x(t2) sigma_y(t2) sigma_y(t1) sigma_x(t1),
/// i.e. that the zz joint operator equals the four-factor product. The
/// identity rests only on same-time relations, so it holds at any angle pair.
pub fn third_context_factorization_check(theta1: PrecessionAngle, theta2: PrecessionAngle) -> bool {
    let zz = evolve_z(theta2).mul(&evolve_z(theta1)).expect("single-site product");
    let four = four_factor_temporal(theta1, theta2);
    zz.approx_eq(&four, SCALAR_EPS).expect("same site count")
}

/// One row of the angle sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub index: usize,
    pub delta_theta: f64,
    /// All three joint operators Hermitian.
    pub hermitian: bool,
    /// All factor pairs and joint-operator pairs commute (dense max-norm
    /// below [`COMMUTE_NORM_EPS`]).
    pub commuting: bool,
    /// The full construction goes through at this separation.
    pub accepted: bool,
    /// Largest factor-pair commutator max-norm; analytically 2|cos(dtheta)|.
    pub commutator_norm: f64,
    /// Sum of the factor-pair commutator max-norms across the three contexts:
    /// the construction-wide commutation violation, analytically 4|cos(dtheta)|.
    pub total_commutator_norm: f64,
}

/// Sweeps the separation angle over a uniform grid of [0, 2*pi) with
/// theta1 = 0 and reports where the temporal construction is accepted.
/// Quarter-turn grid points land on the exact trig path, so the accepted
/// separations carry literally zero commutator norm.
pub fn scan_commuting_angles(grid_points: usize) -> Result<Vec<ScanPoint>> {
    if grid_points < 8 {
        return Err(Error::GridTooCoarse(grid_points));
    }
    let theta1 = PrecessionAngle::zero();
    let mut rows = Vec::with_capacity(grid_points);
    for index in 0..grid_points {
        let fraction = index as f64 / grid_points as f64;
        let theta2 = PrecessionAngle::from_radians(std::f64::consts::TAU * fraction);
        let assessment = assess_temporal(theta1, theta2);
        rows.push(ScanPoint {
            index,
            delta_theta: theta2.radians(),
            hermitian: assessment.hermitian,
            commuting: assessment.commuting,
            accepted: assessment.failures.is_empty(),
            commutator_norm: assessment.max_factor_commutator_norm,
            total_commutator_norm: assessment.total_factor_commutator_norm,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::CMatrix;
    use num_complex::Complex64;

    fn poly(text: &str) -> PauliPolynomial {
        PauliPolynomial::from_term(&PauliTerm::parse(text).unwrap())
    }

    fn quarter(k: i64) -> PrecessionAngle {
        PrecessionAngle::quarter_turns(k)
    }

    #[test]
    fn headline_angles_give_exact_scalar_joints() {
        let set = build_temporal_contexts(quarter(0), quarter(1)).unwrap();
        let ids: Vec<_> = set.contexts().iter().map(|c| c.id().to_string()).collect();
        assert_eq!(ids, ["xy", "yx", "zz"]);
        // Exact path: the joint operators are literally -I, +I, +I.
        assert_eq!(set.contexts()[0].joint_operator(), &poly("-I"));
        assert_eq!(set.contexts()[1].joint_operator(), &poly("I"));
        assert_eq!(set.contexts()[2].joint_operator(), &poly("I"));
        assert_eq!(set.eigenvalues(), [Sign::Minus, Sign::Plus, Sign::Plus]);
        assert_eq!(
            Sign::product(set.eigenvalues()),
            Sign::Minus,
            "the eigenvalue product carries the contradiction"
        );
    }

    #[test]
    fn three_quarter_separation_flips_the_first_two_eigenvalues() {
        let set = build_temporal_contexts(quarter(0), quarter(3)).unwrap();
        assert_eq!(set.eigenvalues(), [Sign::Plus, Sign::Minus, Sign::Plus]);
        assert_eq!(Sign::product(set.eigenvalues()), Sign::Minus);
    }

    #[test]
    fn only_the_angle_difference_matters() {
        let offset = build_temporal_contexts(quarter(1), quarter(2)).unwrap();
        assert_eq!(offset.eigenvalues(), [Sign::Minus, Sign::Plus, Sign::Plus]);

        let generic = build_temporal_contexts(
            PrecessionAngle::from_radians(1.0),
            PrecessionAngle::from_radians(1.0 + std::f64::consts::FRAC_PI_2),
        )
        .unwrap();
        assert_eq!(generic.eigenvalues(), [Sign::Minus, Sign::Plus, Sign::Plus]);

        let eighth = build_temporal_contexts(
            PrecessionAngle::parse("pi/4").unwrap(),
            PrecessionAngle::parse("3pi/4").unwrap(),
        )
        .unwrap();
        assert_eq!(eighth.eigenvalues(), [Sign::Minus, Sign::Plus, Sign::Plus]);
    }

    #[test]
    fn equal_times_are_rejected_for_hermiticity() {
        let err = build_temporal_contexts(quarter(0), quarter(0)).unwrap_err();
        let mentions_hermitian = err.failures.iter().any(|f| {
            matches!(f, RejectionReason::NonHermitianJoint { context, .. } if context == "xy")
        });
        assert!(mentions_hermitian, "rejection must name the non-Hermitian xy product: {err}");
        let mentions_commutation = err
            .failures
            .iter()
            .any(|f| matches!(f, RejectionReason::NonCommutingFactors { .. }));
        assert!(mentions_commutation, "equal-time x/y factors anticommute");
    }

    #[test]
    fn eighth_turn_separation_is_rejected_with_cosine_norm() {
        let err = build_temporal_contexts(quarter(0), PrecessionAngle::parse("pi/4").unwrap())
            .unwrap_err();
        let norm = err
            .failures
            .iter()
            .find_map(|f| match f {
                RejectionReason::NonCommutingFactors { commutator_norm, .. } => Some(*commutator_norm),
                _ => None,
            })
            .expect("factor commutation failure expected");
        // Analytic oracle: |[sigma_x(t2), sigma_y(t1)]| has max-norm 2|cos dtheta|.
        let expected = 2.0 * (std::f64::consts::FRAC_PI_4).cos();
        assert!((norm - expected).abs() < 1e-12);
    }

    #[test]
    fn accepted_joints_commute_symbolically_and_densely() {
        let set = build_temporal_contexts(quarter(0), quarter(1)).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let a = set.contexts()[i].joint_operator();
                let b = set.contexts()[j].joint_operator();
                assert!(a.commutes_with(b).unwrap());
                let comm = a.dense() * b.dense() - b.dense() * a.dense();
                assert!(max_norm(&comm) < 1e-12);
            }
        }
    }

    #[test]
    fn spatial_baseline_matches_hand_matrices() {
        let set = build_spatial_contexts();
        let ids: Vec<_> = set.contexts().iter().map(|c| c.id().to_string()).collect();
        assert_eq!(ids, ["xx", "yy", "zz"]);
        assert_eq!(set.contexts()[0].joint_operator(), &poly("XX"));
        assert_eq!(set.contexts()[1].joint_operator(), &poly("YY"));
        assert_eq!(set.contexts()[2].joint_operator(), &poly("ZZ"));
        assert_eq!(set.eigenvalues(), [Sign::Minus, Sign::Minus, Sign::Minus]);
        assert_eq!(Sign::product(set.eigenvalues()), Sign::Minus);

        // Independent numerical oracle for the eigenvalue equations.
        let singlet = StateVector::singlet();
        for ctx in set.contexts() {
            let image = ctx.joint_operator().dense() * singlet.amplitudes();
            assert!((image + singlet.amplitudes()).norm() < 1e-14, "{}", ctx.id());
        }
    }

    #[test]
    fn spatial_product_identity() {
        let xx = poly("XX");
        let yy = poly("YY");
        let zz = poly("ZZ");
        let prod = xx.mul(&yy).unwrap();
        assert_eq!(prod, zz.scale(Complex64::new(-1.0, 0.0)));
        assert!(four_factor_spatial().approx_eq(&zz, 1e-15).unwrap());
    }

    #[test]
    fn eigen_action_frozen_cases() {
        let singlet = StateVector::singlet();
        assert_eq!(eigen_action(&poly("XX"), &singlet).unwrap(), Some(Sign::Minus));

        let set = build_temporal_contexts(quarter(0), quarter(1)).unwrap();
        let up = StateVector::up();
        assert_eq!(
            eigen_action(set.contexts()[0].joint_operator(), &up).unwrap(),
            Some(Sign::Minus)
        );

        assert_eq!(eigen_action(&poly("Z"), &StateVector::plus()).unwrap(), None);
        assert!(eigen_action(&poly("XX"), &up).is_err(), "dimension mismatch");
    }

    #[test]
    fn eigen_action_agrees_with_scalar_detection_on_random_states() {
        let set = build_temporal_contexts(quarter(0), quarter(1)).unwrap();
        for seed in 0..100 {
            let state = StateVector::random(2, seed).unwrap();
            for ctx in set.contexts() {
                let scalar = scalar_identity_eigenvalue(ctx.joint_operator()).unwrap();
                let acted = eigen_action(ctx.joint_operator(), &state).unwrap().unwrap();
                assert_eq!(scalar, acted, "context {} seed {seed}", ctx.id());
            }
        }
    }

    #[test]
    fn scalar_identity_frozen_cases() {
        assert_eq!(scalar_identity_eigenvalue(&poly("-I")), Some(Sign::Minus));
        assert_eq!(scalar_identity_eigenvalue(&poly("I")), Some(Sign::Plus));
        assert_eq!(scalar_identity_eigenvalue(&poly("XX")), None);
        assert_eq!(scalar_identity_eigenvalue(&poly("Z")), None);
        assert_eq!(
            scalar_identity_eigenvalue(&poly("I").scale(Complex64::new(0.5, 0.0))),
            None
        );
        assert_eq!(scalar_identity_eigenvalue(&PauliPolynomial::zero(1).unwrap()), None);
        // (-Y)(X)(Y)(X) = +I: the four-factor zz form at the headline angles.
        assert_eq!(
            scalar_identity_eigenvalue(&four_factor_temporal(quarter(0), quarter(1))),
            Some(Sign::Plus)
        );
    }

    #[test]
    fn factorization_identity_holds_at_any_angle_pair() {
        assert!(third_context_factorization_check(quarter(0), quarter(1)));
        assert!(third_context_factorization_check(
            PrecessionAngle::parse("pi/4").unwrap(),
            PrecessionAngle::parse("3pi/4").unwrap()
        ));
        // It rests on same-time relations only, so rejected pairs satisfy it too.
        assert!(third_context_factorization_check(
            PrecessionAngle::from_radians(0.3),
            PrecessionAngle::from_radians(1.1)
        ));
    }

    #[test]
    fn factorization_identity_against_dense_oracle_at_accepted_pairs() {
        for seed in 0..10 {
            let theta1 = 0.37 * seed as f64;
            let theta2 = theta1 + std::f64::consts::FRAC_PI_2;
            let a1 = PrecessionAngle::from_radians(theta1);
            let a2 = PrecessionAngle::from_radians(theta2);
            assert!(build_temporal_contexts(a1, a2).is_ok(), "pair {seed} accepted");
            assert!(third_context_factorization_check(a1, a2));
            let zz = evolve_z(a2).mul(&evolve_z(a1)).unwrap().dense();
            let four = four_factor_temporal(a1, a2).dense();
            assert!(max_norm(&(zz - four)) < 1e-12);
        }
    }

    #[test]
    fn scan_accepts_exactly_the_odd_quarter_turns() {
        let rows = scan_commuting_angles(360).unwrap();
        let accepted: Vec<_> = rows.iter().filter(|r| r.accepted).map(|r| r.index).collect();
        assert_eq!(accepted, [90, 270]);
        // Exact trig path at the zeros: the norm is literally zero.
        assert_eq!(rows[90].commutator_norm, 0.0);
        assert_eq!(rows[270].commutator_norm, 0.0);
        for row in &rows {
            // Acceptance coincides with both flags on this construction.
            assert_eq!(row.accepted, row.hermitian && row.commuting);
            assert_eq!(row.hermitian, row.commuting);
            // Analytic oracle for the commutator norms.
            let expected = 2.0 * row.delta_theta.cos().abs();
            assert!((row.commutator_norm - expected).abs() < 1e-12, "index {}", row.index);
            assert!((row.total_commutator_norm - 2.0 * expected).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_on_coarse_grids() {
        let rows = scan_commuting_angles(8).unwrap();
        let accepted: Vec<_> = rows.iter().filter(|r| r.accepted).map(|r| r.index).collect();
        assert_eq!(accepted, [2, 6]);

        // A grid with no point at an odd quarter turn accepts nothing.
        let rows = scan_commuting_angles(9).unwrap();
        assert!(rows.iter().all(|r| !r.accepted));

        assert!(matches!(scan_commuting_angles(7), Err(Error::GridTooCoarse(7))));
    }

    #[test]
    fn product_hermiticity_iff_factor_commutation_over_grid() {
        for row_index in 0..48 {
            let theta2 = PrecessionAngle::from_radians(
                std::f64::consts::TAU * row_index as f64 / 48.0,
            );
            let x2 = evolve_x(theta2);
            let y1 = evolve_y(PrecessionAngle::zero());
            let product = x2.mul(&y1).unwrap();
            let commute = x2.commutes_with(&y1).unwrap();
            assert_eq!(product.is_hermitian(), commute, "grid index {row_index}");
        }
    }

    #[test]
    fn custom_context_construction_validates() {
        let ev1 = MeasurementEvent::new(Slot::One, PauliLetter::X).unwrap();
        let ev2 = MeasurementEvent::new(Slot::Two, PauliLetter::X).unwrap();
        let ctx = Context::new(ContextVariant::Temporal, [ev1, ev2], poly("I"), Some(Sign::Plus))
            .unwrap();
        assert_eq!(ctx.id(), "xx");
        assert_eq!(ctx.eigenvalue().unwrap(), Sign::Plus);

        let bare = Context::new(ContextVariant::Temporal, [ev1, ev2], poly("I"), None).unwrap();
        assert!(matches!(bare.eigenvalue(), Err(Error::MissingEigenvalue)));

        assert!(MeasurementEvent::new(Slot::One, PauliLetter::I).is_err());
        assert!(Context::new(ContextVariant::Spatial, [ev1, ev2], poly("I"), None).is_err());
        assert!(Context::new(ContextVariant::Temporal, [ev2, ev1], poly("I"), None).is_err());
    }

    #[test]
    fn measurement_observables_embed_correctly() {
        let set = build_spatial_contexts();
        let xx = &set.contexts()[0];
        assert_eq!(xx.measurement_observable(0), poly("XI"));
        assert_eq!(xx.measurement_observable(1), poly("IX"));

        let temporal = build_temporal_contexts(quarter(0), quarter(1)).unwrap();
        let xy = &temporal.contexts()[0];
        assert_eq!(xy.measurement_observable(0), poly("Y"), "t1 axis measured first");
        assert_eq!(xy.measurement_observable(1), poly("X"));
        assert_eq!(xy.description(), "sigma_x(t2) sigma_y(t1)");
    }

    #[test]
    fn rejection_message_is_informative() {
        let err = build_temporal_contexts(quarter(0), PrecessionAngle::parse("pi/4").unwrap())
            .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("rejected"));
        assert!(text.contains("commute") || text.contains("Hermitian"), "{text}");
    }

    #[test]
    fn dense_identity_check_for_headline_joint() {
        // Independent of the symbolic path: lower factors to matrices first,
        // multiply numerically, compare against -identity.
        let x_t2 = evolve_x(quarter(1)).dense();
        let y_t1 = evolve_y(quarter(0)).dense();
        let product = x_t2 * y_t1;
        let minus_identity = CMatrix::identity(2, 2) * Complex64::new(-1.0, 0.0);
        assert_eq!(product, minus_identity);
    }
}
