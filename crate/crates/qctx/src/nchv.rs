//! The hidden-variable side of the argument: systems of +/-1 sign constraints
//! over predetermined per-measurement values, an exhaustive satisfiability
//! decider, and a parity certificate extractor.
//!
//! A noncontextual model assigns each (axis, slot) pair one fixed sign,
//! independent of which other measurement it is paired with; that independence
//! is built into the data model, which has nowhere to record a companion
//! context. Each verified context contributes one monomial constraint: the
//! product of its factor values must equal the measured joint eigenvalue.
//! Over {+1, -1} such a system is linear over the two-element field, so
//! unsatisfiability always betrays itself through a parity certificate: a
//! subset of constraints covering every variable an even number of times
//! whose required signs multiply to -1.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::contexts::{ContextSet, ContextVariant, Slot};
use crate::error::{Error, Result};
use crate::pauli::PauliLetter;
use crate::sign::Sign;

/// Exhaustive assignment enumeration walks all 2^n sign vectors.
pub const ENUMERATION_VARIABLE_LIMIT: usize = 24;
/// Certificate search walks subsets of constraints, and systems are stored
/// with per-variable incidence bitmasks over constraints.
pub const CERTIFICATE_CONSTRAINT_LIMIT: usize = 24;
/// Hard cap on declared variables, so constraint masks fit one machine word.
pub const VARIABLE_LIMIT: usize = 64;

/// Identity of one predetermined value: which axis, measured in which slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVariable {
    axis: PauliLetter,
    slot: Slot,
}

impl SignVariable {
    pub fn new(axis: PauliLetter, slot: Slot) -> Result<SignVariable> {
        if axis == PauliLetter::I {
            return Err(Error::MalformedContext);
        }
        Ok(SignVariable { axis, slot })
    }

    pub fn axis(self) -> PauliLetter {
        self.axis
    }

    pub fn slot(self) -> Slot {
        self.slot
    }

    /// Conventional rendering: m_x^1 for time-slot values, v_x^1 for
    /// site-slot values.
    pub fn label(self, variant: ContextVariant) -> String {
        let prefix = match variant {
            ContextVariant::Temporal => 'm',
            ContextVariant::Spatial => 'v',
        };
        format!(
            "{prefix}_{}^{}",
            self.axis.symbol().to_ascii_lowercase(),
            self.slot.index()
        )
    }
}

/// One product equation: the signs of the listed variables must multiply to
/// `required_sign`. Variable indices are stored sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialConstraint {
    variables: Vec<usize>,
    required_sign: Sign,
}

impl MonomialConstraint {
    pub fn variables(&self) -> &[usize] {
        &self.variables
    }

    pub fn required_sign(&self) -> Sign {
        self.required_sign
    }
}

/// One full sign assignment, aligned with the owning system's variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Sign>,
}

impl Assignment {
    pub fn new(values: Vec<Sign>) -> Assignment {
        Assignment { values }
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Sign {
        self.values[index]
    }
}

/// A subset of constraints that rules the system out: every variable is
/// covered an even number of times, so any assignment makes the left-hand
/// product +1, while the required signs multiply to -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCertificate {
    constraint_subset: Vec<usize>,
    parity_of_signs: Sign,
}

impl ParityCertificate {
    /// Ascending zero-based constraint indices.
    pub fn constraint_subset(&self) -> &[usize] {
        &self.constraint_subset
    }

    pub fn parity_of_signs(&self) -> Sign {
        self.parity_of_signs
    }

    /// Re-derives the two defining properties directly from the system.
    pub fn verify(&self, system: &ConstraintSystem) -> bool {
        let mut incidence = vec![0usize; system.variable_count()];
        let mut sign_product = Sign::Plus;
        for &index in &self.constraint_subset {
            let Some(constraint) = system.constraints().get(index) else {
                return false;
            };
            for &v in constraint.variables() {
                incidence[v] += 1;
            }
            sign_product = sign_product * constraint.required_sign();
        }
        incidence.iter().all(|n| n % 2 == 0)
            && sign_product == Sign::Minus
            && self.parity_of_signs == Sign::Minus
            && !self.constraint_subset.is_empty()
    }
}

/// An ordered list of labelled sign variables plus monomial constraints over
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    variables: Vec<String>,
    constraints: Vec<MonomialConstraint>,
}

#[derive(Serialize, Deserialize)]
struct SystemDocument {
    variables: Vec<String>,
    constraints: Vec<ConstraintDocument>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintDocument {
    vars: Vec<String>,
    sign: Sign,
}

impl ConstraintSystem {
    /// Builds a system from variable labels and constraints given as
    /// (labels, required sign) pairs. Labels must be unique; each constraint
    /// must be nonempty and mention each of its variables once.
    pub fn new<S: AsRef<str>>(
        variables: Vec<String>,
        constraints: &[(Vec<S>, Sign)],
    ) -> Result<ConstraintSystem> {
        if variables.len() > VARIABLE_LIMIT {
            return Err(Error::TooManyVariables { found: variables.len(), limit: VARIABLE_LIMIT });
        }
        if constraints.len() > CERTIFICATE_CONSTRAINT_LIMIT {
            return Err(Error::TooManyConstraints {
                found: constraints.len(),
                limit: CERTIFICATE_CONSTRAINT_LIMIT,
            });
        }
        let mut seen = BTreeSet::new();
        for label in &variables {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateVariable(label.clone()));
            }
        }
        let index_of = |label: &str| -> Result<usize> {
            variables
                .iter()
                .position(|v| v == label)
                .ok_or_else(|| Error::UnknownVariable(label.to_string()))
        };
        let mut built = Vec::with_capacity(constraints.len());
        for (labels, sign) in constraints {
            if labels.is_empty() {
                return Err(Error::EmptyConstraint);
            }
            let mut indices = Vec::with_capacity(labels.len());
            for label in labels {
                let index = index_of(label.as_ref())?;
                if indices.contains(&index) {
                    return Err(Error::RepeatedVariable(label.as_ref().to_string()));
                }
                indices.push(index);
            }
            indices.sort_unstable();
            built.push(MonomialConstraint { variables: indices, required_sign: *sign });
        }
        Ok(ConstraintSystem { variables, constraints: built })
    }

    /// Derives the value-constraint system a noncontextual model must satisfy
    /// to reproduce the deterministic products of a verified context set: one
    /// constraint per context, product of factor values = joint eigenvalue.
    ///
    /// A context measuring z on both slots is rewritten through the same-time
    /// factorization sigma_z = (x factor)(y factor) into the four x/y
    /// variables, mirroring how the joint zz operator splits into the four
    /// single-spin factors; this keeps the whole system over the x and y
    /// values only.
    pub fn from_contexts(set: &ContextSet) -> Result<ConstraintSystem> {
        use PauliLetter::{X, Y, Z};
        let variant = set.variant();
        let mut declared: BTreeSet<SignVariable> = BTreeSet::new();
        let mut rows: Vec<(Vec<SignVariable>, Sign)> = Vec::new();
        for context in set.contexts() {
            let eigenvalue = context.eigenvalue()?;
            let axes = (context.events()[0].axis(), context.events()[1].axis());
            let factors: Vec<SignVariable> = if axes == (Z, Z) {
                vec![
                    SignVariable::new(X, Slot::One)?,
                    SignVariable::new(Y, Slot::One)?,
                    SignVariable::new(X, Slot::Two)?,
                    SignVariable::new(Y, Slot::Two)?,
                ]
            } else {
                vec![
                    SignVariable::new(axes.0, Slot::One)?,
                    SignVariable::new(axes.1, Slot::Two)?,
                ]
            };
            declared.extend(factors.iter().copied());
            rows.push((factors, eigenvalue));
        }
        let variables: Vec<SignVariable> = declared.into_iter().collect();
        let labels: Vec<String> = variables.iter().map(|v| v.label(variant)).collect();
        let constraints: Vec<(Vec<String>, Sign)> = rows
            .into_iter()
            .map(|(factors, sign)| {
                (factors.into_iter().map(|v| v.label(variant)).collect(), sign)
            })
            .collect();
        ConstraintSystem::new(labels, &constraints)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[MonomialConstraint] {
        &self.constraints
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// The same system with one required sign negated.
    pub fn with_flipped_sign(&self, constraint_index: usize) -> ConstraintSystem {
        let mut flipped = self.clone();
        let c = &mut flipped.constraints[constraint_index];
        c.required_sign = -c.required_sign;
        flipped
    }

    /// The same system with one constraint dropped (variables stay declared).
    pub fn without_constraint(&self, constraint_index: usize) -> ConstraintSystem {
        let mut reduced = self.clone();
        reduced.constraints.remove(constraint_index);
        reduced
    }

    /// Checks one assignment against every constraint.
    pub fn is_satisfied_by(&self, assignment: &Assignment) -> Result<bool> {
        if assignment.values.len() != self.variables.len() {
            return Err(Error::DimensionMismatch {
                expected: self.variables.len(),
                found: assignment.values.len(),
            });
        }
        Ok(self.constraints.iter().all(|c| {
            Sign::product(c.variables.iter().map(|&v| assignment.values[v]))
                == c.required_sign
        }))
    }

    pub fn to_json_string(&self) -> String {
        let doc = SystemDocument {
            variables: self.variables.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintDocument {
                    vars: c.variables.iter().map(|&v| self.variables[v].clone()).collect(),
                    sign: c.required_sign,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("document serialization is infallible")
    }

    pub fn from_json_str(text: &str) -> Result<ConstraintSystem> {
        let doc: SystemDocument = serde_json::from_str(text)
            .map_err(|e| Error::BadSystemDocument(e.to_string()))?;
        let constraints: Vec<(Vec<String>, Sign)> =
            doc.constraints.into_iter().map(|c| (c.vars, c.sign)).collect();
        ConstraintSystem::new(doc.variables, &constraints)
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, c) in self.constraints.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            let monomial: Vec<&str> =
                c.variables.iter().map(|&v| self.variables[v].as_str()).collect();
            write!(f, "{} = {}", monomial.join(" "), c.required_sign)?;
        }
        Ok(())
    }
}

/// All assignments satisfying every constraint, in lexicographic order with
/// the first declared variable most significant and +1 ordered before -1.
/// Errors above [`ENUMERATION_VARIABLE_LIMIT`] variables.
pub fn enumerate_assignments(system: &ConstraintSystem) -> Result<Vec<Assignment>> {
    let n = system.variable_count();
    if n > ENUMERATION_VARIABLE_LIMIT {
        return Err(Error::TooManyVariables { found: n, limit: ENUMERATION_VARIABLE_LIMIT });
    }
    // Bit i of a mask holds variable i, with bit value 1 meaning -1; masks in
    // ascending numeric order with variable 0 in the top bit walk assignments
    // lexicographically.
    let constraint_masks: Vec<(u32, bool)> = system
        .constraints()
        .iter()
        .map(|c| {
            let mask = c
                .variables()
                .iter()
                .fold(0u32, |m, &v| m | 1 << (n - 1 - v));
            (mask, c.required_sign() == Sign::Minus)
        })
        .collect();
    let mut found = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let ok = constraint_masks
            .iter()
            .all(|&(m, wants_minus)| ((mask & m).count_ones() % 2 == 1) == wants_minus);
        if ok {
            let values = (0..n)
                .map(|i| if mask & (1 << (n - 1 - i)) != 0 { Sign::Minus } else { Sign::Plus })
                .collect();
            found.push(Assignment::new(values));
        }
    }
    Ok(found)
}

/// Ascending-index lexicographic order on equal-cardinality subsets encoded
/// as bitmasks: the subset owning the lowest differing index comes first.
fn subset_precedes(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    a & (1 << diff.trailing_zeros()) != 0
}

/// Searches for a parity certificate: a nonempty subset of constraints whose
/// combined variable incidence is even everywhere and whose required signs
/// multiply to -1. Over signs {+1, -1} the system is linear modulo 2, so such
/// a subset exists exactly when the system is unsatisfiable. Returns the
/// smallest certificate (fewest constraints, then lexicographically least).
pub fn parity_certificate(system: &ConstraintSystem) -> Option<ParityCertificate> {
    let m = system.constraint_count();
    // Constraint j as an incidence vector over variables, one bit per variable.
    let columns: Vec<u64> = system
        .constraints()
        .iter()
        .map(|c| c.variables().iter().fold(0u64, |mask, &v| mask | 1 << v))
        .collect();
    let minus_signs: u64 = system
        .constraints()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.required_sign() == Sign::Minus)
        .fold(0u64, |mask, (j, _)| mask | 1 << j);

    // Gaussian elimination over GF(2), tracking which original constraints
    // each reduced vector combines; vanishing rows yield a kernel basis.
    let mut pivots: Vec<(u64, u64)> = Vec::new();
    let mut kernel_basis: Vec<u64> = Vec::new();
    for j in 0..m {
        let mut vector = columns[j];
        let mut combo = 1u64 << j;
        for &(pivot_vector, pivot_combo) in &pivots {
            let lead = 1u64 << (63 - pivot_vector.leading_zeros());
            if vector & lead != 0 {
                vector ^= pivot_vector;
                combo ^= pivot_combo;
            }
        }
        if vector == 0 {
            kernel_basis.push(combo);
        } else {
            pivots.push((vector, combo));
        }
    }

    // Walk every nonempty kernel combination in Gray-code order; keep the
    // best subset with odd parity against the minus-sign pattern.
    let d = kernel_basis.len();
    let mut current = 0u64;
    let mut best: Option<u64> = None;
    for step in 1u64..(1u64 << d) {
        current ^= kernel_basis[step.trailing_zeros() as usize];
        if (current & minus_signs).count_ones() % 2 == 1 {
            let better = match best {
                None => true,
                Some(b) => {
                    current.count_ones() < b.count_ones()
                        || (current.count_ones() == b.count_ones()
                            && subset_precedes(current, b))
                }
            };
            if better {
                best = Some(current);
            }
        }
    }

    best.map(|mask| {
        let constraint_subset = (0..m).filter(|&j| mask & (1 << j) != 0).collect();
        let certificate =
            ParityCertificate { constraint_subset, parity_of_signs: Sign::Minus };
        debug_assert!(certificate.verify(system));
        certificate
    })
}

/// Outcome of running both deciders on one system.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub satisfying_assignments: Vec<Assignment>,
    pub certificate: Option<ParityCertificate>,
}

impl CrossCheckReport {
    pub fn satisfiable(&self) -> bool {
        !self.satisfying_assignments.is_empty()
    }
}

/// Runs exhaustive enumeration and certificate search on the same system and
/// insists they agree: a certificate exists exactly when no assignment does.
/// Disagreement would mean one of the deciders is broken, so it panics.
pub fn cross_check(system: &ConstraintSystem) -> Result<CrossCheckReport> {
    let satisfying_assignments = enumerate_assignments(system)?;
    let certificate = parity_certificate(system);
    if let Some(cert) = &certificate {
        assert!(cert.verify(system), "certificate fails re-verification");
        assert!(
            satisfying_assignments.is_empty(),
            "parity certificate coexists with a satisfying assignment"
        );
    } else {
        assert!(
            !satisfying_assignments.is_empty(),
            "unsatisfiable system without a parity certificate"
        );
    }
    Ok(CrossCheckReport { satisfying_assignments, certificate })
}
