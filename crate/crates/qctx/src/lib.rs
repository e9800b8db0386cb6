//! Exact single- and two-site Pauli algebra with a toolkit built on top of it:
//! Heisenberg-picture spin precession, construction of mutually commuting
//! measurement contexts, exhaustive refutation of noncontextual hidden-variable
//! sign assignments, and a seeded Monte Carlo simulator for sequential
//! projective measurements.
//!
//! The symbolic layer tracks phases as integer exponents of `i` and keeps
//! polynomial coefficients exact wherever the input angles are exact quarter
//! turns, so the headline identities come out as literal `+1.0`/`-1.0`
//! coefficients rather than approximations. Every symbolic result can be
//! lowered to a dense complex matrix for independent numerical cross-checking.

pub mod cli;
pub mod contexts;
pub mod dynamics;
pub mod error;
pub mod nchv;
pub mod pauli;
pub mod sign;
pub mod simulator;
pub mod state;

pub use contexts::{Context, ContextRejection, ContextSet, ContextVariant, MeasurementEvent, Slot};
pub use nchv::{Assignment, ConstraintSystem, CrossCheckReport, MonomialConstraint, ParityCertificate, SignVariable};
pub use dynamics::{Hamiltonian, PrecessionAngle};
pub use error::Error;
pub use pauli::{CMatrix, CVector, PauliLetter, PauliPolynomial, PauliTerm, Phase};
pub use sign::Sign;
pub use simulator::{ContextRun, RunSummary, TrialRecord};
pub use state::{StateSpec, StateVector};
