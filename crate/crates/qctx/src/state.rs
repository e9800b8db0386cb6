//! Normalized state vectors on one or two spins, plus the named preparations
//! the command line accepts. Random states are drawn from the
//! rotation-invariant measure (normalized complex Gaussian amplitudes) so
//! "random" never favors an axis.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::CVector;

const NORM_EPS: f64 = 1e-12;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Accepts an amplitude vector of dimension 2 or 4 that is already
    /// normalized to within 1e-12.
    pub fn new(amplitudes: CVector) -> Result<StateVector> {
        match amplitudes.len() {
            2 | 4 => {}
            d => return Err(Error::DimensionMismatch { expected: 2, found: d }),
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_EPS {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { amplitudes })
    }

    /// Rescales an arbitrary nonzero vector onto the unit sphere.
    pub fn normalized(amplitudes: CVector) -> Result<StateVector> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        StateVector::new(amplitudes / Complex64::new(norm, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn up() -> StateVector {
        StateVector::basis(2, 0)
    }

    pub fn down() -> StateVector {
        StateVector::basis(2, 1)
    }

    /// (|up> + |down>) / sqrt(2), the +1 eigenstate of X.
    pub fn plus() -> StateVector {
        let c = Complex64::new(FRAC_1_SQRT_2, 0.0);
        StateVector { amplitudes: CVector::from_vec(vec![c, c]) }
    }

    pub fn up_up() -> StateVector {
        StateVector::basis(4, 0)
    }

    /// (|up down> - |down up>) / sqrt(2).
    pub fn singlet() -> StateVector {
        let z = Complex64::new(0.0, 0.0);
        let c = Complex64::new(FRAC_1_SQRT_2, 0.0);
        StateVector { amplitudes: CVector::from_vec(vec![z, c, -c, z]) }
    }

    fn basis(dim: usize, index: usize) -> StateVector {
        let mut v = CVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        StateVector { amplitudes: v }
    }

    /// Haar-like random state: i.i.d. standard complex normal amplitudes,
    /// normalized. Deterministic in the seed.
    pub fn random(dim: usize, seed: u64) -> Result<StateVector> {
        if dim != 2 && dim != 4 {
            return Err(Error::DimensionMismatch { expected: 2, found: dim });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amplitudes = CVector::from_fn(dim, |_, _| complex_normal(&mut rng));
        StateVector::normalized(amplitudes)
    }
}

/// Box-Muller pair folded into one complex sample.
fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let phi = std::f64::consts::TAU * u2;
    Complex64::new(r * phi.cos(), r * phi.sin())
}

/// A state preparation as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSpec {
    Up,
    Down,
    Plus,
    UpUp,
    Singlet,
    Random { seed: u64 },
}

impl StateSpec {
    /// Dimension the named state lives in; `None` means it adapts.
    pub fn fixed_dim(self) -> Option<usize> {
        match self {
            StateSpec::Up | StateSpec::Down | StateSpec::Plus => Some(2),
            StateSpec::UpUp | StateSpec::Singlet => Some(4),
            StateSpec::Random { .. } => None,
        }
    }

    /// Parses "up", "down", "plus", "upup", "singlet", "random",
    /// "random:SEED". A bare "random" uses `default_seed`.
    pub fn parse(name: &str, default_seed: u64) -> Result<StateSpec> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "up" => Ok(StateSpec::Up),
            "down" => Ok(StateSpec::Down),
            "plus" => Ok(StateSpec::Plus),
            "upup" => Ok(StateSpec::UpUp),
            "singlet" => Ok(StateSpec::Singlet),
            "random" => Ok(StateSpec::Random { seed: default_seed }),
            _ => match lower.strip_prefix("random:") {
                Some(seed_text) => {
                    let seed = seed_text
                        .parse()
                        .map_err(|_| Error::UnknownState(name.to_string()))?;
                    Ok(StateSpec::Random { seed })
                }
                None => Err(Error::UnknownState(name.to_string())),
            },
        }
    }

    pub fn realize(self, dim: usize) -> Result<StateVector> {
        if let Some(fixed) = self.fixed_dim() {
            if fixed != dim {
                return Err(Error::StateDimension { name: self.to_string(), dim: fixed, expected: dim });
            }
        }
        Ok(match self {
            StateSpec::Up => StateVector::up(),
            StateSpec::Down => StateVector::down(),
            StateSpec::Plus => StateVector::plus(),
            StateSpec::UpUp => StateVector::up_up(),
            StateSpec::Singlet => StateVector::singlet(),
            StateSpec::Random { seed } => StateVector::random(dim, seed)?,
        })
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Up => write!(f, "up"),
            StateSpec::Down => write!(f, "down"),
            StateSpec::Plus => write!(f, "plus"),
            StateSpec::UpUp => write!(f, "upup"),
            StateSpec::Singlet => write!(f, "singlet"),
            StateSpec::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}
