//! Heisenberg-picture precession of a single spin-1/2 about the z axis.
//!
//! The Hamiltonian is H = (omega/2) * Z (hbar = 1), and everything is
//! parameterized by the precession angle theta = omega * t rather than by
//! time. Angles that are exact multiples of a quarter turn take an exact
//! trig path where cos and sin are looked up from {0, +1, -1}, so the evolved
//! observables at the headline angles have literal unit coefficients.
//!
//!   X(theta) = cos(theta) X - sin(theta) Y
//!   Y(theta) = cos(theta) Y + sin(theta) X
//!   Z(theta) = Z
//!
//! The sign convention is pinned by `evolve_x(pi/2) == -Y` and is the one
//! reproduced numerically by conjugation with the propagator
//! U(theta) = diag(e^{-i theta/2}, e^{+i theta/2}).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{CMatrix, PauliLetter, PauliPolynomial, PauliTerm};

/// An angle that remembers whether it was presented as an exact integer
/// multiple of a quarter turn. The raw radian value is kept unreduced because
/// the spin-1/2 propagator is 4*pi periodic, not 2*pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecessionAngle {
    radians: f64,
    /// `Some(k)` means the angle is exactly k * pi/2 (k may be any integer).
    quarter: Option<i64>,
}

impl PrecessionAngle {
    pub fn zero() -> PrecessionAngle {
        PrecessionAngle::quarter_turns(0)
    }

    pub fn quarter_turns(k: i64) -> PrecessionAngle {
        PrecessionAngle { radians: k as f64 * FRAC_PI_2, quarter: Some(k) }
    }

    /// Wraps a raw radian value. Values that are bit-identical to an integer
    /// multiple of `FRAC_PI_2` (e.g. `std::f64::consts::PI`) are promoted to
    /// the exact path; nothing is snapped or rounded.
    pub fn from_radians(radians: f64) -> PrecessionAngle {
        if radians.is_finite() {
            let k = (radians / FRAC_PI_2).round();
            if k.abs() < 1e15 && (k as i64) as f64 * FRAC_PI_2 == radians {
                return PrecessionAngle { radians, quarter: Some(k as i64) };
            }
        }
        PrecessionAngle { radians, quarter: None }
    }

    pub fn radians(self) -> f64 {
        self.radians
    }

    pub fn is_exact_quarter(self) -> bool {
        self.quarter.is_some()
    }

    pub fn quarter_index(self) -> Option<i64> {
        self.quarter
    }

    pub fn cos(self) -> f64 {
        match self.quarter.map(|k| k.rem_euclid(4)) {
            Some(0) => 1.0,
            Some(1) | Some(3) => 0.0,
            Some(2) => -1.0,
            _ => self.radians.cos(),
        }
    }

    pub fn sin(self) -> f64 {
        match self.quarter.map(|k| k.rem_euclid(4)) {
            Some(0) | Some(2) => 0.0,
            Some(1) => 1.0,
            Some(3) => -1.0,
            _ => self.radians.sin(),
        }
    }

    /// `self - earlier`, staying on the exact path when both operands are on it.
    pub fn delta(self, earlier: PrecessionAngle) -> PrecessionAngle {
        match (self.quarter, earlier.quarter) {
            (Some(a), Some(b)) => PrecessionAngle::quarter_turns(a - b),
            _ => PrecessionAngle::from_radians(self.radians - earlier.radians),
        }
    }

    /// Accepts rational multiples of pi ("pi/2", "3pi/4", "-pi", "2pi") and
    /// plain radian literals ("1.5708"). Rational multiples that reduce to
    /// whole quarter turns land on the exact path.
    pub fn parse(text: &str) -> Result<PrecessionAngle> {
        let bad = || Error::AngleParse { input: text.to_string() };
        let mut s = text.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut negative = false;
        if let Some(rest) = s.strip_prefix('-') {
            negative = true;
            s = rest;
        } else if let Some(rest) = s.strip_prefix('+') {
            s = rest;
        }
        let s = s.replace('π', "pi");
        let angle = if let Some(pos) = s.find("pi") {
            let (num_text, rest) = s.split_at(pos);
            let rest = &rest[2..];
            let num_text = num_text.trim_end_matches('*').trim();
            let den_text = match rest.strip_prefix('/') {
                Some(d) => d.trim(),
                None if rest.is_empty() => "1",
                None => return Err(bad()),
            };
            let den: i64 = den_text.parse().map_err(|_| bad())?;
            if den <= 0 {
                return Err(bad());
            }
            if num_text.is_empty() {
                rational_pi(1, den, negative)
            } else if let Ok(num) = num_text.parse::<i64>() {
                if num < 0 {
                    return Err(bad());
                }
                rational_pi(num, den, negative)
            } else {
                let num: f64 = num_text.parse().map_err(|_| bad())?;
                if !num.is_finite() || num < 0.0 {
                    return Err(bad());
                }
                let sign = if negative { -1.0 } else { 1.0 };
                PrecessionAngle::from_radians(sign * num * PI / den as f64)
            }
        } else {
            let value: f64 = s.parse().map_err(|_| bad())?;
            if !value.is_finite() {
                return Err(bad());
            }
            let sign = if negative { -1.0 } else { 1.0 };
            PrecessionAngle::from_radians(sign * value)
        };
        Ok(angle)
    }
}

fn rational_pi(num: i64, den: i64, negative: bool) -> PrecessionAngle {
    let sign = if negative { -1 } else { 1 };
    // num*pi/den is a whole number of quarter turns iff den divides 2*num.
    if (2 * num) % den == 0 {
        PrecessionAngle::quarter_turns(sign * 2 * num / den)
    } else {
        PrecessionAngle::from_radians(sign as f64 * num as f64 * PI / den as f64)
    }
}

impl FromStr for PrecessionAngle {
    type Err = Error;
    fn from_str(s: &str) -> Result<PrecessionAngle> {
        PrecessionAngle::parse(s)
    }
}

impl fmt::Display for PrecessionAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.quarter {
            Some(0) => write!(f, "0"),
            Some(k) if k % 2 == 0 => match k / 2 {
                1 => write!(f, "pi"),
                -1 => write!(f, "-pi"),
                h => write!(f, "{h}pi"),
            },
            Some(1) => write!(f, "pi/2"),
            Some(-1) => write!(f, "-pi/2"),
            Some(k) => write!(f, "{k}pi/2"),
            None => write!(f, "{:.12}", self.radians),
        }
    }
}

/// H = (omega/2) * Z with hbar = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    pub omega: f64,
}

impl Default for Hamiltonian {
    fn default() -> Self {
        Hamiltonian { omega: 1.0 }
    }
}

impl Hamiltonian {
    pub fn polynomial(&self) -> PauliPolynomial {
        PauliPolynomial::from_term(&PauliTerm::single(PauliLetter::Z))
            .scale(Complex64::new(self.omega / 2.0, 0.0))
    }
}

/// sigma_x precessed by theta: cos(theta) X - sin(theta) Y.
pub fn evolve_x(theta: PrecessionAngle) -> PauliPolynomial {
    axis_combination(PauliLetter::X, theta.cos(), PauliLetter::Y, -theta.sin())
}

/// sigma_y precessed by theta: cos(theta) Y + sin(theta) X.
pub fn evolve_y(theta: PrecessionAngle) -> PauliPolynomial {
    axis_combination(PauliLetter::Y, theta.cos(), PauliLetter::X, theta.sin())
}

/// sigma_z commutes with H and is conserved.
pub fn evolve_z(_theta: PrecessionAngle) -> PauliPolynomial {
    PauliPolynomial::from_term(&PauliTerm::single(PauliLetter::Z))
}

pub fn evolve_letter(letter: PauliLetter, theta: PrecessionAngle) -> PauliPolynomial {
    match letter {
        PauliLetter::I => PauliPolynomial::identity(1).expect("single site"),
        PauliLetter::X => evolve_x(theta),
        PauliLetter::Y => evolve_y(theta),
        PauliLetter::Z => evolve_z(theta),
    }
}

fn axis_combination(a: PauliLetter, ca: f64, b: PauliLetter, cb: f64) -> PauliPolynomial {
    let pa = PauliPolynomial::from_term(&PauliTerm::single(a)).scale(Complex64::new(ca, 0.0));
    let pb = PauliPolynomial::from_term(&PauliTerm::single(b)).scale(Complex64::new(cb, 0.0));
    pa.add(&pb).expect("same site count")
}

/// Applies the precession letter-by-letter to a single-site polynomial.
/// Linearity makes this the Heisenberg evolution of the whole polynomial.
pub fn evolve_polynomial(p: &PauliPolynomial, theta: PrecessionAngle) -> Result<PauliPolynomial> {
    if p.site_count() != 1 {
        return Err(Error::NotSingleSite);
    }
    let mut out = PauliPolynomial::zero(1)?;
    for (word, c) in p.terms() {
        out = out.add(&evolve_letter(word[0], theta).scale(c))?;
    }
    Ok(out)
}

/// Right-hand side of the Heisenberg equation of motion,
/// d sigma / dt = i [H, sigma]. For H = (omega/2) Z this sends X to -omega Y,
/// Y to +omega X and annihilates Z.
pub fn heisenberg_rhs(p: &PauliPolynomial, h: &Hamiltonian) -> Result<PauliPolynomial> {
    if p.site_count() != 1 {
        return Err(Error::NotSingleSite);
    }
    Ok(h.polynomial().commutator(p)?.scale(Complex64::new(0.0, 1.0)))
}

/// Schroedinger-picture propagator e^{-iHt} = diag(e^{-i theta/2}, e^{+i theta/2}).
/// Note the 4*pi periodicity: a full 2*pi turn returns -identity.
pub fn propagator(theta: PrecessionAngle) -> CMatrix {
    let half = theta.radians() / 2.0;
    let zero = Complex64::new(0.0, 0.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(1.0, -half),
            zero,
            zero,
            Complex64::from_polar(1.0, half),
        ],
    )
}
