//! Exact Pauli algebra on one or two sites.
//!
//! A term is a Pauli word together with a phase tracked as an integer exponent
//! of `i` modulo 4, so products of words never touch floating point. On top of
//! terms sit polynomials: complex-coefficient linear combinations of words,
//! which is where rotated observables like `cos(t)*X - sin(t)*Y` live. Every
//! symbolic object lowers to a dense complex matrix (site 1 is the left
//! Kronecker factor) for independent numerical checks.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = nalgebra::DMatrix<Complex64>;
pub type CVector = nalgebra::DVector<Complex64>;

/// Coefficients with magnitude below this are dropped during
/// canonicalization; it is also the tolerance for Hermiticity and symbolic
/// equality checks.
pub const COEFF_EPS: f64 = 1e-12;

const MAX_SITES: usize = 2;

/// One tensor factor of a Pauli word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    /// Single-site product table. Returns the phase exponent k and letter c
    /// such that `self * other = i^k * c`.
    fn mul(self, other: PauliLetter) -> (u8, PauliLetter) {
        use PauliLetter::*;
        match (self, other) {
            (I, b) => (0, b),
            (a, I) => (0, a),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    /// Distinct non-identity letters anticommute; everything else commutes.
    pub fn anticommutes_with(self, other: PauliLetter) -> bool {
        self != PauliLetter::I && other != PauliLetter::I && self != other
    }

    pub fn dense(self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliLetter::I => CMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            PauliLetter::X => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            PauliLetter::Y => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            PauliLetter::Z => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<PauliLetter> {
        match c.to_ascii_uppercase() {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A power of `i`, stored as the exponent modulo 4. The group {1, i, -1, -i}
/// under multiplication is Z4, so composition is exponent addition and never
/// loses precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn compose(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn conjugate(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    /// Exact complex value; entries are 0.0 and +/-1.0, never rounded trig.
    pub fn as_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            3 => Complex64::new(0.0, -1.0),
            _ => unreachable!(),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        self.compose(rhs)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "+1"),
            1 => write!(f, "+i"),
            2 => write!(f, "-1"),
            3 => write!(f, "-i"),
            _ => unreachable!(),
        }
    }
}

/// A phased Pauli word on 1 or 2 sites: `i^k * (letter_1 (x) letter_2 ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    phase: Phase,
    letters: Vec<PauliLetter>,
}

impl PauliTerm {
    pub fn new(phase: Phase, letters: Vec<PauliLetter>) -> Result<PauliTerm> {
        if letters.is_empty() || letters.len() > MAX_SITES {
            return Err(Error::UnsupportedSiteCount(letters.len()));
        }
        Ok(PauliTerm { phase, letters })
    }

    pub fn single(letter: PauliLetter) -> PauliTerm {
        PauliTerm { phase: Phase::ONE, letters: vec![letter] }
    }

    pub fn identity(site_count: usize) -> Result<PauliTerm> {
        PauliTerm::new(Phase::ONE, vec![PauliLetter::I; site_count])
    }

    /// Parses words like "X", "-iZZ", "iY", "-XY".
    pub fn parse(text: &str) -> Option<PauliTerm> {
        let mut rest = text.trim();
        let mut phase = Phase::ONE;
        if let Some(stripped) = rest.strip_prefix('-') {
            phase = Phase::MINUS_ONE;
            rest = stripped;
        } else if let Some(stripped) = rest.strip_prefix('+') {
            rest = stripped;
        }
        // A leading lowercase i is the imaginary unit, not an identity letter.
        if let Some(stripped) = rest.strip_prefix('i') {
            phase = phase.compose(Phase::I);
            rest = stripped;
        }
        let letters: Option<Vec<_>> = rest.chars().map(PauliLetter::from_symbol).collect();
        PauliTerm::new(phase, letters?).ok()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn site_count(&self) -> usize {
        self.letters.len()
    }

    pub fn with_phase(&self, phase: Phase) -> PauliTerm {
        PauliTerm { phase, letters: self.letters.clone() }
    }

    /// Site-wise product with exact phase bookkeeping.
    pub fn mul(&self, other: &PauliTerm) -> Result<PauliTerm> {
        if self.site_count() != other.site_count() {
            return Err(Error::SiteCountMismatch { left: self.site_count(), right: other.site_count() });
        }
        let mut phase = self.phase.compose(other.phase);
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, c) = a.mul(b);
                phase = phase.compose(Phase::from_exponent(k as i64));
                c
            })
            .collect();
        Ok(PauliTerm { phase, letters })
    }

    /// Kronecker combination of two single-site terms, self on the left.
    pub fn tensor(&self, other: &PauliTerm) -> Result<PauliTerm> {
        if self.site_count() != 1 || other.site_count() != 1 {
            return Err(Error::NotSingleSite);
        }
        Ok(PauliTerm {
            phase: self.phase.compose(other.phase),
            letters: vec![self.letters[0], other.letters[0]],
        })
    }

    /// Two words commute exactly when an even number of sites anticommute.
    /// Phases are central and play no role.
    pub fn commutes_with(&self, other: &PauliTerm) -> Result<bool> {
        if self.site_count() != other.site_count() {
            return Err(Error::SiteCountMismatch { left: self.site_count(), right: other.site_count() });
        }
        let anticommuting = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a.anticommutes_with(b))
            .count();
        Ok(anticommuting % 2 == 0)
    }

    pub fn dense(&self) -> CMatrix {
        let mut m = self.letters[0].dense();
        for letter in &self.letters[1..] {
            m = m.kronecker(&letter.dense());
        }
        m * self.phase.as_complex()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*", self.phase)?;
        for letter in &self.letters {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// A complex-coefficient linear combination of Pauli words, all on the same
/// number of sites. Words are kept in a sorted map so iteration order, display
/// and serialization are deterministic. Coefficients below [`COEFF_EPS`] are
/// dropped on every construction, so "equals a single word" and "is zero" are
/// well-defined questions.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliPolynomial {
    site_count: usize,
    terms: BTreeMap<Vec<PauliLetter>, Complex64>,
}

impl PauliPolynomial {
    pub fn zero(site_count: usize) -> Result<PauliPolynomial> {
        if site_count == 0 || site_count > MAX_SITES {
            return Err(Error::UnsupportedSiteCount(site_count));
        }
        Ok(PauliPolynomial { site_count, terms: BTreeMap::new() })
    }

    pub fn from_term(term: &PauliTerm) -> PauliPolynomial {
        let mut terms = BTreeMap::new();
        terms.insert(term.letters().to_vec(), term.phase().as_complex());
        PauliPolynomial { site_count: term.site_count(), terms }
    }

    pub fn identity(site_count: usize) -> Result<PauliPolynomial> {
        Ok(PauliPolynomial::from_term(&PauliTerm::identity(site_count)?))
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Words and coefficients in sorted word order.
    pub fn terms(&self) -> impl Iterator<Item = (&[PauliLetter], Complex64)> {
        self.terms.iter().map(|(w, &c)| (w.as_slice(), c))
    }

    pub fn coefficient(&self, word: &[PauliLetter]) -> Complex64 {
        self.terms.get(word).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn canonicalize(mut self) -> PauliPolynomial {
        self.terms.retain(|_, c| c.norm() >= COEFF_EPS);
        self
    }

    fn check_sites(&self, other: &PauliPolynomial) -> Result<()> {
        if self.site_count != other.site_count {
            return Err(Error::SiteCountMismatch { left: self.site_count, right: other.site_count });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.check_sites(other)?;
        let mut terms = self.terms.clone();
        for (word, &c) in &other.terms {
            *terms.entry(word.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(PauliPolynomial { site_count: self.site_count, terms }.canonicalize())
    }

    pub fn sub(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> PauliPolynomial {
        let terms: BTreeMap<_, _> =
            self.terms.iter().map(|(w, &c)| (w.clone(), c * factor)).collect();
        PauliPolynomial { site_count: self.site_count, terms }.canonicalize()
    }

    /// Distributes the exact word product over both coefficient lists.
    pub fn mul(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.check_sites(other)?;
        let mut terms: BTreeMap<Vec<PauliLetter>, Complex64> = BTreeMap::new();
        for (wa, &ca) in &self.terms {
            let ta = PauliTerm { phase: Phase::ONE, letters: wa.clone() };
            for (wb, &cb) in &other.terms {
                let tb = PauliTerm { phase: Phase::ONE, letters: wb.clone() };
                let product = ta.mul(&tb)?;
                let coeff = ca * cb * product.phase().as_complex();
                *terms.entry(product.letters().to_vec()).or_insert(Complex64::new(0.0, 0.0)) += coeff;
            }
        }
        Ok(PauliPolynomial { site_count: self.site_count, terms }.canonicalize())
    }

    pub fn commutator(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Symbolic commutation: the commutator canonicalizes to zero.
    pub fn commutes_with(&self, other: &PauliPolynomial) -> Result<bool> {
        Ok(self.commutator(other)?.is_zero())
    }

    /// Hermitian exactly when every stored coefficient is real, because the
    /// words themselves are Hermitian. Tolerance [`COEFF_EPS`] on the
    /// imaginary parts.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < COEFF_EPS)
    }

    /// Largest coefficient magnitude in the difference, i.e. an exact
    /// symbolic distance between polynomials.
    pub fn distance(&self, other: &PauliPolynomial) -> Result<f64> {
        self.check_sites(other)?;
        let mut diff = self.terms.clone();
        for (word, &c) in &other.terms {
            *diff.entry(word.clone()).or_insert(Complex64::new(0.0, 0.0)) -= c;
        }
        Ok(diff.values().map(|c| c.norm()).fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &PauliPolynomial, tol: f64) -> Result<bool> {
        Ok(self.distance(other)? <= tol)
    }

    pub fn dense(&self) -> CMatrix {
        let dim = 1usize << self.site_count;
        let mut m = CMatrix::zeros(dim, dim);
        for (word, &c) in &self.terms {
            let term = PauliTerm { phase: Phase::ONE, letters: word.clone() };
            m += term.dense() * c;
        }
        m
    }

    /// Coefficient of the all-identity word.
    pub fn identity_coefficient(&self) -> Complex64 {
        self.coefficient(&vec![PauliLetter::I; self.site_count])
    }

    /// True when the polynomial is exactly `coefficient * identity`, i.e. no
    /// other word survives canonicalization.
    pub fn is_scalar_identity(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains_key(&vec![PauliLetter::I; self.site_count])
    }
}

impl fmt::Display for PauliPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (word, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.im.abs() < COEFF_EPS {
                write!(f, "({:+.6})", c.re)?;
            } else if c.re.abs() < COEFF_EPS {
                write!(f, "({:+.6}i)", c.im)?;
            } else {
                write!(f, "({:+.6}{:+.6}i)", c.re, c.im)?;
            }
            write!(f, "*")?;
            for letter in word {
                write!(f, "{letter}")?;
            }
        }
        Ok(())
    }
}

/// Max absolute entry of a dense matrix; the norm used for numerical
/// commutator and identity checks.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliLetter::*;

    fn term(text: &str) -> PauliTerm {
        PauliTerm::parse(text).unwrap()
    }

    fn poly(text: &str) -> PauliPolynomial {
        PauliPolynomial::from_term(&term(text))
    }

    #[test]
    fn single_site_product_table() {
        // The full table, frozen: products of distinct letters cycle with
        // phase +/-i, squares collapse to the identity.
        let cases = [
            ("X", "Y", "iZ"),
            ("Y", "X", "-iZ"),
            ("Y", "Z", "iX"),
            ("Z", "Y", "-iX"),
            ("Z", "X", "iY"),
            ("X", "Z", "-iY"),
            ("X", "X", "I"),
            ("Y", "Y", "I"),
            ("Z", "Z", "I"),
            ("I", "X", "X"),
            ("Y", "I", "Y"),
            ("I", "I", "I"),
        ];
        for (a, b, expect) in cases {
            assert_eq!(term(a).mul(&term(b)).unwrap(), term(expect), "{a} * {b}");
        }
    }

    #[test]
    fn phases_compose_modulo_four() {
        let i = Phase::I;
        assert_eq!(i.compose(i), Phase::MINUS_ONE);
        assert_eq!(i.compose(i).compose(i), Phase::MINUS_I);
        assert_eq!(Phase::from_exponent(4), Phase::ONE);
        assert_eq!(Phase::from_exponent(-1), Phase::MINUS_I);
        assert_eq!(Phase::MINUS_I.conjugate(), Phase::I);
        assert_eq!(Phase::MINUS_ONE.conjugate(), Phase::MINUS_ONE);
    }

    #[test]
    fn two_site_product_collects_site_phases() {
        // (X(x)X) * (Y(x)Y) = (XY)(x)(XY) = (iZ)(x)(iZ) = -(Z(x)Z)
        let xx = term("XX");
        let yy = term("YY");
        assert_eq!(xx.mul(&yy).unwrap(), term("-ZZ"));
        // and with operands swapped the phase is identical: (-iZ)(x)(-iZ)
        assert_eq!(yy.mul(&xx).unwrap(), term("-ZZ"));
    }

    #[test]
    fn tensor_is_left_factor_first_and_adds_phases() {
        let ix = term("iX");
        let y = term("Y");
        let t = ix.tensor(&y).unwrap();
        assert_eq!(t, term("iXY"));
        assert!(term("XX").tensor(&y).is_err());
    }

    #[test]
    fn site_count_mismatch_is_an_error() {
        assert!(term("X").mul(&term("XX")).is_err());
        assert!(term("X").commutes_with(&term("XX")).is_err());
    }

    #[test]
    fn commutation_counts_anticommuting_sites() {
        assert!(!term("X").commutes_with(&term("Y")).unwrap());
        assert!(term("X").commutes_with(&term("X")).unwrap());
        assert!(term("X").commutes_with(&term("I")).unwrap());
        // two anticommuting sites -> even -> commute
        assert!(term("XX").commutes_with(&term("YY")).unwrap());
        assert!(term("XY").commutes_with(&term("YX")).unwrap());
        // one anticommuting site -> odd -> anticommute
        assert!(!term("XI").commutes_with(&term("YI")).unwrap());
        assert!(term("XI").commutes_with(&term("IY")).unwrap());
    }

    #[test]
    fn dense_letters_match_hand_written_matrices() {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(X.dense(), CMatrix::from_row_slice(2, 2, &[o, l, l, o]));
        assert_eq!(Y.dense(), CMatrix::from_row_slice(2, 2, &[o, -i, i, o]));
        assert_eq!(Z.dense(), CMatrix::from_row_slice(2, 2, &[l, o, o, -l]));
        assert_eq!(I.dense(), CMatrix::from_row_slice(2, 2, &[l, o, o, l]));
    }

    #[test]
    fn dense_oracle_agrees_with_symbolic_products() {
        // Exhaustive over both sites: the numeric product of dense matrices
        // equals the dense form of the symbolic product, entry for entry.
        for &a1 in &PauliLetter::ALL {
            for &b1 in &PauliLetter::ALL {
                let ta = PauliTerm::single(a1);
                let tb = PauliTerm::single(b1);
                let symbolic = ta.mul(&tb).unwrap().dense();
                let numeric = ta.dense() * tb.dense();
                assert_eq!(symbolic, numeric, "{a1:?} * {b1:?}");
                for &a2 in &PauliLetter::ALL {
                    for &b2 in &PauliLetter::ALL {
                        let ta = PauliTerm::new(Phase::ONE, vec![a1, a2]).unwrap();
                        let tb = PauliTerm::new(Phase::ONE, vec![b1, b2]).unwrap();
                        let symbolic = ta.mul(&tb).unwrap().dense();
                        let numeric = ta.dense() * tb.dense();
                        assert_eq!(symbolic, numeric);
                    }
                }
            }
        }
    }

    #[test]
    fn commutation_matches_dense_commutator_exhaustively() {
        for &a1 in &PauliLetter::ALL {
            for &a2 in &PauliLetter::ALL {
                for &b1 in &PauliLetter::ALL {
                    for &b2 in &PauliLetter::ALL {
                        let ta = PauliTerm::new(Phase::ONE, vec![a1, a2]).unwrap();
                        let tb = PauliTerm::new(Phase::ONE, vec![b1, b2]).unwrap();
                        let comm = ta.dense() * tb.dense() - tb.dense() * ta.dense();
                        let vanishes = max_norm(&comm) == 0.0;
                        assert_eq!(ta.commutes_with(&tb).unwrap(), vanishes, "{ta} vs {tb}");
                    }
                }
            }
        }
    }

    #[test]
    fn squares_of_words_are_plus_or_minus_identity() {
        for &a in &PauliLetter::ALL {
            for &b in &PauliLetter::ALL {
                for k in 0..4 {
                    let t = PauliTerm::new(Phase::from_exponent(k), vec![a, b]).unwrap();
                    let sq = t.mul(&t).unwrap();
                    assert_eq!(sq.letters(), &[I, I]);
                    assert!(sq.phase() == Phase::ONE || sq.phase() == Phase::MINUS_ONE);
                }
            }
        }
    }

    #[test]
    fn polynomial_addition_cancels_exactly() {
        let p = poly("X").add(&poly("Y")).unwrap();
        let q = p.sub(&poly("Y")).unwrap();
        assert_eq!(q, poly("X"));
        let zero = q.sub(&poly("X")).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.term_count(), 0);
    }

    #[test]
    fn polynomial_product_frozen_example() {
        // (X + Y)(X - Y) = I - XY + YX - I = -iZ + -iZ = -2i Z
        let sum = poly("X").add(&poly("Y")).unwrap();
        let diff = poly("X").sub(&poly("Y")).unwrap();
        let prod = sum.mul(&diff).unwrap();
        assert_eq!(prod.term_count(), 1);
        let z = prod.coefficient(&[Z]);
        assert_eq!(z, Complex64::new(0.0, -2.0));
    }

    #[test]
    fn two_site_polynomial_product_is_exact() {
        let xx = poly("XX");
        let yy = poly("YY");
        let zz = poly("ZZ");
        let prod = xx.mul(&yy).unwrap();
        assert_eq!(prod, zz.scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn hermiticity_reads_coefficients() {
        assert!(poly("X").add(&poly("Z")).unwrap().is_hermitian());
        assert!(!poly("iZ").is_hermitian());
        // i*X - i*X + Z canonicalizes to Z, which is Hermitian.
        let p = poly("iX").add(&poly("-iX")).unwrap().add(&poly("Z")).unwrap();
        assert!(p.is_hermitian());
    }

    #[test]
    fn scalar_identity_detection() {
        assert!(poly("-I").is_scalar_identity());
        assert!(!poly("Z").is_scalar_identity());
        assert!(!poly("I").add(&poly("Z")).unwrap().is_scalar_identity());
        assert_eq!(poly("-I").identity_coefficient(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn dense_lowering_of_polynomials_matches_term_sum() {
        let p = poly("XX").scale(Complex64::new(0.5, 0.0)).add(&poly("iZZ")).unwrap();
        let expect = term("XX").dense() * Complex64::new(0.5, 0.0) + term("iZZ").dense();
        assert_eq!(p.dense(), expect);
    }
}
