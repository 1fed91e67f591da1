//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Every algebraic object in the crate is generic over [`Field`]. The field
//! value itself is a small context object (a prime modulus, or nothing for
//! ℚ) and elements are plain values manipulated through it, so `F_p`
//! arithmetic compiles down to `u32`/`u64` operations.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Default working characteristic for generic-characteristic experiments.
pub const DEFAULT_PRIME: u32 = 32003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field mismatch: expected {expected}, found {found}")]
    Descriptor { expected: FieldKind, found: FieldKind },
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Descriptor of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u32),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F {p}"),
        }
    }
}

/// A field element detached from any field context.
///
/// Used at API boundaries (files, matrices assembled from mixed sources);
/// internal arithmetic uses [`Field::Elem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Modular { value: u32, modulus: u32 },
}

impl FieldElement {
    pub fn rational(v: BigRational) -> Self {
        // BigRational keeps itself in lowest terms with positive denominator.
        FieldElement::Rational(v)
    }

    pub fn modular(value: i64, modulus: u32) -> Self {
        let v = value.rem_euclid(modulus as i64) as u32;
        FieldElement::Modular { value: v, modulus }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            FieldElement::Rational(_) => FieldKind::Rational,
            FieldElement::Modular { modulus, .. } => FieldKind::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Modular { value, .. } => *value == 0,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Arithmetic in an exact field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Uniform draw (F_p) or a small random integer (ℚ).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn to_element(&self, a: &Self::Elem) -> FieldElement;
    fn from_element(&self, e: &FieldElement) -> Result<Self::Elem, FieldError>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// `dst[j] += c * src[j]` on dense rows.
    fn axpy(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(d, &self.mul(c, s));
            }
        }
    }

    /// Rank of a dense matrix given by rows; destroys the input.
    fn dense_rank(&self, rows: Vec<Vec<Self::Elem>>) -> usize {
        crate::linalg::dense_rank_generic(self, rows)
    }

    /// Parse a decimal integer or `a/b` fraction into the field.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let n = BigInt::from_str(num).map_err(|_| FieldError::Parse(s.to_string()))?;
        let n = self.from_bigint(&n);
        match den {
            None => Ok(n),
            Some(d) => {
                let d = BigInt::from_str(d).map_err(|_| FieldError::Parse(s.to_string()))?;
                self.div(&n, &self.from_bigint(&d))
            }
        }
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        self.to_element(a).to_string()
    }

    /// Whether `a` prints with a leading minus sign (used by the polynomial printer).
    fn is_negative_repr(&self, a: &Self::Elem) -> bool {
        let _ = a;
        false
    }
}

/// The prime field `F_p` with `p < 2^31`; elements are canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn default_field() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.reduce(acc as u64 * base as u64);
            }
            base = self.reduce(base as u64 * base as u64);
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn from_bigint(&self, v: &BigInt) -> u32 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a + *b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(*a as u64 * *b as u64)
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p as u64 - 2))
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn to_element(&self, a: &u32) -> FieldElement {
        FieldElement::Modular { value: *a, modulus: self.p }
    }
    fn from_element(&self, e: &FieldElement) -> Result<u32, FieldError> {
        match e {
            FieldElement::Modular { value, modulus } if *modulus == self.p => Ok(*value),
            other => Err(FieldError::Descriptor { expected: self.kind(), found: other.kind() }),
        }
    }

    fn axpy(&self, dst: &mut [u32], c: &u32, src: &[u32]) {
        let p = self.p as u64;
        let c = *c as u64;
        for (d, s) in dst.iter_mut().zip(src) {
            *d = ((*d as u64 + c * *s as u64) % p) as u32;
        }
    }

    fn dense_rank(&self, rows: Vec<Vec<u32>>) -> usize {
        crate::linalg::dense_rank_mod_p(self.p, rows)
    }

    /// Residues above p/2 print as negatives, so `p - 1` reads as `-1`.
    fn is_negative_repr(&self, a: &u32) -> bool {
        *a > self.p / 2
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-100..=100))
    }
    fn to_element(&self, a: &BigRational) -> FieldElement {
        FieldElement::Rational(a.clone())
    }
    fn from_element(&self, e: &FieldElement) -> Result<BigRational, FieldError> {
        match e {
            FieldElement::Rational(r) => Ok(r.clone()),
            other => Err(FieldError::Descriptor { expected: self.kind(), found: other.kind() }),
        }
    }
    fn dense_rank(&self, rows: Vec<Vec<BigRational>>) -> usize {
        crate::linalg::fraction_free_rank(rows)
    }
    fn is_negative_repr(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(32003).is_ok());
        assert_eq!(PrimeField::new(32004), Err(FieldError::NotPrime(32004)));
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_i64(15), 1);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse_elem("-2/3").unwrap(), f.mul(&5, &f.inv(&3).unwrap()));
    }

    #[test]
    fn rationals_stay_in_lowest_terms() {
        let q = RationalField;
        let a = q.parse_elem("6/-4").unwrap();
        assert_eq!(a, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert!(a.denom().is_positive());
        assert_eq!(q.format_elem(&a), "-3/2");
    }

    #[test]
    fn mixed_descriptor_is_an_error() {
        let f = PrimeField::new(7).unwrap();
        let e = FieldElement::modular(3, 11);
        assert!(matches!(f.from_element(&e), Err(FieldError::Descriptor { .. })));
        assert!(RationalField.from_element(&e).is_err());
        assert_eq!(f.from_element(&FieldElement::modular(-4, 7)), Ok(3));
    }
}
