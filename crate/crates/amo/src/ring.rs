//! A minimal commutative-ring interface.
//!
//! The continuant recurrences and family sums are the same formulas whether
//! the entries are rationals, floats, residues mod x^q - 1, or rational
//! functions.  Contexts are value-level (not nullary constructors) because
//! some rings carry data: a cyclotomic context must know its modulus q to
//! mint zero and one.

use crate::exactfield::{BigQ, CycloElement, RationalFunction};
use num_traits::{One, Zero};

pub trait Ring {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.zero())
    }

    fn sum(&self, it: impl IntoIterator<Item = Self::Elem>) -> Self::Elem {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, &x))
    }

    fn product(&self, it: impl IntoIterator<Item = Self::Elem>) -> Self::Elem {
        it.into_iter().fold(self.one(), |acc, x| self.mul(&acc, &x))
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigQ;

    fn zero(&self) -> BigQ {
        BigQ::zero()
    }
    fn one(&self) -> BigQ {
        BigQ::one()
    }
    fn from_i64(&self, n: i64) -> BigQ {
        crate::exactfield::bigq(n)
    }
    fn add(&self, a: &BigQ, b: &BigQ) -> BigQ {
        a + b
    }
    fn sub(&self, a: &BigQ, b: &BigQ) -> BigQ {
        a - b
    }
    fn mul(&self, a: &BigQ, b: &BigQ) -> BigQ {
        a * b
    }
    fn neg(&self, a: &BigQ) -> BigQ {
        -a
    }
    fn eq(&self, a: &BigQ, b: &BigQ) -> bool {
        a == b
    }
}

/// f64 with exact equality; callers needing tolerances compare outside the
/// ring interface.
#[derive(Clone, Copy, Debug, Default)]
pub struct Floats;

impl Ring for Floats {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn from_i64(&self, n: i64) -> f64 {
        n as f64
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn eq(&self, a: &f64, b: &f64) -> bool {
        a == b
    }
}

/// Q[x]/(x^q - 1) for a fixed modulus q.
#[derive(Clone, Copy, Debug)]
pub struct Cyclo {
    pub q: usize,
}

impl Ring for Cyclo {
    type Elem = CycloElement;

    fn zero(&self) -> CycloElement {
        CycloElement::zero(self.q)
    }
    fn one(&self) -> CycloElement {
        CycloElement::one(self.q)
    }
    fn from_i64(&self, n: i64) -> CycloElement {
        CycloElement::scalar(self.q, crate::exactfield::bigq(n))
    }
    fn add(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a.add(b).expect("modulus fixed by context")
    }
    fn sub(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a.sub(b).expect("modulus fixed by context")
    }
    fn mul(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a.mul(b).expect("modulus fixed by context")
    }
    fn neg(&self, a: &CycloElement) -> CycloElement {
        a.neg()
    }
    fn eq(&self, a: &CycloElement, b: &CycloElement) -> bool {
        a == b
    }
}

/// The field of rational functions in x over Q.
#[derive(Clone, Copy, Debug, Default)]
pub struct RatFuncs;

impl Ring for RatFuncs {
    type Elem = RationalFunction;

    fn zero(&self) -> RationalFunction {
        RationalFunction::zero()
    }
    fn one(&self) -> RationalFunction {
        RationalFunction::one()
    }
    fn from_i64(&self, n: i64) -> RationalFunction {
        RationalFunction::constant(crate::exactfield::bigq(n))
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }
    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }
    fn eq(&self, a: &RationalFunction, b: &RationalFunction) -> bool {
        a == b
    }
}
