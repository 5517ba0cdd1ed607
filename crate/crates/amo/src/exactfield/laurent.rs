//! Laurent polynomials over the rationals.
//!
//! These carry the x^-i + x^i building blocks of the trigonometric
//! identities before any clearing of negative powers happens.  The map
//! never stores a zero coefficient, so structural equality is semantic
//! equality.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::bigq::{bigq_to_f64, BigQ};
use super::poly::QPoly;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigQ>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigQ::from_integer(1.into()))
    }

    pub fn monomial(exp: i64, coeff: BigQ) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn constant(c: BigQ) -> Self {
        Self::monomial(0, c)
    }

    /// x^-i + x^i; collapses to the constant 2 at i = 0.
    pub fn symmetric_pair(i: i64) -> Self {
        let one = || BigQ::from_integer(1.into());
        if i == 0 {
            return Self::constant(one() + one());
        }
        let mut terms = BTreeMap::new();
        terms.insert(-i, one());
        terms.insert(i, one());
        LaurentPoly { terms }
    }

    /// x^-i - x^i; zero at i = 0.
    pub fn antisymmetric_pair(i: i64) -> Self {
        let one = || BigQ::from_integer(1.into());
        if i == 0 {
            return Self::zero();
        }
        let mut terms = BTreeMap::new();
        terms.insert(-i, one());
        terms.insert(i, -one());
        LaurentPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, BigQ)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> BigQ {
        self.terms.get(&exp).cloned().unwrap_or_else(BigQ::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, coeff: BigQ) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &BigQ) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.checked_add(*e2).expect("Laurent exponent overflow");
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.checked_add(k).expect("Laurent exponent overflow"), c.clone()))
                .collect(),
        }
    }

    /// The substitution x -> 1/x.
    pub fn mirror(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation; x must be nonzero when negative exponents occur.
    pub fn eval(&self, x: &BigQ) -> BigQ {
        let mut acc = BigQ::zero();
        for (e, c) in &self.terms {
            acc += c * super::bigq::bigq_pow(x, *e);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| bigq_to_f64(c) * x.powi(*e as i32))
            .sum()
    }

    /// (ordinary polynomial, shift) with self = x^shift * poly and
    /// poly(0) != 0 when self is nonzero.
    pub fn to_poly_and_shift(&self) -> (QPoly, i64) {
        match self.min_exp() {
            None => (QPoly::zero(), 0),
            Some(m) => {
                let top = self.max_exp().unwrap();
                let mut c = vec![BigQ::zero(); (top - m) as usize + 1];
                for (e, v) in &self.terms {
                    c[(e - m) as usize] = v.clone();
                }
                (QPoly::from_coeffs(c), m)
            }
        }
    }

    pub fn from_poly_and_shift(p: &QPoly, shift: i64) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (shift + i as i64, c.clone())),
        )
    }
}
