//! Rational functions in x over Q, kept in a canonical reduced form.
//!
//! Canonical form: numerator is a Laurent polynomial (it may keep negative
//! powers of x), denominator is an ordinary monic polynomial with nonzero
//! constant term, and after clearing the numerator's power-of-x shift the
//! two are coprime.  With powers of x split off this way the form is unique,
//! so structural equality is equality of functions.

use num_traits::Zero;

use super::bigq::BigQ;
use super::laurent::LaurentPoly;
use super::poly::{qpoly_gcd, QPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: QPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: LaurentPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: LaurentPoly::one(), den: QPoly::one() }
    }

    pub fn constant(c: BigQ) -> Self {
        RationalFunction { num: LaurentPoly::constant(c), den: QPoly::one() }
    }

    /// A bare Laurent polynomial is already canonical over denominator 1.
    pub fn from_laurent(num: LaurentPoly) -> Self {
        RationalFunction { num, den: QPoly::one() }
    }

    /// x^-i + x^i over denominator 1.
    pub fn symmetric_pair(i: i64) -> Self {
        Self::from_laurent(LaurentPoly::symmetric_pair(i))
    }

    /// x^-i - x^i over denominator 1.
    pub fn antisymmetric_pair(i: i64) -> Self {
        Self::from_laurent(LaurentPoly::antisymmetric_pair(i))
    }

    /// Builds num/den and reduces to canonical form.  Fails only on a zero
    /// denominator.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Shift the denominator to an ordinary polynomial with d(0) != 0 and
        // compensate in the numerator: num/den = num*x^-m / (den*x^-m).
        let (d, m) = den.to_poly_and_shift();
        let num = num.shift(-m);
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (a, e) = num.to_poly_and_shift();
        let g = qpoly_gcd(&a, &d);
        let (a, d) = if g.degree() > 0 {
            (a.divrem(&g).0, d.divrem(&g).0)
        } else {
            (a, d)
        };
        let lc_inv = d.lc().clone().recip();
        let a = a.scale(&lc_inv);
        Ok(RationalFunction {
            num: LaurentPoly::from_poly_and_shift(&a, e),
            den: d.monic(),
        })
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_as_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_poly_and_shift(&self.den, 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self
            .num
            .mul(&o.den_as_laurent())
            .add(&o.num.mul(&self.den_as_laurent()));
        let den = self.den_as_laurent().mul(&o.den_as_laurent());
        Self::new(num, den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.num);
        let den = self.den_as_laurent().mul(&o.den_as_laurent());
        Self::new(num, den).expect("nonzero denominators")
    }

    pub fn scale(&self, s: &BigQ) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den_as_laurent(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation at a nonzero rational where the denominator does not
    /// vanish.
    pub fn eval(&self, x: &BigQ) -> Result<BigQ> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}
