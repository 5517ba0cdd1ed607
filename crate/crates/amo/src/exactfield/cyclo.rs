//! The residue ring Q[x]/(x^q - 1) and cyclotomic polynomials.
//!
//! The exact route to the vanishing theorem works here: the cosine value
//! 2 cos(2 pi j p/q) becomes the residue x^(jp mod q) + x^(-jp mod q), a sum
//! of family products becomes a single residue, and "equals zero at every
//! primitive q-th root of unity" becomes divisibility by the q-th cyclotomic
//! polynomial, a remainder computation over Q.

use num_traits::Zero;

use super::bigq::BigQ;
use super::poly::{QPoly, ZPoly};
use crate::error::{Error, Result};

/// Element of Q[x]/(x^q - 1), stored as the degree < q representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    q: usize,
    coeffs: Vec<BigQ>,
}

impl CycloElement {
    pub fn zero(q: usize) -> Self {
        assert!(q >= 1);
        CycloElement { q, coeffs: vec![BigQ::zero(); q] }
    }

    pub fn one(q: usize) -> Self {
        Self::monomial(q, 0)
    }

    pub fn scalar(q: usize, c: BigQ) -> Self {
        let mut e = Self::zero(q);
        e.coeffs[0] = c;
        e
    }

    /// x^j reduced mod x^q - 1; j may be any integer.
    pub fn monomial(q: usize, j: i64) -> Self {
        let mut e = Self::zero(q);
        e.coeffs[j.rem_euclid(q as i64) as usize] = BigQ::from_integer(1.into());
        e
    }

    /// x^j + x^-j, the residue representing 2 cos(2 pi j / q).
    pub fn cos_pair(q: usize, j: i64) -> Self {
        Self::monomial(q, j).add(&Self::monomial(q, -j)).expect("same modulus")
    }

    pub fn modulus(&self) -> usize {
        self.q
    }

    pub fn coeffs(&self) -> &[BigQ] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_modulus(&self, o: &Self) -> Result<()> {
        if self.q != o.q {
            return Err(Error::ModulusMismatch(self.q, o.q));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_modulus(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElement { q: self.q, coeffs })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_modulus(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElement { q: self.q, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycloElement { q: self.q, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &BigQ) -> Self {
        CycloElement { q: self.q, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Cyclic convolution: exponents wrap mod q.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_modulus(o)?;
        let q = self.q;
        let mut coeffs = vec![BigQ::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % q;
                coeffs[k] += a * b;
            }
        }
        Ok(CycloElement { q, coeffs })
    }

    fn as_qpoly(&self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.clone())
    }

    /// Remainder of the representative modulo the q-th cyclotomic polynomial.
    /// Zero exactly when the element vanishes at every primitive q-th root of
    /// unity.
    pub fn residue_mod_cyclotomic(&self) -> QPoly {
        let phi = QPoly::from_zpoly(&cyclotomic_poly(self.q));
        self.as_qpoly().divrem(&phi).1
    }

    pub fn vanishes_at_primitive_roots(&self) -> bool {
        self.residue_mod_cyclotomic().is_zero()
    }

    /// Evaluates the representative at e^(2 pi i p/q) and returns the real
    /// part; the imaginary part of all elements used here vanishes by the
    /// x^j + x^-j symmetry.
    pub fn eval_at_root_f64(&self, p: i64) -> f64 {
        let q = self.q as f64;
        let mut re = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * (p as f64) * (j as f64) / q;
            re += super::bigq::bigq_to_f64(c) * ang.cos();
        }
        re
    }
}

/// mu * (x^(jp) + x^(-jp)) in Q[x]/(x^q - 1): the exact image of
/// lambda cos(2 pi j p/q) with mu = lambda/2.  At jp = 0 mod q this is the
/// scalar 2 mu.
pub fn cyclo_cos_term(q: usize, jp: i64, mu: &BigQ) -> CycloElement {
    CycloElement::cos_pair(q, jp).scale(mu)
}

/// The q-th cyclotomic polynomial, by the recursion
/// Phi_q = (x^q - 1) / prod_{d | q, d < q} Phi_d with exact integer division.
pub fn cyclotomic_poly(q: usize) -> ZPoly {
    assert!(q >= 1);
    if q == 1 {
        return ZPoly::from_i64_coeffs(&[-1, 1]);
    }
    let mut den = ZPoly::one();
    for d in 1..q {
        if q % d == 0 {
            den = den.mul(&cyclotomic_poly(d));
        }
    }
    ZPoly::x_pow_minus_one(q).div_exact_monic(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::bigq::{bigq, bigq_ratio};

    #[test]
    fn cyclotomic_small_table() {
        assert_eq!(cyclotomic_poly(1), ZPoly::from_i64_coeffs(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ZPoly::from_i64_coeffs(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), ZPoly::from_i64_coeffs(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), ZPoly::from_i64_coeffs(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ZPoly::from_i64_coeffs(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ZPoly::from_i64_coeffs(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_degrees_are_totients() {
        let totients = [
            (5, 4),
            (8, 4),
            (9, 6),
            (10, 4),
            (24, 8),
            (30, 8),
            (60, 16),
            // 105 is the first index with a coefficient of magnitude 2.
            (105, 48),
        ];
        for (q, phi) in totients {
            assert_eq!(cyclotomic_poly(q).degree(), phi, "q = {q}");
        }
        let c105 = cyclotomic_poly(105);
        assert!(c105.coeffs().iter().any(|c| c == &num_bigint::BigInt::from(-2)));
    }

    #[test]
    fn product_over_divisors_reconstructs_x_pow_minus_one() {
        for q in [6usize, 12, 18] {
            let mut prod = ZPoly::one();
            for d in 1..=q {
                if q % d == 0 {
                    prod = prod.mul(&cyclotomic_poly(d));
                }
            }
            assert_eq!(prod, ZPoly::x_pow_minus_one(q), "q = {q}");
        }
    }

    #[test]
    fn monomial_wraps_exponents() {
        let a = CycloElement::monomial(5, 7);
        let b = CycloElement::monomial(5, 2);
        assert_eq!(a, b);
        assert_eq!(CycloElement::monomial(5, -1), CycloElement::monomial(5, 4));
    }

    #[test]
    fn mul_is_cyclic_convolution() {
        // x^3 * x^4 = x^7 = x^2 mod x^5 - 1.
        let p = CycloElement::monomial(5, 3).mul(&CycloElement::monomial(5, 4)).unwrap();
        assert_eq!(p, CycloElement::monomial(5, 2));
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        let a = CycloElement::one(4);
        let b = CycloElement::one(5);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn geometric_sum_vanishes_at_primitive_roots() {
        // 1 + x + ... + x^(q-1) kills every primitive q-th root for q > 1.
        for q in [3usize, 4, 6, 10] {
            let mut s = CycloElement::zero(q);
            for j in 0..q as i64 {
                s = s.add(&CycloElement::monomial(q, j)).unwrap();
            }
            assert!(s.vanishes_at_primitive_roots(), "q = {q}");
            assert!(!s.is_zero());
        }
    }

    #[test]
    fn nonvanishing_witness_is_reported() {
        let e = CycloElement::scalar(7, bigq_ratio(3, 2));
        assert!(!e.vanishes_at_primitive_roots());
        assert_eq!(e.residue_mod_cyclotomic().coeff(0), bigq_ratio(3, 2));
    }

    #[test]
    fn cos_pair_sum_rule() {
        // (x + x^-1)^2 = x^2 + x^-2 + 2 mod x^q - 1, the double angle rule.
        let q = 9;
        let lhs = CycloElement::cos_pair(q, 1).mul(&CycloElement::cos_pair(q, 1)).unwrap();
        let rhs = CycloElement::cos_pair(q, 2)
            .add(&CycloElement::scalar(q, bigq(2)))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cos_term_degenerates_to_scalar() {
        let t = cyclo_cos_term(6, 12, &bigq_ratio(1, 2));
        assert_eq!(t, CycloElement::scalar(6, bigq(1)));
    }
}
