//! Dense univariate polynomials over the integers and the rationals.
//!
//! `ZPoly` exists for the two places where integer coefficients are the
//! natural habitat: cyclotomic polynomials and the subresultant gcd, which
//! avoids the coefficient explosion of naive rational remainder sequences.
//! `QPoly` is the workhorse denominator/remainder type for canonical
//! rational functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::bigq::{bigq_to_f64, BigQ};

/// Integer polynomial, ascending coefficients, no trailing zeros (zero = empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

fn trim_int(c: &mut Vec<BigInt>) {
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        trim_int(&mut coeffs);
        ZPoly { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^n - 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -BigInt::one();
        c[n] = BigInt::one();
        ZPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree with the convention deg 0 = 0; callers guard is_zero themselves.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn neg(&self) -> Self {
        ZPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.coeffs.iter().enumerate() {
            c[i] -= x;
        }
        Self::from_coeffs(c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    fn mul_scalar(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        ZPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    fn div_scalar_exact(&self, s: &BigInt) -> Self {
        assert!(!s.is_zero());
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(s);
                    assert!(r.is_zero(), "inexact scalar division in polynomial gcd");
                    q
                })
                .collect(),
        }
    }

    /// Exact quotient by a monic divisor; panics if the division leaves a
    /// remainder, which would mean the caller's divisibility argument failed.
    pub fn div_exact_monic(&self, d: &Self) -> Self {
        assert!(!d.is_zero() && d.lc().is_one(), "divisor must be monic");
        if self.is_zero() {
            return Self::zero();
        }
        assert!(self.degree() >= d.degree());
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let qd = self.degree() - dd;
        let mut q = vec![BigInt::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let c = std::mem::take(&mut rem[k + dd]);
            if !c.is_zero() {
                for (i, b) in d.coeffs.iter().enumerate().take(dd) {
                    rem[k + i] -= &c * b;
                }
            }
            q[k] = c;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact monic division");
        Self::from_coeffs(q)
    }

    /// gcd of all coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// self / content, normalized to positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn eval_bigq(&self, x: &BigQ) -> BigQ {
        let mut acc = BigQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigQ::from_integer(c.clone());
        }
        acc
    }
}

/// Pseudo-remainder: returns r with lc(b)^(deg a - deg b + 1) * a = q*b + r.
fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    debug_assert!(!b.is_zero() && a.degree() >= b.degree());
    let lb = b.lc().clone();
    let mut e = (a.degree() - b.degree() + 1) as i64;
    let mut r = a.clone();
    while !r.is_zero() && r.degree() >= b.degree() {
        let shift = r.degree() - b.degree();
        let lr = r.lc().clone();
        // r <- lb*r - lr * x^shift * b
        let mut shifted = vec![BigInt::zero(); shift];
        shifted.extend(b.coeffs.iter().map(|c| c * &lr));
        r = r.mul_scalar(&lb).sub(&ZPoly::from_coeffs(shifted));
        e -= 1;
    }
    let mut scale = BigInt::one();
    for _ in 0..e {
        scale *= &lb;
    }
    r.mul_scalar(&scale)
}

/// Primitive gcd of integer polynomials via the subresultant pseudo-remainder
/// sequence, which keeps intermediate coefficients polynomially bounded.
pub fn zpoly_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (mut big, mut small) = if a.degree() >= b.degree() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    if small.degree() == 0 {
        return ZPoly::one();
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = big.degree() - small.degree();
        let r = pseudo_rem(&big, &small);
        if r.is_zero() {
            return small.primitive_part();
        }
        if r.degree() == 0 {
            return ZPoly::one();
        }
        let mut hd = BigInt::one();
        for _ in 0..delta {
            hd *= &h;
        }
        big = small;
        small = r.div_scalar_exact(&(&g * &hd));
        g = big.lc().clone();
        if delta > 0 {
            // h <- g^delta / h^(delta-1), exact by the subresultant theory.
            let mut num = BigInt::one();
            for _ in 0..delta {
                num *= &g;
            }
            let mut den = BigInt::one();
            for _ in 0..delta - 1 {
                den *= &h;
            }
            let (q, rr) = num.div_rem(&den);
            assert!(rr.is_zero());
            h = q;
        }
    }
}

/// Rational polynomial, ascending coefficients, no trailing zeros (zero = empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigQ>,
}

fn trim_q(c: &mut Vec<BigQ>) {
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![BigQ::one()] }
    }

    pub fn constant(c: BigQ) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigQ>) -> Self {
        trim_q(&mut coeffs);
        QPoly { coeffs }
    }

    pub fn from_zpoly(z: &ZPoly) -> Self {
        QPoly { coeffs: z.coeffs().iter().map(|c| BigQ::from_integer(c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigQ] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigQ {
        self.coeffs.get(i).cloned().unwrap_or_else(BigQ::zero)
    }

    pub fn lc(&self) -> &BigQ {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn neg(&self) -> Self {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = vec![BigQ::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.coeffs.iter().enumerate() {
            c[i] += x;
        }
        Self::from_coeffs(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigQ::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &BigQ) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Long division: (quotient, remainder) with deg rem < deg divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.degree() < d.degree() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let qd = self.degree() - dd;
        let inv_lc = d.lc().clone().recip();
        let mut q = vec![BigQ::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let c = std::mem::replace(&mut rem[k + dd], BigQ::zero()) * &inv_lc;
            if !c.is_zero() {
                for (i, b) in d.coeffs.iter().enumerate().take(dd) {
                    let t = &c * b;
                    rem[k + i] -= t;
                }
            }
            q[k] = c;
        }
        (Self::from_coeffs(q), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().clone().recip())
    }

    pub fn eval(&self, x: &BigQ) -> BigQ {
        let mut acc = BigQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + bigq_to_f64(c);
        }
        acc
    }

    /// Clears denominators and strips the integer content; the result spans
    /// the same ideal over Q.
    pub fn to_primitive_zpoly(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        ZPoly::from_coeffs(ints).primitive_part()
    }
}

/// Monic gcd over Q, computed through the primitive integer images.
pub fn qpoly_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let g = zpoly_gcd(&a.to_primitive_zpoly(), &b.to_primitive_zpoly());
    QPoly::from_zpoly(&g).monic()
}
