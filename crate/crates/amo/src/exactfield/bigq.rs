use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Arbitrary-precision rational, the base field for every exact computation.
pub type BigQ = BigRational;

/// Shorthand for an integer as a `BigQ`.
pub fn bigq(n: i64) -> BigQ {
    BigQ::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den` as a `BigQ`.  Panics on `den == 0`.
pub fn bigq_ratio(num: i64, den: i64) -> BigQ {
    BigQ::new(BigInt::from(num), BigInt::from(den))
}

/// Integer power with negative exponents allowed for nonzero base.
pub fn bigq_pow(base: &BigQ, exp: i64) -> BigQ {
    if exp == 0 {
        return BigQ::one();
    }
    let e: i32 = exp.unsigned_abs().try_into().expect("exponent magnitude fits i32");
    let mag = base.pow(e);
    if exp > 0 {
        mag
    } else {
        assert!(!base.is_zero(), "negative power of zero");
        mag.recip()
    }
}

pub fn bigq_to_f64(x: &BigQ) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Out-of-range numerator or denominator: fall back on a quotient of
        // leading parts, good enough for diagnostics.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY * x.numer().signum().to_f64().unwrap());
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Deterministic stream of small random rationals for seeded trials.
///
/// Values are n/d with n in [-99, 99] and d in [1, 9]: small enough that
/// products over a dozen factors stay cheap, varied enough to make an
/// identity holding by accident implausible.
pub struct RationalSampler {
    rng: ChaCha8Rng,
}

impl RationalSampler {
    pub fn new(seed: u64) -> Self {
        RationalSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_value(&mut self) -> BigQ {
        let n = self.rng.gen_range(-99i64..=99);
        let d = self.rng.gen_range(1i64..=9);
        bigq_ratio(n, d)
    }

    pub fn next_nonzero(&mut self) -> BigQ {
        loop {
            let v = self.next_value();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn values(&mut self, count: usize) -> Vec<BigQ> {
        (0..count).map(|_| self.next_value()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_handles_negative_exponents() {
        let x = bigq_ratio(3, 2);
        assert_eq!(bigq_pow(&x, -2), bigq_ratio(4, 9));
        assert_eq!(bigq_pow(&x, 0), bigq(1));
        assert_eq!(bigq_pow(&x, 3), bigq_ratio(27, 8));
    }

    #[test]
    fn sampler_is_deterministic() {
        let a: Vec<_> = RationalSampler::new(7).values(20);
        let b: Vec<_> = RationalSampler::new(7).values(20);
        assert_eq!(a, b);
        let c: Vec<_> = RationalSampler::new(8).values(20);
        assert_ne!(a, c);
    }
}
