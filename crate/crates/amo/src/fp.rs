//! Compensated floating-point arithmetic.
//!
//! The numeric verification sweeps accumulate sums whose intermediate terms
//! reach 1e18 while the final result is expected to cancel to zero, so plain
//! f64 loses everything.  `Dd` is an unevaluated sum hi + lo of two doubles
//! (roughly 106 bits of significand), which keeps the cancellation error near
//! 1e-12 across the whole sweep.

/// Error-free sum: returns (s, e) with s = fl(a + b) and a + b = s + e exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Like [`two_sum`] but requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Double-double number: the unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion; counts up to 2^107 or so round-trip exactly.
    pub fn from_u128(x: u128) -> Dd {
        let hi = x as f64;
        // hi rounds to the nearest representable; the residue fits in a f64
        // because x < 2^107 in every caller.
        let lo = if hi >= 0.0 && hi <= u128::MAX as f64 {
            let hi_int = hi as i128;
            (x as i128 - hi_int) as f64
        } else {
            0.0
        };
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s2, e2) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s2, e2 + f);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// The scalar operations the generic evaluation paths need, so the same
/// recurrence code runs in f64 or double-double depending on the requested
/// working precision.
pub trait Scalar: Copy + std::fmt::Debug {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn neg(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn neg(self) -> Self {
        -self
    }
}

impl Scalar for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn zero() -> Self {
        Dd::ZERO
    }
    fn one() -> Self {
        Dd::ONE
    }
    fn add(self, o: Self) -> Self {
        Dd::add(self, o)
    }
    fn sub(self, o: Self) -> Self {
        Dd::sub(self, o)
    }
    fn mul(self, o: Self) -> Self {
        Dd::mul(self, o)
    }
    fn neg(self) -> Self {
        Dd::neg(self)
    }
}

// pi split across two doubles: PI_HI is the nearest f64, PI_LO the residue.
const PI_HI: f64 = 3.141592653589793;
const PI_LO: f64 = 1.2246467991473532e-16;

/// pi/2 as a double-double (halving both legs is exact).
fn half_pi() -> Dd {
    Dd { hi: PI_HI / 2.0, lo: PI_LO / 2.0 }
}

fn dd_sin_taylor(x: Dd) -> Dd {
    let x2 = x.mul(x);
    let mut term = x;
    let mut sum = x;
    let mut n = 1.0f64;
    while term.hi.abs() > 1e-35 {
        n += 2.0;
        term = term.mul(x2).div(Dd::from_f64((n - 1.0) * n)).neg();
        sum = sum.add(term);
    }
    sum
}

fn dd_cos_taylor(x: Dd) -> Dd {
    let x2 = x.mul(x);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut n = 0.0f64;
    while term.hi.abs() > 1e-35 {
        n += 2.0;
        term = term.mul(x2).div(Dd::from_f64((n - 1.0) * n)).neg();
        sum = sum.add(term);
    }
    sum
}

/// cos(2 pi num/den) in double-double.  The quadrant is split off with
/// integer arithmetic, so the rational angles that land exactly on a
/// quadrant boundary (cosine 0 or +-1) come out exact and everything else
/// carries ~1e-32 relative error.  The cancellation checks need this: their
/// sensitivity to input error reaches 1e18, so f64 cosines are not enough.
pub fn dd_cos_2pi(num: i64, den: i64) -> Dd {
    assert!(den > 0);
    let r = num.rem_euclid(den);
    // 2 pi r/den = (pi/2) * (m + g) with m in 0..4 and g in [0, 1).
    let m = 4 * r / den;
    let rem = 4 * r - m * den;
    let g = Dd::from_f64(rem as f64).div(Dd::from_f64(den as f64));
    let x = half_pi().mul(g);
    match m {
        0 => dd_cos_taylor(x),
        1 => dd_sin_taylor(x).neg(),
        2 => dd_cos_taylor(x).neg(),
        3 => dd_sin_taylor(x),
        _ => unreachable!(),
    }
}

/// Working-precision selector driven by the `AMO_PRECISION_BITS` environment
/// variable: up to 53 bits selects plain f64, 54..=106 selects double-double,
/// anything larger is rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    F64,
    DoubleDouble,
}

impl Precision {
    pub fn from_bits(bits: u32) -> crate::error::Result<Precision> {
        match bits {
            0 => Err(crate::error::Error::UnsupportedPrecision(0)),
            1..=53 => Ok(Precision::F64),
            54..=106 => Ok(Precision::DoubleDouble),
            b => Err(crate::error::Error::UnsupportedPrecision(b)),
        }
    }

    /// Reads `AMO_PRECISION_BITS`; unset or empty defaults to double-double,
    /// which every stated tolerance in the cancellation sweeps assumes.
    pub fn from_env() -> crate::error::Result<Precision> {
        Self::from_env_or(Precision::DoubleDouble)
    }

    /// Reads `AMO_PRECISION_BITS` with a caller-chosen default for when the
    /// variable is unset.  The spectral code defaults to plain f64 and treats
    /// the variable as its extended-precision escape hatch.
    pub fn from_env_or(default: Precision) -> crate::error::Result<Precision> {
        match std::env::var("AMO_PRECISION_BITS") {
            Ok(s) if !s.trim().is_empty() => {
                let bits: u32 = s.trim().parse().map_err(|_| {
                    crate::error::Error::Domain(format!(
                        "AMO_PRECISION_BITS must be an integer, got {s:?}"
                    ))
                })?;
                Precision::from_bits(bits)
            }
            _ => Ok(default),
        }
    }
}
