//! The discriminant by two routes, plus every check that rides on it:
//! coupling-sign resolution, constant-term and coefficient verification,
//! parity, and the affine dependence of coefficients on the cosine values.
//!
//! The transfer diagonal is c_k = lambda cos(2 pi k p/q + pi/(2q)); the
//! angle reduces to the exact rational (4kp + 1)/(4q) of a full turn, so the
//! table is built through the integer-quadrant cosine and carried in
//! double-double.  Coefficient vectors are accumulated in double-double and
//! rounded once: same-parity coefficients reach 1e15 at q = 50 while the
//! odd/even cancellation is expected to land near zero, which plain f64
//! cannot certify to the stated absolute tolerances.

use super::matrix::{build_h, charpoly, lu_det};
use super::{ModelParams, RealPoly, RotationNumber};
use crate::continuants::{periodic_continuant, periodic_continuant_cos_exact};
use crate::error::{Error, Result};
use crate::exactfield::BigQ;
use crate::fp::{dd_cos_2pi, Dd, Precision, Scalar};
use crate::ring::Ring;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::OnceLock;

/// 2 cos(2 pi j p / q), the j-th even harmonic of the rotation number.
pub fn xi_harmonic(theta: &RotationNumber, j: u32) -> f64 {
    let c = dd_cos_2pi(j as i64 * theta.p() as i64, theta.q() as i64);
    c.add(c).to_f64()
}

/// 2 cos(2 pi p / q).
pub fn xi_theta(theta: &RotationNumber) -> f64 {
    xi_harmonic(theta, 1)
}

/// Transfer diagonal c_k = lambda cos(2 pi (4kp + 1)/(4q)), k = 1..q.
fn cos_table_dd(theta: &RotationNumber, lambda: f64) -> Vec<Dd> {
    let q = theta.q() as i64;
    let p = theta.p() as i64;
    let lam = Dd::from_f64(lambda);
    (1..=q)
        .map(|k| dd_cos_2pi(4 * k * p + 1, 4 * q).mul(lam))
        .collect()
}

/// (x - c) * a + b on ascending double-double coefficients.
fn mul_x_minus_c_add(a: &[Dd], c: Dd, b: &[Dd]) -> Vec<Dd> {
    let mut out = vec![Dd::ZERO; a.len() + 1];
    for (i, &ai) in a.iter().enumerate() {
        out[i + 1] = out[i + 1].add(ai);
        out[i] = out[i].sub(ai.mul(c));
    }
    for (i, &bi) in b.iter().enumerate() {
        out[i] = out[i].add(bi);
    }
    out
}

fn dd_coeffs_to_poly(v: &[Dd]) -> RealPoly {
    // Anything below the accumulated double-double noise floor (~2^-100
    // relative) is cancellation residue, not structure; snapping it to zero
    // keeps printed polynomials clean without assuming parity anywhere.
    let scale = v.iter().map(|d| d.to_f64().abs()).fold(1.0f64, f64::max);
    let floor = scale * 2f64.powi(-90);
    RealPoly::from_coeffs(
        v.iter()
            .map(|d| {
                let x = d.to_f64();
                if x.abs() < floor {
                    0.0
                } else {
                    x
                }
            })
            .collect(),
    )
}

fn require_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("coupling must be positive, got {lambda}")));
    }
    Ok(())
}

/// Discriminant as the trace of the ordered product of the 2 x 2 transfer
/// matrices [[x - c_k, -1], [1, 0]], computed in polynomial arithmetic.
/// Monic of degree q.
pub fn delta_transfer(theta: &RotationNumber, lambda: f64) -> Result<RealPoly> {
    require_lambda(lambda)?;
    let cs = cos_table_dd(theta, lambda);
    // Running product P <- P * A_k, tracked by columns.
    let mut p00 = vec![Dd::ONE];
    let mut p01 = vec![Dd::ZERO];
    let mut p10 = vec![Dd::ZERO];
    let mut p11 = vec![Dd::ONE];
    for &c in &cs {
        let new00 = mul_x_minus_c_add(&p00, c, &p01);
        let new10 = mul_x_minus_c_add(&p10, c, &p11);
        p01 = p00.iter().map(|d| d.neg()).collect();
        p11 = p10.iter().map(|d| d.neg()).collect();
        p00 = new00;
        p10 = new10;
    }
    let mut trace = p00;
    for (i, &d) in p11.iter().enumerate() {
        trace[i] = trace[i].add(d);
    }
    Ok(dd_coeffs_to_poly(&trace))
}

/// Polynomials with double-double coefficients, as a ring context for the
/// continuant recurrences.
struct DdPolys;

impl Ring for DdPolys {
    type Elem = Vec<Dd>;

    fn zero(&self) -> Vec<Dd> {
        vec![Dd::ZERO]
    }
    fn one(&self) -> Vec<Dd> {
        vec![Dd::ONE]
    }
    fn from_i64(&self, n: i64) -> Vec<Dd> {
        vec![Dd::from_f64(n as f64)]
    }
    fn add(&self, a: &Vec<Dd>, b: &Vec<Dd>) -> Vec<Dd> {
        let mut out = vec![Dd::ZERO; a.len().max(b.len())];
        for (i, &x) in a.iter().enumerate() {
            out[i] = out[i].add(x);
        }
        for (i, &x) in b.iter().enumerate() {
            out[i] = out[i].add(x);
        }
        out
    }
    fn sub(&self, a: &Vec<Dd>, b: &Vec<Dd>) -> Vec<Dd> {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Vec<Dd>, b: &Vec<Dd>) -> Vec<Dd> {
        let mut out = vec![Dd::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(x.mul(y));
            }
        }
        out
    }
    fn neg(&self, a: &Vec<Dd>) -> Vec<Dd> {
        a.iter().map(|d| d.neg()).collect()
    }
    fn eq(&self, a: &Vec<Dd>, b: &Vec<Dd>) -> bool {
        let n = a.len().max(b.len());
        let get = |v: &Vec<Dd>, i: usize| v.get(i).copied().unwrap_or(Dd::ZERO);
        (0..n).all(|i| get(a, i) == get(b, i))
    }
}

/// Discriminant as the periodic continuant of the transfer diagonal plus
/// the boundary constant 2 (-1)^q, over the polynomial ring.  Requires
/// q >= 3 (the periodic continuant is not defined below that); must agree
/// with [`delta_transfer`] to 1e-9 relative.
pub fn delta_continuant(theta: &RotationNumber, lambda: f64) -> Result<RealPoly> {
    require_lambda(lambda)?;
    let q = theta.q();
    if q < 3 {
        return Err(Error::domain("continuant route needs q >= 3"));
    }
    let ring = DdPolys;
    let diag: Vec<Vec<Dd>> = cos_table_dd(theta, lambda)
        .into_iter()
        .map(|c| vec![c.neg(), Dd::ONE])
        .collect();
    let pc = periodic_continuant(&ring, &diag)?;
    let shift = ring.from_i64(if q % 2 == 0 { 2 } else { -2 });
    Ok(dd_coeffs_to_poly(&ring.add(&pc, &shift)))
}

/// Point evaluation of the discriminant and its derivative through the
/// transfer product itself, never through stored coefficients: near the
/// spectrum the matrix entries stay bounded by the band scale, while a
/// coefficient-form Horner sum cancels through 1e30 at q = 50 and returns
/// noise.  The working scalar follows [`super::spectrum_precision`] unless
/// chosen explicitly.
pub struct DeltaEvaluator {
    inner: EvalInner,
}

enum EvalInner {
    F64(JetCore<f64>),
    Dd(JetCore<Dd>),
}

struct JetCore<S: Scalar> {
    c: Vec<S>,
}

impl<S: Scalar> JetCore<S> {
    fn new(theta: &RotationNumber, lambda: f64) -> JetCore<S> {
        let c = cos_table_dd(theta, lambda)
            .into_iter()
            .map(|d| S::from_f64(d.hi).add(S::from_f64(d.lo)))
            .collect();
        JetCore { c }
    }

    fn eval(&self, x: f64) -> f64 {
        let x = S::from_f64(x);
        let (mut p00, mut p01) = (S::one(), S::zero());
        let (mut p10, mut p11) = (S::zero(), S::one());
        for &c in &self.c {
            let t = x.sub(c);
            let n00 = p00.mul(t).add(p01);
            let n10 = p10.mul(t).add(p11);
            p01 = p00.neg();
            p11 = p10.neg();
            p00 = n00;
            p10 = n10;
        }
        p00.add(p11).to_f64()
    }

    fn jet(&self, x: f64) -> (f64, f64) {
        let x = S::from_f64(x);
        let (mut p00, mut p01) = (S::one(), S::zero());
        let (mut p10, mut p11) = (S::zero(), S::one());
        let (mut d00, mut d01) = (S::zero(), S::zero());
        let (mut d10, mut d11) = (S::zero(), S::zero());
        for &c in &self.c {
            let t = x.sub(c);
            let n00 = p00.mul(t).add(p01);
            let n10 = p10.mul(t).add(p11);
            let e00 = p00.add(d00.mul(t)).add(d01);
            let e10 = p10.add(d10.mul(t)).add(d11);
            d01 = d00.neg();
            d11 = d10.neg();
            d00 = e00;
            d10 = e10;
            p01 = p00.neg();
            p11 = p10.neg();
            p00 = n00;
            p10 = n10;
        }
        (p00.add(p11).to_f64(), d00.add(d11).to_f64())
    }
}

impl DeltaEvaluator {
    /// Working precision from the environment (f64 unless overridden).
    pub fn new(theta: &RotationNumber, lambda: f64) -> Result<DeltaEvaluator> {
        Ok(Self::with_precision(theta, lambda, super::spectrum_precision()?))
    }

    pub fn with_precision(
        theta: &RotationNumber,
        lambda: f64,
        precision: Precision,
    ) -> DeltaEvaluator {
        let inner = match precision {
            Precision::F64 => EvalInner::F64(JetCore::new(theta, lambda)),
            Precision::DoubleDouble => EvalInner::Dd(JetCore::new(theta, lambda)),
        };
        DeltaEvaluator { inner }
    }

    /// Delta(x).
    pub fn eval(&self, x: f64) -> f64 {
        match &self.inner {
            EvalInner::F64(c) => c.eval(x),
            EvalInner::Dd(c) => c.eval(x),
        }
    }

    /// (Delta(x), Delta'(x)).
    pub fn jet(&self, x: f64) -> (f64, f64) {
        match &self.inner {
            EvalInner::F64(c) => c.jet(x),
            EvalInner::Dd(c) => c.jet(x),
        }
    }
}

/// Largest coefficient of Delta(-x) - (-1)^q Delta(x): twice the largest
/// wrong-parity coefficient, zero in exact arithmetic.
pub fn parity_defect(theta: &RotationNumber, lambda: f64) -> Result<f64> {
    let dp = delta_transfer(theta, lambda)?;
    let want_odd = theta.q() % 2 == 1;
    let mut worst = 0.0f64;
    for (j, &c) in dp.coeffs().iter().enumerate() {
        if (j % 2 == 1) != want_odd {
            worst = worst.max(2.0 * c.abs());
        }
    }
    Ok(worst)
}

/// Hand-expanded discriminant coefficients at coupling 2 for denominators
/// 2..9, ascending by degree, with the cosine values inserted per p.  The
/// degree-3 coefficient at q = 9 is 62/3.  Returns None outside the frozen
/// range or for a non-reduced fraction.
pub fn frozen_delta_coeffs_lambda2(q: u32, p: u32) -> Option<Vec<f64>> {
    let theta = RotationNumber::new(p, q).ok()?;
    let x1 = xi_harmonic(&theta, 1);
    let x2 = xi_harmonic(&theta, 2);
    let v = match q {
        2 => vec![-4.0, 0.0, 1.0],
        3 => vec![0.0, -6.0, 0.0, 1.0],
        4 => vec![4.0, 0.0, -8.0, 0.0, 1.0],
        5 => vec![0.0, 5.0 * (3.0 - x1), 0.0, -10.0, 0.0, 1.0],
        6 => vec![-4.0, 0.0, 6.0 * (5.0 - x1), 0.0, -12.0, 0.0, 1.0],
        7 => vec![
            0.0,
            -7.0 * (6.0 - 2.0 * x1 + 2.0 * x2),
            0.0,
            7.0 * (7.0 - x1),
            0.0,
            -14.0,
            0.0,
            1.0,
        ],
        8 => vec![
            4.0,
            0.0,
            -8.0 * (12.0 - 4.0 * x1 + 2.0 * x2),
            0.0,
            8.0 * (9.0 - x1),
            0.0,
            -16.0,
            0.0,
            1.0,
        ],
        9 => vec![
            0.0,
            9.0 * (14.0 - 8.0 * x1 + 3.0 * x2),
            0.0,
            -9.0 * (62.0 / 3.0 - 6.0 * x1 + 2.0 * x2),
            0.0,
            9.0 * (11.0 - x1),
            0.0,
            -18.0,
            0.0,
            1.0,
        ],
        _ => return None,
    };
    Some(v)
}

/// Outcome of one coupling-sign resolution.
#[derive(Clone, Debug, Serialize)]
pub struct CouplingSignReport {
    pub q: u32,
    pub p: u32,
    pub lambda: f64,
    /// The fitted sign s in det(xI - h) = Delta(x) + s (z1^q + z1^-q +
    /// mu^q (z2^q + z2^-q)).
    pub sign: i32,
    /// Sample variance of det(xI - h) - Delta(x) across x at fixed (z1, z2);
    /// the difference is x-independent, so this measures numeric noise only.
    pub x_variance: f64,
    /// Largest |difference - s * offset| over the samples.
    pub fit_residual: f64,
    pub samples: u32,
    pub seed: u64,
}

static GLOBAL_SIGN: OnceLock<i32> = OnceLock::new();

/// Fits the sign s relating det(xI - h) and Delta(x) + s * (boundary term)
/// from random (z1, z2, x) samples, checks the difference is x-independent
/// (variance < 1e-16) and that exactly one sign fits (residual < 1e-8), and
/// stores the winner as the process-wide convention for downstream checks.
///
/// x is drawn inside [-1, 1], within the spectral hull, where both
/// determinant routes stay at the band scale; far outside the spectrum the
/// difference of two huge near-equal numbers would drown the offset.
pub fn resolve_coupling_sign(
    theta: &RotationNumber,
    lambda: f64,
    samples: u32,
    seed: u64,
) -> Result<CouplingSignReport> {
    require_lambda(lambda)?;
    if samples < 8 {
        return Err(Error::domain("coupling-sign fit needs at least 8 samples"));
    }
    let q = theta.q();
    let mu_q = (lambda / 2.0).powi(q as i32);
    let ev = DeltaEvaluator::with_precision(theta, lambda, Precision::F64);
    let tau = std::f64::consts::TAU;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pair_sq = 0.0f64;
    let mut diffs = Vec::with_capacity(samples as usize);
    let mut offsets = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        // Redraw phases whose boundary term is too small to discriminate
        // the two signs.
        let (a1, a2, t) = loop {
            let a1: f64 = rng.gen();
            let a2: f64 = rng.gen();
            let t = 2.0 * (tau * q as f64 * a1).cos() + 2.0 * mu_q * (tau * q as f64 * a2).cos();
            if t.abs() >= 0.5 {
                break (a1, a2, t);
            }
        };
        let params = ModelParams::from_angles(*theta, lambda, a1, a2)?;
        let h = build_h(&params);
        let d_at = |x: f64| lu_det(&h, Complex64::new(x, 0.0)).re - ev.eval(x);
        let xa = rng.gen_range(-1.0..1.0);
        let xb = rng.gen_range(-1.0..1.0);
        let (da, db) = (d_at(xa), d_at(xb));
        pair_sq += (da - db) * (da - db);
        diffs.push(0.5 * (da + db));
        offsets.push(t);
    }
    let x_variance = pair_sq / (2.0 * samples as f64);
    if x_variance >= 1e-16 {
        return Err(Error::VerificationFailed(format!(
            "det(xI - h) - Delta(x) varies with x at {theta}: variance {x_variance:.3e}"
        )));
    }
    let max_resid = |s: f64| {
        diffs
            .iter()
            .zip(&offsets)
            .map(|(d, t)| (d - s * t).abs())
            .fold(0.0f64, f64::max)
    };
    let (r_plus, r_minus) = (max_resid(1.0), max_resid(-1.0));
    let (sign, fit_residual) = if r_plus <= r_minus { (1, r_plus) } else { (-1, r_minus) };
    if fit_residual >= 1e-8 {
        return Err(Error::VerificationFailed(format!(
            "no consistent coupling sign at {theta}: residuals +{r_plus:.3e} / -{r_minus:.3e}"
        )));
    }
    if GLOBAL_SIGN.set(sign).is_err() && *GLOBAL_SIGN.get().expect("just observed full") != sign {
        return Err(Error::VerificationFailed(format!(
            "coupling sign {sign} at {theta} contradicts the stored convention"
        )));
    }
    Ok(CouplingSignReport {
        q,
        p: theta.p(),
        lambda,
        sign,
        x_variance,
        fit_residual,
        samples,
        seed,
    })
}

/// The stored coupling-sign convention, resolving it at a fixed small case
/// on first use.
pub fn global_coupling_sign() -> Result<i32> {
    if let Some(s) = GLOBAL_SIGN.get() {
        return Ok(*s);
    }
    let theta = RotationNumber::new(1, 5)?;
    Ok(resolve_coupling_sign(&theta, 2.0, 16, 0xA10)?.sign)
}

/// Constant-term verification at one rotation number.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantTermReport {
    pub q: u32,
    pub p: u32,
    pub lambda: f64,
    pub sign: i32,
    pub delta_at_zero: f64,
    /// For even q: the closed form (-1)^(q/2) 2 (1 + mu^q) and the relative
    /// error of Delta(0) against it.
    pub even_formula: Option<f64>,
    pub even_rel_err: Option<f64>,
    /// For odd q: |Delta(0)|, which parity forces to zero.
    pub odd_residual: Option<f64>,
    /// Largest |x^0 coefficient of det(xI - h) - (Delta(0) + s * offset)|
    /// over the sampled torus points.
    pub x0_max_residual: f64,
    pub x0_samples: u32,
    pub seed: u64,
    /// The phase-shifted periodic continuant at x = 0, Delta(0) - 2 (-1)^q
    /// (defined for q >= 3).
    pub shifted_continuant_at_zero: Option<f64>,
    /// Exact phaseless cosine continuant [[2 mu cos(2 pi j p/q)]], logged
    /// for comparison with the shifted one; the two genuinely differ.
    pub plain_cos_continuant: Option<String>,
    pub plain_cos_continuant_f64: Option<f64>,
    pub passed: bool,
}

/// Verifies the x^0 coefficient story at one rotation number: for even q
/// that Delta(0) equals (-1)^(q/2) 2 (1 + mu^q) to 1e-9 relative, for odd q
/// that Delta(0) vanishes, and in both parities that the x^0 coefficient of
/// det(xI - h) equals Delta(0) + s * (z1^q + z1^-q + mu^q (z2^q + z2^-q))
/// under the resolved sign at random torus points.  The phaseless cosine
/// continuant is evaluated exactly and logged next to the phase-shifted one
/// at x = 0; no equality is asserted between them.
pub fn constant_term_check(theta: &RotationNumber, lambda: f64) -> Result<ConstantTermReport> {
    require_lambda(lambda)?;
    let sign = global_coupling_sign()?;
    let q = theta.q();
    let mu = lambda / 2.0;
    let mu_q = mu.powi(q as i32);
    let dp = delta_transfer(theta, lambda)?;
    let d0 = dp.coeff(0);

    let (even_formula, even_rel_err, odd_residual, parity_ok) = if q % 2 == 0 {
        let s = if (q / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let formula = s * 2.0 * (1.0 + mu_q);
        let rel = (d0 - formula).abs() / formula.abs();
        (Some(formula), Some(rel), None, rel < 1e-9)
    } else {
        (None, None, Some(d0.abs()), d0.abs() < 1e-9)
    };

    let seed = 0xC0_5E ^ u64::from(q) << 16 ^ u64::from(theta.p());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 6u32;
    let tau = std::f64::consts::TAU;
    let mut x0_max_residual = 0.0f64;
    for _ in 0..samples {
        let a1: f64 = rng.gen();
        let a2: f64 = rng.gen();
        let params = ModelParams::from_angles(*theta, lambda, a1, a2)?;
        let cp = charpoly(&build_h(&params))?;
        let t = 2.0 * (tau * q as f64 * a1).cos() + 2.0 * mu_q * (tau * q as f64 * a2).cos();
        let expected = d0 + sign as f64 * t;
        x0_max_residual = x0_max_residual.max((cp[0] - Complex64::new(expected, 0.0)).norm());
    }
    let c_scale = 2.0 * (1.0 + mu_q);
    let x0_ok = x0_max_residual < 1e-8 * c_scale.max(1.0);

    let (shifted, plain, plain_f64) = if q >= 3 {
        let shifted = d0 - 2.0 * if q % 2 == 0 { 1.0 } else { -1.0 };
        let mu_exact = BigQ::from_float(mu)
            .ok_or_else(|| Error::domain("coupling must be finite"))?;
        let plain = periodic_continuant_cos_exact(q, theta.p(), &mu_exact)?;
        let plain_f64 = crate::exactfield::bigq_to_f64(&plain);
        (Some(shifted), Some(plain.to_string()), Some(plain_f64))
    } else {
        (None, None, None)
    };

    Ok(ConstantTermReport {
        q,
        p: theta.p(),
        lambda,
        sign,
        delta_at_zero: d0,
        even_formula,
        even_rel_err,
        odd_residual,
        x0_max_residual,
        x0_samples: samples,
        seed,
        shifted_continuant_at_zero: shifted,
        plain_cos_continuant: plain,
        plain_cos_continuant_f64: plain_f64,
        passed: parity_ok && x0_ok,
    })
}

/// Comparison of one x^(q - 2k) coefficient against its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct CoeffReport {
    pub k: u32,
    pub q: u32,
    pub p: u32,
    pub lambda: f64,
    pub mu: f64,
    pub computed: f64,
    pub predicted: f64,
    pub residual: f64,
    pub rel_residual: f64,
    /// The k = 3 formula is conjectural: the report carries residuals but
    /// `passed` stays None.
    pub conjectural: bool,
    pub passed: Option<bool>,
    /// Named pieces of the prediction, for term-by-term inspection.
    pub terms: Vec<(String, f64)>,
}

/// Checks the coefficient of x^(q - 2k) in the discriminant against its
/// frozen closed form.
///
/// k = 1: the frozen row reads -q (1 + mu^q), and that is what `predicted`
/// and `passed` measure.  The computed coefficient is actually
/// -q (1 + mu^2) for every q >= 3: only pair products of the zero-sum
/// transfer diagonal reach x^(q - 2), so the mu-degree is 2, matching the
/// palindromic A mu^2k + ... + A shape of the higher rows and the Chebyshev
/// end coefficients.  All candidate forms (including the stray variant
/// -q (1 + mu)) coincide at coupling 2, which is the only coupling the
/// frozen q = 2..9 table exercises; off coupling 2 the row as frozen fails
/// and the `terms` list records all three candidates for adjudication.
///
/// k = 2: q ((q-3)/2 mu^4 + (q-4-xi) mu^2 + (q-3)/2).
///
/// k = 3: the conjectural -q (A mu^6 + B mu^4 + B mu^2 + A) with
/// A = (q-4)(q-5)/6 and B = 1 + (q-5)(q-6)/2 - (q-6) xi + xi_2, reported
/// with residuals only, never pass/fail.
pub fn coeff_check(theta: &RotationNumber, lambda: f64, k: u32) -> Result<CoeffReport> {
    require_lambda(lambda)?;
    if !(1..=3).contains(&k) {
        return Err(Error::domain(format!("coefficient checks cover k in 1..=3, got {k}")));
    }
    let q = theta.q();
    if q <= 2 * k {
        return Err(Error::domain(format!(
            "coefficient of x^(q - 2k) needs q > 2k, got q = {q}, k = {k}"
        )));
    }
    let dp = delta_transfer(theta, lambda)?;
    let computed = dp.coeff((q - 2 * k) as usize);
    let qf = q as f64;
    let mu = lambda / 2.0;
    let mu_q = mu.powi(q as i32);
    let x1 = xi_harmonic(theta, 1);
    let x2 = xi_harmonic(theta, 2);
    let (predicted, terms) = match k {
        1 => (
            -qf * (1.0 + mu_q),
            vec![
                ("frozen row -q(1 + mu^q)".to_string(), -qf * (1.0 + mu_q)),
                ("text variant -q(1 + mu)".to_string(), -qf * (1.0 + mu)),
                ("quadratic -q(1 + mu^2)".to_string(), -qf * (1.0 + mu * mu)),
            ],
        ),
        2 => {
            let t4 = (qf - 3.0) / 2.0 * mu.powi(4);
            let t2 = (qf - 4.0 - x1) * mu.powi(2);
            let t0 = (qf - 3.0) / 2.0;
            (
                qf * (t4 + t2 + t0),
                vec![
                    ("mu^4 term".to_string(), t4),
                    ("mu^2 term".to_string(), t2),
                    ("constant term".to_string(), t0),
                ],
            )
        }
        _ => {
            let a = (qf - 4.0) * (qf - 5.0) / 6.0;
            let b = 1.0 + (qf - 5.0) * (qf - 6.0) / 2.0 - (qf - 6.0) * x1 + x2;
            (
                -qf * (a * mu.powi(6) + b * mu.powi(4) + b * mu.powi(2) + a),
                vec![
                    ("A (mu^6 and constant weight)".to_string(), a),
                    ("B (mu^4 and mu^2 weight)".to_string(), b),
                ],
            )
        }
    };
    let residual = computed - predicted;
    let rel_residual = residual.abs() / predicted.abs().max(1.0);
    let conjectural = k == 3;
    Ok(CoeffReport {
        k,
        q,
        p: theta.p(),
        lambda,
        mu,
        computed,
        predicted,
        residual,
        rel_residual,
        conjectural,
        passed: if conjectural { None } else { Some(rel_residual < 1e-9) },
        terms,
    })
}

/// Fit quality of the discriminant coefficients, across all p at fixed q,
/// against an affine combination of cosine harmonics of the rotation number.
#[derive(Clone, Debug, Serialize)]
pub struct AffineDependenceReport {
    pub q: u32,
    pub lambda: f64,
    /// Number of harmonics beyond the constant: 2 for the (1, xi, xi_2)
    /// basis, floor(q/2) for the full even-harmonic basis.
    pub harmonics: u32,
    pub points: usize,
    pub max_residual: f64,
    pub worst_degree: Option<usize>,
    pub passed: bool,
}

/// Max-norm distance from `b` to the span of `cols`, via twice-iterated
/// Gram-Schmidt projection; rank-deficient columns are dropped.
fn projection_residual(cols: &[Vec<f64>], b: &[f64]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    for col in cols {
        let scale = dot(col, col).sqrt();
        let mut v = col.clone();
        for _ in 0..2 {
            for u in &basis {
                let d = dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= d * ui;
                }
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-10 * scale.max(1.0) {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            basis.push(v);
        }
    }
    let mut r = b.to_vec();
    for _ in 0..2 {
        for u in &basis {
            let d = dot(u, &r);
            for (ri, ui) in r.iter_mut().zip(u) {
                *ri -= d * ui;
            }
        }
    }
    r.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Checks that each discriminant coefficient, viewed across all p coprime to
/// q, is an affine function of the chosen cosine harmonics.  With
/// `full_harmonics` false the basis is (1, xi, xi_2); with it true the basis
/// runs through every even harmonic, which is the full function space on the
/// p-classes and absorbs the higher harmonics that enter from q = 11 on.
pub fn check_affine_dependence(
    q: u32,
    lambda: f64,
    full_harmonics: bool,
) -> Result<AffineDependenceReport> {
    require_lambda(lambda)?;
    if q < 2 {
        return Err(Error::domain("affine dependence needs q >= 2"));
    }
    let ps: Vec<u32> = (1..q).filter(|p| num_integer::gcd(*p, q) == 1).collect();
    let thetas: Vec<RotationNumber> = ps
        .iter()
        .map(|&p| RotationNumber::new(p, q))
        .collect::<Result<_>>()?;
    let polys: Vec<RealPoly> = thetas
        .iter()
        .map(|t| delta_transfer(t, lambda))
        .collect::<Result<_>>()?;
    let harmonics = if full_harmonics { q / 2 } else { 2 };
    let mut cols = vec![vec![1.0; ps.len()]];
    for j in 1..=harmonics {
        cols.push(thetas.iter().map(|t| xi_harmonic(t, j)).collect());
    }
    let mut max_residual = 0.0f64;
    let mut worst_degree = None;
    for d in 0..=q as usize {
        let b: Vec<f64> = polys.iter().map(|p| p.coeff(d)).collect();
        let r = projection_residual(&cols, &b);
        if r > max_residual {
            max_residual = r;
            worst_degree = Some(d);
        }
    }
    Ok(AffineDependenceReport {
        q,
        lambda,
        harmonics,
        points: ps.len(),
        max_residual,
        worst_degree,
        passed: max_residual < 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    fn theta(p: u32, q: u32) -> RotationNumber {
        RotationNumber::new(p, q).unwrap()
    }

    #[test]
    fn harmonic_values() {
        // 2 cos(2 pi / 5) is the golden ratio conjugate.
        let t = theta(1, 5);
        assert!((xi_theta(&t) - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        // Harmonic 2 at p = 3, q = 5 folds back: 6 = 1 mod 5.
        assert!((xi_harmonic(&theta(3, 5), 2) - xi_theta(&theta(1, 5))).abs() < 1e-14);
        assert_eq!(xi_harmonic(&theta(1, 4), 1), 0.0);
    }

    #[test]
    fn transfer_route_reproduces_frozen_tables() {
        for q in 2..=9u32 {
            for p in 1..q {
                let Some(want) = frozen_delta_coeffs_lambda2(q, p) else { continue };
                let dp = delta_transfer(&theta(p, q), 2.0).unwrap();
                let got = dp.coeffs();
                assert_eq!(got.len(), want.len());
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-11, "q={q} p={p}: {got:?} vs {want:?}");
                }
            }
        }
    }

    #[test]
    fn continuant_route_matches_transfer_route() {
        for q in 3..=24u32 {
            for p in [1, q - 1] {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for lambda in [1.0, 2.0, 3.0] {
                    let t = theta(p, q);
                    let a = delta_transfer(&t, lambda).unwrap();
                    let b = delta_continuant(&t, lambda).unwrap();
                    let dev = a.max_coeff_deviation(&b);
                    let scale = a.max_abs_coeff().max(1.0);
                    assert!(dev < 1e-12 * scale, "q={q} p={p} lambda={lambda}: {dev}");
                }
            }
        }
    }

    #[test]
    fn continuant_route_needs_three_sites() {
        assert!(delta_continuant(&theta(1, 2), 2.0).is_err());
        assert!(delta_transfer(&theta(1, 2), 2.0).is_ok());
    }

    #[test]
    fn evaluator_matches_coefficients_at_small_degree() {
        for (p, q) in [(1u32, 4u32), (2, 5), (3, 8)] {
            let t = theta(p, q);
            let dp = delta_transfer(&t, 2.0).unwrap();
            let ev = DeltaEvaluator::with_precision(&t, 2.0, Precision::F64);
            let dd = DeltaEvaluator::with_precision(&t, 2.0, Precision::DoubleDouble);
            let deriv = dp.derivative();
            for i in -8..=8 {
                let x = i as f64 * 0.5;
                let (v, s) = ev.jet(x);
                assert!((v - dp.eval(x)).abs() < 1e-9 * dp.eval(x).abs().max(1.0));
                assert!((s - deriv.eval(x)).abs() < 1e-9 * deriv.eval(x).abs().max(1.0));
                assert!((ev.eval(x) - v).abs() == 0.0);
                assert!((dd.eval(x) - v).abs() < 1e-10 * v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn parity_holds_across_the_desk_grid() {
        // Every wrong-parity coefficient below 1e-9 in absolute value, for
        // all coprime p, q <= 50, lambda in {1, 2, 3}.  Carried by the
        // double-double coefficient accumulation; f64 alone drifts to ~1e-4
        // at q = 50.
        let worst = (2..=50u32)
            .into_par_iter()
            .map(|q| {
                let mut w: f64 = 0.0;
                for p in 1..q {
                    if num_integer::gcd(p, q) != 1 {
                        continue;
                    }
                    for lambda in [1.0, 2.0, 3.0] {
                        w = w.max(parity_defect(&theta(p, q), lambda).unwrap());
                    }
                }
                w
            })
            .reduce(|| 0.0, f64::max);
        assert!(worst < 1e-9, "largest parity defect {worst:.3e}");
    }

    #[test]
    fn coupling_sign_is_minus_one() {
        // det(xI - h) = Delta(x) - (z1^q + z1^-q + mu^q (z2^q + z2^-q)):
        // frozen by the 2 x 2 case by hand, h(1,1) has det(xI - h) =
        // x^2 - 8 = (x^2 - 4) - 4.
        for q in [2u32, 3, 5, 8, 12] {
            let report =
                resolve_coupling_sign(&theta(1, q), 2.0, 20, 900 + u64::from(q)).unwrap();
            assert_eq!(report.sign, -1, "q={q}");
            assert!(report.x_variance < 1e-16);
            assert!(report.fit_residual < 1e-8);
        }
        assert_eq!(global_coupling_sign().unwrap(), -1);
    }

    #[test]
    fn coupling_sign_rejects_thin_sampling() {
        assert!(resolve_coupling_sign(&theta(1, 5), 2.0, 7, 1).is_err());
    }

    #[test]
    fn constant_term_even_odd_cases() {
        // q = 4, lambda = 2: Delta(0) = +4; q = 6: Delta(0) = -4.
        let r4 = constant_term_check(&theta(1, 4), 2.0).unwrap();
        assert!(r4.passed);
        assert!((r4.even_formula.unwrap() - 4.0).abs() < 1e-12);
        let r6 = constant_term_check(&theta(1, 6), 2.0).unwrap();
        assert!(r6.passed);
        assert!((r6.even_formula.unwrap() + 4.0).abs() < 1e-12);
        // Odd q: Delta(0) = 0 and the x^0 coefficient is the pure boundary
        // term under s = -1.
        let r5 = constant_term_check(&theta(2, 5), 2.0).unwrap();
        assert!(r5.passed);
        assert!(r5.odd_residual.unwrap() < 1e-12);
        assert_eq!(r5.sign, -1);
        // The log carries both continuants at x = 0; for odd q they differ
        // (the shifted one is +2, the plain one is 2 (1 + mu^q) = 4).
        assert!((r5.shifted_continuant_at_zero.unwrap() - 2.0).abs() < 1e-9);
        assert!((r5.plain_cos_continuant_f64.unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn constant_term_mu_dependence() {
        // q = 6, lambda = 1: Delta(0) = -2 (1 + 2^-6) = -65/32.
        let r = constant_term_check(&theta(1, 6), 1.0).unwrap();
        assert!(r.passed);
        assert!((r.even_formula.unwrap() + 65.0 / 32.0).abs() < 1e-12);
        assert_eq!(r.plain_cos_continuant.as_deref(), Some("-65/16"));
    }

    #[test]
    fn coefficient_formulas_small_cases() {
        // k = 1, q = 8, lambda = 2: -16.
        let r = coeff_check(&theta(1, 8), 2.0, 1).unwrap();
        assert_eq!(r.passed, Some(true));
        assert!((r.predicted + 16.0).abs() < 1e-12);
        // k = 2, q = 7: 7 (7 - xi).
        let t7 = theta(2, 7);
        let r = coeff_check(&t7, 2.0, 2).unwrap();
        assert_eq!(r.passed, Some(true));
        assert!((r.predicted - 7.0 * (7.0 - xi_theta(&t7))).abs() < 1e-10);
        // k = 3 stays conjectural even where it matches.
        let r = coeff_check(&theta(1, 9), 2.0, 3).unwrap();
        assert!(r.conjectural);
        assert_eq!(r.passed, None);
        assert!(r.rel_residual < 1e-9, "q=9 residual {:.3e}", r.rel_residual);
    }

    #[test]
    fn coefficient_check_rejects_small_q() {
        assert!(coeff_check(&theta(1, 6), 2.0, 3).is_err());
        assert!(coeff_check(&theta(1, 4), 2.0, 2).is_err());
        assert!(coeff_check(&theta(1, 3), 2.0, 0).is_err());
    }

    #[test]
    fn coefficient_formulas_across_grid() {
        for q in 5..=40u32 {
            for lambda in [1.0, 2.0, 3.0] {
                for p in [1, q - 1] {
                    if num_integer::gcd(p, q) != 1 {
                        continue;
                    }
                    let t = theta(p, q);
                    // k = 1: the computed coefficient is -q(1 + mu^2) at
                    // every coupling; the frozen-row form -q(1 + mu^q)
                    // matches only at coupling 2 where mu = 1.
                    let r = coeff_check(&t, lambda, 1).unwrap();
                    let mu = lambda / 2.0;
                    let truth = -(q as f64) * (1.0 + mu * mu);
                    assert!(
                        (r.computed - truth).abs() < 1e-9 * truth.abs(),
                        "k=1 q={q} p={p} lambda={lambda}: computed {} vs -q(1+mu^2) {truth}",
                        r.computed
                    );
                    assert_eq!(
                        r.passed,
                        Some(lambda == 2.0),
                        "k=1 q={q} p={p} lambda={lambda}: rel {:.3e}",
                        r.rel_residual
                    );
                    // k = 2 holds at every coupling.
                    if q > 4 {
                        let r = coeff_check(&t, lambda, 2).unwrap();
                        assert_eq!(
                            r.passed,
                            Some(true),
                            "k=2 q={q} p={p} lambda={lambda}: rel {:.3e}",
                            r.rel_residual
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_polynomial_is_discriminant_plus_boundary_term() {
        // det(xI - h(z1, z2)) = Delta(x) + s (z1^q + z1^-q + mu^q (z2^q +
        // z2^-q)) at every x, checked at random torus points and random x.
        use crate::spectrum::matrix::cpoly_eval;
        let s = global_coupling_sign().unwrap() as f64;
        let tau = std::f64::consts::TAU;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for (p, q) in [(1u32, 3u32), (1, 6), (3, 8), (5, 12)] {
            for lambda in [1.0, 2.0] {
                let t = theta(p, q);
                let ev = DeltaEvaluator::with_precision(&t, lambda, Precision::F64);
                let mu_q = (lambda / 2.0).powi(q as i32);
                for _ in 0..10 {
                    let (a1, a2) = (rng.gen::<f64>(), rng.gen::<f64>());
                    let params = ModelParams::from_angles(t, lambda, a1, a2).unwrap();
                    let cp = charpoly(&build_h(&params)).unwrap();
                    let bt = 2.0 * (tau * q as f64 * a1).cos()
                        + 2.0 * mu_q * (tau * q as f64 * a2).cos();
                    for _ in 0..3 {
                        let x = rng.gen_range(-2.0..2.0);
                        let lhs = cpoly_eval(&cp, Complex64::new(x, 0.0));
                        let rhs = ev.eval(x) + s * bt;
                        let scale = rhs.abs().max(2.0 * (1.0 + mu_q));
                        assert!(
                            (lhs - Complex64::new(rhs, 0.0)).norm() < 1e-8 * scale,
                            "q={q} p={p} lambda={lambda} x={x}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn affine_dependence_three_term_basis() {
        for q in 3..=12u32 {
            let report = check_affine_dependence(q, 2.0, false).unwrap();
            if q == 11 {
                // The first denominator whose coefficients pull in higher
                // harmonics: the three-term basis genuinely fails.
                assert!(!report.passed, "q=11 unexpectedly affine: {report:?}");
                assert!(report.max_residual > 1e-6);
            } else {
                assert!(
                    report.passed,
                    "q={q}: residual {:.3e} at degree {:?}",
                    report.max_residual, report.worst_degree
                );
            }
        }
    }

    #[test]
    fn affine_dependence_full_harmonic_basis() {
        // The even harmonics span the functions of p up to the cos symmetry,
        // so the full basis absorbs every denominator, q = 11 included.
        for q in [10u32, 11, 12] {
            let report = check_affine_dependence(q, 2.0, true).unwrap();
            assert!(report.passed, "q={q}: {report:?}");
        }
    }

    #[test]
    fn projection_residual_detects_dependence() {
        let cols = vec![vec![1.0, 1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0, 4.0]];
        // In span: 3 + 2 t.
        let b = vec![5.0, 7.0, 9.0, 11.0];
        assert!(projection_residual(&cols, &b) < 1e-12);
        // Quadratic outside the span.
        let b = vec![1.0, 4.0, 9.0, 16.0];
        assert!(projection_residual(&cols, &b) > 0.5);
    }
}
